//! Instances, packings and their exact geometric validation.
//!
//! Sizes and coordinates are exact rationals. Each instance also carries an
//! integer image of itself: every dimension is rescaled by the least common
//! multiple of the denominators occurring in it, so the search code only
//! ever does integer arithmetic.

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::bits::MAX_VERTICES;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::packing_class::PackingClass;

pub type Rational = num_rational::Ratio<i64>;

/// A box with fixed orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxItem {
    pub id: String,
    pub size: Vec<Rational>,
    pub value: Rational,
}

impl BoxItem {
    /// A box whose value is its volume.
    pub fn new(id: impl Into<String>, size: Vec<Rational>) -> Self {
        let value = size.iter().fold(Rational::one(), |acc, w| acc * w);
        Self { id: id.into(), size, value }
    }

    pub fn with_value(mut self, value: Rational) -> Self {
        self.value = value;
        self
    }

    pub fn volume(&self) -> Rational {
        self.size.iter().fold(Rational::one(), |acc, w| acc * w)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    boxes: Vec<BoxItem>,
    container: Vec<Rational>,
    index: HashMap<String, usize>,
    scale: Vec<i64>,
    sizes: Vec<Vec<i64>>,
    capacity: Vec<i64>,
}

impl Instance {
    pub fn new(container: Vec<Rational>, boxes: Vec<BoxItem>) -> Result<Self> {
        let d = container.len();
        if d == 0 {
            return Err(Error::InvalidInstance("dimension must be at least 1".into()));
        }
        if boxes.len() > MAX_VERTICES {
            return Err(Error::TooLarge(format!(
                "{} boxes, at most {MAX_VERTICES} supported",
                boxes.len()
            )));
        }
        if let Some(i) = container.iter().position(|w| *w <= Rational::zero()) {
            return Err(Error::InvalidInstance(format!(
                "container size in dimension {i} must be positive"
            )));
        }
        let mut index = HashMap::with_capacity(boxes.len());
        for (k, b) in boxes.iter().enumerate() {
            if b.id.is_empty() {
                return Err(Error::InvalidInstance("empty box id".into()));
            }
            if index.insert(b.id.clone(), k).is_some() {
                return Err(Error::InvalidInstance(format!("duplicate box id `{}`", b.id)));
            }
            if b.size.len() != d {
                return Err(Error::DimensionMismatch {
                    id: b.id.clone(),
                    expected: d,
                    got: b.size.len(),
                });
            }
            if b.size.iter().any(|w| *w <= Rational::zero()) {
                return Err(Error::InvalidInstance(format!(
                    "box `{}` has a non-positive size",
                    b.id
                )));
            }
            if b.value < Rational::zero() {
                return Err(Error::InvalidInstance(format!(
                    "box `{}` has a negative value",
                    b.id
                )));
            }
            if let Some(i) = (0..d).find(|&i| b.size[i] > container[i]) {
                return Err(Error::OversizedBox(b.id.clone(), i));
            }
        }

        let scale: Vec<i64> = (0..d)
            .map(|i| {
                boxes
                    .iter()
                    .map(|b| *b.size[i].denom())
                    .fold(*container[i].denom(), |acc, den| acc.lcm(&den))
            })
            .collect();
        let to_int = |i: usize, r: &Rational| r.numer() * (scale[i] / r.denom());
        let sizes = boxes
            .iter()
            .map(|b| (0..d).map(|i| to_int(i, &b.size[i])).collect())
            .collect();
        let capacity = (0..d).map(|i| to_int(i, &container[i])).collect();

        Ok(Self { boxes, container, index, scale, sizes, capacity })
    }

    /// Like [`Instance::new`], but boxes that do not fit into the container
    /// on their own are removed instead of rejected. Returns the ids dropped.
    pub fn new_dropping_oversized(
        container: Vec<Rational>,
        boxes: Vec<BoxItem>,
    ) -> Result<(Self, Vec<String>)> {
        let (kept, dropped): (Vec<_>, Vec<_>) = boxes.into_iter().partition(|b| {
            b.size.len() != container.len()
                || b.size.iter().zip(&container).all(|(w, cap)| w <= cap)
        });
        let dropped = dropped.into_iter().map(|b| b.id).collect();
        Ok((Self::new(container, kept)?, dropped))
    }

    /// Integer instance with ids `b1..bn`.
    pub fn from_integers(container: &[i64], sizes: &[&[i64]]) -> Result<Self> {
        let boxes = sizes
            .iter()
            .enumerate()
            .map(|(k, s)| {
                BoxItem::new(format!("b{}", k + 1), s.iter().map(|&x| Rational::from(x)).collect())
            })
            .collect();
        Self::new(container.iter().map(|&x| Rational::from(x)).collect(), boxes)
    }

    pub fn dim(&self) -> usize {
        self.container.len()
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn boxes(&self) -> &[BoxItem] {
        &self.boxes
    }

    pub fn container(&self) -> &[Rational] {
        &self.container
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn ids(&self) -> Vec<String> {
        self.boxes.iter().map(|b| b.id.clone()).collect()
    }

    /// Size of box `b` along axis `i`, in scaled integer units.
    #[inline]
    pub fn width(&self, b: usize, i: usize) -> i64 {
        self.sizes[b][i]
    }

    /// Container width along axis `i`, in scaled integer units.
    #[inline]
    pub fn capacity(&self, i: usize) -> i64 {
        self.capacity[i]
    }

    pub fn scale(&self, i: usize) -> i64 {
        self.scale[i]
    }

    /// Converts a scaled integer coordinate on axis `i` back to a rational.
    pub fn unscale(&self, i: usize, x: i64) -> Rational {
        Rational::new(x, self.scale[i])
    }

    /// Total value of the boxes at the given indices.
    pub fn value_of(&self, members: impl IntoIterator<Item = usize>) -> Rational {
        members.into_iter().map(|b| self.boxes[b].value).sum()
    }

    pub fn total_volume(&self) -> Rational {
        self.boxes.iter().map(BoxItem::volume).sum()
    }

    pub fn container_volume(&self) -> Rational {
        self.container.iter().fold(Rational::one(), |acc, w| acc * w)
    }

    /// The sub-instance made of the given boxes, in instance order.
    pub fn subset(&self, members: impl IntoIterator<Item = usize>) -> Instance {
        let mut keep: Vec<usize> = members.into_iter().collect();
        keep.sort_unstable();
        keep.dedup();
        let boxes = keep.iter().map(|&b| self.boxes[b].clone()).collect();
        Self::new(self.container.clone(), boxes).expect("subset of a valid instance is valid")
    }

    /// Same boxes in a different container.
    pub fn with_container(&self, container: Vec<Rational>) -> Result<Instance> {
        Self::new(container, self.boxes.clone())
    }

    fn resolve(&self, id: &str) -> Result<usize> {
        self.index_of(id).ok_or_else(|| Error::UnknownBox(id.to_string()))
    }

    fn check_dim(&self, i: usize) -> Result<()> {
        if i < self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionOutOfRange(i, self.dim()))
        }
    }
}

/// Lower-left corner coordinates of the packed boxes. Boxes absent from the
/// map are not packed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Packing {
    pub positions: BTreeMap<String, Vec<Rational>>,
}

impl Packing {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn place(&mut self, id: impl Into<String>, corner: Vec<Rational>) {
        self.positions.insert(id.into(), corner);
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&[Rational]> {
        self.positions.get(id).map(Vec::as_slice)
    }

    /// Packed boxes as `(instance index, corner)`, in instance order.
    fn resolved<'a>(&'a self, inst: &Instance) -> Result<Vec<(usize, &'a [Rational])>> {
        let mut out = Vec::with_capacity(self.positions.len());
        for (id, p) in &self.positions {
            let b = inst.resolve(id)?;
            if p.len() != inst.dim() {
                return Err(Error::DimensionMismatch {
                    id: id.clone(),
                    expected: inst.dim(),
                    got: p.len(),
                });
            }
            out.push((b, p.as_slice()));
        }
        out.sort_by_key(|&(b, _)| b);
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// The box leaves the container (or starts below zero) along an axis.
    Closedness { id: String, dim: usize },
    Overlap(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

fn intervals_meet(p: Rational, w: Rational, q: Rational, v: Rational) -> bool {
    p < q + v && q < p + w
}

pub fn validate_packing(p: &Packing, inst: &Instance) -> Result<ValidationReport> {
    let placed = p.resolved(inst)?;
    let d = inst.dim();
    let mut violations = Vec::new();
    for &(b, pos) in &placed {
        let size = &inst.boxes[b].size;
        for i in 0..d {
            if pos[i] < Rational::zero() || pos[i] + size[i] > inst.container[i] {
                violations.push(Violation::Closedness { id: inst.boxes[b].id.clone(), dim: i });
            }
        }
    }
    for (k, &(b, pb)) in placed.iter().enumerate() {
        for &(c, pc) in &placed[k + 1..] {
            let (wb, wc) = (&inst.boxes[b].size, &inst.boxes[c].size);
            if (0..d).all(|i| intervals_meet(pb[i], wb[i], pc[i], wc[i])) {
                violations.push(Violation::Overlap(
                    inst.boxes[b].id.clone(),
                    inst.boxes[c].id.clone(),
                ));
            }
        }
    }
    Ok(ValidationReport { valid: violations.is_empty(), violations })
}

/// Whether the boxes in `set` can be lined up along axis `i`.
pub fn xi_feasible<S: AsRef<str>>(set: &[S], i: usize, inst: &Instance) -> Result<bool> {
    inst.check_dim(i)?;
    let mut total = 0i64;
    for id in set {
        total += inst.width(inst.resolve(id.as_ref())?, i);
    }
    Ok(total <= inst.capacity(i))
}

/// The packing class induced by a packing: `{b, c}` is an edge of the
/// `i`-th graph iff the projections of `b` and `c` on axis `i` overlap.
/// Only packed boxes become vertices.
pub fn project_to_class(p: &Packing, inst: &Instance) -> Result<PackingClass> {
    if !validate_packing(p, inst)?.valid {
        return Err(Error::InvalidPacking);
    }
    let placed = p.resolved(inst)?;
    let ids: Vec<String> = placed.iter().map(|&(b, _)| inst.boxes[b].id.clone()).collect();
    let graphs = (0..inst.dim())
        .map(|i| {
            let mut g = Graph::new(ids.clone()).expect("ids are unique");
            for (x, &(b, pb)) in placed.iter().enumerate() {
                for (y, &(c, pc)) in placed.iter().enumerate().skip(x + 1) {
                    let (wb, wc) = (inst.boxes[b].size[i], inst.boxes[c].size[i]);
                    if intervals_meet(pb[i], wb, pc[i], wc) {
                        g.add_edge(x, y);
                    }
                }
            }
            g
        })
        .collect();
    Ok(PackingClass::new(graphs))
}

pub fn is_gapless(p: &Packing, inst: &Instance) -> Result<bool> {
    if !validate_packing(p, inst)?.valid {
        return Err(Error::InvalidPacking);
    }
    let placed = p.resolved(inst)?;
    Ok((0..inst.dim()).all(|i| {
        placed.iter().all(|&(_, pv)| {
            pv[i].is_zero()
                || placed
                    .iter()
                    .any(|&(u, pu)| pv[i] == pu[i] + inst.boxes[u].size[i])
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: i64) -> Rational {
        Rational::from(x)
    }

    fn packing(entries: &[(&str, &[i64])]) -> Packing {
        let mut p = Packing::new();
        for (id, pos) in entries {
            p.place(*id, pos.iter().map(|&x| r(x)).collect());
        }
        p
    }

    #[test]
    fn single_box_at_origin_is_valid() {
        let inst = Instance::from_integers(&[1, 1], &[&[1, 1]]).unwrap();
        let report = validate_packing(&packing(&[("b1", &[0, 0])]), &inst).unwrap();
        assert!(report.valid);
        assert!(report.violations.is_empty());
    }

    #[test]
    fn overlapping_pair_is_reported() {
        let inst = Instance::from_integers(&[3, 3], &[&[2, 2], &[2, 2]]).unwrap();
        let report =
            validate_packing(&packing(&[("b1", &[0, 0]), ("b2", &[1, 1])]), &inst).unwrap();
        assert!(!report.valid);
        assert_eq!(report.violations, vec![Violation::Overlap("b1".into(), "b2".into())]);
    }

    #[test]
    fn touching_boxes_do_not_overlap() {
        let inst = Instance::from_integers(&[2, 2], &[&[1, 2], &[1, 2]]).unwrap();
        let report =
            validate_packing(&packing(&[("b1", &[0, 0]), ("b2", &[1, 0])]), &inst).unwrap();
        assert!(report.valid);
    }

    #[test]
    fn closedness_violation() {
        let inst = Instance::from_integers(&[3, 3], &[&[2, 2]]).unwrap();
        let report = validate_packing(&packing(&[("b1", &[2, 0])]), &inst).unwrap();
        assert_eq!(
            report.violations,
            vec![Violation::Closedness { id: "b1".into(), dim: 0 }]
        );
    }

    #[test]
    fn validation_errors() {
        let inst = Instance::from_integers(&[3, 3], &[&[2, 2]]).unwrap();
        assert_eq!(
            validate_packing(&packing(&[("zz", &[0, 0])]), &inst),
            Err(Error::UnknownBox("zz".into()))
        );
        assert!(matches!(
            validate_packing(&packing(&[("b1", &[0, 0, 0])]), &inst),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rational_sizes_are_scaled_exactly() {
        let half = Rational::new(1, 2);
        let third = Rational::new(1, 3);
        let inst = Instance::new(
            vec![r(1), r(1)],
            vec![
                BoxItem::new("a", vec![half, third]),
                BoxItem::new("b", vec![half, Rational::new(2, 3)]),
            ],
        )
        .unwrap();
        assert_eq!(inst.scale(0), 2);
        assert_eq!(inst.scale(1), 3);
        assert_eq!(inst.width(1, 1), 2);
        assert_eq!(inst.capacity(1), 3);
        assert_eq!(inst.unscale(1, 2), Rational::new(2, 3));
        let mut p = Packing::new();
        p.place("a", vec![r(0), r(0)]);
        p.place("b", vec![r(0), third]);
        assert!(validate_packing(&p, &inst).unwrap().valid);
    }

    #[test]
    fn instance_invariants_are_enforced() {
        assert!(matches!(
            Instance::from_integers(&[2, 2], &[&[3, 1]]),
            Err(Error::OversizedBox(id, 0)) if id == "b1"
        ));
        assert!(Instance::from_integers(&[], &[]).is_err());
        assert!(Instance::from_integers(&[2, 2], &[&[0, 1]]).is_err());
        let dup = Instance::new(
            vec![r(2)],
            vec![BoxItem::new("a", vec![r(1)]), BoxItem::new("a", vec![r(1)])],
        );
        assert!(matches!(dup, Err(Error::InvalidInstance(_))));
        let (inst, dropped) = Instance::new_dropping_oversized(
            vec![r(2), r(2)],
            vec![BoxItem::new("a", vec![r(1), r(1)]), BoxItem::new("big", vec![r(3), r(1)])],
        )
        .unwrap();
        assert_eq!(inst.len(), 1);
        assert_eq!(dropped, vec!["big".to_string()]);
    }

    #[test]
    fn xi_feasibility() {
        let inst = crate::fixtures::five_boxes();
        let none: [&str; 0] = [];
        assert!(xi_feasible(&none, 0, &inst).unwrap());
        assert!(!xi_feasible(&["b1", "b2"], 0, &inst).unwrap());
        assert!(xi_feasible(&["b1", "b2"], 1, &inst).unwrap());
        assert_eq!(xi_feasible(&["b1"], 2, &inst), Err(Error::DimensionOutOfRange(2, 2)));
        assert_eq!(xi_feasible(&["nope"], 0, &inst), Err(Error::UnknownBox("nope".into())));
    }

    #[test]
    fn projection_of_stacked_pair() {
        let inst = Instance::from_integers(&[2, 2], &[&[2, 1], &[2, 1]]).unwrap();
        let class = project_to_class(&packing(&[("b1", &[0, 0]), ("b2", &[0, 1])]), &inst).unwrap();
        assert_eq!(class.graph(0).edges(), vec![(0, 1)]);
        assert!(class.graph(1).edges().is_empty());

        let single = Instance::from_integers(&[2, 2], &[&[2, 1]]).unwrap();
        let class = project_to_class(&packing(&[("b1", &[0, 0])]), &single).unwrap();
        assert!(class.graphs().iter().all(|g| g.edges().is_empty()));

        let bad = packing(&[("b1", &[0, 0]), ("b2", &[0, 0])]);
        assert_eq!(project_to_class(&bad, &inst), Err(Error::InvalidPacking));
    }

    #[test]
    fn gaplessness() {
        let inst = Instance::from_integers(&[1, 1], &[&[1, 1]]).unwrap();
        assert!(is_gapless(&packing(&[("b1", &[0, 0])]), &inst).unwrap());
        let inst = Instance::from_integers(&[3, 3], &[&[1, 1]]).unwrap();
        assert!(!is_gapless(&packing(&[("b1", &[0, 1])]), &inst).unwrap());
        let inst = Instance::from_integers(&[3, 3], &[&[1, 1], &[1, 1]]).unwrap();
        assert!(is_gapless(&packing(&[("b1", &[0, 0]), ("b2", &[1, 1])]), &inst).unwrap());
        assert!(!is_gapless(&packing(&[("b1", &[0, 0]), ("b2", &[2, 1])]), &inst).unwrap());
    }
}
