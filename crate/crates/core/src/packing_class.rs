//! Packing classes: d interval graphs over the boxes with P1-P3, their
//! transitive orientations, and the gapless packing every orientation
//! induces.

use crate::bits::{bit, full, members, VertexSet, MAX_VERTICES};
use crate::chargraph::{self, Dag, IntervalWitness};
use crate::error::{Error, Result};
use crate::graph::{Graph, CLIQUE_CAP};
use crate::model::{Instance, Packing};

/// One overlap graph per axis over a common vertex list of box ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingClass {
    graphs: Vec<Graph>,
}

impl PackingClass {
    pub fn new(graphs: Vec<Graph>) -> Self {
        Self { graphs }
    }

    /// Builds the class over all boxes of `inst` from explicit edge lists.
    pub fn from_edge_lists<S: AsRef<str>>(inst: &Instance, edges: &[Vec<(S, S)>]) -> Result<Self> {
        let graphs = edges
            .iter()
            .map(|list| {
                let mut g = Graph::new(inst.ids())?;
                for (a, b) in list {
                    let find = |id: &S| {
                        g.index_of(id.as_ref())
                            .ok_or_else(|| Error::UnknownVertex(id.as_ref().to_string()))
                    };
                    let (x, y) = (find(a)?, find(b)?);
                    if x == y {
                        return Err(Error::UnknownVertex(format!("self-loop on `{}`", a.as_ref())));
                    }
                    g.add_edge(x, y);
                }
                Ok(g)
            })
            .collect::<Result<_>>()?;
        Ok(Self { graphs })
    }

    pub fn dim(&self) -> usize {
        self.graphs.len()
    }

    pub fn graph(&self, i: usize) -> &Graph {
        &self.graphs[i]
    }

    pub fn graphs(&self) -> &[Graph] {
        &self.graphs
    }

    pub fn ids(&self) -> &[String] {
        self.graphs.first().map(Graph::ids).unwrap_or(&[])
    }

    /// Edge lists by id, one per axis.
    pub fn edge_lists(&self) -> Vec<Vec<(String, String)>> {
        self.graphs
            .iter()
            .map(|g| {
                g.edges()
                    .into_iter()
                    .map(|(a, b)| (g.id(a).to_string(), g.id(b).to_string()))
                    .collect()
            })
            .collect()
    }

    /// Instance index of every vertex; checks the graphs agree on vertices.
    fn box_indices(&self, inst: &Instance) -> Result<Vec<usize>> {
        if self.dim() != inst.dim() {
            return Err(Error::DimensionOutOfRange(self.dim(), inst.dim()));
        }
        let ids = self.ids();
        if let Some(g) = self.graphs.iter().find(|g| g.ids() != ids) {
            return Err(Error::UnknownVertex(format!(
                "graphs disagree on vertices: {:?} vs {:?}",
                g.ids(),
                ids
            )));
        }
        ids.iter()
            .map(|id| inst.index_of(id).ok_or_else(|| Error::UnknownVertex(id.clone())))
            .collect()
    }
}

/// Per-axis transitive orientations of the complements of a packing class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Orientation {
    pub dags: Vec<Dag>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxisReport {
    /// Set when P1 fails on this axis.
    pub interval_witness: Option<IntervalWitness>,
    /// Set when P2 fails: a stable set too wide for the container (ids).
    pub overweight_stable_set: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassReport {
    pub axes: Vec<AxisReport>,
    /// Set when P3 fails: an edge present on every axis.
    pub shared_edge: Option<(String, String)>,
}

impl ClassReport {
    pub fn p1_ok(&self, i: usize) -> bool {
        self.axes[i].interval_witness.is_none()
    }

    pub fn p2_ok(&self, i: usize) -> bool {
        self.axes[i].overweight_stable_set.is_none()
    }

    pub fn p3_ok(&self) -> bool {
        self.shared_edge.is_none()
    }

    pub fn all_ok(&self) -> bool {
        self.p3_ok() && (0..self.axes.len()).all(|i| self.p1_ok(i) && self.p2_ok(i))
    }
}

pub fn verify_packing_class(class: &PackingClass, inst: &Instance) -> Result<ClassReport> {
    let boxes = class.box_indices(inst)?;
    let n = boxes.len();
    let axes = class
        .graphs
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let widths: Vec<i64> = boxes.iter().map(|&b| inst.width(b, i)).collect();
            let interval_witness = chargraph::interval_obstruction(g);
            let heaviest = if interval_witness.is_none() {
                Some(g.max_weight_stable_set_interval(&widths).expect("P1 holds"))
            } else {
                let co = g.complement();
                co.max_weight_clique_capped(&widths, CLIQUE_CAP)
                    .ok()
                    .or_else(|| Some(co.greedy_weight_clique(&widths)))
            };
            let overweight_stable_set = heaviest
                .filter(|&(w, _)| w > inst.capacity(i))
                .map(|(_, set)| g.ids_of(&members(set).collect::<Vec<_>>()));
            AxisReport { interval_witness, overweight_stable_set }
        })
        .collect();

    let mut shared_edge = None;
    'outer: for a in 0..n {
        let common = class
            .graphs
            .iter()
            .fold(full(n) & !full(a + 1), |acc, g| acc & g.neighbors(a));
        if let Some(b) = members(common).next() {
            shared_edge = Some((class.ids()[a].clone(), class.ids()[b].clone()));
            break 'outer;
        }
    }
    Ok(ClassReport { axes, shared_edge })
}

/// Orients the complement of every axis graph (deterministic).
pub fn orient_class(class: &PackingClass, inst: &Instance) -> Result<Orientation> {
    if !verify_packing_class(class, inst)?.all_ok() {
        return Err(Error::NotPackingClass);
    }
    let dags = class
        .graphs
        .iter()
        .map(|g| {
            chargraph::transitive_orientation(&g.complement())
                .expect("complement of an interval graph is a comparability graph")
        })
        .collect();
    Ok(Orientation { dags })
}

/// The packing of an orientation: on each axis a box starts where the
/// longest weighted chain of its predecessors ends.
pub fn extract_packing(f: &Orientation, inst: &Instance) -> Result<Packing> {
    let Some(first) = f.dags.first() else {
        return Ok(Packing::new());
    };
    if f.dags.len() != inst.dim() {
        return Err(Error::DimensionOutOfRange(f.dags.len(), inst.dim()));
    }
    let boxes: Vec<usize> = first
        .ids()
        .iter()
        .map(|id| inst.index_of(id).ok_or_else(|| Error::UnknownBox(id.clone())))
        .collect::<Result<_>>()?;
    let n = boxes.len();
    let mut coords = vec![vec![0i64; inst.dim()]; n];
    for (i, dag) in f.dags.iter().enumerate() {
        if dag.ids() != first.ids() {
            return Err(Error::UnknownVertex("orientations disagree on vertices".into()));
        }
        let order = dag.topological_order().ok_or(Error::CyclicOrientation)?;
        for v in order {
            for w in members(dag.successors(v)) {
                let end = coords[v][i] + inst.width(boxes[v], i);
                coords[w][i] = coords[w][i].max(end);
            }
        }
    }
    let mut packing = Packing::new();
    for (v, &b) in boxes.iter().enumerate() {
        let corner = (0..inst.dim()).map(|i| inst.unscale(i, coords[v][i])).collect();
        packing.place(inst.boxes()[b].id.clone(), corner);
    }
    Ok(packing)
}

/// Whether `G_i[S]` has a clique of at least `ceil(w_i(S) / W_i)` vertices.
pub fn clique_bound_holds<S: AsRef<str>>(
    class: &PackingClass,
    set: &[S],
    i: usize,
    inst: &Instance,
) -> Result<bool> {
    if i >= class.dim() {
        return Err(Error::DimensionOutOfRange(i, class.dim()));
    }
    let g = class.graph(i);
    let mut vs: VertexSet = 0;
    let mut total = 0i64;
    for id in set {
        let v = g.index_of(id.as_ref()).ok_or_else(|| Error::UnknownVertex(id.as_ref().into()))?;
        if vs & bit(v) == 0 {
            vs |= bit(v);
            total += inst.width(inst.index_of(id.as_ref()).ok_or_else(|| Error::UnknownBox(id.as_ref().into()))?, i);
        }
    }
    let need = (total + inst.capacity(i) - 1) / inst.capacity(i);
    let sub = g.induced(vs);
    let (size, _) = sub.max_weight_clique_capped(&vec![1i64; sub.len()], MAX_VERTICES)?;
    Ok(size >= need)
}
