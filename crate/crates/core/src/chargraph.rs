//! Interval-graph recognition and transitive orientation of comparability
//! graphs.

use std::collections::VecDeque;

use crate::bits::{bit, contains, members, VertexSet};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Edge-count limit for exhaustive orientation enumeration.
pub const ENUMERATION_EDGE_CAP: usize = 30;

/// A directed graph given by out-neighbourhoods.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dag {
    ids: Vec<String>,
    out: Vec<VertexSet>,
}

impl Dag {
    pub fn new(ids: Vec<String>) -> Self {
        let n = ids.len();
        Self { ids, out: vec![0; n] }
    }

    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Self {
        let mut dag = Self::new((0..n).map(|v| v.to_string()).collect());
        for &(a, b) in arcs {
            dag.add_arc(a, b);
        }
        dag
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn add_arc(&mut self, a: usize, b: usize) {
        self.out[a] |= bit(b);
    }

    pub fn has_arc(&self, a: usize, b: usize) -> bool {
        contains(self.out[a], b)
    }

    pub fn successors(&self, v: usize) -> VertexSet {
        self.out[v]
    }

    pub fn predecessors(&self, v: usize) -> VertexSet {
        (0..self.len()).filter(|&u| self.has_arc(u, v)).fold(0, |acc, u| acc | bit(u))
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.len()).flat_map(|a| members(self.out[a]).map(move |b| (a, b))).collect()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(|s| s.count_ones() as usize).sum()
    }

    /// Kahn order, smallest index first among ready vertices; `None` on a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.len();
        let mut indeg: Vec<u32> = (0..n).map(|v| self.predecessors(v).count_ones()).collect();
        let mut ready: VertexSet = (0..n).filter(|&v| indeg[v] == 0).fold(0, |a, v| a | bit(v));
        let mut order = Vec::with_capacity(n);
        while ready != 0 {
            let v = ready.trailing_zeros() as usize;
            ready &= !bit(v);
            order.push(v);
            for w in members(self.out[v]) {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready |= bit(w);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Whether this is a transitive orientation of `g`: every edge oriented
    /// exactly once, no arcs outside `g`, and closed under composition.
    pub fn is_transitive_orientation_of(&self, g: &Graph) -> bool {
        if self.len() != g.len() {
            return false;
        }
        for v in 0..self.len() {
            let ins = self.predecessors(v);
            if self.out[v] | ins != g.neighbors(v) || self.out[v] & ins != 0 {
                return false;
            }
            // u -> v -> w implies u -> w
            if members(ins).any(|u| self.out[v] & !self.out[u] != 0) {
                return false;
            }
        }
        true
    }
}

/// Why a graph is not an interval graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntervalWitness {
    /// Chordless cycle of length at least 4, in cycle order.
    ChordlessCycle(Vec<usize>),
    AsteroidalTriple([usize; 3]),
}

/// `None` iff `g` is an interval graph (triangulated and free of
/// asteroidal triples); otherwise a checkable obstruction.
pub fn interval_obstruction(g: &Graph) -> Option<IntervalWitness> {
    if let Some(cycle) = g.chordless_cycle() {
        return Some(IntervalWitness::ChordlessCycle(cycle));
    }
    g.find_asteroidal_triple().map(IntervalWitness::AsteroidalTriple)
}

pub fn is_interval_graph(g: &Graph) -> bool {
    interval_obstruction(g).is_none()
}

/// Failure of [`transitive_orientation`]. The certificate is an odd
/// 2-chordless closed walk when the definitional search finds one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotComparability {
    pub certificate: Option<Vec<usize>>,
}

/// Transitive orientation by successive implication classes: pick the
/// lexicographically smallest unoriented edge `a < b`, orient it `a -> b`,
/// orient its whole implication class in the remaining graph, delete that
/// class, repeat.
pub fn transitive_orientation(g: &Graph) -> std::result::Result<Dag, NotComparability> {
    let n = g.len();
    let mut rest: Vec<VertexSet> = g.adjacency().to_vec();
    let mut dag = Dag::new(g.ids().to_vec());
    let fail = || NotComparability { certificate: g.find_odd_2chordless_cycle() };

    while let Some(a) = (0..n).find(|&v| rest[v] != 0) {
        let b = rest[a].trailing_zeros() as usize;
        let mut class: Vec<VertexSet> = vec![0; n];
        class[a] |= bit(b);
        let mut queue = VecDeque::from([(a, b)]);
        while let Some((x, y)) = queue.pop_front() {
            // x -> y forces x -> z for z not adjacent to y, and z -> y for z
            // not adjacent to x (adjacency in the remaining graph)
            let tails = rest[x] & !rest[y] & !bit(y);
            let heads = rest[y] & !rest[x] & !bit(x);
            let forced = members(tails)
                .map(|z| (x, z))
                .chain(members(heads).map(|z| (z, y)))
                .collect::<Vec<_>>();
            for (p, q) in forced {
                if contains(class[q], p) {
                    return Err(fail());
                }
                if !contains(class[p], q) {
                    class[p] |= bit(q);
                    queue.push_back((p, q));
                }
            }
        }
        for p in 0..n {
            for q in members(class[p]) {
                dag.add_arc(p, q);
                rest[p] &= !bit(q);
                rest[q] &= !bit(p);
            }
        }
    }

    if dag.is_transitive_orientation_of(g) {
        Ok(dag)
    } else {
        Err(fail())
    }
}

pub fn is_comparability_graph(g: &Graph) -> bool {
    transitive_orientation(g).is_ok()
}

/// Result of exhaustive orientation enumeration.
#[derive(Debug, Clone)]
pub struct Orientations {
    /// At most `cap` orientations, in discovery order.
    pub dags: Vec<Dag>,
    /// Exact number of transitive orientations.
    pub total: u64,
}

/// All transitive orientations of `g`, by backtracking over edge directions
/// with forcing propagation.
pub fn enumerate_transitive_orientations(g: &Graph, cap: usize) -> Result<Orientations> {
    let edges = g.edges();
    if edges.len() > ENUMERATION_EDGE_CAP {
        return Err(Error::TooLarge(format!(
            "{} edges (cap {ENUMERATION_EDGE_CAP})",
            edges.len()
        )));
    }
    let mut out = Orientations { dags: Vec::new(), total: 0 };
    let start = Dag::new(g.ids().to_vec());
    enumerate_from(g, &edges, start, cap, &mut out);
    Ok(out)
}

fn enumerate_from(g: &Graph, edges: &[(usize, usize)], dag: Dag, cap: usize, out: &mut Orientations) {
    let Some(&(a, b)) = edges.iter().find(|&&(a, b)| !dag.has_arc(a, b) && !dag.has_arc(b, a))
    else {
        debug_assert!(dag.is_transitive_orientation_of(g));
        out.total += 1;
        if out.dags.len() < cap {
            out.dags.push(dag);
        }
        return;
    };
    for (x, y) in [(a, b), (b, a)] {
        let mut next = dag.clone();
        if orient_and_propagate(g, &mut next, x, y) {
            enumerate_from(g, edges, next, cap, out);
        }
    }
}

/// Adds `x -> y` and everything it forces. `false` on contradiction.
fn orient_and_propagate(g: &Graph, dag: &mut Dag, x: usize, y: usize) -> bool {
    let mut queue = VecDeque::from([(x, y)]);
    while let Some((p, q)) = queue.pop_front() {
        if dag.has_arc(q, p) {
            return false;
        }
        if dag.has_arc(p, q) {
            continue;
        }
        dag.add_arc(p, q);
        let (np, nq) = (g.neighbors(p), g.neighbors(q));
        // forcing: p -> z when z ~ p, z !~ q; z -> q when z ~ q, z !~ p
        for z in members(np & !nq & !bit(q)) {
            queue.push_back((p, z));
        }
        for z in members(nq & !np & !bit(p)) {
            queue.push_back((z, q));
        }
        // transitivity with arcs already present
        for z in members(dag.successors(q)) {
            if !g.has_edge(p, z) {
                return false;
            }
            queue.push_back((p, z));
        }
        for z in members(dag.predecessors(p)) {
            if !g.has_edge(z, q) {
                return false;
            }
            queue.push_back((z, q));
        }
    }
    true
}

/// Half-open integer intervals `[l, r)` whose intersection graph is `g`,
/// or `None` when `g` is not an interval graph.
///
/// A transitive orientation of the complement of a C4-free graph is an
/// interval order, so the predecessor sets are totally ordered by inclusion;
/// a vertex starts at the rank of its predecessor set and ends at the first
/// rank whose set contains it.
pub fn interval_model(g: &Graph) -> Option<Vec<(usize, usize)>> {
    let order = transitive_orientation(&g.complement()).ok()?;
    let n = g.len();
    let preds: Vec<VertexSet> = (0..n).map(|v| order.predecessors(v)).collect();
    let mut chain: Vec<VertexSet> = preds.clone();
    chain.sort_by_key(|s| s.count_ones());
    chain.dedup();
    if chain.windows(2).any(|w| w[0] & !w[1] != 0) {
        return None;
    }
    let model: Vec<(usize, usize)> = (0..n)
        .map(|v| {
            let left = chain.iter().position(|&s| s == preds[v]).expect("present");
            let right = chain.iter().position(|&s| contains(s, v)).unwrap_or(chain.len());
            (left, right)
        })
        .collect();
    let faithful = (0..n).all(|u| {
        (u + 1..n).all(|v| {
            let meet = model[u].0 < model[v].1 && model[v].0 < model[u].1;
            meet == g.has_edge(u, v)
        })
    });
    faithful.then_some(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::*;
    use proptest::prelude::*;

    #[test]
    fn interval_recognition_examples() {
        match interval_obstruction(&cycle(4)) {
            Some(IntervalWitness::ChordlessCycle(c)) => assert!(is_chordless_cycle(&cycle(4), &c)),
            other => panic!("expected a cycle witness, got {other:?}"),
        }
        for n in 0..7 {
            assert!(is_interval_graph(&Graph::complete(n)));
        }
        // unit-interval chain: a path
        let path = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        assert!(is_interval_graph(&path));
        assert_eq!(
            interval_obstruction(&long_claw()),
            Some(IntervalWitness::AsteroidalTriple([2, 4, 6]))
        );
    }

    #[test]
    fn path_orientation() {
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let dag = transitive_orientation(&path).unwrap();
        assert!(dag.is_transitive_orientation_of(&path));
        // deterministic tie-break: 0 -> 1, hence 2 -> 1
        assert_eq!(dag.arcs(), vec![(0, 1), (2, 1)]);
    }

    #[test]
    fn odd_cycle_is_not_comparability() {
        let err = transitive_orientation(&cycle(5)).unwrap_err();
        assert!(is_odd_2chordless_walk(&cycle(5), err.certificate.as_ref().unwrap()));
    }

    #[test]
    fn orientation_counts() {
        let edge = Graph::from_edges(2, &[(0, 1)]);
        assert_eq!(enumerate_transitive_orientations(&edge, 10).unwrap().total, 2);
        let tri = Graph::complete(3);
        let all = enumerate_transitive_orientations(&tri, 10).unwrap();
        assert_eq!(all.total, 6);
        assert_eq!(all.dags.len(), 6);
        assert!(all.dags.iter().all(|d| d.is_transitive_orientation_of(&tri)));
        let capped = enumerate_transitive_orientations(&tri, 2).unwrap();
        assert_eq!((capped.total, capped.dags.len()), (6, 2));
        assert_eq!(enumerate_transitive_orientations(&cycle(5), 10).unwrap().total, 0);
        assert!(matches!(
            enumerate_transitive_orientations(&Graph::complete(9), 1),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn interval_model_reproduces_graph() {
        let g = interval_graph(&[(0, 3), (2, 5), (4, 6), (1, 2)]);
        let model = interval_model(&g).unwrap();
        let back = interval_graph(
            &model.iter().map(|&(l, r)| (l as i64, r as i64)).collect::<Vec<_>>(),
        );
        assert_eq!(back.edges(), g.edges());
        assert_eq!(interval_model(&cycle(4)), None);
        assert_eq!(interval_model(&long_claw()), None);
    }

    proptest! {
        #[test]
        fn orientations_are_verified(g in graph_strategy(8)) {
            match transitive_orientation(&g) {
                Ok(dag) => {
                    prop_assert!(dag.is_acyclic());
                    prop_assert!(dag.is_transitive_orientation_of(&g));
                    prop_assert!(g.find_odd_2chordless_cycle().is_none());
                }
                Err(e) => {
                    let walk = e.certificate.expect("certificate");
                    prop_assert!(is_odd_2chordless_walk(&g, &walk));
                }
            }
        }

        #[test]
        fn interval_graphs_are_cocomparability(g in interval_graph_strategy(9)) {
            prop_assert!(is_interval_graph(&g));
            prop_assert!(transitive_orientation(&g.complement()).is_ok());
            prop_assert!(interval_model(&g).is_some());
        }

        #[test]
        fn enumeration_contains_the_constructed_orientation(g in graph_strategy(6)) {
            if let Ok(dag) = transitive_orientation(&g) {
                let all = enumerate_transitive_orientations(&g, usize::MAX).unwrap();
                prop_assert_eq!(all.total as usize, all.dags.len());
                prop_assert!(all.dags.contains(&dag));
                let unique: std::collections::HashSet<_> = all.dags.iter().collect();
                prop_assert_eq!(unique.len(), all.dags.len());
                prop_assert!(all.dags.iter().all(|d| d.is_transitive_orientation_of(&g)));
            }
        }

        #[test]
        fn interval_model_iff_recognised(g in graph_strategy(7)) {
            prop_assert_eq!(interval_model(&g).is_some(), is_interval_graph(&g));
        }
    }
}
