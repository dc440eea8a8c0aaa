//! Undirected graphs over at most 128 vertices with bitset adjacency, and
//! the forbidden-structure queries used to recognise packing classes.

use std::collections::{HashSet, VecDeque};
use std::ops::Add;

use num_traits::Zero;

use crate::bits::{bit, contains, full, members, VertexSet, MAX_VERTICES};
use crate::chargraph;
use crate::error::{Error, Result};

/// Default vertex cap for the exact clique search.
pub const CLIQUE_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    ids: Vec<String>,
    adj: Vec<VertexSet>,
}

impl Graph {
    /// An edgeless graph on the given vertex ids.
    pub fn new(ids: Vec<String>) -> Result<Self> {
        if ids.len() > MAX_VERTICES {
            return Err(Error::TooLarge(format!("{} vertices", ids.len())));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = ids.iter().find(|id| !seen.insert(id.as_str())) {
            return Err(Error::UnknownVertex(format!("duplicate vertex `{dup}`")));
        }
        let adj = vec![0; ids.len()];
        Ok(Self { ids, adj })
    }

    /// An edgeless graph whose vertex ids are `0..n`.
    pub fn empty(n: usize) -> Self {
        Self::new((0..n).map(|v| v.to_string()).collect()).expect("n <= 128")
    }

    /// Builds a graph from a symmetric, loop-free adjacency.
    pub(crate) fn from_adjacency(ids: Vec<String>, adj: Vec<VertexSet>) -> Self {
        debug_assert_eq!(ids.len(), adj.len());
        debug_assert!((0..adj.len()).all(|v| !contains(adj[v], v)));
        Self { ids, adj }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::empty(n);
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        Self::empty(n).complement()
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

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    /// Maps vertex indices to their ids.
    pub fn ids_of(&self, vs: &[usize]) -> Vec<String> {
        vs.iter().map(|&v| self.ids[v].clone()).collect()
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a != b, "self-loop on vertex {a}");
        self.adj[a] |= bit(b);
        self.adj[b] |= bit(a);
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) {
        self.adj[a] &= !bit(b);
        self.adj[b] &= !bit(a);
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        contains(self.adj[a], b)
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    pub fn adjacency(&self) -> &[VertexSet] {
        &self.adj
    }

    pub fn vertex_set(&self) -> VertexSet {
        full(self.len())
    }

    /// Edges as `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|a| members(self.adj[a] & !full(a + 1)).map(move |b| (a, b)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn complement(&self) -> Graph {
        let all = self.vertex_set();
        let adj = (0..self.len()).map(|v| !self.adj[v] & all & !bit(v)).collect();
        Graph { ids: self.ids.clone(), adj }
    }

    /// The subgraph induced by `set`; vertices keep their ids and relative order.
    pub fn induced(&self, set: VertexSet) -> Graph {
        let keep: Vec<usize> = members(set & self.vertex_set()).collect();
        let mut g = Graph::new(self.ids_of(&keep)).expect("ids are unique");
        for (x, &a) in keep.iter().enumerate() {
            for (y, &b) in keep.iter().enumerate().skip(x + 1) {
                if self.has_edge(a, b) {
                    g.add_edge(x, y);
                }
            }
        }
        g
    }

    pub fn induced_by_ids<S: AsRef<str>>(&self, ids: &[S]) -> Result<Graph> {
        let mut set = 0;
        for id in ids {
            let v = self
                .index_of(id.as_ref())
                .ok_or_else(|| Error::UnknownVertex(id.as_ref().to_string()))?;
            set |= bit(v);
        }
        Ok(self.induced(set))
    }

    pub fn is_clique(&self, set: VertexSet) -> bool {
        members(set).all(|v| set & !bit(v) & !self.adj[v] == 0)
    }

    pub fn is_stable(&self, set: VertexSet) -> bool {
        members(set).all(|v| self.adj[v] & set == 0)
    }

    /// An induced chordless 4-cycle `[a, b, c, e]` (in cycle order). With
    /// `touching`, only cycles using that edge are considered.
    pub fn find_induced_c4(&self, touching: Option<(usize, usize)>) -> Option<[usize; 4]> {
        match touching {
            Some((a, b)) if self.has_edge(a, b) => self.c4_through(a, b),
            Some(_) => None,
            None => self.edges().into_iter().find_map(|(a, b)| self.c4_through(a, b)),
        }
    }

    fn c4_through(&self, a: usize, b: usize) -> Option<[usize; 4]> {
        // a - b - c - e - a with ac, be missing
        let cs = self.adj[b] & !self.adj[a] & !bit(a);
        let es = self.adj[a] & !self.adj[b] & !bit(b);
        members(cs).find_map(|c| members(self.adj[c] & es).next().map(|e| [a, b, c, e]))
    }

    /// An odd closed walk `[b0, .., b(k-1)]` without 2-chords: consecutive
    /// vertices are adjacent and `b(j)`, `b(j+2)` (indices mod k) are never
    /// adjacent. Such a walk exists iff the graph has no transitive
    /// orientation. Walks may revisit vertices; the shortest one is returned,
    /// and its length is always at least 5.
    pub fn find_odd_2chordless_cycle(&self) -> Option<Vec<usize>> {
        let non_adjacent = self.complement();
        odd_2chordless_walk(&self.adj, non_adjacent.adjacency())
    }

    /// Three vertices such that every two of them are joined by a path that
    /// avoids the closed neighbourhood of the third.
    pub fn find_asteroidal_triple(&self) -> Option<[usize; 3]> {
        let n = self.len();
        // comp[z][v]: component label of v in G - N[z], or usize::MAX
        let comp: Vec<Vec<usize>> = (0..n)
            .map(|z| self.component_labels(self.vertex_set() & !self.adj[z] & !bit(z)))
            .collect();
        let same = |z: usize, x: usize, y: usize| comp[z][x] != usize::MAX && comp[z][x] == comp[z][y];
        for x in 0..n {
            for y in x + 1..n {
                if !same(x, y, y) || self.has_edge(x, y) {
                    continue;
                }
                for z in y + 1..n {
                    if same(z, x, y) && same(x, y, z) && same(y, x, z) {
                        return Some([x, y, z]);
                    }
                }
            }
        }
        None
    }

    fn component_labels(&self, within: VertexSet) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.len()];
        let mut next = 0;
        let mut left = within;
        while left != 0 {
            let start = left.trailing_zeros() as usize;
            let mut comp = bit(start);
            let mut frontier = comp;
            while frontier != 0 {
                let grow = members(frontier).fold(0, |acc, v| acc | self.adj[v]) & within & !comp;
                comp |= grow;
                frontier = grow;
            }
            for v in members(comp) {
                label[v] = next;
            }
            next += 1;
            left &= !comp;
        }
        label
    }

    /// A chordless cycle of length at least 4, if the graph has one.
    pub fn chordless_cycle(&self) -> Option<Vec<usize>> {
        let all = self.vertex_set();
        for v in 0..self.len() {
            let nv = self.adj[v];
            for a in members(nv) {
                for b in members(nv & !self.adj[a] & !full(a + 1)) {
                    // shortest a-b path avoiding N[v] except a and b
                    let allowed = all & !nv & !bit(v) | bit(a) | bit(b);
                    if let Some(path) = self.shortest_path(a, b, allowed) {
                        let mut cycle = vec![v];
                        cycle.extend(path);
                        return Some(cycle);
                    }
                }
            }
        }
        None
    }

    pub fn is_triangulated(&self) -> bool {
        self.chordless_cycle().is_none()
    }

    /// BFS path from `s` to `t` using only vertices of `allowed`.
    fn shortest_path(&self, s: usize, t: usize, allowed: VertexSet) -> Option<Vec<usize>> {
        let mut parent = vec![usize::MAX; self.len()];
        let mut seen = bit(s);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                let mut path = vec![t];
                let mut x = t;
                while x != s {
                    x = parent[x];
                    path.push(x);
                }
                path.reverse();
                return Some(path);
            }
            for w in members(self.adj[u] & allowed & !seen) {
                seen |= bit(w);
                parent[w] = u;
                queue.push_back(w);
            }
        }
        None
    }

    /// Exact maximum-weight clique by branch and bound with a greedy
    /// colouring bound. Returns the weight and the clique.
    pub fn max_weight_clique<T>(&self, weight: &[T]) -> Result<(T, VertexSet)>
    where
        T: Copy + Ord + Zero + Add<Output = T>,
    {
        self.max_weight_clique_capped(weight, CLIQUE_CAP)
    }

    pub fn max_weight_clique_capped<T>(&self, weight: &[T], cap: usize) -> Result<(T, VertexSet)>
    where
        T: Copy + Ord + Zero + Add<Output = T>,
    {
        if self.len() > cap {
            return Err(Error::TooLarge(format!(
                "clique search on {} vertices (cap {cap})",
                self.len()
            )));
        }
        assert_eq!(weight.len(), self.len(), "one weight per vertex");
        let mut search = CliqueSearch { adj: &self.adj, weight, best: (T::zero(), 0) };
        search.expand(self.vertex_set(), T::zero(), 0);
        Ok(search.best)
    }

    /// Greedy clique: heaviest vertices first. A lower bound on the optimum.
    pub fn greedy_weight_clique<T>(&self, weight: &[T]) -> (T, VertexSet)
    where
        T: Copy + Ord + Zero + Add<Output = T>,
    {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| weight[b].cmp(&weight[a]).then(a.cmp(&b)));
        let mut best = (T::zero(), 0);
        for &start in &order {
            let mut set = bit(start);
            let mut total = weight[start];
            let mut cand = self.adj[start];
            for &v in &order {
                if contains(cand, v) {
                    set |= bit(v);
                    total = total + weight[v];
                    cand &= self.adj[v];
                }
            }
            if total > best.0 {
                best = (total, set);
            }
        }
        best
    }

    /// Exact maximum-weight stable set of an interval graph, by weighted
    /// interval scheduling on an interval model of the graph.
    pub fn max_weight_stable_set_interval<T>(&self, weight: &[T]) -> Result<(T, VertexSet)>
    where
        T: Copy + Ord + Zero + Add<Output = T>,
    {
        let model = chargraph::interval_model(self).ok_or(Error::NotInterval)?;
        assert_eq!(weight.len(), self.len(), "one weight per vertex");
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&v| (model[v].1, v));
        // best[k]: optimum over the first k intervals by right endpoint
        let mut best: Vec<(T, VertexSet)> = vec![(T::zero(), 0)];
        for (k, &v) in order.iter().enumerate() {
            let (left, _) = model[v];
            let compatible = order[..k].partition_point(|&u| model[u].1 <= left);
            let take = (best[compatible].0 + weight[v], best[compatible].1 | bit(v));
            let skip = best[k];
            best.push(if take.0 > skip.0 { take } else { skip });
        }
        Ok(*best.last().expect("non-empty"))
    }
}

struct CliqueSearch<'a, T> {
    adj: &'a [VertexSet],
    weight: &'a [T],
    best: (T, VertexSet),
}

impl<T: Copy + Ord + Zero + Add<Output = T>> CliqueSearch<'_, T> {
    fn expand(&mut self, mut cand: VertexSet, cur: T, set: VertexSet) {
        if cand == 0 {
            if cur > self.best.0 || self.best.1 == 0 && set != 0 && cur == self.best.0 {
                self.best = (cur, set);
            }
            return;
        }
        // greedy colouring, heaviest first; each class is a stable set
        let mut order: Vec<usize> = members(cand).collect();
        order.sort_by(|&a, &b| self.weight[b].cmp(&self.weight[a]).then(a.cmp(&b)));
        let mut classes: Vec<(VertexSet, T)> = Vec::new();
        for v in order {
            match classes.iter_mut().find(|(c, _)| c & self.adj[v] == 0) {
                Some((c, _)) => *c |= bit(v),
                None => classes.push((bit(v), self.weight[v])),
            }
        }
        let mut prefix = Vec::with_capacity(classes.len());
        let mut acc = T::zero();
        for &(_, w) in &classes {
            acc = acc + w;
            prefix.push(acc);
        }
        for k in (0..classes.len()).rev() {
            if cur + prefix[k] <= self.best.0 && self.best.1 != 0 {
                return;
            }
            for v in members(classes[k].0) {
                self.expand(cand & self.adj[v], cur + self.weight[v], set | bit(v));
                cand &= !bit(v);
            }
        }
    }
}

/// Shortest odd closed walk along `edges` whose 2-step pairs are all
/// either equal or marked in `non_chord`. `non_chord` may be a subset of the
/// true non-adjacency, which keeps the walk a valid certificate as `edges`
/// grows (used on partially decided graphs).
pub(crate) fn odd_2chordless_walk(
    edges: &[VertexSet],
    non_chord: &[VertexSet],
) -> Option<Vec<usize>> {
    let n = edges.len();
    let arc = |x: usize, y: usize| x * n + y;
    // Decide first: union-find over the forcing classes of arcs.
    let mut uf = UnionFind::new(n * n);
    for (y, &ny) in edges.iter().enumerate() {
        for x in members(ny) {
            // x->y forces z->y and y->z' when xz, xz' are non-edges
            for z in members(ny & non_chord[x]) {
                uf.union(arc(x, y), arc(z, y));
                uf.union(arc(y, x), arc(y, z));
            }
        }
    }
    let (u, v) = (0..n)
        .flat_map(|x| members(edges[x]).map(move |y| (x, y)))
        .find(|&(x, y)| x < y && uf.find(arc(x, y)) == uf.find(arc(y, x)))?;

    // BFS over (state, parity), state (x, y) meaning the walk just stepped x -> y.
    let start = arc(u, v);
    let mut parent = vec![[usize::MAX; 2]; n * n];
    let mut queue = VecDeque::from([(start, 0usize)]);
    parent[start][0] = start;
    while let Some((s, p)) = queue.pop_front() {
        if s == start && p == 1 {
            break;
        }
        let (x, y) = (s / n, s % n);
        for z in members(edges[y] & (non_chord[x] | bit(x))) {
            let t = arc(y, z);
            if parent[t][1 - p] == usize::MAX {
                parent[t][1 - p] = s;
                queue.push_back((t, 1 - p));
            }
        }
    }
    if parent[start][1] == usize::MAX {
        return None;
    }
    let mut walk = Vec::new();
    let (mut s, mut p) = (start, 1);
    loop {
        walk.push(s / n);
        s = parent[s][p];
        p = 1 - p;
        if s == start && p == 0 {
            break;
        }
    }
    walk.reverse();
    Some(walk)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
