//! The orthogonal packing decision: branch and bound over included (E+)
//! and excluded (E-) edges of every axis graph, with propagation and
//! forbidden-substructure pruning.

use std::collections::{BTreeMap, VecDeque};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::bits::{bit, contains, full, members, VertexSet};
use crate::graph::{odd_2chordless_walk, Graph, CLIQUE_CAP};
use crate::model::{project_to_class, validate_packing, Instance, Packing};
use crate::packing_class::{extract_packing, orient_class, verify_packing_class, PackingClass};

/// Expensive pruning rules run after this many branching decisions.
pub const CHECK_INTERVAL: usize = 8;

#[derive(Debug, Clone)]
pub struct Limits {
    pub max_nodes: u64,
    pub time_limit: Duration,
    /// Cooperative cancellation; once set, the search stops with
    /// `ResourceLimit`.
    pub stop: Option<Arc<AtomicBool>>,
    /// Try the placement heuristic and the volume screen before searching.
    pub shortcuts: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_nodes: 10_000_000,
            time_limit: Duration::from_secs(60),
            stop: None,
            shortcuts: true,
        }
    }
}

impl Limits {
    pub fn with_time_limit(mut self, t: Duration) -> Self {
        self.time_limit = t;
        self
    }

    pub fn with_max_nodes(mut self, n: u64) -> Self {
        self.max_nodes = n;
        self
    }

    /// Pure branch and bound, without heuristic or screening.
    pub fn search_only(mut self) -> Self {
        self.shortcuts = false;
        self
    }

    fn stopped(&self) -> bool {
        self.stop.as_ref().is_some_and(|s| s.load(Ordering::Acquire))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Include,
    Exclude,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Include => Sign::Exclude,
            Sign::Exclude => Sign::Include,
        }
    }
}

/// Fixing pair `(a, b)`, `a < b`, on axis `dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Decision {
    pub dim: usize,
    pub pair: (usize, usize),
    pub sign: Sign,
}

impl Decision {
    pub fn new(dim: usize, a: usize, b: usize, sign: Sign) -> Self {
        Self { dim, pair: (a.min(b), a.max(b)), sign }
    }
}

/// Why a search node is dead. Every variant carries what is needed to
/// re-check it against the state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PruneReason {
    /// A pair would have to be both included and excluded on an axis.
    Contradiction(Decision),
    /// A pair is included on every axis.
    SharedEdge((usize, usize)),
    /// Four included edges forming a cycle whose diagonals are excluded.
    InducedC4 { dim: usize, cycle: [usize; 4] },
    /// Odd closed walk of excluded pairs whose 2-step pairs are included
    /// (or equal); the final complement graph cannot be oriented.
    OddCycle { dim: usize, walk: Vec<usize> },
    /// Pairwise excluded boxes too wide to line up on the axis.
    InfeasibleClique { dim: usize, clique: Vec<usize> },
    /// Even including every undecided pair, the largest clique of the axis
    /// graph is below `ceil(total width / container width)`.
    CliqueBound { dim: usize, max_clique: i64, needed: i64 },
    /// Fully decided, but the included edges fail verification.
    LeafRejected,
}

impl PruneReason {
    pub fn rule(&self) -> &'static str {
        match self {
            PruneReason::Contradiction(_) => "contradiction",
            PruneReason::SharedEdge(_) => "p3",
            PruneReason::InducedC4 { .. } => "c4",
            PruneReason::OddCycle { .. } => "odd_cycle",
            PruneReason::InfeasibleClique { .. } => "infeasible_clique",
            PruneReason::CliqueBound { .. } => "clique_bound",
            PruneReason::LeafRejected => "leaf",
        }
    }
}

/// A partial assignment of every box pair on every axis.
#[derive(Debug, Clone)]
pub struct EdgeState<'a> {
    inst: &'a Instance,
    plus: Vec<Vec<VertexSet>>,
    minus: Vec<Vec<VertexSet>>,
    trail: Vec<Decision>,
    since_check: usize,
}

impl<'a> EdgeState<'a> {
    /// Nothing decided, no propagation applied.
    pub fn blank(inst: &'a Instance) -> Self {
        let (d, n) = (inst.dim(), inst.len());
        Self {
            inst,
            plus: vec![vec![0; n]; d],
            minus: vec![vec![0; n]; d],
            trail: Vec::new(),
            since_check: 0,
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    pub fn status(&self, dim: usize, a: usize, b: usize) -> Option<Sign> {
        if contains(self.plus[dim][a], b) {
            Some(Sign::Include)
        } else if contains(self.minus[dim][a], b) {
            Some(Sign::Exclude)
        } else {
            None
        }
    }

    /// Sets a pair without propagation.
    pub fn set_raw(&mut self, dim: usize, a: usize, b: usize, sign: Sign) {
        let (p, m) = match sign {
            Sign::Include => (&mut self.plus[dim], &mut self.minus[dim]),
            Sign::Exclude => (&mut self.minus[dim], &mut self.plus[dim]),
        };
        p[a] |= bit(b);
        p[b] |= bit(a);
        m[a] &= !bit(b);
        m[b] &= !bit(a);
    }

    pub fn included(&self, dim: usize) -> &[VertexSet] {
        &self.plus[dim]
    }

    pub fn excluded(&self, dim: usize) -> &[VertexSet] {
        &self.minus[dim]
    }

    /// Branching decisions taken so far, oldest first.
    pub fn trail(&self) -> &[Decision] {
        &self.trail
    }

    pub fn undecided(&self) -> Vec<Decision> {
        let n = self.inst.len();
        let mut out = Vec::new();
        for dim in 0..self.inst.dim() {
            for a in 0..n {
                let open = !(self.plus[dim][a] | self.minus[dim][a]) & full(n) & !full(a + 1);
                out.extend(members(open).map(|b| Decision::new(dim, a, b, Sign::Include)));
            }
        }
        out
    }

    pub fn is_complete(&self) -> bool {
        let n = self.inst.len();
        (0..self.inst.dim()).all(|dim| {
            (0..n).all(|a| (self.plus[dim][a] | self.minus[dim][a]) | bit(a) == full(n))
        })
    }

    /// The included edges read as a candidate packing class.
    pub fn included_class(&self) -> PackingClass {
        PackingClass::new(
            self.plus
                .iter()
                .map(|adj| Graph::from_adjacency(self.inst.ids(), adj.clone()))
                .collect(),
        )
    }

    /// Applies `decision` and everything it forces. Returns the forced
    /// consequences (not including `decision` itself).
    pub fn propagate(&mut self, decision: Decision) -> Result<Vec<Decision>, PruneReason> {
        let mut consequences = Vec::new();
        let mut queue = VecDeque::from([decision]);
        let mut first = true;
        while let Some(dec) = queue.pop_front() {
            let (a, b) = dec.pair;
            match self.status(dec.dim, a, b) {
                Some(s) if s == dec.sign => continue,
                Some(_) => return Err(PruneReason::Contradiction(dec)),
                None => {}
            }
            self.set_raw(dec.dim, a, b, dec.sign);
            if !first {
                consequences.push(dec);
            }
            first = false;
            match dec.sign {
                Sign::Include => self.p3_rule(a, b, &mut queue)?,
                Sign::Exclude => self.stable_rules(dec.dim, a, b, &mut queue)?,
            }
            self.c4_rules(dec.dim, a, b, &mut queue)?;
        }
        Ok(consequences)
    }

    /// A pair included on all axes but one must be excluded on that one.
    fn p3_rule(&self, a: usize, b: usize, queue: &mut VecDeque<Decision>) -> Result<(), PruneReason> {
        let d = self.inst.dim();
        let open: Vec<usize> = (0..d).filter(|&j| !contains(self.plus[j][a], b)).collect();
        match open.as_slice() {
            [] => Err(PruneReason::SharedEdge((a, b))),
            [j] if self.status(*j, a, b).is_none() => {
                queue.push_back(Decision::new(*j, a, b, Sign::Exclude));
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Excluded pairs on an axis must stay `x_i`-feasible: a new excluded
    /// pair `{a, b}` may complete an overweight clique of excluded pairs
    /// (conflict), or leave an open pair whose exclusion would (forced in).
    fn stable_rules(
        &self,
        dim: usize,
        a: usize,
        b: usize,
        queue: &mut VecDeque<Decision>,
    ) -> Result<(), PruneReason> {
        let (n, cap) = (self.inst.len(), self.inst.capacity(dim));
        let minus = &self.minus[dim];
        let w = |v: usize| self.inst.width(v, dim);
        if let Some(rest) = heavy_clique(minus, minus[a] & minus[b], cap - w(a) - w(b), &w) {
            let clique = members(rest | bit(a) | bit(b)).collect();
            return Err(PruneReason::InfeasibleClique { dim, clique });
        }
        let touched = bit(a) | bit(b) | (minus[a] & minus[b]);
        for x in members(touched) {
            let open = full(n) & !(self.plus[dim][x] | minus[x] | bit(x));
            for y in members(open) {
                if heavy_clique(minus, minus[x] & minus[y], cap - w(x) - w(y), &w).is_some() {
                    queue.push_back(Decision::new(dim, x, y, Sign::Include));
                }
            }
        }
        Ok(())
    }

    /// Interval graphs have no induced C4. Looks at every 4-set containing
    /// `{a, b}`: a fully decided induced C4 is a conflict, and a single open
    /// pair that would complete one is forced the other way.
    fn c4_rules(
        &self,
        dim: usize,
        a: usize,
        b: usize,
        queue: &mut VecDeque<Decision>,
    ) -> Result<(), PruneReason> {
        let n = self.inst.len();
        let others = full(n) & !bit(a) & !bit(b);
        for c in members(others) {
            for e in members(others & !full(c + 1)) {
                // the three ways to read {a, b, c, e} as a 4-cycle
                for cycle in [[a, b, c, e], [a, b, e, c], [a, c, b, e]] {
                    self.c4_on(dim, cycle, queue)?;
                }
            }
        }
        Ok(())
    }

    fn c4_on(
        &self,
        dim: usize,
        cycle: [usize; 4],
        queue: &mut VecDeque<Decision>,
    ) -> Result<(), PruneReason> {
        let [v0, v1, v2, v3] = cycle;
        let sides = [(v0, v1), (v1, v2), (v2, v3), (v3, v0)];
        let diagonals = [(v0, v2), (v1, v3)];
        let mut open = None;
        for (pair, wanted) in sides
            .iter()
            .map(|&p| (p, Sign::Include))
            .chain(diagonals.iter().map(|&p| (p, Sign::Exclude)))
        {
            match self.status(dim, pair.0, pair.1) {
                Some(s) if s == wanted => {}
                Some(_) => return Ok(()),
                None if open.is_none() => open = Some((pair, wanted)),
                None => return Ok(()),
            }
        }
        match open {
            None => Err(PruneReason::InducedC4 { dim, cycle }),
            Some(((x, y), wanted)) => {
                queue.push_back(Decision::new(dim, x, y, wanted.flip()));
                Ok(())
            }
        }
    }

    /// Runs every pruning rule on the current state.
    pub fn prune_check(&self) -> Option<PruneReason> {
        let n = self.inst.len();
        for a in 0..n {
            if let Some(b) = members(self.plus.iter().fold(full(n) & !full(a + 1), |acc, p| acc & p[a])).next() {
                return Some(PruneReason::SharedEdge((a, b)));
            }
        }
        for dim in 0..self.inst.dim() {
            if let Some(cycle) = self.decided_c4(dim) {
                return Some(PruneReason::InducedC4 { dim, cycle });
            }
        }
        for dim in 0..self.inst.dim() {
            if let Some(walk) = odd_2chordless_walk(&self.minus[dim], &self.plus[dim]) {
                return Some(PruneReason::OddCycle { dim, walk });
            }
            if let Some(reason) = self.clique_rules(dim) {
                return Some(reason);
            }
        }
        None
    }

    fn decided_c4(&self, dim: usize) -> Option<[usize; 4]> {
        let (plus, minus) = (&self.plus[dim], &self.minus[dim]);
        for a in 0..self.inst.len() {
            for b in members(plus[a]) {
                for c in members(plus[b] & minus[a]) {
                    if let Some(e) = members(plus[c] & plus[a] & minus[b]).next() {
                        return Some([a, b, c, e]);
                    }
                }
            }
        }
        None
    }

    fn clique_rules(&self, dim: usize) -> Option<PruneReason> {
        let inst = self.inst;
        let n = inst.len();
        let widths: Vec<i64> = (0..n).map(|b| inst.width(b, dim)).collect();
        let cap = inst.capacity(dim);

        // excluded pairs are non-overlapping on this axis for good
        let stable = Graph::from_adjacency(inst.ids(), self.minus[dim].clone());
        let (weight, clique) = stable
            .max_weight_clique(&widths)
            .unwrap_or_else(|_| stable.greedy_weight_clique(&widths));
        if weight > cap {
            return Some(PruneReason::InfeasibleClique { dim, clique: members(clique).collect() });
        }

        let total: i64 = widths.iter().sum();
        let needed = (total + cap - 1) / cap;
        if needed > 1 && n <= CLIQUE_CAP {
            let possible = stable.complement();
            let (max_clique, _) = possible.max_weight_clique(&vec![1i64; n]).expect("under cap");
            if max_clique < needed {
                return Some(PruneReason::CliqueBound { dim, max_clique, needed });
            }
        }
        None
    }

    /// Most constrained open pair: the one with the most decided pairs on
    /// its axis touching either endpoint; ties go to the smallest
    /// `(dim, a, b)`. Inclusion is tried first.
    pub fn branch_select(&self) -> Option<Decision> {
        let n = self.inst.len();
        let mut best: Option<(u32, Decision)> = None;
        for dim in 0..self.inst.dim() {
            let decided: Vec<u32> =
                (0..n).map(|v| (self.plus[dim][v] | self.minus[dim][v]).count_ones()).collect();
            for a in 0..n {
                let open = !(self.plus[dim][a] | self.minus[dim][a]) & full(n) & !full(a + 1);
                for b in members(open) {
                    let score = decided[a] + decided[b];
                    if best.is_none_or(|(s, _)| score > s) {
                        best = Some((score, Decision::new(dim, a, b, Sign::Include)));
                    }
                }
            }
        }
        best.map(|(_, d)| d)
    }
}

/// A clique of `adj` inside `cand` weighing more than `budget`, if any.
fn heavy_clique(adj: &[VertexSet], cand: VertexSet, budget: i64, w: &impl Fn(usize) -> i64) -> Option<VertexSet> {
    if budget < 0 {
        return Some(0);
    }
    if members(cand).map(w).sum::<i64>() <= budget {
        return None;
    }
    let v = members(cand).next()?;
    heavy_clique(adj, cand & adj[v], budget - w(v), w)
        .map(|c| c | bit(v))
        .or_else(|| heavy_clique(adj, cand & !bit(v), budget, w))
}

/// State with every pair forced by the instance alone: pairs too wide to
/// sit side by side on an axis overlap there, and P3 closure.
pub fn initial_state(inst: &Instance) -> Result<EdgeState<'_>, PruneReason> {
    let mut state = EdgeState::blank(inst);
    let n = inst.len();
    for dim in 0..inst.dim() {
        for a in 0..n {
            for b in a + 1..n {
                if inst.width(a, dim) + inst.width(b, dim) > inst.capacity(dim) {
                    state.propagate(Decision::new(dim, a, b, Sign::Include))?;
                }
            }
        }
    }
    // with d = 1 every pair must be separated
    if inst.dim() == 1 {
        for a in 0..n {
            for b in a + 1..n {
                state.propagate(Decision::new(0, a, b, Sign::Exclude))?;
            }
        }
    }
    Ok(state)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub max_depth: usize,
    pub propagated: u64,
    pub leaf_checks: u64,
    pub prunes: BTreeMap<&'static str, u64>,
    pub heuristic_hit: bool,
    pub quick_infeasible: bool,
}

impl SearchStats {
    fn prune(&mut self, reason: &PruneReason) {
        *self.prunes.entry(reason.rule()).or_default() += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Feasible { packing: Packing, class: PackingClass },
    Infeasible,
    ResourceLimit,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub verdict: Verdict,
    pub stats: SearchStats,
    pub elapsed: Duration,
}

impl SearchOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self.verdict, Verdict::Feasible { .. })
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self.verdict, Verdict::Infeasible)
    }
}

/// Decides whether all boxes of `inst` fit into its container.
pub fn solve_opp(inst: &Instance, limits: &Limits) -> SearchOutcome {
    let started = Instant::now();
    let mut stats = SearchStats::default();
    let all: Vec<usize> = (0..inst.len()).collect();

    let verdict = if limits.shortcuts && quick_infeasible(inst, &all) {
        stats.quick_infeasible = true;
        Verdict::Infeasible
    } else if let Some(packing) = limits.shortcuts.then(|| heuristic_pack(inst)).flatten() {
        stats.heuristic_hit = true;
        let class = project_to_class(&packing, inst).expect("heuristic packings are valid");
        Verdict::Feasible { packing, class }
    } else {
        match initial_state(inst) {
            Err(reason) => {
                stats.prune(&reason);
                Verdict::Infeasible
            }
            Ok(state) => {
                let mut search = Search { limits, started, stats: &mut stats };
                match search.dfs(state, 0) {
                    Flow::Found(class) => {
                        let orientation = orient_class(&class, inst).expect("verified class");
                        let packing = extract_packing(&orientation, inst).expect("valid orientation");
                        Verdict::Feasible { packing, class }
                    }
                    Flow::Exhausted => Verdict::Infeasible,
                    Flow::Limit => Verdict::ResourceLimit,
                }
            }
        }
    };

    if let Verdict::Feasible { packing, .. } = &verdict {
        assert!(
            packing.len() == inst.len() && validate_packing(packing, inst).is_ok_and(|r| r.valid),
            "solver produced an invalid packing"
        );
    }
    SearchOutcome { verdict, stats, elapsed: started.elapsed() }
}

enum Flow {
    Found(PackingClass),
    Exhausted,
    Limit,
}

struct Search<'s> {
    limits: &'s Limits,
    started: Instant,
    stats: &'s mut SearchStats,
}

impl Search<'_> {
    fn dfs(&mut self, mut state: EdgeState<'_>, depth: usize) -> Flow {
        self.stats.nodes += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        if self.stats.nodes > self.limits.max_nodes
            || self.limits.stopped()
            || (self.stats.nodes % 256 == 1 && self.started.elapsed() > self.limits.time_limit)
        {
            return Flow::Limit;
        }

        let complete = state.is_complete();
        if complete || depth == 0 || state.since_check >= CHECK_INTERVAL {
            state.since_check = 0;
            if let Some(reason) = state.prune_check() {
                self.stats.prune(&reason);
                return Flow::Exhausted;
            }
            // the included edges may already form a packing class
            self.stats.leaf_checks += 1;
            let class = state.included_class();
            if verify_packing_class(&class, state.inst).is_ok_and(|r| r.all_ok()) {
                return Flow::Found(class);
            }
            if complete {
                self.stats.prune(&PruneReason::LeafRejected);
                return Flow::Exhausted;
            }
        }

        let choice = state.branch_select().expect("incomplete state has an open pair");
        for sign in [choice.sign, choice.sign.flip()] {
            let decision = Decision { sign, ..choice };
            let mut child = state.clone();
            match child.propagate(decision) {
                Err(reason) => self.stats.prune(&reason),
                Ok(forced) => {
                    self.stats.propagated += forced.len() as u64;
                    child.trail.push(decision);
                    child.since_check += 1;
                    match self.dfs(child, depth + 1) {
                        Flow::Exhausted => {}
                        other => return other,
                    }
                }
            }
        }
        Flow::Exhausted
    }
}

/// Sound necessary-condition screen: `true` only if the boxes in `subset`
/// certainly cannot be packed together.
pub fn quick_infeasible(inst: &Instance, subset: &[usize]) -> bool {
    let volume: num_rational::Ratio<i64> = subset.iter().map(|&b| inst.boxes()[b].volume()).sum();
    if volume > inst.container_volume() {
        return true;
    }
    subset.iter().enumerate().any(|(k, &a)| {
        subset[k + 1..].iter().any(|&b| {
            (0..inst.dim()).all(|i| inst.width(a, i) + inst.width(b, i) > inst.capacity(i))
        })
    })
}

/// Bottom-left style placement over gapless candidate points; several box
/// orders are tried. Returns a packing of all boxes or `None`.
pub fn heuristic_pack(inst: &Instance) -> Option<Packing> {
    const MAX_POINTS: usize = 200_000;
    let (n, d) = (inst.len(), inst.dim());
    let volume = |b: usize| (0..d).map(|i| inst.width(b, i) as i128).product::<i128>();
    let mut orders: Vec<Vec<usize>> = Vec::new();
    let mut by_volume: Vec<usize> = (0..n).collect();
    by_volume.sort_by_key(|&b| (std::cmp::Reverse(volume(b)), b));
    orders.push(by_volume);
    for i in (0..d).rev() {
        let mut by_axis: Vec<usize> = (0..n).collect();
        by_axis.sort_by_key(|&b| (std::cmp::Reverse(inst.width(b, i)), std::cmp::Reverse(volume(b)), b));
        orders.push(by_axis);
    }
    orders.dedup();

    'orders: for order in orders {
        let mut placed: Vec<(usize, Vec<i64>)> = Vec::with_capacity(n);
        for &b in &order {
            let axes: Vec<Vec<i64>> = (0..d)
                .map(|i| {
                    let mut xs: Vec<i64> = std::iter::once(0)
                        .chain(placed.iter().map(|(u, p)| p[i] + inst.width(*u, i)))
                        .filter(|&x| x + inst.width(b, i) <= inst.capacity(i))
                        .collect();
                    xs.sort_unstable();
                    xs.dedup();
                    xs
                })
                .collect();
            if axes.iter().map(Vec::len).try_fold(1usize, |acc, k| acc.checked_mul(k)).is_none_or(|k| k > MAX_POINTS) {
                continue 'orders;
            }
            // lowest along the last axis first, then the one before, ...
            let mut points: Vec<Vec<i64>> = vec![Vec::new()];
            for xs in axes.iter().rev() {
                points = points
                    .into_iter()
                    .flat_map(|p| {
                        xs.iter().map(move |&x| {
                            let mut q = p.clone();
                            q.push(x);
                            q
                        })
                    })
                    .collect();
            }
            let spot = points.into_iter().map(|mut p| {
                p.reverse();
                p
            }).find(|p| {
                placed.iter().all(|(u, q)| {
                    (0..d).any(|i| p[i] + inst.width(b, i) <= q[i] || q[i] + inst.width(*u, i) <= p[i])
                })
            });
            match spot {
                Some(p) => placed.push((b, p)),
                None => continue 'orders,
            }
        }
        let mut packing = Packing::new();
        for (b, p) in placed {
            let corner = p.iter().enumerate().map(|(i, &x)| inst.unscale(i, x)).collect();
            packing.place(inst.boxes()[b].id.clone(), corner);
        }
        return Some(packing);
    }
    None
}
