//! Optimisation on top of the OPP decision: knapsack (OKP) and strip
//! packing (SPP).

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use std::time::{Duration, Instant};

use num_traits::Zero;

use crate::bits::{bit, members, VertexSet};
use crate::error::{Error, Result};
use crate::model::{BoxItem, Instance, Packing, Rational};
use crate::opp::{quick_infeasible, solve_opp, Limits, SearchStats, Verdict};

/// Subsets kept in the dismissal log; the counters always cover all of them.
const DISMISSAL_LOG_CAP: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dismissal {
    QuickInfeasible,
    ContainsInfeasible,
    OppInfeasible,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OkpProof {
    pub subsets_examined: u64,
    pub opp_calls: u64,
    pub dismissed: Vec<(Vec<String>, Dismissal)>,
    pub dismissed_total: u64,
    pub opp_stats: SearchStats,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OkpSolution {
    pub chosen: Vec<String>,
    pub value: Rational,
    pub packing: Packing,
    pub proof: OkpProof,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OkpOutcome {
    Optimal(OkpSolution),
    ResourceLimit { best_known: Option<OkpSolution> },
}

/// Maximum-value packable subset. Subsets are visited best-first by total
/// value, so the first one the decision engine accepts is optimal.
pub fn solve_okp(inst: &Instance, limits: &Limits) -> OkpOutcome {
    let started = Instant::now();
    let n = inst.len();
    let mut proof = OkpProof::default();
    // removing boxes in increasing value order yields subsets by decreasing value
    let mut cheap: Vec<usize> = (0..n).collect();
    cheap.sort_by_key(|&b| (inst.boxes()[b].value, b));
    let full: VertexSet = (0..n).fold(0, |acc, b| acc | bit(b));

    let mut infeasible: Vec<VertexSet> = Vec::new();
    for removed in RemovalOrder::new(inst, &cheap) {
        if started.elapsed() > limits.time_limit || limits_stopped(limits) {
            return OkpOutcome::ResourceLimit { best_known: None };
        }
        let subset = full & !removed;
        proof.subsets_examined += 1;
        let ids: Vec<usize> = members(subset).collect();

        let dismissal = if infeasible.iter().any(|&bad| bad & !subset == 0) {
            Some(Dismissal::ContainsInfeasible)
        } else if quick_infeasible(inst, &ids) {
            Some(Dismissal::QuickInfeasible)
        } else {
            None
        };
        if let Some(reason) = dismissal {
            record(&mut proof, inst, &ids, reason);
            if reason == Dismissal::QuickInfeasible {
                infeasible.push(subset);
            }
            continue;
        }

        let sub = inst.subset(ids.iter().copied());
        let remaining = limits.time_limit.saturating_sub(started.elapsed());
        let outcome = solve_opp(&sub, &limits.clone().with_time_limit(remaining));
        proof.opp_calls += 1;
        merge_stats(&mut proof.opp_stats, &outcome.stats);
        match outcome.verdict {
            Verdict::Feasible { packing, .. } => {
                return OkpOutcome::Optimal(OkpSolution {
                    chosen: ids.iter().map(|&b| inst.boxes()[b].id.clone()).collect(),
                    value: inst.value_of(ids.iter().copied()),
                    packing,
                    proof,
                });
            }
            Verdict::Infeasible => {
                infeasible.push(subset);
                record(&mut proof, inst, &ids, Dismissal::OppInfeasible);
            }
            Verdict::ResourceLimit => return OkpOutcome::ResourceLimit { best_known: None },
        }
    }
    unreachable!("the empty subset is always packable")
}

fn limits_stopped(limits: &Limits) -> bool {
    limits.stop.as_ref().is_some_and(|s| s.load(std::sync::atomic::Ordering::Acquire))
}

fn record(proof: &mut OkpProof, inst: &Instance, ids: &[usize], reason: Dismissal) {
    proof.dismissed_total += 1;
    if proof.dismissed.len() < DISMISSAL_LOG_CAP {
        proof.dismissed.push((ids.iter().map(|&b| inst.boxes()[b].id.clone()).collect(), reason));
    }
}

fn merge_stats(into: &mut SearchStats, from: &SearchStats) {
    into.nodes += from.nodes;
    into.max_depth = into.max_depth.max(from.max_depth);
    into.propagated += from.propagated;
    into.leaf_checks += from.leaf_checks;
    for (rule, k) in &from.prunes {
        *into.prunes.entry(rule).or_default() += k;
    }
}

/// Enumerates sets of removed boxes by non-decreasing removed value. Each
/// heap entry is a set whose largest member (in `cheap` order) is `last`;
/// successors either add the next box or swap `last` for it, which reaches
/// every non-empty set exactly once.
struct RemovalOrder<'a> {
    inst: &'a Instance,
    cheap: &'a [usize],
    heap: BinaryHeap<Reverse<(Rational, Vec<usize>, VertexSet)>>,
    started: bool,
}

impl<'a> RemovalOrder<'a> {
    fn new(inst: &'a Instance, cheap: &'a [usize]) -> Self {
        let mut heap = BinaryHeap::new();
        if let Some(&b) = cheap.first() {
            heap.push(Reverse((inst.boxes()[b].value, vec![0], bit(b))));
        }
        Self { inst, cheap, heap, started: false }
    }
}

impl Iterator for RemovalOrder<'_> {
    type Item = VertexSet;

    fn next(&mut self) -> Option<VertexSet> {
        if !self.started {
            self.started = true;
            return Some(0);
        }
        let Reverse((value, positions, set)) = self.heap.pop()?;
        let last = *positions.last().expect("non-empty");
        if let Some(&next) = self.cheap.get(last + 1) {
            let v = self.inst.boxes()[next].value;
            let mut grown = positions.clone();
            grown.push(last + 1);
            self.heap.push(Reverse((value + v, grown, set | bit(next))));
            let prev = self.cheap[last];
            let mut swapped = positions.clone();
            *swapped.last_mut().expect("non-empty") = last + 1;
            let swapped_value = value - self.inst.boxes()[prev].value + v;
            self.heap.push(Reverse((swapped_value, swapped, set & !bit(prev) | bit(next))));
        }
        Some(set)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SppSolution {
    pub height: Rational,
    pub packing: Packing,
    pub probes: Vec<(Rational, bool)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SppOutcome {
    Optimal(SppSolution),
    ResourceLimit,
}

/// Minimal height along the last axis for the given boxes, with the first
/// `d - 1` container sizes fixed. Only subset sums of the box heights are
/// probed: some optimal packing is gapless, so its height is one of them.
pub fn solve_spp(boxes: &[BoxItem], fixed: &[Rational], limits: &Limits) -> Result<SppOutcome> {
    let started = Instant::now();
    let d = fixed.len() + 1;
    for b in boxes {
        if b.size.len() != d {
            return Err(Error::DimensionMismatch { id: b.id.clone(), expected: d, got: b.size.len() });
        }
        if b.size.iter().zip(fixed).any(|(w, cap)| w > cap) {
            return Err(Error::InfeasibleCrossSection(b.id.clone()));
        }
    }
    let heights: Vec<Rational> = boxes.iter().map(|b| b.size[d - 1]).collect();
    let tallest = heights.iter().copied().max().unwrap_or_else(Rational::zero);
    if boxes.is_empty() {
        return Ok(SppOutcome::Optimal(SppSolution {
            height: Rational::zero(),
            packing: Packing::new(),
            probes: Vec::new(),
        }));
    }
    let cross: Rational = fixed.iter().product();
    let volume: Rational = boxes.iter().map(BoxItem::volume).sum();
    let lower = tallest.max(volume / cross);

    let mut sums: BTreeSet<Rational> = BTreeSet::from([Rational::zero()]);
    for &h in &heights {
        let shifted: Vec<Rational> = sums.iter().map(|&s| s + h).collect();
        sums.extend(shifted);
    }
    let candidates: Vec<Rational> = sums.into_iter().filter(|&s| s >= lower).collect();

    let probe = |h: Rational, probes: &mut Vec<(Rational, bool)>| -> Result<Option<Packing>, ()> {
        let mut container = fixed.to_vec();
        container.push(h);
        let inst = Instance::new(container, boxes.to_vec()).expect("boxes fit the probe height");
        let remaining = limits.time_limit.saturating_sub(started.elapsed());
        let outcome = solve_opp(&inst, &limits.clone().with_time_limit(remaining.max(Duration::ZERO)));
        match outcome.verdict {
            Verdict::Feasible { packing, .. } => {
                probes.push((h, true));
                Ok(Some(packing))
            }
            Verdict::Infeasible => {
                probes.push((h, false));
                Ok(None)
            }
            Verdict::ResourceLimit => Err(()),
        }
    };

    // the largest candidate (all boxes stacked) is always feasible
    let mut probes = Vec::new();
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    let mut best = match probe(candidates[hi], &mut probes) {
        Ok(Some(p)) => p,
        Ok(None) => unreachable!("stacking every box is a packing"),
        Err(()) => return Ok(SppOutcome::ResourceLimit),
    };
    while lo < hi {
        let mid = (lo + hi) / 2;
        match probe(candidates[mid], &mut probes) {
            Ok(Some(p)) => {
                best = p;
                hi = mid;
            }
            Ok(None) => lo = mid + 1,
            Err(()) => return Ok(SppOutcome::ResourceLimit),
        }
    }
    Ok(SppOutcome::Optimal(SppSolution { height: candidates[hi], packing: best, probes }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::five_boxes;
    use crate::model::validate_packing;
    use crate::oracle::{brute_force_okp, brute_force_spp, OracleConfig};
    use proptest::prelude::*;

    fn r(x: i64) -> Rational {
        Rational::from(x)
    }

    fn optimal(out: OkpOutcome) -> OkpSolution {
        match out {
            OkpOutcome::Optimal(s) => s,
            other => panic!("expected an optimum, got {other:?}"),
        }
    }

    #[test]
    fn five_boxes_all_fit() {
        let inst = five_boxes();
        let sol = optimal(solve_okp(&inst, &Limits::default()));
        assert_eq!(sol.value, r(18));
        assert_eq!(sol.chosen.len(), 5);
        assert!(validate_packing(&sol.packing, &inst).unwrap().valid);
    }

    #[test]
    fn knapsack_picks_the_better_square() {
        let inst = Instance::new(
            vec![r(3), r(3)],
            vec![
                BoxItem::new("a", vec![r(2), r(2)]).with_value(r(3)),
                BoxItem::new("b", vec![r(2), r(2)]).with_value(r(5)),
            ],
        )
        .unwrap();
        let sol = optimal(solve_okp(&inst, &Limits::default()));
        assert_eq!((sol.value, sol.chosen.clone()), (r(5), vec!["b".to_string()]));
        assert_eq!(sol.packing.len(), 1);
        assert!(sol.proof.dismissed_total >= 1);

        let single = Instance::new(vec![r(2)], vec![BoxItem::new("x", vec![r(1)]).with_value(r(7))]).unwrap();
        assert_eq!(optimal(solve_okp(&single, &Limits::default())).value, r(7));
    }

    #[test]
    fn removal_order_is_sorted_and_complete() {
        let values = [3, 1, 4, 1, 5];
        let inst = Instance::new(
            vec![r(9)],
            values.iter().enumerate().map(|(k, &v)| BoxItem::new(format!("{k}"), vec![r(1)]).with_value(r(v))).collect(),
        )
        .unwrap();
        let mut cheap: Vec<usize> = (0..5).collect();
        cheap.sort_by_key(|&b| (inst.boxes()[b].value, b));
        let sets: Vec<VertexSet> = RemovalOrder::new(&inst, &cheap).collect();
        assert_eq!(sets.len(), 32);
        let unique: std::collections::HashSet<_> = sets.iter().collect();
        assert_eq!(unique.len(), 32);
        let removed: Vec<Rational> = sets.iter().map(|&s| inst.value_of(members(s))).collect();
        assert!(removed.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn strip_examples() {
        let h = |boxes: Vec<BoxItem>, fixed: Vec<Rational>| match solve_spp(&boxes, &fixed, &Limits::default()).unwrap() {
            SppOutcome::Optimal(s) => s,
            SppOutcome::ResourceLimit => panic!("limit"),
        };
        assert_eq!(h(vec![BoxItem::new("a", vec![r(1), r(2)])], vec![r(1)]).height, r(2));
        let pair = vec![BoxItem::new("a", vec![r(2), r(1)]), BoxItem::new("b", vec![r(2), r(1)])];
        assert_eq!(h(pair, vec![r(2)]).height, r(2));

        let five: Vec<BoxItem> = five_boxes().boxes().to_vec();
        let sol = h(five.clone(), vec![r(5)]);
        assert!(sol.height >= r(4));
        let oracle = brute_force_spp(&five, &[r(5)], &OracleConfig::default()).unwrap();
        assert_eq!(sol.height, oracle);
        let inst = Instance::new(vec![r(5), sol.height], five).unwrap();
        assert!(validate_packing(&sol.packing, &inst).unwrap().valid);

        let wide = vec![BoxItem::new("w", vec![r(3), r(1)])];
        assert_eq!(
            solve_spp(&wide, &[r(2)], &Limits::default()),
            Err(Error::InfeasibleCrossSection("w".into()))
        );
    }

    fn small(cap: i64) -> impl Strategy<Value = Instance> {
        proptest::collection::vec(proptest::collection::vec(1i64..=3, 2), 1..=4).prop_map(move |sizes| {
            let refs: Vec<&[i64]> = sizes.iter().map(Vec::as_slice).collect();
            Instance::from_integers(&[cap, cap], &refs).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn okp_matches_brute_force(inst in small(4)) {
            let sol = optimal(solve_okp(&inst, &Limits::default()));
            let (best, _) = brute_force_okp(&inst, &OracleConfig::default()).unwrap();
            prop_assert_eq!(sol.value, best);
            prop_assert!(sol.value <= inst.value_of(0..inst.len()));
            for b in inst.boxes() {
                prop_assert!(sol.value >= b.value);
            }
            // a larger container never hurts
            let bigger = inst.with_container(vec![r(5), r(5)]).unwrap();
            prop_assert!(optimal(solve_okp(&bigger, &Limits::default())).value >= sol.value);
        }

        #[test]
        fn spp_matches_brute_force(inst in small(4)) {
            let boxes = inst.boxes().to_vec();
            let SppOutcome::Optimal(sol) = solve_spp(&boxes, &[r(4)], &Limits::default()).unwrap() else {
                return Err(TestCaseError::fail("limit"));
            };
            prop_assert_eq!(sol.height, brute_force_spp(&boxes, &[r(4)], &OracleConfig::default()).unwrap());
        }
    }
}
