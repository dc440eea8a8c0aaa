//! Brute-force checkers and generators shared by unit tests.

use proptest::prelude::*;

use crate::bits::members;
use crate::graph::Graph;

pub fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2).prop_map(move |bits| {
            let mut g = Graph::empty(n);
            let mut k = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if bits[k] {
                        g.add_edge(a, b);
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

/// Intersection graph of half-open integer intervals.
pub fn interval_graph(intervals: &[(i64, i64)]) -> Graph {
    let mut g = Graph::empty(intervals.len());
    for (a, &(l1, r1)) in intervals.iter().enumerate() {
        for (b, &(l2, r2)) in intervals.iter().enumerate().skip(a + 1) {
            if l1 < r2 && l2 < r1 {
                g.add_edge(a, b);
            }
        }
    }
    g
}

pub fn interval_graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    proptest::collection::vec((0i64..10, 1i64..5), 0..=max_n)
        .prop_map(|v| interval_graph(&v.iter().map(|&(l, w)| (l, l + w)).collect::<Vec<_>>()))
}

pub fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |s| (0..n).filter(|&v| s >> v & 1 == 1).collect())
}

pub fn brute_max_clique(g: &Graph, w: &[i64]) -> i64 {
    subsets(g.len())
        .filter(|s| s.iter().all(|&a| s.iter().all(|&b| a == b || g.has_edge(a, b))))
        .map(|s| s.iter().map(|&v| w[v]).sum())
        .max()
        .unwrap_or(0)
}

pub fn brute_max_stable(g: &Graph, w: &[i64]) -> i64 {
    brute_max_clique(&g.complement(), w)
}

pub fn is_chordless_cycle(g: &Graph, c: &[usize]) -> bool {
    let k = c.len();
    let distinct = c.iter().collect::<std::collections::HashSet<_>>().len() == k;
    distinct
        && k >= 4
        && (0..k).all(|i| {
            (i + 1..k).all(|j| {
                let consecutive = j == i + 1 || (i == 0 && j == k - 1);
                g.has_edge(c[i], c[j]) == consecutive
            })
        })
}

/// Odd closed walk, length >= 5, consecutive vertices adjacent, vertices two
/// apart (cyclically) never adjacent.
pub fn is_odd_2chordless_walk(g: &Graph, c: &[usize]) -> bool {
    let k = c.len();
    k >= 5
        && k % 2 == 1
        && (0..k).all(|i| g.has_edge(c[i], c[(i + 1) % k]) && !g.has_edge(c[i], c[(i + 2) % k]))
}

fn path_avoiding(g: &Graph, s: usize, t: usize, z: usize) -> bool {
    let blocked = |v: usize| v == z || g.has_edge(v, z);
    if blocked(s) || blocked(t) {
        return false;
    }
    let mut seen = vec![false; g.len()];
    let mut stack = vec![s];
    seen[s] = true;
    while let Some(u) = stack.pop() {
        if u == t {
            return true;
        }
        for v in members(g.neighbors(u)) {
            if !seen[v] && !blocked(v) {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    false
}

pub fn is_asteroidal_triple(g: &Graph, t: [usize; 3]) -> bool {
    let [x, y, z] = t;
    x != y && y != z && x != z
        && path_avoiding(g, x, y, z)
        && path_avoiding(g, x, z, y)
        && path_avoiding(g, y, z, x)
}

pub fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, &(0..n).map(|v| (v, (v + 1) % n)).collect::<Vec<_>>())
}

/// Star with three legs of length two; tips are 2, 4, 6.
pub fn long_claw() -> Graph {
    Graph::from_edges(7, &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)])
}

use crate::model::{Instance, Packing, Rational};

/// Random valid packings: boxes dropped at random grid points, keeping only
/// those that do not collide with earlier ones.
pub fn packing_strategy(d: usize, max_boxes: usize) -> impl Strategy<Value = (Instance, Packing)> {
    let cap = 6i64;
    proptest::collection::vec(
        (proptest::collection::vec(1i64..4, d), proptest::collection::vec(0i64..6, d)),
        1..=max_boxes,
    )
    .prop_map(move |raw| {
        let mut kept: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
        for (size, pos) in raw {
            let inside = (0..d).all(|i| pos[i] + size[i] <= cap);
            let free = kept.iter().all(|(s, p)| {
                (0..d).any(|i| pos[i] + size[i] <= p[i] || p[i] + s[i] <= pos[i])
            });
            if inside && free {
                kept.push((size, pos));
            }
        }
        if kept.is_empty() {
            kept.push((vec![1; d], vec![0; d]));
        }
        let sizes: Vec<&[i64]> = kept.iter().map(|(s, _)| s.as_slice()).collect();
        let inst = Instance::from_integers(&vec![cap; d], &sizes).unwrap();
        let mut p = Packing::new();
        for (k, (_, pos)) in kept.iter().enumerate() {
            p.place(format!("b{}", k + 1), pos.iter().map(|&x| Rational::from(x)).collect());
        }
        (inst, p)
    })
}
