//! Deliberately naive ground truth for small inputs. Nothing here calls
//! into the production graph, recognition or search code.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::model::{BoxItem, Instance, Packing, Rational};
use crate::packing_class::PackingClass;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_boxes: usize,
    pub max_vertices: usize,
    pub max_edges: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { max_boxes: 5, max_vertices: 7, max_edges: 30 }
    }
}

fn too_large(what: &str, got: usize, cap: usize) -> Error {
    Error::TooLarge(format!("oracle: {got} {what} (cap {cap})"))
}

/// Exhaustive OPP over gapless coordinates: on each axis a box starts at a
/// subset sum of the other boxes' widths.
pub fn brute_force_opp(inst: &Instance, cfg: &OracleConfig) -> Result<Option<Packing>> {
    let (n, d) = (inst.len(), inst.dim());
    if n > cfg.max_boxes {
        return Err(too_large("boxes", n, cfg.max_boxes));
    }
    let w = |b: usize, i: usize| inst.width(b, i);
    let candidates: Vec<Vec<Vec<i64>>> = (0..n)
        .map(|b| {
            (0..d)
                .map(|i| {
                    let mut sums = vec![0i64];
                    for c in (0..n).filter(|&c| c != b) {
                        let more: Vec<i64> = sums.iter().map(|s| s + w(c, i)).collect();
                        sums.extend(more);
                    }
                    sums.retain(|&s| s + w(b, i) <= inst.capacity(i));
                    sums.sort_unstable();
                    sums.dedup();
                    sums
                })
                .collect()
        })
        .collect();

    fn place(
        b: usize,
        pos: &mut Vec<Vec<i64>>,
        candidates: &[Vec<Vec<i64>>],
        w: &dyn Fn(usize, usize) -> i64,
        d: usize,
    ) -> bool {
        if b == candidates.len() {
            return true;
        }
        let mut corner = vec![0i64; d];
        let mut idx = vec![0usize; d];
        loop {
            for i in 0..d {
                corner[i] = candidates[b][i][idx[i]];
            }
            let clash = pos.iter().enumerate().any(|(c, q)| {
                (0..d).all(|i| corner[i] < q[i] + w(c, i) && q[i] < corner[i] + w(b, i))
            });
            if !clash {
                pos.push(corner.clone());
                if place(b + 1, pos, candidates, w, d) {
                    return true;
                }
                pos.pop();
            }
            // odometer over the candidate grid
            let mut i = 0;
            loop {
                if i == d {
                    return false;
                }
                idx[i] += 1;
                if idx[i] < candidates[b][i].len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }

    let mut pos = Vec::with_capacity(n);
    if !place(0, &mut pos, &candidates, &w, d) {
        return Ok(None);
    }
    let mut packing = Packing::new();
    for (b, p) in pos.iter().enumerate() {
        let corner = (0..d).map(|i| inst.unscale(i, p[i])).collect();
        packing.place(inst.boxes()[b].id.clone(), corner);
    }
    Ok(Some(packing))
}

fn matrix(g: &Graph) -> Vec<Vec<bool>> {
    (0..g.len()).map(|a| (0..g.len()).map(|b| g.has_edge(a, b)).collect()).collect()
}

/// Chordality by repeatedly deleting a simplicial vertex, then an
/// asteroidal-triple search by explicit path exploration.
pub fn oracle_is_interval(g: &Graph, cfg: &OracleConfig) -> Result<bool> {
    if g.len() > cfg.max_vertices {
        return Err(too_large("vertices", g.len(), cfg.max_vertices));
    }
    let m = matrix(g);
    let n = m.len();

    let mut alive = vec![true; n];
    for _ in 0..n {
        let simplicial = (0..n).find(|&v| {
            alive[v] && {
                let nb: Vec<usize> = (0..n).filter(|&u| alive[u] && m[v][u]).collect();
                nb.iter().all(|&a| nb.iter().all(|&b| a == b || m[a][b]))
            }
        });
        match simplicial {
            Some(v) => alive[v] = false,
            None => return Ok(false),
        }
    }

    let path_avoiding = |s: usize, t: usize, z: usize| -> bool {
        let blocked = |v: usize| v == z || m[v][z];
        if blocked(s) || blocked(t) {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            if u == t {
                return true;
            }
            for v in 0..n {
                if m[u][v] && !seen[v] && !blocked(v) {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        false
    };
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if x < y && y < z && path_avoiding(x, y, z) && path_avoiding(x, z, y) && path_avoiding(y, z, x) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Backtracking over edge directions, closing under transitivity after
/// every choice.
pub fn oracle_is_comparability(g: &Graph, cfg: &OracleConfig) -> Result<bool> {
    let edges = g.edges();
    if edges.len() > cfg.max_edges {
        return Err(too_large("edges", edges.len(), cfg.max_edges));
    }
    let m = matrix(g);
    let n = m.len();
    // dir[a][b]: arc a -> b chosen
    fn close(dir: &mut [Vec<bool>], m: &[Vec<bool>]) -> bool {
        let n = m.len();
        loop {
            let mut changed = false;
            for a in 0..n {
                for b in 0..n {
                    if !dir[a][b] {
                        continue;
                    }
                    if dir[b][a] {
                        return false;
                    }
                    for c in 0..n {
                        if c != a && dir[b][c] {
                            if !m[a][c] || dir[c][a] {
                                return false;
                            }
                            if !dir[a][c] {
                                dir[a][c] = true;
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }
    fn search(dir: Vec<Vec<bool>>, edges: &[(usize, usize)], m: &[Vec<bool>]) -> bool {
        let Some(&(a, b)) = edges.iter().find(|&&(a, b)| !dir[a][b] && !dir[b][a]) else {
            return true;
        };
        [(a, b), (b, a)].into_iter().any(|(x, y)| {
            let mut next = dir.clone();
            next[x][y] = true;
            close(&mut next, m) && search(next, edges, m)
        })
    }
    Ok(search(vec![vec![false; n]; n], &edges, &m))
}

/// Every packing class of the instance (up to `cap`), by trying every way
/// to choose, for each pair, the axes on which it overlaps (never all).
pub fn enumerate_packing_classes(
    inst: &Instance,
    cap: usize,
    cfg: &OracleConfig,
) -> Result<Vec<PackingClass>> {
    let (n, d) = (inst.len(), inst.dim());
    if n > cfg.max_boxes || d > 2 {
        return Err(Error::TooLarge(format!("oracle: {n} boxes in dimension {d}")));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let options = (1usize << d) - 1; // axis masks except "all axes"
    let total = options.checked_pow(pairs.len() as u32).expect("small");
    let mut found = Vec::new();
    for code in 0..total {
        let mut graphs: Vec<Graph> = (0..d).map(|_| Graph::new(inst.ids()).expect("unique")).collect();
        let mut rest = code;
        for &(a, b) in &pairs {
            let mask = rest % options;
            rest /= options;
            for (i, g) in graphs.iter_mut().enumerate() {
                if mask >> i & 1 == 1 {
                    g.add_edge(a, b);
                }
            }
        }
        let ok = graphs.iter().enumerate().all(|(i, g)| {
            oracle_is_interval(g, &OracleConfig { max_vertices: n, ..*cfg }).unwrap_or(false)
                && stable_sets_fit(g, inst, i)
        });
        if ok {
            found.push(PackingClass::new(graphs));
            if found.len() >= cap {
                break;
            }
        }
    }
    Ok(found)
}

fn stable_sets_fit(g: &Graph, inst: &Instance, i: usize) -> bool {
    let n = g.len();
    (0u32..1 << n).all(|set| {
        let vs: Vec<usize> = (0..n).filter(|&v| set >> v & 1 == 1).collect();
        let stable = vs.iter().all(|&a| vs.iter().all(|&b| !g.has_edge(a, b)));
        !stable || vs.iter().map(|&v| inst.width(v, i)).sum::<i64>() <= inst.capacity(i)
    })
}

/// Best value over all subsets, each decided by [`brute_force_opp`].
pub fn brute_force_okp(inst: &Instance, cfg: &OracleConfig) -> Result<(Rational, Vec<String>)> {
    let n = inst.len();
    if n > cfg.max_boxes {
        return Err(too_large("boxes", n, cfg.max_boxes));
    }
    let mut best = (Rational::from(0), Vec::new());
    for set in 1u32..1 << n {
        let members: Vec<usize> = (0..n).filter(|&b| set >> b & 1 == 1).collect();
        let value: Rational = members.iter().map(|&b| inst.boxes()[b].value).sum();
        if value <= best.0 {
            continue;
        }
        let boxes = members.iter().map(|&b| inst.boxes()[b].clone()).collect();
        let sub = Instance::new(inst.container().to_vec(), boxes)?;
        if brute_force_opp(&sub, cfg)?.is_some() {
            best = (value, members.iter().map(|&b| inst.boxes()[b].id.clone()).collect());
        }
    }
    Ok(best)
}

/// Smallest height, scanning every grid step from the tallest box upward.
pub fn brute_force_spp(boxes: &[BoxItem], fixed: &[Rational], cfg: &OracleConfig) -> Result<Rational> {
    let d = fixed.len() + 1;
    let total: Rational = boxes.iter().map(|b| b.size[d - 1]).sum();
    let step = boxes
        .iter()
        .map(|b| *b.size[d - 1].denom())
        .fold(1i64, num_integer::lcm);
    let mut ticks = boxes.iter().map(|b| b.size[d - 1]).max().map_or(0, |h| (h * step).to_integer());
    loop {
        let h = Rational::new(ticks, step);
        if h >= total || {
            let mut container = fixed.to_vec();
            container.push(h);
            brute_force_opp(&Instance::new(container, boxes.to_vec())?, cfg)?.is_some()
        } {
            return Ok(h.min(total));
        }
        ticks += 1;
    }
}
