//! Instance families shared by the benchmarks.

use std::path::Path;

use packclass::{fixtures, Instance};
use packclass_cli::ngcut;

/// Named instances for timing the decision solver.
pub fn opp_suite() -> Vec<(String, Instance)> {
    let mut out = vec![
        ("five_boxes".to_string(), fixtures::five_boxes()),
        ("two_squares".to_string(), Instance::from_integers(&[3, 3], &[&[2, 2], &[2, 2]]).unwrap()),
        ("six_cubes".to_string(), Instance::from_integers(&[2, 2, 2], &[&[1i64, 1, 1][..]; 6]).unwrap()),
    ];
    for (n, w) in [(6, 6), (8, 8)] {
        for seed in 1..=3 {
            out.push((format!("tight_{n}x{w}_{seed}"), tight(n, w, seed)));
        }
    }
    out
}

/// `n` random boxes covering 80-100% of a `w x w` square; deterministic in
/// `seed`.
pub fn tight(n: usize, w: i64, seed: u64) -> Instance {
    let mut state = seed;
    let mut next = |m: i64| {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 33) as i64 % m + 1
    };
    loop {
        let sizes: Vec<Vec<i64>> = (0..n).map(|_| vec![next(w / 2 + 1), next(w / 2 + 1)]).collect();
        let area: i64 = sizes.iter().map(|s| s[0] * s[1]).sum();
        if area * 10 >= 8 * w * w && area <= w * w {
            let refs: Vec<&[i64]> = sizes.iter().map(Vec::as_slice).collect();
            return Instance::from_integers(&[w, w], &refs).unwrap();
        }
    }
}

/// Every instance in every file of `dir`, converted from ngcut format.
/// Files that fail to parse are reported and skipped.
pub fn ngcut_instances(dir: &Path) -> std::io::Result<Vec<(String, Instance)>> {
    let mut files: Vec<_> = std::fs::read_dir(dir)?.filter_map(|e| e.ok()).map(|e| e.path()).collect();
    files.sort();
    let mut out = Vec::new();
    for path in files.iter().filter(|p| p.is_file()) {
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("?").to_string();
        let converted = match ngcut::parse(&std::fs::read_to_string(path)?) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("skipping {}: {e}", path.display());
                continue;
            }
        };
        for (k, c) in converted.into_iter().enumerate() {
            match c.instance.instance(true) {
                Ok((inst, _)) => out.push((format!("{name}-{}", k + 1), inst)),
                Err(e) => eprintln!("skipping {name}-{}: {e:?}", k + 1),
            }
        }
    }
    Ok(out)
}
