//! Generators, oracles, and a binary runner for the acceptance and CLI
//! suites.
#![allow(dead_code)] // each test target uses its own subset

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::{Command, Output};

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use hyperstruct::entangle::TensorState;
use hyperstruct::nest::{FiniteTopology, PointSet};
use hyperstruct::structure::{Hyperstructure, Property, Support};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random hyperstructure built exclusively through library operations:
/// depth at most 4, element count well below 200.
pub fn random_hyperstructure(rng: &mut ChaCha8Rng) -> Hyperstructure {
    let depth = rng.gen_range(0..=4);
    let mut h = Hyperstructure::new(depth);
    let base = rng.gen_range(1..=20);
    for i in 0..base {
        h = h.with_element(0, &format!("e0_{i}")).unwrap();
    }
    let tags = ["red", "blue", "pair", "watch"];
    let mut serial = 0;
    for level in 0..depth {
        let bonds = rng.gen_range(0..=8);
        for _ in 0..bonds {
            let pool: Vec<String> = h.level(level).unwrap().iter().cloned().collect();
            if pool.is_empty() {
                break;
            }
            let identity = rng.gen_bool(0.2);
            let k = if identity {
                1
            } else {
                rng.gen_range(1..=pool.len().min(4))
            };
            let members: BTreeSet<String> = pool.choose_multiple(rng, k).cloned().collect();
            let tag = tags[rng.gen_range(0..tags.len())];
            let property = if rng.gen_bool(0.3) {
                Property::with_payload(tag, "payload")
            } else {
                Property::tag(tag)
            };
            let support = Support::new(level, members, property).unwrap();
            h = h
                .add_bond(support, &format!("b{level}_{serial}"), identity)
                .unwrap();
            serial += 1;
        }
        if rng.gen_bool(0.4) {
            for i in 0..rng.gen_range(1..=2) {
                h = h
                    .with_element(level + 1, &format!("x{}_{i}", level + 1))
                    .unwrap();
            }
        }
    }
    h
}

/// A random state with uniform complex amplitudes, canonicalized.
pub fn random_state(rng: &mut ChaCha8Rng, dims: &[usize]) -> TensorState {
    let len: usize = dims.iter().product();
    loop {
        let amps: Vec<Complex64> = (0..len)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        if let Ok(state) = TensorState::new(dims.to_vec(), amps) {
            return state;
        }
    }
}

/// Random factor dimensions with at least two factors and a bounded total.
pub fn random_dims(rng: &mut ChaCha8Rng, max_total: usize) -> Vec<usize> {
    loop {
        let factors = rng.gen_range(2..=5);
        let dims: Vec<usize> = (0..factors).map(|_| rng.gen_range(2..=4)).collect();
        if dims.iter().product::<usize>() <= max_total {
            return dims;
        }
    }
}

/// Brute-force rank oracle: Gaussian elimination with partial pivoting over
/// the raw amplitudes, counting pivots above `tol`. Independent of the SVD
/// path it cross-checks.
pub fn row_reduction_rank(amps: &[Complex64], rows: usize, cols: usize, tol: f64) -> usize {
    let mut m: Vec<Complex64> = amps.to_vec();
    assert_eq!(m.len(), rows * cols);
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let mut pivot = row;
        for r in row..rows {
            if m[r * cols + col].norm() > m[pivot * cols + col].norm() {
                pivot = r;
            }
        }
        if m[pivot * cols + col].norm() <= tol {
            continue;
        }
        if pivot != row {
            for c in 0..cols {
                m.swap(row * cols + c, pivot * cols + c);
            }
        }
        let lead = m[row * cols + col];
        for r in (row + 1)..rows {
            let factor = m[r * cols + col] / lead;
            if factor.norm_sqr() == 0.0 {
                continue;
            }
            for c in col..cols {
                let sub = factor * m[row * cols + c];
                m[r * cols + c] -= sub;
            }
        }
        rank += 1;
        row += 1;
    }
    rank
}

/// A random finite topology on up to 5 points: the closure of random seeds
/// under union and intersection.
pub fn random_topology(rng: &mut ChaCha8Rng) -> FiniteTopology {
    let n = rng.gen_range(2..=5);
    let points: PointSet = (0..n).map(|i| format!("p{i}")).collect();
    let names: Vec<String> = points.iter().cloned().collect();
    let mut opens: BTreeSet<PointSet> = [PointSet::new(), points.clone()].into();
    for _ in 0..rng.gen_range(1..=3) {
        let set: PointSet = names
            .iter()
            .filter(|_| rng.gen_bool(0.5))
            .cloned()
            .collect();
        opens.insert(set);
    }
    loop {
        let list: Vec<PointSet> = opens.iter().cloned().collect();
        let mut added = false;
        for a in &list {
            for b in &list {
                let union: PointSet = a.union(b).cloned().collect();
                let inter: PointSet = a.intersection(b).cloned().collect();
                added |= opens.insert(union);
                added |= opens.insert(inter);
            }
        }
        if !added {
            break;
        }
    }
    FiniteTopology::new(points, opens).unwrap()
}

/// Draws a random admissible two-stage nesting: disjoint mids inside the
/// full space, disjoint inners each inside exactly one mid. `None` when the
/// topology is too poor.
pub fn random_nesting(
    r: &mut ChaCha8Rng,
    topology: &FiniteTopology,
) -> Option<(Vec<PointSet>, Vec<PointSet>, PointSet)> {
    let outer = topology.points().clone();
    let mut opens: Vec<PointSet> = topology
        .opens()
        .iter()
        .filter(|o| !o.is_empty())
        .cloned()
        .collect();
    opens.shuffle(r);
    let mut mids: Vec<PointSet> = Vec::new();
    for candidate in &opens {
        if mids.len() >= 3 {
            break;
        }
        if mids
            .iter()
            .all(|m| m.intersection(candidate).next().is_none())
        {
            mids.push(candidate.clone());
        }
    }
    if mids.is_empty() {
        return None;
    }
    opens.shuffle(r);
    let mut inners: Vec<PointSet> = Vec::new();
    for candidate in &opens {
        if inners.len() >= 4 {
            break;
        }
        let containers = mids.iter().filter(|m| candidate.is_subset(m)).count();
        if containers == 1
            && inners
                .iter()
                .all(|u| u.intersection(candidate).next().is_none())
        {
            inners.push(candidate.clone());
        }
    }
    if inners.is_empty() {
        return None;
    }
    Some((inners, mids, outer))
}

/// Runs the CLI binary with the given arguments.
pub fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperstruct"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// Last non-empty stdout line parsed as JSON (the machine report line).
pub fn machine_line(output: &Output) -> serde_json::Value {
    let stdout = String::from_utf8_lossy(&output.stdout);
    let line = stdout
        .lines()
        .rev()
        .find(|l| !l.trim().is_empty())
        .unwrap_or_else(|| panic!("no stdout lines in {stdout:?}"));
    serde_json::from_str(line)
        .unwrap_or_else(|e| panic!("trailing line {line:?} is not JSON: {e}"))
}

/// Scratch file path under the cargo-provided test temp dir.
pub fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(&dir).expect("tmpdir exists");
    dir.join(name)
}
