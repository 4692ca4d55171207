//! Shared generators and oracles for the property suites.
#![allow(dead_code)] // each test target uses its own subset

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use hyperstruct::entangle::TensorState;
use hyperstruct::nest::{FiniteTopology, NestFamily, NestWord, PointSet};
use hyperstruct::structure::{Hyperstructure, Property, Support};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random hyperstructure built exclusively through library operations, so
/// it must satisfy every law. Depth at most 4, element count well below 200.
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
            let members: BTreeSet<String> = pool
                .choose_multiple(rng, k)
                .cloned()
                .collect();
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
                h = h.with_element(level + 1, &format!("x{}_{i}", level + 1)).unwrap();
            }
        }
    }
    h
}

/// A random finite topology on up to 5 points: the closure of a few random
/// subsets under union and intersection.
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
    // Close under pairwise union and intersection.
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

/// A random nest family over `topology`, monotone by construction: every
/// index value is tied to one open and each word takes the intersection of
/// its indices' opens, so dropping any position can only grow the set.
pub fn random_nest_family(rng: &mut ChaCha8Rng, topology: &FiniteTopology) -> NestFamily {
    let depth = rng.gen_range(1..=3);
    let index_range = rng.gen_range(1..=3u32);
    let opens: Vec<PointSet> = topology.opens().iter().cloned().collect();
    let index_open: BTreeMap<u32, PointSet> = (1..=index_range)
        .map(|i| (i, opens[rng.gen_range(0..opens.len())].clone()))
        .collect();
    let mut words: BTreeMap<NestWord, PointSet> = BTreeMap::new();
    let full: PointSet = topology.points().clone();
    let mut frontier = vec![(NestWord::default(), full)];
    words.insert(NestWord::default(), topology.points().clone());
    for _ in 0..depth {
        let mut next = Vec::new();
        for (word, set) in frontier {
            for i in 1..=index_range {
                if rng.gen_bool(0.8) {
                    let child = word.child(i);
                    let child_set: PointSet =
                        set.intersection(&index_open[&i]).cloned().collect();
                    words.insert(child.clone(), child_set.clone());
                    next.push((child, child_set));
                }
            }
        }
        frontier = next;
    }
    NestFamily::new(depth, words).unwrap()
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

/// Random factor dimensions with at least two factors and total dimension at
/// most `max_total`.
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
/// the raw amplitude matrix, counting pivots above `tol`. Written against
/// plain slices so it shares nothing with the SVD path it cross-checks.
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

/// Asserts the canonical form: unit norm and a positive real leading
/// amplitude.
pub fn assert_canonical(state: &TensorState) {
    let norm: f64 = state.amps().iter().map(|a| a.norm_sqr()).sum();
    assert!((norm - 1.0).abs() < 1e-9, "norm^2 = {norm}");
    let lead = state
        .amps()
        .iter()
        .find(|a| a.norm() > 1e-12)
        .expect("canonical states have a leading amplitude");
    assert!(
        lead.im.abs() < 1e-9 && lead.re > 0.0,
        "leading amplitude {lead} is not phase-fixed"
    );
}
