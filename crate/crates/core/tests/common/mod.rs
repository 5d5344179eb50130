//! Sequence families shared by the integration tests.
#![allow(dead_code)]

use degseq::digraph_core::Digraph;
use degseq::{DegreePair, IntPairSeq, IntSeq};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub const FAMILY_SEED: u64 = 0x5eed_d16a;

/// Every integer tuple of length `n` with entries in `0..=max`.
pub fn tuples(n: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..=max).map(move |v| {
                    let mut next = t.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    out
}

/// Every pair sequence of length `n` with entries `≤ max` and equal out and in sums.
pub fn exhaustive(n: usize, max: u32) -> Vec<IntPairSeq> {
    let all = tuples(n, max);
    let mut out = Vec::new();
    for outs in &all {
        let total: u32 = outs.iter().sum();
        for ins in all.iter().filter(|t| t.iter().sum::<u32>() == total) {
            out.push(IntPairSeq::from_columns(outs, ins).unwrap());
        }
    }
    out
}

pub fn exhaustive_up_to(max_n: usize, max: u32) -> Vec<IntPairSeq> {
    (1..=max_n).flat_map(|n| exhaustive(n, max)).collect()
}

fn uniform_equal_sum(rng: &mut ChaCha8Rng, n: usize) -> IntPairSeq {
    loop {
        let outs: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
        let ins: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
        if outs.iter().sum::<u32>() == ins.iter().sum::<u32>() {
            return IntPairSeq::from_columns(&outs, &ins).unwrap();
        }
    }
}

pub fn random_digraph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Digraph {
    let arcs: Vec<(usize, usize)> = (1..=n)
        .flat_map(|u| (1..=n).map(move |v| (u, v)))
        .filter(|&(u, v)| u != v)
        .filter(|_| rng.gen_bool(density))
        .collect();
    Digraph::from_arcs(n, arcs).unwrap()
}

/// 10,000 sequences: 2,500 for each of N = 5 and N = 6 crossed with two generators,
/// uniform entries `≤ 3` conditioned on equal sums, and degree sequences of random digraphs.
pub fn random_family() -> Vec<IntPairSeq> {
    let mut rng = ChaCha8Rng::seed_from_u64(FAMILY_SEED);
    let mut out = Vec::with_capacity(10_000);
    for n in [5, 6] {
        for _ in 0..2_500 {
            out.push(uniform_equal_sum(&mut rng, n));
        }
        for _ in 0..2_500 {
            let density = rng.gen_range(0.1..0.9);
            out.push(random_digraph(&mut rng, n, density).degree_sequence());
        }
    }
    out
}

/// The exhaustive part (N ≤ 4, entries ≤ 3) followed by the random sample.
pub fn criterion_family() -> Vec<IntPairSeq> {
    let mut family = exhaustive_up_to(4, 3);
    family.extend(random_family());
    family
}

/// Undirected sequences: all of length ≤ 6 with entries ≤ 3, then the out-degree
/// columns of `pairs`.
pub fn undirected_family(pairs: &[IntPairSeq]) -> Vec<IntSeq> {
    let mut out: Vec<IntSeq> = (1..=6).flat_map(|n| tuples(n, 3)).map(IntSeq::new).collect();
    out.extend(pairs.iter().map(|d| d.out_degrees()));
    out
}

/// Eulerian sequences of length `n` with entries `≤ n−1` and total `≤ max_total`.
pub fn eulerian(n: usize, max_total: u32) -> Vec<IntPairSeq> {
    tuples(n, n.saturating_sub(1) as u32)
        .into_iter()
        .filter(|t| t.iter().sum::<u32>() <= max_total)
        .map(|t| IntPairSeq::new(t.into_iter().map(|a| DegreePair::new(a, a)).collect()))
        .collect()
}

pub fn extreme(m: usize) -> IntPairSeq {
    let mut pairs = Vec::new();
    for t in 1..=m {
        let degree = ((3 * (m - t) + 1) as u32, (3 * t - 2) as u32);
        pairs.extend([degree; 3]);
    }
    IntPairSeq::from_pairs(&pairs)
}
