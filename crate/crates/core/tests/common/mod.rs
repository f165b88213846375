#![allow(dead_code)]

use std::collections::BTreeSet;

use simpair::community::DetectionResult;
use simpair::selection::{RankedPair, RankedPairList};

/// The ten selected pairs of the worked example, nodes numbered 1..=10.
pub const WORKED_EXAMPLE: [(usize, usize, f64); 10] = [
    (2, 3, 0.4988),
    (3, 2, 0.4988),
    (5, 10, 0.3311),
    (10, 5, 0.3311),
    (1, 2, 0.2211),
    (6, 9, 0.2209),
    (9, 5, 0.2109),
    (8, 10, 0.1667),
    (4, 8, 0.1521),
    (7, 1, 0.1456),
];

/// The worked example shifted to 0-based ids over 10 nodes.
pub fn worked_example_pairs() -> RankedPairList {
    RankedPairList::from_pairs(
        WORKED_EXAMPLE
            .iter()
            .map(|&(a, b, s)| RankedPair::new(a - 1, b - 1, s))
            .collect(),
    )
}

/// Node lists shifted back to the 1-based numbering of the example.
pub fn one_based(groups: impl IntoIterator<Item = Vec<usize>>) -> Vec<Vec<usize>> {
    groups
        .into_iter()
        .map(|g| g.into_iter().map(|n| n + 1).collect())
        .collect()
}

/// Output of the naive builder, in the same shape the library reports.
#[derive(Debug, PartialEq, Eq)]
pub struct NaiveResult {
    pub cores: Vec<Vec<usize>>,
    pub tides: Vec<(usize, usize, usize, usize)>,
    pub reals: Vec<Vec<usize>>,
    pub real_core_ids: Vec<Vec<usize>>,
    pub unassigned: Vec<usize>,
}

/// Quadratic re-implementation with explicit sets: membership is found by
/// scanning every core, and real-communities by repeatedly merging sets of
/// core ids until no tide crosses two sets.
pub fn naive_build(pairs: &[(usize, usize)], n: usize) -> NaiveResult {
    let mut cores: Vec<Vec<usize>> = Vec::new();
    let mut tides = Vec::new();
    let find = |cores: &Vec<Vec<usize>>, x: usize| cores.iter().position(|c| c.contains(&x));
    for &(a, b) in pairs {
        match (find(&cores, a), find(&cores, b)) {
            (None, None) => cores.push(if a == b { vec![a] } else { vec![a, b] }),
            (Some(c), None) => cores[c].push(b),
            (None, Some(c)) => cores[c].push(a),
            (Some(x), Some(y)) if x == y => {}
            (Some(x), Some(y)) => tides.push((a, b, x, y)),
        }
    }
    let mut groups: Vec<BTreeSet<usize>> = (0..cores.len()).map(|c| BTreeSet::from([c])).collect();
    loop {
        let mut merged = false;
        'scan: for &(_, _, x, y) in &tides {
            let gx = groups.iter().position(|g| g.contains(&x)).unwrap();
            let gy = groups.iter().position(|g| g.contains(&y)).unwrap();
            if gx != gy {
                let taken = groups[gy].clone();
                groups[gx].extend(taken);
                groups.remove(gy);
                merged = true;
                break 'scan;
            }
        }
        if !merged {
            break;
        }
    }
    groups.sort_by_key(|g| *g.iter().next().unwrap());
    let reals = groups
        .iter()
        .map(|g| g.iter().flat_map(|&c| cores[c].iter().copied()).collect())
        .collect();
    let real_core_ids = groups.iter().map(|g| g.iter().copied().collect()).collect();
    let assigned: BTreeSet<usize> = cores.iter().flatten().copied().collect();
    NaiveResult {
        cores,
        tides,
        reals,
        real_core_ids,
        unassigned: (0..n).filter(|i| !assigned.contains(i)).collect(),
    }
}

pub fn as_naive(r: &DetectionResult) -> NaiveResult {
    let ids = |v: &[simpair::similarity::NodeId]| v.iter().map(|x| x.0).collect::<Vec<_>>();
    NaiveResult {
        cores: r.cores.iter().map(|c| ids(&c.members)).collect(),
        tides: r
            .tides
            .iter()
            .map(|t| (t.pair.selector.0, t.pair.selected.0, t.core_a, t.core_b))
            .collect(),
        reals: r.reals.iter().map(|c| ids(&c.members)).collect(),
        real_core_ids: r.reals.iter().map(|c| c.core_ids.clone()).collect(),
        unassigned: ids(&r.unassigned),
    }
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for k in i..=j {
                r[idx[k]] = avg;
            }
            i = j + 1;
        }
        r
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx) * (a - mx)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my) * (b - my)).sum();
    cov / (vx * vy).sqrt()
}

/// One-sided sign test: P(X >= wins) for X ~ Binomial(wins + losses, 1/2).
pub fn sign_test_p_value(wins: usize, losses: usize) -> f64 {
    let n = wins + losses;
    let mut total = 0.0;
    for k in wins..=n {
        total += binomial(n, k);
    }
    total / 2f64.powi(n as i32)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
