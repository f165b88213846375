#![allow(clippy::needless_range_loop)]

use proptest::prelude::*;
use simpair::io::write_pairs_tsv;
use simpair::seed::RngSeed;
use simpair::selection::{
    apply_random_deletion, deletions_per_row, mixture_uses_max, select_max, select_mixed,
    select_psim, select_random, RandomKind, RankedPairList, SelectionStrategy, SimilarityMask,
};
use simpair::similarity::SimilarityMatrix;

fn sim(rows: Vec<Vec<f64>>) -> SimilarityMatrix {
    SimilarityMatrix::from_dense(rows).unwrap()
}

/// Symmetric matrix with off-diagonal values drawn from `vals`.
fn symmetric(n: usize, vals: &[f64]) -> SimilarityMatrix {
    let mut rows = vec![vec![0.0; n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            rows[i][j] = vals[k % vals.len()];
            rows[j][i] = rows[i][j];
            k += 1;
        }
    }
    sim(rows)
}

fn partner_frequencies(
    s: &SimilarityMatrix,
    node: usize,
    draws: u64,
    pick: impl Fn(RngSeed) -> RankedPairList,
) -> Vec<f64> {
    let mut counts = vec![0u64; s.n_nodes()];
    for seed in 0..draws {
        let l = pick(RngSeed(seed));
        let p = l
            .iter()
            .find(|p| p.selector.0 == node)
            .expect("node picked nobody");
        counts[p.selected.0] += 1;
    }
    counts.iter().map(|&c| c as f64 / draws as f64).collect()
}

fn pairs_bytes(l: &RankedPairList) -> Vec<u8> {
    let mut out = Vec::new();
    write_pairs_tsv(l, &mut out).unwrap();
    out
}

#[test]
fn psim_splits_evenly_between_two_equal_candidates() {
    let s = sim(vec![
        vec![0.0, 0.5, 0.5],
        vec![0.5, 0.0, 0.2],
        vec![0.5, 0.2, 0.0],
    ]);
    let f = partner_frequencies(&s, 0, 10_000, |seed| select_psim(&s, seed, None));
    assert!((f[1] - 0.5).abs() <= 0.02, "{f:?}");
    assert!((f[2] - 0.5).abs() <= 0.02, "{f:?}");
}

#[test]
fn psim_frequencies_follow_similarity_weights() {
    let s = sim(vec![
        vec![0.0, 0.1, 0.3, 0.6],
        vec![0.1, 0.0, 0.2, 0.2],
        vec![0.3, 0.2, 0.0, 0.4],
        vec![0.6, 0.2, 0.4, 0.0],
    ]);
    let f = partner_frequencies(&s, 0, 10_000, |seed| select_psim(&s, seed, None));
    for (j, expected) in [(1, 0.1), (2, 0.3), (3, 0.6)] {
        assert!((f[j] - expected).abs() <= 0.02, "partner {j}: {f:?}");
    }
}

#[test]
fn uniform_selection_is_uniform() {
    let s = symmetric(4, &[0.9, 0.1, 0.4, 0.3, 0.7, 0.2]);
    for node in 0..4 {
        let f = partner_frequencies(&s, node, 12_000, |seed| select_random(&s, seed));
        for j in (0..4).filter(|&j| j != node) {
            assert!((f[j] - 1.0 / 3.0).abs() <= 0.02, "node {node}: {f:?}");
        }
        assert_eq!(f[node], 0.0);
    }
}

#[test]
fn mixture_coin_has_the_requested_rate() {
    let mut max_nodes = 0usize;
    for seed in 0..1_000 {
        max_nodes += mixture_uses_max(50, 0.5, RngSeed(seed))
            .iter()
            .filter(|&&m| m)
            .count();
    }
    let frac = max_nodes as f64 / 50_000.0;
    assert!((frac - 0.5).abs() <= 0.03, "{frac}");
}

#[test]
fn mixture_boundaries_reproduce_pure_strategies() {
    let s = symmetric(
        9,
        &[
            0.11, 0.52, 0.33, 0.24, 0.75, 0.16, 0.47, 0.38, 0.29, 0.6, 0.05,
        ],
    );
    for seed in 0..20 {
        let seed = RngSeed(seed);
        for kind in [RandomKind::Psim, RandomKind::P] {
            assert_eq!(
                pairs_bytes(&select_mixed(&s, 0.0, kind, seed)),
                pairs_bytes(&select_max(&s, None))
            );
        }
        assert_eq!(
            pairs_bytes(&select_mixed(&s, 1.0, RandomKind::P, seed)),
            pairs_bytes(&select_random(&s, seed))
        );
        assert_eq!(
            pairs_bytes(&select_mixed(&s, 1.0, RandomKind::Psim, seed)),
            pairs_bytes(&select_psim(&s, seed, None))
        );
    }
}

#[test]
fn deletion_mask_sizes_and_determinism() {
    let s = symmetric(11, &[0.3, 0.6, 0.2]);
    let mask = apply_random_deletion(&s, 0.5, RngSeed(4));
    for i in 0..11 {
        assert_eq!(mask.deleted(i).len(), 5);
        assert!(!mask.is_deleted(i, i));
    }
    assert_eq!(mask, apply_random_deletion(&s, 0.5, RngSeed(4)));
    assert_ne!(mask, apply_random_deletion(&s, 0.5, RngSeed(5)));
    let empty = apply_random_deletion(&s, 0.0, RngSeed(4));
    assert!((0..11).all(|i| empty.deleted(i).is_empty()));
    assert_eq!(select_max(&s, Some(&empty)), select_max(&s, None));
    assert_eq!(deletions_per_row(11, 0.5), 5);
}

#[test]
fn deletion_is_row_local() {
    // Across many seeds some row must lose a column whose mirror survives.
    let s = symmetric(12, &[0.3, 0.6, 0.2, 0.9]);
    let asymmetric = (0..50).any(|seed| {
        let m = apply_random_deletion(&s, 0.3, RngSeed(seed));
        (0..12).any(|i| m.deleted(i).iter().any(|&j| !m.is_deleted(j, i)))
    });
    assert!(asymmetric);
}

#[test]
fn random_strategies_are_deterministic_per_seed() {
    let s = symmetric(15, &[0.11, 0.52, 0.33, 0.24, 0.75, 0.16, 0.47]);
    for strategy in [
        SelectionStrategy::Psim,
        SelectionStrategy::P,
        SelectionStrategy::PsimTopN(3),
        SelectionStrategy::MaxDeleted(0.4),
        SelectionStrategy::Mixed {
            kind: RandomKind::Psim,
            probability: 0.3,
        },
    ] {
        let a = strategy.select(&s, RngSeed(77)).unwrap();
        let b = strategy.select(&s, RngSeed(77)).unwrap();
        assert_eq!(pairs_bytes(&a), pairs_bytes(&b), "{strategy:?}");
    }
}

fn tie_free(n: usize, salt: u64) -> SimilarityMatrix {
    // Distinct values from a fixed irrational stride.
    let mut rows = vec![vec![0.0; n]; n];
    let mut k = salt as f64;
    for i in 0..n {
        for j in (i + 1)..n {
            k += 1.0;
            rows[i][j] = (k * 0.618_033_988_749_894_9).fract();
            rows[j][i] = rows[i][j];
        }
    }
    sim(rows)
}

/// Argmax sets by brute force over every row.
fn argmax_oracle(s: &SimilarityMatrix, mask: Option<&SimilarityMask>) -> Vec<(usize, usize)> {
    let n = s.n_nodes();
    let mut out = Vec::new();
    for i in 0..n {
        let visible: Vec<usize> = (0..n)
            .filter(|&j| j != i && !mask.is_some_and(|m| m.is_deleted(i, j)))
            .collect();
        let best = visible.iter().map(|&j| s.get(i, j)).fold(0.0, f64::max);
        if best > 0.0 {
            out.extend(
                visible
                    .iter()
                    .filter(|&&j| s.get(i, j) == best)
                    .map(|&j| (i, j)),
            );
        }
    }
    out.sort_unstable();
    out
}

fn pair_set(l: &RankedPairList) -> Vec<(usize, usize)> {
    let mut v: Vec<_> = l.iter().map(|p| (p.selector.0, p.selected.0)).collect();
    v.sort_unstable();
    v
}

#[test]
fn topn_one_equals_max_without_ties() {
    for salt in 0..20 {
        let s = tie_free(10, salt * 7);
        let max = select_max(&s, None);
        for seed in 0..5 {
            assert_eq!(
                pair_set(&select_psim(&s, RngSeed(seed), Some(1))),
                pair_set(&max)
            );
        }
    }
}

fn similarity_with_ties() -> impl Strategy<Value = SimilarityMatrix> {
    (2usize..14).prop_flat_map(|n| {
        prop::collection::vec(
            prop::sample::select(vec![0.0, 0.1, 0.25, 0.5, 0.75, 1.0]),
            n * n,
        )
        .prop_map(move |v| {
            let mut rows = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in (i + 1)..n {
                    rows[i][j] = v[i * n + j];
                    rows[j][i] = v[i * n + j];
                }
            }
            sim(rows)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn max_matches_argmax_oracle(s in similarity_with_ties(), d in 0.0f64..1.0, seed in any::<u64>()) {
        prop_assert_eq!(pair_set(&select_max(&s, None)), argmax_oracle(&s, None));
        let mask = apply_random_deletion(&s, d, RngSeed(seed));
        prop_assert_eq!(pair_set(&select_max(&s, Some(&mask))), argmax_oracle(&s, Some(&mask)));
    }

    #[test]
    fn every_list_is_sorted_and_sized(s in similarity_with_ties(), seed in any::<u64>(), p in 0.0f64..=1.0) {
        let n = s.n_nodes();
        let seed = RngSeed(seed);
        let max = select_max(&s, None);
        let psim = select_psim(&s, seed, None);
        let rand = select_random(&s, seed);
        let mixed = select_mixed(&s, p, RandomKind::P, seed);
        for l in [&max, &psim, &rand, &mixed] {
            prop_assert!(l.is_sorted());
            prop_assert!(l.iter().all(|q| q.selector != q.selected));
            prop_assert!(l.iter().all(|q| q.similarity == s.get(q.selector.0, q.selected.0)));
        }
        prop_assert_eq!(rand.len(), n);
        let with_mass = (0..n).filter(|&i| (0..n).any(|j| j != i && s.get(i, j) > 0.0)).count();
        prop_assert_eq!(psim.len(), with_mass);
        prop_assert!(max.len() >= with_mass);
    }

    #[test]
    fn max_is_never_beaten(s in similarity_with_ties()) {
        for q in &select_max(&s, None) {
            let i = q.selector.0;
            prop_assert!((0..s.n_nodes()).all(|j| j == i || s.get(i, j) <= q.similarity));
        }
    }
}
