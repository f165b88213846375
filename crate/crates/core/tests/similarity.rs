#![allow(clippy::needless_range_loop)]

use proptest::prelude::*;
use simpair::similarity::{build_similarity_matrix, normalize_rows, CitationMatrix};

/// Straight dense evaluation: normalize each row by its sum, then
/// dot / (norm * norm) with plain loops over every column.
fn dense_oracle(counts: &[Vec<u64>]) -> Vec<Vec<f64>> {
    let n = counts.len();
    let rows: Vec<Vec<f64>> = counts
        .iter()
        .map(|r| {
            let s: u64 = r.iter().sum();
            r.iter()
                .map(|&c| if s == 0 { 0.0 } else { c as f64 / s as f64 })
                .collect()
        })
        .collect();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut dot = 0.0;
            let mut ni = 0.0;
            let mut nj = 0.0;
            for k in 0..n {
                dot += rows[i][k] * rows[j][k];
                ni += rows[i][k] * rows[i][k];
                nj += rows[j][k] * rows[j][k];
            }
            out[i][j] = if ni == 0.0 || nj == 0.0 {
                0.0
            } else {
                dot / (ni.sqrt() * nj.sqrt())
            };
        }
    }
    out
}

/// Sparse-ish random count matrices: most cells zero, a few all-zero rows.
fn count_matrix(max_n: usize) -> impl Strategy<Value = Vec<Vec<u64>>> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(
            prop::collection::vec(
                prop_oneof![6 => Just(0u64), 3 => 1u64..20, 1 => 20u64..5_000],
                n,
            ),
            n,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn matches_dense_oracle(counts in count_matrix(32)) {
        let s = build_similarity_matrix(&CitationMatrix::from_dense(&counts).unwrap());
        let oracle = dense_oracle(&counts);
        for i in 0..counts.len() {
            for j in 0..counts.len() {
                if i != j {
                    prop_assert!((s.get(i, j) - oracle[i][j]).abs() <= 1e-12,
                        "S[{i}][{j}] = {} vs oracle {}", s.get(i, j), oracle[i][j]);
                }
            }
        }
    }

    #[test]
    fn symmetric_and_in_range(counts in count_matrix(32)) {
        let s = build_similarity_matrix(&CitationMatrix::from_dense(&counts).unwrap());
        let n = counts.len();
        for i in 0..n {
            for j in 0..n {
                if i == j { continue; }
                prop_assert!((s.get(i, j) - s.get(j, i)).abs() <= 1e-12);
                prop_assert!(s.get(i, j) >= 0.0 && s.get(i, j) <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn row_scaling_changes_nothing(counts in count_matrix(16), row in 0usize..16, factor in 2u64..50) {
        let n = counts.len();
        let row = row % n;
        let mut scaled = counts.clone();
        for c in &mut scaled[row] {
            *c *= factor;
        }
        let a = CitationMatrix::from_dense(&counts).unwrap();
        let b = CitationMatrix::from_dense(&scaled).unwrap();
        let (ra, rb) = (normalize_rows(&a), normalize_rows(&b));
        for k in 0..n {
            prop_assert!((ra[row].get(k) - rb[row].get(k)).abs() <= 1e-12);
        }
        let (sa, sb) = (build_similarity_matrix(&a), build_similarity_matrix(&b));
        for j in 0..n {
            if j != row {
                prop_assert!((sa.get(row, j) - sb.get(row, j)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn normalized_rows_sum_to_one(counts in count_matrix(24)) {
        for r in normalize_rows(&CitationMatrix::from_dense(&counts).unwrap()) {
            if r.is_zero() {
                prop_assert!(r.entries().is_empty());
            } else {
                let s: f64 = r.entries().iter().map(|e| e.1).sum();
                prop_assert!((s - 1.0).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn parallel_build_is_bitwise_stable() {
    let counts: Vec<Vec<u64>> = (0..60)
        .map(|i| {
            (0..60)
                .map(|j| ((i * 31 + j * 17) % 7) as u64 * ((i + j) % 3) as u64)
                .collect()
        })
        .collect();
    let m = CitationMatrix::from_dense(&counts).unwrap();
    let reference = build_similarity_matrix(&m);
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| build_similarity_matrix(&m));
    for i in 0..60 {
        for j in 0..60 {
            assert_eq!(reference.get(i, j).to_bits(), single.get(i, j).to_bits());
        }
    }
}
