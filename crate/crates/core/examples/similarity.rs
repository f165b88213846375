// Row-normalized cosine similarity of a small citation matrix.

use simpair::prelude::*;

pub fn run_example() -> Result<SimilarityMatrix> {
    // Journals 0 and 1 cite the same places in the same proportions, at
    // very different volumes. Journal 3 never cites anyone.
    let m = CitationMatrix::from_dense(&[
        vec![2, 10, 5, 0],
        vec![20, 100, 50, 0],
        vec![0, 4, 1, 9],
        vec![0, 0, 0, 0],
    ])?;

    for (i, row) in normalize_rows(&m).iter().enumerate() {
        println!("c[{i}] = {:?}", row.entries());
    }

    let s = build_similarity_matrix(&m);
    for i in 0..s.n_nodes() {
        let cells: Vec<String> = (0..s.n_nodes())
            .map(|j| {
                if i == j {
                    "  -  ".into()
                } else {
                    format!("{:.3}", s.get(i, j))
                }
            })
            .collect();
        println!("S[{i}] = {}", cells.join(" "));
    }
    assert!((s.get(0, 1) - 1.0).abs() < 1e-12);
    assert_eq!(s.get(2, 3), 0.0);
    Ok(s)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
