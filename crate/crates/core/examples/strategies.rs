// Every pair-selection strategy on the same planted network, scored
// against the deterministic MAX result.

use simpair::prelude::*;

pub fn run_example() -> Result<Vec<(String, usize, usize, f64)>> {
    let spec = SyntheticSpec {
        volume: 10_000,
        ..SyntheticSpec::uniform(3, 12).with_seed(3)
    };
    let (m, _) = generate_planted_citation_matrix(&spec)?;
    let s = build_similarity_matrix(&m);
    let n = m.n_nodes();

    let reference = extract_partition(&build_communities(&select_max(&s, None), n)?, Level::Real);

    let strategies = [
        SelectionStrategy::Max,
        SelectionStrategy::Psim,
        SelectionStrategy::P,
        SelectionStrategy::PsimTopN(3),
        SelectionStrategy::MaxDeleted(0.5),
        SelectionStrategy::Mixed {
            kind: RandomKind::Psim,
            probability: 0.3,
        },
    ];
    let mut rows = Vec::new();
    println!(
        "{:<12} {:>5} {:>5} {:>8}",
        "strategy", "cores", "reals", "nmi"
    );
    for strategy in strategies {
        let pairs = strategy.select(&s, RngSeed(7))?;
        let r = build_communities(&pairs, n)?;
        let score = nmi(&extract_partition(&r, Level::Real), &reference)?;
        println!(
            "{:<12} {:>5} {:>5} {:>8.3}",
            strategy.name(),
            r.cores.len(),
            r.real_count(),
            score
        );
        rows.push((
            strategy.name().to_string(),
            r.cores.len(),
            r.real_count(),
            score,
        ));
    }
    assert_eq!(rows[0].3, 1.0);
    Ok(rows)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
