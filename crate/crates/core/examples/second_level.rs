// Coarse-grain a network by its real-communities and detect again on
// the community-by-community citation matrix.

use simpair::prelude::*;

pub fn run_example() -> Result<(usize, usize)> {
    let spec = SyntheticSpec {
        volume: 30_000,
        ..SyntheticSpec::uniform(6, 10).with_seed(5)
    };
    let (m, _) = generate_planted_citation_matrix(&spec)?;
    let first = build_communities(&select_max(&build_similarity_matrix(&m), None), m.n_nodes())?;
    let partition = extract_partition(&first, Level::Real);
    println!(
        "level 1: {} nodes -> {} communities",
        m.n_nodes(),
        partition.n_communities()
    );

    let coarse = renormalize(&m, &partition)?;
    assert_eq!(coarse.total(), m.total());
    let second = build_communities(
        &select_max(&build_similarity_matrix(&coarse), None),
        coarse.n_nodes(),
    )?;
    println!(
        "level 2: {} nodes -> {} communities",
        coarse.n_nodes(),
        second.real_count()
    );
    Ok((partition.n_communities(), second.real_count()))
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
