// How well MAX finds the blocks of a planted network, over a few seeds.

use simpair::prelude::*;

pub fn run_example() -> Result<f64> {
    let mut total = 0.0;
    let seeds = 0..5u64;
    let count = seeds.clone().count() as f64;
    for seed in seeds {
        let spec = SyntheticSpec::default().with_seed(seed);
        let (m, planted) = generate_planted_citation_matrix(&spec)?;
        let r = build_communities(&select_max(&build_similarity_matrix(&m), None), m.n_nodes())?;
        let score = nmi(&extract_partition(&r, Level::Real), &planted)?;
        println!(
            "seed {seed}: {} blocks, {} cores, {} real-communities, NMI {score:.3}",
            spec.n_blocks(),
            r.cores.len(),
            r.real_count()
        );
        total += score;
    }
    let mean = total / count;
    println!("mean NMI {mean:.3}");
    Ok(mean)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
