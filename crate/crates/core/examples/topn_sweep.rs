// PSIM restricted to each node's n most similar partners. Requests above
// the number of available partners are clamped.

use simpair::prelude::*;
use simpair::sweep::run_topn_sweep;

pub fn run_example() -> Result<SweepResult> {
    let spec = SyntheticSpec {
        volume: 20_000,
        ..SyntheticSpec::uniform(4, 15)
    };
    let cfg = ExperimentConfig {
        topn_grid: vec![1, 2, 3, 5, 10, 20, 100],
        repetitions: 6,
        ..ExperimentConfig::new(InputSource::Synthetic(spec))
    };
    let result = run_topn_sweep(&cfg)?;
    for row in &result.rows {
        println!(
            "top-{:<3} NMI(core) {:.3}  NMI(real) {:.3}",
            row.param, row.nmi_core.mean, row.nmi_real.mean
        );
    }
    match result.first_below("psim", Level::Core, 0.5) {
        Some(n) => println!("core NMI first drops below 0.5 at n = {n}"),
        None => println!("core NMI never drops below 0.5"),
    }
    Ok(result)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
