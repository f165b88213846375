// Replace MAX by a random choice for a growing share of nodes and watch
// the community counts and NMI drift.

use simpair::prelude::*;
use simpair::sweep::run_probability_sweep;

pub fn run_example() -> Result<SweepResult> {
    let spec = SyntheticSpec {
        volume: 20_000,
        ..SyntheticSpec::uniform(4, 15)
    };
    let cfg = ExperimentConfig {
        p_grid: vec![0.0, 0.25, 0.5, 0.75, 1.0],
        repetitions: 6,
        base_seed: RngSeed(1),
        ..ExperimentConfig::new(InputSource::Synthetic(spec))
    };
    let result = run_probability_sweep(&cfg)?;
    println!(
        "{:<5} {:>5} {:>7} {:>7} {:>9} {:>9}",
        "kind", "p", "cores", "reals", "nmi_core", "nmi_real"
    );
    for row in &result.rows {
        println!(
            "{:<5} {:>5.2} {:>7.1} {:>7.1} {:>9.3} {:>9.3}",
            row.kind,
            row.param,
            row.cores.mean,
            row.reals.mean,
            row.nmi_core.mean,
            row.nmi_real.mean
        );
    }
    Ok(result)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
