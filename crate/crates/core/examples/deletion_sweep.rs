// MAX after hiding a random fraction of every node's similarities.

use simpair::prelude::*;
use simpair::sweep::run_deletion_sweep;

pub fn run_example() -> Result<SweepResult> {
    let spec = SyntheticSpec {
        volume: 20_000,
        ..SyntheticSpec::uniform(4, 15)
    };
    let cfg = ExperimentConfig {
        del_grid: vec![0.0, 0.3, 0.6, 0.9],
        repetitions: 6,
        ..ExperimentConfig::new(InputSource::Synthetic(spec))
    };
    let result = run_deletion_sweep(&cfg)?;
    for row in &result.rows {
        println!(
            "d = {:.1}: NMI(core) {:.3} +- {:.3}, NMI(real) {:.3} +- {:.3}",
            row.param, row.nmi_core.mean, row.nmi_core.std, row.nmi_real.mean, row.nmi_real.std
        );
    }
    // the first grid point deletes nothing and reproduces the reference
    assert_eq!(result.rows[0].nmi_real.mean, 1.0);
    Ok(result)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
