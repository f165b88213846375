use simpair::prelude::*;

/// Splitting one community of a two-way partition costs a little NMI;
/// an unrelated partition costs almost all of it.
pub fn run_example() -> Result<[f64; 3]> {
    let truth = Partition::from_labels(&[0, 0, 1, 1]);
    let split = Partition::from_labels(&[0, 1, 2, 2]);
    let crossed = Partition::from_labels(&[0, 1, 0, 1]);

    println!(
        "H(truth) = {:.4} bits, H(split) = {:.4} bits",
        entropy(&truth),
        entropy(&split)
    );
    println!(
        "H(truth, split) = {:.4} bits",
        joint_entropy(&truth, &split)?
    );

    let scores = [
        nmi(&truth, &truth)?,
        nmi(&truth, &split)?,
        nmi(&truth, &crossed)?,
    ];
    println!(
        "NMI same = {:.3}, split = {:.3}, crossed = {:.3}",
        scores[0], scores[1], scores[2]
    );
    Ok(scores)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
