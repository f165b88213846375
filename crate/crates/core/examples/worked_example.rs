// Ten ranked pairs over ten journals, replayed through the community
// builder: three cores, one tide and two real-communities.

use simpair::prelude::*;

const PAIRS: [(usize, usize, f64); 10] = [
    (2, 3, 0.4988),
    (3, 2, 0.4988),
    (5, 10, 0.3311),
    (10, 5, 0.3311),
    (1, 2, 0.2211),
    (6, 9, 0.2209),
    (9, 5, 0.2109),
    (8, 10, 0.1667),
    (4, 8, 0.1521),
    (7, 1, 0.1456),
];

fn names(members: &[NodeId]) -> Vec<usize> {
    members.iter().map(|n| n.0 + 1).collect()
}

pub fn run_example() -> Result<DetectionResult> {
    let pairs = RankedPairList::from_pairs(
        PAIRS
            .iter()
            .map(|&(a, b, s)| RankedPair::new(a - 1, b - 1, s))
            .collect(),
    );
    let result = build_communities(&pairs, 10)?;

    for core in &result.cores {
        println!("core {}: {:?}", core.id, names(&core.members));
    }
    for tide in &result.tides {
        println!(
            "tide ({}, {}) joins cores {} and {}",
            tide.pair.selector.0 + 1,
            tide.pair.selected.0 + 1,
            tide.core_a,
            tide.core_b
        );
    }
    for real in &result.reals {
        println!(
            "real {} from cores {:?}: {:?}",
            real.id,
            real.core_ids,
            names(&real.members)
        );
    }

    assert_eq!(names(&result.reals[1].members), vec![5, 10, 8, 4, 6, 9]);
    Ok(result)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
