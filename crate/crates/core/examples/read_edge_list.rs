// Load a labelled edge list and print the communities by name.

use simpair::io::read_edge_list;
use simpair::prelude::*;

const EDGES: &str = "\
# citing\tcited\tcount
Econometrica\tAER\t40
Econometrica\tJPE\t25
AER\tJPE\t30
AER\tEconometrica\t35
JPE\tAER\t28
JPE\tEconometrica\t20
Demography\tPopStudies\t15
Demography\tPopIndex\t12
PopStudies\tDemography\t18
PopStudies\tPopIndex\t10
PopIndex\tDemography\t6
PopIndex\tPopStudies\t5
Demography\tAER\t2
";

pub fn run_example() -> Result<Vec<Vec<String>>> {
    let m = read_edge_list(EDGES.as_bytes(), "inline")?;
    let labels = m.labels().expect("string ids are kept as labels").to_vec();
    let r = build_communities(&select_max(&build_similarity_matrix(&m), None), m.n_nodes())?;
    let groups: Vec<Vec<String>> = extract_partition(&r, Level::Real)
        .groups()
        .into_iter()
        .map(|g| g.into_iter().map(|i| labels[i].clone()).collect())
        .collect();
    for (k, g) in groups.iter().enumerate() {
        println!("community {k}: {}", g.join(", "));
    }
    Ok(groups)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
