//! Which links of the example graph each irrelevance condition certifies,
//! against the exact answer from exhaustive relevance testing.

use dcr::generators::figred;
use dcr::irrelevance::{oracle_scan, prune_irrelevant, scan, Condition};
use dcr::ratio;

fn main() -> dcr::Result<()> {
    for d in [5, 6] {
        let inst = figred(ratio(1, 2)).with_diameter(d)?;
        println!("d = {d}");
        for cond in [Condition::C1, Condition::C2, Condition::C3] {
            let certs = scan(&inst, cond);
            let shown: Vec<String> = certs
                .iter()
                .map(|c| {
                    let (a, b) = c.endpoints;
                    let sums = c.witness.map(|[x, y]| format!(" sums {x}/{y}")).unwrap_or_default();
                    format!("{}={{{a},{b}}}{sums}", c.link)
                })
                .collect();
            println!("  {cond:?}: [{}]", shown.join(", "));
        }
        let exact: Vec<String> = oracle_scan(&inst).iter().map(|c| c.link.to_string()).collect();
        println!("  exact: [{}]", exact.join(", "));
        let (pruned, certs) = prune_irrelevant(&inst, Condition::C3);
        println!(
            "  pruning with C3 to a fixed point removes {} links, {} remain",
            certs.len(),
            pruned.graph().link_count()
        );
    }
    Ok(())
}
