//! The bipartite gadget: build it from a few bipartite graphs and evaluate
//! its reliability, optionally checked by brute force on small cases.

use dcr::composition::cancela_petingi;
use dcr::factorization::dcr;
use dcr::generators::{complete_bipartite, even_cycle};
use dcr::instance_file::write_instance;
use dcr::oracle::{dcr_bruteforce, OracleConfig};
use dcr::ratio;

fn main() -> dcr::Result<()> {
    let graphs = [
        ("C4", even_cycle(4, ratio(1, 1))?),
        ("C6", even_cycle(6, ratio(1, 1))?),
        ("K2x3", complete_bipartite(2, 3, ratio(1, 1))),
        ("K3x3", complete_bipartite(3, 3, ratio(1, 1))),
    ];
    for (name, (b, part_a)) in &graphs {
        for d in 3..=5 {
            let inst = cancela_petingi(b, part_a, d)?;
            let value = dcr(&inst)?;
            if inst.graph().link_count() <= 20 {
                assert_eq!(value, dcr_bruteforce(&inst, &OracleConfig::default())?);
            }
            println!(
                "{name} d={d}: {} nodes, {} links, R = {value}",
                inst.graph().node_count(),
                inst.graph().link_count()
            );
        }
    }
    let (b, a) = &graphs[0].1;
    print!("gadget for C4 at d=3:\n{}", write_instance(&cancela_petingi(b, a, 3)?)?);
    Ok(())
}
