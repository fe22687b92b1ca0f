//! Replace every link of a triangle by a 4-cycle and compute the reliability
//! from the inner distance profile, without expanding the graph.

use dcr::composition::{distance_profile, dcr_composed, ReplacementSpec};
use dcr::factorization::dcr;
use dcr::generators::{cycle, cycle_graph, path};
use dcr::instance_file::write_instance;
use dcr::{ratio, Instance, NodeId};

fn main() -> dcr::Result<()> {
    let outer = cycle(3, ratio(1, 1))?;
    let inner = Instance::new(cycle_graph(4, ratio(3, 4)), NodeId(0), NodeId(2), 3)?;

    let profile = distance_profile(inner.graph(), inner.source(), inner.target(), 3)?;
    println!("inner profile: {}", profile.to_json());

    for d in 2..=6 {
        let spec = ReplacementSpec::new(&outer, &inner, d);
        let composed = dcr_composed(&spec)?;
        let expanded = spec.expand()?;
        assert_eq!(composed, dcr(&expanded)?);
        println!("d={d}: {composed}");
    }
    let spec = ReplacementSpec::new(&path(3, ratio(1, 1))?, &inner, 4);
    print!("path of two 4-cycles:\n{}", write_instance(&spec.expand()?)?);
    Ok(())
}
