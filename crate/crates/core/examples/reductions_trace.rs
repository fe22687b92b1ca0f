//! Reduce the example graph, print the trace, replay it, and take one
//! factoring step on the reduced cycle.

use dcr::factorization::{factor_on, ip5m, FactorConfig};
use dcr::generators::figred;
use dcr::instance_file::write_instance;
use dcr::irrelevance::Condition;
use dcr::reductions::{reduce, replay, trace_to_json};
use dcr::{LinkId, Poly};

fn main() -> dcr::Result<()> {
    let inst = figred(Poly::var());
    let form = reduce(&inst, Some(Condition::C3));
    println!("multiplier {}", form.multiplier);
    for step in &form.trace {
        println!(
            "  {:?} anchor {:?} nodes {:?} links {:?} x{} d{:+}",
            step.kind,
            step.anchor.map(|v| v.0),
            step.nodes.iter().map(|v| v.0).collect::<Vec<_>>(),
            step.links.iter().map(|e| e.0).collect::<Vec<_>>(),
            step.multiplier,
            step.diameter_delta
        );
    }
    print!("reduced instance:\n{}", write_instance(&form.instance)?);

    let (mult, again) = replay(&inst, &form.trace)?;
    assert_eq!((mult, &again), (form.multiplier.clone(), &form.instance));
    println!("replay reproduces the reduced instance");
    println!("trace as JSON: {}", trace_to_json(&form.trace));

    let cfg = FactorConfig::default();
    let [(q, deleted), (p, perfect)] = factor_on(&form.instance, LinkId(6))?;
    let r_deleted = ip5m(&deleted, &cfg)?.0;
    let r_perfect = ip5m(&perfect, &cfg)?.0;
    println!("pivot on link 6: ({q})*({r_deleted}) + ({p})*({r_perfect})");
    let total = form.multiplier * (q * r_deleted + p * r_perfect);
    println!("R(p) = {total}");
    Ok(())
}
