//! Reliability polynomial of the eight-node example graph, then its value at
//! a few link reliabilities.

use dcr::factorization::{ip5m, FactorConfig};
use dcr::generators::figred;
use dcr::{ratio, Poly};

fn main() -> dcr::Result<()> {
    let inst = figred(Poly::var());
    let (poly, stats) = ip5m(&inst, &FactorConfig::default())?;
    println!("R(p) = {poly}");
    println!("calls {}, pivots {}, max depth {}", stats.calls, stats.pivots, stats.max_depth);
    for (num, den) in [(1, 4), (1, 2), (3, 4), (9, 10)] {
        let p = ratio(num, den);
        println!("R({p}) = {}", poly.eval(&p));
    }
    Ok(())
}
