//! Closed forms for d = 1 and for two terminals at d = 2, checked against
//! the factoring algorithm on complete graphs.

use dcr::closed_forms::{dcr_d1, dcr_k2_d2};
use dcr::factorization::dcr;
use dcr::generators::complete;
use dcr::Poly;

fn main() -> dcr::Result<()> {
    for nodes in 3..=6 {
        let inst = complete(nodes, Poly::var())?;
        let d1 = inst.with_diameter(1)?;
        let d2 = inst.with_diameter(2)?;
        let (a, b) = (dcr_d1(&d1)?, dcr_k2_d2(&d2)?);
        assert_eq!(a, dcr(&d1)?);
        assert_eq!(b, dcr(&d2)?);
        println!("K{nodes}: d=1 {a}; d=2 {b}");
    }
    Ok(())
}
