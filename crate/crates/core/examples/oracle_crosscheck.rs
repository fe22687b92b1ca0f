//! Cross-check the factoring algorithm against the independent oracles on a
//! 3x3 grid, including a seeded Monte Carlo estimate.

use dcr::factorization::{ip5m, FactorConfig, PivotPolicy};
use dcr::generators::grid;
use dcr::oracle::{dcr_bruteforce, dcr_inclusion_exclusion, monte_carlo_estimate, OracleConfig, DEFAULT_SEED};
use dcr::ratio;

fn main() -> dcr::Result<()> {
    let oracle = OracleConfig {
        max_links: 24,
        max_minpaths: 100_000,
    };
    for d in 4..=8 {
        let inst = grid(3, 3, ratio(9, 10))?.with_diameter(d)?;
        let brute = dcr_bruteforce(&inst, &oracle)?;
        let incl_excl = dcr_inclusion_exclusion(&inst, &oracle)?;
        for policy in [PivotPolicy::Random(DEFAULT_SEED), PivotPolicy::FirstNonPerfect, PivotPolicy::MaxDegreeEndpoint] {
            let (value, stats) = ip5m(&inst, &FactorConfig::default().with_pivot(policy))?;
            assert_eq!(value, brute);
            println!("d={d} {policy:?}: {} calls", stats.calls);
        }
        assert_eq!(incl_excl, brute);
        let float = grid(3, 3, 0.9)?.with_diameter(d)?;
        let mc = monte_carlo_estimate(&float, 200_000, DEFAULT_SEED)?;
        println!(
            "d={d}: exact {brute} ~ {:.6}, monte carlo {:.6} +/- {:.6}",
            num::ToPrimitive::to_f64(&brute).unwrap_or(f64::NAN),
            mc.estimate,
            mc.stderr
        );
    }
    Ok(())
}
