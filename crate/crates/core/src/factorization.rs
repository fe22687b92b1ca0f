//! Exact reliability by factoring with reductions (IP5M).
//!
//! Each call tests for termination (a perfect path of length at most `d`,
//! or terminals further than `d` apart), prunes irrelevant links, applies
//! the 5P reductions and then factors on a pivot link `e`:
//!
//! ```text
//! R(G) = mu * [(1 - p_e) R(G - e) + p_e R(G with p_e = 1)]
//! ```
//!
//! The second branch keeps the topology and only makes `e` perfect, so the
//! diameter constraint is never disturbed.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::Prob;
use crate::error::{DcrError, Result};
use crate::graph::{Graph, Instance, LinkId};
use crate::irrelevance::{prune_irrelevant, Condition};
use crate::oracle::DEFAULT_SEED;
use crate::reductions::{apply_5p, StepKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "policy", content = "seed")]
pub enum PivotPolicy {
    Random(u64),
    FirstNonPerfect,
    MaxDegreeEndpoint,
}

impl Default for PivotPolicy {
    fn default() -> Self {
        PivotPolicy::Random(DEFAULT_SEED)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorConfig {
    pub pivot: PivotPolicy,
    pub irrelevance: Option<Condition>,
    pub max_depth: usize,
    pub max_calls: u64,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig {
            pivot: PivotPolicy::default(),
            irrelevance: Some(Condition::C3),
            max_depth: 512,
            max_calls: 10_000_000,
        }
    }
}

impl FactorConfig {
    pub fn with_pivot(mut self, pivot: PivotPolicy) -> Self {
        self.pivot = pivot;
        self
    }

    pub fn with_irrelevance(mut self, level: Option<Condition>) -> Self {
        self.irrelevance = level;
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FactorStats {
    pub calls: u64,
    pub max_depth: usize,
    pub leaves_perfect_path: u64,
    pub leaves_too_far: u64,
    pub links_pruned: u64,
    pub zero_links_deleted: u64,
    pub pivots: u64,
    pub reductions: BTreeMap<StepKind, u64>,
}

impl FactorStats {
    pub fn leaves(&self) -> u64 {
        self.leaves_perfect_path + self.leaves_too_far
    }

    /// Combines counters from independent sub-computations.
    pub fn merge(&mut self, other: &FactorStats) {
        self.calls += other.calls;
        self.max_depth = self.max_depth.max(other.max_depth);
        self.leaves_perfect_path += other.leaves_perfect_path;
        self.leaves_too_far += other.leaves_too_far;
        self.links_pruned += other.links_pruned;
        self.zero_links_deleted += other.zero_links_deleted;
        self.pivots += other.pivots;
        for (kind, n) in &other.reductions {
            *self.reductions.entry(*kind).or_default() += n;
        }
    }
}

/// An `s`-`t` path of at most `d` links, all perfect.
pub fn has_perfect_path<P: Prob>(inst: &Instance<P>) -> bool {
    let g = inst.graph();
    g.distance_where(inst.source(), inst.target(), |_| true, |l| l.reliability.is_one())
        .within(inst.diameter())
}

/// Terminals more than `d` hops apart, counting only links that can operate.
pub fn too_far<P: Prob>(inst: &Instance<P>) -> bool {
    let g = inst.graph();
    !g.distance_where(inst.source(), inst.target(), |_| true, |l| !l.reliability.is_zero())
        .within(inst.diameter())
}

pub fn make_perfect<P: Prob>(g: &Graph<P>, e: LinkId) -> Result<Graph<P>> {
    g.with_reliability(e, P::one())
}

/// The two weighted branches of one factoring step on `e`:
/// `[(1 - p_e, G - e), (p_e, G with p_e = 1)]`.
pub fn factor_on<P: Prob>(inst: &Instance<P>, e: LinkId) -> Result<[(P, Instance<P>); 2]> {
    let p = inst.graph().expect_link(e)?.reliability.clone();
    let deleted = inst.with_graph(inst.graph().delete_link(e)?);
    let perfect = inst.with_graph(make_perfect(inst.graph(), e)?);
    Ok([(p.complement(), deleted), (p, perfect)])
}

fn eligible<P: Prob>(g: &Graph<P>) -> Vec<LinkId> {
    g.links()
        .filter(|l| !l.reliability.is_one() && !l.reliability.is_zero())
        .map(|l| l.id)
        .collect()
}

/// Picks a link with reliability strictly between 0 and 1.
pub fn select_pivot<P: Prob>(g: &Graph<P>, policy: PivotPolicy, rng: &mut ChaCha8Rng) -> Result<LinkId> {
    let cands = eligible(g);
    if cands.is_empty() {
        return Err(DcrError::Internal("no link eligible for factoring".into()));
    }
    let e = match policy {
        PivotPolicy::Random(_) => cands[rng.random_range(0..cands.len())],
        PivotPolicy::FirstNonPerfect => cands[0],
        PivotPolicy::MaxDegreeEndpoint => *cands
            .iter()
            .max_by_key(|&&e| {
                let (a, b) = g.link(e).unwrap().endpoints();
                let (da, db) = (g.degree(a), g.degree(b));
                (da.max(db), da.min(db), std::cmp::Reverse(e))
            })
            .unwrap(),
    };
    Ok(e)
}

struct Factorer<'a> {
    cfg: &'a FactorConfig,
    stats: FactorStats,
    rng: ChaCha8Rng,
}

impl Factorer<'_> {
    fn limit(&self, what: &str, cap: u64, hint: &str) -> DcrError {
        DcrError::ResourceLimit {
            what: what.into(),
            cap,
            hint: Some(hint.into()),
            partial: Some(Box::new(self.stats.clone())),
        }
    }

    fn leaf<P: Prob>(&mut self, inst: &Instance<P>) -> Option<P> {
        if has_perfect_path(inst) {
            self.stats.leaves_perfect_path += 1;
            Some(P::one())
        } else if too_far(inst) {
            self.stats.leaves_too_far += 1;
            Some(P::zero())
        } else {
            None
        }
    }

    fn run<P: Prob>(&mut self, inst: Instance<P>, depth: usize) -> Result<P> {
        self.stats.calls += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        if self.stats.calls > self.cfg.max_calls {
            return Err(self.limit("factoring calls", self.cfg.max_calls, "raise the call budget"));
        }
        if depth > self.cfg.max_depth {
            return Err(self.limit(
                "factoring depth",
                self.cfg.max_depth as u64,
                "raise the depth cap",
            ));
        }
        if let Some(r) = self.leaf(&inst) {
            return Ok(r);
        }

        let mut inst = inst;
        let zeros: Vec<LinkId> = inst
            .graph()
            .links()
            .filter(|l| l.reliability.is_zero())
            .map(|l| l.id)
            .collect();
        self.stats.zero_links_deleted += zeros.len() as u64;
        for e in zeros {
            inst.graph_mut().remove_link_mut(e)?;
        }
        if let Some(cond) = self.cfg.irrelevance {
            let (pruned, certs) = prune_irrelevant(&inst, cond);
            self.stats.links_pruned += certs.len() as u64;
            inst = pruned;
        }
        let form = apply_5p(&inst);
        for step in &form.trace {
            *self.stats.reductions.entry(step.kind).or_default() += 1;
        }
        let mu = form.multiplier;
        let inst = form.instance;
        if let Some(r) = self.leaf(&inst) {
            return Ok(mu * r);
        }

        let e = select_pivot(inst.graph(), self.cfg.pivot, &mut self.rng)?;
        self.stats.pivots += 1;
        let [(w_del, deleted), (w_perf, perfect)] = factor_on(&inst, e)?;
        let r_del = self.run(deleted, depth + 1)?;
        let r_perf = self.run(perfect, depth + 1)?;
        Ok(mu * (w_del * r_del + w_perf * r_perf))
    }
}

/// Exact diameter-constrained reliability by IP5M.
pub fn ip5m<P: Prob>(inst: &Instance<P>, cfg: &FactorConfig) -> Result<(P, FactorStats)> {
    if cfg.max_depth == 0 || cfg.max_calls == 0 {
        return Err(DcrError::invalid("factoring caps must be positive"));
    }
    let seed = match cfg.pivot {
        PivotPolicy::Random(seed) => seed,
        _ => DEFAULT_SEED,
    };
    let mut f = Factorer {
        cfg,
        stats: FactorStats::default(),
        rng: ChaCha8Rng::seed_from_u64(seed),
    };
    let r = f.run(inst.clone(), 0)?;
    Ok((r, f.stats))
}

/// [`ip5m`] without the statistics.
pub fn dcr<P: Prob>(inst: &Instance<P>) -> Result<P> {
    ip5m(inst, &FactorConfig::default()).map(|(r, _)| r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ratio, Poly};
    use crate::generators::{figred, path, path_graph};
    use crate::graph::{Hops, NodeId};
    use crate::oracle::{dcr_bruteforce, OracleConfig};
    use crate::reductions::pending_node;
    use num::{BigRational, One};

    fn n(i: u32) -> NodeId {
        NodeId(i)
    }

    fn policies() -> [PivotPolicy; 4] {
        [
            PivotPolicy::Random(1),
            PivotPolicy::Random(99),
            PivotPolicy::FirstNonPerfect,
            PivotPolicy::MaxDegreeEndpoint,
        ]
    }

    fn reduced_figred() -> Instance<Poly> {
        let pruned = prune_irrelevant(&figred(Poly::var()), Condition::C3).0;
        crate::reductions::perfect_path(&pending_node(&pruned).unwrap().1).unwrap()
    }

    #[test]
    fn figred_polynomial() {
        let expected = Poly::from_ints(&[0, 0, 1, 0, 0, 1, -1]);
        for pivot in policies() {
            for level in [None, Some(Condition::C1), Some(Condition::C2), Some(Condition::C3)] {
                let cfg = FactorConfig::default().with_pivot(pivot).with_irrelevance(level);
                let (r, stats) = ip5m(&figred(Poly::var()), &cfg).unwrap();
                assert_eq!(r, expected, "{pivot:?} {level:?}");
                assert!(stats.calls >= 1 && stats.leaves() <= stats.calls);
            }
        }
    }

    #[test]
    fn figred_rational() {
        let (r, _) = ip5m(&figred(ratio(1, 2)), &FactorConfig::default()).unwrap();
        assert_eq!(r, ratio(17, 64));
        let brute = dcr_bruteforce(&figred(ratio(1, 2)), &OracleConfig::default()).unwrap();
        assert_eq!(r, brute);
    }

    #[test]
    fn termination_tests() {
        let perfect = path(4, 1.0).unwrap();
        assert!(has_perfect_path(&perfect));
        assert!(!has_perfect_path(&perfect.with_diameter(2).unwrap()));
        assert!(too_far(&perfect.with_diameter(2).unwrap()));
        assert!(!too_far(&perfect));
        assert!(!has_perfect_path(&path(4, 0.5).unwrap()));

        let mut g = path_graph(2, 0.5);
        g.add_node();
        let split = Instance::new(g, n(0), n(2), 2).unwrap();
        assert!(too_far(&split));
    }

    #[test]
    fn worked_example_branches() {
        let c5 = reduced_figred();
        assert_eq!(c5.diameter(), 5);
        let eligible_links = eligible(c5.graph());
        assert_eq!(eligible_links, vec![LinkId(6), LinkId(8)]);

        // Factoring on 6t: the deleted branch is a path of four links.
        let [(w_del, deleted), (w_perf, perfect)] = factor_on(&c5, LinkId(6)).unwrap();
        let p = Poly::var();
        let p4 = p.clone() * p.clone() * p.clone() * p.clone();
        assert_eq!(w_perf, p4.clone());
        assert_eq!(w_del, p4.complement());
        assert!(!too_far(&deleted));
        assert_eq!(deleted.st_distance(), Hops::Finite(1));
        let (r_del, _) = ip5m(&deleted, &FactorConfig::default()).unwrap();
        assert_eq!(r_del, p);
        assert!(has_perfect_path(&perfect));
    }

    #[test]
    fn make_perfect_idempotent() {
        let g = figred(ratio(1, 3)).graph().clone();
        let once = make_perfect(&g, LinkId(4)).unwrap();
        assert_eq!(once.reliability(LinkId(4)).unwrap(), &BigRational::one());
        assert_eq!(make_perfect(&once, LinkId(4)).unwrap(), once);
    }

    #[test]
    fn single_step_identity() {
        let inst = figred(ratio(2, 3));
        let cfg = OracleConfig::default();
        let whole = dcr_bruteforce(&inst, &cfg).unwrap();
        for e in inst.graph().links().map(|l| l.id).collect::<Vec<_>>() {
            let [(a, ga), (b, gb)] = factor_on(&inst, e).unwrap();
            let split = a * dcr_bruteforce(&ga, &cfg).unwrap() + b * dcr_bruteforce(&gb, &cfg).unwrap();
            assert_eq!(split, whole);
        }
    }

    #[test]
    fn pivot_selection() {
        let c5 = reduced_figred();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for policy in policies() {
            let e = select_pivot(c5.graph(), policy, &mut rng).unwrap();
            assert!(e == LinkId(6) || e == LinkId(8));
        }
        let seq = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = figred(0.5).graph().clone();
            (0..10)
                .map(|_| select_pivot(&g, PivotPolicy::Random(seed), &mut rng).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(seq(3), seq(3));
        let none = path(3, 1.0).unwrap();
        assert!(select_pivot(none.graph(), PivotPolicy::FirstNonPerfect, &mut rng).is_err());
    }

    #[test]
    fn call_cap_reports_partial_stats() {
        let cfg = FactorConfig {
            max_calls: 2,
            irrelevance: None,
            ..FactorConfig::default()
        };
        let inst = crate::generators::complete(5, ratio(1, 2)).unwrap();
        match ip5m(&inst, &cfg) {
            Err(DcrError::ResourceLimit { partial: Some(stats), .. }) => assert_eq!(stats.calls, 3),
            other => panic!("expected resource limit, got {other:?}"),
        }
    }

    #[test]
    fn zero_links_deleted() {
        let mut g = path_graph(3, ratio(1, 2));
        g.add_link(n(0), n(2), ratio(0, 1)).unwrap();
        let inst = Instance::new(g, n(0), n(2), 2).unwrap();
        let (r, stats) = ip5m(&inst, &FactorConfig::default()).unwrap();
        assert_eq!(r, ratio(1, 4));
        assert_eq!(stats.zero_links_deleted, 1);
    }
}
