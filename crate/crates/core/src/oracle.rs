//! Ground truth by exhaustive enumeration.
//!
//! * [`dcr_bruteforce`] sums the probability of every link state whose
//!   operating subgraph keeps the terminals within `d` hops.
//! * [`dcr_inclusion_exclusion`] expands `P(M_1 ∪ ... ∪ M_r)` over the
//!   hop-bounded minpaths.
//! * [`is_link_relevant_oracle`] decides relevance by pruned path search.
//! * [`monte_carlo_estimate`] is a seeded crude sampler for float cross-checks.
//!
//! Everything here is exponential and guarded by the caps in
//! [`OracleConfig`].

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::ops::ControlFlow;

use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::Prob;
use crate::error::{DcrError, Result};
use crate::graph::{Graph, Instance, LinkId, NodeId};

pub const DEFAULT_MAX_LINKS: usize = 24;
pub const DEFAULT_MAX_MINPATHS: usize = 20;
pub const DEFAULT_SEED: u64 = 1;

/// Name and version of the sampler's generator, recorded in result metadata.
pub const PRNG_NAME: &str = "ChaCha8Rng/rand_chacha-0.9/seed_from_u64";

/// Environment variable overriding the state-enumeration cap. Its value is
/// a number of states; the link cap becomes `floor(log2(value))`.
pub const MAX_STATES_ENV: &str = "DCR_MAX_STATES";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest link count for state enumeration (`2^m` states).
    pub max_links: usize,
    /// Largest number of minpaths for inclusion-exclusion.
    pub max_minpaths: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_links: DEFAULT_MAX_LINKS,
            max_minpaths: DEFAULT_MAX_MINPATHS,
        }
    }
}

impl OracleConfig {
    /// Defaults, with `DCR_MAX_STATES` applied when set to a positive integer.
    pub fn from_env() -> Self {
        let mut cfg = Self::default();
        if let Some(states) = std::env::var(MAX_STATES_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
            .filter(|&v| v > 0)
        {
            cfg.max_links = (63 - states.leading_zeros()) as usize;
        }
        cfg
    }
}

/// Link states as bit positions over the links in id order.
struct StateSpace<P> {
    probs: Vec<P>,
    /// Per compact node index: `(neighbour, link position)`.
    adjacency: Vec<Vec<(usize, usize)>>,
    terminals: Vec<usize>,
    diameter: usize,
}

impl<P: Prob> StateSpace<P> {
    fn new(g: &Graph<P>, terminals: &[NodeId], diameter: usize) -> Self {
        let mut compact = vec![usize::MAX; g.node_bound()];
        for (i, v) in g.nodes().enumerate() {
            compact[v.index()] = i;
        }
        let mut adjacency = vec![Vec::new(); g.node_count()];
        let mut probs = Vec::with_capacity(g.link_count());
        for (pos, l) in g.links().enumerate() {
            let (a, b) = (compact[l.a.index()], compact[l.b.index()]);
            adjacency[a].push((b, pos));
            adjacency[b].push((a, pos));
            probs.push(l.reliability.clone());
        }
        StateSpace {
            probs,
            adjacency,
            terminals: terminals.iter().map(|t| compact[t.index()]).collect(),
            diameter,
        }
    }

    /// Structure function: every terminal pair within `diameter` hops using
    /// only links for which `up` holds.
    fn phi(&self, up: impl Fn(usize) -> bool) -> bool {
        let n = self.adjacency.len();
        let mut dist = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for (i, &src) in self.terminals.iter().enumerate() {
            let rest = &self.terminals[i + 1..];
            if rest.is_empty() {
                break;
            }
            dist.iter_mut().for_each(|x| *x = usize::MAX);
            dist[src] = 0;
            queue.clear();
            queue.push_back(src);
            while let Some(x) = queue.pop_front() {
                if dist[x] == self.diameter {
                    continue;
                }
                for &(y, pos) in &self.adjacency[x] {
                    if dist[y] == usize::MAX && up(pos) {
                        dist[y] = dist[x] + 1;
                        queue.push_back(y);
                    }
                }
            }
            if rest.iter().any(|&t| dist[t] == usize::MAX) {
                return false;
            }
        }
        true
    }

    fn enumerate(&self, pos: usize, mask: u64, weight: P, acc: &mut P) {
        if weight.is_zero() {
            return;
        }
        if pos == self.probs.len() {
            if self.phi(|i| mask >> i & 1 == 1) {
                *acc = acc.clone() + weight;
            }
            return;
        }
        let p = &self.probs[pos];
        self.enumerate(pos + 1, mask | 1 << pos, weight.clone() * p.clone(), acc);
        self.enumerate(pos + 1, mask, weight * p.complement(), acc);
    }
}

/// Exact DCR of a source-terminal instance by summing over all `2^m` states.
pub fn dcr_bruteforce<P: Prob>(inst: &Instance<P>, cfg: &OracleConfig) -> Result<P> {
    dcr_bruteforce_terminals(inst.graph(), &inst.terminals(), inst.diameter(), cfg)
}

/// State enumeration for an arbitrary terminal set `K`: the probability that
/// every pair of `terminals` is within `d` hops.
pub fn dcr_bruteforce_terminals<P: Prob>(
    g: &Graph<P>,
    terminals: &[NodeId],
    d: usize,
    cfg: &OracleConfig,
) -> Result<P> {
    let m = g.link_count();
    if m > cfg.max_links.min(63) {
        return Err(DcrError::limit(
            format!("state enumeration over {m} links"),
            cfg.max_links as u64,
        ));
    }
    if let Some(v) = terminals.iter().find(|v| !g.contains_node(**v)) {
        return Err(DcrError::invalid(format!("terminal {v} not in graph")));
    }
    let space = StateSpace::new(g, terminals, d);
    let mut acc = P::zero();
    space.enumerate(0, 0, P::one(), &mut acc);
    Ok(acc)
}

/// An elementary source-terminal path with at most `d` links.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Minpath {
    pub nodes: Vec<NodeId>,
    pub links: Vec<LinkId>,
}

impl Minpath {
    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }
}

/// Depth-first search over elementary `s`-`t` paths of length at most `d`,
/// visiting neighbours in (node id, link id) order so paths come out in
/// lexicographic node-sequence order.
pub fn for_each_minpath<P: Prob>(
    inst: &Instance<P>,
    mut visit: impl FnMut(&[NodeId], &[LinkId]) -> ControlFlow<()>,
) {
    let g = inst.graph();
    let mut ordered: Vec<Vec<(NodeId, LinkId)>> = vec![Vec::new(); g.node_bound()];
    for v in g.nodes() {
        let mut inc: Vec<(NodeId, LinkId)> = g
            .incident(v)
            .iter()
            .map(|&e| (g.link(e).unwrap().other(v), e))
            .collect();
        inc.sort_unstable();
        ordered[v.index()] = inc;
    }
    let mut on_path = vec![false; g.node_bound()];
    let mut nodes = vec![inst.source()];
    let mut links = Vec::new();
    on_path[inst.source().index()] = true;

    type Visitor<'a> = dyn FnMut(&[NodeId], &[LinkId]) -> ControlFlow<()> + 'a;

    fn dfs(
        ordered: &[Vec<(NodeId, LinkId)>],
        target: NodeId,
        budget: usize,
        on_path: &mut [bool],
        nodes: &mut Vec<NodeId>,
        links: &mut Vec<LinkId>,
        visit: &mut Visitor<'_>,
    ) -> ControlFlow<()> {
        let x = *nodes.last().unwrap();
        if x == target {
            return visit(nodes, links);
        }
        if links.len() == budget {
            return ControlFlow::Continue(());
        }
        for &(y, e) in &ordered[x.index()] {
            if on_path[y.index()] {
                continue;
            }
            on_path[y.index()] = true;
            nodes.push(y);
            links.push(e);
            let flow = dfs(ordered, target, budget, on_path, nodes, links, visit);
            nodes.pop();
            links.pop();
            on_path[y.index()] = false;
            flow?;
        }
        ControlFlow::Continue(())
    }

    let _ = dfs(
        &ordered,
        inst.target(),
        inst.diameter(),
        &mut on_path,
        &mut nodes,
        &mut links,
        &mut visit,
    );
}

/// All minpaths, in lexicographic order of node sequence (then link ids).
pub fn enumerate_minpaths<P: Prob>(inst: &Instance<P>) -> Vec<Minpath> {
    let mut out = Vec::new();
    for_each_minpath(inst, |nodes, links| {
        out.push(Minpath {
            nodes: nodes.to_vec(),
            links: links.to_vec(),
        });
        ControlFlow::Continue(())
    });
    out
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct LinkSet(Vec<u64>);

impl LinkSet {
    fn from_links(links: &[LinkId], words: usize) -> Self {
        let mut bits = vec![0u64; words];
        for e in links {
            bits[e.index() / 64] |= 1 << (e.index() % 64);
        }
        LinkSet(bits)
    }

    fn union(&self, other: &LinkSet) -> LinkSet {
        LinkSet(self.0.iter().zip(&other.0).map(|(a, b)| a | b).collect())
    }

    fn ids(&self) -> impl Iterator<Item = LinkId> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64)
                .filter(move |b| bits >> b & 1 == 1)
                .map(move |b| LinkId((w * 64 + b) as u32))
        })
    }
}

/// Inclusion-exclusion over the minpaths.
///
/// Subsets with the same link union contribute the same product, so the
/// signed subset counts are accumulated per union before any probability
/// arithmetic happens. The result is the full `2^r - 1` term expansion.
pub fn dcr_inclusion_exclusion<P: Prob>(inst: &Instance<P>, cfg: &OracleConfig) -> Result<P> {
    let paths = enumerate_minpaths(inst);
    if paths.len() > cfg.max_minpaths {
        return Err(DcrError::limit(
            format!("inclusion-exclusion over {} minpaths", paths.len()),
            cfg.max_minpaths as u64,
        ));
    }
    let g = inst.graph();
    let words = g.link_bound().div_ceil(64).max(1);
    let mut terms: BTreeMap<LinkSet, i128> = BTreeMap::new();
    for path in &paths {
        let set = LinkSet::from_links(&path.links, words);
        let mut next = terms.clone();
        for (union, coeff) in &terms {
            *next.entry(union.union(&set)).or_insert(0) -= coeff;
        }
        *next.entry(set).or_insert(0) += 1;
        next.retain(|_, c| *c != 0);
        terms = next;
    }
    let mut total = P::zero();
    for (union, coeff) in terms {
        let mut term = P::from_ratio(&BigRational::from_integer(BigInt::from(coeff)));
        for e in union.ids() {
            term = term * g.link(e).unwrap().reliability.clone();
        }
        total = total + term;
    }
    Ok(total)
}

/// True iff some elementary `s`-`t` path of length at most `d` uses `e`.
pub fn is_link_relevant_oracle<P: Prob>(inst: &Instance<P>, e: LinkId) -> Result<bool> {
    inst.graph().expect_link(e)?;
    let mut found = false;
    for_each_minpath(inst, |_, links| {
        if links.contains(&e) {
            found = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(found)
}

/// Links lying on at least one minpath.
pub fn relevant_links<P: Prob>(inst: &Instance<P>) -> BTreeSet<LinkId> {
    let mut out = BTreeSet::new();
    for_each_minpath(inst, |_, links| {
        out.extend(links.iter().copied());
        ControlFlow::Continue(())
    });
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
    pub prng: &'static str,
}

/// Crude Monte Carlo: each sample draws every link independently and
/// evaluates the structure function. Deterministic for a given seed.
pub fn monte_carlo_estimate(inst: &Instance<f64>, samples: u64, seed: u64) -> Result<McEstimate> {
    if samples == 0 {
        return Err(DcrError::invalid("samples must be at least 1"));
    }
    let space = StateSpace::new(inst.graph(), &inst.terminals(), inst.diameter());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut up = vec![false; space.probs.len()];
    let mut hits = 0u64;
    for _ in 0..samples {
        for (slot, &p) in up.iter_mut().zip(&space.probs) {
            *slot = rng.random::<f64>() < p;
        }
        if space.phi(|i| up[i]) {
            hits += 1;
        }
    }
    let estimate = hits as f64 / samples as f64;
    Ok(McEstimate {
        estimate,
        stderr: (estimate * (1.0 - estimate) / samples as f64).sqrt(),
        samples,
        seed,
        prng: PRNG_NAME,
    })
}
