//! Replacement graphs and reliability through distance profiles.
//!
//! Replacing a link `{x, y}` of an outer graph `H` by a copy of `G` glues
//! `G`'s terminals `s, t` onto `x, y`. Because copy interiors are private,
//! the `u`-`v` distance in the composite is the shortest `u`-`v` path in `H`
//! where each link is weighted by the random `s`-`t` distance of its copy.
//! [`dcr_composed`] sums over all such length assignments, weighting each by
//! the [`DistanceProfile`] of `G`.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use crate::arith::{ratio, Prob};
use crate::error::{DcrError, Result};
use crate::factorization::{ip5m, FactorConfig};
use crate::graph::{Graph, Instance, LinkId, NodeId};

/// Outer graph `H` with terminals `u, v`, inner graph `G` with terminals
/// `s, t`, and the diameter applied to the composite.
#[derive(Clone, Debug, PartialEq)]
pub struct ReplacementSpec<P> {
    pub outer: Graph<P>,
    pub u: NodeId,
    pub v: NodeId,
    pub inner: Graph<P>,
    pub s: NodeId,
    pub t: NodeId,
    pub diameter: usize,
}

impl<P: Prob> ReplacementSpec<P> {
    pub fn new(outer: &Instance<P>, inner: &Instance<P>, diameter: usize) -> Self {
        ReplacementSpec {
            outer: outer.graph().clone(),
            u: outer.source(),
            v: outer.target(),
            inner: inner.graph().clone(),
            s: inner.source(),
            t: inner.target(),
            diameter,
        }
    }

    /// The explicit composite `H_G` as an instance.
    pub fn expand(&self) -> Result<Instance<P>> {
        let g = replace_all(&self.outer, &self.inner, self.s, self.t)?;
        Instance::new(g, self.u, self.v, self.diameter)
    }
}

/// `H - e` plus a fresh copy of `G` with `s` glued to one endpoint of `e`
/// and `t` to the other. Nodes of `H` keep their ids; the copy's interior
/// nodes and links get new ids.
pub fn replace_edge<P: Prob>(h: &Graph<P>, e: LinkId, g: &Graph<P>, s: NodeId, t: NodeId) -> Result<Graph<P>> {
    let (x, y) = h.expect_link(e)?.endpoints();
    if s == t || !g.contains_node(s) || !g.contains_node(t) {
        return Err(DcrError::invalid("inner graph needs two distinct terminals"));
    }
    let mut out = h.clone();
    out.remove_link_mut(e)?;
    let mut map = BTreeMap::from([(s, x), (t, y)]);
    for w in g.nodes() {
        map.entry(w).or_insert_with(|| out.add_node());
    }
    for l in g.links() {
        out.add_link(map[&l.a], map[&l.b], l.reliability.clone())?;
    }
    Ok(out)
}

/// Replaces every link of `H`, in id order, by an independent copy of `G`.
pub fn replace_all<P: Prob>(h: &Graph<P>, g: &Graph<P>, s: NodeId, t: NodeId) -> Result<Graph<P>> {
    let ids: Vec<LinkId> = h.links().map(|l| l.id).collect();
    ids.into_iter()
        .try_fold(h.clone(), |acc, e| replace_edge(&acc, e, g, s, t))
}

/// Distribution of the random `s`-`t` hop distance, truncated at `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceProfile<P> {
    masses: Vec<P>,
    tail: P,
}

impl<P: Prob> DistanceProfile<P> {
    pub fn diameter(&self) -> usize {
        self.masses.len()
    }

    /// `P(distance = l)` for `1 <= l <= d`.
    pub fn mass(&self, l: usize) -> P {
        if l == 0 || l > self.masses.len() {
            P::zero()
        } else {
            self.masses[l - 1].clone()
        }
    }

    pub fn masses(&self) -> &[P] {
        &self.masses
    }

    /// `P(distance > d)`, disconnection included.
    pub fn tail(&self) -> &P {
        &self.tail
    }

    /// `P(distance <= l)`, the reliability at diameter `l`.
    pub fn cumulative(&self, l: usize) -> P {
        self.masses
            .iter()
            .take(l)
            .fold(P::zero(), |acc, m| acc + m.clone())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "masses": self.masses.iter().map(Prob::to_json).collect::<Vec<_>>(),
            "tail": self.tail.to_json(),
        })
    }
}

/// Profile of `(G, s, t)` up to `d`, from the reliabilities `R^1 .. R^d`.
pub fn distance_profile<P: Prob>(g: &Graph<P>, s: NodeId, t: NodeId, d: usize) -> Result<DistanceProfile<P>> {
    let cfg = FactorConfig::default();
    let mut masses = Vec::with_capacity(d);
    let mut prev = P::zero();
    for l in 1..=d {
        let inst = Instance::new(g.clone(), s, t, l)?;
        let (r, _) = ip5m(&inst, &cfg)?;
        masses.push(r.clone() - prev);
        prev = r;
    }
    Ok(DistanceProfile {
        masses,
        tail: prev.complement(),
    })
}

/// Bits of enumeration allowed for [`dcr_composed`]: `(d+1)^|E(H)| <= 2^24`.
pub const MAX_ASSIGNMENT_BITS: u32 = 24;

/// Reliability of `H_G` between `u` and `v` at diameter `d`, without
/// building `H_G`.
pub fn dcr_composed<P: Prob>(spec: &ReplacementSpec<P>) -> Result<P> {
    let h = &spec.outer;
    let d = spec.diameter;
    if spec.u == spec.v || !h.contains_node(spec.u) || !h.contains_node(spec.v) {
        return Err(DcrError::invalid("outer graph needs two distinct terminals"));
    }
    if d == 0 {
        return Err(DcrError::invalid("diameter must be at least 1"));
    }
    let m = h.link_count() as u32;
    let states = (d as u128 + 1).checked_pow(m);
    if states.is_none_or(|n| n > 1u128 << MAX_ASSIGNMENT_BITS) {
        return Err(DcrError::ResourceLimit {
            what: "length assignments".into(),
            cap: 1 << MAX_ASSIGNMENT_BITS,
            hint: Some("run ip5m on the explicit replacement graph instead".into()),
            partial: None,
        });
    }
    let profile = distance_profile(&spec.inner, spec.s, spec.t, d)?;
    // Index 0 is the tail, 1..=d the finite lengths.
    let weights: Vec<P> = std::iter::once(profile.tail().clone())
        .chain(profile.masses().iter().cloned())
        .collect();

    let nodes: Vec<NodeId> = h.nodes().collect();
    let index: BTreeMap<NodeId, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let ends: Vec<(usize, usize)> = h.links().map(|l| (index[&l.a], index[&l.b])).collect();
    let mut walk = Assignment {
        ends: &ends,
        weights: &weights,
        nodes: nodes.len(),
        u: index[&spec.u],
        v: index[&spec.v],
        d,
        lengths: vec![0; ends.len()],
        total: P::zero(),
    };
    walk.enumerate(0, P::one());
    Ok(walk.total)
}

struct Assignment<'a, P> {
    ends: &'a [(usize, usize)],
    weights: &'a [P],
    nodes: usize,
    u: usize,
    v: usize,
    d: usize,
    lengths: Vec<usize>,
    total: P,
}

impl<P: Prob> Assignment<'_, P> {
    fn enumerate(&mut self, i: usize, weight: P) {
        if i == self.ends.len() {
            if self.shortest() <= self.d {
                self.total = self.total.clone() + weight;
            }
            return;
        }
        for len in 0..self.weights.len() {
            if self.weights[len].is_zero() {
                continue;
            }
            self.lengths[i] = len;
            self.enumerate(i + 1, weight.clone() * self.weights[len].clone());
        }
    }

    /// Shortest `u`-`v` length, ignoring tail links (length 0 here).
    fn shortest(&self) -> usize {
        let mut dist = vec![usize::MAX; self.nodes];
        dist[self.u] = 0;
        // Bellman-Ford: the graphs are tiny and lengths are positive.
        for _ in 1..self.nodes {
            let mut changed = false;
            for (&(a, b), &len) in self.ends.iter().zip(&self.lengths) {
                if len == 0 {
                    continue;
                }
                for (x, y) in [(a, b), (b, a)] {
                    if dist[x] != usize::MAX && dist[x] + len < dist[y] {
                        dist[y] = dist[x] + len;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        dist[self.v]
    }
}

/// Reliability of `inst` through a cut vertex `v` separating `s` from `t`:
/// `sum_{l=1}^{d-1} mass_{G1,s,v}(l) * cumulative_{G2,v,t}(d - l)`, where
/// `G1` and `G2` are the sides of `v` holding `s` and `t`.
pub fn cut_decompose<P: Prob>(inst: &Instance<P>, v: NodeId) -> Result<P> {
    let g = inst.graph();
    let (s, t) = (inst.source(), inst.target());
    if !g.contains_node(v) || v == s || v == t {
        return Err(DcrError::invalid(format!("node {v} does not separate the terminals")));
    }
    let comps = g.components_avoiding(Some(v));
    let side = |w: NodeId| comps.iter().position(|c| c.contains(&w));
    let (cs, ct) = (side(s), side(t));
    if cs == ct {
        return Err(DcrError::invalid(format!("node {v} does not separate the terminals")));
    }
    let d = inst.diameter();
    if d < 2 {
        return Ok(P::zero());
    }
    let restrict = |members: &[NodeId]| -> Result<Graph<P>> {
        let keep: BTreeSet<NodeId> = members.iter().copied().chain([v]).collect();
        let mut sub = g.clone();
        for w in g.nodes().filter(|w| !keep.contains(w)) {
            sub.remove_node_mut(w)?;
        }
        Ok(sub)
    };
    let g1 = restrict(&comps[cs.unwrap()])?;
    let g2 = restrict(&comps[ct.unwrap()])?;
    // A side missing the cut vertex's neighbours cannot reach it at all.
    if g1.degree(v) == 0 || g2.degree(v) == 0 {
        return Ok(P::zero());
    }
    let left = distance_profile(&g1, s, v, d - 1)?;
    let right = distance_profile(&g2, v, t, d - 1)?;
    let mut total = P::zero();
    for l in 1..d {
        total = total + left.mass(l) * right.cumulative(d - l);
    }
    Ok(total)
}

/// The bipartite gadget: a perfect tail path `s, s_1, .., s_{d-3}`, a
/// perfect copy of `B`, half-reliable links from the path end to every node
/// of part `A` and from every node of part `B` to a new terminal `t`.
///
/// Node ids: `s = 0`, path nodes `1..=d-3`, then `B`'s nodes in order, then
/// `t`.
pub fn cancela_petingi<P: Prob>(b: &Graph<P>, part_a: &BTreeSet<NodeId>, d: usize) -> Result<Instance<P>> {
    if d < 3 {
        return Err(DcrError::invalid("the gadget needs d >= 3"));
    }
    if let Some(v) = part_a.iter().find(|v| !b.contains_node(**v)) {
        return Err(DcrError::invalid(format!("node {v} of part A is not in the graph")));
    }
    if let Some(l) = b
        .links()
        .find(|l| part_a.contains(&l.a) == part_a.contains(&l.b))
    {
        return Err(DcrError::invalid(format!(
            "link {} = {{{}, {}}} does not cross the bipartition",
            l.id, l.a, l.b
        )));
    }
    let half = P::from_ratio(&ratio(1, 2));
    let mut g = Graph::new();
    let s = g.add_node();
    let mut end = s;
    for _ in 0..d - 3 {
        let next = g.add_node();
        g.add_link(end, next, P::one())?;
        end = next;
    }
    let map: BTreeMap<NodeId, NodeId> = b.nodes().map(|v| (v, g.add_node())).collect();
    let t = g.add_node();
    for l in b.links() {
        g.add_link(map[&l.a], map[&l.b], P::one())?;
    }
    for (orig, &copy) in &map {
        if part_a.contains(orig) {
            g.add_link(end, copy, half.clone())?;
        } else {
            g.add_link(copy, t, half.clone())?;
        }
    }
    Instance::new(g, s, t, d)
}
