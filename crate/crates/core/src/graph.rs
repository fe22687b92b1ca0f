//! Undirected multigraph with per-link reliabilities.
//!
//! Node and link ids are slot indices that are never reused or renumbered,
//! so ids recorded in a reduction trace stay meaningful for the whole run.
//! Parallel links are allowed; self-loops are rejected on insertion and
//! dropped when a contraction would create one.
//!
//! The public operations (`delete_link`, `contract_link`, ...) return new
//! graphs. In-place variants exist for the reduction engine.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::arith::Prob;
use crate::error::{DcrError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinkId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl LinkId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for LinkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Link<P> {
    pub id: LinkId,
    pub a: NodeId,
    pub b: NodeId,
    pub reliability: P,
}

impl<P> Link<P> {
    pub fn endpoints(&self) -> (NodeId, NodeId) {
        (self.a, self.b)
    }

    /// The endpoint opposite `v`. `v` must be an endpoint.
    pub fn other(&self, v: NodeId) -> NodeId {
        if self.a == v {
            self.b
        } else {
            self.a
        }
    }

    pub fn joins(&self, u: NodeId, v: NodeId) -> bool {
        (self.a == u && self.b == v) || (self.a == v && self.b == u)
    }
}

/// Hop count, or unreachable.
///
/// `Finite(_) < Infinite`, and addition saturates at `Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Hops {
    Finite(usize),
    Infinite,
}

impl Hops {
    pub fn finite(self) -> Option<usize> {
        match self {
            Hops::Finite(h) => Some(h),
            Hops::Infinite => None,
        }
    }

    pub fn within(self, d: usize) -> bool {
        self <= Hops::Finite(d)
    }
}

impl Add for Hops {
    type Output = Hops;
    fn add(self, rhs: Hops) -> Hops {
        match (self, rhs) {
            (Hops::Finite(a), Hops::Finite(b)) => Hops::Finite(a + b),
            _ => Hops::Infinite,
        }
    }
}

impl fmt::Display for Hops {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hops::Finite(h) => write!(f, "{h}"),
            Hops::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Hops {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Hops::Finite(h) => s.serialize_u64(*h as u64),
            Hops::Infinite => s.serialize_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Graph<P> {
    adjacency: Vec<Option<Vec<LinkId>>>,
    links: Vec<Option<Link<P>>>,
    live_nodes: usize,
    live_links: usize,
}

impl<P> Default for Graph<P> {
    fn default() -> Self {
        Graph {
            adjacency: Vec::new(),
            links: Vec::new(),
            live_nodes: 0,
            live_links: 0,
        }
    }
}

impl<P: Prob> Graph<P> {
    pub fn new() -> Self {
        Self::default()
    }

    /// A graph with nodes `0..n` and no links.
    pub fn with_nodes(n: usize) -> Self {
        let mut g = Self::new();
        for _ in 0..n {
            g.add_node();
        }
        g
    }

    pub fn add_node(&mut self) -> NodeId {
        let id = NodeId(self.adjacency.len() as u32);
        self.adjacency.push(Some(Vec::new()));
        self.live_nodes += 1;
        id
    }

    pub fn add_link(&mut self, a: NodeId, b: NodeId, reliability: P) -> Result<LinkId> {
        if a == b {
            return Err(DcrError::invalid(format!("self-loop at node {a}")));
        }
        for v in [a, b] {
            if !self.contains_node(v) {
                return Err(DcrError::invalid(format!("unknown node {v}")));
            }
        }
        let id = LinkId(self.links.len() as u32);
        self.links.push(Some(Link {
            id,
            a,
            b,
            reliability,
        }));
        self.adj_mut(a).push(id);
        self.adj_mut(b).push(id);
        self.live_links += 1;
        Ok(id)
    }

    pub fn node_count(&self) -> usize {
        self.live_nodes
    }

    pub fn link_count(&self) -> usize {
        self.live_links
    }

    /// One past the largest node id ever allocated; sizes per-node tables.
    pub fn node_bound(&self) -> usize {
        self.adjacency.len()
    }

    pub fn link_bound(&self) -> usize {
        self.links.len()
    }

    pub fn contains_node(&self, v: NodeId) -> bool {
        self.adjacency.get(v.index()).is_some_and(Option::is_some)
    }

    pub fn contains_link(&self, e: LinkId) -> bool {
        self.links.get(e.index()).is_some_and(Option::is_some)
    }

    /// Live nodes in increasing id order.
    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .filter(|(_, a)| a.is_some())
            .map(|(i, _)| NodeId(i as u32))
    }

    /// Live links in increasing id order.
    pub fn links(&self) -> impl Iterator<Item = &Link<P>> + '_ {
        self.links.iter().flatten()
    }

    pub fn link(&self, e: LinkId) -> Option<&Link<P>> {
        self.links.get(e.index()).and_then(Option::as_ref)
    }

    pub(crate) fn expect_link(&self, e: LinkId) -> Result<&Link<P>> {
        self.link(e)
            .ok_or_else(|| DcrError::invalid(format!("unknown link {e}")))
    }

    fn expect_node(&self, v: NodeId) -> Result<()> {
        if self.contains_node(v) {
            Ok(())
        } else {
            Err(DcrError::invalid(format!("unknown node {v}")))
        }
    }

    pub fn reliability(&self, e: LinkId) -> Option<&P> {
        self.link(e).map(|l| &l.reliability)
    }

    /// Incident link ids of `v` (empty for unknown nodes).
    pub fn incident(&self, v: NodeId) -> &[LinkId] {
        self.adjacency
            .get(v.index())
            .and_then(Option::as_deref)
            .unwrap_or(&[])
    }

    /// Number of incident links, counting parallel links separately.
    pub fn degree(&self, v: NodeId) -> usize {
        self.incident(v).len()
    }

    /// Distinct neighbours of `v`, sorted.
    pub fn neighbors(&self, v: NodeId) -> Vec<NodeId> {
        let mut out: Vec<NodeId> = self
            .incident(v)
            .iter()
            .map(|&e| self.links[e.index()].as_ref().unwrap().other(v))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Links joining `u` and `v`, in id order.
    pub fn links_between(&self, u: NodeId, v: NodeId) -> Vec<LinkId> {
        let mut out: Vec<LinkId> = self
            .incident(u)
            .iter()
            .copied()
            .filter(|&e| self.links[e.index()].as_ref().unwrap().joins(u, v))
            .collect();
        out.sort_unstable();
        out
    }

    fn adj_mut(&mut self, v: NodeId) -> &mut Vec<LinkId> {
        self.adjacency[v.index()].as_mut().expect("live node")
    }

    // ----- structural operations -----

    pub fn delete_link(&self, e: LinkId) -> Result<Self> {
        let mut g = self.clone();
        g.remove_link_mut(e)?;
        Ok(g)
    }

    /// Merges the endpoints of `e` into its second endpoint, which survives.
    /// Other copies of the contracted pair would become self-loops and are
    /// dropped.
    pub fn contract_link(&self, e: LinkId) -> Result<(Self, NodeId)> {
        let keep = self.expect_link(e)?.b;
        let mut g = self.clone();
        g.merge_into_mut(e, keep)?;
        Ok((g, keep))
    }

    pub fn delete_node(&self, v: NodeId) -> Result<Self> {
        let mut g = self.clone();
        g.remove_node_mut(v)?;
        Ok(g)
    }

    pub fn with_reliability(&self, e: LinkId, p: P) -> Result<Self> {
        let mut g = self.clone();
        g.set_reliability_mut(e, p)?;
        Ok(g)
    }

    pub(crate) fn set_reliability_mut(&mut self, e: LinkId, p: P) -> Result<()> {
        self.expect_link(e)?;
        self.links[e.index()].as_mut().unwrap().reliability = p;
        Ok(())
    }

    pub(crate) fn remove_link_mut(&mut self, e: LinkId) -> Result<Link<P>> {
        self.expect_link(e)?;
        let link = self.links[e.index()].take().unwrap();
        self.adj_mut(link.a).retain(|&x| x != e);
        self.adj_mut(link.b).retain(|&x| x != e);
        self.live_links -= 1;
        Ok(link)
    }

    pub(crate) fn remove_node_mut(&mut self, v: NodeId) -> Result<()> {
        self.expect_node(v)?;
        for e in self.incident(v).to_vec() {
            self.remove_link_mut(e)?;
        }
        self.adjacency[v.index()] = None;
        self.live_nodes -= 1;
        Ok(())
    }

    /// Contracts `e` onto its endpoint `keep`.
    pub(crate) fn merge_into_mut(&mut self, e: LinkId, keep: NodeId) -> Result<()> {
        let link = self.expect_link(e)?;
        if link.a != keep && link.b != keep {
            return Err(DcrError::invalid(format!(
                "node {keep} is not an endpoint of {e}"
            )));
        }
        let gone = link.other(keep);
        self.remove_link_mut(e)?;
        self.absorb_node_mut(gone, keep)
    }

    /// Identifies node `gone` with node `keep`: links between them are
    /// dropped, every other link of `gone` is re-attached to `keep`.
    pub(crate) fn absorb_node_mut(&mut self, gone: NodeId, keep: NodeId) -> Result<()> {
        self.expect_node(gone)?;
        self.expect_node(keep)?;
        for f in self.incident(gone).to_vec() {
            if self.links[f.index()].as_ref().unwrap().joins(gone, keep) {
                self.remove_link_mut(f)?;
                continue;
            }
            let l = self.links[f.index()].as_mut().unwrap();
            if l.a == gone {
                l.a = keep;
            } else {
                l.b = keep;
            }
            self.adj_mut(keep).push(f);
        }
        self.adjacency[gone.index()] = None;
        self.live_nodes -= 1;
        Ok(())
    }

    // ----- distances and connectivity -----

    /// Hop distance between `u` and `v` avoiding the `excluded` nodes.
    ///
    /// An excluded endpoint makes the distance infinite; `distance(u, u)` is
    /// zero when `u` is not excluded.
    pub fn distance(&self, u: NodeId, v: NodeId, excluded: &[NodeId]) -> Hops {
        self.distance_where(u, v, |n| !excluded.contains(&n), |_| true)
    }

    pub(crate) fn distance_where(
        &self,
        u: NodeId,
        v: NodeId,
        node_ok: impl Fn(NodeId) -> bool,
        link_ok: impl Fn(&Link<P>) -> bool,
    ) -> Hops {
        if !self.contains_node(u) || !self.contains_node(v) || !node_ok(u) || !node_ok(v) {
            return Hops::Infinite;
        }
        if u == v {
            return Hops::Finite(0);
        }
        let mut dist = vec![usize::MAX; self.node_bound()];
        dist[u.index()] = 0;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            for &e in self.incident(x) {
                let l = self.links[e.index()].as_ref().unwrap();
                if !link_ok(l) {
                    continue;
                }
                let y = l.other(x);
                if dist[y.index()] != usize::MAX || !node_ok(y) {
                    continue;
                }
                dist[y.index()] = dist[x.index()] + 1;
                if y == v {
                    return Hops::Finite(dist[y.index()]);
                }
                queue.push_back(y);
            }
        }
        Hops::Infinite
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<NodeId>> {
        self.components_avoiding(None)
    }

    /// Components of the graph with `removed` deleted.
    pub fn components_avoiding(&self, removed: Option<NodeId>) -> Vec<Vec<NodeId>> {
        let mut seen = vec![false; self.node_bound()];
        if let Some(r) = removed {
            if let Some(s) = seen.get_mut(r.index()) {
                *s = true;
            }
        }
        let mut out = Vec::new();
        for start in self.nodes() {
            if seen[start.index()] {
                continue;
            }
            seen[start.index()] = true;
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for &e in self.incident(x) {
                    let y = self.links[e.index()].as_ref().unwrap().other(x);
                    if !seen[y.index()] {
                        seen[y.index()] = true;
                        comp.push(y);
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Articulation points (lowlink DFS, per component).
    pub fn cut_vertices(&self) -> BTreeSet<NodeId> {
        let n = self.node_bound();
        let mut order = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut cuts = BTreeSet::new();
        let mut clock = 0usize;

        // Explicit stack of (node, link used to enter, next incident index).
        for root in self.nodes() {
            if order[root.index()] != usize::MAX {
                continue;
            }
            order[root.index()] = clock;
            low[root.index()] = clock;
            clock += 1;
            let mut root_children = 0;
            let mut stack: Vec<(NodeId, Option<LinkId>, usize)> = vec![(root, None, 0)];
            while let Some(top) = stack.last_mut() {
                let (x, via, next) = *top;
                if let Some(&e) = self.incident(x).get(next) {
                    top.2 += 1;
                    if Some(e) == via {
                        continue;
                    }
                    let y = self.links[e.index()].as_ref().unwrap().other(x);
                    if order[y.index()] == usize::MAX {
                        order[y.index()] = clock;
                        low[y.index()] = clock;
                        clock += 1;
                        if x == root {
                            root_children += 1;
                        }
                        stack.push((y, Some(e), 0));
                    } else {
                        low[x.index()] = low[x.index()].min(order[y.index()]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(parent, _, _)) = stack.last() {
                        low[parent.index()] = low[parent.index()].min(low[x.index()]);
                        if parent != root && low[x.index()] >= order[parent.index()] {
                            cuts.insert(parent);
                        }
                    }
                }
            }
            if root_children > 1 {
                cuts.insert(root);
            }
        }
        cuts
    }

    /// True iff every pair of `terminals` is within `d` hops.
    pub fn is_d_connected(&self, terminals: &[NodeId], d: usize) -> bool {
        terminals.iter().enumerate().all(|(i, &u)| {
            terminals[i + 1..]
                .iter()
                .all(|&v| self.distance(u, v, &[]).within(d))
        })
    }
}

/// A source-terminal diameter-constrained reliability problem.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance<P> {
    graph: Graph<P>,
    source: NodeId,
    target: NodeId,
    diameter: usize,
}

impl<P: Prob> Instance<P> {
    /// Validates the terminals and clamps `diameter` to `|V| - 1`.
    pub fn new(graph: Graph<P>, source: NodeId, target: NodeId, diameter: usize) -> Result<Self> {
        if source == target {
            return Err(DcrError::invalid("source and target coincide"));
        }
        for v in [source, target] {
            if !graph.contains_node(v) {
                return Err(DcrError::invalid(format!("terminal {v} not in graph")));
            }
        }
        if diameter == 0 {
            return Err(DcrError::invalid("diameter must be at least 1"));
        }
        let diameter = diameter.min(graph.node_count() - 1);
        Ok(Instance {
            graph,
            source,
            target,
            diameter,
        })
    }

    pub fn graph(&self) -> &Graph<P> {
        &self.graph
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn target(&self) -> NodeId {
        self.target
    }

    pub fn diameter(&self) -> usize {
        self.diameter
    }

    pub fn terminals(&self) -> [NodeId; 2] {
        [self.source, self.target]
    }

    pub fn is_terminal(&self, v: NodeId) -> bool {
        v == self.source || v == self.target
    }

    /// Same terminals and diameter over a different graph.
    pub fn with_graph(&self, graph: Graph<P>) -> Self {
        Instance {
            graph,
            source: self.source,
            target: self.target,
            diameter: self.diameter,
        }
    }

    /// Same graph and terminals, different diameter (clamped like `new`).
    pub fn with_diameter(&self, diameter: usize) -> Result<Self> {
        Instance::new(self.graph.clone(), self.source, self.target, diameter)
    }

    pub(crate) fn graph_mut(&mut self) -> &mut Graph<P> {
        &mut self.graph
    }

    pub(crate) fn set_source(&mut self, v: NodeId) {
        self.source = v;
    }

    pub(crate) fn set_target(&mut self, v: NodeId) {
        self.target = v;
    }

    pub(crate) fn set_diameter(&mut self, d: usize) {
        self.diameter = d;
    }

    pub fn st_distance(&self) -> Hops {
        self.graph.distance(self.source, self.target, &[])
    }
}
