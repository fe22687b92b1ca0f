//! Reliability-preserving simplifications.
//!
//! Each operation rewrites an instance `I` into `(mu, I')` with
//! `DCR(I) = mu * DCR(I')`:
//!
//! * **Pending-Node**: non-terminal nodes of degree at most one are deleted;
//!   a terminal hanging on a single link `{s, x}` (with `x` not the other
//!   terminal) is contracted into `x`, which becomes the terminal, with
//!   `mu = p_e` and the diameter reduced by one.
//! * **Perfect-Path**: along a chain whose interior nodes are non-terminal
//!   with degree two, all links but the last become perfect and the last
//!   carries the product of the chain.
//! * **Perfect-Neighbors**: a terminal whose links are all perfect, and
//!   which is not adjacent to the other terminal, is merged with its
//!   neighbourhood; the diameter drops by one.
//! * **Perfect-Cut-Node**: components hanging off a cut vertex that contain
//!   no terminal are deleted (as are terminal-free components of the graph).
//! * **Parallel-Links**: links sharing both endpoints are merged with
//!   reliability `p1 + p2 - p1 p2`.
//!
//! [`apply_5p`] runs them in that order, each to exhaustion, until a full
//! round changes nothing. Every rewrite is logged as a [`ReductionStep`];
//! [`replay`] re-applies a trace and reproduces the reduced instance exactly.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::Prob;
use crate::error::{DcrError, Result};
use crate::graph::{Graph, Instance, LinkId, NodeId};
use crate::irrelevance::{prune_irrelevant, Condition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StepKind {
    PendingNode,
    PerfectPath,
    PerfectNeighbors,
    PerfectCutNode,
    ParallelLinks,
    IrrelevantPrune,
    Pivot,
}

/// Which factoring branch a pivot step took.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PivotBranch {
    Deleted,
    Perfect,
}

/// One logged rewrite.
///
/// Field meaning per kind:
///
/// | kind | anchor | nodes | links |
/// |------|--------|-------|-------|
/// | PendingNode (delete) | - | `[v]` | - |
/// | PendingNode (contract) | old terminal | `[new terminal]` | `[e]` |
/// | PerfectPath | - | chain nodes | chain links, in order |
/// | PerfectNeighbors | terminal | merged neighbours | merged links |
/// | PerfectCutNode | cut vertex, if any | deleted nodes | - |
/// | ParallelLinks | - | - | `[kept, removed]` |
/// | IrrelevantPrune | - | - | `[e]` |
/// | Pivot | - | - | `[e]` |
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionStep<P> {
    pub kind: StepKind,
    pub anchor: Option<NodeId>,
    pub nodes: Vec<NodeId>,
    pub links: Vec<LinkId>,
    pub multiplier: P,
    pub diameter_delta: i32,
    pub branch: Option<PivotBranch>,
}

impl<P: Prob> ReductionStep<P> {
    fn new(kind: StepKind) -> Self {
        ReductionStep {
            kind,
            anchor: None,
            nodes: Vec::new(),
            links: Vec::new(),
            multiplier: P::one(),
            diameter_delta: 0,
            branch: None,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind,
            "anchor": self.anchor,
            "nodes": self.nodes,
            "links": self.links,
            "multiplier": self.multiplier.to_json(),
            "diameter_delta": self.diameter_delta,
            "branch": self.branch,
        })
    }
}

/// `DCR(original) = multiplier * DCR(instance)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedForm<P> {
    pub multiplier: P,
    pub instance: Instance<P>,
    pub trace: Vec<ReductionStep<P>>,
}

struct Reducer<P> {
    inst: Instance<P>,
    multiplier: P,
    trace: Vec<ReductionStep<P>>,
}

impl<P: Prob> Reducer<P> {
    fn new(inst: &Instance<P>) -> Self {
        Reducer {
            inst: inst.clone(),
            multiplier: P::one(),
            trace: Vec::new(),
        }
    }

    fn g(&self) -> &Graph<P> {
        self.inst.graph()
    }

    fn apply(&mut self, step: ReductionStep<P>) {
        apply_step(&mut self.inst, &step).expect("step built from live graph");
        self.multiplier = self.multiplier.clone() * step.multiplier.clone();
        self.trace.push(step);
    }

    fn finish(self) -> ReducedForm<P> {
        ReducedForm {
            multiplier: self.multiplier,
            instance: self.inst,
            trace: self.trace,
        }
    }

    fn pending_node(&mut self) -> bool {
        let mut changed = false;
        loop {
            let dangling = self
                .g()
                .nodes()
                .find(|&v| !self.inst.is_terminal(v) && self.g().degree(v) <= 1);
            if let Some(v) = dangling {
                let mut step = ReductionStep::new(StepKind::PendingNode);
                step.nodes.push(v);
                self.apply(step);
                changed = true;
                continue;
            }
            let Some(step) = self.pending_terminal() else {
                return changed;
            };
            self.apply(step);
            changed = true;
        }
    }

    fn pending_terminal(&self) -> Option<ReductionStep<P>> {
        if self.inst.diameter() < 2 {
            return None;
        }
        for (term, other) in [
            (self.inst.source(), self.inst.target()),
            (self.inst.target(), self.inst.source()),
        ] {
            let [e] = self.g().incident(term) else {
                continue;
            };
            let link = self.g().link(*e).unwrap();
            let x = link.other(term);
            if x == other {
                continue;
            }
            let mut step = ReductionStep::new(StepKind::PendingNode);
            step.anchor = Some(term);
            step.nodes.push(x);
            step.links.push(*e);
            step.multiplier = link.reliability.clone();
            step.diameter_delta = -1;
            return Some(step);
        }
        None
    }

    fn perfect_path(&mut self) -> bool {
        let mut changed = false;
        for (nodes, links) in chains(&self.inst) {
            let g = self.g();
            if links[..links.len() - 1]
                .iter()
                .all(|&e| g.reliability(e).unwrap().is_one())
            {
                continue;
            }
            let mut step = ReductionStep::new(StepKind::PerfectPath);
            step.nodes = nodes;
            step.links = links;
            self.apply(step);
            changed = true;
        }
        changed
    }

    fn perfect_neighbors(&mut self) -> bool {
        let mut changed = false;
        'outer: loop {
            if self.inst.diameter() < 2 {
                return changed;
            }
            for (term, other) in [
                (self.inst.source(), self.inst.target()),
                (self.inst.target(), self.inst.source()),
            ] {
                let g = self.g();
                let inc = g.incident(term);
                if inc.is_empty() || !inc.iter().all(|&e| g.reliability(e).unwrap().is_one()) {
                    continue;
                }
                let neighbors = g.neighbors(term);
                if neighbors.contains(&other) {
                    continue;
                }
                let mut step = ReductionStep::new(StepKind::PerfectNeighbors);
                step.anchor = Some(term);
                step.links = {
                    let mut l = inc.to_vec();
                    l.sort_unstable();
                    l
                };
                step.nodes = neighbors;
                step.diameter_delta = -1;
                self.apply(step);
                changed = true;
                continue 'outer;
            }
            return changed;
        }
    }

    fn cut_node_cleanup(&mut self) -> bool {
        let mut changed = false;
        'outer: loop {
            let (s, t) = (self.inst.source(), self.inst.target());
            let dead = |comp: &Vec<NodeId>| !comp.contains(&s) && !comp.contains(&t);
            if let Some(comp) = self.g().components().into_iter().find(dead) {
                let mut step = ReductionStep::new(StepKind::PerfectCutNode);
                step.nodes = comp;
                self.apply(step);
                changed = true;
                continue;
            }
            for v in self.g().cut_vertices() {
                let side = self
                    .g()
                    .components_avoiding(Some(v))
                    .into_iter()
                    .find(dead);
                if let Some(comp) = side {
                    let mut step = ReductionStep::new(StepKind::PerfectCutNode);
                    step.anchor = Some(v);
                    step.nodes = comp;
                    self.apply(step);
                    changed = true;
                    continue 'outer;
                }
            }
            return changed;
        }
    }

    fn parallel_links(&mut self) -> bool {
        let mut changed = false;
        loop {
            let Some((kept, removed)) = first_parallel_pair(self.g()) else {
                return changed;
            };
            let mut step = ReductionStep::new(StepKind::ParallelLinks);
            step.links = vec![kept, removed];
            self.apply(step);
            changed = true;
        }
    }

    fn prune(&mut self, cond: Condition) {
        let (_, certs) = prune_irrelevant(&self.inst, cond);
        for cert in certs {
            let mut step = ReductionStep::new(StepKind::IrrelevantPrune);
            step.links.push(cert.link);
            self.apply(step);
        }
    }

    fn run_5p(&mut self) {
        loop {
            let mut changed = self.pending_node();
            changed |= self.perfect_path();
            changed |= self.perfect_neighbors();
            changed |= self.cut_node_cleanup();
            changed |= self.parallel_links();
            if !changed {
                return;
            }
        }
    }
}

fn is_chain_interior<P: Prob>(inst: &Instance<P>, v: NodeId) -> bool {
    let g = inst.graph();
    !inst.is_terminal(v) && g.degree(v) == 2 && g.neighbors(v).len() == 2
}

/// Maximal chains `v1 .. vn` (n >= 3) whose interior nodes are non-terminal
/// with two distinct neighbours. Oriented from the smaller end id; chains
/// closing on themselves are skipped.
fn chains<P: Prob>(inst: &Instance<P>) -> Vec<(Vec<NodeId>, Vec<LinkId>)> {
    let g = inst.graph();
    let mut seen = vec![false; g.node_bound()];
    let mut out = Vec::new();
    for start in g.nodes() {
        if seen[start.index()] || !is_chain_interior(inst, start) {
            continue;
        }
        seen[start.index()] = true;
        // Walk outwards through each of the two links.
        let mut halves: Vec<(Vec<NodeId>, Vec<LinkId>)> = Vec::new();
        let mut closed = false;
        for &first in g.incident(start) {
            let mut nodes = Vec::new();
            let mut links = vec![first];
            let mut prev_link = first;
            let mut cur = g.link(first).unwrap().other(start);
            loop {
                nodes.push(cur);
                if cur == start {
                    closed = true;
                    break;
                }
                if !is_chain_interior(inst, cur) {
                    break;
                }
                seen[cur.index()] = true;
                let &next = g.incident(cur).iter().find(|&&e| e != prev_link).unwrap();
                links.push(next);
                prev_link = next;
                cur = g.link(next).unwrap().other(cur);
            }
            halves.push((nodes, links));
        }
        if closed {
            continue;
        }
        let (left_nodes, left_links) = &halves[0];
        let (right_nodes, right_links) = &halves[1];
        let mut nodes: Vec<NodeId> = left_nodes.iter().rev().copied().collect();
        nodes.push(start);
        nodes.extend(right_nodes);
        let mut links: Vec<LinkId> = left_links.iter().rev().copied().collect();
        links.extend(right_links);
        if nodes[0] == *nodes.last().unwrap() {
            continue;
        }
        if nodes[0] > *nodes.last().unwrap() {
            nodes.reverse();
            links.reverse();
        }
        out.push((nodes, links));
    }
    out
}

fn first_parallel_pair<P: Prob>(g: &Graph<P>) -> Option<(LinkId, LinkId)> {
    for u in g.nodes() {
        let mut inc: Vec<(NodeId, LinkId)> = g
            .incident(u)
            .iter()
            .map(|&e| (g.link(e).unwrap().other(u), e))
            .collect();
        inc.sort_unstable();
        for w in inc.windows(2) {
            if w[0].0 == w[1].0 {
                return Some((w[0].1, w[1].1));
            }
        }
    }
    None
}

/// Applies one logged step in place.
fn apply_step<P: Prob>(inst: &mut Instance<P>, step: &ReductionStep<P>) -> Result<()> {
    let bad = || DcrError::invalid(format!("malformed {:?} step", step.kind));
    match step.kind {
        StepKind::PendingNode => match (step.anchor, step.nodes.as_slice(), step.links.as_slice()) {
            (None, [v], []) => inst.graph_mut().remove_node_mut(*v)?,
            (Some(term), [x], [e]) => {
                inst.graph_mut().merge_into_mut(*e, *x)?;
                if inst.source() == term {
                    inst.set_source(*x);
                } else if inst.target() == term {
                    inst.set_target(*x);
                } else {
                    return Err(bad());
                }
                shift_diameter(inst, step.diameter_delta)?;
            }
            _ => return Err(bad()),
        },
        StepKind::PerfectPath => {
            let (last, rest) = step.links.split_last().ok_or_else(bad)?;
            let g = inst.graph_mut();
            let mut product = P::one();
            for &e in &step.links {
                product = product * g.expect_link(e)?.reliability.clone();
            }
            for &e in rest {
                g.set_reliability_mut(e, P::one())?;
            }
            g.set_reliability_mut(*last, product)?;
        }
        StepKind::PerfectNeighbors => {
            let term = step.anchor.ok_or_else(bad)?;
            for &w in &step.nodes {
                inst.graph_mut().absorb_node_mut(w, term)?;
            }
            shift_diameter(inst, step.diameter_delta)?;
        }
        StepKind::PerfectCutNode => {
            for &v in &step.nodes {
                inst.graph_mut().remove_node_mut(v)?;
            }
        }
        StepKind::ParallelLinks => {
            let [kept, removed] = step.links.as_slice() else {
                return Err(bad());
            };
            let g = inst.graph_mut();
            let gone = g.remove_link_mut(*removed)?.reliability;
            let a = g.expect_link(*kept)?.reliability.clone();
            g.set_reliability_mut(*kept, parallel(&a, &gone))?;
        }
        StepKind::IrrelevantPrune => {
            let [e] = step.links.as_slice() else {
                return Err(bad());
            };
            inst.graph_mut().remove_link_mut(*e)?;
        }
        StepKind::Pivot => {
            let [e] = step.links.as_slice() else {
                return Err(bad());
            };
            match step.branch.ok_or_else(bad)? {
                PivotBranch::Deleted => {
                    inst.graph_mut().remove_link_mut(*e)?;
                }
                PivotBranch::Perfect => inst.graph_mut().set_reliability_mut(*e, P::one())?,
            }
        }
    }
    Ok(())
}

fn shift_diameter<P: Prob>(inst: &mut Instance<P>, delta: i32) -> Result<()> {
    let d = inst.diameter() as i64 + delta as i64;
    if d < 1 {
        return Err(DcrError::invalid("step would drop the diameter below 1"));
    }
    inst.set_diameter(d as usize);
    Ok(())
}

/// Reliability of two parallel links.
pub fn parallel<P: Prob>(a: &P, b: &P) -> P {
    (a.complement() * b.complement()).complement()
}

pub fn pending_node<P: Prob>(inst: &Instance<P>) -> Option<(P, Instance<P>)> {
    let mut r = Reducer::new(inst);
    r.pending_node().then_some((r.multiplier, r.inst))
}

pub fn perfect_path<P: Prob>(inst: &Instance<P>) -> Option<Instance<P>> {
    let mut r = Reducer::new(inst);
    r.perfect_path().then_some(r.inst)
}

pub fn perfect_neighbors<P: Prob>(inst: &Instance<P>) -> Option<Instance<P>> {
    let mut r = Reducer::new(inst);
    r.perfect_neighbors().then_some(r.inst)
}

pub fn cut_node_cleanup<P: Prob>(inst: &Instance<P>) -> Option<Instance<P>> {
    let mut r = Reducer::new(inst);
    r.cut_node_cleanup().then_some(r.inst)
}

pub fn parallel_links<P: Prob>(inst: &Instance<P>) -> Option<Instance<P>> {
    let mut r = Reducer::new(inst);
    r.parallel_links().then_some(r.inst)
}

/// The five operations in order, each to exhaustion, until a full round is
/// a no-op.
pub fn apply_5p<P: Prob>(inst: &Instance<P>) -> ReducedForm<P> {
    let mut r = Reducer::new(inst);
    r.run_5p();
    r.finish()
}

/// Optional irrelevance pruning followed by [`apply_5p`], in one trace.
pub fn reduce<P: Prob>(inst: &Instance<P>, prune: Option<Condition>) -> ReducedForm<P> {
    let mut r = Reducer::new(inst);
    if let Some(cond) = prune {
        r.prune(cond);
    }
    r.run_5p();
    r.finish()
}

/// Re-applies a trace to `inst`, returning the accumulated multiplier and
/// the resulting instance.
pub fn replay<P: Prob>(inst: &Instance<P>, trace: &[ReductionStep<P>]) -> Result<(P, Instance<P>)> {
    let mut cur = inst.clone();
    let mut mult = P::one();
    for step in trace {
        apply_step(&mut cur, step)?;
        mult = mult * step.multiplier.clone();
    }
    Ok((mult, cur))
}

/// The factoring step on `e` as a logged rewrite, for traces.
pub fn pivot_step<P: Prob>(inst: &Instance<P>, e: LinkId, branch: PivotBranch) -> Result<ReductionStep<P>> {
    let p = inst.graph().expect_link(e)?.reliability.clone();
    let mut step = ReductionStep::new(StepKind::Pivot);
    step.links.push(e);
    step.branch = Some(branch);
    step.multiplier = match branch {
        PivotBranch::Deleted => p.complement(),
        PivotBranch::Perfect => p,
    };
    Ok(step)
}

pub fn trace_to_json<P: Prob>(trace: &[ReductionStep<P>]) -> Value {
    Value::Array(trace.iter().map(ReductionStep::to_json).collect())
}
