//! Polynomial-time formulas for diameter 1 (any terminal set) and for two
//! terminals at diameter 2.

use crate::arith::Prob;
use crate::error::{DcrError, Result};
use crate::graph::{Graph, Instance, NodeId};

/// Reliability of the bundle of links between `u` and `v`, merging parallel
/// copies as `1 - prod(1 - p_i)`. Zero when the nodes are not adjacent.
pub fn pair_reliability<P: Prob>(g: &Graph<P>, u: NodeId, v: NodeId) -> P {
    let fail = g
        .links_between(u, v)
        .into_iter()
        .fold(P::one(), |acc, e| acc * g.reliability(e).unwrap().complement());
    fail.complement()
}

/// `R = prod over terminal pairs of p(uv)`: at diameter 1 every pair needs a
/// direct link.
pub fn dcr_d1_terminals<P: Prob>(g: &Graph<P>, terminals: &[NodeId]) -> Result<P> {
    if let Some(v) = terminals.iter().find(|v| !g.contains_node(**v)) {
        return Err(DcrError::invalid(format!("terminal {v} not in graph")));
    }
    let mut r = P::one();
    for (i, &u) in terminals.iter().enumerate() {
        for &v in &terminals[i + 1..] {
            r = r * pair_reliability(g, u, v);
        }
    }
    Ok(r)
}

pub fn dcr_d1<P: Prob>(inst: &Instance<P>) -> Result<P> {
    if inst.diameter() != 1 {
        return Err(DcrError::invalid(format!(
            "closed form requires d = 1, got {}",
            inst.diameter()
        )));
    }
    dcr_d1_terminals(inst.graph(), &inst.terminals())
}

/// `R = 1 - (1 - p(uv)) * prod_w (1 - p(uw) p(wv))` over all other nodes `w`.
pub fn dcr_k2_d2<P: Prob>(inst: &Instance<P>) -> Result<P> {
    if inst.diameter() != 2 {
        return Err(DcrError::invalid(format!(
            "closed form requires d = 2, got {}",
            inst.diameter()
        )));
    }
    let g = inst.graph();
    let (u, v) = (inst.source(), inst.target());
    let mut fail = pair_reliability(g, u, v).complement();
    for w in g.nodes().filter(|&w| w != u && w != v) {
        let two_hop = pair_reliability(g, u, w) * pair_reliability(g, w, v);
        fail = fail * two_hop.complement();
    }
    Ok(fail.complement())
}
