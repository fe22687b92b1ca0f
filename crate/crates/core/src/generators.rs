//! Instance families: paths, cycles, complete graphs, grids, the small
//! irrelevant-link example graph, and bipartite inputs for the
//! Cancela-Petingi construction.

use std::collections::BTreeSet;

use crate::arith::Prob;
use crate::error::{DcrError, Result};
use crate::graph::{Graph, Instance, NodeId};

fn n(i: usize) -> NodeId {
    NodeId(i as u32)
}

/// The eight-node example graph with an irrelevant link.
///
/// Nodes are `s = 0`, `1..=6`, `t = 7`; links in id order are
/// `s1, 12, 23, 34, 45, 56, 6t, 14, 1t`, all with reliability `p`; `d = 6`.
pub fn figred<P: Prob>(p: P) -> Instance<P> {
    let mut g = Graph::with_nodes(8);
    for (a, b) in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 4), (1, 7)] {
        g.add_link(n(a), n(b), p.clone()).expect("static graph");
    }
    Instance::new(g, n(0), n(7), 6).expect("static instance")
}

pub fn path_graph<P: Prob>(nodes: usize, p: P) -> Graph<P> {
    let mut g = Graph::with_nodes(nodes);
    for i in 1..nodes {
        g.add_link(n(i - 1), n(i), p.clone()).expect("fresh nodes");
    }
    g
}

pub fn cycle_graph<P: Prob>(nodes: usize, p: P) -> Graph<P> {
    let mut g = path_graph(nodes, p.clone());
    if nodes >= 3 {
        g.add_link(n(nodes - 1), n(0), p).expect("fresh nodes");
    }
    g
}

pub fn complete_graph<P: Prob>(nodes: usize, p: P) -> Graph<P> {
    let mut g = Graph::with_nodes(nodes);
    for i in 0..nodes {
        for j in i + 1..nodes {
            g.add_link(n(i), n(j), p.clone()).expect("fresh nodes");
        }
    }
    g
}

/// `rows x cols` grid, nodes numbered row-major.
pub fn grid_graph<P: Prob>(rows: usize, cols: usize, p: P) -> Graph<P> {
    let mut g = Graph::with_nodes(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                g.add_link(n(v), n(v + 1), p.clone()).expect("fresh nodes");
            }
            if r + 1 < rows {
                g.add_link(n(v), n(v + cols), p.clone()).expect("fresh nodes");
            }
        }
    }
    g
}

/// `K_{a,b}`: part A is `0..a`, part B is `a..a+b`.
pub fn complete_bipartite<P: Prob>(a: usize, b: usize, p: P) -> (Graph<P>, BTreeSet<NodeId>) {
    let mut g = Graph::with_nodes(a + b);
    for i in 0..a {
        for j in a..a + b {
            g.add_link(n(i), n(j), p.clone()).expect("fresh nodes");
        }
    }
    (g, (0..a).map(n).collect())
}

/// Even cycle with its bipartition (even positions form part A).
pub fn even_cycle<P: Prob>(nodes: usize, p: P) -> Result<(Graph<P>, BTreeSet<NodeId>)> {
    if nodes < 4 || !nodes.is_multiple_of(2) {
        return Err(DcrError::invalid("bipartite cycle needs an even length of at least 4"));
    }
    Ok((cycle_graph(nodes, p), (0..nodes).step_by(2).map(n).collect()))
}

pub fn path<P: Prob>(nodes: usize, p: P) -> Result<Instance<P>> {
    check_nodes(nodes, 2)?;
    Instance::new(path_graph(nodes, p), n(0), n(nodes - 1), nodes - 1)
}

/// Cycle with antipodal terminals `0` and `nodes / 2`.
pub fn cycle<P: Prob>(nodes: usize, p: P) -> Result<Instance<P>> {
    check_nodes(nodes, 3)?;
    Instance::new(cycle_graph(nodes, p), n(0), n(nodes / 2), nodes - 1)
}

pub fn complete<P: Prob>(nodes: usize, p: P) -> Result<Instance<P>> {
    check_nodes(nodes, 2)?;
    Instance::new(complete_graph(nodes, p), n(0), n(nodes - 1), nodes - 1)
}

/// Grid with terminals at opposite corners.
pub fn grid<P: Prob>(rows: usize, cols: usize, p: P) -> Result<Instance<P>> {
    check_nodes(rows * cols, 2)?;
    if rows == 0 || cols == 0 {
        return Err(DcrError::invalid("grid dimensions must be positive"));
    }
    let g = grid_graph(rows, cols, p);
    let last = rows * cols - 1;
    Instance::new(g, n(0), n(last), last)
}

fn check_nodes(nodes: usize, min: usize) -> Result<()> {
    if nodes < min {
        return Err(DcrError::invalid(format!("family needs at least {min} nodes")));
    }
    Ok(())
}
