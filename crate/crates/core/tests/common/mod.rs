//! Shared helpers for the integration tests: a deliberately naive reference
//! reliability and random instance generators.

#![allow(dead_code)]

use std::collections::VecDeque;

use dcr::{ratio, Graph, Instance, NodeId, Prob};
use num::{BigRational, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Reliabilities used by the random sweeps.
pub fn levels() -> Vec<BigRational> {
    vec![ratio(0, 1), ratio(1, 4), ratio(1, 2), ratio(3, 4), ratio(1, 1)]
}

/// Sum over every link state of its probability when `s` reaches `t` in at
/// most `d` hops. Written from scratch: plain edge list, BFS per state.
pub fn naive_dcr(inst: &Instance<BigRational>) -> BigRational {
    let g = inst.graph();
    let nodes: Vec<NodeId> = g.nodes().collect();
    let pos = |v: NodeId| nodes.iter().position(|&w| w == v).unwrap();
    let edges: Vec<(usize, usize, BigRational)> = g
        .links()
        .map(|l| (pos(l.a), pos(l.b), l.reliability.clone()))
        .collect();
    let (s, t, d) = (pos(inst.source()), pos(inst.target()), inst.diameter());
    assert!(edges.len() <= 20, "naive oracle is exponential");
    let mut total = BigRational::zero();
    for mask in 0u32..(1 << edges.len()) {
        let mut weight = BigRational::one();
        for (i, (_, _, p)) in edges.iter().enumerate() {
            weight *= if mask >> i & 1 == 1 {
                p.clone()
            } else {
                BigRational::one() - p
            };
        }
        if weight.is_zero() {
            continue;
        }
        let mut dist = vec![usize::MAX; nodes.len()];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for (i, (a, b, _)) in edges.iter().enumerate() {
                if mask >> i & 1 == 0 {
                    continue;
                }
                let y = if *a == x {
                    *b
                } else if *b == x {
                    *a
                } else {
                    continue;
                };
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        if dist[t] <= d {
            total += weight;
        }
    }
    total
}

/// Random connected multigraph: a random spanning tree plus extra links
/// (parallel links allowed), reliabilities drawn from `levels`.
pub fn random_connected<P: Prob>(
    rng: &mut ChaCha8Rng,
    nodes: usize,
    links: usize,
    levels: &[BigRational],
) -> Graph<P> {
    assert!(nodes >= 2 && links + 1 >= nodes);
    let mut g = Graph::with_nodes(nodes);
    let draw = |rng: &mut ChaCha8Rng| P::from_ratio(&levels[rng.random_range(0..levels.len())]);
    for v in 1..nodes {
        let u = rng.random_range(0..v);
        let p = draw(rng);
        g.add_link(NodeId(u as u32), NodeId(v as u32), p).unwrap();
    }
    while g.link_count() < links {
        let a = rng.random_range(0..nodes);
        let b = rng.random_range(0..nodes);
        if a != b {
            let p = draw(rng);
            g.add_link(NodeId(a as u32), NodeId(b as u32), p).unwrap();
        }
    }
    g
}

/// A random instance with `|V| <= max_nodes`, `|E| <= max_links` and random
/// distinct terminals; the diameter is left at `|V| - 1`.
pub fn random_instance(rng: &mut ChaCha8Rng, max_nodes: usize, max_links: usize) -> Instance<BigRational> {
    let n = rng.random_range(2..=max_nodes);
    let m = rng.random_range(n - 1..=max_links.max(n - 1));
    let g = random_connected(rng, n, m, &levels());
    let s = rng.random_range(0..n);
    let mut t = rng.random_range(0..n - 1);
    if t >= s {
        t += 1;
    }
    Instance::new(g, NodeId(s as u32), NodeId(t as u32), n - 1).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
