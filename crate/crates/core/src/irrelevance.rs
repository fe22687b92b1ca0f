//! Distance-based sufficient conditions for link irrelevance.
//!
//! A link `e = {x, y}` is irrelevant when no elementary `s`-`t` path of at
//! most `d` links uses it. Each condition bounds from below the length of
//! any such path in both orientations (`s .. x y .. t` and `s .. y x .. t`);
//! if both bounds exceed `d` the link can be deleted without changing the
//! reliability.
//!
//! | condition | distances taken in |
//! |-----------|--------------------|
//! | C1 | `G` |
//! | C2 | `G - e` |
//! | C3 | `G - y - t` for the `s..x` half, `G - s - x` for the `y..t` half |
//!
//! Each is at least as strong as the previous one, and none is complete.

use serde::{Deserialize, Serialize};

use crate::arith::Prob;
use crate::error::Result;
use crate::graph::{Hops, Instance, LinkId, NodeId};
use crate::oracle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Condition {
    C1,
    C2,
    C3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CertifiedBy {
    C1,
    C2,
    C3,
    Oracle,
}

impl From<Condition> for CertifiedBy {
    fn from(c: Condition) -> Self {
        match c {
            Condition::C1 => CertifiedBy::C1,
            Condition::C2 => CertifiedBy::C2,
            Condition::C3 => CertifiedBy::C3,
        }
    }
}

/// Proof that a link is irrelevant. For the distance conditions `witness`
/// holds the two orientation sums, both `>= d`; the oracle carries none.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IrrelevanceCertificate {
    pub link: LinkId,
    pub endpoints: (NodeId, NodeId),
    pub condition: CertifiedBy,
    pub witness: Option<[Hops; 2]>,
}

/// The two orientation sums for `e` under `cond`.
pub fn orientation_sums<P: Prob>(inst: &Instance<P>, e: LinkId, cond: Condition) -> Result<[Hops; 2]> {
    let g = inst.graph();
    let (x, y) = g.expect_link(e)?.endpoints();
    let (s, t) = (inst.source(), inst.target());
    let sums = match cond {
        Condition::C1 => [
            g.distance(s, x, &[]) + g.distance(y, t, &[]),
            g.distance(s, y, &[]) + g.distance(x, t, &[]),
        ],
        Condition::C2 => {
            let d = |u, v| g.distance_where(u, v, |_| true, |l| l.id != e);
            [d(s, x) + d(y, t), d(s, y) + d(x, t)]
        }
        Condition::C3 => [
            g.distance(s, x, &[y, t]) + g.distance(y, t, &[s, x]),
            g.distance(s, y, &[x, t]) + g.distance(x, t, &[s, y]),
        ],
    };
    Ok(sums)
}

pub fn certify<P: Prob>(
    inst: &Instance<P>,
    e: LinkId,
    cond: Condition,
) -> Result<Option<IrrelevanceCertificate>> {
    let sums = orientation_sums(inst, e, cond)?;
    let bound = Hops::Finite(inst.diameter());
    if sums.iter().all(|&s| s >= bound) {
        let link = inst.graph().link(e).unwrap();
        Ok(Some(IrrelevanceCertificate {
            link: e,
            endpoints: link.endpoints(),
            condition: cond.into(),
            witness: Some(sums),
        }))
    } else {
        Ok(None)
    }
}

pub fn condition1<P: Prob>(inst: &Instance<P>, e: LinkId) -> Result<Option<IrrelevanceCertificate>> {
    certify(inst, e, Condition::C1)
}

pub fn condition2<P: Prob>(inst: &Instance<P>, e: LinkId) -> Result<Option<IrrelevanceCertificate>> {
    certify(inst, e, Condition::C2)
}

pub fn condition3<P: Prob>(inst: &Instance<P>, e: LinkId) -> Result<Option<IrrelevanceCertificate>> {
    certify(inst, e, Condition::C3)
}

/// One pass over all links of the unmodified instance.
pub fn scan<P: Prob>(inst: &Instance<P>, cond: Condition) -> Vec<IrrelevanceCertificate> {
    let ids: Vec<LinkId> = inst.graph().links().map(|l| l.id).collect();
    ids.into_iter()
        .filter_map(|e| certify(inst, e, cond).expect("live link"))
        .collect()
}

/// Exact irrelevance by path enumeration.
pub fn oracle_scan<P: Prob>(inst: &Instance<P>) -> Vec<IrrelevanceCertificate> {
    let relevant = oracle::relevant_links(inst);
    inst.graph()
        .links()
        .filter(|l| !relevant.contains(&l.id))
        .map(|l| IrrelevanceCertificate {
            link: l.id,
            endpoints: l.endpoints(),
            condition: CertifiedBy::Oracle,
            witness: None,
        })
        .collect()
}

/// Deletes certified links until no link certifies, re-scanning after every
/// pass since a deletion can lengthen the distances used by the conditions.
/// Certificates are returned in deletion order, each valid for the graph it
/// was issued on.
pub fn prune_irrelevant<P: Prob>(
    inst: &Instance<P>,
    cond: Condition,
) -> (Instance<P>, Vec<IrrelevanceCertificate>) {
    let mut cur = inst.clone();
    let mut certs = Vec::new();
    loop {
        let before = certs.len();
        let ids: Vec<LinkId> = cur.graph().links().map(|l| l.id).collect();
        for e in ids {
            if let Some(cert) = certify(&cur, e, cond).expect("live link") {
                cur.graph_mut().remove_link_mut(e).expect("live link");
                certs.push(cert);
            }
        }
        if certs.len() == before {
            return (cur, certs);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{figred, path};

    fn ids(certs: &[IrrelevanceCertificate]) -> Vec<u32> {
        certs.iter().map(|c| c.link.0).collect()
    }

    // Link ids in the example graph: s1=0 12=1 23=2 34=3 45=4 56=5 6t=6 14=7 1t=8.

    #[test]
    fn condition1_on_figred() {
        let d5 = figred(0.5).with_diameter(5).unwrap();
        let sums = orientation_sums(&d5, LinkId(1), Condition::C1).unwrap();
        assert_eq!(sums[0], Hops::Finite(3));
        assert!(condition1(&d5, LinkId(1)).unwrap().is_none());
        assert!(condition1(&figred(0.5), LinkId(1)).unwrap().is_none());
        // On the shortest path s-1-t.
        assert!(condition1(&d5, LinkId(8)).unwrap().is_none());
    }

    #[test]
    fn condition1_unreachable_link() {
        let mut inst = path(3, 0.5).unwrap();
        let a = inst.graph_mut().add_node();
        let b = inst.graph_mut().add_node();
        let e = inst.graph_mut().add_link(a, b, 0.5).unwrap();
        let cert = condition1(&inst, e).unwrap().unwrap();
        assert_eq!(cert.witness, Some([Hops::Infinite, Hops::Infinite]));
    }

    #[test]
    fn condition2_on_figred() {
        let d5 = figred(0.5).with_diameter(5).unwrap();
        let cert = condition2(&d5, LinkId(1)).unwrap().unwrap();
        assert_eq!(cert.witness, Some([Hops::Finite(5), Hops::Finite(5)]));
        let d6 = figred(0.5);
        assert_eq!(
            orientation_sums(&d6, LinkId(1), Condition::C2).unwrap()[0],
            Hops::Finite(5)
        );
        assert!(condition2(&d6, LinkId(1)).unwrap().is_none());
        // A direct s-t link is never irrelevant.
        assert!(condition2(&d6, LinkId(8)).unwrap().is_none());
    }

    #[test]
    fn condition3_on_figred() {
        let d6 = figred(0.5);
        let cert = condition3(&d6, LinkId(1)).unwrap().unwrap();
        assert_eq!(cert.witness, Some([Hops::Finite(6), Hops::Infinite]));
        let sums = orientation_sums(&d6, LinkId(2), Condition::C3).unwrap();
        assert_eq!(sums[1], Hops::Finite(5));
        assert!(condition3(&d6, LinkId(2)).unwrap().is_none());
        let sums = orientation_sums(&d6, LinkId(3), Condition::C3).unwrap();
        assert_eq!(sums, [Hops::Finite(5), Hops::Finite(5)]);
        assert!(condition3(&d6, LinkId(3)).unwrap().is_none());
    }

    #[test]
    fn scans_on_figred() {
        let d6 = figred(0.5);
        let d5 = d6.with_diameter(5).unwrap();
        assert!(scan(&d6, Condition::C1).is_empty());
        assert!(scan(&d6, Condition::C2).is_empty());
        assert_eq!(ids(&scan(&d6, Condition::C3)), vec![1]);
        assert_eq!(ids(&oracle_scan(&d6)), vec![1, 2, 3]);
        // At d = 5 the conditions also reach links 23 and 34, whose
        // orientation sums are exactly 5.
        assert_eq!(ids(&scan(&d5, Condition::C1)), vec![2, 3]);
        assert_eq!(ids(&scan(&d5, Condition::C2)), vec![1, 2, 3]);
    }

    #[test]
    fn prune_figred() {
        // Once 12 is gone the dead end 2-3 certifies on the next pass.
        let (reduced, certs) = prune_irrelevant(&figred(0.5), Condition::C3);
        assert_eq!(ids(&certs), vec![1, 2, 3]);
        assert_eq!(reduced.graph().link_count(), 6);

        let d5 = figred(0.5).with_diameter(5).unwrap();
        let (reduced, certs) = prune_irrelevant(&d5, Condition::C2);
        assert_eq!(ids(&certs), vec![1, 2, 3]);
        assert!(scan(&reduced, Condition::C2).is_empty());
    }

    #[test]
    fn prune_keeps_useful_links() {
        let inst = crate::generators::cycle(6, 0.5).unwrap();
        for cond in [Condition::C1, Condition::C2, Condition::C3] {
            let (_, certs) = prune_irrelevant(&inst, cond);
            assert!(certs.is_empty());
        }
    }
}
