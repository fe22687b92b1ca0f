//! Diameter-constrained two-terminal network reliability.
//!
//! Links of a multigraph fail independently; the reliability of an instance
//! `(G, s, t, d)` is the probability that the surviving links still join
//! `s` and `t` by a path of at most `d` links.
//!
//! The exact solver is [`factorization::ip5m`]: factoring on one link at a
//! time, with irrelevant links pruned ([`irrelevance`]) and five
//! reliability-preserving reductions applied ([`reductions`]) at every
//! node of the recursion. [`oracle`] has brute-force, inclusion-exclusion
//! and Monte Carlo reference methods; [`closed_forms`] covers `d = 1` and
//! `d = 2`; [`composition`] computes reliabilities of replacement graphs
//! from distance profiles.
//!
//! Every algorithm is generic over [`Prob`]: `f64`, exact `BigRational`,
//! or [`Poly`] for reliability polynomials in a symbol `p`.
//!
//! ```
//! use dcr::{factorization::dcr, generators::figred, Poly};
//!
//! let r = dcr(&figred(Poly::var())).unwrap();
//! assert_eq!(r.to_string(), "p^2+p^5-p^6");
//! ```

pub mod arith;
pub mod cli;
pub mod closed_forms;
pub mod composition;
pub mod error;
pub mod factorization;
pub mod generators;
pub mod graph;
pub mod instance_file;
pub mod irrelevance;
pub mod oracle;
pub mod reductions;

pub use arith::{ratio, Mode, Poly, Prob};
pub use error::{DcrError, Result};
pub use graph::{Graph, Hops, Instance, Link, LinkId, NodeId};
pub use instance_file::InstanceFile;
