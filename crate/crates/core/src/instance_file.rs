//! Plain-text instance format.
//!
//! ```text
//! # comment
//! n m d
//! s t
//! u v p        (m lines)
//! ```
//!
//! A reliability token is `0`, `1`, a decimal (`0.25`), a rational (`3/4`),
//! the symbol `p`, or a polynomial in `p` written without spaces
//! (`p^2+p^5-p^6`, `1/2*p`). When any token mentions `p`, every numeric
//! token must be `0` or `1`. Text after `#` is ignored.

use std::fmt::Write as _;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};
use sha2::{Digest, Sha256};

use crate::arith::{Mode, Poly, Prob};
use crate::error::{DcrError, Result};
use crate::graph::{Graph, Instance, NodeId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reliability {
    Exact(BigRational),
    Symbolic(Poly),
}

impl Reliability {
    pub fn is_symbolic(&self) -> bool {
        matches!(self, Reliability::Symbolic(_))
    }

    pub fn to_poly(&self) -> Poly {
        match self {
            Reliability::Exact(r) => Poly::constant(r.clone()),
            Reliability::Symbolic(p) => p.clone(),
        }
    }

    fn token(&self) -> String {
        match self {
            Reliability::Exact(r) => r.to_string(),
            Reliability::Symbolic(p) => p.to_string(),
        }
    }

    fn to_prob<P: Prob>(&self) -> Result<P> {
        match self {
            Reliability::Exact(r) => Ok(P::from_ratio(r)),
            Reliability::Symbolic(poly) => {
                let Some(sym) = P::symbol() else {
                    return Err(DcrError::invalid(format!(
                        "symbolic reliability {poly} needs poly mode"
                    )));
                };
                // Horner evaluation in P with the formal symbol.
                Ok(poly
                    .coeffs()
                    .iter()
                    .rev()
                    .fold(P::zero(), |acc, c| acc * sym.clone() + P::from_ratio(c)))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FileLink {
    pub u: u32,
    pub v: u32,
    pub reliability: Reliability,
}

/// A parsed instance file, kept independent of any arithmetic mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFile {
    pub nodes: u32,
    pub diameter: usize,
    pub source: u32,
    pub target: u32,
    pub links: Vec<FileLink>,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> DcrError {
    DcrError::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Splits a line into `(column, token)` pairs, columns 1-based.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_uint<T: FromStr>(line: usize, (col, tok): (usize, &str), what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| parse_err(line, col, format!("expected {what}, found `{tok}`")))
}

/// `12`, `3/4` or `0.25` as an exact rational.
fn parse_number(tok: &str) -> Option<BigRational> {
    let digits = |s: &str| s.chars().all(|c| c.is_ascii_digit());
    if let Some((num, den)) = tok.split_once('/') {
        if num.is_empty() || den.is_empty() || !digits(num) || !digits(den) {
            return None;
        }
        let den = BigInt::from_str(den).ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(BigInt::from_str(num).ok()?, den));
    }
    if let Some((int, frac)) = tok.split_once('.') {
        if int.is_empty() && frac.is_empty() || !digits(int) || !digits(frac) {
            return None;
        }
        let whole = format!("{int}{frac}");
        let num = BigInt::from_str(&whole).ok()?;
        let den = num::pow(BigInt::from(10), frac.len());
        return Some(BigRational::new(num, den));
    }
    if !tok.chars().all(|c| c.is_ascii_digit()) || tok.is_empty() {
        return None;
    }
    BigInt::from_str(tok).ok().map(BigRational::from_integer)
}

/// One term of a polynomial: `c`, `c*p`, `c*p^k`, `p`, `p^k`.
fn parse_term(term: &str) -> Option<Poly> {
    let (coeff, power) = match term.split_once('*') {
        Some((c, rest)) => (parse_number(c)?, parse_power(rest)?),
        None => match parse_power(term) {
            Some(k) => (BigRational::one(), k),
            None => return parse_number(term).map(Poly::constant),
        },
    };
    Some(Poly::monomial(coeff, power))
}

fn parse_power(s: &str) -> Option<usize> {
    match s.strip_prefix('p')? {
        "" => Some(1),
        rest => rest.strip_prefix('^')?.parse().ok(),
    }
}

fn parse_poly(tok: &str) -> Option<Poly> {
    let mut total = Poly::zero();
    let mut rest = tok;
    let mut sign = 1;
    if let Some(r) = rest.strip_prefix('-') {
        sign = -1;
        rest = r;
    }
    loop {
        let end = rest.find(['+', '-']).unwrap_or(rest.len());
        let term = parse_term(&rest[..end])?;
        total = if sign > 0 { total + term } else { total - term };
        if end == rest.len() {
            return Some(total);
        }
        sign = if rest.as_bytes()[end] == b'+' { 1 } else { -1 };
        rest = &rest[end + 1..];
    }
}

/// Parses a single reliability token.
pub fn parse_reliability(tok: &str) -> Option<Reliability> {
    if let Some(r) = parse_number(tok) {
        return Some(Reliability::Exact(r));
    }
    if !tok.contains('p') {
        return None;
    }
    let poly = parse_poly(tok)?;
    Some(match poly.as_constant() {
        Some(c) => Reliability::Exact(c),
        None => Reliability::Symbolic(poly),
    })
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
            .filter(|(_, l)| !l.trim().is_empty());
        let eof = |what: &str| parse_err(text.lines().count().max(1), 1, format!("missing {what}"));

        let (ln, header) = lines.next().ok_or_else(|| eof("header line `n m d`"))?;
        let toks = tokens(header);
        let [n, m, d] = toks[..] else {
            return Err(parse_err(ln, 1, "header must be `n m d`"));
        };
        let nodes: u32 = parse_uint(ln, n, "node count")?;
        let m: usize = parse_uint(ln, m, "link count")?;
        let diameter: usize = parse_uint(ln, d, "diameter")?;
        if diameter == 0 {
            return Err(parse_err(ln, d.0, "diameter must be at least 1"));
        }

        let (ln, term_line) = lines.next().ok_or_else(|| eof("terminal line `s t`"))?;
        let toks = tokens(term_line);
        let [s, t] = toks[..] else {
            return Err(parse_err(ln, 1, "terminal line must be `s t`"));
        };
        let node = |ln, tok: (usize, &str)| -> Result<u32> {
            let v: u32 = parse_uint(ln, tok, "node id")?;
            if v >= nodes {
                return Err(parse_err(ln, tok.0, format!("node {v} out of range 0..{nodes}")));
            }
            Ok(v)
        };
        let source = node(ln, s)?;
        let target = node(ln, t)?;
        if source == target {
            return Err(parse_err(ln, t.0, "terminals must differ"));
        }

        let mut links = Vec::with_capacity(m);
        let mut symbolic_at = None;
        let mut fractional_at = None;
        for k in 0..m {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| eof(&format!("link line {} of {m}", k + 1)))?;
            let toks = tokens(line);
            let [a, b, p] = toks[..] else {
                return Err(parse_err(ln, 1, "link line must be `u v p`"));
            };
            let u = node(ln, a)?;
            let v = node(ln, b)?;
            if u == v {
                return Err(parse_err(ln, b.0, "self-loops are not allowed"));
            }
            let rel = parse_reliability(p.1)
                .ok_or_else(|| parse_err(ln, p.0, format!("bad reliability `{}`", p.1)))?;
            match &rel {
                Reliability::Exact(r) => {
                    if r.is_negative() || r > &BigRational::one() {
                        return Err(parse_err(ln, p.0, format!("reliability {r} outside [0, 1]")));
                    }
                    if !r.is_zero() && !r.is_one() {
                        fractional_at.get_or_insert((ln, p.0));
                    }
                }
                Reliability::Symbolic(_) => {
                    symbolic_at.get_or_insert((ln, p.0));
                }
            }
            links.push(FileLink {
                u,
                v,
                reliability: rel,
            });
        }
        if let (Some(_), Some((ln, col))) = (symbolic_at, fractional_at) {
            return Err(parse_err(
                ln,
                col,
                "numeric reliabilities other than 0 and 1 cannot be mixed with the symbol p",
            ));
        }
        if let Some((ln, _)) = lines.next() {
            return Err(parse_err(ln, 1, format!("more than {m} link lines")));
        }
        Ok(InstanceFile {
            nodes,
            diameter,
            source,
            target,
            links,
        })
    }

    pub fn is_symbolic(&self) -> bool {
        self.links.iter().any(|l| l.reliability.is_symbolic())
    }

    /// Poly for symbolic files, exact rationals otherwise.
    pub fn natural_mode(&self) -> Mode {
        if self.is_symbolic() {
            Mode::Poly
        } else {
            Mode::Rational
        }
    }

    /// Node `i` of the file becomes `NodeId(i)`, link line `k` becomes
    /// `LinkId(k)`.
    pub fn to_instance<P: Prob>(&self) -> Result<Instance<P>> {
        let mut g = Graph::with_nodes(self.nodes as usize);
        for l in &self.links {
            g.add_link(NodeId(l.u), NodeId(l.v), l.reliability.to_prob()?)?;
        }
        Instance::new(g, NodeId(self.source), NodeId(self.target), self.diameter)
    }

    /// Canonical form of an instance: live nodes renumbered densely in id
    /// order, links in id order.
    pub fn from_instance<P: Prob>(inst: &Instance<P>) -> Result<Self> {
        let g = inst.graph();
        let mut index = vec![u32::MAX; g.node_bound()];
        for (i, v) in g.nodes().enumerate() {
            index[v.index()] = i as u32;
        }
        let links = g
            .links()
            .map(|l| {
                let tok = l.reliability.to_token();
                let reliability = parse_reliability(&tok).ok_or_else(|| {
                    DcrError::Internal(format!("unprintable reliability `{tok}`"))
                })?;
                Ok(FileLink {
                    u: index[l.a.index()],
                    v: index[l.b.index()],
                    reliability,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(InstanceFile {
            nodes: g.node_count() as u32,
            diameter: inst.diameter(),
            source: index[inst.source().index()],
            target: index[inst.target().index()],
            links,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {} {}", self.nodes, self.links.len(), self.diameter).unwrap();
        writeln!(out, "{} {}", self.source, self.target).unwrap();
        for l in &self.links {
            writeln!(out, "{} {} {}", l.u, l.v, l.reliability.token()).unwrap();
        }
        out
    }

    /// SHA-256 of the canonical text, hex encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }
}

/// Canonical text for an instance.
pub fn write_instance<P: Prob>(inst: &Instance<P>) -> Result<String> {
    InstanceFile::from_instance(inst).map(|f| f.to_text())
}
