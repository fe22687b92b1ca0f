//! Probability values under the three arithmetic modes the engine supports.
//!
//! Every algorithm in the crate is generic over [`Prob`]. The engine only
//! needs `a + b`, `a - b`, `a * b` and the constants 0 and 1, so the same
//! code computes a binary64 estimate, an exact rational, or the reliability
//! polynomial in a formal symbol `p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Arithmetic mode tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Float,
    Rational,
    Poly,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Float => "float",
            Mode::Rational => "rational",
            Mode::Poly => "poly",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A probability expression. Implemented by `f64`, [`BigRational`] and [`Poly`].
pub trait Prob:
    Clone + fmt::Debug + PartialEq + Zero + One + Sub<Output = Self> + Send + Sync + 'static
{
    const MODE: Mode;

    /// Embeds an exact rational constant.
    fn from_ratio(r: &BigRational) -> Self;

    /// The formal symbol `p`, available only in polynomial mode.
    fn symbol() -> Option<Self>;

    /// `1 - self`.
    fn complement(&self) -> Self {
        Self::one() - self.clone()
    }

    /// Value representation used in result documents.
    fn to_json(&self) -> Value;

    /// Whitespace-free token accepted by the instance file parser.
    fn to_token(&self) -> String;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(&BigRational::from_integer(BigInt::from(n)))
    }
}

impl Prob for f64 {
    const MODE: Mode = Mode::Float;

    fn from_ratio(r: &BigRational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn symbol() -> Option<Self> {
        None
    }

    fn to_json(&self) -> Value {
        Value::from(*self)
    }

    fn to_token(&self) -> String {
        format!("{self}")
    }
}

impl Prob for BigRational {
    const MODE: Mode = Mode::Rational;

    fn from_ratio(r: &BigRational) -> Self {
        r.clone()
    }

    fn symbol() -> Option<Self> {
        None
    }

    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }

    fn to_token(&self) -> String {
        self.to_string()
    }
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Univariate polynomial with exact rational coefficients, lowest degree first.
///
/// The coefficient vector is kept trimmed, so the zero polynomial has no
/// coefficients and structural equality is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| ratio(c, 1)).collect())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::new(vec![c])
    }

    /// The formal symbol `p`.
    pub fn var() -> Self {
        Poly::from_ints(&[0, 1])
    }

    /// `p^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    /// Horner evaluation at an exact point.
    pub fn eval(&self, at: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * at + c)
    }

    pub fn eval_f64(&self, at: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * at + c.to_f64().unwrap_or(f64::NAN))
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        let (mut long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self.coeffs, rhs.coeffs)
        } else {
            (rhs.coeffs, self.coeffs)
        };
        for (a, b) in long.iter_mut().zip(short) {
            *a += b;
        }
        Poly::new(long)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self + (-rhs)
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Poly::default();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly::default()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::from_ints(&[1])
    }
    fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }
}

/// Renders as a sum of terms in `p`, lowest degree first, with no spaces:
/// `p^2+p^5-p^6`, `1-p`, `3/4*p`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if c.is_negative() {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    f.write_str("p")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Prob for Poly {
    const MODE: Mode = Mode::Poly;

    fn from_ratio(r: &BigRational) -> Self {
        Poly::constant(r.clone())
    }

    fn symbol() -> Option<Self> {
        Some(Poly::var())
    }

    fn to_json(&self) -> Value {
        if self.coeffs.is_empty() {
            return Value::Array(vec![Value::String("0".into())]);
        }
        Value::Array(
            self.coeffs
                .iter()
                .map(|c| Value::String(c.to_string()))
                .collect(),
        )
    }

    fn to_token(&self) -> String {
        self.to_string()
    }
}
