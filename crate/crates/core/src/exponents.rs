//! Extended Lebesgue exponents `q ∈ [1, ∞]` and the exponent conditions
//! built from the functional `R(q) = 2 - 1/q0 - 1/q1 - 1/q2`.
//!
//! Exponents are stored through their reciprocal as an exact rational, so
//! `q = ∞` is the ordinary value `0` and every boundary comparison
//! (`R(q) = 0`, `R(q) = 1/2`, ...) is decided without rounding.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = Rational64;

/// Parses `"3/2"`, `"-1"`, `"0.25"` into an exact rational.
pub fn parse_rational(input: &str) -> Result<Rational> {
    let text = input.trim();
    let err = |reason: &str| Error::Parse {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    if text.is_empty() {
        return Err(err("empty string"));
    }
    if let Some((num, den)) = text.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| err("bad numerator"))?;
        let den: i64 = den.trim().parse().map_err(|_| err("bad denominator"))?;
        if den == 0 {
            return Err(err("zero denominator"));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((int, frac)) = text.split_once('.') {
        let negative = int.trim_start().starts_with('-');
        let int_part: i64 = if int.is_empty() || int == "-" || int == "+" {
            0
        } else {
            int.parse().map_err(|_| err("bad integer part"))?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 12 {
            return Err(err("bad fractional part"));
        }
        let den = 10i64.pow(frac.len() as u32);
        let frac_val: i64 = frac.parse().map_err(|_| err("bad fractional part"))?;
        let magnitude = Rational::from_integer(int_part.abs()) + Rational::new(frac_val, den);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let value: i64 = text.parse().map_err(|_| err("not a rational"))?;
    Ok(Rational::from_integer(value))
}

/// Formats a rational as `"p/q"` or `"p"`.
pub fn format_rational(value: Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Formats the exponent whose reciprocal is `recip` (which may lie outside
/// `[0, 1]`, e.g. for `r = 1/R(q)`): `"inf"` when the reciprocal is zero.
pub fn format_recip(recip: Rational) -> String {
    if recip.is_zero() {
        "inf".to_string()
    } else {
        format_rational(recip.recip())
    }
}

pub fn to_f64(value: Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// A Lebesgue exponent `q ∈ [1, ∞]`, held as `1/q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponent {
    recip: Rational,
}

impl Exponent {
    pub const INFINITY: Exponent = Exponent {
        recip: Rational::new_raw(0, 1),
    };
    pub const ONE: Exponent = Exponent {
        recip: Rational::new_raw(1, 1),
    };

    pub fn from_recip(recip: Rational) -> Result<Self> {
        if recip.is_negative() || recip > Rational::one() {
            return Err(Error::InvalidExponent(format!(
                "reciprocal {} outside [0, 1]",
                format_rational(recip)
            )));
        }
        Ok(Exponent { recip })
    }

    /// `q` itself; must satisfy `q >= 1`.
    pub fn new(q: Rational) -> Result<Self> {
        if q < Rational::one() {
            return Err(Error::InvalidExponent(format!(
                "q = {} is below 1",
                format_rational(q)
            )));
        }
        Ok(Exponent { recip: q.recip() })
    }

    pub fn from_int(q: i64) -> Result<Self> {
        Self::new(Rational::from_integer(q))
    }

    pub fn recip(self) -> Rational {
        self.recip
    }

    pub fn is_infinite(self) -> bool {
        self.recip.is_zero()
    }

    /// Numerical value of `q` (`f64::INFINITY` for `q = ∞`).
    pub fn value(self) -> f64 {
        if self.is_infinite() {
            f64::INFINITY
        } else {
            to_f64(self.recip.recip())
        }
    }

    pub fn recip_f64(self) -> f64 {
        to_f64(self.recip)
    }

    /// Hölder conjugate `q'` with `1/q + 1/q' = 1`.
    pub fn dual(self) -> Exponent {
        Exponent {
            recip: Rational::one() - self.recip,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_recip(self.recip))
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t == "∞" {
            return Ok(Exponent::INFINITY);
        }
        Exponent::new(parse_rational(t)?)
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// `(q0, q1, q2)`: `q0` belongs to the target space, `q1`, `q2` to the factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExponentTriple {
    pub q0: Exponent,
    pub q1: Exponent,
    pub q2: Exponent,
}

impl ExponentTriple {
    pub fn new(q0: Exponent, q1: Exponent, q2: Exponent) -> Self {
        ExponentTriple { q0, q1, q2 }
    }

    pub fn from_recips(r0: Rational, r1: Rational, r2: Rational) -> Result<Self> {
        Ok(ExponentTriple {
            q0: Exponent::from_recip(r0)?,
            q1: Exponent::from_recip(r1)?,
            q2: Exponent::from_recip(r2)?,
        })
    }

    /// Parses three exponent strings such as `["2", "inf", "4/3"]`.
    pub fn parse<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        if items.len() != 3 {
            return Err(Error::Parse {
                input: items.iter().map(|s| s.as_ref()).collect::<Vec<_>>().join(","),
                reason: "expected three exponents".into(),
            });
        }
        Ok(ExponentTriple {
            q0: items[0].as_ref().parse()?,
            q1: items[1].as_ref().parse()?,
            q2: items[2].as_ref().parse()?,
        })
    }

    pub fn as_array(&self) -> [Exponent; 3] {
        [self.q0, self.q1, self.q2]
    }

    pub fn recips(&self) -> [Rational; 3] {
        [self.q0.recip, self.q1.recip, self.q2.recip]
    }

    /// Moves entry `which` into the `q0` slot (swapping it with `q0`).
    pub fn with_leading(&self, which: usize) -> Result<Self> {
        let mut entries = self.as_array();
        if which > 2 {
            return Err(Error::InvalidIndex {
                index: which,
                range: "0..=2",
            });
        }
        entries.swap(0, which);
        Ok(ExponentTriple::new(entries[0], entries[1], entries[2]))
    }
}

impl fmt::Display for ExponentTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.q0, self.q1, self.q2)
    }
}

fn half() -> Rational {
    Rational::new(1, 2)
}

/// `R(q) = 2 - 1/q0 - 1/q1 - 1/q2`.
pub fn r_functional(q: &ExponentTriple) -> Rational {
    Rational::from_integer(2) - q.q0.recip - q.q1.recip - q.q2.recip
}

/// `H(q)`: the smallest reciprocal when every `q_j <= 2`, the largest when
/// every `q_j >= 2`, and `1/2` otherwise.
pub fn h_functional(q: &ExponentTriple) -> Rational {
    let r = q.recips();
    let min = *r.iter().min().unwrap();
    let max = *r.iter().max().unwrap();
    if min >= half() {
        min
    } else if max <= half() {
        max
    } else {
        half()
    }
}

/// `0 <= R(q) <= 1/2`.
pub fn cond_base(q: &ExponentTriple) -> bool {
    let r = r_functional(q);
    !r.is_negative() && r <= half()
}

/// `0 <= R(q) <= max(1/2, min(1/q0, 1/q1, 1/q2))`.
pub fn cond_prime(q: &ExponentTriple) -> bool {
    let r = r_functional(q);
    let min = *q.recips().iter().min().unwrap();
    !r.is_negative() && r <= half().max(min)
}

/// `0 <= R(q) <= H(q)`.
pub fn cond_h(q: &ExponentTriple) -> bool {
    let r = r_functional(q);
    !r.is_negative() && r <= h_functional(q)
}

/// `R(q) <= 1/q0` and `R(q) <= max(1/2, min(1/q1, 1/q2))`.
pub fn cond_dprime(q: &ExponentTriple) -> bool {
    let r = r_functional(q);
    r <= q.q0.recip && r <= half().max(q.q1.recip.min(q.q2.recip))
}

/// [`cond_dprime`] with entry `which` playing the role of `q0`.
pub fn cond_dprime_dualized(q: &ExponentTriple, which: usize) -> Result<bool> {
    Ok(cond_dprime(&q.with_leading(which)?))
}

/// Every triple with reciprocals in `{0, step, 2 step, ..., 1}`, in
/// lexicographic order of the reciprocals.
pub fn reciprocal_lattice(step: Rational) -> Result<Vec<ExponentTriple>> {
    if !step.is_positive() || step > Rational::one() || !(Rational::one() / step).is_integer() {
        return Err(Error::InvalidParameter(format!(
            "lattice step {} must be 1/k for a positive integer k",
            format_rational(step)
        )));
    }
    let k = (Rational::one() / step).to_integer();
    let values: Vec<Rational> = (0..=k).map(|i| step * i).collect();
    let mut out = Vec::with_capacity(values.len().pow(3));
    for &a in &values {
        for &b in &values {
            for &c in &values {
                out.push(ExponentTriple::from_recips(a, b, c)?);
            }
        }
    }
    Ok(out)
}
