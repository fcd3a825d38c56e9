//! Helpers specific to the arbitrary-precision `Rational` scalar:
//! JSON set literals, exact square roots, and clearing denominators.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::set::Set;
use crate::{ExactSet, Rational};

/// JSON form of a rational: a bare integer, or `{"n": .., "d": ..}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalLiteral {
    Int(i64),
    Frac { n: i64, d: i64 },
}

impl RationalLiteral {
    pub fn to_rational(&self) -> Result<Rational> {
        match *self {
            RationalLiteral::Int(v) => Ok(Rational::from_integer(BigInt::from(v))),
            RationalLiteral::Frac { n, d } => {
                if d == 0 {
                    return Err(Error::Parse("zero denominator".into()));
                }
                Ok(Rational::new(BigInt::from(n), BigInt::from(d)))
            }
        }
    }

    pub fn from_rational(q: &Rational) -> Result<Self> {
        let too_big = || Error::Parse(format!("{q} does not fit in 64-bit JSON integers"));
        let n = q.numer().to_i64().ok_or_else(too_big)?;
        if q.is_integer() {
            Ok(RationalLiteral::Int(n))
        } else {
            let d = q.denom().to_i64().ok_or_else(too_big)?;
            Ok(RationalLiteral::Frac { n, d })
        }
    }
}

/// Serde adapter for `ExactSet` fields (`#[serde(with = "crate::rational::set_serde")]`).
pub mod set_serde {
    use super::*;

    pub fn serialize<S: Serializer>(set: &ExactSet, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let lits: Vec<RationalLiteral> =
            set.iter().map(RationalLiteral::from_rational).collect::<Result<_>>().map_err(serde::ser::Error::custom)?;
        lits.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<ExactSet, D::Error> {
        let lits = Vec::<RationalLiteral>::deserialize(de)?;
        lits.iter().map(RationalLiteral::to_rational).collect::<Result<ExactSet>>().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for single `Rational` fields.
pub mod literal_serde {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, ser: S) -> std::result::Result<S::Ok, S::Error> {
        RationalLiteral::from_rational(q).map_err(serde::ser::Error::custom)?.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<Rational, D::Error> {
        RationalLiteral::deserialize(de)?.to_rational().map_err(serde::de::Error::custom)
    }
}

/// Parses a JSON array of integers / fraction objects.
pub fn parse_set(json: &str) -> Result<ExactSet> {
    let lits: Vec<RationalLiteral> = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    lits.iter().map(RationalLiteral::to_rational).collect()
}

/// Emits a set as a JSON array, ascending.
pub fn format_set(set: &ExactSet) -> Result<String> {
    let lits: Vec<RationalLiteral> = set.iter().map(RationalLiteral::from_rational).collect::<Result<_>>()?;
    Ok(serde_json::to_string(&lits).expect("literal serialization is infallible"))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn sqrt_exact(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Exact `k`-th root of a positive rational, if it exists.
pub fn root_exact(q: &Rational, k: u32) -> Option<Rational> {
    if k == 0 || q.is_negative() {
        return None;
    }
    let n = q.numer().nth_root(k);
    let d = q.denom().nth_root(k);
    if &num_traits::pow(n.clone(), k as usize) == q.numer() && &num_traits::pow(d.clone(), k as usize) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Least common multiple of all denominators in the given sets.
pub fn common_denominator<'a, I: IntoIterator<Item = &'a ExactSet>>(sets: I) -> BigInt {
    let mut l = BigInt::one();
    for s in sets {
        for q in s {
            l = l.lcm(q.denom());
        }
    }
    l
}

/// Clears denominators with one common factor `L`, returning `L·S` for every
/// input set as 64-bit integer sets, or `None` when some scaled element has
/// absolute value `≥ bound`.
///
/// Statistics that are invariant under a common dilation (energies of
/// translates, collinear triples, ratio sets) can be computed on the scaled
/// copies with native arithmetic.
pub fn scale_to_integers(sets: &[&ExactSet], bound: i64) -> Option<Vec<Set<i64>>> {
    let l = common_denominator(sets.iter().copied());
    let bound = BigInt::from(bound);
    sets.iter()
        .map(|s| {
            s.iter()
                .map(|q| {
                    let v = q.numer() * (&l / q.denom());
                    if v.abs() >= bound {
                        None
                    } else {
                        v.to_i64()
                    }
                })
                .collect::<Option<Vec<i64>>>()
                .map(Set::from_vec)
        })
        .collect()
}

/// `log2(x)` for a positive rational, via its numerator and denominator bit lengths.
pub fn log2(q: &Rational) -> f64 {
    assert!(q.is_positive(), "log2 of a nonpositive rational");
    big_log2(q.numer()) - big_log2(q.denom())
}

fn big_log2(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        n.to_f64().expect("finite").log2()
    } else {
        let shift = bits - 64;
        (n >> shift).to_f64().expect("finite").log2() + shift as f64
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let sign = if q.is_negative() { -1.0 } else { 1.0 };
    sign * log2(&q.abs()).exp2()
}
