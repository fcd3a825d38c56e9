//! SzT-type witnesses: τ-rich sets, sampled lower bounds for `D_Φ(A)`,
//! and `d̃₊` upper-bound certificates from explicit `(f, C)` pairs.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::energy::{alpha, Phi, RepFunction};
use crate::error::{Error, Result};
use crate::ratio::ratio_set_self;
use crate::rational::{literal_serde, root_exact, set_serde, to_f64};
use crate::report::{Fragment, Side, NO_ASSERT};
use crate::set::{prodset, sumset};
use crate::{ExactSet, Rational};

/// One `(B, τ)` evaluation of the defining inequality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SzTWitness {
    pub tau: u64,
    pub count: usize,
    /// `count·τ³ / (|A||B|²)`, exact.
    #[serde(serialize_with = "literal_serde::serialize")]
    pub witness_d: Rational,
}

fn witness(a_len: usize, b_len: usize, tau: u64, count: usize) -> Rational {
    if a_len == 0 || b_len == 0 {
        return Rational::zero();
    }
    let num = BigInt::from(count) * BigInt::from(tau).pow(3);
    let den = BigInt::from(a_len) * BigInt::from(b_len).pow(2);
    Rational::new(num, den)
}

fn rich_count<S: crate::Scalar>(rep: &RepFunction<S>, tau: u64) -> usize {
    rep.iter().filter(|(_, c)| *c >= tau).count()
}

/// `|{x : α_{A,B}(x) ≥ τ}|` with its witness value for `D_Φ(A)`.
pub fn szt_rich_set(a: &ExactSet, b: &ExactSet, tau: u64, phi: Phi) -> Result<SzTWitness> {
    if tau == 0 {
        return Err(Error::InvalidParameter("tau must be at least 1".into()));
    }
    let rep = alpha(a, b, phi);
    let count = rich_count(&rep, tau);
    Ok(SzTWitness { tau, count, witness_d: witness(a.len(), b.len(), tau, count) })
}

/// Witnesses for every `τ` from 1 up to the largest value of `α_{A,B}`.
pub fn rich_profile(a: &ExactSet, b: &ExactSet, phi: Phi) -> Vec<SzTWitness> {
    let rep = alpha(a, b, phi);
    let top = rep.sorted_counts().first().copied().unwrap_or(0);
    (1..=top)
        .map(|tau| {
            let count = rich_count(&rep, tau);
            SzTWitness { tau, count, witness_d: witness(a.len(), b.len(), tau, count) }
        })
        .collect()
}

/// `Σ_x α(x) = |A||B'|` and `α(x) ≤ min(|A|, |B'|)`, where `B'` drops zero
/// when `Φ` is multiplication. The one exception is `x = 0` under
/// multiplication, where `a = 0` pairs with every `b` and only `α(0) ≤ |B'|`.
pub fn alpha_accounting(a: &ExactSet, b: &ExactSet, phi: Phi) -> bool {
    let b_eff = match phi {
        Phi::Add => b.len(),
        Phi::Mul => b.iter().filter(|v| !v.is_zero()).count(),
    };
    let rep = alpha(a, b, phi);
    let cap = a.len().min(b_eff) as u64;
    let within = |x: &Rational, c: u64| c <= cap || (phi == Phi::Mul && x.is_zero() && c <= b_eff as u64);
    rep.total() == (a.len() * b_eff) as u64 && rep.iter().all(|(x, c)| within(x, c))
}

/// Families of test sets `B` for [`sample_d_lower`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum BFamily {
    /// Uniform subsets of the integers in `[lo, hi]`.
    RandomIntegers { min_size: usize, max_size: usize, lo: i64, hi: i64 },
    /// Progressions `{s, s+d, …}` with `1 ≤ d ≤ max_step`, `|s| ≤ max_start`.
    Progressions { max_len: usize, max_step: i64, max_start: i64 },
    /// Uniform subsets of a fixed pool.
    SubsetsOf {
        #[serde(with = "set_serde")]
        pool: ExactSet,
        min_size: usize,
        max_size: usize,
    },
    /// Cycles through the listed families.
    Mixed { families: Vec<BFamily> },
}

impl BFamily {
    pub fn draw<R: Rng>(&self, rng: &mut R, index: usize) -> Result<ExactSet> {
        match self {
            BFamily::RandomIntegers { min_size, max_size, lo, hi } => {
                if lo > hi || min_size > max_size || *min_size == 0 {
                    return Err(Error::InvalidParameter("empty random-integer family".into()));
                }
                let width = (hi - lo + 1) as usize;
                if *max_size > width {
                    return Err(Error::InvalidParameter(format!("size {max_size} exceeds range width {width}")));
                }
                let size = rng.gen_range(*min_size..=*max_size);
                Ok(sample(rng, width, size)
                    .into_iter()
                    .map(|i| Rational::from_integer((lo + i as i64).into()))
                    .collect())
            }
            BFamily::Progressions { max_len, max_step, max_start } => {
                if *max_len == 0 || *max_step < 1 {
                    return Err(Error::InvalidParameter("empty progression family".into()));
                }
                let len = rng.gen_range(1..=*max_len) as i64;
                let step = rng.gen_range(1..=*max_step);
                let start = rng.gen_range(-max_start..=*max_start);
                Ok(ExactSet::from_ints((0..len).map(|i| start + i * step)))
            }
            BFamily::SubsetsOf { pool, min_size, max_size } => {
                let hi = (*max_size).min(pool.len());
                if *min_size == 0 || *min_size > hi {
                    return Err(Error::InvalidParameter("subset sizes do not fit the pool".into()));
                }
                let size = rng.gen_range(*min_size..=hi);
                let mut idx = sample(rng, pool.len(), size).into_vec();
                idx.sort_unstable();
                Ok(idx.into_iter().map(|i| pool.as_slice()[i].clone()).collect())
            }
            BFamily::Mixed { families } => {
                if families.is_empty() {
                    return Err(Error::InvalidParameter("empty mixed family".into()));
                }
                families[index % families.len()].draw(rng, index / families.len())
            }
        }
    }
}

/// Best sampled lower bound for `D_Φ(A)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DLowerReport {
    pub samples: usize,
    /// Number of `(B, τ)` pairs evaluated (every `τ` up to `max α` per `B`).
    pub pairs_checked: usize,
    pub best: SzTWitness,
    #[serde(with = "set_serde")]
    pub best_b: ExactSet,
    pub row: Fragment,
}

/// Maximizes the witness over sampled `B` and all `τ`. The result only
/// ever bounds `D_Φ(A)` from below.
pub fn sample_d_lower(a: &ExactSet, phi: Phi, family: &BFamily, samples: usize, seed: u64) -> Result<DLowerReport> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bs = (0..samples).map(|i| family.draw(&mut rng, i)).collect::<Result<Vec<_>>>()?;
    let profiles: Vec<Vec<SzTWitness>> = bs.par_iter().map(|b| rich_profile(a, b, phi)).collect();
    let pairs_checked = profiles.iter().map(Vec::len).sum();
    let mut best = SzTWitness { tau: 1, count: 0, witness_d: Rational::zero() };
    let mut best_b = ExactSet::new();
    for (b, prof) in bs.iter().zip(&profiles) {
        for w in prof {
            if w.witness_d > best.witness_d {
                best = w.clone();
                best_b = b.clone();
            }
        }
    }
    let row = Fragment::ratio("max witness D", &best.witness_d, "1", 1.0)
        .with_side(Side::LowerBound)
        .with_label(format!("lower bound for D_{}(A) from {samples} sampled B", phi_name(phi)));
    Ok(DLowerReport { samples, pairs_checked, best, best_b, row })
}

fn phi_name(phi: Phi) -> &'static str {
    match phi {
        Phi::Add => "+",
        Phi::Mul => "x",
    }
}

/// Strictly monotone maps with exactly representable images.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "snake_case")]
pub enum MonotoneMap {
    /// `x ↦ a·x + b`, `a ≠ 0`.
    Affine {
        #[serde(with = "literal_serde")]
        a: Rational,
        #[serde(with = "literal_serde")]
        b: Rational,
    },
    /// `x ↦ x^{num/den}` on `x ≥ 0`; the image must be rational.
    Power { num: u32, den: u32 },
    /// `x ↦ log₂ x` on `x > 0`.
    Log2,
    /// `x ↦ log₂(x − 1)` on `x > 1`.
    Log2Shifted,
    /// Inverse of the strictly increasing table `start + i ↦ values[i]`.
    InverseTable { start: i64, values: Vec<i64> },
}

/// A shift set `C`, either rational or the base-2 logarithms of a positive set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShiftSet {
    Rational {
        #[serde(with = "set_serde")]
        set: ExactSet,
    },
    Log2Of {
        #[serde(with = "set_serde")]
        set: ExactSet,
    },
}

impl ShiftSet {
    pub fn rational(set: ExactSet) -> Self {
        ShiftSet::Rational { set }
    }

    pub fn log2_of(set: ExactSet) -> Self {
        ShiftSet::Log2Of { set }
    }

    pub fn len(&self) -> usize {
        match self {
            ShiftSet::Rational { set } | ShiftSet::Log2Of { set } => set.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Image of a single point under a catalog map.
enum Image {
    Exact(Rational),
    /// `log₂ v` for positive rational `v`.
    Log(Rational),
}

impl MonotoneMap {
    fn validate(&self) -> Result<()> {
        match self {
            MonotoneMap::Affine { a, .. } if a.is_zero() => Err(Error::ZeroDilation),
            MonotoneMap::Power { num, den } if *num == 0 || *den == 0 => {
                Err(Error::InvalidParameter("power exponent must be a positive fraction".into()))
            }
            MonotoneMap::InverseTable { values, .. } if values.windows(2).any(|w| w[0] >= w[1]) => {
                Err(Error::InvalidParameter("table values must be strictly increasing".into()))
            }
            _ => Ok(()),
        }
    }

    fn image(&self, x: &Rational) -> Result<Image> {
        let outside = || Error::OutsideDomain(format!("{x}"));
        match self {
            MonotoneMap::Affine { a, b } => Ok(Image::Exact(a * x + b)),
            MonotoneMap::Power { num, den } => {
                if x.is_negative() {
                    return Err(outside());
                }
                let p = num_traits::pow(x.clone(), *num as usize);
                root_exact(&p, *den).map(Image::Exact).ok_or_else(outside)
            }
            MonotoneMap::Log2 => {
                if x.is_positive() {
                    Ok(Image::Log(x.clone()))
                } else {
                    Err(outside())
                }
            }
            MonotoneMap::Log2Shifted => {
                let y = x - Rational::one();
                if y.is_positive() {
                    Ok(Image::Log(y))
                } else {
                    Err(outside())
                }
            }
            MonotoneMap::InverseTable { start, values } => {
                if !x.is_integer() {
                    return Err(outside());
                }
                let v = x.to_integer().to_i64().ok_or_else(outside)?;
                let i = values.binary_search(&v).map_err(|_| outside())?;
                Ok(Image::Exact(Rational::from_integer((start + i as i64).into())))
            }
        }
    }

    /// Elements of `A` inside the map's domain.
    pub fn restrict(&self, a: &ExactSet) -> ExactSet {
        a.iter().filter(|x| self.image(x).is_ok()).cloned().collect()
    }
}

/// Canonical key of `log₂ v + c`: two such reals are equal exactly when
/// `{c}` agrees and `v·2^⌊c⌋` agrees, since `2^q` is irrational for
/// non-integer rational `q`.
fn log_key(v: &Rational, c: &Rational) -> (Rational, Rational) {
    let fl = c.floor();
    let e = fl.to_integer();
    let shift = e.to_i64().expect("shift exponent fits in i64");
    let pow = Rational::from_integer(BigInt::one() << shift.unsigned_abs());
    let scaled = if shift >= 0 { v * pow } else { v / pow };
    (c - fl, scaled)
}

/// `|f(A) + C|²/(|A||C|)` for one explicit pair; an upper bound for `d̃₊(A)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DTildeCertificate {
    pub a_size: usize,
    pub c_size: usize,
    pub sumset_size: usize,
    #[serde(serialize_with = "literal_serde::serialize")]
    pub value: Rational,
    pub row: Fragment,
}

pub fn d_tilde_plus(a: &ExactSet, f: &MonotoneMap, c: &ShiftSet) -> Result<DTildeCertificate> {
    f.validate()?;
    if c.is_empty() {
        return Err(Error::TooFewElements { what: "shift set C", need: 1, got: 0 });
    }
    if a.is_empty() {
        return Err(Error::TooFewElements { what: "A", need: 1, got: 0 });
    }
    let images = a.iter().map(|x| f.image(x)).collect::<Result<Vec<_>>>()?;
    let sumset_size = match (images.first(), c) {
        (Some(Image::Exact(_)), ShiftSet::Rational { set: cs }) => {
            let fa: ExactSet = images
                .into_iter()
                .map(|im| match im {
                    Image::Exact(v) => v,
                    Image::Log(_) => unreachable!("catalog maps have a single image kind"),
                })
                .collect();
            if fa.len() != a.len() {
                return Err(Error::NotInjective);
            }
            sumset(&fa, cs).len()
        }
        (Some(Image::Log(_)), shifts) => {
            let vs: Vec<Rational> = images
                .into_iter()
                .map(|im| match im {
                    Image::Log(v) => v,
                    Image::Exact(_) => unreachable!("catalog maps have a single image kind"),
                })
                .collect();
            match shifts {
                // log₂ v + log₂ c = log₂(vc)
                ShiftSet::Log2Of { set: cs } => {
                    if cs.iter().any(|x| !x.is_positive()) {
                        return Err(Error::InvalidShiftSet("log shifts need positive arguments".into()));
                    }
                    prodset(&vs.into_iter().collect(), cs).len()
                }
                ShiftSet::Rational { set: cs } => {
                    let keys: BTreeSet<_> = vs.iter().flat_map(|v| cs.iter().map(move |c| log_key(v, c))).collect();
                    keys.len()
                }
            }
        }
        _ => return Err(Error::DomainMismatch),
    };
    let (n, m) = (a.len(), c.len());
    let value = Rational::new(BigInt::from(sumset_size).pow(2), BigInt::from(n) * BigInt::from(m));
    let row = Fragment::ratio("|f(A)+C|^2/(|A||C|)", &value, "|A|", n as f64)
        .with_side(Side::UpperBound)
        .with_label("upper bound for d~+(A) from one (f, C)");
    Ok(DTildeCertificate { a_size: n, c_size: m, sumset_size, value, row })
}

/// The convex-set certificate: `A = {1², …, n²}`, `f = √`, `C = {1, …, n}`
/// give `|f(A) + C| = 2n − 1`.
pub fn convex_certificate(n: usize) -> Result<DTildeCertificate> {
    let a = ExactSet::from_ints((1..=n as i64).map(|i| i * i));
    let c = ExactSet::from_ints(1..=n as i64);
    d_tilde_plus(&a, &MonotoneMap::Power { num: 1, den: 2 }, &ShiftSet::rational(c))
}

/// `R = R[A]`, `|RR|`, the bound `|RR|²/|R|²` for `D×(R)`, and optionally
/// `|RB|·|RR|/(|R|²|B|^{1/2})` for a caller-supplied `B`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DTimesReport {
    pub r_size: usize,
    pub rr_size: usize,
    #[serde(serialize_with = "literal_serde::serialize")]
    pub bound_value: Rational,
    pub rows: Vec<Fragment>,
}

pub fn d_times_upper_for_ratio_set(a: &ExactSet, b: Option<&ExactSet>) -> Result<DTimesReport> {
    let r = ratio_set_self(a)?.values;
    let rr = prodset(&r, &r).len();
    let bound_value = Rational::new(BigInt::from(rr).pow(2), BigInt::from(r.len()).pow(2));
    let mut rows = vec![
        Fragment::ratio("|RR|^2/|R|^2", &bound_value, "1", 1.0)
            .with_label(format!("{NO_ASSERT}; upper bound for D_x(R)")),
        Fragment::ratio("|RR|", rr, "|R|^(5/4)", (r.len() as f64).powf(1.25)),
    ];
    if let Some(b) = b {
        if !b.is_empty() {
            let rb = prodset(&r, b).len() as f64;
            let lower = (r.len() as f64).powi(2) * (b.len() as f64).sqrt() / rr as f64;
            rows.push(Fragment::ratio("|RB|", rb, "|R|^2 |B|^(1/2) / |RR|", lower));
        }
    }
    Ok(DTimesReport { r_size: r.len(), rr_size: rr, bound_value, rows })
}

/// Support size and `E^Φ₂` against the two consequences of an SzT-type
/// bound with constant `d`. Data only.
pub fn phi_cor_report(a: &ExactSet, b: &ExactSet, phi: Phi, d: &Rational) -> Result<Vec<Fragment>> {
    if !d.is_positive() {
        return Err(Error::InvalidParameter("D must be positive".into()));
    }
    let rep = alpha(a, b, phi);
    let (n, m, df) = (a.len() as f64, b.len() as f64, to_f64(d));
    Ok(vec![
        Fragment::ratio("|{x : alpha(x) > 0}|", rep.support().len(), "|A||B|^(1/2) D^(-1/2)", n * m.sqrt() / df.sqrt()),
        Fragment::ratio("E^Phi_2(A,B)", rep.sum_of_squares(), "D^(1/2) |A||B|^(3/2)", df.sqrt() * n * m.powf(1.5)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use crate::set::diffset;

    fn s(v: &[i64]) -> ExactSet {
        ExactSet::from_ints(v.iter().copied())
    }

    #[test]
    fn rich_set_examples() {
        let a = s(&[1, 2, 3]);
        let w = szt_rich_set(&a, &a, 1, Phi::Add).unwrap();
        assert_eq!(w.count, 5);
        assert_eq!(w.witness_d, frac(5, 27));
        assert_eq!(szt_rich_set(&a, &a, 4, Phi::Add).unwrap().count, 0);
        assert!(szt_rich_set(&a, &a, 0, Phi::Add).is_err());
        // quotients of {1,2,4} with ≥ 2 representations: 1/2, 1, 2
        let g = s(&[1, 2, 4]);
        let w = szt_rich_set(&g, &g, 2, Phi::Mul).unwrap();
        assert_eq!(w.count, 3);
        assert_eq!(w.witness_d, frac(3 * 8, 27));
    }

    #[test]
    fn profile_is_monotone() {
        let a = s(&[0, 1, 3, 4, 9, 10]);
        let b = s(&[0, 1, 2, 3, 7]);
        for phi in [Phi::Add, Phi::Mul] {
            let p = rich_profile(&a, &b, phi);
            assert!(p.windows(2).all(|w| w[0].count >= w[1].count));
            assert!(alpha_accounting(&a, &b, phi));
        }
        let p = rich_profile(&a, &b, Phi::Add);
        assert_eq!(p[0].count, diffset(&a, &b).len());
    }

    #[test]
    fn sampled_lower_bounds() {
        let convex = s(&[1, 4, 9, 16, 25]);
        let family = BFamily::Mixed {
            families: vec![
                BFamily::RandomIntegers { min_size: 1, max_size: 8, lo: -10, hi: 30 },
                BFamily::Progressions { max_len: 8, max_step: 5, max_start: 10 },
                BFamily::SubsetsOf { pool: convex.clone(), min_size: 1, max_size: 5 },
            ],
        };
        let r = sample_d_lower(&convex, Phi::Add, &family, 60, 3).unwrap();
        assert!(r.best.witness_d < int(4));
        assert_eq!(r.row.certifies, Some(Side::LowerBound));
        assert_eq!(r, sample_d_lower(&convex, Phi::Add, &family, 60, 3).unwrap());
        let single = sample_d_lower(&s(&[7]), Phi::Add, &family, 30, 1).unwrap();
        assert!(single.best.witness_d <= int(1));
        assert!(sample_d_lower(&convex, Phi::Add, &family, 0, 1).is_err());
    }

    #[test]
    fn d_tilde_examples() {
        let c = convex_certificate(4).unwrap();
        assert_eq!(c.sumset_size, 7);
        assert_eq!(c.value, frac(49, 16));
        assert_eq!(c.row.certifies, Some(Side::UpperBound));
        let a = s(&[3, 5, 11]);
        let id = MonotoneMap::Affine { a: int(1), b: int(0) };
        let single = d_tilde_plus(&a, &id, &ShiftSet::rational(s(&[0]))).unwrap();
        assert_eq!(single.value, int(3));
    }

    #[test]
    fn d_tilde_rejections() {
        let sq = MonotoneMap::Power { num: 1, den: 2 };
        assert!(matches!(d_tilde_plus(&s(&[2]), &sq, &ShiftSet::rational(s(&[0]))), Err(Error::OutsideDomain(_))));
        assert!(d_tilde_plus(&s(&[4]), &sq, &ShiftSet::rational(s(&[]))).is_err());
        assert_eq!(d_tilde_plus(&s(&[4]), &sq, &ShiftSet::log2_of(s(&[1]))).unwrap_err(), Error::DomainMismatch);
        let table = MonotoneMap::InverseTable { start: 0, values: vec![0, 1, 4, 9] };
        assert!(d_tilde_plus(&s(&[2]), &table, &ShiftSet::rational(s(&[0]))).is_err());
        let flat = MonotoneMap::Affine { a: int(0), b: int(1) };
        assert_eq!(d_tilde_plus(&s(&[1, 2]), &flat, &ShiftSet::rational(s(&[0]))).unwrap_err(), Error::ZeroDilation);
        // x² on {−1, 1} is not monotone; odd roots of negatives are outside the domain too
        assert!(
            d_tilde_plus(&s(&[-1, 1]), &MonotoneMap::Power { num: 2, den: 1 }, &ShiftSet::rational(s(&[0]))).is_err()
        );
    }

    #[test]
    fn inverse_table_matches_square_root() {
        let a = s(&[1, 4, 9, 16]);
        let c = ShiftSet::rational(s(&[1, 2, 3, 4]));
        let table = MonotoneMap::InverseTable { start: 1, values: vec![1, 4, 9, 16] };
        assert_eq!(d_tilde_plus(&a, &table, &c).unwrap().value, frac(49, 16));
    }

    #[test]
    fn log_maps() {
        let a = s(&[1, 2, 4, 8]);
        // log₂A = {0,1,2,3}; + {0,1} has 5 elements either way
        let v1 = d_tilde_plus(&a, &MonotoneMap::Log2, &ShiftSet::log2_of(s(&[1, 2]))).unwrap();
        let v2 = d_tilde_plus(&a, &MonotoneMap::Log2, &ShiftSet::rational(s(&[0, 1]))).unwrap();
        assert_eq!(v1.sumset_size, 5);
        assert_eq!(v2.sumset_size, 5);
        // a half-integer shift never collides with an integer one
        let v3 =
            d_tilde_plus(&a, &MonotoneMap::Log2, &ShiftSet::rational(ExactSet::from_vec(vec![int(0), frac(1, 2)])))
                .unwrap();
        assert_eq!(v3.sumset_size, 8);
        let shifted = d_tilde_plus(&s(&[2, 3, 5]), &MonotoneMap::Log2Shifted, &ShiftSet::log2_of(s(&[1, 2]))).unwrap();
        assert_eq!(shifted.sumset_size, 4);
        assert!(d_tilde_plus(&s(&[1, 2]), &MonotoneMap::Log2Shifted, &ShiftSet::log2_of(s(&[1]))).is_err());
    }

    #[test]
    fn ratio_set_log_certificate() {
        let r = ratio_set_self(&s(&[0, 1, 2])).unwrap().values;
        let f = MonotoneMap::Log2Shifted;
        let dom = f.restrict(&r);
        assert_eq!(dom, s(&[2]));
        let c = ShiftSet::log2_of(r.iter().filter(|x| x.is_positive()).cloned().collect());
        let cert = d_tilde_plus(&dom, &f, &c).unwrap();
        assert_eq!(cert.sumset_size, 3);
    }

    #[test]
    fn d_times_examples() {
        let r = d_times_upper_for_ratio_set(&s(&[0, 1]), None).unwrap();
        assert_eq!((r.r_size, r.rr_size), (2, 2));
        assert_eq!(r.bound_value, int(1));
        let r = d_times_upper_for_ratio_set(&s(&[0, 1, 2]), Some(&s(&[1, 2, 3]))).unwrap();
        assert_eq!(r.r_size, 5);
        // R = {−1, 0, 1/2, 1, 2}; RR = {−2, −1, −1/2, 0, 1/4, 1/2, 1, 2, 4}
        assert_eq!(r.rr_size, 9);
        assert_eq!(r.bound_value, frac(81, 25));
        assert_eq!(r.rows.len(), 3);
    }

    #[test]
    fn phi_cor_rows() {
        let a = s(&[1, 2, 4, 8]);
        let rows = phi_cor_report(&a, &a, Phi::Mul, &int(2)).unwrap();
        assert_eq!(rows[0].value.as_f64(), 7.0);
        assert_eq!(rows[1].value.as_f64(), 44.0);
        assert!(phi_cor_report(&a, &a, Phi::Mul, &int(0)).is_err());
    }
}
