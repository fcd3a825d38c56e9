//! Ratio sets `R[A,B]`, `R[A]`, `R_X[A]`, their structural identities, and
//! the dyadic popularity partition of `A − A`.

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::energy::{collinear_triples, difference_rep, sigma_x, validate_shift_set, Mode};
use crate::error::{Error, Result};
use crate::report::Fragment;
use crate::scalar::{Field, Scalar};
use crate::set::{diffset, prodset, quotset, Set};

/// How a ratio set was produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RatioSource<S> {
    /// `R[A,B]`; `same` when `A = B`.
    Pair { same: bool },
    /// `R_X[A]` with the given shift set.
    Restricted { shifts: Set<S> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioSet<S> {
    pub values: Set<S>,
    pub source: RatioSource<S>,
}

impl<S: Scalar> RatioSet<S> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `R[A,B] = {(a−b)/(b₁−b) : a ∈ A, b ≠ b₁ ∈ B}`.
pub fn ratio_set<S: Field>(a: &Set<S>, b: &Set<S>) -> Result<RatioSet<S>> {
    if b.len() < 2 {
        return Err(Error::TooFewElements { what: "R[A,B] denominator set", need: 2, got: b.len() });
    }
    let values = enumerate_ratios(a, b, |_| true);
    Ok(RatioSet { values, source: RatioSource::Pair { same: a == b } })
}

/// `R[A] = R[A,A]`.
pub fn ratio_set_self<S: Field>(a: &Set<S>) -> Result<RatioSet<S>> {
    ratio_set(a, a)
}

/// `R_X[A] = {(a₂−a)/(a₁−a) : a₁ − a ∈ X}` for `X ⊆ (A−A)∖{0}`, `X = −X`.
pub fn ratio_set_restricted<S: Field>(a: &Set<S>, x: &Set<S>) -> Result<RatioSet<S>> {
    validate_shift_set(x)?;
    let d = diffset(a, a);
    if !x.is_subset(&d) {
        return Err(Error::InvalidShiftSet("X ⊄ A − A".into()));
    }
    let values = enumerate_ratios(a, a, |den| x.contains(den));
    Ok(RatioSet { values, source: RatioSource::Restricted { shifts: x.clone() } })
}

/// Parallel over the base point `b`; the merged set is canonical, so the
/// result does not depend on scheduling.
fn enumerate_ratios<S: Field, F: Fn(&S) -> bool + Sync>(a: &Set<S>, b: &Set<S>, admit: F) -> Set<S> {
    let parts: Vec<Vec<S>> = b
        .as_slice()
        .par_iter()
        .map(|base| {
            let mut out = Vec::new();
            for b1 in b {
                if b1 == base {
                    continue;
                }
                let den = b1.sub_exact(base);
                if !admit(&den) {
                    continue;
                }
                let inv = den.recip_exact();
                out.extend(a.iter().map(|x| x.sub_exact(base).mul_exact(&inv)));
            }
            out
        })
        .collect();
    Set::from_vec(parts.into_iter().flatten().collect())
}

/// Result of an exact set-identity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityVerdict<S> {
    pub pass: bool,
    /// Number of elements checked.
    pub checked: usize,
    pub counterexample: Option<S>,
}

fn image_verdict<S: Scalar, F: Fn(&S) -> S>(r: &Set<S>, f: F) -> IdentityVerdict<S> {
    // f is an involution on R exactly when R maps into itself; cardinality is
    // then preserved by injectivity.
    let counterexample = r.iter().find(|x| !r.contains(&f(x))).cloned();
    IdentityVerdict { pass: counterexample.is_none(), checked: r.len(), counterexample }
}

/// `R = 1 − R`.
pub fn check_reflection_identity<S: Scalar>(r: &RatioSet<S>) -> IdentityVerdict<S> {
    image_verdict(&r.values, |x| S::one().sub_exact(x))
}

/// `{1/r : r ∈ R∖{0}} ∪ {0} = R`.
pub fn check_inverse_identity<S: Field>(r: &RatioSet<S>) -> IdentityVerdict<S> {
    image_verdict(&r.values, |x| if x.is_zero() { S::zero() } else { x.recip_exact() })
}

/// `|R| = |−R ∩ (R − 1)|`.
pub fn check_negation_trick<S: Field>(a: &Set<S>) -> Result<IdentityVerdict<S>> {
    let r = ratio_set_self(a)?.values;
    let minus_one = -S::one();
    let neg = r.neg();
    let shifted = r.translate(&minus_one);
    let lhs = neg.intersection(&shifted);
    let pass = lhs.len() == r.len();
    let counterexample = neg.iter().find(|x| !shifted.contains(x)).cloned();
    Ok(IdentityVerdict { pass, checked: r.len(), counterexample })
}

/// Both halves of `R[A] ⊆ D/D ⊆ R[A]·R[A]`.
///
/// The second inclusion fails exactly at `−1` when `−1 ∉ R·R` (for instance
/// `A = {0, 1}`, where `R = {0, 1}`); every other quotient of differences is
/// a product of two ratios. `pass` asserts `R ⊆ D/D` and
/// `D/D ∖ {−1} ⊆ R·R`; `literal` records whether the unqualified inclusion
/// holds as well.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SandwichVerdict<S> {
    pub pass: bool,
    pub r_in_quotients: bool,
    pub quotients_in_products: bool,
    pub minus_one_in_products: bool,
    pub literal: bool,
    pub r_size: usize,
    pub quotient_size: usize,
    pub counterexample: Option<S>,
}

pub fn check_sandwich<S: Field>(a: &Set<S>) -> Result<SandwichVerdict<S>> {
    let r = ratio_set_self(a)?.values;
    let elems = a.as_slice();
    let n = elems.len();

    // One index representation (i, j) of each difference a_i − a_j.
    let mut diff_rep: HashMap<S, (usize, usize)> = HashMap::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            diff_rep.entry(elems[i].sub_exact(&elems[j])).or_insert((i, j));
        }
    }
    let diffs: Vec<(&S, &(usize, usize))> = diff_rep.iter().filter(|(d, _)| !d.is_zero()).collect();
    // One representation q = (a_i − a_j)/(a_k − a_l) of each nonzero quotient.
    let mut quot_rep: HashMap<S, [usize; 4]> = HashMap::with_capacity(diffs.len() * diffs.len());
    for (num, &(i, j)) in &diffs {
        for (den, &(k, l)) in &diffs {
            quot_rep.entry(num.div_exact(den)).or_insert([i, j, k, l]);
        }
    }
    let quotient_size = quot_rep.len() + usize::from(n >= 2);

    let zero = S::zero();
    let mut counterexample = r.iter().find(|x| !x.is_zero() && !quot_rep.contains_key(x)).cloned();
    let r_in_quotients = counterexample.is_none();

    let minus_one = -S::one();
    let minus_one_in_products = in_product_set(&minus_one, &r);

    // For q = (a_i − a_j)/(a_k − a_l) with j ≠ k,
    //   q = [(a_i − a_j)/(a_k − a_j)] · [(a_j − a_k)/(a_l − a_k)],
    // both factors ratios based at a_j and a_k. When j = k, swap to the
    // representation (a_j − a_i)/(a_l − a_k), which needs i ≠ l; both
    // coincidences together force q = −1. The factors are looked up in the
    // enumerated R, so each witness is an independent check.
    let ratio =
        |x: usize, y: usize, base: usize| elems[x].sub_exact(&elems[base]).div_exact(&elems[y].sub_exact(&elems[base]));
    let members: HashSet<&S> = r.iter().collect();
    let mut failed: Option<&S> = None;
    for (q, &[i, j, k, l]) in &quot_rep {
        if *q == minus_one || failed.is_some_and(|f| f <= q) {
            continue;
        }
        let (f1, f2) = if j != k { (ratio(i, k, j), ratio(j, l, k)) } else { (ratio(j, l, i), ratio(i, k, l)) };
        if !(members.contains(&f1) && members.contains(&f2) && f1.mul_exact(&f2) == *q) {
            failed = Some(q);
        }
    }
    let quotients_in_products = r.contains(&zero) && failed.is_none();
    if let Some(q) = failed {
        counterexample.get_or_insert_with(|| q.clone());
    }
    let pass = r_in_quotients && quotients_in_products;
    Ok(SandwichVerdict {
        pass,
        r_in_quotients,
        quotients_in_products,
        minus_one_in_products,
        literal: pass && minus_one_in_products,
        r_size: r.len(),
        quotient_size,
        counterexample,
    })
}

/// `q ∈ R·R`, scanning `R` for a factor.
fn in_product_set<S: Field>(q: &S, r: &Set<S>) -> bool {
    if q.is_zero() {
        return r.contains(&S::zero());
    }
    r.iter().any(|f| !f.is_zero() && r.contains(&q.div_exact(f)))
}

/// One dyadic level `Δ₀·2^{j−1} < |A ∩ (A+x)| ≤ Δ₀·2^j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DyadicBucket<S> {
    pub j: u32,
    #[serde(skip)]
    pub members: Set<S>,
    pub size: usize,
    /// `Σ_{x in bucket} |A ∩ (A+x)|`.
    pub sigma: u64,
}

/// The popular differences `D′ = {x ∈ D : |A∩(A+x)| > Δ₀}`, `Δ₀ = |A|²/(2|D|)`,
/// split into dyadic levels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DyadicPartition<S> {
    /// `Δ₀` as the fraction `numer/denom`.
    pub delta0_numer: u64,
    pub delta0_denom: u64,
    #[serde(skip)]
    pub popular: Set<S>,
    pub sigma_popular: u64,
    pub buckets: Vec<DyadicBucket<S>>,
    /// Index into `buckets` of the level carrying the largest `σ`.
    pub dominant: usize,
}

pub fn dyadic_partition<S: Scalar>(a: &Set<S>) -> Result<DyadicPartition<S>> {
    if a.len() < 2 {
        return Err(Error::TooFewElements { what: "dyadic partition", need: 2, got: a.len() });
    }
    let n = a.len() as u64;
    let pop = difference_rep(a, a);
    let dsize = pop.support().len() as u64;
    // Δ₀ = n²/(2|D|); compare pop·2|D| against n²·2^j.
    let (num, den) = (n * n, 2 * dsize);
    let levels = (u64::BITS - (2 * dsize - 1).leading_zeros()) + 1; // ⌈log₂(2|D|)⌉ + 1
    let mut buckets: Vec<DyadicBucket<S>> =
        (1..=levels).map(|j| DyadicBucket { j, members: Set::new(), size: 0, sigma: 0 }).collect();
    let mut members: Vec<Vec<S>> = vec![Vec::new(); levels as usize];
    let mut popular = Vec::new();
    let mut sigma_popular = 0;
    for (x, c) in pop.iter() {
        let scaled = BigUint::from(c) * den;
        if scaled <= BigUint::from(num) {
            continue;
        }
        popular.push(x.clone());
        sigma_popular += c;
        let j =
            (1..=levels).find(|&j| scaled <= BigUint::from(num) << j).expect("levels cover the maximal popularity |A|");
        let b = &mut buckets[(j - 1) as usize];
        b.size += 1;
        b.sigma += c;
        members[(j - 1) as usize].push(x.clone());
    }
    for (b, m) in buckets.iter_mut().zip(members) {
        b.members = Set::from_sorted_unchecked(m);
    }
    let dominant = buckets
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.sigma.cmp(&y.1.sigma).then(y.0.cmp(&x.0)))
        .map(|(i, _)| i)
        .unwrap_or(0);
    Ok(DyadicPartition {
        delta0_numer: num,
        delta0_denom: den,
        popular: Set::from_sorted_unchecked(popular),
        sigma_popular,
        buckets,
        dominant,
    })
}

/// The Cauchy–Schwarz chain `|A|²σ_X(A)² ≤ |R_X[A]|·Σ_λ S_λ² ≤ |R_X[A]|·T(A)`,
/// where `S_λ = Σ_{x∈X} |A ∩ (A+x) ∩ (A+λx)|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaChain {
    pub sigma: u64,
    pub r_x_size: usize,
    pub lambda_square_sum: u64,
    pub t: u64,
    pub lhs: BigUint,
    pub middle: BigUint,
    pub rhs: BigUint,
    pub holds: bool,
}

pub fn sigma_t_chain<S: Field>(a: &Set<S>, x: &Set<S>) -> Result<SigmaChain> {
    let r_x = ratio_set_restricted(a, x)?.values;
    let sigma = sigma_x(a, x)?;
    let mut s_lambda: HashMap<S, u64> = HashMap::new();
    for shift in x {
        let inv = shift.recip_exact();
        let base: Vec<&S> = a.iter().filter(|v| a.contains(&v.sub_exact(shift))).collect();
        for v in &base {
            for w in a {
                // v ∈ A∩(A+x) and v ∈ A + λx with λ = (v − w)/x
                let lambda = v.sub_exact(w).mul_exact(&inv);
                *s_lambda.entry(lambda).or_insert(0) += 1;
            }
        }
    }
    debug_assert!(s_lambda.keys().all(|l| r_x.contains(l)));
    let lambda_square_sum: u64 = s_lambda.values().map(|c| c * c).sum();
    let t = collinear_triples(a, a, a, a, Mode::Fast);
    let n = BigUint::from(a.len());
    let lhs = &n * &n * BigUint::from(sigma) * BigUint::from(sigma);
    let middle = BigUint::from(r_x.len()) * BigUint::from(lambda_square_sum);
    let rhs = BigUint::from(r_x.len()) * BigUint::from(t);
    let holds = lhs <= middle && middle <= rhs;
    Ok(SigmaChain { sigma, r_x_size: r_x.len(), lambda_square_sum, t, lhs, middle, rhs, holds })
}

/// `|D|, |DD|, |D/D|, |R[A]|` and the two ratio rows. Data only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DdChain {
    pub a_size: usize,
    pub d_size: usize,
    pub dd_size: usize,
    pub dq_size: usize,
    pub r_size: usize,
    pub rows: Vec<Fragment>,
}

pub fn dd_chain_report<S: Field>(a: &Set<S>) -> Result<DdChain> {
    if a.len() < 2 {
        return Err(Error::TooFewElements { what: "DD chain", need: 2, got: a.len() });
    }
    let d = diffset(a, a);
    let dd = prodset(&d, &d).len();
    let dq = quotset(&d, &d).len();
    let r = ratio_set_self(a)?.len();
    let n = a.len() as f64;
    let dl = d.len() as f64;
    let rows = vec![
        Fragment::ratio("|DD|", dd, "|D|^(5/6) |R[A]|^(1/4)", dl.powf(5.0 / 6.0) * (r as f64).powf(0.25)),
        Fragment::ratio("|D/D|", dq, "|D|^(5/6) |R[A]|^(1/4)", dl.powf(5.0 / 6.0) * (r as f64).powf(0.25)),
        Fragment::ratio("|R[A]|", r, "|A|^2 / log2|A|", n * n / n.log2()),
    ];
    Ok(DdChain { a_size: a.len(), d_size: d.len(), dd_size: dd, dq_size: dq, r_size: r, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use crate::{ExactSet, Rational};

    fn s(v: &[i64]) -> ExactSet {
        ExactSet::from_ints(v.iter().copied())
    }

    #[test]
    fn ratio_set_examples() {
        let r = ratio_set_self(&s(&[0, 1, 2])).unwrap();
        assert_eq!(r.values, ExactSet::from_vec(vec![int(-1), int(0), frac(1, 2), int(1), int(2)]));
        assert_eq!(ratio_set_self(&s(&[0, 1])).unwrap().values, s(&[0, 1]));
        let a = s(&[0, 3, 4, 9]);
        let b = s(&[1, 2, 6]);
        let seven = int(7);
        let shifted = ratio_set(&a.translate(&seven), &b.translate(&seven)).unwrap();
        assert_eq!(shifted.values, ratio_set(&a, &b).unwrap().values);
    }

    #[test]
    fn ratio_set_needs_two_denominators() {
        assert!(matches!(ratio_set(&s(&[1, 2]), &s(&[1])), Err(Error::TooFewElements { .. })));
    }

    #[test]
    fn restricted_examples() {
        let a = s(&[0, 1, 2]);
        let r = ratio_set_restricted(&a, &s(&[-1, 1])).unwrap();
        assert_eq!(r.values, s(&[-1, 0, 1, 2]));
        let full = diffset(&a, &a).without(&int(0));
        assert_eq!(ratio_set_restricted(&a, &full).unwrap().values, ratio_set_self(&a).unwrap().values);
        assert_eq!(ratio_set_restricted(&s(&[0, 1]), &s(&[-1, 1])).unwrap().values, s(&[0, 1]));
    }

    #[test]
    fn restricted_rejects_bad_shift_sets() {
        let a = s(&[0, 1, 2]);
        assert!(ratio_set_restricted(&a, &s(&[-1, 0, 1])).is_err());
        assert!(ratio_set_restricted(&a, &s(&[1])).is_err());
        assert!(ratio_set_restricted(&a, &s(&[-5, 5])).is_err());
    }

    #[test]
    fn identities_on_small_sets() {
        for a in [s(&[0, 1, 2]), s(&[0, 1]), s(&[2, 4, 8, 16]), s(&[0, 1, 3])] {
            let r = ratio_set_self(&a).unwrap();
            assert!(check_reflection_identity(&r).pass);
            assert!(check_inverse_identity(&r).pass);
            assert!(check_negation_trick(&a).unwrap().pass);
            assert!(check_sandwich(&a).unwrap().pass, "{a:?}");
        }
        assert_eq!(check_negation_trick(&s(&[0, 1, 2])).unwrap().checked, 5);
    }

    #[test]
    fn reflection_detects_a_broken_set() {
        let fake = RatioSet { values: s(&[0, 1, 3]), source: RatioSource::Pair { same: true } };
        let v = check_reflection_identity(&fake);
        assert!(!v.pass);
        assert_eq!(v.counterexample, Some(int(3)));
    }

    #[test]
    fn sandwich_literal_form_fails_without_minus_one() {
        let v = check_sandwich(&s(&[0, 1])).unwrap();
        assert!(v.pass && !v.literal && !v.minus_one_in_products);
        let v = check_sandwich(&s(&[0, 1, 3])).unwrap();
        assert!(v.pass && !v.literal);
        let v = check_sandwich(&s(&[0, 1, 2])).unwrap();
        assert!(v.pass && v.literal);
    }

    #[test]
    fn sandwich_matches_materialized_products() {
        for a in [s(&[0, 1, 3]), s(&[0, 2, 3, 7]), s(&[1, 2, 4, 8, 16])] {
            let r = ratio_set_self(&a).unwrap().values;
            let rr = prodset(&r, &r);
            let d = diffset(&a, &a);
            let dq = quotset(&d, &d).without(&int(-1));
            assert!(dq.is_subset(&rr));
            let v = check_sandwich(&a).unwrap();
            assert_eq!(v.literal, rr.contains(&int(-1)));
        }
    }

    #[test]
    fn dyadic_partition_of_pair() {
        let p = dyadic_partition(&s(&[0, 1])).unwrap();
        assert_eq!((p.delta0_numer, p.delta0_denom), (4, 6));
        assert_eq!(p.popular, s(&[-1, 0, 1]));
        assert_eq!(p.sigma_popular, 4);
        let total: usize = p.buckets.iter().map(|b| b.size).sum();
        assert_eq!(total, 3);
    }

    #[test]
    fn dyadic_partition_of_progression() {
        let a = ExactSet::from_ints(0..10);
        let p = dyadic_partition(&a).unwrap();
        // Δ₀ = 100/38; popularity 10 − |x| > 100/38 ⟺ |x| ≤ 7
        assert_eq!(p.popular, ExactSet::from_ints(-7..=7));
        let delta0 = Rational::new(100.into(), 38.into());
        for b in &p.buckets {
            let lo = &delta0 * Rational::from_integer((1i64 << (b.j - 1)).into());
            for x in &b.members {
                let pop = int(10) - num_traits::Signed::abs(x);
                assert!(pop > lo && pop <= &lo * int(2));
            }
        }
        let union = p.buckets.iter().fold(ExactSet::new(), |acc, b| acc.union(&b.members));
        assert_eq!(union, p.popular);
        assert!(2 * p.sigma_popular >= 100);
        assert_eq!(p.buckets[p.dominant].sigma, p.buckets.iter().map(|b| b.sigma).max().unwrap());
    }

    #[test]
    fn sigma_chain_on_small_sets() {
        let a = s(&[0, 1, 2, 4, 7]);
        let x = diffset(&a, &a).without(&int(0));
        let c = sigma_t_chain(&a, &x).unwrap();
        assert_eq!(c.sigma, 20);
        assert!(c.holds);
        let c = sigma_t_chain(&a, &s(&[-1, 1])).unwrap();
        assert!(c.holds);
    }

    #[test]
    fn dd_chain_for_geometric_triple() {
        let c = dd_chain_report(&s(&[2, 4, 8])).unwrap();
        assert_eq!((c.d_size, c.dd_size, c.dq_size), (7, 13, 15));
        assert_eq!(c.r_size, ratio_set_self(&s(&[2, 4, 8])).unwrap().len());
        assert!(c.rows.iter().all(|f| f.ratio.is_finite() && f.ratio > 0.0));
    }
}
