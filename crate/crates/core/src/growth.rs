//! Exact spot checks of sumset growth inequalities: Plünnecke–Ruzsa, its
//! large-subset refinement, and Ruzsa's triangle inequality.
//!
//! All comparisons are done on integers, with `K = |A+B|/|A|` kept as a
//! fraction by clearing the `|A|` denominators.

use num_bigint::BigUint;
use num_traits::Pow;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::set::{diffset, sum_diff_multiple, sumset, Set};

/// Outcome of one integer inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityCheck {
    pub lhs: BigUint,
    pub rhs: BigUint,
    pub holds: bool,
}

impl InequalityCheck {
    fn new(lhs: BigUint, rhs: BigUint) -> Self {
        let holds = lhs <= rhs;
        InequalityCheck { lhs, rhs, holds }
    }
}

fn big(n: usize) -> BigUint {
    BigUint::from(n)
}

/// `|nB − mB| ≤ K^{n+m}|A|` with `K = |A+B|/|A|`, multiplied through by `|A|^{n+m−1}`.
pub fn check_plunnecke<S: Scalar>(a: &Set<S>, b: &Set<S>, n: usize, m: usize) -> Result<InequalityCheck> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::TooFewElements { what: "Plünnecke check", need: 1, got: 0 });
    }
    if n + m == 0 {
        return Err(Error::InvalidParameter("n + m must be positive".into()));
    }
    let lhs_set = sum_diff_multiple(b, n, m);
    let e = (n + m) as u32;
    let lhs = big(lhs_set.len()) * big(a.len()).pow(e - 1);
    let rhs = big(sumset(a, b).len()).pow(e);
    Ok(InequalityCheck::new(lhs, rhs))
}

/// `|C||A − B| ≤ |A − C||B − C|`.
pub fn check_ruzsa_triangle<S: Scalar>(a: &Set<S>, b: &Set<S>, c: &Set<S>) -> InequalityCheck {
    let lhs = big(c.len()) * big(diffset(a, b).len());
    let rhs = big(diffset(a, c).len()) * big(diffset(b, c).len());
    InequalityCheck::new(lhs, rhs)
}

/// Searches for `X ⊆ A` with `|X| ≥ (1−δ)|A|` and `|X + kB| ≤ (K/δ)^k |X|`
/// for every `k` in `1..=max_k`, where `δ = delta_num/delta_den`.
///
/// Subsets are tried largest first, so the returned witness has maximal size.
/// Exhaustive, so `|A|` is capped at 16.
pub fn plunnecke_subset_witness<S: Scalar>(
    a: &Set<S>,
    b: &Set<S>,
    delta_num: u32,
    delta_den: u32,
    max_k: usize,
) -> Result<Option<Set<S>>> {
    if a.len() > 16 {
        return Err(Error::Oversized(format!("|A| = {} > 16 for subset search", a.len())));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::TooFewElements { what: "Plünnecke subset search", need: 1, got: 0 });
    }
    if delta_num == 0 || delta_num >= delta_den {
        return Err(Error::InvalidParameter("delta must lie in (0, 1)".into()));
    }
    let n = a.len();
    let k_num = big(sumset(a, b).len());
    // (1−δ)|A| ≤ |X|  ⟺  (den − num)·|A| ≤ den·|X|
    let min_size = ((delta_den - delta_num) as usize * n).div_ceil(delta_den as usize);
    let kb: Vec<Set<S>> = (1..=max_k).map(|k| sum_diff_multiple(b, k, 0)).collect();

    let mut masks: Vec<u32> = (0u32..(1 << n)).filter(|m| m.count_ones() as usize >= min_size.max(1)).collect();
    masks.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
    for mask in masks {
        let x: Set<S> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| a.as_slice()[i].clone()).collect();
        let ok = kb.iter().enumerate().all(|(i, kbs)| {
            let k = (i + 1) as u32;
            // |X+kB| ≤ (K/δ)^k|X|  ⟺  |X+kB|·(|A|·num)^k ≤ (|A+B|·den)^k·|X|
            let lhs = big(sumset(&x, kbs).len()) * (big(n) * BigUint::from(delta_num)).pow(k);
            let rhs = (&k_num * BigUint::from(delta_den)).pow(k) * big(x.len());
            lhs <= rhs
        });
        if ok {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ExactSet;

    fn s(v: &[i64]) -> ExactSet {
        ExactSet::from_ints(v.iter().copied())
    }

    #[test]
    fn plunnecke_on_arithmetic_progressions() {
        // A = B = {0..4}: K = 9/5, |2B − 2B| = 17 ≤ (9/5)^4 · 5
        let a = s(&[0, 1, 2, 3, 4]);
        let c = check_plunnecke(&a, &a, 2, 2).unwrap();
        assert_eq!(c.lhs, BigUint::from(17u32 * 125));
        assert_eq!(c.rhs, BigUint::from(6561u32));
        assert!(c.holds);
    }

    #[test]
    fn plunnecke_rejects_degenerate_input() {
        assert!(check_plunnecke(&s(&[]), &s(&[1]), 1, 1).is_err());
        assert!(check_plunnecke(&s(&[1]), &s(&[1]), 0, 0).is_err());
    }

    #[test]
    fn ruzsa_triangle_small() {
        let c = check_ruzsa_triangle(&s(&[0, 1]), &s(&[0, 10]), &s(&[0, 1, 2]));
        // |C||A−B| = 3·4, |A−C||B−C| = 4·6
        assert_eq!(c.lhs, BigUint::from(12u32));
        assert_eq!(c.rhs, BigUint::from(24u32));
        assert!(c.holds);
    }

    #[test]
    fn subset_witness_exists_and_is_large() {
        let a = s(&[0, 1, 2, 5, 11, 30]);
        let b = s(&[0, 1, 3]);
        let x = plunnecke_subset_witness(&a, &b, 1, 2, 3).unwrap().expect("witness");
        assert!(x.is_subset(&a));
        assert!(2 * x.len() >= a.len());
    }
}
