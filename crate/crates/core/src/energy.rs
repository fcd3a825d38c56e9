//! Representation functions, energies, `σ_X`, and the collinear-triple count `T`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::scale_to_integers;
use crate::report::Fragment;
use crate::scalar::{Field, Scalar};
use crate::set::Set;
use crate::ExactSet;

/// Which binary operation the representation function counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phi {
    /// `a = b + x`, so `x` ranges over `A − B`.
    Add,
    /// `a = b·x`, so `x` ranges over `A/B` (pairs with `b = 0` are skipped).
    Mul,
}

/// Evaluation strategy for the collinear-triple count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Enumerate all sextuples.
    Oracle,
    /// Sum squared product multiplicities per `(c, d)`.
    Fast,
}

/// A finitely supported count function `x ↦ r(x)`; every stored count is ≥ 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepFunction<S> {
    counts: BTreeMap<S, u64>,
}

impl<S: Scalar> RepFunction<S> {
    fn from_values<I: IntoIterator<Item = S>>(values: I) -> Self {
        let mut counts = BTreeMap::new();
        for v in values {
            *counts.entry(v).or_insert(0) += 1;
        }
        RepFunction { counts }
    }

    pub fn get(&self, x: &S) -> u64 {
        self.counts.get(x).copied().unwrap_or(0)
    }

    pub fn support(&self) -> Set<S> {
        Set::from_sorted_unchecked(self.counts.keys().cloned().collect())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&S, u64)> {
        self.counts.iter().map(|(k, v)| (k, *v))
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn sum_of_squares(&self) -> u64 {
        self.counts.values().map(|c| c * c).sum()
    }

    /// Counts sorted in nonincreasing order.
    pub fn sorted_counts(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.counts.values().copied().collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }
}

/// `r_{A−B}(x)`: the number of pairs with `a − b = x`.
pub fn difference_rep<S: Scalar>(a: &Set<S>, b: &Set<S>) -> RepFunction<S> {
    RepFunction::from_values(a.iter().flat_map(|x| b.iter().map(move |y| x.sub_exact(y))))
}

/// `r_{AB}(x)`.
pub fn product_rep<S: Scalar>(a: &Set<S>, b: &Set<S>) -> RepFunction<S> {
    RepFunction::from_values(a.iter().flat_map(|x| b.iter().map(move |y| x.mul_exact(y))))
}

/// `r_{A/B}(x)`, skipping `b = 0`.
pub fn quotient_rep<S: Field>(a: &Set<S>, b: &Set<S>) -> RepFunction<S> {
    RepFunction::from_values(a.iter().flat_map(|x| b.iter().filter(|y| !y.is_zero()).map(move |y| x.div_exact(y))))
}

/// `α_{A,B}(x) = |{(a,b) : a = Φ(b,x)}|` as a function of `x`.
pub fn alpha<S: Field>(a: &Set<S>, b: &Set<S>, phi: Phi) -> RepFunction<S> {
    match phi {
        Phi::Add => difference_rep(a, b),
        Phi::Mul => quotient_rep(a, b),
    }
}

/// `|A ∩ (B + x)|`.
pub fn rep_count<S: Scalar>(a: &Set<S>, b: &Set<S>, x: &S) -> usize {
    b.iter().filter(|y| a.contains(&y.add_exact(x))).count()
}

/// `E×(A,B) = Σ_λ |{(a,b) : ab = λ}|²`.
pub fn mult_energy<S: Scalar>(a: &Set<S>, b: &Set<S>) -> u64 {
    product_hist(a.as_slice(), b.as_slice())
}

fn product_hist<S: Scalar>(a: &[S], b: &[S]) -> u64 {
    let mut counts: HashMap<S, u64> = HashMap::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            *counts.entry(x.mul_exact(y)).or_insert(0) += 1;
        }
    }
    counts.values().map(|c| c * c).sum()
}

/// `E^Φ_2(A,B) = Σ_x α²_{A,B}(x)`.
pub fn phi_energy<S: Field>(a: &Set<S>, b: &Set<S>, phi: Phi) -> u64 {
    alpha(a, b, phi).sum_of_squares()
}

/// Validates the shift set used by `σ_X` and `R_X`: `X = −X` and `0 ∉ X`.
pub fn validate_shift_set<S: Scalar>(x: &Set<S>) -> Result<()> {
    if x.contains(&S::zero()) {
        return Err(Error::InvalidShiftSet("0 ∈ X".into()));
    }
    if !x.is_symmetric() {
        return Err(Error::InvalidShiftSet("X ≠ −X".into()));
    }
    Ok(())
}

/// `σ_X(A) = Σ_{x∈X} |A ∩ (A + x)|`.
pub fn sigma_x<S: Scalar>(a: &Set<S>, x: &Set<S>) -> Result<u64> {
    validate_shift_set(x)?;
    Ok(x.iter().map(|s| rep_count(a, a, s) as u64).sum())
}

/// `T(A,B,C,D)`: sextuples with `(a−c)(b−d) = (a′−c)(b′−d)`.
pub fn collinear_triples<S: Scalar>(a: &Set<S>, b: &Set<S>, c: &Set<S>, d: &Set<S>, mode: Mode) -> u64 {
    match mode {
        Mode::Oracle => triples_oracle(a, b, c, d),
        Mode::Fast => triples_fast(a, b, c, d),
    }
}

fn triples_oracle<S: Scalar>(a: &Set<S>, b: &Set<S>, c: &Set<S>, d: &Set<S>) -> u64 {
    let mut count = 0;
    for cc in c {
        for dd in d {
            for a1 in a {
                for b1 in b {
                    let lhs = a1.sub_exact(cc).mul_exact(&b1.sub_exact(dd));
                    for a2 in a {
                        for b2 in b {
                            if a2.sub_exact(cc).mul_exact(&b2.sub_exact(dd)) == lhs {
                                count += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    count
}

fn triples_fast<S: Scalar>(a: &Set<S>, b: &Set<S>, c: &Set<S>, d: &Set<S>) -> u64 {
    let pairs: Vec<(&S, &S)> = c.iter().flat_map(|x| d.iter().map(move |y| (x, y))).collect();
    pairs
        .par_iter()
        .map(|(cc, dd)| {
            let ac: Vec<S> = a.iter().map(|x| x.sub_exact(cc)).collect();
            let bd: Vec<S> = b.iter().map(|y| y.sub_exact(dd)).collect();
            product_hist(&ac, &bd)
        })
        .sum()
}

/// `T(A) = T(A,A,A,A)` for rational sets.
///
/// `T` is invariant under a common dilation, so the sets are first scaled to
/// integers; when they fit, products are taken in `i128`.
pub fn collinear_triples_exact(a: &ExactSet, b: &ExactSet, c: &ExactSet, d: &ExactSet, mode: Mode) -> u64 {
    match scale_to_integers(&[a, b, c, d], 1 << 60) {
        Some(s) => {
            let w: Vec<Set<i128>> = s.iter().map(|x| x.map(|&v| v as i128)).collect();
            collinear_triples(&w[0], &w[1], &w[2], &w[3], mode)
        }
        None => collinear_triples(a, b, c, d, mode),
    }
}

pub fn t_energy(a: &ExactSet) -> u64 {
    collinear_triples_exact(a, a, a, a, Mode::Fast)
}

/// `T(A)` against `|A|⁴ log₂|A|`. Data only: the implied constant is unspecified.
pub fn t_ratio_report(a: &ExactSet) -> Result<Fragment> {
    if a.len() < 2 {
        return Err(Error::TooFewElements { what: "T ratio", need: 2, got: a.len() });
    }
    let t = t_energy(a);
    let n = a.len() as f64;
    let bound = n.powi(4) * n.log2();
    Ok(Fragment::ratio("T(A)", t, "|A|^4 log2|A|", bound))
}
