//! Canonical finite sets and the four elementwise set operations.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// A finite set stored as a strictly increasing vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Set<S> {
    elems: Vec<S>,
}

impl<S: Scalar> Set<S> {
    pub fn new() -> Self {
        Set { elems: Vec::new() }
    }

    pub fn from_vec(mut elems: Vec<S>) -> Self {
        elems.sort_unstable();
        elems.dedup();
        Set { elems }
    }

    /// Wraps a vector the caller guarantees is strictly increasing.
    pub(crate) fn from_sorted_unchecked(elems: Vec<S>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        Set { elems }
    }

    pub fn singleton(x: S) -> Self {
        Set { elems: vec![x] }
    }

    pub fn from_ints<I: IntoIterator<Item = i64>>(it: I) -> Self {
        it.into_iter().map(S::from_int).collect()
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, S> {
        self.elems.iter()
    }

    pub fn as_slice(&self) -> &[S] {
        &self.elems
    }

    pub fn into_vec(self) -> Vec<S> {
        self.elems
    }

    pub fn contains(&self, x: &S) -> bool {
        self.elems.binary_search(x).is_ok()
    }

    pub fn min(&self) -> Option<&S> {
        self.elems.first()
    }

    pub fn max(&self) -> Option<&S> {
        self.elems.last()
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.elems, &other.elems);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i].clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Set::from_sorted_unchecked(out)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        Set::from_sorted_unchecked(small.iter().filter(|x| large.contains(x)).cloned().collect())
    }

    /// Elements of `self` not in `other`.
    pub fn minus(&self, other: &Self) -> Self {
        Set::from_sorted_unchecked(self.iter().filter(|x| !other.contains(x)).cloned().collect())
    }

    pub fn without(&self, x: &S) -> Self {
        Set::from_sorted_unchecked(self.iter().filter(|y| *y != x).cloned().collect())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.len() <= other.len() && self.iter().all(|x| other.contains(x))
    }

    /// Applies `f` elementwise and canonicalizes the image.
    pub fn map<T: Scalar, F: FnMut(&S) -> T>(&self, f: F) -> Set<T> {
        Set::from_vec(self.iter().map(f).collect())
    }

    pub fn neg(&self) -> Self {
        Set::from_sorted_unchecked(self.elems.iter().rev().map(|x| -x.clone()).collect())
    }

    pub fn translate(&self, x: &S) -> Self {
        Set::from_sorted_unchecked(self.iter().map(|a| a.add_exact(x)).collect())
    }

    /// `true` when `x ∈ self ⟺ −x ∈ self`.
    pub fn is_symmetric(&self) -> bool {
        self.iter().zip(self.elems.iter().rev()).all(|(a, b)| *a == -b.clone())
    }
}

impl<S: Scalar> FromIterator<S> for Set<S> {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Set::from_vec(iter.into_iter().collect())
    }
}

impl<'a, S> IntoIterator for &'a Set<S> {
    type Item = &'a S;
    type IntoIter = std::slice::Iter<'a, S>;

    fn into_iter(self) -> Self::IntoIter {
        self.elems.iter()
    }
}

impl<S: fmt::Debug> fmt::Debug for Set<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.elems.iter()).finish()
    }
}

impl<S: fmt::Display> fmt::Display for Set<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

fn combine<S: Scalar, F: Fn(&S, &S) -> Option<S>>(a: &Set<S>, b: &Set<S>, op: F) -> Set<S> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            if let Some(z) = op(x, y) {
                out.push(z);
            }
        }
    }
    Set::from_vec(out)
}

/// `A + B`.
pub fn sumset<S: Scalar>(a: &Set<S>, b: &Set<S>) -> Set<S> {
    combine(a, b, |x, y| Some(x.add_exact(y)))
}

/// `A − B`.
pub fn diffset<S: Scalar>(a: &Set<S>, b: &Set<S>) -> Set<S> {
    combine(a, b, |x, y| Some(x.sub_exact(y)))
}

/// `AB`.
pub fn prodset<S: Scalar>(a: &Set<S>, b: &Set<S>) -> Set<S> {
    combine(a, b, |x, y| Some(x.mul_exact(y)))
}

/// `A/B`; zero elements of `B` are skipped.
pub fn quotset<S: Field>(a: &Set<S>, b: &Set<S>) -> Set<S> {
    combine(a, b, |x, y| if y.is_zero() { None } else { Some(x.div_exact(y)) })
}

/// `λA + x`.
pub fn affine<S: Scalar>(a: &Set<S>, lambda: &S, x: &S) -> Result<Set<S>> {
    if lambda.is_zero() {
        return Err(Error::ZeroDilation);
    }
    Ok(a.map(|v| v.mul_exact(lambda).add_exact(x)))
}

/// The iterated sum-difference set `nB − mB`.
///
/// `n = m = 0` gives `{0}`.
pub fn sum_diff_multiple<S: Scalar>(b: &Set<S>, n: usize, m: usize) -> Set<S> {
    let mut acc = Set::singleton(S::zero());
    for _ in 0..n {
        acc = sumset(&acc, b);
    }
    for _ in 0..m {
        acc = diffset(&acc, b);
    }
    acc
}
