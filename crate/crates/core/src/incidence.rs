//! Exact point–curve incidences for lines `sx − ty = α` and hyperbolas
//! `(p − x)(y − d) = α`, plus pairwise intersection checks.

use std::collections::{BTreeSet, HashMap};

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{literal_serde, sqrt_exact};
use crate::report::Fragment;
use crate::set::prodset;
use crate::{ExactSet, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    #[serde(with = "literal_serde")]
    pub x: Rational,
    #[serde(with = "literal_serde")]
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }
}

/// Raw coefficients, tagged by family in JSON.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CurveKind {
    /// `s·x − t·y = α`
    Line {
        #[serde(with = "literal_serde")]
        s: Rational,
        #[serde(with = "literal_serde")]
        t: Rational,
        #[serde(with = "literal_serde")]
        alpha: Rational,
    },
    /// `(p − x)(y − d) = α`
    Hyperbola {
        #[serde(with = "literal_serde")]
        p: Rational,
        #[serde(with = "literal_serde")]
        d: Rational,
        #[serde(with = "literal_serde")]
        alpha: Rational,
    },
}

/// A validated curve: lines have `(s, t) ≠ (0, 0)`, hyperbolas have `α ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CurveKind", into = "CurveKind")]
pub struct Curve(CurveKind);

impl TryFrom<CurveKind> for Curve {
    type Error = Error;

    fn try_from(kind: CurveKind) -> Result<Self> {
        match &kind {
            CurveKind::Line { s, t, .. } if s.is_zero() && t.is_zero() => {
                Err(Error::DegenerateCurve("line with s = t = 0"))
            }
            CurveKind::Hyperbola { alpha, .. } if alpha.is_zero() => {
                Err(Error::DegenerateCurve("hyperbola with alpha = 0"))
            }
            _ => Ok(Curve(kind)),
        }
    }
}

impl From<Curve> for CurveKind {
    fn from(c: Curve) -> Self {
        c.0
    }
}

impl Curve {
    pub fn line(s: Rational, t: Rational, alpha: Rational) -> Result<Self> {
        CurveKind::Line { s, t, alpha }.try_into()
    }

    pub fn hyperbola(p: Rational, d: Rational, alpha: Rational) -> Result<Self> {
        CurveKind::Hyperbola { p, d, alpha }.try_into()
    }

    pub fn kind(&self) -> &CurveKind {
        &self.0
    }

    pub fn is_line(&self) -> bool {
        matches!(self.0, CurveKind::Line { .. })
    }

    pub fn contains(&self, pt: &Point) -> bool {
        match &self.0 {
            CurveKind::Line { s, t, alpha } => &(s * &pt.x - t * &pt.y) == alpha,
            CurveKind::Hyperbola { p, d, alpha } => &((p - &pt.x) * (&pt.y - d)) == alpha,
        }
    }

    /// Lines scaled so the first nonzero of `(s, t)` is 1; hyperbolas unchanged.
    pub fn normalized(&self) -> CurveKind {
        match &self.0 {
            CurveKind::Line { s, t, alpha } => {
                let lead = if s.is_zero() { t } else { s };
                CurveKind::Line { s: s / lead, t: t / lead, alpha: alpha / lead }
            }
            other => other.clone(),
        }
    }

    /// Rewrites a line as `a·x + b·y = c`.
    fn linear_form(&self) -> Option<(Rational, Rational, Rational)> {
        match &self.0 {
            CurveKind::Line { s, t, alpha } => Some((s.clone(), -t, alpha.clone())),
            _ => None,
        }
    }
}

/// Counting strategy for [`count_incidences`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IncidenceMode {
    Naive,
    Hashed,
}

/// `I(P, L) = |{(p, l) ∈ P × L : p ∈ l}|`, counting repeated inputs with multiplicity.
pub fn count_incidences(points: &[Point], curves: &[Curve], mode: IncidenceMode) -> u64 {
    match mode {
        IncidenceMode::Naive => {
            curves.par_iter().map(|c| points.iter().filter(|pt| c.contains(pt)).count() as u64).sum()
        }
        IncidenceMode::Hashed => {
            // one group per direction (lines) or centre (hyperbolas), keyed by α
            type Groups = HashMap<(bool, Rational, Rational), HashMap<Rational, u64>>;
            let mut groups: Groups = HashMap::new();
            for c in curves {
                let (key, alpha) = match c.normalized() {
                    CurveKind::Line { s, t, alpha } => ((true, s, t), alpha),
                    CurveKind::Hyperbola { p, d, alpha } => ((false, p, d), alpha),
                };
                *groups.entry(key).or_default().entry(alpha).or_insert(0) += 1;
            }
            let groups: Vec<_> = groups.into_iter().collect();
            groups
                .par_iter()
                .map(|((is_line, u, v), by_alpha)| {
                    points
                        .iter()
                        .map(|pt| {
                            let val = if *is_line { u * &pt.x - v * &pt.y } else { (u - &pt.x) * (&pt.y - v) };
                            by_alpha.get(&val).copied().unwrap_or(0)
                        })
                        .sum::<u64>()
                })
                .sum()
        }
    }
}

/// `{0, …, k−1}²`.
pub fn grid(k: i64) -> Vec<Point> {
    (0..k)
        .flat_map(|x| {
            (0..k).map(move |y| Point::new(Rational::from_integer(x.into()), Rational::from_integer(y.into())))
        })
        .collect()
}

/// Every distinct line through at least two of the points.
pub fn lines_through_pairs(points: &[Point]) -> Vec<Curve> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (i, p1) in points.iter().enumerate() {
        for p2 in &points[i + 1..] {
            if p1 == p2 {
                continue;
            }
            let s = &p2.y - &p1.y;
            let t = &p2.x - &p1.x;
            let alpha = &s * &p1.x - &t * &p1.y;
            let line = Curve::line(s, t, alpha).expect("distinct points span a line");
            if let CurveKind::Line { s, t, alpha } = line.normalized() {
                if seen.insert((s, t, alpha)) {
                    out.push(line);
                }
            }
        }
    }
    out
}

/// How two curves meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Intersection {
    /// Number of common real points.
    Points(usize),
    /// The two descriptors define the same curve.
    Identical,
}

/// Real solutions of `qx² + lx + c = 0` (not all coefficients zero).
fn real_roots(q: &Rational, l: &Rational, c: &Rational) -> usize {
    if q.is_zero() {
        return usize::from(!l.is_zero());
    }
    let disc = l * l - Rational::from_integer(4.into()) * q * c;
    if disc.is_positive() {
        2
    } else if disc.is_zero() {
        1
    } else {
        0
    }
}

/// Meets `a·x + b·y = c` with `(p − x)(y − d) = α`, `α ≠ 0`.
fn line_meets_hyperbola(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    p: &Rational,
    d: &Rational,
    alpha: &Rational,
) -> usize {
    if b.is_zero() {
        // vertical line x = c/a meets the hyperbola once unless it is the asymptote x = p
        return usize::from(&(c / a) != p);
    }
    // substitute y = (c − a·x)/b and multiply through by b
    let q = a.clone();
    let l = d * b - c - p * a;
    let k = p * c - p * d * b - alpha * b;
    if q.is_zero() && l.is_zero() {
        // horizontal asymptote y = d: no solutions since α ≠ 0
        return 0;
    }
    real_roots(&q, &l, &k)
}

/// Exact number of common real points of two curves.
pub fn intersect(c1: &Curve, c2: &Curve) -> Intersection {
    if c1.normalized() == c2.normalized() {
        return Intersection::Identical;
    }
    match (c1.kind(), c2.kind()) {
        (CurveKind::Line { .. }, CurveKind::Line { .. }) => {
            let (a1, b1, _) = c1.linear_form().unwrap();
            let (a2, b2, _) = c2.linear_form().unwrap();
            Intersection::Points(usize::from(!(a1 * b2 - a2 * b1).is_zero()))
        }
        (CurveKind::Line { .. }, CurveKind::Hyperbola { p, d, alpha })
        | (CurveKind::Hyperbola { p, d, alpha }, CurveKind::Line { .. }) => {
            let (a, b, c) = if c1.is_line() { c1.linear_form() } else { c2.linear_form() }.unwrap();
            Intersection::Points(line_meets_hyperbola(&a, &b, &c, p, d, alpha))
        }
        (CurveKind::Hyperbola { p: p1, d: d1, alpha: a1 }, CurveKind::Hyperbola { p: p2, d: d2, alpha: a2 }) => {
            // difference of the two equations is linear
            let a = d1 - d2;
            let b = p1 - p2;
            let c = a1 - a2 + p1 * d1 - p2 * d2;
            if a.is_zero() && b.is_zero() {
                return Intersection::Points(0);
            }
            Intersection::Points(line_meets_hyperbola(&a, &b, &c, p1, d1, a1))
        }
    }
}

/// Rational common points of two hyperbolas, when the quadratic splits over ℚ.
pub fn rational_hyperbola_intersections(c1: &Curve, c2: &Curve) -> Option<Vec<Point>> {
    let (CurveKind::Hyperbola { p: p1, d: d1, alpha: a1 }, CurveKind::Hyperbola { p: p2, d: d2, alpha: a2 }) =
        (c1.kind(), c2.kind())
    else {
        return None;
    };
    let a = d1 - d2;
    let b = p1 - p2;
    let c = a1 - a2 + p1 * d1 - p2 * d2;
    if b.is_zero() {
        if a.is_zero() {
            return None;
        }
        let x = &c / &a;
        if &x == p1 {
            return Some(Vec::new());
        }
        let y = d1 + a1 / (p1 - &x);
        return Some(vec![Point::new(x, y)]);
    }
    let q = a.clone();
    let l = d1 * &b - &c - p1 * &a;
    let k = p1 * &c - p1 * d1 * &b - a1 * &b;
    let xs = if q.is_zero() {
        if l.is_zero() {
            return Some(Vec::new());
        }
        vec![-&k / &l]
    } else {
        let two = Rational::from_integer(2.into());
        let disc = &l * &l - Rational::from_integer(4.into()) * &q * &k;
        if disc.is_negative() {
            return Some(Vec::new());
        }
        let root = sqrt_exact(&disc)?;
        let mut xs = vec![(-&l - &root) / (&two * &q), (-&l + &root) / (&two * &q)];
        xs.dedup();
        xs
    };
    Some(
        xs.into_iter()
            .map(|x| {
                let y = (&c - &a * &x) / &b;
                Point::new(x, y)
            })
            .collect(),
    )
}

/// Pairwise intersection check: lines meet at most once, anything involving
/// a hyperbola at most twice, and no two members coincide.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PseudoLineVerdict {
    pub pairs: usize,
    pub max_line_pair: usize,
    pub max_hyperbola_pair: usize,
    pub identical_pairs: usize,
    pub pass: bool,
    pub worst_pair: Option<(usize, usize)>,
}

pub fn pairwise_intersection_bound(curves: &[Curve]) -> PseudoLineVerdict {
    let mut v = PseudoLineVerdict {
        pairs: 0,
        max_line_pair: 0,
        max_hyperbola_pair: 0,
        identical_pairs: 0,
        pass: true,
        worst_pair: None,
    };
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            v.pairs += 1;
            let both_lines = curves[i].is_line() && curves[j].is_line();
            let ok = match intersect(&curves[i], &curves[j]) {
                Intersection::Identical => {
                    v.identical_pairs += 1;
                    false
                }
                Intersection::Points(n) if both_lines => {
                    v.max_line_pair = v.max_line_pair.max(n);
                    n <= 1
                }
                Intersection::Points(n) => {
                    v.max_hyperbola_pair = v.max_hyperbola_pair.max(n);
                    n <= 2
                }
            };
            if !ok && v.pass {
                v.pass = false;
                v.worst_pair = Some((i, j));
            }
        }
    }
    v
}

/// The incidence embedding behind the `2/3` bound:
/// points `(1/c, p*)` for `c ∈ C, p* ∈ BD`, lines `sx − ty = α` for `s ∈ AC, t ∈ 1/D`,
/// for which `I(P, L) ≥ |C||D|·|A ∩ (B + α)|` holds exactly.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoThirdsCheck {
    pub rep: usize,
    pub points: usize,
    pub lines: usize,
    pub incidences: u64,
    pub incidence_lower: u64,
    pub holds: bool,
    pub row: Fragment,
}

pub fn two_thirds_check(
    a: &ExactSet,
    b: &ExactSet,
    c: &ExactSet,
    d: &ExactSet,
    alpha: &Rational,
) -> Result<TwoThirdsCheck> {
    if alpha.is_zero() {
        return Err(Error::InvalidParameter("alpha must be nonzero".into()));
    }
    let zero = Rational::zero();
    let c = c.without(&zero);
    let d = d.without(&zero);
    if c.is_empty() || d.is_empty() {
        return Err(Error::TooFewElements { what: "C and D without zero", need: 1, got: 0 });
    }
    let ac = prodset(a, &c);
    let bd = prodset(b, &d);
    let points: Vec<Point> = c
        .iter()
        .flat_map(|cv| {
            let inv = Rational::one() / cv;
            bd.iter().map(move |q| Point::new(inv.clone(), q.clone()))
        })
        .collect();
    let lines: Vec<Curve> = ac
        .iter()
        .flat_map(|s| d.iter().map(move |dv| Curve::line(s.clone(), Rational::one() / dv, alpha.clone()).unwrap()))
        .collect();
    let incidences = count_incidences(&points, &lines, IncidenceMode::Hashed);
    let rep = a.iter().filter(|x| b.contains(&(*x - alpha))).count();
    let incidence_lower = (c.len() * d.len() * rep) as u64;
    let (cn, dn) = (c.len() as f64, d.len() as f64);
    let bound = (cn * dn).powf(-1.0 / 3.0) * (ac.len() as f64 * bd.len() as f64).powf(2.0 / 3.0)
        + bd.len() as f64 / dn
        + ac.len() as f64 / cn;
    let row = Fragment::ratio("|A ∩ (B+α)|", rep, "(|C||D|)^(-1/3) (|AC||BD|)^(2/3) + |BD|/|D| + |AC|/|C|", bound);
    Ok(TwoThirdsCheck {
        rep,
        points: points.len(),
        lines: lines.len(),
        incidences,
        incidence_lower,
        holds: incidences >= incidence_lower,
        row,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn pt(x: i64, y: i64) -> Point {
        Point::new(int(x), int(y))
    }

    fn line(s: i64, t: i64, a: i64) -> Curve {
        Curve::line(int(s), int(t), int(a)).unwrap()
    }

    fn hyp(p: i64, d: i64, a: i64) -> Curve {
        Curve::hyperbola(int(p), int(d), int(a)).unwrap()
    }

    #[test]
    fn incidence_examples() {
        let diag = line(1, 1, 0); // x − y = 0
        for mode in [IncidenceMode::Naive, IncidenceMode::Hashed] {
            assert_eq!(count_incidences(&[pt(0, 0), pt(1, 1)], std::slice::from_ref(&diag), mode), 2);
            // y = 0 is 0·x − (−1)·y = 0
            assert_eq!(count_incidences(&grid(2), &[diag.clone(), line(0, -1, 0)], mode), 4);
        }
    }

    #[test]
    fn grid_lines_agree() {
        let g = grid(3);
        let lines = lines_through_pairs(&g);
        assert_eq!(lines.len(), 20);
        let naive = count_incidences(&g, &lines, IncidenceMode::Naive);
        assert_eq!(naive, count_incidences(&g, &lines, IncidenceMode::Hashed));
        // 8 three-point lines and 12 two-point lines
        assert_eq!(naive, 8 * 3 + 12 * 2);
    }

    #[test]
    fn scaled_duplicates_count_twice() {
        let pts = grid(3);
        let ls = vec![line(1, 1, 0), line(2, 2, 0), hyp(3, -1, 2)];
        assert_eq!(
            count_incidences(&pts, &ls, IncidenceMode::Naive),
            count_incidences(&pts, &ls, IncidenceMode::Hashed)
        );
    }

    #[test]
    fn degenerate_curves_rejected() {
        assert_eq!(Curve::line(int(0), int(0), int(1)).unwrap_err(), Error::DegenerateCurve("line with s = t = 0"));
        assert!(Curve::hyperbola(int(1), int(1), int(0)).is_err());
        let bad: std::result::Result<Curve, _> = serde_json::from_str(r#"{"kind":"hyperbola","p":1,"d":0,"alpha":0}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn curve_json_round_trip() {
        let c: Curve = serde_json::from_str(r#"{"kind":"line","s":1,"t":{"n":1,"d":2},"alpha":3}"#).unwrap();
        assert!(c.contains(&pt(3, 0)));
        let back: Curve = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        let h = hyp(1, 0, 1);
        assert_eq!(serde_json::to_string(&h).unwrap(), r#"{"kind":"hyperbola","p":1,"d":0,"alpha":1}"#);
    }

    #[test]
    fn intersection_examples() {
        assert_eq!(intersect(&line(1, 1, 0), &line(1, -1, 0)), Intersection::Points(1));
        assert_eq!(intersect(&line(1, 1, 0), &line(1, 1, 5)), Intersection::Points(0));
        assert_eq!(intersect(&line(1, 1, 2), &line(3, 3, 6)), Intersection::Identical);
        // x + y = 2 against (1 − x)y = 1 gives x² − 3x + 1 = 0
        assert_eq!(intersect(&hyp(1, 0, 1), &hyp(2, 1, 1)), Intersection::Points(2));
        assert_eq!(rational_hyperbola_intersections(&hyp(1, 0, 1), &hyp(2, 1, 1)), None);
        assert_eq!(intersect(&hyp(0, 0, 1), &hyp(0, 0, 2)), Intersection::Points(0));
        // asymptotes
        assert_eq!(intersect(&line(1, 0, 0), &hyp(0, 0, 1)), Intersection::Points(0));
        assert_eq!(intersect(&line(0, 1, 0), &hyp(0, 0, 1)), Intersection::Points(0));
        assert_eq!(intersect(&line(1, 0, 1), &hyp(0, 0, 1)), Intersection::Points(1));
    }

    #[test]
    fn rational_intersections_lie_on_both() {
        // xy = 1 and (3 − x)y = 2 meet only at (1, 1)
        // xy = 2 and (3 − x)(y − 3) = −2 meet at (1, 2) and (2, 1)
        for (h1, h2, n) in [(hyp(0, 0, -1), hyp(3, 0, 2), 1), (hyp(0, 0, -2), hyp(3, 3, -2), 2)] {
            assert_eq!(intersect(&h1, &h2), Intersection::Points(n));
            let pts = rational_hyperbola_intersections(&h1, &h2).unwrap();
            assert_eq!(pts.len(), n);
            assert!(pts.iter().all(|p| h1.contains(p) && h2.contains(p)));
        }
    }

    #[test]
    fn pseudo_line_families() {
        let g = grid(4);
        let v = pairwise_intersection_bound(&lines_through_pairs(&g));
        assert!(v.pass);
        assert_eq!(v.max_line_pair, 1);
        let hs: Vec<Curve> = (1..4).flat_map(|p| (0..3).map(move |d| hyp(p, d, 1))).collect();
        let v = pairwise_intersection_bound(&hs);
        assert!(v.pass && v.max_hyperbola_pair <= 2);
        let v = pairwise_intersection_bound(&[line(1, 1, 0), line(2, 2, 0)]);
        assert!(!v.pass);
        assert_eq!(v.identical_pairs, 1);
        assert_eq!(v.worst_pair, Some((0, 1)));
    }

    #[test]
    fn two_thirds_embedding() {
        let a = ExactSet::from_ints([1, 2, 3, 5, 8]);
        let b = ExactSet::from_ints([0, 1, 2, 4, 7]);
        let c = ExactSet::from_ints([0, 1, 2, 3]);
        let d = ExactSet::from_ints([1, 2, 4]);
        let r = two_thirds_check(&a, &b, &c, &d, &int(1)).unwrap();
        assert_eq!(r.rep, 5);
        assert_eq!(r.points, 3 * prodset(&b, &d).len());
        assert!(r.holds);
        assert!(r.incidences >= 45);
        let r = two_thirds_check(&a, &b, &c, &d, &int(3)).unwrap();
        assert_eq!(r.rep, 2);
        assert!(r.holds);
        assert!(two_thirds_check(&a, &b, &c, &d, &int(0)).is_err());
    }
}
