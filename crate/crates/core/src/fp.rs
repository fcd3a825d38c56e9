//! Prime-field arithmetic, multiplicative subgroups and their shifted
//! intersections, and prime-field versions of the set statistics.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Pow, Signed};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::Bitset;
use crate::energy::Mode;
use crate::error::{Error, Result};
use crate::report::{Fragment, NO_ASSERT};

pub const MAX_MODULUS: u64 = 1 << 31;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return n == 2 || n == 3;
    }
    let mut i = 5;
    while i * i <= n {
        if n.is_multiple_of(i) || n.is_multiple_of(i + 2) {
            return false;
        }
        i += 6;
    }
    true
}

/// Distinct prime factors, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            out.push(f);
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += if f == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i * i != n {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

#[derive(Debug)]
struct CtxInner {
    p: u64,
    g: u64,
    factors: Vec<u64>,
}

/// The field `𝔽_p` together with a primitive root.
#[derive(Clone)]
pub struct PrimeCtx(Arc<CtxInner>);

impl PrimeCtx {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..MAX_MODULUS).contains(&p) {
            return Err(Error::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let factors = prime_factors(p - 1);
        let g = (1..p)
            .find(|&c| factors.iter().all(|&q| pow_mod(c, (p - 1) / q, p) != 1))
            .expect("every prime field has a primitive root");
        Ok(PrimeCtx(Arc::new(CtxInner { p, g, factors })))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn primitive_root(&self) -> u64 {
        self.0.g
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.0.p
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.0.p - b) % self.0.p
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        (self.0.p - a) % self.0.p
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.0.p
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.0.p)
    }

    /// Inverse by Fermat exponentiation; panics on zero.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.0.p), "zero has no inverse");
        self.pow(a, self.0.p - 2)
    }

    /// Multiplicative order of a nonzero residue.
    pub fn order_of(&self, a: u64) -> u64 {
        let mut ord = self.0.p - 1;
        for &q in &self.0.factors {
            while ord.is_multiple_of(q) && self.pow(a, ord / q) == 1 {
                ord /= q;
            }
        }
        ord
    }

    fn check(&self, v: u64) -> Result<u64> {
        if v < self.0.p {
            Ok(v)
        } else {
            Err(Error::ResidueOutOfRange { value: v, p: self.0.p })
        }
    }
}

impl PartialEq for PrimeCtx {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p
    }
}

impl Eq for PrimeCtx {}

impl fmt::Debug for PrimeCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{} (g = {})", self.0.p, self.0.g)
    }
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

/// A subset of `𝔽_p`.
#[derive(Clone, PartialEq, Eq)]
pub struct FpSet {
    ctx: PrimeCtx,
    bits: Bitset,
}

impl FpSet {
    pub fn empty(ctx: &PrimeCtx) -> Self {
        FpSet { ctx: ctx.clone(), bits: Bitset::new(ctx.p() as usize) }
    }

    pub fn from_elements<I: IntoIterator<Item = u64>>(ctx: &PrimeCtx, it: I) -> Result<Self> {
        let mut s = FpSet::empty(ctx);
        for v in it {
            s.bits.insert(ctx.check(v)? as usize);
        }
        Ok(s)
    }

    /// Reduces arbitrary integers mod `p`.
    pub fn from_ints<I: IntoIterator<Item = i64>>(ctx: &PrimeCtx, it: I) -> Self {
        let p = ctx.p() as i64;
        let mut s = FpSet::empty(ctx);
        for v in it {
            s.bits.insert(v.rem_euclid(p) as usize);
        }
        s
    }

    pub fn nonzero(ctx: &PrimeCtx) -> Self {
        let mut s = FpSet { ctx: ctx.clone(), bits: Bitset::full(ctx.p() as usize) };
        s.bits.remove(0);
        s
    }

    pub fn ctx(&self) -> &PrimeCtx {
        &self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p()
    }

    pub fn len(&self) -> usize {
        self.bits.count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn contains(&self, v: u64) -> bool {
        self.bits.contains(v as usize)
    }

    pub fn insert(&mut self, v: u64) {
        self.bits.insert((v % self.ctx.p()) as usize);
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.iter().map(|i| i as u64)
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }

    fn map<F: Fn(u64) -> u64>(&self, f: F) -> FpSet {
        let mut out = FpSet::empty(&self.ctx);
        for v in self.iter() {
            out.bits.insert(f(v) as usize);
        }
        out
    }

    /// `A + x`.
    pub fn translate(&self, x: u64) -> FpSet {
        let x = x % self.p();
        self.map(|v| self.ctx.add(v, x))
    }

    /// `ξA`.
    pub fn dilate(&self, xi: u64) -> FpSet {
        let xi = xi % self.p();
        self.map(|v| self.ctx.mul(v, xi))
    }

    pub fn neg(&self) -> FpSet {
        self.map(|v| self.ctx.neg(v))
    }

    fn same_field(&self, other: &FpSet) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch(self.p(), other.p()))
        }
    }

    pub fn intersection(&self, other: &FpSet) -> Result<FpSet> {
        self.same_field(other)?;
        Ok(FpSet { ctx: self.ctx.clone(), bits: self.bits.and(&other.bits) })
    }

    pub fn is_subset(&self, other: &FpSet) -> bool {
        self.ctx == other.ctx && self.iter().all(|v| other.contains(v))
    }

    pub fn to_json(&self) -> FpSetJson {
        FpSetJson { p: self.p(), elements: self.to_vec() }
    }
}

impl fmt::Debug for FpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod {}", self.bits, self.p())
    }
}

/// Wire form `{"p": .., "elements": [..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FpSetJson {
    pub p: u64,
    pub elements: Vec<u64>,
}

impl FpSetJson {
    pub fn build(&self) -> Result<FpSet> {
        let ctx = PrimeCtx::new(self.p)?;
        FpSet::from_elements(&ctx, self.elements.iter().copied())
    }
}

/// The subgroup of `𝔽_p*` of a given order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    ctx: PrimeCtx,
    order: u64,
    generator: u64,
    elements: FpSet,
}

impl Subgroup {
    pub fn ctx(&self) -> &PrimeCtx {
        &self.ctx
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn elements(&self) -> &FpSet {
        &self.elements
    }

    /// `ξΓ` for nonzero `ξ`.
    pub fn coset(&self, xi: u64) -> Result<FpSet> {
        if xi.is_multiple_of(self.ctx.p()) {
            return Err(Error::InvalidParameter("coset representative must be nonzero".into()));
        }
        Ok(self.elements.dilate(xi))
    }

    pub fn contains_minus_one(&self) -> bool {
        self.elements.contains(self.ctx.p() - 1)
    }

    /// Smallest element of each coset of `Γ` in `𝔽_p*`.
    pub fn coset_representatives(&self) -> Vec<u64> {
        let p = self.ctx.p();
        let mut seen = Bitset::new(p as usize);
        let mut reps = Vec::new();
        for x in 1..p {
            if seen.contains(x as usize) {
                continue;
            }
            reps.push(x);
            for v in self.elements.iter() {
                seen.insert(self.ctx.mul(v, x) as usize);
            }
        }
        reps
    }
}

/// `{g^{k(p−1)/d} : 0 ≤ k < d}`, the unique subgroup of order `d`.
pub fn make_subgroup(ctx: &PrimeCtx, d: u64) -> Result<Subgroup> {
    let n = ctx.p() - 1;
    if d == 0 || !n.is_multiple_of(d) {
        return Err(Error::OrderNotDivisor { order: d, group: n });
    }
    let generator = ctx.pow(ctx.primitive_root(), n / d);
    let mut elements = FpSet::empty(ctx);
    let mut x = 1;
    for _ in 0..d {
        elements.insert(x);
        x = ctx.mul(x, generator);
    }
    debug_assert_eq!(x, 1);
    Ok(Subgroup { ctx: ctx.clone(), order: d, generator, elements })
}

/// Wire form `{"p": .., "order": .., "coset": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupSpec {
    pub p: u64,
    pub order: u64,
    #[serde(default = "one")]
    pub coset: u64,
}

fn one() -> u64 {
    1
}

impl SubgroupSpec {
    /// Returns the subgroup and the requested coset.
    pub fn build(&self) -> Result<(Subgroup, FpSet)> {
        let ctx = PrimeCtx::new(self.p)?;
        let g = make_subgroup(&ctx, self.order)?;
        let coset = g.coset(self.coset)?;
        Ok((g, coset))
    }
}

fn validate_shifts(p: u64, shifts: &[u64]) -> Result<()> {
    if shifts.is_empty() {
        return Err(Error::InvalidShiftSet("need at least one shift".into()));
    }
    let mut sorted = shifts.to_vec();
    sorted.sort_unstable();
    if sorted.iter().any(|&x| x == 0 || x >= p) {
        return Err(Error::InvalidShiftSet(format!("shifts must be nonzero residues mod {p}")));
    }
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidShiftSet("shifts must be distinct".into()));
    }
    Ok(())
}

/// `|S ∩ (S + x₁) ∩ … ∩ (S + x_k)|` for a subgroup or coset `S`.
pub fn shifted_intersection(base: &FpSet, shifts: &[u64]) -> Result<usize> {
    validate_shifts(base.p(), shifts)?;
    let mut acc = base.bits.clone();
    for &x in shifts {
        acc.and_assign(&base.translate(x).bits);
        if acc.is_empty() {
            return Ok(0);
        }
    }
    Ok(acc.count())
}

/// Which shift tuples a sweep visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TupleSelection {
    /// Every `k`-subset of the nonzero residues.
    Exhaustive,
    /// `count` uniformly random `k`-subsets; exhaustive when there are fewer.
    Sampled { count: usize, seed: u64 },
}

/// All `k`-subsets of `1..p`, or a seeded sample of them.
pub fn shift_tuples(p: u64, k: usize, selection: TupleSelection) -> Vec<Vec<u64>> {
    let n = (p - 1) as usize;
    if k == 0 || k > n {
        return Vec::new();
    }
    let total = binomial(n as u64, k as u64);
    match selection {
        TupleSelection::Sampled { count, seed } if total.is_none_or(|t| t > count as u128) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p.rotate_left(17) ^ (k as u64) << 48);
            (0..count)
                .map(|_| {
                    let mut t: Vec<u64> = sample(&mut rng, n, k).into_iter().map(|i| i as u64 + 1).collect();
                    t.sort_unstable();
                    t
                })
                .collect()
        }
        _ => {
            let mut out = Vec::new();
            let mut cur: Vec<u64> = (1..=k as u64).collect();
            loop {
                out.push(cur.clone());
                // next combination in lexicographic order
                let mut i = k;
                while i > 0 && cur[i - 1] == (n - k + i) as u64 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                cur[i - 1] += 1;
                for j in i..k {
                    cur[j] = cur[j - 1] + 1;
                }
            }
            out
        }
    }
}

fn binomial(n: u64, k: u64) -> Option<u128> {
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(r)
}

/// Result of checking `count = |Γ|^{k+1}/(p−1)^k + θ·k·2^{k+3}·√p` with `|θ| ≤ 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubgroupFormulaCheck {
    pub p: u64,
    pub order: u64,
    pub k: usize,
    pub tested: usize,
    pub failures: usize,
    pub pass: bool,
    pub worst_theta: f64,
    pub worst_tuple: Vec<u64>,
}

/// `θ` for one intersection count.
pub fn subgroup_theta(p: u64, order: u64, k: usize, count: usize) -> f64 {
    let main = (order as f64).powi(k as i32 + 1) / ((p - 1) as f64).powi(k as i32);
    (count as f64 - main) / (k as f64 * 2f64.powi(k as i32 + 3) * (p as f64).sqrt())
}

/// Exact form of `|θ| ≤ 1`:
/// `(count·(p−1)^k − |Γ|^{k+1})² ≤ (k·2^{k+3})²·p·(p−1)^{2k}`.
pub fn subgroup_theta_within_bound(p: u64, order: u64, k: usize, count: usize) -> bool {
    let k32 = k as u32;
    let pm1 = BigInt::from(p - 1);
    let dev = BigInt::from(count) * pm1.clone().pow(k32) - BigInt::from(order).pow(k32 + 1);
    let scale = BigInt::from(k as u64) << (k + 3);
    dev.abs().pow(2u32) <= scale.pow(2u32) * BigInt::from(p) * pm1.pow(2 * k32)
}

pub fn check_subgroup_formula(g: &Subgroup, k: usize, selection: TupleSelection) -> Result<SubgroupFormulaCheck> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let p = g.ctx.p();
    let tuples = shift_tuples(p, k, selection);
    let translates: Vec<Bitset> = (0..p).map(|x| g.elements.translate(x).bits).collect();
    let mut out = SubgroupFormulaCheck {
        p,
        order: g.order,
        k,
        tested: 0,
        failures: 0,
        pass: true,
        worst_theta: 0.0,
        worst_tuple: Vec::new(),
    };
    for t in &tuples {
        let mut acc = g.elements.bits.clone();
        for &x in t {
            acc.and_assign(&translates[x as usize]);
        }
        let count = acc.count();
        let theta = subgroup_theta(p, g.order, k, count);
        out.tested += 1;
        if !subgroup_theta_within_bound(p, g.order, k, count) {
            out.failures += 1;
            out.pass = false;
        }
        if theta.abs() > out.worst_theta.abs() || out.worst_tuple.is_empty() {
            out.worst_theta = theta;
            out.worst_tuple = t.clone();
        }
    }
    Ok(out)
}

/// Outcome of the explicit many-shifts bound
/// `|Γ ∩ (Γ+x₁) ∩ … ∩ (Γ+x_k)| ≤ 4(k+1)(|Γ|^{1/(2k+1)} + 1)^{k+1}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ManyShiftsVerdict {
    /// At least one hypothesis fails; nothing is asserted.
    HypothesesUnmet {
        reasons: Vec<String>,
    },
    Asserted {
        pass: bool,
        tested: usize,
        worst_count: usize,
        bound: f64,
    },
}

impl ManyShiftsVerdict {
    pub fn passes_or_unasserted(&self) -> bool {
        !matches!(self, ManyShiftsVerdict::Asserted { pass: false, .. })
    }
}

/// The two hypotheses, evaluated independently.
///
/// `32k·2^{20k·log₂(k+1)} ≤ |Γ|` is compared in log scale;
/// `p ≥ 4k|Γ|(|Γ|^{1/(2k+1)} + 1)` is compared exactly as
/// `(p − 4k|Γ|)^{2k+1} ≥ (4k|Γ|)^{2k+1}·|Γ|`.
pub fn many_shifts_hypotheses(p: u64, order: u64, k: usize) -> Vec<String> {
    let mut reasons = Vec::new();
    let kf = k as f64;
    let need_log2 = (32.0 * kf).log2() + 20.0 * kf * (kf + 1.0).log2();
    if (order as f64).log2() < need_log2 {
        reasons.push(format!("|Γ| = {order} < 32k·2^(20k·log2(k+1)) = 2^{need_log2:.3} for k = {k}"));
    }
    let m = BigInt::from(4 * k as u64) * BigInt::from(order);
    let gap = BigInt::from(p) - &m;
    let e = 2 * k as u32 + 1;
    if gap.is_negative() || gap.pow(e) < m.clone().pow(e) * BigInt::from(order) {
        reasons.push(format!("p = {p} < 4k|Γ|(|Γ|^(1/(2k+1)) + 1) for |Γ| = {order}, k = {k}"));
    }
    reasons
}

pub fn check_many_shifts_bound(g: &Subgroup, xi: u64, k: usize, tuples: &[Vec<u64>]) -> Result<ManyShiftsVerdict> {
    let reasons = many_shifts_hypotheses(g.ctx.p(), g.order, k);
    if !reasons.is_empty() {
        return Ok(ManyShiftsVerdict::HypothesesUnmet { reasons });
    }
    let base = g.coset(xi)?;
    let bound = 4.0 * (k as f64 + 1.0) * ((g.order as f64).powf(1.0 / (2 * k + 1) as f64) + 1.0).powi(k as i32 + 1);
    let mut worst = 0;
    for t in tuples {
        if t.len() != k {
            return Err(Error::InvalidShiftSet(format!("expected {k} shifts, got {}", t.len())));
        }
        worst = worst.max(shifted_intersection(&base, t)?);
    }
    Ok(ManyShiftsVerdict::Asserted { pass: worst as f64 <= bound, tested: tuples.len(), worst_count: worst, bound })
}

/// Set operation selector for [`fp_setops`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FpOp {
    Sum,
    Diff,
    Prod,
    Quot,
}

pub fn fp_setops(a: &FpSet, b: &FpSet, op: FpOp) -> Result<FpSet> {
    a.same_field(b)?;
    let ctx = &a.ctx;
    let mut out = FpSet::empty(ctx);
    let rhs: Vec<u64> = match op {
        FpOp::Quot => b.iter().filter(|&v| v != 0).map(|v| ctx.inv(v)).collect(),
        _ => b.to_vec(),
    };
    for x in a.iter() {
        for &y in &rhs {
            let z = match op {
                FpOp::Sum => ctx.add(x, y),
                FpOp::Diff => ctx.sub(x, y),
                FpOp::Prod | FpOp::Quot => ctx.mul(x, y),
            };
            out.bits.insert(z as usize);
        }
    }
    Ok(out)
}

/// `T(A)` over `𝔽_p`.
pub fn fp_collinear_triples(a: &FpSet, mode: Mode) -> u64 {
    let ctx = &a.ctx;
    let v = a.to_vec();
    match mode {
        Mode::Oracle => {
            let mut count = 0;
            for &c in &v {
                for &d in &v {
                    for &a1 in &v {
                        for &b1 in &v {
                            let lhs = ctx.mul(ctx.sub(a1, c), ctx.sub(b1, d));
                            for &a2 in &v {
                                for &b2 in &v {
                                    if ctx.mul(ctx.sub(a2, c), ctx.sub(b2, d)) == lhs {
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
        Mode::Fast => {
            let mut total = 0u64;
            let mut prods = Vec::with_capacity(v.len() * v.len());
            for &c in &v {
                for &d in &v {
                    prods.clear();
                    for &x in &v {
                        let xc = ctx.sub(x, c);
                        prods.extend(v.iter().map(|&y| ctx.mul(xc, ctx.sub(y, d))));
                    }
                    prods.sort_unstable();
                    for run in prods.chunk_by(|x, y| x == y) {
                        total += (run.len() * run.len()) as u64;
                    }
                }
            }
            total
        }
    }
}

/// `T(A)` against `|A|^{9/2}`, with the `|A| < p^{2/3}` hypothesis flagged.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FpTripleReport {
    pub t: u64,
    pub below_two_thirds: bool,
    pub row: Fragment,
}

pub fn fp_t_report(a: &FpSet) -> FpTripleReport {
    let t = fp_collinear_triples(a, Mode::Fast);
    let n = a.len() as u64;
    // |A| < p^{2/3}  ⟺  |A|³ < p²
    let below_two_thirds = (n as u128).pow(3) < (a.p() as u128).pow(2);
    let row = Fragment::ratio("T(A) mod p", t, "|A|^(9/2)", (n as f64).powf(4.5));
    FpTripleReport { t, below_two_thirds, row }
}

/// `R[A]` over `𝔽_p`.
pub fn fp_ratio_set(a: &FpSet) -> Result<FpSet> {
    if a.len() < 2 {
        return Err(Error::TooFewElements { what: "R[A] mod p", need: 2, got: a.len() });
    }
    let ctx = &a.ctx;
    let v = a.to_vec();
    let mut out = FpSet::empty(ctx);
    for &base in &v {
        for &a1 in &v {
            if a1 == base {
                continue;
            }
            let inv = ctx.inv(ctx.sub(a1, base));
            for &a2 in &v {
                out.bits.insert(ctx.mul(ctx.sub(a2, base), inv) as usize);
            }
        }
    }
    Ok(out)
}

/// `R = 1 − R` over `𝔽_p`; returns a counterexample on failure.
pub fn fp_reflection_counterexample(r: &FpSet) -> Option<u64> {
    r.iter().find(|&x| !r.contains(r.ctx.sub(1, x)))
}

/// Exact identities of `R[A]` over `𝔽_p`: reflection, inversion, the
/// negation trick `|R| = |−R ∩ (R − 1)|`, and `R ⊆ D/D`, `D/D ∖ {−1} ⊆ R·R`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FpIdentityVerdict {
    pub reflection: bool,
    pub inverse: bool,
    pub negation_trick: bool,
    pub sandwich: bool,
    pub r_size: usize,
}

impl FpIdentityVerdict {
    pub fn pass(&self) -> bool {
        self.reflection && self.inverse && self.negation_trick && self.sandwich
    }
}

pub fn fp_identity_checks(a: &FpSet) -> Result<FpIdentityVerdict> {
    let ctx = a.ctx();
    let r = fp_ratio_set(a)?;
    let reflection = fp_reflection_counterexample(&r).is_none();
    let inverse = r.iter().all(|x| x == 0 || r.contains(ctx.inv(x)));
    let shifted = r.translate(ctx.p() - 1);
    let negation_trick = r.neg().intersection(&shifted)?.len() == r.len();
    let d = fp_setops(a, a, FpOp::Diff)?;
    let dq = fp_setops(&d, &d, FpOp::Quot)?;
    let rr = fp_setops(&r, &r, FpOp::Prod)?;
    let minus_one = ctx.p() - 1;
    let sandwich = r.is_subset(&dq) && dq.iter().all(|q| q == minus_one || rr.contains(q));
    Ok(FpIdentityVerdict { reflection, inverse, negation_trick, sandwich, r_size: r.len() })
}

/// `|DD|, |D/D|` against `|D|^{19/24}|R|^{1/4}`, and `|R|` against `p^{5/9}`.
/// The hypothesis constant is unspecified, so the last row is a raw comparison.
pub fn fp_dd_report(a: &FpSet) -> Result<Vec<Fragment>> {
    let r = fp_ratio_set(a)?.len() as f64;
    let d = fp_setops(a, a, FpOp::Diff)?;
    let dd = fp_setops(&d, &d, FpOp::Prod)?.len();
    let dq = fp_setops(&d, &d, FpOp::Quot)?.len();
    let base = (d.len() as f64).powf(19.0 / 24.0) * r.powf(0.25);
    Ok(vec![
        Fragment::ratio("|DD| mod p", dd, "|D|^(19/24) |R[A]|^(1/4)", base),
        Fragment::ratio("|D/D| mod p", dq, "|D|^(19/24) |R[A]|^(1/4)", base),
        Fragment::ratio("|R[A]| mod p", r, "p^(5/9)", (a.p() as f64).powf(5.0 / 9.0))
            .with_label(format!("{NO_ASSERT}; hypothesis |R[A]| <= c p^(5/9) with c unspecified")),
    ])
}

/// `|A ∩ (B + α)|` against `|A|^{-1/2}|AB|^{4/3}`, with the size hypothesis
/// `|A| = |B| < p^{2/3}` flagged. Data only.
pub fn fp_two_thirds_report(a: &FpSet, b: &FpSet, alpha: u64) -> Result<(bool, Fragment)> {
    if alpha.is_multiple_of(a.p()) {
        return Err(Error::InvalidParameter("alpha must be nonzero".into()));
    }
    let rep = a.intersection(&b.translate(alpha))?.len();
    let ab = fp_setops(a, b, FpOp::Prod)?.len() as f64;
    let n = a.len() as u128;
    let hypothesis = a.len() == b.len() && n.pow(3) < (a.p() as u128).pow(2);
    let bound = (a.len() as f64).powf(-0.5) * ab.powf(4.0 / 3.0);
    Ok((hypothesis, Fragment::ratio("|A ∩ (B+α)| mod p", rep, "|A|^(-1/2) |AB|^(4/3)", bound)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f13() -> PrimeCtx {
        PrimeCtx::new(13).unwrap()
    }

    #[test]
    fn primes_and_roots() {
        assert!(is_prime(2) && is_prime(13) && is_prime(2147483647));
        assert!(!is_prime(1) && !is_prime(91));
        assert_eq!(PrimeCtx::new(91).unwrap_err(), Error::NotPrime(91));
        assert_eq!(PrimeCtx::new(1 << 31).unwrap_err(), Error::ModulusOutOfRange(1 << 31));
        for p in primes_in(2, 400) {
            let ctx = PrimeCtx::new(p).unwrap();
            assert_eq!(ctx.order_of(ctx.primitive_root()), p - 1);
        }
        assert_eq!(f13().primitive_root(), 2);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn subgroup_examples() {
        let ctx = f13();
        let qr = make_subgroup(&ctx, 6).unwrap();
        let squares = FpSet::from_elements(&ctx, (1..13).map(|x| x * x % 13)).unwrap();
        assert_eq!(qr.elements(), &squares);
        assert_eq!(qr.elements().to_vec(), vec![1, 3, 4, 9, 10, 12]);
        assert_eq!(make_subgroup(&ctx, 1).unwrap().elements().to_vec(), vec![1]);
        assert_eq!(make_subgroup(&ctx, 12).unwrap().elements(), &FpSet::nonzero(&ctx));
        assert_eq!(make_subgroup(&ctx, 5).unwrap_err(), Error::OrderNotDivisor { order: 5, group: 12 });
        assert_eq!(qr.coset_representatives(), vec![1, 2]);
    }

    #[test]
    fn subgroups_are_closed() {
        for p in [13, 17, 31, 61, 97] {
            let ctx = PrimeCtx::new(p).unwrap();
            for d in divisors(p - 1) {
                let g = make_subgroup(&ctx, d).unwrap();
                let e = g.elements();
                assert_eq!(e.len() as u64, d);
                assert_eq!(&fp_setops(e, e, FpOp::Prod).unwrap(), e);
                for xi in g.coset_representatives() {
                    let c = g.coset(xi).unwrap();
                    assert_eq!(fp_setops(&c, e, FpOp::Prod).unwrap(), c);
                }
            }
        }
    }

    #[test]
    fn shifted_intersection_examples() {
        let ctx = f13();
        let qr = make_subgroup(&ctx, 6).unwrap();
        assert_eq!(shifted_intersection(qr.elements(), &[1]).unwrap(), 2);
        let with_one = qr.elements().intersection(&qr.elements().translate(1)).unwrap();
        assert_eq!(with_one.to_vec(), vec![4, 10]);
        // {4, 10} ∩ (QR + 2) = {4, 10} ∩ {0, 3, 5, 6, 11, 12}
        assert_eq!(shifted_intersection(qr.elements(), &[1, 2]).unwrap(), 0);
        let many: Vec<u64> = (1..13).collect();
        assert_eq!(shifted_intersection(qr.elements(), &many).unwrap(), 0);
        assert!(shifted_intersection(qr.elements(), &[]).is_err());
        assert!(shifted_intersection(qr.elements(), &[0]).is_err());
        assert!(shifted_intersection(qr.elements(), &[3, 3]).is_err());
    }

    #[test]
    fn shifted_pairs_account_for_all_differences() {
        for p in [13, 29, 41] {
            let ctx = PrimeCtx::new(p).unwrap();
            for d in divisors(p - 1) {
                let g = make_subgroup(&ctx, d).unwrap();
                let total: usize = (1..p).map(|x| shifted_intersection(g.elements(), &[x]).unwrap()).sum();
                assert_eq!(total as u64, d * d - d);
            }
        }
    }

    #[test]
    fn theta_examples() {
        let theta = subgroup_theta(13, 6, 1, 2);
        assert!((theta - (2.0 - 3.0) / (16.0 * 13f64.sqrt())).abs() < 1e-15);
        assert!(subgroup_theta_within_bound(13, 6, 1, 2));
        assert!(!subgroup_theta_within_bound(13, 6, 1, 1000));
        let ctx = PrimeCtx::new(101).unwrap();
        let full = make_subgroup(&ctx, 100).unwrap();
        let c = check_subgroup_formula(&full, 1, TupleSelection::Exhaustive).unwrap();
        assert!(c.pass);
        assert_eq!(c.tested, 100);
        assert_eq!(shifted_intersection(full.elements(), &[5]).unwrap(), 99);
    }

    #[test]
    fn tuple_selection() {
        assert_eq!(shift_tuples(5, 2, TupleSelection::Exhaustive).len(), 6);
        assert_eq!(shift_tuples(5, 2, TupleSelection::Sampled { count: 100, seed: 1 }).len(), 6);
        let s = shift_tuples(101, 3, TupleSelection::Sampled { count: 50, seed: 9 });
        assert_eq!(s.len(), 50);
        assert!(s.iter().all(|t| t.len() == 3 && t.windows(2).all(|w| w[0] < w[1]) && t[0] >= 1));
        assert_eq!(s, shift_tuples(101, 3, TupleSelection::Sampled { count: 50, seed: 9 }));
        assert!(shift_tuples(3, 3, TupleSelection::Exhaustive).is_empty());
    }

    #[test]
    fn many_shifts_hypotheses_fail_at_desk_scale() {
        let ctx = PrimeCtx::new(13).unwrap();
        let g = make_subgroup(&ctx, 6).unwrap();
        let v = check_many_shifts_bound(&g, 1, 1, &[vec![1]]).unwrap();
        match v {
            ManyShiftsVerdict::HypothesesUnmet { reasons } => {
                assert_eq!(reasons.len(), 2);
                assert!(reasons[0].contains("2^25.000"));
            }
            other => panic!("unexpected {other:?}"),
        }
        // |Γ| large enough in log scale, p far too small
        let r = many_shifts_hypotheses(1 << 30, 1 << 26, 1);
        assert_eq!(r.len(), 1);
        assert!(r[0].starts_with("p ="));
        // both hypotheses hold: |Γ| = 2^26, p ≥ 4·2^26·(2^(26/3)+1) ≈ 1.1e11
        assert!(many_shifts_hypotheses(200_000_000_000, 1 << 26, 1).is_empty());
    }

    #[test]
    fn setops_mod_p() {
        let ctx = f13();
        let a = FpSet::from_elements(&ctx, [1, 2]).unwrap();
        assert_eq!(fp_setops(&a, &a, FpOp::Sum).unwrap().to_vec(), vec![2, 3, 4]);
        let b = FpSet::from_elements(&ctx, [0, 3, 7]).unwrap();
        let d = fp_setops(&b, &b, FpOp::Diff).unwrap();
        assert!(d.contains(0));
        assert_eq!(d, d.neg());
        let q = fp_setops(&a, &FpSet::from_elements(&ctx, [0]).unwrap(), FpOp::Quot).unwrap();
        assert!(q.is_empty());
        let other = FpSet::from_elements(&PrimeCtx::new(17).unwrap(), [1]).unwrap();
        assert_eq!(fp_setops(&a, &other, FpOp::Sum).unwrap_err(), Error::ContextMismatch(13, 17));
        assert!(FpSet::from_elements(&ctx, [13]).is_err());
    }

    #[test]
    fn fp_triples_agree() {
        let ctx = f13();
        let a = FpSet::from_elements(&ctx, [0, 1]).unwrap();
        let oracle = fp_collinear_triples(&a, Mode::Oracle);
        assert_eq!(oracle, 40);
        assert_eq!(fp_collinear_triples(&a, Mode::Fast), oracle);
        let one = FpSet::from_elements(&ctx, [5]).unwrap();
        assert_eq!(fp_collinear_triples(&one, Mode::Fast), 1);
        let a = FpSet::from_elements(&ctx, [0, 2, 5, 6, 11]).unwrap();
        assert_eq!(fp_collinear_triples(&a, Mode::Fast), fp_collinear_triples(&a, Mode::Oracle));
        let r = fp_t_report(&a);
        assert!(r.below_two_thirds);
    }

    #[test]
    fn fp_ratio_examples() {
        let ctx = f13();
        let r = fp_ratio_set(&FpSet::from_elements(&ctx, [0, 1, 2]).unwrap()).unwrap();
        assert_eq!(r.to_vec(), vec![0, 1, 2, 7, 12]);
        assert_eq!(fp_reflection_counterexample(&r), None);
        let r = fp_ratio_set(&FpSet::from_elements(&ctx, [0, 1]).unwrap()).unwrap();
        assert_eq!(r.to_vec(), vec![0, 1]);
        // A = {0, 1, 4} has A − A = QR ∪ {0}, so R[A] ⊆ QR ∪ {0}
        let a = FpSet::from_elements(&ctx, [0, 1, 4]).unwrap();
        let qr = make_subgroup(&ctx, 6).unwrap();
        let mut gamma_star = qr.elements().clone();
        gamma_star.insert(0);
        assert!(fp_ratio_set(&a).unwrap().is_subset(&gamma_star));
        let bad = FpSet::from_elements(&ctx, [0, 1, 5]).unwrap();
        assert_eq!(fp_reflection_counterexample(&bad), Some(5));
    }

    #[test]
    fn identities_mod_p() {
        let ctx = PrimeCtx::new(13).unwrap();
        for elems in [vec![0, 1], vec![0, 1, 2], vec![0, 1, 4], vec![2, 5, 6, 11]] {
            let v = fp_identity_checks(&FpSet::from_elements(&ctx, elems).unwrap()).unwrap();
            assert!(v.pass(), "{v:?}");
        }
    }

    #[test]
    fn two_thirds_row() {
        let ctx = PrimeCtx::new(101).unwrap();
        let a = FpSet::from_elements(&ctx, [1, 2, 3, 4, 5]).unwrap();
        let (hyp, row) = fp_two_thirds_report(&a, &a, 1).unwrap();
        assert!(hyp);
        assert_eq!(row.value.as_f64(), 4.0);
        assert!(fp_two_thirds_report(&a, &a, 0).is_err());
    }

    #[test]
    fn json_forms() {
        let s: FpSetJson = serde_json::from_str(r#"{"p": 13, "elements": [1, 3, 9]}"#).unwrap();
        assert_eq!(s.build().unwrap().len(), 3);
        let spec: SubgroupSpec = serde_json::from_str(r#"{"p": 13, "order": 6, "coset": 2}"#).unwrap();
        let (g, c) = spec.build().unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(c.to_vec(), vec![2, 5, 6, 7, 8, 11]);
    }
}
