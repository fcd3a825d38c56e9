//! The verification suite run by `verify-all` and the acceptance tests.
//!
//! Each criterion returns its verdicts together with a summary object. Wall
//! clock times are kept out of the summaries so reports stay reproducible.

use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sumprod_core::clique::{build_clique_instance, clique_oracle, max_clique};
use sumprod_core::energy::{collinear_triples, Mode, Phi};
use sumprod_core::extremal::{
    dd_sizes, geometric_progression_example, geometric_set, subgroup_difference_sweep, sweep_instances, SweepConfig,
};
use sumprod_core::fp::{
    check_subgroup_formula, divisors, fp_collinear_triples, fp_identity_checks, make_subgroup, primes_in, FpSet,
    PrimeCtx, TupleSelection,
};
use sumprod_core::growth::{check_plunnecke, check_ruzsa_triangle};
use sumprod_core::incidence::{count_incidences, Curve, IncidenceMode, Point};
use sumprod_core::ratio::{
    check_inverse_identity, check_negation_trick, check_reflection_identity, check_sandwich, ratio_set,
    ratio_set_restricted, ratio_set_self,
};
use sumprod_core::report::Verdict;
use sumprod_core::szt::{convex_certificate, szt_rich_set, BFamily};
use sumprod_core::{diffset, ExactSet, Rational, Rational128, Rational64, Set, SmallSet};

use crate::generate::rng_for;
use crate::report::to_csv;

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub summary: Value,
    pub verdicts: Vec<Verdict>,
}

impl Criterion {
    fn new(id: u32, name: &'static str, summary: Value, verdicts: Vec<Verdict>) -> Self {
        Criterion { id, name, pass: verdicts.iter().all(|v| v.pass), summary, verdicts }
    }
}

/// Wall-clock limits in seconds, by criterion.
pub const TIME_LIMITS: [(u32, u64); 8] = [(1, 60), (2, 120), (3, 120), (4, 300), (5, 120), (6, 30), (7, 600), (8, 600)];

pub fn time_limit(id: u32) -> Duration {
    let secs = TIME_LIMITS.iter().find(|(i, _)| *i == id).map(|(_, s)| *s).expect("known criterion");
    Duration::from_secs(secs)
}

/// Seed used for the golden ratio-suite table.
pub const GOLDEN_SEED: u64 = 7;

pub fn by_id(id: u32, seed: u64) -> Criterion {
    match id {
        1 => identities(seed),
        2 => geometric(),
        3 => subgroup_theta(seed),
        4 => oracles(seed),
        5 => convex(seed),
        6 => growth(seed),
        7 => ratio_suite(seed).0,
        8 => sweep(),
        _ => panic!("unknown criterion {id}"),
    }
}

/// Runs every criterion in order. Once `budget` is spent the remaining
/// criteria are reported as failed without running.
pub fn run_all(seed: u64, budget: Option<Duration>) -> Vec<Criterion> {
    let start = Instant::now();
    let mut out = Vec::new();
    for (id, _) in TIME_LIMITS {
        if budget.is_some_and(|b| start.elapsed() >= b) {
            let v = Verdict::new(format!("suite.{id}.time_budget"), false, "skipped: time budget exhausted");
            out.push(Criterion::new(id, "skipped", json!({ "skipped": true }), vec![v]));
            continue;
        }
        let t = Instant::now();
        let c = by_id(id, seed);
        eprintln!("criterion {id} ({}): {} in {:.2?}", c.name, if c.pass { "pass" } else { "FAIL" }, t.elapsed());
        out.push(c);
    }
    out
}

fn rational_set<R: Rng>(rng: &mut R, size: usize) -> ExactSet {
    let mut v = Vec::with_capacity(size);
    let mut s = ExactSet::new();
    while s.len() < size {
        let n: i64 = rng.gen_range(-60..=60);
        let d: i64 = rng.gen_range(1..=6);
        v.push(Rational::new(n.into(), d.into()));
        s = v.iter().cloned().collect();
    }
    s
}

fn int_set<R: Rng>(rng: &mut R, size: usize, lo: i64, hi: i64) -> ExactSet {
    let width = (hi - lo + 1) as usize;
    ExactSet::from_ints(sample(rng, width, size).into_iter().map(|i| lo + i as i64))
}

fn fp_set<R: Rng>(rng: &mut R, ctx: &PrimeCtx, size: usize) -> FpSet {
    let p = ctx.p() as usize;
    FpSet::from_elements(ctx, sample(rng, p, size).into_iter().map(|i| i as u64)).expect("residues below p")
}

/// `size` distinct fractions `n/d` with `|n| ≤ 60`, `1 ≤ d ≤ 6`.
fn small_rational_set<R: Rng>(rng: &mut R, size: usize) -> Set<Rational64> {
    let mut v = Vec::with_capacity(size);
    let mut s = Set::new();
    while s.len() < size {
        v.push(Rational64::new(rng.gen_range(-60..=60), rng.gen_range(1..=6)));
        s = Set::from_vec(v.clone());
    }
    s
}

/// Nonempty random `X = −X ⊆ (A − A) ∖ {0}`.
fn symmetric_shifts<R: Rng>(rng: &mut R, a: &Set<Rational64>) -> Set<Rational64> {
    let positive: Vec<Rational64> = diffset(a, a).iter().filter(|x| **x > Rational64::default()).copied().collect();
    let mut picked: Vec<Rational64> = positive.iter().filter(|_| rng.gen_bool(0.5)).copied().collect();
    if picked.is_empty() {
        picked.push(positive[rng.gen_range(0..positive.len())]);
    }
    Set::from_vec(picked.iter().flat_map(|x| [*x, -x]).collect())
}

#[derive(Default, Serialize)]
struct IdentityTally {
    reflection: usize,
    reflection_pair: usize,
    reflection_restricted: usize,
    inverse: usize,
    sandwich: usize,
    negation_trick: usize,
}

/// Criterion 1: exact identities of ratio sets on random rational and
/// `𝔽_p` sets. The rational sets use checked 64-bit fractions.
pub fn identities(seed: u64) -> Criterion {
    let mut rng = rng_for(seed, 1);
    let cases: Vec<(Set<Rational64>, Set<Rational64>, Set<Rational64>)> = (0..500)
        .map(|_| {
            let n = rng.gen_range(2..=30);
            let a = small_rational_set(&mut rng, n);
            let m = rng.gen_range(2..=30);
            let b = small_rational_set(&mut rng, m);
            let x = symmetric_shifts(&mut rng, &a);
            (a, b, x)
        })
        .collect();
    let failures: Vec<[bool; 6]> = cases
        .par_iter()
        .map(|(a, b, x)| {
            let r = ratio_set_self(a).expect("|A| >= 2");
            let rab = ratio_set(a, b).expect("|B| >= 2");
            let rx = ratio_set_restricted(a, x).expect("valid shift set");
            [
                !check_reflection_identity(&r).pass,
                !check_reflection_identity(&rab).pass,
                !check_reflection_identity(&rx).pass,
                !check_inverse_identity(&r).pass,
                !check_sandwich(a).expect("|A| >= 2").pass,
                !check_negation_trick(a).expect("|A| >= 2").pass,
            ]
        })
        .collect();
    let mut tally = IdentityTally::default();
    for f in &failures {
        tally.reflection += f[0] as usize;
        tally.reflection_pair += f[1] as usize;
        tally.reflection_restricted += f[2] as usize;
        tally.inverse += f[3] as usize;
        tally.sandwich += f[4] as usize;
        tally.negation_trick += f[5] as usize;
    }
    let first_bad = failures.iter().position(|f| f.iter().any(|&x| x));

    let primes = primes_in(5, 211);
    let fp_cases: Vec<FpSet> = (0..200)
        .map(|_| {
            let p = primes[rng.gen_range(0..primes.len())];
            let ctx = PrimeCtx::new(p).expect("prime");
            let size = rng.gen_range(2..=30.min(p as usize - 1));
            fp_set(&mut rng, &ctx, size)
        })
        .collect();
    let fp_bad: Vec<usize> = fp_cases
        .par_iter()
        .enumerate()
        .filter(|(_, a)| !fp_identity_checks(a).expect("|A| >= 2").pass())
        .map(|(i, _)| i)
        .collect();

    let rational_witness = match first_bad {
        Some(i) => format!("first failing set {:?}", cases[i].0.iter().map(|q| q.to_string()).collect::<Vec<_>>()),
        None => String::new(),
    };
    let fp_witness = match fp_bad.first() {
        Some(&i) => format!("p = {}, A = {:?}", fp_cases[i].p(), fp_cases[i].to_vec()),
        None => String::new(),
    };
    let verdicts = vec![
        Verdict::new("ratio.identities", first_bad.is_none(), rational_witness),
        Verdict::new("fp.ratio_identities", fp_bad.is_empty(), fp_witness),
    ];
    let summary = json!({ "rational_sets": cases.len(), "fp_sets": fp_cases.len(), "rational_failures": tally, "fp_failures": fp_bad.len() });
    Criterion::new(1, "exact identities", summary, verdicts)
}

/// Criterion 2: the geometric progression example for `n ∈ [2, 40]`.
pub fn geometric() -> Criterion {
    let rows: Vec<_> =
        (2..=40u32).into_par_iter().map(|n| geometric_progression_example(n).expect("n in range")).collect();
    let failed: Vec<u32> = rows.iter().filter(|r| !r.pass()).map(|r| r.n).collect();
    let worst = rows.iter().map(|r| r.dd_size.max(r.dq_size) as f64 / r.bound_25).fold(0.0, f64::max);
    let verdicts = rows.into_iter().flat_map(|r| r.verdicts).collect::<Vec<_>>();
    let summary = json!({ "n_range": [2, 40], "failed_n": failed, "max_ratio_to_25_bound": worst });
    Criterion::new(2, "geometric progression example", summary, verdicts)
}

/// Criterion 3: `|θ| ≤ 1` for every subgroup of `𝔽_p*`, `p ≤ 200`;
/// exhaustive for one shift, 1000 sampled tuples for two and three.
pub fn subgroup_theta(seed: u64) -> Criterion {
    let jobs: Vec<(u64, u64, usize)> = primes_in(2, 200)
        .into_iter()
        .flat_map(|p| divisors(p - 1).into_iter().flat_map(move |d| (1..=3).map(move |k| (p, d, k))))
        .collect();
    let checks: Vec<_> = jobs
        .par_iter()
        .map(|&(p, d, k)| {
            let ctx = PrimeCtx::new(p).expect("prime");
            let g = make_subgroup(&ctx, d).expect("divisor");
            let sel = if k == 1 { TupleSelection::Exhaustive } else { TupleSelection::Sampled { count: 1000, seed } };
            check_subgroup_formula(&g, k, sel).expect("k >= 1")
        })
        .collect();
    let mut verdicts = Vec::new();
    let mut summary = serde_json::Map::new();
    for k in 1..=3 {
        let ks: Vec<_> = checks.iter().filter(|c| c.k == k).collect();
        let worst = ks.iter().max_by(|a, b| a.worst_theta.abs().total_cmp(&b.worst_theta.abs())).expect("nonempty");
        let failures: usize = ks.iter().map(|c| c.failures).sum();
        let tested: usize = ks.iter().map(|c| c.tested).sum();
        summary.insert(
            format!("k{k}"),
            json!({
                "instances": ks.len(), "tuples": tested, "failures": failures,
                "worst_theta": worst.worst_theta, "worst_p": worst.p, "worst_d": worst.order, "worst_shifts": worst.worst_tuple,
            }),
        );
        verdicts.push(Verdict::new(
            format!("fp.subgroup_theta.k{k}"),
            failures == 0,
            format!(
                "worst theta {} at p = {}, d = {}, shifts {:?}",
                worst.worst_theta, worst.p, worst.order, worst.worst_tuple
            ),
        ));
    }
    Criterion::new(3, "subgroup intersection formula", Value::Object(summary), verdicts)
}

fn random_curve<R: Rng>(rng: &mut R, points: &[Point]) -> Curve {
    let small = |rng: &mut R| Rational::new(rng.gen_range(-4..=4i64).into(), rng.gen_range(1..=2i64).into());
    loop {
        let through = &points[rng.gen_range(0..points.len())];
        let c = if rng.gen_bool(0.5) {
            let (s, t) = (small(rng), small(rng));
            let alpha = &s * &through.x - &t * &through.y;
            Curve::line(s, t, alpha)
        } else {
            let (p, d) = (small(rng), small(rng));
            let alpha = (&p - &through.x) * (&through.y - &d);
            Curve::hyperbola(p, d, alpha)
        };
        if let Ok(c) = c {
            return c;
        }
    }
}

/// Criterion 4: fast paths against their oracles.
pub fn oracles(seed: u64) -> Criterion {
    let mut rng = rng_for(seed, 4);
    let rational: Vec<ExactSet> = (0..50)
        .map(|_| {
            let n = rng.gen_range(1..=8);
            rational_set(&mut rng, n)
        })
        .collect();
    let primes = primes_in(11, 101);
    let modular: Vec<FpSet> = (0..50)
        .map(|_| {
            let ctx = PrimeCtx::new(primes[rng.gen_range(0..primes.len())]).expect("prime");
            let n = rng.gen_range(1..=8);
            fp_set(&mut rng, &ctx, n)
        })
        .collect();
    let incidence: Vec<(Vec<Point>, Vec<Curve>)> = (0..50)
        .map(|_| {
            let np = rng.gen_range(1..=40);
            let points: Vec<Point> = (0..np)
                .map(|_| {
                    let x = Rational::new(rng.gen_range(-6..=6i64).into(), rng.gen_range(1..=2i64).into());
                    let y = Rational::new(rng.gen_range(-6..=6i64).into(), rng.gen_range(1..=2i64).into());
                    Point::new(x, y)
                })
                .collect();
            let nc = rng.gen_range(1..=40);
            let curves = (0..nc).map(|_| random_curve(&mut rng, &points)).collect();
            (points, curves)
        })
        .collect();

    let triples_q = rational
        .par_iter()
        .filter(|a| collinear_triples(*a, a, a, a, Mode::Fast) != collinear_triples(*a, a, a, a, Mode::Oracle))
        .count();
    let triples_p = modular
        .par_iter()
        .filter(|a| fp_collinear_triples(a, Mode::Fast) != fp_collinear_triples(a, Mode::Oracle))
        .count();
    let incidences = incidence
        .par_iter()
        .filter(|(p, c)| count_incidences(p, c, IncidenceMode::Hashed) != count_incidences(p, c, IncidenceMode::Naive))
        .count();

    let instances = sweep_instances(&SweepConfig::new(2, 61));
    let clique_bad: Vec<(u64, u64, u64)> = instances
        .par_iter()
        .filter(|&&(p, d, xi)| {
            let ctx = PrimeCtx::new(p).expect("prime");
            let g = make_subgroup(&ctx, d).expect("divisor");
            let inst = build_clique_instance(&g, xi).expect("coset representative");
            let r = max_clique(&inst, u64::MAX).expect("search");
            !(r.optimal && r.verified && clique_oracle(&inst).expect("p <= 61") == r.size)
        })
        .copied()
        .collect();

    let verdicts = vec![
        Verdict::new("energy.triples_oracle", triples_q == 0, format!("{triples_q} of 50 rational sets differ")),
        Verdict::new("fp.triples_oracle", triples_p == 0, format!("{triples_p} of 50 sets mod p differ")),
        Verdict::new("incidence.hashed_naive", incidences == 0, format!("{incidences} of 50 instances differ")),
        Verdict::new("clique.oracle", clique_bad.is_empty(), format!("mismatches {clique_bad:?}")),
    ];
    let summary = json!({
        "triples_rational": rational.len(), "triples_fp": modular.len(),
        "incidence_instances": incidence.len(), "clique_instances": instances.len(),
    });
    Criterion::new(4, "oracle equivalences", summary, verdicts)
}

/// Criterion 5: convex sets `{i²}` against `count ≤ 4|A||B|²/τ³` on sampled
/// `(B, τ)`, and the closed-form certificate `(2n−1)²/n² < 4`.
pub fn convex(seed: u64) -> Criterion {
    let mut verdicts = Vec::new();
    let mut sizes = Vec::new();
    let four = Rational::from_integer(4.into());
    for (i, n) in [5usize, 10, 20].into_iter().enumerate() {
        let a = ExactSet::from_ints((1..=n as i64).map(|i| i * i));
        let sq = (n * n) as i64;
        let family = BFamily::Mixed {
            families: vec![
                BFamily::RandomIntegers { min_size: 1, max_size: 2 * n, lo: -sq, hi: sq },
                BFamily::Progressions { max_len: 2 * n, max_step: n as i64, max_start: sq },
                BFamily::SubsetsOf { pool: a.clone(), min_size: 1, max_size: n },
            ],
        };
        let mut rng = rng_for(seed, 50 + i as u64);
        let draws: Vec<(ExactSet, u64)> = (0..200)
            .map(|j| {
                let b = family.draw(&mut rng, j).expect("valid family");
                let tau = rng.gen_range(1..=n.min(b.len()) as u64);
                (b, tau)
            })
            .collect();
        let witnesses: Vec<Rational> =
            draws.par_iter().map(|(b, tau)| szt_rich_set(&a, b, *tau, Phi::Add).expect("tau >= 1").witness_d).collect();
        let worst = witnesses.iter().max().expect("200 samples").clone();
        let bad = witnesses.iter().filter(|w| **w > four).count();
        verdicts.push(Verdict::new(
            format!("szt.convex_rich_bound.n{n}"),
            bad == 0,
            format!("{bad} of 200 samples exceed 4; max witness {worst}"),
        ));
        let cert = convex_certificate(n).expect("n >= 1");
        verdicts.push(Verdict::new(
            format!("szt.convex_certificate.n{n}"),
            cert.value < four,
            format!("(2n-1)^2/n^2 = {}", cert.value),
        ));
        sizes.push(json!({ "n": n, "max_witness": worst.to_string(), "certificate": cert.value.to_string() }));
    }
    Criterion::new(5, "convex sets", json!({ "sizes": sizes }), verdicts)
}

/// Criterion 6: Plünnecke–Ruzsa and the Ruzsa triangle inequality.
pub fn growth(seed: u64) -> Criterion {
    let mut rng = rng_for(seed, 6);
    let plunnecke: Vec<(ExactSet, ExactSet, usize, usize)> = (0..200)
        .map(|_| {
            let (na, nb) = (rng.gen_range(1..=8), rng.gen_range(1..=6));
            let a = int_set(&mut rng, na, -20, 20);
            let b = rational_set(&mut rng, nb);
            let n = rng.gen_range(0..=2);
            let m = rng.gen_range(usize::from(n == 0)..=2);
            (a, b, n, m)
        })
        .collect();
    let ruzsa: Vec<[ExactSet; 3]> = (0..200)
        .map(|_| {
            let next = |rng: &mut rand_chacha::ChaCha8Rng| {
                let k = rng.gen_range(1..=8);
                rational_set(rng, k)
            };
            [next(&mut rng), next(&mut rng), next(&mut rng)]
        })
        .collect();
    let p_bad =
        plunnecke.par_iter().filter(|(a, b, n, m)| !check_plunnecke(a, b, *n, *m).expect("nonempty").holds).count();
    let r_bad = ruzsa.par_iter().filter(|[a, b, c]| !check_ruzsa_triangle(a, b, c).holds).count();
    let verdicts = vec![
        Verdict::new("sets.plunnecke", p_bad == 0, format!("{p_bad} of 200 fail")),
        Verdict::new("sets.ruzsa_triangle", r_bad == 0, format!("{r_bad} of 200 fail")),
    ];
    Criterion::new(6, "growth inequalities", json!({ "plunnecke": 200, "ruzsa_triangle": 200 }), verdicts)
}

/// One line of the ratio-report table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioRow {
    pub family: &'static str,
    pub size: usize,
    pub instance: u32,
    pub r_size: usize,
    pub t: u64,
    pub d_size: usize,
    pub dd_size: usize,
    /// `|R[A]|·log₂|A|/|A|²`.
    pub r_ratio: f64,
    /// `T(A)/(|A|⁴ log₂|A|)`.
    pub t_ratio: f64,
    /// `|DD|/(|D|^{5/6}|R[A]|^{1/4})`.
    pub dd_ratio: f64,
}

fn ratio_row(family: &'static str, instance: u32, a: &Set<i128>) -> RatioRow {
    let small: SmallSet = a.map(|&v| Rational128::from_integer(v));
    let r_size = ratio_set_self(&small).expect("|A| >= 2").len();
    let t = collinear_triples(a, a, a, a, Mode::Fast);
    let d = diffset(a, a);
    let (dd_size, _) = dd_sizes(&d);
    let n = a.len() as f64;
    RatioRow {
        family,
        size: a.len(),
        instance,
        r_size,
        t,
        d_size: d.len(),
        dd_size,
        r_ratio: r_size as f64 * n.log2() / (n * n),
        t_ratio: t as f64 / (n.powi(4) * n.log2()),
        dd_ratio: dd_size as f64 / ((d.len() as f64).powf(5.0 / 6.0) * (r_size as f64).powf(0.25)),
    }
}

/// Sets of the ratio table: geometric `n ∈ [4, 16]`, then three random
/// subsets of `[1, 4n]` for each `n ∈ {8, 16, 32, 64}`.
pub fn ratio_suite_sets(seed: u64) -> Vec<(&'static str, u32, Set<i128>)> {
    let mut out: Vec<(&'static str, u32, Set<i128>)> = (4..=16).map(|n| ("geometric", 0, geometric_set(n))).collect();
    for (i, n) in [8usize, 16, 32, 64].into_iter().enumerate() {
        let mut rng = rng_for(seed, 70 + i as u64);
        for inst in 0..3 {
            let picks = sample(&mut rng, 4 * n, n);
            out.push(("random", inst, picks.into_iter().map(|v| v as i128 + 1).collect()));
        }
    }
    out
}

pub fn ratio_rows(seed: u64) -> Vec<RatioRow> {
    ratio_suite_sets(seed).par_iter().map(|(f, i, a)| ratio_row(f, *i, a)).collect()
}

/// Criterion 7: the ratio-report table. Returns the criterion and the CSV text.
pub fn ratio_suite(seed: u64) -> (Criterion, String) {
    let rows = ratio_rows(seed);
    let csv = to_csv(&rows).expect("rows serialize");
    let again = to_csv(&ratio_rows(seed)).expect("rows serialize");
    let bad: Vec<String> = rows
        .iter()
        .filter(|r| ![r.r_ratio, r.t_ratio, r.dd_ratio].iter().all(|x| x.is_finite() && *x > 0.0))
        .map(|r| format!("{} n = {} #{}", r.family, r.size, r.instance))
        .collect();
    let verdicts = vec![
        Verdict::new("ratio.report_finite_positive", bad.is_empty(), bad.join("; ")),
        Verdict::new("ratio.report_deterministic", csv == again, "two runs compared byte for byte"),
    ];
    let summary = json!({ "rows": rows.len(), "seed": seed });
    (Criterion::new(7, "ratio report table", summary, verdicts), csv)
}

/// Criterion 8: the subgroup sweep up to `p = 500`.
pub fn sweep() -> Criterion {
    let report = subgroup_difference_sweep(&SweepConfig::new(2, 500)).expect("p below 2^31");
    let unverified = report.rows.iter().filter(|r| !r.verified).count();
    let partial = report.rows.iter().filter(|r| !r.optimal).count();
    let paley = report.rows.iter().find(|r| (r.p, r.d, r.xi) == (13, 6, 1));
    let paley_ok = paley.is_some_and(|r| r.max_a == 3 && r.equality_flag);
    let mut verdicts = report.verdicts.clone();
    verdicts.push(Verdict::new("extremal.sweep.reverified", unverified == 0, format!("{unverified} rows fail")));
    verdicts.push(Verdict::new(
        "extremal.sweep.paley13",
        paley_ok,
        match paley {
            Some(r) => format!("max|A| = {}, equality = {}", r.max_a, r.equality_flag),
            None => "row missing".into(),
        },
    ));
    let equality = report.rows.iter().filter(|r| r.equality_flag).count();
    let summary = json!({ "instances": report.rows.len(), "budget_limited": partial, "equality_rows": equality });
    Criterion::new(8, "subgroup sweep", summary, verdicts)
}
