//! Command dispatch.

use serde::Serialize;
use serde_json::{json, Value};
use sumprod_core::clique::{build_clique_instance, clique_oracle, max_clique};
use sumprod_core::energy::{
    collinear_triples_exact, difference_rep, mult_energy, phi_energy, sigma_x, t_ratio_report, Mode, Phi,
};
use sumprod_core::extremal::{
    geometric_progression_example, subgroup_difference_sweep, OrderSpec, SweepConfig, XiPolicy, DEFAULT_BUDGET,
};
use sumprod_core::fp::{
    check_many_shifts_bound, check_subgroup_formula, fp_collinear_triples, fp_dd_report, fp_identity_checks, fp_setops,
    fp_t_report, make_subgroup, shift_tuples, FpOp, FpSet, ManyShiftsVerdict, PrimeCtx, TupleSelection,
};
use sumprod_core::growth::{check_plunnecke, check_ruzsa_triangle};
use sumprod_core::ratio::{
    check_inverse_identity, check_negation_trick, check_reflection_identity, check_sandwich, dd_chain_report,
    dyadic_partition, ratio_set, ratio_set_restricted, ratio_set_self, sigma_t_chain,
};
use sumprod_core::rational::format_set;
use sumprod_core::szt::{alpha_accounting, d_times_upper_for_ratio_set, rich_profile, sample_d_lower, BFamily};
use sumprod_core::{diffset, prodset, quotset, sumset, ExactSet};
use thiserror::Error;

use crate::config::{CommandId, ExperimentConfig, DEFAULT_SIZE_CAP};
use crate::generate::{generate, to_fp, GenError};
use crate::report::{to_csv, Report};
use crate::suite;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Generate(#[from] GenError),
    #[error(transparent)]
    Core(#[from] sumprod_core::Error),
    #[error("CSV export failed: {0}")]
    Csv(#[from] csv::Error),
}

type Result<T> = std::result::Result<T, RunError>;

fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(RunError::Config(msg.into()))
}

/// Runs one experiment. The report depends only on the config, seed included.
pub fn run(config: &ExperimentConfig) -> Result<Report> {
    let mut report = Report::new(config);
    let takes_modulus = matches!(
        config.command,
        CommandId::Sets | CommandId::Triples | CommandId::Ratio | CommandId::Subgroup | CommandId::Clique
    );
    if config.params.modulus.is_some() && !takes_modulus {
        return config_err(format!("{} does not take a modulus", config.command.name()));
    }
    match config.command {
        CommandId::Sets => sets(config, &mut report)?,
        CommandId::Energy => energy(config, &mut report)?,
        CommandId::Triples => triples(config, &mut report)?,
        CommandId::Ratio => ratio(config, &mut report)?,
        CommandId::Szt => szt(config, &mut report)?,
        CommandId::Subgroup => subgroup(config, &mut report)?,
        CommandId::Clique => clique(config, &mut report)?,
        CommandId::Sweep => sweep(config, &mut report)?,
        CommandId::Extremal => extremal(config, &mut report)?,
        CommandId::Explore => explore(config, &mut report)?,
        CommandId::VerifyIdentities => {
            let c = suite::identities(config.seed);
            report.row("criterion", &c);
            report.verdicts.extend(c.verdicts);
        }
        CommandId::VerifyAll => {
            let budget = config.params.time_budget.map(std::time::Duration::from_secs);
            for c in suite::run_all(config.seed, budget) {
                report.row("criterion", &c);
                report.verdicts.extend(c.verdicts);
            }
        }
    }
    Ok(report)
}

fn inputs(config: &ExperimentConfig) -> Result<Vec<ExactSet>> {
    let cap = config.params.size_cap.unwrap_or(DEFAULT_SIZE_CAP);
    config.inputs.iter().enumerate().map(|(i, spec)| Ok(generate(spec, config.seed, i as u64, cap)?)).collect()
}

/// First input, or the empty set.
fn first(sets: &[ExactSet]) -> ExactSet {
    sets.first().cloned().unwrap_or_default()
}

pub fn set_value(s: &ExactSet) -> Value {
    match format_set(s) {
        Ok(text) => serde_json::from_str(&text).expect("set literal is JSON"),
        Err(_) => Value::Array(s.iter().map(|q| Value::String(q.to_string())).collect()),
    }
}

fn fp_value(s: &FpSet) -> Value {
    json!(s.to_vec())
}

#[derive(Serialize)]
struct Size<'a> {
    name: &'a str,
    size: usize,
}

fn size(report: &mut Report, name: &str, size: usize) {
    report.row("size", Size { name, size });
}

fn input_rows(report: &mut Report, sets: &[ExactSet]) {
    for (i, s) in sets.iter().enumerate() {
        report.row("input", json!({ "index": i, "size": s.len(), "elements": set_value(s) }));
    }
}

fn modulus_inputs(sets: &[ExactSet], p: u64) -> Result<Vec<FpSet>> {
    sets.iter().map(|s| Ok(to_fp(s, p)?)).collect()
}

fn sets(config: &ExperimentConfig, report: &mut Report) -> Result<()> {
    let sets = inputs(config)?;
    input_rows(report, &sets);
    let a = first(&sets);
    let b = sets.get(1).cloned().unwrap_or_else(|| a.clone());
    if let Some(p) = config.params.modulus {
        let fs = modulus_inputs(&[a, b], p)?;
        for (name, op) in [("|A+B|", FpOp::Sum), ("|A-B|", FpOp::Diff), ("|AB|", FpOp::Prod), ("|A/B|", FpOp::Quot)] {
            size(report, name, fp_setops(&fs[0], &fs[1], op)?.len());
        }
        return Ok(());
    }
    size(report, "|A+B|", sumset(&a, &b).len());
    size(report, "|A-B|", diffset(&a, &b).len());
    size(report, "|AB|", prodset(&a, &b).len());
    size(report, "|A/B|", quotset(&a, &b).len());
    if !a.is_empty() && !b.is_empty() {
        let (n, m) = config.params.plunnecke.unwrap_or((2, 1));
        let c = check_plunnecke(&a, &b, n, m)?;
        report.row("plunnecke", json!({ "n": n, "m": m, "lhs": c.lhs.to_string(), "rhs": c.rhs.to_string() }));
        report.check("sets.plunnecke", c.holds, format!("|{n}B-{m}B||A|^{} vs |A+B|^{}", n + m - 1, n + m));
    }
    if let Some(c) = sets.get(2) {
        let t = check_ruzsa_triangle(&a, &b, c);
        report.row("ruzsa_triangle", json!({ "lhs": t.lhs.to_string(), "rhs": t.rhs.to_string() }));
        report.check("sets.ruzsa_triangle", t.holds, "|C||A-B| vs |A-C||B-C|");
    }
    Ok(())
}

fn energy(config: &ExperimentConfig, report: &mut Report) -> Result<()> {
    let sets = inputs(config)?;
    input_rows(report, &sets);
    let a = first(&sets);
    let b = sets.get(1).cloned().unwrap_or_else(|| a.clone());
    let phi = config.params.phi.unwrap_or(Phi::Mul);
    let rep = difference_rep(&a, &b);
    report.row("energy", json!({ "name": "E+(A,B)", "value": rep.sum_of_squares() }));
    report.row("energy", json!({ "name": "Ex(A,B)", "value": mult_energy(&a, &b) }));
    report.row("energy", json!({ "name": "E^phi(A,B)", "phi": phi, "value": phi_energy(&a, &b, phi) }));
    let total = (a.len() * b.len()) as u64;
    report.check(
        "energy.representation_total",
        rep.total() == total,
        format!("sum of r_(A-B) = {} vs |A||B| = {total}", rep.total()),
    );
    if let Some(x) = sets.get(2) {
        report.row("sigma", json!({ "sigma_X": sigma_x(&a, x)? }));
    }
    Ok(())
}

fn triples(config: &ExperimentConfig, report: &mut Report) -> Result<()> {
    let sets = inputs(config)?;
    input_rows(report, &sets);
    let a = first(&sets);
    if let Some(p) = config.params.modulus {
        let fa = to_fp(&a, p)?;
        let r = fp_t_report(&fa);
        report.row("triples", json!({ "T": r.t, "below_two_thirds": r.below_two_thirds }));
        if fa.len() >= 2 {
            report.fragment("ratio", &r.row);
        }
        if fa.len() <= 8 {
            let oracle = fp_collinear_triples(&fa, Mode::Oracle);
            report.check("energy.triples_oracle", oracle == r.t, format!("fast {} oracle {oracle}", r.t));
        }
        return Ok(());
    }
    let t = collinear_triples_exact(&a, &a, &a, &a, Mode::Fast);
    report.row("triples", json!({ "T": t }));
    if a.len() >= 2 {
        report.fragment("ratio", &t_ratio_report(&a)?);
    }
    if a.len() <= 8 {
        let oracle = collinear_triples_exact(&a, &a, &a, &a, Mode::Oracle);
        report.check("energy.triples_oracle", oracle == t, format!("fast {t} oracle {oracle}"));
    }
    Ok(())
}

fn witness<S: std::fmt::Display>(c: &Option<S>) -> String {
    c.as_ref().map(|x| format!("counterexample {x}")).unwrap_or_default()
}

fn ratio(config: &ExperimentConfig, report: &mut Report) -> Result<()> {
    let sets = inputs(config)?;
    input_rows(report, &sets);
    let a = first(&sets);
    if a.len() < 2 {
        report.row("size", json!({ "name": "|R[A]|", "size": 0, "note": "R[A] needs |A| >= 2" }));
        return Ok(());
    }
    if let Some(p) = config.params.modulus {
        let fa = to_fp(&a, p)?;
        if fa.len() < 2 {
            report.row("size", json!({ "name": "|R[A]| mod p", "size": 0, "note": "R[A] needs |A| >= 2" }));
            return Ok(());
        }
        let v = fp_identity_checks(&fa)?;
        report.row("fp_identities", &v);
        report.check("fp.ratio_identities", v.pass(), format!("p = {p}"));
        for f in fp_dd_report(&fa)? {
            report.fragment("ratio", &f);
        }
        return Ok(());
    }
    let r = ratio_set_self(&a)?;
    size(report, "|R[A]|", r.len());
    let refl = check_reflection_identity(&r);
    report.check("ratio.reflection", refl.pass, witness(&refl.counterexample));
    let inv = check_inverse_identity(&r);
    report.check("ratio.inverse", inv.pass, witness(&inv.counterexample));
    let neg = check_negation_trick(&a)?;
    report.check("ratio.negation_trick", neg.pass, witness(&neg.counterexample));
    let sw = check_sandwich(&a)?;
    report.row(
        "sandwich",
        json!({
            "r_in_quotients": sw.r_in_quotients,
            "quotients_in_products": sw.quotients_in_products,
            "minus_one_in_products": sw.minus_one_in_products,
            "literal": sw.literal,
            "quotient_size": sw.quotient_size,
        }),
    );
    report.check("ratio.sandwich", sw.pass, witness(&sw.counterexample));
    if let Some(b) = sets.get(1).filter(|b| b.len() >= 2) {
        let rab = ratio_set(&a, b)?;
        size(report, "|R[A,B]|", rab.len());
        let v = check_reflection_identity(&rab);
        report.check("ratio.reflection_pair", v.pass, witness(&v.counterexample));
    }
    if let Some(x) = sets.get(2) {
        let rx = ratio_set_restricted(&a, x)?;
        size(report, "|R_X[A]|", rx.len());
        let v = check_reflection_identity(&rx);
        report.check("ratio.reflection_restricted", v.pass, witness(&v.counterexample));
        let chain = sigma_t_chain(&a, x)?;
        report.row("sigma_chain", &chain);
        report.check("ratio.sigma_chain", chain.holds, "|A|^2 sigma^2 <= |R_X| sum S^2 <= |R_X| T");
    }
    let dp = dyadic_partition(&a)?;
    let buckets: Vec<Value> =
        dp.buckets.iter().map(|b| json!({ "j": b.j, "size": b.size, "sigma": b.sigma })).collect();
    report.row(
        "dyadic",
        json!({
            "delta0": format!("{}/{}", dp.delta0_numer, dp.delta0_denom),
            "popular": dp.popular.len(), "sigma_popular": dp.sigma_popular,
            "buckets": buckets, "dominant_j": dp.buckets[dp.dominant].j,
        }),
    );
    let dd = dd_chain_report(&a)?;
    for f in &dd.rows {
        report.fragment("ratio", f);
    }
    Ok(())
}

fn szt(config: &ExperimentConfig, report: &mut Report) -> Result<()> {
    let sets = inputs(config)?;
    input_rows(report, &sets);
    let a = first(&sets);
    let phi = config.params.phi.unwrap_or(Phi::Add);
    if a.is_empty() {
        report.row("szt", json!({ "note": "empty A" }));
        return Ok(());
    }
    if let Some(b) = sets.get(1) {
        let lo = config.params.tau_min.unwrap_or(1);
        let hi = config.params.tau_max.unwrap_or(u64::MAX);
        for w in rich_profile(&a, b, phi).into_iter().filter(|w| (lo..=hi).contains(&w.tau)) {
            report.row("rich", &w);
        }
        report.check("szt.alpha_accounting", alpha_accounting(&a, b, phi), "sum alpha = |A||B|, alpha <= min(|A|,|B|)");
    }
    let n = a.len() as i64;
    let family = config.params.family.clone().unwrap_or(BFamily::RandomIntegers {
        min_size: 1,
        max_size: a.len(),
        lo: -n * n,
        hi: n * n,
    });
    let samples = config.params.samples.unwrap_or(100);
    let d = sample_d_lower(&a, phi, &family, samples, config.seed)?;
    report.row(
        "d_lower",
        json!({ "samples": d.samples, "pairs_checked": d.pairs_checked, "best": d.best, "best_b": set_value(&d.best_b) }),
    );
    report.fragment("ratio", &d.row);
    if a.len() >= 2 {
        let dt = d_times_upper_for_ratio_set(&a, sets.get(1))?;
        for f in &dt.rows {
            report.fragment("ratio", f);
        }
    }
    Ok(())
}

fn need<T: Copy>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| RunError::Config(format!("missing parameter {name}")))
}

fn subgroup(config: &ExperimentConfig, report: &mut Report) -> Result<()> {
    let p = need(config.params.modulus, "modulus")?;
    let ctx = PrimeCtx::new(p)?;
    let d = config.params.order.unwrap_or(p - 1);
    let k = config.params.k.unwrap_or(1);
    let xi = config.params.xi.unwrap_or(1);
    let g = make_subgroup(&ctx, d)?;
    let selection = match config.params.samples {
        None if k == 1 => TupleSelection::Exhaustive,
        s => TupleSelection::Sampled { count: s.unwrap_or(1000), seed: config.seed },
    };
    let check = check_subgroup_formula(&g, k, selection)?;
    report.row("subgroup_theta", &check);
    report.check(
        "fp.subgroup_theta",
        check.pass,
        format!("worst theta {} at shifts {:?}", check.worst_theta, check.worst_tuple),
    );
    let tuples = shift_tuples(p, k, selection);
    match check_many_shifts_bound(&g, xi, k, &tuples)? {
        ManyShiftsVerdict::HypothesesUnmet { reasons } => {
            report.row("many_shifts", json!({ "status": "hypotheses_unmet", "reasons": reasons }));
        }
        v @ ManyShiftsVerdict::Asserted { pass, worst_count, bound, .. } => {
            report.row("many_shifts", &v);
            report.check("fp.many_shifts", pass, format!("worst {worst_count} vs bound {bound}"));
        }
    }
    Ok(())
}

fn clique(config: &ExperimentConfig, report: &mut Report) -> Result<()> {
    let p = need(config.params.modulus, "modulus")?;
    let d = need(config.params.order, "order")?;
    let xi = config.params.xi.unwrap_or(1);
    let budget = config.params.budget.unwrap_or(DEFAULT_BUDGET);
    let ctx = PrimeCtx::new(p)?;
    let g = make_subgroup(&ctx, d)?;
    let inst = build_clique_instance(&g, xi)?;
    let r = max_clique(&inst, budget)?;
    report.row(
        "clique",
        json!({
            "p": p, "d": d, "xi": xi, "size": r.size, "optimal": r.optimal,
            "nodes": r.nodes_explored, "best": fp_value(&r.best),
        }),
    );
    if !r.optimal {
        report.row("budget", json!({ "note": "node budget exhausted; size is a lower bound", "budget": budget }));
    }
    report.check("clique.difference_condition", r.verified, format!("A = {:?}", r.best.to_vec()));
    if p <= 61 && r.optimal {
        let o = clique_oracle(&inst)?;
        report.check("clique.oracle", o == r.size, format!("search {} oracle {o}", r.size));
    }
    Ok(())
}

pub fn sweep_config(config: &ExperimentConfig) -> SweepConfig {
    let p = &config.params;
    SweepConfig {
        p_min: p.p_min.unwrap_or(3),
        p_max: p.p_max.unwrap_or(50),
        orders: p.orders.clone().unwrap_or(OrderSpec::All),
        xi: p.xi_policy.unwrap_or(XiPolicy::CosetReps),
        budget: p.budget.unwrap_or(DEFAULT_BUDGET),
    }
}

fn sweep(config: &ExperimentConfig, report: &mut Report) -> Result<()> {
    let cfg = sweep_config(config);
    if cfg.p_min > cfg.p_max {
        return config_err("p_min exceeds p_max");
    }
    let s = subgroup_difference_sweep(&cfg)?;
    for r in &s.rows {
        report.row("sweep", r);
    }
    let partial = s.rows.iter().filter(|r| !r.optimal).count();
    if partial > 0 {
        report.row("budget", json!({ "note": "node budget exhausted", "instances": partial }));
    }
    report.verdicts.extend(s.verdicts);
    report.csv = Some(to_csv(&s.rows)?);
    Ok(())
}

fn extremal(config: &ExperimentConfig, report: &mut Report) -> Result<()> {
    let lo = config.params.n_min.unwrap_or(2);
    let hi = config.params.n_max.unwrap_or(lo.max(10));
    if lo > hi {
        return config_err("n_min exceeds n_max");
    }
    for n in lo..=hi {
        let ex = geometric_progression_example(n)?;
        report.row(
            "extremal",
            json!({
                "n": ex.n, "d_size": ex.d_size, "dd_size": ex.dd_size, "dq_size": ex.dq_size,
                "bound_25": ex.bound_25, "cube_bound": ex.cube_bound,
            }),
        );
        report.verdicts.extend(ex.verdicts);
    }
    Ok(())
}

/// `(|R[A]|, |A−A|, |A/A|)` for the inputs, or for seeded random sets when
/// none are given. Data only.
fn explore(config: &ExperimentConfig, report: &mut Report) -> Result<()> {
    let mut sets = inputs(config)?;
    if config.inputs.is_empty() {
        let count = config.params.samples.unwrap_or(20);
        let cap = config.params.size_cap.unwrap_or(DEFAULT_SIZE_CAP);
        for i in 0..count {
            let size = 3 + i % 10;
            let spec = crate::config::SetSpec::Random { size, lo: -50, hi: 50, seed: None };
            sets.push(generate(&spec, config.seed, i as u64, cap)?);
        }
    }
    for (i, a) in sets.iter().enumerate() {
        if a.len() < 2 {
            report.row("explore", json!({ "index": i, "size": a.len(), "note": "needs |A| >= 2" }));
            continue;
        }
        let r = ratio_set_self(a)?.len();
        let d = diffset(a, a).len();
        let q = quotset(a, a).len();
        report.row(
            "explore",
            json!({ "index": i, "size": a.len(), "r": r, "diff": d, "quot": q, "r_over_diff": r as f64 / d as f64 }),
        );
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SetSpec;

    fn cfg(command: CommandId, inputs: Vec<SetSpec>) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(command);
        c.inputs = inputs;
        c
    }

    #[test]
    fn empty_inputs_do_not_fail() {
        let empty = SetSpec::Literal { values: ExactSet::new() };
        for cmd in [
            CommandId::Sets,
            CommandId::Energy,
            CommandId::Triples,
            CommandId::Ratio,
            CommandId::Szt,
            CommandId::Explore,
        ] {
            let r = run(&cfg(cmd, vec![empty.clone()])).unwrap();
            assert!(r.pass(), "{cmd:?}");
            assert!(!r.rows.is_empty(), "{cmd:?}");
        }
    }

    #[test]
    fn extremal_n3() {
        let mut c = ExperimentConfig::new(CommandId::Extremal);
        c.params.n_min = Some(3);
        c.params.n_max = Some(3);
        let r = run(&c).unwrap();
        let row = &r.rows[0];
        assert_eq!(row["n"], 3);
        assert_eq!(row["d_size"], 7);
        assert_eq!(row["dd_size"], 13);
        assert_eq!(row["dq_size"], 15);
        assert!(r.pass());
    }

    #[test]
    fn ratio_checks_pass() {
        let a = SetSpec::Literal { values: ExactSet::from_ints([0, 1, 3, 7]) };
        let b = SetSpec::Ap { start: 2, step: 3, n: 4 };
        let x = SetSpec::Literal { values: ExactSet::from_ints([-1, 1]) };
        let r = run(&cfg(CommandId::Ratio, vec![a.clone(), b, x])).unwrap();
        assert!(r.pass());
        assert_eq!(r.verdicts.len(), 7);
        let mut c = cfg(CommandId::Ratio, vec![a]);
        c.params.modulus = Some(13);
        assert!(run(&c).unwrap().pass());
    }

    #[test]
    fn clique_paley() {
        let mut c = ExperimentConfig::new(CommandId::Clique);
        c.params.modulus = Some(13);
        c.params.order = Some(6);
        let r = run(&c).unwrap();
        assert_eq!(r.rows[0]["size"], 3);
        assert!(r.pass());
        assert_eq!(r.verdicts.len(), 2);
    }

    #[test]
    fn subgroup_qr13() {
        let mut c = ExperimentConfig::new(CommandId::Subgroup);
        c.params.modulus = Some(13);
        c.params.order = Some(6);
        let r = run(&c).unwrap();
        assert!(r.pass());
        assert_eq!(r.rows[1]["status"], "hypotheses_unmet");
    }

    #[test]
    fn sweep_has_csv() {
        let mut c = ExperimentConfig::new(CommandId::Sweep);
        c.params.p_max = Some(13);
        let r = run(&c).unwrap();
        assert!(r.pass());
        let csv = r.csv.unwrap();
        assert!(csv.starts_with("p,d,xi,gamma_size,max_A,optimal,gamma_4_9,gamma_1_2,equality_flag\n"));
        assert!(csv.lines().any(|l| l.starts_with("13,6,1,6,3,true,") && l.ends_with(",true")));
    }

    #[test]
    fn rejects_bad_configs() {
        let mut c = ExperimentConfig::new(CommandId::Energy);
        c.params.modulus = Some(7);
        assert!(matches!(run(&c), Err(RunError::Config(_))));
        let c = ExperimentConfig::new(CommandId::Clique);
        assert!(matches!(run(&c), Err(RunError::Config(_))));
        let mut c = ExperimentConfig::new(CommandId::Sets);
        c.inputs = vec![SetSpec::ConvexSquares { n: 20 }];
        c.params.size_cap = Some(10);
        assert!(matches!(run(&c), Err(RunError::Generate(GenError::TooLarge { .. }))));
    }
}
