use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::Parser;
use sumprod::config::{CommandId, ExperimentConfig, SetSpec};
use sumprod_core::energy::Phi;
use sumprod_core::extremal::XiPolicy;
use sumprod_core::rational::parse_set;

/// Exact sum-product experiments.
///
/// Rows are written as JSON lines after a header line, followed by a summary
/// line with every verdict. The exit code is 0 iff all verdicts pass.
#[derive(Debug, Parser)]
#[command(name = "sumprod", version)]
struct Cli {
    /// Command to run; overrides the command in --config.
    command: Option<CommandId>,
    /// JSON experiment config; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    /// Node budget for clique searches.
    #[arg(long)]
    budget: Option<u64>,
    /// Report path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV export path for sweep tables.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Wall-clock budget in seconds for verify-all.
    #[arg(long)]
    time_budget: Option<u64>,
    /// Input set as a JSON literal, e.g. '[1, 2, {"n": 1, "d": 3}]'. Repeatable.
    #[arg(long = "set")]
    sets: Vec<String>,
    /// Input generator as JSON, e.g. '{"gen": "geometric", "n": 5}'. Repeatable; follows --set inputs.
    #[arg(long = "gen")]
    gens: Vec<String>,
    /// Work in F_p.
    #[arg(long)]
    modulus: Option<u64>,
    #[arg(long, value_parser = parse_phi)]
    phi: Option<Phi>,
    /// Single n for extremal.
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    n_min: Option<u32>,
    #[arg(long)]
    n_max: Option<u32>,
    #[arg(long)]
    p_min: Option<u64>,
    #[arg(long)]
    p_max: Option<u64>,
    /// Subgroup order d.
    #[arg(long)]
    order: Option<u64>,
    #[arg(long)]
    xi: Option<u64>,
    #[arg(long, value_parser = parse_xi_policy)]
    xi_policy: Option<XiPolicy>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    tau_min: Option<u64>,
    #[arg(long)]
    tau_max: Option<u64>,
    #[arg(long)]
    size_cap: Option<usize>,
    /// Print the effective config as JSON and exit.
    #[arg(long)]
    print_config: bool,
}

fn parse_phi(s: &str) -> Result<Phi, String> {
    serde_json::from_value(serde_json::Value::String(s.into())).map_err(|_| format!("expected add or mul, got {s}"))
}

fn parse_xi_policy(s: &str) -> Result<XiPolicy, String> {
    serde_json::from_value(serde_json::Value::String(s.into()))
        .map_err(|_| format!("expected coset-reps or all, got {s}"))
}

fn effective_config(cli: &Cli) -> anyhow::Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            ExperimentConfig::from_json(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => match cli.command {
            Some(c) => ExperimentConfig::new(c),
            None => bail!("give a command or --config"),
        },
    };
    if let Some(c) = cli.command {
        cfg.command = c;
    }
    let p = &mut cfg.params;
    macro_rules! set {
        ($($field:ident),*) => { $( if cli.$field.is_some() { p.$field = cli.$field; } )* };
    }
    set!(
        budget,
        time_budget,
        modulus,
        phi,
        n_min,
        n_max,
        p_min,
        p_max,
        order,
        xi,
        xi_policy,
        k,
        samples,
        tau_min,
        tau_max,
        size_cap
    );
    if let Some(n) = cli.n {
        p.n_min = Some(n);
        p.n_max = Some(n);
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if cli.out.is_some() {
        cfg.out = cli.out.clone();
    }
    if cli.csv.is_some() {
        cfg.csv = cli.csv.clone();
    }
    for s in &cli.sets {
        let values = parse_set(s).with_context(|| format!("parsing set {s}"))?;
        cfg.inputs.push(SetSpec::Literal { values });
    }
    for g in &cli.gens {
        cfg.inputs.push(serde_json::from_str(g).with_context(|| format!("parsing generator {g}"))?);
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match real_main(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main(cli: &Cli) -> anyhow::Result<bool> {
    let cfg = effective_config(cli)?;
    if cli.print_config {
        println!("{}", cfg.to_json());
        return Ok(true);
    }
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().context("configuring threads")?;
    }
    let report = sumprod::run(&cfg)?;
    match &cfg.out {
        Some(path) => {
            let f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            report.write_to(std::io::BufWriter::new(f))?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            report.write_to(&mut lock)?;
            lock.flush()?;
        }
    }
    if let Some(path) = &cfg.csv {
        match (&report.csv, cfg.command) {
            (Some(text), _) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
            (None, CommandId::VerifyAll) => {
                let (_, text) = sumprod::suite::ratio_suite(cfg.seed);
                fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            }
            (None, c) => bail!("{} has no table to export", c.name()),
        }
    }
    Ok(report.pass())
}
