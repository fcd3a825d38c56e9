//! Experiment configuration: the command, its input sets, and parameters.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sumprod_core::energy::Phi;
use sumprod_core::extremal::{OrderSpec, XiPolicy};
use sumprod_core::rational::set_serde;
use sumprod_core::szt::BFamily;
use sumprod_core::ExactSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandId {
    Sets,
    Energy,
    Triples,
    Ratio,
    Szt,
    Subgroup,
    Clique,
    Sweep,
    Extremal,
    VerifyAll,
    VerifyIdentities,
    Explore,
}

impl CommandId {
    pub fn name(self) -> &'static str {
        match self {
            CommandId::Sets => "sets",
            CommandId::Energy => "energy",
            CommandId::Triples => "triples",
            CommandId::Ratio => "ratio",
            CommandId::Szt => "szt",
            CommandId::Subgroup => "subgroup",
            CommandId::Clique => "clique",
            CommandId::Sweep => "sweep",
            CommandId::Extremal => "extremal",
            CommandId::VerifyAll => "verify-all",
            CommandId::VerifyIdentities => "verify-identities",
            CommandId::Explore => "explore",
        }
    }
}

/// How one input set is produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "gen", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SetSpec {
    /// An explicit set literal.
    Literal {
        #[serde(with = "set_serde")]
        values: ExactSet,
    },
    /// `{start, start + step, …}` with `n` terms.
    Ap { start: i64, step: i64, n: usize },
    /// `{2, 4, …, 2ⁿ}`.
    Geometric { n: u32 },
    /// `{1, 4, …, n²}`.
    ConvexSquares { n: usize },
    /// `size` distinct integers drawn uniformly from `[lo, hi]`.
    Random {
        size: usize,
        lo: i64,
        hi: i64,
        /// Overrides the seed derived from the run seed and input position.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    /// A JSON set literal stored in a file.
    File { path: PathBuf },
}

/// Command parameters. Unset fields take per-command defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Reduce inputs into `𝔽_p`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Phi>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_min: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<BFamily>,
    /// Plünnecke exponents `n, m` in `|nB − mB|`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plunnecke: Option<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orders: Option<OrderSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_policy: Option<XiPolicy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_min: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_min: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    /// Largest set a generator may produce.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size_cap: Option<usize>,
    /// Wall-clock budget in seconds for `verify-all`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_budget: Option<u64>,
}

pub const DEFAULT_SIZE_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: CommandId,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub inputs: Vec<SetSpec>,
    #[serde(default)]
    pub params: Params,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// CSV export path for tabular commands.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(command: CommandId) -> Self {
        ExperimentConfig { command, seed: 0, inputs: Vec::new(), params: Params::default(), out: None, csv: None }
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sumprod_core::rational::frac;

    #[test]
    fn round_trip() {
        let mut cfg = ExperimentConfig::new(CommandId::Szt);
        cfg.seed = 42;
        cfg.inputs = vec![
            SetSpec::Literal { values: [frac(1, 2), frac(-3, 1)].into_iter().collect() },
            SetSpec::Random { size: 10, lo: -5, hi: 20, seed: None },
            SetSpec::Geometric { n: 4 },
        ];
        cfg.params.phi = Some(Phi::Mul);
        cfg.params.plunnecke = Some((2, 1));
        cfg.params.orders = Some(OrderSpec::Divisors(vec![2, 3]));
        cfg.params.family = Some(BFamily::Progressions { max_len: 5, max_step: 3, max_start: 4 });
        cfg.out = Some("out.jsonl".into());
        let text = cfg.to_json();
        let back = ExperimentConfig::from_json(&text).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn rejects_unknown_fields() {
        assert!(ExperimentConfig::from_json(r#"{"command": "sets", "sed": 1}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"command": "nope"}"#).is_err());
        let cfg = ExperimentConfig::from_json(r#"{"command": "verify-all"}"#).unwrap();
        assert_eq!(cfg.command, CommandId::VerifyAll);
    }
}
