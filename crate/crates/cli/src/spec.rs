use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use ssimp_core::basedring::Budget;
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    SsimpGroup,
    VerifyEquiv,
    VerifyDescent,
    VertexSweep,
    SpCheck,
    RingValidate,
    RingIso,
    RingCharacters,
    QcaseGeneric,
    QcaseRoot,
    Char2,
    LucasSweep,
}

/// Parameters of one task. Every field is optional here; each task
/// checks the ones it needs. Also readable from a JSON file, where unknown
/// fields are rejected.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    /// Group: catalog name (cyclic:5, S5, direct_product(Z2,Z2), ..) or
    /// explicit cycles.
    #[arg(long)]
    pub group: Option<String>,
    /// Characteristic of the coefficient field.
    #[arg(long)]
    pub prime: Option<u64>,
    /// Degree of the coefficient field over its prime field (default 1).
    #[arg(long)]
    pub degree: Option<u32>,
    /// Generator module (repeatable): trivial, sign, perm, regular,
    /// jordan:k, perm_mod_constants, sum_zero, sum_zero_mod_constants,
    /// subsets:k, specht:k, heller:n, @module.json.
    #[arg(long = "generator")]
    #[serde(default)]
    pub generator: Vec<String>,
    /// Subgroup for verify-equiv / verify-descent: normalizer (of a Sylow
    /// p-subgroup, the default) or sylow.
    #[arg(long)]
    pub subgroup: Option<String>,
    #[arg(long)]
    pub max_simples: Option<usize>,
    #[arg(long)]
    pub max_tensor_dim: Option<usize>,
    #[arg(long)]
    pub word_length: Option<usize>,
    /// Seed for randomized steps (default 0, or SSIMP_SEED).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Order of q (qcase-root) or the integer n (char2).
    #[arg(long)]
    pub n: Option<u64>,
    /// Truncation level (qcase word length, char2 word length).
    #[arg(long)]
    pub level: Option<usize>,
    /// char2 variant: GL, SL or PGL (default: all three).
    #[arg(long)]
    pub variant: Option<String>,
    /// Ring: path to a ring JSON or catalog:<name>.
    #[arg(long)]
    pub a: Option<String>,
    /// Second ring for ring-iso.
    #[arg(long)]
    pub b: Option<String>,
    /// Extra qcase generators `m,d` (repeatable).
    #[arg(long = "extra")]
    #[serde(default)]
    pub extra: Vec<String>,
    /// lucas-sweep: largest a and b.
    #[arg(long)]
    pub max_a: Option<u64>,
    /// lucas-sweep: primes, comma separated.
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub primes: Vec<u64>,
    /// lucas-sweep: parity claims are checked for 1 <= n <= parity_max.
    #[arg(long)]
    pub parity_max: Option<u64>,
    /// Search timeout in seconds for ring-iso and the qcase embedding.
    #[arg(long)]
    pub timeout: Option<u64>,
}

impl TaskSpec {
    /// Fields set in `over` replace those in `self`.
    pub fn merge(self, over: TaskSpec) -> TaskSpec {
        macro_rules! pick {
            ($($f:ident),*) => {
                TaskSpec {
                    $($f: over.$f.or(self.$f),)*
                    generator: if over.generator.is_empty() { self.generator } else { over.generator },
                    extra: if over.extra.is_empty() { self.extra } else { over.extra },
                    primes: if over.primes.is_empty() { self.primes } else { over.primes },
                }
            };
        }
        pick!(
            group,
            prime,
            degree,
            subgroup,
            max_simples,
            max_tensor_dim,
            word_length,
            seed,
            jobs,
            n,
            level,
            variant,
            a,
            b,
            max_a,
            parity_max,
            timeout
        )
    }

    pub fn budget(&self) -> Budget {
        let d = Budget::default();
        Budget {
            max_simples: self.max_simples.unwrap_or(d.max_simples),
            max_tensor_dim: self.max_tensor_dim.unwrap_or(d.max_tensor_dim),
            max_word_length: self.word_length.unwrap_or(d.max_word_length),
        }
    }

    /// Explicit seed, else `SSIMP_SEED`, else 0.
    pub fn resolved_seed(&self) -> Result<u64, String> {
        if let Some(s) = self.seed {
            return Ok(s);
        }
        match std::env::var("SSIMP_SEED") {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| format!("SSIMP_SEED={v:?} is not an integer")),
            Err(_) => Ok(0),
        }
    }

    pub fn jobs(&self) -> usize {
        self.jobs.unwrap_or(1).max(1)
    }
}

#[derive(Clone, Debug, Args)]
pub struct RunArgs {
    pub task: Task,
    /// JSON file with task parameters; flags override it.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Write the JSON artifact here as well as to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write a markdown report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// ssimp-group: write the full run (ring plus provenance) here.
    #[arg(long)]
    pub run_out: Option<PathBuf>,
    #[command(flatten)]
    pub params: TaskSpec,
}
