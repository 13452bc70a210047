//! Run configuration: what clap parses, and what `--config` / `--dump-config` read and write.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use qmix_core::subspace::{
    t_all, t_delta, t_delta_cyclic, t_hamming, t_offdiag, t_pair, t_random, Parity, TransitionJson,
};
use qmix_core::trotter::{PlanJson, TrotterPlan, XyStrategy};
use qmix_core::{FeasibleSet, TransitionMatrix};

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Md,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mixer {
    /// Projector-form strings from the recursive decomposition.
    #[default]
    Recursive,
    /// Closed-form `(XX+YY)/2` strings; one-hot sets only.
    Xy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Largest coefficient gap allowed between decomposition algorithms.
    pub agreement: f64,
    /// Largest norm outside the feasible subspace.
    pub leak: f64,
    /// An overlap counts as nonzero above this.
    pub overlap: f64,
    /// An overlap counts as zero below this.
    pub zero: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { agreement: 1e-10, leak: 1e-9, overlap: 1e-6, zero: 1e-10 }
    }
}

/// Flags shared by every subcommand.
#[derive(Clone, Debug, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct Common {
    /// Feasible set file: one bitstring per line, `#` comments.
    #[arg(long, global = true, value_name = "FILE", group = "source")]
    pub states: Option<PathBuf>,
    /// Feasible set given inline, e.g. `100,010,011`.
    #[arg(long, global = true, value_delimiter = ',', value_name = "BITS", group = "source")]
    pub inline: Option<Vec<String>>,
    /// The n one-hot states.
    #[arg(long, global = true, value_name = "N", group = "source")]
    pub one_hot: Option<usize>,
    /// All 2^n states.
    #[arg(long, global = true, value_name = "N", group = "source")]
    pub full: Option<usize>,

    /// Catalog matrix, `+`-joined: all, delta, delta_c, ham:D, pair:K,L,
    /// offdiag:D,odd|even[,cyclic], random, zero.
    #[arg(long = "t", global = true, value_name = "NAME[:PARAMS]", group = "tsource")]
    pub t: Option<String>,
    /// Transition matrix as JSON: `{"m", "entries": [[j,k,v]]}` or a bare triple list (1-based).
    #[arg(long, global = true, value_name = "FILE", group = "tsource")]
    pub t_file: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Plan repetitions searched for full transition coverage (default 1).
    #[arg(long, global = true)]
    pub r_max: Option<usize>,
    /// Worker threads for the parallel parts.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[arg(skip)]
    pub tolerances: Tolerances,
}

/// Plan selection for `trotter-check` and `qasm`.
#[derive(Clone, Debug, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct PlanArgs {
    /// Plan JSON: `{"groups": [[[j,k], …]], "r": R}` with 1-based pairs.
    #[arg(long, value_name = "FILE", conflicts_with = "strategy")]
    pub plan: Option<PathBuf>,
    /// per_pair, single, greedy, or one-hot XY plans: parity:R, parity+oe:D[,D…], complete.
    /// XY plans fix T themselves and need --one-hot.
    #[arg(long, value_name = "NAME")]
    pub strategy: Option<String>,
    /// Overrides the plan's repetition count.
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long, value_enum, default_value_t)]
    pub mixer: Mixer,
}

#[derive(Clone, Debug, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
pub enum Command {
    /// Pauli decomposition with cross-checked algorithms and CX costs.
    Decompose {
        /// Also run the trace-based algorithm (n <= 6).
        #[arg(long)]
        #[serde(default)]
        oracle: bool,
        #[arg(long, value_enum, default_value_t)]
        #[serde(default)]
        mixer: Mixer,
    },
    /// CX / U3 / term counts only.
    Cost {
        #[arg(long, value_enum, default_value_t)]
        #[serde(default)]
        mixer: Mixer,
    },
    /// Subspace preservation and transition coverage of a Trotter plan.
    TrotterCheck {
        #[command(flatten)]
        #[serde(flatten)]
        plan: PlanArgs,
    },
    /// Pairwise kernel augmentation search.
    Augment {
        /// Run the greedy multi-add heuristic with up to K added pairs per column instead.
        #[arg(long, value_name = "K")]
        greedy: Option<usize>,
    },
    /// `|<j| e^{-itT} |k>|` over a time grid.
    Overlap {
        /// 1-based indices `J,K`.
        #[arg(long, value_delimiter = ',', required = true)]
        pair: Vec<usize>,
        #[arg(long, default_value_t = 10.0)]
        t_max: f64,
        #[arg(long, default_value_t = 101)]
        steps: usize,
        /// Size of T when no feasible set is given.
        #[arg(long)]
        m: Option<usize>,
    },
    /// OpenQASM 2.0 for one mixing step `(U_1 ⋯ U_Q)^r` at angle β.
    Qasm {
        #[command(flatten)]
        #[serde(flatten)]
        plan: PlanArgs,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        beta: f64,
    },
    /// Regenerate a reference table (t2, t3, t4, t5, fig6, fig9).
    Tables {
        which: String,
        /// Compare with the embedded values; exit 3 on any mismatch.
        #[arg(long)]
        #[serde(default)]
        check: bool,
    },
    /// Eigenvector initial states embedded in the feasible subspace.
    InitState {
        /// uniform, w_state or sine:K.
        #[arg(long, default_value = "uniform")]
        kind: String,
    },
}

/// Everything one run needs. Round-trips through JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(flatten)]
    pub common: Common,
}

impl RunConfig {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("reading run config")
    }

    pub fn format(&self) -> Format {
        self.common.format.unwrap_or_default()
    }

    pub fn seed(&self) -> u64 {
        self.common.seed.unwrap_or(0)
    }

    pub fn r_max(&self) -> usize {
        self.common.r_max.unwrap_or(1)
    }

    pub fn feasible_set(&self) -> Result<Option<FeasibleSet>> {
        let c = &self.common;
        let b = if let Some(path) = &c.states {
            FeasibleSet::parse_text(&read(path)?)?
        } else if let Some(list) = &c.inline {
            FeasibleSet::from_strs(list)?
        } else if let Some(n) = c.one_hot {
            FeasibleSet::one_hot(n)?
        } else if let Some(n) = c.full {
            FeasibleSet::full(n)?
        } else {
            return Ok(None);
        };
        Ok(Some(b))
    }

    pub fn require_set(&self) -> Result<FeasibleSet> {
        self.feasible_set()?
            .ok_or_else(|| Failure::Usage("a feasible set is required (--states, --inline, --one-hot or --full)".into()).into())
    }

    /// `T` of size `m`, if one was given.
    pub fn transition(&self, m: usize) -> Result<Option<TransitionMatrix<f64>>> {
        let c = &self.common;
        if let Some(spec) = &c.t {
            return Ok(Some(parse_catalog(spec, m, self.seed())?));
        }
        if let Some(path) = &c.t_file {
            let t = parse_t_json(&read(path)?)?;
            if t.size() != m {
                bail!(Failure::Usage(format!("T from {} has size {}, feasible set has {m} states", path.display(), t.size())));
            }
            return Ok(Some(t));
        }
        Ok(None)
    }

    pub fn require_transition(&self, m: usize) -> Result<TransitionMatrix<f64>> {
        self.transition(m)?
            .ok_or_else(|| Failure::Usage("a transition matrix is required (--t or --t-file)".into()).into())
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn usage(msg: String) -> anyhow::Error {
    Failure::Usage(msg).into()
}

fn numbers(params: &str, name: &str, count: usize) -> Result<Vec<usize>> {
    let v: Vec<usize> = params
        .split(',')
        .take(count)
        .map(|p| p.trim().parse().map_err(|_| usage(format!("{name}: bad parameter {p:?}"))))
        .collect::<Result<_>>()?;
    if v.len() != count {
        return Err(usage(format!("{name} needs {count} numeric parameter(s)")));
    }
    Ok(v)
}

/// One catalog term of size `m`.
fn catalog_term(term: &str, m: usize, seed: u64) -> Result<TransitionMatrix<f64>> {
    let (name, params) = term.split_once(':').unwrap_or((term, ""));
    Ok(match name.trim() {
        "all" => t_all(m),
        "delta" => t_delta(m),
        "delta_c" => t_delta_cyclic(m),
        "zero" => TransitionMatrix::zeros(m),
        "random" => t_random(m, seed),
        "ham" => t_hamming(numbers(params, "ham", 1)?[0], m)?,
        "pair" => {
            let v = numbers(params, "pair", 2)?;
            t_pair(v[0], v[1], m)?
        }
        "offdiag" => {
            let d = numbers(params, "offdiag", 1)?[0];
            let rest: Vec<&str> = params.split(',').skip(1).map(str::trim).collect();
            let parity = match rest.first() {
                Some(&"odd") => Parity::Odd,
                Some(&"even") => Parity::Even,
                _ => return Err(usage(format!("offdiag needs odd or even: {term:?}"))),
            };
            let cyclic = match rest.get(1) {
                None => false,
                Some(&"cyclic") => true,
                Some(other) => return Err(usage(format!("offdiag: unknown flag {other:?}"))),
            };
            t_offdiag(d, parity, cyclic, m)?
        }
        other => return Err(usage(format!("unknown transition matrix {other:?}"))),
    })
}

/// `+`-joined catalog terms.
pub fn parse_catalog(spec: &str, m: usize, seed: u64) -> Result<TransitionMatrix<f64>> {
    let mut t = TransitionMatrix::zeros(m);
    for term in spec.split('+') {
        t = t.add(&catalog_term(term, m, seed)?)?;
    }
    Ok(t)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum TFile {
    Sized(TransitionJson),
    Triples(Vec<(usize, usize, f64)>),
}

pub fn parse_t_json(text: &str) -> Result<TransitionMatrix<f64>> {
    let j = match serde_json::from_str::<TFile>(text).context("parsing transition matrix JSON")? {
        TFile::Sized(j) => j,
        TFile::Triples(entries) => {
            let m = entries.iter().map(|&(j, k, _)| j.max(k)).max().unwrap_or(0);
            TransitionJson { m, entries }
        }
    };
    Ok(TransitionMatrix::from_json(&j)?)
}

/// What a plan flag resolves to.
pub enum PlanSource {
    File(TrotterPlan),
    PerPair,
    Single,
    Greedy,
    Xy(XyStrategy),
}

impl PlanArgs {
    pub fn source(&self) -> Result<PlanSource> {
        if let Some(path) = &self.plan {
            let j: PlanJson = serde_json::from_str(&read(path)?).context("parsing plan JSON")?;
            return Ok(PlanSource::File(TrotterPlan::from_json(&j)?));
        }
        let Some(s) = &self.strategy else {
            return Err(usage("a plan is required (--plan or --strategy)".into()));
        };
        let (name, params) = s.split_once(':').unwrap_or((s, ""));
        Ok(match name {
            "per_pair" => PlanSource::PerPair,
            "single" => PlanSource::Single,
            "greedy" => PlanSource::Greedy,
            "complete" => PlanSource::Xy(XyStrategy::CompleteGraph),
            "parity" => {
                let r = if params.is_empty() { 1 } else { numbers(params, "parity", 1)?[0] };
                PlanSource::Xy(XyStrategy::RepeatParity(r))
            }
            "parity+oe" => {
                let ds = numbers(params, "parity+oe", params.split(',').count())?;
                PlanSource::Xy(XyStrategy::ParityPlusOffdiag(ds))
            }
            other => return Err(usage(format!("unknown strategy {other:?}"))),
        })
    }
}
