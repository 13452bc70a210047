use anyhow::{bail, Result};
use serde_json::{json, Value};

use qmix_core::augment::{greedy_multi_add, one_hot_mixer, search_pairwise};
use qmix_core::circuit::emit_plan;
use qmix_core::cost::CostReport;
use qmix_core::decompose::{flatten, ladder_decompose, recursive_decompose, trace_decompose, PairGroup};
use qmix_core::simulate::{
    eigen_residual, feasible_initial_state, overlap_csv, overlap_curve, InitialKind, SIM_MAX_QUBITS,
};
use qmix_core::tables::{generate, TableId};
use qmix_core::trotter::{beta_grid, greedy_partition, provides_transitions, xy_plan, TrotterPlan, PRESERVE_GRID};
use qmix_core::{FeasibleSet, PauliSum, TransitionMatrix};

use crate::config::{Command, Format, Mixer, PlanArgs, PlanSource, RunConfig};
use crate::Failure;

/// Largest n for the numeric transition confirmation.
const CONFIRM_MAX_QUBITS: usize = 8;
const CONFIRM_GRID: usize = 32;

/// A rendered result. `failure` is reported after the output is written.
pub struct Artifact {
    pub text: String,
    pub failure: Option<Failure>,
}

impl Artifact {
    fn ok(text: String) -> Self {
        Artifact { text, failure: None }
    }
}

fn render(format: Format, value: &Value, csv: impl FnOnce() -> String, md: impl FnOnce() -> String) -> Result<String> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(value)? + "\n",
        Format::Csv => csv(),
        Format::Md => md(),
    })
}

pub fn run(cfg: &RunConfig) -> Result<Artifact> {
    match &cfg.command {
        Command::Decompose { oracle, mixer } => decompose(cfg, *oracle, *mixer, true),
        Command::Cost { mixer } => decompose(cfg, false, *mixer, false),
        Command::TrotterCheck { plan } => trotter_check(cfg, plan),
        Command::Augment { greedy } => augment(cfg, *greedy),
        Command::Overlap { pair, t_max, steps, m } => overlap(cfg, pair, *t_max, *steps, *m),
        Command::Qasm { plan, beta } => qasm(cfg, plan, *beta),
        Command::Tables { which, check } => tables(cfg, which, *check),
        Command::InitState { kind } => init_state(cfg, kind),
    }
}

fn mixer_groups(
    mixer: Mixer,
    b: &FeasibleSet,
    t: &TransitionMatrix<f64>,
) -> Result<Vec<PairGroup<f64>>> {
    Ok(match mixer {
        Mixer::Recursive => recursive_decompose(b, t)?,
        Mixer::Xy => {
            let n = b.n_qubits();
            if b != &FeasibleSet::one_hot(n)? {
                bail!(Failure::Usage("--mixer xy needs the one-hot feasible set (--one-hot N)".into()));
            }
            one_hot_mixer(n, t)?
        }
    })
}

fn terms_csv(s: &PauliSum<f64>) -> String {
    let mut out = String::from("label,coeff\n");
    for (p, c) in s.iter() {
        out.push_str(&format!("{},{c}\n", p.to_label()));
    }
    out
}

fn decompose(cfg: &RunConfig, oracle: bool, mixer: Mixer, with_terms: bool) -> Result<Artifact> {
    let b = cfg.require_set()?;
    let t = cfg.require_transition(b.len())?;
    let n = b.n_qubits();
    let tol = cfg.common.tolerances.agreement;

    let projector = recursive_decompose(&b, &t)?;
    let recursive = flatten(n, &projector);
    let ladder_gap = ladder_decompose(&b, &t)?.max_abs_diff(&recursive);
    if ladder_gap > tol {
        bail!("ladder and recursive decompositions differ by {ladder_gap:e}");
    }
    let trace_gap = if oracle {
        let gap = trace_decompose(&b, &t)?.max_abs_diff(&recursive);
        if gap > tol {
            bail!("trace oracle differs from the recursive decomposition by {gap:e}");
        }
        Some(gap)
    } else {
        None
    };

    let groups = match mixer {
        Mixer::Recursive => projector,
        Mixer::Xy => mixer_groups(mixer, &b, &t)?,
    };
    let h = flatten(n, &groups);
    let total = CostReport::of_sum(&h);
    let trotterized = CostReport::of_groups(&groups);
    log::info!("n = {n}, {} terms, cx {}", total.term_count, total.cx_count);

    let mut value = json!({
        "n": n,
        "m": b.len(),
        "cost": total,
        "trotterized": trotterized,
        "agreement": { "ladder": ladder_gap, "trace": trace_gap },
    });
    if with_terms {
        value["terms"] = serde_json::to_value(h.to_json())?;
    }
    let text = render(
        cfg.format(),
        &value,
        || {
            if with_terms {
                terms_csv(&h)
            } else {
                format!(
                    "kind,cx,u3,terms\ntotal,{},{},{}\ntrotterized,{},{},{}\n",
                    total.cx_count,
                    total.u3_count,
                    total.term_count,
                    trotterized.cx_count,
                    trotterized.u3_count,
                    trotterized.term_count
                )
            }
        },
        || {
            let mut out = String::new();
            if with_terms {
                out.push_str("| string | coeff |\n|---|---|\n");
                for (p, c) in h.iter() {
                    out.push_str(&format!("| {} | {c} |\n", p.to_label()));
                }
                out.push('\n');
            }
            out.push_str("| | cx | u3 | terms |\n|---|---|---|---|\n");
            out.push_str(&total.markdown_row("total"));
            out.push('\n');
            out.push_str(&trotterized.markdown_row("trotterized"));
            out.push('\n');
            out
        },
    )?;
    Ok(Artifact::ok(text))
}

struct Resolved {
    b: FeasibleSet,
    t: TransitionMatrix<f64>,
    plan: TrotterPlan,
    groups: Vec<PairGroup<f64>>,
}

fn resolve_plan(cfg: &RunConfig, args: &PlanArgs) -> Result<Resolved> {
    let b = cfg.require_set()?;
    let n = b.n_qubits();
    let (t, plan) = match args.source()? {
        PlanSource::Xy(s) => {
            if b != FeasibleSet::one_hot(n)? {
                bail!(Failure::Usage("XY strategies need the one-hot feasible set (--one-hot N)".into()));
            }
            xy_plan(n, &s)?
        }
        src => {
            let t = cfg.require_transition(b.len())?;
            let plan = match src {
                PlanSource::File(p) => p,
                PlanSource::PerPair => TrotterPlan::per_pair(&t),
                PlanSource::Single => TrotterPlan::single_group(&t),
                PlanSource::Greedy => greedy_partition(&mixer_groups(args.mixer, &b, &t)?),
                PlanSource::Xy(_) => unreachable!(),
            };
            (t, plan)
        }
    };
    let plan = match args.reps {
        Some(r) if r > 0 => plan.with_repetitions(r),
        Some(_) => bail!(Failure::Usage("--reps must be positive".into())),
        None => plan,
    };
    plan.check_against(&t)?;
    let groups = mixer_groups(args.mixer, &b, &t)?;
    Ok(Resolved { b, t, plan, groups })
}

fn one_based(pairs: &[(usize, usize)]) -> Vec<[usize; 2]> {
    pairs.iter().map(|&(j, k)| [j + 1, k + 1]).collect()
}

fn trotter_check(cfg: &RunConfig, args: &PlanArgs) -> Result<Artifact> {
    let Resolved { b, t, plan, groups } = resolve_plan(cfg, args)?;
    let n = b.n_qubits();
    let tol = &cfg.common.tolerances;
    let sp = plan.string_plan(n, &groups)?;

    let leak = if n <= SIM_MAX_QUBITS { Some(sp.max_leak(&b, &beta_grid(PRESERVE_GRID))?) } else { None };
    let preserved = leak.is_none_or(|l| l <= tol.leak);
    let report = provides_transitions(&plan, &t, cfg.r_max())?;

    // Simulate the product: a valid plan reaches every pair at some β,
    // an invalid one keeps the missing overlaps at zero.
    let numeric = if n <= CONFIRM_MAX_QUBITS {
        let reps = plan.repetitions * report.minimal_r.unwrap_or(cfg.r_max().max(1));
        let mats = plan.with_repetitions(reps).string_plan(n, &groups)?.feasible_overlaps_grid(&b, &beta_grid(CONFIRM_GRID))?;
        let confirmed = if report.valid {
            mats.iter().any(|u| u.iter().all(|v| v.norm() > tol.overlap))
        } else {
            mats.iter().all(|u| report.missing.iter().all(|&(j, k)| u[(j, k)].norm() < tol.zero))
        };
        if !confirmed {
            log::warn!("simulation does not confirm the transition verdict");
        }
        Some(json!({ "repetitions": reps, "confirmed": confirmed }))
    } else {
        None
    };

    let value = json!({
        "n": n,
        "m": b.len(),
        "plan": plan.to_json(),
        "preservation": { "structural": true, "max_leak": leak, "preserved": preserved },
        "transitions": {
            "valid": report.valid,
            "minimal_r": report.minimal_r,
            "missing": one_based(&report.missing),
        },
        "numeric": numeric,
    });
    let failure = if !preserved {
        Some(Failure::Validity(format!("plan leaks out of the feasible subspace (max leak {:e})", leak.unwrap_or(0.0))))
    } else if let Some(&(j, k)) = report.missing.first() {
        Some(Failure::Validity(format!(
            "plan does not provide every transition within r_max = {}: first missing pair ({}, {}), {} missing",
            cfg.r_max(),
            j + 1,
            k + 1,
            report.missing.len()
        )))
    } else {
        None
    };
    let verdict = |ok: bool| if ok { "yes" } else { "no" };
    let missing_text = one_based(&report.missing).iter().map(|[j, k]| format!("({j},{k})")).collect::<Vec<_>>().join(" ");
    let text = render(
        cfg.format(),
        &value,
        || {
            format!(
                "preserved,max_leak,valid,minimal_r,missing\n{},{},{},{},{}\n",
                preserved,
                leak.map_or(String::new(), |l| l.to_string()),
                report.valid,
                report.minimal_r.map_or(String::new(), |r| r.to_string()),
                missing_text
            )
        },
        || {
            format!(
                "| check | result |\n|---|---|\n| preserves B | {} |\n| max leak | {} |\n| all transitions | {} |\n| minimal r | {} |\n| missing | {} |\n",
                verdict(preserved),
                leak.map_or("n/a".into(), |l| format!("{l:.1e}")),
                verdict(report.valid),
                report.minimal_r.map_or("-".into(), |r| r.to_string()),
                missing_text
            )
        },
    )?;
    Ok(Artifact { text, failure })
}

fn augment(cfg: &RunConfig, greedy: Option<usize>) -> Result<Artifact> {
    let b = cfg.require_set()?;
    let t = cfg.require_transition(b.len())?;
    let w = b.n_qubits();
    if let Some(k) = greedy {
        let cols = greedy_multi_add(&b, &t, k)?;
        let added = |c: &[(u64, u64)]| {
            c.iter().map(|(a, d)| format!("{{{a:0w$b},{d:0w$b}}}")).collect::<Vec<_>>().join(" ")
        };
        let text = render(
            cfg.format(),
            &serde_json::to_value(&cols)?,
            || {
                let mut out = String::from("pair,cost,added\n");
                for c in &cols {
                    out.push_str(&format!("T{}<->{},{},\"{}\"\n", c.pair.0 + 1, c.pair.1 + 1, c.cost, added(&c.added)));
                }
                out
            },
            || {
                let mut out = String::from("| pair | cost | added |\n|---|---|---|\n");
                for c in &cols {
                    out.push_str(&format!("| T{}<->{} | {} | {} |\n", c.pair.0 + 1, c.pair.1 + 1, c.cost, added(&c.added)));
                }
                out
            },
        )?;
        return Ok(Artifact::ok(text));
    }
    let table = search_pairwise(&b, &t)?;
    log::info!(
        "{} candidates, unaugmented {}, best {}",
        table.rows.len(),
        table.total_unaugmented(),
        table.total_best()
    );
    let mut value = serde_json::to_value(&table)?;
    value["total_unaugmented"] = table.total_unaugmented().into();
    value["total_best"] = table.total_best().into();
    Ok(Artifact::ok(render(cfg.format(), &value, || table.to_csv(), || table.to_markdown())?))
}

fn overlap(cfg: &RunConfig, pair: &[usize], t_max: f64, steps: usize, m: Option<usize>) -> Result<Artifact> {
    let m = match (cfg.feasible_set()?, m) {
        (Some(b), _) => b.len(),
        (None, Some(m)) => m,
        (None, None) => bail!(Failure::Usage("overlap needs a feasible set or --m".into())),
    };
    let t = cfg.require_transition(m)?;
    let &[j, k] = pair else { bail!(Failure::Usage("--pair takes J,K".into())) };
    if j == 0 || k == 0 {
        bail!(Failure::Usage("--pair indices are 1-based".into()));
    }
    let times: Vec<f64> = match steps {
        0 => vec![],
        1 => vec![0.0],
        s => (0..s).map(|i| t_max * i as f64 / (s - 1) as f64).collect(),
    };
    let values = overlap_curve(&t, j - 1, k - 1, &times)?;
    let value = json!({
        "pair": [j, k],
        "t": times,
        "re": values.iter().map(|v| v.re).collect::<Vec<_>>(),
        "im": values.iter().map(|v| v.im).collect::<Vec<_>>(),
        "abs2": values.iter().map(|v| v.norm_sqr()).collect::<Vec<_>>(),
    });
    let text = render(
        cfg.format(),
        &value,
        || overlap_csv(&times, &values),
        || {
            let mut out = String::from("| t | re | im | abs2 |\n|---|---|---|---|\n");
            for (t, v) in times.iter().zip(&values) {
                out.push_str(&format!("| {t} | {} | {} | {} |\n", v.re, v.im, v.norm_sqr()));
            }
            out
        },
    )?;
    Ok(Artifact::ok(text))
}

fn qasm(cfg: &RunConfig, args: &PlanArgs, beta: f64) -> Result<Artifact> {
    let Resolved { b, plan, groups, .. } = resolve_plan(cfg, args)?;
    let gates = emit_plan(&plan, b.n_qubits(), &groups, beta)?;
    log::info!("{} gates, {} cx", gates.gates.len(), gates.cx_count());
    let text = gates.to_qasm();
    Ok(Artifact::ok(match cfg.common.format {
        None => text,
        Some(Format::Json) => {
            let v = json!({ "qasm": text, "cx_count": gates.cx_count(), "gate_count": gates.gates.len() });
            serde_json::to_string_pretty(&v)? + "\n"
        }
        Some(f) => bail!(Failure::Usage(format!("qasm output is QASM text or json, not {f:?}"))),
    }))
}

fn tables(cfg: &RunConfig, which: &str, check: bool) -> Result<Artifact> {
    let ids: Vec<(String, TableId)> = if which == "all" {
        ["t2", "t3", "t4", "t5", "fig6", "fig9"].iter().map(|s| (s.to_string(), s.parse().unwrap())).collect()
    } else {
        which
            .split(',')
            .map(|s| Ok((s.to_string(), s.parse::<TableId>().map_err(|e| Failure::Usage(e.to_string()))?)))
            .collect::<Result<_>>()?
    };
    let mut value = serde_json::Map::new();
    let (mut csv, mut md) = (Vec::new(), Vec::new());
    let mut diffs = Vec::new();
    for (name, id) in ids {
        let (grid, data, mismatches) = generate(id, cfg.seed())?;
        csv.push(grid.to_csv());
        md.push(format!("## {name}\n\n{}", grid.to_markdown()));
        for m in &mismatches {
            diffs.push(format!("{name} {}: expected {}, got {}", m.cell, m.expected, m.got));
        }
        value.insert(name, json!({ "data": data, "mismatches": mismatches }));
    }
    let text = render(cfg.format(), &Value::Object(value), || csv.join("\n"), || md.join("\n"))?;
    let failure = if check && !diffs.is_empty() {
        Some(Failure::Mismatch(format!("{} cell(s) differ from the reference:\n  {}", diffs.len(), diffs.join("\n  "))))
    } else {
        None
    };
    Ok(Artifact { text, failure })
}

fn parse_kind(kind: &str) -> Result<InitialKind> {
    Ok(match kind.split_once(':') {
        None if kind == "uniform" => InitialKind::Uniform,
        None if kind == "w_state" => InitialKind::WState,
        Some(("sine", k)) => InitialKind::DeltaSine(
            k.parse().map_err(|_| Failure::Usage(format!("bad sine mode {k:?}")))?,
        ),
        _ => bail!(Failure::Usage(format!("unknown initial state {kind:?}"))),
    })
}

fn init_state(cfg: &RunConfig, kind: &str) -> Result<Artifact> {
    let b = cfg.require_set()?;
    let psi = feasible_initial_state(&b, parse_kind(kind)?)?;
    let eigen = match cfg.transition(b.len())? {
        Some(t) => {
            let h = flatten(b.n_qubits(), &recursive_decompose(&b, &t)?);
            let (lambda, residual) = eigen_residual(&h, &psi);
            Some(json!({ "lambda": lambda, "residual": residual }))
        }
        None => None,
    };
    let labels = b.labels();
    let amps: Vec<_> = b.states().iter().map(|&s| psi[s as usize]).collect();
    let value = json!({
        "n": b.n_qubits(),
        "kind": kind,
        "amplitudes": labels.iter().zip(&amps).map(|(l, a)| json!({ "state": l, "re": a.re, "im": a.im })).collect::<Vec<_>>(),
        "eigen": eigen,
    });
    let text = render(
        cfg.format(),
        &value,
        || {
            let mut out = String::from("state,re,im\n");
            for (l, a) in labels.iter().zip(&amps) {
                out.push_str(&format!("{l},{},{}\n", a.re, a.im));
            }
            out
        },
        || {
            let mut out = String::from("| state | amplitude |\n|---|---|\n");
            for (l, a) in labels.iter().zip(&amps) {
                out.push_str(&format!("| {l} | {} |\n", a.re));
            }
            out
        },
    )?;
    Ok(Artifact::ok(text))
}
