//! Command implementations: each builds one report tree with the fixed
//! top-level keys input / normalized / fit / critical / verdict / warnings.

use crate::args::{Command, GlobalOpts, Sweep};
use crate::report::num;
use debtcrit::critical::{aggregate_report, critical_from_aggregates, critical_sigma_chempot,
    critical_sigma_entropy, solvency_verdict, K_CONST};
use debtcrit::fractional::{critical_sigma_frac, f_alpha, velocity_from_energy, EnergyLaw};
use debtcrit::maturity::{mixed_aggregates, mixed_critical, short_dominant_approx, MixedPortfolio};
use debtcrit::parastat::fit_params;
use debtcrit::portfolio::{normalize, parse_csv};
use debtcrit::{Error, Result, SolveConfig, Warning};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

pub fn solve_config(opts: &GlobalOpts) -> Result<SolveConfig> {
    let cfg = SolveConfig { tol: opts.tol, max_iter: opts.max_iter, damping: 1.0 };
    cfg.validate()?;
    if !(opts.rtol >= 0.0 && opts.rtol.is_finite()) {
        return Err(Error::InvalidInput { reason: "rtol must be finite and non-negative".into() });
    }
    if opts.dimension != 2.0 && !(opts.dimension > 1.0 && opts.dimension < 2.0) {
        return Err(Error::InvalidInput {
            reason: format!("dimension must be 2 or inside (1, 2), got {}", opts.dimension),
        });
    }
    if opts.grid_resolution == 0 {
        return Err(Error::InvalidInput { reason: "grid-resolution must be at least 1".into() });
    }
    Ok(cfg)
}

fn config_echo(opts: &GlobalOpts) -> Value {
    json!({
        "dimension": num(opts.dimension),
        "tol": num(opts.tol),
        "max_iter": opts.max_iter,
        "rtol": num(opts.rtol),
        "grid_resolution": opts.grid_resolution,
    })
}

fn push_unique(warnings: &mut Vec<String>, w: &Warning) {
    let s = w.to_string();
    if !warnings.contains(&s) {
        warnings.push(s);
    }
}

/// Dispatch a parsed command to one report per input (analyze yields one
/// report per CSV file; every other command yields exactly one).
pub fn run_command(command: &Command, opts: &GlobalOpts) -> Result<Vec<Value>> {
    let cfg = solve_config(opts)?;
    match command {
        Command::Analyze { paths } => run_analyze(paths, opts, &cfg),
        Command::Critical { e_total, sigma, k } => {
            Ok(vec![cmd_critical(*e_total, *sigma, *k, opts, &cfg)?])
        }
        Command::Fractional { alpha, velocity, energy, k, sweep } => {
            Ok(vec![cmd_fractional(*alpha, *velocity, *energy, *k, *sweep, opts, &cfg)?])
        }
        Command::Mix { m, n, s1, s2, l1, l2, velocity } => {
            Ok(vec![cmd_mix(*m, *n, *s1, *s2, *l1, *l2, *velocity, opts, &cfg)?])
        }
    }
}

fn run_analyze(paths: &[PathBuf], opts: &GlobalOpts, cfg: &SolveConfig) -> Result<Vec<Value>> {
    let jobs = opts.jobs.max(1).min(paths.len().max(1));
    if jobs == 1 {
        return paths.iter().map(|p| cmd_analyze(p, opts, cfg)).collect();
    }
    // Files are independent; shard them round-robin across scoped workers
    // and reassemble in input order.
    let mut slots: Vec<Option<Result<Value>>> = Vec::new();
    slots.resize_with(paths.len(), || None);
    let slot_refs: Vec<(usize, &PathBuf)> = paths.iter().enumerate().collect();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for chunk in 0..jobs {
            let work: Vec<(usize, &PathBuf)> =
                slot_refs.iter().filter(|(i, _)| i % jobs == chunk).cloned().collect();
            handles.push(scope.spawn(move || {
                work.into_iter()
                    .map(|(i, path)| (i, cmd_analyze(path, opts, cfg)))
                    .collect::<Vec<_>>()
            }));
        }
        for handle in handles {
            for (i, result) in handle.join().expect("analysis worker panicked") {
                slots[i] = Some(result);
            }
        }
    });
    slots.into_iter().map(|r| r.expect("every file sharded")).collect()
}

fn cmd_analyze(path: &Path, opts: &GlobalOpts, cfg: &SolveConfig) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    let debts = parse_csv(&text)?;
    let book = normalize(&debts, opts.grid_resolution)?;
    let mut warnings: Vec<String> = Vec::new();
    if book.k < 10 {
        push_unique(&mut warnings, &Warning::SmallK { k: book.k });
    }

    let normalized = json!({
        "k": book.k,
        "s_hat": num(book.s_hat),
        "sigma": num(book.sigma),
        "e_total": num(book.e_total),
        "e1": num(book.e1),
    });

    let (fit_section, critical_section, verdict) =
        match fit_params(book.sigma, book.e_total, book.k, cfg) {
            Ok(fit) => {
                let fit_section = json!({
                    "b": num(fit.params.b),
                    "kappa": num(fit.params.kappa),
                    "b_sigma": num(fit.b_sigma),
                    "sigma_residual": num(fit.sigma_residual),
                    "e_residual": num(fit.e_residual),
                    "iterations": fit.iterations,
                });
                let (critical, verdict) = if opts.dimension == 2.0 {
                    analyze_critical_flat(&book, fit.params.b, opts, cfg, &mut warnings)?
                } else {
                    analyze_critical_fractional(&book, opts.dimension / 2.0, opts)?
                };
                (fit_section, critical, verdict)
            }
            Err(err) => {
                push_unique(
                    &mut warnings,
                    &Warning::Degraded { what: format!("parameter fit unavailable: {err}") },
                );
                (Value::Null, Value::Null, Value::Null)
            }
        };

    Ok(json!({
        "input": {
            "command": "analyze",
            "args": {"path": path.display().to_string(), "records": debts.len()},
            "config": config_echo(opts),
        },
        "normalized": normalized,
        "fit": fit_section,
        "critical": critical_section,
        "verdict": verdict,
        "warnings": warnings,
    }))
}

/// Flat-dimension critical step at the fitted stiffness: the velocity in
/// normalized units is the reciprocal of b.
fn analyze_critical_flat(
    book: &debtcrit::portfolio::NormalizedPortfolio,
    b_fit: f64,
    opts: &GlobalOpts,
    cfg: &SolveConfig,
    warnings: &mut Vec<String>,
) -> Result<(Value, Value)> {
    let v = 1.0 / b_fit;

    // The aggregate-difference velocity needs E > kσ, which normalized books
    // sit below by construction; report it when available, degrade otherwise.
    let sigma0_aggregates = match critical_from_aggregates(book.e_total, book.sigma, book.k) {
        Ok(agg) => num(agg.sigma0),
        Err(err) => {
            push_unique(
                warnings,
                &Warning::Degraded { what: format!("aggregate velocity route unavailable: {err}") },
            );
            Value::Null
        }
    };

    let ent = critical_sigma_entropy(book.k, v)?;
    for w in &ent.warnings {
        push_unique(warnings, w);
    }
    let (sigma0_chempot, gap) = match critical_sigma_chempot(book.k, v, cfg) {
        Ok(chempot) => (num(chempot), num((ent.value.value - chempot).abs() / v)),
        Err(err) => {
            push_unique(
                warnings,
                &Warning::Degraded { what: format!("chemical-potential route unavailable: {err}") },
            );
            (Value::Null, Value::Null)
        }
    };

    let verdict = solvency_verdict(book.sigma, ent.value.value, opts.rtol);
    let critical = json!({
        "v": num(v),
        "k_const": num(K_CONST),
        "sigma0_aggregates": sigma0_aggregates,
        "sigma0_entropy": num(ent.value.value),
        "sigma0_chempot": sigma0_chempot,
        "coincidence_gap": gap,
    });
    Ok((critical, Value::String(verdict.to_string())))
}

fn analyze_critical_fractional(
    book: &debtcrit::portfolio::NormalizedPortfolio,
    alpha: f64,
    opts: &GlobalOpts,
) -> Result<(Value, Value)> {
    let v = velocity_from_energy(book.e_total, alpha)?;
    let sigma0 = critical_sigma_frac(alpha, v)?;
    let verdict = solvency_verdict(book.sigma, sigma0, opts.rtol);
    let critical = json!({
        "alpha": num(alpha),
        "f_alpha": num(f_alpha(alpha)?),
        "v": num(v),
        "sigma0": num(sigma0),
    });
    Ok((critical, Value::String(verdict.to_string())))
}

fn cmd_critical(
    e_total: f64,
    sigma: f64,
    k: u32,
    opts: &GlobalOpts,
    cfg: &SolveConfig,
) -> Result<Value> {
    let report = aggregate_report(e_total, sigma, k, cfg, opts.rtol)?;
    let mut warnings = Vec::new();
    for w in &report.warnings {
        push_unique(&mut warnings, w);
    }
    let r = report.value;
    Ok(json!({
        "input": {
            "command": "critical",
            "args": {"e_total": num(e_total), "sigma": num(sigma), "k": k},
            "config": config_echo(opts),
        },
        "normalized": Value::Null,
        "fit": Value::Null,
        "critical": {
            "v": num(r.v),
            "k_const": num(r.k_const),
            "sigma0_aggregates": num(r.sigma0_aggregates),
            "sigma0_entropy": num(r.sigma0_entropy),
            "sigma0_chempot": num(r.sigma0_chempot),
            "coincidence_gap": num(r.coincidence_gap),
        },
        "verdict": r.verdict.to_string(),
        "warnings": warnings,
    }))
}

#[allow(clippy::too_many_arguments)]
fn cmd_fractional(
    alpha: Option<f64>,
    velocity: Option<f64>,
    energy: Option<f64>,
    k: Option<u32>,
    sweep: Option<Sweep>,
    opts: &GlobalOpts,
    _cfg: &SolveConfig,
) -> Result<Value> {
    let alpha = match alpha {
        Some(a) => a,
        None if opts.dimension != 2.0 => opts.dimension / 2.0,
        None => {
            return Err(Error::InvalidInput {
                reason: "pass --alpha, or --dimension inside (1, 2)".into(),
            })
        }
    };
    let (v, e_total) = match (velocity, energy) {
        (Some(v), None) => (v, EnergyLaw::from_velocity(alpha, v)?.e_total),
        (None, Some(e)) => (velocity_from_energy(e, alpha)?, e),
        (Some(_), Some(_)) => {
            return Err(Error::InvalidInput {
                reason: "pass either --velocity or --energy, not both".into(),
            })
        }
        (None, None) => {
            return Err(Error::InvalidInput { reason: "pass --velocity or --energy".into() })
        }
    };
    let sigma0 = critical_sigma_frac(alpha, v)?;

    let sweep_section = match sweep {
        None => Value::Null,
        Some(s) => {
            // The given observable (V or E) is held fixed across the table.
            let hold_velocity = velocity.is_some();
            let mut rows = Vec::new();
            let mut i = 0u32;
            loop {
                let a = s.start + f64::from(i) * s.step;
                if a > s.end + 1e-9 * s.step {
                    break;
                }
                rows.push(sweep_row(a, v, e_total, hold_velocity));
                i += 1;
            }
            Value::Array(rows)
        }
    };

    Ok(json!({
        "input": {
            "command": "fractional",
            "args": {
                "alpha": num(alpha),
                "velocity": velocity.map(num).unwrap_or(Value::Null),
                "energy": energy.map(num).unwrap_or(Value::Null),
                "k": k.map(Value::from).unwrap_or(Value::Null),
            },
            "config": config_echo(opts),
        },
        "normalized": Value::Null,
        "fit": Value::Null,
        "critical": {
            "alpha": num(alpha),
            "f_alpha": num(f_alpha(alpha)?),
            "v": num(v),
            "e_total": num(e_total),
            "sigma0": num(sigma0),
            "sweep": sweep_section,
        },
        "verdict": Value::Null,
        "warnings": [],
    }))
}

/// One sweep-table entry; fields the α-window rules out render as null.
fn sweep_row(alpha: f64, v_fixed: f64, e_fixed: f64, hold_velocity: bool) -> Value {
    let f = f_alpha(alpha).ok();
    let (v, e_total) = if hold_velocity {
        let e = EnergyLaw::from_velocity(alpha, v_fixed).ok().map(|l| l.e_total);
        (Some(v_fixed), e)
    } else {
        (velocity_from_energy(e_fixed, alpha).ok(), Some(e_fixed))
    };
    let sigma0 = v.and_then(|v| critical_sigma_frac(alpha, v).ok());
    json!({
        "alpha": num(alpha),
        "f_alpha": f.map(num).unwrap_or(Value::Null),
        "v": v.map(num).unwrap_or(Value::Null),
        "e_total": e_total.map(num).unwrap_or(Value::Null),
        "sigma0": sigma0.map(num).unwrap_or(Value::Null),
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_mix(
    m: u32,
    n: u32,
    s1: f64,
    s2: f64,
    l1: f64,
    l2: f64,
    velocity: Option<f64>,
    opts: &GlobalOpts,
    _cfg: &SolveConfig,
) -> Result<Value> {
    let p = MixedPortfolio::new(m, n, s1, s2, l1, l2)?;
    let (sigma, e_total) = mixed_aggregates(&p);
    let v = velocity.unwrap_or(e_total / f64::from(p.k()));
    let exact = mixed_critical(m, n, v)?;
    let mut warnings = Vec::new();
    for w in &exact.warnings {
        push_unique(&mut warnings, w);
    }

    let approx = match short_dominant_approx(&p) {
        Ok(a) => {
            for w in &a.warnings {
                push_unique(&mut warnings, w);
            }
            json!({
                "v": num(a.value.v),
                "sigma0": num(a.value.sigma0),
                "validity": num(a.value.validity),
            })
        }
        Err(err) => {
            push_unique(
                &mut warnings,
                &Warning::Degraded { what: format!("short-dominant route unavailable: {err}") },
            );
            Value::Null
        }
    };

    let verdict = solvency_verdict(sigma, exact.value, opts.rtol);
    Ok(json!({
        "input": {
            "command": "mix",
            "args": {
                "m": m, "n": n,
                "s1": num(s1), "s2": num(s2),
                "l1": num(l1), "l2": num(l2),
                "velocity": velocity.map(num).unwrap_or(Value::Null),
            },
            "config": config_echo(opts),
        },
        "normalized": Value::Null,
        "fit": Value::Null,
        "critical": {
            "sigma": num(sigma),
            "e_total": num(e_total),
            "v": num(v),
            "sigma0": num(exact.value),
            "short_dominant": approx,
        },
        "verdict": verdict.to_string(),
        "warnings": warnings,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::Format;

    fn opts() -> GlobalOpts {
        GlobalOpts {
            dimension: 2.0,
            tol: 1e-10,
            max_iter: 10_000,
            rtol: 0.01,
            grid_resolution: 1,
            format: Format::Text,
            jobs: 1,
        }
    }

    #[test]
    fn critical_report_carries_both_routes() {
        let cfg = solve_config(&opts()).unwrap();
        let r = cmd_critical(2000.0, 10.0, 100, &opts(), &cfg).unwrap();
        assert_eq!(r["critical"]["v"], serde_json::json!(10.0));
        assert_eq!(r["verdict"], serde_json::json!("Solvent"));
        let keys: Vec<&String> = r.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["input", "normalized", "fit", "critical", "verdict", "warnings"]);
    }

    #[test]
    fn fractional_example_value() {
        let cfg = solve_config(&opts()).unwrap();
        let r = cmd_fractional(Some(0.75), Some(4.0), None, None, None, &opts(), &cfg).unwrap();
        assert_eq!(r["critical"]["sigma0"], serde_json::json!(12.0));
    }

    #[test]
    fn fractional_rejects_lambda_point() {
        let cfg = solve_config(&opts()).unwrap();
        let err = cmd_fractional(Some(1.0), Some(4.0), None, None, None, &opts(), &cfg);
        assert!(matches!(err, Err(Error::DomainError { .. })));
    }

    #[test]
    fn sweep_holds_the_given_observable() {
        let cfg = solve_config(&opts()).unwrap();
        let s = Sweep { start: 0.55, end: 0.95, step: 0.05 };
        let r = cmd_fractional(Some(0.75), None, Some(32.0), None, Some(s), &opts(), &cfg)
            .unwrap();
        let rows = r["critical"]["sweep"].as_array().unwrap();
        assert_eq!(rows.len(), 9);
        for row in rows {
            assert_eq!(row["e_total"], serde_json::json!(32.0));
        }
    }

    #[test]
    fn dimension_window_is_validated() {
        let mut o = opts();
        o.dimension = 3.0;
        assert!(matches!(solve_config(&o), Err(Error::InvalidInput { .. })));
        o.dimension = 1.5;
        assert!(solve_config(&o).is_ok());
    }
}
