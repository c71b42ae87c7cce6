//! Critical-debt computations: the entropy-maximum value, the κ=0
//! chemical-potential value, the aggregate-based velocity path, solvency
//! verdicts, and trajectory diagnostics near the critical point.

use crate::error::{Error, Result, Warned, Warning};
use crate::quad::euler_maclaurin_integral;
use crate::solve::SolveConfig;

/// Entropy normalization constant 2√6 (dimension-2 value).
pub const K_CONST: f64 = 4.898979485566356196394568149411782784;

/// Solvency classification relative to the critical debt.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Solvent,
    Bankrupt,
    Indeterminate,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Solvent => write!(f, "Solvent"),
            Verdict::Bankrupt => write!(f, "Bankrupt"),
            Verdict::Indeterminate => write!(f, "Indeterminate"),
        }
    }
}

/// Entropy S = 2√6·[−k + kB²e^{−B} − e^{−Bκ}B²κ²].
///
/// `v` does not appear explicitly (velocity enters through B = σ/V); it is
/// validated for interface uniformity with the critical-value operations.
pub fn entropy(v: f64, k: u32, b_sigma: f64, kappa: f64) -> Result<Warned<f64>> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::InvalidInput { reason: format!("V must be positive, got {v}") });
    }
    if k < 2 {
        return Err(Error::InvalidInput { reason: "entropy needs k >= 2".into() });
    }
    if !(kappa >= 0.0 && kappa.is_finite()) || !b_sigma.is_finite() {
        return Err(Error::InvalidInput {
            reason: format!("bad entropy arguments B={b_sigma}, kappa={kappa}"),
        });
    }
    let b = b_sigma;
    let kf = k as f64;
    let s = K_CONST * (-kf + kf * b * b * (-b).exp() - (-b * kappa).exp() * b * b * kappa * kappa);
    let mut out = Warned::new(s);
    if b < 1.0 {
        out.push(Warning::RegimeViolation { b_sigma: b });
    }
    Ok(out)
}

/// Critical σ₀ with its leading-order simplification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalSigma {
    /// V·(ln k − 1/k), the corrected entropy-maximum value.
    pub value: f64,
    /// V·ln k, the leading term.
    pub leading_order: f64,
}

/// Entropy-maximum critical debt: σ₀ = V·(ln k − 1/k).
pub fn critical_sigma_entropy(k: u32, v: f64) -> Result<Warned<CriticalSigma>> {
    if k < 2 {
        return Err(Error::InvalidInput { reason: "critical value needs k >= 2".into() });
    }
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::InvalidInput { reason: format!("V must be positive, got {v}") });
    }
    let kf = k as f64;
    let value = v * (kf.ln() - 1.0 / kf);
    let mut out = Warned::new(CriticalSigma { value, leading_order: v * kf.ln() });
    if k < 10 {
        out.push(Warning::SmallK { k });
    }
    Ok(out)
}

/// Chemical-potential critical debt: solves the κ=0 self-consistency
/// σ₀ = V·∫₁ᵏ [1 − B₀x·e^{−B₀x}]·dx/x with B₀ = σ₀/V, by fixed-point
/// iteration over B₀ seeded with ln k.
pub fn critical_sigma_chempot(k: u32, v: f64, cfg: &SolveConfig) -> Result<f64> {
    cfg.validate()?;
    if k < 2 {
        return Err(Error::InvalidInput { reason: "critical value needs k >= 2".into() });
    }
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::InvalidInput { reason: format!("V must be positive, got {v}") });
    }
    let kf = k as f64;
    let mut b0 = kf.ln();
    for _ in 0..cfg.max_iter {
        let b = b0;
        let integrand = move |x: f64| {
            let bx = b * x;
            if bx > 700.0 {
                1.0 / x
            } else {
                (1.0 - bx * (-bx).exp()) / x
            }
        };
        let next_raw = euler_maclaurin_integral(integrand, 1.0, kf, 0)?;
        let next = (1.0 - cfg.damping) * b0 + cfg.damping * next_raw;
        if cfg.converged(b0, next) {
            return Ok(v * next);
        }
        b0 = next;
    }
    Err(Error::NoConvergence { iterations: cfg.max_iter, last: v * b0 })
}

/// Velocity and critical debt from observed aggregates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateCritical {
    /// V = (E − kσ)/k.
    pub v: f64,
    /// σ₀ = V·ln k.
    pub sigma0: f64,
}

/// V = (E − kσ)/k and σ₀ = V·ln k, the explicit aggregate formulas.
pub fn critical_from_aggregates(e_total: f64, sigma: f64, k: u32) -> Result<AggregateCritical> {
    if k < 2 {
        return Err(Error::InvalidInput { reason: "aggregate path needs k >= 2".into() });
    }
    if !(e_total.is_finite() && sigma.is_finite()) {
        return Err(Error::InvalidInput {
            reason: format!("aggregates must be finite, got E={e_total}, sigma={sigma}"),
        });
    }
    let kf = k as f64;
    let v = (e_total - kf * sigma) / kf;
    if v <= 0.0 {
        return Err(Error::NonPositiveVelocity { velocity: v });
    }
    Ok(AggregateCritical { v, sigma0: v * kf.ln() })
}

/// Compare σ to σ₀ within a relative tolerance band.
///
/// Assumes σ₀ > 0 and rtol ≥ 0.
pub fn solvency_verdict(sigma: f64, sigma0: f64, rtol: f64) -> Verdict {
    if sigma > sigma0 * (1.0 + rtol) {
        Verdict::Bankrupt
    } else if sigma < sigma0 * (1.0 - rtol) {
        Verdict::Solvent
    } else {
        Verdict::Indeterminate
    }
}

/// One observed system state along a trajectory toward (or away from) the
/// critical point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryState {
    pub sigma: f64,
    pub v: f64,
    pub k: f64,
    pub kappa: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FinalState {
    /// κ ≈ 0 and V ≈ 0: circulation has stopped.
    CriticalReached,
    /// κ ≈ 0 and the ln k₀ = σ₀/V₀ balance holds, but V is still positive.
    CriticalCandidate,
    NotCritical,
}

/// Per-trajectory diagnostics report.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    /// |ln k − σ/V| per state; None where V = 0 makes the balance undefined.
    pub residuals: Vec<Option<f64>>,
    /// True when κ, V, and 1/ln k all strictly decrease over the trailing
    /// three states.
    pub approaching: bool,
    pub final_state: FinalState,
}

const KAPPA_TOL: f64 = 1e-6;
const V_TOL: f64 = 1e-6;

/// Scan a chronological trajectory for approach to the critical point.
pub fn critical_point_diagnostics(trajectory: &[TrajectoryState]) -> Result<Diagnostics> {
    if trajectory.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    for (i, s) in trajectory.iter().enumerate() {
        if !(s.k > 0.0 && s.k.is_finite())
            || !(s.v >= 0.0 && s.v.is_finite())
            || !(s.kappa >= 0.0 && s.kappa.is_finite())
            || !s.sigma.is_finite()
        {
            return Err(Error::InvalidInput { reason: format!("bad trajectory state at index {i}") });
        }
    }
    let residuals: Vec<Option<f64>> = trajectory
        .iter()
        .map(|s| (s.v > 0.0).then(|| (s.k.ln() - s.sigma / s.v).abs()))
        .collect();

    let approaching = trajectory.len() >= 3 && {
        let w = &trajectory[trajectory.len() - 3..];
        w.windows(2).all(|p| {
            p[1].kappa < p[0].kappa && p[1].v < p[0].v && p[1].k > p[0].k && p[0].k > 1.0
        })
    };

    let last = trajectory.last().unwrap();
    let final_state = if last.kappa <= KAPPA_TOL && last.v <= V_TOL {
        FinalState::CriticalReached
    } else if last.kappa <= KAPPA_TOL
        && residuals
            .last()
            .unwrap()
            .map(|r| r <= 0.01 * last.k.ln().abs().max(f64::EPSILON))
            .unwrap_or(false)
    {
        FinalState::CriticalCandidate
    } else {
        FinalState::NotCritical
    };

    Ok(Diagnostics { residuals, approaching, final_state })
}

/// Full critical analysis from aggregates: both σ₀ methods evaluated at the
/// aggregate-derived velocity, their coincidence gap, and the verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalReport {
    pub v: f64,
    pub k_const: f64,
    /// σ₀ = V·ln k from the aggregate formulas (the leading order).
    pub sigma0_aggregates: f64,
    /// σ₀ = V·(ln k − 1/k) from the entropy maximum.
    pub sigma0_entropy: f64,
    /// σ₀ from the κ=0 chemical-potential integral.
    pub sigma0_chempot: f64,
    /// |σ₀^(S) − σ₀^(κ)|/V, the two-method gap in B units.
    pub coincidence_gap: f64,
    /// Verdict of σ against the entropy-method σ₀.
    pub verdict: Verdict,
}

/// Run the aggregate path end to end: velocity, both σ₀ methods, gap, verdict.
pub fn aggregate_report(
    e_total: f64,
    sigma: f64,
    k: u32,
    cfg: &SolveConfig,
    rtol: f64,
) -> Result<Warned<CriticalReport>> {
    let agg = critical_from_aggregates(e_total, sigma, k)?;
    let ent = critical_sigma_entropy(k, agg.v)?;
    let chempot = critical_sigma_chempot(k, agg.v, cfg)?;
    let gap = (ent.value.value - chempot).abs() / agg.v;
    let verdict = solvency_verdict(sigma, ent.value.value, rtol);
    let report = CriticalReport {
        v: agg.v,
        k_const: K_CONST,
        sigma0_aggregates: agg.sigma0,
        sigma0_entropy: ent.value.value,
        sigma0_chempot: chempot,
        coincidence_gap: gap,
        verdict,
    };
    Ok(Warned::with(report, ent.warnings))
}
