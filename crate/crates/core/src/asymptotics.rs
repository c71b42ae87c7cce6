//! Large-k closed forms: the B-equation for B = bσ, the asymptotic σ and E,
//! and deviation measurements against the exact sums.

use crate::error::{Error, Result, Warned, Warning};
use crate::parastat::{e1_exact, solve_sigma, ParastatParams};
use crate::solve::SolveConfig;

/// Which dropped-term order the asymptotic σ keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrectionOrder {
    /// The printed closed form: ln(k/κ+1) − e^{−Bκ}.
    AsPrinted,
    /// Additionally subtracts the next exponential order,
    /// ½(e^{−2Bκ} − e^{−2B(k+κ)}), so tests can measure what was dropped.
    NextExponential,
}

/// Solve B = ln(k/κ + 1) − e^{−Bκ} from the seed B₀ = ln(k/κ + 1).
///
/// The map descends monotonically onto the attracting root. When the equation
/// has no real root (possible once ln(k/κ+1) < (ln κ + 1)/κ, deep inside the
/// sub-unity regime), the uncorrected seed is returned, flagged with a
/// RegimeViolation warning; B < 1 also attaches that warning.
pub fn solve_b_sigma(k: u32, kappa: f64, cfg: &SolveConfig) -> Result<Warned<f64>> {
    cfg.validate()?;
    if k < 2 {
        return Err(Error::InvalidInput { reason: "asymptotic forms need k >= 2".into() });
    }
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::InvalidInput {
            reason: format!("kappa must be positive here, got {kappa}"),
        });
    }
    let l = (k as f64 / kappa + 1.0).ln();
    // Existence: min over B of [B − ln(k/κ+1) + e^{−Bκ}] sits at B = ln(κ)/κ;
    // a root requires L ≥ (ln κ + 1)/κ.
    if l < (kappa.ln() + 1.0) / kappa {
        return Ok(Warned::with(l, vec![Warning::RegimeViolation { b_sigma: l }]));
    }
    let mut b = l;
    let mut done = false;
    for _ in 0..cfg.max_iter {
        let arg = -b * kappa;
        if arg > 700.0 {
            // Diverging below any root; treat like the no-root branch.
            return Ok(Warned::with(l, vec![Warning::RegimeViolation { b_sigma: l }]));
        }
        let next = (1.0 - cfg.damping) * b + cfg.damping * (l - arg.exp());
        if cfg.converged(b, next) {
            b = next;
            done = true;
            break;
        }
        b = next;
    }
    if !done {
        return Err(Error::NoConvergence { iterations: cfg.max_iter, last: b });
    }
    let mut out = Warned::new(b);
    if b < 1.0 {
        out.push(Warning::RegimeViolation { b_sigma: b });
    }
    Ok(out)
}

/// Asymptotic total: σ ≈ (1/b)[ln(k/κ + 1) − e^{−Bκ}].
pub fn sigma_asym(b: f64, kappa: f64, k: u32) -> Result<Warned<f64>> {
    sigma_asym_with(b, kappa, k, CorrectionOrder::AsPrinted, &SolveConfig::default())
}

/// `sigma_asym` with an explicit correction order and solver config.
pub fn sigma_asym_with(
    b: f64,
    kappa: f64,
    k: u32,
    order: CorrectionOrder,
    cfg: &SolveConfig,
) -> Result<Warned<f64>> {
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::InvalidInput { reason: format!("b must be positive, got {b}") });
    }
    let root = solve_b_sigma(k, kappa, cfg)?;
    let l = (k as f64 / kappa + 1.0).ln();
    let mut value = (l - (-root.value * kappa).exp()) / b;
    if order == CorrectionOrder::NextExponential {
        let tail = |x: f64| if x > 700.0 { 0.0 } else { (-x).exp() };
        value -= 0.5 * (tail(2.0 * root.value * kappa) - tail(2.0 * root.value * (k as f64 + kappa))) / b;
    }
    Ok(Warned::with(value, root.warnings))
}

/// Asymptotic payoff total in its two printed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyAsym {
    /// Simplified form (k+κ+1)B − k + κe^{−Bκ}, all over b.
    pub value: f64,
    /// Unsimplified form with B replaced by ln(k/κ+1) − e^{−Bκ}. Identical to
    /// `value` up to the B-equation residual.
    pub unsimplified: f64,
    /// The B root both forms share.
    pub b_sigma: f64,
}

/// Asymptotic E at (b, κ, k).
pub fn e_asym(b: f64, kappa: f64, k: u32) -> Result<Warned<EnergyAsym>> {
    e_asym_with(b, kappa, k, &SolveConfig::default())
}

pub fn e_asym_with(b: f64, kappa: f64, k: u32, cfg: &SolveConfig) -> Result<Warned<EnergyAsym>> {
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::InvalidInput { reason: format!("b must be positive, got {b}") });
    }
    let root = solve_b_sigma(k, kappa, cfg)?;
    let big_b = root.value;
    let kf = k as f64;
    let l = (kf / kappa + 1.0).ln();
    let damp = (-big_b * kappa).exp();
    let value = ((kf + kappa + 1.0) * big_b - kf + kappa * damp) / b;
    let unsimplified = ((kf + kappa + 1.0) * (l - damp) - kf + kappa * damp) / b;
    Ok(Warned::with(EnergyAsym { value, unsimplified, b_sigma: big_b }, root.warnings))
}

/// Exact-vs-asymptotic deviations at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticResult {
    pub sigma_exact: f64,
    pub sigma_asym: f64,
    pub e_exact: f64,
    pub e_asym: f64,
    pub b_sigma: f64,
    /// |σ_exact − σ_asym| / σ_exact.
    pub sigma_deviation: f64,
    /// |E_exact − E_asym| / E_exact.
    pub e_deviation: f64,
}

/// Solve the exact sums and the asymptotic forms side by side.
pub fn asymptotic_vs_exact(
    b: f64,
    kappa: f64,
    k: u32,
    cfg: &SolveConfig,
) -> Result<Warned<AsymptoticResult>> {
    let p = ParastatParams::new(b, kappa, k)?;
    let sigma_exact = solve_sigma(&p, cfg)?;
    let e_exact = (k as f64 + 1.0) * sigma_exact - e1_exact(sigma_exact, &p);
    let sa = sigma_asym_with(b, kappa, k, CorrectionOrder::AsPrinted, cfg)?;
    let ea = e_asym_with(b, kappa, k, cfg)?;
    let mut warnings = sa.warnings;
    for w in ea.warnings {
        if !warnings.contains(&w) {
            warnings.push(w);
        }
    }
    let result = AsymptoticResult {
        sigma_exact,
        sigma_asym: sa.value,
        e_exact,
        e_asym: ea.value.value,
        b_sigma: ea.value.b_sigma,
        sigma_deviation: (sigma_exact - sa.value).abs() / sigma_exact.abs(),
        e_deviation: (e_exact - ea.value.value).abs() / e_exact.abs(),
    };
    Ok(Warned::with(result, warnings))
}
