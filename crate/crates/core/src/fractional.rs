//! Fractal-dimension case 1 < d < 2 (α = d/2): the weighted occupation sum,
//! the κ=0 critical integral with its printed expansion, the closed form
//! σ₀ = αV/(1−α), and the energy law E = f(α)V^{1+α}.

pub use crate::special::{gamma_fn, zeta_fn};

use crate::error::{Error, Result};
use crate::parastat::ParastatParams;
use crate::quad::euler_maclaurin_integral;
use crate::solve::SolveConfig;
use crate::sum::neumaier_sum;

/// Fractal dimension of the economic system, with α = d/2.
///
/// d = 2 is the singular boundary handled by the standard modules; this type
/// only admits the strict interior 1 < d < 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dimension {
    pub d: f64,
    pub alpha: f64,
    /// Gap below the boundary: δ = 2 − d.
    pub delta: f64,
}

impl Dimension {
    pub fn new(d: f64) -> Result<Self> {
        if !(d > 1.0 && d < 2.0) {
            return Err(Error::DomainError {
                reason: format!("dimension must satisfy 1 < d < 2, got {d}"),
            });
        }
        Ok(Dimension { d, alpha: d / 2.0, delta: 2.0 - d })
    }
}

// Critical-value operations work on α ∈ [0.5, 1): the lower boundary is
// admitted (the formulas are regular there) while α = 1 diverges.
fn check_alpha_critical(alpha: f64) -> Result<()> {
    if !(alpha >= 0.5 && alpha < 1.0) {
        return Err(Error::DomainError {
            reason: format!("alpha must lie in [0.5, 1), got {alpha}"),
        });
    }
    Ok(())
}

/// f(α) = α²·Γ(α)·ζ(1+α), the energy-law coefficient. Defined on (0, 1.7].
pub fn f_alpha(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.7) {
        return Err(Error::DomainError {
            reason: format!("f is defined on (0, 1.7], got {alpha}"),
        });
    }
    Ok(alpha * alpha * gamma_fn(alpha)? * zeta_fn(1.0 + alpha)?)
}

/// Energy-conservation law E = f(α)·V^{1+α} evaluated in either direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyLaw {
    pub f_alpha: f64,
    pub e_total: f64,
    pub v: f64,
}

impl EnergyLaw {
    pub fn from_velocity(alpha: f64, v: f64) -> Result<Self> {
        check_alpha_critical(alpha)?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidInput { reason: format!("V must be positive, got {v}") });
        }
        let f = f_alpha(alpha)?;
        Ok(EnergyLaw { f_alpha: f, e_total: f * v.powf(1.0 + alpha), v })
    }

    pub fn from_energy(alpha: f64, e_total: f64) -> Result<Self> {
        let v = velocity_from_energy(e_total, alpha)?;
        Ok(EnergyLaw { f_alpha: f_alpha(alpha)?, e_total, v })
    }
}

/// Invert the energy law: V = (E/f(α))^{1/(1+α)}.
pub fn velocity_from_energy(e_total: f64, alpha: f64) -> Result<f64> {
    check_alpha_critical(alpha)?;
    if !(e_total > 0.0 && e_total.is_finite()) {
        return Err(Error::InvalidInput { reason: format!("E must be positive, got {e_total}") });
    }
    Ok((e_total / f_alpha(alpha)?).powf(1.0 / (1.0 + alpha)))
}

/// Closed-form critical debt σ₀ = α/(1−α)·V.
pub fn critical_sigma_frac(alpha: f64, v: f64) -> Result<f64> {
    check_alpha_critical(alpha)?;
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::InvalidInput { reason: format!("V must be positive, got {v}") });
    }
    Ok(alpha / (1.0 - alpha) * v)
}

/// Weighted occupation sum:
/// α·Σⱼ j^{α−1}·[1/(e^{b(j+κ)}−1) − σ/(e^{bσ(j+κ)}−1)].
///
/// α ∈ (0, 1] is accepted; at α = 1 the weight is identically 1 and the sum
/// reduces bitwise to the unweighted one.
pub fn sigma_rhs_frac(sigma: f64, p: &ParastatParams, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::DomainError {
            reason: format!("weighted sum needs alpha in (0, 1], got {alpha}"),
        });
    }
    Ok(alpha * neumaier_sum((1..=p.k).map(|j| {
        let jf = j as f64;
        let x = jf + p.kappa;
        jf.powf(alpha - 1.0)
            * (crate::parastat::bose(p.b * x) - sigma * crate::parastat::bose((p.b * sigma) * x))
    })))
}

/// Solve σ = sigma_rhs_frac(σ) the same way the unweighted solver does.
pub fn solve_sigma_frac(p: &ParastatParams, cfg: &SolveConfig, alpha: f64) -> Result<f64> {
    cfg.validate()?;
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::DomainError {
            reason: format!("weighted sum needs alpha in (0, 1], got {alpha}"),
        });
    }
    let seed = alpha
        * neumaier_sum((1..=p.k).map(|j| {
            let jf = j as f64;
            jf.powf(alpha - 1.0) * crate::parastat::bose(p.b * (jf + p.kappa))
        }));
    crate::solve::damped_fixed_point(
        |s| sigma_rhs_frac(s, p, alpha).unwrap_or(f64::NAN),
        seed,
        seed,
        cfg,
    )
}

/// Numeric κ=0 critical value with the printed expansion alongside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracNumeric {
    /// Self-consistent quadrature value σ₀ = B₀/b.
    pub sigma0: f64,
    /// B₀ = b·σ₀ at the solution.
    pub b_sigma0: f64,
    /// Principal expansion term (1/(1−α))(1 − k^{α−1}).
    pub sigma01: f64,
    /// Leading correction term −½e^{−B₀}.
    pub sigma02: f64,
    /// The assembled expansion (α/b)(σ₀₁ + σ₀₂).
    pub expansion: f64,
}

/// Solve σ₀ = (α/b)·∫₁ᵏ x^{α−2}(1 − B₀x·e^{−B₀x})dx with B₀ = bσ₀ by fixed
/// point over B₀, and report the two printed expansion terms for comparison.
pub fn sigma0_frac_numeric(
    alpha: f64,
    b: f64,
    k: u32,
    cfg: &SolveConfig,
) -> Result<FracNumeric> {
    cfg.validate()?;
    check_alpha_critical(alpha)?;
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::InvalidInput { reason: format!("b must be positive, got {b}") });
    }
    if k < 100 {
        return Err(Error::InvalidInput {
            reason: "numeric critical value needs k >= 100".into(),
        });
    }
    let kf = k as f64;
    let integral = |b0: f64| -> Result<f64> {
        euler_maclaurin_integral(
            move |x: f64| {
                let bx = b0 * x;
                let tail = if bx > 700.0 { 0.0 } else { bx * (-bx).exp() };
                x.powf(alpha - 2.0) * (1.0 - tail)
            },
            1.0,
            kf,
            0,
        )
    };
    let mut b0 = alpha / (1.0 - alpha) * (1.0 - kf.powf(alpha - 1.0));
    let mut solved = None;
    for _ in 0..cfg.max_iter {
        let next_raw = alpha * integral(b0)?;
        let next = (1.0 - cfg.damping) * b0 + cfg.damping * next_raw;
        if cfg.converged(b0, next) {
            solved = Some(next);
            break;
        }
        b0 = next;
    }
    let b0 = solved.ok_or(Error::NoConvergence { iterations: cfg.max_iter, last: b0 / b })?;
    let sigma01 = (1.0 - kf.powf(alpha - 1.0)) / (1.0 - alpha);
    let sigma02 = -0.5 * (-b0).exp();
    Ok(FracNumeric {
        sigma0: b0 / b,
        b_sigma0: b0,
        sigma01,
        sigma02,
        expansion: alpha / b * (sigma01 + sigma02),
    })
}
