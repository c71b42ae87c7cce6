//! Exact k-level occupation sums: the implicit σ equation, the weighted total
//! E₁, and the inverse problem of fitting (b, κ) to observed aggregates.

use crate::error::{Error, Result};
use crate::solve::SolveConfig;
use crate::sum::neumaier_sum;

/// Model parameters: inverse circulation velocity b, chemical-potential
/// parameter κ, and the number of debts k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParastatParams {
    pub b: f64,
    pub kappa: f64,
    pub k: u32,
}

impl ParastatParams {
    pub fn new(b: f64, kappa: f64, k: u32) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::InvalidInput { reason: format!("b must be positive, got {b}") });
        }
        if !(kappa >= 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidInput {
                reason: format!("kappa must be non-negative, got {kappa}"),
            });
        }
        if k == 0 {
            return Err(Error::InvalidInput { reason: "k must be >= 1".into() });
        }
        Ok(Self { b, kappa, k })
    }

    /// B = bσ for a σ that co-travels with these parameters.
    pub fn b_sigma(&self, sigma: f64) -> f64 {
        self.b * sigma
    }
}

// Exponential arguments beyond this are flushed to a zero occupation; the
// true value is below the f64 subnormal floor there.
const EXP_CUTOFF: f64 = 700.0;

pub(crate) fn bose(x: f64) -> f64 {
    if x > EXP_CUTOFF {
        0.0
    } else {
        1.0 / x.exp_m1()
    }
}

/// One bracketed term of the occupation sum at level j.
///
/// Both exponential arguments share the factor (j+κ), so at σ = 1 the two
/// halves are bitwise identical and cancel exactly.
fn level_term(j: f64, sigma: f64, p: &ParastatParams) -> f64 {
    let x = j + p.kappa;
    bose(p.b * x) - sigma * bose((p.b * sigma) * x)
}

/// Right-hand side of the implicit σ equation:
/// Σⱼ [1/(e^{b(j+κ)}−1) − σ/(e^{bσ(j+κ)}−1)].
pub fn sigma_rhs(sigma: f64, p: &ParastatParams) -> f64 {
    neumaier_sum((1..=p.k).map(|j| level_term(j as f64, sigma, p)))
}

/// Weighted total E₁ = Σⱼ j·[1/(e^{b(j+κ)}−1) − σ/(e^{bσ(j+κ)}−1)];
/// E then follows as (k+1)σ − E₁.
pub fn e1_exact(sigma: f64, p: &ParastatParams) -> f64 {
    neumaier_sum((1..=p.k).map(|j| j as f64 * level_term(j as f64, sigma, p)))
}

/// Solve σ = sigma_rhs(σ) by damped fixed-point iteration from the pure Bose
/// seed, with a bracketing fallback. Where the equation has no positive root
/// (large b freezes the system) this returns NoRoot rather than a spurious
/// iterate.
pub fn solve_sigma(p: &ParastatParams, cfg: &SolveConfig) -> Result<f64> {
    cfg.validate()?;
    let seed = bose_seed(p);
    crate::solve::damped_fixed_point(|s| sigma_rhs(s, p), seed, seed, cfg)
}

/// Pure Bose sum Σ 1/(e^{b(j+κ)}−1), the solver seed and search-bracket scale.
fn bose_seed(p: &ParastatParams) -> f64 {
    neumaier_sum((1..=p.k).map(|j| bose(p.b * (j as f64 + p.kappa))))
}

/// Same solver, caller-chosen starting iterate (used for warm starts while
/// fitting; the fallback bracket still derives from the Bose seed).
pub(crate) fn solve_sigma_from(p: &ParastatParams, cfg: &SolveConfig, start: f64) -> Result<f64> {
    crate::solve::damped_fixed_point(|s| sigma_rhs(s, p), bose_seed(p), start, cfg)
}

/// Result of fitting (b, κ) to observed (σ, E) at fixed k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub params: ParastatParams,
    /// B = b·σ_obs at the fitted parameters.
    pub b_sigma: f64,
    /// Relative residual on σ at the solution.
    pub sigma_residual: f64,
    /// Relative residual on E at the solution.
    pub e_residual: f64,
    pub iterations: usize,
}

// Search box for (b, κ), enforced in log space.
const FIT_BOX_LO: f64 = 1e-12;
const FIT_BOX_HI: f64 = 1e3;
// Residual thresholds: success / solver-side failure / data-side failure.
const FIT_ACCEPT: f64 = 1e-8;
const FIT_FEASIBLE: f64 = 1e-3;

struct Forward {
    k: u32,
    cfg: SolveConfig,
    sigma_obs: f64,
    e_obs: f64,
    warm: f64,
}

impl Forward {
    /// Relative residuals [(σ*−σ_obs)/σ_obs, (E*−E_obs)/E_obs], or None where
    /// the forward model has no root.
    fn residual(&mut self, ln_b: f64, ln_kappa: f64) -> Option<[f64; 2]> {
        let p = ParastatParams { b: ln_b.exp(), kappa: ln_kappa.exp(), k: self.k };
        let sigma = solve_sigma_from(&p, &self.cfg, self.warm).ok()?;
        self.warm = sigma;
        let e = (self.k as f64 + 1.0) * sigma - e1_exact(sigma, &p);
        Some([(sigma - self.sigma_obs) / self.sigma_obs, (e - self.e_obs) / self.e_obs])
    }
}

fn norm_inf(r: [f64; 2]) -> f64 {
    r[0].abs().max(r[1].abs())
}

/// Recover (b, κ) from observed aggregates (σ, E) at fixed k: damped 2D
/// quasi-Newton on (ln b, ln κ) with a forward-difference Jacobian, seeded
/// from the asymptotic B-equation at κ ≈ 1.
pub fn fit_params(sigma_obs: f64, e_obs: f64, k: u32, cfg: &SolveConfig) -> Result<FitResult> {
    cfg.validate()?;
    if !(sigma_obs > 0.0 && sigma_obs.is_finite() && e_obs.is_finite()) {
        return Err(Error::InvalidInput {
            reason: format!("aggregates must be finite and sigma positive, got sigma={sigma_obs}, E={e_obs}"),
        });
    }
    if k < 2 {
        return Err(Error::InvalidInput { reason: "fit requires k >= 2".into() });
    }
    // The occupation weights bound E to (σ, kσ) for any admissible (b, κ);
    // aggregates outside that window cannot come from this model.
    if e_obs <= sigma_obs {
        return Err(Error::InfeasibleAggregates {
            residual: (sigma_obs - e_obs) / sigma_obs,
        });
    }
    if e_obs >= k as f64 * sigma_obs {
        return Err(Error::InfeasibleAggregates {
            residual: (e_obs - k as f64 * sigma_obs) / (k as f64 * sigma_obs),
        });
    }

    // Inner σ-solves need headroom below the outer residual target.
    let inner = SolveConfig { tol: (cfg.tol * 1e-2).max(1e-14), ..*cfg };
    let b0 = crate::asymptotics::solve_b_sigma(k, 1.0, cfg)
        .map(|w| w.value)
        .unwrap_or_else(|_| (k as f64).ln());
    let clamp = |x: f64| x.clamp(FIT_BOX_LO.ln(), FIT_BOX_HI.ln());
    let mut x = [clamp((b0 / sigma_obs).ln()), clamp(0.0)];

    let mut fwd = Forward { k, cfg: inner, sigma_obs, e_obs, warm: sigma_obs };
    // The seed assumes the deep regime; on strongly suppressed books it can
    // land where the σ equation has no root. The rooted region is an interval
    // in b reaching down to 0, so halving b re-enters it.
    let mut seeded = fwd.residual(x[0], x[1]);
    while seeded.is_none() && x[0] > FIT_BOX_LO.ln() {
        x[0] = clamp(x[0] - std::f64::consts::LN_2);
        seeded = fwd.residual(x[0], x[1]);
    }
    let mut r = match seeded {
        Some(r) => r,
        None => {
            return Err(Error::InfeasibleAggregates { residual: f64::INFINITY });
        }
    };
    let mut iterations = 0usize;
    const H: f64 = 1e-6;
    while iterations < cfg.max_iter {
        iterations += 1;
        let res = norm_inf(r);
        if res <= 1e-9 {
            break;
        }
        // Forward-difference Jacobian, column per log-coordinate.
        let rb = fwd.residual(x[0] + H, x[1]);
        let rk = fwd.residual(x[0], x[1] + H);
        let (rb, rk) = match (rb, rk) {
            (Some(a), Some(b)) => (a, b),
            _ => break,
        };
        let j = [
            [(rb[0] - r[0]) / H, (rk[0] - r[0]) / H],
            [(rb[1] - r[1]) / H, (rk[1] - r[1]) / H],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-300 || !det.is_finite() {
            break;
        }
        let dx = [
            (j[1][1] * r[0] - j[0][1] * r[1]) / det,
            (j[0][0] * r[1] - j[1][0] * r[0]) / det,
        ];
        // Step halving: accept the first damped step that reduces ‖r‖∞.
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..10 {
            let xt = [clamp(x[0] - lambda * dx[0]), clamp(x[1] - lambda * dx[1])];
            if let Some(rt) = fwd.residual(xt[0], xt[1]) {
                if norm_inf(rt) < res {
                    x = xt;
                    r = rt;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }

    let res = norm_inf(r);
    if res <= FIT_ACCEPT {
        let params = ParastatParams { b: x[0].exp(), kappa: x[1].exp(), k };
        Ok(FitResult {
            params,
            b_sigma: params.b * sigma_obs,
            sigma_residual: r[0],
            e_residual: r[1],
            iterations,
        })
    } else if res <= FIT_FEASIBLE {
        Err(Error::NoConvergence { iterations, last: res })
    } else {
        Err(Error::InfeasibleAggregates { residual: res })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(b: f64, kappa: f64, k: u32) -> ParastatParams {
        ParastatParams::new(b, kappa, k).unwrap()
    }

    #[test]
    fn rhs_cancels_exactly_at_unit_sigma() {
        for (b, kappa, k) in [(0.5, 1.0, 5), (0.02, 2.0, 500), (3.0, 0.0, 17)] {
            assert_eq!(sigma_rhs(1.0, &p(b, kappa, k)), 0.0);
            assert_eq!(e1_exact(1.0, &p(b, kappa, k)), 0.0);
        }
    }

    #[test]
    fn frozen_system_suppression() {
        let params = p(50.0, 1.0, 3);
        assert!(sigma_rhs(2.0, &params).abs() < 1e-20);
        assert!(e1_exact(2.0, &params).abs() < 1e-18);
    }

    #[test]
    fn rhs_reference_value() {
        // 200-digit termwise sum, rounded to f64.
        let got = sigma_rhs(2.0, &p(0.5, 1.0, 5));
        assert_relative_eq!(got, 0.69385392039727934915, max_relative = 1e-13);
        let got = e1_exact(2.0, &p(0.5, 1.0, 5));
        assert_relative_eq!(got, 1.5319633210218685785, max_relative = 1e-13);
    }

    #[test]
    fn solver_reference_roots() {
        let cfg = SolveConfig::default();
        let s = solve_sigma(&p(0.02, 1.0, 100), &cfg).unwrap();
        assert_relative_eq!(s, 167.959824614757973, max_relative = 1e-9);

        let s = solve_sigma(&p(0.1, 1.0, 100), &cfg).unwrap();
        assert_relative_eq!(s, 19.031553228049718, max_relative = 1e-9);
        let e = 101.0 * s - e1_exact(s, &p(0.1, 1.0, 100));
        assert_relative_eq!(e, 1792.33665910786748, max_relative = 1e-8);

        let s = solve_sigma(&p(0.01, 1.0, 1000), &cfg).unwrap();
        assert_relative_eq!(s, 418.885387663973256, max_relative = 1e-9);
    }

    #[test]
    fn no_positive_root_cases_fail_fast() {
        // Strong suppression leaves g(σ) = σ − rhs(σ) > 0 everywhere; the
        // solver must report that rather than wander.
        let cfg = SolveConfig::default();
        assert!(matches!(solve_sigma(&p(50.0, 1.0, 3), &cfg), Err(Error::NoRoot)));
        assert!(matches!(solve_sigma(&p(0.5, 1.0, 5), &cfg), Err(Error::NoRoot)));
    }

    #[test]
    fn fit_round_trip_moderate() {
        let cfg = SolveConfig::default();
        let truth = p(0.02, 2.0, 500);
        let sigma = solve_sigma(&truth, &cfg).unwrap();
        assert_relative_eq!(sigma, 150.685865254234673, max_relative = 1e-9);
        let e = 501.0 * sigma - e1_exact(sigma, &truth);
        assert_relative_eq!(e, 71807.3720166716985, max_relative = 1e-8);

        let fit = fit_params(sigma, e, 500, &cfg).unwrap();
        assert_relative_eq!(fit.params.b, 0.02, max_relative = 1e-6);
        assert_relative_eq!(fit.params.kappa, 2.0, max_relative = 1e-6);
        assert!(fit.sigma_residual.abs() <= 1e-8);
        assert!(fit.e_residual.abs() <= 1e-8);
    }

    #[test]
    fn fit_rejects_infeasible_aggregates() {
        let cfg = SolveConfig::default();
        assert!(matches!(
            fit_params(10.0, 10.0, 100, &cfg),
            Err(Error::InfeasibleAggregates { .. })
        ));
        // E beyond kσ is equally out of reach.
        assert!(matches!(
            fit_params(10.0, 1001.0, 100, &cfg),
            Err(Error::InfeasibleAggregates { .. })
        ));
    }

    #[test]
    fn params_validation() {
        assert!(ParastatParams::new(0.0, 1.0, 5).is_err());
        assert!(ParastatParams::new(1.0, -0.1, 5).is_err());
        assert!(ParastatParams::new(1.0, 1.0, 0).is_err());
        assert_eq!(p(0.5, 1.0, 5).b_sigma(2.0), 1.0);
    }
}
