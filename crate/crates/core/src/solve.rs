use crate::error::{Error, Result};

/// Knobs shared by every iterative solver in the crate.
#[derive(Debug, Clone, Copy)]
pub struct SolveConfig {
    /// Convergence tolerance on successive iterates (relative above 1, absolute below).
    pub tol: f64,
    pub max_iter: usize,
    /// Fixed-point relaxation factor in (0, 1].
    pub damping: f64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig { tol: 1e-10, max_iter: 10_000, damping: 1.0 }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidInput { reason: "tol must be positive".into() });
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidInput { reason: "max_iter must be at least 1".into() });
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::InvalidInput { reason: "damping must lie in (0, 1]".into() });
        }
        Ok(())
    }

    pub(crate) fn converged(&self, prev: f64, next: f64) -> bool {
        (next - prev).abs() <= self.tol * next.abs().max(1.0)
    }
}

/// Bisection on a bracketing interval. `f(lo)` and `f(hi)` must differ in sign.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, cfg: &SolveConfig) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoRoot);
    }
    for _ in 0..cfg.max_iter {
        let mid = 0.5 * (lo + hi);
        if cfg.converged(lo, hi) || mid == lo || mid == hi {
            return Ok(mid);
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Damped fixed-point iteration for x = rhs(x) seeking a positive root, with
/// a geometric bracket-scan fallback on [tol, 10·seed]. `start` is the first
/// iterate (callers may warm-start); the scan keeps the upper sign change of
/// g(x) = x − rhs(x), which is the attracting root.
pub(crate) fn damped_fixed_point(
    rhs: impl Fn(f64) -> f64,
    seed: f64,
    start: f64,
    cfg: &SolveConfig,
) -> Result<f64> {
    if !(seed > 0.0 && seed.is_finite()) {
        return Err(Error::NoRoot);
    }
    let residual_ok = |x: f64, r: f64| (x - r).abs() <= cfg.tol * x.abs().max(1.0);
    let mut x = if start > 0.0 && start.is_finite() { start } else { seed };
    for _ in 0..cfg.max_iter {
        let r = rhs(x);
        if residual_ok(x, r) {
            return Ok(x);
        }
        if !(r > 0.0 && r.is_finite()) {
            break; // left the domain; the bracket scan decides root vs no root
        }
        let next = (1.0 - cfg.damping) * x + cfg.damping * r;
        if cfg.converged(x, next) && residual_ok(next, rhs(next)) {
            return Ok(next);
        }
        x = next;
    }
    let g = |x: f64| x - rhs(x);
    let lo = cfg.tol;
    let hi = 10.0 * seed;
    if !(hi > lo) {
        return Err(Error::NoRoot);
    }
    const SCAN: usize = 200;
    let ratio = (hi / lo).powf(1.0 / SCAN as f64);
    let mut bracket = None;
    let mut x_prev = lo;
    let mut g_prev = g(lo);
    for i in 1..=SCAN {
        let xi = lo * ratio.powi(i as i32);
        let gi = g(xi);
        if g_prev <= 0.0 && gi > 0.0 {
            bracket = Some((x_prev, xi));
        }
        x_prev = xi;
        g_prev = gi;
    }
    match bracket {
        Some((a, b)) => bisect(g, a, b, cfg),
        None => Err(Error::NoRoot),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let cfg = SolveConfig { tol: 1e-14, ..Default::default() };
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, &cfg).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-13);
    }

    #[test]
    fn bisect_rejects_unbracketed() {
        let cfg = SolveConfig::default();
        assert!(matches!(bisect(|x| x * x + 1.0, -1.0, 1.0, &cfg), Err(Error::NoRoot)));
    }

    #[test]
    fn config_validation() {
        assert!(SolveConfig::default().validate().is_ok());
        assert!(SolveConfig { tol: 0.0, ..Default::default() }.validate().is_err());
        assert!(SolveConfig { damping: 1.5, ..Default::default() }.validate().is_err());
    }
}
