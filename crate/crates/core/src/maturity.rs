//! Two-block maturity mixes: m short debts against n long debts, their
//! aggregates, critical value, and the short-dominant closed forms.

use crate::error::{Error, Result, Warned, Warning};

/// Two-block portfolio: m short debts of normalized value s₁ at duration L₁,
/// n long debts of value s₂ at duration L₂ > L₁.
///
/// A block with zero count may carry an unvalidated value (it never enters
/// the formulas); both durations are always required since the horizon ratio
/// L₂/L₁ anchors the payoff weights even for a pure short book.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedPortfolio {
    pub m: u32,
    pub n: u32,
    pub s1: f64,
    pub s2: f64,
    pub l1: f64,
    pub l2: f64,
}

impl MixedPortfolio {
    pub fn new(m: u32, n: u32, s1: f64, s2: f64, l1: f64, l2: f64) -> Result<Self> {
        if m == 0 && n == 0 {
            return Err(Error::EmptyPortfolio);
        }
        if !(l1 > 0.0 && l1.is_finite() && l2.is_finite() && l2 > l1) {
            return Err(Error::InvalidInput {
                reason: format!("durations must satisfy 0 < L1 < L2, got L1={l1}, L2={l2}"),
            });
        }
        if m > 0 && !(s1 > 0.0 && s1.is_finite()) {
            return Err(Error::NonPositiveAmount { id: "s1".into() });
        }
        if n > 0 && !(s2 > 0.0 && s2.is_finite()) {
            return Err(Error::NonPositiveAmount { id: "s2".into() });
        }
        Ok(MixedPortfolio { m, n, s1, s2, l1, l2 })
    }

    pub fn k(&self) -> u32 {
        self.m + self.n
    }
}

/// Aggregates (σ, E): σ = m·s₁ + n·s₂ and E = m·s₁·(L₂/L₁) + n·s₂.
pub fn mixed_aggregates(p: &MixedPortfolio) -> (f64, f64) {
    let short_value = if p.m > 0 { p.m as f64 * p.s1 } else { 0.0 };
    let long_value = if p.n > 0 { p.n as f64 * p.s2 } else { 0.0 };
    let sigma = short_value + long_value;
    let e_total = short_value * (p.l2 / p.l1) + long_value;
    (sigma, e_total)
}

/// Critical debt for a mix: σ₀ = V·ln(m+n).
pub fn mixed_critical(m: u32, n: u32, v: f64) -> Result<Warned<f64>> {
    let k = m as u64 + n as u64;
    if k < 2 {
        return Err(Error::InvalidInput { reason: "mix critical value needs m+n >= 2".into() });
    }
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::InvalidInput { reason: format!("V must be positive, got {v}") });
    }
    let mut out = Warned::new(v * (k as f64).ln());
    if k < 10 {
        out.push(Warning::SmallK { k: k as u32 });
    }
    Ok(out)
}

/// Velocity and critical debt via the aggregate route: V taken as the payoff
/// per debt E/k, then σ₀ = V·ln(m+n).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedExactPath {
    pub v: f64,
    pub sigma0: f64,
}

pub fn mixed_exact_path(p: &MixedPortfolio) -> Result<Warned<MixedExactPath>> {
    let (_, e_total) = mixed_aggregates(p);
    let v = e_total / p.k() as f64;
    Ok(mixed_critical(p.m, p.n, v)?.map(|sigma0| MixedExactPath { v, sigma0 }))
}

/// Short-dominant closed forms with their validity measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShortDominant {
    /// V ≈ s₁·L₂/L₁.
    pub v: f64,
    /// σ₀ ≈ s₁·(L₂/L₁)·ln m.
    pub sigma0: f64,
    /// Leading neglected ratio n/m + L₁/L₂; small values mean the
    /// approximation is trustworthy.
    pub validity: f64,
}

/// High-turnover approximation for m ≫ n. Always computes; attaches a
/// LowDominance warning below the m ≥ 10n threshold.
pub fn short_dominant_approx(p: &MixedPortfolio) -> Result<Warned<ShortDominant>> {
    if p.m == 0 {
        return Err(Error::InvalidInput {
            reason: "short-dominant approximation needs at least one short debt".into(),
        });
    }
    let ratio = p.l2 / p.l1;
    let v = p.s1 * ratio;
    let sigma0 = v * (p.m as f64).ln();
    let validity = p.n as f64 / p.m as f64 + p.l1 / p.l2;
    let mut out = Warned::new(ShortDominant { v, sigma0, validity });
    if (p.m as u64) < 10 * p.n as u64 {
        out.push(Warning::LowDominance { m: p.m, n: p.n });
    }
    Ok(out)
}
