//! Raw debt ingestion and normalization into the dimensionless aggregates
//! (k, σ, E, E₁) the model layers consume.

use crate::error::{Error, Result};
use crate::sum::{canonical_sum, neumaier_sum};

/// One raw debt: an opaque id, a positive amount in currency units, and a
/// positive duration in time units.
#[derive(Debug, Clone, PartialEq)]
pub struct DebtRecord {
    pub id: String,
    pub amount: f64,
    pub duration: f64,
}

impl DebtRecord {
    pub fn new(id: impl Into<String>, amount: f64, duration: f64) -> Self {
        Self { id: id.into(), amount, duration }
    }
}

/// Portfolio reduced to a duration grid.
///
/// Slot j (1-based) holds the merged debt amount at reverse duration k+1−j,
/// divided by the mean original amount ŝ; unoccupied grid points are zero.
/// Slots ascend in duration: j = 1 is the shortest duration, j = k the
/// longest.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedPortfolio {
    pub k: u32,
    /// Normalized debt value per slot, index j-1 for slot j.
    pub slots: Vec<f64>,
    /// Integer reverse durations k, k-1, ..., 1 for slots j = 1..k.
    pub reverse_durations: Vec<u32>,
    /// Arithmetic mean of the original amounts, currency units.
    pub s_hat: f64,
    /// σ = Σ slots.
    pub sigma: f64,
    /// E = (k+1)σ − E₁, the dimensionless payoff total.
    pub e_total: f64,
    /// E₁ = Σ j·slots[j].
    pub e1: f64,
}

// Grid cap: a pathological duration spread (or huge grid_resolution) would
// otherwise allocate unbounded virtual slots.
const MAX_SLOTS: u64 = 50_000_000;

/// Sort debts onto an integer reverse-duration grid and compute (σ, E, E₁).
///
/// Each debt at duration l lands on grid point r = round(R·l_max/l) where
/// R = grid_resolution; collisions merge, gaps become zero-amount virtual
/// slots. Merging is order-canonical, so any permutation of `debts` yields
/// bitwise-identical results.
pub fn normalize(debts: &[DebtRecord], grid_resolution: u32) -> Result<NormalizedPortfolio> {
    if debts.is_empty() {
        return Err(Error::EmptyPortfolio);
    }
    if grid_resolution == 0 {
        return Err(Error::InvalidInput { reason: "grid_resolution must be >= 1".into() });
    }
    for d in debts {
        if !(d.amount > 0.0 && d.amount.is_finite()) {
            return Err(Error::NonPositiveAmount { id: d.id.clone() });
        }
        if !(d.duration > 0.0 && d.duration.is_finite()) {
            return Err(Error::NonPositiveDuration { id: d.id.clone() });
        }
    }

    let n = debts.len() as f64;
    let s_hat = canonical_sum(&debts.iter().map(|d| d.amount).collect::<Vec<_>>()) / n;

    let l_max = debts.iter().map(|d| d.duration).fold(f64::MIN, f64::max);
    let scale = grid_resolution as f64 * l_max;
    let mut assigned: Vec<(u64, f64)> = Vec::with_capacity(debts.len());
    let mut k: u64 = 0;
    for d in debts {
        let r = (scale / d.duration).round();
        if !r.is_finite() || r as u64 > MAX_SLOTS {
            return Err(Error::InvalidInput {
                reason: format!(
                    "duration grid for record {} needs {r:.0} slots (cap {MAX_SLOTS})",
                    d.id
                ),
            });
        }
        let r = (r as u64).max(1);
        k = k.max(r);
        assigned.push((r, d.amount / s_hat));
    }
    // Canonical merge: sort by (grid point, value bits) so per-slot sums do
    // not depend on input order.
    assigned.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let k = k as u32;
    let mut slots = vec![0.0_f64; k as usize];
    let mut i = 0;
    while i < assigned.len() {
        let r = assigned[i].0;
        let mut j = i;
        while j < assigned.len() && assigned[j].0 == r {
            j += 1;
        }
        // Slot index: grid point r maps to slot j = k+1−r (ascending duration).
        slots[(k as u64 - r) as usize] = neumaier_sum(assigned[i..j].iter().map(|&(_, v)| v));
        i = j;
    }

    let sigma = canonical_sum(&slots);
    let e1 = neumaier_sum(slots.iter().enumerate().map(|(idx, &v)| (idx as f64 + 1.0) * v));
    let e_total = (k as f64 + 1.0) * sigma - e1;
    let reverse_durations = (1..=k).rev().collect();

    Ok(NormalizedPortfolio { k, slots, reverse_durations, s_hat, sigma, e_total, e1 })
}

/// Check that rescaling every amount by `c` leaves the dimensionless outputs
/// unchanged within 1e-12 relative tolerance. (ŝ itself carries the currency
/// unit and scales by c by construction, so it is not compared.)
pub fn scale_check(debts: &[DebtRecord], c: f64) -> Result<bool> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidInput { reason: format!("scale factor must be positive, got {c}") });
    }
    let base = normalize(debts, 1)?;
    let scaled: Vec<DebtRecord> =
        debts.iter().map(|d| DebtRecord::new(d.id.clone(), d.amount * c, d.duration)).collect();
    let scaled = normalize(&scaled, 1)?;

    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300);
    Ok(base.k == scaled.k
        && base.slots.len() == scaled.slots.len()
        && base.slots.iter().zip(&scaled.slots).all(|(&a, &b)| close(a, b))
        && close(base.sigma, scaled.sigma)
        && close(base.e_total, scaled.e_total)
        && close(base.e1, scaled.e1))
}

/// Parse `id,amount,duration` CSV text. Line numbers in errors are 1-based
/// and count every physical line, header included.
pub fn parse_csv(text: &str) -> Result<Vec<DebtRecord>> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut lines = text.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((idx, line)) if !line.trim().is_empty() => break (idx, line),
            Some(_) => continue,
            None => return Err(Error::EmptyPortfolio),
        }
    };
    let cols: Vec<&str> = header.1.split(',').map(str::trim).collect();
    if cols != ["id", "amount", "duration"] {
        return Err(Error::CsvParse {
            line: header.0 + 1,
            reason: format!("expected header `id,amount,duration`, got `{}`", header.1.trim()),
        });
    }

    let mut records = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::CsvParse {
                line: line_no,
                reason: format!("expected 3 fields, got {}", fields.len()),
            });
        }
        if fields[0].is_empty() {
            return Err(Error::CsvParse { line: line_no, reason: "empty id".into() });
        }
        let amount: f64 = fields[1].parse().map_err(|_| Error::CsvParse {
            line: line_no,
            reason: format!("unparseable amount `{}`", fields[1]),
        })?;
        let duration: f64 = fields[2].parse().map_err(|_| Error::CsvParse {
            line: line_no,
            reason: format!("unparseable duration `{}`", fields[2]),
        })?;
        if !(amount > 0.0 && amount.is_finite()) {
            return Err(Error::CsvParse { line: line_no, reason: "amount must be positive".into() });
        }
        if !(duration > 0.0 && duration.is_finite()) {
            return Err(Error::CsvParse {
                line: line_no,
                reason: "duration must be positive".into(),
            });
        }
        records.push(DebtRecord::new(fields[0], amount, duration));
    }
    Ok(records)
}
