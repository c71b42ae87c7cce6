use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "debtcrit", version, about = "Critical-debt analysis of creditor portfolios")]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Spatial dimension: 2 for the standard model, or 1 < d < 2 for the
    /// fractional variant (α = d/2)
    #[arg(long, global = true, default_value_t = 2.0)]
    pub dimension: f64,

    /// Relative convergence tolerance for the iterative solvers
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,

    /// Iteration cap for the iterative solvers
    #[arg(long, global = true, default_value_t = 10_000)]
    pub max_iter: usize,

    /// Verdict half-band: σ within rtol·σ₀ of the threshold is Indeterminate
    #[arg(long, global = true, default_value_t = 0.01)]
    pub rtol: f64,

    /// Duration grid refinement for CSV normalization
    #[arg(long, global = true, default_value_t = 1)]
    pub grid_resolution: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Worker threads for multi-file analysis
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normalize CSV portfolios, fit the occupation model, and report
    /// critical-debt diagnostics
    Analyze {
        /// CSV files with header id,amount,duration
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Critical debt from aggregate observables (E, σ, k)
    Critical {
        /// Total payoff E
        #[arg(short = 'E', long)]
        e_total: f64,
        /// Aggregate debt σ
        #[arg(short = 's', long)]
        sigma: f64,
        /// Number of creditors
        #[arg(short = 'k', long = "creditors")]
        k: u32,
    },
    /// Critical debt in fractional dimension (α = d/2)
    Fractional {
        /// Energy-law exponent α; defaults to --dimension / 2
        #[arg(short = 'a', long)]
        alpha: Option<f64>,
        /// Money velocity V
        #[arg(short = 'V', long)]
        velocity: Option<f64>,
        /// Total payoff E (alternative to -V; inverted through the energy law)
        #[arg(short = 'E', long)]
        energy: Option<f64>,
        /// Number of creditors (echoed into the report)
        #[arg(short = 'k', long = "creditors")]
        k: Option<u32>,
        /// Also emit a table over α values, as start:end:step
        #[arg(long, value_parser = parse_sweep)]
        sweep: Option<Sweep>,
    },
    /// Two-block maturity mix: m short debts against n long ones
    Mix {
        /// Count of short debts
        #[arg(short = 'm', long = "short-count")]
        m: u32,
        /// Count of long debts
        #[arg(short = 'n', long = "long-count")]
        n: u32,
        /// Normalized value per short debt
        #[arg(long)]
        s1: f64,
        /// Normalized value per long debt
        #[arg(long)]
        s2: f64,
        /// Short duration
        #[arg(long = "L1")]
        l1: f64,
        /// Long duration
        #[arg(long = "L2")]
        l2: f64,
        /// Money velocity override; defaults to the aggregate payoff per debt
        #[arg(short = 'V', long)]
        velocity: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

fn parse_sweep(raw: &str) -> Result<Sweep, String> {
    let parts: Vec<&str> = raw.split(':').collect();
    let [start, end, step] = parts.as_slice() else {
        return Err(format!("expected start:end:step, got `{raw}`"));
    };
    let parse = |s: &str| s.parse::<f64>().map_err(|e| format!("bad number `{s}`: {e}"));
    let sweep = Sweep { start: parse(start)?, end: parse(end)?, step: parse(step)? };
    if !(sweep.step > 0.0 && sweep.end >= sweep.start) {
        return Err("sweep needs end >= start and step > 0".into());
    }
    Ok(sweep)
}
