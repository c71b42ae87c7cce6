use thiserror::Error;

/// Hard failures. Anything recoverable is a [`Warning`] instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("portfolio contains no records")]
    EmptyPortfolio,

    #[error("record '{id}' has a non-positive amount")]
    NonPositiveAmount { id: String },

    #[error("record '{id}' has a non-positive duration")]
    NonPositiveDuration { id: String },

    #[error("CSV parse error on line {line}: {reason}")]
    CsvParse { line: usize, reason: String },

    #[error("solver did not converge after {iterations} iterations (last iterate {last:e})")]
    NoConvergence { iterations: usize, last: f64 },

    #[error("no root: the residual has no sign change on the search bracket")]
    NoRoot,

    #[error("aggregates are outside the model's reachable set (best residual {residual:e})")]
    InfeasibleAggregates { residual: f64 },

    #[error("derived velocity is non-positive ({velocity}); requires E > k*sigma")]
    NonPositiveVelocity { velocity: f64 },

    #[error("domain error: {reason}")]
    DomainError { reason: String },

    #[error("adaptive quadrature exceeded its refinement budget")]
    QuadratureFailure,

    #[error("trajectory contains no states")]
    EmptyTrajectory,

    #[error("invalid input: {reason}")]
    InvalidInput { reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Non-fatal diagnostics attached to results. Stable `Display` text: reports
/// carry these strings verbatim.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// Critical-value formulas assume many creditors.
    SmallK { k: u32 },
    /// B = b*sigma fell below 1, outside the regime the reductions assume.
    RegimeViolation { b_sigma: f64 },
    /// Short-dominant approximation called without clear short-debt dominance.
    LowDominance { m: u32, n: u32 },
    /// A pipeline stage was skipped; the report omits its section.
    Degraded { what: String },
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::SmallK { k } => write!(f, "k = {k} is small; threshold formulas assume many creditors (k >= 10)"),
            Warning::RegimeViolation { b_sigma } => write!(f, "B = b*sigma = {b_sigma:.6} < 1 is outside the validity regime; asymptotic values are indicative only"),
            Warning::LowDominance { m, n } => write!(f, "short-dominant approximation with m = {m}, n = {n} (m < 10n); treat the estimate as rough"),
            Warning::Degraded { what } => write!(f, "{what}"),
        }
    }
}

/// A value plus the warnings accumulated while producing it.
#[derive(Debug, Clone)]
pub struct Warned<T> {
    pub value: T,
    pub warnings: Vec<Warning>,
}

impl<T> Warned<T> {
    pub fn new(value: T) -> Self {
        Warned { value, warnings: Vec::new() }
    }

    pub fn with(value: T, warnings: Vec<Warning>) -> Self {
        Warned { value, warnings }
    }

    pub fn push(&mut self, w: Warning) {
        self.warnings.push(w);
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Warned<U> {
        Warned { value: f(self.value), warnings: self.warnings }
    }
}
