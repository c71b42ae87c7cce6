//! Library surface of the command-line front end, split out so integration
//! tests can drive the pipeline and renderers in-process.

pub mod args;
pub mod pipeline;
pub mod report;

use args::Format;
use debtcrit::Error;
use serde_json::Value;

/// Stable exit-code contract: 0 success, 2 input error, 3 model-regime
/// error, 4 solver non-convergence.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::EmptyPortfolio
        | Error::NonPositiveAmount { .. }
        | Error::NonPositiveDuration { .. }
        | Error::CsvParse { .. }
        | Error::EmptyTrajectory
        | Error::InvalidInput { .. }
        | Error::Io(_) => 2,
        Error::NoRoot
        | Error::InfeasibleAggregates { .. }
        | Error::NonPositiveVelocity { .. }
        | Error::DomainError { .. } => 3,
        Error::NoConvergence { .. } | Error::QuadratureFailure => 4,
    }
}

/// Render one report for stdout in the chosen format (trailing newline
/// included).
pub fn render(report: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = report::to_canonical_json(report);
            s.push('\n');
            s
        }
        Format::Text => report::to_text(report),
    }
}

/// Warning lines destined for stderr: the report's own warnings array.
pub fn warning_lines(report: &Value) -> Vec<String> {
    report["warnings"]
        .as_array()
        .map(|ws| {
            ws.iter().filter_map(|w| w.as_str()).map(|w| format!("warning: {w}")).collect()
        })
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_cover_the_contract() {
        assert_eq!(exit_code(&Error::EmptyPortfolio), 2);
        assert_eq!(exit_code(&Error::CsvParse { line: 4, reason: "x".into() }), 2);
        assert_eq!(exit_code(&Error::NonPositiveVelocity { velocity: -1.0 }), 3);
        assert_eq!(exit_code(&Error::DomainError { reason: "x".into() }), 3);
        assert_eq!(exit_code(&Error::NoRoot), 3);
        assert_eq!(exit_code(&Error::NoConvergence { iterations: 1, last: 0.0 }), 4);
        assert_eq!(exit_code(&Error::QuadratureFailure), 4);
    }

    #[test]
    fn warning_lines_prefix_each_entry() {
        let r = serde_json::json!({"warnings": ["a", "b"]});
        assert_eq!(warning_lines(&r), ["warning: a", "warning: b"]);
        assert!(warning_lines(&serde_json::json!({"warnings": []})).is_empty());
    }
}
