use clap::Parser;
use debtcrit_cli::args::Cli;
use debtcrit_cli::{exit_code, pipeline, render, warning_lines};
use std::io::Write;

fn main() {
    let cli = Cli::parse();
    match pipeline::run_command(&cli.command, &cli.opts) {
        Ok(reports) => {
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            for report in &reports {
                for line in warning_lines(report) {
                    eprintln!("{line}");
                }
                out.write_all(render(report, cli.opts.format).as_bytes())
                    .expect("write report to stdout");
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(exit_code(&err));
        }
    }
}
