use std::process::ExitCode;

use clap::Parser;

use azumaya_cli::{emit_report, run, Cli, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = RunConfig::resolve(&cli).and_then(|cfg| {
        let report = run(&cfg)?;
        let stdout = emit_report(&report, cfg.out.as_deref())?;
        Ok((report, stdout))
    });
    match outcome {
        Ok((report, stdout)) => {
            if let Some(text) = stdout {
                print!("{text}");
            }
            eprint!("{}", report.summary_text());
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
