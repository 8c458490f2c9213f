use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use qleak::{run, CliError, JobSpec};

fn emit(job: &JobSpec, text: &str) -> Result<(), CliError> {
    match &job.common.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn report(err: &CliError) -> ExitCode {
    eprintln!("qleak: {err}");
    if let CliError::Verification { counterexample, .. } = err {
        eprintln!("{}", serde_json::to_string(counterexample).unwrap_or_default());
    }
    ExitCode::from(err.exit_code() as u8)
}

fn main() -> ExitCode {
    let job = JobSpec::parse();
    let rendered = match run(&job) {
        Ok(r) => r,
        Err(e) => return report(&e),
    };
    if let Err(e) = emit(&job, &rendered.text) {
        return report(&e);
    }
    match rendered.failure {
        Some(e) => report(&e),
        None => ExitCode::SUCCESS,
    }
}
