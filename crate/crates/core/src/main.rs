use std::process::ExitCode;

use qam_receiver::cli::{emit_results, execute, parse_args, thread_cap, RunKind};
use qam_receiver::Error;

fn run() -> Result<bool, Error> {
    let config = parse_args(std::env::args_os())?;
    if let Some(threads) = thread_cap()? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::Usage(e.to_string()))?;
    }
    let output = execute(&config)?;
    emit_results(&output, &config)?;
    Ok(config.kind != RunKind::OracleCheck || output.all_passed())
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("oracle check failed");
            ExitCode::FAILURE
        }
        Err(Error::Usage(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
