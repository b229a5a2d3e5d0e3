mod commands;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use report::{Failure, Report};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match commands::Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = configure_threads(cli.threads) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let json = cli.json;
    let verb = cli.command.verb();
    let start = Instant::now();
    let outcome = commands::run(&cli);
    let elapsed = start.elapsed();
    match outcome {
        Ok(out) => {
            if json {
                let report = Report::success(verb, &argv[1..], out.result, elapsed, cli.threads, out.warnings);
                println!("{}", report.to_json());
            } else {
                for w in &out.warnings {
                    eprintln!("warning: {w}");
                }
                print!("{}", out.text);
            }
            ExitCode::SUCCESS
        }
        Err(failure) => {
            let code = failure.exit_code();
            if json {
                let report = Report::failure(verb, &argv[1..], &failure, elapsed, cli.threads);
                println!("{}", report.to_json());
            }
            eprintln!("error: {failure}");
            ExitCode::from(code)
        }
    }
}

fn configure_threads(n: usize) -> Result<(), Failure> {
    if n == 0 {
        return Err(Failure::Usage("--threads must be at least 1".into()));
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot start thread pool: {e}")))?;
    Ok(())
}
