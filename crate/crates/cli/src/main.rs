use clap::Parser;
use qspectra_cli::args::Cli;
use std::process::ExitCode;

fn main() -> ExitCode {
    if let Some(n) = std::env::var("QSPECTRA_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // already-initialised pools are fine to ignore
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let config = match cli.into_config() {
        Ok(c) => c,
        Err(m) => {
            eprintln!("usage: {m}");
            return ExitCode::from(2);
        }
    };
    match qspectra_cli::run(&config) {
        Ok(report) if report.passed() => ExitCode::SUCCESS,
        Ok(report) => {
            for f in report.failures() {
                eprintln!("identity {} failed: max residual {:e} > tolerance {:e}", f.family, f.max, f.tolerance);
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
