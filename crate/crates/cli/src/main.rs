use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use fiberfield_cli::{run, RunConfig};

fn main() -> ExitCode {
    let config = match RunConfig::from_args(std::env::args_os()) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let start = Instant::now();
    eprintln!("fiberfield: {} started", config.command.name());
    let outcome = run(&config);
    if let Some(text) = &outcome.stdout {
        let mut out = std::io::stdout().lock();
        if out
            .write_all(text.as_bytes())
            .and_then(|_| out.flush())
            .is_err()
        {
            return ExitCode::from(1);
        }
    }
    match &outcome.diagnostic {
        Some(d) => eprintln!("{d}"),
        None => eprintln!(
            "fiberfield: {} finished in {:.2}s",
            config.command.name(),
            start.elapsed().as_secs_f64()
        ),
    }
    ExitCode::from(outcome.exit_code as u8)
}
