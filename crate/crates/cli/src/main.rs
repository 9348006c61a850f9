use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use affsurf_cli::{run, ExperimentConfig};

fn main() -> ExitCode {
    let cfg = match ExperimentConfig::try_parse_from(std::env::args_os()) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let outcome = run(&cfg, timestamp);
    if let Err(e) = outcome.report.write(cfg.format, cfg.out.as_deref()) {
        eprintln!("affsurf: cannot write report: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(outcome.exit_code)
}
