use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let report = finpart_cli::run(std::env::args_os());
    let mut out = std::io::stdout().lock();
    // a closed pipe leaves nothing useful to report
    let _ = out.write_all(report.stdout.as_bytes()).and_then(|_| out.flush());
    eprintln!("wall time: {:.3} s", report.wall_time.as_secs_f64());
    ExitCode::from(report.status as u8)
}
