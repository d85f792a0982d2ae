use std::io::Write;

fn main() {
    let step_bound = std::env::var(ibn_cli::STEP_BOUND_VAR).ok();
    let out = ibn_cli::run(std::env::args_os(), step_bound.as_deref());
    // Ignore broken pipes; the exit code still reports the result.
    let _ = std::io::stdout().lock().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().lock().write_all(out.stderr.as_bytes());
    std::process::exit(out.code);
}
