use std::io::Write;

fn main() {
    let outcome = freefam::cli::run(std::env::args_os());
    // Ignore write failures (e.g. a closed pipe when the output is fed to
    // `head`); the exit code is the contract.
    if !outcome.stdout.is_empty() {
        let _ = writeln!(std::io::stdout(), "{}", outcome.stdout);
    }
    if !outcome.stderr.is_empty() {
        let _ = writeln!(std::io::stderr(), "{}", outcome.stderr);
    }
    std::process::exit(outcome.code);
}
