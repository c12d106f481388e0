use std::io::Write;

fn main() {
    let (code, out, err) = skewring_cli::run_args(std::env::args_os().skip(1));
    let _ = std::io::stdout().write_all(out.as_bytes());
    let _ = std::io::stderr().write_all(err.as_bytes());
    std::process::exit(code);
}
