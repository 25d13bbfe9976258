use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let o = torus_ainf_cli::run(std::env::args_os());
    print!("{}", o.stdout);
    eprint!("{}", o.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(o.code as u8)
}
