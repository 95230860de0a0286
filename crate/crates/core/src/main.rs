use std::io::{self, IsTerminal};

use arctan_dioph::cli::{run, Env};

fn main() {
    let env = Env {
        stdout_is_terminal: io::stdout().is_terminal(),
        effort_ms: std::env::var(arctan_dioph::cli::EFFORT_ENV).ok(),
    };
    let code = run(std::env::args_os(), &env, &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(code);
}
