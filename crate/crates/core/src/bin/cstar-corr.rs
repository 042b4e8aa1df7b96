use std::io::Write;

use clap::Parser;
use cstar_corr::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let out = run(&cli);
    if out.code == 0 || out.code == 1 {
        let _ = std::io::stdout().write_all(out.output.as_bytes());
    } else {
        let _ = std::io::stderr().write_all(out.output.as_bytes());
    }
    std::process::exit(out.code);
}
