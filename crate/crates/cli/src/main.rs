use std::io::Write;

use clap::Parser;
use dag_inclusion_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let (code, out, err) = run(&cli);
    print!("{out}");
    eprint!("{err}");
    let _ = std::io::stdout().flush();
    std::process::exit(code);
}
