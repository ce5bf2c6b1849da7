use clap::Parser;
use wnn_conformal::cli::{run, RunConfig};

fn main() {
    let config = RunConfig::parse();
    if let Err(e) = run(&config) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
