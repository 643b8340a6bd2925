use clap::Parser;
use planvec_cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
