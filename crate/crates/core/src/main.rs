use std::process::exit;

use clap::Parser;

use cdiagram::cli::{run, RunConfig};

fn main() {
    let cfg = RunConfig::parse();
    exit(run(&cfg, &mut std::io::stderr()));
}
