use clap::Parser;

use mpspec::cli::{self, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(err) = cli::run(cli) {
        eprintln!("{}", cli::error_json(&err));
        std::process::exit(1);
    }
}
