use clap::Parser;
use hetnet_cli::app::{run, Cli};
use hetnet_cli::WORKERS_ENV;

fn main() {
    let cli = Cli::parse();
    let workers = std::env::var(WORKERS_ENV).ok();
    std::process::exit(run(cli, workers.as_deref()));
}
