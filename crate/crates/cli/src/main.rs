use clap::Parser;
use emergence_cli::cli::{configure_threads, execute, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = configure_threads().and_then(|()| execute(&cli)) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
