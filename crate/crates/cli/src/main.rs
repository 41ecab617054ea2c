use clap::Parser;

fn main() {
    let cli = tricritical_cli::Cli::parse();
    if let Err(e) = tricritical_cli::run(cli) {
        eprintln!("tricritical: {e}");
        std::process::exit(e.exit_code());
    }
}
