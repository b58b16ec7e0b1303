use clap::Parser;

fn main() {
    let cli = agnostic_control::cli::Cli::parse();
    std::process::exit(agnostic_control::cli::run(cli));
}
