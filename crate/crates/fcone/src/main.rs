use clap::Parser;

fn main() {
    let cli = fcone::cli::Cli::parse();
    std::process::exit(fcone::cli::run(cli));
}
