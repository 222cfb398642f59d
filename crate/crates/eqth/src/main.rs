use clap::Parser;

fn main() {
    let cli = eqth::cli::Cli::parse();
    std::process::exit(eqth::cli::run(cli));
}
