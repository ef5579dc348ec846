use clap::Parser;

fn main() {
    let cli = pmst_cli::Cli::parse();
    std::process::exit(pmst_cli::run(cli));
}
