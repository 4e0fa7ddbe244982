use clap::Parser;

fn main() {
    let cli = ordsym_cli::Cli::parse();
    std::process::exit(ordsym_cli::main_with(&cli));
}
