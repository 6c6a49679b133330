use clap::Parser;

fn main() {
    let cli = scfem::cli::Cli::parse();
    std::process::exit(scfem::cli::main_with(cli));
}
