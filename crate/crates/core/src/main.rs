use clap::Parser;

fn main() {
    let config = cnl_core::cli::Config::parse();
    std::process::exit(cnl_core::cli::run(config));
}
