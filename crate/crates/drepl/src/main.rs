use clap::Parser;

fn main() {
    let cli = drepl::cli::Cli::parse();
    if let Err(err) = drepl::cli::run(cli) {
        eprintln!("error: {err}");
        std::process::exit(1);
    }
}
