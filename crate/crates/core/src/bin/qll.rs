use clap::Parser;
use qll_core::cli::{run, Cli};
use qll_core::output::to_json_pretty;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let report = run(&cli.command);
    if let Some(msg) = &report.message {
        eprintln!("qll {}: {msg}", report.command);
    }
    match to_json_pretty(&report) {
        Ok(text) => print!("{text}"),
        Err(e) => eprintln!("cannot serialize run report: {e}"),
    }
    std::process::exit(report.exit_code);
}
