use clap::Parser;
use coverforge::cli::{run, Cli, Status};
use std::io::Write;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = run(&cli);
    // Write errors (closed pipes) are ignored; the exit code still reports the outcome.
    let _ = if cli.json {
        let text = serde_json::to_string_pretty(&outcome.payload).expect("payload serializes");
        writeln!(std::io::stdout(), "{text}")
    } else if outcome.status == Status::Success {
        write!(std::io::stdout(), "{}", outcome.human_text)
    } else {
        write!(std::io::stderr(), "{}", outcome.human_text)
    };
    std::process::exit(outcome.status.exit_code());
}
