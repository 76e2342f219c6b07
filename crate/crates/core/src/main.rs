use std::process::ExitCode;

use clap::Parser;

use pcover::cli::{run, Args, EXIT_ERROR};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    match run(&args) {
        Ok(record) => {
            println!(
                "{}",
                serde_json::to_string(&record).expect("record serializes")
            );
            ExitCode::from(record.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
