use std::process::ExitCode;

use clap::Parser;
use ehf_cli::{run, BatchFailed, Cli};

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&out.report).expect("reports serialize")
            );
            eprintln!("{}", out.summary);
            ExitCode::from(out.status.code() as u8)
        }
        Err(e) => {
            if let Some(b) = e.downcast_ref::<BatchFailed>() {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&b.report).expect("reports serialize")
                );
            }
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
