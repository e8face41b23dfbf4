use clap::Parser;
use cztree_cli::{exit, run, CliConfig};
use std::process::ExitCode;

fn main() -> ExitCode {
    let config = match CliConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // clap uses 2 for usage errors, which here means "not applicable"
            return ExitCode::from(if e.use_stderr() { exit::INPUT_ERROR } else { exit::PASS });
        }
    };
    ExitCode::from(run(&config))
}
