// Copyright 2026 The floquet-clifford Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.


//! Command-line runner for the floquet-core experiments.

pub mod config;
pub mod output;
pub mod run;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;

pub use config::{validate, Cli, Diagnostic, Experiment, Format, Mode, RunConfig};
pub use run::{execute, CliError, RunOutcome};

/// Parses `args`, runs, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    let config = match &cli.config {
        Some(path) => match output::embedded_config(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("configuration error: {e}");
                return 2;
            }
        },
        None => RunConfig::resolve(&cli, cli.command.expect("required by the parser")),
    };
    match execute(&config, &cli.out, cli.threads) {
        Ok(outcome) => {
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            for f in &outcome.files {
                println!("{}", f.display());
            }
            0
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
