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


//! Run configuration: command-line flags, resolved defaults, and validation.

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    /// Operator spreading on the unbounded chain and the localization length.
    Spread1d,
    /// Operator spreading on the unbounded plane, interior density and light-speed growth.
    Spread2d,
    /// Half-system entanglement entropy of an evolved product state.
    Entropy,
    /// Spectral form factor.
    Sff,
    /// First-wall statistics on the unbounded chain.
    Walls,
    /// Survival of directed paths in the random boundary-growth graph.
    PercMc,
    /// Closed-form bound on the wall probability.
    PercBound,
    /// Exact wall counts and the wall-versus-path check.
    PercWalls,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Joint,
    Independent,
}

#[derive(Debug, Parser)]
#[command(name = "floquet", version, about = "Random Floquet Clifford circuit experiments")]
pub struct Cli {
    #[arg(value_enum, required_unless_present = "config")]
    pub command: Option<Experiment>,
    /// Lattice dimension.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Linear system size of finite systems.
    #[arg(long = "L")]
    pub l: Option<usize>,
    /// Number of Floquet periods.
    #[arg(long)]
    pub tmax: Option<u64>,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (0: all cores).
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Graph depth (perc-mc) or largest wall length (perc-walls).
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, value_enum, default_value_t = Mode::Joint)]
    pub mode: Mode,
    /// Arrow absence probability in independent mode.
    #[arg(long)]
    pub q: Option<f64>,
    /// Wall penetration length.
    #[arg(long, default_value_t = 1)]
    pub penetration: i64,
    /// Largest first-wall distance tracked by `walls`.
    #[arg(long)]
    pub lmax: Option<usize>,
    /// Add time-averaged and reference columns to sff output.
    #[arg(long)]
    pub kbar: bool,
    /// Sample the full graph instead of its lower quadrant (perc-mc).
    #[arg(long)]
    pub full_graph: bool,
    /// Rerun the configuration embedded in a previous output file.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Fully resolved parameters of one run; embedded verbatim in every output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Experiment,
    pub dim: usize,
    #[serde(rename = "L")]
    pub l: Option<usize>,
    pub t_max: u64,
    pub samples: u64,
    pub seed: u64,
    pub format: Format,
    pub depth: usize,
    pub mode: Mode,
    pub q: Option<f64>,
    pub penetration: i64,
    pub l_max: usize,
    pub kbar: bool,
    pub full_graph: bool,
}

/// Recommended floor on SFF samples: `|tr U^t|^2` is heavy tailed.
pub const SFF_SAMPLE_FLOOR: u64 = 10_000;

impl RunConfig {
    /// Fills command-specific defaults for unset flags.
    pub fn resolve(cli: &Cli, command: Experiment) -> RunConfig {
        use Experiment::*;
        let dim = cli.dim.unwrap_or(match command {
            Spread2d | Sff => 2,
            _ => 1,
        });
        let l = cli.l.or(match command {
            Entropy => Some(if dim == 2 { 16 } else { 32 }),
            Sff => Some(16),
            _ => None,
        });
        let size = l.unwrap_or(0) as u64;
        let t_max = cli.tmax.unwrap_or(match command {
            Spread1d => 50,
            Spread2d => 10,
            Entropy => 2 * size,
            Sff => 4 * size,
            Walls => 64,
            _ => 0,
        });
        let samples = cli.samples.unwrap_or(match command {
            Spread1d => 5000,
            Spread2d => 2000,
            Entropy => 500,
            Sff => SFF_SAMPLE_FLOOR,
            Walls => 100_000,
            PercMc | PercWalls => 10_000,
            PercBound => 1,
        });
        let depth = cli.depth.unwrap_or(match command {
            PercWalls => 10,
            _ => 200,
        });
        RunConfig {
            command,
            dim,
            l,
            t_max,
            samples,
            seed: cli.seed,
            format: cli.format,
            depth,
            mode: cli.mode,
            q: cli.q,
            penetration: cli.penetration,
            l_max: cli.lmax.unwrap_or(200),
            kbar: cli.kbar,
            full_graph: cli.full_graph,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Diagnostic {
    Fatal(String),
    Warning(String),
}

impl Diagnostic {
    pub fn is_fatal(&self) -> bool {
        matches!(self, Diagnostic::Fatal(_))
    }
}

/// Checks a configuration before any work starts.
pub fn validate(c: &RunConfig) -> Vec<Diagnostic> {
    use Experiment::*;
    let mut out = Vec::new();
    let fatal = |out: &mut Vec<Diagnostic>, m: String| out.push(Diagnostic::Fatal(m));
    if c.samples == 0 {
        fatal(&mut out, "--samples must be at least 1".into());
    }
    if c.dim != 1 && c.dim != 2 {
        fatal(&mut out, format!("--dim {} not in {{1, 2}}", c.dim));
    }
    match (c.command, c.dim) {
        (Spread1d, 2) => fatal(&mut out, "spread1d runs on a 1D chain; drop --dim 2".into()),
        (Spread2d, 1) => fatal(&mut out, "spread2d runs on a 2D lattice; drop --dim 1".into()),
        _ => {}
    }
    if let Some(l) = c.l {
        if matches!(c.command, Entropy | Sff) && (l < 2 || l % 2 != 0) {
            fatal(&mut out, format!("--L {l}: finite systems need an even size of at least 2"));
        }
        if matches!(c.command, Spread1d | Spread2d | Walls | PercMc | PercBound | PercWalls) {
            out.push(Diagnostic::Warning(format!("--L {l} is ignored by this command")));
        }
    }
    if matches!(c.command, Spread1d | Spread2d | Entropy | Sff | Walls) && c.t_max == 0 {
        fatal(&mut out, "--tmax must be at least 1".into());
    }
    if c.penetration < 1 {
        fatal(&mut out, format!("--penetration {} must be at least 1", c.penetration));
    }
    if c.command == PercMc && c.depth == 0 {
        fatal(&mut out, "--depth must be at least 1".into());
    }
    if c.command == PercWalls && !(2..=12).contains(&c.depth) {
        fatal(&mut out, format!("--depth {} outside [2, 12] for wall enumeration", c.depth));
    }
    if let Some(q) = c.q {
        if !(0.0..=1.0).contains(&q) {
            fatal(&mut out, format!("--q {q} outside [0, 1]"));
        }
        if c.mode == Mode::Joint {
            fatal(&mut out, "--q applies to --mode independent only".into());
        }
    }
    if c.command == Walls && c.l_max < 2 {
        fatal(&mut out, "--lmax must be at least 2".into());
    }
    if c.command == Sff && c.samples > 0 && c.samples < SFF_SAMPLE_FLOOR {
        out.push(Diagnostic::Warning(format!(
            "{} samples: |tr U^t|^2 is heavy tailed, K(t) estimates need at least {SFF_SAMPLE_FLOOR}",
            c.samples
        )));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> RunConfig {
        let cli = Cli::try_parse_from(std::iter::once("floquet").chain(args.iter().copied())).unwrap();
        RunConfig::resolve(&cli, cli.command.unwrap())
    }

    #[test]
    fn defaults() {
        let c = parse(&["sff"]);
        assert_eq!((c.dim, c.l, c.t_max, c.samples), (2, Some(16), 64, 10_000));
        let c = parse(&["entropy", "--dim", "2", "--L", "24"]);
        assert_eq!(c.t_max, 48);
        assert_eq!(parse(&["perc-mc"]).depth, 200);
        assert!(validate(&parse(&["perc-bound"])).is_empty());
    }

    #[test]
    fn diagnostics() {
        let fatal = |args: &[&str]| validate(&parse(args)).iter().any(Diagnostic::is_fatal);
        assert!(fatal(&["spread1d", "--samples", "0"]));
        assert!(fatal(&["entropy", "--L", "31"]));
        assert!(fatal(&["spread2d", "--dim", "1"]));
        assert!(fatal(&["perc-mc", "--q", "0.3"]));
        assert!(fatal(&["perc-walls", "--depth", "20"]));
        assert!(!fatal(&["perc-mc", "--mode", "independent", "--q", "0.3"]));
        let d = validate(&parse(&["sff", "--samples", "100"]));
        assert!(matches!(&d[..], [Diagnostic::Warning(m)] if m.contains("heavy tailed")));
        assert!(Cli::try_parse_from(["floquet"]).is_err());
        assert!(Cli::try_parse_from(["floquet", "bogus"]).is_err());
    }
}
