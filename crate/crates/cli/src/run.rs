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


//! Dispatch of one configured run.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use floquet_core::circuit::{GateSource, Geometry};
use floquet_core::error::Error as CoreError;
use floquet_core::observables::{
    average_spread_with, entanglement_curve, fit_localization_length, lightspeed_fraction,
    wall_histogram, wall_histogram_dynamical, SpreadOptions,
};
use floquet_core::percolation::{
    analytic_bound, analytic_bound_with, count_walls, decouple_q, full_survival_curve,
    sample_quadrant, survival_curve, wall_blocks_path_check, ArrowModel, BoundReport, CountSource,
};
use floquet_core::percolation::bound::TABULATED_WALL_COUNTS;
use floquet_core::percolation::walls::wall_count_bound;
use floquet_core::sff::{
    default_plateau_window, default_ramp_window, fit_ramp, plateau_onset, rmt_reference, sff_curve,
};
use floquet_core::stats::{par_fold, sample_seed};

use crate::config::{validate, Diagnostic, Experiment, Mode, RunConfig};
use crate::output::{Cell, Table, Writer};

/// Failure of a run, mapped to the process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("runtime failure: {0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

#[derive(Debug)]
pub struct RunOutcome {
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

/// Validates, runs on a pool of `threads` workers (0: all cores), and writes outputs into `out`.
pub fn execute(config: &RunConfig, out: &Path, threads: usize) -> Result<RunOutcome, CliError> {
    let diagnostics = validate(config);
    let fatal: Vec<String> = diagnostics
        .iter()
        .filter_map(|d| match d {
            Diagnostic::Fatal(m) => Some(m.clone()),
            _ => None,
        })
        .collect();
    if !fatal.is_empty() {
        return Err(CliError::Config(fatal.join("; ")));
    }
    let warnings: Vec<String> = diagnostics
        .into_iter()
        .filter_map(|d| match d {
            Diagnostic::Warning(m) => Some(m),
            _ => None,
        })
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    let mut w = Writer::new(out, config)?;
    let start = Instant::now();
    pool.install(|| dispatch(config, &mut w))?;
    w.metadata(pool.current_num_threads(), start.elapsed().as_secs_f64(), &warnings)?;
    Ok(RunOutcome {
        files: w.written,
        warnings,
    })
}

fn dispatch(c: &RunConfig, w: &mut Writer) -> Result<(), CliError> {
    match c.command {
        Experiment::Spread1d => spread1d(c, w),
        Experiment::Spread2d => spread2d(c, w),
        Experiment::Entropy => entropy(c, w),
        Experiment::Sff => sff(c, w),
        Experiment::Walls => walls(c, w),
        Experiment::PercMc => perc_mc(c, w),
        Experiment::PercBound => perc_bound(w),
        Experiment::PercWalls => perc_walls(c, w),
    }
}

fn cells<const N: usize>(v: [Cell; N]) -> Vec<Cell> {
    v.into()
}

fn spread_table(profile: &floquet_core::observables::SpreadProfile) -> Table {
    let two_d = profile.dim == 2;
    let cols: &[&str] = if two_d {
        &["t", "x", "y", "mean", "stderr"]
    } else {
        &["t", "x", "mean", "stderr"]
    };
    let mut table = Table::new("spread", cols);
    for slice in &profile.slices {
        for (x, y) in slice.sites() {
            let e = profile.at::<f64>(slice.t, x, y);
            let mut row = vec![Cell::from(slice.t), Cell::from(x)];
            if two_d {
                row.push(Cell::from(y));
            }
            row.extend([Cell::from(e.mean), Cell::from(e.stderr)]);
            table.push(row);
        }
    }
    table
}

/// Fit window for the 1D localization length at time `t`.
pub fn localization_window(t: u64) -> (i64, i64) {
    (1, 40.min(2 * t as i64 - 1))
}

fn spread1d(c: &RunConfig, w: &mut Writer) -> Result<(), CliError> {
    let opts = SpreadOptions {
        source: GateSource::Uniform,
        times: (1..=c.t_max).collect(),
        interior: None,
    };
    let run = average_spread_with(Geometry::unbounded(1)?, &opts, c.samples, c.seed)?;
    w.table(&spread_table(&run.profile))?;
    let fit = fit_localization_length(&run.profile, c.t_max, localization_window(c.t_max));
    w.report(
        "summary",
        &json!({
            "cone_violations": run.profile.cone_violations,
            "localization": fit.as_ref().ok(),
            "fit_error": fit.as_ref().err().map(|e| e.to_string()),
        }),
    )?;
    Ok(())
}

/// Interior radius for the 2D density average at time `t` (the cone spans `[1−2t, 2t]`).
pub fn interior_radius(t: u64) -> i64 {
    (4 * t as i64) / 5
}

fn spread2d(c: &RunConfig, w: &mut Writer) -> Result<(), CliError> {
    let geo = Geometry::unbounded(2)?;
    let radius = interior_radius(c.t_max);
    let opts = SpreadOptions {
        source: GateSource::Uniform,
        times: (1..=c.t_max).collect(),
        interior: Some((c.t_max, radius)),
    };
    let run = average_spread_with(geo, &opts, c.samples, c.seed)?;
    w.table(&spread_table(&run.profile))?;
    let light = lightspeed_fraction(geo, c.t_max, c.samples, sample_seed(c.seed, u64::MAX))?;
    w.report(
        "summary",
        &json!({
            "cone_violations": run.profile.cone_violations,
            "interior_radius": radius,
            "interior_sites": run.interior_sites,
            "interior_density": run.interior_estimate(),
            "lightspeed_fraction": light,
        }),
    )?;
    Ok(())
}

fn finite_geometry(c: &RunConfig) -> Result<Geometry, CliError> {
    let l = c.l.ok_or_else(|| CliError::Config("--L is required".into()))?;
    Ok(Geometry::finite(c.dim, l)?)
}

fn entropy(c: &RunConfig, w: &mut Writer) -> Result<(), CliError> {
    let geo = finite_geometry(c)?;
    let l = c.l.unwrap_or(0);
    let curve = entanglement_curve(geo, c.t_max, c.samples, c.seed)?;
    let mut table = Table::new("entropy", &["t", "L", "mean", "stderr"]);
    for (t, (m, s)) in curve.mean.iter().zip(&curve.stderr).enumerate() {
        table.push(cells([t.into(), l.into(), (*m).into(), (*s).into()]));
    }
    w.table(&table)?;
    let from = (c.t_max / 2) as usize;
    w.report(
        "summary",
        &json!({
            "geometry": geo.describe(),
            "region_size": curve.region_size,
            "plateau_window": [from, c.t_max],
            "plateau": curve.plateau(from, c.t_max as usize),
        }),
    )?;
    Ok(())
}

fn sff(c: &RunConfig, w: &mut Writer) -> Result<(), CliError> {
    let geo = finite_geometry(c)?;
    let l = c.l.unwrap_or(0);
    let est = sff_curve(geo, c.t_max, c.samples, c.seed)?;
    let mut cols = vec!["t", "K", "stderr", "samples", "L", "geometry"];
    if c.kbar {
        cols.extend(["Kbar", "rmt"]);
    }
    let mut table = Table::new("sff", &cols);
    let kbar = est.time_average();
    for (i, &t) in est.times.iter().enumerate() {
        let mut row = cells([
            t.into(),
            est.k[i].into(),
            est.stderr[i].into(),
            est.samples.into(),
            l.into(),
            geo.describe().into(),
        ]);
        if c.kbar {
            row.extend([kbar[i].into(), rmt_reference::<f64>(l as u32, t).into()]);
        }
        table.push(row);
    }
    w.table(&table)?;
    let ramp = fit_ramp(&est, default_ramp_window(l));
    let onset = ramp
        .as_ref()
        .ok()
        .and_then(|r| plateau_onset(&est, r, default_plateau_window(l)).ok());
    w.report(
        "summary",
        &json!({
            "geometry": geo.describe(),
            "ramp": ramp.as_ref().ok(),
            "ramp_error": ramp.as_ref().err().map(|e| e.to_string()),
            "plateau_onset": onset,
            "log2_kbar_final": kbar.last().map(|v| v.log2()),
        }),
    )?;
    Ok(())
}

/// Fit window of the first-wall law.
pub fn wall_fit_window(l_max: usize) -> (usize, usize) {
    (1, 40.min(l_max))
}

fn walls(c: &RunConfig, w: &mut Writer) -> Result<(), CliError> {
    let h = if c.penetration == 1 {
        wall_histogram(c.samples, c.seed, c.l_max)?
    } else {
        wall_histogram_dynamical(c.samples, c.seed, c.l_max, c.t_max, c.penetration)?
    };
    let mut table = Table::new("walls", &["l", "probability", "stderr"]);
    for l in 0..=c.l_max {
        let e = floquet_core::stats::Estimate::<f64>::proportion(h.counts[l], h.samples);
        table.push(cells([l.into(), e.mean.into(), e.stderr.into()]));
    }
    w.table(&table)?;
    let analysis = h.analyze(wall_fit_window(c.l_max));
    w.report(
        "summary",
        &json!({
            "penetration": c.penetration,
            "detection": if c.penetration == 1 { "gate predicate" } else { "dynamical" },
            "no_wall_within_lmax": h.none,
            "analysis": analysis.as_ref().ok(),
            "analysis_error": analysis.as_ref().err().map(|e| e.to_string()),
            "mean_l_over_mu": analysis.as_ref().ok().map(|a| a.mean_l.mean / a.mu),
        }),
    )?;
    Ok(())
}

fn arrow_model(c: &RunConfig) -> ArrowModel {
    match c.mode {
        Mode::Joint => ArrowModel::Joint,
        Mode::Independent => ArrowModel::Independent {
            q: c.q.unwrap_or_else(|| decouple_q().1),
        },
    }
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Joint => "joint",
        Mode::Independent => "independent",
    }
}

fn perc_mc(c: &RunConfig, w: &mut Writer) -> Result<(), CliError> {
    let model = arrow_model(c);
    let curve = if c.full_graph {
        full_survival_curve(c.depth, model, c.samples, c.seed)?
    } else {
        survival_curve(c.depth, model, c.samples, c.seed)?
    };
    let mut table = Table::new("survival", &["depth", "mode", "estimate", "stderr", "samples"]);
    for d in 0..=c.depth {
        let e = curve.at(d);
        table.push(cells([d.into(), mode_name(c.mode).into(), e.mean.into(), e.stderr.into(), e.samples.into()]));
    }
    w.table(&table)?;
    w.report(
        "summary",
        &json!({
            "model": model,
            "graph": if c.full_graph { "full" } else { "quadrant" },
            "survival": curve.final_estimate(),
        }),
    )?;
    Ok(())
}

#[derive(Serialize)]
struct BoundFile {
    q_closed_form: &'static str,
    epsilon_closed_form: &'static str,
    #[serde(flatten)]
    bound: BoundReport,
    /// Path lower bound at two decimals.
    path_bound_rounded: String,
    enumerated: BoundReport,
}

fn perc_bound(w: &mut Writer) -> Result<(), CliError> {
    let bound = analytic_bound()?;
    let enumerated = analytic_bound_with(bound.q, CountSource::Enumerated)?;
    let file = BoundFile {
        q_closed_form: "1/2 - (1/2)*sqrt(21/85)",
        epsilon_closed_form: "(43 - sqrt(1785))/170",
        path_bound_rounded: format!("{:.2}", bound.path_bound),
        bound,
        enumerated,
    };
    w.report("bound", &file)?;
    Ok(())
}

/// Depth of the sampled instances in the wall-versus-path check.
pub const CHECK_DEPTH: usize = 12;

fn perc_walls(c: &RunConfig, w: &mut Writer) -> Result<(), CliError> {
    let mut table = Table::new("wall_counts", &["d", "n_d", "tabulated", "bound"]);
    let mut counts = Vec::new();
    for d in 2..=c.depth {
        let n = count_walls(d)?;
        counts.push(n);
        let tab = TABULATED_WALL_COUNTS
            .get(d - 2)
            .map_or(Cell::Text(String::new()), |&v| v.into());
        table.push(vec![d.into(), n.into(), tab, wall_count_bound(d).into()]);
    }
    w.table(&table)?;
    let model = arrow_model(c);
    let (violations, with_wall) = par_fold(
        c.samples,
        || (0u64, 0u64),
        |acc, i| {
            let g = sample_quadrant(CHECK_DEPTH, model, sample_seed(c.seed, i)).expect("valid depth");
            let check = wall_blocks_path_check(&g);
            acc.0 += !check.holds() as u64;
            acc.1 += check.shortest_wall.is_some() as u64;
        },
        |a, b| (a.0 + b.0, a.1 + b.1),
    );
    w.report(
        "summary",
        &json!({
            "counts": counts,
            "tabulated": TABULATED_WALL_COUNTS,
            "check": {
                "model": model,
                "depth": CHECK_DEPTH,
                "instances": c.samples,
                "instances_with_wall": with_wall,
                "violations": violations,
            },
        }),
    )?;
    Ok(())
}
