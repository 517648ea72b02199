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


//! End-to-end runs of the `floquet` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn floquet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_floquet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    let mut all: Vec<&str> = args.to_vec();
    all.extend(["--out", dir.to_str().unwrap()]);
    floquet(&all)
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn perc_bound_reports_the_path_bound() {
    let dir = TempDir::new().unwrap();
    let out = run_in(dir.path(), &["perc-bound"]);
    assert_eq!(out.status.code(), Some(0));
    let b = json(&dir.path().join("bound.json"));
    let r = &b["report"];
    assert!((r["q"].as_f64().unwrap() - 0.251475).abs() < 1e-6);
    assert!((r["epsilon"].as_f64().unwrap() - 0.00442).abs() < 1e-4);
    let no_path = r["no_path_bound"].as_f64().unwrap();
    assert!((0.555..=0.57).contains(&no_path), "{no_path}");
    assert_eq!(r["path_bound_rounded"], "0.44");
    assert_eq!(r["terms"].as_array().unwrap().len(), 5);
    assert!(r["tail"].as_f64().unwrap() > 0.0);
    assert_eq!(b["stamp"]["config"]["command"], "perc-bound");
    assert!(dir.path().join("metadata.json").exists());
}

const SFF_ARGS: &[&str] = &["sff", "--dim", "2", "--L", "16", "--tmax", "64", "--samples", "1000", "--seed", "7"];

#[test]
fn sff_is_deterministic_across_runs_and_thread_counts() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let c = TempDir::new().unwrap();
    let ra = run_in(a.path(), SFF_ARGS);
    assert_eq!(ra.status.code(), Some(0));
    // below the recommended sample floor
    assert!(String::from_utf8_lossy(&ra.stderr).contains("warning"));
    assert_eq!(run_in(b.path(), SFF_ARGS).status.code(), Some(0));
    let mut threaded = SFF_ARGS.to_vec();
    threaded.extend(["--threads", "3"]);
    assert_eq!(run_in(c.path(), &threaded).status.code(), Some(0));
    for name in ["sff.csv", "summary.json"] {
        let first = read(&a.path().join(name));
        assert_eq!(first, read(&b.path().join(name)), "{name}");
        assert_eq!(first, read(&c.path().join(name)), "{name}");
    }
    assert_eq!(json(&c.path().join("metadata.json"))["threads"], 3);
    let csv = read(&a.path().join("sff.csv"));
    let header = csv.lines().nth(1).unwrap();
    assert_eq!(header, "t,K,stderr,samples,L,geometry");
    assert_eq!(csv.lines().count(), 2 + 65);
}

#[test]
fn rerun_from_embedded_config_is_bit_identical() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let c = TempDir::new().unwrap();
    let args = ["entropy", "--dim", "1", "--L", "12", "--tmax", "20", "--samples", "40", "--seed", "3"];
    assert_eq!(run_in(a.path(), &args).status.code(), Some(0));
    let csv = a.path().join("entropy.csv");
    assert_eq!(run_in(b.path(), &["--config", csv.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(read(&csv), read(&b.path().join("entropy.csv")));
    // the JSON stamp carries the same configuration
    let summary = a.path().join("summary.json");
    assert_eq!(run_in(c.path(), &["--config", summary.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(read(&summary), read(&c.path().join("summary.json")));
}

#[test]
fn seed_is_recorded_verbatim() {
    let dir = TempDir::new().unwrap();
    let args = ["walls", "--samples", "200", "--seed", "18446744073709551615", "--lmax", "50"];
    assert_eq!(run_in(dir.path(), &args).status.code(), Some(0));
    let first = read(&dir.path().join("walls.csv"));
    assert!(first.lines().next().unwrap().contains("\"seed\":18446744073709551615"));
    assert_eq!(json(&dir.path().join("metadata.json"))["stamp"]["config"]["seed"], u64::MAX);
}

#[test]
fn spread1d_localization_length_in_range() {
    let dir = TempDir::new().unwrap();
    let out = run_in(dir.path(), &["spread1d", "--tmax", "50", "--samples", "5000"]);
    assert_eq!(out.status.code(), Some(0));
    // independent fit of ln mean over x in [1, 40] at t = 50, read back from the CSV
    let text = read(&dir.path().join("spread.csv"));
    let mut rd = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for rec in rd.records() {
        let rec = rec.unwrap();
        let t: u64 = rec[0].parse().unwrap();
        let x: i64 = rec[1].parse().unwrap();
        let mean: f64 = rec[2].parse().unwrap();
        if t == 50 && (1..=40).contains(&x) {
            xs.push(x as f64);
            ys.push(mean.ln());
        }
    }
    assert_eq!(xs.len(), 40);
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let mu = -sxx / sxy;
    assert!((8.9..=11.9).contains(&mu), "mu = {mu}");
    let reported = json(&dir.path().join("summary.json"))["report"]["localization"]["mu"]
        .as_f64()
        .unwrap();
    assert!((reported - mu).abs() < 1e-9);
}

#[test]
fn json_format_writes_tables_as_json() {
    let dir = TempDir::new().unwrap();
    let args = ["perc-mc", "--depth", "20", "--samples", "300", "--mode", "independent", "--format", "json"];
    assert_eq!(run_in(dir.path(), &args).status.code(), Some(0));
    assert!(!dir.path().join("survival.csv").exists());
    let v = json(&dir.path().join("survival.json"));
    assert_eq!(v["stamp"]["config"]["format"], "json");
    let s = json(&dir.path().join("summary.json"));
    assert_eq!(s["report"]["graph"], "quadrant");
}

#[test]
fn config_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let cases: &[&[&str]] = &[
        &["spread1d", "--samples", "0"],
        &["spread2d", "--dim", "1"],
        &["entropy", "--dim", "1", "--L", "7"],
        &["bogus"],
        &["walls", "--format", "xml"],
    ];
    for args in cases {
        let out = run_in(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    let missing = floquet(&["--config", "/nonexistent/file.csv"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_with_three() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("occupied");
    std::fs::write(&file, "x").unwrap();
    let out = run_in(&file, &["perc-bound"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
}

#[test]
fn help_exits_cleanly() {
    assert_eq!(floquet(&["--help"]).status.code(), Some(0));
}
