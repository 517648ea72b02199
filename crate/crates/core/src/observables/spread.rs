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

//! Operator spreading and light-speed growth.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::circuit::{FloquetCircuit, GateSource, Geometry, LightCone, WindowEvolver};
use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliOperator, Site};
use crate::scalar::Real;
use crate::stats::{self, fit_line, par_fold, Estimate};

/// Indicator of non-identity letters.
pub fn rho(p: &PauliOperator) -> BTreeMap<Site, u8> {
    p.letters().map(|(s, _)| (*s, 1)).collect()
}

/// Occupation counts on a rectangular window at one time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpreadSlice {
    /// Periods.
    pub t: u64,
    pub x0: i64,
    pub y0: i64,
    pub width: usize,
    pub height: usize,
    pub counts: Vec<u64>,
}

impl SpreadSlice {
    fn new(dim: usize, t: u64) -> Self {
        // cone of the origin plus a one-site margin, to make leaks observable
        let cone = LightCone::new(&Site::origin(dim), 2 * t);
        let (x0, x1) = (cone.x.0 - 1, cone.x.1 + 1);
        let (y0, y1) = if dim == 2 { (cone.y.0 - 1, cone.y.1 + 1) } else { (0, 0) };
        let width = (x1 - x0 + 1) as usize;
        let height = (y1 - y0 + 1) as usize;
        Self {
            t,
            x0,
            y0,
            width,
            height,
            counts: vec![0; width * height],
        }
    }

    #[inline]
    fn index(&self, x: i64, y: i64) -> Option<usize> {
        let (dx, dy) = (x - self.x0, y - self.y0);
        if dx < 0 || dy < 0 || dx >= self.width as i64 || dy >= self.height as i64 {
            None
        } else {
            Some(dy as usize * self.width + dx as usize)
        }
    }

    pub fn count(&self, x: i64, y: i64) -> u64 {
        self.index(x, y).map_or(0, |i| self.counts[i])
    }

    pub fn sites(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        (0..self.height).flat_map(move |yy| {
            (0..self.width).map(move |xx| (self.x0 + xx as i64, self.y0 + yy as i64))
        })
    }

    fn merge(&mut self, other: &SpreadSlice) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }
}

/// Circuit-averaged ρ(x, t) for an initial `X` at the origin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpreadProfile {
    pub dim: usize,
    pub samples: u64,
    pub slices: Vec<SpreadSlice>,
    /// Realizations whose support ever left the light cone (must be zero).
    pub cone_violations: u64,
}

impl SpreadProfile {
    pub fn times(&self) -> Vec<u64> {
        self.slices.iter().map(|s| s.t).collect()
    }

    pub fn slice(&self, t: u64) -> Option<&SpreadSlice> {
        self.slices.iter().find(|s| s.t == t)
    }

    /// Mean occupation and its standard error at one site.
    pub fn at<F: Real>(&self, t: u64, x: i64, y: i64) -> Estimate<F> {
        let hits = self.slice(t).map_or(0, |s| s.count(x, y));
        Estimate::proportion(hits, self.samples)
    }

    /// Largest number of realizations with support outside the cone, over all recorded sites.
    pub fn max_outside_cone_count(&self) -> u64 {
        let origin = Site::origin(self.dim);
        self.slices
            .iter()
            .flat_map(|s| {
                let cone = LightCone::new(&origin, 2 * s.t);
                s.sites()
                    .filter(move |&(x, y)| {
                        let site = if self.dim == 1 { Site::Line(x) } else { Site::Plane(x, y) };
                        !cone.contains(&site)
                    })
                    .map(move |(x, y)| s.count(x, y))
            })
            .max()
            .unwrap_or(0)
    }
}

/// Which sites an `X` at the origin reaches, per realization and recorded time.
fn realization_spread(
    geometry: Geometry,
    source: GateSource,
    times: &[u64],
    seed: u64,
    out: &mut [SpreadSlice],
    interior: Option<(u64, i64, &mut stats::Tally)>,
) -> bool {
    let t_max = times.iter().copied().max().unwrap_or(0);
    let mut circuit = FloquetCircuit::with_source(geometry, seed, source);
    let origin = Site::origin(geometry.dim);
    let p = PauliOperator::single(origin, Letter::X);
    let mut ev = WindowEvolver::new(&circuit, &p, 2 * t_max).expect("unbounded geometry");
    let mut ok = true;
    let mut interior = interior;
    let mut record = |ev: &WindowEvolver, t: u64, out: &mut [SpreadSlice]| {
        for sl in out.iter_mut().filter(|s| s.t == t) {
            ev.for_each_support(|x, y| {
                if let Some(i) = sl.index(x, y) {
                    sl.counts[i] += 1;
                }
            });
        }
        if let Some((ti, r, tally)) = interior.as_mut() {
            if *ti == t {
                let mut n = 0u64;
                ev.for_each_support(|x, y| {
                    if x.abs() <= *r && y.abs() <= *r {
                        n += 1;
                    }
                });
                tally.push(n);
            }
        }
    };
    record(&ev, 0, out);
    for h in 1..=2 * t_max {
        ev.step(&mut circuit);
        if let Some((xa, xb, ya, yb)) = ev.bbox() {
            let cone = LightCone::new(&origin, h);
            let corner_a = if geometry.dim == 1 { Site::Line(xa) } else { Site::Plane(xa, ya) };
            let corner_b = if geometry.dim == 1 { Site::Line(xb) } else { Site::Plane(xb, yb) };
            if !cone.contains(&corner_a) || !cone.contains(&corner_b) {
                ok = false;
            }
        }
        if h % 2 == 0 {
            record(&ev, h / 2, out);
        }
    }
    ok
}

/// Options for [`average_spread_with`].
#[derive(Clone, Debug)]
pub struct SpreadOptions {
    pub source: GateSource,
    /// Periods at which ρ is recorded.
    pub times: Vec<u64>,
    /// Optional `(t, radius)` for an exact per-realization interior average.
    pub interior: Option<(u64, i64)>,
}

#[derive(Clone, Debug)]
pub struct SpreadRun {
    pub profile: SpreadProfile,
    /// Per-realization count of occupied interior sites, if requested.
    pub interior: Option<stats::Tally>,
    pub interior_sites: u64,
}

impl SpreadRun {
    /// Interior mean ρ with the realization-to-realization standard error.
    pub fn interior_estimate(&self) -> Option<Estimate<f64>> {
        let t = self.interior?;
        let n = self.interior_sites as f64;
        let e: Estimate<f64> = t.estimate();
        Some(Estimate {
            mean: e.mean / n,
            stderr: e.stderr / n,
            samples: e.samples,
        })
    }
}

/// Per-site mean of ρ over independent realizations, σx at the origin, every `t <= t_max`.
pub fn average_spread(geometry: Geometry, t_max: u64, samples: u64, seed: u64) -> Result<SpreadProfile> {
    let opts = SpreadOptions {
        source: GateSource::Uniform,
        times: (0..=t_max).collect(),
        interior: None,
    };
    Ok(average_spread_with(geometry, &opts, samples, seed)?.profile)
}

pub fn average_spread_with(
    geometry: Geometry,
    opts: &SpreadOptions,
    samples: u64,
    seed: u64,
) -> Result<SpreadRun> {
    if samples == 0 {
        return Err(Error::OutOfRange("samples must be at least 1".into()));
    }
    if geometry.is_finite() {
        return Err(Error::GeometryMismatch("spreading runs on an unbounded lattice".into()));
    }
    let dim = geometry.dim;
    let empty = || {
        (
            opts.times
                .iter()
                .map(|&t| SpreadSlice::new(dim, t))
                .collect::<Vec<_>>(),
            0u64,
            stats::Tally::default(),
        )
    };
    let (slices, violations, tally) = par_fold(
        samples,
        empty,
        |acc, i| {
            let interior = opts.interior.map(|(t, r)| (t, r, &mut acc.2));
            let ok = realization_spread(
                geometry,
                opts.source,
                &opts.times,
                stats::sample_seed(seed, i),
                &mut acc.0,
                interior,
            );
            if !ok {
                acc.1 += 1;
            }
        },
        |mut a, b| {
            for (x, y) in a.0.iter_mut().zip(&b.0) {
                x.merge(y);
            }
            (a.0, a.1 + b.1, a.2.merge(b.2))
        },
    );
    let interior_sites = opts.interior.map_or(0, |(_, r)| {
        let side = (2 * r + 1) as u64;
        if dim == 2 {
            side * side
        } else {
            side
        }
    });
    Ok(SpreadRun {
        profile: SpreadProfile {
            dim,
            samples,
            slices,
            cone_violations: violations,
        },
        interior: opts.interior.map(|_| tally),
        interior_sites,
    })
}

/// Exponential fit `ρ(x) = c·e^{-x/μ}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalizationFit {
    pub mu: f64,
    pub c: f64,
    /// Closed range of `x` used.
    pub window: (i64, i64),
    /// RMS residual of the log-linear fit.
    pub residual: f64,
    pub points: usize,
}

/// Fits `ln y = ln c − x/μ` by least squares.
pub fn fit_exponential<F: Real>(xs: &[F], ys: &[F]) -> Result<(F, F, F)> {
    if xs.len() < 5 {
        return Err(Error::Fit(format!("{} points in window, need at least 5", xs.len())));
    }
    if ys.iter().any(|&y| y <= F::zero()) {
        return Err(Error::Fit("non-positive value in window".into()));
    }
    let logs: Vec<F> = ys.iter().map(|y| y.ln()).collect();
    let line = fit_line(xs, &logs)?;
    if line.slope >= F::zero() {
        return Err(Error::Fit("profile does not decay".into()));
    }
    Ok((-F::one() / line.slope, line.intercept.exp(), line.residual))
}

/// Localization length from a 1D profile at time `t`, fitted over `x ∈ [x_min, x_max]`.
pub fn fit_localization_length(
    profile: &SpreadProfile,
    t: u64,
    window: (i64, i64),
) -> Result<LocalizationFit> {
    if profile.dim != 1 {
        return Err(Error::GeometryMismatch("localization fit needs a 1D profile".into()));
    }
    let s = profile
        .slice(t)
        .ok_or_else(|| Error::OutOfRange(format!("time {t} not recorded")))?;
    let (lo, hi) = window;
    if lo < s.x0 || hi >= s.x0 + s.width as i64 || lo > hi {
        return Err(Error::OutOfRange(format!("window [{lo}, {hi}] outside profile")));
    }
    let xs: Vec<f64> = (lo..=hi).map(|x| x as f64).collect();
    let ys: Vec<f64> = (lo..=hi)
        .map(|x| s.count(x, 0) as f64 / profile.samples as f64)
        .collect();
    let (mu, c, residual) = fit_exponential(&xs, &ys)?;
    Ok(LocalizationFit {
        mu,
        c,
        window,
        residual,
        points: xs.len(),
    })
}

/// Whether `p`, evolved `half_steps` from a single site at `origin`, touches its light-cone boundary.
pub fn boundary_support(p: &PauliOperator, half_steps: u64, origin: &Site) -> bool {
    if half_steps == 0 {
        return p.get(origin) != Letter::I;
    }
    let cone = LightCone::new(origin, half_steps);
    p.letters().any(|(s, _)| cone.on_boundary(s))
}

/// Whether one realization keeps boundary support at every half-step up to `t_max` periods.
pub fn lightspeed_realization(circuit: &mut FloquetCircuit, t_max: u64) -> bool {
    let dim = circuit.geometry().dim;
    let origin = Site::origin(dim);
    let p = PauliOperator::single(origin, Letter::X);
    let mut ev = WindowEvolver::new(circuit, &p, 2 * t_max).expect("unbounded geometry");
    for h in 1..=2 * t_max {
        ev.step(circuit);
        let Some((xa, xb, ya, yb)) = ev.bbox() else {
            return false;
        };
        let cone = LightCone::new(&origin, h);
        let touches = xa == cone.x.0
            || xb == cone.x.1
            || (dim == 2 && (ya == cone.y.0 || yb == cone.y.1));
        if !touches {
            return false;
        }
    }
    true
}

/// Fraction of realizations with light-speed growth up to `t_max` periods.
pub fn lightspeed_fraction(geometry: Geometry, t_max: u64, samples: u64, seed: u64) -> Result<Estimate<f64>> {
    lightspeed_fraction_with(geometry, GateSource::Uniform, t_max, samples, seed)
}

pub fn lightspeed_fraction_with(
    geometry: Geometry,
    source: GateSource,
    t_max: u64,
    samples: u64,
    seed: u64,
) -> Result<Estimate<f64>> {
    if samples == 0 {
        return Err(Error::OutOfRange("samples must be at least 1".into()));
    }
    if geometry.is_finite() {
        return Err(Error::GeometryMismatch("light-speed growth needs an unbounded lattice".into()));
    }
    let hits = par_fold(
        samples,
        || 0u64,
        |acc, i| {
            let mut c = FloquetCircuit::with_source(geometry, stats::sample_seed(seed, i), source);
            if lightspeed_realization(&mut c, t_max) {
                *acc += 1;
            }
        },
        |a, b| a + b,
    );
    Ok(Estimate::proportion(hits, samples))
}
