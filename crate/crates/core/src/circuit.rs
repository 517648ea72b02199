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

//! Floquet brickwork circuits in one and two dimensions.
//!
//! Layer A gates sit on even anchors, layer B on odd anchors. In 1D the gate at anchor `x` acts on
//! `(x, x+1)`; in 2D the gate at `(x, y)` acts on `(x,y), (x+1,y), (x,y+1), (x+1,y+1)` in that
//! local order. One period is `U = B·A`, and the Heisenberg map `p -> U p U†` therefore conjugates
//! by layer A first and then by layer B.

use std::collections::{BTreeMap, HashMap};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clifford::{self, CliffordGate, LocalTable};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::pauli::{Letter, PackedPauli, PauliOperator, Site};
use crate::stats::hash_words;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Layer {
    A,
    B,
}

impl Layer {
    #[inline]
    pub fn parity(self) -> i64 {
        match self {
            Layer::A => 0,
            Layer::B => 1,
        }
    }

    /// Layer applied at half-step `h` (0-based).
    #[inline]
    pub fn at_half_step(h: u64) -> Layer {
        if h % 2 == 0 {
            Layer::A
        } else {
            Layer::B
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Extent {
    Unbounded,
    /// `lx × ly` sites (`ly = 1` in 1D).
    Finite { lx: usize, ly: usize, periodic: bool },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Geometry {
    pub dim: usize,
    pub extent: Extent,
}

impl Geometry {
    pub fn unbounded(dim: usize) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidGeometry(format!("dimension {dim} not in {{1, 2}}")));
        }
        Ok(Self {
            dim,
            extent: Extent::Unbounded,
        })
    }

    pub fn chain(l: usize, periodic: bool) -> Result<Self> {
        if l < 2 || l % 2 != 0 {
            return Err(Error::InvalidGeometry(format!(
                "chain length {l} must be even and at least 2"
            )));
        }
        Ok(Self {
            dim: 1,
            extent: Extent::Finite {
                lx: l,
                ly: 1,
                periodic,
            },
        })
    }

    pub fn plane(lx: usize, ly: usize, periodic: bool) -> Result<Self> {
        if lx < 2 || ly < 2 || lx % 2 != 0 || ly % 2 != 0 {
            return Err(Error::InvalidGeometry(format!(
                "plane {lx}x{ly} needs even sides of at least 2"
            )));
        }
        Ok(Self {
            dim: 2,
            extent: Extent::Finite { lx, ly, periodic },
        })
    }

    /// Near-square periodic patch with `l` sites and even sides (`lx <= ly`).
    pub fn patch(l: usize) -> Result<Self> {
        let mut best = None;
        let mut lx = 2;
        while lx * lx <= l {
            if l % lx == 0 && (l / lx) % 2 == 0 {
                best = Some((lx, l / lx));
            }
            lx += 2;
        }
        let (lx, ly) = best.ok_or_else(|| {
            Error::InvalidGeometry(format!("{l} sites cannot form an even-sided patch"))
        })?;
        Self::plane(lx, ly, true)
    }

    /// Periodic finite system of `l` total sites in dimension `dim`.
    pub fn finite(dim: usize, l: usize) -> Result<Self> {
        match dim {
            1 => Self::chain(l, true),
            2 => Self::patch(l),
            _ => Err(Error::InvalidGeometry(format!("dimension {dim} not in {{1, 2}}"))),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.extent, Extent::Finite { .. })
    }

    pub fn num_sites(&self) -> Option<usize> {
        match self.extent {
            Extent::Finite { lx, ly, .. } => Some(lx * ly),
            Extent::Unbounded => None,
        }
    }

    /// Local qubits per gate.
    pub fn gate_size(&self) -> usize {
        if self.dim == 1 {
            2
        } else {
            4
        }
    }

    pub fn shape(&self) -> Option<(usize, usize)> {
        match self.extent {
            Extent::Finite { lx, ly, .. } => Some((lx, ly)),
            Extent::Unbounded => None,
        }
    }

    pub fn describe(&self) -> String {
        match self.extent {
            Extent::Unbounded => format!("{}d-unbounded", self.dim),
            Extent::Finite { lx, ly, periodic } => {
                let bc = if periodic { "periodic" } else { "open" };
                if self.dim == 1 {
                    format!("1d-{lx}-{bc}")
                } else {
                    format!("2d-{lx}x{ly}-{bc}")
                }
            }
        }
    }

    fn wrap(&self, site: Site) -> Site {
        match (self.extent, site) {
            (Extent::Finite { lx, periodic: true, .. }, Site::Line(x)) => {
                Site::Line(x.rem_euclid(lx as i64))
            }
            (Extent::Finite { lx, ly, periodic: true }, Site::Plane(x, y)) => {
                Site::Plane(x.rem_euclid(lx as i64), y.rem_euclid(ly as i64))
            }
            _ => site,
        }
    }

    pub fn contains(&self, site: &Site) -> bool {
        if site.dim() != self.dim {
            return false;
        }
        match self.extent {
            Extent::Unbounded => true,
            Extent::Finite { lx, ly, .. } => {
                (0..lx as i64).contains(&site.x()) && (0..ly as i64).contains(&site.y())
            }
        }
    }

    /// Qubit index on a finite system (row-major, `x` fastest).
    pub fn index_of(&self, site: &Site) -> Option<usize> {
        match self.extent {
            Extent::Finite { lx, .. } if self.contains(site) => {
                Some(site.y() as usize * lx + site.x() as usize)
            }
            _ => None,
        }
    }

    pub fn site_of(&self, index: usize) -> Site {
        match self.extent {
            Extent::Finite { lx, .. } => {
                if self.dim == 1 {
                    Site::Line(index as i64)
                } else {
                    Site::Plane((index % lx) as i64, (index / lx) as i64)
                }
            }
            Extent::Unbounded => panic!("unbounded geometry has no site indexing"),
        }
    }

    /// Anchor of the `layer` gate covering `site` and the site's local index, if that gate exists.
    pub fn anchor_of(&self, layer: Layer, site: &Site) -> Option<(Site, usize)> {
        let p = layer.parity();
        let (anchor, local) = match *site {
            Site::Line(x) => {
                let dx = (x - p).rem_euclid(2);
                (Site::Line(x - dx), dx as usize)
            }
            Site::Plane(x, y) => {
                let dx = (x - p).rem_euclid(2);
                let dy = (y - p).rem_euclid(2);
                (Site::Plane(x - dx, y - dy), (dx + 2 * dy) as usize)
            }
        };
        if self.gate_exists(&anchor) {
            Some((self.wrap(anchor), local))
        } else {
            None
        }
    }

    fn gate_exists(&self, anchor: &Site) -> bool {
        match self.extent {
            Extent::Unbounded | Extent::Finite { periodic: true, .. } => true,
            Extent::Finite {
                lx,
                ly,
                periodic: false,
            } => {
                let x_ok = anchor.x() >= 0 && anchor.x() + 1 < lx as i64;
                let y_ok = self.dim == 1 || (anchor.y() >= 0 && anchor.y() + 1 < ly as i64);
                x_ok && y_ok
            }
        }
    }

    /// Sites of the gate at `anchor`, in local order, wrapped on periodic systems.
    pub fn footprint(&self, anchor: &Site) -> Vec<Site> {
        let raw = match *anchor {
            Site::Line(x) => vec![Site::Line(x), Site::Line(x + 1)],
            Site::Plane(x, y) => vec![
                Site::Plane(x, y),
                Site::Plane(x + 1, y),
                Site::Plane(x, y + 1),
                Site::Plane(x + 1, y + 1),
            ],
        };
        raw.into_iter().map(|s| self.wrap(s)).collect()
    }

    /// All gate anchors of `layer` on a finite system.
    pub fn anchors(&self, layer: Layer) -> Vec<Site> {
        let Extent::Finite { lx, ly, .. } = self.extent else {
            return Vec::new();
        };
        let p = layer.parity();
        let mut out = Vec::new();
        if self.dim == 1 {
            let mut x = p;
            while x < lx as i64 {
                if self.gate_exists(&Site::Line(x)) {
                    out.push(Site::Line(x));
                }
                x += 2;
            }
        } else {
            let mut y = p;
            while y < ly as i64 {
                let mut x = p;
                while x < lx as i64 {
                    if self.gate_exists(&Site::Plane(x, y)) {
                        out.push(Site::Plane(x, y));
                    }
                    x += 2;
                }
                y += 2;
            }
        }
        out
    }
}

/// Closed interval of one coordinate covered after `h` half-steps from `origin`.
pub fn cone_interval(origin: i64, h: u64) -> (i64, i64) {
    let (mut lo, mut hi) = (origin, origin);
    for k in 0..h {
        let p = Layer::at_half_step(k).parity();
        // the gate covering lo starts at the anchor below it; the one covering hi ends above it
        lo -= (lo - p).rem_euclid(2);
        hi += 1 - (hi - p).rem_euclid(2);
    }
    (lo, hi)
}

/// Light cone of a single site after `h` half-steps: per-axis closed intervals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LightCone {
    pub x: (i64, i64),
    pub y: (i64, i64),
    pub dim: usize,
}

impl LightCone {
    pub fn new(origin: &Site, h: u64) -> Self {
        let x = cone_interval(origin.x(), h);
        let y = match origin {
            Site::Line(_) => (0, 0),
            Site::Plane(_, y) => cone_interval(*y, h),
        };
        Self {
            x,
            y,
            dim: origin.dim(),
        }
    }

    pub fn contains(&self, s: &Site) -> bool {
        (self.x.0..=self.x.1).contains(&s.x()) && (self.y.0..=self.y.1).contains(&s.y())
    }

    /// On the outer ring of the cone.
    pub fn on_boundary(&self, s: &Site) -> bool {
        self.contains(s)
            && (s.x() == self.x.0
                || s.x() == self.x.1
                || (self.dim == 2 && (s.y() == self.y.0 || s.y() == self.y.1)))
    }

    pub fn side(&self) -> i64 {
        self.x.1 - self.x.0 + 1
    }
}

/// Which gates populate the registry.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateSource {
    /// Independent uniformly random Cliffords.
    #[default]
    Uniform,
    /// Every gate is the identity.
    Identity,
    /// 1D: swap the two sites. 2D: exchange diagonally opposite corners.
    Swap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GateKey {
    pub layer: Layer,
    pub anchor: Site,
    /// Always 0 for quenched circuits.
    pub period: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateRecord {
    pub key: GateKey,
    /// Gate fixture text.
    pub gate: String,
}

/// Serializable description of a circuit realization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitSpec {
    pub geometry: Geometry,
    pub seed: u64,
    pub source: GateSource,
    pub quenched: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub registry: Option<Vec<GateRecord>>,
}

#[derive(Clone, Debug)]
pub struct FloquetCircuit {
    geometry: Geometry,
    seed: u64,
    source: GateSource,
    quenched: bool,
    clock: u64,
    index: HashMap<GateKey, u32>,
    tables: Vec<LocalTable>,
}

impl FloquetCircuit {
    pub fn new(geometry: Geometry, seed: u64) -> Self {
        Self::with_source(geometry, seed, GateSource::Uniform)
    }

    pub fn with_source(geometry: Geometry, seed: u64, source: GateSource) -> Self {
        Self {
            geometry,
            seed,
            source,
            quenched: true,
            clock: 0,
            index: HashMap::new(),
            tables: Vec::new(),
        }
    }

    /// Resample gates every period instead of reusing them.
    pub fn annealed(mut self) -> Self {
        self.quenched = false;
        self
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn is_quenched(&self) -> bool {
        self.quenched
    }

    /// Number of gates materialized so far.
    pub fn registry_size(&self) -> usize {
        self.tables.len()
    }

    fn sample_table(&self, key: &GateKey) -> LocalTable {
        let n = self.geometry.gate_size();
        match self.source {
            GateSource::Identity => LocalTable::identity(n),
            GateSource::Swap => {
                let codes: Vec<u64> = if n == 2 {
                    vec![0b0010, 0b0001, 0b1000, 0b0100]
                } else {
                    // local q -> 3 - q for both x and z parts
                    (0..8)
                        .map(|j| {
                            let (part, q) = (j / 4, j % 4);
                            1u64 << (part * 4 + (3 - q))
                        })
                        .collect()
                };
                LocalTable::from_codes(n, &codes, 0)
            }
            GateSource::Uniform => {
                let (ax, ay) = (key.anchor.x(), key.anchor.y());
                let h = hash_words(&[
                    self.seed,
                    key.layer.parity() as u64,
                    ax as u64,
                    ay as u64,
                    key.period,
                ]);
                let mut rng = ChaCha8Rng::seed_from_u64(h);
                let (codes, signs) = clifford::sample_symplectic_codes(n, &mut rng);
                LocalTable::from_codes(n, &codes, signs)
            }
        }
    }

    fn key(&self, layer: Layer, anchor: Site, period: u64) -> GateKey {
        GateKey {
            layer,
            anchor,
            period: if self.quenched { 0 } else { period },
        }
    }

    /// Registry slot of the gate, sampling it on first use.
    pub fn gate_slot(&mut self, layer: Layer, anchor: Site, period: u64) -> u32 {
        let key = self.key(layer, anchor, period);
        if let Some(&i) = self.index.get(&key) {
            return i;
        }
        let table = self.sample_table(&key);
        let i = self.tables.len() as u32;
        self.tables.push(table);
        self.index.insert(key, i);
        i
    }

    #[inline]
    pub fn table(&self, slot: u32) -> &LocalTable {
        &self.tables[slot as usize]
    }

    /// The gate at `anchor` (wrapped anchor on periodic systems).
    pub fn gate(&mut self, layer: Layer, anchor: Site) -> CliffordGate {
        let period = self.clock;
        let slot = self.gate_slot(layer, anchor, period);
        self.tables[slot as usize].to_gate()
    }

    /// Replaces (or inserts) a registry entry.
    pub fn set_gate(&mut self, layer: Layer, anchor: Site, period: u64, gate: &CliffordGate) -> Result<()> {
        if gate.num_qubits() != self.geometry.gate_size() {
            return Err(Error::GeometryMismatch(format!(
                "gate on {} qubits, geometry needs {}",
                gate.num_qubits(),
                self.geometry.gate_size()
            )));
        }
        let key = self.key(layer, anchor, period);
        let table = LocalTable::from_gate(gate);
        match self.index.get(&key) {
            Some(&i) => self.tables[i as usize] = table,
            None => {
                self.index.insert(key, self.tables.len() as u32);
                self.tables.push(table);
            }
        }
        Ok(())
    }

    /// Conjugates `p` by every gate of `layer` at the given period.
    pub fn apply_half_step_at(&mut self, layer: Layer, p: &PauliOperator, period: u64) -> PauliOperator {
        let mut groups: BTreeMap<Site, usize> = BTreeMap::new();
        let mut out = PauliOperator::identity().with_phase(p.phase());
        for (site, &letter) in p.letters() {
            let site = self.geometry.wrap(*site);
            match self.geometry.anchor_of(layer, &site) {
                Some((anchor, local)) => {
                    let n = self.geometry.gate_size();
                    let code = letter.x() as usize | (letter.z() as usize) << n;
                    *groups.entry(anchor).or_default() |= code << local;
                }
                None => out.set(site, letter),
            }
        }
        let n = self.geometry.gate_size();
        let mut phase = out.phase() as u32;
        for (anchor, code) in groups {
            let slot = self.gate_slot(layer, anchor, period);
            let (img, ph) = self.tables[slot as usize].apply(code);
            phase += ph as u32;
            for (q, s) in self.geometry.footprint(&anchor).into_iter().enumerate() {
                let l = Letter::from_bits(img >> q & 1 == 1, img >> (q + n) & 1 == 1);
                out.set(s, l);
            }
        }
        out.set_phase((phase & 3) as u8);
        out
    }

    pub fn apply_half_step(&mut self, layer: Layer, p: &PauliOperator) -> PauliOperator {
        let period = self.clock;
        self.apply_half_step_at(layer, p, period)
    }

    /// One period: layer A, then layer B. Advances the clock of annealed circuits.
    pub fn apply_period(&mut self, p: &PauliOperator) -> PauliOperator {
        let period = self.clock;
        let q = self.apply_half_step_at(Layer::A, p, period);
        let r = self.apply_half_step_at(Layer::B, &q, period);
        if !self.quenched {
            self.clock += 1;
        }
        r
    }

    fn finite_plan(&mut self, layer: Layer, period: u64) -> Result<Vec<(Vec<usize>, u32)>> {
        if !self.geometry.is_finite() {
            return Err(Error::GeometryMismatch("operation needs a finite geometry".into()));
        }
        let anchors = self.geometry.anchors(layer);
        let mut plan = Vec::with_capacity(anchors.len());
        for a in anchors {
            let qubits = self
                .geometry
                .footprint(&a)
                .iter()
                .map(|s| self.geometry.index_of(s).expect("footprint inside system"))
                .collect();
            plan.push((qubits, self.gate_slot(layer, a, period)));
        }
        Ok(plan)
    }

    /// Precomputed gate plan for one period of a finite system.
    pub fn period_plan(&mut self, period: u64) -> Result<PeriodPlan> {
        Ok(PeriodPlan {
            n: self.geometry.gate_size(),
            layers: [self.finite_plan(Layer::A, period)?, self.finite_plan(Layer::B, period)?],
        })
    }

    /// Evolves every stabilizer through `t` periods.
    pub fn evolve_state(&mut self, st: &StabilizerState, t: u64) -> Result<StabilizerState> {
        let n = self.geometry.num_sites().ok_or_else(|| {
            Error::GeometryMismatch("state evolution needs a finite geometry".into())
        })?;
        if st.num_qubits() != n {
            return Err(Error::GeometryMismatch(format!(
                "state has {} qubits, circuit has {n} sites",
                st.num_qubits()
            )));
        }
        let mut rows = st.rows.clone();
        let mut plan = self.period_plan(self.clock)?;
        for k in 0..t {
            if !self.quenched && k > 0 {
                plan = self.period_plan(self.clock)?;
            }
            for row in rows.iter_mut() {
                plan.apply(self, row);
            }
            if !self.quenched {
                self.clock += 1;
            }
        }
        Ok(StabilizerState { rows })
    }

    /// The global Clifford of one period.
    pub fn period_gate(&mut self) -> Result<CliffordGate> {
        self.power(1)
    }

    /// `U_per^t` as a global Clifford.
    pub fn power(&mut self, t: u64) -> Result<CliffordGate> {
        let n = self.geometry.num_sites().ok_or_else(|| {
            Error::GeometryMismatch("power needs a finite geometry".into())
        })?;
        let mut images = CliffordGate::identity(n).images().to_vec();
        let plan = self.period_plan(0)?;
        for _ in 0..t {
            for img in images.iter_mut() {
                plan.apply(self, img);
            }
        }
        CliffordGate::from_images(images)
    }

    pub fn to_spec(&self, include_registry: bool) -> CircuitSpec {
        let registry = include_registry.then(|| {
            let mut recs: Vec<GateRecord> = self
                .index
                .iter()
                .map(|(k, &i)| GateRecord {
                    key: *k,
                    gate: self.tables[i as usize].to_gate().to_fixture(),
                })
                .collect();
            recs.sort_by_key(|r| r.key);
            recs
        });
        CircuitSpec {
            geometry: self.geometry,
            seed: self.seed,
            source: self.source,
            quenched: self.quenched,
            registry,
        }
    }

    pub fn from_spec(spec: &CircuitSpec) -> Result<Self> {
        let mut c = Self::with_source(spec.geometry, spec.seed, spec.source);
        c.quenched = spec.quenched;
        for rec in spec.registry.iter().flatten() {
            let g = CliffordGate::from_fixture(&rec.gate)?;
            c.set_gate(rec.key.layer, rec.key.anchor, rec.key.period, &g)?;
        }
        Ok(c)
    }
}

/// Gate slots and qubit indices for one period of a finite circuit.
#[derive(Clone, Debug)]
pub struct PeriodPlan {
    n: usize,
    layers: [Vec<(Vec<usize>, u32)>; 2],
}

impl PeriodPlan {
    /// Conjugates a packed operator through one period in place.
    pub fn apply(&self, circuit: &FloquetCircuit, p: &mut PackedPauli) {
        for layer in &self.layers {
            self.apply_layer(circuit, layer, p);
        }
    }

    pub fn apply_half(&self, circuit: &FloquetCircuit, layer: Layer, p: &mut PackedPauli) {
        let idx = match layer {
            Layer::A => 0,
            Layer::B => 1,
        };
        self.apply_layer(circuit, &self.layers[idx], p);
    }

    fn apply_layer(&self, circuit: &FloquetCircuit, layer: &[(Vec<usize>, u32)], p: &mut PackedPauli) {
        let n = self.n;
        let mut phase = p.phase() as u32;
        for (qubits, slot) in layer {
            let mut code = 0usize;
            for (k, &q) in qubits.iter().enumerate() {
                let l = p.get(q);
                code |= (l.x() as usize) << k | (l.z() as usize) << (k + n);
            }
            if code == 0 {
                continue;
            }
            let (img, ph) = circuit.table(*slot).apply(code);
            phase += ph as u32;
            for (k, &q) in qubits.iter().enumerate() {
                p.set(q, Letter::from_bits(img >> k & 1 == 1, img >> (k + n) & 1 == 1));
            }
        }
        p.set_phase((phase & 3) as u8);
    }
}

/// Pure stabilizer state given by `L` commuting, independent Hermitian Pauli rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerState {
    rows: Vec<PackedPauli>,
}

impl StabilizerState {
    /// The product state stabilized by `Z` on every site.
    pub fn all_z(n: usize) -> Self {
        Self {
            rows: (0..n).map(|q| PackedPauli::single(n, q, Letter::Z)).collect(),
        }
    }

    pub fn from_rows(rows: Vec<PackedPauli>) -> Result<Self> {
        let n = rows.len();
        for (i, r) in rows.iter().enumerate() {
            if r.num_qubits() != n {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} acts on {} qubits, expected {n}",
                    r.num_qubits()
                )));
            }
            if !r.is_hermitian() {
                return Err(Error::NonHermitian(format!("row {i}")));
            }
            for s in &rows[..i] {
                if r.commutes(s) == 1 {
                    return Err(Error::NotSymplectic(format!("row {i} anticommutes with an earlier row")));
                }
            }
        }
        let st = Self { rows };
        if st.tableau().rank() != n {
            return Err(Error::NotSymplectic("rows are not independent".into()));
        }
        Ok(st)
    }

    pub fn num_qubits(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[PackedPauli] {
        &self.rows
    }

    /// `L × 2L` (x|z) tableau.
    pub fn tableau(&self) -> BitMatrix {
        let n = self.rows.len();
        let v: Vec<BitVector> = self.rows.iter().map(|r| r.symplectic()).collect();
        BitMatrix::from_row_vectors(2 * n, &v)
    }

    pub fn signs(&self) -> BitVector {
        let mut s = BitVector::zeros(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            s.set(i, r.phase() == 2);
        }
        s
    }

    pub fn is_valid(&self) -> bool {
        Self::from_rows(self.rows.clone()).is_ok()
    }
}

/// Dense-window Heisenberg evolution of a local operator on an unbounded lattice.
///
/// The window is sized up front to contain the light cone for `max_half_steps`.
#[derive(Clone, Debug)]
pub struct WindowEvolver {
    dim: usize,
    n: usize,
    x0: i64,
    y0: i64,
    w: usize,
    h: usize,
    cells: Vec<u8>,
    phase: u8,
    bbox: Option<(i64, i64, i64, i64)>,
    half_steps: u64,
    max_half_steps: u64,
    slots: [Vec<u32>; 2],
}

const UNSET: u32 = u32::MAX;

impl WindowEvolver {
    pub fn new(circuit: &FloquetCircuit, p: &PauliOperator, max_half_steps: u64) -> Result<Self> {
        let geo = circuit.geometry();
        if geo.is_finite() {
            return Err(Error::GeometryMismatch("window evolution needs an unbounded geometry".into()));
        }
        let dim = geo.dim;
        let pad = max_half_steps as i64 + 2;
        let sites: Vec<Site> = p.support().into_iter().collect();
        let (mut xmin, mut xmax, mut ymin, mut ymax) = (0i64, 0i64, 0i64, 0i64);
        if let Some(first) = sites.first() {
            xmin = first.x();
            xmax = first.x();
            ymin = first.y();
            ymax = first.y();
        }
        for s in &sites {
            if s.dim() != dim {
                return Err(Error::GeometryMismatch(format!("site {s} in a {dim}d circuit")));
            }
            xmin = xmin.min(s.x());
            xmax = xmax.max(s.x());
            ymin = ymin.min(s.y());
            ymax = ymax.max(s.y());
        }
        // round window origin down to an even coordinate so anchors tile it
        let x0 = (xmin - pad).div_euclid(2) * 2;
        let w = ((xmax + pad + 2 - x0) as usize).next_multiple_of(2);
        let (y0, h) = if dim == 2 {
            let y0 = (ymin - pad).div_euclid(2) * 2;
            (y0, ((ymax + pad + 2 - y0) as usize).next_multiple_of(2))
        } else {
            (0, 1)
        };
        let mut ev = Self {
            dim,
            n: geo.gate_size(),
            x0,
            y0,
            w,
            h,
            cells: vec![0; w * h],
            phase: p.phase(),
            bbox: None,
            half_steps: 0,
            max_half_steps,
            slots: [Vec::new(), Vec::new()],
        };
        let anchors = if dim == 2 { (w / 2 + 1) * (h / 2 + 1) } else { w / 2 + 1 };
        ev.slots = [vec![UNSET; anchors], vec![UNSET; anchors]];
        for (s, &l) in p.letters() {
            let i = ev.cell(s.x(), s.y());
            ev.cells[i] = l.code();
        }
        ev.recompute_bbox();
        Ok(ev)
    }

    #[inline]
    fn cell(&self, x: i64, y: i64) -> usize {
        (y - self.y0) as usize * self.w + (x - self.x0) as usize
    }

    fn recompute_bbox(&mut self) {
        let mut b: Option<(i64, i64, i64, i64)> = None;
        for yy in 0..self.h {
            for xx in 0..self.w {
                if self.cells[yy * self.w + xx] != 0 {
                    let (x, y) = (self.x0 + xx as i64, self.y0 + yy as i64);
                    b = Some(match b {
                        None => (x, x, y, y),
                        Some((a, bb, c, d)) => (a.min(x), bb.max(x), c.min(y), d.max(y)),
                    });
                }
            }
        }
        self.bbox = b;
    }

    pub fn half_steps(&self) -> u64 {
        self.half_steps
    }

    /// Bounding box `(xmin, xmax, ymin, ymax)` of the support, `None` for the identity.
    pub fn bbox(&self) -> Option<(i64, i64, i64, i64)> {
        self.bbox
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    #[inline]
    pub fn letter(&self, x: i64, y: i64) -> Letter {
        if x < self.x0 || x >= self.x0 + self.w as i64 || y < self.y0 || y >= self.y0 + self.h as i64 {
            return Letter::I;
        }
        Letter::from_code(self.cells[self.cell(x, y)])
    }

    /// Visits every non-identity site.
    pub fn for_each_support<F: FnMut(i64, i64)>(&self, mut f: F) {
        if let Some((xa, xb, ya, yb)) = self.bbox {
            for y in ya..=yb {
                for x in xa..=xb {
                    if self.cells[self.cell(x, y)] != 0 {
                        f(x, y);
                    }
                }
            }
        }
    }

    pub fn to_pauli(&self) -> PauliOperator {
        let mut p = PauliOperator::identity().with_phase(self.phase);
        self.for_each_support(|x, y| {
            let s = if self.dim == 1 { Site::Line(x) } else { Site::Plane(x, y) };
            p.set(s, self.letter(x, y));
        });
        p
    }

    /// Applies the next half-step (layer A on even half-steps, B on odd).
    pub fn step(&mut self, circuit: &mut FloquetCircuit) {
        assert!(self.half_steps < self.max_half_steps, "window exhausted");
        let layer = Layer::at_half_step(self.half_steps);
        let period = self.half_steps / 2;
        if !circuit.is_quenched() && layer == Layer::A {
            for s in self.slots.iter_mut() {
                s.fill(UNSET);
            }
        }
        self.half_steps += 1;
        let Some((xa, xb, ya, yb)) = self.bbox else {
            return;
        };
        let p = layer.parity();
        let ax0 = xa - (xa - p).rem_euclid(2);
        let (ay0, ay1) = if self.dim == 2 { (ya - (ya - p).rem_euclid(2), yb) } else { (0, 0) };
        let n = self.n;
        let li = match layer {
            Layer::A => 0,
            Layer::B => 1,
        };
        let mut phase = self.phase as u32;
        let mut nb: Option<(i64, i64, i64, i64)> = None;
        let mut ay = ay0;
        while ay <= ay1 {
            let mut ax = ax0;
            while ax <= xb {
                let (offs, cnt): ([(i64, i64); 4], usize) = if self.dim == 2 {
                    ([(0, 0), (1, 0), (0, 1), (1, 1)], 4)
                } else {
                    ([(0, 0), (1, 0), (0, 0), (0, 0)], 2)
                };
                let mut code = 0usize;
                for (k, &(dx, dy)) in offs[..cnt].iter().enumerate() {
                    let c = self.cells[self.cell(ax + dx, ay + dy)] as usize;
                    code |= (c & 1) << k | (c >> 1) << (k + n);
                }
                if code != 0 {
                    let si = if self.dim == 2 {
                        ((ay - self.y0) / 2) as usize * (self.w / 2 + 1) + ((ax - self.x0) / 2) as usize
                    } else {
                        ((ax - self.x0) / 2) as usize
                    };
                    let mut slot = self.slots[li][si];
                    if slot == UNSET {
                        let anchor = if self.dim == 2 { Site::Plane(ax, ay) } else { Site::Line(ax) };
                        slot = circuit.gate_slot(layer, anchor, period);
                        self.slots[li][si] = slot;
                    }
                    let (img, ph) = circuit.table(slot).apply(code);
                    phase += ph as u32;
                    for (k, &(dx, dy)) in offs[..cnt].iter().enumerate() {
                        let c = ((img >> k) & 1) | ((img >> (k + n)) & 1) << 1;
                        let i = self.cell(ax + dx, ay + dy);
                        self.cells[i] = c as u8;
                        if c != 0 {
                            let (x, y) = (ax + dx, ay + dy);
                            nb = Some(match nb {
                                None => (x, x, y, y),
                                Some((a, b, cc, d)) => (a.min(x), b.max(x), cc.min(y), d.max(y)),
                            });
                        }
                    }
                }
                ax += 2;
            }
            ay += 2;
        }
        self.phase = (phase & 3) as u8;
        self.bbox = nb;
    }
}
