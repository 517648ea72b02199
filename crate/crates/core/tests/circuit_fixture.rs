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


//! Frozen single-period evolution on the unbounded square lattice.

use floquet_core::circuit::{FloquetCircuit, Geometry, LightCone};
use floquet_core::pauli::{Letter, PauliOperator, Site};

const FIXTURE: &str = "tests/fixtures/spread_2d_seed7_t1.txt";

fn evolve() -> PauliOperator {
    let mut c = FloquetCircuit::new(Geometry::unbounded(2).unwrap(), 7);
    c.apply_period(&PauliOperator::single(Site::origin(2), Letter::X))
}

#[test]
fn one_period_matches_fixture() {
    let p = evolve();
    let path = format!("{}/{FIXTURE}", env!("CARGO_MANIFEST_DIR"));
    if std::env::var("FLOQ_BLESS").map_or(false, |v| v == "1") {
        std::fs::write(&path, format!("{}\n", p.render())).unwrap();
    }
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(PauliOperator::parse(text.trim()).unwrap(), p);
}

#[test]
fn one_period_stays_in_sixteen_site_cone() {
    let p = evolve();
    let cone = LightCone::new(&Site::origin(2), 2);
    assert_eq!(cone.side(), 4);
    assert!(!p.is_identity());
    assert!(p.support().iter().all(|s| cone.contains(s)));
}
