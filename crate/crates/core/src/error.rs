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

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("support outside gate domain: {0}")]
    SupportOutsideDomain(String),
    #[error("image set is not symplectic: {0}")]
    NotSymplectic(String),
    #[error("non-Hermitian image: {0}")]
    NonHermitian(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("geometry mismatch: {0}")]
    GeometryMismatch(String),
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("fit failed: {0}")]
    Fit(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("series diverges: {0}")]
    Divergent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
