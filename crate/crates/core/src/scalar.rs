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

//! Floating-point scalar used by fits, averages and transforms.
//!
//! Everything upstream of the statistics layer is exact (GF(2) and integers), so only the
//! reporting types are generic.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumCast};

pub trait Real:
    Float + FloatConst + FromPrimitive + NumCast + Debug + Display + Send + Sync + 'static
{
    #[inline]
    fn of(v: f64) -> Self {
        <Self as NumCast>::from(v).expect("finite conversion")
    }

    #[inline]
    fn of_u64(v: u64) -> Self {
        <Self as FromPrimitive>::from_u64(v).expect("finite conversion")
    }

    #[inline]
    fn of_u128(v: u128) -> Self {
        <Self as FromPrimitive>::from_u128(v).expect("finite conversion")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        <f64 as NumCast>::from(self).expect("finite conversion")
    }
}

impl Real for f32 {}
impl Real for f64 {}
