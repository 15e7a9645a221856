//! Serializable value types shared by the report structs.

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A complex number serialized as `{"re": .., "im": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Cplx {
    pub re: f64,
    pub im: f64,
}

impl Cplx {
    pub fn norm(&self) -> f64 {
        Complex64::from(*self).norm()
    }
}

impl From<Complex64> for Cplx {
    fn from(z: Complex64) -> Self {
        Cplx { re: z.re, im: z.im }
    }
}

impl From<Cplx> for Complex64 {
    fn from(z: Cplx) -> Self {
        Complex64::new(z.re, z.im)
    }
}
