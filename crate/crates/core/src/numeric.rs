//! Compensated accumulation and deterministic chunked reduction.
//!
//! Every sum with `O(q^2)` or more terms goes through [`Neumaier`] or
//! [`ComplexSum`]. The expected absolute error of such a sum is bounded by
//! roughly `10^3 * q^2 * f64::EPSILON` times the largest term.

use rayon::prelude::*;
use rustfft::num_complex::Complex64;

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &Neumaier) {
        self.add(other.sum);
        self.add(other.comp);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of complex numbers, real and imaginary parts tracked
/// separately.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: Neumaier,
    im: Neumaier,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn merge(&mut self, other: &ComplexSum) {
        self.re.merge(&other.re);
        self.im.merge(&other.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl std::iter::FromIterator<Complex64> for ComplexSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut acc = ComplexSum::new();
        for z in iter {
            acc.add(z);
        }
        acc
    }
}

pub(crate) const CHUNK: usize = 32;

/// Maps fixed-size chunks of `0..len` in parallel and folds the partial
/// results in chunk order. The chunking does not depend on the number of
/// worker threads, so the result is bit-identical for any pool size.
pub(crate) fn chunked_reduce<T, F, M>(len: usize, init: T, map: F, mut merge: M) -> T
where
    T: Send,
    F: Fn(std::ops::Range<usize>) -> T + Sync + Send,
    M: FnMut(&mut T, T),
{
    let chunks: Vec<std::ops::Range<usize>> = (0..len)
        .step_by(CHUNK)
        .map(|start| start..(start + CHUNK).min(len))
        .collect();
    let partials: Vec<T> = chunks.into_par_iter().map(map).collect();
    let mut acc = init;
    for p in partials {
        merge(&mut acc, p);
    }
    acc
}
