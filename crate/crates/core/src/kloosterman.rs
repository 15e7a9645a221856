//! Generalized Kloosterman sums
//!
//! ```text
//! Kl_k(x; χ, q) = q^{-(k-1)/2} Σ_{y_1⋯y_k = x} χ_1(y_1)⋯χ_k(y_k) e((y_1+⋯+y_k)/q)
//! ```
//!
//! with no `(-1)^{k-1}` sign: the sheaf-theoretic trace function equals
//! `(-1)^{k-1}` times this normalization, and that constant is never applied
//! here.
//!
//! The sum is the `(k-1)`-fold multiplicative convolution of
//! `f_i(y) = χ_i(y) e(y/q)`. After reindexing by discrete logarithms it becomes
//! a cyclic convolution of length `q - 1`, which [`kl_table_fast`] evaluates
//! with FFTs of that exact length. [`kl_naive`] and [`kl_naive_table`] are the
//! definitional oracles.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::chars::CharTuple;
use crate::error::{Error, Result};
use crate::field::{MultChar, PrimeField};
use crate::numeric::ComplexSum;

/// `x ↦ Kl_k(a x; χ, q)` for every `x ∈ F_q`, normalized by `q^{-(k-1)/2}`.
///
/// `K(0)` is stored as 0: the stalk at the origin vanishes.
#[derive(Debug, Clone)]
pub struct KlTable {
    field: Arc<PrimeField>,
    tuple: CharTuple,
    scale: u64,
    values: Vec<Complex64>,
}

impl KlTable {
    pub fn field(&self) -> &Arc<PrimeField> {
        &self.field
    }

    pub fn tuple(&self) -> &CharTuple {
        &self.tuple
    }

    pub fn k(&self) -> usize {
        self.tuple.k()
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    /// `K(x)` for any residue `x`; `K(0) = 0`.
    #[inline]
    pub fn get(&self, x: u64) -> Complex64 {
        self.values[(x % self.field.q()) as usize]
    }

    /// Values at `x = 1, ..., q - 1`.
    pub fn values(&self) -> &[Complex64] {
        &self.values[1..]
    }

    /// Values indexed directly by residue, with the zero entry at index 0.
    pub fn dense(&self) -> &[Complex64] {
        &self.values
    }

    /// `max_x |K(x)|`.
    pub fn sup_norm(&self) -> f64 {
        self.values().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// The same table evaluated at `x ↦ K(c x)`: a pure index permutation.
    pub fn rescaled(&self, c: u64) -> Result<KlTable> {
        let f = &self.field;
        if c % f.q() == 0 {
            return Err(Error::Domain("scale must be nonzero".into()));
        }
        let mut values = vec![Complex64::new(0.0, 0.0); f.q() as usize];
        for x in 1..f.q() {
            values[x as usize] = self.values[f.mul(c % f.q(), x) as usize];
        }
        Ok(KlTable {
            field: Arc::clone(f),
            tuple: self.tuple.clone(),
            scale: f.mul(self.scale, c % f.q()),
            values,
        })
    }
}

fn normalization(q: u64, k: usize) -> f64 {
    (q as f64).powf(-((k as f64) - 1.0) / 2.0)
}

fn check_tuple(field: &PrimeField, t: &CharTuple) -> Result<()> {
    if t.group_order() != field.order() {
        return Err(Error::Precondition(format!(
            "characters are defined modulo {} but the field has q - 1 = {}",
            t.group_order(),
            field.order()
        )));
    }
    Ok(())
}

/// `f_i(g^m)` for `m = 0, ..., q - 2`.
fn twisted_additive(field: &PrimeField, chi: &MultChar) -> Vec<Complex64> {
    let n = field.order();
    (0..n)
        .map(|m| {
            let j = (chi.index() as u128 * m as u128 % n as u128) as u64;
            field.mult_unit(j) * field.add_unit(field.exp(m))
        })
        .collect()
}

/// Definitional evaluation at one point, enumerating `y_1, ..., y_{k-1}` and
/// solving for `y_k`. Cost `O(q^{k-1})`.
pub fn kl_naive(field: &PrimeField, t: &CharTuple, x: u64) -> Result<Complex64> {
    check_tuple(field, t)?;
    let q = field.q();
    let x = x % q;
    if x == 0 {
        return Err(Error::Domain("Kl_k is defined on F_q^× only".into()));
    }
    let n = field.order();
    let idx: Vec<u64> = t.indices();
    let k = idx.len();
    let mut acc = ComplexSum::new();
    // (product of y's, multiplicative phase, additive phase)
    fn walk(
        field: &PrimeField,
        idx: &[u64],
        depth: usize,
        prod: u64,
        mphase: u64,
        aphase: u64,
        x: u64,
        acc: &mut ComplexSum,
    ) {
        let q = field.q();
        let n = field.order();
        if depth + 1 == idx.len() {
            let y = field.mul(x, field.inv(prod));
            let mp = (mphase + idx[depth] * field.dlog(y)) % n;
            let ap = (aphase + y) % q;
            acc.add(field.mult_unit(mp) * field.add_unit(ap));
            return;
        }
        for y in 1..q {
            let mp = (mphase + idx[depth] * field.dlog(y)) % n;
            walk(field, idx, depth + 1, field.mul(prod, y), mp, (aphase + y) % q, x, acc);
        }
    }
    debug_assert!(idx.iter().all(|&a| a < n));
    walk(field, &idx, 0, 1, 0, 0, x, &mut acc);
    Ok(acc.value() * normalization(q, k))
}

/// Definitional table through `k - 1` direct cyclic convolutions of length
/// `q - 1`. Cost `O(k q^2)`; independent of any transform.
pub fn kl_naive_table(field: &Arc<PrimeField>, t: &CharTuple, a: u64) -> Result<KlTable> {
    check_tuple(field, t)?;
    let q = field.q();
    if a % q == 0 {
        return Err(Error::Domain("scale a must be nonzero".into()));
    }
    let n = field.order() as usize;
    let mut h = twisted_additive(field, &t.chars()[0]);
    for chi in &t.chars()[1..] {
        let f = twisted_additive(field, chi);
        h = (0..n)
            .map(|m| {
                (0..n)
                    .map(|j| h[j] * f[(m + n - j) % n])
                    .collect::<ComplexSum>()
                    .value()
            })
            .collect();
    }
    Ok(assemble(field, t, a, &h))
}

fn assemble(field: &Arc<PrimeField>, t: &CharTuple, a: u64, h: &[Complex64]) -> KlTable {
    let q = field.q();
    let norm = normalization(q, t.k());
    let mut values = vec![Complex64::new(0.0, 0.0); q as usize];
    for x in 1..q {
        values[x as usize] = h[field.dlog(field.mul(a % q, x)) as usize] * norm;
    }
    KlTable {
        field: Arc::clone(field),
        tuple: t.clone(),
        scale: a % q,
        values,
    }
}

/// Full table `x ↦ Kl_k(a x; χ, q)` by FFT-based cyclic convolution.
pub fn kl_table_fast(field: &Arc<PrimeField>, t: &CharTuple, a: u64) -> Result<KlTable> {
    check_tuple(field, t)?;
    let q = field.q();
    if a % q == 0 {
        return Err(Error::Domain("scale a must be nonzero".into()));
    }
    let n = field.order() as usize;
    if t.k() == 1 {
        return Ok(assemble(field, t, a, &twisted_additive(field, &t.chars()[0])));
    }
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let mut acc = vec![Complex64::new(1.0, 0.0); n];
    for chi in t.chars() {
        let mut f = twisted_additive(field, chi);
        forward.process(&mut f);
        for (x, y) in acc.iter_mut().zip(&f) {
            *x *= y;
        }
    }
    inverse.process(&mut acc);
    let inv_n = 1.0 / n as f64;
    for z in acc.iter_mut() {
        *z *= inv_n;
    }
    Ok(assemble(field, t, a, &acc))
}

/// Both sides of `Σ_x Kl_k(x; χ) λ(x) = q^{-(k-1)/2} Π_i τ(χ_i λ)`.
#[derive(Debug, Clone, Copy)]
pub struct FourierCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub diff: f64,
}

pub fn fourier_identity_check(table: &KlTable, lambda: &MultChar) -> Result<FourierCheck> {
    if table.scale() != 1 {
        return Err(Error::Precondition(
            "the Fourier identity is stated for the unscaled table".into(),
        ));
    }
    let f = table.field();
    let lhs = (1..f.q())
        .map(|x| table.get(x) * f.eval_char(lambda, x))
        .collect::<ComplexSum>()
        .value();
    let rhs = table
        .tuple()
        .chars()
        .iter()
        .map(|chi| f.gauss_sum(&chi.mul(lambda)))
        .fold(Complex64::new(1.0, 0.0), |acc, tau| acc * tau)
        * normalization(f.q(), table.k());
    Ok(FourierCheck {
        lhs,
        rhs,
        diff: (lhs - rhs).norm(),
    })
}

/// `max_x |fast - naive| / max(1, |naive|)` over a whole table.
pub fn max_relative_gap(a: &KlTable, b: &KlTable) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).norm() / y.norm().max(1.0))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn setup(q: u64) -> Arc<PrimeField> {
        Arc::new(PrimeField::new(q).unwrap())
    }

    #[test]
    fn k1_is_single_term() {
        let f = setup(11);
        let t = CharTuple::from_indices(&f, &[3]).unwrap();
        let table = kl_table_fast(&f, &t, 4).unwrap();
        for x in 1..11 {
            let ax = f.mul(4, x);
            let expected = f.eval_char(&f.char(3), ax) * f.eval_additive(1, ax);
            assert_eq!(table.get(x), expected);
            let naive = kl_naive(&f, &t, ax).unwrap();
            assert!((naive - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn classical_q5_value() {
        let f = setup(5);
        let t = CharTuple::trivial(&f, 2);
        let v = kl_naive(&f, &t, 1).unwrap();
        let expected = (2.0 + 2.0 * (4.0 * PI / 5.0).cos()) / 5f64.sqrt();
        assert!((v.re - expected).abs() < 1e-12);
        assert!(v.im.abs() < 1e-12);
        assert!((v.re - 0.170820).abs() < 1e-6);
    }

    #[test]
    fn q7_k3_triple_loop() {
        let f = setup(7);
        let t = CharTuple::trivial(&f, 3);
        let mut s = Complex64::new(0.0, 0.0);
        for y1 in 1..7u64 {
            for y2 in 1..7u64 {
                for y3 in 1..7u64 {
                    if y1 * y2 * y3 % 7 == 1 {
                        let ph = 2.0 * PI * ((y1 + y2 + y3) % 7) as f64 / 7.0;
                        s += Complex64::new(ph.cos(), ph.sin());
                    }
                }
            }
        }
        s /= 7.0;
        let v = kl_naive(&f, &t, 1).unwrap();
        assert!((v - s).norm() < 1e-12);
        let table = kl_table_fast(&f, &t, 1).unwrap();
        assert!((table.get(1) - s).norm() < 1e-12);
    }

    #[test]
    fn zero_is_rejected() {
        let f = setup(7);
        let t = CharTuple::trivial(&f, 2);
        assert!(matches!(kl_naive(&f, &t, 0), Err(Error::Domain(_))));
        assert!(matches!(kl_table_fast(&f, &t, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn fast_matches_naive_q101() {
        let f = setup(101);
        let t = CharTuple::trivial(&f, 2);
        let fast = kl_table_fast(&f, &t, 1).unwrap();
        let naive = kl_naive_table(&f, &t, 1).unwrap();
        assert!(max_relative_gap(&fast, &naive) <= 1e-9);
        for x in [1, 2, 50, 100] {
            assert!((fast.get(x) - kl_naive(&f, &t, x).unwrap()).norm() < 1e-9);
        }
    }

    #[test]
    fn scaling_is_a_permutation() {
        let f = setup(31);
        let t = CharTuple::from_indices(&f, &[0, 5, 7]).unwrap();
        let one = kl_table_fast(&f, &t, 1).unwrap();
        let three = kl_table_fast(&f, &t, 3).unwrap();
        for x in 1..31 {
            assert_eq!(three.get(x), one.get(f.mul(3, x)));
        }
        let re = one.rescaled(3).unwrap();
        assert_eq!(re.dense(), three.dense());
    }

    #[test]
    fn classical_kloosterman_is_real() {
        let f = setup(97);
        let table = kl_table_fast(&f, &CharTuple::trivial(&f, 2), 1).unwrap();
        assert!(table.values().iter().all(|z| z.im.abs() <= 1e-10));
    }

    #[test]
    fn fourier_identity_examples() {
        let f = setup(13);
        let t = CharTuple::trivial(&f, 2);
        let table = kl_table_fast(&f, &t, 1).unwrap();
        let c = fourier_identity_check(&table, &f.trivial_char()).unwrap();
        // τ(1)^2/√13 = 1/√13
        let expected = Complex64::new(1.0 / 13f64.sqrt(), 0.0);
        assert!((c.lhs - expected).norm() < 1e-12);
        assert!((c.rhs - expected).norm() < 1e-12);

        let t1 = CharTuple::from_indices(&f, &[5]).unwrap();
        let table1 = kl_table_fast(&f, &t1, 1).unwrap();
        for lam in f.characters() {
            let c = fourier_identity_check(&table1, &lam).unwrap();
            assert!((c.lhs - f.gauss_sum(&lam.mul(&f.char(5)))).norm() < 1e-12);
            assert!(c.diff < 1e-12);
        }

        let t3 = CharTuple::from_indices(&f, &[0, 0, 6]).unwrap();
        let table3 = kl_table_fast(&f, &t3, 1).unwrap();
        for lam in f.characters() {
            assert!(fourier_identity_check(&table3, &lam).unwrap().diff <= 1e-9);
        }
        assert!(fourier_identity_check(&table3.rescaled(2).unwrap(), &f.char(1)).is_err());
    }
}
