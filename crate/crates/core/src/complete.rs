//! Complete sums over `F_q` built from a Kloosterman table `K`:
//!
//! ```text
//! 𝐊(r, b)  = Π_{i≤l} K(r + b_i) · conj K(r + b_{i+l})
//! 𝐑(r, b)  = Σ_{s ∈ F_q^×} 𝐊(s r, s b)
//! Σ_I(b)   = Σ_{r ∈ F_q} 𝐑(r, b)
//! Σ_II(b)  = Σ_r Σ_{s_1 ≠ s_2} 𝐊(s_1 r, s_1 b) conj 𝐊(s_2 r, s_2 b)
//!          = Σ_r |𝐑(r, b)|² − Σ_s Σ_r |𝐊(s r, s b)|²
//! ```
//!
//! `K(0) = 0`, so any factor whose argument vanishes kills the product.
//! Outer loops over `r` run in fixed chunks on the current rayon pool and are
//! merged in chunk order, so results do not depend on the thread count.

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::field::PrimeField;
use crate::kloosterman::KlTable;
use crate::numeric::{chunked_reduce, ComplexSum, Neumaier};
use crate::report::Cplx;
use crate::strata::StratumReport;

/// A point `b ∈ F_q^{2l}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParamTuple {
    b: Vec<u64>,
}

impl ParamTuple {
    pub fn new(b: Vec<u64>) -> Result<Self> {
        if b.is_empty() || b.len() % 2 != 0 {
            return Err(precondition(format!(
                "parameter tuple must have even length 2l >= 2, got {}",
                b.len()
            )));
        }
        Ok(Self { b })
    }

    /// Reduces every coordinate mod `q`.
    pub fn reduced(field: &PrimeField, b: &[i64]) -> Result<Self> {
        Self::new(b.iter().map(|&x| field.reduce(x)).collect())
    }

    pub fn l(&self) -> usize {
        self.b.len() / 2
    }

    pub fn coords(&self) -> &[u64] {
        &self.b
    }

    /// `b + (c, ..., c)`.
    pub fn translate(&self, field: &PrimeField, c: u64) -> ParamTuple {
        ParamTuple {
            b: self.b.iter().map(|&x| field.add(x % field.q(), c)).collect(),
        }
    }

    /// `(b_1, .., b_l, b_1, .., b_l)`: the paired diagonal.
    pub fn paired(half: &[u64]) -> ParamTuple {
        let mut b = half.to_vec();
        b.extend_from_slice(half);
        ParamTuple { b }
    }
}

/// `𝐊(r, b)`.
pub fn eval_k(table: &KlTable, r: u64, b: &ParamTuple) -> Complex64 {
    let f = table.field();
    let l = b.l();
    let mut acc = Complex64::new(1.0, 0.0);
    for i in 0..l {
        acc *= table.get(f.add(r % f.q(), b.b[i] % f.q()));
        acc *= table.get(f.add(r % f.q(), b.b[i + l] % f.q())).conj();
    }
    acc
}

/// `𝐑(r, b) = Σ_{s ≠ 0} 𝐊(s r, s b)`.
pub fn eval_r(table: &KlTable, r: u64, b: &ParamTuple) -> Complex64 {
    let mut acc = ComplexSum::new();
    for_each_scaled(table, r, b, |_, z| acc.add(z));
    acc.value()
}

/// `(𝐊(r, b), 𝐑(r, b))`.
pub fn eval_kr(table: &KlTable, r: u64, b: &ParamTuple) -> (Complex64, Complex64) {
    (eval_k(table, r, b), eval_r(table, r, b))
}

/// Calls `visit(s, 𝐊(s r, s b))` for `s = 1, ..., q - 1`.
#[inline]
fn for_each_scaled<F: FnMut(u64, Complex64)>(table: &KlTable, r: u64, b: &ParamTuple, mut visit: F) {
    let f = table.field();
    let q = f.q();
    let l = b.l();
    let k = table.dense();
    let base: Vec<u64> = b.b.iter().map(|&x| (r % q + x % q) % q).collect();
    let mut cur = base.clone();
    for s in 1..q {
        let mut z = Complex64::new(1.0, 0.0);
        for i in 0..l {
            z *= k[cur[i] as usize] * k[cur[i + l] as usize].conj();
        }
        visit(s, z);
        for (c, &u) in cur.iter_mut().zip(&base) {
            *c += u;
            if *c >= q {
                *c -= q;
            }
        }
    }
}

#[derive(Clone, Copy, Default)]
struct Partial {
    sigma_i: ComplexSum,
    r_abs2: Neumaier,
    k_abs2: Neumaier,
}

impl Partial {
    fn merge(&mut self, o: Partial) {
        self.sigma_i.merge(&o.sigma_i);
        self.r_abs2.merge(&o.r_abs2);
        self.k_abs2.merge(&o.k_abs2);
    }
}

fn accumulate(table: &KlTable, b: &ParamTuple, r_range: std::ops::Range<usize>) -> Partial {
    let mut p = Partial::default();
    for r in r_range {
        let mut rr = ComplexSum::new();
        let mut kk = Neumaier::new();
        for_each_scaled(table, r as u64, b, |_, z| {
            rr.add(z);
            kk.add(z.norm_sqr());
        });
        let rv = rr.value();
        p.sigma_i.add(rv);
        p.r_abs2.add(rv.norm_sqr());
        p.k_abs2.merge(&kk);
    }
    p
}

fn check_l(table: &KlTable, b: &ParamTuple) -> Result<()> {
    if b.coords().iter().any(|&x| x >= table.field().q()) {
        return Err(Error::Precondition("parameters must be reduced mod q".into()));
    }
    Ok(())
}

/// `Σ_I(K, b)`, cost `O(q^2 l)`.
pub fn sigma_i(table: &KlTable, b: &ParamTuple) -> Result<Complex64> {
    Ok(complete_sums(table, b)?.sigma_i.into())
}

/// `Σ_II` by the literal `s_1 ≠ s_2` double sum, cost `O(q^3)`.
pub fn sigma_ii_direct(table: &KlTable, b: &ParamTuple) -> Result<Complex64> {
    check_l(table, b)?;
    let q = table.field().q() as usize;
    let total = chunked_reduce(
        q,
        ComplexSum::new(),
        |range| {
            let mut acc = ComplexSum::new();
            let mut v = Vec::with_capacity(q - 1);
            for r in range {
                v.clear();
                for_each_scaled(table, r as u64, b, |_, z| v.push(z));
                for (i, zi) in v.iter().enumerate() {
                    for (j, zj) in v.iter().enumerate() {
                        if i != j {
                            acc.add(zi * zj.conj());
                        }
                    }
                }
            }
            acc
        },
        |a, p| a.merge(&p),
    );
    Ok(total.value())
}

/// The complete sums attached to one `b`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SumReport {
    pub q: u64,
    pub l: usize,
    pub b: Vec<u64>,
    pub sigma_i: Cplx,
    /// `Σ_II` in the difference form.
    pub sigma_ii: f64,
    /// `Σ_r |𝐑(r, b)|²`.
    pub sum_abs_r_sq: f64,
    /// `Σ_s Σ_r |𝐊(s r, s b)|²`.
    pub sum_abs_k_sq: f64,
    /// `|Σ_I| / q`.
    pub ratio_i: f64,
    /// `|Σ_II| / q^{3/2}`.
    pub ratio_ii: f64,
    /// The literal double sum, when requested.
    pub sigma_ii_direct: Option<Cplx>,
    pub stratum: Option<StratumReport>,
}

/// Σ_I and Σ_II (difference form) in one `O(q^2 l)` pass.
pub fn complete_sums(table: &KlTable, b: &ParamTuple) -> Result<SumReport> {
    check_l(table, b)?;
    let q = table.field().q();
    let p = chunked_reduce(
        q as usize,
        Partial::default(),
        |range| accumulate(table, b, range),
        |a, p| a.merge(p),
    );
    let sigma_i = p.sigma_i.value();
    let sum_abs_r_sq = p.r_abs2.value();
    let sum_abs_k_sq = p.k_abs2.value();
    let sigma_ii = sum_abs_r_sq - sum_abs_k_sq;
    let qf = q as f64;
    Ok(SumReport {
        q,
        l: b.l(),
        b: b.coords().to_vec(),
        sigma_i: sigma_i.into(),
        sigma_ii,
        sum_abs_r_sq,
        sum_abs_k_sq,
        ratio_i: sigma_i.norm() / qf,
        ratio_ii: sigma_ii.abs() / qf.powf(1.5),
        sigma_ii_direct: None,
        stratum: None,
    })
}

/// Σ_II with an optional direct-form cross-check. The two forms must agree
/// to `1e-6 · max(|Σ_II|, q^{3/2})`.
pub fn sigma_ii(table: &KlTable, b: &ParamTuple, direct_check: bool) -> Result<SumReport> {
    let mut report = complete_sums(table, b)?;
    if direct_check {
        let direct = sigma_ii_direct(table, b)?;
        let scale = direct.norm().max((report.q as f64).powf(1.5));
        let gap = (direct - Complex64::new(report.sigma_ii, 0.0)).norm();
        if gap > 1e-6 * scale {
            return Err(Error::NumericalInstability {
                direct: direct.re,
                rearranged: report.sigma_ii,
            });
        }
        report.sigma_ii_direct = Some(direct.into());
    }
    Ok(report)
}

/// `k^{2l} q^2` and `k^{4l} q^3`: the envelopes implied by `|K| ≤ k`.
pub fn trivial_envelopes(k: usize, l: usize, q: u64) -> (f64, f64) {
    let kf = k as f64;
    let qf = q as f64;
    (kf.powi(2 * l as i32) * qf * qf, kf.powi(4 * l as i32) * qf.powi(3))
}
