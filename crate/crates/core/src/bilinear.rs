//! Bilinear forms `B(K, α, β) = Σ_m Σ_n α_m β_n K(mn)` and the quantities
//! used to bound them: the explicit bound formulas, the `+ab`-shift trace,
//! the cubic moment identity for Gauss sums, and averaged comparisons of
//! `|Σ_s 𝐊|²` against `Σ_s |𝐊|²`.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chars::CharTuple;
use crate::complete::{complete_sums, ParamTuple};
use crate::error::{precondition, Error, Result};
use crate::field::{MultChar, PrimeField};
use crate::kloosterman::{kl_naive, KlTable};
use crate::numeric::{chunked_reduce, ComplexSum, Neumaier};
use crate::report::Cplx;
use crate::strata::{self, is_diagonal, z_fiber_count, Sampler};

/// Weights `α_m` on a finite support of residues.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSeq {
    support: Vec<u64>,
    values: Vec<Complex64>,
    l1: f64,
    l2: f64,
}

impl CoeffSeq {
    pub fn new(support: Vec<u64>, values: Vec<Complex64>) -> Result<Self> {
        if support.len() != values.len() {
            return Err(precondition("support and values differ in length"));
        }
        if support.contains(&0) {
            return Err(Error::Domain("coefficient indices start at 1".into()));
        }
        let l1 = values.iter().map(|z| z.norm()).collect::<Vec<_>>();
        let mut s1 = Neumaier::new();
        let mut s2 = Neumaier::new();
        for x in l1 {
            s1.add(x);
            s2.add(x * x);
        }
        Ok(Self {
            support,
            values,
            l1: s1.value(),
            l2: s2.value().sqrt(),
        })
    }

    /// All ones on `[1, len]`.
    pub fn ones(len: u64) -> Self {
        Self::new((1..=len).collect(), vec![Complex64::new(1.0, 0.0); len as usize]).unwrap()
    }

    /// Unit-modulus weights with seeded uniform phases on `[1, len]`.
    pub fn random_phases(len: u64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..len)
            .map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect();
        Self::new((1..=len).collect(), values).unwrap()
    }

    pub fn support(&self) -> &[u64] {
        &self.support
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn l1(&self) -> f64 {
        self.l1
    }

    pub fn l2(&self) -> f64 {
        self.l2
    }

    /// `M^+ = max_{m ∈ M} m`.
    pub fn max_index(&self) -> u64 {
        self.support.iter().copied().max().unwrap_or(0)
    }

    fn check_range(&self, q: u64) -> Result<()> {
        match self.support.iter().find(|&&m| m >= q) {
            Some(m) => Err(Error::Domain(format!("index {m} outside [1, q-1]"))),
            None => Ok(()),
        }
    }
}

/// `Σ_m Σ_n α_m β_n K(mn mod q)`.
pub fn bilinear_form(table: &KlTable, alpha: &CoeffSeq, beta: &CoeffSeq) -> Result<Complex64> {
    let f = table.field();
    alpha.check_range(f.q())?;
    beta.check_range(f.q())?;
    let mut acc = ComplexSum::new();
    for (&m, &a) in alpha.support.iter().zip(&alpha.values) {
        for (&n, &b) in beta.support.iter().zip(&beta.values) {
            acc.add(a * b * table.get(f.mul(m, n)));
        }
    }
    Ok(acc.value())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SumType {
    /// `β = 1` on an interval.
    I,
    II,
}

/// Sizes and norms fed to the bound formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    pub q: u64,
    /// `|M|`.
    pub m: u64,
    /// `|N|`.
    pub n: u64,
    pub l: u32,
    pub m_plus: u64,
    pub alpha_l1: f64,
    pub alpha_l2: f64,
    pub beta_l2: f64,
    /// `‖K‖_∞`.
    pub k_sup: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub kind: SumType,
    pub inputs: BoundInputs,
    pub computed: Option<f64>,
    pub trivial: f64,
    pub theorem: f64,
    /// The interval condition on `N`.
    pub cond1: bool,
    /// The condition on `N M^+`.
    pub cond2: bool,
    pub in_range: bool,
    /// `theorem / trivial`.
    pub saving: f64,
    pub ratio_trivial: Option<f64>,
    pub ratio_theorem: Option<f64>,
}

/// Evaluates the trivial bound and the type I or type II bound with the
/// `q^ε` factor set to 1, together with the exact range conditions.
pub fn theorem_bounds(inp: &BoundInputs, kind: SumType, computed: Option<f64>) -> Result<BoundReport> {
    if inp.q < 2 || inp.m == 0 || inp.n == 0 || inp.l == 0 {
        return Err(precondition("q, M, N and l must be positive"));
    }
    let q = inp.q as f64;
    let m = inp.m as f64;
    let n = inp.n as f64;
    let l = inp.l as f64;
    let mplus = inp.m_plus as f64;
    let trivial = inp.k_sup * inp.alpha_l2 * inp.beta_l2 * (m * n).sqrt();
    let (theorem, cond1, cond2) = match kind {
        SumType::II => {
            let inner = 1.0 / m + (q.powf(0.75 + 0.75 / l) / (m * n)).powf(1.0 / l);
            let bound = inp.alpha_l2 * inp.beta_l2 * (m * n).sqrt() * inner.sqrt();
            let lower = q.powf(1.5 / l) <= n;
            let c1 = lower && n < 0.5 * q.powf(0.5 - 0.75 / l);
            let c2 = lower && n * mplus < 0.5 * q.powf(1.0 - 1.5 / l);
            (bound, c1, c2)
        }
        SumType::I => {
            let bound = inp.alpha_l1.powf(1.0 - 1.0 / l)
                * inp.alpha_l2.powf(1.0 / l)
                * m.powf(0.5 / l)
                * n
                * (q.powf(1.0 + 1.0 / l) / (m * n * n)).powf(0.5 / l);
            let lower = q.powf(1.0 / l) <= n;
            let c1 = lower && n <= 0.5 * q.powf(0.5 + 0.5 / l);
            let c2 = lower && n * mplus <= 0.5 * q.powf(1.0 + 0.5 / l);
            (bound, c1, c2)
        }
    };
    Ok(BoundReport {
        kind,
        inputs: *inp,
        computed,
        trivial,
        theorem,
        cond1,
        cond2,
        in_range: cond1 || cond2,
        saving: theorem / trivial,
        ratio_trivial: computed.map(|c| c / trivial),
        ratio_theorem: computed.map(|c| c / theorem),
    })
}

/// A computed bilinear form with both bound reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchReport {
    pub value: Cplx,
    pub abs: f64,
    pub envelope: f64,
    pub bound: BoundReport,
}

/// `B(K, α, β)` for seeded unit-modulus `α` on `[1, M]` and, for type II,
/// seeded unit-modulus `β` on `[1, N]` (type I uses `β = 1`).
pub fn bilinear_bench(
    table: &KlTable,
    m_len: u64,
    n_len: u64,
    l: u32,
    kind: SumType,
    seed: u64,
) -> Result<BenchReport> {
    let alpha = CoeffSeq::random_phases(m_len, seed);
    let beta = match kind {
        SumType::I => CoeffSeq::ones(n_len),
        SumType::II => CoeffSeq::random_phases(n_len, seed.wrapping_add(1)),
    };
    let value = bilinear_form(table, &alpha, &beta)?;
    let inp = BoundInputs {
        q: table.field().q(),
        m: m_len,
        n: n_len,
        l,
        m_plus: alpha.max_index(),
        alpha_l1: alpha.l1(),
        alpha_l2: alpha.l2(),
        beta_l2: beta.l2(),
        k_sup: table.sup_norm(),
    };
    Ok(BenchReport {
        value: value.into(),
        abs: value.norm(),
        envelope: table.k() as f64 * alpha.l1() * beta.l1(),
        bound: theorem_bounds(&inp, kind, Some(value.norm()))?,
    })
}

/// Parameters of the `+ab`-shift trace. `N` is the interval `[1, N]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftParams {
    pub n: u64,
    pub a: u64,
    pub b: u64,
    pub l: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShiftTrace {
    pub params: ShiftParams,
    /// `S^≠ = Σ_{m_1≠m_2} α_{m_1} conj α_{m_2} Σ_n K(m_1 n) conj K(m_2 n)`.
    pub s_neq: Cplx,
    /// `(AB)^{-1} Σ_{a∼A, b∼B} Σ_{m_1≠m_2} ... Σ_{n+ab∈N} ...`.
    pub shifted_average: Cplx,
    pub shift_gap: f64,
    /// `Σ ν`.
    pub nu_first: f64,
    /// `A N Σ_{m_1≠m_2} |α_{m_1} α_{m_2}|`.
    pub nu_first_expected: f64,
    /// `A N ‖α‖_1^2`.
    pub nu_first_l1_bound: f64,
    /// `A M N ‖α‖_2^2`.
    pub nu_first_l2_bound: f64,
    pub nu_first_holds: bool,
    /// `Σ ν^2`.
    pub nu_second: f64,
    /// `Σ ν^2 / (A N ‖α‖_2^4)`.
    pub nu_second_ratio: f64,
    /// Number of `b ∈ [B, 2B)^{2l}`.
    pub box_size: usize,
    /// `|B^V|`.
    pub box_diagonal: usize,
    /// Non-diagonal `b` whose fiber count is below the generic value.
    pub box_subgeneric: usize,
    pub generic_z: Option<usize>,
    /// `Σ_b |Σ_II(K, b)|`.
    pub sum_abs_sigma_ii: f64,
    /// `q^3 |B^V| + q^2 |B^W| + q^{3/2} B^{2l}`.
    pub shape: f64,
    pub shape_ratio: f64,
}

fn shifted_pair_sum(table: &KlTable, alpha: &CoeffSeq, shift: i64, n_max: i64) -> Complex64 {
    // Σ_{m_1≠m_2} α conj α Σ_{n + shift ∈ [1, N]} K(m_1 (n + shift)) conj K(m_2 (n + shift))
    let f = table.field();
    let mut acc = ComplexSum::new();
    for n in (1 - shift)..=(n_max - shift) {
        let nn = f.reduce(n + shift);
        let v: Vec<Complex64> = alpha
            .support
            .iter()
            .zip(&alpha.values)
            .map(|(&m, &a)| a * table.get(f.mul(m, nn)))
            .collect();
        for (i, x) in v.iter().enumerate() {
            for (j, y) in v.iter().enumerate() {
                if i != j {
                    acc.add(x * y.conj());
                }
            }
        }
    }
    acc.value()
}

/// The `+ab`-shift reduction, evaluated term by term.
pub fn shift_reduction_trace(table: &KlTable, alpha: &CoeffSeq, p: ShiftParams) -> Result<ShiftTrace> {
    let f = table.field();
    let q = f.q();
    alpha.check_range(q)?;
    if p.a == 0 || p.b == 0 || p.l == 0 {
        return Err(precondition("A, B and l must be positive"));
    }
    if p.n == 0 || p.n >= q {
        return Err(precondition("N must lie in [1, q-1]"));
    }
    if p.a * p.b > p.n {
        return Err(precondition(format!("AB = {} exceeds N = {}", p.a * p.b, p.n)));
    }
    let m_plus = alpha.max_index();
    if !(2 * p.a * p.n < q || 2 * p.a * m_plus < q) {
        return Err(precondition("need 2AN < q or 2AM^+ < q"));
    }

    let s_neq = shifted_pair_sum(table, alpha, 0, p.n as i64);
    let mut avg = ComplexSum::new();
    for a in p.a..2 * p.a {
        for b in p.b..2 * p.b {
            avg.add(shifted_pair_sum(table, alpha, (a * b) as i64, p.n as i64));
        }
    }
    let shifted_average = avg.value() / (p.a * p.b) as f64;

    // ν(r, s_1, s_2), r = n/a, s_i = a m_i.
    let abs: Vec<f64> = alpha.values.iter().map(|z| z.norm()).collect();
    let mut nu: HashMap<(u64, u64, u64), f64> = HashMap::new();
    for a in p.a..2 * p.a {
        let ainv = f.inv(a % q);
        for n in 1..=p.n {
            let r = f.mul(ainv, n);
            for (i, &m1) in alpha.support.iter().enumerate() {
                for (j, &m2) in alpha.support.iter().enumerate() {
                    if i != j {
                        *nu.entry((r, f.mul(a, m1), f.mul(a, m2))).or_insert(0.0) += abs[i] * abs[j];
                    }
                }
            }
        }
    }
    let mut keys: Vec<_> = nu.keys().copied().collect();
    keys.sort_unstable();
    let mut first = Neumaier::new();
    let mut second = Neumaier::new();
    for key in keys {
        let v = nu[&key];
        first.add(v);
        second.add(v * v);
    }
    let mut pair_abs = Neumaier::new();
    for (i, x) in abs.iter().enumerate() {
        for (j, y) in abs.iter().enumerate() {
            if i != j {
                pair_abs.add(x * y);
            }
        }
    }
    let an = (p.a * p.n) as f64;
    let nu_first = first.value();
    let nu_first_expected = an * pair_abs.value();
    let nu_first_l1_bound = an * alpha.l1().powi(2);
    let nu_first_l2_bound = an * alpha.len() as f64 * alpha.l2().powi(2);
    let tol = 1e-9 * nu_first_l2_bound.max(1.0);
    let nu_first_holds = (nu_first - nu_first_expected).abs() <= tol
        && nu_first <= nu_first_l1_bound + tol
        && nu_first_l1_bound <= nu_first_l2_bound + tol;
    let nu_second = second.value();
    let nu_second_ratio = nu_second / (an * alpha.l2().powi(4));

    let k = table.k();
    let qf = q as f64;
    let mut boxes: Vec<Vec<u64>> = vec![vec![]];
    for _ in 0..2 * p.l {
        boxes = boxes
            .into_iter()
            .flat_map(|v| {
                (p.b..2 * p.b).map(move |x| {
                    let mut w = v.clone();
                    w.push(x % q);
                    w
                })
            })
            .collect();
    }
    let strata_ok = strata::check_preconditions(f, k, p.l).is_ok();
    let fibers: Vec<Option<usize>> = boxes
        .iter()
        .map(|b| {
            let pt = ParamTuple::new(b.clone()).ok()?;
            if !strata_ok {
                return None;
            }
            z_fiber_count(f, k, &pt).ok().map(|r| r.z_count)
        })
        .collect();
    let generic_z = if strata_ok {
        let scan = strata::stratum_scan(f, k, p.l, Sampler::Random { samples: 256, seed: 0 })?;
        scan.generic.max(fibers.iter().flatten().copied().max())
    } else {
        None
    };
    let mut box_diagonal = 0;
    let mut box_subgeneric = 0;
    let mut sum_abs = Neumaier::new();
    for (b, z) in boxes.iter().zip(&fibers) {
        let pt = ParamTuple::new(b.clone())?;
        if is_diagonal(&pt) {
            box_diagonal += 1;
        } else if let (Some(z), Some(g)) = (z, generic_z) {
            if *z < g {
                box_subgeneric += 1;
            }
        }
        sum_abs.add(complete_sums(table, &pt)?.sigma_ii.abs());
    }
    let shape = qf.powi(3) * box_diagonal as f64
        + qf.powi(2) * box_subgeneric as f64
        + qf.powf(1.5) * (p.b as f64).powi(2 * p.l as i32);

    Ok(ShiftTrace {
        params: p,
        s_neq: s_neq.into(),
        shifted_average: shifted_average.into(),
        shift_gap: (s_neq - shifted_average).norm(),
        nu_first,
        nu_first_expected,
        nu_first_l1_bound,
        nu_first_l2_bound,
        nu_first_holds,
        nu_second,
        nu_second_ratio,
        box_size: boxes.len(),
        box_diagonal,
        box_subgeneric,
        generic_z,
        sum_abs_sigma_ii: sum_abs.value(),
        shape,
        shape_ratio: sum_abs.value() / shape,
    })
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MomentCheck {
    pub q: u64,
    pub xi: u64,
    pub n: u64,
    pub lhs: Cplx,
    pub rhs: Cplx,
    pub diff: f64,
}

/// Both sides of
///
/// ```text
/// (2/(q-1)) Σ_{χ even} ε_χ² ε_{χξ} conj χ(n) = q^{-1/2} (Kl_3(n; 1,1,ξ) + Kl_3(-n; 1,1,ξ))
/// ```
///
/// where the sum runs over all even characters including the trivial one,
/// with `ε_1 = -1/√q`.
pub fn moment_identity_check(field: &PrimeField, xi: &MultChar, n: u64) -> Result<MomentCheck> {
    let q = field.q();
    if xi.group_order() != field.order() {
        return Err(precondition("character modulus does not match the field"));
    }
    if !xi.is_even() {
        return Err(precondition("ξ must be even"));
    }
    if n % q == 0 {
        return Err(Error::Domain("n must be nonzero mod q".into()));
    }
    let evens: Vec<MultChar> = field.characters().filter(|c| c.is_even()).collect();
    let terms: Vec<Complex64> = evens
        .par_iter()
        .map(|chi| {
            let e = field.normalized_gauss_sum(chi);
            let e2 = field.normalized_gauss_sum(&chi.mul(xi));
            e * e * e2 * field.eval_char(chi, n).conj()
        })
        .collect();
    let lhs = terms.into_iter().collect::<ComplexSum>().value() * (2.0 / (q - 1) as f64);
    let t = CharTuple::new(vec![field.trivial_char(), field.trivial_char(), *xi])?;
    let rhs = (kl_naive(field, &t, n % q)? + kl_naive(field, &t, field.neg(n % q))?) / (q as f64).sqrt();
    Ok(MomentCheck {
        q,
        xi: xi.index(),
        n: n % q,
        lhs: lhs.into(),
        rhs: rhs.into(),
        diff: (lhs - rhs).norm(),
    })
}

/// Families of `b` for [`averaged_comparison`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    /// Seeded uniform `b ∈ F_q^{2l}`, `r` over `F_q^×`.
    FullSample { samples: usize, seed: u64 },
    /// `b ∈ (F_q^×)^n` with `Σ b_i^j = 0` for `1 ≤ j ≤ m`, at `r = 0`.
    PowerSum { n: usize, m: u32 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AvgReport {
    pub family: Family,
    pub q: u64,
    pub family_size: usize,
    /// `Σ_b Σ_r |Σ_s 𝐊(sr, sb)|²`.
    pub lhs: f64,
    /// `Σ_b Σ_r Σ_s |𝐊(sr, sb)|²`.
    pub rhs: f64,
    pub gap: f64,
    /// The normalizing power of `q` (or `|family| q^{3/2}`).
    pub normalizer: f64,
    pub normalized_gap: f64,
}

/// Upper limits for the exhaustive power-sum family.
pub const POWER_SUM_MAX_N: usize = 4;
pub const POWER_SUM_MAX_M: u32 = 1;
pub const POWER_SUM_MAX_Q: u64 = 31;

/// `(Σ_r |Σ_s 𝐊(sr,sb)|², Σ_r Σ_s |𝐊(sr,sb)|²)` over the given `r`.
fn inner_pair(table: &KlTable, b: &[u64], rs: &[u64]) -> (f64, f64) {
    let f = table.field();
    let q = f.q();
    let l = b.len() / 2;
    let k = table.dense();
    let mut lhs = Neumaier::new();
    let mut rhs = Neumaier::new();
    for &r in rs {
        let base: Vec<u64> = b.iter().map(|&x| (r + x) % q).collect();
        let mut cur = base.clone();
        let mut acc = ComplexSum::new();
        for _ in 1..q {
            let mut z = Complex64::new(1.0, 0.0);
            for i in 0..l {
                z *= k[cur[i] as usize] * k[cur[i + l] as usize].conj();
            }
            acc.add(z);
            rhs.add(z.norm_sqr());
            for (c, &u) in cur.iter_mut().zip(&base) {
                *c = (*c + u) % q;
            }
        }
        lhs.add(acc.value().norm_sqr());
    }
    (lhs.value(), rhs.value())
}

fn power_sum_family(field: &PrimeField, n: usize, m: u32) -> Vec<Vec<u64>> {
    let q = field.q();
    let mut out = Vec::new();
    let mut x = vec![1u64; n];
    loop {
        let ok = (1..=m as u64).all(|j| x.iter().fold(0, |acc, &v| field.add(acc, field.pow(v, j))) == 0);
        if ok {
            out.push(x.clone());
        }
        let mut i = 0;
        while i < n {
            x[i] += 1;
            if x[i] < q {
                break;
            }
            x[i] = 1;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    out
}

/// Compares `Σ_b Σ_r |Σ_s 𝐊|²` with its diagonal `Σ_b Σ_r Σ_s |𝐊|²`.
pub fn averaged_comparison(table: &KlTable, l: usize, family: Family) -> Result<AvgReport> {
    let f: &Arc<PrimeField> = table.field();
    let q = f.q();
    let (members, rs, normalizer): (Vec<Vec<u64>>, Vec<u64>, Box<dyn Fn(usize) -> f64>) = match family {
        Family::FullSample { samples, seed } => {
            if l == 0 {
                return Err(precondition("l must be at least 1"));
            }
            let qf = q as f64;
            (
                strata::sample_params(q, l, samples, seed),
                (1..q).collect(),
                Box::new(move |size| size as f64 * qf.powf(1.5)),
            )
        }
        Family::PowerSum { n, m } => {
            if n == 0 || n % 2 != 0 {
                return Err(precondition("power-sum family needs an even number n = 2l of coordinates"));
            }
            if n > POWER_SUM_MAX_N || m > POWER_SUM_MAX_M || q > POWER_SUM_MAX_Q {
                return Err(Error::ResourceLimit(format!(
                    "power-sum family is enumerated only for n <= {POWER_SUM_MAX_N}, m <= {POWER_SUM_MAX_M}, q <= {POWER_SUM_MAX_Q}"
                )));
            }
            let exponent = n as f64 - m as f64 + 0.5;
            let qf = q as f64;
            (power_sum_family(f, n, m), vec![0], Box::new(move |_| qf.powf(exponent)))
        }
    };
    let (lhs, rhs) = chunked_reduce(
        members.len(),
        (Neumaier::new(), Neumaier::new()),
        |range| {
            let mut a = Neumaier::new();
            let mut b = Neumaier::new();
            for i in range {
                let (x, y) = inner_pair(table, &members[i], &rs);
                a.add(x);
                b.add(y);
            }
            (a, b)
        },
        |acc, (a, b)| {
            acc.0.merge(&a);
            acc.1.merge(&b);
        },
    );
    let (lhs, rhs) = (lhs.value(), rhs.value());
    let size = members.len();
    let norm = normalizer(size);
    let gap = (lhs - rhs).abs();
    Ok(AvgReport {
        family,
        q,
        family_size: size,
        lhs,
        rhs,
        gap,
        normalizer: norm,
        normalized_gap: if size == 0 { 0.0 } else { gap / norm },
    })
}
