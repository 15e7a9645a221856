//! Stratification of the parameter space `b ∈ F_q^{2l}`.
//!
//! For `b` fixed, the singular set of `r ↦ 𝐊(r, b)` is
//! `Z_b = {r : P_b(r) = 0} ∪ {r = -b_i}` where `P_b` is the resolvent
//!
//! ```text
//! P_b(r) = Π_{ζ ∈ μ_k^{2l}} ( Σ_{i≤l} ζ_i x_i − Σ_{i>l} ζ_i x_i ),   x_i^k = r + b_i.
//! ```
//!
//! Rescaling `x_1` by `ζ ∈ μ_k` permutes the factors with `ζ_1` fixed, so the
//! full product is the `k`-th power of `Q_b`, the product over the
//! `k^{2l-1}` factors with `ζ_1 = 1`, and `Q_b` already lies in `F_q[r]`.
//! [`singular_polynomial`] forms `Q_b`, checks that every `x`-monomial
//! cancelled, and returns `Q_b^k`. [`singular_polynomial_literal`] forms all
//! `k^{2l}` factors and is kept as a cross-check.
//!
//! `|Z_b|` is the degree of the squarefree part of `P_b(r) Π (r + b_i)`, which
//! counts geometric points once `p` exceeds that degree.

pub mod poly;
pub mod reduced;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complete::ParamTuple;
use crate::error::{Error, Result};
use crate::field::PrimeField;
pub use poly::UniPoly;
pub use reduced::ReducedPoly;

/// Largest `k^{2l}` accepted by the resolvent construction.
pub const MAX_MONOMIALS: u64 = 10_000;
/// Largest `q^{2l}` for an exhaustive scan.
pub const MAX_EXHAUSTIVE: u64 = 10_000_000;
/// Largest number of box points enumerated without pruning.
pub const MAX_BOX_POINTS: u64 = 100_000_000;

/// `b ∈ V^Δ`: every coordinate value occurs at least twice.
pub fn is_diagonal(b: &ParamTuple) -> bool {
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    for &x in b.coords() {
        *counts.entry(x).or_default() += 1;
    }
    counts.values().all(|&c| c >= 2)
}

/// The degree bound `2l + k^{2l-1}` of `P_b · Π(r + b_i)` as stated for the
/// full singular set.
pub fn nominal_z_degree(k: usize, l: usize) -> u64 {
    2 * l as u64 + (k as u64).pow(2 * l as u32 - 1)
}

/// Preconditions shared by every resolvent computation.
pub fn check_preconditions(field: &PrimeField, k: usize, l: usize) -> Result<()> {
    if k == 0 || l == 0 {
        return Err(Error::Domain("k and l must be at least 1".into()));
    }
    let monomials = (k as u64).checked_pow(2 * l as u32);
    match monomials {
        Some(m) if m <= MAX_MONOMIALS => {}
        _ => {
            return Err(Error::ResourceLimit(format!(
                "k^(2l) = {k}^{} exceeds {MAX_MONOMIALS}",
                2 * l
            )))
        }
    }
    let q = field.q();
    if (q - 1) % k as u64 != 0 {
        return Err(Error::Domain(format!(
            "q = {q} is not 1 mod k = {k}, so μ_k is not contained in F_q"
        )));
    }
    let bound = nominal_z_degree(k, l);
    if q <= bound {
        return Err(Error::Domain(format!(
            "q = {q} must exceed 2l + k^(2l-1) = {bound}"
        )));
    }
    Ok(())
}

fn roots_of_unity(field: &PrimeField, k: usize) -> Vec<u64> {
    let zeta = field.pow(field.generator(), field.order() / k as u64);
    let mut out = Vec::with_capacity(k);
    let mut z = 1;
    for _ in 0..k {
        out.push(z);
        z = field.mul(z, zeta);
    }
    out
}

fn signed_form(field: &PrimeField, mu: &[u64], digits: &[usize], l: usize) -> Vec<u64> {
    digits
        .iter()
        .enumerate()
        .map(|(i, &d)| if i < l { mu[d] } else { field.neg(mu[d]) })
        .collect()
}

fn check_tuple(field: &PrimeField, k: usize, b: &ParamTuple) -> Result<()> {
    check_preconditions(field, k, b.l())?;
    if b.coords().iter().any(|&x| x >= field.q()) {
        return Err(Error::Domain("parameters must be reduced mod q".into()));
    }
    Ok(())
}

/// Multiplies the linear forms for the given exponent vectors and checks that
/// the result has no `x`-dependence left.
fn reduced_product<I>(field: &PrimeField, k: usize, b: &ParamTuple, zetas: I) -> Result<UniPoly>
where
    I: Iterator<Item = Vec<usize>>,
{
    let mu = roots_of_unity(field, k);
    let mut acc = ReducedPoly::one(field.q(), k, b.coords());
    for digits in zetas {
        acc = acc.mul_linear_form(&signed_form(field, &mu, &digits, b.l()));
    }
    if acc.has_x_dependence() {
        return Err(Error::InternalConsistency(
            "resolvent product retained x-dependence after reduction".into(),
        ));
    }
    Ok(acc.constant_part().clone())
}

fn digit_vectors(k: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = k.pow(len as u32);
    (0..total).map(move |mut idx| {
        let mut v = Vec::with_capacity(len);
        for _ in 0..len {
            v.push(idx % k);
            idx /= k;
        }
        v
    })
}

/// `Q_b`: the product over the `k^{2l-1}` factors with `ζ_1 = 1`.
pub fn resolvent_root(field: &PrimeField, k: usize, b: &ParamTuple) -> Result<UniPoly> {
    check_tuple(field, k, b)?;
    let len = 2 * b.l();
    let zetas = digit_vectors(k, len - 1).map(|rest| {
        let mut v = vec![0];
        v.extend(rest);
        v
    });
    reduced_product(field, k, b, zetas)
}

/// `P_b = Q_b^k`.
pub fn singular_polynomial(field: &PrimeField, k: usize, b: &ParamTuple) -> Result<UniPoly> {
    Ok(resolvent_root(field, k, b)?.pow(k as u32))
}

/// `P_b` from all `k^{2l}` factors.
pub fn singular_polynomial_literal(field: &PrimeField, k: usize, b: &ParamTuple) -> Result<UniPoly> {
    check_tuple(field, k, b)?;
    reduced_product(field, k, b, digit_vectors(k, 2 * b.l()))
}

/// Stratum data for one `b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumReport {
    pub b: Vec<u64>,
    pub on_diagonal: bool,
    pub deg_p: usize,
    /// `|Z_b|`, the stratum index.
    pub z_count: usize,
    /// Whether `z_count` reaches the generic value, when one is known.
    pub generic: Option<bool>,
}

/// `|Z_b|` via the squarefree part of `P_b(r) Π (r + b_i)`.
pub fn z_fiber_count(field: &PrimeField, k: usize, b: &ParamTuple) -> Result<StratumReport> {
    let root = resolvent_root(field, k, b)?;
    if root.is_zero() {
        return Err(Error::DegenerateFiber);
    }
    let q = field.q();
    // Q_b and Q_b^k have the same roots.
    let mut f = root.clone();
    for &bi in b.coords() {
        f = f.mul_linear(bi);
    }
    let z_count = f.squarefree_part().degree().unwrap_or(0);
    let deg_p = root.degree().unwrap_or(0) * k;
    let distinct: std::collections::BTreeSet<u64> = b.coords().iter().map(|&x| x % q).collect();
    if z_count > deg_p + 2 * b.l() || z_count < distinct.len() {
        return Err(Error::InternalConsistency(format!(
            "z_count {z_count} outside [{}, {}]",
            distinct.len(),
            deg_p + 2 * b.l()
        )));
    }
    Ok(StratumReport {
        b: b.coords().to_vec(),
        on_diagonal: is_diagonal(b),
        deg_p,
        z_count,
        generic: None,
    })
}

/// How `stratum_scan` chooses parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum Sampler {
    Exhaustive,
    /// Uniform `b ∈ F_q^{2l}` from ChaCha8 seeded with `seed`.
    Random { samples: usize, seed: u64 },
}

/// One scanned parameter; degenerate fibers have no degree or count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub b: Vec<u64>,
    pub on_diagonal: bool,
    pub deg_p: Option<usize>,
    pub z_count: Option<usize>,
    pub generic: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanReport {
    pub q: u64,
    pub k: usize,
    pub l: usize,
    pub sampler: Sampler,
    pub total: usize,
    pub degenerate: usize,
    /// `z_count ↦ number of b`.
    pub histogram: BTreeMap<usize, usize>,
    /// Largest observed `z_count`.
    pub generic: Option<usize>,
    /// Fraction of all scanned `b` attaining `generic`.
    pub generic_fraction: f64,
    pub nominal_degree: u64,
    #[serde(skip)]
    pub rows: Vec<ScanRow>,
}

/// Random parameters from a seeded ChaCha8 stream.
pub fn sample_params(q: u64, l: usize, samples: usize, seed: u64) -> Vec<Vec<u64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| (0..2 * l).map(|_| rng.gen_range(0..q)).collect())
        .collect()
}

fn all_params(q: u64, l: usize) -> Vec<Vec<u64>> {
    digit_vectors(q as usize, 2 * l)
        .map(|v| v.into_iter().map(|d| d as u64).collect())
        .collect()
}

/// Histogram of `|Z_b|` over a family of `b`.
pub fn stratum_scan(field: &PrimeField, k: usize, l: usize, sampler: Sampler) -> Result<ScanReport> {
    check_preconditions(field, k, l)?;
    let q = field.q();
    let params = match sampler {
        Sampler::Exhaustive => {
            match q.checked_pow(2 * l as u32) {
                Some(n) if n <= MAX_EXHAUSTIVE => {}
                _ => {
                    return Err(Error::ResourceLimit(format!(
                        "exhaustive scan needs q^(2l) <= {MAX_EXHAUSTIVE}; use random sampling"
                    )))
                }
            }
            all_params(q, l)
        }
        Sampler::Random { samples, seed } => sample_params(q, l, samples, seed),
    };
    let results: Vec<Result<ScanRow>> = params
        .into_par_iter()
        .map(|b| {
            let pt = ParamTuple::new(b.clone())?;
            match z_fiber_count(field, k, &pt) {
                Ok(rep) => Ok(ScanRow {
                    b,
                    on_diagonal: rep.on_diagonal,
                    deg_p: Some(rep.deg_p),
                    z_count: Some(rep.z_count),
                    generic: false,
                }),
                Err(Error::DegenerateFiber) => Ok(ScanRow {
                    on_diagonal: is_diagonal(&pt),
                    b,
                    deg_p: None,
                    z_count: None,
                    generic: false,
                }),
                Err(e) => Err(e),
            }
        })
        .collect();
    let mut rows = results.into_iter().collect::<Result<Vec<_>>>()?;
    let mut histogram = BTreeMap::new();
    let mut degenerate = 0;
    for row in &rows {
        match row.z_count {
            Some(z) => *histogram.entry(z).or_insert(0) += 1,
            None => degenerate += 1,
        }
    }
    let generic = histogram.keys().next_back().copied();
    let mut hits = 0;
    for row in rows.iter_mut() {
        row.generic = generic.is_some() && row.z_count == generic;
        hits += row.generic as usize;
    }
    let total = rows.len();
    Ok(ScanReport {
        q,
        k,
        l,
        sampler,
        total,
        degenerate,
        histogram,
        generic,
        generic_fraction: if total == 0 { 0.0 } else { hits as f64 / total as f64 },
        nominal_degree: nominal_z_degree(k, l),
        rows,
    })
}

/// Which box coordinates are included.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoxShape {
    /// `B ≤ x_i ≤ 2B`.
    Closed,
    /// `B ≤ x_i < 2B`.
    HalfOpen,
}

impl BoxShape {
    pub fn range(&self, big_b: u64) -> std::ops::Range<u64> {
        match self {
            BoxShape::Closed => big_b..2 * big_b + 1,
            BoxShape::HalfOpen => big_b..2 * big_b,
        }
    }
}

/// `coef · Π x_i^{exps[i]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monomial {
    pub coef: i64,
    pub exps: Vec<u32>,
}

/// Common zeros mod `q` of a list of integer polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolySystem {
    pub nvars: usize,
    pub equations: Vec<Vec<Monomial>>,
}

impl PolySystem {
    fn holds(&self, field: &PrimeField, x: &[u64]) -> bool {
        self.equations.iter().all(|eq| {
            eq.iter().fold(0u64, |acc, m| {
                let term = m
                    .exps
                    .iter()
                    .zip(x)
                    .fold(field.reduce(m.coef), |t, (&e, &xi)| field.mul(t, field.pow(xi, e as u64)));
                field.add(acc, term)
            }) == 0
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Variety {
    Diagonal,
    /// No equations: the whole box.
    Empty,
    Custom(PolySystem),
}

/// Lattice points of `box^{2l}` lying on the variety mod `q`.
pub fn box_count_variety(
    field: &PrimeField,
    variety: &Variety,
    big_b: u64,
    l: usize,
    shape: BoxShape,
) -> Result<u64> {
    let q = field.q();
    if l == 0 {
        return Err(Error::Precondition("l must be at least 1".into()));
    }
    if 2 * big_b >= q {
        return Err(Error::Precondition(format!("box radius B = {big_b} must satisfy B < q/2")));
    }
    let side = shape.range(big_b);
    let n = side.end - side.start;
    let len = 2 * l;
    match variety {
        Variety::Empty => n
            .checked_pow(len as u32)
            .ok_or_else(|| Error::ResourceLimit("box size overflows u64".into())),
        Variety::Diagonal => Ok(diagonal_count_pruned(n as usize, len)),
        Variety::Custom(sys) => {
            if sys.nvars != len {
                return Err(Error::Precondition(format!(
                    "system has {} variables, expected 2l = {len}",
                    sys.nvars
                )));
            }
            match n.checked_pow(len as u32) {
                Some(t) if t <= MAX_BOX_POINTS => {}
                _ => {
                    return Err(Error::ResourceLimit(format!(
                        "(B+1)^(2l) exceeds {MAX_BOX_POINTS}; only the diagonal has a pruned count"
                    )))
                }
            }
            let start = side.start;
            Ok((0..n)
                .into_par_iter()
                .map(|first| {
                    let mut x = vec![start; len];
                    x[0] = start + first;
                    let mut count = 0u64;
                    loop {
                        if sys.holds(field, &x) {
                            count += 1;
                        }
                        let mut i = 1;
                        while i < len {
                            x[i] += 1;
                            if x[i] < start + n {
                                break;
                            }
                            x[i] = start;
                            i += 1;
                        }
                        if i == len {
                            break;
                        }
                    }
                    count
                })
                .sum())
        }
    }
}

/// Words of length `len` over `n` letters in which every used letter repeats,
/// by depth-first search that abandons a prefix once its letters used exactly
/// once outnumber the remaining slots.
pub fn diagonal_count_pruned(n: usize, len: usize) -> u64 {
    fn go(depth: usize, len: usize, counts: &mut [u8], singles: usize) -> u64 {
        let remaining = len - depth;
        if singles > remaining {
            return 0;
        }
        if remaining == 0 {
            return 1;
        }
        let mut total = 0;
        let mut fresh_seen = false;
        let mut fresh_total = 0;
        for v in 0..counts.len() {
            let c = counts[v];
            // All unused letters lead to isomorphic subtrees.
            if c == 0 {
                if fresh_seen {
                    total += fresh_total;
                    continue;
                }
                fresh_seen = true;
            }
            let delta: isize = match c {
                0 => 1,
                1 => -1,
                _ => 0,
            };
            counts[v] += 1;
            let sub = go(depth + 1, len, counts, (singles as isize + delta) as usize);
            counts[v] -= 1;
            if c == 0 {
                fresh_total = sub;
            }
            total += sub;
        }
        total
    }
    let mut counts = vec![0u8; n];
    go(0, len, &mut counts, 0)
}

/// Closed form for [`diagonal_count_pruned`]:
/// `Σ_j C(n, j) · j! · S₂(len, j)` with `S₂` the associated Stirling numbers
/// of the second kind (partitions into blocks of size at least 2).
pub fn diagonal_count_formula(n: u64, len: usize) -> u128 {
    let mut s = vec![vec![0u128; len + 1]; len + 1];
    s[0][0] = 1;
    for m in 1..=len {
        for j in 1..=len {
            let a = j as u128 * s[m - 1][j];
            let b = if m >= 2 { (m as u128 - 1) * s[m - 2][j - 1] } else { 0 };
            s[m][j] = a + b;
        }
    }
    let mut total = 0u128;
    let mut falling = 1u128;
    for j in 0..=len {
        if j as u64 > n {
            break;
        }
        total += falling * s[len][j];
        falling *= (n - j as u64) as u128;
    }
    total
}
