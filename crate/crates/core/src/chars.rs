//! Classification of character tuples: Kummer induction, self-duality,
//! and the NIO / CGM properties.
//!
//! Tuples are multisets: every predicate here is invariant under reordering.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};
use crate::field::{divisors, gcd, MultChar, PrimeField};

/// An ordered `k`-tuple of characters of one `F_q^×`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharTuple {
    chars: Vec<MultChar>,
}

impl CharTuple {
    pub fn new(chars: Vec<MultChar>) -> Result<Self> {
        let first = chars
            .first()
            .ok_or_else(|| precondition("a character tuple needs k >= 1 entries"))?;
        if chars.iter().any(|c| c.group_order() != first.group_order()) {
            return Err(precondition("characters belong to different fields"));
        }
        Ok(Self { chars })
    }

    /// Tuple from indices mod `q - 1`.
    pub fn from_indices(field: &PrimeField, indices: &[u64]) -> Result<Self> {
        Self::new(indices.iter().map(|&a| field.char(a)).collect())
    }

    /// `(1, ..., 1)` of length `k`.
    pub fn trivial(field: &PrimeField, k: usize) -> Self {
        Self {
            chars: vec![field.trivial_char(); k.max(1)],
        }
    }

    pub fn k(&self) -> usize {
        self.chars.len()
    }

    pub fn chars(&self) -> &[MultChar] {
        &self.chars
    }

    pub fn indices(&self) -> Vec<u64> {
        self.chars.iter().map(|c| c.index()).collect()
    }

    pub fn group_order(&self) -> u64 {
        self.chars[0].group_order()
    }

    /// `Λ = χ_1 ⋯ χ_k`.
    pub fn product(&self) -> MultChar {
        let n = self.group_order();
        self.chars
            .iter()
            .fold(MultChar::trivial(n), |acc, c| acc.mul(c))
    }

    /// `χ_0 · χ`, entrywise.
    pub fn twist(&self, chi0: &MultChar) -> CharTuple {
        CharTuple {
            chars: self.chars.iter().map(|c| c.mul(chi0)).collect(),
        }
    }

    fn multiset(&self) -> BTreeMap<u64, usize> {
        let mut m = BTreeMap::new();
        for c in &self.chars {
            *m.entry(c.index()).or_insert(0) += 1;
        }
        m
    }
}

/// Evidence that a tuple is Kummer-induced: the tuple is the union, with
/// multiplicity, of the full fibers `{χ : χ^d = ξ_j}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KummerWitness {
    pub d: u64,
    /// Indices of the `ξ_j`, `k/d` of them, sorted.
    pub xi: Vec<u64>,
}

impl KummerWitness {
    /// Rebuilds the multiset from the witness, sorted by index.
    pub fn expand(&self, group_order: u64) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .xi
            .iter()
            .flat_map(|&x| MultChar::new(x, group_order).roots(self.d))
            .map(|c| c.index())
            .collect();
        out.sort_unstable();
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DualityKind {
    Symmetric,
    Alternating,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dualizing {
    pub xi_index: u64,
    pub kind: DualityKind,
}

/// Result of [`classify_tuple`]. Field names are part of the JSON output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub k: usize,
    pub lambda_index: u64,
    pub kummer_induced: bool,
    pub kummer_witness: Option<KummerWitness>,
    pub dualizing: Vec<Dualizing>,
    pub nio: bool,
    pub cgm: bool,
    /// Set when the dualizing characters carry both tags; NIO is then
    /// decided by the existence of a symmetric one.
    pub mixed_duality: bool,
}

impl ClassificationReport {
    pub fn self_dual(&self) -> bool {
        !self.dualizing.is_empty()
    }
}

/// Decides Kummer induction by trying every divisor `d ≠ 1` of `k` that also
/// divides `q - 1`.
pub fn is_kummer_induced(t: &CharTuple) -> (bool, Option<KummerWitness>) {
    let n = t.group_order();
    let k = t.k() as u64;
    let counts = t.multiset();
    for d in divisors(k).into_iter().filter(|&d| d != 1 && n % d == 0) {
        if let Some(w) = kummer_witness(&counts, d, n) {
            return (true, Some(w));
        }
    }
    (false, None)
}

fn kummer_witness(counts: &BTreeMap<u64, usize>, d: u64, n: u64) -> Option<KummerWitness> {
    // μ_d inside the character group: indices that are multiples of n/d
    let step = n / d;
    let mut xi = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (&a, &c) in counts {
        if seen.contains(&a) {
            continue;
        }
        for j in 0..d {
            let b = (a + j * step) % n;
            if counts.get(&b) != Some(&c) {
                return None;
            }
            seen.insert(b);
        }
        let base = (a as u128 * d as u128 % n as u128) as u64;
        xi.extend(std::iter::repeat(base).take(c));
    }
    xi.sort_unstable();
    Some(KummerWitness { d, xi })
}

/// Every `ξ` for which the multiset is stable under `χ ↦ ξ χ^{-1}`.
pub fn dualizing_characters(t: &CharTuple) -> Vec<Dualizing> {
    let n = t.group_order();
    let counts = t.multiset();
    let k = t.k() as u64;
    let lambda = t.product();
    let first = t.chars[0].index();
    // χ_1 must be sent to some χ_j, so ξ = χ_1 χ_j
    let mut candidates: Vec<u64> = t.chars.iter().map(|c| (first + c.index()) % n).collect();
    candidates.sort_unstable();
    candidates.dedup();
    candidates
        .into_iter()
        .filter(|&x| {
            counts
                .iter()
                .all(|(&a, &c)| counts.get(&((x + n - a) % n)) == Some(&c))
        })
        .map(|x| {
            let xi = MultChar::new(x, n);
            let kind = if k % 2 == 0 && xi.pow(k / 2) == lambda {
                DualityKind::Alternating
            } else {
                DualityKind::Symmetric
            };
            Dualizing { xi_index: x, kind }
        })
        .collect()
}

pub fn classify_tuple(t: &CharTuple) -> ClassificationReport {
    let k = t.k();
    let (kummer_induced, kummer_witness) = is_kummer_induced(t);
    let dualizing = dualizing_characters(t);
    let lambda = t.product();
    let any_symmetric = dualizing.iter().any(|d| d.kind == DualityKind::Symmetric);
    let any_alternating = dualizing.iter().any(|d| d.kind == DualityKind::Alternating);
    let nio = !kummer_induced && (k % 2 == 1 || !any_symmetric);
    let cgm = !kummer_induced
        && lambda.is_trivial()
        && (k % 2 == 1
            || dualizing.is_empty()
            || dualizing
                .iter()
                .any(|d| d.xi_index == 0 && d.kind == DualityKind::Alternating));
    ClassificationReport {
        k,
        lambda_index: lambda.index(),
        kummer_induced,
        kummer_witness,
        dualizing,
        nio,
        cgm,
        mixed_duality: any_symmetric && any_alternating,
    }
}

/// Outcome of looking for a twist `χ_0` that turns an NIO tuple into a CGM one
/// over `F_q` itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum TwistOutcome {
    Twisted { chi0_index: u64, tuple: Vec<u64> },
    /// The required root character only exists over an extension field.
    NeedsExtension,
    NotNio,
}

/// If `t` is self-dual alternating with even `k`, `χ_0` is the inverse of a
/// square root of the dualizing character; otherwise it is the inverse of a
/// `k`-th root of `Λ`. The smallest-index root is used.
pub fn twist_to_cgm(t: &CharTuple) -> TwistOutcome {
    let report = classify_tuple(t);
    if !report.nio {
        return TwistOutcome::NotNio;
    }
    let n = t.group_order();
    let k = t.k() as u64;
    let alternating = report
        .dualizing
        .iter()
        .find(|d| d.kind == DualityKind::Alternating);
    let roots = match (k % 2 == 0, alternating) {
        (true, Some(d)) => MultChar::new(d.xi_index, n).inv().roots(2),
        _ => t.product().inv().roots(k),
    };
    match roots.first() {
        Some(chi0) => TwistOutcome::Twisted {
            chi0_index: chi0.index(),
            tuple: t.twist(chi0).indices(),
        },
        None => TwistOutcome::NeedsExtension,
    }
}

/// `true` when no `d ≠ 1` dividing both `k` and `q - 1` exists, in which case
/// no tuple of length `k` can be Kummer-induced.
pub fn kummer_impossible(k: u64, group_order: u64) -> bool {
    gcd(k, group_order) == 1
}
