//! Dense univariate polynomials over `F_q`.

use serde::{Deserialize, Serialize};

use crate::field::pow_mod;

/// `c_0 + c_1 r + ... + c_d r^d` with `c_d ≠ 0`; the zero polynomial has no
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UniPoly {
    q: u64,
    coeffs: Vec<u64>,
}

#[inline]
fn mulm(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

impl UniPoly {
    pub fn zero(q: u64) -> Self {
        Self { q, coeffs: Vec::new() }
    }

    pub fn constant(q: u64, c: u64) -> Self {
        Self::from_coeffs(q, vec![c % q])
    }

    pub fn one(q: u64) -> Self {
        Self::constant(q, 1)
    }

    /// `r + c`.
    pub fn linear(q: u64, c: u64) -> Self {
        Self::from_coeffs(q, vec![c % q, 1])
    }

    /// Coefficients lowest degree first; reduced mod `q` and trimmed.
    pub fn from_coeffs(q: u64, coeffs: Vec<u64>) -> Self {
        let mut p = Self {
            q,
            coeffs: coeffs.into_iter().map(|c| c % q).collect(),
        };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (mulm(acc, x % self.q, self.q) + c) % self.q)
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + b) % self.q
            })
            .collect();
        UniPoly::from_coeffs(self.q, c)
    }

    /// In-place `self += other`.
    pub fn add_assign(&mut self, other: &UniPoly) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), 0);
        }
        for (a, &b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a = (*a + b) % self.q;
        }
        self.trim();
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly::from_coeffs(self.q, self.coeffs.iter().map(|&c| (self.q - c) % self.q).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u64) -> UniPoly {
        UniPoly::from_coeffs(self.q, self.coeffs.iter().map(|&a| mulm(a, c % self.q, self.q)).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(self.q);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mulm(a, b, self.q)) % self.q;
            }
        }
        UniPoly::from_coeffs(self.q, out)
    }

    /// `self · (r + c)`.
    pub fn mul_linear(&self, c: u64) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let q = self.q;
        let mut out = vec![0u64; self.coeffs.len() + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            out[i + 1] = (out[i + 1] + a) % q;
            out[i] = (out[i] + mulm(a, c % q, q)) % q;
        }
        UniPoly::from_coeffs(q, out)
    }

    pub fn pow(&self, e: u32) -> UniPoly {
        let mut acc = UniPoly::one(self.q);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `(quotient, remainder)`. Panics on division by zero.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let q = self.q;
        let dd = d.coeffs.len() - 1;
        let inv = pow_mod(d.leading(), q - 2, q);
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(q), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = mulm(rem[i + dd], inv, q);
            quot[i] = c;
            if c == 0 {
                continue;
            }
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[i + j] = (rem[i + j] + q - mulm(c, dc, q)) % q;
            }
        }
        rem.truncate(dd);
        (UniPoly::from_coeffs(q, quot), UniPoly::from_coeffs(q, rem))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.div_rem(d).1
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(pow_mod(self.leading(), self.q - 2, self.q))
    }

    pub fn derivative(&self) -> UniPoly {
        let q = self.q;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| mulm(a, i as u64 % q, q))
            .collect();
        UniPoly::from_coeffs(q, c)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `F / gcd(F, F')`. Its degree counts the distinct roots of `F` over the
    /// algebraic closure whenever `p > deg F`.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_round_trip() {
        let q = 97;
        let a = UniPoly::from_coeffs(q, vec![3, 0, 5, 1, 7]);
        let d = UniPoly::from_coeffs(q, vec![2, 9, 1]);
        let (quo, rem) = a.div_rem(&d);
        assert_eq!(quo.mul(&d).add(&rem), a);
        assert!(rem.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn squarefree_counts_distinct_roots() {
        let q = 101;
        // (r + 1)^3 (r + 5)^2 (r + 7)
        let f = UniPoly::linear(q, 1)
            .pow(3)
            .mul(&UniPoly::linear(q, 5).pow(2))
            .mul(&UniPoly::linear(q, 7));
        assert_eq!(f.degree(), Some(6));
        assert_eq!(f.squarefree_part().degree(), Some(3));
    }

    #[test]
    fn irreducible_quadratic_has_two_geometric_roots() {
        // r^2 + 1 is irreducible mod 7
        let f = UniPoly::from_coeffs(7, vec![1, 0, 1]);
        assert_eq!(f.squarefree_part().degree(), Some(2));
    }

    #[test]
    fn eval_and_derivative() {
        let f = UniPoly::from_coeffs(13, vec![1, 2, 3]);
        assert_eq!(f.eval(2), (1 + 4 + 12) % 13);
        assert_eq!(f.derivative(), UniPoly::from_coeffs(13, vec![2, 6]));
        assert_eq!(UniPoly::linear(13, 4).mul_linear(9), UniPoly::linear(13, 4).mul(&UniPoly::linear(13, 9)));
    }
}
