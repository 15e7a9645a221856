//! `F_q[r][x_1, ..., x_n] / (x_i^k - (r + b_i))`, stored densely as one
//! `UniPoly` in `r` per exponent vector `e ∈ {0, ..., k-1}^n`.

use super::poly::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedPoly {
    q: u64,
    k: usize,
    shifts: Vec<u64>,
    terms: Vec<UniPoly>,
}

impl ReducedPoly {
    /// The constant 1 in the ring with relations `x_i^k = r + shifts[i]`.
    pub fn one(q: u64, k: usize, shifts: &[u64]) -> Self {
        let size = k.pow(shifts.len() as u32);
        let mut terms = vec![UniPoly::zero(q); size];
        terms[0] = UniPoly::one(q);
        Self {
            q,
            k,
            shifts: shifts.iter().map(|&b| b % q).collect(),
            terms,
        }
    }

    pub fn nvars(&self) -> usize {
        self.shifts.len()
    }

    /// Coefficient of `x^e` (an element of `F_q[r]`).
    pub fn coeff(&self, e: &[usize]) -> &UniPoly {
        let mut idx = 0;
        for &d in e.iter().rev() {
            idx = idx * self.k + d;
        }
        &self.terms[idx]
    }

    /// The part of degree 0 in every `x_i`.
    pub fn constant_part(&self) -> &UniPoly {
        &self.terms[0]
    }

    /// True when some monomial with a nonzero `x`-exponent survives.
    pub fn has_x_dependence(&self) -> bool {
        self.terms.iter().skip(1).any(|p| !p.is_zero())
    }

    /// `self · Σ_i c_i x_i`, re-reduced.
    pub fn mul_linear_form(&self, c: &[u64]) -> ReducedPoly {
        assert_eq!(c.len(), self.nvars());
        let q = self.q;
        let k = self.k;
        let mut out = vec![UniPoly::zero(q); self.terms.len()];
        for (idx, p) in self.terms.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let mut stride = 1;
            let mut rest = idx;
            for (i, &ci) in c.iter().enumerate() {
                let digit = rest % k;
                rest /= k;
                if ci % q != 0 {
                    let scaled = p.scale(ci);
                    if digit + 1 < k {
                        out[idx + stride].add_assign(&scaled);
                    } else {
                        out[idx - digit * stride].add_assign(&scaled.mul_linear(self.shifts[i]));
                    }
                }
                stride *= k;
            }
        }
        ReducedPoly {
            q,
            k,
            shifts: self.shifts.clone(),
            terms: out,
        }
    }
}
