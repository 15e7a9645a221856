//! Prime fields with a discrete-log table, multiplicative and additive
//! characters, and Gauss sums.
//!
//! The additive character is fixed to `ψ(x) = exp(2πi x/q)`. Multiplicative
//! characters are indexed by `a ∈ Z/(q-1)` through `χ_a(g^m) = exp(2πi a m/(q-1))`
//! where `g` is the smallest primitive root. Every character vanishes at 0,
//! including the trivial one: all sums in this crate range over `F_q^×`.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::OnceLock;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::ComplexSum;

/// Largest modulus accepted by [`PrimeField::new`]; tables are `O(q)` words.
pub const MAX_MODULUS: u64 = 1 << 31;

/// A multiplicative character of `F_q^×`, stored as its index modulo `q - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultChar {
    index: u64,
    modulus: u64,
}

impl MultChar {
    /// Character of index `index mod modulus` in a cyclic group of order `modulus`.
    pub fn new(index: u64, modulus: u64) -> Self {
        assert!(modulus > 0, "character group must be nonempty");
        Self {
            index: index % modulus,
            modulus,
        }
    }

    pub fn trivial(modulus: u64) -> Self {
        Self::new(0, modulus)
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// Order of the ambient character group, `q - 1`.
    pub fn group_order(&self) -> u64 {
        self.modulus
    }

    pub fn is_trivial(&self) -> bool {
        self.index == 0
    }

    /// Order of the character: `(q-1) / gcd(a, q-1)`.
    pub fn order(&self) -> u64 {
        self.modulus / gcd(self.index, self.modulus)
    }

    /// `χ(-1) = 1`.
    pub fn is_even(&self) -> bool {
        // -1 = g^{(q-1)/2}
        (self.index as u128 * (self.modulus / 2) as u128 % self.modulus as u128) == 0
            || self.modulus % 2 == 1
    }

    pub fn mul(&self, other: &MultChar) -> MultChar {
        debug_assert_eq!(self.modulus, other.modulus);
        MultChar::new((self.index + other.index) % self.modulus, self.modulus)
    }

    pub fn inv(&self) -> MultChar {
        MultChar::new((self.modulus - self.index) % self.modulus, self.modulus)
    }

    pub fn pow(&self, e: u64) -> MultChar {
        let idx = (self.index as u128 * e as u128 % self.modulus as u128) as u64;
        MultChar::new(idx, self.modulus)
    }

    /// All characters `ψ` with `ψ^e = self`, in increasing index order.
    pub fn roots(&self, e: u64) -> Vec<MultChar> {
        let n = self.modulus;
        let d = gcd(e % n, n);
        let d = if d == 0 { n } else { d };
        if self.index % d != 0 {
            return Vec::new();
        }
        (0..n)
            .filter(|&y| (y as u128 * e as u128 % n as u128) as u64 == self.index)
            .map(|y| MultChar::new(y, n))
            .collect()
    }
}

impl fmt::Display for MultChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "χ[{}]", self.index)
    }
}

/// `F_q` with its smallest primitive root and discrete-log tables.
pub struct PrimeField {
    q: u64,
    g: u64,
    /// `dlog[x] = m` with `g^m = x`; `dlog[0]` is a sentinel.
    dlog: Vec<u32>,
    /// `exp[m] = g^m`, `0 <= m < q - 1`.
    exp: Vec<u32>,
    mult_units: OnceLock<Vec<Complex64>>,
    add_units: OnceLock<Vec<Complex64>>,
}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrimeField")
            .field("q", &self.q)
            .field("g", &self.g)
            .finish()
    }
}

impl PrimeField {
    /// Builds `F_q` for a prime `3 <= q < 2^31`.
    pub fn new(q: u64) -> Result<Self> {
        if q < 3 {
            return Err(Error::Precondition(format!(
                "modulus must be an odd prime >= 3, got {q}"
            )));
        }
        if q >= MAX_MODULUS {
            return Err(Error::ResourceLimit(format!(
                "modulus {q} exceeds the table bound 2^31"
            )));
        }
        if let Some(p) = smallest_factor(q) {
            return Err(Error::NotPrime(q, p));
        }
        let n = q - 1;
        let factors = prime_factors(n);
        let g = (2..q)
            .find(|&g| factors.iter().all(|&p| pow_mod(g, n / p, q) != 1))
            .expect("a prime field has a primitive root");

        let mut dlog = vec![u32::MAX; q as usize];
        let mut exp = vec![0u32; n as usize];
        let mut x = 1u64;
        for m in 0..n {
            exp[m as usize] = x as u32;
            dlog[x as usize] = m as u32;
            x = x * g % q;
        }
        debug_assert_eq!(x, 1);
        Ok(Self {
            q,
            g,
            dlog,
            exp,
            mult_units: OnceLock::new(),
            add_units: OnceLock::new(),
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Order of `F_q^×`.
    pub fn order(&self) -> u64 {
        self.q - 1
    }

    /// The smallest primitive root.
    pub fn generator(&self) -> u64 {
        self.g
    }

    /// Discrete logarithm base `g`. `x` must be a nonzero residue.
    #[inline]
    pub fn dlog(&self, x: u64) -> u64 {
        let v = self.dlog[(x % self.q) as usize];
        debug_assert!(v != u32::MAX, "dlog of zero");
        v as u64
    }

    /// `g^m`.
    #[inline]
    pub fn exp(&self, m: u64) -> u64 {
        self.exp[(m % (self.q - 1)) as usize] as u64
    }

    #[inline]
    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.q as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.q
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.q - b % self.q) % self.q
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        (self.q - a % self.q) % self.q
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.q
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.q)
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, a: u64) -> u64 {
        let n = self.q - 1;
        self.exp((n - self.dlog(a)) % n)
    }

    pub fn char(&self, index: u64) -> MultChar {
        MultChar::new(index, self.q - 1)
    }

    pub fn trivial_char(&self) -> MultChar {
        self.char(0)
    }

    /// The quadratic character `χ_(2)`.
    pub fn quadratic_char(&self) -> MultChar {
        self.char((self.q - 1) / 2)
    }

    /// All characters of `F_q^×` in index order.
    pub fn characters(&self) -> impl Iterator<Item = MultChar> + '_ {
        (0..self.q - 1).map(move |a| self.char(a))
    }

    /// `exp(2πi j/(q-1))` for `j` reduced mod `q - 1`.
    #[inline]
    pub fn mult_unit(&self, j: u64) -> Complex64 {
        let n = self.q - 1;
        self.mult_units.get_or_init(|| unit_table(n))[(j % n) as usize]
    }

    /// `exp(2πi j/q)` for `j` reduced mod `q`.
    #[inline]
    pub fn add_unit(&self, j: u64) -> Complex64 {
        self.add_units.get_or_init(|| unit_table(self.q))[(j % self.q) as usize]
    }

    /// `χ(x)`, with `χ(0) = 0` for every character.
    pub fn eval_char(&self, chi: &MultChar, x: u64) -> Complex64 {
        let x = x % self.q;
        if x == 0 {
            return Complex64::new(0.0, 0.0);
        }
        if chi.is_trivial() {
            return Complex64::new(1.0, 0.0);
        }
        let n = self.q - 1;
        let j = (chi.index() as u128 * self.dlog(x) as u128 % n as u128) as u64;
        self.mult_unit(j)
    }

    /// `ψ_a(x) = exp(2πi a x/q)`.
    pub fn eval_additive(&self, a: u64, x: u64) -> Complex64 {
        self.add_unit(self.mul(a % self.q, x % self.q))
    }

    /// `τ(χ) = Σ_{y ∈ F_q^×} χ(y) e(y/q)` by direct summation.
    pub fn gauss_sum(&self, chi: &MultChar) -> Complex64 {
        let n = self.q - 1;
        (1..self.q)
            .map(|y| {
                let j = (chi.index() as u128 * self.dlog(y) as u128 % n as u128) as u64;
                self.mult_unit(j) * self.add_unit(y)
            })
            .collect::<ComplexSum>()
            .value()
    }

    /// `ε_χ = τ(χ)/√q`. For the trivial character this is `-1/√q`.
    pub fn normalized_gauss_sum(&self, chi: &MultChar) -> Complex64 {
        self.gauss_sum(chi) / (self.q as f64).sqrt()
    }
}

fn unit_table(n: u64) -> Vec<Complex64> {
    (0..n)
        .map(|j| {
            let (s, c) = (TAU * j as f64 / n as f64).sin_cos();
            Complex64::new(c, s)
        })
        .collect()
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u128;
    let mut base = (a % m) as u128;
    let m128 = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % m128;
        }
        base = base * base % m128;
        e >>= 1;
    }
    a = r as u64;
    a
}

/// Deterministic Miller–Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = (x as u128 * x as u128 % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime factor of a composite `n`, or `None` when `n` is prime.
fn smallest_factor(n: u64) -> Option<u64> {
    if is_prime(n) {
        return None;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            return Some(p);
        }
        p += 1;
    }
    Some(n)
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Primes in `[lo, hi]`.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}
