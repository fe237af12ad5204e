//! Arithmetic in `F_p[x]/(Phi_p(x))`, the reduction mod `p` of `Z[zeta_p]`.
//!
//! Elements are stored on the power basis `1, x, ..., x^(p-2)`; the relation
//! `x^(p-1) = -(x^(p-2) + ... + x + 1)` is applied eagerly, so two elements are
//! equal exactly when their coefficient vectors are.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycModP {
    p: u32,
    coeffs: Vec<u32>,
}

impl CycModP {
    /// Builds an element from power-basis coefficients (`len <= p - 1`); entries are reduced mod `p`.
    pub fn from_coeffs(p: u32, coeffs: &[u32]) -> Self {
        assert!(
            coeffs.len() < p as usize,
            "too many coefficients for p = {p}"
        );
        let mut v: Vec<u32> = coeffs.iter().map(|&c| c % p).collect();
        v.resize(p as usize - 1, 0);
        Self { p, coeffs: v }
    }

    /// Canonicalizes `sum_{k<p} full[k] x^k` (an element of `F_p[x]/(x^p - 1)`).
    pub fn from_group_ring(p: u32, full: &[u64]) -> Self {
        debug_assert_eq!(full.len(), p as usize);
        let pp = p as u64;
        let top = full[p as usize - 1] % pp;
        let coeffs = full[..p as usize - 1]
            .iter()
            .map(|&c| ((c % pp + pp - top) % pp) as u32)
            .collect();
        Self { p, coeffs }
    }

    pub fn zero(p: u32) -> Self {
        Self {
            p,
            coeffs: vec![0; p as usize - 1],
        }
    }

    pub fn one(p: u32) -> Self {
        Self::constant(p, 1)
    }

    pub fn constant(p: u32, c: u32) -> Self {
        let mut z = Self::zero(p);
        z.coeffs[0] = c % p;
        z
    }

    /// The class of `x^e`.
    pub fn monomial(p: u32, e: u64) -> Self {
        let mut full = vec![0u64; p as usize];
        full[(e % p as u64) as usize] = 1;
        Self::from_group_ring(p, &full)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Coefficients of `1, x, ..., x^(p-2)`, each in `[0, p-1]`.
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::RingMismatch(self.p, other.p));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let p = self.p as usize;
        // convolution folded modulo x^p - 1
        let mut acc = vec![0u64; p];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let a = a as u64;
            let (head, tail) = other.coeffs.split_at((p - i).min(p - 1));
            for (slot, &b) in acc[i..].iter_mut().zip(head) {
                *slot += a * b as u64;
            }
            for (slot, &b) in acc.iter_mut().zip(tail) {
                *slot += a * b as u64;
            }
        }
        Self::from_group_ring(self.p, &acc)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Image under `s_a : x -> x^a`.
    pub fn galois(&self, a: u64) -> Result<Self> {
        let p = self.p as u64;
        let a = a % p;
        if a == 0 {
            return Err(Error::BadGaloisIndex { p: self.p, a });
        }
        let mut full = vec![0u64; p as usize];
        let mut idx = 0u64;
        for &c in &self.coeffs {
            full[idx as usize] = c as u64;
            idx += a;
            if idx >= p {
                idx -= p;
            }
        }
        Ok(Self::from_group_ring(self.p, &full))
    }

    /// Residue modulo `(x - 1)`: the sum of the coefficients.
    pub fn augmentation(&self) -> u32 {
        (self.coeffs.iter().map(|&c| c as u64).sum::<u64>() % self.p as u64) as u32
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn scale(&self, k: u32) -> Self {
        let p = self.p as u64;
        let k = k as u64 % p;
        Self {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .map(|&c| (c as u64 * k % p) as u32)
                .collect(),
        }
    }

    /// Truncated logarithm of a 1-unit (augmentation 1).
    ///
    /// With `t = x - 1` the ring is `F_p[t]/(t^(p-1))`, so `log(1 + z)` only
    /// involves denominators below `p` and is an isomorphism from the 1-units
    /// (which have exponent `p`) onto the ideal `(t)`. The result is returned
    /// on the usual power basis.
    pub fn log_unit(&self) -> Result<Self> {
        if self.augmentation() != 1 {
            return Err(Error::InvalidParameter(
                "logarithm needs an element congruent to 1 mod (x - 1)".into(),
            ));
        }
        let p = self.p as u64;
        let n = self.coeffs.len();
        let u = taylor_shift(&self.coeffs, 1, self.p);
        debug_assert_eq!(u[0], 1);
        let inv = inverses(self.p);
        // q = u'/u mod t^(n-1), then integrate
        let du: Vec<u64> = (0..n - 1)
            .map(|k| (k as u64 + 1) * u[k + 1] as u64 % p)
            .collect();
        let mut q = vec![0u64; n - 1];
        for k in 0..n - 1 {
            let mut s = du[k] + p * p * (n as u64);
            for j in 1..=k {
                s -= u[j] as u64 * q[k - j];
            }
            q[k] = s % p;
        }
        let mut log = vec![0u32; n];
        for k in 0..n - 1 {
            log[k + 1] = (q[k] * inv[k + 1] % p) as u32;
        }
        let coeffs = taylor_shift(&log, self.p - 1, self.p);
        Ok(Self { p: self.p, coeffs })
    }
}

/// Coefficients of `f(t + shift)` given those of `f(t)`, all mod `p`.
fn taylor_shift(f: &[u32], shift: u32, p: u32) -> Vec<u32> {
    let p64 = p as u64;
    let s = shift as u64 % p64;
    let mut a: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let n = a.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            a[j] = (a[j] + s * a[j + 1]) % p64;
        }
    }
    a.into_iter().map(|c| c as u32).collect()
}

fn inverses(p: u32) -> Vec<u64> {
    let p = p as u64;
    let mut inv = vec![0u64; p as usize];
    if p > 1 {
        inv[1] = 1;
    }
    for k in 2..p {
        inv[k as usize] = (p - (p / k) * inv[(p % k) as usize] % p) % p;
    }
    inv
}

impl Add for &CycModP {
    type Output = CycModP;
    fn add(self, rhs: &CycModP) -> CycModP {
        assert_eq!(self.p, rhs.p, "ring mismatch");
        CycModP {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(&a, &b)| (a + b) % self.p)
                .collect(),
        }
    }
}

impl Neg for &CycModP {
    type Output = CycModP;
    fn neg(self) -> CycModP {
        CycModP {
            p: self.p,
            coeffs: self.coeffs.iter().map(|&a| (self.p - a) % self.p).collect(),
        }
    }
}

impl Sub for &CycModP {
    type Output = CycModP;
    fn sub(self, rhs: &CycModP) -> CycModP {
        self + &(-rhs)
    }
}

impl Mul for &CycModP {
    type Output = CycModP;
    fn mul(self, rhs: &CycModP) -> CycModP {
        CycModP::mul(self, rhs).expect("ring mismatch")
    }
}

/// PARI-style rendering of the lifted polynomial, e.g. `2*x^3 + x + 4`.
impl fmt::Display for CycModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(usize, u64)> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| (k, c as u64))
            .collect();
        write_pari_terms(f, &terms)
    }
}

impl fmt::Debug for CycModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycModP(p={}, {})", self.p, self)
    }
}

/// Writes `(degree, coefficient)` pairs (descending degree, nonzero) the way PARI prints them.
pub(crate) fn write_pari_terms(f: &mut impl fmt::Write, terms: &[(usize, u64)]) -> fmt::Result {
    if terms.is_empty() {
        return f.write_str("0");
    }
    for (i, &(k, c)) in terms.iter().enumerate() {
        if i > 0 {
            f.write_str(" + ")?;
        }
        match (k, c) {
            (0, c) => write!(f, "{c}")?,
            (1, 1) => f.write_str("x")?,
            (1, c) => write!(f, "{c}*x")?,
            (k, 1) => write!(f, "x^{k}")?,
            (k, c) => write!(f, "{c}*x^{k}")?,
        }
    }
    Ok(())
}
