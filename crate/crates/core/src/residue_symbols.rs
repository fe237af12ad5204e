//! Exact components in `Z[zeta_p]`, their `ell`-content, the `p`-th power
//! residue symbol at a prime above `ell`, and norms via multimodular evaluation.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cycring::{write_pari_terms, CycModP};
use crate::error::{Error, Result};
use crate::jacobi::{check_exponent, exponent_counts, TwistContext};
use crate::modarith::{inv_mod_prime, is_prime, mul_mod, pow_mod};
use crate::par::Executor;

/// Element of `Z[zeta_p]` on the power basis `1, x, ..., x^(p-2)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycBigInt {
    p: u32,
    coeffs: Vec<BigInt>,
}

impl CycBigInt {
    /// From power-basis coefficients, `len <= p - 1`.
    pub fn from_coeffs(p: u32, mut coeffs: Vec<BigInt>) -> Self {
        assert!(
            coeffs.len() < p as usize,
            "too many coefficients for p = {p}"
        );
        coeffs.resize(p as usize - 1, BigInt::zero());
        Self { p, coeffs }
    }

    /// Canonicalizes `sum_{k<p} full[k] x^k` by subtracting the `x^(p-1)` coefficient.
    pub fn from_group_ring(p: u32, mut full: Vec<BigInt>) -> Self {
        debug_assert_eq!(full.len(), p as usize);
        let top = full.pop().expect("p > 0");
        if !top.is_zero() {
            for c in &mut full {
                *c -= &top;
            }
        }
        Self { p, coeffs: full }
    }

    pub fn zero(p: u32) -> Self {
        Self::from_coeffs(p, Vec::new())
    }

    pub fn one(p: u32) -> Self {
        Self::constant(p, BigInt::one())
    }

    pub fn constant(p: u32, c: BigInt) -> Self {
        Self::from_coeffs(p, vec![c])
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// Largest coefficient bit length.
    pub fn max_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0)
    }

    /// Rough heap footprint of the coefficients.
    pub fn approx_bytes(&self) -> usize {
        self.coeffs.iter().map(|c| c.bits() as usize / 8 + 8).sum()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::RingMismatch(self.p, other.p));
        }
        let p = self.p as usize;
        let mut acc = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = if i + j >= p { i + j - p } else { i + j };
                acc[k] += a * b;
            }
        }
        Ok(Self::from_group_ring(self.p, acc))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same ring");
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
        let mut full = vec![BigInt::zero(); p as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            full[(k as u64 * a % p) as usize] = c.clone();
        }
        Ok(Self::from_group_ring(self.p, full))
    }

    pub fn sub_int(&self, c: &BigInt) -> Self {
        let mut out = self.clone();
        out.coeffs[0] -= c;
        out
    }

    pub fn reduce_mod_p(&self) -> CycModP {
        let pb = BigInt::from(self.p);
        let v: Vec<u32> = self
            .coeffs
            .iter()
            .map(|c| c.mod_floor(&pb).to_u32().expect("residue below p"))
            .collect();
        CycModP::from_coeffs(self.p, &v)
    }

    /// Minimum `q`-adic valuation over the coefficients; `None` for zero.
    pub fn content_valuation(&self, q: u64) -> Option<u32> {
        let mut best: Option<u32> = None;
        for c in self.coeffs.iter().filter(|c| !c.is_zero()) {
            let v = big_valuation(c, q, best);
            best = Some(best.map_or(v, |b| b.min(v)));
            if best == Some(0) {
                break;
            }
        }
        best
    }

    /// Exact division of every coefficient by `d`.
    pub fn div_exact(&self, d: &BigInt) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let (q, r) = c.div_rem(d);
                debug_assert!(r.is_zero());
                q
            })
            .collect();
        Self { p: self.p, coeffs }
    }

    /// Value at `x = r` modulo the prime `q`.
    pub fn eval_mod(&self, r: u64, q: u64) -> u64 {
        let mut acc = 0u64;
        for c in self.coeffs.iter().rev() {
            acc = (mul_mod(acc, r, q) + big_mod_u64(c, q)) % q;
        }
        acc
    }

    /// `N_{K/Q}`, the product of all `p - 1` conjugates, recovered from its
    /// residues modulo enough primes `q = 1 (mod p)`.
    pub fn norm(&self) -> BigInt {
        let pu = self.p as u64;
        let l1: BigInt = self.coeffs.iter().map(|c| c.abs()).sum();
        if l1.is_zero() {
            return BigInt::zero();
        }
        // |N| <= ||a||_1^(p-1); the product of moduli must exceed 2|N|
        let bound_bits = (pu - 1) * l1.bits() + 2;
        let mut moduli = Vec::new();
        let mut residues = Vec::new();
        let mut covered = 0u64;
        let mut q = ((1u64 << 62) / (2 * pu)) * (2 * pu) + 1;
        while covered < bound_bits {
            q -= 2 * pu;
            if !is_prime(q) {
                continue;
            }
            let w = root_of_unity(pu, q);
            let mut r = w;
            let mut prod = 1u64;
            for _ in 1..pu {
                prod = mul_mod(prod, self.eval_mod(r, q), q);
                r = mul_mod(r, w, q);
            }
            moduli.push(q);
            residues.push(prod);
            covered += 61;
        }
        crt_symmetric(&residues, &moduli)
    }
}

/// Renders like PARI: `-8*x^9 + 3*x + 1` with signs folded into the terms.
impl fmt::Display for CycBigInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(usize, &BigInt)> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, c)) in terms.into_iter().enumerate() {
            let neg = c.sign() == Sign::Minus;
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.magnitude();
            let mut s = String::new();
            match mag.to_u64() {
                Some(m) => write_pari_terms(&mut s, &[(k, m)])?,
                None if k == 0 => s = mag.to_string(),
                None if k == 1 => s = format!("{mag}*x"),
                None => s = format!("{mag}*x^{k}"),
            }
            f.write_str(&s)?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycBigInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycBigInt(p={}, {})", self.p, self)
    }
}

fn big_mod_u64(c: &BigInt, q: u64) -> u64 {
    let r = c
        .magnitude()
        .iter_u64_digits()
        .rev()
        .fold(0u128, |acc, d| ((acc << 64) | d as u128) % q as u128) as u64;
    if c.sign() == Sign::Minus && r != 0 {
        q - r
    } else {
        r
    }
}

/// `v_q(c)` for nonzero `c`, stopping early once it reaches `cap`.
fn big_valuation(c: &BigInt, q: u64, cap: Option<u32>) -> u32 {
    let qb = BigInt::from(q);
    let mut x = c.clone();
    let mut v = 0;
    while cap.map_or(true, |m| v < m) {
        let (quo, rem) = x.div_rem(&qb);
        if !rem.is_zero() {
            break;
        }
        x = quo;
        v += 1;
    }
    v
}

/// A primitive `p`-th root of unity modulo the prime `q = 1 (mod p)`.
fn root_of_unity(p: u64, q: u64) -> u64 {
    (2..q)
        .map(|h| pow_mod(h, (q - 1) / p, q))
        .find(|&w| w != 1)
        .expect("q = 1 mod p")
}

/// Garner reconstruction, returned in the symmetric range `(-M/2, M/2]`.
fn crt_symmetric(residues: &[u64], moduli: &[u64]) -> BigInt {
    let k = moduli.len();
    let mut digits = vec![0u64; k];
    for i in 0..k {
        let qi = moduli[i];
        // value of the mixed-radix prefix modulo q_i
        let mut t = 0u64;
        let mut prefix = 1u64;
        for j in 0..i {
            t = (t + mul_mod(digits[j] % qi, prefix, qi)) % qi;
            prefix = mul_mod(prefix, moduli[j] % qi, qi);
        }
        let diff = (residues[i] % qi + qi - t) % qi;
        digits[i] = mul_mod(diff, inv_mod_prime(prefix, qi), qi);
    }
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for i in (0..k).rev() {
        x = x * moduli[i] + digits[i];
    }
    for &q in moduli {
        m *= q;
    }
    if &x * 2 > m {
        x - m
    } else {
        x
    }
}

/// Splits `n = sign * ell^e * cofactor` with `ell` not dividing `cofactor`.
pub fn ell_power_part(n: &BigInt, ell: u64) -> Result<(u64, BigInt)> {
    if n.is_zero() {
        return Err(Error::Zero);
    }
    let lb = BigInt::from(ell);
    let mut x = n.clone();
    let mut e = 0u64;
    loop {
        let (q, r) = x.div_rem(&lb);
        if !r.is_zero() {
            break;
        }
        x = q;
        e += 1;
    }
    Ok((e, x))
}

/// Exact Jacobi sums `J_1, ..., J_(c-1)` in `Z[zeta_p]`.
pub fn exact_jacobi_sums(ctx: &TwistContext) -> Vec<CycBigInt> {
    let p = ctx.p();
    let counts = exponent_counts(ctx.logs(), p, ctx.c() as usize - 1);
    counts
        .chunks(p as usize)
        .map(|row| {
            let full = row.iter().map(|&n| -BigInt::from(n)).collect();
            CycBigInt::from_group_ring(p, full)
        })
        .collect()
}

/// Exact `J(ell) = J_1 ... J_(c-1)`.
pub fn exact_twist_product(ctx: &TwistContext) -> CycBigInt {
    exact_jacobi_sums(ctx)
        .iter()
        .fold(CycBigInt::one(ctx.p()), |acc, j| {
            acc.mul(j).expect("same ring")
        })
}

/// Which `a` enter `prod_a s_a(J^(a^(n-1)))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentRange {
    /// `a = 1, ..., (p-1)/2`, as in the mod-`p` exponent-set test.
    Half,
    /// `a = 1, ..., p-1`, the unreduced component used for symbols.
    #[default]
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactOptions {
    pub range: ComponentRange,
    /// Abort once the running product is estimated to exceed this many bytes.
    pub memory_cap: usize,
}

pub const DEFAULT_MEMORY_CAP: usize = 1 << 30;

impl Default for ExactOptions {
    fn default() -> Self {
        Self {
            range: ComponentRange::Full,
            memory_cap: DEFAULT_MEMORY_CAP,
        }
    }
}

/// `Sn = prod_a s_a(J^(a^(n-1) mod p))` with exact integer coefficients.
pub fn exact_twist_component(ctx: &TwistContext, n: u32, opts: &ExactOptions) -> Result<CycBigInt> {
    let p = ctx.p();
    check_exponent(p, n)?;
    let pp = p as u64;
    let j = exact_twist_product(ctx);
    let mut powers = Vec::with_capacity(p as usize);
    powers.push(CycBigInt::one(p));
    for k in 1..p as usize {
        let next = powers[k - 1].mul(&j)?;
        guard(&next, opts.memory_cap)?;
        powers.push(next);
    }
    let last = match opts.range {
        ComponentRange::Half => (pp - 1) / 2,
        ComponentRange::Full => pp - 1,
    };
    let mut sn = CycBigInt::one(p);
    for a in 1..=last {
        let an = pow_mod(a, n as u64 - 1, pp);
        sn = sn.mul(&powers[an as usize].galois(a)?)?;
        guard(&sn, opts.memory_cap)?;
    }
    Ok(sn)
}

fn guard(x: &CycBigInt, cap: usize) -> Result<()> {
    // a product transiently needs about twice its own size
    let bytes = 2 * x.approx_bytes();
    if bytes > cap {
        return Err(Error::MemoryCap { bytes, cap });
    }
    Ok(())
}

/// `(v, Sn / ell^v)` where `v` is the minimum `ell`-adic valuation of the coefficients.
pub fn l_content(sn: &CycBigInt, ell: u64) -> Result<(u32, CycBigInt)> {
    let v = sn.content_valuation(ell).ok_or(Error::Zero)?;
    Ok((v, sn.div_exact(&BigInt::from(ell).pow(v))))
}

/// The value of the symbol and the root used to obtain it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolValue {
    pub u: u64,
    /// `b` such that `x -> g^(b(ell-1)/p)` was the first nonvanishing evaluation.
    pub root_index: u32,
}

/// `R^((ell-1)/p) mod ell` where `R` is `reduced` evaluated at the first
/// `r = g^(bM)`, `b = 1, 2, ...`, not killing it modulo `ell`.
pub fn residue_symbol(reduced: &CycBigInt, ell: u64, g: u64) -> Result<SymbolValue> {
    let p = reduced.p() as u64;
    if ell % p != 1 {
        return Err(Error::NotSplit { p: p as u32, ell });
    }
    let m = (ell - 1) / p;
    let ro = pow_mod(g, m, ell);
    let mut r = 1;
    for b in 1..p {
        r = mul_mod(r, ro, ell);
        let big_r = reduced.eval_mod(r, ell);
        if big_r != 0 {
            return Ok(SymbolValue {
                u: pow_mod(big_r, m, ell),
                root_index: b as u32,
            });
        }
    }
    Err(Error::Internal(format!(
        "every conjugate vanishes modulo ell = {ell}; the ell-content was not removed"
    )))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    #[serde(rename = "non_local_at_L")]
    NonLocalAtL,
    #[serde(rename = "local_at_L")]
    LocalAtL,
    #[serde(rename = "local_at_p")]
    LocalAtP,
    #[serde(rename = "global_pth_power")]
    GlobalPthPower,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolReport {
    pub p: u32,
    pub n: u32,
    pub l: u64,
    pub c: u32,
    pub g: u64,
    pub v: u32,
    /// Minimum `p`-adic valuation of the coefficients of `Sn - 1`; `None` when `Sn = 1`.
    pub s: Option<u32>,
    pub u: u64,
    pub root_index: u32,
    pub classification: Classification,
}

impl SymbolReport {
    pub fn is_local_at_p(&self) -> bool {
        self.s != Some(0)
    }

    pub fn is_local_at_l(&self) -> bool {
        self.v % self.p == 0 && self.u == 1
    }

    pub fn is_global(&self) -> bool {
        self.is_local_at_p() && self.is_local_at_l()
    }

    /// The verdict lines printed after the `p= el= v= u=` header.
    pub fn phrases(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.is_local_at_p() {
            out.push("Sn local pth power at P");
        }
        if self.is_local_at_l() {
            out.push("Sn local pth power at L");
        } else {
            out.push("Sn NON local pth power at L");
        }
        if self.is_global() {
            out.push("Sn GLOBAL pth power");
        }
        out
    }
}

/// `p=37 el=149 v=259 u=102` followed by one verdict per line.
impl fmt::Display for SymbolReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} el={} v={} u={}", self.p, self.l, self.v, self.u)?;
        for line in self.phrases() {
            write!(f, "\n{line}")?;
        }
        Ok(())
    }
}

fn classification_of(local_p: bool, local_l: bool) -> Classification {
    match (local_p, local_l) {
        (true, true) => Classification::GlobalPthPower,
        (false, true) => Classification::LocalAtL,
        (true, false) => Classification::LocalAtP,
        (false, false) => Classification::NonLocalAtL,
    }
}

/// Full symbol computation for one `(p, ell, n)`.
pub fn classify(ctx: &TwistContext, n: u32, opts: &ExactOptions) -> Result<SymbolReport> {
    let sn = exact_twist_component(ctx, n, opts)?;
    let s = sn.sub_int(&BigInt::one()).content_valuation(ctx.p() as u64);
    let (v, reduced) = l_content(&sn, ctx.ell())?;
    let sym = residue_symbol(&reduced, ctx.ell(), ctx.g())?;
    let local_p = s != Some(0);
    let local_l = v % ctx.p() == 0 && sym.u == 1;
    Ok(SymbolReport {
        p: ctx.p(),
        n,
        l: ctx.ell(),
        c: ctx.c(),
        g: ctx.g(),
        v,
        s,
        u: sym.u,
        root_index: sym.root_index,
        classification: classification_of(local_p, local_l),
    })
}

/// [`classify`] over several `ell`, in input order, on the exact-job pool.
pub fn classify_many(
    exec: &Executor,
    p: u32,
    n: u32,
    ells: &[u64],
    opts: &ExactOptions,
) -> Vec<Result<SymbolReport>> {
    exec.map(ells, |&ell| {
        let ctx = TwistContext::new(p, ell)?;
        classify(&ctx, n, opts)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::{component_of, even_exponents};
    use crate::modarith::{split_primes, Limit};

    fn big(p: u32, v: &[i64]) -> CycBigInt {
        CycBigInt::from_coeffs(p, v.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn ring_basics() {
        let x = big(5, &[0, 1]);
        let x3 = big(5, &[0, 0, 0, 1]);
        assert_eq!(x.mul(&x3).unwrap(), big(5, &[-1, -1, -1, -1]));
        assert_eq!(x.pow(5), CycBigInt::one(5));
        assert_eq!(x.galois(2).unwrap(), big(5, &[0, 0, 1]));
        assert!(x.galois(5).is_err());
        assert!(x.mul(&big(7, &[1])).is_err());
        assert_eq!(big(5, &[-3, 0, 2]).to_string(), "2*x^2 - 3");
        assert_eq!(big(5, &[1, -1, 0, -7]).to_string(), "-7*x^3 - x + 1");
    }

    #[test]
    fn norms_of_small_elements() {
        // N(1 - zeta_p) = p
        assert_eq!(big(7, &[1, -1]).norm(), BigInt::from(7));
        assert_eq!(big(11, &[5]).norm(), BigInt::from(5).pow(10));
        assert_eq!(big(5, &[-2]).norm(), BigInt::from(16));
        // zeta_3 + 2: (2 + w)(2 + w^2) = 4 - 2 + 1 = 3
        assert_eq!(big(3, &[2, 1]).norm(), BigInt::from(3));
        assert!(CycBigInt::zero(5).norm().is_zero());
    }

    #[test]
    fn norm_matches_product_of_conjugates() {
        // product of all conjugates is a rational integer; compare with CRT
        let a = big(7, &[3, -1, 4, 1, -5, 9]);
        let mut prod = CycBigInt::one(7);
        for k in 1..7 {
            prod = prod.mul(&a.galois(k).unwrap()).unwrap();
        }
        assert!(prod.coeffs()[1..].iter().all(Zero::is_zero));
        assert_eq!(a.norm(), prod.coeffs()[0]);
    }

    #[test]
    fn crt_sign_and_size() {
        let moduli = [1_000_000_007u64, 998_244_353];
        let target = BigInt::from(-123_456_789_012_345i64);
        let residues: Vec<u64> = moduli.iter().map(|&q| big_mod_u64(&target, q)).collect();
        assert_eq!(crt_symmetric(&residues, &moduli), target);
    }

    #[test]
    fn exact_jacobi_conjugate_norm_law() {
        for p in [3u32, 5, 7, 11, 13] {
            for ell in split_primes(p, Limit::Count(6)) {
                let ctx = TwistContext::new(p, ell).unwrap();
                for j in exact_jacobi_sums(&ctx) {
                    let prod = j.mul(&j.galois(p as u64 - 1).unwrap()).unwrap();
                    assert_eq!(
                        prod,
                        CycBigInt::constant(p, BigInt::from(ell)),
                        "p={p} ell={ell}"
                    );
                }
            }
        }
    }

    #[test]
    fn exact_reduces_to_mod_p() {
        let ctx = TwistContext::with_params(7, 3, 29, 2).unwrap();
        assert_eq!(
            exact_twist_product(&ctx).reduce_mod_p(),
            ctx.twist_product()
        );
        let half = ExactOptions {
            range: ComponentRange::Half,
            ..Default::default()
        };
        for p in [5u32, 7, 11] {
            for ell in split_primes(p, Limit::Bound(500)) {
                let ctx = TwistContext::new(p, ell).unwrap();
                let j = ctx.twist_product();
                for n in even_exponents(p) {
                    let reduced_half = exact_twist_component(&ctx, n, &half)
                        .unwrap()
                        .reduce_mod_p();
                    let modp = component_of(&j, n).unwrap();
                    assert_eq!(reduced_half, modp, "p={p} ell={ell} n={n}");
                    let full = exact_twist_component(&ctx, n, &Default::default()).unwrap();
                    // the upper half contributes s_{-1} of the inverse, i.e. one more copy
                    assert_eq!(full.reduce_mod_p(), modp.pow(2), "p={p} ell={ell} n={n}");
                }
            }
        }
    }

    #[test]
    fn content_and_symbol() {
        let sn = big(5, &[7 * 49, 14 * 7, 0, 49 * 3]);
        let (v, red) = l_content(&sn, 7).unwrap();
        assert_eq!(v, 2);
        assert_eq!(red, big(5, &[7, 2, 0, 3]));
        let (v, red) = l_content(&CycBigInt::constant(5, BigInt::from(11)), 11).unwrap();
        assert_eq!((v, red), (1, CycBigInt::one(5)));
        assert!(matches!(
            l_content(&CycBigInt::zero(5), 11),
            Err(Error::Zero)
        ));
        // a rational integer prime to ell is a p-th power residue iff its M-th power is 1
        let sym = residue_symbol(&CycBigInt::constant(5, BigInt::from(3)), 11, 2).unwrap();
        assert_eq!(sym.u, pow_mod(3, 2, 11));
        assert_eq!(sym.root_index, 1);
        assert!(residue_symbol(&CycBigInt::zero(5), 11, 2).is_err());
    }

    #[test]
    fn memory_cap_aborts() {
        let ctx = TwistContext::new(37, 149).unwrap();
        let tight = ExactOptions {
            memory_cap: 4096,
            ..Default::default()
        };
        assert!(matches!(
            exact_twist_component(&ctx, 32, &tight),
            Err(Error::MemoryCap { .. })
        ));
    }

    #[test]
    fn report_phrases() {
        let mut r = SymbolReport {
            p: 37,
            n: 32,
            l: 149,
            c: 2,
            g: 2,
            v: 259,
            s: Some(0),
            u: 102,
            root_index: 1,
            classification: Classification::NonLocalAtL,
        };
        assert_eq!(
            r.to_string(),
            "p=37 el=149 v=259 u=102\nSn NON local pth power at L"
        );
        r.s = Some(1);
        r.u = 1;
        r.classification = Classification::GlobalPthPower;
        assert_eq!(r.phrases().len(), 3);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains(r#""classification":"global_pth_power""#));
        assert_eq!(serde_json::from_str::<SymbolReport>(&json).unwrap(), r);
    }
}
