//! Jacobi sums modulo `p`, the twist product `J(ell) = J_1 ... J_(c-1)`, its
//! odd-character components and the exponent set of `p`-primarity.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cycring::CycModP;
use crate::error::{Error, Result};
use crate::modarith::{
    is_prime, is_primitive_root, is_split_prime, pow_mod, primitive_root, LogTable,
};

/// Parameters fixing one twist: `p`, the twist exponent `c`, the split prime
/// `ell` and the primitive root `g` with `psi(g) = zeta_p`.
#[derive(Debug, Clone)]
pub struct TwistContext {
    p: u32,
    c: u32,
    ell: u64,
    g: u64,
    logs: LogTable,
}

/// Smallest primitive root mod `p`, the default twist parameter.
pub fn default_twist(p: u32) -> Result<u32> {
    Ok(primitive_root(p as u64)? as u32)
}

impl TwistContext {
    /// Context with the smallest primitive roots for both `c` and `g`.
    pub fn new(p: u32, ell: u64) -> Result<Self> {
        check_odd_prime(p)?;
        if !is_split_prime(p, ell) {
            return Err(Error::NotSplit { p, ell });
        }
        let c = default_twist(p)?;
        let g = primitive_root(ell)?;
        Self::with_params(p, c, ell, g)
    }

    pub fn with_params(p: u32, c: u32, ell: u64, g: u64) -> Result<Self> {
        check_odd_prime(p)?;
        if !is_split_prime(p, ell) {
            return Err(Error::NotSplit { p, ell });
        }
        let c_max = (p - 2).max(2);
        if c < 2 || c > c_max || !is_primitive_root(c as u64, p as u64) {
            return Err(Error::NotPrimitiveRoot {
                g: c as u64,
                modulus: p as u64,
            });
        }
        let logs = LogTable::build(ell, g)?;
        Ok(Self { p, c, ell, g, logs })
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn c(&self) -> u32 {
        self.c
    }
    pub fn ell(&self) -> u64 {
        self.ell
    }
    pub fn g(&self) -> u64 {
        self.g
    }
    pub fn logs(&self) -> &LogTable {
        &self.logs
    }

    /// All `J_1, ..., J_(c-1)` in one pass over `F_ell`.
    pub fn jacobi_sums(&self) -> Vec<CycModP> {
        let p = self.p as usize;
        let k = self.c as usize - 1;
        let counts = exponent_counts(&self.logs, self.p, k);
        counts
            .chunks(p)
            .map(|row| {
                let neg: Vec<u64> = row
                    .iter()
                    .map(|&n| (p as u64 - n % p as u64) % p as u64)
                    .collect();
                CycModP::from_group_ring(self.p, &neg)
            })
            .collect()
    }

    /// `J_i = -sum_{x != 0,1} psi^i(x) psi(1 - x)` reduced mod `p`.
    pub fn jacobi_sum(&self, i: u32) -> Result<CycModP> {
        if i == 0 || i >= self.c {
            return Err(Error::InvalidParameter(format!(
                "Jacobi index {i} outside [1, {}]",
                self.c - 1
            )));
        }
        Ok(self.jacobi_sums().swap_remove(i as usize - 1))
    }

    /// `J(ell) = J_1 ... J_(c-1)`.
    pub fn twist_product(&self) -> CycModP {
        self.jacobi_sums()
            .iter()
            .fold(CycModP::one(self.p), |acc, j| &acc * j)
    }
}

pub(crate) fn check_odd_prime(p: u32) -> Result<()> {
    if p < 3 || !is_prime(p as u64) {
        return Err(Error::InvalidParameter(format!(
            "p = {p} must be an odd prime"
        )));
    }
    Ok(())
}

/// `counts[(i-1)*p + e]` = number of `x in [2, ell-1]` with
/// `i*log(x) + log(1-x) = e (mod p)`, for `i = 1..=k`.
pub(crate) fn exponent_counts(logs: &LogTable, p: u32, k: usize) -> Vec<u64> {
    let ell = logs.modulus() as usize;
    let table = logs.as_slice();
    let pu = p as usize;
    let mut counts = vec![0u64; k * pu];
    if k == 1 {
        let row = &mut counts[..];
        for x in 2..ell {
            let e = (table[x] as usize + table[ell + 1 - x] as usize) % pu;
            row[e] += 1;
        }
        return counts;
    }
    for x in 2..ell {
        let lx = table[x] as usize % pu;
        let l1 = table[ell + 1 - x] as usize % pu;
        let mut e = l1;
        for row in counts.chunks_mut(pu) {
            e += lx;
            if e >= pu {
                e -= pu;
            }
            row[e] += 1;
        }
    }
    counts
}

/// Subset of the even integers in `[2, p-3]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentSet {
    p: u32,
    members: BTreeSet<u32>,
}

impl ExponentSet {
    pub fn empty(p: u32) -> Self {
        Self {
            p,
            members: BTreeSet::new(),
        }
    }

    pub fn new(p: u32, members: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut set = Self::empty(p);
        for n in members {
            set.insert(n)?;
        }
        Ok(set)
    }

    /// Every even exponent `2, 4, ..., p-3`.
    pub fn full(p: u32) -> Self {
        Self {
            p,
            members: even_exponents(p).collect(),
        }
    }

    pub fn insert(&mut self, n: u32) -> Result<()> {
        check_exponent(self.p, n)?;
        self.members.insert(n);
        Ok(())
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn contains(&self, n: u32) -> bool {
        self.members.contains(&n)
    }
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
    pub fn len(&self) -> usize {
        self.members.len()
    }
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.members.iter().copied()
    }
    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self {
            p: self.p,
            members: self.members.intersection(&other.members).copied().collect(),
        }
    }
}

/// Comma-separated members, ascending (`10,34`).
impl fmt::Display for ExponentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|n| n.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// Even `n` in `[2, p-3]`.
pub fn even_exponents(p: u32) -> impl Iterator<Item = u32> {
    (1..=(p.saturating_sub(3)) / 2).map(|m| 2 * m)
}

pub(crate) fn check_exponent(p: u32, n: u32) -> Result<()> {
    if n % 2 != 0 || n < 2 || n + 3 > p {
        return Err(Error::BadExponent { p, n });
    }
    Ok(())
}

/// The list `J^0, J^1, ..., J^(p-1)` reused by every component.
#[derive(Debug, Clone)]
pub struct PowerList {
    powers: Vec<CycModP>,
}

impl PowerList {
    pub fn new(j: &CycModP) -> Self {
        let p = j.p();
        let mut powers = Vec::with_capacity(p as usize);
        powers.push(CycModP::one(p));
        for k in 1..p as usize {
            let next = &powers[k - 1] * j;
            powers.push(next);
        }
        Self { powers }
    }

    pub fn get(&self, e: u64) -> &CycModP {
        &self.powers[(e % self.powers.len() as u64) as usize]
    }
}

/// `Sn = prod_{a=1}^{(p-1)/2} s_a(J^(a^(n-1) mod p))`, a representative of the
/// `omega^(p-n)` component of `g_c(ell)^(-1/2)` up to `p`-th powers.
pub fn component(powers: &PowerList, n: u32) -> Result<CycModP> {
    let p = powers.get(0).p();
    check_exponent(p, n)?;
    let pp = p as u64;
    let mut sn = CycModP::one(p);
    for a in 1..=(pp - 1) / 2 {
        let an = pow_mod(a, n as u64 - 1, pp);
        sn = &sn * &powers.get(an).galois(a)?;
    }
    Ok(sn)
}

/// [`component`] for a single `(ctx, J, n)`.
pub fn component_of(j: &CycModP, n: u32) -> Result<CycModP> {
    component(&PowerList::new(j), n)
}

/// How [`exponent_set_with`] decides whether a component is trivial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ComponentMethod {
    /// Evaluate a linear form on the truncated logarithm of `J`; `O(p)` per exponent.
    #[default]
    Logarithmic,
    /// Build every `Sn` as a product of conjugated powers and compare with 1.
    Multiplicative,
}

/// `sum_{j=1}^{p-2} lambda_j j^(p-n)` where `lambda` = `log J` on the power basis.
///
/// The half-range product `Sn` is trivial exactly when this vanishes:
/// `log Sn` is a nonzero multiple of it times `sum_m m^(n-1) x^m`.
pub fn primarity_functional(log_j: &CycModP, n: u32) -> u32 {
    let p = log_j.p() as u64;
    let e = p - n as u64;
    let s = log_j
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &l)| l != 0)
        .fold(0u64, |acc, (j, &l)| {
            (acc + l as u64 * pow_mod(j as u64, e, p)) % p
        });
    s as u32
}

/// Exponent set from an already computed twist product.
pub fn exponent_set_of(j: &CycModP, method: ComponentMethod) -> Result<ExponentSet> {
    let p = j.p();
    let mut set = ExponentSet::empty(p);
    match method {
        ComponentMethod::Logarithmic => {
            let log_j = j.log_unit()?;
            for n in even_exponents(p) {
                if primarity_functional(&log_j, n) == 0 {
                    set.insert(n)?;
                }
            }
        }
        ComponentMethod::Multiplicative => {
            let powers = PowerList::new(j);
            for n in even_exponents(p) {
                if component(&powers, n)?.is_one() {
                    set.insert(n)?;
                }
            }
        }
    }
    Ok(set)
}

pub fn exponent_set(ctx: &TwistContext) -> Result<ExponentSet> {
    exponent_set_with(ctx, ComponentMethod::default())
}

pub fn exponent_set_with(ctx: &TwistContext, method: ComponentMethod) -> Result<ExponentSet> {
    exponent_set_of(&ctx.twist_product(), method)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_validation() {
        assert!(matches!(
            TwistContext::new(37, 150),
            Err(Error::NotSplit { .. })
        ));
        assert!(matches!(
            TwistContext::new(37, 223 + 74),
            Err(Error::NotSplit { .. })
        ));
        assert!(matches!(
            TwistContext::new(9, 19),
            Err(Error::InvalidParameter(_))
        ));
        // 4 is not a primitive root mod 19
        assert!(TwistContext::with_params(19, 4, 191, 19).is_err());
        let ctx = TwistContext::new(11, 23).unwrap();
        assert_eq!((ctx.c(), ctx.g()), (2, 5));
        assert!(ctx.jacobi_sum(0).is_err());
        assert!(ctx.jacobi_sum(2).is_err());
    }

    #[test]
    fn exact_jacobi_sum_for_p3_l7() {
        // Brute force over x in {2..6}: psi(x) = zeta^(log_3 x), with exact
        // coefficients in Z[zeta_3] on the basis 1, zeta.
        let ell = 7u64;
        let g = 3u64;
        let mut log = [0u64; 7];
        let mut y = 1;
        for k in 0..6 {
            log[y as usize] = k;
            y = y * g % ell;
        }
        let mut full = [0i64; 3];
        for x in 2..ell {
            let e = (log[x as usize] + log[(ell + 1 - x) as usize]) % 3;
            full[e as usize] -= 1;
        }
        // reduce zeta^2 = -1 - zeta, then mod 3
        let exact = [full[0] - full[2], full[1] - full[2]];
        let reduced: Vec<u32> = exact.iter().map(|&c| c.rem_euclid(3) as u32).collect();
        let ctx = TwistContext::with_params(3, 2, 7, 3).unwrap();
        assert_eq!(ctx.jacobi_sum(1).unwrap().coeffs(), &reduced[..]);
    }

    #[test]
    fn conjugate_norm_mod_p() {
        let ctx = TwistContext::new(5, 11).unwrap();
        let j = ctx.jacobi_sum(1).unwrap();
        // |J|^2 = 11 = 1 mod 5
        assert!((&j * &j.galois(4).unwrap()).is_one());
    }

    #[test]
    fn twist_product_with_c2_is_j1() {
        let ctx = TwistContext::new(37, 149).unwrap();
        assert_eq!(ctx.c(), 2);
        assert_eq!(ctx.twist_product(), ctx.jacobi_sum(1).unwrap());
        assert_eq!(ctx.twist_product().augmentation(), 1);
    }

    #[test]
    fn components_from_tables() {
        let ctx = TwistContext::new(11, 23).unwrap();
        assert!(component_of(&ctx.twist_product(), 2).unwrap().is_one());
        let ctx = TwistContext::new(13, 53).unwrap();
        let j = ctx.twist_product();
        for n in even_exponents(13) {
            assert!(!component_of(&j, n).unwrap().is_one());
        }
        let ctx = TwistContext::new(37, 1481).unwrap();
        assert!(component_of(&ctx.twist_product(), 30).unwrap().is_one());
        let ctx = TwistContext::new(37, 149).unwrap();
        assert!(!component_of(&ctx.twist_product(), 32).unwrap().is_one());
        assert!(matches!(
            component_of(&ctx.twist_product(), 33),
            Err(Error::BadExponent { .. })
        ));
        assert!(matches!(
            component_of(&ctx.twist_product(), 36),
            Err(Error::BadExponent { .. })
        ));
    }

    #[test]
    fn exponent_sets_from_tables() {
        let e = |p, ell| {
            exponent_set(&TwistContext::new(p, ell).unwrap())
                .unwrap()
                .to_vec()
        };
        assert_eq!(e(37, 149), Vec::<u32>::new());
        assert_eq!(e(37, 4219), vec![16, 18]);
        assert_eq!(e(53, 107), vec![10, 34]);
    }

    #[test]
    fn both_component_methods_agree() {
        for p in [5u32, 7, 11, 13, 29, 37, 53] {
            for ell in crate::modarith::split_primes(p, crate::modarith::Limit::Count(12)) {
                let ctx = TwistContext::new(p, ell).unwrap();
                let j = ctx.twist_product();
                assert_eq!(
                    exponent_set_of(&j, ComponentMethod::Logarithmic).unwrap(),
                    exponent_set_of(&j, ComponentMethod::Multiplicative).unwrap(),
                    "p={p} ell={ell}"
                );
            }
        }
    }

    #[test]
    fn exponent_set_display_and_validation() {
        let s = ExponentSet::new(53, [34, 10]).unwrap();
        assert_eq!(s.to_string(), "10,34");
        assert!(ExponentSet::new(53, [3]).is_err());
        assert!(ExponentSet::new(53, [52]).is_err());
        assert!(ExponentSet::full(3).is_empty());
        assert_eq!(ExponentSet::full(11).to_vec(), vec![2, 4, 6, 8]);
    }
}
