//! Generalized Bernoulli numbers `B_{1,omega^(n-1)}` modulo `p`, the set of
//! exponents of irregularity and the twisted factor `b_c`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jacobi::{check_exponent, check_odd_prime, even_exponents, ExponentSet};
use crate::modarith::{is_primitive_root, pow_mod};

/// Teichmuller lift of `a` modulo `p^2`: the `(p-1)`-th root of unity congruent to `a`.
pub fn teichmuller(a: u64, p: u32) -> Result<u64> {
    let p = p as u64;
    if a % p == 0 {
        return Err(Error::InvalidParameter(format!("{a} is divisible by {p}")));
    }
    Ok(pow_mod(a, p, p * p))
}

/// `B_{1,omega^m} = (1/p) sum_{a=1}^{p-1} omega^m(a) a`, reduced mod `p`.
///
/// For `m = n - 1` with `n` even in `[2, p-3]` this is `B_n / n mod p`.
pub fn b1_omega(p: u32, m: u64) -> Result<u32> {
    check_odd_prime(p)?;
    let pp = p as u64;
    let p2 = pp * pp;
    let m = m % (pp - 1);
    let mut sum = 0u64;
    for a in 1..pp {
        let w = pow_mod(teichmuller(a, p)?, m, p2);
        sum = (sum + w * a) % p2;
    }
    if sum % pp != 0 {
        return Err(Error::Internal(format!(
            "sum for B_1 with p = {p}, m = {m} is not divisible by p"
        )));
    }
    Ok((sum / pp) as u32)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrregularityReport {
    pub p: u32,
    /// Even `n` with `B_n = 0 (mod p)`.
    pub set: ExponentSet,
    /// `i(p)`, the size of `set`.
    pub index: usize,
    /// `n -> B_{1,omega^(n-1)} mod p`.
    pub residues: BTreeMap<u32, u32>,
}

impl IrregularityReport {
    pub fn is_regular(&self) -> bool {
        self.index == 0
    }

    /// `{"p": .., "irregular_exponents": [..], "index": ..}`
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.p,
            "irregular_exponents": self.set.to_vec(),
            "index": self.index,
        })
    }
}

pub fn irregularity_report(p: u32) -> Result<IrregularityReport> {
    check_odd_prime(p)?;
    let mut set = ExponentSet::empty(p);
    let mut residues = BTreeMap::new();
    for n in even_exponents(p) {
        let r = b1_omega(p, n as u64 - 1)?;
        if r == 0 {
            set.insert(n)?;
        }
        residues.insert(n, r);
    }
    Ok(IrregularityReport {
        p,
        index: set.len(),
        set,
        residues,
    })
}

/// `b_c(chi*) = (c - omega^(p-n)(c)) B_{1,omega^(n-1)} mod p`.
pub fn b_c_factor(p: u32, c: u32, n: u32) -> Result<u32> {
    check_odd_prime(p)?;
    check_exponent(p, n)?;
    if !is_primitive_root(c as u64, p as u64) {
        return Err(Error::NotPrimitiveRoot {
            g: c as u64,
            modulus: p as u64,
        });
    }
    let pp = p as u64;
    let twist = (c as u64 % pp + pp - pow_mod(c as u64, pp - n as u64, pp)) % pp;
    let b = b1_omega(p, n as u64 - 1)? as u64;
    Ok((twist * b % pp) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modarith::is_prime;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Signed, Zero};

    /// Exact `B_0..=B_max` from `sum_{k=0}^{m} C(m+1, k) B_k = 0`.
    fn rational_bernoulli(max: usize) -> Vec<BigRational> {
        let mut binom = vec![vec![BigInt::one()]];
        for m in 1..=max + 1 {
            let prev = &binom[m - 1];
            let mut row = vec![BigInt::one(); m + 1];
            for k in 1..m {
                row[k] = &prev[k - 1] + &prev[k];
            }
            binom.push(row);
        }
        let mut b: Vec<BigRational> = vec![BigRational::one()];
        for m in 1..=max {
            let mut s = BigRational::zero();
            for (k, bk) in b.iter().enumerate() {
                s += BigRational::from_integer(binom[m + 1][k].clone()) * bk;
            }
            b.push(-s / BigRational::from_integer(BigInt::from(m as u64 + 1)));
        }
        b
    }

    fn mod_p(x: &BigRational, p: u64) -> u64 {
        let pb = BigInt::from(p);
        let num = ((x.numer() % &pb) + &pb) % &pb;
        let den = ((x.denom() % &pb) + &pb) % &pb;
        let den: u64 = den.try_into().unwrap();
        assert!(den != 0);
        let num: u64 = num.try_into().unwrap();
        num * pow_mod(den, p - 2, p) % p
    }

    #[test]
    fn teichmuller_examples() {
        assert_eq!(teichmuller(1, 37).unwrap(), 1);
        assert_eq!(teichmuller(36, 37).unwrap(), 37 * 37 - 1);
        // exhaustive: the 4th roots of unity mod 25 congruent to 2 mod 5
        let lifts: Vec<u64> = (0..25)
            .filter(|&y| y % 5 == 2 && pow_mod(y, 4, 25) == 1)
            .collect();
        assert_eq!(lifts, vec![7]);
        assert_eq!(teichmuller(2, 5).unwrap(), 7);
        assert!(teichmuller(74, 37).is_err());
    }

    #[test]
    fn teichmuller_is_multiplicative() {
        for p in [5u32, 7, 37, 101] {
            let p2 = (p as u64).pow(2);
            for a in 1..p as u64 {
                for b in 1..p as u64 {
                    let lhs = teichmuller(a, p).unwrap() * teichmuller(b, p).unwrap() % p2;
                    assert_eq!(lhs, teichmuller(a * b % p as u64, p).unwrap());
                }
            }
        }
    }

    #[test]
    fn known_irregular_pairs() {
        assert_eq!(b1_omega(37, 31).unwrap(), 0);
        assert_eq!(b1_omega(157, 61).unwrap(), 0);
        assert_eq!(b1_omega(157, 109).unwrap(), 0);
        let r = irregularity_report(37).unwrap();
        assert_eq!((r.set.to_vec(), r.index), (vec![32], 1));
        let r = irregularity_report(157).unwrap();
        assert_eq!((r.set.to_vec(), r.index), (vec![62, 110], 2));
        let r = irregularity_report(13).unwrap();
        assert!(r.is_regular());
        assert!(r.residues.values().all(|&v| v != 0));
        assert_eq!(
            r.to_json(),
            serde_json::json!({"p": 13, "irregular_exponents": [], "index": 0})
        );
    }

    #[test]
    fn matches_rational_bernoulli_oracle() {
        let b = rational_bernoulli(200);
        for p in (5..200u64).filter(|&q| is_prime(q)) {
            let report = irregularity_report(p as u32).unwrap();
            for n in even_exponents(p as u32) {
                let oracle = mod_p(
                    &(&b[n as usize] / BigRational::from_integer(BigInt::from(n))),
                    p,
                );
                assert_eq!(report.residues[&n] as u64, oracle, "p={p} n={n}");
                let divisible = (b[n as usize].numer().abs() % BigInt::from(p)).is_zero();
                assert_eq!(report.set.contains(n), divisible, "p={p} n={n}");
            }
        }
    }

    #[test]
    fn twisted_factor() {
        assert_eq!(b_c_factor(37, 2, 32).unwrap(), 0);
        // (2 - 2^9) * B_2/2 = -510 * 1 = 7 mod 11: a unit
        assert_eq!(b_c_factor(11, 2, 2).unwrap(), 7);
        for n in even_exponents(13) {
            assert_ne!(b_c_factor(13, 2, n).unwrap(), 0);
        }
        assert!(b_c_factor(11, 3, 2).is_err());
    }

    #[test]
    fn twist_multiplier_is_a_unit() {
        for p in (5..300u64).filter(|&q| is_prime(q)) {
            let p = p as u32;
            for c in (2..p).filter(|&c| is_primitive_root(c as u64, p as u64)) {
                for n in even_exponents(p) {
                    let pp = p as u64;
                    assert_ne!(
                        (c as u64 + pp - pow_mod(c as u64, pp - n as u64, pp)) % pp,
                        0
                    );
                }
            }
        }
    }
}
