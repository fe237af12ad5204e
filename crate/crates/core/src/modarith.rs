//! Primality, primitive roots, discrete-log tables and the split primes
//! `ell = 1 + 2ip`.

use crate::error::{Error, Result};

/// Largest modulus for which [`LogTable`] will allocate a full table.
pub const LOG_TABLE_CAP: u64 = 1 << 26;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo a prime `m` (Fermat).
pub fn inv_mod_prime(a: u64, m: u64) -> u64 {
    pow_mod(a, m - 2, m)
}

/// Deterministic Miller-Rabin, correct for every `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &q in &SMALL {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors of `n` by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2u64;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Exponent of the prime `q` in `n` (`n > 0`).
pub fn valuation(mut n: u64, q: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n % q == 0 {
        n /= q;
        v += 1;
    }
    v
}

/// Multiplicative order of `a` modulo the prime `q`.
pub fn multiplicative_order(a: u64, q: u64) -> u64 {
    let mut order = q - 1;
    for f in prime_factors(q - 1) {
        while order % f == 0 && pow_mod(a, order / f, q) == 1 {
            order /= f;
        }
    }
    order
}

fn is_generator(g: u64, q: u64, factors: &[u64]) -> bool {
    g % q != 0 && factors.iter().all(|&f| pow_mod(g, (q - 1) / f, q) != 1)
}

/// Smallest positive primitive root modulo the prime `q`.
pub fn primitive_root(q: u64) -> Result<u64> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if q == 2 {
        return Ok(1);
    }
    let factors = prime_factors(q - 1);
    (2..q)
        .find(|&g| is_generator(g, q, &factors))
        .ok_or_else(|| Error::Internal(format!("no primitive root found modulo {q}")))
}

/// `true` when `g` generates `(Z/qZ)^*` for the prime `q`.
pub fn is_primitive_root(g: u64, q: u64) -> bool {
    if q == 2 {
        return g % 2 == 1;
    }
    is_generator(g, q, &prime_factors(q - 1))
}

/// Discrete logarithms in `F_ell^*` to a fixed primitive root.
#[derive(Debug, Clone)]
pub struct LogTable {
    modulus: u64,
    base: u64,
    // indexed by residue; slot 0 is unused
    table: Vec<u32>,
}

impl LogTable {
    /// One pass of powering `g^0, g^1, ...`; rejects `g` as soon as a residue repeats.
    pub fn build(ell: u64, g: u64) -> Result<Self> {
        if ell > LOG_TABLE_CAP {
            return Err(Error::TableTooLarge(ell));
        }
        if !is_prime(ell) {
            return Err(Error::NotPrime(ell));
        }
        let g = g % ell;
        let not_root = || Error::NotPrimitiveRoot { g, modulus: ell };
        if g == 0 {
            return Err(not_root());
        }
        let mut table = vec![u32::MAX; ell as usize];
        let mut x = 1u64;
        for k in 0..(ell - 1) as u32 {
            let slot = &mut table[x as usize];
            if *slot != u32::MAX {
                return Err(not_root());
            }
            *slot = k;
            x = x * g % ell;
        }
        Ok(Self {
            modulus: ell,
            base: g,
            table,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    /// `k` in `[0, ell-2]` with `g^k = x`.
    ///
    /// Panics if `x` is divisible by the modulus.
    #[inline]
    pub fn log(&self, x: u64) -> u32 {
        let x = x % self.modulus;
        assert!(x != 0, "log of zero");
        self.table[x as usize]
    }

    /// Raw table, indexed by residue (slot 0 holds `u32::MAX`).
    pub fn as_slice(&self) -> &[u32] {
        &self.table
    }
}

/// How far a [`SplitPrimeStream`] runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Limit {
    /// Emit at most this many primes.
    Count(usize),
    /// Emit primes `<= bound`.
    Bound(u64),
    Unbounded,
}

/// Ascending primes `ell = 1 + 2ip`, `i >= 1`.
#[derive(Debug, Clone)]
pub struct SplitPrimeStream {
    p: u32,
    cursor: u64,
    limit: Limit,
    emitted: usize,
}

impl SplitPrimeStream {
    pub fn new(p: u32, limit: Limit) -> Self {
        Self {
            p,
            cursor: 0,
            limit,
            emitted: 0,
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Index `i` of the last candidate `1 + 2ip` examined.
    pub fn cursor(&self) -> u64 {
        self.cursor
    }
}

impl Iterator for SplitPrimeStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if let Limit::Count(n) = self.limit {
            if self.emitted >= n {
                return None;
            }
        }
        let step = 2 * self.p as u64;
        loop {
            self.cursor += 1;
            let ell = 1 + self.cursor * step;
            if let Limit::Bound(b) = self.limit {
                if ell > b {
                    self.cursor -= 1;
                    return None;
                }
            }
            if is_prime(ell) {
                self.emitted += 1;
                return Some(ell);
            }
        }
    }
}

pub fn split_primes(p: u32, limit: Limit) -> SplitPrimeStream {
    SplitPrimeStream::new(p, limit)
}

/// `true` when `ell` is prime and `ell = 1 (mod p)` (and `ell != p`).
pub fn is_split_prime(p: u32, ell: u64) -> bool {
    ell % p as u64 == 1 && is_prime(ell)
}
