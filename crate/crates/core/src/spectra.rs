//! Experiments on the family `J(ell)`: ranks of coefficient matrices mod `p`,
//! trace polynomials of Gaussian periods and a heuristic probability.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cache::{append_jsonl, read_jsonl};
use crate::cycring::{write_pari_terms, CycModP};
use crate::error::{Error, Result};
use crate::jacobi::{check_odd_prime, TwistContext};
use crate::modarith::{
    is_split_prime, multiplicative_order, pow_mod, primitive_root, split_primes, valuation, Limit,
    LogTable,
};
use crate::par::Executor;

/// Incremental row echelon form over `F_p`.
#[derive(Debug, Clone)]
pub struct RankAccumulator {
    p: u32,
    /// Rows normalized to a leading 1 at `pivots[i]`.
    basis: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    history: Vec<(u64, usize)>,
}

impl RankAccumulator {
    pub fn new(p: u32) -> Self {
        Self {
            p,
            basis: Vec::new(),
            pivots: Vec::new(),
            history: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// `(ell, rank after inserting ell)` for every row folded in.
    pub fn history(&self) -> &[(u64, usize)] {
        &self.history
    }

    /// Reduces `row` against the basis and keeps the remainder if nonzero.
    pub fn insert(&mut self, ell: u64, row: &[u32]) -> bool {
        let grew = self.insert_row(row);
        self.history.push((ell, self.rank()));
        grew
    }

    fn insert_row(&mut self, row: &[u32]) -> bool {
        let p = self.p as u64;
        let mut r: Vec<u64> = row.iter().map(|&c| c as u64 % p).collect();
        for (b, &piv) in self.basis.iter().zip(&self.pivots) {
            let f = r[piv];
            if f == 0 {
                continue;
            }
            for (x, &y) in r.iter_mut().zip(b) {
                *x = (*x + (p - f) * y as u64) % p;
            }
        }
        let Some(piv) = r.iter().position(|&c| c != 0) else {
            return false;
        };
        let inv = pow_mod(r[piv], p - 2, p);
        self.basis
            .push(r.iter().map(|&c| (c * inv % p) as u32).collect());
        self.pivots.push(piv);
        true
    }

    /// `l,rank` lines with a header.
    pub fn history_csv(&self) -> String {
        let mut out = String::from("l,rank\n");
        for (ell, r) in &self.history {
            out.push_str(&format!("{ell},{r}\n"));
        }
        out
    }
}

/// Rank of a list of rows over `F_p`.
pub fn rank_of(p: u32, rows: &[Vec<u32>]) -> usize {
    let mut acc = RankAccumulator::new(p);
    for r in rows {
        acc.insert_row(r);
    }
    acc.rank()
}

/// The rank the family is observed to reach: `p - 4`, or 2 and 1 for `p = 5, 3`.
pub fn default_rank_target(p: u32) -> usize {
    match p {
        3 => 1,
        5 => 2,
        _ => p as usize - 4,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankScan {
    pub p: u32,
    pub target: usize,
    pub reached: bool,
    pub rank: usize,
    /// First `ell` at which the target rank is attained.
    pub ell_p: Option<u64>,
    pub scanned: usize,
    pub history: Vec<(u64, usize)>,
}

impl RankScan {
    /// `ell_p / (p^2 log p^2)`.
    pub fn growth_constant(&self) -> Option<f64> {
        let p2 = (self.p as f64).powi(2);
        self.ell_p.map(|ell| ell as f64 / (p2 * p2.ln()))
    }
}

/// `p=7 r=3 elp=113`
impl fmt::Display for RankScan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ell_p {
            Some(ell) => write!(f, "p={} r={} elp={}", self.p, self.rank, ell),
            None => write!(f, "p={} r={} elp=none", self.p, self.rank),
        }
    }
}

fn twist_row(p: u32, ell: u64) -> Result<Vec<u32>> {
    Ok(TwistContext::new(p, ell)?.twist_product().coeffs().to_vec())
}

/// Folds the coefficient rows of `J(ell)` in stream order until the rank reaches `target`.
pub fn rank_scan(exec: &Executor, p: u32, limit: Limit, target: usize) -> Result<RankScan> {
    check_odd_prime(p)?;
    let mut acc = RankAccumulator::new(p);
    let mut ell_p = None;
    exec.fold_ordered(
        split_primes(p, limit),
        |&ell| twist_row(p, ell),
        |ell, row| {
            acc.insert(ell, &row?);
            if p >= 7 && acc.rank() > p as usize - 4 {
                return Err(Error::Internal(format!(
                    "rank {} exceeds p - 4 at ell = {ell}",
                    acc.rank()
                )));
            }
            if acc.rank() >= target {
                ell_p = Some(ell);
                return Ok(ControlFlow::Break(()));
            }
            Ok(ControlFlow::Continue(()))
        },
    )?;
    Ok(RankScan {
        p,
        target,
        reached: ell_p.is_some(),
        rank: acc.rank(),
        ell_p,
        scanned: acc.history().len(),
        history: acc.history().to_vec(),
    })
}

/// `sum_k a_k = 1` and `sum_k k^d a_k = 0 (mod p)` for `d = 1, 2, 4`.
/// Meaningful for `p >= 7`; at `p = 5` the `d = 4` moment is `1 - a_0`.
pub fn derivation_check(j: &CycModP) -> bool {
    let p = j.p() as u64;
    let a = j.coeffs();
    let moment = |d: u64| {
        a.iter().enumerate().fold(0u64, |s, (k, &c)| {
            (s + c as u64 * pow_mod(k as u64, d, p)) % p
        })
    };
    j.augmentation() == 1 && [1, 2, 4].iter().all(|&d| moment(d) == 0)
}

/// Rank over `F_p` of the `p - 1` conjugates of `J(ell)`.
pub fn conjugate_rank(p: u32, ell: u64) -> Result<usize> {
    let j = TwistContext::new(p, ell)?.twist_product();
    let rows = (1..p as u64)
        .map(|a| j.galois(a).map(|c| c.coeffs().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Ok(rank_of(p, &rows))
}

/// `R_ell`: the period polynomial `prod_b (x - eta_b)` reduced mod `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TracePolynomial {
    pub p: u32,
    #[serde(rename = "l")]
    pub ell: u64,
    /// Residue degree of `p` in the degree-`p` subfield of `Q(mu_ell)`.
    pub f: u32,
    /// Coefficients from `x^0` to `x^p`.
    #[serde(rename = "R")]
    pub coeffs: Vec<u32>,
}

impl TracePolynomial {
    /// PARI rendering, highest degree first.
    pub fn poly_string(&self) -> String {
        let terms: Vec<(usize, u64)> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| (k, c as u64))
            .collect();
        let mut s = String::new();
        write_pari_terms(&mut s, &terms).expect("writing to a String");
        s
    }
}

/// `el=29 f=7 R=x^7 + x^6 + 2*x^5 + 5*x + 1`
impl fmt::Display for TracePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "el={} f={} R={}", self.ell, self.f, self.poly_string())
    }
}

/// `f = p` when `v_p(ord_ell(p)) = v_p(ell - 1)`, else `f = 1`.
pub fn residue_degree(p: u32, ell: u64) -> u32 {
    let ord = multiplicative_order(p as u64, ell);
    if valuation(ord, p as u64) == valuation(ell - 1, p as u64) {
        p
    } else {
        1
    }
}

fn check_split(p: u32, ell: u64) -> Result<()> {
    check_odd_prime(p)?;
    if !is_split_prime(p, ell) {
        return Err(Error::NotSplit { p, ell });
    }
    Ok(())
}

/// Elements of `Z[eta_0, ..., eta_(p-1)] / p` in the period basis. The integer
/// `c` is `-c (eta_0 + ... + eta_(p-1))`.
struct PeriodRing {
    p: usize,
    /// `cyc[d][k] = #{t in C_d : 1 + t in C_k}` for the cosets `C_d = g^d <g^p>`.
    cyc: Vec<Vec<u64>>,
    /// Coset index of `-1`.
    minus_one: usize,
    /// Period length `(ell - 1) / p` reduced mod `p`.
    m: u64,
}

impl PeriodRing {
    fn new(p: u32, ell: u64) -> Result<Self> {
        let g = primitive_root(ell)?;
        let logs = LogTable::build(ell, g)?;
        let table = logs.as_slice();
        let pu = p as usize;
        let mut cyc = vec![vec![0u64; pu]; pu];
        for t in 1..ell as usize - 1 {
            let d = table[t] as usize % pu;
            let k = table[t + 1] as usize % pu;
            cyc[d][k] += 1;
        }
        Ok(Self {
            p: pu,
            cyc,
            minus_one: ((ell - 1) / 2 % p as u64) as usize,
            m: (ell - 1) / p as u64 % p as u64,
        })
    }

    fn constant(&self, c: u64) -> Vec<u64> {
        let p = self.p as u64;
        vec![(p - c % p) % p; self.p]
    }

    /// `u * eta_b`, using `eta_a eta_b = sum_k cyc[b-a][k] eta_(a+k) + m [-1 in C_(b-a)]`.
    fn mul_period(&self, u: &[u64], b: usize) -> Vec<u64> {
        let p = self.p;
        let pp = p as u64;
        let mut out = vec![0u64; p];
        let mut scalar = 0u64;
        for (a, &ua) in u.iter().enumerate() {
            if ua == 0 {
                continue;
            }
            let d = (b + p - a) % p;
            for (k, &n) in self.cyc[d].iter().enumerate() {
                if n != 0 {
                    let slot = &mut out[(a + k) % p];
                    *slot = (*slot + ua * n) % pp;
                }
            }
            if d == self.minus_one {
                scalar = (scalar + ua * self.m) % pp;
            }
        }
        for x in &mut out {
            *x = (*x + pp - scalar) % pp;
        }
        out
    }

    fn as_constant(&self, u: &[u64]) -> Option<u32> {
        let p = self.p as u64;
        u.iter()
            .all(|&x| x == u[0])
            .then(|| ((p - u[0]) % p) as u32)
    }
}

/// [`TracePolynomial`] via multiplication of Gaussian periods in the period basis.
pub fn trace_polynomial(p: u32, ell: u64) -> Result<TracePolynomial> {
    check_split(p, ell)?;
    let ring = PeriodRing::new(p, ell)?;
    let pu = p as usize;
    let pp = p as u64;
    // q[i] is the coefficient of x^i
    let mut q: Vec<Vec<u64>> = vec![ring.constant(1)];
    for b in 0..pu {
        let mut next = vec![vec![0u64; pu]; q.len() + 1];
        for (i, qi) in q.iter().enumerate() {
            for (x, &y) in next[i + 1].iter_mut().zip(qi) {
                *x = (*x + y) % pp;
            }
            let prod = ring.mul_period(qi, b);
            for (x, &y) in next[i].iter_mut().zip(&prod) {
                *x = (*x + pp - y) % pp;
            }
        }
        q = next;
    }
    let coeffs = q
        .iter()
        .map(|c| ring.as_constant(c))
        .collect::<Option<Vec<u32>>>()
        .ok_or_else(|| {
            Error::Internal(format!(
                "period polynomial for ell = {ell} is not over F_{p}"
            ))
        })?;
    Ok(TracePolynomial {
        p,
        ell,
        f: residue_degree(p, ell),
        coeffs,
    })
}

/// [`TracePolynomial`] computed in `F_p[y]/(y^ell - 1)` and reduced mod `Phi_ell`.
///
/// Quadratic in `ell`; kept as an independent check of [`trace_polynomial`].
pub fn trace_polynomial_dense(p: u32, ell: u64) -> Result<TracePolynomial> {
    check_split(p, ell)?;
    let g = primitive_root(ell)?;
    let pu = p as usize;
    let pp = p as u64;
    let n = ell as usize;
    let m = (ell - 1) / pp;
    let h = pow_mod(g, pp, ell);
    let periods: Vec<Vec<usize>> = (0..pp)
        .map(|b| {
            let mut e = pow_mod(g, b, ell);
            (0..m)
                .map(|_| {
                    let cur = e as usize;
                    e = e * h % ell;
                    cur
                })
                .collect()
        })
        .collect();
    let mut one = vec![0u64; n];
    one[0] = 1;
    let mut q: Vec<Vec<u64>> = vec![one];
    for eta in &periods {
        let mut next = vec![vec![0u64; n]; q.len() + 1];
        for (i, qi) in q.iter().enumerate() {
            for (x, &y) in next[i + 1].iter_mut().zip(qi) {
                *x = (*x + y) % pp;
            }
            for (k, &c) in qi.iter().enumerate().filter(|(_, &c)| c != 0) {
                for &e in eta {
                    let slot = &mut next[i][(k + e) % n];
                    *slot = (*slot + (pp - c)) % pp;
                }
            }
        }
        q = next;
    }
    let mut coeffs = Vec::with_capacity(pu + 1);
    for v in &q {
        let top = v[n - 1];
        if v[1..n - 1].iter().any(|&c| c != top) {
            return Err(Error::Internal(format!(
                "dense period polynomial for ell = {ell} is not over F_{p}"
            )));
        }
        coeffs.push(((v[0] + pp - top) % pp) as u32);
    }
    Ok(TracePolynomial {
        p,
        ell,
        f: residue_degree(p, ell),
        coeffs,
    })
}

/// Persisted trace polynomials, one `traces-p<p>.jsonl` per `p`.
#[derive(Debug)]
pub struct TraceCatalog {
    p: u32,
    path: Option<PathBuf>,
    records: BTreeMap<u64, TracePolynomial>,
    /// `ell` already on disk, so appends never duplicate them.
    persisted: HashSet<u64>,
}

impl TraceCatalog {
    pub fn in_memory(p: u32) -> Self {
        Self {
            p,
            path: None,
            records: BTreeMap::new(),
            persisted: HashSet::new(),
        }
    }

    /// Opens the catalog in `dir`; with `reuse = false` stored polynomials are
    /// recomputed rather than served, but never written twice.
    pub fn open(dir: &Path, p: u32, reuse: bool) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(format!("traces-p{p}.jsonl"));
        let stored: Vec<TracePolynomial> = read_jsonl(&path)?;
        let stored: Vec<TracePolynomial> = stored.into_iter().filter(|r| r.p == p).collect();
        let persisted = stored.iter().map(|r| r.ell).collect();
        let records = if reuse {
            stored.into_iter().map(|r| (r.ell, r)).collect()
        } else {
            BTreeMap::new()
        };
        Ok(Self {
            p,
            path: Some(path),
            records,
            persisted,
        })
    }

    pub fn get(&self, ell: u64) -> Option<&TracePolynomial> {
        self.records.get(&ell)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    fn extend(&mut self, fresh: Vec<TracePolynomial>) -> Result<()> {
        if let Some(path) = &self.path {
            let new: Vec<&TracePolynomial> = fresh
                .iter()
                .filter(|r| !self.persisted.contains(&r.ell))
                .collect();
            append_jsonl(path, &new)?;
            self.persisted.extend(new.iter().map(|r| r.ell));
        }
        for r in fresh {
            self.records.insert(r.ell, r);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinctTraces {
    pub p: u32,
    pub count: usize,
    pub scanned: usize,
    /// First `ell` giving each new polynomial, in order of discovery.
    pub first_seen: Vec<TracePolynomial>,
}

/// Number of distinct `R_ell` over the split primes selected by `limit`.
pub fn distinct_trace_count(
    exec: &Executor,
    p: u32,
    limit: Limit,
    catalog: &mut TraceCatalog,
) -> Result<DistinctTraces> {
    check_odd_prime(p)?;
    let ells: Vec<u64> = split_primes(p, limit).collect();
    let all = trace_polynomials(exec, p, &ells, catalog)?;
    let mut seen = HashSet::new();
    let first_seen: Vec<TracePolynomial> = all
        .into_iter()
        .filter(|r| seen.insert(r.coeffs.clone()))
        .collect();
    Ok(DistinctTraces {
        p,
        count: first_seen.len(),
        scanned: ells.len(),
        first_seen,
    })
}

/// `R_ell` for each of `ells`, in order, filling `catalog` with what is missing.
pub fn trace_polynomials(
    exec: &Executor,
    p: u32,
    ells: &[u64],
    catalog: &mut TraceCatalog,
) -> Result<Vec<TracePolynomial>> {
    if catalog.p != p {
        return Err(Error::InvalidParameter(format!(
            "catalog is for p = {}",
            catalog.p
        )));
    }
    let missing: Vec<u64> = ells
        .iter()
        .copied()
        .filter(|&l| catalog.get(l).is_none())
        .collect();
    for chunk in missing.chunks(256 * exec.batch_size()) {
        let fresh = exec
            .map(chunk, |&ell| trace_polynomial(p, ell))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        catalog.extend(fresh)?;
    }
    Ok(ells
        .iter()
        .map(|l| catalog.get(*l).expect("filled above").clone())
        .collect())
}

/// Probability that a random set of exponents meets a random irregular set,
/// each of the `N = (p-3)/2` exponents present independently with chance `1/p`.
pub fn heuristic_probability(p: u32) -> Result<f64> {
    check_odd_prime(p)?;
    if p < 5 {
        return Err(Error::InvalidParameter("the heuristic needs p >= 5".into()));
    }
    let n = (p as usize - 3) / 2;
    let mut lf = vec![0f64; n + 1];
    for i in 1..=n {
        lf[i] = lf[i - 1] + (i as f64).ln();
    }
    let ln_binom = |a: usize, b: usize| lf[a] - lf[b] - lf[a - b];
    let q = 1.0 / p as f64;
    let (lq, lnq) = (q.ln(), (-q).ln_1p());
    let mut total = 0f64;
    for j in 0..=n {
        for k in 0..=n {
            let bracket = if j + k > n {
                1.0
            } else {
                -(lf[n - k] + lf[n - j] - lf[n] - lf[n - k - j]).exp_m1()
            };
            if bracket == 0.0 {
                continue;
            }
            let ln_w = ln_binom(n, j)
                + ln_binom(n, k)
                + (2 * n - j - k) as f64 * lnq
                + (j + k) as f64 * lq;
            total += ln_w.exp() * bracket;
        }
    }
    Ok(total)
}
