//! Criteria (a) and (b), the search for a split prime with empty exponent set,
//! and primarity density scans.

use std::fmt;
use std::ops::ControlFlow;
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::bernoulli::irregularity_report;
use crate::cache::{ScanCache, ScanRecord};
use crate::error::{Error, Result};
use crate::jacobi::{check_odd_prime, default_twist, exponent_set, ExponentSet, TwistContext};
use crate::modarith::{is_split_prime, primitive_root, split_primes, Limit};
use crate::par::Executor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::A => "a",
            Mode::B => "b",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionVerdict {
    pub p: u32,
    pub mode: Mode,
    /// Split primes used, in stream order.
    pub witnesses: Vec<u64>,
    /// `E_ell(p)` for each witness.
    pub exponent_sets: Vec<ExponentSet>,
    /// `E_0(p)`; only computed in mode (a).
    pub irregular: Option<ExponentSet>,
    /// `E_ell ∩ E_0` in mode (a), the running intersection in mode (b).
    pub intersection: ExponentSet,
    pub holds: bool,
    pub steps: usize,
    /// Mode (a) with `E_0(p)` empty: the criterion holds for any `ell`.
    pub regular_shortcut: bool,
}

impl CriterionVerdict {
    pub fn status(&self) -> &'static str {
        if self.holds {
            "established"
        } else {
            "not established"
        }
    }
}

impl fmt::Display for CriterionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self
            .witnesses
            .last()
            .map_or("none".to_string(), |l| l.to_string());
        write!(
            f,
            "p={} mode={} N={} el={} inter:{} {}",
            self.p,
            self.mode,
            self.steps,
            last,
            self.intersection,
            self.status()
        )?;
        if self.regular_shortcut {
            f.write_str(" (regular prime)")?;
        }
        Ok(())
    }
}

/// Primarity counts per exponent over a prefix of the split primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityTable {
    pub p: u32,
    /// `counts[n/2 - 1]` for `n = 2, 4, ..., p-3`.
    pub counts: Vec<u64>,
    /// Split primes examined (`Nel`).
    pub processed: u64,
    /// Total number of primarity events (`Npp`).
    pub hits: u64,
    pub last_l: Option<u64>,
}

impl DensityTable {
    pub fn new(p: u32) -> Self {
        Self {
            p,
            counts: vec![0; (p as usize).saturating_sub(3) / 2],
            processed: 0,
            hits: 0,
            last_l: None,
        }
    }

    pub fn count(&self, n: u32) -> u64 {
        self.counts[n as usize / 2 - 1]
    }

    pub fn absorb(&mut self, ell: u64, set: &ExponentSet) {
        self.absorb_each(ell, set, |_| {});
    }

    /// [`absorb`](Self::absorb), calling `on_event` after each single increment.
    pub fn absorb_each(&mut self, ell: u64, set: &ExponentSet, mut on_event: impl FnMut(&Self)) {
        self.processed += 1;
        self.last_l = Some(ell);
        for n in set.iter() {
            self.counts[n as usize / 2 - 1] += 1;
            self.hits += 1;
            on_event(self);
        }
    }

    /// `Nel Npp el [c_1,...]`
    pub fn row(&self) -> String {
        let counts: Vec<String> = self.counts.iter().map(|c| c.to_string()).collect();
        format!(
            "{} {} {} [{}]",
            self.processed,
            self.hits,
            self.last_l.unwrap_or(0),
            counts.join(",")
        )
    }
}

/// Exponent-set evaluation over split primes: a worker pool, an optional
/// persistent cache and the twist policy.
#[derive(Debug)]
pub struct Scanner {
    exec: Executor,
    cache: Option<Mutex<ScanCache>>,
    reuse: bool,
    twist: Option<u32>,
}

impl Default for Scanner {
    fn default() -> Self {
        Self::new(Executor::sequential())
    }
}

impl Scanner {
    pub fn new(exec: Executor) -> Self {
        Self {
            exec,
            cache: None,
            reuse: true,
            twist: None,
        }
    }

    pub fn with_cache(mut self, cache: ScanCache) -> Self {
        self.cache = Some(Mutex::new(cache));
        self
    }

    /// With `false` the cache is only appended to; every record is recomputed.
    pub fn reuse_cache(mut self, reuse: bool) -> Self {
        self.reuse = reuse;
        self
    }

    /// Fixes `c` instead of the smallest primitive root mod `p`.
    pub fn with_twist(mut self, c: u32) -> Self {
        self.twist = Some(c);
        self
    }

    pub fn executor(&self) -> &Executor {
        &self.exec
    }

    fn context(&self, p: u32, ell: u64) -> Result<TwistContext> {
        match self.twist {
            None => TwistContext::new(p, ell),
            Some(c) => {
                check_odd_prime(p)?;
                if !is_split_prime(p, ell) {
                    return Err(Error::NotSplit { p, ell });
                }
                TwistContext::with_params(p, c, ell, primitive_root(ell)?)
            }
        }
    }

    fn compute(&self, p: u32, ell: u64) -> Result<ScanRecord> {
        let start = Instant::now();
        let ctx = self.context(p, ell)?;
        let set = exponent_set(&ctx)?;
        let p2 = (p as u64).pow(2);
        Ok(ScanRecord {
            p,
            l: ell,
            c: ctx.c(),
            g: ctx.g(),
            expp: set.to_vec(),
            ms: start.elapsed().as_millis() as u64,
            l_mod_p2: Some(ell % p2),
        })
    }

    fn twist_for(&self, p: u32) -> Result<u32> {
        match self.twist {
            Some(c) => Ok(c),
            None => default_twist(p),
        }
    }

    /// Records for `ells` in input order, served from the cache when present.
    pub fn records(&self, p: u32, ells: &[u64]) -> Result<Vec<ScanRecord>> {
        let Some(cache) = &self.cache else {
            return self
                .exec
                .map(ells, |&ell| self.compute(p, ell))
                .into_iter()
                .collect();
        };
        let c = self.twist_for(p)?;
        let mut slots: Vec<Option<ScanRecord>> = Vec::with_capacity(ells.len());
        {
            let mut guard = cache.lock().expect("cache lock");
            for &ell in ells {
                let hit = match primitive_root(ell) {
                    _ if !self.reuse => None,
                    Ok(g) => guard.get(p, ell, c, g)?,
                    Err(_) => None,
                };
                slots.push(hit);
            }
        }
        let missing: Vec<u64> = ells
            .iter()
            .zip(&slots)
            .filter(|(_, s)| s.is_none())
            .map(|(&l, _)| l)
            .collect();
        let fresh = self
            .exec
            .map(&missing, |&ell| self.compute(p, ell))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        cache.lock().expect("cache lock").insert(&fresh)?;
        let mut fresh = fresh.into_iter();
        Ok(slots
            .into_iter()
            .map(|s| s.unwrap_or_else(|| fresh.next().expect("one fresh record per miss")))
            .collect())
    }

    pub fn exponent_set(&self, p: u32, ell: u64) -> Result<ExponentSet> {
        let rec = self.records(p, &[ell])?.pop().expect("one record");
        ExponentSet::new(p, rec.expp)
    }

    /// Streams records over `ells` in order, batch by batch, until `sink` breaks.
    pub fn scan<G>(&self, p: u32, ells: impl IntoIterator<Item = u64>, mut sink: G) -> Result<()>
    where
        G: FnMut(ScanRecord) -> Result<ControlFlow<()>>,
    {
        let mut iter = ells.into_iter();
        loop {
            let batch: Vec<u64> = iter.by_ref().take(self.exec.batch_size().max(8)).collect();
            if batch.is_empty() {
                return Ok(());
            }
            for rec in self.records(p, &batch)? {
                if sink(rec)?.is_break() {
                    return Ok(());
                }
            }
        }
    }

    /// `E_ell(p) ∩ E_0(p) = ∅`.
    pub fn criterion_a(&self, p: u32, ell: u64) -> Result<CriterionVerdict> {
        check_odd_prime(p)?;
        if !is_split_prime(p, ell) {
            return Err(Error::NotSplit { p, ell });
        }
        let irregular = irregularity_report(p)?.set;
        let set = self.exponent_set(p, ell)?;
        let intersection = set.intersection(&irregular);
        Ok(CriterionVerdict {
            p,
            mode: Mode::A,
            witnesses: vec![ell],
            exponent_sets: vec![set],
            regular_shortcut: irregular.is_empty(),
            irregular: Some(irregular),
            holds: intersection.is_empty(),
            intersection,
            steps: 1,
        })
    }

    /// Intersects `E_ell(p)` over `ells` in order until the intersection empties
    /// or `max_n` primes have been used.
    pub fn criterion_b(
        &self,
        p: u32,
        ells: impl IntoIterator<Item = u64>,
        max_n: usize,
    ) -> Result<CriterionVerdict> {
        check_odd_prime(p)?;
        if max_n == 0 {
            return Err(Error::InvalidParameter("max_N must be at least 1".into()));
        }
        let mut running = ExponentSet::full(p);
        let mut witnesses = Vec::new();
        let mut sets = Vec::new();
        self.scan(p, ells.into_iter().take(max_n), |rec| {
            let set = ExponentSet::new(p, rec.expp)?;
            running = running.intersection(&set);
            witnesses.push(rec.l);
            sets.push(set);
            Ok(if running.is_empty() {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            })
        })?;
        if witnesses.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "no split prime for p = {p} within the bound"
            )));
        }
        Ok(CriterionVerdict {
            p,
            mode: Mode::B,
            steps: witnesses.len(),
            witnesses,
            exponent_sets: sets,
            irregular: None,
            holds: running.is_empty(),
            intersection: running,
            regular_shortcut: false,
        })
    }

    /// First split prime with empty exponent set and its 1-based index.
    pub fn minimal_empty_l(&self, p: u32, limit: Limit) -> Result<Option<(u64, usize)>> {
        check_odd_prime(p)?;
        let mut found = None;
        let mut index = 0;
        self.scan(p, split_primes(p, limit), |rec| {
            index += 1;
            if rec.expp.is_empty() {
                found = Some((rec.l, index));
                return Ok(ControlFlow::Break(()));
            }
            Ok(ControlFlow::Continue(()))
        })?;
        Ok(found)
    }

    /// Counts primarity events over the first `count` split primes; `on_event`
    /// sees the table after every single event.
    pub fn density_scan_with<F>(
        &self,
        p: u32,
        count: usize,
        mut on_event: F,
    ) -> Result<DensityTable>
    where
        F: FnMut(&DensityTable),
    {
        check_odd_prime(p)?;
        if count == 0 {
            return Err(Error::InvalidParameter("count must be at least 1".into()));
        }
        let mut table = DensityTable::new(p);
        self.scan(p, split_primes(p, Limit::Count(count)), |rec| {
            let set = ExponentSet::new(p, rec.expp)?;
            table.absorb_each(rec.l, &set, &mut on_event);
            Ok(ControlFlow::Continue(()))
        })?;
        Ok(table)
    }

    pub fn density_scan(&self, p: u32, count: usize) -> Result<DensityTable> {
        self.density_scan_with(p, count, |_| {})
    }
}

pub fn criterion_a(p: u32, ell: u64) -> Result<CriterionVerdict> {
    Scanner::default().criterion_a(p, ell)
}

pub fn criterion_b(p: u32, limit: Limit, max_n: usize) -> Result<CriterionVerdict> {
    Scanner::default().criterion_b(p, split_primes(p, limit), max_n)
}

pub fn minimal_empty_l(p: u32, limit: Limit) -> Result<Option<(u64, usize)>> {
    Scanner::default().minimal_empty_l(p, limit)
}

pub fn density_scan(p: u32, count: usize) -> Result<DensityTable> {
    Scanner::default().density_scan(p, count)
}
