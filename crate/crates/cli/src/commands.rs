use std::io::Write;

use serde_json::json;

use vandiver_core::bernoulli::irregularity_report;
use vandiver_core::cache::{records_to_csv, ScanCache, ScanRecord};
use vandiver_core::error::{Error, Result};
use vandiver_core::jacobi::TwistContext;
use vandiver_core::modarith::{is_prime, is_split_prime, primitive_root, split_primes, Limit};
use vandiver_core::par::Executor;
use vandiver_core::residue_symbols::{classify, ExactOptions, SymbolReport};
use vandiver_core::spectra::{
    conjugate_rank, default_rank_target, distinct_trace_count, rank_scan, trace_polynomials,
    TraceCatalog, TracePolynomial,
};
use vandiver_core::vandiver::{CriterionVerdict, Scanner};

use crate::{Cli, Command, CriterionMode, Format, RunArgs, Select, EXIT_UNDETERMINED};

type Out<'a> = &'a mut dyn Write;

pub fn run(cli: &Cli, out: Out) -> Result<u8> {
    let run = &cli.run;
    match &cli.command {
        Command::Expp(sel) => expp(run, sel, out),
        Command::Vandiver { select, mode } => vandiver(run, select, *mode, out),
        Command::Scan(sel) => scan(run, sel, out),
        Command::Rank { select, conjugates } => rank(run, select, *conjugates, out),
        Command::Trace { select, distinct } => trace(run, select, *distinct, out),
        Command::Symbol { select, n } => symbol(run, select, *n, out),
        Command::Bernoulli(sel) => bernoulli(run, sel, out),
    }
}

fn executor(run: &RunArgs) -> Result<Executor> {
    match run.jobs {
        Some(j) => Executor::new(j),
        None => Ok(Executor::all_cores()),
    }
}

fn scanner(run: &RunArgs, sel: &Select) -> Result<Scanner> {
    let mut s = Scanner::new(executor(run)?);
    if let Some(dir) = &run.cache_dir {
        s = s.with_cache(ScanCache::open(dir)?).reuse_cache(run.resume);
    }
    if let Some(c) = sel.c {
        s = s.with_twist(c);
    }
    Ok(s)
}

/// Odd primes in `[p, p_max]`.
fn primes(sel: &Select) -> Result<Vec<u32>> {
    let last = sel.p_max.unwrap_or(sel.p);
    if sel.p < 3 || !is_prime(sel.p as u64) {
        return Err(Error::InvalidParameter(format!(
            "p = {} must be an odd prime",
            sel.p
        )));
    }
    if last < sel.p {
        return Err(Error::InvalidParameter(format!(
            "--p-max {last} is below --p {}",
            sel.p
        )));
    }
    Ok((sel.p..=last).filter(|&q| is_prime(q as u64)).collect())
}

/// Stream bound from `--l-max` / `--count`, or `default` when neither is given.
fn limit(sel: &Select, default: Limit) -> Limit {
    match (sel.l_max, sel.count) {
        (Some(b), _) => Limit::Bound(b),
        (None, Some(n)) => Limit::Count(n),
        (None, None) => default,
    }
}

/// `--l`, or the split primes selected by `--l-max` and `--count`.
fn ells(sel: &Select, p: u32, default: Limit) -> Result<Vec<u64>> {
    if let Some(l) = sel.l {
        if !is_split_prime(p, l) {
            return Err(Error::NotSplit { p, ell: l });
        }
        return Ok(vec![l]);
    }
    let mut v: Vec<u64> = split_primes(p, limit(sel, default)).collect();
    if let (Some(_), Some(n)) = (sel.l_max, sel.count) {
        v.truncate(n);
    }
    Ok(v)
}

fn json_line(out: Out, value: &impl serde::Serialize) -> Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn expp_line(r: &ScanRecord) -> String {
    let mut s = format!("p={} el={} c={} g={}", r.p, r.l, r.c, r.g);
    if !r.expp.is_empty() {
        let e: Vec<String> = r.expp.iter().map(|n| n.to_string()).collect();
        s.push_str(&format!(" expp:{}", e.join(",")));
    }
    s
}

fn expp(run: &RunArgs, sel: &Select, out: Out) -> Result<u8> {
    let ps = primes(sel)?;
    let scanner = scanner(run, sel)?;
    let per_p = scanner.executor().map(&ps, |&p| {
        ells(sel, p, Limit::Count(1)).and_then(|ls| scanner.records(p, &ls))
    });
    let mut all = Vec::new();
    for recs in per_p {
        all.extend(recs?);
    }
    match run.format {
        Format::Text => {
            for r in &all {
                writeln!(out, "{}", expp_line(r))?;
            }
        }
        Format::Json => {
            for r in &all {
                json_line(out, r)?;
            }
        }
        Format::Csv => write!(out, "{}", records_to_csv(&all))?,
    }
    Ok(0)
}

fn verdict_csv_row(v: &CriterionVerdict) -> String {
    let inter: Vec<String> = v.intersection.iter().map(|n| n.to_string()).collect();
    format!(
        "{},{},{},{},{},{}",
        v.p,
        v.mode,
        v.steps,
        v.witnesses.last().copied().unwrap_or(0),
        inter.join(";"),
        v.holds
    )
}

fn vandiver(run: &RunArgs, sel: &Select, mode: CriterionMode, out: Out) -> Result<u8> {
    let scanner = scanner(run, sel)?;
    let mut all_hold = true;
    if run.format == Format::Csv {
        match mode {
            CriterionMode::Min => writeln!(out, "p,l,N")?,
            _ => writeln!(out, "p,mode,N,l,intersection,holds")?,
        }
    }
    for p in primes(sel)? {
        if mode == CriterionMode::Min {
            let found = scanner.minimal_empty_l(p, limit(sel, Limit::Count(1000)))?;
            all_hold &= found.is_some();
            match (run.format, found) {
                (Format::Text, Some((l, n))) => writeln!(out, "{p} {l} {n}")?,
                (Format::Text, None) => writeln!(out, "{p} none")?,
                (Format::Json, f) => json_line(
                    out,
                    &json!({"p": p, "l": f.map(|x| x.0), "N": f.map(|x| x.1)}),
                )?,
                (Format::Csv, Some((l, n))) => writeln!(out, "{p},{l},{n}")?,
                (Format::Csv, None) => writeln!(out, "{p},,")?,
            }
            continue;
        }
        let verdict = match mode {
            CriterionMode::A => {
                let ell = ells(sel, p, Limit::Count(1))?[0];
                scanner.criterion_a(p, ell)?
            }
            _ => {
                let stream = split_primes(p, limit(sel, Limit::Unbounded).bound_only());
                let ells: Box<dyn Iterator<Item = u64>> = match sel.l {
                    Some(l) => Box::new(std::iter::once(l)),
                    None => Box::new(stream),
                };
                scanner.criterion_b(p, ells, sel.count.unwrap_or(100))?
            }
        };
        all_hold &= verdict.holds;
        match run.format {
            Format::Text => writeln!(out, "{verdict}")?,
            Format::Json => json_line(out, &verdict)?,
            Format::Csv => writeln!(out, "{}", verdict_csv_row(&verdict))?,
        }
    }
    Ok(if all_hold { 0 } else { EXIT_UNDETERMINED })
}

/// Keeps only an `ell` bound; counts are handled by the caller.
trait BoundOnly {
    fn bound_only(self) -> Limit;
}

impl BoundOnly for Limit {
    fn bound_only(self) -> Limit {
        match self {
            Limit::Bound(b) => Limit::Bound(b),
            _ => Limit::Unbounded,
        }
    }
}

fn scan(run: &RunArgs, sel: &Select, out: Out) -> Result<u8> {
    let scanner = scanner(run, sel)?;
    let count = sel.count.unwrap_or(100);
    if run.format == Format::Csv {
        writeln!(out, "p,Nel,Npp,el,counts")?;
    }
    for p in primes(sel)? {
        let mut lines = Vec::new();
        let table = scanner.density_scan_with(p, count, |t| {
            lines.push(match run.format {
                Format::Csv => {
                    let c: Vec<String> = t.counts.iter().map(|c| c.to_string()).collect();
                    format!(
                        "{},{},{},{},{}",
                        p,
                        t.processed,
                        t.hits,
                        t.last_l.unwrap_or(0),
                        c.join(";")
                    )
                }
                _ => t.row(),
            });
        })?;
        match run.format {
            Format::Json => json_line(out, &table)?,
            _ => {
                for l in &lines {
                    writeln!(out, "{l}")?;
                }
            }
        }
        if run.format == Format::Text {
            writeln!(
                out,
                "p={} Nel={} Npp={} el={}",
                p,
                table.processed,
                table.hits,
                table.last_l.unwrap_or(0)
            )?;
        }
    }
    Ok(0)
}

fn rank(run: &RunArgs, sel: &Select, conjugates: bool, out: Out) -> Result<u8> {
    let exec = executor(run)?;
    let mut reached_all = true;
    if run.format == Format::Csv {
        writeln!(
            out,
            "{}",
            if conjugates {
                "p,l,conjugate_rank"
            } else {
                "p,l,rank"
            }
        )?;
    }
    for p in primes(sel)? {
        if conjugates {
            let ls = ells(sel, p, Limit::Count(1))?;
            let ranks = exec.map(&ls, |&l| conjugate_rank(p, l));
            for (l, r) in ls.iter().zip(ranks) {
                let r = r?;
                match run.format {
                    Format::Text => writeln!(out, "p={p} el={l} r={r}")?,
                    Format::Json => json_line(out, &json!({"p": p, "l": l, "rank": r}))?,
                    Format::Csv => writeln!(out, "{p},{l},{r}")?,
                }
            }
            continue;
        }
        let scan = rank_scan(
            &exec,
            p,
            limit(sel, Limit::Unbounded),
            default_rank_target(p),
        )?;
        reached_all &= scan.reached;
        match run.format {
            Format::Text => writeln!(out, "{scan}")?,
            Format::Json => json_line(out, &scan)?,
            Format::Csv => {
                for (l, r) in &scan.history {
                    writeln!(out, "{p},{l},{r}")?;
                }
            }
        }
    }
    Ok(if reached_all { 0 } else { EXIT_UNDETERMINED })
}

fn trace_csv_row(t: &TracePolynomial) -> String {
    let r: Vec<String> = t.coeffs.iter().map(|c| c.to_string()).collect();
    format!("{},{},{},{}", t.p, t.ell, t.f, r.join(";"))
}

fn trace(run: &RunArgs, sel: &Select, distinct: bool, out: Out) -> Result<u8> {
    let exec = executor(run)?;
    if run.format == Format::Csv {
        writeln!(out, "p,l,f,R")?;
    }
    for p in primes(sel)? {
        let mut catalog = match &run.cache_dir {
            Some(dir) => TraceCatalog::open(dir, p, run.resume)?,
            None => TraceCatalog::in_memory(p),
        };
        let polys = if distinct {
            if sel.l.is_some() {
                return Err(Error::InvalidParameter(
                    "--distinct needs --l-max or --count".into(),
                ));
            }
            let d = distinct_trace_count(&exec, p, limit(sel, Limit::Bound(5000)), &mut catalog)?;
            if run.format == Format::Json {
                json_line(out, &d)?;
                continue;
            }
            if run.format == Format::Text {
                for t in &d.first_seen {
                    writeln!(out, "{t}")?;
                }
                writeln!(out, "p={} distinct={} scanned={}", p, d.count, d.scanned)?;
                continue;
            }
            d.first_seen
        } else {
            trace_polynomials(&exec, p, &ells(sel, p, Limit::Count(1))?, &mut catalog)?
        };
        for t in &polys {
            match run.format {
                Format::Text => writeln!(out, "{t}")?,
                Format::Json => json_line(out, t)?,
                Format::Csv => writeln!(out, "{}", trace_csv_row(t))?,
            }
        }
    }
    Ok(0)
}

fn symbol(run: &RunArgs, sel: &Select, n: u32, out: Out) -> Result<u8> {
    let exact = Executor::new(run.exact_jobs)?;
    let opts = ExactOptions {
        memory_cap: run.memory_cap,
        ..Default::default()
    };
    if run.format == Format::Csv {
        writeln!(out, "p,n,l,c,g,v,s,u,classification")?;
    }
    for p in primes(sel)? {
        let ls = ells(sel, p, Limit::Count(1))?;
        let reports = exact.map(&ls, |&l| -> Result<SymbolReport> {
            let ctx = match sel.c {
                None => TwistContext::new(p, l)?,
                Some(c) => TwistContext::with_params(p, c, l, primitive_root(l)?)?,
            };
            classify(&ctx, n, &opts)
        });
        for r in reports {
            let r = r?;
            match run.format {
                Format::Text => writeln!(out, "{r}")?,
                Format::Json => json_line(out, &r)?,
                Format::Csv => {
                    let class = serde_json::to_value(r.classification)?;
                    let s = r.s.map_or(String::new(), |s| s.to_string());
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{},{},{}",
                        r.p,
                        r.n,
                        r.l,
                        r.c,
                        r.g,
                        r.v,
                        s,
                        r.u,
                        class.as_str().unwrap_or_default()
                    )?
                }
            }
        }
    }
    Ok(0)
}

fn bernoulli(run: &RunArgs, sel: &Select, out: Out) -> Result<u8> {
    if run.format == Format::Csv {
        writeln!(out, "p,index,irregular")?;
    }
    for p in primes(sel)? {
        let r = irregularity_report(p)?;
        match run.format {
            Format::Text => writeln!(out, "p={} index={} irregular:{}", p, r.index, r.set)?,
            Format::Json => json_line(out, &r.to_json())?,
            Format::Csv => {
                let s: Vec<String> = r.set.iter().map(|n| n.to_string()).collect();
                writeln!(out, "{},{},{}", p, r.index, s.join(";"))?
            }
        }
    }
    Ok(0)
}
