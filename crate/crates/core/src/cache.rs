//! Append-only JSON-lines persistence for per-`(p, ell)` results.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::Result;

/// One exponent-set computation: `{"p":..,"l":..,"c":..,"g":..,"expp":[..],"ms":..}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub p: u32,
    pub l: u64,
    pub c: u32,
    pub g: u64,
    pub expp: Vec<u32>,
    pub ms: u64,
    /// `ell mod p^2`; zero when `ell = 1 (mod p^2)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_mod_p2: Option<u64>,
}

impl ScanRecord {
    pub fn key(&self) -> (u64, u32, u64) {
        (self.l, self.c, self.g)
    }
}

/// Reads every record of a JSON-lines file, skipping a torn final line.
pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    let lines: Vec<String> = reader.lines().collect::<std::io::Result<_>>()?;
    let last = lines.len().saturating_sub(1);
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str(line) {
            Ok(rec) => out.push(rec),
            // an interrupted writer can leave a partial last line
            Err(_) if i == last => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}

pub fn append_jsonl<T: Serialize>(path: &Path, records: &[T]) -> Result<()> {
    if records.is_empty() {
        return Ok(());
    }
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    let mut w = BufWriter::new(file);
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Exponent-set cache, one `expp-p<p>.jsonl` file per `p`, keyed by `(ell, c, g)`.
#[derive(Debug)]
pub struct ScanCache {
    dir: PathBuf,
    loaded: HashMap<u32, HashMap<(u64, u32, u64), ScanRecord>>,
}

impl ScanCache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self {
            dir,
            loaded: HashMap::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, p: u32) -> PathBuf {
        self.dir.join(format!("expp-p{p}.jsonl"))
    }

    fn table(&mut self, p: u32) -> Result<&mut HashMap<(u64, u32, u64), ScanRecord>> {
        if !self.loaded.contains_key(&p) {
            let recs: Vec<ScanRecord> = read_jsonl(&self.path_for(p))?;
            let map = recs.into_iter().map(|r| (r.key(), r)).collect();
            self.loaded.insert(p, map);
        }
        Ok(self.loaded.get_mut(&p).expect("just loaded"))
    }

    pub fn get(&mut self, p: u32, l: u64, c: u32, g: u64) -> Result<Option<ScanRecord>> {
        Ok(self.table(p)?.get(&(l, c, g)).cloned())
    }

    pub fn len(&mut self, p: u32) -> Result<usize> {
        Ok(self.table(p)?.len())
    }

    pub fn insert(&mut self, records: &[ScanRecord]) -> Result<()> {
        let mut by_p: HashMap<u32, Vec<ScanRecord>> = HashMap::new();
        for r in records {
            by_p.entry(r.p).or_default().push(r.clone());
        }
        for (p, recs) in by_p {
            let fresh: Vec<ScanRecord> = {
                let table = self.table(p)?;
                recs.into_iter()
                    .filter(|r| table.insert(r.key(), r.clone()).is_none())
                    .collect()
            };
            append_jsonl(&self.path_for(p), &fresh)?;
        }
        Ok(())
    }
}

/// `p,l,c,g,expp` with the exponents joined by `;`.
pub fn records_to_csv(records: &[ScanRecord]) -> String {
    let mut out = String::from("p,l,c,g,expp\n");
    for r in records {
        let expp: Vec<String> = r.expp.iter().map(|n| n.to_string()).collect();
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.p,
            r.l,
            r.c,
            r.g,
            expp.join(";")
        ));
    }
    out
}
