//! Persistent table of known values for A, Ã, B, B̃ and C. Lower bounds only
//! go up, upper bounds only go down, and a lower bound above the upper bound
//! is refused. The file is plain JSON, read and written under an exclusive
//! lock.

use std::fs::{File, OpenOptions};
use std::io::{Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const STORE_ENV: &str = "GRASSCOV_STORE";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Quantity {
    A,
    #[serde(rename = "A~")]
    ATilde,
    B,
    #[serde(rename = "B~")]
    BTilde,
    C,
}

impl Quantity {
    pub fn parse(s: &str) -> Result<Quantity> {
        Ok(match s {
            "A" => Quantity::A,
            "A~" | "At" | "A-tilde" => Quantity::ATilde,
            "B" => Quantity::B,
            "B~" | "Bt" | "B-tilde" => Quantity::BTilde,
            "C" => Quantity::C,
            _ => return Err(Error::Parse(format!("unknown quantity {s:?}"))),
        })
    }
}

/// For A, Ã and C the last two fields are (t, λ); for B and B̃ they are (δ, α).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StoreKey {
    pub quantity: Quantity,
    pub q: u32,
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub lambda: u64,
}

impl StoreKey {
    pub fn new(quantity: Quantity, q: u32, n: usize, k: usize, t: usize, lambda: u64) -> Self {
        StoreKey {
            quantity,
            q,
            n,
            k,
            t,
            lambda,
        }
    }
}

impl std::fmt::Display for StoreKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self.quantity {
            Quantity::A => "A",
            Quantity::ATilde => "A~",
            Quantity::B => "B",
            Quantity::BTilde => "B~",
            Quantity::C => "C",
        };
        write!(f, "{name}_{}({},{},{};{})", self.q, self.n, self.k, self.t, self.lambda)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    SearchCertificate { mode: String, seed: u64, explored: u64 },
    Literature { citation: String },
    Formula { rule: String },
}

impl Provenance {
    pub fn literature(c: &str) -> Self {
        Provenance::Literature { citation: c.into() }
    }

    pub fn formula(r: &str) -> Self {
        Provenance::Formula { rule: r.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    pub value: u64,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoreEntry {
    pub key: StoreKey,
    pub lower: Option<Bound>,
    pub upper: Option<Bound>,
    /// Set only by an exhausted exact search.
    pub optimal: bool,
    /// Superseded or equal values, kept for provenance.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub history: Vec<(String, Bound)>,
}

impl StoreEntry {
    /// Lower and upper coincide (from any source).
    pub fn exact(&self) -> Option<u64> {
        match (&self.lower, &self.upper) {
            (Some(l), Some(u)) if l.value == u.value => Some(l.value),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultsStore {
    entries: Vec<StoreEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
}

impl ResultsStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Values quoted from the literature, plus the closed-form bounds that
    /// accompany them.
    pub fn with_literature() -> Self {
        use Quantity::*;
        let mut s = Self::new();
        let lit = |c: &str| Provenance::literature(c);
        let rows: [(StoreKey, Side, u64, Provenance); 13] = [
            (StoreKey::new(A, 2, 6, 4, 3, 1), Side::Lower, 21, lit("dual of the 2-spread of F_2^6")),
            (StoreKey::new(A, 2, 6, 4, 3, 1), Side::Upper, 93, Provenance::formula("packing")),
            (StoreKey::new(A, 2, 6, 4, 3, 1), Side::Upper, 21, lit("equals A_2(6,2,1;1) by duality")),
            (StoreKey::new(A, 2, 5, 3, 2, 2), Side::Lower, 32, lit("EKOO18")),
            (StoreKey::new(A, 2, 5, 3, 2, 2), Side::Upper, 32, lit("EKOO18")),
            (StoreKey::new(A, 2, 6, 4, 3, 2), Side::Upper, 186, Provenance::formula("packing")),
            (StoreKey::new(A, 2, 6, 4, 3, 2), Side::Upper, 134, Provenance::formula("johnson1 with A_2(5,3,2;2)=32")),
            (StoreKey::new(A, 2, 6, 4, 3, 2), Side::Upper, 126, lit("EKOO18, linear programming")),
            (StoreKey::new(A, 2, 6, 4, 3, 2), Side::Lower, 121, lit("EKOO18")),
            (StoreKey::new(B, 2, 6, 2, 2, 3), Side::Lower, 51, lit("EtWa16")),
            (StoreKey::new(B, 2, 6, 2, 2, 3), Side::Lower, 121, lit("EKOO18, dual of the A_2(6,4,3;2) code")),
            (StoreKey::new(A, 2, 7, 3, 2, 1), Side::Lower, 333, lit("HKKW17")),
            (StoreKey::new(A, 2, 7, 3, 2, 1), Side::Upper, 381, Provenance::formula("packing; size of a q-Fano plane")),
        ];
        for (key, side, v, p) in rows {
            s.record(key, side, v, p).expect("literature table is consistent");
        }
        s.record(StoreKey::new(C, 2, 7, 3, 2, 1), Side::Upper, 396, lit("Etz14"))
            .expect("consistent");
        s.record(StoreKey::new(C, 2, 7, 3, 2, 1), Side::Lower, 381, Provenance::formula("covering count"))
            .expect("consistent");
        s
    }

    pub fn entries(&self) -> &[StoreEntry] {
        &self.entries
    }

    pub fn get(&self, key: &StoreKey) -> Option<&StoreEntry> {
        self.entries.iter().find(|e| &e.key == key)
    }

    pub fn exact(&self, key: &StoreKey) -> Option<u64> {
        self.get(key).and_then(StoreEntry::exact)
    }

    pub fn lower(&self, key: &StoreKey) -> Option<u64> {
        self.get(key).and_then(|e| e.lower.as_ref()).map(|b| b.value)
    }

    pub fn upper(&self, key: &StoreKey) -> Option<u64> {
        self.get(key).and_then(|e| e.upper.as_ref()).map(|b| b.value)
    }

    /// Whether an exhausted search certified the value.
    pub fn certified(&self, key: &StoreKey) -> Option<u64> {
        self.get(key).filter(|e| e.optimal).and_then(StoreEntry::exact)
    }

    /// Tightens one side. Weaker values are kept in the history only; a
    /// crossing of lower and upper is refused.
    pub fn record(&mut self, key: StoreKey, side: Side, value: u64, provenance: Provenance) -> Result<()> {
        let idx = match self.entries.iter().position(|e| e.key == key) {
            Some(i) => i,
            None => {
                self.entries.push(StoreEntry {
                    key,
                    lower: None,
                    upper: None,
                    optimal: false,
                    history: Vec::new(),
                });
                self.entries.sort_by_key(|e| e.key);
                self.entries.iter().position(|e| e.key == key).unwrap()
            }
        };
        let e = &mut self.entries[idx];
        let crosses = match side {
            Side::Lower => e.upper.as_ref().is_some_and(|u| value > u.value),
            Side::Upper => e.lower.as_ref().is_some_and(|l| value < l.value),
        };
        if crosses {
            return Err(Error::StoreConflict(format!(
                "{key}: {} bound {value} crosses the recorded {}",
                if side == Side::Lower { "lower" } else { "upper" },
                if side == Side::Lower { "upper" } else { "lower" }
            )));
        }
        let slot = match side {
            Side::Lower => &mut e.lower,
            Side::Upper => &mut e.upper,
        };
        let better = match slot {
            None => true,
            Some(b) => match side {
                Side::Lower => value > b.value,
                Side::Upper => value < b.value,
            },
        };
        let label = if side == Side::Lower { "lower" } else { "upper" };
        let bound = Bound { value, provenance };
        if better {
            if let Some(old) = slot.replace(bound) {
                e.history.push((label.into(), old));
            }
        } else if !e.history.iter().any(|(l, b)| l == label && *b == bound) && slot.as_ref() != Some(&bound) {
            e.history.push((label.into(), bound));
        }
        Ok(())
    }

    /// Records an exhausted exact search: both sides set and the optimal flag raised.
    pub fn record_certificate(&mut self, key: StoreKey, value: u64, mode: &str, seed: u64, explored: u64) -> Result<()> {
        let p = Provenance::SearchCertificate {
            mode: mode.into(),
            seed,
            explored,
        };
        // check both sides before touching either
        let (lo, hi) = (self.lower(&key), self.upper(&key));
        if lo.is_some_and(|l| l > value) || hi.is_some_and(|u| u < value) {
            return Err(Error::StoreConflict(format!(
                "{key}: certified value {value} lies outside the recorded [{lo:?}, {hi:?}]"
            )));
        }
        self.record(key, Side::Lower, value, p.clone())?;
        self.record(key, Side::Upper, value, p)?;
        let e = self.entries.iter_mut().find(|e| e.key == key).unwrap();
        e.optimal = true;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: ResultsStore = serde_json::from_str(text)?;
        for e in &s.entries {
            if let (Some(l), Some(u)) = (&e.lower, &e.upper) {
                if l.value > u.value {
                    return Err(Error::StoreConflict(format!("{}: lower {} > upper {}", e.key, l.value, u.value)));
                }
            }
        }
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("store serializes")
    }

    /// Reads the store at `path`; a missing file yields the literature table.
    pub fn load(path: &Path) -> Result<Self> {
        match File::open(path) {
            Ok(mut f) => {
                f.lock_shared()?;
                let mut text = String::new();
                f.read_to_string(&mut text)?;
                Self::from_json(&text)
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Self::with_literature()),
            Err(e) => Err(e.into()),
        }
    }

    /// Locked read-modify-write of the file at `path`.
    pub fn update<T>(path: &Path, f: impl FnOnce(&mut ResultsStore) -> Result<T>) -> Result<T> {
        let mut file = OpenOptions::new().read(true).write(true).create(true).truncate(false).open(path)?;
        file.lock()?;
        let mut text = String::new();
        file.read_to_string(&mut text)?;
        let mut store = if text.trim().is_empty() {
            Self::with_literature()
        } else {
            Self::from_json(&text)?
        };
        let out = f(&mut store)?;
        file.set_len(0)?;
        file.seek(SeekFrom::Start(0))?;
        file.write_all(store.to_json().as_bytes())?;
        file.sync_all()?;
        Ok(out)
    }

    pub fn default_path() -> Option<PathBuf> {
        std::env::var_os(STORE_ENV).map(PathBuf::from)
    }
}
