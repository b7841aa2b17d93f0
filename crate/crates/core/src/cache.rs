//! In-run class-number cache with an optional flat-CSV backing file.
//!
//! The file format is a `d,h` header followed by one `d,h` row per line.
//! Loading is permissive: unparsable rows and rows whose `d` is not a
//! fundamental discriminant are skipped. Two rows giving different class
//! numbers for the same `d` are a hard error.

use std::collections::HashMap;
use std::fs;
use std::io;
use std::path::Path;
use std::sync::RwLock;

use thiserror::Error;

use crate::arith::{is_fundamental, FundamentalDiscriminant};
use crate::forms;

/// Environment variable naming a default cache file.
pub const CACHE_ENV: &str = "HCF_CACHE";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache conflict for d = {d}: h = {first} and h = {second}")]
    Conflict { d: u64, first: u64, second: u64 },
    #[error("cache i/o: {0}")]
    Io(#[from] io::Error),
}

#[derive(Debug, Default)]
pub struct ClassNumberCache {
    map: RwLock<HashMap<u64, u64>>,
}

impl ClassNumberCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parse(text: &str) -> Result<Self, CacheError> {
        let mut map = HashMap::new();
        for line in text.lines() {
            let Some((d, h)) = line.trim().split_once(',') else {
                continue;
            };
            let (Ok(d), Ok(h)) = (d.trim().parse::<u64>(), h.trim().parse::<u64>()) else {
                continue;
            };
            if !is_fundamental(d) || h == 0 {
                continue;
            }
            match map.insert(d, h) {
                Some(prev) if prev != h => {
                    return Err(CacheError::Conflict {
                        d,
                        first: prev,
                        second: h,
                    })
                }
                _ => {}
            }
        }
        Ok(Self {
            map: RwLock::new(map),
        })
    }

    /// Loads `path`, treating a missing file as an empty cache.
    pub fn load(path: &Path) -> Result<Self, CacheError> {
        match fs::read_to_string(path) {
            Ok(text) => Self::parse(&text),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(Self::new()),
            Err(e) => Err(e.into()),
        }
    }

    /// Serialises the cache sorted by `d`.
    pub fn to_csv(&self) -> String {
        let map = self.map.read().unwrap();
        let mut entries: Vec<(u64, u64)> = map.iter().map(|(&d, &h)| (d, h)).collect();
        entries.sort_unstable();
        let mut out = String::with_capacity(16 * entries.len() + 4);
        out.push_str("d,h\n");
        for (d, h) in entries {
            out.push_str(&format!("{d},{h}\n"));
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<(), CacheError> {
        fs::write(path, self.to_csv())?;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.map.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, d: u64) -> Option<u64> {
        self.map.read().unwrap().get(&d).copied()
    }

    pub fn insert(&self, d: FundamentalDiscriminant, h: u64) {
        self.map.write().unwrap().insert(d.get(), h);
    }

    pub fn extend(&self, entries: impl IntoIterator<Item = (u64, u64)>) {
        self.map.write().unwrap().extend(entries);
    }

    pub fn class_number(&self, d: FundamentalDiscriminant) -> u64 {
        if let Some(h) = self.get(d.get()) {
            return h;
        }
        let h = forms::class_number(d);
        self.insert(d, h);
        h
    }
}

/// Class number through an optional cache.
pub fn class_number(cache: Option<&ClassNumberCache>, d: FundamentalDiscriminant) -> u64 {
    match cache {
        Some(c) => c.class_number(d),
        None => forms::class_number(d),
    }
}
