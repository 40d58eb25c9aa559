use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Counts of observed classical bitstrings.
///
/// Keys are MSB-first: the leftmost character is the highest-indexed bit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotHistogram {
    pub counts: BTreeMap<String, u64>,
    pub shots: u64,
}

/// Formats `value` as a `width`-character MSB-first bitstring.
pub fn bitstring(value: u64, width: usize) -> String {
    if width == 0 {
        return String::new();
    }
    format!("{value:0width$b}")
}

impl ShotHistogram {
    pub fn empty() -> Self {
        ShotHistogram {
            counts: BTreeMap::new(),
            shots: 0,
        }
    }

    /// Builds a histogram from per-value tallies (index = register value).
    pub fn from_tallies(tallies: &[u64], width: usize) -> Self {
        let mut hist = Self::empty();
        for (value, &n) in tallies.iter().enumerate() {
            if n > 0 {
                hist.counts.insert(bitstring(value as u64, width), n);
                hist.shots += n;
            }
        }
        hist
    }

    pub fn record(&mut self, key: String) {
        *self.counts.entry(key).or_insert(0) += 1;
        self.shots += 1;
    }

    pub fn count(&self, key: &str) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    pub fn frequency(&self, key: &str) -> f64 {
        if self.shots == 0 {
            0.0
        } else {
            self.count(key) as f64 / self.shots as f64
        }
    }

    /// Most frequent bitstring; ties go to the lexicographically smallest key.
    pub fn mode(&self) -> Option<&str> {
        let mut best: Option<(&str, u64)> = None;
        for (key, &n) in &self.counts {
            if best.is_none_or(|(_, m)| n > m) {
                best = Some((key.as_str(), n));
            }
        }
        best.map(|(k, _)| k)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}
