//! The six-valued proficiency scale.
//!
//! Levels are totally ordered `A1 < A2 < B1 < B2 < C1 < C2`. "No level" is never
//! a member of this type; callers use `Option<Level>` for that.

use std::fmt;
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A CEFR proficiency level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    A1,
    A2,
    B1,
    B2,
    C1,
    C2,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid level `{0}` (expected one of A1, A2, B1, B2, C1, C2)")]
pub struct InvalidLevel(pub String);

impl Level {
    /// All levels in ascending order.
    pub const ALL: [Level; 6] = [Level::A1, Level::A2, Level::B1, Level::B2, Level::C1, Level::C2];

    pub const fn as_str(self) -> &'static str {
        match self {
            Level::A1 => "A1",
            Level::A2 => "A2",
            Level::B1 => "B1",
            Level::B2 => "B2",
            Level::C1 => "C1",
            Level::C2 => "C2",
        }
    }

    /// Zero-based position on the scale.
    pub const fn index(self) -> usize {
        self as usize
    }
}

/// Parses exactly one of `A1`..`C2`. Case-sensitive, no trimming.
pub fn parse_level(text: &str) -> Result<Level, InvalidLevel> {
    match text {
        "A1" => Ok(Level::A1),
        "A2" => Ok(Level::A2),
        "B1" => Ok(Level::B1),
        "B2" => Ok(Level::B2),
        "C1" => Ok(Level::C1),
        "C2" => Ok(Level::C2),
        other => Err(InvalidLevel(other.to_string())),
    }
}

pub fn level_max(a: Level, b: Level) -> Level {
    std::cmp::max(a, b)
}

impl FromStr for Level {
    type Err = InvalidLevel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_level(s)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Level {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Level {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_level(&text).map_err(serde::de::Error::custom)
    }
}

/// A tally indexed by level. Serializes as an object with all six keys in scale order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct LevelCounts([u64; 6]);

impl LevelCounts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, level: Level) -> u64 {
        self.0[level.index()]
    }

    pub fn increment(&mut self, level: Level) {
        self.0[level.index()] += 1;
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Highest level with a nonzero count.
    pub fn max_present(&self) -> Option<Level> {
        Level::ALL.iter().rev().copied().find(|l| self.get(*l) > 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Level, u64)> + '_ {
        Level::ALL.iter().map(move |l| (*l, self.get(*l)))
    }

    pub fn add(&mut self, other: &LevelCounts) {
        for (slot, n) in self.0.iter_mut().zip(other.0.iter()) {
            *slot += n;
        }
    }
}

impl Index<Level> for LevelCounts {
    type Output = u64;

    fn index(&self, level: Level) -> &u64 {
        &self.0[level.index()]
    }
}

impl IndexMut<Level> for LevelCounts {
    fn index_mut(&mut self, level: Level) -> &mut u64 {
        &mut self.0[level.index()]
    }
}

impl FromIterator<(Level, u64)> for LevelCounts {
    fn from_iter<I: IntoIterator<Item = (Level, u64)>>(iter: I) -> Self {
        let mut counts = LevelCounts::new();
        for (level, n) in iter {
            counts[level] += n;
        }
        counts
    }
}

impl Serialize for LevelCounts {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(6))?;
        for (level, n) in self.iter() {
            map.serialize_entry(level.as_str(), &n)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for LevelCounts {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = std::collections::BTreeMap::<Level, u64>::deserialize(deserializer)?;
        Ok(raw.into_iter().collect())
    }
}
