use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// A nonempty sorted set of feature indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct FeatureSelection(Vec<usize>);

impl FeatureSelection {
    /// Sorts and deduplicates; rejects an empty set.
    pub fn new(mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if indices.is_empty() {
            return Err(Error::EmptySelection);
        }
        Ok(Self(indices))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, f: usize) -> bool {
        self.0.binary_search(&f).is_ok()
    }

    /// Checks `1 <= |s| <= max_len` and that every index is below `p`.
    pub fn validate(&self, p: usize, max_len: usize) -> Result<()> {
        if self.is_empty() {
            return Err(Error::EmptySelection);
        }
        if self.len() > max_len {
            return Err(Error::InvalidParameter(alloc::format!(
                "selection has {} features, at most {max_len} allowed",
                self.len()
            )));
        }
        match self.0.last() {
            Some(&f) if f >= p => Err(Error::IndexOutOfRange { index: f, len: p }),
            _ => Ok(()),
        }
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

impl fmt::Display for FeatureSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, i) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}
