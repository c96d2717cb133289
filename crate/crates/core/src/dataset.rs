//! Historic data points: an instance feature table plus a precomputed
//! solution distance matrix.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::selection::FeatureSelection;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum FeatureKind {
    Numeric,
    Categorical,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ColumnValues {
    Numeric(Vec<f64>),
    /// Symbol ids into `labels`.
    Categorical { labels: Vec<String>, ids: Vec<u32> },
}

/// One instance feature evaluated on every data point.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureColumn {
    name: String,
    values: ColumnValues,
}

impl FeatureColumn {
    pub fn numeric(name: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            values: ColumnValues::Numeric(values),
        }
    }

    /// Symbols are interned in order of first appearance.
    pub fn categorical<S: AsRef<str>>(name: impl Into<String>, symbols: &[S]) -> Self {
        let mut labels: Vec<String> = Vec::new();
        let ids = symbols
            .iter()
            .map(|s| {
                let s = s.as_ref();
                match labels.iter().position(|l| l == s) {
                    Some(id) => id as u32,
                    None => {
                        labels.push(s.to_string());
                        (labels.len() - 1) as u32
                    }
                }
            })
            .collect();
        Self {
            name: name.into(),
            values: ColumnValues::Categorical { labels, ids },
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &ColumnValues {
        &self.values
    }

    pub fn kind(&self) -> FeatureKind {
        match self.values {
            ColumnValues::Numeric(_) => FeatureKind::Numeric,
            ColumnValues::Categorical { .. } => FeatureKind::Categorical,
        }
    }

    pub fn len(&self) -> usize {
        match &self.values {
            ColumnValues::Numeric(v) => v.len(),
            ColumnValues::Categorical { ids, .. } => ids.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All values equal.
    pub fn is_constant(&self) -> bool {
        match &self.values {
            ColumnValues::Numeric(v) => v.windows(2).all(|w| w[0] == w[1]),
            ColumnValues::Categorical { ids, .. } => ids.windows(2).all(|w| w[0] == w[1]),
        }
    }

    /// `|v_i - v_j|` for numeric columns, the 0/1 indicator of differing
    /// symbols for categorical ones.
    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        match &self.values {
            ColumnValues::Numeric(v) => (v[i] - v[j]).abs(),
            ColumnValues::Categorical { ids, .. } => {
                if ids[i] == ids[j] {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }

    fn min_max_normalized(&self) -> Self {
        match &self.values {
            ColumnValues::Numeric(v) => {
                let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let span = hi - lo;
                let values = if span > 0.0 {
                    v.iter().map(|x| (x - lo) / span).collect()
                } else {
                    v.iter().map(|_| 0.0).collect()
                };
                Self::numeric(self.name.clone(), values)
            }
            ColumnValues::Categorical { .. } => self.clone(),
        }
    }
}

/// `N` historic data points: `p` instance feature columns and the `N x N`
/// solution distance matrix `d_X`. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    n_points: usize,
    features: Vec<FeatureColumn>,
    /// Row-major `N x N`.
    solution_distance: Vec<f64>,
}

const SYMMETRY_TOLERANCE: f64 = 1e-9;

impl Dataset {
    /// Validates `N >= 2`, `p >= 1`, column lengths, finiteness and that the
    /// solution distance matrix is nonnegative, symmetric and zero on the
    /// diagonal.
    pub fn new(features: Vec<FeatureColumn>, solution_distance: Vec<Vec<f64>>) -> Result<Self> {
        let n = solution_distance.len();
        if n < 2 {
            return Err(Error::InvalidDataset(format!("need at least 2 data points, got {n}")));
        }
        if features.is_empty() {
            return Err(Error::InvalidDataset("need at least one feature".into()));
        }
        for col in &features {
            if col.len() != n {
                return Err(Error::InvalidDataset(format!(
                    "feature '{}' has {} values, expected {n}",
                    col.name(),
                    col.len()
                )));
            }
            if let ColumnValues::Numeric(v) = col.values() {
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(Error::InvalidDataset(format!(
                        "feature '{}' has non-finite values",
                        col.name()
                    )));
                }
            }
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in solution_distance.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidDataset(format!(
                    "solution distance row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            flat.extend_from_slice(row);
        }
        for i in 0..n {
            if flat[i * n + i] != 0.0 {
                return Err(Error::InvalidDataset(format!(
                    "solution distance diagonal entry ({i},{i}) is not zero"
                )));
            }
            for j in 0..n {
                let a = flat[i * n + j];
                if !a.is_finite() || a < 0.0 {
                    return Err(Error::InvalidDataset(format!(
                        "solution distance ({i},{j}) = {a} is not a nonnegative number"
                    )));
                }
                let b = flat[j * n + i];
                if (a - b).abs() > SYMMETRY_TOLERANCE * a.abs().max(1.0) {
                    return Err(Error::InvalidDataset(format!(
                        "solution distance is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Self {
            n_points: n,
            features,
            solution_distance: flat,
        })
    }

    /// Computes `d_X` as the 1-norm between solution feature vectors.
    pub fn from_solution_features(
        features: Vec<FeatureColumn>,
        solution_features: &[Vec<f64>],
    ) -> Result<Self> {
        let q = solution_features.first().map_or(0, Vec::len);
        if q == 0 {
            return Err(Error::InvalidDataset("need at least one solution feature".into()));
        }
        if solution_features.iter().any(|r| r.len() != q) {
            return Err(Error::InvalidDataset("ragged solution feature matrix".into()));
        }
        Self::new(features, solution_distance_matrix(solution_features))
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn n_features(&self) -> usize {
        self.features.len()
    }

    pub fn features(&self) -> &[FeatureColumn] {
        &self.features
    }

    pub fn feature(&self, f: usize) -> Option<&FeatureColumn> {
        self.features.get(f)
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.features.iter().position(|c| c.name() == name)
    }

    #[inline]
    pub fn solution_distance(&self, i: usize, j: usize) -> f64 {
        self.solution_distance[i * self.n_points + j]
    }

    pub fn solution_distance_row(&self, i: usize) -> &[f64] {
        &self.solution_distance[i * self.n_points..(i + 1) * self.n_points]
    }

    pub fn solution_distance_rows(&self) -> Vec<Vec<f64>> {
        self.solution_distance
            .chunks(self.n_points)
            .map(<[f64]>::to_vec)
            .collect()
    }

    fn check_point(&self, i: usize) -> Result<()> {
        if i >= self.n_points {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.n_points,
            });
        }
        Ok(())
    }

    /// `d_f(i, j)`.
    pub fn featurewise_distance(&self, i: usize, j: usize, f: usize) -> Result<f64> {
        self.check_point(i)?;
        self.check_point(j)?;
        let col = self.features.get(f).ok_or(Error::IndexOutOfRange {
            index: f,
            len: self.features.len(),
        })?;
        Ok(col.distance(i, j))
    }

    /// `d^s_I(i, j)`: sum of the featurewise distances over the selection.
    pub fn selected_instance_distance(
        &self,
        i: usize,
        j: usize,
        selection: &FeatureSelection,
    ) -> Result<f64> {
        self.check_point(i)?;
        self.check_point(j)?;
        self.check_selection(selection)?;
        Ok(selection
            .iter()
            .map(|f| self.features[f].distance(i, j))
            .sum())
    }

    /// Distance under all features.
    pub fn full_instance_distance(&self, i: usize, j: usize) -> f64 {
        self.features.iter().map(|c| c.distance(i, j)).sum()
    }

    pub fn check_selection(&self, selection: &FeatureSelection) -> Result<()> {
        if selection.is_empty() {
            return Err(Error::EmptySelection);
        }
        if let Some(&last) = selection.as_slice().last() {
            if last >= self.features.len() {
                return Err(Error::IndexOutOfRange {
                    index: last,
                    len: self.features.len(),
                });
            }
        }
        Ok(())
    }

    /// Copy with every numeric column rescaled to `[0, 1]`; constant columns
    /// become all zeros.
    pub fn min_max_normalized(&self) -> Self {
        Self {
            n_points: self.n_points,
            features: self.features.iter().map(FeatureColumn::min_max_normalized).collect(),
            solution_distance: self.solution_distance.clone(),
        }
    }

    /// Copy with constant columns removed, together with the kept original
    /// indices. Fails if nothing remains.
    pub fn without_constant_features(&self) -> Result<(Self, Vec<usize>)> {
        let kept: Vec<usize> = (0..self.features.len())
            .filter(|&f| !self.features[f].is_constant())
            .collect();
        if kept.is_empty() {
            return Err(Error::InvalidDataset("all features are constant".into()));
        }
        Ok((
            Self {
                n_points: self.n_points,
                features: kept.iter().map(|&f| self.features[f].clone()).collect(),
                solution_distance: self.solution_distance.clone(),
            },
            kept,
        ))
    }

    /// Relabels data points: new point `a` is old point `order[a]`.
    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        let n = self.n_points;
        let mut seen = alloc::vec![false; n];
        if order.len() != n || order.iter().any(|&o| o >= n || core::mem::replace(&mut seen[o], true)) {
            return Err(Error::InvalidParameter("order is not a permutation".into()));
        }
        let features = self
            .features
            .iter()
            .map(|c| {
                let values = match c.values() {
                    ColumnValues::Numeric(v) => ColumnValues::Numeric(order.iter().map(|&o| v[o]).collect()),
                    ColumnValues::Categorical { labels, ids } => ColumnValues::Categorical {
                        labels: labels.clone(),
                        ids: order.iter().map(|&o| ids[o]).collect(),
                    },
                };
                FeatureColumn {
                    name: c.name.clone(),
                    values,
                }
            })
            .collect();
        let mut solution_distance = Vec::with_capacity(n * n);
        for &a in order {
            for &b in order {
                solution_distance.push(self.solution_distance(a, b));
            }
        }
        Ok(Self {
            n_points: n,
            features,
            solution_distance,
        })
    }

    /// Condensed upper-triangle instance distances under `selection`
    /// (pair `(i, j)`, `i < j`, at [`pair_index`]).
    pub(crate) fn condensed_distances(&self, selection: &[usize], out: &mut Vec<f64>) {
        let n = self.n_points;
        out.clear();
        out.resize(n * (n - 1) / 2, 0.0);
        for &f in selection {
            let col = &self.features[f];
            match col.values() {
                ColumnValues::Numeric(v) => {
                    let mut idx = 0;
                    for i in 0..n {
                        let vi = v[i];
                        for &vj in &v[i + 1..] {
                            out[idx] += (vi - vj).abs();
                            idx += 1;
                        }
                    }
                }
                ColumnValues::Categorical { ids, .. } => {
                    let mut idx = 0;
                    for i in 0..n {
                        let a = ids[i];
                        for &b in &ids[i + 1..] {
                            if a != b {
                                out[idx] += 1.0;
                            }
                            idx += 1;
                        }
                    }
                }
            }
        }
    }
}

/// Position of pair `(i, j)`, `i != j`, in the condensed upper triangle.
#[inline]
pub(crate) fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

/// Pairwise 1-norm distances between the rows of `solution_features`.
pub fn solution_distance_matrix(solution_features: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = solution_features.len();
    let mut out = alloc::vec![alloc::vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d: f64 = solution_features[i]
                .iter()
                .zip(&solution_features[j])
                .map(|(a, b)| (a - b).abs())
                .sum();
            out[i][j] = d;
            out[j][i] = d;
        }
    }
    out
}
