use std::path::Path;

use anyhow::{bail, Context, Result};
use fspeo_core::{solution_distance_matrix, ColumnValues, Dataset, FeatureColumn, FeatureKind};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeatureFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<FeatureKind>,
    pub values: Vec<Value>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetFile {
    pub features: Vec<FeatureFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution_distance: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution_features: Option<Vec<Vec<f64>>>,
}

fn column(f: &FeatureFile) -> Result<FeatureColumn> {
    let all_numbers = f.values.iter().all(Value::is_number);
    let all_strings = f.values.iter().all(Value::is_string);
    let kind = match f.kind {
        Some(k) => k,
        None if all_numbers => FeatureKind::Numeric,
        None if all_strings => FeatureKind::Categorical,
        None => bail!("feature '{}' mixes numbers and strings; set \"kind\"", f.name),
    };
    Ok(match kind {
        FeatureKind::Numeric => {
            let values = f
                .values
                .iter()
                .map(|v| v.as_f64().with_context(|| format!("feature '{}': {v} is not a number", f.name)))
                .collect::<Result<Vec<f64>>>()?;
            FeatureColumn::numeric(f.name.clone(), values)
        }
        FeatureKind::Categorical => {
            let symbols: Vec<String> = f
                .values
                .iter()
                .map(|v| match v {
                    Value::String(s) => Ok(s.clone()),
                    Value::Number(n) => Ok(n.to_string()),
                    Value::Bool(b) => Ok(b.to_string()),
                    other => bail!("feature '{}': unsupported categorical value {other}", f.name),
                })
                .collect::<Result<_>>()?;
            FeatureColumn::categorical(f.name.clone(), &symbols)
        }
    })
}

pub fn parse_dataset(text: &str) -> Result<Dataset> {
    let file: DatasetFile = serde_json::from_str(text).context("malformed dataset JSON")?;
    let features = file.features.iter().map(column).collect::<Result<Vec<_>>>()?;
    let dx = match (file.solution_distance, file.solution_features) {
        (Some(d), None) => d,
        (None, Some(x)) => solution_distance_matrix(&x),
        _ => bail!("dataset needs exactly one of \"solution_distance\" and \"solution_features\""),
    };
    Ok(Dataset::new(features, dx)?)
}

pub fn read_dataset(path: &Path) -> Result<Dataset> {
    parse_dataset(&super::read_text(path)?).with_context(|| format!("in {}", path.display()))
}

pub fn dataset_to_json(ds: &Dataset) -> DatasetFile {
    let features = ds
        .features()
        .iter()
        .map(|c| match c.values() {
            ColumnValues::Numeric(v) => FeatureFile {
                name: c.name().to_string(),
                kind: None,
                values: v.iter().map(|&x| Value::from(x)).collect(),
            },
            ColumnValues::Categorical { labels, ids } => FeatureFile {
                name: c.name().to_string(),
                kind: Some(FeatureKind::Categorical),
                values: ids.iter().map(|&i| Value::from(labels[i as usize].clone())).collect(),
            },
        })
        .collect();
    DatasetFile {
        features,
        solution_distance: Some(ds.solution_distance_rows()),
        solution_features: None,
    }
}

pub fn write_dataset(ds: &Dataset, path: &Path) -> Result<()> {
    super::write_json(path, &dataset_to_json(ds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use fspeo_core::fixtures;

    #[test]
    fn round_trip() {
        for ds in [fixtures::toy_example(), fixtures::knapsack_example()] {
            let text = serde_json::to_string(&dataset_to_json(&ds)).unwrap();
            assert_eq!(parse_dataset(&text).unwrap(), ds);
        }
    }

    #[test]
    fn solution_features_and_errors() {
        let ok = r#"{"features":[{"name":"a","values":[1,2,4]}],"solution_features":[[0],[1],[3]]}"#;
        let ds = parse_dataset(ok).unwrap();
        assert_eq!(ds.solution_distance(0, 2), 3.0);
        let mixed = r#"{"features":[{"name":"a","values":[1,"x"]}],"solution_distance":[[0,1],[1,0]]}"#;
        assert!(parse_dataset(mixed).is_err());
        let both = r#"{"features":[{"name":"a","values":[1,2]}]}"#;
        assert!(parse_dataset(both).is_err());
    }
}
