//! Complement files for the `given` strategy.
//!
//! ```json
//! { "stages": [ { "stage": 1, "nc": [["1", "0", "0"]], "rc": [["0", "1", "0"], ["0", "0", "1"]] } ] }
//! ```
//!
//! Each basis is a list of vectors. An empty list is the zero subspace; an omitted
//! basis falls back to the pivot choice at that stage.

use std::collections::BTreeMap;

use opfamily::{ComplementStrategy, GivenComplements, Mat, Rat};
use serde::Deserialize;

use crate::error::CliError;
use crate::spec::parse_rational;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    stages: Vec<RawStage>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStage {
    stage: usize,
    #[serde(default)]
    nc: Option<Vec<Vec<String>>>,
    #[serde(default)]
    rc: Option<Vec<Vec<String>>>,
}

fn basis(stage: usize, name: &str, ambient: usize, vectors: &[Vec<String>]) -> Result<Mat, CliError> {
    let mut cols = Vec::with_capacity(vectors.len());
    for (idx, v) in vectors.iter().enumerate() {
        if v.len() != ambient {
            return Err(CliError::Complement(format!(
                "stage {stage}, {name} vector {idx}: length {}, expected {ambient}",
                v.len()
            )));
        }
        let entries = v
            .iter()
            .map(|t| {
                parse_rational(t)
                    .ok_or_else(|| CliError::Complement(format!("stage {stage}, {name} vector {idx}: malformed rational {t:?}")))
            })
            .collect::<Result<Vec<Rat>, _>>()?;
        cols.push(entries);
    }
    Ok(Mat::from_columns(ambient, &cols))
}

/// Parses a complement file for a family with `rows × cols` coefficients.
pub fn parse_complements(text: &str, rows: usize, cols: usize) -> Result<ComplementStrategy<Rat>, CliError> {
    let raw: RawFile = serde_json::from_str(text).map_err(|e| CliError::Complement(e.to_string()))?;
    let mut map = BTreeMap::new();
    for st in raw.stages {
        if st.stage == 0 {
            return Err(CliError::Complement("stages are numbered from 1".into()));
        }
        let nc = st.nc.as_deref().map(|v| basis(st.stage, "nc", cols, v)).transpose()?;
        let rc = st.rc.as_deref().map(|v| basis(st.stage, "rc", rows, v)).transpose()?;
        if map.insert(st.stage, GivenComplements { nc, rc }).is_some() {
            return Err(CliError::Complement(format!("stage {} listed twice", st.stage)));
        }
    }
    Ok(ComplementStrategy::Given(map))
}
