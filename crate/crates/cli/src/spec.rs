//! The JSON input format for matrix families.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use opfamily::{Mat, MatFamily, Rat};
use serde::de::{Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Polynomial,
    TruncatedSeries,
}

/// A validated family `L(ε) = Σ ε^i L_i`, `i ≥ −declared_pole`.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    pub rows: usize,
    pub cols: usize,
    pub kind: Kind,
    /// Degree for polynomials, truncation order for series.
    pub trunc_or_degree: usize,
    pub declared_pole: usize,
    pub coefficients: BTreeMap<isize, Mat>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    rows: usize,
    cols: usize,
    kind: Kind,
    #[serde(default)]
    trunc_or_degree: Option<usize>,
    #[serde(default)]
    declared_pole: usize,
    coefficients: RawCoefficients,
}

/// Map entries in input order, so that repeated keys are seen instead of silently merged.
struct RawCoefficients(Vec<(String, Vec<Vec<String>>)>);

impl<'de> Deserialize<'de> for RawCoefficients {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = RawCoefficients;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a map from powers to grids of rational strings")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
                let mut out = Vec::new();
                while let Some(entry) = map.next_entry()? {
                    out.push(entry);
                }
                Ok(RawCoefficients(out))
            }
        }
        deserializer.deserialize_map(V)
    }
}

pub fn parse_rational(text: &str) -> Option<Rat> {
    Rat::from_str(text).ok()
}

pub fn parse_family(text: &str) -> Result<FamilySpec, CliError> {
    let raw: RawSpec = serde_json::from_str(text).map_err(|e| CliError::Json(e.to_string()))?;
    if raw.rows == 0 || raw.cols == 0 {
        return Err(CliError::EmptyShape { rows: raw.rows, cols: raw.cols });
    }
    let mut coefficients = BTreeMap::new();
    for (key, grid) in raw.coefficients.0 {
        let power: isize = key.parse().map_err(|_| CliError::MalformedPower(key.clone()))?;
        if power < -(raw.declared_pole as isize) {
            return Err(CliError::NegativePower { power, declared_pole: raw.declared_pole });
        }
        let m = parse_grid(power, raw.rows, raw.cols, &grid)?;
        if coefficients.insert(power, m).is_some() {
            return Err(CliError::DuplicatePower(power));
        }
    }
    let max_power = coefficients.keys().next_back().copied().unwrap_or(0).max(0) as usize;
    let trunc_or_degree = match (raw.kind, raw.trunc_or_degree) {
        (Kind::TruncatedSeries, None) => return Err(CliError::MissingTruncation),
        (Kind::Polynomial, None) => max_power,
        (_, Some(t)) => t,
    };
    if let Some(&power) = coefficients.keys().find(|&&p| p > trunc_or_degree as isize) {
        return Err(CliError::PowerOutOfRange { power, limit: trunc_or_degree });
    }
    Ok(FamilySpec {
        rows: raw.rows,
        cols: raw.cols,
        kind: raw.kind,
        trunc_or_degree,
        declared_pole: raw.declared_pole,
        coefficients,
    })
}

fn parse_grid(power: isize, rows: usize, cols: usize, grid: &[Vec<String>]) -> Result<Mat, CliError> {
    let shape_error = || CliError::GridShape {
        power,
        expected_rows: rows,
        expected_cols: cols,
        found: format!("{} rows of lengths {:?}", grid.len(), grid.iter().map(Vec::len).collect::<Vec<_>>()),
    };
    if grid.len() != rows || grid.iter().any(|r| r.len() != cols) {
        return Err(shape_error());
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for (i, row) in grid.iter().enumerate() {
        for (j, text) in row.iter().enumerate() {
            let v = parse_rational(text).ok_or_else(|| CliError::MalformedRational { power, row: i, col: j, text: text.clone() })?;
            entries.push(v);
        }
    }
    Ok(Mat::from_vec(rows, cols, entries))
}

/// Rows of canonical rational strings.
pub fn grid(m: &Mat) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)].to_string()).collect()).collect()
}

/// Columns of `m` as vectors of canonical rational strings.
pub fn column_list(m: &Mat) -> Vec<Vec<String>> {
    (0..m.cols()).map(|j| (0..m.rows()).map(|i| m[(i, j)].to_string()).collect()).collect()
}

impl FamilySpec {
    /// Replaces the declared pole, checking that no power falls below it.
    pub fn with_pole(mut self, pole: usize) -> Result<Self, CliError> {
        if let Some(&power) = self.coefficients.keys().next() {
            if power < -(pole as isize) {
                return Err(CliError::NegativePower { power, declared_pole: pole });
            }
        }
        self.declared_pole = pole;
        Ok(self)
    }

    /// The analytic family `ε^p L(ε)`, with `p` the declared pole.
    pub fn to_family(&self) -> MatFamily {
        let p = self.declared_pole as isize;
        let len = (self.trunc_or_degree as isize + p + 1) as usize;
        let mut coeffs = vec![Mat::zeros(self.rows, self.cols); len];
        for (power, m) in &self.coefficients {
            coeffs[(power + p) as usize] = m.clone();
        }
        match self.kind {
            Kind::Polynomial => MatFamily::polynomial(coeffs),
            Kind::TruncatedSeries => MatFamily::truncated(coeffs),
        }
    }

    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("a family spec always serializes")
    }
}

struct CanonicalCoefficients<'a>(&'a BTreeMap<isize, Mat>);

impl Serialize for CanonicalCoefficients<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (power, m) in self.0 {
            map.serialize_entry(&power.to_string(), &grid(m))?;
        }
        map.end()
    }
}

impl Serialize for FamilySpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("FamilySpec", 6)?;
        s.serialize_field("rows", &self.rows)?;
        s.serialize_field("cols", &self.cols)?;
        s.serialize_field("kind", &self.kind)?;
        s.serialize_field("trunc_or_degree", &self.trunc_or_degree)?;
        s.serialize_field("declared_pole", &self.declared_pole)?;
        s.serialize_field("coefficients", &CanonicalCoefficients(&self.coefficients))?;
        s.end()
    }
}
