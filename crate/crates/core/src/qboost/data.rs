use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How a column is split on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeatureKind {
    Numeric,
    /// Integer codes in `[0, cardinality)`.
    Categorical { cardinality: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureSchema {
    kinds: Vec<FeatureKind>,
}

impl FeatureSchema {
    pub fn new(kinds: Vec<FeatureKind>) -> Self {
        Self { kinds }
    }

    pub fn numeric(n: usize) -> Self {
        Self::new(vec![FeatureKind::Numeric; n])
    }

    pub fn kinds(&self) -> &[FeatureKind] {
        &self.kinds
    }

    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }
}

/// Column-major feature table.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    columns: Vec<Vec<f64>>,
    names: Vec<String>,
    schema: FeatureSchema,
}

impl FeatureMatrix {
    /// Validates shapes, finiteness and categorical codes (non-negative
    /// integers; codes outside the training cardinality are allowed here and
    /// handled at prediction time).
    pub fn new(columns: Vec<Vec<f64>>, names: Vec<String>, schema: FeatureSchema) -> Result<Self> {
        if columns.len() != schema.len() || names.len() != schema.len() {
            return Err(Error::Shape(format!(
                "{} columns, {} names, {} schema entries",
                columns.len(),
                names.len(),
                schema.len()
            )));
        }
        let n = columns.first().map_or(0, Vec::len);
        for (j, (col, kind)) in columns.iter().zip(schema.kinds()).enumerate() {
            if col.len() != n {
                return Err(Error::Shape(format!("column {j} has {} rows, expected {n}", col.len())));
            }
            if let Some(i) = col.iter().position(|v| !v.is_finite()) {
                return Err(Error::Data(format!("non-finite feature at row {i}, column {j}")));
            }
            if matches!(kind, FeatureKind::Categorical { .. })
                && col.iter().any(|&v| v < 0.0 || v.fract() != 0.0 || v > u32::MAX as f64)
            {
                return Err(Error::Data(format!("column {j} has a non-integer categorical code")));
            }
        }
        Ok(Self {
            columns,
            names,
            schema,
        })
    }

    /// Unnamed numeric columns, mostly for tests.
    pub fn from_columns(columns: Vec<Vec<f64>>) -> Result<Self> {
        let n = columns.len();
        let names = (0..n).map(|j| format!("f{j}")).collect();
        Self::new(columns, names, FeatureSchema::numeric(n))
    }

    pub fn n_rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn n_features(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn schema(&self) -> &FeatureSchema {
        &self.schema
    }

    pub fn value(&self, row: usize, feature: usize) -> f64 {
        self.columns[feature][row]
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self {
            columns: self
                .columns
                .iter()
                .map(|c| rows.iter().map(|&r| c[r]).collect())
                .collect(),
            names: self.names.clone(),
            schema: self.schema.clone(),
        }
    }

    /// Training additionally requires categorical codes below the declared
    /// cardinality.
    pub(crate) fn check_codes_in_range(&self) -> Result<()> {
        for (j, (col, kind)) in self.columns.iter().zip(self.schema.kinds()).enumerate() {
            if let FeatureKind::Categorical { cardinality } = kind {
                if let Some(v) = col.iter().find(|&&v| v >= *cardinality as f64) {
                    return Err(Error::Data(format!(
                        "column {j}: code {v} outside cardinality {cardinality}"
                    )));
                }
            }
        }
        Ok(())
    }
}
