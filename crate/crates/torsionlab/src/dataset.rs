//! The shipped dataset of growth-table curves: every row of the worked
//! tables, with the expected base, twist and extension groups. The dataset
//! is embedded as a JSON document and can be overridden from a file.

use crate::ecurve::GroupShape;
use crate::qfield::{parse_elem, FieldTag, QuadElem};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ShapeSpec {
    pub m: u64,
    pub n: u64,
}

impl ShapeSpec {
    pub fn to_shape(&self) -> GroupShape {
        GroupShape::new(self.m, self.n)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwistRow {
    /// Twist parameter in the element grammar.
    pub d: String,
    pub twist_group: ShapeSpec,
    pub ext_group: ShapeSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetEntry {
    pub id: String,
    /// D of the base field.
    pub field: i64,
    pub alpha: String,
    pub beta: String,
    pub base_group: ShapeSpec,
    /// The caption's G; differs from base_group only for dual-purpose rows.
    pub caption_group: ShapeSpec,
    /// The caption also serves the Z/2 x Z/2 case of the growth theorem via
    /// its twist column.
    #[serde(default)]
    pub dual_purpose: bool,
    /// Excluded from default runs (large coefficients).
    #[serde(default)]
    pub slow: bool,
    pub source: String,
    pub rows: Vec<TwistRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Dataset {
    pub entries: Vec<DatasetEntry>,
}

pub const EMBEDDED_DATASET: &str = include_str!("dataset.json");

pub fn load_embedded() -> Dataset {
    serde_json::from_str(EMBEDDED_DATASET).expect("embedded dataset parses")
}

pub fn load_from_str(text: &str) -> Result<Dataset, String> {
    let ds: Dataset = serde_json::from_str(text).map_err(|e| e.to_string())?;
    // validate
    for e in &ds.entries {
        let tag = FieldTag::new(e.field).map_err(|err| format!("{}: {err}", e.id))?;
        parse_elem(&e.alpha, tag).map_err(|err| format!("{}: alpha: {err}", e.id))?;
        parse_elem(&e.beta, tag).map_err(|err| format!("{}: beta: {err}", e.id))?;
        for r in &e.rows {
            parse_elem(&r.d, tag).map_err(|err| format!("{}: d: {err}", e.id))?;
            let _ = r.twist_group.to_shape();
            let _ = r.ext_group.to_shape();
        }
        let _ = e.base_group.to_shape();
    }
    Ok(ds)
}

impl DatasetEntry {
    pub fn tag(&self) -> FieldTag {
        FieldTag::new(self.field).expect("validated")
    }

    pub fn alpha_elem(&self) -> QuadElem {
        parse_elem(&self.alpha, self.tag()).expect("validated")
    }

    pub fn beta_elem(&self) -> QuadElem {
        parse_elem(&self.beta, self.tag()).expect("validated")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_dataset_is_valid() {
        let ds = load_from_str(EMBEDDED_DATASET).unwrap();
        assert!(ds.entries.len() >= 15);
        // round-trip: every element string parses and re-prints to an
        // equivalent canonical form
        for e in &ds.entries {
            let tag = e.tag();
            for s in [&e.alpha, &e.beta] {
                let v = parse_elem(s, tag).unwrap();
                let printed = crate::qfield::print_elem(&v);
                assert_eq!(parse_elem(&printed, tag).unwrap(), v);
            }
        }
        // ids unique
        let mut ids: Vec<&str> = ds.entries.iter().map(|e| e.id.as_str()).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), ds.entries.len());
    }

    #[test]
    fn expected_groups_are_valid_shapes() {
        let ds = load_embedded();
        for e in &ds.entries {
            assert_eq!(e.base_group.to_shape().order() % 4, 0);
            for r in &e.rows {
                let _ = r.twist_group.to_shape();
                let _ = r.ext_group.to_shape();
            }
        }
    }
}
