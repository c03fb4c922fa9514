//! Result records shared by the solver, the grid search, and the
//! verification harness, in their persisted JSON shapes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::grid::GridRegion;
use crate::matrix::BitMatrix;
use crate::rat::Rat;

/// What a computed value means relative to the true extremal value.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Exact,
    Lower,
    Upper,
}

/// A witness backing a reported value: a concrete avoiding matrix or
/// region, always re-verified before it is attached to a record.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Certificate {
    Matrix(BitMatrix),
    Region(GridRegion),
}

/// One extremal query result. `value` counts ones (matrix queries) or
/// occupied cells (region queries); region records also carry the exact
/// measure for convenience.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ExtremalRecord {
    pub schema: String,
    /// Content hash of the forbidden object (matrix or pattern JSON).
    pub pattern_id: String,
    pub n: i64,
    pub d: u32,
    pub value: u64,
    pub bound: Bound,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Exact measure (`value * g^d`) for region records.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure: Option<Rat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure_decimal: Option<String>,
    /// Wall-clock milliseconds. Excluded from identity comparisons: two
    /// runs of the same exact query agree on everything but this field.
    pub elapsed_ms: u64,
    /// Notes such as opt-in symmetry breaking, recorded verbatim.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ExtremalRecord {
    /// Equality over everything a determinism contract covers; wall time
    /// is reporting only.
    pub fn canonical_eq(&self, other: &ExtremalRecord) -> bool {
        let mut a = self.clone();
        let mut b = other.clone();
        a.elapsed_ms = 0;
        b.elapsed_ms = 0;
        a == b
    }
}

/// Comparison direction asserted by a check.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

impl Relation {
    pub fn holds(&self, lhs: &Rat, rhs: &Rat) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Eq => lhs == rhs,
        }
    }
}

/// One verified inequality with both sides reported exactly. The pass
/// flag is always recomputed from `lhs relation rhs`, never cached.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CheckReport {
    pub schema: String,
    pub check_id: String,
    pub params: BTreeMap<String, String>,
    pub lhs: Rat,
    pub rhs: Rat,
    pub relation: Relation,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub artifacts: Vec<String>,
}

impl CheckReport {
    pub fn new(
        check_id: impl Into<String>,
        params: BTreeMap<String, String>,
        lhs: Rat,
        rhs: Rat,
        relation: Relation,
        artifacts: Vec<String>,
    ) -> Self {
        let pass = relation.holds(&lhs, &rhs);
        CheckReport {
            schema: crate::schema::SCHEMA.to_string(),
            check_id: check_id.into(),
            params,
            lhs,
            rhs,
            relation,
            pass,
            artifacts,
        }
    }
}

impl<'de> Deserialize<'de> for CheckReport {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            schema: String,
            check_id: String,
            params: BTreeMap<String, String>,
            lhs: Rat,
            rhs: Rat,
            relation: Relation,
            pass: bool,
            #[serde(default)]
            artifacts: Vec<String>,
        }
        let raw = Raw::deserialize(d)?;
        crate::schema::expect(&raw.schema).map_err(serde::de::Error::custom)?;
        let recomputed = raw.relation.holds(&raw.lhs, &raw.rhs);
        if recomputed != raw.pass {
            return Err(serde::de::Error::custom(format!(
                "check {} carries pass={} but {} {:?} {} evaluates to {}",
                raw.check_id, raw.pass, raw.lhs, raw.relation, raw.rhs, recomputed
            )));
        }
        Ok(CheckReport {
            schema: raw.schema,
            check_id: raw.check_id,
            params: raw.params,
            lhs: raw.lhs,
            rhs: raw.rhs,
            relation: raw.relation,
            pass: raw.pass,
            artifacts: raw.artifacts,
        })
    }
}

/// Helper for building the `params` map with display-rendered values.
pub fn params<const N: usize>(entries: [(&str, String); N]) -> BTreeMap<String, String> {
    entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_is_recomputed_on_read() {
        let rep = CheckReport::new(
            "demo",
            BTreeMap::new(),
            Rat::from_int(1),
            Rat::from_int(2),
            Relation::Le,
            vec![],
        );
        assert!(rep.pass);
        let mut json = serde_json::to_value(&rep).unwrap();
        json["pass"] = serde_json::Value::Bool(false);
        let err = serde_json::from_value::<CheckReport>(json).unwrap_err().to_string();
        assert!(err.contains("evaluates to"), "{err}");
    }

    #[test]
    fn canonical_eq_ignores_wall_time() {
        let rec = ExtremalRecord {
            schema: crate::schema::SCHEMA.into(),
            pattern_id: "abc".into(),
            n: 3,
            d: 2,
            value: 6,
            bound: Bound::Exact,
            certificate: None,
            seed: None,
            measure: None,
            measure_decimal: None,
            elapsed_ms: 10,
            notes: vec![],
        };
        let mut other = rec.clone();
        other.elapsed_ms = 99;
        assert!(rec.canonical_eq(&other));
        other.value = 7;
        assert!(!rec.canonical_eq(&other));
    }
}
