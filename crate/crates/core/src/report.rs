//! Serialization helpers: rationals are written as strings ("3", "-1/2")
//! so structured output stays exact.

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::ratlin::QMatrix;
use crate::Q;

/// Version tag for structured reports.
pub const SCHEMA: &str = "sullivan-report/1";

pub fn rational(x: &Q) -> String {
    x.to_string()
}

pub fn ser_rational<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational(x))
}

pub fn ser_vector<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&rational(x))?;
    }
    seq.end()
}

pub fn ser_vectors<S: Serializer>(vs: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
    let rows: Vec<Vec<String>> = vs.iter().map(|v| v.iter().map(rational).collect()).collect();
    rows.serialize(s)
}

impl Serialize for QMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows())
            .map(|i| self.row(i).iter().map(rational).collect())
            .collect();
        rows.serialize(s)
    }
}
