//! Canonical partition files.
//!
//! A partition file is one JSON object
//! `{"m":M,"n":N,"boxes":[{"rows":[..],"cols":[..]},..]}` with 0-based,
//! strictly increasing index lists and no other fields. The canonical
//! serialization is the compact form followed by a single LF.
//!
//! Parsing is syntactic: overlapping or missing cells are accepted here and
//! reported by [`crate::validate_partition`].

use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::bitset::LineSet;
use crate::partition::{GridDims, Partition, SubBox};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed partition file at line {line}, column {column}: {message}")]
    MalformedFile {
        line: usize,
        column: usize,
        message: String,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBox {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPartition {
    m: usize,
    n: usize,
    boxes: Vec<RawBox>,
}

fn strictly_increasing(v: &[usize]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

fn check_list(what: &str, id: usize, v: &[usize], bound: usize) -> Result<(), String> {
    if v.is_empty() {
        return Err(format!("boxes[{id}].{what} is empty"));
    }
    if !strictly_increasing(v) {
        return Err(format!("boxes[{id}].{what} is not strictly increasing"));
    }
    if let Some(&bad) = v.iter().find(|&&x| x >= bound) {
        return Err(format!("boxes[{id}].{what} contains {bad}, outside 0..{bound}"));
    }
    Ok(())
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawPartition::deserialize(d)?;
        if raw.m == 0 || raw.n == 0 {
            return Err(D::Error::custom(format!(
                "grid dimensions must be positive, got m={}, n={}",
                raw.m, raw.n
            )));
        }
        let dims = GridDims { m: raw.m, n: raw.n };
        let mut boxes = Vec::with_capacity(raw.boxes.len());
        for (id, b) in raw.boxes.iter().enumerate() {
            check_list("rows", id, &b.rows, raw.m).map_err(D::Error::custom)?;
            check_list("cols", id, &b.cols, raw.n).map_err(D::Error::custom)?;
            boxes.push(SubBox::new(
                LineSet::from_indices(raw.m, b.rows.iter().copied()),
                LineSet::from_indices(raw.n, b.cols.iter().copied()),
            ));
        }
        Partition::new(dims, boxes).map_err(D::Error::custom)
    }
}

struct BoxOut<'a>(&'a SubBox);

impl Serialize for BoxOut<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SubBox", 2)?;
        st.serialize_field("rows", &self.0.rows.to_vec())?;
        st.serialize_field("cols", &self.0.cols.to_vec())?;
        st.end()
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let boxes: Vec<BoxOut<'_>> = self.boxes().iter().map(BoxOut).collect();
        let mut st = s.serialize_struct("Partition", 3)?;
        st.serialize_field("m", &self.dims().m)?;
        st.serialize_field("n", &self.dims().n)?;
        st.serialize_field("boxes", &boxes)?;
        st.end()
    }
}

/// Errors without a serde position (semantic checks on a complete object)
/// point at the start of the object.
pub fn parse_partition(text: &str) -> Result<Partition, FormatError> {
    serde_json::from_str(text).map_err(|e| {
        let (line, column) = if e.line() == 0 {
            start_of_object(text)
        } else {
            (e.line(), e.column())
        };
        FormatError::MalformedFile {
            line,
            column,
            message: e.to_string(),
        }
    })
}

/// 1-based line and column of the first non-whitespace character.
fn start_of_object(text: &str) -> (usize, usize) {
    for (i, line) in text.lines().enumerate() {
        if let Some(c) = line.find(|ch: char| !ch.is_whitespace()) {
            return (i + 1, line[..c].chars().count() + 1);
        }
    }
    (1, 1)
}

/// Canonical form: compact JSON and a trailing LF.
pub fn serialize_partition(p: &Partition) -> String {
    let mut s = serde_json::to_string(p).expect("partition serialization is infallible");
    s.push('\n');
    s
}
