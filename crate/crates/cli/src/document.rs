//! Matrix documents: `{"n": 2, "entries": [["1", "0"], ["0", "1/2+3i"]]}`.
//!
//! Input entries are exact Gaussian rationals. Output documents carry
//! decimal complex strings and the binary precision they were computed at.

use serde::{Deserialize, Serialize};
use waring_core::arithmetic::{decimal_digits, GaussianRational};
use waring_core::linalg::{ApproxMat, ExactMat, Mat};

use crate::error::CliError;

#[derive(Debug, Deserialize)]
struct RawDocument {
    n: usize,
    entries: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactDocument {
    pub n: usize,
    pub entries: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecimalDocument {
    pub n: usize,
    pub precision: usize,
    pub entries: Vec<Vec<String>>,
}

/// 1-based line and column of a byte offset.
fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Byte offsets of the contents of the string literals that follow the
/// `"entries"` key, in document order.
fn entry_offsets(text: &str) -> Vec<usize> {
    let bytes = text.as_bytes();
    let start = text.find("\"entries\"").map_or(0, |p| p + "\"entries\"".len());
    let mut out = Vec::new();
    let mut i = start;
    while i < bytes.len() {
        if bytes[i] == b'"' {
            out.push(i + 1);
            i += 1;
            while i < bytes.len() && bytes[i] != b'"' {
                if bytes[i] == b'\\' {
                    i += 1;
                }
                i += 1;
            }
        }
        i += 1;
    }
    out
}

pub fn parse_matrix_document(text: &str) -> Result<ExactMat, CliError> {
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if raw.entries.len() != raw.n || raw.entries.iter().any(|r| r.len() != raw.n) {
        let shape: Vec<usize> = raw.entries.iter().map(Vec::len).collect();
        return Err(CliError::DimensionMismatch(format!("n = {} but rows have lengths {shape:?}", raw.n)));
    }
    let offsets = entry_offsets(text);
    let mut rows = Vec::with_capacity(raw.n);
    for (i, row) in raw.entries.iter().enumerate() {
        let mut parsed = Vec::with_capacity(raw.n);
        for (j, s) in row.iter().enumerate() {
            let value: GaussianRational = s.parse().map_err(|e| {
                let inner = match &e {
                    waring_core::Error::Parse { offset, .. } => *offset,
                    _ => 0,
                };
                let at = offsets.get(i * raw.n + j).map_or(0, |o| o + inner);
                let (line, column) = line_col(text, at);
                CliError::Parse { line, column, message: format!("entry ({}, {}): {e}", i + 1, j + 1) }
            })?;
            parsed.push(value);
        }
        rows.push(parsed);
    }
    Mat::from_rows(rows, ()).map_err(CliError::Core)
}

pub fn exact_document(m: &ExactMat) -> ExactDocument {
    ExactDocument { n: m.n(), entries: m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect() }
}

pub fn decimal_document(m: &ApproxMat, precision: usize) -> DecimalDocument {
    let digits = decimal_digits(precision);
    DecimalDocument {
        n: m.n(),
        precision,
        entries: m.to_rows().iter().map(|r| r.iter().map(|z| z.to_decimal_string(digits)).collect()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_document() {
        let m = parse_matrix_document(r#"{"n":2, "entries":[["1","0"],["0","1"]]}"#).unwrap();
        assert_eq!(m, ExactMat::exact_identity(2));
    }

    #[test]
    fn gaussian_entry() {
        let m = parse_matrix_document(r#"{"n":1, "entries":[["1/2+3i"]]}"#).unwrap();
        assert_eq!(m.get(0, 0), &GaussianRational::from_parts(1, 2, 3, 1));
    }

    #[test]
    fn ragged_rejected() {
        let err = parse_matrix_document(r#"{"n":2, "entries":[["1","0"],["0"]]}"#).unwrap_err();
        assert!(matches!(err, CliError::DimensionMismatch(_)));
        let err = parse_matrix_document(r#"{"n":3, "entries":[["1","0"],["0","1"]]}"#).unwrap_err();
        assert!(matches!(err, CliError::DimensionMismatch(_)));
    }

    #[test]
    fn bad_entry_located() {
        let text = "{\"n\": 2,\n \"entries\": [[\"1\", \"0\"],\n  [\"0\", \"1/0\"]]}";
        match parse_matrix_document(text).unwrap_err() {
            CliError::Parse { line, column, .. } => assert_eq!((line, column), (3, 12)),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn bad_json_located() {
        match parse_matrix_document("{\"n\": 2,\n \"entries\": [[\"1\" \"0\"]]}").unwrap_err() {
            CliError::Parse { line, .. } => assert_eq!(line, 2),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn exact_roundtrip() {
        let text = r#"{"n":2, "entries":[["-3/4","2i"],["1-1/3i","0"]]}"#;
        let m = parse_matrix_document(text).unwrap();
        let again = parse_matrix_document(&serde_json::to_string(&exact_document(&m)).unwrap()).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn decimal_output_carries_precision() {
        let d = decimal_document(&ExactMat::exact_from_i64(&[&[1, 0], &[0, -2]]).to_approx(128), 128);
        assert_eq!(d.precision, 128);
        assert_eq!(d.entries[1][1], "-2");
    }
}
