//! Reading and writing Gram/isometry matrices.
//!
//! JSON documents look like
//! `{"dim": 2, "epsilon": -1, "gram": [["0","1"],["-1","0"]], "isometry": [...]}`
//! with scalars as strings (`"3"`, `"-1/2"`, `"5 mod 13"`). Bare residues,
//! plain JSON numbers and a bare array of rows are also accepted on input.
//! The text format is one matrix row per line with whitespace-separated
//! entries.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::poly::Sign;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixDocument {
    pub epsilon: Option<Sign>,
    pub gram: Matrix,
    pub isometry: Option<Matrix>,
}

fn rows_to_json(m: &Matrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|row| Value::Array(row.iter().map(|x| Value::String(x.to_string())).collect()))
            .collect(),
    )
}

pub fn to_json(doc: &MatrixDocument) -> String {
    let mut obj = json!({
        "dim": doc.gram.rows(),
        "gram": rows_to_json(&doc.gram),
    });
    if let Some(eps) = doc.epsilon {
        obj["epsilon"] = json!(eps.value());
    }
    if let Some(m) = &doc.isometry {
        obj["isometry"] = rows_to_json(m);
    }
    serde_json::to_string_pretty(&obj).expect("JSON values serialize")
}

fn rows_from_json(value: &Value, field: Field, what: &str) -> Result<Matrix> {
    let rows = value
        .as_array()
        .ok_or_else(|| Error::Parse(format!("{what} must be an array of rows")))?;
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Parse(format!("{what} row must be an array")))?;
        let mut parsed = Vec::with_capacity(row.len());
        for cell in row {
            let text = match cell {
                Value::String(s) => s.clone(),
                Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
                other => return Err(Error::Parse(format!("{what} entry {other} is not an exact scalar"))),
            };
            parsed.push(field.parse_element(&text)?);
        }
        out.push(parsed);
    }
    Matrix::from_rows(field, out)
}

pub fn from_json(text: &str, field: Field) -> Result<MatrixDocument> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    if value.is_array() {
        return Ok(MatrixDocument { epsilon: None, gram: rows_from_json(&value, field, "matrix")?, isometry: None });
    }
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse("expected a JSON object or array".into()))?;
    let gram = rows_from_json(
        obj.get("gram").ok_or_else(|| Error::Parse("missing \"gram\"".into()))?,
        field,
        "gram",
    )?;
    if !gram.is_square() {
        return Err(Error::Parse(format!("gram is {}x{}", gram.rows(), gram.cols())));
    }
    if let Some(dim) = obj.get("dim") {
        if dim.as_u64() != Some(gram.rows() as u64) {
            return Err(Error::Parse(format!("\"dim\" is {dim} but gram has {} rows", gram.rows())));
        }
    }
    let epsilon = match obj.get("epsilon") {
        None | Some(Value::Null) => None,
        Some(v) => Some(Sign::from_i64(
            v.as_i64().ok_or_else(|| Error::Parse(format!("bad epsilon {v}")))?,
        )?),
    };
    let isometry = match obj.get("isometry") {
        None | Some(Value::Null) => None,
        Some(v) => Some(rows_from_json(v, field, "isometry")?),
    };
    if let Some(m) = &isometry {
        if m.rows() != gram.rows() || m.cols() != gram.cols() {
            return Err(Error::Parse("isometry and gram have different shapes".into()));
        }
    }
    Ok(MatrixDocument { epsilon, gram, isometry })
}

pub fn parse_text_matrix(text: &str, field: Field) -> Result<Matrix> {
    let mut rows = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let row = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| field.parse_element(s))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Matrix::from_rows(field, rows)
}

/// JSON when the input starts with `{` or `[`, the text format otherwise.
pub fn read_document(text: &str, field: Field) -> Result<MatrixDocument> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        from_json(text, field)
    } else {
        Ok(MatrixDocument { epsilon: None, gram: parse_text_matrix(text, field)?, isometry: None })
    }
}
