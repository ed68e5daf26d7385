//! JSON problem documents.
//!
//! ```json
//! {
//!   "schema_version": "1",
//!   "name": "3-ellipse",
//!   "n": 2, "m": 1, "N0": 1,
//!   "A": [ [["1"]], [["1"]] ],
//!   "B": [ [ [["0","0"],["0","0"]], [["1","0"],["0","-1"]], [["0","1"],["1","0"]] ] ]
//! }
//! ```
//!
//! `A` lists `A₀..A_m`; `B` lists one block per pencil, each holding the
//! constant matrix followed by the `n` variable coefficients. Entries are
//! integers, rational strings such as `"-3/2"`, or decimals. Any decimal
//! entry switches the whole document to float mode.

use serde::{Deserialize, Serialize};
use serde_json::Number;

use crate::error::{Error, Result};
use crate::lmi::CubeProblem;
use crate::matrix::{Matrix, SymMatrix};
use crate::pencil::MatrixPencil;
use crate::scalar::{parse_rational, Rational, Scalar, ScalarMode};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Text(String),
    Number(Number),
}

type RawMatrix = Vec<Vec<Entry>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub schema_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub n: usize,
    pub m: usize,
    #[serde(rename = "N0")]
    pub n0: usize,
    #[serde(rename = "A")]
    pub a: Vec<RawMatrix>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<RawMatrix>>,
}

/// A parsed problem in whichever arithmetic its entries call for.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyProblem {
    Exact(CubeProblem<Rational>),
    Float(CubeProblem<f64>),
}

impl AnyProblem {
    pub fn mode(&self) -> ScalarMode {
        match self {
            AnyProblem::Exact(_) => ScalarMode::Exact,
            AnyProblem::Float(_) => ScalarMode::Float,
        }
    }

    pub fn to_f64(&self) -> CubeProblem<f64> {
        match self {
            AnyProblem::Exact(p) => p.to_f64(),
            AnyProblem::Float(p) => p.clone(),
        }
    }

    /// Exact copy; float entries convert to the rationals they represent.
    pub fn to_exact(&self) -> Result<CubeProblem<Rational>> {
        match self {
            AnyProblem::Exact(p) => Ok(p.clone()),
            AnyProblem::Float(p) => {
                let conv = |m: &SymMatrix<f64>| -> Result<SymMatrix<Rational>> {
                    if m.as_matrix().to_rows().iter().flatten().any(|v| !v.is_finite()) {
                        return Err(Error::Parse("non-finite entry".into()));
                    }
                    let out = m.as_matrix().map(|v| Rational::from_float(*v).expect("finite"));
                    SymMatrix::new(out)
                };
                let a = p.a().iter().map(conv).collect::<Result<Vec<_>>>()?;
                let b = p
                    .b()
                    .iter()
                    .map(|pk| MatrixPencil::new(pk.coeffs().iter().map(conv).collect::<Result<Vec<_>>>()?))
                    .collect::<Result<Vec<_>>>()?;
                CubeProblem::new(p.nvars(), a, b)
            }
        }
    }

    pub fn nvars(&self) -> usize {
        match self {
            AnyProblem::Exact(p) => p.nvars(),
            AnyProblem::Float(p) => p.nvars(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParsedProblem {
    pub problem: AnyProblem,
    pub name: Option<String>,
    pub description: Option<String>,
}

fn entry_is_exact(e: &Entry) -> bool {
    match e {
        Entry::Number(n) => n.is_i64() || n.is_u64(),
        Entry::Text(t) => parse_rational(t).is_some(),
    }
}

trait FromEntry: Sized {
    fn from_entry(e: &Entry) -> Option<Self>;
}

impl FromEntry for Rational {
    fn from_entry(e: &Entry) -> Option<Self> {
        match e {
            Entry::Number(n) => n.as_i64().map(Rational::from_i64),
            Entry::Text(t) => parse_rational(t),
        }
    }
}

impl FromEntry for f64 {
    fn from_entry(e: &Entry) -> Option<Self> {
        match e {
            Entry::Number(n) => n.as_f64(),
            Entry::Text(t) => parse_rational(t)
                .map(|r| r.to_f64())
                .or_else(|| t.trim().replace('\u{2212}', "-").parse::<f64>().ok())
                .filter(|v| v.is_finite()),
        }
    }
}

fn convert<T: Scalar + FromEntry>(raw: &RawMatrix, size: usize, field: &str) -> Result<SymMatrix<T>> {
    if raw.len() != size {
        return Err(Error::Parse(format!(
            "{field}: expected {size} rows, found {}",
            raw.len()
        )));
    }
    let mut rows = Vec::with_capacity(size);
    for (i, row) in raw.iter().enumerate() {
        if row.len() != size {
            return Err(Error::Parse(format!(
                "{field}[{i}]: expected {size} entries, found {}",
                row.len()
            )));
        }
        let mut out = Vec::with_capacity(size);
        for (j, e) in row.iter().enumerate() {
            out.push(
                T::from_entry(e).ok_or_else(|| Error::Parse(format!("{field}[{i}][{j}]: cannot read entry {e:?}")))?,
            );
        }
        rows.push(out);
    }
    let m = Matrix::from_rows(rows)?;
    SymMatrix::new(m).map_err(|err| match err {
        Error::NotSymmetric { row, col, upper, lower } => Error::Parse(format!(
            "{field}: not symmetric, entry [{row}][{col}] = {upper} but [{col}][{row}] = {lower}"
        )),
        other => Error::Parse(format!("{field}: {other}")),
    })
}

fn build<T: Scalar + FromEntry>(doc: &ProblemDocument) -> Result<CubeProblem<T>> {
    let a = doc
        .a
        .iter()
        .enumerate()
        .map(|(k, raw)| convert::<T>(raw, doc.n0, &format!("A[{k}]")))
        .collect::<Result<Vec<_>>>()?;
    let mut b = Vec::with_capacity(doc.m);
    for (k, block) in doc.b.iter().enumerate() {
        if block.len() != doc.n + 1 {
            return Err(Error::Parse(format!(
                "B[{k}]: expected {} matrices (constant + {} variables), found {}",
                doc.n + 1,
                doc.n,
                block.len()
            )));
        }
        let size = block[0].len();
        if size == 0 {
            return Err(Error::Parse(format!("B[{k}][0]: empty matrix")));
        }
        let coeffs = block
            .iter()
            .enumerate()
            .map(|(j, raw)| convert::<T>(raw, size, &format!("B[{k}][{j}]")))
            .collect::<Result<Vec<_>>>()?;
        b.push(MatrixPencil::new(coeffs).map_err(|e| Error::Parse(format!("B[{k}]: {e}")))?);
    }
    CubeProblem::new(doc.n, a, b).map_err(|e| Error::Parse(e.to_string()))
}

impl ProblemDocument {
    pub fn to_problem(&self) -> Result<AnyProblem> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "schema_version: unsupported version {:?}, expected {SCHEMA_VERSION:?}",
                self.schema_version
            )));
        }
        if self.n0 == 0 {
            return Err(Error::Parse("N0: must be at least 1".into()));
        }
        if self.a.len() != self.m + 1 {
            return Err(Error::Parse(format!(
                "A: expected m+1 = {} matrices, found {}",
                self.m + 1,
                self.a.len()
            )));
        }
        if self.b.len() != self.m {
            return Err(Error::Parse(format!(
                "B: expected m = {} pencils, found {}",
                self.m,
                self.b.len()
            )));
        }
        let exact = self
            .a
            .iter()
            .chain(self.b.iter().flatten())
            .flatten()
            .flatten()
            .all(entry_is_exact);
        Ok(if exact {
            AnyProblem::Exact(build::<Rational>(self)?)
        } else {
            AnyProblem::Float(build::<f64>(self)?)
        })
    }

    pub fn from_problem<T: Scalar>(prob: &CubeProblem<T>, name: Option<String>, description: Option<String>) -> Self {
        let raw = |m: &SymMatrix<T>| -> RawMatrix {
            m.to_rows()
                .into_iter()
                .map(|row| row.iter().map(to_entry).collect())
                .collect()
        };
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            name,
            description,
            n: prob.nvars(),
            m: prob.m(),
            n0: prob.n0(),
            a: prob.a().iter().map(raw).collect(),
            b: prob.b().iter().map(|p| p.coeffs().iter().map(raw).collect()).collect(),
        }
    }
}

fn to_entry<T: Scalar>(v: &T) -> Entry {
    match T::MODE {
        ScalarMode::Exact => Entry::Text(v.to_string()),
        ScalarMode::Float => Number::from_f64(v.to_f64())
            .map(Entry::Number)
            .unwrap_or_else(|| Entry::Text(v.to_string())),
    }
}

/// Parses and validates a problem document.
pub fn parse_problem(text: &str) -> Result<ParsedProblem> {
    let doc: ProblemDocument =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("malformed document: {e}")))?;
    Ok(ParsedProblem {
        problem: doc.to_problem()?,
        name: doc.name,
        description: doc.description,
    })
}

pub fn serialize_problem<T: Scalar>(prob: &CubeProblem<T>, name: Option<&str>, description: Option<&str>) -> String {
    let doc = ProblemDocument::from_problem(prob, name.map(str::to_string), description.map(str::to_string));
    render_document(&doc)
}

fn compact<V: Serialize>(v: &V) -> String {
    serde_json::to_string(v).expect("documents always serialize")
}

/// Pretty layout with one matrix row per line.
fn render_document(doc: &ProblemDocument) -> String {
    let matrix = |m: &RawMatrix, indent: &str| -> String {
        let rows: Vec<String> = m.iter().map(compact).collect();
        format!("{indent}[{}]", rows.join(&format!(",\n{indent} ")))
    };
    let mut out = String::from("{\n");
    out.push_str(&format!("  \"schema_version\": {},\n", compact(&doc.schema_version)));
    if let Some(name) = &doc.name {
        out.push_str(&format!("  \"name\": {},\n", compact(name)));
    }
    if let Some(description) = &doc.description {
        out.push_str(&format!("  \"description\": {},\n", compact(description)));
    }
    out.push_str(&format!(
        "  \"n\": {},\n  \"m\": {},\n  \"N0\": {},\n",
        doc.n, doc.m, doc.n0
    ));
    let a: Vec<String> = doc.a.iter().map(|m| matrix(m, "    ")).collect();
    out.push_str(&format!("  \"A\": [\n{}\n  ],\n", a.join(",\n")));
    if doc.b.is_empty() {
        out.push_str("  \"B\": []\n");
    } else {
        let b: Vec<String> = doc
            .b
            .iter()
            .map(|block| {
                let ms: Vec<String> = block.iter().map(|m| matrix(m, "      ")).collect();
                format!("    [\n{}\n    ]", ms.join(",\n"))
            })
            .collect();
        out.push_str(&format!("  \"B\": [\n{}\n  ]\n", b.join(",\n")));
    }
    out.push_str("}\n");
    out
}
