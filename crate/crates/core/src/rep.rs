//! Orthogonal representations as exact data: a Gram matrix for the invariant
//! form and the images of a spanning set of the Lie algebra.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{self, format_rational, parse_rational, ExactMatrix, ExactVector, LinalgError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("{field} has shape {rows}x{cols}, expected {dim}x{dim}")]
    Shape {
        field: String,
        rows: usize,
        cols: usize,
        dim: usize,
    },
    #[error("gram not symmetric at ({row}, {col})")]
    GramNotSymmetric { row: usize, col: usize },
    #[error("gram singular")]
    GramSingular,
    #[error("generator {index} is not skew-adjoint: (Aᵀ·gram + gram·A)[{row}][{col}] = {value}")]
    NotSkewAdjoint {
        index: usize,
        row: usize,
        col: usize,
        value: String,
    },
    #[error("slice vector {index} has length {len}, expected {dim}")]
    SliceShape { index: usize, len: usize, dim: usize },
    #[error("slice vectors are linearly dependent")]
    SliceDependent,
}

#[derive(Debug, Error)]
pub enum RepIoError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid field {field}: {message}")]
    Field { field: String, message: String },
    #[error("validation failed: {0}")]
    Invalid(#[from] ValidationError),
}

/// A finite-dimensional orthogonal representation of a Lie algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalRep {
    pub name: String,
    pub dim: usize,
    /// Matrix of the invariant symmetric bilinear form.
    pub gram: ExactMatrix,
    /// Images in End(V) of a spanning set of the Lie algebra. Need not be independent.
    pub generators: Vec<ExactMatrix>,
    pub metadata: serde_json::Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SliceStatus {
    Claimed,
    Certified,
}

/// Basis of a candidate slice subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceBasis {
    pub vectors: Vec<ExactVector>,
    pub status: SliceStatus,
}

impl SliceBasis {
    pub fn claimed(vectors: Vec<ExactVector>) -> Self {
        SliceBasis {
            vectors,
            status: SliceStatus::Claimed,
        }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Checks lengths and linear independence against an ambient dimension.
    pub fn check(&self, dim: usize) -> Result<(), ValidationError> {
        for (index, v) in self.vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(ValidationError::SliceShape {
                    index,
                    len: v.len(),
                    dim,
                });
            }
        }
        let m = ExactMatrix::from_columns(dim, &self.vectors).expect("lengths checked");
        if exact::rank(&m) != self.vectors.len() {
            return Err(ValidationError::SliceDependent);
        }
        Ok(())
    }
}

impl OrthogonalRep {
    /// Applies generator `i` to `v`.
    pub fn act(&self, i: usize, v: &[exact::Rational]) -> ExactVector {
        self.generators[i].mul_vec(v)
    }

    /// The invariant form evaluated on `x`, `y`.
    pub fn form(&self, x: &[exact::Rational], y: &[exact::Rational]) -> exact::Rational {
        self.gram.bilinear(x, y)
    }
}

/// Checks gram symmetry and invertibility, then exact skew-adjointness of every generator.
pub fn validate(rep: &OrthogonalRep) -> Result<(), ValidationError> {
    let dim = rep.dim;
    let shape = |field: String, m: &ExactMatrix| {
        if m.rows() != dim || m.cols() != dim {
            Err(ValidationError::Shape {
                field,
                rows: m.rows(),
                cols: m.cols(),
                dim,
            })
        } else {
            Ok(())
        }
    };
    shape("gram".into(), &rep.gram)?;
    if let Some((row, col)) = rep.gram.asymmetry() {
        return Err(ValidationError::GramNotSymmetric { row, col });
    }
    if exact::rank(&rep.gram) != dim {
        return Err(ValidationError::GramSingular);
    }
    for (index, a) in rep.generators.iter().enumerate() {
        shape(format!("generators[{index}]"), a)?;
        let ga = &rep.gram * a;
        // Aᵀ·gram + gram·A = (gram·A)ᵀ + gram·A
        for row in 0..dim {
            for col in row..dim {
                let value = &ga[(col, row)] + &ga[(row, col)];
                if value != exact::rat(0) {
                    return Err(ValidationError::NotSkewAdjoint {
                        index,
                        row,
                        col,
                        value: format_rational(&value),
                    });
                }
            }
        }
    }
    Ok(())
}

/// A representation together with an optional slice, as stored on disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepFile {
    pub rep: OrthogonalRep,
    pub slice: Option<SliceBasis>,
}

#[derive(Serialize, Deserialize)]
struct RawRep {
    name: String,
    dim: usize,
    gram: Vec<Vec<String>>,
    generators: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    slice: Option<Vec<Vec<String>>>,
    #[serde(default = "empty_object")]
    metadata: serde_json::Value,
}

/// On-disk form of a slice written by `polarity slice`.
#[derive(Serialize, Deserialize)]
struct RawSlice {
    vectors: Vec<Vec<String>>,
    status: SliceStatus,
}

fn empty_object() -> serde_json::Value {
    serde_json::Value::Object(Default::default())
}

fn rows_to_strings(rows: &[ExactVector]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| r.iter().map(format_rational).collect())
        .collect()
}

fn parse_rows(field: &str, rows: &[Vec<String>]) -> Result<Vec<ExactVector>, RepIoError> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, s)| {
                    parse_rational(s).map_err(|e| RepIoError::Field {
                        field: format!("{field}[{i}][{j}]"),
                        message: e.to_string(),
                    })
                })
                .collect()
        })
        .collect()
}

fn parse_square(field: &str, rows: &[Vec<String>], dim: usize) -> Result<ExactMatrix, RepIoError> {
    let parsed = parse_rows(field, rows)?;
    let m = ExactMatrix::from_rows(parsed).map_err(|e: LinalgError| RepIoError::Field {
        field: field.to_string(),
        message: e.to_string(),
    })?;
    if m.rows() != dim || m.cols() != dim {
        return Err(RepIoError::Field {
            field: field.to_string(),
            message: format!("shape {}x{} does not match dim {dim}", m.rows(), m.cols()),
        });
    }
    Ok(m)
}

fn json_error(e: serde_json::Error) -> RepIoError {
    RepIoError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

impl RepFile {
    pub fn from_json_str(text: &str) -> Result<Self, RepIoError> {
        let raw: RawRep = serde_json::from_str(text).map_err(json_error)?;
        let gram = parse_square("gram", &raw.gram, raw.dim)?;
        let generators = raw
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| parse_square(&format!("generators[{i}]"), g, raw.dim))
            .collect::<Result<Vec<_>, _>>()?;
        let slice = raw
            .slice
            .as_deref()
            .map(|rows| parse_rows("slice", rows).map(SliceBasis::claimed))
            .transpose()?;
        let rep = OrthogonalRep {
            name: raw.name,
            dim: raw.dim,
            gram,
            generators,
            metadata: raw.metadata,
        };
        validate(&rep)?;
        if let Some(s) = &slice {
            s.check(rep.dim)?;
        }
        Ok(RepFile { rep, slice })
    }

    pub fn to_json_string(&self) -> String {
        let raw = RawRep {
            name: self.rep.name.clone(),
            dim: self.rep.dim,
            gram: rows_to_strings(&self.rep.gram.to_rows()),
            generators: self
                .rep
                .generators
                .iter()
                .map(|g| rows_to_strings(&g.to_rows()))
                .collect(),
            slice: self.slice.as_ref().map(|s| rows_to_strings(&s.vectors)),
            metadata: self.rep.metadata.clone(),
        };
        serde_json::to_string_pretty(&raw).expect("representation serializes")
    }
}

/// Reads and validates a representation file.
pub fn load(path: impl AsRef<Path>) -> Result<RepFile, RepIoError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| RepIoError::Io {
        path: path.display().to_string(),
        source,
    })?;
    RepFile::from_json_str(&text)
}

pub fn save(file: &RepFile, path: impl AsRef<Path>) -> Result<(), RepIoError> {
    let path = path.as_ref();
    fs::write(path, file.to_json_string() + "\n").map_err(|source| RepIoError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn slice_to_json_string(slice: &SliceBasis) -> String {
    serde_json::to_string_pretty(&RawSlice {
        vectors: rows_to_strings(&slice.vectors),
        status: slice.status,
    })
    .expect("slice serializes")
}

pub fn slice_from_json_str(text: &str) -> Result<SliceBasis, RepIoError> {
    let raw: RawSlice = serde_json::from_str(text).map_err(json_error)?;
    Ok(SliceBasis {
        vectors: parse_rows("vectors", &raw.vectors)?,
        status: raw.status,
    })
}
