//! Integer-only JSON encodings shared by the fixture, transcript and key files.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Field, MatrixF, VectorF};

/// `kind` tag used for payloads in transcript and key files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PayloadKind {
    Matrix,
    Vector,
}

/// A matrix or row vector as published in a protocol run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    Matrix(MatrixF),
    Vector(VectorF),
}

impl Payload {
    pub fn kind(&self) -> PayloadKind {
        match self {
            Payload::Matrix(_) => PayloadKind::Matrix,
            Payload::Vector(_) => PayloadKind::Vector,
        }
    }

    pub fn as_matrix(&self) -> Option<&MatrixF> {
        match self {
            Payload::Matrix(m) => Some(m),
            Payload::Vector(_) => None,
        }
    }

    pub fn as_vector(&self) -> Option<&VectorF> {
        match self {
            Payload::Vector(v) => Some(v),
            Payload::Matrix(_) => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Payload::Matrix(m) => serde_json::to_value(m.to_rows()),
            Payload::Vector(v) => serde_json::to_value(v.values()),
        }
        .expect("integers always serialize")
    }

    pub fn from_json(
        field: Field,
        dim: usize,
        kind: PayloadKind,
        data: &serde_json::Value,
    ) -> Result<Payload> {
        Ok(match kind {
            PayloadKind::Matrix => {
                let rows: Vec<Vec<u64>> = serde_json::from_value(data.clone())?;
                Payload::Matrix(matrix_from_rows(field, dim, &rows)?)
            }
            PayloadKind::Vector => {
                let vals: Vec<u64> = serde_json::from_value(data.clone())?;
                Payload::Vector(vector_from_values(field, dim, &vals)?)
            }
        })
    }
}

fn check_residue(field: Field, v: u64) -> Result<u64> {
    if v >= field.modulus() {
        return Err(Error::Malformed(format!(
            "entry {v} is not reduced mod {}",
            field.modulus()
        )));
    }
    Ok(v)
}

/// Parses an `n x n` matrix given as rows of reduced residues.
pub fn matrix_from_rows(field: Field, n: usize, rows: &[Vec<u64>]) -> Result<MatrixF> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Malformed(format!("expected a {n}x{n} matrix")));
    }
    let data = rows
        .iter()
        .flatten()
        .map(|&v| check_residue(field, v))
        .collect::<Result<Vec<_>>>()?;
    MatrixF::from_flat(field, n, n, data)
}

pub fn vector_from_values(field: Field, n: usize, vals: &[u64]) -> Result<VectorF> {
    if vals.len() != n {
        return Err(Error::Malformed(format!(
            "expected a vector of length {n}, got {}",
            vals.len()
        )));
    }
    let data = vals
        .iter()
        .map(|&v| check_residue(field, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(VectorF::from_values(field, data))
}

/// Key file contents: the honest shared key (or the recovered plaintext for
/// protocols that transport a message).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyFile {
    pub protocol_id: String,
    pub modulus: u64,
    pub dimension: usize,
    pub kind: PayloadKind,
    pub data: serde_json::Value,
}

impl KeyFile {
    pub fn new(protocol_id: &str, dimension: usize, key: &Payload) -> Self {
        let field = match key {
            Payload::Matrix(m) => m.field(),
            Payload::Vector(v) => v.field(),
        };
        KeyFile {
            protocol_id: protocol_id.to_string(),
            modulus: field.modulus(),
            dimension,
            kind: key.kind(),
            data: key.to_json(),
        }
    }

    pub fn payload(&self) -> Result<Payload> {
        let field = Field::new(self.modulus)?;
        Payload::from_json(field, self.dimension, self.kind, &self.data)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("key file serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let k: KeyFile = serde_json::from_str(s)?;
        k.payload()?;
        Ok(k)
    }
}
