use std::fmt;

use rand::Rng;

use super::field::{Field, FieldElement};
use crate::error::{Error, Result};

/// Dense matrix over GF(p), row-major.
///
/// Row-major order is also the flattening used whenever a matrix is viewed
/// as a vector of the ambient space M_n(F) (see [`Flatten`]).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixF {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

/// Row vector over GF(p).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VectorF {
    field: Field,
    data: Vec<u64>,
}

/// Anything that can be viewed as a coordinate vector of some ambient space.
pub trait Flatten {
    fn field(&self) -> Field;
    fn flat(&self) -> &[u64];
}

impl Flatten for MatrixF {
    fn field(&self) -> Field {
        self.field
    }
    fn flat(&self) -> &[u64] {
        &self.data
    }
}

impl Flatten for VectorF {
    fn field(&self) -> Field {
        self.field
    }
    fn flat(&self) -> &[u64] {
        &self.data
    }
}

fn same_field(a: Field, b: Field) -> Result<()> {
    if a != b {
        return Err(Error::ModulusMismatch(a.modulus(), b.modulus()));
    }
    Ok(())
}

impl MatrixF {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        MatrixF {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds from row-major residues; entries are reduced mod p.
    pub fn from_flat(field: Field, rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dims(rows * cols, data.len()));
        }
        let data = data.into_iter().map(|v| field.reduce(v)).collect();
        Ok(MatrixF {
            field,
            rows,
            cols,
            data,
        })
    }

    /// Builds from signed integer rows, e.g. `&[&[1, -1], &[0, 1]]`.
    pub fn from_rows<R: AsRef<[i64]>>(field: Field, rows: &[R]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != ncols {
                return Err(Error::dims(ncols, r.len()));
            }
            data.extend(r.iter().map(|&v| field.from_i64(v)));
        }
        Ok(MatrixF {
            field,
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    pub fn diagonal(field: Field, diag: &[i64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(field, n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = field.from_i64(d);
        }
        m
    }

    /// Uniformly random matrix (not necessarily invertible).
    pub fn random<R: Rng + ?Sized>(field: Field, rows: usize, cols: usize, rng: &mut R) -> Self {
        let p = field.modulus();
        let data = (0..rows * cols).map(|_| rng.gen_range(0..p)).collect();
        MatrixF {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|r| (0..self.cols).all(|c| self.get(r, c) == u64::from(r == c)))
    }

    fn check_same_shape(&self, other: &MatrixF) -> Result<()> {
        same_field(self.field, other.field)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::dims(
                format!("{}x{}", self.rows, self.cols),
                format!("{}x{}", other.rows, other.cols),
            ));
        }
        Ok(())
    }

    pub fn mul(&self, other: &MatrixF) -> Result<MatrixF> {
        same_field(self.field, other.field)?;
        if self.cols != other.rows {
            return Err(Error::dims(
                format!("{} rows on the right", self.cols),
                format!("{}", other.rows),
            ));
        }
        let f = self.field;
        let mut out = MatrixF::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o = f.add(*o, f.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    /// `left · self · right`, the two-sided (sandwich) product.
    pub fn sandwich(&self, left: &MatrixF, right: &MatrixF) -> Result<MatrixF> {
        left.mul(self)?.mul(right)
    }

    pub fn add(&self, other: &MatrixF) -> Result<MatrixF> {
        self.check_same_shape(other)?;
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Ok(self.with_data(data))
    }

    pub fn sub(&self, other: &MatrixF) -> Result<MatrixF> {
        self.check_same_shape(other)?;
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Ok(self.with_data(data))
    }

    pub fn scale(&self, s: FieldElement) -> MatrixF {
        let f = self.field;
        let data = self.data.iter().map(|&a| f.mul(a, s.0)).collect();
        self.with_data(data)
    }

    /// In-place `self += s · other`.
    pub fn add_scaled_assign(&mut self, s: FieldElement, other: &MatrixF) -> Result<()> {
        self.check_same_shape(other)?;
        if s.0 == 0 {
            return Ok(());
        }
        let f = self.field;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = f.add(*a, f.mul(s.0, b));
        }
        Ok(())
    }

    fn with_data(&self, data: Vec<u64>) -> MatrixF {
        MatrixF {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<MatrixF> {
        if !self.is_square() {
            return Err(Error::dims("square matrix", format!("{}x{}", self.rows, self.cols)));
        }
        let n = self.rows;
        let f = self.field;
        let w = 2 * n;
        let mut aug = vec![0u64; n * w];
        for r in 0..n {
            aug[r * w..r * w + n].copy_from_slice(self.row(r));
            aug[r * w + n + r] = 1;
        }
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| aug[r * w + col] != 0)
                .ok_or(Error::SingularMatrix)?;
            if pivot != col {
                for c in 0..w {
                    aug.swap(pivot * w + c, col * w + c);
                }
            }
            let inv = f.inv(aug[col * w + col]).expect("pivot is nonzero");
            for c in 0..w {
                aug[col * w + c] = f.mul(aug[col * w + c], inv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = aug[r * w + col];
                if factor == 0 {
                    continue;
                }
                for c in 0..w {
                    let v = f.mul(factor, aug[col * w + c]);
                    aug[r * w + c] = f.sub(aug[r * w + c], v);
                }
            }
        }
        let data = (0..n)
            .flat_map(|r| aug[r * w + n..(r + 1) * w].to_vec())
            .collect();
        Ok(MatrixF {
            field: f,
            rows: n,
            cols: n,
            data,
        })
    }

    pub fn is_invertible(&self) -> bool {
        self.inverse().is_ok()
    }

    pub fn commutes_with(&self, other: &MatrixF) -> Result<bool> {
        Ok(self.mul(other)? == other.mul(self)?)
    }
}

impl fmt::Debug for MatrixF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatrixF(p={}, {:?})", self.field.modulus(), self.to_rows())
    }
}

impl VectorF {
    pub fn zeros(field: Field, n: usize) -> Self {
        VectorF {
            field,
            data: vec![0; n],
        }
    }

    pub fn from_values(field: Field, data: Vec<u64>) -> Self {
        let data = data.into_iter().map(|v| field.reduce(v)).collect();
        VectorF { field, data }
    }

    pub fn from_i64(field: Field, data: &[i64]) -> Self {
        VectorF {
            field,
            data: data.iter().map(|&v| field.from_i64(v)).collect(),
        }
    }

    pub fn unit(field: Field, n: usize, i: usize) -> Self {
        let mut v = Self::zeros(field, n);
        v.data[i] = 1;
        v
    }

    pub fn random<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> Self {
        let p = field.modulus();
        VectorF {
            field,
            data: (0..n).map(|_| rng.gen_range(0..p)).collect(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn values(&self) -> &[u64] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Row vector times matrix.
    pub fn mul_mat(&self, m: &MatrixF) -> Result<VectorF> {
        same_field(self.field, m.field)?;
        if self.len() != m.rows {
            return Err(Error::dims(m.rows, self.len()));
        }
        let f = self.field;
        let mut out = vec![0u64; m.cols];
        for (k, &a) in self.data.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (o, &b) in out.iter_mut().zip(m.row(k)) {
                *o = f.add(*o, f.mul(a, b));
            }
        }
        Ok(VectorF {
            field: f,
            data: out,
        })
    }

    fn check_same_shape(&self, other: &VectorF) -> Result<()> {
        same_field(self.field, other.field)?;
        if self.len() != other.len() {
            return Err(Error::dims(self.len(), other.len()));
        }
        Ok(())
    }

    pub fn add(&self, other: &VectorF) -> Result<VectorF> {
        self.check_same_shape(other)?;
        let f = self.field;
        Ok(VectorF {
            field: f,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &VectorF) -> Result<VectorF> {
        self.check_same_shape(other)?;
        let f = self.field;
        Ok(VectorF {
            field: f,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, s: FieldElement) -> VectorF {
        let f = self.field;
        VectorF {
            field: f,
            data: self.data.iter().map(|&a| f.mul(a, s.0)).collect(),
        }
    }

    pub fn add_scaled_assign(&mut self, s: FieldElement, other: &VectorF) -> Result<()> {
        self.check_same_shape(other)?;
        let f = self.field;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = f.add(*a, f.mul(s.0, b));
        }
        Ok(())
    }
}

impl fmt::Debug for VectorF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorF(p={}, {:?})", self.field.modulus(), self.data)
    }
}
