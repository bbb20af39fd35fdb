//! Decomposition operators.
//!
//! Given a basis {L_i·u·R_i} of Lin(A·u·A) and a published image v = a·u·b of
//! a secret sandwich map with a, b in A, the coordinates of v in that basis
//! give an operator w -> Σ α_i·L_i·w·R_i. When A and B commute elementwise,
//! this operator agrees with w -> a·w·b on the whole double coset B·u·B,
//! without a or b ever being computed.

use crate::error::{Error, Result};
use crate::linalg::{FieldElement, MatrixF, VectorF};
use crate::span::{OrbitBasis, SandwichBasis};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SandwichTerm {
    pub coeff: FieldElement,
    pub left: MatrixF,
    pub right: MatrixF,
}

/// w -> Σ coeff_i · left_i · w · right_i.
///
/// Terms are aligned with the basis entries they came from, zero
/// coefficients included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SandwichOperator {
    terms: Vec<SandwichTerm>,
    source_center: MatrixF,
}

impl SandwichOperator {
    pub fn terms(&self) -> &[SandwichTerm] {
        &self.terms
    }

    pub fn source_center(&self) -> &MatrixF {
        &self.source_center
    }

    pub fn coefficients(&self) -> Vec<FieldElement> {
        self.terms.iter().map(|t| t.coeff).collect()
    }

    /// Outside B·u·B the result is the linear extension of the operator and
    /// carries no protocol meaning.
    pub fn apply(&self, w: &MatrixF) -> Result<MatrixF> {
        let c = &self.source_center;
        if w.field() != c.field() {
            return Err(Error::ModulusMismatch(c.field().modulus(), w.field().modulus()));
        }
        if w.rows() != c.rows() || w.cols() != c.cols() {
            return Err(Error::dims(
                format!("{}x{}", c.rows(), c.cols()),
                format!("{}x{}", w.rows(), w.cols()),
            ));
        }
        let mut acc = MatrixF::zeros(w.field(), w.rows(), w.cols());
        for t in &self.terms {
            if t.coeff == FieldElement::ZERO {
                continue;
            }
            acc.add_scaled_assign(t.coeff, &w.sandwich(&t.left, &t.right)?)?;
        }
        Ok(acc)
    }
}

/// Expresses `v` in the basis of Lin(A·u·A) and keeps the result as an operator.
///
/// `Err(NotInSpan)` means `v` is not an image of u under a sandwich map over
/// the basis' subgroup: wrong side, wrong center or a corrupted transcript.
pub fn derive_operator(basis: &SandwichBasis, v: &MatrixF) -> Result<SandwichOperator> {
    let coeffs = basis.span().coordinates(v)?;
    let terms = coeffs
        .into_iter()
        .zip(basis.entries())
        .map(|(coeff, e)| SandwichTerm {
            coeff,
            left: e.left.clone(),
            right: e.right.clone(),
        })
        .collect();
    Ok(SandwichOperator {
        terms,
        source_center: basis.center().clone(),
    })
}

pub fn apply_operator(op: &SandwichOperator, w: &MatrixF) -> Result<MatrixF> {
    op.apply(w)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RightTerm {
    pub coeff: FieldElement,
    pub right: MatrixF,
}

/// w -> Σ coeff_i · w · right_i, i.e. right multiplication by one fixed matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RightOperator {
    terms: Vec<RightTerm>,
    source_center: VectorF,
}

impl RightOperator {
    pub fn terms(&self) -> &[RightTerm] {
        &self.terms
    }

    pub fn source_center(&self) -> &VectorF {
        &self.source_center
    }

    /// The matrix Σ coeff_i · right_i.
    pub fn as_matrix(&self) -> Result<MatrixF> {
        let c = &self.source_center;
        let mut acc = MatrixF::zeros(c.field(), c.len(), c.len());
        for t in &self.terms {
            acc.add_scaled_assign(t.coeff, &t.right)?;
        }
        Ok(acc)
    }

    pub fn apply(&self, w: &VectorF) -> Result<VectorF> {
        let c = &self.source_center;
        if w.len() != c.len() {
            return Err(Error::dims(c.len(), w.len()));
        }
        let mut acc = VectorF::zeros(w.field(), w.len());
        for t in &self.terms {
            if t.coeff == FieldElement::ZERO {
                continue;
            }
            acc.add_scaled_assign(t.coeff, &w.mul_mat(&t.right)?)?;
        }
        Ok(acc)
    }
}

pub fn derive_right_operator(basis: &OrbitBasis, v: &VectorF) -> Result<RightOperator> {
    let coeffs = basis.span().coordinates(v)?;
    let terms = coeffs
        .into_iter()
        .zip(basis.entries())
        .map(|(coeff, e)| RightTerm {
            coeff,
            right: e.right.clone(),
        })
        .collect();
    Ok(RightOperator {
        terms,
        source_center: basis.center().clone(),
    })
}

pub fn apply_right_operator(op: &RightOperator, w: &VectorF) -> Result<VectorF> {
    op.apply(w)
}
