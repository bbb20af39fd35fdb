//! Incremental row reduction.
//!
//! [`IncrementalSpan`] keeps the flattened images of the inserted elements in
//! reduced row echelon form. Every echelon row also records how it is
//! expressed in terms of the original elements, so coordinate queries can be
//! answered over the inserted elements directly, in insertion order.

use super::field::{Field, FieldElement};
use super::matrix::Flatten;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
struct EchelonRow {
    pivot: usize,
    // normalized so that data[pivot] == 1
    data: Vec<u64>,
    // data == sum_i combo[i] * elements[i]; shorter than `elements` means trailing zeros
    combo: Vec<u64>,
}

/// A growing, linearly independent family of elements of a fixed ambient
/// space, with membership and coordinate queries.
#[derive(Clone, Debug)]
pub struct IncrementalSpan<T> {
    field: Field,
    ambient_dim: usize,
    rows: Vec<EchelonRow>,
    elements: Vec<T>,
}

impl<T: Flatten> IncrementalSpan<T> {
    pub fn new(field: Field, ambient_dim: usize) -> Self {
        IncrementalSpan {
            field,
            ambient_dim,
            rows: Vec::new(),
            elements: Vec::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Dimension of the span.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Accepted elements, in insertion order.
    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<T> {
        self.elements
    }

    /// Pivot columns of the echelon rows, strictly increasing.
    pub fn pivot_cols(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.pivot).collect()
    }

    /// The echelon rows, ordered by pivot.
    pub fn basis_rows(&self) -> impl Iterator<Item = &[u64]> {
        self.rows.iter().map(|r| r.data.as_slice())
    }

    fn check(&self, element: &T) -> Result<()> {
        if element.field() != self.field {
            return Err(Error::ModulusMismatch(
                self.field.modulus(),
                element.field().modulus(),
            ));
        }
        if element.flat().len() != self.ambient_dim {
            return Err(Error::dims(self.ambient_dim, element.flat().len()));
        }
        Ok(())
    }

    /// Returns (residual, coefficients of the reduction over the echelon rows).
    fn reduce(&self, v: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let f = self.field;
        let mut residual = v.to_vec();
        let mut coeffs = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            // rows are fully reduced, so the pivot entry of the target is untouched
            // by earlier subtractions
            let c = v[row.pivot];
            coeffs.push(c);
            if c == 0 {
                continue;
            }
            for (r, &x) in residual.iter_mut().zip(&row.data).skip(row.pivot) {
                *r = f.sub(*r, f.mul(c, x));
            }
        }
        (residual, coeffs)
    }

    fn combine(&self, coeffs: &[u64], len: usize) -> Vec<u64> {
        let f = self.field;
        let mut out = vec![0u64; len];
        for (row, &c) in self.rows.iter().zip(coeffs) {
            if c == 0 {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(&row.combo) {
                *o = f.add(*o, f.mul(c, x));
            }
        }
        out
    }

    /// Appends `element` if it is independent of the current span.
    ///
    /// Returns `Ok(false)` and leaves the span untouched when it is dependent.
    pub fn insert(&mut self, element: T) -> Result<bool> {
        self.check(&element)?;
        let f = self.field;
        let (residual, coeffs) = self.reduce(element.flat());
        let Some(pivot) = residual.iter().position(|&x| x != 0) else {
            return Ok(false);
        };
        let new_index = self.elements.len();
        let s = f.inv(residual[pivot]).expect("nonzero pivot");
        let data: Vec<u64> = residual.iter().map(|&x| f.mul(s, x)).collect();
        let mut combo: Vec<u64> = self
            .combine(&coeffs, new_index + 1)
            .into_iter()
            .map(|x| f.mul(s, f.neg(x)))
            .collect();
        combo[new_index] = s;

        for row in &mut self.rows {
            let c = row.data[pivot];
            if c == 0 {
                continue;
            }
            for (x, &y) in row.data.iter_mut().zip(&data) {
                *x = f.sub(*x, f.mul(c, y));
            }
            row.combo.resize(new_index + 1, 0);
            for (x, &y) in row.combo.iter_mut().zip(&combo) {
                *x = f.sub(*x, f.mul(c, y));
            }
        }
        let at = self.rows.partition_point(|r| r.pivot < pivot);
        self.rows.insert(at, EchelonRow { pivot, data, combo });
        self.elements.push(element);
        Ok(true)
    }

    /// Coordinates of `target` over the stored elements (insertion order).
    ///
    /// Unique because the stored elements are independent; `Err(NotInSpan)`
    /// when no combination exists.
    pub fn coordinates(&self, target: &T) -> Result<Vec<FieldElement>> {
        self.check(target)?;
        let (residual, coeffs) = self.reduce(target.flat());
        if residual.iter().any(|&x| x != 0) {
            return Err(Error::NotInSpan);
        }
        Ok(self
            .combine(&coeffs, self.elements.len())
            .into_iter()
            .map(FieldElement)
            .collect())
    }

    pub fn contains(&self, target: &T) -> Result<bool> {
        match self.coordinates(target) {
            Ok(_) => Ok(true),
            Err(Error::NotInSpan) => Ok(false),
            Err(e) => Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{MatrixF, VectorF};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u64) -> Field {
        Field::new(p).unwrap()
    }

    /// Rank by plain elimination over a copy, independent of the incremental path.
    fn brute_rank(p: u64, mut rows: Vec<Vec<u64>>) -> usize {
        let f = gf(p);
        let cols = rows.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
                continue;
            };
            rows.swap(rank, piv);
            let inv = f.inv(rows[rank][c]).unwrap();
            let prow: Vec<u64> = rows[rank].iter().map(|&x| f.mul(x, inv)).collect();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[c] != 0 {
                    let k = row[c];
                    for (x, &y) in row.iter_mut().zip(&prow) {
                        *x = f.sub(*x, f.mul(k, y));
                    }
                }
            }
            rows[rank] = prow;
            rank += 1;
        }
        rank
    }

    #[test]
    fn scalar_multiple_is_dependent() {
        let f = gf(7);
        let mut span = IncrementalSpan::new(f, 3);
        let v = VectorF::from_i64(f, &[1, 2, 3]);
        assert!(span.insert(v.clone()).unwrap());
        assert!(!span.insert(v.scale(f.element(2))).unwrap());
        assert_eq!(span.len(), 1);
        assert!(!span.insert(VectorF::zeros(f, 3)).unwrap());
    }

    #[test]
    fn four_sandwich_products_over_gf3() {
        let f = gf(3);
        let a = MatrixF::diagonal(f, &[2, 1]);
        let h = MatrixF::from_rows(f, &[[1, 1], [1, 1]]).unwrap();
        let ah = a.mul(&h).unwrap();
        let ha = h.mul(&a).unwrap();
        let aha = ah.mul(&a).unwrap();
        let items = [h, ah, ha, aha];
        let oracle = brute_rank(3, items.iter().map(|m| m.flat().to_vec()).collect());
        assert_eq!(oracle, 4);
        let mut span = IncrementalSpan::new(f, 4);
        for m in items {
            assert!(span.insert(m).unwrap());
        }
        assert_eq!(span.len(), 4);
    }

    #[test]
    fn coordinates_of_simple_targets() {
        let f = gf(7);
        let mut span = IncrementalSpan::new(f, 4);
        let e1 = VectorF::from_i64(f, &[1, 0, 2, 0]);
        let e2 = VectorF::from_i64(f, &[0, 3, 1, 1]);
        let e3 = VectorF::from_i64(f, &[5, 1, 0, 1]);
        for e in [&e1, &e2, &e3] {
            assert!(span.insert(e.clone()).unwrap());
        }
        let unit = span.coordinates(&e2).unwrap();
        assert_eq!(unit, vec![FieldElement(0), FieldElement(1), FieldElement(0)]);
        let zero = span.coordinates(&VectorF::zeros(f, 4)).unwrap();
        assert!(zero.iter().all(|c| c.value() == 0));
        let t = e1.scale(f.element(2)).add(&e2.scale(f.element(3))).unwrap();
        let c = span.coordinates(&t).unwrap();
        assert_eq!(c.iter().map(|c| c.value()).collect::<Vec<_>>(), vec![2, 3, 0]);
        assert!(matches!(
            span.coordinates(&VectorF::unit(f, 4, 3)),
            Err(Error::NotInSpan)
        ));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let f = gf(7);
        let mut span = IncrementalSpan::new(f, 4);
        assert!(matches!(
            span.insert(VectorF::zeros(f, 3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn pivots_increase_and_rows_are_reduced() {
        let f = gf(1009);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut span = IncrementalSpan::new(f, 9);
        for _ in 0..12 {
            span.insert(MatrixF::random(f, 3, 3, &mut rng)).unwrap();
            let piv = span.pivot_cols();
            assert!(piv.windows(2).all(|w| w[0] < w[1]));
            for (i, row) in span.basis_rows().enumerate() {
                for (j, &pc) in piv.iter().enumerate() {
                    assert_eq!(row[pc], u64::from(i == j));
                }
            }
        }
        assert_eq!(span.len(), 9);
    }

    fn small_vectors() -> impl Strategy<Value = Vec<Vec<u64>>> {
        prop::collection::vec(prop::collection::vec(0u64..5, 6), 1..10)
    }

    proptest! {
        #[test]
        fn size_bounded_and_matches_brute_rank(vs in small_vectors()) {
            let f = gf(5);
            let mut span = IncrementalSpan::new(f, 6);
            for v in &vs {
                let member = span.contains(&VectorF::from_values(f, v.clone())).unwrap();
                let added = span.insert(VectorF::from_values(f, v.clone())).unwrap();
                prop_assert_eq!(added, !member);
                prop_assert!(span.len() <= 6);
            }
            prop_assert_eq!(span.len(), brute_rank(5, vs));
            for e in span.elements().to_vec() {
                prop_assert!(!span.insert(e).unwrap());
            }
        }

        #[test]
        fn coordinates_recover_random_combinations(
            seed in 0u64..1000,
            coeffs in prop::collection::vec(0u64..1009, 5),
        ) {
            let f = gf(1009);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut span = IncrementalSpan::new(f, 8);
            while span.len() < 5 {
                span.insert(VectorF::random(f, 8, &mut rng)).unwrap();
            }
            let mut target = VectorF::zeros(f, 8);
            for (c, e) in coeffs.iter().zip(span.elements()) {
                target.add_scaled_assign(f.element(*c), e).unwrap();
            }
            let got: Vec<u64> = span.coordinates(&target).unwrap().iter().map(|c| c.value()).collect();
            prop_assert_eq!(got, coeffs);
        }
    }
}
