//! Saturating span closures.
//!
//! [`span_closure`] builds a basis of Lin(A·h·A) for a finitely generated
//! subgroup A, recording for every basis element the pair of group elements
//! (L, R) with value = L·h·R. [`orbit_closure`] is the one-sided analogue for
//! Lin(v·G) with v a row vector.
//!
//! Both run the list procedure: the first list is X·h·X (X being the
//! generators, their inverses and the identity); every later list multiplies
//! only the elements accepted while processing the previous list. The
//! procedure stops at the first list that contributes nothing.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{IncrementalSpan, MatrixF, VectorF};
use crate::platform::GeneratorSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SandwichEntry {
    pub left: MatrixF,
    pub right: MatrixF,
    pub value: MatrixF,
}

/// Counters collected while saturating.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClosureStats {
    /// Lists that contributed at least one basis element (the first list
    /// always counts, since it contributes the center itself).
    pub productive_lists: usize,
    /// Raw candidates generated over all lists, duplicates included.
    pub candidates_examined: usize,
    /// Raw candidate count of each processed list, in order.
    pub list_sizes: Vec<usize>,
}

impl ClosureStats {
    pub fn max_list_size(&self) -> usize {
        self.list_sizes.iter().copied().max().unwrap_or(0)
    }
}

/// Basis of Lin(A·h·A) with tracked multipliers.
#[derive(Clone, Debug)]
pub struct SandwichBasis {
    center: MatrixF,
    entries: Vec<SandwichEntry>,
    span: IncrementalSpan<MatrixF>,
    stats: ClosureStats,
}

impl SandwichBasis {
    pub fn center(&self) -> &MatrixF {
        &self.center
    }

    pub fn entries(&self) -> &[SandwichEntry] {
        &self.entries
    }

    pub fn span(&self) -> &IncrementalSpan<MatrixF> {
        &self.span
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn stats(&self) -> &ClosureStats {
        &self.stats
    }

    pub fn productive_list_count(&self) -> usize {
        self.stats.productive_lists
    }

    pub fn total_candidates_examined(&self) -> usize {
        self.stats.candidates_examined
    }

    /// Checks that x·e and e·x stay in the span for every basis value e and
    /// every x in the symmetric generating set of `side`.
    pub fn closure_holds(&self, side: &GeneratorSet) -> Result<bool> {
        for x in side.symmetric_set() {
            for e in &self.entries {
                if !self.span.contains(&x.mul(&e.value)?)?
                    || !self.span.contains(&e.value.mul(&x)?)?
                {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Recomputes left·center·right for every entry.
    pub fn multipliers_consistent(&self) -> Result<bool> {
        for e in &self.entries {
            if self.center.sandwich(&e.left, &e.right)? != e.value {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Debug dump: `{center, entries: [{left, right, value}], ...counters}`.
    pub fn dump_json(&self) -> serde_json::Value {
        let entries: Vec<_> = self
            .entries
            .iter()
            .map(|e| {
                serde_json::json!({
                    "left": e.left.to_rows(),
                    "right": e.right.to_rows(),
                    "value": e.value.to_rows(),
                })
            })
            .collect();
        serde_json::json!({
            "modulus": self.center.field().modulus(),
            "center": self.center.to_rows(),
            "entries": entries,
            "basis_dim": self.dim(),
            "productive_lists": self.stats.productive_lists,
            "candidates_examined": self.stats.candidates_examined,
            "list_sizes": self.stats.list_sizes,
        })
    }
}

/// Saturates Lin(A·h·A) for A generated by `side`.
pub fn span_closure(side: &GeneratorSet, h: &MatrixF) -> Result<SandwichBasis> {
    if h.is_zero() {
        return Err(Error::ZeroCenter);
    }
    if h.rows() != side.dim() || h.cols() != side.dim() {
        return Err(Error::dims(
            format!("{0}x{0}", side.dim()),
            format!("{}x{}", h.rows(), h.cols()),
        ));
    }
    let xs = side.symmetric_set();
    let identity = side.identity();
    let n = side.dim();
    let mut span = IncrementalSpan::new(side.field(), n * n);
    let mut entries = Vec::new();
    let mut stats = ClosureStats::default();

    span.insert(h.clone())?;
    entries.push(SandwichEntry {
        left: identity.clone(),
        right: identity,
        value: h.clone(),
    });

    // Seeds of the current list, as indices into `entries`. The first list is
    // X·h·X, seeded by h alone.
    let mut seeds: Vec<usize> = vec![0];
    let mut first = true;
    while !seeds.is_empty() {
        let before = entries.len();
        let mut seen: HashSet<MatrixF> = HashSet::new();
        let mut list_size = 0;
        for &s in &seeds {
            let (sl, sr, sv) = {
                let e = &entries[s];
                (e.left.clone(), e.right.clone(), e.value.clone())
            };
            for x in &xs {
                let xe = x.mul(&sv)?;
                for y in &xs {
                    list_size += 1;
                    let cand = xe.mul(y)?;
                    if !seen.insert(cand.clone()) {
                        continue;
                    }
                    if span.insert(cand.clone())? {
                        entries.push(SandwichEntry {
                            left: x.mul(&sl)?,
                            right: sr.mul(y)?,
                            value: cand,
                        });
                    }
                }
            }
        }
        stats.candidates_examined += list_size;
        stats.list_sizes.push(list_size);
        if first || entries.len() > before {
            stats.productive_lists += 1;
        }
        first = false;
        seeds = (before..entries.len()).collect();
    }

    Ok(SandwichBasis {
        center: h.clone(),
        entries,
        span,
        stats,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitEntry {
    pub right: MatrixF,
    pub value: VectorF,
}

/// Basis of Lin(v·G) with tracked right multipliers.
#[derive(Clone, Debug)]
pub struct OrbitBasis {
    center: VectorF,
    entries: Vec<OrbitEntry>,
    span: IncrementalSpan<VectorF>,
    stats: ClosureStats,
}

impl OrbitBasis {
    pub fn center(&self) -> &VectorF {
        &self.center
    }

    pub fn entries(&self) -> &[OrbitEntry] {
        &self.entries
    }

    pub fn span(&self) -> &IncrementalSpan<VectorF> {
        &self.span
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn stats(&self) -> &ClosureStats {
        &self.stats
    }

    pub fn closure_holds(&self, side: &GeneratorSet) -> Result<bool> {
        for x in side.symmetric_set() {
            for e in &self.entries {
                if !self.span.contains(&e.value.mul_mat(&x)?)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn multipliers_consistent(&self) -> Result<bool> {
        for e in &self.entries {
            if self.center.mul_mat(&e.right)? != e.value {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Saturates Lin(v·G) for G generated by `side`.
pub fn orbit_closure(side: &GeneratorSet, v: &VectorF) -> Result<OrbitBasis> {
    if v.is_zero() {
        return Err(Error::ZeroCenter);
    }
    if v.len() != side.dim() {
        return Err(Error::dims(side.dim(), v.len()));
    }
    let xs = side.symmetric_set();
    let mut span = IncrementalSpan::new(side.field(), side.dim());
    let mut entries = Vec::new();
    let mut stats = ClosureStats::default();

    span.insert(v.clone())?;
    entries.push(OrbitEntry {
        right: side.identity(),
        value: v.clone(),
    });

    let mut seeds: Vec<usize> = vec![0];
    let mut first = true;
    while !seeds.is_empty() {
        let before = entries.len();
        let mut seen: HashSet<VectorF> = HashSet::new();
        let mut list_size = 0;
        for &s in &seeds {
            let (sr, sv) = (entries[s].right.clone(), entries[s].value.clone());
            for x in &xs {
                list_size += 1;
                let cand = sv.mul_mat(x)?;
                if !seen.insert(cand.clone()) {
                    continue;
                }
                if span.insert(cand.clone())? {
                    entries.push(OrbitEntry {
                        right: sr.mul(x)?,
                        value: cand,
                    });
                }
            }
        }
        stats.candidates_examined += list_size;
        stats.list_sizes.push(list_size);
        if first || entries.len() > before {
            stats.productive_lists += 1;
        }
        first = false;
        seeds = (before..entries.len()).collect();
    }

    Ok(OrbitBasis {
        center: v.clone(),
        entries,
        span,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{Field, Flatten};
    use crate::platform::{make_block_fixture, random_word, Side, WordLength};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u64) -> Field {
        Field::new(p).unwrap()
    }

    /// Rank of a family of flattened elements by direct elimination.
    fn brute_rank(f: Field, mut rows: Vec<Vec<u64>>) -> usize {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
                continue;
            };
            rows.swap(rank, piv);
            let inv = f.inv(rows[rank][c]).unwrap();
            let prow: Vec<u64> = rows[rank].iter().map(|&x| f.mul(x, inv)).collect();
            for row in rows.iter_mut().skip(rank + 1) {
                let k = row[c];
                for (x, &y) in row.iter_mut().zip(&prow) {
                    *x = f.sub(*x, f.mul(k, y));
                }
            }
            rows[rank] = prow;
            rank += 1;
        }
        rank
    }

    #[test]
    fn trivial_group_gives_center_only() {
        let f = gf(1009);
        let gs = GeneratorSet::new(Side::A, f, 3, vec![MatrixF::identity(f, 3)]).unwrap();
        let h = MatrixF::random(f, 3, 3, &mut ChaCha8Rng::seed_from_u64(1));
        let basis = span_closure(&gs, &h).unwrap();
        assert_eq!(basis.dim(), 1);
        assert_eq!(basis.entries()[0].value, h);
        assert_eq!(basis.productive_list_count(), 1);
    }

    #[test]
    fn diag_generator_over_gf3_fills_the_space() {
        let f = gf(3);
        let a = MatrixF::diagonal(f, &[2, 1]);
        let h = MatrixF::from_rows(f, &[[1, 1], [1, 1]]).unwrap();
        // a has order 2, so A = {I, a}; enumerate all a^i h a^j
        let group = [MatrixF::identity(f, 2), a.clone()];
        let mut all = Vec::new();
        for l in &group {
            for r in &group {
                all.push(h.sandwich(l, r).unwrap().flat().to_vec());
            }
        }
        let oracle = brute_rank(f, all);
        assert_eq!(oracle, 4);
        let gs = GeneratorSet::new(Side::A, f, 2, vec![a]).unwrap();
        let basis = span_closure(&gs, &h).unwrap();
        assert_eq!(basis.dim(), oracle);
        assert!(basis.closure_holds(&gs).unwrap());
    }

    #[test]
    fn scalar_generator_gives_dimension_one() {
        let f = gf(1009);
        let c = MatrixF::diagonal(f, &[7, 7, 7]);
        let gs = GeneratorSet::new(Side::A, f, 3, vec![c]).unwrap();
        let h = MatrixF::random(f, 3, 3, &mut ChaCha8Rng::seed_from_u64(2));
        assert_eq!(span_closure(&gs, &h).unwrap().dim(), 1);
    }

    #[test]
    fn zero_center_rejected() {
        let f = gf(7);
        let gs = GeneratorSet::new(Side::A, f, 2, vec![MatrixF::identity(f, 2)]).unwrap();
        assert!(matches!(
            span_closure(&gs, &MatrixF::zeros(f, 2, 2)),
            Err(Error::ZeroCenter)
        ));
        assert!(matches!(
            orbit_closure(&gs, &VectorF::zeros(f, 2)),
            Err(Error::ZeroCenter)
        ));
    }

    #[test]
    fn entry_zero_is_center_and_multipliers_reproduce_values() {
        let fx = make_block_fixture(2, 2, 2, 2, gf(1009), 17).unwrap();
        for side in [&fx.a_side, &fx.b_side] {
            let basis = span_closure(side, &fx.h).unwrap();
            assert!(basis.entries()[0].left.is_identity());
            assert!(basis.entries()[0].right.is_identity());
            assert!(basis.multipliers_consistent().unwrap());
            assert!(basis.closure_holds(side).unwrap());
            assert!(basis.productive_list_count() <= 16);
            assert!(basis.dim() <= 16);
        }
    }

    #[test]
    fn closed_under_random_group_elements() {
        let fx = make_block_fixture(2, 2, 2, 2, gf(1009), 23).unwrap();
        let basis = span_closure(&fx.a_side, &fx.h).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let a = random_word(&fx.a_side, WordLength::default(), &mut rng).unwrap();
            let a2 = random_word(&fx.a_side, WordLength::default(), &mut rng).unwrap();
            for e in basis.entries() {
                assert!(basis.span().contains(&e.value.sandwich(&a, &a2).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn resaturating_adds_nothing() {
        let fx = make_block_fixture(2, 2, 2, 1, gf(1009), 31).unwrap();
        let basis = span_closure(&fx.a_side, &fx.h).unwrap();
        for e in basis.entries() {
            let inner = span_closure(&fx.a_side, &e.value).unwrap();
            for v in inner.entries() {
                assert!(basis.span().contains(&v.value).unwrap());
            }
            assert!(inner.dim() <= basis.dim());
        }
    }

    #[test]
    fn permutation_orbit_spans_all_unit_vectors() {
        let f = gf(1009);
        let n = 4;
        let mut rows = vec![vec![0i64; n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[(i + 1) % n] = 1;
        }
        let p = MatrixF::from_rows(f, &rows).unwrap();
        let v = VectorF::unit(f, n, 0);
        let mut orbit = Vec::new();
        let mut cur = v.clone();
        for _ in 0..n {
            orbit.push(cur.values().to_vec());
            cur = cur.mul_mat(&p).unwrap();
        }
        let oracle = brute_rank(f, orbit);
        let gs = GeneratorSet::new(Side::A, f, n, vec![p]).unwrap();
        let basis = orbit_closure(&gs, &v).unwrap();
        assert_eq!(basis.dim(), oracle);
        assert_eq!(oracle, n);
        assert!(basis.closure_holds(&gs).unwrap());
        assert!(basis.multipliers_consistent().unwrap());
        assert!(basis.stats().productive_lists <= n);
    }

    #[test]
    fn trivial_orbit() {
        let f = gf(1009);
        let gs = GeneratorSet::new(Side::A, f, 3, vec![MatrixF::identity(f, 3)]).unwrap();
        let v = VectorF::from_i64(f, &[1, 2, 3]);
        let basis = orbit_closure(&gs, &v).unwrap();
        assert_eq!(basis.dim(), 1);
        assert!(basis.entries()[0].right.is_identity());
    }

    #[test]
    fn deterministic_dump() {
        let fx = make_block_fixture(1, 2, 1, 1, gf(101), 2).unwrap();
        let a = span_closure(&fx.b_side, &fx.h).unwrap().dump_json();
        let b = span_closure(&fx.b_side, &fx.h).unwrap().dump_json();
        assert_eq!(a, b);
        assert_eq!(a["basis_dim"], a["entries"].as_array().unwrap().len());
    }
}
