//! Group elements, generating sets and commuting-subgroup fixtures.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Field, MatrixF, VectorF};
use crate::wire::{matrix_from_rows, vector_from_values};

/// Cap on rejection sampling for invertible elements.
pub const SAMPLING_RETRIES: usize = 100;

/// Which correspondent's subgroup a generating set (or secret) belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::A => "A",
            Side::B => "B",
        })
    }
}

/// Finite generating set of a subgroup, with precomputed inverses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    side: Side,
    field: Field,
    dim: usize,
    gens: Vec<MatrixF>,
    inverses: Vec<MatrixF>,
}

impl GeneratorSet {
    /// Fails if any generator is singular or the shapes disagree.
    pub fn new(side: Side, field: Field, dim: usize, gens: Vec<MatrixF>) -> Result<Self> {
        let mut inverses = Vec::with_capacity(gens.len());
        for g in &gens {
            if g.field() != field {
                return Err(Error::ModulusMismatch(field.modulus(), g.field().modulus()));
            }
            if g.rows() != dim || g.cols() != dim {
                return Err(Error::dims(
                    format!("{dim}x{dim}"),
                    format!("{}x{}", g.rows(), g.cols()),
                ));
            }
            inverses.push(g.inverse()?);
        }
        Ok(GeneratorSet {
            side,
            field,
            dim,
            gens,
            inverses,
        })
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gens(&self) -> &[MatrixF] {
        &self.gens
    }

    pub fn inverses(&self) -> &[MatrixF] {
        &self.inverses
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// The set X = {1, g_1, g_1^-1, ..., g_k, g_k^-1} in the fixed order used
    /// by the span closures: identity first, then generator index order with
    /// exponent +1 before -1.
    pub fn symmetric_set(&self) -> Vec<MatrixF> {
        let mut x = Vec::with_capacity(2 * self.gens.len() + 1);
        x.push(MatrixF::identity(self.field, self.dim));
        for (g, gi) in self.gens.iter().zip(&self.inverses) {
            x.push(g.clone());
            x.push(gi.clone());
        }
        x
    }

    /// Generators of both sets, under this set's side label.
    pub fn union(&self, other: &GeneratorSet) -> Result<GeneratorSet> {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        GeneratorSet::new(self.side, self.field, self.dim, gens)
    }

    pub fn identity(&self) -> MatrixF {
        MatrixF::identity(self.field, self.dim)
    }
}

/// The two-sided multiplication f -> left·f·right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SandwichMap {
    left: MatrixF,
    right: MatrixF,
}

impl SandwichMap {
    pub fn new(left: MatrixF, right: MatrixF) -> Result<Self> {
        if !left.is_invertible() || !right.is_invertible() {
            return Err(Error::SingularMatrix);
        }
        Ok(SandwichMap { left, right })
    }

    pub fn identity(field: Field, n: usize) -> Self {
        SandwichMap {
            left: MatrixF::identity(field, n),
            right: MatrixF::identity(field, n),
        }
    }

    pub fn left(&self) -> &MatrixF {
        &self.left
    }

    pub fn right(&self) -> &MatrixF {
        &self.right
    }

    pub fn apply(&self, f: &MatrixF) -> Result<MatrixF> {
        f.sandwich(&self.left, &self.right)
    }

    /// `self ∘ inner`: applying `inner` first, then `self`.
    /// With self = φ_{a,b} and inner = φ_{c,d} this is φ_{ac,db}.
    pub fn after(&self, inner: &SandwichMap) -> Result<SandwichMap> {
        Ok(SandwichMap {
            left: self.left.mul(&inner.left)?,
            right: inner.right.mul(&self.right)?,
        })
    }

    /// Applies `self` first, then `next`: with self = φ_{a,b} and
    /// next = φ_{c,d} the result is φ_{ca,bd}.
    pub fn then(&self, next: &SandwichMap) -> Result<SandwichMap> {
        next.after(self)
    }

    pub fn inverse(&self) -> Result<SandwichMap> {
        Ok(SandwichMap {
            left: self.left.inverse()?,
            right: self.right.inverse()?,
        })
    }
}

/// Inclusive range of word lengths for private elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WordLength {
    pub min: usize,
    pub max: usize,
}

impl WordLength {
    pub fn new(min: usize, max: usize) -> Result<Self> {
        if min > max {
            return Err(Error::InvalidWordLength { min, max });
        }
        Ok(WordLength { min, max })
    }
}

impl Default for WordLength {
    fn default() -> Self {
        WordLength { min: 3, max: 8 }
    }
}

impl FromStr for WordLength {
    type Err = Error;

    /// Accepts `"5"`, `"3..8"`, `"3..=8"` or `"3-8"` (all inclusive).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Malformed(format!("word length range {s:?}"));
        let parts: Vec<&str> = if let Some((a, b)) = s.split_once("..=") {
            vec![a, b]
        } else if let Some((a, b)) = s.split_once("..") {
            vec![a, b]
        } else if let Some((a, b)) = s.split_once('-') {
            vec![a, b]
        } else {
            vec![s, s]
        };
        let min = parts[0].trim().parse().map_err(|_| bad())?;
        let max = parts[1].trim().parse().map_err(|_| bad())?;
        WordLength::new(min, max)
    }
}

/// Product of uniformly chosen generators or inverses, of uniformly chosen
/// length in `len`. A zero length yields the identity.
pub fn random_word<R: Rng + ?Sized>(
    gs: &GeneratorSet,
    len: WordLength,
    rng: &mut R,
) -> Result<MatrixF> {
    if gs.is_empty() {
        return Err(Error::EmptyGeneratorSet);
    }
    let n = rng.gen_range(len.min..=len.max);
    let mut w = gs.identity();
    for _ in 0..n {
        let i = rng.gen_range(0..gs.len());
        let letter = if rng.gen_bool(0.5) {
            &gs.gens[i]
        } else {
            &gs.inverses[i]
        };
        w = w.mul(letter)?;
    }
    Ok(w)
}

/// Rejection-samples a uniformly random invertible matrix.
pub fn random_invertible<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> Result<MatrixF> {
    for _ in 0..SAMPLING_RETRIES {
        let m = MatrixF::random(field, n, n, rng);
        if m.is_invertible() {
            return Ok(m);
        }
    }
    Err(Error::SamplingFailed {
        what: "invertible matrix",
        attempts: SAMPLING_RETRIES,
    })
}

fn random_nonzero_vector<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> Result<VectorF> {
    for _ in 0..SAMPLING_RETRIES {
        let v = VectorF::random(field, n, rng);
        if !v.is_zero() {
            return Ok(v);
        }
    }
    Err(Error::SamplingFailed {
        what: "nonzero vector",
        attempts: SAMPLING_RETRIES,
    })
}

/// How a fixture's commuting structure was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FixtureFamily {
    /// A = diag(X, I), B = diag(I, Y): non-abelian sides that commute with each other.
    Block,
    /// Every generator is a polynomial in one random matrix: a commutative G.
    Polynomial,
}

impl FromStr for FixtureFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "block" => Ok(FixtureFamily::Block),
            "polynomial" | "poly" => Ok(FixtureFamily::Polynomial),
            _ => Err(Error::Malformed(format!("unknown fixture family {s:?}"))),
        }
    }
}

/// Public platform data for one experiment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProtocolFixture {
    pub family: FixtureFamily,
    pub field: Field,
    pub dimension: usize,
    pub a_side: GeneratorSet,
    pub b_side: GeneratorSet,
    /// The public base element h.
    pub h: MatrixF,
    /// Base vector for vector-valued protocols, if one was drawn.
    pub y: Option<VectorF>,
    pub seed: u64,
}

impl ProtocolFixture {
    /// Checks g_A·g_B == g_B·g_A for every cross-side generator pair.
    pub fn verify_commutation(&self) -> Result<()> {
        for (i, ga) in self.a_side.gens().iter().enumerate() {
            for (j, gb) in self.b_side.gens().iter().enumerate() {
                if !ga.commutes_with(gb)? {
                    return Err(Error::FixtureViolation(format!(
                        "A-generator {i} does not commute with B-generator {j}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Checks that all generators of both sides commute pairwise (G abelian).
    pub fn verify_commutative(&self) -> Result<()> {
        let all = self.a_side.union(&self.b_side)?;
        for (i, g) in all.gens().iter().enumerate() {
            for (j, k) in all.gens().iter().enumerate().skip(i + 1) {
                if !g.commutes_with(k)? {
                    return Err(Error::FixtureViolation(format!(
                        "generators {i} and {j} do not commute"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&FixtureFile::from(self)).expect("fixture serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: FixtureFile = serde_json::from_str(s)?;
        file.into_fixture()
    }
}

/// Serialized fixture; exact integers only.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FixtureFile {
    pub family: FixtureFamily,
    pub modulus: u64,
    pub dimension: usize,
    pub a_gens: Vec<Vec<Vec<u64>>>,
    pub b_gens: Vec<Vec<Vec<u64>>>,
    pub h: Vec<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<u64>>,
    pub seed: u64,
}

impl From<&ProtocolFixture> for FixtureFile {
    fn from(fx: &ProtocolFixture) -> Self {
        FixtureFile {
            family: fx.family,
            modulus: fx.field.modulus(),
            dimension: fx.dimension,
            a_gens: fx.a_side.gens().iter().map(MatrixF::to_rows).collect(),
            b_gens: fx.b_side.gens().iter().map(MatrixF::to_rows).collect(),
            h: fx.h.to_rows(),
            y: fx.y.as_ref().map(|y| y.values().to_vec()),
            seed: fx.seed,
        }
    }
}

impl FixtureFile {
    pub fn into_fixture(self) -> Result<ProtocolFixture> {
        let field = Field::new(self.modulus)?;
        let n = self.dimension;
        let parse = |gens: &[Vec<Vec<u64>>]| {
            gens.iter()
                .map(|g| matrix_from_rows(field, n, g))
                .collect::<Result<Vec<_>>>()
        };
        let fx = ProtocolFixture {
            family: self.family,
            field,
            dimension: n,
            a_side: GeneratorSet::new(Side::A, field, n, parse(&self.a_gens)?)?,
            b_side: GeneratorSet::new(Side::B, field, n, parse(&self.b_gens)?)?,
            h: matrix_from_rows(field, n, &self.h)?,
            y: self
                .y
                .as_deref()
                .map(|y| vector_from_values(field, n, y))
                .transpose()?,
            seed: self.seed,
        };
        fx.verify_commutation()?;
        Ok(fx)
    }
}

fn block_diag(field: Field, upper: &MatrixF, lower: &MatrixF) -> MatrixF {
    let (n1, n2) = (upper.rows(), lower.rows());
    let n = n1 + n2;
    let mut data = vec![0u64; n * n];
    for r in 0..n1 {
        data[r * n..r * n + n1].copy_from_slice(upper.row(r));
    }
    for r in 0..n2 {
        data[(n1 + r) * n + n1..(n1 + r + 1) * n].copy_from_slice(lower.row(r));
    }
    MatrixF::from_flat(field, n, n, data).expect("shape is consistent")
}

/// Block-diagonal fixture of size n₁+n₂: A-generators diag(X, I), B-generators
/// diag(I, Y), and a random invertible dense h.
pub fn make_block_fixture(
    n1: usize,
    n2: usize,
    k_a: usize,
    k_b: usize,
    field: Field,
    seed: u64,
) -> Result<ProtocolFixture> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::dims("block sizes >= 1", format!("{n1},{n2}")));
    }
    if k_a == 0 || k_b == 0 {
        return Err(Error::EmptyGeneratorSet);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = n1 + n2;
    let i1 = MatrixF::identity(field, n1);
    let i2 = MatrixF::identity(field, n2);
    let a_gens = (0..k_a)
        .map(|_| Ok(block_diag(field, &random_invertible(field, n1, &mut rng)?, &i2)))
        .collect::<Result<Vec<_>>>()?;
    let b_gens = (0..k_b)
        .map(|_| Ok(block_diag(field, &i1, &random_invertible(field, n2, &mut rng)?)))
        .collect::<Result<Vec<_>>>()?;
    let h = random_invertible(field, n, &mut rng)?;
    let fx = ProtocolFixture {
        family: FixtureFamily::Block,
        field,
        dimension: n,
        a_side: GeneratorSet::new(Side::A, field, n, a_gens)?,
        b_side: GeneratorSet::new(Side::B, field, n, b_gens)?,
        h,
        y: None,
        seed,
    };
    fx.verify_commutation()?;
    Ok(fx)
}

/// Evaluates c₀·I + c₁·M + … at `m`.
pub fn eval_polynomial(m: &MatrixF, coeffs: &[u64]) -> Result<MatrixF> {
    let field = m.field();
    let mut acc = MatrixF::zeros(field, m.rows(), m.cols());
    // Horner
    for &c in coeffs.iter().rev() {
        acc = acc.mul(m)?;
        acc = acc.add(&MatrixF::identity(field, m.rows()).scale(field.element(c)))?;
    }
    Ok(acc)
}

/// Degree of the random polynomials used as generators.
pub const POLY_DEGREE: usize = 2;

/// Commutative fixture: `k` generators per side, each an invertible random
/// polynomial of degree ≤ 2 in one random n×n matrix M, plus a random
/// invertible h and a random nonzero vector y.
pub fn make_polynomial_fixture(n: usize, k: usize, field: Field, seed: u64) -> Result<ProtocolFixture> {
    if n < 2 {
        return Err(Error::dims("n >= 2", n));
    }
    if k == 0 {
        return Err(Error::EmptyGeneratorSet);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = field.modulus();
    let base = MatrixF::random(field, n, n, &mut rng);
    let sample = |rng: &mut ChaCha8Rng| -> Result<MatrixF> {
        for _ in 0..SAMPLING_RETRIES {
            let coeffs: Vec<u64> = (0..=POLY_DEGREE).map(|_| rng.gen_range(0..p)).collect();
            let g = eval_polynomial(&base, &coeffs)?;
            if g.is_invertible() {
                return Ok(g);
            }
        }
        Err(Error::SamplingFailed {
            what: "invertible polynomial generator",
            attempts: SAMPLING_RETRIES,
        })
    };
    let a_gens = (0..k).map(|_| sample(&mut rng)).collect::<Result<Vec<_>>>()?;
    let b_gens = (0..k).map(|_| sample(&mut rng)).collect::<Result<Vec<_>>>()?;
    let h = random_invertible(field, n, &mut rng)?;
    let y = random_nonzero_vector(field, n, &mut rng)?;
    let fx = ProtocolFixture {
        family: FixtureFamily::Polynomial,
        field,
        dimension: n,
        a_side: GeneratorSet::new(Side::A, field, n, a_gens)?,
        b_side: GeneratorSet::new(Side::B, field, n, b_gens)?,
        h,
        y: Some(y),
        seed,
    };
    fx.verify_commutative()?;
    Ok(fx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> Field {
        Field::new(p).unwrap()
    }

    #[test]
    fn sandwich_identity_and_inverse() {
        let f = gf(1009);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = MatrixF::random(f, 3, 3, &mut rng);
        assert_eq!(SandwichMap::identity(f, 3).apply(&x).unwrap(), x);
        let m = SandwichMap::new(
            random_invertible(f, 3, &mut rng).unwrap(),
            random_invertible(f, 3, &mut rng).unwrap(),
        )
        .unwrap();
        let back = m.inverse().unwrap().apply(&m.apply(&x).unwrap()).unwrap();
        assert_eq!(back, x);
        assert!(SandwichMap::new(MatrixF::zeros(f, 3, 3), MatrixF::identity(f, 3)).is_err());
    }

    #[test]
    fn composition_law() {
        // composite written left to right: φ_{a,b} then φ_{c,d} is φ_{ca,bd}
        let f = gf(1009);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let a = random_invertible(f, 3, &mut rng).unwrap();
            let b = random_invertible(f, 3, &mut rng).unwrap();
            let c = random_invertible(f, 3, &mut rng).unwrap();
            let d = random_invertible(f, 3, &mut rng).unwrap();
            let x = MatrixF::random(f, 3, 3, &mut rng);
            let outer = SandwichMap::new(a.clone(), b.clone()).unwrap();
            let inner = SandwichMap::new(c.clone(), d.clone()).unwrap();
            let nested = outer.apply(&inner.apply(&x).unwrap()).unwrap();
            let composed = outer.after(&inner).unwrap().apply(&x).unwrap();
            assert_eq!(nested, composed);
            let direct = x.sandwich(&a.mul(&c).unwrap(), &d.mul(&b).unwrap()).unwrap();
            assert_eq!(nested, direct);
            let first_ab = inner.apply(&outer.apply(&x).unwrap()).unwrap();
            let ca_bd = SandwichMap::new(c.mul(&a).unwrap(), b.mul(&d).unwrap()).unwrap();
            assert_eq!(first_ab, ca_bd.apply(&x).unwrap());
            assert_eq!(outer.then(&inner).unwrap(), ca_bd);
        }
    }

    #[test]
    fn single_generator_word_of_length_one() {
        let f = gf(7);
        let g = MatrixF::from_rows(f, &[[1, 1], [0, 1]]).unwrap();
        let gs = GeneratorSet::new(Side::A, f, 2, vec![g.clone()]).unwrap();
        let gi = g.inverse().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut seen = (false, false);
        for _ in 0..40 {
            let w = random_word(&gs, WordLength::new(1, 1).unwrap(), &mut rng).unwrap();
            assert!(w == g || w == gi);
            if w == g {
                seen.0 = true;
            } else {
                seen.1 = true;
            }
        }
        assert_eq!(seen, (true, true));
        let w = random_word(&gs, WordLength::new(0, 0).unwrap(), &mut rng).unwrap();
        assert!(w.is_identity());
    }

    #[test]
    fn words_are_reproducible_and_invertible() {
        let fx = make_block_fixture(2, 2, 2, 2, gf(1009), 11).unwrap();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_word(&fx.a_side, WordLength::default(), &mut rng).unwrap()
        };
        assert_eq!(draw(77), draw(77));
        assert!(draw(78).is_invertible());
    }

    #[test]
    fn empty_generator_set_rejected() {
        let f = gf(7);
        let gs = GeneratorSet::new(Side::B, f, 2, vec![]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            random_word(&gs, WordLength::default(), &mut rng),
            Err(Error::EmptyGeneratorSet)
        ));
        assert!(WordLength::new(4, 2).is_err());
    }

    #[test]
    fn word_length_parsing() {
        assert_eq!("3..8".parse::<WordLength>().unwrap(), WordLength::new(3, 8).unwrap());
        assert_eq!("3-8".parse::<WordLength>().unwrap(), WordLength::new(3, 8).unwrap());
        assert_eq!("2..=4".parse::<WordLength>().unwrap(), WordLength::new(2, 4).unwrap());
        assert_eq!("5".parse::<WordLength>().unwrap(), WordLength::new(5, 5).unwrap());
        assert!("x".parse::<WordLength>().is_err());
    }

    #[test]
    fn scalar_blocks_are_diagonal() {
        let fx = make_block_fixture(1, 1, 2, 2, gf(1009), 3).unwrap();
        for g in fx.a_side.gens().iter().chain(fx.b_side.gens()) {
            assert_eq!(g.get(0, 1), 0);
            assert_eq!(g.get(1, 0), 0);
        }
        fx.verify_commutation().unwrap();
    }

    #[test]
    fn block_fixture_sides_commute_but_a_is_not_abelian() {
        let fx = make_block_fixture(2, 2, 2, 2, gf(1009), 21).unwrap();
        let a = fx.a_side.gens();
        assert!(!a[0].commutes_with(&a[1]).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let wa = random_word(&fx.a_side, WordLength::default(), &mut rng).unwrap();
            let wb = random_word(&fx.b_side, WordLength::default(), &mut rng).unwrap();
            assert_eq!(wa.mul(&wb).unwrap(), wb.mul(&wa).unwrap());
        }
    }

    #[test]
    fn polynomial_fixture_is_commutative() {
        let f = gf(1009);
        let fx = make_polynomial_fixture(4, 2, f, 8).unwrap();
        fx.verify_commutative().unwrap();
        for g in fx.a_side.gens() {
            assert!(g.is_invertible());
        }
        let m = MatrixF::random(f, 4, 4, &mut ChaCha8Rng::seed_from_u64(0));
        assert!(eval_polynomial(&m, &[1]).unwrap().is_identity());
        let g = fx.a_side.union(&fx.b_side).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = random_word(&g, WordLength::default(), &mut rng).unwrap();
        let v = random_word(&g, WordLength::default(), &mut rng).unwrap();
        assert!(u.commutes_with(&v).unwrap());
    }

    #[test]
    fn non_commuting_sides_detected() {
        let mut fx = make_block_fixture(2, 2, 1, 1, gf(1009), 4).unwrap();
        fx.b_side = GeneratorSet::new(Side::B, fx.field, 4, vec![fx.h.clone()]).unwrap();
        assert!(matches!(fx.verify_commutation(), Err(Error::FixtureViolation(_))));
    }

    #[test]
    fn fixture_json_round_trip() {
        let fx = make_polynomial_fixture(3, 1, gf(1009), 5).unwrap();
        let back = ProtocolFixture::from_json(&fx.to_json()).unwrap();
        assert_eq!(back, fx);
    }
}
