//! B. and T. Harley: message transport over a commutative matrix group G.
//!
//! Bob publishes y·b. Alice, sending x, publishes (x·a, y·b·a1). Bob answers
//! (x·a·b1, y·a1·b2). Alice strips her factors and publishes x·b1 − y·b2,
//! from which Bob recovers x.

use rand::Rng;

use super::{draw, FixturePublic, HonestResult, PrivateLog, PrivateSampler, ProtocolId, RandomWords, Transcript};
use crate::error::{Error, Result};
use crate::linalg::VectorF;
use crate::platform::{ProtocolFixture, WordLength};
use crate::wire::Payload;

pub const HARLEY_LABELS: [&str; 6] = ["yb", "xa", "yba1", "xab1", "ya1b2", "xb1-yb2"];

pub fn run_harley<R: Rng + ?Sized>(
    fixture: &ProtocolFixture,
    x: &VectorF,
    len: WordLength,
    rng: &mut R,
) -> Result<HonestResult> {
    run_harley_with(fixture, x, &mut RandomWords::new(rng, len))
}

/// Bob's base vector y is taken from the fixture and stays private; the
/// transcript carries no h either.
pub fn run_harley_with(
    fixture: &ProtocolFixture,
    x: &VectorF,
    sampler: &mut dyn PrivateSampler,
) -> Result<HonestResult> {
    fixture.verify_commutative()?;
    let y = fixture
        .y
        .as_ref()
        .ok_or_else(|| Error::FixtureViolation("fixture carries no base vector y".into()))?;
    if x.len() != fixture.dimension || x.field() != fixture.field {
        return Err(Error::dims(fixture.dimension, x.len()));
    }
    let g = fixture.a_side.union(&fixture.b_side)?;
    let mut log = PrivateLog::default();
    log.record("x", Payload::Vector(x.clone()));
    log.record("y", Payload::Vector(y.clone()));
    let mut t = Transcript::new(ProtocolId::Harley, FixturePublic::from_fixture(fixture, false));

    let b = draw(sampler, &g, "b", &mut log)?;
    let yb = y.mul_mat(&b)?;
    t.publish("yb", Payload::Vector(yb.clone()));

    let a1 = draw(sampler, &g, "a1", &mut log)?;
    let a = draw(sampler, &g, "a", &mut log)?;
    let xa = x.mul_mat(&a)?;
    let yba1 = yb.mul_mat(&a1)?;
    t.publish("xa", Payload::Vector(xa.clone()));
    t.publish("yba1", Payload::Vector(yba1.clone()));

    let b1 = draw(sampler, &g, "b1", &mut log)?;
    let b2 = draw(sampler, &g, "b2", &mut log)?;
    let xab1 = xa.mul_mat(&b1)?;
    let ya1b2 = yba1.mul_mat(&b.inverse()?.mul(&b2)?)?;
    t.publish("xab1", Payload::Vector(xab1.clone()));
    t.publish("ya1b2", Payload::Vector(ya1b2.clone()));

    let xb1 = xab1.mul_mat(&a.inverse()?)?;
    let yb2 = ya1b2.mul_mat(&a1.inverse()?)?;
    let masked = xb1.sub(&yb2)?;
    t.publish("xb1-yb2", Payload::Vector(masked.clone()));

    // x − y·b2·b1⁻¹, then add back y·b2·b1⁻¹
    let b1_inv = b1.inverse()?;
    let unmasked = masked.mul_mat(&b1_inv)?;
    let recovered = unmasked.add(&y.mul_mat(&b2.mul(&b1_inv)?)?)?;
    Ok(HonestResult {
        transcript: t,
        key_alice: Payload::Vector(x.clone()),
        key_bob: Payload::Vector(recovered),
        private_log: log,
    })
}
