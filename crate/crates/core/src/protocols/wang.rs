//! Wang et al., protocol 1.
//!
//! Alice: x = d1·c1·h·c2·d2.
//! Bob:   y = g1·f1·h·f2·g2,  w = g3·f1·x·f2·g4.
//! Alice: z = d3·c1·y·c2·d4,  u = d1⁻¹·w·d2⁻¹.
//! Bob:   v = g1⁻¹·z·g2⁻¹.
//! Key:   K = d3⁻¹·v·d4⁻¹ = g3⁻¹·u·g4⁻¹ = c1·f1·h·f2·c2.

use rand::Rng;

use super::{draw, FixturePublic, HonestResult, PrivateLog, PrivateSampler, ProtocolId, RandomWords, Transcript};
use crate::error::Result;
use crate::platform::{ProtocolFixture, WordLength};
use crate::wire::Payload;

pub const WANG_LABELS: [&str; 7] = ["h", "x", "y", "w", "z", "u", "v"];

pub fn run_wang<R: Rng + ?Sized>(
    fixture: &ProtocolFixture,
    len: WordLength,
    rng: &mut R,
) -> Result<HonestResult> {
    run_wang_with(fixture, &mut RandomWords::new(rng, len))
}

pub fn run_wang_with(
    fixture: &ProtocolFixture,
    sampler: &mut dyn PrivateSampler,
) -> Result<HonestResult> {
    fixture.verify_commutation()?;
    let (a, b) = (&fixture.a_side, &fixture.b_side);
    let h = &fixture.h;
    let mut log = PrivateLog::default();
    let mut t = Transcript::new(ProtocolId::Wang, FixturePublic::from_fixture(fixture, true));
    t.publish("h", Payload::Matrix(h.clone()));

    let c1 = draw(sampler, a, "c1", &mut log)?;
    let c2 = draw(sampler, a, "c2", &mut log)?;
    let d1 = draw(sampler, a, "d1", &mut log)?;
    let d2 = draw(sampler, a, "d2", &mut log)?;
    let x = h.sandwich(&d1.mul(&c1)?, &c2.mul(&d2)?)?;
    t.publish("x", Payload::Matrix(x.clone()));

    let f1 = draw(sampler, b, "f1", &mut log)?;
    let f2 = draw(sampler, b, "f2", &mut log)?;
    let g1 = draw(sampler, b, "g1", &mut log)?;
    let g2 = draw(sampler, b, "g2", &mut log)?;
    let g3 = draw(sampler, b, "g3", &mut log)?;
    let g4 = draw(sampler, b, "g4", &mut log)?;
    let y = h.sandwich(&g1.mul(&f1)?, &f2.mul(&g2)?)?;
    let w = x.sandwich(&g3.mul(&f1)?, &f2.mul(&g4)?)?;
    t.publish("y", Payload::Matrix(y.clone()));
    t.publish("w", Payload::Matrix(w.clone()));

    let d3 = draw(sampler, a, "d3", &mut log)?;
    let d4 = draw(sampler, a, "d4", &mut log)?;
    let z = y.sandwich(&d3.mul(&c1)?, &c2.mul(&d4)?)?;
    let u = w.sandwich(&d1.inverse()?, &d2.inverse()?)?;
    t.publish("z", Payload::Matrix(z.clone()));
    t.publish("u", Payload::Matrix(u.clone()));

    let v = z.sandwich(&g1.inverse()?, &g2.inverse()?)?;
    t.publish("v", Payload::Matrix(v.clone()));

    let key_alice = v.sandwich(&d3.inverse()?, &d4.inverse()?)?;
    let key_bob = u.sandwich(&g3.inverse()?, &g4.inverse()?)?;
    Ok(HonestResult {
        transcript: t,
        key_alice: Payload::Matrix(key_alice),
        key_bob: Payload::Matrix(key_bob),
        private_log: log,
    })
}
