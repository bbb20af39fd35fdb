//! Ko–Lee et al., the conjugation analogue of Diffie–Hellman.
//!
//! Alice publishes h^a = a·h·a⁻¹, Bob publishes h^b = b·h·b⁻¹, and both
//! arrive at K = a·b·h·a⁻¹·b⁻¹ since a and b commute.

use rand::Rng;

use super::{draw, FixturePublic, HonestResult, PrivateLog, PrivateSampler, ProtocolId, RandomWords, Transcript};
use crate::error::Result;
use crate::platform::{ProtocolFixture, WordLength};
use crate::wire::Payload;

pub const KOLEE_LABELS: [&str; 3] = ["h", "ha", "hb"];

pub fn run_kolee<R: Rng + ?Sized>(
    fixture: &ProtocolFixture,
    len: WordLength,
    rng: &mut R,
) -> Result<HonestResult> {
    run_kolee_with(fixture, &mut RandomWords::new(rng, len))
}

pub fn run_kolee_with(
    fixture: &ProtocolFixture,
    sampler: &mut dyn PrivateSampler,
) -> Result<HonestResult> {
    fixture.verify_commutation()?;
    let h = &fixture.h;
    let mut log = PrivateLog::default();
    let mut t = Transcript::new(ProtocolId::Kolee, FixturePublic::from_fixture(fixture, true));
    t.publish("h", Payload::Matrix(h.clone()));

    let a = draw(sampler, &fixture.a_side, "a", &mut log)?;
    let a_inv = a.inverse()?;
    let ha = h.sandwich(&a, &a_inv)?;
    t.publish("ha", Payload::Matrix(ha.clone()));

    let b = draw(sampler, &fixture.b_side, "b", &mut log)?;
    let b_inv = b.inverse()?;
    let hb = h.sandwich(&b, &b_inv)?;
    t.publish("hb", Payload::Matrix(hb.clone()));

    let key_alice = hb.sandwich(&a, &a_inv)?;
    let key_bob = ha.sandwich(&b, &b_inv)?;
    Ok(HonestResult {
        transcript: t,
        key_alice: Payload::Matrix(key_alice),
        key_bob: Payload::Matrix(key_bob),
        private_log: log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{Field, MatrixF};
    use crate::platform::{make_block_fixture, FixtureFamily, GeneratorSet, Side};
    use crate::protocols::{FixedPrivates, IdentityPrivates};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// n=2, p=5, A=<diag(2,1)>, B=<diag(1,2)>, h=[[1,1],[1,0]].
    pub(crate) fn gf5_fixture() -> ProtocolFixture {
        let f = Field::new(5).unwrap();
        ProtocolFixture {
            family: FixtureFamily::Block,
            field: f,
            dimension: 2,
            a_side: GeneratorSet::new(Side::A, f, 2, vec![MatrixF::diagonal(f, &[2, 1])]).unwrap(),
            b_side: GeneratorSet::new(Side::B, f, 2, vec![MatrixF::diagonal(f, &[1, 2])]).unwrap(),
            h: MatrixF::from_rows(f, &[[1, 1], [1, 0]]).unwrap(),
            y: None,
            seed: 0,
        }
    }

    #[test]
    fn gf5_worked_instance() {
        let fx = gf5_fixture();
        let f = fx.field;
        let mut privs = FixedPrivates::default()
            .with("a", MatrixF::diagonal(f, &[2, 1]))
            .with("b", MatrixF::diagonal(f, &[1, 4]));
        let r = run_kolee_with(&fx, &mut privs).unwrap();
        // a·b·h·a⁻¹·b⁻¹ worked by hand mod 5
        let expected = MatrixF::from_rows(f, &[[1, 3], [2, 0]]).unwrap();
        assert_eq!(r.key_alice, Payload::Matrix(expected));
        assert!(r.keys_agree());
    }

    #[test]
    fn identity_privates_give_h() {
        let fx = make_block_fixture(2, 2, 1, 1, Field::new(1009).unwrap(), 1).unwrap();
        let r = run_kolee_with(&fx, &mut IdentityPrivates).unwrap();
        assert_eq!(r.key_alice, Payload::Matrix(fx.h.clone()));
    }

    #[test]
    fn keys_agree_on_random_runs() {
        let fx = make_block_fixture(2, 2, 2, 2, Field::new(1009).unwrap(), 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            assert!(run_kolee(&fx, WordLength::default(), &mut rng).unwrap().keys_agree());
        }
    }
}
