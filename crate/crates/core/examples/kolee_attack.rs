// Ko–Lee key recovery, on a random block fixture and on a small GF(5) case.
//
// cargo run --example kolee_attack

use lindecomp::attacks::attack_kolee;
use lindecomp::linalg::{Field, MatrixF};
use lindecomp::platform::{make_block_fixture, FixtureFamily, GeneratorSet, ProtocolFixture, Side, WordLength};
use lindecomp::protocols::{run_kolee, run_kolee_with, FixedPrivates};
use lindecomp::wire::Payload;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fx = make_block_fixture(2, 2, 2, 2, Field::new(1009)?, 3)?;
    let r = run_kolee(&fx, WordLength::default(), &mut ChaCha8Rng::seed_from_u64(3))?;
    let k = attack_kolee(&r.transcript)?;
    assert_eq!(Payload::Matrix(k), r.key_alice);
    println!("random instance: key recovered");

    // A = <diag(2,1)>, B = <diag(1,2)> over GF(5); a = diag(2,1), b = diag(1,4).
    let f = Field::new(5)?;
    let small = ProtocolFixture {
        family: FixtureFamily::Block,
        field: f,
        dimension: 2,
        a_side: GeneratorSet::new(Side::A, f, 2, vec![MatrixF::diagonal(f, &[2, 1])])?,
        b_side: GeneratorSet::new(Side::B, f, 2, vec![MatrixF::diagonal(f, &[1, 2])])?,
        h: MatrixF::from_rows(f, &[[1, 1], [1, 0]])?,
        y: None,
        seed: 0,
    };
    let mut privs = FixedPrivates::default()
        .with("a", MatrixF::diagonal(f, &[2, 1]))
        .with("b", MatrixF::diagonal(f, &[1, 4]));
    let r = run_kolee_with(&small, &mut privs)?;
    let k = attack_kolee(&r.transcript)?;
    println!("GF(5) key: {:?}", k.to_rows());
    assert_eq!(k, MatrixF::from_rows(f, &[[1, 3], [2, 0]])?);
    Ok(())
}
