// Read Alice's plaintext off a Harley transcript over a commutative group.
//
// cargo run --example harley_attack

use lindecomp::attacks::attack_harley;
use lindecomp::linalg::{Field, VectorF};
use lindecomp::platform::{make_polynomial_fixture, WordLength};
use lindecomp::protocols::run_harley;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fx = make_polynomial_fixture(4, 2, Field::new(1009)?, 8)?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let x = VectorF::from_i64(fx.field, &[104, 101, 108, 111]);
    let honest = run_harley(&fx, &x, WordLength::default(), &mut rng)?;
    assert!(honest.keys_agree());

    let recovered = attack_harley(&honest.transcript)?;
    println!("sent {:?}, recovered {:?}", x.values(), recovered.values());
    assert_eq!(recovered, x);
    Ok(())
}
