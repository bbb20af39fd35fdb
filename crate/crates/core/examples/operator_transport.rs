// Transport a secret sandwich map to a new point without knowing it.
//
// Given u and v = a·u·b with a, b ∈ A, the operator decomposing v over
// Lin(A·u·A) sends c·u·d to a·c·u·d·b for any c, d ∈ B, since A and B
// commute elementwise.
//
// cargo run --example operator_transport

use lindecomp::decompose::derive_operator;
use lindecomp::linalg::Field;
use lindecomp::platform::{make_block_fixture, random_word, WordLength};
use lindecomp::span::span_closure;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fx = make_block_fixture(2, 2, 2, 2, Field::new(1009)?, 5)?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let len = WordLength::default();
    let (a, b) = (random_word(&fx.a_side, len, &mut rng)?, random_word(&fx.a_side, len, &mut rng)?);
    let (c, d) = (random_word(&fx.b_side, len, &mut rng)?, random_word(&fx.b_side, len, &mut rng)?);

    let u = &fx.h;
    let v = u.sandwich(&a, &b)?;
    let basis = span_closure(&fx.a_side, u)?;
    let op = derive_operator(&basis, &v)?;
    println!("operator has {} terms over a basis of dim {}", op.terms().len(), basis.dim());

    let w = u.sandwich(&c, &d)?;
    let transported = op.apply(&w)?;
    let expected = u.sandwich(&a.mul(&c)?, &d.mul(&b)?)?;
    assert_eq!(transported, expected);
    println!("op(c·u·d) == a·c·u·d·b: {}", transported == expected);
    Ok(())
}
