// Recover the Wang et al. shared key from its seven public messages.
//
// cargo run --example wang_attack

use lindecomp::attacks::{execute_plan_with_stats, AttackPlan};
use lindecomp::linalg::Field;
use lindecomp::platform::{make_block_fixture, WordLength};
use lindecomp::protocols::run_wang;
use lindecomp::wire::Payload;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fx = make_block_fixture(2, 2, 2, 2, Field::new(1009)?, 21)?;
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let honest = run_wang(&fx, WordLength::default(), &mut rng)?;
    assert!(honest.keys_agree());

    let out = execute_plan_with_stats(&honest.transcript, &AttackPlan::wang())?;
    println!(
        "derived {} operators over spans of dims {:?}",
        out.stats.operators_derived, out.stats.basis_dims
    );
    let ok = Payload::Matrix(out.result) == honest.key_alice;
    println!("recovered key matches: {ok}");
    assert!(ok);
    Ok(())
}
