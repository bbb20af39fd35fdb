// Serialize a transcript, read it back, and attack the copy: the attack
// sees only what an eavesdropper would.
//
// cargo run --example transcript_roundtrip

use lindecomp::attacks::attack;
use lindecomp::linalg::Field;
use lindecomp::platform::{make_block_fixture, WordLength};
use lindecomp::protocols::{run_wang, Transcript};
use lindecomp::wire::KeyFile;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fx = make_block_fixture(2, 2, 2, 2, Field::new(1009)?, 17)?;
    let honest = run_wang(&fx, WordLength::default(), &mut ChaCha8Rng::seed_from_u64(17))?;

    let json = honest.transcript.to_json();
    println!("transcript: {} bytes, {} messages", json.len(), honest.transcript.messages().len());
    let copy = Transcript::from_json(&json)?;
    assert_eq!(copy, honest.transcript);

    let key = attack(&copy, None)?;
    let file = KeyFile::new("wang", fx.dimension, &key);
    println!("{}", file.to_json());
    assert_eq!(key, honest.key_alice);
    Ok(())
}
