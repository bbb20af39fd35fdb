// Run a schedule described as data and attack it with a plan described as
// data: here a two-round exchange where each side applies one sandwich map.
//
// cargo run --example generic_plan

use lindecomp::attacks::{execute_plan, AttackPlan};
use lindecomp::linalg::Field;
use lindecomp::platform::{make_block_fixture, WordLength};
use lindecomp::protocols::{run_generic, Schedule};
use lindecomp::wire::Payload;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SCHEDULE: &str = r#"{
  "maps": [
    {"name": "a", "owner": "A", "kind": "sandwich"},
    {"name": "b", "owner": "B", "kind": "sandwich"}
  ],
  "rounds": [
    {"actor": "A", "source": "h", "apply": [{"map": "a", "exponent": 1}], "output": "ha"},
    {"actor": "B", "source": "h", "apply": [{"map": "b", "exponent": 1}], "output": "hb"}
  ],
  "key": [{"map": "a", "exponent": 1}, {"map": "b", "exponent": 1}]
}"#;

const PLAN: &str = r#"{
  "steps": [
    {"center": "h", "image": "ha", "owner": "A", "target": "hb", "name": "K"}
  ],
  "output": "K"
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let schedule = Schedule::from_json(SCHEDULE)?;
    let plan = AttackPlan::from_json(PLAN)?;
    let fx = make_block_fixture(2, 2, 2, 2, Field::new(1009)?, 13)?;
    let honest = run_generic(&fx, &schedule, WordLength::default(), &mut ChaCha8Rng::seed_from_u64(13))?;
    assert!(honest.keys_agree());

    let k = execute_plan(&honest.transcript, &plan)?;
    println!("plan output matches the honest key: {}", Payload::Matrix(k.clone()) == honest.key_alice);
    assert_eq!(Payload::Matrix(k), honest.key_alice);

    // The built-in Wang schedule and plan also go through the same path.
    let honest = run_generic(&fx, &Schedule::wang(), WordLength::default(), &mut ChaCha8Rng::seed_from_u64(14))?;
    let k = execute_plan(&honest.transcript, &AttackPlan::wang())?;
    assert_eq!(Payload::Matrix(k), honest.key_alice);
    Ok(())
}
