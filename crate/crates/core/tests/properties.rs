//! Cross-module properties: attack soundness on both fixture families,
//! transcript privacy, structural bounds and determinism.

use lindecomp::attacks::{attack, attack_harley, execute_plan, AttackPlan};
use lindecomp::linalg::{Field, MatrixF, VectorF};
use lindecomp::platform::{
    make_block_fixture, make_polynomial_fixture, random_word, ProtocolFixture, WordLength,
};
use lindecomp::protocols::{run_generic, run_harley, run_kolee, run_wang, HonestResult, Schedule};
use lindecomp::span::{orbit_closure, span_closure};
use lindecomp::wire::Payload;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn family(poly: bool, seed: u64) -> ProtocolFixture {
    let f = Field::new(1009).unwrap();
    if poly {
        make_polynomial_fixture(4, 2, f, seed).unwrap()
    } else {
        make_block_fixture(2, 2, 2, 2, f, seed).unwrap()
    }
}

fn assert_private_absent(r: &HonestResult) {
    for (name, p) in r.private_log.iter() {
        if let Payload::Matrix(m) = p {
            if m.is_identity() {
                continue;
            }
            for msg in r.transcript.messages() {
                assert_ne!(msg.payload.as_matrix(), Some(m), "private {name} published as {}", msg.label);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn fixed_protocol_attacks_are_sound(seed in any::<u64>(), poly in any::<bool>()) {
        let fx = family(poly, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for r in [
            run_wang(&fx, WordLength::default(), &mut rng).unwrap(),
            run_kolee(&fx, WordLength::default(), &mut rng).unwrap(),
        ] {
            prop_assert!(r.keys_agree());
            prop_assert_eq!(attack(&r.transcript, None).unwrap(), r.key_alice.clone());
            assert_private_absent(&r);
        }
    }

    #[test]
    fn generic_schedules_are_sound(seed in any::<u64>(), poly in any::<bool>()) {
        let fx = family(poly, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (sch, plan) in [(Schedule::wang(), AttackPlan::wang()), (Schedule::kolee(), AttackPlan::kolee())] {
            let r = run_generic(&fx, &sch, WordLength::default(), &mut rng).unwrap();
            prop_assert!(r.keys_agree());
            prop_assert_eq!(Payload::Matrix(execute_plan(&r.transcript, &plan).unwrap()), r.key_alice.clone());
        }
    }

    #[test]
    fn harley_attack_is_sound(seed in any::<u64>(), x in prop::collection::vec(0u64..1009, 4)) {
        let fx = family(true, seed);
        let x = VectorF::from_values(fx.field, x);
        let r = run_harley(&fx, &x, WordLength::default(), &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert!(r.keys_agree());
        prop_assert_eq!(attack_harley(&r.transcript).unwrap(), x);
        assert_private_absent(&r);
    }

    #[test]
    fn closure_bounds_and_certificate(seed in any::<u64>(), n1 in 1usize..3, n2 in 1usize..3, k in 1usize..3) {
        let f = Field::new(1009).unwrap();
        let fx = make_block_fixture(n1, n2, k, k, f, seed).unwrap();
        let n = n1 + n2;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for side in [&fx.a_side, &fx.b_side] {
            let basis = span_closure(side, &fx.h).unwrap();
            prop_assert!(basis.productive_list_count() <= n * n);
            prop_assert!(basis.dim() <= n * n);
            prop_assert!(basis.closure_holds(side).unwrap());
            prop_assert!(basis.multipliers_consistent().unwrap());
            // random group elements on both sides keep values inside the span
            let a = random_word(side, WordLength::default(), &mut rng).unwrap();
            let b = random_word(side, WordLength::default(), &mut rng).unwrap();
            for e in basis.entries() {
                prop_assert!(basis.span().contains(&e.value.sandwich(&a, &b).unwrap()).unwrap());
            }
        }
        let v = VectorF::random(f, n, &mut rng);
        if !v.is_zero() {
            let g = fx.a_side.union(&fx.b_side).unwrap();
            let orbit = orbit_closure(&g, &v).unwrap();
            prop_assert!(orbit.stats().productive_lists <= n);
            prop_assert!(orbit.closure_holds(&g).unwrap());
        }
    }

    #[test]
    fn runs_are_deterministic(seed in any::<u64>()) {
        let fx = family(false, seed);
        let a = run_wang(&fx, WordLength::default(), &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let b = run_wang(&fx, WordLength::default(), &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(a.transcript.to_json(), b.transcript.to_json());
        prop_assert_eq!(a.key_alice, b.key_alice);
    }

    #[test]
    fn tampered_wang_messages_never_succeed_silently(seed in any::<u64>(), pick in 0usize..7) {
        let fx = family(false, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = run_wang(&fx, WordLength::default(), &mut rng).unwrap();
        let mut t = r.transcript.clone();
        let label = t.messages()[pick].label.clone();
        let junk = MatrixF::random(fx.field, 4, 4, &mut rng);
        t.replace(&label, Payload::Matrix(junk)).unwrap();
        if let Ok(k) = attack(&t, None) {
            prop_assert_ne!(k, r.key_alice);
        }
    }
}
