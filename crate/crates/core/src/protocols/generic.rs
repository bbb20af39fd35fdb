//! The general two-sided scheme.
//!
//! A [`Schedule`] declares the secret sandwich maps of both correspondents,
//! the publication rounds (each applies a word of its actor's own maps to a
//! public element), and the key as a word of maps applied to h.
//!
//! Because Alice's and Bob's maps commute, every published element is
//! determined by the pair (Alice's word, Bob's word) applied to h. A party
//! can compute the key from any message whose other-side word equals the
//! key's other-side word: it undoes its own part of that message and applies
//! its own part of the key.

use std::collections::{HashMap, HashSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{draw, FixturePublic, HonestResult, PrivateLog, PrivateSampler, ProtocolId, RandomWords, Transcript};
use crate::error::{Error, Result};
use crate::linalg::MatrixF;
use crate::platform::{ProtocolFixture, SandwichMap, Side, WordLength};
use crate::wire::Payload;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    /// f -> l·f·r with independent private l, r.
    Sandwich,
    /// f -> c·f·c⁻¹.
    Conjugation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapSpec {
    pub name: String,
    pub owner: Side,
    pub kind: MapKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapUse {
    pub map: String,
    pub exponent: i32,
}

impl MapUse {
    pub fn fwd(map: &str) -> Self {
        MapUse {
            map: map.to_string(),
            exponent: 1,
        }
    }

    pub fn inv(map: &str) -> Self {
        MapUse {
            map: map.to_string(),
            exponent: -1,
        }
    }

    fn inverted(&self) -> Self {
        MapUse {
            map: self.map.clone(),
            exponent: -self.exponent,
        }
    }
}

/// One publication: `output = apply[k] ∘ … ∘ apply[0] (source)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round {
    pub actor: Side,
    pub source: String,
    pub apply: Vec<MapUse>,
    pub output: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub maps: Vec<MapSpec>,
    pub rounds: Vec<Round>,
    /// Maps applied to h, innermost first.
    pub key: Vec<MapUse>,
}

fn map(name: &str, owner: Side, kind: MapKind) -> MapSpec {
    MapSpec {
        name: name.to_string(),
        owner,
        kind,
    }
}

fn round(actor: Side, source: &str, apply: Vec<MapUse>, output: &str) -> Round {
    Round {
        actor,
        source: source.to_string(),
        apply,
        output: output.to_string(),
    }
}

impl Schedule {
    pub fn from_json(s: &str) -> Result<Self> {
        let sched: Schedule = serde_json::from_str(s)?;
        sched.validate()?;
        Ok(sched)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schedule serializes")
    }

    /// Alice publishes one sandwich image of h, which is also the key.
    pub fn single() -> Self {
        Schedule {
            maps: vec![map("P", Side::A, MapKind::Sandwich)],
            rounds: vec![round(Side::A, "h", vec![MapUse::fwd("P")], "m1")],
            key: vec![MapUse::fwd("P")],
        }
    }

    /// Two conjugation rounds; samples and publishes exactly like the Ko–Lee run.
    pub fn kolee() -> Self {
        Schedule {
            maps: vec![
                map("a", Side::A, MapKind::Conjugation),
                map("b", Side::B, MapKind::Conjugation),
            ],
            rounds: vec![
                round(Side::A, "h", vec![MapUse::fwd("a")], "ha"),
                round(Side::B, "h", vec![MapUse::fwd("b")], "hb"),
            ],
            key: vec![MapUse::fwd("b"), MapUse::fwd("a")],
        }
    }

    /// The Wang et al. message flow; samples and publishes exactly like the
    /// Wang run (C = (c1,c2), D1 = (d1,d2), F = (f1,f2), G12 = (g1,g2),
    /// G34 = (g3,g4), D3 = (d3,d4)).
    pub fn wang() -> Self {
        use MapKind::Sandwich;
        Schedule {
            maps: vec![
                map("C", Side::A, Sandwich),
                map("D1", Side::A, Sandwich),
                map("F", Side::B, Sandwich),
                map("G12", Side::B, Sandwich),
                map("G34", Side::B, Sandwich),
                map("D3", Side::A, Sandwich),
            ],
            rounds: vec![
                round(Side::A, "h", vec![MapUse::fwd("C"), MapUse::fwd("D1")], "x"),
                round(Side::B, "h", vec![MapUse::fwd("F"), MapUse::fwd("G12")], "y"),
                round(Side::B, "x", vec![MapUse::fwd("F"), MapUse::fwd("G34")], "w"),
                round(Side::A, "y", vec![MapUse::fwd("C"), MapUse::fwd("D3")], "z"),
                round(Side::A, "w", vec![MapUse::inv("D1")], "u"),
                round(Side::B, "z", vec![MapUse::inv("G12")], "v"),
            ],
            key: vec![MapUse::fwd("F"), MapUse::fwd("C")],
        }
    }

    fn spec(&self, name: &str) -> Result<&MapSpec> {
        self.maps
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| Error::InvalidSchedule(format!("unknown map {name:?}")))
    }

    /// Structural checks. Also rejects schedules in which some map of the key
    /// never appears in a publication (its action would never be public).
    pub fn validate(&self) -> Result<()> {
        let mut names = HashSet::new();
        for m in &self.maps {
            if !names.insert(m.name.as_str()) {
                return Err(Error::InvalidSchedule(format!("duplicate map {:?}", m.name)));
            }
        }
        let check_use = |u: &MapUse| -> Result<&MapSpec> {
            if u.exponent != 1 && u.exponent != -1 {
                return Err(Error::InvalidSchedule(format!(
                    "exponent of {:?} must be ±1",
                    u.map
                )));
            }
            self.spec(&u.map)
        };
        let mut labels: HashSet<&str> = HashSet::from(["h"]);
        let mut published = HashSet::new();
        for (i, r) in self.rounds.iter().enumerate() {
            if !labels.contains(r.source.as_str()) {
                return Err(Error::InvalidSchedule(format!(
                    "round {i} reads unknown label {:?}",
                    r.source
                )));
            }
            if r.apply.is_empty() {
                return Err(Error::InvalidSchedule(format!("round {i} applies no map")));
            }
            for u in &r.apply {
                let spec = check_use(u)?;
                if spec.owner != r.actor {
                    return Err(Error::InvalidSchedule(format!(
                        "round {i}: side {} applies map {:?} owned by {}",
                        r.actor, u.map, spec.owner
                    )));
                }
                published.insert(u.map.as_str());
            }
            if !labels.insert(r.output.as_str()) {
                return Err(Error::InvalidSchedule(format!(
                    "round {i} reuses label {:?}",
                    r.output
                )));
            }
        }
        for u in &self.key {
            check_use(u)?;
            if !published.contains(u.map.as_str()) {
                return Err(Error::InvalidSchedule(format!(
                    "key uses map {:?}, which no round publishes",
                    u.map
                )));
            }
        }
        Ok(())
    }
}

type Word = Vec<MapUse>;

fn push_reduced(word: &mut Word, u: MapUse) {
    if word
        .last()
        .is_some_and(|l| l.map == u.map && l.exponent == -u.exponent)
    {
        word.pop();
    } else {
        word.push(u);
    }
}

#[derive(Clone, Default)]
struct Words {
    a: Word,
    b: Word,
}

impl Words {
    fn side(&self, s: Side) -> &Word {
        match s {
            Side::A => &self.a,
            Side::B => &self.b,
        }
    }

    fn side_mut(&mut self, s: Side) -> &mut Word {
        match s {
            Side::A => &mut self.a,
            Side::B => &mut self.b,
        }
    }
}

pub fn run_generic<R: Rng + ?Sized>(
    fixture: &ProtocolFixture,
    schedule: &Schedule,
    len: WordLength,
    rng: &mut R,
) -> Result<HonestResult> {
    run_generic_with(fixture, schedule, &mut RandomWords::new(rng, len))
}

pub fn run_generic_with(
    fixture: &ProtocolFixture,
    schedule: &Schedule,
    sampler: &mut dyn PrivateSampler,
) -> Result<HonestResult> {
    schedule.validate()?;
    fixture.verify_commutation()?;
    let mut log = PrivateLog::default();
    let mut secrets: HashMap<&str, SandwichMap> = HashMap::new();
    for m in &schedule.maps {
        let side = match m.owner {
            Side::A => &fixture.a_side,
            Side::B => &fixture.b_side,
        };
        let sm = match m.kind {
            MapKind::Sandwich => {
                let l = draw(sampler, side, &format!("{}.left", m.name), &mut log)?;
                let r = draw(sampler, side, &format!("{}.right", m.name), &mut log)?;
                SandwichMap::new(l, r)?
            }
            MapKind::Conjugation => {
                let c = draw(sampler, side, &m.name, &mut log)?;
                let ci = c.inverse()?;
                SandwichMap::new(c, ci)?
            }
        };
        secrets.insert(m.name.as_str(), sm);
    }
    let apply = |u: &MapUse, f: &MatrixF| -> Result<MatrixF> {
        let sm = &secrets[u.map.as_str()];
        if u.exponent == 1 {
            sm.apply(f)
        } else {
            sm.inverse()?.apply(f)
        }
    };
    let owner = |u: &MapUse| schedule.spec(&u.map).map(|s| s.owner);

    let mut t = Transcript::new(ProtocolId::Generic, FixturePublic::from_fixture(fixture, true));
    t.publish("h", Payload::Matrix(fixture.h.clone()));
    let mut state: Vec<(String, MatrixF, Words)> =
        vec![("h".to_string(), fixture.h.clone(), Words::default())];

    for r in &schedule.rounds {
        let (_, src, words) = state
            .iter()
            .find(|(l, _, _)| *l == r.source)
            .expect("validated");
        let mut value = src.clone();
        let mut words = words.clone();
        for u in &r.apply {
            value = apply(u, &value)?;
            push_reduced(words.side_mut(owner(u)?), u.clone());
        }
        t.publish(&r.output, Payload::Matrix(value.clone()));
        state.push((r.output.clone(), value, words));
    }

    let mut key_words = Words::default();
    for u in &schedule.key {
        push_reduced(key_words.side_mut(owner(u)?), u.clone());
    }

    let compute = |me: Side| -> Result<MatrixF> {
        let other = me.other();
        let (_, value, words) = state
            .iter()
            .find(|(_, _, w)| w.side(other) == key_words.side(other))
            .ok_or_else(|| {
                Error::InvalidSchedule(format!(
                    "side {me} has no public element to finish the key from"
                ))
            })?;
        let mine = words.side(me);
        let target = key_words.side(me);
        let common = mine
            .iter()
            .zip(target)
            .take_while(|(x, y)| x == y)
            .count();
        let mut k = value.clone();
        for u in mine[common..].iter().rev() {
            k = apply(&u.inverted(), &k)?;
        }
        for u in &target[common..] {
            k = apply(u, &k)?;
        }
        Ok(k)
    };

    let key_alice = compute(Side::A)?;
    let key_bob = compute(Side::B)?;
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
    use crate::linalg::Field;
    use crate::platform::make_block_fixture;
    use crate::protocols::{run_kolee, run_wang, IdentityPrivates};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fixture(seed: u64) -> ProtocolFixture {
        make_block_fixture(2, 2, 2, 2, Field::new(1009).unwrap(), seed).unwrap()
    }

    #[test]
    fn single_round_publishes_one_sandwich() {
        let fx = fixture(1);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = run_generic(&fx, &Schedule::single(), WordLength::default(), &mut rng).unwrap();
        assert_eq!(r.transcript.messages().len(), 2);
        let l = r.private_log.matrix("P.left").unwrap();
        let rr = r.private_log.matrix("P.right").unwrap();
        let m1 = fx.h.sandwich(l, rr).unwrap();
        assert_eq!(r.transcript.matrix("m1").unwrap(), &m1);
        assert!(r.keys_agree());
        assert_eq!(r.key_alice, Payload::Matrix(m1));
    }

    #[test]
    fn conjugation_schedule_reproduces_kolee() {
        let fx = fixture(2);
        let len = WordLength::default();
        let g = run_generic(&fx, &Schedule::kolee(), len, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let k = run_kolee(&fx, len, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(g.transcript.messages(), k.transcript.messages());
        assert_eq!(g.key_alice, k.key_alice);
        assert!(g.keys_agree());
    }

    #[test]
    fn wang_schedule_reproduces_wang() {
        let fx = fixture(3);
        let len = WordLength::default();
        for seed in 0..5 {
            let g = run_generic(&fx, &Schedule::wang(), len, &mut ChaCha8Rng::seed_from_u64(seed))
                .unwrap();
            let w = run_wang(&fx, len, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            assert_eq!(g.transcript.messages(), w.transcript.messages());
            assert_eq!(g.key_alice, w.key_alice);
            assert!(g.keys_agree());
        }
    }

    #[test]
    fn identity_secrets_give_h() {
        let fx = fixture(4);
        let r = run_generic_with(&fx, &Schedule::wang(), &mut IdentityPrivates).unwrap();
        assert_eq!(r.key_alice, Payload::Matrix(fx.h.clone()));
    }

    #[test]
    fn rejects_malformed_schedules() {
        let mut s = Schedule::kolee();
        s.rounds[0].actor = Side::B;
        assert!(matches!(s.validate(), Err(Error::InvalidSchedule(_))));

        let mut s = Schedule::kolee();
        s.rounds[1].source = "nope".into();
        assert!(s.validate().is_err());

        let mut s = Schedule::kolee();
        s.rounds[1].output = "ha".into();
        assert!(s.validate().is_err());

        let mut s = Schedule::kolee();
        s.key[0].exponent = 2;
        assert!(s.validate().is_err());

        // key map whose action never appears as a public pair
        let mut s = Schedule::kolee();
        s.maps.push(map("z", Side::A, MapKind::Sandwich));
        s.key.push(MapUse::fwd("z"));
        assert!(s.validate().is_err());
    }

    #[test]
    fn rejects_key_no_party_can_finish() {
        // no public element carries Bob's part b∘b of the key
        let s = Schedule {
            maps: vec![
                map("a", Side::A, MapKind::Sandwich),
                map("b", Side::B, MapKind::Sandwich),
            ],
            rounds: vec![
                round(Side::A, "h", vec![MapUse::fwd("a")], "m1"),
                round(Side::B, "h", vec![MapUse::fwd("b")], "m2"),
            ],
            key: vec![MapUse::fwd("b"), MapUse::fwd("b")],
        };
        s.validate().unwrap();
        let fx = fixture(5);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert!(matches!(
            run_generic(&fx, &s, WordLength::default(), &mut rng),
            Err(Error::InvalidSchedule(_))
        ));
    }

    #[test]
    fn schedule_json_round_trip() {
        let s = Schedule::wang();
        assert_eq!(Schedule::from_json(&s.to_json()).unwrap(), s);
        assert!(Schedule::from_json("{\"maps\": [}").is_err());
    }
}
