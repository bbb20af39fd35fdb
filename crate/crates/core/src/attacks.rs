//! Key recovery from public transcripts.
//!
//! One [`AttackStep`] is one use of the transport rule: a known public pair
//! (center -> image) of a secret sandwich map over the owner's subgroup, plus
//! a target in the double coset of the center under the *other* subgroup,
//! yields the image of the target under the same secret map.
//!
//! Attack entry points take a [`Transcript`] and nothing else.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::decompose::{derive_operator, derive_right_operator};
use crate::error::{Error, Result};
use crate::linalg::{MatrixF, VectorF};
use crate::platform::Side;
use crate::protocols::{ProtocolId, Transcript};
use crate::span::{orbit_closure, span_closure, SandwichBasis};
use crate::wire::Payload;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackStep {
    /// Label of the known input u.
    pub center: String,
    /// Label of the known output v = φ(u).
    pub image: String,
    /// Subgroup the secret map's factors come from.
    pub owner: Side,
    /// Element to push through φ; must lie in (other side)·u·(other side).
    pub target: String,
    /// Name under which the result is available to later steps.
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackPlan {
    pub steps: Vec<AttackStep>,
    pub output: String,
}

fn step(center: &str, image: &str, owner: Side, target: &str, name: &str) -> AttackStep {
    AttackStep {
        center: center.to_string(),
        image: image.to_string(),
        owner,
        target: target.to_string(),
        name: name.to_string(),
    }
}

impl AttackPlan {
    /// Three transports: (z -> v) over B on y gives f1·h·f2; (h -> x) over A
    /// on that gives d1·c1·f1·h·f2·c2·d2; (w -> u) over A on that gives K.
    pub fn wang() -> Self {
        AttackPlan {
            steps: vec![
                step("z", "v", Side::B, "y", "f1hf2"),
                step("h", "x", Side::A, "f1hf2", "d1c1f1hf2c2d2"),
                step("w", "u", Side::A, "d1c1f1hf2c2d2", "K"),
            ],
            output: "K".into(),
        }
    }

    /// One transport: (h -> h^a) over A on h^b.
    pub fn kolee() -> Self {
        AttackPlan {
            steps: vec![step("h", "ha", Side::A, "hb", "K")],
            output: "K".into(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serializes")
    }

    /// Checks that every reference resolves to a transcript label or an
    /// earlier step, that names are fresh, and that the output is produced.
    pub fn validate(&self, t: &Transcript) -> Result<()> {
        let mut known: HashSet<&str> = t.messages().iter().map(|m| m.label.as_str()).collect();
        let mut produced = HashSet::new();
        for (i, s) in self.steps.iter().enumerate() {
            for (role, r) in [("center", &s.center), ("image", &s.image), ("target", &s.target)] {
                if !known.contains(r.as_str()) {
                    return Err(Error::InvalidPlan(format!(
                        "step {i} ({}): {role} {r:?} does not resolve",
                        s.name
                    )));
                }
            }
            if !known.insert(s.name.as_str()) {
                return Err(Error::InvalidPlan(format!(
                    "step {i}: name {:?} is already taken",
                    s.name
                )));
            }
            produced.insert(s.name.as_str());
        }
        if !produced.contains(self.output.as_str()) {
            return Err(Error::InvalidPlan(format!(
                "output {:?} is not produced by any step",
                self.output
            )));
        }
        Ok(())
    }
}

/// Work done by one plan execution.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AttackStats {
    pub spans_built: usize,
    pub operators_derived: usize,
    pub basis_dims: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct AttackOutcome {
    pub result: MatrixF,
    pub stats: AttackStats,
}

pub fn execute_plan(t: &Transcript, plan: &AttackPlan) -> Result<MatrixF> {
    Ok(execute_plan_with_stats(t, plan)?.result)
}

pub fn execute_plan_with_stats(t: &Transcript, plan: &AttackPlan) -> Result<AttackOutcome> {
    plan.validate(t)?;
    let mut values: HashMap<String, MatrixF> = HashMap::new();
    for m in t.messages() {
        if let Some(mat) = m.payload.as_matrix() {
            values.insert(m.label.clone(), mat.clone());
        }
    }
    let mut cache: HashMap<(Side, String), SandwichBasis> = HashMap::new();
    let mut stats = AttackStats::default();

    for (i, s) in plan.steps.iter().enumerate() {
        let fail = |reason: String| Error::AttackFailed {
            step: i,
            name: s.name.clone(),
            reason,
        };
        let lookup = |label: &str| {
            values
                .get(label)
                .cloned()
                .ok_or_else(|| Error::InvalidPlan(format!("{label:?} is not a matrix")))
        };
        let center = lookup(&s.center)?;
        let image = lookup(&s.image)?;
        let target = lookup(&s.target)?;
        let key = (s.owner, s.center.clone());
        if !cache.contains_key(&key) {
            let basis = span_closure(t.public.side(s.owner), &center)
                .map_err(|e| fail(format!("span closure: {e}")))?;
            stats.spans_built += 1;
            stats.basis_dims.push(basis.dim());
            cache.insert(key.clone(), basis);
        }
        let op = derive_operator(&cache[&key], &image).map_err(|e| match e {
            Error::NotInSpan => fail(format!(
                "{:?} is not in Lin({1}·{2:?}·{1})",
                s.image, s.owner, s.center
            )),
            e => fail(e.to_string()),
        })?;
        stats.operators_derived += 1;
        let out = op.apply(&target).map_err(|e| fail(e.to_string()))?;
        values.insert(s.name.clone(), out);
    }
    Ok(AttackOutcome {
        result: values.remove(&plan.output).expect("validated"),
        stats,
    })
}

fn expect_protocol(t: &Transcript, id: ProtocolId) -> Result<()> {
    if t.protocol != id {
        return Err(Error::InvalidPlan(format!(
            "expected a {id} transcript, got {}",
            t.protocol
        )));
    }
    Ok(())
}

pub fn attack_wang(t: &Transcript) -> Result<MatrixF> {
    expect_protocol(t, ProtocolId::Wang)?;
    execute_plan(t, &AttackPlan::wang())
}

pub fn attack_kolee(t: &Transcript) -> Result<MatrixF> {
    expect_protocol(t, ProtocolId::Kolee)?;
    execute_plan(t, &AttackPlan::kolee())
}

/// Recovers Alice's plaintext x.
///
/// With G commutative, (y·b·a1 -> y·b) is a public pair of right
/// multiplication by a1⁻¹ and (x·a·b1 -> x·a) one of b1⁻¹. The first
/// operator turns y·a1·b2 into y·b2; the second, being linear, sends
/// (x·b1 − y·b2) + y·b2 = x·b1 to x.
pub fn attack_harley(t: &Transcript) -> Result<VectorF> {
    expect_protocol(t, ProtocolId::Harley)?;
    let g = t.public.a_side.union(&t.public.b_side)?;
    let fail = |step: usize, name: &str, e: Error| Error::AttackFailed {
        step,
        name: name.to_string(),
        reason: e.to_string(),
    };

    let yba1 = t.vector("yba1")?;
    let undo_a1 = orbit_closure(&g, yba1)
        .and_then(|basis| derive_right_operator(&basis, t.vector("yb")?))
        .map_err(|e| fail(0, "yb2", e))?;
    let yb2 = undo_a1.apply(t.vector("ya1b2")?)?;

    let xab1 = t.vector("xab1")?;
    if xab1.is_zero() {
        // a and b1 are invertible, so x·a·b1 = 0 forces x = 0
        return Ok(xab1.clone());
    }
    let undo_b1 = orbit_closure(&g, xab1)
        .and_then(|basis| derive_right_operator(&basis, t.vector("xa")?))
        .map_err(|e| fail(1, "x", e))?;
    let xb1 = t.vector("xb1-yb2")?.add(&yb2)?;
    undo_b1.apply(&xb1)
}

/// Runs the built-in attack for fixed protocols, or `plan` when given.
/// Generic transcripts need a plan.
pub fn attack(t: &Transcript, plan: Option<&AttackPlan>) -> Result<Payload> {
    if let Some(plan) = plan {
        return Ok(Payload::Matrix(execute_plan(t, plan)?));
    }
    match t.protocol {
        ProtocolId::Wang => attack_wang(t).map(Payload::Matrix),
        ProtocolId::Kolee => attack_kolee(t).map(Payload::Matrix),
        ProtocolId::Harley => attack_harley(t).map(Payload::Vector),
        ProtocolId::Generic => Err(Error::InvalidPlan(
            "generic transcripts need an attack plan".into(),
        )),
    }
}
