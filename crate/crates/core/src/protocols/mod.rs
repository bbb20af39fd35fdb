//! Honest simulators of the key exchange protocols.
//!
//! Every run produces a [`Transcript`] holding public data only, together
//! with the keys each correspondent derives and a log of the private
//! elements. The attacks take a [`Transcript`] and nothing else.

mod generic;
mod harley;
mod kolee;
mod transcript;
mod wang;

use std::collections::HashMap;

use rand::Rng;

pub use generic::{run_generic, run_generic_with, MapKind, MapSpec, MapUse, Round, Schedule};
pub use harley::{run_harley, run_harley_with, HARLEY_LABELS};
pub use kolee::{run_kolee, run_kolee_with, KOLEE_LABELS};
pub use transcript::{FixturePublic, Message, ProtocolId, Transcript};
pub use wang::{run_wang, run_wang_with, WANG_LABELS};

use crate::error::{Error, Result};
use crate::linalg::MatrixF;
use crate::platform::{random_word, GeneratorSet, WordLength};
use crate::wire::Payload;

/// Source of the correspondents' private group elements.
pub trait PrivateSampler {
    /// Draws the private element called `name` from the subgroup `side`.
    fn sample(&mut self, side: &GeneratorSet, name: &str) -> Result<MatrixF>;
}

/// Random words of the configured length, drawn from a caller-owned RNG.
pub struct RandomWords<'a, R: ?Sized> {
    rng: &'a mut R,
    len: WordLength,
}

impl<'a, R: Rng + ?Sized> RandomWords<'a, R> {
    pub fn new(rng: &'a mut R, len: WordLength) -> Self {
        RandomWords { rng, len }
    }
}

impl<R: Rng + ?Sized> PrivateSampler for RandomWords<'_, R> {
    fn sample(&mut self, side: &GeneratorSet, _name: &str) -> Result<MatrixF> {
        random_word(side, self.len, self.rng)
    }
}

/// Every private element is the identity.
pub struct IdentityPrivates;

impl PrivateSampler for IdentityPrivates {
    fn sample(&mut self, side: &GeneratorSet, _name: &str) -> Result<MatrixF> {
        Ok(side.identity())
    }
}

/// Private elements given explicitly by name.
#[derive(Default)]
pub struct FixedPrivates(pub HashMap<String, MatrixF>);

impl FixedPrivates {
    pub fn with(mut self, name: &str, m: MatrixF) -> Self {
        self.0.insert(name.to_string(), m);
        self
    }
}

impl PrivateSampler for FixedPrivates {
    fn sample(&mut self, _side: &GeneratorSet, name: &str) -> Result<MatrixF> {
        self.0
            .get(name)
            .cloned()
            .ok_or_else(|| Error::Malformed(format!("no fixed private element named {name:?}")))
    }
}

/// Private elements of one run, kept for test oracles. Never serialized
/// into a transcript.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrivateLog {
    entries: Vec<(String, Payload)>,
}

impl PrivateLog {
    pub(crate) fn record(&mut self, name: &str, value: Payload) {
        self.entries.push((name.to_string(), value));
    }

    pub fn get(&self, name: &str) -> Option<&Payload> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn matrix(&self, name: &str) -> Option<&MatrixF> {
        self.get(name).and_then(Payload::as_matrix)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Payload)> {
        self.entries.iter().map(|(n, v)| (n.as_str(), v))
    }
}

/// Outcome of an honest run.
#[derive(Clone, Debug)]
pub struct HonestResult {
    pub transcript: Transcript,
    pub key_alice: Payload,
    /// For message-transport protocols, the plaintext Bob recovers.
    pub key_bob: Payload,
    pub private_log: PrivateLog,
}

impl HonestResult {
    pub fn keys_agree(&self) -> bool {
        self.key_alice == self.key_bob
    }
}

pub(crate) fn draw(
    sampler: &mut dyn PrivateSampler,
    side: &GeneratorSet,
    name: &str,
    log: &mut PrivateLog,
) -> Result<MatrixF> {
    let m = sampler.sample(side, name)?;
    if m.rows() != side.dim() || m.cols() != side.dim() {
        return Err(Error::dims(side.dim(), m.rows()));
    }
    log.record(name, Payload::Matrix(m.clone()));
    Ok(m)
}
