use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Field, MatrixF};
use crate::platform::{GeneratorSet, ProtocolFixture, Side};
use crate::wire::{matrix_from_rows, Payload, PayloadKind};

use super::{HARLEY_LABELS, KOLEE_LABELS, WANG_LABELS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProtocolId {
    Wang,
    Kolee,
    Harley,
    Generic,
}

impl ProtocolId {
    pub fn as_str(self) -> &'static str {
        match self {
            ProtocolId::Wang => "wang",
            ProtocolId::Kolee => "kolee",
            ProtocolId::Harley => "harley",
            ProtocolId::Generic => "generic",
        }
    }

    /// Fixed message schema, if the protocol has one.
    pub fn labels(self) -> Option<&'static [&'static str]> {
        match self {
            ProtocolId::Wang => Some(&WANG_LABELS),
            ProtocolId::Kolee => Some(&KOLEE_LABELS),
            ProtocolId::Harley => Some(&HARLEY_LABELS),
            ProtocolId::Generic => None,
        }
    }
}

impl fmt::Display for ProtocolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProtocolId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wang" => Ok(ProtocolId::Wang),
            "kolee" | "ko-lee" => Ok(ProtocolId::Kolee),
            "harley" => Ok(ProtocolId::Harley),
            "generic" => Ok(ProtocolId::Generic),
            _ => Err(Error::Malformed(format!("unknown protocol {s:?}"))),
        }
    }
}

/// The public part of a fixture: the platform, both generating sets and the
/// public base element (absent for vector protocols, whose base is private).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixturePublic {
    pub field: Field,
    pub dimension: usize,
    pub a_side: GeneratorSet,
    pub b_side: GeneratorSet,
    pub h: Option<MatrixF>,
}

impl FixturePublic {
    pub fn from_fixture(fx: &ProtocolFixture, with_h: bool) -> Self {
        FixturePublic {
            field: fx.field,
            dimension: fx.dimension,
            a_side: fx.a_side.clone(),
            b_side: fx.b_side.clone(),
            h: with_h.then(|| fx.h.clone()),
        }
    }

    pub fn side(&self, side: Side) -> &GeneratorSet {
        match side {
            Side::A => &self.a_side,
            Side::B => &self.b_side,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Message {
    pub label: String,
    pub payload: Payload,
}

/// Ordered, labelled public messages of one protocol run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub protocol: ProtocolId,
    pub public: FixturePublic,
    messages: Vec<Message>,
}

impl Transcript {
    pub(crate) fn new(protocol: ProtocolId, public: FixturePublic) -> Self {
        Transcript {
            protocol,
            public,
            messages: Vec::new(),
        }
    }

    pub(crate) fn publish(&mut self, label: &str, payload: Payload) {
        debug_assert!(self.get(label).is_none(), "duplicate label {label}");
        self.messages.push(Message {
            label: label.to_string(),
            payload,
        });
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    pub fn get(&self, label: &str) -> Option<&Payload> {
        self.messages
            .iter()
            .find(|m| m.label == label)
            .map(|m| &m.payload)
    }

    pub fn matrix(&self, label: &str) -> Result<&MatrixF> {
        self.get(label)
            .and_then(Payload::as_matrix)
            .ok_or_else(|| Error::Malformed(format!("transcript has no matrix {label:?}")))
    }

    pub fn vector(&self, label: &str) -> Result<&crate::linalg::VectorF> {
        self.get(label)
            .and_then(Payload::as_vector)
            .ok_or_else(|| Error::Malformed(format!("transcript has no vector {label:?}")))
    }

    /// Replaces the payload of `label`; used for fault injection.
    pub fn replace(&mut self, label: &str, payload: Payload) -> Result<()> {
        let m = self
            .messages
            .iter_mut()
            .find(|m| m.label == label)
            .ok_or_else(|| Error::Malformed(format!("no message {label:?}")))?;
        m.payload = payload;
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for m in &self.messages {
            if !seen.insert(m.label.as_str()) {
                return Err(Error::Malformed(format!("duplicate label {:?}", m.label)));
            }
        }
        if let Some(schema) = self.protocol.labels() {
            let labels: Vec<&str> = self.messages.iter().map(|m| m.label.as_str()).collect();
            if labels != schema {
                return Err(Error::Malformed(format!(
                    "{} transcript must carry labels {schema:?}, found {labels:?}",
                    self.protocol
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&TranscriptFile::from(self)).expect("transcript serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: TranscriptFile = serde_json::from_str(s)?;
        file.into_transcript()
    }
}

#[derive(Serialize, Deserialize)]
struct FixturePublicFile {
    modulus: u64,
    dimension: usize,
    a_gens: Vec<Vec<Vec<u64>>>,
    b_gens: Vec<Vec<Vec<u64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    h: Option<Vec<Vec<u64>>>,
}

#[derive(Serialize, Deserialize)]
struct MessageFile {
    label: String,
    kind: PayloadKind,
    data: serde_json::Value,
}

#[derive(Serialize, Deserialize)]
struct TranscriptFile {
    protocol_id: ProtocolId,
    fixture_public: FixturePublicFile,
    messages: Vec<MessageFile>,
}

impl From<&Transcript> for TranscriptFile {
    fn from(t: &Transcript) -> Self {
        let p = &t.public;
        TranscriptFile {
            protocol_id: t.protocol,
            fixture_public: FixturePublicFile {
                modulus: p.field.modulus(),
                dimension: p.dimension,
                a_gens: p.a_side.gens().iter().map(MatrixF::to_rows).collect(),
                b_gens: p.b_side.gens().iter().map(MatrixF::to_rows).collect(),
                h: p.h.as_ref().map(MatrixF::to_rows),
            },
            messages: t
                .messages
                .iter()
                .map(|m| MessageFile {
                    label: m.label.clone(),
                    kind: m.payload.kind(),
                    data: m.payload.to_json(),
                })
                .collect(),
        }
    }
}

impl TranscriptFile {
    fn into_transcript(self) -> Result<Transcript> {
        let fp = self.fixture_public;
        let field = Field::new(fp.modulus)?;
        let n = fp.dimension;
        if n == 0 {
            return Err(Error::Malformed("dimension must be positive".into()));
        }
        let parse = |gens: &[Vec<Vec<u64>>]| {
            gens.iter()
                .map(|g| matrix_from_rows(field, n, g))
                .collect::<Result<Vec<_>>>()
        };
        let public = FixturePublic {
            field,
            dimension: n,
            a_side: GeneratorSet::new(Side::A, field, n, parse(&fp.a_gens)?)?,
            b_side: GeneratorSet::new(Side::B, field, n, parse(&fp.b_gens)?)?,
            h: fp.h.map(|h| matrix_from_rows(field, n, &h)).transpose()?,
        };
        let mut t = Transcript::new(self.protocol_id, public);
        for m in self.messages {
            let payload = Payload::from_json(field, n, m.kind, &m.data)?;
            t.messages.push(Message {
                label: m.label,
                payload,
            });
        }
        t.validate()?;
        Ok(t)
    }
}
