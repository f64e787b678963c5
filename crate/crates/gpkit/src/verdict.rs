//! Three-valued results for tests that are only semi-decidable in general.

use serde::Serialize;

use crate::qm_geometry::Hyperplane;
use crate::word_engine::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Certified,
    Refuted,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Witness {
    Word(Word),
    Hyperplane(Hyperplane),
    Note(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict3 {
    pub status: Status,
    /// Name of the rule that produced the verdict.
    pub rule: &'static str,
    pub witness: Option<Witness>,
}

impl Verdict3 {
    pub fn certified(rule: &'static str) -> Self {
        Verdict3 { status: Status::Certified, rule, witness: None }
    }

    pub fn refuted(rule: &'static str, witness: Witness) -> Self {
        Verdict3 { status: Status::Refuted, rule, witness: Some(witness) }
    }

    pub fn unknown(rule: &'static str, note: impl Into<String>) -> Self {
        Verdict3 { status: Status::Unknown, rule, witness: Some(Witness::Note(note.into())) }
    }

    pub fn with_witness(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn is_certified(&self) -> bool {
        self.status == Status::Certified
    }

    pub fn is_refuted(&self) -> bool {
        self.status == Status::Refuted
    }
}
