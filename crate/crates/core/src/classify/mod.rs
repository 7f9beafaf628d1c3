//! Decision procedures for Calabi-Yau groups of Type A and Type K, and the
//! elimination pipelines that produce the two classifications.
//!
//! Every elimination is a [`Certificate`]: a list of exact assertions that can be
//! recomputed from the certificate's [`ReplayKey`] alone.

mod derive;
mod eliminate;
mod type_a;
mod type_k;

pub use derive::{certify_candidate, derive_type_a, derive_type_a_over, pi1_criterion, pi1_witnesses, Pi1Verdict, TypeAClass, TypeAResult, TYPE_A_CANDIDATES};
pub use eliminate::{eliminate_a4, eliminate_d6_d12, eliminate_order24, order_bound_derivation, OrderBound};
pub use type_a::{
    admissible_profile, check_cy_type_a, check_pre_cy_rep, commutative_pre_cy_filter, forced_decompositions,
    CommutativeFilter,
};
pub use type_k::{
    abelian_certificate, check_cy_type_k, derive_type_k, orbit_census_certificate, type_k_group_for_pair, type_k_preset, Existence,
    TypeKCandidate, TypeKResult, TypeKSpec, TYPE_K_PRESETS,
};

use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::CycError;
use crate::groups::{GroupError, GroupSpec};
use crate::picard::PicardError;
use crate::reps::RepError;
use crate::torus::TorusError;

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Cyc(#[from] CycError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Picard(#[from] PicardError),
    #[error("representation has degree {0}, expected 3")]
    WrongDegree(usize),
    #[error("{0} is not abelian")]
    NotAbelian(String),
    #[error("malformed Type K data: {0}")]
    MalformedTypeK(String),
    #[error("certificate step failed: {0}")]
    BrokenCertificate(String),
    #[error("unknown preset {0}")]
    UnknownPreset(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    PassNecessaryOnly,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::PassNecessaryOnly => "pass-necessary-only",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reason {
    pub condition: String,
    pub witness: Option<String>,
    pub data: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub reasons: Vec<Reason>,
}

impl Verdict {
    /// `fail` when any reason carries a witness, otherwise `ok`.
    fn from_failures(ok: Status, reasons: Vec<Reason>) -> Verdict {
        let status = if reasons.iter().any(|r| r.witness.is_some()) { Status::Fail } else { ok };
        Verdict { status, reasons }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub fn first_failure(&self) -> Option<&Reason> {
        self.reasons.iter().find(|r| r.witness.is_some())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// A faithful diagonal special-linear assignment with the eigenvalue rule.
    CommutativeFilter,
    /// Some holomorphic 1-form is invariant.
    InvariantForm,
    /// Contains a subgroup that is already excluded.
    SubgroupInheritance,
    /// The order-3 element splits off an elliptic curve whose quotient surface carries 9 fixed points.
    EllipticDescent,
    /// The square of the 3-cycle fixes an explicit point built from the translation parts.
    TranslationIdentity,
    /// Finite case split on the eigenvalue of `c` on the invariant line of `Q₈`.
    EigenvalueCaseSplit,
    /// The eigenvalue rule and the group table disagree on an element order.
    OrderConflict,
    /// The order bound on a pre-Calabi-Yau group.
    OrderBound,
    /// Orbit counting of fixed points of the symplectic part on the K3 side.
    FixedPointCensus,
    /// The subgroup acting by translations needs at most two generators.
    TwoGenerated,
    /// Symplectic automorphisms of a K3 surface have order at most 8.
    NikulinOrder,
}

/// How to recompute a certificate from scratch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum ReplayKey {
    TypeACandidate(String),
    Order24(String),
    Dihedral6,
    Alternating4,
    OrderBound,
    TypeKPair(u32, u32),
    TypeKAbelian(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Assertion {
    pub claim: String,
    pub value: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub subject: String,
    pub rule: Rule,
    pub key: ReplayKey,
    pub steps: Vec<Assertion>,
    pub eliminated: bool,
}

impl Certificate {
    fn new(subject: impl Into<String>, rule: Rule, key: ReplayKey) -> Self {
        Certificate { subject: subject.into(), rule, key, steps: Vec::new(), eliminated: false }
    }

    /// Record an assertion that must hold for the argument to go through.
    fn require(&mut self, claim: impl Into<String>, value: impl ToString, holds: bool) -> Result<(), ClassifyError> {
        let claim = claim.into();
        let value = value.to_string();
        if !holds {
            return Err(ClassifyError::BrokenCertificate(format!("{}: {claim} (got {value})", self.subject)));
        }
        self.steps.push(Assertion { claim, value, holds });
        Ok(())
    }

    /// Record an observation whose truth value is part of the outcome.
    fn observe(&mut self, claim: impl Into<String>, value: impl ToString, holds: bool) {
        self.steps.push(Assertion { claim: claim.into(), value: value.to_string(), holds });
    }

    fn conclude(mut self, eliminated: bool) -> Self {
        self.eliminated = eliminated;
        self
    }

    /// Recompute the certificate from its key.
    pub fn replay(&self) -> Result<Certificate, ClassifyError> {
        match &self.key {
            ReplayKey::TypeACandidate(spec) => derive::certify_candidate(&spec.parse::<GroupSpec>()?),
            ReplayKey::Order24(label) => eliminate::eliminate_order24()?
                .into_iter()
                .find(|c| c.key == self.key)
                .ok_or_else(|| ClassifyError::BrokenCertificate(format!("no order-24 case {label}"))),
            ReplayKey::Dihedral6 => eliminate_d6_d12(),
            ReplayKey::Alternating4 => eliminate_a4(),
            ReplayKey::OrderBound => Ok(order_bound_derivation()?.certificate),
            ReplayKey::TypeKPair(n, m) => orbit_census_certificate(*n, *m),
            ReplayKey::TypeKAbelian(spec) => type_k::abelian_certificate(spec),
        }
    }

    /// The recomputed certificate is identical and still concludes elimination.
    pub fn replays_to_fail(&self) -> Result<bool, ClassifyError> {
        Ok(self.eliminated && self.replay()? == *self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub candidate: String,
    pub rule: Rule,
    pub certificate: Certificate,
}

pub type EliminationTrace = Vec<TraceStep>;
