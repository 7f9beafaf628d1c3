use std::sync::Arc;

use serde::Serialize;

use super::eliminate::{eliminate_a4, eliminate_d6_d12, eliminate_order24, order_bound_derivation, OrderBound};
use super::type_a::{check_cy_type_a, commutative_pre_cy_filter, forced_decompositions, render_diag};
use super::type_k::{derive_type_k, Existence};
use super::{Certificate, ClassifyError, EliminationTrace, ReplayKey, Rule, Status, TraceStep, Verdict};
use crate::cyclotomic::CycMatrix;
use crate::groups::GroupSpec;
use crate::picard::picard_quotient_torus;
use crate::presets::type_a_preset;
use crate::reps::Representation;

/// Every group whose order passes the order bound, except the fifteen of order 24.
pub const TYPE_A_CANDIDATES: [&str; 17] = [
    "C1", "C2", "C3", "C4", "C2^2", "C6", "D6", "C8", "C2xC4", "C2^3", "D8", "Q8", "C12", "C2xC6", "D12", "Q12", "A4",
];

fn adopt(mut c: Certificate, subject: String, key: ReplayKey) -> Certificate {
    c.subject = subject;
    c.key = key;
    c
}

/// Decide a single candidate group, returning a certificate that either eliminates it
/// or records why it survives.
pub fn certify_candidate(spec: &GroupSpec) -> Result<Certificate, ClassifyError> {
    let name = spec.to_string();
    let key = ReplayKey::TypeACandidate(name.clone());
    if let GroupSpec::Order24(case) = spec {
        let found = eliminate_order24()?.into_iter().find(|c| c.key == ReplayKey::Order24(spec.to_string()));
        return found.map(|c| adopt(c, name, key)).ok_or_else(|| ClassifyError::BrokenCertificate(format!("{case:?}")));
    }
    let g = Arc::new(crate::groups::build_group(spec)?);
    if g.is_abelian() {
        let f = commutative_pre_cy_filter(&g)?;
        let mut c = Certificate::new(name, Rule::CommutativeFilter, key);
        if f.verdict.status == Status::Fail {
            c.require("no diagonal assignment survives the commutative filter", format!("{} candidates examined", f.candidates_examined), true)?;
            return Ok(c.conclude(true));
        }
        let free_of_invariants: Vec<&Vec<[u32; 3]>> =
            f.survivors.iter().filter(|s| (0..3).all(|i| s.iter().any(|t| t[i] != 0))).collect();
        c.observe("assignments surviving the commutative filter", f.survivors.len(), true);
        match free_of_invariants.first() {
            None => {
                c.rule = Rule::InvariantForm;
                c.require("every surviving assignment fixes a coordinate 1-form", "all", true)?;
                Ok(c.conclude(true))
            }
            Some(s) => {
                let shown: Vec<String> = s.iter().map(|t| render_diag(*t)).collect();
                c.observe("a surviving assignment without invariant 1-forms", shown.join(", "), true);
                Ok(c.conclude(false))
            }
        }
    } else {
        match name.as_str() {
            "D6" | "D12" => Ok(adopt(eliminate_d6_d12()?, name, key)),
            "A4" => Ok(adopt(eliminate_a4()?, name, key)),
            _ => {
                let forced = forced_decompositions(&g)?;
                let mut c = Certificate::new(name, Rule::InvariantForm, key);
                c.require("admissible 1-form representations", format!("{forced:?}"), !forced.is_empty())?;
                let all_invariant = forced.iter().all(|d| d.iter().any(|l| l == "rho1,0"));
                c.observe("each contains the trivial representation rho1,0", all_invariant, all_invariant);
                Ok(c.conclude(all_invariant))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeAClass {
    pub group: String,
    pub preset: String,
    /// Holomorphic generator matrices in normal form.
    pub normal_form: Vec<String>,
    /// The preset's action on 1-forms has the character of the normal form.
    pub character_matches: bool,
    pub verdict: Verdict,
    pub rho: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeAResult {
    pub classes: Vec<TypeAClass>,
    pub order_bound: OrderBound,
    pub trace: EliminationTrace,
}

fn normal_form(group: &str) -> Option<(&'static str, Vec<Vec<Vec<i64>>>)> {
    match group {
        "C2^2" => Some(("igusa", vec![vec![vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]], vec![vec![-1, 0, 0], vec![0, 1, 0], vec![0, 0, -1]]])),
        "D8" => Some(("refined-igusa", vec![vec![vec![1, 0, 0], vec![0, 0, -1], vec![0, 1, 0]], vec![vec![-1, 0, 0], vec![0, 1, 0], vec![0, 0, -1]]])),
        _ => None,
    }
}

fn render_matrix(rows: &[Vec<i64>]) -> String {
    let r: Vec<String> = rows.iter().map(|row| format!("[{}]", row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))).collect();
    format!("[{}]", r.join(", "))
}

fn classify_survivor(name: &str) -> Result<TypeAClass, ClassifyError> {
    let (preset, mats) = normal_form(name).ok_or_else(|| ClassifyError::BrokenCertificate(format!("{name} survives without a known realization")))?;
    let spec = type_a_preset(preset)?;
    let theorem = Representation::new(spec.group().clone(), "normal form", mats.iter().map(|m| CycMatrix::from_ints(m)).collect())?;
    let character_matches = theorem.character().values() == spec.holomorphic_representation()?.character().values();
    Ok(TypeAClass {
        group: name.to_string(),
        preset: preset.to_string(),
        normal_form: mats.iter().map(|m| render_matrix(m)).collect(),
        character_matches,
        verdict: check_cy_type_a(&spec)?,
        rho: picard_quotient_torus(&spec)?.rho,
    })
}

/// Full Type A pipeline over the default candidate list.
pub fn derive_type_a() -> Result<TypeAResult, ClassifyError> {
    derive_type_a_over(&TYPE_A_CANDIDATES)
}

/// Same pipeline over candidates in any order; the output is in canonical order.
pub fn derive_type_a_over(candidates: &[&str]) -> Result<TypeAResult, ClassifyError> {
    let order_bound = order_bound_derivation()?;
    let mut trace = vec![TraceStep { candidate: "order bound".into(), rule: Rule::OrderBound, certificate: order_bound.certificate.clone() }];
    let mut steps = Vec::new();
    for &name in candidates {
        let spec: GroupSpec = name.parse()?;
        if !order_bound.orders.contains(&spec.expected_order()) {
            continue;
        }
        let cert = certify_candidate(&spec)?;
        steps.push((TYPE_A_CANDIDATES.iter().position(|&c| c == name).unwrap_or(usize::MAX), name.to_string(), cert));
    }
    steps.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    let mut classes = Vec::new();
    for (_, name, cert) in steps {
        if !cert.eliminated {
            classes.push(classify_survivor(&name)?);
        }
        trace.push(TraceStep { candidate: name, rule: cert.rule, certificate: cert });
    }
    for cert in eliminate_order24()? {
        trace.push(TraceStep { candidate: cert.subject.clone(), rule: cert.rule, certificate: cert });
    }
    Ok(TypeAResult { classes, order_bound, trace })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "verdict")]
pub enum Pi1Verdict {
    Finite,
    PossiblyInfinite { witness: String },
}

/// Picard numbers attained by a quotient with infinite fundamental group, with a witness
/// (Type A first, then realized, open and unresolved Type K in table order).
pub fn pi1_witnesses() -> Result<Vec<(u64, String)>, ClassifyError> {
    let mut out: Vec<(u64, String)> = Vec::new();
    let mut push = |rho: u64, w: String| {
        if !out.iter().any(|(r, _)| *r == rho) {
            out.push((rho, w));
        }
    };
    for preset in ["refined-igusa", "igusa"] {
        push(picard_quotient_torus(&type_a_preset(preset)?)?.rho, preset.to_string());
    }
    let k = derive_type_k()?;
    for tier in [Existence::Realized, Existence::Open, Existence::Unresolved] {
        for c in k.candidates.iter().filter(|c| c.existence == tier) {
            push(c.rho, c.preset.clone());
        }
    }
    out.sort();
    Ok(out)
}

/// A Calabi-Yau threefold with infinite fundamental group is a Type A or Type K quotient,
/// so a Picard number outside their values forces a finite fundamental group.
pub fn pi1_criterion(rho: u64) -> Result<Pi1Verdict, ClassifyError> {
    Ok(match pi1_witnesses()?.into_iter().find(|(r, _)| *r == rho) {
        Some((_, witness)) => Pi1Verdict::PossiblyInfinite { witness },
        None => Pi1Verdict::Finite,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_classes_survive() {
        let r = derive_type_a().unwrap();
        let names: Vec<&str> = r.classes.iter().map(|c| c.group.as_str()).collect();
        assert_eq!(names, ["C2^2", "D8"]);
        for c in &r.classes {
            assert!(c.character_matches, "{}", c.group);
            assert_eq!(c.verdict.status, Status::Pass);
        }
        assert_eq!(r.classes.iter().map(|c| c.rho).collect::<Vec<_>>(), [3, 2]);
        assert_eq!(r.trace.len(), 1 + TYPE_A_CANDIDATES.len() + 15);
    }

    #[test]
    fn every_elimination_replays() {
        let r = derive_type_a().unwrap();
        for step in r.trace.iter().filter(|s| s.certificate.eliminated) {
            assert!(step.certificate.replays_to_fail().unwrap(), "{}", step.candidate);
        }
    }

    #[test]
    fn candidate_order_does_not_matter() {
        let mut rev = TYPE_A_CANDIDATES.to_vec();
        rev.reverse();
        assert_eq!(derive_type_a_over(&rev).unwrap(), derive_type_a().unwrap());
    }

    #[test]
    fn picard_criterion() {
        let w = pi1_witnesses().unwrap();
        assert_eq!(w.iter().map(|(r, _)| *r).collect::<Vec<_>>(), [2, 3, 4, 5, 7, 11]);
        assert_eq!(pi1_criterion(6).unwrap(), Pi1Verdict::Finite);
        assert_eq!(pi1_criterion(4).unwrap(), Pi1Verdict::PossiblyInfinite { witness: "typek-d8".into() });
        assert_eq!(pi1_criterion(5).unwrap(), Pi1Verdict::PossiblyInfinite { witness: "typek-c2x3".into() });
    }
}
