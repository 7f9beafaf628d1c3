//! Picard numbers of torus quotients and of their crepant resolutions, and the
//! K3 Lefschetz system behind the `K3 × E` quotients.
//!
//! For a quotient `A/G` of a torus the Picard number is the dimension of
//! `(Λ² H¹)^G`. A crepant resolution adds one exceptional divisor for every
//! junior element (age one) of every isolated cyclic quotient point.

mod k3;

pub use k3::{nikulin_fixed_count, solve_k3_invariants, type_k_picard, K3Invariants, NIKULIN_TABLE};

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::{CycError, Rational};
use crate::groups::GroupError;
use crate::reps::{wedge_invariants, RepError};
use crate::torus::{ActionSpec, FixedKind, TorusError};

#[derive(Debug, Error)]
pub enum PicardError {
    #[error(transparent)]
    Cyc(#[from] CycError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error("character average gives {character} invariant 2-forms but the projector has rank {projector}")]
    Disagreement { character: u64, projector: u64 },
    #[error("weight {weight} is zero modulo {order}: the fixed point is not isolated")]
    ZeroWeight { order: u32, weight: u32 },
    #[error("weights {weights:?} do not sum to zero modulo {order}")]
    NotGorenstein { order: u32, weights: [u32; 3] },
    #[error("{0} has a positive-dimensional fixed locus")]
    PositiveDimensional(String),
    #[error("stabilizer of {0} is not cyclic")]
    NonCyclicStabilizer(String),
    #[error("the census needs a three-dimensional torus, found dimension {0}")]
    NotThreefold(usize),
    #[error("no Gorenstein automorphism of a K3 surface has order {0}")]
    OrderOutOfRange(usize),
    #[error("fixed counts are not constant on the conjugacy class of {0}")]
    NotClassFunction(String),
    #[error("expected {expected} fixed counts, found {found}")]
    CountLength { expected: usize, found: usize },
    #[error("no non-negative integer solution: {0}")]
    NoSolution(String),
}

/// An orbit of points with non-trivial stabilizer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedOrbitRecord {
    pub orbit_size: usize,
    pub stabilizer_order: usize,
    /// Exponents `wᵢ` with holomorphic eigenvalues `ζ_r^{wᵢ}` for the stabilizer generator.
    pub weights: [u32; 3],
    pub stabilizer_generator: String,
    pub representative: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientPicard {
    pub rho: u64,
    pub basis: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PicardReport {
    pub quotient_rho: u64,
    pub exceptional_contribution: u64,
    pub total_rho: u64,
    pub orbit_census: Vec<FixedOrbitRecord>,
    pub invariant_basis: Vec<String>,
}

/// `dim (Λ² H¹(A))^G`, by the character average and by the rank of the averaging projector.
pub fn picard_quotient_torus(spec: &ActionSpec) -> Result<QuotientPicard, PicardError> {
    let chi = spec.holomorphic_representation()?.character();
    let by_character = chi.realified().wedge_square()?.invariant_dimension()?;
    let inv = wedge_invariants(&spec.holomorphic_images()?)?;
    if inv.dim as u64 != by_character {
        return Err(PicardError::Disagreement { character: by_character, projector: inv.dim as u64 });
    }
    Ok(QuotientPicard { rho: by_character, basis: inv.labels() })
}

/// Number of `k ∈ {1, …, r−1}` with `{kw₁/r} + {kw₂/r} + {kw₃/r} = 1`.
pub fn junior_count(r: u32, weights: [u32; 3]) -> Result<u64, PicardError> {
    let w = weights.map(|x| x % r.max(1));
    if let Some(i) = w.iter().position(|&x| x == 0) {
        return Err(PicardError::ZeroWeight { order: r, weight: weights[i] });
    }
    if w.iter().sum::<u32>() % r != 0 {
        return Err(PicardError::NotGorenstein { order: r, weights });
    }
    Ok((1..r).filter(|&k| w.iter().map(|&x| (k * x) % r).sum::<u32>() == r).count() as u64)
}

fn render(p: &[Rational]) -> Vec<String> {
    p.iter().map(|x| x.to_string()).collect()
}

/// All points with non-trivial stabilizer, grouped into orbits.
pub fn fixed_orbit_census(spec: &ActionSpec) -> Result<Vec<FixedOrbitRecord>, PicardError> {
    let g = spec.group();
    if spec.model().dim() != 3 {
        return Err(PicardError::NotThreefold(spec.model().dim()));
    }
    let mut stabilizers: BTreeMap<Vec<Rational>, Vec<usize>> = BTreeMap::new();
    for x in g.elements() {
        if x == g.identity() {
            continue;
        }
        let fixed = spec.image(x).fixed_points();
        match fixed.kind {
            FixedKind::Empty => {}
            FixedKind::PositiveDimensional => return Err(PicardError::PositiveDimensional(g.element_label(x))),
            FixedKind::Isolated(_) => {
                for p in fixed.points {
                    stabilizers.entry(p).or_insert_with(|| vec![g.identity()]).push(x);
                }
            }
        }
    }
    let mut census = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (p, stab) in &stabilizers {
        if seen.contains(p) {
            continue;
        }
        let mut orbit = std::collections::BTreeSet::new();
        for x in g.elements() {
            let q = spec.image(x).apply(p);
            if !stabilizers.contains_key(&q) {
                return Err(PicardError::NonCyclicStabilizer(format!("orbit of {:?} leaves the fixed set", render(p))));
            }
            orbit.insert(q);
        }
        let r = stab.len();
        if orbit.len() * r != g.order() {
            return Err(PicardError::NonCyclicStabilizer(format!("{:?}", render(p))));
        }
        let gen = *stab
            .iter()
            .find(|&&x| g.element_order(x) == r)
            .ok_or_else(|| PicardError::NonCyclicStabilizer(format!("{:?}", render(p))))?;
        let profile = spec.holomorphic_matrix(gen)?.eigenvalue_profile(r as u32)?;
        let mut weights = [0u32; 3];
        for (w, root) in weights.iter_mut().zip(&profile) {
            *w = root.exponent_mod(r as u32);
        }
        weights.sort();
        census.push(FixedOrbitRecord {
            orbit_size: orbit.len(),
            stabilizer_order: r,
            weights,
            stabilizer_generator: g.element_label(gen),
            representative: render(p),
        });
        seen.extend(orbit);
    }
    Ok(census)
}

/// Picard number of a crepant resolution of `A/G`: the quotient part plus one
/// divisor per junior element over every singular point.
pub fn picard_crepant(spec: &ActionSpec) -> Result<PicardReport, PicardError> {
    let quotient = picard_quotient_torus(spec)?;
    let census = fixed_orbit_census(spec)?;
    let mut exceptional = 0;
    for rec in &census {
        exceptional += junior_count(rec.stabilizer_order as u32, rec.weights)?;
    }
    Ok(PicardReport {
        quotient_rho: quotient.rho,
        exceptional_contribution: exceptional,
        total_rho: quotient.rho + exceptional,
        orbit_census: census,
        invariant_basis: quotient.basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn junior_counts_by_enumeration() {
        assert_eq!(junior_count(3, [1, 1, 1]).unwrap(), 1);
        assert_eq!(junior_count(7, [1, 2, 4]).unwrap(), 3);
        assert_eq!(junior_count(2, [1, 1, 2]).unwrap_err().to_string(), "weight 2 is zero modulo 2: the fixed point is not isolated");
        assert!(matches!(junior_count(3, [1, 1, 2]), Err(PicardError::NotGorenstein { .. })));
        assert_eq!(junior_count(4, [1, 1, 2]).unwrap(), 2);
        assert_eq!(junior_count(6, [1, 2, 3]).unwrap(), 4);
    }

    #[test]
    fn igusa_quotients() {
        let q = picard_quotient_torus(&presets::igusa().unwrap()).unwrap();
        assert_eq!(q.rho, 3);
        assert_eq!(q.basis, vec!["dz1∧dz̄1", "dz2∧dz̄2", "dz3∧dz̄3"]);
        let q = picard_quotient_torus(&presets::refined_igusa().unwrap()).unwrap();
        assert_eq!(q.rho, 2);
        assert_eq!(q.basis, vec!["dz1∧dz̄1", "dz2∧dz̄2 + dz3∧dz̄3"]);
    }

    #[test]
    fn calabi_census() {
        let s = presets::calabi().unwrap();
        let census = fixed_orbit_census(&s).unwrap();
        assert_eq!(census.len(), 27);
        assert!(census.iter().all(|r| r.orbit_size == 1 && r.stabilizer_order == 3 && r.weights == [1, 1, 1]));
        let rep = picard_crepant(&s).unwrap();
        assert_eq!((rep.quotient_rho, rep.exceptional_contribution, rep.total_rho), (9, 27, 36));
    }

    #[test]
    fn klein_census() {
        let rep = picard_crepant(&presets::klein().unwrap()).unwrap();
        assert_eq!(rep.orbit_census.len(), 7);
        assert!(rep.orbit_census.iter().all(|r| r.weights == [1, 2, 4]));
        assert_eq!((rep.quotient_rho, rep.total_rho), (3, 24));
    }

    #[test]
    fn extensions_of_the_calabi_pair() {
        let rep = picard_crepant(&presets::x31().unwrap()).unwrap();
        assert_eq!(rep.orbit_census.len(), 9);
        assert!(rep.orbit_census.iter().all(|r| r.orbit_size == 3 && r.stabilizer_order == 3));
        assert_eq!((rep.quotient_rho, rep.total_rho), (3, 12));
        let rep = picard_crepant(&presets::x32().unwrap()).unwrap();
        assert_eq!(rep.orbit_census.len(), 3);
        assert!(rep.orbit_census.iter().all(|r| r.orbit_size == 9 && r.stabilizer_order == 3));
        assert_eq!((rep.quotient_rho, rep.total_rho), (1, 4));
    }

    #[test]
    fn census_partitions_the_fixed_sets() {
        for s in [presets::calabi().unwrap(), presets::x31().unwrap(), presets::x32().unwrap(), presets::klein().unwrap()] {
            let census = fixed_orbit_census(&s).unwrap();
            let g = s.group();
            let total: usize = census.iter().map(|r| r.orbit_size).sum();
            let mut union = std::collections::BTreeSet::new();
            for x in g.elements().filter(|&x| x != g.identity()) {
                union.extend(s.image(x).fixed_points().points);
            }
            assert_eq!(total, union.len());
            for gen in s.generators() {
                let n = gen.fixed_points().count().unwrap() as usize;
                let stab_members: usize =
                    census.iter().filter(|r| r.stabilizer_order > 1).map(|r| r.orbit_size).sum::<usize>();
                assert!(n <= stab_members);
            }
        }
    }

    #[test]
    fn free_actions_have_empty_census() {
        assert!(fixed_orbit_census(&presets::igusa().unwrap()).unwrap().is_empty());
        assert!(fixed_orbit_census(&presets::refined_igusa().unwrap()).unwrap().is_empty());
    }

    use proptest::prelude::*;

    fn junior_by_fractions(r: u32, w: [u32; 3]) -> u64 {
        (1..r)
            .filter(|&k| {
                let age: Rational = w.iter().map(|&x| {
                    let q = Rational::new((k as i64 * x as i64).into(), (r as i64).into());
                    &q - q.floor()
                }).sum();
                age == Rational::from_integer(1.into())
            })
            .count() as u64
    }

    proptest! {
        #[test]
        fn junior_count_invariances(r in 2u32..13, w0 in 1u32..13, w1 in 1u32..13, perm in 0usize..6, unit in 1u32..13) {
            let (w0, w1) = (w0 % r, w1 % r);
            let w2 = (3 * r - w0 - w1) % r;
            prop_assume!(w0 != 0 && w1 != 0 && w2 != 0);
            let w = [w0, w1, w2];
            let base = junior_count(r, w).unwrap();
            prop_assert_eq!(base, junior_by_fractions(r, w));
            let orders = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
            let p = orders[perm];
            prop_assert_eq!(junior_count(r, [w[p[0]], w[p[1]], w[p[2]]]).unwrap(), base);
            prop_assume!(num_integer::gcd(unit, r) == 1);
            prop_assert_eq!(junior_count(r, w.map(|x| x * unit % r)).unwrap(), base);
        }
    }
}
