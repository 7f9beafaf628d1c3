use std::sync::Arc;

use num_integer::Integer;
use serde::Serialize;

use super::{ClassifyError, Reason, Status, Verdict};
use crate::cyclotomic::RootLabel;
use crate::groups::FiniteGroup;
use crate::reps::{irrep_catalog, Representation};
use crate::torus::ActionSpec;

/// Orders allowed for an element acting on an abelian threefold with a fixed-point-free action.
pub const ALLOWED_ORDERS: [usize; 5] = [1, 2, 3, 4, 6];

/// `{1, ζ, ζ⁻¹}` for a primitive `n`-th root `ζ`, given as exponents modulo `n`.
pub fn admissible_profile(n: u32, exps: &[u32]) -> bool {
    if exps.len() != 3 || !ALLOWED_ORDERS.contains(&(n as usize)) {
        return false;
    }
    let mut e: Vec<u32> = exps.iter().map(|x| x % n).collect();
    e.sort_unstable();
    if n == 1 {
        return e == [0, 0, 0];
    }
    e[0] == 0 && e[1] + e[2] == n && e[1].gcd(&n) == 1
}

pub(crate) fn fail(condition: &str, witness: String, data: impl Into<String>) -> Reason {
    Reason { condition: condition.into(), witness: Some(witness), data: data.into() }
}

pub(crate) fn note(condition: &str, data: impl Into<String>) -> Reason {
    Reason { condition: condition.into(), witness: None, data: data.into() }
}

fn render_profile(p: &[RootLabel]) -> String {
    format!("{{{}}}", p.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", "))
}

/// Necessary conditions on the action on holomorphic 1-forms: faithful,
/// special linear, and every element `diag(1, ζ, ζ⁻¹)` with `ord ζ ∈ {1,2,3,4,6}`.
pub fn check_pre_cy_rep(rep: &Representation) -> Result<Verdict, ClassifyError> {
    if rep.degree() != 3 {
        return Err(ClassifyError::WrongDegree(rep.degree()));
    }
    let g = rep.group();
    let mut reasons = Vec::new();
    if let Some(&k) = rep.kernel().iter().find(|&&x| x != g.identity()) {
        reasons.push(fail("faithful", g.element_label(k), "acts trivially on 1-forms"));
    }
    for x in g.elements() {
        let det = rep.image(x).det()?;
        if !det.is_one() {
            reasons.push(fail("special-linear", g.element_label(x), format!("det = {det}")));
            break;
        }
    }
    for x in g.elements() {
        let n = g.element_order(x);
        if !ALLOWED_ORDERS.contains(&n) {
            reasons.push(fail("element-order", g.element_label(x), format!("order {n}")));
            break;
        }
        let profile = rep.image(x).eigenvalue_profile(n as u32)?;
        let exps: Vec<u32> = profile.iter().map(|r| r.exponent_mod(n as u32)).collect();
        if !admissible_profile(n as u32, &exps) {
            reasons.push(fail("eigenvalue-profile", g.element_label(x), render_profile(&profile)));
            break;
        }
    }
    reasons.push(note("lattice-realization", "not checked at the level of representations"));
    Ok(Verdict::from_failures(Status::PassNecessaryOnly, reasons))
}

/// The four conditions on an explicit action: no translations, trivial action on the
/// canonical form, free, and no invariant 1-forms.
pub fn check_cy_type_a(spec: &ActionSpec) -> Result<Verdict, ClassifyError> {
    let g = spec.group();
    let others = || g.elements().filter(|&x| x != g.identity());
    let mut reasons = Vec::new();
    if let Some(x) = others().find(|&x| spec.image(x).linear().is_identity()) {
        reasons.push(fail("no-translations", g.element_label(x), format!("{}", spec.image(x))));
    }
    for x in others() {
        let det = spec.holomorphic_matrix(x)?.det()?;
        if !det.is_one() {
            reasons.push(fail("gorenstein", g.element_label(x), format!("holomorphic det = {det}")));
            break;
        }
    }
    for x in others() {
        let fixed = spec.image(x).fixed_points();
        if !fixed.is_empty() {
            let data = match fixed.count() {
                Some(n) => format!("{n} fixed points"),
                None => "positive-dimensional fixed locus".into(),
            };
            reasons.push(fail("free", g.element_label(x), data));
            break;
        }
    }
    let inv = spec.holomorphic_representation()?.character().invariant_dimension()?;
    if inv > 0 {
        reasons.push(fail("no-invariant-forms", g.name().to_string(), format!("{inv} invariant 1-forms")));
    }
    Ok(Verdict::from_failures(Status::Pass, reasons))
}

const ROOT: u32 = 60;

fn entry_ok(e: u32) -> bool {
    RootLabel::new(ROOT, e as i64).order <= 6
}

fn triple_order(t: [u32; 3]) -> u32 {
    t.iter().fold(1, |acc, &e| acc.lcm(&RootLabel::new(ROOT, e as i64).order))
}

fn element_rule(t: [u32; 3]) -> bool {
    let n = triple_order(t);
    n <= ROOT && admissible_profile(n, &t.map(|e| e * n / ROOT))
}

fn encode(t: [u32; 3]) -> usize {
    (t[0] * ROOT * ROOT + t[1] * ROOT + t[2]) as usize
}

fn decode(c: usize) -> [u32; 3] {
    let c = c as u32;
    [c / (ROOT * ROOT), (c / ROOT) % ROOT, c % ROOT]
}

fn add(a: usize, b: usize) -> usize {
    let (x, y) = (decode(a), decode(b));
    encode([0, 1, 2].map(|i| (x[i] + y[i]) % ROOT))
}

pub fn render_diag(t: [u32; 3]) -> String {
    let parts: Vec<String> = t.iter().map(|&e| RootLabel::new(ROOT, e as i64).to_string()).collect();
    format!("diag({})", parts.join(", "))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommutativeFilter {
    pub verdict: Verdict,
    /// Surviving assignments, as exponents of `ζ₆₀` on each generator.
    pub survivors: Vec<Vec<[u32; 3]>>,
    pub candidates_examined: usize,
}

/// All faithful diagonal assignments of an abelian group into `SL₃` whose entries have
/// order at most 6 and whose every element satisfies the eigenvalue rule.
pub fn commutative_pre_cy_filter(g: &FiniteGroup) -> Result<CommutativeFilter, ClassifyError> {
    if !g.is_abelian() {
        return Err(ClassifyError::NotAbelian(g.name().to_string()));
    }
    let per_generator: Vec<Vec<[u32; 3]>> = g
        .generators()
        .iter()
        .map(|&s| {
            let ord = g.element_order(s) as u32;
            let mut v = Vec::new();
            for e0 in (0..ROOT).filter(|&e| entry_ok(e)) {
                for e1 in (0..ROOT).filter(|&e| entry_ok(e)) {
                    let e2 = (2 * ROOT - e0 - e1) % ROOT;
                    let t = [e0, e1, e2];
                    if entry_ok(e2) && ord % triple_order(t) == 0 && element_rule(t) {
                        v.push(t);
                    }
                }
            }
            v
        })
        .collect();
    let mut survivors: Vec<Vec<[u32; 3]>> = Vec::new();
    let mut examined = 0;
    let mut idx = vec![0usize; per_generator.len()];
    if per_generator.iter().all(|v| !v.is_empty()) {
        loop {
            examined += 1;
            let images: Vec<usize> = idx.iter().zip(&per_generator).map(|(&i, v)| encode(v[i])).collect();
            if let Some(map) = g.extend_homomorphism(&images, add, 0) {
                let mut sorted = map.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() == g.order() && map.iter().all(|&c| element_rule(decode(c))) {
                    survivors.push(idx.iter().zip(&per_generator).map(|(&i, v)| v[i]).collect());
                }
            }
            let mut k = idx.len();
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < per_generator[k].len() {
                    break;
                }
                idx[k] = 0;
            }
            if idx.iter().all(|&i| i == 0) {
                break;
            }
        }
    }
    let verdict = match survivors.first() {
        Some(first) => {
            let data = first.iter().map(|t| render_diag(*t)).collect::<Vec<_>>().join(", ");
            Verdict { status: Status::Pass, reasons: vec![note("commutative-filter", data)] }
        }
        None => Verdict {
            status: Status::Fail,
            reasons: vec![fail(
                "commutative-filter",
                g.name().to_string(),
                format!("no faithful assignment among {examined} candidates"),
            )],
        },
    };
    Ok(CommutativeFilter { verdict, survivors, candidates_examined: examined })
}

/// Degree-3 sums of catalog irreducibles that pass [`check_pre_cy_rep`], as label lists.
pub fn forced_decompositions(group: &Arc<FiniteGroup>) -> Result<Vec<Vec<String>>, ClassifyError> {
    let irreps = irrep_catalog(group)?;
    let mut out = Vec::new();
    let n = irreps.len();
    let mut consider = |parts: &[usize]| -> Result<(), ClassifyError> {
        if parts.iter().map(|&i| irreps[i].degree()).sum::<usize>() != 3 {
            return Ok(());
        }
        let mut rep = irreps[parts[0]].clone();
        for &i in &parts[1..] {
            rep = rep.direct_sum(&irreps[i])?;
        }
        if check_pre_cy_rep(&rep)?.status != Status::Fail {
            out.push(parts.iter().map(|&i| irreps[i].label().to_string()).collect());
        }
        Ok(())
    };
    for i in 0..n {
        consider(&[i])?;
        for j in i..n {
            consider(&[i, j])?;
            for k in j..n {
                consider(&[i, j, k])?;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::CycNum;
    use crate::cyclotomic::{ratio, CycMatrix};
    use crate::groups::build_group;
    use crate::presets;

    fn group(name: &str) -> Arc<FiniteGroup> {
        Arc::new(build_group(&name.parse().unwrap()).unwrap())
    }

    #[test]
    fn profiles() {
        assert!(admissible_profile(1, &[0, 0, 0]));
        assert!(admissible_profile(4, &[1, 0, 3]));
        assert!(!admissible_profile(4, &[2, 0, 2]));
        assert!(!admissible_profile(5, &[0, 1, 4]));
        assert!(!admissible_profile(3, &[1, 1, 1]));
    }

    #[test]
    fn rep_level_checks() {
        let d8 = group("D8");
        let irreps = irrep_catalog(&d8).unwrap();
        let rep = irreps[1].direct_sum(&irreps[4]).unwrap();
        assert_eq!(check_pre_cy_rep(&rep).unwrap().status, Status::PassNecessaryOnly);

        let c5 = group("C5");
        let z = |k| CycNum::root_of_unity(5, k);
        let rep = Representation::new(c5, "c5", vec![CycMatrix::diag(vec![CycNum::one(), z(1), z(4)])]).unwrap();
        let v = check_pre_cy_rep(&rep).unwrap();
        assert_eq!(v.status, Status::Fail);
        assert_eq!(v.first_failure().unwrap().condition, "element-order");

        let c1 = group("C1");
        let rep = Representation::new(c1.clone(), "triv", vec![CycMatrix::identity(3)]).unwrap();
        assert_eq!(check_pre_cy_rep(&rep).unwrap().status, Status::PassNecessaryOnly);
        let rep2 = Representation::new(c1, "triv", vec![CycMatrix::identity(2)]).unwrap();
        assert!(matches!(check_pre_cy_rep(&rep2), Err(ClassifyError::WrongDegree(2))));
    }

    #[test]
    fn igusa_examples() {
        assert_eq!(check_cy_type_a(&presets::igusa().unwrap()).unwrap().status, Status::Pass);
        assert_eq!(check_cy_type_a(&presets::refined_igusa().unwrap()).unwrap().status, Status::Pass);
        let v = check_cy_type_a(&presets::igusa_with(ratio(0, 1)).unwrap()).unwrap();
        assert_eq!(v.status, Status::Fail);
        let r = v.first_failure().unwrap();
        assert_eq!((r.condition.as_str(), r.witness.as_deref()), ("free", Some("a")));
        let v = check_cy_type_a(&presets::calabi().unwrap()).unwrap();
        assert_eq!(v.first_failure().unwrap().condition, "free");
    }

    #[test]
    fn filter_examples() {
        let f = commutative_pre_cy_filter(&group("C2^2")).unwrap();
        assert_eq!(f.verdict.status, Status::Pass);
        assert_eq!(f.verdict.reasons[0].data, "diag(1, -1, -1), diag(-1, 1, -1)");
        assert_eq!(f.survivors.len(), 6);
        for name in ["C2xC4", "C2^3", "C5", "C8", "C3^2", "C12"] {
            assert_eq!(commutative_pre_cy_filter(&group(name)).unwrap().verdict.status, Status::Fail, "{name}");
        }
        assert!(matches!(commutative_pre_cy_filter(&group("D8")), Err(ClassifyError::NotAbelian(_))));
    }

    #[test]
    fn filter_survivors_among_abelian_groups() {
        let mut passing = Vec::new();
        for n in 1..=48u32 {
            for invariants in abelian_invariants(n) {
                let spec = if invariants.len() == 1 {
                    format!("C{}", invariants[0])
                } else {
                    invariants.iter().map(|k| format!("C{k}")).collect::<Vec<_>>().join("x")
                };
                let g = group(&spec);
                if commutative_pre_cy_filter(&g).unwrap().verdict.status == Status::Pass {
                    passing.push(spec);
                }
            }
        }
        assert_eq!(passing, vec!["C1", "C2", "C3", "C2xC2", "C4", "C6"]);
    }

    /// Invariant factor decompositions `d₁ | d₂ | …` with product `n`.
    fn abelian_invariants(n: u32) -> Vec<Vec<u32>> {
        fn go(n: u32, min: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if n == 1 {
                out.push(acc.clone());
                return;
            }
            for d in (min.max(2)..=n).filter(|d| n % d == 0) {
                if acc.last().map_or(true, |&l| d % l == 0) {
                    acc.push(d);
                    go(n / d, d, acc, out);
                    acc.pop();
                }
            }
        }
        if n == 1 {
            return vec![vec![1]];
        }
        let mut out = Vec::new();
        go(n, 2, &mut Vec::new(), &mut out);
        out.into_iter().filter(|v| v.windows(2).all(|w| w[1] % w[0] == 0)).collect()
    }

    #[test]
    fn forced_decompositions_of_small_groups() {
        let f = |name: &str| forced_decompositions(&group(name)).unwrap();
        assert_eq!(f("D6"), vec![vec!["rho1,1", "rho2,1"]]);
        assert_eq!(f("D8"), vec![vec!["rho1,1", "rho2,1"]]);
        assert_eq!(f("Q8"), vec![vec!["rho1,0", "rho2,1"]]);
        assert_eq!(f("Q12"), vec![vec!["rho1,0", "rho2,1"]]);
        assert_eq!(f("A4"), vec![vec!["rho3"]]);
    }
}
