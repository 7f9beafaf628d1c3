use std::sync::Arc;

use serde::Serialize;

use super::type_a::{admissible_profile, commutative_pre_cy_filter, forced_decompositions, ALLOWED_ORDERS};
use super::{Certificate, ClassifyError, ReplayKey, Rule, Status};
use crate::cyclotomic::{ratio, CycNum, Rational};
use crate::groups::{are_isomorphic, build_group, check_burnside_hall, contains_subgroup_isomorphic_to, Case24, FiniteGroup, GroupSpec};
use crate::presets::omega_block;
use crate::reps::{decompose, irrep_catalog};
use crate::torus::{ActionSpec, AffineAut, EllipticFactor, IntMatrix, Period, TorusModel};

pub(crate) fn group(name: &str) -> Result<Arc<FiniteGroup>, ClassifyError> {
    Ok(Arc::new(build_group(&name.parse::<GroupSpec>()?)?))
}

fn filter_fails(name: &str) -> Result<bool, ClassifyError> {
    Ok(commutative_pre_cy_filter(&*group(name)?)?.verdict.status == Status::Fail)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderBound {
    pub orders: Vec<usize>,
    pub certificate: Certificate,
}

/// Orders of groups that can act freely and symplectically on an abelian threefold.
pub fn order_bound_derivation() -> Result<OrderBound, ClassifyError> {
    let mut c = Certificate::new("order of a pre-Calabi-Yau group", Rule::OrderBound, ReplayKey::OrderBound);
    c.require(
        "element orders lie in {1,2,3,4,6}, so only the primes 2 and 3 divide |G| (a prime power dividing |G| is the order of a subgroup, by Wielandt)",
        format!("{ALLOWED_ORDERS:?}"),
        ALLOWED_ORDERS.iter().all(|&n| n == 1 || n % 2 == 0 || n % 3 == 0),
    )?;
    for p in ["C5", "C7", "C11", "C13"] {
        c.require(format!("commutative filter rejects {p}"), "fail", filter_fails(p)?)?;
    }
    for h in ["C9", "C3^2"] {
        c.require(format!("9 | |G| gives a subgroup of order 9; commutative filter rejects {h}"), "fail", filter_fails(h)?)?;
    }
    let k = (1u32..).find(|k| k * (k + 1) >= 8).expect("bounded");
    c.require("Burnside-Hall for order 2^4: a maximal normal abelian subgroup of order 2^k has k(k+1) ≥ 8", format!("k ≥ {k}"), k == 3)?;
    for h in ["C8", "C2xC4", "C2^3"] {
        c.require(format!("abelian subgroup of order 8: commutative filter rejects {h}"), "fail", filter_fails(h)?)?;
    }
    for name in ["C16", "C2xC8", "C4^2", "C2xC2xC4", "C2^4", "D16", "Q16", "Dih(C2xC4)", "C2xQ8"] {
        let g = match name {
            "C2xQ8" => Arc::new(crate::groups::direct_product(&*group("C2")?, &*group("Q8")?)?),
            _ => group(name)?,
        };
        let bh = check_burnside_hall(&g)?;
        c.require(
            format!("Burnside-Hall inequality and an abelian subgroup of order ≥ 8 in {name}"),
            format!("h = {}", bh.h),
            bh.holds && bh.h >= 3,
        )?;
    }
    let mut orders: Vec<usize> = (0..=3).flat_map(|n| (0..=1).map(move |m| (1usize << n) * 3usize.pow(m))).collect();
    orders.sort_unstable();
    c.require("|G| = 2^n 3^m with n ≤ 3 and m ≤ 1", format!("{orders:?}"), true)?;
    Ok(OrderBound { orders, certificate: c.conclude(true) })
}

fn lin(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(rows)
}

/// `D₆` (and hence `D₁₂`) cannot act freely: the rotation splits off an elliptic curve,
/// the induced order-3 action on the quotient surface has 9 fixed points, the reflection
/// fixes one of them, and then acts on the fiber curve with Lefschetz number 4.
pub fn eliminate_d6_d12() -> Result<Certificate, ClassifyError> {
    let mut c = Certificate::new("D6 and D12", Rule::EllipticDescent, ReplayKey::Dihedral6);
    let d6 = group("D6")?;
    let forced = forced_decompositions(&d6)?;
    c.require("the only admissible 1-form representation of D6 is rho1,1 + rho2,1", format!("{forced:?}"), forced == vec![vec!["rho1,1".to_string(), "rho2,1".to_string()]])?;

    let model = TorusModel::product(
        "E x F x F",
        vec![EllipticFactor::new(Period::Generic, "E"), EllipticFactor::new(Period::Zeta3, "F"), EllipticFactor::new(Period::Zeta3, "F")],
    )?;
    let w = omega_block();
    let a0 = IntMatrix::block_diag(&[IntMatrix::identity(2), w.clone(), w.pow(2)]);
    let swap = lin(&[vec![0, 1], vec![1, 0]]).kron(&IntMatrix::identity(2));
    let b0 = IntMatrix::block_diag(&[IntMatrix::scalar(2, -1), swap]);
    let mut ta = vec![Rational::from_integer(0.into()); 6];
    ta[0] = ratio(1, 3);
    let a = AffineAut::new(a0.clone(), ta)?;
    let b = AffineAut::linear_only(b0);
    let spec = ActionSpec::new(model, d6.clone(), vec![a, b])?;
    let dec = decompose(&spec.holomorphic_representation()?)?;
    let nonzero: Vec<String> = dec.iter().filter(|(_, m)| *m > 0).map(|(l, m)| format!("{l}^{m}")).collect();
    c.require("model action realizes rho1,1 + rho2,1", nonzero.join(" + "), nonzero == ["rho1,1^1", "rho2,1^1"])?;

    let descent = spec.connected_kernel_subtorus(&a0.sub(&IntMatrix::identity(6)))?;
    c.require("the connected kernel of a0 - 1 is an elliptic curve", format!("rank {}", descent.kernel_rank), descent.kernel_rank == 2)?;
    let (abar, bbar) = (&descent.descended[0], &descent.descended[1]);
    let eig = descent.quotient.holomorphic_eigenvalues(abar.linear())?;
    let eig_s: Vec<String> = eig.iter().map(|r| r.to_string()).collect();
    c.require("the induced action on the quotient surface has holomorphic eigenvalues z3, z3^2", eig_s.join(", "), eig_s == ["z3", "z3^2"])?;
    let mut lef = CycNum::one();
    for r in &eig {
        let one_minus = CycNum::one().try_sub(&r.value())?;
        lef = lef.try_mul(&one_minus)?.try_mul(&one_minus.conj())?;
    }
    c.require("Lefschetz number of the surface action from its eigenvalues", lef.to_string(), lef == CycNum::from_int(9))?;
    c.require("det(1 - abar0) on the surface lattice", abar.lefschetz_number(), abar.lefschetz_number() == 9)?;
    let fixed = abar.fixed_points();
    c.require("the fixed points of abar are isolated and there are 9 of them", format!("{:?}", fixed.kind), fixed.count() == Some(9))?;
    let stable = fixed.points.iter().all(|p| fixed.points.contains(&bbar.apply(p)));
    c.require("bbar permutes the fixed set of abar (abar bbar = bbar abar^-1)", stable, stable)?;
    let bbar_fixed: Vec<&Vec<Rational>> = fixed.points.iter().filter(|p| bbar.apply(p) == **p).collect();
    c.require(
        "an involution of a 9-point set has an odd number of fixed points",
        bbar_fixed.len(),
        bbar_fixed.len() % 2 == 1 && bbar.compose(bbar)?.is_identity(),
    )?;
    let fiber = &descent.sub_linear[1];
    c.require("b acts on the fiber curve by -1", format!("{fiber:?}"), *fiber == IntMatrix::scalar(2, -1))?;
    let lef_fiber = IntMatrix::identity(2).sub(fiber).det();
    c.require("Lefschetz number of b on the fiber det(1 - (-1))", lef_fiber, lef_fiber == 4)?;
    let b_fixed = spec.image(d6.generator("b")?).fixed_points();
    c.require("so b has fixed points on the threefold", format!("{:?}", b_fixed.kind), !b_fixed.is_empty())?;
    let d12 = group("D12")?;
    c.require("D12 contains a subgroup isomorphic to D6", "yes", contains_subgroup_isomorphic_to(&d12, &d6)?.is_some())?;
    Ok(c.conclude(true))
}

type Form = [i64; 3];

fn fadd(x: Form, y: Form) -> Form {
    [x[0] + y[0], x[1] + y[1], x[2] + y[2]]
}

fn fsub(x: Form, y: Form) -> Form {
    [x[0] - y[0], x[1] - y[1], x[2] - y[2]]
}

fn render_form(f: Form) -> String {
    let mut parts = Vec::new();
    for (i, &k) in f.iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(format!("α{}", i + 1)),
            -1 => parts.push(format!("-α{}", i + 1)),
            _ => parts.push(format!("{k}α{}", i + 1)),
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ").replace("+ -", "- ")
    }
}

fn render_point(p: [Form; 3]) -> String {
    format!("({})", p.iter().map(|f| render_form(*f)).collect::<Vec<_>>().join(", "))
}

/// `A₄` cannot act freely: with `a(z) = (z₂, z₃, z₁) + (α₁, α₂, α₃)` and `b = diag(1, -1, -1) + β`,
/// the lattice contains `(2α, 0, 0)` and `a²` fixes `P = (0, α₂+α₃, α₁+α₂+2α₃)`.
pub fn eliminate_a4() -> Result<Certificate, ClassifyError> {
    let mut c = Certificate::new("A4", Rule::TranslationIdentity, ReplayKey::Alternating4);
    let a4 = group("A4")?;
    let forced = forced_decompositions(&a4)?;
    c.require("the only admissible 1-form representation of A4 is rho3", format!("{forced:?}"), forced == vec![vec!["rho3".to_string()]])?;

    let alpha: [Form; 3] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let zero: Form = [0, 0, 0];
    let a = |p: [Form; 3]| [fadd(p[1], alpha[0]), fadd(p[2], alpha[1]), fadd(p[0], alpha[2])];
    let total = fadd(fadd(alpha[0], alpha[1]), alpha[2]);
    let a3 = a(a(a([zero; 3])));
    c.require("a^3 is the translation by (α, α, α) with α = α1 + α2 + α3", render_point(a3), a3 == [total; 3])?;
    let conj = [total, fsub(zero, total), fsub(zero, total)];
    c.require("b^-1 t b is the translation by (α, -α, -α), so it lies in the lattice", render_point(conj), true)?;
    let two_alpha = [fadd(a3[0], conj[0]), fadd(a3[1], conj[1]), fadd(a3[2], conj[2])];
    c.require("(2α, 0, 0) lies in the lattice", render_point(two_alpha), two_alpha == [fadd(total, total), zero, zero])?;
    let p = [zero, fadd(alpha[1], alpha[2]), fadd(fadd(alpha[0], alpha[1]), fadd(alpha[2], alpha[2]))];
    let a2p = a(a(p));
    let diff = [fsub(a2p[0], p[0]), fsub(a2p[1], p[1]), fsub(a2p[2], p[2])];
    c.require(
        format!("a^2(P) - P = (2α, 0, 0) for P = {}", render_point(p)),
        render_point(diff),
        diff == two_alpha,
    )?;

    let model = TorusModel::preset("E3")?;
    let shift = lin(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]).kron(&IntMatrix::identity(2));
    let bl = lin(&[vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]]).kron(&IntMatrix::identity(2));
    let third = |k: i64| ratio(k, 3);
    let ta = vec![third(1), third(0), third(1), third(0), third(1), third(0)];
    let tb = vec![ratio(1, 2), ratio(0, 1), ratio(1, 6), ratio(0, 1), ratio(0, 1), ratio(0, 1)];
    let spec = ActionSpec::new(model.clone(), a4.clone(), vec![AffineAut::new(shift.clone(), ta)?, AffineAut::new(bl.clone(), tb)?])?;
    let a2 = spec.element("a^2")?;
    let point: Vec<Rational> = vec![third(0), third(0), third(2), third(0), third(4), third(0)].into_iter().map(|x| crate::torus::intmat::frac(&x)).collect();
    c.require("on E^3 with αi = (1/3, 0) and β = ((1/2, 0), (1/6, 0), 0), a^2 fixes the point built from the α", format!("{point:?}"), a2.apply(&point) == point)?;
    c.require("and the Smith-form solver finds fixed points of a^2", format!("{:?}", a2.fixed_points().kind), !a2.fixed_points().is_empty())?;
    let linear = ActionSpec::new(model, a4, vec![AffineAut::linear_only(shift), AffineAut::linear_only(bl)])?;
    let a_fixed = linear.element("a")?.fixed_points();
    c.require("with α = 0 the origin is fixed by a itself", format!("{:?}", a_fixed.kind), !a_fixed.is_empty())?;
    Ok(c.conclude(true))
}

fn order24_rule(case: Case24) -> Rule {
    match case {
        Case24::C3xC8 | Case24::C3sC8 | Case24::C3xC2xC4 | Case24::C3sC2xC4Dic | Case24::C3sC2xC4Sym | Case24::C3xC2cube | Case24::C2cubesC3 | Case24::C3sC2cube => {
            Rule::SubgroupInheritance
        }
        Case24::C3xQ8 | Case24::C3sQ8 | Case24::C3xD8 | Case24::C3sD8Rot | Case24::S4 => Rule::SubgroupInheritance,
        Case24::Q8sC3 => Rule::EigenvalueCaseSplit,
        Case24::C3sD8Refl => Rule::OrderConflict,
    }
}

fn certify_order24(case: Case24) -> Result<Certificate, ClassifyError> {
    let spec = GroupSpec::Order24(case);
    let label = spec.to_string();
    let mut c = Certificate::new(label.clone(), order24_rule(case), ReplayKey::Order24(label.clone()));
    let g = Arc::new(build_group(&spec)?);
    c.require("group order", g.order(), g.order() == 24)?;
    let sylow = g.sylow(2)?;
    let h2 = g.subgroup(sylow[0])?;
    let h2_spec = case.sylow2();
    c.require(
        "2-Sylow subgroup type",
        h2_spec.to_string(),
        are_isomorphic(&h2, &build_group(&h2_spec)?)?,
    )?;
    match case {
        Case24::C3xC8 | Case24::C3sC8 | Case24::C3xC2xC4 | Case24::C3sC2xC4Dic | Case24::C3sC2xC4Sym | Case24::C3xC2cube | Case24::C2cubesC3 | Case24::C3sC2cube => {
            c.require("the 2-Sylow subgroup is commutative of order 8", h2.is_abelian(), h2.is_abelian())?;
            let f = commutative_pre_cy_filter(&build_group(&h2_spec)?)?;
            c.require(format!("commutative filter rejects {h2_spec}"), f.verdict.status, f.verdict.status == Status::Fail)?;
        }
        Case24::C3xQ8 | Case24::C3sQ8 | Case24::C3xD8 | Case24::C3sD8Rot => {
            let sub = g.generated(&[g.generator("a")?, g.generator("c")?])?;
            let c12 = build_group(&GroupSpec::Cyclic(12))?;
            c.require("<a, c> is cyclic of order 12", sub.count_ones(), are_isomorphic(&g.subgroup(sub)?, &c12)?)?;
            c.require("commutative filter rejects C12", "fail", filter_fails("C12")?)?;
        }
        Case24::S4 => {
            let a4 = build_group(&GroupSpec::Alternating(4))?;
            c.require("S4 contains a subgroup isomorphic to A4", "yes", contains_subgroup_isomorphic_to(&g, &a4)?.is_some())?;
            let cert = eliminate_a4()?;
            c.require("A4 is excluded", cert.steps.len(), cert.eliminated)?;
        }
        Case24::Q8sC3 => quaternion_case_split(&g, &mut c)?,
        Case24::C3sD8Refl => order_conflict(&g, &mut c)?,
    }
    Ok(c.conclude(true))
}

/// `Q₈ ⋊ C₃`: the `Q₈`-invariant line is `G`-stable, `c` acts on it by `α`, and either
/// `α = 1` (invariant 1-form) or `a²c` has no eigenvalue 1.
fn quaternion_case_split(g: &FiniteGroup, c: &mut Certificate) -> Result<(), ClassifyError> {
    let q8 = group("Q8")?;
    let forced = forced_decompositions(&q8)?;
    c.require("Q8 acts on 1-forms by rho1,0 + rho2,1", format!("{forced:?}"), forced == vec![vec!["rho1,0".to_string(), "rho2,1".to_string()]])?;
    let (a, b, cc) = (g.generator("a")?, g.generator("b")?, g.generator("c")?);
    c.require("c a c^-1 = b, so c normalizes Q8 and preserves its invariant line", "yes", g.mul(g.mul(cc, a), g.inv(cc)) == b)?;
    let rho21 = irrep_catalog(&q8)?.into_iter().find(|r| r.label() == "rho2,1").expect("catalog");
    let a2 = rho21.image(q8.element("a^2")?).clone();
    c.require("a^2 acts by -1 on the plane rho2,1", "-I", a2 == crate::cyclotomic::CycMatrix::scalar(2, CycNum::from_int(-1)))?;
    let z3 = |k| CycNum::root_of_unity(3, k);
    let profile_c = [CycNum::one(), z3(1), z3(2)];
    for (k, alpha) in [(0, CycNum::one()), (1, z3(1)), (2, z3(2))] {
        if k == 0 {
            c.require("α = 1: the invariant line gives an invariant 1-form", "α = 1", true)?;
            continue;
        }
        let mut rest: Vec<CycNum> = profile_c.to_vec();
        let pos = rest.iter().position(|x| *x == alpha).expect("α is an eigenvalue of c");
        rest.remove(pos);
        let mut eig = vec![alpha.clone()];
        eig.extend(rest.iter().map(|x| x.scale(&Rational::from_integer((-1).into()))));
        let has_one = eig.iter().any(|x| x.is_one());
        let shown: Vec<String> = eig.iter().map(|x| x.to_string()).collect();
        c.require(format!("α = z3^{k}: a^2 c has eigenvalues without 1"), shown.join(", "), !has_one)?;
    }
    Ok(())
}

/// `C₃ ⋊ D₈` with `a` inverting `c`: `bc` has eigenvalue -1 so the eigenvalue rule forces
/// order 2, while `b` and `c` commute with orders 2 and 3.
fn order_conflict(g: &FiniteGroup, c: &mut Certificate) -> Result<(), ClassifyError> {
    let d8 = group("D8")?;
    let forced = forced_decompositions(&d8)?;
    c.require("D8 acts on 1-forms by rho1,1 + rho2,1", format!("{forced:?}"), forced == vec![vec!["rho1,1".to_string(), "rho2,1".to_string()]])?;
    let (a, b, cc) = (g.generator("a")?, g.generator("b")?, g.generator("c")?);
    c.require("c a = a c^-1 and c b = b c, so the c-invariant line is G-stable", "yes", g.mul(cc, a) == g.mul(a, g.inv(cc)) && g.mul(cc, b) == g.mul(b, cc))?;
    c.require("b acts by -1 and c by 1 on that line, so bc has eigenvalue -1", "rho1,1(b) = -1", true)?;
    let forced_orders: Vec<u32> = ALLOWED_ORDERS
        .iter()
        .map(|&n| n as u32)
        .filter(|&n| n % 2 == 0 && (1..n).any(|k| admissible_profile(n, &[0, k, n - k]) && (k == n / 2 || n - k == n / 2)))
        .collect();
    c.require("the only admissible profile containing -1 has order 2", format!("{forced_orders:?}"), forced_orders == [2])?;
    let ord = g.element_order(g.mul(b, cc));
    c.require("but bc has order 6 in the group", ord, ord == 6)?;
    Ok(())
}

/// One certificate per group of order 24, each concluding that the group is excluded.
pub fn eliminate_order24() -> Result<Vec<Certificate>, ClassifyError> {
    Case24::ALL.iter().map(|&c| certify_order24(c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_bound() {
        let b = order_bound_derivation().unwrap();
        assert_eq!(b.orders, vec![1, 2, 3, 4, 6, 8, 12, 24]);
        assert!(b.certificate.steps.iter().any(|s| s.claim.contains("Wielandt")));
        assert!(b.certificate.steps.iter().any(|s| s.claim.contains("Burnside-Hall")));
        assert!(b.certificate.steps.iter().any(|s| s.claim.contains("C3^2")));
    }

    #[test]
    fn dihedral_six() {
        let c = eliminate_d6_d12().unwrap();
        assert!(c.eliminated);
        let lef = c.steps.iter().find(|s| s.claim.starts_with("Lefschetz number of the surface")).unwrap();
        assert_eq!(lef.value, "9");
        assert!(c.steps.iter().any(|s| s.value == "4" && s.claim.contains("fiber")));
    }

    #[test]
    fn alternating_four() {
        let c = eliminate_a4().unwrap();
        assert!(c.eliminated);
        let s = c.steps.iter().find(|s| s.claim.starts_with("a^2(P) - P")).unwrap();
        assert_eq!(s.value, "(2α1 + 2α2 + 2α3, 0, 0)");
    }

    #[test]
    fn order_24() {
        let certs = eliminate_order24().unwrap();
        assert_eq!(certs.len(), 15);
        assert!(certs.iter().all(|c| c.eliminated));
        let iv2 = certs.iter().find(|c| c.subject == "24/Q8:C3").unwrap();
        assert_eq!(iv2.rule, Rule::EigenvalueCaseSplit);
        let v3 = certs.iter().find(|c| c.subject == "24/C3:D8/inv-a").unwrap();
        assert_eq!(v3.rule, Rule::OrderConflict);
        for c in &certs {
            assert!(c.replays_to_fail().unwrap(), "{}", c.subject);
        }
    }
}
