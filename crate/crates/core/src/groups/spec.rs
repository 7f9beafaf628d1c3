//! Catalog of named groups and their realizations.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{closure, perm_mul, FiniteGroup, GroupError};
use crate::cyclotomic::{CycMatrix, CycNum};

const CLOSURE_LIMIT: usize = 5040;

/// The fifteen groups of order 24 whose 2-Sylow subgroup is one of C8, C2xC4,
/// C2^3, Q8, D8, each realized as an explicit semidirect product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Case24 {
    /// C3 x C8.
    C3xC8,
    /// C3 ⋊ C8, the generator of C8 inverting C3.
    C3sC8,
    /// C3 x (C2 x C4).
    C3xC2xC4,
    /// C3 ⋊ (C2 x C4): the involution centralizes, the order-4 generator inverts. ≅ C2 x Q12.
    C3sC2xC4Dic,
    /// C3 ⋊ (C2 x C4): the involution inverts, the order-4 generator centralizes. ≅ C4 x S3.
    C3sC2xC4Sym,
    /// C3 x C2^3.
    C3xC2cube,
    /// C2^3 ⋊ C3 ≅ C2 x A4.
    C2cubesC3,
    /// C3 ⋊ C2^3 with one generator inverting. ≅ C2^2 x S3.
    C3sC2cube,
    /// C3 x Q8.
    C3xQ8,
    /// Q8 ⋊ C3 ≅ SL(2,3).
    Q8sC3,
    /// C3 ⋊ Q8 with kernel ⟨a⟩. ≅ Q24.
    C3sQ8,
    /// C3 x D8.
    C3xD8,
    /// C3 ⋊ D8 with the rotation centralizing. ≅ D24.
    C3sD8Rot,
    /// C3 ⋊ D8 with the rotation inverting and the reflection centralizing.
    C3sD8Refl,
    /// S4.
    S4,
}

impl Case24 {
    pub const ALL: [Case24; 15] = [
        Case24::C3xC8,
        Case24::C3sC8,
        Case24::C3xC2xC4,
        Case24::C3sC2xC4Dic,
        Case24::C3sC2xC4Sym,
        Case24::C3xC2cube,
        Case24::C2cubesC3,
        Case24::C3sC2cube,
        Case24::C3xQ8,
        Case24::Q8sC3,
        Case24::C3sQ8,
        Case24::C3xD8,
        Case24::C3sD8Rot,
        Case24::C3sD8Refl,
        Case24::S4,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Case24::C3xC8 => "C3xC8",
            Case24::C3sC8 => "C3:C8",
            Case24::C3xC2xC4 => "C3xC2xC4",
            Case24::C3sC2xC4Dic => "C3:(C2xC4)/inv-b",
            Case24::C3sC2xC4Sym => "C3:(C2xC4)/inv-a",
            Case24::C3xC2cube => "C3xC2^3",
            Case24::C2cubesC3 => "C2^3:C3",
            Case24::C3sC2cube => "C3:C2^3",
            Case24::C3xQ8 => "C3xQ8",
            Case24::Q8sC3 => "Q8:C3",
            Case24::C3sQ8 => "C3:Q8",
            Case24::C3xD8 => "C3xD8",
            Case24::C3sD8Rot => "C3:D8/inv-b",
            Case24::C3sD8Refl => "C3:D8/inv-a",
            Case24::S4 => "S4",
        }
    }

    /// Isomorphism type of the 2-Sylow subgroup.
    pub fn sylow2(&self) -> GroupSpec {
        match self {
            Case24::C3xC8 | Case24::C3sC8 => GroupSpec::Cyclic(8),
            Case24::C3xC2xC4 | Case24::C3sC2xC4Dic | Case24::C3sC2xC4Sym => GroupSpec::ProductCyclic(vec![2, 4]),
            Case24::C3xC2cube | Case24::C2cubesC3 | Case24::C3sC2cube => GroupSpec::ProductCyclic(vec![2, 2, 2]),
            Case24::C3xQ8 | Case24::Q8sC3 | Case24::C3sQ8 => GroupSpec::BinaryDihedral(8),
            _ => GroupSpec::Dihedral(8),
        }
    }

    /// Relators that the semidirect realization must satisfy.
    fn relators(&self) -> Vec<&'static str> {
        match self {
            Case24::C3xC8 => vec!["c^3", "a^8", "a^-1*c*a*c^-1"],
            Case24::C3sC8 => vec!["c^3", "a^8", "a^-1*c*a*c"],
            Case24::C3xC2xC4 => vec!["c^3", "a^2", "b^4", "a*b*a^-1*b^-1", "a^-1*c*a*c^-1", "b^-1*c*b*c^-1"],
            Case24::C3sC2xC4Dic => vec!["c^3", "a^2", "b^4", "a*b*a^-1*b^-1", "a^-1*c*a*c^-1", "b^-1*c*b*c"],
            Case24::C3sC2xC4Sym => vec!["c^3", "a^2", "b^4", "a*b*a^-1*b^-1", "a^-1*c*a*c", "b^-1*c*b*c^-1"],
            Case24::C3xC2cube => vec!["c^3", "a1^2", "a2^2", "a3^2", "a1^-1*c*a1*c^-1", "a2^-1*c*a2*c^-1", "a3^-1*c*a3*c^-1"],
            Case24::C2cubesC3 => vec!["c^3", "a1^2", "a2^2", "a3^2", "c*a1*c^-1*a1", "c*a2*c^-1*a3", "c*a3*c^-1*a3*a2"],
            Case24::C3sC2cube => vec!["c^3", "a1^2", "a2^2", "a3^2", "a1^-1*c*a1*c^-1", "a2^-1*c*a2*c^-1", "a3^-1*c*a3*c"],
            Case24::C3xQ8 => vec!["c^3", "a^4", "a^2*b^-2", "b^-1*a*b*a", "a^-1*c*a*c^-1", "b^-1*c*b*c^-1"],
            Case24::Q8sC3 => vec!["c^3", "a^4", "a^2*b^-2", "b^-1*a*b*a", "c*a*c^-1*b^-1", "c*b*c^-1*b^-1*a^-1"],
            Case24::C3sQ8 => vec!["c^3", "a^4", "a^2*b^-2", "b^-1*a*b*a", "a^-1*c*a*c^-1", "b^-1*c*b*c"],
            Case24::C3xD8 => vec!["c^3", "a^4", "b^2", "b*a*b*a", "a^-1*c*a*c^-1", "b^-1*c*b*c^-1"],
            Case24::C3sD8Rot => vec!["c^3", "a^4", "b^2", "b*a*b*a", "a^-1*c*a*c^-1", "b^-1*c*b*c"],
            Case24::C3sD8Refl => vec!["c^3", "a^4", "b^2", "b*a*b*a", "a^-1*c*a*c", "b^-1*c*b*c^-1"],
            Case24::S4 => vec![],
        }
    }

    fn build(&self) -> Result<FiniteGroup, GroupError> {
        let c3 = || -> Result<FiniteGroup, GroupError> { Ok(renamed(build_group(&GroupSpec::Cyclic(3))?, &["c"])) };
        let c8 = || -> Result<FiniteGroup, GroupError> { Ok(renamed(build_group(&GroupSpec::Cyclic(8))?, &["a"])) };
        let c2c4 = || build_group(&GroupSpec::ProductCyclic(vec![2, 4]));
        let c2cube = || -> Result<FiniteGroup, GroupError> {
            Ok(renamed(build_group(&GroupSpec::ProductCyclic(vec![2, 2, 2]))?, &["a1", "a2", "a3"]))
        };
        let q8 = || build_group(&GroupSpec::BinaryDihedral(8));
        let d8 = || build_group(&GroupSpec::Dihedral(8));
        // action on C3 = ⟨c⟩ per generator of the complement: "c" fixed or "c^-1" inverted
        let on_c3 = |n: &FiniteGroup, acts: &[&str]| -> Result<Vec<Vec<usize>>, GroupError> {
            acts.iter().map(|w| Ok(vec![n.element(w)?])).collect()
        };
        match self {
            Case24::C3xC8 => { let n = c3()?; let a = on_c3(&n, &["c"])?; semidirect(&n, &c8()?, &a) }
            Case24::C3sC8 => { let n = c3()?; let a = on_c3(&n, &["c^-1"])?; semidirect(&n, &c8()?, &a) }
            Case24::C3xC2xC4 => { let n = c3()?; let a = on_c3(&n, &["c", "c"])?; semidirect(&n, &c2c4()?, &a) }
            Case24::C3sC2xC4Dic => { let n = c3()?; let a = on_c3(&n, &["c", "c^-1"])?; semidirect(&n, &c2c4()?, &a) }
            Case24::C3sC2xC4Sym => { let n = c3()?; let a = on_c3(&n, &["c^-1", "c"])?; semidirect(&n, &c2c4()?, &a) }
            Case24::C3xC2cube => { let n = c3()?; let a = on_c3(&n, &["c", "c", "c"])?; semidirect(&n, &c2cube()?, &a) }
            Case24::C3sC2cube => { let n = c3()?; let a = on_c3(&n, &["c", "c", "c^-1"])?; semidirect(&n, &c2cube()?, &a) }
            Case24::C2cubesC3 => {
                let n = c2cube()?;
                let img = vec![vec![n.element("a1")?, n.element("a3")?, n.element("a2*a3")?]];
                semidirect(&n, &c3()?, &img)
            }
            Case24::C3xQ8 => { let n = c3()?; let a = on_c3(&n, &["c", "c"])?; semidirect(&n, &q8()?, &a) }
            Case24::C3sQ8 => { let n = c3()?; let a = on_c3(&n, &["c", "c^-1"])?; semidirect(&n, &q8()?, &a) }
            Case24::Q8sC3 => {
                let n = q8()?;
                let img = vec![vec![n.element("b")?, n.element("a*b")?]];
                semidirect(&n, &c3()?, &img)
            }
            Case24::C3xD8 => { let n = c3()?; let a = on_c3(&n, &["c", "c"])?; semidirect(&n, &d8()?, &a) }
            Case24::C3sD8Rot => { let n = c3()?; let a = on_c3(&n, &["c", "c^-1"])?; semidirect(&n, &d8()?, &a) }
            Case24::C3sD8Refl => { let n = c3()?; let a = on_c3(&n, &["c^-1", "c"])?; semidirect(&n, &d8()?, &a) }
            Case24::S4 => build_group(&GroupSpec::Symmetric(4)),
        }
    }
}

fn renamed(mut g: FiniteGroup, names: &[&str]) -> FiniteGroup {
    g.generator_names = names.iter().map(|s| s.to_string()).collect();
    g
}

/// `N ⋊ K` where generator `s` of `K` acts on `N` by `n ↦ k_s n k_s^{-1}`, given by the
/// images of the generators of `N`. Generators of the result are those of `N` then `K`.
pub fn semidirect(n: &FiniteGroup, k: &FiniteGroup, action: &[Vec<usize>]) -> Result<FiniteGroup, GroupError> {
    let bad = |why: String| GroupError::InconsistentPresentation("semidirect product".into(), why);
    if action.len() != k.generators().len() {
        return Err(bad("one automorphism per complement generator is required".into()));
    }
    let mut gen_auts = Vec::new();
    for images in action {
        let aut = n
            .extend_homomorphism(images, |x, y| n.mul(x, y), n.identity())
            .ok_or_else(|| bad("generator images do not define an endomorphism".into()))?;
        let mut sorted = aut.clone();
        sorted.sort_unstable();
        if sorted != (0..n.order()).collect::<Vec<_>>() {
            return Err(bad("endomorphism is not bijective".into()));
        }
        gen_auts.push(aut);
    }
    // φ_{y s} = φ_y ∘ φ_s, extended along the Cayley graph of K
    let mut phi: Vec<Option<Vec<usize>>> = vec![None; k.order()];
    phi[k.identity()] = Some((0..n.order()).collect());
    for (y, edge) in k.bfs_tree() {
        if let Some((x, s)) = edge {
            let px = phi[x].as_ref().expect("parent visited first");
            phi[y] = Some(gen_auts[s].iter().map(|&v| px[v]).collect());
        }
    }
    let phi: Vec<Vec<usize>> = phi.into_iter().map(|p| p.expect("K is generated")).collect();
    for a in k.elements() {
        for b in k.elements() {
            let composed: Vec<usize> = phi[b].iter().map(|&v| phi[a][v]).collect();
            if composed != phi[k.mul(a, b)] {
                return Err(bad("action is not a homomorphism into Aut(N)".into()));
            }
        }
    }
    let (nn, nk) = (n.order(), k.order());
    let idx = |x: usize, y: usize| x * nk + y;
    let mut table = vec![vec![0; nn * nk]; nn * nk];
    for x1 in 0..nn {
        for y1 in 0..nk {
            for x2 in 0..nn {
                for y2 in 0..nk {
                    table[idx(x1, y1)][idx(x2, y2)] = idx(n.mul(x1, phi[y1][x2]), k.mul(y1, y2));
                }
            }
        }
    }
    let mut gens = Vec::new();
    let mut names = Vec::new();
    for (g, name) in n.generators().iter().zip(n.generator_names()) {
        gens.push(idx(*g, k.identity()));
        names.push(name.clone());
    }
    for (g, name) in k.generators().iter().zip(k.generator_names()) {
        gens.push(idx(n.identity(), *g));
        names.push(name.clone());
    }
    FiniteGroup::from_table(table, gens, names)
}

pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<FiniteGroup, GroupError> {
    let trivial: Vec<Vec<usize>> = b.generators().iter().map(|_| a.generators().to_vec()).collect();
    semidirect(a, b, &trivial)
}

/// Named groups used throughout the classification.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Cyclic(u32),
    ProductCyclic(Vec<u32>),
    /// Dihedral group of the given order `2n`.
    Dihedral(u32),
    /// Binary dihedral (dicyclic) group of the given order `4n`.
    BinaryDihedral(u32),
    Symmetric(u32),
    Alternating(u32),
    Heisenberg27,
    /// `(C_n x C_m) ⋊ C2` with the involution acting by inversion.
    GeneralizedDihedral(u32, u32),
    Order24(Case24),
}

impl GroupSpec {
    pub fn expected_order(&self) -> usize {
        match self {
            GroupSpec::Cyclic(n) => *n as usize,
            GroupSpec::ProductCyclic(v) => v.iter().map(|&n| n as usize).product(),
            GroupSpec::Dihedral(n) | GroupSpec::BinaryDihedral(n) => *n as usize,
            GroupSpec::Symmetric(n) => (1..=*n as usize).product(),
            GroupSpec::Alternating(n) => (1..=*n as usize).product::<usize>() / 2,
            GroupSpec::Heisenberg27 => 27,
            GroupSpec::GeneralizedDihedral(n, m) => 2 * (*n as usize) * (*m as usize),
            GroupSpec::Order24(_) => 24,
        }
    }

    fn relators(&self) -> Vec<String> {
        let names = ["a", "b", "c", "d", "e", "f"];
        match self {
            GroupSpec::Cyclic(n) => vec![format!("a^{n}")],
            GroupSpec::ProductCyclic(v) => {
                let mut r: Vec<String> = v.iter().enumerate().map(|(i, n)| format!("{}^{n}", names[i])).collect();
                for i in 0..v.len() {
                    for j in i + 1..v.len() {
                        r.push(format!("{0}*{1}*{0}^-1*{1}^-1", names[i], names[j]));
                    }
                }
                r
            }
            GroupSpec::Dihedral(m) => vec![format!("a^{}", m / 2), "b^2".into(), "b*a*b*a".into()],
            GroupSpec::BinaryDihedral(m) => {
                let n = m / 4;
                vec![format!("a^{}", 2 * n), format!("a^{n}*b^-2"), "b^-1*a*b*a".into()]
            }
            GroupSpec::Heisenberg27 => vec![
                "x^3".into(),
                "y^3".into(),
                "x^-1*y^-1*x*y*x*y^-1*x^-1*y*x*x^-1".into(),
                "x^-1*y^-1*x*y*y*y^-1*x^-1*y*x*y^-1".into(),
            ],
            GroupSpec::GeneralizedDihedral(n, m) => {
                let mut r = vec!["i^2".to_string()];
                if *n > 1 {
                    r.push(format!("x^{n}"));
                    r.push("i*x*i*x".into());
                }
                if *m > 1 {
                    r.push(format!("y^{m}"));
                    r.push("i*y*i*y".into());
                }
                if *n > 1 && *m > 1 {
                    r.push("x*y*x^-1*y^-1".into());
                }
                r
            }
            GroupSpec::Order24(c) => c.relators().into_iter().map(String::from).collect(),
            GroupSpec::Symmetric(_) | GroupSpec::Alternating(_) => vec![],
        }
    }

    fn realize(&self) -> Result<FiniteGroup, GroupError> {
        let unknown = || GroupError::UnknownSpec(self.to_string());
        match self {
            GroupSpec::Cyclic(n) => {
                let n = *n as usize;
                if n == 0 {
                    return Err(unknown());
                }
                let a: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
                let c = closure(&[a], (0..n).collect(), |p, q| perm_mul(p, q), |p| p.clone(), CLOSURE_LIMIT)?;
                FiniteGroup::from_closure(c, &["a"])
            }
            GroupSpec::ProductCyclic(v) => {
                if v.is_empty() || v.len() > 6 || v.contains(&0) {
                    return Err(unknown());
                }
                let k = v.len();
                let gens: Vec<Vec<u32>> = (0..k).map(|i| (0..k).map(|j| u32::from(i == j)).collect()).collect();
                let mods = v.clone();
                let c = closure(
                    &gens,
                    vec![0; k],
                    |p, q| p.iter().zip(q).zip(&mods).map(|((x, y), m)| (x + y) % m).collect(),
                    |p| p.clone(),
                    CLOSURE_LIMIT,
                )?;
                let names = ["a", "b", "c", "d", "e", "f"];
                FiniteGroup::from_closure(c, &names[..k])
            }
            GroupSpec::Dihedral(m) => {
                if *m < 6 || m % 2 == 1 {
                    return Err(unknown());
                }
                let n = (*m / 2) as usize;
                let a: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
                let b: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
                let c = closure(&[a, b], (0..n).collect(), |p, q| perm_mul(p, q), |p| p.clone(), CLOSURE_LIMIT)?;
                FiniteGroup::from_closure(c, &["a", "b"])
            }
            GroupSpec::BinaryDihedral(m) => {
                if *m < 4 || m % 4 != 0 {
                    return Err(unknown());
                }
                let n = m / 4;
                let z = CycNum::root_of_unity(2 * n, 1);
                let a = CycMatrix::diag(vec![z.clone(), z.inv().expect("root of unity is invertible")]);
                let b = CycMatrix::from_ints(&[vec![0, -1], vec![1, 0]]);
                let c = closure(
                    &[a, b],
                    CycMatrix::identity(2),
                    |p, q| p.try_mul(q).expect("2x2 product"),
                    move |p| p.key_at(2 * n),
                    CLOSURE_LIMIT,
                )?;
                FiniteGroup::from_closure(c, &["a", "b"])
            }
            GroupSpec::Symmetric(n) => {
                let n = *n as usize;
                if !(2..=7).contains(&n) {
                    return Err(unknown());
                }
                let a: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
                let mut b: Vec<usize> = (0..n).collect();
                b.swap(0, 1);
                let c = closure(&[a, b], (0..n).collect(), |p, q| perm_mul(p, q), |p| p.clone(), CLOSURE_LIMIT)?;
                FiniteGroup::from_closure(c, &["a", "b"])
            }
            GroupSpec::Alternating(n) => {
                let n = *n as usize;
                if !(3..=7).contains(&n) {
                    return Err(unknown());
                }
                // a = (0 1 2); for A4, b = (0 1)(2 3)
                let mut a: Vec<usize> = (0..n).collect();
                a[0] = 1;
                a[1] = 2;
                a[2] = 0;
                let b: Vec<usize> = if n == 3 {
                    a.clone()
                } else if n == 4 {
                    vec![1, 0, 3, 2]
                } else if n % 2 == 1 {
                    (0..n).map(|i| (i + 1) % n).collect()
                } else {
                    (0..n).map(|i| if i == 0 { 0 } else { i % (n - 1) + 1 }).collect()
                };
                let c = closure(&[a, b], (0..n).collect(), |p, q| perm_mul(p, q), |p| p.clone(), CLOSURE_LIMIT)?;
                FiniteGroup::from_closure(c, &["a", "b"])
            }
            GroupSpec::Heisenberg27 => {
                // unitriangular matrices over F3 as (x, y, z)
                let mul = |p: &[u8; 3], q: &[u8; 3]| [(p[0] + q[0]) % 3, (p[1] + q[1]) % 3, (p[2] + q[2] + p[0] * q[1]) % 3];
                let c = closure(&[[1, 0, 0], [0, 1, 0]], [0, 0, 0], mul, |p| *p, CLOSURE_LIMIT)?;
                FiniteGroup::from_closure(c, &["x", "y"])
            }
            GroupSpec::GeneralizedDihedral(n, m) => {
                if *n == 0 || *m == 0 {
                    return Err(unknown());
                }
                let (n, m) = (*n as i64, *m as i64);
                let mul = move |p: &(i64, i64, i64), q: &(i64, i64, i64)| {
                    let s = if p.2 == 0 { 1 } else { -1 };
                    ((p.0 + s * q.0).rem_euclid(n), (p.1 + s * q.1).rem_euclid(m), (p.2 + q.2) % 2)
                };
                let mut gens = Vec::new();
                let mut names = Vec::new();
                if n > 1 {
                    gens.push((1, 0, 0));
                    names.push("x");
                }
                if m > 1 {
                    gens.push((0, 1, 0));
                    names.push("y");
                }
                gens.push((0, 0, 1));
                names.push("i");
                let c = closure(&gens, (0, 0, 0), mul, |p| *p, CLOSURE_LIMIT)?;
                FiniteGroup::from_closure(c, &names)
            }
            GroupSpec::Order24(c) => c.build(),
        }
    }
}

/// Build a catalog group and verify its defining relations and order.
pub fn build_group(spec: &GroupSpec) -> Result<FiniteGroup, GroupError> {
    let g = spec.realize()?.with_spec(spec.clone());
    if g.order() != spec.expected_order() {
        return Err(GroupError::InconsistentPresentation(
            spec.to_string(),
            format!("realization has order {} instead of {}", g.order(), spec.expected_order()),
        ));
    }
    g.verify_relators(&spec.relators())?;
    Ok(g)
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "C{n}"),
            GroupSpec::ProductCyclic(v) => {
                if v.len() > 1 && v.iter().all(|&x| x == v[0]) {
                    write!(f, "C{}^{}", v[0], v.len())
                } else {
                    let parts: Vec<String> = v.iter().map(|n| format!("C{n}")).collect();
                    write!(f, "{}", parts.join("x"))
                }
            }
            GroupSpec::Dihedral(n) => write!(f, "D{n}"),
            GroupSpec::BinaryDihedral(n) => write!(f, "Q{n}"),
            GroupSpec::Symmetric(n) => write!(f, "S{n}"),
            GroupSpec::Alternating(n) => write!(f, "A{n}"),
            GroupSpec::Heisenberg27 => write!(f, "Heis27"),
            GroupSpec::GeneralizedDihedral(3, 3) => write!(f, "C3^2:C2"),
            GroupSpec::GeneralizedDihedral(n, m) => write!(f, "Dih(C{n}xC{m})"),
            GroupSpec::Order24(c) => write!(f, "24/{}", c.label()),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let unknown = || GroupError::UnknownSpec(s.to_string());
        let num = |x: &str| x.parse::<u32>().map_err(|_| unknown());
        if let Some(label) = t.strip_prefix("24/") {
            return Case24::ALL.iter().find(|c| c.label() == label).map(|c| GroupSpec::Order24(*c)).ok_or_else(unknown);
        }
        match t {
            "Heis27" | "H27" | "heisenberg27" => return Ok(GroupSpec::Heisenberg27),
            "C3^2:C2" | "C3xC3:C2" => return Ok(GroupSpec::GeneralizedDihedral(3, 3)),
            _ => {}
        }
        if let Some(inner) = t.strip_prefix("Dih(").and_then(|r| r.strip_suffix(')')) {
            let parts: Vec<&str> = inner.split('x').collect();
            return match parts.as_slice() {
                [a] => Ok(GroupSpec::GeneralizedDihedral(1, num(a.trim_start_matches('C'))?)),
                [a, b] => Ok(GroupSpec::GeneralizedDihedral(num(a.trim_start_matches('C'))?, num(b.trim_start_matches('C'))?)),
                _ => Err(unknown()),
            };
        }
        if let Some((base, pow)) = t.split_once('^') {
            let n = num(base.strip_prefix('C').ok_or_else(unknown)?)?;
            let k = num(pow)? as usize;
            return if k == 1 { Ok(GroupSpec::Cyclic(n)) } else { Ok(GroupSpec::ProductCyclic(vec![n; k])) };
        }
        if t.contains('x') {
            let v = t
                .split('x')
                .map(|p| p.strip_prefix('C').ok_or_else(unknown).and_then(num))
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(GroupSpec::ProductCyclic(v));
        }
        let (head, rest) = t.split_at(1.min(t.len()));
        let n = num(rest)?;
        match head {
            "C" => Ok(GroupSpec::Cyclic(n)),
            "D" => Ok(GroupSpec::Dihedral(n)),
            "Q" => Ok(GroupSpec::BinaryDihedral(n)),
            "S" => Ok(GroupSpec::Symmetric(n)),
            "A" => Ok(GroupSpec::Alternating(n)),
            _ => Err(unknown()),
        }
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
