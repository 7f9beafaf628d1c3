use std::sync::Arc;

use super::{RepError, Representation};
use crate::cyclotomic::{CycMatrix, CycNum};
use crate::groups::{FiniteGroup, GroupSpec};

fn z(n: u32, k: i64) -> CycNum {
    CycNum::root_of_unity(n, k)
}

fn one_dim(values: &[CycNum]) -> Vec<CycMatrix> {
    values.iter().map(|v| CycMatrix::scalar(1, v.clone())).collect()
}

fn antidiag(x: CycNum, y: CycNum) -> CycMatrix {
    CycMatrix::from_rows(vec![vec![CycNum::zero(), x], vec![y, CycNum::zero()]]).expect("2x2")
}

fn rotation(n: u32, k: i64) -> CycMatrix {
    CycMatrix::diag(vec![z(n, k), z(n, -k)])
}

/// The complete list of irreducible representations up to equivalence, for
/// abelian, dihedral, binary dihedral, generalized dihedral groups and `A₄`.
pub fn irrep_catalog(group: &Arc<FiniteGroup>) -> Result<Vec<Representation>, RepError> {
    let outside = || RepError::OutsideCatalog(group.name().to_string());
    let spec = group.spec().ok_or_else(outside)?.clone();
    let mut out = Vec::new();
    let mut push = |label: String, images: Vec<CycMatrix>| -> Result<(), RepError> {
        out.push(Representation::new(group.clone(), label, images)?);
        Ok(())
    };
    match spec {
        GroupSpec::Cyclic(n) => abelian(&[n], &mut push)?,
        GroupSpec::ProductCyclic(v) => abelian(&v, &mut push)?,
        GroupSpec::Dihedral(m) => {
            let n = m / 2;
            let signs: &[(i64, i64)] = if n % 2 == 0 { &[(1, 1), (1, -1), (-1, 1), (-1, -1)] } else { &[(1, 1), (1, -1)] };
            for (i, &(a, b)) in signs.iter().enumerate() {
                push(format!("rho1,{i}"), one_dim(&[CycNum::from_int(a), CycNum::from_int(b)]))?;
            }
            let top = if n % 2 == 0 { n / 2 - 1 } else { (n - 1) / 2 };
            for k in 1..=top {
                push(format!("rho2,{k}"), vec![rotation(n, k as i64), antidiag(CycNum::one(), CycNum::one())])?;
            }
        }
        GroupSpec::BinaryDihedral(m) => {
            let n = m / 4;
            let lines: Vec<(i64, CycNum)> = if n % 2 == 0 {
                vec![(1, CycNum::one()), (1, CycNum::from_int(-1)), (-1, CycNum::one()), (-1, CycNum::from_int(-1))]
            } else {
                vec![(1, CycNum::one()), (1, CycNum::from_int(-1)), (-1, z(4, 1)), (-1, z(4, 3))]
            };
            for (i, (a, b)) in lines.into_iter().enumerate() {
                push(format!("rho1,{i}"), one_dim(&[CycNum::from_int(a), b]))?;
            }
            for l in 1..n {
                let l = l as i64;
                push(format!("rho2,{l}"), vec![rotation(2 * n, l), antidiag(z(4, l), z(4, l))])?;
            }
        }
        GroupSpec::Alternating(4) => {
            for k in 0..3 {
                push(format!("rho1,{k}"), one_dim(&[z(3, k), CycNum::one()]))?;
            }
            let a = CycMatrix::from_ints(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]);
            let b = CycMatrix::from_ints(&[vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]]);
            push("rho3".into(), vec![a, b])?;
        }
        GroupSpec::GeneralizedDihedral(n, m) => generalized_dihedral(n, m, &mut push)?,
        _ => return Err(outside()),
    }
    Ok(out)
}

fn abelian(mods: &[u32], push: &mut impl FnMut(String, Vec<CycMatrix>) -> Result<(), RepError>) -> Result<(), RepError> {
    let mut ks = vec![0u32; mods.len()];
    loop {
        let values: Vec<CycNum> = ks.iter().zip(mods).map(|(&k, &n)| z(n, k as i64)).collect();
        let label = format!("chi({})", ks.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","));
        push(label, one_dim(&values))?;
        let mut i = mods.len();
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            ks[i] += 1;
            if ks[i] < mods[i] {
                break;
            }
            ks[i] = 0;
        }
    }
}

fn generalized_dihedral(
    n: u32,
    m: u32,
    push: &mut impl FnMut(String, Vec<CycMatrix>) -> Result<(), RepError>,
) -> Result<(), RepError> {
    for j in 0..n {
        for k in 0..m {
            let neg = ((n - j) % n, (m - k) % m);
            let mut h_images = Vec::new();
            if n > 1 {
                h_images.push((n, j));
            }
            if m > 1 {
                h_images.push((m, k));
            }
            if neg == (j, k) {
                for (s, sign) in [("+", 1), ("-", -1)] {
                    let mut v: Vec<CycNum> = h_images.iter().map(|&(o, e)| z(o, e as i64)).collect();
                    v.push(CycNum::from_int(sign));
                    push(format!("chi({j},{k}){s}"), one_dim(&v))?;
                }
            } else if (j, k) < neg {
                let mut v: Vec<CycMatrix> = h_images.iter().map(|&(o, e)| rotation(o, e as i64)).collect();
                v.push(antidiag(CycNum::one(), CycNum::one()));
                push(format!("psi({j},{k})"), v)?;
            }
        }
    }
    Ok(())
}
