use std::fmt;

use serde::{Deserialize, Serialize};

use super::{IntMatrix, TorusError};
use crate::cyclotomic::{euler_phi, CycMatrix, CycNum, RootLabel};

/// Period of an elliptic factor `C/(Z + Zτ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Period {
    /// No complex multiplication; the only endomorphisms are integers.
    Generic,
    /// `τ = ζ₃`.
    Zeta3,
    /// `τ = ζ₄`.
    Zeta4,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticFactor {
    pub period: Period,
    /// Factors with equal period and curve label are isomorphic.
    pub curve: String,
}

impl EllipticFactor {
    pub fn new(period: Period, curve: impl Into<String>) -> Self {
        EllipticFactor { period, curve: curve.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelKind {
    /// `copies` copies of `Z[ζ_N]`, with `ζ_N` acting holomorphically by `ζ_N^k` for `k` in the type.
    Cm { conductor: u32, copies: usize, holomorphic_type: Vec<u32> },
    Product(Vec<EllipticFactor>),
    /// Obtained from another model by a change of lattice.
    Derived(String),
}

/// A complex torus `Cᵈ/Λ` with `Λ = Z²ᵈ` in a fixed basis.
///
/// The complex structure is the exact period matrix `Φ` (`d × 2d`): a lattice
/// vector `x` sits at `Φx`. A linear map `M` of the lattice is holomorphic when
/// `ΦM = RΦ` for some `R`. Generic factors use the formal period `i` together
/// with extra commutation constraints that cut the endomorphisms down to integers.
#[derive(Clone, Debug)]
pub struct TorusModel {
    name: String,
    kind: ModelKind,
    phi: CycMatrix,
    commutant: Vec<CycMatrix>,
    basis_labels: Vec<String>,
}

fn period_value(p: Period) -> CycNum {
    match p {
        Period::Generic | Period::Zeta4 => CycNum::root_of_unity(4, 1),
        Period::Zeta3 => CycNum::root_of_unity(3, 1),
    }
}

impl TorusModel {
    pub fn product(name: impl Into<String>, factors: Vec<EllipticFactor>) -> Result<Self, TorusError> {
        let d = factors.len();
        if d == 0 {
            return Err(TorusError::InvalidModel("a product needs at least one factor".into()));
        }
        let mut rows = vec![vec![CycNum::zero(); 2 * d]; d];
        for (i, f) in factors.iter().enumerate() {
            rows[i][2 * i] = CycNum::one();
            rows[i][2 * i + 1] = period_value(f.period);
        }
        let phi = CycMatrix::from_rows(rows)?;
        let mut commutant = Vec::new();
        let mut classes: Vec<(Period, &str)> = Vec::new();
        for f in &factors {
            if !classes.contains(&(f.period, f.curve.as_str())) {
                classes.push((f.period, f.curve.as_str()));
            }
        }
        if classes.len() > 1 {
            for c in &classes {
                let blocks: Vec<IntMatrix> =
                    factors.iter().map(|f| IntMatrix::scalar(2, i64::from((f.period, f.curve.as_str()) == *c))).collect();
                commutant.push(IntMatrix::block_diag(&blocks).to_cyc());
            }
        }
        if factors.iter().any(|f| f.period == Period::Generic) {
            let nil = IntMatrix::from_rows(&[vec![0, 1], vec![0, 0]]);
            let blocks: Vec<IntMatrix> =
                factors.iter().map(|f| if f.period == Period::Generic { nil.clone() } else { IntMatrix::zeros(2, 2) }).collect();
            commutant.push(IntMatrix::block_diag(&blocks).to_cyc());
        }
        let basis_labels = (1..=d).flat_map(|i| [format!("x{i}"), format!("y{i}")]).collect();
        Ok(TorusModel { name: name.into(), kind: ModelKind::Product(factors), phi, commutant, basis_labels })
    }

    pub fn cm(name: impl Into<String>, conductor: u32, copies: usize, holomorphic_type: Vec<u32>) -> Result<Self, TorusError> {
        let n = conductor;
        let phi_n = euler_phi(n);
        let units: Vec<u32> = (1..n).filter(|k| num_integer::gcd(*k, n) == 1).collect();
        let mut ty = holomorphic_type.clone();
        ty.iter_mut().for_each(|k| *k %= n);
        ty.sort_unstable();
        ty.dedup();
        let partitions = ty.len() * 2 == phi_n
            && ty.iter().all(|k| units.contains(k) && !ty.contains(&((n - k) % n)))
            && copies > 0;
        if n < 3 || !partitions {
            return Err(TorusError::InvalidModel(format!(
                "CM type {holomorphic_type:?} does not split the units mod {n} into conjugate halves"
            )));
        }
        let d = copies * ty.len();
        let mut rows = Vec::with_capacity(d);
        for c in 0..copies {
            for &k in &ty {
                let mut row = vec![CycNum::zero(); copies * phi_n];
                for j in 0..phi_n {
                    row[c * phi_n + j] = CycNum::root_of_unity(n, (k as i64) * j as i64);
                }
                rows.push(row);
            }
        }
        let phi = CycMatrix::from_rows(rows)?;
        let basis_labels =
            (0..copies).flat_map(|c| (0..phi_n).map(move |j| if copies == 1 { format!("z^{j}") } else { format!("c{}.z^{j}", c + 1) })).collect();
        Ok(TorusModel {
            name: name.into(),
            kind: ModelKind::Cm { conductor: n, copies, holomorphic_type: ty },
            phi,
            commutant: Vec::new(),
            basis_labels,
        })
    }

    pub(crate) fn derived(name: impl Into<String>, phi: CycMatrix, commutant: Vec<CycMatrix>) -> Self {
        let name = name.into();
        let basis_labels = (1..=phi.cols()).map(|i| format!("f{i}")).collect();
        TorusModel { kind: ModelKind::Derived(name.clone()), name, phi, commutant, basis_labels }
    }

    /// Named lattice presets.
    pub fn preset(name: &str) -> Result<Self, TorusError> {
        use Period::*;
        let generic = |labels: &[&str]| labels.iter().map(|l| EllipticFactor::new(Generic, *l)).collect::<Vec<_>>();
        match name {
            "E3" | "E3_generic" => Self::product(name, generic(&["E", "E", "E"])),
            "E1xE2xE3" => Self::product(name, generic(&["E1", "E2", "E3"])),
            "E1xE2xE2" => Self::product(name, generic(&["E1", "E2", "E2"])),
            "E3_zeta3" => Self::product(name, vec![EllipticFactor::new(Zeta3, "E"); 3]),
            "E3_zeta4" => Self::product(name, vec![EllipticFactor::new(Zeta4, "E"); 3]),
            "Z_zeta7" => Self::cm(name, 7, 1, vec![1, 2, 4]),
            _ => Err(TorusError::InvalidModel(format!("unknown lattice preset {name}"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.phi.rows()
    }

    pub fn rank(&self) -> usize {
        self.phi.cols()
    }

    pub fn phi(&self) -> &CycMatrix {
        &self.phi
    }

    pub fn commutant(&self) -> &[CycMatrix] {
        &self.commutant
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis_labels
    }

    /// The matrix `R` with `ΦM = RΦ`, if `M` is complex linear.
    pub fn holomorphic_matrix(&self, m: &IntMatrix) -> Result<CycMatrix, TorusError> {
        if m.rows() != self.rank() || m.cols() != self.rank() {
            return Err(TorusError::Dimension(format!("{}x{} matrix on a rank {} lattice", m.rows(), m.cols(), self.rank())));
        }
        let pm = self.phi.try_mul(&m.to_cyc())?;
        match self.phi.transpose().solve(&pm.transpose()) {
            Ok(rt) => Ok(rt.transpose()),
            Err(crate::cyclotomic::CycError::Inconsistent) => Err(TorusError::NotHolomorphic(m.to_string())),
            Err(e) => Err(e.into()),
        }
    }

    /// Check that `M` is a lattice automorphism respecting the complex structure;
    /// returns its holomorphic matrix.
    pub fn check_linear(&self, m: &IntMatrix) -> Result<CycMatrix, TorusError> {
        let r = self.holomorphic_matrix(m)?;
        if !m.is_unimodular() {
            return Err(TorusError::NotUnimodular(m.to_string()));
        }
        self.check_commutant(m)?;
        Ok(r)
    }

    pub(crate) fn check_commutant(&self, m: &IntMatrix) -> Result<(), TorusError> {
        let mc = m.to_cyc();
        for x in &self.commutant {
            if mc.try_mul(x)? != x.try_mul(&mc)? {
                return Err(TorusError::NotHolomorphic(format!("{m} is not an endomorphism of {}", self.name)));
            }
        }
        Ok(())
    }

    /// Holomorphic eigenvalues of a finite-order lattice automorphism.
    pub fn holomorphic_eigenvalues(&self, m: &IntMatrix) -> Result<Vec<RootLabel>, TorusError> {
        let r = self.holomorphic_matrix(m)?;
        let order = r.multiplicative_order(super::ORDER_BOUND)?;
        Ok(r.eigenvalue_profile(order)?)
    }
}

impl fmt::Display for TorusModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ModelKind::Cm { conductor, copies, holomorphic_type } => {
                write!(f, "{} (Z[z{conductor}]^{copies}, type {holomorphic_type:?})", self.name)
            }
            ModelKind::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(|x| format!("{}:{:?}", x.curve, x.period)).collect();
                write!(f, "{} ({})", self.name, parts.join(" x "))
            }
            ModelKind::Derived(s) => write!(f, "{s}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta3_multiplication_is_holomorphic() {
        let e = TorusModel::preset("E3_zeta3").unwrap();
        let w = IntMatrix::from_rows(&[vec![0, -1], vec![1, -1]]);
        let g3 = IntMatrix::block_diag(&[w.clone(), w.clone(), w]);
        let r = e.check_linear(&g3).unwrap();
        assert_eq!(r, CycMatrix::scalar(3, CycNum::root_of_unity(3, 1)));
        let labels: Vec<String> = e.holomorphic_eigenvalues(&g3).unwrap().iter().map(|l| l.to_string()).collect();
        assert_eq!(labels, vec!["z3", "z3", "z3"]);
    }

    #[test]
    fn klein_companion_eigenvalues() {
        let k = TorusModel::preset("Z_zeta7").unwrap();
        let c = CycMatrix::companion(&crate::cyclotomic::cyclotomic_polynomial(7));
        let g7 = IntMatrix::from_cyc(&c).unwrap();
        let mut labels: Vec<String> = k.holomorphic_eigenvalues(&g7).unwrap().iter().map(|l| l.to_string()).collect();
        labels.sort();
        assert_eq!(labels, vec!["z7", "z7^2", "z7^4"]);
        assert_eq!(k.holomorphic_eigenvalues(&IntMatrix::identity(6)).unwrap().len(), 3);
    }

    #[test]
    fn generic_factors_only_admit_integers() {
        let e = TorusModel::preset("E1xE2xE3").unwrap();
        let rot = IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]]);
        let m = IntMatrix::block_diag(&[rot, IntMatrix::identity(2), IntMatrix::identity(2)]);
        assert!(e.holomorphic_matrix(&m).is_ok());
        assert!(matches!(e.check_linear(&m), Err(TorusError::NotHolomorphic(_))));
        let swap = IntMatrix::from_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]).kron(&IntMatrix::identity(2));
        assert!(e.check_linear(&swap).is_err());
        let e = TorusModel::preset("E3").unwrap();
        assert!(e.check_linear(&swap).is_ok());
    }

    #[test]
    fn cm_type_must_split_units() {
        assert!(TorusModel::cm("bad", 7, 1, vec![1, 6, 2]).is_err());
        assert!(TorusModel::cm("ok", 7, 1, vec![3, 5, 6]).is_ok());
    }
}
