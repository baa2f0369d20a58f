use super::slopes::{resolved_newton, slope_factor};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::padic::{FieldElement, NewtonPolygon, PadicScalar, Rat, UnramifiedElement, UnramifiedField};
use num_integer::Integer;
use std::sync::Arc;

pub type KMatrix = Matrix<UnramifiedElement>;

/// Largest rank·s for which slopes are computed.
pub const MAX_TWISTED_SIZE: usize = 24;

/// A finite-dimensional K-vector space, K = Q_{p^s}, with φ(v) = Φ σ(v).
#[derive(Clone, Debug)]
pub struct Isocrystal {
    field: Arc<UnramifiedField>,
    phi: KMatrix,
}

/// An isoclinic piece of an isocrystal: the columns of `basis` span a φ-stable subspace of one slope.
#[derive(Clone, Debug)]
pub struct SlopeComponent {
    pub slope: Rat,
    pub basis: KMatrix,
}

impl SlopeComponent {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// A component of slope b/a in lowest terms is simple exactly when its dimension is a.
    pub fn is_simple(&self) -> bool {
        self.dim() as i64 == *self.slope.denom()
    }
}

pub(crate) fn sigma_matrix(m: &KMatrix) -> KMatrix {
    m.map(|x| x.frobenius())
}

pub(crate) fn sigma_inv_matrix(m: &KMatrix) -> KMatrix {
    m.map(|x| x.frobenius_pow(-1))
}

impl Isocrystal {
    pub fn new(field: &Arc<UnramifiedField>, phi: KMatrix) -> Result<Self> {
        if phi.rows() != phi.cols() || phi.rows() == 0 {
            return Err(Error::Invalid("Frobenius matrix must be square and nonempty".into()));
        }
        if phi.entries().iter().any(|x| x.field() != field && **x.field() != **field) {
            return Err(Error::FieldMismatch("Frobenius entries over a different field".into()));
        }
        if phi.det().is_zero() {
            return Err(Error::Precision("det Φ vanishes at precision".into()));
        }
        Ok(Isocrystal { field: field.clone(), phi })
    }

    /// Φ with integer entries, at the field's working precision.
    pub fn from_int_rows(field: &Arc<UnramifiedField>, rows: &[Vec<i64>]) -> Result<Self> {
        let m = Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| UnramifiedElement::from_int(field, x)).collect()).collect(),
        )?;
        Self::new(field, m)
    }

    pub fn field(&self) -> &Arc<UnramifiedField> {
        &self.field
    }

    pub fn prime(&self) -> u64 {
        self.field.prime()
    }

    pub fn rank(&self) -> usize {
        self.phi.rows()
    }

    pub fn phi(&self) -> &KMatrix {
        &self.phi
    }

    /// φ applied to the columns of `m`.
    pub fn apply(&self, m: &KMatrix) -> KMatrix {
        self.phi.mul(&sigma_matrix(m))
    }

    /// Span of φ^{-1} of the columns of `m`: σ^{-1}(Φ^{-1} m).
    pub fn apply_inverse(&self, m: &KMatrix) -> Result<KMatrix> {
        Ok(sigma_inv_matrix(&self.phi.inverse()?.mul(m)))
    }

    /// The isocrystal in the basis given by the columns of `b`: B^{-1} Φ σ(B).
    pub fn change_basis(&self, b: &KMatrix) -> Result<Self> {
        let phi = b.inverse()?.mul(&self.apply(b));
        Self::new(&self.field, phi)
    }

    /// v_p(det Φ).
    pub fn degree(&self) -> Result<i64> {
        self.phi
            .det()
            .val()
            .ok_or_else(|| Error::Precision("det Φ is not resolved at precision".into()))
    }

    pub fn slope(&self) -> Result<Rat> {
        Ok(Rat::new(self.degree()?, self.rank() as i64))
    }

    /// Ψ = Φ σ(Φ) ⋯ σ^{s−1}(Φ), the K-linear map φ^s.
    pub fn linearized(&self) -> KMatrix {
        let s = self.field.degree();
        let mut psi = self.phi.clone();
        let mut twisted = self.phi.clone();
        for _ in 1..s {
            twisted = sigma_matrix(&twisted);
            psi = psi.mul(&twisted);
        }
        psi
    }

    fn check_size(&self) -> Result<()> {
        if self.rank() * self.field.degree() > MAX_TWISTED_SIZE {
            return Err(Error::Invalid(format!(
                "rank·s = {} exceeds the supported bound {MAX_TWISTED_SIZE}",
                self.rank() * self.field.degree()
            )));
        }
        Ok(())
    }

    fn charpoly_over_qp(m: &KMatrix) -> Result<Vec<PadicScalar>> {
        m.charpoly()
            .into_iter()
            .map(|c| {
                if !c.is_in_base() {
                    return Err(Error::Precision("characteristic polynomial is not over Q_p at precision".into()));
                }
                Ok(c.coords()[0].clone())
            })
            .collect()
    }

    /// Frobenius slopes with multiplicity, ascending.
    pub fn newton_slopes(&self) -> Result<Vec<Rat>> {
        self.check_size()?;
        let s = Rat::from_integer(self.field.degree() as i64);
        let cp = Self::charpoly_over_qp(&self.linearized())?;
        let np = resolved_newton(&cp)?;
        let mut slopes: Vec<Rat> = np.root_valuations().into_iter().map(|v| v / s).collect();
        slopes.sort();
        Ok(slopes)
    }

    pub fn newton_polygon(&self) -> Result<NewtonPolygon> {
        Ok(NewtonPolygon::from_slopes(&self.newton_slopes()?))
    }

    /// The slope decomposition D = ⊕ D_λ, ascending in λ.
    pub fn components(&self) -> Result<Vec<SlopeComponent>> {
        self.check_size()?;
        let s = self.field.degree() as i64;
        let slopes = self.newton_slopes()?;
        let mut distinct = slopes.clone();
        distinct.dedup();
        let like = self.phi.sample();
        if distinct.len() == 1 {
            return Ok(vec![SlopeComponent { slope: distinct[0], basis: Matrix::identity(self.rank(), like) }]);
        }
        // raise Ψ to a power making every root valuation integral
        let e = distinct.iter().fold(1i64, |acc, l| acc.lcm(&(l * Rat::from_integer(s)).denom()));
        let psi = self.linearized().pow(e as u32);
        let cp = Self::charpoly_over_qp(&psi)?;
        let np = resolved_newton(&cp)?;
        let mut out = Vec::new();
        for lambda in distinct {
            let m = (lambda * Rat::from_integer(s * e)).to_integer();
            let g = slope_factor(&cp, &np, m)?;
            // P(Ψ^e) by Horner
            let mut acc = Matrix::zeros(self.rank(), self.rank(), like);
            for c in g.iter().rev() {
                acc = acc.mul(&psi);
                let c = UnramifiedElement::from_scalar(&self.field, c.clone());
                for i in 0..self.rank() {
                    let v = acc.get(i, i).plus(&c);
                    acc.set(i, i, v);
                }
            }
            let mult = slopes.iter().filter(|&&x| x == lambda).count();
            let basis = acc.kernel().ok_or_else(|| {
                Error::Precision(format!("slope {lambda} component not resolved at precision"))
            })?;
            if basis.cols() != mult {
                return Err(Error::Precision(format!(
                    "slope {lambda} component has dimension {} instead of {mult} at precision",
                    basis.cols()
                )));
            }
            out.push(SlopeComponent { slope: lambda, basis });
        }
        Ok(out)
    }

    /// Each slope component is simple, so that φ-stable subspaces are exactly sums of components.
    pub fn is_multiplicity_free(&self) -> Result<bool> {
        Ok(self.components()?.iter().all(|c| c.is_simple()))
    }

    /// Matrix of φ restricted to the φ-stable span of the columns of `c`, in that basis.
    pub fn restrict(&self, c: &KMatrix) -> Result<KMatrix> {
        let image = self.apply(c);
        // left inverse through the pivot rows of c
        let (_, pivots) = c.transpose().rref();
        if pivots.len() != c.cols() {
            return Err(Error::Precision("basis columns are dependent at precision".into()));
        }
        let square = Matrix::from_rows(pivots.iter().map(|&r| c.row(r)).collect())?;
        let rhs = Matrix::from_rows(pivots.iter().map(|&r| image.row(r)).collect())?;
        let a = square.solve(&rhs)?;
        if !c.mul(&a).eq_at_precision(&image) {
            return Err(Error::Invalid("subspace is not φ-stable".into()));
        }
        Ok(a)
    }

    /// v_p(det φ|_{D'}) for a φ-stable subspace given by a basis.
    pub fn sub_degree(&self, c: &KMatrix) -> Result<i64> {
        if c.cols() == 0 {
            return Ok(0);
        }
        self.restrict(c)?
            .det()
            .val()
            .ok_or_else(|| Error::Precision("restricted determinant not resolved".into()))
    }

    /// D_1 ⊗ D_2 with Frobenius Φ_1 ⊗ Φ_2.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if *self.field != *other.field {
            return Err(Error::FieldMismatch("tensor of isocrystals over different fields".into()));
        }
        Self::new(&self.field, self.phi.kron(&other.phi))
    }
}
