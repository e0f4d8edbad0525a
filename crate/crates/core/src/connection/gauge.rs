use num_traits::{One, Zero};

use super::{linalg, LieForm};
use crate::error::{Error, Result};
use crate::exact::{LaurentSeries, Matrix, Rational, Scalar};
use crate::lie::Representation;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaugeKind {
    Identity,
    Constant,
    /// `t^μ` for a (possibly fractional) cocharacter `μ`.
    Cocharacter,
    /// `exp(X)` with `X` nilpotent; a finite sum.
    Unipotent,
    Product,
    General,
}

/// An invertible series matrix together with its inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeElement {
    kind: GaugeKind,
    matrix: Matrix<LaurentSeries>,
    inverse: Matrix<LaurentSeries>,
}

fn series_identity(n: usize) -> Matrix<LaurentSeries> {
    Matrix::from_fn(n, n, |i, j| if i == j { LaurentSeries::one() } else { LaurentSeries::zero() })
}

/// `Σ_k X^k / k!`, stopping at the first exactly vanishing power.
fn exp_nilpotent(x: &Matrix<LaurentSeries>) -> Result<Matrix<LaurentSeries>> {
    let n = x.rows();
    let mut acc = series_identity(n);
    let mut term = series_identity(n);
    for k in 1..=n {
        term = linalg::mul(&term, x)?;
        if term.entries().iter().all(Zero::is_zero) {
            return Ok(acc);
        }
        let inv_k = Rational::new(1.into(), (k as i64).into());
        term = term.map(|f| f.scale_rational(&inv_k));
        acc = linalg::add(&acc, &term)?;
    }
    if linalg::mul(&term, x)?.entries().iter().all(Zero::is_zero) {
        Ok(acc)
    } else {
        Err(Error::Invalid("exponential of a matrix that is not structurally nilpotent".into()))
    }
}

impl GaugeElement {
    pub fn identity(n: usize) -> Self {
        GaugeElement { kind: GaugeKind::Identity, matrix: series_identity(n), inverse: series_identity(n) }
    }

    pub fn constant(g: &Matrix<Scalar>) -> Result<Self> {
        let inv = g.inverse()?;
        Ok(GaugeElement {
            kind: GaugeKind::Constant,
            matrix: g.map(|c| LaurentSeries::constant(c.clone())),
            inverse: inv.map(|c| LaurentSeries::constant(c.clone())),
        })
    }

    /// `t^μ` for `μ = Σ μ_i H_i`, acting on each weight line by `t^{⟨weight, μ⟩}`.
    pub fn cocharacter(rep: &Representation, mu: &[Rational]) -> Self {
        let d = rep.cartan_diagonal(mu);
        let n = d.len();
        let mono = |q: &Rational| LaurentSeries::term(Scalar::one(), q);
        GaugeElement {
            kind: GaugeKind::Cocharacter,
            matrix: Matrix::from_fn(n, n, |i, j| if i == j { mono(&d[i]) } else { LaurentSeries::zero() }),
            inverse: Matrix::from_fn(n, n, |i, j| if i == j { mono(&-d[i].clone()) } else { LaurentSeries::zero() }),
        }
    }

    /// `exp(X)` for a `g`-valued series `X` whose image is nilpotent.
    pub fn unipotent(rep: &Representation, x: &LieForm) -> Result<Self> {
        let m = x.to_matrix(rep);
        let matrix = exp_nilpotent(&m)?;
        let inverse = exp_nilpotent(&m.map(|f| -f))?;
        Ok(GaugeElement { kind: GaugeKind::Unipotent, matrix, inverse })
    }

    /// Any square series matrix, inverted to `rel` relative orders.
    pub fn from_matrix(m: Matrix<LaurentSeries>, rel: i64) -> Result<Self> {
        let inverse = linalg::inverse(&m, rel)?;
        Ok(GaugeElement { kind: GaugeKind::General, matrix: m, inverse })
    }

    /// `self · other` (so `other` acts first).
    pub fn product(&self, other: &Self) -> Result<Self> {
        Ok(GaugeElement {
            kind: GaugeKind::Product,
            matrix: linalg::mul(&self.matrix, &other.matrix)?,
            inverse: linalg::mul(&other.inverse, &self.inverse)?,
        })
    }

    pub fn inverse(&self) -> Self {
        GaugeElement { kind: self.kind, matrix: self.inverse.clone(), inverse: self.matrix.clone() }
    }

    pub fn kind(&self) -> GaugeKind {
        self.kind
    }

    pub fn matrix(&self) -> &Matrix<LaurentSeries> {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &Matrix<LaurentSeries> {
        &self.inverse
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn check_size(&self, n: usize) -> Result<()> {
        if self.size() == n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!("gauge of size {} on a rank {n} connection", self.size())))
        }
    }

    /// `true` if `g·g⁻¹` agrees with the identity at the known precision.
    pub fn is_consistent(&self) -> bool {
        linalg::mul(&self.matrix, &self.inverse).is_ok_and(|p| {
            let id = series_identity(self.size());
            p.entries().iter().zip(id.entries()).all(|(a, b)| a.agrees_with(b))
        })
    }
}
