use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{int, Field, LaurentSeries, Matrix, Rational, Scalar};
use crate::lie::{BasisKind, ChevalleyAlgebra, Representation};

/// A `g`-valued series `Σ_k f_k(t) X_k` in the Chevalley basis.
#[derive(Clone, Debug)]
pub struct LieForm {
    alg: Arc<ChevalleyAlgebra>,
    coeffs: Vec<LaurentSeries>,
}

impl PartialEq for LieForm {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.alg, &other.alg) || self.alg.name() == other.alg.name()) && self.coeffs == other.coeffs
    }
}

impl LieForm {
    pub fn zero(alg: &Arc<ChevalleyAlgebra>) -> Self {
        LieForm { alg: alg.clone(), coeffs: vec![LaurentSeries::zero(); alg.dim()] }
    }

    pub fn new(alg: &Arc<ChevalleyAlgebra>, coeffs: Vec<LaurentSeries>) -> Result<Self> {
        if coeffs.len() != alg.dim() {
            return Err(Error::DimensionMismatch(format!("{} coefficients for a {}-dimensional algebra", coeffs.len(), alg.dim())));
        }
        Ok(LieForm { alg: alg.clone(), coeffs })
    }

    /// The constant form `x`.
    pub fn constant(alg: &Arc<ChevalleyAlgebra>, x: &[Rational]) -> Self {
        Self::scaled(alg, x, &LaurentSeries::from_rational(int(1)))
    }

    /// `f(t)·x` for a constant element `x`.
    pub fn scaled(alg: &Arc<ChevalleyAlgebra>, x: &[Rational], f: &LaurentSeries) -> Self {
        let coeffs = x
            .iter()
            .map(|c| if c.is_zero() { LaurentSeries::zero() } else { f.scale_rational(c) })
            .collect();
        LieForm { alg: alg.clone(), coeffs }
    }

    pub fn algebra(&self) -> &Arc<ChevalleyAlgebra> {
        &self.alg
    }

    pub fn coeffs(&self) -> &[LaurentSeries] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &LaurentSeries {
        &self.coeffs[k]
    }

    pub fn set_coeff(&mut self, k: usize, f: LaurentSeries) {
        self.coeffs[k] = f;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(LaurentSeries::is_exact)
    }

    /// Coordinates of a series matrix lying in `g ⊗ series`.
    pub fn from_matrix(rep: &Representation, m: &Matrix<LaurentSeries>) -> Result<Self> {
        let dec = rep.decomposer();
        let n = dec.size();
        let vals: Vec<&LaurentSeries> = dec.positions().iter().map(|&p| &m[(p / n, p % n)]).collect();
        let inv = dec.inverse();
        let d = inv.rows();
        let mut coeffs = Vec::with_capacity(d);
        for i in 0..d {
            let mut acc = LaurentSeries::zero();
            for (j, v) in vals.iter().enumerate() {
                let c = &inv[(i, j)];
                if !c.is_zero() && !v.is_zero() {
                    acc = acc.checked_add(&v.scale_rational(c))?;
                }
            }
            coeffs.push(acc);
        }
        let form = LieForm { alg: rep.algebra().clone(), coeffs };
        let back = form.to_matrix(rep);
        if back.entries().iter().zip(m.entries()).any(|(a, b)| !a.agrees_with(b)) {
            return Err(Error::NotInLieAlgebra);
        }
        Ok(form)
    }

    pub fn to_matrix(&self, rep: &Representation) -> Matrix<LaurentSeries> {
        let n = rep.dim();
        let mut m: Matrix<LaurentSeries> = Matrix::zeros(n, n);
        for (k, f) in self.coeffs.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            for (i, j, v) in rep.nonzero_entries(k) {
                let add = f.scale_rational(v);
                m[(i, j)] = m[(i, j)].checked_add(&add).expect("single tower");
            }
        }
        m
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.checked_add(b)).collect::<Result<_>>()?;
        Ok(LieForm { alg: self.alg.clone(), coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LieForm { alg: self.alg.clone(), coeffs: self.coeffs.iter().map(|f| -f).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        LieForm { alg: self.alg.clone(), coeffs: self.coeffs.iter().map(|f| f.scale(c)).collect() }
    }

    pub fn mul_series(&self, g: &LaurentSeries) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|f| if f.is_zero() { Ok(LaurentSeries::zero()) } else { f.checked_mul(g) })
            .collect::<Result<_>>()?;
        Ok(LieForm { alg: self.alg.clone(), coeffs })
    }

    pub fn derivative(&self) -> Self {
        LieForm { alg: self.alg.clone(), coeffs: self.coeffs.iter().map(LaurentSeries::derivative).collect() }
    }

    /// Pointwise bracket.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        let d = self.alg.dim();
        let mut out = vec![LaurentSeries::zero(); d];
        for (a, fa) in self.coeffs.iter().enumerate() {
            if fa.is_zero() {
                continue;
            }
            for (b, gb) in other.coeffs.iter().enumerate() {
                if gb.is_zero() {
                    continue;
                }
                let sc = self.alg.structure(a, b);
                if sc.is_empty() {
                    continue;
                }
                let p = fa.checked_mul(gb)?;
                for (k, c) in sc {
                    out[*k] = out[*k].checked_add(&p.scale_rational(&int(*c)))?;
                }
            }
        }
        Ok(LieForm { alg: self.alg.clone(), coeffs: out })
    }

    pub fn truncate(&self, k: i64) -> Self {
        LieForm { alg: self.alg.clone(), coeffs: self.coeffs.iter().map(|f| f.truncate(k)).collect() }
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a.agrees_with(b))
    }

    /// `exp(ad X)(self)` for `X` with nilpotent `ad X`; the sum terminates.
    pub fn exp_ad(&self, x: &LieForm) -> Result<Self> {
        let mut acc = self.clone();
        let mut term = self.clone();
        for k in 1..=self.alg.dim() {
            term = x.bracket(&term)?;
            if term.is_zero() {
                break;
            }
            term = term.scale(&Scalar::Rat(Rational::new(1.into(), (k as i64).into())));
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Gauge action of `exp(X)`: `exp(ad X)A − Σ_k (ad X)^k(X′)/(k+1)!`.
    pub fn gauge_exp(&self, x: &LieForm) -> Result<Self> {
        let moved = self.exp_ad(x)?;
        let mut term = x.derivative();
        let mut corr = term.clone();
        let mut fact = int(1);
        for k in 1..=self.alg.dim() {
            term = x.bracket(&term)?;
            if term.is_zero() {
                break;
            }
            fact *= int(k as i64 + 1);
            corr = corr.add(&term.scale(&Scalar::Rat(fact.recip())))?;
        }
        moved.sub(&corr)
    }

    /// Gauge action of the torus element `g` with `α_i(g) = ψ_i`:
    /// root components scale by `Π ψ_j^{n_j(α)}` and the Cartan part picks up
    /// `−Σ_j (ψ_j′/ψ_j) ω̌_j`.
    pub fn gauge_torus(&self, psi: &[LaurentSeries]) -> Result<Self> {
        let alg = &self.alg;
        let inv: Vec<LaurentSeries> = psi.iter().map(|p| p.try_inv()).collect::<Result<_>>()?;
        let mut out = self.clone();
        for (k, f) in self.coeffs.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            if let BasisKind::Root(alpha) = &alg.basis()[k] {
                let mut g = f.clone();
                for (j, &n) in alpha.iter().enumerate() {
                    let base = if n > 0 { &psi[j] } else { &inv[j] };
                    for _ in 0..n.unsigned_abs() {
                        g = g.checked_mul(base)?;
                    }
                }
                out.coeffs[k] = g;
            }
        }
        for (j, omega) in fundamental_coweights(alg).iter().enumerate() {
            let dlog = psi[j].derivative().checked_mul(&inv[j])?;
            if dlog.is_zero() {
                continue;
            }
            for (i, c) in omega.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let k = alg.cartan_index(i);
                out.coeffs[k] = out.coeffs[k].checked_add(&-dlog.scale_rational(c))?;
            }
        }
        Ok(out)
    }
}

/// `ω̌_j` on the basis `H_1..H_ℓ`: `α_k(ω̌_j) = δ_jk`.
pub fn fundamental_coweights(alg: &ChevalleyAlgebra) -> Vec<Vec<Rational>> {
    let l = alg.rank();
    let a = &alg.root_system().cartan_matrix;
    // α_k(H_i) = a[i][k]
    let at = Matrix::from_fn(l, l, |k, i| int(a[i][k]));
    (0..l)
        .map(|j| {
            let e: Vec<Rational> = (0..l).map(|k| if k == j { int(1) } else { int(0) }).collect();
            at.solve(&e).expect("Cartan matrix is invertible")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::{FormalConnection, GaugeElement};
    use crate::lie::{self, CartanType, RepKind};
    use num_traits::One;

    #[test]
    fn matrix_round_trip() {
        for kind in [RepKind::Defining, RepKind::Adjoint] {
            let rep = lie::representation(CartanType::B, 2, kind).unwrap();
            let c = FormalConnection::frenkel_gross(rep.clone(), &Scalar::from_i64(3)).unwrap();
            let f = c.lie_form().unwrap();
            assert_eq!(f.to_matrix(&rep), *c.matrix());
        }
    }

    #[test]
    fn non_lie_matrix_is_rejected() {
        let rep = lie::representation(CartanType::A, 1, RepKind::Defining).unwrap();
        let m = Matrix::from_fn(2, 2, |i, j| if i == j { LaurentSeries::one() } else { LaurentSeries::zero() });
        assert_eq!(LieForm::from_matrix(&rep, &m), Err(Error::NotInLieAlgebra));
    }

    #[test]
    fn coweights_are_dual_to_simple_roots() {
        let alg = lie::algebra(CartanType::G, 2).unwrap();
        let om = fundamental_coweights(&alg);
        for (j, w) in om.iter().enumerate() {
            for k in 0..2 {
                let alpha = alg.root_system().simple_root(k);
                assert_eq!(alg.root_value(&alpha, w), int((j == k) as i64));
            }
        }
    }

    #[test]
    fn lie_gauges_match_matrix_gauges() {
        let rep = lie::representation(CartanType::A, 2, RepKind::Defining).unwrap();
        let alg = rep.algebra().clone();
        let c = FormalConnection::frenkel_gross(rep.clone(), &Scalar::from_i64(2)).unwrap();
        let a = c.lie_form().unwrap();
        let mut x = LieForm::zero(&alg);
        x.set_coeff(alg.simple_index(1), LaurentSeries::laurent_polynomial(&[(-1, int(2)), (2, int(-1))]));
        x.set_coeff(alg.highest_root_index(), LaurentSeries::laurent_polynomial(&[(-3, int(5))]));
        let by_matrix = c.gauge_transform(&GaugeElement::unipotent(&rep, &x).unwrap()).unwrap();
        assert_eq!(a.gauge_exp(&x).unwrap().to_matrix(&rep), *by_matrix.matrix());
        // t^{ω̌_1 − 2ω̌_2}: α_1 ↦ t, α_2 ↦ t^{-2}
        let om = fundamental_coweights(&alg);
        let mu: Vec<Rational> = om[0].iter().zip(&om[1]).map(|(p, q)| p - q * int(2)).collect();
        let by_matrix = c.gauge_transform(&GaugeElement::cocharacter(&rep, &mu)).unwrap();
        let psi = [LaurentSeries::monomial(Scalar::one(), 1), LaurentSeries::monomial(Scalar::one(), -2)];
        assert_eq!(a.gauge_torus(&psi).unwrap().to_matrix(&rep), *by_matrix.matrix());
    }
}
