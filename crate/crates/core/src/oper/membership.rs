//! Pole patterns and residue classes of opers.
//!
//! A point of `t//W` is represented by the values of a generating set of
//! invariant polynomials: the characteristic polynomial coefficients in the
//! faithful matrix representation the algebra was built from, plus the
//! Pfaffian for type `D`.

use num_traits::{One, Zero};
use serde::Serialize;

use super::OperForm;
use crate::connection::charpoly::berkowitz;
use crate::error::{Error, Result};
use crate::exact::{int, Matrix, Rational, Scalar};
use crate::lie::{CartanType, ChevalleyAlgebra, PrincipalData};
use crate::connection::lie_form::fundamental_coweights;

/// A point of `t//W`, stored as the values of the fundamental invariants.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidueClass {
    invariants: Vec<Scalar>,
}

fn image(alg: &ChevalleyAlgebra, x: &[Scalar]) -> Result<Matrix<Scalar>> {
    let mats = alg.construction_matrices();
    let n = mats[0].rows();
    let mut m: Matrix<Scalar> = Matrix::zeros(n, n);
    for (c, b) in x.iter().zip(mats) {
        if c.is_zero() {
            continue;
        }
        for i in 0..n {
            for j in 0..n {
                let e = &b[(i, j)];
                if !e.is_zero() {
                    m[(i, j)] = m[(i, j)].checked_add(&c.checked_mul(&Scalar::Rat(e.clone()))?)?;
                }
            }
        }
    }
    Ok(m)
}

/// Pfaffian of a skew-symmetric matrix, by expansion along the first row.
pub fn pfaffian(a: &Matrix<Scalar>) -> Scalar {
    let idx: Vec<usize> = (0..a.rows()).collect();
    pf(a, &idx)
}

fn pf(a: &Matrix<Scalar>, idx: &[usize]) -> Scalar {
    if idx.is_empty() {
        return Scalar::one();
    }
    if idx.len() % 2 == 1 {
        return Scalar::zero();
    }
    let i = idx[0];
    let mut acc = Scalar::zero();
    for (pos, &j) in idx.iter().enumerate().skip(1) {
        let e = &a[(i, j)];
        if e.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx.iter().copied().filter(|&k| k != i && k != j).collect();
        let term = e.clone() * &pf(a, &rest);
        acc = if pos % 2 == 1 { acc + &term } else { acc - &term };
    }
    acc
}

impl ResidueClass {
    /// The class of an arbitrary element (coordinates in the Chevalley basis).
    pub fn of_element(alg: &ChevalleyAlgebra, x: &[Scalar]) -> Result<Self> {
        let m = image(alg, x)?;
        let mut invariants: Vec<Scalar> = berkowitz(&m).into_iter().skip(1).collect();
        if alg.cartan_type() == CartanType::D {
            // the form is the antidiagonal one, so K·X is skew
            let n = m.rows();
            let kx = Matrix::from_fn(n, n, |i, j| m[(n - 1 - i, j)].clone());
            invariants.push(pfaffian(&kx));
        }
        Ok(ResidueClass { invariants })
    }

    /// The class of `Σ h_i H_i`.
    pub fn of_cartan(alg: &ChevalleyAlgebra, h: &[Scalar]) -> Result<Self> {
        let mut x = vec![Scalar::zero(); alg.dim()];
        for (i, c) in h.iter().enumerate() {
            x[alg.cartan_index(i)] = c.clone();
        }
        Self::of_element(alg, &x)
    }

    /// `ϖ(λ)` for `λ = Σ λ_j ω̌_j` given by its fundamental coordinates.
    pub fn of_weight(alg: &ChevalleyAlgebra, lambda: &[Rational]) -> Self {
        let om = fundamental_coweights(alg);
        let h: Vec<Scalar> = (0..alg.rank())
            .map(|i| Scalar::Rat(lambda.iter().zip(&om).fold(int(0), |acc, (c, w)| acc + c * &w[i])))
            .collect();
        Self::of_cartan(alg, &h).expect("rational entries")
    }

    /// `ϖ(−λ−ρ)`.
    pub fn shifted(alg: &ChevalleyAlgebra, lambda: &[Rational]) -> Self {
        let m: Vec<Rational> = lambda.iter().map(|c| -c - Rational::one()).collect();
        Self::of_weight(alg, &m)
    }

    pub fn invariants(&self) -> &[Scalar] {
        &self.invariants
    }
}

/// The local oper spaces.
#[derive(Clone, Debug, PartialEq)]
pub enum OperSpaceSpec {
    /// All opers on the punctured disk.
    Punctured,
    /// Regular singularity with the given residue class.
    RegularSingular(ResidueClass),
    /// Residue `ϖ(−λ̄−ρ)` for a dominant integral `λ̄` (fundamental coordinates),
    /// checked through the residue-and-pole criterion.
    Regular(Vec<i64>),
    /// Slope at most `1/h`.
    SlopeAtMostOneOverH,
}

impl OperSpaceSpec {
    /// Allowed pole order of each `v_i`.
    pub fn pole_bounds(&self, degrees: &[usize]) -> Option<Vec<i64>> {
        let d: Vec<i64> = degrees.iter().map(|&x| x as i64).collect();
        match self {
            OperSpaceSpec::Punctured => None,
            OperSpaceSpec::RegularSingular(_) | OperSpaceSpec::Regular(_) => Some(d),
            OperSpaceSpec::SlopeAtMostOneOverH => {
                let mut b = d;
                *b.last_mut().unwrap() += 1;
                Some(b)
            }
        }
    }
}

/// `p₋₁ + Σ v_{i,d_i−1} p_i + p₁/4`, with `v_{i,d_i−1}` the coefficient of `t^{−d_i}`.
pub fn residue_element(oper: &OperForm) -> Result<Vec<Scalar>> {
    let alg = oper.algebra();
    let pd = PrincipalData::new(alg);
    let mut x: Vec<Scalar> = pd.p_minus1.iter().cloned().map(Scalar::Rat).collect();
    for (i, (p, &d)) in pd.kostant_basis.iter().zip(&pd.degrees).enumerate() {
        let mut c = oper.coefficient(i, d as i64 - 1).ok_or_else(|| {
            Error::InsufficientPrecision(format!("coefficient of t^-{d} in v_{} lies past the truncation", i + 1))
        })?;
        if i == 0 {
            c = c + &Scalar::Rat(Rational::new(1.into(), 4.into()));
        }
        if c.is_zero() {
            continue;
        }
        for (k, q) in p.iter().enumerate() {
            if !q.is_zero() {
                x[k] = x[k].checked_add(&c.checked_mul(&Scalar::Rat(q.clone()))?)?;
            }
        }
    }
    Ok(x)
}

pub fn residue_class(oper: &OperForm) -> Result<ResidueClass> {
    ResidueClass::of_element(oper.algebra(), &residue_element(oper)?)
}

fn within_bounds(oper: &OperForm, bounds: &[i64]) -> Result<bool> {
    for (i, (f, b)) in oper.v().iter().zip(bounds).enumerate() {
        let floor = int(-b);
        match (f.valuation(), f.trunc()) {
            (Some(v), _) if v < floor => return Ok(false),
            (None, Some(k)) if k < floor => {
                return Err(Error::InsufficientPrecision(format!("pole order of v_{} undetermined", i + 1)))
            }
            _ => {}
        }
    }
    Ok(true)
}

/// Whether the oper lies in the given local space.
pub fn membership(oper: &OperForm, spec: &OperSpaceSpec) -> Result<bool> {
    let Some(bounds) = spec.pole_bounds(&oper.degrees()) else {
        return Ok(true);
    };
    if !within_bounds(oper, &bounds)? {
        return Ok(false);
    }
    let target = match spec {
        OperSpaceSpec::RegularSingular(c) => c.clone(),
        OperSpaceSpec::Regular(lambda) => {
            if lambda.len() != oper.rank() || lambda.iter().any(|&m| m < 0) {
                return Err(Error::Invalid("regular opers need a dominant integral weight".into()));
            }
            let l: Vec<Rational> = lambda.iter().map(|&m| int(m)).collect();
            ResidueClass::shifted(oper.algebra(), &l)
        }
        _ => return Ok(true),
    };
    Ok(residue_class(oper)? == target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::{Coord, FormalConnection};
    use crate::exact::rat;
    use crate::lie::{self, RepKind};
    use crate::oper::canonicalize;

    #[test]
    fn zero_oper_is_everywhere() {
        for (t, r) in [(CartanType::A, 1), (CartanType::B, 2), (CartanType::G, 2), (CartanType::D, 4)] {
            let alg = lie::algebra(t, r).unwrap();
            let o = OperForm::zero(&alg, Coord::AtZero);
            let rho = ResidueClass::shifted(&alg, &vec![int(0); r]);
            for spec in [
                OperSpaceSpec::Punctured,
                OperSpaceSpec::RegularSingular(rho),
                OperSpaceSpec::Regular(vec![0; r]),
                OperSpaceSpec::SlopeAtMostOneOverH,
            ] {
                assert!(membership(&o, &spec).unwrap(), "{t}{r} {spec:?}");
            }
            let mut other = vec![0; r];
            other[0] = 1;
            assert!(!membership(&o, &OperSpaceSpec::Regular(other)).unwrap());
        }
    }

    #[test]
    fn sl2_fg_residue() {
        let c = FormalConnection::frenkel_gross_for(CartanType::A, 1, RepKind::Defining, &Scalar::from_i64(2)).unwrap();
        let o = canonicalize(&c).unwrap();
        let alg = o.algebra().clone();
        // the −1/4 cancels the p₁/4 shift: the residue element is p₋₁
        let x = residue_element(&o).unwrap();
        let pd = PrincipalData::new(&alg);
        assert_eq!(x, pd.p_minus1.iter().cloned().map(Scalar::Rat).collect::<Vec<_>>());
        let zero = ResidueClass::of_weight(&alg, &[int(0)]);
        assert!(membership(&o, &OperSpaceSpec::RegularSingular(zero)).unwrap());
        // ϖ(0) = ϖ(−λ₀−ρ) with λ₀ = −ρ
        let shifted = ResidueClass::shifted(&alg, &[int(-1)]);
        assert!(membership(&o, &OperSpaceSpec::RegularSingular(shifted)).unwrap());
        let minus_rho = ResidueClass::shifted(&alg, &[int(0)]);
        assert!(!membership(&o, &OperSpaceSpec::RegularSingular(minus_rho)).unwrap());

        let inf = canonicalize(&c.change_to_infinity().unwrap()).unwrap();
        assert!(membership(&inf, &OperSpaceSpec::SlopeAtMostOneOverH).unwrap());
        assert!(!membership(&inf, &OperSpaceSpec::RegularSingular(ResidueClass::of_weight(&alg, &[int(0)]))).unwrap());
    }

    #[test]
    fn classes_are_weyl_invariant() {
        for (t, r) in [(CartanType::A, 2), (CartanType::B, 3), (CartanType::C, 2), (CartanType::D, 4), (CartanType::G, 2)] {
            let alg = lie::algebra(t, r).unwrap();
            let a = &alg.root_system().cartan_matrix;
            let h: Vec<Rational> = (0..r).map(|i| rat(2 * i as i64 + 1, 3)).collect();
            let base = ResidueClass::of_cartan(&alg, &h.iter().cloned().map(Scalar::Rat).collect::<Vec<_>>()).unwrap();
            for i in 0..r {
                // s_i(h) = h − α_i(h) H_i
                let ai: Rational = (0..r).fold(int(0), |acc, k| acc + &h[k] * int(a[k][i]));
                let mut s = h.clone();
                s[i] -= ai;
                let moved = ResidueClass::of_cartan(&alg, &s.into_iter().map(Scalar::Rat).collect::<Vec<_>>()).unwrap();
                assert_eq!(moved, base, "{t}{r} s_{i}");
            }
            // a generic shift changes the class
            let mut g = h.clone();
            g[0] += int(1);
            let other = ResidueClass::of_cartan(&alg, &g.into_iter().map(Scalar::Rat).collect::<Vec<_>>()).unwrap();
            assert_ne!(other, base);
        }
    }

    #[test]
    fn pfaffian_small() {
        let rows = [[0, 1, 2, 3], [-1, 0, 4, 5], [-2, -4, 0, 6], [-3, -5, -6, 0]];
        let m = Matrix::from_fn(4, 4, |i, j| Scalar::from_i64(rows[i][j]));
        // af − be + cd
        assert_eq!(pfaffian(&m), Scalar::from_i64(6 - 10 + 12));
    }
}
