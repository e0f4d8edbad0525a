//! Characteristic polynomials by Berkowitz's division-free algorithm, and the
//! Newton polygon of the eigenvalues of `xA`. The latter agrees with the slopes
//! of the connection only when `A` is already in a suitable gauge; it serves as
//! an independent check on such forms.

use num_traits::Zero;

use super::newton::NewtonPolygon;
use super::{linalg, FormalConnection};
use crate::error::{Error, Result};
use crate::exact::{Field, LaurentSeries, Matrix, Scalar};

/// Coefficients of `det(X·I − M)`, highest degree first.
pub fn berkowitz<F: Field>(m: &Matrix<F>) -> Vec<F> {
    let n = m.rows();
    assert!(m.is_square());
    if n == 0 {
        return vec![F::one()];
    }
    let mut poly = vec![F::one(), -m[(0, 0)].clone()];
    for r in 1..n {
        // column t = (1, −a_rr, −R C, −R A C, …, −R A^{r−1} C)
        let mut t = vec![F::one(), -m[(r, r)].clone()];
        let mut v: Vec<F> = (0..r).map(|i| m[(i, r)].clone()).collect();
        for _ in 0..r {
            let rc = (0..r).fold(F::zero(), |acc, j| acc + &(m[(r, j)].clone() * &v[j]));
            t.push(-rc);
            v = (0..r).map(|i| (0..r).fold(F::zero(), |acc, j| acc + &(m[(i, j)].clone() * &v[j]))).collect();
        }
        let mut next = vec![F::zero(); r + 2];
        for (i, out) in next.iter_mut().enumerate() {
            for (j, pj) in poly.iter().enumerate() {
                if i >= j && i - j < t.len() {
                    *out = out.clone() + &(t[i - j].clone() * pj);
                }
            }
        }
        poly = next;
    }
    poly
}

/// `det(X·I − xA)` with coefficients indexed by the power of `X`.
pub fn theta_charpoly(conn: &FormalConnection) -> Result<Vec<LaurentSeries>> {
    let x = LaurentSeries::monomial(Scalar::from_i64(1), 1);
    let n = conn.dim();
    let diag = Matrix::from_fn(n, n, |i, j| if i == j { x.clone() } else { LaurentSeries::zero() });
    let b = linalg::mul(&diag, conn.matrix())?;
    let mut p = berkowitz(&b);
    p.reverse();
    Ok(p)
}

/// Polygon of the eigenvalue valuations of `xA`: slopes are `max(0, −ord λ)`.
pub fn eigenvalue_polygon(conn: &FormalConnection) -> Result<NewtonPolygon> {
    let p = theta_charpoly(conn)?;
    let mut points = Vec::new();
    for (i, c) in p.iter().enumerate() {
        match c.valuation() {
            Some(v) => points.push((i, v)),
            None if c.is_exact() => {}
            None => {
                return Err(Error::InsufficientPrecision("characteristic polynomial coefficient undetermined".into()))
            }
        }
    }
    Ok(NewtonPolygon::from_points(&points))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat, Rational};
    use crate::lie::{CartanType, RepKind};

    #[test]
    fn berkowitz_matches_expansion() {
        let m = Matrix::from_rows(vec![
            vec![int(2), int(1), int(0)],
            vec![int(-1), int(3), int(4)],
            vec![int(5), int(0), int(1)],
        ]);
        let p = berkowitz(&m);
        // X^3 − tr X^2 + (sum of principal 2-minors) X − det
        let minors = int(2 * 3 + 1) + int(2) + int(3);
        assert_eq!(p, vec![int(1), int(-6), minors, -m.determinant()]);
    }

    #[test]
    fn fg_sl2_eigenvalues() {
        let c = FormalConnection::frenkel_gross_for(CartanType::A, 1, RepKind::Defining, &Scalar::Rat(rat(5, 2)))
            .unwrap()
            .change_to_infinity()
            .unwrap();
        let p = theta_charpoly(&c).unwrap();
        // X² − (5/2) s⁻¹
        assert_eq!(p[2], LaurentSeries::from_rational(int(1)));
        assert!(p[1].is_zero());
        assert_eq!(p[0], LaurentSeries::monomial(Scalar::Rat(rat(-5, 2)), -1));
        let poly = eigenvalue_polygon(&c).unwrap();
        assert_eq!(poly.slope(), rat(1, 2));
        let _: Rational = poly.irregularity();
    }
}
