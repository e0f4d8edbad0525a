//! Linear algebra over truncated Laurent series.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{LaurentSeries, Matrix};

pub fn mul(a: &Matrix<LaurentSeries>, b: &Matrix<LaurentSeries>) -> Result<Matrix<LaurentSeries>> {
    if a.cols() != b.rows() {
        return Err(Error::DimensionMismatch("series matrix product".into()));
    }
    let mut out: Matrix<LaurentSeries> = Matrix::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        for k in 0..a.cols() {
            let x = &a[(i, k)];
            if x.is_zero() {
                continue;
            }
            for j in 0..b.cols() {
                let y = &b[(k, j)];
                if y.is_zero() {
                    continue;
                }
                out[(i, j)] = out[(i, j)].checked_add(&x.checked_mul(y)?)?;
            }
        }
    }
    Ok(out)
}

pub fn add(a: &Matrix<LaurentSeries>, b: &Matrix<LaurentSeries>) -> Result<Matrix<LaurentSeries>> {
    let n = a.rows();
    let m = a.cols();
    let mut out = Matrix::zeros(n, m);
    for i in 0..n {
        for j in 0..m {
            out[(i, j)] = a[(i, j)].checked_add(&b[(i, j)])?;
        }
    }
    Ok(out)
}

pub fn sub(a: &Matrix<LaurentSeries>, b: &Matrix<LaurentSeries>) -> Result<Matrix<LaurentSeries>> {
    add(a, &b.map(|x| -x))
}

pub fn mul_vec(a: &Matrix<LaurentSeries>, v: &[LaurentSeries]) -> Result<Vec<LaurentSeries>> {
    let mut out = vec![LaurentSeries::zero(); a.rows()];
    for (i, o) in out.iter_mut().enumerate() {
        for (j, x) in v.iter().enumerate() {
            let m = &a[(i, j)];
            if m.is_zero() || x.is_zero() {
                continue;
            }
            *o = o.checked_add(&m.checked_mul(x)?)?;
        }
    }
    Ok(out)
}

/// Why a series solve did not produce an answer.
#[derive(Debug, Clone, PartialEq)]
pub enum SolveFailure {
    /// Some column is exactly zero below the diagonal: the system is singular.
    Singular,
    /// No pivot could be certified nonzero at the available precision.
    Precision,
    Error(Error),
}

impl From<Error> for SolveFailure {
    fn from(e: Error) -> Self {
        SolveFailure::Error(e)
    }
}

/// Gauss–Jordan elimination of `K X = R` (`R` given as columns), pivoting on the
/// entry of least known valuation. Pivots that are not monomials are inverted
/// to `rel` powers of the parameter beyond their leading term.
pub fn solve(
    k: &Matrix<LaurentSeries>,
    rhs: &[Vec<LaurentSeries>],
    rel: i64,
) -> std::result::Result<Vec<Vec<LaurentSeries>>, SolveFailure> {
    let n = k.rows();
    assert!(k.is_square());
    let w = n + rhs.len();
    let mut rows: Vec<Vec<LaurentSeries>> = (0..n)
        .map(|i| {
            let mut r: Vec<LaurentSeries> = k.row(i).to_vec();
            r.extend(rhs.iter().map(|col| col[i].clone()));
            r
        })
        .collect();
    for j in 0..n {
        let mut best: Option<(usize, crate::exact::Rational)> = None;
        let mut all_zero = true;
        for (r, row) in rows.iter().enumerate().skip(j) {
            let e = &row[j];
            if !e.is_zero() {
                all_zero = false;
            }
            if let Some(v) = e.valuation() {
                if best.as_ref().is_none_or(|(_, bv)| v < *bv) {
                    best = Some((r, v));
                }
            }
        }
        let Some((p, _)) = best else {
            return Err(if all_zero { SolveFailure::Singular } else { SolveFailure::Precision });
        };
        rows.swap(j, p);
        let piv = rows[j][j].clone();
        let v_units = piv.valuation_units().unwrap();
        let inv = match piv.invert_units(-v_units + rel * piv.ram() as i64) {
            Ok(x) => x,
            Err(Error::InsufficientPrecision(_)) => return Err(SolveFailure::Precision),
            Err(e) => return Err(e.into()),
        };
        for c in j..w {
            if !rows[j][c].is_zero() {
                rows[j][c] = rows[j][c].checked_mul(&inv)?;
            }
        }
        rows[j][j] = LaurentSeries::from_rational(crate::exact::int(1));
        let pivot_row = rows[j].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == j || row[j].is_zero() {
                continue;
            }
            let f = row[j].clone();
            for c in j..w {
                if pivot_row[c].is_zero() {
                    continue;
                }
                row[c] = row[c].checked_add(&-f.checked_mul(&pivot_row[c])?)?;
            }
            row[j] = LaurentSeries::zero();
        }
    }
    Ok((0..rhs.len()).map(|c| (0..n).map(|i| rows[i][n + c].clone()).collect()).collect())
}

/// Inverse of a series matrix; see [`solve`] for the precision policy.
pub fn inverse(m: &Matrix<LaurentSeries>, rel: i64) -> Result<Matrix<LaurentSeries>> {
    let n = m.rows();
    let id: Vec<Vec<LaurentSeries>> = (0..n)
        .map(|c| {
            (0..n)
                .map(|r| if r == c { LaurentSeries::from_rational(crate::exact::int(1)) } else { LaurentSeries::zero() })
                .collect()
        })
        .collect();
    match solve(m, &id, rel) {
        Ok(cols) => Ok(Matrix::from_fn(n, n, |i, j| cols[j][i].clone())),
        Err(SolveFailure::Singular) => Err(Error::NotInvertible("series matrix".into())),
        Err(SolveFailure::Precision) => Err(Error::InsufficientPrecision("cannot certify a pivot of the gauge matrix".into())),
        Err(SolveFailure::Error(e)) => Err(e),
    }
}
