//! Reduction of a transversal connection to its oper canonical form.
//!
//! After a torus gauge makes every `E_{−α_i}` coefficient equal to one, the
//! components of `ad(ρ̌)`-degree `d = 0, 1, …, h−1` are cleared in turn: a
//! gauge `exp(X)` with `X ∈ g_{d+1}` changes the degree-`d` part by
//! `[X, p₋₁]` and only touches higher degrees otherwise. Since
//! `g_d = [g_{d+1}, p₋₁] ⊕ (ker ad p₁)_d`, each step is one square linear
//! system over `Q`, independent of the connection.

use num_traits::Zero;

use super::OperForm;
use crate::connection::{Coord, FormalConnection, LieForm};
use crate::error::{Error, Result};
use crate::exact::{LaurentSeries, Matrix, Rational};
use crate::lie::{ChevalleyAlgebra, PrincipalData};

struct Step {
    /// Basis indices of degree `d`.
    rows: Vec<usize>,
    /// Basis indices of degree `d + 1` (the unknown `X`).
    x_cols: Vec<usize>,
    /// Positions in the Kostant basis of degree `d + 1` elements.
    kostant: Vec<usize>,
    /// Inverse of `[ [E_b, p₋₁] | −p_i ]` restricted to `rows`.
    inv: Matrix<Rational>,
}

fn steps(alg: &ChevalleyAlgebra, pd: &PrincipalData) -> Vec<Step> {
    let degs = alg.degrees();
    let h = pd.coxeter_number as i64;
    (0..h)
        .map(|d| {
            let rows: Vec<usize> = (0..alg.dim()).filter(|&k| degs[k] == d).collect();
            let x_cols: Vec<usize> = (0..alg.dim()).filter(|&k| degs[k] == d + 1).collect();
            let kostant: Vec<usize> = (0..pd.degrees.len()).filter(|&i| pd.degrees[i] as i64 == d + 1).collect();
            let mut cols: Vec<Vec<Rational>> = x_cols
                .iter()
                .map(|&b| alg.bracket(&alg.basis_element(b), &pd.p_minus1))
                .collect();
            cols.extend(kostant.iter().map(|&i| pd.kostant_basis[i].iter().map(|c| -c).collect()));
            let m = Matrix::from_fn(rows.len(), cols.len(), |r, c| cols[c][rows[r]].clone());
            let inv = m.inverse().expect("Kostant complement is a direct sum");
            Step { rows, x_cols, kostant, inv }
        })
        .collect()
}

fn transversality(form: &LieForm) -> Result<Vec<LaurentSeries>> {
    let alg = form.algebra();
    let degs = alg.degrees();
    for (k, f) in form.coeffs().iter().enumerate() {
        if degs[k] > -2 || f.is_zero() {
            continue;
        }
        if f.has_no_terms() {
            return Err(Error::InsufficientPrecision(format!(
                "component of degree {} known only modulo its truncation",
                degs[k]
            )));
        }
        return Err(Error::NotAnOper(format!("nonzero component of degree {}", degs[k])));
    }
    (0..alg.rank())
        .map(|i| {
            let f = form.coeff(alg.neg_simple_index(i));
            if f.is_zero() {
                Err(Error::NotAnOper(format!("coefficient of f_{} vanishes", i + 1)))
            } else if f.has_no_terms() {
                Err(Error::InsufficientPrecision(format!("coefficient of f_{} undetermined", i + 1)))
            } else {
                Ok(f.clone())
            }
        })
        .collect()
}

/// Canonical form of a connection given in a Borel gauge, in its own coordinate.
pub fn canonicalize(conn: &FormalConnection) -> Result<OperForm> {
    canonicalize_form(&conn.lie_form()?, conn.coord())
}

/// [`canonicalize`] on a `g`-valued form. A `Global` coordinate is kept only if
/// the result is a Laurent polynomial.
pub fn canonicalize_form(form: &LieForm, coord: Coord) -> Result<OperForm> {
    let alg = form.algebra().clone();
    let pd = PrincipalData::new(&alg);
    let psi = transversality(form)?;
    let mut cur = form.gauge_torus(&psi)?;
    for i in 0..alg.rank() {
        cur.set_coeff(alg.neg_simple_index(i), LaurentSeries::from_rational(crate::exact::int(1)));
    }
    let mut v = vec![LaurentSeries::zero(); alg.rank()];
    for step in steps(&alg, &pd) {
        let a: Vec<LaurentSeries> = step.rows.iter().map(|&k| -cur.coeff(k)).collect();
        let mut u = Vec::with_capacity(step.inv.rows());
        for j in 0..step.inv.rows() {
            let mut acc = LaurentSeries::zero();
            for (r, ar) in a.iter().enumerate() {
                let c = &step.inv[(j, r)];
                if !c.is_zero() && !ar.is_zero() {
                    acc = acc.checked_add(&ar.scale_rational(c))?;
                }
            }
            u.push(acc);
        }
        let (xs, ks) = u.split_at(step.x_cols.len());
        if xs.iter().any(|f| !f.is_zero()) {
            let mut x = LieForm::zero(&alg);
            for (&b, f) in step.x_cols.iter().zip(xs) {
                x.set_coeff(b, f.clone());
            }
            cur = cur.gauge_exp(&x)?;
        }
        for (&i, f) in step.kostant.iter().zip(ks) {
            v[i] = f.clone();
        }
    }
    let coord = if coord == Coord::Global && v.iter().any(|f| !f.is_exact()) { Coord::AtZero } else { coord };
    let oper = OperForm { alg, v, coord };
    if !cur.agrees_with(&oper.lie_form()) {
        return Err(Error::Invalid("reduction did not reach the Kostant slice".into()));
    }
    Ok(oper)
}
