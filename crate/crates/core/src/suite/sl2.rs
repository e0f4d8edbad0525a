//! Irreducible `sl₂` modules and the image of the shift-of-argument algebra
//! at the regular nilpotent `f`, which for `sl₂` is generated by `f` and the
//! Casimir element.

use num_traits::{One, Zero};

use crate::exact::{int, Matrix, Rational};

/// Incremental row echelon basis of a subspace of `Q^n`.
#[derive(Default)]
struct Span {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Span {
    fn reduce(&self, v: &mut [Rational]) {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let c = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &c * r;
                }
            }
        }
    }

    /// Adds `v`; false if it was already in the span.
    fn insert(&mut self, mut v: Vec<Rational>) -> bool {
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        for x in &mut v {
            *x *= &inv;
        }
        self.rows.push((p, v));
        true
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }
}

/// `V_n` with basis `v_0, …, v_n`, `v_0` of highest weight, and the
/// subalgebra of `End V_n` generated by `π(f)` and `π(C)`.
#[derive(Clone, Debug)]
pub struct Sl2WeylData {
    pub highest_weight: u32,
    pub e: Matrix<Rational>,
    pub h: Matrix<Rational>,
    pub f: Matrix<Rational>,
    /// `ef + fe + h²/2`.
    pub casimir: Matrix<Rational>,
    pub a_f_basis: Vec<Matrix<Rational>>,
}

impl Sl2WeylData {
    pub fn new(n: u32) -> Self {
        let d = n as usize + 1;
        let ni = n as i64;
        // columns are images: f v_k = v_{k+1}, e v_k = k(n−k+1) v_{k−1}
        let f = Matrix::from_fn(d, d, |i, j| if i == j + 1 { int(1) } else { int(0) });
        let e = Matrix::from_fn(d, d, |i, j| {
            let k = j as i64;
            if j == i + 1 {
                int(k * (ni - k + 1))
            } else {
                int(0)
            }
        });
        let h = Matrix::from_fn(d, d, |i, j| if i == j { int(ni - 2 * i as i64) } else { int(0) });
        let half = Rational::new(1.into(), 2.into());
        let casimir = e.mul(&f).add(&f.mul(&e)).add(&h.mul(&h).scale(&half));
        let a_f_basis = generated_subalgebra(d, &[f.clone(), casimir.clone()]);
        Sl2WeylData { highest_weight: n, e, h, f, casimir, a_f_basis }
    }

    pub fn dim_v(&self) -> usize {
        self.f.rows()
    }

    pub fn dim_a_f(&self) -> usize {
        self.a_f_basis.len()
    }

    pub fn is_commutative(&self) -> bool {
        let b = &self.a_f_basis;
        (0..b.len()).all(|i| (i + 1..b.len()).all(|j| b[i].mul(&b[j]) == b[j].mul(&b[i])))
    }

    /// `dim span{a·v : a ∈ A_f}`.
    pub fn orbit_rank(&self, v: &[Rational]) -> usize {
        let mut span = Span::default();
        for a in &self.a_f_basis {
            span.insert(a.mul_vec(v));
        }
        span.dim()
    }

    /// First standard basis vector `v_k` that is cyclic for `A_f`.
    pub fn cyclic_vector(&self) -> Option<usize> {
        let d = self.dim_v();
        (0..d).find(|&k| {
            let v: Vec<Rational> = (0..d).map(|i| if i == k { Rational::one() } else { Rational::zero() }).collect();
            self.orbit_rank(&v) == d
        })
    }
}

/// Basis of the unital algebra generated by `gens`, built from words in the
/// generators until the span stops growing.
fn generated_subalgebra(d: usize, gens: &[Matrix<Rational>]) -> Vec<Matrix<Rational>> {
    let mut span = Span::default();
    let mut basis = Vec::new();
    let id = Matrix::identity(d);
    span.insert(id.entries().to_vec());
    basis.push(id);
    let mut frontier = 0;
    while frontier < basis.len() {
        let b = basis[frontier].clone();
        frontier += 1;
        for g in gens {
            let w = g.mul(&b);
            if span.insert(w.entries().to_vec()) {
                basis.push(w);
            }
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_relations_and_casimir() {
        for n in [0u32, 1, 4, 7] {
            let w = Sl2WeylData::new(n);
            assert_eq!(w.e.commutator(&w.f), w.h);
            assert_eq!(w.h.commutator(&w.e), w.e.scale(&int(2)));
            let c = int((n * (n + 2)) as i64) / int(2);
            assert_eq!(w.casimir, Matrix::identity(n as usize + 1).scale(&c));
        }
    }

    #[test]
    fn small_weights() {
        let w = Sl2WeylData::new(0);
        assert_eq!((w.dim_a_f(), w.cyclic_vector()), (1, Some(0)));
        let w = Sl2WeylData::new(1);
        assert_eq!(w.dim_a_f(), 2);
        assert!(w.is_commutative());
        // the lowest weight vector is killed by f
        assert_eq!(w.orbit_rank(&[int(0), int(1)]), 1);
        assert_eq!(w.cyclic_vector(), Some(0));
    }
}
