use std::collections::HashMap;

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::roots::{height, CartanType, Root, RootSystem};
use crate::error::{Error, Result};
use crate::exact::{int, Matrix, Rational};

/// Coordinates of a Lie algebra element in the Chevalley basis.
pub type LieElement = Vec<Rational>;

/// What a basis vector is.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum BasisKind {
    /// `H_i = [E_{α_i}, E_{-α_i}]`.
    Cartan(usize),
    Root(Root),
}

/// Linear coordinates on a space of matrices spanned by given basis matrices.
#[derive(Clone, Debug)]
pub struct Decomposer {
    n: usize,
    positions: Vec<usize>,
    inverse: Matrix<Rational>,
    basis: Vec<Matrix<Rational>>,
}

impl Decomposer {
    pub fn new(basis: &[Matrix<Rational>]) -> Result<Self> {
        let n = basis.first().map_or(0, |m| m.rows());
        let d = basis.len();
        let rows: Vec<Vec<Rational>> = basis.iter().map(|m| m.entries().to_vec()).collect();
        let t = Matrix::from_rows(rows);
        let ech = t.rref();
        if ech.pivots.len() < d {
            return Err(Error::Invalid("basis matrices are linearly dependent".into()));
        }
        let positions = ech.pivots.clone();
        let restricted = Matrix::from_fn(d, d, |p, k| t[(k, positions[p])].clone());
        let inverse = restricted.inverse()?;
        Ok(Decomposer { n, positions, inverse, basis: basis.to_vec() })
    }

    /// Coordinates of `m`, assuming it lies in the span.
    pub fn coords_unchecked<'a>(&self, entry: impl Fn(usize, usize) -> &'a Rational) -> Vec<Rational> {
        let v: Vec<Rational> = self.positions.iter().map(|&p| entry(p / self.n, p % self.n).clone()).collect();
        self.inverse.mul_vec(&v)
    }

    /// Coordinates of `m`, or an error if it is outside the span.
    pub fn coords(&self, m: &Matrix<Rational>) -> Result<Vec<Rational>> {
        let c = self.coords_unchecked(|i, j| &m[(i, j)]);
        let mut back = Matrix::zeros(self.n, self.n);
        for (k, ck) in c.iter().enumerate() {
            if !ck.is_zero() {
                back = back.add(&self.basis[k].scale(ck));
            }
        }
        if &back != m {
            return Err(Error::NotInLieAlgebra);
        }
        Ok(c)
    }

    /// Flat positions `(row·n + col)` whose entries determine the coordinates.
    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    /// The inverse of the restriction of the basis to [`positions`](Self::positions).
    pub fn inverse(&self) -> &Matrix<Rational> {
        &self.inverse
    }

    pub fn size(&self) -> usize {
        self.n
    }
}

/// A simple Lie algebra in a Chevalley basis with exact integer structure constants.
///
/// Basis order: negative roots by decreasing height, then `H_1..H_ℓ`, then
/// positive roots by increasing height, so the `ad(ρ̌)`-degree is monotone.
#[derive(Debug)]
pub struct ChevalleyAlgebra {
    roots: RootSystem,
    basis: Vec<BasisKind>,
    degrees: Vec<i64>,
    index: HashMap<Root, usize>,
    /// `structure[a][b]` lists `(k, c)` with `[X_a, X_b] = Σ c X_k`.
    structure: Vec<Vec<Vec<(usize, i64)>>>,
    /// The faithful matrices the algebra was built from.
    construction: Vec<Matrix<Rational>>,
    construction_decomposer: Decomposer,
}

fn unit(n: usize, i: usize, j: usize) -> Matrix<Rational> {
    let mut m = Matrix::zeros(n, n);
    m[(i, j)] = Rational::one();
    m
}

/// Chevalley generators `(e_i, f_i)` in a faithful representation.
fn generators(t: CartanType, rank: usize) -> Vec<(Matrix<Rational>, Matrix<Rational>)> {
    let l = rank;
    match t {
        CartanType::A => {
            let n = l + 1;
            (0..l).map(|i| (unit(n, i, i + 1), unit(n, i + 1, i))).collect()
        }
        CartanType::B => {
            // so(2ℓ+1) preserving the antidiagonal form; index i' = 2ℓ − i
            let m = 2 * l + 1;
            let p = |i: usize| m - 1 - i;
            let mut g: Vec<_> = (0..l - 1)
                .map(|i| {
                    let e = unit(m, i, i + 1).sub(&unit(m, p(i + 1), p(i)));
                    let f = e.transpose();
                    (e, f)
                })
                .collect();
            let e = unit(m, l - 1, l).sub(&unit(m, l, l + 1));
            let f = unit(m, l, l - 1).sub(&unit(m, l + 1, l)).scale(&int(2));
            g.push((e, f));
            g
        }
        CartanType::C => {
            // sp(2ℓ) for the form [[0, K], [−K, 0]] with K antidiagonal
            let m = 2 * l;
            let p = |i: usize| m - 1 - i;
            let mut g: Vec<_> = (0..l - 1)
                .map(|i| {
                    let e = unit(m, i, i + 1).sub(&unit(m, p(i + 1), p(i)));
                    let f = e.transpose();
                    (e, f)
                })
                .collect();
            let e = unit(m, l - 1, l);
            let f = e.transpose();
            g.push((e, f));
            g
        }
        CartanType::D => {
            let m = 2 * l;
            let p = |i: usize| m - 1 - i;
            let mut g: Vec<_> = (0..l - 1)
                .map(|i| {
                    let e = unit(m, i, i + 1).sub(&unit(m, p(i + 1), p(i)));
                    let f = e.transpose();
                    (e, f)
                })
                .collect();
            let e = unit(m, l - 2, p(l - 1)).sub(&unit(m, l - 1, p(l - 2)));
            let f = e.transpose();
            g.push((e, f));
            g
        }
        CartanType::G => {
            // the fixed points of triality inside so(8): short = α1+α3+α4, long = α2
            let d4 = generators(CartanType::D, 4);
            let short_e = d4[0].0.add(&d4[2].0).add(&d4[3].0);
            let short_f = d4[0].1.add(&d4[2].1).add(&d4[3].1);
            vec![(short_e, short_f), (d4[1].0.clone(), d4[1].1.clone())]
        }
    }
}

impl ChevalleyAlgebra {
    pub fn new(t: CartanType, rank: usize) -> Result<Self> {
        let roots = RootSystem::new(t, rank)?;
        let gens = generators(t, rank);
        let l = rank;
        let hs: Vec<Matrix<Rational>> = gens.iter().map(|(e, f)| e.commutator(f)).collect();
        // [h_i, e_j] = a_ij e_j
        for i in 0..l {
            for j in 0..l {
                let lhs = hs[i].commutator(&gens[j].0);
                let rhs = gens[j].0.scale(&int(roots.cartan_matrix[i][j]));
                if lhs != rhs {
                    return Err(Error::Invalid(format!("generator check failed for {t}{rank} at ({i},{j})")));
                }
            }
        }
        let pos = &roots.positive_roots;
        let mut e_pos: Vec<Matrix<Rational>> = Vec::with_capacity(pos.len());
        let mut e_neg: Vec<Matrix<Rational>> = Vec::with_capacity(pos.len());
        let mut pos_index: HashMap<Root, usize> = HashMap::new();
        for (k, xi) in pos.iter().enumerate() {
            if height(xi) == 1 {
                let i = xi.iter().position(|&c| c == 1).unwrap();
                e_pos.push(gens[i].0.clone());
                e_neg.push(gens[i].1.clone());
            } else {
                let (i, beta) = (0..l)
                    .find_map(|i| {
                        let mut b = xi.clone();
                        b[i] -= 1;
                        (b[i] >= 0 && pos_index.contains_key(&b)).then_some((i, b))
                    })
                    .expect("every non-simple positive root has a simple predecessor");
                let b = pos_index[&beta];
                let p = roots.string_down(&beta, i);
                let inv = Rational::new(1.into(), (p + 1).into());
                e_pos.push(gens[i].0.commutator(&e_pos[b]).scale(&inv));
                e_neg.push(gens[i].1.commutator(&e_neg[b]).scale(&-inv));
            }
            pos_index.insert(xi.clone(), k);
        }
        let np = pos.len();
        let mut basis = Vec::with_capacity(2 * np + l);
        let mut mats = Vec::with_capacity(2 * np + l);
        let mut degrees = Vec::with_capacity(2 * np + l);
        for k in (0..np).rev() {
            basis.push(BasisKind::Root(pos[k].iter().map(|x| -x).collect()));
            mats.push(e_neg[k].clone());
            degrees.push(-height(&pos[k]));
        }
        for (i, h) in hs.iter().enumerate() {
            basis.push(BasisKind::Cartan(i));
            mats.push(h.clone());
            degrees.push(0);
        }
        for k in 0..np {
            basis.push(BasisKind::Root(pos[k].clone()));
            mats.push(e_pos[k].clone());
            degrees.push(height(&pos[k]));
        }
        let decomposer = Decomposer::new(&mats)?;
        let dim = mats.len();
        let mut structure = vec![vec![Vec::new(); dim]; dim];
        for a in 0..dim {
            for b in (a + 1)..dim {
                let br = mats[a].commutator(&mats[b]);
                let c = decomposer.coords(&br)?;
                let mut entries = Vec::new();
                for (k, ck) in c.into_iter().enumerate() {
                    if ck.is_zero() {
                        continue;
                    }
                    if !ck.is_integer() {
                        return Err(Error::Invalid(format!("non-integral structure constant {ck}")));
                    }
                    entries.push((k, ck.to_integer().to_i64().unwrap()));
                }
                structure[b][a] = entries.iter().map(|(k, c)| (*k, -c)).collect();
                structure[a][b] = entries;
            }
        }
        let index = basis
            .iter()
            .enumerate()
            .filter_map(|(i, b)| match b {
                BasisKind::Root(r) => Some((r.clone(), i)),
                _ => None,
            })
            .collect();
        Ok(ChevalleyAlgebra {
            roots,
            basis,
            degrees,
            index,
            structure,
            construction: mats,
            construction_decomposer: decomposer,
        })
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.roots
    }

    pub fn cartan_type(&self) -> CartanType {
        self.roots.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.roots.rank
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.cartan_type(), self.rank())
    }

    pub fn basis(&self) -> &[BasisKind] {
        &self.basis
    }

    /// `ad(ρ̌)`-degree (root height) of each basis vector.
    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn num_positive(&self) -> usize {
        self.roots.num_positive()
    }

    /// Basis index of `E_α`.
    pub fn root_index(&self, alpha: &[i64]) -> Option<usize> {
        self.index.get(alpha).copied()
    }

    /// Basis index of `H_i`.
    pub fn cartan_index(&self, i: usize) -> usize {
        self.num_positive() + i
    }

    pub fn simple_index(&self, i: usize) -> usize {
        self.root_index(&self.roots.simple_root(i)).unwrap()
    }

    pub fn neg_simple_index(&self, i: usize) -> usize {
        let mut r = vec![0; self.rank()];
        r[i] = -1;
        self.root_index(&r).unwrap()
    }

    pub fn highest_root_index(&self) -> usize {
        self.root_index(self.roots.highest_root()).unwrap()
    }

    pub fn zero(&self) -> LieElement {
        vec![Rational::zero(); self.dim()]
    }

    pub fn basis_element(&self, k: usize) -> LieElement {
        let mut v = self.zero();
        v[k] = Rational::one();
        v
    }

    /// Sparse structure constants of `[X_a, X_b]`.
    pub fn structure(&self, a: usize, b: usize) -> &[(usize, i64)] {
        &self.structure[a][b]
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> LieElement {
        let mut out = self.zero();
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let p = xa * yb;
                for (k, c) in &self.structure[a][b] {
                    out[*k] += &p * int(*c);
                }
            }
        }
        out
    }

    /// Matrix of `ad x` in the Chevalley basis.
    pub fn ad(&self, x: &[Rational]) -> Matrix<Rational> {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for b in 0..n {
                for (k, c) in &self.structure[a][b] {
                    m[(*k, b)] += xa * int(*c);
                }
            }
        }
        m
    }

    /// The faithful matrices used to build the algebra (defining representation
    /// for classical types, the 8-dimensional one via `so(8)` for `G₂`).
    pub fn construction_matrices(&self) -> &[Matrix<Rational>] {
        &self.construction
    }

    pub fn construction_decomposer(&self) -> &Decomposer {
        &self.construction_decomposer
    }

    /// Image of `x` in the construction representation.
    pub fn construction_image(&self, x: &[Rational]) -> Matrix<Rational> {
        let n = self.construction[0].rows();
        let mut m = Matrix::zeros(n, n);
        for (k, c) in x.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.construction[k].scale(c));
            }
        }
        m
    }

    /// Exhaustive Jacobi identity check; returns the first failing triple.
    pub fn jacobi_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim();
        let e = |k| self.basis_element(k);
        for a in 0..n {
            for b in (a + 1)..n {
                let ab = self.bracket(&e(a), &e(b));
                for c in (b + 1)..n {
                    let bc = self.bracket(&e(b), &e(c));
                    let ca = self.bracket(&e(c), &e(a));
                    let t1 = self.bracket(&ab, &e(c));
                    let t2 = self.bracket(&bc, &e(a));
                    let t3 = self.bracket(&ca, &e(b));
                    if t1.iter().zip(&t2).zip(&t3).any(|((x, y), z)| !(x + y + z).is_zero()) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// Coroot `[E_α, E_{-α}]` expressed in `H_1..H_ℓ`.
    pub fn coroot(&self, alpha: &[i64]) -> Vec<Rational> {
        let neg: Root = alpha.iter().map(|x| -x).collect();
        let x = self.basis_element(self.root_index(alpha).unwrap());
        let y = self.basis_element(self.root_index(&neg).unwrap());
        let h = self.bracket(&x, &y);
        (0..self.rank()).map(|i| h[self.cartan_index(i)].clone()).collect()
    }

    /// Value of the root `alpha` on the Cartan element `Σ c_i H_i`.
    pub fn root_value(&self, alpha: &[i64], cartan: &[Rational]) -> Rational {
        let a = &self.roots.cartan_matrix;
        let mut s = Rational::zero();
        for (i, ci) in cartan.iter().enumerate() {
            let pairing: i64 = (0..self.rank()).map(|j| alpha[j] * a[i][j]).sum();
            s += ci * int(pairing);
        }
        s
    }
}

#[derive(Serialize)]
pub struct AlgebraDump {
    pub cartan_type: CartanType,
    pub rank: usize,
    pub dim: usize,
    pub cartan_matrix: Vec<Vec<i64>>,
    pub positive_roots: Vec<Root>,
    pub basis: Vec<BasisKind>,
    pub structure_constants: Vec<(usize, usize, Vec<(usize, i64)>)>,
}

impl ChevalleyAlgebra {
    /// Roots and structure constants for golden-file comparison.
    pub fn dump(&self) -> AlgebraDump {
        let n = self.dim();
        let mut sc = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                if !self.structure[a][b].is_empty() {
                    sc.push((a, b, self.structure[a][b].clone()));
                }
            }
        }
        AlgebraDump {
            cartan_type: self.cartan_type(),
            rank: self.rank(),
            dim: n,
            cartan_matrix: self.roots.cartan_matrix.clone(),
            positive_roots: self.roots.positive_roots.clone(),
            basis: self.basis.clone(),
            structure_constants: sc,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::roots::SUPPORTED;

    #[test]
    fn dimensions_and_jacobi() {
        for &(t, r) in SUPPORTED {
            let g = ChevalleyAlgebra::new(t, r).unwrap();
            assert_eq!(g.dim(), r + 2 * g.num_positive());
            if g.dim() <= 21 {
                assert_eq!(g.jacobi_violation(), None, "{t}{r}");
            }
        }
    }

    #[test]
    fn coroots_are_integral_and_pair_correctly() {
        let g = ChevalleyAlgebra::new(CartanType::G, 2).unwrap();
        for alpha in g.root_system().positive_roots.clone() {
            let h = g.coroot(&alpha);
            assert!(h.iter().all(|c| c.is_integer()));
            assert_eq!(g.root_value(&alpha, &h), int(2));
        }
    }

    #[test]
    fn sl2_matches_standard_basis() {
        let g = ChevalleyAlgebra::new(CartanType::A, 1).unwrap();
        // basis order: f, h, e
        assert_eq!(g.structure(1, 2), &[(2, 2)]);
        assert_eq!(g.structure(1, 0), &[(0, -2)]);
        assert_eq!(g.structure(2, 0), &[(1, 1)]);
    }
}
