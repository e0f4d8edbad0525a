use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::algebra::{ChevalleyAlgebra, Decomposer, LieElement};
use super::roots::CartanType;
use crate::error::{Error, Result};
use crate::exact::{Matrix, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepKind {
    Adjoint,
    Defining,
}

impl fmt::Display for RepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RepKind::Adjoint => "adjoint",
            RepKind::Defining => "defining",
        })
    }
}

impl RepKind {
    /// The smallest available representation of the type.
    pub fn smallest(t: CartanType) -> RepKind {
        if t == CartanType::G {
            RepKind::Adjoint
        } else {
            RepKind::Defining
        }
    }
}

impl FromStr for RepKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adjoint" => Ok(RepKind::Adjoint),
            "defining" => Ok(RepKind::Defining),
            other => Err(Error::UnsupportedRepresentation(other.to_string())),
        }
    }
}

/// A faithful matrix representation: one exact matrix per Chevalley basis vector.
#[derive(Debug)]
pub struct Representation {
    alg: Arc<ChevalleyAlgebra>,
    kind: RepKind,
    matrices: Vec<Matrix<Rational>>,
    decomposer: Decomposer,
}

impl Representation {
    pub fn new(alg: &Arc<ChevalleyAlgebra>, kind: RepKind) -> Result<Self> {
        let matrices = match kind {
            RepKind::Adjoint => (0..alg.dim()).map(|k| alg.ad(&alg.basis_element(k))).collect(),
            RepKind::Defining => {
                if alg.cartan_type() == CartanType::G {
                    return Err(Error::UnsupportedRepresentation(format!("defining representation of {}", alg.name())));
                }
                alg.construction_matrices().to_vec()
            }
        };
        let decomposer = match kind {
            RepKind::Defining => alg.construction_decomposer().clone(),
            RepKind::Adjoint => Decomposer::new(&matrices)?,
        };
        Ok(Representation { alg: alg.clone(), kind, matrices, decomposer })
    }

    pub fn algebra(&self) -> &Arc<ChevalleyAlgebra> {
        &self.alg
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].rows()
    }

    pub fn matrices(&self) -> &[Matrix<Rational>] {
        &self.matrices
    }

    pub fn matrix(&self, k: usize) -> &Matrix<Rational> {
        &self.matrices[k]
    }

    pub fn image(&self, x: &[Rational]) -> Matrix<Rational> {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for (k, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, j, v) in self.nonzero_entries(k) {
                m[(i, j)] += c * v;
            }
        }
        m
    }

    /// Nonzero entries `(i, j, value)` of the matrix of basis vector `k`.
    pub fn nonzero_entries(&self, k: usize) -> impl Iterator<Item = (usize, usize, &Rational)> {
        let n = self.dim();
        self.matrices[k]
            .entries()
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(p, v)| (p / n, p % n, v))
    }

    pub fn decomposer(&self) -> &Decomposer {
        &self.decomposer
    }

    /// Chevalley coordinates of a matrix in the image.
    pub fn preimage(&self, m: &Matrix<Rational>) -> Result<LieElement> {
        self.decomposer.coords(m)
    }

    /// Diagonal of the image of the Cartan element `Σ c_i H_i` (the Cartan acts diagonally).
    pub fn cartan_diagonal(&self, c: &[Rational]) -> Vec<Rational> {
        let n = self.dim();
        let mut d = vec![Rational::zero(); n];
        for (i, ci) in c.iter().enumerate() {
            let m = &self.matrices[self.alg.cartan_index(i)];
            for (j, dj) in d.iter_mut().enumerate() {
                *dj += ci * &m[(j, j)];
            }
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::roots::SUPPORTED;

    #[test]
    fn bracket_compatibility() {
        for &(t, r) in SUPPORTED.iter().filter(|(t, r)| *t != CartanType::D && *r <= 3) {
            let g = Arc::new(ChevalleyAlgebra::new(t, r).unwrap());
            for kind in [RepKind::Adjoint, RepKind::Defining] {
                let Ok(rep) = Representation::new(&g, kind) else {
                    assert_eq!(t, CartanType::G);
                    continue;
                };
                for a in 0..g.dim() {
                    for b in 0..g.dim() {
                        let lhs = rep.image(&g.bracket(&g.basis_element(a), &g.basis_element(b)));
                        let rhs = rep.matrix(a).commutator(rep.matrix(b));
                        assert_eq!(lhs, rhs, "{t}{r} {kind} ({a},{b})");
                    }
                }
            }
        }
    }

    #[test]
    fn cartan_is_diagonal() {
        let g = Arc::new(ChevalleyAlgebra::new(CartanType::B, 2).unwrap());
        for kind in [RepKind::Adjoint, RepKind::Defining] {
            let rep = Representation::new(&g, kind).unwrap();
            for i in 0..g.rank() {
                let m = rep.matrix(g.cartan_index(i));
                for a in 0..rep.dim() {
                    for b in 0..rep.dim() {
                        assert!(a == b || m[(a, b)].is_zero());
                    }
                }
            }
        }
    }
}
