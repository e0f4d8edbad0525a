use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    G,
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CartanType::A => "A",
            CartanType::B => "B",
            CartanType::C => "C",
            CartanType::D => "D",
            CartanType::G => "G",
        };
        f.write_str(s)
    }
}

impl FromStr for CartanType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(CartanType::A),
            "B" | "b" => Ok(CartanType::B),
            "C" | "c" => Ok(CartanType::C),
            "D" | "d" => Ok(CartanType::D),
            "G" | "g" => Ok(CartanType::G),
            other => Err(Error::UnsupportedAlgebra(other.to_string(), 0)),
        }
    }
}

/// The supported `(type, rank)` pairs.
pub const SUPPORTED: &[(CartanType, usize)] = &[
    (CartanType::A, 1),
    (CartanType::A, 2),
    (CartanType::A, 3),
    (CartanType::A, 4),
    (CartanType::B, 2),
    (CartanType::B, 3),
    (CartanType::B, 4),
    (CartanType::C, 2),
    (CartanType::C, 3),
    (CartanType::C, 4),
    (CartanType::D, 4),
    (CartanType::G, 2),
];

pub fn is_supported(t: CartanType, rank: usize) -> bool {
    SUPPORTED.contains(&(t, rank))
}

/// Root in the simple-root basis.
pub type Root = Vec<i64>;

pub fn height(r: &[i64]) -> i64 {
    r.iter().sum()
}

/// A reduced irreducible root system with Bourbaki numbering.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootSystem {
    pub cartan_type: CartanType,
    pub rank: usize,
    /// `a_ij = α_j(h_i)`, so `[h_i, e_j] = a_ij e_j`.
    pub cartan_matrix: Vec<Vec<i64>>,
    /// Positive roots ordered by height, then lexicographically; simple roots first.
    pub positive_roots: Vec<Root>,
}

/// Cartan matrix of a supported type.
pub fn cartan_matrix(t: CartanType, rank: usize) -> Result<Vec<Vec<i64>>> {
    if !is_supported(t, rank) {
        return Err(Error::UnsupportedAlgebra(t.to_string(), rank));
    }
    let n = rank;
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    match t {
        CartanType::A | CartanType::B | CartanType::C => {
            for i in 0..n - 1 {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
            if t == CartanType::B {
                a[n - 1][n - 2] = -2;
            } else if t == CartanType::C {
                a[n - 2][n - 1] = -2;
            }
        }
        CartanType::D => {
            for i in 0..n - 2 {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
            a[n - 3][n - 1] = -1;
            a[n - 1][n - 3] = -1;
        }
        CartanType::G => {
            // α1 short, α2 long
            a[0][1] = -3;
            a[1][0] = -1;
        }
    }
    Ok(a)
}

impl RootSystem {
    pub fn new(t: CartanType, rank: usize) -> Result<Self> {
        let a = cartan_matrix(t, rank)?;
        let positive_roots = positive_roots_from_cartan(&a);
        Ok(RootSystem { cartan_type: t, rank, cartan_matrix: a, positive_roots })
    }

    /// `⟨β, α_i^∨⟩ = β(h_i)`.
    pub fn pairing(&self, beta: &[i64], i: usize) -> i64 {
        (0..self.rank).map(|j| beta[j] * self.cartan_matrix[i][j]).sum()
    }

    pub fn simple_root(&self, i: usize) -> Root {
        let mut r = vec![0; self.rank];
        r[i] = 1;
        r
    }

    pub fn is_root(&self, r: &[i64]) -> bool {
        let pos = r.iter().all(|&x| x >= 0);
        let neg = r.iter().all(|&x| x <= 0);
        if pos {
            self.positive_roots.iter().any(|p| p.as_slice() == r)
        } else if neg {
            self.positive_roots.iter().any(|p| p.iter().zip(r).all(|(a, b)| *a == -b))
        } else {
            false
        }
    }

    pub fn num_positive(&self) -> usize {
        self.positive_roots.len()
    }

    /// All roots: positives followed by their negatives.
    pub fn roots(&self) -> Vec<Root> {
        let mut out = self.positive_roots.clone();
        out.extend(self.positive_roots.iter().map(|r| r.iter().map(|x| -x).collect()));
        out
    }

    pub fn highest_root(&self) -> &Root {
        self.positive_roots.last().expect("nonempty root system")
    }

    /// Largest `p` with `β − pα_i` a root (or zero when `β − α_i` is not a root).
    pub fn string_down(&self, beta: &[i64], i: usize) -> i64 {
        let mut p = 0;
        let mut cur = beta.to_vec();
        loop {
            cur[i] -= 1;
            if !self.is_root(&cur) {
                return p;
            }
            p += 1;
        }
    }

    /// Coxeter number, computed as `|Φ| / ℓ`.
    pub fn coxeter_number(&self) -> usize {
        2 * self.num_positive() / self.rank
    }
}

/// Positive roots by α-string closure from the Cartan matrix.
pub fn positive_roots_from_cartan(a: &[Vec<i64>]) -> Vec<Root> {
    let n = a.len();
    let mut known: HashSet<Root> = HashSet::new();
    let mut layers: Vec<Vec<Root>> = vec![(0..n)
        .map(|i| {
            let mut r = vec![0; n];
            r[i] = 1;
            r
        })
        .collect()];
    for r in &layers[0] {
        known.insert(r.clone());
    }
    loop {
        let mut next: Vec<Root> = Vec::new();
        for beta in layers.last().unwrap() {
            for i in 0..n {
                // p: how far down the α_i-string goes from β
                let mut p = 0;
                let mut cur = beta.clone();
                loop {
                    cur[i] -= 1;
                    if cur.iter().all(|&x| x >= 0) && known.contains(&cur) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let pairing: i64 = (0..n).map(|j| beta[j] * a[i][j]).sum();
                let q = p - pairing;
                if q > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if !next.contains(&up) {
                        next.push(up);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        for r in &next {
            known.insert(r.clone());
        }
        layers.push(next);
    }
    let mut all: Vec<Root> = layers.into_iter().flatten().collect();
    all.sort_by(|x, y| height(x).cmp(&height(y)).then_with(|| y.cmp(x)));
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_counts() {
        let expect = [
            (CartanType::A, 1, 1),
            (CartanType::A, 2, 3),
            (CartanType::A, 3, 6),
            (CartanType::B, 2, 4),
            (CartanType::C, 3, 9),
            (CartanType::D, 4, 12),
            (CartanType::G, 2, 6),
        ];
        for (t, r, n) in expect {
            assert_eq!(RootSystem::new(t, r).unwrap().num_positive(), n, "{t}{r}");
        }
    }

    #[test]
    fn g2_highest_root() {
        let rs = RootSystem::new(CartanType::G, 2).unwrap();
        assert_eq!(rs.highest_root(), &vec![3, 2]);
        assert_eq!(rs.coxeter_number(), 6);
    }

    #[test]
    fn unsupported() {
        assert!(RootSystem::new(CartanType::A, 9).is_err());
        assert!(RootSystem::new(CartanType::D, 3).is_err());
    }
}
