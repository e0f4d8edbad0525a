use num_traits::{One, Zero};
use serde::Serialize;

use super::algebra::{ChevalleyAlgebra, LieElement};
use crate::exact::json::ser;
use crate::exact::{int, Matrix, Poly, Rational, Scalar};

/// The principal `sl₂` triple and the Kostant basis of `ker(ad p₁)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrincipalData {
    /// `N = Σ E_{-α_i}`.
    #[serde(serialize_with = "ser::rational_vec")]
    pub p_minus1: LieElement,
    /// Coefficients of `2ρ̌` on `H_1..H_ℓ`.
    #[serde(serialize_with = "ser::rational_vec")]
    pub two_rho_check: Vec<Rational>,
    #[serde(serialize_with = "ser::rational_vec")]
    pub p1: LieElement,
    /// `p_1..p_ℓ`, homogeneous, sorted by degree; `p_1` is the triple's `p1`
    /// and `p_ℓ = E_θ`.
    #[serde(serialize_with = "ser::rational_vec_vec")]
    pub kostant_basis: Vec<LieElement>,
    pub degrees: Vec<usize>,
    pub coxeter_number: usize,
}

impl PrincipalData {
    pub fn new(alg: &ChevalleyAlgebra) -> Self {
        let l = alg.rank();
        let mut p_minus1 = alg.zero();
        for i in 0..l {
            p_minus1[alg.neg_simple_index(i)] = Rational::one();
        }
        // α_j(2ρ̌) = 2: Aᵀc = 2·1
        let a = &alg.root_system().cartan_matrix;
        let at = Matrix::from_fn(l, l, |i, j| int(a[j][i]));
        let two_rho_check = at.solve(&vec![int(2); l]).expect("Cartan matrix is invertible");
        let mut p1 = alg.zero();
        for i in 0..l {
            p1[alg.simple_index(i)] = two_rho_check[i].clone();
        }
        let ad_p1 = alg.ad(&p1);
        let degs = alg.degrees();
        let max_deg = *degs.iter().max().unwrap();
        let mut kostant_basis = Vec::new();
        let mut degrees = Vec::new();
        for d in 1..=max_deg {
            let src: Vec<usize> = (0..alg.dim()).filter(|&k| degs[k] == d).collect();
            let dst: Vec<usize> = (0..alg.dim()).filter(|&k| degs[k] == d + 1).collect();
            let m = Matrix::from_fn(dst.len(), src.len(), |i, j| ad_p1[(dst[i], src[j])].clone());
            let kernel = if dst.is_empty() {
                (0..src.len())
                    .map(|j| (0..src.len()).map(|i| if i == j { Rational::one() } else { Rational::zero() }).collect())
                    .collect()
            } else {
                m.kernel()
            };
            for v in kernel {
                let mut x = alg.zero();
                for (j, c) in v.into_iter().enumerate() {
                    x[src[j]] = c;
                }
                if d == 1 {
                    x = p1.clone();
                }
                kostant_basis.push(x);
                degrees.push((d + 1) as usize);
            }
        }
        let coxeter_number = *degrees.last().unwrap();
        PrincipalData { p_minus1, two_rho_check, p1, kostant_basis, degrees, coxeter_number }
    }

    /// `2ρ̌` as a full Lie algebra element.
    pub fn two_rho_check_element(&self, alg: &ChevalleyAlgebra) -> LieElement {
        let mut x = alg.zero();
        for (i, c) in self.two_rho_check.iter().enumerate() {
            x[alg.cartan_index(i)] = c.clone();
        }
        x
    }

    /// `ρ̌` as a full Lie algebra element.
    pub fn rho_check_element(&self, alg: &ChevalleyAlgebra) -> LieElement {
        self.two_rho_check_element(alg).into_iter().map(|c| c / int(2)).collect()
    }
}

/// `N + E_θ`.
pub fn n_plus_e(alg: &ChevalleyAlgebra) -> LieElement {
    let mut x = PrincipalData::new(alg).p_minus1;
    x[alg.highest_root_index()] += Rational::one();
    x
}

fn flatten(m: &Matrix<Rational>) -> Vec<Rational> {
    m.entries().to_vec()
}

/// Minimal polynomial of a square matrix over `Q`, from the first linear
/// dependency among `I, M, M², …`.
pub fn minimal_polynomial(m: &Matrix<Rational>) -> Poly<Rational> {
    let n = m.rows();
    let mut powers = vec![flatten(&Matrix::identity(n))];
    let mut cur = Matrix::identity(n);
    loop {
        cur = cur.mul(m);
        let target = flatten(&cur);
        let k = powers.len();
        let sys = Matrix::from_fn(n * n, k, |i, j| powers[j][i].clone());
        if let Some(c) = sys.solve(&target) {
            // M^k = Σ c_j M^j
            let mut coeffs: Vec<Rational> = c.into_iter().map(|x| -x).collect();
            coeffs.push(Rational::one());
            return Poly::new(coeffs);
        }
        powers.push(target);
    }
}

/// `dim ker(ad x) = ℓ` and `ad x` semisimple (squarefree minimal polynomial).
pub fn regular_semisimple_check(alg: &ChevalleyAlgebra, x: &[Rational]) -> bool {
    let ad = alg.ad(x);
    let n = alg.dim();
    if n - ad.rank() != alg.rank() {
        return false;
    }
    minimal_polynomial(&ad).is_squarefree()
}

/// `ad x` nilpotent and `dim ker(ad x) = ℓ`.
pub fn nilpotent_is_principal(alg: &ChevalleyAlgebra, x: &[Rational]) -> bool {
    let ad = alg.ad(x);
    ad.is_nilpotent() && alg.dim() - ad.rank() == alg.rank()
}

/// Matrix of the Coxeter element `s_1 s_2 ⋯ s_ℓ` on the root lattice.
pub fn coxeter_matrix(alg: &ChevalleyAlgebra) -> Matrix<Rational> {
    let l = alg.rank();
    let a = &alg.root_system().cartan_matrix;
    let reflection = |i: usize| {
        // s_i(α_j) = α_j − a_ij α_i, columns are images
        Matrix::from_fn(l, l, |r, c| {
            let mut v = if r == c { Rational::one() } else { Rational::zero() };
            if r == i {
                v -= int(a[i][c]);
            }
            v
        })
    };
    (0..l).fold(Matrix::identity(l), |w, i| w.mul(&reflection(i)))
}

/// `dim ker(w − 1)` for the Coxeter element `w`.
pub fn coxeter_fixed_space(alg: &ChevalleyAlgebra) -> usize {
    let w = coxeter_matrix(alg);
    let l = alg.rank();
    l - w.sub(&Matrix::identity(l)).rank()
}

/// Dimension of the fixed space of `Ad((2ρ̌)(e^{πi/h}))` on the centralizer
/// of `N + E`, computed in `Q(ζ_h)`.
pub fn torus_fixed_space(alg: &ChevalleyAlgebra) -> usize {
    let pd = PrincipalData::new(alg);
    let h = pd.coxeter_number as u32;
    let x = n_plus_e(alg);
    let kernel = alg.ad(&x).kernel();
    let zeta = Scalar::root_of_unity(h);
    // (2ρ̌)(e^{πi/h}) acts on g_α by ζ_h^{ht α}
    let degs = alg.degrees();
    let act = |v: &[Rational]| -> Vec<Scalar> {
        v.iter()
            .enumerate()
            .map(|(k, c)| Scalar::Rat(c.clone()) * &zeta.powi(degs[k]).expect("root of unity is invertible"))
            .collect()
    };
    let d = kernel.len();
    let n = alg.dim();
    // express Ad(n)k_j in the kernel basis by solving K c = Ad(n)k_j
    let kmat: Matrix<Scalar> = Matrix::from_fn(n, d, |i, j| Scalar::Rat(kernel[j][i].clone()));
    let mut cols = Vec::with_capacity(d);
    for kv in &kernel {
        let image = act(kv);
        let c = kmat.solve(&image).expect("Ad(n) preserves the centralizer");
        cols.push(c);
    }
    let m: Matrix<Scalar> = Matrix::from_fn(d, d, |i, j| cols[j][i].clone());
    d - m.sub(&Matrix::identity(d)).rank()
}
