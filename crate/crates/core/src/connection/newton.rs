//! Slopes, irregularity and leading exponents of a formal connection.
//!
//! The connection `d + A dx` is rewritten with `θ = x d/dx` as `θ + B`,
//! `B = xA`. For a cyclic vector `e` the vectors `e_{k+1} = θ(e_k) + B e_k`
//! give an operator `L = θⁿ + Σ c_i θ^i` with `L e = 0`, and the lower convex
//! hull of the points `(i, ord c_i)` (with `(n, 0)`) carries the slopes. An
//! edge of slope `σ > 0` with horizontal length `m` contributes `m` solutions
//! whose `θ`-eigenvalue starts `y·x^{-σ}`, where `y` runs over the roots of
//! `Σ_{i on edge} lc(c_i) y^{i - i_a}`; the matching eigenvalues of `A` start
//! `y·x^{-σ-1}`.

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::{linalg, FormalConnection};
use crate::error::{Error, Result};
use crate::exact::json::ser;
use crate::exact::{int, rational_root, LaurentSeries, Matrix, Poly, Rational, Scalar, Tower};
use crate::lie::RepKind;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Vertex {
    pub i: usize,
    #[serde(serialize_with = "ser::rational")]
    pub v: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Edge {
    pub start: usize,
    pub end: usize,
    #[serde(serialize_with = "ser::rational")]
    pub slope: Rational,
    /// Indices of the points lying on the edge, endpoints included.
    pub on_edge: Vec<usize>,
}

impl Edge {
    pub fn length(&self) -> usize {
        self.end - self.start
    }
}

/// The part of a lower convex hull to the right of its rightmost minimum;
/// all its edges have positive slope.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NewtonPolygon {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

impl NewtonPolygon {
    /// Hull of `points`, which must be sorted by index with distinct indices.
    pub fn from_points(points: &[(usize, Rational)]) -> Self {
        assert!(!points.is_empty(), "a Newton polygon needs at least one point");
        let v_min = points.iter().map(|(_, v)| v).min().unwrap().clone();
        let start = points.iter().rposition(|(_, v)| *v == v_min).unwrap();
        let mut vertices = vec![Vertex { i: points[start].0, v: v_min }];
        let mut edges = Vec::new();
        let mut cur = start;
        while cur + 1 < points.len() {
            let (ci, cv) = &points[cur];
            let mut best: Option<(usize, Rational)> = None;
            for (k, (j, v)) in points.iter().enumerate().skip(cur + 1) {
                let s = (v - cv) / int((j - ci) as i64);
                if best.as_ref().is_none_or(|(_, b)| s <= *b) {
                    best = Some((k, s));
                }
            }
            let (next, slope) = best.unwrap();
            let on_edge = points[cur..=next]
                .iter()
                .filter(|(j, v)| *v == cv + &slope * int((j - ci) as i64))
                .map(|(j, _)| *j)
                .collect();
            edges.push(Edge { start: *ci, end: points[next].0, slope, on_edge });
            vertices.push(Vertex { i: points[next].0, v: points[next].1.clone() });
            cur = next;
        }
        NewtonPolygon { vertices, edges }
    }

    /// Largest slope, `0` when there is no edge.
    pub fn slope(&self) -> Rational {
        self.edges.last().map_or_else(Rational::zero, |e| e.slope.clone())
    }

    /// `Σ slope × length` over all edges.
    pub fn irregularity(&self) -> Rational {
        self.edges.iter().map(|e| &e.slope * int(e.length() as i64)).fold(Rational::zero(), |a, b| a + b)
    }

    /// Height of the hull above index `i ≥` the first vertex.
    pub fn value_at(&self, i: usize) -> Rational {
        let first = &self.vertices[0];
        if i <= first.i {
            return first.v.clone();
        }
        for e in &self.edges {
            if i <= e.end {
                let base = self.vertices.iter().find(|v| v.i == e.start).unwrap();
                return &base.v + &e.slope * int((i - e.start) as i64);
            }
        }
        self.vertices.last().unwrap().v.clone()
    }
}

/// The differential operator attached to a cyclic vector, with its polygon.
#[derive(Clone, Debug)]
pub struct OperatorData {
    /// `c_0, …, c_n` with `c_n = 1`.
    pub coeffs: Vec<LaurentSeries>,
    pub polygon: NewtonPolygon,
    /// Index of the cyclic vector among the candidates tried.
    pub candidate: usize,
    pub relative_precision: i64,
}

/// Leading data of the solutions along one edge of slope `σ > 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentBranch {
    #[serde(serialize_with = "ser::rational")]
    pub slope: Rational,
    /// Exponent `-σ-1` of the leading eigenvalue term of `A`.
    #[serde(serialize_with = "ser::rational")]
    pub exponent: Rational,
    /// `q`: the leading coefficients `y` enter only through `z = y^q`.
    pub ramification: u32,
    /// Monic `R(z)` with `Σ lc(c_i) y^{i-i_a} ∝ R(y^q)`, low degree first.
    pub polynomial: Vec<Scalar>,
    /// Number of solutions on the edge, `q·deg R`.
    pub count: usize,
    /// The `count` leading coefficients, when `R` splits over the rationals.
    pub leading_coefficients: Option<Vec<Scalar>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IrregularExponents {
    pub branches: Vec<ExponentBranch>,
    pub polygon: NewtonPolygon,
}

impl IrregularExponents {
    /// Equality of the invariant part (slopes, `q`, `R`, counts).
    pub fn same_invariants(&self, other: &Self) -> bool {
        self.branches.len() == other.branches.len()
            && self.branches.iter().zip(&other.branches).all(|(a, b)| {
                a.slope == b.slope && a.ramification == b.ramification && a.polynomial == b.polynomial && a.count == b.count
            })
    }

    /// Multiset of `(c, r)` with leading eigenvalue terms `c·x^r`, if explicit.
    pub fn leading_terms(&self) -> Option<Vec<(Scalar, Rational)>> {
        let mut out = Vec::new();
        for b in &self.branches {
            for c in b.leading_coefficients.as_ref()? {
                out.push((c.clone(), b.exponent.clone()));
            }
        }
        Some(out)
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }
}

const PRECISIONS: &[i64] = &[16, 32, 64, 128, 256, 512];
const SCREEN_POINTS: &[i64] = &[2, 3, 5];

fn basis_vector(n: usize, k: usize) -> Vec<LaurentSeries> {
    (0..n).map(|i| if i == k { LaurentSeries::one() } else { LaurentSeries::zero() }).collect()
}

fn candidate(n: usize, k: usize) -> Option<Vec<LaurentSeries>> {
    let x = |j: i64, c: i64| LaurentSeries::monomial(Scalar::from_i64(c), j);
    let v = match k {
        0 => basis_vector(n, n - 1),
        1 => basis_vector(n, 0),
        2 => (0..n).map(|_| LaurentSeries::one()).collect(),
        3 => (0..n).map(|j| x(0, j as i64 + 1)).collect(),
        4 => (0..n).map(|j| x(j as i64, 1)).collect(),
        5 => (0..n).map(|j| x(-(j as i64), 1)).collect(),
        6 => (0..n).map(|j| x(j as i64, j as i64 + 1)).collect(),
        7 => (0..n).map(|j| &x(0, 1) + &x(j as i64 + 1, (j * j) as i64 + 1)).collect(),
        _ => return None,
    };
    Some(v)
}

fn eval_at(f: &LaurentSeries, x0: &Rational) -> Result<Scalar> {
    let mut acc = Scalar::zero();
    for (e, c) in f.terms() {
        let p = Scalar::Rat(x0.clone()).powi(*e)?;
        acc = acc.checked_add(&c.checked_mul(&p)?)?;
    }
    Ok(acc)
}

/// Krylov vectors `e_0 … e_n` of `θ + B`.
fn krylov(b: &Matrix<LaurentSeries>, e0: Vec<LaurentSeries>) -> Result<Vec<Vec<LaurentSeries>>> {
    let n = b.rows();
    let mut out = vec![e0];
    for k in 0..n {
        let prev = &out[k];
        let be = linalg::mul_vec(b, prev)?;
        let next = prev.iter().zip(be).map(|(p, q)| p.theta().checked_add(&q)).collect::<Result<Vec<_>>>()?;
        out.push(next);
    }
    Ok(out)
}

/// Exact nonsingularity test of the Krylov matrix at a few sample points
/// (entries rescaled to a common ramification first).
fn screened(es: &[Vec<LaurentSeries>]) -> Result<bool> {
    let n = es.len() - 1;
    let ram = es.iter().flatten().map(|f| f.ram() as u64).fold(1u64, |a, b| a.lcm(&b)) as u32;
    let lifted: Vec<Vec<LaurentSeries>> = es[..n]
        .iter()
        .map(|col| {
            col.iter()
                .map(|f| {
                    let k = ram / f.ram();
                    LaurentSeries::from_terms(1, f.terms().iter().map(|(e, c)| (e * k as i64, c.clone())).collect::<Vec<_>>(), None)
                })
                .collect()
        })
        .collect();
    for &p in SCREEN_POINTS {
        let x0 = int(p);
        let mut m: Matrix<Scalar> = Matrix::zeros(n, n);
        for (j, col) in lifted.iter().enumerate() {
            for (i, f) in col.iter().enumerate() {
                m[(i, j)] = eval_at(f, &x0)?;
            }
        }
        if !m.determinant().is_zero() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Certifies the polygon of `L` against the unknown tails of its coefficients.
fn certify(coeffs: &[LaurentSeries]) -> Option<NewtonPolygon> {
    let points: Vec<(usize, Rational)> =
        coeffs.iter().enumerate().filter_map(|(i, c)| c.valuation().map(|v| (i, v))).collect();
    let poly = NewtonPolygon::from_points(&points);
    let first = &poly.vertices[0];
    for (j, c) in coeffs.iter().enumerate() {
        if c.valuation().is_some() || c.is_exact() {
            continue;
        }
        let k = c.trunc().unwrap();
        let ok = if j < first.i { k >= first.v } else { k > poly.value_at(j) };
        if !ok {
            return None;
        }
    }
    Some(poly)
}

fn local_matrix(conn: &FormalConnection) -> Result<Matrix<LaurentSeries>> {
    let x = LaurentSeries::monomial(Scalar::one(), 1);
    let n = conn.dim();
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let f = &conn.matrix()[(i, j)];
            if !f.is_zero() {
                out[(i, j)] = f.checked_mul(&x)?;
            }
        }
    }
    Ok(out)
}

/// The operator of a cyclic vector and its certified Newton polygon.
pub fn operator(conn: &FormalConnection) -> Result<OperatorData> {
    let b = local_matrix(conn)?;
    let n = conn.dim();
    let exact = conn.is_exact();
    let mut krylovs = Vec::new();
    for k in 0.. {
        let Some(v) = candidate(n, k) else { break };
        let es = krylov(&b, v)?;
        let passes = !exact || screened(&es)?;
        krylovs.push((k, es, passes));
    }
    // screened candidates first; the rest only for inexact input or as a fallback
    krylovs.sort_by_key(|(k, _, p)| (!p, *k));
    let mut last_err = Error::InsufficientPrecision("no cyclic vector could be certified".into());
    for (k, es, passes) in krylovs {
        if exact && !passes && k > 0 {
            continue;
        }
        let kmat = Matrix::from_fn(n, n, |i, j| es[j][i].clone());
        let rhs: Vec<LaurentSeries> = es[n].iter().map(|f| -f).collect();
        let mut prev_truncs: Option<Vec<Option<i64>>> = None;
        for &rel in PRECISIONS {
            match linalg::solve(&kmat, std::slice::from_ref(&rhs), rel) {
                Ok(mut cols) => {
                    let mut coeffs = cols.pop().unwrap();
                    coeffs.push(LaurentSeries::one());
                    if let Some(polygon) = certify(&coeffs) {
                        return Ok(OperatorData { coeffs, polygon, candidate: k, relative_precision: rel });
                    }
                    let truncs: Vec<Option<i64>> = coeffs.iter().map(LaurentSeries::trunc_units).collect();
                    if prev_truncs.as_ref() == Some(&truncs) {
                        last_err = Error::InsufficientPrecision(
                            "the input truncation does not determine the Newton polygon".into(),
                        );
                        break;
                    }
                    prev_truncs = Some(truncs);
                }
                Err(linalg::SolveFailure::Singular) => break,
                Err(linalg::SolveFailure::Precision) => {
                    last_err = Error::InsufficientPrecision("cyclic vector system has no certified pivot".into());
                }
                Err(linalg::SolveFailure::Error(e)) => return Err(e),
            }
        }
    }
    Err(last_err)
}

/// Largest slope of the connection at its marked point.
pub fn slope(conn: &FormalConnection) -> Result<Rational> {
    Ok(operator(conn)?.polygon.slope())
}

/// Sum of all slopes counted with multiplicity.
pub fn irregularity(conn: &FormalConnection) -> Result<Rational> {
    Ok(operator(conn)?.polygon.irregularity())
}

/// Irregularity of the same connection in the adjoint representation.
pub fn adjoint_irregularity(conn: &FormalConnection) -> Result<Rational> {
    irregularity(&conn.in_representation(RepKind::Adjoint)?)
}

fn root_of_unity_in(tower: &Tower, q: u32) -> Scalar {
    if tower.root_of_unity_order() == 1 {
        return if q == 2 { Scalar::from_i64(-1) } else { Scalar::one() };
    }
    let mut c = vec![Rational::zero(); tower.degree()];
    c[1] = Rational::one();
    Scalar::from_coeffs(tower, c).expect("power basis of the tower")
}

/// All `y` with `y^q = z` for rational `z ≠ 0`.
fn qth_roots(z: &Rational, q: u32) -> Vec<Scalar> {
    if q == 1 {
        return vec![Scalar::Rat(z.clone())];
    }
    let base = match rational_root(z, q) {
        Some(r) => Scalar::Rat(r),
        None => Scalar::kummer_generator(q, q, z.clone()),
    };
    let tower = match &base {
        Scalar::Rat(_) => Tower::cyclotomic(q),
        Scalar::Alg(_) => base.tower(),
    };
    let zeta = root_of_unity_in(&tower, q);
    let mut out = Vec::with_capacity(q as usize);
    let mut w = Scalar::one();
    for _ in 0..q {
        out.push(base.checked_mul(&w).expect("common tower"));
        w = w.checked_mul(&zeta).expect("common tower");
    }
    out
}

/// `y` with `R(y^q) = 0`, when `R` splits over the rationals and its
/// coefficients are small enough for a rational root search.
fn explicit_roots(r: &[Scalar], q: u32) -> Option<Vec<Scalar>> {
    let c: Vec<Rational> = r.iter().map(|s| s.as_rational().cloned()).collect::<Option<_>>()?;
    let p = Poly::new(c);
    let deg = p.degree()?;
    let zs = if deg == 1 {
        vec![-p.coeff(0)]
    } else {
        if p.integer_coefficients().iter().any(|a| a.bits() > 40) {
            return None;
        }
        let zs = p.rational_roots();
        if zs.len() != deg {
            return None;
        }
        zs
    };
    Some(zs.iter().flat_map(|z| qth_roots(z, q)).collect())
}

fn branch(edge: &Edge, coeffs: &[LaurentSeries], ram: u32) -> Result<ExponentBranch> {
    let q = (&edge.slope * int(ram as i64)).denom().to_u32().expect("small denominator");
    let deg = edge.length() / q as usize;
    let mut r = vec![Scalar::zero(); deg + 1];
    for &i in &edge.on_edge {
        let k = i - edge.start;
        debug_assert_eq!(k % q as usize, 0);
        r[k / q as usize] = coeffs[i].leading_coefficient().expect("point on the edge").clone();
    }
    let lead_inv = r[deg].checked_inv()?;
    let polynomial: Vec<Scalar> = r.iter().map(|c| c.checked_mul(&lead_inv)).collect::<Result<_>>()?;
    let leading_coefficients = explicit_roots(&polynomial, q);
    Ok(ExponentBranch {
        exponent: -edge.slope.clone() - int(1),
        slope: edge.slope.clone(),
        ramification: q,
        polynomial,
        count: edge.length(),
        leading_coefficients,
    })
}

/// Leading exponents of all solutions of positive slope.
pub fn irregular_exponents(conn: &FormalConnection) -> Result<IrregularExponents> {
    let op = operator(conn)?;
    let ram = op.coeffs.iter().map(|f| f.ram() as u64).fold(1u64, |a, b| a.lcm(&b)) as u32;
    let branches = op.polygon.edges.iter().map(|e| branch(e, &op.coeffs, ram)).collect::<Result<_>>()?;
    Ok(IrregularExponents { branches, polygon: op.polygon })
}
