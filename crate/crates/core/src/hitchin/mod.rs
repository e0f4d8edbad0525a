//! Meromorphic `d`-differentials on the projective line with bounded poles at
//! marked points, and exact rank certificates for the decomposition of the
//! Hitchin base with level structure at `0`, at `∞` and at points `z ∈ G_m`.
//!
//! A section of `ω^d(Σ m_x·x)` is written `h(t)(dt)^d` with `h = P/D`, where
//! `D = Π_{x finite} (t − x)^{m_x}` and `deg P ≤ deg D + m_∞ − 2d`.

mod verify;

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Serialize, Serializer};

pub use verify::{
    verify_direct_sum_decomposition, verify_iota_isomorphism, verify_psi_block_structure, BlockReport,
    DecompositionReport, RankReport,
};

use crate::error::{Error, Result};
use crate::exact::{fmt_rational, int, LaurentSeries, Poly, Rational, Scalar};
use crate::lie::{ChevalleyAlgebra, PrincipalData};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    Finite(Rational),
    Infinity,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(q) => f.write_str(&fmt_rational(q)),
            Point::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A marked point with one pole bound per fundamental degree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarkedPoint {
    pub point: Point,
    pub bounds: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct HitchinLevelSpec {
    alg: Arc<ChevalleyAlgebra>,
    degrees: Vec<usize>,
    points: Vec<MarkedPoint>,
}

impl HitchinLevelSpec {
    pub fn new(alg: &Arc<ChevalleyAlgebra>, points: Vec<MarkedPoint>) -> Result<Self> {
        let degrees = PrincipalData::new(alg).degrees;
        Self::with_degrees(alg, degrees, points)
    }

    fn with_degrees(alg: &Arc<ChevalleyAlgebra>, degrees: Vec<usize>, points: Vec<MarkedPoint>) -> Result<Self> {
        for (k, p) in points.iter().enumerate() {
            if p.bounds.len() != degrees.len() {
                return Err(Error::DimensionMismatch(format!("point {} has {} bounds", p.point, p.bounds.len())));
            }
            if p.bounds.iter().any(|&b| b < 0) {
                return Err(Error::Invalid(format!("negative pole bound at {}", p.point)));
            }
            if points[..k].iter().any(|q| q.point == p.point) {
                return Err(Error::InvalidPoint(format!("{} is marked twice", p.point)));
            }
        }
        Ok(HitchinLevelSpec { alg: alg.clone(), degrees, points })
    }

    pub fn algebra(&self) -> &Arc<ChevalleyAlgebra> {
        &self.alg
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn points(&self) -> &[MarkedPoint] {
        &self.points
    }

    fn bound_at(&self, p: &Point, i: usize) -> i64 {
        self.points.iter().find(|m| &m.point == p).map_or(0, |m| m.bounds[i])
    }

    /// `D = Π (t − x)^{m_x}` over the finite marked points.
    fn denominator(&self, i: usize) -> Poly<Rational> {
        let mut d = Poly::one();
        for m in &self.points {
            if let Point::Finite(x) = &m.point {
                let lin = Poly::new(vec![-x.clone(), int(1)]);
                for _ in 0..m.bounds[i] {
                    d = d.mul(&lin);
                }
            }
        }
        d
    }

    /// Largest allowed `deg P`, possibly negative (then the space is zero).
    fn numerator_bound(&self, i: usize) -> i64 {
        let finite: i64 = self
            .points
            .iter()
            .filter(|m| m.point != Point::Infinity)
            .map(|m| m.bounds[i])
            .sum();
        finite + self.bound_at(&Point::Infinity, i) - 2 * self.degrees[i] as i64
    }
}

/// `h(t)(dt)^d` with `h = num/den`.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferentialSection {
    pub degree: usize,
    pub num: Poly<Rational>,
    pub den: Poly<Rational>,
}

fn taylor_shift(p: &Poly<Rational>, z: &Rational) -> Poly<Rational> {
    let lin = Poly::new(vec![z.clone(), int(1)]);
    p.coeffs().iter().rev().fold(Poly::zero(), |acc, c| acc.mul(&lin).add(&Poly::new(vec![c.clone()])))
}

fn as_series(p: &Poly<Rational>) -> LaurentSeries {
    let terms: Vec<(i64, Rational)> = p.coeffs().iter().enumerate().map(|(k, c)| (k as i64, c.clone())).collect();
    LaurentSeries::laurent_polynomial(&terms)
}

impl DifferentialSection {
    /// The coefficient of `(du)^d` in the local coordinate `u = t − x`, or
    /// `s = 1/t` at `∞` (where `(dt)^d = (−1)^d s^{−2d}(ds)^d`), modulo `O(u^order)`.
    pub fn expansion_at(&self, p: &Point, order: i64) -> Result<LaurentSeries> {
        if self.num.is_zero() {
            return Ok(LaurentSeries::zero());
        }
        match p {
            Point::Finite(z) => {
                let num = as_series(&taylor_shift(&self.num, z));
                let den = as_series(&taylor_shift(&self.den, z));
                Ok(num.checked_mul(&den.invert(order)?)?.truncate(order))
            }
            Point::Infinity => {
                let d = self.degree as i64;
                let num = as_series(&self.num).invert_variable()?;
                let den = as_series(&self.den).invert_variable()?;
                let extra = self.num.degree().unwrap() as i64 + 2 * d;
                let sign = if d % 2 == 0 { 1 } else { -1 };
                let twist = LaurentSeries::monomial(Scalar::from_i64(sign), -2 * d);
                Ok(num.checked_mul(&den.invert(order + extra)?)?.checked_mul(&twist)?.truncate(order))
            }
        }
    }

    /// Pole order of the differential at `p` (zero if regular).
    pub fn pole_order_at(&self, p: &Point) -> Result<i64> {
        let f = self.expansion_at(p, 1)?;
        Ok(f.valuation_units().map_or(0, |v| (-v).max(0)))
    }
}

/// A basis of `Γ(P¹, ω^{d_i}(Σ m_x·x))`.
#[derive(Clone, Debug)]
pub struct SectionSpace {
    pub index: usize,
    pub degree: usize,
    pub basis: Vec<DifferentialSection>,
}

impl SectionSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Riemann–Roch on `P¹` with the explicit basis `t^k/D`, `0 ≤ k ≤ deg D + m_∞ − 2d`.
pub fn section_space(spec: &HitchinLevelSpec, i: usize) -> SectionSpace {
    let den = spec.denominator(i);
    let n = spec.numerator_bound(i);
    let basis = (0..=n)
        .map(|k| DifferentialSection { degree: spec.degrees[i], num: Poly::monomial(int(1), k as usize), den: den.clone() })
        .collect();
    SectionSpace { index: i, degree: spec.degrees[i], basis }
}

pub fn section_space_dim(spec: &HitchinLevelSpec, i: usize) -> usize {
    (spec.numerator_bound(i) + 1).max(0) as usize
}

/// `Σ_i dim Γ(ω^{d_i}(…))`.
pub fn total_dim(spec: &HitchinLevelSpec) -> usize {
    (0..spec.degrees.len()).map(|i| section_space_dim(spec, i)).sum()
}

fn spec_from(alg: &Arc<ChevalleyAlgebra>, zero: impl Fn(usize) -> i64, zs: &[(Rational, Vec<i64>)], inf: Vec<i64>) -> Result<HitchinLevelSpec> {
    let degrees = PrincipalData::new(alg).degrees;
    let mut points = vec![MarkedPoint { point: Point::Finite(int(0)), bounds: degrees.iter().map(|&d| zero(d)).collect() }];
    for (z, b) in zs {
        if z.is_zero() {
            return Err(Error::InvalidPoint("z must lie in G_m, away from 0".into()));
        }
        points.push(MarkedPoint { point: Point::Finite(z.clone()), bounds: b.clone() });
    }
    points.push(MarkedPoint { point: Point::Infinity, bounds: inf });
    HitchinLevelSpec::with_degrees(alg, degrees, points)
}

fn infinity_bounds(degrees: &[usize], top_extra: bool) -> Vec<i64> {
    let mut b: Vec<i64> = degrees.iter().map(|&d| d as i64).collect();
    if top_extra {
        *b.last_mut().unwrap() += 1;
    }
    b
}

/// `Hit_𝒢(P¹)`: bounds `d_i − 1` at `0`; `d_i` at `∞` for `i < ℓ` and `d_ℓ + 1` for `i = ℓ`.
pub fn global_spec(alg: &Arc<ChevalleyAlgebra>) -> Result<HitchinLevelSpec> {
    let degrees = PrincipalData::new(alg).degrees;
    spec_from(alg, |d| d as i64 - 1, &[], infinity_bounds(&degrees, true))
}

/// `Hit^RS_𝒢(P¹ − {z_k})`: as [`global_spec`] plus pole bound `d_i` at each `z_k`.
pub fn rs_spec(alg: &Arc<ChevalleyAlgebra>, zs: &[Rational]) -> Result<HitchinLevelSpec> {
    let degrees = PrincipalData::new(alg).degrees;
    let at_z: Vec<i64> = degrees.iter().map(|&d| d as i64).collect();
    let zs: Vec<_> = zs.iter().map(|z| (z.clone(), at_z.clone())).collect();
    spec_from(alg, |d| d as i64 - 1, &zs, infinity_bounds(&degrees, true))
}

/// `Hit^RS_𝒢(P¹ − {z_k})′`: bounds `d_i − 1` at `0` and `d_i` at each `z_k` and at `∞`.
pub fn prime_spec(alg: &Arc<ChevalleyAlgebra>, zs: &[Rational]) -> Result<HitchinLevelSpec> {
    let degrees = PrincipalData::new(alg).degrees;
    let at_z: Vec<i64> = degrees.iter().map(|&d| d as i64).collect();
    let zs: Vec<_> = zs.iter().map(|z| (z.clone(), at_z.clone())).collect();
    spec_from(alg, |d| d as i64 - 1, &zs, infinity_bounds(&degrees, false))
}
