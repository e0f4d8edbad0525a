//! Exact scalars in a tower `Q ⊂ Q(ζ_m) ⊂ Q(ζ_m)(θ)`, `θ^n = a`.
//!
//! Rational values are kept in the [`Scalar::Rat`] fast path; an algebraic
//! representation is only built when a root of unity or a radical is actually
//! requested, and results that land back in `Q` are demoted again.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::field::Field;
use super::matrix::Matrix;
use super::poly::{cyclotomic_polynomial, euler_phi};
use super::{fmt_rational, int, rational_root, Rational};
use crate::error::{Error, Result};

#[derive(Debug)]
struct TowerData {
    /// Order of the adjoined root of unity; 1 when none.
    m: u32,
    phi: usize,
    /// `Φ_m`, ascending, monic of degree `phi`.
    cyclotomic: Vec<Rational>,
    /// `θ^n = a`.
    radical: Option<(u32, Rational)>,
}

/// An extension of `Q` of the form `Q(ζ_m)(a^{1/n})` with tracked minimal polynomials.
#[derive(Clone)]
pub struct Tower(Arc<TowerData>);

impl Tower {
    /// `Q(ζ_m)(a^{1/n})`; pass `m = 1` for no root of unity and `n = 1` for no radical.
    pub fn new(m: u32, radical: Option<(u32, Rational)>) -> Self {
        assert!(m >= 1, "root of unity order must be positive");
        // Q(ζ_2) = Q
        let m = if m == 2 { 1 } else { m };
        let radical = radical.filter(|(n, _)| *n > 1);
        if let Some((_, a)) = &radical {
            assert!(!a.is_zero(), "radicand must be nonzero");
        }
        let phi = euler_phi(m) as usize;
        let cyclotomic = cyclotomic_polynomial(m).into_iter().map(int).collect();
        Tower(Arc::new(TowerData { m, phi, cyclotomic, radical }))
    }

    pub fn rationals() -> Self {
        Self::new(1, None)
    }

    pub fn cyclotomic(m: u32) -> Self {
        Self::new(m, None)
    }

    pub fn radical(n: u32, a: Rational) -> Self {
        Self::new(1, Some((n, a)))
    }

    pub fn root_of_unity_order(&self) -> u32 {
        self.0.m
    }

    pub fn radical_data(&self) -> Option<&(u32, Rational)> {
        self.0.radical.as_ref()
    }

    fn n(&self) -> usize {
        self.0.radical.as_ref().map_or(1, |(n, _)| *n as usize)
    }

    /// Dimension over `Q` of the power basis `θ^j ζ^i`.
    pub fn degree(&self) -> usize {
        self.0.phi * self.n()
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    /// Minimal polynomial of the adjoined root of unity.
    pub fn cyclotomic_polynomial(&self) -> &[Rational] {
        &self.0.cyclotomic
    }

    /// Whether the power basis ring is certified to be a field.
    ///
    /// Uses Kummer theory for `θ^n − a` over `Q(ζ_m)`; only the cases needed
    /// here (`a` not a `p`-th power in `Q` for odd `p | n`, square classes via
    /// conductors of quadratic subfields, `4 | n` excluded from `−4Q^4`) are
    /// decided, anything else returns `false`.
    pub fn is_field(&self) -> bool {
        let Some((n, a)) = &self.0.radical else {
            return true;
        };
        let n = *n;
        let m = self.0.m;
        for p in prime_factors(n) {
            if p == 2 {
                if rational_root(a, 2).is_some() {
                    return false;
                }
                if let Some(d) = squarefree_kernel(a) {
                    let conductor = if d.rem_euclid(4) == 1 { d.abs() } else { 4 * d.abs() };
                    let full = if m % 2 == 1 { 2 * m as i64 } else { m as i64 };
                    if full % conductor == 0 {
                        return false;
                    }
                } else {
                    return false;
                }
            } else if rational_root(a, p).is_some() {
                return false;
            }
        }
        if n % 4 == 0 {
            // a = -4 b^4 makes x^4 - a reducible over Q
            let b4 = -a.clone() / int(4);
            if rational_root(&b4, 4).is_some() {
                return false;
            }
        }
        // Q(ζ_m) meets Q(a^{1/n}) non-trivially only through square roots for
        // the radicands used here; the conductor test above covers that case.
        true
    }

    fn name(&self) -> String {
        let mut s = String::from("Q");
        if self.0.m > 1 {
            s.push_str(&format!("(ζ{})", self.0.m));
        }
        if let Some((n, a)) = &self.0.radical {
            s.push_str(&format!("({}^(1/{}))", fmt_rational(a), n));
        }
        s
    }
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Squarefree integer `d` with `a ∈ d·Q^2`, when it fits in an `i64`.
fn squarefree_kernel(a: &Rational) -> Option<i64> {
    use num_traits::ToPrimitive;
    let v = (a.numer() * a.denom()).to_i64()?;
    let sign = v.signum();
    let mut n = v.unsigned_abs();
    let mut d: i64 = 1;
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e % 2 == 1 {
            d *= p as i64;
        }
        p += 1;
    }
    d *= n as i64;
    Some(sign * d)
}

impl PartialEq for Tower {
    fn eq(&self, other: &Self) -> bool {
        self.0.m == other.0.m && self.0.radical == other.0.radical
    }
}

impl Eq for Tower {}

impl Hash for Tower {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.m.hash(state);
        self.0.radical.hash(state);
    }
}

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Element of a non-trivial tower in the power basis `θ^j ζ^i`
/// (index `j·φ(m) + i`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgebraicElement {
    tower: Tower,
    coeffs: Vec<Rational>,
}

/// An exact scalar.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(Rational),
    Alg(Box<AlgebraicElement>),
}

impl Scalar {
    pub fn rational(q: Rational) -> Self {
        Scalar::Rat(q)
    }

    pub fn from_i64(n: i64) -> Self {
        Scalar::Rat(int(n))
    }

    /// Element of `tower` with the given power-basis coordinates.
    pub fn from_coeffs(tower: &Tower, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != tower.degree() {
            return Err(Error::DimensionMismatch(format!(
                "tower {} has degree {}, got {} coefficients",
                tower,
                tower.degree(),
                coeffs.len()
            )));
        }
        Ok(Self::normalized(tower.clone(), coeffs))
    }

    fn normalized(tower: Tower, coeffs: Vec<Rational>) -> Self {
        if coeffs.iter().skip(1).all(Zero::is_zero) {
            Scalar::Rat(coeffs.into_iter().next().unwrap_or_else(Rational::zero))
        } else {
            Scalar::Alg(Box::new(AlgebraicElement { tower, coeffs }))
        }
    }

    /// The primitive root of unity `ζ_m = e^{2πi/m}`.
    pub fn root_of_unity(m: u32) -> Self {
        let tower = Tower::cyclotomic(m);
        match tower.root_of_unity_order() {
            1 if m == 2 => Scalar::from_i64(-1),
            1 => Scalar::one(),
            _ => {
                let mut c = vec![Rational::zero(); tower.degree()];
                c[1] = Rational::one();
                Self::normalized(tower, c)
            }
        }
    }

    /// `a^{1/n}` (the generator `θ` of `Q(θ)`, `θ^n = a`), simplified to a
    /// rational when `a` is a perfect `n`-th power.
    pub fn radical(n: u32, a: Rational) -> Self {
        Self::kummer_generator(1, n, a)
    }

    /// The generator `θ` of `Q(ζ_m)(θ)`, `θ^n = a`.
    pub fn kummer_generator(m: u32, n: u32, a: Rational) -> Self {
        if let Some(w) = rational_root(&a, n) {
            return Scalar::Rat(w);
        }
        let tower = Tower::new(m, Some((n, a)));
        let mut c = vec![Rational::zero(); tower.degree()];
        c[tower.0.phi] = Rational::one();
        Self::normalized(tower, c)
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rat(q) => Some(q),
            Scalar::Alg(_) => None,
        }
    }

    pub fn tower(&self) -> Tower {
        match self {
            Scalar::Rat(_) => Tower::rationals(),
            Scalar::Alg(a) => a.tower.clone(),
        }
    }

    fn lift(&self, tower: &Tower) -> Vec<Rational> {
        match self {
            Scalar::Rat(q) => {
                let mut c = vec![Rational::zero(); tower.degree()];
                c[0] = q.clone();
                c
            }
            Scalar::Alg(a) => {
                debug_assert!(a.tower == *tower);
                a.coeffs.clone()
            }
        }
    }

    /// The common tower of two scalars, or a mismatch error.
    pub fn join_towers(a: &Tower, b: &Tower) -> Result<Tower> {
        if a.is_rational() {
            Ok(b.clone())
        } else if b.is_rational() || a == b {
            Ok(a.clone())
        } else {
            Err(Error::TowerMismatch(a.to_string(), b.to_string()))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Ok(Scalar::Rat(a + b)),
            _ => {
                let t = Self::join_towers(&self.tower(), &other.tower())?;
                let a = self.lift(&t);
                let b = other.lift(&t);
                Ok(Self::normalized(t, a.into_iter().zip(b).map(|(x, y)| x + y).collect()))
            }
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Ok(Scalar::Rat(a * b)),
            (Scalar::Rat(q), Scalar::Alg(x)) | (Scalar::Alg(x), Scalar::Rat(q)) => Ok(Self::normalized(
                x.tower.clone(),
                x.coeffs.iter().map(|c| c * q).collect(),
            )),
            (Scalar::Alg(x), Scalar::Alg(y)) => {
                let t = Self::join_towers(&x.tower, &y.tower)?;
                Ok(Self::normalized(t.clone(), tower_mul(&t, &x.coeffs, &y.coeffs)))
            }
        }
    }

    pub fn checked_inv(&self) -> Result<Self> {
        match self {
            Scalar::Rat(q) => {
                if q.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Scalar::Rat(q.recip()))
                }
            }
            Scalar::Alg(x) => {
                let t = &x.tower;
                let d = t.degree();
                // columns: x · basis_k
                let mut cols = Vec::with_capacity(d);
                for k in 0..d {
                    let mut e = vec![Rational::zero(); d];
                    e[k] = Rational::one();
                    cols.push(tower_mul(t, &x.coeffs, &e));
                }
                let m = Matrix::from_fn(d, d, |i, j| cols[j][i].clone());
                let mut rhs = vec![Rational::zero(); d];
                rhs[0] = Rational::one();
                let sol = m.solve(&rhs).ok_or_else(|| Error::NotInvertible(t.to_string()))?;
                if m.rank() < d {
                    return Err(Error::NotInvertible(t.to_string()));
                }
                Ok(Self::normalized(t.clone(), sol))
            }
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..k {
            acc = acc * self;
        }
        acc
    }

    /// Integer power, negative exponents invert.
    pub fn powi(&self, k: i64) -> Result<Self> {
        if k >= 0 {
            Ok(self.pow(k as u32))
        } else {
            Ok(self.checked_inv()?.pow((-k) as u32))
        }
    }

    /// Power-basis coordinates in the scalar's own tower.
    pub fn coeffs(&self) -> Vec<Rational> {
        self.lift(&self.tower())
    }
}

/// Product in the power basis with reduction modulo `Φ_m` and `θ^n − a`.
fn tower_mul(t: &Tower, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let p = t.0.phi;
    let n = t.n();
    let w = 2 * p - 1;
    let mut grid = vec![Rational::zero(); (2 * n - 1) * w];
    for (ia, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let (ja, ka) = (ia / p, ia % p);
        for (ib, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let (jb, kb) = (ib / p, ib % p);
            grid[(ja + jb) * w + ka + kb] += x * y;
        }
    }
    let phi = &t.0.cyclotomic;
    for row in 0..2 * n - 1 {
        let base = row * w;
        for k in (p..w).rev() {
            let c = std::mem::take(&mut grid[base + k]);
            if c.is_zero() {
                continue;
            }
            // ζ^k = ζ^{k-p} · (ζ^p) and ζ^p = -Σ_{s<p} Φ_s ζ^s
            for (s, coef) in phi.iter().take(p).enumerate() {
                if !coef.is_zero() {
                    grid[base + k - p + s] -= &c * coef;
                }
            }
        }
    }
    if let Some((_, radicand)) = &t.0.radical {
        for row in (n..2 * n - 1).rev() {
            for k in 0..p {
                let c = std::mem::take(&mut grid[row * w + k]);
                if !c.is_zero() {
                    grid[(row - n) * w + k] += c * radicand;
                }
            }
        }
    }
    let mut out = Vec::with_capacity(p * n);
    for row in 0..n {
        out.extend_from_slice(&grid[row * w..row * w + p]);
    }
    out
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::Rat(Rational::zero())
    }

    fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rat(q) if q.is_zero())
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::Rat(Rational::one())
    }
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Scalar::Rat(q)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_i64(n)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(q) => Scalar::Rat(-q),
            Scalar::Alg(mut x) => {
                for c in &mut x.coeffs {
                    *c = -std::mem::take(c);
                }
                Scalar::Alg(x)
            }
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

// Mixed-tower arithmetic through the operators is a programming error; the
// `checked_*` methods report it as a recoverable `TowerMismatch` instead.
macro_rules! scalar_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                let f: fn(&Scalar, &Scalar) -> Result<Scalar> = $body;
                f(&self, rhs).expect("scalar tower mismatch")
            }
        }
        impl<'a, 'b> $tr<&'b Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'b Scalar) -> Scalar {
                let f: fn(&Scalar, &Scalar) -> Result<Scalar> = $body;
                f(self, rhs).expect("scalar tower mismatch")
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                let f: fn(&Scalar, &Scalar) -> Result<Scalar> = $body;
                f(&self, &rhs).expect("scalar tower mismatch")
            }
        }
    };
}

scalar_binop!(Add, add, |a, b| a.checked_add(b));
scalar_binop!(Sub, sub, |a, b| a.checked_add(&-b));
scalar_binop!(Mul, mul, |a, b| a.checked_mul(b));
scalar_binop!(Div, div, |a, b| a.checked_mul(&b.checked_inv()?));

impl Field for Scalar {
    fn try_inv(&self) -> Result<Self> {
        self.checked_inv()
    }

    fn from_rational(q: Rational) -> Self {
        Scalar::Rat(q)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(q) => f.write_str(&fmt_rational(q)),
            Scalar::Alg(x) => {
                let p = x.tower.0.phi;
                let mut parts = Vec::new();
                for (idx, c) in x.coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let (j, i) = (idx / p, idx % p);
                    let mut gens = Vec::new();
                    if i > 0 {
                        gens.push(format!("ζ{}^{}", x.tower.0.m, i));
                    }
                    if j > 0 {
                        let (n, a) = x.tower.0.radical.as_ref().unwrap();
                        let g = if *n == 2 { format!("√{}", fmt_rational(a)) } else { format!("{}^(1/{})", fmt_rational(a), n) };
                        gens.push(if j == 1 { g } else { format!("({g})^{j}") });
                    }
                    let term = if gens.is_empty() {
                        fmt_rational(c)
                    } else if c.is_one() {
                        gens.join("·")
                    } else if c == &-Rational::one() {
                        format!("-{}", gens.join("·"))
                    } else {
                        format!("{}·{}", fmt_rational(c), gens.join("·"))
                    };
                    parts.push(term);
                }
                let s = parts.join(" + ").replace("+ -", "- ");
                f.write_str(&s)
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Scalar {
    /// `true` when the scalar is a negative rational.
    pub fn is_negative_rational(&self) -> bool {
        matches!(self, Scalar::Rat(q) if q.is_negative())
    }
}
