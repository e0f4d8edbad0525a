use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::field::Field;
use super::Rational;

/// Dense univariate polynomial, coefficients in ascending degree, trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(F::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![F::one()] }
    }

    /// `x^k`.
    pub fn monomial(c: F, k: usize) -> Self {
        let mut v = vec![F::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + &other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - &other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + &(a.clone() * b);
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a.clone() * &F::from_rational(Rational::from_integer(BigInt::from(k))))
                .collect(),
        )
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs.iter().rev().fold(F::zero(), |acc, c| acc * x + c)
    }

    /// Divides out the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => {
                let inv = lc.try_inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Euclidean division; panics when `d` is zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = d.leading().unwrap().try_inv().expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        let Some(sd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if sd < dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![F::zero(); sd - dd + 1];
        for k in (dd..=sd).rev() {
            let c = r[k].clone() * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k - dd + j] = r[k - dd + j].clone() - &(c.clone() * dc);
            }
            q[k - dd] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `true` iff the polynomial has no repeated roots over an algebraic closure.
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }
}

impl Poly<Rational> {
    /// All rational roots with multiplicity, by the rational root theorem.
    pub fn rational_roots(&self) -> Vec<Rational> {
        let mut roots = Vec::new();
        if self.is_zero() {
            return roots;
        }
        let mut p = self.clone();
        // roots at zero
        while p.coeff(0).is_zero() && p.degree().unwrap_or(0) > 0 {
            roots.push(Rational::zero());
            p = Self::new(p.coeffs[1..].to_vec());
        }
        loop {
            if p.degree().unwrap_or(0) == 0 {
                break;
            }
            let ints = p.integer_coefficients();
            let a0 = ints[0].abs();
            let an = ints.last().unwrap().abs();
            let mut found = None;
            'outer: for num in divisors(&a0) {
                for den in divisors(&an) {
                    for sign in [1i32, -1] {
                        let cand = Rational::new(num.clone() * BigInt::from(sign), den.clone());
                        if p.eval(&cand).is_zero() {
                            found = Some(cand);
                            break 'outer;
                        }
                    }
                }
            }
            match found {
                Some(r) => {
                    let lin = Self::new(vec![-r.clone(), Rational::one()]);
                    p = p.div_rem(&lin).0;
                    roots.push(r);
                }
                None => break,
            }
        }
        roots.sort();
        roots
    }

    /// Primitive integer multiple with positive leading coefficient.
    pub fn integer_coefficients(&self) -> Vec<BigInt> {
        let l = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let g = if g.is_zero() { BigInt::one() } else { g };
        let sign = if ints.last().is_some_and(|c| c.is_negative()) { -BigInt::one() } else { BigInt::one() };
        ints.into_iter().map(|c| c / &g * &sign).collect()
    }
}

/// Positive divisors of a nonzero integer (trial division; inputs here are small).
fn divisors(n: &BigInt) -> Vec<BigInt> {
    use num_traits::ToPrimitive;
    if n.is_zero() {
        return vec![];
    }
    if let Some(m) = n.to_u64() {
        let mut out = Vec::new();
        let mut d = 1u64;
        while d * d <= m {
            if m % d == 0 {
                out.push(BigInt::from(d));
                if d * d != m {
                    out.push(BigInt::from(m / d));
                }
            }
            d += 1;
        }
        out.sort();
        out
    } else {
        vec![BigInt::one(), n.clone()]
    }
}

/// Integer coefficients of the `m`-th cyclotomic polynomial `Φ_m`, ascending.
pub fn cyclotomic_polynomial(m: u32) -> Vec<i64> {
    assert!(m >= 1);
    let to_q = |v: Vec<i64>| Poly::new(v.into_iter().map(super::int).collect::<Vec<_>>());
    // x^m - 1 divided by Φ_d for proper divisors d
    let mut xm1 = vec![0i64; m as usize + 1];
    xm1[0] = -1;
    xm1[m as usize] = 1;
    let mut p = to_q(xm1);
    for d in 1..m {
        if m.is_multiple_of(d) {
            let phi_d = to_q(cyclotomic_polynomial(d));
            p = p.div_rem(&phi_d).0;
        }
    }
    use num_traits::ToPrimitive;
    p.coeffs().iter().map(|c| c.to_integer().to_i64().unwrap()).collect()
}

pub fn euler_phi(m: u32) -> u32 {
    (1..=m).filter(|k| super::gcd_u64(*k as u64, m as u64) == 1).count() as u32
}
