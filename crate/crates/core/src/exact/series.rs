//! Truncation-aware formal Laurent and Puiseux series.
//!
//! A series stores exponents as integers `k` meaning `t^{k/ram}`. A known
//! truncation `trunc = K` means the series is only known modulo `O(t^{K/ram})`;
//! `None` means the stored terms are the whole series (a Laurent polynomial).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::field::Field;
use super::{gcd_u64, int, lcm_u64, Rational, Scalar};
use crate::error::{Error, Result};

/// Default working truncation (in integer powers of the parameter).
pub const DEFAULT_TRUNC: i64 = 32;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentSeries {
    ram: u32,
    terms: Vec<(i64, Scalar)>,
    trunc: Option<i64>,
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl LaurentSeries {
    /// Builds a series from raw terms in units of `1/ram`; duplicate exponents
    /// are summed, zeros and terms at or above `trunc` dropped.
    pub fn from_terms(ram: u32, terms: impl IntoIterator<Item = (i64, Scalar)>, trunc: Option<i64>) -> Self {
        assert!(ram >= 1, "ramification index must be positive");
        let mut v: Vec<(i64, Scalar)> = terms.into_iter().collect();
        v.sort_by_key(|(e, _)| *e);
        let mut merged: Vec<(i64, Scalar)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            if trunc.is_some_and(|k| e >= k) {
                continue;
            }
            match merged.last_mut() {
                Some((le, lc)) if *le == e => *lc = &*lc + &c,
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        let mut s = LaurentSeries { ram, terms: merged, trunc };
        s.normalize_ram();
        s
    }

    /// The exact series `c·t^k`.
    pub fn monomial(c: Scalar, k: i64) -> Self {
        Self::from_terms(1, [(k, c)], None)
    }

    /// The exact series `c·t^e` for a rational exponent `e`.
    pub fn term(c: Scalar, e: &Rational) -> Self {
        let ram = u32::try_from(e.denom().clone()).expect("exponent denominator out of range");
        let k = i64::try_from(e.numer().clone()).expect("exponent numerator out of range");
        Self::from_terms(ram, [(k, c)], None)
    }

    pub fn constant(c: Scalar) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::constant(Scalar::Rat(q))
    }

    /// `O(t^k)` with nothing known below it.
    pub fn big_o(k: i64) -> Self {
        LaurentSeries { ram: 1, terms: Vec::new(), trunc: Some(k) }
    }

    /// Exact Laurent polynomial from `(exponent, rational coefficient)` pairs.
    pub fn laurent_polynomial(terms: &[(i64, Rational)]) -> Self {
        Self::from_terms(1, terms.iter().map(|(e, c)| (*e, Scalar::Rat(c.clone()))), None)
    }

    fn normalize_ram(&mut self) {
        if self.ram == 1 {
            return;
        }
        let mut g = self.ram as u64;
        for (e, _) in &self.terms {
            g = gcd_u64(g, e.unsigned_abs());
        }
        if let Some(k) = self.trunc {
            g = gcd_u64(g, k.unsigned_abs());
        }
        if g > 1 {
            let g64 = g as i64;
            for (e, _) in &mut self.terms {
                *e /= g64;
            }
            if let Some(k) = &mut self.trunc {
                *k /= g64;
            }
            self.ram /= g as u32;
        }
    }

    /// The same series expressed with ramification `r`, a multiple of the current one.
    fn with_ram(&self, r: u32) -> Self {
        assert!(r.is_multiple_of(self.ram));
        let f = (r / self.ram) as i64;
        LaurentSeries {
            ram: r,
            terms: self.terms.iter().map(|(e, c)| (e * f, c.clone())).collect(),
            trunc: self.trunc.map(|k| k * f),
        }
    }

    fn align(a: &Self, b: &Self) -> (Self, Self) {
        if a.ram == b.ram {
            return (a.clone(), b.clone());
        }
        let r = lcm_u64(a.ram as u64, b.ram as u64) as u32;
        (a.with_ram(r), b.with_ram(r))
    }

    pub fn ram(&self) -> u32 {
        self.ram
    }

    /// Stored terms, exponents in units of `1/ram`.
    pub fn terms(&self) -> &[(i64, Scalar)] {
        &self.terms
    }

    /// Truncation in units of `1/ram`.
    pub fn trunc_units(&self) -> Option<i64> {
        self.trunc
    }

    /// Truncation order as an exponent of `t`.
    pub fn trunc(&self) -> Option<Rational> {
        self.trunc.map(|k| Rational::new(k.into(), (self.ram as i64).into()))
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    /// `true` when no nonzero coefficient is known.
    pub fn has_no_terms(&self) -> bool {
        self.terms.is_empty()
    }

    /// Valuation in units of `1/ram`, if a nonzero coefficient is known.
    pub fn valuation_units(&self) -> Option<i64> {
        self.terms.first().map(|(e, _)| *e)
    }

    pub fn valuation(&self) -> Option<Rational> {
        self.valuation_units().map(|k| Rational::new(k.into(), (self.ram as i64).into()))
    }

    /// Lower bound for the valuation: the valuation if known, else the truncation.
    /// `None` for the exact zero series.
    pub fn valuation_bound_units(&self) -> Option<i64> {
        self.valuation_units().or(self.trunc)
    }

    pub fn leading_coefficient(&self) -> Option<&Scalar> {
        self.terms.first().map(|(_, c)| c)
    }

    /// Largest stored exponent (units), if any.
    pub fn max_exponent_units(&self) -> Option<i64> {
        self.terms.last().map(|(e, _)| *e)
    }

    /// Coefficient of `t^e`; `None` when `e` is at or beyond the truncation.
    pub fn coeff(&self, e: &Rational) -> Option<Scalar> {
        let scaled = e * Rational::from_integer((self.ram as i64).into());
        if !scaled.is_integer() {
            return if self.trunc().is_some_and(|k| e >= &k) { None } else { Some(Scalar::zero()) };
        }
        let k = i64::try_from(scaled.to_integer()).ok()?;
        self.coeff_units(k)
    }

    /// Coefficient of `t^k` for an integer `k`.
    pub fn coeff_int(&self, k: i64) -> Option<Scalar> {
        self.coeff(&int(k))
    }

    pub fn coeff_units(&self, k: i64) -> Option<Scalar> {
        if self.trunc.is_some_and(|t| k >= t) {
            return None;
        }
        Some(
            self.terms
                .binary_search_by_key(&k, |(e, _)| *e)
                .map(|i| self.terms[i].1.clone())
                .unwrap_or_else(|_| Scalar::zero()),
        )
    }

    /// Drops everything at or above `t^{k/ram}` (units of the current ramification).
    pub fn truncate_units(&self, k: i64) -> Self {
        let cut = self.trunc.map_or(k, |t| t.min(k));
        let mut s = LaurentSeries {
            ram: self.ram,
            terms: self.terms.iter().filter(|(e, _)| *e < cut).cloned().collect(),
            trunc: Some(cut),
        };
        s.normalize_ram();
        s
    }

    /// Truncates modulo `O(t^k)`.
    pub fn truncate(&self, k: i64) -> Self {
        self.truncate_units(k * self.ram as i64)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let (a, b) = Self::align(self, other);
        let trunc = min_opt(a.trunc, b.trunc);
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < a.terms.len() || j < b.terms.len() {
            let ea = a.terms.get(i).map(|t| t.0);
            let eb = b.terms.get(j).map(|t| t.0);
            let (e, c) = match (ea, eb) {
                (Some(x), Some(y)) if x == y => {
                    let c = a.terms[i].1.checked_add(&b.terms[j].1)?;
                    i += 1;
                    j += 1;
                    (x, c)
                }
                (Some(x), Some(y)) if x < y => {
                    i += 1;
                    (x, a.terms[i - 1].1.clone())
                }
                (Some(x), None) => {
                    i += 1;
                    (x, a.terms[i - 1].1.clone())
                }
                (_, Some(y)) => {
                    j += 1;
                    (y, b.terms[j - 1].1.clone())
                }
                (None, None) => unreachable!(),
            };
            if trunc.is_some_and(|k| e >= k) {
                break;
            }
            if !c.is_zero() {
                out.push((e, c));
            }
        }
        let mut s = LaurentSeries { ram: a.ram, terms: out, trunc };
        s.normalize_ram();
        Ok(s)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        let (a, b) = Self::align(self, other);
        let low_a = a.valuation_bound_units().unwrap();
        let low_b = b.valuation_bound_units().unwrap();
        let trunc = min_opt(a.trunc.map(|k| k + low_b), b.trunc.map(|k| k + low_a));
        if a.terms.is_empty() || b.terms.is_empty() {
            return Ok(LaurentSeries { ram: 1, terms: Vec::new(), trunc }.renormalized(a.ram));
        }
        let lo = low_a + low_b;
        let mut hi = a.terms.last().unwrap().0 + b.terms.last().unwrap().0 + 1;
        if let Some(k) = trunc {
            hi = hi.min(k);
        }
        if hi <= lo {
            return Ok(LaurentSeries { ram: 1, terms: Vec::new(), trunc }.renormalized(a.ram));
        }
        let mut dense: Vec<Option<Scalar>> = vec![None; (hi - lo) as usize];
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e = ea + eb;
                if e >= hi {
                    break;
                }
                let p = ca.checked_mul(cb)?;
                let slot = &mut dense[(e - lo) as usize];
                *slot = Some(match slot.take() {
                    Some(x) => x.checked_add(&p)?,
                    None => p,
                });
            }
        }
        let terms = dense
            .into_iter()
            .enumerate()
            .filter_map(|(i, c)| c.filter(|c| !c.is_zero()).map(|c| (lo + i as i64, c)))
            .collect();
        let mut s = LaurentSeries { ram: a.ram, terms, trunc };
        s.normalize_ram();
        Ok(s)
    }

    fn renormalized(mut self, ram: u32) -> Self {
        self.ram = ram;
        self.normalize_ram();
        self
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return LaurentSeries { ram: self.ram, terms: Vec::new(), trunc: self.trunc }.renormalized(self.ram);
        }
        LaurentSeries {
            ram: self.ram,
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
            trunc: self.trunc,
        }
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale(&Scalar::Rat(q.clone()))
    }

    /// Multiplies by `t^k` for an integer `k`.
    pub fn shift(&self, k: i64) -> Self {
        let d = k * self.ram as i64;
        LaurentSeries {
            ram: self.ram,
            terms: self.terms.iter().map(|(e, c)| (e + d, c.clone())).collect(),
            trunc: self.trunc.map(|t| t + d),
        }
    }

    /// Multiplies by `t^{k/ram}` in the current units.
    pub fn shift_units(&self, d: i64) -> Self {
        let mut s = LaurentSeries {
            ram: self.ram,
            terms: self.terms.iter().map(|(e, c)| (e + d, c.clone())).collect(),
            trunc: self.trunc.map(|t| t + d),
        };
        s.normalize_ram();
        s
    }

    /// `d/dt`; the truncation drops by one power of `t`.
    pub fn derivative(&self) -> Self {
        let r = self.ram as i64;
        let rq = int(r);
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| *e != 0)
            .map(|(e, c)| (e - r, c * &Scalar::Rat(int(*e) / &rq)))
            .collect();
        let mut s = LaurentSeries { ram: self.ram, terms, trunc: self.trunc.map(|k| k - r) };
        s.normalize_ram();
        s
    }

    /// `θ = t·d/dt`, which preserves the truncation.
    pub fn theta(&self) -> Self {
        let rq = int(self.ram as i64);
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| *e != 0)
            .map(|(e, c)| (*e, c * &Scalar::Rat(int(*e) / &rq)))
            .collect();
        let mut s = LaurentSeries { ram: self.ram, terms, trunc: self.trunc };
        s.normalize_ram();
        s
    }

    /// Multiplicative inverse modulo `O(t^order)`; the result is additionally
    /// capped by the precision the input actually carries.
    pub fn invert(&self, order: i64) -> Result<Self> {
        self.invert_units(order * self.ram as i64)
    }

    /// As [`invert`](Self::invert), with `order` in units of `1/ram`.
    pub fn invert_units(&self, order: i64) -> Result<Self> {
        let Some((v, lc)) = self.terms.first().cloned() else {
            return Err(if self.is_exact() {
                Error::DivisionByZero
            } else {
                Error::InsufficientPrecision(format!("cannot invert {self}: no nonzero coefficient is known"))
            });
        };
        let lc_inv = lc.checked_inv()?;
        if self.is_exact() && self.terms.len() == 1 {
            let mut s = LaurentSeries { ram: self.ram, terms: vec![(-v, lc_inv)], trunc: None };
            s.normalize_ram();
            return Ok(s);
        }
        let mut target = order;
        if let Some(k) = self.trunc {
            target = target.min(k - 2 * v);
        }
        // g = t^{-v} Σ g_j t^j with g_0 = 1/lc and g_k = -(1/lc) Σ_{j≥1} f_{v+j} g_{k-j}
        let n = target + v;
        let mut g: Vec<Scalar> = Vec::with_capacity(n.max(0) as usize);
        let rel: Vec<(i64, Scalar)> = self.terms.iter().skip(1).map(|(e, c)| (e - v, c.clone())).collect();
        for k in 0..n.max(0) {
            if k == 0 {
                g.push(lc_inv.clone());
                continue;
            }
            let mut acc = Scalar::zero();
            for (j, f) in &rel {
                if *j > k {
                    break;
                }
                let gk = &g[(k - j) as usize];
                if !gk.is_zero() {
                    acc = acc.checked_add(&f.checked_mul(gk)?)?;
                }
            }
            g.push(-acc.checked_mul(&lc_inv)?);
        }
        let terms = g.into_iter().enumerate().map(|(k, c)| (k as i64 - v, c));
        Ok(Self::from_terms(self.ram, terms.collect::<Vec<_>>(), Some(target)))
    }

    /// Substitution `t = u^b`.
    pub fn ramified_pullback(&self, b: u32) -> Self {
        assert!(b >= 1, "pullback degree must be positive");
        let b = b as i64;
        let mut s = LaurentSeries {
            ram: self.ram,
            terms: self.terms.iter().map(|(e, c)| (e * b, c.clone())).collect(),
            trunc: self.trunc.map(|k| k * b),
        };
        s.normalize_ram();
        s
    }

    /// Substitution `t = 1/s` of an exact series.
    pub fn invert_variable(&self) -> Result<Self> {
        if !self.is_exact() {
            return Err(Error::InsufficientPrecision(
                "the substitution t = 1/s needs an exact Laurent polynomial".into(),
            ));
        }
        Ok(Self::from_terms(self.ram, self.terms.iter().map(|(e, c)| (-e, c.clone())).collect::<Vec<_>>(), None))
    }

    /// Applies `f` to every coefficient (a ring map on scalars).
    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        Self::from_terms(self.ram, self.terms.iter().map(|(e, c)| (*e, f(c))).collect::<Vec<_>>(), self.trunc)
    }

    /// Agreement modulo the smaller of the two truncations.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.checked_add(&-other).is_ok_and(|d| d.terms.is_empty())
    }

    /// `true` when every coefficient is rational.
    pub fn is_rational(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.as_rational().is_some())
    }
}

impl Zero for LaurentSeries {
    /// The exact zero series.
    fn zero() -> Self {
        LaurentSeries { ram: 1, terms: Vec::new(), trunc: None }
    }

    /// `true` only for the exact zero; `O(t^k)` is not considered zero.
    fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.trunc.is_none()
    }
}

impl One for LaurentSeries {
    fn one() -> Self {
        Self::constant(Scalar::one())
    }
}

impl Neg for LaurentSeries {
    type Output = LaurentSeries;
    fn neg(mut self) -> LaurentSeries {
        for (_, c) in &mut self.terms {
            *c = -std::mem::replace(c, Scalar::zero());
        }
        self
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        -self.clone()
    }
}

macro_rules! series_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a LaurentSeries> for LaurentSeries {
            type Output = LaurentSeries;
            fn $method(self, rhs: &'a LaurentSeries) -> LaurentSeries {
                let f: fn(&LaurentSeries, &LaurentSeries) -> Result<LaurentSeries> = $body;
                f(&self, rhs).expect("series tower mismatch")
            }
        }
        impl<'a, 'b> $tr<&'b LaurentSeries> for &'a LaurentSeries {
            type Output = LaurentSeries;
            fn $method(self, rhs: &'b LaurentSeries) -> LaurentSeries {
                let f: fn(&LaurentSeries, &LaurentSeries) -> Result<LaurentSeries> = $body;
                f(self, rhs).expect("series tower mismatch")
            }
        }
        impl $tr<LaurentSeries> for LaurentSeries {
            type Output = LaurentSeries;
            fn $method(self, rhs: LaurentSeries) -> LaurentSeries {
                let f: fn(&LaurentSeries, &LaurentSeries) -> Result<LaurentSeries> = $body;
                f(&self, &rhs).expect("series tower mismatch")
            }
        }
    };
}

series_binop!(Add, add, |a, b| a.checked_add(b));
series_binop!(Sub, sub, |a, b| a.checked_add(&-b));
series_binop!(Mul, mul, |a, b| a.checked_mul(b));

impl Field for LaurentSeries {
    /// Exact for monomials; otherwise inverted to `DEFAULT_TRUNC` powers past
    /// the inverse's valuation (or the input's own precision, if lower).
    fn try_inv(&self) -> Result<Self> {
        let v = self.valuation_units().unwrap_or(0);
        self.invert_units(-v + DEFAULT_TRUNC * self.ram as i64)
    }

    fn from_rational(q: Rational) -> Self {
        Self::from_rational(q)
    }
}

impl From<Scalar> for LaurentSeries {
    fn from(c: Scalar) -> Self {
        Self::constant(c)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let exp = |k: i64| {
            let q = Rational::new(k.into(), (self.ram as i64).into());
            super::fmt_rational(&q)
        };
        let mut parts: Vec<String> = Vec::new();
        for (e, c) in &self.terms {
            let cs = c.to_string();
            let cs = if matches!(c, Scalar::Alg(_)) { format!("({cs})") } else { cs };
            parts.push(match *e {
                0 => cs,
                _ if self.ram == 1 && *e == 1 => format!("{cs}*t"),
                _ => format!("{cs}*t^{}", exp(*e)),
            });
        }
        if let Some(k) = self.trunc {
            parts.push(format!("O(t^{})", exp(k)));
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" + ").replace("+ -", "- "))
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn lp(terms: &[(i64, i64)]) -> LaurentSeries {
        LaurentSeries::laurent_polynomial(&terms.iter().map(|&(e, c)| (e, int(c))).collect::<Vec<_>>())
    }

    #[test]
    fn cancellation_and_monomials() {
        let a = lp(&[(-1, 1), (0, 1)]);
        let b = lp(&[(-1, -1)]);
        assert_eq!(&a + &b, LaurentSeries::one());
        let t1 = lp(&[(-1, 1)]);
        assert_eq!(&t1 * &t1, lp(&[(-2, 1)]));
    }

    #[test]
    fn geometric_series() {
        let a = lp(&[(0, 1), (1, -1)]).truncate(8);
        let b = LaurentSeries::from_terms(1, (0..8).map(|k| (k, Scalar::one())), Some(8));
        let p = &a * &b;
        assert_eq!(p, LaurentSeries::one().truncate(8));
        assert_eq!(p.trunc(), Some(int(8)));
    }

    #[test]
    fn derivative_rules() {
        assert_eq!(lp(&[(-1, 1)]).derivative(), lp(&[(-2, -1)]));
        assert!(lp(&[(0, 7)]).derivative().is_zero());
        let f = lp(&[(0, 1), (3, 2)]).truncate(5);
        assert_eq!(f.derivative().trunc(), Some(int(4)));
    }

    #[test]
    fn inversion() {
        assert_eq!(lp(&[(1, 1)]).invert(10).unwrap(), lp(&[(-1, 1)]));
        let g = lp(&[(0, 1), (1, -1)]).invert(5).unwrap();
        assert_eq!(g, LaurentSeries::from_terms(1, (0..5).map(|k| (k, Scalar::one())), Some(5)));
        assert!(matches!(
            LaurentSeries::big_o(4).invert(10),
            Err(Error::InsufficientPrecision(_))
        ));
        // precision of a truncated input caps the result: 1/(t + t^2 + O(t^4)) = t^-1 - 1 + t + O(t^2)
        let f = lp(&[(1, 1), (2, 1)]).truncate(4);
        let g = f.invert(100).unwrap();
        assert_eq!(g.trunc(), Some(int(2)));
        assert_eq!(g, LaurentSeries::from_terms(1, [(-1, Scalar::one()), (0, Scalar::from_i64(-1)), (1, Scalar::one())], Some(2)));
    }

    #[test]
    fn puiseux_pullback() {
        let f = lp(&[(-1, 1), (1, 1)]);
        assert_eq!(f.ramified_pullback(3), lp(&[(-3, 1), (3, 1)]));
        let g = LaurentSeries::term(Scalar::one(), &rat(-3, 2));
        assert_eq!(g.ram(), 2);
        assert_eq!(g.ramified_pullback(1), g);
        assert_eq!(g.ramified_pullback(2), lp(&[(-3, 1)]));
        assert_eq!(g.coeff(&rat(-3, 2)), Some(Scalar::one()));
    }

    #[test]
    fn mixed_ramification_normalizes() {
        let a = LaurentSeries::term(Scalar::one(), &rat(1, 2));
        let s = &a * &a;
        assert_eq!(s, lp(&[(1, 1)]));
        assert_eq!(s.ram(), 1);
    }

    #[test]
    fn display() {
        let f = lp(&[(-2, -1), (-1, 3)]).truncate(2);
        assert_eq!(f.to_string(), "-1*t^-2 + 3*t^-1 + O(t^2)");
    }
}
