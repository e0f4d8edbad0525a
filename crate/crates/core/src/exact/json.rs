//! JSON forms of exact values.
//!
//! Rationals are `[num, den]` pairs whose entries are JSON integers when they
//! fit in an `i64` and decimal strings otherwise. A scalar is either a list of
//! rationals (a rational scalar is a one-element list) or, for algebraic
//! values, `{"tower": {...}, "coeffs": [...]}` in the power basis.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{LaurentSeries, Rational, Scalar, Tower};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum IntRepr {
    Small(i64),
    Big(String),
}

impl From<&BigInt> for IntRepr {
    fn from(n: &BigInt) -> Self {
        match n.to_i64() {
            Some(v) => IntRepr::Small(v),
            None => IntRepr::Big(n.to_string()),
        }
    }
}

impl TryFrom<&IntRepr> for BigInt {
    type Error = Error;
    fn try_from(r: &IntRepr) -> Result<BigInt> {
        match r {
            IntRepr::Small(v) => Ok(BigInt::from(*v)),
            IntRepr::Big(s) => s.parse().map_err(|_| Error::Parse(format!("bad integer {s:?}"))),
        }
    }
}

pub type RationalRepr = [IntRepr; 2];

pub fn rational_to_repr(q: &Rational) -> RationalRepr {
    [q.numer().into(), q.denom().into()]
}

pub fn rational_from_repr(r: &RationalRepr) -> Result<Rational> {
    let n = BigInt::try_from(&r[0])?;
    let d = BigInt::try_from(&r[1])?;
    if d.is_zero() {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok(Rational::new(n, d))
}

/// `serialize_with` helpers for rational fields.
pub mod ser {
    use serde::ser::{SerializeSeq, Serializer};

    use super::{rational_to_repr, Rational};

    pub fn rational<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&rational_to_repr(q), s)
    }

    pub fn rational_vec<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for q in v {
            seq.serialize_element(&rational_to_repr(q))?;
        }
        seq.end()
    }

    pub fn rational_vec_vec<S: Serializer>(v: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for row in v {
            let r: Vec<_> = row.iter().map(rational_to_repr).collect();
            seq.serialize_element(&r)?;
        }
        seq.end()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TowerRepr {
    pub root_of_unity: u32,
    pub radical: Option<(u32, RationalRepr)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarRepr {
    Rational(Vec<RationalRepr>),
    Algebraic { tower: TowerRepr, coeffs: Vec<RationalRepr> },
}

impl From<Scalar> for ScalarRepr {
    fn from(s: Scalar) -> Self {
        match &s {
            Scalar::Rat(q) => ScalarRepr::Rational(vec![rational_to_repr(q)]),
            Scalar::Alg(_) => {
                let t = s.tower();
                ScalarRepr::Algebraic {
                    tower: TowerRepr {
                        root_of_unity: t.root_of_unity_order(),
                        radical: t.radical_data().map(|(n, a)| (*n, rational_to_repr(a))),
                    },
                    coeffs: s.coeffs().iter().map(rational_to_repr).collect(),
                }
            }
        }
    }
}

impl TryFrom<ScalarRepr> for Scalar {
    type Error = Error;
    fn try_from(r: ScalarRepr) -> Result<Scalar> {
        match r {
            ScalarRepr::Rational(v) => match v.as_slice() {
                [q] => Ok(Scalar::Rat(rational_from_repr(q)?)),
                _ => Err(Error::Parse("a rational scalar has exactly one coefficient".into())),
            },
            ScalarRepr::Algebraic { tower, coeffs } => {
                let radical = match &tower.radical {
                    Some((n, a)) => {
                        let a = rational_from_repr(a)?;
                        if a.is_zero() || *n == 0 {
                            return Err(Error::Parse("degenerate radical".into()));
                        }
                        Some((*n, a))
                    }
                    None => None,
                };
                if tower.root_of_unity == 0 {
                    return Err(Error::Parse("root of unity order must be positive".into()));
                }
                let t = Tower::new(tower.root_of_unity, radical);
                let c = coeffs.iter().map(rational_from_repr).collect::<Result<Vec<_>>>()?;
                Scalar::from_coeffs(&t, c)
            }
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ScalarRepr::from(self.clone()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ScalarRepr::deserialize(d)?;
        Scalar::try_from(r).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct TermRepr {
    e: RationalRepr,
    c: ScalarRepr,
}

/// `"trunc"` is an integer exponent, a `[num, den]` pair for Puiseux
/// truncations, or `null` for exact series.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum TruncRepr {
    Int(i64),
    Frac(RationalRepr),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct SeriesRepr {
    ram: u32,
    trunc: Option<TruncRepr>,
    terms: Vec<TermRepr>,
}

impl From<&LaurentSeries> for SeriesRepr {
    fn from(f: &LaurentSeries) -> Self {
        let r = f.ram() as i64;
        SeriesRepr {
            ram: f.ram(),
            trunc: f.trunc_units().map(|k| {
                if k % r == 0 {
                    TruncRepr::Int(k / r)
                } else {
                    TruncRepr::Frac(rational_to_repr(&Rational::new(k.into(), r.into())))
                }
            }),
            terms: f
                .terms()
                .iter()
                .map(|(e, c)| TermRepr {
                    e: rational_to_repr(&Rational::new((*e).into(), r.into())),
                    c: c.clone().into(),
                })
                .collect(),
        }
    }
}

fn units(q: &Rational, ram: u32) -> Result<i64> {
    let scaled = q * Rational::from_integer(BigInt::from(ram));
    if !scaled.is_integer() {
        return Err(Error::Parse(format!("exponent {q} is not in (1/{ram})Z")));
    }
    scaled.to_integer().to_i64().ok_or_else(|| Error::Parse("exponent out of range".into()))
}

impl TryFrom<SeriesRepr> for LaurentSeries {
    type Error = Error;
    fn try_from(r: SeriesRepr) -> Result<Self> {
        if r.ram == 0 {
            return Err(Error::Parse("ramification must be positive".into()));
        }
        let trunc = match &r.trunc {
            None => None,
            Some(TruncRepr::Int(k)) => Some(k.checked_mul(r.ram as i64).ok_or_else(|| Error::Parse("trunc out of range".into()))?),
            Some(TruncRepr::Frac(q)) => Some(units(&rational_from_repr(q)?, r.ram)?),
        };
        let mut terms = Vec::with_capacity(r.terms.len());
        for t in r.terms {
            let e = units(&rational_from_repr(&t.e)?, r.ram)?;
            terms.push((e, Scalar::try_from(t.c)?));
        }
        // all scalars must share a tower
        let mut tower = Tower::rationals();
        for (_, c) in &terms {
            tower = Scalar::join_towers(&tower, &c.tower())?;
        }
        Ok(LaurentSeries::from_terms(r.ram, terms, trunc))
    }
}

impl Serialize for LaurentSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SeriesRepr::deserialize(d)?;
        LaurentSeries::try_from(r).map_err(serde::de::Error::custom)
    }
}
