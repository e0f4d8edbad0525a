//! Opers in canonical form `d + (p₋₁ + Σ v_i(t) p_i) dt`, reduction of a
//! transversal connection to that form, the slope formula and membership in
//! the local oper spaces.

mod canonical;
mod membership;

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use canonical::{canonicalize, canonicalize_form};
pub use membership::{membership, pfaffian, residue_class, residue_element, OperSpaceSpec, ResidueClass};

use crate::connection::{Coord, FormalConnection, LieForm};
use crate::error::{Error, Result};
use crate::exact::{int, LaurentSeries, Rational, Scalar};
use crate::lie::{self, ChevalleyAlgebra, PrincipalData, Representation};

#[derive(Clone, Debug)]
pub struct OperForm {
    alg: Arc<ChevalleyAlgebra>,
    v: Vec<LaurentSeries>,
    coord: Coord,
}

impl PartialEq for OperForm {
    fn eq(&self, other: &Self) -> bool {
        self.alg.name() == other.alg.name() && self.coord == other.coord && self.v == other.v
    }
}

impl OperForm {
    pub fn new(alg: &Arc<ChevalleyAlgebra>, v: Vec<LaurentSeries>, coord: Coord) -> Result<Self> {
        if v.len() != alg.rank() {
            return Err(Error::DimensionMismatch(format!("{} coefficients for rank {}", v.len(), alg.rank())));
        }
        if coord == Coord::Global && v.iter().any(|f| !f.is_exact()) {
            return Err(Error::Invalid("a global oper needs Laurent polynomial coefficients".into()));
        }
        Ok(OperForm { alg: alg.clone(), v, coord })
    }

    /// `v ≡ 0`, the oper `d + p₋₁ dt`.
    pub fn zero(alg: &Arc<ChevalleyAlgebra>, coord: Coord) -> Self {
        OperForm { alg: alg.clone(), v: vec![LaurentSeries::zero(); alg.rank()], coord }
    }

    pub fn algebra(&self) -> &Arc<ChevalleyAlgebra> {
        &self.alg
    }

    pub fn v(&self) -> &[LaurentSeries] {
        &self.v
    }

    pub fn coord(&self) -> Coord {
        self.coord
    }

    pub fn rank(&self) -> usize {
        self.v.len()
    }

    /// Fundamental degrees `d_1 ≤ … ≤ d_ℓ`.
    pub fn degrees(&self) -> Vec<usize> {
        PrincipalData::new(&self.alg).degrees
    }

    pub fn is_exact(&self) -> bool {
        self.v.iter().all(LaurentSeries::is_exact)
    }

    /// `v_{ij}`, the coefficient of `t^{−j−1}` in `v_i`; `None` past the truncation.
    pub fn coefficient(&self, i: usize, j: i64) -> Option<Scalar> {
        self.v[i].coeff_int(-j - 1)
    }

    /// `p₋₁ + Σ v_i p_i` as a `g`-valued series.
    pub fn lie_form(&self) -> LieForm {
        let pd = PrincipalData::new(&self.alg);
        let mut form = LieForm::constant(&self.alg, &pd.p_minus1);
        for (p, f) in pd.kostant_basis.iter().zip(&self.v) {
            if f.is_zero() {
                continue;
            }
            let term = LieForm::scaled(&self.alg, p, f);
            form = form.add(&term).expect("single tower");
        }
        form
    }

    pub fn assemble(&self, rep: Arc<Representation>) -> Result<FormalConnection> {
        if rep.algebra().name() != self.alg.name() {
            return Err(Error::DimensionMismatch(format!(
                "oper for {} assembled in a representation of {}",
                self.alg.name(),
                rep.algebra().name()
            )));
        }
        FormalConnection::from_lie_form(rep, &self.lie_form(), self.coord)
    }

    pub fn truncate(&self, k: i64) -> Self {
        let coord = if self.coord == Coord::Global { Coord::AtZero } else { self.coord };
        OperForm { alg: self.alg.clone(), v: self.v.iter().map(|f| f.truncate(k)).collect(), coord }
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        self.alg.name() == other.alg.name() && self.v.iter().zip(&other.v).all(|(a, b)| a.agrees_with(b))
    }

    /// `sup{0, −ord(v_i)/d_i − 1}`.
    pub fn slope(&self) -> Result<Rational> {
        oper_slope(self)
    }
}

pub fn assemble(oper: &OperForm, rep: Arc<Representation>) -> Result<FormalConnection> {
    oper.assemble(rep)
}

/// `sup{0, sup_i(−ord v_i / d_i − 1)}`. A coefficient known only as `O(t^k)`
/// is harmless when its largest possible contribution does not exceed the rest.
pub fn oper_slope(oper: &OperForm) -> Result<Rational> {
    let degrees = oper.degrees();
    let mut best = int(0);
    let mut unknown: Vec<(usize, Rational)> = Vec::new();
    for (i, (f, &d)) in oper.v.iter().zip(&degrees).enumerate() {
        let d = int(d as i64);
        match (f.valuation(), f.trunc()) {
            (Some(v), _) => {
                let s = -v / &d - Rational::one();
                if s > best {
                    best = s;
                }
            }
            (None, None) => {}
            (None, Some(k)) => unknown.push((i, -k / &d - Rational::one())),
        }
    }
    for (i, bound) in unknown {
        if bound > best {
            return Err(Error::InsufficientPrecision(format!("v_{} is undetermined at its truncation", i + 1)));
        }
    }
    Ok(best)
}

#[derive(Serialize, Deserialize)]
struct OperFile {
    #[serde(rename = "type")]
    cartan_type: lie::CartanType,
    rank: usize,
    coord: Coord,
    v: Vec<LaurentSeries>,
}

impl Serialize for OperForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OperFile { cartan_type: self.alg.cartan_type(), rank: self.alg.rank(), coord: self.coord, v: self.v.clone() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OperForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let f = OperFile::deserialize(d)?;
        let alg = lie::algebra(f.cartan_type, f.rank).map_err(D::Error::custom)?;
        OperForm::new(&alg, f.v, f.coord).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::lie::{CartanType, RepKind};

    #[test]
    fn zero_oper_assembles_to_p_minus_one() {
        let rep = lie::representation(CartanType::A, 2, RepKind::Defining).unwrap();
        let o = OperForm::zero(rep.algebra(), Coord::AtZero);
        let c = o.assemble(rep.clone()).unwrap();
        let n = rep.image(&PrincipalData::new(rep.algebra()).p_minus1);
        assert_eq!(*c.matrix(), n.map(|q| LaurentSeries::from_rational(q.clone())));
        assert_eq!(o.slope().unwrap(), int(0));
    }

    #[test]
    fn slope_formula() {
        let alg = lie::algebra(CartanType::A, 2).unwrap();
        // d = (2, 3); ord v_2 = −4 gives 4/3 − 1
        let v = vec![
            LaurentSeries::laurent_polynomial(&[(-2, int(1))]),
            LaurentSeries::laurent_polynomial(&[(-4, int(3)), (0, int(1))]),
        ];
        let o = OperForm::new(&alg, v, Coord::AtInfinity).unwrap();
        assert_eq!(o.slope().unwrap(), rat(1, 3));
        assert_eq!(o.coefficient(1, 3), Some(Scalar::from_i64(3)));
        // an O(s^{-1}) coefficient cannot beat the known 1/3 ...
        let mut w = o.v().to_vec();
        w[0] = LaurentSeries::big_o(-1);
        assert_eq!(OperForm::new(&alg, w.clone(), Coord::AtInfinity).unwrap().slope().unwrap(), rat(1, 3));
        // ... but O(s^{-5}) could
        w[0] = LaurentSeries::big_o(-5);
        assert!(OperForm::new(&alg, w, Coord::AtInfinity).unwrap().slope().is_err());
    }

    #[test]
    fn json_shape() {
        let alg = lie::algebra(CartanType::A, 1).unwrap();
        let o = OperForm::new(&alg, vec![LaurentSeries::laurent_polynomial(&[(-2, rat(-1, 4)), (-1, int(2))])], Coord::Global)
            .unwrap();
        let j = serde_json::to_value(&o).unwrap();
        assert_eq!(j["type"], "A");
        assert_eq!(j["rank"], 1);
        assert_eq!(j["coord"], "global");
        let back: OperForm = serde_json::from_value(j).unwrap();
        assert_eq!(back, o);
    }
}
