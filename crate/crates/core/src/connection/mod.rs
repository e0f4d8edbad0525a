//! Formal meromorphic connections `d + A(t)dt` in a matrix representation,
//! the gauge action, the change of coordinate to `∞`, and local invariants.

pub mod charpoly;
pub mod gauge;
pub mod lie_form;
pub mod linalg;
pub mod newton;

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use gauge::{GaugeElement, GaugeKind};
pub use lie_form::LieForm;
pub use newton::{ExponentBranch, IrregularExponents, NewtonPolygon};

use crate::error::{Error, Result};
use crate::exact::{LaurentSeries, Matrix, Scalar, Tower};
use crate::lie::{self, nilpotent_is_principal, ChevalleyAlgebra, PrincipalData, RepKind, Representation};

/// Which local parameter the connection form is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coord {
    /// `t` on the formal disk at `0`.
    #[serde(rename = "t")]
    AtZero,
    /// `s = 1/t` on the formal disk at `∞`.
    #[serde(rename = "s")]
    AtInfinity,
    /// `t` on `G_m`; entries are Laurent polynomials.
    #[serde(rename = "global")]
    Global,
}

impl Coord {
    pub fn name(self) -> &'static str {
        match self {
            Coord::AtZero => "t",
            Coord::AtInfinity => "s",
            Coord::Global => "global",
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonodromyType {
    UnipotentRegular,
    Unipotent,
    Other,
}

/// `d + A dt` with `A` a square matrix of series in a representation of a
/// simple Lie algebra. Local operations on a `Global` connection read it at `t = 0`.
#[derive(Clone)]
pub struct FormalConnection {
    rep: Arc<Representation>,
    matrix: Matrix<LaurentSeries>,
    coord: Coord,
}

impl fmt::Debug for FormalConnection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormalConnection({} {}, {}) ", self.alg().name(), self.rep.kind(), self.coord)?;
        fmt::Debug::fmt(&self.matrix, f)
    }
}

impl PartialEq for FormalConnection {
    fn eq(&self, other: &Self) -> bool {
        self.alg().name() == other.alg().name()
            && self.rep.kind() == other.rep.kind()
            && self.coord == other.coord
            && self.matrix == other.matrix
    }
}

fn common_tower<'a>(entries: impl IntoIterator<Item = &'a LaurentSeries>) -> Result<Tower> {
    let mut t = Tower::rationals();
    for f in entries {
        for (_, c) in f.terms() {
            t = Scalar::join_towers(&t, &c.tower())?;
        }
    }
    Ok(t)
}

impl FormalConnection {
    pub fn new(rep: Arc<Representation>, matrix: Matrix<LaurentSeries>, coord: Coord) -> Result<Self> {
        let n = rep.dim();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "connection matrix is {}x{}, representation has dimension {n}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        common_tower(matrix.entries())?;
        if coord == Coord::Global && matrix.entries().iter().any(|f| !f.is_exact()) {
            return Err(Error::Invalid("a global connection needs Laurent polynomial entries".into()));
        }
        Ok(FormalConnection { rep, matrix, coord })
    }

    /// The trivial connection `d`.
    pub fn trivial(rep: Arc<Representation>, coord: Coord) -> Self {
        let n = rep.dim();
        FormalConnection { rep, matrix: Matrix::zeros(n, n), coord }
    }

    /// `d + (N + λtE) dt/t`.
    pub fn frenkel_gross(rep: Arc<Representation>, lambda: &Scalar) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::ZeroParameter("lambda"));
        }
        let alg = rep.algebra().clone();
        let pd = PrincipalData::new(&alg);
        let n_mat = rep.image(&pd.p_minus1);
        let e_mat = rep.matrix(alg.highest_root_index());
        let m = rep.dim();
        let matrix = Matrix::from_fn(m, m, |i, j| {
            let a = LaurentSeries::monomial(Scalar::Rat(n_mat[(i, j)].clone()), -1);
            let b = LaurentSeries::constant(Scalar::Rat(e_mat[(i, j)].clone()) * lambda);
            &a + &b
        });
        Ok(FormalConnection { rep, matrix, coord: Coord::Global })
    }

    /// Frenkel–Gross connection for a cached `(type, rank, rep)`.
    pub fn frenkel_gross_for(t: lie::CartanType, rank: usize, kind: RepKind, lambda: &Scalar) -> Result<Self> {
        Self::frenkel_gross(lie::representation(t, rank, kind)?, lambda)
    }

    pub fn rep(&self) -> &Arc<Representation> {
        &self.rep
    }

    pub fn alg(&self) -> &Arc<ChevalleyAlgebra> {
        self.rep.algebra()
    }

    pub fn matrix(&self) -> &Matrix<LaurentSeries> {
        &self.matrix
    }

    pub fn coord(&self) -> Coord {
        self.coord
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn is_exact(&self) -> bool {
        self.matrix.entries().iter().all(LaurentSeries::is_exact)
    }

    /// The same form read on the formal disk at `0`.
    pub fn at_zero(&self) -> Self {
        let mut c = self.clone();
        if c.coord == Coord::Global {
            c.coord = Coord::AtZero;
        }
        c
    }

    /// Substitution `t = 1/s`, `dt = −s⁻² ds`.
    pub fn change_to_infinity(&self) -> Result<Self> {
        if self.coord != Coord::Global {
            return Err(Error::WrongCoordinate { expected: "global", found: self.coord.name() });
        }
        let mut c = self.invert_coordinate()?;
        c.coord = Coord::AtInfinity;
        Ok(c)
    }

    /// The substitution `t ↦ 1/t` applied to the form; swaps `global` and `s`.
    pub fn invert_coordinate(&self) -> Result<Self> {
        let coord = match self.coord {
            Coord::Global => Coord::AtInfinity,
            Coord::AtInfinity => Coord::Global,
            Coord::AtZero => {
                return Err(Error::WrongCoordinate { expected: "global", found: "t" });
            }
        };
        let minus_sq = LaurentSeries::monomial(Scalar::from_i64(-1), -2);
        let mut entries = Vec::with_capacity(self.matrix.entries().len());
        for f in self.matrix.entries() {
            entries.push(f.invert_variable()?.checked_mul(&minus_sq)?);
        }
        let n = self.dim();
        let matrix = Matrix::from_fn(n, n, |i, j| entries[i * n + j].clone());
        Ok(FormalConnection { rep: self.rep.clone(), matrix, coord })
    }

    /// Pullback along `t = u^b`: `A(u^b)·b·u^{b−1} du`.
    pub fn ramified_pullback(&self, b: u32) -> Self {
        let factor = LaurentSeries::monomial(Scalar::from_i64(b as i64), b as i64 - 1);
        let matrix = self.matrix.map(|f| f.ramified_pullback(b).checked_mul(&factor).expect("single tower"));
        FormalConnection { rep: self.rep.clone(), matrix, coord: self.coord }
    }

    /// Lowest exponent among all entries, or `None` if every entry is zero.
    /// Errors when an entry carries no known coefficient below its truncation
    /// and that truncation does not bound the pole order.
    pub fn pole_order(&self) -> Result<Option<crate::exact::Rational>> {
        let mut low: Option<crate::exact::Rational> = None;
        for f in self.matrix.entries() {
            let v = match f.valuation() {
                Some(v) => v,
                None => match f.trunc() {
                    None => continue,
                    Some(k) => {
                        if k <= crate::exact::int(0) {
                            return Err(Error::InsufficientPrecision(format!(
                                "entry known only modulo O(t^{k}); pole order undetermined"
                            )));
                        }
                        continue;
                    }
                },
            };
            low = Some(match low {
                Some(l) if l <= v => l,
                _ => v,
            });
        }
        Ok(low.map(|v| -v))
    }

    /// The coefficient of `t⁻¹` when the pole has order at most one.
    pub fn residue(&self) -> Result<Matrix<Scalar>> {
        let zero = crate::exact::int(0);
        let one = crate::exact::int(1);
        if let Some(p) = self.pole_order()? {
            if p > one {
                let ord = p.ceil().to_integer();
                return Err(Error::NotFirstOrder(i64::try_from(ord).unwrap_or(i64::MAX)));
            }
            if p > zero && p < one {
                return Err(Error::UnsupportedConnection("fractional pole order".into()));
            }
        }
        let n = self.dim();
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self.matrix[(i, j)].coeff_int(-1).ok_or_else(|| {
                    Error::InsufficientPrecision("residue lies beyond the truncation".into())
                })?;
            }
        }
        Ok(out)
    }

    /// Monodromy type from the residue: unipotent iff the residue is nilpotent,
    /// regular iff in addition it is a principal nilpotent of the Lie algebra.
    pub fn monodromy_type(&self) -> Result<MonodromyType> {
        let r = self.residue()?;
        if !r.is_nilpotent() {
            return Ok(MonodromyType::Other);
        }
        let rational: Option<Vec<_>> = r.entries().iter().map(|c| c.as_rational().cloned()).collect();
        let Some(entries) = rational else {
            return Ok(MonodromyType::Unipotent);
        };
        let n = self.dim();
        let m = Matrix::from_fn(n, n, |i, j| entries[i * n + j].clone());
        match self.rep.preimage(&m) {
            Ok(x) if nilpotent_is_principal(self.alg(), &x) => Ok(MonodromyType::UnipotentRegular),
            _ => Ok(MonodromyType::Unipotent),
        }
    }

    /// The form as a `g`-valued series.
    pub fn lie_form(&self) -> Result<LieForm> {
        LieForm::from_matrix(&self.rep, &self.matrix)
    }

    pub fn from_lie_form(rep: Arc<Representation>, form: &LieForm, coord: Coord) -> Result<Self> {
        let matrix = form.to_matrix(&rep);
        Self::new(rep, matrix, coord)
    }

    /// The same connection in another representation of the same algebra.
    pub fn in_representation(&self, kind: RepKind) -> Result<Self> {
        if kind == self.rep.kind() {
            return Ok(self.clone());
        }
        let alg = self.alg();
        let rep = lie::representation(alg.cartan_type(), alg.rank(), kind)?;
        let form = self.lie_form()?;
        Ok(FormalConnection { matrix: form.to_matrix(&rep), rep, coord: self.coord })
    }

    /// `A ↦ gAg⁻¹ − (dg/dt)g⁻¹`.
    pub fn gauge_transform(&self, g: &GaugeElement) -> Result<Self> {
        g.check_size(self.dim())?;
        let ga = linalg::mul(g.matrix(), &self.matrix)?;
        let gag = linalg::mul(&ga, g.inverse_matrix())?;
        let dg = g.matrix().map(LaurentSeries::derivative);
        let dgg = linalg::mul(&dg, g.inverse_matrix())?;
        let matrix = linalg::sub(&gag, &dgg)?;
        let coord = if self.coord == Coord::Global && matrix.entries().iter().any(|f| !f.is_exact()) {
            Coord::AtZero
        } else {
            self.coord
        };
        Ok(FormalConnection { rep: self.rep.clone(), matrix, coord })
    }

    /// Truncates every entry modulo `O(t^k)`.
    pub fn truncate(&self, k: i64) -> Self {
        let coord = if self.coord == Coord::Global { Coord::AtZero } else { self.coord };
        FormalConnection { rep: self.rep.clone(), matrix: self.matrix.map(|f| f.truncate(k)), coord }
    }

    /// Entrywise agreement modulo the available truncations.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.dim() == other.dim()
            && self.matrix.entries().iter().zip(other.matrix.entries()).all(|(a, b)| a.agrees_with(b))
    }

    pub fn is_trivial(&self) -> bool {
        self.matrix.entries().iter().all(Zero::is_zero)
    }

    /// Connection `d + C dt` for a constant matrix.
    pub fn constant(rep: Arc<Representation>, c: &Matrix<crate::exact::Rational>, coord: Coord) -> Result<Self> {
        let m = c.map(|q| LaurentSeries::from_rational(q.clone()));
        Self::new(rep, m, coord)
    }

    /// `d + M t^k dt` for a rational matrix `M`.
    pub fn monomial(rep: Arc<Representation>, m: &Matrix<crate::exact::Rational>, k: i64, coord: Coord) -> Result<Self> {
        let mat = m.map(|q| LaurentSeries::monomial(Scalar::Rat(q.clone()), k));
        Self::new(rep, mat, coord)
    }

    /// The identity matrix of the representation, as series.
    pub fn identity_matrix(&self) -> Matrix<LaurentSeries> {
        let n = self.dim();
        Matrix::from_fn(n, n, |i, j| if i == j { LaurentSeries::one() } else { LaurentSeries::zero() })
    }
}

#[derive(Serialize, Deserialize)]
pub struct RepSpec {
    #[serde(rename = "type")]
    pub cartan_type: lie::CartanType,
    pub rank: usize,
    pub kind: RepKind,
}

#[derive(Serialize, Deserialize)]
struct ConnectionFile {
    rep: RepSpec,
    coord: Coord,
    matrix: Vec<Vec<LaurentSeries>>,
}

impl Serialize for FormalConnection {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let alg = self.alg();
        ConnectionFile {
            rep: RepSpec { cartan_type: alg.cartan_type(), rank: alg.rank(), kind: self.rep.kind() },
            coord: self.coord,
            matrix: self.matrix.to_rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FormalConnection {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let f = ConnectionFile::deserialize(d)?;
        let rep = lie::representation(f.rep.cartan_type, f.rep.rank, f.rep.kind).map_err(D::Error::custom)?;
        let n = rep.dim();
        if f.matrix.len() != n || f.matrix.iter().any(|r| r.len() != n) {
            return Err(D::Error::custom(format!("matrix must be {n}x{n}")));
        }
        FormalConnection::new(rep, Matrix::from_rows(f.matrix), f.coord).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::lie::CartanType;

    fn sl2_def() -> Arc<Representation> {
        lie::representation(CartanType::A, 1, RepKind::Defining).unwrap()
    }

    #[test]
    fn fg_sl2_matrix() {
        let c = FormalConnection::frenkel_gross(sl2_def(), &Scalar::one()).unwrap();
        let m = c.matrix();
        assert_eq!(m[(0, 1)], LaurentSeries::one());
        assert_eq!(m[(1, 0)], LaurentSeries::monomial(Scalar::one(), -1));
        assert!(m[(0, 0)].is_zero() && m[(1, 1)].is_zero());
        assert!(FormalConnection::frenkel_gross(sl2_def(), &Scalar::zero()).is_err());
    }

    #[test]
    fn fg_at_infinity() {
        let lam = Scalar::Rat(rat(2, 3));
        let c = FormalConnection::frenkel_gross(sl2_def(), &lam).unwrap();
        let inf = c.change_to_infinity().unwrap();
        assert_eq!(inf.coord(), Coord::AtInfinity);
        assert_eq!(inf.matrix()[(1, 0)], LaurentSeries::monomial(Scalar::from_i64(-1), -1));
        assert_eq!(inf.matrix()[(0, 1)], LaurentSeries::monomial(-lam, -2));
        assert_eq!(inf.invert_coordinate().unwrap(), c);
    }

    #[test]
    fn residue_and_monodromy() {
        let c = FormalConnection::frenkel_gross(sl2_def(), &Scalar::one()).unwrap();
        assert_eq!(c.monodromy_type().unwrap(), MonodromyType::UnipotentRegular);
        let diag = Matrix::from_rows(vec![vec![rat(1, 2), int(0)], vec![int(0), rat(-1, 2)]]);
        let d = FormalConnection::monomial(sl2_def(), &diag, -1, Coord::AtZero).unwrap();
        assert_eq!(d.monodromy_type().unwrap(), MonodromyType::Other);
        let triv = FormalConnection::trivial(sl2_def(), Coord::AtZero);
        assert_eq!(triv.monodromy_type().unwrap(), MonodromyType::Unipotent);
        let sl3 = lie::representation(CartanType::A, 2, RepKind::Defining).unwrap();
        let triv3 = FormalConnection::trivial(sl3, Coord::AtZero);
        assert_eq!(triv3.monodromy_type().unwrap(), MonodromyType::Unipotent);
        let pole2 = FormalConnection::monomial(sl2_def(), &diag, -2, Coord::AtZero).unwrap();
        assert_eq!(pole2.residue(), Err(Error::NotFirstOrder(2)));
    }

    #[test]
    fn json_round_trip() {
        let c = FormalConnection::frenkel_gross(sl2_def(), &Scalar::Rat(rat(-7, 5))).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        let back: FormalConnection = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }
}
