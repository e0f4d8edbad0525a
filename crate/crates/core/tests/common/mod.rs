//! Generators and property checks shared by the property suites and the
//! acceptance run.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use fgrigid::connection::{newton, Coord, FormalConnection, GaugeElement, LieForm};
use fgrigid::exact::{int, rat, LaurentSeries, Rational};
use fgrigid::lie::{self, CartanType, ChevalleyAlgebra, PrincipalData, RepKind, Representation};
use fgrigid::oper::{canonicalize, OperForm};
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const ACCEPTANCE_TYPES: &[(CartanType, usize)] = &[
    (CartanType::A, 1),
    (CartanType::A, 2),
    (CartanType::A, 3),
    (CartanType::B, 2),
    (CartanType::C, 2),
    (CartanType::G, 2),
];

pub const RANK_LE_2: &[(CartanType, usize)] =
    &[(CartanType::A, 1), (CartanType::A, 2), (CartanType::B, 2), (CartanType::C, 2), (CartanType::G, 2)];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_rational<R: Rng>(r: &mut R) -> Rational {
    rat(r.gen_range(-9..=9), r.gen_range(1..=5))
}

pub fn rand_nonzero_rational<R: Rng>(r: &mut R) -> Rational {
    loop {
        let q = rand_rational(r);
        if !q.is_zero() {
            return q;
        }
    }
}

/// Up to `n` terms with exponents in `lo..=hi`.
pub fn rand_poly<R: Rng>(r: &mut R, lo: i64, hi: i64, n: usize) -> LaurentSeries {
    let terms: Vec<(i64, Rational)> = (0..r.gen_range(0..=n)).map(|_| (r.gen_range(lo..=hi), rand_rational(r))).collect();
    let mut acc = LaurentSeries::zero();
    for (e, c) in terms {
        acc = &acc + &LaurentSeries::laurent_polynomial(&[(e, c)]);
    }
    acc
}

pub fn rand_oper<R: Rng>(r: &mut R, alg: &Arc<ChevalleyAlgebra>) -> OperForm {
    let degs = PrincipalData::new(alg).degrees;
    let v = degs.iter().map(|&d| rand_poly(r, -(d as i64) - 2, 2, 3)).collect();
    OperForm::new(alg, v, Coord::AtZero).unwrap()
}

/// `exp(X)·t^μ` with `X` in the nilradical and `μ` an integral cocharacter.
pub fn rand_borel_gauge<R: Rng>(r: &mut R, rep: &Representation) -> GaugeElement {
    let alg = rep.algebra().clone();
    let positive: Vec<usize> = (0..alg.dim()).filter(|&k| alg.degrees()[k] > 0).collect();
    let mut x = LieForm::zero(&alg);
    for _ in 0..r.gen_range(1..=2) {
        let k = positive[r.gen_range(0..positive.len())];
        x.set_coeff(k, rand_poly(r, -2, 2, 2));
    }
    let mu: Vec<Rational> = (0..alg.rank()).map(|_| int(r.gen_range(-1..=1))).collect();
    let u = GaugeElement::unipotent(rep, &x).unwrap();
    u.product(&GaugeElement::cocharacter(rep, &mu)).unwrap()
}

pub fn smallest_rep(t: CartanType, rank: usize) -> Arc<Representation> {
    lie::representation(t, rank, RepKind::smallest(t)).unwrap()
}

/// `canonicalize(assemble(o)) = o`.
pub fn assemble_round_trip<R: Rng>(r: &mut R, t: CartanType, rank: usize) -> Result<(), String> {
    let rep = smallest_rep(t, rank);
    let o = rand_oper(r, rep.algebra());
    let c = o.assemble(rep).map_err(|e| e.to_string())?;
    let back = canonicalize(&c).map_err(|e| e.to_string())?;
    if back != o {
        return Err(format!("{t}{rank}: {:?} came back as {:?}", o.v(), back.v()));
    }
    Ok(())
}

/// Canonical form and formal invariants of `conn` are unchanged by a random
/// Borel gauge.
pub fn gauge_stable<R: Rng>(r: &mut R, conn: &FormalConnection, base: &Invariants) -> Result<(), String> {
    let g = rand_borel_gauge(r, conn.rep());
    let moved = conn.gauge_transform(&g).map_err(|e| e.to_string())?;
    let inv = Invariants::of(&moved)?;
    if inv.canonical != base.canonical {
        return Err(format!("canonical form moved: {:?} vs {:?}", inv.canonical.v(), base.canonical.v()));
    }
    if inv.slope != base.slope || inv.irregularity != base.irregularity {
        return Err(format!("slope data moved: {} {} vs {} {}", inv.slope, inv.irregularity, base.slope, base.irregularity));
    }
    if !inv.exponents.same_invariants(&base.exponents) {
        return Err("irregular exponents moved".into());
    }
    Ok(())
}

pub struct Invariants {
    pub canonical: OperForm,
    pub slope: Rational,
    pub irregularity: Rational,
    pub exponents: newton::IrregularExponents,
}

impl Invariants {
    pub fn of(conn: &FormalConnection) -> Result<Self, String> {
        let canonical = canonicalize(conn).map_err(|e| e.to_string())?;
        let exponents = newton::irregular_exponents(conn).map_err(|e| e.to_string())?;
        Ok(Invariants {
            canonical,
            slope: exponents.polygon.slope(),
            irregularity: exponents.polygon.irregularity(),
            exponents,
        })
    }
}

/// Laurent polynomials as exponent maps, multiplied term by term.
fn naive(f: &LaurentSeries) -> BTreeMap<i64, Rational> {
    f.terms().iter().map(|(e, c)| (*e, c.as_rational().unwrap().clone())).collect()
}

fn naive_mul(a: &BTreeMap<i64, Rational>, b: &BTreeMap<i64, Rational>) -> BTreeMap<i64, Rational> {
    let mut out: BTreeMap<i64, Rational> = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            *out.entry(ea + eb).or_insert_with(Rational::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Ring axioms on random Laurent polynomials, products checked against a
/// term-by-term oracle, and truncated operands checked for agreement.
pub fn laurent_axioms<R: Rng>(r: &mut R) -> Result<(), String> {
    let a = rand_poly(r, -4, 4, 4);
    let b = rand_poly(r, -4, 4, 4);
    let c = rand_poly(r, -4, 4, 4);
    let mul = |x: &LaurentSeries, y: &LaurentSeries| x.checked_mul(y).unwrap();
    let check = |ok: bool, what: &str| if ok { Ok(()) } else { Err(format!("{what}: a={a} b={b} c={c}")) };
    check(&(&a + &b) + &c == &a + &(&b + &c), "additive associativity")?;
    check(&a + &b == &b + &a, "additive commutativity")?;
    check((&a + &(-&a)).is_zero(), "additive inverse")?;
    check(mul(&mul(&a, &b), &c) == mul(&a, &mul(&b, &c)), "multiplicative associativity")?;
    check(mul(&a, &b) == mul(&b, &a), "multiplicative commutativity")?;
    check(mul(&a, &(&b + &c)) == &mul(&a, &b) + &mul(&a, &c), "distributivity")?;
    check(mul(&a, &LaurentSeries::one()) == a, "unit")?;
    check(naive(&mul(&a, &b)) == naive_mul(&naive(&a), &naive(&b)), "product oracle")?;
    let k = r.gen_range(-2..=6);
    let (at, bt) = (a.truncate(k), b.truncate(k));
    check(mul(&at, &bt).agrees_with(&mul(&a, &b)), "truncated product")?;
    if !a.is_zero() {
        let inv = a.invert(8).map_err(|e| e.to_string())?;
        check(mul(&a, &inv).agrees_with(&LaurentSeries::one()), "inverse")?;
    }
    Ok(())
}
