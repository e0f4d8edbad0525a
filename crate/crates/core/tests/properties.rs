mod common;

use common::*;
use fgrigid::connection::{charpoly, newton, FormalConnection};
use fgrigid::exact::{int, Rational, Scalar};
use fgrigid::hitchin::{section_space, section_space_dim, verify_iota_isomorphism, HitchinLevelSpec, MarkedPoint, Point};
use fgrigid::lie::{self, CartanType, RepKind, SUPPORTED};
use fgrigid::oper::{canonicalize, membership, oper_slope, residue_class, OperSpaceSpec};
use fgrigid::suite::{run_suite, ClaimId, SuiteConfig};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |q| *q != int(0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn laurent_ring_axioms(seed in any::<u64>()) {
        laurent_axioms(&mut rng(seed)).map_err(TestCaseError::fail)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn canonicalize_inverts_assemble(seed in any::<u64>(), k in 0..RANK_LE_2.len()) {
        let (t, r) = RANK_LE_2[k];
        assemble_round_trip(&mut rng(seed), t, r).map_err(TestCaseError::fail)?;
    }

    /// Regular singular ⊂ slope ≤ 1/h ⊂ punctured, and an oper always lies in
    /// the regular singular space of its own residue class once its poles are bounded.
    #[test]
    fn membership_is_monotone(seed in any::<u64>(), k in 0..RANK_LE_2.len()) {
        let (t, r) = RANK_LE_2[k];
        let alg = lie::algebra(t, r).unwrap();
        let o = rand_oper(&mut rng(seed), &alg);
        let degs = o.degrees();
        let bounded = o.v().iter().zip(&degs).all(|(f, &d)| f.valuation().is_none_or(|v| v >= int(-(d as i64))));
        let rs = bounded && membership(&o, &OperSpaceSpec::RegularSingular(residue_class(&o).unwrap())).unwrap();
        prop_assert_eq!(rs, bounded);
        let small = membership(&o, &OperSpaceSpec::SlopeAtMostOneOverH).unwrap();
        prop_assert!(!rs || small);
        prop_assert!(membership(&o, &OperSpaceSpec::Punctured).unwrap());
        let h = *degs.last().unwrap() as i64;
        prop_assert_eq!(small, o.slope().unwrap() <= Rational::new(1.into(), h.into()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn borel_gauges_fix_the_invariants(seed in any::<u64>(), k in 0..ACCEPTANCE_TYPES.len(), lam in nonzero_rational()) {
        let (t, r) = ACCEPTANCE_TYPES[k];
        let fg = FormalConnection::frenkel_gross_for(t, r, RepKind::smallest(t), &Scalar::Rat(lam)).unwrap();
        let inf = fg.change_to_infinity().unwrap();
        let base = Invariants::of(&inf).map_err(TestCaseError::fail)?;
        gauge_stable(&mut rng(seed), &inf, &base).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn matrix_and_oper_slopes_agree(k in 0..ACCEPTANCE_TYPES.len(), lam in nonzero_rational()) {
        let (t, r) = ACCEPTANCE_TYPES[k];
        let fg = FormalConnection::frenkel_gross_for(t, r, RepKind::smallest(t), &Scalar::Rat(lam)).unwrap();
        let inf = fg.change_to_infinity().unwrap();
        let o = canonicalize(&inf).unwrap();
        let s = newton::slope(&inf).unwrap();
        prop_assert_eq!(&s, &oper_slope(&o).unwrap());
        // FG at ∞ is in good form, so the eigenvalue polygon also sees the slope
        prop_assert_eq!(s, charpoly::eigenvalue_polygon(&inf).unwrap().slope());
    }
}

fn marked_points() -> impl Strategy<Value = Vec<(Option<Rational>, u8)>> {
    // None stands for ∞; duplicates are removed below
    prop::collection::vec((prop::option::weighted(0.8, rational()), 0u8..5), 0..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Riemann–Roch on P¹: `dim = max(0, Σ m_x − 2d + 1)`, and every basis
    /// section respects the pole bounds.
    #[test]
    fn section_space_dims(k in 0..SUPPORTED.len(), pts in marked_points(), shift in prop::collection::vec(0i64..3, 8)) {
        let (t, r) = SUPPORTED[k];
        let alg = lie::algebra(t, r).unwrap();
        let mut seen = Vec::new();
        let mut points = Vec::new();
        for (p, m) in pts {
            let point = p.map_or(Point::Infinity, Point::Finite);
            if seen.contains(&point) {
                continue;
            }
            seen.push(point.clone());
            let bounds = (0..r).map(|i| m as i64 + shift[i % shift.len()]).collect();
            points.push(MarkedPoint { point, bounds });
        }
        let spec = HitchinLevelSpec::new(&alg, points.clone()).unwrap();
        for (i, &d) in spec.degrees().iter().enumerate() {
            let total: i64 = points.iter().map(|p| p.bounds[i]).sum();
            let expected = (total - 2 * d as i64 + 1).max(0) as usize;
            prop_assert_eq!(section_space_dim(&spec, i), expected);
            let space = section_space(&spec, i);
            prop_assert_eq!(space.dim(), expected);
            for s in &space.basis {
                for p in &points {
                    prop_assert!(s.pole_order_at(&p.point).unwrap() <= p.bounds[i]);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn iota_is_invertible_for_every_z(k in 0..3usize, zs in prop::collection::btree_set(nonzero_rational(), 1..4)) {
        let (t, r) = [(CartanType::A, 1), (CartanType::A, 2), (CartanType::B, 2)][k];
        let alg = lie::algebra(t, r).unwrap();
        let zs: Vec<Rational> = zs.into_iter().collect();
        let rep = verify_iota_isomorphism(&alg, &zs).unwrap();
        prop_assert!(rep.pass, "{:?}", rep);
    }
}

#[test]
fn suite_runs_are_byte_identical() {
    let cfg = SuiteConfig {
        claims: vec![ClaimId::FgLocalStructure, ClaimId::IrreducibilityAtInfinity, ClaimId::HitchinIota],
        types: vec!["A1".into(), "B2".into(), "E8".into()],
        highest_weights: vec![0, 3],
        ..Default::default()
    };
    let a = serde_json::to_string(&run_suite(&cfg)).unwrap();
    let b = serde_json::to_string(&run_suite(&cfg)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn fg_outcomes_do_not_depend_on_lambda() {
    let cfg = SuiteConfig {
        claims: vec![ClaimId::FgLocalStructure],
        lambdas: vec![int(1), int(2), Rational::new(1.into(), 3.into()), int(-7)],
        ..Default::default()
    };
    let out = run_suite(&cfg);
    for label in &cfg.types {
        let passes: Vec<bool> =
            out.reports.iter().filter(|r| r.params.type_label.as_ref() == Some(label)).map(|r| r.pass).collect();
        assert_eq!(passes.len(), 4);
        assert!(passes.iter().all(|&p| p == passes[0]));
    }
}
