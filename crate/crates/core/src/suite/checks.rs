use num_traits::Zero;
use serde_json::json;

use super::sl2::Sl2WeylData;
use super::{ClaimId, JobParams, VerificationReport, SL2_MAX_WEIGHT};
use crate::connection::{newton, FormalConnection, MonodromyType};
use crate::error::{Error, Result};
use crate::exact::{fmt_rational, int, rat, LaurentSeries, Rational, Scalar};
use crate::hitchin::{
    global_spec, section_space_dim, total_dim, verify_direct_sum_decomposition, verify_iota_isomorphism,
    verify_psi_block_structure,
};
use crate::lie::{self, coxeter_fixed_space, coxeter_matrix, n_plus_e, regular_semisimple_check};
use crate::lie::{CartanType, PrincipalData, RepKind};
use crate::oper::{canonicalize, membership, oper_slope, residue_class, OperSpaceSpec, ResidueClass};

fn sub<T>(check: &'static str, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Subcheck { check, source: Box::new(e) })
}

fn local(c: &FormalConnection, trunc: Option<i64>) -> FormalConnection {
    match trunc {
        Some(k) => c.truncate(k),
        None => c.clone(),
    }
}

fn nonzero(lambda: &Rational) -> Result<()> {
    if lambda.is_zero() {
        return Err(Error::ZeroParameter("lambda"));
    }
    Ok(())
}

fn fg(t: CartanType, rank: usize, rep: RepKind, lambda: &Rational) -> Result<FormalConnection> {
    nonzero(lambda)?;
    FormalConnection::frenkel_gross_for(t, rank, rep, &Scalar::Rat(lambda.clone()))
}

fn one_over(h: usize) -> Rational {
    rat(1, h as i64)
}

fn series_strings(v: &[LaurentSeries]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn local_params(t: CartanType, rank: usize, lambda: &Rational, rep: RepKind, trunc: Option<i64>) -> JobParams {
    JobParams { lambda: Some(lambda.clone()), rep: Some(rep), trunc, ..JobParams::for_type(t, rank) }
}

/// Monodromy at `0`, slope and adjoint irregularity at `∞` of the FG connection.
pub fn check_fg_local_structure(
    t: CartanType,
    rank: usize,
    lambda: &Rational,
    rep: RepKind,
    trunc: Option<i64>,
) -> Result<VerificationReport> {
    let conn = fg(t, rank, rep, lambda)?;
    let h = PrincipalData::new(conn.alg()).coxeter_number;
    let mono = sub("monodromy at 0", local(&conn.at_zero(), trunc).monodromy_type())?;
    let inf = local(&sub("coordinate at infinity", conn.change_to_infinity())?, trunc);
    let op = sub("Newton polygon at infinity", newton::operator(&inf))?;
    let slope = op.polygon.slope();
    let adj = sub("adjoint irregularity at infinity", newton::adjoint_irregularity(&inf))?;
    let mut slopes: Vec<Rational> = op.polygon.edges.iter().map(|e| e.slope.clone()).collect();
    slopes.dedup();
    let pass = mono == MonodromyType::UnipotentRegular && slope == one_over(h) && adj == int(rank as i64);
    let witness = json!({
        "coxeter_number": h,
        "monodromy_at_0": mono,
        "slopes": slopes.iter().map(fmt_rational).collect::<Vec<_>>(),
        "slope_at_infinity": fmt_rational(&slope),
        "adjoint_irregularity": fmt_rational(&adj),
        "newton_polygon": op.polygon,
    });
    Ok(VerificationReport::new(ClaimId::FgLocalStructure, local_params(t, rank, lambda, rep, trunc), pass, witness))
}

/// The two finite checks behind irreducibility at `∞`.
pub fn check_irreducibility_at_infinity(t: CartanType, rank: usize) -> Result<VerificationReport> {
    let alg = lie::algebra(t, rank)?;
    let x = n_plus_e(&alg);
    let rs = regular_semisimple_check(&alg, &x);
    let fixed = coxeter_fixed_space(&alg);
    let w = coxeter_matrix(&alg);
    let witness = json!({
        "n_plus_e_regular_semisimple": rs,
        "centralizer_dim": alg.dim() - alg.ad(&x).rank(),
        "coxeter_matrix": w.to_rows().iter().map(|r| r.iter().map(fmt_rational).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "coxeter_fixed_space": fixed,
    });
    let mut report =
        VerificationReport::new(ClaimId::IrreducibilityAtInfinity, JobParams::for_type(t, rank), rs && fixed == 0, witness);
    report.scope = Some("proof-ingredient verification");
    Ok(report)
}

/// Canonical forms of the FG connection at both ends and their membership data.
pub fn check_oper_route(
    t: CartanType,
    rank: usize,
    lambda: &Rational,
    rep: RepKind,
    trunc: Option<i64>,
) -> Result<VerificationReport> {
    let conn = fg(t, rank, rep, lambda)?;
    let alg = conn.alg().clone();
    let h = PrincipalData::new(&alg).coxeter_number;

    let at0 = sub("canonical form at 0", canonicalize(&local(&conn.at_zero(), trunc)))?;
    let minus_rho = vec![int(-1); rank];
    // λ₀ = −ρ: the unipotent residue sits in the class ϖ(−λ₀−ρ) = ϖ(0)
    let rs_spec = OperSpaceSpec::RegularSingular(ResidueClass::shifted(&alg, &minus_rho));
    let rs = sub("regular singular membership at 0", membership(&at0, &rs_spec))?;
    let literal_spec = OperSpaceSpec::RegularSingular(ResidueClass::of_weight(&alg, &minus_rho));
    let literal = sub("regular singular membership at 0", membership(&at0, &literal_spec))?;
    let class0 = sub("residue class at 0", residue_class(&at0))?;
    let closed_form = (t == CartanType::A && rank == 1).then(|| {
        at0.v()[0].agrees_with(&LaurentSeries::laurent_polynomial(&[(-2, rat(-1, 4)), (-1, lambda.clone())]))
    });

    let inf = local(&sub("coordinate at infinity", conn.change_to_infinity())?, trunc);
    let atinf = sub("canonical form at infinity", canonicalize(&inf))?;
    let bounded = sub("slope membership at infinity", membership(&atinf, &OperSpaceSpec::SlopeAtMostOneOverH))?;
    let slope = sub("oper slope at infinity", oper_slope(&atinf))?;
    let ord = atinf.v()[rank - 1].valuation();
    let lead = atinf.coefficient(rank - 1, h as i64);
    let lead_ok = lead.as_ref().is_some_and(|c| !c.is_zero());
    let ratio = lead.as_ref().map(|c| c.checked_mul(&Scalar::Rat(lambda.recip()))).transpose()?;

    let pass = rs
        && bounded
        && slope == one_over(h)
        && ord == Some(int(-(h as i64) - 1))
        && lead_ok
        && closed_form.unwrap_or(true);
    let witness = json!({
        "canonical_at_0": series_strings(at0.v()),
        "residue_class_at_0": class0,
        "lambda0": minus_rho.iter().map(fmt_rational).collect::<Vec<_>>(),
        "regular_singular_at_lambda0": rs,
        "literal_minus_rho_class": literal,
        "a1_closed_form": closed_form,
        "canonical_at_infinity": series_strings(atinf.v()),
        "slope_at_most_one_over_h": bounded,
        "oper_slope": fmt_rational(&slope),
        "ord_v_l": ord.as_ref().map(fmt_rational),
        "v_l_h": lead.as_ref().map(ToString::to_string),
        "v_l_h_over_lambda": ratio.as_ref().map(ToString::to_string),
    });
    let mut report = VerificationReport::new(ClaimId::OperRoute, local_params(t, rank, lambda, rep, trunc), pass, witness);
    report.ledger_flags = vec!["residue_formula_kostant_section", "unipotent_class_lambda0_shift"];
    Ok(report)
}

fn leading_terms(e: &newton::IrregularExponents) -> Option<Vec<String>> {
    e.leading_terms().map(|ts| ts.iter().map(|(c, r)| format!("{c}*s^{}", fmt_rational(r))).collect())
}

/// `λ₁ = λ₂` iff the irregular exponent invariants at `∞` agree.
pub fn check_lambda_separation(
    t: CartanType,
    rank: usize,
    lambda1: &Rational,
    lambda2: &Rational,
    rep: RepKind,
    trunc: Option<i64>,
) -> Result<VerificationReport> {
    let exponents = |l: &Rational| -> Result<newton::IrregularExponents> {
        let inf = local(&fg(t, rank, rep, l)?.change_to_infinity()?, trunc);
        newton::irregular_exponents(&inf)
    };
    nonzero(lambda1)?;
    nonzero(lambda2)?;
    let e1 = sub("exponents at infinity for lambda1", exponents(lambda1))?;
    let e2 = sub("exponents at infinity for lambda2", exponents(lambda2))?;
    let same = e1.same_invariants(&e2);
    let equal = lambda1 == lambda2;
    let witness = json!({
        "lambdas_equal": equal,
        "same_invariants": same,
        "invariants_1": e1.branches,
        "invariants_2": e2.branches,
        "leading_terms_1": leading_terms(&e1),
        "leading_terms_2": leading_terms(&e2),
    });
    let params = JobParams { lambda2: Some(lambda2.clone()), ..local_params(t, rank, lambda1, rep, trunc) };
    Ok(VerificationReport::new(ClaimId::LambdaSeparation, params, same == equal, witness))
}

fn point_params(t: CartanType, rank: usize, zs: &[Rational]) -> JobParams {
    JobParams { points: zs.to_vec(), ..JobParams::for_type(t, rank) }
}

/// `dim Hit(P¹) = 1`.
pub fn check_hitchin_global_line(t: CartanType, rank: usize) -> Result<VerificationReport> {
    let alg = lie::algebra(t, rank)?;
    let spec = global_spec(&alg)?;
    let dims: Vec<usize> = (0..spec.degrees().len()).map(|i| section_space_dim(&spec, i)).collect();
    let dim = total_dim(&spec);
    let witness = json!({ "degrees": spec.degrees(), "summand_dims": dims, "dim": dim });
    Ok(VerificationReport::new(ClaimId::HitchinGlobalLine, JobParams::for_type(t, rank), dim == 1, witness))
}

pub fn check_hitchin_iota(t: CartanType, rank: usize, zs: &[Rational]) -> Result<VerificationReport> {
    let alg = lie::algebra(t, rank)?;
    let r = verify_iota_isomorphism(&alg, zs)?;
    let mut report =
        VerificationReport::new(ClaimId::HitchinIota, point_params(t, rank, zs), r.pass, serde_json::to_value(&r).unwrap());
    report.ledger_flags = vec!["m_index_bound"];
    Ok(report)
}

/// Rank count of the decomposition, with `dim = 1 + |z|·Σd_i` for the ambient space.
pub fn check_hitchin_direct_sum(t: CartanType, rank: usize, zs: &[Rational]) -> Result<VerificationReport> {
    let alg = lie::algebra(t, rank)?;
    let r = verify_direct_sum_decomposition(&alg, zs)?;
    let sum_d: usize = PrincipalData::new(&alg).degrees.iter().sum();
    let expected = 1 + zs.len() * sum_d;
    let pass = r.pass && r.ambient_dim == expected && r.global_dim == 1;
    let mut witness = serde_json::to_value(&r).unwrap();
    witness["expected_ambient_dim"] = json!(expected);
    let mut report = VerificationReport::new(ClaimId::HitchinDirectSum, point_params(t, rank, zs), pass, witness);
    report.ledger_flags = vec!["m_index_bound"];
    Ok(report)
}

pub fn check_hitchin_psi_blocks(t: CartanType, rank: usize, zs: &[Rational]) -> Result<VerificationReport> {
    let alg = lie::algebra(t, rank)?;
    let r = verify_psi_block_structure(&alg, zs)?;
    let mut report = VerificationReport::new(
        ClaimId::HitchinPsiBlocks,
        point_params(t, rank, zs),
        r.pass,
        serde_json::to_value(&r).unwrap(),
    );
    report.ledger_flags = vec!["m_index_bound"];
    Ok(report)
}

/// `V_n` is free of rank one over the image of `A_f`.
pub fn check_sl2_weyl_freeness(n: u32) -> Result<VerificationReport> {
    if n > SL2_MAX_WEIGHT {
        return Err(Error::Invalid(format!("highest weight {n} exceeds {SL2_MAX_WEIGHT}")));
    }
    let w = Sl2WeylData::new(n);
    let commutative = w.is_commutative();
    let cyclic = w.cyclic_vector();
    let dim_v = w.dim_v();
    let dim_a = w.dim_a_f();
    let pass = commutative && dim_a == n as usize + 1 && dim_a <= dim_v && cyclic.is_some();
    let witness = json!({
        "dim_v": dim_v,
        "dim_a_f": dim_a,
        "commutative": commutative,
        "casimir_scalar": fmt_rational(&w.casimir[(0, 0)]),
        "cyclic_vector": cyclic.map(|k| format!("v_{k}")),
    });
    let params = JobParams { highest_weight: Some(n), ..Default::default() };
    Ok(VerificationReport::new(ClaimId::Sl2WeylFreeness, params, pass, witness))
}
