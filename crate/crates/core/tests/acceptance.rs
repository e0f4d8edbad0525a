//! One line per acceptance criterion, printed straight to stderr so it shows
//! even when the harness captures output.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use common::*;
use fgrigid::connection::{newton, FormalConnection};
use fgrigid::exact::{fmt_rational, int, rat, Rational, Scalar};
use fgrigid::hitchin::{global_spec, total_dim};
use fgrigid::lie::{self, CartanType, PrincipalData, RepKind, SUPPORTED};
use fgrigid::oper::{canonicalize, oper_slope};
use fgrigid::suite::{
    check_fg_local_structure, check_hitchin_direct_sum, check_hitchin_iota, check_hitchin_psi_blocks,
    check_irreducibility_at_infinity, check_lambda_separation, check_oper_route, check_sl2_weyl_freeness,
};
use serde_json::{json, Value};

/// Coxeter numbers of the acceptance types, in order.
const COXETER: [i64; 6] = [2, 3, 4, 4, 4, 6];

fn lambdas() -> [Rational; 3] {
    [int(1), int(2), rat(1, 3)]
}

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(failures: Vec<String>, summary: String) -> Self {
        if failures.is_empty() {
            Outcome { pass: true, detail: summary }
        } else {
            Outcome { pass: false, detail: format!("{summary}; failures: {}", failures.join("; ")) }
        }
    }
}

fn line(n: usize, name: &str, budget: u64, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    let timing = if took <= Duration::from_secs(budget) { "within budget" } else { "OVER BUDGET" };
    let _ = writeln!(
        std::io::stderr(),
        "criterion {n} [{}] {name}: {} ({:.2}s of {budget}s, {timing})",
        if out.pass { "PASS" } else { "FAIL" },
        out.detail,
        took.as_secs_f64()
    );
    out.pass
}

fn criterion_1() -> Outcome {
    let mut failures = Vec::new();
    let mut slopes = Vec::new();
    for (&(t, r), &h) in ACCEPTANCE_TYPES.iter().zip(&COXETER) {
        for lam in lambdas() {
            let rep = RepKind::smallest(t);
            match check_fg_local_structure(t, r, &lam, rep, None) {
                Ok(rep) => {
                    let w = &rep.witness;
                    let ok = rep.pass
                        && w["monodromy_at_0"] == json!("unipotent_regular")
                        && w["slope_at_infinity"] == json!(format!("1/{h}"))
                        && w["adjoint_irregularity"] == json!(r.to_string());
                    if !ok {
                        failures.push(format!("{t}{r} λ={lam}: {w}"));
                    }
                    if lam == int(1) {
                        slopes.push(w["slope_at_infinity"].as_str().unwrap_or("?").to_string());
                    }
                }
                Err(e) => failures.push(format!("{t}{r} λ={lam}: {e}")),
            }
        }
    }
    Outcome::new(failures, format!("18 instances; slopes at infinity {}; adjoint irregularity = rank", slopes.join(" ")))
}

fn criterion_2() -> Outcome {
    let mut failures = Vec::new();
    for &(t, r) in ACCEPTANCE_TYPES {
        match check_irreducibility_at_infinity(t, r) {
            Ok(rep) => {
                let w = &rep.witness;
                if !(rep.pass && w["n_plus_e_regular_semisimple"] == json!(true) && w["coxeter_fixed_space"] == json!(0))
                {
                    failures.push(format!("{t}{r}: {w}"));
                }
                if w["centralizer_dim"] != json!(r) {
                    failures.push(format!("{t}{r}: centralizer of N+E has dimension {}", w["centralizer_dim"]));
                }
            }
            Err(e) => failures.push(format!("{t}{r}: {e}")),
        }
    }
    Outcome::new(failures, "N+E regular semisimple and Coxeter fixed space 0 for all six types".into())
}

fn criterion_3() -> Outcome {
    let mut failures = Vec::new();
    let mut literal = Vec::new();
    let mut leads = Vec::new();
    for (&(t, r), &h) in ACCEPTANCE_TYPES.iter().zip(&COXETER) {
        let mut ratios = Vec::new();
        for lam in lambdas() {
            let rep = match check_oper_route(t, r, &lam, RepKind::smallest(t), None) {
                Ok(rep) => rep,
                Err(e) => {
                    failures.push(format!("{t}{r} λ={lam}: {e}"));
                    continue;
                }
            };
            let w = &rep.witness;
            let mut ok = rep.pass
                && w["regular_singular_at_lambda0"] == json!(true)
                && w["slope_at_most_one_over_h"] == json!(true)
                && w["oper_slope"] == json!(format!("1/{h}"))
                && w["ord_v_l"] == json!((-h - 1).to_string())
                && w["v_l_h"].as_str().is_some_and(|s| s != "0");
            if t == CartanType::A && r == 1 {
                // v₁ = λ/t − 1/(4t²) at 0 and λ/s³ − 1/(4s²) at ∞
                let at0 = json!([format!("-1/4*t^-2 + {}*t^-1", fmt_rational(&lam)).replace("+ -", "- ")]);
                ok &= w["a1_closed_form"] == json!(true) && w["canonical_at_0"] == at0;
                ok &= w["v_l_h"] == json!(fmt_rational(&lam));
            }
            if !ok {
                failures.push(format!("{t}{r} λ={lam}: {w}"));
            }
            literal.push(w["literal_minus_rho_class"] == json!(true));
            ratios.push(w["v_l_h_over_lambda"].clone());
        }
        // v_{ℓ,h} is linear in λ
        if ratios.windows(2).any(|p| p[0] != p[1]) {
            failures.push(format!("{t}{r}: v_l_h/λ varies: {ratios:?}"));
        }
        leads.push(format!("{t}{r}:{}", ratios.first().and_then(Value::as_str).unwrap_or("?")));
    }
    // cross-module: matrix Newton polygon and oper formula give the same slope
    for &(t, r) in ACCEPTANCE_TYPES {
        for lam in lambdas() {
            let fg = FormalConnection::frenkel_gross_for(t, r, RepKind::smallest(t), &Scalar::Rat(lam.clone())).unwrap();
            let inf = fg.change_to_infinity().unwrap();
            let a = newton::slope(&inf).ok();
            let b = canonicalize(&inf).ok().and_then(|o| oper_slope(&o).ok());
            if a.is_none() || a != b {
                failures.push(format!("{t}{r} λ={lam}: slopes {a:?} vs {b:?}"));
            }
        }
    }
    let lit = if literal.iter().any(|&b| b) { "true for some" } else { "false" };
    Outcome::new(
        failures,
        format!(
            "Op^RS at ϖ(−λ₀−ρ) with λ₀ = −ρ (literal ϖ(−ρ): {lit}); Op_(≤1/h) at ∞; ord v_l = −h−1; \
             v_l,h/λ = {}; A1 closed forms exact",
            leads.join(" ")
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut failures = Vec::new();
    let mut r = rng(0x5eed_0004);
    let mut unequal = 0;
    let mut equal = 0;
    for &(t, rank) in ACCEPTANCE_TYPES {
        let mut pairs = Vec::new();
        while pairs.len() < 10 {
            let (a, b) = (rand_nonzero_rational(&mut r), rand_nonzero_rational(&mut r));
            if a != b {
                pairs.push((a, b));
            }
        }
        let same: Vec<(Rational, Rational)> = (0..3).map(|_| rand_nonzero_rational(&mut r)).map(|a| (a.clone(), a)).collect();
        for (a, b) in pairs.iter().chain(&same) {
            match check_lambda_separation(t, rank, a, b, RepKind::smallest(t), None) {
                Ok(rep) => {
                    let want_same = a == b;
                    if !rep.pass || rep.witness["same_invariants"] != json!(want_same) {
                        failures.push(format!("{t}{rank} ({a}, {b}): {}", rep.witness["same_invariants"]));
                    }
                    if want_same {
                        equal += 1;
                    } else {
                        unequal += 1;
                    }
                    if t == CartanType::A && rank == 1 {
                        // y² = λ on the single edge of slope 1/2
                        let b0 = &rep.witness["invariants_1"][0];
                        if b0["ramification"] != json!(2) || b0["slope"] != json!([1, 2]) {
                            failures.push(format!("A1 λ={a}: branch {b0}"));
                        }
                    }
                }
                Err(e) => failures.push(format!("{t}{rank} ({a}, {b}): {e}")),
            }
        }
    }
    Outcome::new(failures, format!("{unequal} unequal pairs separated, {equal} equal pairs coincide"))
}

fn criterion_5() -> Outcome {
    let mut failures = Vec::new();
    let types = [(CartanType::A, 1), (CartanType::A, 2), (CartanType::B, 2)];
    let zs = [int(1), int(-2), rat(1, 3)];
    let mut ranks = Vec::new();
    for (t, r) in types {
        let sum_d: usize = PrincipalData::new(&lie::algebra(t, r).unwrap()).degrees.iter().sum();
        for z in &zs {
            let one = std::slice::from_ref(z);
            match check_hitchin_iota(t, r, one) {
                Ok(rep) if rep.pass && rep.witness["rank"] == json!(sum_d) => {}
                Ok(rep) => failures.push(format!("{t}{r} z={z}: iota rank {}", rep.witness["rank"])),
                Err(e) => failures.push(format!("{t}{r} z={z}: {e}")),
            }
            match check_hitchin_direct_sum(t, r, one) {
                Ok(rep) if rep.pass && rep.witness["ambient_dim"] == json!(1 + sum_d) => {}
                Ok(rep) => failures.push(format!("{t}{r} z={z}: ambient {}", rep.witness["ambient_dim"])),
                Err(e) => failures.push(format!("{t}{r} z={z}: {e}")),
            }
        }
        // all three points at once
        match check_hitchin_iota(t, r, &zs) {
            Ok(rep) if rep.pass && rep.witness["rank"] == json!(3 * sum_d) => {}
            Ok(rep) => failures.push(format!("{t}{r} three points: iota rank {}", rep.witness["rank"])),
            Err(e) => failures.push(format!("{t}{r} three points: {e}")),
        }
        for check in [check_hitchin_direct_sum, check_hitchin_psi_blocks] {
            match check(t, r, &zs) {
                Ok(rep) if rep.pass => {}
                Ok(rep) => failures.push(format!("{t}{r} three points: {}", rep.claim)),
                Err(e) => failures.push(format!("{t}{r} three points: {e}")),
            }
        }
        ranks.push(format!("{t}{r}:{sum_d}"));
    }
    for &(t, r) in SUPPORTED {
        let alg = lie::algebra(t, r).unwrap();
        let d = total_dim(&global_spec(&alg).unwrap());
        if d != 1 {
            failures.push(format!("dim Hit({t}{r}) = {d}"));
        }
    }
    Outcome::new(
        failures,
        format!(
            "iota rank Σd_i ({}) at z = 1, -2, 1/3; ambient = 1 + Σd_i; dim Hit(P1) = 1 for all {} supported types",
            ranks.join(" "),
            SUPPORTED.len()
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut failures = Vec::new();
    for n in 0..=40u32 {
        match check_sl2_weyl_freeness(n) {
            Ok(rep) => {
                let w = &rep.witness;
                let casimir = fmt_rational(&rat((n * (n + 2)) as i64, 2));
                let ok = rep.pass
                    && w["dim_a_f"] == json!(n + 1)
                    && w["dim_v"] == json!(n + 1)
                    && w["commutative"] == json!(true)
                    && w["cyclic_vector"] == json!("v_0")
                    && w["casimir_scalar"] == json!(casimir);
                if !ok {
                    failures.push(format!("λ̄={n}: {w}"));
                }
            }
            Err(e) => failures.push(format!("λ̄={n}: {e}")),
        }
    }
    Outcome::new(failures, "dim N = λ̄+1, commutative, highest weight vector cyclic for λ̄ = 0..40".into())
}

fn criterion_7() -> Outcome {
    let mut failures = Vec::new();
    let mut r = rng(0x5eed_0007);
    let mut round_trips = 0;
    for &(t, rank) in RANK_LE_2 {
        for _ in 0..100 {
            match assemble_round_trip(&mut r, t, rank) {
                Ok(()) => round_trips += 1,
                Err(e) => failures.push(e),
            }
        }
    }
    let mut gauges = 0;
    for &(t, rank) in ACCEPTANCE_TYPES {
        let lam = rand_nonzero_rational(&mut r);
        let fg = FormalConnection::frenkel_gross_for(t, rank, RepKind::smallest(t), &Scalar::Rat(lam)).unwrap();
        let inf = fg.change_to_infinity().unwrap();
        let base = match Invariants::of(&inf) {
            Ok(b) => b,
            Err(e) => {
                failures.push(format!("{t}{rank}: {e}"));
                continue;
            }
        };
        for _ in 0..50 {
            match gauge_stable(&mut r, &inf, &base) {
                Ok(()) => gauges += 1,
                Err(e) => failures.push(format!("{t}{rank}: {e}")),
            }
        }
    }
    let mut slopes = 0;
    for &(t, rank) in ACCEPTANCE_TYPES {
        for _ in 0..5 {
            let lam = rand_nonzero_rational(&mut r);
            let fg = FormalConnection::frenkel_gross_for(t, rank, RepKind::smallest(t), &Scalar::Rat(lam.clone())).unwrap();
            let inf = fg.change_to_infinity().unwrap();
            let a = newton::slope(&inf).ok();
            let b = canonicalize(&inf).ok().and_then(|o| oper_slope(&o).ok());
            if a.is_some() && a == b {
                slopes += 1;
            } else {
                failures.push(format!("{t}{rank} λ={lam}: {a:?} vs {b:?}"));
            }
        }
    }
    let mut axioms = 0;
    for _ in 0..500 {
        match laurent_axioms(&mut r) {
            Ok(()) => axioms += 1,
            Err(e) => failures.push(e),
        }
    }
    let n = failures.len();
    Outcome::new(
        failures,
        format!(
            "{round_trips} oper round trips, {gauges} gauged connections, {slopes} slope agreements, \
             {axioms} ring axiom rounds, {n} failures"
        ),
    )
}

#[test]
fn acceptance() {
    let results = [
        line(1, "FG local structure", 60, criterion_1),
        line(2, "irreducibility ingredients", 5, criterion_2),
        line(3, "oper route", 60, criterion_3),
        line(4, "lambda separation", 60, criterion_4),
        line(5, "Hitchin decompositions", 30, criterion_5),
        line(6, "sl2 Weyl freeness", 30, criterion_6),
        line(7, "property suites", 600, criterion_7),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, &p)| !p).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
