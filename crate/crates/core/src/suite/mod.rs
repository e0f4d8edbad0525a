//! Verification jobs: each claim bundles the other modules into one pass/fail
//! report with its witness data.

mod checks;
pub mod sl2;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::de::{Deserializer, Error as _};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{fmt_rational, int, parse_rational, rat, Rational};
use crate::lie::{roots::is_supported, CartanType, RepKind};

pub use checks::{
    check_fg_local_structure, check_hitchin_direct_sum, check_hitchin_global_line, check_hitchin_iota,
    check_hitchin_psi_blocks, check_irreducibility_at_infinity, check_lambda_separation, check_oper_route,
    check_sl2_weyl_freeness,
};
pub use sl2::Sl2WeylData;

pub const SCHEMA: u32 = 1;

/// Largest highest weight accepted by the `sl₂` freeness check.
pub const SL2_MAX_WEIGHT: u32 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimId {
    FgLocalStructure,
    IrreducibilityAtInfinity,
    OperRoute,
    LambdaSeparation,
    HitchinGlobalLine,
    HitchinIota,
    HitchinDirectSum,
    HitchinPsiBlocks,
    Sl2WeylFreeness,
}

/// A parameter a claim may consume.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Param {
    Type,
    Lambda,
    LambdaPair,
    Rep,
    Points,
    HighestWeight,
    Trunc,
}

impl ClaimId {
    pub const ALL: [ClaimId; 9] = [
        ClaimId::FgLocalStructure,
        ClaimId::IrreducibilityAtInfinity,
        ClaimId::OperRoute,
        ClaimId::LambdaSeparation,
        ClaimId::HitchinGlobalLine,
        ClaimId::HitchinIota,
        ClaimId::HitchinDirectSum,
        ClaimId::HitchinPsiBlocks,
        ClaimId::Sl2WeylFreeness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClaimId::FgLocalStructure => "fg_local_structure",
            ClaimId::IrreducibilityAtInfinity => "irreducibility_at_infinity",
            ClaimId::OperRoute => "oper_route",
            ClaimId::LambdaSeparation => "lambda_separation",
            ClaimId::HitchinGlobalLine => "hitchin_global_line",
            ClaimId::HitchinIota => "hitchin_iota",
            ClaimId::HitchinDirectSum => "hitchin_direct_sum",
            ClaimId::HitchinPsiBlocks => "hitchin_psi_blocks",
            ClaimId::Sl2WeylFreeness => "sl2_weyl_freeness",
        }
    }

    pub fn required(self) -> &'static [Param] {
        match self {
            ClaimId::FgLocalStructure | ClaimId::OperRoute => &[Param::Type, Param::Lambda],
            ClaimId::IrreducibilityAtInfinity | ClaimId::HitchinGlobalLine => &[Param::Type],
            ClaimId::LambdaSeparation => &[Param::Type, Param::LambdaPair],
            ClaimId::HitchinIota | ClaimId::HitchinDirectSum | ClaimId::HitchinPsiBlocks => {
                &[Param::Type, Param::Points]
            }
            ClaimId::Sl2WeylFreeness => &[Param::HighestWeight],
        }
    }

    pub fn optional(self) -> &'static [Param] {
        match self {
            ClaimId::FgLocalStructure | ClaimId::OperRoute | ClaimId::LambdaSeparation => &[Param::Rep, Param::Trunc],
            _ => &[],
        }
    }

    /// The statement the check certifies.
    pub fn statement(self) -> &'static str {
        match self {
            ClaimId::FgLocalStructure => {
                "FG connection: principal unipotent monodromy at 0, slope 1/h at infinity, adjoint irregularity = rank"
            }
            ClaimId::IrreducibilityAtInfinity => {
                "N + E is regular semisimple and the Coxeter element has no nonzero fixed vector"
            }
            ClaimId::OperRoute => {
                "canonical oper forms of the FG connection: regular singular with integral residue weight at 0, \
                 slope at most 1/h at infinity with ord v_l = -h-1"
            }
            ClaimId::LambdaSeparation => "the formal type at infinity determines lambda",
            ClaimId::HitchinGlobalLine => "Hit(P1) with the level structure at 0 and infinity is a line",
            ClaimId::HitchinIota => "principal parts at the points z identify the primed Hitchin space",
            ClaimId::HitchinDirectSum => "the regular singular Hitchin space is Hit(P1) plus the primed space",
            ClaimId::HitchinPsiBlocks => "restriction to the disks at z is block diagonal after correcting by iota",
            ClaimId::Sl2WeylFreeness => "V is a rank one free module over the image of the sl2 shift-of-argument algebra",
        }
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClaimId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ClaimId::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown claim {s:?}")))
    }
}

fn ser_opt_rational<S: Serializer>(q: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&fmt_rational(q)),
        None => s.serialize_none(),
    }
}

fn ser_rationals<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(fmt_rational))
}

fn de_opt_rational<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
    Option::<String>::deserialize(d)?.map(|s| parse_rational(&s).map_err(D::Error::custom)).transpose()
}

fn de_rationals<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
    Vec::<String>::deserialize(d)?.iter().map(|s| parse_rational(s).map_err(D::Error::custom)).collect()
}

/// Parameters of one job; which fields are read depends on the claim.
/// Rationals are written as strings such as `"-2/3"`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobParams {
    /// Type label such as `"G2"`.
    #[serde(rename = "type", default, skip_serializing_if = "Option::is_none")]
    pub type_label: Option<String>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        serialize_with = "ser_opt_rational",
        deserialize_with = "de_opt_rational"
    )]
    pub lambda: Option<Rational>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        serialize_with = "ser_opt_rational",
        deserialize_with = "de_opt_rational"
    )]
    pub lambda2: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rep: Option<RepKind>,
    #[serde(default, skip_serializing_if = "Vec::is_empty", serialize_with = "ser_rationals", deserialize_with = "de_rationals")]
    pub points: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub highest_weight: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trunc: Option<i64>,
}

impl JobParams {
    pub fn for_type(t: CartanType, rank: usize) -> Self {
        JobParams { type_label: Some(format!("{t}{rank}")), ..Default::default() }
    }

    fn has(&self, p: Param) -> bool {
        match p {
            Param::Type => self.type_label.is_some(),
            Param::Lambda => self.lambda.is_some(),
            Param::LambdaPair => self.lambda.is_some() && self.lambda2.is_some(),
            Param::Rep => self.rep.is_some(),
            Param::Points => !self.points.is_empty(),
            Param::HighestWeight => self.highest_weight.is_some(),
            Param::Trunc => self.trunc.is_some(),
        }
    }

    fn cartan(&self) -> Result<(CartanType, usize)> {
        parse_type_label(self.type_label.as_deref().unwrap_or_default())
    }
}

/// `"B2"` to `(B, 2)`, rejecting unsupported algebras.
pub fn parse_type_label(label: &str) -> Result<(CartanType, usize)> {
    let label = label.trim();
    let unsupported = || Error::UnsupportedAlgebra(label.to_string(), 0);
    let mut chars = label.chars();
    let head = chars.next().ok_or_else(unsupported)?;
    let rank: usize = chars.as_str().parse().map_err(|_| unsupported())?;
    let t: CartanType = head.to_string().parse().map_err(|_| Error::UnsupportedAlgebra(head.to_string(), rank))?;
    if !is_supported(t, rank) {
        return Err(Error::UnsupportedAlgebra(t.to_string(), rank));
    }
    Ok((t, rank))
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationJob {
    pub claim: ClaimId,
    #[serde(default)]
    pub params: JobParams,
    #[serde(default = "yes")]
    pub expected: bool,
}

impl VerificationJob {
    pub fn new(claim: ClaimId, params: JobParams) -> Self {
        VerificationJob { claim, params, expected: true }
    }

    /// Missing required parameters, or those the claim does not read.
    pub fn validate(&self) -> Result<()> {
        let known = |p: Param| self.claim.required().contains(&p) || self.claim.optional().contains(&p);
        if let Some(p) = self.claim.required().iter().find(|&&p| !self.params.has(p)) {
            return Err(Error::Invalid(format!("{} needs the parameter {p:?}", self.claim)));
        }
        let all = [
            Param::Type,
            Param::Lambda,
            Param::LambdaPair,
            Param::Rep,
            Param::Points,
            Param::HighestWeight,
            Param::Trunc,
        ];
        // a pair also sets `lambda`
        let extra = all.into_iter().find(|&p| {
            self.params.has(p) && !known(p) && !(p == Param::Lambda && known(Param::LambdaPair))
        });
        match extra {
            Some(p) => Err(Error::Invalid(format!("{} does not take the parameter {p:?}", self.claim))),
            None => Ok(()),
        }
    }

    fn sort_key(&self) -> (ClaimId, String) {
        (self.claim, serde_json::to_string(&self.params).expect("parameters serialize"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub claim: ClaimId,
    pub params: JobParams,
    pub statement: &'static str,
    /// Set when only the finite ingredients of an argument are checked.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scope: Option<&'static str>,
    pub expected: bool,
    pub pass: bool,
    pub witness: serde_json::Value,
    /// Readings of ambiguous formulas the check relied on.
    pub ledger_flags: Vec<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl VerificationReport {
    pub(crate) fn new(claim: ClaimId, params: JobParams, pass: bool, witness: serde_json::Value) -> Self {
        VerificationReport {
            schema: SCHEMA,
            claim,
            params,
            statement: claim.statement(),
            scope: None,
            expected: true,
            pass,
            witness,
            ledger_flags: Vec::new(),
            error: None,
        }
    }

    fn failed(job: &VerificationJob, err: &Error) -> Self {
        let mut r = Self::new(job.claim, job.params.clone(), false, serde_json::Value::Null);
        r.expected = job.expected;
        r.error = Some(err.to_string());
        r
    }

    /// The outcome matched the expectation and nothing errored.
    pub fn ok(&self) -> bool {
        self.error.is_none() && self.pass == self.expected
    }
}

fn dispatch(job: &VerificationJob) -> Result<VerificationReport> {
    job.validate()?;
    let p = &job.params;
    let lambda = || p.lambda.clone().expect("validated");
    let mut report = match job.claim {
        ClaimId::Sl2WeylFreeness => check_sl2_weyl_freeness(p.highest_weight.expect("validated"))?,
        claim => {
            let (t, r) = p.cartan()?;
            let rep = p.rep.unwrap_or(RepKind::smallest(t));
            match claim {
                ClaimId::FgLocalStructure => check_fg_local_structure(t, r, &lambda(), rep, p.trunc)?,
                ClaimId::IrreducibilityAtInfinity => check_irreducibility_at_infinity(t, r)?,
                ClaimId::OperRoute => check_oper_route(t, r, &lambda(), rep, p.trunc)?,
                ClaimId::LambdaSeparation => {
                    check_lambda_separation(t, r, &lambda(), p.lambda2.as_ref().expect("validated"), rep, p.trunc)?
                }
                ClaimId::HitchinGlobalLine => check_hitchin_global_line(t, r)?,
                ClaimId::HitchinIota => check_hitchin_iota(t, r, &p.points)?,
                ClaimId::HitchinDirectSum => check_hitchin_direct_sum(t, r, &p.points)?,
                ClaimId::HitchinPsiBlocks => check_hitchin_psi_blocks(t, r, &p.points)?,
                ClaimId::Sl2WeylFreeness => unreachable!(),
            }
        }
    };
    report.params = job.params.clone();
    report.expected = job.expected;
    Ok(report)
}

/// Runs one job; errors end up in the report.
pub fn run_job(job: &VerificationJob) -> VerificationReport {
    dispatch(job).unwrap_or_else(|e| VerificationReport::failed(job, &e))
}

/// Claim set and parameter grids of a suite run.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub claims: Vec<ClaimId>,
    /// Type labels such as `"A2"`; unsupported labels give error reports.
    pub types: Vec<String>,
    pub lambdas: Vec<Rational>,
    /// `None` picks the smallest available representation per type.
    pub rep: Option<RepKind>,
    /// Point sets for the Hitchin claims.
    pub point_sets: Vec<Vec<Rational>>,
    pub highest_weights: Vec<u32>,
    pub trunc: Option<i64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            claims: ClaimId::ALL.to_vec(),
            types: ["A1", "A2", "A3", "B2", "C2", "G2"].map(String::from).to_vec(),
            lambdas: vec![int(1), int(2), rat(1, 3)],
            rep: None,
            point_sets: vec![vec![int(1)], vec![rat(1, 2), int(-3), int(2)]],
            highest_weights: (0..=SL2_MAX_WEIGHT).collect(),
            trunc: None,
        }
    }
}

impl SuiteConfig {
    /// The job list, one per claim and grid point.
    pub fn jobs(&self) -> Vec<VerificationJob> {
        let mut jobs = Vec::new();
        for &claim in &self.claims {
            if claim == ClaimId::Sl2WeylFreeness {
                for &n in &self.highest_weights {
                    let params = JobParams { highest_weight: Some(n), ..Default::default() };
                    jobs.push(VerificationJob::new(claim, params));
                }
                continue;
            }
            for label in &self.types {
                let base = JobParams { type_label: Some(label.clone()), ..Default::default() };
                let local = JobParams { rep: self.rep, trunc: self.trunc, ..base.clone() };
                match claim {
                    ClaimId::FgLocalStructure | ClaimId::OperRoute => {
                        for l in &self.lambdas {
                            let params = JobParams { lambda: Some(l.clone()), ..local.clone() };
                            jobs.push(VerificationJob::new(claim, params));
                        }
                    }
                    ClaimId::LambdaSeparation => {
                        for (i, a) in self.lambdas.iter().enumerate() {
                            for b in &self.lambdas[i..] {
                                let params =
                                    JobParams { lambda: Some(a.clone()), lambda2: Some(b.clone()), ..local.clone() };
                                jobs.push(VerificationJob::new(claim, params));
                            }
                        }
                    }
                    ClaimId::HitchinIota | ClaimId::HitchinDirectSum | ClaimId::HitchinPsiBlocks => {
                        for zs in &self.point_sets {
                            let params = JobParams { points: zs.clone(), ..base.clone() };
                            jobs.push(VerificationJob::new(claim, params));
                        }
                    }
                    _ => jobs.push(VerificationJob::new(claim, base.clone())),
                }
            }
        }
        jobs
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub schema: u32,
    pub pass: bool,
    pub reports: Vec<VerificationReport>,
}

/// Runs the given jobs concurrently and returns the reports sorted by claim,
/// then parameters.
pub fn run_jobs(jobs: &[VerificationJob]) -> SuiteResult {
    let mut order: Vec<&VerificationJob> = jobs.iter().collect();
    order.sort_by_cached_key(|j| j.sort_key());
    let reports: Vec<VerificationReport> = order.par_iter().map(|j| run_job(j)).collect();
    SuiteResult { schema: SCHEMA, pass: reports.iter().all(VerificationReport::ok), reports }
}

pub fn run_suite(config: &SuiteConfig) -> SuiteResult {
    run_jobs(&config.jobs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn claim_names_round_trip() {
        for c in ClaimId::ALL {
            assert_eq!(c.name().parse::<ClaimId>().unwrap(), c);
            assert_eq!(serde_json::to_value(c).unwrap(), serde_json::json!(c.name()));
            assert!(!c.required().is_empty());
        }
        assert!("nope".parse::<ClaimId>().is_err());
    }

    #[test]
    fn jobs_from_json() {
        let job: VerificationJob =
            serde_json::from_str(r#"{"claim":"oper_route","params":{"type":"A1","lambda":"-2/3"}}"#).unwrap();
        assert!(job.expected);
        assert_eq!(job.params.lambda, Some(rat(-2, 3)));
        let back: VerificationJob = serde_json::from_value(serde_json::to_value(&job).unwrap()).unwrap();
        assert_eq!(back, job);
        assert!(serde_json::from_str::<VerificationJob>(r#"{"claim":"oper_route","params":{"typo":1}}"#).is_err());
    }

    #[test]
    fn type_labels() {
        assert_eq!(parse_type_label("G2").unwrap(), (CartanType::G, 2));
        assert!(parse_type_label("E8").is_err());
        assert!(parse_type_label("G3").is_err());
        assert!(parse_type_label("").is_err());
    }

    #[test]
    fn parameter_schema() {
        let mut job = VerificationJob::new(ClaimId::OperRoute, JobParams::for_type(CartanType::A, 1));
        assert!(job.validate().is_err());
        job.params.lambda = Some(int(1));
        assert!(job.validate().is_ok());
        job.params.highest_weight = Some(3);
        assert!(job.validate().is_err());
        let report = run_job(&job);
        assert!(!report.pass && report.error.is_some());
    }

    #[test]
    fn empty_and_unsupported() {
        let empty = SuiteConfig { claims: vec![], ..Default::default() };
        assert!(run_suite(&empty).reports.is_empty());
        let cfg = SuiteConfig {
            claims: vec![ClaimId::IrreducibilityAtInfinity],
            types: vec!["A1".into(), "E8".into(), "B2".into()],
            ..Default::default()
        };
        let out = run_suite(&cfg);
        assert_eq!(out.reports.len(), 3);
        let errs: Vec<_> = out.reports.iter().filter(|r| r.error.is_some()).collect();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].params.type_label.as_deref(), Some("E8"));
        assert!(out.reports.iter().filter(|r| r.error.is_none()).all(|r| r.pass));
        assert!(!out.pass);
    }
}
