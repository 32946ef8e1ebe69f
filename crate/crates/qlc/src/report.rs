//! Verification suites, check records and report documents.
//!
//! Suites run in parallel on a rayon pool sized by `QLC_WORKERS`; the
//! report is assembled in check-id order, so two runs with the same
//! configuration and timings disabled give byte-identical documents.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::appendices::{chi_as_fke, fke_functional, rosso_vs_dual_metric, star_lc_solution_space};
use crate::calculus::{
    build_calculus, check_sigma_minpoly, eta_braiding, eta_certification_defects, intertwiner_test, mor_space,
    morphism_basis, standard_duality_defects, v_word, vv_word, CalculusData,
};
use crate::functional::multiplicativity_check;
use crate::group::{yang_baxter_defect, GroupSpec, Series, Sign};
use crate::levi_civita::{
    classical_limit_connection, compare_with_printed, curvature, dual_connection, solve_levi_civita, QuotientSpec,
};
use crate::metric::{
    build_metric, check_invariance_and_ad_invariance, check_symmetric, classical_metric_limit, family_span,
    printed_dual, sl_trace_form, subspace_report, MetricParams,
};
use crate::scalar::{Scalar, ScalarContext};
use crate::tensor::Tensor;

pub const REPORT_VERSION: &str = "1.0";

/// Environment variable holding the worker count.
pub const WORKERS_ENV: &str = "QLC_WORKERS";

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// An independently runnable group of checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Sigma,
    Mor,
    Metric,
    Lc,
    Classical,
    Rosso,
    Starb,
}

impl Suite {
    pub const ALL: [Suite; 7] =
        [Suite::Sigma, Suite::Mor, Suite::Metric, Suite::Lc, Suite::Classical, Suite::Rosso, Suite::Starb];

    /// Suites whose checks depend on the metric parameters.
    fn uses_metric(self) -> bool {
        matches!(self, Suite::Metric | Suite::Lc | Suite::Starb)
    }
}

/// Parses a comma-separated suite list; `all` selects every suite.
pub fn parse_suites(text: &str) -> Result<Vec<Suite>, ReportError> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim) {
        let s = match part {
            "all" => {
                out.extend(Suite::ALL);
                continue;
            }
            "sigma" => Suite::Sigma,
            "mor" => Suite::Mor,
            "metric" => Suite::Metric,
            "lc" => Suite::Lc,
            "classical" => Suite::Classical,
            "rosso" => Suite::Rosso,
            "starb" => Suite::Starb,
            _ => return Err(ReportError::Config(format!("unknown suite `{part}`"))),
        };
        out.push(s);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricMode {
    Symbolic,
    Sample,
}

impl FromStr for MetricMode {
    type Err = ReportError;
    fn from_str(s: &str) -> Result<MetricMode, ReportError> {
        match s {
            "symbolic" => Ok(MetricMode::Symbolic),
            "sample" => Ok(MetricMode::Sample),
            _ => Err(ReportError::Config(format!("unknown metric mode `{s}`"))),
        }
    }
}

/// One `var=rational` assignment of a metric parameter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Assignment {
    pub var: String,
    pub value: String,
}

impl FromStr for Assignment {
    type Err = ReportError;
    fn from_str(s: &str) -> Result<Assignment, ReportError> {
        let (var, value) =
            s.split_once('=').ok_or_else(|| ReportError::Config(format!("expected var=rational, got `{s}`")))?;
        let (var, value) = (var.trim().to_string(), value.trim().to_string());
        if !["alpha", "beta", "gamma"].contains(&var.as_str()) {
            return Err(ReportError::Config(format!("only alpha, beta, gamma can be assigned, got `{var}`")));
        }
        BigRational::from_str(&value).map_err(|e| ReportError::Config(format!("`{value}`: {e}")))?;
        Ok(Assignment { var, value })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub spec: GroupSpec,
    pub metric: MetricMode,
    pub assign: Vec<Assignment>,
    pub suites: Vec<Suite>,
    /// Number of generic assignments in sample mode.
    pub samples: usize,
    pub seed: u64,
    /// Record wall-clock runtimes; off gives byte-identical reports.
    pub timings: bool,
}

impl RunConfig {
    pub fn new(spec: GroupSpec) -> RunConfig {
        RunConfig {
            spec,
            metric: MetricMode::Symbolic,
            assign: Vec::new(),
            suites: Suite::ALL.to_vec(),
            samples: 3,
            seed: 2024,
            timings: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Error,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub status: CheckStatus,
    pub anchor: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub runtime_ms: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: String,
    pub config: Option<RunConfig>,
    pub checks: Vec<CheckResult>,
    pub summary: Summary,
    /// Supporting data such as the λ table or the Rosso comparison.
    pub sections: BTreeMap<String, Value>,
}

/// Stable anchors: the statement each kind of check verifies.
const ANCHORS: &[(&str, &str)] = &[
    ("sigma.minpoly", "minimal polynomial of the braiding σ: cubic (SL), degree 7 (O/Sp)"),
    ("rhat.yang_baxter", "R̂ satisfies the braid relation R̂₁₂R̂₂₃R̂₁₂ = R̂₂₃R̂₁₂R̂₂₃"),
    ("eta.certify", "χ_ij = Σ c_n f^{nn}_ij − c_i δ_ij ε for the bi-invariant η"),
    ("eta.braiding", "σ(x⊗η) = η⊗x for the bi-invariant element η"),
    ("duality.standard_bases", "the bases {X_ij} and {ω_ij} are dual"),
    ("functional.multiplicativity", "functionals act on corepresentations through the coproduct"),
    ("mor.vv_to_1", "dim Mor(u^c⊗u⊗u^c⊗u,1)=2 (SL), 3 (O/Sp)"),
    ("mor.v_to_vv", "dim BC(Γ)=5 for N=2, 6 for N≥3 (SL); dim BC(Γ±)=15 (O), 14 for Sp_q(4)"),
    ("mor.basis_intertwines", "the explicit maps A_k belong to Mor(u^c⊗u, (u^c⊗u)^{⊗2})"),
    ("metric.nondegenerate", "nondegeneracy conditions of the invariant metric family"),
    ("metric.family_span", "the invariant metrics on Γ form the displayed two (SL) or three (O/Sp) parameter family"),
    ("metric.symmetric", "Any invariant metric on Γ is symmetric"),
    ("metric.invariant", "g is an invariant metric: g ∈ Mor(v⊗v, 1)"),
    ("metric.dual_invariant", "g* is ad-invariant: g* ∈ Mor(1, v⊗v)"),
    ("metric.dual_closed_form", "the dual metric g* is given by the displayed closed form"),
    ("metric.restriction", "restrictions of g and g* to the invariant subspaces"),
    ("lc.unique", "admits a unique solution: the Levi-Civita connection exists and is unique"),
    ("lc.dual_torsion", "dual connection: vanishing torsion reformulated on the quantum Lie algebra"),
    ("lc.dual_compat", "dual connection: metric compatibility reformulated with g*"),
    ("lc.curvature_intertwines", "the curvature of a bicovariant connection is a bicovariant map"),
    ("lc.printed", "the displayed coefficients of the Levi-Civita connection"),
    ("classical.limit_exists", "the classical limits of the Levi-Civita connections exist"),
    ("classical.metric_trace_form", "the classical limit of g* on Y¹ is the trace form of sl(N)"),
    ("classical.display", "displayed classical limit ∇^cl of the Levi-Civita connection"),
    ("rosso.table_closed_form", "(χ_ij,χ_kl) takes the following form on the generators"),
    ("rosso.gstar", "precisely the dual metric g* for the parameter values α=−qQ⁻¹, β=−q^{2N+2}"),
    ("rosso.realization", "χ_ij can be expressed in terms of the elements E_ij, F_ji, K_i and K̃_i"),
    ("starb.metric_equation", "The compatibility with the metric g gives only one equation"),
    ("starb.torsion_equations", "Qλ₃=Qλ₄=qλ₅−(Q²+1)λ₆+Q"),
    ("starb.family_dim", "there is a three parameter family of Levi-Civita connections"),
    ("starb.nabla_eta", "∇(η) for the bi-invariant element η ∈ Γ"),
    ("starb.not_unique", "even if we require ∇(η)=λη⊗η we do not get a unique Levi-Civita connection"),
];

/// The anchor of a check kind, matching the longest registered prefix.
pub fn anchor(kind: &str) -> Option<&'static str> {
    ANCHORS
        .iter()
        .filter(|(k, _)| kind == *k || kind.starts_with(&format!("{k}.")))
        .max_by_key(|(k, _)| k.len())
        .map(|(_, a)| *a)
}

/// Outcome of one check before it is stamped with id, anchor and time.
#[derive(Clone, Debug)]
enum Outcome {
    Pass,
    Fail(String),
    Error(String),
    Skipped(String),
}

impl Outcome {
    fn check(ok: bool, witness: impl FnOnce() -> String) -> Outcome {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail(witness())
        }
    }

    fn zero(t: &Tensor, names: &ScalarContext) -> Outcome {
        match t.first_nonzero() {
            None => Outcome::Pass,
            Some((r, c, v)) => Outcome::Fail(format!("entry ({r}, {c}) = {}", names.render(&v))),
        }
    }

    fn equal(a: &Tensor, b: &Tensor, names: &ScalarContext) -> Outcome {
        match a.sub(b) {
            Ok(d) => Outcome::zero(&d, names),
            Err(e) => Outcome::Error(e.to_string()),
        }
    }
}

struct Recorder {
    prefix: String,
    timings: bool,
    checks: Vec<CheckResult>,
    sections: Vec<(String, Value)>,
}

impl Recorder {
    fn new(spec: &GroupSpec, timings: bool) -> Recorder {
        Recorder { prefix: spec.id(), timings, checks: Vec::new(), sections: Vec::new() }
    }

    fn run(&mut self, kind: &str, f: impl FnOnce() -> Outcome) {
        let t = Instant::now();
        let out = f();
        let ms = if self.timings { t.elapsed().as_millis() as u64 } else { 0 };
        self.push(kind, out, ms);
    }

    fn push(&mut self, kind: &str, out: Outcome, runtime_ms: u64) {
        let (status, witness) = match out {
            Outcome::Pass => (CheckStatus::Pass, None),
            Outcome::Fail(w) => (CheckStatus::Fail, Some(w)),
            Outcome::Error(w) => (CheckStatus::Error, Some(w)),
            Outcome::Skipped(w) => (CheckStatus::Skipped, Some(w)),
        };
        let anchor = anchor(kind).unwrap_or("unregistered").to_string();
        self.checks.push(CheckResult { id: format!("{}.{kind}", self.prefix), status, anchor, witness, runtime_ms });
    }

    fn section(&mut self, name: &str, v: Value) {
        self.sections.push((name.to_string(), v));
    }
}

fn slug(s: &str) -> String {
    let mut out = String::new();
    for c in s.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c.to_ascii_lowercase());
        } else if !out.ends_with('_') {
            out.push('_');
        }
    }
    out.trim_matches('_').to_string()
}

struct Ctx {
    calc: CalculusData,
    names: ScalarContext,
    timings: bool,
    seed: u64,
}

fn sigma_suite(ctx: &Ctx, rec: &mut Recorder) {
    let calc = &ctx.calc;
    rec.run("sigma.minpoly", || {
        let bad = check_sigma_minpoly(calc);
        Outcome::check(bad.is_empty(), || bad.join("; "))
    });
    rec.run("rhat.yang_baxter", || Outcome::zero(&yang_baxter_defect(&calc.group), &ctx.names));
    rec.run("eta.certify", || {
        let bad = eta_certification_defects(calc);
        Outcome::check(bad.is_empty(), || format!("χ_ij differs at (i, j) = {:?}", bad[0]))
    });
    rec.run("eta.braiding", || Outcome::check(eta_braiding(calc).0, || "σ(x⊗η) ≠ η⊗x".into()));
    rec.run("duality.standard_bases", || match standard_duality_defects(calc) {
        Ok(bad) => Outcome::check(bad.is_empty(), || format!("X_ab(uⁿ_m) ≠ δ at (a, b, n, m) = {:?}", bad[0])),
        Err(e) => Outcome::Error(e.to_string()),
    });
    rec.run("functional.multiplicativity", || {
        let bad = multiplicativity_check(&calc.ev, 100, ctx.seed);
        Outcome::check(bad.is_empty(), || {
            let b = &bad[0];
            format!("trial {} on {:?}: entry {:?}", b.trial, b.word, b.entry)
        })
    });
}

fn expected_bc(spec: &GroupSpec) -> Option<usize> {
    match spec.series {
        Series::SL => Some(if spec.n == 2 { 5 } else { 6 }),
        Series::O => Some(15),
        Series::Sp => (spec.n == 4).then_some(14),
    }
}

fn mor_suite(ctx: &Ctx, rec: &mut Recorder) {
    let calc = &ctx.calc;
    let spec = calc.spec;
    let d1 = mor_space(calc, &vv_word(), &[]).dim();
    let want1 = if spec.series == Series::SL { 2 } else { 3 };
    rec.run("mor.vv_to_1", || Outcome::check(d1 == want1, || format!("dim = {d1}, expected {want1}")));
    let d2 = mor_space(calc, &v_word(), &vv_word()).dim();
    rec.run("mor.v_to_vv", || match expected_bc(&spec) {
        Some(w) => Outcome::check(d2 == w, || format!("dim = {d2}, expected {w}")),
        None => Outcome::Skipped(format!("dim = {d2}; no stated value for this N")),
    });
    rec.run("mor.basis_intertwines", || {
        for (k, a) in morphism_basis(calc).iter().enumerate() {
            match intertwiner_test(calc, a, &v_word(), &vv_word()) {
                Ok(true) => {}
                Ok(false) => return Outcome::Fail(format!("A_{} is not an intertwiner", k + 1)),
                Err(e) => return Outcome::Error(e.to_string()),
            }
        }
        Outcome::Pass
    });
    rec.section("mor", json!({ "dim Mor(v⊗v,1)": d1, "dim Mor(v,v⊗v)": d2 }));
}

fn metric_suite(ctx: &Ctx, p: &MetricParams, rec: &mut Recorder) {
    let calc = &ctx.calc;
    let g = &calc.group;
    if let Err(e) = p.check(g) {
        rec.run("metric.nondegenerate", || Outcome::Fail(e.to_string()));
        return;
    }
    rec.run("metric.nondegenerate", || Outcome::Pass);
    rec.run("metric.family_span", || match family_span(calc) {
        Ok((d, rf, rb)) => Outcome::check(d == rf && rf == rb, || format!("dim Mor {d}, family rank {rf}, joint rank {rb}")),
        Err(e) => Outcome::Error(e.to_string()),
    });
    let pair = match build_metric(g, p) {
        Ok(x) => x,
        Err(e) => {
            rec.run("metric.dual_closed_form", || Outcome::Error(e.to_string()));
            return;
        }
    };
    rec.run("metric.symmetric", || Outcome::check(check_symmetric(&pair.g, &calc.sigma), || "g∘σ ≠ g".into()));
    match check_invariance_and_ad_invariance(calc, &pair) {
        Ok((gi, ga)) => {
            rec.run("metric.invariant", || Outcome::check(gi, || "g ∉ Mor(v⊗v, 1)".into()));
            rec.run("metric.dual_invariant", || Outcome::check(ga, || "g* ∉ Mor(1, v⊗v)".into()));
        }
        Err(e) => rec.run("metric.invariant", || Outcome::Error(e.to_string())),
    }
    rec.run("metric.dual_closed_form", || match printed_dual(g, p) {
        Ok(pd) => Outcome::equal(&pair.gstar, &pd, &ctx.names),
        Err(e) => Outcome::Error(e.to_string()),
    });
    match subspace_report(calc, &pair, p) {
        Ok(list) => {
            for r in list {
                rec.run(&format!("metric.restriction.{}", slug(&r.name)), || {
                    Outcome::check(r.holds, || format!("{} does not hold", r.name))
                });
            }
        }
        Err(e) => rec.run("metric.restriction", || Outcome::Error(e.to_string())),
    }
}

fn lc_suite(ctx: &Ctx, p: &MetricParams, rec: &mut Recorder) {
    let calc = &ctx.calc;
    let g = &calc.group;
    let names = &ctx.names;
    let pair = match build_metric(g, p) {
        Ok(x) => x,
        Err(e) => {
            rec.run("lc.unique", || Outcome::Error(e.to_string()));
            return;
        }
    };
    let t = Instant::now();
    let solved = solve_levi_civita(calc, &pair);
    let ms = if ctx.timings { t.elapsed().as_millis() as u64 } else { 0 };
    let sol = match solved {
        Ok(s) => {
            rec.push("lc.unique", Outcome::Pass, ms);
            s
        }
        Err(e) => {
            rec.push("lc.unique", Outcome::Fail(e.to_string()), ms);
            return;
        }
    };
    let dual = dual_connection(&sol.conn, &pair, calc);
    rec.run("lc.dual_torsion", || Outcome::check(dual.torsion_holds, || "dual torsion defect nonzero".into()));
    rec.run("lc.dual_compat", || Outcome::check(dual.compat_holds, || "dual compatibility defect nonzero".into()));
    rec.run("lc.curvature_intertwines", || {
        let quot = QuotientSpec::of(calc);
        match curvature(&sol.conn, calc, &quot) {
            Ok(r) => {
                let vvv = [vv_word(), v_word()].concat();
                match intertwiner_test(calc, &r.image, &v_word(), &vvv) {
                    Ok(ok) => Outcome::check(ok, || "curvature image is not an intertwiner".into()),
                    Err(e) => Outcome::Error(e.to_string()),
                }
            }
            Err(e) => Outcome::Error(e.to_string()),
        }
    });
    let lam: Vec<String> = sol.conn.lambda.iter().flatten().map(|x| names.render(x)).collect();
    rec.section(
        "lambda",
        json!({ "values": lam, "gauge_dim": sol.gauge_dim, "equations": sol.equations }),
    );
    match compare_with_printed(calc, p, &sol) {
        Ok(rep) => {
            let outcome = if g.spec.series == Series::SL {
                // Every term of the theorem display must match under some reading.
                let readings: Vec<_> = rep.displays.iter().filter(|d| d.display == "theorem").collect();
                let nterms = readings.first().map_or(0, |d| d.terms.len());
                let unmatched: Vec<String> = (0..nterms)
                    .filter(|&k| !readings.iter().any(|d| d.terms[k].matched))
                    .map(|k| readings[0].terms[k].term.clone())
                    .collect();
                Outcome::check(!readings.is_empty() && unmatched.is_empty(), || format!("unmatched terms: {unmatched:?}"))
            } else {
                let bad: Vec<String> = rep
                    .displays
                    .iter()
                    .filter(|d| !d.matched)
                    .map(|d| format!("{} [{}]", d.display, d.reading))
                    .collect();
                Outcome::check(bad.is_empty(), || format!("unmatched displays: {bad:?}"))
            };
            rec.run("lc.printed", || outcome);
            let displays: Vec<Value> = rep
                .displays
                .iter()
                .map(|d| {
                    let terms: Vec<Value> = d
                        .terms
                        .iter()
                        .map(|t| {
                            json!({
                                "term": t.term,
                                "printed": names.render(&t.printed),
                                "solved": t.solved.as_ref().map(|x| names.render(x)),
                                "matched": t.matched,
                            })
                        })
                        .collect();
                    json!({ "display": d.display, "reading": d.reading, "matched": d.matched, "terms": terms })
                })
                .collect();
            let systems: Vec<Value> =
                rep.systems.iter().map(|(s, r, ok)| json!({ "system": s, "reading": r, "matched": ok })).collect();
            rec.section("lc-displays", json!({ "displays": displays, "systems": systems }));
        }
        Err(e) => rec.run("lc.printed", || Outcome::Error(e.to_string())),
    }
}

fn classical_suite(ctx: &Ctx, rec: &mut Recorder) {
    let calc = &ctx.calc;
    let names = &ctx.names;
    if calc.group.spec.series == Series::SL {
        rec.run("classical.metric_trace_form", || match classical_metric_limit(calc) {
            Ok(lim) => Outcome::equal(&lim[1], &sl_trace_form(calc.n()), names),
            Err(e) => Outcome::Error(e.to_string()),
        });
    }
    if calc.spec.series != Series::SL && calc.spec.sign == Sign::Minus {
        // z = −1 has no classical limit of the calculus; the displays are stated for Γ₊.
        rec.run("classical.limit_exists", || Outcome::Skipped("stated for Γ₊ only".into()));
        return;
    }
    let t = Instant::now();
    let lim = classical_limit_connection(calc);
    let ms = if ctx.timings { t.elapsed().as_millis() as u64 } else { 0 };
    let lim = match lim {
        Ok(l) => {
            rec.push("classical.limit_exists", Outcome::Pass, ms);
            l
        }
        Err(e) => {
            rec.push("classical.limit_exists", Outcome::Fail(e.to_string()), ms);
            return;
        }
    };
    let mut terms = Vec::new();
    for d in &lim.displays {
        let kind = format!("classical.display.{}", slug(&d.display));
        {
            let bad: Vec<String> = d
                .terms
                .iter()
                .filter(|t| !t.matched)
                .map(|t| {
                    let solved = t.solved.as_ref().map_or("undetermined".to_string(), |x| names.render(x));
                    format!("{}: printed {}, solved {}", t.term, names.render(&t.printed), solved)
                })
                .collect();
            rec.run(&kind, || Outcome::check(d.matched && bad.is_empty(), || bad.join("; ")));
        }
        for t in &d.terms {
            terms.push(json!({
                "display": d.display,
                "term": t.term,
                "printed": names.render(&t.printed),
                "solved": t.solved.as_ref().map(|x| names.render(x)),
                "matched": t.matched,
            }));
        }
    }
    rec.section("classical", Value::Array(terms));
}

fn rosso_suite(ctx: &Ctx, rec: &mut Recorder) {
    let calc = &ctx.calc;
    let spec = calc.spec;
    if spec.series != Series::SL || spec.sign != Sign::Plus {
        for k in ["rosso.table_closed_form", "rosso.gstar", "rosso.realization"] {
            rec.run(k, || Outcome::Skipped("the Rosso form is computed for SL with Γ₊".into()));
        }
        return;
    }
    match rosso_vs_dual_metric(spec.n) {
        Ok(rep) => {
            rec.run("rosso.table_closed_form", || Outcome::check(rep.matches_printed, || "table differs".into()));
            rec.run("rosso.gstar", || Outcome::check(rep.matches_gstar && rep.matches_printed_dual, || "g* differs".into()));
            rec.section(
                "rosso",
                json!({
                    "symmetric_reading_matches": rep.matches_printed,
                    "literal_reading_matches": rep.matches_literal,
                    "gstar_matches": rep.matches_gstar,
                    "printed_dual_matches": rep.matches_printed_dual,
                }),
            );
        }
        Err(e) => rec.run("rosso.table_closed_form", || Outcome::Error(e.to_string())),
    }
    rec.run("rosso.realization", || {
        let q = &calc.group.q;
        for word in [v_word(), vv_word()] {
            let direct = calc.chi(&word);
            for (ij, w) in chi_as_fke(spec.n, q).iter().enumerate() {
                let f = match fke_functional(w, q) {
                    Ok(f) => f,
                    Err(e) => return Outcome::Error(e.to_string()),
                };
                if calc.ev.eval_word(&f, &word) != direct[ij] {
                    return Outcome::Fail(format!("χ_({},{}) on word of length {}", ij / spec.n + 1, ij % spec.n + 1, word.len()));
                }
            }
        }
        Outcome::Pass
    });
}

fn starb_suite(ctx: &Ctx, p: &MetricParams, rec: &mut Recorder) {
    let calc = &ctx.calc;
    let kinds = ["starb.metric_equation", "starb.torsion_equations", "starb.family_dim", "starb.nabla_eta", "starb.not_unique"];
    if calc.spec.series != Series::SL || calc.spec.sign != Sign::Plus {
        for k in kinds {
            rec.run(k, || Outcome::Skipped("the *-calculus system is stated for SL with Γ₊".into()));
        }
        return;
    }
    match star_lc_solution_space(calc, p) {
        Ok(sp) => {
            rec.run(kinds[0], || Outcome::check(sp.metric_matches_printed, || format!("metric block rank {}", sp.metric_rank)));
            rec.run(kinds[1], || Outcome::check(sp.torsion_matches_printed, || "torsion rows differ".into()));
            rec.run(kinds[2], || Outcome::check(sp.affine_dim == Some(3), || format!("affine dimension {:?}", sp.affine_dim)));
            rec.run(kinds[3], || Outcome::check(sp.nabla_eta_matches, || "A_k η differs from the display".into()));
            rec.run(kinds[4], || {
                Outcome::check(sp.eta_restricted_dim.is_some_and(|d| d >= 1), || format!("dimension {:?}", sp.eta_restricted_dim))
            });
            rec.section(
                "star-calculus",
                json!({
                    "affine_dim": sp.affine_dim,
                    "metric_rank": sp.metric_rank,
                    "eta_restricted_dim": sp.eta_restricted_dim,
                    "contains_braided_solution": sp.contains_braided_solution,
                }),
            );
        }
        Err(e) => rec.run(kinds[2], || Outcome::Error(e.to_string())),
    }
}

fn to_scalar(v: &str) -> Scalar {
    Scalar::from_rational(&BigRational::from_str(v).expect("validated"))
}

fn random_rational(rng: &mut ChaCha8Rng) -> Scalar {
    let mut num = 0;
    while num == 0 {
        num = rng.gen_range(-40i64..=40);
    }
    Scalar::ratio(num, rng.gen_range(1i64..=17))
}

/// The metric parameter sets of a run: one symbolic (with assignments
/// substituted) or `samples` generic rational ones. The first sample takes
/// the assigned values; all others are drawn from the seeded generator.
pub fn metric_parameter_sets(config: &RunConfig, calc: &CalculusData) -> Result<Vec<MetricParams>, ReportError> {
    let series = config.spec.series;
    let mut base = MetricParams::symbolic(series);
    for a in &config.assign {
        let v = to_scalar(&a.value);
        match a.var.as_str() {
            "alpha" => base.alpha = v,
            "beta" => base.beta = v,
            _ if series == Series::SL => return Err(ReportError::Config("gamma is not a parameter for SL".into())),
            _ => base.gamma = Some(v),
        }
    }
    let sets = match config.metric {
        MetricMode::Symbolic => vec![base],
        MetricMode::Sample => {
            if config.samples == 0 {
                return Err(ReportError::Config("sample mode needs at least one sample".into()));
            }
            let assigned = |v: &str| config.assign.iter().any(|a| a.var == v);
            let free = ["alpha", "beta", "gamma"].iter().filter(|v| series != Series::SL || **v != "gamma").any(|v| !assigned(v));
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let mut out = Vec::new();
            for k in 0..config.samples {
                let mut found = None;
                for _ in 0..100 {
                    let mut p = base.clone();
                    if k > 0 || !assigned("alpha") {
                        p.alpha = random_rational(&mut rng);
                    }
                    if k > 0 || !assigned("beta") {
                        p.beta = random_rational(&mut rng);
                    }
                    if series != Series::SL && (k > 0 || !assigned("gamma")) {
                        p.gamma = Some(random_rational(&mut rng));
                    }
                    if p.check(&calc.group).is_ok() {
                        found = Some(p);
                        break;
                    }
                    if k == 0 && !free {
                        return Err(ReportError::Config("the assigned parameters are degenerate".into()));
                    }
                }
                out.push(found.ok_or_else(|| ReportError::Config("no nondegenerate sample found".into()))?);
            }
            out
        }
    };
    if config.metric == MetricMode::Symbolic {
        sets[0].check(&calc.group).map_err(|e| ReportError::Config(e.to_string()))?;
    }
    Ok(sets)
}

/// Folds the per-sample results of one suite: a check passes only if it
/// passes on every sample.
fn merge_samples(runs: Vec<Recorder>) -> (Vec<CheckResult>, Vec<(String, Value)>) {
    let mut merged: BTreeMap<String, CheckResult> = BTreeMap::new();
    let mut sections = Vec::new();
    let several = runs.len() > 1;
    for (k, rec) in runs.into_iter().enumerate() {
        if k == 0 {
            sections = rec.sections;
        }
        for c in rec.checks {
            let tag = |w: Option<String>| if several { w.map(|w| format!("sample {}: {w}", k + 1)) } else { w };
            match merged.get_mut(&c.id) {
                None => {
                    let mut c = c;
                    if c.status != CheckStatus::Pass {
                        c.witness = tag(c.witness);
                    }
                    merged.insert(c.id.clone(), c);
                }
                Some(m) => {
                    m.runtime_ms += c.runtime_ms;
                    let rank = |s: CheckStatus| match s {
                        CheckStatus::Error => 3,
                        CheckStatus::Fail => 2,
                        CheckStatus::Pass => 1,
                        CheckStatus::Skipped => 0,
                    };
                    if rank(c.status) > rank(m.status) {
                        m.status = c.status;
                        m.witness = tag(c.witness);
                    }
                }
            }
        }
    }
    (merged.into_values().collect(), sections)
}

fn worker_count() -> usize {
    std::env::var(WORKERS_ENV).ok().and_then(|v| v.parse().ok()).unwrap_or(0)
}

fn run_suite(ctx: &Ctx, suite: Suite, params: &[MetricParams]) -> (Vec<CheckResult>, Vec<(String, Value)>) {
    let spec = ctx.calc.spec;
    let sets: Vec<Option<&MetricParams>> =
        if suite.uses_metric() { params.iter().map(Some).collect() } else { vec![None] };
    let runs: Vec<Recorder> = sets
        .par_iter()
        .map(|p| {
            let mut rec = Recorder::new(&spec, ctx.timings);
            match (suite, p) {
                (Suite::Sigma, _) => sigma_suite(ctx, &mut rec),
                (Suite::Mor, _) => mor_suite(ctx, &mut rec),
                (Suite::Classical, _) => classical_suite(ctx, &mut rec),
                (Suite::Rosso, _) => rosso_suite(ctx, &mut rec),
                (Suite::Metric, Some(p)) => metric_suite(ctx, p, &mut rec),
                (Suite::Lc, Some(p)) => lc_suite(ctx, p, &mut rec),
                (Suite::Starb, Some(p)) => starb_suite(ctx, p, &mut rec),
                (_, None) => unreachable!("metric suites always get parameters"),
            }
            rec
        })
        .collect();
    merge_samples(runs)
}

/// Runs the selected suites and assembles the report.
pub fn run(config: &RunConfig) -> Result<Report, ReportError> {
    if config.suites.is_empty() {
        return Err(ReportError::Config("no suites selected".into()));
    }
    let calc = build_calculus(config.spec).map_err(|e| ReportError::Internal(e.to_string()))?;
    let params = metric_parameter_sets(config, &calc)?;
    let ctx = Ctx { calc, names: ScalarContext::standard(), timings: config.timings, seed: config.seed };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count())
        .build()
        .map_err(|e| ReportError::Internal(e.to_string()))?;
    let outs: Vec<(Vec<CheckResult>, Vec<(String, Value)>)> =
        pool.install(|| config.suites.par_iter().map(|&s| run_suite(&ctx, s, &params)).collect());
    let mut checks = Vec::new();
    let mut sections = BTreeMap::new();
    for (c, s) in outs {
        checks.extend(c);
        sections.extend(s);
    }
    if config.metric == MetricMode::Sample {
        let shown: Vec<Value> = params
            .iter()
            .map(|p| {
                json!({
                    "alpha": ctx.names.render(&p.alpha),
                    "beta": ctx.names.render(&p.beta),
                    "gamma": p.gamma.as_ref().map(|g| ctx.names.render(g)),
                })
            })
            .collect();
        sections.insert("samples".into(), Value::Array(shown));
    }
    Ok(Report::assemble(Some(config.clone()), checks, sections))
}

impl Report {
    /// Orders checks by id and computes the summary.
    pub fn assemble(config: Option<RunConfig>, mut checks: Vec<CheckResult>, sections: BTreeMap<String, Value>) -> Report {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        let mut summary = Summary { total: checks.len(), ..Summary::default() };
        for c in &checks {
            match c.status {
                CheckStatus::Pass => summary.pass += 1,
                CheckStatus::Fail => summary.fail += 1,
                CheckStatus::Error => summary.error += 1,
                CheckStatus::Skipped => summary.skipped += 1,
            }
        }
        Report { version: REPORT_VERSION.to_string(), config, checks, summary, sections }
    }

    /// 0 if every non-skipped check passes, 1 on a failure, 2 on an error.
    pub fn exit_code(&self) -> i32 {
        if self.summary.error > 0 {
            2
        } else if self.summary.fail > 0 {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> Result<String, ReportError> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn to_markdown(&self) -> Result<String, ReportError> {
        let mut s = String::new();
        let title = self.config.as_ref().map_or("report".to_string(), |c| c.spec.to_string());
        let _ = writeln!(s, "# Verification report: {title}\n");
        let m = &self.summary;
        let _ = writeln!(s, "{} checks: {} pass, {} fail, {} error, {} skipped\n", m.total, m.pass, m.fail, m.error, m.skipped);
        let _ = writeln!(s, "| id | status | anchor | witness | ms |");
        let _ = writeln!(s, "|---|---|---|---|---|");
        for c in &self.checks {
            let status = serde_json::to_value(c.status)?;
            let w = c.witness.as_deref().unwrap_or("").replace('|', "\\|");
            let _ = writeln!(s, "| {} | {} | {} | {} | {} |", c.id, status.as_str().unwrap_or(""), c.anchor, w, c.runtime_ms);
        }
        for (k, v) in &self.sections {
            let _ = writeln!(s, "\n## {k}\n\n```json\n{}\n```", serde_json::to_string_pretty(v)?);
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests;
