use super::*;
use crate::group::{GroupSpec, Series, Sign};

fn config(series: Series, n: usize, suites: &str) -> RunConfig {
    let mut c = RunConfig::new(GroupSpec::new(series, n, Sign::Plus).unwrap());
    c.suites = parse_suites(suites).unwrap();
    c.timings = false;
    c
}

#[test]
fn empty_report_is_valid() {
    let r = Report::assemble(None, Vec::new(), BTreeMap::new());
    assert_eq!(r.summary, Summary::default());
    assert_eq!(r.exit_code(), 0);
    let v: Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
    assert_eq!(v["checks"], json!([]));
    assert_eq!(v["version"], json!(REPORT_VERSION));
}

#[test]
fn failing_check_sets_exit_code_and_witness() {
    let mut rec = Recorder::new(&GroupSpec::new(Series::SL, 2, Sign::Plus).unwrap(), false);
    let mut t = Tensor::zeros(crate::calculus::v_sig(2), crate::calculus::v_sig(2));
    t.set(1, 3, Scalar::int(5));
    rec.run("sigma.minpoly", || Outcome::zero(&t, &ScalarContext::standard()));
    rec.run("eta.braiding", || Outcome::Pass);
    let r = Report::assemble(None, rec.checks, BTreeMap::new());
    assert_eq!(r.exit_code(), 1);
    assert_eq!(r.checks[1].id, "sl2.plus.sigma.minpoly");
    assert_eq!(r.checks[1].witness.as_deref(), Some("entry (1, 3) = 5"));
    let mut errored = r.checks.clone();
    errored[0].status = CheckStatus::Error;
    assert_eq!(Report::assemble(None, errored, BTreeMap::new()).exit_code(), 2);
}

#[test]
fn parsing() {
    assert_eq!(parse_suites("all").unwrap(), Suite::ALL.to_vec());
    assert_eq!(parse_suites("lc,sigma,lc").unwrap(), vec![Suite::Sigma, Suite::Lc]);
    assert!(parse_suites("sigma,bogus").is_err());
    assert_eq!("alpha=-3/4".parse::<Assignment>().unwrap().value, "-3/4");
    assert!("delta=1".parse::<Assignment>().is_err());
    assert!("alpha=x".parse::<Assignment>().is_err());
    assert!("symbolic".parse::<MetricMode>().is_ok());
}

#[test]
fn anchors_are_registered_and_unique() {
    let mut kinds: Vec<&str> = ANCHORS.iter().map(|(k, _)| *k).collect();
    let n = kinds.len();
    kinds.sort();
    kinds.dedup();
    assert_eq!(kinds.len(), n);
    assert_eq!(anchor("metric.restriction.g_w0_w0"), anchor("metric.restriction"));
    assert_eq!(anchor("classical.display.nabla_cl_omega1"), anchor("classical.display"));
    assert!(anchor("nonexistent").is_none());
}

#[test]
fn sl2_run_is_deterministic_and_passes() {
    let c = config(Series::SL, 2, "sigma,mor,metric,rosso,starb");
    let a = run(&c).unwrap();
    let b = run(&c).unwrap();
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    assert!(a.checks.iter().all(|c| c.anchor != "unregistered"), "{:?}", a.checks);
    let ids: Vec<&str> = a.checks.iter().map(|c| c.id.as_str()).collect();
    let mut dedup = ids.clone();
    dedup.dedup();
    assert_eq!(ids, dedup);
    let bad: Vec<_> = a.checks.iter().filter(|c| c.status == CheckStatus::Fail || c.status == CheckStatus::Error).collect();
    assert!(bad.is_empty(), "{bad:?}");
    assert!(a.to_markdown().unwrap().contains("| sl2.plus.mor.v_to_vv | pass |"));
}

#[test]
fn sample_mode() {
    let mut c = config(Series::SL, 2, "metric");
    c.metric = MetricMode::Sample;
    c.assign = vec!["alpha=2".parse().unwrap()];
    let ctx = build_calculus(c.spec).unwrap();
    let sets = metric_parameter_sets(&c, &ctx).unwrap();
    assert_eq!(sets.len(), 3);
    assert_eq!(sets[0].alpha, Scalar::int(2));
    assert!(sets.iter().all(|p| p.alpha.as_rational().is_some() && p.beta.as_rational().is_some()));
    let r = run(&c).unwrap();
    assert_eq!(r.exit_code(), 0, "{:?}", r.checks);
    assert_eq!(r.sections["samples"].as_array().unwrap().len(), 3);
    // A degenerate full assignment is rejected before any check runs.
    c.assign = vec!["alpha=0".parse().unwrap(), "beta=1".parse().unwrap()];
    assert!(matches!(run(&c), Err(ReportError::Config(_))));
}
