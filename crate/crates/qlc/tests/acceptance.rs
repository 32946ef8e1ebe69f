//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use qlc::appendices::{rosso_vs_dual_metric, star_lc_solution_space};
use qlc::calculus::{
    build_calculus, check_sigma_minpoly, eta_certification_defects, mor_space, standard_duality_defects, v_word, vv_word,
    CalculusData,
};
use qlc::functional::multiplicativity_check;
use qlc::group::{GroupSpec, Series, Sign};
use qlc::levi_civita::{
    bcd_printed_lambda, classical_limit_connection, compare_with_printed, dual_connection, solve_levi_civita, LcError,
    LcSolution, MatchReport,
};
use qlc::metric::{
    build_metric, check_symmetric, family_span, printed_dual, subspace_report, MetricPair, MetricParams,
};
use qlc::scalar::ScalarContext;
use rayon::prelude::*;

struct Fixture {
    calc: CalculusData,
    params: MetricParams,
    pair: MetricPair,
    sol: Result<LcSolution, LcError>,
    printed: Option<MatchReport>,
}

const TARGETS: [(Series, usize); 4] = [(Series::SL, 2), (Series::SL, 3), (Series::O, 3), (Series::Sp, 4)];

fn fixtures() -> Vec<Fixture> {
    let specs: Vec<GroupSpec> = TARGETS
        .iter()
        .flat_map(|&(s, n)| [Sign::Plus, Sign::Minus].map(|sg| GroupSpec::new(s, n, sg).expect("valid spec")))
        .collect();
    specs
        .par_iter()
        .map(|&spec| {
            let calc = build_calculus(spec).expect("calculus builds");
            let params = MetricParams::symbolic(spec.series);
            let pair = build_metric(&calc.group, &params).expect("metric builds");
            let sol = solve_levi_civita(&calc, &pair);
            let printed = sol.as_ref().ok().map(|s| compare_with_printed(&calc, &params, s).expect("comparison runs"));
            Fixture { calc, params, pair, sol, printed }
        })
        .collect()
}

type Verdict = Result<(), String>;

fn all(fx: &[Fixture], f: impl Fn(&Fixture) -> Verdict + Sync) -> Verdict {
    let bad: Vec<String> = fx.par_iter().filter_map(|x| f(x).err().map(|e| format!("{}: {e}", x.calc.spec))).collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad.join("; "))
    }
}

fn require(ok: bool, witness: impl FnOnce() -> String) -> Verdict {
    if ok {
        Ok(())
    } else {
        Err(witness())
    }
}

fn c1_minpoly(fx: &[Fixture]) -> Verdict {
    all(fx, |x| {
        let bad = check_sigma_minpoly(&x.calc);
        require(bad.is_empty(), || bad.join(", "))
    })
}

fn c2_mor_dims(fx: &[Fixture]) -> Verdict {
    all(fx, |x| {
        let spec = x.calc.spec;
        let want1 = if spec.series == Series::SL { 2 } else { 3 };
        let want2 = match (spec.series, spec.n) {
            (Series::SL, 2) => 5,
            (Series::SL, _) => 6,
            (Series::O, _) => 15,
            (Series::Sp, _) => 14,
        };
        let d1 = mor_space(&x.calc, &vv_word(), &[]).dim();
        let d2 = mor_space(&x.calc, &v_word(), &vv_word()).dim();
        require((d1, d2) == (want1, want2), || format!("dims ({d1}, {d2}), expected ({want1}, {want2})"))
    })
}

fn c3_metric_family(fx: &[Fixture]) -> Verdict {
    all(fx, |x| {
        let (d, rf, rb) = family_span(&x.calc).map_err(|e| e.to_string())?;
        let want = if x.calc.spec.series == Series::SL { 2 } else { 3 };
        require(d == want && rf == want && rb == want, || format!("dim {d}, family rank {rf}, joint rank {rb}"))?;
        require(check_symmetric(&x.pair.g, &x.calc.sigma), || "g∘σ ≠ g".into())
    })
}

fn c4_dual_metric(fx: &[Fixture]) -> Verdict {
    all(fx, |x| {
        let pd = printed_dual(&x.calc.group, &x.params).map_err(|e| e.to_string())?;
        require(pd == x.pair.gstar, || "inverse differs from the closed form".into())
    })
}

fn c5_restrictions(fx: &[Fixture]) -> Verdict {
    all(fx, |x| {
        let list = subspace_report(&x.calc, &x.pair, &x.params).map_err(|e| e.to_string())?;
        let bad: Vec<&str> = list.iter().filter(|r| !r.holds).map(|r| r.name.as_str()).collect();
        require(bad.is_empty(), || format!("{bad:?}"))
    })
}

fn c6_unique(fx: &[Fixture]) -> Verdict {
    all(fx, |x| x.sol.as_ref().map(|_| ()).map_err(|e| e.to_string()))
}

fn c7_closed_form(fx: &[Fixture]) -> Verdict {
    all(fx, |x| {
        let rep = x.printed.as_ref().ok_or("no solution")?;
        if x.calc.spec.series == Series::SL {
            let readings: Vec<_> = rep.displays.iter().filter(|d| d.display == "theorem").collect();
            let nterms = readings.first().ok_or("no theorem display")?.terms.len();
            let unmatched: Vec<&str> = (0..nterms)
                .filter(|&k| !readings.iter().any(|d| d.terms[k].matched))
                .map(|k| readings[0].terms[k].term.as_str())
                .collect();
            require(unmatched.is_empty(), || format!("terms {unmatched:?} match no reading"))
        } else {
            let bad: Vec<&str> = rep.displays.iter().filter(|d| !d.matched).map(|d| d.display.as_str()).collect();
            require(bad.is_empty(), || format!("displays {bad:?}"))?;
            if x.calc.spec.series == Series::O {
                let lam = x.sol.as_ref().expect("solved").conn.lambda.clone().ok_or("no λ")?;
                let printed = bcd_printed_lambda(&x.calc.group, &x.params).map_err(|e| e.to_string())?;
                require(lam == printed, || "λ differs from the printed values".into())?;
            }
            Ok(())
        }
    })
}

fn c8_classical(fx: &[Fixture]) -> Verdict {
    let names = ScalarContext::standard();
    let plus: Vec<&Fixture> = fx.iter().filter(|x| x.calc.spec.sign == Sign::Plus).collect();
    let bad: Vec<String> = plus
        .par_iter()
        .filter_map(|x| {
            let lim = match classical_limit_connection(&x.calc) {
                Ok(l) => l,
                Err(e) => return Some(format!("{}: {e}", x.calc.spec)),
            };
            let terms: Vec<String> = lim
                .displays
                .iter()
                .flat_map(|d| d.terms.iter().filter(|t| !t.matched))
                .map(|t| {
                    let solved = t.solved.as_ref().map_or("none".into(), |v| names.render(v));
                    format!("{} printed {} solved {}", t.term, names.render(&t.printed), solved)
                })
                .collect();
            (!terms.is_empty()).then(|| format!("{}: {}", x.calc.spec, terms.join(", ")))
        })
        .collect();
    require(bad.is_empty(), || bad.join("; "))
}

fn c9_rosso() -> Verdict {
    for n in [2, 3] {
        let r = rosso_vs_dual_metric(n).map_err(|e| e.to_string())?;
        require(r.matches_printed, || format!("N={n}: table differs from the closed form"))?;
        require(r.matches_gstar && r.matches_printed_dual, || format!("N={n}: table differs from g*"))?;
    }
    Ok(())
}

fn c10_star(fx: &[Fixture]) -> Verdict {
    let x = fx
        .iter()
        .find(|x| x.calc.spec == GroupSpec::new(Series::SL, 3, Sign::Plus).expect("valid"))
        .ok_or("no SL_q(3) fixture")?;
    let sp = star_lc_solution_space(&x.calc, &x.params).map_err(|e| e.to_string())?;
    require(sp.affine_dim == Some(3), || format!("affine dimension {:?}", sp.affine_dim))?;
    require(sp.eta_restricted_dim.is_some_and(|d| d > 0), || format!("restricted dimension {:?}", sp.eta_restricted_dim))
}

fn c11_properties(fx: &[Fixture]) -> Verdict {
    all(fx, |x| {
        let bad = standard_duality_defects(&x.calc).map_err(|e| e.to_string())?;
        require(bad.is_empty(), || format!("duality fails at {:?}", bad[0]))?;
        let bad = eta_certification_defects(&x.calc);
        require(bad.is_empty(), || format!("η certification fails at {:?}", bad[0]))?;
        let sol = x.sol.as_ref().map_err(|e| e.to_string())?;
        let dual = dual_connection(&sol.conn, &x.pair, &x.calc);
        require(dual.torsion_holds && dual.compat_holds, || "dual reformulation fails".into())?;
        let bad = multiplicativity_check(&x.calc.ev, 100, 11);
        require(bad.is_empty(), || format!("multiplicativity fails in trial {}", bad[0].trial))
    })
}

fn main() -> ExitCode {
    let t = Instant::now();
    let fx = fixtures();
    println!("fixtures: 8 calculi with symbolic metrics solved in {:.1} s", t.elapsed().as_secs_f64());
    let criteria: [(&str, &dyn Fn() -> Verdict); 11] = [
        ("σ minimal polynomials annihilate σ", &|| c1_minpoly(&fx)),
        ("intertwiner space dimensions", &|| c2_mor_dims(&fx)),
        ("invariant metric families span Mor(v⊗v,1) and are symmetric", &|| c3_metric_family(&fx)),
        ("dual metrics match the closed forms", &|| c4_dual_metric(&fx)),
        ("restriction and orthogonality formulas", &|| c5_restrictions(&fx)),
        ("Levi-Civita connection exists and is unique", &|| c6_unique(&fx)),
        ("solved connections match the closed forms", &|| c7_closed_form(&fx)),
        ("classical limits match the displayed formulas", &|| c8_classical(&fx)),
        ("Rosso pairing table and g*", &c9_rosso),
        ("alternative compatibility has a three parameter family", &|| c10_star(&fx)),
        ("duality, η certification, dual reformulations, multiplicativity", &|| c11_properties(&fx)),
    ];
    let mut failed = 0;
    for (k, (title, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let v = f();
        let secs = t.elapsed().as_secs_f64();
        match v {
            Ok(()) => println!("criterion {:>2}: PASS  {title} [{secs:.1} s]", k + 1),
            Err(w) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {title} [{secs:.1} s]: {w}", k + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
