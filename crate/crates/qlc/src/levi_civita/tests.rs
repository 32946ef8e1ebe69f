use super::*;
use crate::calculus::build_calculus;
use crate::group::{GroupSpec, Series, Sign};
use crate::metric::{build_metric, MetricParams};

fn setup(s: Series, n: usize, sign: Sign) -> (CalculusData, MetricParams, MetricPair) {
    let calc = build_calculus(GroupSpec::new(s, n, sign).unwrap()).unwrap();
    let p = MetricParams::symbolic(s);
    let pair = build_metric(&calc.group, &p).unwrap();
    (calc, p, pair)
}

fn mismatched_terms(d: &DisplayMatch) -> Vec<&str> {
    d.terms.iter().filter(|t| !t.matched).map(|t| t.term.as_str()).collect()
}

#[test]
fn zero_connection_has_defects() {
    let (calc, _, pair) = setup(Series::SL, 3, Sign::Plus);
    let zero = ConnectionCoeffs::zero(3);
    let t = torsion_defect(&zero, &calc, &QuotientSpec::of(&calc));
    let expected = QuotientSpec::of(&calc).apply(&calc, &calc.d_eta_operator());
    assert!(!t.is_zero());
    assert_eq!(t, expected);
    assert!(compat_defect(&zero, &pair, &calc).is_zero());
}

#[test]
fn sl_unique_and_displays() {
    for (n, sign) in [(2, Sign::Plus), (2, Sign::Minus), (3, Sign::Plus), (3, Sign::Minus)] {
        let (calc, p, pair) = setup(Series::SL, n, sign);
        let sol = solve_levi_civita(&calc, &pair).unwrap();
        assert_eq!(sol.gauge_dim, if n == 2 { 1 } else { 0 });
        let dual = dual_connection(&sol.conn, &pair, &calc);
        assert!(dual.torsion_holds && dual.compat_holds, "SL{n} {sign:?} dual");
        let rep = compare_with_printed(&calc, &p, &sol).unwrap();
        for reading in ["n-exponent, R", "p-exponent, R"] {
            assert!(rep.display("theorem", reading).unwrap().matched, "SL{n} {sign:?} {reading}");
        }
        if n == 3 {
            assert!(rep.systems.iter().filter(|s| s.1 == "n-exponent, R").all(|s| s.2));
        }
        if sign == Sign::Plus {
            assert!(rep.display("nabla(eta)", "as printed").unwrap().matched);
            assert!(rep.display("nabla(omega0)", "as printed").unwrap().matched);
            let shifted = rep.display("nabla(eta_ij - d_ij s^-1 eta)", "n-exponent, R^-1, weighted eta(x)eta_ij");
            assert!(shifted.unwrap().matched);
            // The printed ω¹ display lacks a factor 𝔰 on the ω⁰ terms.
            let w1 = rep.display("nabla(omega1_ij)", "n-exponent, R^-1").unwrap();
            assert_eq!(mismatched_terms(w1), vec!["w1_ij(x)w0 + w0(x)w1_ij"]);
            let t = &w1.terms[2];
            assert_eq!(t.solved.clone().unwrap(), t.printed.mul(&calc.group.frak_s));
        }
    }
}

#[test]
fn bcd_unique_and_printed_lambda() {
    for (s, n) in [(Series::O, 3), (Series::Sp, 4)] {
        for sign in [Sign::Plus, Sign::Minus] {
            let (calc, p, pair) = setup(s, n, sign);
            let sol = solve_levi_civita(&calc, &pair).unwrap();
            assert_eq!(sol.gauge_dim, if s == Series::Sp { 1 } else { 0 });
            let dual = dual_connection(&sol.conn, &pair, &calc);
            assert!(dual.torsion_holds && dual.compat_holds, "{s}{n} {sign:?} dual");
            let rep = compare_with_printed(&calc, &p, &sol).unwrap();
            for d in &rep.displays {
                assert!(d.matched && d.terms.iter().all(|t| t.matched), "{s}{n} {sign:?} {}", d.display);
            }
            if s == Series::O {
                let lam = sol.conn.lambda.as_ref().unwrap();
                assert_eq!(lam, &bcd_printed_lambda(&calc.group, &p).unwrap());
            }
        }
    }
}

#[test]
fn dual_identities_fail_off_solution() {
    for (s, n) in [(Series::SL, 3), (Series::O, 3)] {
        let (calc, _, pair) = setup(s, n, Sign::Plus);
        let sol = solve_levi_civita(&calc, &pair).unwrap();
        let lam: Vec<Scalar> =
            sol.conn.lambda.as_ref().unwrap().iter().enumerate().map(|(k, l)| l.add(&Scalar::ratio(k as i64 + 2, 7))).collect();
        let off = ConnectionCoeffs::from_lambda(&sol.basis, &lam);
        let torsion = torsion_defect(&off, &calc, &QuotientSpec::of(&calc)).is_zero();
        let compat = compat_defect(&off, &pair, &calc).is_zero();
        let dual = dual_connection(&off, &pair, &calc);
        assert_eq!((dual.torsion_holds, dual.compat_holds), (torsion, compat));
        assert!(!torsion && !compat);
    }
}

#[test]
fn classical_limits() {
    let calc = build_calculus(GroupSpec::new(Series::SL, 3, Sign::Plus).unwrap()).unwrap();
    let lim = classical_limit_connection(&calc).unwrap();
    assert!(lim.displays[0].matched);
    // Only the ω⁰ terms differ, by the factor N = lim 𝔰.
    assert_eq!(mismatched_terms(&lim.displays[1]), vec!["w1_ij(x)w0 + w0(x)w1_ij"]);
    assert_eq!(lim.displays[1].terms[2].solved, Some(Scalar::ratio(-9, 8)));
    let calc = build_calculus(GroupSpec::new(Series::O, 3, Sign::Plus).unwrap()).unwrap();
    assert!(classical_limit_connection(&calc).unwrap().displays.iter().all(|d| d.matched));
    // Sp: the ω⁰ terms come out as -(N-2ε)/(N-ε), without the printed leading -ε.
    let calc = build_calculus(GroupSpec::new(Series::Sp, 4, Sign::Plus).unwrap()).unwrap();
    let lim = classical_limit_connection(&calc).unwrap();
    assert_eq!(mismatched_terms(&lim.displays[0]), vec!["w0(x)w1_ij + w1_ij(x)w0"]);
    assert_eq!(lim.displays[0].terms[0].solved, Some(Scalar::ratio(-6, 5)));
}

#[test]
fn curvature_intertwines() {
    for (s, n) in [(Series::SL, 2), (Series::O, 3)] {
        let (calc, _, pair) = setup(s, n, Sign::Plus);
        let sol = solve_levi_civita(&calc, &pair).unwrap();
        let quot = QuotientSpec::of(&calc);
        let r = curvature(&sol.conn, &calc, &quot).unwrap();
        assert!(!r.r.is_zero());
        let vvv = [vv_word(), v_word()].concat();
        assert!(intertwiner_test(&calc, &r.image, &v_word(), &vvv).unwrap(), "{s}{n}");
        assert!(curvature(&ConnectionCoeffs::zero(n), &calc, &quot).unwrap().r.is_zero());
    }
}

