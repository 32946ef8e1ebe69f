use super::*;
use proptest::prelude::*;

use crate::calculus::{build_calculus, v_word, vv_word};
use crate::functional::{Evaluator, LTables};
use crate::group::{GroupSpec, Series, Sign};
use crate::metric::MetricParams;
use crate::scalar::{Scalar, S};

#[test]
fn generator_pairings() {
    let t = PairingTable::symbolic(3);
    let (q, bq) = (&t.q, &t.big_q);
    let e = t.root_pair(Root::E(1, 2), Root::F(2, 1));
    assert_eq!(e, q.inv().unwrap().div(bq).unwrap().neg());
    let e13 = t.root_pair(Root::E(1, 3), Root::F(3, 1));
    assert_eq!(e13, q.pow(-3).div(bq).unwrap().neg());
    assert!(t.root_pair(Root::E(1, 3), Root::F(2, 1)).is_zero());
    let (k1, k2) = (KMonomial::kt(3, 1), KMonomial::kt(3, 2));
    assert_eq!(t.k_pair(&k1, &k1), q.pow(-2));
    assert!(t.k_pair(&k1, &k2).is_one());
}

#[test]
fn chi_expansion_shapes() {
    let q = Scalar::var(S);
    let chi = chi_as_fke(3, &q);
    let bq = q.sub(&q.inv().unwrap());
    let lead = FkeMonomial { f: vec![Root::F(2, 1)], k: KMonomial::kt(3, 1), e: vec![] };
    assert_eq!(chi[1].terms[&lead], q.inv().unwrap().mul(&bq));
    let eps = FkeMonomial { f: vec![], k: KMonomial::one(3), e: vec![] };
    assert_eq!(chi[4].terms[&eps], q.pow(-4).neg());
}

#[test]
fn rosso_table_matches() {
    for n in [2, 3] {
        let rep = rosso_vs_dual_metric(n).unwrap();
        assert!(rep.matches_printed, "N={n} printed");
        // The typeset q^{−2i−2j} is not symmetric and does not hold.
        assert!(!rep.matches_literal, "N={n} literal");
        assert!(rep.matches_gstar, "N={n} g*");
        assert!(rep.matches_printed_dual, "N={n} printed g*");
    }
    let rep = rosso_vs_dual_metric(3).unwrap();
    let q = Scalar::var(S).pow(2);
    let bq = q.sub(&q.inv().unwrap());
    assert_eq!(rep.table.get(0, 4), q.pow(-6).mul(&bq).mul(&bq));
}

#[test]
fn fke_expansion_realizes_chi() {
    for n in [2, 3] {
        let calc = build_calculus(GroupSpec::new(Series::SL, n, Sign::Plus).unwrap()).unwrap();
        let q = &calc.group.q;
        let ev = Evaluator::new(LTables::new(&calc.group));
        for word in [v_word(), vv_word()] {
            let direct = calc.chi(&word);
            for (ij, w) in chi_as_fke(n, q).iter().enumerate() {
                assert_eq!(ev.eval_word(&fke_functional(w, q).unwrap(), &word), direct[ij], "N={n} {ij}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn k_pairing_symmetric_and_multiplicative(
        a in prop::collection::vec(-3i64..=3, 5),
        b in prop::collection::vec(-3i64..=3, 5),
        c in prop::collection::vec(-3i64..=3, 5),
    ) {
        let t = PairingTable::symbolic(3);
        let km = |v: &[i64]| KMonomial { k: v[..2].to_vec(), kt: v[2..].to_vec() };
        let (a, b, c) = (km(&a), km(&b), km(&c));
        prop_assert_eq!(t.k_pair(&a, &b), t.k_pair(&b, &a));
        prop_assert_eq!(t.k_pair(&a.mul(&b), &c), t.k_pair(&a, &c).mul(&t.k_pair(&b, &c)));
    }
}

#[test]
fn star_family() {
    let calc = build_calculus(GroupSpec::new(Series::SL, 3, Sign::Plus).unwrap()).unwrap();
    let sp = star_lc_solution_space(&calc, &MetricParams::symbolic(Series::SL)).unwrap();
    assert_eq!(sp.affine_dim, Some(3));
    assert_eq!(sp.metric_rank, 1);
    assert!(sp.metric_matches_printed && sp.torsion_matches_printed && sp.nabla_eta_matches);
    assert_eq!(sp.eta_restricted_dim, Some(2));
    assert!(!sp.contains_braided_solution);
}

