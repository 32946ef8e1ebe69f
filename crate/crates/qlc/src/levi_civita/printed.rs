//! Comparison of a solved connection with the closed forms in the text.
//!
//! Each display is a list of named terms with printed coefficients. A
//! display matches when the printed combination equals the solved tensor.
//! Per term, the solved tensor is decomposed over the same terms; when the
//! terms are dependent, a term counts as determined only if every relation
//! among the terms vanishes at it.

use super::{combine, lc_system, LcSolution};
use crate::calculus::{build_a6, omega_vectors, sl_basis, v_sig, vv_sig, A6Variant, BasisConstants, CalculusData, CalculusError};
use crate::group::{GroupData, Series, Sign};
use crate::metric::{MetricError, MetricParams};
use crate::scalar::Scalar;
use crate::tensor::{rank, solve_affine, IndexSignature, LinearSystem, Row, Solution, Tensor};

/// One printed term and what the solved connection gives for it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermMatch {
    pub term: String,
    pub printed: Scalar,
    /// Solved coefficient, if the terms determine it.
    pub solved: Option<Scalar>,
    pub matched: bool,
}

/// One printed display under one reading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisplayMatch {
    pub display: String,
    pub reading: String,
    pub matched: bool,
    pub terms: Vec<TermMatch>,
}

/// Displays and printed equation systems compared with the solution.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MatchReport {
    pub displays: Vec<DisplayMatch>,
    /// (system, reading, same solution space).
    pub systems: Vec<(String, String, bool)>,
}

impl MatchReport {
    pub fn display(&self, name: &str, reading: &str) -> Option<&DisplayMatch> {
        self.displays.iter().find(|d| d.display == name && d.reading == reading)
    }
}

/// Solves target = Σ x_k terms_k over all entries.
pub fn decompose(target: &Tensor, terms: &[Tensor]) -> Solution {
    let mut entries: std::collections::BTreeMap<(usize, usize), Row> = Default::default();
    for (k, t) in terms.iter().enumerate() {
        for (r, row) in t.rows().iter().enumerate() {
            for (c, v) in row {
                entries.entry((r, *c)).or_default().push((k, v.clone()));
            }
        }
    }
    for (r, row) in target.rows().iter().enumerate() {
        for (c, _) in row {
            entries.entry((r, *c)).or_default();
        }
    }
    let rhs = entries.keys().map(|&(r, c)| target.get(r, c)).collect();
    let labels = (0..terms.len()).map(|k| format!("x{k}")).collect();
    let sys = LinearSystem::new(entries.into_values().collect(), rhs, labels).expect("matching lengths");
    solve_affine(&sys)
}

fn match_display(display: &str, reading: &str, target: &Tensor, terms: Vec<(String, Scalar, Tensor)>) -> DisplayMatch {
    let tensors: Vec<Tensor> = terms.iter().map(|t| t.2.clone()).collect();
    let coeffs: Vec<Scalar> = terms.iter().map(|t| t.1.clone()).collect();
    let matched = combine(&tensors, &coeffs) == *target;
    let sol = decompose(target, &tensors);
    let out = terms
        .into_iter()
        .enumerate()
        .map(|(k, (term, printed, _))| {
            let solved = match &sol {
                Solution::Unique(x) => Some(x[k].clone()),
                Solution::Family { particular, kernel } if kernel.iter().all(|v| v[k].is_zero()) => {
                    Some(particular[k].clone())
                }
                _ => None,
            };
            let ok = match &solved {
                Some(x) => *x == printed,
                None => matched,
            };
            TermMatch { term, printed, solved, matched: ok }
        })
        .collect();
    DisplayMatch { display: display.into(), reading: reading.into(), matched, terms: out }
}

/// A printed term for a display built elsewhere.
pub(super) struct TermSpec {
    name: String,
    printed: Scalar,
    tensor: Tensor,
}

impl TermSpec {
    pub(super) fn new(name: &str, printed: Scalar, tensor: Tensor) -> TermSpec {
        TermSpec { name: name.into(), printed, tensor }
    }
}

pub(super) fn decompose_match(display: &str, target: &Tensor, terms: Vec<TermSpec>) -> DisplayMatch {
    match_display(display, "as printed", target, terms.into_iter().map(|t| (t.name, t.printed, t.tensor)).collect())
}

fn half() -> Scalar {
    Scalar::ratio(1, 2)
}

fn qi(g: &GroupData) -> Scalar {
    g.qp(-1)
}

/// λ₁..λ₆ of the displayed SL connection in the basis A₁..A₅, A₆.
pub fn sl_theorem_lambda(g: &GroupData, p: &MetricParams, sign: Sign) -> Result<Vec<Scalar>, MetricError> {
    let q = &g.big_q;
    let n = g.n as i64;
    let ba = p.beta.div(&p.alpha).map_err(|_| MetricError::Degenerate("α = 0".into()))?;
    let q2 = q.mul(q);
    let lam = match sign {
        Sign::Plus => vec![
            g.qp(2 * n + 1).mul(&q2).add(&q.mul(&ba)).neg(),
            q.mul(&Scalar::one().add(&g.frak_s.mul(&ba))),
            q.neg(),
            q.neg(),
            qi(g).neg(),
            Scalar::one(),
        ],
        Sign::Minus => vec![
            g.qp(2 * n + 1).mul(&q2).sub(&q.mul(&ba)),
            q.scale_int(2).add(&q.mul(&g.frak_s).mul(&ba)),
            Scalar::zero(),
            Scalar::zero(),
            g.qp(-2 * n - 1),
            Scalar::int(-1),
        ],
    };
    let f = q.mul(&half());
    Ok(lam.into_iter().map(|x| x.mul(&f)).collect())
}

/// Printed SL torsion equations as (coefficients of λ₁..λ₆, right-hand side).
pub fn sl_printed_torsion(g: &GroupData, sign: Sign) -> Vec<(Vec<Scalar>, Scalar)> {
    let q = &g.big_q;
    let n = g.n as i64;
    let (c5, c6) = match sign {
        // λ₃ − λ₅/(q⁻¹Q) + (Q²+1)λ₆/Q = 1
        Sign::Plus => (
            qi(g).mul(q).inv().expect("Q nonzero").neg(),
            q.mul(q).add(&Scalar::one()).div(q).expect("Q nonzero"),
        ),
        // λ₃ + λ₅/(q^{−2N−1}Q) − λ₆/Q = 1
        Sign::Minus => (g.qp(-2 * n - 1).mul(q).inv().expect("Q nonzero"), q.inv().expect("Q nonzero").neg()),
    };
    let z = Scalar::zero;
    [2, 3]
        .into_iter()
        .map(|k| {
            let mut row = vec![z(), z(), z(), z(), c5.clone(), c6.clone()];
            row[k] = Scalar::one();
            (row, Scalar::one())
        })
        .collect()
}

/// Printed SL compatibility equations (homogeneous) in λ₁..λ₆.
pub fn sl_printed_compat(g: &GroupData, p: &MetricParams, sign: Sign) -> Vec<Vec<Scalar>> {
    let (a, b) = (&p.alpha, &p.beta);
    let q = &g.big_q;
    let n = g.n as i64;
    let asb = a.add(&g.frak_s.mul(b));
    let z = Scalar::zero;
    let one = Scalar::one;
    match sign {
        Sign::Plus => vec![
            vec![z(), z(), z(), one(), z(), q.clone()],
            vec![z(), z(), z(), z(), one(), qi(g)],
            vec![z(), a.clone(), asb.clone(), z(), z(), z()],
            vec![
                asb,
                b.clone(),
                z(),
                b.clone(),
                z(),
                g.qp(2 * n).mul(q).mul(&b.add(&g.qp(1).mul(q).mul(a))),
            ],
        ],
        Sign::Minus => vec![
            vec![z(), z(), z(), one(), z(), z()],
            vec![z(), z(), z(), z(), one(), g.qp(-2 * n - 1)],
            vec![
                asb.clone(),
                b.clone(),
                z(),
                z(),
                z(),
                g.qp(2 * n + 1).mul(q).mul(q).mul(a).add(&g.qp(2 * n).mul(q).mul(b)),
            ],
            vec![
                z(),
                a.clone(),
                asb,
                z(),
                g.qp(2 * n + 1).mul(q).mul(a).neg().add(b),
                q.mul(a).add(&qi(g).mul(b)),
            ],
        ],
    }
}

/// p̃ = (p − p⁻³q^{3N}) / ((q^N + 1)α₁).
pub fn p_tilde(g: &GroupData, p: &MetricParams) -> Result<Scalar, MetricError> {
    let pp = g.p.clone().ok_or(MetricError::MissingParameter("p"))?;
    let [_, a1, _] = p.derived(g)?;
    let n = g.n as i64;
    let num = pp.sub(&pp.pow(-3).mul(&g.qp(3 * n)));
    let den = g.qp(n).add(&Scalar::one()).mul(&a1);
    num.div(&den).map_err(|_| MetricError::Degenerate("α₁ = 0".into()))
}

/// The printed λ₁..λ₁₅ of the O/Sp connection.
pub fn bcd_printed_lambda(g: &GroupData, p: &MetricParams) -> Result<Vec<Scalar>, MetricError> {
    let pt = p_tilde(g, p)?;
    let pp = g.p.clone().ok_or(MetricError::MissingParameter("p"))?;
    let pi = pp.inv().expect("p nonzero");
    let [a0, a1, a2] = p.derived(g)?;
    let (a, b, c) = (&p.alpha, &p.beta, p.gamma()?);
    let q = &g.big_q;
    let q2 = q.mul(q);
    let h = half();
    let one = Scalar::one();
    let a12 = a1.mul(&a2);
    let div12 = |x: Scalar| x.div(&a12).map_err(|_| MetricError::Degenerate("α₁α₂ = 0".into()));
    let qb_g = q.mul(b).add(c);
    let a_qb = a.sub(&q.mul(b));
    let l1 = q2.mul(&h).mul(
        &div12(q.mul(a).mul(b).neg().sub(&a.mul(c)).add(&pi.mul(b).mul(c)))?.sub(&pi.mul(&pt).mul(c)),
    );
    let l2 = div12(q2.mul(&a0).mul(b).mul(&h))?
        .neg()
        .add(&q2.mul(&h).mul(&pt).mul(&a0))
        .sub(&q.mul(&pp).mul(&pt).mul(&qb_g));
    let l3 = div12(q2.mul(&a0).mul(a).mul(&h))?.add(&q.mul(&pt).mul(c));
    let ptb = pt.mul(b);
    Ok(vec![
        l1,
        l2,
        l3,
        q2.mul(&one.add(&ptb)).mul(&h).neg(),
        q2.mul(&pt).mul(a).mul(&h).neg(),
        Scalar::zero(),
        Scalar::zero(),
        pp.mul(q).mul(&ptb.sub(&one)).mul(&h),
        pp.mul(q).mul(&pt).mul(a).mul(&h),
        q.mul(&one.sub(&ptb)).mul(&h),
        q.mul(&pt).mul(&a_qb).mul(&h).neg(),
        pp.mul(q).mul(&pt).mul(&a_qb).mul(&h).neg(),
        pp.mul(q).mul(&one.add(&ptb)).mul(&h).neg(),
        q.mul(&pt).mul(a).mul(&h),
        q.mul(&one.add(&ptb)).mul(&h),
    ])
}

/// Columns as an N⁴×m tensor.
pub(super) fn vv_columns(n: usize, cols: &[Vec<Scalar>]) -> Tensor {
    let mut trip = Vec::new();
    for (j, c) in cols.iter().enumerate() {
        for (r, v) in c.iter().enumerate() {
            if !v.is_zero() {
                trip.push((r, j, v.clone()));
            }
        }
    }
    Tensor::from_triplets(vv_sig(n), IndexSignature::flat(cols.len()), trip)
}

/// x ⊗ y in η⊗η coordinates.
pub(super) fn outer(x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(x.len() * y.len());
    for a in x {
        for b in y {
            out.push(if a.is_zero() { Scalar::zero() } else { a.mul(b) });
        }
    }
    out
}

pub(super) fn add_into(acc: &mut [Scalar], x: &[Scalar], c: &Scalar) {
    for (a, b) in acc.iter_mut().zip(x) {
        if !b.is_zero() {
            *a = a.add(&b.mul(c));
        }
    }
}

/// The images D·x_j of a list of vectors, as columns.
fn apply_cols(d: &Tensor, xs: &[Vec<Scalar>]) -> Tensor {
    let n = d.signature_in().n;
    vv_columns(n, &xs.iter().map(|x| d.apply(x)).collect::<Vec<_>>())
}

/// Σ_{abcd} M[(abcd),(ij)] w_{ab}⊗w_{cd}, one column per ij.
fn transport(m: &Tensor, w: &[Vec<Scalar>]) -> Tensor {
    let n2 = w.len();
    let mut cols = vec![vec![Scalar::zero(); n2 * n2]; n2];
    for (r, row) in m.rows().iter().enumerate() {
        let t = outer(&w[r / n2], &w[r % n2]);
        for (ij, v) in row {
            add_into(&mut cols[*ij], &t, v);
        }
    }
    vv_columns(m.signature_in().n, &cols)
}

fn unit(n2: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n2];
    v[i] = Scalar::one();
    v
}

fn sl_report(calc: &CalculusData, params: &MetricParams, sol: &LcSolution) -> Result<MatchReport, CalculusError> {
    let g = &calc.group;
    let n = g.n;
    let n2 = n * n;
    let sign = calc.spec.sign;
    let d = &sol.conn.d;
    let mut rep = MatchReport::default();
    let base = sl_basis(g);
    let lam = sl_theorem_lambda(g, params, sign).map_err(|e| CalculusError::Certification(e.to_string()))?;
    let names = ["eta(x)eta", "q^-2a eta_ab(x)eta_ba", "eta_ij(x)eta", "eta(x)eta_ij", "eta_ia(x)eta_aj", "triple R-hat term"];
    let pair = crate::metric::build_metric(g, params).map_err(|e| CalculusError::Certification(e.to_string()))?;
    for v in A6Variant::ALL {
        let mut basis = base[..5].to_vec();
        basis.push(build_a6(g, v));
        let terms = names.iter().zip(&lam).zip(&basis).map(|((nm, l), a)| (nm.to_string(), l.clone(), a.clone())).collect();
        rep.displays.push(match_display("theorem", v.name(), d, terms));
        // Printed λ-systems against the computed ones in this basis.
        let sys = lc_system(calc, &pair, &basis);
        let pt: Vec<(Vec<Scalar>, Scalar)> = sl_printed_torsion(g, sign);
        let pc: Vec<(Vec<Scalar>, Scalar)> =
            sl_printed_compat(g, params, sign).into_iter().map(|r| (r, Scalar::zero())).collect();
        rep.systems.push(("torsion".into(), v.name().into(), same_space(&sys.torsion, &pt)));
        rep.systems.push(("compatibility".into(), v.name().into(), same_space(&sys.compat, &pc)));
    }
    if sign == Sign::Plus {
        let BasisConstants::Sl { mu, .. } = &calc.constants else { unreachable!("SL constants") };
        let q = &g.big_q;
        let (a, b) = (&params.alpha, &params.beta);
        let asb = a.add(&g.frak_s.mul(b));
        let k = q.mul(q).mul(&asb).div(&a.scale_int(2)).expect("α nonzero");
        let eta = calc.eta.clone();
        // ∇(η)
        let target = apply_cols(d, std::slice::from_ref(&eta));
        let a1 = vv_columns(n, &[base[0].column(0)]);
        let a2 = vv_columns(n, &[base[1].column(0)]);
        rep.displays.push(match_display(
            "nabla(eta)",
            "as printed",
            &target,
            vec![("s q^-2a eta_ab(x)eta_ba".into(), k.mul(&g.frak_s), a2), ("eta(x)eta".into(), k.neg(), a1)],
        ));
        // ∇(ω⁰)
        let om = omega_vectors(calc)?;
        let mut t0 = vec![Scalar::zero(); n2 * n2];
        for aa in 0..n {
            for bb in 0..n {
                add_into(&mut t0, &outer(&om.w1[aa * n + bb], &om.w1[bb * n + aa]), &g.qp(-2 * (aa as i64 + 1)));
            }
        }
        let z = &g.z;
        let c0 = z.mul(z).mul(&g.qp(2)).mul(mu).mul(&asb).div(&a.scale_int(2)).expect("α nonzero");
        rep.displays.push(match_display(
            "nabla(omega0)",
            "as printed",
            &apply_cols(d, std::slice::from_ref(&om.w0)),
            vec![("q^-2a w1_ab(x)w1_ba".into(), c0, vv_columns(n, &[t0]))],
        ));
        // ∇(η_ij − δ_ij 𝔰⁻¹ η)
        let si = g.frak_s.inv().expect("𝔰 nonzero");
        let shifted: Vec<Vec<Scalar>> = (0..n2)
            .map(|ij| {
                let mut v = unit(n2, ij);
                if ij / n == ij % n {
                    add_into(&mut v, &eta, &si.neg());
                }
                v
            })
            .collect();
        let target = apply_cols(d, &shifted);
        let flat = |t: &Tensor| t.clone().with_signatures(vv_sig(n), IndexSignature::flat(n2)).expect("N⁴×N²");
        let a4_plain = Tensor::from_fn(vv_sig(n), v_sig(n), |r, c| {
            let (ab, cd) = (r / n2, r % n2);
            if ab / n == ab % n && cd == c { Scalar::one() } else { Scalar::zero() }
        });
        let hq = q.mul(&half());
        for v in [A6Variant::NI, A6Variant::NR] {
            for (wname, a4) in [("unweighted delta^ab", &a4_plain), ("weighted eta(x)eta_ij", &base[3])] {
                let terms = vec![
                    ("triple R-hat term".into(), hq.clone(), flat(&build_a6(g, v))),
                    ("eta_ia(x)eta_aj".into(), hq.mul(&qi(g)).neg(), flat(&base[4])),
                    ("eta_aa(x)eta_ij".into(), hq.mul(q).neg(), flat(a4)),
                    ("eta(x)eta delta_ij".into(), hq.mul(q).mul(&si), flat(&base[0])),
                ];
                rep.displays.push(match_display("nabla(eta_ij - d_ij s^-1 eta)", &format!("{}, {}", v.name(), wname), &target, terms));
            }
        }
        // ∇(ω¹_ij)
        let target = apply_cols(d, &om.w1);
        let mut t2 = vec![vec![Scalar::zero(); n2 * n2]; n2];
        let mut t3 = vec![vec![Scalar::zero(); n2 * n2]; n2];
        for ij in 0..n2 {
            let (i, j) = (ij / n, ij % n);
            for aa in 0..n {
                add_into(&mut t2[ij], &outer(&om.w1[i * n + aa], &om.w1[aa * n + j]), &Scalar::one());
            }
            add_into(&mut t3[ij], &outer(&om.w1[ij], &om.w0), &Scalar::one());
            add_into(&mut t3[ij], &outer(&om.w0, &om.w1[ij]), &Scalar::one());
        }
        let (t2, t3) = (vv_columns(n, &t2), vv_columns(n, &t3));
        let mui = mu.inv().expect("μ nonzero");
        for v in [A6Variant::NI, A6Variant::NR] {
            let t1 = transport(&build_a6(g, v), &om.w1);
            let terms = vec![
                ("triple R-hat term on w1(x)w1".into(), z.mul(&g.qp(1)).mul(&half()), t1),
                ("w1_ia(x)w1_aj".into(), z.mul(&half()).neg(), t2.clone()),
                ("w1_ij(x)w0 + w0(x)w1_ij".into(), q.mul(q).mul(&mui).mul(&half()).neg(), t3.clone()),
            ];
            rep.displays.push(match_display("nabla(omega1_ij)", v.name(), &target, terms));
        }
    }
    Ok(rep)
}

/// Whether a computed system and printed equations (coefficients, right-hand side)
/// have the same affine row space.
pub fn same_space(computed: &LinearSystem, printed: &[(Vec<Scalar>, Scalar)]) -> bool {
    let k = computed.labels.len();
    let aug = |coeffs: &[(usize, Scalar)], rhs: &Scalar| -> Row {
        let mut r: Row = coeffs.to_vec();
        if !rhs.is_zero() {
            r.push((k, rhs.clone()));
        }
        r
    };
    let a: Vec<Row> = computed.matrix.rows().iter().zip(&computed.rhs).map(|(r, b)| aug(r, b)).collect();
    let b: Vec<Row> = printed
        .iter()
        .map(|(c, r)| {
            let coeffs: Row = c.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, x)| (j, x.clone())).collect();
            aug(&coeffs, r)
        })
        .collect();
    let rk = |rows: Vec<Row>| rank(&Tensor::from_rows(IndexSignature::flat(rows.len()), IndexSignature::flat(k + 1), rows));
    let (ra, rb) = (rk(a.clone()), rk(b.clone()));
    let mut both = a;
    both.extend(b);
    ra == rb && rk(both) == ra
}

fn bcd_report(calc: &CalculusData, params: &MetricParams, sol: &LcSolution) -> Result<MatchReport, MetricError> {
    let g = &calc.group;
    let n = g.n;
    let n2 = n * n;
    let d = &sol.conn.d;
    let mut rep = MatchReport::default();
    let lam = bcd_printed_lambda(g, params)?;
    let terms = lam
        .iter()
        .zip(&sol.basis)
        .enumerate()
        .map(|(k, (l, a))| (format!("lambda{}", k + 1), l.clone(), a.clone()))
        .collect();
    rep.displays.push(match_display("lambda list", "as printed", d, terms));

    // Standard-basis formulas.
    let c = g.c.as_ref().expect("C for O/Sp");
    let b = g.b.as_ref().expect("B for O/Sp");
    let pr = &calc.projections;
    let cols = |k: usize| -> Vec<Vec<Scalar>> { (0..n2).map(|ij| pr[k].column(ij)).collect() };
    let (p1, p2) = (cols(1), cols(2));
    let eta = calc.eta.clone();
    // Σ Bᵗ^a_m C^{md} X_ab ⊗ Y_bd
    let bc = |x: &[Vec<Scalar>], y: &[Vec<Scalar>]| -> Vec<Scalar> {
        let mut acc = vec![Scalar::zero(); n2 * n2];
        for a in 0..n {
            for m in 0..n {
                if b[m][a].is_zero() {
                    continue;
                }
                for dd in 0..n {
                    let f = b[m][a].mul(&c[m][dd]);
                    if f.is_zero() {
                        continue;
                    }
                    for bb in 0..n {
                        add_into(&mut acc, &outer(&x[a * n + bb], &y[bb * n + dd]), &f);
                    }
                }
            }
        }
        acc
    };
    // Σ P^{kl}_{ij} X_km ⊗ Y_ml, one column per ij.
    let chain = |p: &Tensor, x: &[Vec<Scalar>], y: &[Vec<Scalar>]| -> Tensor {
        let mut out = vec![vec![Scalar::zero(); n2 * n2]; n2];
        for (kl, row) in p.rows().iter().enumerate() {
            let (k, l) = (kl / n, kl % n);
            let mut t = vec![Scalar::zero(); n2 * n2];
            for m in 0..n {
                add_into(&mut t, &outer(&x[k * n + m], &y[m * n + l]), &Scalar::one());
            }
            for (ij, v) in row {
                add_into(&mut out[*ij], &t, v);
            }
        }
        vv_columns(n, &out)
    };
    let pp = g.p.clone().ok_or(MetricError::MissingParameter("p"))?;
    let pi = pp.inv().expect("p nonzero");
    let pt = p_tilde(g, params)?;
    let [a0, a1, a2] = params.derived(g)?;
    let q = &g.big_q;
    let nn = g.n as i64;
    let (qn, qni) = (g.qp(nn), g.qp(-nn));
    let one = Scalar::one();
    let s = &g.frak_s;
    let div = |x: Scalar, y: &Scalar| x.div(y).map_err(|_| MetricError::Degenerate("zero denominator".into()));
    let k = pp.mul(&qni).add(&pi.mul(&qn));
    let psq = pp.mul(&pp);
    let pisq = pi.mul(&pi);

    let c11 = div(q.mul(&a0).mul(&half()), &a1)?.mul(&k).mul(&psq.mul(&qni).sub(&pisq.mul(&qn)));
    let c22 = q.mul(&a0).mul(&half()).mul(
        &div(q.mul(s), &a2)?.add(&pt.mul(&one.sub(&qn)).mul(&one.sub(&qn.mul(&pisq)))),
    );
    rep.displays.push(match_display(
        "nabla(eta)",
        "as printed",
        &apply_cols(d, std::slice::from_ref(&eta)),
        vec![
            ("BtC P1eta(x)P1eta".into(), c11, vv_columns(n, &[bc(&p1, &p1)])),
            ("BtC P2eta(x)P2eta".into(), c22, vv_columns(n, &[bc(&p2, &p2)])),
        ],
    ));

    let pre = q.mul(&k).mul(&half());
    let sym = |x: &[Vec<Scalar>], left: bool, right: bool| -> Tensor {
        let cols: Vec<Vec<Scalar>> = x
            .iter()
            .map(|v| {
                let mut acc = vec![Scalar::zero(); n2 * n2];
                if left {
                    add_into(&mut acc, &outer(&eta, v), &one);
                }
                if right {
                    add_into(&mut acc, &outer(v, &eta), &one);
                }
                acc
            })
            .collect();
        vv_columns(n, &cols)
    };
    let terms1 = vec![
        ("eta(x)P1eta + P1eta(x)eta".into(), pre.mul(&div(pisq.mul(&qn).sub(&psq.mul(&qni)), s)?), sym(&p1, true, true)),
        ("P1 P1eta(x)P1eta".into(), pre.mul(&psq.mul(&qni).add(&one)).neg(), chain(&pr[1], &p1, &p1)),
        ("P1 P2eta(x)P1eta".into(), pre.mul(&pisq.mul(&g.qp(2 * nn)).sub(&psq.mul(&qni))), chain(&pr[1], &p2, &p1)),
        ("P1 P1eta(x)P2eta".into(), pre.mul(&pp).mul(&pt).mul(&a1).mul(&one.add(&qni)).neg(), chain(&pr[1], &p1, &p2)),
        ("P1 P2eta(x)P2eta".into(), pre.mul(&pt).mul(&a1).mul(&pi.mul(&qn).sub(&pp)), chain(&pr[1], &p2, &p2)),
    ];
    rep.displays.push(match_display("nabla(P1 eta_ij)", "as printed", &apply_cols(d, &p1), terms1));

    let mixed = div(
        qn.sub(&one).mul(&one.sub(&pisq.mul(&qn))).mul(&pt).mul(&a2).sub(&q.mul(s)),
        &k.mul(s),
    )?;
    let terms2 = vec![
        ("eta(x)P2eta".into(), pre.mul(&div(qni.sub(&qn), s)?), sym(&p2, true, false)),
        ("P2eta(x)eta".into(), pre.mul(&mixed), sym(&p2, false, true)),
        ("P2 P1eta(x)P2eta".into(), pre.mul(&qn.add(&psq.mul(&g.qp(-2 * nn)))).neg(), chain(&pr[2], &p1, &p2)),
        ("P2 P2eta(x)P2eta".into(), pre.mul(&one.sub(&qn)), chain(&pr[2], &p2, &p2)),
        ("P2 P1eta(x)P1eta".into(), pre.mul(&pp).mul(&pt).mul(&a2).mul(&one.add(&qni)), chain(&pr[2], &p1, &p1)),
        ("P2 P2eta(x)P1eta".into(), pre.mul(&pt).mul(&a2).mul(&pp.sub(&pi.mul(&qn))), chain(&pr[2], &p2, &p1)),
    ];
    rep.displays.push(match_display("nabla(P2 eta_ij)", "as printed", &apply_cols(d, &p2), terms2));
    Ok(rep)
}

/// Compares a solved connection with every printed display for its series.
pub fn compare_with_printed(calc: &CalculusData, params: &MetricParams, sol: &LcSolution) -> Result<MatchReport, MetricError> {
    match calc.spec.series {
        Series::SL => Ok(sl_report(calc, params, sol)?),
        _ => bcd_report(calc, params, sol),
    }
}
