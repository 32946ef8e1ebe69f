//! Classical limit of the Levi-Civita connection in the ω-basis.
//!
//! With the c-parametrized metric, D is rewritten in the basis ω_ij,
//! D_ω = (T⁻¹⊗T⁻¹)·D·T, and every entry is sent to s → 1. The ω⁰, ω¹
//! and ω² forms are the columns of the projections in ω-coordinates, so
//! their limits are the limits of those columns.

use super::printed::{add_into, decompose_match, outer, vv_columns as columns, TermSpec};
use super::{solve_levi_civita, DisplayMatch, LcError};
use crate::calculus::{v_sig, CalculusData};
use crate::group::Series;
use crate::metric::{build_metric, classical_params, MetricError};
use crate::scalar::{Scalar, S};
use crate::tensor::Tensor;

/// Limits of the ω-basis coefficients and the printed comparisons.
#[derive(Clone, Debug)]
pub struct ClassicalLimit {
    /// Limit of D_ω: column kl holds ∇(ω_kl) in the basis ω_ab⊗ω_cd.
    pub d_omega: Tensor,
    pub displays: Vec<DisplayMatch>,
}

fn lim(x: &Scalar) -> Result<Scalar, LcError> {
    x.limit_to_one(S).map_err(|e| LcError::Metric(MetricError::Pole(e.to_string())))
}

fn lim_tensor(t: &Tensor) -> Result<Tensor, LcError> {
    let mut trip = Vec::new();
    for (r, row) in t.rows().iter().enumerate() {
        for (c, v) in row {
            trip.push((r, *c, lim(v)?));
        }
    }
    Ok(Tensor::from_triplets(t.signature_out().clone(), t.signature_in().clone(), trip))
}

/// lim ω⁰ for O/Sp, where ω⁰ = 𝔰⁻¹ Bᵗ^m_k C^{kn} ω_mn.
fn omega0_bc(g: &crate::group::GroupData) -> Result<Vec<Scalar>, LcError> {
    let n = g.n;
    let (b, c) = (g.b.as_ref().expect("B for O/Sp"), g.c.as_ref().expect("C for O/Sp"));
    let sinv = g.frak_s.inv().expect("𝔰 nonzero");
    let mut w = vec![Scalar::zero(); n * n];
    for m in 0..n {
        for l in 0..n {
            let x = (0..n).fold(Scalar::zero(), |acc, k| acc.add(&b[k][m].mul(&c[k][l])));
            w[m * n + l] = lim(&x.mul(&sinv))?;
        }
    }
    Ok(w)
}

/// Solves with the c-parametrized metric of Γ and takes s → 1.
///
/// SL: both printed ∇^cl formulas. O/Sp: the ∇^cl(ω¹) formula (stated for
/// Γ₊; it is compared for whichever sign `calc` carries).
pub fn classical_limit_connection(calc: &CalculusData) -> Result<ClassicalLimit, LcError> {
    let g = &calc.group;
    let n = g.n;
    let n2 = n * n;
    let params = classical_params(g);
    let pair = build_metric(g, &params)?;
    let sol = solve_levi_civita(calc, &pair)?;
    let (t, ti) = calc.standard_basis_transform()?;
    let (t, ti) = (
        t.with_signatures(v_sig(n), v_sig(n))?,
        ti.with_signatures(v_sig(n), v_sig(n))?,
    );
    let d_omega = ti.kron(&ti).contract(&sol.conn.d)?.contract(&t)?;
    let d_lim = lim_tensor(&d_omega)?;
    let pr: Vec<Tensor> = calc.projections.iter().map(lim_tensor).collect::<Result<_, _>>()?;
    let w0 = match g.spec.series {
        Series::SL => pr[0].column(0),
        _ => omega0_bc(g)?,
    };
    let w1: Vec<Vec<Scalar>> = (0..n2).map(|ij| pr[1].column(ij)).collect();
    let nabla = |x: &[Scalar]| d_lim.apply(x);
    let one = Scalar::one();
    let nn = n as i64;
    let mut displays = Vec::new();
    match g.spec.series {
        Series::SL => {
            let target = columns(n, &[nabla(&w0)]);
            let mut t0 = vec![Scalar::zero(); n2 * n2];
            for a in 0..n {
                for b in 0..n {
                    add_into(&mut t0, &outer(&w1[a * n + b], &w1[b * n + a]), &one);
                }
            }
            let c0 = Scalar::var(crate::scalar::C0)
                .mul(&Scalar::ratio(nn * nn - 1, 4 * nn))
                .div(&Scalar::var(crate::scalar::C1))
                .expect("c₁ nonzero");
            displays.push(decompose_match(
                "classical nabla(omega0)",
                &target,
                vec![TermSpec::new("w1_ab(x)w1_ba", c0, columns(n, &[t0]))],
            ));
            let target = columns(n, &w1.iter().map(|x| nabla(x)).collect::<Vec<_>>());
            let mut ta = vec![vec![Scalar::zero(); n2 * n2]; n2];
            let mut tb = ta.clone();
            let mut tc = ta.clone();
            for ij in 0..n2 {
                let (i, j) = (ij / n, ij % n);
                for a in 0..n {
                    add_into(&mut ta[ij], &outer(&w1[a * n + j], &w1[i * n + a]), &one);
                    add_into(&mut tb[ij], &outer(&w1[i * n + a], &w1[a * n + j]), &one);
                }
                add_into(&mut tc[ij], &outer(&w1[ij], &w0), &one);
                add_into(&mut tc[ij], &outer(&w0, &w1[ij]), &one);
            }
            displays.push(decompose_match(
                "classical nabla(omega1_ij)",
                &target,
                vec![
                    TermSpec::new("w1_aj(x)w1_ia", Scalar::ratio(1, 2), columns(n, &ta)),
                    TermSpec::new("w1_ia(x)w1_aj", Scalar::ratio(-1, 2), columns(n, &tb)),
                    TermSpec::new("w1_ij(x)w0 + w0(x)w1_ij", Scalar::ratio(-nn, nn * nn - 1), columns(n, &tc)),
                ],
            ));
        }
        _ => {
            let e = g.epsilon();
            let w2: Vec<Vec<Scalar>> = (0..n2).map(|ij| pr[2].column(ij)).collect();
            let target = columns(n, &w1.iter().map(|x| nabla(x)).collect::<Vec<_>>());
            let chain = |x: &[Vec<Scalar>], y: &[Vec<Scalar>]| -> Vec<Vec<Scalar>> {
                let mut out = vec![vec![Scalar::zero(); n2 * n2]; n2];
                for (kl, row) in pr[1].rows().iter().enumerate() {
                    let (k, l) = (kl / n, kl % n);
                    let mut t = vec![Scalar::zero(); n2 * n2];
                    for m in 0..n {
                        add_into(&mut t, &outer(&x[k * n + m], &y[m * n + l]), &one);
                    }
                    for (ij, v) in row {
                        add_into(&mut out[*ij], &t, v);
                    }
                }
                out
            };
            let mut sym = vec![vec![Scalar::zero(); n2 * n2]; n2];
            for ij in 0..n2 {
                add_into(&mut sym[ij], &outer(&w0, &w1[ij]), &one);
                add_into(&mut sym[ij], &outer(&w1[ij], &w0), &one);
            }
            let c11 = chain(&w1, &w1);
            let mut mix = chain(&w1, &w2);
            for (acc, (x, y)) in mix.iter_mut().zip(chain(&w2, &w1).iter().zip(chain(&w2, &w2).iter())) {
                add_into(acc, x, &one);
                add_into(acc, y, &one);
            }
            let ni = nn;
            displays.push(decompose_match(
                "classical nabla(omega1_ij)",
                &target,
                vec![
                    TermSpec::new("w0(x)w1_ij + w1_ij(x)w0", Scalar::ratio(-e * (ni - 2 * e), ni - e), columns(n, &sym)),
                    TermSpec::new("P1 w1_km(x)w1_ml", Scalar::int(-1), columns(n, &c11)),
                    TermSpec::new(
                        "P1 (w1(x)w2 + w2(x)w1 + w2(x)w2)",
                        Scalar::ratio(-(ni - 4 * e), ni - 2 * e),
                        columns(n, &mix),
                    ),
                ],
            ));
        }
    }
    Ok(ClassicalLimit { d_omega: d_lim, displays })
}
