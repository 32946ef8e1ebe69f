//! Levi-Civita connections for the *-metric and the alternative
//! compatibility g(∇ξ, ζ) + g(ξ, ∇ζ) = d g(ξ, ζ) on SL_q(N), Γ₊.
//!
//! With real q, α, β and real λ_k, conjugation is the identity on every
//! scalar, so the *-structure only enters through η_ab* = −η_ba. For
//! ∇η_I = Σ D[(ab)·N²+B, I] η_ab⊗η_B and invariant ξ, ζ the condition reads
//! Σ_B D[(ab)B, I] g(η_B, η_J) − Σ_B g(η_I, η_B) D[(ba)B, J] = 0.

use super::AppendixError;
use crate::calculus::{build_a6, sl_basis, A6Variant, CalculusData};
use crate::group::{Series, Sign};
use crate::levi_civita::{lc_system, same_space, sl_theorem_lambda};
use crate::metric::{build_metric, MetricParams};
use crate::scalar::Scalar;
use crate::tensor::{rank, solve_affine, IndexSignature, LinearSystem, Row, Solution, Tensor};

/// Affine solution space of the alternative Levi-Civita problem in λ₁..λ₆.
#[derive(Clone, Debug)]
pub struct StarLcSpace {
    /// Torsion and metric equations together.
    pub system: LinearSystem,
    pub solution: Solution,
    /// Dimension of the affine solution set (None if inconsistent).
    pub affine_dim: Option<usize>,
    /// Rank of the metric block.
    pub metric_rank: usize,
    /// The metric block spans the single displayed equation.
    pub metric_matches_printed: bool,
    /// The torsion block spans the displayed torsion equations.
    pub torsion_matches_printed: bool,
    /// A_k η decomposes as displayed for ∇(η), for every k.
    pub nabla_eta_matches: bool,
    /// Affine dimension after also imposing ∇(η) = λη⊗η.
    pub eta_restricted_dim: Option<usize>,
    /// Whether the Levi-Civita connection of the braided compatibility
    /// solves this system too (reported, not asserted).
    pub contains_braided_solution: bool,
}

/// g(η_ij, η_kl) = q^{2j}αδ_ik δ_jl + βδ_ij δ_kl, 1-based j.
pub fn star_metric(calc: &CalculusData, p: &MetricParams) -> Tensor {
    let n = calc.n();
    let q = &calc.group.q;
    let sig = IndexSignature::pairs(n, 1);
    Tensor::from_fn(sig.clone(), sig, |r, c| {
        let (i, j, k, l) = (r / n, r % n, c / n, c % n);
        let mut v = Scalar::zero();
        if i == k && j == l {
            v = v.add(&q.pow(2 * (j as i64 + 1)).mul(&p.alpha));
        }
        if i == j && k == l {
            v = v.add(&p.beta);
        }
        v
    })
}

/// The ansatz basis A₁..A₆ with the R̂ reading of A₆.
pub fn star_basis(calc: &CalculusData) -> Vec<Tensor> {
    let mut b = sl_basis(&calc.group)[..5].to_vec();
    b.push(build_a6(&calc.group, A6Variant::NR));
    b
}

/// Rows of the alternative compatibility condition in λ₁..λ₆.
pub fn star_compat_rows(basis: &[Tensor], g: &Tensor, n: usize) -> Vec<Row> {
    let n2 = n * n;
    let mut rows = Vec::new();
    for i in 0..n2 {
        for j in 0..n2 {
            for a in 0..n {
                for b in 0..n {
                    let (ab, ba) = (a * n + b, b * n + a);
                    let mut row = Row::new();
                    for (k, ak) in basis.iter().enumerate() {
                        let mut v = Scalar::zero();
                        for bb in 0..n2 {
                            let x = ak.get(ab * n2 + bb, i);
                            if !x.is_zero() {
                                v = v.add(&x.mul(&g.get(bb, j)));
                            }
                            let y = ak.get(ba * n2 + bb, j);
                            if !y.is_zero() {
                                v = v.sub(&g.get(i, bb).mul(&y));
                            }
                        }
                        if !v.is_zero() {
                            row.push((k, v));
                        }
                    }
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
        }
    }
    rows
}

fn dense(row: &[Scalar]) -> Row {
    row.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, x)| (j, x.clone())).collect()
}

fn flat_rank(rows: &[Row], k: usize) -> usize {
    rank(&Tensor::from_rows(IndexSignature::flat(rows.len()), IndexSignature::flat(k), rows.to_vec()))
}

fn affine_dim(s: &Solution) -> Option<usize> {
    match s {
        Solution::Unique(_) => Some(0),
        Solution::Family { kernel, .. } => Some(kernel.len()),
        Solution::Inconsistent => None,
    }
}

/// Assembles and solves the alternative Levi-Civita system.
pub fn star_lc_solution_space(calc: &CalculusData, p: &MetricParams) -> Result<StarLcSpace, AppendixError> {
    let g = &calc.group;
    if g.spec.series != Series::SL || g.spec.sign != Sign::Plus {
        return Err(AppendixError::Unsupported(format!("{}: only SL with Γ₊", g.spec)));
    }
    let n = g.n;
    let n2 = n * n;
    let basis = star_basis(calc);
    let k = basis.len();
    let pair = build_metric(g, p)?;
    let torsion = lc_system(calc, &pair, &basis).torsion;
    let gm = star_metric(calc, p);
    let metric_rows = star_compat_rows(&basis, &gm, n);
    let metric_rank = flat_rank(&metric_rows, k);
    let (a, b) = (&p.alpha, &p.beta);
    let qi = g.q.inv().expect("q nonzero");
    // λ₂α − λ₃(α+𝔰β) − λ₅β − q⁻¹λ₆β = 0
    let printed_metric = vec![Scalar::zero(), a.clone(), a.add(&g.frak_s.mul(b)).neg(), Scalar::zero(), b.neg(), qi.mul(b).neg()];
    let mut with_printed = metric_rows.clone();
    with_printed.push(dense(&printed_metric));
    let metric_matches_printed = metric_rank == 1 && flat_rank(&with_printed, k) == 1;
    // Qλ₃ = Qλ₄ = qλ₅ − (Q²+1)λ₆ + Q
    let bq = &g.big_q;
    let t_rhs = |c: usize| {
        let mut r = vec![Scalar::zero(); k];
        r[c] = bq.clone();
        r[4] = g.q.neg();
        r[5] = bq.mul(bq).add(&Scalar::one());
        (r, bq.clone())
    };
    let torsion_matches_printed = same_space(&torsion, &[t_rhs(2), t_rhs(3)]);

    let mut rows: Vec<Row> = torsion.matrix.rows().to_vec();
    let mut rhs = torsion.rhs.clone();
    rows.extend(metric_rows.iter().cloned());
    rhs.extend(std::iter::repeat_with(Scalar::zero).take(metric_rows.len()));
    let labels = torsion.labels.clone();
    let system = LinearSystem::new(rows.clone(), rhs.clone(), labels.clone())?;
    let solution = solve_affine(&system);

    // ∇(η) = c₁ q^{−2m}η_mn⊗η_nm + c₂ η⊗η with c₁, c₂ linear in λ.
    let eta = &calc.eta;
    let mut t1 = vec![Scalar::zero(); n2 * n2];
    for m in 0..n {
        for nn in 0..n {
            t1[(m * n + nn) * n2 + nn * n + m] = g.q.pow(-2 * (m as i64 + 1));
        }
    }
    let t2: Vec<Scalar> = (0..n2 * n2).map(|x| eta[x / n2].mul(&eta[x % n2])).collect();
    let s = &g.frak_s;
    let c1 = [Scalar::zero(), s.clone(), Scalar::zero(), Scalar::zero(), Scalar::one(), qi.clone()];
    let c2 = [s.clone(), Scalar::zero(), Scalar::one(), Scalar::one(), Scalar::zero(), g.q.pow(2 * n as i64).mul(bq)];
    let nabla_eta_matches = basis.iter().enumerate().all(|(kk, a)| {
        let got = a.apply(eta);
        got.iter().enumerate().all(|(x, v)| *v == c1[kk].mul(&t1[x]).add(&c2[kk].mul(&t2[x])))
    });
    rows.push(dense(&c1));
    rhs.push(Scalar::zero());
    let restricted = LinearSystem::new(rows, rhs, labels)?;
    let eta_restricted_dim = affine_dim(&solve_affine(&restricted));

    let braided = sl_theorem_lambda(g, p, Sign::Plus)?;
    let contains_braided_solution = system.residual(&braided).iter().all(|x| x.is_zero());
    Ok(StarLcSpace {
        affine_dim: affine_dim(&solution),
        system,
        solution,
        metric_rank,
        metric_matches_printed,
        torsion_matches_printed,
        nabla_eta_matches,
        eta_restricted_dim,
        contains_braided_solution,
    })
}
