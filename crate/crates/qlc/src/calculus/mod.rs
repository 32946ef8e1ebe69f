//! One bicovariant calculus Γ±,z: χ and f functionals, the braiding σ, the
//! bi-invariant form η, projections onto the ad-invariant subspaces, bracket
//! constants, the standard-basis transform and intertwiner spaces.

mod basis;
mod mor;

use rayon::prelude::*;
use thiserror::Error;

use crate::functional::{Atom, Evaluator, FunctionalWord, LTables};
use crate::group::{build_group_data, GroupData, GroupError, GroupSpec, Kind, Series, Sign};
use crate::scalar::Scalar;
use crate::tensor::{inverse, Factor, IndexSignature, Tensor};

pub use basis::{build_a6, leg_map, morphism_basis, sl_basis, A6Variant, LegOp, LEG_PROGRAMS};
pub use mor::{intertwiner_defect, intertwiner_test, mor_space, MorphismSpace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CalculusError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("signature mismatch: {0}")]
    Signature(String),
    #[error("singular transform: {0}")]
    Singular(String),
}

/// The corepresentation v = u^c ⊗ u.
pub fn v_word() -> Vec<Factor> {
    vec![Factor::Uc, Factor::U]
}

/// v ⊗ v.
pub fn vv_word() -> Vec<Factor> {
    vec![Factor::Uc, Factor::U, Factor::Uc, Factor::U]
}

pub fn v_sig(n: usize) -> IndexSignature {
    IndexSignature::new(n, v_word())
}

pub fn vv_sig(n: usize) -> IndexSignature {
    IndexSignature::new(n, vv_word())
}

/// Constants of the standard-basis transform.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisConstants {
    /// μ±,z and ν±,z.
    Sl { mu: Scalar, nu: Scalar },
    /// μ₀±, μ₁±, μ₂±.
    Bcd { mu0: Scalar, mu1: Scalar, mu2: Scalar },
}

/// Assembled data of one calculus. Immutable after construction.
#[derive(Clone, Debug)]
pub struct CalculusData {
    pub spec: GroupSpec,
    pub group: GroupData,
    pub ev: Evaluator,
    /// σ in the basis η_ij ⊗ η_kl.
    pub sigma: Tensor,
    /// Row (i,j), column (n,m): χ_ij(uⁿₘ).
    pub chi_on_u: Tensor,
    /// Entry `((i*N+j)*N+m)*N+n` is the matrix of f^{ij}_{mn} on u.
    pub f_on_u: Vec<Tensor>,
    /// η = Σ_a c_a η_aa as a vector over the N² basis.
    pub eta: Vec<Scalar>,
    /// P₀, P₁ (SL) or P₀, P₁, P₂ (O/Sp).
    pub projections: Vec<Tensor>,
    pub constants: BasisConstants,
}

fn other(k: Kind) -> Kind {
    match k {
        Kind::Plus => Kind::Minus,
        Kind::Minus => Kind::Plus,
    }
}

impl CalculusData {
    pub fn n(&self) -> usize {
        self.group.n
    }

    pub fn n2(&self) -> usize {
        self.group.n * self.group.n
    }

    /// χ_ij on a corepresentation word, indexed `i*N+j`.
    pub fn chi(&self, word: &[Factor]) -> Vec<Tensor> {
        chi_family(&self.ev, &self.group, word)
    }

    /// f^{ij}_{mn} on a corepresentation word, indexed `((i*N+j)*N+m)*N+n`.
    pub fn f(&self, word: &[Factor]) -> Vec<Tensor> {
        f_family(&self.ev, &self.group, word)
    }

    /// Eigenvalues whose linear factors annihilate σ.
    pub fn sigma_roots(&self) -> Vec<Scalar> {
        sigma_roots(&self.group)
    }

    /// Eigenvalues of σ factored out in the second exterior power.
    pub fn quotient_roots(&self) -> Vec<Scalar> {
        let g = &self.group;
        match g.spec.series {
            Series::SL => vec![Scalar::one()],
            _ => {
                let n = g.n as i64;
                vec![Scalar::one(), g.qp(n), g.qp(-n)]
            }
        }
    }

    /// `Π (σ - λ)` over the given roots applied to a tensor.
    pub fn sigma_poly_apply(&self, roots: &[Scalar], x: &Tensor) -> Tensor {
        let mut m = x.clone();
        for l in roots {
            let s = self.sigma.contract(&m).expect("σ acts on v⊗v");
            m = s.axpy(&m, &l.neg()).expect("same shape");
        }
        m
    }

    /// Defining vector of η ⊗ η_i + η_i ⊗ η for every basis index i, as
    /// the columns of an operator v → v⊗v.
    pub fn d_eta_operator(&self) -> Tensor {
        let n2 = self.n2();
        let mut trip = Vec::new();
        for i in 0..n2 {
            for (a, c) in self.eta.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                trip.push((a * n2 + i, i, c.clone()));
                trip.push((i * n2 + a, i, c.clone()));
            }
        }
        Tensor::from_triplets(vv_sig(self.n()), v_sig(self.n()), trip)
    }

    /// Structure constants: entry `(I*N²+J, K)` is the coefficient of χ_K
    /// in [χ_I, χ_J] = χ_J(v^I_K) χ_K.
    pub fn bracket_constants(&self) -> Tensor {
        let n2 = self.n2();
        let chi_v = self.chi(&v_word());
        Tensor::from_fn(IndexSignature::pairs(self.n(), 2), IndexSignature::pairs(self.n(), 1), |r, k| {
            chi_v[r % n2].get(r / n2, k)
        })
    }

    /// Standard basis transform: T with ω_ij = Σ T[(ab),(ij)] η_ab and its
    /// inverse, which gives X_ij = Σ T⁻¹[(ij),(ab)] χ_ab.
    pub fn standard_basis_transform(&self) -> Result<(Tensor, Tensor), CalculusError> {
        let t = self.chi_on_u.clone();
        let ti = inverse(&t).map_err(|e| CalculusError::Singular(e.to_string()))?;
        Ok((t, ti))
    }
}

/// χ_ij = Σ_n D_n⁻¹ l(lead)ⁿ_i κ(l(other)ʲ_n) − D_i⁻¹ δ_ij ε as a functional word.
pub fn chi_word(g: &GroupData, i: usize, j: usize) -> FunctionalWord {
    let mut w = FunctionalWord::default();
    for m in 0..g.n {
        let dinv = g.d[m].inv().expect("D nonzero");
        let a = Atom::L { kind: g.lead, kappa: false, i: m, j: i };
        let b = Atom::L { kind: other(g.lead), kappa: true, i: j, j: m };
        w.terms.push((dinv, vec![a, b]));
    }
    if i == j {
        w.terms.push((g.d[i].inv().expect("D nonzero").neg(), vec![Atom::Eps]));
    }
    w
}

/// Entries (a, b, n, m) where X_ab(uⁿ_m) ≠ δ_an δ_bm, with X = T⁻¹χ from
/// `standard_basis_transform` and each X_ab evaluated on u by direct
/// coproduct expansion rather than through the matrix families.
pub fn standard_duality_defects(calc: &CalculusData) -> Result<Vec<(usize, usize, usize, usize)>, CalculusError> {
    let n = calc.n();
    let n2 = n * n;
    let (_, ti) = calc.standard_basis_transform()?;
    let chi: Vec<FunctionalWord> = (0..n2).map(|ij| chi_word(&calc.group, ij / n, ij % n)).collect();
    let bad = (0..n2)
        .into_par_iter()
        .flat_map_iter(|ab| {
            let x = ti.row(ab).iter().fold(FunctionalWord::default(), |acc, (ij, c)| acc.plus(&chi[*ij].scaled(c)));
            let mut out = Vec::new();
            for nm in 0..n2 {
                let v = calc.ev.eval_entry_naive(&x, &[Factor::U], nm / n, nm % n);
                let want = if nm == ab { Scalar::one() } else { Scalar::zero() };
                if v != want {
                    out.push((ab / n, ab % n, nm / n, nm % n));
                }
            }
            out
        })
        .collect();
    Ok(bad)
}

/// χ_ij = Σ_n D_n⁻¹ l(lead)ⁿ_i κ(l(other)ʲ_n) − D_i⁻¹ δ_ij ε on a word.
pub fn chi_family(ev: &Evaluator, g: &GroupData, word: &[Factor]) -> Vec<Tensor> {
    let n = g.n;
    let e1 = ev.family(g.lead, false, word);
    let e2 = ev.family(other(g.lead), true, word);
    let sig = IndexSignature::new(n, word.to_vec());
    let dinv: Vec<Scalar> = g.d.iter().map(|d| d.inv().expect("D nonzero")).collect();
    (0..n * n)
        .into_par_iter()
        .map(|ij| {
            let (i, j) = (ij / n, ij % n);
            let mut acc = Tensor::zeros(sig.clone(), sig.clone());
            for m in 0..n {
                let p = e1[m * n + i].contract(&e2[j * n + m]).expect("same word");
                acc = acc.axpy(&p, &dinv[m]).expect("same shape");
            }
            if i == j {
                acc = acc.axpy(&Tensor::identity(sig.clone()), &dinv[i].neg()).expect("same shape");
            }
            acc
        })
        .collect()
}

/// f^{ij}_{mn} = l(lead)ⁱ_m κ(l(other)ⁿ_j) on a word.
pub fn f_family(ev: &Evaluator, g: &GroupData, word: &[Factor]) -> Vec<Tensor> {
    let n = g.n;
    let e1 = ev.family(g.lead, false, word);
    let e2 = ev.family(other(g.lead), true, word);
    (0..n * n * n * n)
        .into_par_iter()
        .map(|x| {
            let (ij, mn) = (x / (n * n), x % (n * n));
            let (i, j, m, nn) = (ij / n, ij % n, mn / n, mn % n);
            e1[i * n + m].contract(&e2[nn * n + j]).expect("same word")
        })
        .collect()
}

/// σ^{mnrs}_{ijkl} = f^{ij}_{rs}(v^{mn}_{kl}).
pub fn build_sigma(ev: &Evaluator, g: &GroupData) -> Tensor {
    let n = g.n;
    let n2 = n * n;
    let fv = f_family(ev, g, &v_word());
    let mut trip = Vec::new();
    for (x, m) in fv.iter().enumerate() {
        let (ij, rs) = (x / n2, x % n2);
        for (row, r) in m.rows().iter().enumerate() {
            for (col, v) in r {
                trip.push((row * n2 + rs, ij * n2 + col, v.clone()));
            }
        }
    }
    Tensor::from_triplets(vv_sig(n), vv_sig(n), trip)
}

/// Roots of the minimal polynomial of σ.
pub fn sigma_roots(g: &GroupData) -> Vec<Scalar> {
    let q2 = g.qp(2);
    let mut out = vec![Scalar::one(), g.qp(-2).neg(), q2.neg()];
    if let Some(e) = g.spec.epsilon() {
        let n = g.n as i64;
        out.push(g.qp(n - e + 1).scale_int(e));
        out.push(g.qp(e - n - 1).scale_int(e));
        out.push(g.qp(n - e - 1).scale_int(-e));
        out.push(g.qp(e - n + 1).scale_int(-e));
    }
    out
}

/// `Π (M - λ)` applied to column `j` of the identity.
pub fn poly_on_column(m: &Tensor, roots: &[Scalar], j: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); m.ncols()];
    v[j] = Scalar::one();
    for l in roots {
        let w = m.apply(&v);
        v = w.iter().zip(&v).map(|(a, b)| a.sub(&b.mul(l))).collect();
    }
    v
}

/// First column on which `Π (M - λ)` does not vanish.
pub fn poly_witness(m: &Tensor, roots: &[Scalar]) -> Option<(usize, usize, Scalar)> {
    (0..m.ncols()).into_par_iter().find_map_first(|j| {
        let v = poly_on_column(m, roots, j);
        v.iter().position(|x| !x.is_zero()).map(|i| (i, j, v[i].clone()))
    })
}

/// Certifies the minimal polynomial of σ: the full product vanishes and
/// no product with one factor dropped does. Returns failures as messages.
pub fn check_sigma_minpoly(calc: &CalculusData) -> Vec<String> {
    let roots = calc.sigma_roots();
    let mut out = Vec::new();
    if let Some(w) = poly_witness(&calc.sigma, &roots) {
        out.push(format!("product does not vanish at {:?}", (w.0, w.1)));
    }
    for k in 0..roots.len() {
        let mut r = roots.clone();
        r.remove(k);
        if poly_witness(&calc.sigma, &r).is_none() {
            out.push(format!("factor {k} is not needed"));
        }
    }
    out
}

/// SL: P₀ = 𝔰⁻¹ D_i⁻¹ δ_ij δ_kl. O/Sp: P₀ = 𝔰⁻¹ Bᵗⁱ_m C^{mj} δ_kl and P±.
pub fn build_projections(g: &GroupData) -> Vec<Tensor> {
    let n = g.n;
    let sig = v_sig(n);
    let sinv = g.frak_s.inv().expect("𝔰 nonzero");
    let id = Tensor::identity(sig.clone());
    match g.spec.series {
        Series::SL => {
            let p0 = Tensor::from_fn(sig.clone(), sig.clone(), |r, c| {
                let (i, j) = (r / n, r % n);
                let (k, l) = (c / n, c % n);
                if i == j && k == l {
                    sinv.div(&g.d[i]).expect("D nonzero")
                } else {
                    Scalar::zero()
                }
            });
            let p1 = id.sub(&p0).expect("same shape");
            vec![p0, p1]
        }
        Series::O | Series::Sp => {
            let c = g.c.as_ref().expect("C for O/Sp");
            let b = g.b.as_ref().expect("B for O/Sp");
            let p0 = Tensor::from_fn(sig.clone(), sig.clone(), |r, col| {
                let (i, j) = (r / n, r % n);
                let (k, l) = (col / n, col % n);
                if k != l {
                    return Scalar::zero();
                }
                (0..n).map(|m| b[m][i].mul(&c[m][j])).sum::<Scalar>().mul(&sinv)
            });
            // Bᵗⁱ_m R̂^{mj}_{nl} Cᵗⁿ_k
            let brc = Tensor::from_fn(sig.clone(), sig.clone(), |r, col| {
                let (i, j) = (r / n, r % n);
                let (k, l) = (col / n, col % n);
                let mut acc = Scalar::zero();
                for m in 0..n {
                    if b[m][i].is_zero() {
                        continue;
                    }
                    for nn in 0..n {
                        if c[k][nn].is_zero() {
                            continue;
                        }
                        let x = g.rhat.get(m * n + j, nn * n + l);
                        if !x.is_zero() {
                            acc = acc.add(&b[m][i].mul(&x).mul(&c[k][nn]));
                        }
                    }
                }
                acc
            });
            let q = g.qp(1);
            let qi = g.qp(-1);
            let p = g.p.clone().expect("p for O/Sp");
            let pi = p.inv().expect("p nonzero");
            let w = q.add(&qi).inv().expect("q + q⁻¹ nonzero");
            let plus = id
                .scale(&qi)
                .add(&brc)
                .and_then(|x| x.axpy(&p0, &qi.add(&pi).neg()))
                .expect("same shape")
                .scale(&w);
            let minus = id
                .scale(&q)
                .sub(&brc)
                .and_then(|x| x.axpy(&p0, &pi.sub(&q)))
                .expect("same shape")
                .scale(&w);
            match g.spec.series {
                Series::O => vec![p0, minus, plus],
                _ => vec![p0, plus, minus],
            }
        }
    }
}

/// Constants μ, ν (SL) or μ₀, μ₁, μ₂ (O/Sp) of the standard-basis transform.
pub fn basis_constants(g: &GroupData) -> BasisConstants {
    let qi = g.qp(-1);
    let big_q = g.big_q.clone();
    let s = g.frak_s.clone();
    let one = Scalar::one();
    match g.spec.series {
        Series::SL => {
            let z = g.z.clone();
            let zi = z.inv().expect("z nonzero");
            let n = g.n as i64;
            match g.spec.sign {
                Sign::Plus => {
                    let nu = zi.mul(&qi).mul(&big_q);
                    let mu = s.mul(&zi.sub(&one)).add(&nu);
                    BasisConstants::Sl { mu, nu }
                }
                Sign::Minus => {
                    let nu = z.mul(&g.qp(-2 * n - 1)).mul(&big_q).neg();
                    let mu = s.mul(&z.sub(&one)).add(&nu);
                    BasisConstants::Sl { mu, nu }
                }
            }
        }
        _ => {
            let p = g.p.clone().expect("p for O/Sp");
            let pi = p.inv().expect("p nonzero");
            let n = g.n as i64;
            let base = p.sub(&pi).mul(&big_q);
            let (mu0, sign) = match g.spec.sign {
                Sign::Plus => (base, 1),
                Sign::Minus => (base.add(&s.scale_int(2)), -1),
            };
            let mu1 = p.mul(&one.add(&g.qp(-n))).mul(&big_q).scale_int(sign);
            let mu2 = p.sub(&pi.mul(&g.qp(n))).mul(&big_q).scale_int(sign);
            BasisConstants::Bcd { mu0, mu1, mu2 }
        }
    }
}

/// Builds and certifies the calculus for one spec.
pub fn build_calculus(spec: GroupSpec) -> Result<CalculusData, CalculusError> {
    let group = build_group_data(spec)?;
    build_calculus_from(group)
}

/// Builds the calculus on prebuilt group data.
pub fn build_calculus_from(group: GroupData) -> Result<CalculusData, CalculusError> {
    let n = group.n;
    let ev = Evaluator::new(LTables::new(&group));
    let u = [Factor::U];
    let chi_u = chi_family(&ev, &group, &u);
    let sig = v_sig(n);
    let chi_on_u = Tensor::from_fn(sig.clone(), sig, |r, c| chi_u[r].get(c / n, c % n));
    let f_on_u = f_family(&ev, &group, &u);
    let sigma = build_sigma(&ev, &group);
    let eta = build_eta(&group);
    let projections = build_projections(&group);
    let constants = basis_constants(&group);
    let calc = CalculusData { spec: group.spec, group, ev, sigma, chi_on_u, f_on_u, eta, projections, constants };
    let bad = eta_certification_defects(&calc);
    if !bad.is_empty() {
        return Err(CalculusError::Certification(format!("η identity fails at χ indices {bad:?}")));
    }
    Ok(calc)
}

/// η = Σ_a D_a⁻¹ η_aa.
pub fn build_eta(g: &GroupData) -> Vec<Scalar> {
    let n = g.n;
    let mut out = vec![Scalar::zero(); n * n];
    for a in 0..n {
        out[a * n + a] = g.d[a].inv().expect("D nonzero");
    }
    out
}

/// Indices (i,j) where χ_ij ≠ Σ_n c_n f^{nn}_{ij} − c_i δ_ij ε on u.
pub fn eta_certification_defects(calc: &CalculusData) -> Vec<(usize, usize)> {
    let n = calc.n();
    let sig = IndexSignature::new(n, vec![Factor::U]);
    let chi_u = calc.chi(&[Factor::U]);
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut acc = Tensor::zeros(sig.clone(), sig.clone());
            for m in 0..n {
                let c = &calc.eta[m * n + m];
                if c.is_zero() {
                    continue;
                }
                acc = acc.axpy(&calc.f_on_u[((m * n + m) * n + i) * n + j], c).expect("same shape");
            }
            if i == j {
                acc = acc.axpy(&Tensor::identity(sig.clone()), &calc.eta[i * n + i].neg()).expect("same shape");
            }
            if acc != chi_u[i * n + j] {
                out.push((i, j));
            }
        }
    }
    out
}

/// Whether σ(x⊗η) = η⊗x and whether σ(η⊗x) = x⊗η, for all basis x.
pub fn eta_braiding(calc: &CalculusData) -> (bool, bool) {
    let n2 = calc.n2();
    let vec_of = |left: bool, b: usize| -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); n2 * n2];
        for (a, c) in calc.eta.iter().enumerate() {
            if !c.is_zero() {
                let idx = if left { a * n2 + b } else { b * n2 + a };
                v[idx] = c.clone();
            }
        }
        v
    };
    let mut x_eta = true;
    let mut eta_x = true;
    for b in 0..n2 {
        let ex = vec_of(true, b);
        let xe = vec_of(false, b);
        if calc.sigma.apply(&xe) != ex {
            x_eta = false;
        }
        if calc.sigma.apply(&ex) != xe {
            eta_x = false;
        }
    }
    (x_eta, eta_x)
}

/// Coordinates of the ω-basis elements in η-coordinates.
pub struct OmegaVectors {
    /// ω⁰.
    pub w0: Vec<Scalar>,
    /// ω¹_ij, indexed `i*N+j`.
    pub w1: Vec<Vec<Scalar>>,
    /// ω²_ij (O/Sp only).
    pub w2: Vec<Vec<Scalar>>,
}

/// ω⁰ = P₀^{kl}_{11} ω_kl, ω¹_ij = P₁^{kl}_{ij} ω_kl and ω²_ij = P₂^{kl}_{ij} ω_kl
/// in η-coordinates.
pub fn omega_vectors(calc: &CalculusData) -> Result<OmegaVectors, CalculusError> {
    let (t, _) = calc.standard_basis_transform()?;
    let n2 = calc.n2();
    let p = &calc.projections;
    let w0 = t.apply(&p[0].column(0));
    let w1 = (0..n2).map(|c| t.apply(&p[1].column(c))).collect();
    let w2 = if p.len() > 2 { (0..n2).map(|c| t.apply(&p[2].column(c))).collect() } else { Vec::new() };
    Ok(OmegaVectors { w0, w1, w2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Series, Sign};

    fn calc(series: Series, n: usize, sign: Sign) -> CalculusData {
        build_calculus(GroupSpec::new(series, n, sign).unwrap()).unwrap()
    }

    #[test]
    fn sl2_sigma_cubic_and_eta() {
        let c = calc(Series::SL, 2, Sign::Plus);
        assert!(check_sigma_minpoly(&c).is_empty());
        let q = c.group.qp(1);
        assert_eq!(c.eta[0], q.pow(-2));
        assert_eq!(c.eta[3], q.pow(-4));
        assert!(eta_braiding(&c).0);
        assert!(standard_duality_defects(&c).unwrap().is_empty());
    }

    #[test]
    fn projections_are_complete_idempotents() {
        for (s, n) in [(Series::SL, 3), (Series::O, 3), (Series::Sp, 4)] {
            let c = calc(s, n, Sign::Plus);
            let id = Tensor::identity(v_sig(n));
            let mut sum = Tensor::zeros(v_sig(n), v_sig(n));
            for (a, p) in c.projections.iter().enumerate() {
                assert_eq!(p.contract(p).unwrap(), *p, "{s} P{a} idempotent");
                for (b, r) in c.projections.iter().enumerate() {
                    if a != b {
                        assert!(p.contract(r).unwrap().is_zero());
                    }
                }
                assert!(intertwiner_test(&c, p, &v_word(), &v_word()).unwrap(), "{s} P{a} intertwines");
                sum = sum.add(p).unwrap();
            }
            assert_eq!(sum, id);
        }
    }

    #[test]
    fn minimal_polynomials_and_eta_all_specs() {
        for (s, n) in [(Series::SL, 3), (Series::O, 3), (Series::Sp, 4)] {
            for sign in [Sign::Plus, Sign::Minus] {
                let c = calc(s, n, sign);
                assert!(check_sigma_minpoly(&c).is_empty(), "{s} {n} {sign:?}");
                assert!(eta_braiding(&c).0);
            }
        }
    }

    #[test]
    fn morphism_dimensions() {
        for (s, n, d1, d2) in [(Series::SL, 2, 2, 5), (Series::SL, 3, 2, 6), (Series::O, 3, 3, 15), (Series::Sp, 4, 3, 14)] {
            let c = calc(s, n, Sign::Plus);
            let m1 = mor_space(&c, &vv_word(), &[]);
            assert_eq!(m1.dim(), d1, "{s} {n} Mor(vv,1)");
            let m2 = mor_space(&c, &v_word(), &vv_word());
            assert_eq!(m2.dim(), d2, "{s} {n} Mor(v,vv)");
            for a in morphism_basis(&c) {
                assert!(intertwiner_test(&c, &a, &v_word(), &vv_word()).unwrap());
            }
        }
    }
}
