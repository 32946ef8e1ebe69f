//! Bicovariant connections on Γ: torsion and metric-compatibility defects,
//! the Levi-Civita solver, the dual connection, curvature and classical
//! limits.
//!
//! A left-invariant connection is stored as D with
//! ∇η_i = Σ D[(j·N²+k), i] η_j⊗η_k. It is bicovariant iff D ∈ Mor(v, v⊗v),
//! so the solver works in the span of the explicit maps A_k.

mod classical;
mod printed;

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::calculus::{
    intertwiner_test, morphism_basis, v_sig, v_word, vv_sig, vv_word, CalculusData, CalculusError,
};
use crate::metric::{MetricError, MetricPair};
use crate::scalar::Scalar;
use crate::tensor::{solve_affine, Echelon, IndexSignature, LinearSystem, Row, Solution, Tensor, TensorError};

pub use classical::{classical_limit_connection, ClassicalLimit};
pub use printed::{
    bcd_printed_lambda, compare_with_printed, decompose, same_space, sl_printed_compat, sl_printed_torsion,
    sl_theorem_lambda, DisplayMatch, MatchReport, TermMatch,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LcError {
    #[error("the Levi-Civita system has no solution")]
    Inconsistent,
    #[error("the Levi-Civita connection is not unique: {0}-dimensional family of connections")]
    NonUnique(usize),
    #[error("solved connection fails certification: {0}")]
    Certification(String),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// The eigenvalues of σ whose eigenspaces are factored out in Γ².
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSpec {
    pub roots: Vec<Scalar>,
}

impl QuotientSpec {
    /// SL: {1}. O/Sp: {1, q^N, q^{−N}}.
    pub fn of(calc: &CalculusData) -> QuotientSpec {
        QuotientSpec { roots: calc.quotient_roots() }
    }

    /// Pquot(σ)·x.
    pub fn apply(&self, calc: &CalculusData, x: &Tensor) -> Tensor {
        calc.sigma_poly_apply(&self.roots, x)
    }

    /// The same product without the factor (σ − 1).
    pub fn without_one(&self) -> QuotientSpec {
        QuotientSpec { roots: self.roots.iter().filter(|r| !r.is_one()).cloned().collect() }
    }
}

/// Coefficients of a left-invariant connection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionCoeffs {
    /// N⁴×N²: column i holds ∇η_i in the basis η_j⊗η_k.
    pub d: Tensor,
    /// Coordinates in the A-basis used to build D.
    pub lambda: Option<Vec<Scalar>>,
}

impl ConnectionCoeffs {
    pub fn zero(n: usize) -> ConnectionCoeffs {
        ConnectionCoeffs { d: Tensor::zeros(vv_sig(n), v_sig(n)), lambda: None }
    }

    /// D = Σ λ_k A_k.
    pub fn from_lambda(basis: &[Tensor], lambda: &[Scalar]) -> ConnectionCoeffs {
        ConnectionCoeffs { d: combine(basis, lambda), lambda: Some(lambda.to_vec()) }
    }
}

/// Σ λ_k A_k.
pub fn combine(basis: &[Tensor], lambda: &[Scalar]) -> Tensor {
    let mut d = Tensor::zeros(basis[0].signature_out().clone(), basis[0].signature_in().clone());
    for (a, l) in basis.iter().zip(lambda) {
        if !l.is_zero() {
            d = d.axpy(a, l).expect("same shape");
        }
    }
    d
}

/// Pquot(σ)·(η⊗η_i + η_i⊗η − ∇η_i) for every i, as an N⁴×N² tensor.
pub fn torsion_defect(conn: &ConnectionCoeffs, calc: &CalculusData, quot: &QuotientSpec) -> Tensor {
    let w = calc.d_eta_operator().sub(&conn.d).expect("same shape");
    quot.apply(calc, &w)
}

/// Metric-compatibility defect. Row i·N²+j, column a holds the coefficient
/// of η_a in (id⊗g)(∇η_i⊗η_j) + (g⊗id)(η_i⊗σ∇η_j), that is
/// Σ_b D[(ab),i] g_{bj} + Σ_c g_{ic} (σD)[(ca),j].
pub fn compat_defect(conn: &ConnectionCoeffs, pair: &MetricPair, calc: &CalculusData) -> Tensor {
    compat_of(&conn.d, &calc.sigma.contract(&conn.d).expect("σ acts on v⊗v"), &pair.g, calc.n())
}

fn compat_of(d: &Tensor, sd: &Tensor, g: &Tensor, n: usize) -> Tensor {
    let n2 = n * n;
    let mut acc: HashMap<(usize, usize), Scalar> = HashMap::new();
    let mut push = |r: usize, c: usize, v: Scalar| {
        let e = acc.entry((r, c)).or_insert_with(Scalar::zero);
        *e = e.add(&v);
    };
    // Σ_b D[(ab),i] g[b,j]
    for (r, row) in d.rows().iter().enumerate() {
        let (a, b) = (r / n2, r % n2);
        for (i, x) in row {
            for (j, y) in g.row(b) {
                push(i * n2 + j, a, x.mul(y));
            }
        }
    }
    // Σ_c g[i,c] (σD)[(ca),j]
    let gt = g.transpose();
    for (r, row) in sd.rows().iter().enumerate() {
        let (c, a) = (r / n2, r % n2);
        for (j, x) in row {
            for (i, y) in gt.row(c) {
                push(i * n2 + j, a, x.mul(y));
            }
        }
    }
    let trip = acc.into_iter().filter(|(_, v)| !v.is_zero()).map(|((r, c), v)| (r, c, v)).collect();
    Tensor::from_triplets(IndexSignature::pairs(n, 2), IndexSignature::pairs(n, 1), trip)
}

/// Coefficients of the entries of several tensors of one shape, keyed by
/// position: one row per position with a nonzero entry in some tensor.
fn stack_entries(ts: &[Tensor]) -> (Vec<(usize, usize)>, Vec<Row>) {
    let mut by_pos: HashMap<(usize, usize), Row> = HashMap::new();
    for (k, t) in ts.iter().enumerate() {
        for (r, row) in t.rows().iter().enumerate() {
            for (c, v) in row {
                by_pos.entry((r, *c)).or_default().push((k, v.clone()));
            }
        }
    }
    let mut keys: Vec<(usize, usize)> = by_pos.keys().copied().collect();
    keys.sort_unstable();
    let rows = keys.iter().map(|k| by_pos[k].clone()).collect();
    (keys, rows)
}

/// Torsion and compatibility equations for λ in the span of `basis`.
pub struct LcSystem {
    /// Σ_k λ_k (Pquot A_k)[r,i] = (Pquot W)[r,i].
    pub torsion: LinearSystem,
    /// Σ_k λ_k compat(A_k)[(ij),a] = 0.
    pub compat: LinearSystem,
}

impl LcSystem {
    /// Both blocks stacked.
    pub fn joint(&self) -> LinearSystem {
        let mut rows: Vec<Row> = self.torsion.matrix.rows().to_vec();
        rows.extend(self.compat.matrix.rows().iter().cloned());
        let mut rhs = self.torsion.rhs.clone();
        rhs.extend(self.compat.rhs.iter().cloned());
        LinearSystem::new(rows, rhs, self.torsion.labels.clone()).expect("matching lengths")
    }
}

fn labels(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("lambda{i}")).collect()
}

pub fn lc_system(calc: &CalculusData, pair: &MetricPair, basis: &[Tensor]) -> LcSystem {
    let quot = QuotientSpec::of(calc);
    let pa: Vec<Tensor> = basis.iter().map(|a| quot.apply(calc, a)).collect();
    let pw = quot.apply(calc, &calc.d_eta_operator());
    let (mut keys, mut trows) = stack_entries(&pa);
    let known: HashSet<(usize, usize)> = keys.iter().copied().collect();
    // Positions where only the right-hand side is nonzero still give equations.
    for (r, row) in pw.rows().iter().enumerate() {
        for (c, _) in row {
            if !known.contains(&(r, *c)) {
                keys.push((r, *c));
                trows.push(Vec::new());
            }
        }
    }
    let trhs = keys.iter().map(|&(r, c)| pw.get(r, c)).collect();
    let ca: Vec<Tensor> = basis
        .iter()
        .map(|a| compat_of(a, &calc.sigma.contract(a).expect("σ acts on v⊗v"), &pair.g, calc.n()))
        .collect();
    let (_, crows) = stack_entries(&ca);
    let crhs = vec![Scalar::zero(); crows.len()];
    let l = labels(basis.len());
    LcSystem {
        torsion: LinearSystem::new(trows, trhs, l.clone()).expect("matching lengths"),
        compat: LinearSystem::new(crows, crhs, l).expect("matching lengths"),
    }
}

/// A solved Levi-Civita connection with its certification data.
#[derive(Clone, Debug)]
pub struct LcSolution {
    pub conn: ConnectionCoeffs,
    pub basis: Vec<Tensor>,
    /// Dimension of the λ-solutions giving the same D (dependent A_k).
    pub gauge_dim: usize,
    /// Number of equations in the stacked system.
    pub equations: usize,
}

/// Solves torsion-freeness and compatibility over the explicit A-basis.
pub fn solve_levi_civita(calc: &CalculusData, pair: &MetricPair) -> Result<LcSolution, LcError> {
    solve_in_basis(calc, pair, morphism_basis(calc))
}

pub fn solve_in_basis(calc: &CalculusData, pair: &MetricPair, basis: Vec<Tensor>) -> Result<LcSolution, LcError> {
    let sys = lc_system(calc, pair, &basis).joint();
    let equations = sys.matrix.nrows();
    let (lambda, kernel) = match solve_affine(&sys) {
        Solution::Inconsistent => return Err(LcError::Inconsistent),
        Solution::Unique(x) => (x, Vec::new()),
        Solution::Family { particular, kernel } => (particular, kernel),
    };
    // Every λ-direction left free must assemble to the zero map.
    let moving = kernel.iter().filter(|v| !combine(&basis, v).is_zero()).count();
    if moving > 0 {
        return Err(LcError::NonUnique(moving));
    }
    let conn = ConnectionCoeffs::from_lambda(&basis, &lambda);
    certify(calc, pair, &conn)?;
    Ok(LcSolution { conn, basis, gauge_dim: kernel.len(), equations })
}

/// Torsion-free, compatible and bicovariant, exactly.
pub fn certify(calc: &CalculusData, pair: &MetricPair, conn: &ConnectionCoeffs) -> Result<(), LcError> {
    let fail = |what: &str, t: &Tensor| {
        let (r, c, _) = t.first_nonzero().expect("nonzero");
        Err(LcError::Certification(format!("{what} defect at ({r}, {c})")))
    };
    let t = torsion_defect(conn, calc, &QuotientSpec::of(calc));
    if !t.is_zero() {
        return fail("torsion", &t);
    }
    let c = compat_defect(conn, pair, calc);
    if !c.is_zero() {
        return fail("compatibility", &c);
    }
    if !intertwiner_test(calc, &conn.d, &v_word(), &vv_word())? {
        return Err(LcError::Certification("D is not an intertwiner".into()));
    }
    Ok(())
}

/// Coefficients of the dual connection with the two reformulated identities.
#[derive(Clone, Debug)]
pub struct DualConnection {
    /// Row i·N²+j, column k: coefficient of χ_k in ∇*_{χ_i}(χ_j), equal to −D[(ij),k].
    pub coeffs: Tensor,
    /// ∇*_{χ_i}χ_j − σ^{ij}_{kl}∇*_{χ_k}χ_l = [χ_i,χ_j] modulo the quotient.
    pub torsion_holds: bool,
    /// g*(χ_i⊗∇*_{χ_j}χ_k) + g*(σ(χ_i⊗∇*_{χ_j})⊗χ_k) = 0 in coordinates.
    pub compat_holds: bool,
}

/// Dual connection on the quantum Lie algebra and its two identities.
///
/// The torsion identity is tested after applying Pquot'(σ) (the factors
/// other than σ − 1), which is the form the primal condition takes on the
/// dual side when Γ² has extra quotient factors. For SL Pquot' = id.
pub fn dual_connection(conn: &ConnectionCoeffs, pair: &MetricPair, calc: &CalculusData) -> DualConnection {
    let n = calc.n();
    let n2 = n * n;
    let gamma = conn.d.clone().with_signatures(IndexSignature::pairs(n, 2), IndexSignature::pairs(n, 1)).expect("N⁴×N²");
    let coeffs = gamma.scale(&Scalar::int(-1));
    // Torsion: Pquot'(σ)(D − σD) = Pquot'(σ)·B with B[(IJ),K] = χ_J(v^I_K).
    let sigma = calc.sigma.clone().with_signatures(IndexSignature::pairs(n, 2), IndexSignature::pairs(n, 2)).expect("N⁴×N⁴");
    let lhs = coeffs.sub(&sigma.contract(&coeffs).expect("σ on pairs")).expect("same shape");
    let diff = lhs.sub(&calc.bracket_constants()).expect("same shape");
    let pq = QuotientSpec::of(calc).without_one();
    let mut t = diff;
    for l in &pq.roots {
        let s = sigma.contract(&t).expect("σ on pairs");
        t = s.axpy(&t, &l.neg()).expect("same shape");
    }
    let torsion_holds = t.is_zero();
    // Compatibility: Σ_M G*[i,M] N[(jk),M] + Σ_{mn} σ[(ij),(mn)] Σ_M N[(mn),M] G*[M,k] = 0.
    let gs = pair.gstar.clone().with_signatures(IndexSignature::pairs(n, 1), IndexSignature::pairs(n, 1)).expect("N²×N²");
    let mut compat_holds = true;
    // σ·(N·G*): the second term for every (i,j) and k.
    let sng = sigma.contract(&coeffs.contract(&gs).expect("pair slots")).expect("σ on pairs");
    'outer: for i in 0..n2 {
        for j in 0..n2 {
            for k in 0..n2 {
                let mut v = sng.get(i * n2 + j, k);
                for (m, x) in gs.row(i) {
                    v = v.add(&x.mul(&coeffs.get(j * n2 + k, *m)));
                }
                if !v.is_zero() {
                    compat_holds = false;
                    break 'outer;
                }
            }
        }
    }
    DualConnection { coeffs, torsion_holds, compat_holds }
}

/// Curvature with Γ²-classes in the echelon complement of K = ker Pquot(σ).
#[derive(Clone, Debug)]
pub struct Curvature {
    /// N⁶×N²: column i holds R(η_i) with slots (Γ⊗Γ class) ⊗ Γ.
    pub r: Tensor,
    /// Pquot(σ)⊗id applied to the representative, a map v → v⊗v⊗v.
    pub image: Tensor,
    pub kernel_dim: usize,
}

/// R(η_i) = D_i^{jk}(class(η⊗η_j + η_j⊗η)⊗η_k − class(η_j⊗∇η_k)).
pub fn curvature(conn: &ConnectionCoeffs, calc: &CalculusData, quot: &QuotientSpec) -> Result<Curvature, LcError> {
    let n = calc.n();
    let n2 = n * n;
    let id = Tensor::identity(v_sig(n));
    let w = calc.d_eta_operator();
    let raw = w.kron(&id).sub(&id.kron(&conn.d))?.contract(&conn.d)?;
    // Echelon basis of K.
    let pq = quot.apply(calc, &Tensor::identity(vv_sig(n)));
    let (_, ker) = crate::tensor::kernel_and_rank(&pq);
    let mut ech = Echelon::new(n2 * n2);
    for v in &ker {
        let row: Row = v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, x)| (j, x.clone())).collect();
        ech.insert(&row);
    }
    let mut trip = Vec::new();
    for i in 0..n2 {
        let col = raw.column(i);
        for l in 0..n2 {
            let row: Row = (0..n2 * n2)
                .filter_map(|jk| {
                    let x = &col[jk * n2 + l];
                    (!x.is_zero()).then(|| (jk, x.clone()))
                })
                .collect();
            for (jk, x) in ech.reduce(&row) {
                trip.push((jk * n2 + l, i, x));
            }
        }
    }
    let sig3 = vv_sig(n).concat(&v_sig(n));
    let r = Tensor::from_triplets(sig3.clone(), v_sig(n), trip);
    let image = pq.kron(&id).contract(&r)?;
    Ok(Curvature { r, image, kernel_dim: ker.len() })
}

#[cfg(test)]
mod tests;
