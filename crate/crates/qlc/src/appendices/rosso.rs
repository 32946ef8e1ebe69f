//! The Rosso form of U_q(sl(N)) on the quantum Lie algebra of Γ₊,z.
//!
//! Elements are formal sums of F·K·E terms whose F and E parts are words in
//! the root vectors F_ji (j > i) and E_ij (i < j). All pairing values live in
//! ℚ(r) with q = r², so (K_i, K_j) = q^{−a_ij/2} is exact.

use std::collections::BTreeMap;

use super::AppendixError;
use crate::functional::{Atom, FunctionalWord};
use crate::group::Kind;
use crate::metric::{sl_metric_matrix, sl_printed_dual};
use crate::scalar::{Scalar, S};
use crate::tensor::{inverse, IndexSignature, Tensor};

/// Laurent monomial Π K_i^{k_i} Π K̃_n^{t_n} (i < N, n ≤ N), 0-based slots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KMonomial {
    pub k: Vec<i64>,
    pub kt: Vec<i64>,
}

impl KMonomial {
    pub fn one(n: usize) -> KMonomial {
        KMonomial { k: vec![0; n - 1], kt: vec![0; n] }
    }

    /// K̃_m for 1 ≤ m ≤ N.
    pub fn kt(n: usize, m: usize) -> KMonomial {
        let mut x = KMonomial::one(n);
        x.kt[m - 1] = 1;
        x
    }

    pub fn mul(&self, o: &KMonomial) -> KMonomial {
        KMonomial {
            k: self.k.iter().zip(&o.k).map(|(a, b)| a + b).collect(),
            kt: self.kt.iter().zip(&o.kt).map(|(a, b)| a + b).collect(),
        }
    }
}

/// A root vector, 1-based: `E(i, j)` with i < j or `F(j, i)` with j > i.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Root {
    E(usize, usize),
    F(usize, usize),
}

/// One F·K·E term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FkeMonomial {
    pub f: Vec<Root>,
    pub k: KMonomial,
    pub e: Vec<Root>,
}

/// Formal linear combination of F·K·E terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FkeWord {
    pub n: usize,
    pub terms: BTreeMap<FkeMonomial, Scalar>,
}

impl FkeWord {
    pub fn zero(n: usize) -> FkeWord {
        FkeWord { n, terms: BTreeMap::new() }
    }

    pub fn push(&mut self, c: Scalar, f: Vec<Root>, k: KMonomial, e: Vec<Root>) {
        let key = FkeMonomial { f, k, e };
        let v = self.terms.remove(&key).unwrap_or_else(Scalar::zero).add(&c);
        if !v.is_zero() {
            self.terms.insert(key, v);
        }
    }
}

/// Generator pairings of the Rosso form with q = r².
#[derive(Clone, Debug)]
pub struct PairingTable {
    pub n: usize,
    pub r: Scalar,
    pub q: Scalar,
    pub big_q: Scalar,
}

fn cartan(i: usize, j: usize) -> i64 {
    match i.abs_diff(j) {
        0 => 2,
        1 => -1,
        _ => 0,
    }
}

fn d(a: usize, b: usize) -> i64 {
    i64::from(a == b)
}

impl PairingTable {
    pub fn new(n: usize, r: Scalar) -> PairingTable {
        let q = r.mul(&r);
        let big_q = q.sub(&q.inv().expect("q nonzero"));
        PairingTable { n, r, q, big_q }
    }

    /// The symbolic table with r = s.
    pub fn symbolic(n: usize) -> PairingTable {
        PairingTable::new(n, Scalar::var(S))
    }

    /// Exponent of r in (K, K'), extended bimultiplicatively.
    pub fn k_exponent(&self, a: &KMonomial, b: &KMonomial) -> i64 {
        let n = self.n;
        let mut e = 0;
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                e += a.k[i] * b.k[j] * -cartan(i, j);
            }
        }
        // (K̃_m, K_j) = q^{δ_mj − δ_{m,j+1}}
        let kt_k = |m: usize, j: usize| 2 * (d(m, j) - d(m, j + 1));
        for m in 0..n {
            for j in 0..n - 1 {
                e += a.kt[m] * b.k[j] * kt_k(m, j) + b.kt[m] * a.k[j] * kt_k(m, j);
            }
        }
        for m in 0..n {
            e += a.kt[m] * b.kt[m] * -4;
        }
        e
    }

    pub fn k_pair(&self, a: &KMonomial, b: &KMonomial) -> Scalar {
        self.r.pow(self.k_exponent(a, b))
    }

    /// (F_ij, E_kl) = −qQ⁻¹δ_il δ_jk and (E_ij, F_kl) = −q^{2i−2j+1}Q⁻¹δ_il δ_jk.
    pub fn root_pair(&self, x: Root, y: Root) -> Scalar {
        let qi = self.big_q.inv().expect("Q nonzero");
        match (x, y) {
            (Root::F(i, j), Root::E(k, l)) if i == l && j == k => self.q.mul(&qi).neg(),
            (Root::E(i, j), Root::F(k, l)) if i == l && j == k => {
                self.q.pow(2 * i as i64 - 2 * j as i64 + 1).mul(&qi).neg()
            }
            _ => Scalar::zero(),
        }
    }

    /// Pairing of an F-word with an E-word (or an E-word with an F-word).
    fn word_pair(&self, x: &[Root], y: &[Root]) -> Result<Scalar, AppendixError> {
        match (x.len(), y.len()) {
            (0, 0) => Ok(Scalar::one()),
            (1, 1) => Ok(self.root_pair(x[0], y[0])),
            (a, b) if a != b => Ok(Scalar::zero()),
            _ => Err(AppendixError::Unsupported(format!("pairing of root words of length {}", x.len()))),
        }
    }
}

/// (FKE, F'K'E') = (F,E')(K,K')(E,F'), extended bilinearly.
pub fn rosso_pair(a: &FkeWord, b: &FkeWord, table: &PairingTable) -> Result<Scalar, AppendixError> {
    let mut acc = Scalar::zero();
    for (x, cx) in &a.terms {
        for (y, cy) in &b.terms {
            let fe = table.word_pair(&x.f, &y.e)?;
            if fe.is_zero() {
                continue;
            }
            let ef = table.word_pair(&x.e, &y.f)?;
            if ef.is_zero() {
                continue;
            }
            acc = acc.add(&cx.mul(cy).mul(&fe).mul(&ef).mul(&table.k_pair(&x.k, &y.k)));
        }
    }
    Ok(acc)
}

/// The displayed expansions of χ_ij (index i·N+j, 0-based) in root vectors,
/// with coefficients in the given q.
pub fn chi_as_fke(n: usize, q: &Scalar) -> Vec<FkeWord> {
    let qp = |e: i64| q.pow(e);
    let big_q = q.sub(&q.inv().expect("q nonzero"));
    let q2 = big_q.mul(&big_q);
    let kt = |m: usize| KMonomial::kt(n, m);
    let one = KMonomial::one(n);
    let mut out = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            let mut w = FkeWord::zero(n);
            if i < j {
                w.push(qp(-1).mul(&big_q), vec![Root::F(j, i)], kt(i), vec![]);
                for r in 1..i {
                    w.push(qp(-1).mul(&q2), vec![Root::F(j, r)], kt(r), vec![Root::E(r, i)]);
                }
            } else if i > j {
                w.push(qp(-1).mul(&big_q), vec![], kt(j), vec![Root::E(j, i)]);
                for r in 1..j {
                    w.push(qp(-1).mul(&q2), vec![Root::F(j, r)], kt(r), vec![Root::E(r, i)]);
                }
            } else {
                let ii = i as i64;
                w.push(qp(-2), vec![], kt(i), vec![]);
                for m in 1..i {
                    w.push(qp(-1).mul(&big_q).mul(&qp(2 * m as i64 - 2 * ii)).neg(), vec![], kt(m), vec![]);
                }
                for nn in 1..i {
                    w.push(qp(-2).mul(&q2), vec![Root::F(i, nn)], kt(nn), vec![Root::E(nn, i)]);
                }
                let q3 = q2.mul(&big_q);
                for m in 1..i {
                    for nn in 1..m {
                        let c = qp(-1).mul(&q3).mul(&qp(2 * m as i64 - 2 * ii)).neg();
                        w.push(c, vec![Root::F(m, nn)], kt(nn), vec![Root::E(nn, m)]);
                    }
                }
                w.push(qp(-2 * ii).neg(), vec![], one.clone(), vec![]);
            }
            out.push(w);
        }
    }
    out
}

fn table_sig(n: usize) -> IndexSignature {
    IndexSignature::pairs(n, 1)
}

/// (χ_ij, χ_kl) from the FKE expansions.
pub fn rosso_chi_table(table: &PairingTable) -> Result<Tensor, AppendixError> {
    let n = table.n;
    let chi = chi_as_fke(n, &table.q);
    let mut trip = Vec::new();
    for (a, x) in chi.iter().enumerate() {
        for (b, y) in chi.iter().enumerate() {
            let v = rosso_pair(x, y, table)?;
            if !v.is_zero() {
                trip.push((a, b, v));
            }
        }
    }
    Ok(Tensor::from_triplets(table_sig(n), table_sig(n), trip))
}

/// Reading of the exponent in the δ_ij δ_kl term of the displayed table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RossoReading {
    /// q^{−2i−2j}, as typeset; not symmetric under (ij) ↔ (kl).
    Literal,
    /// q^{−2i−2k}, the symmetric form (gives (χ₁₁,χ₂₂) = q⁻⁶Q²).
    Symmetric,
}

/// −q^{−2i−1}Qδ_il δ_jk + q^{−2i−2x}Q²δ_ij δ_kl (1-based), x = j or k.
pub fn printed_rosso_table(n: usize, q: &Scalar, reading: RossoReading) -> Tensor {
    let big_q = q.sub(&q.inv().expect("q nonzero"));
    Tensor::from_fn(table_sig(n), table_sig(n), |r, c| {
        let (i, j, k, l) = (r / n, r % n, c / n, c % n);
        let i1 = i as i64 + 1;
        let x1 = match reading {
            RossoReading::Literal => j as i64 + 1,
            RossoReading::Symmetric => k as i64 + 1,
        };
        let mut v = Scalar::zero();
        if i == l && j == k {
            v = v.sub(&q.pow(-2 * i1 - 1).mul(&big_q));
        }
        if i == j && k == l {
            v = v.add(&q.pow(-2 * i1 - 2 * x1).mul(&big_q).mul(&big_q));
        }
        v
    })
}

/// Outcome of the Rosso identification for one N.
#[derive(Clone, Debug)]
pub struct RossoReport {
    pub n: usize,
    pub table: Tensor,
    /// Equality with the displayed closed form under the symmetric reading.
    pub matches_printed: bool,
    /// Equality with the displayed closed form read literally.
    pub matches_literal: bool,
    /// Equality with the inverse of the SL metric at α = −qQ⁻¹, β = −q^{2N+2}.
    pub matches_gstar: bool,
    /// Equality with the printed SL dual metric at the same parameters.
    pub matches_printed_dual: bool,
}

/// Computes the pairing table and compares it with the closed form and g*.
pub fn rosso_vs_dual_metric(n: usize) -> Result<RossoReport, AppendixError> {
    if n < 2 {
        return Err(AppendixError::Unsupported(format!("N = {n}")));
    }
    let table = PairingTable::symbolic(n);
    let chi = rosso_chi_table(&table)?;
    let q = &table.q;
    let alpha = q.div(&table.big_q).expect("Q nonzero").neg();
    let beta = q.pow(2 * n as i64 + 2).neg();
    let g = sl_metric_matrix(q, n, &alpha, &beta).with_signatures(table_sig(n), table_sig(n))?;
    let gstar = inverse(&g)?;
    let pd = sl_printed_dual(q, n, &alpha, &beta).with_signatures(table_sig(n), table_sig(n))?;
    Ok(RossoReport {
        n,
        matches_printed: chi == printed_rosso_table(n, q, RossoReading::Symmetric),
        matches_literal: chi == printed_rosso_table(n, q, RossoReading::Literal),
        matches_gstar: chi == gstar,
        matches_printed_dual: chi == pd,
        table: chi,
    })
}

fn l(kind: Kind, i: usize, j: usize) -> FunctionalWord {
    FunctionalWord::atom(Atom::L { kind, kappa: false, i: i - 1, j: j - 1 })
}

/// Root vector as a functional through E_i = Q⁻¹l⁻ⁱ_i l⁺ⁱ_{i+1},
/// F_i = −q⁻¹Q⁻¹l⁻^{i+1}_i l⁺^{i+1}_{i+1} and the composite recursions.
pub fn root_functional(root: Root, q: &Scalar) -> FunctionalWord {
    let qi = q.inv().expect("q nonzero");
    let big_qi = q.sub(&qi).inv().expect("Q nonzero");
    match root {
        Root::E(i, j) if j == i + 1 => l(Kind::Minus, i, i).times(&l(Kind::Plus, i, i + 1)).scaled(&big_qi),
        Root::E(i, j1) => {
            let a = root_functional(Root::E(i + 1, j1), q);
            let b = root_functional(Root::E(i, i + 1), q);
            a.times(&b).plus(&b.times(&a).scaled(&qi.neg()))
        }
        Root::F(j, i) if j == i + 1 => {
            l(Kind::Minus, i + 1, i).times(&l(Kind::Plus, i + 1, i + 1)).scaled(&qi.mul(&big_qi).neg())
        }
        Root::F(j1, i) => {
            let a = root_functional(Root::F(i + 1, i), q);
            let b = root_functional(Root::F(j1, i + 1), q);
            a.times(&b).plus(&b.times(&a).scaled(&qi.neg()))
        }
    }
}

/// K-monomial as a functional through K_i = l⁻ⁱ_i l⁺^{i+1}_{i+1} and
/// K̃_i = (l⁺ⁱ_i)²; only nonnegative exponents are realized.
pub fn k_functional(k: &KMonomial) -> Result<FunctionalWord, AppendixError> {
    let mut w = FunctionalWord::eps();
    for (i, &e) in k.k.iter().enumerate() {
        if e < 0 {
            return Err(AppendixError::Unsupported("negative K exponent".into()));
        }
        for _ in 0..e {
            w = w.times(&l(Kind::Minus, i + 1, i + 1).times(&l(Kind::Plus, i + 2, i + 2)));
        }
    }
    for (m, &e) in k.kt.iter().enumerate() {
        if e < 0 {
            return Err(AppendixError::Unsupported("negative K~ exponent".into()));
        }
        for _ in 0..2 * e {
            w = w.times(&l(Kind::Plus, m + 1, m + 1));
        }
    }
    Ok(w)
}

/// An FKE word as a functional on corepresentation words.
pub fn fke_functional(w: &FkeWord, q: &Scalar) -> Result<FunctionalWord, AppendixError> {
    let mut acc = FunctionalWord::default();
    for (m, c) in &w.terms {
        let mut t = FunctionalWord::eps();
        for r in &m.f {
            t = t.times(&root_functional(*r, q));
        }
        t = t.times(&k_functional(&m.k)?);
        for r in &m.e {
            t = t.times(&root_functional(*r, q));
        }
        acc = acc.plus(&t.scaled(c));
    }
    Ok(acc)
}
