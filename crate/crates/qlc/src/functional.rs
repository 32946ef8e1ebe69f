//! L-functionals and their evaluation on corepresentation words.
//!
//! `l^a_b(u^i_j)` is read off R̂ (or R̂⁻¹) with the z-weight of the χ
//! construction; values on κ(u) come from inverting the N²×N² matrix of
//! values on u. A functional on a word of letters U and Uc is evaluated with
//! the matrix coproduct: `Δl^a_b = l^a_k ⊗ l^k_b` and
//! `Δκ(l)^a_b = κ(l)^k_b ⊗ κ(l)^a_k`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group::{GroupData, Kind};
use crate::scalar::Scalar;
use crate::tensor::{inverse, Factor, IndexSignature, Tensor};

/// Tables of `l^a_b(u^i_j)` and `l^a_b(κ(u^i_j))` for both kinds.
#[derive(Clone, Debug)]
pub struct LTables {
    pub n: usize,
    pub d: Vec<Scalar>,
    plus: Vec<Scalar>,
    minus: Vec<Scalar>,
    plus_k: Vec<Scalar>,
    minus_k: Vec<Scalar>,
}

fn at(n: usize, a: usize, b: usize, i: usize, j: usize) -> usize {
    ((a * n + b) * n + i) * n + j
}

impl LTables {
    pub fn new(g: &GroupData) -> LTables {
        let n = g.n;
        let (wp, wm) = match g.lead {
            Kind::Plus => (g.z.inv().expect("z nonzero"), Scalar::one()),
            Kind::Minus => (Scalar::one(), g.z.clone()),
        };
        let mut plus = vec![Scalar::zero(); n * n * n * n];
        let mut minus = plus.clone();
        for a in 0..n {
            for b in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        plus[at(n, a, b, i, j)] = wp.mul(&g.rh(a, i, j, b));
                        minus[at(n, a, b, i, j)] = wm.mul(&g.rhi(a, i, j, b));
                    }
                }
            }
        }
        let plus_k = kappa_table(n, &plus);
        let minus_k = kappa_table(n, &minus);
        LTables { n, d: g.d.clone(), plus, minus, plus_k, minus_k }
    }

    /// `l^a_b(u^i_j)`.
    pub fn on_u(&self, kind: Kind, a: usize, b: usize, i: usize, j: usize) -> &Scalar {
        let t = match kind {
            Kind::Plus => &self.plus,
            Kind::Minus => &self.minus,
        };
        &t[at(self.n, a, b, i, j)]
    }

    /// `l^a_b(κ(u^i_j))`.
    pub fn on_kappa_u(&self, kind: Kind, a: usize, b: usize, i: usize, j: usize) -> &Scalar {
        let t = match kind {
            Kind::Plus => &self.plus_k,
            Kind::Minus => &self.minus_k,
        };
        &t[at(self.n, a, b, i, j)]
    }

    /// Value of the atom (optionally precomposed with κ) on one letter entry.
    pub fn letter_value(&self, kind: Kind, kappa: bool, letter: Factor, a: usize, b: usize, i: usize, j: usize) -> Scalar {
        match (kappa, letter) {
            (false, Factor::U) => self.on_u(kind, a, b, i, j).clone(),
            (false, Factor::Uc) => self.on_kappa_u(kind, a, b, j, i).clone(),
            (true, Factor::U) => self.on_kappa_u(kind, a, b, i, j).clone(),
            (true, Factor::Uc) => {
                let v = self.on_u(kind, a, b, j, i);
                if v.is_zero() {
                    Scalar::zero()
                } else {
                    v.mul(&self.d[j]).div(&self.d[i]).expect("D nonzero")
                }
            }
            _ => panic!("letters are U or Uc"),
        }
    }

    /// All N² atoms `(a,b)` of one family evaluated on a single letter.
    fn letter(&self, kind: Kind, kappa: bool, letter: Factor) -> Vec<Tensor> {
        let n = self.n;
        let sig = IndexSignature::new(n, vec![letter]);
        let mut out = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                out.push(Tensor::from_fn(sig.clone(), sig.clone(), |i, j| self.letter_value(kind, kappa, letter, a, b, i, j)));
            }
        }
        out
    }

    /// All atoms of one family on a word; entry `a*N+b` is the matrix of
    /// `l^a_b` (or `κ(l)^a_b`) on the word.
    pub fn family(&self, kind: Kind, kappa: bool, word: &[Factor]) -> Vec<Tensor> {
        let n = self.n;
        if word.is_empty() {
            let one = IndexSignature::trivial(n);
            return (0..n * n)
                .map(|k| if k / n == k % n { Tensor::identity(one.clone()) } else { Tensor::zeros(one.clone(), one.clone()) })
                .collect();
        }
        let mut cur = self.letter(kind, kappa, word[0]);
        for &t in &word[1..] {
            let nxt = self.letter(kind, kappa, t);
            let mut new = Vec::with_capacity(n * n);
            for a in 0..n {
                for b in 0..n {
                    let mut acc: Option<Tensor> = None;
                    for k in 0..n {
                        let term = if kappa { cur[k * n + b].kron(&nxt[a * n + k]) } else { cur[a * n + k].kron(&nxt[k * n + b]) };
                        acc = Some(match acc {
                            None => term,
                            Some(x) => x.add(&term).expect("same shape"),
                        });
                    }
                    new.push(acc.expect("n > 0"));
                }
            }
            cur = new;
        }
        cur
    }

    /// Generators where `l(κ²(u^i_j)) ≠ D_i D_j⁻¹ l(u^i_j)`, as (kind, a, b, i, j).
    pub fn kappa_squared_defects(&self) -> Vec<(Kind, usize, usize, usize, usize)> {
        let n = self.n;
        let mut out = Vec::new();
        for kind in [Kind::Plus, Kind::Minus] {
            let k = match kind {
                Kind::Plus => &self.plus_k,
                Kind::Minus => &self.minus_k,
            };
            // The κ-table of the κ-table gives the values on κ²(u).
            let mut transposed = vec![Scalar::zero(); k.len()];
            for a in 0..n {
                for b in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            transposed[at(n, a, b, i, j)] = k[at(n, a, b, j, i)].clone();
                        }
                    }
                }
            }
            let kk = kappa_table(n, &transposed);
            for a in 0..n {
                for b in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            let lhs = &kk[at(n, a, b, j, i)];
                            let rhs = self.on_u(kind, a, b, i, j).mul(&self.d[i]).div(&self.d[j]).expect("D nonzero");
                            if *lhs != rhs {
                                out.push((kind, a, b, i, j));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Checks `Σ_{c,k} l^a_c(u^i_k) l^c_b(κ(u^k_j)) = δ_ab δ_ij` for both kinds.
    pub fn antipode_holds(&self) -> bool {
        let n = self.n;
        for kind in [Kind::Plus, Kind::Minus] {
            for a in 0..n {
                for b in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            let mut acc = Scalar::zero();
                            for c in 0..n {
                                for k in 0..n {
                                    let x = self.on_u(kind, a, c, i, k);
                                    if !x.is_zero() {
                                        acc = acc.add(&x.mul(self.on_kappa_u(kind, c, b, k, j)));
                                    }
                                }
                            }
                            let want = if a == b && i == j { Scalar::one() } else { Scalar::zero() };
                            if acc != want {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }
}

/// Given `L[c][b][k][j] = h^c_b(x^k_j)` for a matrix corepresentation x,
/// returns `h^a_c(κ(x^i_k))` at index `[a][c][i][k]`.
fn kappa_table(n: usize, l: &[Scalar]) -> Vec<Scalar> {
    let sig = IndexSignature::flat(n * n);
    let y = Tensor::from_fn(sig.clone(), sig, |r, c| {
        let (cc, k) = (r / n, r % n);
        let (b, j) = (c / n, c % n);
        l[at(n, cc, b, k, j)].clone()
    });
    let x = inverse(&y).expect("L-functional matrix is invertible");
    let mut out = vec![Scalar::zero(); n * n * n * n];
    for a in 0..n {
        for i in 0..n {
            for c in 0..n {
                for k in 0..n {
                    out[at(n, a, c, i, k)] = x.get(a * n + i, c * n + k);
                }
            }
        }
    }
    out
}

/// One factor of a functional word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    /// `l^i_j` of the given kind, optionally precomposed with κ.
    L { kind: Kind, kappa: bool, i: usize, j: usize },
    /// The counit.
    Eps,
}

/// Linear combination of products of atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FunctionalWord {
    pub terms: Vec<(Scalar, Vec<Atom>)>,
}

impl FunctionalWord {
    pub fn atom(a: Atom) -> FunctionalWord {
        FunctionalWord { terms: vec![(Scalar::one(), vec![a])] }
    }

    pub fn eps() -> FunctionalWord {
        FunctionalWord::atom(Atom::Eps)
    }

    pub fn scaled(&self, c: &Scalar) -> FunctionalWord {
        FunctionalWord { terms: self.terms.iter().map(|(x, w)| (x.mul(c), w.clone())).collect() }
    }

    pub fn plus(&self, o: &FunctionalWord) -> FunctionalWord {
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        FunctionalWord { terms }
    }

    /// Product of functionals (convolution).
    pub fn times(&self, o: &FunctionalWord) -> FunctionalWord {
        let mut terms = Vec::new();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let mut w = x.clone();
                w.extend(y.iter().cloned());
                terms.push((a.mul(b), w));
            }
        }
        FunctionalWord { terms }
    }
}

type FamilyKey = (Kind, bool, Vec<Factor>);

/// Memoizing evaluator of functional words on corepresentation words.
#[derive(Clone, Debug)]
pub struct Evaluator {
    pub tables: Arc<LTables>,
    cache: Arc<Mutex<HashMap<FamilyKey, Arc<Vec<Tensor>>>>>,
}

impl Evaluator {
    pub fn new(tables: LTables) -> Evaluator {
        Evaluator { tables: Arc::new(tables), cache: Arc::new(Mutex::new(HashMap::new())) }
    }

    pub fn n(&self) -> usize {
        self.tables.n
    }

    pub fn family(&self, kind: Kind, kappa: bool, word: &[Factor]) -> Arc<Vec<Tensor>> {
        let key = (kind, kappa, word.to_vec());
        if let Some(f) = self.cache.lock().expect("cache lock").get(&key) {
            return f.clone();
        }
        let f = Arc::new(self.tables.family(kind, kappa, word));
        self.cache.lock().expect("cache lock").insert(key, f.clone());
        f
    }

    pub fn atom(&self, a: &Atom, word: &[Factor]) -> Tensor {
        match a {
            Atom::Eps => Tensor::identity(word_signature(self.n(), word)),
            Atom::L { kind, kappa, i, j } => self.family(*kind, *kappa, word)[i * self.n() + j].clone(),
        }
    }

    /// Matrix of the functional on the corepresentation word.
    pub fn eval_word(&self, w: &FunctionalWord, word: &[Factor]) -> Tensor {
        let sig = word_signature(self.n(), word);
        let mut acc = Tensor::zeros(sig.clone(), sig.clone());
        for (c, atoms) in &w.terms {
            let mut m = Tensor::identity(sig.clone());
            for a in atoms {
                m = m.contract(&self.atom(a, word)).expect("same word");
            }
            acc = acc.axpy(&m, c).expect("same shape");
        }
        acc
    }

    /// Entry `(I, J)` of the functional on the word by direct expansion of
    /// the coproducts, without matrix products.
    pub fn eval_entry_naive(&self, w: &FunctionalWord, word: &[Factor], row: usize, col: usize) -> Scalar {
        let n = self.n();
        let len = word.len();
        let dim = n.pow(len as u32);
        let digits = |x: usize| -> Vec<usize> {
            let mut d = vec![0; len];
            let mut y = x;
            for k in (0..len).rev() {
                d[k] = y % n;
                y /= n;
            }
            d
        };
        let atom_entry = |a: &Atom, r: usize, c: usize| -> Scalar {
            let (ri, ci) = (digits(r), digits(c));
            match a {
                Atom::Eps => {
                    if r == c {
                        Scalar::one()
                    } else {
                        Scalar::zero()
                    }
                }
                Atom::L { kind, kappa, i, j } => {
                    // Chains of matrix indices through the letters: l^i_k ⊗ l^k_j,
                    // and κ(l)^k_j ⊗ κ(l)^i_k for the antipode.
                    let mut chains: Vec<(usize, Scalar)> = vec![(if *kappa { *j } else { *i }, Scalar::one())];
                    for (pos, &letter) in word.iter().enumerate() {
                        let mut next = Vec::new();
                        for (start, v) in &chains {
                            for m in 0..n {
                                let val = if *kappa {
                                    self.tables.letter_value(*kind, true, letter, m, *start, ri[pos], ci[pos])
                                } else {
                                    self.tables.letter_value(*kind, false, letter, *start, m, ri[pos], ci[pos])
                                };
                                if !val.is_zero() {
                                    next.push((m, v.mul(&val)));
                                }
                            }
                        }
                        chains = next;
                    }
                    let end = if *kappa { *i } else { *j };
                    chains.into_iter().filter(|c| c.0 == end).map(|c| c.1).sum()
                }
            }
        };
        let mut total = Scalar::zero();
        for (c, atoms) in &w.terms {
            // sum over intermediate multi-indices between consecutive atoms
            let mut vec: Vec<Scalar> = (0..dim).map(|k| if k == row { Scalar::one() } else { Scalar::zero() }).collect();
            for a in atoms {
                let mut nv = vec![Scalar::zero(); dim];
                for (k, x) in vec.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (m, slot) in nv.iter_mut().enumerate() {
                        let e = atom_entry(a, k, m);
                        if !e.is_zero() {
                            *slot = slot.add(&x.mul(&e));
                        }
                    }
                }
                vec = nv;
            }
            total = total.add(&vec[col].mul(c));
        }
        total
    }
}

/// A failed multiplicativity trial.
#[derive(Clone, Debug)]
pub struct MultiplicativityFailure {
    pub trial: usize,
    pub word: Vec<Factor>,
    pub entry: (usize, usize),
}

fn random_functional<R: Rng>(rng: &mut R, n: usize) -> FunctionalWord {
    let mut acc = FunctionalWord::default();
    for _ in 0..rng.gen_range(1..=2) {
        let atoms = (0..rng.gen_range(1..=2))
            .map(|_| {
                if rng.gen_bool(0.1) {
                    Atom::Eps
                } else {
                    let kind = if rng.gen_bool(0.5) { Kind::Plus } else { Kind::Minus };
                    Atom::L { kind, kappa: rng.gen_bool(0.5), i: rng.gen_range(0..n), j: rng.gen_range(0..n) }
                }
            })
            .collect();
        acc.terms.push((Scalar::int(rng.gen_range(-3..=3)), atoms));
    }
    acc
}

/// Checks eval(f·g) = eval(f)·eval(g) on `trials` random pairs of
/// functionals and corepresentation words of length 1 or 2, and one random
/// entry of each product against the direct coproduct expansion.
pub fn multiplicativity_check(ev: &Evaluator, trials: usize, seed: u64) -> Vec<MultiplicativityFailure> {
    let n = ev.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for trial in 0..trials {
        let (f, g) = (random_functional(&mut rng, n), random_functional(&mut rng, n));
        let word: Vec<Factor> =
            (0..rng.gen_range(1..=2)).map(|_| if rng.gen_bool(0.5) { Factor::U } else { Factor::Uc }).collect();
        let fg = f.times(&g);
        let lhs = ev.eval_word(&fg, &word);
        let rhs = ev.eval_word(&f, &word).contract(&ev.eval_word(&g, &word)).expect("same word");
        let dim = lhs.nrows();
        let (r, c) = (rng.gen_range(0..dim), rng.gen_range(0..dim));
        if let Some((i, j, _)) = lhs.sub(&rhs).expect("same shape").first_nonzero() {
            out.push(MultiplicativityFailure { trial, word, entry: (i, j) });
        } else if ev.eval_entry_naive(&fg, &word, r, c) != lhs.get(r, c) {
            out.push(MultiplicativityFailure { trial, word, entry: (r, c) });
        }
    }
    out
}

/// Signature of a corepresentation word.
pub fn word_signature(n: usize, word: &[Factor]) -> IndexSignature {
    IndexSignature::new(n, word.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group_data, GroupSpec, Series, Sign};

    #[test]
    fn counit_and_generator_values() {
        let g = build_group_data(GroupSpec::new(Series::SL, 2, Sign::Plus).unwrap()).unwrap();
        let ev = Evaluator::new(LTables::new(&g));
        let u = [Factor::U];
        let id = ev.eval_word(&FunctionalWord::eps(), &u);
        assert_eq!(id, Tensor::identity(word_signature(2, &u)));
        let l = ev.eval_word(&FunctionalWord::atom(Atom::L { kind: Kind::Plus, kappa: false, i: 0, j: 1 }), &u);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(l.get(i, j), g.rh(0, i, j, 1).div(&g.z).unwrap());
            }
        }
        assert!(ev.tables.antipode_holds());
    }

    #[test]
    fn eval_word_is_multiplicative() {
        for spec in [GroupSpec::new(Series::SL, 2, Sign::Plus), GroupSpec::new(Series::O, 3, Sign::Minus)] {
            let g = build_group_data(spec.unwrap()).unwrap();
            let ev = Evaluator::new(LTables::new(&g));
            let bad = multiplicativity_check(&ev, 100, 7);
            assert!(bad.is_empty(), "{bad:?}");
        }
    }
}
