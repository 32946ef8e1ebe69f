//! Intertwiners of tensor-product corepresentations.
//!
//! A linear map A between corepresentations on words w₁ and w₂ intertwines
//! iff it commutes with the images of every L-functional l±ᵃ_b. When the
//! diagonal functionals act diagonally on both words, their eigenvalues
//! give a weight grading and only weight-preserving entries of A can be
//! nonzero; those equations are then satisfied identically and are skipped.

use std::collections::HashMap;

use rayon::prelude::*;

use super::{CalculusData, CalculusError};
use crate::group::Kind;
use crate::scalar::Scalar;
use crate::tensor::{kernel_and_rank, Factor, IndexSignature, Row, Tensor};

/// A basis of Mor(src, tgt) as tensors tgt × src.
#[derive(Clone, Debug)]
pub struct MorphismSpace {
    pub src: Vec<Factor>,
    pub tgt: Vec<Factor>,
    pub basis: Vec<Tensor>,
    /// Number of unknowns after the weight restriction.
    pub unknowns: usize,
    pub weight_restricted: bool,
}

impl MorphismSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

const KINDS: [Kind; 2] = [Kind::Plus, Kind::Minus];

fn check_word(a: &Tensor, src: &IndexSignature, tgt: &IndexSignature) -> Result<(), CalculusError> {
    if a.ncols() != src.dim() || a.nrows() != tgt.dim() {
        return Err(CalculusError::Signature(format!(
            "map is {}×{} but words have dimensions {} and {}",
            a.nrows(),
            a.ncols(),
            tgt.dim(),
            src.dim()
        )));
    }
    Ok(())
}

/// First (kind, a, b, row, col) where l(kind)ᵃ_b(tgt)·A ≠ A·l(kind)ᵃ_b(src).
pub fn intertwiner_defect(
    calc: &CalculusData,
    a: &Tensor,
    src: &[Factor],
    tgt: &[Factor],
) -> Result<Option<(Kind, usize, usize, usize, usize)>, CalculusError> {
    let n = calc.n();
    let ss = IndexSignature::new(n, src.to_vec());
    let ts = IndexSignature::new(n, tgt.to_vec());
    check_word(a, &ss, &ts)?;
    let a = a.clone().with_signatures(ts, ss).map_err(|e| CalculusError::Signature(e.to_string()))?;
    for kind in KINDS {
        let es = calc.ev.family(kind, false, src);
        let et = calc.ev.family(kind, false, tgt);
        let hit = (0..n * n).into_par_iter().find_map_first(|ab| {
            let l = et[ab].contract(&a).expect("target word");
            let r = a.contract(&es[ab]).expect("source word");
            l.sub(&r).expect("same shape").first_nonzero().map(|(i, j, _)| (kind, ab / n, ab % n, i, j))
        });
        if hit.is_some() {
            return Ok(hit);
        }
    }
    Ok(None)
}

pub fn intertwiner_test(
    calc: &CalculusData,
    a: &Tensor,
    src: &[Factor],
    tgt: &[Factor],
) -> Result<bool, CalculusError> {
    Ok(intertwiner_defect(calc, a, src, tgt)?.is_none())
}

/// Weights of the basis vectors of a word, if every diagonal functional
/// acts diagonally on it.
fn weights(calc: &CalculusData, word: &[Factor]) -> Option<Vec<Vec<Scalar>>> {
    let n = calc.n();
    let dim = IndexSignature::new(n, word.to_vec()).dim();
    let mut out = vec![Vec::with_capacity(2 * n); dim];
    for kind in KINDS {
        let e = calc.ev.family(kind, false, word);
        for a in 0..n {
            let m = &e[a * n + a];
            for (i, row) in m.rows().iter().enumerate() {
                if row.iter().any(|(j, _)| *j != i) {
                    return None;
                }
            }
            for (i, w) in out.iter_mut().enumerate() {
                w.push(m.get(i, i));
            }
        }
    }
    Some(out)
}

/// Exact basis of Mor(src, tgt).
pub fn mor_space(
    calc: &CalculusData,
    src: &[Factor],
    tgt: &[Factor],
) -> MorphismSpace {
    let n = calc.n();
    let ss = IndexSignature::new(n, src.to_vec());
    let ts = IndexSignature::new(n, tgt.to_vec());
    let (ds, dt) = (ss.dim(), ts.dim());
    let (ws, wt) = (weights(calc, src), weights(calc, tgt));
    let restricted = ws.is_some() && wt.is_some();
    let mut unknowns: Vec<(usize, usize)> = Vec::new();
    for i in 0..dt {
        for j in 0..ds {
            let keep = match (&ws, &wt) {
                (Some(ws), Some(wt)) => ws[j] == wt[i],
                _ => true,
            };
            if keep {
                unknowns.push((i, j));
            }
        }
    }
    // Unknowns in row I, and in column J, for quick lookup.
    let mut by_row: Vec<Vec<(usize, usize)>> = vec![Vec::new(); dt];
    let mut by_col: Vec<Vec<(usize, usize)>> = vec![Vec::new(); ds];
    for (k, (i, j)) in unknowns.iter().enumerate() {
        by_row[*i].push((*j, k));
        by_col[*j].push((*i, k));
    }
    let mut blocks = Vec::new();
    for kind in KINDS {
        for a in 0..n {
            for b in 0..n {
                if restricted && a == b {
                    continue;
                }
                blocks.push((kind, a * n + b));
            }
        }
    }
    let rows: Vec<Row> = blocks
        .par_iter()
        .flat_map_iter(|&(kind, ab)| {
            let et = calc.ev.family(kind, false, tgt);
            let es = calc.ev.family(kind, false, src);
            let mt = &et[ab];
            let ms = &es[ab];
            // (Mt A)[I,J] - (A Ms)[I,J]
            let mut eqs: HashMap<(usize, usize), HashMap<usize, Scalar>> = HashMap::new();
            for (i, row) in mt.rows().iter().enumerate() {
                for (k, v) in row {
                    for (j, u) in &by_row[*k] {
                        let e = eqs.entry((i, *j)).or_default().entry(*u).or_insert_with(Scalar::zero);
                        *e = e.add(v);
                    }
                }
            }
            for (k, row) in ms.rows().iter().enumerate() {
                for (j, v) in row {
                    for (i, u) in &by_col[k] {
                        let e = eqs.entry((*i, *j)).or_default().entry(*u).or_insert_with(Scalar::zero);
                        *e = e.sub(v);
                    }
                }
            }
            let mut keys: Vec<(usize, usize)> = eqs.keys().copied().collect();
            keys.sort_unstable();
            keys.into_iter()
                .filter_map(|key| {
                    let mut r: Row = eqs[&key].iter().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (*k, v.clone())).collect();
                    r.sort_by_key(|e| e.0);
                    (!r.is_empty()).then_some(r)
                })
                .collect::<Vec<Row>>()
        })
        .collect();
    let m = Tensor::from_rows(IndexSignature::flat(rows.len()), IndexSignature::flat(unknowns.len()), rows);
    let (_, kernel) = kernel_and_rank(&m);
    let basis = kernel
        .into_iter()
        .map(|v| {
            let trip = v
                .into_iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(k, x)| (unknowns[k].0, unknowns[k].1, x))
                .collect();
            Tensor::from_triplets(ts.clone(), ss.clone(), trip)
        })
        .collect();
    MorphismSpace { src: src.to_vec(), tgt: tgt.to_vec(), basis, unknowns: unknowns.len(), weight_restricted: restricted }
}
