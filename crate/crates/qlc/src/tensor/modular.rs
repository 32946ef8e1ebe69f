//! Modular rank computations used to select independent equations.
//!
//! Everything computed here is a heuristic prepass. Exact results are always
//! re-derived over the rational function field and certified against every
//! original equation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Row;
use crate::scalar::{inv_mod, MAX_VARS};

/// The Mersenne prime 2^61 - 1.
pub const PRIME: u64 = (1 << 61) - 1;

/// A random evaluation point modulo a prime.
#[derive(Clone, Debug)]
pub struct ModPoint {
    pub p: u64,
    pub vals: [u64; MAX_VARS],
}

impl ModPoint {
    pub fn random(seed: u64) -> ModPoint {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut vals = [0; MAX_VARS];
        for v in vals.iter_mut() {
            *v = rng.gen_range(2..PRIME - 1);
        }
        ModPoint { p: PRIME, vals }
    }

    /// Reduces a row; `None` if an entry has a pole at the point.
    pub fn reduce_row(&self, row: &Row) -> Option<Vec<(usize, u64)>> {
        let mut out = Vec::with_capacity(row.len());
        for (j, v) in row {
            let x = v.eval_mod(&self.vals, self.p)?;
            if x != 0 {
                out.push((*j, x));
            }
        }
        Some(out)
    }
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

/// Incremental echelon basis over the prime field.
struct ModEchelon {
    p: u64,
    ncols: usize,
    // pivot column -> dense normalized row
    pivots: Vec<Option<Vec<u64>>>,
}

impl ModEchelon {
    fn new(ncols: usize, p: u64) -> ModEchelon {
        ModEchelon { p, ncols, pivots: vec![None; ncols] }
    }

    fn insert(&mut self, sparse: &[(usize, u64)]) -> bool {
        let p = self.p;
        let mut r = vec![0u64; self.ncols];
        for (j, v) in sparse {
            r[*j] = *v;
        }
        for c in 0..self.ncols {
            if r[c] == 0 {
                continue;
            }
            match &self.pivots[c] {
                Some(prow) => {
                    let f = r[c];
                    for k in c..self.ncols {
                        if prow[k] != 0 {
                            r[k] = (r[k] + p - mulm(f, prow[k], p)) % p;
                        }
                    }
                }
                None => {
                    let inv = inv_mod(r[c], p);
                    for x in r.iter_mut().skip(c) {
                        *x = mulm(*x, inv, p);
                    }
                    self.pivots[c] = Some(r);
                    return true;
                }
            }
        }
        false
    }
}

/// Indices of a maximal set of rows independent at the point, or `None`
/// when the point hits a pole of some entry.
pub fn independent_rows(rows: &[Row], ncols: usize, pt: &ModPoint) -> Option<Vec<usize>> {
    let mut ech = ModEchelon::new(ncols, pt.p);
    let mut keep = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let red = pt.reduce_row(r)?;
        if !red.is_empty() && ech.insert(&red) {
            keep.push(i);
            if keep.len() == ncols {
                break;
            }
        }
    }
    Some(keep)
}

/// Rank at the point; a lower bound for the rank over the function field.
pub fn modular_rank(rows: &[Row], ncols: usize, pt: &ModPoint) -> Option<usize> {
    independent_rows(rows, ncols, pt).map(|k| k.len())
}
