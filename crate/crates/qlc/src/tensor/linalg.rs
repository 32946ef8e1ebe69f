//! Exact rank, kernel, affine solving, determinants and inverses.
//!
//! Kernels come from the reduced row echelon form with leftmost pivots; the
//! basis vector for each free column (ascending) has a one in that column.
//! Large systems are first thinned by a modular rank prepass; the exact
//! answer on the selected equations is then certified against all of them.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::modular::{independent_rows, ModPoint};
use super::{row_add, IndexSignature, Row, Tensor, TensorError};
use crate::scalar::{Poly, Scalar};

/// Incremental reduced row echelon form over the function field.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    pivots: BTreeMap<usize, Row>,
}

fn dot(row: &Row, v: &[Scalar]) -> Scalar {
    let mut acc = Scalar::zero();
    for (j, x) in row {
        if !v[*j].is_zero() {
            acc = acc.add(&x.mul(&v[*j]));
        }
    }
    acc
}

impl Echelon {
    pub fn new(ncols: usize) -> Echelon {
        Echelon { ncols, pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    pub fn pivot_row(&self, c: usize) -> Option<&Row> {
        self.pivots.get(&c)
    }

    /// Reduces a row against the current basis.
    pub fn reduce(&self, row: &Row) -> Row {
        let mut r = row.clone();
        let cols: Vec<usize> = r.iter().map(|e| e.0).filter(|c| self.pivots.contains_key(c)).collect();
        for c in cols {
            if let Ok(k) = r.binary_search_by_key(&c, |e| e.0) {
                let f = r[k].1.neg();
                r = row_add(&r, &self.pivots[&c], &f);
            }
        }
        r
    }

    /// Adds a row; returns whether the rank increased.
    pub fn insert(&mut self, row: &Row) -> bool {
        let r = self.reduce(row);
        let Some((pc, lead)) = r.first().cloned() else { return false };
        let inv = lead.inv().expect("nonzero pivot");
        let r: Row = r.into_iter().map(|(j, v)| (j, if j == pc { Scalar::one() } else { v.mul(&inv) })).collect();
        let updates: Vec<(usize, Row)> = self
            .pivots
            .par_iter()
            .filter_map(|(c, p)| {
                p.binary_search_by_key(&pc, |e| e.0).ok().map(|k| (*c, row_add(p, &r, &p[k].1.neg())))
            })
            .collect();
        for (c, p) in updates {
            self.pivots.insert(c, p);
        }
        self.pivots.insert(pc, r);
        true
    }

    /// Kernel basis over columns `0..ncols`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let mut out = Vec::new();
        for f in 0..self.ncols {
            if self.pivots.contains_key(&f) {
                continue;
            }
            let mut v = vec![Scalar::zero(); self.ncols];
            v[f] = Scalar::one();
            for (pc, row) in &self.pivots {
                if let Ok(k) = row.binary_search_by_key(&f, |e| e.0) {
                    v[*pc] = row[k].1.neg();
                }
            }
            out.push(v);
        }
        out
    }
}

/// Sort key preferring short rows with small entries.
fn row_cost(r: &Row) -> (usize, usize) {
    (r.len(), r.iter().map(|e| e.1.complexity()).sum())
}

/// Builds an echelon form spanning the same space as all `rows`.
///
/// A modular prepass picks candidate rows; every remaining row is then
/// checked against the candidate kernel, and rows that fail are added.
fn echelon_of(rows: &[Row], ncols: usize, kernel_check: bool) -> Echelon {
    let mut order: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i].is_empty()).collect();
    order.sort_by_key(|&i| row_cost(&rows[i]));
    let sorted: Vec<Row> = order.iter().map(|&i| rows[i].clone()).collect();
    let mut chosen: Option<Vec<usize>> = None;
    if sorted.len() > ncols {
        for seed in 0..4u64 {
            if let Some(k) = independent_rows(&sorted, ncols, &ModPoint::random(0x5eed + seed)) {
                chosen = Some(k);
                break;
            }
        }
    }
    let Some(sel) = chosen else {
        let mut ech = Echelon::new(ncols);
        for r in &sorted {
            ech.insert(r);
        }
        return ech;
    };
    let mut ech = Echelon::new(ncols);
    let mut used = vec![false; sorted.len()];
    for &i in &sel {
        ech.insert(&sorted[i]);
        used[i] = true;
    }
    loop {
        let failing: Option<usize> = if kernel_check {
            let ker = ech.kernel();
            (0..sorted.len())
                .into_par_iter()
                .filter(|&i| !used[i])
                .find_first(|&i| ker.iter().any(|v| !dot(&sorted[i], v).is_zero()))
        } else {
            (0..sorted.len()).into_par_iter().filter(|&i| !used[i]).find_first(|&i| !ech.reduce(&sorted[i]).is_empty())
        };
        match failing {
            None => return ech,
            Some(i) => {
                ech.insert(&sorted[i]);
                used[i] = true;
            }
        }
    }
}

/// Exact rank and deterministic kernel basis of a matrix.
pub fn kernel_and_rank(m: &Tensor) -> (usize, Vec<Vec<Scalar>>) {
    let ech = echelon_of(m.rows(), m.ncols(), true);
    (ech.rank(), ech.kernel())
}

pub fn rank(m: &Tensor) -> usize {
    kernel_and_rank(m).0
}

/// Linear system `matrix · x = rhs` with labelled unknowns.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub matrix: Tensor,
    pub rhs: Vec<Scalar>,
    pub labels: Vec<String>,
}

impl LinearSystem {
    pub fn new(rows: Vec<Row>, rhs: Vec<Scalar>, labels: Vec<String>) -> Result<LinearSystem, TensorError> {
        if rows.len() != rhs.len() {
            return Err(TensorError::Shape(format!("{} rows but {} right-hand sides", rows.len(), rhs.len())));
        }
        let matrix = Tensor::from_rows(IndexSignature::flat(rows.len()), IndexSignature::flat(labels.len()), rows);
        Ok(LinearSystem { matrix, rhs, labels })
    }

    /// Rows augmented with the right-hand side in the last column.
    fn augmented(&self) -> Vec<Row> {
        let n = self.labels.len();
        self.matrix
            .rows()
            .iter()
            .zip(&self.rhs)
            .map(|(r, b)| {
                let mut r = r.clone();
                if !b.is_zero() {
                    r.push((n, b.clone()));
                }
                r
            })
            .collect()
    }

    /// `matrix · x - rhs`.
    pub fn residual(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.matrix.apply(x).iter().zip(&self.rhs).map(|(a, b)| a.sub(b)).collect()
    }
}

/// Classification of the solution set of a linear system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Scalar>),
    Family { particular: Vec<Scalar>, kernel: Vec<Vec<Scalar>> },
    Inconsistent,
}

/// Solves exactly; the particular solution sets every free unknown to zero.
pub fn solve_affine(sys: &LinearSystem) -> Solution {
    let n = sys.labels.len();
    let aug = sys.augmented();
    let ech = echelon_of(&aug, n + 1, true);
    if ech.pivot_row(n).is_some() {
        return Solution::Inconsistent;
    }
    let mut particular = vec![Scalar::zero(); n];
    for pc in ech.pivot_columns() {
        let row = ech.pivot_row(pc).expect("pivot");
        if let Ok(k) = row.binary_search_by_key(&n, |e| e.0) {
            particular[pc] = row[k].1.clone();
        }
    }
    let kernel: Vec<Vec<Scalar>> = ech.kernel().into_iter().filter(|v| v[n].is_zero()).map(|mut v| {
        v.truncate(n);
        v
    }).collect();
    debug_assert!(sys.residual(&particular).iter().all(|x| x.is_zero()));
    if kernel.is_empty() {
        Solution::Unique(particular)
    } else {
        Solution::Family { particular, kernel }
    }
}

fn common_denominator(row: &[Scalar]) -> Poly {
    let mut l = Poly::one();
    for v in row {
        if v.den().is_one() {
            continue;
        }
        let g = crate::scalar::gcd(&l, v.den());
        l = l.mul(&v.den().div_exact(&g).expect("gcd divides"));
    }
    l
}

/// Determinant by fraction-free (Bareiss) elimination.
///
/// Rows are first scaled to polynomial entries; pivots are chosen among the
/// candidates with the fewest terms, and every elimination step divides
/// exactly by the previous pivot.
pub fn det_bareiss(m: &[Vec<Scalar>]) -> Result<Scalar, TensorError> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(TensorError::Shape("determinant of a non-square matrix".into()));
    }
    if n == 0 {
        return Ok(Scalar::one());
    }
    let mut scale = Scalar::one();
    let mut a: Vec<Vec<Poly>> = Vec::with_capacity(n);
    for r in m {
        let l = common_denominator(r);
        scale = scale.mul(&Scalar::from_poly(l.clone()));
        a.push(r.iter().map(|v| v.num().mul(&l.div_exact(v.den()).expect("denominator divides"))).collect());
    }
    let mut sign = 1i64;
    let mut prev = Poly::one();
    for k in 0..n {
        let piv = (k..n).filter(|&i| !a[i][k].is_zero()).min_by_key(|&i| (a[i][k].len(), a[i][k].total_degree()));
        let Some(p) = piv else { return Ok(Scalar::zero()) };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        bottom.par_iter_mut().for_each(|row| {
            for j in k + 1..n {
                let t = pivot_row[k].mul(&row[j]).sub(&row[k].mul(&pivot_row[j]));
                row[j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
            row[k] = Poly::zero();
        });
        prev = a[k][k].clone();
    }
    let det = Scalar::from_poly(a[n - 1][n - 1].clone()).scale_int(sign);
    Ok(det.div(&scale).expect("nonzero row scale"))
}

/// Determinant by cofactor expansion along the first row (small matrices).
pub fn det_cofactor(m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    if n == 0 {
        return Scalar::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Scalar::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Scalar>> =
            m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| v.clone()).collect()).collect();
        let t = m[0][j].mul(&det_cofactor(&minor));
        acc = if j % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
    }
    acc
}

/// Exact inverse of a square tensor by Gauss-Jordan elimination.
pub fn inverse(m: &Tensor) -> Result<Tensor, TensorError> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(TensorError::Shape("inverse of a non-square matrix".into()));
    }
    let rows: Vec<Row> = m
        .rows()
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.push((n + i, Scalar::one()));
            r
        })
        .collect();
    let mut ech = Echelon::new(2 * n);
    let mut sorted: Vec<&Row> = rows.iter().collect();
    sorted.sort_by_key(|r| row_cost(r));
    for r in sorted {
        ech.insert(r);
    }
    if ech.pivot_columns().iter().take_while(|&&c| c < n).count() != n {
        return Err(TensorError::Singular);
    }
    let out_rows: Vec<Row> = (0..n)
        .map(|i| {
            ech.pivot_row(i).expect("pivot").iter().filter(|e| e.0 >= n).map(|(j, v)| (j - n, v.clone())).collect()
        })
        .collect();
    Ok(Tensor::from_rows(m.signature_in().clone(), m.signature_out().clone(), out_rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::Factor;

    fn flat(n: usize) -> IndexSignature {
        IndexSignature::flat(n)
    }

    #[test]
    fn small_systems() {
        let two = Scalar::int(2);
        let sys = LinearSystem::new(vec![vec![(0, two.clone())]], vec![Scalar::int(4)], vec!["x".into()]).unwrap();
        assert_eq!(solve_affine(&sys), Solution::Unique(vec![two]));
        let sys = LinearSystem::new(vec![vec![]], vec![Scalar::zero()], vec!["x".into()]).unwrap();
        match solve_affine(&sys) {
            Solution::Family { kernel, .. } => assert_eq!(kernel.len(), 1),
            other => panic!("{other:?}"),
        }
        let sys = LinearSystem::new(vec![vec![]], vec![Scalar::one()], vec!["x".into()]).unwrap();
        assert_eq!(solve_affine(&sys), Solution::Inconsistent);
    }

    #[test]
    fn rank_of_identity_and_zero() {
        let id = Tensor::identity(flat(5));
        assert_eq!(kernel_and_rank(&id), (5, vec![]));
        let z = Tensor::zeros(flat(4), flat(4));
        let (r, k) = kernel_and_rank(&z);
        assert_eq!((r, k.len()), (0, 4));
    }

    #[test]
    fn inverse_round_trip() {
        let s = Scalar::var(0);
        let sig = IndexSignature::new(2, vec![Factor::U]);
        let m = Tensor::from_fn(sig.clone(), sig.clone(), |i, j| s.pow((i + 2 * j) as i64).add(&Scalar::int(i as i64)));
        let inv = inverse(&m).unwrap();
        assert_eq!(m.contract(&inv).unwrap(), Tensor::identity(sig));
    }
}
