//! Tensors of scalars on tensor-word spaces, with exact linear algebra.
//!
//! The public interface is dense (row-major linearization, `get` by
//! coordinate, full dumps). Storage is row-compressed because the operators
//! built from R̂ matrices are structurally sparse.

mod linalg;
mod modular;

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{Scalar, ScalarContext};

pub use linalg::{
    det_bareiss, det_cofactor, inverse, kernel_and_rank, rank, solve_affine, Echelon, LinearSystem,
    Solution,
};
pub use modular::{independent_rows, modular_rank, ModPoint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TensorError {
    #[error("signature mismatch: {0} vs {1}")]
    SignatureMismatch(String, String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
    #[error("malformed tensor dump: {0}")]
    Dump(String),
}

/// One tensor factor of a corepresentation word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Factor {
    /// Fundamental corepresentation, dimension N.
    U,
    /// Contragredient corepresentation, dimension N.
    Uc,
    /// The pair (Uc, U) as one index of dimension N², Uc index slower.
    Pair,
    /// A plain index set of the given size (unknowns, samples).
    Flat(usize),
}

/// Ordered factor tags with row-major linearization.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexSignature {
    pub n: usize,
    pub factors: Vec<Factor>,
}

impl IndexSignature {
    pub fn new(n: usize, factors: Vec<Factor>) -> IndexSignature {
        IndexSignature { n, factors }
    }

    /// The trivial (one-dimensional) space.
    pub fn trivial(n: usize) -> IndexSignature {
        IndexSignature { n, factors: Vec::new() }
    }

    pub fn flat(dim: usize) -> IndexSignature {
        IndexSignature { n: 0, factors: vec![Factor::Flat(dim)] }
    }

    /// `k` copies of the pair (Uc, U).
    pub fn pairs(n: usize, k: usize) -> IndexSignature {
        IndexSignature { n, factors: vec![Factor::Pair; k] }
    }

    pub fn dim(&self) -> usize {
        self.factors
            .iter()
            .map(|f| match f {
                Factor::U | Factor::Uc => self.n,
                Factor::Pair => self.n * self.n,
                Factor::Flat(d) => *d,
            })
            .product()
    }

    pub fn concat(&self, o: &IndexSignature) -> IndexSignature {
        let n = if self.factors.is_empty() { o.n } else { self.n };
        let mut f = self.factors.clone();
        f.extend_from_slice(&o.factors);
        IndexSignature { n, factors: f }
    }

    /// Expands pairs into their (Uc, U) letters.
    pub fn letters(&self) -> Vec<Factor> {
        let mut out = Vec::new();
        for f in &self.factors {
            match f {
                Factor::Pair => {
                    out.push(Factor::Uc);
                    out.push(Factor::U);
                }
                x => out.push(*x),
            }
        }
        out
    }

    /// Same space up to grouping of letters into pairs.
    pub fn compatible(&self, o: &IndexSignature) -> bool {
        self.dim() == o.dim() && self.letters() == o.letters()
    }
}

impl fmt::Display for IndexSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|x| match x {
                Factor::U => "U".to_string(),
                Factor::Uc => "Uc".to_string(),
                Factor::Pair => "(Uc,U)".to_string(),
                Factor::Flat(d) => format!("[{d}]"),
            })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Sparse row: strictly increasing column indices with nonzero values.
pub type Row = Vec<(usize, Scalar)>;

/// Linear map between two signature spaces, a `dim(out) × dim(in)` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    out: IndexSignature,
    inp: IndexSignature,
    rows: Vec<Row>,
}

fn row_add(a: &Row, b: &Row, cb: &Scalar) -> Row {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            let v = b[j].1.mul(cb);
            if !v.is_zero() {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = a[i].1.add(&b[j].1.mul(cb));
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl Tensor {
    pub fn zeros(out: IndexSignature, inp: IndexSignature) -> Tensor {
        let r = out.dim();
        Tensor { out, inp, rows: vec![Vec::new(); r] }
    }

    pub fn identity(sig: IndexSignature) -> Tensor {
        let d = sig.dim();
        let rows = (0..d).map(|i| vec![(i, Scalar::one())]).collect();
        Tensor { out: sig.clone(), inp: sig, rows }
    }

    pub fn scalar_identity(sig: IndexSignature, c: &Scalar) -> Tensor {
        let d = sig.dim();
        let rows = (0..d).map(|i| if c.is_zero() { Vec::new() } else { vec![(i, c.clone())] }).collect();
        Tensor { out: sig.clone(), inp: sig, rows }
    }

    /// Dense construction; zero values are skipped.
    pub fn from_fn<F>(out: IndexSignature, inp: IndexSignature, f: F) -> Tensor
    where
        F: Fn(usize, usize) -> Scalar + Sync,
    {
        let (r, c) = (out.dim(), inp.dim());
        let rows = (0..r)
            .into_par_iter()
            .map(|i| (0..c).filter_map(|j| Some((j, f(i, j))).filter(|x| !x.1.is_zero())).collect())
            .collect();
        Tensor { out, inp, rows }
    }

    /// Construction from (row, col, value) triplets; duplicates are summed.
    pub fn from_triplets(out: IndexSignature, inp: IndexSignature, trip: Vec<(usize, usize, Scalar)>) -> Tensor {
        let mut acc: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); out.dim()];
        let c = inp.dim();
        for (i, j, v) in trip {
            assert!(j < c, "column out of range");
            let e = acc[i].entry(j).or_insert_with(Scalar::zero);
            *e = e.add(&v);
        }
        let rows = acc.into_iter().map(|m| m.into_iter().filter(|x| !x.1.is_zero()).collect()).collect();
        Tensor { out, inp, rows }
    }

    pub fn from_rows(out: IndexSignature, inp: IndexSignature, rows: Vec<Row>) -> Tensor {
        assert_eq!(rows.len(), out.dim(), "row count");
        Tensor { out, inp, rows }
    }

    pub fn from_dense(out: IndexSignature, inp: IndexSignature, m: &[Vec<Scalar>]) -> Tensor {
        Tensor::from_fn(out, inp, |i, j| m[i][j].clone())
    }

    pub fn signature_out(&self) -> &IndexSignature {
        &self.out
    }

    pub fn signature_in(&self) -> &IndexSignature {
        &self.inp
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.inp.dim()
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &Row {
        &self.rows[i]
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        match self.rows[i].binary_search_by_key(&j, |e| e.0) {
            Ok(k) => self.rows[i][k].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        let row = &mut self.rows[i];
        match row.binary_search_by_key(&j, |e| e.0) {
            Ok(k) => {
                if v.is_zero() {
                    row.remove(k);
                } else {
                    row[k].1 = v;
                }
            }
            Err(k) => {
                if !v.is_zero() {
                    row.insert(k, (j, v));
                }
            }
        }
    }

    /// Dense copy of the entries.
    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let c = self.ncols();
        self.rows
            .iter()
            .map(|r| {
                let mut d = vec![Scalar::zero(); c];
                for (j, v) in r {
                    d[*j] = v.clone();
                }
                d
            })
            .collect()
    }

    /// Regroups the signatures without touching entries.
    pub fn with_signatures(mut self, out: IndexSignature, inp: IndexSignature) -> Result<Tensor, TensorError> {
        if out.dim() != self.out.dim() || inp.dim() != self.inp.dim() {
            return Err(TensorError::Shape(format!("{} x {} vs {} x {}", out, inp, self.out, self.inp)));
        }
        self.out = out;
        self.inp = inp;
        Ok(self)
    }

    /// Composition `self ∘ b` (matrix product).
    pub fn contract(&self, b: &Tensor) -> Result<Tensor, TensorError> {
        if !self.inp.compatible(&b.out) {
            return Err(TensorError::SignatureMismatch(self.inp.to_string(), b.out.to_string()));
        }
        let rows = self
            .rows
            .par_iter()
            .map(|r| {
                let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                for (k, x) in r {
                    for (j, y) in &b.rows[*k] {
                        let e = acc.entry(*j).or_insert_with(Scalar::zero);
                        *e = e.add(&x.mul(y));
                    }
                }
                acc.into_iter().filter(|x| !x.1.is_zero()).collect()
            })
            .collect();
        Ok(Tensor { out: self.out.clone(), inp: b.inp.clone(), rows })
    }

    /// Kronecker product with concatenated signatures.
    pub fn kron(&self, b: &Tensor) -> Tensor {
        let bc = b.ncols();
        let mut rows = Vec::with_capacity(self.nrows() * b.nrows());
        for ra in &self.rows {
            for rb in &b.rows {
                let mut row = Vec::with_capacity(ra.len() * rb.len());
                for (ja, x) in ra {
                    for (jb, y) in rb {
                        row.push((ja * bc + jb, x.mul(y)));
                    }
                }
                rows.push(row);
            }
        }
        Tensor { out: self.out.concat(&b.out), inp: self.inp.concat(&b.inp), rows }
    }

    pub fn add(&self, b: &Tensor) -> Result<Tensor, TensorError> {
        self.axpy(b, &Scalar::one())
    }

    pub fn sub(&self, b: &Tensor) -> Result<Tensor, TensorError> {
        self.axpy(b, &Scalar::int(-1))
    }

    /// `self + c·b`.
    pub fn axpy(&self, b: &Tensor, c: &Scalar) -> Result<Tensor, TensorError> {
        if self.nrows() != b.nrows() || self.ncols() != b.ncols() {
            return Err(TensorError::Shape(format!("{}x{} vs {}x{}", self.nrows(), self.ncols(), b.nrows(), b.ncols())));
        }
        let rows = self.rows.par_iter().zip(b.rows.par_iter()).map(|(x, y)| row_add(x, y, c)).collect();
        Ok(Tensor { out: self.out.clone(), inp: self.inp.clone(), rows })
    }

    pub fn scale(&self, c: &Scalar) -> Tensor {
        if c.is_zero() {
            return Tensor::zeros(self.out.clone(), self.inp.clone());
        }
        let rows = self.rows.par_iter().map(|r| r.iter().map(|(j, v)| (*j, v.mul(c))).collect()).collect();
        Tensor { out: self.out.clone(), inp: self.inp.clone(), rows }
    }

    pub fn transpose(&self) -> Tensor {
        let mut rows: Vec<Row> = vec![Vec::new(); self.ncols()];
        for (i, r) in self.rows.iter().enumerate() {
            for (j, v) in r {
                rows[*j].push((i, v.clone()));
            }
        }
        Tensor { out: self.inp.clone(), inp: self.out.clone(), rows }
    }

    /// Matrix-vector product on a dense vector.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ncols(), "vector length");
        self.rows
            .par_iter()
            .map(|r| {
                let mut acc = Scalar::zero();
                for (j, x) in r {
                    if !v[*j].is_zero() {
                        acc = acc.add(&x.mul(&v[*j]));
                    }
                }
                acc
            })
            .collect()
    }

    /// Row vector times matrix: `w·self`.
    pub fn apply_left(&self, w: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(w.len(), self.nrows(), "vector length");
        let mut out = vec![Scalar::zero(); self.ncols()];
        for (i, r) in self.rows.iter().enumerate() {
            if w[i].is_zero() {
                continue;
            }
            for (j, x) in r {
                out[*j] = out[*j].add(&w[i].mul(x));
            }
        }
        out
    }

    /// Column `j` as a dense vector.
    pub fn column(&self, j: usize) -> Vec<Scalar> {
        self.rows.iter().map(|r| match r.binary_search_by_key(&j, |e| e.0) {
            Ok(k) => r[k].1.clone(),
            Err(_) => Scalar::zero(),
        }).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    /// First nonzero coordinate in row-major order, a failure witness.
    pub fn first_nonzero(&self) -> Option<(usize, usize, Scalar)> {
        self.rows
            .iter()
            .enumerate()
            .find_map(|(i, r)| r.first().map(|(j, v)| (i, *j, v.clone())))
    }

    /// Maps every entry.
    pub fn map<F: Fn(&Scalar) -> Scalar + Sync>(&self, f: F) -> Tensor {
        let rows = self
            .rows
            .par_iter()
            .map(|r| r.iter().map(|(j, v)| (*j, f(v))).filter(|x| !x.1.is_zero()).collect())
            .collect();
        Tensor { out: self.out.clone(), inp: self.inp.clone(), rows }
    }

    /// Structured text document of the full entry list.
    pub fn dump(&self, ctx: &ScalarContext) -> TensorDump {
        let mut entries = Vec::with_capacity(self.nrows() * self.ncols());
        for r in self.to_dense() {
            for v in r {
                entries.push(ctx.render(&v));
            }
        }
        TensorDump {
            signature_out: self.out.clone(),
            signature_in: self.inp.clone(),
            shape: [self.nrows(), self.ncols()],
            entries,
        }
    }

    pub fn from_dump(d: &TensorDump, ctx: &ScalarContext) -> Result<Tensor, TensorError> {
        let (r, c) = (d.signature_out.dim(), d.signature_in.dim());
        if d.shape != [r, c] || d.entries.len() != r * c {
            return Err(TensorError::Dump("shape does not match signatures".into()));
        }
        let mut rows = Vec::with_capacity(r);
        for i in 0..r {
            let mut row = Vec::new();
            for j in 0..c {
                let v = ctx.parse(&d.entries[i * c + j]).map_err(|e| TensorError::Dump(e.to_string()))?;
                if !v.is_zero() {
                    row.push((j, v));
                }
            }
            rows.push(row);
        }
        Ok(Tensor { out: d.signature_out.clone(), inp: d.signature_in.clone(), rows })
    }
}

/// Serialized tensor: signatures, shape and row-major entry strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorDump {
    pub signature_out: IndexSignature,
    pub signature_in: IndexSignature,
    pub shape: [usize; 2],
    pub entries: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(n: usize, f: Vec<Factor>) -> IndexSignature {
        IndexSignature::new(n, f)
    }

    #[test]
    fn identity_and_kron() {
        let u = sig(2, vec![Factor::U]);
        let id = Tensor::identity(u.clone());
        let idid = id.kron(&id);
        assert_eq!(idid, Tensor::identity(sig(2, vec![Factor::U, Factor::U])));
        let e11 = Tensor::from_triplets(u.clone(), u.clone(), vec![(0, 0, Scalar::one())]);
        let e22 = Tensor::from_triplets(u.clone(), u.clone(), vec![(1, 1, Scalar::one())]);
        let k = e11.kron(&e22);
        assert_eq!(k.nnz(), 1);
        assert!(k.get(1, 1).is_one());
    }

    #[test]
    fn contraction_checks_signatures() {
        let u = sig(2, vec![Factor::U]);
        let uc = sig(2, vec![Factor::Uc]);
        let a = Tensor::identity(u.clone());
        let b = Tensor::zeros(uc.clone(), u.clone());
        assert!(a.contract(&b).is_err());
        assert_eq!(a.contract(&Tensor::zeros(u.clone(), uc.clone())).unwrap(), Tensor::zeros(u, uc));
    }

    #[test]
    fn dump_round_trip() {
        let ctx = ScalarContext::standard();
        let u = sig(2, vec![Factor::U]);
        let s = ctx.var("s").unwrap();
        let t = Tensor::from_fn(u.clone(), u, |i, j| s.pow(i as i64 - j as i64));
        let d = t.dump(&ctx);
        let json = serde_json::to_string(&d).unwrap();
        let back: TensorDump = serde_json::from_str(&json).unwrap();
        assert_eq!(Tensor::from_dump(&back, &ctx).unwrap(), t);
        assert_eq!(d.entries[1], "(1)/(s)");
    }
}
