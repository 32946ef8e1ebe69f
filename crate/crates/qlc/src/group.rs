//! FRT input data for one calculus: R̂, the metric matrices C and B, the
//! diagonal D and the constants, with the defining identities checked.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{Scalar, S};
use crate::tensor::{inverse, Factor, IndexSignature, Tensor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    SL,
    O,
    Sp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }

    pub fn word(self) -> &'static str {
        match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        }
    }

    pub fn other(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid group: {0}")]
    InvalidSpec(String),
    #[error("defining identity failed: {0}")]
    Identity(String),
}

/// Selects one calculus Γ±,z on one quantum group (principal z-branch).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupSpec {
    pub series: Series,
    pub n: usize,
    pub sign: Sign,
}

impl GroupSpec {
    pub fn new(series: Series, n: usize, sign: Sign) -> Result<GroupSpec, GroupError> {
        let ok = match series {
            Series::SL => n >= 2,
            Series::O => n >= 3,
            Series::Sp => n >= 2 && n.is_multiple_of(2),
        };
        if !ok {
            return Err(GroupError::InvalidSpec(format!("{series:?}({n}) is not supported")));
        }
        Ok(GroupSpec { series, n, sign })
    }

    /// ε = +1 for O, -1 for Sp, undefined for SL.
    pub fn epsilon(&self) -> Option<i64> {
        match self.series {
            Series::SL => None,
            Series::O => Some(1),
            Series::Sp => Some(-1),
        }
    }

    /// Stable identifier such as `sl3.plus`.
    pub fn id(&self) -> String {
        format!("{}{}.{}", self.series.to_string().to_lowercase(), self.n, self.sign.word())
    }

    /// The deformation parameter q as a power of s: q = s^N for SL, q = s²
    /// for O with odd N, q = s otherwise.
    pub fn q_exponent(&self) -> i64 {
        match self.series {
            Series::SL => self.n as i64,
            Series::O if self.n % 2 == 1 => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Series::SL => "SL",
            Series::O => "O",
            Series::Sp => "Sp",
        })
    }
}

impl FromStr for Series {
    type Err = GroupError;
    fn from_str(s: &str) -> Result<Series, GroupError> {
        match s.to_ascii_lowercase().as_str() {
            "sl" => Ok(Series::SL),
            "o" => Ok(Series::O),
            "sp" => Ok(Series::Sp),
            _ => Err(GroupError::InvalidSpec(format!("unknown series `{s}`"))),
        }
    }
}

impl FromStr for Sign {
    type Err = GroupError;
    fn from_str(s: &str) -> Result<Sign, GroupError> {
        match s {
            "+" | "plus" | "p" => Ok(Sign::Plus),
            "-" | "minus" | "m" => Ok(Sign::Minus),
            _ => Err(GroupError::InvalidSpec(format!("unknown sign `{s}`"))),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_q({}) Γ{}", self.series, self.n, self.sign.symbol())
    }
}

/// Kind of an L-functional generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    Plus,
    Minus,
}

/// R̂ and the related matrices and constants of one calculus.
#[derive(Clone, Debug)]
pub struct GroupData {
    pub spec: GroupSpec,
    pub n: usize,
    pub q: Scalar,
    /// The parameter z of Γ±,z (z = s² for SL, z = ±1 for O and Sp).
    pub z: Scalar,
    /// Functional carrying z in the χ construction; the other has weight 1.
    pub lead: Kind,
    pub rhat: Tensor,
    pub rhat_inv: Tensor,
    /// Metric matrix C and its inverse B (O and Sp only).
    pub c: Option<Vec<Vec<Scalar>>>,
    pub b: Option<Vec<Vec<Scalar>>>,
    pub d: Vec<Scalar>,
    pub big_q: Scalar,
    pub p: Option<Scalar>,
    pub frak_s: Scalar,
}

fn uu(n: usize) -> IndexSignature {
    IndexSignature::new(n, vec![Factor::U, Factor::U])
}

impl GroupData {
    pub fn rh(&self, i: usize, j: usize, k: usize, l: usize) -> Scalar {
        self.rhat.get(i * self.n + j, k * self.n + l)
    }

    pub fn rhi(&self, i: usize, j: usize, k: usize, l: usize) -> Scalar {
        self.rhat_inv.get(i * self.n + j, k * self.n + l)
    }

    /// q to an integer power.
    pub fn qp(&self, e: i64) -> Scalar {
        Scalar::var_pow(S, e * self.spec.q_exponent())
    }

    /// q^{e/2}; exact because odd e only occurs where q = s².
    pub fn q_half(&self, e2: i64) -> Scalar {
        let k = self.spec.q_exponent();
        assert!((e2 * k) % 2 == 0, "half-integer power of q outside ℚ(s)");
        Scalar::var_pow(S, e2 * k / 2)
    }

    pub fn epsilon(&self) -> i64 {
        self.spec.epsilon().unwrap_or(1)
    }

    /// The eigenvalues of R̂: Hecke pair for SL, cubic triple for O/Sp.
    pub fn rhat_eigenvalues(&self) -> Vec<Scalar> {
        let q = self.qp(1);
        let mut out = vec![q.clone(), q.inv().expect("q nonzero").neg()];
        if let Some(e) = self.spec.epsilon() {
            out.push(self.qp(e - self.n as i64).scale_int(e));
        }
        out
    }
}

/// Builds the group data and checks Yang-Baxter, the minimal polynomial,
/// C·B = I and the κ² identity for D.
pub fn build_group_data(spec: GroupSpec) -> Result<GroupData, GroupError> {
    let data = construct(spec)?;
    check_identities(&data)?;
    Ok(data)
}

/// Builds the group data without checking the identities.
pub fn construct(spec: GroupSpec) -> Result<GroupData, GroupError> {
    let spec = GroupSpec::new(spec.series, spec.n, spec.sign)?;
    let n = spec.n;
    let q = Scalar::var_pow(S, spec.q_exponent());
    let qi = q.inv().expect("q nonzero");
    let big_q = q.sub(&qi);
    let idx = |i: usize, j: usize| i * n + j;
    // R as the coefficient array of e_ij ⊗ e_kl at row (i,k), column (j,l).
    let mut trip: Vec<(usize, usize, Scalar)> = Vec::new();
    let (c, b, d, p, frak_s, z, lead);
    match spec.series {
        Series::SL => {
            for i in 0..n {
                for j in 0..n {
                    trip.push((idx(i, j), idx(i, j), if i == j { q.clone() } else { Scalar::one() }));
                    if i > j {
                        trip.push((idx(i, j), idx(j, i), big_q.clone()));
                    }
                }
            }
            d = (1..=n).map(|i| q.pow(2 * i as i64)).collect::<Vec<_>>();
            frak_s = (1..=n).map(|i| q.pow(-2 * i as i64)).sum();
            p = None;
            c = None;
            b = None;
            z = Scalar::var_pow(S, 2);
            lead = match spec.sign {
                Sign::Plus => Kind::Plus,
                Sign::Minus => Kind::Minus,
            };
        }
        Series::O | Series::Sp => {
            let eps: i64 = if spec.series == Series::O { 1 } else { -1 };
            let half = n / 2;
            let prime = |i: usize| n - 1 - i;
            // 2ρ and the signs ε_i
            let mut rho2 = vec![0i64; n];
            let mut epsi = vec![1i64; n];
            for i in 0..half {
                let v = if eps == 1 { n as i64 - 2 - 2 * i as i64 } else { n as i64 - 2 * i as i64 };
                rho2[i] = v;
                rho2[prime(i)] = -v;
                if eps == -1 {
                    epsi[prime(i)] = -1;
                }
            }
            let data_q = |e2: i64| -> Scalar {
                let k = spec.q_exponent();
                assert!((e2 * k) % 2 == 0);
                Scalar::var_pow(S, e2 * k / 2)
            };
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        trip.push((idx(i, i), idx(i, i), if i != prime(i) { q.clone() } else { Scalar::one() }));
                    } else if j != prime(i) {
                        trip.push((idx(i, j), idx(i, j), Scalar::one()));
                    } else {
                        trip.push((idx(i, j), idx(i, j), qi.clone()));
                    }
                    if i > j {
                        trip.push((idx(i, j), idx(j, i), big_q.clone()));
                        let coef = big_q.mul(&data_q(rho2[i] - rho2[j])).scale_int(-epsi[i] * epsi[j]);
                        trip.push((idx(i, prime(i)), idx(j, prime(j)), coef));
                    }
                }
            }
            let mut cm = vec![vec![Scalar::zero(); n]; n];
            for i in 0..n {
                cm[i][prime(i)] = data_q(-rho2[i]).scale_int(epsi[i]);
            }
            let ct = Tensor::from_dense(IndexSignature::flat(n), IndexSignature::flat(n), &cm);
            let bm = inverse(&ct).map_err(|e| GroupError::Identity(format!("C not invertible: {e}")))?.to_dense();
            // D_i = (C (C^{-1})^t)_ii
            d = (0..n).map(|i| (0..n).map(|k| cm[i][k].mul(&bm[i][k])).sum()).collect();
            let pv = q.pow(n as i64 - eps).scale_int(eps);
            frak_s = Scalar::one().add(&pv.sub(&pv.inv().expect("p nonzero")).div(&big_q).expect("Q nonzero"));
            p = Some(pv);
            c = Some(cm);
            b = Some(bm);
            z = Scalar::int(match spec.sign {
                Sign::Plus => 1,
                Sign::Minus => -1,
            });
            lead = Kind::Plus;
        }
    }
    let r = Tensor::from_triplets(uu(n), uu(n), trip);
    // R̂ = P R: row (a,b) of R̂ is row (b,a) of R.
    let rhat = Tensor::from_fn(uu(n), uu(n), |row, col| r.get(idx(row % n, row / n), col));
    let rhat_inv = inverse(&rhat).map_err(|e| GroupError::Identity(format!("R̂ not invertible: {e}")))?;
    Ok(GroupData { spec, n, q, z, lead, rhat, rhat_inv, c, b, d, big_q, p, frak_s })
}

/// Product of (R̂ - λ I) over the given eigenvalues.
pub fn rhat_polynomial(data: &GroupData, roots: &[Scalar]) -> Tensor {
    let mut m = Tensor::identity(uu(data.n));
    for l in roots {
        let shifted = data.rhat.sub(&Tensor::scalar_identity(uu(data.n), l)).expect("same shape");
        m = m.contract(&shifted).expect("same signature");
    }
    m
}

/// R̂₁₂R̂₂₃R̂₁₂ - R̂₂₃R̂₁₂R̂₂₃.
pub fn yang_baxter_defect(data: &GroupData) -> Tensor {
    let id = Tensor::identity(IndexSignature::new(data.n, vec![Factor::U]));
    let r12 = data.rhat.kron(&id);
    let r23 = id.kron(&data.rhat);
    let lhs = r12.contract(&r23).and_then(|m| m.contract(&r12)).expect("same signature");
    let rhs = r23.contract(&r12).and_then(|m| m.contract(&r23)).expect("same signature");
    lhs.sub(&rhs).expect("same shape")
}

fn check_identities(g: &GroupData) -> Result<(), GroupError> {
    if !yang_baxter_defect(g).is_zero() {
        return Err(GroupError::Identity("Yang-Baxter relation".into()));
    }
    let roots = g.rhat_eigenvalues();
    if !rhat_polynomial(g, &roots).is_zero() {
        return Err(GroupError::Identity("minimal polynomial of R̂".into()));
    }
    for k in 0..roots.len() {
        let mut sub = roots.clone();
        sub.remove(k);
        if rhat_polynomial(g, &sub).is_zero() {
            return Err(GroupError::Identity("a proper factor of the minimal polynomial annihilates R̂".into()));
        }
    }
    if let (Some(c), Some(b)) = (&g.c, &g.b) {
        let n = g.n;
        for i in 0..n {
            for j in 0..n {
                let v: Scalar = (0..n).map(|k| c[i][k].mul(&b[k][j])).sum();
                if v != if i == j { Scalar::one() } else { Scalar::zero() } {
                    return Err(GroupError::Identity("C·B = I".into()));
                }
            }
        }
    }
    let tables = crate::functional::LTables::new(g);
    if !tables.kappa_squared_defects().is_empty() {
        return Err(GroupError::Identity("κ² compatibility of D".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation() {
        assert!(GroupSpec::new(Series::Sp, 3, Sign::Plus).is_err());
        assert!(GroupSpec::new(Series::O, 2, Sign::Plus).is_err());
        assert!(GroupSpec::new(Series::SL, 1, Sign::Plus).is_err());
        assert_eq!(GroupSpec::new(Series::SL, 3, Sign::Minus).unwrap().id(), "sl3.minus");
    }

    #[test]
    fn sl2_hecke_and_o3_metric() {
        let g = build_group_data(GroupSpec::new(Series::SL, 2, Sign::Plus).unwrap()).unwrap();
        assert_eq!(g.rhat_eigenvalues().len(), 2);
        let o3 = build_group_data(GroupSpec::new(Series::O, 3, Sign::Plus).unwrap()).unwrap();
        let q = o3.qp(1);
        assert_eq!(o3.d, vec![q.inv().unwrap(), Scalar::one(), q]);
    }

    #[test]
    fn sp4_cubic() {
        let g = build_group_data(GroupSpec::new(Series::Sp, 4, Sign::Plus).unwrap()).unwrap();
        assert_eq!(g.rhat_eigenvalues().len(), 3);
        assert!(rhat_polynomial(&g, &g.rhat_eigenvalues()).is_zero());
    }
}
