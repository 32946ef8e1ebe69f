//! Exact arithmetic in the field of multivariate rational functions over ℚ.
//!
//! Negative powers are cleared into the denominator, so a single canonical
//! form serves equality tests. Monomials use graded lexicographic order over
//! the variable order fixed by a [`ScalarContext`].

mod gcd;
mod int;
mod mono;
mod parse;
mod poly;
mod rat;

use std::collections::HashMap;
use std::sync::Arc;

use num_rational::BigRational;
use thiserror::Error;

pub use gcd::gcd;
pub use int::Int;
pub use mono::{Mono, MAX_VARS};
pub use poly::Poly;
pub use rat::{inv_mod, Scalar};

/// Variable layout shared by the group, metric and connection computations.
pub const DEFAULT_VARS: [&str; 7] = ["s", "alpha", "beta", "gamma", "c0", "c1", "c2"];

/// Index of the deformation variable in every context.
pub const S: usize = 0;
pub const ALPHA: usize = 1;
pub const BETA: usize = 2;
pub const GAMMA: usize = 3;
pub const C0: usize = 4;
pub const C1: usize = 5;
pub const C2: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("too many variables: {0} (at most {MAX_VARS})")]
    TooManyVariables(usize),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at the evaluation point")]
    Pole,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Arithmetic operation selector for [`ScalarContext::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

/// Ordered variable names; read-only after creation and cheap to clone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarContext {
    names: Arc<Vec<String>>,
}

impl ScalarContext {
    pub fn new<S: AsRef<str>>(vars: &[S]) -> Result<ScalarContext, ScalarError> {
        if vars.len() > MAX_VARS {
            return Err(ScalarError::TooManyVariables(vars.len()));
        }
        let mut seen = std::collections::HashSet::new();
        for v in vars {
            if !seen.insert(v.as_ref()) {
                return Err(ScalarError::DuplicateVariable(v.as_ref().to_string()));
            }
        }
        Ok(ScalarContext { names: Arc::new(vars.iter().map(|v| v.as_ref().to_string()).collect()) })
    }

    /// The context used for groups, metrics and connections.
    pub fn standard() -> ScalarContext {
        ScalarContext::new(&DEFAULT_VARS).expect("distinct names")
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Result<usize, ScalarError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| ScalarError::UnknownVariable(name.to_string()))
    }

    pub fn var(&self, name: &str) -> Result<Scalar, ScalarError> {
        Ok(Scalar::var(self.index(name)?))
    }

    pub fn arith(&self, a: &Scalar, b: &Scalar, op: Op) -> Result<Scalar, ScalarError> {
        Ok(match op {
            Op::Add => a.add(b),
            Op::Sub => a.sub(b),
            Op::Mul => a.mul(b),
            Op::Div => a.div(b)?,
        })
    }

    /// Exact value under a full assignment of every variable of the scalar.
    pub fn eval(&self, a: &Scalar, assignment: &HashMap<String, BigRational>) -> Result<BigRational, ScalarError> {
        let subs = self.assignment(assignment)?;
        let out = a.subs(&subs)?;
        for (m, _) in out.num().terms().iter().chain(out.den().terms()) {
            if let Some(v) = (0..self.names.len()).find(|&v| m.exp(v) > 0) {
                return Err(ScalarError::UnknownVariable(format!("{} has no value", self.names[v])));
            }
        }
        Ok(out.as_rational().expect("constant after full substitution"))
    }

    /// Partial substitution of named variables.
    pub fn subs(&self, a: &Scalar, assignment: &HashMap<String, BigRational>) -> Result<Scalar, ScalarError> {
        a.subs(&self.assignment(assignment)?)
    }

    fn assignment(&self, m: &HashMap<String, BigRational>) -> Result<Vec<(usize, BigRational)>, ScalarError> {
        let mut out: Vec<(usize, BigRational)> =
            m.iter().map(|(k, v)| Ok((self.index(k)?, v.clone()))).collect::<Result<_, ScalarError>>()?;
        out.sort_by_key(|p| p.0);
        Ok(out)
    }

    /// Limit as the deformation variable (index 0) tends to one.
    pub fn limit_q_to_one(&self, a: &Scalar) -> Result<Scalar, ScalarError> {
        a.limit_to_one(S)
    }

    pub fn render(&self, a: &Scalar) -> String {
        a.render(&self.names)
    }

    pub fn parse(&self, text: &str) -> Result<Scalar, ScalarError> {
        parse::parse(text, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn context_rules() {
        assert!(ScalarContext::new(&["s", "s"]).is_err());
        assert!(ScalarContext::new::<&str>(&[]).is_ok());
        let ctx = ScalarContext::new(&["s", "alpha", "beta"]).unwrap();
        assert_eq!(ctx.index("beta").unwrap(), 2);
    }

    #[test]
    fn field_examples() {
        let ctx = ScalarContext::new(&["s"]).unwrap();
        let q = ctx.var("s").unwrap();
        let qi = q.inv().unwrap();
        let big_q = q.sub(&qi);
        assert!(ctx.arith(&big_q, &big_q, Op::Div).unwrap().is_one());
        assert!(q.mul(&qi).is_one());
        let frak_s = (1..=3).map(|i| q.pow(-2 * i)).sum::<Scalar>();
        assert_eq!(ctx.render(&frak_s), "(s^4+s^2+1)/(s^6)");
        assert_eq!(ctx.arith(&q, &Scalar::zero(), Op::Div), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn evaluation_examples() {
        let ctx = ScalarContext::new(&["s"]).unwrap();
        let q = ctx.var("s").unwrap();
        let big_q = q.sub(&q.inv().unwrap());
        let at = |v: BigRational| HashMap::from([("s".to_string(), v)]);
        assert_eq!(ctx.eval(&big_q, &at(rat(2, 1))).unwrap(), rat(3, 2));
        let frak_s = (1..=3).map(|i| q.pow(-2 * i)).sum::<Scalar>();
        assert_eq!(ctx.eval(&frak_s, &at(rat(1, 1))).unwrap(), rat(3, 1));
        let p = q.pow(5).neg();
        assert_eq!(ctx.eval(&p, &at(rat(2, 1))).unwrap(), rat(-32, 1));
        assert_eq!(ctx.eval(&qi_of(&q), &at(rat(0, 1))), Err(ScalarError::Pole));
    }

    fn qi_of(q: &Scalar) -> Scalar {
        q.inv().unwrap()
    }

    #[test]
    fn classical_limits() {
        let ctx = ScalarContext::new(&["s"]).unwrap();
        let q = ctx.var("s").unwrap();
        let big_q = q.sub(&q.inv().unwrap());
        assert!(ctx.limit_q_to_one(&big_q.div(&big_q).unwrap()).unwrap().is_one());
        assert!(ctx.limit_q_to_one(&big_q).unwrap().is_zero());
        let n = 4;
        let quot = q.pow(n).sub(&q.pow(-n)).div(&big_q).unwrap();
        assert_eq!(ctx.limit_q_to_one(&quot).unwrap(), Scalar::int(n));
        assert_eq!(ctx.limit_q_to_one(&big_q.inv().unwrap()), Err(ScalarError::Pole));
    }
}
