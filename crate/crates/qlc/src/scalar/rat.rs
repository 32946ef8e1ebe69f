//! Canonical rational functions.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::gcd::gcd;
use super::int::Int;
use super::mono::Mono;
use super::poly::Poly;
use super::ScalarError;

/// Element of the field of rational functions over the rationals.
///
/// Invariants: the denominator is nonzero, numerator and denominator are
/// coprime, the leading coefficient of the denominator is positive and zero
/// is stored as `0/1`. Two scalars are equal iff their fields are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Default for Scalar {
    fn default() -> Scalar {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Scalar {
        Scalar::int(1)
    }

    pub fn int(c: i64) -> Scalar {
        Scalar { num: Poly::constant(Int::Small(c)), den: Poly::one() }
    }

    pub fn ratio(n: i64, d: i64) -> Scalar {
        Scalar::from_parts(Poly::constant(Int::Small(n)), Poly::constant(Int::Small(d)))
    }

    pub fn from_rational(r: &BigRational) -> Scalar {
        Scalar::from_parts(
            Poly::constant(Int::from_big(r.numer().clone())),
            Poly::constant(Int::from_big(r.denom().clone())),
        )
    }

    pub fn from_poly(p: Poly) -> Scalar {
        Scalar { num: p, den: Poly::one() }
    }

    /// The variable with index `v`.
    pub fn var(v: usize) -> Scalar {
        Scalar::from_poly(Poly::var(v))
    }

    /// `x_v^e` for any integer `e`, negative powers as `1/x_v^{-e}`.
    pub fn var_pow(v: usize, e: i64) -> Scalar {
        let m = Mono::var(v, e.unsigned_abs() as u32);
        if e >= 0 {
            Scalar { num: Poly::term(m, Int::ONE), den: Poly::one() }
        } else {
            Scalar { num: Poly::one(), den: Poly::term(m, Int::ONE) }
        }
    }

    /// Reduces an arbitrary fraction to canonical form.
    pub fn from_parts(num: Poly, den: Poly) -> Scalar {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Scalar::zero();
        }
        let g = gcd(&num, &den);
        let (mut n, mut d) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        if d.lc().is_negative() {
            n = n.neg();
            d = d.neg();
        }
        Scalar { num: n, den: d }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// Rational value when the scalar is constant.
    pub fn as_rational(&self) -> Option<BigRational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(BigRational::new(n.to_big(), d.to_big()))
    }

    /// Number of terms, a cheap size measure for pivot selection.
    pub fn complexity(&self) -> usize {
        self.num.len() + self.den.len()
    }

    /// Total degree of numerator plus denominator.
    pub fn degree(&self) -> u32 {
        self.num.total_degree() + self.den.total_degree()
    }

    pub fn neg(&self) -> Scalar {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        self.add_signed(o, false)
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add_signed(o, true)
    }

    fn add_signed(&self, o: &Scalar, negate: bool) -> Scalar {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { o.neg() } else { o.clone() };
        }
        let combine = |a: &Poly, b: &Poly| if negate { a.sub(b) } else { a.add(b) };
        if self.den == o.den {
            let n = combine(&self.num, &o.num);
            return Scalar::reduce_against(n, self.den.clone(), &self.den);
        }
        // Henrici: with g = gcd(b, d), gcd(a d' + c b', b d') divides g.
        let g = gcd(&self.den, &o.den);
        if g.is_one() {
            let n = combine(&self.num.mul(&o.den), &o.num.mul(&self.den));
            let d = self.den.mul(&o.den);
            return Scalar::canonical_sign(n, d);
        }
        let b1 = self.den.div_exact(&g).expect("gcd divides");
        let d1 = o.den.div_exact(&g).expect("gcd divides");
        let n = combine(&self.num.mul(&d1), &o.num.mul(&b1));
        let d = self.den.mul(&d1);
        Scalar::reduce_against(n, d, &g)
    }

    /// Canonicalizes `n/d` where any common factor divides `g`.
    fn reduce_against(n: Poly, d: Poly, g: &Poly) -> Scalar {
        if n.is_zero() {
            return Scalar::zero();
        }
        if g.is_one() {
            return Scalar::canonical_sign(n, d);
        }
        let h = gcd(&n, g);
        if h.is_one() {
            Scalar::canonical_sign(n, d)
        } else {
            Scalar::canonical_sign(
                n.div_exact(&h).expect("gcd divides"),
                d.div_exact(&h).expect("gcd divides"),
            )
        }
    }

    fn canonical_sign(n: Poly, d: Poly) -> Scalar {
        if n.is_zero() {
            return Scalar::zero();
        }
        if d.lc().is_negative() {
            Scalar { num: n.neg(), den: d.neg() }
        } else {
            Scalar { num: n, den: d }
        }
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        if o.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return o.clone();
        }
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let cut = |p: &Poly, g: &Poly| if g.is_one() { p.clone() } else { p.div_exact(g).expect("gcd divides") };
        let n = cut(&self.num, &g1).mul(&cut(&o.num, &g2));
        let d = cut(&self.den, &g2).mul(&cut(&o.den, &g1));
        Scalar::canonical_sign(n, d)
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Scalar::canonical_sign(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self.mul(&o.inv()?))
    }

    /// Integer power, negative exponents invert.
    pub fn pow(&self, e: i64) -> Scalar {
        let base = if e < 0 { self.inv().expect("inverse of zero") } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        Scalar { num: base.num.pow(k), den: base.den.pow(k) }
    }

    pub fn scale_int(&self, c: i64) -> Scalar {
        self.mul(&Scalar::int(c))
    }

    /// Exact value at a rational point given for variables `0..vals.len()`.
    pub fn eval(&self, vals: &[BigRational]) -> Result<BigRational, ScalarError> {
        let d = self.den.eval(vals);
        if d.is_zero() {
            return Err(ScalarError::Pole);
        }
        Ok(self.num.eval(vals) / d)
    }

    /// Substitutes rational values for some variables.
    pub fn subs(&self, vals: &[(usize, BigRational)]) -> Result<Scalar, ScalarError> {
        let (n, nd) = self.num.eval_partial(vals);
        let (d, dd) = self.den.eval_partial(vals);
        if d.is_zero() {
            return Err(ScalarError::Pole);
        }
        Ok(Scalar::from_parts(n.scale(&Int::from_big(dd)), d.scale(&Int::from_big(nd))))
    }

    /// Substitutes a scalar for variable `v`.
    pub fn subs_scalar(&self, v: usize, val: &Scalar) -> Result<Scalar, ScalarError> {
        let sub = |p: &Poly| -> Scalar {
            let cs = p.coeffs_in(v);
            let mut acc = Scalar::zero();
            for c in cs.iter().rev() {
                acc = acc.mul(val).add(&Scalar::from_poly(c.clone()));
            }
            acc
        };
        sub(&self.num).div(&sub(&self.den)).map_err(|_| ScalarError::Pole)
    }

    /// Value modulo `p`, `None` at a pole.
    pub fn eval_mod(&self, vals: &[u64], p: u64) -> Option<u64> {
        let d = self.den.eval_mod(vals, p);
        if d == 0 {
            return None;
        }
        let n = self.num.eval_mod(vals, p);
        Some((n as u128 * inv_mod(d, p) as u128 % p as u128) as u64)
    }

    /// Limit as variable `v` tends to one.
    pub fn limit_to_one(&self, v: usize) -> Result<Scalar, ScalarError> {
        let one = Int::ONE;
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        let lin = Poly::var(v).sub(&Poly::one());
        loop {
            let n1 = num.subs_int(v, &one);
            let d1 = den.subs_int(v, &one);
            if !d1.is_zero() {
                return Ok(Scalar::from_parts(n1, d1));
            }
            if !n1.is_zero() {
                return Err(ScalarError::Pole);
            }
            num = num.div_exact(&lin).expect("root at one");
            den = den.div_exact(&lin).expect("root at one");
        }
    }

    /// Textual form `num` or `(num)/(den)` with the given variable names.
    pub fn render(&self, names: &[String]) -> String {
        if self.den.is_one() {
            self.num.render(names)
        } else {
            format!("({})/({})", self.num.render(names), self.den.render(names))
        }
    }

    pub fn from_bigint(b: BigInt) -> Scalar {
        Scalar::from_poly(Poly::constant(Int::from_big(b)))
    }
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    super::poly::pow_mod(a, p - 2, p)
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = super::DEFAULT_VARS.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", self.render(&names))
    }
}

impl std::ops::Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar::add(self, o)
    }
}

impl std::ops::Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar::sub(self, o)
    }
}

impl std::ops::Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        Scalar::mul(self, o)
    }
}

impl std::ops::Div for &Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        Scalar::div(self, o).expect("division by zero scalar")
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

impl std::ops::Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        Scalar::add(&self, &o)
    }
}

impl std::ops::Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        Scalar::sub(&self, &o)
    }
}

impl std::ops::Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        Scalar::mul(&self, &o)
    }
}

impl std::ops::Div for Scalar {
    type Output = Scalar;
    fn div(self, o: Scalar) -> Scalar {
        Scalar::div(&self, &o).expect("division by zero scalar")
    }
}

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(&self)
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a.add(&b))
    }
}
