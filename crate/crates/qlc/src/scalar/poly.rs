//! Sparse multivariate polynomials with integer coefficients.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::int::Int;
use super::mono::{Mono, MAX_VARS};

/// Polynomial stored as terms sorted by strictly decreasing monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Mono, Int)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Int::ONE)
    }

    pub fn constant(c: Int) -> Poly {
        Poly::term(Mono::ONE, c)
    }

    pub fn term(m: Mono, c: Int) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    pub fn var(v: usize) -> Poly {
        Poly::term(Mono::var(v, 1), Int::ONE)
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms(mut terms: Vec<(Mono, Int)>) -> Poly {
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Mono, Int)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = last.1.add(&c),
                _ => {
                    if let Some(last) = out.last() {
                        if last.1.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if let Some(last) = out.last() {
            if last.1.is_zero() {
                out.pop();
            }
        }
        Poly { terms: out }
    }

    pub fn terms(&self) -> &[(Mono, Int)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    /// Constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Int> {
        match self.terms.as_slice() {
            [] => Some(Int::ZERO),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_term(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn lead(&self) -> Option<&(Mono, Int)> {
        self.terms.first()
    }

    pub fn lc(&self) -> Int {
        self.terms.first().map(|t| t.1.clone()).unwrap_or(Int::ZERO)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|t| t.0.degree()).unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|t| t.0.exp(v)).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|t| t.0.exp(v)).min().unwrap_or(0)
    }

    /// Bitmask of variables that occur with positive exponent.
    pub fn var_mask(&self) -> u32 {
        let mut mask = 0;
        for (m, _) in &self.terms {
            for v in 0..MAX_VARS {
                if m.exp(v) > 0 {
                    mask |= 1 << v;
                }
            }
        }
        mask
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    fn merge(&self, o: &Poly, negate: bool) -> Poly {
        let (a, b) = (&self.terms, &o.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { a[i].1.sub(&b[j].1) } else { a[i].1.add(&b[j].1) };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0, c));
        }
        Poly { terms: out }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        self.merge(o, false)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.merge(o, true)
    }

    pub fn mul_term(&self, m: &Mono, c: &Int) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(x, y)| (x.mul(m), y.mul(c))).collect() }
    }

    pub fn scale(&self, c: &Int) -> Poly {
        self.mul_term(&Mono::ONE, c)
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if o.terms.len() == 1 {
            return self.mul_term(&o.terms[0].0, &o.terms[0].1);
        }
        if self.terms.len() == 1 {
            return o.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let (small, large) =
            if self.terms.len() <= o.terms.len() { (self, o) } else { (o, self) };
        if small.terms.len() * large.terms.len() <= 64 {
            let mut prods = Vec::with_capacity(small.terms.len() * large.terms.len());
            for (ma, ca) in &small.terms {
                for (mb, cb) in &large.terms {
                    prods.push((ma.mul(mb), ca.mul(cb)));
                }
            }
            return Poly::from_terms(prods);
        }
        let mut acc: BTreeMap<Mono, Int> = BTreeMap::new();
        for (ma, ca) in &small.terms {
            for (mb, cb) in &large.terms {
                acc.entry(ma.mul(mb)).or_insert(Int::ZERO).add_mul(ca, cb);
            }
        }
        Poly { terms: acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "polynomial division by zero");
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let (dm, dc) = d.terms[0].clone();
        if d.terms.len() == 1 {
            let mut out = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                if !dm.divides(m) {
                    return None;
                }
                out.push((m.div(&dm), c.try_div(&dc)?));
            }
            return Some(Poly { terms: out });
        }
        if d.total_degree() > self.total_degree() {
            return None;
        }
        let mut rem: BTreeMap<Mono, Int> = self.terms.iter().cloned().collect();
        let mut quo = Vec::new();
        while let Some((&m, c)) = rem.iter().next_back() {
            if !dm.divides(&m) {
                return None;
            }
            let qc = c.try_div(&dc)?;
            let qm = m.div(&dm);
            for (x, y) in &d.terms {
                let key = x.mul(&qm);
                let e = rem.entry(key).or_insert(Int::ZERO);
                *e = e.sub(&y.mul(&qc));
                if e.is_zero() {
                    rem.remove(&key);
                }
            }
            quo.push((qm, qc));
        }
        Some(Poly { terms: quo })
    }

    /// Positive gcd of the integer coefficients.
    pub fn content(&self) -> Int {
        let mut g = Int::ZERO;
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Largest monomial dividing every term.
    pub fn mono_content(&self) -> Mono {
        let mut it = self.terms.iter();
        let Some(first) = it.next() else { return Mono::ONE };
        let mut g = first.0;
        for (m, _) in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    pub fn div_int(&self, c: &Int) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, x)| (*m, x.div_exact(c))).collect() }
    }

    pub fn div_mono(&self, d: &Mono) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, x)| (m.div(d), x.clone())).collect() }
    }

    /// Coefficients in variable `v`: entry `k` multiplies `v^k`.
    pub fn coeffs_in(&self, v: usize) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Mono, Int)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            buckets[m.exp(v) as usize].push((m.without(v), c.clone()));
        }
        buckets.into_iter().map(Poly::from_terms).collect()
    }

    /// Inverse of [`Poly::coeffs_in`].
    pub fn from_coeffs_in(v: usize, coeffs: &[Poly]) -> Poly {
        let mut terms = Vec::new();
        for (k, p) in coeffs.iter().enumerate() {
            let x = Mono::var(v, k as u32);
            for (m, c) in &p.terms {
                terms.push((m.mul(&x), c.clone()));
            }
        }
        Poly::from_terms(terms)
    }

    /// Substitutes an integer for variable `v`.
    pub fn subs_int(&self, v: usize, val: &Int) -> Poly {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.without(v), c.mul(&val.pow(m.exp(v)))));
        }
        Poly::from_terms(terms)
    }

    /// Evaluates with rational values for every variable index in `vals`.
    pub fn eval(&self, vals: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = BigRational::from_integer(c.to_big());
            for (v, x) in vals.iter().enumerate() {
                let e = m.exp(v);
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            for v in vals.len()..MAX_VARS {
                assert_eq!(m.exp(v), 0, "no value for variable {v}");
            }
            acc += t;
        }
        acc
    }

    /// Partial evaluation: substitutes the variables listed in `vals`.
    pub fn eval_partial(&self, vals: &[(usize, BigRational)]) -> (Poly, BigInt) {
        // Result is a polynomial divided by an integer denominator.
        let mut terms: Vec<(Mono, BigRational)> = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut mm = *m;
            let mut t = BigRational::from_integer(c.to_big());
            for (v, x) in vals {
                let e = m.exp(*v);
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
                mm = mm.without(*v);
            }
            terms.push((mm, t));
        }
        let mut den = BigInt::one();
        for (_, t) in &terms {
            den = num_integer::Integer::lcm(&den, t.denom());
        }
        let out = terms
            .into_iter()
            .map(|(m, t)| (m, Int::from_big(t.numer() * (&den / t.denom()))))
            .collect();
        (Poly::from_terms(out), den)
    }

    /// Evaluates modulo the prime `p` with residues for every variable.
    pub fn eval_mod(&self, vals: &[u64], p: u64) -> u64 {
        let mut acc: u128 = 0;
        let pp = p as u128;
        for (m, c) in &self.terms {
            let mut t = c.mod_u64(p) as u128;
            for (v, &x) in vals.iter().enumerate() {
                let e = m.exp(v);
                if e > 0 {
                    t = t * pow_mod(x, e as u64, p) as u128 % pp;
                }
            }
            acc = (acc + t) % pp;
        }
        acc as u64
    }

    /// Rendering with the given variable names, terms in decreasing order.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            let mut factors: Vec<String> = Vec::new();
            if !a.is_one() || m.is_one() {
                factors.push(a.to_string());
            }
            for (v, name) in names.iter().enumerate() {
                match m.exp(v) {
                    0 => {}
                    1 => factors.push(name.clone()),
                    e => factors.push(format!("{name}^{e}")),
                }
            }
            let _ = write!(out, "{}", factors.join("*"));
        }
        out
    }
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut base = (b % p) as u128;
    let pp = p as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % pp;
        }
        base = base * base % pp;
        e >>= 1;
    }
    b = acc as u64;
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s() -> Poly {
        Poly::var(0)
    }

    #[test]
    fn arithmetic_and_division() {
        let a = s().add(&Poly::one());
        let b = s().sub(&Poly::one());
        let p = a.mul(&b);
        assert_eq!(p, s().pow(2).sub(&Poly::one()));
        assert_eq!(p.div_exact(&a), Some(b.clone()));
        assert_eq!(p.div_exact(&s()), None);
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn coefficient_views_round_trip() {
        let x = Poly::var(0);
        let y = Poly::var(1);
        let p = x.pow(2).mul(&y).add(&x.scale(&Int::Small(3))).add(&y.pow(3));
        let cs = p.coeffs_in(0);
        assert_eq!(cs.len(), 3);
        assert_eq!(Poly::from_coeffs_in(0, &cs), p);
    }

    #[test]
    fn render_terms() {
        let names = vec!["s".to_string(), "alpha".to_string()];
        let p = s().pow(4).add(&s().pow(2)).add(&Poly::one());
        assert_eq!(p.render(&names), "s^4+s^2+1");
        let q = Poly::var(1).scale(&Int::Small(-2)).add(&s());
        assert_eq!(q.render(&names), "s-2*alpha");
    }
}
