//! Multivariate polynomial gcd over the integers.
//!
//! Contents (integer and monomial) are split off first. Variables occurring
//! in only one argument reduce the problem to coefficient gcds. The remaining
//! case runs the subresultant remainder sequence in a main variable, with
//! coefficients in the polynomial ring of the other variables.

use super::int::Int;
use super::mono::{Mono, MAX_VARS};
use super::poly::Poly;

fn positive(p: Poly) -> Poly {
    if p.lc().is_negative() {
        p.neg()
    } else {
        p
    }
}

/// Greatest common divisor with positive leading coefficient; `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return positive(b.clone());
    }
    if b.is_zero() {
        return positive(a.clone());
    }
    if a.is_term() {
        return term_gcd(a, b);
    }
    if b.is_term() {
        return term_gcd(b, a);
    }
    if a == b {
        return positive(a.clone());
    }
    let (ca, cb) = (a.content(), b.content());
    let (ma, mb) = (a.mono_content(), b.mono_content());
    let c = ca.gcd(&cb);
    let m = ma.gcd(&mb);
    let a1 = a.div_int(&ca).div_mono(&ma);
    let b1 = b.div_int(&cb).div_mono(&mb);
    let g = primitive_gcd(&a1, &b1);
    positive(g.mul_term(&m, &c))
}

fn term_gcd(t: &Poly, p: &Poly) -> Poly {
    let (m, c) = t.lead().expect("nonzero term").clone();
    let ic = c.gcd(&p.content());
    let im = m.gcd(&p.mono_content());
    Poly::term(im, ic)
}

fn lowest_var(mask: u32) -> usize {
    mask.trailing_zeros() as usize
}

/// Gcd of the coefficients of `p` in `v`, folded together with `start`.
fn fold_coeffs(start: Poly, p: &Poly, v: usize) -> Poly {
    let mut g = start;
    let mut cs = p.coeffs_in(v);
    cs.retain(|c| !c.is_zero());
    cs.sort_by_key(|c| c.len());
    for c in cs {
        if g.is_one() {
            break;
        }
        g = gcd(&g, &c);
    }
    g
}

/// Content of `p` viewed as a polynomial in `v`.
pub fn content_in(p: &Poly, v: usize) -> Poly {
    let mut cs = p.coeffs_in(v);
    cs.retain(|c| !c.is_zero());
    cs.sort_by_key(|c| c.len());
    let mut it = cs.into_iter();
    let Some(first) = it.next() else { return Poly::zero() };
    let mut g = positive(first);
    for c in it {
        if g.is_one() {
            break;
        }
        g = gcd(&g, &c);
    }
    g
}

fn primitive_gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let (ma, mb) = (a.var_mask(), b.var_mask());
    if ma & !mb != 0 {
        return fold_coeffs(positive(b.clone()), a, lowest_var(ma & !mb));
    }
    if mb & !ma != 0 {
        return fold_coeffs(positive(a.clone()), b, lowest_var(mb & !ma));
    }
    let mut best = lowest_var(ma);
    let mut best_deg = u32::MAX;
    for v in 0..MAX_VARS {
        if ma & (1 << v) != 0 {
            let d = a.degree_in(v).max(b.degree_in(v));
            if d < best_deg {
                best_deg = d;
                best = v;
            }
        }
    }
    let v = best;
    let (ca, cb) = (content_in(a, v), content_in(b, v));
    let c = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let g = subresultant(&pa, &pb, v);
    if g.is_constant() {
        return positive(c);
    }
    let gc = content_in(&g, v);
    let g = g.div_exact(&gc).expect("content divides");
    positive(g.mul(&c))
}

fn lc_in(p: &Poly, v: usize) -> Poly {
    let d = p.degree_in(v);
    Poly::from_terms(
        p.terms().iter().filter(|(m, _)| m.exp(v) == d).map(|(m, c)| (m.without(v), c.clone())).collect(),
    )
}

fn prem(a: &Poly, b: &Poly, v: usize) -> Poly {
    let db = b.degree_in(v);
    let lb = lc_in(b, v);
    let mut r = a.clone();
    let mut e = a.degree_in(v) as i64 - db as i64 + 1;
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = lc_in(&r, v);
        let shifted = b.mul_term(&Mono::var(v, dr - db), &Int::ONE).mul(&lr);
        r = r.mul(&lb).sub(&shifted);
        e -= 1;
    }
    if e > 0 {
        r = r.mul(&lb.pow(e as u32));
    }
    r
}

fn subresultant(a: &Poly, b: &Poly, v: usize) -> Poly {
    let (mut a, mut b) =
        if a.degree_in(v) >= b.degree_in(v) { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
    let mut g = Poly::one();
    let mut h = Poly::one();
    loop {
        let delta = a.degree_in(v) - b.degree_in(v);
        let r = prem(&a, &b, v);
        if r.is_zero() {
            return b;
        }
        if r.degree_in(v) == 0 {
            return Poly::one();
        }
        let den = g.mul(&h.pow(delta));
        a = b;
        b = r.div_exact(&den).expect("subresultant division is exact");
        g = lc_in(&a, v);
        if delta > 0 {
            h = g.pow(delta).div_exact(&h.pow(delta - 1)).expect("subresultant division is exact");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(0)
    }
    fn y() -> Poly {
        Poly::var(1)
    }
    fn k(c: i64) -> Poly {
        Poly::constant(Int::Small(c))
    }

    #[test]
    fn univariate_common_factor() {
        let f = x().add(&k(1));
        let a = f.mul(&x().sub(&k(2))).scale(&Int::Small(6));
        let b = f.mul(&x().add(&k(3))).scale(&Int::Small(4));
        assert_eq!(gcd(&a, &b), f.scale(&Int::Small(2)));
    }

    #[test]
    fn multivariate_common_factor() {
        let f = x().mul(&y()).add(&k(1));
        let a = f.mul(&x().add(&y())).mul(&x());
        let b = f.mul(&x().sub(&y())).mul(&x().pow(2));
        assert_eq!(gcd(&a, &b), f.mul(&x()));
    }

    #[test]
    fn coprime_and_mixed_variables() {
        let a = x().pow(2).add(&k(1));
        let b = y().add(&k(3));
        assert!(gcd(&a, &b).is_one());
        let c = a.mul(&y());
        assert_eq!(gcd(&c, &a.mul(&k(5))), a);
    }
}
