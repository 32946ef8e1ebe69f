//! Explicit bases of Mor(v, v⊗v) from R̂, C and B.
//!
//! For SL the six maps are written with Kronecker deltas and R̂. For O/Sp
//! each map is a short program in leg notation: operators act on numbered
//! legs 1..4 of v⊗v = u^c⊗u⊗u^c⊗u and are applied right to left to the
//! input legs of v.

use std::collections::HashMap;

use super::{vv_sig, v_sig, CalculusData};
use crate::group::{GroupData, Series};
use crate::scalar::Scalar;
use crate::tensor::Tensor;

/// Reading of the exponent and middle factor in the sixth SL map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum A6Variant {
    /// Exponent 2n−2a−2d, middle factor R̂.
    NR,
    /// Exponent 2p−2a−2c, middle factor R̂.
    PR,
    /// Exponent 2n−2a−2d, middle factor R̂⁻¹.
    NI,
    /// Exponent 2p−2a−2c, middle factor R̂⁻¹.
    PI,
}

impl A6Variant {
    pub const ALL: [A6Variant; 4] = [A6Variant::NR, A6Variant::PR, A6Variant::NI, A6Variant::PI];

    pub fn name(self) -> &'static str {
        match self {
            A6Variant::NR => "n-exponent, R",
            A6Variant::PR => "p-exponent, R",
            A6Variant::NI => "n-exponent, R^-1",
            A6Variant::PI => "p-exponent, R^-1",
        }
    }
}

fn build_map<F>(g: &GroupData, f: F) -> Tensor
where
    F: Fn(usize, usize, usize, usize, usize, usize) -> Scalar + Sync,
{
    let n = g.n;
    Tensor::from_fn(vv_sig(n), v_sig(n), |r, c| {
        let (a, b, cc, d) = (r / (n * n * n), (r / (n * n)) % n, (r / n) % n, r % n);
        f(a, b, cc, d, c / n, c % n)
    })
}

fn dl(x: usize, y: usize) -> bool {
    x == y
}

/// q^{-2(a+1)} with 1-based index a+1.
fn qi2(g: &GroupData, a: usize) -> Scalar {
    g.qp(-2 * (a as i64 + 1))
}

/// The sixth SL map under one reading.
pub fn build_a6(g: &GroupData, variant: A6Variant) -> Tensor {
    let n = g.n;
    build_map(g, |a, b, c, d, i, j| {
        let mut acc = Scalar::zero();
        for nn in 0..n {
            for m in 0..n {
                let r1 = g.rh(b, nn, a, m);
                if r1.is_zero() {
                    continue;
                }
                for p in 0..n {
                    let r3 = g.rh(i, m, j, p);
                    if r3.is_zero() {
                        continue;
                    }
                    let mid = match variant {
                        A6Variant::NR | A6Variant::PR => g.rh(d, p, c, nn),
                        A6Variant::NI | A6Variant::PI => g.rhi(d, p, c, nn),
                    };
                    if mid.is_zero() {
                        continue;
                    }
                    let e = match variant {
                        A6Variant::NR | A6Variant::NI => 2 * nn as i64 - 2 * a as i64 - 2 * d as i64 - 2,
                        A6Variant::PR | A6Variant::PI => 2 * p as i64 - 2 * a as i64 - 2 * c as i64 - 2,
                    };
                    acc = acc.add(&g.qp(e).mul(&r1).mul(&mid).mul(&r3));
                }
            }
        }
        acc
    })
}

/// A₁..A₅ and A₆ (first reading) for SL.
pub fn sl_basis(g: &GroupData) -> Vec<Tensor> {
    let z = Scalar::zero;
    vec![
        build_map(g, |a, b, c, d, i, j| {
            if dl(i, j) && dl(a, b) && dl(c, d) {
                qi2(g, a).mul(&qi2(g, c))
            } else {
                z()
            }
        }),
        build_map(g, |a, b, c, d, i, j| if dl(i, j) && dl(a, d) && dl(b, c) { qi2(g, a) } else { z() }),
        build_map(g, |a, b, c, d, i, j| if dl(a, i) && dl(b, j) && dl(c, d) { qi2(g, c) } else { z() }),
        build_map(g, |a, b, c, d, i, j| if dl(a, b) && dl(c, i) && dl(d, j) { qi2(g, a) } else { z() }),
        build_map(g, |a, b, c, d, i, j| if dl(a, i) && dl(b, c) && dl(d, j) { Scalar::one() } else { z() }),
        build_a6(g, A6Variant::NR),
    ]
}

/// One operator in leg notation. Legs 1..4 are output legs; the two input
/// legs of v are the output legs not created by a `C`, or fresh legs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LegOp {
    /// Bᵗ on one output leg.
    Bt(u8),
    /// Cᵗ on the first input leg.
    Ct1,
    /// Contraction with B of two legs (input legs if the first is absent).
    B(u8, u8),
    /// Insertion of C on two new legs.
    C(u8, u8),
    /// R̂ on two legs.
    R(u8, u8),
    /// R̂⁻¹ on two legs.
    Ri(u8, u8),
}

use LegOp::*;

/// Leg programs of A₁..A₁₅ for O/Sp, written left to right.
pub const LEG_PROGRAMS: [&[LegOp]; 15] = [
    &[Bt(1), Bt(3), C(1, 2), C(3, 4), B(1, 2), Ct1],
    &[Bt(1), Bt(3), Ri(2, 3), C(1, 2), C(3, 4), B(1, 2), Ct1],
    &[Bt(1), Bt(3), C(2, 3), C(1, 4), B(1, 2), Ct1],
    &[Bt(3), C(3, 4)],
    &[Bt(1), Bt(3), R(1, 2), C(3, 4), Ct1],
    &[Bt(1), C(1, 2)],
    &[Bt(1), Bt(3), C(1, 2), R(3, 4), Ct1],
    &[Bt(3), C(2, 3)],
    &[Bt(1), Bt(3), C(2, 3), R(1, 4), Ct1],
    &[Bt(1), Bt(3), R(1, 2), C(2, 3), Ct1],
    &[Bt(1), Bt(3), R(1, 2), C(2, 3), Ri(1, 4), Ct1],
    &[Bt(3), Ri(2, 3), C(3, 4)],
    &[Bt(1), Bt(3), Ri(2, 3), C(3, 4), R(1, 2), Ct1],
    &[Bt(1), Bt(3), R(1, 2), R(2, 3), C(3, 4), Ct1],
    &[Bt(1), Bt(3), R(1, 2), R(2, 3), C(3, 4), Ri(1, 2), Ct1],
];

/// Slots 0..3 hold output legs 1..4, slots 4 and 5 the fresh input legs.
type Legs = [Option<u8>; 6];

fn slot(l: u8) -> usize {
    l as usize - 1
}

/// Evaluates a leg program to a map v → v⊗v.
pub fn leg_map(g: &GroupData, ops: &[LegOp]) -> Tensor {
    let n = g.n;
    let c = g.c.as_ref().expect("C for O/Sp");
    let b = g.b.as_ref().expect("B for O/Sp");
    let mut created = [false; 4];
    for o in ops {
        if let C(x, y) = o {
            created[slot(*x)] = true;
            created[slot(*y)] = true;
        }
    }
    let comp: Vec<usize> = (0..4).filter(|&k| !created[k]).collect();
    let inlab: [usize; 2] = if comp.is_empty() { [4, 5] } else { [comp[0], comp[1]] };
    let mut st: HashMap<(Legs, usize), Scalar> = HashMap::new();
    for i in 0..n {
        for j in 0..n {
            let mut l: Legs = [None; 6];
            l[inlab[0]] = Some(i as u8);
            l[inlab[1]] = Some(j as u8);
            st.insert((l, i * n + j), Scalar::one());
        }
    }
    let push = |m: &mut HashMap<(Legs, usize), Scalar>, key: (Legs, usize), v: Scalar| {
        let e = m.entry(key).or_insert_with(Scalar::zero);
        *e = e.add(&v);
    };
    for o in ops.iter().rev() {
        let mut new: HashMap<(Legs, usize), Scalar> = HashMap::new();
        for ((legs, inp), v) in &st {
            match *o {
                Ct1 => {
                    let i = legs[inlab[0]].expect("input leg") as usize;
                    for m in 0..n {
                        if !c[i][m].is_zero() {
                            let mut l = *legs;
                            l[inlab[0]] = Some(m as u8);
                            push(&mut new, (l, *inp), v.mul(&c[i][m]));
                        }
                    }
                }
                Bt(x) => {
                    let mp = legs[slot(x)].expect("output leg") as usize;
                    for m in 0..n {
                        if !b[mp][m].is_zero() {
                            let mut l = *legs;
                            l[slot(x)] = Some(m as u8);
                            push(&mut new, (l, *inp), v.mul(&b[mp][m]));
                        }
                    }
                }
                B(x, y) => {
                    let (lx, ly) = if legs[slot(x)].is_some() { (slot(x), slot(y)) } else { (inlab[0], inlab[1]) };
                    let f = &b[legs[lx].expect("leg") as usize][legs[ly].expect("leg") as usize];
                    if !f.is_zero() {
                        let mut l = *legs;
                        l[lx] = None;
                        l[ly] = None;
                        push(&mut new, (l, *inp), v.mul(f));
                    }
                }
                C(x, y) => {
                    for a in 0..n {
                        for bb in 0..n {
                            if !c[a][bb].is_zero() {
                                let mut l = *legs;
                                l[slot(x)] = Some(a as u8);
                                l[slot(y)] = Some(bb as u8);
                                push(&mut new, (l, *inp), v.mul(&c[a][bb]));
                            }
                        }
                    }
                }
                R(x, y) | Ri(x, y) => {
                    let m = if matches!(o, R(..)) { &g.rhat } else { &g.rhat_inv };
                    let a = legs[slot(x)].expect("leg") as usize;
                    let bb = legs[slot(y)].expect("leg") as usize;
                    for cc in 0..n {
                        for e in 0..n {
                            let f = m.get(cc * n + e, a * n + bb);
                            if !f.is_zero() {
                                let mut l = *legs;
                                l[slot(x)] = Some(cc as u8);
                                l[slot(y)] = Some(e as u8);
                                push(&mut new, (l, *inp), v.mul(&f));
                            }
                        }
                    }
                }
            }
        }
        st = new.into_iter().filter(|(_, v)| !v.is_zero()).collect();
    }
    let trip = st
        .into_iter()
        .map(|((l, inp), v)| {
            let leg = |k: usize| l[k].expect("output leg") as usize;
            (((leg(0) * n + leg(1)) * n + leg(2)) * n + leg(3), inp, v)
        })
        .collect();
    Tensor::from_triplets(vv_sig(n), v_sig(n), trip)
}

/// The explicit maps A_k of the series.
pub fn morphism_basis(calc: &CalculusData) -> Vec<Tensor> {
    let g = &calc.group;
    match g.spec.series {
        Series::SL => sl_basis(g),
        _ => LEG_PROGRAMS.iter().map(|p| leg_map(g, p)).collect(),
    }
}
