//! Endpoint arithmetic on closed rational intervals, used by the tail
//! and ball oracles. Plain tuples keep the call sites light; enclosure
//! construction happens at the public boundary.

use crate::rational::Rational;

pub(crate) type Iv = (Rational, Rational);

pub(crate) fn iv_point(c: Rational) -> Iv {
    (c.clone(), c)
}

pub(crate) fn iv_add(a: &Iv, b: &Iv) -> Iv {
    (&a.0 + &b.0, &a.1 + &b.1)
}

pub(crate) fn iv_neg(a: &Iv) -> Iv {
    (-&a.1, -&a.0)
}

pub(crate) fn iv_scale(c: &Rational, a: &Iv) -> Iv {
    if c.is_negative() {
        (c * &a.1, c * &a.0)
    } else {
        (c * &a.0, c * &a.1)
    }
}

pub(crate) fn iv_mul(a: &Iv, b: &Iv) -> Iv {
    let products = [&a.0 * &b.0, &a.0 * &b.1, &a.1 * &b.0, &a.1 * &b.1];
    let mut lo = products[0].clone();
    let mut hi = products[0].clone();
    for p in &products[1..] {
        lo = lo.min(p.clone());
        hi = hi.max(p.clone());
    }
    (lo, hi)
}

pub(crate) fn iv_abs(a: &Iv) -> Iv {
    if !a.0.is_negative() {
        a.clone()
    } else if !a.1.is_positive() {
        iv_neg(a)
    } else {
        (Rational::zero(), (-&a.0).max(a.1.clone()))
    }
}

pub(crate) fn iv_max(a: &Iv, b: &Iv) -> Iv {
    (a.0.clone().max(b.0.clone()), a.1.clone().max(b.1.clone()))
}
