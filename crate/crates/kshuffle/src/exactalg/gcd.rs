//! Multivariate polynomial gcd by primitive pseudo-remainder sequences,
//! plus exact division. Inputs are true polynomials (no negative
//! exponents); results are integer-primitive with positive leading
//! coefficient.

use super::poly::{LaurentPoly, Mono, Sym};
use super::Rational;
use num::One;

/// Exact division `a / b`; returns `None` when `b` does not divide `a`.
pub fn try_div_exact(a: &LaurentPoly, b: &LaurentPoly) -> Option<LaurentPoly> {
    assert!(!b.is_zero(), "division by zero polynomial");
    let (ltm_b, ltc_b) = {
        let (m, c) = b.leading_term().unwrap();
        (m.clone(), c.clone())
    };
    let tail_b: Vec<(Mono, Rational)> = b
        .terms()
        .filter(|(m, _)| **m != ltm_b)
        .map(|(m, c)| (m.clone(), c.clone()))
        .collect();
    let mut rem = a.clone();
    let mut q = LaurentPoly::zero();
    loop {
        let (ltm_r, ltc_r) = match rem.leading_term() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Some(q),
        };
        if !ltm_b.divides(&ltm_r) {
            return None;
        }
        let qm = ltm_r.div(&ltm_b);
        let qc = ltc_r.clone() / &ltc_b;
        rem.add_term(ltm_r, -ltc_r);
        for (m, c) in &tail_b {
            rem.add_term(qm.mul(m), -(qc.clone() * c));
        }
        q.add_term(qm, qc);
    }
}

/// Exact division that must succeed; panics on a non-divisor.
pub fn div_exact(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    try_div_exact(a, b).expect("exact division failed")
}

fn primitive(p: &LaurentPoly) -> LaurentPoly {
    p.content_and_primitive().1
}

fn deg_in(p: &LaurentPoly, v: &Sym) -> i64 {
    p.exp_range(v).map(|(_, mx)| mx).unwrap_or(0)
}

/// Content of `p` with respect to `v`: the gcd of its coefficient
/// polynomials in the remaining symbols.
fn content_in(p: &LaurentPoly, v: &Sym) -> LaurentPoly {
    let mut acc = LaurentPoly::zero();
    for (_, c) in p.profile(v) {
        acc = gcd_poly(&acc, &c);
        if acc.is_constant() && !acc.is_zero() {
            break;
        }
    }
    acc
}

/// One division-free elimination pass of `u` by `w` in the variable `v`.
/// Returns a polynomial proportional to the pseudo-remainder.
fn pseudo_rem(u: &LaurentPoly, w: &LaurentPoly, v: &Sym) -> LaurentPoly {
    let dw = deg_in(w, v);
    let lcw = w.profile(v).remove(&dw).unwrap_or_default();
    let mut r = u.clone();
    while !r.is_zero() {
        let dr = deg_in(&r, v);
        if dr < dw {
            break;
        }
        let lcr = r.profile(v).remove(&dr).unwrap_or_default();
        let shift = LaurentPoly::monomial(Rational::one(), Mono::var(v.clone(), dr - dw));
        r = r.mul(&lcw).sub(&w.mul(&lcr).mul(&shift));
    }
    r
}

/// The gcd of two true polynomials over the rationals, normalized to be
/// integer-primitive with positive leading coefficient. `gcd(0, b)` is the
/// primitive part of `b`.
pub fn gcd_poly(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return primitive(b);
    }
    if b.is_zero() {
        return primitive(a);
    }
    let a = primitive(a);
    let b = primitive(b);
    if a.is_constant() || b.is_constant() {
        return LaurentPoly::one();
    }
    let sa = a.symbols();
    let sb = b.symbols();
    let common: Vec<&Sym> = sa.intersection(&sb).collect();
    if common.is_empty() {
        return LaurentPoly::one();
    }
    let v = common
        .into_iter()
        .min_by_key(|v| deg_in(&a, v).min(deg_in(&b, v)))
        .unwrap()
        .clone();

    let ca = content_in(&a, &v);
    let cb = content_in(&b, &v);
    let pa = div_exact(&a, &ca);
    let pb = div_exact(&b, &cb);
    let c = gcd_poly(&ca, &cb);

    let (mut u, mut w) = if deg_in(&pa, &v) >= deg_in(&pb, &v) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    loop {
        let r = pseudo_rem(&u, &w, &v);
        if r.is_zero() {
            break;
        }
        let r = div_exact(&r, &content_in(&r, &v));
        let r = primitive(&r);
        u = w;
        w = r;
        if deg_in(&w, &v) == 0 {
            return primitive(&c);
        }
    }
    let g = primitive(&div_exact(&w, &content_in(&w, &v)));
    primitive(&c.mul(&g))
}
