//! One-variable Laurent series expansion of rational functions, iterated
//! constant-term extraction, and leading-power limits under variable
//! scaling.
//!
//! A series is taken at 0 or at infinity; coefficients are rational
//! functions in the remaining symbols. The local uniformizer `u` is the
//! variable itself at 0 and its reciprocal at infinity, so `valuation` and
//! `order` always refer to powers of `u`.

use super::poly::{Mono, Sym};
use super::ratfun::RatFun;
use super::{check_cap, ExactAlgError, Rational};
use num::One;
use std::collections::BTreeMap;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExpansionPoint {
    Zero,
    Infinity,
}

/// A truncated Laurent series: the sum of `coeffs[j] * u^(valuation + j)`,
/// exact up to but excluding `u^order`. `coeffs[0]` is nonzero unless the
/// series vanishes to the requested order, in which case `coeffs` is empty
/// and `valuation == order`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentSeries {
    pub var: Sym,
    pub point: ExpansionPoint,
    pub valuation: i64,
    pub coeffs: Vec<RatFun>,
    pub order: i64,
}

impl LaurentSeries {
    /// Coefficient of `u^k`; `None` when `k` is beyond the computed order.
    pub fn coeff(&self, k: i64) -> Option<RatFun> {
        if k >= self.order {
            return None;
        }
        if k < self.valuation || k - self.valuation >= self.coeffs.len() as i64 {
            return Some(RatFun::zero());
        }
        Some(self.coeffs[(k - self.valuation) as usize].clone())
    }

    /// Coefficient of `var^k` (power of the variable, not the uniformizer).
    pub fn var_coeff(&self, k: i64) -> Option<RatFun> {
        match self.point {
            ExpansionPoint::Zero => self.coeff(k),
            ExpansionPoint::Infinity => self.coeff(-k),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Expands `f` as a Laurent series in `var` at the given point, exact up to
/// but excluding uniformizer power `order`.
pub fn series_expand(
    f: &RatFun,
    var: &Sym,
    point: ExpansionPoint,
    order: i64,
) -> Result<LaurentSeries, ExactAlgError> {
    if point == ExpansionPoint::Infinity {
        let mut map = BTreeMap::new();
        map.insert(var.clone(), (Rational::one(), Mono::var(var.clone(), -1)));
        let g = f.substitute(&map)?;
        let mut s = series_expand(&g, var, ExpansionPoint::Zero, order)?;
        s.point = ExpansionPoint::Infinity;
        return Ok(s);
    }

    let zero_series = |order| LaurentSeries {
        var: var.clone(),
        point,
        valuation: order,
        coeffs: Vec::new(),
        order,
    };
    if f.is_zero() {
        return Ok(zero_series(order));
    }

    let nprof = f.num().profile(var);
    let dprof = f.den().profile(var);
    let nval = *nprof.keys().next().unwrap();
    let dval = *dprof.keys().next().unwrap();
    let v0 = nval - dval;
    if order <= v0 {
        return Ok(zero_series(order));
    }

    let ncoef = |j: i64| -> RatFun {
        nprof
            .get(&(nval + j))
            .map(|p| RatFun::from_poly(p.clone()))
            .unwrap_or_else(RatFun::zero)
    };
    let dcoef = |j: i64| -> RatFun {
        dprof
            .get(&(dval + j))
            .map(|p| RatFun::from_poly(p.clone()))
            .unwrap_or_else(RatFun::zero)
    };

    let d0 = dcoef(0);
    let count = (order - v0) as usize;
    let mut coeffs: Vec<RatFun> = Vec::with_capacity(count);
    for j in 0..count as i64 {
        let mut acc = ncoef(j);
        for l in 1..=j {
            acc = acc.sub(&dcoef(l).mul(&coeffs[(j - l) as usize]));
        }
        let s = acc.div(&d0).expect("leading denominator coefficient is nonzero");
        check_cap(s.num_terms())?;
        coeffs.push(s);
    }
    while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
        coeffs.pop();
    }
    Ok(LaurentSeries {
        var: var.clone(),
        point,
        valuation: v0,
        coeffs,
        order,
    })
}

/// Constant term in one variable under the given expansion regime.
pub fn constant_term_one(
    f: &RatFun,
    var: &Sym,
    point: ExpansionPoint,
) -> Result<RatFun, ExactAlgError> {
    let s = series_expand(f, var, point, 1)?;
    Ok(s.coeff(0).expect("order 1 includes the constant term"))
}

/// Iterated constant term. Variables are eliminated left to right, each
/// expanded at its own point with the remaining ones held symbolic; the
/// regime `|z_1| << |z_2| << ...` is the left-to-right order with every
/// point at zero.
pub fn constant_term_iterated(
    f: &RatFun,
    regime: &[(Sym, ExpansionPoint)],
) -> Result<RatFun, ExactAlgError> {
    let mut acc = f.clone();
    for (var, point) in regime {
        acc = constant_term_one(&acc, var, *point)?;
    }
    Ok(acc)
}

/// Valuation and degree of `f` in `var`: exponent of the lowest and highest
/// power with nonzero coefficient. `None` for the zero function.
pub fn xi_degree(f: &RatFun, var: &Sym) -> Option<(i64, i64)> {
    if f.is_zero() {
        return None;
    }
    let (nlo, nhi) = f.num().exp_range(var).unwrap_or((0, 0));
    let (dlo, dhi) = f.den().exp_range(var).unwrap_or((0, 0));
    Some((nlo - dlo, nhi - dhi))
}

/// The limit of `f / var^shift` as `var` tends to the expansion point.
/// Zero when `f` vanishes faster, the exact leading coefficient when the
/// orders match, an error when the limit diverges.
pub fn limit_leading(
    f: &RatFun,
    var: &Sym,
    point: ExpansionPoint,
    shift: i64,
) -> Result<RatFun, ExactAlgError> {
    if f.is_zero() {
        return Ok(RatFun::zero());
    }
    let nprof = f.num().profile(var);
    let dprof = f.den().profile(var);
    let (nkey, dkey) = match point {
        ExpansionPoint::Zero => (
            *nprof.keys().next().unwrap(),
            *dprof.keys().next().unwrap(),
        ),
        ExpansionPoint::Infinity => (
            *nprof.keys().next_back().unwrap(),
            *dprof.keys().next_back().unwrap(),
        ),
    };
    let lead = nkey - dkey;
    let diverges = match point {
        ExpansionPoint::Zero => lead < shift,
        ExpansionPoint::Infinity => lead > shift,
    };
    if diverges {
        return Err(ExactAlgError::DivergentLimit(
            f.to_string(),
            lead,
            var.to_string(),
            shift,
        ));
    }
    if lead != shift {
        return Ok(RatFun::zero());
    }
    RatFun::from_poly(nprof[&nkey].clone()).div(&RatFun::from_poly(dprof[&dkey].clone()))
}

#[cfg(test)]
mod tests {
    use super::super::{parse_ratfun, rat};
    use super::*;

    fn s(name: &str) -> Sym {
        Sym::new(name)
    }

    #[test]
    fn geometric_series_both_points() {
        let f = parse_ratfun("1/(1-x)").unwrap();
        let at0 = series_expand(&f, &s("x"), ExpansionPoint::Zero, 4).unwrap();
        assert_eq!(at0.valuation, 0);
        assert_eq!(at0.coeffs, vec![RatFun::one(); 4]);
        let atinf = series_expand(&f, &s("x"), ExpansionPoint::Infinity, 4).unwrap();
        assert_eq!(atinf.valuation, 1);
        assert_eq!(atinf.coeffs, vec![RatFun::from_int(-1); 3]);
        assert_eq!(atinf.var_coeff(-2), Some(RatFun::from_int(-1)));
    }

    #[test]
    fn laurent_polynomial_expansion_terminates() {
        let f = parse_ratfun("(1-x)*(1-q^-1*x^-1)").unwrap();
        let e = series_expand(&f, &s("x"), ExpansionPoint::Zero, 5).unwrap();
        assert_eq!(e.valuation, -1);
        assert_eq!(e.coeffs.len(), 3);
        assert_eq!(e.coeffs[0], parse_ratfun("-q^-1").unwrap());
        assert_eq!(e.coeffs[1], parse_ratfun("1+q^-1").unwrap());
        assert_eq!(e.coeffs[2], RatFun::from_int(-1));
    }

    #[test]
    fn series_coefficients_match_q_binomials() {
        let f = parse_ratfun("1/((1-x)*(1-q*x))").unwrap();
        let e = series_expand(&f, &s("x"), ExpansionPoint::Zero, 4).unwrap();
        for k in 0..4 {
            let expect = parse_ratfun(&format!("(1-q^{})/(1-q)", k + 1)).unwrap();
            assert_eq!(e.coeff(k).unwrap(), expect, "coefficient of x^{k}");
        }
    }

    #[test]
    fn constant_term_depends_on_regime() {
        let f = parse_ratfun("z/(z-w)").unwrap();
        let small = constant_term_one(&f, &s("z"), ExpansionPoint::Zero).unwrap();
        assert!(small.is_zero());
        let large = constant_term_one(&f, &s("z"), ExpansionPoint::Infinity).unwrap();
        assert_eq!(large, RatFun::one());
    }

    #[test]
    fn iterated_constant_term_orders_variables() {
        let f = parse_ratfun("(z2/(z2-z1))*(w/(w-z2))").unwrap();
        let regime = [
            (s("z1"), ExpansionPoint::Zero),
            (s("z2"), ExpansionPoint::Zero),
        ];
        let ct = constant_term_iterated(&f, &regime).unwrap();
        assert_eq!(ct, RatFun::one());
    }

    #[test]
    fn xi_degree_reports_valuation_and_degree() {
        let f = parse_ratfun("(xi^2*q + xi)/(1-xi)").unwrap();
        assert_eq!(xi_degree(&f, &s("xi")), Some((1, 1)));
        assert_eq!(xi_degree(&RatFun::zero(), &s("xi")), None);
    }

    #[test]
    fn limit_leading_matches_hand_computation() {
        let f = parse_ratfun("(xi^2*q + xi)/(1-xi)").unwrap();
        let at_inf = limit_leading(&f, &s("xi"), ExpansionPoint::Infinity, 1).unwrap();
        assert_eq!(at_inf, parse_ratfun("-q").unwrap());
        let at0 = limit_leading(&f, &s("xi"), ExpansionPoint::Zero, 1).unwrap();
        assert_eq!(at0, RatFun::one());
        assert_eq!(
            limit_leading(&f, &s("xi"), ExpansionPoint::Infinity, 3).unwrap(),
            RatFun::zero()
        );
        assert!(limit_leading(&f, &s("xi"), ExpansionPoint::Infinity, 1 - 1).is_err());
        assert!(limit_leading(&f, &s("xi"), ExpansionPoint::Zero, 2).is_err());
        assert_eq!(
            limit_leading(&RatFun::zero(), &s("xi"), ExpansionPoint::Zero, 5).unwrap(),
            RatFun::zero()
        );
    }

    #[test]
    fn scaling_limit_with_other_symbols() {
        let f = parse_ratfun("(xi*z + w)/(xi*z)").unwrap();
        let lim = limit_leading(&f, &s("xi"), ExpansionPoint::Infinity, 0).unwrap();
        assert_eq!(lim, RatFun::one());
        let lim0 = limit_leading(&f, &s("xi"), ExpansionPoint::Zero, -1).unwrap();
        assert_eq!(lim0, parse_ratfun("w/z").unwrap());
        let _ = rat(0);
    }
}
