//! Rational functions in canonical form.
//!
//! Invariants: the denominator is a true polynomial (minimum exponent 0 in
//! every symbol) that is integer-primitive with positive graded-lex leading
//! coefficient and shares no factor with the numerator; monomial units and
//! rational contents live in the numerator; zero is `0/1`. Two equal
//! rational functions therefore have identical representations.

use super::gcd::{div_exact, gcd_poly};
use super::poly::{LaurentPoly, Mono, Sym};
use super::{ExactAlgError, Rational};
use num::Zero;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RatFun {
    pub fn zero() -> Self {
        RatFun { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    pub fn one() -> Self {
        RatFun { num: LaurentPoly::one(), den: LaurentPoly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        RatFun::from_poly(LaurentPoly::from_int(n))
    }

    pub fn from_rational(c: Rational) -> Self {
        RatFun::from_poly(LaurentPoly::constant(c))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RatFun { num: p, den: LaurentPoly::one() }
    }

    pub fn var(sym: impl Into<Sym>) -> Self {
        RatFun::from_poly(LaurentPoly::var(sym))
    }

    pub fn var_pow(sym: impl Into<Sym>, exp: i64) -> Self {
        RatFun::from_poly(LaurentPoly::var_pow(sym, exp))
    }

    pub fn monomial(c: Rational, m: Mono) -> Self {
        RatFun::from_poly(LaurentPoly::monomial(c, m))
    }

    /// Builds `num/den` in canonical form; errors when `den` is zero.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, ExactAlgError> {
        if den.is_zero() {
            return Err(ExactAlgError::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: LaurentPoly, den: LaurentPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFun::zero();
        }
        let un = num.min_exponents();
        let ud = den.min_exponents();
        let num_p = num.mul_mono(&un.pow(-1));
        let den_p = den.mul_mono(&ud.pow(-1));
        let (cn, num_prim) = num_p.content_and_primitive();
        let (cd, den_prim) = den_p.content_and_primitive();
        let (num_red, den_red) = if den_prim.is_one() {
            (num_prim, den_prim)
        } else {
            let g = gcd_poly(&num_prim, &den_prim);
            if g.is_one() {
                (num_prim, den_prim)
            } else {
                (div_exact(&num_prim, &g), div_exact(&den_prim, &g))
            }
        };
        let unit = un.div(&ud);
        RatFun {
            num: num_red.scale(&(cn / cd)).mul_mono(&unit),
            den: den_red,
        }
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The numerator when the denominator is 1.
    pub fn as_poly(&self) -> Option<&LaurentPoly> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.as_poly().and_then(|p| p.as_constant())
    }

    pub fn symbols(&self) -> BTreeSet<Sym> {
        let mut s = self.num.symbols();
        s.extend(self.den.symbols());
        s
    }

    pub fn contains_symbol(&self, sym: &Sym) -> bool {
        self.num.contains_symbol(sym) || self.den.contains_symbol(sym)
    }

    pub fn add(&self, other: &RatFun) -> RatFun {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::normalize(num, self.den.mul(&other.den))
    }

    pub fn sub(&self, other: &RatFun) -> RatFun {
        let num = self.num.mul(&other.den).sub(&other.num.mul(&self.den));
        Self::normalize(num, self.den.mul(&other.den))
    }

    pub fn neg(&self) -> RatFun {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &RatFun) -> RatFun {
        Self::normalize(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scale(&self, c: &Rational) -> RatFun {
        if c.is_zero() {
            return RatFun::zero();
        }
        RatFun { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn mul_mono(&self, m: &Mono) -> RatFun {
        Self::normalize(self.num.mul_mono(m), self.den.clone())
    }

    pub fn div(&self, other: &RatFun) -> Result<RatFun, ExactAlgError> {
        if other.is_zero() {
            return Err(ExactAlgError::DivisionByZero);
        }
        Ok(Self::normalize(
            self.num.mul(&other.den),
            self.den.mul(&other.num),
        ))
    }

    pub fn recip(&self) -> Result<RatFun, ExactAlgError> {
        RatFun::one().div(self)
    }

    pub fn pow(&self, k: i64) -> Result<RatFun, ExactAlgError> {
        if k < 0 && self.is_zero() {
            return Err(ExactAlgError::DivisionByZero);
        }
        let base = if k < 0 { self.recip()? } else { self.clone() };
        let mut out = RatFun::one();
        let mut b = base;
        let mut k = k.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b.clone());
            }
        }
        Ok(out)
    }

    /// Simultaneous monomial substitution applied to numerator and
    /// denominator; errors when the denominator collapses to zero.
    pub fn substitute(
        &self,
        map: &BTreeMap<Sym, (Rational, Mono)>,
    ) -> Result<RatFun, ExactAlgError> {
        let num = self.num.substitute(map)?;
        let den = self.den.substitute(map)?;
        RatFun::new(num, den)
    }

    /// Renames symbols and re-normalizes. The map must not collapse the
    /// denominator to zero (impossible for injective maps).
    pub fn rename(&self, map: &BTreeMap<Sym, Sym>) -> RatFun {
        RatFun::new(self.num.rename(map), self.den.rename(map))
            .expect("renaming collapsed the denominator")
    }

    pub fn eval(&self, vals: &BTreeMap<Sym, Rational>) -> Result<Rational, ExactAlgError> {
        let d = self.den.eval(vals)?;
        if d.is_zero() {
            return Err(ExactAlgError::DivisionByZero);
        }
        Ok(self.num.eval(vals)? / d)
    }

    pub fn num_terms(&self) -> usize {
        self.num.num_terms() + self.den.num_terms()
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::super::{rat, ratio};
    use super::*;

    fn v(s: &str) -> RatFun {
        RatFun::var(s)
    }

    #[test]
    fn cancellation_to_polynomial() {
        let z = v("z");
        let one = RatFun::one();
        let f = z.mul(&z).sub(&one).div(&z.sub(&one)).unwrap();
        assert_eq!(f, z.add(&one));
        assert!(f.as_poly().is_some());
    }

    #[test]
    fn monomial_units_stay_in_numerator() {
        let x = v("x");
        let y = v("y");
        let num = x.mul(&x).mul(&y).add(&x.mul(&y).mul(&y));
        let f = num.div(&x.mul(&y)).unwrap();
        assert_eq!(f, x.add(&y));
        let g = RatFun::one().div(&x).unwrap();
        assert_eq!(g, RatFun::var_pow("x", -1));
        assert!(g.as_poly().is_some());
    }

    #[test]
    fn classic_partial_fraction_identity() {
        let x = v("x");
        let one = RatFun::one();
        let a = one.div(&one.sub(&x)).unwrap();
        let xinv = RatFun::var_pow("x", -1);
        let b = one.div(&one.sub(&xinv)).unwrap();
        assert_eq!(a.add(&b), one);
    }

    #[test]
    fn canonical_form_is_unique() {
        let x = v("x");
        let q = v("q");
        let lhs = RatFun::one()
            .sub(&x.mul(&q.pow(-1).unwrap()))
            .div(&RatFun::one().sub(&x))
            .unwrap();
        let rhs = x
            .sub(&q)
            .mul(&RatFun::var_pow("q", -1))
            .div(&x.sub(&RatFun::one()))
            .unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.den(), &LaurentPoly::var("x").sub(&LaurentPoly::one()));
    }

    #[test]
    fn substitution_detects_poles() {
        let x = v("x");
        let f = RatFun::one().div(&RatFun::one().sub(&x)).unwrap();
        let mut map = BTreeMap::new();
        map.insert(Sym::new("x"), (rat(1), Mono::one()));
        assert!(f.substitute(&map).is_err());
    }

    #[test]
    fn eval_exact() {
        let x = v("x");
        let f = x.mul(&x).add(&RatFun::one()).div(&x).unwrap();
        let mut vals = BTreeMap::new();
        vals.insert(Sym::new("x"), ratio(1, 2));
        assert_eq!(f.eval(&vals).unwrap(), ratio(5, 2));
    }

    #[test]
    fn pow_negative_inverts() {
        let x = v("x");
        let f = RatFun::one().sub(&x);
        let g = f.pow(-2).unwrap();
        assert_eq!(g.mul(&f).mul(&f), RatFun::one());
    }
}
