//! Symbols, monomials and sparse multivariate Laurent polynomials.
//!
//! Invariants: a [`Mono`] stores no zero exponents; a [`LaurentPoly`] stores
//! no zero coefficients. Monomials are totally ordered by graded
//! lexicographic order (total degree first, then exponents of symbols in
//! name order, larger exponent first), which makes every iteration order
//! and every leading-term choice deterministic.

use super::{ExactAlgError, Rational};
use num::{BigInt, Integer, One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// An interned symbol name, compared and ordered by content. Interning
/// makes equal symbols pointer-equal, so comparisons rarely touch the
/// string itself.
#[derive(Clone)]
pub struct Sym(Arc<str>);

fn intern_table() -> &'static Mutex<BTreeMap<String, Sym>> {
    static TABLE: OnceLock<Mutex<BTreeMap<String, Sym>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

impl Sym {
    pub fn new(name: impl AsRef<str>) -> Self {
        let name = name.as_ref();
        let mut table = intern_table().lock().unwrap();
        if let Some(s) = table.get(name) {
            return s.clone();
        }
        let s = Sym(Arc::from(name));
        table.insert(name.to_string(), s.clone());
        s
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Sym {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Sym {}

impl PartialOrd for Sym {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Sym {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            std::cmp::Ordering::Equal
        } else {
            self.0.cmp(&other.0)
        }
    }
}

impl std::hash::Hash for Sym {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state);
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sym({})", self.0)
    }
}

impl From<&str> for Sym {
    fn from(s: &str) -> Self {
        Sym::new(s)
    }
}

/// A Laurent monomial: finitely many symbols with nonzero integer exponents,
/// stored sorted by symbol with the total degree cached.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Mono {
    entries: Vec<(Sym, i64)>,
    deg: i64,
}

impl Mono {
    pub fn one() -> Self {
        Mono::default()
    }

    pub fn var(sym: impl Into<Sym>, exp: i64) -> Self {
        if exp == 0 {
            return Mono::one();
        }
        Mono {
            entries: vec![(sym.into(), exp)],
            deg: exp,
        }
    }

    pub fn from_exps(pairs: impl IntoIterator<Item = (Sym, i64)>) -> Self {
        let mut sums: BTreeMap<Sym, i64> = BTreeMap::new();
        for (s, e) in pairs {
            *sums.entry(s).or_insert(0) += e;
        }
        let entries: Vec<(Sym, i64)> = sums.into_iter().filter(|(_, e)| *e != 0).collect();
        let deg = entries.iter().map(|(_, e)| e).sum();
        Mono { entries, deg }
    }

    pub fn is_one(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn exp(&self, sym: &Sym) -> i64 {
        self.entries
            .iter()
            .find(|(s, _)| s == sym)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Sym> {
        self.entries.iter().map(|(s, _)| s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Sym, i64)> {
        self.entries.iter().map(|(s, e)| (s, *e))
    }

    pub fn total_degree(&self) -> i64 {
        self.deg
    }

    fn merge(&self, other: &Mono, sign: i64) -> Mono {
        let mut entries = Vec::with_capacity(self.entries.len() + other.entries.len());
        let mut a = self.entries.iter().peekable();
        let mut b = other.entries.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => {
                    entries.push(a.next().unwrap().clone());
                }
                (None, Some((s, e))) => {
                    entries.push((s.clone(), sign * e));
                    b.next();
                }
                (Some((sa, ea)), Some((sb, eb))) => match sa.cmp(sb) {
                    std::cmp::Ordering::Less => {
                        entries.push((sa.clone(), *ea));
                        a.next();
                    }
                    std::cmp::Ordering::Greater => {
                        entries.push((sb.clone(), sign * eb));
                        b.next();
                    }
                    std::cmp::Ordering::Equal => {
                        let e = ea + sign * eb;
                        if e != 0 {
                            entries.push((sa.clone(), e));
                        }
                        a.next();
                        b.next();
                    }
                },
            }
        }
        Mono {
            entries,
            deg: self.deg + sign * other.deg,
        }
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        if other.entries.is_empty() {
            return self.clone();
        }
        if self.entries.is_empty() {
            return other.clone();
        }
        self.merge(other, 1)
    }

    pub fn div(&self, other: &Mono) -> Mono {
        if other.entries.is_empty() {
            return self.clone();
        }
        self.merge(other, -1)
    }

    pub fn pow(&self, k: i64) -> Mono {
        if k == 0 {
            return Mono::one();
        }
        Mono {
            entries: self.entries.iter().map(|(s, e)| (s.clone(), e * k)).collect(),
            deg: self.deg * k,
        }
    }

    /// True when `other/self` has only nonnegative exponents.
    pub fn divides(&self, other: &Mono) -> bool {
        self.entries.iter().all(|(s, e)| other.exp(s) >= *e)
    }

    pub fn has_negative_exp(&self) -> bool {
        self.entries.iter().any(|(_, e)| *e < 0)
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match self.deg.cmp(&other.deg) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // Walk both entry lists in symbol order; a symbol missing on one
        // side counts as exponent zero, and stored exponents are nonzero.
        let mut a = self.entries.iter();
        let mut b = other.entries.iter();
        let mut na = a.next();
        let mut nb = b.next();
        loop {
            match (na, nb) {
                (None, None) => return Ordering::Equal,
                (Some((_, ea)), None) => return ea.cmp(&0),
                (None, Some((_, eb))) => return 0.cmp(eb),
                (Some((sa, ea)), Some((sb, eb))) => match sa.cmp(sb) {
                    Ordering::Less => return ea.cmp(&0),
                    Ordering::Greater => return 0.cmp(eb),
                    Ordering::Equal => match ea.cmp(eb) {
                        Ordering::Equal => {
                            na = a.next();
                            nb = b.next();
                        }
                        ord => return ord,
                    },
                },
            }
        }
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(s, e)| if *e == 1 { s.to_string() } else { format!("{s}^{e}") })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// A sparse multivariate Laurent polynomial with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Mono, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = LaurentPoly::zero();
        if !c.is_zero() {
            p.terms.insert(Mono::one(), c);
        }
        p
    }

    pub fn from_int(n: i64) -> Self {
        LaurentPoly::constant(super::rat(n))
    }

    pub fn monomial(c: Rational, m: Mono) -> Self {
        let mut p = LaurentPoly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn var(sym: impl Into<Sym>) -> Self {
        LaurentPoly::monomial(Rational::one(), Mono::var(sym, 1))
    }

    pub fn var_pow(sym: impl Into<Sym>, exp: i64) -> Self {
        LaurentPoly::monomial(Rational::one(), Mono::var(sym, exp))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.is_constant() {
            return Some(self.terms.values().next().unwrap().clone());
        }
        None
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn symbols(&self) -> BTreeSet<Sym> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            out.extend(m.symbols().cloned());
        }
        out
    }

    pub fn contains_symbol(&self, sym: &Sym) -> bool {
        self.terms.keys().any(|m| m.exp(sym) != 0)
    }

    /// Adds one term in place, dropping the entry when the sum cancels.
    pub fn add_term(&mut self, m: Mono, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> LaurentPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.clone() * c;
        }
        out
    }

    pub fn mul_mono(&self, m: &Mono) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (m1, c1) in &self.terms {
            out.terms.insert(m1.mul(m), c1.clone());
        }
        out
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        let mut out = LaurentPoly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Simultaneously substitutes `sym -> coeff * mono` for every entry of
    /// the map. Symbols absent from the map are untouched.
    pub fn substitute(
        &self,
        map: &BTreeMap<Sym, (Rational, Mono)>,
    ) -> Result<LaurentPoly, ExactAlgError> {
        let mut out = LaurentPoly::zero();
        'term: for (m, c) in &self.terms {
            let mut new_c = c.clone();
            let mut new_m = Mono::one();
            for (s, e) in m.iter() {
                match map.get(s) {
                    None => new_m = new_m.mul(&Mono::var(s.clone(), e)),
                    Some((tc, tm)) => {
                        if tc.is_zero() {
                            if e < 0 {
                                return Err(ExactAlgError::ZeroToNegativePower(s.to_string()));
                            }
                            continue 'term;
                        }
                        new_c *= pow_rat(tc, e);
                        new_m = new_m.mul(&tm.pow(e));
                    }
                }
            }
            out.add_term(new_m, new_c);
        }
        Ok(out)
    }

    /// Renames symbols; entries absent from the map are untouched.
    pub fn rename(&self, map: &BTreeMap<Sym, Sym>) -> LaurentPoly {
        let subs: BTreeMap<Sym, (Rational, Mono)> = map
            .iter()
            .map(|(a, b)| (a.clone(), (Rational::one(), Mono::var(b.clone(), 1))))
            .collect();
        self.substitute(&subs).expect("renaming cannot fail")
    }

    /// The per-symbol minimum exponent over all terms, as a monomial.
    /// A symbol missing from some term counts as exponent 0 there.
    pub fn min_exponents(&self) -> Mono {
        let pairs: Vec<(Sym, i64)> = self
            .symbols()
            .into_iter()
            .map(|s| {
                let mn = self.terms.keys().map(|m| m.exp(&s)).min().unwrap_or(0);
                (s, mn)
            })
            .collect();
        Mono::from_exps(pairs)
    }

    /// Exponent range of `sym` over all terms: `(min, max)`, or `None` for
    /// the zero polynomial.
    pub fn exp_range(&self, sym: &Sym) -> Option<(i64, i64)> {
        if self.is_zero() {
            return None;
        }
        let mut mn = i64::MAX;
        let mut mx = i64::MIN;
        for m in self.terms.keys() {
            let e = m.exp(sym);
            mn = mn.min(e);
            mx = mx.max(e);
        }
        Some((mn, mx))
    }

    /// Collects coefficients by the power of `sym`: power -> polynomial in
    /// the remaining symbols.
    pub fn profile(&self, sym: &Sym) -> BTreeMap<i64, LaurentPoly> {
        let mut out: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exp(sym);
            let rest = m.div(&Mono::var(sym.clone(), e));
            out.entry(e).or_default().add_term(rest, c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Greatest monomial in graded-lex order, with its coefficient.
    pub fn leading_term(&self) -> Option<(&Mono, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Splits into `content * primitive`: the primitive part has coprime
    /// integer coefficients and a positive leading coefficient.
    pub fn content_and_primitive(&self) -> (Rational, LaurentPoly) {
        if self.is_zero() {
            return (Rational::zero(), LaurentPoly::zero());
        }
        let mut g = BigInt::zero();
        let mut l = BigInt::one();
        for c in self.terms.values() {
            g = g.gcd(&c.numer().abs());
            l = l.lcm(c.denom());
        }
        let mut content = Rational::new(g, l);
        let mut prim = self.scale(&content.recip());
        if prim.leading_term().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            content = -content;
            prim = prim.neg();
        }
        (content, prim)
    }

    /// Evaluates symbols to rationals; the map must cover every symbol.
    pub fn eval(&self, vals: &BTreeMap<Sym, Rational>) -> Result<Rational, ExactAlgError> {
        let mut out = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (s, e) in m.iter() {
                let x = vals.get(s).cloned().unwrap_or_else(Rational::zero);
                if x.is_zero() && e < 0 {
                    return Err(ExactAlgError::ZeroToNegativePower(s.to_string()));
                }
                if x.is_zero() {
                    v = Rational::zero();
                    break;
                }
                v *= pow_rat(&x, e);
            }
            out += v;
        }
        Ok(out)
    }
}

fn pow_rat(c: &Rational, e: i64) -> Rational {
    if e == 0 {
        return Rational::one();
    }
    let mut base = if e < 0 { c.recip() } else { c.clone() };
    let mut out = Rational::one();
    let mut k = e.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            out *= &base;
        }
        k >>= 1;
        if k > 0 {
            base = base.clone() * &base;
        }
    }
    out
}

fn fmt_coeff(c: &Rational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
                first = false;
            } else if neg {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_one() {
                parts.push(fmt_coeff(&mag));
            }
            for (s, e) in m.iter() {
                if e == 1 {
                    parts.push(s.to_string());
                } else {
                    parts.push(format!("{s}^{e}"));
                }
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::super::{rat, ratio};
    use super::*;

    fn x() -> LaurentPoly {
        LaurentPoly::var("x")
    }

    fn y() -> LaurentPoly {
        LaurentPoly::var("y")
    }

    #[test]
    fn grlex_order_is_graded_then_lex() {
        let m1 = Mono::var("x", 2);
        let m2 = Mono::var("x", 1).mul(&Mono::var("y", 1));
        let m3 = Mono::var("y", 2);
        assert!(m1 > m2 && m2 > m3);
        assert!(Mono::var("x", 1) > Mono::one());
        assert!(Mono::var("x", -1) < Mono::one());
    }

    #[test]
    fn arithmetic_basics() {
        let p = x().add(&y());
        let q = x().sub(&y());
        let prod = p.mul(&q);
        let expect = x().mul(&x()).sub(&y().mul(&y()));
        assert_eq!(prod, expect);
        assert_eq!(p.pow(2), p.mul(&p));
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn substitution_is_simultaneous() {
        let p = x().mul(&y());
        let mut map = BTreeMap::new();
        map.insert(Sym::new("x"), (rat(1), Mono::var("y", 1)));
        map.insert(Sym::new("y"), (rat(1), Mono::var("x", 1)));
        assert_eq!(p.substitute(&map).unwrap(), x().mul(&y()));
        let mut scale = BTreeMap::new();
        scale.insert(Sym::new("x"), (rat(2), Mono::var("x", 1)));
        assert_eq!(p.substitute(&scale).unwrap(), x().mul(&y()).scale(&rat(2)));
    }

    #[test]
    fn substitute_zero_kills_positive_powers() {
        let p = x().add(&LaurentPoly::one());
        let mut map = BTreeMap::new();
        map.insert(Sym::new("x"), (rat(0), Mono::one()));
        assert_eq!(p.substitute(&map).unwrap(), LaurentPoly::one());
        let q = LaurentPoly::var_pow("x", -1);
        assert!(q.substitute(&map).is_err());
    }

    #[test]
    fn min_exponents_and_profile() {
        let p = LaurentPoly::var_pow("x", -2)
            .mul(&y())
            .add(&x().mul(&y().pow(3)));
        let m = p.min_exponents();
        assert_eq!(m.exp(&Sym::new("x")), -2);
        assert_eq!(m.exp(&Sym::new("y")), 1);
        let prof = p.profile(&Sym::new("x"));
        assert_eq!(prof.len(), 2);
        assert_eq!(prof[&-2], y());
        assert_eq!(prof[&1], y().pow(3));
    }

    #[test]
    fn content_primitive_normalizes_sign() {
        let p = x().scale(&ratio(-4, 6)).add(&y().scale(&ratio(2, 3)));
        let (c, prim) = p.content_and_primitive();
        assert_eq!(prim.leading_term().unwrap().1, &rat(1));
        assert_eq!(prim.scale(&c), p);
        let (_, back) = prim.content_and_primitive();
        assert_eq!(back, prim);
    }

    #[test]
    fn display_round_readable() {
        let p = x().pow(2).scale(&ratio(3, 2)).sub(&LaurentPoly::var_pow("y", -1));
        assert_eq!(p.to_string(), "3/2*x^2 - y^-1");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(LaurentPoly::from_int(-7).to_string(), "-7");
    }
}
