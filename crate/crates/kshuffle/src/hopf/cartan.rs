//! Cartan words and Cartan currents.
//!
//! A Cartan word is a finite product of commuting modes `h_{i,+p}` or
//! `h_{i,-p}` with `p >= 0`, together with central decorations recorded as
//! half-integer exponents of `q^{v_i/2}` and `q^{w_i/2}`. Zero modes are
//! invertible; modes with `p > 0` only occur with positive exponents. A word
//! holds modes of a single sign, carried as a [`Side`].

use super::HopfError;
use crate::exactalg::{RatFun, Rational};
use crate::quiver::{DimVector, Quiver};
use crate::shuffle::Side;
use std::collections::BTreeMap;
use std::fmt;

/// Which central family a decoration exponent multiplies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CentralKind {
    V,
    W,
}

/// A commuting product of Cartan modes with central decorations.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CartanWord {
    side: Side,
    modes: BTreeMap<(usize, i64), i64>,
    central: BTreeMap<(usize, CentralKind), i64>,
}

impl CartanWord {
    /// The empty word.
    pub fn unit() -> Self {
        CartanWord {
            side: Side::Positive,
            modes: BTreeMap::new(),
            central: BTreeMap::new(),
        }
    }

    /// The single mode `h_{i,±p}` raised to `exp`.
    pub fn mode(side: Side, node: usize, p: i64, exp: i64) -> Result<Self, HopfError> {
        if p < 0 {
            return Err(HopfError::Internal(format!(
                "mode index {p} must be nonnegative; the sign lives in the side"
            )));
        }
        if exp == 0 {
            return Ok(Self::unit());
        }
        if p > 0 && exp < 0 {
            return Err(HopfError::NegativeCartanExponent);
        }
        let mut modes = BTreeMap::new();
        modes.insert((node, p), exp);
        Ok(CartanWord {
            side,
            modes,
            central: BTreeMap::new(),
        })
    }

    /// The word `h_{±n} = Π_i h_{i,±0}^{n_i}`.
    pub fn zero_modes(side: Side, n: &DimVector) -> Self {
        let mut modes = BTreeMap::new();
        for (i, &c) in n.entries.iter().enumerate() {
            if c != 0 {
                modes.insert((i, 0), c);
            }
        }
        let mut w = CartanWord {
            side,
            modes,
            central: BTreeMap::new(),
        };
        w.normalize();
        w
    }

    /// A bare central decoration `q^{half·v_i/2}` or `q^{half·w_i/2}`.
    pub fn central_factor(side: Side, node: usize, kind: CentralKind, half: i64) -> Self {
        if half == 0 {
            return Self::unit();
        }
        let mut central = BTreeMap::new();
        central.insert((node, kind), half);
        CartanWord {
            side,
            modes: BTreeMap::new(),
            central,
        }
    }

    /// The central word the zero mode `h_{i,±0}` evaluates to: the formal
    /// exponent of `q^{1/2}` is `±(w_i - 2 v_i + Σ_{e=ij} v_j + Σ_{e=ji} v_j)`.
    pub fn zero_mode_central(quiver: &Quiver, i: usize, side: Side) -> Self {
        let s = side.sign();
        let mut central = BTreeMap::new();
        let mut add = |key: (usize, CentralKind), amount: i64| {
            let e = central.entry(key).or_insert(0);
            *e += amount;
        };
        add((i, CentralKind::W), s);
        add((i, CentralKind::V), -2 * s);
        for e in quiver.edges() {
            if e.src == i {
                add((e.dst, CentralKind::V), s);
            }
            if e.dst == i {
                add((e.src, CentralKind::V), s);
            }
        }
        central.retain(|_, v| *v != 0);
        let mut w = CartanWord {
            side,
            modes: BTreeMap::new(),
            central,
        };
        w.normalize();
        w
    }

    fn normalize(&mut self) {
        self.modes.retain(|_, e| *e != 0);
        self.central.retain(|_, e| *e != 0);
        if self.modes.is_empty() && self.central.is_empty() {
            self.side = Side::Positive;
        }
    }

    pub fn is_unit(&self) -> bool {
        self.modes.is_empty() && self.central.is_empty()
    }

    /// The side of the modes; the empty word reports `Positive`.
    pub fn side(&self) -> Side {
        self.side
    }

    /// Mode exponents as `((node, p), exp)` pairs.
    pub fn modes(&self) -> impl Iterator<Item = (&(usize, i64), &i64)> {
        self.modes.iter()
    }

    /// Central decoration half-exponents.
    pub fn central(&self) -> impl Iterator<Item = (&(usize, CentralKind), &i64)> {
        self.central.iter()
    }

    /// True when some mode has `p > 0`.
    pub fn has_positive_modes(&self) -> bool {
        self.modes.keys().any(|&(_, p)| p > 0)
    }

    /// Product of two words of the same side.
    pub fn mul(&self, other: &CartanWord) -> Result<CartanWord, HopfError> {
        if self.is_unit() {
            return Ok(other.clone());
        }
        if other.is_unit() {
            return Ok(self.clone());
        }
        if self.side != other.side {
            return Err(HopfError::CartanSideMismatch);
        }
        let mut out = self.clone();
        for (&k, &e) in &other.modes {
            let slot = out.modes.entry(k).or_insert(0);
            *slot += e;
            if k.1 > 0 && *slot < 0 {
                return Err(HopfError::NegativeCartanExponent);
            }
        }
        for (&k, &e) in &other.central {
            *out.central.entry(k).or_insert(0) += e;
        }
        out.normalize();
        Ok(out)
    }
}

impl fmt::Display for CartanWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let s = if self.side == Side::Positive { "+" } else { "-" };
        let mut first = true;
        for (&(i, p), &e) in &self.modes {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "h[{i},{s}{p}]")?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        for (&(i, kind), &e) in &self.central {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            let name = match kind {
                CentralKind::V => "v",
                CentralKind::W => "w",
            };
            write!(f, "q^{{{e}*{name}_{i}/2}}")?;
        }
        Ok(())
    }
}

/// Chern-root symbol for the `c`-th root of `V_i` (1-based `c`).
pub(crate) fn chern_v_var(label: &str, c: i64) -> crate::exactalg::Sym {
    crate::exactalg::Sym::new(format!("x_{label}_{c}"))
}

/// Chern-root symbol for the `c`-th root of `W_i` (1-based `c`).
pub(crate) fn chern_w_var(label: &str, c: i64) -> crate::exactalg::Sym {
    crate::exactalg::Sym::new(format!("u_{label}_{c}"))
}

/// Evaluation context for [`cartan_current`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CartanContext {
    Formal,
    Evaluated { v: DimVector, w: DimVector },
}

/// An evaluated Cartan current: constant term `q^{q_half_exponent/2}` times
/// the series `Σ_p coeffs[p] z^{∓p}` with `coeffs[0] = 1`; the exponent of
/// `z` is `-p` for the positive current and `+p` for the negative one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanSeries {
    pub node: usize,
    pub sign: Side,
    pub q_half_exponent: i64,
    pub coeffs: Vec<RatFun>,
}

/// Result of [`cartan_current`];
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CartanCurrent {
    /// Mode words `h_{i,±p}` for `p = 0..=order`.
    Formal(Vec<CartanWord>),
    Evaluated(CartanSeries),
}

/// The current `h_i^±(z)` through mode `order`: formal mode symbols, or the
/// displayed exponential with `a`/`b` specialized to the power sums of the
/// Chern roots `x_{i,c}` of `V` and `u_{i,c}` of `W` scaled by `1 - q^{∓d}`.
pub fn cartan_current(
    quiver: &Quiver,
    i: usize,
    sign: Side,
    order: i64,
    context: &CartanContext,
) -> Result<CartanCurrent, HopfError> {
    if order < 0 {
        return Err(HopfError::NegativeOrder(order));
    }
    match context {
        CartanContext::Formal => {
            let mut words = Vec::new();
            for p in 0..=order {
                words.push(CartanWord::mode(sign, i, p, 1)?);
            }
            Ok(CartanCurrent::Formal(words))
        }
        CartanContext::Evaluated { v, w } => {
            quiver.check_dim(v)?;
            quiver.check_dim(w)?;
            let s = sign.sign();
            let q = RatFun::var("q");
            let power_sum = |sizes: &DimVector, j: usize, d: i64, root: &dyn Fn(&str, i64) -> crate::exactalg::Sym| {
                let scale = RatFun::one().sub(&q.pow(-s * d).expect("q is invertible"));
                let mut acc = RatFun::zero();
                for c in 1..=sizes.entries[j] {
                    acc = acc.add(&RatFun::var_pow(root(quiver.node_label(j), c), s * d));
                }
                scale.mul(&acc)
            };
            let a = |j: usize, d: i64| power_sum(v, j, d, &|l, c| chern_v_var(l, c));
            let b = |j: usize, d: i64| power_sum(w, j, d, &|l, c| chern_w_var(l, c));
            let mut u = Vec::new();
            for d in 1..=order {
                let mut acc = b(i, d);
                acc = acc.sub(&a(i, d).mul(&RatFun::one().add(&q.pow(s * d).expect("q is invertible"))));
                for e in quiver.edges() {
                    let t = RatFun::var(e.param.clone());
                    if e.src == i {
                        let factor = q
                            .pow(s * d)
                            .expect("q is invertible")
                            .mul(&t.pow(-s * d).expect("parameter is invertible"));
                        acc = acc.add(&a(e.dst, d).mul(&factor));
                    }
                    if e.dst == i {
                        let factor = t.pow(s * d).expect("parameter is invertible");
                        acc = acc.add(&a(e.src, d).mul(&factor));
                    }
                }
                u.push(acc);
            }
            let mut coeffs = vec![RatFun::one()];
            for n in 1..=order {
                let mut acc = RatFun::zero();
                for d in 1..=n {
                    acc = acc.add(&u[(d - 1) as usize].mul(&coeffs[(n - d) as usize]));
                }
                let inv_n = RatFun::from_rational(Rational::new(1.into(), n.into()));
                coeffs.push(acc.mul(&inv_n));
            }
            let mut half = w.entries[i] - 2 * v.entries[i];
            for e in quiver.edges() {
                if e.src == i {
                    half += v.entries[e.dst];
                }
                if e.dst == i {
                    half += v.entries[e.src];
                }
            }
            Ok(CartanCurrent::Evaluated(CartanSeries {
                node: i,
                sign,
                q_half_exponent: s * half,
                coeffs,
            }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse_ratfun;

    #[test]
    fn formal_current_lists_modes() {
        let q = Quiver::jordan();
        let CartanCurrent::Formal(words) =
            cartan_current(&q, 0, Side::Positive, 2, &CartanContext::Formal).unwrap()
        else {
            panic!("formal context");
        };
        assert_eq!(words.len(), 3);
        assert_eq!(words[1], CartanWord::mode(Side::Positive, 0, 1, 1).unwrap());
        assert!(!words[0].has_positive_modes());
        assert!(words[2].has_positive_modes());
    }

    #[test]
    fn evaluated_trivial_dimensions_give_one() {
        let q = Quiver::jordan();
        let ctx = CartanContext::Evaluated {
            v: DimVector::zero(1),
            w: DimVector::zero(1),
        };
        let CartanCurrent::Evaluated(s) =
            cartan_current(&q, 0, Side::Positive, 3, &ctx).unwrap()
        else {
            panic!("evaluated context");
        };
        assert_eq!(s.q_half_exponent, 0);
        assert_eq!(s.coeffs[0], RatFun::one());
        assert!(s.coeffs[1..].iter().all(RatFun::is_zero));
    }

    #[test]
    fn edgeless_constant_term_exponent() {
        let q = Quiver::a1();
        let ctx = CartanContext::Evaluated {
            v: DimVector::new(vec![1]),
            w: DimVector::new(vec![3]),
        };
        for (sign, expect) in [(Side::Positive, 1), (Side::Negative, -1)] {
            let CartanCurrent::Evaluated(s) = cartan_current(&q, 0, sign, 0, &ctx).unwrap()
            else {
                panic!("evaluated context");
            };
            assert_eq!(s.q_half_exponent, expect * (3 - 2));
        }
    }

    #[test]
    fn jordan_order_one_coefficient() {
        let q = Quiver::jordan();
        let ctx = CartanContext::Evaluated {
            v: DimVector::new(vec![1]),
            w: DimVector::zero(1),
        };
        let CartanCurrent::Evaluated(s) =
            cartan_current(&q, 0, Side::Positive, 1, &ctx).unwrap()
        else {
            panic!("evaluated context");
        };
        // u_{1,1} = -a(1+q) + a*q/t + a*t with a = (1-1/q) x_{1,1}.
        let expect = parse_ratfun("(1-q^-1)*x_1_1*(t + q/t - 1 - q)").unwrap();
        assert_eq!(s.coeffs[1], expect);
        assert_eq!(s.q_half_exponent, 0);
    }

    #[test]
    fn jordan_zero_mode_central_is_w_only() {
        let q = Quiver::jordan();
        let w = CartanWord::zero_mode_central(&q, 0, Side::Positive);
        let central: Vec<_> = w.central().map(|(&k, &e)| (k, e)).collect();
        assert_eq!(central, vec![((0, CentralKind::W), 1)]);
        let neg = CartanWord::zero_mode_central(&q, 0, Side::Negative);
        let central: Vec<_> = neg.central().map(|(&k, &e)| (k, e)).collect();
        assert_eq!(central, vec![((0, CentralKind::W), -1)]);
    }

    #[test]
    fn word_products_cancel_to_unit() {
        let a = CartanWord::mode(Side::Positive, 0, 0, 2).unwrap();
        let b = CartanWord::mode(Side::Positive, 0, 0, -2).unwrap();
        assert!(a.mul(&b).unwrap().is_unit());
        let c = CartanWord::mode(Side::Negative, 0, 1, 1).unwrap();
        assert!(matches!(a.mul(&c), Err(HopfError::CartanSideMismatch)));
        assert_eq!(a.mul(&CartanWord::unit()).unwrap(), a);
        let n = DimVector::new(vec![2]);
        assert_eq!(CartanWord::zero_modes(Side::Positive, &n), a);
    }
}
