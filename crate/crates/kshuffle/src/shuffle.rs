//! Shuffle-algebra elements over an arbitrary quiver: the Hall product,
//! wheel conditions, gradings, shift automorphisms, slope tests, and
//! linear-algebra bases of slope graded pieces.
//!
//! An element of horizontal degree `n` stores one rational function in
//! the variables `z_<node>_<a>` (`1 <= a <= n_i` for each node), with a
//! denominator free of those variables; coefficients live in the field
//! of rational functions of `q` and the edge parameters. The stored
//! function is invariant under permuting same-color variables. The
//! negative half reuses the same storage with `side = Negative`:
//! products compose in the opposite order and the degree conventions
//! are mirrored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use num::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactalg::{
    parse_ratfun, xi_degree, ExactAlgError, LaurentPoly, Mono, RatFun, Rational, Sym,
};
use crate::quiver::{zvar, zvars, DimVector, Quiver, QuiverError, QuiverJson, Slope};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShuffleError {
    #[error("operands live over different quivers")]
    QuiverMismatch,
    #[error("operands live on different sides")]
    SideMismatch,
    #[error("operands have different horizontal degrees")]
    HdegMismatch,
    #[error("polynomial is not invariant under same-color variable permutations")]
    NonSymmetric,
    #[error("residual denominator in shuffle variables: {0}")]
    ZDenominator(String),
    #[error("element is not homogeneous in vertical degree")]
    NotHomogeneous,
    #[error("slope {0} pairs with dimension {1} to a non-integer")]
    NonIntegralSlope(String, String),
    #[error("scalar contains shuffle variables")]
    ScalarHasVariables,
    #[error("malformed element: {0}")]
    BadElement(String),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Alg(#[from] ExactAlgError),
}

/// Which half of the algebra an element lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Positive,
    Negative,
}

impl Side {
    /// `+1` on the positive side, `-1` on the negative side.
    pub fn sign(self) -> i64 {
        match self {
            Side::Positive => 1,
            Side::Negative => -1,
        }
    }
}

/// A color-symmetric Laurent "polynomial" (denominator free of the
/// shuffle variables) in the variables attached to a horizontal degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShuffleElement {
    quiver: Quiver,
    side: Side,
    hdeg: DimVector,
    poly: RatFun,
}

/// A graded piece of a slope subalgebra, with an echelonized basis.
#[derive(Debug, Clone)]
pub struct GradedPiece {
    pub hdeg: DimVector,
    pub vdeg: i64,
    pub basis: Vec<ShuffleElement>,
}

/// Which wheel specializations `wheel_check` imposes.
///
/// `chained` is the three-variable chain `z_{j,a} = t_e z_{i,b} = q z_{j,c}`
/// for each edge `e = i -> j`. `companion_chained` anchors the companion
/// relation `z_{i,a} = q z_{j,b} / t_e` with a third same-color variable
/// `z_{i,c} = z_{i,a} / q`. `companion_two_variable` imposes the companion
/// relation on two variables alone; products of one-variable generators do
/// not satisfy it (see the tests), so it is off by default.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WheelOptions {
    pub chained: bool,
    pub companion_chained: bool,
    pub companion_two_variable: bool,
}

impl Default for WheelOptions {
    fn default() -> Self {
        WheelOptions {
            chained: true,
            companion_chained: true,
            companion_two_variable: false,
        }
    }
}

fn xi_sym() -> Sym {
    Sym::new("xi__")
}

fn wheel_sym() -> Sym {
    Sym::new("w__")
}

/// Symbols a coefficient may mention: `q` and the edge parameters.
fn param_symbols(quiver: &Quiver) -> BTreeSet<Sym> {
    let mut out: BTreeSet<Sym> = quiver.edges().iter().map(|e| e.param.clone()).collect();
    out.insert(Sym::new("q"));
    out
}

fn z_symbols(quiver: &Quiver, n: &DimVector) -> BTreeSet<Sym> {
    zvars(quiver, n).into_iter().map(|(s, _)| s).collect()
}

fn mono_z_degree(m: &Mono, zset: &BTreeSet<Sym>) -> i64 {
    m.iter().filter(|(s, _)| zset.contains(s)).map(|(_, e)| e).sum()
}

/// Rename maps for every element of the product of symmetric groups
/// permuting same-color variables.
fn color_perm_maps(quiver: &Quiver, n: &DimVector) -> Vec<BTreeMap<Sym, Sym>> {
    let per_color: Vec<Vec<Vec<usize>>> = n
        .entries
        .iter()
        .map(|&ni| {
            if ni <= 0 {
                vec![vec![]]
            } else {
                (1..=ni as usize).permutations(ni as usize).collect()
            }
        })
        .collect();
    per_color
        .into_iter()
        .multi_cartesian_product()
        .map(|choice| {
            let mut map = BTreeMap::new();
            for (i, perm) in choice.iter().enumerate() {
                let label = quiver.node_label(i);
                for (a, &img) in perm.iter().enumerate() {
                    map.insert(zvar(label, a + 1), zvar(label, img));
                }
            }
            map
        })
        .collect()
}

impl ShuffleElement {
    /// Validates the denominator, the variable set, and color symmetry.
    pub fn new(
        quiver: Quiver,
        side: Side,
        hdeg: DimVector,
        poly: RatFun,
    ) -> Result<Self, ShuffleError> {
        quiver.check_dim(&hdeg)?;
        if !hdeg.is_nonnegative() {
            return Err(ShuffleError::BadElement(
                "horizontal degree has a negative entry".into(),
            ));
        }
        let zset = z_symbols(&quiver, &hdeg);
        let allowed: BTreeSet<Sym> = zset.union(&param_symbols(&quiver)).cloned().collect();
        for s in poly.symbols() {
            if !allowed.contains(&s) {
                return Err(ShuffleError::BadElement(format!(
                    "unexpected symbol {s} for this quiver and degree"
                )));
            }
        }
        for s in poly.den().symbols() {
            if zset.contains(&s) {
                return Err(ShuffleError::ZDenominator(poly.den().to_string()));
            }
        }
        for (i, &ni) in hdeg.entries.iter().enumerate() {
            let label = quiver.node_label(i);
            for a in 1..ni as usize {
                let mut swap = BTreeMap::new();
                swap.insert(zvar(label, a), zvar(label, a + 1));
                swap.insert(zvar(label, a + 1), zvar(label, a));
                if poly.rename(&swap) != poly {
                    return Err(ShuffleError::NonSymmetric);
                }
            }
        }
        Ok(ShuffleElement { quiver, side, hdeg, poly })
    }

    pub(crate) fn new_unchecked(
        quiver: Quiver,
        side: Side,
        hdeg: DimVector,
        poly: RatFun,
    ) -> Self {
        ShuffleElement { quiver, side, hdeg, poly }
    }

    /// The unit: horizontal degree zero, polynomial 1.
    pub fn unit(quiver: Quiver, side: Side) -> Self {
        let n = quiver.node_count();
        ShuffleElement {
            quiver,
            side,
            hdeg: DimVector::zero(n),
            poly: RatFun::one(),
        }
    }

    pub fn zero(quiver: Quiver, side: Side, hdeg: DimVector) -> Self {
        ShuffleElement { quiver, side, hdeg, poly: RatFun::zero() }
    }

    /// The degree-`d` one-variable generator on node `i`: `z_{i,1}^d`.
    pub fn generator(quiver: Quiver, side: Side, i: usize, d: i64) -> Self {
        assert!(i < quiver.node_count(), "node index out of range");
        let hdeg = DimVector::unit(quiver.node_count(), i);
        let poly = RatFun::var_pow(zvar(quiver.node_label(i), 1), d);
        ShuffleElement { quiver, side, hdeg, poly }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn hdeg(&self) -> &DimVector {
        &self.hdeg
    }

    pub fn poly(&self) -> &RatFun {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    fn check_compatible(&self, other: &ShuffleElement) -> Result<(), ShuffleError> {
        if self.quiver != other.quiver {
            return Err(ShuffleError::QuiverMismatch);
        }
        if self.side != other.side {
            return Err(ShuffleError::SideMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &ShuffleElement) -> Result<ShuffleElement, ShuffleError> {
        self.check_compatible(other)?;
        if self.hdeg != other.hdeg {
            return Err(ShuffleError::HdegMismatch);
        }
        Ok(ShuffleElement {
            quiver: self.quiver.clone(),
            side: self.side,
            hdeg: self.hdeg.clone(),
            poly: self.poly.add(&other.poly),
        })
    }

    pub fn sub(&self, other: &ShuffleElement) -> Result<ShuffleElement, ShuffleError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ShuffleElement {
        ShuffleElement {
            quiver: self.quiver.clone(),
            side: self.side,
            hdeg: self.hdeg.clone(),
            poly: self.poly.neg(),
        }
    }

    pub fn scale(&self, c: &Rational) -> ShuffleElement {
        ShuffleElement {
            quiver: self.quiver.clone(),
            side: self.side,
            hdeg: self.hdeg.clone(),
            poly: self.poly.scale(c),
        }
    }

    /// Multiplies by a coefficient-field scalar (functions of `q` and the
    /// edge parameters only).
    pub fn scale_fun(&self, c: &RatFun) -> Result<ShuffleElement, ShuffleError> {
        let params = param_symbols(&self.quiver);
        if c.symbols().iter().any(|s| !params.contains(s)) {
            return Err(ShuffleError::ScalarHasVariables);
        }
        Ok(ShuffleElement {
            quiver: self.quiver.clone(),
            side: self.side,
            hdeg: self.hdeg.clone(),
            poly: self.poly.mul(c),
        })
    }

    /// Splits by total degree in the shuffle variables.
    pub fn vdeg_components(&self) -> BTreeMap<i64, ShuffleElement> {
        let zset = z_symbols(&self.quiver, &self.hdeg);
        let mut pieces: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
        for (m, c) in self.poly.num().terms() {
            let d = mono_z_degree(m, &zset);
            pieces
                .entry(d)
                .or_insert_with(LaurentPoly::zero)
                .add_term(m.clone(), c.clone());
        }
        pieces
            .into_iter()
            .map(|(d, p)| {
                let poly = RatFun::new(p, self.poly.den().clone())
                    .expect("nonzero denominator survives splitting");
                (d, ShuffleElement {
                    quiver: self.quiver.clone(),
                    side: self.side,
                    hdeg: self.hdeg.clone(),
                    poly,
                })
            })
            .collect()
    }

    /// The vertical degree: `Ok(None)` for zero, an error when the element
    /// mixes several vertical degrees.
    pub fn vdeg(&self) -> Result<Option<i64>, ShuffleError> {
        let comps = self.vdeg_components();
        match comps.len() {
            0 => Ok(None),
            1 => Ok(comps.keys().next().copied()),
            _ => Err(ShuffleError::NotHomogeneous),
        }
    }

    fn with_side(&self, side: Side) -> ShuffleElement {
        ShuffleElement {
            quiver: self.quiver.clone(),
            side,
            hdeg: self.hdeg.clone(),
            poly: self.poly.clone(),
        }
    }
}

impl fmt::Display for ShuffleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// Sums the orbit of `poly` under all same-color variable permutations.
/// Simple poles on the diagonals must cancel in the sum; a surviving
/// variable denominator is an error.
pub fn symmetrize(
    quiver: &Quiver,
    side: Side,
    hdeg: &DimVector,
    poly: &RatFun,
) -> Result<ShuffleElement, ShuffleError> {
    quiver.check_dim(hdeg)?;
    if !hdeg.is_nonnegative() {
        return Err(ShuffleError::BadElement(
            "horizontal degree has a negative entry".into(),
        ));
    }
    let zset = z_symbols(quiver, hdeg);
    let allowed: BTreeSet<Sym> = zset.union(&param_symbols(quiver)).cloned().collect();
    for s in poly.symbols() {
        if !allowed.contains(&s) {
            return Err(ShuffleError::BadElement(format!(
                "unexpected symbol {s} for this quiver and degree"
            )));
        }
    }
    let mut sum = RatFun::zero();
    for map in color_perm_maps(quiver, hdeg) {
        sum = sum.add(&poly.rename(&map));
    }
    for s in sum.den().symbols() {
        if zset.contains(&s) {
            return Err(ShuffleError::ZDenominator(sum.den().to_string()));
        }
    }
    Ok(ShuffleElement::new_unchecked(
        quiver.clone(),
        side,
        hdeg.clone(),
        sum,
    ))
}

/// `zeta_ij(x) (1-x)^{delta_ij}` as a Laurent polynomial in `x`: the
/// kernel with its diagonal pole split off.
fn zeta_pole_free(quiver: &Quiver, i: usize, j: usize) -> LaurentPoly {
    let z = quiver.zeta(i, j);
    let cleared = if i == j {
        let one_minus_x = LaurentPoly::one().sub(&LaurentPoly::var("x"));
        z.mul(&RatFun::from_poly(one_minus_x))
    } else {
        z
    };
    cleared
        .as_poly()
        .expect("zeta has only the diagonal pole")
        .clone()
}

/// The split kernel evaluated at `x = z_p / z_r`, including the unit
/// `z_r` from `1 - z_p/z_r = (z_r - z_p)/z_r` on the diagonal; the
/// omitted denominator is `(z_r - z_p)^{delta_ij}`.
fn zeta_split_at(part_x: &LaurentPoly, diagonal: bool, zp: &Sym, zr: &Sym) -> LaurentPoly {
    let mut map = BTreeMap::new();
    map.insert(
        Sym::new("x"),
        (
            Rational::one(),
            Mono::from_exps([(zp.clone(), 1), (zr.clone(), -1)]),
        ),
    );
    let mut p = part_x.substitute(&map).expect("monomial substitution");
    if diagonal {
        p = p.mul_mono(&Mono::var(zr.clone(), 1));
    }
    p
}

fn product_positive(
    f: &ShuffleElement,
    g: &ShuffleElement,
) -> Result<ShuffleElement, ShuffleError> {
    let quiver = &f.quiver;
    let nc = quiver.node_count();
    let hdeg = f.hdeg.add(&g.hdeg);
    let parts: Vec<Vec<LaurentPoly>> = (0..nc)
        .map(|i| (0..nc).map(|j| zeta_pole_free(quiver, i, j)).collect())
        .collect();

    // Common denominator: every unordered same-color difference, kept
    // factored so the final division is one cheap binomial pass per factor.
    let diff = |label: &str, u: usize, v: usize| -> LaurentPoly {
        LaurentPoly::var(zvar(label, v)).sub(&LaurentPoly::var(zvar(label, u)))
    };
    let mut den_factors: Vec<LaurentPoly> = Vec::new();
    for i in 0..nc {
        let label = quiver.node_label(i);
        let total = hdeg.entries[i] as usize;
        for v in 2..=total {
            for u in 1..v {
                den_factors.push(diff(label, u, v));
            }
        }
    }

    // Sum over shuffles: per color, the positions taken by f's variables.
    let per_color: Vec<Vec<Vec<usize>>> = (0..nc)
        .map(|i| {
            let total = hdeg.entries[i] as usize;
            let take = f.hdeg.entries[i] as usize;
            (1..=total).combinations(take).collect()
        })
        .collect();

    let mut acc = LaurentPoly::zero();
    for choice in per_color.into_iter().multi_cartesian_product() {
        let mut fmap = BTreeMap::new();
        let mut gmap = BTreeMap::new();
        let mut taken: Vec<BTreeSet<usize>> = Vec::with_capacity(nc);
        let mut comp: Vec<Vec<usize>> = Vec::with_capacity(nc);
        for i in 0..nc {
            let label = quiver.node_label(i);
            let total = hdeg.entries[i] as usize;
            let set: BTreeSet<usize> = choice[i].iter().copied().collect();
            let rest: Vec<usize> = (1..=total).filter(|p| !set.contains(p)).collect();
            for (a, &p) in choice[i].iter().enumerate() {
                fmap.insert(zvar(label, a + 1), zvar(label, p));
            }
            for (b, &p) in rest.iter().enumerate() {
                gmap.insert(zvar(label, b + 1), zvar(label, p));
            }
            taken.push(set);
            comp.push(rest);
        }
        let mut term = f.poly.num().rename(&fmap).mul(&g.poly.num().rename(&gmap));
        for i in 0..nc {
            for j in 0..nc {
                let li = quiver.node_label(i);
                let lj = quiver.node_label(j);
                for &p in &choice[i] {
                    for &r in &comp[j] {
                        term = term.mul(&zeta_split_at(
                            &parts[i][j],
                            i == j,
                            &zvar(li, p),
                            &zvar(lj, r),
                        ));
                    }
                }
            }
        }
        // Restore the full denominator: multiply by the non-split same-color
        // differences, and track the sign of split pairs whose f-variable
        // carries the larger index.
        let mut negate = false;
        for i in 0..nc {
            let label = quiver.node_label(i);
            let total = hdeg.entries[i] as usize;
            for v in 2..=total {
                for u in 1..v {
                    let split = taken[i].contains(&u) != taken[i].contains(&v);
                    if !split {
                        term = term.mul(&diff(label, u, v));
                    } else if taken[i].contains(&v) {
                        negate = !negate;
                    }
                }
            }
        }
        if negate {
            term = term.neg();
        }
        acc = acc.add(&term);
    }

    // The diagonal poles cancel in the symmetrized sum: the accumulated
    // numerator is exactly divisible by each pairwise difference in turn.
    let shift = acc.min_exponents();
    let unshift = shift.pow(-1);
    let mut divided = acc.mul_mono(&unshift);
    for d in &den_factors {
        divided = crate::exactalg::try_div_exact(&divided, d)
            .ok_or_else(|| ShuffleError::ZDenominator(d.to_string()))?;
    }
    let divided = divided.mul_mono(&shift);
    let den_qt = f.poly.den().mul(g.poly.den());
    let poly = RatFun::new(divided, den_qt).expect("coefficient denominator is nonzero");
    Ok(ShuffleElement::new_unchecked(
        quiver.clone(),
        Side::Positive,
        hdeg,
        poly,
    ))
}

/// The Hall product. On the negative side the opposite-algebra order is
/// applied to the stored polynomials.
pub fn shuffle_product(
    f: &ShuffleElement,
    g: &ShuffleElement,
) -> Result<ShuffleElement, ShuffleError> {
    f.check_compatible(g)?;
    match f.side {
        Side::Positive => product_positive(f, g),
        Side::Negative => {
            let r = product_positive(&g.with_side(Side::Positive), &f.with_side(Side::Positive))?;
            Ok(r.with_side(Side::Negative))
        }
    }
}

/// The wheel specializations admissible for degree `n`, as substitution
/// maps into a fresh symbol `w__`. Color symmetry makes one index choice
/// per family and edge sufficient.
fn wheel_substitution_maps(
    quiver: &Quiver,
    n: &DimVector,
    opts: &WheelOptions,
) -> Vec<BTreeMap<Sym, (Rational, Mono)>> {
    let w = wheel_sym();
    let q = Sym::new("q");
    let image = |syms: &[(Sym, i64)]| {
        let mut m = Mono::from_exps(syms.iter().cloned());
        m = m.mul(&Mono::var(w.clone(), 1));
        (Rational::one(), m)
    };
    let mut out = Vec::new();
    for e in quiver.edges() {
        let (i, j, t) = (e.src, e.dst, e.param.clone());
        let li = quiver.node_label(i);
        let lj = quiver.node_label(j);
        let (ni, nj) = (n.entries[i], n.entries[j]);
        if opts.chained {
            // z_{j,a} = t z_{i,b} = q z_{j,c}: points (q w, (q/t) w, w).
            if i == j && ni >= 3 {
                let mut m = BTreeMap::new();
                m.insert(zvar(li, 1), image(&[(q.clone(), 1)]));
                m.insert(zvar(li, 2), image(&[(q.clone(), 1), (t.clone(), -1)]));
                m.insert(zvar(li, 3), image(&[]));
                out.push(m);
            } else if i != j && nj >= 2 && ni >= 1 {
                let mut m = BTreeMap::new();
                m.insert(zvar(lj, 1), image(&[(q.clone(), 1)]));
                m.insert(zvar(li, 1), image(&[(q.clone(), 1), (t.clone(), -1)]));
                m.insert(zvar(lj, 2), image(&[]));
                out.push(m);
            }
        }
        if opts.companion_chained {
            // z_{i,a} = q z_{j,b} / t anchored by z_{i,c}: points (q w, t w, w).
            if i == j && ni >= 3 {
                let mut m = BTreeMap::new();
                m.insert(zvar(li, 1), image(&[(q.clone(), 1)]));
                m.insert(zvar(li, 2), image(&[(t.clone(), 1)]));
                m.insert(zvar(li, 3), image(&[]));
                out.push(m);
            } else if i != j && ni >= 2 && nj >= 1 {
                let mut m = BTreeMap::new();
                m.insert(zvar(li, 1), image(&[(q.clone(), 1)]));
                m.insert(zvar(lj, 1), image(&[(t.clone(), 1)]));
                m.insert(zvar(li, 2), image(&[]));
                out.push(m);
            }
        }
        if opts.companion_two_variable {
            // z_{i,a} = q z_{j,b} / t on two variables alone.
            let target = |lbl: &str, slot: usize| {
                let mut mono = Mono::from_exps([(q.clone(), 1), (t.clone(), -1)]);
                mono = mono.mul(&Mono::var(zvar(lbl, slot), 1));
                (Rational::one(), mono)
            };
            if i == j && ni >= 2 {
                let mut m = BTreeMap::new();
                m.insert(zvar(li, 1), target(li, 2));
                out.push(m);
            } else if i != j && ni >= 1 && nj >= 1 {
                let mut m = BTreeMap::new();
                m.insert(zvar(li, 1), target(lj, 1));
                out.push(m);
            }
        }
    }
    out
}

/// Whether every admissible wheel specialization annihilates `f`, under
/// the default options.
pub fn wheel_check(f: &ShuffleElement) -> bool {
    wheel_check_with(f, &WheelOptions::default())
}

pub fn wheel_check_with(f: &ShuffleElement, opts: &WheelOptions) -> bool {
    wheel_substitution_maps(&f.quiver, &f.hdeg, opts)
        .iter()
        .all(|m| {
            f.poly
                .substitute(m)
                .expect("monomial wheel substitution cannot collapse the denominator")
                .is_zero()
        })
}

/// The shift automorphism: multiplies every variable `z_{i,a}` by
/// `z_{i,a}^{k_i}` (inverse sign on the negative side).
pub fn shift(f: &ShuffleElement, k: &DimVector) -> ShuffleElement {
    assert_eq!(
        k.entries.len(),
        f.quiver.node_count(),
        "shift vector length mismatch"
    );
    let sign = f.side.sign();
    let mut m = Mono::one();
    for (i, &ni) in f.hdeg.entries.iter().enumerate() {
        let label = f.quiver.node_label(i);
        for a in 1..=ni as usize {
            m = m.mul(&Mono::var(zvar(label, a), sign * k.entries[i]));
        }
    }
    ShuffleElement {
        quiver: f.quiver.clone(),
        side: f.side,
        hdeg: f.hdeg.clone(),
        poly: f.poly.mul_mono(&m),
    }
}

/// Scales the first `k_i` variables of each color by `xi__` and returns
/// the `xi__` valuation and degree of the result.
fn scaled_xi_range(f: &ShuffleElement, k: &DimVector) -> Option<(i64, i64)> {
    let xi = xi_sym();
    let mut map = BTreeMap::new();
    for (i, &ki) in k.entries.iter().enumerate() {
        let label = f.quiver.node_label(i);
        for a in 1..=ki as usize {
            let m = Mono::from_exps([(xi.clone(), 1), (zvar(label, a), 1)]);
            map.insert(zvar(label, a), (Rational::one(), m));
        }
    }
    let scaled = f
        .poly
        .substitute(&map)
        .expect("monomial scaling cannot collapse the denominator");
    xi_degree(&scaled, &xi)
}

/// Positive-side slope test: for every `0 <= k <= n`, scaling the first
/// `k_i` variables of each color by `xi` grows no faster than
/// `xi^{m.k + c(k)}` at infinity, where `c(k)` is the degree at infinity
/// of the product of kernels linking the scaled group to the rest. The
/// offset `c(k)` is what makes the condition close under shuffle
/// products: the extremal shuffle term puts one whole factor inside the
/// scaled group, and its cross kernels contribute exactly `c(k)`.
pub fn slope_leq(f: &ShuffleElement, m: &Slope) -> bool {
    assert_eq!(f.side, Side::Positive, "slope_leq expects the positive side");
    assert_eq!(m.entries.len(), f.quiver.node_count());
    for k in f.hdeg.sub_vectors() {
        if let Some((_, deg)) = scaled_xi_range(f, &k) {
            let rest = f.hdeg.sub(&k);
            let bound = m.dot(&k)
                + Rational::from_integer(
                    f.quiver
                        .inner_sym(&k, &rest)
                        .expect("dimension checked")
                        .into(),
                );
            if Rational::from_integer(deg.into()) > bound {
                return false;
            }
        }
    }
    true
}

/// Negative-side slope test: the mirrored condition at `xi -> 0`, with
/// valuation bounded below by `-m.k - c(k)` for the same cross-kernel
/// degree `c(k)` as in [`slope_leq`]. The naive vertical-degree
/// inequality reverses direction on this side, hence the name.
pub fn slope_geq(g: &ShuffleElement, m: &Slope) -> bool {
    assert_eq!(g.side, Side::Negative, "slope_geq expects the negative side");
    assert_eq!(m.entries.len(), g.quiver.node_count());
    for k in g.hdeg.sub_vectors() {
        if let Some((val, _)) = scaled_xi_range(g, &k) {
            let rest = g.hdeg.sub(&k);
            let bound = -m.dot(&k)
                - Rational::from_integer(
                    g.quiver
                        .inner_sym(&k, &rest)
                        .expect("dimension checked")
                        .into(),
                );
            if Rational::from_integer(val.into()) < bound {
                return false;
            }
        }
    }
    true
}

/// Dispatches to `slope_leq` or `slope_geq` by side.
pub fn slope_test(f: &ShuffleElement, m: &Slope) -> bool {
    match f.side {
        Side::Positive => slope_leq(f, m),
        Side::Negative => slope_geq(f, m),
    }
}

/// Whether a homogeneous element sits exactly on the naive slope:
/// `vdeg = m . hdeg`, with the sign of hdeg given by the side.
pub fn naive_slope_eq(f: &ShuffleElement, m: &Slope) -> Result<bool, ShuffleError> {
    assert_eq!(m.entries.len(), f.quiver.node_count());
    if f.is_zero() {
        return Ok(true);
    }
    let d = f.vdeg()?.expect("nonzero element has a degree");
    let target = m.dot(&f.hdeg)
        * Rational::from_integer(f.side.sign().into());
    Ok(Rational::from_integer(d.into()) == target)
}

fn rational_of(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn floor_i64(r: &Rational) -> i64 {
    r.floor().to_integer().to_i64().expect("bound fits in i64")
}

fn ceil_i64(r: &Rational) -> i64 {
    r.ceil().to_integer().to_i64().expect("bound fits in i64")
}

/// Splits a monomial into its part supported on `keep` and the rest.
fn split_mono(m: &Mono, keep: &BTreeSet<Sym>) -> (Mono, Mono) {
    let inside = Mono::from_exps(m.iter().filter(|(s, _)| keep.contains(s)).map(|(s, e)| (s.clone(), e)));
    let outside = Mono::from_exps(m.iter().filter(|(s, _)| !keep.contains(s)).map(|(s, e)| (s.clone(), e)));
    (inside, outside)
}

/// Reduced nullspace basis of the homogeneous system `rows . c = 0`, one
/// vector per free column, echelonized against the column order.
fn nullspace(mut rows: Vec<Vec<RatFun>>, ncols: usize) -> Vec<Vec<RatFun>> {
    let nrows = rows.len();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..nrows).find(|&rr| !rows[rr][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][c].recip().expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for rr in 0..nrows {
            if rr != r && !rows[rr][c].is_zero() {
                let factor = rows[rr][c].clone();
                for cc in 0..ncols {
                    let delta = factor.mul(&rows[r][cc]);
                    rows[rr][cc] = rows[rr][cc].sub(&delta);
                }
            }
        }
        pivots.push((r, c));
        r += 1;
        if r == nrows {
            break;
        }
    }
    let pivot_cols: BTreeSet<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for f in 0..ncols {
        if pivot_cols.contains(&f) {
            continue;
        }
        let mut v = vec![RatFun::zero(); ncols];
        v[f] = RatFun::one();
        for &(pr, pc) in &pivots {
            v[pc] = rows[pr][f].neg();
        }
        basis.push(v);
    }
    basis
}

/// Computes an echelonized basis of the slope-`m` graded piece in
/// horizontal degree `n` (vertical degree pinned to `m . n`, with the
/// side's sign): candidate symmetric Laurent orbits inside the exponent
/// windows forced by the single-variable slope limits, cut down by the
/// wheel conditions and every slope-limit inequality as one exact linear
/// system over the coefficient field.
pub fn slope_basis(
    quiver: &Quiver,
    side: Side,
    m: &Slope,
    n: &DimVector,
) -> Result<GradedPiece, ShuffleError> {
    quiver.check_dim(n)?;
    assert_eq!(m.entries.len(), quiver.node_count());
    if !n.is_nonnegative() {
        return Err(ShuffleError::BadElement(
            "horizontal degree has a negative entry".into(),
        ));
    }
    let mn = m.dot(n);
    if !mn.denom().is_one() {
        return Err(ShuffleError::NonIntegralSlope(
            format!("{:?}", m.entries),
            n.to_string(),
        ));
    }
    let sign = side.sign();
    let target = mn.numer().to_i64().expect("degree fits in i64") * sign;
    if n.is_zero() {
        return Ok(GradedPiece {
            hdeg: n.clone(),
            vdeg: 0,
            basis: vec![ShuffleElement::unit(quiver.clone(), side)],
        });
    }

    // Per-color exponent windows from the k = e_i and k = n - e_i limits.
    let nc = quiver.node_count();
    let mut windows: Vec<Option<(i64, i64)>> = vec![None; nc];
    for i in 0..nc {
        if n.entries[i] == 0 {
            continue;
        }
        let ei = DimVector::unit(nc, i);
        let rest = n.sub(&ei);
        let smi = m.entries[i].clone() * rational_of(sign);
        let ci = rational_of(quiver.inner_sym(&ei, &rest)?);
        let lo = ceil_i64(&(smi.clone() - ci.clone()));
        let hi = floor_i64(&(smi + ci));
        if lo > hi {
            return Ok(GradedPiece { hdeg: n.clone(), vdeg: target, basis: vec![] });
        }
        windows[i] = Some((lo, hi));
    }

    // Candidate orbits: weakly decreasing exponent tuples per color.
    let per_color: Vec<Vec<Vec<i64>>> = (0..nc)
        .map(|i| match windows[i] {
            None => vec![vec![]],
            Some((lo, hi)) => (lo..=hi)
                .rev()
                .combinations_with_replacement(n.entries[i] as usize)
                .collect(),
        })
        .collect();
    let mut candidates: Vec<Vec<Vec<i64>>> = per_color
        .into_iter()
        .multi_cartesian_product()
        .filter(|choice| {
            choice
                .iter()
                .flat_map(|v| v.iter())
                .sum::<i64>()
                == target
        })
        .collect();
    candidates.sort_by(|a, b| {
        let fa: Vec<i64> = a.iter().flat_map(|v| v.iter().copied()).collect();
        let fb: Vec<i64> = b.iter().flat_map(|v| v.iter().copied()).collect();
        fb.cmp(&fa)
    });
    if candidates.is_empty() {
        return Ok(GradedPiece { hdeg: n.clone(), vdeg: target, basis: vec![] });
    }

    // Orbit polynomials: sum over distinct same-color permutations.
    let orbits: Vec<LaurentPoly> = candidates
        .iter()
        .map(|choice| {
            let per: Vec<Vec<Vec<i64>>> = choice
                .iter()
                .map(|exps| {
                    let set: BTreeSet<Vec<i64>> = exps
                        .iter()
                        .copied()
                        .permutations(exps.len())
                        .collect();
                    set.into_iter().collect()
                })
                .collect();
            let mut out = LaurentPoly::zero();
            for combo in per.into_iter().multi_cartesian_product() {
                let mut mono = Mono::one();
                for (i, exps) in combo.iter().enumerate() {
                    let label = quiver.node_label(i);
                    for (a, &e) in exps.iter().enumerate() {
                        mono = mono.mul(&Mono::var(zvar(label, a + 1), e));
                    }
                }
                out.add_term(mono, Rational::one());
            }
            out
        })
        .collect();

    let ncand = orbits.len();
    let mut rows: Vec<Vec<RatFun>> = Vec::new();

    // Wheel conditions.
    let zwset: BTreeSet<Sym> = {
        let mut s = z_symbols(quiver, n);
        s.insert(wheel_sym());
        s
    };
    for map in wheel_substitution_maps(quiver, n, &WheelOptions::default()) {
        let mut by_mono: BTreeMap<Mono, Vec<RatFun>> = BTreeMap::new();
        for (idx, orbit) in orbits.iter().enumerate() {
            let sub = orbit.substitute(&map)?;
            for (mono, c) in sub.terms() {
                let (zw, qt) = split_mono(mono, &zwset);
                let entry = by_mono
                    .entry(zw)
                    .or_insert_with(|| vec![RatFun::zero(); ncand]);
                entry[idx] = entry[idx].add(&RatFun::monomial(c.clone(), qt));
            }
        }
        rows.extend(by_mono.into_values());
    }

    // Slope-limit inequalities for every intermediate k.
    let xi = xi_sym();
    for k in n.sub_vectors() {
        if k.is_zero() || k == *n {
            continue;
        }
        let rest = n.sub(&k);
        let ck = rational_of(quiver.inner_sym(&k, &rest).expect("dimension checked"));
        let violates = |p: i64| -> bool {
            if sign > 0 {
                rational_of(p) > m.dot(&k) + ck.clone()
            } else {
                rational_of(p) < -m.dot(&k) - ck.clone()
            }
        };
        let mut scale = BTreeMap::new();
        for (i, &ki) in k.entries.iter().enumerate() {
            let label = quiver.node_label(i);
            for a in 1..=ki as usize {
                let mono = Mono::from_exps([(xi.clone(), 1), (zvar(label, a), 1)]);
                scale.insert(zvar(label, a), (Rational::one(), mono));
            }
        }
        let mut by_key: BTreeMap<(i64, Mono), Vec<RatFun>> = BTreeMap::new();
        for (idx, orbit) in orbits.iter().enumerate() {
            let scaled = orbit.substitute(&scale)?;
            for (p, piece) in scaled.profile(&xi) {
                if !violates(p) {
                    continue;
                }
                for (mono, c) in piece.terms() {
                    let entry = by_key
                        .entry((p, mono.clone()))
                        .or_insert_with(|| vec![RatFun::zero(); ncand]);
                    entry[idx] = entry[idx].add(&RatFun::from_rational(c.clone()));
                }
            }
        }
        rows.extend(by_key.into_values());
    }

    let basis = nullspace(rows, ncand)
        .into_iter()
        .map(|v| {
            let mut poly = RatFun::zero();
            for (idx, coeff) in v.iter().enumerate() {
                if !coeff.is_zero() {
                    poly = poly.add(&coeff.mul(&RatFun::from_poly(orbits[idx].clone())));
                }
            }
            ShuffleElement::new_unchecked(quiver.clone(), side, n.clone(), poly)
        })
        .collect();
    Ok(GradedPiece { hdeg: n.clone(), vdeg: target, basis })
}

/// Verifies `e_i(z) e_j(w) zeta_ji(w/z) = e_j(w) e_i(z) zeta_ij(z/w)` at
/// one coefficient: both kernels are cleared to Laurent polynomials and
/// the resulting finite combinations of products of one-variable
/// generators around base modes `(a, b)` are compared exactly.
pub fn quadratic_relation_check(
    quiver: &Quiver,
    i: usize,
    j: usize,
    a: i64,
    b: i64,
) -> Result<bool, ShuffleError> {
    let x = Sym::new("x");
    let invert = |p: &LaurentPoly| -> LaurentPoly {
        let mut map = BTreeMap::new();
        map.insert(x.clone(), (Rational::one(), Mono::var(x.clone(), -1)));
        p.substitute(&map).expect("inversion cannot fail")
    };
    let zij = quiver.zeta(i, j);
    let zji = quiver.zeta(j, i);
    // Cleared kernels in y = z/w: N_ji(1/y) D_ij(y) and N_ij(y) D_ji(1/y).
    let k1 = invert(zji.num()).mul(zij.den());
    let k2 = zij.num().mul(&invert(zji.den()));

    let hdeg = DimVector::unit(quiver.node_count(), i)
        .add(&DimVector::unit(quiver.node_count(), j));
    let mut lhs = ShuffleElement::zero(quiver.clone(), Side::Positive, hdeg.clone());
    for (s, piece) in k1.profile(&x) {
        let ei = ShuffleElement::generator(quiver.clone(), Side::Positive, i, a + s);
        let ej = ShuffleElement::generator(quiver.clone(), Side::Positive, j, b - s);
        let prod = shuffle_product(&ei, &ej)?;
        lhs = lhs.add(&prod.scale_fun(&RatFun::from_poly(piece))?)?;
    }
    let mut rhs = ShuffleElement::zero(quiver.clone(), Side::Positive, hdeg);
    for (s, piece) in k2.profile(&x) {
        let ei = ShuffleElement::generator(quiver.clone(), Side::Positive, i, a + s);
        let ej = ShuffleElement::generator(quiver.clone(), Side::Positive, j, b - s);
        let prod = shuffle_product(&ej, &ei)?;
        rhs = rhs.add(&prod.scale_fun(&RatFun::from_poly(piece))?)?;
    }
    Ok(lhs == rhs)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShuffleTermJson {
    pub coeff: String,
    #[serde(default)]
    pub exps: BTreeMap<String, i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShuffleElementJson {
    pub quiver: QuiverJson,
    pub side: Side,
    pub hdeg: BTreeMap<String, i64>,
    pub poly: Vec<ShuffleTermJson>,
}

impl ShuffleElement {
    /// One JSON term per distinct variable monomial, coefficients printed
    /// in the coefficient-field grammar.
    pub fn to_json(&self) -> ShuffleElementJson {
        let zset = z_symbols(&self.quiver, &self.hdeg);
        let mut by_mono: BTreeMap<Mono, LaurentPoly> = BTreeMap::new();
        for (m, c) in self.poly.num().terms() {
            let (zput, qt) = split_mono(m, &zset);
            by_mono
                .entry(zput)
                .or_insert_with(LaurentPoly::zero)
                .add_term(qt, c.clone());
        }
        let poly = by_mono
            .into_iter()
            .map(|(zmono, qt)| {
                let coeff = RatFun::new(qt, self.poly.den().clone())
                    .expect("denominator is nonzero");
                ShuffleTermJson {
                    coeff: coeff.to_string(),
                    exps: zmono.iter().map(|(s, e)| (s.to_string(), e)).collect(),
                }
            })
            .collect();
        ShuffleElementJson {
            quiver: self.quiver.to_json(),
            side: self.side,
            hdeg: self.hdeg.to_labels(&self.quiver),
            poly,
        }
    }

    /// Parses and fully validates an element.
    pub fn from_json(j: &ShuffleElementJson) -> Result<ShuffleElement, ShuffleError> {
        let quiver = Quiver::from_json(&j.quiver)?;
        let hdeg = DimVector::from_labels(&quiver, &j.hdeg)?;
        let zset = z_symbols(&quiver, &hdeg);
        let params = param_symbols(&quiver);
        let mut poly = RatFun::zero();
        for term in &j.poly {
            let c = parse_ratfun(&term.coeff)?;
            if c.symbols().iter().any(|s| !params.contains(s)) {
                return Err(ShuffleError::BadElement(format!(
                    "coefficient {} mentions a non-parameter symbol",
                    term.coeff
                )));
            }
            let mut mono = Mono::one();
            for (name, &e) in &term.exps {
                let s = Sym::new(name.clone());
                if !zset.contains(&s) {
                    return Err(ShuffleError::BadElement(format!(
                        "unknown variable {name} for this degree"
                    )));
                }
                mono = mono.mul(&Mono::var(s, e));
            }
            poly = poly.add(&c.mul_mono(&mono));
        }
        ShuffleElement::new(quiver, j.side, hdeg, poly)
    }
}
