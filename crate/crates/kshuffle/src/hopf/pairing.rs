//! The Hopf pairing by iterated residue extraction.
//!
//! A negative element is decomposed into products of one-variable
//! generators; each word is then paired against the positive element by a
//! constant-term formula in the nested regime where earlier word variables
//! are much smaller than later ones. Cartan decorations pair through the
//! two-sided kernel ratio, which is built from the kernel exactly as
//! displayed, including the reciprocal-argument factor that distinguishes
//! it from the kernel used for products; that literal form is what makes
//! every mode pairing a power-series coefficient.

use super::cartan::CartanWord;
use super::HopfError;
use crate::exactalg::{
    constant_term_iterated, linalg, series_expand, ExpansionPoint, LaurentPoly, Mono, RatFun,
    Sym,
};
use crate::quiver::{zvar, zvars, Quiver};
use crate::shuffle::{shuffle_product, Side, ShuffleElement};
use std::collections::{BTreeMap, BTreeSet};

/// Switches for the pairing conventions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairingOptions {
    /// Divide the Cartan kernel ratio by its value at zero so zero modes
    /// pair to one.
    pub normalized_cartan: bool,
    /// Insert one factor of `γ_i` per word letter of color `i`.
    pub gamma_insertion: bool,
}

impl Default for PairingOptions {
    fn default() -> Self {
        PairingOptions {
            normalized_cartan: true,
            gamma_insertion: true,
        }
    }
}

/// The kernel exactly as displayed, with the reciprocal-argument loop
/// factor. Only the pairing uses this form.
fn zeta_literal_in(quiver: &Quiver, i: usize, j: usize, x: &RatFun) -> RatFun {
    let q = RatFun::var("q");
    let mut out = RatFun::one();
    if i == j {
        let num = RatFun::one().sub(&x.div(&q).expect("q is nonzero"));
        let den = RatFun::one().sub(x);
        out = out.mul(&num.div(&den).expect("generic argument"));
    }
    for t in quiver.params_between(i, j) {
        out = out.mul(&RatFun::one().sub(&RatFun::var(t.clone()).mul(x)));
    }
    for t in quiver.params_between(j, i) {
        let inv = x.recip().expect("generic argument");
        let f = q
            .div(&RatFun::var(t.clone()))
            .expect("parameter is nonzero")
            .mul(&inv);
        out = out.mul(&RatFun::one().sub(&f));
    }
    out
}

/// The two-sided Cartan kernel ratio in the argument `y`: the literal
/// kernel at `1/y` over the transposed literal kernel at `y`. Regular and
/// nonzero at `y = 0`.
fn cartan_ratio(quiver: &Quiver, i: usize, j: usize, y: &RatFun) -> RatFun {
    let inv = y.recip().expect("generic argument");
    zeta_literal_in(quiver, i, j, &inv)
        .div(&zeta_literal_in(quiver, j, i, y))
        .expect("kernel is nonzero")
}

/// Value of the Cartan ratio at `y = 0`:
/// `q^{-δ_ij} Π_{e: i -> j} t_e^2/q`.
fn kappa(quiver: &Quiver, i: usize, j: usize) -> RatFun {
    let q = RatFun::var("q");
    let mut out = if i == j {
        q.recip().expect("q is nonzero")
    } else {
        RatFun::one()
    };
    for t in quiver.params_between(i, j) {
        let t = RatFun::var(t.clone());
        out = out.mul(&t.mul(&t).div(&q).expect("q is nonzero"));
    }
    out
}

/// Coefficients `[y^0], ..., [y^order]` of the Cartan ratio, divided by
/// its constant term when `normalized` is set.
pub fn cartan_ratio_series(
    quiver: &Quiver,
    i: usize,
    j: usize,
    order: i64,
    normalized: bool,
) -> Result<Vec<RatFun>, HopfError> {
    if order < 0 {
        return Err(HopfError::NegativeOrder(order));
    }
    let y = Sym::new("y__r");
    let r = cartan_ratio(quiver, i, j, &RatFun::var(y.clone()));
    let series = series_expand(&r, &y, ExpansionPoint::Zero, order + 1)?;
    if series.valuation != 0 {
        return Err(HopfError::Internal(format!(
            "Cartan ratio has valuation {} at zero",
            series.valuation
        )));
    }
    let head = series
        .coeff(0)
        .ok_or_else(|| HopfError::Internal("empty Cartan ratio series".into()))?;
    let mut out = Vec::new();
    for p in 0..=order {
        let c = series
            .coeff(p)
            .ok_or_else(|| HopfError::Internal("Cartan ratio series too short".into()))?;
        if normalized {
            out.push(c.div(&head)?);
        } else {
            out.push(c);
        }
    }
    Ok(out)
}

/// `⟨h_{i,p}, h_{j,-r}⟩`: zero unless `p = r`, otherwise the `y^p`
/// coefficient of the (optionally normalized) Cartan ratio.
pub fn cartan_pair(
    quiver: &Quiver,
    i: usize,
    p: i64,
    j: usize,
    r: i64,
    opts: &PairingOptions,
) -> Result<RatFun, HopfError> {
    if p < 0 || r < 0 {
        return Err(HopfError::NegativeCartanExponent);
    }
    if p != r {
        return Ok(RatFun::zero());
    }
    let coeffs = cartan_ratio_series(quiver, i, j, p, opts.normalized_cartan)?;
    Ok(coeffs[p as usize].clone())
}

/// Flattens a word into `(node, p)` letters, one per unit of exponent.
fn word_letters(word: &CartanWord) -> Result<Vec<(usize, i64)>, HopfError> {
    if word.central().next().is_some() {
        return Err(HopfError::Internal(
            "central decorations have no defined pairing".into(),
        ));
    }
    let mut letters = Vec::new();
    for (&(node, p), &exp) in word.modes() {
        if exp < 0 {
            return Err(HopfError::NegativeCartanExponent);
        }
        for _ in 0..exp {
            letters.push((node, p));
        }
    }
    Ok(letters)
}

/// `⟨positive word, negative word⟩` through the product of Cartan ratios,
/// one per letter pair, in the regime where the negative-word variables
/// are small and the positive-word variables are large.
fn cartan_word_pair(
    quiver: &Quiver,
    lword: &CartanWord,
    rword: &CartanWord,
    opts: &PairingOptions,
) -> Result<RatFun, HopfError> {
    if !lword.is_unit() && lword.side() != Side::Positive {
        return Err(HopfError::WrongSide {
            expected: Side::Positive,
        });
    }
    if !rword.is_unit() && rword.side() != Side::Negative {
        return Err(HopfError::WrongSide {
            expected: Side::Negative,
        });
    }
    let lletters = word_letters(lword)?;
    let rletters = word_letters(rword)?;
    let zsyms: Vec<Sym> = (0..lletters.len())
        .map(|a| Sym::new(format!("zc__{a}")))
        .collect();
    let wsyms: Vec<Sym> = (0..rletters.len())
        .map(|b| Sym::new(format!("wc__{b}")))
        .collect();
    let mut expr = RatFun::one();
    for (a, &(i, p)) in lletters.iter().enumerate() {
        expr = expr.mul(&RatFun::var_pow(zsyms[a].clone(), p));
        for (b, &(j, _)) in rletters.iter().enumerate() {
            let y = RatFun::var(wsyms[b].clone())
                .div(&RatFun::var(zsyms[a].clone()))
                .expect("variable is nonzero");
            let mut factor = cartan_ratio(quiver, i, j, &y);
            if opts.normalized_cartan {
                factor = factor.div(&kappa(quiver, i, j))?;
            }
            expr = expr.mul(&factor);
        }
    }
    for (b, &(_, r)) in rletters.iter().enumerate() {
        expr = expr.mul(&RatFun::var_pow(wsyms[b].clone(), -r));
    }
    let mut regime = Vec::new();
    for w in &wsyms {
        regime.push((w.clone(), ExpansionPoint::Zero));
    }
    for z in &zsyms {
        regime.push((z.clone(), ExpansionPoint::Infinity));
    }
    Ok(constant_term_iterated(&expr, &regime)?)
}

/// Renames the variables of `elem` to the word variables `y__a`: letter
/// `a` of color `i` takes the variable of color `i` with the running
/// occurrence count of that color.
fn word_rename(
    quiver: &Quiver,
    colors: &[usize],
    ysyms: &[Sym],
) -> BTreeMap<Sym, Sym> {
    let mut counts = vec![0usize; quiver.node_count()];
    let mut map = BTreeMap::new();
    for (a, &i) in colors.iter().enumerate() {
        counts[i] += 1;
        map.insert(zvar(quiver.node_label(i), counts[i]), ysyms[a].clone());
    }
    map
}

/// `⟨F, f_{i_1,d_1} * ... * f_{i_n,d_n}⟩` by the constant-term formula:
/// `Π_a γ_{i_a}` times the constant term of
/// `Π_a y_a^{d_a} · F(y) / Π_{a<b} ζ_{i_a i_b}(y_a/y_b)` in the regime
/// `|y_1| << ... << |y_n|`.
fn word_pair_right(
    f: &ShuffleElement,
    word: &[(usize, i64)],
    opts: &PairingOptions,
) -> Result<RatFun, HopfError> {
    let quiver = f.quiver();
    let colors: Vec<usize> = word.iter().map(|&(i, _)| i).collect();
    let ysyms: Vec<Sym> = (0..word.len()).map(|a| Sym::new(format!("y__{a}"))).collect();
    let mut expr = f.poly().rename(&word_rename(quiver, &colors, &ysyms));
    for (a, &(_, d)) in word.iter().enumerate() {
        expr = expr.mul(&RatFun::var_pow(ysyms[a].clone(), d));
    }
    for a in 0..word.len() {
        for b in a + 1..word.len() {
            let x = RatFun::var(ysyms[a].clone())
                .div(&RatFun::var(ysyms[b].clone()))
                .expect("variable is nonzero");
            expr = expr.div(&quiver.zeta_in(colors[a], colors[b], &x))?;
        }
    }
    let regime: Vec<(Sym, ExpansionPoint)> = ysyms
        .iter()
        .map(|y| (y.clone(), ExpansionPoint::Zero))
        .collect();
    let mut out = constant_term_iterated(&expr, &regime)?;
    if opts.gamma_insertion {
        for &(i, _) in word {
            out = out.mul(&quiver.gamma(i));
        }
    }
    Ok(out)
}

/// Mirror formula `⟨e_{i_1,d_1} * ... * e_{i_n,d_n}, G⟩`: kernel
/// `Π_{a<b} ζ_{i_b i_a}(y_b/y_a)` in the regime `|y_n| << ... << |y_1|`.
fn word_pair_left(
    word: &[(usize, i64)],
    g: &ShuffleElement,
    opts: &PairingOptions,
) -> Result<RatFun, HopfError> {
    let quiver = g.quiver();
    let colors: Vec<usize> = word.iter().map(|&(i, _)| i).collect();
    let ysyms: Vec<Sym> = (0..word.len()).map(|a| Sym::new(format!("y__{a}"))).collect();
    let mut expr = g.poly().rename(&word_rename(quiver, &colors, &ysyms));
    for (a, &(_, d)) in word.iter().enumerate() {
        expr = expr.mul(&RatFun::var_pow(ysyms[a].clone(), d));
    }
    for a in 0..word.len() {
        for b in a + 1..word.len() {
            let x = RatFun::var(ysyms[b].clone())
                .div(&RatFun::var(ysyms[a].clone()))
                .expect("variable is nonzero");
            expr = expr.div(&quiver.zeta_in(colors[b], colors[a], &x))?;
        }
    }
    let regime: Vec<(Sym, ExpansionPoint)> = ysyms
        .iter()
        .rev()
        .map(|y| (y.clone(), ExpansionPoint::Zero))
        .collect();
    let mut out = constant_term_iterated(&expr, &regime)?;
    if opts.gamma_insertion {
        for &(i, _) in word {
            out = out.mul(&quiver.gamma(i));
        }
    }
    Ok(out)
}

/// Coordinates of an element: variable monomial to parameter coefficient.
pub(super) fn z_coords(elem: &ShuffleElement) -> BTreeMap<Mono, RatFun> {
    let zset: BTreeSet<Sym> = zvars(elem.quiver(), elem.hdeg())
        .into_iter()
        .map(|(s, _)| s)
        .collect();
    let mut by_mono: BTreeMap<Mono, LaurentPoly> = BTreeMap::new();
    for (m, c) in elem.poly().num().terms() {
        let mut zpart = Vec::new();
        let mut rest = Vec::new();
        for (s, e) in m.iter() {
            if zset.contains(s) {
                zpart.push((s.clone(), e));
            } else {
                rest.push((s.clone(), e));
            }
        }
        by_mono
            .entry(Mono::from_exps(zpart))
            .or_insert_with(LaurentPoly::zero)
            .add_term(Mono::from_exps(rest), c.clone());
    }
    let den = RatFun::from_poly(elem.poly().den().clone());
    by_mono
        .into_iter()
        .map(|(m, p)| {
            let c = RatFun::from_poly(p).div(&den).expect("denominator is nonzero");
            (m, c)
        })
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

/// All distinct arrangements of the color multiset of `n`.
fn color_arrangements(quiver: &Quiver, n: &crate::quiver::DimVector) -> Vec<Vec<usize>> {
    let mut pool: Vec<usize> = Vec::new();
    for (i, &c) in n.entries.iter().enumerate() {
        for _ in 0..c {
            pool.push(i);
        }
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    let mut remaining: BTreeMap<usize, i64> = BTreeMap::new();
    for &i in &pool {
        *remaining.entry(i).or_insert(0) += 1;
    }
    fn recurse(
        remaining: &mut BTreeMap<usize, i64>,
        current: &mut Vec<usize>,
        len: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == len {
            out.push(current.clone());
            return;
        }
        let keys: Vec<usize> = remaining
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(&k, _)| k)
            .collect();
        for k in keys {
            *remaining.get_mut(&k).unwrap() -= 1;
            current.push(k);
            recurse(remaining, current, len, out);
            current.pop();
            *remaining.get_mut(&k).unwrap() += 1;
        }
    }
    recurse(&mut remaining, &mut current, pool.len(), &mut out);
    out
}

/// All degree vectors in `[lo, hi]^len` with the given sum.
fn degree_compositions(len: usize, lo: i64, hi: i64, sum: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn recurse(
        len: usize,
        lo: i64,
        hi: i64,
        sum: i64,
        current: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        if current.len() == len {
            if sum == 0 {
                out.push(current.clone());
            }
            return;
        }
        let slots = (len - current.len() - 1) as i64;
        for d in lo..=hi {
            let rest = sum - d;
            if rest < lo * slots || rest > hi * slots {
                continue;
            }
            current.push(d);
            recurse(len, lo, hi, rest, current, out);
            current.pop();
        }
    }
    recurse(len, lo, hi, sum, &mut current, &mut out);
    out
}

/// Writes a single-vertical-degree element as a combination of products of
/// one-variable generators, widening the candidate degree window until the
/// linear system is solvable.
fn decompose_words(
    elem: &ShuffleElement,
) -> Result<Vec<(Vec<(usize, i64)>, RatFun)>, HopfError> {
    let quiver = elem.quiver().clone();
    let n = elem.hdeg().clone();
    let total: i64 = n.total();
    if total == 0 {
        return Ok(vec![(Vec::new(), elem.poly().clone())]);
    }
    let vdeg = elem
        .vdeg()?
        .ok_or_else(|| HopfError::Internal("decomposing the zero element".into()))?;
    let mut lo = i64::MAX;
    let mut hi = i64::MIN;
    for (s, _) in zvars(&quiver, &n) {
        if let Some((a, b)) = elem.poly().num().exp_range(&s) {
            lo = lo.min(a);
            hi = hi.max(b);
        }
    }
    if lo > hi {
        lo = 0;
        hi = 0;
    }
    let arrangements = color_arrangements(&quiver, &n);
    for radius in 0..=3 {
        let mut words: Vec<Vec<(usize, i64)>> = Vec::new();
        for colors in &arrangements {
            for degs in degree_compositions(total as usize, lo - radius, hi + radius, vdeg) {
                words.push(colors.iter().copied().zip(degs.iter().copied()).collect());
            }
        }
        let mut word_elems = Vec::new();
        for word in &words {
            let mut acc: Option<ShuffleElement> = None;
            for &(i, d) in word {
                let g = ShuffleElement::generator(quiver.clone(), elem.side(), i, d);
                acc = Some(match acc {
                    None => g,
                    Some(prev) => shuffle_product(&prev, &g)?,
                });
            }
            word_elems.push(acc.expect("word is nonempty"));
        }
        let mut coords: BTreeSet<Mono> = BTreeSet::new();
        let target = z_coords(elem);
        let columns: Vec<BTreeMap<Mono, RatFun>> =
            word_elems.iter().map(z_coords).collect();
        for c in &columns {
            coords.extend(c.keys().cloned());
        }
        coords.extend(target.keys().cloned());
        let rows: Vec<Mono> = coords.into_iter().collect();
        let a: Vec<Vec<RatFun>> = rows
            .iter()
            .map(|m| {
                columns
                    .iter()
                    .map(|c| c.get(m).cloned().unwrap_or_else(RatFun::zero))
                    .collect()
            })
            .collect();
        let b: Vec<RatFun> = rows
            .iter()
            .map(|m| target.get(m).cloned().unwrap_or_else(RatFun::zero))
            .collect();
        if let Some(x) = linalg::solve(&a, &b) {
            let mut out = Vec::new();
            for (word, c) in words.into_iter().zip(x) {
                if !c.is_zero() {
                    out.push((word, c));
                }
            }
            return Ok(out);
        }
    }
    Err(HopfError::DecompositionFailed { radius: 3 })
}

/// The Hopf pairing with default conventions.
pub fn pair(f: &ShuffleElement, g: &ShuffleElement) -> Result<RatFun, HopfError> {
    pair_with(f, g, &PairingOptions::default())
}

/// The Hopf pairing `⟨F, G⟩` of a positive and a negative element.
/// Elements of different horizontal degree pair to zero; within one
/// degree, vertical components pair when their degrees cancel.
pub fn pair_with(
    f: &ShuffleElement,
    g: &ShuffleElement,
    opts: &PairingOptions,
) -> Result<RatFun, HopfError> {
    if f.side() != Side::Positive {
        return Err(HopfError::WrongSide {
            expected: Side::Positive,
        });
    }
    if g.side() != Side::Negative {
        return Err(HopfError::WrongSide {
            expected: Side::Negative,
        });
    }
    if f.quiver() != g.quiver() {
        return Err(HopfError::QuiverMismatch);
    }
    if f.hdeg() != g.hdeg() {
        return Ok(RatFun::zero());
    }
    if f.hdeg().is_zero() {
        return Ok(f.poly().mul(g.poly()));
    }
    let gcomps = g.vdeg_components();
    let mut out = RatFun::zero();
    for (v, fc) in f.vdeg_components() {
        let Some(gc) = gcomps.get(&(-v)) else { continue };
        for (word, c) in decompose_words(gc)? {
            out = out.add(&c.mul(&word_pair_right(&fc, &word, opts)?));
        }
    }
    Ok(out)
}

/// The same pairing computed through the mirror route: the positive
/// element is decomposed into words and paired by the transposed formula.
pub fn pair_with_mirror(
    f: &ShuffleElement,
    g: &ShuffleElement,
    opts: &PairingOptions,
) -> Result<RatFun, HopfError> {
    if f.side() != Side::Positive {
        return Err(HopfError::WrongSide {
            expected: Side::Positive,
        });
    }
    if g.side() != Side::Negative {
        return Err(HopfError::WrongSide {
            expected: Side::Negative,
        });
    }
    if f.quiver() != g.quiver() {
        return Err(HopfError::QuiverMismatch);
    }
    if f.hdeg() != g.hdeg() {
        return Ok(RatFun::zero());
    }
    if f.hdeg().is_zero() {
        return Ok(f.poly().mul(g.poly()));
    }
    let fcomps = f.vdeg_components();
    let mut out = RatFun::zero();
    for (v, gc) in g.vdeg_components() {
        let Some(fc) = fcomps.get(&(-v)) else { continue };
        for (word, c) in decompose_words(fc)? {
            out = out.add(&c.mul(&word_pair_left(&word, &gc, opts)?));
        }
    }
    Ok(out)
}

/// `⟨word · E, F · word'⟩`: the pairing factors as the Cartan word pairing
/// times the shuffle pairing.
pub fn pair_decorated(
    left: (&CartanWord, &ShuffleElement),
    right: (&ShuffleElement, &CartanWord),
    opts: &PairingOptions,
) -> Result<RatFun, HopfError> {
    let (lword, f) = left;
    let (g, rword) = right;
    let cartan = cartan_word_pair(f.quiver(), lword, rword, opts)?;
    if cartan.is_zero() {
        return Ok(RatFun::zero());
    }
    Ok(cartan.mul(&pair_with(f, g, opts)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse_ratfun;
    use crate::quiver::DimVector;

    fn gen(q: &Quiver, side: Side, d: i64) -> ShuffleElement {
        ShuffleElement::generator(q.clone(), side, 0, d)
    }

    #[test]
    fn generator_pairing_is_gamma_on_the_diagonal() {
        for q in [Quiver::a1(), Quiver::jordan()] {
            let gamma = q.gamma(0);
            for d in [-2, 0, 3] {
                for k in [-3, -d, 2] {
                    let e = gen(&q, Side::Positive, d);
                    let f = gen(&q, Side::Negative, k);
                    let got = pair(&e, &f).unwrap();
                    if d + k == 0 {
                        assert_eq!(got, gamma);
                    } else {
                        assert!(got.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn unit_pairing_and_degree_mismatch() {
        let q = Quiver::a1();
        let one_p = ShuffleElement::unit(q.clone(), Side::Positive);
        let one_n = ShuffleElement::unit(q.clone(), Side::Negative);
        assert!(pair(&one_p, &one_n).unwrap().is_one());
        let e = gen(&q, Side::Positive, 0);
        assert!(pair(&e, &one_n).unwrap().is_zero());
    }

    #[test]
    fn a1_pair_of_squares_matches_the_coproduct_value() {
        let q = Quiver::a1();
        let e = gen(&q, Side::Positive, 0);
        let f = gen(&q, Side::Negative, 0);
        let ee = shuffle_product(&e, &e).unwrap();
        let ff = shuffle_product(&f, &f).unwrap();
        let got = pair(&ee, &ff).unwrap();
        // (1 + 1/q) γ² with γ = q/(q-1).
        let expect = parse_ratfun("(1 + 1/q) * q^2/(q-1)^2").unwrap();
        assert_eq!(got, expect);
    }

    #[test]
    fn mirror_route_agrees() {
        let opts = PairingOptions::default();
        for q in [Quiver::a1(), Quiver::jordan()] {
            let e = gen(&q, Side::Positive, 0);
            let e1 = gen(&q, Side::Positive, 1);
            let f = gen(&q, Side::Negative, 0);
            let fm = gen(&q, Side::Negative, -1);
            let ee = shuffle_product(&e, &e1).unwrap();
            let ff = shuffle_product(&f, &fm).unwrap();
            let a = pair_with(&ee, &ff, &opts).unwrap();
            let b = pair_with_mirror(&ee, &ff, &opts).unwrap();
            assert_eq!(a, b);
            assert!(!a.is_zero());
        }
    }

    #[test]
    fn kappa_matches_the_series_head() {
        for q in [Quiver::a1(), Quiver::jordan()] {
            let raw = cartan_ratio_series(&q, 0, 0, 2, false).unwrap();
            assert_eq!(raw[0], kappa(&q, 0, 0));
            let norm = cartan_ratio_series(&q, 0, 0, 2, true).unwrap();
            assert!(norm[0].is_one());
        }
        let j = Quiver::jordan();
        assert_eq!(kappa(&j, 0, 0), parse_ratfun("t^2/q^2").unwrap());
        let a = Quiver::a1();
        assert_eq!(kappa(&a, 0, 0), parse_ratfun("1/q").unwrap());
    }

    #[test]
    fn mode_pairing_reads_the_series() {
        let q = Quiver::jordan();
        let opts = PairingOptions::default();
        let series = cartan_ratio_series(&q, 0, 0, 2, true).unwrap();
        for p in 0..=2 {
            let got = cartan_pair(&q, 0, p, 0, p, &opts).unwrap();
            assert_eq!(got, series[p as usize]);
        }
        assert!(cartan_pair(&q, 0, 1, 0, 2, &opts).unwrap().is_zero());
        assert!(cartan_pair(&q, 0, 0, 0, 0, &opts).unwrap().is_one());
    }

    #[test]
    fn decorated_pairing_factorizes() {
        let q = Quiver::jordan();
        let opts = PairingOptions::default();
        let e = gen(&q, Side::Positive, 1);
        let f = gen(&q, Side::Negative, -1);
        let hp = CartanWord::mode(Side::Positive, 0, 1, 1).unwrap();
        let hm = CartanWord::mode(Side::Negative, 0, 1, 1).unwrap();
        let got = pair_decorated((&hp, &e), (&f, &hm), &opts).unwrap();
        let expect = cartan_pair(&q, 0, 1, 0, 1, &opts)
            .unwrap()
            .mul(&pair(&e, &f).unwrap());
        assert_eq!(got, expect);
        // A positive mode against the empty word vanishes; zero modes count one.
        let unit = CartanWord::unit();
        assert!(pair_decorated((&hp, &e), (&f, &unit), &opts)
            .unwrap()
            .is_zero());
        let z = CartanWord::zero_modes(Side::Negative, &DimVector::new(vec![2]));
        let got = pair_decorated((&unit, &e), (&f, &z), &opts).unwrap();
        assert_eq!(got, pair(&e, &f).unwrap());
    }

    #[test]
    fn negative_zero_mode_exponents_are_rejected() {
        let q = Quiver::jordan();
        let opts = PairingOptions::default();
        let e = gen(&q, Side::Positive, 0);
        let f = gen(&q, Side::Negative, 0);
        let inv = CartanWord::mode(Side::Negative, 0, 0, -1).unwrap();
        let got = pair_decorated((&CartanWord::unit(), &e), (&f, &inv), &opts);
        assert!(matches!(got, Err(HopfError::NegativeCartanExponent)));
    }

    #[test]
    fn gamma_insertion_can_be_disabled() {
        let q = Quiver::a1();
        let opts = PairingOptions {
            gamma_insertion: false,
            ..PairingOptions::default()
        };
        let e = gen(&q, Side::Positive, 2);
        let f = gen(&q, Side::Negative, -2);
        assert!(pair_with(&e, &f, &opts).unwrap().is_one());
    }
}
