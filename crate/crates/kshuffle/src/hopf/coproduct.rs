//! The truncated full coproduct and the exact slope coproduct.
//!
//! Both coproducts split the variables of an element into a left group
//! (`z_{i,a}`, `a <= k_i`) and a right group (working symbols, `a > k_i`),
//! expand the kernel factors in the region where every left variable is
//! much smaller than every right variable, and regroup the resulting
//! monomials into decorated tensor summands. The full coproduct keeps
//! kernel and current terms through the requested depth; the slope
//! coproduct keeps the single depth picked out by the slope grading, which
//! is a finite exact computation.

use super::cartan::CartanWord;
use super::tensor::{CartanPrefactor, TensorElement, TensorSummand, Truncation};
use super::HopfError;
use crate::exactalg::{
    limit_leading, series_expand, ExpansionPoint, LaurentPoly, Mono, RatFun, Rational, Sym,
};
use crate::quiver::{zmono, zvar, DimVector, Quiver, Slope};
use crate::shuffle::{
    naive_slope_eq, slope_geq, slope_leq, symmetrize, Side, ShuffleElement,
};
use std::collections::{BTreeMap, BTreeSet};

fn aux_sym() -> Sym {
    Sym::new("aux__")
}

fn hsym(label: &str, p: i64) -> Sym {
    Sym::new(format!("h__{label}_{p}"))
}

fn wsym(label: &str, c: usize) -> Sym {
    Sym::new(format!("w__{label}_{c}"))
}

/// Left variables keep their `z` names; right variables are renamed to
/// working symbols indexed from 1 within each color.
struct SplitVars {
    /// `(symbol, color)` for each left variable.
    left: Vec<(Sym, usize)>,
    /// `(working symbol, color, target z symbol)` for each right variable.
    right: Vec<(Sym, usize, Sym)>,
    rename: BTreeMap<Sym, Sym>,
}

fn split_vars(quiver: &Quiver, n: &DimVector, k: &DimVector) -> SplitVars {
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut rename = BTreeMap::new();
    for i in 0..quiver.node_count() {
        let label = quiver.node_label(i);
        for a in 1..=n.entries[i] {
            let z = zvar(label, a as usize);
            if a <= k.entries[i] {
                left.push((z, i));
            } else {
                let c = (a - k.entries[i]) as usize;
                let w = wsym(label, c);
                rename.insert(z, w.clone());
                right.push((w, i, zvar(label, c)));
            }
        }
    }
    SplitVars { left, right, rename }
}

/// Sum over all left-right variable pairs of the mutual kernel valuations;
/// this is both the leading power of the slope normalizer and the exact
/// truncation depth needed by the negative slope coproduct.
fn d_tot(quiver: &Quiver, k: &DimVector, nk: &DimVector) -> i64 {
    let mut acc = 0;
    for i in 0..quiver.node_count() {
        for j in 0..quiver.node_count() {
            acc += k.entries[i]
                * nk.entries[j]
                * (quiver.arrow_count(i, j) + quiver.arrow_count(j, i));
        }
    }
    acc
}

/// Leading coefficient `U_{rl}` of `ζ_{rl}` at large argument: `q^{-δ_rl}`
/// times `-t_e` per edge `r -> l` and `-q/t_e` per edge `l -> r`.
fn zeta_lead(quiver: &Quiver, r: usize, l: usize) -> RatFun {
    let mut u = if r == l {
        RatFun::var("q").recip().expect("q is nonzero")
    } else {
        RatFun::one()
    };
    let q = RatFun::var("q");
    for t in quiver.params_between(r, l) {
        u = u.mul(&RatFun::var(t.clone()).neg());
    }
    for t in quiver.params_between(l, r) {
        let f = q.div(&RatFun::var(t.clone())).expect("parameter is nonzero").neg();
        u = u.mul(&f);
    }
    u
}

/// Power-series coefficients of the reciprocal kernel between a right
/// color `r` and a left color `l`, through `extra` terms past the leading
/// one. Positive side: `1/ζ_{rl}(v/u)` in `x = u/v`, valuation
/// `D = #(r -> l) + #(l -> r)`. Negative side: `1/ζ_{rl}(u/v)` in
/// `x = u/v`, valuation `0` with constant term `1`. Returns the valuation
/// and the coefficients, which are always polynomial in the parameters.
fn pair_series(
    quiver: &Quiver,
    r: usize,
    l: usize,
    side: Side,
    extra: i64,
) -> Result<(i64, Vec<LaurentPoly>), HopfError> {
    let x = Sym::new("xser__");
    let (f, expect_val) = match side {
        Side::Positive => {
            let arg = RatFun::var_pow(x.clone(), -1);
            let d = quiver.arrow_count(r, l) + quiver.arrow_count(l, r);
            (quiver.zeta_in(r, l, &arg).recip()?, d)
        }
        Side::Negative => {
            let arg = RatFun::var(x.clone());
            (quiver.zeta_in(r, l, &arg).recip()?, 0)
        }
    };
    let series = series_expand(&f, &x, ExpansionPoint::Zero, expect_val + extra + 1)?;
    if series.valuation != expect_val {
        return Err(HopfError::Internal(format!(
            "kernel series valuation {} differs from the predicted {}",
            series.valuation, expect_val
        )));
    }
    let mut coeffs = Vec::new();
    for j in 0..=extra {
        let c = series
            .coeff(expect_val + j)
            .ok_or_else(|| HopfError::Internal("kernel series shorter than requested".into()))?;
        let p = c.as_poly().ok_or_else(|| {
            HopfError::Internal("kernel series coefficient is not polynomial".into())
        })?;
        coeffs.push(p.clone());
    }
    Ok((expect_val, coeffs))
}

fn prune_aux(p: LaurentPoly, aux: &Sym, max: i64) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    for (m, c) in p.terms() {
        if m.exp(aux) <= max {
            out.add_term(m.clone(), c.clone());
        }
    }
    out
}

/// The factor `Σ_j coeffs[j] u^{val+j} v^{-(val+j)} aux^j` of one
/// left-right variable pair.
fn series_factor(
    coeffs: &[LaurentPoly],
    valuation: i64,
    u: &Sym,
    v: &Sym,
    aux: &Sym,
) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    for (j, c) in coeffs.iter().enumerate() {
        let e = valuation + j as i64;
        let m = Mono::from_exps([(u.clone(), e), (v.clone(), -e), (aux.clone(), j as i64)]);
        out = out.add(&c.mul_mono(&m));
    }
    out
}

/// The current factor of one variable: `Σ_{p<=order} h-symbol(p) ·
/// var^{dir·p} · aux^p` with `dir = -1` on the positive side and `+1` on
/// the negative side.
fn current_factor(label: &str, var: &Sym, dir: i64, aux: &Sym, order: i64) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    for p in 0..=order {
        let m = Mono::from_exps([
            (hsym(label, p), 1),
            (var.clone(), dir * p),
            (aux.clone(), p),
        ]);
        out.add_term(m, Rational::from_integer(1.into()));
    }
    out
}

struct SummandSplit<'a> {
    quiver: &'a Quiver,
    side: Side,
    k: &'a DimVector,
    nk: &'a DimVector,
    sv: &'a SplitVars,
    /// Global coefficient multiplying every summand.
    coeff: RatFun,
    /// Current symbol lookup; empty when currents were not introduced.
    hmap: BTreeMap<Sym, (usize, i64)>,
    hside: Side,
    /// Word multiplied into every summand's variable word.
    fixed_word: CartanWord,
    /// Whether Cartan words decorate the left leg.
    cartan_left: bool,
    /// When set, keep only monomials whose left vertical degree equals it.
    left_vdeg: Option<i64>,
}

/// Groups the monomials of `big` by Cartan word and dominant right
/// profile, then rebuilds each group as `bucket ⊗ m_λ`. Monomials whose
/// right exponents are not weakly decreasing within each color are
/// dropped: symmetry of the source puts an equal monomial with the
/// dominant profile in every orbit, and that representative carries the
/// whole orbit through the symmetrized right leg.
fn split_summands(
    cfg: &SummandSplit<'_>,
    big: &LaurentPoly,
    aux: &Sym,
) -> Result<Vec<TensorSummand>, HopfError> {
    let left_set: BTreeSet<&Sym> = cfg.sv.left.iter().map(|(s, _)| s).collect();
    let mut rights_by_color: Vec<Vec<&Sym>> = vec![Vec::new(); cfg.quiver.node_count()];
    for (w, j, _) in &cfg.sv.right {
        rights_by_color[*j].push(w);
    }
    let mut buckets: BTreeMap<(CartanWord, Vec<Vec<i64>>), LaurentPoly> = BTreeMap::new();
    'mono: for (m, c) in big.terms() {
        let mut word = cfg.fixed_word.clone();
        let mut left_mono = Vec::new();
        let mut lvdeg = 0;
        for (s, e) in m.iter() {
            if s == aux {
                continue;
            }
            if let Some(&(node, p)) = cfg.hmap.get(s) {
                word = word.mul(&CartanWord::mode(cfg.hside, node, p, e)?)?;
                continue;
            }
            if left_set.contains(s) {
                lvdeg += e;
            }
        }
        if let Some(target) = cfg.left_vdeg {
            if lvdeg != target {
                continue;
            }
        }
        let mut profile = Vec::new();
        for ws in &rights_by_color {
            let exps: Vec<i64> = ws.iter().map(|w| m.exp(w)).collect();
            for pair in exps.windows(2) {
                if pair[0] < pair[1] {
                    continue 'mono;
                }
            }
            profile.push(exps);
        }
        for (s, e) in m.iter() {
            if s != aux && !cfg.hmap.contains_key(s) && !rights_by_color.iter().flatten().any(|w| *w == s)
            {
                left_mono.push((s.clone(), e));
            }
        }
        let entry = buckets
            .entry((word, profile))
            .or_insert_with(LaurentPoly::zero);
        entry.add_term(Mono::from_exps(left_mono), c.clone());
    }
    let mut out = Vec::new();
    for ((word, profile), bucket) in buckets {
        let left = ShuffleElement::new(
            cfg.quiver.clone(),
            cfg.side,
            cfg.k.clone(),
            RatFun::from_poly(bucket),
        )?;
        let flat: Vec<i64> = profile.iter().flatten().copied().collect();
        let rep = zmono(cfg.quiver, cfg.nk, &flat);
        let mut stab: i64 = 1;
        for exps in &profile {
            let mut run = 1;
            for pair in exps.windows(2) {
                if pair[0] == pair[1] {
                    run += 1;
                    stab *= run;
                } else {
                    run = 1;
                }
            }
        }
        let m_rep = symmetrize(
            cfg.quiver,
            cfg.side,
            cfg.nk,
            &RatFun::from_poly(LaurentPoly::monomial(Rational::from_integer(1.into()), rep)),
        )?
        .scale(&Rational::new(1.into(), stab.into()));
        let (left_cartan, right_cartan) = if cfg.cartan_left {
            (word, CartanWord::unit())
        } else {
            (CartanWord::unit(), word)
        };
        out.push(TensorSummand {
            coeff: cfg.coeff.clone(),
            left_cartan,
            left,
            right_cartan,
            right: m_rep,
        });
    }
    Ok(out)
}

/// The displayed coproduct through depth `order`: for each split the
/// kernel reciprocals are expanded with every left variable much smaller
/// than every right variable, the Cartan current of the appropriate leg is
/// kept through mode `order`, and all terms whose combined mode-and-series
/// depth exceeds `order` are discarded. The extreme split with no kernel
/// factor is exact: `F ⊗ 1` on the positive side, `1 ⊗ F` on the negative.
pub fn coproduct_full(f: &ShuffleElement, order: i64) -> Result<TensorElement, HopfError> {
    if order < 0 {
        return Err(HopfError::NegativeOrder(order));
    }
    let quiver = f.quiver().clone();
    let side = f.side();
    let n = f.hdeg().clone();
    let aux = aux_sym();
    let coeff = RatFun::from_poly(LaurentPoly::one())
        .div(&RatFun::from_poly(f.poly().den().clone()))?;
    let mut series_cache: BTreeMap<(usize, usize), (i64, Vec<LaurentPoly>)> = BTreeMap::new();
    let mut summands = Vec::new();
    for k in n.sub_vectors() {
        let nk = n.sub(&k);
        let sv = split_vars(&quiver, &n, &k);
        let mut big = f.poly().num().rename(&sv.rename);
        let mut hmap = BTreeMap::new();
        match side {
            Side::Positive => {
                for (w, j, _) in &sv.right {
                    let label = quiver.node_label(*j);
                    for p in 0..=order {
                        hmap.insert(hsym(label, p), (*j, p));
                    }
                    big = prune_aux(big.mul(&current_factor(label, w, -1, &aux, order)), &aux, order);
                }
            }
            Side::Negative => {
                for (u, i) in &sv.left {
                    let label = quiver.node_label(*i);
                    for p in 0..=order {
                        hmap.insert(hsym(label, p), (*i, p));
                    }
                    big = prune_aux(big.mul(&current_factor(label, u, 1, &aux, order)), &aux, order);
                }
            }
        }
        for (u, ci) in &sv.left {
            for (w, cj, _) in &sv.right {
                let key = (*cj, *ci);
                if !series_cache.contains_key(&key) {
                    series_cache.insert(key, pair_series(&quiver, key.0, key.1, side, order)?);
                }
                let (val, coeffs) = &series_cache[&key];
                big = prune_aux(
                    big.mul(&series_factor(coeffs, *val, u, w, &aux)),
                    &aux,
                    order,
                );
            }
        }
        let cfg = SummandSplit {
            quiver: &quiver,
            side,
            k: &k,
            nk: &nk,
            sv: &sv,
            coeff: coeff.clone(),
            hmap,
            hside: side,
            fixed_word: CartanWord::unit(),
            cartan_left: side == Side::Positive,
            left_vdeg: None,
        };
        summands.extend(split_summands(&cfg, &big, &aux)?);
    }
    let truncation = if n.is_zero() {
        Truncation::Exact
    } else {
        Truncation::Order(order)
    };
    TensorElement::new(quiver, summands, truncation, CartanPrefactor::None)
}

fn format_slope(m: &Slope) -> String {
    let parts: Vec<String> = m.entries.iter().map(|r| r.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

/// The exact slope coproduct of an element of the slope-`m` subalgebra.
///
/// Positive side: for each split, the right variables are scaled by a
/// large parameter and the coefficient of its critical power, normalized
/// by the leading behavior of the kernel, is extracted exactly; the
/// zero-mode word `h_{n-k}` decorates the left leg. Negative side: the
/// kernel reciprocals are expanded exactly through the finite depth the
/// slope bound allows, the component with left vertical degree `-m·k` is
/// selected, and the zero-mode word `h_{-k}` decorates the right leg.
/// Splits where the slope pairing is not an integer contribute nothing.
pub fn coproduct_slope(f: &ShuffleElement, m: &Slope) -> Result<TensorElement, HopfError> {
    let quiver = f.quiver().clone();
    let side = f.side();
    match side {
        Side::Positive => {
            if !slope_leq(f, m) {
                return Err(HopfError::SlopeTestFailed {
                    test: "slope_leq",
                    slope: format_slope(m),
                });
            }
        }
        Side::Negative => {
            if !slope_geq(f, m) {
                return Err(HopfError::SlopeTestFailed {
                    test: "slope_geq",
                    slope: format_slope(m),
                });
            }
        }
    }
    if !naive_slope_eq(f, m)? {
        return Err(HopfError::SlopeTestFailed {
            test: "naive_slope_eq",
            slope: format_slope(m),
        });
    }
    let n = f.hdeg().clone();
    let aux = aux_sym();
    let mut series_cache: BTreeMap<(usize, usize), (i64, Vec<LaurentPoly>)> = BTreeMap::new();
    let mut summands = Vec::new();
    for k in n.sub_vectors() {
        let nk = n.sub(&k);
        let sv = split_vars(&quiver, &n, &k);
        match side {
            Side::Positive => {
                let Some(mnk) = m.dot_int(&nk) else { continue };
                let dtot = d_tot(&quiver, &k, &nk);
                let renamed = f.poly().rename(&sv.rename);
                let xi = Sym::new("xi__");
                let mut scaling = BTreeMap::new();
                for (w, _, _) in &sv.right {
                    let value = Mono::from_exps([(xi.clone(), 1), (w.clone(), 1)]);
                    scaling.insert(w.clone(), (Rational::from_integer(1.into()), value));
                }
                let expr = renamed.substitute(&scaling)?;
                let lead = limit_leading(&expr, &xi, ExpansionPoint::Infinity, mnk + dtot)?;
                if lead.is_zero() {
                    continue;
                }
                let mut norm_mono = Mono::one();
                let mut norm_fun = RatFun::one();
                for (u, ci) in &sv.left {
                    for (w, cj, _) in &sv.right {
                        let d = quiver.arrow_count(*cj, *ci) + quiver.arrow_count(*ci, *cj);
                        norm_mono = norm_mono
                            .mul(&Mono::from_exps([(w.clone(), d), (u.clone(), -d)]));
                        norm_fun = norm_fun.mul(&zeta_lead(&quiver, *cj, *ci));
                    }
                }
                let term = lead.div(&norm_fun.mul_mono(&norm_mono))?;
                let legvars: BTreeSet<Sym> = sv
                    .left
                    .iter()
                    .map(|(s, _)| s.clone())
                    .chain(sv.right.iter().map(|(s, _, _)| s.clone()))
                    .collect();
                let (num, den) = split_ratfun(&term, &legvars)?;
                let cfg = SummandSplit {
                    quiver: &quiver,
                    side,
                    k: &k,
                    nk: &nk,
                    sv: &sv,
                    coeff: RatFun::from_poly(LaurentPoly::one())
                        .div(&RatFun::from_poly(den))?,
                    hmap: BTreeMap::new(),
                    hside: Side::Positive,
                    fixed_word: CartanWord::zero_modes(Side::Positive, &nk),
                    cartan_left: true,
                    left_vdeg: None,
                };
                summands.extend(split_summands(&cfg, &num, &aux)?);
            }
            Side::Negative => {
                let Some(mk) = m.dot_int(&k) else { continue };
                let dtot = d_tot(&quiver, &k, &nk);
                let mut big = f.poly().num().rename(&sv.rename);
                for (u, ci) in &sv.left {
                    for (w, cj, _) in &sv.right {
                        let key = (*cj, *ci);
                        if !series_cache.contains_key(&key) {
                            series_cache
                                .insert(key, pair_series(&quiver, key.0, key.1, side, dtot)?);
                        }
                        let (val, coeffs) = &series_cache[&key];
                        big = prune_aux(
                            big.mul(&series_factor(coeffs, *val, u, w, &aux)),
                            &aux,
                            dtot,
                        );
                    }
                }
                let cfg = SummandSplit {
                    quiver: &quiver,
                    side,
                    k: &k,
                    nk: &nk,
                    sv: &sv,
                    coeff: RatFun::from_poly(LaurentPoly::one())
                        .div(&RatFun::from_poly(f.poly().den().clone()))?,
                    hmap: BTreeMap::new(),
                    hside: Side::Negative,
                    fixed_word: CartanWord::zero_modes(Side::Negative, &k),
                    cartan_left: false,
                    left_vdeg: Some(-mk),
                };
                summands.extend(split_summands(&cfg, &big, &aux)?);
            }
        }
    }
    TensorElement::new(quiver, summands, Truncation::Exact, CartanPrefactor::None)
}

/// Splits a rational function whose denominator is a monomial in the leg
/// variables times a parameter polynomial into that numerator-with-monomial
/// and the parameter denominator.
fn split_ratfun(
    f: &RatFun,
    legvars: &BTreeSet<Sym>,
) -> Result<(LaurentPoly, LaurentPoly), HopfError> {
    let den = f.den();
    let min = den.min_exponents();
    let shift = Mono::from_exps(
        min.iter()
            .filter(|(s, _)| legvars.contains(*s))
            .map(|(s, e)| (s.clone(), e)),
    );
    let den_rest = den.mul_mono(&shift.pow(-1));
    if den_rest.symbols().iter().any(|s| legvars.contains(s)) {
        return Err(HopfError::Internal(
            "denominator does not factor as a leg monomial times parameters".into(),
        ));
    }
    Ok((f.num().mul_mono(&shift.pow(-1)), den_rest))
}

/// Duplicates a Cartan word: decorations are group-like, so the coproduct
/// of a word is the word on both legs.
pub fn coproduct_cartan(quiver: &Quiver, word: &CartanWord) -> Result<TensorElement, HopfError> {
    let unit = ShuffleElement::unit(quiver.clone(), word.side());
    TensorElement::new(
        quiver.clone(),
        vec![TensorSummand {
            coeff: RatFun::one(),
            left_cartan: word.clone(),
            left: unit.clone(),
            right_cartan: word.clone(),
            right: unit,
        }],
        Truncation::Exact,
        CartanPrefactor::None,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse_ratfun;
    use crate::shuffle::shuffle_product;

    fn gen(quiver: &Quiver, side: Side, d: i64) -> ShuffleElement {
        ShuffleElement::generator(quiver.clone(), side, 0, d)
    }

    fn expect_tensor(
        quiver: &Quiver,
        summands: Vec<TensorSummand>,
        truncation: Truncation,
    ) -> TensorElement {
        TensorElement::new(quiver.clone(), summands, truncation, CartanPrefactor::None).unwrap()
    }

    #[test]
    fn positive_generator_coproduct() {
        let q = Quiver::a1();
        let f = gen(&q, Side::Positive, 2);
        let got = coproduct_full(&f, 3).unwrap();
        let unit = ShuffleElement::unit(q.clone(), Side::Positive);
        let mut expected = vec![TensorSummand {
            coeff: RatFun::one(),
            left_cartan: CartanWord::unit(),
            left: f.clone(),
            right_cartan: CartanWord::unit(),
            right: unit.clone(),
        }];
        for p in 0..=3 {
            expected.push(TensorSummand {
                coeff: RatFun::one(),
                left_cartan: CartanWord::mode(Side::Positive, 0, p, 1).unwrap(),
                left: unit.clone(),
                right_cartan: CartanWord::unit(),
                right: gen(&q, Side::Positive, 2 - p),
            });
        }
        let want = expect_tensor(&q, expected, Truncation::Order(3));
        assert!(got.equals(&want));
        assert_eq!(got.truncation(), Truncation::Order(3));
    }

    #[test]
    fn negative_generator_coproduct() {
        let q = Quiver::a1();
        let f = gen(&q, Side::Negative, 1);
        let got = coproduct_full(&f, 2).unwrap();
        let unit = ShuffleElement::unit(q.clone(), Side::Negative);
        let mut expected = vec![TensorSummand {
            coeff: RatFun::one(),
            left_cartan: CartanWord::unit(),
            left: unit.clone(),
            right_cartan: CartanWord::unit(),
            right: f.clone(),
        }];
        for p in 0..=2 {
            expected.push(TensorSummand {
                coeff: RatFun::one(),
                left_cartan: CartanWord::unit(),
                left: gen(&q, Side::Negative, 1 + p),
                right_cartan: CartanWord::mode(Side::Negative, 0, p, 1).unwrap(),
                right: unit.clone(),
            });
        }
        let want = expect_tensor(&q, expected, Truncation::Order(2));
        assert!(got.equals(&want));
    }

    #[test]
    fn coproduct_of_unit_is_exact() {
        let q = Quiver::jordan();
        let f = ShuffleElement::unit(q.clone(), Side::Positive);
        let got = coproduct_full(&f, 5).unwrap();
        assert_eq!(got.truncation(), Truncation::Exact);
        assert!(got.equals(&TensorElement::one(q, Side::Positive)));
    }

    #[test]
    fn rejects_negative_order() {
        let q = Quiver::a1();
        let f = gen(&q, Side::Positive, 0);
        assert!(matches!(
            coproduct_full(&f, -1),
            Err(HopfError::NegativeOrder(-1))
        ));
    }

    #[test]
    fn slope_coproduct_of_generator() {
        let q = Quiver::a1();
        let f = gen(&q, Side::Positive, 3);
        let m = Slope::uniform(q.node_count(), Rational::from_integer(3.into()));
        let got = coproduct_slope(&f, &m).unwrap();
        let unit = ShuffleElement::unit(q.clone(), Side::Positive);
        let want = expect_tensor(
            &q,
            vec![
                TensorSummand {
                    coeff: RatFun::one(),
                    left_cartan: CartanWord::zero_modes(Side::Positive, &DimVector::new(vec![1])),
                    left: unit.clone(),
                    right_cartan: CartanWord::unit(),
                    right: f.clone(),
                },
                TensorSummand {
                    coeff: RatFun::one(),
                    left_cartan: CartanWord::unit(),
                    left: f.clone(),
                    right_cartan: CartanWord::unit(),
                    right: unit.clone(),
                },
            ],
            Truncation::Exact,
        );
        assert!(got.equals(&want));
        assert_eq!(got.truncation(), Truncation::Exact);
    }

    #[test]
    fn slope_coproduct_of_negative_generator() {
        let q = Quiver::jordan();
        let f = gen(&q, Side::Negative, 0);
        let m = Slope::uniform(q.node_count(), Rational::from_integer(0.into()));
        let got = coproduct_slope(&f, &m).unwrap();
        let unit = ShuffleElement::unit(q.clone(), Side::Negative);
        let want = expect_tensor(
            &q,
            vec![
                TensorSummand {
                    coeff: RatFun::one(),
                    left_cartan: CartanWord::unit(),
                    left: unit.clone(),
                    right_cartan: CartanWord::unit(),
                    right: f.clone(),
                },
                TensorSummand {
                    coeff: RatFun::one(),
                    left_cartan: CartanWord::unit(),
                    left: f.clone(),
                    right_cartan: CartanWord::zero_modes(Side::Negative, &DimVector::new(vec![1])),
                    right: unit.clone(),
                },
            ],
            Truncation::Exact,
        );
        assert!(got.equals(&want));
    }

    #[test]
    fn slope_coproduct_of_unit() {
        let q = Quiver::jordan();
        let f = ShuffleElement::unit(q.clone(), Side::Positive);
        let m = Slope::uniform(q.node_count(), Rational::from_integer(0.into()));
        let got = coproduct_slope(&f, &m).unwrap();
        assert!(got.equals(&TensorElement::one(q, Side::Positive)));
    }

    #[test]
    fn slope_precondition_failure_names_the_test() {
        let q = Quiver::a1();
        let f = gen(&q, Side::Positive, 1);
        let m = Slope::uniform(q.node_count(), Rational::from_integer(0.into()));
        match coproduct_slope(&f, &m) {
            Err(HopfError::SlopeTestFailed { test, .. }) => {
                assert!(test == "slope_leq" || test == "naive_slope_eq");
            }
            other => panic!("expected a slope failure, got {other:?}"),
        }
    }

    #[test]
    fn a1_middle_term_matches_display() {
        let q = Quiver::a1();
        let e0 = gen(&q, Side::Positive, 0);
        let f = shuffle_product(&e0, &e0).unwrap();
        let m = Slope::uniform(q.node_count(), Rational::from_integer(0.into()));
        let got = coproduct_slope(&f, &m).unwrap();
        let z0 = gen(&q, Side::Positive, 0);
        let coeff = parse_ratfun("q+1").unwrap();
        let middle = TensorSummand {
            coeff,
            left_cartan: CartanWord::zero_modes(Side::Positive, &DimVector::new(vec![1])),
            left: z0.clone(),
            right_cartan: CartanWord::unit(),
            right: z0.clone(),
        };
        let unit = ShuffleElement::unit(q.clone(), Side::Positive);
        let want = expect_tensor(
            &q,
            vec![
                TensorSummand {
                    coeff: RatFun::one(),
                    left_cartan: CartanWord::zero_modes(Side::Positive, &DimVector::new(vec![2])),
                    left: unit.clone(),
                    right_cartan: CartanWord::unit(),
                    right: f.clone(),
                },
                middle,
                TensorSummand {
                    coeff: RatFun::one(),
                    left_cartan: CartanWord::unit(),
                    left: f.clone(),
                    right_cartan: CartanWord::unit(),
                    right: unit.clone(),
                },
            ],
            Truncation::Exact,
        );
        assert!(got.equals(&want));
    }

    #[test]
    fn a1_middle_term_appears_in_full_coproduct() {
        let q = Quiver::a1();
        let e0 = gen(&q, Side::Positive, 0);
        let f = shuffle_product(&e0, &e0).unwrap();
        let full = coproduct_full(&f, 2).unwrap();
        let m = Slope::uniform(q.node_count(), Rational::from_integer(0.into()));
        let slope = coproduct_slope(&f, &m).unwrap();
        let full_map = full.canonical_map();
        let slope_map = slope.canonical_map();
        let one = DimVector::new(vec![1]);
        let key = (
            CartanWord::zero_modes(Side::Positive, &one),
            CartanWord::unit(),
            one.clone(),
            one.clone(),
        );
        assert_eq!(full_map.get(&key), slope_map.get(&key));
        assert!(slope_map.contains_key(&key));
    }

    #[test]
    fn jordan_negative_slope_component_sits_inside_full() {
        let q = Quiver::jordan();
        let f0 = gen(&q, Side::Negative, 0);
        let g = shuffle_product(&f0, &f0).unwrap();
        let m = Slope::uniform(q.node_count(), Rational::from_integer(0.into()));
        let slope = coproduct_slope(&g, &m).unwrap();
        let full = coproduct_full(&g, 3).unwrap();
        let full_map = full.canonical_map();
        let one = DimVector::new(vec![1]);
        let key = (
            CartanWord::unit(),
            CartanWord::zero_modes(Side::Negative, &one),
            one.clone(),
            one.clone(),
        );
        let slope_map = slope.canonical_map();
        let slope_val = slope_map.get(&key).expect("middle component present");
        let full_val = full_map.get(&key).expect("full coproduct has the key");
        // The slope component is the left-degree-0 part of the full entry.
        let lvar = Sym::new("L__z_1_1");
        let mut selected = LaurentPoly::zero();
        for (mono, c) in full_val.num().terms() {
            if mono.exp(&lvar) == 0 {
                selected.add_term(mono.clone(), c.clone());
            }
        }
        let selected = RatFun::from_poly(selected)
            .div(&RatFun::from_poly(full_val.den().clone()))
            .unwrap();
        assert_eq!(&selected, slope_val);
    }

    #[test]
    fn cartan_words_duplicate() {
        let q = Quiver::jordan();
        let w = CartanWord::mode(Side::Positive, 0, 0, 1).unwrap();
        let got = coproduct_cartan(&q, &w).unwrap();
        let map = got.canonical_map();
        assert_eq!(map.len(), 1);
        let key = map.keys().next().unwrap();
        assert_eq!(key.0, w);
        assert_eq!(key.1, w);
    }

    #[test]
    fn kernel_series_leads_match_closed_forms() {
        for q in [Quiver::a1(), Quiver::jordan()] {
            for r in 0..q.node_count() {
                for l in 0..q.node_count() {
                    let (val, coeffs) = pair_series(&q, r, l, Side::Positive, 2).unwrap();
                    assert_eq!(val, q.arrow_count(r, l) + q.arrow_count(l, r));
                    let lead = zeta_lead(&q, r, l).recip().unwrap();
                    assert_eq!(RatFun::from_poly(coeffs[0].clone()), lead);
                    let (nval, ncoeffs) = pair_series(&q, r, l, Side::Negative, 2).unwrap();
                    assert_eq!(nval, 0);
                    assert!(ncoeffs[0].is_one());
                }
            }
        }
    }

    #[test]
    fn jordan_negative_kernel_first_coefficient() {
        let q = Quiver::jordan();
        let (_, coeffs) = pair_series(&q, 0, 0, Side::Negative, 1).unwrap();
        let expect = parse_ratfun("1/q + t + q/t - 1").unwrap();
        assert_eq!(RatFun::from_poly(coeffs[1].clone()), expect);
    }
}
