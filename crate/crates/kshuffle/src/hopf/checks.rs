//! Structural checks: primitivity, generation by primitives,
//! compatibility of product and coproduct, coassociativity, and
//! quasi-triangularity of the truncated slope R-matrix.
//!
//! Every check reduces to exact linear algebra over the parameter field:
//! tensors are flattened to canonical coordinates, subspaces are compared
//! by rank, and each identity is verified coefficient by coefficient.

use super::coproduct::{coproduct_full, coproduct_slope};
use super::gram::gram_and_dual;
use super::pairing::{pair_decorated, pair_with, z_coords, PairingOptions};
use super::tensor::{CartanPrefactor, TensorElement, TensorSummand, Truncation};
use super::{CartanWord, HopfError};
use crate::exactalg::{linalg, Mono, RatFun, Sym};
use crate::quiver::{zvars, DimVector, Quiver, Slope};
use crate::shuffle::{shuffle_product, slope_basis, Side, ShuffleElement};
use std::collections::{BTreeMap, BTreeSet};

fn param_set(quiver: &Quiver) -> BTreeSet<Sym> {
    let mut params = BTreeSet::new();
    params.insert(Sym::new("q"));
    for e in quiver.edges() {
        params.insert(e.param.clone());
    }
    params
}

/// Splits a rational function with parameter-only denominator into
/// coordinates keyed by the non-parameter part of each monomial.
fn variable_coords(f: &RatFun, params: &BTreeSet<Sym>) -> BTreeMap<Mono, RatFun> {
    let den = RatFun::from_poly(f.den().clone());
    let mut out: BTreeMap<Mono, RatFun> = BTreeMap::new();
    for (m, c) in f.num().terms() {
        let mut zpart = Vec::new();
        let mut rest = Vec::new();
        for (s, e) in m.iter() {
            if params.contains(s) {
                rest.push((s.clone(), e));
            } else {
                zpart.push((s.clone(), e));
            }
        }
        let coeff = RatFun::from_rational(c.clone())
            .mul_mono(&Mono::from_exps(rest))
            .div(&den)
            .expect("denominator is nonzero");
        let slot = out.entry(Mono::from_exps(zpart)).or_insert_with(RatFun::zero);
        *slot = slot.add(&coeff);
    }
    out.retain(|_, v| !v.is_zero());
    out
}

type TensorKey = (CartanWord, CartanWord, DimVector, DimVector);

/// Flattens a tensor to exact coordinates suitable for linear algebra.
fn tensor_coords(t: &TensorElement) -> BTreeMap<(TensorKey, Mono), RatFun> {
    let params = param_set(t.quiver());
    let mut out = BTreeMap::new();
    for (key, value) in t.canonical_map() {
        for (m, c) in variable_coords(&value, &params) {
            out.insert((key.clone(), m), c);
        }
    }
    out
}

/// Basis vectors of the kernel of the matrix with the given rows.
fn kernel_basis(rows: &[Vec<RatFun>], ncols: usize) -> Vec<Vec<RatFun>> {
    let mut work: Vec<Vec<RatFun>> = rows.to_vec();
    let pivots = linalg::rref(&mut work, ncols);
    let pivot_set: BTreeSet<usize> = pivots.iter().copied().collect();
    let mut out = Vec::new();
    for free in 0..ncols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut x = vec![RatFun::zero(); ncols];
        x[free] = RatFun::one();
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = work[r][free].mul(&RatFun::from_int(-1));
        }
        out.push(x);
    }
    out
}

/// Rank of a family of coordinate vectors.
fn coord_rank(vectors: &[BTreeMap<Mono, RatFun>]) -> usize {
    let mut keys: BTreeSet<Mono> = BTreeSet::new();
    for v in vectors {
        keys.extend(v.keys().cloned());
    }
    let keys: Vec<Mono> = keys.into_iter().collect();
    let rows: Vec<Vec<RatFun>> = vectors
        .iter()
        .map(|v| {
            keys.iter()
                .map(|k| v.get(k).cloned().unwrap_or_else(RatFun::zero))
                .collect()
        })
        .collect();
    linalg::rank(rows)
}

/// The expected coproduct of a primitive element: `F ⊗ 1 + h ⊗ F` on the
/// positive side, `1 ⊗ F + F ⊗ h` on the negative side.
fn primitive_shape(f: &ShuffleElement) -> Result<TensorElement, HopfError> {
    let quiver = f.quiver().clone();
    let unit = ShuffleElement::unit(quiver.clone(), f.side());
    let summands = match f.side() {
        Side::Positive => vec![
            TensorSummand {
                coeff: RatFun::one(),
                left_cartan: CartanWord::unit(),
                left: f.clone(),
                right_cartan: CartanWord::unit(),
                right: unit.clone(),
            },
            TensorSummand {
                coeff: RatFun::one(),
                left_cartan: CartanWord::zero_modes(Side::Positive, f.hdeg()),
                left: unit,
                right_cartan: CartanWord::unit(),
                right: f.clone(),
            },
        ],
        Side::Negative => vec![
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
                right_cartan: CartanWord::zero_modes(Side::Negative, f.hdeg()),
                right: unit,
            },
        ],
    };
    TensorElement::new(quiver, summands, Truncation::Exact, CartanPrefactor::None)
}

/// Whether the slope coproduct of `f` has the primitive shape. The unit
/// is group-like, not primitive.
pub fn primitive_check(f: &ShuffleElement, m: &Slope) -> Result<bool, HopfError> {
    if f.hdeg().is_zero() {
        return Ok(false);
    }
    let got = coproduct_slope(f, m)?;
    Ok(got.equals(&primitive_shape(f)?))
}

fn dim_vectors_up_to(nodes: usize, cutoff: i64) -> Vec<DimVector> {
    let mut out = Vec::new();
    let mut current = vec![0i64; nodes];
    fn recurse(pos: usize, budget: i64, current: &mut Vec<i64>, out: &mut Vec<DimVector>) {
        if pos == current.len() {
            out.push(DimVector::new(current.clone()));
            return;
        }
        for c in 0..=budget {
            current[pos] = c;
            recurse(pos + 1, budget - c, current, out);
        }
        current[pos] = 0;
    }
    recurse(0, cutoff, &mut current, &mut out);
    out.sort_by_key(|n| (n.total(), n.entries.clone()));
    out
}

/// All splittings `n = a + b` into componentwise nonnegative parts.
fn splittings(n: &DimVector) -> Vec<(DimVector, DimVector)> {
    let mut out = Vec::new();
    let mut current = vec![0i64; n.entries.len()];
    fn recurse(
        n: &DimVector,
        pos: usize,
        current: &mut Vec<i64>,
        out: &mut Vec<(DimVector, DimVector)>,
    ) {
        if pos == current.len() {
            let a = DimVector::new(current.clone());
            let b = n.sub(&a);
            out.push((a, b));
            return;
        }
        for c in 0..=n.entries[pos] {
            current[pos] = c;
            recurse(n, pos + 1, current, out);
        }
        current[pos] = 0;
    }
    recurse(n, 0, &mut current, &mut out);
    out
}

/// Coefficient vectors of the primitive elements inside the given basis of
/// one slope piece.
fn primitive_kernel(
    basis: &[ShuffleElement],
    m: &Slope,
) -> Result<Vec<Vec<RatFun>>, HopfError> {
    let mut columns = Vec::new();
    for e in basis {
        let got = coproduct_slope(e, m)?;
        let defect = got.add(&primitive_shape(e)?.scale(&RatFun::from_int(-1))?)?;
        columns.push(tensor_coords(&defect));
    }
    let mut keys: BTreeSet<(TensorKey, Mono)> = BTreeSet::new();
    for c in &columns {
        keys.extend(c.keys().cloned());
    }
    let rows: Vec<Vec<RatFun>> = keys
        .iter()
        .map(|k| {
            columns
                .iter()
                .map(|c| c.get(k).cloned().unwrap_or_else(RatFun::zero))
                .collect()
        })
        .collect();
    Ok(kernel_basis(&rows, basis.len()))
}

/// Whether every slope piece of total degree at most `cutoff` is spanned
/// by products of smaller pieces together with primitive elements.
pub fn primitives_generate(
    quiver: &Quiver,
    m: &Slope,
    cutoff: i64,
) -> Result<bool, HopfError> {
    let mut bases: BTreeMap<DimVector, Vec<ShuffleElement>> = BTreeMap::new();
    for n in dim_vectors_up_to(quiver.node_count(), cutoff) {
        if n.is_zero() || m.dot_int(&n).is_none() {
            continue;
        }
        let piece = slope_basis(quiver, Side::Positive, m, &n)?;
        bases.insert(n, piece.basis);
    }
    for (n, basis) in &bases {
        if basis.is_empty() {
            continue;
        }
        let mut vectors = Vec::new();
        for (a, b) in splittings(n) {
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let (Some(ba), Some(bb)) = (bases.get(&a), bases.get(&b)) else {
                continue;
            };
            for ea in ba {
                for eb in bb {
                    vectors.push(z_coords(&shuffle_product(ea, eb)?));
                }
            }
        }
        for x in primitive_kernel(basis, m)? {
            let mut acc =
                ShuffleElement::zero(quiver.clone(), Side::Positive, n.clone());
            for (c, e) in x.iter().zip(basis.iter()) {
                acc = acc.add(&e.scale_fun(c)?)?;
            }
            vectors.push(z_coords(&acc));
        }
        if coord_rank(&vectors) < basis.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Verifies both halves of quasi-triangularity for the truncated slope
/// R-matrix: for every basis element the slope coproduct matches the sum
/// dictated by the pairing against products of dual basis elements.
pub fn quasi_triangularity_check(
    quiver: &Quiver,
    m: &Slope,
    cutoff: i64,
) -> Result<bool, HopfError> {
    let opts = PairingOptions::default();
    let mut tables = BTreeMap::new();
    for n in dim_vectors_up_to(quiver.node_count(), cutoff) {
        if m.dot_int(&n).is_none() {
            continue;
        }
        tables.insert(n.clone(), gram_and_dual(quiver, m, &n, &opts)?);
    }
    for (n, table) in &tables {
        if n.is_zero() {
            continue;
        }
        for (e, fdual) in table.positive.iter().zip(table.duals.iter()) {
            let mut qt1 = Vec::new();
            let mut qt2 = Vec::new();
            for (na, nb) in splittings(n) {
                let (Some(ta), Some(tb)) = (tables.get(&na), tables.get(&nb)) else {
                    continue;
                };
                for (ea, fa) in ta.positive.iter().zip(ta.duals.iter()) {
                    for (eb, fb) in tb.positive.iter().zip(tb.duals.iter()) {
                        let c1 = pair_with(e, &shuffle_product(fa, fb)?, &opts)?;
                        if !c1.is_zero() {
                            qt1.push(TensorSummand {
                                coeff: c1,
                                left_cartan: CartanWord::zero_modes(Side::Positive, &nb),
                                left: ea.clone(),
                                right_cartan: CartanWord::unit(),
                                right: eb.clone(),
                            });
                        }
                        let c2 = pair_with(&shuffle_product(ea, eb)?, fdual, &opts)?;
                        if !c2.is_zero() {
                            qt2.push(TensorSummand {
                                coeff: c2,
                                left_cartan: CartanWord::unit(),
                                left: fb.clone(),
                                right_cartan: CartanWord::zero_modes(Side::Negative, &nb),
                                right: fa.clone(),
                            });
                        }
                    }
                }
            }
            let expect1 = TensorElement::new(
                quiver.clone(),
                qt1,
                Truncation::Exact,
                CartanPrefactor::None,
            )?;
            if !coproduct_slope(e, m)?.equals(&expect1) {
                return Ok(false);
            }
            let expect2 = TensorElement::new(
                quiver.clone(),
                qt2,
                Truncation::Exact,
                CartanPrefactor::None,
            )?;
            if !coproduct_slope(fdual, m)?.equals(&expect2) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Truncation depth needed for the compatibility check: deep enough that
/// every monomial whose left vertical degree can cancel a component of
/// `f` survives the pruning.
fn needed_order(f: &ShuffleElement, h: &ShuffleElement) -> i64 {
    let n = h.hdeg().total();
    if n <= 1 {
        return 0;
    }
    let mut min_e = 0i64;
    for (s, _) in zvars(h.quiver(), h.hdeg()) {
        if let Some((lo, _)) = h.poly().num().exp_range(&s) {
            min_e = min_e.min(lo);
        }
    }
    let mut needed = 0i64;
    for (v, _) in f.vdeg_components() {
        for k in 1..n {
            needed = needed.max(-v - k * min_e);
        }
    }
    needed
}

/// Verifies `⟨F G, H⟩ = Σ ⟨F, H'⟩ ⟨G, H''⟩` over the truncated coproduct
/// of `H`; only summands whose decorations are pure zero modes can
/// contribute, so the identity is insensitive to the Cartan
/// normalization.
pub fn bialgebra_check(
    f: &ShuffleElement,
    g: &ShuffleElement,
    h: &ShuffleElement,
    order: i64,
) -> Result<bool, HopfError> {
    if f.side() != Side::Positive || g.side() != Side::Positive {
        return Err(HopfError::WrongSide {
            expected: Side::Positive,
        });
    }
    if h.side() != Side::Negative {
        return Err(HopfError::WrongSide {
            expected: Side::Negative,
        });
    }
    let needed = needed_order(f, h);
    if order < needed {
        return Err(HopfError::InsufficientOrder {
            needed,
            got: order,
        });
    }
    let opts = PairingOptions::default();
    let lhs = pair_with(&shuffle_product(f, g)?, h, &opts)?;
    let unit = CartanWord::unit();
    let mut rhs = RatFun::zero();
    for s in coproduct_full(h, order)?.summands() {
        let a = pair_with(f, &s.left, &opts)?;
        if a.is_zero() {
            continue;
        }
        let b = pair_decorated((&unit, g), (&s.right, &s.right_cartan), &opts)?;
        rhs = rhs.add(&s.coeff.mul(&a).mul(&b));
    }
    Ok(lhs == rhs)
}

type Key3 = (
    CartanWord,
    CartanWord,
    CartanWord,
    DimVector,
    DimVector,
    DimVector,
);

fn leg_value(quiver: &Quiver, prefix: &str, leg: &ShuffleElement) -> RatFun {
    let mut rename = BTreeMap::new();
    for (z, _) in zvars(quiver, leg.hdeg()) {
        rename.insert(z.clone(), Sym::new(format!("{prefix}__{}", z.name())));
    }
    leg.poly().rename(&rename)
}

/// Verifies coassociativity of the slope coproduct on `f` by expanding
/// both iterates to three legs; decorations duplicate group-likely onto
/// the legs of the inner coproduct.
pub fn coassoc_check(f: &ShuffleElement, m: &Slope) -> Result<bool, HopfError> {
    let quiver = f.quiver().clone();
    let base = coproduct_slope(f, m)?;
    let mut left_route: BTreeMap<Key3, RatFun> = BTreeMap::new();
    let mut right_route: BTreeMap<Key3, RatFun> = BTreeMap::new();
    for s in base.summands() {
        let inner = coproduct_slope(&s.left, m)?;
        for t in inner.summands() {
            let key = (
                s.left_cartan.mul(&t.left_cartan)?,
                s.left_cartan.mul(&t.right_cartan)?,
                s.right_cartan.clone(),
                t.left.hdeg().clone(),
                t.right.hdeg().clone(),
                s.right.hdeg().clone(),
            );
            let value = s
                .coeff
                .mul(&t.coeff)
                .mul(&leg_value(&quiver, "A", &t.left))
                .mul(&leg_value(&quiver, "B", &t.right))
                .mul(&leg_value(&quiver, "C", &s.right));
            let slot = left_route.entry(key).or_insert_with(RatFun::zero);
            *slot = slot.add(&value);
        }
        let inner = coproduct_slope(&s.right, m)?;
        for t in inner.summands() {
            let key = (
                s.left_cartan.clone(),
                s.right_cartan.mul(&t.left_cartan)?,
                s.right_cartan.mul(&t.right_cartan)?,
                s.left.hdeg().clone(),
                t.left.hdeg().clone(),
                t.right.hdeg().clone(),
            );
            let value = s
                .coeff
                .mul(&t.coeff)
                .mul(&leg_value(&quiver, "A", &s.left))
                .mul(&leg_value(&quiver, "B", &t.left))
                .mul(&leg_value(&quiver, "C", &t.right));
            let slot = right_route.entry(key).or_insert_with(RatFun::zero);
            *slot = slot.add(&value);
        }
    }
    left_route.retain(|_, v| !v.is_zero());
    right_route.retain(|_, v| !v.is_zero());
    Ok(left_route == right_route)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, Rational};

    fn zero_slope(q: &Quiver) -> Slope {
        Slope::uniform(q.node_count(), Rational::from_integer(0.into()))
    }

    fn gen(q: &Quiver, side: Side, d: i64) -> ShuffleElement {
        ShuffleElement::generator(q.clone(), side, 0, d)
    }

    #[test]
    fn generators_are_primitive_at_their_own_slope() {
        let q = Quiver::a1();
        let m = Slope::uniform(1, rat(3));
        assert!(primitive_check(&gen(&q, Side::Positive, 3), &m).unwrap());
        let j = Quiver::jordan();
        let m0 = zero_slope(&j);
        assert!(primitive_check(&gen(&j, Side::Negative, 0), &m0).unwrap());
    }

    #[test]
    fn unit_and_products_are_not_primitive() {
        let q = Quiver::a1();
        let m = zero_slope(&q);
        let unit = ShuffleElement::unit(q.clone(), Side::Positive);
        assert!(!primitive_check(&unit, &m).unwrap());
        let e = gen(&q, Side::Positive, 0);
        let ee = shuffle_product(&e, &e).unwrap();
        assert!(!primitive_check(&ee, &m).unwrap());
    }

    #[test]
    fn jordan_low_degrees_are_generated_by_primitives() {
        let q = Quiver::jordan();
        let m = zero_slope(&q);
        assert!(primitives_generate(&q, &m, 2).unwrap());
    }

    #[test]
    fn empty_cutoff_is_vacuously_generated() {
        let q = Quiver::jordan();
        let m = zero_slope(&q);
        assert!(primitives_generate(&q, &m, 0).unwrap());
        assert!(quasi_triangularity_check(&q, &m, 0).unwrap());
    }

    #[test]
    fn jordan_zero_slope_is_quasi_triangular_in_rank_one() {
        let q = Quiver::jordan();
        let m = zero_slope(&q);
        assert!(quasi_triangularity_check(&q, &m, 1).unwrap());
    }

    #[test]
    fn a1_zero_slope_is_quasi_triangular_in_rank_two() {
        let q = Quiver::a1();
        let m = zero_slope(&q);
        assert!(quasi_triangularity_check(&q, &m, 2).unwrap());
    }

    #[test]
    fn product_pairs_as_the_coproduct_says() {
        let q = Quiver::a1();
        let e = gen(&q, Side::Positive, 0);
        let f = gen(&q, Side::Negative, 0);
        let ff = shuffle_product(&f, &f).unwrap();
        assert!(bialgebra_check(&e, &e, &ff, 2).unwrap());
    }

    #[test]
    fn compatibility_needs_enough_depth() {
        let q = Quiver::a1();
        let e = gen(&q, Side::Positive, 0);
        let h = shuffle_product(
            &gen(&q, Side::Negative, 1),
            &gen(&q, Side::Negative, -1),
        )
        .unwrap();
        let got = bialgebra_check(&e, &e, &h, 0);
        assert!(matches!(
            got,
            Err(HopfError::InsufficientOrder { needed: 1, got: 0 })
        ));
        assert!(bialgebra_check(&e, &e, &h, 1).unwrap());
    }

    #[test]
    fn counit_leg_drops_out() {
        let q = Quiver::jordan();
        let one = ShuffleElement::unit(q.clone(), Side::Positive);
        let e = gen(&q, Side::Positive, 0);
        let f = gen(&q, Side::Negative, 0);
        assert!(bialgebra_check(&one, &e, &f, 0).unwrap());
    }

    #[test]
    fn slope_coproduct_is_coassociative_on_a_primitive() {
        let q = Quiver::a1();
        let m = Slope::uniform(1, rat(2));
        assert!(coassoc_check(&gen(&q, Side::Positive, 2), &m).unwrap());
    }

    #[test]
    fn slope_coproduct_is_coassociative_on_a_product() {
        let q = Quiver::a1();
        let m = zero_slope(&q);
        let e = gen(&q, Side::Positive, 0);
        let ee = shuffle_product(&e, &e).unwrap();
        assert!(coassoc_check(&ee, &m).unwrap());
        let f = gen(&q, Side::Negative, 0);
        let ff = shuffle_product(&f, &f).unwrap();
        assert!(coassoc_check(&ff, &m).unwrap());
    }

    #[test]
    fn coassociativity_of_the_unit() {
        let q = Quiver::jordan();
        let m = zero_slope(&q);
        let unit = ShuffleElement::unit(q.clone(), Side::Positive);
        assert!(coassoc_check(&unit, &m).unwrap());
    }
}
