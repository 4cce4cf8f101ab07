//! Gram matrices, dual bases, and the truncated slope R-matrix.
//!
//! For a slope and a horizontal degree with integral vertical degree, the
//! positive and negative slope subspaces are paired basis against basis;
//! inverting the resulting Gram matrix produces the right dual basis, and
//! summing `basis element ⊗ dual` over all degrees up to a cutoff gives
//! the truncated R-matrix with its symbolic Cartan prefactor.

use super::pairing::{pair_with, PairingOptions};
use super::tensor::{CartanPrefactor, TensorElement, TensorSummand, Truncation};
use super::{CartanWord, HopfError};
use crate::exactalg::{linalg, RatFun};
use crate::quiver::{DimVector, Quiver, Slope};
use crate::shuffle::{slope_basis, Side, ShuffleElement};

/// Paired slope bases in one horizontal degree.
#[derive(Debug, Clone)]
pub struct PairingTable {
    pub slope: Slope,
    pub hdeg: DimVector,
    /// Positive slope basis.
    pub positive: Vec<ShuffleElement>,
    /// Negative slope basis.
    pub negative: Vec<ShuffleElement>,
    /// `gram[a][b] = ⟨positive[a], negative[b]⟩`.
    pub gram: Vec<Vec<RatFun>>,
    /// Right dual basis: `⟨positive[a], duals[b]⟩ = δ_ab`.
    pub duals: Vec<ShuffleElement>,
}

fn slope_label(m: &Slope, n: &DimVector) -> String {
    let entries: Vec<String> = m.entries.iter().map(|r| r.to_string()).collect();
    format!("slope ({}) at degree {}", entries.join(", "), n)
}

/// Pairs the two slope bases in degree `n` and inverts the Gram matrix.
pub fn gram_and_dual(
    quiver: &Quiver,
    m: &Slope,
    n: &DimVector,
    opts: &PairingOptions,
) -> Result<PairingTable, HopfError> {
    if m.dot_int(n).is_none() {
        return Err(HopfError::NonIntegralSlope(slope_label(m, n)));
    }
    let pos = slope_basis(quiver, Side::Positive, m, n)?;
    let neg = slope_basis(quiver, Side::Negative, m, n)?;
    if pos.basis.len() != neg.basis.len() {
        return Err(HopfError::SingularGram(format!(
            "{}: sides have dimensions {} and {}",
            slope_label(m, n),
            pos.basis.len(),
            neg.basis.len()
        )));
    }
    let mut gram = Vec::new();
    for e in &pos.basis {
        let mut row = Vec::new();
        for f in &neg.basis {
            row.push(pair_with(e, f, opts)?);
        }
        gram.push(row);
    }
    let duals = if gram.is_empty() {
        Vec::new()
    } else {
        let inv = linalg::invert(&gram)
            .ok_or_else(|| HopfError::SingularGram(slope_label(m, n)))?;
        let mut duals = Vec::new();
        for a in 0..neg.basis.len() {
            let mut acc = ShuffleElement::zero(quiver.clone(), Side::Negative, n.clone());
            for (b, f) in neg.basis.iter().enumerate() {
                acc = acc.add(&f.scale_fun(&inv[b][a])?)?;
            }
            duals.push(acc);
        }
        duals
    };
    Ok(PairingTable {
        slope: m.clone(),
        hdeg: n.clone(),
        positive: pos.basis,
        negative: neg.basis,
        gram,
        duals,
    })
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

/// The truncated slope R-matrix
/// `q^{Σ H⊗H} · Σ_n Σ_a  E_a ⊗ F̂^a`
/// over all degrees of total size at most `cutoff` with integral vertical
/// degree. The degree-zero term is `1 ⊗ 1`.
pub fn rmatrix(
    quiver: &Quiver,
    m: &Slope,
    cutoff: i64,
    opts: &PairingOptions,
) -> Result<TensorElement, HopfError> {
    if cutoff < 0 {
        return Err(HopfError::NegativeOrder(cutoff));
    }
    let mut summands = vec![TensorSummand {
        coeff: RatFun::one(),
        left_cartan: CartanWord::unit(),
        left: ShuffleElement::unit(quiver.clone(), Side::Positive),
        right_cartan: CartanWord::unit(),
        right: ShuffleElement::unit(quiver.clone(), Side::Negative),
    }];
    for n in dim_vectors_up_to(quiver.node_count(), cutoff) {
        if n.is_zero() || m.dot_int(&n).is_none() {
            continue;
        }
        let table = gram_and_dual(quiver, m, &n, opts)?;
        for (e, fdual) in table.positive.iter().zip(table.duals.iter()) {
            summands.push(TensorSummand {
                coeff: RatFun::one(),
                left_cartan: CartanWord::unit(),
                left: e.clone(),
                right_cartan: CartanWord::unit(),
                right: fdual.clone(),
            });
        }
    }
    TensorElement::new(
        quiver.clone(),
        summands,
        Truncation::Order(cutoff),
        CartanPrefactor::QSumHH,
    )
}
