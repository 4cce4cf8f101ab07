//! Finite sums of Cartan-decorated tensor products of shuffle elements.
//!
//! A summand stores its Cartan words next to the leg they decorate, in the
//! written order: left-leg words act from the left of the shuffle part,
//! right-leg words from the right. Elements record whether they are exact
//! or correct through a stated truncation order, and arithmetic keeps the
//! weaker guarantee.

use super::cartan::{CartanWord, CentralKind};
use super::HopfError;
use crate::exactalg::{parse_ratfun, RatFun, Sym};
use crate::quiver::{zvars, DimVector, Quiver};
use crate::shuffle::{Side, ShuffleElement, ShuffleElementJson};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Exactness marker for a [`TensorElement`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    Exact,
    /// Correct through vertical-degree offset `order` on the far leg.
    Order(i64),
}

impl Truncation {
    /// The weaker of two guarantees.
    pub fn weaker(self, other: Truncation) -> Truncation {
        match (self, other) {
            (Truncation::Exact, o) => o,
            (s, Truncation::Exact) => s,
            (Truncation::Order(a), Truncation::Order(b)) => Truncation::Order(a.min(b)),
        }
    }
}

/// Formal central prefactor carried by an R-matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CartanPrefactor {
    None,
    /// The symbol `q^{Σ_i H_i ⊗ H_{-i}}`, never expanded.
    QSumHH,
}

/// One decorated tensor summand.
#[derive(Debug, Clone)]
pub struct TensorSummand {
    pub coeff: RatFun,
    pub left_cartan: CartanWord,
    pub left: ShuffleElement,
    pub right_cartan: CartanWord,
    pub right: ShuffleElement,
}

/// A sum of decorated tensor products over one quiver.
#[derive(Debug, Clone)]
pub struct TensorElement {
    quiver: Quiver,
    truncation: Truncation,
    prefactor: CartanPrefactor,
    summands: Vec<TensorSummand>,
}

fn param_set(quiver: &Quiver) -> BTreeSet<Sym> {
    let mut set: BTreeSet<Sym> = quiver.edges().iter().map(|e| e.param.clone()).collect();
    set.insert(Sym::new("q"));
    set
}

impl TensorElement {
    /// Validates quiver consistency, parameter-only coefficients, and that
    /// nonempty Cartan words share the side of the shuffle part they
    /// decorate (legs of horizontal degree zero are unconstrained).
    pub fn new(
        quiver: Quiver,
        summands: Vec<TensorSummand>,
        truncation: Truncation,
        prefactor: CartanPrefactor,
    ) -> Result<Self, HopfError> {
        let params = param_set(&quiver);
        let mut kept = Vec::new();
        for s in summands {
            if s.left.quiver() != &quiver || s.right.quiver() != &quiver {
                return Err(HopfError::QuiverMismatch);
            }
            if s.coeff.symbols().iter().any(|x| !params.contains(x)) {
                return Err(HopfError::CoeffHasVariables);
            }
            for (word, leg) in [(&s.left_cartan, &s.left), (&s.right_cartan, &s.right)] {
                if !word.is_unit() && !leg.hdeg().is_zero() && word.side() != leg.side() {
                    return Err(HopfError::CartanSideMismatch);
                }
            }
            if !s.coeff.is_zero() && !s.left.is_zero() && !s.right.is_zero() {
                kept.push(s);
            }
        }
        Ok(TensorElement {
            quiver,
            truncation,
            prefactor,
            summands: kept,
        })
    }

    /// The exact element `1 ⊗ 1`.
    pub fn one(quiver: Quiver, side: Side) -> Self {
        let unit = ShuffleElement::unit(quiver.clone(), side);
        TensorElement {
            quiver,
            truncation: Truncation::Exact,
            prefactor: CartanPrefactor::None,
            summands: vec![TensorSummand {
                coeff: RatFun::one(),
                left_cartan: CartanWord::unit(),
                left: unit.clone(),
                right_cartan: CartanWord::unit(),
                right: unit,
            }],
        }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn summands(&self) -> &[TensorSummand] {
        &self.summands
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    pub fn prefactor(&self) -> CartanPrefactor {
        self.prefactor
    }

    /// Sum; the result carries the weaker truncation guarantee.
    pub fn add(&self, other: &TensorElement) -> Result<TensorElement, HopfError> {
        if self.quiver != other.quiver {
            return Err(HopfError::QuiverMismatch);
        }
        if self.prefactor != other.prefactor {
            return Err(HopfError::PrefactorMismatch);
        }
        let mut summands = self.summands.clone();
        summands.extend(other.summands.iter().cloned());
        TensorElement::new(
            self.quiver.clone(),
            summands,
            self.truncation.weaker(other.truncation),
            self.prefactor,
        )
    }

    /// Scales every summand by a parameter-only coefficient.
    pub fn scale(&self, c: &RatFun) -> Result<TensorElement, HopfError> {
        let mut summands = self.summands.clone();
        for s in &mut summands {
            s.coeff = s.coeff.mul(c);
        }
        TensorElement::new(self.quiver.clone(), summands, self.truncation, self.prefactor)
    }

    /// Collects the summands into a map keyed by the Cartan words and the
    /// leg degrees, with leg polynomials renamed into the disjoint
    /// alphabets `L__<label>_<a>` and `R__<label>_<a>` and multiplied
    /// together with the coefficient. Two elements describe the same
    /// tensor exactly when their maps agree.
    #[allow(clippy::type_complexity)]
    pub fn canonical_map(
        &self,
    ) -> BTreeMap<(CartanWord, CartanWord, DimVector, DimVector), RatFun> {
        let mut map: BTreeMap<(CartanWord, CartanWord, DimVector, DimVector), RatFun> =
            BTreeMap::new();
        for s in &self.summands {
            let mut value = s.coeff.clone();
            for (leg, prefix) in [(&s.left, "L"), (&s.right, "R")] {
                let mut rename = BTreeMap::new();
                for (z, _) in zvars(&self.quiver, leg.hdeg()) {
                    let fresh = Sym::new(format!("{prefix}__{}", z.name()));
                    rename.insert(z, fresh);
                }
                value = value.mul(&leg.poly().rename(&rename));
            }
            if value.is_zero() {
                continue;
            }
            let key = (
                s.left_cartan.clone(),
                s.right_cartan.clone(),
                s.left.hdeg().clone(),
                s.right.hdeg().clone(),
            );
            let slot = map.entry(key).or_insert_with(RatFun::zero);
            *slot = slot.add(&value);
        }
        map.retain(|_, v| !v.is_zero());
        map
    }

    /// Equality as tensors: same quiver and prefactor, same canonical map.
    /// Truncation markers are not compared.
    pub fn equals(&self, other: &TensorElement) -> bool {
        self.quiver == other.quiver
            && self.prefactor == other.prefactor
            && self.canonical_map() == other.canonical_map()
    }

    pub fn is_zero(&self) -> bool {
        self.canonical_map().is_empty()
    }

    pub fn to_json(&self) -> TensorElementJson {
        TensorElementJson {
            truncation: match self.truncation {
                Truncation::Exact => None,
                Truncation::Order(n) => Some(n),
            },
            prefactor: match self.prefactor {
                CartanPrefactor::None => None,
                CartanPrefactor::QSumHH => Some("q^{sum H_i x H_{-i}}".to_string()),
            },
            summands: self
                .summands
                .iter()
                .map(|s| TensorSummandJson {
                    coeff: s.coeff.to_string(),
                    left: leg_to_json(&self.quiver, &s.left_cartan, &s.left),
                    right: leg_to_json(&self.quiver, &s.right_cartan, &s.right),
                })
                .collect(),
        }
    }

    /// Parses and fully validates against the given quiver.
    pub fn from_json(quiver: &Quiver, j: &TensorElementJson) -> Result<TensorElement, HopfError> {
        let mut summands = Vec::new();
        for s in &j.summands {
            let (left_cartan, left) = leg_from_json(quiver, &s.left)?;
            let (right_cartan, right) = leg_from_json(quiver, &s.right)?;
            summands.push(TensorSummand {
                coeff: parse_ratfun(&s.coeff)?,
                left_cartan,
                left,
                right_cartan,
                right,
            });
        }
        let truncation = match j.truncation {
            None => Truncation::Exact,
            Some(n) if n >= 0 => Truncation::Order(n),
            Some(n) => return Err(HopfError::NegativeOrder(n)),
        };
        let prefactor = match j.prefactor.as_deref() {
            None => CartanPrefactor::None,
            Some(_) => CartanPrefactor::QSumHH,
        };
        TensorElement::new(quiver.clone(), summands, truncation, prefactor)
    }
}

fn leg_to_json(quiver: &Quiver, word: &CartanWord, leg: &ShuffleElement) -> TensorLegJson {
    let cartan = word
        .modes()
        .map(|(&(i, p), &exp)| CartanFactorJson {
            node: quiver.node_label(i).to_string(),
            p,
            exp,
        })
        .collect();
    let central = word
        .central()
        .map(|(&(i, kind), &half)| CentralFactorJson {
            node: quiver.node_label(i).to_string(),
            kind: match kind {
                CentralKind::V => "v".to_string(),
                CentralKind::W => "w".to_string(),
            },
            half,
        })
        .collect();
    TensorLegJson {
        sign: if word.is_unit() { None } else { Some(word.side()) },
        cartan,
        central,
        element: leg.to_json(),
    }
}

fn leg_from_json(
    quiver: &Quiver,
    j: &TensorLegJson,
) -> Result<(CartanWord, ShuffleElement), HopfError> {
    let element = ShuffleElement::from_json(&j.element)?;
    if element.quiver() != quiver {
        return Err(HopfError::QuiverMismatch);
    }
    let side = j.sign.unwrap_or(Side::Positive);
    let mut word = CartanWord::unit();
    for f in &j.cartan {
        let i = quiver.node_index(&f.node)?;
        word = word.mul(&CartanWord::mode(side, i, f.p, f.exp)?)?;
    }
    for c in &j.central {
        let i = quiver.node_index(&c.node)?;
        let kind = match c.kind.as_str() {
            "v" => CentralKind::V,
            "w" => CentralKind::W,
            other => {
                return Err(HopfError::Internal(format!(
                    "unknown central kind {other:?}"
                )))
            }
        };
        word = word.mul(&CartanWord::central_factor(side, i, kind, c.half))?;
    }
    Ok((word, element))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CartanFactorJson {
    pub node: String,
    pub p: i64,
    #[serde(default = "one_exp")]
    pub exp: i64,
}

fn one_exp() -> i64 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CentralFactorJson {
    pub node: String,
    pub kind: String,
    pub half: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TensorLegJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<Side>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cartan: Vec<CartanFactorJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub central: Vec<CentralFactorJson>,
    pub element: ShuffleElementJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TensorSummandJson {
    pub coeff: String,
    pub left: TensorLegJson,
    pub right: TensorLegJson,
}

/// JSON form: `truncation` absent means exact; `prefactor` absent means no
/// central prefactor.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TensorElementJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prefactor: Option<String>,
    pub summands: Vec<TensorSummandJson>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    fn e(quiver: &Quiver, d: i64) -> ShuffleElement {
        ShuffleElement::generator(quiver.clone(), Side::Positive, 0, d)
    }

    #[test]
    fn canonical_map_merges_split_summands() {
        let q = Quiver::jordan();
        let unit = ShuffleElement::unit(q.clone(), Side::Positive);
        let mk = |c: i64| TensorSummand {
            coeff: RatFun::from_int(c.into()),
            left_cartan: CartanWord::unit(),
            left: e(&q, 1),
            right_cartan: CartanWord::unit(),
            right: unit.clone(),
        };
        let split = TensorElement::new(
            q.clone(),
            vec![mk(1), mk(2)],
            Truncation::Exact,
            CartanPrefactor::None,
        )
        .unwrap();
        let joined = TensorElement::new(
            q.clone(),
            vec![mk(3)],
            Truncation::Exact,
            CartanPrefactor::None,
        )
        .unwrap();
        assert!(split.equals(&joined));
        assert!(!split.equals(&TensorElement::one(q, Side::Positive)));
    }

    #[test]
    fn validation_rejects_leg_variables_in_coeff() {
        let q = Quiver::jordan();
        let s = TensorSummand {
            coeff: RatFun::var("z_1_1"),
            left_cartan: CartanWord::unit(),
            left: e(&q, 0),
            right_cartan: CartanWord::unit(),
            right: e(&q, 0),
        };
        let r = TensorElement::new(q, vec![s], Truncation::Exact, CartanPrefactor::None);
        assert!(matches!(r, Err(HopfError::CoeffHasVariables)));
    }

    #[test]
    fn validation_rejects_mismatched_cartan_side() {
        let q = Quiver::jordan();
        let s = TensorSummand {
            coeff: RatFun::one(),
            left_cartan: CartanWord::mode(Side::Negative, 0, 1, 1).unwrap(),
            left: e(&q, 0),
            right_cartan: CartanWord::unit(),
            right: e(&q, 0),
        };
        let r = TensorElement::new(q, vec![s], Truncation::Exact, CartanPrefactor::None);
        assert!(matches!(r, Err(HopfError::CartanSideMismatch)));
    }

    #[test]
    fn json_roundtrip_preserves_the_tensor() {
        let q = Quiver::jordan();
        let s = TensorSummand {
            coeff: RatFun::from_rational(rat(2)),
            left_cartan: CartanWord::mode(Side::Positive, 0, 1, 2).unwrap(),
            left: e(&q, 1),
            right_cartan: CartanWord::unit(),
            right: e(&q, -1).scale(&rat(3)),
        };
        let t = TensorElement::new(
            q.clone(),
            vec![s],
            Truncation::Order(4),
            CartanPrefactor::QSumHH,
        )
        .unwrap();
        let j = t.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let back: TensorElementJson = serde_json::from_str(&text).unwrap();
        let t2 = TensorElement::from_json(&q, &back).unwrap();
        assert!(t.equals(&t2));
        assert_eq!(t2.truncation(), Truncation::Order(4));
        assert_eq!(t2.prefactor(), CartanPrefactor::QSumHH);
    }
}
