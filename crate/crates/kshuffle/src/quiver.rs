//! Quiver combinatorics and zeta-kernel factories.
//!
//! Node labels are opaque strings ordered lexicographically; this fixes the
//! indexing of dimension vectors and the naming of shuffle variables. Edge
//! parameters are independent symbols, one per edge.

use crate::exactalg::{LaurentPoly, Mono, RatFun, Rational, Sym};
use num::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuiverError {
    #[error("unknown node label {0:?}")]
    UnknownNode(String),
    #[error("duplicate node label {0:?}")]
    DuplicateNode(String),
    #[error("duplicate edge parameter {0:?}")]
    DuplicateParam(String),
    #[error("reserved symbol {0:?} used as edge parameter")]
    ReservedParam(String),
    #[error("dimension vector indexed by {got} nodes, quiver has {want}")]
    MismatchedIndex { got: usize, want: usize },
}

/// A directed edge with its parameter symbol; loops and multi-edges are
/// allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub param: Sym,
}

/// A quiver with lexicographically ordered node labels and canonically
/// ordered edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    nodes: Vec<String>,
    edges: Vec<Edge>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuiverJson {
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeJson {
    pub src: String,
    pub dst: String,
    pub param: String,
}

impl Quiver {
    pub fn new(
        nodes: Vec<String>,
        edges: Vec<(String, String, String)>,
    ) -> Result<Self, QuiverError> {
        let mut sorted = nodes.clone();
        sorted.sort();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(QuiverError::DuplicateNode(w[0].clone()));
            }
        }
        let index = |label: &str| -> Result<usize, QuiverError> {
            sorted
                .binary_search_by(|n| n.as_str().cmp(label))
                .map_err(|_| QuiverError::UnknownNode(label.to_string()))
        };
        let mut resolved = Vec::with_capacity(edges.len());
        let mut params: Vec<&str> = Vec::new();
        for (src, dst, param) in &edges {
            if param == "q" {
                return Err(QuiverError::ReservedParam(param.clone()));
            }
            if params.contains(&param.as_str()) {
                return Err(QuiverError::DuplicateParam(param.clone()));
            }
            params.push(param);
            resolved.push(Edge {
                src: index(src)?,
                dst: index(dst)?,
                param: Sym::new(param),
            });
        }
        resolved.sort_by(|a, b| {
            (a.src, a.dst, a.param.name()).cmp(&(b.src, b.dst, b.param.name()))
        });
        Ok(Quiver { nodes: sorted, edges: resolved })
    }

    pub fn from_json(j: &QuiverJson) -> Result<Self, QuiverError> {
        Quiver::new(
            j.nodes.clone(),
            j.edges
                .iter()
                .map(|e| (e.src.clone(), e.dst.clone(), e.param.clone()))
                .collect(),
        )
    }

    pub fn to_json(&self) -> QuiverJson {
        QuiverJson {
            nodes: self.nodes.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    src: self.nodes[e.src].clone(),
                    dst: self.nodes[e.dst].clone(),
                    param: e.param.name().to_string(),
                })
                .collect(),
        }
    }

    /// One node `"1"`, no edges.
    pub fn a1() -> Self {
        Quiver::new(vec!["1".into()], vec![]).unwrap()
    }

    /// One node `"1"` with a single loop with parameter `t`.
    pub fn jordan() -> Self {
        Quiver::new(vec!["1".into()], vec![("1".into(), "1".into(), "t".into())]).unwrap()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_label(&self, i: usize) -> &str {
        &self.nodes[i]
    }

    pub fn node_index(&self, label: &str) -> Result<usize, QuiverError> {
        self.nodes
            .binary_search_by(|n| n.as_str().cmp(label))
            .map_err(|_| QuiverError::UnknownNode(label.to_string()))
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Parameters of the edges from `i` to `j`, in canonical order.
    pub fn params_between(&self, i: usize, j: usize) -> impl Iterator<Item = &Sym> {
        self.edges
            .iter()
            .filter(move |e| e.src == i && e.dst == j)
            .map(|e| &e.param)
    }

    /// Number of arrows from `i` to `j`.
    pub fn arrow_count(&self, i: usize, j: usize) -> i64 {
        self.params_between(i, j).count() as i64
    }

    /// The form `<a,b> = sum a_i b_j #_{ij}` counting directed edges.
    pub fn inner(&self, a: &DimVector, b: &DimVector) -> Result<i64, QuiverError> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        let mut acc = 0i64;
        for e in &self.edges {
            acc += a.entries[e.src] * b.entries[e.dst];
        }
        Ok(acc)
    }

    /// The symmetrised form `<a,b> + <b,a>` counting edges in both
    /// directions. For color vectors `a`, `b` this is the degree at
    /// infinity of the product of all kernels `zeta_ij(x)` over pairs of
    /// one `a`-variable and one `b`-variable, since each edge between `i`
    /// and `j` contributes one linear factor to `zeta_ij` and one to
    /// `zeta_ji`.
    pub fn inner_sym(&self, a: &DimVector, b: &DimVector) -> Result<i64, QuiverError> {
        Ok(self.inner(a, b)? + self.inner(b, a)?)
    }

    /// The Euclidean pairing `a·b = sum a_i b_i`.
    pub fn dot(&self, a: &DimVector, b: &DimVector) -> Result<i64, QuiverError> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        Ok(a.entries.iter().zip(&b.entries).map(|(x, y)| x * y).sum())
    }

    pub fn check_dim(&self, a: &DimVector) -> Result<(), QuiverError> {
        if a.entries.len() != self.nodes.len() {
            return Err(QuiverError::MismatchedIndex {
                got: a.entries.len(),
                want: self.nodes.len(),
            });
        }
        Ok(())
    }

    fn q() -> RatFun {
        RatFun::var("q")
    }

    /// `zeta_ij` evaluated at an arbitrary nonzero argument:
    /// `((1-x/q)/(1-x))^[i=j] * prod_{e:i->j}(1-t_e*x) * prod_{e:j->i}(1-(q/t_e)*x)`.
    /// For each edge the kernel's three zero ratios `q`, `1/t_e`, `t_e/q`
    /// multiply to 1, which is what makes the wheel conditions close under
    /// the shuffle product.
    pub fn zeta_in(&self, i: usize, j: usize, x: &RatFun) -> RatFun {
        let one = RatFun::one();
        let q = Self::q();
        let mut out = RatFun::one();
        if i == j {
            let head = one
                .sub(&x.mul(&RatFun::var_pow("q", -1)))
                .div(&one.sub(x))
                .expect("zeta argument must differ from 1");
            out = out.mul(&head);
        }
        for t in self.params_between(i, j) {
            out = out.mul(&one.sub(&RatFun::var(t.clone()).mul(x)));
        }
        for t in self.params_between(j, i) {
            let qt = q.div(&RatFun::var(t.clone())).expect("parameter symbol");
            out = out.mul(&one.sub(&qt.mul(x)));
        }
        out
    }

    /// `zeta_tilde_ij` evaluated at an arbitrary nonzero argument.
    pub fn zeta_tilde_in(&self, i: usize, j: usize, x: &RatFun) -> RatFun {
        if i != j {
            return self.zeta_in(i, j, x);
        }
        let one = RatFun::one();
        let mut out = RatFun::one();
        for t in self.params_between(i, i) {
            let t = RatFun::var(t.clone());
            out = out.mul(&one.sub(&t.mul(x)));
            let qt = Self::q().div(&t).expect("parameter symbol");
            out = out.mul(&one.sub(&qt.mul(x)));
        }
        let den = one
            .sub(x)
            .mul(&one.sub(&RatFun::var_pow("q", -1).mul(&x.recip().expect("nonzero argument"))));
        out.div(&den).expect("normalized denominator is nonzero")
    }

    /// `zeta_ij` as a rational function in the symbol `x`.
    pub fn zeta(&self, i: usize, j: usize) -> RatFun {
        self.zeta_in(i, j, &RatFun::var("x"))
    }

    /// `zeta_tilde_ij` as a rational function in the symbol `x`.
    pub fn zeta_tilde(&self, i: usize, j: usize) -> RatFun {
        self.zeta_tilde_in(i, j, &RatFun::var("x"))
    }

    /// The pairing normalization `gamma_i`.
    pub fn gamma(&self, i: usize) -> RatFun {
        let one = RatFun::one();
        let mut out = RatFun::one();
        for t in self.params_between(i, i) {
            let t = RatFun::var(t.clone());
            out = out.mul(&one.sub(&t));
            out = out.mul(&one.sub(&Self::q().div(&t).expect("parameter symbol")));
        }
        out.div(&one.sub(&RatFun::var_pow("q", -1)))
            .expect("1 - q^-1 is nonzero")
    }
}

/// Which kernel a [`Quiver::zeta_alphabet`] product uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZetaKernel {
    Zeta,
    ZetaTilde,
    /// The self-product normalization: base kernel `zeta` with each
    /// same-color ordered pair divided by `1 - z/(q x)`.
    ZetaTildeDiagNormalized,
}

impl Quiver {
    /// Product of the chosen kernel over all ordered pairs of distinct
    /// symbols `(z, x)` with `z` from `zs` and `x` from `xs`; each variable
    /// carries a node color.
    pub fn zeta_alphabet(
        &self,
        zs: &[(Sym, usize)],
        xs: &[(Sym, usize)],
        kernel: ZetaKernel,
    ) -> RatFun {
        let mut out = RatFun::one();
        for (z, ci) in zs {
            for (x, cj) in xs {
                if z == x {
                    continue;
                }
                let arg = RatFun::var(z.clone())
                    .div(&RatFun::var(x.clone()))
                    .expect("variable symbols are nonzero");
                let factor = match kernel {
                    ZetaKernel::Zeta => self.zeta_in(*ci, *cj, &arg),
                    ZetaKernel::ZetaTilde => self.zeta_tilde_in(*ci, *cj, &arg),
                    ZetaKernel::ZetaTildeDiagNormalized => {
                        let base = self.zeta_in(*ci, *cj, &arg);
                        if ci == cj {
                            let corr = RatFun::one().sub(
                                &arg.mul(&RatFun::var_pow("q", -1)),
                            );
                            base.div(&corr).expect("correction factor is nonzero")
                        } else {
                            base
                        }
                    }
                };
                out = out.mul(&factor);
            }
        }
        out
    }
}

/// An I-indexed integer vector; nonnegative for dimension vectors, signed
/// entries are permitted for shifts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimVector {
    pub entries: Vec<i64>,
}

impl DimVector {
    pub fn zero(n: usize) -> Self {
        DimVector { entries: vec![0; n] }
    }

    pub fn new(entries: Vec<i64>) -> Self {
        DimVector { entries }
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = DimVector::zero(n);
        v.entries[i] = 1;
        v
    }

    pub fn from_labels(
        quiver: &Quiver,
        map: &BTreeMap<String, i64>,
    ) -> Result<Self, QuiverError> {
        let mut v = DimVector::zero(quiver.node_count());
        for (label, n) in map {
            v.entries[quiver.node_index(label)?] = *n;
        }
        Ok(v)
    }

    pub fn to_labels(&self, quiver: &Quiver) -> BTreeMap<String, i64> {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, &n)| (quiver.node_label(i).to_string(), n))
            .collect()
    }

    pub fn add(&self, other: &DimVector) -> DimVector {
        DimVector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &DimVector) -> DimVector {
        DimVector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn total(&self) -> i64 {
        self.entries.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|&e| e >= 0)
    }

    /// Componentwise `self <= other`.
    pub fn leq(&self, other: &DimVector) -> bool {
        self.entries.iter().zip(&other.entries).all(|(a, b)| a <= b)
    }

    /// All vectors `0 <= k <= self` componentwise, in lexicographic order.
    pub fn sub_vectors(&self) -> Vec<DimVector> {
        let mut out = vec![DimVector::zero(self.entries.len())];
        for (i, &n) in self.entries.iter().enumerate() {
            let mut next = Vec::new();
            for v in &out {
                for k in 0..=n {
                    let mut w = v.clone();
                    w.entries[i] = k;
                    next.push(w);
                }
            }
            out = next;
        }
        out
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})",
            self.entries
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

/// An I-indexed vector of exact rational slopes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slope {
    pub entries: Vec<Rational>,
}

impl Slope {
    pub fn uniform(n: usize, m: Rational) -> Self {
        Slope { entries: vec![m; n] }
    }

    pub fn new(entries: Vec<Rational>) -> Self {
        Slope { entries }
    }

    /// `m . k` as an exact rational.
    pub fn dot(&self, k: &DimVector) -> Rational {
        self.entries
            .iter()
            .zip(&k.entries)
            .map(|(m, &n)| m * Rational::from_integer(n.into()))
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// `m . k` when it is an integer.
    pub fn dot_int(&self, k: &DimVector) -> Option<i64> {
        let r = self.dot(k);
        if r.denom().is_one() {
            use num::ToPrimitive;
            r.numer().to_i64()
        } else {
            None
        }
    }

    /// Scales a dimension vector entrywise; `None` unless every `m_i k_i`
    /// is an integer.
    pub fn scale_vec(&self, k: &DimVector) -> Option<DimVector> {
        let mut out = Vec::with_capacity(k.entries.len());
        for (m, &n) in self.entries.iter().zip(&k.entries) {
            let r = m * Rational::from_integer(n.into());
            if !r.denom().is_one() {
                return None;
            }
            use num::ToPrimitive;
            out.push(r.numer().to_i64()?);
        }
        Some(DimVector::new(out))
    }
}

/// The shuffle variable `z_<node>_<a>` (1-based slot `a`).
pub fn zvar(label: &str, a: usize) -> Sym {
    Sym::new(format!("z_{label}_{a}"))
}

/// All shuffle variables for horizontal degree `n`, color by color.
pub fn zvars(quiver: &Quiver, n: &DimVector) -> Vec<(Sym, usize)> {
    let mut out = Vec::new();
    for (i, &ni) in n.entries.iter().enumerate() {
        for a in 1..=ni {
            out.push((zvar(quiver.node_label(i), a as usize), i));
        }
    }
    out
}

/// A monomial in the `zvars` of `n` from per-variable exponents.
pub fn zmono(quiver: &Quiver, n: &DimVector, exps: &[i64]) -> Mono {
    let vars = zvars(quiver, n);
    assert_eq!(vars.len(), exps.len());
    Mono::from_exps(
        vars.into_iter()
            .map(|(s, _)| s)
            .zip(exps.iter().copied())
            .filter(|(_, e)| *e != 0)
            .map(|(s, e)| (s, e)),
    )
}

pub fn poly_of_mono(m: Mono) -> LaurentPoly {
    LaurentPoly::monomial(Rational::one(), m)
}
