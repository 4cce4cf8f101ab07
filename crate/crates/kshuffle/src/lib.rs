//! Exact symbolic computation in the shuffle-algebra realization of the
//! K-theoretic Hall algebra of an arbitrary quiver.
//!
//! The crate is organized bottom-up: [`exactalg`] provides exact rational
//! arithmetic (multivariate Laurent polynomials, normalized rational
//! functions, one-variable Laurent series, iterated constant terms),
//! [`quiver`] the quiver data and zeta kernels, [`shuffle`] the shuffle
//! product and slope theory, [`hopf`] coproducts, the Hopf pairing and
//! truncated R-matrices, and [`geom`] the alphabet calculus for stable
//! envelopes. All arithmetic is exact; no floating point anywhere.

pub mod exactalg;
pub mod geom;
pub mod hopf;
pub mod quiver;
pub mod shuffle;
