//! Exact-arithmetic construction and classification of product-quotient
//! surfaces: minimal resolutions of `(C1 x C2)/G` for a finite group `G`
//! acting on two curves of genus at least two.
//!
//! The crate follows the construction pipeline end to end:
//!
//! * [`singularity`] — cyclic quotient singularities q/n, their
//!   Hirzebruch-Jung strings, and the per-type invariants l, gamma, mu, I;
//! * [`basket`] — multisets of singularities with aggregated invariants,
//!   admissibility, and bounded enumeration by (chi, gamma);
//! * [`signature`] — orbifold signatures, the Hurwitz formula, and the
//!   bound cascade that makes the signature search finite;
//! * [`group`] / [`catalog`] — finite groups as dense Cayley tables built
//!   from permutation generators, plus a small-groups catalog format;
//! * [`genvec`] — spherical generating vectors and their equivalence
//!   under braid moves, automorphisms, and factor swap;
//! * [`surface`] — assembling a surface from a pair of vectors: the
//!   basket, all numerical invariants, and the dual surface;
//! * [`minimality`] — exceptional-lattice arithmetic and the (-1)-curve
//!   candidate search;
//! * [`classify`] — the end-to-end search for regular surfaces with given
//!   geometric genus and gamma;
//! * [`tables`] — regression fixtures and their consistency checks.
//!
//! Every invariant is computed over exact rationals; no floating point
//! enters any computation.

pub mod basket;
pub mod catalog;
pub mod classify;
pub mod data;
pub mod error;
pub mod genvec;
pub mod group;
pub mod linalg;
pub mod minimality;
pub mod rat;
pub mod signature;
pub mod singularity;
pub mod surface;
pub mod tables;

pub use basket::{enumerate_baskets, Basket, BasketInvariants};
pub use classify::{existing_surfaces, ClassificationReport, ClassifyOptions};
pub use error::{Error, Result};
pub use genvec::{hurwitz_reduce, search_spherical_vectors, GeneratingVector};
pub use group::{FiniteGroup, Permutation};
pub use rat::Rat;
pub use signature::{enumerate_signatures, robavecchia_filter, Signature};
pub use singularity::{hj_expand, SingularityType};
pub use surface::{compute_basket, ProductQuotientSurface, SurfaceRecord};
