//! Exact-arithmetic engine for differential graded algebras with enough
//! idempotents and their dg (bi)modules.
//!
//! Everything is finite, exact and deterministic: scalars are rationals or
//! prime-field residues, bases are chosen by leftmost-pivot echelon forms,
//! and every sign in sight follows the Koszul rule. The crate is organized
//! bottom-up:
//!
//! * [`scalar`], [`matrix`], [`graded`] — the linear-algebra substrate;
//! * [`algebra`] — dg algebras with enough idempotents as structure
//!   constants, validation, opposites, tensor products, homomorphisms;
//! * [`module`] — side-tagged dg modules, shifts, side conversions, cones;
//! * [`hom`] — Hom-complexes, chain maps, homotopies, quasi-isomorphisms;
//! * [`homtensor`] — the unitarized HOM and tensor bifunctors on bimodules;
//! * [`adjunction`] — the tensor-Hom and Hom-Hom dg adjunctions as
//!   machine-checked certificates;
//! * [`duality`] — semi-free objects and the perfect-complex dualities;
//! * [`zoo`] — the deterministic and seeded-random fixture algebras used
//!   throughout the test suites.

pub mod error;
pub mod report;
pub mod scalar;
pub mod matrix;
pub mod graded;
pub mod algebra;
pub mod module;
pub mod hom;
pub mod homtensor;
pub mod adjunction;
pub mod duality;
pub mod zoo;

pub use error::{Error, Result};
pub use scalar::{Field, Scalar};
