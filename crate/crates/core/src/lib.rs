//! Volume and Cheeger–Chern–Simons type invariants of decorated tetrahedra
//! for `PGL(3,C)`.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of value inputs:
//!
//! - [`dilog`]: `Li₂`, the Bloch–Wigner function `D`, the Rogers dilogarithm
//!   and its flattened (extended) form.
//! - [`prebloch`]: formal integer combinations `Σ nᵢ[zᵢ]` evaluated through `D`.
//! - [`flags`]: flags in `CP²`, the cross-ratios `z_ij` of a flag tetrahedron,
//!   triple ratios and flag duality.
//! - [`ptolemy`]: decorations modulo the unipotent group `N`, Ptolemy
//!   coordinates and the flattenings built from their logarithms.
//! - [`lie`]: the Cartan involution at group and Lie-algebra level and the
//!   invariant polynomials `Tr(Xᵏ)`.
//! - [`triangulation`]: decorated complexes, face gluings and test generators.
//! - [`invariants`]: total invariants, dual decorations and relation reports.
//! - [`battery`]: the randomized property battery behind `flagvol selftest`.
#![cfg_attr(not(any(feature = "std", test)), no_std)]
#![deny(missing_docs)]

extern crate alloc;

pub mod battery;
pub mod dilog;
mod error;
pub mod flags;
pub mod invariants;
pub mod lie;
pub mod linalg;
pub mod prebloch;
pub mod ptolemy;
pub mod rng;
pub mod triangulation;

pub use error::{Error, Result};

/// Double precision complex scalar used throughout the crate.
pub type Complex = num_complex::Complex64;

pub use dilog::{bloch_wigner, extended_rogers, flattening_from_logs, li2, rogers, Flattening};
pub use flags::{Flag, FlagTetrahedron, ProjectiveCovector, ProjectivePoint};
pub use invariants::{InvariantReport, Involution};
pub use linalg::Mat3;
pub use prebloch::PreBlochElement;
pub use ptolemy::{Decoration, PtolemyCoordinates, PtolemyTuple};
pub use triangulation::{DecoratedComplex, Gluing, Payload, Tetrahedron};
