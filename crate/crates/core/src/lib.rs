//! Exact combinatorics of torus-character twists on Weyl groups.
//!
//! The crate implements, over exact integer and rational arithmetic:
//!
//! - based root data of finite type with a chosen isogeny lattice, Weyl
//!   groups, Bruhat order, and reflection subgroups ([`root_datum`]);
//! - rational character parameters on the cocharacter lattice, the root
//!   subsystem and small/full stabilizers they cut out, and the associated
//!   derived ("endoscopic") root datum ([`char_param`]);
//! - the double-coset blocks connecting two parameters in one Weyl orbit,
//!   their minimal/maximal elements, relative length, and relative Bruhat
//!   order ([`blocks`]);
//! - the orbit Hecke algebra over `Z[v, v^-1]` with its bar involution and
//!   canonical basis ([`hecke`]);
//! - two-sided cells from canonical-basis structure constants, with their
//!   extension across blocks ([`cells`]);
//! - extended-torus lifts of Weyl elements and the resulting 2-torsion
//!   cocycles with their scalar values ([`tits`]);
//! - fixed-point counting of blocks under a Frobenius or finite-order twist
//!   ([`frobenius`]);
//! - the rewriting of reduced words into subgroup-times-minimal form and the
//!   corresponding canonical-basis products ([`soergel`]).
//!
//! The `monodromic` binary exposes these through a small deterministic CLI;
//! see [`cli`].

// Matrix and table code walks several arrays by a shared index; iterator
// rewrites obscure that, so the lint stays off crate-wide.
#![allow(clippy::needless_range_loop)]

pub mod blocks;
pub mod cells;
pub mod char_param;
pub mod cli;
pub mod error;
pub mod frobenius;
pub mod hecke;
pub mod laurent;
pub mod root_datum;
pub mod soergel;
pub mod tits;

pub use error::{Error, Result};
pub use laurent::LaurentPoly;
pub use root_datum::{
    build_root_datum, enum_cap, Ambient, Isogeny, Rational, ReflSubgroup, RootDatum, WeylElt,
    WeylGroup,
};

/// Artifact version embedded in every CLI report.
pub const ARTIFACT_VERSION: &str = concat!("monodromic v", env!("CARGO_PKG_VERSION"));
