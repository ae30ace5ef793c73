//! Exact integer combinatorics for Kashiwara crystals over symmetrizable
//! Kac–Moody Cartan data.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! - [`cartan`]: Cartan data, the built-in registry of finite and affine types.
//! - [`weight`], [`weyl`]: weight and root lattice arithmetic, simple
//!   reflections, reduced words and braid moves.
//! - [`crystal`]: the abstract crystal interface, elementary crystals `B_i`
//!   and `T_λ`, the tensor product rule, axiom and morphism checkers.
//! - [`cellular`]: the cellular crystal `B_w` on `ℤ^ℓ` with closed-form
//!   operators, shift vectors `h_Λ` and central coordinates.
//! - [`subcrystal`]: `B(∞)` membership, Demazure crystals, star operators
//!   and `B(λ)`.
//! - [`isocert`]: isomorphism growth with conflict detection, transport
//!   between reduced words, and connectedness certificates.
//! - [`program`]: operator programs run against a cellular crystal.

#![no_std]

extern crate alloc;

pub mod cartan;
pub mod cellular;
pub mod crystal;
pub mod isocert;
pub mod program;
pub mod subcrystal;
pub mod weight;
pub mod weyl;

pub use cartan::{CartanDatum, CartanError, CartanType};
pub use cellular::{CellVec, CellularCrystal, CellularError};
pub use crystal::{Crystal, CrystalValue, Element, ElementCrystal};
pub use isocert::{IsoError, Transporter};
pub use subcrystal::{BInfty, StarOps, SubcrystalError};
pub use weight::{RootVec, Weight};
pub use weyl::{ReducedWord, WeylError};
