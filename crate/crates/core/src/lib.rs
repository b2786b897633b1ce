//! Integral forms of Kac–Moody groups over ℤ for simply-laced diagrams.
//!
//! The crate builds the ℤ-form of an integrable highest-weight module, lets
//! words in the Tits generators act on a truncation of it, and checks the
//! defining relations of the group together with the kernel of the resulting
//! action.

pub mod cartan;
pub mod extweyl;
pub mod groupgen;
pub mod linalg;
pub mod roots;
pub mod verifier;
pub mod weightmod;
