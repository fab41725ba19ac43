//! Exact construction and certification of the modules `D^(m)(A)` of
//! homogeneous order-`m` differential operators that preserve the defining
//! ideal of a generic central hyperplane arrangement `A`.
//!
//! The crate is `no_std` (it needs `alloc`) and contains no IO. Everything is
//! computed over the rationals with arbitrary precision:
//!
//! - [`exactalg`]: rationals, multivariate polynomials, matrices over `Q` and
//!   over `Q[x]`, determinants, null spaces, modular rank certificates.
//! - [`arrangement`]: generic arrangements, `Q`, `δ_H`, `P_H`, generic
//!   extensions.
//! - [`weyl`]: homogeneous differential operators, their action, `ad x`
//!   calculus, membership in `D^(m)(A)`, Euler operators and `γ_k`.
//! - [`saito`]: the coefficient matrix `M_m` and the Saito–Holm determinant
//!   test.
//! - [`freebasis`]: explicit bases in every free case.
//! - [`resolution`]: minimal generators and the minimal free resolution of
//!   `Ξ^(m)(A)` in the non-free case, with verification.
//! - [`jet`]: the bullet action, `J_m(A)`, the resolution of `Coker δ̄_0` and
//!   the jet-module presentation matrices.
#![no_std]

extern crate alloc;

pub mod arrangement;
pub mod error;
pub mod exactalg;
pub mod freebasis;
pub mod jet;
pub mod resolution;
pub mod saito;
pub mod weyl;

pub use error::{Error, Result};
