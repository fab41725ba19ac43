//! Exact arithmetic kernel.

pub mod combinat;
pub mod modp;
pub mod monomial;
pub mod poly;
pub mod polymat;
pub mod qmatrix;
pub mod rat;

pub use combinat::{binom, factorial};
pub use monomial::Monomial;
pub use poly::{exact_divide, partial_apply, poly_arith, PolyOp, Polynomial};
pub use polymat::{polymat_det, polymat_rank_at_point, FactoredDet, PolyMatrix};
pub use qmatrix::{qmat_rank_nullspace, QMatrix};
pub use rat::{parse_rat, rat, rat_frac, Rat};
