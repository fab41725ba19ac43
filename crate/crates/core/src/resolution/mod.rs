//! The non-free case `m < r - n + 1`: the submodule `Ξ` of `D^(m)(A)`, its
//! minimal generators, the complexes `C_*`, `E_*`, `E_*[σ]`, and the minimal
//! free resolution `F_*` with its verification.

pub mod ecomplex;
pub mod free;
pub mod generators;
pub mod kspace;
pub mod verify;

pub use ecomplex::{
    build_c_complex, delta_space, e_bracket, e_complex_full, e_sigma_complex, CComplex, DeltaTable,
    EBracket, EData,
};
pub use free::{
    betti_w, build_f_resolution, dim_s, hilbert_from_exponents, hilbert_from_resolution,
    hilbert_function, FreeComplex, FreeModule, Resolves,
};
pub use generators::{
    expected_generator_count, kills_first_forms, linear_rank, minimal_generators_xi,
    non_freeness_inequality, sigma0, split_euler,
};
pub use kspace::{ExactnessReport, GradedKComplex, KSubspace};
pub use verify::{
    largest_piece, verify_complex, verify_resolution, Expected, Report, Target, VerifyOptions, XiConditions,
    DEFAULT_MAX_PIECE_ENTRIES,
};
