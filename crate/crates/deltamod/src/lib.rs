//! Exact toolkit for the column-number functions g(Δ,r) and h(Δ,r) of
//! Δ-modular integer matrices.
//!
//! g(Δ,r) is the largest number of pairwise distinct columns a generic
//! Δ-modular integer matrix of rank r can have; h(Δ,r) drops the genericity
//! requirement. Both are computed exactly by enumerating Hermite normal forms
//! of determinant Δ, lifting the solutions of A·x ≡ 0 (mod Δ) to relevant
//! integer representatives, and running an exact maximum (hyper)clique search
//! over the compatibility structure on those candidate columns. Closed-form
//! bounds and the explicit witness families are implemented alongside, and
//! every computed witness is re-certified by an independent checker.
//!
//! All arithmetic is exact: i64 entries, checked i128 intermediates, and a
//! hard `Error::Overflow` instead of silent wraparound.

pub mod bounds;
pub mod cache;
pub mod cert;
pub mod clique;
pub mod equiv;
pub mod families;
pub mod hnf;
pub mod hnfspace;
pub mod matrix;
pub mod modsolve;
pub mod search;
pub mod snf;
pub mod textio;

pub use bounds::{
    bound_report, is_prime, lower_bound, smallest_prime_above, upper_bound, BoundReport,
};
pub use cache::{ResultCache, ALGORITHM_VERSION};
pub use cert::{certify, is_delta_bound, is_delta_modular, is_generic, is_totally_generic, CertReport};
pub use clique::{
    exhaustive_max, is_hyperedge, max_clique_graph, max_hyperclique, CliqueInstance, CliqueResult,
    SearchLimits,
};
pub use equiv::{canonical_hnf_key, equivalent};
pub use families::{
    construct_basic, construct_f1, construct_f2, construct_f3, construct_m,
    construct_thirty_s24, construct_vandermonde,
};
pub use hnf::{hnf, HnfMatrix};
pub use hnfspace::{
    count_hnf_closed_form, count_inequivalent, enumerate_hnf, reduce_op1, reduce_op2, EnumMode,
    HnfEnumConfig,
};
pub use matrix::IntMatrix;
pub use modsolve::{
    candidate_columns, lift_representatives, lift_representatives_unrestricted, prune_parallel,
    solve_mod, CandidateColumns, Mode, ResidueSolutionSet,
};
pub use search::{compute_g, compute_h, compute_table, oracle_g, ComputationResult, SearchOptions};
pub use snf::{snf, SnfDecomposition};
pub use textio::{matrix_from_str, matrix_to_string, read_matrix, witness_field, write_matrix};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arithmetic overflow in exact integer computation")]
    Overflow,
    #[error("matrix is singular")]
    Singular,
    #[error("shape error: {0}")]
    Shape(String),
    #[error("index out of range")]
    IndexOutOfRange,
    #[error("duplicate index in selection")]
    DuplicateIndex,
    #[error("matrix does not have full row rank")]
    RankDeficient,
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("resource cap exceeded: {detail}")]
    ResourceCap { detail: String },
    #[error("internal verification failed: {0}")]
    VerificationFailed(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
