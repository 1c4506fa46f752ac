//! Exact machinery for graph families whose spanning-tree counts are
//! divisible by prescribed continuant products.
//!
//! * [`continuants`]: the minus-sign continuant recurrence and the unique
//!   reconstruction of a word from its last two continuants;
//! * [`linalg`]: dense big-integer matrices with fraction-free determinants;
//! * [`graph`]: labeled multigraphs, Laplacians and a canonical JSON format;
//! * [`constructions`]: the multigraph `H_w`, the simple graph `G_w`,
//!   padding, and the block decomposition of the root cofactor;
//! * [`tree_count`]: Kirchhoff counts and a brute-force enumerator;
//! * [`arithmetic`]: factorization and the divisor count;
//! * [`spectrum`]: family-wide verification and spectrum statistics.

pub mod arithmetic;
pub mod constructions;
pub mod continuants;
mod decimal;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod selftest;
pub mod spectrum;
pub mod tree_count;

pub use arithmetic::{factorize, sigma0, Factorization};
pub use constructions::{
    build_multigraph, build_simple_graph, extract_blocks, pad_graph, path_degree, CofactorBlocks,
    ConstructionParams,
};
pub use continuants::{
    continuant_pair, continuant_sequence, minus_cf, reconstruct_word, ContinuantPair, Rational,
    Word,
};
pub use error::{Error, Result};
pub use graph::{MultiGraph, VertexRole};
pub use linalg::{tridiagonal_matrix, two_copy_identity_sides, IntMatrix};
pub use spectrum::{
    compute_divisor, enumerate_words, lower_bound_estimate, run_spectrum, verify_word,
    SpectrumOptions, SpectrumReport, VerificationFlags, VerificationRecord, VerifyOptions,
    WordFamily,
};
pub use tree_count::{tau_enumerate, tau_kirchhoff, CountMethod, TreeCount};
