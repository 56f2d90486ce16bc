//! Exact, deterministic toolkit for Coxeter systems and the degree supports
//! of L²-Betti numbers of the associated complete Kac-Moody groups and their
//! lattices.
//!
//! The pipeline is: a Coxeter matrix (parsed from a diagram DSL, a JSON
//! matrix, or a generalized Cartan matrix) is classified against the finite
//! and affine tables; its spherical subsets generate the Davis chamber `D`
//! and the subcomplexes `D_σ`; reduced rational cohomology of those complexes
//! is computed with exact integer linear algebra; the positive dimensions are
//! aggregated into per-degree supports for the complete group `G`, the square
//! `G × G`, and lattices therein. A separate module enumerates group elements
//! by word length through the exact Tits reflection representation and
//! evaluates growth series and covolume partial sums.
//!
//! Everything is pure and deterministic: no floating point, no global state,
//! byte-stable outputs.

pub mod classify;
pub mod cohomology;
pub mod coxeter;
pub mod davis;
pub mod error;
pub mod growth;
pub mod l2;

pub use classify::{classify_irreducible, is_spherical, sphericity, TypeTag};
pub use cohomology::{euler_characteristic, reduced_cohomology, CohomologyProfile};
pub use coxeter::{
    builtin_family, cartan_to_coxeter, parse_diagram, parse_matrix, CoxeterMatrix, Family, GenSet,
    GeneralizedCartanMatrix,
};
pub use davis::{davis_chamber, d_sigma, fast_path, sigma_candidates, FastPath, SimplicialComplex};
pub use error::Error;
pub use growth::{enumerate_by_length, km_report, GrowthSeries, KMReport};
pub use l2::{betti_support, kunneth_square, lattice_degrees, me_compare, BettiSupport, MeVerdict};

/// Result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
