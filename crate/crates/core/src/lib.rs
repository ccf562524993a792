//! Eigenvalue inclusion disks for matrix polynomials `P(z) = Σ A_j z^j`.
//!
//! The [`bounds`] module computes Cauchy-type radii `R` such that every
//! eigenvalue `λ` of `P` (every `λ` with `det P(λ) = 0`) satisfies `|λ| < R`,
//! for any of the three classical induced matrix norms. The [`oracle`] module
//! computes the spectrum independently through a block companion
//! linearisation, and [`harness`] checks the former against the latter on
//! seeded random ensembles.
//!
//! ```
//! use eigenbound::{bounds, oracle, MatrixPolynomial, NormKind};
//!
//! // I z² + I z + I
//! let p = MatrixPolynomial::identity_multiples(2, &[1.0, 1.0, 1.0]).unwrap();
//! let (best, _table) = bounds::best_bound(&p, NormKind::InducedInf, &[2.0]).unwrap();
//! let spectrum = oracle::eigenvalues(&p).unwrap();
//! assert!(spectrum.max_modulus < best.radius);
//! ```

pub mod bounds;
pub mod harness;
pub mod linalg;
pub mod oracle;
pub mod poly;
pub mod polyfile;
pub mod roots;
pub mod scalar;

pub use bounds::{BoundError, EigenvalueBound, HolderPair, Theorem, Variant};
pub use linalg::{Complex, LinalgError, Matrix, NormKind};
pub use oracle::{OracleError, Spectrum};
pub use poly::{MatrixPolynomial, PolyError};
pub use polyfile::{FileError, PolynomialFile};
