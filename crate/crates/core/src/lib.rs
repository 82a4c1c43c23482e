//! Skew Bezoutian bilinear spaces over `Q` and `F_p`.
//!
//! A pair of monic polynomials `(p, q)` of degree `d`, with `q` reciprocal
//! and `p` `(−ε)`-reciprocal, determines an `ε`-symmetric Toeplitz Gram
//! matrix `B(p, q)` on `k[T]/(q)` whose determinant is `Res(p, q)`.
//! Multiplication by `T` is an isometry `γ` with characteristic polynomial
//! `q`, and composing it with the `ε`-reflection at the class of `1` gives an
//! isometry with characteristic polynomial `p`.
//!
//! On top of the construction the crate offers:
//!
//! * [`synthesis`]: spaces with an isometry of prescribed characteristic
//!   polynomial (symmetric or symplectic) and prescribed spinor norm;
//! * [`spinor`]: spinor norms by three independent routes, discriminants
//!   and the determinant relations they satisfy;
//! * [`jordan`]: which Jordan forms occur for isometries, with explicit
//!   realizations;
//! * [`lattice`]: signature, parity and classification of integral Gram
//!   matrices, and the search for cyclotomic partners `p` of a given `q`.
//!
//! All arithmetic is exact.

pub mod bezoutian;
pub mod error;
pub mod field;
pub mod format;
pub mod jordan;
pub mod lattice;
pub mod matrix;
pub mod poly;
pub mod spinor;
pub mod synthesis;

pub use bezoutian::{BilinearSpace, SkewBezoutian};
pub use error::{Error, Result};
pub use field::{class_mul, square_class, Field, FieldElement, SquareClass};
pub use matrix::{Matrix, Vector};
pub use poly::{CyclotomicProduct, Poly, Reciprocity, SeriesPrefix, Sign};
