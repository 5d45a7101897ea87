//! Exact arithmetic on Newton convex bodies `P = conv(G) + R^n_+` whose
//! generators are finitely many rational points together with tails
//! `p + q·j + r/j` converging along some coordinates and escaping along the
//! others.
//!
//! On top of membership and gauge computations the crate derives multiplier
//! ideals, jumping numbers, asymptotic coordinate subspaces and the cluster
//! points of the jumping numbers. Every decision is made in rational
//! arithmetic and comes with a certificate that can be re-checked; the
//! floating-point [`oracle`] exists only for cross-checks.

pub mod asymptotes;
pub mod body;
pub mod cluster;
pub mod error;
pub mod exact;
pub mod ideal;
pub mod io;
pub mod jumping;
pub mod membership;
pub mod oracle;

pub use body::{GeneratorFamily, GeneratorRef, SupportValue, TailSequence, WeightTerm};
pub use error::{Error, Result};
pub use exact::{Rational, RationalVec};
