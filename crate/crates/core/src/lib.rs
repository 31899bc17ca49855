//! Exact polarity testing for orthogonal representations and ED-degree transfer
//! for orthogonally invariant matrix varieties.
//!
//! - [`exact`]: rational matrices, rank, nullspaces and span membership.
//! - [`rep`]: orthogonal representations, validation and JSON I/O.
//! - [`catalog`]: constructors for the standard families of representations.
//! - [`polarity`]: the randomized exact polarity test and section tools.
//! - [`transfer`]: nearest points and critical points on isospectral and
//!   fixed-singular-value varieties.

pub mod catalog;
pub mod exact;
pub mod polarity;
pub mod rep;
pub mod transfer;

pub use catalog::{catalog_build, catalog_list, CatalogEntry, FamilyId, FamilySpec};
pub use exact::{ExactMatrix, Rational};
pub use polarity::{polarity_test, PolarityOptions, PolarityReport, Verdict};
pub use rep::{OrthogonalRep, RepFile, SliceBasis};
