//! Hauptmoduln and Belyi maps of genus-zero finite-index subgroups of the
//! modular group.
//!
//! A subgroup is given by a permutation pair `(σ0, σ1)` with `σ0² = σ1³ = 1`
//! acting transitively on its cosets. [`subgroup`] derives cosets, cusps and
//! invariants; [`solver`] computes the Fourier coefficients of the hauptmodul
//! at every cusp by an overlapping strip decomposition (sampling on
//! horocycles, FFT, Picard or GMRES); [`belyi`] assembles the rational map
//! `Φ` with `Φ(j_Γ(z)) = j(z)` from the special values of the hauptmodul.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod belyi;
pub mod mpcore;
pub mod perm;
pub mod solver;
pub mod subgroup;
pub mod triple;

pub use perm::Permutation;
pub use subgroup::SubgroupData;
pub use triple::TripleFile;
