//! Exact arithmetic for the additive coset geometry of iterated Laurent-series
//! fields `F = Q_p((t_2))...((t_n))`, together with the abstract "level
//! structure" machinery built on top of it:
//!
//! * [`hlf`] — field elements, distinguished sets (cosets of fractional
//!   ideals of the rank-n ring of integers), canonical forms, membership,
//!   the intersection trichotomy and a finite quotient model used as a
//!   brute-force oracle,
//! * [`setalg`] — a finite symbolic set algebra (unions, differences,
//!   rank-one ideal cosets) with exact level and uniform-level computation,
//! * [`measure`] — the finitely additive translation-invariant measure with
//!   values in Laurent polynomials over Q,
//! * [`cover`] — finite-scale cover decisions with subcover extraction and
//!   uncovered-witness construction,
//! * [`structure`] — descriptors for indexed families of neighbourhood sets
//!   (field structures, stride structures on Z, products, inflations,
//!   stacks) with axiom and rigidity checkers on finite index windows,
//! * [`zlevels`] — run-length level analysis of subsets of Z, prime windows
//!   and the stride-2 prime-pair statistic.
//!
//! All values are immutable and all operations are pure; everything is safe
//! to share across threads.
//!
//! ```
//! use levelset_core::cover::{self, CoverInstance};
//! use levelset_core::hlf::{DistinguishedSet, FieldShape};
//! use levelset_core::measure;
//! use levelset_core::setalg::SymbolicSet;
//!
//! // the ring of integers of Q_2((t)) and its two residue cosets mod 2
//! let shape = FieldShape::new(2, 2)?;
//! let o = DistinguishedSet::integers(shape);
//! let halves = o.coset_reps(1)?;
//!
//! // each half has measure 1/2 X^0, and together they cover O_F
//! assert_eq!(measure::mu_dist(&halves[0]).to_string(), "1/2");
//! let family: Vec<SymbolicSet> = halves.into_iter().map(SymbolicSet::Dist).collect();
//! let instance = CoverInstance::new(o.clone(), o.level(), family)?;
//! assert!(cover::covers(&instance)?.is_covered());
//! # Ok::<(), levelset_core::Error>(())
//! ```

pub mod cover;
pub mod error;
pub mod hlf;
pub mod measure;
pub mod multi_index;
pub mod oracle;
pub mod padic;
pub mod sample;
pub mod setalg;
pub mod structure;
pub mod zlevels;

pub use error::{Error, Result};
pub use hlf::{DistinguishedSet, FieldElement, FieldShape, IdealIndex};
pub use multi_index::MultiIndex;
pub use setalg::SymbolicSet;
