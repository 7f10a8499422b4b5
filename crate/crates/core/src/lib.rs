//! Digit-ratio chains of generalized Oppenheim expansions.
//!
//! The chain is driven by a distribution function `F` on `[0, 1]`, a growth
//! rule `phi` and a weight rule `q`: given the current digit `h`, the next
//! digit lands in the partition cell `(delta(h, k+1, q), delta(h, k, q)]` of
//! an `F`-distributed draw, where `delta(h, k, q) = phi(h)(1+q)/(k + phi(h)q)`.
//! The per-step ratio is the reciprocal of the selected cell's right endpoint.
//!
//! The crate provides
//! * [`dist`] — the distribution function `F`, its slope and tail
//!   diagnostics, and the condition checks used by the limit experiments;
//! * [`engine`] — chain systems, the seeded path sampler, and the iid
//!   Lüroth ratio law with its closed forms;
//! * [`extremes`] — running extremes, limit CDFs, and Monte Carlo
//!   comparisons of normalized extremes against those limits;
//! * [`bounds`] — every explicit inequality bound (product sandwiches,
//!   band inequalities, decoupling and blocking bounds) together with the
//!   Monte Carlo experiments that verify them;
//! * [`exec`] and [`rng`] — deterministic replica execution and the
//!   splittable seed scheme that keeps results worker-count invariant.
//!
//! Everything here is `no_std + alloc`; IO, config files and parallel
//! executors live in the companion CLI crate.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]
// `!(x >= 1.0)` style comparisons are deliberate: NaN parameters must fall
// into the rejecting branch, which the positive comparison would not do.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bounds;
pub mod dist;
pub mod engine;
pub mod exec;
pub mod extremes;
pub mod rng;

pub(crate) mod math;
