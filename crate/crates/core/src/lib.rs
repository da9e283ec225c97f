//! Isomorphism testing for tournaments of bounded twin width.
//!
//! The crate is organised bottom-up:
//!
//! * [`graphcore`]: digraphs, tournaments, partitions, relational structures
//!   with red edges, quotients and connectivity.
//! * [`widths`]: contraction sequences, twin width, cut width, directed path
//!   and tree decompositions and the conversions between them.
//! * [`wl`]: k-dimensional Weisfeiler-Leman refinement and partition sequences.
//! * [`permgroup`]: permutation groups with stabilizer chains, cosets and
//!   backtracking transporter searches.
//! * [`isokit`]: the lifting procedure, the homogeneous case and the
//!   top-level tournament isomorphism test, plus brute-force oracles.
//! * [`cfigen`]: CFI tournaments over 3-regular bases, toroidal grids, walls
//!   and their contraction sequences.
//! * [`io`]: the plain-text file formats.
//!
//! Group actions compose left to right: `a.then(b)` applies `a` first.
//! A coset `Γθ` is the set of maps `x ↦ θ(γ(x))`.

#![allow(clippy::needless_range_loop)]

pub mod cfigen;
pub mod error;
pub mod graphcore;
pub mod io;
pub mod isokit;
pub mod permgroup;
pub mod widths;
pub mod wl;

pub use error::{Error, Result};
