//! Wigner matrices with permuted entries: entry laws, symmetric permutations of
//! the entry set, mixed trace moments, noncrossing combinatorics, traffic states
//! on test graphs and anticommutator spectra.

pub mod entry;
pub mod error;
pub mod free;
pub mod perm;
pub mod spectra;
pub mod traffic;
pub mod wigner;

pub use entry::{DiagKind, EntryConfig, EntryKind, EntrySpec};
pub use error::{Error, Result};
pub use free::{CovarianceSpec, NCPartition, OpMatrix, Ratio, StarCovariance, StarVar, WordTable};
pub use num_complex::Complex64;
pub use perm::{ConditionReport, EntryPermutation, NamedFamily, PairReport, PermStats};
pub use spectra::{Histogram, SpectrumSample};
pub use traffic::{DoubleTreeReport, Edge, Orientation, TestGraph, VertexPartition};
pub use wigner::{McEstimate, WignerMatrix, Word};
