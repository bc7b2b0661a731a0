//! Combinatorial codes realized by axis-parallel boxes.
//!
//! - [`code`]: codewords, codes, the intersection product, `Δ(C)`, canonical forms.
//! - [`geometry`]: exact intervals, boxes, realizations and the grid oracle for `code(U)`.
//! - [`normalize`]: integer-corner normalization and the open/closed equivalence.
//! - [`interval`]: enumeration and recognition of interval codes.
//! - [`dim`]: closure of interval codes under the product and box dimension.
//! - [`constructions`]: named codes and the constructions built on them.
//! - [`acceptance`]: the end-to-end verification suite.

pub mod acceptance;
pub mod code;
pub mod constructions;
pub mod dim;
pub mod error;
pub mod geometry;
pub mod interval;
pub mod json;
pub mod normalize;
pub mod random;

pub use code::{intersection_product, Code, Codeword, WordSet};
pub use dim::{bdim, closure, Bdim};
pub use error::{Error, Result};
pub use geometry::{code_of_interiors, code_of_realization, Interval, Rational, Realization};
pub use interval::{is_interval_code, realize_interval_code};
