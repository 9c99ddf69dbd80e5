//! MDS self-dual codes from (extended) generalized Reed-Solomon codes.
//!
//! The crate builds finite fields, assembles GRS codes over subgroup and
//! coset evaluation sets, picks scaling vectors from quadratic-character
//! conditions, transports self-dual codes along Möbius transformations, and
//! certifies every result exactly (Gram matrix, rank, minimum distance).

pub mod cli;
pub mod constructions;
pub mod descriptor;
pub mod error;
pub mod field;
pub mod grs;
pub mod linalg;
pub mod mobius;
pub mod selfdual;

pub use error::{Error, Result};
pub use field::{Elem, Field, Op};
pub use grs::{EvaluationPoint, EvaluationSet, GrsCode, ScalingVector};
pub use linalg::Matrix;
