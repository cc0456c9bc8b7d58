//! Exact symbolic computation for Kumjian-Pask algebras of row-finite,
//! locally convex higher-rank graphs.
//!
//! The crate provides:
//! - finite k-graphs presented as colored graphs with factorization squares
//!   ([`graph`], [`path`]), with a line-oriented text format ([`textio`]);
//! - eventually periodic boundary paths and the aperiodicity/cofinality
//!   predicates ([`boundary`]);
//! - exact coefficient rings and matrices over them ([`ring`], [`matrix`]);
//! - the Kumjian-Pask algebra engine with canonical normal forms
//!   ([`algebra`]) and an independent boundary-path representation oracle
//!   ([`rep`]);
//! - saturated hereditary vertex sets, graded basic ideals and the
//!   simplicity predicates ([`ideal`]);
//! - the desourcification of a graph with sources and its Morita-context
//!   span checks ([`desourcify`]);
//! - rank-2 Bratteli diagrams and the matrix-algebra isomorphism of their
//!   depth truncations ([`bratteli`]).

pub mod algebra;
pub mod boundary;
pub mod bratteli;
pub mod degree;
pub mod desourcify;
pub mod error;
pub mod graph;
pub mod ideal;
pub mod matrix;
pub mod path;
pub mod rep;
pub mod ring;
pub mod samples;
pub mod textio;

pub use algebra::AlgebraElem;
pub use boundary::BPath;
pub use degree::{Degree, ExtDegree, GradedDegree};
pub use error::{KpError, Result};
pub use graph::{EdgeId, KGraph, VertexId};
pub use path::Path;
pub use ring::{Integers, Laurent, Mod, Rationals, Ring, RingKind};
