//! Exact computations in the diagrammatic Hecke category and with Rouquier complexes.
//!
//! Morphisms between Bott–Samelson objects are represented by their localized
//! matrices: block matrices of rational functions indexed by subexpressions.
//! On top of this model the crate builds light leaves and double leaves bases,
//! complexes of Bott–Samelson objects, Hom complexes with their differential,
//! and verified homotopy data for braid relations and Hom computations.

pub mod braidhom;
pub mod certificate;
pub mod coxeter;
pub mod dg;
pub mod error;
pub mod hecke;
pub mod leaves;
pub mod linalg;
pub mod ring;
pub mod soergel;

pub use coxeter::{BraidLetter, BraidMove, BraidWord, CoxWord, CoxeterSystem, Decoration, DecoratedSubexpression, Element, RealizationConfig};
pub use error::{Error, Result};
pub use ring::{Monomial, Polynomial, RationalFunction, Scalar};
