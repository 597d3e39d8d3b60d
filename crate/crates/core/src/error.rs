//! Error type shared by every module.

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Exact polynomial division left a remainder.
    #[error("polynomial division is not exact")]
    NonDivisible,
    /// A denominator would not be a product of linear forms.
    #[error("denominator is not a product of linear forms")]
    NonLinearDenominator,
    /// Division by zero.
    #[error("division by zero")]
    DivisionByZero,
    /// A generator name is not part of the system.
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    /// Invalid Coxeter or Cartan data.
    #[error("invalid realization: {0}")]
    InvalidRealization(String),
    /// A word and a subexpression have different lengths.
    #[error("length mismatch: word has {word} letters, subexpression has {bits}")]
    LengthMismatch { word: usize, bits: usize },
    /// A word is not reduced.
    #[error("word is not reduced")]
    NotReduced,
    /// Two reduced words express different elements.
    #[error("words express different elements")]
    NotSameElement,
    /// A letter is not in the right descent set.
    #[error("letter is not in the right descent set")]
    NotInDescent,
    /// Source and target words do not match for composition.
    #[error("word mismatch in composition")]
    WordMismatch,
    /// The 2m-valent machinery is not implemented for this m.
    #[error("m = {0} is not supported")]
    UnsupportedM(u32),
    /// A light leaf plan is inconsistent with its word and subexpression.
    #[error("invalid light leaf plan: {0}")]
    PlanInvalid(String),
    /// Subexpressions express different elements.
    #[error("subexpressions express different elements")]
    ElementMismatch,
    /// A morphism is not in the span of a basis.
    #[error("morphism is not in the span of the basis")]
    NotInSpan,
    /// A morphism was constructed without a construction tree.
    #[error("morphism has no construction tree")]
    NoTree,
    /// Complexes do not match.
    #[error("complex mismatch")]
    ComplexMismatch,
    /// No null-homotopy exists within the degree window.
    #[error("not null-homotopic")]
    NotNullHomotopic,
    /// The requested degree exceeds the solver window.
    #[error("polynomial degree {0} exceeds the solver window")]
    WindowExceeded(i32),
    /// The filtration order has a cycle.
    #[error("class order has a cycle")]
    OrderCycle,
    /// A linear system has no solution.
    #[error("no solution: {0}")]
    NoSolution(String),
    /// An exact verification failed.
    #[error("verification failed: {0}")]
    Verification(String),
    /// Malformed input.
    #[error("parse error: {0}")]
    Parse(String),
}

/// Result alias.
pub type Result<T> = std::result::Result<T, Error>;
