//! Error types shared across the crate.

use thiserror::Error;

/// Syntax error in a polynomial or diagram file, with 1-based location.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub msg: String,
}

impl ParseError {
    pub fn at(line: u32, col: u32, msg: impl Into<String>) -> Self {
        ParseError {
            line,
            col,
            msg: msg.into(),
        }
    }
}

/// Reasons a diagram cannot be fed to the cabling / state-sum pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("J is defined for pseudo-classical knots only")]
    NotPseudoClassical,
    #[error("expected a knot diagram (exactly one component), found {0} components")]
    NotAKnot(usize),
    #[error("no crossing with id {0}")]
    NoSuchCrossing(u32),
    #[error("the classical bracket requires an orientable surface")]
    NonOrientableSurface,
    #[error("the orientation double cover is defined for Klein-bottle diagrams")]
    NotKleinBottle,
    #[error("state-space enumeration guard exceeded: {crossings} crossings > {limit}")]
    TooManyCrossings { crossings: u32, limit: u32 },
    #[error("state assigns {got} crossings, diagram has {expected}")]
    StateSizeMismatch { got: usize, expected: usize },
    #[error("invalid diagram: {0}")]
    Invalid(String),
}

/// A rewriting move whose preconditions do not hold.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("insertion point lies inside a wall-gluing pair")]
    PositionInsideGluing,
    #[error("no such component {0}")]
    NoSuchComponent(usize),
    #[error("gap index {gap} out of range for component {component}")]
    GapOutOfRange { component: usize, gap: usize },
    #[error("crossing {0} is not a removable kink")]
    NotAKink(u32),
    #[error("crossings {0} and {1} do not bound a removable bigon")]
    NotABigon(u32, u32),
    #[error("crossings {0:?} do not form a height-consistent triangle")]
    NotATriangle([u32; 3]),
    #[error("local_sign must be +1 or -1")]
    BadSign,
    #[error("which_over must be 1 or 2")]
    BadStrandChoice,
    #[error("no crossing with id {0}")]
    NoSuchCrossing(u32),
}
