use thiserror::Error;

use crate::graph::Edge;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph6: {0}")]
    Graph6(String),

    #[error("edge list, line {line}: {msg}")]
    EdgeList { line: usize, msg: String },

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("loop at vertex {0}; only simple graphs are supported")]
    Loop(usize),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("graph has {n} vertices, automorphism search limit is {limit}")]
    TooManyVertices { n: usize, limit: usize },

    #[error("automorphism group exceeds the element cap of {cap}")]
    TooManyAutomorphisms { cap: usize },

    #[error("search space of {required} colourings exceeds budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("component {component:?} is K2; the construction requires a graph without a K2 component")]
    K2Component { component: Vec<usize> },

    #[error("graph is not connected")]
    Disconnected,

    #[error("maximum degree {0} exceeds 2; expected a path or a cycle")]
    NotPathOrCycle(usize),

    #[error("list for {what} has {len} colours, at least {required} required")]
    ListTooShort { what: String, len: usize, required: usize },

    #[error("list for {0} contains a repeated colour")]
    DuplicateColour(String),

    #[error("no list given for {0}")]
    MissingList(String),

    #[error("colouring has no colour for edge {0}")]
    MissingEdgeColour(Edge),

    #[error("colouring has no colour for vertex {0}")]
    MissingVertexColour(usize),

    #[error("colouring assigns a colour to {0}, which is not in the graph")]
    UnknownElement(String),

    #[error("colour {colour} for {what} is not in its list")]
    NotInList { what: String, colour: String },

    #[error("expected {expected}, got {got}")]
    WrongShape { expected: &'static str, got: String },

    #[error("palette of {palette} colours cannot supply lists of length {k}")]
    PaletteTooSmall { palette: usize, k: usize },

    #[error("output failed certification: {0}")]
    CertificationFailed(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Size-limit and budget errors, as opposed to malformed input.
    pub fn is_limit(&self) -> bool {
        matches!(
            self,
            Error::TooManyVertices { .. }
                | Error::TooManyAutomorphisms { .. }
                | Error::BudgetExceeded { .. }
        )
    }
}
