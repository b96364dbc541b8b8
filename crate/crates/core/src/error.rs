use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A marginal or conditional was requested on a state whose relevant
    /// reduced distribution depends on the discarded parties' inputs.
    #[error("state is signalling: marginal on boxes {boxes:?} is input-dependent")]
    SignallingState { boxes: Vec<usize> },

    /// Conditioning on an outcome of probability zero.
    #[error("conditioning on zero-probability outcome (box {box_index}, input {input}, output {output})")]
    ZeroProbabilityOutcome {
        box_index: usize,
        input: usize,
        output: usize,
    },

    /// Operation requires a different box signature.
    #[error("bad signature: {0}")]
    BadSignature(String),

    /// H-representation describes an empty polyhedron.
    #[error("empty polyhedron")]
    EmptyPolyhedron,

    /// A probability table violates nonnegativity or normalization,
    /// or a construction argument is malformed.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A chi table fails the universality constraint (its action on some
    /// extremal state is not a probability distribution).
    #[error("chi table is not universal: {0}")]
    NotUniversal(String),

    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
}
