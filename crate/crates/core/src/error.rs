use thiserror::Error;

use crate::simplex::Vertex;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    /// A configured work limit was hit. Never turned into a partial verdict.
    #[error("budget `{name}` exceeded (limit {limit})")]
    Budget { name: &'static str, limit: u128 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An ampleness challenge `(U, A)` without a witness, given as the facets of `A`.
    #[error("no witness for challenge U={u:?}, A={a_facets:?}")]
    NoWitness { u: Vec<Vertex>, a_facets: Vec<Vec<Vertex>> },

    #[error("no coset assignment satisfies the constraints at level {level}")]
    Unsatisfiable { level: usize },

    #[error("invalid format: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
