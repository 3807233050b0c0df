use thiserror::Error;

use crate::KnotId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid order N = {0}: the root-of-unity order must be at least 1")]
    InvalidOrder(u64),

    #[error("exact evaluation needs {terms} terms, over the budget of {budget}")]
    ExactBudget { terms: u64, budget: u64 },

    #[error("direct mode overflows at N = {order}: {detail}")]
    DirectOverflow { order: u64, detail: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("singular input: {0}")]
    Singular(String),

    #[error("p = {re} + {im}i lies on the pole/zero lattice of S_gamma")]
    Pole { re: f64, im: f64 },

    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),

    #[error("elimination degenerate: {0}")]
    Degenerate(String),

    #[error(
        "{count} stationary points of {knot} satisfy the selection condition, expected exactly one"
    )]
    Selection { knot: KnotId, count: usize },

    #[error("least-squares design is rank deficient: {0}")]
    RankDeficient(String),

    #[error("invalid growth series: {0}")]
    InvalidSeries(String),

    #[error("i/o: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}
