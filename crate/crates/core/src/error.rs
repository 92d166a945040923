use thiserror::Error;

use crate::group::GroupId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("group mismatch: {0} vs {1}")]
    GroupMismatch(GroupId, GroupId),
    #[error("integer overflow in exact arithmetic")]
    IntegerOverflow,
    #[error("size limit exceeded ({limit} elements)")]
    SizeLimitExceeded { limit: usize },
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("element not in window: {0}")]
    ElementNotInWindow(String),
    #[error("relation contains a cycle: {cycle:?}")]
    Contradiction { cycle: Vec<usize> },
    #[error("order is not total")]
    NotTotal,
    #[error("window is not a full rectangle in Z^2")]
    NotRectangular,
    #[error("domain not covered: {0}")]
    DomainNotCovered(String),
    #[error("inner order leaves pair ({0}, {1}) undecided")]
    InnerOrderIncomplete(usize, usize),
    #[error("membership predicate is not a subgroup on the window: {0}")]
    NotASubgroup(String),
    #[error("stabilizer collision: elements {0} and {1} have equal orbit values")]
    StabilizerCollision(usize, usize),
    #[error("solver budget of {seconds} s exceeded")]
    Timeout { seconds: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
