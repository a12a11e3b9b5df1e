use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus {a}+{b}rho: {reason}")]
    InvalidModulus {
        a: i64,
        b: i64,
        reason: &'static str,
    },

    #[error("Eisenstein-Jacobi integer arithmetic overflowed 64 bits")]
    Overflow,

    #[error("dimension count {dims} is outside 1..={max}")]
    DimsOutOfRange { dims: u32, max: u32 },

    #[error("broadcast schedules require b = a + 1, got {a}+{b}rho")]
    NotBroadcastShape { a: i64, b: i64 },

    #[error("{what} needs {required} units of work but the budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        required: u128,
        budget: u128,
    },

    #[error("node index {index} is out of range for a network of {node_count} nodes")]
    NodeOutOfRange { index: u64, node_count: u64 },

    #[error("coordinate tuple has {got} entries but the network has {expected} dimensions")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("link dimension {dim} is outside 1..={dims}")]
    LinkOutOfRange { dim: u8, dims: u32 },

    #[error("simulation invariant violated: {0}")]
    Invariant(String),
}
