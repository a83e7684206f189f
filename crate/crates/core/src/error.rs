use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: u32, right: u32 },

    #[error("the empty word has no edge index")]
    EmptyWord,

    #[error("symbol {symbol} outside alphabet 1..={size}")]
    SymbolOutOfRange { symbol: u32, size: u32 },

    #[error("edge index not representable in 64 bits at depth {depth}")]
    IndexOverflow { depth: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),

    #[error("path count overflow at level {level}; lower the depth or use explicit path sampling")]
    CountOverflow { level: usize },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("M = {m} lies outside the sandwich interval [{entropy:.6}, {geometric:.6}]")]
    OutsideSandwich { m: u32, entropy: f64, geometric: f64 },

    #[error("no fixed point in (0,1) when M <= N (M = {m}, N = {n}); pi_n tends to 0")]
    NoInteriorFixedPoint { n: u32, m: u32 },

    #[error("degenerate input: {0}")]
    Degenerate(String),
}

impl Error {
    /// True for errors caused by a size or work limit rather than invalid input.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded(_) | Error::CountOverflow { .. } | Error::IndexOverflow { .. }
        )
    }
}
