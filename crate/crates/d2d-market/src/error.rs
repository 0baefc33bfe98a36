//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A domain type or argument violated one of its invariants.
    #[error("invalid {what}: {why}")]
    InvalidInput { what: &'static str, why: String },

    /// Transmit power outside `[0, max_power]`.
    #[error("transmit power {power_mw} mW outside [0, {max_power_mw}] mW")]
    PowerOutOfRange { power_mw: f64, max_power_mw: f64 },

    /// Bandwidth share outside `(0, W]`.
    #[error("bandwidth share {share_hz} Hz outside (0, {bandwidth_hz}] Hz")]
    BandwidthShareOutOfRange { share_hz: f64, bandwidth_hz: f64 },

    /// Paired lists of different lengths.
    #[error("{what}: length mismatch ({left} vs {right})")]
    LengthMismatch {
        what: &'static str,
        left: usize,
        right: usize,
    },

    /// Popularity rank outside `1..=K`.
    #[error("rank {rank} outside 1..={catalog_size}")]
    RankOutOfRange { rank: u64, catalog_size: u64 },

    /// Exact cache-hit enumeration would exceed the tractability guard.
    #[error(
        "cannot enumerate C({catalog_size},{device_capacity}) storage modes; \
         use the analytic cache-hit path"
    )]
    EnumerationTooLarge {
        catalog_size: u64,
        device_capacity: u64,
    },

    /// Prices must be strictly positive.
    #[error("nonpositive price {price}")]
    NonpositivePrice { price: f64 },

    /// Seller with zero effective cost: the closed-form price is zero and the
    /// demand it induces diverges.
    #[error("degenerate seller: relay cost plus expected backhaul cost is zero")]
    DegenerateSeller,

    /// Cellular user-count cap exceeded.
    #[error("{users} users exceed the cellular cap of {max_users}")]
    UserLimitExceeded { users: u32, max_users: u32 },

    /// Rationing called outside its admissible bid configuration.
    #[error("rationing precondition violated: {why}")]
    RationingPrecondition { why: String },

    /// The price clock hit the configured safety bound without clearing.
    #[error("auction did not clear within {max_clocks} clocks (step too small?)")]
    MaxClocksExceeded { max_clocks: u64 },

    /// Solvers need at least one counterparty.
    #[error("no {what} supplied")]
    EmptyMarket { what: &'static str },

    /// Configuration parse or validation failure.
    #[error("config{}: {message}", line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    Config {
        line: Option<usize>,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit status the CLI maps this error to: 2 for configuration
    /// and usage problems, 1 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
