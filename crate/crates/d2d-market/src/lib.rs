//! Deterministic simulator and solvers for device-to-device mobile-data
//! markets.
//!
//! Two market mechanisms are implemented over one radio model:
//!
//! * a leader-follower pricing game for one buyer purchasing transmission
//!   power from N sellers, solved in closed form by backward induction
//!   ([`stackelberg`]), and
//! * an ascending clock auction with cumulative clinching and proportional
//!   rationing for one seller allocating power among N buyers ([`auction`]).
//!
//! Supporting layers: SINR / Shannon-rate / delay evaluation ([`channel`]),
//! Zipf content caching ([`caching`]), seeded topology generation with a
//! Monte Carlo sweep harness ([`scenario`]), and experiment configuration
//! plus CSV/JSON output ([`config`], [`experiment`]).
//!
//! Start with the runnable examples:
//!
//! ```text
//! cargo run --example link_budget      # SINR, rates, delay for one cell
//! cargo run --example cache_popularity # Zipf law and cache-hit probability
//! cargo run --example pricing_game     # one solved pricing game
//! cargo run --example power_auction    # one clock auction, full trace
//! cargo run --example market_trends    # Monte Carlo sweep over market sizes
//! ```
//!
//! or with the CLI: `d2d-market run --config experiment.conf`.

pub mod auction;
pub mod caching;
pub mod channel;
pub mod config;
pub mod error;
pub mod experiment;
pub mod numeric;
pub mod scenario;
pub mod stackelberg;

pub use auction::{AuctionConfig, AuctionOutcome, BuyerProfile, ClockRecord};
pub use caching::ZipfCatalog;
pub use channel::{DelayParams, InterferenceSource, LinkGeometry, RadioEnvironment};
pub use config::{ExperimentSpec, Mode, OutputFormat};
pub use error::{Error, Result};
pub use scenario::{CacheModel, Metric, ScenarioConfig, SummaryStats, Topology};
pub use stackelberg::{MarketWeights, SellerProfile, StackelbergOutcome};
