//! Seeded generation of cell topologies and a Monte Carlo harness that sweeps
//! the counterparty count and aggregates market outcomes.
//!
//! Randomness comes from ChaCha8 streams keyed per (counterparty count, run
//! index) via a splitmix64 mix of the base seed, so runs are independent of
//! execution order and reproducible across platforms.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::auction::{self, AuctionConfig, AuctionOutcome, BuyerProfile};
use crate::caching::ZipfCatalog;
use crate::channel::{DelayParams, InterferenceSource, LinkGeometry, RadioEnvironment};
use crate::error::{Error, Result};
use crate::numeric::{mean_and_stddev, noise_power_mw};
use crate::stackelberg::{self, MarketWeights, SellerProfile, StackelbergOutcome};

/// Where the sellers' cache-hit probability comes from: a direct probability
/// (how the experiments are parameterized) or a Zipf catalog evaluated
/// analytically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CacheModel {
    Probability(f64),
    Catalog(ZipfCatalog),
}

impl CacheModel {
    pub fn hit_probability(&self) -> f64 {
        match self {
            CacheModel::Probability(p) => *p,
            CacheModel::Catalog(c) => crate::caching::cache_hit_probability(c),
        }
    }
}

/// Full description of one experiment family.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub cell_radius_m: f64,
    pub cluster_radius_m: f64,
    /// Maximum counterparty count; the sweep covers 1..=this.
    pub n_counterparties: u32,
    pub n_clusters: u32,
    pub noise_density_dbm_hz: f64,
    pub bandwidth_hz: f64,
    pub gain: f64,
    pub max_power_mw: f64,
    pub xi_r: f64,
    pub xi_d: f64,
    pub beta_ms: f64,
    pub cost_low: f64,
    pub cost_high: f64,
    pub cache: CacheModel,
    pub backhaul_cost: f64,
    pub background_users: u32,
    pub max_users: u32,
    pub auction: Option<AuctionConfig>,
    pub seed: u64,
    pub runs: u32,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        let field = |what, why: String| Err(Error::InvalidInput { what, why });
        if !(self.cell_radius_m > 0.0) {
            return field("ScenarioConfig.cell_radius_m", "must be > 0".into());
        }
        if !(self.cluster_radius_m > 0.0 && self.cluster_radius_m <= self.cell_radius_m) {
            return field(
                "ScenarioConfig.cluster_radius_m",
                format!(
                    "must be in (0, cell_radius_m]; got {} with cell {}",
                    self.cluster_radius_m, self.cell_radius_m
                ),
            );
        }
        if self.n_counterparties < 1 {
            return field("ScenarioConfig.n_counterparties", "must be >= 1".into());
        }
        if !(self.bandwidth_hz > 0.0) {
            return field("ScenarioConfig.bandwidth_hz", "must be > 0".into());
        }
        if !(self.gain > 0.0) {
            return field("ScenarioConfig.gain", "must be > 0".into());
        }
        if !(self.max_power_mw > 0.0) {
            return field("ScenarioConfig.max_power_mw", "must be > 0".into());
        }
        if !(self.xi_r >= 0.0) {
            return field("ScenarioConfig.xi_r", "must be >= 0".into());
        }
        if !(self.xi_d >= 0.0) {
            return field("ScenarioConfig.xi_d", "must be >= 0".into());
        }
        if !(self.beta_ms >= 0.0) {
            return field("ScenarioConfig.beta_ms", "must be >= 0".into());
        }
        if !(self.cost_low >= 0.0 && self.cost_low <= self.cost_high) {
            return field(
                "ScenarioConfig.cost_low",
                format!(
                    "must satisfy 0 <= cost_low <= cost_high; got [{}, {}]",
                    self.cost_low, self.cost_high
                ),
            );
        }
        if let CacheModel::Probability(p) = self.cache {
            if !(0.0..=1.0).contains(&p) {
                return field(
                    "ScenarioConfig.cache_hit",
                    format!("must be in [0, 1], got {p}"),
                );
            }
        }
        if !(self.backhaul_cost >= 0.0) {
            return field("ScenarioConfig.backhaul_cost", "must be >= 0".into());
        }
        if self.runs < 1 {
            return field("ScenarioConfig.runs", "must be >= 1".into());
        }
        let peak_users =
            self.n_counterparties as u64 + 1 + self.background_users as u64;
        if peak_users > self.max_users as u64 {
            return Err(Error::UserLimitExceeded {
                users: peak_users as u32,
                max_users: self.max_users,
            });
        }
        Ok(())
    }

    /// Integrated AWGN power over the configured band, in mW.
    pub fn noise_power_mw(&self) -> f64 {
        noise_power_mw(self.noise_density_dbm_hz, self.bandwidth_hz)
    }

    pub fn weights(&self) -> Result<MarketWeights> {
        MarketWeights::new(self.xi_r, self.xi_d)
    }
}

/// One drawn cell: counterparty links, the shared radio environment, and
/// per-counterparty relay costs.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    pub links: Vec<LinkGeometry>,
    pub env: RadioEnvironment,
    pub relay_costs: Vec<f64>,
}

/// Draw one topology: the buyer sits at the origin, counterparties fall
/// area-uniformly on the cluster disk, interfering cluster centers fall
/// area-uniformly on the cell disk conditioned on being at least a cluster
/// radius away, and relay costs are uniform on the configured range.
/// Interferers transmit at full power.
///
/// Draw order is fixed (distances, then interferer centers, then costs) so a
/// given RNG stream always produces the same topology.
pub fn draw_topology(config: &ScenarioConfig, rng: &mut impl Rng) -> Result<Topology> {
    config.validate()?;
    let n = config.n_counterparties as usize;

    let mut links = Vec::with_capacity(n);
    for _ in 0..n {
        // Area-uniform radius; guard the measure-zero draw of exactly zero.
        let u: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
        let distance = config.cluster_radius_m * u.sqrt();
        links.push(LinkGeometry::new(
            distance,
            config.gain,
            config.max_power_mw,
        )?);
    }

    // Conditional area-uniform draw on [cluster_radius, cell_radius]: the
    // inverse CDF of the rejection scheme, so it stays well defined when the
    // two radii coincide.
    let min_u = (config.cluster_radius_m / config.cell_radius_m).powi(2);
    let mut interferers = Vec::with_capacity(config.n_clusters as usize);
    for _ in 0..config.n_clusters {
        let u: f64 = min_u + (1.0 - min_u) * rng.gen::<f64>();
        let center_distance = config.cell_radius_m * u.sqrt();
        interferers.push(InterferenceSource::new(
            config.max_power_mw,
            config.gain,
            center_distance,
        )?);
    }

    let env = RadioEnvironment::new(config.bandwidth_hz, config.noise_power_mw(), interferers)?;

    let mut relay_costs = Vec::with_capacity(n);
    for _ in 0..n {
        let u: f64 = rng.gen();
        relay_costs.push(config.cost_low + (config.cost_high - config.cost_low) * u);
    }

    Ok(Topology {
        links,
        env,
        relay_costs,
    })
}

/// Everything one (counterparty count, run) cell produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    /// Prices all counterparties would post as sellers in the opening round.
    pub announced_prices: Vec<f64>,
    pub stackelberg: StackelbergOutcome,
    pub auction: Option<AuctionOutcome>,
}

/// Quantities aggregated per counterparty count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    /// Mean posted price across all counterparties acting as sellers.
    AvgSellerPrice,
    /// Total power the buyer purchases from participating sellers.
    TotalTradedPowerMw,
    BuyerReward,
    /// Mean reward over participating sellers (zero when none participate).
    AvgSellerReward,
    AuctionRounds,
    AuctionSellerReward,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::AvgSellerPrice,
        Metric::TotalTradedPowerMw,
        Metric::BuyerReward,
        Metric::AvgSellerReward,
        Metric::AuctionRounds,
        Metric::AuctionSellerReward,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Metric::AvgSellerPrice => "avg_seller_price",
            Metric::TotalTradedPowerMw => "total_traded_power_mw",
            Metric::BuyerReward => "buyer_reward",
            Metric::AvgSellerReward => "avg_seller_reward",
            Metric::AuctionRounds => "auction_rounds",
            Metric::AuctionSellerReward => "auction_seller_reward",
        }
    }

    pub fn is_auction(&self) -> bool {
        matches!(self, Metric::AuctionRounds | Metric::AuctionSellerReward)
    }
}

/// Mean and sample standard deviation of one metric at one counterparty
/// count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricSummary {
    pub n: u32,
    pub metric: Metric,
    pub mean: f64,
    pub stddev: f64,
    pub runs: u32,
}

impl MetricSummary {
    /// Standard error of the mean.
    pub fn stderr(&self) -> f64 {
        if self.runs == 0 {
            0.0
        } else {
            self.stddev / (self.runs as f64).sqrt()
        }
    }
}

/// Aggregated sweep results, ordered by counterparty count then metric.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryStats {
    pub rows: Vec<MetricSummary>,
}

impl SummaryStats {
    pub fn get(&self, n: u32, metric: Metric) -> Option<&MetricSummary> {
        self.rows.iter().find(|r| r.n == n && r.metric == metric)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the RNG stream for one (counterparty count, run) cell.
pub fn run_seed(base_seed: u64, n: u32, run: u32) -> u64 {
    splitmix64(base_seed ^ splitmix64(((n as u64) << 32) | run as u64))
}

/// Run the full sweep, handing every run's outcome to `observer` before
/// aggregation (used for trace emission and invariant audits).
///
/// For each counterparty count `n` in `1..=config.n_counterparties` and each
/// run, one topology is drawn and solved as a pricing game with the
/// counterparties as sellers; if an auction is configured the same topology
/// is also run as a clock auction with the counterparties as buyers.
pub fn run_monte_carlo_observed(
    config: &ScenarioConfig,
    mut observer: impl FnMut(u32, u32, &RunOutcome) -> Result<()>,
) -> Result<SummaryStats> {
    config.validate()?;
    let weights = config.weights()?;
    let cache_hit = config.cache.hit_probability();
    let mut rows = Vec::new();

    for n in 1..=config.n_counterparties {
        let cfg_n = ScenarioConfig {
            n_counterparties: n,
            ..config.clone()
        };
        let mut samples: Vec<Vec<f64>> = Metric::ALL.iter().map(|_| Vec::new()).collect();

        for run in 0..config.runs {
            let mut rng = ChaCha8Rng::seed_from_u64(run_seed(config.seed, n, run));
            let topology = draw_topology(&cfg_n, &mut rng)?;

            let sellers: Vec<SellerProfile> = topology
                .links
                .iter()
                .zip(&topology.relay_costs)
                .map(|(link, cost)| {
                    SellerProfile::new(*link, *cost, cache_hit, config.backhaul_cost)
                })
                .collect::<Result<_>>()?;

            let mut announced = Vec::with_capacity(sellers.len());
            for seller in &sellers {
                announced.push(stackelberg::optimal_price(
                    seller,
                    &topology.env,
                    sellers.len(),
                    &weights,
                )?);
            }

            let outcome = stackelberg::solve(
                &sellers,
                &topology.env,
                &weights,
                config.beta_ms,
                config.background_users,
                config.max_users,
            )?;

            let auction_outcome = match &config.auction {
                Some(auction_cfg) => {
                    let buyers: Vec<BuyerProfile> = topology
                        .links
                        .iter()
                        .map(|link| BuyerProfile::new(*link, weights))
                        .collect();
                    let delay = DelayParams::new(
                        config.beta_ms,
                        n + 1,
                        config.background_users,
                        config.max_users,
                    )?;
                    Some(auction::run(
                        auction_cfg,
                        &buyers,
                        &topology.env,
                        &delay,
                        &topology.relay_costs,
                    )?)
                }
                None => None,
            };

            let run_outcome = RunOutcome {
                announced_prices: announced,
                stackelberg: outcome,
                auction: auction_outcome,
            };
            observer(n, run, &run_outcome)?;

            let o = &run_outcome;
            let mean_announced = o.announced_prices.iter().sum::<f64>()
                / o.announced_prices.len() as f64;
            let participants = o.stackelberg.participating.len();
            let avg_seller_reward = if participants == 0 {
                0.0
            } else {
                o.stackelberg.seller_rewards.iter().sum::<f64>() / participants as f64
            };
            samples[0].push(mean_announced);
            samples[1].push(o.stackelberg.total_traded_power_mw());
            samples[2].push(o.stackelberg.buyer_reward);
            samples[3].push(avg_seller_reward);
            if let Some(a) = &o.auction {
                samples[4].push(a.final_clock as f64);
                samples[5].push(a.seller_reward);
            }
        }

        for (metric, sample) in Metric::ALL.iter().zip(&samples) {
            if sample.is_empty() {
                continue;
            }
            let (mean, stddev) = mean_and_stddev(sample);
            rows.push(MetricSummary {
                n,
                metric: *metric,
                mean,
                stddev,
                runs: sample.len() as u32,
            });
        }
    }

    Ok(SummaryStats { rows })
}

/// Run the sweep without observation.
pub fn run_monte_carlo(config: &ScenarioConfig) -> Result<SummaryStats> {
    run_monte_carlo_observed(config, |_, _, _| Ok(()))
}

/// Experiment defaults: a 500 m cell with 100 m clusters, ten counterparties
/// and ten interfering clusters, 5 MHz of shared band, -174 dBm/Hz noise,
/// ideal unit gain, 100 mW power cap, rate and delay weights of 3e-5 and
/// 0.1, a delay coefficient of 20 ms, relay costs uniform on [0.1, 0.5],
/// a 0.3 cache-hit probability, 0.2 backhaul unit cost, ten background
/// users under a 50-user cap, and a 100 mW auction opening at price 5 with
/// half-unit steps.
impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            cell_radius_m: 500.0,
            cluster_radius_m: 100.0,
            n_counterparties: 10,
            n_clusters: 10,
            noise_density_dbm_hz: -174.0,
            bandwidth_hz: 5e6,
            gain: 1.0,
            max_power_mw: 100.0,
            xi_r: 3e-5,
            xi_d: 0.1,
            beta_ms: 20.0,
            cost_low: 0.1,
            cost_high: 0.5,
            cache: CacheModel::Probability(0.3),
            backhaul_cost: 0.2,
            background_users: 10,
            max_users: 50,
            auction: Some(
                AuctionConfig::new(100.0, 5.0, 0.5, 10_000).expect("default auction is valid"),
            ),
            seed: 42,
            runs: 500,
        }
    }
}
