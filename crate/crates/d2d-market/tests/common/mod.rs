//! Helpers shared by the integration test binaries.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use d2d_market::auction::{AuctionConfig, AuctionOutcome};
use d2d_market::channel::{InterferenceSource, LinkGeometry, RadioEnvironment};
use d2d_market::numeric::noise_power_mw;
use d2d_market::scenario::{CacheModel, ScenarioConfig};
use d2d_market::stackelberg::{best_response_power, optimal_price, MarketWeights, SellerProfile};

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1e-300)
}

/// One randomly drawn market whose closed-form solution is strictly interior
/// (power well inside the clamp, price large enough for a 1e-3 grid).
pub struct InteriorScenario {
    pub seller: SellerProfile,
    pub env: RadioEnvironment,
    pub weights: MarketWeights,
    pub n_sellers: usize,
}

/// Draw `count` interior-solution scenarios from a seeded stream. Draws whose
/// closed form lands near the clamp bounds (or at prices too small for the
/// fixed-resolution grid) are discarded and redrawn.
pub fn interior_scenarios(seed: u64, count: usize) -> Vec<InteriorScenario> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = MarketWeights::new(3e-5, 0.1).unwrap();
    let noise = noise_power_mw(-174.0, 5e6);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let distance = 1.0 + 59.0 * rng.gen::<f64>();
        let m = rng.gen_range(1..=3);
        let interferers: Vec<InterferenceSource> = (0..m)
            .map(|_| {
                InterferenceSource::new(100.0, 1.0, 100.0 + 400.0 * rng.gen::<f64>()).unwrap()
            })
            .collect();
        let env = RadioEnvironment::new(5e6, noise, interferers).unwrap();
        let relay_cost = 0.05 + 0.35 * rng.gen::<f64>();
        let cache_hit = [0.3, 0.4, 0.5][rng.gen_range(0..3)];
        let link = LinkGeometry::new(distance, 1.0, 100.0).unwrap();
        let seller = SellerProfile::new(link, relay_cost, cache_hit, 0.2).unwrap();
        let n_sellers = rng.gen_range(1..=4);

        let price = optimal_price(&seller, &env, n_sellers, &weights).unwrap();
        let power = best_response_power(price, &seller, &env, n_sellers, &weights).unwrap();
        if (0.5..=50.0).contains(&price) && (0.5..=95.0).contains(&power) {
            out.push(InteriorScenario {
                seller,
                env,
                weights,
                n_sellers,
            });
        }
    }
    out
}

/// A parameterization with light interference and cheap sellers, where both
/// mechanisms trade at every market size (used to exercise live multi-round
/// auctions and populated pricing games).
pub fn live_market_config() -> ScenarioConfig {
    ScenarioConfig {
        n_counterparties: 4,
        n_clusters: 1,
        cost_low: 0.05,
        cost_high: 0.2,
        backhaul_cost: 0.1,
        cache: CacheModel::Probability(0.3),
        auction: Some(AuctionConfig::new(100.0, 0.05, 0.01, 100_000).unwrap()),
        runs: 50,
        ..ScenarioConfig::default()
    }
}

/// Audit one auction outcome against every mechanism invariant. Returns a
/// description of the first violation.
pub fn check_auction_trace(
    outcome: &AuctionOutcome,
    config: &AuctionConfig,
) -> Result<(), String> {
    let supply = config.supply_mw();
    let n = outcome.allocations_mw.len();
    if outcome.trace.is_empty() {
        return Err("empty trace".into());
    }
    if outcome.trace.len() as u64 != outcome.final_clock + 1 {
        return Err(format!(
            "trace length {} does not match final clock {}",
            outcome.trace.len(),
            outcome.final_clock
        ));
    }

    let mut prev_total_bid = f64::INFINITY;
    let mut prev_clinches = vec![0.0; n];
    for (t, record) in outcome.trace.iter().enumerate() {
        if record.clock != t as u64 {
            return Err(format!("clock {} at trace position {t}", record.clock));
        }
        // Arithmetic price clock, bit-exact.
        if record.price != config.price_at(t as u64) {
            return Err(format!(
                "price {} at clock {t}, expected {}",
                record.price,
                config.price_at(t as u64)
            ));
        }
        if record.bids_mw.len() != n || record.clinches_mw.len() != n {
            return Err(format!("ragged record at clock {t}"));
        }
        let total_bid: f64 = record.bids_mw.iter().sum();
        if total_bid > prev_total_bid + 1e-9 {
            return Err(format!(
                "aggregate demand rose from {prev_total_bid} to {total_bid} at clock {t}"
            ));
        }
        prev_total_bid = total_bid;

        let total_clinch: f64 = record.clinches_mw.iter().sum();
        if total_clinch > supply + 1e-9 {
            return Err(format!(
                "clinches total {total_clinch} exceed supply at clock {t}"
            ));
        }
        for b in 0..n {
            if record.clinches_mw[b] < prev_clinches[b] - 1e-9 {
                return Err(format!("buyer {b} clinch decreased at clock {t}"));
            }
        }
        prev_clinches.clone_from(&record.clinches_mw);
    }

    let last = outcome.trace.last().unwrap();
    let total_alloc: f64 = outcome.allocations_mw.iter().sum();
    if outcome.final_clock == 0 {
        if outcome.allocations_mw != last.bids_mw {
            return Err("clock-0 clearing must allocate the opening bids".into());
        }
    } else {
        if (total_alloc - supply).abs() > 1e-9 {
            return Err(format!("allocations total {total_alloc}, supply {supply}"));
        }
        let previous = &outcome.trace[outcome.trace.len() - 2];
        for b in 0..n {
            if outcome.allocations_mw[b] < last.bids_mw[b] - 1e-9
                || outcome.allocations_mw[b] > previous.bids_mw[b] + 1e-9
            {
                return Err(format!(
                    "buyer {b} allocation {} outside [{}, {}]",
                    outcome.allocations_mw[b], last.bids_mw[b], previous.bids_mw[b]
                ));
            }
        }
    }

    let p0 = config.price_at(0);
    let p_final = config.price_at(outcome.final_clock);
    for b in 0..n {
        let alloc = outcome.allocations_mw[b];
        let paid = outcome.payments[b];
        if paid < p0 * alloc - 1e-9 || paid > p_final * alloc + 1e-9 {
            return Err(format!(
                "buyer {b} payment {paid} outside [{}, {}]",
                p0 * alloc,
                p_final * alloc
            ));
        }
    }
    Ok(())
}
