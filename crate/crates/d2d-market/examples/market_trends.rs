//! Monte Carlo sweep over market sizes in a lightly interfered cell where
//! both mechanisms trade at every size: posted prices fall with competition
//! while the auction runs fewer clocks as the bandwidth share dilutes
//! per-buyer demand.
//!
//!     cargo run --release --example market_trends

use d2d_market::auction::AuctionConfig;
use d2d_market::scenario::{run_monte_carlo, CacheModel, Metric, ScenarioConfig};

fn main() -> d2d_market::Result<()> {
    let config = ScenarioConfig {
        n_counterparties: 8,
        n_clusters: 1,
        cost_low: 0.05,
        cost_high: 0.2,
        backhaul_cost: 0.1,
        cache: CacheModel::Probability(0.3),
        auction: Some(AuctionConfig::new(100.0, 0.05, 0.01, 100_000)?),
        seed: 42,
        runs: 200,
        ..ScenarioConfig::default()
    };
    let stats = run_monte_carlo(&config)?;

    println!("pricing game ({} runs per market size):", config.runs);
    println!("  N   avg posted price   traded power (mW)   buyer reward");
    for n in 1..=config.n_counterparties {
        let price = stats.get(n, Metric::AvgSellerPrice).unwrap();
        let power = stats.get(n, Metric::TotalTradedPowerMw).unwrap();
        let reward = stats.get(n, Metric::BuyerReward).unwrap();
        println!(
            "  {n}   {:>9.4} ± {:<6.4}   {:>9.3} ± {:<7.3}   {:>9.3}",
            price.mean,
            price.stderr(),
            power.mean,
            power.stderr(),
            reward.mean
        );
    }

    println!("\nclock auction (opening price 0.05, step 0.01, 100 mW supply):");
    println!("  N   mean rounds   seller reward");
    for n in 1..=config.n_counterparties {
        let rounds = stats.get(n, Metric::AuctionRounds).unwrap();
        let reward = stats.get(n, Metric::AuctionSellerReward).unwrap();
        println!(
            "  {n}   {:>9.2}   {:>11.3} ± {:<7.3}",
            rounds.mean,
            reward.mean,
            reward.stderr()
        );
    }

    println!("\nhigher cache-hit probability lowers posted prices:");
    println!("  N   Pr = 0.3    Pr = 0.5");
    let raised = run_monte_carlo(&ScenarioConfig {
        cache: CacheModel::Probability(0.5),
        ..config.clone()
    })?;
    for n in 1..=config.n_counterparties {
        println!(
            "  {n}   {:>8.4}    {:>8.4}",
            stats.get(n, Metric::AvgSellerPrice).unwrap().mean,
            raised.get(n, Metric::AvgSellerPrice).unwrap().mean,
        );
    }
    Ok(())
}
