//! Solve one buyer-initiated pricing game: four sellers post their optimal
//! prices, the buyer best-responds, and expensive sellers drop out.
//!
//!     cargo run --example pricing_game

use d2d_market::channel::{InterferenceSource, LinkGeometry, RadioEnvironment};
use d2d_market::numeric::noise_power_mw;
use d2d_market::stackelberg::{
    best_response_power, optimal_price, solve, MarketWeights, SellerProfile,
};

fn main() -> d2d_market::Result<()> {
    let env = RadioEnvironment::new(
        5e6,
        noise_power_mw(-174.0, 5e6),
        vec![InterferenceSource::new(100.0, 1.0, 400.0)?],
    )?;
    let weights = MarketWeights::new(3e-5, 0.1)?;
    let cache_hit = 0.3;
    let backhaul = 0.2;

    // Four candidate sellers at increasing distance; the last one also has an
    // absurd relay cost and will be priced out.
    let sellers = vec![
        SellerProfile::new(LinkGeometry::new(10.0, 1.0, 100.0)?, 0.12, cache_hit, backhaul)?,
        SellerProfile::new(LinkGeometry::new(25.0, 1.0, 100.0)?, 0.20, cache_hit, backhaul)?,
        SellerProfile::new(LinkGeometry::new(60.0, 1.0, 100.0)?, 0.35, cache_hit, backhaul)?,
        SellerProfile::new(LinkGeometry::new(90.0, 1.0, 100.0)?, 60.0, cache_hit, backhaul)?,
    ];

    println!("posted prices with all {} sellers in the market:", sellers.len());
    for (i, s) in sellers.iter().enumerate() {
        let p = optimal_price(s, &env, sellers.len(), &weights)?;
        let g = best_response_power(p, s, &env, sellers.len(), &weights)?;
        println!(
            "  seller {i}: d = {:>4.0} m, unit cost {:>5.2}, price {:>7.3}/mW, demand {:>7.3} mW",
            s.link().distance_m(),
            s.effective_cost(),
            p,
            g
        );
    }

    let outcome = solve(&sellers, &env, &weights, 20.0, 10, 50)?;
    println!("\nequilibrium (zero-demand sellers dropped, band reshared):");
    for (k, &idx) in outcome.participating.iter().enumerate() {
        println!(
            "  seller {idx}: price {:>7.3}/mW, sells {:>7.3} mW, reward {:>8.3}",
            outcome.prices[k], outcome.powers_mw[k], outcome.seller_rewards[k]
        );
    }
    println!("  total traded power {:>8.3} mW", outcome.total_traded_power_mw());
    println!("  buyer reward       {:>8.3}", outcome.buyer_reward);
    println!("  system delay       {:>8.3} ms", outcome.delay_ms);
    Ok(())
}
