//! Run one ascending clock auction with three buyers and print the whole
//! clock trace: bids shrink as the price rises, clinches lock in along the
//! way, and the last clock rations the remainder.
//!
//!     cargo run --example power_auction

use d2d_market::auction::{run, AuctionConfig, BuyerProfile};
use d2d_market::channel::{DelayParams, InterferenceSource, LinkGeometry, RadioEnvironment};
use d2d_market::numeric::noise_power_mw;
use d2d_market::stackelberg::MarketWeights;

fn main() -> d2d_market::Result<()> {
    let env = RadioEnvironment::new(
        5e6,
        noise_power_mw(-174.0, 5e6),
        vec![InterferenceSource::new(100.0, 1.0, 400.0)?],
    )?;
    // A content-hungry cluster: high rate value makes demand at the opening
    // price far exceed the 100 mW on offer.
    let weights = MarketWeights::new(3e-3, 0.1)?;
    let buyers: Vec<BuyerProfile> = [9.0, 25.0, 49.0]
        .iter()
        .map(|&d| Ok(BuyerProfile::new(LinkGeometry::new(d, 1.0, 100.0)?, weights)))
        .collect::<d2d_market::Result<_>>()?;
    let relay_costs = [0.10, 0.25, 0.40];

    let config = AuctionConfig::new(100.0, 5.0, 10.0, 10_000)?;
    let delay = DelayParams::new(20.0, buyers.len() as u32 + 1, 10, 50)?;
    let outcome = run(&config, &buyers, &env, &delay, &relay_costs)?;

    println!("clock  price/mW   bids (mW)                clinches (mW)");
    for record in &outcome.trace {
        let bids: Vec<String> = record.bids_mw.iter().map(|b| format!("{b:>7.2}")).collect();
        let clinches: Vec<String> = record
            .clinches_mw
            .iter()
            .map(|c| format!("{c:>7.2}"))
            .collect();
        println!(
            "{:>5}  {:>8.2}   [{}]   [{}]",
            record.clock,
            record.price,
            bids.join(" "),
            clinches.join(" ")
        );
    }

    println!("\ncleared at clock {}:", outcome.final_clock);
    for (i, ((alloc, paid), cost)) in outcome
        .allocations_mw
        .iter()
        .zip(&outcome.payments)
        .zip(&relay_costs)
        .enumerate()
    {
        println!(
            "  buyer {i}: wins {alloc:>7.3} mW, pays {paid:>9.3} (avg {:>6.3}/mW, seller cost {cost}/mW)",
            paid / alloc.max(1e-12)
        );
    }
    println!(
        "  supply sold {:>7.3} mW, seller reward {:.3}",
        outcome.total_allocated_mw(),
        outcome.seller_reward
    );
    Ok(())
}
