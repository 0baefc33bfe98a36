//! Ascending-clock auction for one seller allocating a divisible power
//! supply among N buyers.
//!
//! A price clock starts at `p0` and rises by `step` until aggregate demand
//! falls to the supply. Buyers bid their closed-form demand each clock. At
//! every over-demanded clock each buyer clinches the residual supply left by
//! the opponents' bids; clinched units are charged at the clock price where
//! they were clinched, which is what makes truthful bidding safe. The final
//! clock interpolates between the last two bid vectors so allocations sum to
//! the supply exactly.

use crate::channel::{unit_sinr_power, DelayParams, LinkGeometry, RadioEnvironment};
use crate::error::{Error, Result};
use crate::numeric::compensated_sum;
use crate::stackelberg::{rate_value_coefficient, MarketWeights};

/// Clock auction parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuctionConfig {
    supply_mw: f64,
    initial_price: f64,
    step: f64,
    max_clocks: u64,
}

impl AuctionConfig {
    pub fn new(supply_mw: f64, initial_price: f64, step: f64, max_clocks: u64) -> Result<Self> {
        if !(supply_mw > 0.0) {
            return Err(Error::InvalidInput {
                what: "AuctionConfig.supply_mw",
                why: format!("must be > 0, got {supply_mw}"),
            });
        }
        if !(initial_price >= 0.0) {
            return Err(Error::InvalidInput {
                what: "AuctionConfig.initial_price",
                why: format!("must be >= 0, got {initial_price}"),
            });
        }
        if !(step > 0.0) {
            return Err(Error::InvalidInput {
                what: "AuctionConfig.step",
                why: format!("must be > 0, got {step}"),
            });
        }
        if max_clocks < 1 {
            return Err(Error::InvalidInput {
                what: "AuctionConfig.max_clocks",
                why: "must be >= 1".into(),
            });
        }
        Ok(Self {
            supply_mw,
            initial_price,
            step,
            max_clocks,
        })
    }

    pub fn supply_mw(&self) -> f64 {
        self.supply_mw
    }

    pub fn initial_price(&self) -> f64 {
        self.initial_price
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn max_clocks(&self) -> u64 {
        self.max_clocks
    }

    /// Exact arithmetic clock price `p0 + t * step`.
    pub fn price_at(&self, clock: u64) -> f64 {
        self.initial_price + clock as f64 * self.step
    }
}

/// One bidding buyer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuyerProfile {
    link: LinkGeometry,
    weights: MarketWeights,
}

impl BuyerProfile {
    pub fn new(link: LinkGeometry, weights: MarketWeights) -> Self {
        Self { link, weights }
    }

    pub fn link(&self) -> LinkGeometry {
        self.link
    }

    pub fn weights(&self) -> MarketWeights {
        self.weights
    }
}

/// State of one clock: the posted price, every buyer's bid, and every
/// buyer's cumulative clinch.
#[derive(Debug, Clone, PartialEq)]
pub struct ClockRecord {
    pub clock: u64,
    pub price: f64,
    pub bids_mw: Vec<f64>,
    pub clinches_mw: Vec<f64>,
}

/// Full auction result, including the per-clock trace for audit.
#[derive(Debug, Clone, PartialEq)]
pub struct AuctionOutcome {
    pub trace: Vec<ClockRecord>,
    pub final_clock: u64,
    pub allocations_mw: Vec<f64>,
    pub payments: Vec<f64>,
    pub seller_reward: f64,
}

impl AuctionOutcome {
    pub fn total_allocated_mw(&self) -> f64 {
        compensated_sum(self.allocations_mw.iter().copied())
    }
}

/// Buyer's demand at a clock price: the same closed form as the pricing
/// game's best response, clamped to `[0, supply]` since no more than the
/// seller's whole stock can be asked for. Nonincreasing in price.
pub fn optimal_bid(
    price: f64,
    buyer: &BuyerProfile,
    env: &RadioEnvironment,
    n_buyers: usize,
    supply_mw: f64,
) -> Result<f64> {
    if !(price > 0.0) {
        return Err(Error::NonpositivePrice { price });
    }
    let b = rate_value_coefficient(env, &buyer.weights, n_buyers);
    let interior = b / price - unit_sinr_power(&buyer.link, env);
    Ok(interior.clamp(0.0, supply_mw))
}

/// Units buyer `buyer_index` is guaranteed at this clock: the supply left
/// over after all opponents' bids, never below what was already clinched.
///
/// The outer max keeps the clinch monotone even under bid functions whose
/// opponents' demand could rise; with the closed-form bids it never binds.
pub fn cumulative_clinch(
    supply_mw: f64,
    bids_mw: &[f64],
    buyer_index: usize,
    previous_clinch_mw: f64,
) -> f64 {
    let opponents: f64 = compensated_sum(
        bids_mw
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != buyer_index)
            .map(|(_, b)| *b),
    );
    previous_clinch_mw.max((supply_mw - opponents).max(0.0))
}

/// Split the supply at the stopping clock: each buyer keeps the final bid
/// and receives a share of the leftover proportional to how much demand they
/// withdrew between the last two clocks. Requires under-demand at the final
/// bids, strict over-demand at the previous ones, and element-wise
/// withdrawal.
pub fn proportional_ration(
    supply_mw: f64,
    bids_final: &[f64],
    bids_previous: &[f64],
) -> Result<Vec<f64>> {
    if bids_final.len() != bids_previous.len() {
        return Err(Error::LengthMismatch {
            what: "proportional_ration bid vectors",
            left: bids_final.len(),
            right: bids_previous.len(),
        });
    }
    let total_final = compensated_sum(bids_final.iter().copied());
    let total_previous = compensated_sum(bids_previous.iter().copied());
    if !(total_final <= supply_mw) {
        return Err(Error::RationingPrecondition {
            why: format!("final bids total {total_final} exceeds supply {supply_mw}"),
        });
    }
    if !(supply_mw < total_previous) {
        return Err(Error::RationingPrecondition {
            why: format!("previous bids total {total_previous} does not exceed supply {supply_mw}"),
        });
    }
    if let Some((i, _)) = bids_final
        .iter()
        .zip(bids_previous)
        .enumerate()
        .find(|(_, (f, p))| f > p)
    {
        return Err(Error::RationingPrecondition {
            why: format!("buyer {i} raised their bid between the last two clocks"),
        });
    }
    let withdrawn = total_previous - total_final;
    // Strictly positive by the two total checks above.
    debug_assert!(withdrawn > 0.0);
    let ratio = (supply_mw - total_final) / withdrawn;
    Ok(bids_final
        .iter()
        .zip(bids_previous)
        .map(|(f, p)| f + (p - f) * ratio)
        .collect())
}

/// Seller's auction reward: payments received minus per-buyer relay costs on
/// the allocated power.
pub fn seller_auction_reward(outcome: &AuctionOutcome, relay_costs: &[f64]) -> Result<f64> {
    if relay_costs.len() != outcome.allocations_mw.len() {
        return Err(Error::LengthMismatch {
            what: "seller_auction_reward costs vs allocations",
            left: relay_costs.len(),
            right: outcome.allocations_mw.len(),
        });
    }
    Ok(reward_from(
        &outcome.payments,
        &outcome.allocations_mw,
        relay_costs,
    ))
}

fn reward_from(payments: &[f64], allocations: &[f64], relay_costs: &[f64]) -> f64 {
    compensated_sum(
        payments
            .iter()
            .zip(allocations)
            .zip(relay_costs)
            .map(|((p, g), c)| p - c * g),
    )
}

/// Run the clock loop to completion.
///
/// Bids are collected for all buyers at each price; the auction stops at the
/// first clock `T` where aggregate demand is within supply. When `T >= 1`
/// allocations come from proportional rationing between clocks `T-1` and
/// `T`; when demand already clears at the initial price, the opening bids
/// are allocated as-is and charged at `p0` (the rationing and clinch-payment
/// machinery needs an over-demanded clock to refer back to). Payments charge
/// each clinch increment at the clock price where it occurred.
///
/// The bandwidth share inside bids uses the initial buyer count for the
/// whole auction, even for buyers whose demand falls to zero at later
/// clocks. `relay_costs` are the seller's unit cost of serving each buyer.
pub fn run(
    config: &AuctionConfig,
    buyers: &[BuyerProfile],
    env: &RadioEnvironment,
    delay: &DelayParams,
    relay_costs: &[f64],
) -> Result<AuctionOutcome> {
    if buyers.is_empty() {
        return Err(Error::EmptyMarket { what: "buyers" });
    }
    if relay_costs.len() != buyers.len() {
        return Err(Error::LengthMismatch {
            what: "auction relay costs vs buyers",
            left: relay_costs.len(),
            right: buyers.len(),
        });
    }
    let expected_users = buyers.len() as u32 + 1;
    if delay.active_users() != expected_users {
        return Err(Error::InvalidInput {
            what: "auction delay.active_users",
            why: format!(
                "must equal buyers + seller = {expected_users}, got {}",
                delay.active_users()
            ),
        });
    }

    let n = buyers.len();
    let supply = config.supply_mw;
    let collect_bids = |price: f64| -> Result<Vec<f64>> {
        buyers
            .iter()
            .map(|b| optimal_bid(price, b, env, n, supply))
            .collect()
    };

    let mut trace: Vec<ClockRecord> = Vec::new();
    let mut clinches = vec![0.0; n];
    let mut clock: u64 = 0;
    let mut price = config.price_at(0);
    let mut bids = collect_bids(price)?;

    // Over-demanded clocks: clinch, record, raise the price.
    while compensated_sum(bids.iter().copied()) > supply {
        for i in 0..n {
            clinches[i] = cumulative_clinch(supply, &bids, i, clinches[i]);
        }
        trace.push(ClockRecord {
            clock,
            price,
            bids_mw: bids.clone(),
            clinches_mw: clinches.clone(),
        });
        if clock >= config.max_clocks {
            return Err(Error::MaxClocksExceeded {
                max_clocks: config.max_clocks,
            });
        }
        clock += 1;
        price = config.price_at(clock);
        bids = collect_bids(price)?;
    }

    let allocations = if clock == 0 {
        bids.clone()
    } else {
        let previous = &trace.last().expect("clock >= 1 recorded").bids_mw;
        proportional_ration(supply, &bids, previous)?
    };

    // The stopping clock's clinch is the final allocation.
    trace.push(ClockRecord {
        clock,
        price,
        bids_mw: bids,
        clinches_mw: allocations.clone(),
    });

    let mut payments = vec![0.0; n];
    for i in 0..n {
        let mut paid = trace[0].clinches_mw[i] * trace[0].price;
        for t in 1..trace.len() {
            paid += trace[t].price * (trace[t].clinches_mw[i] - trace[t - 1].clinches_mw[i]);
        }
        payments[i] = paid;
    }

    let seller_reward = reward_from(&payments, &allocations, relay_costs);
    Ok(AuctionOutcome {
        trace,
        final_clock: clock,
        allocations_mw: allocations,
        payments,
        seller_reward,
    })
}
