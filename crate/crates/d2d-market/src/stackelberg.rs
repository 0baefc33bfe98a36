//! Backward-induction solver for the one-buyer, N-seller pricing game.
//!
//! Sellers move first and post unit power prices; the buyer responds with a
//! power purchase per seller. Both moves have closed forms: the buyer's
//! first-order condition gives a demand of `B/p - a` (with `B` the per-link
//! rate-value coefficient and `a` the link's unit-SINR power), and
//! substituting that demand into the seller's profit gives the optimal price
//! `sqrt(B * e / a)` where `e` is the seller's expected unit cost. Demands
//! are clamped to `[0, max_power]`; sellers whose clamped demand is zero are
//! dropped and the game re-solved on the smaller set, which widens the
//! per-link bandwidth share, until the participant set is stable.

use crate::channel::{
    buyer_aggregate_rate, system_delay, unit_sinr_power, DelayParams, LinkGeometry,
    RadioEnvironment,
};
use crate::error::{Error, Result};
use crate::numeric::compensated_sum;

/// One candidate seller: link geometry plus cost structure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SellerProfile {
    link: LinkGeometry,
    relay_cost: f64,
    cache_hit: f64,
    backhaul_cost: f64,
}

impl SellerProfile {
    pub fn new(
        link: LinkGeometry,
        relay_cost: f64,
        cache_hit: f64,
        backhaul_cost: f64,
    ) -> Result<Self> {
        if !(relay_cost >= 0.0) {
            return Err(Error::InvalidInput {
                what: "SellerProfile.relay_cost",
                why: format!("must be >= 0, got {relay_cost}"),
            });
        }
        if !(backhaul_cost >= 0.0) {
            return Err(Error::InvalidInput {
                what: "SellerProfile.backhaul_cost",
                why: format!("must be >= 0, got {backhaul_cost}"),
            });
        }
        if !(0.0..=1.0).contains(&cache_hit) {
            return Err(Error::InvalidInput {
                what: "SellerProfile.cache_hit",
                why: format!("must be in [0, 1], got {cache_hit}"),
            });
        }
        let profile = Self {
            link,
            relay_cost,
            cache_hit,
            backhaul_cost,
        };
        if profile.effective_cost() <= 0.0 {
            return Err(Error::DegenerateSeller);
        }
        Ok(profile)
    }

    pub fn link(&self) -> LinkGeometry {
        self.link
    }

    pub fn relay_cost(&self) -> f64 {
        self.relay_cost
    }

    pub fn cache_hit(&self) -> f64 {
        self.cache_hit
    }

    pub fn backhaul_cost(&self) -> f64 {
        self.backhaul_cost
    }

    /// Expected unit cost of serving: relay cost plus backhaul cost weighted
    /// by the miss probability.
    pub fn effective_cost(&self) -> f64 {
        self.relay_cost + self.backhaul_cost * (1.0 - self.cache_hit)
    }
}

/// Normalizing weights turning bit rate and delay into currency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketWeights {
    rate_reward: f64,
    delay_cost: f64,
}

impl MarketWeights {
    pub fn new(rate_reward: f64, delay_cost: f64) -> Result<Self> {
        if !(rate_reward >= 0.0) {
            return Err(Error::InvalidInput {
                what: "MarketWeights.rate_reward",
                why: format!("must be >= 0, got {rate_reward}"),
            });
        }
        if !(delay_cost >= 0.0) {
            return Err(Error::InvalidInput {
                what: "MarketWeights.delay_cost",
                why: format!("must be >= 0, got {delay_cost}"),
            });
        }
        Ok(Self {
            rate_reward,
            delay_cost,
        })
    }

    /// Reward per bit/s of aggregate rate.
    pub fn rate_reward(&self) -> f64 {
        self.rate_reward
    }

    /// Cost per millisecond of system delay.
    pub fn delay_cost(&self) -> f64 {
        self.delay_cost
    }
}

/// Marginal rate value coefficient `W * xi_R / ((N+1) * ln 2)` for a market
/// of `n_links` simultaneous links sharing the band evenly with the buyer.
pub(crate) fn rate_value_coefficient(
    env: &RadioEnvironment,
    weights: &MarketWeights,
    n_links: usize,
) -> f64 {
    env.bandwidth_hz() * weights.rate_reward()
        / ((n_links as f64 + 1.0) * std::f64::consts::LN_2)
}

/// Solved market outcome. Index `i` of the per-participant vectors refers to
/// `participating[i]`, a position in the original seller slice.
#[derive(Debug, Clone, PartialEq)]
pub struct StackelbergOutcome {
    pub participating: Vec<usize>,
    pub prices: Vec<f64>,
    pub powers_mw: Vec<f64>,
    pub buyer_reward: f64,
    pub seller_rewards: Vec<f64>,
    pub delay_ms: f64,
}

impl StackelbergOutcome {
    fn empty() -> Self {
        Self {
            participating: Vec::new(),
            prices: Vec::new(),
            powers_mw: Vec::new(),
            buyer_reward: 0.0,
            seller_rewards: Vec::new(),
            delay_ms: 0.0,
        }
    }

    pub fn total_traded_power_mw(&self) -> f64 {
        compensated_sum(self.powers_mw.iter().copied())
    }
}

/// Buyer's realized reward: rate value minus delay cost minus payments.
///
/// `delay.active_users` must equal the number of sellers plus one.
pub fn buyer_reward(
    powers_mw: &[f64],
    prices: &[f64],
    sellers: &[SellerProfile],
    env: &RadioEnvironment,
    weights: &MarketWeights,
    delay: &DelayParams,
) -> Result<f64> {
    if powers_mw.len() != prices.len() {
        return Err(Error::LengthMismatch {
            what: "buyer_reward powers vs prices",
            left: powers_mw.len(),
            right: prices.len(),
        });
    }
    if powers_mw.len() != sellers.len() {
        return Err(Error::LengthMismatch {
            what: "buyer_reward powers vs sellers",
            left: powers_mw.len(),
            right: sellers.len(),
        });
    }
    if sellers.is_empty() {
        return Err(Error::EmptyMarket { what: "sellers" });
    }
    let expected_users = sellers.len() as u32 + 1;
    if delay.active_users() != expected_users {
        return Err(Error::InvalidInput {
            what: "buyer_reward delay.active_users",
            why: format!(
                "must equal sellers + buyer = {expected_users}, got {}",
                delay.active_users()
            ),
        });
    }
    let links: Vec<LinkGeometry> = sellers.iter().map(|s| s.link()).collect();
    let rate = buyer_aggregate_rate(powers_mw, &links, env)?;
    let payments = compensated_sum(prices.iter().zip(powers_mw).map(|(p, g)| p * g));
    Ok(weights.rate_reward() * rate - weights.delay_cost() * system_delay(delay) - payments)
}

/// Seller's expected reward for trading `power_mw` at `price`: the cached
/// branch earns `price - relay_cost` per mW, the miss branch additionally
/// pays the backhaul cost.
pub fn seller_reward(price: f64, power_mw: f64, profile: &SellerProfile) -> Result<f64> {
    if !(power_mw >= 0.0) {
        return Err(Error::PowerOutOfRange {
            power_mw,
            max_power_mw: f64::INFINITY,
        });
    }
    let hit = profile.cache_hit;
    Ok(hit * (price - profile.relay_cost) * power_mw
        + (1.0 - hit) * (price - profile.relay_cost - profile.backhaul_cost) * power_mw)
}

/// Buyer's profit-maximizing power purchase from one seller at a posted
/// price, in a market of `n_sellers` links: `B/p - a`, clamped to
/// `[0, max_power]`. Strictly decreasing in price on the interior.
pub fn best_response_power(
    price: f64,
    seller: &SellerProfile,
    env: &RadioEnvironment,
    n_sellers: usize,
    weights: &MarketWeights,
) -> Result<f64> {
    if !(price > 0.0) {
        return Err(Error::NonpositivePrice { price });
    }
    let b = rate_value_coefficient(env, weights, n_sellers);
    let interior = b / price - unit_sinr_power(&seller.link, env);
    Ok(interior.clamp(0.0, seller.link.max_power_mw()))
}

/// Seller's profit-maximizing price given the buyer's demand response:
/// `sqrt(B * effective_cost / a)`.
pub fn optimal_price(
    seller: &SellerProfile,
    env: &RadioEnvironment,
    n_sellers: usize,
    weights: &MarketWeights,
) -> Result<f64> {
    let e = seller.effective_cost();
    if e <= 0.0 {
        return Err(Error::DegenerateSeller);
    }
    let b = rate_value_coefficient(env, weights, n_sellers);
    Ok((b * e / unit_sinr_power(&seller.link, env)).sqrt())
}

/// Solve the full game: closed-form prices and demands, then the
/// participation fixed point. All sellers with zero clamped demand are
/// dropped simultaneously each round and the game re-solved on the rest; the
/// round count is bounded by N since the participant set only shrinks.
///
/// An empty participant set is a valid outcome with zero rewards and no
/// delay (no transaction takes place). `background_users` and `max_users`
/// feed the delay model; the user cap is checked against the full candidate
/// market up front.
pub fn solve(
    sellers: &[SellerProfile],
    env: &RadioEnvironment,
    weights: &MarketWeights,
    beta_ms: f64,
    background_users: u32,
    max_users: u32,
) -> Result<StackelbergOutcome> {
    if sellers.is_empty() {
        return Err(Error::EmptyMarket { what: "sellers" });
    }
    let candidate_users = sellers.len() as u64 + 1 + background_users as u64;
    if candidate_users > max_users as u64 {
        return Err(Error::UserLimitExceeded {
            users: candidate_users as u32,
            max_users,
        });
    }

    let mut active: Vec<usize> = (0..sellers.len()).collect();
    let mut prices: Vec<f64> = Vec::new();
    let mut powers: Vec<f64> = Vec::new();
    loop {
        if active.is_empty() {
            return Ok(StackelbergOutcome::empty());
        }
        prices.clear();
        powers.clear();
        for &i in &active {
            let price = optimal_price(&sellers[i], env, active.len(), weights)?;
            let power = best_response_power(price, &sellers[i], env, active.len(), weights)?;
            prices.push(price);
            powers.push(power);
        }
        let survivors: Vec<usize> = active
            .iter()
            .zip(&powers)
            .filter(|(_, g)| **g > 0.0)
            .map(|(i, _)| *i)
            .collect();
        if survivors.len() == active.len() {
            break;
        }
        active = survivors;
    }

    let participants: Vec<SellerProfile> = active.iter().map(|&i| sellers[i]).collect();
    let delay = DelayParams::new(
        beta_ms,
        active.len() as u32 + 1,
        background_users,
        max_users,
    )?;
    let buyer = buyer_reward(&powers, &prices, &participants, env, weights, &delay)?;
    let mut rewards = Vec::with_capacity(active.len());
    for ((price, power), profile) in prices.iter().zip(&powers).zip(&participants) {
        rewards.push(seller_reward(*price, *power, profile)?);
    }
    Ok(StackelbergOutcome {
        participating: active,
        prices,
        powers_mw: powers,
        buyer_reward: buyer,
        seller_rewards: rewards,
        delay_ms: system_delay(&delay),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::InterferenceSource;

    fn quiet_env() -> RadioEnvironment {
        RadioEnvironment::new(5e6, 1e-3, vec![]).unwrap()
    }

    fn seller(distance: f64, relay_cost: f64) -> SellerProfile {
        let link = LinkGeometry::new(distance, 1.0, 100.0).unwrap();
        SellerProfile::new(link, relay_cost, 0.3, 0.2).unwrap()
    }

    fn weights() -> MarketWeights {
        MarketWeights::new(3e-5, 0.1).unwrap()
    }

    #[test]
    fn buyer_reward_all_zero_is_zero() {
        let sellers = vec![seller(25.0, 0.2), seller(49.0, 0.3)];
        let env = quiet_env();
        let delay = DelayParams::new(0.0, 3, 0, 50).unwrap();
        let r = buyer_reward(&[0.0, 0.0], &[1.0, 1.0], &sellers, &env, &weights(), &delay)
            .unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn buyer_reward_pure_payment() {
        let sellers = vec![seller(25.0, 0.2), seller(49.0, 0.3)];
        let env = quiet_env();
        let delay = DelayParams::new(0.0, 3, 0, 50).unwrap();
        let w = MarketWeights::new(0.0, 0.1).unwrap();
        let r = buyer_reward(&[10.0, 20.0], &[2.0, 0.5], &sellers, &env, &w, &delay).unwrap();
        assert!((r - -(2.0 * 10.0 + 0.5 * 20.0)).abs() < 1e-12);
    }

    #[test]
    fn buyer_reward_matches_term_by_term_oracle() {
        use crate::channel::{link_rate, system_delay};
        let env = RadioEnvironment::new(
            5e6,
            crate::numeric::noise_power_mw(-174.0, 5e6),
            vec![InterferenceSource::new(100.0, 1.0, 400.0).unwrap()],
        )
        .unwrap();
        let sellers = vec![seller(30.0, 0.15), seller(70.0, 0.45)];
        let powers = [12.5, 60.0];
        let prices = [1.7, 0.9];
        let w = weights();
        let delay = DelayParams::new(20.0, 3, 10, 50).unwrap();

        let share = 5e6 / 3.0;
        let mut oracle = 0.0;
        for (g, s) in powers.iter().zip(&sellers) {
            oracle += w.rate_reward() * link_rate(*g, &s.link(), &env, share).unwrap();
        }
        oracle -= w.delay_cost() * system_delay(&delay);
        oracle -= prices[0] * powers[0] + prices[1] * powers[1];

        let got = buyer_reward(&powers, &prices, &sellers, &env, &w, &delay).unwrap();
        assert!((got - oracle).abs() <= 1e-12 * oracle.abs().max(1.0));
    }

    #[test]
    fn buyer_reward_rejects_wrong_delay_user_count() {
        let sellers = vec![seller(25.0, 0.2)];
        let env = quiet_env();
        let delay = DelayParams::new(20.0, 5, 0, 50).unwrap();
        assert!(buyer_reward(&[1.0], &[1.0], &sellers, &env, &weights(), &delay).is_err());
    }

    #[test]
    fn seller_reward_zero_power() {
        assert_eq!(seller_reward(2.0, 0.0, &seller(25.0, 0.2)).unwrap(), 0.0);
    }

    #[test]
    fn seller_reward_certain_cache_hit() {
        let link = LinkGeometry::new(25.0, 1.0, 100.0).unwrap();
        let p = SellerProfile::new(link, 0.4, 1.0, 5.0).unwrap();
        let r = seller_reward(2.0, 10.0, &p).unwrap();
        assert!((r - (2.0 - 0.4) * 10.0).abs() < 1e-12);
    }

    #[test]
    fn seller_reward_two_branch_hand_value() {
        // 0.3*(2-0.5)*10 + 0.7*(2-0.5-1)*10 = 8.
        let link = LinkGeometry::new(25.0, 1.0, 100.0).unwrap();
        let p = SellerProfile::new(link, 0.5, 0.3, 1.0).unwrap();
        let r = seller_reward(2.0, 10.0, &p).unwrap();
        assert!((r - 8.0).abs() < 1e-12);
    }

    #[test]
    fn demand_clamps_to_zero_when_unaffordable() {
        let s = seller(25.0, 0.2);
        let env = quiet_env();
        let g = best_response_power(1e12, &s, &env, 1, &weights()).unwrap();
        assert_eq!(g, 0.0);
    }

    #[test]
    fn demand_root_price_gives_zero() {
        let s = seller(25.0, 0.2);
        let env = quiet_env();
        let b = rate_value_coefficient(&env, &weights(), 1);
        let root = b / unit_sinr_power(&s.link(), &env);
        let g = best_response_power(root, &s, &env, 1, &weights()).unwrap();
        assert!(g.abs() < 1e-9);
    }

    #[test]
    fn demand_rejects_nonpositive_price() {
        let s = seller(25.0, 0.2);
        let env = quiet_env();
        assert!(matches!(
            best_response_power(0.0, &s, &env, 1, &weights()),
            Err(Error::NonpositivePrice { .. })
        ));
    }

    #[test]
    fn demand_matches_grid_search_of_buyer_objective() {
        // Brute-force maximizer over the buyer's per-seller objective at a
        // fixed price; concavity lets a coarse-to-fine grid reach 1e-4 mW.
        let env = RadioEnvironment::new(
            5e6,
            crate::numeric::noise_power_mw(-174.0, 5e6),
            vec![InterferenceSource::new(100.0, 1.0, 400.0).unwrap()],
        )
        .unwrap();
        let s = seller(36.0, 0.2);
        let w = weights();
        let n = 2;
        let price = 1.5;
        let a = unit_sinr_power(&s.link(), &env);
        let share = 5e6 / (n as f64 + 1.0);
        let objective = |g: f64| w.rate_reward() * share * (1.0 + g / a).log2() - price * g;

        let mut lo: f64 = 0.0;
        let mut hi: f64 = 100.0;
        let mut best: f64 = 0.0;
        let mut step: f64 = (hi - lo) / 10_000.0;
        loop {
            let mut best_val = f64::NEG_INFINITY;
            let mut g = lo;
            while g <= hi + step / 2.0 {
                let v = objective(g.min(100.0));
                if v > best_val {
                    best_val = v;
                    best = g.min(100.0);
                }
                g += step;
            }
            if step <= 1e-4 {
                break;
            }
            lo = (best - 2.0 * step).max(0.0);
            hi = (best + 2.0 * step).min(100.0);
            step = (step / 100.0).max(1e-4 / 2.0);
        }

        let closed = best_response_power(price, &s, &env, n, &w).unwrap();
        assert!(
            (closed - best).abs() < 1e-3,
            "closed {closed} vs grid {best}"
        );
    }

    #[test]
    fn price_square_root_homogeneity() {
        let env = quiet_env();
        let link = LinkGeometry::new(25.0, 1.0, 100.0).unwrap();
        // Zero backhaul so the effective cost is the relay cost alone.
        let base = SellerProfile::new(link, 0.3, 0.5, 0.0).unwrap();
        let quadrupled = SellerProfile::new(link, 4.0 * 0.3, 0.5, 0.0).unwrap();
        let quartered = SellerProfile::new(link, 0.3 / 4.0, 0.5, 0.0).unwrap();
        let p0 = optimal_price(&base, &env, 3, &weights()).unwrap();
        let p4 = optimal_price(&quadrupled, &env, 3, &weights()).unwrap();
        let pq = optimal_price(&quartered, &env, 3, &weights()).unwrap();
        assert!((p4 - 2.0 * p0).abs() < 1e-12 * p0);
        assert!((pq - 0.5 * p0).abs() < 1e-12 * p0);
    }

    #[test]
    fn price_matches_profit_grid_search() {
        // Maximize (p - e) * (B/p - a) over a fine price grid.
        let env = RadioEnvironment::new(
            5e6,
            crate::numeric::noise_power_mw(-174.0, 5e6),
            vec![InterferenceSource::new(100.0, 1.0, 400.0).unwrap()],
        )
        .unwrap();
        let s = seller(36.0, 0.2);
        let w = weights();
        let n = 2;
        let e = s.effective_cost();
        let b = rate_value_coefficient(&env, &w, n);
        let a = unit_sinr_power(&s.link(), &env);
        let profit = |p: f64| (p - e) * (b / p - a);

        let closed = optimal_price(&s, &env, n, &w).unwrap();
        let mut lo: f64 = closed / 3.0;
        let mut hi: f64 = closed * 3.0;
        let mut best: f64 = lo;
        let mut step: f64 = (hi - lo) / 20_000.0;
        loop {
            let mut best_val = f64::NEG_INFINITY;
            let mut p = lo;
            while p <= hi + step / 2.0 {
                let v = profit(p);
                if v > best_val {
                    best_val = v;
                    best = p;
                }
                p += step;
            }
            if step <= 1e-3 {
                break;
            }
            lo = (best - 2.0 * step).max(1e-9);
            hi = best + 2.0 * step;
            step = (step / 100.0).max(1e-3 / 2.0);
        }
        assert!(
            (closed - best).abs() <= 1e-3 * closed,
            "closed {closed} vs grid {best}"
        );
    }

    #[test]
    fn degenerate_seller_rejected_at_construction() {
        let link = LinkGeometry::new(25.0, 1.0, 100.0).unwrap();
        assert!(matches!(
            SellerProfile::new(link, 0.0, 1.0, 5.0),
            Err(Error::DegenerateSeller)
        ));
        assert!(matches!(
            SellerProfile::new(link, 0.0, 0.3, 0.0),
            Err(Error::DegenerateSeller)
        ));
    }

    #[test]
    fn solve_single_seller_market() {
        let env = quiet_env();
        let s = seller(25.0, 0.2);
        let out = solve(&[s], &env, &weights(), 20.0, 10, 50).unwrap();
        assert_eq!(out.participating, vec![0]);
        assert!(out.powers_mw[0] > 0.0);
        assert!(out.prices[0] > 0.0);
        assert!(out.buyer_reward >= 0.0, "buyer reward {}", out.buyer_reward);
        assert!(out.seller_rewards[0] >= 0.0);
    }

    #[test]
    fn solve_excludes_priced_out_seller() {
        let env = quiet_env();
        let link = LinkGeometry::new(25.0, 1.0, 100.0).unwrap();
        let affordable = seller(25.0, 0.2);
        let absurd = SellerProfile::new(link, 1e12, 0.3, 0.2).unwrap();
        let out = solve(&[affordable, absurd], &env, &weights(), 20.0, 10, 50).unwrap();
        assert_eq!(out.participating, vec![0]);
    }

    #[test]
    fn solve_empty_participation_is_not_an_error() {
        // Interference loud enough to price every seller out.
        let env = RadioEnvironment::new(
            5e6,
            1.0,
            vec![InterferenceSource::new(100.0, 1.0, 100.0).unwrap(); 10],
        )
        .unwrap();
        let link = LinkGeometry::new(99.0, 1.0, 100.0).unwrap();
        let s = SellerProfile::new(link, 100.0, 0.3, 0.2).unwrap();
        let out = solve(&[s, s], &env, &weights(), 20.0, 10, 50).unwrap();
        assert!(out.participating.is_empty());
        assert_eq!(out.buyer_reward, 0.0);
        assert_eq!(out.delay_ms, 0.0);
    }

    #[test]
    fn solve_rejects_user_cap_breach() {
        let env = quiet_env();
        let s = seller(25.0, 0.2);
        assert!(matches!(
            solve(&[s, s, s], &env, &weights(), 20.0, 10, 12),
            Err(Error::UserLimitExceeded { .. })
        ));
    }

    #[test]
    fn solve_is_deterministic() {
        let env = RadioEnvironment::new(
            5e6,
            1e-4,
            vec![InterferenceSource::new(50.0, 1.0, 300.0).unwrap()],
        )
        .unwrap();
        let sellers = vec![seller(10.0, 0.1), seller(40.0, 0.3), seller(90.0, 0.5)];
        let a = solve(&sellers, &env, &weights(), 20.0, 10, 50).unwrap();
        let b = solve(&sellers, &env, &weights(), 20.0, 10, 50).unwrap();
        assert_eq!(a, b);
    }
}
