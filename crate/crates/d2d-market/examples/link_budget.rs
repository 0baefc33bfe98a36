//! Walk the radio model for one cluster: interference, SINR, link rates,
//! and the system delay as the cell gets crowded.
//!
//!     cargo run --example link_budget

use d2d_market::channel::{
    buyer_aggregate_rate, interference_power, link_rate, sinr, system_delay, unit_sinr_power,
    DelayParams, InterferenceSource, LinkGeometry, RadioEnvironment,
};
use d2d_market::numeric::noise_power_mw;

fn main() -> d2d_market::Result<()> {
    // A 5 MHz band with thermal noise at -174 dBm/Hz and two interfering
    // clusters transmitting at full power.
    let noise = noise_power_mw(-174.0, 5e6);
    let env = RadioEnvironment::new(
        5e6,
        noise,
        vec![
            InterferenceSource::new(100.0, 1.0, 250.0)?,
            InterferenceSource::new(100.0, 1.0, 420.0)?,
        ],
    )?;
    println!("noise power          {:.3e} mW", noise);
    println!("interference power   {:.4} mW", interference_power(&env));

    // One 30 m link with ideal gain, capped at 100 mW.
    let link = LinkGeometry::new(30.0, 1.0, 100.0)?;
    println!(
        "unit-SINR power      {:.3} mW (transmit power where SINR = 1)",
        unit_sinr_power(&link, &env)
    );

    println!("\n power (mW)      SINR      rate on W/2 (Mbit/s)");
    for power in [1.0, 5.0, 20.0, 50.0, 100.0] {
        let s = sinr(power, &link, &env)?;
        let rate = link_rate(power, &link, &env, 2.5e6)?;
        println!("  {power:>8.1}  {s:>8.4}  {:>12.4}", rate / 1e6);
    }

    // Three simultaneous links split the band four ways (buyer included).
    let links = vec![
        LinkGeometry::new(12.0, 1.0, 100.0)?,
        LinkGeometry::new(30.0, 1.0, 100.0)?,
        LinkGeometry::new(75.0, 1.0, 100.0)?,
    ];
    let powers = [60.0, 40.0, 25.0];
    let total = buyer_aggregate_rate(&powers, &links, &env)?;
    println!("\naggregate rate over 3 links: {:.4} Mbit/s", total / 1e6);

    println!("\n users (Y+V)   delay (ms)");
    for total_users in [2u32, 5, 11, 20, 50] {
        let params = DelayParams::new(20.0, total_users, 0, 100)?;
        println!("  {total_users:>9}   {:>8.3}", system_delay(&params));
    }
    Ok(())
}
