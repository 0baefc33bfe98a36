//! Zipf file popularity and the probability that a seller holds a cached
//! copy of a requested file.
//!
//! The hit probability exists in two forms: an exact total-probability
//! enumeration over uniformly likely storage modes, and the analytic
//! shortcut `tau / K` the enumeration collapses to. Keeping both lets the
//! enumeration serve as a cross-check of the shortcut.

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// Largest catalog for which all C(K, tau) storage modes are enumerated
/// (C(25, 12) is about 5.2 million terms).
pub const MAX_ENUMERABLE_CATALOG: u64 = 25;

/// A region's popular-file catalog: `K` files whose request frequencies
/// follow a Zipf law with exponent `eta`, cached on devices that each store
/// `tau` distinct files.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZipfCatalog {
    catalog_size: u64,
    exponent: f64,
    device_capacity: u64,
    // Zipf normalizer, sum over 1/k^eta; fixed at construction.
    norm: f64,
}

impl ZipfCatalog {
    pub fn new(catalog_size: u64, exponent: f64, device_capacity: u64) -> Result<Self> {
        if catalog_size < 1 {
            return Err(Error::InvalidInput {
                what: "ZipfCatalog.catalog_size",
                why: "must be >= 1".into(),
            });
        }
        if !(exponent >= 0.0) {
            return Err(Error::InvalidInput {
                what: "ZipfCatalog.exponent",
                why: format!("must be >= 0, got {exponent}"),
            });
        }
        if device_capacity < 1 || device_capacity > catalog_size {
            return Err(Error::InvalidInput {
                what: "ZipfCatalog.device_capacity",
                why: format!("must be in 1..={catalog_size}, got {device_capacity}"),
            });
        }
        let mut norm = CompensatedSum::new();
        for k in 1..=catalog_size {
            norm.add((k as f64).powf(-exponent));
        }
        Ok(Self {
            catalog_size,
            exponent,
            device_capacity,
            norm: norm.value(),
        })
    }

    pub fn catalog_size(&self) -> u64 {
        self.catalog_size
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn device_capacity(&self) -> u64 {
        self.device_capacity
    }
}

/// Request probability of the file with the given popularity rank,
/// `(1/rank^eta) / sum_k (1/k^eta)`.
pub fn zipf_popularity(rank: u64, catalog: &ZipfCatalog) -> Result<f64> {
    if rank < 1 || rank > catalog.catalog_size {
        return Err(Error::RankOutOfRange {
            rank,
            catalog_size: catalog.catalog_size,
        });
    }
    Ok((rank as f64).powf(-catalog.exponent) / catalog.norm)
}

/// Exact cache-hit probability by total probability over storage modes: each
/// of the C(K, tau) equally likely modes contributes its stored files'
/// popularity mass.
///
/// Only catalogs with `K <= 25`, or with `tau` in `{1, K-1, K}` (where the
/// mode count stays linear in K), are enumerable; anything larger must use
/// [`cache_hit_probability`].
pub fn cache_hit_probability_exact(catalog: &ZipfCatalog) -> Result<f64> {
    let k = catalog.catalog_size;
    let tau = catalog.device_capacity;
    let popularity =
        |rank: u64| -> f64 { (rank as f64).powf(-catalog.exponent) / catalog.norm };

    if k <= MAX_ENUMERABLE_CATALOG {
        return Ok(enumerate_all_modes(k, tau, popularity));
    }
    match tau {
        t if t == k => Ok(1.0),
        1 => {
            // K singleton modes, each with probability 1/K.
            let mut acc = CompensatedSum::new();
            for rank in 1..=k {
                acc.add(popularity(rank));
            }
            Ok(acc.value() / k as f64)
        }
        t if t == k - 1 => {
            // K modes, each omitting exactly one file.
            let mut acc = CompensatedSum::new();
            for omitted in 1..=k {
                acc.add(1.0 - popularity(omitted));
            }
            Ok(acc.value() / k as f64)
        }
        _ => Err(Error::EnumerationTooLarge {
            catalog_size: k,
            device_capacity: tau,
        }),
    }
}

/// Walk every tau-subset of ranks 1..=K in lexicographic (popularity-sorted)
/// order, accumulating each mode's hit mass, then divide by the mode count.
fn enumerate_all_modes(k: u64, tau: u64, popularity: impl Fn(u64) -> f64) -> f64 {
    let k = k as usize;
    let tau = tau as usize;
    let mut ranks: Vec<u64> = (1..=k as u64).collect();
    let mut subset: Vec<usize> = (0..tau).collect();
    let mut total = CompensatedSum::new();
    let mut modes: u64 = 0;
    loop {
        let mut mass = CompensatedSum::new();
        for &i in &subset {
            mass.add(popularity(ranks[i]));
        }
        total.add(mass.value());
        modes += 1;
        if !next_combination(&mut subset, k) {
            break;
        }
    }
    ranks.clear();
    total.value() / modes as f64
}

/// Advance `indices` to the next lexicographic combination out of `0..n`.
/// Returns false once exhausted.
fn next_combination(indices: &mut [usize], n: usize) -> bool {
    let k = indices.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if indices[i] != i + n - k {
            indices[i] += 1;
            for j in i + 1..k {
                indices[j] = indices[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Analytic cache-hit probability, `tau / K`.
///
/// Under uniformly distributed storage the Zipf weights cancel, so the hit
/// probability is independent of the exponent; the enumeration above
/// confirms this wherever it is computable.
pub fn cache_hit_probability(catalog: &ZipfCatalog) -> f64 {
    catalog.device_capacity as f64 / catalog.catalog_size as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_limit_when_exponent_zero() {
        let c = ZipfCatalog::new(7, 0.0, 3).unwrap();
        for rank in 1..=7 {
            let p = zipf_popularity(rank, &c).unwrap();
            assert!((p - 1.0 / 7.0).abs() < 1e-15);
        }
    }

    #[test]
    fn two_file_catalog_hand_value() {
        // (1/1) / (1 + 1/2) = 2/3.
        let c = ZipfCatalog::new(2, 1.0, 1).unwrap();
        let p = zipf_popularity(1, &c).unwrap();
        assert!((p - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn single_file_catalog() {
        let c = ZipfCatalog::new(1, 2.0, 1).unwrap();
        assert_eq!(zipf_popularity(1, &c).unwrap(), 1.0);
    }

    #[test]
    fn rank_out_of_range() {
        let c = ZipfCatalog::new(5, 1.0, 2).unwrap();
        assert!(matches!(
            zipf_popularity(0, &c),
            Err(Error::RankOutOfRange { .. })
        ));
        assert!(matches!(
            zipf_popularity(6, &c),
            Err(Error::RankOutOfRange { .. })
        ));
    }

    #[test]
    fn full_catalog_always_hits() {
        let c = ZipfCatalog::new(9, 0.8, 9).unwrap();
        assert_eq!(cache_hit_probability_exact(&c).unwrap(), 1.0);
        assert_eq!(cache_hit_probability(&c), 1.0);
    }

    #[test]
    fn three_singleton_modes() {
        // Three modes of probability 1/3 each; expected hit mass is
        // (l1 + l2 + l3)/3 = 1/3 for any exponent.
        for eta in [0.0, 0.56, 1.0, 2.0] {
            let c = ZipfCatalog::new(3, eta, 1).unwrap();
            let p = cache_hit_probability_exact(&c).unwrap();
            assert!((p - 1.0 / 3.0).abs() < 1e-15, "eta={eta}: {p}");
        }
    }

    #[test]
    fn enumeration_over_210_modes() {
        let c = ZipfCatalog::new(10, 0.8, 4).unwrap();
        let p = cache_hit_probability_exact(&c).unwrap();
        assert!((p - 0.4).abs() < 1e-12);
    }

    #[test]
    fn analytic_matches_scenario_values() {
        let c = ZipfCatalog::new(10, 1.0, 3).unwrap();
        assert!((cache_hit_probability(&c) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn large_catalog_shortcuts() {
        let k = 100_000;
        for (tau, expected) in [(1, 1.0 / k as f64), (k - 1, (k - 1) as f64 / k as f64), (k, 1.0)]
        {
            let c = ZipfCatalog::new(k, 0.9, tau).unwrap();
            let exact = cache_hit_probability_exact(&c).unwrap();
            assert!(
                (exact - expected).abs() < 1e-12,
                "tau={tau}: {exact} vs {expected}"
            );
        }
    }

    #[test]
    fn oversized_enumeration_is_rejected() {
        let c = ZipfCatalog::new(40, 1.0, 7).unwrap();
        assert!(matches!(
            cache_hit_probability_exact(&c),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn combination_stepper_counts_choose() {
        let mut idx = vec![0, 1, 2];
        let mut count = 1;
        while next_combination(&mut idx, 6) {
            count += 1;
        }
        assert_eq!(count, 20); // C(6,3)
    }
}
