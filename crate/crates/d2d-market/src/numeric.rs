//! Small numeric helpers shared across modules.

/// Neumaier-compensated running sum.
///
/// Used wherever summation order must not leak into results that are compared
/// at tight tolerances (popularity normalization, storage-mode enumeration,
/// Monte Carlo aggregation).
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Sum an iterator with compensation.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = CompensatedSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Convert a dBm level to milliwatts.
pub fn dbm_to_milliwatts(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

/// Convert milliwatts to dBm.
pub fn milliwatts_to_dbm(mw: f64) -> f64 {
    10.0 * mw.log10()
}

/// Integrated noise power in mW for a flat density in dBm/Hz over a band.
pub fn noise_power_mw(density_dbm_hz: f64, bandwidth_hz: f64) -> f64 {
    dbm_to_milliwatts(density_dbm_hz + 10.0 * bandwidth_hz.log10())
}

/// Render a float with 12 significant digits, the precision all output files
/// use.
pub fn format_sig12(x: f64) -> String {
    format!("{:.11e}", x)
}

/// Round a float to the 12-significant-digit grid used for serialization.
pub fn round_sig12(x: f64) -> f64 {
    format_sig12(x).parse().expect("formatted float reparses")
}

/// Sample mean and standard deviation (n-1 denominator; 0 for n < 2).
pub fn mean_and_stddev(samples: &[f64]) -> (f64, f64) {
    let n = samples.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = compensated_sum(samples.iter().copied()) / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let ss = compensated_sum(samples.iter().map(|x| (x - mean) * (x - mean)));
    (mean, (ss / (n - 1) as f64).sqrt())
}
