//! First-success and stable thresholds of the fibration criterion.
//!
//! Because `deg D_{m+p} = deg D_m + step` with `step = p·(2g − 2 + chi + t) + Σ a_i`,
//! and `step ≥ 1` whenever the Kodaira dimension is 1, success at `m` implies
//! success at `m + p`. A run of `p` consecutive successes therefore certifies
//! success for every larger `m`, and the scan may stop there.

use serde::Serialize;

use crate::canonical::{canonical_data, CanonicalClass};
use crate::error::{Error, Result};
use crate::invariants::{kodaira_value, SurfaceConfig};

pub const DEFAULT_SCAN_CAP: i64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThresholdOptions {
    /// Largest `m` the scan may visit. Never binds when the Kodaira dimension is 1
    /// and the invariants are of ordinary size.
    pub scan_cap: i64,
}

impl Default for ThresholdOptions {
    fn default() -> Self {
        Self {
            scan_cap: DEFAULT_SCAN_CAP,
        }
    }
}

/// Evidence for the stable threshold of one configuration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ThresholdCertificate {
    #[serde(flatten)]
    pub config: SurfaceConfig,
    pub first_success: i64,
    /// Least `M` such that the criterion holds for every `m ≥ M`.
    pub stable_m: i64,
    /// Every `m < stable_m + p` at which the criterion fails.
    pub failures: Vec<i64>,
    pub step: i64,
    /// `stable_m, ..., stable_m + p − 1`, all successes.
    pub window: Vec<i64>,
}

/// `p·(2g − 2 + chi + t) + Σ a_i`.
pub fn step_increment(config: &SurfaceConfig) -> Result<i64> {
    canonical_data(config)?.step()
}

fn kappa_one_class(config: &SurfaceConfig) -> Result<CanonicalClass> {
    let value = kodaira_value(config)?;
    if value <= num_rational::Ratio::from_integer(0) {
        return Err(Error::NotKodairaOne {
            value: value.to_string(),
        });
    }
    canonical_data(config)
}

pub fn first_success(config: &SurfaceConfig) -> Result<i64> {
    Ok(stable_threshold(config)?.first_success)
}

pub fn stable_threshold(config: &SurfaceConfig) -> Result<ThresholdCertificate> {
    stable_threshold_with(config, &ThresholdOptions::default())
}

pub fn stable_threshold_with(
    config: &SurfaceConfig,
    options: &ThresholdOptions,
) -> Result<ThresholdCertificate> {
    let class = kappa_one_class(config)?;
    let step = class.step()?;
    if step < 1 {
        return Err(Error::ContractViolation(format!(
            "step increment {step} < 1 for a Kodaira dimension 1 configuration"
        )));
    }

    let p = class.p;
    let mut failures = Vec::new();
    let mut first_success = None;
    let mut run = 0;
    let mut m = 0;
    while run < p {
        m += 1;
        if m > options.scan_cap {
            return Err(Error::ScanCapExceeded {
                cap: options.scan_cap,
            });
        }
        if class.gives_fibration(m)? {
            first_success.get_or_insert(m);
            run += 1;
        } else {
            failures.push(m);
            run = 0;
        }
    }
    let stable_m = m - p + 1;

    Ok(ThresholdCertificate {
        config: config.clone(),
        first_success: first_success.expect("a full window contains a success"),
        stable_m,
        failures,
        step,
        window: (stable_m..=m).collect(),
    })
}
