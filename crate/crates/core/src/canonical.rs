//! Numerical divisor arithmetic for `mK_S`.
//!
//! With `K_S ∼ φ*(K_B − f) + Σ a_i F_i` and `deg(K_B − f) = 2g − 2 + chi + t`,
//! and `pF_i ∼ F` for a general fiber `F`, the divisor `mK_S` is the pullback
//! of a divisor `D_m` on the base plus `Σ (m·a_i mod p) F_i`, where
//!
//! ```text
//! deg D_m = m·(2g − 2 + chi + t) + Σ ⌊m·a_i / p⌋.
//! ```
//!
//! The leftover coefficients `m·a_i mod p` are strictly smaller than the fiber
//! multiplicity `p`, so they contribute no sections and `h⁰(S, mK_S)` is
//! taken to equal `h⁰(B, D_m)`. That identification is an assumption of this
//! crate; [`plurigenus_bounds`] evaluates the right-hand side with
//! Riemann-Roch and returns an interval wherever the numerical data alone do
//! not determine the answer.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::{ensure_valid, SurfaceConfig};

/// Pushed-down canonical data of a configuration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CanonicalClass {
    pub p: i64,
    pub g: i64,
    /// `deg(K_B − f) = 2g − 2 + chi + t`.
    pub base_coeff: i64,
    /// The `a_i`, in configuration order.
    pub residues: Vec<i64>,
}

impl CanonicalClass {
    /// `deg D_m`. The configuration this was built from is assumed valid.
    pub fn degree(&self, m: i64) -> Result<i64> {
        if m < 0 {
            return Err(Error::InvalidArgument(format!(
                "pluricanonical degree m must be non-negative, got {m}"
            )));
        }
        let m = m as i128;
        let p = self.p as i128;
        let floors: i128 = self
            .residues
            .iter()
            .map(|&a| (m * a as i128).div_euclid(p))
            .sum();
        let total = m * self.base_coeff as i128 + floors;
        i64::try_from(total).map_err(|_| Error::Overflow("base degree"))
    }

    /// `deg D_{m+p} − deg D_m = p·base_coeff + Σ a_i`, independent of `m`.
    pub fn step(&self) -> Result<i64> {
        let total = self.p as i128 * self.base_coeff as i128
            + self.residues.iter().map(|&a| a as i128).sum::<i128>();
        i64::try_from(total).map_err(|_| Error::Overflow("step increment"))
    }

    /// Right-hand side `2g + 1` of the fibration criterion.
    pub fn fibration_target(&self) -> i128 {
        2 * self.g as i128 + 1
    }

    pub fn gives_fibration(&self, m: i64) -> Result<bool> {
        if m < 1 {
            return Err(Error::InvalidArgument(format!(
                "the fibration criterion needs m >= 1, got {m}"
            )));
        }
        Ok(self.degree(m)? as i128 >= self.fibration_target())
    }

    pub fn plurigenus_bounds(&self, m: i64) -> Result<PlurigenusBounds> {
        let degree = self.degree(m)?;
        let (lower, upper) = riemann_roch_range(self.g, degree);
        Ok(PlurigenusBounds {
            m,
            degree,
            lower,
            upper,
        })
    }
}

/// Interval containing `h⁰(B, D)` for a divisor of degree `d` on a curve of
/// genus `g`.
fn riemann_roch_range(g: i64, d: i64) -> (i64, i64) {
    let (g, d) = (g as i128, d as i128);
    let (lower, upper) = if d < 0 {
        (0, 0)
    } else if g == 0 {
        (d + 1, d + 1)
    } else if g == 1 {
        if d == 0 {
            // trivial iff D is principal, which degrees cannot see
            (0, 1)
        } else {
            (d, d)
        }
    } else if d >= 2 * g - 1 {
        (d - g + 1, d - g + 1)
    } else {
        // Clifford
        ((d - g + 1).max(0), d / 2 + 1)
    };
    // both ends are bounded by |d| + 1
    (lower as i64, upper as i64)
}

/// Bounds on `h⁰(S, mK_S)` derived from the degree of `D_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PlurigenusBounds {
    pub m: i64,
    pub degree: i64,
    pub lower: i64,
    pub upper: i64,
}

impl PlurigenusBounds {
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }
}

pub fn canonical_data(config: &SurfaceConfig) -> Result<CanonicalClass> {
    ensure_valid(config)?;
    let base_coeff = 2 * config.g as i128 - 2 + config.chi as i128 + config.t as i128;
    Ok(CanonicalClass {
        p: config.p,
        g: config.g,
        base_coeff: i64::try_from(base_coeff).map_err(|_| Error::Overflow("base coefficient"))?,
        residues: config.fibers.iter().map(|f| f.residue_a).collect(),
    })
}

/// `deg D_m = m·(2g − 2 + chi + t) + Σ ⌊m·a_i / p⌋`.
pub fn base_degree(config: &SurfaceConfig, m: i64) -> Result<i64> {
    canonical_data(config)?.degree(m)
}

/// Whether `deg D_m ≥ 2g + 1`, i.e. whether `|mK_S|` induces the fibration.
pub fn gives_fibration(config: &SurfaceConfig, m: i64) -> Result<bool> {
    canonical_data(config)?.gives_fibration(m)
}

pub fn plurigenus_bounds(config: &SurfaceConfig, m: i64) -> Result<PlurigenusBounds> {
    canonical_data(config)?.plurigenus_bounds(m)
}
