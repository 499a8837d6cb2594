//! Numerical invariants of a quasi-elliptic fibration and their validation.
//!
//! A configuration records the characteristic `p`, the genus `g` of the base
//! curve, `chi = χ(O_S)`, the length `t` of the torsion of `R¹φ_*O_S`, and one
//! [`FiberDatum`] per multiple fiber. Every multiple fiber has multiplicity
//! exactly `p`, so the multiplicity is not stored.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FiberKind {
    Tame,
    Wild,
}

impl fmt::Display for FiberKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberKind::Tame => f.write_str("tame"),
            FiberKind::Wild => f.write_str("wild"),
        }
    }
}

/// One multiple fiber `pF_i` with its coefficient `a_i` in the canonical
/// divisor formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberDatum {
    pub kind: FiberKind,
    #[serde(rename = "a")]
    pub residue_a: i64,
}

impl FiberDatum {
    pub fn tame(residue_a: i64) -> Self {
        Self {
            kind: FiberKind::Tame,
            residue_a,
        }
    }

    pub fn wild(residue_a: i64) -> Self {
        Self {
            kind: FiberKind::Wild,
            residue_a,
        }
    }

    /// The tame fiber in characteristic `p`, whose residue is forced to `p - 1`.
    pub fn tame_for(p: i64) -> Self {
        Self::tame(p - 1)
    }

    /// Sort key of the canonical fiber order: tame first, then descending residue.
    pub fn canonical_key(&self) -> (FiberKind, std::cmp::Reverse<i64>) {
        (self.kind, std::cmp::Reverse(self.residue_a))
    }
}

impl fmt::Display for FiberDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind, self.residue_a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceConfig {
    pub p: i64,
    pub g: i64,
    pub chi: i64,
    pub t: i64,
    #[serde(default)]
    pub fibers: Vec<FiberDatum>,
}

impl SurfaceConfig {
    pub fn new(p: i64, g: i64, chi: i64, t: i64, fibers: Vec<FiberDatum>) -> Self {
        Self {
            p,
            g,
            chi,
            t,
            fibers,
        }
    }

    /// Number of multiple fibers (`λ`).
    pub fn lambda(&self) -> usize {
        self.fibers.len()
    }

    pub fn wild_count(&self) -> usize {
        self.fibers
            .iter()
            .filter(|f| f.kind == FiberKind::Wild)
            .count()
    }

    pub fn tame_count(&self) -> usize {
        self.fibers.len() - self.wild_count()
    }

    pub fn residue_sum(&self) -> i64 {
        self.fibers.iter().map(|f| f.residue_a).sum()
    }

    /// Returns the same configuration with its fibers in canonical order.
    pub fn canonical(&self) -> Self {
        let mut out = self.clone();
        out.fibers.sort_by_key(FiberDatum::canonical_key);
        out
    }

    pub fn with_fiber(&self, fiber: FiberDatum) -> Self {
        let mut out = self.clone();
        out.fibers.push(fiber);
        out
    }
}

impl fmt::Display for SurfaceConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "p={} g={} chi={} t={} fibers=[",
            self.p, self.g, self.chi, self.t
        )?;
        for (i, fiber) in self.fibers.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{fiber}")?;
        }
        f.write_str("]")
    }
}

/// Stable identifiers of the validation rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Characteristic,
    GenusNonnegative,
    TorsionNonnegative,
    ChiLowerBound,
    WildCount,
    ResidueRange,
    TameResidue,
    StrictTorsionWild,
}

impl Rule {
    pub fn id(&self) -> &'static str {
        match self {
            Rule::Characteristic => "characteristic",
            Rule::GenusNonnegative => "genus-nonnegative",
            Rule::TorsionNonnegative => "torsion-nonnegative",
            Rule::ChiLowerBound => "chi-lower-bound",
            Rule::WildCount => "wild-count",
            Rule::ResidueRange => "residue-range",
            Rule::TameResidue => "tame-residue",
            Rule::StrictTorsionWild => "strict-torsion-wild",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Violation {
    pub rule: Rule,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ValidationReport {
    valid: bool,
    violations: Vec<Violation>,
}

impl ValidationReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        Self {
            valid: violations.is_empty(),
            violations,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.valid
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn has(&self, rule: Rule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.valid {
            return f.write_str("valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "[{}] {}", v.rule, v.message)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ValidationOptions {
    /// Additionally require at least one wild fiber whenever `t > 0`.
    pub strict: bool,
}

/// Least integer `chi` allowed over a base curve of genus `g`: `⌈(1 - g)/3⌉`.
pub fn min_chi(g: i64) -> Result<i64> {
    if g < 0 {
        return Err(Error::InvalidArgument(format!(
            "genus must be non-negative, got {g}"
        )));
    }
    // ⌈(1 - g)/3⌉ = -⌊(g - 1)/3⌋
    Ok(-(g - 1).div_euclid(3))
}

pub fn validate(config: &SurfaceConfig) -> ValidationReport {
    validate_with(config, ValidationOptions::default())
}

pub fn validate_with(config: &SurfaceConfig, options: ValidationOptions) -> ValidationReport {
    let mut violations = Vec::new();
    let mut push = |rule: Rule, message: String| violations.push(Violation { rule, message });

    let p_ok = matches!(config.p, 2 | 3);
    if !p_ok {
        push(
            Rule::Characteristic,
            format!(
                "characteristic p = {} is not 2 or 3; quasi-elliptic fibrations exist only there",
                config.p
            ),
        );
    }
    if config.g < 0 {
        push(
            Rule::GenusNonnegative,
            format!("genus g = {} is negative", config.g),
        );
    } else if let Ok(bound) = min_chi(config.g) {
        if config.chi < bound {
            push(
                Rule::ChiLowerBound,
                format!(
                    "chi = {} is below the lower bound min_chi({}) = {} = ceil((1 - g)/3)",
                    config.chi, config.g, bound
                ),
            );
        }
    }
    if config.t < 0 {
        push(
            Rule::TorsionNonnegative,
            format!("torsion length t = {} is negative", config.t),
        );
    }
    let wild = config.wild_count();
    if (wild as i128) > config.t as i128 {
        push(
            Rule::WildCount,
            format!(
                "{wild} wild fiber(s) but torsion length t = {}; wild count must not exceed t",
                config.t
            ),
        );
    }
    for (i, fiber) in config.fibers.iter().enumerate() {
        let a = fiber.residue_a;
        let upper = if p_ok { config.p - 1 } else { i64::MAX };
        if a < 0 || a > upper {
            let range = if p_ok {
                format!("[0, {}]", config.p - 1)
            } else {
                "[0, p - 1]".to_string()
            };
            push(
                Rule::ResidueRange,
                format!("fiber {i}: residue a = {a} is outside {range}"),
            );
        }
        if p_ok && fiber.kind == FiberKind::Tame && a != config.p - 1 {
            push(
                Rule::TameResidue,
                format!(
                    "fiber {i}: tame fiber has residue a = {a}, but tame fibers require a = p - 1 = {}",
                    config.p - 1
                ),
            );
        }
    }
    if options.strict && config.t > 0 && wild == 0 {
        push(
            Rule::StrictTorsionWild,
            format!(
                "strict mode: t = {} > 0 but there is no wild fiber",
                config.t
            ),
        );
    }

    ValidationReport::from_violations(violations)
}

pub(crate) fn ensure_valid(config: &SurfaceConfig) -> Result<()> {
    let report = validate(config);
    if report.is_valid() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(report))
    }
}

/// Exact value of `2g - 2 + chi + t + Σ a_i / p`.
pub fn kodaira_value(config: &SurfaceConfig) -> Result<Ratio<i128>> {
    ensure_valid(config)?;
    let p = config.p as i128;
    let linear = 2 * config.g as i128 - 2 + config.chi as i128 + config.t as i128;
    let value = config
        .fibers
        .iter()
        .fold(Ratio::from_integer(linear), |acc, f| {
            acc + Ratio::new(f.residue_a as i128, p)
        });
    Ok(value)
}

/// Whether the Kodaira dimension of the surface is 1, i.e. whether
/// `2g - 2 + chi + t + Σ a_i / p > 0`.
pub fn kodaira_dim_is_one(config: &SurfaceConfig) -> Result<bool> {
    Ok(kodaira_value(config)? > Ratio::from_integer(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex31() -> SurfaceConfig {
        SurfaceConfig::new(3, 0, 1, 0, vec![FiberDatum::tame(2), FiberDatum::tame(2)])
    }

    #[test]
    fn min_chi_values() {
        assert_eq!(min_chi(0).unwrap(), 1);
        assert_eq!(min_chi(1).unwrap(), 0);
        assert_eq!(min_chi(2).unwrap(), 0);
        assert_eq!(min_chi(3).unwrap(), 0);
        assert_eq!(min_chi(4).unwrap(), -1);
        assert!(matches!(min_chi(-1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn min_chi_period_three_descent() {
        for g in 0..200 {
            assert_eq!(min_chi(g + 3).unwrap(), min_chi(g).unwrap() - 1);
        }
    }

    #[test]
    fn validate_examples() {
        assert!(validate(&ex31()).is_valid());

        let r = validate(&SurfaceConfig::new(3, 0, 0, 0, vec![]));
        assert!(!r.is_valid());
        assert_eq!(r.violations().len(), 1);
        assert!(r.has(Rule::ChiLowerBound));

        let r = validate(&SurfaceConfig::new(3, 1, 0, 0, vec![FiberDatum::tame(1)]));
        assert!(r.has(Rule::TameResidue));
        assert!(!r.has(Rule::ResidueRange));

        let r = validate(&SurfaceConfig::new(2, 0, 1, 0, vec![FiberDatum::wild(1)]));
        assert_eq!(r.violations().len(), 1);
        assert!(r.has(Rule::WildCount));
    }

    #[test]
    fn validate_reports_every_violation() {
        let cfg = SurfaceConfig::new(5, -1, -7, -1, vec![FiberDatum::wild(-2)]);
        let r = validate(&cfg);
        assert!(r.has(Rule::Characteristic));
        assert!(r.has(Rule::GenusNonnegative));
        assert!(r.has(Rule::TorsionNonnegative));
        assert!(r.has(Rule::WildCount));
        assert!(r.has(Rule::ResidueRange));
        // chi is not checked against an undefined bound
        assert!(!r.has(Rule::ChiLowerBound));

        let r = validate(&SurfaceConfig::new(3, 0, 1, 1, vec![FiberDatum::wild(3)]));
        assert!(r.has(Rule::ResidueRange));
    }

    #[test]
    fn strict_mode_requires_wild_fiber_when_torsion_present() {
        let cfg = SurfaceConfig::new(3, 0, 1, 1, vec![FiberDatum::tame(2)]);
        assert!(validate(&cfg).is_valid());
        let r = validate_with(&cfg, ValidationOptions { strict: true });
        assert!(r.has(Rule::StrictTorsionWild));
        let cfg = cfg.with_fiber(FiberDatum::wild(0));
        assert!(validate_with(&cfg, ValidationOptions { strict: true }).is_valid());
    }

    #[test]
    fn kodaira_examples() {
        assert!(kodaira_dim_is_one(&ex31()).unwrap());
        assert_eq!(kodaira_value(&ex31()).unwrap(), Ratio::new(1, 3));

        let flat = SurfaceConfig::new(3, 1, 0, 0, vec![]);
        assert_eq!(kodaira_value(&flat).unwrap(), Ratio::from_integer(0));
        assert!(!kodaira_dim_is_one(&flat).unwrap());

        let one = SurfaceConfig::new(3, 0, 1, 0, vec![FiberDatum::tame(2)]);
        assert_eq!(kodaira_value(&one).unwrap(), Ratio::new(-1, 3));
        assert!(!kodaira_dim_is_one(&one).unwrap());
    }

    #[test]
    fn kodaira_rejects_invalid_config() {
        let bad = SurfaceConfig::new(3, 0, 0, 0, vec![]);
        match kodaira_dim_is_one(&bad) {
            Err(Error::InvalidConfig(r)) => assert!(r.has(Rule::ChiLowerBound)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn config_json_shape() {
        let json =
            r#"{"p":3,"g":0,"chi":1,"t":0,"fibers":[{"kind":"tame","a":2},{"kind":"tame","a":2}]}"#;
        let cfg: SurfaceConfig = serde_json::from_str(json).unwrap();
        assert_eq!(cfg, ex31());
        assert_eq!(serde_json::to_string(&cfg).unwrap(), json);

        let typo = r#"{"p":3,"g":0,"chi":1,"tt":0,"fibers":[]}"#;
        assert!(serde_json::from_str::<SurfaceConfig>(typo).is_err());
        let fiber_typo = r#"{"p":3,"g":0,"chi":1,"t":0,"fibers":[{"kind":"tame","a":2,"m":3}]}"#;
        assert!(serde_json::from_str::<SurfaceConfig>(fiber_typo).is_err());
    }

    #[test]
    fn canonical_order_is_tame_first_then_descending_residue() {
        let cfg = SurfaceConfig::new(
            3,
            0,
            1,
            3,
            vec![
                FiberDatum::wild(0),
                FiberDatum::tame(2),
                FiberDatum::wild(2),
                FiberDatum::wild(1),
            ],
        );
        assert_eq!(
            cfg.canonical().fibers,
            vec![
                FiberDatum::tame(2),
                FiberDatum::wild(2),
                FiberDatum::wild(1),
                FiberDatum::wild(0)
            ]
        );
    }
}
