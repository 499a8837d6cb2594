//! Bounded enumeration of invariant configurations and certification of the
//! supremum of their stable thresholds.
//!
//! The finite sweep is complemented by three tail checks that carry the result
//! to the unbounded parts of the invariant space: a genus tail for `g ≥ 2`,
//! monotonicity under appending fibers, and monotonicity in `chi + t`.
//! Results are stated over numerical invariants only; whether a given
//! configuration is realized by an actual surface is not decided here.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::invariants::{
    ensure_valid, kodaira_dim_is_one, min_chi, validate, FiberDatum, SurfaceConfig,
};
use crate::threshold::stable_threshold;

pub const SCOPE: &str = "over numerical invariants";

/// Named predicates that remove configurations from a region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Exclusion {
    /// Characteristic 2, elliptic base, `chi = t = 0`, exactly one tame fiber.
    Question33,
}

impl Exclusion {
    pub const ALL: [Exclusion; 1] = [Exclusion::Question33];

    pub fn name(&self) -> &'static str {
        match self {
            Exclusion::Question33 => "question-3-3",
        }
    }

    pub fn matches(&self, config: &SurfaceConfig) -> bool {
        match self {
            Exclusion::Question33 => {
                config.p == 2
                    && config.g == 1
                    && config.chi == 0
                    && config.t == 0
                    && config.lambda() == 1
                    && config.tame_count() == 1
            }
        }
    }
}

impl fmt::Display for Exclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Exclusion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Exclusion::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown exclusion {s:?}; known: {}",
                    Exclusion::ALL.iter().map(Exclusion::name).join(", ")
                ))
            })
    }
}

impl Serialize for Exclusion {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RegionBounds {
    pub p: i64,
    pub g_max: i64,
    pub chi_plus_t_max: i64,
    pub lambda_max: i64,
    pub exclusions: Vec<Exclusion>,
}

impl RegionBounds {
    /// The default certification region: `g ≤ 4`, `chi + t ≤ 6`, `λ ≤ 6`.
    pub fn desk(p: i64) -> Self {
        Self {
            p,
            g_max: 4,
            chi_plus_t_max: 6,
            lambda_max: 6,
            exclusions: Vec::new(),
        }
    }

    pub fn excluding(mut self, exclusion: Exclusion) -> Self {
        if !self.exclusions.contains(&exclusion) {
            self.exclusions.push(exclusion);
        }
        self
    }

    pub fn is_excluded(&self, config: &SurfaceConfig) -> bool {
        self.exclusions.iter().any(|e| e.matches(config))
    }

    fn check_enumerable(&self) -> Result<()> {
        if !matches!(self.p, 2 | 3) {
            return Err(Error::InvalidArgument(format!(
                "characteristic must be 2 or 3, got {}",
                self.p
            )));
        }
        if self.g_max < 0 || self.lambda_max < 0 {
            return Err(Error::InvalidArgument(format!(
                "g_max and lambda_max must be non-negative, got {} and {}",
                self.g_max, self.lambda_max
            )));
        }
        Ok(())
    }

    /// Bounds accepted by [`certify_bound`].
    pub fn check(&self) -> Result<()> {
        self.check_enumerable()?;
        if self.g_max < 1 || self.chi_plus_t_max < 1 || self.lambda_max < 1 {
            return Err(Error::InvalidArgument(format!(
                "certification needs g_max, chi_plus_t_max, lambda_max >= 1, got {}, {}, {}",
                self.g_max, self.chi_plus_t_max, self.lambda_max
            )));
        }
        Ok(())
    }
}

/// The fiber types available in characteristic `p`, in canonical order.
fn fiber_types(p: i64) -> Vec<FiberDatum> {
    std::iter::once(FiberDatum::tame_for(p))
        .chain((0..p).rev().map(FiberDatum::wild))
        .collect()
}

/// Every valid configuration of Kodaira dimension 1 inside `bounds`, one per
/// fiber multiset (fibers in canonical order), in a fixed order: by `g`, then
/// `chi`, `t`, `λ`, and lexicographically over fiber multisets.
pub fn enumerate_configs(bounds: &RegionBounds) -> Result<impl Iterator<Item = SurfaceConfig>> {
    bounds.check_enumerable()?;
    let bounds = bounds.clone();
    let p = bounds.p;
    let types = fiber_types(p);
    let cpt_max = bounds.chi_plus_t_max;
    let lambda_max = bounds.lambda_max as usize;

    let invariants = (0..=bounds.g_max).flat_map(move |g| {
        let lo = min_chi(g).expect("g is non-negative");
        (lo..=cpt_max).flat_map(move |chi| (0..=cpt_max - chi).map(move |t| (g, chi, t)))
    });

    Ok(invariants
        .flat_map(move |(g, chi, t)| {
            let types = types.clone();
            (0..=lambda_max).flat_map(move |lambda| {
                let types = types.clone();
                (0..types.len())
                    .combinations_with_replacement(lambda)
                    .map(move |idx| {
                        SurfaceConfig::new(p, g, chi, t, idx.iter().map(|&i| types[i]).collect())
                    })
            })
        })
        .filter(move |c| {
            (c.wild_count() as i64) <= c.t
                && validate(c).is_valid()
                && kodaira_dim_is_one(c).unwrap_or(false)
                && !bounds.is_excluded(c)
        }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CaseLabel {
    #[serde(rename = "I")]
    I,
    #[serde(rename = "II-1")]
    II1,
    #[serde(rename = "II-2")]
    II2,
    #[serde(rename = "III-1")]
    III1,
    #[serde(rename = "III-2")]
    III2,
    #[serde(rename = "III-3")]
    III3,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 6] = [
        CaseLabel::I,
        CaseLabel::II1,
        CaseLabel::II2,
        CaseLabel::III1,
        CaseLabel::III2,
        CaseLabel::III3,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CaseLabel::I => "I",
            CaseLabel::II1 => "II-1",
            CaseLabel::II2 => "II-2",
            CaseLabel::III1 => "III-1",
            CaseLabel::III2 => "III-2",
            CaseLabel::III3 => "III-3",
        }
    }

    /// The known upper bound on the stable threshold within this case.
    ///
    /// Characteristic 3 carries individual bounds; characteristic 2 only has
    /// the uniform conditional bound 4, valid once the single-tame-fiber
    /// elliptic configuration is excluded.
    pub fn reference_bound(&self, p: i64) -> i64 {
        if p == 2 {
            return 4;
        }
        match self {
            CaseLabel::I | CaseLabel::II1 | CaseLabel::III2 => 3,
            CaseLabel::II2 | CaseLabel::III3 => 5,
            CaseLabel::III1 => 1,
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn classify_case(config: &SurfaceConfig) -> Result<CaseLabel> {
    ensure_valid(config)?;
    let s = config.chi as i128 + config.t as i128;
    let label = match config.g {
        g if g >= 2 => CaseLabel::I,
        1 if s >= 1 => CaseLabel::II1,
        1 if config.chi == 0 && config.t == 0 => CaseLabel::II2,
        0 if s >= 3 => CaseLabel::III1,
        0 if s == 2 => CaseLabel::III2,
        0 if s == 1 && config.chi == 1 && config.t == 0 => CaseLabel::III3,
        _ => {
            return Err(Error::ContractViolation(format!(
                "no case applies to {config}"
            )))
        }
    };
    Ok(label)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseSummary {
    pub count: usize,
    pub max_stable: Option<i64>,
    pub reference_bound: i64,
    pub pass: bool,
}

impl CaseSummary {
    fn new(reference_bound: i64) -> Self {
        Self {
            count: 0,
            max_stable: None,
            reference_bound,
            pass: true,
        }
    }

    fn record(&mut self, stable_m: i64) {
        self.count += 1;
        self.max_stable = Some(self.max_stable.map_or(stable_m, |m| m.max(stable_m)));
        self.pass = self.max_stable.is_none_or(|m| m <= self.reference_bound);
    }
}

/// A refinement of one case whose bound depends on the fiber kinds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubCaseSummary {
    pub name: String,
    #[serde(flatten)]
    pub summary: CaseSummary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TailCheck {
    pub name: String,
    pub pass: bool,
    /// Number of instances examined.
    pub checked: usize,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificationReport {
    pub scope: &'static str,
    pub bounds: RegionBounds,
    pub configs_checked: usize,
    pub max_stable: Option<i64>,
    pub extremal_configs: Vec<SurfaceConfig>,
    pub per_case: BTreeMap<CaseLabel, CaseSummary>,
    pub sub_cases: Vec<SubCaseSummary>,
    pub tail_checks: Vec<TailCheck>,
    pub pass: bool,
}

const III2_TAME: &str = "III-2 with a tame fiber";
const III2_NO_TAME: &str = "III-2 without tame fibers";

pub fn certify_bound(bounds: &RegionBounds) -> Result<CertificationReport> {
    bounds.check()?;
    let p = bounds.p;
    let mut per_case: BTreeMap<CaseLabel, CaseSummary> = CaseLabel::ALL
        .iter()
        .map(|&c| (c, CaseSummary::new(c.reference_bound(p))))
        .collect();
    let mut sub_cases = if p == 3 {
        vec![
            SubCaseSummary {
                name: III2_TAME.into(),
                summary: CaseSummary::new(2),
            },
            SubCaseSummary {
                name: III2_NO_TAME.into(),
                summary: CaseSummary::new(3),
            },
        ]
    } else {
        Vec::new()
    };

    let mut corpus = Vec::new();
    let mut max_stable: Option<i64> = None;
    let mut extremal_configs = Vec::new();
    for config in enumerate_configs(bounds)? {
        let stable = stable_threshold(&config)?.stable_m;
        let label = classify_case(&config)?;
        per_case
            .get_mut(&label)
            .expect("all labels present")
            .record(stable);
        if label == CaseLabel::III2 && p == 3 {
            let idx = if config.tame_count() > 0 { 0 } else { 1 };
            sub_cases[idx].summary.record(stable);
        }
        match max_stable {
            Some(m) if stable < m => {}
            Some(m) if stable == m => extremal_configs.push(config.clone()),
            _ => {
                max_stable = Some(stable);
                extremal_configs = vec![config.clone()];
            }
        }
        corpus.push((config, stable));
    }

    let tail_checks = tail_checks_over(p, &corpus)?;
    let pass = per_case.values().all(|c| c.pass)
        && sub_cases.iter().all(|s| s.summary.pass)
        && tail_checks.iter().all(|t| t.pass);

    Ok(CertificationReport {
        scope: SCOPE,
        bounds: bounds.clone(),
        configs_checked: corpus.len(),
        max_stable,
        extremal_configs,
        per_case,
        sub_cases,
        tail_checks,
        pass,
    })
}

/// The three tail checks, run against the default region for `p`.
pub fn tail_checks(p: i64) -> Result<Vec<TailCheck>> {
    let corpus = enumerate_configs(&RegionBounds::desk(p))?
        .map(|c| {
            let stable = stable_threshold(&c)?.stable_m;
            Ok((c, stable))
        })
        .collect::<Result<Vec<_>>>()?;
    tail_checks_over(p, &corpus)
}

fn tail_checks_over(p: i64, corpus: &[(SurfaceConfig, i64)]) -> Result<Vec<TailCheck>> {
    Ok(vec![
        genus_tail()?,
        fiber_monotonicity(p, corpus)?,
        chi_t_monotonicity(corpus)?,
    ])
}

/// For `g ≥ 2`, `2g − 2 + chi ≥ 2g − 2 + (1 − g)/3 = 5(g − 1)/3 > 0`, so the
/// base coefficient is at least 1 and `3·(2g − 2 + min_chi(g)) ≥ 2g + 1`
/// implies the criterion for every `m ≥ 3`, whatever the fibers and `t`.
/// `min_chi` drops by exactly 1 per period of 3 in `g`, so the check over
/// one period plus a positive per-period increment covers every `g ≥ 2`.
fn genus_tail() -> Result<TailCheck> {
    let mut ok = true;
    let mut notes = Vec::new();
    let base = |g: i64| -> Result<i64> { Ok(2 * g - 2 + min_chi(g)?) };
    for g in 2..=7 {
        let coeff = base(g)?;
        let rational_bound = Ratio::from_integer(2 * g - 2) + Ratio::new(1 - g, 3);
        ok &= rational_bound == Ratio::new(5 * (g - 1), 3);
        ok &= Ratio::from_integer(coeff) >= rational_bound;
        ok &= coeff >= 1;
        let slack = 3 * coeff - (2 * g + 1);
        ok &= slack >= 0;
        notes.push(format!("g={g}: 3*{coeff}-{}={slack}", 2 * g + 1));
    }
    let mut increments = Vec::new();
    for g in 2..=4 {
        let lhs_inc = 3 * (base(g + 3)? - base(g)?);
        let rhs_inc = 2 * 3;
        ok &= lhs_inc - rhs_inc > 0;
        ok &= base(g + 3)? - base(g)? > 0;
        increments.push(lhs_inc);
    }
    ok &= increments.iter().all_equal();
    let witness = format!(
        "{}; per period of 3: lhs +{}, rhs +6",
        notes.join(", "),
        increments[0]
    );
    Ok(TailCheck {
        name: "genus-tail".into(),
        pass: ok,
        checked: notes.len(),
        witness,
    })
}

fn fiber_monotonicity(p: i64, corpus: &[(SurfaceConfig, i64)]) -> Result<TailCheck> {
    let mut checked = 0;
    let mut counterexamples = Vec::new();
    for (config, stable) in corpus {
        for fiber in fiber_types(p) {
            let extended = config.with_fiber(fiber);
            if !validate(&extended).is_valid() {
                continue;
            }
            checked += 1;
            let extended_stable = stable_threshold(&extended)?.stable_m;
            if extended_stable > *stable {
                counterexamples.push(format!("{config} + {fiber}: {stable} -> {extended_stable}"));
            }
        }
    }
    Ok(monotonicity_check(
        "fiber-monotonicity",
        checked,
        counterexamples,
    ))
}

fn chi_t_monotonicity(corpus: &[(SurfaceConfig, i64)]) -> Result<TailCheck> {
    let mut checked = 0;
    let mut counterexamples = Vec::new();
    for (config, stable) in corpus {
        let mut more_chi = config.clone();
        more_chi.chi += 1;
        let mut more_t = config.clone();
        more_t.t += 1;
        for bumped in [more_chi, more_t] {
            checked += 1;
            let bumped_stable = stable_threshold(&bumped)?.stable_m;
            if bumped_stable > *stable {
                counterexamples.push(format!("{config} -> {bumped}: {stable} -> {bumped_stable}"));
            }
        }
    }
    Ok(monotonicity_check(
        "chi-t-monotonicity",
        checked,
        counterexamples,
    ))
}

fn monotonicity_check(name: &str, checked: usize, counterexamples: Vec<String>) -> TailCheck {
    let witness = if counterexamples.is_empty() {
        format!("{checked} extensions, stable threshold never increased")
    } else {
        format!("counterexamples: {}", counterexamples.join("; "))
    };
    TailCheck {
        name: name.into(),
        pass: counterexamples.is_empty(),
        checked,
        witness,
    }
}

impl CertificationReport {
    /// Human-readable summary table.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let b = &self.bounds;
        out.push_str(&format!(
            "certification {SCOPE}: p={} g<={} chi+t<={} lambda<={}",
            b.p, b.g_max, b.chi_plus_t_max, b.lambda_max
        ));
        if !b.exclusions.is_empty() {
            out.push_str(&format!(
                " excluding {}",
                b.exclusions.iter().map(Exclusion::name).join(",")
            ));
        }
        out.push('\n');
        out.push_str(&format!("configs checked: {}\n", self.configs_checked));
        out.push_str(&format!(
            "max stable threshold: {}\n",
            fmt_opt(self.max_stable)
        ));
        for c in &self.extremal_configs {
            out.push_str(&format!("  extremal: {c}\n"));
        }
        out.push_str(&format!(
            "{:<28} {:>6} {:>6} {:>6} {:>5}\n",
            "case", "count", "max", "bound", "pass"
        ));
        let rows = self
            .per_case
            .iter()
            .map(|(l, s)| (l.as_str().to_string(), s))
            .chain(self.sub_cases.iter().map(|s| (s.name.clone(), &s.summary)));
        for (name, s) in rows {
            out.push_str(&format!(
                "{:<28} {:>6} {:>6} {:>6} {:>5}\n",
                name,
                s.count,
                fmt_opt(s.max_stable),
                s.reference_bound,
                pass_str(s.pass)
            ));
        }
        for t in &self.tail_checks {
            out.push_str(&format!(
                "tail {:<22} {:>5}  {}\n",
                t.name,
                pass_str(t.pass),
                t.witness
            ));
        }
        out.push_str(&format!("overall: {}\n", pass_str(self.pass)));
        out
    }
}

fn fmt_opt(v: Option<i64>) -> String {
    v.map_or_else(|| "-".to_string(), |m| m.to_string())
}

fn pass_str(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}
