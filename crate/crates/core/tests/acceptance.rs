//! Acceptance suite: one pass/fail line per criterion, non-zero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qell_core::{
    base_degree, certify_bound, enumerate_configs, example_surface_3_1, gives_fibration,
    kodaira_dim_is_one, min_chi, plurigenus_bounds, question_3_3_config, stable_threshold,
    step_increment, validate, CaseLabel, CertificationReport, Exclusion, FiberDatum, RegionBounds,
    SurfaceConfig,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn desk(p: i64) -> RegionBounds {
    RegionBounds {
        p,
        g_max: 4,
        chi_plus_t_max: 6,
        lambda_max: 6,
        exclusions: vec![],
    }
}

fn corpus() -> Vec<SurfaceConfig> {
    [2, 3]
        .into_iter()
        .flat_map(|p| enumerate_configs(&desk(p)).unwrap())
        .collect()
}

/// Criterion evaluated directly with rational floors.
fn brute_force_holds(c: &SurfaceConfig, m: i64) -> bool {
    let floors: Ratio<i64> = c
        .fibers
        .iter()
        .map(|f| Ratio::new(m * f.residue_a, c.p).floor())
        .sum();
    let lhs = Ratio::from_integer(m * (2 * c.g - 2 + c.chi + c.t)) + floors;
    lhs >= Ratio::from_integer(2 * c.g + 1)
}

fn example_reproduction() -> Outcome {
    let start = Instant::now();
    let c = example_surface_3_1();
    let b = plurigenus_bounds(&c, 4).map_err(|e| e.to_string())?;
    let fails_at_4 = !gives_fibration(&c, 4).unwrap();
    let holds_after = (5..=100).all(|m| gives_fibration(&c, m).unwrap());
    let cert = stable_threshold(&c).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();

    ensure!(
        (b.lower, b.upper) == (1, 1),
        "h0 at m=4 is [{}, {}]",
        b.lower,
        b.upper
    );
    ensure!(fails_at_4, "criterion holds at m=4");
    ensure!(holds_after, "criterion fails somewhere in [5, 100]");
    ensure!(cert.stable_m == 5, "stable threshold {}", cert.stable_m);
    ensure!(
        cert.first_success == 3,
        "first success {}",
        cert.first_success
    );
    ensure!(elapsed < Duration::from_millis(1), "took {elapsed:?}");
    Ok(format!("h0(4K)=1, stable=5, first=3 in {elapsed:?}"))
}

fn extremal_set(report: &CertificationReport) -> Vec<SurfaceConfig> {
    let mut v = report.extremal_configs.clone();
    v.sort_by_key(|c| serde_json::to_string(c).unwrap());
    v
}

fn char_three_certification() -> Outcome {
    let start = Instant::now();
    let report = certify_bound(&desk(3)).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();

    ensure!(report.max_stable == Some(5), "max {:?}", report.max_stable);
    let mut expected = vec![
        example_surface_3_1(),
        SurfaceConfig::new(3, 1, 0, 0, vec![FiberDatum::tame(2)]),
    ];
    expected.sort_by_key(|c| serde_json::to_string(c).unwrap());
    ensure!(
        extremal_set(&report) == expected,
        "extremals {:?}",
        report.extremal_configs
    );

    let max = |l: CaseLabel| report.per_case[&l].max_stable;
    ensure!(
        max(CaseLabel::I).is_some_and(|m| m <= 3),
        "I: {:?}",
        max(CaseLabel::I)
    );
    ensure!(
        max(CaseLabel::II1).is_some_and(|m| m <= 3),
        "II-1: {:?}",
        max(CaseLabel::II1)
    );
    ensure!(
        max(CaseLabel::II2) == Some(5),
        "II-2: {:?}",
        max(CaseLabel::II2)
    );
    ensure!(
        max(CaseLabel::III1) == Some(1),
        "III-1: {:?}",
        max(CaseLabel::III1)
    );
    ensure!(
        max(CaseLabel::III2).is_some_and(|m| m <= 3),
        "III-2: {:?}",
        max(CaseLabel::III2)
    );
    ensure!(
        max(CaseLabel::III3) == Some(5),
        "III-3: {:?}",
        max(CaseLabel::III3)
    );
    let tame_sub = &report.sub_cases[0];
    ensure!(
        tame_sub.summary.max_stable.is_some_and(|m| m <= 2),
        "{}: {:?}",
        tame_sub.name,
        tame_sub.summary.max_stable
    );
    // recompute the tame split independently of the report
    let tame_max = enumerate_configs(&desk(3))
        .unwrap()
        .filter(|c| c.g == 0 && c.chi + c.t == 2 && c.tame_count() > 0)
        .map(|c| stable_threshold(&c).unwrap().stable_m)
        .max();
    ensure!(
        tame_max.is_some_and(|m| m <= 2),
        "III-2 with tame: {tame_max:?}"
    );
    ensure!(
        report.tail_checks.len() == 3 && report.tail_checks.iter().all(|t| t.pass),
        "tail checks {:?}",
        report.tail_checks
    );
    ensure!(report.pass, "report did not pass");
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    Ok(format!(
        "{} configs, max=5, per-case bounds and tails hold in {elapsed:?}",
        report.configs_checked
    ))
}

fn char_two_conditional() -> Outcome {
    let start = Instant::now();
    let full = certify_bound(&desk(2)).map_err(|e| e.to_string())?;
    let excluded =
        certify_bound(&desk(2).excluding(Exclusion::Question33)).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();

    ensure!(full.max_stable == Some(6), "max {:?}", full.max_stable);
    ensure!(
        full.extremal_configs == vec![question_3_3_config()],
        "extremals {:?}",
        full.extremal_configs
    );
    ensure!(
        excluded.max_stable == Some(4),
        "excluded max {:?}",
        excluded.max_stable
    );
    ensure!(
        excluded.extremal_configs.contains(&SurfaceConfig::new(
            2,
            0,
            1,
            0,
            vec![FiberDatum::tame(1); 3]
        )),
        "excluded extremals {:?}",
        excluded.extremal_configs
    );
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    Ok(format!(
        "max 6 only at the single-tame-fiber config; 4 when excluded; {elapsed:?}"
    ))
}

fn stopping_rule_soundness() -> Outcome {
    let mut checked = 0;
    for c in corpus() {
        let stable = stable_threshold(&c).map_err(|e| e.to_string())?.stable_m;
        for m in stable..=stable + 30 {
            ensure!(
                brute_force_holds(&c, m),
                "{c}: fails at m={m} >= stable {stable}"
            );
        }
        if stable > 1 {
            ensure!(!brute_force_holds(&c, stable - 1), "{c}: holds at stable-1");
        }
        checked += 1;
    }
    Ok(format!("{checked} configs, 0 counterexamples"))
}

fn random_valid_config(rng: &mut StdRng) -> SurfaceConfig {
    let p = if rng.random_bool(0.5) { 2 } else { 3 };
    // low genera are where Kodaira dimension 1 can fail
    let g = if rng.random_bool(0.5) {
        rng.random_range(0..2)
    } else {
        rng.random_range(0..12)
    };
    let chi = min_chi(g).unwrap() + rng.random_range(0..3);
    let t = rng.random_range(0..3);
    let lambda = rng.random_range(0..7);
    let mut wild = 0;
    let mut fibers = Vec::new();
    for _ in 0..lambda {
        if wild < t && rng.random_bool(0.5) {
            wild += 1;
            fibers.push(FiberDatum::wild(rng.random_range(0..p)));
        } else {
            fibers.push(FiberDatum::tame(p - 1));
        }
    }
    SurfaceConfig::new(p, g, chi, t, fibers)
}

fn step_identity() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_2024);
    let mut kappa_one = 0;
    for _ in 0..1000 {
        let c = random_valid_config(&mut rng);
        ensure!(validate(&c).is_valid(), "generator produced invalid {c}");
        let step = step_increment(&c).map_err(|e| e.to_string())?;
        for m in 0..=50 {
            let diff = base_degree(&c, m + c.p).unwrap() - base_degree(&c, m).unwrap();
            ensure!(diff == step, "{c}: m={m} diff {diff} != step {step}");
        }
        if kodaira_dim_is_one(&c).unwrap() {
            kappa_one += 1;
            ensure!(step >= 1, "{c}: step {step} with Kodaira dimension 1");
        }
    }
    Ok(format!(
        "1000 configs ({kappa_one} with kappa=1), m in [0,50]"
    ))
}

fn monotonicity() -> Outcome {
    let mut checked = 0;
    for c in corpus() {
        let stable = stable_threshold(&c).unwrap().stable_m;
        let mut extensions = vec![c.with_fiber(FiberDatum::tame(c.p - 1))];
        extensions.extend((0..c.p).map(|a| c.with_fiber(FiberDatum::wild(a))));
        let mut more_chi = c.clone();
        more_chi.chi += 1;
        extensions.push(more_chi);
        for e in extensions.into_iter().filter(|e| validate(e).is_valid()) {
            let s = stable_threshold(&e)
                .map_err(|err| err.to_string())?
                .stable_m;
            ensure!(s <= stable, "{c} -> {e}: {stable} -> {s}");
            checked += 1;
        }
    }
    Ok(format!("{checked} extensions, 0 counterexamples"))
}

fn chi_gates() -> Outcome {
    let reject = |g, chi| !validate(&SurfaceConfig::new(3, g, chi, 0, vec![])).is_valid();
    ensure!(reject(0, 0), "accepted g=0 chi=0");
    ensure!(reject(1, -1), "accepted g=1 chi=-1");
    ensure!(!reject(4, -1), "rejected g=4 chi=-1");
    for g in 0..=30i64 {
        let bound = Ratio::new(1 - g, 3);
        let oracle = (-50..=50)
            .find(|&c| Ratio::from_integer(c) >= bound)
            .unwrap();
        ensure!(
            min_chi(g).unwrap() == oracle,
            "g={g}: {} vs {oracle}",
            min_chi(g).unwrap()
        );
    }
    Ok("gates hold; min_chi matches the rational oracle for g in [0,30]".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        (
            "example reproduction (p=3, g=0, chi=1, two tame fibers)",
            example_reproduction,
        ),
        (
            "characteristic-3 certification, stable threshold 5",
            char_three_certification,
        ),
        ("characteristic-2 conditional bound 4", char_two_conditional),
        ("stopping-rule soundness", stopping_rule_soundness),
        ("step identity on random configs", step_identity),
        ("monotonicity under fibers and chi", monotonicity),
        ("chi lower-bound gates and min_chi oracle", chi_gates),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[PASS] {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {}. {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
