//! Exit criteria. Each test prints one `[PASS]`/`[FAIL]` line; run with
//! `cargo test -p seqsched --test acceptance -- --nocapture --test-threads 1`
//! to see them in order.

mod common;

use std::time::{Duration, Instant};

use common::enumerated_spe;
use seqsched::analysis::spoa;
use seqsched::engines::{play, RationalityModel};
use seqsched::generators::{family_matrix, gen, infinity_surrogate, Family, GeneratorSpec};
use seqsched::model::{final_loads, same_assignment};
use seqsched::numeric::{int, EpsValue};
use seqsched::optimal::{opt, opt_exhaustive};
use seqsched::suites::{run_suite, Ensemble, Suite, SuiteSummary};

fn verdict(id: &str, what: &str, passed: bool, elapsed: Duration, limit: Duration, detail: &str) {
    let in_time = elapsed < limit;
    let tag = if passed && in_time { "PASS" } else { "FAIL" };
    println!(
        "[{tag}] {id} {what}: {detail} ({:.3}s, limit {}s)",
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    assert!(passed, "{id} failed: {detail}");
    assert!(in_time, "{id} exceeded {limit:?}: took {elapsed:?}");
}

fn suite_detail(s: &SuiteSummary) -> String {
    let mut d = format!("seed {} {}/{}", s.seed, s.passed(), s.trials());
    if let Some(f) = s.first_failure() {
        d += &format!(", first failure trial {}: {}", f.index, f.detail);
    }
    d
}

fn ev(c: i64, e: i64) -> EpsValue {
    EpsValue::from_ints(c, e)
}

#[test]
fn ac01_table1_perfect_rationality() {
    let t = Instant::now();
    let inst = gen(&GeneratorSpec::new(Family::Table1)).unwrap();
    let sigma = play(&inst, RationalityModel::Perfect).unwrap();
    let eq = final_loads(&inst, &sigma).unwrap().makespan();
    let brute = opt_exhaustive(&inst).unwrap();
    let report = spoa(&inst, RationalityModel::Perfect).unwrap();
    let passed = sigma.one_based() == vec![1, 2, 1, 2, 2]
        && eq.c() == &int(4)
        && brute.makespan.c() == &int(1)
        && report.ratio == int(4);
    let detail = format!(
        "sigma {:?}, makespan {eq}, opt {}, ratio {}",
        sigma.one_based(),
        brute.makespan,
        report.ratio
    );
    verdict("AC1", "Table 1 golden", passed, t.elapsed(), Duration::from_secs(1), &detail);
}

#[test]
fn ac02_table4_one_lookahead() {
    let t = Instant::now();
    let inst = gen(&GeneratorSpec::new(Family::Table4)).unwrap();
    let sigma = play(&inst, RationalityModel::Lookahead(1)).unwrap();
    let eq = final_loads(&inst, &sigma).unwrap().makespan();
    let best = opt(&inst).unwrap();
    let report = spoa(&inst, RationalityModel::Lookahead(1)).unwrap();
    let passed = sigma.one_based() == vec![2, 1]
        && eq == ev(2, 0)
        && best.makespan == ev(1, 1)
        && report.ratio == int(2);
    let detail = format!(
        "sigma {:?}, makespan {eq}, opt {}, ratio {}",
        sigma.one_based(),
        best.makespan,
        report.ratio
    );
    verdict("AC2", "Table 4 golden", passed, t.elapsed(), Duration::from_secs(1), &detail);
}

#[test]
fn ac03_simple_minded_family() {
    let t = Instant::now();
    let mut passed = true;
    let mut detail = Vec::new();
    for m in 2..=6usize {
        let inst = gen(&GeneratorSpec::new(Family::SimpleMinded { machines: m })).unwrap();
        let sigma = play(&inst, RationalityModel::SimpleMinded).unwrap();
        let eq = final_loads(&inst, &sigma).unwrap().makespan();
        let r = spoa(&inst, RationalityModel::SimpleMinded).unwrap();
        let mi = m as i64;
        // job j takes machine j + 1, the last job takes machine 1
        let expected: Vec<usize> = (2..=m).chain(std::iter::once(1)).collect();
        let ok = sigma.one_based() == expected
            && eq == ev(mi, -(mi + 1))
            && r.opt == ev(1, 0)
            && r.ratio == int(mi)
            && r.satisfied;
        passed &= ok;
        detail.push(format!("m={m}: eq {eq} ratio {}", r.ratio));
    }

    // Table 5 as printed, with ∞ replaced by the surrogate
    let inf = ev(100, 0);
    let table5 = [vec![ev(1, -1), ev(4, -5), inf.clone(), inf.clone()],
        vec![ev(1, -1), ev(1, 0), ev(3, -4), inf.clone()],
        vec![ev(1, -1), inf.clone(), ev(1, 0), ev(2, -3)],
        vec![ev(1, -1), inf.clone(), inf.clone(), ev(1, 0)]];
    let fam4 = gen(&GeneratorSpec::new(Family::SimpleMinded { machines: 4 })).unwrap();
    let t5 = gen(&GeneratorSpec::new(Family::Table5)).unwrap();
    passed &= fam4.rows() == &table5[..] && t5.rows() == &table5[..];
    let t5_sigma = play(&t5, RationalityModel::SimpleMinded).unwrap();
    passed &= t5_sigma.one_based() == vec![2, 3, 4, 1];

    verdict("AC3", "simple-minded family m=2..6", passed, t.elapsed(), Duration::from_secs(5), &detail.join("; "));
}

#[test]
fn ac04_lemma1_suite() {
    let t = Instant::now();
    let s = run_suite(Suite::Lemma1, 1000, 20_240_401);
    let passed = s.trials() == 1000 && s.all_passed();
    verdict("AC4", "Lemma 1 ensemble", passed, t.elapsed(), Duration::from_secs(30), &suite_detail(&s));
}

#[test]
fn ac05_claim1_suite() {
    let t = Instant::now();
    // same ensemble as AC4
    let s = run_suite(Suite::Claim1, 1000, 20_240_401);
    let passed = s.trials() == 1000 && s.all_passed();
    verdict("AC5", "Claim 1 breakpoints", passed, t.elapsed(), Duration::from_secs(60), &suite_detail(&s));
}

#[test]
fn ac06_theorem_bounds() {
    let t = Instant::now();
    let s = run_suite(Suite::TheoremBounds, 500, 6);
    let per_config: Vec<String> = s
        .configs
        .iter()
        .map(|c| {
            let max = c.max_ratio.as_ref().map(|r| r.to_string()).unwrap_or_default();
            format!("{} {}/{} max {max}", c.label, c.passed, c.trials)
        })
        .collect();
    let passed = s.configs.iter().all(|c| c.trials == 500) && s.all_passed();
    let detail = format!("{}; {}", suite_detail(&s), per_config.join("; "));
    verdict("AC6", "theorem bounds", passed, t.elapsed(), Duration::from_secs(300), &detail);
}

#[test]
fn ac07_model_coincidence() {
    let t = Instant::now();
    let s = run_suite(Suite::ModelCoincidence, 200, 7);
    let passed = s.trials() == 200 && s.all_passed();
    verdict("AC7", "model coincidence", passed, t.elapsed(), Duration::from_secs(60), &suite_detail(&s));
}

#[test]
fn ac08_oracles() {
    let t = Instant::now();
    let ensemble = Ensemble::new(2..=2, 0..=6);
    let mut spe_agree = 0;
    let mut first_bad = None;
    for i in 0..300 {
        let inst = ensemble.instance(8, i);
        let sigma = play(&inst, RationalityModel::Perfect).unwrap();
        if sigma.assignment() == &enumerated_spe(&inst)[..] {
            spe_agree += 1;
        } else if first_bad.is_none() {
            first_bad = Some(i);
        }
    }
    let s = run_suite(Suite::OptOracle, 300, 9);
    let passed = spe_agree == 300 && s.trials() == 300 && s.all_passed();
    let detail = format!(
        "perfect vs enumeration {spe_agree}/300 (first mismatch {first_bad:?}); opt {}",
        suite_detail(&s)
    );
    verdict("AC8", "oracle equivalence", passed, t.elapsed(), Duration::from_secs(120), &detail);
}

#[test]
fn ac09_simple_minded_monotonicity() {
    let t = Instant::now();
    let s = run_suite(Suite::SimpleMindedMonotone, 1000, 99);
    let passed = s.trials() == 1000 && s.all_passed();
    verdict("AC9", "A_max monotone", passed, t.elapsed(), Duration::from_secs(60), &suite_detail(&s));
}

#[test]
fn ac10_surrogate_insensitivity() {
    let t = Instant::now();
    let models = [
        RationalityModel::Perfect,
        RationalityModel::Lookahead(0),
        RationalityModel::Lookahead(1),
        RationalityModel::Lookahead(2),
        RationalityModel::Lookahead(3),
        RationalityModel::SimpleMinded,
        RationalityModel::Greedy,
    ];
    let mut families = vec![Family::Table5];
    families.extend((2..=6).map(|m| Family::SimpleMinded { machines: m }));

    let mut checked = 0;
    let mut passed = true;
    for family in families {
        let (m, matrix) = family_matrix(&family).unwrap();
        if !matrix.iter().flatten().any(Option::is_none) {
            continue;
        }
        let base = infinity_surrogate(m, &matrix);
        let doubled = base.scale(&int(2));
        let a = gen(&GeneratorSpec { infinity: Some(base), ..GeneratorSpec::new(family.clone()) }).unwrap();
        let b = gen(&GeneratorSpec { infinity: Some(doubled), ..GeneratorSpec::new(family) }).unwrap();
        for model in models {
            let sa = play(&a, model).unwrap();
            let sb = play(&b, model).unwrap();
            passed &= same_assignment(&sa, &sb);
            checked += 1;
        }
    }
    let detail = format!("{checked} (instance, model) pairs unchanged");
    verdict("AC10", "surrogate insensitivity", passed && checked > 0, t.elapsed(), Duration::from_secs(10), &detail);
}
