//! Seeded property suites over random ensembles.
//!
//! Trial `i` of a run with seed `s` draws its instance from ChaCha stream `i`
//! of seed `s`, so any single trial can be regenerated without replaying the
//! others, and a run is reproducible from its seed alone.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analysis::{check_claim1, check_lemma1, check_simple_minded_monotone, spoa};
use crate::engines::{play, RationalityModel};
use crate::generators::{gen, Distribution, Family, GeneratorSpec};
use crate::model::{same_assignment, Instance};
use crate::numeric::{format_rational, Rational};
use crate::optimal::{opt, opt_exhaustive};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Lemma1,
    Claim1,
    SimpleMindedMonotone,
    TheoremBounds,
    ModelCoincidence,
    OptOracle,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Lemma1,
        Suite::Claim1,
        Suite::SimpleMindedMonotone,
        Suite::TheoremBounds,
        Suite::ModelCoincidence,
        Suite::OptOracle,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Lemma1 => "lemma1",
            Suite::Claim1 => "claim1",
            Suite::SimpleMindedMonotone => "simpleminded-monotone",
            Suite::TheoremBounds => "theorem-bounds",
            Suite::ModelCoincidence => "model-coincidence",
            Suite::OptOracle => "opt-oracle",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(Suite::name).collect();
                format!("unknown suite `{s}`, expected one of: {}", names.join(", "))
            })
    }
}

/// Shape of the random instances a suite draws.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ensemble {
    pub machines: RangeInclusive<usize>,
    pub jobs: RangeInclusive<usize>,
}

impl Ensemble {
    pub fn new(machines: RangeInclusive<usize>, jobs: RangeInclusive<usize>) -> Self {
        Ensemble { machines, jobs }
    }

    /// The instance of trial `index` for `seed`.
    pub fn instance(&self, seed: u64, index: u64) -> Instance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let machines = rng.gen_range(self.machines.clone());
        let jobs = rng.gen_range(self.jobs.clone());
        let inst_seed = rng.gen();
        gen(&GeneratorSpec::new(Family::Random {
            machines,
            jobs,
            distribution: Distribution::Hundredths,
            seed: inst_seed,
        }))
        .expect("ensemble ranges are valid")
    }
}

/// One property evaluation.
#[derive(Clone, Debug)]
pub struct TrialOutcome {
    pub index: u64,
    pub passed: bool,
    pub detail: String,
    pub instance: Instance,
    /// Equilibrium-to-optimum ratio, for suites that compute one.
    pub ratio: Option<Rational>,
}

/// Tally of one configuration inside a suite.
#[derive(Clone, Debug)]
pub struct ConfigSummary {
    pub label: String,
    pub trials: usize,
    pub passed: usize,
    pub max_ratio: Option<Rational>,
    pub first_failure: Option<TrialOutcome>,
}

impl ConfigSummary {
    fn from_outcomes(label: String, outcomes: Vec<TrialOutcome>) -> Self {
        let trials = outcomes.len();
        let passed = outcomes.iter().filter(|o| o.passed).count();
        let max_ratio = outcomes.iter().filter_map(|o| o.ratio.clone()).max();
        let first_failure = outcomes.into_iter().find(|o| !o.passed);
        ConfigSummary { label, trials, passed, max_ratio, first_failure }
    }

    pub fn all_passed(&self) -> bool {
        self.passed == self.trials
    }
}

#[derive(Clone, Debug)]
pub struct SuiteSummary {
    pub suite: Suite,
    pub seed: u64,
    pub configs: Vec<ConfigSummary>,
}

impl SuiteSummary {
    pub fn trials(&self) -> usize {
        self.configs.iter().map(|c| c.trials).sum()
    }

    pub fn passed(&self) -> usize {
        self.configs.iter().map(|c| c.passed).sum()
    }

    pub fn all_passed(&self) -> bool {
        self.configs.iter().all(ConfigSummary::all_passed)
    }

    pub fn first_failure(&self) -> Option<&TrialOutcome> {
        self.configs.iter().find_map(|c| c.first_failure.as_ref())
    }
}

fn run_trials<F>(trials: usize, offset: u64, seed: u64, ensemble: &Ensemble, check: F) -> Vec<TrialOutcome>
where
    F: Fn(&Instance) -> (bool, String, Option<Rational>) + Sync,
{
    (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let index = offset + i;
            let instance = ensemble.instance(seed, index);
            let (passed, detail, ratio) = check(&instance);
            TrialOutcome { index, passed, detail, instance, ratio }
        })
        .collect()
}

/// Random two-machine instances with up to ten jobs.
pub fn two_machine_ensemble() -> Ensemble {
    Ensemble::new(2..=2, 1..=10)
}

fn lemma1_trial(inst: &Instance) -> (bool, String, Option<Rational>) {
    match check_lemma1(inst) {
        Ok(r) => (r.holds, format!("makespan {} vs Σp_j {}", r.makespan, r.min_time_sum), None),
        Err(e) => (false, e.to_string(), None),
    }
}

fn claim1_trial(inst: &Instance) -> (bool, String, Option<Rational>) {
    match check_claim1(inst) {
        Ok(r) => {
            let detail = match r.checks.iter().find(|c| !c.holds) {
                Some(c) => format!(
                    "at breakpoint {}: makespan {} > prefix Σp_j {}",
                    c.breakpoint, c.makespan, c.min_time_sum
                ),
                None => format!("breakpoints {:?}", r.breakpoints.values()),
            };
            (r.holds, detail, None)
        }
        Err(e) => (false, e.to_string(), None),
    }
}

fn monotone_trial(inst: &Instance) -> (bool, String, Option<Rational>) {
    match check_simple_minded_monotone(inst) {
        Ok(r) => match r.first_violation {
            Some(l) => {
                (false, format!("A_max rises at ℓ = {l}: {} > {}", r.a_max[l], r.a_max[l - 1]), None)
            }
            None => (true, String::new(), None),
        },
        Err(e) => (false, e.to_string(), None),
    }
}

fn bound_trial(model: RationalityModel) -> impl Fn(&Instance) -> (bool, String, Option<Rational>) + Sync {
    move |inst| match spoa(inst, model) {
        Ok(r) => {
            let bound = r.bound.as_ref().map_or("none".to_string(), format_rational);
            let detail = format!("ratio {} vs bound {bound}", format_rational(&r.ratio));
            (r.satisfied, detail, Some(r.ratio))
        }
        Err(e) => (false, e.to_string(), None),
    }
}

fn coincidence_trial(inst: &Instance) -> (bool, String, Option<Rational>) {
    let n = inst.jobs();
    let pairs = [
        (RationalityModel::Lookahead(n.saturating_sub(1)), RationalityModel::Perfect),
        (RationalityModel::Lookahead(0), RationalityModel::Greedy),
    ];
    for (a, b) in pairs {
        match (play(inst, a), play(inst, b)) {
            (Ok(x), Ok(y)) if same_assignment(&x, &y) => {}
            (Ok(x), Ok(y)) => {
                let detail = format!("{a} plays {:?}, {b} plays {:?}", x.one_based(), y.one_based());
                return (false, detail, None);
            }
            (Err(e), _) | (_, Err(e)) => return (false, e.to_string(), None),
        }
    }
    (true, String::new(), None)
}

fn opt_oracle_trial(inst: &Instance) -> (bool, String, Option<Rational>) {
    match (opt(inst), opt_exhaustive(inst)) {
        (Ok(bb), Ok(brute)) => {
            let detail = format!("branch and bound {} vs enumeration {}", bb.makespan, brute.makespan);
            (bb.makespan == brute.makespan, detail, None)
        }
        (Err(e), _) | (_, Err(e)) => (false, e.to_string(), None),
    }
}

/// One theorem-bound configuration: a model played on an ensemble.
#[derive(Clone, Debug)]
pub struct BoundConfig {
    pub label: &'static str,
    pub model: RationalityModel,
    pub ensemble: Ensemble,
}

/// Two machines at `k ∈ {2, 3}`, three and four machines at `k ∈ {1, 2}`,
/// greedy and simple-minded on two to four machines; always `n ≤ 10`.
pub fn theorem_bound_configs() -> Vec<BoundConfig> {
    let cfg = |label, model, machines: RangeInclusive<usize>| BoundConfig {
        label,
        model,
        ensemble: Ensemble::new(machines, 1..=10),
    };
    vec![
        cfg("m=2 lookahead(2)", RationalityModel::Lookahead(2), 2..=2),
        cfg("m=2 lookahead(3)", RationalityModel::Lookahead(3), 2..=2),
        cfg("m=3 lookahead(1)", RationalityModel::Lookahead(1), 3..=3),
        cfg("m=3 lookahead(2)", RationalityModel::Lookahead(2), 3..=3),
        cfg("m=4 lookahead(1)", RationalityModel::Lookahead(1), 4..=4),
        cfg("m=4 lookahead(2)", RationalityModel::Lookahead(2), 4..=4),
        cfg("m=2..4 greedy", RationalityModel::Greedy, 2..=4),
        cfg("m=2..4 simple-minded", RationalityModel::SimpleMinded, 2..=4),
    ]
}

/// Run a suite. For `theorem-bounds`, `trials` is per configuration; for
/// every other suite it is the total.
pub fn run_suite(suite: Suite, trials: usize, seed: u64) -> SuiteSummary {
    let single = |label: &str, outcomes| vec![ConfigSummary::from_outcomes(label.to_string(), outcomes)];
    let configs = match suite {
        Suite::Lemma1 => single(
            "m=2 lookahead(1), n ≤ 10",
            run_trials(trials, 0, seed, &two_machine_ensemble(), lemma1_trial),
        ),
        Suite::Claim1 => single(
            "m=2 lookahead(1), n ≤ 10",
            run_trials(trials, 0, seed, &two_machine_ensemble(), claim1_trial),
        ),
        Suite::SimpleMindedMonotone => single(
            "m ≤ 5, n ≤ 12",
            run_trials(trials, 0, seed, &Ensemble::new(1..=5, 1..=12), monotone_trial),
        ),
        Suite::TheoremBounds => theorem_bound_configs()
            .into_iter()
            .enumerate()
            .map(|(c, cfg)| {
                let offset = (c * trials) as u64;
                let outcomes = run_trials(trials, offset, seed, &cfg.ensemble, bound_trial(cfg.model));
                ConfigSummary::from_outcomes(cfg.label.to_string(), outcomes)
            })
            .collect(),
        Suite::ModelCoincidence => {
            // even trials on two machines, odd trials on three
            let two = trials.div_ceil(2);
            let three = trials / 2;
            let a = run_trials_strided(two, 0, seed, &Ensemble::new(2..=2, 1..=8));
            let b = run_trials_strided(three, 1, seed, &Ensemble::new(3..=3, 1..=6));
            vec![
                ConfigSummary::from_outcomes("m=2, n ≤ 8".into(), a),
                ConfigSummary::from_outcomes("m=3, n ≤ 6".into(), b),
            ]
        }
        Suite::OptOracle => single(
            "m ≤ 3, n ≤ 8",
            run_trials(trials, 0, seed, &Ensemble::new(1..=3, 0..=8), opt_oracle_trial),
        ),
    };
    SuiteSummary { suite, seed, configs }
}

fn run_trials_strided(count: usize, parity: u64, seed: u64, ensemble: &Ensemble) -> Vec<TrialOutcome> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let index = 2 * i + parity;
            let instance = ensemble.instance(seed, index);
            let (passed, detail, ratio) = coincidence_trial(&instance);
            TrialOutcome { index, passed, detail, instance, ratio }
        })
        .collect()
}
