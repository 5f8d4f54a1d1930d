//! Price-of-anarchy ratios and the bound checks built on top of the engines.

use std::ops::Range;

use num::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::engines::{anticipated_profile, play, play_from, EngineError, RationalityModel};
use crate::model::{final_loads, loads_after, Instance, LoadVector, ModelError, Schedule};
use crate::numeric::{int, limit_ratio, ratio, EpsValue, Rational};
use crate::optimal::{opt, OptError, OptResult};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("this check is defined for two machines, instance has {0}")]
    NotTwoMachines(usize),
    #[error("breakpoint scan starting at job {start} found no job on machine {machine} before the end")]
    ScanRanOffEnd { start: usize, machine: usize },
    #[error("optimal makespan {0} has zero constant part, the ratio has no finite limit")]
    DegenerateOpt(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Opt(#[from] OptError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Equilibrium versus optimum for one instance under one model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpoaReport {
    pub instance: String,
    pub model: RationalityModel,
    pub machines: usize,
    pub jobs: usize,
    pub equilibrium: EpsValue,
    pub opt: EpsValue,
    /// `lim_{ε→0} equilibrium / opt`.
    pub ratio: Rational,
    pub bound: Option<Rational>,
    /// `ratio ≤ bound`, vacuously true without a bound.
    pub satisfied: bool,
}

/// Proven upper bound on the ratio for `model` with `m` machines and `n` jobs.
///
/// * greedy and simple-minded: `m`
/// * `k`-lookahead, two machines: `2(k² − k + 1)`
/// * `k`-lookahead, otherwise: `min(m·k·2^k + m, m + n·2^k)`
/// * perfect rationality: none
pub fn spoa_bound(model: RationalityModel, m: usize, n: usize) -> Option<Rational> {
    let m_r = Rational::from_integer(BigInt::from(m));
    match model {
        RationalityModel::Greedy | RationalityModel::SimpleMinded => Some(m_r),
        RationalityModel::Perfect => None,
        RationalityModel::Lookahead(k) => {
            let k_r = Rational::from_integer(BigInt::from(k));
            if m == 2 {
                return Some((&k_r * &k_r - &k_r + int(1)) * int(2));
            }
            let two_k = Rational::from_integer(num::pow(BigInt::from(2u32), k));
            let per_window = &m_r * &k_r * &two_k + &m_r;
            let per_job = &m_r + Rational::from_integer(BigInt::from(n)) * &two_k;
            Some(per_window.min(per_job))
        }
    }
}

fn instance_label(inst: &Instance) -> String {
    inst.name().unwrap_or("unnamed").to_string()
}

pub fn spoa(inst: &Instance, model: RationalityModel) -> Result<SpoaReport, AnalysisError> {
    let best = opt(inst)?;
    spoa_with_opt(inst, model, &best)
}

/// Same as [`spoa`] with a precomputed optimum, so several models can share
/// one search.
pub fn spoa_with_opt(
    inst: &Instance,
    model: RationalityModel,
    best: &OptResult,
) -> Result<SpoaReport, AnalysisError> {
    let sigma = play(inst, model)?;
    let equilibrium = final_loads(inst, &sigma)?.makespan();
    let ratio = limit_ratio(&equilibrium, &best.makespan)
        .map_err(|_| AnalysisError::DegenerateOpt(best.makespan.to_string()))?;
    let bound = spoa_bound(model, inst.machines(), inst.jobs());
    let satisfied = bound.as_ref().is_none_or(|b| ratio <= *b);
    Ok(SpoaReport {
        instance: instance_label(inst),
        model,
        machines: inst.machines(),
        jobs: inst.jobs(),
        equilibrium,
        opt: best.makespan.clone(),
        ratio,
        bound,
        satisfied,
    })
}

/// Breakpoints `0 = n_0 < n_1 < … < n_u = n` partitioning a two-machine play.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Breakpoints(Vec<usize>);

impl Breakpoints {
    pub fn values(&self) -> &[usize] {
        &self.0
    }
}

/// Partition a two-machine schedule. Starting from job `v`, if machine 1 is
/// no worse for `v` myopically, the next breakpoint is the next job placed on
/// machine 1, otherwise the next job placed on machine 2.
///
/// Breakpoint values count jobs, so `n_ℓ` is a 1-based job number.
pub fn breakpoints(inst: &Instance, sigma: &Schedule) -> Result<Breakpoints, AnalysisError> {
    if inst.machines() != 2 {
        return Err(AnalysisError::NotTwoMachines(inst.machines()));
    }
    sigma.validate(inst)?;
    let n = inst.jobs();
    // prefix[v] = loads after jobs 1..=v
    let mut prefix = Vec::with_capacity(n + 1);
    let mut loads = LoadVector::zeros(2);
    prefix.push(loads.clone());
    for j in 0..n {
        loads.add_to(sigma.machine_of(j), inst.time(sigma.machine_of(j), j));
        prefix.push(loads.clone());
    }

    let mut points = vec![0];
    let mut v = 1;
    while v <= n {
        let d = &prefix[v - 1];
        let on_first = &d[0] + inst.time(0, v - 1);
        let on_second = &d[1] + inst.time(1, v - 1);
        let target = if on_first <= on_second { 0 } else { 1 };
        let start = v;
        while sigma.machine_of(v - 1) != target {
            v += 1;
            if v > n {
                return Err(AnalysisError::ScanRanOffEnd { start, machine: target + 1 });
            }
        }
        points.push(v);
        v += 1;
    }
    Ok(Breakpoints(points))
}

/// One breakpoint of the prefix inequality `max_i D_i(n_ℓ) ≤ Σ_{j ≤ n_ℓ} p_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BreakpointCheck {
    pub breakpoint: usize,
    pub makespan: EpsValue,
    pub min_time_sum: EpsValue,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claim1Report {
    pub schedule: Schedule,
    pub breakpoints: Breakpoints,
    pub checks: Vec<BreakpointCheck>,
    pub holds: bool,
}

/// Play at 1-lookahead on two machines and check the prefix inequality at
/// every breakpoint.
pub fn check_claim1(inst: &Instance) -> Result<Claim1Report, AnalysisError> {
    if inst.machines() != 2 {
        return Err(AnalysisError::NotTwoMachines(inst.machines()));
    }
    let schedule = play(inst, RationalityModel::Lookahead(1))?;
    let bps = breakpoints(inst, &schedule)?;
    let zero = LoadVector::zeros(2);
    let checks: Vec<BreakpointCheck> = bps
        .values()
        .iter()
        .map(|&b| {
            let makespan = loads_after(inst, &schedule, b, &zero)?.makespan();
            let min_time_sum = inst.min_time_sum(0..b);
            let holds = makespan <= min_time_sum;
            Ok(BreakpointCheck { breakpoint: b, makespan, min_time_sum, holds })
        })
        .collect::<Result<_, ModelError>>()?;
    let holds = checks.iter().all(|c| c.holds);
    Ok(Claim1Report { schedule, breakpoints: bps, checks, holds })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma1Report {
    pub makespan: EpsValue,
    pub min_time_sum: EpsValue,
    pub holds: bool,
}

/// 1-lookahead makespan on two machines against `Σ_j p_j`.
pub fn check_lemma1(inst: &Instance) -> Result<Lemma1Report, AnalysisError> {
    if inst.machines() != 2 {
        return Err(AnalysisError::NotTwoMachines(inst.machines()));
    }
    let sigma = play(inst, RationalityModel::Lookahead(1))?;
    let makespan = final_loads(inst, &sigma)?.makespan();
    let min_time_sum = inst.min_time_sum(0..inst.jobs());
    let holds = makespan <= min_time_sum;
    Ok(Lemma1Report { makespan, min_time_sum, holds })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneReport {
    /// `max_i A_i(ℓ)` for `ℓ = 0..=n`.
    pub a_max: Vec<EpsValue>,
    /// First `ℓ` with `A_max(ℓ) > A_max(ℓ − 1)`.
    pub first_violation: Option<usize>,
}

impl MonotoneReport {
    pub fn holds(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Along simple-minded play, `max_i A_i(ℓ)` must never increase.
pub fn check_simple_minded_monotone(inst: &Instance) -> Result<MonotoneReport, AnalysisError> {
    let sigma = play(inst, RationalityModel::SimpleMinded)?;
    let a_max: Vec<EpsValue> =
        anticipated_profile(inst, &sigma)?.iter().map(LoadVector::makespan).collect();
    let first_violation = (1..a_max.len()).find(|&l| a_max[l] > a_max[l - 1]);
    Ok(MonotoneReport { a_max, first_violation })
}

/// Lower estimate of the largest makespan increase the jobs in `jobs` can
/// cause over any initial load: the maximum of `L_max(D, J) − max(D)` over
/// sampled `D`.
///
/// The samples are the zero vector, each unit vector scaled by `Σ_{j∈J} p_j`,
/// and `samples` seeded random vectors with entries in `[0, 2·Σ p_j]`. Random
/// vectors are drawn in sequence, so a larger `samples` with the same seed
/// only adds candidates.
pub fn delta_l_estimate(
    inst: &Instance,
    jobs: Range<usize>,
    model: RationalityModel,
    samples: usize,
    seed: u64,
) -> Result<EpsValue, AnalysisError> {
    let m = inst.machines();
    let mass = inst.min_time_sum(jobs.clone());

    let mut candidates = vec![LoadVector::zeros(m)];
    for i in 0..m {
        let mut unit = LoadVector::zeros(m);
        unit.add_to(i, &mass);
        candidates.push(unit);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = mass.scale(&int(2));
    for _ in 0..samples {
        let v = (0..m).map(|_| span.scale(&ratio(rng.gen_range(0..=1000), 1000))).collect();
        candidates.push(LoadVector::new(v));
    }

    let mut best: Option<EpsValue> = None;
    for d in &candidates {
        let outcome = play_from(inst, model, d, jobs.clone())?;
        let increase = &outcome.final_loads.makespan() - &d.makespan();
        if best.as_ref().is_none_or(|b| increase > *b) {
            best = Some(increase);
        }
    }
    Ok(best.unwrap_or_default())
}

/// Per-instance reports for a batch, with the largest ratio seen.
#[derive(Clone, Debug, Default)]
pub struct BatchReport {
    pub reports: Vec<SpoaReport>,
    pub errors: Vec<(String, AnalysisError)>,
    pub max_ratio: Option<Rational>,
}

impl BatchReport {
    pub fn violations(&self) -> impl Iterator<Item = &SpoaReport> {
        self.reports.iter().filter(|r| !r.satisfied)
    }

    pub fn all_satisfied(&self) -> bool {
        self.errors.is_empty() && self.reports.iter().all(|r| r.satisfied)
    }
}

/// Compute every instance's ratio in parallel and compare it with its bound.
/// Reports keep the batch order.
pub fn check_theorem_bounds(batch: &[Instance], model: RationalityModel) -> BatchReport {
    let results: Vec<Result<SpoaReport, AnalysisError>> =
        batch.par_iter().map(|inst| spoa(inst, model)).collect();
    let mut out = BatchReport::default();
    for (inst, r) in batch.iter().zip(results) {
        match r {
            Ok(rep) => out.reports.push(rep),
            Err(e) => out.errors.push((instance_label(inst), e)),
        }
    }
    out.max_ratio = out.reports.iter().map(|r| r.ratio.clone()).max();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen, Family, GeneratorSpec};

    fn ev(c: i64, e: i64) -> EpsValue {
        EpsValue::from_ints(c, e)
    }

    fn table(f: Family) -> Instance {
        gen(&GeneratorSpec::new(f)).unwrap()
    }

    #[test]
    fn bounds() {
        assert_eq!(spoa_bound(RationalityModel::Lookahead(1), 2, 9), Some(int(2)));
        assert_eq!(spoa_bound(RationalityModel::Lookahead(2), 2, 9), Some(int(6)));
        assert_eq!(spoa_bound(RationalityModel::Lookahead(3), 2, 9), Some(int(14)));
        // m = 3, k = 2: min(3·2·4 + 3, 3 + n·4)
        assert_eq!(spoa_bound(RationalityModel::Lookahead(2), 3, 10), Some(int(27)));
        assert_eq!(spoa_bound(RationalityModel::Lookahead(2), 3, 4), Some(int(19)));
        assert_eq!(spoa_bound(RationalityModel::Lookahead(0), 4, 10), Some(int(4)));
        assert_eq!(spoa_bound(RationalityModel::Lookahead(0), 2, 10), Some(int(2)));
        assert_eq!(spoa_bound(RationalityModel::SimpleMinded, 5, 1), Some(int(5)));
        assert_eq!(spoa_bound(RationalityModel::Greedy, 3, 1), Some(int(3)));
        assert_eq!(spoa_bound(RationalityModel::Perfect, 2, 5), None);
    }

    #[test]
    fn spoa_table4() {
        let r = spoa(&table(Family::Table4), RationalityModel::Lookahead(1)).unwrap();
        assert_eq!(r.equilibrium, ev(2, 0));
        assert_eq!(r.opt, ev(1, 1));
        assert_eq!(r.ratio, int(2));
        assert_eq!(r.bound, Some(int(2)));
        assert!(r.satisfied);
    }

    #[test]
    fn spoa_table5() {
        let r = spoa(&table(Family::Table5), RationalityModel::SimpleMinded).unwrap();
        assert_eq!(r.equilibrium, ev(4, -5));
        assert_eq!((r.ratio.clone(), r.bound.clone()), (int(4), Some(int(4))));
        assert!(r.satisfied);
    }

    #[test]
    fn spoa_table1_perfect_has_no_bound() {
        let r = spoa(&table(Family::Table1), RationalityModel::Perfect).unwrap();
        assert_eq!(r.equilibrium, ev(4, -13));
        assert_eq!(r.ratio, int(4));
        assert_eq!(r.bound, None);
        assert!(r.satisfied);
        assert_eq!(&r.ratio * r.opt.c(), *r.equilibrium.c());
    }

    #[test]
    fn degenerate_opt() {
        let inst = Instance::new(None, 2, vec![vec![ev(0, 1), ev(0, 2)]]).unwrap();
        assert!(matches!(
            spoa(&inst, RationalityModel::Greedy),
            Err(AnalysisError::DegenerateOpt(_))
        ));
    }

    #[test]
    fn breakpoints_table4() {
        let inst = table(Family::Table4);
        let sigma = Schedule::from_one_based(&[2, 1]);
        assert_eq!(breakpoints(&inst, &sigma).unwrap().values(), &[0, 1, 2]);
    }

    #[test]
    fn breakpoints_edge_cases() {
        let empty = Instance::new(None, 2, vec![]).unwrap();
        assert_eq!(breakpoints(&empty, &Schedule::new(vec![])).unwrap().values(), &[0]);

        // job 1 is myopically better on machine 1 and goes there
        let inst = Instance::new(None, 2, vec![vec![ev(1, 0), ev(2, 0)], vec![ev(1, 0), ev(2, 0)]])
            .unwrap();
        let sigma = Schedule::from_one_based(&[1, 1]);
        assert_eq!(breakpoints(&inst, &sigma).unwrap().values(), &[0, 1, 2]);

        // the second job prefers machine 1 but nobody after it goes there
        let err = breakpoints(&inst, &Schedule::from_one_based(&[1, 2])).unwrap_err();
        assert_eq!(err, AnalysisError::ScanRanOffEnd { start: 2, machine: 1 });

        let three = table(Family::Table5);
        assert_eq!(
            breakpoints(&three, &Schedule::from_one_based(&[1, 1, 1, 1])).unwrap_err(),
            AnalysisError::NotTwoMachines(4)
        );
    }

    #[test]
    fn claim1_and_lemma1_table4() {
        let inst = table(Family::Table4);
        let c = check_claim1(&inst).unwrap();
        assert!(c.holds);
        assert_eq!(c.breakpoints.values(), &[0, 1, 2]);
        assert_eq!(c.checks[1].makespan, ev(1, 0));
        assert_eq!(c.checks[1].min_time_sum, ev(1, 0));
        assert_eq!(c.checks[2].makespan, ev(2, 0));
        assert_eq!(c.checks[2].min_time_sum, ev(2, 1));

        let l = check_lemma1(&inst).unwrap();
        assert!(l.holds);
        assert_eq!((l.makespan, l.min_time_sum), (ev(2, 0), ev(2, 1)));
    }

    #[test]
    fn claim1_lemma1_trivial_cases() {
        let empty = Instance::new(None, 2, vec![]).unwrap();
        assert!(check_claim1(&empty).unwrap().holds);
        let single = Instance::new(None, 2, vec![vec![ev(3, 0), ev(2, 0)]]).unwrap();
        let l = check_lemma1(&single).unwrap();
        assert!(l.holds);
        assert_eq!(l.makespan, l.min_time_sum);
        assert_eq!(
            check_lemma1(&table(Family::Table5)).unwrap_err(),
            AnalysisError::NotTwoMachines(4)
        );
    }

    #[test]
    fn monotone_on_table5() {
        let r = check_simple_minded_monotone(&table(Family::Table5)).unwrap();
        assert!(r.holds());
        assert_eq!(r.a_max.len(), 5);
    }

    #[test]
    fn delta_l_examples() {
        let inst = table(Family::Table1);
        let m = RationalityModel::Lookahead(1);
        assert!(delta_l_estimate(&inst, 2..2, m, 10, 1).unwrap().is_zero());

        let single = delta_l_estimate(&inst, 3..4, m, 20, 1).unwrap();
        assert!(!single.is_negative());

        let zero_start = play_from(&inst, m, &LoadVector::zeros(2), 0..5).unwrap();
        let at_zero = zero_start.final_loads.makespan();
        let est = delta_l_estimate(&inst, 0..5, m, 30, 4).unwrap();
        assert!(est >= at_zero);

        let fewer = delta_l_estimate(&inst, 0..5, m, 5, 4).unwrap();
        assert!(fewer <= est);
    }

    #[test]
    fn batch_check() {
        let batch = vec![table(Family::Table4)];
        let r = check_theorem_bounds(&batch, RationalityModel::Lookahead(1));
        assert!(r.all_satisfied());
        assert_eq!(r.max_ratio, Some(int(2)));

        let family: Vec<Instance> = (2..=6)
            .map(|m| gen(&GeneratorSpec::new(Family::SimpleMinded { machines: m })).unwrap())
            .collect();
        let r = check_theorem_bounds(&family, RationalityModel::SimpleMinded);
        assert!(r.all_satisfied());
        for (m, rep) in (2..=6).zip(&r.reports) {
            assert_eq!(rep.ratio, int(m));
            assert_eq!(rep.bound, Some(int(m)));
        }
    }
}
