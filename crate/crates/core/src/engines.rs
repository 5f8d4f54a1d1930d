//! Decision procedures for sequential play.
//!
//! Every engine is a pure function of the instance, the loads left by the
//! predecessors and the job about to move. Ties are broken towards the lowest
//! machine index at every level of every induction, so the engines agree
//! exactly where their definitions coincide: `Lookahead(0)` is `Greedy`, and
//! `Lookahead(k)` with `k ≥ n − 1` is `Perfect`.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{argmin, DecisionRecord, Instance, LoadVector, ModelError, Schedule};
use crate::numeric::EpsValue;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("backward induction over {jobs} jobs on {machines} machines exceeds the limit of {limit} jobs")]
    TooDeep { jobs: usize, machines: usize, limit: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("unknown rationality model `{0}`")]
    UnknownModel(String),
}

/// Which decision procedure every player runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RationalityModel {
    /// Full backward induction: the subgame-perfect equilibrium.
    Perfect,
    /// Backward induction over the player and its next `k` successors.
    Lookahead(usize),
    /// Minimum anticipated load, assuming successors take their fastest machine.
    SimpleMinded,
    /// Minimum current load plus own processing time.
    Greedy,
}

impl RationalityModel {
    /// Short name as used on the command line and in CSV output.
    pub fn name(&self) -> &'static str {
        match self {
            RationalityModel::Perfect => "perfect",
            RationalityModel::Lookahead(_) => "lookahead",
            RationalityModel::SimpleMinded => "simple-minded",
            RationalityModel::Greedy => "greedy",
        }
    }

    pub fn k(&self) -> Option<usize> {
        match self {
            RationalityModel::Lookahead(k) => Some(*k),
            _ => None,
        }
    }

    /// Build from a command-line name and an optional `k`.
    pub fn from_parts(name: &str, k: Option<usize>) -> Result<Self, EngineError> {
        match name {
            "perfect" => Ok(RationalityModel::Perfect),
            "lookahead" => Ok(RationalityModel::Lookahead(k.unwrap_or(1))),
            "simple-minded" | "simpleminded" => Ok(RationalityModel::SimpleMinded),
            "greedy" => Ok(RationalityModel::Greedy),
            other => Err(EngineError::UnknownModel(other.to_string())),
        }
    }
}

impl fmt::Display for RationalityModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalityModel::Lookahead(k) => write!(f, "lookahead({k})"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for RationalityModel {
    type Err = EngineError;

    /// Accepts `perfect`, `greedy`, `simple-minded`, `lookahead(k)` and `lookahead:k`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let inner = t
            .strip_prefix("lookahead(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| t.strip_prefix("lookahead:"));
        if let Some(k) = inner {
            return k
                .parse()
                .map(RationalityModel::Lookahead)
                .map_err(|_| EngineError::UnknownModel(s.to_string()));
        }
        RationalityModel::from_parts(t, None)
    }
}

/// Largest induction depth accepted by [`play_with_limits`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DepthLimits {
    pub two_machines: usize,
    pub many_machines: usize,
}

impl Default for DepthLimits {
    fn default() -> Self {
        DepthLimits { two_machines: 22, many_machines: 14 }
    }
}

impl DepthLimits {
    pub fn for_machines(&self, m: usize) -> usize {
        match m {
            1 => usize::MAX,
            2 => self.two_machines,
            _ => self.many_machines,
        }
    }
}

/// One player's choice together with what it expected to pay.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub machine: usize,
    pub cost: EpsValue,
    pub alternatives: Vec<(usize, EpsValue)>,
}

impl Decision {
    // Lowest-cost alternative, first on ties.
    fn from_alternatives(alternatives: Vec<(usize, EpsValue)>) -> Self {
        let (pos, _) = argmin(alternatives.iter().map(|(_, c)| c)).expect("at least one machine");
        let (machine, cost) = alternatives[pos].clone();
        Decision { machine, cost, alternatives }
    }

    fn into_record(self, job: usize) -> DecisionRecord {
        DecisionRecord {
            job,
            chosen: self.machine,
            anticipated_cost: self.cost,
            alternatives: self.alternatives,
        }
    }
}

/// Final loads reached when the jobs in `window` play by backward induction
/// from `loads`, each minimizing its machine's load at the end of the window.
///
/// `loads` is restored before returning.
fn induce(inst: &Instance, loads: &mut LoadVector, window: Range<usize>) -> LoadVector {
    let Some(job) = window.clone().next() else {
        return loads.clone();
    };
    let rest = job + 1..window.end;
    let mut best: Option<(usize, LoadVector)> = None;
    for i in 0..inst.machines() {
        let p = inst.time(i, job);
        loads.add_to(i, p);
        let outcome = induce(inst, loads, rest.clone());
        loads.sub_from(i, p);
        match &best {
            Some((b, out)) if outcome[i] >= out[*b] => {}
            _ => best = Some((i, outcome)),
        }
    }
    best.expect("at least one machine").1
}

/// Job `job` decides by backward induction over `job..end`.
fn decide_by_induction(inst: &Instance, job: usize, current: &LoadVector, end: usize) -> Decision {
    let mut loads = current.clone();
    let alternatives = (0..inst.machines())
        .map(|i| {
            let p = inst.time(i, job);
            loads.add_to(i, p);
            let outcome = induce(inst, &mut loads, job + 1..end);
            loads.sub_from(i, p);
            (i, outcome[i].clone())
        })
        .collect();
    Decision::from_alternatives(alternatives)
}

/// Subgame-perfect choice of `job`, inducting over every remaining job.
///
/// The anticipated cost is the final load of the chosen machine when all
/// successors also play perfectly.
pub fn decide_perfect(inst: &Instance, job: usize, current: &LoadVector) -> Decision {
    decide_by_induction(inst, job, current, inst.jobs())
}

/// Choice of `job` when it sees only its next `k` successors.
///
/// The window `job..=min(job + k, n − 1)` is solved by backward induction as
/// if its last job were the last job of the game.
pub fn decide_lookahead(inst: &Instance, job: usize, current: &LoadVector, k: usize) -> Decision {
    decide_by_induction(inst, job, current, lookahead_end(job, k, inst.jobs()))
}

fn lookahead_end(job: usize, k: usize, end: usize) -> usize {
    job.saturating_add(k).saturating_add(1).min(end)
}

/// Myopic best response: `argmin_i (loads_i + p_{i,job})`.
pub fn decide_greedy(inst: &Instance, job: usize, current: &LoadVector) -> Decision {
    let alternatives =
        (0..inst.machines()).map(|i| (i, &current[i] + inst.time(i, job))).collect();
    Decision::from_alternatives(alternatives)
}

/// Per-machine processing time of the jobs in `jobs`, each counted on the
/// machine where it is fastest (lowest index on ties).
pub fn assumed_successor_load(inst: &Instance, jobs: Range<usize>) -> LoadVector {
    let mut mass = LoadVector::zeros(inst.machines());
    for j in jobs {
        let (t, i) = inst.min_time(j);
        mass.add_to(i, &t);
    }
    mass
}

/// Simple-minded choice of `job`: minimize
/// `loads_i + p_{i,job} + P_i(job+1..n)`, where `P_i` sums the successors
/// whose fastest machine is `i`.
pub fn decide_simple_minded(inst: &Instance, job: usize, current: &LoadVector) -> Decision {
    decide_simple_minded_until(inst, job, current, inst.jobs())
}

fn decide_simple_minded_until(
    inst: &Instance,
    job: usize,
    current: &LoadVector,
    end: usize,
) -> Decision {
    let successors = assumed_successor_load(inst, job + 1..end);
    let alternatives = (0..inst.machines())
        .map(|i| {
            let mut cost = &current[i] + inst.time(i, job);
            cost += &successors[i];
            (i, cost)
        })
        .collect();
    Decision::from_alternatives(alternatives)
}

/// The decision of `job` under `model` in a game whose last job is `end - 1`.
pub fn decide(
    inst: &Instance,
    model: RationalityModel,
    job: usize,
    current: &LoadVector,
    end: usize,
) -> Decision {
    match model {
        RationalityModel::Perfect => decide_by_induction(inst, job, current, end),
        RationalityModel::Lookahead(k) => {
            decide_by_induction(inst, job, current, lookahead_end(job, k, end))
        }
        RationalityModel::SimpleMinded => decide_simple_minded_until(inst, job, current, end),
        RationalityModel::Greedy => decide_greedy(inst, job, current),
    }
}

/// Result of playing a contiguous block of jobs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Play {
    /// Machine of every job in the block, in block order, with its trace.
    pub schedule: Schedule,
    pub final_loads: LoadVector,
}

/// Sequential play of the whole instance from empty machines.
pub fn play(inst: &Instance, model: RationalityModel) -> Result<Schedule, EngineError> {
    let init = LoadVector::zeros(inst.machines());
    Ok(play_from(inst, model, &init, 0..inst.jobs())?.schedule)
}

/// Sequential play of `jobs` on top of `initial`, treating `jobs.end - 1` as
/// the last job of the game.
pub fn play_from(
    inst: &Instance,
    model: RationalityModel,
    initial: &LoadVector,
    jobs: Range<usize>,
) -> Result<Play, EngineError> {
    play_with_limits(inst, model, initial, jobs, DepthLimits::default())
}

pub fn play_with_limits(
    inst: &Instance,
    model: RationalityModel,
    initial: &LoadVector,
    jobs: Range<usize>,
    limits: DepthLimits,
) -> Result<Play, EngineError> {
    if initial.len() != inst.machines() {
        return Err(ModelError::LoadLength { got: initial.len(), expected: inst.machines() }.into());
    }
    if jobs.end > inst.jobs() || jobs.start > jobs.end {
        return Err(ModelError::IndexOutOfRange {
            what: "job",
            index: jobs.end,
            limit: inst.jobs(),
        }
        .into());
    }
    let depth = match model {
        RationalityModel::Perfect => jobs.len(),
        RationalityModel::Lookahead(k) => jobs.len().min(k.saturating_add(1)),
        _ => 0,
    };
    let limit = limits.for_machines(inst.machines());
    if depth > limit {
        return Err(EngineError::TooDeep { jobs: depth, machines: inst.machines(), limit });
    }

    let mut loads = initial.clone();
    let mut assignment = Vec::with_capacity(jobs.len());
    let mut trace = Vec::with_capacity(jobs.len());
    for j in jobs.clone() {
        let d = decide(inst, model, j, &loads, jobs.end);
        loads.add_to(d.machine, inst.time(d.machine, j));
        assignment.push(d.machine);
        trace.push(d.into_record(j));
    }
    Ok(Play { schedule: Schedule::with_trace(assignment, trace), final_loads: loads })
}

/// `A_i(ℓ) = D_i(ℓ) + P_i(ℓ+1..n)` for `ℓ = 0..=n` along `sigma`: the load
/// each machine would end with if every job after `ℓ` took its fastest
/// machine.
pub fn anticipated_profile(
    inst: &Instance,
    sigma: &Schedule,
) -> Result<Vec<LoadVector>, ModelError> {
    sigma.validate(inst)?;
    let n = inst.jobs();
    let mut profile = Vec::with_capacity(n + 1);
    let mut a = assumed_successor_load(inst, 0..n);
    profile.push(a.clone());
    for j in 0..n {
        let (t, fastest) = inst.min_time(j);
        a.sub_from(fastest, &t);
        let chosen = sigma.machine_of(j);
        a.add_to(chosen, inst.time(chosen, j));
        profile.push(a.clone());
    }
    Ok(profile)
}
