//! Exact minimum makespan over all `m^n` assignments.

use thiserror::Error;

use crate::engines::{play, RationalityModel};
use crate::model::{final_loads, Instance, LoadVector, Schedule};
use crate::numeric::EpsValue;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OptError {
    #[error("search exceeded the budget of {budget} nodes before proving optimality")]
    SizeLimit { budget: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptResult {
    pub makespan: EpsValue,
    /// A schedule attaining `makespan`.
    pub schedule: Schedule,
    pub nodes_explored: u64,
}

pub const DEFAULT_NODE_BUDGET: u64 = 200_000_000;

/// Largest `m^n` [`opt_exhaustive`] will enumerate.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 24;

pub fn opt(inst: &Instance) -> Result<OptResult, OptError> {
    opt_with_budget(inst, DEFAULT_NODE_BUDGET)
}

/// Depth-first branch and bound: jobs in input order, machines in index
/// order, incumbent seeded with the greedy schedule. A node is cut when its
/// lower bound (current makespan, average remaining mass, largest remaining
/// minimum time) reaches the incumbent.
pub fn opt_with_budget(inst: &Instance, budget: u64) -> Result<OptResult, OptError> {
    let n = inst.jobs();
    let m = inst.machines();

    // suffix_mass[j] = Σ_{j' ≥ j} p_j', suffix_peak[j] = max_{j' ≥ j} p_j'
    let mut suffix_mass = vec![EpsValue::zero(); n + 1];
    let mut suffix_peak = vec![EpsValue::zero(); n + 1];
    for j in (0..n).rev() {
        let p = inst.min_time(j).0;
        suffix_mass[j] = &suffix_mass[j + 1] + &p;
        suffix_peak[j] = suffix_peak[j + 1].clone().max(p);
    }

    let greedy = play(inst, RationalityModel::Greedy).expect("greedy play has no depth limit");
    let greedy = Schedule::new(greedy.assignment().to_vec());
    let incumbent = final_loads(inst, &greedy).expect("greedy schedule is valid").makespan();

    let mut search = Search {
        inst,
        suffix_mass,
        suffix_peak,
        best: incumbent,
        best_assignment: greedy.assignment().to_vec(),
        current: Vec::with_capacity(n),
        loads: LoadVector::zeros(m),
        nodes: 0,
        budget,
    };
    search.descend(0, &EpsValue::zero())?;
    Ok(OptResult {
        makespan: search.best,
        schedule: Schedule::new(search.best_assignment),
        nodes_explored: search.nodes,
    })
}

struct Search<'a> {
    inst: &'a Instance,
    suffix_mass: Vec<EpsValue>,
    suffix_peak: Vec<EpsValue>,
    best: EpsValue,
    best_assignment: Vec<usize>,
    current: Vec<usize>,
    loads: LoadVector,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn descend(&mut self, job: usize, current_max: &EpsValue) -> Result<(), OptError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(OptError::SizeLimit { budget: self.budget });
        }
        if job == self.inst.jobs() {
            if *current_max < self.best {
                self.best = current_max.clone();
                self.best_assignment = self.current.clone();
            }
            return Ok(());
        }
        let avg = (&self.loads.total() + &self.suffix_mass[job]).div_int(self.inst.machines());
        let bound = current_max.clone().max(avg).max(self.suffix_peak[job].clone());
        if bound >= self.best {
            return Ok(());
        }
        for i in 0..self.inst.machines() {
            let p = self.inst.time(i, job);
            let load = &self.loads[i] + p;
            if load >= self.best {
                continue;
            }
            let next_max = if load > *current_max { load } else { current_max.clone() };
            self.loads.add_to(i, p);
            self.current.push(i);
            let r = self.descend(job + 1, &next_max);
            self.current.pop();
            self.loads.sub_from(i, p);
            r?;
        }
        Ok(())
    }
}

/// Plain enumeration of every assignment, recomputing loads from scratch for
/// each one. Kept as an oracle for [`opt`].
pub fn opt_exhaustive(inst: &Instance) -> Result<OptResult, OptError> {
    let n = inst.jobs();
    let m = inst.machines();
    let total = (m as u64)
        .checked_pow(n as u32)
        .filter(|&t| t <= EXHAUSTIVE_LIMIT)
        .ok_or(OptError::SizeLimit { budget: EXHAUSTIVE_LIMIT })?;

    let mut digits = vec![0usize; n];
    let mut best: Option<(EpsValue, Vec<usize>)> = None;
    for _ in 0..total {
        let mut loads = vec![EpsValue::zero(); m];
        for (j, &i) in digits.iter().enumerate() {
            loads[i] = &loads[i] + inst.time(i, j);
        }
        let span = loads.into_iter().max().unwrap_or_default();
        if best.as_ref().is_none_or(|(b, _)| span < *b) {
            best = Some((span, digits.clone()));
        }
        // odometer, last job varies fastest
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < m {
                break;
            }
            *d = 0;
        }
    }
    let (makespan, assignment) = best.expect("at least one assignment");
    Ok(OptResult { makespan, schedule: Schedule::new(assignment), nodes_explored: total })
}

/// `(Σ_j p_j / m, max_j p_j)`, both lower bounds on the optimal makespan.
pub fn opt_lower_bounds(inst: &Instance) -> (EpsValue, EpsValue) {
    let mins: Vec<EpsValue> = (0..inst.jobs()).map(|j| inst.min_time(j).0).collect();
    let avg = mins.iter().sum::<EpsValue>().div_int(inst.machines());
    let maxmin = mins.into_iter().max().unwrap_or_default();
    (avg, maxmin)
}
