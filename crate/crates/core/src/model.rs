//! Game data: instances, schedules and load vectors.
//!
//! Machines and jobs are indexed from 0 internally. Everything rendered for
//! people (traces, CLI output) uses 1-based indices.

use std::fmt;
use std::ops::Index;

use thiserror::Error;

use crate::numeric::EpsValue;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("an instance needs at least one machine")]
    NoMachines,
    #[error("job {job} has {got} processing times, expected {expected}")]
    RowLength { job: usize, got: usize, expected: usize },
    #[error("processing time of job {job} on machine {machine} must be positive, got {value}")]
    NonPositiveTime { job: usize, machine: usize, value: String },
    #[error("{what} index {index} out of range (limit {limit})")]
    IndexOutOfRange { what: &'static str, index: usize, limit: usize },
    #[error("schedule has {got} entries, instance has {expected} jobs")]
    ScheduleLength { got: usize, expected: usize },
    #[error("load vector has {got} entries, instance has {expected} machines")]
    LoadLength { got: usize, expected: usize },
}

/// A sequential scheduling game `(N, M, p)`. Jobs move in index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    name: Option<String>,
    machines: usize,
    // times[j][i] is the processing time of job j on machine i
    times: Vec<Vec<EpsValue>>,
}

impl Instance {
    /// Validate and build an instance from a job-major matrix.
    pub fn new(
        name: Option<String>,
        machines: usize,
        times: Vec<Vec<EpsValue>>,
    ) -> Result<Self, ModelError> {
        if machines == 0 {
            return Err(ModelError::NoMachines);
        }
        for (j, row) in times.iter().enumerate() {
            if row.len() != machines {
                return Err(ModelError::RowLength { job: j + 1, got: row.len(), expected: machines });
            }
            for (i, t) in row.iter().enumerate() {
                if !t.is_positive() {
                    return Err(ModelError::NonPositiveTime {
                        job: j + 1,
                        machine: i + 1,
                        value: t.to_string(),
                    });
                }
            }
        }
        Ok(Instance { name, machines, times })
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn machines(&self) -> usize {
        self.machines
    }

    pub fn jobs(&self) -> usize {
        self.times.len()
    }

    /// Processing time of `job` on `machine`.
    pub fn time(&self, machine: usize, job: usize) -> &EpsValue {
        &self.times[job][machine]
    }

    /// All processing times of one job, indexed by machine.
    pub fn job_times(&self, job: usize) -> &[EpsValue] {
        &self.times[job]
    }

    pub fn rows(&self) -> &[Vec<EpsValue>] {
        &self.times
    }

    /// Minimum processing time of `job` and the lowest machine achieving it.
    pub fn min_time(&self, job: usize) -> (EpsValue, usize) {
        let (machine, t) = argmin(self.times[job].iter()).expect("at least one machine");
        (t.clone(), machine)
    }

    /// `Σ_j p_j` over the given jobs.
    pub fn min_time_sum(&self, jobs: std::ops::Range<usize>) -> EpsValue {
        jobs.map(|j| self.min_time(j).0).sum()
    }

    /// Replace the symbolic ε by a concrete rational value.
    pub fn concretize(&self, eps: &crate::numeric::Rational) -> Result<Self, ModelError> {
        let times = self
            .times
            .iter()
            .map(|row| row.iter().map(|t| EpsValue::constant(t.at(eps))).collect())
            .collect();
        Instance::new(self.name.clone(), self.machines, times)
    }
}

/// Index and value of the smallest element, first one on ties.
pub(crate) fn argmin<'a, I>(items: I) -> Option<(usize, &'a EpsValue)>
where
    I: Iterator<Item = &'a EpsValue>,
{
    let mut best: Option<(usize, &EpsValue)> = None;
    for (i, x) in items.enumerate() {
        match best {
            Some((_, b)) if x >= b => {}
            _ => best = Some((i, x)),
        }
    }
    best
}

/// Per-machine accumulated load.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadVector(Vec<EpsValue>);

impl LoadVector {
    pub fn zeros(machines: usize) -> Self {
        LoadVector(vec![EpsValue::zero(); machines])
    }

    pub fn new(loads: Vec<EpsValue>) -> Self {
        LoadVector(loads)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[EpsValue] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<EpsValue> {
        self.0
    }

    pub fn add_to(&mut self, machine: usize, amount: &EpsValue) {
        self.0[machine] += amount;
    }

    pub fn sub_from(&mut self, machine: usize, amount: &EpsValue) {
        self.0[machine] -= amount;
    }

    /// Maximum load, zero for an empty vector.
    pub fn makespan(&self) -> EpsValue {
        self.0.iter().max().cloned().unwrap_or_default()
    }

    pub fn total(&self) -> EpsValue {
        self.0.iter().sum()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, EpsValue> {
        self.0.iter()
    }
}

impl Index<usize> for LoadVector {
    type Output = EpsValue;
    fn index(&self, i: usize) -> &EpsValue {
        &self.0[i]
    }
}

impl fmt::Display for LoadVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Maximum entry of a load vector.
pub fn makespan(lv: &LoadVector) -> EpsValue {
    lv.makespan()
}

/// One player's computation, kept for auditing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionRecord {
    pub job: usize,
    pub chosen: usize,
    pub anticipated_cost: EpsValue,
    /// Anticipated cost of every machine the player considered, in machine order.
    pub alternatives: Vec<(usize, EpsValue)>,
}

/// The machine chosen by every job, plus an optional decision trace.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Schedule {
    assignment: Vec<usize>,
    trace: Option<Vec<DecisionRecord>>,
}

impl Schedule {
    pub fn new(assignment: Vec<usize>) -> Self {
        Schedule { assignment, trace: None }
    }

    pub fn with_trace(assignment: Vec<usize>, trace: Vec<DecisionRecord>) -> Self {
        Schedule { assignment, trace: Some(trace) }
    }

    /// Build from 1-based machine numbers as written in tables.
    pub fn from_one_based(machines: &[usize]) -> Self {
        Schedule::new(machines.iter().map(|&i| i - 1).collect())
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.assignment.iter().map(|&i| i + 1).collect()
    }

    pub fn trace(&self) -> Option<&[DecisionRecord]> {
        self.trace.as_deref()
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Machine chosen by `job`.
    pub fn machine_of(&self, job: usize) -> usize {
        self.assignment[job]
    }

    /// Checks the length and that every entry names a machine of `inst`.
    pub fn validate(&self, inst: &Instance) -> Result<(), ModelError> {
        if self.assignment.len() != inst.jobs() {
            return Err(ModelError::ScheduleLength {
                got: self.assignment.len(),
                expected: inst.jobs(),
            });
        }
        for &i in &self.assignment {
            if i >= inst.machines() {
                return Err(ModelError::IndexOutOfRange {
                    what: "machine",
                    index: i + 1,
                    limit: inst.machines(),
                });
            }
        }
        Ok(())
    }
}

/// Schedule equality ignores the trace.
pub fn same_assignment(a: &Schedule, b: &Schedule) -> bool {
    a.assignment == b.assignment
}

/// Loads after jobs `0..upto` have played `sigma`, on top of `initial`.
pub fn loads_after(
    inst: &Instance,
    sigma: &Schedule,
    upto: usize,
    initial: &LoadVector,
) -> Result<LoadVector, ModelError> {
    if upto > inst.jobs() || upto > sigma.len() {
        return Err(ModelError::IndexOutOfRange {
            what: "job",
            index: upto,
            limit: inst.jobs().min(sigma.len()),
        });
    }
    if initial.len() != inst.machines() {
        return Err(ModelError::LoadLength { got: initial.len(), expected: inst.machines() });
    }
    let mut loads = initial.clone();
    for j in 0..upto {
        let i = sigma.machine_of(j);
        if i >= inst.machines() {
            return Err(ModelError::IndexOutOfRange {
                what: "machine",
                index: i + 1,
                limit: inst.machines(),
            });
        }
        loads.add_to(i, inst.time(i, j));
    }
    Ok(loads)
}

/// Final loads of a complete schedule starting from empty machines.
pub fn final_loads(inst: &Instance, sigma: &Schedule) -> Result<LoadVector, ModelError> {
    sigma.validate(inst)?;
    loads_after(inst, sigma, inst.jobs(), &LoadVector::zeros(inst.machines()))
}
