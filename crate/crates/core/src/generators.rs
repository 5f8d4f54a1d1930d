//! Instance families: the worked examples, the simple-minded lower-bound
//! family and seeded random ensembles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{Instance, ModelError};
use crate::numeric::{int, ratio, EpsValue, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// How random processing times are drawn. Random entries have no ε part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Distribution {
    /// `i/100` with `i` uniform in `1..=1000`.
    #[default]
    Hundredths,
    /// Integers uniform in `1..=max`; produces many ties.
    Integers { max: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// Five jobs on two machines whose subgame-perfect play is `(1, 2, 1, 2, 2)`.
    Table1,
    /// Two jobs on two machines where 1-lookahead play costs twice the optimum.
    Table4,
    /// Four jobs on four machines where simple-minded play costs four times the optimum.
    Table5,
    /// The `m`-machine generalization of [`Family::Table5`].
    SimpleMinded { machines: usize },
    Random { machines: usize, jobs: usize, distribution: Distribution, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub family: Family,
    /// Substitute this concrete ε; `None` keeps ε symbolic.
    pub eps: Option<Rational>,
    /// Stand-in for undefined (infinite) entries; `None` uses [`infinity_surrogate`].
    pub infinity: Option<EpsValue>,
}

impl GeneratorSpec {
    pub fn new(family: Family) -> Self {
        GeneratorSpec { family, eps: None, infinity: None }
    }

    pub fn random(machines: usize, jobs: usize, seed: u64) -> Self {
        GeneratorSpec::new(Family::Random {
            machines,
            jobs,
            distribution: Distribution::default(),
            seed,
        })
    }
}

/// Job-major matrix in which `None` marks an infinite processing time.
pub type PartialMatrix = Vec<Vec<Option<EpsValue>>>;

fn ev(c: i64, e: i64) -> Option<EpsValue> {
    Some(EpsValue::from_ints(c, e))
}

fn table1() -> PartialMatrix {
    // columns are (machine 1, machine 2)
    vec![
        vec![ev(3, -11), ev(0, 1)],
        vec![ev(0, 1), ev(2, -9)],
        vec![ev(0, 1), ev(2, -8)],
        vec![ev(1, -2), ev(1, -2)],
        vec![ev(2, -8), ev(1, -2)],
    ]
}

fn table4() -> PartialMatrix {
    vec![vec![ev(1, 1), ev(1, 0)], vec![ev(2, 0), ev(1, 1)]]
}

fn table5() -> PartialMatrix {
    vec![
        vec![ev(1, -1), ev(4, -5), None, None],
        vec![ev(1, -1), ev(1, 0), ev(3, -4), None],
        vec![ev(1, -1), None, ev(1, 0), ev(2, -3)],
        vec![ev(1, -1), None, None, ev(1, 0)],
    ]
}

/// Machine 1 costs `1 − ε` for everyone, job `j ≥ 2` costs 1 on machine `j`,
/// job `j ≤ m − 1` costs `(m + 1 − j) − (m + 2 − j)ε` on machine `j + 1`.
fn simple_minded_family(m: usize) -> PartialMatrix {
    let mut rows = vec![vec![None; m]; m];
    for (j, row) in rows.iter_mut().enumerate() {
        let job = j as i64 + 1;
        let mi = m as i64;
        row[0] = ev(1, -1);
        if job >= 2 {
            row[j] = ev(1, 0);
        }
        if job < mi {
            row[j + 1] = ev(mi + 1 - job, -(mi + 2 - job));
        }
    }
    rows
}

/// A finite stand-in for `∞`: `5 · m · (c_max + 1)` where `c_max` is the
/// largest constant part among the finite entries. This is strictly above
/// `m · (c_max + 1)`, so no machine holding it can ever look attractive.
pub fn infinity_surrogate(machines: usize, matrix: &PartialMatrix) -> EpsValue {
    let c_max = matrix
        .iter()
        .flatten()
        .flatten()
        .map(|t| t.c().clone())
        .max()
        .unwrap_or_else(|| int(0));
    EpsValue::constant((c_max + int(1)) * int(5 * machines as i64))
}

/// Replace `None` entries by `infinity`.
pub fn fill_infinite(matrix: PartialMatrix, infinity: &EpsValue) -> Vec<Vec<EpsValue>> {
    matrix
        .into_iter()
        .map(|row| row.into_iter().map(|t| t.unwrap_or_else(|| infinity.clone())).collect())
        .collect()
}

/// The matrix of a deterministic family, before `∞` entries are filled.
pub fn family_matrix(family: &Family) -> Result<(usize, PartialMatrix), GeneratorError> {
    match family {
        Family::Table1 => Ok((2, table1())),
        Family::Table4 => Ok((2, table4())),
        Family::Table5 => Ok((4, table5())),
        Family::SimpleMinded { machines } => {
            if *machines < 2 {
                return Err(GeneratorError::InvalidSpec(format!(
                    "simple-minded family needs at least 2 machines, got {machines}"
                )));
            }
            Ok((*machines, simple_minded_family(*machines)))
        }
        Family::Random { .. } => Err(GeneratorError::InvalidSpec(
            "random instances have no fixed matrix".to_string(),
        )),
    }
}

fn family_name(family: &Family) -> String {
    match family {
        Family::Table1 => "table1".into(),
        Family::Table4 => "table4".into(),
        Family::Table5 => "table5".into(),
        Family::SimpleMinded { machines } => format!("simple-minded-m{machines}"),
        Family::Random { machines, jobs, seed, .. } => format!("random-m{machines}-n{jobs}-s{seed}"),
    }
}

fn random_times(
    machines: usize,
    jobs: usize,
    distribution: Distribution,
    seed: u64,
) -> Result<Vec<Vec<EpsValue>>, GeneratorError> {
    if machines == 0 {
        return Err(GeneratorError::InvalidSpec("random instances need at least 1 machine".into()));
    }
    if let Distribution::Integers { max: 0 } = distribution {
        return Err(GeneratorError::InvalidSpec("integer distribution needs max ≥ 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..jobs)
        .map(|_| {
            (0..machines)
                .map(|_| {
                    let c = match distribution {
                        Distribution::Hundredths => ratio(rng.gen_range(1..=1000), 100),
                        Distribution::Integers { max } => int(rng.gen_range(1..=max as i64)),
                    };
                    EpsValue::constant(c)
                })
                .collect()
        })
        .collect();
    Ok(rows)
}

pub fn gen(spec: &GeneratorSpec) -> Result<Instance, GeneratorError> {
    let (machines, times) = match &spec.family {
        Family::Random { machines, jobs, distribution, seed } => {
            (*machines, random_times(*machines, *jobs, *distribution, *seed)?)
        }
        family => {
            let (m, matrix) = family_matrix(family)?;
            let infinity = match &spec.infinity {
                Some(v) => v.clone(),
                None => infinity_surrogate(m, &matrix),
            };
            (m, fill_infinite(matrix, &infinity))
        }
    };
    let inst = Instance::new(Some(family_name(&spec.family)), machines, times)?;
    match &spec.eps {
        Some(eps) => Ok(inst.concretize(eps)?),
        None => Ok(inst),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::{play, RationalityModel};
    use crate::model::same_assignment;

    #[test]
    fn table5_entry() {
        let inst = gen(&GeneratorSpec::new(Family::Table5)).unwrap();
        assert_eq!(inst.time(1, 0), &EpsValue::from_ints(4, -5));
        assert_eq!(inst.time(2, 1), &EpsValue::from_ints(3, -4));
        assert_eq!(inst.time(3, 2), &EpsValue::from_ints(2, -3));
    }

    #[test]
    fn family_four_is_table5() {
        let t5 = gen(&GeneratorSpec::new(Family::Table5)).unwrap();
        let fam = gen(&GeneratorSpec::new(Family::SimpleMinded { machines: 4 })).unwrap();
        assert_eq!(t5.rows(), fam.rows());
    }

    #[test]
    fn named_tables_entry_for_entry() {
        let t1 = gen(&GeneratorSpec::new(Family::Table1)).unwrap();
        let machine1 = [(3, -11), (0, 1), (0, 1), (1, -2), (2, -8)];
        let machine2 = [(0, 1), (2, -9), (2, -8), (1, -2), (1, -2)];
        for j in 0..5 {
            assert_eq!(t1.time(0, j), &EpsValue::from_ints(machine1[j].0, machine1[j].1));
            assert_eq!(t1.time(1, j), &EpsValue::from_ints(machine2[j].0, machine2[j].1));
        }
        let t4 = gen(&GeneratorSpec::new(Family::Table4)).unwrap();
        assert_eq!(t4.rows()[0], vec![EpsValue::from_ints(1, 1), EpsValue::from_ints(1, 0)]);
        assert_eq!(t4.rows()[1], vec![EpsValue::from_ints(2, 0), EpsValue::from_ints(1, 1)]);
    }

    #[test]
    fn surrogate_values() {
        let (m, matrix) = family_matrix(&Family::Table5).unwrap();
        let s = infinity_surrogate(m, &matrix);
        assert_eq!(s, EpsValue::from_ints(100, 0));
        assert!(s > EpsValue::from_ints(20, 0));
        let (m6, matrix6) = family_matrix(&Family::SimpleMinded { machines: 6 }).unwrap();
        let s6 = infinity_surrogate(m6, &matrix6);
        assert_eq!(s6, EpsValue::from_ints(5 * 6 * 7, 0));
        assert!(s6 > s);
    }

    #[test]
    fn surrogate_insensitivity_on_table5() {
        let base = gen(&GeneratorSpec::new(Family::Table5)).unwrap();
        let doubled = gen(&GeneratorSpec {
            infinity: Some(EpsValue::from_ints(200, 0)),
            ..GeneratorSpec::new(Family::Table5)
        })
        .unwrap();
        for model in [
            RationalityModel::Perfect,
            RationalityModel::Lookahead(1),
            RationalityModel::SimpleMinded,
            RationalityModel::Greedy,
        ] {
            let a = play(&base, model).unwrap();
            let b = play(&doubled, model).unwrap();
            assert!(same_assignment(&a, &b), "{model}");
        }
    }

    #[test]
    fn family_shape() {
        let inst = gen(&GeneratorSpec::new(Family::SimpleMinded { machines: 3 })).unwrap();
        assert_eq!((inst.machines(), inst.jobs()), (3, 3));
        assert_eq!(inst.time(1, 0), &EpsValue::from_ints(3, -4));
        assert_eq!(inst.time(2, 1), &EpsValue::from_ints(2, -3));
        assert_eq!(inst.time(2, 2), &EpsValue::from_ints(1, 0));
        assert!(gen(&GeneratorSpec::new(Family::SimpleMinded { machines: 1 })).is_err());
    }

    #[test]
    fn random_is_reproducible() {
        let a = gen(&GeneratorSpec::random(3, 7, 11)).unwrap();
        let b = gen(&GeneratorSpec::random(3, 7, 11)).unwrap();
        let c = gen(&GeneratorSpec::random(3, 7, 12)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.rows(), c.rows());
        for t in a.rows().iter().flatten() {
            assert!(t.e() == &int(0));
            assert!(*t.c() >= ratio(1, 100) && *t.c() <= int(10));
        }
        assert_eq!(gen(&GeneratorSpec::random(2, 0, 1)).unwrap().jobs(), 0);
        assert!(gen(&GeneratorSpec::random(0, 3, 1)).is_err());
    }

    #[test]
    fn concrete_eps() {
        let spec = GeneratorSpec { eps: Some(ratio(1, 1000)), ..GeneratorSpec::new(Family::Table1) };
        let inst = gen(&spec).unwrap();
        assert_eq!(inst.time(0, 0), &EpsValue::constant(ratio(2989, 1000)));
    }
}
