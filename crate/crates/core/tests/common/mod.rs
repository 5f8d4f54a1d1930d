#![allow(dead_code)]

use proptest::prelude::*;
use seqsched::{EpsValue, Instance};

/// Subgame-perfect play by tabulating every one of the `m^n` leaves and
/// folding the table level by level. Shares no code with the engines.
pub fn enumerated_spe(inst: &Instance) -> Vec<usize> {
    let n = inst.jobs();
    let m = inst.machines();
    let total = m.pow(n as u32);

    // leaf index = assignment read as a base-m number, job 0 most significant
    let mut outcomes: Vec<Vec<EpsValue>> = (0..total)
        .map(|leaf| {
            let mut loads = vec![EpsValue::zero(); m];
            let mut rest = leaf;
            for j in (0..n).rev() {
                let i = rest % m;
                rest /= m;
                loads[i] = &loads[i] + inst.time(i, j);
            }
            loads
        })
        .collect();

    let mut choices_by_level: Vec<Vec<usize>> = vec![Vec::new(); n];
    for level in (0..n).rev() {
        let prefixes = m.pow(level as u32);
        let mut folded = Vec::with_capacity(prefixes);
        let mut choices = Vec::with_capacity(prefixes);
        for prefix in 0..prefixes {
            let mut best = 0;
            for i in 1..m {
                if outcomes[prefix * m + i][i] < outcomes[prefix * m + best][best] {
                    best = i;
                }
            }
            choices.push(best);
            folded.push(outcomes[prefix * m + best].clone());
        }
        choices_by_level[level] = choices;
        outcomes = folded;
    }

    let mut prefix = 0;
    let mut path = Vec::with_capacity(n);
    for choices in &choices_by_level {
        let i = choices[prefix];
        path.push(i);
        prefix = prefix * m + i;
    }
    path
}

/// Small instances with ε components; constant parts are at least 1 so every
/// entry is positive.
pub fn eps_instance(
    machines: std::ops::RangeInclusive<usize>,
    jobs: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = Instance> {
    (machines, jobs).prop_flat_map(|(m, n)| {
        prop::collection::vec(prop::collection::vec((1i64..=6, -3i64..=3), m), n).prop_map(
            move |rows| {
                let times = rows
                    .into_iter()
                    .map(|r| r.into_iter().map(|(c, e)| EpsValue::from_ints(c, e)).collect())
                    .collect();
                Instance::new(None, m, times).unwrap()
            },
        )
    })
}
