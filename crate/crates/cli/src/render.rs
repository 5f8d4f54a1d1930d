use std::fmt::Write as _;

use anyhow::Result;

use seqsched::analysis::SpoaReport;
use seqsched::engines::RationalityModel;
use seqsched::format::write_instance;
use seqsched::model::final_loads;
use seqsched::numeric::{format_rational, EpsValue};
use seqsched::optimal::OptResult;
use seqsched::suites::SuiteSummary;
use seqsched::{Instance, Schedule};

fn label(inst: &Instance) -> &str {
    inst.name().unwrap_or("unnamed")
}

fn joined(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn split(v: &EpsValue) -> [String; 2] {
    [format_rational(v.c()), format_rational(v.e())]
}

pub fn play_human(inst: &Instance, model: RationalityModel, sigma: &Schedule) -> Result<String> {
    let mut s = String::new();
    writeln!(s, "instance: {} ({} machines, {} jobs)", label(inst), inst.machines(), inst.jobs())?;
    writeln!(s, "model: {model}")?;
    for rec in sigma.trace().unwrap_or_default() {
        let alts: Vec<String> =
            rec.alternatives.iter().map(|(i, c)| format!("m{}: {c}", i + 1)).collect();
        writeln!(
            s,
            "job {} -> machine {}  anticipated {}  [{}]",
            rec.job + 1,
            rec.chosen + 1,
            rec.anticipated_cost,
            alts.join(", ")
        )?;
    }
    let loads = final_loads(inst, sigma)?;
    writeln!(s, "sigma: {}", joined(&sigma.one_based()))?;
    writeln!(s, "loads: {loads}")?;
    writeln!(s, "makespan: {}", loads.makespan())?;
    Ok(s)
}

pub fn play_csv(inst: &Instance, sigma: &Schedule) -> Result<String> {
    let rows = sigma
        .trace()
        .unwrap_or_default()
        .iter()
        .map(|rec| {
            let [c, e] = split(&rec.anticipated_cost);
            vec![label(inst).to_string(), (rec.job + 1).to_string(), (rec.chosen + 1).to_string(), c, e]
        })
        .collect();
    csv_text(&["instance", "job", "machine", "anticipated_c", "anticipated_e"], rows)
}

pub fn opt_human(inst: &Instance, best: &OptResult) -> String {
    format!(
        "instance: {} ({} machines, {} jobs)\nopt: {}\nwitness: {}\nnodes: {}\n",
        label(inst),
        inst.machines(),
        inst.jobs(),
        best.makespan,
        joined(&best.schedule.one_based()),
        best.nodes_explored
    )
}

pub fn opt_csv(inst: &Instance, best: &OptResult) -> Result<String> {
    let [c, e] = split(&best.makespan);
    let row = vec![
        label(inst).to_string(),
        inst.machines().to_string(),
        inst.jobs().to_string(),
        c,
        e,
        joined(&best.schedule.one_based()),
        best.nodes_explored.to_string(),
    ];
    csv_text(&["instance", "m", "n", "opt_c", "opt_e", "witness", "nodes"], vec![row])
}

fn bound_text(r: &SpoaReport) -> String {
    r.bound.as_ref().map_or_else(|| "none".to_string(), format_rational)
}

fn ok_text(r: &SpoaReport) -> &'static str {
    if r.satisfied {
        "ok"
    } else {
        "VIOLATED"
    }
}

pub fn spoa_human(reports: &[SpoaReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let _ = writeln!(
            s,
            "{}  model={}  m={} n={}  eq={}  opt={}  ratio={}  bound={}  {}",
            r.instance,
            r.model,
            r.machines,
            r.jobs,
            r.equilibrium,
            r.opt,
            format_rational(&r.ratio),
            bound_text(r),
            ok_text(r)
        );
    }
    s
}

pub const SPOA_HEADER: [&str; 12] = [
    "instance", "model", "k", "m", "n", "eq_makespan_c", "eq_makespan_e", "opt_c", "opt_e", "ratio",
    "bound", "ok",
];

pub fn spoa_csv(reports: &[SpoaReport]) -> Result<String> {
    let rows = reports
        .iter()
        .map(|r| {
            let [eq_c, eq_e] = split(&r.equilibrium);
            let [opt_c, opt_e] = split(&r.opt);
            vec![
                r.instance.clone(),
                r.model.name().to_string(),
                r.model.k().map(|k| k.to_string()).unwrap_or_default(),
                r.machines.to_string(),
                r.jobs.to_string(),
                eq_c,
                eq_e,
                opt_c,
                opt_e,
                format_rational(&r.ratio),
                bound_text(r),
                ok_text(r).to_string(),
            ]
        })
        .collect();
    csv_text(&SPOA_HEADER, rows)
}

pub fn verify_human(summary: &SuiteSummary) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "suite: {}", summary.suite);
    let _ = writeln!(s, "seed: {}", summary.seed);
    for c in &summary.configs {
        let max = c.max_ratio.as_ref().map(|r| format!("  max ratio {}", format_rational(r)));
        let _ = writeln!(s, "  {}: {}/{} pass{}", c.label, c.passed, c.trials, max.unwrap_or_default());
    }
    let verdict = if summary.all_passed() { "PASS" } else { "FAIL" };
    let _ = writeln!(s, "result: {}/{} pass {verdict}", summary.passed(), summary.trials());
    if let Some(f) = summary.first_failure() {
        let _ = writeln!(s, "first counterexample (trial {}): {}", f.index, f.detail);
        s += &write_instance(&f.instance);
    }
    s
}

pub fn verify_csv(summary: &SuiteSummary) -> Result<String> {
    let rows = summary
        .configs
        .iter()
        .map(|c| {
            vec![
                summary.suite.to_string(),
                summary.seed.to_string(),
                c.label.clone(),
                c.trials.to_string(),
                c.passed.to_string(),
                c.max_ratio.as_ref().map(format_rational).unwrap_or_default(),
            ]
        })
        .collect();
    csv_text(&["suite", "seed", "config", "trials", "passed", "max_ratio"], rows)
}
