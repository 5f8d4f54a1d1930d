//! `seqsched`: play, solve and verify sequential scheduling games.
//!
//! Exit status: 0 when everything checked holds, 1 when a bound or property
//! is violated, 2 on usage or input errors.

mod render;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use seqsched::analysis::{spoa_with_opt, AnalysisError, SpoaReport};
use seqsched::engines::{play, RationalityModel};
use seqsched::format::{parse_instance, write_instance};
use seqsched::generators::{gen, Distribution, Family, GeneratorSpec};
use seqsched::numeric::parse_rational;
use seqsched::optimal::opt;
use seqsched::suites::{run_suite, Suite};
use seqsched::Instance;

#[derive(Parser, Debug)]
#[command(name = "seqsched", version, about = "Sequential scheduling games on unrelated machines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Play an instance under a rationality model and print the decisions.
    Play(PlayArgs),
    /// Compute the optimal makespan.
    Opt(OptArgs),
    /// Equilibrium-to-optimum ratio against the known bound.
    Spoa(SpoaArgs),
    /// Run a seeded property suite.
    Verify(VerifyArgs),
    /// Write a generated instance.
    Gen(GenArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModelName {
    Perfect,
    Lookahead,
    SimpleMinded,
    Greedy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyName {
    Table1,
    Table4,
    Table5,
    SimpleMinded,
    Random,
}

#[derive(Args, Debug)]
struct Source {
    /// Instance file (repeatable).
    #[arg(long = "instance", value_name = "PATH")]
    instances: Vec<PathBuf>,
    #[command(flatten)]
    generator: GeneratorArgs,
}

#[derive(Args, Debug)]
struct GeneratorArgs {
    /// Generate the instance instead of reading it.
    #[arg(long, value_enum)]
    family: Option<FamilyName>,
    /// Machine count for the simple-minded and random families.
    #[arg(long)]
    m: Option<usize>,
    /// Job count for the random family.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Random entries: `hundredths` (i/100, i in 1..=1000) or `int:MAX`.
    #[arg(long, default_value = "hundredths")]
    dist: String,
    /// Substitute a concrete ε such as `1/1000`.
    #[arg(long)]
    eps: Option<String>,
}

#[derive(Args, Debug)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: ModelName,
    /// Lookahead depth.
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
    #[arg(long, short = 'o', value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PlayArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct OptArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct SpoaArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    out: OutputArgs,
    /// Worker threads across instances.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    jobs: Option<usize>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(flatten)]
    generator: GeneratorArgs,
    #[arg(long, short = 'o', value_name = "PATH")]
    output: Option<PathBuf>,
}

/// A run that completed; the flag says whether everything checked held.
type Outcome = Result<bool>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Play(a) => cmd_play(a),
        Command::Opt(a) => cmd_opt(a),
        Command::Spoa(a) => cmd_spoa(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Gen(a) => cmd_gen(a),
    };
    if let Err(e) = &result {
        eprintln!("error: {e:#}");
    }
    ExitCode::from(exit_status(&result))
}

fn exit_status(outcome: &Outcome) -> u8 {
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(_) => 2,
    }
}

fn all_satisfied(reports: &[SpoaReport]) -> bool {
    reports.iter().all(|r| r.satisfied)
}

impl ModelArgs {
    fn model(&self) -> RationalityModel {
        match self.model {
            ModelName::Perfect => RationalityModel::Perfect,
            ModelName::Lookahead => RationalityModel::Lookahead(self.k.unwrap_or(1)),
            ModelName::SimpleMinded => RationalityModel::SimpleMinded,
            ModelName::Greedy => RationalityModel::Greedy,
        }
    }
}

fn parse_distribution(s: &str) -> Result<Distribution> {
    if s == "hundredths" {
        return Ok(Distribution::Hundredths);
    }
    if let Some(max) = s.strip_prefix("int:") {
        let max = max.parse().with_context(|| format!("--dist: bad integer bound in `{s}`"))?;
        return Ok(Distribution::Integers { max });
    }
    bail!("--dist: expected `hundredths` or `int:MAX`, got `{s}`")
}

impl GeneratorArgs {
    fn spec(&self) -> Result<Option<GeneratorSpec>> {
        let Some(family) = self.family else {
            return Ok(None);
        };
        let family = match family {
            FamilyName::Table1 => Family::Table1,
            FamilyName::Table4 => Family::Table4,
            FamilyName::Table5 => Family::Table5,
            FamilyName::SimpleMinded => Family::SimpleMinded {
                machines: self.m.ok_or_else(|| anyhow!("--m is required for the simple-minded family"))?,
            },
            FamilyName::Random => Family::Random {
                machines: self.m.ok_or_else(|| anyhow!("--m is required for the random family"))?,
                jobs: self.n.ok_or_else(|| anyhow!("--n is required for the random family"))?,
                distribution: parse_distribution(&self.dist)?,
                seed: self.seed.ok_or_else(|| anyhow!("--seed is required for the random family"))?,
            },
        };
        let eps = match &self.eps {
            Some(s) => Some(parse_rational(s).map_err(|e| anyhow!("--eps: {e}"))?),
            None => None,
        };
        Ok(Some(GeneratorSpec { family, eps, infinity: None }))
    }

    fn generate(&self) -> Result<Option<Instance>> {
        match self.spec()? {
            Some(spec) => {
                if let Family::Random { seed, .. } = spec.family {
                    eprintln!("seed: {seed}");
                }
                Ok(Some(gen(&spec).map_err(|e| anyhow!("--family: {e}"))?))
            }
            None => Ok(None),
        }
    }
}

impl Source {
    fn load(&self) -> Result<Vec<Instance>> {
        let mut out = Vec::new();
        for path in &self.instances {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let inst = parse_instance(&text).with_context(|| format!("{}", path.display()))?;
            out.push(match inst.name() {
                Some(_) => inst,
                None => inst.with_name(path.display().to_string()),
            });
        }
        if let Some(inst) = self.generator.generate()? {
            out.push(inst);
        }
        if out.is_empty() {
            bail!("no instance given: pass --instance PATH or --family NAME");
        }
        Ok(out)
    }
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn configure_threads(jobs: Option<usize>) -> Result<()> {
    if let Some(n) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .context("configuring --jobs")?;
    }
    Ok(())
}

fn cmd_play(args: PlayArgs) -> Outcome {
    let model = args.model.model();
    let mut text = String::new();
    for inst in args.source.load()? {
        let sigma = play(&inst, model)?;
        text += &match args.out.format {
            Format::Human => render::play_human(&inst, model, &sigma)?,
            Format::Csv => render::play_csv(&inst, &sigma)?,
        };
    }
    emit(&args.out.output, &text)?;
    Ok(true)
}

fn cmd_opt(args: OptArgs) -> Outcome {
    let mut text = String::new();
    for inst in args.source.load()? {
        let best = opt(&inst)?;
        text += &match args.out.format {
            Format::Human => render::opt_human(&inst, &best),
            Format::Csv => render::opt_csv(&inst, &best)?,
        };
    }
    emit(&args.out.output, &text)?;
    Ok(true)
}

fn cmd_spoa(args: SpoaArgs) -> Outcome {
    configure_threads(args.jobs)?;
    let model = args.model.model();
    let instances = args.source.load()?;
    use rayon::prelude::*;
    let reports = instances
        .par_iter()
        .map(|inst| {
            let best = opt(inst).map_err(AnalysisError::from)?;
            spoa_with_opt(inst, model, &best)
        })
        .collect::<Result<Vec<_>, AnalysisError>>()?;
    let text = match args.out.format {
        Format::Human => render::spoa_human(&reports),
        Format::Csv => render::spoa_csv(&reports)?,
    };
    emit(&args.out.output, &text)?;
    Ok(all_satisfied(&reports))
}

fn cmd_verify(args: VerifyArgs) -> Outcome {
    let suite: Suite = args.suite.parse().map_err(|e: String| anyhow!("--suite: {e}"))?;
    configure_threads(args.jobs)?;
    let summary = run_suite(suite, args.trials, args.seed);
    let text = match args.out.format {
        Format::Human => render::verify_human(&summary),
        Format::Csv => render::verify_csv(&summary)?,
    };
    emit(&args.out.output, &text)?;
    Ok(summary.all_passed())
}

fn cmd_gen(args: GenArgs) -> Outcome {
    if args.generator.family.is_none() {
        bail!("--family is required");
    }
    let inst = args.generator.generate()?.expect("family is set");
    emit(&args.output, &write_instance(&inst))?;
    Ok(true)
}
