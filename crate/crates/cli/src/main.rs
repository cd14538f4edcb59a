use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use precedent_engine::checker::Denotations;
use precedent_engine::formula::{parse_with, Builder, ExpandConfig, Expander, IotaForm, NamedContext};
use precedent_engine::harness::{axiom_suite, SuiteConfig, SEED_ENV};
use precedent_engine::ingestion::{build_model_from_batch, read_cases};
use precedent_engine::model::{validate_model, JurisdictionFile, StateId, Tjcm, Val};
use precedent_engine::precedent::{DecisionSet, PrecedentEngine};

#[derive(Parser)]
#[command(name = "precedent", version, about = "Check formulas and resolve precedents on case-base models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum IotaArg {
    Repaired,
    AsPrinted,
}

#[derive(Subcommand)]
enum Command {
    /// Report every violated model condition.
    Validate {
        #[arg(long)]
        model: PathBuf,
    },
    /// Evaluate a formula at a state; exit 0 when it holds, 1 when it does not.
    Check {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        state: String,
        #[arg(long)]
        formula: String,
        /// Largest number of decided names for which per-incuriam formulas are expanded.
        #[arg(long, default_value_t = ExpandConfig::default().incuriam_cap)]
        cap: usize,
        #[arg(long, value_enum, default_value_t = IotaArg::Repaired)]
        iota: IotaArg,
    },
    /// Print the outcomes the binding precedents allow for a case.
    Classify {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, required_unless_present = "batch")]
        state: Option<String>,
        /// Classify every undecided state, one per line.
        #[arg(long)]
        batch: bool,
        /// Also evaluate the corresponding formulas and fail on any disagreement.
        #[arg(long)]
        cross_check: bool,
    },
    /// Show the status of every supporting precedent of a case.
    Explain {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        state: String,
    },
    /// Write the dependency graph of a decided case in Graphviz format.
    Graph {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        state: String,
        #[arg(long)]
        dot: PathBuf,
    },
    /// Build a model file from factor-annotated cases (JSON, or CSV by extension).
    Ingest {
        #[arg(long)]
        cases: PathBuf,
        #[arg(long)]
        jurisdiction: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check axiom instances on a model; the seed comes from PRECEDENT_ENGINE_SEED.
    Axioms {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = SuiteConfig::default().samples)]
        samples: usize,
    },
}

fn load(path: &Path) -> Result<Tjcm> {
    let m = Tjcm::load(path).with_context(|| format!("loading {}", path.display()))?;
    if let Err(violations) = validate_model(&m) {
        let lines: Vec<String> = violations.iter().map(|v| format!("  {v}")).collect();
        bail!("{} is not a valid model:\n{}", path.display(), lines.join("\n"));
    }
    Ok(m)
}

fn state(m: &Tjcm, name: &str) -> Result<StateId> {
    Ok(m.lookup(name)?)
}

/// The decision set as read off `BestBinding_n t(o)` for both outcomes.
fn formula_decision(m: &Tjcm, s: StateId) -> Result<(DecisionSet, [bool; 2])> {
    let ctx = NamedContext::from_model(m);
    let mut den = Denotations::new(m);
    let mut ex = Expander::new(&mut den, &ctx);
    let name = m.name(s).to_string();
    let mut roots = Vec::new();
    for o in Val::OUTCOMES {
        let t = ex.builder().dec(o);
        roots.push((o, ex.best_binding(&name, t)?, ex.cl(&name, o)?));
    }
    let mut set = DecisionSet::default();
    let mut forced = [false; 2];
    for (i, (o, best, cl)) in roots.into_iter().enumerate() {
        if den.holds(best, s) {
            set.outcomes.insert(o);
        }
        forced[i] = den.holds(cl, s);
    }
    Ok((set, forced))
}

fn classify_one(engine: &PrecedentEngine<'_>, s: StateId, cross_check: bool) -> Result<DecisionSet> {
    let m = engine.model();
    let semantic = engine.decide(s)?;
    if cross_check && !m.decision(s).is_decided() {
        let (via_formula, forced) = formula_decision(m, s)?;
        if via_formula != semantic {
            bail!("engines disagree on {}: semantic {semantic}, formula {via_formula}", m.name(s));
        }
        for (i, o) in Val::OUTCOMES.into_iter().enumerate() {
            if forced[i] != (semantic.forced() == Some(o)) {
                bail!("engines disagree on whether {} is forced to {o}", m.name(s));
            }
        }
    }
    Ok(semantic)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Validate { model } => {
            let m = Tjcm::load(&model).with_context(|| format!("loading {}", model.display()))?;
            match validate_model(&m) {
                Ok(()) => {
                    println!("ok");
                    Ok(ExitCode::SUCCESS)
                }
                Err(violations) => {
                    for v in violations {
                        println!("{v}");
                    }
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Check { model, state: name, formula, cap, iota } => {
            let m = load(&model)?;
            let s = state(&m, &name)?;
            let ctx = NamedContext::from_model(&m);
            let cfg = ExpandConfig {
                incuriam_cap: cap,
                iota_form: match iota {
                    IotaArg::Repaired => IotaForm::Repaired,
                    IotaArg::AsPrinted => IotaForm::AsPrinted,
                },
            };
            let mut den = Denotations::new(&m);
            let f =
                parse_with(&mut Expander::with_config(&mut den, &ctx, cfg), &formula).map_err(|e| anyhow!("{e}"))?;
            let holds = den.holds(f, s);
            for token in den.unknown_atoms() {
                eprintln!("warning: `{token}` is not in the model's vocabulary and evaluates to false");
            }
            println!("{holds}");
            Ok(if holds { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Classify { model, state: name, batch, cross_check } => {
            let m = load(&model)?;
            let engine = PrecedentEngine::new(&m);
            if batch {
                for s in m.undecided_states() {
                    println!("{}: {}", m.name(s), classify_one(&engine, s, cross_check)?);
                }
            } else {
                let s = state(&m, name.as_deref().expect("clap enforces --state without --batch"))?;
                println!("{}", classify_one(&engine, s, cross_check)?);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Explain { model, state: name } => {
            let m = load(&model)?;
            let s = state(&m, &name)?;
            let engine = PrecedentEngine::new(&m);
            print!("{}", engine.explain(s)?.render(&m));
            Ok(ExitCode::SUCCESS)
        }
        Command::Graph { model, state: name, dot } => {
            let m = load(&model)?;
            let s = state(&m, &name)?;
            let graph = PrecedentEngine::new(&m).s_graph(s)?;
            std::fs::write(&dot, graph.to_dot(&m)).with_context(|| format!("writing {}", dot.display()))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Ingest { cases, jurisdiction, out } => {
            let batch = read_cases(&cases)?;
            let jur = JurisdictionFile::read(&jurisdiction)?.into_jurisdiction();
            let m = build_model_from_batch(&batch, jur)?;
            std::fs::write(&out, m.to_json() + "\n").with_context(|| format!("writing {}", out.display()))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Axioms { model, samples } => {
            let m = Tjcm::load(&model).with_context(|| format!("loading {}", model.display()))?;
            let seed = match std::env::var(SEED_ENV) {
                Ok(v) => v.trim().parse::<u64>().with_context(|| format!("{SEED_ENV} must be an unsigned integer"))?,
                Err(_) => 0,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let report = axiom_suite(&m, &mut rng, SuiteConfig { samples, ..SuiteConfig::default() });
            print!("{report}");
            Ok(if report.all_ok() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
