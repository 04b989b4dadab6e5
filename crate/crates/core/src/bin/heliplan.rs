use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use heliplan::bench::{self, Algorithm, ComparisonRequest, Family, FamilySpec};
use heliplan::config::Config;
use heliplan::improve::Budget;
use heliplan::model::format::{instance_to_json, load_instance, load_schedule, schedule_to_json};
use heliplan::model::{validate_instance, Instance};
use heliplan::{construct, feasibility, milp, objective};
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "heliplan", version, about = "Plan firefighting helicopter operations")]
struct Cli {
    /// Settings file overriding the built-in defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an instance and optionally check a schedule against it.
    Check {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        schedule: Option<PathBuf>,
    },
    /// Build the greedy starting schedule.
    Construct {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run simulated annealing or iterated local search.
    Solve {
        #[arg(long)]
        algo: Algorithm,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Write the mixed-integer model in LP format.
    Export {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare the drivers over an instance family.
    Bench {
        /// S, M, B or T (tiny).
        #[arg(long, conflicts_with = "specs")]
        family: Option<String>,
        /// Comma-separated table rows such as S1,M3.
        #[arg(long, value_delimiter = ',')]
        specs: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "sa,ils")]
        algos: Vec<Algorithm>,
        #[arg(long, default_value_t = 10)]
        reps: usize,
        #[arg(long, default_value_t = 1)]
        first_seed: u64,
        #[command(flatten)]
        budget: BudgetArgs,
        /// CSV of externally obtained results: spec,method,mark,objective.
        #[arg(long)]
        external: Option<PathBuf>,
        /// Also write the full report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print a schedule as a text Gantt chart with its work windows.
    Render {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        schedule: PathBuf,
        /// Write the SVG variant here instead of printing text.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Generate an instance from a family table row.
    Generate {
        /// Table row such as S1, M5, B12 or T3; `b12-fixture` writes the
        /// instance behind the published B12 schedule.
        #[arg(long)]
        spec: String,
        /// Override the row's seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// With `b12-fixture`: also write its schedule.
        #[arg(long)]
        schedule_out: Option<PathBuf>,
    },
    /// Run the HTTP planning service.
    Serve {
        #[arg(long)]
        listen: Option<String>,
        #[arg(long)]
        data_dir: Option<PathBuf>,
    },
}

#[derive(Args)]
struct BudgetArgs {
    /// Candidate solutions to evaluate; runs are reproducible.
    #[arg(long, conflicts_with = "budget_seconds")]
    iterations: Option<u64>,
    #[arg(long)]
    budget_seconds: Option<f64>,
    /// Comma-separated checkpoint marks in the budget's unit.
    #[arg(long, value_delimiter = ',')]
    checkpoints: Vec<f64>,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        match (self.iterations, self.budget_seconds) {
            (Some(n), _) => Budget::Iterations(n),
            (None, Some(s)) => Budget::Seconds(s),
            (None, None) => Budget::Iterations(100_000),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read_instance(path: &Path) -> Result<Instance> {
    let inst = load_instance(path).with_context(|| format!("reading {}", path.display()))?;
    heliplan::model::ensure_valid(&inst)?;
    Ok(inst)
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut config = Config::load(cli.config.as_deref())?;
    match cli.command {
        Command::Check { instance, schedule } => {
            let inst = load_instance(&instance).with_context(|| format!("reading {}", instance.display()))?;
            let diags = validate_instance(&inst);
            for d in &diags {
                eprintln!("{d}");
            }
            if diags.iter().any(|d| d.is_error()) {
                return Ok(ExitCode::FAILURE);
            }
            let Some(path) = schedule else {
                println!("instance ok");
                return Ok(ExitCode::SUCCESS);
            };
            let sched = load_schedule(&inst, &path)?;
            let report = feasibility::check_schedule(&inst, &sched)?;
            print!("{}", report.to_json_lines());
            if report.is_empty() {
                print!("{}", objective::evaluate(&inst, &sched)?.to_block());
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("{} violated rows", report.len());
                Ok(ExitCode::FAILURE)
            }
        }
        Command::Construct { instance, seed, out } => {
            let inst = read_instance(&instance)?;
            let sol = construct::initial_solution_with(&inst, seed, &config)?;
            emit(out.as_deref(), &schedule_to_json(&inst, &sol.schedule))?;
            eprint!("{}", sol.value.to_block());
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve {
            algo,
            instance,
            seed,
            budget,
            out,
            trace,
        } => {
            let inst = read_instance(&instance)?;
            let r = bench::run_algorithm(&inst, algo, budget.budget(), &budget.checkpoints, seed, &config)?;
            let sched_json = schedule_to_json(&inst, &r.best.schedule);
            let trace_json = serde_json::to_string_pretty(&r.trace)? + "\n";
            match (&out, &trace) {
                (None, None) => {
                    let v = serde_json::json!({
                        "schedule": serde_json::from_str::<serde_json::Value>(&sched_json)?,
                        "trace": r.trace,
                    });
                    emit(None, &(serde_json::to_string_pretty(&v)? + "\n"))?;
                }
                _ => {
                    emit(out.as_deref(), &sched_json)?;
                    if let Some(p) = &trace {
                        emit(Some(p), &trace_json)?;
                    }
                }
            }
            eprint!("{}", r.best.value.to_block());
            Ok(ExitCode::SUCCESS)
        }
        Command::Export { instance, out } => {
            let inst = read_instance(&instance)?;
            let model = milp::build_milp(&inst)?;
            emit(Some(&out), &milp::emit_lp(&model))?;
            eprintln!("{} variables, {} rows, {} nonzeros", model.variables.len(), model.rows.len(), model.nonzeros());
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench {
            family,
            specs,
            algos,
            reps,
            first_seed,
            budget,
            external,
            json,
        } => {
            let specs: Vec<FamilySpec> = match family {
                Some(f) => {
                    let fam = match f.to_ascii_uppercase().as_str() {
                        "S" => Family::Small,
                        "M" => Family::Medium,
                        "B" => Family::Big,
                        "T" => Family::Tiny,
                        other => bail!("unknown family `{other}` (expected S, M, B or T)"),
                    };
                    FamilySpec::family_rows(fam)
                }
                None => specs
                    .iter()
                    .map(|s| FamilySpec::by_name(s).with_context(|| format!("unknown spec `{s}`")))
                    .collect::<Result<_>>()?,
            };
            if specs.is_empty() {
                bail!("give --family or --specs");
            }
            let request = ComparisonRequest {
                repetitions: reps,
                budget: budget.budget(),
                checkpoints: budget.checkpoints.clone(),
                first_seed,
            };
            let mut report = bench::run_comparison(&specs, &algos, &request, &config)?;
            if let Some(p) = external {
                let text = std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
                report.merge_external(bench::read_external_csv(&text)?, config.bench.rdp_epsilon);
            }
            if let Some(p) = json {
                emit(Some(&p), &(report.to_json() + "\n"))?;
            }
            print!("{}", report.to_table());
            Ok(ExitCode::SUCCESS)
        }
        Command::Render { instance, schedule, svg } => {
            let inst = read_instance(&instance)?;
            let sched = load_schedule(&inst, &schedule)?;
            match svg {
                Some(p) => emit(Some(&p), &bench::render_svg(&inst, &sched))?,
                None => print!("{}", bench::render_schedule(&inst, &sched)),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Generate {
            spec,
            seed,
            out,
            schedule_out,
        } => {
            if spec.eq_ignore_ascii_case("b12-fixture") {
                let f = bench::b12_fixture(config.calibration.b12);
                emit(out.as_deref(), &instance_to_json(&f.instance))?;
                if let Some(p) = schedule_out {
                    emit(Some(&p), &schedule_to_json(&f.instance, &f.schedule))?;
                }
                return Ok(ExitCode::SUCCESS);
            }
            if schedule_out.is_some() {
                bail!("--schedule-out only applies to b12-fixture");
            }
            let mut fs = FamilySpec::by_name(&spec).with_context(|| format!("unknown spec `{spec}`"))?;
            if let Some(s) = seed {
                fs = fs.with_seed(s);
            }
            let inst = bench::generate_with(&fs, &config.generator);
            emit(out.as_deref(), &instance_to_json(&inst))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Serve { listen, data_dir } => {
            tracing_subscriber::fmt()
                .with_env_filter(
                    tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
                )
                .init();
            if let Some(l) = listen {
                config.service.listen = l;
            }
            if let Some(d) = data_dir {
                config.service.data_dir = d;
            }
            let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
            rt.block_on(heliplan::service::serve(config))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
