use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use serde_json::json;

use texp::bench::{self, Algo, AlgoInputs, BenchConfig, Model, Params};
use texp::generators::RegularityProfile;
use texp::io;
use texp::oracle::{exact_optimum, DEFAULT_LIMIT};
use texp::reductions::{contract_edges, multi_to_single, progress_per_phase_audit, transfer_schedule, RouteReplay};
use texp::{validate_schedule, Error, MultiAgentSchedule};

/// Exploration schedules for temporal graphs.
#[derive(Parser)]
#[command(name = "texp", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an instance of a family.
    Gen {
        family: String,
        /// Generator parameter as key=value (repeatable).
        #[arg(long = "param", short = 'p')]
        params: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Where to write the family's tree decomposition, if it has one.
        #[arg(long)]
        decomposition: Option<PathBuf>,
        /// Where to write the family's regularity profile, if it has one.
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Where to write the family's witness schedule, if it has one.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Run an explorer on an instance.
    Explore {
        #[arg(long)]
        algo: String,
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        decomposition: Option<PathBuf>,
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Regularity constant used when no profile is given.
        #[arg(long, default_value_t = 2.0)]
        c: f64,
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a schedule against an instance.
    Validate {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        schedule: PathBuf,
    },
    /// Exact optimum of a small instance.
    Oracle {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: usize,
    },
    /// Turn a multi-agent schedule into a single-agent one by replaying
    /// its routes in phases.
    Reduce {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        schedule: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Contract edges and optionally carry a schedule over.
    Contract {
        #[arg(short, long)]
        input: PathBuf,
        /// Edge ids to contract.
        #[arg(long, value_delimiter = ',')]
        edges: Vec<usize>,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(short, long)]
        schedule: Option<PathBuf>,
        #[arg(long)]
        schedule_out: Option<PathBuf>,
    },
    /// Run every (family, size, seed, algorithm) cell and write CSV.
    Bench {
        #[arg(long, value_delimiter = ',', required = true)]
        families: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        algos: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        seeds: Vec<u64>,
        #[arg(long = "param", short = 'p')]
        params: Vec<String>,
        /// Write wall_ms as 0 so repeated runs are byte-identical.
        #[arg(long)]
        no_timing: bool,
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        oracle_limit: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Fit a growth model to bench arrivals.
    Fit {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, default_value = "power")]
        model: String,
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        algo: Option<String>,
    },
    /// Print a schedule as a per-step position trace.
    Report {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        schedule: PathBuf,
    },
}

/// Failure with its exit code.
struct Exit(u8, String);

impl From<anyhow::Error> for Exit {
    fn from(e: anyhow::Error) -> Self {
        let code = match e.downcast_ref::<Error>() {
            Some(Error::LifetimeExhausted { .. } | Error::Infeasible) => 3,
            Some(Error::InvalidWalk(_) | Error::Assertion(_)) => 1,
            _ => 2,
        };
        Exit(code, format!("{e:#}"))
    }
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        anyhow::Error::new(e).into()
    }
}

type Run = Result<(), Exit>;

fn emit(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                out.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

fn read_profile(path: &Path) -> anyhow::Result<RegularityProfile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(serde_json::from_str(&text).map_err(Error::from)?)
}

fn load_instance(path: &Path) -> anyhow::Result<texp::Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(io::instance_from_json(&text)?)
}

fn load_schedule(path: &Path) -> anyhow::Result<MultiAgentSchedule> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(io::schedule_from_json(&text)?)
}

fn violations_text(v: &[texp::Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("\n")
}

fn run(cli: Cli) -> Run {
    match cli.cmd {
        Cmd::Gen {
            family,
            params,
            seed,
            output,
            decomposition,
            profile,
            witness,
        } => {
            let params = Params::parse(params.iter().map(String::as_str))?;
            let built = bench::build_family(&family, &params, seed)?;
            emit(output.as_deref(), &io::instance_to_json(&built.instance))?;
            let extras = [
                (decomposition, built.decomposition.as_ref().map(io::decomposition_to_json), "tree decomposition"),
                (profile, built.profile.as_ref().map(|p| serde_json::to_string(p).unwrap()), "regularity profile"),
                (witness, built.witness.as_ref().map(io::schedule_to_json), "witness"),
            ];
            for (path, text, what) in extras {
                if let Some(path) = path {
                    let text = text.ok_or_else(|| Exit(2, format!("family {family} has no {what}")))?;
                    emit(Some(&path), &text)?;
                }
            }
            Ok(())
        }
        Cmd::Explore {
            algo,
            input,
            decomposition,
            profile,
            c,
            limit,
            output,
        } => {
            let algo: Algo = algo.parse()?;
            let inst = load_instance(&input)?;
            let td = decomposition.map(|p| -> anyhow::Result<_> { Ok(io::read_decomposition(p)?) }).transpose()?;
            let prof = profile.map(|p| read_profile(&p)).transpose()?;
            let inputs = AlgoInputs {
                decomposition: td.as_ref(),
                profile: prof.as_ref(),
                regular_c: c,
                oracle_limit: limit,
            };
            let sched = bench::run_algo(algo, &inst, &inputs)?;
            emit(output.as_deref(), &io::schedule_to_json(&sched))?;
            let rep = validate_schedule(&inst, &sched).map_err(|v| Exit(1, violations_text(&v)))?;
            if !rep.covered {
                return Err(Exit(1, "schedule does not visit every vertex".into()));
            }
            eprintln!("{} agents={} arrival={}", algo.name(), sched.agents.len(), rep.arrival);
            Ok(())
        }
        Cmd::Validate { input, schedule } => {
            let inst = load_instance(&input)?;
            let sched = load_schedule(&schedule)?;
            let rep = validate_schedule(&inst, &sched).map_err(|v| Exit(1, violations_text(&v)))?;
            let visited = rep.first_visit.iter().flatten().count();
            emit(
                None,
                &json!({"valid": true, "covered": rep.covered, "visited": visited, "arrival": rep.arrival}).to_string(),
            )?;
            if !rep.covered {
                return Err(Exit(1, format!("{visited} of {} vertices visited", inst.n())));
            }
            Ok(())
        }
        Cmd::Oracle { input, limit } => {
            let inst = load_instance(&input)?;
            let opt = exact_optimum(&inst, limit)?;
            emit(None, &serde_json::to_string(&opt).unwrap())?;
            Ok(())
        }
        Cmd::Reduce { input, schedule, output } => {
            let inst = load_instance(&input)?;
            let sched = load_schedule(&schedule)?;
            validate_schedule(&inst, &sched).map_err(|v| Exit(1, violations_text(&v)))?;
            let replay = RouteReplay::new(&inst.graph, &sched);
            let targets: Vec<usize> = (0..inst.n()).collect();
            let run = multi_to_single(&inst.graph, inst.start, 0, &targets, &mut |s, p| replay.build(s, p))?;
            let single = MultiAgentSchedule::single(run.walk.clone());
            emit(output.as_deref(), &io::schedule_to_json(&single))?;
            let rep = validate_schedule(&inst, &single).map_err(|v| Exit(1, violations_text(&v)))?;
            let audit = progress_per_phase_audit(&run);
            let bound = run.bound(inst.n());
            eprintln!(
                "{}",
                json!({
                    "arrival": rep.arrival,
                    "t": run.t(),
                    "k": run.k(),
                    "phases": run.phases.len(),
                    "bound": bound,
                    "progress_audit": audit.is_ok(),
                })
            );
            if !rep.covered || rep.arrival > bound || audit.is_err() {
                return Err(Exit(1, "reduced schedule misses its guarantee".into()));
            }
            Ok(())
        }
        Cmd::Contract {
            input,
            edges,
            output,
            schedule,
            schedule_out,
        } => {
            let inst = load_instance(&input)?;
            let con = contract_edges(&inst, &edges)?;
            emit(Some(&output), &io::instance_to_json(&con.instance))?;
            if let Some(s) = schedule {
                let moved = transfer_schedule(&load_schedule(&s)?, &con.mapping);
                emit(schedule_out.as_deref(), &io::schedule_to_json(&moved))?;
                validate_schedule(&con.instance, &moved).map_err(|v| Exit(1, violations_text(&v)))?;
            }
            eprintln!("{}", json!({"mapping": con.mapping}));
            Ok(())
        }
        Cmd::Bench {
            families,
            sizes,
            algos,
            seeds,
            params,
            no_timing,
            oracle_limit,
            output,
        } => {
            for f in &families {
                if !bench::FAMILIES.contains(&f.as_str()) {
                    return Err(Exit(2, format!("unknown family {f:?}")));
                }
            }
            let cfg = BenchConfig {
                families,
                sizes,
                algos: algos.iter().map(|a| a.parse()).collect::<Result<_, Error>>()?,
                seeds,
                params: Params::parse(params.iter().map(String::as_str))?,
                timing: !no_timing,
                oracle_limit,
            };
            let rows = bench::run_bench(&cfg);
            let mut buf = Vec::new();
            bench::write_rows(&mut buf, &rows)?;
            emit(output.as_deref(), &String::from_utf8(buf).expect("csv is utf-8"))?;
            Ok(())
        }
        Cmd::Fit {
            input,
            model,
            family,
            algo,
        } => {
            let model: Model = model.parse()?;
            let file = fs::File::open(&input).with_context(|| format!("reading {}", input.display()))?;
            let rows = bench::read_rows(file)?;
            let pts = bench::growth_points(&rows, family.as_deref(), algo.as_deref());
            let fit = bench::fit_growth(&pts, model)?;
            emit(None, &serde_json::to_string(&fit).unwrap())?;
            Ok(())
        }
        Cmd::Report { input, schedule } => {
            let inst = load_instance(&input)?;
            let sched = load_schedule(&schedule)?;
            let text = bench::report(&inst, &sched).map_err(|v| Exit(1, violations_text(&v)))?;
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Exit(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
