use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nstab::cycle::solve_cycle;
use nstab::dynamics::{default_max_steps, run_dynamics, Policy};
use nstab::general::{solve_general, DEFAULT_DFVS_BUDGET};
use nstab::generators::{gen_example1, gen_ktt, gen_prop1, gen_random, gen_two_triangles, RandomSeats};
use nstab::io::{assignment_map, instance_to_value, parse_assignment, parse_instance, serialize_assignment};
use nstab::oracle::{oracle_search, Mode, OracleOptions, DEFAULT_LIMIT};
use nstab::path::solve_path;
use nstab::{check, Assignment, DistanceBound, Error, Execution, Instance, SeatShape};

#[derive(Parser)]
#[command(name = "nstab", version, about = "Stable seat assignments under approval preferences")]
struct Cli {
    /// Indent the JSON written to standard output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Auto,
    Cycle,
    Path,
    General,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a stable assignment and report on it.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        method: Method,
        /// First agent on the path (path method only).
        #[arg(long)]
        seed: Option<String>,
        /// Comma-separated feedback vertex set to use instead of computing one.
        #[arg(long, value_delimiter = ',')]
        dfvs: Option<Vec<String>>,
        /// Largest instance for which an exact feedback set is computed.
        #[arg(long, default_value_t = DEFAULT_DFVS_BUDGET)]
        dfvs_budget: usize,
    },
    /// Report the first blocking pair within a seat distance, if any.
    Check {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        assignment: PathBuf,
        /// A positive integer or `unbounded`.
        #[arg(long, default_value = "1")]
        distance: DistanceBound,
    },
    /// Brute force over every assignment.
    Oracle {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value = "1")]
        distance: DistanceBound,
        #[arg(long, default_value = "exists")]
        mode: Mode,
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: usize,
        /// Fix agent 0 on seat 0 when the seat graph is a cycle.
        #[arg(long)]
        symmetry: bool,
        #[arg(long)]
        sequential: bool,
    },
    /// Let adjacent blocking pairs swap until nothing changes or a state repeats.
    Dynamics {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        assignment: PathBuf,
        /// `first` or `random:SEED`.
        #[arg(long, default_value = "first")]
        policy: Policy,
        /// Defaults to 64 n^2.
        #[arg(long)]
        max_steps: Option<usize>,
    },
    /// Emit a named or random instance.
    Gen {
        /// ktt:T | two-triangles | prop1 | example1 | random:N,P,SEED[,SHAPE]
        #[arg(long)]
        family: String,
        /// Also write the bundled start assignment here (prop1, example1).
        #[arg(long)]
        assignment_out: Option<PathBuf>,
    },
}

/// Input errors exit 1, failed preconditions and limits exit 2.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: if e.is_precondition() { 2 } else { 1 }, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    Ok(parse_instance(&read(path)?)?)
}

fn load_assignment(inst: &Instance, path: &Path) -> Result<Assignment, Failure> {
    Ok(parse_assignment(inst, &read(path)?)?)
}

fn agent(inst: &Instance, label: &str) -> Result<usize, Failure> {
    Ok(inst.agent_index(label)?)
}

fn solve(
    inst: &Instance,
    method: Method,
    seed: Option<&str>,
    dfvs: Option<&[String]>,
    budget: usize,
) -> Result<Value, Failure> {
    let method = match method {
        Method::Auto => match inst.seats().shape() {
            SeatShape::Cycle => Method::Cycle,
            SeatShape::Path => Method::Path,
            SeatShape::Custom => Method::General,
        },
        m => m,
    };
    let (name, asg, bound, extra) = match method {
        Method::Cycle => ("cycle", solve_cycle(inst)?, DistanceBound::Within(1), None),
        Method::Path => {
            let seed = seed.map(|s| agent(inst, s)).transpose()?;
            ("path", solve_path(inst, seed)?, DistanceBound::Within(2), None)
        }
        Method::General => {
            let supplied = dfvs
                .map(|labels| labels.iter().map(|l| agent(inst, l)).collect::<Result<Vec<_>, _>>())
                .transpose()?;
            let sol = solve_general(inst, supplied.as_deref(), budget)?;
            let bound = if sol.dfvs.set.is_empty() {
                DistanceBound::Unbounded
            } else {
                DistanceBound::Within(1)
            };
            let info = json!({
                "set": sol.dfvs.set.iter().map(|&x| inst.label(x)).collect::<Vec<_>>(),
                "exact": sol.dfvs.exact,
            });
            ("general", sol.assignment, bound, Some(info))
        }
        Method::Auto => unreachable!("resolved above"),
    };
    let report = check(inst, &asg, bound);
    if !report.stable() {
        return Err(Error::InvariantViolated(format!("{name} solver output is not stable")).into());
    }
    let mut out = json!({
        "method": name,
        "assignment": assignment_map(inst, &asg),
        "report": report.to_value(inst),
    });
    if let Some(info) = extra {
        out["dfvs"] = info;
    }
    Ok(out)
}

fn generate(family: &str) -> Result<(Instance, Option<Assignment>), Failure> {
    let bad = || input_error(format!("unknown family `{family}`"));
    let bundled = match family {
        "two-triangles" => return Ok((gen_two_triangles(), None)),
        "prop1" => Some(gen_prop1()),
        "example1" => Some(gen_example1()),
        _ => None,
    };
    if let Some((inst, start)) = bundled {
        return Ok((inst, Some(start)));
    }
    if let Some(t) = family.strip_prefix("ktt:") {
        let t = t.parse().map_err(|_| bad())?;
        return Ok((gen_ktt(t)?, None));
    }
    let spec = family.strip_prefix("random:").ok_or_else(bad)?;
    let parts: Vec<&str> = spec.split(',').collect();
    if !(3..=4).contains(&parts.len()) {
        return Err(bad());
    }
    let n = parts[0].parse().map_err(|_| bad())?;
    let p = parts[1].parse().map_err(|_| bad())?;
    let seed = parts[2].parse().map_err(|_| bad())?;
    let shape: RandomSeats = match parts.get(3) {
        Some(s) => s.parse()?,
        None => RandomSeats::Cycle,
    };
    Ok((gen_random(n, p, shape, seed)?, None))
}

fn run(command: Command) -> Result<Value, Failure> {
    match command {
        Command::Solve { instance, method, seed, dfvs, dfvs_budget } => {
            let inst = load_instance(&instance)?;
            solve(&inst, method, seed.as_deref(), dfvs.as_deref(), dfvs_budget)
        }
        Command::Check { instance, assignment, distance } => {
            let inst = load_instance(&instance)?;
            let asg = load_assignment(&inst, &assignment)?;
            Ok(check(&inst, &asg, distance).to_value(&inst))
        }
        Command::Oracle { instance, distance, mode, limit, symmetry, sequential } => {
            let inst = load_instance(&instance)?;
            let exec = if sequential { Execution::Sequential } else { Execution::default() };
            let opts = OracleOptions { limit, symmetry, exec };
            Ok(oracle_search(&inst, distance, mode, opts)?.to_value(&inst))
        }
        Command::Dynamics { instance, assignment, policy, max_steps } => {
            let inst = load_instance(&instance)?;
            let start = load_assignment(&inst, &assignment)?;
            let cap = max_steps.unwrap_or_else(|| default_max_steps(inst.n()));
            Ok(run_dynamics(&inst, &start, policy, cap)?.to_value(&inst))
        }
        Command::Gen { family, assignment_out } => {
            let (inst, start) = generate(&family)?;
            if let Some(path) = assignment_out {
                let start = start.ok_or_else(|| input_error(format!("`{family}` has no bundled assignment")))?;
                fs::write(&path, serialize_assignment(&inst, &start))
                    .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
            }
            Ok(instance_to_value(&inst))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are input errors; --help and --version succeed
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(value) => {
            let text = if cli.pretty {
                serde_json::to_string_pretty(&value)
            } else {
                serde_json::to_string(&value)
            };
            println!("{}", text.expect("JSON values serialize"));
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("nstab: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
