//! Command-line front end. Every command prints one JSON document on stdout;
//! exit status is 0 on success, 1 on malformed input, 2 when the solver stack
//! declines or a cap is hit.

pub mod schema;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::config::{Config, Ctx, DlogOracle};
use crate::error::{Result, SdlpError};
use crate::groups::{EndoRep, SdlpInstance, SolutionSet};
use crate::oracles::orbit_index_period;
use crate::protocol::{draw_secrets, heisenberg_instance, spdke_attack, spdke_exchange, Platform};
use crate::solvers::{solve, SolverKind};

pub use schema::{int_value, ChainSpec, ElemSpec, GroupSpec, InstanceFile, Int, Loaded, SigmaSpec};

#[derive(Parser, Debug)]
#[command(name = "sdlp", version, about = "Semidirect discrete logarithms: solve, inspect orbits, run and attack key exchanges")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// RNG seed for randomized steps.
    #[arg(long, env = "SDLP_SEED", default_value_t = 0)]
    seed: u64,
    /// Discrete-log oracle.
    #[arg(long, default_value = "bsgs", value_parser = parse_oracle)]
    oracle: DlogOracle,
    /// Cap on explicit orbit walks.
    #[arg(long)]
    max_walk: Option<u64>,
    /// Cap on baby-step table entries.
    #[arg(long)]
    bsgs_mem: Option<u64>,
}

impl Common {
    fn config(&self) -> Config {
        let d = Config::default();
        Config {
            oracle: self.oracle,
            seed: self.seed,
            max_walk: self.max_walk.unwrap_or(d.max_walk),
            bsgs_mem: self.bsgs_mem.unwrap_or(d.bsgs_mem),
            ..d
        }
    }
}

fn parse_oracle(s: &str) -> std::result::Result<DlogOracle, String> {
    serde_json::from_value(Value::String(s.to_string())).map_err(|_| format!("unknown oracle {s} (bsgs, rho, brute)"))
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Solve the SDLP instance in a file.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value = "auto")]
        solver: SolverKind,
        /// Append the reduction trace.
        #[arg(long)]
        explain: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Tail length and period of the orbit of `1` under `x -> g σ(x)`.
    Orbit {
        #[arg(long)]
        instance: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run a key exchange and write the transcript.
    Exchange {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, requires = "y")]
        x: Option<u128>,
        #[arg(long, requires = "x")]
        y: Option<u128>,
        /// Include x, y and the shared key in the transcript.
        #[arg(long)]
        with_secrets: bool,
        /// Write the transcript here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Recover the shared key from a transcript.
    Attack {
        #[arg(long)]
        transcript: PathBuf,
        #[arg(long, default_value = "auto")]
        solver: SolverKind,
        #[arg(long)]
        explain: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Print a seeded Heisenberg platform as an instance file.
    Heisenberg {
        #[arg(long)]
        p: u64,
        #[arg(long, env = "SDLP_SEED", default_value_t = 0)]
        seed: u64,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let help = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = if help { write!(out, "{e}") } else { write!(err, "{e}") };
            return if help { 0 } else { 1 };
        }
    };
    match dispatch(cli.cmd) {
        Ok(doc) => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"));
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// 1 for malformed input, 2 for everything the solver stack declines.
pub fn exit_code(e: &SdlpError) -> i32 {
    match e.root() {
        SdlpError::Malformed(_) | SdlpError::NotPrime(_) | SdlpError::NotAField => 1,
        _ => 2,
    }
}

fn read_instance(path: &PathBuf) -> Result<InstanceFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SdlpError::malformed(format!("cannot read {}: {e}", path.display())))?;
    InstanceFile::parse(&text)
}

fn dispatch(cmd: Cmd) -> Result<Value> {
    match cmd {
        Cmd::Solve { instance, solver, explain, common } => {
            let loaded = read_instance(&instance)?.load()?;
            let ctx = Ctx::new(common.config());
            cmd_solve(&loaded, solver, explain, &ctx)
        }
        Cmd::Orbit { instance, common } => cmd_orbit(&read_instance(&instance)?.load()?, &common.config()),
        Cmd::Exchange { instance, x, y, with_secrets, out, common } => {
            let file = read_instance(&instance)?;
            let doc = cmd_exchange(&file, x.zip(y), with_secrets, &common.config())?;
            match out {
                Some(path) => {
                    std::fs::write(&path, doc.to_json() + "\n")
                        .map_err(|e| SdlpError::malformed(format!("cannot write {}: {e}", path.display())))?;
                    Ok(json!({ "written": path.display().to_string() }))
                }
                None => Ok(serde_json::to_value(&doc).expect("json")),
            }
        }
        Cmd::Attack { transcript, solver, explain, common } => {
            let loaded = read_instance(&transcript)?.load()?;
            cmd_attack(&loaded, solver, explain, &Ctx::new(common.config()))
        }
        Cmd::Heisenberg { p, seed } => Ok(serde_json::to_value(platform_file(&heisenberg_instance(p, seed)?, p)?).expect("json")),
    }
}

pub fn solution_value(s: &SolutionSet) -> Value {
    let mut m = Map::new();
    match *s {
        SolutionSet::Empty => {
            m.insert("kind".into(), "empty".into());
        }
        SolutionSet::Singleton { t0 } => {
            m.insert("kind".into(), "singleton".into());
            m.insert("t0".into(), int_value(t0));
        }
        SolutionSet::Progression { t0, period } => {
            m.insert("kind".into(), "progression".into());
            m.insert("t0".into(), int_value(t0));
            m.insert("period".into(), int_value(period));
        }
    }
    Value::Object(m)
}

/// Rewrites numbers of `2^63` or more as strings.
fn stringify_big(v: Value) -> Value {
    match v {
        Value::Number(n) if n.as_u64().is_some_and(|x| x >= 1 << 63) => Value::String(n.to_string()),
        Value::Array(a) => Value::Array(a.into_iter().map(stringify_big).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, stringify_big(v))).collect()),
        other => other,
    }
}

fn trace_value(ctx: &Ctx) -> Value {
    let steps = ctx.trace().steps;
    stringify_big(serde_json::to_value(&steps).unwrap_or(Value::Null))
}

fn pick_chain(loaded: &Loaded, solver: SolverKind) -> (SolverKind, Option<&crate::solvers::NormalChain>) {
    match (&loaded.chain, &loaded.series) {
        (Some(c), _) => (solver, Some(c)),
        (None, Some(s)) if matches!(solver, SolverKind::Solvable | SolverKind::Auto) => (SolverKind::Master, Some(s)),
        (None, Some(s)) => (solver, Some(s)),
        (None, None) => (solver, None),
    }
}

pub fn cmd_solve(loaded: &Loaded, solver: SolverKind, explain: bool, ctx: &Ctx) -> Result<Value> {
    let inst = loaded.instance()?;
    let (kind, chain) = pick_chain(loaded, solver);
    let set = solve(&inst, kind, chain, ctx)?;
    let mut doc = solution_value(&set);
    let obj = doc.as_object_mut().expect("object");
    obj.insert("verified".into(), inst.verify(&set).into());
    obj.insert("solver".into(), solver.name().into());
    if explain {
        obj.insert("trace".into(), trace_value(ctx));
    }
    Ok(doc)
}

pub fn cmd_orbit(loaded: &Loaded, cfg: &Config) -> Result<Value> {
    let inst = SdlpInstance::new(loaded.group.clone(), loaded.sigma.clone(), loaded.g.clone(), loaded.group.identity());
    let shape = orbit_index_period(&inst, cfg)?;
    Ok(json!({ "index": int_value(shape.index), "period": int_value(shape.period) }))
}

pub fn cmd_exchange(file: &InstanceFile, xy: Option<(u128, u128)>, with_secrets: bool, cfg: &Config) -> Result<InstanceFile> {
    let loaded = file.load()?;
    let (x, y) = match xy {
        Some(p) => p,
        None => {
            let pf = Platform { group: loaded.group.clone(), sigma: loaded.sigma.clone(), g: loaded.g.clone(), chain: None };
            let s = draw_secrets(&pf, cfg, &mut ChaCha8Rng::seed_from_u64(cfg.seed));
            (s.x, s.y)
        }
    };
    let t = spdke_exchange(&loaded.group, &loaded.sigma, &loaded.g, x, y)?;
    Ok(file.with_transcript(&t, with_secrets))
}

pub fn cmd_attack(loaded: &Loaded, solver: SolverKind, explain: bool, ctx: &Ctx) -> Result<Value> {
    let t = loaded
        .transcript
        .as_ref()
        .ok_or_else(|| SdlpError::malformed("file has no transcript block"))?;
    let (kind, chain) = pick_chain(loaded, solver);
    let outcome = spdke_attack(t, kind, chain, ctx)?;
    let mut doc = json!({
        "x": int_value(outcome.x),
        "solution": solution_value(&outcome.solution),
        "key": ElemSpec::from_element(&outcome.key),
        "key_label": loaded.group.label(&outcome.key).0,
    });
    let obj = doc.as_object_mut().expect("object");
    if t.secrets.is_some() {
        obj.insert("match".into(), outcome.matches(t).into());
    }
    if explain {
        obj.insert("trace".into(), trace_value(ctx));
    }
    Ok(doc)
}

/// An instance file (without `h`) describing a Heisenberg platform.
pub fn platform_file(pf: &Platform, p: u64) -> Result<InstanceFile> {
    let EndoRep::MatrixAuto(a) = pf.sigma.rep() else {
        return Err(SdlpError::internal("platform sigma is not a conjugation"));
    };
    let rows: Vec<Vec<Int>> = (0..3)
        .map(|i| (0..3).map(|j| Int(*a.conjugator().get(i, j) as u128)).collect())
        .collect();
    Ok(InstanceFile {
        group: GroupSpec { family: "heisenberg".into(), p: Some(Int(p as u128)), ..Default::default() },
        sigma: SigmaSpec { kind: "conjugation".into(), data: Some(serde_json::to_value(rows).expect("json")), order: None },
        g: ElemSpec::from_element(&pf.g),
        h: None,
        chain: Some(ChainSpec::Named("builtin".into())),
        series: None,
        transcript: None,
    })
}
