use serde_json::{json, Value};

use sdlp::cli::{cmd_attack, cmd_exchange, cmd_solve, int_value, platform_file, InstanceFile};
use sdlp::groups::SdlpInstance;
use sdlp::oracles::orbit_index_period;
use sdlp::protocol::heisenberg_instance;
use sdlp::solvers::SolverKind;
use sdlp::{Config, Ctx, SdlpError};

fn err(e: SdlpError) -> String {
    e.to_string()
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json")
}

pub fn heisenberg(p: u64, seed: u64) -> Result<String, String> {
    let pf = heisenberg_instance(p, seed).map_err(err)?;
    Ok(platform_file(&pf, p).map_err(err)?.to_json())
}

pub fn orbit(instance: &str, limit: usize) -> Result<String, String> {
    let loaded = InstanceFile::parse(instance).and_then(|f| f.load()).map_err(err)?;
    let group = &loaded.group;
    let inst = SdlpInstance::new(group.clone(), loaded.sigma.clone(), loaded.g.clone(), group.identity());
    let shape = orbit_index_period(&inst, &Config::default()).map_err(err)?;
    let total = (shape.index + shape.period).min(limit as u128) as usize;
    let mut points = Vec::with_capacity(total);
    let mut x = group.identity();
    let mut hit = None;
    for t in 0..total {
        if loaded.h.as_ref().is_some_and(|h| group.eq(h, &x)) && hit.is_none() {
            hit = Some(t);
        }
        points.push(group.label(&x).0);
        x = group.mul(&loaded.g, &loaded.sigma.apply(group, &x));
    }
    Ok(pretty(&json!({
        "index": int_value(shape.index),
        "period": int_value(shape.period),
        "truncated": (total as u128) < shape.index + shape.period,
        "points": points,
        "h_at": hit,
    })))
}

fn parse_u128(s: &str, what: &str) -> Result<Option<u128>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(None);
    }
    s.parse().map(Some).map_err(|_| format!("{what} must be a positive integer"))
}

pub fn exchange(instance: &str, x: &str, y: &str, seed: u64) -> Result<String, String> {
    let file = InstanceFile::parse(instance).map_err(err)?;
    let xy = match (parse_u128(x, "x")?, parse_u128(y, "y")?) {
        (Some(x), Some(y)) => Some((x, y)),
        (None, None) => None,
        _ => return Err("give both x and y, or neither".into()),
    };
    let cfg = Config { seed, ..Config::default() };
    Ok(cmd_exchange(&file, xy, true, &cfg).map_err(err)?.to_json())
}

fn solver(name: &str) -> Result<SolverKind, String> {
    name.parse().map_err(err)
}

pub fn attack(transcript: &str, solver_name: &str) -> Result<String, String> {
    let loaded = InstanceFile::parse(transcript).and_then(|f| f.load()).map_err(err)?;
    let ctx = Ctx::new(Config::default());
    Ok(pretty(&cmd_attack(&loaded, solver(solver_name)?, true, &ctx).map_err(err)?))
}

pub fn solve(instance: &str, solver_name: &str) -> Result<String, String> {
    let loaded = InstanceFile::parse(instance).and_then(|f| f.load()).map_err(err)?;
    let ctx = Ctx::new(Config::default());
    Ok(pretty(&cmd_solve(&loaded, solver(solver_name)?, true, &ctx).map_err(err)?))
}
