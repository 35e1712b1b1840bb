//! Acceptance suite; prints one PASS/FAIL line per criterion.

mod common;

use std::time::{Duration, Instant};

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sdlp::arith::{ceil_log2, is_prime};
use sdlp::ff::{field_from_matrix, is_irreducible, Field, Fq, Matrix, Poly, PrimeField};
use sdlp::groups::{rho_pow, Element, Endo, Group, HeisenbergTop, MatrixAuto, SdlpInstance, SolutionSet};
use sdlp::protocol::{draw_secrets, heisenberg_instance as heisenberg_platform, spdke_attack, spdke_exchange, Platform};
use sdlp::solvers::{
    intertwiner_space, random_intertwiner, solve, solve_elementary_abelian, solve_matrix_inner, SolverKind,
};
use sdlp::{Config, Ctx, SdlpError};

type Check = fn() -> Result<String, String>;

fn ctx() -> Ctx {
    Ctx::new(Config::default())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: f64, what: &str) -> Result<(), String> {
    let s = start.elapsed().as_secs_f64();
    ensure(s < limit, || format!("{what} took {s:.2}s (limit {limit}s)"))
}

fn skippable(e: &SdlpError) -> bool {
    matches!(
        e.root(),
        SdlpError::NotApplicable(_)
            | SdlpError::NoInnerPower(_)
            | SdlpError::CompositionSeriesRequired
            | SdlpError::AutomorphismOrderTooLarge { .. }
    )
}

fn oracle_equivalence() -> Result<String, String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut instances, mut runs, mut endos) = (0, 0, 0);
    let mut i = 0usize;
    while instances < 500 {
        let inst = match i % 4 {
            0 => cyclic_instance(&mut rng),
            1 => vector_instance(&mut rng),
            2 => heisenberg_instance(&mut rng),
            _ => matrix_instance(&mut rng),
        };
        i += 1;
        let Some((expect, _, _)) = walk_solutions(&inst, 1 << 12) else { continue };
        instances += 1;
        if !inst.is_automorphism(&Config::default()).map_err(|e| e.to_string())? {
            endos += 1;
        }
        for kind in SolverKind::ALL {
            match solve(&inst, kind, None, &ctx()) {
                Ok(out) => {
                    ensure(out == expect, || {
                        format!("{kind} on {:?}: got {out}, walk gives {expect}", inst.group)
                    })?;
                    runs += 1;
                }
                Err(e) if skippable(&e) => {}
                Err(e) => return Err(format!("{kind} on {:?}: {e}", inst.group)),
            }
        }
    }
    within(start, 120.0, "suite")?;
    Ok(format!("{instances} instances ({endos} non-injective), {runs} solver runs exact, {:.1?}", start.elapsed()))
}

fn product_platform<R: Rng>(rng: &mut R) -> Platform {
    let a = vector_instance(rng);
    let b = cyclic_instance(rng);
    let group = Group::product(vec![a.group.clone(), b.group.clone()]).unwrap();
    let sigma = Endo::product(vec![a.sigma, b.sigma]);
    let g = Element([a.g.0, b.g.0].concat());
    Platform { group, sigma, g, chain: None }
}

fn exchange_correctness() -> Result<String, String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cfg = Config::default();
    for i in 0..1000 {
        let pf = match i % 5 {
            4 => product_platform(&mut rng),
            k => {
                let inst = match k {
                    0 => cyclic_instance(&mut rng),
                    1 => vector_instance(&mut rng),
                    2 => heisenberg_instance(&mut rng),
                    _ => matrix_instance(&mut rng),
                };
                Platform { group: inst.group, sigma: inst.sigma, g: inst.g, chain: None }
            }
        };
        let s = draw_secrets(&pf, &cfg, &mut rng);
        let t = spdke_exchange(&pf.group, &pf.sigma, &pf.g, s.x, s.y).map_err(|e| e.to_string())?;
        ensure(pf.group.label(&t.k_a) == pf.group.label(&t.k_b), || format!("keys differ on {:?}", pf.group))?;
    }
    within(start, 30.0, "1000 exchanges")?;
    Ok(format!("1000 exchanges over five backends agree, {:.1?}", start.elapsed()))
}

fn heisenberg_attack() -> Result<String, String> {
    let cfg = Config::default();
    let mut primes = (60000u64..1 << 16).rev().filter(|p| is_prime(*p));
    let mut worst = Duration::ZERO;
    let mut used = Vec::new();
    for round in 0..20u64 {
        let p = primes.next().unwrap();
        used.push(p);
        let pf = heisenberg_platform(p, round).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(round);
        let s = draw_secrets(&pf, &cfg, &mut rng);
        let t = spdke_exchange(&pf.group, &pf.sigma, &pf.g, s.x, s.y).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let out = spdke_attack(&t.without_secrets(), SolverKind::Master, pf.chain.as_ref(), &Ctx::new(cfg.clone()))
            .map_err(|e| format!("p = {p}: {e}"))?;
        ensure(out.matches(&t), || format!("p = {p}: recovered key differs"))?;
        within(start, 10.0, &format!("round {round}"))?;
        worst = worst.max(start.elapsed());
    }
    Ok(format!("20 rounds, p from {} to {}, slowest {worst:.2?}", used.last().unwrap(), used[0]))
}

fn random_prime<R: Rng>(rng: &mut R, lo: u64, hi: u64) -> u64 {
    loop {
        let p = rng.gen_range(lo..hi);
        if is_prime(p) {
            return p;
        }
    }
}

/// A conjugate of the companion matrix of a random irreducible polynomial.
fn irreducible_map<R: Rng>(f: &PrimeField, d: usize, rng: &mut R) -> Matrix<u64> {
    let poly = loop {
        let mut c = Poly::random_below(f, d, rng).coeffs().to_vec();
        c.resize(d, 0);
        c.push(1);
        let poly = Poly::new(f, c);
        if poly.coeff(0) != 0 && is_irreducible(f, &poly) {
            break poly;
        }
    };
    let mut comp = Matrix::zeros(f, d, d);
    for i in 1..d {
        comp.set(i, i - 1, 1);
    }
    for i in 0..d {
        comp.set(i, d - 1, f.neg(&poly.coeff(i)));
    }
    let p = random_invertible(f, d, rng);
    p.mul(f, &comp).mul(f, &p.inverse(f).unwrap())
}

fn elementary_large() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = Duration::ZERO;
    for i in 0..100 {
        let d = 1 + i % 6;
        // Φ_5(p) ~ p^4 is often a large prime; p < 2^10 keeps it below 2^41
        let hi = if d == 5 { 1 << 10 } else { 1 << 20 };
        let p = random_prime(&mut rng, 3, hi);
        let f = PrimeField::new(p).unwrap();
        let b = irreducible_map(&f, d, &mut rng);
        let group = Group::vector(p, d).unwrap();
        let sigma = Endo::linear(f, b).unwrap();
        let g = loop {
            let g = group.random(&mut rng);
            if !group.is_identity(&g) {
                break g;
            }
        };
        let t_star = rng.gen::<u64>() as u128;
        let h = rho_pow(&group, &sigma, &g, t_star);
        let inst = SdlpInstance::new(group, sigma, g, h);
        let start = Instant::now();
        let out = solve_elementary_abelian(&inst, &ctx()).map_err(|e| format!("p = {p}, d = {d}: {e}"))?;
        within(start, 5.0, &format!("p = {p}, d = {d}"))?;
        worst = worst.max(start.elapsed());
        ensure(out.contains(t_star), || format!("p = {p}, d = {d}: {out} misses t* = {t_star}"))?;
        ensure(inst.verify(&out), || "self-verification failed".into())?;
        let minimal = match out {
            SolutionSet::Progression { t0, period } => t0 < period,
            SolutionSet::Singleton { t0 } => (0..t0).all(|t| !inst.is_solution(t)),
            SolutionSet::Empty => false,
        };
        ensure(minimal, || format!("p = {p}, d = {d}: t0 of {out} is not minimal"))?;
    }
    Ok(format!("100 instances, d = 1..6, slowest {worst:.2?}"))
}

/// A matrix group closed under the chosen Frobenius power, and `σ` built from a
/// word in its generators.
fn matrix_platform<R: Rng>(q: u64, d: usize, rng: &mut R) -> (Group, Endo) {
    let fq = Fq::new(q).unwrap();
    let frob = if fq.degree() > 1 && rng.gen_bool(0.5) { 1 } else { 0 };
    let x = random_invertible(&fq, d, rng);
    let mut gens = vec![x.clone()];
    if frob == 1 {
        let mut y = x;
        for _ in 1..fq.degree() {
            y = y.map(|a| fq.frobenius(*a));
            gens.push(y.clone());
        }
    } else {
        gens.push(random_invertible(&fq, d, rng));
    }
    let group = Group::matrix(fq.clone(), d, gens.clone()).unwrap();
    let mut c = Matrix::identity(&fq, d);
    for _ in 0..rng.gen_range(1..4) {
        c = c.mul(&fq, &gens[rng.gen_range(0..gens.len())]);
    }
    (group, Endo::matrix_auto(MatrixAuto::new(fq, c, frob, false).unwrap()))
}

fn matrix_inner_suite() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let qs = [65521u64, 65536, 59049, 32768, 40009, 4096, 961, 343, 49, 8];
    let mut worst = Duration::ZERO;
    for i in 0..50 {
        let q = qs[i % qs.len()];
        let d = 1 + i % 3;
        let (group, sigma) = matrix_platform(q, d, &mut rng);
        let g = group.random(&mut rng);
        let t_star = rng.gen::<u32>() as u128;
        let inst = SdlpInstance::new(group.clone(), sigma.clone(), g.clone(), rho_pow(&group, &sigma, &g, t_star));
        let start = Instant::now();
        let out = solve_matrix_inner(&inst, None, &ctx()).map_err(|e| format!("q = {q}, d = {d}: {e}"))?;
        within(start, 10.0, &format!("q = {q}, d = {d}"))?;
        worst = worst.max(start.elapsed());
        ensure(out.contains(t_star) && inst.verify(&out), || format!("q = {q}, d = {d}: {out} misses {t_star}"))?;
    }
    let mut empties = 0;
    while empties < 20 {
        let q = [2u64, 3, 4, 5, 7, 8, 9][rng.gen_range(0..7)];
        let d = rng.gen_range(1..=3);
        let (group, sigma) = matrix_platform(q, d, &mut rng);
        let g = group.random(&mut rng);
        let h = group.random(&mut rng);
        let inst = SdlpInstance::new(group, sigma, g, h);
        let Some((walk, _, _)) = walk_solutions(&inst, 1 << 16) else { continue };
        if !walk.is_empty() {
            continue;
        }
        let start = Instant::now();
        let out = solve_matrix_inner(&inst, None, &ctx()).map_err(|e| format!("q = {q}, d = {d}: {e}"))?;
        within(start, 10.0, "no-solution instance")?;
        ensure(out == SolutionSet::Empty, || format!("q = {q}, d = {d}: expected empty, got {out}"))?;
        empties += 1;
    }
    Ok(format!("50 forward instances up to q = 65536, 20 confirmed empty, slowest {worst:.2?}"))
}

fn endomorphism_reduction() -> Result<String, String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut singles, mut progs) = (0, 0);
    for i in 0..100 {
        let inst = if i % 2 == 0 {
            let k = rng.gen_range(2..=12u32);
            let n = 1u64 << k;
            let m = 2 * rng.gen_range(0..n / 2);
            let group = Group::cyclic(n).unwrap();
            let g = group.random(&mut rng);
            with_target(group, Endo::power(m, n), g, &mut rng)
        } else {
            let p = [2u64, 3, 5, 7][rng.gen_range(0..4)];
            let d = rng.gen_range(2..=4);
            let f = PrimeField::new(p).unwrap();
            let b = loop {
                let b = random_matrix(&f, d, &mut rng);
                if f.is_zero(&b.det(&f)) {
                    break b;
                }
            };
            let group = Group::vector(p, d).unwrap();
            let g = group.random(&mut rng);
            with_target(group, Endo::linear(f, b).unwrap(), g, &mut rng)
        };
        let cfg = Config::default();
        ensure(!inst.is_automorphism(&cfg).unwrap(), || "instance is an automorphism".into())?;
        let (expect, index, period) = walk_solutions(&inst, 1 << 16).ok_or("walk cap")?;
        let out = solve(&inst, SolverKind::Auto, None, &ctx()).map_err(|e| e.to_string())?;
        ensure(out == expect, || format!("{:?}: got {out}, walk gives {expect}", inst.group))?;
        let log_g = ceil_log2(inst.group.ambient_order().unwrap()) as usize;
        let bound = log_g * period + period;
        ensure(index <= bound, || format!("index {index} exceeds {bound}"))?;
        match out {
            SolutionSet::Singleton { t0 } => {
                ensure((t0 as usize) < index, || format!("tail offset {t0} beyond index {index}"))?;
                singles += 1;
            }
            SolutionSet::Progression { t0, .. } => {
                ensure((t0 as usize) <= bound, || format!("offset {t0} exceeds {bound}"))?;
                progs += 1;
            }
            SolutionSet::Empty => {}
        }
    }
    within(start, 30.0, "suite")?;
    Ok(format!("100 instances match the walk ({singles} tail hits, {progs} cycle hits), {:.1?}", start.elapsed()))
}

fn rho_matches_naive(group: &Group, sigma: &Endo, g: &Element) -> Result<(), String> {
    let mut acc = group.identity();
    let mut term = g.clone();
    for t in 0..=1024u128 {
        let fast = rho_pow(group, sigma, g, t);
        ensure(group.eq(&fast, &acc), || format!("rho_pow differs at t = {t} on {group:?}"))?;
        acc = group.mul(&acc, &term);
        term = sigma.apply(group, &term);
    }
    Ok(())
}

fn exactness() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    // fast ρ^t(1) against the running product on every backend
    let mut backends = vec![
        cyclic_instance(&mut rng),
        vector_instance(&mut rng),
        heisenberg_instance(&mut rng),
        matrix_instance(&mut rng),
    ];
    let pf = product_platform(&mut rng);
    backends.push(SdlpInstance::new(pf.group, pf.sigma, pf.g.clone(), pf.g));
    let h = heisenberg_instance(&mut rng);
    let (img, induced) = sdlp::groups::induced_automorphism(
        &h.group,
        std::sync::Arc::new(HeisenbergTop::new(h.group.pc_primes().unwrap()[0]).unwrap()),
        &h.sigma,
        &[],
    )
    .map_err(|e| e.to_string())?;
    backends.push(SdlpInstance::new(img, induced, h.g.clone(), h.g));
    for inst in &backends {
        rho_matches_naive(&inst.group, &inst.sigma, &inst.g)?;
    }

    // B -> F_p[x]/(m) is a ring isomorphism onto the algebra of B
    let mut pairs = 0;
    for i in 0..100 {
        let p = [3u64, 5, 7, 101, 65521][i % 5];
        let d = 1 + i % 4;
        let f = PrimeField::new(p).unwrap();
        let iso = field_from_matrix(&f, &irreducible_map(&f, d, &mut rng)).map_err(|e| e.to_string())?;
        let k = iso.field();
        let (a, b) = (k.random(&mut rng), k.random(&mut rng));
        let (ma, mb) = (iso.field_to_matrix(&a), iso.field_to_matrix(&b));
        ensure(iso.field_to_matrix(&k.mul(&a, &b)) == ma.mul(&f, &mb), || "product not preserved".into())?;
        ensure(iso.field_to_matrix(&k.add(&a, &b)) == ma.add(&f, &mb), || "sum not preserved".into())?;
        ensure(iso.matrix_to_field(&ma) == Some(a), || "inverse map disagrees".into())?;
        pairs += 1;
    }

    // invertible draws from the intertwiner space
    let mut worst_gap = f64::INFINITY;
    for (q, d) in [(7u64, 3usize), (11, 2), (16, 3), (25, 2)] {
        let fq = Fq::new(q).unwrap();
        let xs: Vec<Matrix<u64>> = (0..2).map(|_| random_invertible(&fq, d, &mut rng)).collect();
        let c = random_invertible(&fq, d, &mut rng);
        let ci = c.inverse(&fq).unwrap();
        let ys: Vec<Matrix<u64>> = xs.iter().map(|x| ci.mul(&fq, x).mul(&fq, &c)).collect();
        let space = intertwiner_space(&fq, &xs, &ys);
        let hits = (0..1000)
            .filter(|_| {
                random_intertwiner(&fq, &space, &mut rng).is_some_and(|a| !fq.is_zero(&a.det(&fq)))
            })
            .count();
        let freq = hits as f64 / 1000.0;
        let bound = 1.0 - d as f64 / q as f64;
        ensure(freq >= bound - 0.02, || format!("q = {q}, d = {d}: frequency {freq} below {bound:.3}"))?;
        worst_gap = worst_gap.min(freq - bound);
    }
    Ok(format!(
        "rho_pow exact to t = 1024 on {} backends, {pairs} field pairs, draw frequency margin {worst_gap:+.3}",
        backends.len()
    ))
}

fn main() {
    let criteria: [(&str, Check); 7] = [
        ("oracle equivalence", oracle_equivalence),
        ("SPDKE correctness", exchange_correctness),
        ("Heisenberg attack near 2^16", heisenberg_attack),
        ("elementary-abelian solver", elementary_large),
        ("matrix-inner solver", matrix_inner_suite),
        ("endomorphism reduction", endomorphism_reduction),
        ("numerical exactness", exactness),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
