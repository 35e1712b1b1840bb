use std::time::Instant;

use sdlp::groups::{rho_pow, Element, SdlpInstance, SolutionSet};
use sdlp::protocol::{draw_secrets, heisenberg_instance, spdke_attack, spdke_exchange};
use sdlp::solvers::{solve_master, SolverKind};
use sdlp::{Config, Ctx, SdlpError};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn key_is_rho_of_sum() {
    let pf = heisenberg_instance(7, 2).unwrap();
    let t = spdke_exchange(&pf.group, &pf.sigma, &pf.g, 4, 9).unwrap();
    assert!(pf.group.eq(&t.k_a, &t.k_b));
    // Oracle: naive product of σ^i(g) for i < 13
    let naive = sdlp::groups::rho_pow_naive(&pf.group, &pf.sigma, &pf.g, 13);
    assert!(pf.group.eq(&t.k_a, &naive));

    let out = spdke_attack(&t.without_secrets(), SolverKind::Auto, pf.chain.as_ref(), &Ctx::new(Config::default())).unwrap();
    assert!(out.matches(&t));
    assert!(out.solution.contains(4));
}

#[test]
fn brute_attack_finds_exact_exponent() {
    let pf = heisenberg_instance(3, 5).unwrap();
    let probe = SdlpInstance::new(pf.group.clone(), pf.sigma.clone(), pf.g.clone(), pf.group.identity());
    let shape = sdlp::oracles::orbit_index_period(&probe, &Config::default()).unwrap();
    let x = shape.period - 1;
    let t = spdke_exchange(&pf.group, &pf.sigma, &pf.g, x, 2).unwrap();
    let out = spdke_attack(&t, SolverKind::Brute, None, &Ctx::new(Config::default())).unwrap();
    assert_eq!(out.x, x);
    assert!(out.matches(&t));
}

#[test]
fn tampered_transcript_has_no_solution() {
    let pf = heisenberg_instance(5, 9).unwrap();
    let mut t = spdke_exchange(&pf.group, &pf.sigma, &pf.g, 3, 4).unwrap();
    let probe = SdlpInstance::new(pf.group.clone(), pf.sigma.clone(), pf.g.clone(), pf.group.identity());
    let shape = sdlp::oracles::orbit_index_period(&probe, &Config::default()).unwrap();
    let orbit: Vec<_> = (0..shape.period).map(|k| pf.group.label(&probe.rho(k))).collect();
    let outside = (0..125u64)
        .map(|k| Element(vec![k % 5, k / 5 % 5, k / 25]))
        .find(|e| !orbit.contains(&pf.group.label(e)))
        .unwrap();
    t.a = outside;
    let ctx = Ctx::new(Config::default());
    assert_eq!(spdke_attack(&t, SolverKind::Auto, pf.chain.as_ref(), &ctx).unwrap_err(), SdlpError::NoSolution);
}

#[test]
fn heisenberg_platform_shape() {
    let pf = heisenberg_instance(3, 0).unwrap();
    let all = pf.group.enumerate(100).unwrap();
    assert_eq!(all.len(), 27);
    assert!(all.iter().all(|x| pf.group.is_identity(&pf.group.pow(x, 3))));
    assert!(pf.g.0[0] != 0 || pf.g.0[1] != 0);

    // central base element: SDLP in the center reduces to a dlog in Z_p
    let pf = heisenberg_instance(7, 1).unwrap();
    let z = Element(vec![0, 0, 3]);
    let h = rho_pow(&pf.group, &pf.sigma, &z, 5);
    let inst = SdlpInstance::new(pf.group.clone(), pf.sigma.clone(), z, h);
    let out = solve_master(&inst, pf.chain.as_ref().unwrap(), &Ctx::new(Config::default())).unwrap();
    assert!(out.contains(5));
    assert!(matches!(out, SolutionSet::Progression { .. }));
}

#[test]
fn seeded_rounds_near_two_to_the_sixteen() {
    let pf = heisenberg_instance(65521, 4).unwrap();
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let s = draw_secrets(&pf, &cfg, &mut rng);
    let t = spdke_exchange(&pf.group, &pf.sigma, &pf.g, s.x, s.y).unwrap();
    let start = Instant::now();
    let out = spdke_attack(&t.without_secrets(), SolverKind::Master, pf.chain.as_ref(), &Ctx::new(cfg)).unwrap();
    assert!(out.matches(&t));
    assert!(start.elapsed().as_secs_f64() < 10.0, "attack took {:?}", start.elapsed());
}
