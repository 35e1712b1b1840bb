mod common;

use std::sync::Arc;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sdlp::ff::{Fq, Matrix, PrimeField};
use sdlp::groups::{Element, Endo, Group, HeisenbergTop, IdentityHom, SdlpInstance, SolutionSet};
use sdlp::oracles::orbit_index_period;
use sdlp::reductions::{recurse_through_quotient, reduce_to_automorphism_case, shift_to_power, FollowUp};
use sdlp::solvers::{solve, solve_brute, SolverKind};
use sdlp::{Config, Ctx};

fn ctx() -> Ctx {
    Ctx::new(Config::default())
}

#[test]
fn automorphism_reduction_on_cyclic8() {
    let c8 = Group::cyclic(8).unwrap();
    let sigma = Endo::power(2, 8);
    let inst = SdlpInstance::new(c8.clone(), sigma.clone(), Element(vec![1]), Element(vec![7]));
    let red = reduce_to_automorphism_case(&inst);
    assert!(red.sub.group.generators().iter().all(|x| c8.is_identity(x)));
    let sub = solve_brute(&red.sub, &ctx()).unwrap();
    assert_eq!(sub.period(), Some(1));
    // orbit 0, 1, 3, 7, 7, ...
    let out = red.recombine(&inst, &sub, &ctx());
    assert_eq!(out, walk_solutions(&inst, 100).unwrap().0);
    assert_eq!(out, SolutionSet::progression(3, 1));

    let inst = SdlpInstance::new(c8, sigma, Element(vec![1]), Element(vec![5]));
    let red = reduce_to_automorphism_case(&inst);
    let sub = solve_brute(&red.sub, &ctx()).unwrap();
    assert_eq!(red.recombine(&inst, &sub, &ctx()), SolutionSet::Empty);
}

#[test]
fn automorphism_reduction_keeps_automorphisms() {
    let f = PrimeField::new(5).unwrap();
    let v = Group::vector(5, 2).unwrap();
    let sigma = Endo::linear(f, Matrix::from_rows(vec![vec![0, 4], vec![1, 4]])).unwrap();
    let inst = SdlpInstance::new(v.clone(), sigma, Element(vec![1, 0]), Element(vec![1, 1]));
    let red = reduce_to_automorphism_case(&inst);
    let sub_all = red.sub.group.enumerate(100).unwrap();
    assert_eq!(sub_all.len(), 25);
    let sub = solve_brute(&red.sub, &ctx()).unwrap();
    assert_eq!(red.recombine(&inst, &sub, &ctx()), SolutionSet::progression(2, 3));
}

#[test]
fn power_shift_examples() {
    let f = PrimeField::new(5).unwrap();
    let v = Group::vector(5, 2).unwrap();
    let sigma = Endo::linear(f, Matrix::from_rows(vec![vec![0, 4], vec![1, 4]])).unwrap();
    let g = Element(vec![1, 0]);
    let probe = SdlpInstance::new(v.clone(), sigma.clone(), g.clone(), g.clone());
    let inst = SdlpInstance::new(v.clone(), sigma.clone(), g.clone(), naive_rho(&probe, 2));

    let one = shift_to_power(&inst, 1, &ctx()).unwrap();
    assert_eq!(one.subs.len(), 1);
    assert_eq!(one.subs[0].g, inst.g);
    assert_eq!(one.subs[0].h, inst.h);

    let three = shift_to_power(&inst, 3, &ctx()).unwrap();
    for s in &three.subs {
        assert!(s.sigma.pow(1).apply(&v, &Element(vec![2, 3])) == Element(vec![2, 3]));
    }
    let sols: Vec<_> = three.subs.iter().map(|s| solve_brute(s, &ctx()).unwrap()).collect();
    assert_eq!(three.recombine(&sols).unwrap(), walk_solutions(&inst, 100).unwrap().0);

    // t = 5 through k = 2: residue 1 with t' = 2
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f7 = PrimeField::new(7).unwrap();
    let h7 = Group::heisenberg(7).unwrap();
    let sigma = Endo::conjugation(Fq::new(7).unwrap(), random_upper_triangular(&f7, &mut rng)).unwrap();
    let g = Element(vec![1, 4, 2]);
    let probe = SdlpInstance::new(h7.clone(), sigma.clone(), g.clone(), g.clone());
    let inst = SdlpInstance::new(h7, sigma, g, naive_rho(&probe, 5));
    let two = shift_to_power(&inst, 2, &ctx()).unwrap();
    let s1 = solve_brute(&two.subs[1], &ctx()).unwrap();
    assert_eq!(s1.min(), Some(2));
    let sols: Vec<_> = two.subs.iter().map(|s| solve_brute(s, &ctx()).unwrap()).collect();
    let out = two.recombine(&sols).unwrap();
    assert!(out.contains(5));
    assert_eq!(out, walk_solutions(&inst, 1 << 14).unwrap().0);
}

#[test]
fn quotient_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let f7 = PrimeField::new(7).unwrap();
    let h7 = Group::heisenberg(7).unwrap();
    let sigma = Endo::conjugation(Fq::new(7).unwrap(), random_upper_triangular(&f7, &mut rng)).unwrap();
    let center = h7.subgroup(vec![Element(vec![0, 0, 1])]);

    // injective ψ: the follow-up lives in the trivial group
    let g = Element(vec![3, 1, 0]);
    let probe = SdlpInstance::new(h7.clone(), sigma.clone(), g.clone(), g.clone());
    let inst = SdlpInstance::new(h7.clone(), sigma.clone(), g.clone(), naive_rho(&probe, 4));
    let qr = recurse_through_quotient(&inst, Arc::new(IdentityHom::new(h7.clone())), h7.subgroup(vec![])).unwrap();
    let q = solve_brute(&qr.quotient, &ctx()).unwrap();
    match qr.follow_up(&inst, &q, &ctx()).unwrap() {
        FollowUp::Pending { sub, .. } => assert!(sub.group.is_identity(&sub.g) && sub.group.is_identity(&sub.h)),
        FollowUp::Resolved(s) => assert!(s.contains(4)),
    }

    // superdiagonal quotient, then the center
    for t in [0u128, 3, 11, 40] {
        let inst = SdlpInstance::new(h7.clone(), sigma.clone(), g.clone(), naive_rho(&probe, t));
        let qr = recurse_through_quotient(&inst, Arc::new(HeisenbergTop::new(7).unwrap()), center.clone()).unwrap();
        let q = solve(&qr.quotient, SolverKind::Auto, None, &ctx()).unwrap();
        let n0 = q.period().unwrap();
        let quotient_probe = SdlpInstance::new(qr.quotient.group.clone(), qr.quotient.sigma.clone(), g.clone(), g.clone());
        assert_eq!(orbit_index_period(&quotient_probe, &Config::default()).unwrap().period, n0);
        let out = qr
            .solve(&inst, &ctx(), |_| Ok(q), |sub| solve(sub, SolverKind::Auto, None, &ctx()))
            .unwrap();
        assert!(out.contains(t));
        assert_eq!(out, walk_solutions(&inst, 1 << 14).unwrap().0);
    }

    // h outside the quotient orbit: Empty before the kernel is touched
    let f5 = PrimeField::new(5).unwrap();
    let h5 = Group::heisenberg(5).unwrap();
    let sigma = Endo::conjugation(Fq::new(5).unwrap(), random_upper_triangular(&f5, &mut rng)).unwrap();
    let g = Element(vec![1, 0, 0]);
    let probe = SdlpInstance::new(h5.clone(), sigma.clone(), g.clone(), g.clone());
    let (_, idx, per) = walk_solutions(&probe, 1 << 12).unwrap();
    let seen: Vec<(u64, u64)> = (0..(idx + per) as u128).map(|t| {
        let x = naive_rho(&probe, t);
        (x.0[0], x.0[1])
    }).collect();
    let (a, b) = (0..25u64).map(|k| (k % 5, k / 5)).find(|ab| !seen.contains(ab)).unwrap();
    let inst = SdlpInstance::new(h5.clone(), sigma, g, Element(vec![a, b, 0]));
    let qr = recurse_through_quotient(&inst, Arc::new(HeisenbergTop::new(5).unwrap()), h5.subgroup(vec![Element(vec![0, 0, 1])])).unwrap();
    let out = qr
        .solve(&inst, &ctx(), |q| solve(q, SolverKind::Auto, None, &ctx()), |_| panic!("kernel visited"))
        .unwrap();
    assert_eq!(out, SolutionSet::Empty);
}

#[test]
fn forward_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let families: [fn(&mut ChaCha8Rng) -> SdlpInstance; 4] =
        [cyclic_instance, vector_instance, heisenberg_instance, matrix_instance];
    for make in families {
        let mut done = 0;
        while done < 200 {
            let base = make(&mut rng);
            let t = rng.gen_range(0..300u128);
            let inst = SdlpInstance::new(base.group.clone(), base.sigma.clone(), base.g.clone(), base.rho(t));
            if !inst.is_automorphism(&Config::default()).unwrap() {
                let red = reduce_to_automorphism_case(&inst);
                let sub = solve_brute(&red.sub, &ctx()).unwrap();
                assert!(red.recombine(&inst, &sub, &ctx()).contains(t));
                done += 1;
                continue;
            }
            let k = rng.gen_range(1..4u128);
            let shift = shift_to_power(&inst, k, &ctx()).unwrap();
            let sols: Vec<_> = shift.subs.iter().map(|s| solve_brute(s, &ctx()).unwrap()).collect();
            assert!(shift.recombine(&sols).unwrap().contains(t));
            done += 1;
        }
    }
}
