#![allow(dead_code)]

use std::collections::HashMap;

use rand::Rng;
use sdlp::ff::{Field, Fq, Matrix, PrimeField};
use sdlp::groups::{Element, Endo, Group, Label, MatrixAuto, SdlpInstance, SolutionSet};

/// Solution set from an explicit walk `x -> g σ(x)`, recording every value
/// until the first repeat. `None` if the orbit is longer than `cap`.
pub fn walk_solutions(inst: &SdlpInstance, cap: usize) -> Option<(SolutionSet, usize, usize)> {
    let group = &inst.group;
    let mut seen: HashMap<Label, usize> = HashMap::new();
    let mut values = Vec::new();
    let mut x = group.identity();
    let (index, period) = loop {
        let l = group.label(&x);
        if let Some(&s) = seen.get(&l) {
            break (s, values.len() - s);
        }
        if values.len() >= cap {
            return None;
        }
        seen.insert(l.clone(), values.len());
        values.push(l);
        x = group.mul(&inst.g, &inst.sigma.apply(group, &x));
    };
    let target = group.label(&inst.h);
    let set = match values.iter().position(|l| *l == target) {
        None => SolutionSet::Empty,
        Some(t) if t < index => SolutionSet::singleton(t as u128),
        Some(t) => SolutionSet::progression(t as u128, period as u128),
    };
    Some((set, index, period))
}

/// `g σ(g) ⋯ σ^{t-1}(g)` multiplied out left to right.
pub fn naive_rho(inst: &SdlpInstance, t: u128) -> Element {
    let group = &inst.group;
    let mut acc = group.identity();
    let mut term = inst.g.clone();
    for _ in 0..t {
        acc = group.mul(&acc, &term);
        term = inst.sigma.apply(group, &term);
    }
    acc
}

pub fn random_matrix<F: Field<Elem = u64>, R: Rng>(f: &F, d: usize, rng: &mut R) -> Matrix<u64> {
    Matrix::new(d, d, (0..d * d).map(|_| f.random(rng)).collect())
}

pub fn random_invertible<F: Field<Elem = u64>, R: Rng>(f: &F, d: usize, rng: &mut R) -> Matrix<u64> {
    loop {
        let m = random_matrix(f, d, rng);
        if !f.is_zero(&m.det(f)) {
            return m;
        }
    }
}

pub fn random_upper_triangular<R: Rng>(f: &PrimeField, rng: &mut R) -> Matrix<u64> {
    let p = f.p();
    let mut m = Matrix::zeros(f, 3, 3);
    for i in 0..3 {
        m.set(i, i, rng.gen_range(1..p));
        for j in i + 1..3 {
            m.set(i, j, rng.gen_range(0..p));
        }
    }
    m
}

/// Instance with `h` either on the orbit (at a random `t`) or random.
pub fn with_target<R: Rng>(group: Group, sigma: Endo, g: Element, rng: &mut R) -> SdlpInstance {
    let probe = SdlpInstance::new(group.clone(), sigma.clone(), g.clone(), g.clone());
    let h = if rng.gen_bool(0.7) {
        naive_rho(&probe, rng.gen_range(0..200))
    } else {
        group.random(rng)
    };
    SdlpInstance::new(group, sigma, g, h)
}

pub fn cyclic_instance<R: Rng>(rng: &mut R) -> SdlpInstance {
    let n = rng.gen_range(2..300u64);
    let group = Group::cyclic(n).unwrap();
    let sigma = Endo::power(rng.gen_range(0..n), n);
    let g = Element(vec![rng.gen_range(0..n)]);
    with_target(group, sigma, g, rng)
}

pub fn vector_instance<R: Rng>(rng: &mut R) -> SdlpInstance {
    let p = [2u64, 3, 5, 7][rng.gen_range(0..4)];
    let max_d = if p <= 3 { 4 } else { 3 };
    let d = rng.gen_range(1..=max_d);
    let f = PrimeField::new(p).unwrap();
    let group = Group::vector(p, d).unwrap();
    let b = if rng.gen_bool(0.6) { random_invertible(&f, d, rng) } else { random_matrix(&f, d, rng) };
    let sigma = Endo::linear(f, b).unwrap();
    let g = group.random(rng);
    with_target(group, sigma, g, rng)
}

pub fn heisenberg_instance<R: Rng>(rng: &mut R) -> SdlpInstance {
    let p = [3u64, 5, 7, 11, 13][rng.gen_range(0..5)];
    let f = PrimeField::new(p).unwrap();
    let group = Group::heisenberg(p).unwrap();
    let sigma = if rng.gen_bool(0.8) {
        Endo::conjugation(Fq::new(p).unwrap(), random_upper_triangular(&f, rng)).unwrap()
    } else {
        // a non-injective endomorphism through the abelianization into the center
        let (l, m) = (rng.gen_range(0..p), rng.gen_range(0..p));
        Endo::table(&group, |x| Element(vec![0, 0, (l * x.0[0] + m * x.0[1]) % p])).unwrap()
    };
    let g = group.random(rng);
    with_target(group, sigma, g, rng)
}

pub fn matrix_instance<R: Rng>(rng: &mut R) -> SdlpInstance {
    let q = [2u64, 3, 4, 5, 7, 8, 9][rng.gen_range(0..7)];
    let d = rng.gen_range(1..=3);
    let fq = Fq::new(q).unwrap();
    let x = random_invertible(&fq, d, rng);
    let frob = if fq.degree() > 1 && rng.gen_bool(0.5) { 1 } else { 0 };
    let mut gens = vec![x.clone()];
    if frob == 1 {
        let mut y = x.clone();
        for _ in 1..fq.degree() {
            y = y.map(|a| fq.frobenius(*a));
            gens.push(y.clone());
        }
    } else if rng.gen_bool(0.5) {
        gens.push(random_invertible(&fq, d, rng));
    }
    let group = Group::matrix(fq.clone(), d, gens.clone()).unwrap();
    // conjugating element from the group itself
    let mut c = Matrix::identity(&fq, d);
    for _ in 0..rng.gen_range(0..4) {
        c = c.mul(&fq, &gens[rng.gen_range(0..gens.len())]);
    }
    let sigma = Endo::matrix_auto(MatrixAuto::new(fq, c, frob, false).unwrap());
    let g = group.random(rng);
    with_target(group, sigma, g, rng)
}
