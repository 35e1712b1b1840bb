use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{Config, Ctx};
use crate::error::{Result, SdlpError};
use crate::ff::{Field, Fq, FqEmbedding, Matrix, Subspace};
use crate::groups::{Element, SdlpInstance, SolutionSet};
use crate::oracles::{dlog_with_order, matrix_order, Factorization, MatrixDomain};
use crate::reductions::{shift_to_power, StepKind};

const DRAWS: usize = 32;

/// A matrix `a` with `σ(x) = a^{-1} x a` on the generators, possibly over an
/// extension of the entry field.
#[derive(Clone, Debug)]
pub struct Intertwiner {
    pub field: Fq,
    pub a: Matrix<u64>,
    small: Fq,
    embedding: Option<FqEmbedding>,
}

impl Intertwiner {
    /// Maps a matrix over the original field into the working field.
    pub fn lift(&self, m: &Matrix<u64>) -> Matrix<u64> {
        match &self.embedding {
            None => m.clone(),
            Some(e) => m.map(|x| e.embed(&self.small, *x)),
        }
    }
}

/// Basis of `{y : y x_i = y_i y for all i}`.
pub fn intertwiner_space(fq: &Fq, xs: &[Matrix<u64>], ys: &[Matrix<u64>]) -> Vec<Matrix<u64>> {
    let d = match xs.first() {
        Some(x) => x.rows(),
        None => return Vec::new(),
    };
    let mut rows = Vec::new();
    for (x, y) in xs.iter().zip(ys) {
        for r in 0..d {
            for c in 0..d {
                let mut row = vec![0u64; d * d];
                for k in 0..d {
                    let i = r * d + k;
                    row[i] = fq.add(&row[i], x.get(k, c));
                    let j = k * d + c;
                    row[j] = fq.sub(&row[j], y.get(r, k));
                }
                rows.push(row);
            }
        }
    }
    Matrix::from_rows(rows)
        .nullspace(fq)
        .into_iter()
        .map(|v| Matrix::new(d, d, v))
        .collect()
}

/// A random element of the intertwiner space.
pub fn random_intertwiner<R: Rng + ?Sized>(fq: &Fq, space: &[Matrix<u64>], rng: &mut R) -> Option<Matrix<u64>> {
    let first = space.first()?;
    let mut y = Matrix::zeros(fq, first.rows(), first.cols());
    for b in space {
        y = y.add(fq, &b.scale(fq, &fq.random(rng)));
    }
    Some(y)
}

/// Finds `a` with `a^{-1} x_i a = y_i`, lifting to an extension with at least
/// `2d` elements first so random draws are invertible with good probability.
pub fn find_conjugator(fq: &Fq, d: usize, xs: &[Matrix<u64>], ys: &[Matrix<u64>], seed: u64) -> Result<Intertwiner> {
    let mut k = 1;
    while (fq.q() as u128).pow(k as u32) < 2 * d as u128 {
        k += 1;
    }
    let embedding = if k > 1 { Some(fq.extension(k)?) } else { None };
    let field = embedding.as_ref().map_or_else(|| fq.clone(), |e| e.big.clone());
    let mut out = Intertwiner { field: field.clone(), a: Matrix::identity(&field, d), small: fq.clone(), embedding };
    let xs: Vec<Matrix<u64>> = xs.iter().map(|m| out.lift(m)).collect();
    let ys: Vec<Matrix<u64>> = ys.iter().map(|m| out.lift(m)).collect();
    if xs == ys {
        return Ok(out);
    }
    let space = intertwiner_space(&field, &xs, &ys);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..DRAWS {
        let Some(y) = random_intertwiner(&field, &space, &mut rng) else { break };
        if let Some(a) = y.inverse(&field) {
            let ok = xs.iter().zip(&ys).all(|(x, y)| conj(&field, &a, x) == *y);
            if ok {
                out.a = a;
                return Ok(out);
            }
        }
    }
    Err(SdlpError::NoInvertibleIntertwiner)
}

fn conj(f: &Fq, a: &Matrix<u64>, x: &Matrix<u64>) -> Matrix<u64> {
    a.inverse(f).expect("invertible").mul(f, x).mul(f, a)
}

/// Decide `b = Φ^t a` for a linear map `Φ` on `F_q^n`.
#[derive(Clone, Debug)]
pub struct OrbitProblemInstance {
    pub field: Fq,
    pub phi: Matrix<u64>,
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    /// A multiple of the order of `Φ`, when one is known.
    pub order_multiple: Option<Factorization>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitSolution {
    /// Smallest solution.
    pub t: u128,
    /// Period of `t -> Φ^t a`.
    pub period: u128,
}

/// Restricts `Φ` to the cyclic space `W` spanned by `a, Φa, …` and solves the
/// matrix power problem `D = A^t` there by a discrete logarithm in `<A>`.
pub fn solve_orbit_problem(opi: &OrbitProblemInstance, cfg: &Config) -> Result<Option<OrbitSolution>> {
    let f = &opi.field;
    let n = opi.a.len();
    if opi.a.iter().all(|x| *x == 0) {
        return Ok(opi.b.iter().all(|x| *x == 0).then_some(OrbitSolution { t: 0, period: 1 }));
    }
    let mut krylov = vec![opi.a.clone()];
    loop {
        let next = opi.phi.mul_vec(f, krylov.last().unwrap());
        if Subspace::span(f, n, &[krylov.clone(), vec![next.clone()]].concat()).dim() == krylov.len() {
            break;
        }
        krylov.push(next);
    }
    let j = krylov.len();
    let basis = Matrix::from_cols(&krylov);
    let coords = |v: &[u64]| basis.solve(f, v).filter(|c| basis.mul_vec(f, c) == v);
    let Some(b0) = coords(&opi.b) else { return Ok(None) };
    let a_cols = krylov
        .iter()
        .map(|v| coords(&opi.phi.mul_vec(f, v)))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| SdlpError::internal("Krylov space not invariant"))?;
    let a_mat = Matrix::from_cols(&a_cols);
    let mut d_cols = vec![b0];
    for _ in 1..j {
        d_cols.push(a_mat.mul_vec(f, d_cols.last().unwrap()));
    }
    let target = Matrix::from_cols(&d_cols);
    let order = match &opi.order_multiple {
        Some(m) => {
            let v = m.value().ok_or_else(|| SdlpError::InstanceTooLarge("order overflow".into()))?;
            if !a_mat.pow(f, v).is_identity(f) {
                return Err(SdlpError::internal("order multiple does not annihilate the map"));
            }
            m.reduce_order(|e| a_mat.pow(f, e).is_identity(f))
        }
        None => matrix_order(f, &a_mat)?,
    };
    let period = order.value().unwrap();
    let dom = MatrixDomain { field: f, n: j };
    let Some(t) = dlog_with_order(&dom, &a_mat, &target, &order, cfg)? else { return Ok(None) };
    if opi.phi.pow(f, t).mul_vec(f, &opi.a) != opi.b {
        return Err(SdlpError::internal("orbit solution failed verification"));
    }
    Ok(Some(OrbitSolution { t, period }))
}

/// Solves an instance on a matrix group where some `σ^k` with `k | ord(σ)`,
/// `k <= max_k`, is conjugation by a matrix. `hint` is tried first.
pub fn solve_matrix_inner(inst: &SdlpInstance, hint: Option<u64>, ctx: &Ctx) -> Result<SolutionSet> {
    let group = &inst.group;
    let (fq, d) = group
        .matrix_field()
        .ok_or_else(|| SdlpError::NotApplicable("matrix-inner solver needs a matrix group".into()))?;
    let n = inst.sigma_order(ctx.cfg())?;
    let max_k = ctx.cfg().max_inner_power as u128;
    let mut candidates: Vec<u128> = hint.map(|k| k as u128).into_iter().collect();
    candidates.extend(n.divisors().into_iter().filter(|k| *k <= max_k && Some(*k) != hint.map(|h| h as u128)));
    let as_matrix = |x: &Element| group.as_matrix(x).expect("matrix view");
    let xs: Vec<Matrix<u64>> = group.generators().iter().map(as_matrix).collect();
    let mut found = None;
    for k in candidates {
        let sk = inst.sigma.pow(k);
        let ys: Vec<Matrix<u64>> = group.generators().iter().map(|x| as_matrix(&sk.apply(group, x))).collect();
        match find_conjugator(&fq, d, &xs, &ys, ctx.seed(k as u64)) {
            Ok(a) => {
                found = Some((k, a));
                break;
            }
            Err(SdlpError::NoInvertibleIntertwiner) => continue,
            Err(e) => return Err(e),
        }
    }
    let (k, tw) = found.ok_or(SdlpError::NoInnerPower(ctx.cfg().max_inner_power))?;
    ctx.record(
        StepKind::Solver { name: "matrix-inner".into() },
        format!("sigma^{k} is conjugation over F_{}", tw.field.q()),
    );
    let shift = shift_to_power(inst, k, ctx)?;
    let f = &tw.field;
    let a = &tw.a;
    let a_inv = a.inverse(f).expect("invertible");
    let gp = tw.lift(&as_matrix(&shift.subs[0].g));
    let c = gp.mul(f, &a_inv);
    // Φ(X) = c X a on row-major vectorized matrices.
    let mut phi = Matrix::zeros(f, d * d, d * d);
    for r in 0..d {
        for s in 0..d {
            for u in 0..d {
                for v in 0..d {
                    phi.set(r * d + s, u * d + v, f.mul(c.get(r, u), a.get(v, s)));
                }
            }
        }
    }
    let order_multiple = matrix_order(f, &c)?.lcm(&matrix_order(f, a)?);
    let identity = Matrix::identity(f, d).into_data();
    let mut sols = Vec::with_capacity(shift.subs.len());
    for sub in &shift.subs {
        let opi = OrbitProblemInstance {
            field: f.clone(),
            phi: phi.clone(),
            a: identity.clone(),
            b: tw.lift(&as_matrix(&sub.h)).into_data(),
            order_multiple: Some(order_multiple.clone()),
        };
        sols.push(match solve_orbit_problem(&opi, ctx.cfg())? {
            Some(s) => SolutionSet::progression(s.t, s.period),
            None => SolutionSet::Empty,
        });
    }
    shift.recombine(&sols)
}
