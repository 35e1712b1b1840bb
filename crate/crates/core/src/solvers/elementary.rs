use std::sync::Arc;

use crate::config::Ctx;
use crate::error::{Result, SdlpError};
use crate::ff::{field_from_matrix, invariant_subspace, Field, Matrix, PrimeField, Subspace};
use crate::groups::{Backend, Element, Endo, EndoRep, Group, LinearHom, SdlpInstance, SolutionSet};
use crate::oracles::{dlog_with_order, unit_group_order, FieldDomain};
use crate::reductions::{QuotientReduction, StepKind};

/// `(F_p, B)` when the instance is `F_p^d` (or `Z_p`) with a linear `σ`.
pub fn linear_data(inst: &SdlpInstance) -> Option<(PrimeField, Matrix<u64>)> {
    let (field, d) = match inst.group.backend() {
        Backend::Vector { field, d } => (*field, *d),
        Backend::Cyclic { n, primes } if primes.len() == 1 => (PrimeField::new(*n).ok()?, 1),
        _ => return None,
    };
    let b = match inst.sigma.rep() {
        EndoRep::Identity => Matrix::identity(&field, d),
        EndoRep::Linear { matrix, .. } if matrix.rows() == d && matrix.cols() == d => {
            if let Backend::Vector { .. } = inst.group.backend() {
                matrix.clone()
            } else {
                return None;
            }
        }
        EndoRep::Power { factor, .. } => Matrix::identity(&field, d).scale(&field, &field.reduce(*factor)),
        _ => return None,
    };
    Some((field, b))
}

/// Solves `h = (B^{t-1} + … + B + I) g` on `F_p^d` by splitting along a flag of
/// invariant subspaces and taking logarithms in `F_{p^k}` on irreducible pieces.
pub fn solve_elementary_abelian(inst: &SdlpInstance, ctx: &Ctx) -> Result<SolutionSet> {
    let (f, b) = linear_data(inst)
        .ok_or_else(|| SdlpError::NotApplicable("elementary-abelian solver needs F_p^d with a linear map".into()))?;
    solve_linear(&f, &b, &inst.g.0, &inst.h.0, ctx)
}

fn solve_linear(f: &PrimeField, b: &Matrix<u64>, g: &[u64], h: &[u64], ctx: &Ctx) -> Result<SolutionSet> {
    let is_zero = |v: &[u64]| v.iter().all(|x| *x == 0);
    if is_zero(g) {
        return Ok(if is_zero(h) { SolutionSet::all() } else { SolutionSet::Empty });
    }
    // The orbit stays in the cyclic submodule generated by g.
    let n = g.len();
    let mut krylov = vec![g.to_vec()];
    loop {
        let next = b.mul_vec(f, krylov.last().unwrap());
        if Subspace::span(f, n, &[krylov.clone(), vec![next.clone()]].concat()).dim() == krylov.len() {
            break;
        }
        krylov.push(next);
    }
    let m = krylov.len();
    let basis = Matrix::from_cols(&krylov);
    let coords = |v: &[u64]| basis.solve(f, v).filter(|c| basis.mul_vec(f, c) == v);
    let Some(hc) = coords(h) else {
        ctx.record(StepKind::Solver { name: "elementary-abelian".into() }, "target outside the cyclic submodule of g");
        return Ok(SolutionSet::Empty);
    };
    let last = coords(&b.mul_vec(f, &krylov[m - 1])).ok_or_else(|| SdlpError::internal("Krylov closure"))?;
    let mut c = Matrix::zeros(f, m, m);
    for i in 0..m - 1 {
        c.set(i + 1, i, 1);
    }
    for (i, v) in last.iter().enumerate() {
        c.set(i, m - 1, *v);
    }
    if last[0] == 0 {
        return Err(SdlpError::NotAnAutomorphism);
    }
    let mut e0 = vec![0; m];
    e0[0] = 1;

    let whole = Subspace::whole(f, m);
    match invariant_subspace(f, &c, &whole, ctx.seed(m as u64)) {
        None => irreducible(f, &c, &hc, ctx),
        Some(w) => {
            let group = Group::vector(f.p(), m)?;
            let inst = SdlpInstance::new(group.clone(), Endo::linear(*f, c.clone())?, Element(e0), Element(hc));
            let (quotient, psi) = quotient_by(f, &c, &w, &inst)?;
            let kernel = group.subgroup(w.basis().iter().cloned().map(Element).collect());
            let qr = QuotientReduction::direct(quotient, psi, kernel);
            qr.solve(
                &inst,
                ctx,
                |q| solve_elementary_abelian(q, ctx),
                |k| solve_elementary_abelian(k, ctx),
            )
        }
    }
}

/// `F_p^m / W` in the coordinates not occupied by pivots of `W`.
fn quotient_by(
    f: &PrimeField,
    c: &Matrix<u64>,
    w: &Subspace<u64>,
    inst: &SdlpInstance,
) -> Result<(SdlpInstance, Arc<LinearHom>)> {
    let m = c.rows();
    let free: Vec<usize> = (0..m).filter(|i| !w.pivots().contains(i)).collect();
    let project = |v: &[u64]| -> Vec<u64> {
        let mut r = v.to_vec();
        for (piv, row) in w.pivots().iter().zip(w.basis()) {
            let s = r[*piv];
            if s != 0 {
                for (x, y) in r.iter_mut().zip(row) {
                    *x = f.sub(x, &f.mul(&s, y));
                }
            }
        }
        free.iter().map(|i| r[*i]).collect()
    };
    let unit = |i: usize| {
        let mut e = vec![0; m];
        e[i] = 1;
        e
    };
    let p_cols: Vec<Vec<u64>> = (0..m).map(|i| project(&unit(i))).collect();
    let bar_cols: Vec<Vec<u64>> = free.iter().map(|&i| project(&c.mul_vec(f, &unit(i)))).collect();
    let p_mat = Matrix::from_cols(&p_cols);
    let bar = Matrix::from_cols(&bar_cols);
    let psi = Arc::new(LinearHom::new(*f, p_mat)?);
    let q = SdlpInstance::new(
        Group::vector(f.p(), free.len())?,
        Endo::linear(*f, bar)?,
        Element(project(&inst.g.0)),
        Element(project(&inst.h.0)),
    );
    Ok((q, psi))
}

/// Base case: `c` is the companion matrix of an irreducible polynomial and
/// `g = e_0`, so `h = u(c) g` with `u` read off the coordinates of `h`.
fn irreducible(f: &PrimeField, c: &Matrix<u64>, hc: &[u64], ctx: &Ctx) -> Result<SolutionSet> {
    let m = c.rows();
    let out = if m == 1 && *c.get(0, 0) == 1 {
        SolutionSet::progression(hc[0] as u128, f.p() as u128)
    } else {
        let iso = field_from_matrix(f, c)?;
        let field = iso.field();
        let x = iso.generator();
        let u = iso.poly_to_field(&field.to_poly(hc));
        let target = field.add(&field.one(), &field.mul(&field.sub(&x, &field.one()), &u));
        let ord = unit_group_order(f.p() as u128, m)?.reduce_order(|n| field.is_one(&field.pow(&x, n)));
        let period = ord.value().ok_or_else(|| SdlpError::InstanceTooLarge("order overflow".into()))?;
        match dlog_with_order(&FieldDomain(field), &x, &target, &ord, ctx.cfg())? {
            Some(t) => SolutionSet::progression(t, period),
            None => SolutionSet::Empty,
        }
    };
    ctx.record(
        StepKind::Solver { name: "elementary-abelian".into() },
        format!("irreducible block of dimension {m} over F_{}: {out}", f.p()),
    );
    Ok(out)
}
