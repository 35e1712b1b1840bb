use std::fmt;
use std::sync::Arc;

use crate::config::Ctx;
use crate::error::{Result, SdlpError};
use crate::ff::{Matrix, PrimeField};
use crate::groups::{Element, Endo, Group, Hom, Pcgs, SdlpInstance, SolutionSet};
use crate::reductions::{solve_trivial, QuotientReduction, StepKind};

use super::elementary::solve_elementary_abelian;

/// `x -> (φ(σ^i x))_{i ∈ rows}` where `φ` reads the leading exponent at a
/// fixed depth of the polycyclic series.
struct PsiHom {
    group: Group,
    pcgs: Pcgs,
    depth: usize,
    powers: Vec<Endo>,
    target: Group,
}

impl fmt::Debug for PsiHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "psi(depth {}, {} rows)", self.depth, self.powers.len())
    }
}

impl PsiHom {
    fn row(&self, sigma_i: &Endo, x: &Element) -> u64 {
        self.pcgs
            .exponent_at(&sigma_i.apply(&self.group, x), self.depth)
            .expect("subgroup is σ-invariant")
    }
}

impl Hom for PsiHom {
    fn target(&self) -> &Group {
        &self.target
    }

    fn apply(&self, x: &Element) -> Element {
        Element(self.powers.iter().map(|s| self.row(s, x)).collect())
    }

    fn describe(&self) -> String {
        format!("{self:?}")
    }
}

/// Peels off elementary-abelian quotients `H -> Z_p^r` built from one
/// coordinate functional and its `σ`-translates, recursing into the kernel.
pub fn solve_solvable(inst: &SdlpInstance, ctx: &Ctx) -> Result<SolutionSet> {
    let group = &inst.group;
    let pcgs = Pcgs::induced(group, group.generators())?;
    if pcgs.is_empty() {
        return Ok(solve_trivial(inst));
    }
    if !pcgs.contains(&inst.h)? {
        return Ok(SolutionSet::Empty);
    }
    let depth = pcgs.depths()[0];
    let p = pcgs.prime_at(depth);
    let f = PrimeField::new(p)?;
    let elems = pcgs.elements();

    // Rows φ∘σ^i evaluated on the pcgs, until their span stops growing.
    let mut powers = vec![Endo::identity()];
    let phi = |s: &Endo, x: &Element| pcgs.exponent_at(&s.apply(group, x), depth);
    let mut rows: Vec<Vec<u64>> = vec![elems.iter().map(|x| phi(&powers[0], x)).collect::<Result<_>>()?];
    let mut rank = 1;
    loop {
        let next = powers.last().unwrap().compose(&inst.sigma);
        let row: Vec<u64> = elems.iter().map(|x| phi(&next, x)).collect::<Result<_>>()?;
        rows.push(row);
        let r = Matrix::from_rows(rows.clone()).rank(&f);
        if r == rank {
            rows.pop();
            break;
        }
        rank = r;
        powers.push(next);
    }
    // Pcgs elements whose columns form an invertible minor.
    let mat = Matrix::from_rows(rows);
    let (_, basis_idx) = mat.rref(&f);
    let r = basis_idx.len();
    if r != powers.len() {
        return Err(SdlpError::internal("functional rows are dependent"));
    }
    let x_mat = Matrix::from_cols(&basis_idx.iter().map(|&j| mat.col(j)).collect::<Vec<_>>());
    let x_inv = x_mat.inverse(&f).ok_or_else(|| SdlpError::internal("basis minor is singular"))?;
    let target = Group::vector(p, r)?;
    let psi = Arc::new(PsiHom { group: group.clone(), pcgs: pcgs.clone(), depth, powers, target: target.clone() });
    let y_cols: Vec<Vec<u64>> = basis_idx.iter().map(|&j| psi.apply(&inst.sigma.apply(group, &elems[j])).0).collect();
    let bar = Matrix::from_cols(&y_cols).mul(&f, &x_inv);

    // Kernel: t · w(t)^{-1}, relations among the chosen basis, normal closure in H.
    let bs: Vec<Element> = basis_idx.iter().map(|&j| elems[j].clone()).collect();
    let mut kernel_gens = Vec::new();
    for t in &elems {
        let c = x_inv.mul_vec(&f, &psi.apply(t).0);
        let mut w = group.identity();
        for (bj, cj) in bs.iter().zip(&c) {
            w = group.mul(&w, &group.pow(bj, *cj as u128));
        }
        kernel_gens.push(group.mul(t, &group.inv(&w)));
    }
    for (i, bi) in bs.iter().enumerate() {
        kernel_gens.push(group.pow(bi, p as u128));
        for bj in &bs[i + 1..] {
            kernel_gens.push(group.commutator(bi, bj));
        }
    }
    let kernel_pcgs = Pcgs::normal_closure(group, &kernel_gens, &elems)?;
    if kernel_pcgs.len() + r != pcgs.len() {
        return Err(SdlpError::internal("kernel has the wrong size"));
    }
    let kernel = group.subgroup(kernel_pcgs.elements());

    ctx.record(
        StepKind::Solver { name: "solvable".into() },
        format!("{} -> Z_{p}^{r}, kernel of length {}", group.describe(), kernel_pcgs.len()),
    );
    let quotient = SdlpInstance::new(
        target,
        Endo::linear(f, bar)?,
        psi.apply(&inst.g),
        psi.apply(&inst.h),
    );
    let qr = QuotientReduction::direct(quotient, psi, kernel);
    qr.solve(inst, ctx, |q| solve_elementary_abelian(q, ctx), |k| solve_solvable(k, ctx))
}
