//! Small-n simulation of the optimal channel as a phase-estimation circuit
//! over the symmetric group (GQPE).
//!
//! The control register carries `S_n` either in the group basis `{|h⟩}` or
//! in the Fourier basis `{|σ, s, t⟩}`; the two are related by
//! `F[(σ,s,t), h] = √(g^σ/n!) A^σ_{st}(h)`, which is exactly unitary.
//! With `R(g)|h⟩ = |h g⁻¹⟩`, `F R(g) F†` acts as `A^σ(g)` on the `t` label.
//!
//! Pipeline on `|triv⟩ ⊗ ρ^{⊗n}`: `W = F·CP·F†`, dephase `σ` (the `Λ`
//! measurement), discard `t` and re-prepare it as `σ◊`, `W†`, keep `q_n`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::limits::{factorial, pow_dim, Limits};
use crate::linalg::{
    fidelity_ps, principal_eigenvector, tensor_power, validate_density, CMat, DenseOperator,
    RegisterShape,
};
use crate::qpa_channel::QpaResult;
use crate::symmetric_group::{sn_data, tensor_action};
use crate::tableaux::{column_ordered, StandardTableau, YoungDiagram};
use crate::C64;

/// Largest `n` for which the GQFT is built.
pub const MAX_GQFT_N: usize = 5;

/// One irrep block of the Fourier basis.
#[derive(Debug, Clone)]
pub struct FourierBlock {
    pub shape: YoungDiagram,
    pub tableaux: Vec<StandardTableau>,
    pub offset: usize,
}

impl FourierBlock {
    pub fn dim(&self) -> usize {
        self.tableaux.len()
    }
}

/// Ragged direct-sum layout `⊕_σ (s ⊗ t)` of the control space.
#[derive(Debug, Clone)]
pub struct FourierLayout {
    pub n: usize,
    pub blocks: Vec<FourierBlock>,
}

impl FourierLayout {
    pub fn new(n: usize) -> Result<Self> {
        let data = sn_data(n)?;
        let mut offset = 0;
        let blocks = data
            .irreps
            .iter()
            .map(|irr| {
                let b = FourierBlock {
                    shape: irr.shape.clone(),
                    tableaux: irr.tableaux.clone(),
                    offset,
                };
                offset += irr.dim() * irr.dim();
                b
            })
            .collect();
        Ok(FourierLayout { n, blocks })
    }

    /// `Σ (g^σ)² = n!`.
    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.dim() * b.dim()).sum()
    }

    /// Flat index of `|σ, s, t⟩` with `s, t` block-local.
    pub fn index(&self, block: usize, s: usize, t: usize) -> usize {
        let b = &self.blocks[block];
        b.offset + s * b.dim() + t
    }

    /// Block number of every flat index.
    pub fn block_of(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.total_dim());
        for (k, b) in self.blocks.iter().enumerate() {
            out.extend(std::iter::repeat_n(k, b.dim() * b.dim()));
        }
        out
    }

    /// Index of the trivial-irrep state `|[n], one-row, one-row⟩`.
    pub fn trivial_index(&self) -> usize {
        0
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_GQFT_N {
        return invalid(format!(
            "GQFT is built for 1 ≤ n ≤ {} (got {})",
            MAX_GQFT_N, n
        ));
    }
    Ok(())
}

fn gqft_matrix(n: usize) -> Result<CMat> {
    check_n(n)?;
    let data = sn_data(n)?;
    let layout = FourierLayout::new(n)?;
    let nf = data.order();
    let mut f = CMat::zeros(nf, nf);
    for (k, irr) in data.irreps.iter().enumerate() {
        let g = irr.dim();
        let w = (g as f64 / nf as f64).sqrt();
        for (h, a) in irr.mats.iter().enumerate() {
            for s in 0..g {
                for t in 0..g {
                    f[(layout.index(k, s, t), h)] = C64::new(w * a[(s, t)], 0.0);
                }
            }
        }
    }
    Ok(f)
}

/// The `n!×n!` GQFT; rows in Fourier order, columns in permutation order.
pub fn gqft(n: usize) -> Result<DenseOperator> {
    let f = gqft_matrix(n)?;
    let dim = f.nrows();
    DenseOperator::new(
        f,
        RegisterShape::new_allow_trivial(vec![("ctrl".to_string(), dim)])?,
    )
}

/// Right regular action `R(g)|h⟩ = |h g⁻¹⟩` on the group basis.
pub fn right_regular(g: &crate::symmetric_group::Permutation) -> Result<CMat> {
    let data = sn_data(g.degree())?;
    let nf = data.order();
    let gi = g.inverse();
    let mut r = CMat::zeros(nf, nf);
    for (h, p) in data.perms.iter().enumerate() {
        r[(data.perm_index(&p.compose(&gi)), h)] = C64::new(1.0, 0.0);
    }
    Ok(r)
}

/// `Σ_g |g⟩⟨g| ⊗ P_g` on `ctrl ⊗ q_1 … q_n`.
pub fn controlled_permutation(n: usize, d: usize) -> Result<DenseOperator> {
    let nf = factorial(n);
    Limits::from_env().check("controlled permutation", nf.saturating_mul(pow_dim(d, n)))?;
    let act = tensor_action(n, d)?;
    let dim = act.dim();
    let nf = nf as usize;
    let mut cp = CMat::zeros(nf * dim, nf * dim);
    for (h, map) in act.maps.iter().enumerate() {
        for (j, &i) in map.iter().enumerate() {
            cp[(h * dim + i as usize, h * dim + j)] = C64::new(1.0, 0.0);
        }
    }
    DenseOperator::new(cp, ctrl_data_shape(nf, n, d)?)
}

fn ctrl_data_shape(nf: usize, n: usize, d: usize) -> Result<RegisterShape> {
    let mut regs = vec![("ctrl".to_string(), nf)];
    regs.extend((1..=n).map(|k| (format!("q{}", k), d)));
    RegisterShape::new_allow_trivial(regs)
}

/// `W = (F ⊗ I) CP (F† ⊗ I) = Σ_h F|h⟩⟨h|F† ⊗ P_h`.
fn fourier_cp(n: usize, d: usize) -> Result<CMat> {
    let f = gqft_matrix(n)?;
    let act = tensor_action(n, d)?;
    let nf = f.nrows();
    let dim = act.dim();
    let mut w = CMat::zeros(nf * dim, nf * dim);
    for (h, map) in act.maps.iter().enumerate() {
        let col = f.column(h);
        for a in 0..nf {
            if col[a].re == 0.0 {
                continue;
            }
            for b in 0..nf {
                let c = col[a] * col[b].conj();
                if c.re == 0.0 && c.im == 0.0 {
                    continue;
                }
                for (j, &i) in map.iter().enumerate() {
                    w[(a * dim + i as usize, b * dim + j)] += c;
                }
            }
        }
    }
    Ok(w)
}

/// Outcome of the GQPE circuit simulation.
#[derive(Debug, Clone)]
pub struct Algorithm1Result {
    /// Output qudit, `Λ` statistics, and fidelity as for the three-step channel.
    pub result: QpaResult,
    /// Weight of the trivial-irrep state in the final control register.
    pub ctrl_trivial_prob: f64,
    /// Trace of the full final state.
    pub total_trace: f64,
}

/// Runs the GQPE circuit on `ρ^{⊗n}` with exact dephasing of `Λ`.
pub fn run_algorithm1(rho: &DenseOperator, n: usize) -> Result<Algorithm1Result> {
    validate_density(&rho.matrix)?;
    if !(2..=4).contains(&n) {
        return invalid(format!(
            "GQPE simulation needs n in 2..=4 (got {})",
            n
        ));
    }
    let d = rho.dim();
    let nf = factorial(n);
    Limits::from_env().check("GQPE state", nf.saturating_mul(pow_dim(d, n)))?;
    let layout = FourierLayout::new(n)?;
    let nf = nf as usize;
    let dim = d.pow(n as u32);
    let total = nf * dim;
    let w = fourier_cp(n, d)?;

    let data_state = tensor_power(&rho.matrix, n);
    let triv = layout.trivial_index();
    let mut state = CMat::zeros(total, total);
    state
        .view_mut((triv * dim, triv * dim), (dim, dim))
        .copy_from(&data_state);

    state = &w * state * w.adjoint();

    // Λ measurement: dephase between irrep blocks
    let block_of = layout.block_of();
    for a in 0..nf {
        for b in 0..nf {
            if block_of[a] != block_of[b] {
                state
                    .view_mut((a * dim, b * dim), (dim, dim))
                    .fill(C64::new(0.0, 0.0));
            }
        }
    }
    let mut sector_probs = BTreeMap::new();
    for blk in &layout.blocks {
        let g = blk.dim();
        let mut p = 0.0;
        for c in blk.offset..blk.offset + g * g {
            p += state.view((c * dim, c * dim), (dim, dim)).trace().re;
        }
        if blk.shape.depth() <= d {
            sector_probs.insert(blk.shape.clone(), p);
        } else if p.abs() > 1e-10 {
            return invalid(format!(
                "sector {} has weight {:e} beyond depth {}",
                blk.shape, p, d
            ));
        }
    }

    // discard t and prepare it in σ◊, block by block
    let mut reset = CMat::zeros(total, total);
    for (k, blk) in layout.blocks.iter().enumerate() {
        let g = blk.dim();
        let target = column_ordered(&blk.shape);
        let diamond = blk
            .tableaux
            .iter()
            .position(|t| *t == target)
            .expect("column-ordered tableau present");
        for s in 0..g {
            for s2 in 0..g {
                let mut acc = CMat::zeros(dim, dim);
                for t in 0..g {
                    let (a, b) = (layout.index(k, s, t), layout.index(k, s2, t));
                    acc += state.view((a * dim, b * dim), (dim, dim));
                }
                let (a, b) = (layout.index(k, s, diamond), layout.index(k, s2, diamond));
                reset
                    .view_mut((a * dim, b * dim), (dim, dim))
                    .copy_from(&acc);
            }
        }
    }

    let state = w.adjoint() * reset * &w;
    let total_trace = state.trace().re;

    let ctrl_trivial_prob = state.view((triv * dim, triv * dim), (dim, dim)).trace().re;
    let mut data_reduced = CMat::zeros(dim, dim);
    for c in 0..nf {
        data_reduced += state.view((c * dim, c * dim), (dim, dim));
    }
    let output = crate::linalg::trace_all_but_last(&data_reduced, d);
    let (v, _, _) = principal_eigenvector(&rho.matrix)?;
    let fidelity = fidelity_ps(&v, &output);
    Ok(Algorithm1Result {
        result: QpaResult {
            output: DenseOperator::new(output, RegisterShape::single("q", d))?,
            sector_probs,
            fidelity,
        },
        ctrl_trivial_prob,
        total_trace,
    })
}

/// Runs the GQPE circuit on many inputs in parallel (input order preserved).
pub fn run_algorithm1_batch(inputs: &[DenseOperator], n: usize) -> Vec<Result<Algorithm1Result>> {
    inputs
        .par_iter()
        .map(|rho| run_algorithm1(rho, n))
        .collect()
}
