//! The optimal purity-amplification channel and its verification machinery.
//!
//! Three-step form of the channel on `n` copies: measure the tableau `s`, move
//! the state to the column-ordered tableau `◊` of the same shape with the
//! transition operator `Π_{◊ s}`, keep the last register:
//!
//! `T(X) = Σ_s Tr_{1..n-1}( Π_{◊ s} X Π_{s ◊} )`.
//!
//! Choi matrices use the register order `out ⊗ in` and
//! `J = Σ_ij T(E_ij) ⊗ E_ij`, so `T(X) = Tr_in[J (I ⊗ Xᵀ)]` and the average
//! fidelity against a cost matrix `C = ∫ σᵀ ⊗ ρ^{⊗n}` is `Tr(Cᵀ J)`.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, QpaError, Result};
use crate::limits::{pow_dim, Limits};
use crate::linalg::{
    apply_tensor_power_left, fidelity_ps, haar_state_rng, principal_eigenvector, tensor_power,
    trace_all_but_last, validate_density, CMat, CVec, DenseOperator, RegisterShape,
};
use crate::schur_poly::{
    closed_form_branch_fidelity, depolarized_spectrum, normalized_schur, schur_eval, Spectrum,
};
use crate::symmetric_group::tensor::unit_coeffs;
use crate::symmetric_group::{tensor_action, TensorAction};
use crate::tableaux::{
    column_ordered, enumerate_syt, enumerate_yds, feasible_rows, remove_box, smallest_feasible_row,
    specht_dim, weyl_dim, StandardTableau, YoungDiagram,
};
use crate::C64;

/// Tie-break tolerance between branch coefficients.
pub const TIE_TOL: f64 = 1e-12;

/// A completely positive map as Kraus operators or as a Choi matrix.
#[derive(Debug, Clone)]
pub enum Channel {
    Kraus {
        ops: Vec<CMat>,
        in_shape: RegisterShape,
        out_shape: RegisterShape,
    },
    /// Choi matrix on `out ⊗ in`.
    Choi {
        matrix: CMat,
        in_shape: RegisterShape,
        out_shape: RegisterShape,
    },
}

impl Channel {
    pub fn from_kraus(
        ops: Vec<CMat>,
        in_shape: RegisterShape,
        out_shape: RegisterShape,
    ) -> Result<Self> {
        let (di, dout) = (in_shape.total_dim(), out_shape.total_dim());
        if ops.is_empty() {
            return invalid("a Kraus channel needs at least one operator");
        }
        if ops.iter().any(|k| k.nrows() != dout || k.ncols() != di) {
            return invalid(format!("Kraus operators must be {}x{}", dout, di));
        }
        Ok(Channel::Kraus {
            ops,
            in_shape,
            out_shape,
        })
    }

    pub fn from_choi(
        matrix: CMat,
        in_shape: RegisterShape,
        out_shape: RegisterShape,
    ) -> Result<Self> {
        let dim = in_shape.total_dim() * out_shape.total_dim();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return invalid(format!("Choi matrix must be {}x{}", dim, dim));
        }
        Ok(Channel::Choi {
            matrix,
            in_shape,
            out_shape,
        })
    }

    pub fn in_dim(&self) -> usize {
        match self {
            Channel::Kraus { in_shape, .. } | Channel::Choi { in_shape, .. } => {
                in_shape.total_dim()
            }
        }
    }

    pub fn out_dim(&self) -> usize {
        match self {
            Channel::Kraus { out_shape, .. } | Channel::Choi { out_shape, .. } => {
                out_shape.total_dim()
            }
        }
    }

    /// Applies the map to an operator on the input space.
    pub fn apply(&self, x: &CMat) -> Result<CMat> {
        if x.nrows() != self.in_dim() || x.ncols() != self.in_dim() {
            return invalid("input operator has the wrong dimension");
        }
        Ok(match self {
            Channel::Kraus { ops, .. } => ops
                .iter()
                .map(|k| k * x * k.adjoint())
                .fold(CMat::zeros(self.out_dim(), self.out_dim()), |acc, m| {
                    acc + m
                }),
            Channel::Choi { matrix, .. } => {
                let (di, dout) = (self.in_dim(), self.out_dim());
                let mut out = CMat::zeros(dout, dout);
                // T(X)[a,b] = Σ_ij J[(a,i),(b,j)] X[i,j]
                for a in 0..dout {
                    for b in 0..dout {
                        let mut s = C64::new(0.0, 0.0);
                        for i in 0..di {
                            for j in 0..di {
                                s += matrix[(a * di + i, b * di + j)] * x[(i, j)];
                            }
                        }
                        out[(a, b)] = s;
                    }
                }
                out
            }
        })
    }

    /// Choi matrix on `out ⊗ in`.
    pub fn choi(&self) -> CMat {
        match self {
            Channel::Choi { matrix, .. } => matrix.clone(),
            Channel::Kraus { ops, .. } => {
                let (di, dout) = (self.in_dim(), self.out_dim());
                let mut j = CMat::zeros(di * dout, di * dout);
                for k in ops {
                    // vec with index (a, i) ↦ K[a, i]
                    let v = CVec::from_fn(di * dout, |r, _| k[(r / di, r % di)]);
                    j += &v * v.adjoint();
                }
                j
            }
        }
    }

    /// `‖Tr_out J − I‖` (Frobenius).
    pub fn trace_preservation_defect(&self) -> f64 {
        let (di, dout) = (self.in_dim(), self.out_dim());
        let j = self.choi();
        let mut red = CMat::zeros(di, di);
        for a in 0..dout {
            for i in 0..di {
                for k in 0..di {
                    red[(i, k)] += j[(a * di + i, a * di + k)];
                }
            }
        }
        (red - CMat::identity(di, di)).norm()
    }

    /// Smallest eigenvalue of the Choi matrix.
    pub fn min_choi_eigenvalue(&self) -> Result<f64> {
        Ok(crate::linalg::hermitian_eigenvalues(&self.choi())?[0])
    }

    /// Checks complete positivity (eigenvalue floor −1e-10) and trace
    /// preservation (1e-9).
    pub fn validate(&self) -> Result<()> {
        let min = self.min_choi_eigenvalue()?;
        if min < -1e-10 {
            return invalid(format!("Choi matrix has negative eigenvalue {:e}", min));
        }
        let tp = self.trace_preservation_defect();
        if tp > 1e-9 {
            return invalid(format!("channel is not trace preserving (defect {:e})", tp));
        }
        Ok(())
    }
}

/// Result of running a purification channel on identical copies.
#[derive(Debug, Clone)]
pub struct QpaResult {
    /// Single-qudit output state.
    pub output: DenseOperator,
    /// Probability of each irrep sector (Schur-sampling outcome).
    pub sector_probs: BTreeMap<YoungDiagram, f64>,
    /// Overlap of the output with the input's principal eigenvector.
    pub fidelity: f64,
}

/// `(1−λ)σ + λ I/d`.
pub fn depolarize(sigma: &DenseOperator, lambda: f64) -> Result<DenseOperator> {
    if !(0.0..=1.0).contains(&lambda) {
        return invalid(format!("noise strength must be in [0,1], got {}", lambda));
    }
    validate_density(&sigma.matrix)?;
    let d = sigma.dim();
    let m = &sigma.matrix * C64::new(1.0 - lambda, 0.0)
        + CMat::identity(d, d) * C64::new(lambda / d as f64, 0.0);
    DenseOperator::new(m, sigma.shape.clone())
}

fn check_size(limits: &Limits, what: &str, d: usize, exp: usize) -> Result<()> {
    limits.check(what, pow_dim(d, exp))
}

/// Every standard tableau with at most `d` rows, paired with its shape's
/// column-ordered tableau.
fn branches(n: usize, d: usize) -> Vec<(YoungDiagram, StandardTableau, StandardTableau)> {
    enumerate_yds(n, d)
        .into_iter()
        .flat_map(|shape| {
            let target = column_ordered(&shape);
            enumerate_syt(&shape)
                .into_iter()
                .map(move |s| (shape.clone(), target.clone(), s))
        })
        .collect()
}

fn transition(act: &TensorAction, to: &StandardTableau, from: &StandardTableau) -> Result<CMat> {
    Ok(act.operator_from_coeffs(&unit_coeffs(to, from)?))
}

/// `Tr_{1..n-1}(V Y)` where `Y = X V†` is given.
fn reduced_product(v: &CMat, y: &CMat, d: usize) -> CMat {
    let dim = v.nrows();
    let rest = dim / d;
    let mut out = CMat::zeros(d, d);
    for k in 0..rest {
        for a in 0..d {
            let row = v.row(k * d + a);
            for b in 0..d {
                let col = y.column(k * d + b);
                out[(a, b)] += row.iter().zip(col.iter()).map(|(p, q)| p * q).sum::<C64>();
            }
        }
    }
    out
}

fn principal_fidelity(rho: &CMat, out: &CMat) -> Result<f64> {
    let (v, _, _) = principal_eigenvector(rho)?;
    Ok(fidelity_ps(&v, out))
}

/// Three-step optimal channel applied to `ρ^{⊗n}`.
pub fn apply_optimal_qpa(rho: &DenseOperator, n: usize) -> Result<QpaResult> {
    apply_optimal_qpa_with(rho, n, &Limits::from_env())
}

pub fn apply_optimal_qpa_with(rho: &DenseOperator, n: usize, limits: &Limits) -> Result<QpaResult> {
    validate_density(&rho.matrix)?;
    if n == 0 {
        return invalid("n must be at least 1");
    }
    let d = rho.dim();
    check_size(limits, "optimal QPA input", d, n)?;
    let act = tensor_action(n, d)?;
    let list = branches(n, d);
    let parts: Vec<Result<(CMat, f64)>> = list
        .par_iter()
        .map(|(_, target, s)| {
            let v = transition(&act, target, s)?;
            let y = apply_tensor_power_left(&rho.matrix, n, &v.adjoint());
            let out = reduced_product(&v, &y, d);
            let p = out.trace().re;
            Ok((out, p))
        })
        .collect();
    let mut output = CMat::zeros(d, d);
    let mut sector_probs: BTreeMap<YoungDiagram, f64> = BTreeMap::new();
    for ((shape, _, _), part) in list.iter().zip(parts) {
        let (out, p) = part?;
        output += out;
        *sector_probs.entry(shape.clone()).or_insert(0.0) += p;
    }
    let fidelity = principal_fidelity(&rho.matrix, &output)?;
    Ok(QpaResult {
        output: DenseOperator::new(output, RegisterShape::single("q", d))?,
        sector_probs,
        fidelity,
    })
}

/// Three-step channel applied to an arbitrary operator `X` on `W^{⊗n}`.
pub fn apply_qpa_map(x: &CMat, n: usize, d: usize) -> Result<CMat> {
    let limits = Limits::from_env();
    check_size(&limits, "optimal QPA input", d, n)?;
    let dim = d.pow(n as u32);
    if x.nrows() != dim || x.ncols() != dim {
        return invalid(format!("input must be {}x{}", dim, dim));
    }
    let act = tensor_action(n, d)?;
    let mut output = CMat::zeros(d, d);
    for (_, target, s) in branches(n, d) {
        let v = transition(&act, &target, &s)?;
        let y = x * v.adjoint();
        output += reduced_product(&v, &y, d);
    }
    Ok(output)
}

/// Kraus form of the optimal channel: `K_{s,k} = (⟨k| ⊗ I) Π_{◊ s}`.
pub fn kraus_optimal(n: usize, d: usize) -> Result<Channel> {
    check_size(&Limits::from_env(), "optimal QPA Kraus operators", d, n)?;
    let act = tensor_action(n, d)?;
    let dim = d.pow(n as u32);
    let rest = dim / d;
    let mut ops = Vec::new();
    for (_, target, s) in branches(n, d) {
        let v = transition(&act, &target, &s)?;
        for k in 0..rest {
            ops.push(v.rows(k * d, d).into_owned());
        }
    }
    Channel::from_kraus(
        ops,
        RegisterShape::qudits(n, d),
        RegisterShape::single("out", d),
    )
}

/// `Σ_s (I ⊗ Π_{s t_s}) (Ω_{out,n} ⊗ I) (I ⊗ Π_{t_s s})` on `out ⊗ in`, with
/// `Ω = Σ_j |jj⟩` pairing the output with the last input register and `t_s`
/// chosen by `target`.
fn bent_projector_choi(
    n: usize,
    d: usize,
    pairs: &[(StandardTableau, StandardTableau)],
) -> Result<CMat> {
    let act = tensor_action(n, d)?;
    let dim_in = d.pow(n as u32);
    let rest = dim_in / d;
    let total = d * dim_in;
    // Ω_{out,n} ⊗ I_{1..n-1} = Σ_{k} |w_k⟩⟨w_k| with |w_k⟩ = Σ_j |j⟩_out |k, j⟩_in
    let mut j = CMat::zeros(total, total);
    for (target, s) in pairs {
        let a = act.operator_from_coeffs(&unit_coeffs(s, target)?);
        for k in 0..rest {
            // (I ⊗ A)|w_k⟩ = Σ_j |j⟩ ⊗ A|k,j⟩
            let mut w = CVec::zeros(total);
            for jj in 0..d {
                let col = a.column(k * d + jj);
                for r in 0..dim_in {
                    w[jj * dim_in + r] = col[r];
                }
            }
            j += &w * w.adjoint();
        }
    }
    Ok(j)
}

/// Choi matrix of the optimal channel built from bent projectors
/// (`out ⊗ in_1 … in_n`).
pub fn choi_optimal(n: usize, d: usize) -> Result<Channel> {
    if n == 0 {
        return invalid("n must be at least 1");
    }
    if d < 2 {
        return invalid("d must be at least 2");
    }
    check_size(&Limits::from_env(), "optimal Choi matrix", d, n + 1)?;
    let pairs: Vec<(StandardTableau, StandardTableau)> =
        branches(n, d).into_iter().map(|(_, t, s)| (t, s)).collect();
    let j = bent_projector_choi(n, d, &pairs)?;
    Channel::from_choi(
        j,
        RegisterShape::qudits(n, d),
        RegisterShape::single("out", d),
    )
}

/// Choi matrix of the single-sector branch that corrects every tableau of
/// `sigma` to `column_ordered(μ_i)` with `n` appended in row `i`.
pub fn branch_choi(sigma: &YoungDiagram, i: usize, d: usize) -> Result<CMat> {
    let n = sigma.size();
    check_size(&Limits::from_env(), "branch Choi matrix", d, n + 1)?;
    let target = branch_target(sigma, i, d)?;
    let pairs: Vec<(StandardTableau, StandardTableau)> = enumerate_syt(sigma)
        .into_iter()
        .map(|s| (target.clone(), s))
        .collect();
    bent_projector_choi(n, d, &pairs)
}

/// `column_ordered(μ_i)` extended by box `n` in row `i`.
pub fn branch_target(sigma: &YoungDiagram, i: usize, d: usize) -> Result<StandardTableau> {
    if !feasible_rows(sigma, d)?.contains(&i) {
        return invalid(format!("row {} is not feasible for {}", i, sigma));
    }
    let mu = remove_box(sigma, i)?;
    column_ordered(&mu).extend(i)
}

/// Exact Haar-averaged cost matrix `C = ∫ σᵀ ⊗ D_λ(σ)^{⊗n} dσ` on `out ⊗ in`.
pub fn haar_cost_matrix(n: usize, d: usize, lambda: f64) -> Result<DenseOperator> {
    if !(0.0..=1.0).contains(&lambda) {
        return invalid(format!("noise strength must be in [0,1], got {}", lambda));
    }
    if d < 2 || n == 0 {
        return invalid("need d ≥ 2 and n ≥ 1");
    }
    check_size(&Limits::from_env(), "Haar cost matrix", d, n + 1)?;
    let regs = n + 1;
    let total = d.pow(regs as u32);
    let digits: Vec<Vec<usize>> = (0..total)
        .map(|flat| {
            let mut v = vec![0usize; regs];
            let mut rem = flat;
            for k in (0..regs).rev() {
                v[k] = rem % d;
                rem /= d;
            }
            v
        })
        .collect();
    let flat = |v: &[usize]| v.iter().fold(0usize, |acc, &x| acc * d + x);
    let mut c = CMat::zeros(total, total);
    for mask in 0u32..(1u32 << n) {
        let k = mask.count_ones() as usize;
        let weight = (1.0 - lambda).powi(k as i32) * (lambda / d as f64).powi((n - k) as i32);
        if weight == 0.0 {
            continue;
        }
        // registers carrying σ: out (0) and in registers in S
        let support: Vec<usize> = std::iter::once(0)
            .chain((0..n).filter(|r| mask & (1 << r) != 0).map(|r| r + 1))
            .collect();
        let m = support.len();
        let perms = crate::symmetric_group::Permutation::all(m);
        let binom = (1..=m).fold(1.0, |acc, q| acc * (d + q - 1) as f64 / q as f64);
        let w = weight / (perms.len() as f64 * binom);
        for p in &perms {
            for jd in &digits {
                let mut id = jd.clone();
                for a in 0..m {
                    id[support[p.image0(a)]] = jd[support[a]];
                }
                // partial transpose on out: swap the out digits of row and column
                let mut row = id;
                let mut col = jd.clone();
                std::mem::swap(&mut row[0], &mut col[0]);
                c[(flat(&row), flat(&col))] += C64::new(w, 0.0);
            }
        }
    }
    let mut regs_shape = vec![("out".to_string(), d)];
    regs_shape.extend((1..=n).map(|k| (format!("q{}", k), d)));
    DenseOperator::new(c, RegisterShape::new(regs_shape)?)
}

/// Monte Carlo estimate of the cost matrix and the entrywise standard error.
pub fn haar_cost_matrix_monte_carlo(
    n: usize,
    d: usize,
    lambda: f64,
    samples: usize,
    seed: u64,
) -> Result<(CMat, CMat)> {
    check_size(&Limits::from_env(), "Haar cost matrix", d, n + 1)?;
    if samples < 2 {
        return invalid("need at least two samples");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = d.pow((n + 1) as u32);
    let mut mean = CMat::zeros(total, total);
    let mut sq_re = nalgebra::DMatrix::<f64>::zeros(total, total);
    let mut sq_im = nalgebra::DMatrix::<f64>::zeros(total, total);
    for _ in 0..samples {
        let psi = haar_state_rng(d, &mut rng);
        let sigma = &psi * psi.adjoint();
        let rho = &sigma * C64::new(1.0 - lambda, 0.0)
            + CMat::identity(d, d) * C64::new(lambda / d as f64, 0.0);
        let m = sigma.transpose().kronecker(&tensor_power(&rho, n));
        sq_re += m.map(|z| z.re * z.re);
        sq_im += m.map(|z| z.im * z.im);
        mean += m;
    }
    let s = samples as f64;
    mean /= C64::new(s, 0.0);
    let se = CMat::from_fn(total, total, |i, j| {
        let vr = (sq_re[(i, j)] / s - mean[(i, j)].re.powi(2)).max(0.0);
        let vi = (sq_im[(i, j)] / s - mean[(i, j)].im.powi(2)).max(0.0);
        C64::new((vr / (s - 1.0)).sqrt(), (vi / (s - 1.0)).sqrt())
    });
    Ok((mean, se))
}

/// Both evaluations of one LP coefficient `f^{μ_i}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchCoefficient {
    pub row: usize,
    /// Tensor-space trace with the branch-`i` projector.
    pub tensor: f64,
    /// Affine Schur-polynomial expression.
    pub schur: f64,
}

impl BranchCoefficient {
    pub fn relative_gap(&self) -> f64 {
        (self.tensor - self.schur).abs() / self.tensor.abs().max(self.schur.abs()).max(1e-300)
    }
}

fn check_open_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda < 1.0 {
        Ok(())
    } else {
        invalid(format!("LP coefficients need 0 < λ < 1, got {}", lambda))
    }
}

/// Tensor route: `f^{μ_i} = ⟨ψ| Tr_{1..n-1}(Π_{t_i} ρ^{⊗n}) |ψ⟩` for
/// `ρ = D_λ(|ψ⟩⟨ψ|)`, with `t_i` the branch target tableau. By unitary
/// covariance any `ψ` gives the Haar average; `ψ = |d−1⟩` makes everything
/// diagonal, so only the diagonal of `Π_{t_i}` is needed.
pub fn branch_coefficient_tensor(
    sigma: &YoungDiagram,
    i: usize,
    lambda: f64,
    d: usize,
) -> Result<f64> {
    check_open_lambda(lambda)?;
    let n = sigma.size();
    let target = branch_target(sigma, i, d)?;
    check_size(&Limits::from_env(), "branch projector", d, n)?;
    let act = tensor_action(n, d)?;
    let diag = act.diagonal_from_coeffs(&unit_coeffs(&target, &target)?);
    let spec = depolarized_spectrum(lambda, d)?;
    let p = spec.probs();
    let principal = d - 1;
    let mut f = 0.0;
    for (flat, &pd) in diag.iter().enumerate() {
        if pd == 0.0 || flat % d != principal {
            continue;
        }
        let mut w = p[principal];
        let mut rem = flat / d;
        for _ in 0..n - 1 {
            w *= p[rem % d];
            rem /= d;
        }
        f += pd * w;
    }
    Ok(f)
}

/// Schur route: `f^{μ_i} = −A·S^{μ_i}(a..a,b)·d^σ + (B/d)·s^σ(a..a,b)` with
/// `A = λ(d(1−λ)+λ)/(d²(1−λ))` and `B = d + λ/(1−λ)`.
pub fn branch_coefficient_schur(
    sigma: &YoungDiagram,
    i: usize,
    lambda: f64,
    d: usize,
) -> Result<f64> {
    check_open_lambda(lambda)?;
    if !feasible_rows(sigma, d)?.contains(&i) {
        return invalid(format!("row {} is not feasible for {}", i, sigma));
    }
    let mu = remove_box(sigma, i)?;
    let spec = depolarized_spectrum(lambda, d)?;
    let xs = spec.probs();
    let df = d as f64;
    let a_coef = lambda * (df * (1.0 - lambda) + lambda) / (df * df * (1.0 - lambda));
    let b_coef = df + lambda / (1.0 - lambda);
    let s_mu = normalized_schur(&mu, xs)?;
    let d_sigma = weyl_dim(sigma, d)? as f64;
    Ok(-a_coef * s_mu * d_sigma + (b_coef / df) * schur_eval(sigma, xs)?)
}

/// Branch objective `Tr(Cᵀ T^{(i)}) / g^σ` from the full cost matrix and the
/// branch Choi matrix (small sizes only).
pub fn branch_coefficient_cost_matrix(
    sigma: &YoungDiagram,
    i: usize,
    lambda: f64,
    d: usize,
) -> Result<f64> {
    let n = sigma.size();
    let c = haar_cost_matrix(n, d, lambda)?.matrix;
    let t = branch_choi(sigma, i, d)?;
    let g = specht_dim(sigma)? as f64;
    Ok(c.transpose().component_mul(&t).sum().re / g)
}

/// LP coefficients of every feasible branch, by both routes.
pub fn lp_coefficients(
    sigma: &YoungDiagram,
    lambda: f64,
    d: usize,
) -> Result<BTreeMap<usize, BranchCoefficient>> {
    check_open_lambda(lambda)?;
    let mut out = BTreeMap::new();
    for i in feasible_rows(sigma, d)? {
        out.insert(
            i,
            BranchCoefficient {
                row: i,
                tensor: branch_coefficient_tensor(sigma, i, lambda, d)?,
                schur: branch_coefficient_schur(sigma, i, lambda, d)?,
            },
        );
    }
    Ok(out)
}

/// Argmax of a coefficient map; values within [`TIE_TOL`] go to the smaller row.
pub fn argmax_branch(values: &BTreeMap<usize, f64>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (&i, &v) in values {
        match best {
            None => best = Some((i, v)),
            Some((_, bv)) if v > bv + TIE_TOL => best = Some((i, v)),
            _ => {}
        }
    }
    best.map(|b| b.0)
}

/// Exact optimal fidelity for depolarized inputs:
/// `F = Σ_σ g^σ f^{μ_{i*}}` via the closed-form GT sum (valid for all λ).
pub fn exact_overall_fidelity(n: usize, d: usize, lambda: f64) -> Result<f64> {
    let spec = depolarized_spectrum(lambda, d)?;
    exact_fidelity_spectrum(&spec, n)
}

/// Exact optimal fidelity with the principal eigenvector for any spectrum
/// (closed form; no dense operators).
pub fn exact_fidelity_spectrum(spectrum: &Spectrum, n: usize) -> Result<f64> {
    if n == 0 {
        return invalid("n must be at least 1");
    }
    let d = spectrum.dim();
    let mut f = 0.0;
    for sigma in enumerate_yds(n, d) {
        let i = smallest_feasible_row(&sigma).expect("nonempty diagram");
        f += specht_dim(&sigma)? as f64 * closed_form_branch_fidelity(&sigma, i, spectrum, d)?;
    }
    Ok(f)
}

/// Fidelity of the optimal channel's output with the principal eigenvector of
/// `ρ`, by dense channel application.
pub fn exact_fidelity_generic(rho: &DenseOperator, n: usize) -> Result<f64> {
    validate_density(&rho.matrix)?;
    let (_, _, gap) = principal_eigenvector(&rho.matrix)?;
    if gap <= crate::schur_poly::DEGENERACY_GAP {
        return Err(QpaError::Degenerate { gap });
    }
    Ok(apply_optimal_qpa(rho, n)?.fidelity)
}

/// Operational fidelity for `D_λ(|ψ⟩⟨ψ|)` measured against `ψ`.
pub fn operational_fidelity(psi: &CVec, n: usize, lambda: f64) -> Result<f64> {
    let sigma = DenseOperator::pure(psi);
    let rho = depolarize(&sigma, lambda)?;
    let res = apply_optimal_qpa(&rho, n)?;
    Ok(fidelity_ps(psi, &res.output.matrix))
}

/// Expected sector probabilities `g^σ s^σ(spectrum)`.
pub fn sector_probabilities(spectrum: &Spectrum, n: usize) -> Result<BTreeMap<YoungDiagram, f64>> {
    let d = spectrum.dim();
    enumerate_yds(n, d)
        .into_iter()
        .map(|y| {
            let p = specht_dim(&y)? as f64 * schur_eval(&y, spectrum.probs())?;
            Ok((y, p))
        })
        .collect()
}

/// Eigenvalues of a density matrix as a [`Spectrum`].
pub fn spectrum_of(rho: &CMat) -> Result<Spectrum> {
    let vals = crate::linalg::hermitian_eigenvalues(rho)?;
    Spectrum::from_unsorted(vals.into_iter().map(|v| v.max(0.0)).collect())
}

/// Number of irreps `g` of `S_n` shapes with at most `d` rows (sanity helper).
pub fn sector_count(n: usize, d: usize) -> usize {
    enumerate_yds(n, d).len()
}

/// Output of the three-step channel for `ρ^{⊗n}` via `trace_all_but_last`
/// on the dense block `ρ^{⊗n} Π_◊`; valid because `ρ^{⊗n}` commutes with
/// every transition operator. Used as an independent cross-check.
pub fn optimal_output_via_commutation(rho: &CMat, n: usize) -> Result<CMat> {
    let d = rho.nrows();
    check_size(&Limits::from_env(), "optimal QPA input", d, n)?;
    let act = tensor_action(n, d)?;
    let big = tensor_power(rho, n);
    let mut out = CMat::zeros(d, d);
    for shape in enumerate_yds(n, d) {
        let target = column_ordered(&shape);
        let g = specht_dim(&shape)? as f64;
        let p = act.operator_from_coeffs(&unit_coeffs(&target, &target)?);
        out += trace_all_but_last(&(&big * p), d) * C64::new(g, 0.0);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{
        haar_unitary_rng, hermitian_eigenvalues, random_density_rng, trace_distance,
    };
    use crate::schur_poly::asymptotic_fidelity_depolarizing;
    use rand::Rng;

    fn yd(r: &[usize]) -> YoungDiagram {
        YoungDiagram::new(r).unwrap()
    }

    fn rand_rho(d: usize, rng: &mut ChaCha8Rng) -> DenseOperator {
        DenseOperator::qudit(random_density_rng(d, rng)).unwrap()
    }

    #[test]
    fn depolarize_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = rand_rho(3, &mut rng);
        assert!((depolarize(&s, 0.0).unwrap().matrix - &s.matrix).norm() < 1e-15);
        let full = depolarize(&s, 1.0).unwrap().matrix;
        assert!((full - CMat::identity(3, 3) / C64::new(3.0, 0.0)).norm() < 1e-15);
        let zero = DenseOperator::pure(&crate::linalg::basis_vector(2, 0));
        let out = depolarize(&zero, 0.5).unwrap().matrix;
        assert!((out[(0, 0)].re - 0.75).abs() < 1e-15 && (out[(1, 1)].re - 0.25).abs() < 1e-15);
        assert!(depolarize(&zero, -0.1).is_err());
    }

    #[test]
    fn optimal_channel_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let psi = haar_state_rng(3, &mut rng);
        let pure = DenseOperator::pure(&psi);
        let res = apply_optimal_qpa(&pure, 3).unwrap();
        assert!((res.fidelity - 1.0).abs() < 1e-10);
        assert!((res.sector_probs[&yd(&[3])] - 1.0).abs() < 1e-10);

        let mixed = DenseOperator::qudit(CMat::identity(2, 2) / C64::new(2.0, 0.0)).unwrap();
        let res = apply_optimal_qpa(&mixed, 4).unwrap();
        assert!((res.output.matrix - &mixed.matrix).norm() < 1e-10);
    }

    #[test]
    fn sector_probabilities_match_schur() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (n, d) in [(3usize, 2usize), (3, 3), (4, 2), (4, 3)] {
            let rho = rand_rho(d, &mut rng);
            let res = apply_optimal_qpa(&rho, n).unwrap();
            let expect = sector_probabilities(&spectrum_of(&rho.matrix).unwrap(), n).unwrap();
            let total: f64 = res.sector_probs.values().sum();
            assert!((total - 1.0).abs() < 1e-10);
            for (y, p) in &expect {
                assert!((res.sector_probs[y] - p).abs() < 1e-10);
            }
            assert!((res.output.trace().re - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn commutation_shortcut_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (n, d) in [(3usize, 2usize), (3, 3), (4, 2), (5, 2)] {
            let rho = rand_rho(d, &mut rng);
            let a = apply_optimal_qpa(&rho, n).unwrap().output.matrix;
            let b = optimal_output_via_commutation(&rho.matrix, n).unwrap();
            assert!(trace_distance(&a, &b).unwrap() < 1e-10);
        }
    }

    #[test]
    fn choi_matches_operational_and_kraus() {
        for (n, d) in [(1usize, 2usize), (2, 2), (3, 2), (2, 3)] {
            let choi = choi_optimal(n, d).unwrap();
            choi.validate().unwrap();
            let dim = d.pow(n as u32);
            let mut from_map = CMat::zeros(d * dim, d * dim);
            for i in 0..dim {
                for j in 0..dim {
                    let mut e = CMat::zeros(dim, dim);
                    e[(i, j)] = C64::new(1.0, 0.0);
                    let out = apply_qpa_map(&e, n, d).unwrap();
                    for a in 0..d {
                        for b in 0..d {
                            from_map[(a * dim + i, b * dim + j)] = out[(a, b)];
                        }
                    }
                }
            }
            assert!((choi.choi() - &from_map).norm() < 1e-9, "n={} d={}", n, d);
            let kraus = kraus_optimal(n, d).unwrap();
            assert!((kraus.choi() - from_map).norm() < 1e-9);
            assert!(kraus.trace_preservation_defect() < 1e-9);
        }
        // n = 1 is the identity channel
        let id = choi_optimal(1, 3).unwrap().choi();
        let omega = CVec::from_fn(9, |r, _| {
            if r / 3 == r % 3 {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        assert!((id - &omega * omega.adjoint()).norm() < 1e-12);
    }

    #[test]
    fn choi_contraction_matches_operational_fidelity() {
        // d=2, λ=0.5, n=3: fidelity vs ψ from the channel equals Tr(Cᵀ J)
        let (n, d, lambda) = (3usize, 2usize, 0.5);
        let c = haar_cost_matrix(n, d, lambda).unwrap().matrix;
        let j = choi_optimal(n, d).unwrap().choi();
        let contraction = c.transpose().component_mul(&j).sum().re;
        let exact = exact_overall_fidelity(n, d, lambda).unwrap();
        assert!((contraction - exact).abs() < 1e-10);
        let psi = haar_state_rng(2, &mut ChaCha8Rng::seed_from_u64(5));
        let op = operational_fidelity(&psi, n, lambda).unwrap();
        assert!((op - exact).abs() < 1e-10);
    }

    #[test]
    fn cost_matrix_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for (n, d, lambda) in [(1usize, 2usize, 0.3), (2, 2, 0.7), (2, 3, 0.4), (3, 2, 0.5)] {
            let c = haar_cost_matrix(n, d, lambda).unwrap().matrix;
            assert!((c.trace().re - 1.0).abs() < 1e-12);
            for _ in 0..20 {
                let u = haar_unitary_rng(d, &mut rng);
                let big = u.conjugate().kronecker(&tensor_power(&u, n));
                assert!((&big * &c - &c * &big).norm() < 1e-9);
            }
        }
        // n=1, λ=1: C = I/d ⊗ I/d
        let c = haar_cost_matrix(1, 3, 1.0).unwrap().matrix;
        assert!((c - CMat::identity(9, 9) / C64::new(9.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn cost_matrix_monte_carlo_agrees() {
        let (n, d, lambda) = (2usize, 2usize, 0.4);
        let exact = haar_cost_matrix(n, d, lambda).unwrap().matrix;
        let (mean, se) = haar_cost_matrix_monte_carlo(n, d, lambda, 2000, 17).unwrap();
        for i in 0..exact.nrows() {
            for j in 0..exact.ncols() {
                let diff = mean[(i, j)] - exact[(i, j)];
                assert!(diff.re.abs() <= 5.0 * se[(i, j)].re + 1e-12);
                assert!(diff.im.abs() <= 5.0 * se[(i, j)].im + 1e-12);
            }
        }
    }

    #[test]
    fn lp_routes_agree_and_pick_smallest_row() {
        for n in 2..=4 {
            for d in 2..=3 {
                for lambda in [0.1, 0.5, 0.9] {
                    for sigma in enumerate_yds(n, d) {
                        let coeffs = lp_coefficients(&sigma, lambda, d).unwrap();
                        for c in coeffs.values() {
                            assert!(c.relative_gap() < 1e-9, "{} {:?}", sigma, c);
                        }
                        let tensor: BTreeMap<usize, f64> =
                            coeffs.iter().map(|(k, c)| (*k, c.tensor)).collect();
                        assert_eq!(argmax_branch(&tensor), smallest_feasible_row(&sigma));
                    }
                }
            }
        }
        let c = lp_coefficients(&yd(&[2, 1]), 0.3, 2).unwrap();
        let m: BTreeMap<usize, f64> = c.iter().map(|(k, v)| (*k, v.schur)).collect();
        assert_eq!(argmax_branch(&m), Some(1));
        assert!(lp_coefficients(&yd(&[2]), 0.0, 2).is_err());
    }

    #[test]
    fn cost_matrix_route_agrees_with_tensor_route() {
        for (sigma, d) in [
            (yd(&[2, 1]), 2usize),
            (yd(&[2, 1]), 3),
            (yd(&[3]), 2),
            (yd(&[2, 2]), 2),
        ] {
            for i in feasible_rows(&sigma, d).unwrap() {
                let a = branch_coefficient_cost_matrix(&sigma, i, 0.35, d).unwrap();
                let b = branch_coefficient_tensor(&sigma, i, 0.35, d).unwrap();
                assert!((a - b).abs() < 1e-10, "{} i={} {} {}", sigma, i, a, b);
            }
        }
    }

    #[test]
    fn closed_form_matches_tensor_route() {
        for n in 2..=4 {
            for d in 2..=3 {
                for sigma in enumerate_yds(n, d) {
                    for i in feasible_rows(&sigma, d).unwrap() {
                        let spec = depolarized_spectrum(0.45, d).unwrap();
                        let a = closed_form_branch_fidelity(&sigma, i, &spec, d).unwrap();
                        let b = branch_coefficient_tensor(&sigma, i, 0.45, d).unwrap();
                        assert!((a - b).abs() < 1e-10 * b.abs().max(1.0));
                    }
                }
            }
        }
    }

    #[test]
    fn exact_fidelity_examples() {
        for d in 2..=4 {
            for n in 1..=5 {
                assert!((exact_overall_fidelity(n, d, 0.0).unwrap() - 1.0).abs() < 1e-12);
                assert!(
                    (exact_overall_fidelity(n, d, 1.0).unwrap() - 1.0 / d as f64).abs() < 1e-12
                );
            }
        }
        let f: Vec<f64> = (2..=8)
            .map(|n| exact_overall_fidelity(n, 2, 0.5).unwrap())
            .collect();
        assert!((f[0] - 0.75).abs() < 1e-12);
        assert!(f.windows(2).all(|w| w[1] >= w[0] - 1e-15));
        assert!(f[1] > f[0]);
        for (k, n) in (4..=8).enumerate() {
            let asym = asymptotic_fidelity_depolarizing(0.5, 2, n).unwrap();
            assert!((f[k + 2] - asym).abs() * (n * n) as f64 <= 2.0);
        }
    }

    #[test]
    fn fidelity_is_psi_independent_and_covariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let exact = exact_overall_fidelity(3, 3, 0.3).unwrap();
        for _ in 0..5 {
            let psi = haar_state_rng(3, &mut rng);
            assert!((operational_fidelity(&psi, 3, 0.3).unwrap() - exact).abs() < 1e-9);
        }
        for _ in 0..3 {
            let rho = random_density_rng(2, &mut rng);
            let u = haar_unitary_rng(2, &mut rng);
            let rotated = &u * &rho * u.adjoint();
            let a = apply_optimal_qpa(&DenseOperator::qudit(rotated).unwrap(), 4)
                .unwrap()
                .output
                .matrix;
            let b = &u
                * apply_optimal_qpa(&DenseOperator::qudit(rho).unwrap(), 4)
                    .unwrap()
                    .output
                    .matrix
                * u.adjoint();
            assert!(trace_distance(&a, &b).unwrap() < 1e-9);
        }
    }

    #[test]
    fn generic_fidelity_and_positivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let d = rng.gen_range(2..=3);
            let rho = random_density_rng(d, &mut rng);
            let res = apply_optimal_qpa(&DenseOperator::qudit(rho.clone()).unwrap(), 3).unwrap();
            assert!(hermitian_eigenvalues(&res.output.matrix).unwrap()[0] > -1e-10);
            let spec = spectrum_of(&rho).unwrap();
            let f = exact_fidelity_generic(&DenseOperator::qudit(rho).unwrap(), 3).unwrap();
            assert!((f - exact_fidelity_spectrum(&spec, 3).unwrap()).abs() < 1e-9);
        }
        let degenerate = DenseOperator::qudit(CMat::identity(2, 2) / C64::new(2.0, 0.0)).unwrap();
        assert!(matches!(
            exact_fidelity_generic(&degenerate, 3),
            Err(QpaError::Degenerate { .. })
        ));
    }

    #[test]
    fn size_limit_is_enforced() {
        let rho = DenseOperator::qudit(CMat::identity(4, 4) / C64::new(4.0, 0.0)).unwrap();
        let err = apply_optimal_qpa_with(&rho, 7, &Limits::default()).unwrap_err();
        assert!(matches!(err, QpaError::SizeLimit { .. }));
    }
}
