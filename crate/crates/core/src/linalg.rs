//! Register-shaped dense complex operators and the numeric kernels around them.
//!
//! Kron convention: `(A ⊗ B)[(i,j),(k,l)] = A[i,k]·B[j,l]` with the composite
//! row index `i·dim(B) + j`, i.e. the first register is the most significant
//! digit. Register order in a [`RegisterShape`] follows the same rule.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, QpaError, Result};
use crate::C64;

pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Relative anti-Hermitian part tolerated by the eigen-solvers.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Ordered list of named registers with their local dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegisterShape {
    regs: Vec<(String, usize)>,
}

impl RegisterShape {
    /// Registers must have unique names and dimension at least 2.
    pub fn new(regs: Vec<(String, usize)>) -> Result<Self> {
        Self::build(regs, false)
    }

    /// Like [`RegisterShape::new`] but also accepts one-dimensional registers.
    pub fn new_allow_trivial(regs: Vec<(String, usize)>) -> Result<Self> {
        Self::build(regs, true)
    }

    fn build(regs: Vec<(String, usize)>, trivial_ok: bool) -> Result<Self> {
        let min = if trivial_ok { 1 } else { 2 };
        for (i, (name, dim)) in regs.iter().enumerate() {
            if *dim < min {
                return invalid(format!("register '{}' has dimension {}", name, dim));
            }
            if regs[..i].iter().any(|(n, _)| n == name) {
                return invalid(format!("duplicate register name '{}'", name));
            }
        }
        Ok(RegisterShape { regs })
    }

    /// `n` registers `q1..qn` of dimension `d`.
    pub fn qudits(n: usize, d: usize) -> Self {
        RegisterShape {
            regs: (1..=n).map(|k| (format!("q{}", k), d)).collect(),
        }
    }

    pub fn single(name: &str, d: usize) -> Self {
        RegisterShape {
            regs: vec![(name.to_string(), d)],
        }
    }

    pub fn registers(&self) -> &[(String, usize)] {
        &self.regs
    }

    pub fn dims(&self) -> Vec<usize> {
        self.regs.iter().map(|r| r.1).collect()
    }

    pub fn names(&self) -> Vec<&str> {
        self.regs.iter().map(|r| r.0.as_str()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.regs.iter().map(|r| r.1).product()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.regs
            .iter()
            .position(|r| r.0 == name)
            .ok_or_else(|| QpaError::UnknownRegister(name.to_string()))
    }

    /// Concatenation; names must stay unique.
    pub fn concat(&self, other: &RegisterShape) -> Result<RegisterShape> {
        let mut regs = self.regs.clone();
        regs.extend(other.regs.iter().cloned());
        Self::build(regs, true)
    }
}

/// Complex square matrix tagged with its register layout.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    pub matrix: CMat,
    pub shape: RegisterShape,
}

impl DenseOperator {
    pub fn new(matrix: CMat, shape: RegisterShape) -> Result<Self> {
        let dim = shape.total_dim();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return invalid(format!(
                "matrix is {}x{} but register shape has dimension {}",
                matrix.nrows(),
                matrix.ncols(),
                dim
            ));
        }
        Ok(DenseOperator { matrix, shape })
    }

    /// Single register named `q`.
    pub fn qudit(matrix: CMat) -> Result<Self> {
        let d = matrix.nrows();
        DenseOperator::new(matrix, RegisterShape::single("q", d))
    }

    pub fn identity(shape: RegisterShape) -> Self {
        let dim = shape.total_dim();
        DenseOperator {
            matrix: CMat::identity(dim, dim),
            shape,
        }
    }

    /// `|ψ⟩⟨ψ|` on a single register `q`.
    pub fn pure(psi: &CVec) -> Self {
        let d = psi.len();
        DenseOperator {
            matrix: psi * psi.adjoint(),
            shape: RegisterShape::single("q", d),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn dagger(&self) -> Self {
        DenseOperator {
            matrix: self.matrix.adjoint(),
            shape: self.shape.clone(),
        }
    }

    pub fn kron(&self, other: &DenseOperator) -> Result<DenseOperator> {
        let shape = self.shape.concat(&other.shape)?;
        Ok(DenseOperator {
            matrix: self.matrix.kronecker(&other.matrix),
            shape,
        })
    }

    /// Keeps the named registers (in their original order), tracing the rest.
    pub fn partial_trace(&self, keep: &[&str]) -> Result<DenseOperator> {
        let idx: Vec<usize> = keep
            .iter()
            .map(|k| self.shape.index_of(k))
            .collect::<Result<_>>()?;
        let mut keep_mask = vec![false; self.shape.regs.len()];
        for i in idx {
            keep_mask[i] = true;
        }
        let dims = self.shape.dims();
        let matrix = partial_trace_mask(&self.matrix, &dims, &keep_mask);
        let regs = self
            .shape
            .regs
            .iter()
            .zip(&keep_mask)
            .filter(|(_, &k)| k)
            .map(|(r, _)| r.clone())
            .collect();
        Ok(DenseOperator {
            matrix,
            shape: RegisterShape { regs },
        })
    }

    /// Reorders registers to `order` (a permutation of the current names).
    pub fn permute_registers(&self, order: &[&str]) -> Result<DenseOperator> {
        if order.len() != self.shape.regs.len() {
            return invalid("register permutation must list every register once");
        }
        let perm: Vec<usize> = order
            .iter()
            .map(|k| self.shape.index_of(k))
            .collect::<Result<_>>()?;
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if seen[p] {
                return invalid("register permutation repeats a register");
            }
            seen[p] = true;
        }
        let dims = self.shape.dims();
        let map = register_permutation_map(&dims, &perm);
        let dim = self.dim();
        let mut out = CMat::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                out[(map[i], map[j])] = self.matrix[(i, j)];
            }
        }
        let regs = perm.iter().map(|&p| self.shape.regs[p].clone()).collect();
        Ok(DenseOperator {
            matrix: out,
            shape: RegisterShape { regs },
        })
    }

    /// Checks unit trace, Hermiticity and positivity (eigenvalue floor −1e-10).
    pub fn validate_density(&self) -> Result<()> {
        validate_density(&self.matrix)
    }
}

/// Index map for reordering registers: old flat index → new flat index, where
/// new register `k` is old register `perm[k]`.
pub(crate) fn register_permutation_map(dims: &[usize], perm: &[usize]) -> Vec<usize> {
    let total: usize = dims.iter().product();
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let mut out = vec![0usize; total];
    let mut digits = vec![0usize; dims.len()];
    for (flat, slot) in out.iter_mut().enumerate() {
        let mut rem = flat;
        for k in (0..dims.len()).rev() {
            digits[k] = rem % dims[k];
            rem /= dims[k];
        }
        let mut idx = 0;
        for (k, &p) in perm.iter().enumerate() {
            idx = idx * new_dims[k] + digits[p];
        }
        *slot = idx;
    }
    out
}

/// Partial trace keeping registers flagged in `keep`.
pub fn partial_trace_mask(m: &CMat, dims: &[usize], keep: &[bool]) -> CMat {
    let total: usize = dims.iter().product();
    assert_eq!(m.nrows(), total);
    let dk: usize = dims
        .iter()
        .zip(keep)
        .filter(|(_, &k)| k)
        .map(|(d, _)| d)
        .product();
    let dt = total / dk;
    // For each flat index, its kept and traced sub-indices.
    let mut kept_of = vec![0usize; total];
    let mut traced_of = vec![0usize; total];
    for flat in 0..total {
        let mut rem = flat;
        let (mut ki, mut kstride, mut ti, mut tstride) = (0, 1, 0, 1);
        for r in (0..dims.len()).rev() {
            let digit = rem % dims[r];
            rem /= dims[r];
            if keep[r] {
                ki += digit * kstride;
                kstride *= dims[r];
            } else {
                ti += digit * tstride;
                tstride *= dims[r];
            }
        }
        kept_of[flat] = ki;
        traced_of[flat] = ti;
    }
    let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::with_capacity(dk); dt];
    for flat in 0..total {
        groups[traced_of[flat]].push((flat, kept_of[flat]));
    }
    let mut out = CMat::zeros(dk, dk);
    for g in &groups {
        for &(i, ki) in g {
            for &(j, kj) in g {
                out[(ki, kj)] += m[(i, j)];
            }
        }
    }
    out
}

/// Trace over all registers except the last one, for `n` registers of dim `d`.
pub fn trace_all_but_last(m: &CMat, d: usize) -> CMat {
    let total = m.nrows();
    let rest = total / d;
    let mut out = CMat::zeros(d, d);
    for k in 0..rest {
        for a in 0..d {
            for b in 0..d {
                out[(a, b)] += m[(k * d + a, k * d + b)];
            }
        }
    }
    out
}

/// Kronecker product of a list of matrices (first is most significant).
pub fn kron_all(ms: &[CMat]) -> CMat {
    let mut acc = CMat::identity(1, 1);
    for m in ms {
        acc = acc.kronecker(m);
    }
    acc
}

/// `ρ^{⊗n}`.
pub fn tensor_power(rho: &CMat, n: usize) -> CMat {
    let mut acc = CMat::identity(1, 1);
    for _ in 0..n {
        acc = acc.kronecker(rho);
    }
    acc
}

/// `(A^{⊗n}) · X` computed register by register, for `X` with `d^n` rows.
pub fn apply_tensor_power_left(a: &CMat, n: usize, x: &CMat) -> CMat {
    let d = a.nrows();
    let cols = x.ncols();
    let mut cur = x.clone();
    let mut next = CMat::zeros(cur.nrows(), cols);
    let total = d.pow(n as u32);
    for r in 0..n {
        // stride of register r (first register most significant)
        let stride = d.pow((n - 1 - r) as u32);
        next.fill(C64::new(0.0, 0.0));
        for base in 0..total {
            if !(base / stride).is_multiple_of(d) {
                continue;
            }
            for i in 0..d {
                let row_i = base + i * stride;
                for j in 0..d {
                    let aij = a[(i, j)];
                    if aij == C64::new(0.0, 0.0) {
                        continue;
                    }
                    let row_j = base + j * stride;
                    for c in 0..cols {
                        next[(row_i, c)] += aij * cur[(row_j, c)];
                    }
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    cur
}

/// Embeds `op` acting on registers `targets` (in that order) into the full space.
pub fn embed_operator(op: &CMat, targets: &[usize], dims: &[usize]) -> CMat {
    let total: usize = dims.iter().product();
    let sub: usize = targets.iter().map(|&t| dims[t]).product();
    assert_eq!(op.nrows(), sub);
    let mut out = CMat::zeros(total, total);
    let strides = strides(dims);
    // sub-index of a flat index and the flat index with the sub-digits cleared
    let split = |flat: usize| -> (usize, usize) {
        let mut s = 0;
        let mut rest = flat;
        for &t in targets {
            let digit = (flat / strides[t]) % dims[t];
            s = s * dims[t] + digit;
            rest -= digit * strides[t];
        }
        (s, rest)
    };
    let compose = |rest: usize, mut s: usize| -> usize {
        let mut flat = rest;
        for &t in targets.iter().rev() {
            flat += (s % dims[t]) * strides[t];
            s /= dims[t];
        }
        flat
    };
    for col in 0..total {
        let (sc, rest) = split(col);
        for sr in 0..sub {
            let v = op[(sr, sc)];
            if v != C64::new(0.0, 0.0) {
                out[(compose(rest, sr), col)] = v;
            }
        }
    }
    out
}

pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Depolarizes registers `targets`: `(1−ε)ρ + ε·Tr_T(ρ) ⊗ I_T/d_T`.
pub fn depolarize_registers(rho: &CMat, targets: &[usize], dims: &[usize], eps: f64) -> CMat {
    if eps == 0.0 {
        return rho.clone();
    }
    let keep: Vec<bool> = (0..dims.len()).map(|k| !targets.contains(&k)).collect();
    let reduced = partial_trace_mask(rho, dims, &keep);
    let dt: usize = targets.iter().map(|&t| dims[t]).product();
    // Rebuild reduced ⊗ I/dT in the original register order.
    let total: usize = dims.iter().product();
    let strides = strides(dims);
    let kept_regs: Vec<usize> = (0..dims.len()).filter(|k| keep[*k]).collect();
    let kept_index = |flat: usize| -> usize {
        kept_regs
            .iter()
            .fold(0, |acc, &k| acc * dims[k] + (flat / strides[k]) % dims[k])
    };
    let traced_index = |flat: usize| -> usize {
        targets
            .iter()
            .fold(0, |acc, &k| acc * dims[k] + (flat / strides[k]) % dims[k])
    };
    let mut out = rho * C64::new(1.0 - eps, 0.0);
    let w = C64::new(eps / dt as f64, 0.0);
    let ki: Vec<usize> = (0..total).map(kept_index).collect();
    let ti: Vec<usize> = (0..total).map(traced_index).collect();
    for i in 0..total {
        for j in 0..total {
            if ti[i] == ti[j] {
                out[(i, j)] += w * reduced[(ki[i], ki[j])];
            }
        }
    }
    out
}

/// Relative size of the anti-Hermitian part.
pub fn hermiticity_defect(h: &CMat) -> f64 {
    let norm = h.norm();
    if norm == 0.0 {
        return 0.0;
    }
    (h - h.adjoint()).norm() / norm
}

/// Eigen-decomposition of a Hermitian matrix; eigenvalues ascending.
pub fn hermitian_eigen(h: &CMat) -> Result<(Vec<f64>, CMat)> {
    let defect = hermiticity_defect(h);
    if defect > HERMITIAN_TOL {
        return invalid(format!(
            "matrix is not Hermitian (relative defect {:e})",
            defect
        ));
    }
    let sym = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let eig = nalgebra::SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let vals = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vecs = CMat::zeros(h.nrows(), h.ncols());
    for (c, &k) in order.iter().enumerate() {
        vecs.set_column(c, &eig.eigenvectors.column(k));
    }
    Ok((vals, vecs))
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(h: &CMat) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(h)?.0)
}

/// `exp(−i H t)` through the eigen-decomposition of `H`.
pub fn expm_hermitian(h: &CMat, t: f64) -> Result<CMat> {
    let (vals, vecs) = hermitian_eigen(h)?;
    let phases = CVec::from_iterator(
        vals.len(),
        vals.iter().map(|&e| C64::from_polar(1.0, -e * t)),
    );
    let scaled = CMat::from_fn(vecs.nrows(), vecs.ncols(), |i, j| vecs[(i, j)] * phases[j]);
    Ok(scaled * vecs.adjoint())
}

/// `⟨ψ|ρ|ψ⟩` for a pure target `ψ`.
pub fn fidelity_ps(psi: &CVec, rho: &CMat) -> f64 {
    (psi.adjoint() * rho * psi)[(0, 0)].re
}

/// `½‖ρ − τ‖₁` for Hermitian arguments.
pub fn trace_distance(rho: &CMat, tau: &CMat) -> Result<f64> {
    if rho.shape() != tau.shape() {
        return invalid("trace distance of operators with different shapes");
    }
    for m in [rho, tau] {
        let defect = hermiticity_defect(m);
        if defect > HERMITIAN_TOL {
            return invalid(format!(
                "matrix is not Hermitian (relative defect {:e})",
                defect
            ));
        }
    }
    let diff = rho - tau;
    if diff.norm() == 0.0 {
        return Ok(0.0);
    }
    let sym = (&diff + diff.adjoint()) * C64::new(0.5, 0.0);
    let vals = hermitian_eigenvalues(&sym)?;
    Ok(0.5 * vals.iter().map(|v| v.abs()).sum::<f64>())
}

/// Checks unit trace, Hermiticity and positivity.
pub fn validate_density(m: &CMat) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(QpaError::NotDensity("matrix is not square".into()));
    }
    let tr = m.trace();
    if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
        return Err(QpaError::NotDensity(format!("trace is {}", tr)));
    }
    let defect = hermiticity_defect(m);
    if defect > HERMITIAN_TOL {
        return Err(QpaError::NotDensity(format!(
            "not Hermitian (defect {:e})",
            defect
        )));
    }
    let min = hermitian_eigenvalues(m)?[0];
    if min < -1e-10 {
        return Err(QpaError::NotDensity(format!(
            "negative eigenvalue {:e}",
            min
        )));
    }
    Ok(())
}

fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// Haar-random pure state from a caller-owned RNG.
pub fn haar_state_rng<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CVec {
    let v = CVec::from_fn(d, |_, _| gaussian_c64(rng));
    let n = v.norm();
    v / C64::new(n, 0.0)
}

/// Haar-random pure state from a seed.
pub fn haar_state(d: usize, seed: u64) -> CVec {
    haar_state_rng(d, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Haar-random unitary: QR of a complex Ginibre matrix, phases of `R`'s
/// diagonal moved into `Q`.
pub fn haar_unitary_rng<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(d, d, |_, _| gaussian_c64(rng));
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut u = q;
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..d {
            u[(i, j)] *= phase;
        }
    }
    u
}

/// Haar-random unitary from a seed.
pub fn haar_unitary(d: usize, seed: u64) -> CMat {
    haar_unitary_rng(d, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Random full-rank density matrix `GG†/Tr(GG†)` (Ginibre ensemble).
pub fn random_density_rng<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(d, d, |_, _| gaussian_c64(rng));
    let m = &g * g.adjoint();
    let tr = m.trace();
    m / tr
}

/// Random density matrix from a seed.
pub fn random_density(d: usize, seed: u64) -> CMat {
    random_density_rng(d, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `|k⟩` in dimension `d`.
pub fn basis_vector(d: usize, k: usize) -> CVec {
    let mut v = CVec::zeros(d);
    v[k] = C64::new(1.0, 0.0);
    v
}

/// Real-valued matrix lifted to complex.
pub fn to_complex(m: &DMatrix<f64>) -> CMat {
    m.map(|x| C64::new(x, 0.0))
}

/// Principal eigenvector (largest eigenvalue) of a Hermitian matrix and its gap
/// to the next eigenvalue.
pub fn principal_eigenvector(rho: &CMat) -> Result<(CVec, f64, f64)> {
    let (vals, vecs) = hermitian_eigen(rho)?;
    let d = vals.len();
    let gap = if d >= 2 {
        vals[d - 1] - vals[d - 2]
    } else {
        f64::INFINITY
    };
    Ok((vecs.column(d - 1).into_owned(), vals[d - 1], gap))
}
