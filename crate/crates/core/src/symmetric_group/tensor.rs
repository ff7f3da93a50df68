//! Realization of the group algebra on `W^{⊗n}`, `W = C^d`.
//!
//! Component rule: `(P_π Ψ)_{i_1…i_n} = Ψ_{i_{π(1)}…i_{π(n)}}`. On basis
//! states this moves the content of register `k` to register `π(k)`:
//! `P_π |j_1…j_n⟩ = |i⟩` with `i_{π(k)} = j_k`. Under the composition
//! convention of [`Permutation::compose`] the map is a homomorphism,
//! `P_{g∘h} = P_g P_h`, so `Σ c_g g ↦ Σ c_g P_g` is an algebra map.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::limits::{pow_dim, Limits};
use crate::linalg::{hermitian_eigen, validate_density, CMat, CVec, DenseOperator, RegisterShape};
use crate::symmetric_group::yor::sn_data;
use crate::symmetric_group::{GroupAlgebraElement, Permutation};
use crate::tableaux::{enumerate_gt, GtPattern, StandardTableau};
use crate::C64;

/// Basis-state images of every `P_g` for fixed `(n, d)`.
#[derive(Debug)]
pub struct TensorAction {
    pub n: usize,
    pub d: usize,
    /// `maps[g][j]` is the flat index of `P_g|j⟩`; `g` indexed like `SnData::perms`.
    pub maps: Vec<Vec<u32>>,
}

impl TensorAction {
    fn build(n: usize, d: usize) -> Result<TensorAction> {
        let data = sn_data(n)?;
        let dim = d.pow(n as u32);
        let digits: Vec<Vec<usize>> = (0..dim)
            .map(|flat| {
                let mut v = vec![0usize; n];
                let mut rem = flat;
                for k in (0..n).rev() {
                    v[k] = rem % d;
                    rem /= d;
                }
                v
            })
            .collect();
        let maps = data
            .perms
            .iter()
            .map(|g| {
                digits
                    .iter()
                    .map(|j| {
                        let mut i = vec![0usize; n];
                        for k in 0..n {
                            i[g.image0(k)] = j[k];
                        }
                        i.iter().fold(0usize, |acc, &x| acc * d + x) as u32
                    })
                    .collect()
            })
            .collect();
        Ok(TensorAction { n, d, maps })
    }

    pub fn dim(&self) -> usize {
        self.d.pow(self.n as u32)
    }

    /// `Σ_g coeffs[g] P_g` with coefficients indexed by permutation index.
    pub fn operator_from_coeffs(&self, coeffs: &[f64]) -> CMat {
        let dim = self.dim();
        let mut m = CMat::zeros(dim, dim);
        for (map, &c) in self.maps.iter().zip(coeffs) {
            if c == 0.0 {
                continue;
            }
            for (j, &i) in map.iter().enumerate() {
                m[(i as usize, j)] += C64::new(c, 0.0);
            }
        }
        m
    }

    /// Diagonal of `Σ_g coeffs[g] P_g`.
    pub fn diagonal_from_coeffs(&self, coeffs: &[f64]) -> Vec<f64> {
        let dim = self.dim();
        let mut diag = vec![0.0; dim];
        for (map, &c) in self.maps.iter().zip(coeffs) {
            if c == 0.0 {
                continue;
            }
            for (j, &i) in map.iter().enumerate() {
                if i as usize == j {
                    diag[j] += c;
                }
            }
        }
        diag
    }
}

type ActionCache = Mutex<HashMap<(usize, usize), Arc<TensorAction>>>;

/// Shared tensor action for `(n, d)`; enforces `d^n ≤ max_dim`.
pub fn tensor_action(n: usize, d: usize) -> Result<Arc<TensorAction>> {
    if d < 2 {
        return invalid(format!("local dimension must be at least 2 (got {})", d));
    }
    Limits::from_env().check(&format!("tensor space ({}^{})", d, n), pow_dim(d, n))?;
    static CACHE: OnceLock<ActionCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(a) = cache.lock().unwrap().get(&(n, d)) {
        return Ok(a.clone());
    }
    let built = Arc::new(TensorAction::build(n, d)?);
    let mut guard = cache.lock().unwrap();
    Ok(guard.entry((n, d)).or_insert(built).clone())
}

/// `P_π` on `n` registers of dimension `d`.
pub fn perm_matrix(pi: &Permutation, d: usize, n: usize) -> Result<DenseOperator> {
    if pi.degree() != n {
        return invalid(format!(
            "permutation of degree {} used with n = {}",
            pi.degree(),
            n
        ));
    }
    let act = tensor_action(n, d)?;
    let data = sn_data(n)?;
    let map = &act.maps[data.perm_index(pi)];
    let dim = act.dim();
    let mut m = CMat::zeros(dim, dim);
    for (j, &i) in map.iter().enumerate() {
        m[(i as usize, j)] = C64::new(1.0, 0.0);
    }
    DenseOperator::new(m, RegisterShape::qudits(n, d))
}

/// `Σ_g c_g P_g` for a group-algebra element.
pub fn represent(elem: &GroupAlgebraElement, d: usize) -> Result<DenseOperator> {
    let n = elem.degree();
    let act = tensor_action(n, d)?;
    let data = sn_data(n)?;
    let dim = act.dim();
    let mut m = CMat::zeros(dim, dim);
    for (g, c) in elem.terms() {
        for (j, &i) in act.maps[data.perm_index(g)].iter().enumerate() {
            m[(i as usize, j)] += c;
        }
    }
    DenseOperator::new(m, RegisterShape::qudits(n, d))
}

fn check_pair(s: &StandardTableau, t: &StandardTableau, d: usize) -> Result<()> {
    if s.shape() != t.shape() {
        return invalid(format!("tableaux {} and {} have different shapes", s, t));
    }
    s.shape().check_depth(d)
}

/// Coefficients of the matrix unit `O_st`, indexed by permutation index.
pub(crate) fn unit_coeffs(s: &StandardTableau, t: &StandardTableau) -> Result<Vec<f64>> {
    let shape = s.shape();
    let data = sn_data(shape.size())?;
    let irrep = data.irrep(&shape)?;
    Ok(irrep.matrix_unit_coeffs(irrep.tableau_index(s)?, irrep.tableau_index(t)?))
}

/// `Π_t`: the image of the idempotent `O_tt` on `W^{⊗n}`.
pub fn projector_tensor(t: &StandardTableau, d: usize) -> Result<DenseOperator> {
    transition_tensor(t, t, d)
}

/// `Π_{s_to, s_from}`: maps the `s_from` copy of the irrep onto the `s_to` copy.
pub fn transition_tensor(
    s_to: &StandardTableau,
    s_from: &StandardTableau,
    d: usize,
) -> Result<DenseOperator> {
    check_pair(s_to, s_from, d)?;
    let n = s_to.size();
    let act = tensor_action(n, d)?;
    let m = act.operator_from_coeffs(&unit_coeffs(s_to, s_from)?);
    DenseOperator::new(m, RegisterShape::qudits(n, d))
}

/// Diagonal of `Π_t` in the computational basis.
pub fn projector_diagonal(t: &StandardTableau, d: usize) -> Result<Vec<f64>> {
    t.shape().check_depth(d)?;
    let act = tensor_action(t.size(), d)?;
    Ok(act.diagonal_from_coeffs(&unit_coeffs(t, t)?))
}

/// `ρ_t = Π_t ρ^{⊗n} Π_t`.
pub fn schur_block(rho: &DenseOperator, t: &StandardTableau) -> Result<DenseOperator> {
    validate_density(&rho.matrix)?;
    let d = rho.dim();
    let n = t.size();
    let p = projector_tensor(t, d)?;
    let big = crate::linalg::tensor_power(&rho.matrix, n);
    let m = &p.matrix * big * &p.matrix;
    DenseOperator::new(m, RegisterShape::qudits(n, d))
}

/// A Schur-basis vector labelled by its Weyl tableau / GT pattern.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchurBasisVector {
    /// Semistandard tableau, rows separated by `;`, entries `1..d`.
    pub label: String,
    pub pattern: GtPattern,
    /// Amplitudes in the computational basis (real and imaginary parts).
    pub amplitudes: Vec<(f64, f64)>,
}

impl SchurBasisVector {
    pub fn vector(&self) -> CVec {
        CVec::from_iterator(
            self.amplitudes.len(),
            self.amplitudes.iter().map(|&(re, im)| C64::new(re, im)),
        )
    }
}

/// Semistandard tableau of a GT pattern, e.g. `"11;2"`.
pub fn gt_to_ssyt_label(p: &GtPattern) -> String {
    let d = p.rows().len();
    let depth = p.rows()[0].iter().filter(|&&x| x > 0).count();
    let mut rows = Vec::new();
    for r in 0..depth {
        let mut s = String::new();
        for k in 1..=d {
            let cur = p.row_of_length(k).get(r).copied().unwrap_or(0);
            let prev = if k > 1 {
                p.row_of_length(k - 1).get(r).copied().unwrap_or(0)
            } else {
                0
            };
            for _ in 0..cur.saturating_sub(prev) {
                s.push_str(&k.to_string());
            }
        }
        rows.push(s);
    }
    rows.join(";")
}

/// Collective `E_ab = Σ_r |a⟩⟨b|_r` on `n` registers.
fn collective(a: usize, b: usize, n: usize, d: usize) -> CMat {
    let dim = d.pow(n as u32);
    let mut m = CMat::zeros(dim, dim);
    for j in 0..dim {
        for r in 0..n {
            let stride = d.pow((n - 1 - r) as u32);
            if (j / stride) % d == b {
                let i = j - b * stride + a * stride;
                m[(i, j)] += C64::new(1.0, 0.0);
            }
        }
    }
    m
}

/// Restricts the column space of `q` to the eigenspace of `op` with eigenvalue
/// `target`.
fn restrict_to_eigenspace(q: &CMat, op: &CMat, target: f64) -> Result<CMat> {
    let m = q.adjoint() * op * q;
    let (vals, vecs) = hermitian_eigen(&m)?;
    let keep: Vec<usize> = (0..vals.len())
        .filter(|&k| (vals[k] - target).abs() < 1e-6)
        .collect();
    let mut out = CMat::zeros(q.nrows(), keep.len());
    for (c, &k) in keep.iter().enumerate() {
        out.set_column(c, &(q * vecs.column(k)));
    }
    Ok(out)
}

/// Gel'fand–Tsetlin basis of `Im Π_t` for the chain `U(1) ⊂ … ⊂ U(d)` acting on
/// levels `0..k`: each vector is the joint eigenvector of the level counts and
/// the subgroup Casimirs `Σ_{a,b<k} E_ab E_ba` (eigenvalue
/// `Σ_i μ_i(μ_i + k + 1 − 2i)` on the irrep `μ`). Each vector's phase is fixed
/// so its largest component is real and positive.
pub fn gt_basis_vectors(t: &StandardTableau, d: usize) -> Result<Vec<SchurBasisVector>> {
    let shape = t.shape();
    let n = t.size();
    let proj = projector_tensor(t, d)?.matrix;
    let (vals, vecs) = hermitian_eigen(&proj)?;
    let cols: Vec<usize> = (0..vals.len()).filter(|&k| vals[k] > 0.5).collect();
    let mut image = CMat::zeros(proj.nrows(), cols.len());
    for (c, &k) in cols.iter().enumerate() {
        image.set_column(c, &vecs.column(k));
    }
    let counts: Vec<CMat> = (0..d).map(|a| collective(a, a, n, d)).collect();
    let casimirs: Vec<CMat> = (2..d)
        .map(|k| {
            let mut c = CMat::zeros(proj.nrows(), proj.nrows());
            for a in 0..k {
                for b in 0..k {
                    c += collective(a, b, n, d) * collective(b, a, n, d);
                }
            }
            c
        })
        .collect();
    let mut out = Vec::new();
    for p in enumerate_gt(&shape, d)? {
        let mut q = image.clone();
        for (a, w) in p.weight().iter().enumerate() {
            q = restrict_to_eigenspace(&q, &counts[a], *w as f64)?;
        }
        for (ci, k) in (2..d).enumerate() {
            let mu = p.row_of_length(k);
            let target: f64 = mu
                .iter()
                .enumerate()
                .map(|(i, &m)| (m as f64) * (m as f64 + k as f64 + 1.0 - 2.0 * (i as f64 + 1.0)))
                .sum();
            q = restrict_to_eigenspace(&q, &casimirs[ci], target)?;
        }
        if q.ncols() != 1 {
            return invalid(format!(
                "GT pattern {:?} does not single out one vector (found {})",
                p.rows(),
                q.ncols()
            ));
        }
        let mut v: CVec = q.column(0).into_owned();
        let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let pivot = v.iter().position(|z| z.norm() > max - 1e-9).unwrap();
        let phase = v[pivot].conj() / v[pivot].norm();
        v *= phase;
        out.push(SchurBasisVector {
            label: gt_to_ssyt_label(&p),
            pattern: p,
            amplitudes: v.iter().map(|z| (z.re, z.im)).collect(),
        });
    }
    Ok(out)
}

/// The 8 Schur-basis vectors of `Im Π_[12;3]` for three qutrits.
pub fn qutrit_schur_basis_vectors() -> Vec<SchurBasisVector> {
    let t = StandardTableau::new(vec![vec![1, 2], vec![3]]).expect("valid tableau");
    gt_basis_vectors(&t, 3).expect("qutrit GT basis is well defined")
}
