//! SWAPNET: chained SWAP tests on three copies.
//!
//! Each trial runs a SWAP test on `(q1, q2)`. Outcome `z = 1` (antisymmetric)
//! returns `q3`; outcome `z = 0` swaps `q2` and `q3` and continues. After
//! `N_trials` symmetric outcomes `q3` is returned as is. The antisymmetric
//! branch after `l` symmetric outcomes has Kraus operator
//! `K_l = Π₋ (P_(23) Π₊)^l`, which for `l ≥ 1` equals
//! `(−1)^{l+1} (√3/2^l) Π_{[13;2][12;3]}`.
//!
//! Exact mode sums all measurement branches with an implicit ancilla. The
//! noisy mode keeps the ancilla explicit (H, CSWAP, H, measure) so that gate
//! noise can attach to it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::limits::{pow_dim, Limits};
use crate::linalg::{
    depolarize_registers, embed_operator, fidelity_ps, partial_trace_mask, principal_eigenvector,
    tensor_power, validate_density, CMat, DenseOperator, RegisterShape,
};
use crate::symmetric_group::{
    perm_matrix, represent, transition_tensor, GroupAlgebraElement, Permutation,
};
use crate::tableaux::StandardTableau;
use crate::C64;

/// Largest `l` accepted by [`kraus_identity_check`].
pub const MAX_KRAUS_L: usize = 12;

/// One branch of a SWAP test.
#[derive(Debug, Clone)]
pub struct SwapTestOutcome {
    pub z: u8,
    /// Unnormalized post-measurement state `Π ρ Π`.
    pub post_state: DenseOperator,
    pub weight: f64,
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `(Π₊, Π₋)` on two registers of dimension `d`.
pub fn swap_projectors(d: usize) -> Result<(CMat, CMat)> {
    let p = perm_matrix(&Permutation::from_cycles(2, &[&[1, 2]])?, d, 2)?.matrix;
    let id = CMat::identity(d * d, d * d);
    Ok(((&id + &p) * c(0.5), (&id - &p) * c(0.5)))
}

/// SWAP test on a two-qudit state; branch 0 is symmetric, branch 1 antisymmetric.
pub fn swap_test(rho12: &DenseOperator) -> Result<[SwapTestOutcome; 2]> {
    validate_density(&rho12.matrix)?;
    let d = (rho12.dim() as f64).sqrt().round() as usize;
    if d * d != rho12.dim() || d < 2 {
        return invalid("SWAP test needs a two-qudit state");
    }
    let shape = RegisterShape::qudits(2, d);
    let (plus, minus) = swap_projectors(d)?;
    let branch = |z: u8, p: &CMat| -> Result<SwapTestOutcome> {
        let post = p * &rho12.matrix * p;
        let weight = post.trace().re;
        Ok(SwapTestOutcome {
            z,
            post_state: DenseOperator::new(post, shape.clone())?,
            weight,
        })
    };
    Ok([branch(0, &plus)?, branch(1, &minus)?])
}

/// Gate-noise settings of the explicit-ancilla circuit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwapnetNoise {
    /// Depolarizing strength after every gate, on the gate's support.
    pub eps: f64,
    /// Whether the two Hadamards on the ancilla are noisy too.
    pub noisy_hadamard: bool,
}

impl SwapnetNoise {
    pub fn new(eps: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&eps) {
            return invalid(format!("gate noise must be in [0,1), got {}", eps));
        }
        Ok(SwapnetNoise {
            eps,
            noisy_hadamard: true,
        })
    }
}

/// Output of a SWAPNET run.
#[derive(Debug, Clone)]
pub struct SwapnetResult {
    pub output: DenseOperator,
    /// Overlap with the input's principal eigenvector.
    pub fidelity: f64,
    /// `branch_weights[l]`: antisymmetric outcome at trial `l+1`; the last
    /// entry is the all-symmetric termination.
    pub branch_weights: Vec<f64>,
}

/// Operators of one three-copy SWAP-test step.
struct Step {
    d: usize,
    plus: CMat,
    minus: CMat,
    p23: CMat,
    noise: Option<NoisyOps>,
}

struct NoisyOps {
    eps: f64,
    noisy_h: bool,
    h_anc: CMat,
    cswap: CMat,
    swap23: CMat,
}

impl Step {
    fn new(d: usize, noise: Option<SwapnetNoise>) -> Result<Self> {
        Limits::from_env().check("SWAPNET state", 2 * pow_dim(d, 3))?;
        let (plus2, minus2) = swap_projectors(d)?;
        let dims = [d, d, d];
        let plus = embed_operator(&plus2, &[0, 1], &dims);
        let minus = embed_operator(&minus2, &[0, 1], &dims);
        let p23 = perm_matrix(&Permutation::from_cycles(3, &[&[2, 3]])?, d, 3)?.matrix;
        let noise = match noise {
            None => None,
            Some(n) => {
                let h = CMat::from_row_slice(2, 2, &[c(1.0), c(1.0), c(1.0), c(-1.0)])
                    * c(std::f64::consts::FRAC_1_SQRT_2);
                let dims4 = [2, d, d, d];
                let h_anc = embed_operator(&h, &[0], &dims4);
                let swap12 = perm_matrix(&Permutation::from_cycles(2, &[&[1, 2]])?, d, 2)?.matrix;
                let mut cswap = CMat::zeros(2 * d * d * d, 2 * d * d * d);
                let one = CMat::identity(d * d * d, d * d * d);
                cswap
                    .view_mut((0, 0), (d * d * d, d * d * d))
                    .copy_from(&one);
                let sw = embed_operator(&swap12, &[0, 1], &dims);
                cswap
                    .view_mut((d * d * d, d * d * d), (d * d * d, d * d * d))
                    .copy_from(&sw);
                Some(NoisyOps {
                    eps: n.eps,
                    noisy_h: n.noisy_hadamard,
                    h_anc,
                    cswap,
                    swap23: p23.clone(),
                })
            }
        };
        Ok(Step {
            d,
            plus,
            minus,
            p23,
            noise,
        })
    }

    /// `(antisymmetric branch, symmetric branch after the q2–q3 swap)`,
    /// both unnormalized on `q1 q2 q3`.
    fn apply(&self, cur: &CMat) -> (CMat, CMat) {
        match &self.noise {
            None => {
                let anti = &self.minus * cur * &self.minus;
                let sym = &self.p23 * (&self.plus * cur * &self.plus) * &self.p23;
                (anti, sym)
            }
            Some(nz) => {
                let d = self.d;
                let dd = d * d * d;
                let dims4 = [2, d, d, d];
                let mut y = CMat::zeros(2 * dd, 2 * dd);
                y.view_mut((0, 0), (dd, dd)).copy_from(cur);
                let hadamard = |y: CMat| -> CMat {
                    let y = &nz.h_anc * y * &nz.h_anc;
                    if nz.noisy_h {
                        depolarize_registers(&y, &[0], &dims4, nz.eps)
                    } else {
                        y
                    }
                };
                y = hadamard(y);
                y = &nz.cswap * y * nz.cswap.adjoint();
                y = depolarize_registers(&y, &[0, 1, 2], &dims4, nz.eps);
                y = hadamard(y);
                let sym = y.view((0, 0), (dd, dd)).into_owned();
                let anti = y.view((dd, dd), (dd, dd)).into_owned();
                let sym = &nz.swap23 * sym * &nz.swap23;
                let sym = depolarize_registers(&sym, &[1, 2], &[d, d, d], nz.eps);
                (anti, sym)
            }
        }
    }
}

fn q3_of(m: &CMat, d: usize) -> CMat {
    partial_trace_mask(m, &[d, d, d], &[false, false, true])
}

fn run_branches(
    rho: &DenseOperator,
    n_trials: usize,
    noise: Option<SwapnetNoise>,
) -> Result<(CMat, Vec<f64>)> {
    validate_density(&rho.matrix)?;
    if n_trials == 0 {
        return invalid("N_trials must be at least 1");
    }
    let d = rho.dim();
    let step = Step::new(d, noise)?;
    let mut cur = tensor_power(&rho.matrix, 3);
    let mut out = CMat::zeros(d, d);
    let mut weights = Vec::with_capacity(n_trials + 1);
    for _ in 0..n_trials {
        let (anti, sym) = step.apply(&cur);
        weights.push(anti.trace().re);
        out += q3_of(&anti, d);
        cur = sym;
    }
    weights.push(cur.trace().re);
    out += q3_of(&cur, d);
    Ok((out, weights))
}

fn run_exact(
    rho: &DenseOperator,
    n_trials: usize,
    noise: Option<SwapnetNoise>,
) -> Result<SwapnetResult> {
    let (out, weights) = run_branches(rho, n_trials, noise)?;
    let d = rho.dim();
    let (v, _, _) = principal_eigenvector(&rho.matrix)?;
    let fidelity = fidelity_ps(&v, &out);
    Ok(SwapnetResult {
        output: DenseOperator::new(out, RegisterShape::single("q", d))?,
        fidelity,
        branch_weights: weights,
    })
}

/// Output state of the exact branch sum, optionally with gate noise.
pub fn swapnet_output(
    rho: &DenseOperator,
    n_trials: usize,
    noise: Option<SwapnetNoise>,
) -> Result<CMat> {
    if let Some(nz) = noise {
        SwapnetNoise::new(nz.eps)?;
    }
    Ok(run_branches(rho, n_trials, noise)?.0)
}

/// Noiseless SWAPNET with all branches summed exactly.
pub fn run_swapnet(rho: &DenseOperator, n_trials: usize) -> Result<SwapnetResult> {
    run_exact(rho, n_trials, None)
}

/// SWAPNET with depolarizing gate noise `ε` (noisy Hadamards included).
pub fn run_swapnet_noisy(rho: &DenseOperator, n_trials: usize, eps: f64) -> Result<SwapnetResult> {
    run_exact(rho, n_trials, Some(SwapnetNoise::new(eps)?))
}

pub fn run_swapnet_noisy_with(
    rho: &DenseOperator,
    n_trials: usize,
    noise: SwapnetNoise,
) -> Result<SwapnetResult> {
    SwapnetNoise::new(noise.eps)?;
    run_exact(rho, n_trials, Some(noise))
}

/// Monte Carlo estimate from sampled measurement histories.
#[derive(Debug, Clone)]
pub struct SampledSwapnet {
    /// Average of the normalized `q3` states over shots.
    pub output: CMat,
    /// `counts[l]` as in [`SwapnetResult::branch_weights`].
    pub counts: Vec<usize>,
}

/// Samples `shots` measurement histories.
pub fn run_swapnet_sampled(
    rho: &DenseOperator,
    n_trials: usize,
    noise: Option<SwapnetNoise>,
    shots: usize,
    seed: u64,
) -> Result<SampledSwapnet> {
    validate_density(&rho.matrix)?;
    if n_trials == 0 || shots == 0 {
        return invalid("N_trials and shots must be positive");
    }
    if let Some(nz) = noise {
        SwapnetNoise::new(nz.eps)?;
    }
    let d = rho.dim();
    let step = Step::new(d, noise)?;
    let start = tensor_power(&rho.matrix, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = CMat::zeros(d, d);
    let mut counts = vec![0usize; n_trials + 1];
    for _ in 0..shots {
        let mut cur = start.clone();
        let mut done = false;
        for count in counts.iter_mut().take(n_trials) {
            let (anti, sym) = step.apply(&cur);
            let pa = anti.trace().re;
            let ps = sym.trace().re;
            if rng.gen::<f64>() * (pa + ps) < pa {
                out += q3_of(&anti, d) / c(pa);
                *count += 1;
                done = true;
                break;
            }
            cur = sym / c(ps);
        }
        if !done {
            out += q3_of(&cur, d) / c(cur.trace().re);
            counts[n_trials] += 1;
        }
    }
    Ok(SampledSwapnet {
        output: out / c(shots as f64),
        counts,
    })
}

/// Residuals of the SWAPNET Kraus identity at one `l`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KrausCheck {
    pub l: usize,
    /// Largest coefficient difference in the group algebra of `S_3`.
    pub group_residual: f64,
    /// `(d, Frobenius residual)` of the tensor realization.
    pub tensor_residuals: Vec<(usize, f64)>,
}

/// `Π₋ (P_(23) Π₊)^l` in the group algebra.
pub fn kraus_element(l: usize) -> Result<GroupAlgebraElement> {
    let e = GroupAlgebraElement::identity(3);
    let s12 = GroupAlgebraElement::basis(Permutation::from_cycles(3, &[&[1, 2]])?, c(1.0));
    let s23 = GroupAlgebraElement::basis(Permutation::from_cycles(3, &[&[2, 3]])?, c(1.0));
    let plus = (&e + &s12).scale(c(0.5));
    let minus = (&e - &s12).scale(c(0.5));
    let step = &s23 * &plus;
    let mut k = minus;
    for _ in 0..l {
        k = &k * &step;
    }
    Ok(k)
}

fn kraus_tableaux() -> Result<(StandardTableau, StandardTableau)> {
    Ok((
        StandardTableau::new(vec![vec![1, 3], vec![2]])?,
        StandardTableau::new(vec![vec![1, 2], vec![3]])?,
    ))
}

/// Prefactor `(−1)^{l+1} √3 / 2^l`.
pub fn kraus_prefactor(l: usize) -> f64 {
    let sign = if l % 2 == 1 { 1.0 } else { -1.0 };
    sign * 3f64.sqrt() / 2f64.powi(l as i32)
}

/// Compares `Π₋ (P_(23) Π₊)^l` with `(−1)^{l+1} (√3/2^l) Π_{[13;2][12;3]}` in
/// the group algebra and on `(C^d)^{⊗3}` for each `d` in `tensor_dims`.
/// The identity holds for `1 ≤ l`; at `l = 0` the left side is `Π₋` itself.
pub fn kraus_identity_check(l: usize, tensor_dims: &[usize]) -> Result<KrausCheck> {
    if l > MAX_KRAUS_L {
        return invalid(format!("l must be at most {}", MAX_KRAUS_L));
    }
    let k = kraus_element(l)?;
    let (to, from) = kraus_tableaux()?;
    let unit = crate::symmetric_group::matrix_unit(&to.shape(), &to, &from)?;
    let rhs = unit.scale(c(kraus_prefactor(l)));
    let group_residual = k.max_abs_diff(&rhs);
    let mut tensor_residuals = Vec::new();
    for &d in tensor_dims {
        let lhs = represent(&k, d)?.matrix;
        let t = transition_tensor(&to, &from, d)?.matrix * c(kraus_prefactor(l));
        tensor_residuals.push((d, (lhs - t).norm()));
    }
    Ok(KrausCheck {
        l,
        group_residual,
        tensor_residuals,
    })
}

/// `‖(P_(23) Π₊)^l − Π_[123]‖` (Frobenius) on `(C^d)^{⊗3}`.
pub fn symmetric_termination_distance(l: usize, d: usize) -> Result<f64> {
    let e = GroupAlgebraElement::identity(3);
    let s12 = GroupAlgebraElement::basis(Permutation::from_cycles(3, &[&[1, 2]])?, c(1.0));
    let s23 = GroupAlgebraElement::basis(Permutation::from_cycles(3, &[&[2, 3]])?, c(1.0));
    let step = &s23 * &(&e + &s12).scale(c(0.5));
    let mut m = e.clone();
    for _ in 0..l {
        m = &m * &step;
    }
    let sym = GroupAlgebraElement::from_terms(
        3,
        Permutation::all(3).into_iter().map(|g| (g, c(1.0 / 6.0))),
    );
    Ok((represent(&m, d)?.matrix - represent(&sym, d)?.matrix).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{haar_state_rng, random_density_rng, trace_distance};
    use crate::qpa_channel::{apply_optimal_qpa, depolarize};

    #[test]
    fn swap_test_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let psi = haar_state_rng(3, &mut rng);
        let pp = DenseOperator::new(
            tensor_power(&(&psi * psi.adjoint()), 2),
            RegisterShape::qudits(2, 3),
        )
        .unwrap();
        let [s, a] = swap_test(&pp).unwrap();
        assert!((s.weight - 1.0).abs() < 1e-12 && a.weight.abs() < 1e-12);

        let mut singlet = crate::linalg::CVec::zeros(4);
        singlet[1] = c(std::f64::consts::FRAC_1_SQRT_2);
        singlet[2] = c(-std::f64::consts::FRAC_1_SQRT_2);
        let [s, a] = swap_test(
            &DenseOperator::new(&singlet * singlet.adjoint(), RegisterShape::qudits(2, 2)).unwrap(),
        )
        .unwrap();
        assert!(s.weight.abs() < 1e-12 && (a.weight - 1.0).abs() < 1e-12);

        for d in 2..=4 {
            let mixed = CMat::identity(d * d, d * d) / c((d * d) as f64);
            let [s, a] =
                swap_test(&DenseOperator::new(mixed, RegisterShape::qudits(2, d)).unwrap())
                    .unwrap();
            assert!((a.weight - (d as f64 - 1.0) / (2.0 * d as f64)).abs() < 1e-12);
            assert!((s.weight + a.weight - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn kraus_identity_holds_for_positive_l() {
        for l in 1..=MAX_KRAUS_L {
            let dims: &[usize] = if l <= 8 { &[2, 3] } else { &[] };
            let r = kraus_identity_check(l, dims).unwrap();
            assert!(r.group_residual < 1e-10, "l={} {}", l, r.group_residual);
            for (_, t) in r.tensor_residuals {
                assert!(t < 1e-10);
            }
        }
        // base case in explicit form
        let k1 = kraus_element(1).unwrap();
        let p = |cyc: &[&[usize]]| Permutation::from_cycles(3, cyc).unwrap();
        let expect = GroupAlgebraElement::from_terms(
            3,
            vec![
                (p(&[&[1, 3]]), c(-0.25)),
                (p(&[&[2, 3]]), c(0.25)),
                (p(&[&[1, 2, 3]]), c(-0.25)),
                (p(&[&[1, 3, 2]]), c(0.25)),
            ],
        );
        assert!(k1.max_abs_diff(&expect) < 1e-15);
        assert!(kraus_identity_check(0, &[]).unwrap().group_residual > 0.1);
        assert!(kraus_identity_check(13, &[]).is_err());
    }

    #[test]
    fn kraus_branches_sum_to_projected_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let d = 2;
        let rho = random_density_rng(d, &mut rng);
        let big = tensor_power(&rho, 3);
        let (to, _) = kraus_tableaux().unwrap();
        let target = crate::symmetric_group::projector_tensor(&to, d)
            .unwrap()
            .matrix;
        let want = &big * &target;
        let mut acc = CMat::zeros(8, 8);
        let mut prev = f64::INFINITY;
        for l in 1..=30 {
            let k = represent(&kraus_element(l).unwrap(), d).unwrap().matrix;
            acc += &k * &big * k.adjoint();
            let err = (&acc - &want).norm();
            assert!(err <= prev + 1e-15);
            prev = err;
        }
        assert!(prev < 1e-12);
    }

    #[test]
    fn swapnet_converges_to_optimal() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let psi = haar_state_rng(2, &mut rng);
        for lambda in [0.2, 0.5, 0.8] {
            let rho = depolarize(&DenseOperator::pure(&psi), lambda).unwrap();
            let opt = apply_optimal_qpa(&rho, 3).unwrap().output.matrix;
            let r = run_swapnet(&rho, 20).unwrap();
            assert!(trace_distance(&r.output.matrix, &opt).unwrap() <= 1e-5);
            assert!((r.branch_weights.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        }
        let mut prev = f64::INFINITY;
        for l in [1, 2, 4, 8, 16] {
            let dist = symmetric_termination_distance(l, 3).unwrap();
            assert!(dist < prev);
            prev = dist;
        }
        assert!(prev < 1e-4);
    }

    #[test]
    fn swapnet_pure_input_stays_pure() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for n in [1, 2, 5] {
            let psi = haar_state_rng(3, &mut rng);
            let r = run_swapnet(&DenseOperator::pure(&psi), n).unwrap();
            assert!((fidelity_ps(&psi, &r.output.matrix) - 1.0).abs() < 1e-10);
        }
        assert!(run_swapnet(&DenseOperator::pure(&haar_state_rng(2, &mut rng)), 0).is_err());
    }

    #[test]
    fn noisy_reduces_to_exact_and_decreases() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let psi = haar_state_rng(2, &mut rng);
        let rho = depolarize(&DenseOperator::pure(&psi), 0.3).unwrap();
        for n in 1..=4 {
            let a = run_swapnet(&rho, n).unwrap();
            let b = run_swapnet_noisy(&rho, n, 0.0).unwrap();
            assert!((a.output.matrix - b.output.matrix).norm() < 1e-12);
            assert!(a
                .branch_weights
                .iter()
                .zip(&b.branch_weights)
                .all(|(x, y)| (x - y).abs() < 1e-12));
        }
        let mut prev = f64::INFINITY;
        for k in 0..10 {
            let eps = 0.03 * k as f64;
            let r = run_swapnet_noisy(&rho, 2, eps).unwrap();
            assert!((r.output.trace().re - 1.0).abs() < 1e-10);
            let f = fidelity_ps(&psi, &r.output.matrix);
            assert!(f < prev + 1e-12);
            prev = f;
        }
        assert!(run_swapnet_noisy(&rho, 2, 1.0).is_err());
    }

    #[test]
    fn sampled_mode_is_deterministic_and_close() {
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        let psi = haar_state_rng(2, &mut rng);
        let rho = depolarize(&DenseOperator::pure(&psi), 0.4).unwrap();
        let a = run_swapnet_sampled(&rho, 3, None, 4000, 9).unwrap();
        let b = run_swapnet_sampled(&rho, 3, None, 4000, 9).unwrap();
        assert_eq!(a.counts, b.counts);
        assert_eq!(a.output, b.output);
        let exact = run_swapnet(&rho, 3).unwrap();
        for (l, &cnt) in a.counts.iter().enumerate() {
            let p = exact.branch_weights[l];
            let se = (p * (1.0 - p) / 4000.0).sqrt();
            assert!((cnt as f64 / 4000.0 - p).abs() <= 5.0 * se + 1e-9);
        }
    }
}
