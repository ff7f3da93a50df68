//! Noisy Trotterized transverse-field Ising preparation purified by SWAPNET.
//!
//! `H = −J Σ_{(i,j)∈E} Z_i Z_j − h Σ_i X_i`, target `e^{−iHt}|0…0⟩`. One
//! first-order step applies `exp(i J τ Z_i Z_j)` on every edge, then
//! `exp(i h τ X_i)` on every qubit, with `τ = t/N_trot`.
//!
//! Noise model 1 runs the circuit perfectly and then depolarizes all `k`
//! qubits globally with strength `λ`. Noise model 2 follows every gate by
//! depolarization of strength `ε` on its support, including the SWAPNET
//! gates (each register of `k` qubits is one effective qudit, `d = 2^k`).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::{
    basis_vector, depolarize_registers, embed_operator, expm_hermitian, fidelity_ps, CMat, CVec,
    DenseOperator, RegisterShape,
};
use crate::qpa_channel::exact_overall_fidelity;
use crate::swapnet::{swapnet_output, SwapnetNoise};
use crate::C64;

/// Largest supported qubit count.
pub const MAX_QUBITS: usize = 6;
/// Default search range for the number of Trotter steps.
pub const DEFAULT_TROT_GRID: std::ops::RangeInclusive<usize> = 1..=30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum TrotterOrder {
    #[default]
    First,
    /// Symmetric splitting `ZZ(τ/2) X(τ) ZZ(τ/2)`.
    Second,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsingSpec {
    pub k: usize,
    pub j: f64,
    pub h: f64,
    pub t: f64,
    pub n_trot: usize,
    pub edges: Vec<(usize, usize)>,
    pub order: TrotterOrder,
}

impl IsingSpec {
    /// Nearest-neighbour open chain.
    pub fn chain(k: usize, j: f64, h: f64, t: f64, n_trot: usize) -> Result<Self> {
        let spec = IsingSpec {
            k,
            j,
            h,
            t,
            n_trot,
            edges: (1..k).map(|q| (q - 1, q)).collect(),
            order: TrotterOrder::First,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// The benchmark parameters `k=2, J=h=1, t=1, N_trot=10`.
    pub fn reference() -> Self {
        IsingSpec::chain(2, 1.0, 1.0, 1.0, 10).expect("valid reference spec")
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k > MAX_QUBITS {
            return invalid(format!(
                "qubit count must be in 1..={} (got {})",
                MAX_QUBITS, self.k
            ));
        }
        if self.n_trot == 0 {
            return invalid("N_trot must be at least 1");
        }
        if ![self.j, self.h, self.t].iter().all(|x| x.is_finite()) {
            return invalid("couplings and time must be finite");
        }
        for &(a, b) in &self.edges {
            if a == b || a >= self.k || b >= self.k {
                return invalid(format!("bad edge ({}, {})", a, b));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        1 << self.k
    }

    pub fn with_n_trot(&self, n_trot: usize) -> Self {
        IsingSpec {
            n_trot,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NoiseModel {
    /// Model 1: perfect circuit, then global depolarization `λ`.
    GlobalDepolarizing(f64),
    /// Model 2: depolarization `ε` after every gate.
    CircuitLevel(f64),
}

impl NoiseModel {
    pub fn param(&self) -> f64 {
        match *self {
            NoiseModel::GlobalDepolarizing(x) | NoiseModel::CircuitLevel(x) => x,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.param();
        if !(0.0..1.0).contains(&p) {
            return invalid(format!("noise parameter must be in [0,1), got {}", p));
        }
        Ok(())
    }

    pub fn with_param(&self, p: f64) -> Self {
        match self {
            NoiseModel::GlobalDepolarizing(_) => NoiseModel::GlobalDepolarizing(p),
            NoiseModel::CircuitLevel(_) => NoiseModel::CircuitLevel(p),
        }
    }
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn pauli_z() -> CMat {
    CMat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)])
}

fn pauli_x() -> CMat {
    CMat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)])
}

/// Dense Hamiltonian on `k` qubits.
pub fn hamiltonian(spec: &IsingSpec) -> Result<CMat> {
    spec.validate()?;
    let dims = vec![2; spec.k];
    let zz = pauli_z().kronecker(&pauli_z());
    let mut h = CMat::zeros(spec.dim(), spec.dim());
    for &(a, b) in &spec.edges {
        h -= embed_operator(&zz, &[a, b], &dims) * c(spec.j);
    }
    for q in 0..spec.k {
        h -= embed_operator(&pauli_x(), &[q], &dims) * c(spec.h);
    }
    Ok(h)
}

/// `e^{−iHt}|0…0⟩` by exact diagonalization.
pub fn ideal_state(spec: &IsingSpec) -> Result<CVec> {
    let u = expm_hermitian(&hamiltonian(spec)?, spec.t)?;
    Ok(u * basis_vector(spec.dim(), 0))
}

/// A gate with the registers it touches.
struct Gate {
    u: CMat,
    support: Vec<usize>,
}

fn trotter_gates(spec: &IsingSpec) -> Result<Vec<Gate>> {
    let tau = spec.t / spec.n_trot as f64;
    let zz = pauli_z().kronecker(&pauli_z());
    // exp(iθP) = exp(−i(−P)θ)
    let zz_gate = |theta: f64| expm_hermitian(&(-&zz), theta);
    let x_gate = |theta: f64| expm_hermitian(&(-pauli_x()), theta);
    let layer_zz = |theta: f64, gates: &mut Vec<Gate>| -> Result<()> {
        let u = zz_gate(theta)?;
        for &(a, b) in &spec.edges {
            gates.push(Gate {
                u: u.clone(),
                support: vec![a, b],
            });
        }
        Ok(())
    };
    let layer_x = |theta: f64, gates: &mut Vec<Gate>| -> Result<()> {
        let u = x_gate(theta)?;
        for q in 0..spec.k {
            gates.push(Gate {
                u: u.clone(),
                support: vec![q],
            });
        }
        Ok(())
    };
    let mut gates = Vec::new();
    for _ in 0..spec.n_trot {
        match spec.order {
            TrotterOrder::First => {
                layer_zz(spec.j * tau, &mut gates)?;
                layer_x(spec.h * tau, &mut gates)?;
            }
            TrotterOrder::Second => {
                layer_zz(spec.j * tau / 2.0, &mut gates)?;
                layer_x(spec.h * tau, &mut gates)?;
                layer_zz(spec.j * tau / 2.0, &mut gates)?;
            }
        }
    }
    Ok(gates)
}

/// Output of the Trotter circuit under the given noise model.
pub fn trotter_state(spec: &IsingSpec, noise: &NoiseModel) -> Result<DenseOperator> {
    spec.validate()?;
    noise.validate()?;
    let dims = vec![2; spec.k];
    let dim = spec.dim();
    let gates = trotter_gates(spec)?;
    let start = basis_vector(dim, 0);
    let rho = match *noise {
        NoiseModel::GlobalDepolarizing(lambda) => {
            let mut psi = start;
            for g in &gates {
                psi = embed_operator(&g.u, &g.support, &dims) * psi;
            }
            &psi * psi.adjoint() * c(1.0 - lambda)
                + CMat::identity(dim, dim) * c(lambda / dim as f64)
        }
        NoiseModel::CircuitLevel(eps) => {
            let mut rho = &start * start.adjoint();
            for g in &gates {
                let u = embed_operator(&g.u, &g.support, &dims);
                rho = &u * rho * u.adjoint();
                rho = depolarize_registers(&rho, &g.support, &dims, eps);
            }
            rho
        }
    };
    DenseOperator::new(rho, RegisterShape::qudits(spec.k, 2))
}

/// Options of a benchmark run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchOptions {
    /// Optimize each fidelity over `N_trot` in `trot_min..=trot_max`.
    pub optimize_trotter: bool,
    pub trot_min: usize,
    pub trot_max: usize,
    /// Noisy Hadamards on the SWAP-test ancilla in model 2.
    pub noisy_hadamard: bool,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            optimize_trotter: false,
            trot_min: *DEFAULT_TROT_GRID.start(),
            trot_max: *DEFAULT_TROT_GRID.end(),
            noisy_hadamard: true,
        }
    }
}

/// One benchmark grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub noise_param: f64,
    pub f_unpurified: f64,
    pub f_swapnet_2: f64,
    pub f_swapnet_4: f64,
    /// Exact optimal 3-copy fidelity for model 1 (`d = 2^k`).
    pub f_theory: Option<f64>,
    /// `N_trot` maximizing `f_swapnet_2` when optimizing.
    pub n_trot_opt: Option<usize>,
}

struct Point {
    f_unpurified: f64,
    f_swapnet_2: f64,
    f_swapnet_4: f64,
}

fn evaluate(
    spec: &IsingSpec,
    noise: &NoiseModel,
    target: &CVec,
    opts: &BenchOptions,
) -> Result<Point> {
    let rho = trotter_state(spec, noise)?;
    let d = spec.dim();
    let qudit = DenseOperator::new(rho.matrix.clone(), RegisterShape::single("q", d))?;
    let gate_noise = match *noise {
        NoiseModel::GlobalDepolarizing(_) => None,
        NoiseModel::CircuitLevel(eps) => Some(SwapnetNoise {
            eps,
            noisy_hadamard: opts.noisy_hadamard,
        }),
    };
    let f2 = fidelity_ps(target, &swapnet_output(&qudit, 2, gate_noise)?);
    let f4 = fidelity_ps(target, &swapnet_output(&qudit, 4, gate_noise)?);
    Ok(Point {
        f_unpurified: fidelity_ps(target, &rho.matrix),
        f_swapnet_2: f2,
        f_swapnet_4: f4,
    })
}

/// Fidelities of the unpurified state and of SWAPNET with 2 and 4 trials.
pub fn run_benchmark(
    spec: &IsingSpec,
    noise: &NoiseModel,
    opts: &BenchOptions,
) -> Result<BenchRecord> {
    spec.validate()?;
    noise.validate()?;
    let target = ideal_state(spec)?;
    let f_theory = match *noise {
        NoiseModel::GlobalDepolarizing(lambda) => {
            Some(exact_overall_fidelity(3, spec.dim(), lambda)?)
        }
        NoiseModel::CircuitLevel(_) => None,
    };
    if !opts.optimize_trotter {
        let p = evaluate(spec, noise, &target, opts)?;
        return Ok(BenchRecord {
            noise_param: noise.param(),
            f_unpurified: p.f_unpurified,
            f_swapnet_2: p.f_swapnet_2,
            f_swapnet_4: p.f_swapnet_4,
            f_theory,
            n_trot_opt: None,
        });
    }
    if opts.trot_min == 0 || opts.trot_min > opts.trot_max {
        return invalid("bad N_trot search range");
    }
    let mut best_u = f64::NEG_INFINITY;
    let mut best_2 = (f64::NEG_INFINITY, 0usize);
    let mut best_4 = f64::NEG_INFINITY;
    for n_trot in opts.trot_min..=opts.trot_max {
        let p = evaluate(&spec.with_n_trot(n_trot), noise, &target, opts)?;
        best_u = best_u.max(p.f_unpurified);
        if p.f_swapnet_2 > best_2.0 {
            best_2 = (p.f_swapnet_2, n_trot);
        }
        best_4 = best_4.max(p.f_swapnet_4);
    }
    Ok(BenchRecord {
        noise_param: noise.param(),
        f_unpurified: best_u,
        f_swapnet_2: best_2.0,
        f_swapnet_4: best_4,
        f_theory,
        n_trot_opt: Some(best_2.1),
    })
}

/// Benchmark over a grid of noise parameters; output in grid order.
pub fn sweep(
    spec: &IsingSpec,
    model: &NoiseModel,
    grid: &[f64],
    opts: &BenchOptions,
) -> Result<Vec<BenchRecord>> {
    grid.par_iter()
        .map(|&p| run_benchmark(spec, &model.with_param(p), opts))
        .collect()
}

/// First sign change of `f_swapnet_2 − f_unpurified` from positive to
/// non-positive along the grid, located by linear interpolation.
pub fn pseudothreshold(records: &[BenchRecord]) -> Option<f64> {
    records.windows(2).find_map(|w| {
        let a = w[0].f_swapnet_2 - w[0].f_unpurified;
        let b = w[1].f_swapnet_2 - w[1].f_unpurified;
        if a > 0.0 && b <= 0.0 {
            let (x0, x1) = (w[0].noise_param, w[1].noise_param);
            Some(x0 + (x1 - x0) * a / (a - b))
        } else {
            None
        }
    })
}

/// Evenly spaced grid `start, start+step, …` up to `end` inclusive.
pub fn linear_grid(start: f64, end: f64, points: usize) -> Result<Vec<f64>> {
    if points == 0 || !(start.is_finite() && end.is_finite()) {
        return invalid("grid needs at least one point and finite ends");
    }
    if points == 1 {
        return Ok(vec![start]);
    }
    let step = (end - start) / (points - 1) as f64;
    Ok((0..points).map(|i| start + step * i as f64).collect())
}
