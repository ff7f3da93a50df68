use std::collections::BTreeMap;

use rayon::prelude::*;

use qpa_core::gqpe::run_algorithm1;
use qpa_core::linalg::{
    fidelity_ps, haar_state, random_density, tensor_power, trace_distance, DenseOperator,
};
use qpa_core::property_suite::{all_passed, child_seed, run_all, SuiteConfig};
use qpa_core::qpa_channel::{
    apply_optimal_qpa, argmax_branch, choi_optimal, depolarize, exact_overall_fidelity,
    lp_coefficients,
};
use qpa_core::schur_poly::asymptotic_fidelity_depolarizing;
use qpa_core::swapnet::{
    kraus_identity_check, run_swapnet, run_swapnet_sampled, swapnet_output,
    symmetric_termination_distance, SwapnetNoise, MAX_KRAUS_L,
};
use qpa_core::tableaux::{enumerate_yds, smallest_feasible_row};
use qpa_core::trotter_bench::{pseudothreshold, sweep, BenchOptions, IsingSpec, NoiseModel};
use qpa_core::Limits;

use crate::config::{parse_grid, parse_list, parse_range, FileConfig};
use crate::output::{Cell, Format, Table};
use crate::{
    BenchArgs, CliError, FidelityArgs, Global, GqpeVerifyArgs, OptimalityArgs, SwapnetSweepArgs,
    SwapnetVerifyArgs, VerifyArgs,
};

const ARGMAX_GAP_TOL: f64 = 1e-9;
const EQUIVALENCE_TOL: f64 = 1e-9;
const KRAUS_TOL: f64 = 1e-10;
const CONVERGENCE_TOL: f64 = 1e-5;

type CmdResult = Result<(), CliError>;

fn emit(g: &Global, table: &Table) -> CmdResult {
    table
        .emit(g.format, g.out.as_deref())
        .map_err(CliError::Config)
}

fn fail_if(failures: usize, what: &str) -> CmdResult {
    if failures == 0 {
        Ok(())
    } else {
        Err(CliError::Check(format!("{} {} failed", failures, what)))
    }
}

fn check_probabilities(xs: &[f64], name: &str) -> Result<(), CliError> {
    match xs.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        Some(x) => Err(CliError::Config(format!(
            "{} value {} is outside [0,1]",
            name, x
        ))),
        None => Ok(()),
    }
}

pub fn fidelity(g: &Global, file: &FileConfig, a: FidelityArgs) -> CmdResult {
    let ds = parse_range(&file.pick(a.d, "d", "2".into())?)?;
    let ns = parse_range(&file.pick(a.n, "n", "2..8".into())?)?;
    let lambdas = parse_grid(&file.pick(a.lambda, "lambda", "0.5".into())?)?;
    check_probabilities(&lambdas, "lambda")?;

    let mut table = Table::new(
        "fidelity",
        vec!["n", "d", "lambda", "F_exact", "F_asymptotic", "residual"],
    );
    for &d in &ds {
        for &lambda in &lambdas {
            for &n in &ns {
                let exact = exact_overall_fidelity(n, d, lambda)?;
                let asym = if lambda == 0.0 {
                    Some(1.0)
                } else if lambda < 1.0 {
                    Some(asymptotic_fidelity_depolarizing(lambda, d, n)?)
                } else {
                    None
                };
                table.push(vec![
                    n.into(),
                    d.into(),
                    lambda.into(),
                    exact.into(),
                    asym.into(),
                    asym.map(|f| exact - f).into(),
                ]);
            }
        }
    }
    emit(g, &table)
}

struct OptimalityRow {
    n: usize,
    d: usize,
    lambda: f64,
    sigma: String,
    i_star: usize,
    arg_tensor: Option<usize>,
    arg_schur: Option<usize>,
    tensor: String,
    schur: String,
    gap: f64,
}

impl OptimalityRow {
    fn passed(&self) -> bool {
        self.arg_tensor == Some(self.i_star)
            && self.arg_schur == Some(self.i_star)
            && self.gap <= ARGMAX_GAP_TOL
    }
}

fn coefficient_list(m: &BTreeMap<usize, f64>) -> String {
    m.iter()
        .map(|(i, v)| format!("{}:{}", i, crate::output::fmt_g12(*v)))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn optimality(g: &Global, file: &FileConfig, a: OptimalityArgs) -> CmdResult {
    let ns = parse_range(&file.pick(a.n, "n", "2..5".into())?)?;
    let ds = parse_range(&file.pick(a.d, "d", "2..4".into())?)?;
    let lambdas = parse_grid(&file.pick(a.lambda, "lambda", "0.1,0.3,0.5,0.7,0.9".into())?)?;
    if let Some(l) = lambdas.iter().find(|l| !(**l > 0.0 && **l < 1.0)) {
        return Err(CliError::Config(format!(
            "lambda {} must lie strictly between 0 and 1",
            l
        )));
    }
    if ns.contains(&0) || ds.contains(&0) {
        return Err(CliError::Config("n and d must be positive".into()));
    }

    let mut jobs = Vec::new();
    for &n in &ns {
        for &d in &ds {
            for &lambda in &lambdas {
                for sigma in enumerate_yds(n, d) {
                    jobs.push((n, d, lambda, sigma));
                }
            }
        }
    }
    let rows: Vec<OptimalityRow> = jobs
        .par_iter()
        .map(|(n, d, lambda, sigma)| -> Result<OptimalityRow, CliError> {
            let coeffs = lp_coefficients(sigma, *lambda, *d)?;
            let tensor: BTreeMap<usize, f64> = coeffs.iter().map(|(&i, c)| (i, c.tensor)).collect();
            let schur: BTreeMap<usize, f64> = coeffs.iter().map(|(&i, c)| (i, c.schur)).collect();
            Ok(OptimalityRow {
                n: *n,
                d: *d,
                lambda: *lambda,
                sigma: sigma.to_string(),
                i_star: smallest_feasible_row(sigma).expect("nonempty diagram"),
                arg_tensor: argmax_branch(&tensor),
                arg_schur: argmax_branch(&schur),
                tensor: coefficient_list(&tensor),
                schur: coefficient_list(&schur),
                gap: coeffs
                    .values()
                    .map(|c| c.relative_gap())
                    .fold(0.0, f64::max),
            })
        })
        .collect::<Result<_, _>>()?;

    let mut table = Table::new(
        "optimality",
        vec![
            "n",
            "d",
            "lambda",
            "sigma",
            "i_star",
            "argmax_tensor",
            "argmax_schur",
            "coeffs_tensor",
            "coeffs_schur",
            "max_rel_gap",
            "pass",
        ],
    );
    let mut failures = 0;
    for r in &rows {
        let ok = r.passed();
        failures += usize::from(!ok);
        table.push(vec![
            r.n.into(),
            r.d.into(),
            r.lambda.into(),
            r.sigma.clone().into(),
            r.i_star.into(),
            r.arg_tensor.into(),
            r.arg_schur.into(),
            r.tensor.clone().into(),
            r.schur.clone().into(),
            r.gap.into(),
            ok.into(),
        ]);
    }
    table.note("sectors", rows.len());
    table.note("failures", failures);
    emit(g, &table)?;
    fail_if(failures, "sector argmax checks")
}

pub fn swapnet_verify(g: &Global, file: &FileConfig, a: SwapnetVerifyArgs) -> CmdResult {
    let max_l = file.pick(a.max_l, "max_l", MAX_KRAUS_L)?;
    let trials = file.pick(a.trials, "trials", 20usize)?;
    let lambdas = parse_grid(&file.pick(a.lambda, "lambda", "0.2,0.5,0.8".into())?)?;
    check_probabilities(&lambdas, "lambda")?;
    if max_l == 0 || max_l > MAX_KRAUS_L {
        return Err(CliError::Config(format!(
            "max_l must be in 1..={}",
            MAX_KRAUS_L
        )));
    }

    let mut table = Table::new(
        "swapnet_verify",
        vec!["check", "param", "measured", "tolerance", "pass"],
    );
    let mut failures = 0;
    let mut push =
        |table: &mut Table, check: &str, param: String, measured: f64, tol: f64, ok: bool| {
            failures += usize::from(!ok);
            table.push(vec![
                check.into(),
                param.into(),
                measured.into(),
                tol.into(),
                ok.into(),
            ]);
        };

    let checks: Vec<_> = (1..=max_l)
        .into_par_iter()
        .map(|l| kraus_identity_check(l, &[2, 3]))
        .collect::<Result<_, _>>()?;
    for c in checks {
        let worst = c
            .tensor_residuals
            .iter()
            .map(|r| r.1)
            .fold(c.group_residual, f64::max);
        push(
            &mut table,
            "kraus_identity",
            format!("l={}", c.l),
            worst,
            KRAUS_TOL,
            worst <= KRAUS_TOL,
        );
    }

    let mut prev = f64::INFINITY;
    for l in [1usize, 2, 4, 8, 16] {
        let dist = symmetric_termination_distance(l, 3)?;
        push(
            &mut table,
            "symmetric_termination",
            format!("l={},d=3", l),
            dist,
            prev,
            dist < prev,
        );
        prev = dist;
    }

    let psi = haar_state(2, g.seed);
    for &lambda in &lambdas {
        let rho = depolarize(&DenseOperator::pure(&psi), lambda)?;
        let opt = apply_optimal_qpa(&rho, 3)?.output.matrix;
        let r = run_swapnet(&rho, trials)?;
        let dist = trace_distance(&r.output.matrix, &opt)?;
        push(
            &mut table,
            "convergence",
            format!(
                "lambda={},N_trials={}",
                crate::output::fmt_g12(lambda),
                trials
            ),
            dist,
            CONVERGENCE_TOL,
            dist <= CONVERGENCE_TOL,
        );
    }
    emit(g, &table)?;
    fail_if(failures, "SWAPNET checks")
}

pub fn swapnet_sweep(g: &Global, file: &FileConfig, a: SwapnetSweepArgs) -> CmdResult {
    let ds = parse_range(&file.pick(a.d, "d", "2".into())?)?;
    let lambdas = parse_grid(&file.pick(a.lambda, "lambda", "0:0.9:10".into())?)?;
    let trials = parse_list::<usize>(&file.pick(a.trials, "trials", "1,2,4,20".into())?)?;
    let epss = parse_grid(&file.pick(a.eps, "eps", "0".into())?)?;
    let shots = file.pick_opt(a.shots, "shots")?;
    check_probabilities(&lambdas, "lambda")?;
    if let Some(e) = epss.iter().find(|e| !(**e >= 0.0 && **e < 1.0)) {
        return Err(CliError::Config(format!("eps {} must lie in [0,1)", e)));
    }
    if trials.contains(&0) || shots == Some(0) {
        return Err(CliError::Config("trials and shots must be positive".into()));
    }

    let mut jobs = Vec::new();
    for &d in &ds {
        for &eps in &epss {
            for &lambda in &lambdas {
                for &nt in &trials {
                    jobs.push((d, eps, lambda, nt));
                }
            }
        }
    }
    let seed = g.seed;
    let rows: Vec<Vec<Cell>> = jobs
        .par_iter()
        .enumerate()
        .map(
            |(idx, &(d, eps, lambda, nt))| -> Result<Vec<Cell>, CliError> {
                let psi = haar_state(d, child_seed(seed, &format!("swapnet-sweep:d={}", d)));
                let rho = depolarize(&DenseOperator::pure(&psi), lambda)?;
                let noise = (eps > 0.0).then(|| SwapnetNoise::new(eps)).transpose()?;
                let out = match shots {
                    Some(s) => {
                        run_swapnet_sampled(
                            &rho,
                            nt,
                            noise,
                            s,
                            child_seed(seed, &format!("shots:{}", idx)),
                        )?
                        .output
                    }
                    None => swapnet_output(&rho, nt, noise)?,
                };
                Ok(vec![
                    d.into(),
                    lambda.into(),
                    eps.into(),
                    nt.into(),
                    fidelity_ps(&psi, &rho.matrix).into(),
                    fidelity_ps(&psi, &out).into(),
                    exact_overall_fidelity(3, d, lambda)?.into(),
                ])
            },
        )
        .collect::<Result<_, _>>()?;

    let mut table = Table::new(
        "swapnet_sweep",
        vec![
            "d",
            "lambda",
            "eps",
            "N_trials",
            "F_unpurified",
            "F_swapnet",
            "F_optimal",
        ],
    );
    for r in rows {
        table.push(r);
    }
    table.note("mode", if shots.is_some() { "sampled" } else { "exact" });
    emit(g, &table)
}

fn parse_cases(s: &str) -> Result<Vec<(usize, usize)>, CliError> {
    s.split(',')
        .map(|c| {
            let (n, d) = c
                .trim()
                .split_once('x')
                .ok_or_else(|| CliError::Config(format!("case '{}' is not of the form NxD", c)))?;
            let bad = || CliError::Config(format!("case '{}' is not of the form NxD", c));
            Ok((n.parse().map_err(|_| bad())?, d.parse().map_err(|_| bad())?))
        })
        .collect()
}

pub fn gqpe_verify(g: &Global, file: &FileConfig, a: GqpeVerifyArgs) -> CmdResult {
    let cases = parse_cases(&file.pick(a.cases, "cases", "2x2,3x2,3x3,4x2".into())?)?;
    let inputs = file.pick(a.inputs, "inputs", 20usize)?;
    if inputs == 0 {
        return Err(CliError::Config("inputs must be positive".into()));
    }

    let mut jobs = Vec::new();
    for &(n, d) in &cases {
        for k in 0..inputs {
            jobs.push((n, d, k));
        }
    }
    let chois = cases
        .iter()
        .map(|&(n, d)| Ok(((n, d), choi_optimal(n, d)?)))
        .collect::<Result<BTreeMap<_, _>, CliError>>()?;
    let seed = g.seed;
    let rows: Vec<(usize, usize, usize, f64, f64, f64, f64)> = jobs
        .par_iter()
        .map(|&(n, d, k)| -> Result<_, CliError> {
            let rho = random_density(d, child_seed(seed, &format!("gqpe:{}x{}:{}", n, d, k)));
            let op = DenseOperator::qudit(rho.clone())?;
            let three = apply_optimal_qpa(&op, n)?;
            let choi = chois[&(n, d)].apply(&tensor_power(&rho, n))?;
            let alg = run_algorithm1(&op, n)?;
            let sector_dev = alg
                .result
                .sector_probs
                .iter()
                .map(|(s, p)| (p - three.sector_probs.get(s).copied().unwrap_or(0.0)).abs())
                .fold(0.0, f64::max);
            Ok((
                n,
                d,
                k,
                trace_distance(&alg.result.output.matrix, &three.output.matrix)?,
                trace_distance(&choi, &three.output.matrix)?,
                alg.ctrl_trivial_prob,
                sector_dev,
            ))
        })
        .collect::<Result<_, _>>()?;

    let mut table = Table::new(
        "gqpe_verify",
        vec![
            "n",
            "d",
            "input",
            "td_gqpe_three_step",
            "td_choi_three_step",
            "ctrl_trivial_prob",
            "sector_prob_dev",
            "pass",
        ],
    );
    let mut failures = 0;
    for (n, d, k, td_alg, td_choi, ctrl, dev) in rows {
        let ok = td_alg <= EQUIVALENCE_TOL
            && td_choi <= EQUIVALENCE_TOL
            && (ctrl - 1.0).abs() <= EQUIVALENCE_TOL
            && dev <= EQUIVALENCE_TOL;
        failures += usize::from(!ok);
        table.push(vec![
            n.into(),
            d.into(),
            k.into(),
            td_alg.into(),
            td_choi.into(),
            ctrl.into(),
            dev.into(),
            ok.into(),
        ]);
    }
    emit(g, &table)?;
    fail_if(failures, "equivalence checks")
}

pub fn bench(g: &Global, file: &FileConfig, a: BenchArgs) -> CmdResult {
    let model_id = file.pick(a.model, "model", 1u8)?;
    let (model, default_grid) = match model_id {
        1 => (NoiseModel::GlobalDepolarizing(0.0), "0:0.9:10"),
        2 => (NoiseModel::CircuitLevel(0.0), "0:0.15:16"),
        m => {
            return Err(CliError::Config(format!(
                "model must be 1 or 2 (got {})",
                m
            )))
        }
    };
    let grid = parse_grid(&file.pick(a.grid, "grid", default_grid.into())?)?;
    let reference = IsingSpec::reference();
    let spec = IsingSpec::chain(
        file.pick(a.k, "k", reference.k)?,
        file.pick(a.coupling, "J", reference.j)?,
        file.pick(a.field, "h", reference.h)?,
        file.pick(a.time, "time", reference.t)?,
        file.pick(a.n_trot, "n_trot", reference.n_trot)?,
    )?;
    let defaults = BenchOptions::default();
    let opts = BenchOptions {
        optimize_trotter: file.pick(a.optimize_trotter, "optimize_trotter", model_id == 2)?,
        trot_min: file.pick(a.trot_min, "trot_min", defaults.trot_min)?,
        trot_max: file.pick(a.trot_max, "trot_max", defaults.trot_max)?,
        noisy_hadamard: !file.pick(a.clean_hadamard, "clean_hadamard", false)?,
    };
    if opts.trot_min == 0 || opts.trot_min > opts.trot_max {
        return Err(CliError::Config("need 1 <= trot_min <= trot_max".into()));
    }
    Limits::from_env().check("benchmark register", 1u128 << (3 * spec.k + 1).min(127))?;

    let records = sweep(&spec, &model, &grid, &opts)?;
    let mut table = Table::new(
        "bench",
        vec![
            "noise_param",
            "F_unpurified",
            "F_swapnet_2",
            "F_swapnet_4",
            "F_theory",
            "N_trot_opt",
        ],
    );
    for r in &records {
        table.push(vec![
            r.noise_param.into(),
            r.f_unpurified.into(),
            r.f_swapnet_2.into(),
            r.f_swapnet_4.into(),
            r.f_theory.into(),
            r.n_trot_opt.into(),
        ]);
    }
    table.note("model", model_id as usize);
    if model_id == 2 {
        table.note("pseudothreshold", pseudothreshold(&records));
    }
    emit(g, &table)
}

pub fn verify(g: &Global, file: &FileConfig, a: VerifyArgs) -> CmdResult {
    let defaults = SuiteConfig::default();
    let config = SuiteConfig {
        seed: g.seed,
        max_n: file.pick(a.max_n, "max_n", defaults.max_n)?,
        max_d: file.pick(a.max_d, "max_d", defaults.max_d)?,
        limits: Limits::from_env(),
    };
    if config.max_n < 2 || config.max_d < 2 {
        return Err(CliError::Config(
            "max_n and max_d must be at least 2".into(),
        ));
    }
    let reports = run_all(&config);
    let failures = reports.iter().filter(|r| !r.passed).count();
    match g.format {
        Format::Json => {
            let doc = serde_json::json!({
                "schema": "qpa.verify.v1",
                "config": config,
                "all_passed": all_passed(&reports),
                "reports": reports,
            });
            let mut bytes =
                serde_json::to_vec_pretty(&doc).map_err(|e| CliError::Config(e.to_string()))?;
            bytes.push(b'\n');
            match &g.out {
                Some(p) => std::fs::write(p, bytes).map_err(|e| {
                    CliError::Config(format!("cannot write {}: {}", p.display(), e))
                })?,
                None => std::io::Write::write_all(&mut std::io::stdout(), &bytes)
                    .map_err(|e| CliError::Config(e.to_string()))?,
            }
        }
        Format::Csv => {
            let mut table = Table::new(
                "verify",
                vec![
                    "name",
                    "parameters",
                    "measured",
                    "tolerance",
                    "pass",
                    "detail",
                ],
            );
            for r in &reports {
                table.push(vec![
                    r.name.clone().into(),
                    r.parameters.clone().into(),
                    r.measured.into(),
                    r.tolerance.into(),
                    r.passed.into(),
                    r.detail.clone().into(),
                ]);
            }
            table.note("all_passed", failures == 0);
            emit(g, &table)?;
        }
    }
    fail_if(failures, "invariant checks")
}
