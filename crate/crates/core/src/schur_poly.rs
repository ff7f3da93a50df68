//! Schur polynomials and the fidelity formulas built on them.
//!
//! Evaluation uses the Gel'fand–Tsetlin branching sum
//! `s_λ(x_1..x_d) = Σ_{μ ≺ λ} x_d^{|λ|-|μ|} s_μ(x_1..x_{d-1})`, which is a sum of
//! positive monomials for positive arguments and has no 0/0 issue at repeated
//! arguments (the depolarized case).

use serde::{Deserialize, Serialize};

use crate::error::{invalid, QpaError, Result};
use crate::tableaux::{feasible_rows, remove_box, weyl_dim, YoungDiagram};

/// Gap below which a principal eigenvalue counts as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-9;

/// Eigenvalues of a qudit state, ascending; the principal one is last.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    probs: Vec<f64>,
}

impl Spectrum {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return invalid("empty spectrum");
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return invalid(format!("spectrum entries must be nonnegative: {:?}", probs));
        }
        let s: f64 = probs.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return invalid(format!("spectrum must sum to 1 (got {})", s));
        }
        if probs.windows(2).any(|w| w[0] > w[1]) {
            return invalid(format!("spectrum must be sorted ascending: {:?}", probs));
        }
        Ok(Spectrum { probs })
    }

    /// Sorts and renormalizes arbitrary nonnegative weights.
    pub fn from_unsorted(mut probs: Vec<f64>) -> Result<Self> {
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return invalid("spectrum entries must be nonnegative");
        }
        let s: f64 = probs.iter().sum();
        if s <= 0.0 {
            return invalid("spectrum has zero mass");
        }
        probs.iter_mut().for_each(|p| *p /= s);
        probs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Spectrum::new(probs)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    pub fn principal(&self) -> f64 {
        *self.probs.last().unwrap()
    }

    pub fn gap(&self) -> f64 {
        let d = self.probs.len();
        if d < 2 {
            return f64::INFINITY;
        }
        self.probs[d - 1] - self.probs[d - 2]
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.gap() > DEGENERACY_GAP
    }

    fn require_nondegenerate(&self) -> Result<()> {
        if self.is_nondegenerate() {
            Ok(())
        } else {
            Err(QpaError::Degenerate { gap: self.gap() })
        }
    }
}

/// Schur polynomial `s_yd(xs)`.
pub fn schur_eval(yd: &YoungDiagram, xs: &[f64]) -> Result<f64> {
    let top = yd.padded(xs.len())?;
    Ok(branch_sum(&top, xs))
}

/// Recursive GT branching on a padded row of length `xs.len()`.
fn branch_sum(top: &[usize], xs: &[f64]) -> f64 {
    let d = xs.len();
    if d == 0 {
        return 1.0;
    }
    if d == 1 {
        return xs[0].powi(top[0] as i32);
    }
    let size: usize = top.iter().sum();
    let mut total = 0.0;
    for_each_interlacing(top, |mu| {
        let inner: usize = mu.iter().sum();
        total += xs[d - 1].powi((size - inner) as i32) * branch_sum(mu, &xs[..d - 1]);
    });
    total
}

/// Calls `f` on every row `mu` of length `top.len()-1` with
/// `top[j] ≥ mu[j] ≥ top[j+1]`.
fn for_each_interlacing(top: &[usize], mut f: impl FnMut(&[usize])) {
    let m = top.len() - 1;
    let mut mu: Vec<usize> = top[1..].to_vec();
    loop {
        f(&mu);
        // odometer over mu[j] in [top[j+1], top[j]]
        let mut j = 0;
        loop {
            if j == m {
                return;
            }
            if mu[j] < top[j] {
                mu[j] += 1;
                break;
            }
            mu[j] = top[j + 1];
            j += 1;
        }
    }
}

/// `s_yd(xs) / weyl_dim(yd, |xs|)`.
pub fn normalized_schur(yd: &YoungDiagram, xs: &[f64]) -> Result<f64> {
    let s = schur_eval(yd, xs)?;
    Ok(s / weyl_dim(yd, xs.len())? as f64)
}

/// Spectrum of `(1-λ)|ψ⟩⟨ψ| + λ I/d`: `(a,…,a,b)`, `a = λ/d`, `b = 1-λ+λ/d`.
pub fn depolarized_spectrum(lambda: f64, d: usize) -> Result<Spectrum> {
    if !(0.0..=1.0).contains(&lambda) || !lambda.is_finite() {
        return invalid(format!("noise strength must be in [0,1], got {}", lambda));
    }
    if d == 0 {
        return invalid("d must be positive");
    }
    let a = lambda / d as f64;
    let b = 1.0 - lambda + a;
    let mut probs = vec![a; d - 1];
    probs.push(b);
    // Exact renormalization keeps the 1e-12 sum check honest for large d.
    let s: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= s);
    Spectrum::new(probs)
}

/// Branch fidelity coefficient `f^{μ_i}` for removing the last box of row `i`
/// of `sigma`, via the GT-basis (Clebsch–Gordan weighted) sum.
///
/// With `m` running over GT patterns of `sigma` and `m'` their second row,
/// `f = (d^σ/d^μ) Σ_m Π_{j<d}(m'_j − j − σ_i + i) / Π_{j≠i}(σ_j − j − σ_i + i) · p^{wt(m)}`,
/// where the principal eigenvalue is the last entry of the spectrum.
pub fn closed_form_branch_fidelity(
    sigma: &YoungDiagram,
    i: usize,
    spectrum: &Spectrum,
    d: usize,
) -> Result<f64> {
    if spectrum.dim() != d {
        return invalid(format!(
            "spectrum has {} entries, expected d = {}",
            spectrum.dim(),
            d
        ));
    }
    let feasible = feasible_rows(sigma, d)?;
    if !feasible.contains(&i) {
        return invalid(format!("row {} is not feasible for {}", i, sigma));
    }
    let mu = remove_box(sigma, i)?;
    let top = sigma.padded(d)?;
    let xs = spectrum.probs();
    let si = top[i - 1] as i64 - i as i64;
    let mut den = 1.0;
    for j in 1..=d {
        if j != i {
            den *= (top[j - 1] as i64 - j as i64 - si) as f64;
        }
    }
    let ratio = weyl_dim(sigma, d)? as f64 / weyl_dim(&mu, d)? as f64;
    if d == 1 {
        return Ok(ratio * xs[0].powi(sigma.size() as i32));
    }
    let size = sigma.size();
    let mut total = 0.0;
    for_each_interlacing(&top, |second| {
        let mut num = 1.0;
        for j in 1..d {
            num *= (second[j - 1] as i64 - j as i64 - si) as f64;
        }
        if num == 0.0 {
            return;
        }
        let inner: usize = second.iter().sum();
        total += num * xs[d - 1].powi((size - inner) as i32) * branch_sum(second, &xs[..d - 1]);
    });
    Ok(ratio * total / den)
}

/// Leading-order fidelity for depolarized inputs:
/// `1 − (1/n)((d−1)/d) λ/(1−λ)²`.
pub fn asymptotic_fidelity_depolarizing(lambda: f64, d: usize, n: usize) -> Result<f64> {
    check_open_lambda(lambda)?;
    if n == 0 || d == 0 {
        return invalid("n and d must be positive");
    }
    let d = d as f64;
    Ok(1.0 - (1.0 / n as f64) * ((d - 1.0) / d) * lambda / (1.0 - lambda).powi(2))
}

/// Leading-order number of copies for infidelity `δ`:
/// `(1/δ)(1 − 1/d) λ/(1−λ)²`.
pub fn asymptotic_samples_depolarizing(delta: f64, lambda: f64, d: usize) -> Result<f64> {
    check_open_lambda(lambda)?;
    if !(delta > 0.0 && delta < 1.0) {
        return invalid(format!("target infidelity must be in (0,1), got {}", delta));
    }
    if d == 0 {
        return invalid("d must be positive");
    }
    Ok((1.0 / delta) * (1.0 - 1.0 / d as f64) * lambda / (1.0 - lambda).powi(2))
}

/// `Σ_{i<d} p_i/(p_d − p_i)²`, the generic-input infidelity constant.
pub fn generic_infidelity_constant(spectrum: &Spectrum) -> Result<f64> {
    spectrum.require_nondegenerate()?;
    let p = spectrum.probs();
    let pd = spectrum.principal();
    Ok(p[..p.len() - 1]
        .iter()
        .map(|&pi| pi / (pd - pi).powi(2))
        .sum())
}

/// Leading-order fidelity for a generic spectrum: `1 − (1/n) Σ p_i/(p_d − p_i)²`.
pub fn asymptotic_fidelity_generic(spectrum: &Spectrum, n: usize) -> Result<f64> {
    if n == 0 {
        return invalid("n must be positive");
    }
    Ok(1.0 - generic_infidelity_constant(spectrum)? / n as f64)
}

/// Leading-order copies for infidelity `δ`, generic spectrum.
pub fn asymptotic_samples_generic(delta: f64, spectrum: &Spectrum) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return invalid(format!("target infidelity must be in (0,1), got {}", delta));
    }
    Ok(generic_infidelity_constant(spectrum)? / delta)
}

fn check_open_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda < 1.0 {
        Ok(())
    } else {
        invalid(format!("formula singular or undefined at λ = {}", lambda))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tableaux::{enumerate_yds, majorization_compare, Majorization};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn yd(r: &[usize]) -> YoungDiagram {
        YoungDiagram::new(r).unwrap()
    }

    #[test]
    fn schur_examples() {
        let xs = [0.3, 1.7, 2.0];
        assert!((schur_eval(&yd(&[1]), &xs).unwrap() - 4.0).abs() < 1e-12);
        assert!((schur_eval(&yd(&[2, 1]), &[1.0, 1.0, 1.0]).unwrap() - 8.0).abs() < 1e-12);
        let (a, b) = (0.7, 1.3);
        let s2 = schur_eval(&yd(&[2]), &[a, b]).unwrap();
        assert!((s2 - (a * a + a * b + b * b)).abs() < 1e-12);
        assert!(schur_eval(&yd(&[1, 1, 1]), &[1.0, 2.0]).is_err());
    }

    #[test]
    fn normalized_schur_examples() {
        assert!((normalized_schur(&yd(&[1]), &[0.25; 4]).unwrap() - 0.25).abs() < 1e-12);
        assert!((normalized_schur(&yd(&[2, 1]), &[1.0; 3]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn depolarized_spectrum_examples() {
        assert_eq!(
            depolarized_spectrum(0.0, 3).unwrap().probs(),
            &[0.0, 0.0, 1.0]
        );
        let u = depolarized_spectrum(1.0, 4).unwrap();
        assert!(u.probs().iter().all(|&p| (p - 0.25).abs() < 1e-15));
        assert_eq!(depolarized_spectrum(0.5, 2).unwrap().probs(), &[0.25, 0.75]);
        assert!(depolarized_spectrum(1.5, 2).is_err());
    }

    #[test]
    fn asymptotic_examples() {
        assert!((asymptotic_fidelity_depolarizing(0.5, 2, 10).unwrap() - 0.9).abs() < 1e-12);
        assert!(asymptotic_fidelity_depolarizing(1e-9, 3, 1).unwrap() > 1.0 - 1e-8);
        assert!((asymptotic_samples_depolarizing(0.01, 0.5, 4).unwrap() - 150.0).abs() < 1e-9);
        assert!(asymptotic_fidelity_depolarizing(0.0, 2, 3).is_err());
        assert!(asymptotic_fidelity_depolarizing(1.0, 2, 3).is_err());

        let s = Spectrum::new(vec![0.1, 0.3, 0.6]).unwrap();
        let f = asymptotic_fidelity_generic(&s, 50).unwrap();
        assert!((f - (1.0 - (0.4 + 0.3 / 0.09) / 50.0)).abs() < 1e-12);
        assert!((1.0 - f - 0.0747).abs() < 5e-5);
        let pure = Spectrum::new(vec![0.0, 0.0, 1.0]).unwrap();
        assert_eq!(asymptotic_fidelity_generic(&pure, 7).unwrap(), 1.0);
        let degen = Spectrum::new(vec![0.2, 0.4, 0.4]).unwrap();
        assert!(matches!(
            asymptotic_fidelity_generic(&degen, 5),
            Err(QpaError::Degenerate { .. })
        ));
    }

    #[test]
    fn generic_reduces_to_depolarizing() {
        for &(lam, d) in &[(0.3, 2usize), (0.5, 3), (0.7, 4)] {
            let s = depolarized_spectrum(lam, d).unwrap();
            for n in [3usize, 10, 40] {
                let g = asymptotic_fidelity_generic(&s, n).unwrap();
                let dep = asymptotic_fidelity_depolarizing(lam, d, n).unwrap();
                assert!((g - dep).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn symmetric_recursion_holds() {
        // s_[k](a..a,b) = b s_[k-1] + C(k+d-2, d-2) a^k
        for d in 2..=4usize {
            let (a, b) = (0.15, 0.55);
            let mut xs = vec![a; d - 1];
            xs.push(b);
            for k in 1..=8usize {
                let lhs = schur_eval(&yd(&[k]), &xs).unwrap();
                let prev = schur_eval(&YoungDiagram::new(&[k - 1]).unwrap(), &xs).unwrap();
                let binom = binomial(k + d - 2, d - 2) as f64;
                assert!((lhs - (b * prev + binom * a.powi(k as i32))).abs() < 1e-13 * lhs.max(1.0));
            }
        }
    }

    fn binomial(n: usize, k: usize) -> u64 {
        (0..k).fold(1u64, |acc, j| acc * (n - j) as u64 / (j as u64 + 1))
    }

    #[test]
    fn closed_form_pure_symmetric_branch() {
        for d in 1..=4usize {
            let pure = depolarized_spectrum(0.0, d).unwrap();
            for n in 1..=5 {
                let f = closed_form_branch_fidelity(&yd(&[n]), 1, &pure, d).unwrap();
                assert!((f - 1.0).abs() < 1e-12, "d={} n={} f={}", d, n, f);
            }
        }
    }

    #[test]
    fn closed_form_rejects_infeasible() {
        let s = depolarized_spectrum(0.3, 3).unwrap();
        assert!(closed_form_branch_fidelity(&yd(&[2, 2]), 1, &s, 3).is_err());
        assert!(closed_form_branch_fidelity(&yd(&[2, 2]), 3, &s, 3).is_err());
    }

    #[test]
    fn schur_order_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..=6 {
            let yds = enumerate_yds(n, 4);
            for _ in 0..20 {
                let d = rng.gen_range(2..=4usize);
                let xs: Vec<f64> = (0..d).map(|_| rng.gen_range(0.01..1.0)).collect();
                for a in yds.iter().filter(|y| y.depth() <= d) {
                    for b in yds.iter().filter(|y| y.depth() <= d) {
                        if majorization_compare(a, b).unwrap() == Majorization::Less {
                            let sa = normalized_schur(a, &xs).unwrap();
                            let sb = normalized_schur(b, &xs).unwrap();
                            assert!(sa <= sb * (1.0 + 1e-12), "{} {} {:?}", a, b, xs);
                        }
                    }
                }
            }
        }
    }
}
