//! Young's orthogonal form and the matrix units of the group algebra.
//!
//! For the adjacent transposition `s_k = (k, k+1)` and a standard tableau `t`,
//! with axial distance `r = c(k+1) − c(k)` (contents of the boxes holding
//! `k+1` and `k`):
//!
//! `A(s_k) v_t = (1/r) v_t + sqrt(1 − 1/r²) v_{s_k t}`,
//!
//! where the second term is absent when swapping `k, k+1` in `t` is not
//! standard. `A(g)` for general `g` is the product along a reduced word, which
//! makes `A` a homomorphism: `A(g∘h) = A(g) A(h)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;

use crate::error::{invalid, Result};
use crate::limits::factorial;
use crate::symmetric_group::{GroupAlgebraElement, Permutation};
use crate::tableaux::{enumerate_syt, enumerate_yds, StandardTableau, YoungDiagram};
use crate::C64;

/// Largest `n` for which the full group algebra is tabulated.
pub const MAX_GROUP_DEGREE: usize = 6;

/// YOR matrices of one irrep for every element of `S_n`.
#[derive(Debug)]
pub struct IrrepTable {
    pub shape: YoungDiagram,
    pub tableaux: Vec<StandardTableau>,
    index: HashMap<StandardTableau, usize>,
    /// Indexed like [`SnData::perms`].
    pub mats: Vec<DMatrix<f64>>,
}

impl IrrepTable {
    pub fn dim(&self) -> usize {
        self.tableaux.len()
    }

    pub fn tableau_index(&self, t: &StandardTableau) -> Result<usize> {
        self.index.get(t).copied().ok_or_else(|| {
            crate::QpaError::InvalidInput(format!(
                "tableau {} does not have shape {}",
                t, self.shape
            ))
        })
    }

    /// Coefficients `(g/n!) A_st(g)` of the matrix unit `O_st`, indexed by
    /// permutation index.
    pub fn matrix_unit_coeffs(&self, s: usize, t: usize) -> Vec<f64> {
        let nf = self.mats.len() as f64;
        let w = self.dim() as f64 / nf;
        self.mats.iter().map(|a| w * a[(s, t)]).collect()
    }
}

/// Permutations of `S_n` and the YOR tables of all its irreps.
#[derive(Debug)]
pub struct SnData {
    pub n: usize,
    /// All permutations, lexicographic order of images.
    pub perms: Vec<Permutation>,
    perm_index: HashMap<Permutation, usize>,
    /// One table per partition of `n`, lexicographically decreasing.
    pub irreps: Vec<IrrepTable>,
}

impl SnData {
    fn build(n: usize) -> SnData {
        let perms = Permutation::all(n);
        let perm_index: HashMap<Permutation, usize> = perms
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        // Order by length so that g ∘ s_k (one shorter) is always ready.
        let mut by_len: Vec<usize> = (0..perms.len()).collect();
        by_len.sort_by_key(|&i| perms[i].inversions());
        let irreps = enumerate_yds(n, n)
            .into_iter()
            .map(|shape| {
                let tableaux = enumerate_syt(&shape);
                let index: HashMap<StandardTableau, usize> = tableaux
                    .iter()
                    .enumerate()
                    .map(|(i, t)| (t.clone(), i))
                    .collect();
                let gens: Vec<DMatrix<f64>> =
                    (1..n).map(|k| generator(&tableaux, &index, k)).collect();
                let dim = tableaux.len();
                let mut mats = vec![DMatrix::<f64>::zeros(0, 0); perms.len()];
                for &gi in &by_len {
                    let g = &perms[gi];
                    if g.is_identity() {
                        mats[gi] = DMatrix::identity(dim, dim);
                        continue;
                    }
                    let word = g.reduced_word();
                    let k = *word.last().unwrap();
                    let shorter = g.compose(&Permutation::adjacent(n, k));
                    mats[gi] = &mats[perm_index[&shorter]] * &gens[k - 1];
                }
                IrrepTable {
                    shape,
                    tableaux,
                    index,
                    mats,
                }
            })
            .collect();
        SnData {
            n,
            perms,
            perm_index,
            irreps,
        }
    }

    pub fn perm_index(&self, g: &Permutation) -> usize {
        self.perm_index[g]
    }

    pub fn irrep(&self, shape: &YoungDiagram) -> Result<&IrrepTable> {
        self.irreps
            .iter()
            .find(|t| &t.shape == shape)
            .ok_or_else(|| {
                crate::QpaError::InvalidInput(format!("{} is not a partition of {}", shape, self.n))
            })
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }
}

fn generator(
    tableaux: &[StandardTableau],
    index: &HashMap<StandardTableau, usize>,
    k: usize,
) -> DMatrix<f64> {
    let dim = tableaux.len();
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    for (j, t) in tableaux.iter().enumerate() {
        let r = (t.content(k + 1) - t.content(k)) as f64;
        m[(j, j)] = 1.0 / r;
        if let Some(st) = t.swap_adjacent(k) {
            m[(index[&st], j)] = (1.0 - 1.0 / (r * r)).sqrt();
        }
    }
    m
}

/// Shared, lazily built tables for `S_n`, `1 ≤ n ≤ MAX_GROUP_DEGREE`.
pub fn sn_data(n: usize) -> Result<Arc<SnData>> {
    if n == 0 || n > MAX_GROUP_DEGREE {
        return invalid(format!(
            "group-algebra work is limited to 1 ≤ n ≤ {} (got n = {})",
            MAX_GROUP_DEGREE, n
        ));
    }
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<SnData>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(d) = cache.lock().unwrap().get(&n) {
        return Ok(d.clone());
    }
    // Build outside the lock; a racing duplicate build is harmless.
    let built = Arc::new(SnData::build(n));
    let mut guard = cache.lock().unwrap();
    Ok(guard.entry(n).or_insert(built).clone())
}

/// Young orthogonal representation matrix `A_yd(π)`.
pub fn yor_matrix(yd: &YoungDiagram, pi: &Permutation) -> Result<DMatrix<f64>> {
    if yd.size() != pi.degree() {
        return invalid(format!("{} is not a partition of {}", yd, pi.degree()));
    }
    let data = sn_data(pi.degree())?;
    Ok(data.irrep(yd)?.mats[data.perm_index(pi)].clone())
}

/// Matrix unit `O_st = (g/n!) Σ_g A_st(g) g` (YOR is real, so no conjugate).
pub fn matrix_unit(
    yd: &YoungDiagram,
    s: &StandardTableau,
    t: &StandardTableau,
) -> Result<GroupAlgebraElement> {
    if &s.shape() != yd || &t.shape() != yd {
        return invalid(format!(
            "tableaux {} and {} must both have shape {}",
            s, t, yd
        ));
    }
    let data = sn_data(yd.size())?;
    let irrep = data.irrep(yd)?;
    let coeffs = irrep.matrix_unit_coeffs(irrep.tableau_index(s)?, irrep.tableau_index(t)?);
    Ok(GroupAlgebraElement::from_terms(
        yd.size(),
        data.perms
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| *c != 0.0)
            .map(|(g, c)| (g.clone(), C64::new(c, 0.0))),
    ))
}

/// `Σ_g A_st(g)² = n!/g`, the Schur-orthogonality norm of a YOR entry.
pub fn matrix_unit_norm_sq(yd: &YoungDiagram) -> Result<f64> {
    let g = crate::tableaux::specht_dim(yd)? as f64;
    Ok(factorial(yd.size()) as f64 / g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetric_group::GroupAlgebraElement;
    use crate::tableaux::row_ordered;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn yd(r: &[usize]) -> YoungDiagram {
        YoungDiagram::new(r).unwrap()
    }

    #[test]
    fn yor_examples() {
        let s12 = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
        let a = yor_matrix(&yd(&[2, 1]), &s12).unwrap();
        assert_eq!(a, DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]));
        for p in Permutation::all(4) {
            assert_eq!(yor_matrix(&yd(&[4]), &p).unwrap()[(0, 0)], 1.0);
            assert_eq!(
                yor_matrix(&yd(&[1, 1, 1, 1]), &p).unwrap()[(0, 0)],
                p.sign() as f64
            );
        }
    }

    #[test]
    fn yor_homomorphism_and_orthogonality() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 2..=5 {
            let data = sn_data(n).unwrap();
            for irrep in &data.irreps {
                for _ in 0..200 / (data.irreps.len()) + 1 {
                    let g = &data.perms[rng.gen_range(0..data.order())];
                    let h = &data.perms[rng.gen_range(0..data.order())];
                    let ag = &irrep.mats[data.perm_index(g)];
                    let ah = &irrep.mats[data.perm_index(h)];
                    let agh = &irrep.mats[data.perm_index(&g.compose(h))];
                    assert!((ag * ah - agh).norm() < 1e-12);
                    let dim = irrep.dim();
                    assert!(
                        (ag.transpose() * ag - DMatrix::<f64>::identity(dim, dim)).norm() < 1e-12
                    );
                }
            }
        }
    }

    #[test]
    fn symmetrizer_matrix_unit() {
        let y = yd(&[2]);
        let t = row_ordered(&y);
        let o = matrix_unit(&y, &t, &t).unwrap();
        let half = C64::new(0.5, 0.0);
        let expect = GroupAlgebraElement::from_terms(
            2,
            [
                (Permutation::identity(2), half),
                (Permutation::from_cycles(2, &[&[1, 2]]).unwrap(), half),
            ],
        );
        assert!(o.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn transversality_and_conjugation() {
        for n in 1..=4 {
            let data = sn_data(n).unwrap();
            let units: Vec<(usize, usize, usize, GroupAlgebraElement)> = data
                .irreps
                .iter()
                .enumerate()
                .flat_map(|(li, irrep)| {
                    let mut v = Vec::new();
                    for s in 0..irrep.dim() {
                        for t in 0..irrep.dim() {
                            let o =
                                matrix_unit(&irrep.shape, &irrep.tableaux[s], &irrep.tableaux[t])
                                    .unwrap();
                            v.push((li, s, t, o));
                        }
                    }
                    v
                })
                .collect();
            for (l1, s, t, o1) in &units {
                let adj = o1.adjoint();
                let (_, _, _, ots) = units
                    .iter()
                    .find(|(l, a, b, _)| l == l1 && a == t && b == s)
                    .unwrap();
                assert!(adj.max_abs_diff(ots) < 1e-13);
                for (l2, u, v, o2) in &units {
                    let prod = o1 * o2;
                    if l1 == l2 && t == u {
                        let (_, _, _, osv) = units
                            .iter()
                            .find(|(l, a, b, _)| l == l1 && a == s && b == v)
                            .unwrap();
                        assert!(prod.max_abs_diff(osv) < 1e-12);
                    } else {
                        assert!(prod.norm() < 1e-12);
                    }
                }
            }
            // completeness: Σ_t O_tt = e
            let mut sum = GroupAlgebraElement::zero(n);
            for (_, s, t, o) in &units {
                if s == t {
                    sum = &sum + o;
                }
            }
            assert!(sum.max_abs_diff(&GroupAlgebraElement::identity(n)) < 1e-12);
        }
    }

    #[test]
    fn orthonormality_norm() {
        // Σ_g A_st(g) A_uv(g) = δ_su δ_tv n!/g, so the coefficients of O_st have
        // squared norm g/n! and distinct units are orthogonal.
        let data = sn_data(4).unwrap();
        for irrep in &data.irreps {
            let g = irrep.dim() as f64;
            assert!((matrix_unit_norm_sq(&irrep.shape).unwrap() - 24.0 / g).abs() < 1e-12);
            for s in 0..irrep.dim() {
                for t in 0..irrep.dim() {
                    let a = irrep.matrix_unit_coeffs(s, t);
                    let sq: f64 = a.iter().map(|x| x * x).sum();
                    assert!((sq - g / 24.0).abs() < 1e-12);
                    let b = irrep.matrix_unit_coeffs(t, s);
                    if s != t {
                        assert!(a.iter().zip(&b).map(|(x, y)| x * y).sum::<f64>().abs() < 1e-12);
                    }
                }
            }
        }
    }

    /// Young symmetrizer of `t` restricted to `S_k`: row symmetrizer times
    /// column antisymmetrizer.
    fn young_symmetrizer(t: &StandardTableau, n: usize) -> GroupAlgebraElement {
        let rows: Vec<Vec<usize>> = t.rows().to_vec();
        let shape = t.shape();
        let conj = shape.conjugate();
        let cols: Vec<Vec<usize>> = (0..conj.rows().len())
            .map(|c| rows.iter().filter(|r| r.len() > c).map(|r| r[c]).collect())
            .collect();
        let group_of = |blocks: &[Vec<usize>], signed: bool| {
            let mut e = GroupAlgebraElement::identity(n);
            for b in blocks {
                let mut s = GroupAlgebraElement::zero(n);
                let k = b.len();
                for p in Permutation::all(k) {
                    let mut images: Vec<usize> = (1..=n).collect();
                    for (i, &x) in b.iter().enumerate() {
                        images[x - 1] = b[p.apply(i + 1) - 1];
                    }
                    let g = Permutation::from_images(&images).unwrap();
                    let c = if signed { p.sign() as f64 } else { 1.0 };
                    s = &s + &GroupAlgebraElement::basis(g, C64::new(c, 0.0));
                }
                e = &e * &s;
            }
            e
        };
        &group_of(&rows, false) * &group_of(&cols, true)
    }

    fn restrict(t: &StandardTableau, k: usize) -> StandardTableau {
        let rows: Vec<Vec<usize>> = t
            .rows()
            .iter()
            .map(|r| r.iter().copied().filter(|&e| e <= k).collect::<Vec<_>>())
            .filter(|r| !r.is_empty())
            .collect();
        StandardTableau::new(rows).unwrap()
    }

    #[test]
    fn thrall_recursion_reproduces_idempotents() {
        for n in 2..=4 {
            for y in enumerate_yds(n, n) {
                for t in enumerate_syt(&y) {
                    let mut o = GroupAlgebraElement::identity(n);
                    for k in 2..=n {
                        let tk = restrict(&t, k);
                        let x = &(&o * &young_symmetrizer(&tk, n)) * &o;
                        let x2 = &x * &x;
                        // x² = c·x; recover c from the largest coefficient
                        let (g, cx) = x
                            .terms()
                            .iter()
                            .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
                            .unwrap();
                        let c = x2.coeff(g) / cx;
                        o = x.scale(C64::new(1.0, 0.0) / c);
                    }
                    let expect = matrix_unit(&y, &t, &t).unwrap();
                    assert!(o.max_abs_diff(&expect) < 1e-10, "tableau {}", t);
                }
            }
        }
    }
}
