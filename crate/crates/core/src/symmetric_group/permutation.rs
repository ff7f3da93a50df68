use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A permutation of `{1..n}`, stored 0-based internally.
///
/// Composition follows the usual right-to-left rule: `g.compose(&h)` is
/// `g∘h`, i.e. `(g∘h)(k) = g(h(k))`, so `h` acts first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// From 1-based images `[π(1), …, π(n)]`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in images {
            if i == 0 || i > n || seen[i - 1] {
                return invalid(format!("not a permutation of 1..{}: {:?}", n, images));
            }
            seen[i - 1] = true;
        }
        Ok(Permutation {
            images: images.iter().map(|&i| i - 1).collect(),
        })
    }

    /// From disjoint cycles in 1-based notation; `(1 2 3)` maps 1→2→3→1.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cyc in cycles {
            for (k, &a) in cyc.iter().enumerate() {
                if a == 0 || a > n || touched[a - 1] {
                    return invalid(format!("bad cycle {:?} for n = {}", cyc, n));
                }
                touched[a - 1] = true;
                let b = cyc[(k + 1) % cyc.len()];
                if b == 0 || b > n {
                    return invalid(format!("bad cycle {:?} for n = {}", cyc, n));
                }
                images[a - 1] = b - 1;
            }
        }
        Ok(Permutation { images })
    }

    /// The adjacent transposition `(k, k+1)`, 1-based `k`.
    pub fn adjacent(n: usize, k: usize) -> Self {
        assert!(
            k >= 1 && k < n,
            "adjacent transposition ({}, {}) outside S_{}",
            k,
            k + 1,
            n
        );
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(k - 1, k);
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 1-based images.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i + 1).collect()
    }

    /// `π(k)` for 1-based `k`.
    pub fn apply(&self, k: usize) -> usize {
        self.images[k - 1] + 1
    }

    pub(crate) fn image0(&self, k: usize) -> usize {
        self.images[k]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&k| self.images[k]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0usize; self.images.len()];
        for (k, &v) in self.images.iter().enumerate() {
            inv[v] = k;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &v)| k == v)
    }

    pub fn sign(&self) -> i32 {
        let inversions = self.inversions();
        if inversions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn inversions(&self) -> usize {
        let n = self.images.len();
        let mut c = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.images[i] > self.images[j] {
                    c += 1;
                }
            }
        }
        c
    }

    /// Reduced word `[k_1, …, k_m]` with `self = s_{k_1} ∘ … ∘ s_{k_m}`,
    /// `s_k = (k, k+1)`.
    pub fn reduced_word(&self) -> Vec<usize> {
        let n = self.degree();
        let mut g = self.clone();
        let mut rev = Vec::new();
        while !g.is_identity() {
            let k = (0..n - 1)
                .find(|&k| g.images[k] > g.images[k + 1])
                .expect("non-identity permutation has a descent");
            // g = (g ∘ s_k) ∘ s_k
            g.images.swap(k, k + 1);
            rev.push(k + 1);
        }
        rev.reverse();
        rev
    }

    /// All permutations of degree `n` in lexicographic order of images.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut cur: Vec<usize> = (0..n).collect();
        let mut out = vec![Permutation {
            images: cur.clone(),
        }];
        // next-permutation iteration
        loop {
            let Some(i) = (0..n.saturating_sub(1))
                .rev()
                .find(|&i| cur[i] < cur[i + 1])
            else {
                return out;
            };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
            out.push(Permutation {
                images: cur.clone(),
            });
        }
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation, e.g. `(123)`; the identity prints as `e`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut any = false;
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut k = start;
            let mut first = true;
            while !seen[k] {
                seen[k] = true;
                if !first && n > 9 {
                    write!(f, " ")?;
                }
                write!(f, "{}", k + 1)?;
                first = false;
                k = self.images[k];
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "e")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_and_composition() {
        let c123 = Permutation::from_cycles(3, &[&[1, 2, 3]]).unwrap();
        assert_eq!(c123.images(), vec![2, 3, 1]);
        let s12 = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
        let s23 = Permutation::from_cycles(3, &[&[2, 3]]).unwrap();
        // (12)(23) = (123) and (23)(12) = (132) under right-to-left composition
        assert_eq!(s12.compose(&s23), c123);
        assert_eq!(s23.compose(&s12), c123.inverse());
        assert_eq!(format!("{}", c123), "(123)");
        assert_eq!(format!("{}", Permutation::identity(4)), "e");
    }

    #[test]
    fn reduced_words_rebuild_permutation() {
        for p in Permutation::all(5) {
            let w = p.reduced_word();
            assert_eq!(w.len(), p.inversions());
            let rebuilt = w.iter().fold(Permutation::identity(5), |acc, &k| {
                acc.compose(&Permutation::adjacent(5, k))
            });
            assert_eq!(rebuilt, p);
        }
    }

    #[test]
    fn enumeration_and_sign() {
        let all = Permutation::all(4);
        assert_eq!(all.len(), 24);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all.iter().map(|p| p.sign()).sum::<i32>(), 0);
        assert!(Permutation::from_images(&[1, 1, 2]).is_err());
        assert!(Permutation::from_cycles(3, &[&[1, 2], &[2, 3]]).is_err());
    }
}
