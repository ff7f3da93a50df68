//! Young diagrams, standard Young tableaux and Gel'fand–Tsetlin patterns.
//!
//! Diagrams are stored without trailing zeros. Anything that needs a fixed length
//! (Weyl dimension, GT patterns, removal rules) pads with zeros to the local
//! dimension `d` on demand. Row indices in the public API are 1-based, matching
//! the usual "row i" language; boxes are addressed top-to-bottom, then
//! left-to-right.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, QpaError, Result};

/// An integer partition, rows weakly decreasing and strictly positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct YoungDiagram {
    rows: Vec<usize>,
}

impl YoungDiagram {
    /// Builds a diagram, dropping trailing zeros. Rejects increasing rows.
    pub fn new(rows: &[usize]) -> Result<Self> {
        let mut rows = rows.to_vec();
        while rows.last() == Some(&0) {
            rows.pop();
        }
        if rows.contains(&0) {
            return invalid(format!("zero row inside diagram {:?}", rows));
        }
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return invalid(format!("rows must be weakly decreasing: {:?}", rows));
        }
        Ok(YoungDiagram { rows })
    }

    /// The empty diagram (zero boxes).
    pub fn empty() -> Self {
        YoungDiagram { rows: Vec::new() }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    /// Number of boxes.
    pub fn size(&self) -> usize {
        self.rows.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.rows.len()
    }

    /// Length of row `i` (1-based); zero past the depth.
    pub fn row(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.rows.get(i - 1).copied().unwrap_or(0)
    }

    /// Rows zero-padded to length `d`.
    pub fn padded(&self, d: usize) -> Result<Vec<usize>> {
        self.check_depth(d)?;
        let mut p = self.rows.clone();
        p.resize(d, 0);
        Ok(p)
    }

    pub(crate) fn check_depth(&self, d: usize) -> Result<()> {
        if self.depth() > d {
            invalid(format!(
                "diagram {} has depth {} > local dimension {}",
                self,
                self.depth(),
                d
            ))
        } else {
            Ok(())
        }
    }

    /// Conjugate (transposed) diagram.
    pub fn conjugate(&self) -> YoungDiagram {
        let width = self.rows.first().copied().unwrap_or(0);
        let rows = (1..=width)
            .map(|c| self.rows.iter().filter(|&&r| r >= c).count())
            .collect();
        YoungDiagram { rows }
    }

    /// Diagram with one box appended to row `i` (1-based), if the result is valid.
    pub fn add_box(&self, i: usize) -> Result<YoungDiagram> {
        if i == 0 || i > self.depth() + 1 {
            return invalid(format!("cannot add a box to row {} of {}", i, self));
        }
        if i > 1 && self.row(i) + 1 > self.row(i - 1) {
            return invalid(format!("cannot add a box to row {} of {}", i, self));
        }
        let mut rows = self.rows.clone();
        if i == rows.len() + 1 {
            rows.push(1);
        } else {
            rows[i - 1] += 1;
        }
        Ok(YoungDiagram { rows })
    }
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.rows.iter().map(|r| r.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// All partitions of `n` with at most `d` rows, lexicographically decreasing.
///
/// `enumerate_yds(4, 2)` gives `[4], [3,1], [2,2]`.
pub fn enumerate_yds(n: usize, d: usize) -> Vec<YoungDiagram> {
    fn rec(
        left: usize,
        max_part: usize,
        rows_left: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<YoungDiagram>,
    ) {
        if left == 0 {
            out.push(YoungDiagram { rows: cur.clone() });
            return;
        }
        if rows_left == 0 {
            return;
        }
        for part in (1..=max_part.min(left)).rev() {
            cur.push(part);
            rec(left - part, part, rows_left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(YoungDiagram::empty());
        return out;
    }
    rec(n, n, d, &mut Vec::new(), &mut out);
    out
}

/// Dimension of the GL(d) irrep labelled by `yd` (Weyl dimension formula).
pub fn weyl_dim(yd: &YoungDiagram, d: usize) -> Result<u128> {
    let lam = yd.padded(d)?;
    // Accumulate the product as a reduced fraction so intermediate values stay small.
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..d {
        for j in i + 1..d {
            let a = (lam[i] - lam[j] + j - i) as u128;
            let b = (j - i) as u128;
            num = num
                .checked_mul(a)
                .ok_or_else(|| QpaError::Overflow("weyl_dim".into()))?;
            den = den
                .checked_mul(b)
                .ok_or_else(|| QpaError::Overflow("weyl_dim".into()))?;
            let g = gcd(num, den);
            num /= g;
            den /= g;
        }
    }
    debug_assert_eq!(den, 1);
    Ok(num / den)
}

/// Number of standard tableaux of shape `yd` (hook-length formula).
pub fn specht_dim(yd: &YoungDiagram) -> Result<u128> {
    let conj = yd.conjugate();
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    let mut k: u128 = 0;
    for (r, &len) in yd.rows.iter().enumerate() {
        for c in 0..len {
            k += 1;
            let hook = (len - c - 1) + (conj.rows[c] - r - 1) + 1;
            num = num
                .checked_mul(k)
                .ok_or_else(|| QpaError::Overflow("specht_dim".into()))?;
            den = den
                .checked_mul(hook as u128)
                .ok_or_else(|| QpaError::Overflow("specht_dim".into()))?;
            let g = gcd(num, den);
            num /= g;
            den /= g;
        }
    }
    debug_assert_eq!(den, 1);
    Ok(num / den)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

/// A standard filling of a Young diagram with `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StandardTableau {
    rows: Vec<Vec<usize>>,
}

impl StandardTableau {
    /// Validates rows of entries; entries must be a permutation of `1..=n`
    /// increasing along rows and down columns.
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let lens: Vec<usize> = rows.iter().map(|r| r.len()).collect();
        YoungDiagram::new(&lens)?;
        if rows.iter().any(|r| r.is_empty()) {
            return invalid("empty tableau row");
        }
        let n: usize = lens.iter().sum();
        let mut seen = vec![false; n + 1];
        for &e in rows.iter().flatten() {
            if e == 0 || e > n || seen[e] {
                return invalid(format!(
                    "entries must be a permutation of 1..{}: {:?}",
                    n, rows
                ));
            }
            seen[e] = true;
        }
        for (r, row) in rows.iter().enumerate() {
            for c in 0..row.len() {
                if c + 1 < row.len() && row[c] >= row[c + 1] {
                    return invalid(format!("row {} not increasing: {:?}", r + 1, rows));
                }
                if r > 0 && rows[r - 1][c] >= row[c] {
                    return invalid(format!("column {} not increasing: {:?}", c + 1, rows));
                }
            }
        }
        Ok(StandardTableau { rows })
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn shape(&self) -> YoungDiagram {
        YoungDiagram {
            rows: self.rows.iter().map(|r| r.len()).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    /// Row-major reading word.
    pub fn filling(&self) -> Vec<usize> {
        self.rows.iter().flatten().copied().collect()
    }

    /// (row, column), 0-based, of entry `k`.
    pub fn position(&self, k: usize) -> Option<(usize, usize)> {
        for (r, row) in self.rows.iter().enumerate() {
            if let Some(c) = row.iter().position(|&e| e == k) {
                return Some((r, c));
            }
        }
        None
    }

    /// Content (column − row) of the box holding `k`.
    pub fn content(&self, k: usize) -> i64 {
        let (r, c) = self.position(k).expect("entry in tableau");
        c as i64 - r as i64
    }

    /// 1-based row of entry `k`.
    pub fn row_of(&self, k: usize) -> usize {
        self.position(k).expect("entry in tableau").0 + 1
    }

    /// The tableau with entry `n` removed (the parent in the Young lattice).
    pub fn parent(&self) -> StandardTableau {
        let n = self.size();
        let mut rows = self.rows.clone();
        for row in rows.iter_mut() {
            row.retain(|&e| e != n);
        }
        rows.retain(|r| !r.is_empty());
        StandardTableau { rows }
    }

    /// Appends `n+1` at the end of row `i` (1-based).
    pub fn extend(&self, i: usize) -> Result<StandardTableau> {
        let shape = self.shape().add_box(i)?;
        let mut rows = self.rows.clone();
        let n = self.size();
        if i > rows.len() {
            rows.push(vec![n + 1]);
        } else {
            rows[i - 1].push(n + 1);
        }
        debug_assert_eq!(shape.rows.len(), rows.len());
        Ok(StandardTableau { rows })
    }

    /// Swaps entries `k` and `k+1`; `None` if the result is not standard.
    pub fn swap_adjacent(&self, k: usize) -> Option<StandardTableau> {
        let rows: Vec<Vec<usize>> = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&e| {
                        if e == k {
                            k + 1
                        } else if e == k + 1 {
                            k
                        } else {
                            e
                        }
                    })
                    .collect()
            })
            .collect();
        StandardTableau::new(rows).ok()
    }
}

impl fmt::Display for StandardTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|e| e.to_string()).collect::<String>())
            .collect();
        write!(f, "[{}]", parts.join(";"))
    }
}

/// All standard tableaux of shape `yd`, ordered lexicographically by their
/// row-major reading word (so `[12;3]` precedes `[13;2]`).
pub fn enumerate_syt(yd: &YoungDiagram) -> Vec<StandardTableau> {
    let n = yd.size();
    let mut out = Vec::new();
    if n == 0 {
        out.push(StandardTableau { rows: Vec::new() });
        return out;
    }
    // Place n, n-1, ..., 1 into removable corners; collect then sort.
    fn rec(
        shape: &mut Vec<usize>,
        k: usize,
        grid: &mut Vec<Vec<usize>>,
        out: &mut Vec<StandardTableau>,
    ) {
        if k == 0 {
            out.push(StandardTableau { rows: grid.clone() });
            return;
        }
        for r in 0..shape.len() {
            let len = shape[r];
            if len == 0 {
                continue;
            }
            let below = if r + 1 < shape.len() { shape[r + 1] } else { 0 };
            if len > below {
                grid[r][len - 1] = k;
                shape[r] -= 1;
                rec(shape, k - 1, grid, out);
                shape[r] += 1;
            }
        }
    }
    let mut grid: Vec<Vec<usize>> = yd.rows.iter().map(|&l| vec![0; l]).collect();
    let mut shape = yd.rows.clone();
    rec(&mut shape, n, &mut grid, &mut out);
    out.sort_by_key(|t| t.filling());
    out
}

/// The tableau filled column by column, left to right.
pub fn column_ordered(yd: &YoungDiagram) -> StandardTableau {
    let mut rows: Vec<Vec<usize>> = yd.rows.iter().map(|&l| Vec::with_capacity(l)).collect();
    let conj = yd.conjugate();
    let mut k = 0;
    for &height in conj.rows.iter() {
        for row in rows.iter_mut().take(height) {
            k += 1;
            row.push(k);
        }
    }
    StandardTableau { rows }
}

/// The row-major (one-row-at-a-time) filling.
pub fn row_ordered(yd: &YoungDiagram) -> StandardTableau {
    let mut k = 0;
    let rows = yd
        .rows
        .iter()
        .map(|&l| {
            (0..l)
                .map(|_| {
                    k += 1;
                    k
                })
                .collect()
        })
        .collect();
    StandardTableau { rows }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Majorization {
    Less,
    Greater,
    Equal,
    Incomparable,
}

/// Dominance order on partitions of the same size.
pub fn majorization_compare(a: &YoungDiagram, b: &YoungDiagram) -> Result<Majorization> {
    if a.size() != b.size() {
        return invalid(format!("majorization needs equal sizes: {} vs {}", a, b));
    }
    let len = a.depth().max(b.depth());
    let (mut sa, mut sb) = (0usize, 0usize);
    let (mut le, mut ge) = (true, true);
    for i in 1..=len {
        sa += a.row(i);
        sb += b.row(i);
        match sa.cmp(&sb) {
            Ordering::Less => ge = false,
            Ordering::Greater => le = false,
            Ordering::Equal => {}
        }
    }
    Ok(match (le, ge) {
        (true, true) => Majorization::Equal,
        (true, false) => Majorization::Less,
        (false, true) => Majorization::Greater,
        (false, false) => Majorization::Incomparable,
    })
}

/// Rows (1-based) whose last box can be removed leaving a valid diagram.
pub fn feasible_rows(yd: &YoungDiagram, d: usize) -> Result<Vec<usize>> {
    yd.check_depth(d)?;
    Ok((1..=yd.depth())
        .filter(|&i| yd.row(i) > yd.row(i + 1))
        .collect())
}

/// Smallest feasible row; `None` for the empty diagram.
pub fn smallest_feasible_row(yd: &YoungDiagram) -> Option<usize> {
    (1..=yd.depth()).find(|&i| yd.row(i) > yd.row(i + 1))
}

/// Removes the last box of row `i` (1-based).
pub fn remove_box(yd: &YoungDiagram, i: usize) -> Result<YoungDiagram> {
    if i == 0 || i > yd.depth() || yd.row(i) <= yd.row(i + 1) {
        return invalid(format!("row {} of {} is not feasible", i, yd));
    }
    let mut rows = yd.rows.clone();
    rows[i - 1] -= 1;
    YoungDiagram::new(&rows)
}

/// Gel'fand–Tsetlin pattern. `rows[0]` is the padded diagram (length d), each
/// following row is one shorter; the last row has length 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GtPattern {
    rows: Vec<Vec<usize>>,
}

impl GtPattern {
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let d = rows.len();
        for (k, row) in rows.iter().enumerate() {
            if row.len() != d - k {
                return invalid("GT rows must have lengths d, d-1, ..., 1");
            }
        }
        for k in 1..d {
            for j in 0..rows[k].len() {
                let (hi, lo) = (rows[k - 1][j], rows[k - 1][j + 1]);
                if rows[k][j] > hi || rows[k][j] < lo {
                    return invalid(format!("betweenness violated at row {}: {:?}", k, rows));
                }
            }
        }
        if rows
            .first()
            .is_some_and(|r| r.windows(2).any(|w| w[0] < w[1]))
        {
            return invalid("top row must be weakly decreasing");
        }
        Ok(GtPattern { rows })
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// Row of length `k` (1 ≤ k ≤ d).
    pub fn row_of_length(&self, k: usize) -> &[usize] {
        let d = self.rows.len();
        &self.rows[d - k]
    }

    /// Weight: entry `k` (1-based) occurs `w[k-1]` times in the matching
    /// semistandard tableau.
    pub fn weight(&self) -> Vec<usize> {
        let d = self.rows.len();
        let mut prev = 0usize;
        (1..=d)
            .map(|k| {
                let s: usize = self.row_of_length(k).iter().sum();
                let w = s - prev;
                prev = s;
                w
            })
            .collect()
    }
}

/// All GT patterns with top row `yd` padded to `d`.
pub fn enumerate_gt(yd: &YoungDiagram, d: usize) -> Result<Vec<GtPattern>> {
    let top = yd.padded(d)?;
    let mut out = Vec::new();
    fn rec(rows: &mut Vec<Vec<usize>>, out: &mut Vec<GtPattern>) {
        let last = rows.last().unwrap().clone();
        if last.len() == 1 {
            out.push(GtPattern { rows: rows.clone() });
            return;
        }
        let m = last.len() - 1;
        let mut cur = vec![0usize; m];
        fn fill(
            j: usize,
            last: &[usize],
            cur: &mut Vec<usize>,
            rows: &mut Vec<Vec<usize>>,
            out: &mut Vec<GtPattern>,
        ) {
            if j == cur.len() {
                rows.push(cur.clone());
                rec(rows, out);
                rows.pop();
                return;
            }
            for v in (last[j + 1]..=last[j]).rev() {
                cur[j] = v;
                fill(j + 1, last, cur, rows, out);
            }
        }
        fill(0, &last, &mut cur, rows, out);
    }
    if d == 0 {
        return Ok(out);
    }
    rec(&mut vec![top], &mut out);
    Ok(out)
}

/// Multi-box removal rule: take up to `ς_r − ς_{r+1}` boxes from row r for
/// r = 1, …, d−1 and any number from row d. If boxes remain after row d (the
/// bottom rows ran dry), the pass is repeated on the reduced diagram.
pub fn conjectured_multi_removal(yd: &YoungDiagram, m: usize, d: usize) -> Result<YoungDiagram> {
    let n = yd.size();
    if m > n {
        return invalid(format!(
            "cannot remove {} boxes from {} ({} boxes)",
            m, yd, n
        ));
    }
    let mut rows = yd.padded(d)?;
    let mut left = m;
    while left > 0 {
        for r in 0..d {
            let quota = if r + 1 < d {
                rows[r] - rows[r + 1]
            } else {
                rows[r]
            };
            let take = quota.min(left);
            rows[r] -= take;
            left -= take;
            if left == 0 {
                break;
            }
        }
    }
    YoungDiagram::new(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn yd(r: &[usize]) -> YoungDiagram {
        YoungDiagram::new(r).unwrap()
    }

    fn syt(rows: &[&[usize]]) -> StandardTableau {
        StandardTableau::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn enumerate_yds_examples() {
        assert_eq!(
            enumerate_yds(3, 3),
            vec![yd(&[3]), yd(&[2, 1]), yd(&[1, 1, 1])]
        );
        assert_eq!(enumerate_yds(1, 4), vec![yd(&[1])]);
        assert_eq!(
            enumerate_yds(4, 2),
            vec![yd(&[4]), yd(&[3, 1]), yd(&[2, 2])]
        );
        assert_eq!(enumerate_yds(6, 6).len(), 11);
    }

    #[test]
    fn diagram_validation() {
        assert!(YoungDiagram::new(&[1, 2]).is_err());
        assert!(YoungDiagram::new(&[2, 0, 1]).is_err());
        assert_eq!(yd(&[2, 1, 0, 0]).rows(), &[2, 1]);
    }

    #[test]
    fn weyl_dim_examples() {
        assert_eq!(weyl_dim(&yd(&[2, 1]), 3).unwrap(), 8);
        assert_eq!(weyl_dim(&yd(&[3]), 3).unwrap(), 10);
        assert_eq!(weyl_dim(&yd(&[1, 1, 1]), 3).unwrap(), 1);
        assert_eq!(weyl_dim(&yd(&[7]), 1).unwrap(), 1);
        assert!(weyl_dim(&yd(&[1, 1]), 1).is_err());
    }

    #[test]
    fn specht_dim_examples() {
        assert_eq!(specht_dim(&yd(&[2, 1])).unwrap(), 2);
        assert_eq!(specht_dim(&yd(&[5])).unwrap(), 1);
        assert_eq!(specht_dim(&yd(&[3, 2])).unwrap(), 5);
        assert_eq!(specht_dim(&yd(&[3, 2, 1])).unwrap(), 16);
    }

    #[test]
    fn syt_examples() {
        assert_eq!(
            enumerate_syt(&yd(&[2, 1])),
            vec![syt(&[&[1, 2], &[3]]), syt(&[&[1, 3], &[2]])]
        );
        assert_eq!(enumerate_syt(&yd(&[1, 1])), vec![syt(&[&[1], &[2]])]);
        assert_eq!(enumerate_syt(&yd(&[2, 2])).len(), 2);
    }

    #[test]
    fn syt_count_matches_hook_length() {
        for n in 1..=7 {
            for y in enumerate_yds(n, n) {
                assert_eq!(
                    enumerate_syt(&y).len() as u128,
                    specht_dim(&y).unwrap(),
                    "{}",
                    y
                );
            }
        }
    }

    #[test]
    fn column_ordered_examples() {
        assert_eq!(column_ordered(&yd(&[3, 2])), syt(&[&[1, 3, 5], &[2, 4]]));
        assert_eq!(column_ordered(&yd(&[4])), syt(&[&[1, 2, 3, 4]]));
        assert_eq!(
            column_ordered(&yd(&[2, 2, 1])),
            syt(&[&[1, 4], &[2, 5], &[3]])
        );
    }

    #[test]
    fn majorization_examples() {
        use Majorization::*;
        assert_eq!(
            majorization_compare(&yd(&[3, 3, 1]), &yd(&[4, 2, 1])).unwrap(),
            Less
        );
        assert_eq!(
            majorization_compare(&yd(&[4, 2, 1]), &yd(&[4, 3])).unwrap(),
            Less
        );
        assert_eq!(
            majorization_compare(&yd(&[4, 3]), &yd(&[4, 2, 1])).unwrap(),
            Greater
        );
        assert_eq!(
            majorization_compare(&yd(&[2, 1]), &yd(&[2, 1])).unwrap(),
            Equal
        );
        assert_eq!(
            majorization_compare(&yd(&[3, 3]), &yd(&[4, 1, 1])).unwrap(),
            Incomparable
        );
        assert!(majorization_compare(&yd(&[3]), &yd(&[2])).is_err());
    }

    #[test]
    fn feasible_and_remove() {
        assert_eq!(feasible_rows(&yd(&[2, 2]), 3).unwrap(), vec![2]);
        assert_eq!(remove_box(&yd(&[2, 2]), 2).unwrap(), yd(&[2, 1]));
        let s = yd(&[2, 2, 1]);
        assert_eq!(smallest_feasible_row(&s), Some(2));
        assert_eq!(remove_box(&s, 2).unwrap(), yd(&[2, 1, 1]));
        assert_eq!(feasible_rows(&yd(&[5]), 2).unwrap(), vec![1]);
        assert!(remove_box(&yd(&[2, 2]), 1).is_err());
        assert!(feasible_rows(&yd(&[1, 1, 1]), 2).is_err());
    }

    #[test]
    fn gt_examples() {
        assert_eq!(enumerate_gt(&yd(&[2, 1]), 3).unwrap().len(), 8);
        assert_eq!(enumerate_gt(&yd(&[1]), 5).unwrap().len(), 5);
        assert_eq!(enumerate_gt(&yd(&[2, 2]), 3).unwrap().len(), 6);
        for p in enumerate_gt(&yd(&[3, 1]), 3).unwrap() {
            GtPattern::new(p.rows().to_vec()).unwrap();
            assert_eq!(p.weight().iter().sum::<usize>(), 4);
        }
    }

    #[test]
    fn multi_removal_examples() {
        assert_eq!(
            conjectured_multi_removal(&yd(&[3, 2]), 1, 2).unwrap(),
            yd(&[2, 2])
        );
        assert_eq!(
            conjectured_multi_removal(&yd(&[3, 2]), 1, 5).unwrap(),
            yd(&[2, 2])
        );
        assert_eq!(
            conjectured_multi_removal(&yd(&[3, 2, 1]), 0, 3).unwrap(),
            yd(&[3, 2, 1])
        );
        assert_eq!(
            conjectured_multi_removal(&yd(&[3, 2, 2]), 3, 3).unwrap(),
            yd(&[2, 2])
        );
        assert!(conjectured_multi_removal(&yd(&[2]), 3, 2).is_err());
        assert_eq!(
            conjectured_multi_removal(&yd(&[2]), 2, 2).unwrap(),
            YoungDiagram::empty()
        );
    }

    #[test]
    fn schur_weyl_dimension_count() {
        for d in 1..=4usize {
            for n in 1..=7usize {
                let total: u128 = enumerate_yds(n, d)
                    .iter()
                    .map(|y| specht_dim(y).unwrap() * weyl_dim(y, d).unwrap())
                    .sum();
                assert_eq!(total, (d as u128).pow(n as u32));
            }
        }
    }

    #[test]
    fn gt_count_matches_weyl() {
        for d in 1..=4 {
            for n in 1..=6 {
                for y in enumerate_yds(n, d) {
                    assert_eq!(
                        enumerate_gt(&y, d).unwrap().len() as u128,
                        weyl_dim(&y, d).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn tableau_helpers() {
        let t = syt(&[&[1, 3], &[2]]);
        assert_eq!(t.parent(), syt(&[&[1], &[2]]));
        assert_eq!(t.content(3), 1);
        assert_eq!(t.content(2), -1);
        assert_eq!(t.swap_adjacent(2), Some(syt(&[&[1, 2], &[3]])));
        assert_eq!(t.swap_adjacent(1), None);
        assert_eq!(syt(&[&[1], &[2]]).extend(1).unwrap(), t);
        assert!(StandardTableau::new(vec![vec![2, 1]]).is_err());
        assert!(StandardTableau::new(vec![vec![1, 2], vec![2]]).is_err());
    }

    #[test]
    fn weyl_dim_overflow_is_checked() {
        let big = yd(&[20, 10, 5, 1]);
        // Fits: large but exact.
        assert!(weyl_dim(&big, 6).unwrap() > 0);
        let huge = YoungDiagram::new(&[usize::MAX / 4]).unwrap();
        assert!(matches!(weyl_dim(&huge, 4), Err(QpaError::Overflow(_))));
    }
}
