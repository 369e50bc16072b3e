//! Small exact integer and rational linear algebra: Hermite normal forms,
//! integer kernels and rational solves on tiny dense matrices.

use num_rational::Rational64;
use num_traits::{One, Zero};

/// Exact rationals used throughout.
pub type Q = Rational64;

/// Row-echelon form over ℤ of `rows`, pivoting only on the first `pivot_cols`
/// columns. Row operations are unimodular, so trailing columns record the
/// transformation when the input is augmented. Returns the transformed rows
/// (zero rows in the pivot block are kept at the end) and the pivot columns.
fn echelon(mut m: Vec<Vec<i64>>, pivot_cols: usize) -> (Vec<Vec<i64>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut start = 0;
    for col in 0..pivot_cols {
        if start >= m.len() {
            break;
        }
        loop {
            let piv = (start..m.len())
                .filter(|&i| m[i][col] != 0)
                .min_by_key(|&i| m[i][col].abs());
            let Some(p) = piv else { break };
            m.swap(start, p);
            let mut clean = true;
            for i in start + 1..m.len() {
                if m[i][col] != 0 {
                    let q = m[i][col] / m[start][col];
                    let (head, tail) = m.split_at_mut(i);
                    for (a, b) in tail[0].iter_mut().zip(&head[start]) {
                        *a -= q * b;
                    }
                    if m[i][col] != 0 {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        if m[start][col] == 0 {
            continue;
        }
        if m[start][col] < 0 {
            for v in m[start].iter_mut() {
                *v = -*v;
            }
        }
        let p = m[start][col];
        for i in 0..start {
            let q = m[i][col].div_euclid(p);
            if q != 0 {
                let (head, tail) = m.split_at_mut(start);
                for (a, b) in head[i].iter_mut().zip(&tail[0]) {
                    *a -= q * b;
                }
            }
        }
        pivots.push(col);
        start += 1;
    }
    (m, pivots)
}

/// Hermite basis of a sublattice of ℤ^n, used as a normal form for the
/// quotient ℤ^n / L.
#[derive(Clone, Debug)]
pub struct HermiteBasis {
    pub n: usize,
    pub rows: Vec<Vec<i64>>,
    pub pivots: Vec<usize>,
}

impl HermiteBasis {
    /// Hermite basis of the lattice spanned by `gens` (each of length `n`).
    pub fn new(gens: &[Vec<i64>], n: usize) -> Self {
        let m: Vec<Vec<i64>> = gens.iter().filter(|r| r.iter().any(|&v| v != 0)).cloned().collect();
        let (m, pivots) = echelon(m, n);
        let rows = m.into_iter().take(pivots.len()).collect();
        HermiteBasis { n, rows, pivots }
    }

    /// Canonical coset representative of `v` modulo the lattice.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let mut v = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let q = v[c].div_euclid(row[c]);
            if q != 0 {
                for (a, b) in v.iter_mut().zip(row) {
                    *a -= q * b;
                }
            }
        }
        v
    }

    /// Coordinates of the reduced representative that can be nonzero:
    /// free columns and pivot columns with pivot > 1.
    pub fn invariant_positions(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|c| match self.pivots.iter().position(|p| p == c) {
                None => true,
                Some(i) => self.rows[i][*c] > 1,
            })
            .collect()
    }

    /// Order of ℤ^n / L, or `None` when infinite.
    pub fn index(&self) -> Option<i64> {
        if self.pivots.len() < self.n {
            return None;
        }
        Some(self.rows.iter().zip(&self.pivots).map(|(r, &c)| r[c]).product())
    }

    /// Whether `v` lies in the lattice.
    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coset representatives of ℤ^n / L when the index is finite.
    pub fn coset_reps(&self) -> Option<Vec<Vec<i64>>> {
        self.index()?;
        let diag: Vec<i64> = self.rows.iter().zip(&self.pivots).map(|(r, &c)| r[c]).collect();
        let mut out = vec![vec![0i64; self.n]];
        for (i, &d) in diag.iter().enumerate() {
            let c = self.pivots[i];
            let mut next = Vec::new();
            for base in &out {
                for t in 0..d {
                    let mut v = base.clone();
                    v[c] = t;
                    next.push(v);
                }
            }
            out = next;
        }
        Some(out)
    }
}

/// Saturated integer basis of {x ∈ ℤ^n : A x = 0}, for A given by rows.
pub fn integer_kernel(a: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let m = a.len();
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|j| {
            let mut r: Vec<i64> = a.iter().map(|row| row[j]).collect();
            r.extend((0..n).map(|k| i64::from(k == j)));
            r
        })
        .collect();
    let (t, pivots) = echelon(rows, m);
    let basis: Vec<Vec<i64>> = t.into_iter().skip(pivots.len()).map(|r| r[m..].to_vec()).collect();
    let mut h = HermiteBasis::new(&basis, n).rows;
    for r in h.iter_mut() {
        if let Some(first) = r.iter().find(|&&v| v != 0) {
            if *first < 0 {
                r.iter_mut().for_each(|v| *v = -*v);
            }
        }
    }
    h
}

/// Reduced row echelon form of a rational matrix; returns pivot columns.
fn rref(m: &mut [Vec<Q>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r >= m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = Q::one() / m[r][c];
        for v in m[r].iter_mut() {
            *v *= inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                let (lo, hi) = if i < r { let (a, b) = m.split_at_mut(r); (&mut a[i], &b[0]) } else { let (a, b) = m.split_at_mut(i); (&mut b[0], &a[r]) };
                for (x, y) in lo.iter_mut().zip(hi.iter()) {
                    *x -= f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solves A x = b over ℚ (A given by rows). Returns one solution with free
/// variables set to zero, or `None` when inconsistent.
pub fn solve_rational(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Q>> = a.iter().zip(b).map(|(r, &bi)| {
        let mut r = r.clone();
        r.push(bi);
        r
    }).collect();
    let pivots = rref(&mut m, n);
    for row in m.iter().skip(pivots.len()) {
        if !row[n].is_zero() {
            return None;
        }
    }
    let mut x = vec![Q::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][n];
    }
    Some(x)
}

/// Rank over ℚ of an integer matrix given by rows.
pub fn rank_int(a: &[Vec<i64>]) -> usize {
    let n = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Q>> = a.iter().map(|r| r.iter().map(|&v| Q::from_integer(v)).collect()).collect();
    rref(&mut m, n).len()
}

/// Inverse of a square rational matrix.
pub fn inverse(a: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a.iter().enumerate().map(|(i, r)| {
        let mut r = r.clone();
        r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
        r
    }).collect();
    let pivots = rref(&mut m, n);
    if pivots.len() < n {
        return None;
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Converts an integral rational vector to integers.
pub fn to_integers(v: &[Q]) -> Option<Vec<i64>> {
    v.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
}

/// Formats a rational as `a` or `a/b`.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `a` or `a/b`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let b: i64 = b.trim().parse().ok()?;
            (b != 0).then_some(())?;
            Some(Q::new(a.trim().parse().ok()?, b))
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_reduce_is_canonical() {
        let h = HermiteBasis::new(&[vec![1, -1, 0], vec![0, 1, -1]], 3);
        assert_eq!(h.reduce(&[2, 5, -1]), vec![0, 0, 6]);
        assert_eq!(h.invariant_positions(), vec![2]);
        assert_eq!(h.index(), None);
        let h = HermiteBasis::new(&[vec![2, -1], vec![-1, 2]], 2);
        assert_eq!(h.index(), Some(3));
        assert_eq!(h.coset_reps().unwrap().len(), 3);
        assert!(h.contains(&[1, 1]));
    }

    #[test]
    fn kernel_of_sum_map() {
        let k = integer_kernel(&[vec![1, 1, 1]], 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(v.iter().sum::<i64>(), 0);
        }
        let k = integer_kernel(&[vec![2, -1, 0], vec![0, -1, 2]], 3);
        assert_eq!(k, vec![vec![1, 2, 1]]);
    }

    #[test]
    fn rational_solve_and_inverse() {
        let a = vec![vec![Q::from_integer(2), Q::from_integer(-1)], vec![Q::from_integer(-1), Q::from_integer(2)]];
        let inv = inverse(&a).unwrap();
        assert_eq!(inv[0][0], Q::new(2, 3));
        let x = solve_rational(&a, &[Q::from_integer(1), Q::from_integer(0)]).unwrap();
        assert_eq!(x, vec![Q::new(2, 3), Q::new(1, 3)]);
        assert!(solve_rational(&[vec![Q::one()], vec![Q::one()]], &[Q::one(), Q::zero()]).is_none());
        assert_eq!(rank_int(&[vec![1, 2], vec![2, 4]]), 1);
    }
}
