//! Exact linear algebra over the rationals.
//!
//! Everything in the crate that asks a rank, kernel or solvability question
//! ends up here. Matrices are dense and row-major; entries are
//! arbitrary-precision rationals, so no answer is ever rounded.

use std::fmt;

use num_traits::{One, Zero};

use crate::Q;

/// A dense matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

/// Result of row reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: QMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("dimension mismatch: expected {expected}, found {found}")]
pub struct DimensionMismatch {
    pub expected: usize,
    pub found: usize,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    /// Builds a matrix from rows. All rows must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Q>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r);
        }
        QMatrix {
            rows: n,
            cols,
            data,
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Q>]) -> Self {
        let mut m = QMatrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged column");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    /// Convenience constructor from small integer fractions `(num, den)`.
    pub fn from_fracs(rows: &[&[(i64, i64)]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        QMatrix::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&(n, d)| crate::q(n, d)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Q]) -> Result<Vec<Q>, DimensionMismatch> {
        if v.len() != self.cols {
            return Err(DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Q::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix, DimensionMismatch> {
        if self.cols != other.rows {
            return Err(DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        rref(self).rank
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Reduced row-echelon form by Gauss-Jordan elimination.
pub fn rref(m: &QMatrix) -> Rref {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..a.cols {
                a.data.swap(p * a.cols + j, r * a.cols + j);
            }
        }
        let inv = a[(r, c)].recip();
        for j in c..a.cols {
            if !a[(r, j)].is_zero() {
                a[(r, j)] *= &inv;
            }
        }
        for i in 0..a.rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let factor = a[(i, c)].clone();
            for j in c..a.cols {
                if a[(r, j)].is_zero() {
                    continue;
                }
                let delta = &factor * &a[(r, j)];
                a[(i, j)] -= delta;
            }
        }
        pivots.push(c);
        r += 1;
    }
    let rank = pivots.len();
    Rref {
        matrix: a,
        pivots,
        rank,
    }
}

/// A basis of the right kernel `{v : m v = 0}`.
pub fn kernel_basis(m: &QMatrix) -> Vec<Vec<Q>> {
    let red = rref(m);
    let mut is_pivot = vec![false; m.cols];
    for &p in &red.pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::with_capacity(m.cols - red.rank);
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Q::zero(); m.cols];
        v[free] = Q::one();
        for (row, &p) in red.pivots.iter().enumerate() {
            v[p] = -red.matrix[(row, free)].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves `m x = b`. `Ok(None)` means the system is inconsistent.
pub fn solve(m: &QMatrix, b: &[Q]) -> Result<Option<Vec<Q>>, DimensionMismatch> {
    if b.len() != m.rows {
        return Err(DimensionMismatch {
            expected: m.rows,
            found: b.len(),
        });
    }
    let mut aug = QMatrix::zeros(m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, m.cols)] = b[i].clone();
    }
    let red = rref(&aug);
    if red.pivots.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut x = vec![Q::zero(); m.cols];
    for (row, &p) in red.pivots.iter().enumerate() {
        x[p] = red.matrix[(row, m.cols)].clone();
    }
    Ok(Some(x))
}

/// Exact span membership. An empty basis spans the zero space.
pub fn member(basis: &[Vec<Q>], v: &[Q]) -> bool {
    if v.iter().all(Zero::is_zero) {
        return true;
    }
    if basis.is_empty() {
        return false;
    }
    let m = QMatrix::from_columns(v.len(), basis);
    matches!(solve(&m, v), Ok(Some(_)))
}

/// Coordinates of `v` in terms of `basis`, if it lies in the span.
pub fn coordinates(basis: &[Vec<Q>], v: &[Q]) -> Option<Vec<Q>> {
    if basis.is_empty() {
        return v.iter().all(Zero::is_zero).then(Vec::new);
    }
    let m = QMatrix::from_columns(v.len(), basis);
    solve(&m, v).ok().flatten()
}

/// Rank of a family of vectors of common length `dim`.
pub fn span_rank(dim: usize, vectors: &[Vec<Q>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    QMatrix::from_rows(dim, vectors.to_vec()).rank()
}

/// An independent subfamily spanning the same space, in input order.
pub fn independent_subset(dim: usize, vectors: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let m = QMatrix::from_columns(dim, vectors);
    let red = rref(&m);
    red.pivots.iter().map(|&j| vectors[j].clone()).collect()
}

/// Extends `base` by vectors from `candidates` that are independent modulo
/// what has been taken so far; returns only the newly chosen ones.
pub fn extend_independent(dim: usize, base: &[Vec<Q>], candidates: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut all: Vec<Vec<Q>> = base.to_vec();
    all.extend_from_slice(candidates);
    if all.is_empty() {
        return Vec::new();
    }
    let red = rref(&QMatrix::from_columns(dim, &all));
    red.pivots
        .iter()
        .filter(|&&j| j >= base.len())
        .map(|&j| all[j].clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;
    use proptest::prelude::*;

    fn qi(n: i64) -> Q {
        q(n, 1)
    }

    #[test]
    fn rref_dependent_rows() {
        let m = QMatrix::from_fracs(&[&[(1, 1), (2, 1)], &[(2, 1), (4, 1)]]);
        let r = rref(&m);
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
        assert_eq!(r.matrix, QMatrix::from_fracs(&[&[(1, 1), (2, 1)], &[(0, 1), (0, 1)]]));
    }

    #[test]
    fn rref_identity_is_fixed() {
        let id = QMatrix::identity(3);
        let r = rref(&id);
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 3);
    }

    #[test]
    fn rref_half_entries() {
        // det [[1/2, 1], [1, 3]] = 3/2 - 1 = 1/2
        let m = QMatrix::from_fracs(&[&[(1, 2), (1, 1)], &[(1, 1), (3, 1)]]);
        assert_eq!(rref(&m).rank, 2);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&QMatrix::from_fracs(&[&[(1, 1), (1, 1)]]));
        assert_eq!(k, vec![vec![qi(-1), qi(1)]]);
        assert!(kernel_basis(&QMatrix::identity(4)).is_empty());
        let k = kernel_basis(&QMatrix::from_fracs(&[&[(1, 1), (2, 1), (3, 1)]]));
        assert_eq!(k.len(), 2);
    }

    #[test]
    fn solve_examples() {
        let b = vec![qi(3), q(-1, 2)];
        assert_eq!(solve(&QMatrix::identity(2), &b).unwrap(), Some(b.clone()));

        let m = QMatrix::from_fracs(&[&[(1, 1), (1, 1)]]);
        let x = solve(&m, &[qi(0)]).unwrap().unwrap();
        assert_eq!(&x[0] + &x[1], qi(0));

        let m = QMatrix::from_fracs(&[&[(1, 1)], &[(2, 1)]]);
        assert_eq!(solve(&m, &[qi(1), qi(1)]).unwrap(), None);

        assert!(solve(&m, &[qi(1)]).is_err());
    }

    #[test]
    fn member_examples() {
        assert!(member(&[vec![qi(1), qi(0)]], &[qi(2), qi(0)]));
        assert!(member(&[], &[qi(0), qi(0)]));
        assert!(!member(&[vec![qi(1), qi(1)]], &[qi(1), qi(0)]));
    }

    fn small_matrix() -> impl Strategy<Value = QMatrix> {
        (1usize..5, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec((-4i64..5, 1i64..4), r * c).prop_map(move |entries| {
                let rows = entries
                    .chunks(c)
                    .map(|ch| ch.iter().map(|&(n, d)| q(n, d)).collect())
                    .collect();
                QMatrix::from_rows(c, rows)
            })
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(m in small_matrix()) {
            let once = rref(&m);
            let twice = rref(&once.matrix);
            prop_assert_eq!(once.matrix, twice.matrix);
        }

        #[test]
        fn rank_nullity(m in small_matrix()) {
            let k = kernel_basis(&m);
            prop_assert_eq!(rref(&m).rank + k.len(), m.cols());
            for v in &k {
                prop_assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
            }
        }

        #[test]
        fn solve_substitutes_back(m in small_matrix(), seed in proptest::collection::vec(-3i64..4, 6)) {
            let x0: Vec<Q> = (0..m.cols()).map(|i| qi(seed[i % seed.len()])).collect();
            let b = m.mul_vec(&x0).unwrap();
            let x = solve(&m, &b).unwrap().expect("consistent by construction");
            prop_assert_eq!(m.mul_vec(&x).unwrap(), b);
        }
    }
}
