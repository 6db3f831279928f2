use std::collections::VecDeque;

use super::{FemError, Result};

/// Symmetric matrix in compressed sparse row form. Both triangles are
/// stored, so a row lists every nonzero in that row with sorted columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymmetricMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<f64>,
}

impl SparseSymmetricMatrix {
    /// Builds the matrix from `(row, col, value)` contributions. Duplicates
    /// are summed in input order, which keeps the result deterministic. Each
    /// off-diagonal contribution must be supplied for both `(i, j)` and
    /// `(j, i)`.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_by_key(|&(i, j, _)| (i, j));
        let mut row_ptr = vec![0; n + 1];
        let mut cols = Vec::new();
        let mut values: Vec<f64> = Vec::new();
        let mut last = None;
        for (i, j, v) in triplets {
            assert!(i < n && j < n, "triplet ({i}, {j}) outside a {n}x{n} matrix");
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += v;
            } else {
                cols.push(j);
                values.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self { n, row_ptr, cols, values }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[range.clone()].iter().copied().zip(self.values[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[range.clone()].binary_search(&j) {
            Ok(k) => self.values[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).map(|(j, v)| v * x[j]).sum()).collect()
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.mul_vec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| self.row(i).all(|(j, v)| self.get(j, i) == v))
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut d = nalgebra::DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                d[(i, j)] = v;
            }
        }
        d
    }

    /// Principal submatrix on `keep`, renumbered in the order given.
    pub fn principal_submatrix(&self, keep: &[usize]) -> Self {
        let mut local = vec![usize::MAX; self.n];
        for (k, &g) in keep.iter().enumerate() {
            local[g] = k;
        }
        let triplets = keep
            .iter()
            .enumerate()
            .flat_map(|(k, &g)| {
                let local = &local;
                self.row(g).filter_map(move |(j, v)| (local[j] != usize::MAX).then_some((k, local[j], v)))
            })
            .collect();
        Self::from_triplets(keep.len(), triplets)
    }
}

/// Reverse Cuthill-McKee ordering. Returns `perm` with `perm[new] = old`.
/// Each connected component starts from a vertex of minimum degree, ties
/// broken by index.
pub fn reverse_cuthill_mckee(a: &SparseSymmetricMatrix) -> Vec<usize> {
    let n = a.dim();
    let neighbours = |i: usize| a.row(i).map(|(j, _)| j).filter(move |&j| j != i);
    let degree: Vec<usize> = (0..n).map(|i| neighbours(i).count()).collect();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&i| (degree[i], i));
    for &start in &by_degree {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = neighbours(v).filter(|&j| !seen[j]).collect();
            next.sort_by_key(|&j| (degree[j], j));
            for j in next {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    order.reverse();
    order
}

/// Cholesky factor `L` of a symmetric positive definite matrix stored by
/// rows within its envelope: row `i` holds columns `first[i]..=i`.
#[derive(Debug, Clone)]
pub struct EnvelopeCholesky {
    /// `perm[new] = old`.
    perm: Vec<usize>,
    first: Vec<usize>,
    start: Vec<usize>,
    data: Vec<f64>,
}

impl EnvelopeCholesky {
    /// Factors `a` after a reverse Cuthill-McKee reordering.
    pub fn factor(a: &SparseSymmetricMatrix) -> Result<Self> {
        let n = a.dim();
        let perm = reverse_cuthill_mckee(a);
        let mut inverse = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        let first: Vec<usize> = (0..n)
            .map(|i| a.row(perm[i]).map(|(j, _)| inverse[j]).min().unwrap_or(i).min(i))
            .collect();
        let mut start = Vec::with_capacity(n + 1);
        start.push(0);
        for i in 0..n {
            start.push(start[i] + i - first[i] + 1);
        }
        let mut data = vec![0.0; start[n]];
        for i in 0..n {
            for (j, v) in a.row(perm[i]) {
                let jj = inverse[j];
                if jj <= i {
                    data[start[i] + jj - first[i]] = v;
                }
            }
        }

        for i in 0..n {
            let fi = first[i];
            for j in fi..=i {
                let fj = first[j];
                let lo = fi.max(fj);
                let row_i = &data[start[i] + lo - fi..start[i] + j - fi];
                let row_j = &data[start[j] + lo - fj..start[j] + j - fj];
                let dot: f64 = row_i.iter().zip(row_j).map(|(x, y)| x * y).sum();
                let idx = start[i] + j - fi;
                if j < i {
                    data[idx] = (data[idx] - dot) / data[start[j + 1] - 1];
                } else {
                    let d = data[idx] - dot;
                    if !(d > 0.0) {
                        return Err(FemError::NotPositiveDefinite(i));
                    }
                    data[idx] = d.sqrt();
                }
            }
        }
        Ok(Self { perm, first, start, data })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Stored entries of the factor.
    pub fn envelope_size(&self) -> usize {
        self.data.len()
    }

    /// Solves `L y = P b` where `P` is the internal reordering; `b` is in the
    /// original numbering. Then `|y|^2 = b^T A^{-1} b`.
    pub fn forward(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut y: Vec<f64> = self.perm.iter().map(|&old| b[old]).collect();
        let Some(lead) = y.iter().position(|&v| v != 0.0) else {
            return y;
        };
        for i in lead..n {
            let fi = self.first[i].max(lead);
            let row = &self.data[self.start[i] + fi - self.first[i]..self.start[i + 1] - 1];
            let dot: f64 = row.iter().zip(&y[fi..i]).map(|(l, v)| l * v).sum();
            y[i] = (y[i] - dot) / self.data[self.start[i + 1] - 1];
        }
        y
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut y = self.forward(b);
        let n = self.dim();
        for i in (0..n).rev() {
            y[i] /= self.data[self.start[i + 1] - 1];
            let yi = y[i];
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1] - 1];
            for (k, l) in row.iter().enumerate() {
                y[fi + k] -= l * yi;
            }
        }
        let mut x = vec![0.0; n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// 1D Laplacian plus `shift` on the diagonal, with a scrambled numbering.
    fn path_matrix(n: usize, shift: f64) -> SparseSymmetricMatrix {
        let label = |i: usize| if i.is_multiple_of(2) { i / 2 } else { n - 1 - i / 2 };
        let mut t = Vec::new();
        for i in 0..n {
            t.push((label(i), label(i), 2.0 + shift));
            if i + 1 < n {
                t.push((label(i), label(i + 1), -1.0));
                t.push((label(i + 1), label(i), -1.0));
            }
        }
        SparseSymmetricMatrix::from_triplets(n, t)
    }

    #[test]
    fn triplets_are_summed() {
        let a = SparseSymmetricMatrix::from_triplets(2, vec![(0, 0, 1.0), (0, 1, 2.0), (0, 0, 0.5), (1, 0, 2.0)]);
        assert_eq!(a.get(0, 0), 1.5);
        assert_eq!(a.get(1, 1), 0.0);
        assert_eq!(a.nnz(), 3);
        assert!(a.is_symmetric());
        assert_eq!(a.mul_vec(&[1.0, 1.0]), vec![3.5, 2.0]);
    }

    #[test]
    fn rcm_recovers_a_band() {
        let a = path_matrix(50, 0.0);
        let chol = EnvelopeCholesky::factor(&a).unwrap();
        // A path reordered by RCM has bandwidth one.
        assert_eq!(chol.envelope_size(), 2 * 50 - 1);
    }

    #[test]
    fn non_spd_is_rejected() {
        let a = SparseSymmetricMatrix::from_triplets(2, vec![(0, 0, 1.0), (0, 1, 2.0), (1, 0, 2.0), (1, 1, 1.0)]);
        assert!(matches!(EnvelopeCholesky::factor(&a), Err(FemError::NotPositiveDefinite(_))));
    }

    #[test]
    fn submatrix_keeps_order() {
        let a = path_matrix(6, 0.0);
        let keep = [4, 0, 2];
        let s = a.principal_submatrix(&keep);
        for (p, &i) in keep.iter().enumerate() {
            for (q, &j) in keep.iter().enumerate() {
                assert_eq!(s.get(p, q), a.get(i, j));
            }
        }
    }

    proptest! {
        #[test]
        fn solve_inverts(n in 2usize..40, shift in 0.01f64..2.0, seed in 0u64..1000) {
            let a = path_matrix(n, shift);
            let x: Vec<f64> = (0..n).map(|i| ((i as u64 * 31 + seed) % 17) as f64 - 8.0).collect();
            let b = a.mul_vec(&x);
            let chol = EnvelopeCholesky::factor(&a).unwrap();
            let got = chol.solve(&b);
            for (g, e) in got.iter().zip(&x) {
                prop_assert!((g - e).abs() < 1e-8 * (1.0 + 1.0 / shift));
            }
            let y = chol.forward(&b);
            let energy: f64 = y.iter().map(|v| v * v).sum();
            let expect: f64 = b.iter().zip(&x).map(|(u, v)| u * v).sum();
            prop_assert!((energy - expect).abs() < 1e-8 * expect.abs().max(1.0) / shift);
        }
    }
}
