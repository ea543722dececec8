//! Real singular value decomposition by one-sided (Hestenes) Jacobi
//! rotations. Accurate for the small, possibly rank-deficient systems that
//! come up in the channel canonical form and the Bayesian-inverse solver.

/// Row-major real matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.concat(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    pub fn transpose_mul_vec(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.rows);
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j) * y[i]).sum())
            .collect()
    }
}

/// A = U · diag(σ) · Vᵀ with σ descending. `u` is rows×k and `v` is cols×k
/// where k = cols (thin decomposition; requires rows ≥ cols). Columns of `u`
/// belonging to zero singular values are zero vectors.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: RealMatrix,
    pub singular_values: Vec<f64>,
    pub v: RealMatrix,
}

impl Svd {
    /// Number of singular values above `cutoff`.
    pub fn rank(&self, cutoff: f64) -> usize {
        self.singular_values.iter().filter(|&&s| s > cutoff).count()
    }

    /// Least-norm least-squares solution of A x = b, discarding singular
    /// values at or below `cutoff`.
    pub fn solve(&self, b: &[f64], cutoff: f64) -> Vec<f64> {
        let n = self.v.rows;
        let mut x = vec![0.0; n];
        for (k, &s) in self.singular_values.iter().enumerate() {
            if s <= cutoff {
                continue;
            }
            let coeff: f64 = (0..self.u.rows).map(|i| self.u.get(i, k) * b[i]).sum::<f64>() / s;
            for (j, xj) in x.iter_mut().enumerate() {
                *xj += coeff * self.v.get(j, k);
            }
        }
        x
    }

    /// Orthonormal basis (as vectors) of the right null space at `cutoff`.
    pub fn null_space(&self, cutoff: f64) -> Vec<Vec<f64>> {
        self.singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| s <= cutoff)
            .map(|(k, _)| self.v.column(k))
            .collect()
    }
}

const MAX_SWEEPS: usize = 80;

/// Thin SVD of a matrix with rows ≥ cols.
pub fn svd(a: &RealMatrix) -> Svd {
    assert!(a.rows >= a.cols, "svd expects a tall or square matrix");
    let (m, n) = (a.rows, a.cols);
    // Work column-major for cache-friendly column rotations.
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|x| x * x).sum();
                let beta: f64 = cols[q].iter().map(|x| x * x).sum();
                let gamma: f64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x * y).sum();
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for i in 0..m {
                    let (x, y) = (cols[p][i], cols[q][i]);
                    cols[p][i] = cs * x - sn * y;
                    cols[q][i] = sn * x + cs * y;
                }
                for i in 0..n {
                    let (x, y) = (v[p][i], v[q][i]);
                    v[p][i] = cs * x - sn * y;
                    v[q][i] = sn * x + cs * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = cols
        .iter()
        .map(|col| col.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let mut u = RealMatrix::zeros(m, n);
    let mut vm = RealMatrix::zeros(n, n);
    let mut singular_values = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        let s = norms[j];
        singular_values.push(s);
        if s > 0.0 {
            for i in 0..m {
                u.set(i, k, cols[j][i] / s);
            }
        }
        for i in 0..n {
            vm.set(i, k, v[j][i]);
        }
    }
    Svd {
        u,
        singular_values,
        v: vm,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(s: &Svd) -> RealMatrix {
        let (m, n) = (s.u.rows, s.v.rows);
        let mut out = RealMatrix::zeros(m, n);
        for i in 0..m {
            for j in 0..n {
                let val = (0..s.singular_values.len())
                    .map(|k| s.u.get(i, k) * s.singular_values[k] * s.v.get(j, k))
                    .sum();
                out.set(i, j, val);
            }
        }
        out
    }

    #[test]
    fn reconstructs_tall_matrix() {
        let a = RealMatrix::from_rows(&[
            vec![1.0, 2.0, 0.5],
            vec![-0.3, 0.0, 4.0],
            vec![2.0, 2.0, 2.0],
            vec![0.1, -1.0, 0.0],
        ]);
        let s = svd(&a);
        let r = reconstruct(&s);
        for (x, y) in r.data.iter().zip(&a.data) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(s.singular_values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn detects_rank_deficiency_and_null_space() {
        // Third column = first + second.
        let a = RealMatrix::from_rows(&[
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 1.0],
            vec![2.0, 3.0, 5.0],
        ]);
        let s = svd(&a);
        assert_eq!(s.rank(1e-10), 2);
        let null = s.null_space(1e-10);
        assert_eq!(null.len(), 1);
        let image = a.mul_vec(&null[0]);
        assert!(image.iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn least_squares_solution() {
        let a = RealMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 2.0], vec![0.0, 0.0]]);
        let s = svd(&a);
        let x = s.solve(&[3.0, 4.0, 1.0], 1e-12);
        assert!((x[0] - 3.0).abs() < 1e-14 && (x[1] - 2.0).abs() < 1e-14);
    }
}
