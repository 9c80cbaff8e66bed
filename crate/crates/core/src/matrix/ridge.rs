use super::DenseMatrix;
use crate::error::{Error, Result};

/// Weights of a multi-output ridge regression together with the penalty used.
#[derive(Debug, Clone)]
pub struct RidgeSolution {
    /// `m x n`: one column of coefficients per response column.
    pub weights: DenseMatrix,
    pub alpha: f64,
}

impl RidgeSolution {
    /// `max |(AᵀA + αI)W − AᵀB|`, the residual of the normal equations.
    pub fn normal_equation_residual(&self, a: &DenseMatrix, b: &DenseMatrix) -> Result<f64> {
        let lhs = gram(a, self.alpha).matmul(&self.weights)?;
        let rhs = a.t_matmul(b)?;
        Ok(lhs.sub(&rhs)?.max_abs())
    }
}

/// Lower-triangular Cholesky factor `L` of a symmetric positive-definite matrix,
/// `M = L Lᵀ`.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    lower: DenseMatrix,
}

impl CholeskyFactor {
    pub fn new(m: &DenseMatrix) -> Result<Self> {
        let n = m.rows();
        if m.cols() != n {
            return Err(Error::input(format!(
                "Cholesky needs a square matrix, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let max_diag = (0..n).fold(0.0_f64, |acc, i| acc.max(m.get(i, i).abs()));
        // Pivots at or below this level mean the matrix is singular to working precision.
        let tol = max_diag * f64::EPSILON * n.max(1) as f64;

        let mut lower = DenseMatrix::zeros(n, n);
        let mut min_pivot = f64::INFINITY;
        let mut max_pivot = 0.0_f64;
        for j in 0..n {
            let row_j = lower.row(j)[..j].to_vec();
            let pivot = m.get(j, j) - row_j.iter().map(|v| v * v).sum::<f64>();
            if !(pivot > tol) {
                return Err(Error::Numerical(format!(
                    "matrix is not positive definite: pivot {pivot:.3e} at index {j} \
                     (tolerance {tol:.3e}, largest diagonal {max_diag:.3e}); \
                     the system is singular or too ill-conditioned, use alpha > 0"
                )));
            }
            min_pivot = min_pivot.min(pivot);
            max_pivot = max_pivot.max(pivot);
            let diag = pivot.sqrt();
            lower.set(j, j, diag);
            for i in j + 1..n {
                let s = m.get(i, j) - super::dot(&lower.row(i)[..j], &row_j);
                lower.set(i, j, s / diag);
            }
        }
        if n > 0 && max_pivot / min_pivot > 1e14 {
            return Err(Error::Numerical(format!(
                "system is too ill-conditioned: pivot ratio {:.3e} exceeds 1e14",
                max_pivot / min_pivot
            )));
        }
        Ok(Self { lower })
    }

    pub fn dim(&self) -> usize {
        self.lower.rows()
    }

    /// Solves `M X = rhs` for every column of `rhs` at once.
    ///
    /// Columns never interact, so solving a subset of columns gives bitwise
    /// the same numbers as solving them inside a larger block.
    pub fn solve(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        let n = self.dim();
        if rhs.rows() != n {
            return Err(Error::input(format!(
                "right-hand side has {} rows, factor has dimension {n}",
                rhs.rows()
            )));
        }
        let width = rhs.cols();
        let l = &self.lower;

        // L Y = rhs
        let mut y = rhs.clone();
        for i in 0..n {
            let mut acc = y.row(i).to_vec();
            for k in 0..i {
                let lik = l.get(i, k);
                if lik != 0.0 {
                    for (a, &v) in acc.iter_mut().zip(y.row(k)) {
                        *a -= lik * v;
                    }
                }
            }
            let d = l.get(i, i);
            for (dst, a) in y.row_mut(i).iter_mut().zip(acc) {
                *dst = a / d;
            }
        }

        // Lᵀ X = Y
        let mut x = y;
        for i in (0..n).rev() {
            let mut acc = x.row(i).to_vec();
            for k in i + 1..n {
                let lki = l.get(k, i);
                if lki != 0.0 {
                    for (a, &v) in acc.iter_mut().zip(x.row(k)) {
                        *a -= lki * v;
                    }
                }
            }
            let d = l.get(i, i);
            for (dst, a) in x.row_mut(i).iter_mut().zip(acc) {
                *dst = a / d;
            }
        }
        debug_assert_eq!(x.cols(), width);
        Ok(x)
    }
}

/// `AᵀA + αI`.
pub(crate) fn gram(a: &DenseMatrix, alpha: f64) -> DenseMatrix {
    let mut g = a.t_matmul(a).expect("AᵀA always conforms");
    for i in 0..g.rows() {
        g.set(i, i, g.get(i, i) + alpha);
    }
    g
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::input(format!(
            "ridge constant must be finite and >= 0, got {alpha}"
        )));
    }
    Ok(())
}

/// Minimizes `‖B − AW‖²_F + α‖W‖²_F` over `W` for `A: d x m`, `B: d x n`.
///
/// The `m x m` system `(AᵀA + αI) W = AᵀB` is solved with a Cholesky
/// factorization. With `alpha = 0` the columns of `A` must be linearly
/// independent.
pub fn solve_ridge(a: &DenseMatrix, b: &DenseMatrix, alpha: f64) -> Result<RidgeSolution> {
    check_alpha(alpha)?;
    if a.rows() != b.rows() {
        return Err(Error::input(format!(
            "regressors have {} rows but responses have {}",
            a.rows(),
            b.rows()
        )));
    }
    let factor = CholeskyFactor::new(&gram(a, alpha))?;
    let weights = factor.solve(&a.t_matmul(b)?)?;
    Ok(RidgeSolution { weights, alpha })
}
