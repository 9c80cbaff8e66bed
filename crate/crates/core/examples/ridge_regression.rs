//! Multi-output ridge regression through the Cholesky solver.

use hsr_debias::matrix::{solve_ridge, DenseMatrix};

fn main() -> hsr_debias::Result<()> {
    // Two regressors, three observations, two response columns.
    let a = DenseMatrix::from_rows(&[[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])?;
    let b = DenseMatrix::from_rows(&[[1.0, 2.0], [2.0, 0.0], [3.0, 2.0]])?;

    for alpha in [0.0, 1.0, 60.0] {
        let sol = solve_ridge(&a, &b, alpha)?;
        println!("alpha = {alpha}");
        println!("  weights   = {:?}", sol.weights);
        println!("  ‖W‖_F     = {:.6}", sol.weights.frobenius_norm());
        println!("  residual  = {:.2e}", sol.normal_equation_residual(&a, &b)?);
    }
    Ok(())
}
