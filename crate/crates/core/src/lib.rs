//! Least-squares regression by Gram–Schmidt orthogonal projection.
//!
//! The fitted values are computed as the orthogonal projection of the
//! response onto the column space of the design matrix, ŷ = Σⱼ (y·ξⱼ)ξⱼ,
//! where the ξⱼ are an orthonormal basis built by modified Gram–Schmidt.
//! No pseudo-inverse or `(X'X)⁻¹` is formed on that path.
//!
//! ```
//! use orthoreg::{fit_projection, DesignMatrix, RealVector};
//!
//! let x = RealVector::from_slice(&[0.0, 1.0, 2.0]).unwrap();
//! let y = RealVector::from_slice(&[1.0, 1.0, 4.0]).unwrap();
//! let design = DesignMatrix::with_intercept(&[x], None).unwrap();
//! let fit = fit_projection(&design, &y).unwrap();
//! let beta = fit.coefficients.unwrap();
//! assert!((beta[0] - 0.5).abs() < 1e-12 && (beta[1] - 1.5).abs() < 1e-12);
//! ```
//!
//! The [`simulate`] module runs many such regressions on synthetic data,
//! and [`cli`] wraps everything in a small command-line tool.

pub mod cli;
pub mod error;
pub mod linalg;
pub mod orthogonalize;
pub mod regress;
pub mod simulate;

pub use error::{Error, Result};
pub use linalg::{axpy, inner_product, norm, DesignMatrix, RealVector};
pub use orthogonalize::{
    centered_second_vector, gram_schmidt, gram_schmidt_with, GramSchmidtOptions, OrthonormalBasis,
};
pub use regress::{
    fit_normal_equations, fit_projection, fit_projection_with, fit_simple_closed_form, project,
    residual_diagnostics, FitMethod, FitResult, SimpleRegressionData,
};
pub use simulate::{
    benchmark, generate_trial, run_simulation, BenchmarkReport, SimConfig, SimReport, Solver, XSpec,
};
