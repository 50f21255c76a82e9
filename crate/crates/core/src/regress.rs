//! Least-squares fits.
//!
//! [`fit_projection`] is the main path: orthonormalize the design columns
//! and project `y` onto them, ŷ = Σⱼ (y·ξⱼ)ξⱼ. It never forms or inverts
//! `X'X`, and works unchanged on rank-deficient designs (the projection is
//! onto whatever span the kept columns have).
//!
//! Two other routes exist for checking it:
//!
//! * [`fit_simple_closed_form`], the textbook sums formula for one regressor
//!   plus intercept;
//! * [`fit_normal_equations`], which forms `X'X` and `X'y` and solves by
//!   Gaussian elimination. It is a comparison baseline only and shares no
//!   code with the orthogonalization path.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{axpy_in_place, dot, norm, DesignMatrix, RealVector};
use crate::orthogonalize::{gram_schmidt_with, GramSchmidtOptions, OrthonormalBasis};

/// Relative pivot threshold for the normal-equations oracle.
pub const PIVOT_TOLERANCE: f64 = 1e-12;
/// Relative Sₓₓ threshold for the closed-form oracle.
pub const DEGENERATE_TOLERANCE: f64 = 1e-12;
/// rss at or below this counts as a perfect fit when y has no variation.
const PERFECT_FIT_RSS: f64 = 1e-24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMethod {
    Projection,
    ClosedFormSimple,
    NormalEquations,
}

/// Output of any of the fitting routes. Field order is the JSON key order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub method: FitMethod,
    pub rank: usize,
    pub rss: f64,
    pub r_squared: f64,
    /// β̂, when the route can produce it.
    pub coefficients: Option<RealVector>,
    pub fitted: RealVector,
    pub residuals: RealVector,
}

/// Paired observations for a one-regressor model with intercept.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleRegressionData {
    x: RealVector,
    y: RealVector,
}

impl SimpleRegressionData {
    pub fn new(x: RealVector, y: RealVector) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::Dimension(format!(
                "x has {} observations, y has {}",
                x.len(),
                y.len()
            )));
        }
        if x.len() < 2 {
            return Err(Error::Dimension("need at least two observations".into()));
        }
        Ok(SimpleRegressionData { x, y })
    }

    pub fn x(&self) -> &RealVector {
        &self.x
    }

    pub fn y(&self) -> &RealVector {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `[1 | x]`.
    pub fn design(&self) -> DesignMatrix {
        DesignMatrix::with_intercept(std::slice::from_ref(&self.x), None)
            .expect("x is a valid non-empty column")
    }
}

fn finish(
    method: FitMethod,
    rank: usize,
    y: &RealVector,
    fitted: Vec<f64>,
    coefficients: Option<RealVector>,
) -> Result<FitResult> {
    let fitted = RealVector::new(fitted)?;
    let residuals: Vec<f64> = y.iter().zip(fitted.iter()).map(|(a, b)| a - b).collect();
    let rss = dot(&residuals, &residuals);
    let y_mean = y.mean();
    let tss: f64 = y.iter().map(|v| (v - y_mean) * (v - y_mean)).sum();
    let r_squared = if tss == 0.0 {
        if rss <= PERFECT_FIT_RSS {
            1.0
        } else {
            0.0
        }
    } else {
        1.0 - rss / tss
    };
    Ok(FitResult {
        method,
        rank,
        rss,
        r_squared,
        coefficients,
        fitted,
        residuals: RealVector::new(residuals)?,
    })
}

fn components(y: &RealVector, basis: &OrthonormalBasis) -> Result<Vec<f64>> {
    if y.len() != basis.dim() {
        return Err(Error::Dimension(format!(
            "y has length {}, basis vectors have length {}",
            y.len(),
            basis.dim()
        )));
    }
    Ok(basis
        .q_columns()
        .iter()
        .map(|q| dot(y.as_slice(), q.as_slice()))
        .collect())
}

fn combine(basis: &OrthonormalBasis, comps: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; basis.dim()];
    for (q, c) in basis.q_columns().iter().zip(comps) {
        axpy_in_place(*c, q.as_slice(), &mut out);
    }
    out
}

/// Orthogonal projection of `y` onto the span of `basis`:
/// ŷ = Σⱼ (y·ξⱼ)ξⱼ. A rank-zero basis projects everything to zero.
pub fn project(y: &RealVector, basis: &OrthonormalBasis) -> Result<RealVector> {
    let comps = components(y, basis)?;
    RealVector::new(combine(basis, &comps))
}

/// Least squares by orthogonal projection.
///
/// Coefficients are reported only for full-rank designs with one or two
/// columns. With an intercept column first, the slope comes from the
/// second basis component, β̂₁ = (y·ξ₂)/‖v₂‖, and the intercept from
/// β̂₀ = ȳ − β̂₁x̄. For k > 2 only the fitted values are produced.
pub fn fit_projection(x: &DesignMatrix, y: &RealVector) -> Result<FitResult> {
    fit_projection_with(x, y, GramSchmidtOptions::default())
}

pub fn fit_projection_with(
    x: &DesignMatrix,
    y: &RealVector,
    opts: GramSchmidtOptions,
) -> Result<FitResult> {
    if x.n_rows() != y.len() {
        return Err(Error::Dimension(format!(
            "design has {} rows, y has length {}",
            x.n_rows(),
            y.len()
        )));
    }
    let basis = gram_schmidt_with(x, opts)?;
    let comps = components(y, &basis)?;
    let fitted = combine(&basis, &comps);

    let k = x.n_cols();
    let coefficients = if basis.rank() != k {
        None
    } else {
        match k {
            1 => Some(vec![comps[0] / basis.coeff(0, 0)]),
            2 => {
                let slope = comps[1] / basis.coeff(1, 1);
                let intercept = if x.is_ones_column(0) {
                    let x_mean = x.column(1)?.mean();
                    y.mean() - slope * x_mean
                } else {
                    (comps[0] - basis.coeff(0, 1) * slope) / basis.coeff(0, 0)
                };
                Some(vec![intercept, slope])
            }
            _ => None,
        }
    };
    let coefficients = coefficients.map(RealVector::new).transpose()?;
    finish(FitMethod::Projection, basis.rank(), y, fitted, coefficients)
}

/// Closed-form simple regression:
/// β̂₁ = Σ(xᵢ−x̄)(yᵢ−ȳ) / Σ(xᵢ−x̄)², β̂₀ = ȳ − β̂₁x̄.
///
/// Refuses a constant regressor rather than falling back.
pub fn fit_simple_closed_form(data: &SimpleRegressionData) -> Result<FitResult> {
    let (x, y) = (data.x(), data.y());
    let x_mean = x.mean();
    let y_mean = y.mean();
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (xi, yi) in x.iter().zip(y.iter()) {
        let dx = xi - x_mean;
        sxx += dx * dx;
        sxy += dx * (yi - y_mean);
    }
    let x_norm = norm(x);
    let threshold = DEGENERATE_TOLERANCE * (x_norm * x_norm).max(1.0);
    if sxx < threshold {
        return Err(Error::DegenerateRegressor { sxx, threshold });
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let fitted = x.iter().map(|xi| intercept + slope * xi).collect();
    let coefficients = RealVector::new(vec![intercept, slope])?;
    finish(
        FitMethod::ClosedFormSimple,
        2,
        y,
        fitted,
        Some(coefficients),
    )
}

/// Baseline OLS via the normal equations `(X'X)β = X'y`, solved by
/// Gaussian elimination with partial pivoting.
///
/// Not the library's fitting path; kept as an independent comparison.
/// Fails with [`Error::SingularSystem`] when a pivot drops below
/// `PIVOT_TOLERANCE` times the largest diagonal entry of `X'X`.
pub fn fit_normal_equations(x: &DesignMatrix, y: &RealVector) -> Result<FitResult> {
    let (n, k) = (x.n_rows(), x.n_cols());
    if n != y.len() {
        return Err(Error::Dimension(format!(
            "design has {n} rows, y has length {}",
            y.len()
        )));
    }
    if k == 0 {
        return Err(Error::Dimension("design matrix has no columns".into()));
    }

    // augmented [X'X | X'y], row-major k × (k+1)
    let w = k + 1;
    let mut a = vec![0.0; k * w];
    let cols: Vec<&[f64]> = (0..k).map(|j| x.column_slice(j)).collect::<Result<_>>()?;
    for i in 0..k {
        for j in i..k {
            let g = dot(cols[i], cols[j]);
            a[i * w + j] = g;
            a[j * w + i] = g;
        }
        a[i * w + k] = dot(cols[i], y.as_slice());
    }

    let largest = (0..k).map(|i| a[i * w + i].abs()).fold(0.0, f64::max);
    let threshold = PIVOT_TOLERANCE * largest;

    for step in 0..k {
        let (pivot_row, _) =
            (step..k)
                .map(|r| (r, a[r * w + step].abs()))
                .fold(
                    (step, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        if pivot_row != step {
            for c in 0..w {
                a.swap(step * w + c, pivot_row * w + c);
            }
        }
        let pivot = a[step * w + step];
        if pivot.abs() <= threshold || pivot.is_nan() {
            return Err(Error::SingularSystem {
                step,
                pivot: pivot.abs(),
                threshold,
            });
        }
        for r in step + 1..k {
            let factor = a[r * w + step] / pivot;
            if factor == 0.0 {
                continue;
            }
            for c in step..w {
                a[r * w + c] -= factor * a[step * w + c];
            }
        }
    }

    let mut beta = vec![0.0; k];
    for i in (0..k).rev() {
        let mut s = a[i * w + k];
        for j in i + 1..k {
            s -= a[i * w + j] * beta[j];
        }
        beta[i] = s / a[i * w + i];
    }
    let beta = RealVector::new(beta)?;
    let fitted = x.mul_vec(&beta)?.into_vec();
    finish(FitMethod::NormalEquations, k, y, fitted, Some(beta))
}

/// maxⱼ |r·Xⱼ| / (1 + ‖r‖·‖Xⱼ‖) over the design columns. Near zero when
/// the residual is orthogonal to the column space.
pub fn residual_diagnostics(fit: &FitResult, x: &DesignMatrix) -> Result<f64> {
    let r = &fit.residuals;
    if r.len() != x.n_rows() {
        return Err(Error::Dimension(format!(
            "residuals have length {}, design has {} rows",
            r.len(),
            x.n_rows()
        )));
    }
    let r_norm = norm(r);
    Ok(x.columns().fold(0.0, |worst: f64, col| {
        let c_norm = dot(col, col).sqrt();
        worst.max(dot(r.as_slice(), col).abs() / (1.0 + r_norm * c_norm))
    }))
}
