//! Gram–Schmidt orthonormalization of a design matrix's columns.
//!
//! Columns are processed in their natural order (intercept first) with the
//! modified update order: each projection is subtracted from the working
//! vector as soon as its coefficient is known, and the next coefficient is
//! taken against the updated vector. A column whose residual norm falls to
//! `DROP_TOLERANCE · max(1, ‖Xⱼ‖)` or below is linearly dependent on the
//! columns before it; it is recorded in [`OrthonormalBasis::dropped`] and
//! contributes no basis vector. No pivoting is done, so which column drops
//! is determined by column order alone.
//!
//! Householder or Givens QR would give the same span with better
//! worst-case orthogonality; they are not used here.

use crate::error::{Error, Result};
use crate::linalg::{axpy_in_place, dot, DesignMatrix, RealVector};

/// Relative residual-norm threshold below which a column is dropped.
pub const DROP_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GramSchmidtOptions {
    /// Run a second modified Gram–Schmidt sweep over each column against
    /// the basis built so far. Off by default.
    pub reorthogonalize: bool,
}

/// Orthonormal basis for the column space of a [`DesignMatrix`], together
/// with the upper-triangular change-of-basis record.
///
/// `coeff(p, j)` is the component of original column `j` along basis vector
/// `p`. For a kept column `j` with basis position `p`, `coeff(p, j)` is the
/// norm of its residual before normalization. When no column is dropped,
/// `p == j` and the record is the usual `R` factor with `X = Q·R`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalBasis {
    q_columns: Vec<RealVector>,
    /// rank × n_cols, row-major.
    coeffs: Vec<f64>,
    residual_norms: Vec<f64>,
    kept: Vec<usize>,
    dropped: Vec<usize>,
    n_rows: usize,
    n_cols: usize,
}

impl OrthonormalBasis {
    /// The orthonormal vectors ξ, in the order of the kept columns.
    pub fn q_columns(&self) -> &[RealVector] {
        &self.q_columns
    }

    pub fn rank(&self) -> usize {
        self.q_columns.len()
    }

    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    pub fn dropped(&self) -> &[usize] {
        &self.dropped
    }

    /// Length of each basis vector (rows of the source matrix).
    pub fn dim(&self) -> usize {
        self.n_rows
    }

    pub fn n_source_cols(&self) -> usize {
        self.n_cols
    }

    /// Component of original column `col` along basis vector `basis_index`.
    pub fn coeff(&self, basis_index: usize, col: usize) -> f64 {
        assert!(basis_index < self.rank() && col < self.n_cols);
        self.coeffs[basis_index * self.n_cols + col]
    }

    /// Norm of column `col`'s residual after removing the earlier basis
    /// directions, whether or not the column was kept.
    pub fn residual_norm(&self, col: usize) -> f64 {
        self.residual_norms[col]
    }

    /// Basis position of original column `col`, if it was kept.
    pub fn basis_index_of(&self, col: usize) -> Option<usize> {
        self.kept.iter().position(|&k| k == col)
    }

    /// Reconstruction Σₚ coeff(p, col)·ξₚ of original column `col`.
    pub fn reconstruct_column(&self, col: usize) -> RealVector {
        let mut out = vec![0.0; self.n_rows];
        for (p, q) in self.q_columns.iter().enumerate() {
            axpy_in_place(self.coeff(p, col), q.as_slice(), &mut out);
        }
        RealVector::from_trusted(out)
    }

    /// max over pairs of |ξₐ·ξᵦ − δₐᵦ|.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, qa) in self.q_columns.iter().enumerate() {
            for (b, qb) in self.q_columns.iter().enumerate().skip(a) {
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot(qa.as_slice(), qb.as_slice()) - target).abs());
            }
        }
        worst
    }
}

/// Orthonormalizes the columns of `x` with default options.
pub fn gram_schmidt(x: &DesignMatrix) -> Result<OrthonormalBasis> {
    gram_schmidt_with(x, GramSchmidtOptions::default())
}

pub fn gram_schmidt_with(x: &DesignMatrix, opts: GramSchmidtOptions) -> Result<OrthonormalBasis> {
    let n = x.n_rows();
    let k = x.n_cols();
    if k == 0 {
        return Err(Error::Dimension("design matrix has no columns".into()));
    }

    let mut q_columns: Vec<Vec<f64>> = Vec::with_capacity(k.min(n));
    // coefficient rows, one per basis vector, each of length k
    let mut coeff_rows: Vec<Vec<f64>> = Vec::with_capacity(k.min(n));
    let mut residual_norms = Vec::with_capacity(k);
    let mut kept = Vec::with_capacity(k);
    let mut dropped = Vec::new();

    for (j, col) in x.columns().enumerate() {
        let mut work = col.to_vec();
        let mut comps = vec![0.0; q_columns.len()];

        let sweeps = if opts.reorthogonalize { 2 } else { 1 };
        for _ in 0..sweeps {
            for (p, q) in q_columns.iter().enumerate() {
                let r = dot(q, &work);
                axpy_in_place(-r, q, &mut work);
                comps[p] += r;
            }
        }
        for (p, r) in comps.into_iter().enumerate() {
            coeff_rows[p][j] = r;
        }

        let residual = dot(&work, &work).sqrt();
        residual_norms.push(residual);
        let original_norm = dot(col, col).sqrt();
        if residual <= DROP_TOLERANCE * original_norm.max(1.0) {
            dropped.push(j);
            continue;
        }

        let inv = 1.0 / residual;
        work.iter_mut().for_each(|v| *v *= inv);
        let mut row = vec![0.0; k];
        row[j] = residual;
        coeff_rows.push(row);
        q_columns.push(work);
        kept.push(j);
    }

    Ok(OrthonormalBasis {
        q_columns: q_columns
            .into_iter()
            .map(RealVector::from_trusted)
            .collect(),
        coeffs: coeff_rows.concat(),
        residual_norms,
        kept,
        dropped,
        n_rows: n,
        n_cols: k,
    })
}

/// The two-column specialization: xᵢ − x̄, the residual of `x_col` after
/// removing its component along the ones vector.
pub fn centered_second_vector(x_col: &RealVector) -> RealVector {
    let mean = x_col.mean();
    RealVector::from_trusted(x_col.iter().map(|v| v - mean).collect())
}
