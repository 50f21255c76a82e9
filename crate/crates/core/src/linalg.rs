//! Dense vectors, column-major design matrices, and the level-1 kernels the
//! rest of the crate is built on.
//!
//! All arithmetic is binary64 with plain left-to-right accumulation. Values
//! are validated on construction: NaN and infinities are rejected, so every
//! `RealVector` and `DesignMatrix` in circulation holds finite data.

use std::ops::Index;

use serde::Serialize;

use crate::error::{Error, Result};

/// A non-empty vector of finite `f64` values.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct RealVector(Vec<f64>);

impl RealVector {
    pub fn new(elements: Vec<f64>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Dimension(
                "vector must have at least one element".into(),
            ));
        }
        check_finite(&elements)?;
        Ok(RealVector(elements))
    }

    pub fn from_slice(elements: &[f64]) -> Result<Self> {
        Self::new(elements.to_vec())
    }

    /// The zero vector of length `n`. Panics if `n == 0`.
    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "RealVector::zeros requires n >= 1");
        RealVector(vec![0.0; n])
    }

    pub fn ones(n: usize) -> Self {
        assert!(n > 0, "RealVector::ones requires n >= 1");
        RealVector(vec![1.0; n])
    }

    /// Wraps data already known to be finite and non-empty.
    pub(crate) fn from_trusted(elements: Vec<f64>) -> Self {
        debug_assert!(!elements.is_empty());
        debug_assert!(elements.iter().all(|v| v.is_finite()));
        RealVector(elements)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.sum() / self.0.len() as f64
    }

    pub fn scaled(&self, alpha: f64) -> RealVector {
        RealVector(self.0.iter().map(|v| alpha * v).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl Index<usize> for RealVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl AsRef<[f64]> for RealVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(position) => Err(Error::NonFinite {
            position,
            value: values[position],
        }),
        None => Ok(()),
    }
}

fn check_same_len(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::Dimension(format!("lengths {a} and {b} differ")));
    }
    Ok(())
}

/// Slice dot product, accumulated left to right. Callers guarantee equal
/// lengths.
#[inline]
pub(crate) fn dot(u: &[f64], v: &[f64]) -> f64 {
    debug_assert_eq!(u.len(), v.len());
    let mut acc = 0.0;
    for (a, b) in u.iter().zip(v) {
        acc += a * b;
    }
    acc
}

/// `y += alpha * x` on slices.
#[inline]
pub(crate) fn axpy_in_place(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Σᵢ uᵢvᵢ.
pub fn inner_product(u: &RealVector, v: &RealVector) -> Result<f64> {
    check_same_len(u.len(), v.len())?;
    Ok(dot(&u.0, &v.0))
}

/// Euclidean norm, `sqrt(inner_product(v, v))`.
pub fn norm(v: &RealVector) -> f64 {
    dot(&v.0, &v.0).sqrt()
}

/// Returns `alpha * x + y` as a new vector.
pub fn axpy(alpha: f64, x: &RealVector, y: &RealVector) -> Result<RealVector> {
    check_same_len(x.len(), y.len())?;
    let mut out = y.0.clone();
    axpy_in_place(alpha, &x.0, &mut out);
    check_finite(&out)?;
    Ok(RealVector(out))
}

/// Dense `n_rows × n_cols` matrix of finite values stored column by column.
///
/// A matrix may have zero columns (an empty design); it always has at least
/// one row.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    data: Vec<f64>,
    n_rows: usize,
    n_cols: usize,
}

impl DesignMatrix {
    /// Builds a matrix from column-major storage.
    pub fn from_column_major(n_rows: usize, n_cols: usize, data: Vec<f64>) -> Result<Self> {
        if n_rows == 0 {
            return Err(Error::Dimension("matrix must have at least one row".into()));
        }
        if data.len() != n_rows * n_cols {
            return Err(Error::Dimension(format!(
                "storage length {} does not match {n_rows}x{n_cols}",
                data.len()
            )));
        }
        check_finite(&data)?;
        Ok(DesignMatrix {
            data,
            n_rows,
            n_cols,
        })
    }

    /// Builds a matrix from row slices, e.g. `&[[1.0, 10.0], [1.0, 20.0]]`.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n_rows = rows.len();
        if n_rows == 0 {
            return Err(Error::Dimension("matrix must have at least one row".into()));
        }
        let n_cols = rows[0].as_ref().len();
        let mut data = vec![0.0; n_rows * n_cols];
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n_cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {n_cols}",
                    row.len()
                )));
            }
            for (j, v) in row.iter().enumerate() {
                data[j * n_rows + i] = *v;
            }
        }
        Self::from_column_major(n_rows, n_cols, data)
    }

    /// Stacks equal-length vectors as columns.
    pub fn from_columns(columns: &[RealVector]) -> Result<Self> {
        let Some(first) = columns.first() else {
            return Err(Error::Dimension(
                "cannot infer row count from zero columns".into(),
            ));
        };
        let n_rows = first.len();
        let mut data = Vec::with_capacity(n_rows * columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != n_rows {
                return Err(Error::Dimension(format!(
                    "column {j} has length {}, expected {n_rows}",
                    c.len()
                )));
            }
            data.extend_from_slice(c.as_slice());
        }
        Ok(DesignMatrix {
            data,
            n_rows,
            n_cols: columns.len(),
        })
    }

    /// Prepends a column of ones to `columns`.
    ///
    /// With no columns, `n_rows` must be given and the result is the
    /// intercept-only `n × 1` design. When both are present they must agree.
    pub fn with_intercept(columns: &[RealVector], n_rows: Option<usize>) -> Result<Self> {
        let n = match (columns.first(), n_rows) {
            (Some(c), Some(n)) if c.len() != n => {
                return Err(Error::Dimension(format!(
                    "column length {} does not match requested {n} rows",
                    c.len()
                )))
            }
            (Some(c), _) => c.len(),
            (None, Some(n)) if n > 0 => n,
            (None, _) => {
                return Err(Error::Dimension(
                    "intercept-only design needs an explicit row count".into(),
                ))
            }
        };
        let mut all = Vec::with_capacity(columns.len() + 1);
        all.push(RealVector::ones(n));
        all.extend(columns.iter().cloned());
        Self::from_columns(&all)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Copy of column `j`.
    pub fn column(&self, j: usize) -> Result<RealVector> {
        self.column_slice(j)
            .map(|c| RealVector::from_trusted(c.to_vec()))
    }

    /// Borrowed view of column `j`.
    pub fn column_slice(&self, j: usize) -> Result<&[f64]> {
        if j >= self.n_cols {
            return Err(Error::Index {
                index: j,
                len: self.n_cols,
            });
        }
        Ok(&self.data[j * self.n_rows..(j + 1) * self.n_rows])
    }

    pub(crate) fn columns(&self) -> impl Iterator<Item = &[f64]> {
        // chunks_exact panics on a zero chunk size; n_rows >= 1 always.
        self.data.chunks_exact(self.n_rows)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.n_rows + i]
    }

    /// True when column `j` exists and every entry is exactly 1.
    pub fn is_ones_column(&self, j: usize) -> bool {
        self.column_slice(j)
            .map(|c| c.iter().all(|&v| v == 1.0))
            .unwrap_or(false)
    }

    /// Matrix-vector product `X·beta`.
    pub fn mul_vec(&self, beta: &RealVector) -> Result<RealVector> {
        if beta.len() != self.n_cols {
            return Err(Error::Dimension(format!(
                "coefficient length {} does not match {} columns",
                beta.len(),
                self.n_cols
            )));
        }
        let mut out = vec![0.0; self.n_rows];
        for (col, b) in self.columns().zip(beta.iter()) {
            axpy_in_place(*b, col, &mut out);
        }
        check_finite(&out)?;
        Ok(RealVector(out))
    }

    /// New matrix with column `j` multiplied by `c`.
    pub fn with_scaled_column(&self, j: usize, c: f64) -> Result<Self> {
        self.column_slice(j)?;
        let mut data = self.data.clone();
        for v in &mut data[j * self.n_rows..(j + 1) * self.n_rows] {
            *v *= c;
        }
        Self::from_column_major(self.n_rows, self.n_cols, data)
    }

    /// New matrix whose column `p` is column `order[p]` of `self`.
    pub fn with_column_order(&self, order: &[usize]) -> Result<Self> {
        let cols = order
            .iter()
            .map(|&j| self.column(j))
            .collect::<Result<Vec<_>>>()?;
        if cols.is_empty() {
            return Self::from_column_major(self.n_rows, 0, Vec::new());
        }
        Self::from_columns(&cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> RealVector {
        RealVector::from_slice(xs).unwrap()
    }

    #[test]
    fn inner_product_examples() {
        assert_eq!(
            inner_product(&v(&[1., 1., 1.]), &v(&[2., 3., 4.])).unwrap(),
            9.0
        );
        assert_eq!(inner_product(&v(&[1., 0.]), &v(&[0., 1.])).unwrap(), 0.0);
        let centered = v(&[-1.5, -0.5, 0.5, 1.5]);
        assert_eq!(inner_product(&centered, &RealVector::ones(4)).unwrap(), 0.0);
    }

    #[test]
    fn inner_product_length_mismatch() {
        let err = inner_product(&v(&[1., 2.]), &v(&[1., 2., 3.])).unwrap_err();
        assert!(matches!(err, Error::Dimension(_)));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm(&v(&[3., 4.])), 5.0);
        assert_eq!(norm(&RealVector::zeros(3)), 0.0);
        let n = norm(&v(&[-1.5, -0.5, 0.5, 1.5]));
        assert!((n - 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn axpy_examples() {
        assert_eq!(
            axpy(2., &v(&[1., 1.]), &v(&[0., 0.])).unwrap(),
            v(&[2., 2.])
        );
        assert_eq!(
            axpy(0., &v(&[5., 7.]), &v(&[1., 2.])).unwrap(),
            v(&[1., 2.])
        );
        assert_eq!(
            axpy(-1., &v(&[1., 2.]), &v(&[1., 2.])).unwrap(),
            v(&[0., 0.])
        );
        assert!(axpy(1., &v(&[1.]), &v(&[1., 2.])).is_err());
    }

    #[test]
    fn rejects_non_finite_and_empty() {
        assert!(matches!(
            RealVector::new(vec![1.0, f64::NAN]),
            Err(Error::NonFinite { position: 1, .. })
        ));
        assert!(RealVector::new(vec![f64::INFINITY]).is_err());
        assert!(RealVector::new(vec![]).is_err());
        assert!(DesignMatrix::from_rows(&[[1.0, f64::NEG_INFINITY]]).is_err());
    }

    #[test]
    fn column_access() {
        let m = DesignMatrix::from_rows(&[[1., 10.], [1., 20.], [1., 30.]]).unwrap();
        assert_eq!(m.column(0).unwrap(), v(&[1., 1., 1.]));
        assert_eq!(m.column(1).unwrap(), v(&[10., 20., 30.]));
        assert_eq!(m.column(2).unwrap_err(), Error::Index { index: 2, len: 2 });

        // the copy is detached from the matrix
        let mut copy = m.column(1).unwrap().into_vec();
        copy[0] = -1.0;
        assert_eq!(m.get(0, 1), 10.0);
    }

    #[test]
    fn with_intercept_examples() {
        let m = DesignMatrix::with_intercept(&[v(&[10., 20., 30.])], None).unwrap();
        let expected = DesignMatrix::from_rows(&[[1., 10.], [1., 20.], [1., 30.]]).unwrap();
        assert_eq!(m, expected);

        let only = DesignMatrix::with_intercept(&[], Some(2)).unwrap();
        assert_eq!(only, DesignMatrix::from_rows(&[[1.], [1.]]).unwrap());

        assert!(DesignMatrix::with_intercept(&[], None).is_err());
        let ragged = DesignMatrix::with_intercept(&[v(&[1., 2.]), v(&[1., 2., 3.])], None);
        assert!(matches!(ragged, Err(Error::Dimension(_))));
    }

    #[test]
    fn mul_vec_and_ones_detection() {
        let m = DesignMatrix::with_intercept(&[v(&[0., 1., 2.])], None).unwrap();
        assert!(m.is_ones_column(0));
        assert!(!m.is_ones_column(1));
        assert_eq!(m.mul_vec(&v(&[0.5, 1.5])).unwrap(), v(&[0.5, 2.0, 3.5]));
        assert!(m.mul_vec(&v(&[1.0])).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
            (1usize..40).prop_flat_map(|n| {
                (
                    prop::collection::vec(-1e6..1e6f64, n),
                    prop::collection::vec(-1e6..1e6f64, n),
                )
            })
        }

        proptest! {
            #[test]
            fn inner_product_symmetric((a, b) in pair()) {
                let (a, b) = (v(&a), v(&b));
                prop_assert_eq!(inner_product(&a, &b).unwrap(), inner_product(&b, &a).unwrap());
            }

            #[test]
            fn norm_squared_matches_inner_product(a in prop::collection::vec(-1e6..1e6f64, 1..40)) {
                let a = v(&a);
                let ip = inner_product(&a, &a).unwrap();
                let n2 = norm(&a).powi(2);
                prop_assert!((n2 - ip).abs() <= 1e-15 * ip);
            }

            #[test]
            fn self_cancellation_is_exact(a in prop::collection::vec(-1e6..1e6f64, 1..40)) {
                let a = v(&a);
                let z = axpy(-1.0, &a, &a).unwrap();
                prop_assert!(z.iter().all(|&x| x == 0.0));
            }

            #[test]
            fn intercept_column_is_ones(a in prop::collection::vec(-1e6..1e6f64, 1..40)) {
                let m = DesignMatrix::with_intercept(&[v(&a)], None).unwrap();
                prop_assert_eq!(m.column(0).unwrap(), RealVector::ones(a.len()));
            }
        }
    }
}
