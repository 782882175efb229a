//! Dense exact linear algebra over Gaussian rationals.
//!
//! Everything a classifier needs reduces to Gauss–Jordan elimination here:
//! reduced row-echelon form, kernels, eigenspaces for the handful of
//! eigenvalues that actually occur, subspace membership and Sylvester's
//! positive-definiteness criterion.  Subspaces are kept in a canonical form
//! (reduced row-echelon basis with strictly increasing pivots) so subspace
//! equality is a syntactic check.

use super::scalar::Scalar;
use crate::Error;
use num_traits::Signed;
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for k in 0..n {
            m.set(k, k, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map(Vec::len).unwrap_or(0);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Matrix { rows: nrows, cols: ncols, entries: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Matrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(Scalar::is_real)
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        (0..self.rows).all(|r| (0..r).all(|c| self.at(r, c) == self.at(c, r)))
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape");
        Matrix::from_fn(self.rows, rhs.cols, |r, c| {
            let mut acc = Scalar::zero();
            for k in 0..self.cols {
                acc = acc + self.at(r, k) * rhs.at(k, c);
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|r| {
                let mut acc = Scalar::zero();
                for k in 0..self.cols {
                    acc = acc + self.at(r, k) * &v[k];
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape");
        Matrix::from_fn(self.rows, self.cols, |r, c| self.at(r, c) + rhs.at(r, c))
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape");
        Matrix::from_fn(self.rows, self.cols, |r, c| self.at(r, c) - rhs.at(r, c))
    }

    pub fn neg(&self) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |r, c| -self.at(r, c))
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |r, c| self.at(r, c) * s)
    }

    /// Extract the `rows × cols` block with top-left corner `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |r, c| self.at(r0 + r, c0 + c).clone())
    }

    /// Assemble `[[a, b], [c, d]]` from four equally shaped blocks.
    pub fn from_blocks(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Matrix {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        Matrix::from_fn(a.rows + c.rows, a.cols + b.cols, |r, col| {
            match (r < a.rows, col < a.cols) {
                (true, true) => a.at(r, col).clone(),
                (true, false) => b.at(r, col - a.cols).clone(),
                (false, true) => c.at(r - a.rows, col).clone(),
                (false, false) => d.at(r - a.rows, col - a.cols).clone(),
            }
        })
    }

    /// Determinant by fraction-free-enough Gaussian elimination (exact
    /// division is available, so plain elimination with pivoting suffices).
    pub fn det(&self) -> Scalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Scalar::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !m.at(r, k).is_zero()) else {
                return Scalar::zero();
            };
            if p != k {
                m.swap_rows(p, k);
                det = -det;
            }
            let pivot = m.at(k, k).clone();
            det = det * &pivot;
            for r in k + 1..n {
                if m.at(r, k).is_zero() {
                    continue;
                }
                let factor = m.at(r, k) / &pivot;
                for c in k..n {
                    let v = m.at(r, c) - &(&factor * m.at(k, c));
                    m.set(r, c, v);
                }
            }
        }
        det
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Matrix::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self.at(r, c).clone()
            } else if c - n == r {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        });
        let (rank, reduced) = aug.rref_in_place();
        let _ = rank;
        for k in 0..n {
            if !reduced.at(k, k).is_one() {
                return None;
            }
        }
        Some(reduced.block(0, n, n, n))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn rref_in_place(&mut self) -> (usize, Matrix) {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivot_row = 0;
        for col in 0..cols {
            if pivot_row == rows {
                break;
            }
            let Some(p) = (pivot_row..rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(p, pivot_row);
            let inv = self.at(pivot_row, col).recip().expect("nonzero pivot");
            for c in col..cols {
                let v = self.at(pivot_row, c) * &inv;
                self.set(pivot_row, c, v);
            }
            for r in 0..rows {
                if r == pivot_row || self.at(r, col).is_zero() {
                    continue;
                }
                let factor = self.at(r, col).clone();
                for c in col..cols {
                    let v = self.at(r, c) - &(&factor * self.at(pivot_row, c));
                    self.set(r, c, v);
                }
            }
            pivot_row += 1;
        }
        (pivot_row, self.clone())
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|s| s.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Reduced row-echelon form together with the rank.
pub fn rref(m: &Matrix) -> (usize, Matrix) {
    let mut work = m.clone();
    work.rref_in_place()
}

/// A linear subspace of a coordinate space, kept in canonical form: the
/// stored basis is the reduced row-echelon form of any spanning set, with
/// pivots strictly increasing, so two subspaces are equal iff their stored
/// bases are entry-wise equal.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<Scalar>>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Vec::new() }
    }

    /// Canonicalize an arbitrary spanning set.
    pub fn from_spans(ambient_dim: usize, spans: &[Vec<Scalar>]) -> Result<Self, Error> {
        for v in spans {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch { expected: ambient_dim, got: v.len() });
            }
        }
        if spans.is_empty() {
            return Ok(Subspace::zero(ambient_dim));
        }
        let (rank, reduced) = rref(&Matrix::from_rows(spans.to_vec()));
        let basis = (0..rank).map(|r| reduced.row(r).to_vec()).collect();
        Ok(Subspace { ambient_dim, basis })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    fn pivot(row: &[Scalar]) -> Option<usize> {
        row.iter().position(|s| !s.is_zero())
    }

    /// Exact membership by elimination against the canonical basis.
    pub fn contains(&self, v: &[Scalar]) -> Result<bool, Error> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, got: v.len() });
        }
        let mut residual = v.to_vec();
        for row in &self.basis {
            let p = Self::pivot(row).expect("canonical basis rows are nonzero");
            if residual[p].is_zero() {
                continue;
            }
            let factor = residual[p].clone();
            for (rv, bv) in residual.iter_mut().zip(row) {
                *rv = &*rv - &(&factor * bv);
            }
        }
        Ok(residual.iter().all(Scalar::is_zero))
    }

    /// The smallest subspace containing both operands.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace, Error> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: other.ambient_dim,
            });
        }
        let spans: Vec<Vec<Scalar>> =
            self.basis.iter().chain(other.basis.iter()).cloned().collect();
        Subspace::from_spans(self.ambient_dim, &spans)
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Subspace dim {} of {} [", self.dim(), self.ambient_dim)?;
        for row in &self.basis {
            let row: Vec<String> = row.iter().map(|s| s.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Null space `{v : m v = 0}` in canonical form.
pub fn kernel(m: &Matrix) -> Subspace {
    let (rank, reduced) = rref(m);
    let cols = m.cols();
    let mut pivot_cols = Vec::with_capacity(rank);
    for r in 0..rank {
        let p = reduced.row(r).iter().position(|s| !s.is_zero()).expect("nonzero rref row");
        pivot_cols.push(p);
    }
    let mut vectors = Vec::new();
    for free in 0..cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Scalar::zero(); cols];
        v[free] = Scalar::one();
        for (r, &p) in pivot_cols.iter().enumerate() {
            v[p] = -reduced.at(r, free);
        }
        vectors.push(v);
    }
    Subspace::from_spans(cols, &vectors).expect("kernel vectors have ambient length")
}

/// Eigenspace of `m` for the exact eigenvalue `lambda`.
pub fn eigenspace(m: &Matrix, lambda: &Scalar) -> Subspace {
    assert!(m.is_square(), "eigenspace of a non-square matrix");
    let shifted = m.sub(&Matrix::identity(m.rows()).scale(lambda));
    kernel(&shifted)
}

/// Sylvester's criterion on an exactly symmetric real matrix: positive
/// definite iff every leading principal minor is positive.
pub fn is_positive_definite(m: &Matrix) -> Result<bool, Error> {
    if !m.is_real() {
        return Err(Error::NotReal);
    }
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    for k in 1..=m.rows() {
        let minor = m.block(0, 0, k, k).det();
        if !minor.re().is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn parse(m: &[&str]) -> Matrix {
        Matrix::from_rows(
            m.iter()
                .map(|row| row.split(',').map(|t| t.trim().parse::<Scalar>().unwrap()).collect())
                .collect(),
        )
    }

    #[test]
    fn rref_identity_is_identity() {
        let (rank, reduced) = rref(&Matrix::identity(2));
        assert_eq!(rank, 2);
        assert_eq!(reduced, Matrix::identity(2));
    }

    #[test]
    fn rref_collapses_complex_dependent_rows() {
        // second row is i times the first
        let m = parse(&["1, 0+1i", "0+1i, -1"]);
        let (rank, reduced) = rref(&m);
        assert_eq!(rank, 1);
        assert_eq!(reduced.row(0), parse(&["1, 0+1i"]).row(0));
        assert!(reduced.row(1).iter().all(Scalar::is_zero));
    }

    #[test]
    fn kernel_of_zero_map_is_everything() {
        let k = kernel(&Matrix::zeros(3, 3));
        assert_eq!(k.dim(), 3);
        assert_eq!(k, Subspace::from_spans(3, &Matrix::identity(3).entries_rows()).unwrap());
    }

    #[test]
    fn kernel_of_invertible_matrix_is_zero() {
        let m = parse(&["1, 2", "3, 4"]);
        assert_eq!(kernel(&m).dim(), 0);
    }

    #[test]
    fn kernel_basis_is_canonical() {
        let m = parse(&["1, 1"]);
        let k = kernel(&m);
        assert_eq!(k.basis(), &[vec![s(1), s(-1)]]);
    }

    #[test]
    fn eigenspace_at_zero_is_the_kernel() {
        let m = parse(&["0, 1", "0, 0"]);
        assert_eq!(eigenspace(&m, &Scalar::zero()), kernel(&m));
    }

    #[test]
    fn membership_is_decided_exactly() {
        let span = Subspace::from_spans(2, &[vec![s(1), -Scalar::i()]]).unwrap();
        let scaled = vec![Scalar::i(), Scalar::one()];
        assert!(span.contains(&scaled).unwrap());
        assert!(!span.contains(&[s(1), s(0)]).unwrap());
        assert!(span.contains(&[s(0), s(0)]).unwrap());
        assert!(span.contains(&[s(0), s(0), s(0)]).is_err());
    }

    #[test]
    fn different_spanning_sets_compare_equal() {
        let a = Subspace::from_spans(3, &[vec![s(1), s(1), s(0)], vec![s(0), s(1), s(1)]]).unwrap();
        let b = Subspace::from_spans(
            3,
            &[vec![s(1), s(2), s(1)], vec![s(2), s(1), s(-1)], vec![s(3), s(3), s(0)]],
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sylvester_detects_signature() {
        assert!(is_positive_definite(&Matrix::identity(4)).unwrap());
        // the neutral pairing gram matrix has signature (n, n)
        let neutral = parse(&["0, 1/2", "1/2, 0"]);
        assert!(!is_positive_definite(&neutral).unwrap());
        let asym = parse(&["1, 2", "0, 1"]);
        assert_eq!(is_positive_definite(&asym), Err(Error::NotSymmetric));
        let cplx = parse(&["0+1i, 0", "0, 1"]);
        assert_eq!(is_positive_definite(&cplx), Err(Error::NotReal));
    }

    #[test]
    fn inverse_of_rotation_block() {
        let m = parse(&["0, -1", "1, 0"]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        assert!(parse(&["1, 1", "1, 1"]).inverse().is_none());
    }

    impl Matrix {
        fn entries_rows(&self) -> Vec<Vec<Scalar>> {
            (0..self.rows()).map(|r| self.row(r).to_vec()).collect()
        }
    }

    prop_compose! {
        fn arb_matrix(max_dim: usize)(rows in 1..=max_dim, cols in 1..=max_dim)
            (entries in proptest::collection::vec(-4i64..=4, rows * cols),
             ims in proptest::collection::vec(-2i64..=2, rows * cols),
             rows in Just(rows), cols in Just(cols)) -> Matrix {
            let mut k = 0;
            Matrix::from_fn(rows, cols, |_, _| {
                let v = Scalar::from_int(entries[k]) + Scalar::i() * Scalar::from_int(ims[k]);
                k += 1;
                v
            })
        }
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(m in arb_matrix(5)) {
            let (rank, reduced) = rref(&m);
            let (rank2, reduced2) = rref(&reduced);
            prop_assert_eq!(rank, rank2);
            prop_assert_eq!(reduced, reduced2);
        }

        #[test]
        fn kernel_dimension_complements_rank(m in arb_matrix(5)) {
            let (rank, _) = rref(&m);
            let k = kernel(&m);
            prop_assert_eq!(k.dim() + rank, m.cols());
            for v in k.basis() {
                prop_assert!(m.mul_vec(v).iter().all(Scalar::is_zero));
            }
        }

        #[test]
        fn eigenvectors_satisfy_their_equation(m in arb_matrix(4)) {
            prop_assume!(m.is_square());
            for lambda in [Scalar::zero(), Scalar::i(), -Scalar::i()] {
                let space = eigenspace(&m, &lambda);
                for v in space.basis() {
                    let image = m.mul_vec(v);
                    let expected: Vec<Scalar> = v.iter().map(|x| x * &lambda).collect();
                    prop_assert_eq!(&image, &expected);
                }
            }
        }

        #[test]
        fn canonical_form_ignores_row_scaling(m in arb_matrix(4)) {
            let rows: Vec<Vec<Scalar>> = (0..m.rows()).map(|r| m.row(r).to_vec()).collect();
            let scaled: Vec<Vec<Scalar>> = rows
                .iter()
                .map(|r| r.iter().map(|x| x * &(Scalar::from_int(3) + Scalar::i())).collect())
                .collect();
            let a = Subspace::from_spans(m.cols(), &rows).unwrap();
            let b = Subspace::from_spans(m.cols(), &scaled).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
