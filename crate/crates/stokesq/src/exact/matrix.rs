//! Dense exact matrices over ℚ(i).
//!
//! Every canonical-basis choice in the crate funnels through the RREF here:
//! pivots are taken leftmost-column-first, topmost-row-first, so kernels,
//! cokernels, and inverses are bit-deterministic functions of their input.

use std::fmt;
use std::ops::Mul;

use super::gauss::GaussRational;
use crate::error::{Error, Result};

/// Row-major dense matrix over ℚ(i). Shapes with zero rows or columns are
/// legal and arise for empty quivers and skyscraper data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixQi {
    rows: usize,
    cols: usize,
    data: Vec<GaussRational>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: MatrixQi,
    pub pivots: Vec<usize>,
}

impl MatrixQi {
    pub fn zero(rows: usize, cols: usize) -> Self {
        MatrixQi {
            rows,
            cols,
            data: vec![GaussRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, GaussRational::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> GaussRational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        MatrixQi { rows, cols, data }
    }

    /// Build from explicit rows; all rows must share one length.
    pub fn from_rows(rows_in: Vec<Vec<GaussRational>>) -> Result<Self> {
        let rows = rows_in.len();
        let cols = rows_in.first().map_or(0, |r| r.len());
        for (i, r) in rows_in.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::dims(format!(
                    "ragged matrix: row 0 has {cols} entries, row {i} has {}",
                    r.len()
                )));
            }
        }
        Ok(MatrixQi {
            rows,
            cols,
            data: rows_in.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor from integer literals.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_fn(rows.len(), cols, |i, j| GaussRational::from_int(rows[i][j]))
    }

    /// Permutation matrix sending basis vector j to basis vector perm[j].
    pub fn from_permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zero(n, n);
        for (j, &i) in perm.iter().enumerate() {
            m.set(i, j, GaussRational::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: GaussRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(GaussRational::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && self.data.iter().enumerate().all(|(k, v)| {
                let (i, j) = (k / self.cols.max(1), k % self.cols.max(1));
                if i == j { v.is_one() } else { v.is_zero() }
            })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| -self.get(i, j))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add shape");
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + rhs.get(i, j))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub shape");
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - rhs.get(i, j))
    }

    pub fn scale(&self, s: &GaussRational) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * s)
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul shape");
        Self::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = GaussRational::zero();
            for k in 0..self.cols {
                acc = &acc + &(self.get(i, k) * rhs.get(k, j));
            }
            acc
        })
    }

    /// Stack blocks; every block row must agree on height, every block
    /// column on width. Zero-sized blocks participate normally.
    pub fn from_blocks(blocks: &[Vec<&MatrixQi>]) -> Self {
        let block_rows = blocks.len();
        let block_cols = blocks.first().map_or(0, |r| r.len());
        let heights: Vec<usize> = blocks.iter().map(|r| r[0].rows).collect();
        let widths: Vec<usize> = (0..block_cols).map(|j| blocks[0][j].cols).collect();
        for (bi, row) in blocks.iter().enumerate() {
            assert_eq!(row.len(), block_cols, "ragged block row");
            for (bj, b) in row.iter().enumerate() {
                assert_eq!(b.rows, heights[bi], "block height mismatch");
                assert_eq!(b.cols, widths[bj], "block width mismatch");
            }
        }
        let total_rows: usize = heights.iter().sum();
        let total_cols: usize = widths.iter().sum();
        let mut m = Self::zero(total_rows, total_cols);
        let mut row_off = 0;
        for bi in 0..block_rows {
            let mut col_off = 0;
            for bj in 0..block_cols {
                let b = blocks[bi][bj];
                for i in 0..b.rows {
                    for j in 0..b.cols {
                        m.set(row_off + i, col_off + j, b.get(i, j).clone());
                    }
                }
                col_off += widths[bj];
            }
            row_off += heights[bi];
        }
        m
    }

    /// Square block-diagonal matrix with the given (square) diagonal blocks.
    pub fn block_diag(blocks: &[&MatrixQi]) -> Self {
        let total: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = Self::zero(total, total);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, b.cols, "diagonal block not square");
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(off + i, off + j, b.get(i, j).clone());
                }
            }
            off += b.rows;
        }
        m
    }

    pub fn hstack(parts: &[&MatrixQi]) -> Self {
        Self::from_blocks(&[parts.to_vec()])
    }

    pub fn vstack(parts: &[&MatrixQi]) -> Self {
        let rows: Vec<Vec<&MatrixQi>> = parts.iter().map(|p| vec![*p]).collect();
        Self::from_blocks(&rows)
    }

    /// Copy of columns [from, to).
    pub fn columns(&self, from: usize, to: usize) -> Self {
        Self::from_fn(self.rows, to - from, |i, j| self.get(i, from + j).clone())
    }

    /// Reduced row echelon form with leftmost-pivot selection: columns are
    /// scanned left to right, and within a column the topmost unused row
    /// with a nonzero entry becomes the pivot.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let Some(src) = (pivot_row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if src != pivot_row {
                for j in 0..m.cols {
                    let a = m.get(pivot_row, j).clone();
                    let b = m.get(src, j).clone();
                    m.set(pivot_row, j, b);
                    m.set(src, j, a);
                }
            }
            let inv = m.get(pivot_row, col).recip();
            for j in col..m.cols {
                let v = m.get(pivot_row, j) * &inv;
                m.set(pivot_row, j, v);
            }
            for r in 0..m.rows {
                if r != pivot_row && !m.get(r, col).is_zero() {
                    let factor = m.get(r, col).clone();
                    for j in col..m.cols {
                        let v = m.get(r, j) - &(&factor * m.get(pivot_row, j));
                        m.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Columns form the RREF free-column basis of {x : m·x = 0}: basis
    /// vector for free column j has 1 at j and minus the RREF entry at each
    /// pivot coordinate, listed in ascending j.
    pub fn kernel_basis(&self) -> MatrixQi {
        let Rref { matrix: r, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = MatrixQi::zero(self.cols, free.len());
        for (k, &j) in free.iter().enumerate() {
            basis.set(j, k, GaussRational::one());
            for (prow, &pcol) in pivots.iter().enumerate() {
                basis.set(pcol, k, -r.get(prow, j));
            }
        }
        basis
    }

    /// Projection onto coker(m) = ℚ(i)^N / im(m) in the canonical basis.
    ///
    /// The image's RREF basis (rows of rref(mᵗ)) splits ℚ(i)^N into the
    /// image plus the span of the pivot-complement coordinates; each row
    /// of `proj` is the functional reading off one complement coordinate,
    /// scaled so its leading nonzero entry is 1. `proj·m = 0` exactly and
    /// proj has full row rank N − rank m.
    pub fn cokernel_projection(&self) -> (MatrixQi, usize) {
        let n = self.rows;
        let Rref { matrix: r, pivots } = self.transpose().rref();
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut proj = MatrixQi::zero(free.len(), n);
        for (k, &j) in free.iter().enumerate() {
            proj.set(k, j, GaussRational::one());
            for (prow, &pcol) in pivots.iter().enumerate() {
                proj.set(k, pcol, -r.get(prow, j));
            }
            // Normalize the leading nonzero to 1; a pivot coordinate can
            // precede j, so the raw functional may lead with -r entries.
            let lead = (0..n).find(|&c| !proj.get(k, c).is_zero()).expect("nonzero row");
            let inv = proj.get(k, lead).recip();
            for c in 0..n {
                let v = proj.get(k, c) * &inv;
                proj.set(k, c, v);
            }
        }
        let dim = free.len();
        (proj, dim)
    }

    /// Exact inverse via RREF of [m | I].
    pub fn inverse(&self) -> Result<MatrixQi> {
        if !self.is_square() {
            return Err(Error::dims(format!(
                "inverse of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let aug = MatrixQi::hstack(&[self, &MatrixQi::identity(n)]);
        let Rref { matrix: r, pivots } = aug.rref();
        if pivots.len() < n || pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) {
            return Err(Error::SingularMatrix {
                context: format!("{n}x{n} matrix has rank {}", self.rank()),
            });
        }
        Ok(r.columns(n, 2 * n))
    }

    /// One solution X of self·X = B (free coordinates set to 0), or None
    /// if the system is inconsistent. Unique exactly when the kernel is 0.
    pub fn solve(&self, b: &MatrixQi) -> Option<MatrixQi> {
        assert_eq!(self.rows, b.rows, "solve shape");
        let aug = MatrixQi::hstack(&[self, b]);
        let Rref { matrix: r, pivots } = aug.rref();
        // Any pivot landing in the B block marks an inconsistent row.
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = MatrixQi::zero(self.cols, b.cols);
        for (prow, &pcol) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pcol, j, r.get(prow, self.cols + j).clone());
            }
        }
        Some(x)
    }

    /// One solution X of X·a = self, via the transposed system.
    pub fn solve_left(&self, a: &MatrixQi) -> Option<MatrixQi> {
        a.transpose().solve(&self.transpose()).map(|x| x.transpose())
    }

    pub fn trace(&self) -> GaussRational {
        assert!(self.is_square(), "trace of non-square matrix");
        let mut acc = GaussRational::zero();
        for i in 0..self.rows {
            acc = &acc + self.get(i, i);
        }
        acc
    }

    /// Coefficients [c₁, …, c_n] of the characteristic polynomial
    /// λⁿ + c₁λⁿ⁻¹ + ⋯ + c_n, by the trace recurrence (exact division by
    /// integer step counts only). Equal multisets of eigenvalues give
    /// equal coefficient lists, which is how gauge invariance is asserted.
    pub fn char_poly(&self) -> Vec<GaussRational> {
        assert!(self.is_square(), "char_poly of non-square matrix");
        let n = self.rows;
        let mut coeffs = Vec::with_capacity(n);
        let mut m = self.clone();
        for k in 1..=n {
            let c = -&(&m.trace() * &GaussRational::from_rational(
                super::rational::Rational::new(1, k as i64),
            ));
            coeffs.push(c.clone());
            if k < n {
                let mut shifted = m;
                for i in 0..n {
                    let v = shifted.get(i, i) + &c;
                    shifted.set(i, i, v);
                }
                m = self.matmul(&shifted);
            }
        }
        coeffs
    }
}

impl Mul for &MatrixQi {
    type Output = MatrixQi;
    fn mul(self, rhs: &MatrixQi) -> MatrixQi {
        self.matmul(rhs)
    }
}

impl fmt::Display for MatrixQi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::Rational;

    fn gq(re_n: i64, re_d: i64) -> GaussRational {
        GaussRational::from_rational(Rational::new(re_n, re_d))
    }

    #[test]
    fn identity_inverse_is_identity() {
        let id = MatrixQi::identity(3);
        assert_eq!(id.inverse().unwrap(), id);
    }

    #[test]
    fn unipotent_inverse() {
        let m = MatrixQi::from_ints(&[&[1, 3], &[0, 1]]);
        let want = MatrixQi::from_ints(&[&[1, -3], &[0, 1]]);
        assert_eq!(m.inverse().unwrap(), want);
    }

    #[test]
    fn two_by_two_inverse_against_adjugate() {
        // det = 5*(-2) - 6*(-2) = 2; adjugate/det gives the inverse below,
        // confirmed by multiplying back to the identity.
        let m = MatrixQi::from_ints(&[&[5, 6], &[-2, -2]]);
        let inv = m.inverse().unwrap();
        let want = MatrixQi::from_rows(vec![
            vec![GaussRational::from_int(-1), GaussRational::from_int(-3)],
            vec![GaussRational::from_int(1), gq(5, 2)],
        ])
        .unwrap();
        assert_eq!(inv, want);
        assert!(m.matmul(&inv).is_identity());
        assert!(inv.matmul(&m).is_identity());
    }

    #[test]
    fn inverse_is_involutive() {
        let m = MatrixQi::from_ints(&[&[2, 1, 0], &[1, -1, 3], &[0, 5, 7]]);
        let inv = m.inverse().unwrap();
        assert_eq!(inv.inverse().unwrap(), m);
    }

    #[test]
    fn singular_matrix_rejected() {
        let m = MatrixQi::from_ints(&[&[1, 2], &[2, 4]]);
        assert!(matches!(m.inverse(), Err(Error::SingularMatrix { .. })));
    }

    #[test]
    fn kernel_of_zero_and_identity() {
        assert_eq!(MatrixQi::zero(2, 2).kernel_basis(), MatrixQi::identity(2));
        let k = MatrixQi::identity(2).kernel_basis();
        assert_eq!((k.rows(), k.cols()), (2, 0));
    }

    #[test]
    fn kernel_of_permutation_complement() {
        // 1 - T for the permutation fixing sheet 1 and swapping 2 and 3;
        // the kernel is spanned by the cycle indicators (1,0,0), (0,1,1).
        let t = MatrixQi::from_ints(&[&[1, 0, 0], &[0, 0, 1], &[0, 1, 0]]);
        let m = MatrixQi::identity(3).sub(&t);
        let k = m.kernel_basis();
        let want = MatrixQi::from_ints(&[&[1, 0], &[0, 1], &[0, 1]]);
        assert_eq!(k, want);
    }

    #[test]
    fn rank_nullity() {
        let m = MatrixQi::from_ints(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(m.rank() + m.kernel_basis().cols(), m.cols());
    }

    #[test]
    fn cokernel_of_identity_and_zero_column() {
        let (p, d) = MatrixQi::identity(2).cokernel_projection();
        assert_eq!((p.rows(), p.cols(), d), (0, 2, 0));
        let (p, d) = MatrixQi::zero(3, 1).cokernel_projection();
        assert_eq!(d, 3);
        assert_eq!(p, MatrixQi::identity(3));
    }

    #[test]
    fn cokernel_annihilates_image_with_leading_one() {
        // Image is span{(0,1,1),(1,0,0)}; the annihilator functional is
        // x₂ - x₃ after leading-one normalization.
        let m = MatrixQi::from_ints(&[&[0, 1], &[1, 0], &[1, 0]]);
        let (p, d) = m.cokernel_projection();
        assert_eq!(d, 1);
        assert_eq!(p, MatrixQi::from_ints(&[&[0, 1, -1]]));
        assert!(p.matmul(&m).is_zero());
        assert_eq!(p.rank(), 1);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = MatrixQi::from_ints(&[&[1, 2], &[3, 4]]);
        let b = MatrixQi::from_ints(&[&[5], &[11]]);
        let x = a.solve(&b).unwrap();
        assert_eq!(a.matmul(&x), b);
        let sing = MatrixQi::from_ints(&[&[1, 1], &[1, 1]]);
        let bad = MatrixQi::from_ints(&[&[0], &[1]]);
        assert!(sing.solve(&bad).is_none());
    }

    #[test]
    fn solve_left_matches_right_transposed() {
        let a = MatrixQi::from_ints(&[&[0, 1, -1]]);
        let b = MatrixQi::from_ints(&[&[0, 0, 0], &[0, 1, -1], &[0, -1, 1]]);
        let x = b.solve_left(&a).unwrap();
        assert_eq!(x.matmul(&a), b);
        assert_eq!(x, MatrixQi::from_ints(&[&[0], &[1], &[-1]]));
    }

    #[test]
    fn block_assembly() {
        let a = MatrixQi::identity(2);
        let b = MatrixQi::zero(2, 1);
        let c = MatrixQi::zero(1, 2);
        let d = MatrixQi::from_ints(&[&[7]]);
        let m = MatrixQi::from_blocks(&[vec![&a, &b], vec![&c, &d]]);
        assert_eq!(
            m,
            MatrixQi::from_ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 7]])
        );
    }

    #[test]
    fn zero_dimension_edges() {
        let empty = MatrixQi::zero(0, 3);
        assert_eq!(empty.kernel_basis(), MatrixQi::identity(3));
        let tall = MatrixQi::zero(3, 0);
        let (p, d) = tall.cokernel_projection();
        assert_eq!((d, p.rows()), (3, 3));
        let prod = empty.matmul(&tall);
        assert_eq!((prod.rows(), prod.cols()), (0, 0));
        assert!(MatrixQi::identity(0).is_identity());
        assert_eq!(MatrixQi::identity(0).inverse().unwrap(), MatrixQi::identity(0));
    }

    #[test]
    fn permutation_matrix_orientation() {
        // perm[j] = image of j: column j carries the 1 in row perm[j].
        let p = MatrixQi::from_permutation(&[2, 0, 1]);
        assert_eq!(p, MatrixQi::from_ints(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]));
    }

    #[test]
    fn char_poly_basics() {
        // Companion-style check: [[0,-1],[1,0]] has λ² + 1.
        let m = MatrixQi::from_ints(&[&[0, -1], &[1, 0]]);
        assert_eq!(
            m.char_poly(),
            vec![GaussRational::zero(), GaussRational::one()]
        );
        // Conjugation preserves the coefficients.
        let a = MatrixQi::from_ints(&[&[1, 2], &[3, 4]]);
        let g = MatrixQi::from_ints(&[&[1, 1], &[0, 1]]);
        let conj = g.matmul(&a).matmul(&g.inverse().unwrap());
        assert_eq!(a.char_poly(), conj.char_poly());
    }

    #[test]
    fn rref_pivots_leftmost() {
        let m = MatrixQi::from_ints(&[&[0, 0, 2], &[0, 3, 1]]);
        let r = m.rref();
        assert_eq!(r.pivots, vec![1, 2]);
        assert_eq!(
            r.matrix,
            MatrixQi::from_ints(&[&[0, 1, 0], &[0, 0, 1]])
        );
    }
}
