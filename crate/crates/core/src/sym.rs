//! Matrices whose entries are either zero or a single entry `x_{ij}` of the
//! input matrix. All block-matrix builders produce this form first; from it
//! one gets an exact numeric instance, a determinant expression node, or a
//! symbol-for-symbol text dump for golden comparisons.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::expr::{x_atom, Expr};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymMatrix {
    pub n: usize,
    rows: usize,
    cols: usize,
    /// `Some((i,j))` means entry `x_{ij}` of the n-by-n input; `None` is 0.
    entries: Vec<Option<(usize, usize)>>,
}

impl SymMatrix {
    pub fn zeros(n: usize, rows: usize, cols: usize) -> Self {
        SymMatrix { n, rows, cols, entries: alloc::vec![None; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> Option<(usize, usize)> {
        debug_assert!(i >= 1 && i <= self.rows && j >= 1 && j <= self.cols);
        self.entries[(i - 1) * self.cols + (j - 1)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Option<(usize, usize)>) {
        self.entries[(i - 1) * self.cols + (j - 1)] = v;
    }

    /// Place row `src_row` of the input at row `i`, columns `c0..c0+n-1`.
    pub fn put_input_row(&mut self, i: usize, c0: usize, src_row: usize) {
        for c in 1..=self.n {
            self.set(i, c0 + c - 1, Some((src_row, c)));
        }
    }

    pub fn instantiate(&self, x: &Matrix<Scalar>) -> Matrix<Scalar> {
        assert_eq!(x.rows(), self.n);
        Matrix::from_fn(self.rows, self.cols, |i, j| match self.at(i, j) {
            Some((r, c)) => x.at(r, c).clone(),
            None => Scalar::zero(),
        })
    }

    pub fn to_expr_matrix(&self) -> Matrix<Expr> {
        Matrix::from_fn(self.rows, self.cols, |i, j| match self.at(i, j) {
            Some((r, c)) => x_atom(self.n, r, c),
            None => Expr::int(0),
        })
    }

    /// Determinant as an expression over the input's atoms.
    pub fn det_expr(&self) -> Expr {
        Expr::det(self.to_expr_matrix())
    }

    /// Square submatrix in all rows and the trailing `k` columns.
    pub fn trailing(&self, k: usize) -> SymMatrix {
        assert!(k <= self.cols);
        let mut out = SymMatrix::zeros(self.n, self.rows, k);
        for i in 1..=self.rows {
            for j in 1..=k {
                out.set(i, j, self.at(i, self.cols - k + j));
            }
        }
        out
    }

    /// Trailing principal square submatrix of size `k` (bottom-right corner).
    pub fn trailing_principal(&self, k: usize) -> SymMatrix {
        assert!(k <= self.rows && k <= self.cols);
        let mut out = SymMatrix::zeros(self.n, k, k);
        for i in 1..=k {
            for j in 1..=k {
                out.set(i, j, self.at(self.rows - k + i, self.cols - k + j));
            }
        }
        out
    }

    /// Submatrix in the listed rows and columns, order preserved.
    pub fn sub(&self, rows: &[usize], cols: &[usize]) -> SymMatrix {
        let mut out = SymMatrix::zeros(self.n, rows.len(), cols.len());
        for (ri, &r) in rows.iter().enumerate() {
            for (ci, &c) in cols.iter().enumerate() {
                out.set(ri + 1, ci + 1, self.at(r, c));
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> SymMatrix {
        let mut out = SymMatrix::zeros(self.n, rows.len(), self.cols);
        for (ri, &r) in rows.iter().enumerate() {
            for j in 1..=self.cols {
                out.set(ri + 1, j, self.at(r, j));
            }
        }
        out
    }

    /// Symbol-per-cell dump: `x_{ij}` or `0`, rows separated by newlines.
    /// Matches the layout the reference grids use, so golden tests can
    /// compare strings directly.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for i in 1..=self.rows {
            for j in 1..=self.cols {
                if j > 1 {
                    s.push(' ');
                }
                match self.at(i, j) {
                    Some((r, c)) => s.push_str(&format!("x_{{{}{}}}", r, c)),
                    None => s.push('0'),
                }
            }
            s.push('\n');
        }
        s
    }

    /// Every entry is zero or a single input entry by construction; this
    /// reports the positions used (for structural assertions).
    pub fn used_entries(&self) -> Vec<(usize, usize)> {
        self.entries.iter().flatten().copied().collect()
    }
}
