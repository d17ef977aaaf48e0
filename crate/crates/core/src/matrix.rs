//! Dense matrices over an arbitrary ring, with the exact linear algebra used
//! everywhere else: fraction-free determinants, inversion, Gauss
//! factorization into unipotent-upper times lower-triangular factors, and
//! finite exp/log on triangular unipotents.
//!
//! Indices are 1-based throughout, matching the `X_[a,b]^[c,d]` submatrix
//! conventions of the functions being built.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::scalar::{Field, Ring, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatError {
    NotSquare,
    Singular,
    /// A trailing principal minor vanishes; payload is the offending index.
    FactorizationPivot(usize),
    NotUnipotent,
    NotNilpotent,
    Shape,
}

impl fmt::Display for MatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatError::NotSquare => write!(f, "matrix is not square"),
            MatError::Singular => write!(f, "matrix is singular"),
            MatError::FactorizationPivot(i) => {
                write!(f, "trailing principal minor at index {} vanishes", i)
            }
            MatError::NotUnipotent => write!(f, "matrix is not triangular unipotent"),
            MatError::NotNilpotent => write!(f, "matrix is not strictly triangular"),
            MatError::Shape => write!(f, "dimension mismatch"),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type ExactMatrix = Matrix<Scalar>;

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 1..=n {
            *m.at_mut(i, i) = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 1..=rows {
            for j in 1..=cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// 1-based access.
    pub fn at(&self, i: usize, j: usize) -> &T {
        debug_assert!(i >= 1 && i <= self.rows && j >= 1 && j <= self.cols);
        &self.data[(i - 1) * self.cols + (j - 1)]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut T {
        debug_assert!(i >= 1 && i <= self.rows && j >= 1 && j <= self.cols);
        &mut self.data[(i - 1) * self.cols + (j - 1)]
    }

    /// Submatrix with the listed rows and columns, order preserved.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix<T> {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.at(rows[i - 1], cols[j - 1]).clone())
    }

    /// `M_[r1,r2]^[c1,c2]` with inclusive 1-based bounds.
    pub fn block(&self, r1: usize, r2: usize, c1: usize, c2: usize) -> Matrix<T> {
        let rows: Vec<usize> = (r1..=r2).collect();
        let cols: Vec<usize> = (c1..=c2).collect();
        self.select(&rows, &cols)
    }

    pub fn transpose(&self) -> Matrix<T> {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn add(&self, o: &Matrix<T>) -> Matrix<T> {
        assert!(self.rows == o.rows && self.cols == o.cols);
        Matrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j).add(o.at(i, j)))
    }

    pub fn sub(&self, o: &Matrix<T>) -> Matrix<T> {
        assert!(self.rows == o.rows && self.cols == o.cols);
        Matrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j).sub(o.at(i, j)))
    }

    pub fn neg(&self) -> Matrix<T> {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j).neg())
    }

    pub fn scale(&self, c: &Scalar) -> Matrix<T> {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j).scale(c))
    }

    pub fn matmul(&self, o: &Matrix<T>) -> Matrix<T> {
        assert!(self.cols == o.rows, "matmul shape mismatch");
        Matrix::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = T::zero();
            for k in 1..=self.cols {
                acc = acc.add(&self.at(i, k).mul(o.at(k, j)));
            }
            acc
        })
    }

    pub fn pow(&self, e: usize) -> Matrix<T> {
        assert!(self.is_square());
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..e {
            acc = acc.matmul(self);
        }
        acc
    }

    /// Trace pairing `<A,B> = Tr(AB)`.
    pub fn trace_pair(&self, o: &Matrix<T>) -> T {
        assert!(self.is_square() && o.is_square() && self.rows == o.rows);
        let mut acc = T::zero();
        for i in 1..=self.rows {
            for k in 1..=self.cols {
                acc = acc.add(&self.at(i, k).mul(o.at(k, i)));
            }
        }
        acc
    }

    pub fn trace(&self) -> T {
        assert!(self.is_square());
        let mut acc = T::zero();
        for i in 1..=self.rows {
            acc = acc.add(self.at(i, i));
        }
        acc
    }

    /// Strictly upper part.
    pub fn upper(&self) -> Matrix<T> {
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            if j > i { self.at(i, j).clone() } else { T::zero() }
        })
    }

    /// Strictly lower part.
    pub fn lower(&self) -> Matrix<T> {
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            if j < i { self.at(i, j).clone() } else { T::zero() }
        })
    }

    /// Diagonal part.
    pub fn diagonal(&self) -> Matrix<T> {
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            if j == i { self.at(i, j).clone() } else { T::zero() }
        })
    }

    /// Shift one step towards the lower-right corner: `E_ij -> E_{i+1,j+1}`.
    pub fn shift_down_right(&self) -> Matrix<T> {
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            if i >= 2 && j >= 2 { self.at(i - 1, j - 1).clone() } else { T::zero() }
        })
    }

    /// Shift one step towards the upper-left corner: `E_ij -> E_{i-1,j-1}`.
    pub fn shift_up_left(&self) -> Matrix<T> {
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            if i < self.rows && j < self.cols { self.at(i + 1, j + 1).clone() } else { T::zero() }
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|t| t.is_zero())
    }
}

impl<T: Field> Matrix<T> {
    /// Determinant by Gaussian elimination over a field-like ring; pivots are
    /// chosen among invertible entries.
    pub fn det_field(&self) -> Result<T, MatError> {
        if !self.is_square() {
            return Err(MatError::NotSquare);
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = T::one();
        for c in 1..=n {
            let pivot = (c..=n).find(|&r| m.at(r, c).is_invertible());
            let pr = match pivot {
                Some(pr) => pr,
                None => {
                    // No invertible pivot: over an honest field every entry
                    // below is zero and the determinant vanishes.
                    if (c..=n).all(|r| m.at(r, c).is_zero()) {
                        return Ok(T::zero());
                    }
                    return Err(MatError::Singular);
                }
            };
            if pr != c {
                for j in 1..=n {
                    let a = m.at(pr, j).clone();
                    let b = m.at(c, j).clone();
                    *m.at_mut(pr, j) = b;
                    *m.at_mut(c, j) = a;
                }
                det = det.neg();
            }
            let p = m.at(c, c).clone();
            det = det.mul(&p);
            let pinv = p.inv().ok_or(MatError::Singular)?;
            for r in (c + 1)..=n {
                if m.at(r, c).is_zero() {
                    continue;
                }
                let f = m.at(r, c).mul(&pinv);
                for j in c..=n {
                    let sub = f.mul(m.at(c, j));
                    *m.at_mut(r, j) = m.at(r, j).sub(&sub);
                }
            }
        }
        Ok(det)
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Matrix<T>, MatError> {
        if !self.is_square() {
            return Err(MatError::NotSquare);
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = Matrix::<T>::identity(n);
        for c in 1..=n {
            let pr = (c..=n)
                .find(|&r| m.at(r, c).is_invertible())
                .ok_or(MatError::Singular)?;
            if pr != c {
                for j in 1..=n {
                    let (a, b) = (m.at(pr, j).clone(), m.at(c, j).clone());
                    *m.at_mut(pr, j) = b;
                    *m.at_mut(c, j) = a;
                    let (a, b) = (inv.at(pr, j).clone(), inv.at(c, j).clone());
                    *inv.at_mut(pr, j) = b;
                    *inv.at_mut(c, j) = a;
                }
            }
            let pinv = m.at(c, c).inv().ok_or(MatError::Singular)?;
            for j in 1..=n {
                *m.at_mut(c, j) = m.at(c, j).mul(&pinv);
                *inv.at_mut(c, j) = inv.at(c, j).mul(&pinv);
            }
            for r in 1..=n {
                if r == c || m.at(r, c).is_zero() {
                    continue;
                }
                let f = m.at(r, c).clone();
                for j in 1..=n {
                    let s = f.mul(m.at(c, j));
                    *m.at_mut(r, j) = m.at(r, j).sub(&s);
                    let s = f.mul(inv.at(c, j));
                    *inv.at_mut(r, j) = inv.at(r, j).sub(&s);
                }
            }
        }
        Ok(inv)
    }
}

impl ExactMatrix {
    pub fn from_ints(rows: usize, cols: usize, vals: &[i64]) -> Self {
        assert_eq!(vals.len(), rows * cols);
        Matrix::from_fn(rows, cols, |i, j| Scalar::from_int(vals[(i - 1) * cols + (j - 1)]))
    }

    /// Exact determinant. Integer matrices go through fraction-free Bareiss
    /// elimination; anything with denominators falls back to rational
    /// Gaussian elimination.
    pub fn det(&self) -> Result<Scalar, MatError> {
        if !self.is_square() {
            return Err(MatError::NotSquare);
        }
        if self.data.iter().all(|s| s.is_integer()) {
            Ok(self.det_bareiss_int())
        } else {
            self.det_field()
        }
    }

    fn det_bareiss_int(&self) -> Scalar {
        let n = self.rows;
        if n == 0 {
            return Scalar::one();
        }
        let mut m: Vec<BigInt> = self.data.iter().map(|s| s.numer().clone()).collect();
        let idx = |i: usize, j: usize| (i - 1) * n + (j - 1);
        let mut sign = 1i64;
        let mut prev = BigInt::one();
        for c in 1..=n {
            if m[idx(c, c)].is_zero() {
                let Some(pr) = ((c + 1)..=n).find(|&r| !m[idx(r, c)].is_zero()) else {
                    return Scalar::zero();
                };
                for j in 1..=n {
                    m.swap(idx(c, j), idx(pr, j));
                }
                sign = -sign;
            }
            for r in (c + 1)..=n {
                for j in (c + 1)..=n {
                    let num = &m[idx(c, c)] * &m[idx(r, j)] - &m[idx(r, c)] * &m[idx(c, j)];
                    // Exact by the Bareiss identity.
                    m[idx(r, j)] = num / &prev;
                }
                m[idx(r, c)] = BigInt::zero();
            }
            prev = m[idx(c, c)].clone();
        }
        let d = m[idx(n, n)].clone();
        if sign < 0 {
            Scalar::from_bigint(-d)
        } else {
            Scalar::from_bigint(d)
        }
    }

    /// Gauss factorization `M = M_+ * M_0m` with `M_+` unipotent upper
    /// triangular and `M_0m` lower triangular (diagonal included). Defined
    /// exactly when all trailing principal minors are nonzero.
    pub fn gauss_factorize(&self) -> Result<(ExactMatrix, ExactMatrix), MatError> {
        if !self.is_square() {
            return Err(MatError::NotSquare);
        }
        let n = self.rows;
        let mut low = self.clone();
        let mut up = ExactMatrix::identity(n);
        for c in (2..=n).rev() {
            let p = low.at(c, c).clone();
            if p.is_zero() {
                return Err(MatError::FactorizationPivot(c));
            }
            for r in 1..c {
                let f = low.at(r, c) / &p;
                if f.is_zero() {
                    continue;
                }
                for j in 1..=n {
                    let s = &f * low.at(c, j);
                    *low.at_mut(r, j) = low.at(r, j) - &s;
                }
                *up.at_mut(r, c) = f;
            }
        }
        if low.at(1, 1).is_zero() {
            return Err(MatError::FactorizationPivot(1));
        }
        Ok((up, low))
    }

    fn strict_part(&self) -> Result<(bool, ExactMatrix), MatError> {
        if !self.is_square() {
            return Err(MatError::NotSquare);
        }
        let upper = self.lower().is_zero();
        let lower = self.upper().is_zero();
        if !upper && !lower {
            return Err(MatError::NotNilpotent);
        }
        Ok((upper, self.sub(&self.diagonal())))
    }

    /// Finite logarithm of a triangular unipotent matrix.
    pub fn nilpotent_log(&self) -> Result<ExactMatrix, MatError> {
        let n = self.rows();
        for i in 1..=n {
            if !self.at(i, i).is_one() {
                return Err(MatError::NotUnipotent);
            }
        }
        let (_, nil) = self.strict_part()?;
        let mut acc = Matrix::zeros(n, n);
        let mut pw = nil.clone();
        let mut k = 1i64;
        while !pw.is_zero() {
            let coeff = Scalar::ratio(if k % 2 == 1 { 1 } else { -1 }, k);
            acc = acc.add(&pw.scale(&coeff));
            pw = pw.matmul(&nil);
            k += 1;
            if k as usize > n {
                break;
            }
        }
        Ok(acc)
    }

    /// Finite exponential of a strictly triangular matrix.
    pub fn nilpotent_exp(&self) -> Result<ExactMatrix, MatError> {
        let (_, nil) = self.strict_part()?;
        if nil != *self {
            return Err(MatError::NotNilpotent);
        }
        let n = self.rows();
        let mut acc = ExactMatrix::identity(n);
        let mut pw = ExactMatrix::identity(n);
        let mut fact = Scalar::one();
        for k in 1..=n as i64 {
            pw = pw.matmul(self);
            if pw.is_zero() {
                break;
            }
            fact = fact * Scalar::from_int(k);
            acc = acc.add(&pw.scale(&fact.inv().unwrap()));
        }
        Ok(acc)
    }

    /// Group-level lift of the shift map to triangular unipotents:
    /// `exp(shift(log B))`. Works for unipotent upper and unipotent lower
    /// matrices alike; the image is again unipotent of the same kind.
    pub fn gamma_group(&self) -> Result<ExactMatrix, MatError> {
        let lg = self.nilpotent_log()?;
        lg.shift_down_right().nilpotent_exp()
    }

    /// Group-level lift of the adjoint shift to lower-triangular invertible
    /// matrices: shift towards the upper-left corner and put 1 in the freed
    /// last diagonal slot. Multiplicative on lower triangular matrices.
    pub fn gamma_star_group_lower(&self) -> ExactMatrix {
        let n = self.rows();
        let mut m = self.shift_up_left();
        *m.at_mut(n, n) = Scalar::one();
        m
    }

    /// Same lift of the shift map itself for unipotent lower matrices via
    /// the closed shift-and-fill form (equal to `gamma_group` there).
    pub fn gamma_group_shift_fill(&self) -> ExactMatrix {
        let mut m = self.shift_down_right();
        *m.at_mut(1, 1) = Scalar::one();
        m
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 1..=self.rows {
            write!(f, "  ")?;
            for j in 1..=self.cols {
                write!(f, "{} ", self.at(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Ordered 1-based index list helpers for the selector notations
/// `[a,b]`, `1 ∪ [a,b]`, `I ∪ n`, `γ(J) = {j+1}`.
pub mod sel {
    use alloc::vec::Vec;

    pub fn range(a: usize, b: usize) -> Vec<usize> {
        if a > b {
            Vec::new()
        } else {
            (a..=b).collect()
        }
    }

    pub fn one_union(rest: &[usize]) -> Vec<usize> {
        let mut v = Vec::with_capacity(rest.len() + 1);
        v.push(1);
        v.extend_from_slice(rest);
        v
    }

    pub fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
        let mut v = Vec::with_capacity(a.len() + b.len());
        v.extend_from_slice(a);
        v.extend_from_slice(b);
        v
    }

    /// Sorted union; `None` when the parts overlap (a repeated-row minor).
    pub fn sorted_union(a: &[usize], b: &[usize]) -> Option<Vec<usize>> {
        let mut v = union(a, b);
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) {
            None
        } else {
            Some(v)
        }
    }

    /// Shift every index up by one.
    pub fn gamma(j: &[usize]) -> Vec<usize> {
        j.iter().map(|&x| x + 1).collect()
    }

    /// Shift every index down by one.
    pub fn gamma_star(j: &[usize]) -> Vec<usize> {
        j.iter().map(|&x| x - 1).collect()
    }

    /// Complement of `i` inside `[1,m]`.
    pub fn complement(i: &[usize], m: usize) -> Vec<usize> {
        (1..=m).filter(|x| !i.contains(x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sm(n: usize, v: &[i64]) -> ExactMatrix {
        ExactMatrix::from_ints(n, n, v)
    }

    #[test]
    fn det_small_cases() {
        assert_eq!(ExactMatrix::identity(3).det().unwrap(), Scalar::one());
        assert_eq!(sm(2, &[1, 2, 3, 4]).det().unwrap(), Scalar::from_int(-2));
    }

    #[test]
    fn det_rejects_non_square() {
        let m = ExactMatrix::zeros(2, 3);
        assert_eq!(m.det(), Err(MatError::NotSquare));
    }

    #[test]
    fn inverse_diag() {
        assert_eq!(
            ExactMatrix::identity(4).inverse().unwrap(),
            ExactMatrix::identity(4)
        );
        let m = sm(2, &[2, 0, 0, 3]);
        let inv = m.inverse().unwrap();
        assert_eq!(inv.at(1, 1), &Scalar::ratio(1, 2));
        assert_eq!(inv.at(2, 2), &Scalar::ratio(1, 3));
        assert_eq!(m.matmul(&inv), ExactMatrix::identity(2));
    }

    #[test]
    fn gauss_factorize_2x2() {
        let m = sm(2, &[2, 1, 1, 1]);
        let (up, low) = m.gauss_factorize().unwrap();
        assert_eq!(up, sm(2, &[1, 1, 0, 1]));
        assert_eq!(low, sm(2, &[1, 0, 1, 1]));
        assert_eq!(up.matmul(&low), m);
    }

    #[test]
    fn gauss_factorize_identity() {
        let m = ExactMatrix::identity(4);
        let (up, low) = m.gauss_factorize().unwrap();
        assert_eq!(up, ExactMatrix::identity(4));
        assert_eq!(low, ExactMatrix::identity(4));
    }

    #[test]
    fn gauss_factorize_reports_offending_minor() {
        // Trailing 1x1 minor vanishes.
        let m = sm(2, &[1, 1, 1, 0]);
        assert_eq!(m.gauss_factorize(), Err(MatError::FactorizationPivot(2)));
    }

    #[test]
    fn nilpotent_exp_log_basics() {
        let zero = ExactMatrix::zeros(3, 3);
        assert_eq!(zero.nilpotent_exp().unwrap(), ExactMatrix::identity(3));
        // log(I + E_12) = E_12 in size 2.
        let m = sm(2, &[1, 1, 0, 1]);
        assert_eq!(m.nilpotent_log().unwrap(), sm(2, &[0, 1, 0, 0]));
    }

    #[test]
    fn gamma_group_matches_shift_fill_on_lower_unipotents() {
        let m = sm(3, &[1, 0, 0, 5, 1, 0, -2, 7, 1]);
        let lifted = m.gamma_group().unwrap();
        assert_eq!(lifted, m.gamma_group_shift_fill());
    }
}
