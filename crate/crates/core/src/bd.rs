//! The shift maps and R-matrix operators behind the Poisson brackets.
//!
//! `gamma` conjugates by the shift matrices, moving a matrix one step
//! towards the lower-right corner; `gamma_star` is its adjoint under the
//! trace form. Both are nilpotent on strictly triangular parts, so the
//! resolvent-style sums in the Cartan and triangular pieces of the
//! operators are finite and evaluated exactly.

use crate::matrix::Matrix;
use crate::scalar::{Ring, Scalar};

/// Operator package for a fixed matrix size.
#[derive(Clone, Copy, Debug)]
pub struct BdOps {
    pub n: usize,
}

impl BdOps {
    pub fn new(n: usize) -> BdOps {
        BdOps { n }
    }

    pub fn gamma<T: Ring>(&self, m: &Matrix<T>) -> Matrix<T> {
        m.shift_down_right()
    }

    pub fn gamma_star<T: Ring>(&self, m: &Matrix<T>) -> Matrix<T> {
        m.shift_up_left()
    }

    /// `Σ_{k>=0} gamma^k` applied to the strictly upper part.
    fn resolvent_gamma_upper<T: Ring>(&self, m: &Matrix<T>) -> Matrix<T> {
        let mut acc = m.upper();
        let mut cur = m.upper();
        for _ in 1..self.n {
            cur = self.gamma(&cur);
            if cur.is_zero() {
                break;
            }
            acc = acc.add(&cur);
        }
        acc
    }

    fn resolvent_gamma_star_upper<T: Ring>(&self, m: &Matrix<T>) -> Matrix<T> {
        let mut acc = m.upper();
        let mut cur = m.upper();
        for _ in 1..self.n {
            cur = self.gamma_star(&cur);
            if cur.is_zero() {
                break;
            }
            acc = acc.add(&cur);
        }
        acc
    }

    /// `Σ_{k>=1} gamma^k` (finite: the shift pushes everything off the
    /// corner in at most n steps).
    fn tail_gamma<T: Ring>(&self, m: &Matrix<T>) -> Matrix<T> {
        let mut acc = Matrix::zeros(self.n, self.n);
        let mut cur = m.clone();
        for _ in 1..=self.n {
            cur = self.gamma(&cur);
            if cur.is_zero() {
                break;
            }
            acc = acc.add(&cur);
        }
        acc
    }

    fn tail_gamma_star<T: Ring>(&self, m: &Matrix<T>) -> Matrix<T> {
        let mut acc = Matrix::zeros(self.n, self.n);
        let mut cur = m.clone();
        for _ in 1..=self.n {
            cur = self.gamma_star(&cur);
            if cur.is_zero() {
                break;
            }
            acc = acc.add(&cur);
        }
        acc
    }

    fn diag_n(&self, descending: bool) -> Matrix<Scalar> {
        Matrix::from_fn(self.n, self.n, |i, j| {
            if i == j {
                Scalar::from_int(if descending { (self.n - i + 1) as i64 } else { i as i64 })
            } else {
                Scalar::zero()
            }
        })
    }

    /// Cartan part for the unbarred operator, acting on the diagonal of `m`:
    /// `(n-1)/2n Tr·1 + 1/n (Tr·D - Tr(D·)·1) - Σ_{k>=1} γ*^k`,
    /// `D = diag(n, ..., 2, 1)`.
    pub fn r0<T: Ring>(&self, m: &Matrix<T>) -> Matrix<T> {
        self.cartan(m, true)
    }

    /// Cartan part for the barred operator: `D = diag(1, 2, ..., n)` and the
    /// tail runs over `γ` instead of `γ*`.
    pub fn r0_bar<T: Ring>(&self, m: &Matrix<T>) -> Matrix<T> {
        self.cartan(m, false)
    }

    fn cartan<T: Ring>(&self, m: &Matrix<T>, unbarred: bool) -> Matrix<T> {
        let n = self.n;
        let d = self.diag_n(unbarred);
        let diag = m.diagonal();
        let tr = diag.trace();
        let half = Scalar::ratio(n as i64 - 1, 2 * n as i64);
        let inv_n = Scalar::ratio(1, n as i64);
        let mut tr_d = T::zero();
        for i in 1..=n {
            tr_d = tr_d.add(&diag.at(i, i).scale(d.at(i, i)));
        }
        // (n-1)/2n Tr(m) I
        let mut acc: Matrix<T> = scaled_identity(n, &tr.scale(&half));
        // 1/n Tr(m) D
        for i in 1..=n {
            let v = tr.scale(&(d.at(i, i) * &inv_n));
            *acc.at_mut(i, i) = acc.at(i, i).add(&v);
        }
        // -1/n Tr(D m) I
        acc = acc.sub(&scaled_identity(n, &tr_d.scale(&inv_n)));
        let tail = if unbarred { self.tail_gamma_star(&diag) } else { self.tail_gamma(&diag) };
        acc.sub(&tail)
    }

    /// Positive operator `R_+ = R_0 π_0 + Σ_{k>=0} γ^k π_> − Σ_{k>=1} γ*^k π_<`.
    pub fn r_plus<T: Ring>(&self, m: &Matrix<T>) -> Matrix<T> {
        self.r0(m)
            .add(&self.resolvent_gamma_upper(m))
            .sub(&self.tail_gamma_star(&m.lower()))
    }

    /// Barred operator `R̄_+ = R̄_0 π_0 + Σ_{k>=0} γ*^k π_> − Σ_{k>=1} γ^k π_<`.
    pub fn r_plus_bar<T: Ring>(&self, m: &Matrix<T>) -> Matrix<T> {
        self.r0_bar(m)
            .add(&self.resolvent_gamma_star_upper(m))
            .sub(&self.tail_gamma(&m.lower()))
    }
}

fn scaled_identity<T: Ring>(n: usize, t: &T) -> Matrix<T> {
    Matrix::from_fn(n, n, |i, j| if i == j { t.clone() } else { T::zero() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ExactMatrix;
    use crate::pit::{random_matrix, Rng};

    #[test]
    fn gamma_shifts() {
        let m = ExactMatrix::from_ints(3, 3, &[1, 2, 3, 4, 5, 6, 7, 8, 9]);
        let g = BdOps::new(3).gamma(&m);
        assert_eq!(g.at(2, 2), &Scalar::from_int(1));
        assert_eq!(g.at(3, 2), &Scalar::from_int(4));
        assert_eq!(g.at(1, 1), &Scalar::zero());
    }

    #[test]
    fn gamma_adjoint_to_gamma_star() {
        let mut rng = Rng::seed_from(17);
        let ops = BdOps::new(4);
        for _ in 0..5 {
            let a = random_matrix(&mut rng, 4);
            let b = random_matrix(&mut rng, 4);
            assert_eq!(ops.gamma(&a).trace_pair(&b), a.trace_pair(&ops.gamma_star(&b)));
        }
    }

    #[test]
    fn gamma_nilpotent_on_strict_parts() {
        let mut rng = Rng::seed_from(18);
        let n = 4;
        let ops = BdOps::new(n);
        let mut cur = random_matrix(&mut rng, n).upper();
        for _ in 0..n - 1 {
            cur = ops.gamma(&cur);
        }
        assert!(cur.is_zero());
    }
}
