//! Forward-mode differentiation over exact rationals.
//!
//! A `DualScalar` carries a value and a vector of partial derivatives, one
//! slot per coordinate atom of the evaluation point (for functions on GL(n)
//! the atoms are the n^2 matrix entries). Product and quotient rules are
//! exact; a one-pass evaluation yields the full gradient matrix that the
//! Poisson brackets consume.

use alloc::vec::Vec;

use crate::matrix::Matrix;
use crate::scalar::{Field, Ring, Scalar};

/// Value plus exact partials. The partial vector is implicitly zero-padded,
/// so duals with different slot counts combine fine.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DualScalar {
    pub v: Scalar,
    pub d: Vec<Scalar>,
}

impl DualScalar {
    pub fn constant(v: Scalar) -> Self {
        DualScalar { v, d: Vec::new() }
    }

    /// The atom with index `slot`: value `v`, derivative indicator at `slot`.
    pub fn atom(v: Scalar, slot: usize) -> Self {
        let mut d = alloc::vec![Scalar::zero(); slot + 1];
        d[slot] = Scalar::one();
        DualScalar { v, d }
    }

    pub fn partial(&self, slot: usize) -> Scalar {
        self.d.get(slot).cloned().unwrap_or_else(Scalar::zero)
    }

    fn zip(&self, o: &Self, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Vec<Scalar> {
        let len = self.d.len().max(o.d.len());
        (0..len).map(|i| f(&self.partial(i), &o.partial(i))).collect()
    }
}

impl Ring for DualScalar {
    fn zero() -> Self {
        DualScalar::constant(Scalar::zero())
    }

    fn one() -> Self {
        DualScalar::constant(Scalar::one())
    }

    fn is_zero(&self) -> bool {
        self.v.is_zero() && self.d.iter().all(|s| s.is_zero())
    }

    fn add(&self, o: &Self) -> Self {
        DualScalar { v: &self.v + &o.v, d: self.zip(o, |a, b| a + b) }
    }

    fn sub(&self, o: &Self) -> Self {
        DualScalar { v: &self.v - &o.v, d: self.zip(o, |a, b| a - b) }
    }

    fn mul(&self, o: &Self) -> Self {
        DualScalar {
            v: &self.v * &o.v,
            d: self.zip(o, |da, db| &(da * &o.v) + &(&self.v * db)),
        }
    }

    fn neg(&self) -> Self {
        DualScalar { v: -self.v.clone(), d: self.d.iter().map(|s| -s.clone()).collect() }
    }

    fn scale(&self, c: &Scalar) -> Self {
        DualScalar { v: &self.v * c, d: self.d.iter().map(|s| s * c).collect() }
    }

    fn from_scalar(c: &Scalar) -> Self {
        DualScalar::constant(c.clone())
    }
}

impl Field for DualScalar {
    fn inv(&self) -> Option<Self> {
        let vinv = self.v.inv()?;
        let m = -(&vinv * &vinv);
        Some(DualScalar { v: vinv, d: self.d.iter().map(|s| s * &m).collect() })
    }

    fn is_invertible(&self) -> bool {
        !self.v.is_zero()
    }
}

/// Determinant of a dual matrix through the adjugate directional derivative:
/// `d(det)(V)[W] = Tr(adj(V) W)`. Much cheaper than eliminating over duals,
/// since partial slots only enter through traces.
pub fn det_dual(m: &Matrix<DualScalar>) -> Result<DualScalar, crate::matrix::MatError> {
    let n = m.rows();
    let values: Matrix<Scalar> = Matrix::from_fn(n, n, |i, j| m.at(i, j).v.clone());
    let slots = (1..=n)
        .flat_map(|i| (1..=n).map(move |j| (i, j)))
        .map(|(i, j)| m.at(i, j).d.len())
        .max()
        .unwrap_or(0);
    let det = values.det()?;
    let adj_t: Matrix<Scalar> = if !det.is_zero() {
        // adj(V) = det(V) V^{-1}; we store its transpose for cheap pairing.
        values.inverse()?.scale(&det).transpose()
    } else {
        adjugate(&values)?.transpose()
    };
    let mut d = alloc::vec![Scalar::zero(); slots];
    for (p, slot) in d.iter_mut().enumerate() {
        let mut acc = Scalar::zero();
        for i in 1..=n {
            for j in 1..=n {
                let w = m.at(i, j).partial(p);
                if !w.is_zero() {
                    acc += adj_t.at(i, j) * &w;
                }
            }
        }
        *slot = acc;
    }
    Ok(DualScalar { v: det, d })
}

/// Cofactor-expansion adjugate, used only when the value matrix is singular.
pub fn adjugate(m: &Matrix<Scalar>) -> Result<Matrix<Scalar>, crate::matrix::MatError> {
    let n = m.rows();
    if n == 0 {
        return Ok(Matrix::identity(0));
    }
    let mut adj = Matrix::zeros(n, n);
    for i in 1..=n {
        for j in 1..=n {
            let rows: Vec<usize> = (1..=n).filter(|&r| r != i).collect();
            let cols: Vec<usize> = (1..=n).filter(|&c| c != j).collect();
            let minor = m.select(&rows, &cols).det()?;
            let s = if (i + j) % 2 == 0 { minor } else { -minor };
            *adj.at_mut(j, i) = s;
        }
    }
    Ok(adj)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule() {
        // f = x*y at (3, 5): df/dx = 5, df/dy = 3.
        let x = DualScalar::atom(Scalar::from_int(3), 0);
        let y = DualScalar::atom(Scalar::from_int(5), 1);
        let f = x.mul(&y);
        assert_eq!(f.v, Scalar::from_int(15));
        assert_eq!(f.partial(0), Scalar::from_int(5));
        assert_eq!(f.partial(1), Scalar::from_int(3));
    }

    #[test]
    fn quotient_rule() {
        let x = DualScalar::atom(Scalar::from_int(3), 0);
        let f = x.inv().unwrap();
        assert_eq!(f.v, Scalar::ratio(1, 3));
        assert_eq!(f.partial(0), Scalar::ratio(-1, 9));
    }

    #[test]
    fn det_dual_matches_adjugate() {
        // det of [[x, 2],[1, x]] at x=4 is x^2-2 = 14, derivative 2x = 8.
        let x1 = DualScalar::atom(Scalar::from_int(4), 0);
        let m = Matrix::from_fn(2, 2, |i, j| match (i, j) {
            (1, 1) | (2, 2) => x1.clone(),
            (1, 2) => DualScalar::constant(Scalar::from_int(2)),
            _ => DualScalar::constant(Scalar::from_int(1)),
        });
        let d = det_dual(&m).unwrap();
        assert_eq!(d.v, Scalar::from_int(14));
        assert_eq!(d.partial(0), Scalar::from_int(8));
    }
}
