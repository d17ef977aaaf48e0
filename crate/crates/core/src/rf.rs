//! Points of the rational-function space and their moment streams.
//!
//! An element is `qbar(λ)/p(λ)` with `p` monic of degree `m` and `qbar` of
//! degree at most `m`; its expansion at infinity `Σ h_i λ^{-i}` produces the
//! moment stream feeding the Hankel determinants of the Toda-side cluster.

use alloc::vec::Vec;

use crate::expr::Expr;
use crate::matrix::Matrix;
use crate::pit::Rng;
use crate::scalar::Scalar;

/// `qbar(λ)/p(λ)` with `p` monic of degree `m`: `qbar` has coefficients
/// `qbar[0..=m]`, `p` has `p[0..=m]` with `p[m] = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunctionPoint {
    pub m: usize,
    pub qbar: Vec<Scalar>,
    pub p: Vec<Scalar>,
}

impl RationalFunctionPoint {
    pub fn new(qbar: Vec<Scalar>, p: Vec<Scalar>) -> Self {
        let m = p.len() - 1;
        assert_eq!(qbar.len(), m + 1);
        assert!(p[m].is_one(), "denominator must be monic");
        RationalFunctionPoint { m, qbar, p }
    }

    /// Exact long-division moment stream `h_0 ..= h_count`.
    pub fn moments(&self, count: usize) -> Vec<Scalar> {
        moment_stream(&self.qbar, &self.p, self.m, count, Scalar::zero(), |a, b| a + b, |a, b| a * b, |a| -a)
    }

    /// Hankel determinant `t̄_m^-` (entries `h_{α+β-2}`) or the signed
    /// `t̄_m^+ = (-1)^m det(h_{α+β-1})`.
    pub fn hankel(&self, size: usize, plus: bool) -> Scalar {
        let need = if plus { 2 * size - 1 } else { 2 * size - 2 };
        let h = self.moments(need);
        hankel_det_from(&h, size, plus)
    }

    /// Coprimality witness: the top `+` Hankel determinant is nonzero
    /// exactly when `qbar` and `p` are coprime.
    pub fn is_generic(&self) -> bool {
        !self.hankel(self.m, true).is_zero()
    }

    pub fn value_at(&self, lambda: &Scalar) -> Option<Scalar> {
        let ev = |cs: &[Scalar]| {
            let mut acc = Scalar::zero();
            for c in cs.iter().rev() {
                acc = &(&acc * lambda) + c;
            }
            acc
        };
        let den = ev(&self.p);
        den.inv().map(|d| ev(&self.qbar) * d)
    }

    pub fn random(rng: &mut Rng, m: usize) -> RationalFunctionPoint {
        loop {
            let qbar: Vec<Scalar> = (0..=m).map(|_| rng.coord()).collect();
            let mut p: Vec<Scalar> = (0..m).map(|_| rng.coord()).collect();
            p.push(Scalar::one());
            let rf = RationalFunctionPoint::new(qbar, p);
            if rf.is_generic() {
                return rf;
            }
        }
    }
}

/// Hankel determinant from an explicit moment list.
pub fn hankel_det_from(h: &[Scalar], size: usize, plus: bool) -> Scalar {
    let off = if plus { 1 } else { 0 };
    let m: Matrix<Scalar> =
        Matrix::from_fn(size, size, |a, b| h[a + b - 2 + off].clone());
    let d = m.det().unwrap();
    if plus && size % 2 == 1 {
        -d
    } else {
        d
    }
}

/// Long division of `qbar/p` (monic `p` of degree `m`) into `Σ h_i λ^{-i}`,
/// generic over the coefficient ring so the same code yields symbolic
/// moment expressions.
fn moment_stream<T: Clone>(
    qbar: &[T],
    p: &[T],
    m: usize,
    count: usize,
    zero: T,
    add: impl Fn(T, T) -> T,
    mul: impl Fn(T, T) -> T,
    neg: impl Fn(T) -> T,
) -> Vec<T> {
    // h_s = qbar_{m-s} - Σ_{t<s} p_{m-s+t} h_t, with out-of-range
    // coefficients treated as zero.
    let mut h: Vec<T> = Vec::with_capacity(count + 1);
    for s in 0..=count {
        let mut acc = if s <= m { qbar[m - s].clone() } else { zero.clone() };
        for (t, ht) in h.iter().enumerate().take(s) {
            let pi = m as i64 - s as i64 + t as i64;
            if (0..=m as i64).contains(&pi) {
                acc = add(acc, neg(mul(p[pi as usize].clone(), ht.clone())));
            }
        }
        h.push(acc);
    }
    h
}

/// Symbolic moment stream over expression coefficients.
pub fn moments_expr(qbar: &[Expr], p: &[Expr], count: usize) -> Vec<Expr> {
    let m = p.len() - 1;
    assert_eq!(qbar.len(), m + 1);
    moment_stream(
        qbar,
        p,
        m,
        count,
        Expr::int(0),
        |a, b| a.add(&b),
        |a, b| a.mul(&b),
        |a| a.neg(),
    )
}

/// Hankel determinant as an expression over moment atoms `h_i ↦ atom(i)`.
pub fn hankel_expr(size: usize, plus: bool) -> Expr {
    let off = if plus { 1 } else { 0 };
    let m: Matrix<Expr> = Matrix::from_fn(size, size, |a, b| Expr::atom(a + b - 2 + off));
    let d = Expr::det(m);
    if plus && size % 2 == 1 {
        d.neg()
    } else {
        d
    }
}

/// The Toda bracket on moments: `{h_i, h_j} = Σ_{k=i}^{j-1} h_{k+1} h_{i+j-k-1}`
/// for `i < j`, extended antisymmetrically.
pub fn toda_moment_bracket(h: &[Scalar], i: usize, j: usize) -> Scalar {
    if i == j {
        return Scalar::zero();
    }
    if i > j {
        return -toda_moment_bracket(h, j, i);
    }
    let mut acc = Scalar::zero();
    for k in i..j {
        acc += &h[k + 1] * &h[i + j - k - 1];
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: i64) -> Scalar {
        Scalar::from_int(v)
    }

    #[test]
    fn laurent_division_simple() {
        // qbar = λ^2 + 1, p = λ^2 → stream 1, 0, 1, 0, ...
        let rf = RationalFunctionPoint::new(
            alloc::vec![s(1), s(0), s(1)],
            alloc::vec![s(0), s(0), s(1)],
        );
        assert_eq!(rf.moments(4), alloc::vec![s(1), s(0), s(1), s(0), s(0)]);
    }

    #[test]
    fn h0_is_top_coefficient() {
        let mut rng = Rng::seed_from(5);
        let rf = RationalFunctionPoint::random(&mut rng, 3);
        assert_eq!(rf.moments(0)[0], rf.qbar[3]);
    }

    #[test]
    fn division_recurrence_holds() {
        // qbar_j = Σ p_{i+j} h_i for j in [1, m] on random coefficients.
        let mut rng = Rng::seed_from(9);
        let rf = RationalFunctionPoint::random(&mut rng, 4);
        let h = rf.moments(2 * rf.m);
        for j in 1..=rf.m {
            let mut acc = Scalar::zero();
            for (i, hi) in h.iter().enumerate() {
                if i + j <= rf.m {
                    acc += &rf.p[i + j] * hi;
                }
            }
            assert_eq!(acc, rf.qbar[j], "j={j}");
        }
    }

    #[test]
    fn one_by_one_hankels() {
        let mut rng = Rng::seed_from(12);
        let rf = RationalFunctionPoint::random(&mut rng, 3);
        let h = rf.moments(2);
        assert_eq!(rf.hankel(1, false), h[0]);
        assert_eq!(rf.hankel(1, true), -h[1].clone());
    }

    #[test]
    fn hankel_three_term_identity() {
        // t-minus(m) t-plus-shifted(m) = t-minus(m+1) t-plus-shifted(m-1)
        // + (signed t-plus(m))^2 on any moment stream.
        let mut rng = Rng::seed_from(14);
        let rf = RationalFunctionPoint::random(&mut rng, 4);
        let h = rf.moments(10);
        let shifted = |size: usize| -> Scalar {
            if size == 0 {
                return Scalar::one();
            }
            crate::matrix::Matrix::from_fn(size, size, |a, b| h[a + b].clone())
                .det()
                .unwrap()
        };
        for m in 1..=3usize {
            let lhs = &hankel_det_from(&h, m, false) * &shifted(m);
            let plus = hankel_det_from(&h, m, true);
            let rhs = &(&hankel_det_from(&h, m + 1, false) * &shifted(m - 1)) + &(&plus * &plus);
            assert_eq!(lhs, rhs, "m={m}");
        }
    }

    #[test]
    fn toda_bracket_endpoints() {
        let h: Vec<Scalar> = (1..=8).map(s).collect();
        // {h_1, h_2} = h_2 h_1 (single term).
        assert_eq!(toda_moment_bracket(&h, 1, 2), &h[2] * &h[1]);
        assert_eq!(toda_moment_bracket(&h, 3, 3), Scalar::zero());
    }
}
