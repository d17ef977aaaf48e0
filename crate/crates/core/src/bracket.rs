//! The three Poisson brackets as exact bilinear forms on gradients at a
//! point, plus gradient extraction by forward-mode differentiation.
//!
//! Conventions: `(∇f)_{ij} = ∂f/∂x_{ji}`, so that the gradient of the entry
//! `x_{1k}` is the matrix unit `E_{k1}` and the left/right gradients are the
//! products `∇f·X` and `X·∇f`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::bd::BdOps;
use crate::dual::DualScalar;
use crate::expr::{dual_point, EvalError, Expr};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Exact value and gradient of an expression at a point of GL(n).
pub fn grad(f: &Expr, x: &Matrix<Scalar>) -> Result<(Scalar, Matrix<Scalar>), EvalError> {
    let n = x.rows();
    let point = dual_point(x);
    let d = f.eval::<DualScalar>(&point)?;
    let nabla = Matrix::from_fn(n, n, |i, j| d.partial((j - 1) * n + (i - 1)));
    Ok((d.v, nabla))
}

/// Bracket evaluator at a fixed base point, caching gradients across the
/// many pairs a suite asks for.
pub struct MainBracket {
    pub x: Matrix<Scalar>,
    ops: BdOps,
    point: Vec<DualScalar>,
    // Cached gradients own their key expression: a dropped node's address
    // may be reused by the allocator, so a bare pointer key would go stale.
    cache: BTreeMap<usize, (Expr, Scalar, Matrix<Scalar>)>,
}

impl MainBracket {
    pub fn new(x: Matrix<Scalar>) -> MainBracket {
        let n = x.rows();
        let point = dual_point(&x);
        MainBracket { x, ops: BdOps::new(n), point, cache: BTreeMap::new() }
    }

    pub fn grad_of(&mut self, f: &Expr) -> Result<(Scalar, Matrix<Scalar>), EvalError> {
        let key = crate::expr::expr_key(f);
        if let Some((_, v, nabla)) = self.cache.get(&key) {
            return Ok((v.clone(), nabla.clone()));
        }
        let n = self.x.rows();
        let d = f.eval::<DualScalar>(&self.point)?;
        let nabla = Matrix::from_fn(n, n, |i, j| d.partial((j - 1) * n + (i - 1)));
        self.cache.insert(key, (f.clone(), d.v.clone(), nabla.clone()));
        Ok((d.v, nabla))
    }

    /// The Poisson-homogeneous bracket:
    /// `{f,g} = <R̄_+(∇f X), ∇g X> - <R_+(X ∇f), X ∇g>`.
    pub fn bracket(&mut self, f: &Expr, g: &Expr) -> Result<Scalar, EvalError> {
        let (_, nf) = self.grad_of(f)?;
        let (_, ng) = self.grad_of(g)?;
        let left_f = nf.matmul(&self.x);
        let left_g = ng.matmul(&self.x);
        let right_f = self.x.matmul(&nf);
        let right_g = self.x.matmul(&ng);
        let lhs = self.ops.r_plus_bar(&left_f).trace_pair(&left_g);
        let rhs = self.ops.r_plus(&right_f).trace_pair(&right_g);
        Ok(lhs - rhs)
    }

    /// `{f,g}/(fg)`, the log-canonical coefficient when it is constant.
    pub fn omega(&mut self, f: &Expr, g: &Expr) -> Result<Scalar, EvalError> {
        let (vf, _) = self.grad_of(f)?;
        let (vg, _) = self.grad_of(g)?;
        let b = self.bracket(f, g)?;
        let den = (vf * vg).inv().ok_or(EvalError::DivByZero)?;
        Ok(b * den)
    }
}

/// Dual-group bracket on GL(m):
/// `{f,g}† = <R_+([∇f,U]), [∇g,U]> - <[∇f,U], ∇g·U>`.
pub struct DualBracket {
    pub u: Matrix<Scalar>,
    ops: BdOps,
    point: Vec<DualScalar>,
    cache: BTreeMap<usize, (Expr, Scalar, Matrix<Scalar>)>,
}

impl DualBracket {
    pub fn new(u: Matrix<Scalar>) -> DualBracket {
        let m = u.rows();
        let point = dual_point(&u);
        DualBracket { u, ops: BdOps::new(m), point, cache: BTreeMap::new() }
    }

    pub fn grad_of(&mut self, f: &Expr) -> Result<(Scalar, Matrix<Scalar>), EvalError> {
        let key = crate::expr::expr_key(f);
        if let Some((_, v, nabla)) = self.cache.get(&key) {
            return Ok((v.clone(), nabla.clone()));
        }
        let m = self.u.rows();
        let d = f.eval::<DualScalar>(&self.point)?;
        let nabla = Matrix::from_fn(m, m, |i, j| d.partial((j - 1) * m + (i - 1)));
        self.cache.insert(key, (f.clone(), d.v.clone(), nabla.clone()));
        Ok((d.v, nabla))
    }

    pub fn bracket(&mut self, f: &Expr, g: &Expr) -> Result<Scalar, EvalError> {
        let (_, nf) = self.grad_of(f)?;
        let (_, ng) = self.grad_of(g)?;
        let comm_f = nf.matmul(&self.u).sub(&self.u.matmul(&nf));
        let comm_g = ng.matmul(&self.u).sub(&self.u.matmul(&ng));
        let lhs = self.ops.r_plus(&comm_f).trace_pair(&comm_g);
        let rhs = comm_f.trace_pair(&ng.matmul(&self.u));
        Ok(lhs - rhs)
    }

    pub fn omega(&mut self, f: &Expr, g: &Expr) -> Result<Scalar, EvalError> {
        let (vf, _) = self.grad_of(f)?;
        let (vg, _) = self.grad_of(g)?;
        let b = self.bracket(f, g)?;
        let den = (vf * vg).inv().ok_or(EvalError::DivByZero)?;
        Ok(b * den)
    }
}

/// Hankel-side bracket on functions of the moment atoms, extended from
/// `{h_i, h_j} = Σ_{k=i}^{j-1} h_{k+1} h_{i+j-k-1}` by the Leibniz rule.
pub struct TodaBracket {
    pub moments: Vec<Scalar>,
    point: Vec<DualScalar>,
    cache: BTreeMap<usize, (Expr, Scalar, Vec<Scalar>)>,
}

impl TodaBracket {
    pub fn new(moments: Vec<Scalar>) -> TodaBracket {
        let point: Vec<DualScalar> =
            moments.iter().enumerate().map(|(i, v)| DualScalar::atom(v.clone(), i)).collect();
        TodaBracket { moments, point, cache: BTreeMap::new() }
    }

    fn partials(&mut self, f: &Expr) -> Result<(Scalar, Vec<Scalar>), EvalError> {
        let key = crate::expr::expr_key(f);
        if let Some((_, v, p)) = self.cache.get(&key) {
            return Ok((v.clone(), p.clone()));
        }
        let d = f.eval::<DualScalar>(&self.point)?;
        let parts: Vec<Scalar> = (0..self.moments.len()).map(|i| d.partial(i)).collect();
        self.cache.insert(key, (f.clone(), d.v.clone(), parts.clone()));
        Ok((d.v, parts))
    }

    pub fn bracket(&mut self, f: &Expr, g: &Expr) -> Result<Scalar, EvalError> {
        let (_, df) = self.partials(f)?;
        let (_, dg) = self.partials(g)?;
        let k = self.moments.len();
        let mut acc = Scalar::zero();
        for i in 0..k {
            for j in (i + 1)..k {
                let coeff = &(&df[i] * &dg[j]) - &(&df[j] * &dg[i]);
                if coeff.is_zero() {
                    continue;
                }
                let w = crate::rf::toda_moment_bracket(&self.moments, i, j);
                acc += coeff * w;
            }
        }
        Ok(acc)
    }

    pub fn omega(&mut self, f: &Expr, g: &Expr) -> Result<Scalar, EvalError> {
        let (vf, _) = self.partials(f)?;
        let (vg, _) = self.partials(g)?;
        let b = self.bracket(f, g)?;
        let den = (vf * vg).inv().ok_or(EvalError::DivByZero)?;
        Ok(b * den)
    }
}

/// The bracket of two coordinate entries as an expression of the matrix
/// atoms (quadratic), letting brackets nest for Jacobi spot-checks.
pub fn entry_bracket_expr(n: usize, a: usize, b: usize, c: usize, d: usize) -> Expr {
    let ops = BdOps::new(n);
    let x = crate::expr::atom_matrix(n);
    let e_f: Matrix<Expr> = unit_matrix(n, b, a);
    let e_g: Matrix<Expr> = unit_matrix(n, d, c);
    let left_f = e_f.matmul(&x);
    let left_g = e_g.matmul(&x);
    let right_f = x.matmul(&e_f);
    let right_g = x.matmul(&e_g);
    let lhs = ops.r_plus_bar(&left_f).trace_pair(&left_g);
    let rhs = ops.r_plus(&right_f).trace_pair(&right_g);
    lhs.sub(&rhs)
}

fn unit_matrix(n: usize, i: usize, j: usize) -> Matrix<Expr> {
    Matrix::from_fn(n, n, |r, c| if (r, c) == (i, j) { Expr::int(1) } else { Expr::int(0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::x_atom;
    use crate::pit::{random_matrix, Rng};

    #[test]
    fn gradient_of_entry_is_matrix_unit() {
        let mut rng = Rng::seed_from(20);
        let n = 4;
        let x = random_matrix(&mut rng, n);
        let k = 3;
        let f = x_atom(n, 1, k);
        let (v, nabla) = grad(&f, &x).unwrap();
        assert_eq!(&v, x.at(1, k));
        for i in 1..=n {
            for j in 1..=n {
                let want = if (i, j) == (k, 1) { Scalar::one() } else { Scalar::zero() };
                assert_eq!(nabla.at(i, j), &want);
            }
        }
        // ∇x_{1k}·X = e_k X_{[1,1]}: row k holds the first row of X.
        let left = nabla.matmul(&x);
        for j in 1..=n {
            assert_eq!(left.at(k, j), x.at(1, j));
        }
    }

    #[test]
    fn gradient_of_det_is_scaled_inverse() {
        let mut rng = Rng::seed_from(21);
        let n = 4;
        let x = crate::pit::generic_gl(&mut rng, n);
        let f = Expr::det(crate::expr::atom_matrix(n));
        let (v, nabla) = grad(&f, &x).unwrap();
        assert_eq!(v, x.det().unwrap());
        assert_eq!(nabla, x.inverse().unwrap().scale(&v));
    }

    #[test]
    fn gradient_is_linear_and_leibniz() {
        let mut rng = Rng::seed_from(22);
        let n = 3;
        let x = random_matrix(&mut rng, n);
        let f = x_atom(n, 1, 2).mul(&x_atom(n, 3, 1));
        let g = x_atom(n, 2, 2);
        let (vf, nf) = grad(&f, &x).unwrap();
        let (vg, ng) = grad(&g, &x).unwrap();
        let (_, nsum) = grad(&f.add(&g), &x).unwrap();
        assert_eq!(nsum, nf.add(&ng));
        let (_, nprod) = grad(&f.mul(&g), &x).unwrap();
        assert_eq!(nprod, nf.scale(&vg).add(&ng.scale(&vf)));
        let (_, nconst) = grad(&Expr::int(17), &x).unwrap();
        assert!(nconst.is_zero());
    }

    #[test]
    fn main_bracket_row_formulas_smoke() {
        // {x_{1k}, x_{1l}} = (l-k)/n x_{1k} x_{1l} is the quickest
        // end-to-end signal that the operator conventions are right.
        let mut rng = Rng::seed_from(23);
        let n = 4;
        let x = random_matrix(&mut rng, n);
        let mut ctx = MainBracket::new(x.clone());
        for k in 1..=n {
            for l in 1..=n {
                let f = x_atom(n, 1, k);
                let g = x_atom(n, 1, l);
                let got = ctx.bracket(&f, &g).unwrap();
                let want = Scalar::ratio(l as i64 - k as i64, n as i64)
                    * (x.at(1, k) * x.at(1, l));
                assert_eq!(got, want, "k={k} l={l}");
            }
        }
    }

    #[test]
    fn main_bracket_antisymmetric() {
        let mut rng = Rng::seed_from(24);
        let n = 4;
        let x = random_matrix(&mut rng, n);
        let mut ctx = MainBracket::new(x);
        let f = x_atom(n, 2, 3);
        let g = x_atom(n, 3, 1).mul(&x_atom(n, 1, 4));
        let a = ctx.bracket(&f, &g).unwrap();
        let b = ctx.bracket(&g, &f).unwrap();
        assert_eq!(a, -b);
    }

    #[test]
    fn entry_bracket_expr_matches_direct() {
        let mut rng = Rng::seed_from(25);
        let n = 4;
        let x = random_matrix(&mut rng, n);
        let mut ctx = MainBracket::new(x.clone());
        let point = crate::expr::matrix_to_point(&x);
        for _ in 0..6 {
            let (a, b, c, d) = (
                rng.index(n) + 1,
                rng.index(n) + 1,
                rng.index(n) + 1,
                rng.index(n) + 1,
            );
            let direct = ctx.bracket(&x_atom(n, a, b), &x_atom(n, c, d)).unwrap();
            let via_expr = entry_bracket_expr(n, a, b, c, d).eval::<Scalar>(&point).unwrap();
            assert_eq!(direct, via_expr, "({a},{b}),({c},{d})");
        }
    }
}
