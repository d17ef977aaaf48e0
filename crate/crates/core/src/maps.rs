//! The birational maps between GL(n), the dual-side GL(n-1) and the
//! rational-function space, the stabilizing iteration, and the inverse
//! reconstruction of X from its image and its first and last rows.

use alloc::vec::Vec;

use crate::expr::{x_atom, Expr};
use crate::matrix::{sel, ExactMatrix, MatError, Matrix};
use crate::rf::RationalFunctionPoint;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapError {
    NonGeneric,
    Inconsistent,
}

impl core::fmt::Display for MapError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            MapError::NonGeneric => write!(f, "non-generic point; resample"),
            MapError::Inconsistent => write!(f, "inconsistent fiber data"),
        }
    }
}

fn err(_: MatError) -> MapError {
    MapError::NonGeneric
}

/// Schur complement of the lower-left corner entry:
/// `X_L = X_[2,n]^[1,n-1] - X_[2,n]^[n,n] x_{1n}^{-1} X_[1,1]^[1,n-1]`.
pub fn x_left(x: &ExactMatrix) -> Result<ExactMatrix, MapError> {
    let n = x.rows();
    let inv = x.at(1, n).inv().ok_or(MapError::NonGeneric)?;
    Ok(Matrix::from_fn(n - 1, n - 1, |i, j| {
        x.at(i + 1, j) - &(&(x.at(i + 1, n) * &inv) * x.at(1, j))
    }))
}

/// `X_R = X_[1,n-1]^[2,n] - X_[1,n-1]^[1,1] x_{n1}^{-1} X_[n,n]^[2,n]`.
pub fn x_right(x: &ExactMatrix) -> Result<ExactMatrix, MapError> {
    let n = x.rows();
    let inv = x.at(n, 1).inv().ok_or(MapError::NonGeneric)?;
    Ok(Matrix::from_fn(n - 1, n - 1, |i, j| {
        x.at(i, j + 1) - &(&(x.at(i, 1) * &inv) * x.at(n, j + 1))
    }))
}

/// First component of the combined map: `X -> U = X_L X_R^{-1}` in GL(n-1).
pub fn psi_prime(x: &ExactMatrix) -> Result<ExactMatrix, MapError> {
    let xl = x_left(x)?;
    let xr = x_right(x)?;
    let xr_inv = xr.inverse().map_err(err)?;
    Ok(xl.matmul(&xr_inv))
}

/// Entries of the image of the first map as expressions of the source
/// entries (used to pull dual-side functions back).
pub fn psi_prime_exprs(n: usize) -> Matrix<Expr> {
    let m = n - 1;
    let xl: Matrix<Expr> = Matrix::from_fn(m, m, |i, j| {
        x_atom(n, i + 1, j).sub(&x_atom(n, i + 1, n).mul(&x_atom(n, 1, j)).div(&x_atom(n, 1, n)))
    });
    let xr: Matrix<Expr> = Matrix::from_fn(m, m, |i, j| {
        x_atom(n, i, j + 1).sub(&x_atom(n, i, 1).mul(&x_atom(n, n, j + 1)).div(&x_atom(n, n, 1)))
    });
    // X_R^{-1} through the adjugate.
    let det = Expr::det(xr.clone());
    let xr_inv = Matrix::from_fn(m, m, |i, j| {
        let rows: Vec<usize> = (1..=m).filter(|&r| r != j).collect();
        let cols: Vec<usize> = (1..=m).filter(|&c| c != i).collect();
        let minor = Expr::det(Matrix::from_fn(m - 1, m - 1, |a, b| {
            xr.at(rows[a - 1], cols[b - 1]).clone()
        }));
        let signed = if (i + j) % 2 == 0 { minor } else { minor.neg() };
        signed.div(&det)
    });
    xl.matmul(&xr_inv)
}

/// Second component: the rational function with coefficients
/// `qbar_i = x_{n,i+1}/x_{1n}` and `p_i = x_{1,i+1}/x_{1n}` (monic, degree
/// n-1).
pub fn psi_second(x: &ExactMatrix) -> Result<RationalFunctionPoint, MapError> {
    let n = x.rows();
    let inv = x.at(1, n).inv().ok_or(MapError::NonGeneric)?;
    let qbar: Vec<Scalar> = (0..=n - 1).map(|i| x.at(n, i + 1) * &inv).collect();
    let p: Vec<Scalar> = (0..=n - 1).map(|i| x.at(1, i + 1) * &inv).collect();
    Ok(RationalFunctionPoint::new(qbar, p))
}

/// Coefficient expressions of the second map.
pub fn psi_second_exprs(n: usize) -> (Vec<Expr>, Vec<Expr>) {
    let x1n = x_atom(n, 1, n);
    let qbar: Vec<Expr> = (0..=n - 1).map(|i| x_atom(n, n, i + 1).div(&x1n)).collect();
    let p: Vec<Expr> = (0..=n - 1).map(|i| x_atom(n, 1, i + 1).div(&x1n)).collect();
    (qbar, p)
}

/// One step of the stabilizing iteration: `Y -> X · lift(Y_+)` where `lift`
/// is the group-level shift of the unipotent upper factor.
pub fn h_step(x: &ExactMatrix, y: &ExactMatrix) -> Result<ExactMatrix, MapError> {
    let (plus, _) = y.gauss_factorize().map_err(err)?;
    let lifted = plus.gamma_group().map_err(err)?;
    Ok(x.matmul(&lifted))
}

/// The full iteration from `Y_0 = X`; stabilizes after `n - 2` steps. The
/// returned list holds `Y_0, ..., Y_{n-1}` so stabilization is observable.
pub fn h_iterate(x: &ExactMatrix) -> Result<Vec<ExactMatrix>, MapError> {
    let n = x.rows();
    let mut ys = alloc::vec![x.clone()];
    for _ in 1..=n.max(2) - 1 {
        let next = h_step(x, ys.last().unwrap())?;
        ys.push(next);
    }
    Ok(ys)
}

pub fn h_fixed_point(x: &ExactMatrix) -> Result<ExactMatrix, MapError> {
    let ys = h_iterate(x)?;
    Ok(ys[ys.len() - 1].clone())
}

/// Dual-side functions through flag minors of the stabilized matrix:
/// `g_{ij}(U) = det H(U)_[i,m]^[j, m-i+j] * Π_{s=2}^{j-1} det H(U)_[s,m]^[s,m]`.
pub fn g_dual_via_flags(u: &ExactMatrix, i: usize, j: usize) -> Result<Scalar, MapError> {
    let m = u.rows();
    assert!(2 <= j && j <= i && i <= m);
    let h = h_fixed_point(u)?;
    let mut acc = h
        .select(&sel::range(i, m), &sel::range(j, m - i + j))
        .det()
        .map_err(err)?;
    for s in 2..=j - 1 {
        let factor = h.select(&sel::range(s, m), &sel::range(s, m)).det().map_err(err)?;
        acc = acc * factor;
    }
    Ok(acc)
}

/// `N` with `V_{0,-} = lift*(N)^{-1} N`: the ordered product of the
/// upward shifts of the lower factor.
pub fn n_from_lower(v0m: &ExactMatrix) -> ExactMatrix {
    let m = v0m.rows();
    let mut acc = v0m.clone();
    let mut shifted = v0m.clone();
    for _ in 1..m {
        shifted = shifted.gamma_star_group_lower();
        acc = shifted.matmul(&acc);
    }
    acc
}

/// The unipotent-conjugation invariant `N(X) = X_- lift(X_-^{-1})` of the
/// Gauss factorization `X = X_+ X_0 X_-`.
pub fn lower_invariant(x: &ExactMatrix) -> Result<ExactMatrix, MapError> {
    let (_, low) = x.gauss_factorize().map_err(err)?;
    let diag = low.diagonal();
    let dinv = diag.inverse().map_err(err)?;
    let xm = dinv.matmul(&low);
    let xm_inv = xm.inverse().map_err(err)?;
    let lifted = xm_inv.gamma_group().map_err(err)?;
    Ok(xm.matmul(&lifted))
}

/// Companion data of the reconstruction: the matrix `M` and row `mu` built
/// from the first and last rows of the original matrix.
pub struct FiberRows {
    pub n: usize,
    pub first: Vec<Scalar>,
    pub last: Vec<Scalar>,
}

impl FiberRows {
    pub fn of(x: &ExactMatrix) -> FiberRows {
        let n = x.rows();
        FiberRows {
            n,
            first: (1..=n).map(|j| x.at(1, j).clone()).collect(),
            last: (1..=n).map(|j| x.at(n, j).clone()).collect(),
        }
    }

    fn x1n(&self) -> &Scalar {
        &self.first[self.n - 1]
    }

    fn xn1(&self) -> &Scalar {
        &self.last[0]
    }

    /// 2x2 minor on rows {1, n} and columns {a, b}.
    fn corner_minor(&self, a: usize, b: usize) -> Scalar {
        &(&self.first[a - 1] * &self.last[b - 1]) - &(&self.first[b - 1] * &self.last[a - 1])
    }

    /// `M`: companion-style matrix of size n-1 driven by the last row.
    pub fn m_matrix(&self) -> Result<ExactMatrix, MapError> {
        let n = self.n;
        let inv = self.xn1().inv().ok_or(MapError::NonGeneric)?;
        Ok(Matrix::from_fn(n - 1, n - 1, |i, j| {
            if i == 1 {
                -(&self.last[j] * &inv)
            } else if i == j + 1 {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        }))
    }

    /// `mu`: row vector over the corner 2x2 minors on columns {1, j}.
    pub fn mu_row(&self) -> Result<Vec<Scalar>, MapError> {
        let n = self.n;
        let inv = (self.x1n() * self.xn1()).inv().ok_or(MapError::NonGeneric)?;
        Ok((2..=n).map(|j| -(&self.corner_minor(1, j) * &inv)).collect())
    }

    /// `C`: the Krylov stack of `mu` under `M`, size (n-1) x (n-1).
    pub fn c_matrix(&self) -> Result<ExactMatrix, MapError> {
        let n = self.n;
        let m = self.m_matrix()?;
        let mu = self.mu_row()?;
        let mut rows: Vec<Vec<Scalar>> = alloc::vec![mu];
        for _ in 1..n - 1 {
            let prev = rows.last().unwrap();
            let mut next = Vec::with_capacity(n - 1);
            for j in 1..=n - 1 {
                let mut acc = Scalar::zero();
                for t in 1..=n - 1 {
                    acc += &prev[t - 1] * m.at(t, j);
                }
                next.push(acc);
            }
            rows.push(next);
        }
        Ok(Matrix::from_fn(n - 1, n - 1, |i, j| rows[i - 1][j - 1].clone()))
    }

    /// Lower-triangular Toeplitz matrix of the last row (leading column
    /// `x_{n1}, ..., x_{n,n-1}`).
    pub fn toeplitz(&self) -> ExactMatrix {
        let n = self.n;
        Matrix::from_fn(n - 1, n - 1, |i, j| {
            if i >= j {
                self.last[i - j].clone()
            } else {
                Scalar::zero()
            }
        })
    }

    /// `L`: the lower-left block of the reconstruction.
    pub fn l_matrix(&self) -> Result<ExactMatrix, MapError> {
        Ok(self.toeplitz().matmul(&self.c_matrix()?))
    }

    /// The row `m = tildeX_[n,n]^[1,n-1]` of corner minors.
    pub fn m_row(&self) -> Result<Vec<Scalar>, MapError> {
        let n = self.n;
        let inv = self.x1n().inv().ok_or(MapError::NonGeneric)?;
        Ok((1..=n - 1)
            .map(|j| -(&self.corner_minor(j, n) * &inv))
            .collect())
    }
}

/// Reconstruct X from its image under the first map together with its
/// first and last rows. Exact inverse of the combined map on generic
/// points.
pub fn reconstruct_x(
    u: &ExactMatrix,
    first: &[Scalar],
    last: &[Scalar],
) -> Result<ExactMatrix, MapError> {
    let m = u.rows();
    let n = m + 1;
    assert!(first.len() == n && last.len() == n);
    let rows = FiberRows { n, first: first.to_vec(), last: last.to_vec() };
    let x1n = rows.x1n().clone();
    let xn1 = rows.xn1().clone();
    if x1n.is_zero() || xn1.is_zero() {
        return Err(MapError::NonGeneric);
    }
    // Fiber condition: det U must equal x_{n1}/x_{1n}.
    let du = u.det().map_err(err)?;
    if du != &xn1 / &x1n {
        return Err(MapError::Inconsistent);
    }
    let v = h_fixed_point(u)?;
    let (v_plus, v_low) = v.gauss_factorize().map_err(err)?;
    let nmat = n_from_lower(&v_low);
    if nmat.at(1, 1) != &du {
        return Err(MapError::Inconsistent);
    }
    let n_inv = nmat.inverse().map_err(err)?;
    // Theta = diag(1, V_+) · diag(N^{-1}, 1).
    let mut theta = ExactMatrix::identity(n);
    for i in 1..=m {
        for j in 1..=m {
            *theta.at_mut(i + 1, j + 1) = v_plus.at(i, j).clone();
        }
    }
    let mut block = ExactMatrix::identity(n);
    for i in 1..=m {
        for j in 1..=m {
            *block.at_mut(i, j) = n_inv.at(i, j).clone();
        }
    }
    let theta = theta.matmul(&block);
    // Core = [[0,0],[L,0]] + last^T x_{1n}^{-1} first.
    let l = rows.l_matrix()?;
    let mut core = ExactMatrix::zeros(n, n);
    for i in 1..=m {
        for j in 1..=m {
            *core.at_mut(i + 1, j) = l.at(i, j).clone();
        }
    }
    let inv = x1n.inv().unwrap();
    for i in 1..=n {
        for j in 1..=n {
            let add = &(&last[i - 1] * &inv) * &first[j - 1];
            *core.at_mut(i, j) = core.at(i, j) + &add;
        }
    }
    Ok(theta.matmul(&core))
}

/// Conjugation of a generic matrix into the twisted companion normal form:
/// `W = beta (nu w_c) beta^{-1}` with `beta` unipotent upper, `nu` lower
/// triangular and `w_c` the cyclic shift `e_1 -> e_{m}, e_{j+1} -> e_j`.
/// Returns `(beta, nu)`.
pub fn companion_conjugation(w: &ExactMatrix) -> Result<(ExactMatrix, ExactMatrix), MapError> {
    let m = w.rows();
    let mut beta = ExactMatrix::identity(m);
    let mut nu = ExactMatrix::zeros(m, m);
    // beta e_m is pinned by W e_1 = nu_{mm} beta e_m.
    let pivot = w.at(m, 1).clone();
    if pivot.is_zero() {
        return Err(MapError::NonGeneric);
    }
    *nu.at_mut(m, m) = pivot.clone();
    let pinv = pivot.inv().unwrap();
    for r in 1..m {
        *beta.at_mut(r, m) = w.at(r, 1) * &pinv;
    }
    // Columns j = m-1 down to 1: W beta e_{j+1} = Σ_{i >= j} nu_{ij} beta e_i.
    for j in (1..m).rev() {
        let mut target = alloc::vec![Scalar::zero(); m];
        for r in 1..=m {
            let mut acc = Scalar::zero();
            for t in 1..=m {
                acc += w.at(r, t) * beta.at(t, j + 1);
            }
            target[r - 1] = acc;
        }
        for r in (j..=m).rev() {
            let mut acc = target[r - 1].clone();
            for i in (r + 1)..=m {
                acc -= nu.at(i, j) * beta.at(r, i);
            }
            // beta is unipotent upper: beta_{r,i} = 0 below the diagonal,
            // beta_{rr} = 1, so the remaining coefficient is nu_{rj}.
            *nu.at_mut(r, j) = acc;
        }
        let djj = nu.at(j, j).clone();
        if djj.is_zero() {
            return Err(MapError::NonGeneric);
        }
        let dinv = djj.inv().unwrap();
        for r in 1..j {
            let mut acc = target[r - 1].clone();
            for i in (j + 1)..=m {
                acc -= nu.at(i, j) * beta.at(r, i);
            }
            *beta.at_mut(r, j) = acc * dinv.clone();
        }
    }
    Ok((beta, nu))
}

/// The cyclic-shift representative used by the companion form.
pub fn coxeter_w(m: usize) -> ExactMatrix {
    let mut w = ExactMatrix::zeros(m, m);
    for i in 1..m {
        *w.at_mut(i, i + 1) = Scalar::one();
    }
    *w.at_mut(m, 1) = Scalar::one();
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pit::{generic_gl, Rng};

    fn generic_for_maps(rng: &mut Rng, n: usize) -> ExactMatrix {
        loop {
            let x = generic_gl(rng, n);
            if x_right(&x).unwrap().det().unwrap().is_zero() {
                continue;
            }
            return x;
        }
    }

    #[test]
    fn det_of_image_is_corner_ratio() {
        let mut rng = Rng::seed_from(40);
        for n in 4..=5 {
            let x = generic_for_maps(&mut rng, n);
            let u = psi_prime(&x).unwrap();
            assert_eq!(u.det().unwrap(), x.at(n, 1) / x.at(1, n));
        }
    }

    #[test]
    fn schur_identities() {
        // X(1 - E_L X) = (1 - X E_L) X = [[0,0],[X_L,0]] and the mirrored
        // statement for E_R.
        let mut rng = Rng::seed_from(41);
        let n = 4;
        let x = generic_for_maps(&mut rng, n);
        let xl = x_left(&x).unwrap();
        let xr = x_right(&x).unwrap();
        let e_l = {
            let mut m = ExactMatrix::zeros(n, n);
            *m.at_mut(n, 1) = x.at(1, n).inv().unwrap();
            m
        };
        let e_r = {
            let mut m = ExactMatrix::zeros(n, n);
            *m.at_mut(1, n) = x.at(n, 1).inv().unwrap();
            m
        };
        let id = ExactMatrix::identity(n);
        let lhs = x.matmul(&id.sub(&e_l.matmul(&x)));
        let rhs = id.sub(&x.matmul(&e_l)).matmul(&x);
        assert_eq!(lhs, rhs);
        for i in 1..=n - 1 {
            for j in 1..=n - 1 {
                assert_eq!(lhs.at(i + 1, j), xl.at(i, j));
                assert_eq!(lhs.at(i, n), &Scalar::zero());
            }
        }
        let lhs_r = x.matmul(&id.sub(&e_r.matmul(&x)));
        let rhs_r = id.sub(&x.matmul(&e_r)).matmul(&x);
        assert_eq!(lhs_r, rhs_r);
        for i in 1..=n - 1 {
            for j in 1..=n - 1 {
                assert_eq!(lhs_r.at(i, j + 1), xr.at(i, j));
            }
        }
    }

    #[test]
    fn psi_prime_exprs_match_numeric() {
        let mut rng = Rng::seed_from(42);
        let n = 4;
        let x = generic_for_maps(&mut rng, n);
        let u = psi_prime(&x).unwrap();
        let exprs = psi_prime_exprs(n);
        let pt = crate::expr::matrix_to_point(&x);
        for i in 1..=n - 1 {
            for j in 1..=n - 1 {
                let v = exprs.at(i, j).eval::<Scalar>(&pt).unwrap();
                assert_eq!(&v, u.at(i, j), "({i},{j})");
            }
        }
    }

    #[test]
    fn monic_second_map() {
        let mut rng = Rng::seed_from(43);
        let n = 5;
        let x = generic_for_maps(&mut rng, n);
        let rf = psi_second(&x).unwrap();
        assert!(rf.p[n - 1].is_one());
        // Fiber condition: qbar(0) = x_{n1}/x_{1n} = det U.
        assert_eq!(rf.qbar[0], x.at(n, 1) / x.at(1, n));
    }

    #[test]
    fn stabilization_of_iteration() {
        let mut rng = Rng::seed_from(44);
        for m in 3..=5 {
            let u = generic_gl(&mut rng, m);
            match h_iterate(&u) {
                Ok(ys) => {
                    assert_eq!(ys[m - 2], ys[m - 1], "m={m}");
                    // Fixed point satisfies Y = X lift(Y_+).
                    let y = &ys[m - 1];
                    let (plus, _) = y.gauss_factorize().unwrap();
                    assert_eq!(y, &u.matmul(&plus.gamma_group().unwrap()));
                }
                Err(_) => panic!("unlucky sample for m={m}"),
            }
        }
    }

    #[test]
    fn companion_conjugation_shape() {
        let mut rng = Rng::seed_from(45);
        let m = 4;
        let w = generic_gl(&mut rng, m);
        let (beta, nu) = companion_conjugation(&w).unwrap();
        // beta unipotent upper, nu lower triangular.
        assert!(beta.lower().is_zero());
        for i in 1..=m {
            assert!(beta.at(i, i).is_one());
        }
        assert!(nu.upper().is_zero());
        // W = beta nu w_c beta^{-1}.
        let wc = coxeter_w(m);
        let recon = beta
            .matmul(&nu)
            .matmul(&wc)
            .matmul(&beta.inverse().unwrap());
        assert_eq!(recon, w);
    }

    #[test]
    fn roundtrip_reconstruction() {
        let mut rng = Rng::seed_from(46);
        for n in 4..=5 {
            let mut done = false;
            for _ in 0..20 {
                let x = generic_for_maps(&mut rng, n);
                let Ok(u) = psi_prime(&x) else { continue };
                let rows = FiberRows::of(&x);
                match reconstruct_x(&u, &rows.first, &rows.last) {
                    Ok(back) => {
                        assert_eq!(back, x, "n={n}");
                        done = true;
                        break;
                    }
                    Err(MapError::NonGeneric) => continue,
                    Err(e) => panic!("unexpected {e:?}"),
                }
            }
            assert!(done, "no generic sample found for n={n}");
        }
    }
}
