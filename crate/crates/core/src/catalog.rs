//! The named function families on GL(n), on the dual-side GL(m), and on the
//! rational-function space, together with the sign conventions that make
//! every pullback identity hold on the nose rather than up to sign.

use alloc::vec::Vec;

use crate::builders;
use crate::expr::{atom_matrix, x_atom, Expr};
use crate::matrix::{sel, Matrix};
use crate::scalar::{neg_one_pow, Scalar};
use crate::words::Word;

/// Sign attached to the dual-side triangle functions on GL(n).
pub fn s_sign(n: usize, k: usize, l: usize) -> Scalar {
    let (n, k, l) = (n as i64, k as i64, l as i64);
    if n % 2 == 0 {
        neg_one_pow(k * (l + 1))
    } else {
        neg_one_pow((n - 1) / 2 + k * (k - 1) / 2 + l * (l - 1) / 2)
    }
}

/// Sign that the pullback of the `(k,l)` dual function carries.
pub fn tt_s_sign(n: usize, k: usize, l: usize) -> Scalar {
    let (n, k, l) = (n as i64, k as i64, l as i64);
    let e = if n % 2 == 0 { (n - 2) / 2 } else { (n - 1) / 2 };
    neg_one_pow(e + k * (k - 1) / 2 + l * (l - 1) / 2)
}

/// Sign on the pullback of the `⟨i,j⟩` dual function.
pub fn hat_s_sign(n: usize, i: usize, j: usize) -> Scalar {
    let (n, i, j) = (n as i64, i as i64, j as i64);
    neg_one_pow((n + j + 1) * (i + j))
}

// ---------------------------------------------------------------------------
// Functions of X in GL(n) (atom space: the n^2 entries).
// ---------------------------------------------------------------------------

pub fn x1n(n: usize) -> Expr {
    x_atom(n, 1, n)
}

pub fn xn1(n: usize) -> Expr {
    x_atom(n, n, 1)
}

pub fn det_x(n: usize) -> Expr {
    Expr::det(atom_matrix(n))
}

/// `phi_{kl}(X)`: determinant of the tiered block-column matrix.
pub fn phi(n: usize, k: usize, l: usize) -> Expr {
    builders::phi_kl(n, k, l).det_expr()
}

/// `g_{ij}(X)`: determinant of the stacked matrix.
pub fn g(n: usize, i: usize, j: usize) -> Expr {
    builders::g_ij(n, i, j).det_expr()
}

/// `f_m(X)`: trailing principal minor of the alternating-row matrix.
pub fn f(n: usize, m: usize) -> Expr {
    builders::f_matrix(n).trailing_principal(m).det_expr()
}

/// `k_{ij}(X)` for `j < i`, and the trailing principal minors
/// `k_{ii}(X) = det X_[i,n]^[i,n]`.
pub fn k(n: usize, i: usize, j: usize) -> Expr {
    if i == j {
        let rows = sel::range(i, n);
        let m = Matrix::from_fn(rows.len(), rows.len(), |a, b| {
            x_atom(n, rows[a - 1], rows[b - 1])
        });
        Expr::det(m)
    } else {
        builders::k_ij(n, i, j).det_expr()
    }
}

pub fn word(n: usize, w: &Word) -> Expr {
    w.matrix(n).det_expr()
}

/// Exact coefficient extraction of a polynomial of degree at most `deg`
/// from its values at the integer nodes `0..=deg`; returns the row of
/// weights for the coefficient of `λ^r`.
fn coeff_weights(deg: usize, r: usize) -> Vec<Scalar> {
    let nodes: Vec<Scalar> = (0..=deg as i64).map(Scalar::from_int).collect();
    // Inverse Vandermonde row r via Lagrange basis expansion.
    let vand = Matrix::from_fn(deg + 1, deg + 1, |t, e| {
        nodes[t - 1].pow(e as i64 - 1).unwrap()
    });
    let inv = vand.inverse().expect("Vandermonde is invertible");
    (1..=deg + 1).map(|t| inv.at(r + 1, t).clone()).collect()
}

/// `c_r(X)`: the signed coefficient of `λ^r` in `det(λ A(X) + B(X))`,
/// realized by exact interpolation at integer nodes.
pub fn c(n: usize, r: usize) -> Expr {
    assert!(r <= n - 1);
    let (a, b) = builders::staircase_ab(n);
    let ae = a.to_expr_matrix();
    let be = b.to_expr_matrix();
    let deg = n - 1;
    let weights = coeff_weights(deg, r);
    let mut acc = Expr::int(0);
    for (t, w) in weights.iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        let lam = Scalar::from_int(t as i64);
        let m = ae.scale(&lam).add(&be);
        acc = acc.add(&Expr::det(m).scale_by(w));
    }
    acc.scale_by(&neg_one_pow((r * n) as i64))
}

// ---------------------------------------------------------------------------
// Functions of U in GL(m) (dual side; atom space: the m^2 entries of U).
// ---------------------------------------------------------------------------

/// Columns of the dual-side block matrix: first `k` columns of the
/// identity, first `l` columns of `U`, then the first column of `U^p` for
/// `p = 2 ..= m-k-l+1`.
pub fn phi_dual_matrix(m: usize, k: usize, l: usize) -> Matrix<Expr> {
    assert!(k >= 1 && l >= 1 && k + l <= m);
    let u = atom_matrix(m);
    let mut cols: Vec<Vec<Expr>> = Vec::with_capacity(m);
    let ident: Matrix<Expr> = Matrix::identity(m);
    for c in 1..=k {
        cols.push((1..=m).map(|r| ident.at(r, c).clone()).collect());
    }
    for c in 1..=l {
        cols.push((1..=m).map(|r| u.at(r, c).clone()).collect());
    }
    let mut pw = u.clone();
    for _ in 2..=m - k - l + 1 {
        pw = pw.matmul(&u);
        cols.push((1..=m).map(|r| pw.at(r, 1).clone()).collect());
    }
    Matrix::from_fn(m, m, |r, c| cols[c - 1][r - 1].clone())
}

/// `varphi_{kl}(U) = s_{kl} det Φ_{kl}(U)` with the parity-dependent sign.
pub fn phi_dual(m: usize, k: usize, l: usize) -> Expr {
    Expr::det(phi_dual_matrix(m, k, l)).scale_by(&s_sign(m, k, l))
}

fn subsets(range: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    fn rec(range: &[usize], size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..range.len() {
            if range.len() - i < size - cur.len() {
                break;
            }
            cur.push(range[i]);
            rec(range, size, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(range, size, 0, &mut cur, &mut out);
    out
}

fn minor(u: &Matrix<Expr>, rows: &[usize], cols: &[usize]) -> Expr {
    Expr::det(Matrix::from_fn(rows.len(), cols.len(), |a, b| {
        u.at(rows[a - 1], cols[b - 1]).clone()
    }))
}

/// `g_{ij}(U)` through the explicit subset sum (no sign).
///
/// For `j = 2` this is a single minor. For `j > 2` the sum runs over chains
/// of column subsets `I_1, ..., I_{j-1}` of `[2,m]` of sizes `m-i+1` and
/// `m-j+t` for `t >= 2` (the last one is forced to be all of `[2,m]`);
/// factor `t >= 2` pairs columns `I_t` against rows `γ*(I_1) ∪ [m-i+j, m]`
/// for `t = 2` and `γ*(I_{t-1}) ∪ {m}` afterwards. Chains with overlapping
/// row selections contribute a repeated-row minor and drop out.
pub fn g_dual_subset_sum(m: usize, i: usize, j: usize) -> Expr {
    assert!(2 <= j && j <= i && i <= m);
    let u = atom_matrix(m);
    if j == 2 {
        return minor(&u, &sel::range(i, m), &sel::range(2, m - i + 2));
    }
    let mut sizes: Vec<usize> = Vec::new();
    sizes.push(m - i + 1);
    for t in 2..=j - 1 {
        sizes.push(m - j + t);
    }
    let full: Vec<usize> = sel::range(2, m);
    let mut terms: Vec<Expr> = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        u: &Matrix<Expr>,
        m: usize,
        i: usize,
        j: usize,
        sizes: &[usize],
        full: &[usize],
        depth: usize,
        prev: &[usize],
        acc: Expr,
        terms: &mut Vec<Expr>,
    ) {
        if depth == sizes.len() {
            terms.push(acc);
            return;
        }
        for cand in subsets(full, sizes[depth]) {
            let factor = if depth == 0 {
                minor(u, &sel::range(i, m), &cand)
            } else {
                let base = if depth == 1 {
                    sel::sorted_union(&sel::gamma_star(prev), &sel::range(m - i + j, m))
                } else {
                    sel::sorted_union(&sel::gamma_star(prev), &[m])
                };
                let Some(rows) = base else { continue };
                minor(u, &rows, &cand)
            };
            rec(u, m, i, j, sizes, full, depth + 1, &cand, acc.mul(&factor), terms);
        }
    }
    rec(&u, m, i, j, &sizes, &full, 0, &[], Expr::int(1), &mut terms);
    Expr::sum(&terms)
}

pub fn g_dual(m: usize, i: usize, j: usize) -> Expr {
    g_dual_subset_sum(m, i, j)
}

/// `c_r(U)`: signed characteristic coefficients,
/// `det(1 + λU) = 1 + Σ_r (-1)^{r(m-1)} λ^r c_r(U)`.
pub fn c_dual(m: usize, r: usize) -> Expr {
    assert!(1 <= r && r <= m);
    let u = atom_matrix(m);
    let weights = coeff_weights(m, r);
    let ident: Matrix<Expr> = Matrix::identity(m);
    let mut acc = Expr::int(0);
    for (t, w) in weights.iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        let lam = Scalar::from_int(t as i64);
        let mm = ident.add(&u.scale(&lam));
        acc = acc.add(&Expr::det(mm).scale_by(w));
    }
    acc.scale_by(&neg_one_pow((r * (m - 1)) as i64))
}

pub fn det_u(m: usize) -> Expr {
    Expr::det(atom_matrix(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::matrix_to_point;
    use crate::pit::{generic_gl, random_matrix, Rng};

    #[test]
    fn sign_table_even_case() {
        // s_{11} for size 4 is (-1)^{1*2} = 1.
        assert_eq!(s_sign(4, 1, 1), Scalar::one());
        assert_eq!(s_sign(4, 1, 2), -Scalar::one());
    }

    #[test]
    fn c_expr_matches_char_poly() {
        // det(1 + λ U) coefficients for a small concrete U.
        let m = 3;
        let mut rng = Rng::seed_from(31);
        let u = random_matrix(&mut rng, m);
        let pt = matrix_to_point(&u);
        // c_m(U) = det U.
        let cm = c_dual(m, m).eval::<Scalar>(&pt).unwrap();
        let sign = neg_one_pow((m * (m - 1)) as i64);
        assert_eq!(cm, u.det().unwrap() * sign.clone());
        // c_1(U) should be ±Tr(U).
        let c1 = c_dual(m, 1).eval::<Scalar>(&pt).unwrap();
        assert_eq!(c1.clone() * neg_one_pow((m - 1) as i64), u.trace());
    }

    #[test]
    fn tt_c0_is_corner_times_det() {
        let n = 4;
        let mut rng = Rng::seed_from(32);
        let x = generic_gl(&mut rng, n);
        let pt = matrix_to_point(&x);
        let c0 = c(n, 0).eval::<Scalar>(&pt).unwrap();
        assert_eq!(c0, x.at(1, n) * &x.det().unwrap());
    }

    #[test]
    fn g_i2_is_single_minor() {
        let m = 4;
        let mut rng = Rng::seed_from(33);
        let u = random_matrix(&mut rng, m);
        let pt = matrix_to_point(&u);
        for i in 2..=m {
            let got = g_dual(m, i, 2).eval::<Scalar>(&pt).unwrap();
            let want = u
                .select(&sel::range(i, m), &sel::range(2, m - i + 2))
                .det()
                .unwrap();
            assert_eq!(got, want, "i={i}");
        }
    }

    #[test]
    fn g_mm_is_boundary_term() {
        // g_{mm}(U) has all subsets maximal: a single term.
        let m = 4;
        let mut rng = Rng::seed_from(34);
        let u = random_matrix(&mut rng, m);
        let pt = matrix_to_point(&u);
        let v = g_dual(m, m, m).eval::<Scalar>(&pt).unwrap();
        assert!(!v.is_zero());
    }
}
