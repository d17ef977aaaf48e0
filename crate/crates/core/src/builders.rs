//! Block-matrix builders. Every matrix here has entries that are zeros or
//! entries of the input `X` in GL(n), assembled with 1-based indexing.

use alloc::vec::Vec;

use crate::matrix::sel;
use crate::sym::SymMatrix;

/// Stacked matrix `G(I_1, ..., I_p)`: block `l` holds the rows `I_l` of `X`
/// shifted right by `l-1` columns; total width `n + p - 1`.
pub fn stacked(n: usize, blocks: &[Vec<usize>]) -> SymMatrix {
    let p = blocks.len();
    let rows: usize = blocks.iter().map(|b| b.len()).sum();
    let mut m = SymMatrix::zeros(n, rows, n + p - 1);
    let mut r = 1;
    for (l, block) in blocks.iter().enumerate() {
        for &src in block {
            m.put_input_row(r, l + 1, src);
            r += 1;
        }
    }
    m
}

/// `G_{ij}(X) = G({1,n}^{j-2}, 1 ∪ [n+j-i, n], 1 ∪ [i+1, n])`, square of
/// size `n + j - 1`, defined for `2 <= j <= i <= n-1`.
pub fn g_ij(n: usize, i: usize, j: usize) -> SymMatrix {
    assert!(2 <= j && j <= i && i <= n - 1, "g_ij out of range");
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for _ in 0..j - 2 {
        blocks.push(alloc::vec![1, n]);
    }
    blocks.push(sel::one_union(&sel::range(n + j - i, n)));
    blocks.push(sel::one_union(&sel::range(i + 1, n)));
    let m = stacked(n, &blocks);
    assert!(m.rows() == n + j - 1 && m.cols() == n + j - 1);
    m
}

/// `K_{ij}(X)`: the maximal trailing square submatrix of
/// `G([i,n], [n+j-i, n])`, size `n - j + 2`, for `1 <= j < i <= n`,
/// `(i,j) != (n,1)`.
pub fn k_ij(n: usize, i: usize, j: usize) -> SymMatrix {
    assert!(1 <= j && j < i && i <= n && (i, j) != (n, 1), "k_ij out of range");
    let g = stacked(n, &[sel::range(i, n), sel::range(n + j - i, n)]);
    g.trailing(n - j + 2)
}

/// The staircase blocks `A(X)` and `B(X)` of size n+1: `A` carries
/// `X^{[1,n-1]}` in rows 1..n, columns 3..n+1; `B` carries column n of `X`
/// in rows 1..n at column 1 and a full copy of `X` in rows 2..n+1, columns
/// 2..n+1.
pub fn staircase_ab(n: usize) -> (SymMatrix, SymMatrix) {
    let mut a = SymMatrix::zeros(n, n + 1, n + 1);
    for r in 1..=n {
        for c in 1..=n - 1 {
            a.set(r, c + 2, Some((r, c)));
        }
    }
    let mut b = SymMatrix::zeros(n, n + 1, n + 1);
    for r in 1..=n {
        b.set(r, 1, Some((r, n)));
    }
    for r in 1..=n {
        for c in 1..=n {
            b.set(r + 1, c + 1, Some((r, c)));
        }
    }
    (a, b)
}

/// `F(X)`, square of size 2n-1: odd rows are shifted copies of the last row
/// of `X`, even rows shifted copies of the first row; row r is shifted by
/// floor(r/2).
pub fn f_matrix(n: usize) -> SymMatrix {
    let sz = 2 * n - 1;
    let mut f = SymMatrix::zeros(n, sz, sz);
    for r in 1..=sz {
        let src = if r % 2 == 1 { n } else { 1 };
        let off = r / 2;
        for c in 1..=n {
            f.set(r, off + c, Some((src, c)));
        }
    }
    f
}

/// Block-column matrix whose determinant is the cluster variable at vertex
/// `(k,l)` of the dual-side triangle, size `(n-k-l)(n+1)`, defined for
/// `k, l >= 1`, `k + l <= n - 1`.
///
/// Column block `i` (of `j = n-k-l`) starts after `(i-1)n` zero rows and
/// carries two tiers: `[X_{I ∪ n} 0]` and `[0 X_{1 ∪ γ(J)}]`, where
/// `I = [2, n-1]` except `[l+1, n-1]` in the last block, and `J = [2, n-1]`
/// except `[l+1, n-1]` / `[k+1, n-1]` in the last two blocks.
pub fn phi_kl(n: usize, k: usize, l: usize) -> SymMatrix {
    assert!(k >= 1 && l >= 1 && k + l <= n - 1, "phi_kl out of range");
    let j = n - k - l;
    let size = j * (n + 1);
    let mut m = SymMatrix::zeros(n, size, size);
    for b in 1..=j {
        let c0 = (b - 1) * (n + 1) + 1;
        let mut r = (b - 1) * n + 1;
        let i_sel = if b == j { sel::range(l + 1, n - 1) } else { sel::range(2, n - 1) };
        let j_sel = if b == j {
            sel::range(k + 1, n - 1)
        } else if b + 1 == j {
            sel::range(l + 1, n - 1)
        } else {
            sel::range(2, n - 1)
        };
        // Second tier: [X_{I ∪ n} | 0]
        for &src in i_sel.iter().chain(core::iter::once(&n)) {
            m.put_input_row(r, c0, src);
            r += 1;
        }
        // Third tier: [0 | X_{1 ∪ γ(J)}]
        for &src in core::iter::once(&1).chain(sel::gamma(&j_sel).iter()) {
            m.put_input_row(r, c0 + 1, src);
            r += 1;
        }
        debug_assert!(r - 1 <= size);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{ExactMatrix, Matrix};
    use crate::scalar::Scalar;

    #[test]
    fn phi_sizes() {
        for n in 4..=6 {
            for k in 1..=n - 2 {
                for l in 1..=n - 1 - k {
                    let m = phi_kl(n, k, l);
                    let want = (n - k - l) * (n + 1);
                    assert_eq!((m.rows(), m.cols()), (want, want), "n={n} k={k} l={l}");
                }
            }
        }
    }

    #[test]
    fn phi_first_block_flags() {
        // Leftmost entry of the last row of each second tier is x_{n1};
        // rightmost entry of the first row of each third tier is x_{1n}.
        let n = 6;
        let m = phi_kl(n, 2, 1);
        assert_eq!(m.at(5, 1), Some((6, 1)));
        assert_eq!(m.at(6, 7), Some((1, 6)));
    }

    #[test]
    fn g_ij_square_sizes() {
        for n in 4..=6 {
            for i in 2..=n - 1 {
                for j in 2..=i {
                    let m = g_ij(n, i, j);
                    assert_eq!(m.rows(), n + j - 1);
                }
            }
        }
    }

    #[test]
    fn k_sizes_and_corners() {
        for n in 4..=5 {
            for i in 2..=n {
                for j in 1..i {
                    if (i, j) == (n, 1) {
                        continue;
                    }
                    assert_eq!(k_ij(n, i, j).rows(), n - j + 2);
                }
            }
        }
    }

    #[test]
    fn f_matrix_rows_alternate() {
        let n = 4;
        let f = f_matrix(n);
        assert_eq!(f.rows(), 7);
        // Trailing 1x1 minor is x_{nn}.
        assert_eq!(f.at(7, 7), Some((4, 4)));
        // Row 1 is the last row of X, row 2 the first row shifted by one.
        assert_eq!(f.at(1, 1), Some((4, 1)));
        assert_eq!(f.at(2, 2), Some((1, 1)));
    }

    #[test]
    fn ab_block_placement() {
        let n = 4;
        let (a, b) = staircase_ab(n);
        // A has zero first two columns and a zero last row.
        for r in 1..=n + 1 {
            assert_eq!(a.at(r, 1), None);
            assert_eq!(a.at(r, 2), None);
        }
        for c in 1..=n + 1 {
            assert_eq!(a.at(n + 1, c), None);
        }
        // First column of B carries column n of X.
        for r in 1..=n {
            assert_eq!(b.at(r, 1), Some((r, n)));
        }
    }

    #[test]
    fn stacked_instantiation() {
        // G({1,3}) over a 3x3 matrix picks rows 1 and 3.
        let x = ExactMatrix::from_ints(3, 3, &[1, 2, 3, 4, 5, 6, 7, 8, 9]);
        let g = stacked(3, &[alloc::vec![1, 3]]);
        let inst = g.instantiate(&x);
        assert_eq!(inst, Matrix::from_fn(2, 3, |i, j| {
            Scalar::from_int(if i == 1 { [1, 2, 3][j - 1] } else { [7, 8, 9][j - 1] })
        }));
    }
}
