//! Concrete quivers and initial seeds: the dual-side lozenge, the
//! Hankel-side ladder, their pullbacks along the two maps, the glued quiver
//! with the unfrozen corner, the two-cycle extension, and the subquiver the
//! long mutation sequence runs on.

use alloc::vec::Vec;

use crate::catalog;
use crate::expr::{matrix_to_point, Expr};
use crate::matrix::ExactMatrix;
use crate::quiver::{Quiver, Seed, VertexLabel};
use crate::rf::{hankel_expr, RationalFunctionPoint};
use VertexLabel::{Coeff, Left, Right, TMinus, TPlus, Zero, A, B, C, D};

/// The dual-side lozenge quiver on GL(m), m >= 3: two triangular meshes
/// joined base to base, two zigzag paths, a frozen corner and isolated
/// coefficient vertices. The leftmost vertex (1,1) is special with
/// multiplicity m.
pub fn dual_quiver(m: usize) -> Quiver {
    assert!(m >= 3);
    let mut q = Quiver::new();
    let mu8 = m as u8;
    for k in 1..=m - 1 {
        for l in 1..=m - k {
            let mult = if (k, l) == (1, 1) { m } else { 1 };
            q.add_vertex(Left(k as u8, l as u8), mult, false, false);
        }
    }
    for i in 2..=m {
        for j in 2..=i {
            q.add_vertex(Right(i as u8, j as u8), 1, (i, j) == (m, m), false);
        }
    }
    q.add_vertex(Zero, 1, true, false);
    for r in 1..=m - 1 {
        q.add_vertex(Coeff(r as u8), 1, true, true);
    }
    // Left-triangle mesh: south, northeast, northwest; the northeast arrows
    // along the upper side (l = 1) are omitted.
    for k in 1..=m - 1 {
        for l in 1..=m - k {
            let (k8, l8) = (k as u8, l as u8);
            if k >= 2 {
                q.add_arrows(Left(k8, l8), Left(k8 - 1, l8 + 1), 1);
            }
            if l >= 2 && k + 1 + l <= m {
                q.add_arrows(Left(k8, l8), Left(k8 + 1, l8), 1);
            }
            if l >= 2 {
                q.add_arrows(Left(k8, l8), Left(k8, l8 - 1), 1);
            }
        }
    }
    // Left zigzag path (1,l) -> (l+1,1) -> (1,l+1).
    for l in 1..=m.saturating_sub(2) {
        let l8 = l as u8;
        q.add_arrows(Left(1, l8), Left(l8 + 1, 1), 1);
        q.add_arrows(Left(l8 + 1, 1), Left(1, l8 + 1), 1);
    }
    // Right-triangle mesh; the northwest arrows along the lower side
    // (i = j) are omitted.
    for i in 2..=m {
        for j in 2..=i {
            let (i8, j8) = (i as u8, j as u8);
            if i > j {
                q.add_arrows(Right(i8, j8), Right(i8 - 1, j8), 1);
            }
            if j >= 3 {
                q.add_arrows(Right(i8, j8), Right(i8, j8 - 1), 1);
            }
            if i > j && i + 1 <= m {
                q.add_arrows(Right(i8, j8), Right(i8 + 1, j8 + 1), 1);
            }
        }
    }
    // Right zigzag path <m,j> -> <j,j> -> <m,j+1>.
    for j in 2..=m - 1 {
        let j8 = j as u8;
        q.add_arrows(Right(mu8, j8), Right(j8, j8), 1);
        q.add_arrows(Right(j8, j8), Right(mu8, j8 + 1), 1);
    }
    // Base connectors.
    for mp in 2..=m {
        q.add_arrows(Right(mp as u8, 2), Left(mp as u8 - 1, (m - mp + 1) as u8), 1);
    }
    for mp in 2..=m - 1 {
        q.add_arrows(Left(mp as u8 - 1, (m - mp + 1) as u8), Right(mp as u8 + 1, 2), 1);
    }
    // Frozen corner.
    q.add_arrows(Left(1, 1), Zero, 1);
    q.add_arrows(Zero, Right(2, 2), 1);
    q
}

/// Initial seed of the dual structure on GL(m) with the sign-modified
/// variables (the signs that make the pullback identities sign-free for
/// the ambient size n = m + 1). Atom space: the m^2 entries of U.
pub fn dual_seed(m: usize, u: &ExactMatrix) -> Seed {
    let n = m + 1;
    let q = dual_quiver(m);
    let mut vars: Vec<Expr> = Vec::with_capacity(q.len());
    for v in q.vertices() {
        let e = match q.info(v).label {
            Left(k, l) => catalog::phi_dual(m, k as usize, l as usize)
                .scale_by(&catalog::tt_s_sign(n, k as usize, l as usize)),
            Right(i, j) => catalog::g_dual(m, i as usize, j as usize)
                .scale_by(&catalog::hat_s_sign(n, i as usize, j as usize)),
            Zero => catalog::det_u(m),
            Coeff(r) => catalog::c_dual(m, r as usize),
            other => panic!("unexpected vertex {other}"),
        };
        vars.push(e);
    }
    let mut seed = Seed::new(q, vars, matrix_to_point(u));
    let mut coeffs: Vec<Expr> = Vec::with_capacity(m + 1);
    coeffs.push(Expr::int(1));
    for r in 1..=m - 1 {
        coeffs.push(catalog::c_dual(m, r));
    }
    coeffs.push(Expr::int(1));
    seed.set_string(Left(1, 1), coeffs);
    seed
}

/// The Hankel-side ladder on 2m+1 vertices; frozen at (m,+) and (m+1,-).
pub fn toda_quiver(m: usize) -> Quiver {
    assert!(m >= 2);
    let mut q = Quiver::new();
    for mp in 1..=m + 1 {
        q.add_vertex(TMinus(mp as u8), 1, mp == m + 1, false);
    }
    for mp in 1..=m {
        q.add_vertex(TPlus(mp as u8), 1, mp == m, false);
    }
    for mp in 2..=m {
        q.add_arrows(TPlus(mp as u8), TPlus(mp as u8 - 1), 1);
        q.add_arrows(TMinus(mp as u8), TMinus(mp as u8 - 1), 1);
    }
    q.add_arrows(TMinus(m as u8 + 1), TMinus(m as u8), 1);
    for mp in 1..=m - 1 {
        q.add_arrows(TMinus(mp as u8), TPlus(mp as u8), 2);
    }
    q.add_arrows(TMinus(m as u8), TPlus(m as u8), 1);
    for mp in 1..=m - 1 {
        q.add_arrows(TPlus(mp as u8), TMinus(mp as u8 + 1), 2);
    }
    q
}

/// Initial Hankel seed: `t̄_k^±` at the ladder vertices and the ratio at the
/// extra frozen corner. Atom space: moments `h_0 ..= h_{2m}`.
pub fn toda_seed(m: usize, point: &RationalFunctionPoint) -> Seed {
    assert_eq!(point.m, m);
    let q = toda_quiver(m);
    let mut vars: Vec<Expr> = Vec::with_capacity(q.len());
    for v in q.vertices() {
        let e = match q.info(v).label {
            TMinus(k) if (k as usize) <= m => hankel_expr(k as usize, false),
            TMinus(_) => hankel_expr(m + 1, false).div(&hankel_expr(m, true)),
            TPlus(k) => hankel_expr(k as usize, true),
            other => panic!("unexpected vertex {other}"),
        };
        vars.push(e);
    }
    Seed::new(q, vars, point.moments(2 * m))
}

/// Pullback of the dual-side quiver along the first map: two extra frozen
/// vertices A (x_{1n}) and B (det X) with arrows
/// `(n-2,1) -> A -> (1,1)` and `(n-2,1) -> B -> <n-1,2>`.
pub fn psi1_pullback_quiver(n: usize) -> Quiver {
    let m = n - 1;
    let mut q = dual_quiver(m);
    q.add_vertex(A, 1, true, false);
    q.add_vertex(B, 1, true, false);
    q.add_arrows(Left(n as u8 - 2, 1), A, 1);
    q.add_arrows(A, Left(1, 1), 1);
    q.add_arrows(Left(n as u8 - 2, 1), B, 1);
    q.add_arrows(B, Right(n as u8 - 1, 2), 1);
    q
}

/// Pullback of the Hankel-side quiver along the second map: one extra
/// frozen vertex A with an arrow `A -> (1,-)`.
pub fn psi2_pullback_quiver(n: usize) -> Quiver {
    let m = n - 1;
    let mut q = toda_quiver(m);
    q.add_vertex(A, 1, true, false);
    q.add_arrows(A, TMinus(1), 1);
    q
}

fn pullback_var_dual(n: usize, label: VertexLabel) -> Expr {
    match label {
        Left(k, l) => catalog::phi(n, k as usize, l as usize),
        Right(i, j) => catalog::g(n, i as usize, j as usize),
        Zero => catalog::xn1(n),
        Coeff(r) => catalog::c(n, r as usize),
        A => catalog::x1n(n),
        B => catalog::det_x(n),
        other => panic!("unexpected vertex {other}"),
    }
}

/// Seed of the first pullback: numerators of the pulled-back variables.
pub fn psi1_pullback_seed(n: usize, x: &ExactMatrix) -> Seed {
    let q = psi1_pullback_quiver(n);
    let vars: Vec<Expr> =
        q.vertices().map(|v| pullback_var_dual(n, q.info(v).label)).collect();
    let mut seed = Seed::new(q, vars, matrix_to_point(x));
    seed.set_string(Left(1, 1), glued_string(n, true));
    seed
}

fn pullback_var_toda(n: usize, label: VertexLabel) -> Expr {
    match label {
        TMinus(k) if (k as usize) <= n - 1 => catalog::f(n, 2 * k as usize - 1),
        TMinus(_) => catalog::xn1(n),
        TPlus(k) => catalog::f(n, 2 * k as usize),
        A => catalog::x1n(n),
        other => panic!("unexpected vertex {other}"),
    }
}

/// Seed of the second pullback.
pub fn psi2_pullback_seed(n: usize, x: &ExactMatrix) -> Seed {
    let q = psi2_pullback_quiver(n);
    let vars: Vec<Expr> =
        q.vertices().map(|v| pullback_var_toda(n, q.info(v).label)).collect();
    Seed::new(q, vars, matrix_to_point(x))
}

/// The exchange string at the special vertex: coefficients `c_r(X)/det X`
/// on GL(n), or plain `c_r(X)` for the two-cycle extension.
fn glued_string(n: usize, divide_by_det: bool) -> Vec<Expr> {
    let mut coeffs: Vec<Expr> = Vec::with_capacity(n);
    coeffs.push(Expr::int(1));
    for r in 1..=n - 2 {
        let c = catalog::c(n, r);
        coeffs.push(if divide_by_det { c.div(&catalog::det_x(n)) } else { c });
    }
    coeffs.push(Expr::int(1));
    coeffs
}

/// The glued quiver on GL(n): both pullbacks identified along A, C, D,
/// with the gluing vertex D unfrozen and one extra arrow `D -> C`.
pub fn glued_quiver(n: usize) -> Quiver {
    let m = n - 1;
    let mu8 = m as u8;
    let dual = psi1_pullback_quiver(n);
    let mut q = Quiver::new();
    // Rename: Zero -> C, <m,m> -> D (unfrozen).
    let rename = |l: VertexLabel| -> VertexLabel {
        match l {
            Zero => C,
            Right(i, j) if (i, j) == (mu8, mu8) => D,
            other => other,
        }
    };
    for v in dual.vertices() {
        let info = dual.info(v);
        let frozen = if rename(info.label) == D { false } else { info.frozen };
        q.add_vertex(rename(info.label), info.mult, frozen, info.isolated);
    }
    for v in dual.vertices() {
        for u in dual.vertices() {
            let c = dual.arrows(v, u);
            if c > 0 {
                q.add_arrows(rename(dual.info(v).label), rename(dual.info(u).label), c);
            }
        }
    }
    // Hankel part: TPlus(m) -> D, TMinus(m+1) -> C; A is shared.
    let toda = psi2_pullback_quiver(n);
    let rename_t = |l: VertexLabel| -> VertexLabel {
        match l {
            TPlus(i) if i == mu8 => D,
            TMinus(i) if i as usize == m + 1 => C,
            other => other,
        }
    };
    for v in toda.vertices() {
        let l = rename_t(toda.info(v).label);
        if q.id_of(l).is_none() {
            let info = toda.info(v);
            q.add_vertex(l, info.mult, info.frozen, info.isolated);
        }
    }
    for v in toda.vertices() {
        for u in toda.vertices() {
            let c = toda.arrows(v, u);
            if c > 0 {
                q.add_arrows(rename_t(toda.info(v).label), rename_t(toda.info(u).label), c);
            }
        }
    }
    q.add_arrows(D, C, 1);
    q
}

fn glued_var(n: usize, label: VertexLabel) -> Expr {
    match label {
        Left(k, l) => catalog::phi(n, k as usize, l as usize),
        Right(i, j) => catalog::g(n, i as usize, j as usize),
        TMinus(k) => catalog::f(n, 2 * k as usize - 1),
        TPlus(k) => catalog::f(n, 2 * k as usize),
        A => catalog::x1n(n),
        B => catalog::det_x(n),
        C => catalog::xn1(n),
        D => catalog::g(n, n - 1, n - 1),
        Coeff(r) => catalog::c(n, r as usize),
        other => panic!("unexpected vertex {other}"),
    }
}

/// The initial seed of the glued structure on GL(n).
pub fn glued_seed(n: usize, x: &ExactMatrix) -> Seed {
    let q = glued_quiver(n);
    let vars: Vec<Expr> = q.vertices().map(|v| glued_var(n, q.info(v).label)).collect();
    let mut seed = Seed::new(q, vars, matrix_to_point(x));
    seed.set_string(Left(1, 1), glued_string(n, true));
    seed
}

/// The glued quiver with one opposite arrow pair between (1,1) and B.
pub fn extended_quiver(n: usize) -> Quiver {
    let mut q = glued_quiver(n);
    q.set_opposite_pair(Left(1, 1), B);
    q
}

/// The two-cycle extension: same vertices and functions, one opposite
/// arrow pair between (1,1) and B, and the string without the det X
/// denominators (the structure living on all of Mat(n)).
pub fn extended_seed(n: usize, x: &ExactMatrix) -> Seed {
    let q = extended_quiver(n);
    let vars: Vec<Expr> = q.vertices().map(|v| glued_var(n, q.info(v).label)).collect();
    let mut seed = Seed::new(q, vars, matrix_to_point(x));
    seed.set_string(Left(1, 1), glued_string(n, false));
    seed
}

/// The subquiver the long mutation sequence runs on: the left triangle is
/// cut down to its base (frozen), A and the isolated coefficient vertices
/// are dropped, and the innermost Hankel vertex is frozen.
pub fn w_quiver(n: usize) -> Quiver {
    let full = glued_quiver(n);
    let keep = move |l: VertexLabel| -> bool {
        match l {
            Left(k, lv) => (k as usize) + (lv as usize) == n - 1,
            A | Coeff(_) => false,
            _ => true,
        }
    };
    let freeze = |l: VertexLabel| -> bool {
        matches!(l, Left(_, _) | TMinus(1))
    };
    full.restrict(&keep, &freeze)
}

/// Seed on the subquiver, sharing the glued variables.
pub fn w_seed(n: usize, x: &ExactMatrix) -> Seed {
    let q = w_quiver(n);
    let vars: Vec<Expr> = q.vertices().map(|v| glued_var(n, q.info(v).label)).collect();
    Seed::new(q, vars, matrix_to_point(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_quiver_counts() {
        // Two triangles of m(m-1)/2 vertices, a frozen corner, m-1 isolated.
        for m in 3..=5 {
            let q = dual_quiver(m);
            assert_eq!(q.len(), m * (m - 1) + 1 + (m - 1));
            let isolated = q.vertices().filter(|&v| q.info(v).isolated).count();
            assert_eq!(isolated, m - 1);
            // Isolated vertices have no incident arrows.
            for v in q.vertices() {
                if q.info(v).isolated {
                    for u in q.vertices() {
                        assert_eq!(q.arrows(v, u), 0);
                        assert_eq!(q.arrows(u, v), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn glued_quiver_is_consistent() {
        for n in 4..=6 {
            let q = glued_quiver(n);
            // Gluing corners exist exactly once.
            for l in [A, B, C, D] {
                assert!(q.id_of(l).is_some(), "missing {l} at n={n}");
            }
            // D carries the expected neighborhood: out to <n-1,n-2>,
            // (n-2,+), C; in from <n-2,n-2>, (n-1,-).
            let d = q.vertex(D);
            let out: Vec<_> = q
                .vertices()
                .filter(|&u| q.arrows(d, u) > 0)
                .map(|u| q.info(u).label)
                .collect();
            let inn: Vec<_> = q
                .vertices()
                .filter(|&u| q.arrows(u, d) > 0)
                .map(|u| q.info(u).label)
                .collect();
            let m = n as u8 - 1;
            assert!(out.contains(&Right(m, m - 1)));
            assert!(out.contains(&TPlus(m - 1)));
            assert!(out.contains(&C));
            assert_eq!(out.len(), 3, "n={n} out={out:?}");
            assert!(inn.contains(&Right(m - 1, m - 1)));
            assert!(inn.contains(&TMinus(m)));
            assert_eq!(inn.len(), 2, "n={n} in={inn:?}");
        }
    }

    #[test]
    fn w_quiver_mutable_count() {
        for n in 4..=6 {
            let q = w_quiver(n);
            let mutable = q.mutable_vertices().count();
            assert_eq!(mutable, (n * n + n - 6) / 2, "n={n}");
        }
    }
}
