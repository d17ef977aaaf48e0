//! Independent oracles for the exact linear algebra layer. The oracles here
//! (cofactor expansion, multiply-back, finite series round-trips) never
//! share code with the implementation paths they certify.

use gcn_core::matrix::{ExactMatrix, MatError, Matrix};
use gcn_core::pit::{random_matrix, Rng};
use gcn_core::scalar::Scalar;

/// Brute-force Laplace expansion along the first row.
fn det_laplace(m: &ExactMatrix) -> Scalar {
    let n = m.rows();
    if n == 0 {
        return Scalar::one();
    }
    if n == 1 {
        return m.at(1, 1).clone();
    }
    let mut acc = Scalar::zero();
    for j in 1..=n {
        if m.at(1, j).is_zero() {
            continue;
        }
        let rows: Vec<usize> = (2..=n).collect();
        let cols: Vec<usize> = (1..=n).filter(|&c| c != j).collect();
        let minor = det_laplace(&m.select(&rows, &cols));
        let term = m.at(1, j) * &minor;
        acc = if j % 2 == 1 { acc + term } else { acc - term };
    }
    acc
}

#[test]
fn determinant_matches_cofactor_expansion() {
    let mut rng = Rng::seed_from(101);
    for _ in 0..3 {
        let m = random_matrix(&mut rng, 5);
        assert_eq!(m.det().unwrap(), det_laplace(&m));
    }
    // Rational entries take the elimination path; same oracle.
    let m = Matrix::from_fn(4, 4, |i, j| {
        Scalar::ratio((3 * i + j) as i64, (i + 2 * j) as i64)
    });
    assert_eq!(m.det().unwrap(), det_laplace(&m));
}

#[test]
fn determinant_is_multiplicative() {
    let mut rng = Rng::seed_from(102);
    for _ in 0..3 {
        let a = random_matrix(&mut rng, 4);
        let b = random_matrix(&mut rng, 4);
        assert_eq!(
            a.matmul(&b).det().unwrap(),
            a.det().unwrap() * b.det().unwrap()
        );
    }
}

#[test]
fn inverse_multiplies_back() {
    let mut rng = Rng::seed_from(103);
    let mut done = 0;
    while done < 3 {
        let m = random_matrix(&mut rng, 4);
        if m.det().unwrap().is_zero() {
            continue;
        }
        let inv = m.inverse().unwrap();
        assert_eq!(m.matmul(&inv), ExactMatrix::identity(4));
        done += 1;
    }
    // Singular input reports the error for the caller to resample.
    let sing = ExactMatrix::from_ints(2, 2, &[1, 2, 2, 4]);
    assert_eq!(sing.inverse().unwrap_err(), MatError::Singular);
}

#[test]
fn factorization_multiplies_back() {
    let mut rng = Rng::seed_from(104);
    let mut done = 0;
    while done < 3 {
        let m = random_matrix(&mut rng, 5);
        match m.gauss_factorize() {
            Ok((up, low)) => {
                // Unipotent upper times lower, exactly the input.
                assert!(up.lower().is_zero());
                for i in 1..=5 {
                    assert!(up.at(i, i).is_one());
                }
                assert!(low.upper().is_zero());
                assert_eq!(up.matmul(&low), m);
                done += 1;
            }
            Err(MatError::FactorizationPivot(_)) => continue,
            Err(e) => panic!("{e}"),
        }
    }
}

#[test]
fn exp_log_round_trip_on_unipotents() {
    let mut rng = Rng::seed_from(105);
    for _ in 0..3 {
        let n = 5;
        let mut u = ExactMatrix::identity(n);
        for i in 1..=n {
            for j in (i + 1)..=n {
                *u.at_mut(i, j) = rng.coord();
            }
        }
        let log = u.nilpotent_log().unwrap();
        assert!(log.diagonal().is_zero());
        assert_eq!(log.nilpotent_exp().unwrap(), u);
    }
}

#[test]
fn staircase_determinant_factors_through_the_image() {
    // det(λA + B) = x_{1n} det X det(λU + 1) at rational λ.
    let mut rng = Rng::seed_from(106);
    for n in 4..=5 {
        let x = gcn_core::suites::generic_for_maps(&mut rng, n);
        let u = gcn_core::maps::psi_prime(&x).unwrap();
        let (a, b) = gcn_core::builders::staircase_ab(n);
        let lambda = Scalar::ratio(7, 3);
        let m = a.instantiate(&x).scale(&lambda).add(&b.instantiate(&x));
        let lhs = m.det().unwrap();
        let rhs = x.at(1, n)
            * &(&x.det().unwrap()
                * &u.scale(&lambda).add(&ExactMatrix::identity(n - 1)).det().unwrap());
        assert_eq!(lhs, rhs, "n={n}");
    }
}

#[test]
fn corner_block_matrix_is_trailing_minor_family() {
    // The square stack at the gluing corner equals the big trailing minor.
    let mut rng = Rng::seed_from(107);
    for n in 4..=6 {
        let x = random_matrix(&mut rng, n);
        let g = gcn_core::builders::g_ij(n, n - 1, n - 1).instantiate(&x).det().unwrap();
        let f = gcn_core::builders::f_matrix(n)
            .trailing_principal(2 * n - 2)
            .instantiate(&x)
            .det()
            .unwrap();
        assert_eq!(g, f, "n={n}");
    }
}

#[test]
fn dual_block_columns_match_direct_construction() {
    // The expression-level block matrix on the dual side agrees with a
    // direct numeric column-stacking at a sample point.
    let mut rng = Rng::seed_from(108);
    let m = 4;
    let u = random_matrix(&mut rng, m);
    for k in 1..=m - 1 {
        for l in 1..=(m - k).min(m - 1) {
            let expr = gcn_core::catalog::phi_dual_matrix(m, k, l);
            let pt = gcn_core::expr::matrix_to_point(&u);
            // Numeric route: powers of u, literal column concatenation.
            let mut cols: Vec<Vec<Scalar>> = Vec::new();
            let id = ExactMatrix::identity(m);
            for c in 1..=k {
                cols.push((1..=m).map(|r| id.at(r, c).clone()).collect());
            }
            for c in 1..=l {
                cols.push((1..=m).map(|r| u.at(r, c).clone()).collect());
            }
            let mut pw = u.clone();
            for _ in 2..=m - k - l + 1 {
                pw = pw.matmul(&u);
                cols.push((1..=m).map(|r| pw.at(r, 1).clone()).collect());
            }
            let direct = Matrix::from_fn(m, m, |r, c| cols[c - 1][r - 1].clone());
            for i in 1..=m {
                for j in 1..=m {
                    let v = expr.at(i, j).eval::<Scalar>(&pt).unwrap();
                    assert_eq!(&v, direct.at(i, j), "k={k} l={l} ({i},{j})");
                }
            }
        }
    }
}

#[test]
fn corner_y_variable_matches_closed_form() {
    let mut rng = Rng::seed_from(109);
    let n = 5;
    let x = gcn_core::suites::generic_for_maps(&mut rng, n);
    let seed = gcn_core::structures::glued_seed(n, &x);
    let d = seed.quiver.vertex(gcn_core::quiver::VertexLabel::D);
    let y = seed.y_variable(d).unwrap().eval::<Scalar>(&seed.base).unwrap();
    let pt = &seed.base;
    let ev = |e: gcn_core::expr::Expr| e.eval::<Scalar>(pt).unwrap();
    let want = &(&(&ev(gcn_core::catalog::g(n, n - 1, n - 2)) * &ev(gcn_core::catalog::f(n, 2 * n - 4)))
        * x.at(n, 1))
        / &(&ev(gcn_core::catalog::g(n, n - 2, n - 2)) * &ev(gcn_core::catalog::f(n, 2 * n - 3)));
    assert_eq!(y, want);
}

#[test]
fn initial_variables_are_polynomial() {
    // Denominator-free expression DAGs for every initial variable.
    for n in 4..=6 {
        let mut rng = Rng::seed_from(110);
        let x = gcn_core::suites::generic_for_maps(&mut rng, n);
        let seed = gcn_core::structures::glued_seed(n, &x);
        for v in seed.quiver.vertices() {
            let (_, den) = seed.vars[v].degree_bound();
            assert_eq!(den, 0, "vertex {} at n={n}", seed.quiver.info(v).label);
        }
    }
}

#[test]
fn dual_seed_string_has_full_coefficient_slots() {
    // The only string on GL(m) has m+1 slots with unit ends.
    let mut rng = Rng::seed_from(111);
    for m in 3..=5 {
        let u = random_matrix(&mut rng, m);
        let seed = gcn_core::structures::dual_seed(m, &u);
        let v = seed.quiver.vertex(gcn_core::quiver::VertexLabel::Left(1, 1));
        let coeffs = &seed.strings[v].as_ref().unwrap().coeffs;
        assert_eq!(coeffs.len(), m + 1);
        let pt = &seed.base;
        assert!(coeffs[0].eval::<Scalar>(pt).unwrap().is_one());
        assert!(coeffs[m].eval::<Scalar>(pt).unwrap().is_one());
        assert_eq!(seed.quiver.info(v).mult, m);
    }
}

#[test]
fn glued_seed_string_matches_coefficient_family() {
    // Coefficients are c_r / det between the unit ends.
    let mut rng = Rng::seed_from(112);
    let n = 4;
    let x = gcn_core::suites::generic_for_maps(&mut rng, n);
    let seed = gcn_core::structures::glued_seed(n, &x);
    let v = seed.quiver.vertex(gcn_core::quiver::VertexLabel::Left(1, 1));
    let coeffs = &seed.strings[v].as_ref().unwrap().coeffs;
    assert_eq!(coeffs.len(), n);
    let det = x.det().unwrap();
    for (r, c) in coeffs.iter().enumerate().take(n - 1).skip(1) {
        let got = c.eval::<Scalar>(&seed.base).unwrap();
        let want = &gcn_core::catalog::c(n, r)
            .eval::<Scalar>(&seed.base)
            .unwrap()
            / &det;
        assert_eq!(got, want, "slot {r}");
    }
}
