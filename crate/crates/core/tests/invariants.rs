//! Property tests over randomized structures.

use proptest::prelude::*;

use gcn_core::matrix::{ExactMatrix, Matrix};
use gcn_core::quiver::{Quiver, VertexLabel};
use gcn_core::rf::RationalFunctionPoint;
use gcn_core::scalar::Scalar;

fn small_matrix(n: usize) -> impl Strategy<Value = ExactMatrix> {
    prop::collection::vec(-20i64..=20, n * n).prop_map(move |v| {
        Matrix::from_fn(n, n, |i, j| Scalar::from_int(v[(i - 1) * n + (j - 1)]))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn det_multiplicative(a in small_matrix(4), b in small_matrix(4)) {
        prop_assert_eq!(
            a.matmul(&b).det().unwrap(),
            a.det().unwrap() * b.det().unwrap()
        );
    }

    #[test]
    fn factorization_round_trip(m in small_matrix(4)) {
        if let Ok((up, low)) = m.gauss_factorize() {
            prop_assert_eq!(up.matmul(&low), m);
        }
    }

    #[test]
    fn moment_recurrence(coeffs in prop::collection::vec(-9i64..=9, 7)) {
        // qbar of degree 3, monic p of degree 3.
        let qbar: Vec<Scalar> = coeffs[0..4].iter().map(|&v| Scalar::from_int(v)).collect();
        let mut p: Vec<Scalar> = coeffs[4..7].iter().map(|&v| Scalar::from_int(v)).collect();
        p.push(Scalar::one());
        let rf = RationalFunctionPoint::new(qbar, p);
        let h = rf.moments(8);
        for j in 1..=3usize {
            let mut acc = Scalar::zero();
            for (i, hi) in h.iter().enumerate() {
                if i + j <= 3 {
                    acc = acc + (&rf.p[i + j] * hi);
                }
            }
            prop_assert_eq!(acc, rf.qbar[j].clone());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn quiver_mutation_involutive(edges in prop::collection::vec((0usize..5, 0usize..5, 1usize..=2), 0..8)) {
        let mut q = Quiver::new();
        for t in 0..5u32 {
            q.add_vertex(VertexLabel::Custom(t), 1, t == 4, false);
        }
        let mut b = [[0usize; 5]; 5];
        for (i, j, c) in edges {
            if i != j {
                b[i][j] += c;
            }
        }
        // Keep one direction per pair so the table is a valid quiver.
        for i in 0..5 {
            for j in (i + 1)..5 {
                let d = b[i][j] as i64 - b[j][i] as i64;
                let (f, t, c) = if d >= 0 { (i, j, d) } else { (j, i, -d) };
                if c > 0 {
                    q.add_arrows(VertexLabel::Custom(f as u32), VertexLabel::Custom(t as u32), c as usize);
                }
            }
        }
        for v in 0..4 {
            let twice = q.mutate(v).unwrap().mutate(v).unwrap();
            prop_assert!(twice.same_mutable_structure(&q));
        }
    }
}
