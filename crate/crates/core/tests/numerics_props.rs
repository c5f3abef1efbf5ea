use gegenchain::numerics::{
    dot, eig_symmetric, inertia_by_eigen, inertia_of, norm2, nullspace, sturm_count,
    tridiagonal_eigenvalues_bisection, DenseMatrix, SymmetricMatrix,
};
use proptest::prelude::*;

fn symmetric(max_n: usize) -> impl Strategy<Value = SymmetricMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(-10.0f64..10.0, n * (n + 1) / 2).prop_map(move |v| {
            let mut it = v.into_iter();
            let mut m = SymmetricMatrix::zeros(n);
            for i in 0..n {
                for j in 0..=i {
                    m.set(i, j, it.next().unwrap());
                }
            }
            m
        })
    })
}

// Σ ±uᵢuᵢᵀ: rank-deficient, with exact zero eigenvalues.
fn low_rank(max_n: usize) -> impl Strategy<Value = SymmetricMatrix> {
    (2..=max_n, 1usize..3).prop_flat_map(|(n, r)| {
        (
            prop::collection::vec(prop::collection::vec(-3.0f64..3.0, n), r),
            prop::collection::vec(any::<bool>(), r),
        )
            .prop_map(move |(us, signs)| {
                let mut m = SymmetricMatrix::zeros(n);
                for (u, s) in us.iter().zip(signs) {
                    let outer = SymmetricMatrix::from_fn(n, |i, j| u[i] * u[j]);
                    m.add_scaled(&outer, if s { 1.0 } else { -1.0 });
                }
                m
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn inertia_agrees_with_eigen_counting(m in symmetric(12)) {
        let tol = 1e-10 * m.norm_inf();
        prop_assert_eq!(inertia_of(&m, tol).unwrap().counts(), inertia_by_eigen(&m, tol).unwrap().counts());
    }
}

proptest! {
    #[test]
    fn inertia_of_rank_deficient(m in low_rank(10)) {
        let tol = 1e-10 * m.norm_inf().max(1e-300);
        let fast = inertia_of(&m, tol).unwrap();
        prop_assert_eq!(fast.counts(), inertia_by_eigen(&m, tol).unwrap().counts());
        prop_assert!(fast.zeros >= m.dim() - 2);
    }

    #[test]
    fn eigen_reconstruction(m in symmetric(15)) {
        let dec = eig_symmetric(&m).unwrap();
        let n = m.dim();
        let mut r = SymmetricMatrix::zeros(n);
        for (l, v) in dec.pairs() {
            r.add_scaled(&SymmetricMatrix::from_fn(n, |i, j| v[i] * v[j]), l);
        }
        r.add_scaled(&m, -1.0);
        prop_assert!(r.norm_inf() <= 1e-9 * m.norm_inf().max(1e-300));
        prop_assert!(dec.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn sturm_bisection_matches_jacobi(diag in prop::collection::vec(-2.0f64..2.0, 1..20), seed in any::<u64>()) {
        let n = diag.len();
        let off: Vec<f64> = (0..n.saturating_sub(1)).map(|i| (((seed >> (i % 60)) & 7) as f64 - 3.5) / 3.0).collect();
        let b = tridiagonal_eigenvalues_bisection(&diag, &off, 1e-13);
        let j = eig_symmetric(&SymmetricMatrix::tridiagonal(&diag, &off)).unwrap().values;
        for (x, y) in b.iter().zip(&j) {
            prop_assert!((x - y).abs() < 1e-10);
        }
        prop_assert_eq!(sturm_count(&diag, &off, 1e6), n);
    }

    #[test]
    fn nullspace_is_orthonormal_and_annihilated(rows in 1usize..6, extra in 1usize..5, v in prop::collection::vec(-5.0f64..5.0, 100)) {
        let cols = rows + extra;
        let a = DenseMatrix::from_fn(rows, cols, |i, j| v[(i * cols + j) % v.len()] + (i * j) as f64 * 0.1);
        let tol = 1e-10;
        let basis = nullspace(&a, tol).unwrap();
        prop_assert!(basis.len() >= extra);
        let scale = a.norm_inf().max(1.0);
        for (k, x) in basis.iter().enumerate() {
            prop_assert!(norm2(&a.mul_vec(x)) <= tol * scale * cols as f64);
            prop_assert!((norm2(x) - 1.0).abs() < 1e-10);
            for y in &basis[..k] {
                prop_assert!(dot(x, y).abs() < 1e-10);
            }
        }
    }
}
