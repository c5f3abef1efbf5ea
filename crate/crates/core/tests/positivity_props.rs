use gegenchain::metrics::{p1, theta0, theta1_matrix};
use gegenchain::numerics::{eigvals_symmetric, inertia_of, SymmetricMatrix};
use gegenchain::positivity::{boundary, eigencurves, positivity_record};
use gegenchain::GegenbauerParam;
use proptest::prelude::*;

fn param(a: f64) -> GegenbauerParam {
    GegenbauerParam::new(a).unwrap()
}

// Θ₀ + g·P₁ is congruent to I + g·M with M = Θ₀^{-1/2}·P₁·Θ₀^{-1/2}; its
// m-th negative eigenvalue appears at g = −1/μ for the m-th most negative μ of M.
fn congruence_boundaries(n: usize, a: f64) -> Vec<f64> {
    let p = param(a);
    let w: Vec<f64> = theta0(n, p)
        .unwrap()
        .diagonal()
        .iter()
        .map(|t| 1.0 / t.sqrt())
        .collect();
    let k = p1(n, p).unwrap().matrix();
    let m = SymmetricMatrix::from_fn(n, |i, j| w[i] * k.get(i, j) * w[j]);
    let floor = 1e-12 * m.norm_inf();
    eigvals_symmetric(&m)
        .unwrap()
        .into_iter()
        .filter(|&mu| mu < -floor)
        .map(|mu| -1.0 / mu)
        .collect()
}

#[test]
fn bisection_matches_congruence_oracle() {
    for a in [0.5, 1.0, 2.0, 5.0] {
        for n in 2..=10 {
            let oracle = congruence_boundaries(n, a);
            let rec = positivity_record(n, param(a), 1e-10).unwrap();
            for m in 0..3 {
                match (rec.get(m), oracle.get(m)) {
                    (Some(g), Some(o)) => {
                        assert!((g - o).abs() < 1e-8, "N={n} a={a} m={m}: {g} vs {o}")
                    }
                    (None, None) => {}
                    other => panic!("N={n} a={a} m={m}: {other:?}"),
                }
            }
        }
    }
}

fn first_differing_decimal(x: f64, y: f64) -> usize {
    let (sx, sy) = (format!("{x:.12}"), format!("{y:.12}"));
    let (dx, dy) = (sx.split('.').nth(1).unwrap(), sy.split('.').nth(1).unwrap());
    1 + dx
        .chars()
        .zip(dy.chars())
        .position(|(a, b)| a != b)
        .unwrap()
}

#[test]
fn table_boundaries_decrease_and_stabilize() {
    let g: Vec<f64> = (1..=9)
        .map(|n| positivity_record(n, param(1.0), 1e-11).unwrap().g_boundary)
        .collect();
    for n in 4..=9 {
        let (prev, cur) = (g[n - 2], g[n - 1]);
        assert!(cur < prev);
        // G(N) first differs from G(N−1) in the (N−3)-rd decimal digit.
        assert_eq!(first_differing_decimal(prev, cur), n - 3, "N={n}");
        assert!((cur - prev).abs() < 10f64.powi(4 - n as i32), "N={n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectrum_is_even_in_coupling(n in 1usize..=12, a in 0.2f64..10.0, g in 0.0f64..5.0) {
        let plus = eigvals_symmetric(&theta1_matrix(n, param(a), g).unwrap()).unwrap();
        let minus = eigvals_symmetric(&theta1_matrix(n, param(a), -g).unwrap()).unwrap();
        for (x, y) in plus.iter().zip(&minus) {
            prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
        }
    }

    #[test]
    fn negative_count_is_monotone(n in 2usize..=10, a in 0.2f64..10.0) {
        let mut last = 0;
        for s in 0..=300 {
            let g = s as f64 * 0.02;
            let count = inertia_of(&theta1_matrix(n, param(a), g).unwrap(), 0.0).unwrap().negatives;
            prop_assert!(count >= last, "g={}", g);
            last = count;
        }
    }

    #[test]
    fn boundary_is_a_genuine_crossing(n in 2usize..=8, a in 0.3f64..5.0) {
        let g = boundary(n, param(a), 0, 1e-10).unwrap();
        let below = inertia_of(&theta1_matrix(n, param(a), g - 1e-8).unwrap(), 0.0).unwrap();
        let above = inertia_of(&theta1_matrix(n, param(a), g + 1e-8).unwrap(), 0.0).unwrap();
        prop_assert_eq!(below.negatives, 0);
        prop_assert_eq!(above.negatives, 1);
    }
}

#[test]
fn smallest_eigenvalue_changes_sign_near_three_level_boundary() {
    let c = eigencurves(3, param(1.0), -1.2, 1.2, 241).unwrap();
    let low = c.track(0);
    let crossings: Vec<f64> = c
        .g_samples
        .windows(2)
        .zip(low.windows(2))
        .filter(|(_, l)| l[0].signum() != l[1].signum())
        .map(|(g, _)| 0.5 * (g[0] + g[1]))
        .collect();
    assert_eq!(crossings.len(), 2);
    assert!((crossings[1] - (2.0f64 / 3.0).sqrt()).abs() < 0.01);
    assert!((crossings[0] + crossings[1]).abs() < 1e-12);
}
