use num_complex::Complex64;
use proptest::prelude::*;
use rhop_core::dets::{relative_logdet_report, szego_table, RelDetJob};
use rhop_core::measures::{
    circle_moments, discretize_line, fft_coefficients, line_moments, schur_function, WeightSpec,
};
use rhop_core::numeric::linalg::{ldl_pivots, ldl_pivots_hermitian};
use rhop_core::numeric::Dd;
use rhop_core::opcircle::{szego_eval, verblunsky_levinson};
use rhop_core::opline::{eval_opl, recurrence_from_moments, toda_commutation_check};
use rhop_core::rhp::{contour_points, solve_rhp_circle, verify_jump};
use rhop_core::Precision;

fn circle_weight() -> impl Strategy<Value = WeightSpec> {
    prop_oneof![
        (-2.5f64..2.5).prop_map(WeightSpec::exp_cos),
        (-0.9f64..0.9).prop_map(WeightSpec::cos),
        Just(WeightSpec::one_plus_cos()),
        Just(WeightSpec::lebesgue()),
    ]
}

fn line_weight() -> impl Strategy<Value = WeightSpec> {
    prop_oneof![
        Just(WeightSpec::gauss()),
        (0.05f64..1.0, 0.0f64..1.0).prop_map(|(g, d)| WeightSpec::quartic(g, d)),
        (-1.0f64..1.0).prop_map(|c| WeightSpec::product(WeightSpec::gauss(), WeightSpec::gauss_bump(c)).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hankel_matrices_are_positive_definite(w in line_weight(), n in 1usize..=20) {
        let m = line_moments(&w, 2 * n).unwrap().line_dd();
        let h: Vec<Vec<Dd>> = (0..=n).map(|i| (0..=n).map(|j| m[i + j]).collect()).collect();
        prop_assert_eq!(ldl_pivots(h).len(), n + 1);
    }

    #[test]
    fn toeplitz_matrices_are_positive_definite(w in circle_weight(), n in 1usize..=20) {
        let m = circle_moments(&w, n).unwrap();
        let t: Vec<Vec<_>> = (0..=n as i64).map(|j| (0..=n as i64).map(|k| m.mu(k - j)).collect()).collect();
        prop_assert_eq!(ldl_pivots_hermitian(t).len(), n + 1);
    }

    #[test]
    fn moments_of_real_weights_are_conjugate_symmetric(w in circle_weight(), k in 0i64..12) {
        let m = circle_moments(&w, 12).unwrap();
        prop_assert!((m.mu_c64(-k) - m.mu_c64(k).conj()).norm() == 0.0);
        let grid = 256;
        let samples: Vec<f64> = (0..grid)
            .map(|j| w.eval(2.0 * std::f64::consts::PI * j as f64 / grid as f64))
            .collect();
        let c = fft_coefficients(&samples);
        let kk = k as usize;
        if kk > 0 {
            prop_assert!((c[grid - kk] - c[kk].conj()).norm() <= 1e-15);
        }
        prop_assert!((c[kk] - m.mu_c64(k)).norm() <= 1e-12);
    }

    #[test]
    fn schur_function_is_bounded_inside_the_disk(w in circle_weight(), r in 0.0f64..0.9, th in 0.0..std::f64::consts::TAU) {
        if w.to_string() == "lebesgue" {
            return Ok(());
        }
        let m = circle_moments(&w, 80).unwrap();
        let f = schur_function(&m, Complex64::from_polar(r, th)).unwrap();
        prop_assert!(f.norm() < 1.0);
    }

    #[test]
    fn szego_recurrence_is_consistent(w in circle_weight(), n in 0usize..12) {
        let m = circle_moments(&w, n + 1).unwrap();
        let v = verblunsky_levinson(&m, n + 1).unwrap();
        let mut worst: f64 = 0.0;
        for j in 0..64 {
            let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / 64.0);
            let (p, s) = szego_eval(&v, n, z).unwrap();
            let (next, _) = szego_eval(&v, n + 1, z).unwrap();
            let pred = (z * p - v.alpha[n].conj() * s) / v.rho[n];
            worst = worst.max((next - pred).norm());
        }
        prop_assert!(worst <= 1e-10, "residual {worst}");
    }

    #[test]
    fn commutation_holds_along_the_flow(g in 0.1f64..0.8, n in 1usize..6, t in -0.5f64..0.5) {
        let r = toda_commutation_check(&WeightSpec::quartic(g, 0.0), n, t).unwrap();
        prop_assert!(r.residual <= 1e-8, "residual {}", r.residual);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn relative_determinants_match_brute_force(w1 in circle_weight(), w2 in circle_weight(), n in 1usize..=10) {
        let r = relative_logdet_report(&RelDetJob::new(w1, w2, n).unwrap()).unwrap();
        prop_assert!(r.rel_err <= 1e-6 || r.abs_err <= 1e-12, "{r:?}");
    }

    #[test]
    fn relative_determinants_on_the_line(c in -0.9f64..1.0, n in 1usize..=10) {
        let job = RelDetJob::new(WeightSpec::gauss_bump(c), WeightSpec::gauss(), n).unwrap();
        let r = relative_logdet_report(&job).unwrap();
        prop_assert!(r.rel_err <= 1e-6 || r.abs_err <= 1e-12, "{r:?}");
    }
}

#[test]
fn orthonormality_residual_for_line_builtins() {
    for w in [WeightSpec::gauss(), WeightSpec::quartic(0.5, 0.0), WeightSpec::quartic(0.2, 0.7)] {
        let n = 15;
        let m = line_moments(&w, 2 * n + 2).unwrap();
        let rec = recurrence_from_moments(&m, n + 1, Precision::Extended).unwrap();
        let (x, q) = discretize_line(&w, 80).unwrap();
        let mut gram = vec![vec![0.0; n + 1]; n + 1];
        for (xi, wi) in x.iter().zip(&q) {
            let p = eval_opl(&rec, n, *xi).unwrap();
            for j in 0..=n {
                for k in 0..=n {
                    gram[j][k] += wi * p[j] * p[k];
                }
            }
        }
        let mut worst: f64 = 0.0;
        for j in 0..=n {
            for k in 0..=n {
                let delta = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((gram[j][k] - delta).abs());
            }
        }
        assert!(worst <= 1e-10, "{w}: {worst}");
    }
}

#[test]
fn quadrature_is_converged_under_grid_doubling() {
    // A product weight has no closed form, so its moments come from sampling.
    let w = WeightSpec::product(WeightSpec::exp_cos(1.5), WeightSpec::cos(0.6)).unwrap();
    let m = circle_moments(&w, 16).unwrap();
    for grid in [512usize, 1024] {
        let samples: Vec<f64> = (0..grid)
            .map(|j| w.eval(2.0 * std::f64::consts::PI * j as f64 / grid as f64))
            .collect();
        let c = fft_coefficients(&samples);
        for k in 0..=16 {
            assert!((c[k] - m.mu_c64(k as i64)).norm() <= 1e-13, "grid {grid}, k {k}");
        }
    }
}

#[test]
fn solver_jump_residual_decays_spectrally() {
    let w = WeightSpec::exp_cos(1.0);
    let pts = contour_points(&w, 64).unwrap();
    let mut prev = f64::INFINITY;
    for modes in [4usize, 8, 16, 32] {
        let s = solve_rhp_circle(&w, 3, modes).unwrap();
        let r = verify_jump(&s, &pts).unwrap().jump_residual;
        if prev > 1e-12 {
            assert!(r <= prev / 10.0, "M = {modes}: {r} after {prev}");
        }
        prev = r;
    }
    assert!(prev <= 1e-12);
}

#[test]
fn strong_szego_error_decreases_for_half_and_one() {
    let ns: Vec<usize> = (5..=30).step_by(5).collect();
    for s in [0.5, 1.0] {
        let rows = szego_table(&WeightSpec::exp_cos(s), &ns, 200).unwrap();
        for pair in rows.windows(2) {
            assert!(pair[1].error.abs() < pair[0].error.abs(), "s = {s}: {:?}", pair);
        }
    }
}

#[test]
fn strong_szego_constant_term_for_normalized_weight() {
    // Normalizing e^{cos θ} shifts the potential by ln I₀(1), so V̂₀ ≠ 0.
    let w = WeightSpec::exp_cos(1.0).probability().unwrap();
    let rows = szego_table(&w, &[20], 0).unwrap();
    assert!(rows[0].prediction < 0.0);
    assert!(rows[0].error.abs() < 1e-12, "{:?}", rows[0]);
}
