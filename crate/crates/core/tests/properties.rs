use num_complex::Complex64;
use proptest::prelude::*;

use spectra_core::angular::{
    allowed_quantum_numbers, basis_params, matrix_element, n_bound, AngularCase, AngularPotentialParams,
};
use spectra_core::assembly::{classify, Regime};
use spectra_core::orthopoly::quadrature_from_recursion;
use spectra_core::par::{self, Exec};
use spectra_core::radial::{coulomb_matrix, oscillator_matrix};
use spectra_core::recursion::{terminator, TabulatedChain, TerminatorParams};

proptest! {
    #[test]
    fn classification_is_total_and_consistent(c_hat in -5.0..5.0f64, c in -5.0..5.0f64, c0 in prop::sample::select(vec![0.0, 0.7, -1.3])) {
        let pot = AngularPotentialParams::new(c_hat, c, c0).unwrap();
        let (p, q) = (c_hat + c, c_hat - c);
        match classify(&pot) {
            Regime::C0Nonzero => prop_assert!(c0 != 0.0),
            Regime::DiagA => prop_assert!(c0 == 0.0 && (p >= 0.0) == (q >= 0.0)),
            Regime::TridiagB => prop_assert!(c0 == 0.0 && c > c_hat && c_hat >= -c),
            Regime::TridiagC => prop_assert!(c0 == 0.0 && -c > c_hat && c_hat >= c),
        }
    }

    #[test]
    fn book_admits_exactly_the_gated_states(c_hat in 0.0..4.0f64, frac in -1.0..1.0f64, gamma in 0.0..8.0f64) {
        let pot = AngularPotentialParams::new(c_hat, frac * c_hat, 0.0).unwrap();
        let book = allowed_quantum_numbers(AngularCase::Diagonal, &pot, gamma, None).unwrap();
        for (&m, &nm) in &book.n_max {
            let bp = basis_params(AngularCase::Diagonal, &pot, m, false, None).unwrap();
            let bound = n_bound(&bp, gamma);
            prop_assert!(nm as f64 <= bound + 1e-9);
            prop_assert!((nm + 1) as f64 > bound - 1e-9);
            prop_assert!(book.admits(nm, m) && !book.admits(nm + 1, m));
        }
        prop_assert_eq!(book.len(), book.entries().len());
    }

    #[test]
    fn terminator_is_a_fixed_point(a in -3.0..3.0f64, b in 0.05..2.0f64, x in -8.0..8.0f64, y in 1e-3..3.0f64) {
        let t = TerminatorParams::new(a, b).unwrap();
        let z = Complex64::new(x, y);
        let tz = terminator(z, t).unwrap();
        let rhs = b * b / (z - a - tz);
        prop_assert!((tz - rhs).norm() <= 1e-10 * (1.0 + tz.norm()));
        prop_assert!(tz.im <= 1e-14);
    }

    #[test]
    fn radial_matrices_are_symmetric(k in 0usize..12, kp in 0usize..12, alpha in 0.5..4.0f64, lambda in 0.2..3.0f64, e in -2.0..2.0f64, z in -3.0..3.0f64) {
        prop_assert_eq!(coulomb_matrix(k, kp, alpha, lambda, e, z), coulomb_matrix(kp, k, alpha, lambda, e, z));
        let nu = 2.0 * alpha - 0.5;
        prop_assert_eq!(oscillator_matrix(k, kp, nu, lambda, 1.3, e), oscillator_matrix(kp, k, nu, lambda, 1.3, e));
    }

    #[test]
    fn case_a_matrix_is_symmetric(c_hat in 0.5..3.0f64, frac in -0.9..0.9f64, c0 in 0.2..2.0f64, m in 0i32..3, gamma in 0.0..5.0f64, n in 0usize..10, np in 0usize..10) {
        let pot = AngularPotentialParams::new(c_hat, frac * c_hat, c0).unwrap();
        let bp = basis_params(AngularCase::A, &pot, m, false, None).unwrap();
        let (u, v) = (matrix_element(&bp, n, np, gamma, c0), matrix_element(&bp, np, n, gamma, c0));
        prop_assert!((u - v).abs() <= 1e-12 * (1.0 + u.abs()));
    }

    #[test]
    fn gauss_rule_reproduces_low_moments(a in prop::collection::vec(-3.0..3.0f64, 12), b in prop::collection::vec(0.1..2.0f64, 12)) {
        let chain = TabulatedChain::new(a.clone(), b.clone()).unwrap();
        let (xs, ws) = quadrature_from_recursion(&chain, 12).unwrap();
        let m = |j: i32| xs.iter().zip(&ws).map(|(x, w)| w * x.powi(j)).sum::<f64>();
        prop_assert!((m(0) - 1.0).abs() < 1e-12);
        prop_assert!((m(1) - a[0]).abs() < 1e-11);
        prop_assert!((m(2) - (a[0] * a[0] + b[0] * b[0])).abs() < 1e-10);
        prop_assert!(ws.iter().all(|&w| w > 0.0));
    }

    #[test]
    fn execution_modes_agree(xs in prop::collection::vec(-50.0..50.0f64, 0..300)) {
        let f = |x: &f64| (x.sin() * x.exp().ln_1p()).to_bits();
        prop_assert_eq!(par::map_with(Exec::Sequential, &xs, f), par::map_with(Exec::Parallel, &xs, f));
        let g = |i: usize| (i as f64).sqrt();
        prop_assert_eq!(par::map_range(Exec::Sequential, xs.len(), g), par::map_range(Exec::Parallel, xs.len(), g));
    }
}
