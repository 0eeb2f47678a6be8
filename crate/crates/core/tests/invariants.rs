mod common;

use ionvit::operators::build_total_hamiltonian;
use ionvit::spectra::{sweep, Method, SweepConfig};
use ionvit::three_level::{blue_rhs, red_rhs, susceptibility, weak_probe_solve};
use ionvit::{HilbertSpace, Liouvillian, ModelParams, Sideband, SixState};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn case() -> impl Strategy<Value = Sideband> {
    prop_oneof![Just(Sideband::Red), Just(Sideband::Blue)]
}

fn params() -> impl Strategy<Value = ModelParams> {
    (case(), 0.005..0.3f64, 0.02..0.3f64, 0.0..40.0f64, 1e-4..0.05f64, 0.0..2.0f64).prop_map(
        |(case, kappa, eta, omega, eps, nbar)| {
            ModelParams::new(case).with_kappa(kappa).with_eta(eta).with_omega(omega).with_epsilon(eps).with_nbar(nbar)
        },
    )
}

fn trace(m: &DMatrix<Complex64>) -> Complex64 {
    m.diagonal().sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hamiltonian_is_hermitian(p in params(), delta in -5.0..5.0f64, n_max in 1usize..6) {
        let space = HilbertSpace::new(n_max).unwrap();
        let h = build_total_hamiltonian(&p, &space, delta);
        prop_assert!(h.hermiticity_error() <= 1e-14);
    }

    #[test]
    fn liouvillian_is_linear(p in params(), delta in -5.0..5.0f64, seed in any::<u64>(), a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let space = HilbertSpace::new(3).unwrap();
        let l = Liouvillian::for_model(&p, &space, delta).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = common::random_hermitian(&mut rng, space.dim());
        let y = common::random_hermitian(&mut rng, space.dim());
        let (ca, cb) = (Complex64::new(a, 0.0), Complex64::new(b, 0.0));
        let lhs = l.apply(&(&x * ca + &y * cb)).unwrap();
        let rhs = l.apply(&x).unwrap() * ca + l.apply(&y).unwrap() * cb;
        prop_assert!(common::max_norm(&(lhs - rhs)) <= 1e-11);
    }

    #[test]
    fn liouvillian_preserves_trace_and_hermiticity(p in params(), delta in -5.0..5.0f64, seed in any::<u64>()) {
        let space = HilbertSpace::new(3).unwrap();
        let l = Liouvillian::for_model(&p, &space, delta).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = common::random_hermitian(&mut rng, space.dim());
        let dx = l.apply(&x).unwrap();
        prop_assert!(trace(&dx).norm() <= 1e-12);
        prop_assert!(common::max_norm(&(&dx - dx.adjoint())) <= 1e-12);
    }

    #[test]
    fn projection_matches_six_element_system(p in params(), delta in -5.0..5.0f64, seed in any::<u64>(), n_max in 2usize..5) {
        let p = p.with_nbar(0.0);
        let space = HilbertSpace::new(n_max).unwrap();
        let l = Liouvillian::for_model(&p, &space, delta).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = common::random_density_on(&mut rng, space.dim(), &common::support(p.case, &space));
        let full = SixState::project(p.case, &l.apply(&rho).unwrap()).unwrap();
        let state = SixState::project(p.case, &rho).unwrap();
        let reduced = match p.case {
            Sideband::Red => red_rhs(&state, &p, delta).unwrap(),
            Sideband::Blue => blue_rhs(&state, &p, delta).unwrap(),
        };
        for (a, b) in full.components.iter().zip(&reduced.components) {
            prop_assert!((a - b).norm() <= 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn weak_probe_matches_closed_form(p in params(), delta in -5.0..5.0f64) {
        let exact = susceptibility(&p, delta).unwrap();
        let coh = weak_probe_solve(p.case, &p, delta).unwrap();
        let closed = Complex64::new(exact.chi_prime, exact.chi_double_prime) * Complex64::new(0.0, p.epsilon);
        prop_assert!((coh - closed).norm() <= 1e-12 * closed.norm());
    }

    #[test]
    fn red_six_element_trace_is_conserved(p in params(), delta in -5.0..5.0f64, seed in any::<u64>()) {
        let p = ModelParams { case: Sideband::Red, ..p };
        let space = HilbertSpace::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = common::random_density_on(&mut rng, space.dim(), &common::support(Sideband::Red, &space));
        let d = red_rhs(&SixState::project(Sideband::Red, &rho).unwrap(), &p, delta).unwrap();
        prop_assert!(d.trace().abs() <= 1e-14);
    }

    #[test]
    fn blue_six_element_trace_decays_through_loss_channels(p in params(), delta in -5.0..5.0f64, seed in any::<u64>()) {
        let p = ModelParams { case: Sideband::Blue, ..p };
        let space = HilbertSpace::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = common::random_density_on(&mut rng, space.dim(), &common::support(Sideband::Blue, &space));
        let s = SixState::project(Sideband::Blue, &rho).unwrap();
        let d = blue_rhs(&s, &p, delta).unwrap();
        let expected = -2.0 * p.kappa * s.components[0].re - (4.0 * p.kappa + p.gamma) * s.components[5].re;
        prop_assert!((d.trace() - expected).abs() <= 1e-12);
    }

    #[test]
    fn spectra_have_sideband_parity(p in params(), half_width in 0.5..6.0f64, n in 2usize..80) {
        for method in [Method::ClosedForm, Method::TruncatedOde] {
            let cfg = SweepConfig { delta_min: -half_width, delta_max: half_width, n_points: n, ..SweepConfig::default_for(p.case, method) };
            let spec = sweep(&p.with_nbar(0.0), &cfg).unwrap();
            let (even, odd) = spec.parity_error();
            let scale = common::max_of(&spec.absorption()).abs().max(1e-300);
            prop_assert!(even <= 1e-12 * scale && odd <= 1e-12 * scale, "{even} {odd}");
        }
    }
}
