use num_complex::Complex64 as C64;
use tripleprod::qexp::cusp_eigenforms;
use tripleprod::surface::{
    integrate_fd, reduce, unfolded_eisenstein_integral, AutomorphicFunction, PointH,
};

#[test]
fn unfolding_at_s_two() {
    let d = cusp_eigenforms(12, 100_001).unwrap().remove(0);
    let (want, est) = unfolded_eisenstein_integral(&d, 2.0).unwrap();
    let f = AutomorphicFunction::holomorphic(&d);
    let e = AutomorphicFunction::eisenstein(C64::new(2.0, 0.0)).unwrap();
    let decay = f.decay().product(f.decay()).product(e.decay());
    let r = integrate_fd(
        |z| {
            let (a, ea) = f.eval_reduced(z, 1e-20)?;
            let (b, eb) = e.eval_reduced(z, 1e-20)?;
            Ok((b * a.norm_sqr(), ea * 2.0 * a.norm() * b.norm() + eb * a.norm_sqr()))
        },
        decay,
        want * 1e-11,
    )
    .unwrap();
    let rel = (r.value.re - want).abs() / want;
    assert!(rel < 1e-8, "quadrature {} unfolded {want} (est {est}) rel {rel}", r.value.re);
}

#[test]
fn values_are_invariant_under_reduction() {
    let d = cusp_eigenforms(16, 200).unwrap().remove(0);
    let f = AutomorphicFunction::holomorphic(&d);
    for &(x, y) in &[(0.123, 0.05), (-0.77, 0.31), (3.4, 0.9)] {
        let z = PointH::new(x, y);
        let (w, _, _) = reduce(z);
        let a = f.eval(z, 1e-15).unwrap().0.norm();
        let b = f.eval_reduced(w, 1e-15).unwrap().0.norm();
        assert!((a - b).abs() <= 1e-12 * b, "{a} vs {b}");
    }
}

mod identities {
    use num_complex::Complex64 as C64;
    use proptest::prelude::*;
    use tripleprod::surface::{kbessel, whittaker_w};

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn bessel_derivative_identity(t in 0.0f64..30.0, x in 0.5f64..40.0) {
            let mu = C64::new(0.0, t);
            let h = (2e-3f64).min(0.01 * x / (t + 1.0));
            let k = |v: f64| kbessel(mu, v).unwrap();
            // five-point derivative against −(K_{μ−1} + K_{μ+1})/2
            let d = (k(x - 2.0 * h) - k(x - h) * 8.0 + k(x + h) * 8.0 - k(x + 2.0 * h)) / (12.0 * h);
            let rhs = -(kbessel(mu - 1.0, x).unwrap() + kbessel(mu + 1.0, x).unwrap()) * 0.5;
            let step = 0.1 * x / (t + 1.0);
            let scale = (-4..=4).map(|j| k(x + j as f64 * step).norm()).fold(0.0, f64::max) * (1.0 + t / x);
            prop_assert!((d - rhs).norm() <= 1e-9 * scale.max(1e-300), "{} vs {}", d, rhs);
        }

        #[test]
        fn whittaker_ode(kappa in -3.0f64..3.0, t in 0.0f64..10.0, y in 1.0f64..30.0) {
            // W'' + (−1/4 + κ/y + (1/4 − μ²)/y²) W = 0
            let mu = C64::new(0.0, t);
            let h = (1e-2f64).min(0.02 * y / (t + 1.0));
            let w = |v: f64| whittaker_w(kappa, mu, v).unwrap();
            let d2 = (-w(y - 2.0 * h) + w(y - h) * 16.0 - w(y) * 30.0 + w(y + h) * 16.0 - w(y + 2.0 * h)) / (12.0 * h * h);
            let q = C64::new(-0.25 + kappa / y, 0.0) + (C64::new(0.25, 0.0) - mu * mu) / (y * y);
            let res = d2 + q * w(y);
            // envelope over half an oscillation, so zeros of W do not shrink the scale
            let step = 0.1 * y / (t + 1.0);
            let env = (-4..=4).map(|j| w(y + j as f64 * step).norm()).fold(0.0, f64::max);
            let scale = env * (1.0 + q.norm());
            prop_assert!(res.norm() <= 1e-6 * scale.max(1e-300), "residual {}", res.norm() / scale);
        }
    }
}
