use num_complex::Complex64 as C64;
use proptest::prelude::*;
use std::sync::OnceLock;
use tripleprod::qexp::{cusp_eigenforms, HoloEigenform};
use tripleprod::verify::{
    check_eismth_symmetry, check_local_zeta_unramified, csv_summary, IdentityReport, Session, VerifyError,
    TOL_LOCAL_ZETA,
};

fn delta() -> &'static HoloEigenform {
    static F: OnceLock<HoloEigenform> = OnceLock::new();
    F.get_or_init(|| cusp_eigenforms(12, 3000).unwrap().remove(0))
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

proptest! {
    #[test]
    fn verdict_is_recomputable_from_stored_fields(
        l in (-1e3f64..1e3, -1e3f64..1e3),
        r in (-1e3f64..1e3, -1e3f64..1e3),
        le in 0.0f64..1.0,
        re_ in 0.0f64..1.0,
        tol in 1e-12f64..1e-1,
    ) {
        let rep = IdentityReport::new("x", (c(l.0, l.1), le), (c(r.0, r.1), re_), tol);
        let back: IdentityReport = serde_json::from_str(&rep.to_json_line()).unwrap();
        prop_assert_eq!(back.pass, back.verdict());
        prop_assert_eq!(back.relative_discrepancy, back.discrepancy());
        prop_assert_eq!(&back, &rep);
    }

    #[test]
    fn tempered_local_zeta_agrees(t in prop::array::uniform3(-30.0f64..30.0), p in prop::sample::select(vec![2u64, 3, 5, 7]), s in 0.6f64..3.0) {
        let sat = t.map(|t| (c(0.0, t), c(0.0, -t)));
        let r = check_local_zeta_unramified(p, c(s, 0.0), sat, 1e-12).unwrap();
        prop_assert!(r.pass && r.relative_discrepancy < TOL_LOCAL_ZETA, "{:?}", r);
    }
}

#[test]
fn scaled_form_is_rejected() {
    let mut doc = delta().to_json();
    for a in doc.coefficients.iter_mut() {
        *a = (a.parse::<i128>().unwrap() * 3).to_string();
    }
    let scaled = HoloEigenform::from_json(&doc).unwrap();
    let s = Session::new();
    assert!(matches!(s.check_ransel(&scaled, 1e-10), Err(VerifyError::NotNormalized(_))));
    assert!(matches!(s.check_eismth(&scaled, c(2.0, 0.0), 1e-10), Err(VerifyError::NotNormalized(_))));
}

#[test]
fn eisenstein_pole_is_rejected() {
    let s = Session::new();
    assert!(matches!(s.check_eismth(delta(), c(1.02, 0.0), 1e-10), Err(VerifyError::Pole(_))));
}

#[test]
fn norm_and_eisenstein_share_the_adjoint_value() {
    let s = Session::new();
    let a = s.check_ransel(delta(), 1e-10).unwrap();
    assert!(a.pass, "{a:?}");
    let b = s.check_eismth(delta(), c(0.5, 3.0), 1e-10).unwrap();
    assert!(b.pass, "{b:?}");
    assert!(s.cache.hits() >= 1 && s.cache.misses() == 2, "{} {}", s.cache.hits(), s.cache.misses());
}

#[test]
fn eisenstein_functional_equation() {
    let s = Session::new();
    let a = s.check_eismth(delta(), c(0.5, 3.0), 1e-10).unwrap();
    let b = s.check_eismth(delta(), c(0.5, -3.0), 1e-10).unwrap();
    let r = check_eismth_symmetry(&a, &b).unwrap();
    assert!(r.pass, "{r:?}");
    let lines = csv_summary(&[a, b, r]);
    assert_eq!(lines.lines().count(), 4);
}
