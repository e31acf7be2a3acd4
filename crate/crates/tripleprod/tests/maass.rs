use std::sync::OnceLock;
use tripleprod::lfun::GlobalRep;
use tripleprod::maass::hejhal::detector;
use tripleprod::maass::{maass_satake, scan, solve, MaassForm, MaassJson, Parity, SolveOptions};
use tripleprod::surface::PointH;

fn opts() -> SolveOptions {
    SolveOptions { coeff_count: 1000, ..Default::default() }
}

fn first_odd() -> &'static MaassForm {
    static F: OnceLock<MaassForm> = OnceLock::new();
    F.get_or_init(|| {
        let mut v = solve(9.0, 10.0, Parity::Odd, &opts()).unwrap();
        assert_eq!(v.len(), 1);
        v.remove(0)
    })
}

fn first_even() -> &'static MaassForm {
    static F: OnceLock<MaassForm> = OnceLock::new();
    F.get_or_init(|| {
        let mut v = solve(13.0, 14.0, Parity::Even, &opts()).unwrap();
        assert_eq!(v.len(), 1);
        v.remove(0)
    })
}

#[test]
fn first_odd_form() {
    let f = first_odd();
    assert!((f.t - 9.5337).abs() < 1e-4, "t = {}", f.t);
    // another pair of anchors moves the zero by less than 1e-6
    let g = |t: f64| detector(t, Parity::Odd, (0.77, 0.62)).unwrap();
    let mut conv = roots::SimpleConvergency { eps: 1e-13, max_iter: 200 };
    let t2 = roots::find_root_brent(f.t - 0.005, f.t + 0.005, &g, &mut conv).unwrap();
    assert!((t2 - f.t).abs() < 1e-6, "{t2} vs {}", f.t);
}

#[test]
fn first_even_form() {
    let f = first_even();
    assert!((f.t - 13.7797).abs() < 1e-4, "t = {}", f.t);
    assert!(f.certified_digits >= 6, "{:?}", f.diagnostics);
}

#[test]
fn hecke_relations_hold() {
    for f in [first_odd(), first_even()] {
        let r = f.hecke_residual(30);
        assert!(r < 1e-8, "{}: residual {r}", f.label());
    }
}

#[test]
fn parity_of_evaluation() {
    let odd = first_odd().automorphic().unwrap();
    let even = first_even().automorphic().unwrap();
    for y in [0.9, 1.3, 2.2] {
        let v = odd.eval(PointH::new(0.0, y), 1e-12).unwrap().0;
        assert!(v.norm() < 1e-12, "odd form at x = 0: {v}");
        let h = 1e-4;
        let a = even.eval(PointH::new(h, y), 1e-12).unwrap().0.re;
        let b = even.eval(PointH::new(-h, y), 1e-12).unwrap().0.re;
        assert!((a - b).abs() / (2.0 * h) < 1e-8, "even derivative at x = 0");
    }
}

#[test]
fn no_small_eigenvalues() {
    // the scan at resolution 0.01 finds nothing that refines to an eigenvalue
    for (b, parity) in [(13.0, Parity::Even), (9.0, Parity::Odd)] {
        let found = solve(0.01, b - 0.01, parity, &SolveOptions { coeff_count: 20, ..Default::default() }).unwrap();
        assert!(found.is_empty(), "{parity:?}: {:?}", found.iter().map(|f| f.t).collect::<Vec<_>>());
    }
    assert!(!scan(9.0, 10.0, Parity::Odd, 0.01).unwrap().is_empty());
}

#[test]
fn satake_reconstructs_c2() {
    let f = first_odd();
    let s = maass_satake(f, 2).unwrap();
    assert!((s.lambda().re - f.coeffs[2]).abs() < 1e-10);
    let (a, b) = f.local_roots(2).unwrap();
    assert!((a.norm() - 1.0).abs() < 1e-12 && (b.norm() - 1.0).abs() < 1e-12);
    assert_eq!(f.theta(), 0.0);
}

#[test]
fn json_round_trip() {
    let f = first_odd();
    let doc: MaassJson = serde_json::from_str(&serde_json::to_string(&f.to_json()).unwrap()).unwrap();
    let g = MaassForm::from_json(&doc).unwrap();
    assert!((g.t - f.t).abs() < 1e-11);
    assert_eq!(g.coeffs, f.coeffs);
}
