//! One-dimensional quadrature rules shared by the analytic modules.

use num_complex::Complex64 as C64;
use num_traits::Zero;
use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        xs[i] = -x;
        xs[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        ws[i] = w;
        ws[n - 1 - i] = w;
    }
    (xs, ws)
}

/// Fixed Gauss–Legendre rule mapped onto [a, b].
#[derive(Debug, Clone)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(n: usize) -> Self {
        let (nodes, weights) = gauss_legendre(n);
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights on [a, b].
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let h = 0.5 * (b - a);
        let m = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (m + h * x, h * w))
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One Gauss–Kronrod panel: value, |K − G|, and ∫|f| for the roundoff floor.
fn gk15<F: FnMut(f64) -> C64>(f: &mut F, a: f64, b: f64) -> (C64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut abs = fc.norm() * WGK[7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        k += (f1 + f2) * WGK[j];
        abs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            g += (f1 + f2) * WG[j / 2];
        }
    }
    let k = k * h;
    let g = g * h;
    (k, (k - g).norm(), abs * h.abs())
}

/// Adaptive Gauss–Kronrod (7/15) integration of a complex integrand.
/// Returns the value and an error estimate.
pub fn adaptive<F: FnMut(f64) -> C64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> (C64, f64) {
    if a == b {
        return (C64::zero(), 0.0);
    }
    let mut stack: Vec<(f64, f64, C64, f64, f64)> = Vec::new();
    let (v, e, ab) = gk15(&mut f, a, b);
    stack.push((a, b, v, e, ab));
    let mut total = C64::zero();
    let mut err = 0.0;
    let mut done: Vec<(C64, f64)> = Vec::new();
    let mut evals = 0usize;
    let mut estimate = v;
    while let Some((lo, hi, v, e, ab)) = stack.pop() {
        let tol = abs_tol.max(rel_tol * estimate.norm());
        let frac = ((hi - lo) / (b - a)).abs();
        let floor = 64.0 * f64::EPSILON * ab;
        if e <= (tol * frac).max(floor) || evals > 200_000 || (hi - lo).abs() < 1e-13 * (b - a).abs() {
            done.push((v, e));
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let (v1, e1, a1) = gk15(&mut f, lo, mid);
        let (v2, e2, a2) = gk15(&mut f, mid, hi);
        evals += 30;
        estimate += v1 + v2 - v;
        stack.push((lo, mid, v1, e1, a1));
        stack.push((mid, hi, v2, e2, a2));
    }
    for (v, e) in done {
        total += v;
        err += e;
    }
    (total, err)
}

/// Real-valued convenience wrapper around [`adaptive`].
pub fn adaptive_real<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> (f64, f64) {
    let (v, e) = adaptive(|x| C64::new(f(x), 0.0), a, b, abs_tol, rel_tol);
    (v.re, e)
}

/// Double-exponential rule for ∫_0^∞ f(t) dt with algebraic endpoint
/// behaviour at 0 and exponential decay at ∞. Step halving until two
/// successive levels agree.
pub fn exp_sinh<F: FnMut(f64) -> C64>(mut f: F, rel_tol: f64) -> (C64, f64) {
    let tmax = 4.5;
    let mut h = 0.5;
    let node = |tau: f64| {
        let x = (0.5 * PI * tau.sinh()).exp();
        let dx = x * 0.5 * PI * tau.cosh();
        (x, dx)
    };
    let mut sum = C64::zero();
    let mut k = -(tmax / h) as i64;
    while (k as f64) * h <= tmax {
        let (x, dx) = node(k as f64 * h);
        if x.is_finite() && x > 0.0 && dx.is_finite() {
            let v = f(x) * dx;
            if v.re.is_finite() && v.im.is_finite() {
                sum += v;
            }
        }
        k += 1;
    }
    let mut prev = sum * h;
    for _ in 0..8 {
        h *= 0.5;
        let mut k = -(tmax / h) as i64;
        if k % 2 == 0 {
            k += 1;
        }
        while (k as f64) * h <= tmax {
            let (x, dx) = node(k as f64 * h);
            if x.is_finite() && x > 0.0 && dx.is_finite() {
                let v = f(x) * dx;
                if v.re.is_finite() && v.im.is_finite() {
                    sum += v;
                }
            }
            k += 2;
        }
        let cur = sum * h;
        let diff = (cur - prev).norm();
        if diff <= rel_tol * cur.norm() {
            return (cur, diff);
        }
        prev = cur;
    }
    (prev, f64::NAN)
}

/// Tanh-sinh rule on (a, b), tolerant of integrable endpoint singularities.
pub fn tanh_sinh<F: FnMut(f64) -> C64>(mut f: F, a: f64, b: f64, rel_tol: f64) -> (C64, f64) {
    let r = 0.5 * (b - a);
    let tmax = 3.5;
    let eval_level = |h: f64, odd_only: bool, f: &mut F| {
        let mut s = C64::zero();
        let n = (tmax / h).ceil() as i64;
        let mut k = -n;
        while k <= n {
            if !odd_only || k.rem_euclid(2) == 1 {
                let t = k as f64 * h;
                let u = 0.5 * PI * t.sinh();
                let x = u.tanh();
                let w = 0.5 * PI * t.cosh() / (u.cosh() * u.cosh());
                // distance to the nearer endpoint, computed without cancellation
                let d = 1.0 / (u.abs().exp() * u.cosh());
                if d > 1e-300 {
                    let pt = if x >= 0.0 { b - r * d } else { a + r * d };
                    if pt > a && pt < b {
                        let v = f(pt) * (w * r);
                        if v.re.is_finite() && v.im.is_finite() {
                            s += v;
                        }
                    }
                }
            }
            k += 1;
        }
        s
    };
    let mut h = 0.5;
    let mut sum = eval_level(h, false, &mut f);
    let mut prev = sum * h;
    for _ in 0..9 {
        h *= 0.5;
        sum += eval_level(h, true, &mut f);
        let cur = sum * h;
        let diff = (cur - prev).norm();
        if diff <= rel_tol * cur.norm() {
            return (cur, diff);
        }
        prev = cur;
    }
    (prev, f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(10);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((s - 2.0 / 19.0).abs() < 1e-15);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_oscillation() {
        let (v, _) = adaptive_real(|x| (30.0 * x).cos(), 0.0, 3.0, 0.0, 1e-13);
        assert!((v - (90.0f64).sin() / 30.0).abs() < 1e-13);
    }

    #[test]
    fn exp_sinh_gamma_integral() {
        // ∫_0^∞ t^{-1/2} e^{-t} dt = √π
        let (v, _) = exp_sinh(|t| C64::new(t.powf(-0.5) * (-t).exp(), 0.0), 1e-13);
        assert!((v.re - PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        // ∫_0^1 ln(x) dx = -1
        let (v, _) = tanh_sinh(|x| C64::new(x.ln(), 0.0), 0.0, 1.0, 1e-13);
        assert!((v.re + 1.0).abs() < 1e-12);
    }
}
