//! Hejhal's method at level one.
//!
//! Samples z_j = x_j + iY on a horocycle below the fundamental domain, with
//! x_j = (j − ½)/2Q for j = 1..Q. Automorphy gives φ(z_j) = φ(z_j*) for the
//! reduced points, and discrete Fourier inversion on the horocycle turns this
//! into a linear system for c_2..c_M once c_1 = 1 is fixed.

use super::{MaassError, Parity};
use crate::surface::{kbessel_it_scaled_many, reduce, BesselTable, PointH};
use nalgebra::{DMatrix, DVector};
use std::f64::consts::PI;

type Result<T> = std::result::Result<T, MaassError>;

/// Scaled Bessel argument beyond which W_n is treated as negligible in the system.
pub(crate) const CUTOFF_MARGIN: f64 = 38.0;

/// Truncation M and sample count Q for spectral parameter t at height y.
pub fn truncation(t: f64, y: f64) -> (usize, usize) {
    let m = ((t + CUTOFF_MARGIN) / (2.0 * PI * y)).ceil() as usize;
    (m, m + 12)
}

pub(crate) fn cs(parity: Parity, a: f64) -> f64 {
    match parity {
        Parity::Even => a.cos(),
        Parity::Odd => a.sin(),
    }
}

pub(crate) fn horocycle(q: usize, y: f64) -> Vec<(f64, PointH)> {
    (1..=q)
        .map(|j| {
            let x = (j as f64 - 0.5) / (2.0 * q as f64);
            (x, reduce(PointH { x, y }).0)
        })
        .collect()
}

/// Solution of one Hejhal system.
#[derive(Debug, Clone)]
pub struct HejhalSolution {
    /// c_0 = 0, c_1 = 1, c_2..c_M.
    pub coeffs: Vec<f64>,
    pub m: usize,
    pub q: usize,
    pub y: f64,
    /// Ratio of extreme singular values of the row-scaled system, when computed.
    pub condition: Option<f64>,
}

/// Assemble and solve the system at height y with truncation m and q samples.
pub fn solve_system(t: f64, parity: Parity, m: usize, q: usize, y: f64, with_condition: bool) -> Result<HejhalSolution> {
    if y >= 3f64.sqrt() / 2.0 {
        return Err(MaassError::Parameters(format!("anchor height {y} must lie below √3/2")));
    }
    if q <= m {
        return Err(MaassError::Parameters(format!("need more samples than coefficients ({q} ≤ {m})")));
    }
    let pts = horocycle(q, y);
    // Bessel arguments: 2πl·y*_j for all (j, l), then 2πn·y
    let mut xs = Vec::with_capacity(q * m + m);
    for (_, p) in &pts {
        for l in 1..=m {
            xs.push(2.0 * PI * l as f64 * p.y);
        }
    }
    for n in 1..=m {
        xs.push(2.0 * PI * n as f64 * y);
    }
    let k = kbessel_it_scaled_many(t, &xs).map_err(MaassError::Surface)?;
    let w_anchor: Vec<f64> = (0..m).map(|i| y.sqrt() * k[q * m + i]).collect();
    // B[j][l] = W_l(y*_j) cs(2πl x*_j), C[n][j] = (2/q) cs(2πn x_j)
    let b = DMatrix::from_fn(q, m, |j, l| {
        let p = pts[j].1;
        p.y.sqrt() * k[j * m + l] * cs(parity, 2.0 * PI * (l + 1) as f64 * p.x)
    });
    let c = DMatrix::from_fn(m, q, |n, j| 2.0 / q as f64 * cs(parity, 2.0 * PI * (n + 1) as f64 * pts[j].0));
    let mut v = -(c * b);
    for i in 0..m {
        v[(i, i)] += w_anchor[i];
    }
    // c_1 = 1: rows n = 2..M, columns l = 2..M
    let mut a = v.view((1, 1), (m - 1, m - 1)).into_owned();
    let mut rhs = -v.view((1, 0), (m - 1, 1)).column(0).into_owned();
    for i in 0..m - 1 {
        let s = a.row(i).amax().max(rhs[i].abs());
        if s > 0.0 {
            a.row_mut(i).scale_mut(1.0 / s);
            rhs[i] /= s;
        }
    }
    let condition = if with_condition {
        let sv = a.clone().singular_values();
        let (lo, hi) = (sv.min(), sv.max());
        Some(if lo > 0.0 { hi / lo } else { f64::INFINITY })
    } else {
        None
    };
    let sol: DVector<f64> = a
        .col_piv_qr()
        .solve(&rhs)
        .ok_or_else(|| MaassError::IllConditioned(format!("singular Hejhal system at t = {t}")))?;
    let mut coeffs = vec![0.0, 1.0];
    coeffs.extend(sol.iter());
    Ok(HejhalSolution { coeffs, m, q, y, condition })
}

/// Anchor heights of the t-scan detector.
pub const DETECTOR_ANCHORS: (f64, f64) = (0.80, 0.71);

/// c_2 at the upper anchor minus c_2 at the lower one, both with the lower
/// anchor's truncation. Vanishes at eigenvalues; sign changes also occur at
/// poles, which the caller rejects by the size of the refined residual.
pub fn detector(t: f64, parity: Parity, anchors: (f64, f64)) -> Result<f64> {
    let (m, q) = truncation(t, anchors.0.min(anchors.1));
    let a = solve_system(t, parity, m, q, anchors.0, false)?;
    let b = solve_system(t, parity, m, q, anchors.1, false)?;
    Ok(a.coeffs[2] - b.coeffs[2])
}

/// Largest disagreement over c_2..c_n between the two anchors, with n capped
/// where W_n at the lower anchor is still outside its decay region.
pub fn anchor_disagreement(t: f64, parity: Parity, anchors: (f64, f64), n: usize) -> Result<f64> {
    let y = anchors.0.min(anchors.1);
    let n = n.min(((t + 8.0) / (2.0 * PI * y)) as usize).max(2);
    let (m, q) = truncation(t, y);
    let a = solve_system(t, parity, m, q, anchors.0, false)?;
    let b = solve_system(t, parity, m, q, anchors.1, false)?;
    Ok((2..=n.min(m)).map(|i| (a.coeffs[i] - b.coeffs[i]).abs()).fold(0.0, f64::max))
}

/// φ at reduced points from the first coefficients, through a Bessel table.
pub(crate) struct Evaluator<'a> {
    pub parity: Parity,
    pub coeffs: &'a [f64],
    pub table: &'a BesselTable,
}

impl Evaluator<'_> {
    pub fn value(&self, p: PointH) -> f64 {
        let sy = p.y.sqrt();
        let x_max = self.table.range().1;
        let mut acc = 0.0;
        for (l, c) in self.coeffs.iter().enumerate().skip(1) {
            let x = 2.0 * PI * l as f64 * p.y;
            if x >= x_max {
                break;
            }
            acc += c * self.table.eval(x).re * cs(self.parity, 2.0 * PI * l as f64 * p.x);
        }
        sy * acc
    }
}

/// Coefficients c_n for n ≤ n_max by Fourier inversion on horocycles of
/// decreasing height, using φ evaluated from `base` at the reduced points.
/// Each n takes the height among `ladder` where |W_n(Y)| is largest, with the
/// argument 2πnY kept below t + 2 so W_n is not yet in its decay region.
pub fn extend(t: f64, parity: Parity, base: &[f64], n_max: usize, ladder_ratio: f64) -> Result<Vec<f64>> {
    let table = BesselTable::new(num_complex::Complex64::new(0.0, t), 5.0, (t + 50.0).max(0.5 * PI * t + 40.0))
        .map_err(MaassError::Surface)?;
    let eval = Evaluator { parity, coeffs: base, table: &table };
    let x_hi = (t + 2.0).max(3.0);
    // candidate heights: Y_k = Y_0 r^k from the top anchor down to the smallest needed
    let y0 = 0.8;
    let y_min = 0.2 * x_hi / (2.0 * PI * n_max as f64);
    let mut ladder = vec![y0];
    while *ladder.last().unwrap() > y_min {
        ladder.push(ladder.last().unwrap() * ladder_ratio);
    }
    // W_n at each ladder height, for picking the best one per n
    let mut choice = vec![usize::MAX; n_max + 1];
    let mut best = vec![0.0f64; n_max + 1];
    for (k, &y) in ladder.iter().enumerate() {
        let ns: Vec<usize> = (1..=n_max).filter(|&n| 2.0 * PI * n as f64 * y <= x_hi).collect();
        if ns.is_empty() {
            continue;
        }
        let xs: Vec<f64> = ns.iter().map(|&n| 2.0 * PI * n as f64 * y).collect();
        let w = kbessel_it_scaled_many(t, &xs).map_err(MaassError::Surface)?;
        for (&n, wk) in ns.iter().zip(w) {
            let v = y.sqrt() * wk.abs();
            if v > best[n] {
                best[n] = v;
                choice[n] = k;
            }
        }
    }
    let mut out = vec![0.0; n_max + 1];
    out[1] = 1.0;
    for (k, &y) in ladder.iter().enumerate() {
        let ns: Vec<usize> = (2..=n_max).filter(|&n| choice[n] == k).collect();
        let Some(&n_top) = ns.last() else { continue };
        // aliases n' = 2Q − n must sit past the decay cutoff
        let q = ((n_top as f64 + (t + CUTOFF_MARGIN) / (2.0 * PI * y)) / 2.0).ceil() as usize + 8;
        let samples: Vec<(f64, f64)> = horocycle(q, y).into_iter().map(|(x, p)| (x, eval.value(p))).collect();
        let xs: Vec<f64> = ns.iter().map(|&n| 2.0 * PI * n as f64 * y).collect();
        let w = kbessel_it_scaled_many(t, &xs).map_err(MaassError::Surface)?;
        for (&n, wk) in ns.iter().zip(w) {
            let s: f64 = samples.iter().map(|&(x, v)| v * cs(parity, 2.0 * PI * n as f64 * x)).sum();
            out[n] = 2.0 / q as f64 * s / (y.sqrt() * wk);
        }
    }
    Ok(out)
}
