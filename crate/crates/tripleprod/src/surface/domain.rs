use serde::{Deserialize, Serialize};

/// A point x + iy of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointH {
    pub x: f64,
    pub y: f64,
}

/// An element of SL₂(ℤ) as `[[a, b], [c, d]]`.
pub type Mat2 = [[i64; 2]; 2];

pub const IDENTITY: Mat2 = [[1, 0], [0, 1]];
pub const S: Mat2 = [[0, -1], [1, 0]];

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

pub fn translation(n: i64) -> Mat2 {
    [[1, n], [0, 1]]
}

/// Move budget of [`reduce`]; far more than y ≥ 1e−6 ever needs.
const MAX_MOVES: usize = 10_000;

impl PointH {
    pub fn new(x: f64, y: f64) -> Self {
        assert!(y > 0.0, "PointH needs y > 0, got {y}");
        Self { x, y }
    }

    /// Möbius action of g.
    pub fn act(&self, g: &Mat2) -> Self {
        let [[a, b], [c, d]] = g.map(|r| r.map(|v| v as f64));
        // (az + b)/(cz + d)
        let (nr, ni) = (a * self.x + b, a * self.y);
        let (dr, di) = (c * self.x + d, c * self.y);
        let den = dr * dr + di * di;
        Self { x: (nr * dr + ni * di) / den, y: (ni * dr - nr * di) / den }
    }

    /// |cz + d|² for the bottom row of g.
    pub fn j_abs2(&self, g: &Mat2) -> f64 {
        let (c, d) = (g[1][0] as f64, g[1][1] as f64);
        (c * self.x + d).powi(2) + (c * self.y).powi(2)
    }

    /// (cz + d) as (re, im).
    pub fn j(&self, g: &Mat2) -> (f64, f64) {
        let (c, d) = (g[1][0] as f64, g[1][1] as f64);
        (c * self.x + d, c * self.y)
    }

    pub fn in_fundamental_domain(&self, slack: f64) -> bool {
        self.x.abs() <= 0.5 + slack && self.x * self.x + self.y * self.y >= 1.0 - slack
    }
}

/// Reduction into the closed standard fundamental domain by T and S moves.
/// Returns the reduced point, the matrix g with `g·z = reduced`, and the move count.
pub fn reduce(z: PointH) -> (PointH, Mat2, usize) {
    let mut w = z;
    let mut g = IDENTITY;
    let mut moves = 0;
    while moves < MAX_MOVES {
        let n = w.x.round();
        if n != 0.0 {
            w.x -= n;
            g = mat_mul(&translation(-(n as i64)), &g);
            moves += 1;
        }
        if w.x * w.x + w.y * w.y < 1.0 - 1e-15 {
            w = w.act(&S);
            g = mat_mul(&S, &g);
            moves += 1;
        } else {
            break;
        }
    }
    (w, g, moves)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_reductions() {
        let (w, g, _) = reduce(PointH::new(0.0, 1.0));
        assert_eq!(g, IDENTITY);
        assert_eq!(w, PointH::new(0.0, 1.0));
        let (w, g, m) = reduce(PointH::new(1.0, 1.0));
        assert_eq!(m, 1);
        assert_eq!(g, translation(-1));
        assert!((w.x).abs() < 1e-15 && (w.y - 1.0).abs() < 1e-15);
    }

    /// Brute force over words in T^{±1}, S of length ≤ 20, keeping the best y.
    fn brute_force_max_y(z: PointH) -> f64 {
        let mut frontier = vec![z];
        let mut best = z.y;
        for _ in 0..20 {
            let mut next = Vec::new();
            for p in &frontier {
                for g in [translation(1), translation(-1), S] {
                    let q = p.act(&g);
                    best = best.max(q.y);
                    next.push(q);
                }
            }
            // keep the most promising points so the search stays small
            next.sort_by(|a, b| b.y.total_cmp(&a.y).then(a.x.abs().total_cmp(&b.x.abs())));
            next.truncate(200);
            frontier = next;
        }
        best
    }

    #[test]
    fn reduction_maximises_height() {
        let z = PointH::new(0.13, 0.11);
        let (w, g, _) = reduce(z);
        assert!(w.in_fundamental_domain(1e-14));
        assert!(w.y >= 3f64.sqrt() / 2.0 * (1.0 - 1e-14));
        assert!((w.y - brute_force_max_y(z)).abs() < 1e-12);
        let back = z.act(&g);
        assert!((back.x - w.x).abs() < 1e-12 && (back.y - w.y).abs() < 1e-12);
        let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        assert_eq!(det, 1);
    }
}
