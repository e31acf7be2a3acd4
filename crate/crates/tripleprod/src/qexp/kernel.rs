//! Reduced-echelon integral basis of S_k built from monomials Δ^j E₄^a E₆^b,
//! computed modulo several NTT primes and lifted by CRT.

use super::ntt::{self, NttPrime};
use super::series::dim_cusp_forms;
use super::{QexpError, Result};
use num_bigint::BigInt;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy)]
struct Monomial {
    j: u32,
    a: u32,
    b: u32,
}

fn monomials(k: u32) -> Vec<Monomial> {
    (1..=dim_cusp_forms(k) as u32)
        .map(|j| {
            let w = k - 12 * j;
            if w.is_multiple_of(4) {
                Monomial { j, a: w / 4, b: 0 }
            } else {
                Monomial { j, a: (w - 6) / 4, b: 1 }
            }
        })
        .collect()
}

/// σ_r(n) for n < len in i128; exact for r ≤ 5 and len ≤ ~10^6.
fn sigma_i128(r: u32, len: usize) -> Vec<i128> {
    let mut s = vec![0i128; len];
    for d in 1..len {
        let dr = (d as i128).pow(r);
        for m in (d..len).step_by(d) {
            s[m] += dr;
        }
    }
    s
}

/// Upper bound (bits) on |coefficient| of each reduced basis vector.
fn coefficient_bits(mons: &[Monomial], n: usize) -> f64 {
    let lg = (n.max(2) as f64).log2();
    let e4 = 291f64.log2() + 3.0 * lg;
    let e6 = 523f64.log2() + 5.0 * lg;
    let de = 1.0 + 6.0 * lg;
    let g: Vec<f64> = mons
        .iter()
        .map(|m| {
            let f = (m.j + m.a + m.b) as f64;
            m.j as f64 * de + m.a as f64 * e4 + m.b as f64 * e6 + (f - 1.0) * lg
        })
        .collect();
    // back-substitution f_i = g_i − Σ_{j>i} c_ij f_j with |c_ij| ≤ |g_i|
    let mut f = vec![0.0; g.len()];
    for i in (0..g.len()).rev() {
        let mut b = g[i];
        for fj in &f[i + 1..] {
            b = b.max(g[i] + fj) + 1.0;
        }
        f[i] = b + g.len() as f64;
    }
    f.into_iter().fold(0.0, f64::max)
}

fn inv_mod(x: u64, q: u64) -> u64 {
    let mut r = 1u64;
    let (mut b, mut e) = (x % q, q - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % q;
        }
        b = b * b % q;
        e >>= 1;
    }
    r
}

/// Basis residues modulo one prime, in reduced echelon form with pivots at q^1..q^d.
fn basis_mod(mons: &[Monomial], n: usize, size: usize, prime: &NttPrime, s3: &[i128], s5: &[i128]) -> Vec<Vec<u64>> {
    let q = prime.q;
    let mut e4: Vec<u64> = s3.iter().map(|&s| ntt::reduce_i128(240 * s, q)).collect();
    let mut e6: Vec<u64> = s5.iter().map(|&s| ntt::reduce_i128(-504 * s, q)).collect();
    e4[0] = 1;
    e6[0] = 1;
    let f4 = ntt::forward(&e4, size, prime);
    let f6 = ntt::forward(&e6, size, prime);
    let cube = ntt::pointwise_inverse(&[&f4, &f4, &f4], n, prime);
    let square = ntt::pointwise_inverse(&[&f6, &f6], n, prime);
    let inv1728 = inv_mod(1728, q);
    let delta: Vec<u64> = cube.iter().zip(&square).map(|(&c, &s)| (c + q - s) % q * inv1728 % q).collect();
    let fd = ntt::forward(&delta, size, prime);

    let mut rows: Vec<Vec<u64>> = mons
        .iter()
        .map(|m| {
            let mut parts: Vec<&[u64]> = Vec::new();
            parts.extend(std::iter::repeat_n(fd.as_slice(), m.j as usize));
            parts.extend(std::iter::repeat_n(f4.as_slice(), m.a as usize));
            parts.extend(std::iter::repeat_n(f6.as_slice(), m.b as usize));
            ntt::pointwise_inverse(&parts, n, prime)
        })
        .collect();
    // Δ^j E₄^a E₆^b = q^j + O(q^{j+1}): already upper triangular with unit pivots
    let d = rows.len();
    for i in (0..d).rev() {
        let pivot = i + 1;
        for r in 0..d {
            if r == i {
                continue;
            }
            let c = rows[r][pivot];
            if c == 0 {
                continue;
            }
            let (src, dst) = if r < i {
                let (lo, hi) = rows.split_at_mut(i);
                (&hi[0], &mut lo[r])
            } else {
                let (lo, hi) = rows.split_at_mut(r);
                (&lo[i], &mut hi[0])
            };
            for (x, &y) in dst.iter_mut().zip(src.iter()) {
                *x = (*x + q - c * y % q) % q;
            }
        }
    }
    rows
}

/// Reduced-echelon integral basis f_1..f_d of S_k, `f_i = q^i + Σ_{n>d} c_n q^n`, to `n` terms.
pub fn cusp_basis(k: u32, n: usize) -> Result<Vec<Vec<BigInt>>> {
    if k % 2 == 1 {
        return Err(QexpError::Weight(format!("odd weight {k} has no level-one forms")));
    }
    let mons = monomials(k);
    if mons.is_empty() {
        return Ok(Vec::new());
    }
    let d = mons.len();
    if n <= d {
        return Err(QexpError::Precision(format!("weight {k} needs precision > {d}")));
    }
    let factors = mons.iter().map(|m| m.j + m.a + m.b).max().unwrap_or(1).max(3) as usize;
    let size = (factors * n).next_power_of_two();
    let bits = coefficient_bits(&mons, n) + 64.0;
    let count = (bits / 30.0).ceil() as usize;
    let primes = ntt::ntt_primes(count, size.trailing_zeros().max(20));
    let s3 = sigma_i128(3, n);
    let s5 = sigma_i128(5, n);
    let per_prime: Vec<Vec<Vec<u64>>> =
        primes.par_iter().map(|p| basis_mod(&mons, n, size, p, &s3, &s5)).collect();
    Ok((0..d)
        .map(|i| {
            let res: Vec<Vec<u64>> = per_prime.iter().map(|rows| rows[i].clone()).collect();
            ntt::crt_symmetric(&res, &primes)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qexp::series::delta_qexp;

    #[test]
    fn weight_twelve_is_delta() {
        let b = cusp_basis(12, 200).unwrap();
        assert_eq!(b.len(), 1);
        let d: Vec<BigInt> = delta_qexp(200).coeffs().iter().map(|c| c.to_integer()).collect();
        assert_eq!(b[0], d);
    }

    #[test]
    fn weight_28_echelon() {
        let b = cusp_basis(28, 50).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b[0][1], BigInt::from(1));
        assert_eq!(b[0][2], BigInt::from(0));
        assert_eq!(b[1][1], BigInt::from(0));
        assert_eq!(b[1][2], BigInt::from(1));
        assert!(cusp_basis(14, 50).unwrap().is_empty());
    }

    #[test]
    fn weight_sixteen_is_delta_e4() {
        let n = 60;
        let b = cusp_basis(16, n).unwrap();
        let d = delta_qexp(n);
        let e4 = crate::qexp::series::eisenstein_qexp(4, n).unwrap();
        let want: Vec<BigInt> = d.mul(&e4).coeffs().iter().map(|c| c.to_integer()).collect();
        assert_eq!(b[0], want);
    }
}
