//! Multi-modular number-theoretic transforms and CRT reconstruction for
//! truncated integer power series.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// An NTT-friendly prime `q = c·2^k + 1 < 2^31` with a primitive root.
#[derive(Debug, Clone, Copy)]
pub struct NttPrime {
    pub q: u64,
    pub root: u64,
    pub two_adicity: u32,
}

fn pow_mod(mut b: u64, mut e: u64, q: u64) -> u64 {
    let mut r = 1u64;
    b %= q;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % q;
        }
        b = b * b % q;
        e >>= 1;
    }
    r
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    // deterministic for n < 3.3e24 with these bases; n < 2^31 here
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = x * x % n;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn primitive_root(q: u64) -> u64 {
    let mut m = q - 1;
    let mut factors = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            factors.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..q).find(|&g| factors.iter().all(|&f| pow_mod(g, (q - 1) / f, q) != 1)).expect("prime has a primitive root")
}

/// The `count` largest primes below 2^31 supporting transforms of length 2^k.
pub fn ntt_primes(count: usize, k: u32) -> Vec<NttPrime> {
    let step = 1u64 << k;
    let mut c = ((1u64 << 31) - 1) / step;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        assert!(c > 0, "ran out of NTT primes for 2^{k}");
        let q = c * step + 1;
        if q < (1 << 31) && is_prime(q) {
            out.push(NttPrime { q, root: primitive_root(q), two_adicity: (q - 1).trailing_zeros() });
        }
        c -= 1;
    }
    out
}

/// In-place iterative radix-2 transform of length 2^m.
pub fn ntt(a: &mut [u64], prime: &NttPrime, invert: bool) {
    let n = a.len();
    assert!(n.is_power_of_two());
    let q = prime.q;
    let log = n.trailing_zeros();
    assert!(log <= prime.two_adicity, "transform too long for prime {q}");
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w = pow_mod(prime.root, (q - 1) / len as u64, q);
        if invert {
            w = pow_mod(w, q - 2, q);
        }
        let half = len / 2;
        let mut tw = Vec::with_capacity(half);
        let mut cur = 1u64;
        for _ in 0..half {
            tw.push(cur);
            cur = cur * w % q;
        }
        for chunk in a.chunks_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for ((u, v), &t) in lo.iter_mut().zip(hi.iter_mut()).zip(&tw) {
                let x = *u;
                let y = *v * t % q;
                *u = if x + y >= q { x + y - q } else { x + y };
                *v = if x >= y { x - y } else { x + q - y };
            }
        }
        len <<= 1;
    }
    if invert {
        let inv = pow_mod(n as u64, q - 2, q);
        for x in a.iter_mut() {
            *x = *x * inv % q;
        }
    }
}

/// Transform of a residue vector zero-padded to `size`.
pub fn forward(v: &[u64], size: usize, prime: &NttPrime) -> Vec<u64> {
    let mut a = vec![0u64; size];
    a[..v.len()].copy_from_slice(v);
    ntt(&mut a, prime, false);
    a
}

/// Pointwise product of transforms, inverted and truncated to `n` terms.
pub fn pointwise_inverse(parts: &[&[u64]], n: usize, prime: &NttPrime) -> Vec<u64> {
    let q = prime.q;
    let mut acc = parts[0].to_vec();
    for p in &parts[1..] {
        for (a, b) in acc.iter_mut().zip(p.iter()) {
            *a = *a * b % q;
        }
    }
    ntt(&mut acc, prime, true);
    acc.truncate(n);
    acc
}

/// Reduce a signed integer modulo q.
pub fn reduce_i128(x: i128, q: u64) -> u64 {
    x.rem_euclid(q as i128) as u64
}

/// Garner reconstruction of the symmetric representatives of residue
/// vectors; `residues[i][n]` is coefficient n modulo `primes[i].q`.
pub fn crt_symmetric(residues: &[Vec<u64>], primes: &[NttPrime]) -> Vec<BigInt> {
    let m = primes.len();
    assert_eq!(residues.len(), m);
    let len = residues[0].len();
    // inv[i][j] = q_j^{-1} mod q_i for j < i
    let inv: Vec<Vec<u64>> = (0..m)
        .map(|i| (0..i).map(|j| pow_mod(primes[j].q % primes[i].q, primes[i].q - 2, primes[i].q)).collect())
        .collect();
    let mut modulus = BigInt::one();
    for p in primes {
        modulus *= p.q;
    }
    let half = &modulus >> 1;
    let mut out = Vec::with_capacity(len);
    let mut digits = vec![0u64; m];
    for n in 0..len {
        for i in 0..m {
            let qi = primes[i].q;
            let mut x = residues[i][n] % qi;
            for j in 0..i {
                let d = (x + qi - digits[j] % qi) % qi;
                x = d * inv[i][j] % qi;
            }
            digits[i] = x;
        }
        let mut v = BigInt::zero();
        for i in (0..m).rev() {
            v = v * primes[i].q + digits[i];
        }
        if v > half {
            v -= &modulus;
        }
        out.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_are_ntt_friendly() {
        let ps = ntt_primes(4, 20);
        for p in &ps {
            assert!(is_prime(p.q));
            assert!(p.two_adicity >= 20);
            assert_eq!(pow_mod(p.root, (p.q - 1) / 2, p.q), p.q - 1);
        }
    }

    #[test]
    fn convolution_matches_schoolbook() {
        let p = ntt_primes(1, 20)[0];
        let a: Vec<u64> = (0..37).map(|i| (i * i + 3) as u64).collect();
        let b: Vec<u64> = (0..37).map(|i| (7 * i + 1) as u64).collect();
        let fa = forward(&a, 128, &p);
        let fb = forward(&b, 128, &p);
        let c = pointwise_inverse(&[&fa, &fb], 37, &p);
        for n in 0..37 {
            let want: u64 = (0..=n).map(|m| a[m] * b[n - m]).sum::<u64>() % p.q;
            assert_eq!(c[n], want);
        }
    }

    #[test]
    fn crt_recovers_signed_values() {
        let ps = ntt_primes(3, 20);
        let vals: Vec<i128> = vec![0, 1, -1, 123_456_789_012_345_678, -98_765_432_109_876_543_210];
        let res: Vec<Vec<u64>> = ps.iter().map(|p| vals.iter().map(|&v| reduce_i128(v, p.q)).collect()).collect();
        let back = crt_symmetric(&res, &ps);
        for (v, b) in vals.iter().zip(&back) {
            assert_eq!(BigInt::from(*v), *b);
        }
    }
}
