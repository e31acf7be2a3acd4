//! Normalisation constants c_v, C_v, Q_v as exact rationals.

use crate::lfun::TriplePattern;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

/// Local type of a finite place for the constant tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalType {
    /// p ∤ d_B N (and p ∤ M for c_p).
    Unramified,
    /// p | M♯M^χ.
    LevelSharp,
    /// p | d_B.
    Quaternion,
    /// p | N.
    LevelN,
}

/// Sign ±1 of a local or archimedean root number.
pub type Sign = i8;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn pow2(e: i64) -> BigRational {
    let one = BigInt::one();
    if e >= 0 {
        BigRational::from_integer(one << e as usize)
    } else {
        BigRational::new(one.clone(), one << (-e) as usize)
    }
}

/// The c, C and Q tables.
#[derive(Debug, Clone, Copy, Default)]
pub struct ConstantTable;

impl ConstantTable {
    /// c_∞(k) = 1 for k = 0 and 2^{−|k|−1} otherwise.
    pub fn c_inf(&self, k: i64) -> BigRational {
        if k == 0 {
            BigRational::one()
        } else {
            pow2(-k.abs() - 1)
        }
    }

    /// c_p; `None` for types whose value is not rational in the local data.
    pub fn c_p(&self, p: u64, t: LocalType) -> Option<BigRational> {
        match t {
            LocalType::Unramified => Some(BigRational::one()),
            LocalType::LevelSharp => Some(q(p as i64, p as i64 + 1)),
            _ => None,
        }
    }

    /// C_∞ for weights sorted as k = |k₁| ≥ |k₂| ≥ |k₃|: (ε_∞ + 1)/2 if k = 0, else 2^{−2k−2}.
    pub fn big_c_inf(&self, weights: [i64; 3], eps_inf: Sign) -> BigRational {
        let k = weights.iter().map(|w| w.abs()).max().unwrap_or(0);
        if k == 0 {
            q(eps_inf as i64 + 1, 2)
        } else {
            pow2(-2 * k - 2)
        }
    }

    pub fn big_c_p(&self, p: u64, t: LocalType, eps_p: Sign) -> BigRational {
        let (p, e) = (p as i64, eps_p as i64);
        let core = q(p * (p + e), (p + 1).pow(3));
        match t {
            LocalType::Unramified | LocalType::LevelSharp => BigRational::one(),
            LocalType::Quaternion => core * BigRational::from_integer(BigInt::from(e - 1)),
            LocalType::LevelN => core * BigRational::from_integer(BigInt::from(e + 1)),
        }
    }

    /// Q_∞ ∈ {0, 1, 2}.
    pub fn q_inf(&self, pattern: TriplePattern, eps_inf: Sign) -> BigRational {
        match pattern {
            TriplePattern::Maass => q(1 + eps_inf as i64, 2),
            TriplePattern::KK0 => BigRational::one(),
            TriplePattern::Unbalanced => q(2, 1),
        }
    }

    pub fn q_p(&self, t: LocalType, eps_p: Sign) -> BigRational {
        match t {
            LocalType::Quaternion => q(1 - eps_p as i64, 2),
            LocalType::LevelN => q(1 + eps_p as i64, 2),
            _ => BigRational::one(),
        }
    }

    /// The prefactor ∏Q_v · 2^{#{p | d_B N} − 3}/(d_B N)² at d_B = N = 1.
    pub fn level_one_prefactor(&self, pattern: TriplePattern, eps_inf: Sign) -> BigRational {
        self.q_inf(pattern, eps_inf) * pow2(-3)
    }
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_values() {
        let t = ConstantTable;
        assert_eq!(t.c_inf(0), q(1, 1));
        assert_eq!(t.c_inf(12), q(1, 8192));
        assert_eq!(t.c_inf(-28), pow2(-29));
        assert_eq!(t.big_c_inf([28, -16, -12], 1), pow2(-58));
        assert_eq!(t.big_c_inf([0, 0, 0], -1), q(0, 1));
        assert_eq!(t.big_c_inf([0, 0, 0], 1), q(1, 1));
        assert_eq!(t.c_p(3, LocalType::LevelSharp), Some(q(3, 4)));
        assert_eq!(t.big_c_p(2, LocalType::LevelN, 1), q(2 * 2 * 3, 27));
        assert_eq!(t.big_c_p(2, LocalType::Quaternion, 1), q(0, 1));
        assert_eq!(t.q_p(LocalType::Quaternion, -1), q(1, 1));
        assert_eq!(t.level_one_prefactor(TriplePattern::Unbalanced, 1), q(1, 4));
    }

    /// At level one Q_∞ = C_∞ / ∏ c_∞(k_j): the ζ*(2)/(4 vol) of the proof is 1/8.
    #[test]
    fn q_inf_is_ratio_of_archimedean_constants() {
        let t = ConstantTable;
        let cases: [([i64; 3], TriplePattern); 4] = [
            ([28, -16, -12], TriplePattern::Unbalanced),
            ([12, -8, -4], TriplePattern::Unbalanced),
            ([20, -20, 0], TriplePattern::KK0),
            ([0, 0, 0], TriplePattern::Maass),
        ];
        for (w, pat) in cases {
            for e in [1i8, -1] {
                let ratio = t.big_c_inf(w, e) / (t.c_inf(w[0]) * t.c_inf(w[1]) * t.c_inf(w[2]));
                assert_eq!(ratio, t.q_inf(pat, e), "{w:?} {e}");
            }
        }
    }
}
