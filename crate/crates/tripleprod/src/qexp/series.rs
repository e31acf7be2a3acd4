use super::{QexpError, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Truncated q-expansion `Σ_{n<N} a_n q^n` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<BigRational>,
    weight: u32,
}

impl QSeries {
    pub fn new(coeffs: Vec<BigRational>, weight: u32) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(QexpError::Precision("a q-series needs precision >= 1".into()));
        }
        Ok(Self { coeffs, weight })
    }

    pub fn from_integers<I: IntoIterator<Item = BigInt>>(coeffs: I, weight: u32) -> Result<Self> {
        Self::new(coeffs.into_iter().map(BigRational::from_integer).collect(), weight)
    }

    pub fn zero(weight: u32, precision: usize) -> Self {
        Self { coeffs: vec![BigRational::zero(); precision.max(1)], weight }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of q^n; an error past the precision, never a silent zero.
    pub fn coeff(&self, n: usize) -> Result<&BigRational> {
        self.coeffs.get(n).ok_or_else(|| {
            QexpError::Precision(format!("coefficient {n} requested from a series of precision {}", self.precision()))
        })
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, precision: usize) -> Self {
        let n = precision.clamp(1, self.precision());
        Self { coeffs: self.coeffs[..n].to_vec(), weight: self.weight }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect(), weight: self.weight }
    }

    /// Sum of two series of equal weight, at the smaller precision.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_weight(other)?;
        let n = self.precision().min(other.precision());
        Ok(Self { coeffs: (0..n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(), weight: self.weight })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-BigRational::one()))
    }

    fn check_weight(&self, other: &Self) -> Result<()> {
        if self.weight != other.weight {
            return Err(QexpError::Weight(format!("cannot add weights {} and {}", self.weight, other.weight)));
        }
        Ok(())
    }

    /// Cauchy product; weights add and precision is the minimum.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.precision().min(other.precision());
        let mut out = vec![BigRational::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out, weight: self.weight + other.weight }
    }

    /// Whether `self = c·other` on the common range for some rational c.
    pub fn proportional_to(&self, other: &Self) -> Option<BigRational> {
        let n = self.precision().min(other.precision());
        let pivot = (0..n).find(|&i| !other.coeffs[i].is_zero())?;
        let c = &self.coeffs[pivot] / &other.coeffs[pivot];
        (0..n).all(|i| self.coeffs[i] == &c * &other.coeffs[i]).then_some(c)
    }
}

/// Exact Bernoulli numbers B_0..=B_n (with B_1 = −1/2).
pub fn bernoulli(n: usize) -> Vec<BigRational> {
    let mut b = vec![BigRational::zero(); n + 1];
    b[0] = BigRational::one();
    for m in 1..=n {
        // Σ_{j<m+1} C(m+1, j) B_j = 0
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate().take(m) {
            acc += BigRational::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b[m] = -acc / BigRational::from_integer(BigInt::from(m + 1));
    }
    b
}

/// σ_r(n) for n < len.
pub fn divisor_sums(r: u32, len: usize) -> Vec<BigInt> {
    let mut s = vec![BigInt::zero(); len];
    for d in 1..len {
        let dr = BigInt::from(d).pow(r);
        for m in (d..len).step_by(d) {
            s[m] += &dr;
        }
    }
    s
}

/// `E_k = 1 − (2k/B_k) Σ σ_{k−1}(n) q^n`.
pub fn eisenstein_qexp(k: u32, precision: usize) -> Result<QSeries> {
    if k < 4 || k % 2 == 1 {
        return Err(QexpError::Weight(format!("Eisenstein series needs even k >= 4, got {k}")));
    }
    if precision < 1 {
        return Err(QexpError::Precision("precision must be >= 1".into()));
    }
    let bk = &bernoulli(k as usize)[k as usize];
    let factor = -BigRational::from_integer(BigInt::from(2 * k)) / bk;
    let sig = divisor_sums(k - 1, precision);
    let mut coeffs: Vec<BigRational> = sig.into_iter().map(|s| &factor * BigRational::from_integer(s)).collect();
    coeffs[0] = BigRational::one();
    QSeries::new(coeffs, k)
}

/// Δ = q ∏ (1 − q^n)^24 with exact integer arithmetic.
pub fn delta_qexp(precision: usize) -> QSeries {
    // P = ∏(1 − q^n)^24 satisfies n P_n = −24 Σ_k σ(k) P_{n−k}
    let n = precision.max(1);
    let sigma1 = divisor_sums(1, n);
    let mut p = vec![BigInt::zero(); n];
    if n > 1 {
        p[0] = BigInt::one();
    }
    for m in 1..n.saturating_sub(1) {
        let mut acc = BigInt::zero();
        for k in 1..=m {
            acc += &sigma1[k] * &p[m - k];
        }
        acc *= -24;
        let (q, r) = acc.div_rem(&BigInt::from(m));
        debug_assert!(r.is_zero());
        p[m] = q;
    }
    let mut coeffs = vec![BigInt::zero(); n];
    for m in 1..n {
        coeffs[m] = p[m - 1].clone();
    }
    QSeries::from_integers(coeffs, 12).expect("nonempty")
}

/// Valence-formula dimension of S_k(SL₂(ℤ)), by counting monomials E₄^a E₆^b.
pub fn dim_cusp_forms_oracle(k: u32) -> usize {
    if k % 2 == 1 {
        return 0;
    }
    let modular = (0..=k / 4).filter(|a| (k - 4 * a).is_multiple_of(6)).count();
    modular.saturating_sub(1)
}

/// The standard closed-form dimension of S_k(SL₂(ℤ)).
pub fn dim_cusp_forms(k: u32) -> usize {
    if k % 2 == 1 || k < 12 {
        return 0;
    }
    let base = (k / 12) as usize;
    if k % 12 == 2 {
        base - 1
    } else {
        base
    }
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Hecke operator T_p: a_m ↦ a_{pm} + p^{k−1} a_{m/p}.
pub fn hecke_apply(f: &QSeries, p: u64) -> Result<QSeries> {
    if !is_prime_u64(p) {
        return Err(QexpError::NotPrime(p));
    }
    hecke_apply_n(f, p)
}

/// Hecke operator T_n via its coset action: (T_n f)_m = Σ_{d|(m,n)} d^{k−1} a_{mn/d²}.
pub fn hecke_apply_n(f: &QSeries, n: u64) -> Result<QSeries> {
    if n == 0 {
        return Err(QexpError::Precision("T_0 is undefined".into()));
    }
    let out_prec = f.precision() / n as usize;
    if out_prec == 0 {
        return Err(QexpError::Precision(format!(
            "T_{n} needs input precision >= {n}, have {}",
            f.precision()
        )));
    }
    let km1 = f.weight().saturating_sub(1);
    let mut coeffs = Vec::with_capacity(out_prec);
    for m in 0..out_prec as u64 {
        let mut acc = BigRational::zero();
        if m == 0 {
            // constant term: Σ_{d|n} d^{k−1} a_0
            let s: BigInt = (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| BigInt::from(d).pow(km1)).sum();
            acc = BigRational::from_integer(s) * f.coeff(0)?;
        } else {
            for d in 1..=m.min(n) {
                if m % d == 0 && n.is_multiple_of(d) {
                    let idx = (m * n / (d * d)) as usize;
                    acc += BigRational::from_integer(BigInt::from(d).pow(km1)) * f.coeff(idx)?;
                }
            }
        }
        coeffs.push(acc);
    }
    QSeries::new(coeffs, f.weight())
}
