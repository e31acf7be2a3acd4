//! Shared randomized property checks for the Langlands parameter algebra.

#![allow(dead_code)]

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tripleprod::langlands::{zeta_p, ArchFactor, LanglandsParam, NonArchFactor, Place, ZetaCConvention};

const TOL: f64 = 1e-10;
const PRIMES: [u64; 4] = [2, 3, 5, 7];

fn exponent(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-10.0..10.0))
}

fn arch_factor(rng: &mut ChaCha8Rng) -> ArchFactor {
    if rng.gen_bool(0.5) {
        ArchFactor::Dim1 { s: exponent(rng), delta: rng.gen_range(0..2) }
    } else {
        ArchFactor::Dim2 { s: exponent(rng), l: rng.gen_range(1..30) }
    }
}

fn nonarch_factor(rng: &mut ChaCha8Rng) -> NonArchFactor {
    let n = if rng.gen_bool(0.7) { 1 } else { rng.gen_range(2..4) };
    NonArchFactor::special(exponent(rng), n)
}

/// A random parameter with one to three irreducible summands.
fn param(rng: &mut ChaCha8Rng, place: Place) -> LanglandsParam {
    let m = rng.gen_range(1..4);
    match place {
        Place::Infinite => LanglandsParam::arch((0..m).map(|_| arch_factor(rng)).collect()),
        Place::Finite(p) => LanglandsParam::nonarch(p, (0..m).map(|_| nonarch_factor(rng)).collect()),
    }
}

fn degree_two(rng: &mut ChaCha8Rng, place: Place) -> LanglandsParam {
    match (place, rng.gen_bool(0.5)) {
        (Place::Infinite, true) => LanglandsParam::arch(vec![
            ArchFactor::Dim1 { s: exponent(rng), delta: rng.gen_range(0..2) },
            ArchFactor::Dim1 { s: exponent(rng), delta: rng.gen_range(0..2) },
        ]),
        (Place::Infinite, false) => LanglandsParam::arch(vec![ArchFactor::Dim2 { s: exponent(rng), l: rng.gen_range(1..30) }]),
        (Place::Finite(p), true) => LanglandsParam::unramified(p, exponent(rng), exponent(rng)),
        (Place::Finite(p), false) => LanglandsParam::nonarch(p, vec![NonArchFactor::special(exponent(rng), 2)]),
    }
}

fn close(a: C64, b: C64) -> bool {
    (a - b).norm() <= TOL * a.norm().max(b.norm()).max(1e-300)
}

fn place(rng: &mut ChaCha8Rng) -> Place {
    if rng.gen_bool(0.5) {
        Place::Infinite
    } else {
        Place::Finite(PRIMES[rng.gen_range(0..PRIMES.len())])
    }
}

/// One randomized case of all four properties; returns a description of the first failure.
pub fn langlands_case(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = place(&mut rng);
    let conv = ZetaCConvention::Tate;
    let (a, b) = (param(&mut rng, v), param(&mut rng, v));
    // Re s ≥ 2 keeps every factor away from its poles
    let s = C64::new(rng.gen_range(2.0..4.0), rng.gen_range(-5.0..5.0));

    // degree bookkeeping
    let t = a.tensor(&b).map_err(|e| e.to_string())?;
    if t.degree() != a.degree() * b.degree() {
        return Err(format!("deg({a} ⊗ {b}) = {}", t.degree()));
    }
    if a.dual().degree() != a.degree() || !a.dual().dual().approx_eq(&a, 1e-12) {
        return Err(format!("dual of {a}"));
    }
    let r = degree_two(&mut rng, v);
    let ad = r.adjoint().map_err(|e| e.to_string())?;
    if ad.degree() != 3 {
        return Err(format!("deg Ad({r}) = {}", ad.degree()));
    }

    // ⊕-multiplicativity of L, ε and the conductor
    let ab = a.sum(&b).map_err(|e| e.to_string())?;
    let l = |x: &LanglandsParam| x.local_l(s, conv).map_err(|e| e.to_string());
    let eps = |x: &LanglandsParam| x.epsilon(s).map_err(|e| e.to_string());
    if !close(l(&ab)?, l(&a)? * l(&b)?) {
        return Err(format!("L not multiplicative on {a} ⊕ {b}"));
    }
    if !close(eps(&ab)?, eps(&a)? * eps(&b)?) {
        return Err(format!("ε not multiplicative on {a} ⊕ {b}"));
    }
    let cond_ok = match v {
        Place::Infinite => {
            let t = rng.gen_range(-20.0..20.0);
            close(ab.analytic_conductor(t).into(), (a.analytic_conductor(t) * b.analytic_conductor(t)).into())
        }
        Place::Finite(_) => {
            let c = |x: &LanglandsParam| x.conductor().map_err(|e| e.to_string());
            c(&ab)? == c(&a)? * c(&b)?
        }
    };
    if !cond_ok {
        return Err(format!("conductor not multiplicative on {a} ⊕ {b}"));
    }

    // ϱ ⊗ ϱ^∨ = Ad ϱ ⊕ 1
    let lhs = r.tensor(&r.dual()).map_err(|e| e.to_string())?;
    let rhs = ad.sum(&LanglandsParam::trivial(v)).map_err(|e| e.to_string())?;
    if !lhs.approx_eq(&rhs, 1e-12) {
        return Err(format!("{r} ⊗ dual = {lhs}, Ad ⊕ 1 = {rhs}"));
    }

    // triple decomposition over η ∈ {·,··}³
    let p = PRIMES[rng.gen_range(0..PRIMES.len())];
    let sat: Vec<(C64, C64)> = (0..3).map(|_| (exponent(&mut rng), exponent(&mut rng))).collect();
    let par = |i: usize| LanglandsParam::unramified(p, sat[i].0, sat[i].1);
    let triple = par(0).tensor(&par(1)).and_then(|x| x.tensor(&par(2))).map_err(|e| e.to_string())?;
    let mut prod = C64::new(1.0, 0.0);
    for eta in 0..8 {
        let pick = |j: usize| if eta >> j & 1 == 0 { sat[j].0 } else { sat[j].1 };
        prod *= zeta_p(s + pick(0) + pick(1) + pick(2), p);
    }
    if triple.degree() != 8 || !close(l(&triple)?, prod) {
        return Err(format!("triple decomposition at p = {p}, s = {s}"));
    }
    Ok(())
}

/// Runs `cases` consecutive seeds and collects the failures.
pub fn langlands_suite(first_seed: u64, cases: u64) -> Vec<(u64, String)> {
    (first_seed..first_seed + cases).filter_map(|seed| langlands_case(seed).err().map(|e| (seed, e))).collect()
}
