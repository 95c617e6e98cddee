//! Leading constants and Dirichlet series evaluated as Euler products.

use crate::arith;
use crate::census;
use crate::error::{Error, Result};
use crate::forms::Signature;
use crate::localmass::{self, InfSet, LocalAlgebraClass, SplittingConstraint, TypeSet};
use crate::special::{gamma, zeta, EulerProduct, Interval};

pub const DEFAULT_PMAX: u64 = 100_000;
/// L₁(Σ, s) is only evaluated for s ≥ 1 + L1_MARGIN.
pub const L1_MARGIN: f64 = 0.05;

fn pf(p: u64) -> f64 {
    p as f64
}

fn m_inf(inf: InfSet) -> Result<f64> {
    let q = localmass::infinite_mass(inf)?;
    Ok(*q.numer() as f64 / *q.denom() as f64)
}

/// f must be squarefree away from 3 with v₃(f) ≤ 2.
pub fn is_admissible_f(f: u64) -> bool {
    f >= 1 && arith::factor(f).iter().all(|&(p, e)| e == 1 || (p == 3 && e == 2))
}

/// (Σ_{K ∈ Σ_p, v_p(F) = fval} |D|_p/|Aut|)(1 − 1/p).
pub fn c1_local_factor(allowed: TypeSet, p: u64, fval: u32) -> f64 {
    let m = localmass::mass_sum(p, allowed, |c: &LocalAlgebraClass| if c.f_val == fval { pf(p).powi(-(c.d_val as i32)) } else { 0.0 });
    m * (1.0 - 1.0 / pf(p))
}

/// C₁(Σ, f). Every prime outside f·P_Σ contributes 1 − p⁻², so the product
/// is 1/ζ(2) times finitely many exact corrections.
pub fn c1_of_f(sigma: &SplittingConstraint, f: u64) -> Result<Interval> {
    sigma.validate()?;
    if !is_admissible_f(f) {
        return Err(Error::Domain(format!("f = {f} is not squarefree away from 3 with v_3(f) <= 2")));
    }
    let mut primes: Vec<u64> = arith::factor(f).iter().map(|&(p, _)| p).collect();
    primes.extend(sigma.primes.keys());
    primes.extend([2, 3]);
    primes.sort_unstable();
    primes.dedup();
    let mut v = 0.5 * m_inf(sigma.infinite)? / zeta(2.0);
    for p in primes {
        let fval = arith::valuation(f as u128, p);
        v *= c1_local_factor(sigma.allowed(p), p, fval) / (1.0 - pf(p).powi(-2));
    }
    Ok(Interval::exact(v))
}

/// (Σ_{K ∈ Σ_p} |D|_p |F|_p^s / |Aut|)(1 − 1/p).
pub fn l1_local_factor(allowed: TypeSet, p: u64, s: f64) -> f64 {
    localmass::mass_sum(p, allowed, localmass::disc_weight(p, s)) * (1.0 - 1.0 / pf(p))
}

/// L₁(Σ, s) = Σ_f C₁(Σ, f) f^{−s}.
pub fn l1(sigma: &SplittingConstraint, s: f64, pmax: u64) -> Result<Interval> {
    sigma.validate()?;
    if !(s >= 1.0 + L1_MARGIN) {
        return Err(Error::Domain(format!("L1 needs s >= {} (got {s}); too close to the pole", 1.0 + L1_MARGIN)));
    }
    let factor = |p: u64| l1_local_factor(sigma.allowed(p), p, s);
    // unrestricted factor 1 − p⁻² + p^{−s} − p^{−s−1} ≈ ζ(s)/(ζ(2)ζ(2s)ζ(s+1)) locally
    let ep = EulerProduct {
        factor: &factor,
        zeta_powers: vec![(2.0, -1), (s, 1), (2.0 * s, -1), (s + 1.0, -1)],
        tail_rate: (2.0 * s + 1.0).min(s + 3.0),
    };
    Ok(ep.evaluate(pmax).scale(0.5 * m_inf(sigma.infinite)?))
}

/// (Σ_{K ∈ Σ_p} |D|_p |F|_p / |Aut|)(1 − 1/p)².
pub fn residue_local_factor(allowed: TypeSet, p: u64) -> f64 {
    localmass::mass_sum(p, allowed, localmass::disc_weight(p, 1.0)) * (1.0 - 1.0 / pf(p)).powi(2)
}

/// Res_{s=1} L₁(Σ, s).
pub fn residue_l1(sigma: &SplittingConstraint, pmax: u64) -> Result<Interval> {
    sigma.validate()?;
    let factor = |p: u64| residue_local_factor(sigma.allowed(p), p);
    Ok(weighted_1_plus_2_over_p(&factor, pmax).scale(0.5 * m_inf(sigma.infinite)?))
}

/// ∏_p g(p) for g(p) = (1 + 2/p)(1 − 1/p)² at almost all p.
fn weighted_1_plus_2_over_p(factor: &dyn Fn(u64) -> f64, pmax: u64) -> Interval {
    let ep = EulerProduct { factor, zeta_powers: vec![(2.0, -3), (3.0, 2)], tail_rate: 4.0 };
    ep.evaluate(pmax)
}

/// ℂ(p)(1 − 1/p)², ℂ(p) = Σ |rad(D·F)|_p / |Aut|.
pub fn radical_local_factor(p: u64) -> f64 {
    let c = localmass::radical_local_constant(p);
    (*c.numer() as f64 / *c.denom() as f64) * (1.0 - 1.0 / pf(p)).powi(2)
}

pub fn sigma_size(sig: Signature) -> f64 {
    match sig {
        Signature::TotallyReal => 6.0,
        Signature::OneComplexPair => 2.0,
    }
}

/// (1/(2σ±)) ∏_p ℂ(p)(1 − 1/p)², assembled from the local tables.
pub fn radical_constant(sig: Signature, pmax: u64) -> Interval {
    weighted_1_plus_2_over_p(&radical_local_factor, pmax).scale(1.0 / (2.0 * sigma_size(sig)))
}

/// The closed form as printed: (11/12 or 11/4)·∏_p (1 + 2/p)(1 − 1/p)² over all p.
pub fn radical_constant_as_printed(sig: Signature, pmax: u64) -> Interval {
    let f = |p: u64| (1.0 + 2.0 / pf(p)) * (1.0 - 1.0 / pf(p)).powi(2);
    let lead = match sig {
        Signature::TotallyReal => 11.0 / 12.0,
        Signature::OneComplexPair => 11.0 / 4.0,
    };
    weighted_1_plus_2_over_p(&f, pmax).scale(lead)
}

/// ζ(2/3)Γ(1/3)(2π)^{1/3} / (10 ζ(2) Γ(2/3)).
pub fn l2_prefactor() -> f64 {
    zeta(2.0 / 3.0) * gamma(1.0 / 3.0) * (2.0 * std::f64::consts::PI).cbrt() / (10.0 * zeta(2.0) * gamma(2.0 / 3.0))
}

/// Source of ∫_{(O/Z_p)^prim} i(x)^{2/3} dx for each local algebra.
pub trait IndexIntegrals {
    fn integral(&self, class: &LocalAlgebraClass) -> Result<Interval>;
}

/// Closed form by splitting type (valid at every p for maximal orders).
pub struct ClosedFormIntegrals;

impl IndexIntegrals for ClosedFormIntegrals {
    fn integral(&self, class: &LocalAlgebraClass) -> Result<Interval> {
        Ok(Interval::exact(census::index_integral_by_type(class.splitting, class.p, 2.0 / 3.0)))
    }
}

/// Per-prime factor of L₂(Σ, s): (1 − p^{−1/3}) Σ_K |D|_p |F|_p^{s−1/3} J_K / |Aut K|.
pub fn l2_local_factor(allowed: TypeSet, p: u64, s: f64, ints: &dyn IndexIntegrals) -> Result<Interval> {
    let x = pf(p);
    let (mut v, mut e) = (0.0, 0.0);
    for c in localmass::local_classes(p).iter().filter(|c| allowed.contains(c.splitting)) {
        let j = ints.integral(c)?;
        let w = c.multiplicity as f64 / c.aut_order as f64 * x.powi(-(c.d_val as i32)) * x.powf(-(s - 1.0 / 3.0) * c.f_val as f64);
        v += w * j.value;
        e += w * j.err;
    }
    let k = 1.0 - x.powf(-1.0 / 3.0);
    Ok(Interval { value: v * k, err: e * k })
}

/// L₂(Σ, s) = Σ_f C₂(Σ, f) f^{−s}, needs s − 1/3 > 1.
pub fn l2(sigma: &SplittingConstraint, s: f64, ints: &dyn IndexIntegrals, pmax: u64) -> Result<Interval> {
    sigma.validate()?;
    let t = s - 1.0 / 3.0;
    if !(t >= 1.0 + L1_MARGIN) {
        return Err(Error::Domain(format!("L2 needs s >= {} (got {s})", 4.0 / 3.0 + L1_MARGIN)));
    }
    // fail early, naming the prime, if any integral is unavailable
    let mut err_local = 0.0;
    for &p in &crate::special::primes_cached(pmax) {
        let f = l2_local_factor(sigma.allowed(p), p, s, ints)?;
        err_local += f.err / f.value.abs().max(1e-300);
    }
    let factor = |p: u64| l2_local_factor(sigma.allowed(p), p, s, ints).map(|f| f.value).unwrap_or(f64::NAN);
    // unrestricted factor 1 − p^{−5/3} + p^{−t} + …
    let ep = EulerProduct { factor: &factor, zeta_powers: vec![(5.0 / 3.0, -1), (t, 1)], tail_rate: t.min(5.0 / 3.0) + 1.0 / 3.0 };
    let prod = ep.evaluate(pmax);
    let lead = l2_prefactor() * c_infinity(sigma.infinite)?;
    let v = prod.scale(lead);
    Ok(Interval { value: v.value, err: v.err + v.value.abs() * err_local })
}

pub fn c_infinity(inf: InfSet) -> Result<f64> {
    let r3 = 1.0 / 3f64.sqrt();
    match (inf.real, inf.complex) {
        (true, false) => Ok(1.0),
        (false, true) => Ok(r3),
        (true, true) => Ok(1.0 + r3),
        _ => Err(Error::Domain("infinite-place set is empty".into())),
    }
}
