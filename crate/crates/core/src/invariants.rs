//! Generalized-discriminant invariants: Disc = D·F², radicals, |D|^α F^β,
//! and the local (d_p, f_p) parts.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

/// Split a field discriminant as (fundamental D, F > 0) with D·F² = disc.
/// Inputs that are not discriminants at all are domain errors.
pub fn resolvent_decompose(disc: i64) -> Result<(i64, u64)> {
    arith::fundamental_split(disc, &arith::factor(disc.unsigned_abs())).map_err(|e| match e {
        Error::Integrity(m) => Error::Domain(m),
        other => other,
    })
}

pub fn radical_c(disc: i64) -> u64 {
    arith::radical(disc.unsigned_abs())
}

/// Exponent pair (α, β) for the invariant |D|^α F^β.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantExponents {
    pub alpha: f64,
    pub beta: f64,
}

impl InvariantExponents {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && beta > 0.0) || !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::Domain(format!("exponents must be positive, got ({alpha}, {beta})")));
        }
        Ok(InvariantExponents { alpha, beta })
    }

    /// Rescaled so that min(α, β) = 1 (the ordering is unchanged).
    pub fn normalized(&self) -> Self {
        let m = self.alpha.min(self.beta);
        InvariantExponents { alpha: self.alpha / m, beta: self.beta / m }
    }

    pub fn ratio(&self) -> f64 {
        self.beta / self.alpha
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundComparison {
    Below,
    Above,
    Borderline,
}

pub const BORDERLINE_REL: f64 = 1e-12;

/// |D|^α F^β. Integral exponents are evaluated exactly when the result fits.
pub fn generalized_disc(d: i64, f: u64, e: InvariantExponents) -> f64 {
    let ad = d.unsigned_abs();
    if e.alpha.fract() == 0.0 && e.beta.fract() == 0.0 && e.alpha <= 64.0 && e.beta <= 64.0 {
        let x = (ad as u128).checked_pow(e.alpha as u32).zip((f as u128).checked_pow(e.beta as u32));
        if let Some((x, y)) = x {
            if let Some(p) = x.checked_mul(y) {
                return p as f64;
            }
        }
    }
    (ad as f64).powf(e.alpha) * (f as f64).powf(e.beta)
}

pub fn compare_to_bound(value: f64, x: f64) -> BoundComparison {
    if ((value - x) / x).abs() <= BORDERLINE_REL {
        BoundComparison::Borderline
    } else if value < x {
        BoundComparison::Below
    } else {
        BoundComparison::Above
    }
}

/// (α, β) = c₁(1, 2) + c₂(1, 0) for a representation with c₁ standard and c₂
/// sign components.
pub fn conductor_exponents(c1: u32, c2: u32) -> Result<(u32, u32)> {
    if c1 == 0 {
        return Err(Error::Domain("c1 must be at least 1 (the standard representation must occur)".into()));
    }
    Ok((c1 + c2, 2 * c1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalPart {
    pub p: u64,
    /// p^{v_p(D)}
    pub d_p: u64,
    /// p^{v_p(F)}
    pub f_p: u64,
}

impl LocalPart {
    /// Whether (d_p, f_p) is one of the pairs a cubic field can have at p.
    pub fn is_allowed(&self) -> bool {
        let p = self.p;
        let pair = (self.d_p, self.f_p);
        match p {
            2 => matches!(pair, (1, 1) | (4, 1) | (8, 1) | (1, 2)),
            3 => matches!(pair, (1, 1) | (3, 1) | (3, 3) | (1, 9) | (3, 9)),
            _ => pair == (1, 1) || pair == (p, 1) || pair == (1, p),
        }
    }
}

/// Local parts at every prime dividing D·F.
pub fn local_parts(d: i64, f: u64) -> Vec<LocalPart> {
    let n = d.unsigned_abs() * f;
    arith::factor(n)
        .into_iter()
        .map(|(p, _)| {
            let d_p = p.pow(arith::valuation(d.unsigned_abs() as u128, p));
            let f_p = p.pow(arith::valuation(f as u128, p));
            LocalPart { p, d_p, f_p }
        })
        .collect()
}

/// Three-valued comparison helper for callers that sort by an invariant.
pub fn cmp_f64(a: f64, b: f64) -> Ordering {
    a.partial_cmp(&b).unwrap_or(Ordering::Equal)
}
