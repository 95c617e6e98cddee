//! Special functions and certified-ish Euler products.

use serde::Serialize;

use crate::arith;

/// A value with an absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub value: f64,
    pub err: f64,
}

impl Interval {
    pub fn exact(value: f64) -> Self {
        Interval { value, err: value.abs() * 4.0 * f64::EPSILON }
    }

    pub fn lo(&self) -> f64 {
        self.value - self.err
    }

    pub fn hi(&self) -> f64 {
        self.value + self.err
    }

    pub fn contains(&self, x: f64) -> bool {
        (x - self.value).abs() <= self.err
    }

    /// Intervals overlap (interval comparison).
    pub fn agrees(&self, other: &Interval) -> bool {
        (self.value - other.value).abs() <= self.err + other.err
    }

    pub fn scale(&self, k: f64) -> Self {
        Interval { value: self.value * k, err: self.err * k.abs() }
    }

    pub fn mul(&self, o: &Interval) -> Self {
        Interval { value: self.value * o.value, err: self.err * o.value.abs() + o.err * self.value.abs() + self.err * o.err }
    }

    pub fn add(&self, o: &Interval) -> Self {
        Interval { value: self.value + o.value, err: self.err + o.err }
    }
}

const BERNOULLI_2K: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Riemann zeta for real s ≠ 1 (Euler–Maclaurin; continues to s < 1).
pub fn zeta(s: f64) -> f64 {
    assert!(s != 1.0, "zeta has a pole at 1");
    if s > 60.0 {
        return 1.0 + 2f64.powf(-s) + 3f64.powf(-s);
    }
    let n = 30.0f64;
    let mut sum = 0.0;
    for k in 1..30 {
        sum += (k as f64).powf(-s);
    }
    sum += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    // Σ B_{2k}/(2k)! · s(s+1)…(s+2k−2) · N^{−s−2k+1}
    let mut rising = s;
    let mut fact = 2.0;
    let mut npow = n.powf(-s - 1.0);
    for (k, b) in BERNOULLI_2K.iter().enumerate() {
        if k > 0 {
            let j = 2.0 * k as f64;
            rising *= (s + j - 1.0) * (s + j);
            fact *= (j + 1.0) * (j + 2.0);
            npow /= n * n;
        }
        sum += b / fact * rising * npow;
    }
    sum
}

pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

/// Euler product ∏_p factor(p), written as a known zeta-monomial times an
/// absolutely convergent correction ∏_p factor(p)/model(p).
///
/// `zeta_powers` lists (s_k, e_k): the model is ∏_k ζ(s_k)^{e_k}, whose local
/// factor is ∏_k (1 − p^{−s_k})^{−e_k}. `tail_rate` r asserts that
/// |log(factor/model)| ≤ c·p^{−r} for large p; c is estimated from the top
/// decade of primes and the tail bounded by c·P^{1−r}/(r−1).
pub struct EulerProduct<'a> {
    pub factor: &'a dyn Fn(u64) -> f64,
    pub zeta_powers: Vec<(f64, i32)>,
    pub tail_rate: f64,
}

impl EulerProduct<'_> {
    pub fn model_local(&self, p: u64) -> f64 {
        self.zeta_powers.iter().map(|&(s, e)| (1.0 - (p as f64).powf(-s)).powi(-e)).product()
    }

    pub fn evaluate(&self, pmax: u64) -> Interval {
        let primes = primes_cached(pmax);
        let mut log_corr = 0.0f64;
        let mut c_est = 0.0f64;
        for &p in primes.iter() {
            let r = (self.factor)(p) / self.model_local(p);
            let l = r.ln();
            log_corr += l;
            if p * 10 > pmax {
                c_est = c_est.max(l.abs() * (p as f64).powf(self.tail_rate));
            }
        }
        let model: f64 = self.zeta_powers.iter().map(|&(s, e)| zeta(s).powi(e)).product();
        let value = model * log_corr.exp();
        let tail = c_est * (pmax as f64).powf(1.0 - self.tail_rate) / (self.tail_rate - 1.0);
        let err = value.abs() * (tail.exp_m1() + 1e-14 * primes.len() as f64 + 1e-15);
        Interval { value, err }
    }
}

/// Primes up to n, memoized for the largest n requested so far.
pub fn primes_cached(n: u64) -> Vec<u64> {
    use std::sync::Mutex;
    static CACHE: Mutex<(u64, Vec<u64>)> = Mutex::new((0, Vec::new()));
    let mut c = CACHE.lock().unwrap();
    if c.0 < n {
        *c = (n, arith::primes_up_to(n));
    }
    c.1.iter().copied().take_while(|&p| p <= n).collect()
}
