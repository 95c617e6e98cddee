//! p-adic index integrals ∫_{(O/Z_p)^prim} i(x)^e dx.
//!
//! For the ring attached to a form F with basis (1, ω, θ), the index of
//! Z_p[x] for x = u + vω + wθ is |F(v, w)|_p^{-1}, so the integral only
//! depends on the valuations of F on primitive pairs (v, w). It is evaluated
//! by refining residue classes mod p^j until the valuation is locally
//! constant; cells still undecided at the depth ceiling give a bracket.

use crate::arith;
use crate::error::{Error, Result};
use crate::forms::BinaryCubicForm;
use crate::special::Interval;

/// The cubic ring of a form, localized at p.
#[derive(Clone, Copy, Debug)]
pub struct RingModel {
    pub form: BinaryCubicForm,
    pub p: u64,
    pub depth: u32,
}

impl RingModel {
    pub fn new(form: BinaryCubicForm, p: u64, depth: u32) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        if form.disc() == 0 {
            return Err(Error::Domain(format!("{form} is degenerate")));
        }
        if !form.is_maximal_at(p) {
            return Err(Error::Domain(format!("{form} is not maximal at {p}")));
        }
        if depth == 0 || depth > max_depth(p) {
            return Err(Error::Domain(format!("depth {depth} outside 1..={}", max_depth(p))));
        }
        Ok(RingModel { form, p, depth })
    }

    /// Matrix of multiplication by x = (u, v, w), columns x·1, x·ω, x·θ.
    pub fn mult_matrix(&self, x: [i128; 3]) -> [[i128; 3]; 3] {
        let [a, b, c, d] = self.form.coeffs().map(|t| t as i128);
        let [u, v, w] = x;
        // ω² = −ac + bω − aθ, ωθ = −ad, θ² = −bd + dω − cθ
        let xw = [-a * c * v - a * d * w, u + b * v, -a * v];
        let xt = [-a * d * v - b * d * w, d * w, u - c * w];
        [[x[0], xw[0], xt[0]], [x[1], xw[1], xt[1]], [x[2], xw[2], xt[2]]]
    }

    pub fn mul(&self, x: [i128; 3], y: [i128; 3]) -> [i128; 3] {
        let m = self.mult_matrix(x);
        [0, 1, 2].map(|i| m[i][0] * y[0] + m[i][1] * y[1] + m[i][2] * y[2])
    }

    /// (A, B, C) with charpoly T³ + AT² + BT + C.
    pub fn charpoly(&self, x: [i128; 3]) -> [i128; 3] {
        let m = self.mult_matrix(x);
        let tr = m[0][0] + m[1][1] + m[2][2];
        let minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0] + m[1][1] * m[2][2] - m[1][2] * m[2][1];
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        [-tr, minors, -det]
    }

    /// v_p(disc charpoly(x)) − v_p(disc F); None when x generates no order.
    pub fn disc_excess(&self, x: [i128; 3]) -> Option<i64> {
        let [a, b, c] = self.charpoly(x);
        let dx = a * a * b * b - 4 * b * b * b - 4 * a * a * a * c - 27 * c * c + 18 * a * b * c;
        if dx == 0 {
            return None;
        }
        let vf = arith::valuation(self.form.disc().unsigned_abs(), self.p) as i64;
        Some(arith::valuation(dx.unsigned_abs(), self.p) as i64 - vf)
    }
}

/// Largest depth for which p^{3·depth} fits comfortably in i128.
pub fn max_depth(p: u64) -> u32 {
    (40.0 / (p as f64).log2()).floor().max(1.0) as u32
}

fn vp(x: i128, p: u64) -> u32 {
    if x == 0 {
        u32::MAX
    } else {
        arith::valuation(x.unsigned_abs(), p)
    }
}

/// Integral at a fixed depth: (lower, upper). Cells are closed off exactly
/// once the valuation is constant on them, or once Hensel's lemma isolates a
/// simple root r with v(g) = v(g') + v(x − r) throughout; anything still open
/// at the depth ceiling is bracketed.
///
/// i(x) is invariant under unit scaling of (v, w), so the primitive pairs are
/// pushed to P¹(Z_p): the chart (v : 1), v ∈ Z_p, and the chart (1 : w),
/// w ∈ pZ_p, each weighted by (1 − 1/p).
fn integral_at_depth(m: &RingModel, e: f64, depth: u32) -> (f64, f64) {
    integral_cells(m, e, depth, true)
}

fn integral_cells(m: &RingModel, e: f64, depth: u32, hensel: bool) -> (f64, f64) {
    let p = m.p;
    let pf = p as f64;
    let geo = (1.0 - 1.0 / pf) / (1.0 - pf.powf(e - 1.0));
    let [a, b, c, d] = m.form.coeffs().map(|t| t as i128);
    let (mut lo, mut hi) = (0.0, 0.0);
    // (chart at infinity?, residue mod p^j, j)
    let mut cells: Vec<(bool, i128, u32)> = (0..p as i128).map(|v| (false, v, 1)).collect();
    cells.push((true, 0, 1));
    while let Some((inf, r, j)) = cells.pop() {
        let (g, dg) =
            if inf { (m.form.eval(1, r), b + 2 * c * r + 3 * d * r * r) } else { (m.form.eval(r, 1), 3 * a * r * r + 2 * b * r + c) };
        let t = vp(g, p);
        let s = vp(dg, p);
        let vol = pf.powi(-(j as i32));
        if t < j {
            let v = vol * pf.powf(e * t as f64);
            lo += v;
            hi += v;
        } else if hensel && s < j && t >= j + s {
            let v = vol * pf.powf(e * (s + j) as f64) * geo;
            lo += v;
            hi += v;
        } else if j >= depth {
            // at least p^{e·j} on the cell; at most the tail of a root of multiplicity ≤ 3
            let v = vol * pf.powf(e * j as f64);
            lo += v;
            hi += v / (1.0 - pf.powf(3.0 * e - 1.0)).max(1e-300);
        } else {
            let pj = (p as i128).pow(j);
            for k in 0..p as i128 {
                cells.push((inf, r + k * pj, j + 1));
            }
        }
    }
    let w = 1.0 - 1.0 / pf;
    (lo * w, hi * w)
}

/// The defining finite sum at depth k: p^{−2k} Σ over primitive (v, w) mod p^k
/// of p^{e·min(v_p F(v,w), k)}. Exponential in k; used to check the chart
/// evaluation.
pub fn index_sum_exhaustive(m: &RingModel, e: f64, k: u32) -> f64 {
    let p = m.p as i128;
    let q = p.pow(k);
    let mut s = 0.0;
    for v in 0..q {
        for w in 0..q {
            if v % p == 0 && w % p == 0 {
                continue;
            }
            let t = vp(m.form.eval(v, w), m.p).min(k);
            s += (m.p as f64).powf(e * t as f64);
        }
    }
    s / (q * q) as f64
}

/// ∫ i(x)^e over primitive x, doubling the depth until successive midpoints
/// agree within `tol`.
pub fn local_index_integral(model: &RingModel, exponent: f64, tol: f64) -> Result<Interval> {
    if !(0.0..1.0).contains(&exponent) {
        return Err(Error::Domain(format!("exponent {exponent} outside [0, 1)")));
    }
    let limit = max_depth(model.p);
    let mut k = model.depth;
    let mut prev = integral_at_depth(model, exponent, k);
    loop {
        let k2 = (2 * k).min(limit);
        if k2 == k {
            return Err(Error::Accuracy {
                prime: model.p,
                reason: format!("index integral did not settle by depth {k}: bracket [{}, {}]", prev.0, prev.1),
            });
        }
        let cur = integral_at_depth(model, exponent, k2);
        let mid = |x: (f64, f64)| 0.5 * (x.0 + x.1);
        if (mid(cur) - mid(prev)).abs() < tol && cur.1 - cur.0 < tol {
            return Ok(Interval { value: mid(cur), err: 0.5 * (cur.1 - cur.0) });
        }
        prev = cur;
        k = k2;
    }
}

/// Closed form by the shape of F mod p: each of the p + 1 points of P¹(F_p)
/// carries volume (p−1)/p²; non-roots give 1, simple roots the geometric tail,
/// and the multiple root of a ramified form gives p^e (maximality forces
/// v_p(F) = 1 there, so this holds at p = 2, 3 as well).
pub fn index_integral_by_type(t: crate::forms::SplittingType, p: u64, e: f64) -> f64 {
    use crate::forms::SplittingType::*;
    let x = p as f64;
    let cell = (x - 1.0) / (x * x);
    let simple = cell * (1.0 - 1.0 / x) * x.powf(e) / (1.0 - x.powf(e - 1.0));
    let multiple = cell * x.powf(e);
    let (plain, simples, multiples) = match t {
        S111 => (x - 2.0, 3.0, 0.0),
        S12 => (x, 1.0, 0.0),
        S3 => (x + 1.0, 0.0, 0.0),
        S121 => (x - 1.0, 1.0, 1.0),
        S13 => (x, 0.0, 1.0),
    };
    plain * cell + simples * simple + multiples * multiple
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::SplittingType;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parity_of_disc_excess() {
        let forms = [
            (1, 0, -1, 0),
            (1, -1, -2, 8),
            (1, 0, 0, -2),
            (2, 1, 3, -5),
            (1, 1, 2, 1),
            (3, 0, 1, -7),
            (1, 2, -3, 5),
            (4, -1, 0, 3),
            (1, -5, 1, 2),
            (2, 2, -1, 1),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (i, &(a, b, c, d)) in forms.iter().enumerate() {
            let f = BinaryCubicForm::new(a, b, c, d);
            let p = [2u64, 3, 5, 7, 11][i % 5];
            let m = RingModel { form: f, p, depth: 1 };
            for _ in 0..1000 {
                let x = [rng.gen_range(-500..500), rng.gen_range(-500..500), rng.gen_range(-500..500)];
                if let Some(ex) = m.disc_excess(x) {
                    assert!(ex >= 0 && ex % 2 == 0, "{f} x={x:?} p={p} excess={ex}");
                    assert_eq!(ex as u32, 2 * vp(f.eval(x[1], x[2]), p));
                }
            }
        }
    }

    #[test]
    fn chart_evaluation_matches_defining_sum() {
        let e = 2.0 / 3.0;
        for (f, p, k) in [
            (BinaryCubicForm::new(0, 1, 1, 0), 5u64, 2u32),
            (BinaryCubicForm::new(1, 0, 0, -2), 3, 3),
            (BinaryCubicForm::new(1, 0, -1, 1), 2, 5),
            (BinaryCubicForm::new(1, 1, 2, 2), 2, 5),
            (BinaryCubicForm::new(0, 1, 0, -7), 7, 2),
        ] {
            let m = RingModel::new(f, p, k).unwrap();
            let (lo, _) = integral_cells(&m, e, k, false);
            let want = index_sum_exhaustive(&m, e, k);
            assert!((lo - want).abs() < 1e-12, "{f} p={p}: {lo} vs {want}");
            let exact = integral_at_depth(&m, e, k);
            let deep = integral_cells(&m, e, max_depth(p), false);
            assert!(deep.0 <= exact.0 + 1e-12 && exact.1 <= deep.1 + 1e-12, "{exact:?} {deep:?}");
        }
    }

    #[test]
    fn exponent_zero_is_primitive_volume() {
        for (f, p) in
            [(BinaryCubicForm::new(1, 0, -1, 0), 5u64), (BinaryCubicForm::new(1, 0, 0, -2), 3), (BinaryCubicForm::new(1, 0, -1, 1), 2)]
        {
            let m = RingModel::new(f, p, 2).unwrap();
            let v = local_index_integral(&m, 0.0, 1e-12).unwrap();
            let want = 1.0 - 1.0 / (p * p) as f64;
            assert!((v.value - want).abs() < 1e-12, "{f} {p}: {v:?}");
        }
    }

    #[test]
    fn split_model_converges() {
        // xy(x + y): disc 1, totally split at 5
        let m = RingModel::new(BinaryCubicForm::new(0, 1, 1, 0), 5, 4).unwrap();
        let v = local_index_integral(&m, 2.0 / 3.0, 1e-3).unwrap();
        let want = index_integral_by_type(SplittingType::S111, 5, 2.0 / 3.0);
        assert!((v.value - want).abs() < 1e-3, "{v:?} {want}");
    }

    #[test]
    fn closed_forms_match_exhaustion() {
        let e = 2.0 / 3.0;
        for p in [2u64, 3, 5, 7] {
            let pi = p as i64;
            // a non-residue mod p for the inert and partially split models
            let n = if p == 2 { 0 } else { (2..pi).find(|&n| arith::kron_p(n, p) == -1).unwrap() };
            let cands = [
                (SplittingType::S111, BinaryCubicForm::new(0, 1, 1, 0)),
                (SplittingType::S12, if p == 2 { BinaryCubicForm::new(0, 1, 1, 1) } else { BinaryCubicForm::new(0, 1, 0, -n) }),
                (SplittingType::S121, BinaryCubicForm::new(0, 1, 0, -pi)),
                (SplittingType::S13, BinaryCubicForm::new(1, 0, 0, -pi)),
            ];
            for (t, f) in cands {
                assert_eq!(f.splitting_type(p), t, "{f}");
                let m = RingModel::new(f, p, 3).unwrap();
                let v = local_index_integral(&m, e, 1e-6).unwrap();
                let want = index_integral_by_type(t, p, e);
                assert!((v.value - want).abs() < 1e-5, "{t} p={p}: {v:?} vs {want}");
            }
        }
    }
}
