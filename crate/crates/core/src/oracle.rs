//! Brute-force oracle: monic cubics in a Hunter region, field discriminants by
//! overorder refinement, isomorphism classes by explicit root matching.
//! Shares nothing with the form-based enumerator beyond integer helpers.

use std::collections::BTreeMap;

use crate::arith;
use crate::error::{Error, Result};
use crate::forms::Signature;

pub const ORACLE_MAX_BOUND: u64 = 100_000;

/// Monic x³ + p1 x² + p2 x + p3.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Monic {
    pub p1: i64,
    pub p2: i64,
    pub p3: i64,
}

#[derive(Clone, Debug)]
pub struct OracleField {
    pub poly: Monic,
    pub disc: i64,
    pub signature: Signature,
    /// [O_K : ℤ[α]]
    pub index: u64,
}

impl Monic {
    pub fn disc(&self) -> i128 {
        let (b, c, d) = (self.p1 as i128, self.p2 as i128, self.p3 as i128);
        18 * b * c * d - 4 * c * c * c + b * b * c * c - 4 * b * b * b * d - 27 * d * d
    }

    fn eval(&self, x: i128) -> i128 {
        ((x + self.p1 as i128) * x + self.p2 as i128) * x + self.p3 as i128
    }

    fn has_integer_root(&self) -> bool {
        if self.p3 == 0 {
            return true;
        }
        // integer roots divide p3; bounded by 1 + max|p_i|
        let m = 1 + self.p1.abs().max(self.p2.abs()).max(self.p3.abs()) as i128;
        let mut r = 1;
        while r * r <= self.p3.unsigned_abs() as i128 || r <= 1 {
            if self.p3 as i128 % r == 0 {
                for q in [r, -r, self.p3 as i128 / r, -(self.p3 as i128) / r] {
                    if q.abs() <= m && self.eval(q) == 0 {
                        return true;
                    }
                }
            }
            r += 1;
        }
        false
    }

    fn companion(&self) -> [[i128; 3]; 3] {
        [[0, 0, -self.p3 as i128], [1, 0, -self.p2 as i128], [0, 1, -self.p1 as i128]]
    }

    /// Complex roots via the Durand-Kerner iteration.
    fn roots(&self) -> [(f64, f64); 3] {
        use num_complex::Complex64 as C;
        let f = |z: C| ((z + self.p1 as f64) * z + self.p2 as f64) * z + self.p3 as f64;
        let mut z = [C::new(0.4, 0.9), C::new(0.4, 0.9).powu(2), C::new(0.4, 0.9).powu(3)];
        let scale = 1.0 + (self.p1.abs().max(self.p2.abs()).max(self.p3.abs())) as f64;
        for w in z.iter_mut() {
            *w *= scale;
        }
        for _ in 0..500 {
            let old = z;
            for i in 0..3 {
                let mut den = C::new(1.0, 0.0);
                for j in 0..3 {
                    if i != j {
                        den *= z[i] - z[j];
                    }
                }
                z[i] -= f(z[i]) / den;
            }
            if (0..3).all(|i| (z[i] - old[i]).norm() < 1e-15 * (1.0 + z[i].norm())) {
                break;
            }
        }
        [(z[0].re, z[0].im), (z[1].re, z[1].im), (z[2].re, z[2].im)]
    }

    /// T₂(α) = Σ |α_i|².
    pub fn t2(&self) -> f64 {
        self.roots().iter().map(|&(x, y)| x * x + y * y).sum()
    }
}

fn matmul(a: &[[i128; 3]; 3], b: &[[i128; 3]; 3]) -> [[i128; 3]; 3] {
    let mut r = [[0i128; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            r[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    r
}

/// Characteristic polynomial (trace, second symmetric function, det) of the
/// multiplication matrix of n0 + n1 α + n2 α².
fn charpoly(f: &Monic, n: [i128; 3]) -> (i128, i128, i128) {
    let c = f.companion();
    let c2 = matmul(&c, &c);
    let mut m = [[0i128; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = n[1] * c[i][j] + n[2] * c2[i][j] + if i == j { n[0] } else { 0 };
        }
    }
    let tr = m[0][0] + m[1][1] + m[2][2];
    let e2 = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0] + m[1][1] * m[2][2] - m[1][2] * m[2][1];
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    (tr, e2, det)
}

fn is_integral(f: &Monic, n: [i128; 3], den: i128) -> bool {
    let (tr, e2, det) = charpoly(f, n);
    tr % den == 0 && e2 % (den * den) == 0 && det % (den * den * den) == 0
}

/// Row-style Hermite normal form of integer row vectors, returning the three
/// nonzero rows of a full-rank lattice in ℤ³.
fn hnf(mut rows: Vec<[i128; 3]>) -> [[i128; 3]; 3] {
    let mut out = [[0i128; 3]; 3];
    for col in 0..3 {
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][col] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&i| rows[i][col].abs()).unwrap();
            for &i in &nz {
                if i != piv {
                    let q = rows[i][col].div_euclid(rows[piv][col]);
                    for k in 0..3 {
                        rows[i][k] -= q * rows[piv][k];
                    }
                }
            }
        }
        let idx = (0..rows.len()).find(|&i| rows[i][col] != 0).expect("full rank");
        let mut r = rows.remove(idx);
        if r[col] < 0 {
            r = r.map(|x| -x);
        }
        out[col] = r;
    }
    out
}

/// Maximal order as (1/den)·span(rows) in the power basis; returns the index.
pub fn field_index(f: &Monic) -> u64 {
    let pdisc = f.disc();
    let mut den: i128 = 1;
    let mut rows = [[1i128, 0, 0], [0, 1, 0], [0, 0, 1]];
    let mut index: i128 = 1;
    let primes: Vec<u64> = arith::factor(pdisc.unsigned_abs() as u64).into_iter().filter(|&(_, e)| e >= 2).map(|(p, _)| p).collect();
    for p in primes {
        let pi = p as i128;
        'refine: loop {
            if (pdisc / (index * index)) % (pi * pi) != 0 {
                break;
            }
            let traces: Vec<i128> = rows.iter().map(|r| charpoly(f, *r).0 / den).collect();
            // Tr(β/p) ∈ ℤ is linear in the coordinates; solve for one of them when possible.
            let solve = (0..3).find(|&j| traces[j].rem_euclid(pi) != 0);
            let mut try_coords = |x: [i128; 3]| -> bool {
                if x == [0, 0, 0] {
                    return false;
                }
                let n = [0, 1, 2].map(|k| (0..3).map(|j| x[j] * rows[j][k]).sum::<i128>());
                if is_integral(f, n, den * pi) {
                    let mut gens: Vec<[i128; 3]> = rows.iter().map(|r| r.map(|v| v * pi)).collect();
                    gens.push(n);
                    rows = hnf(gens);
                    den *= pi;
                    index *= pi;
                    let g = rows.iter().flatten().fold(den, |g, &v| arith::gcd(g, v));
                    if g > 1 {
                        rows = rows.map(|r| r.map(|v| v / g));
                        den /= g;
                    }
                    true
                } else {
                    false
                }
            };
            match solve {
                Some(j) => {
                    let inv = arith::pow_mod(traces[j].rem_euclid(pi) as u64, p - 2, p) as i128;
                    let others: Vec<usize> = (0..3).filter(|&k| k != j).collect();
                    for u in 0..pi {
                        for v in 0..pi {
                            let mut x = [0i128; 3];
                            x[others[0]] = u;
                            x[others[1]] = v;
                            let rest = (traces[others[0]] * u + traces[others[1]] * v).rem_euclid(pi);
                            x[j] = ((pi - rest) % pi * inv) % pi;
                            if try_coords(x) {
                                continue 'refine;
                            }
                        }
                    }
                }
                None => {
                    for e in 1..pi * pi * pi {
                        let x = [e % pi, e / pi % pi, e / (pi * pi)];
                        if try_coords(x) {
                            continue 'refine;
                        }
                    }
                }
            }
            break;
        }
    }
    index as u64
}

/// Does g have a root in ℚ(α), α a root of f? Numeric solve, exact check.
fn isomorphic(f: &Monic, f_index: u64, g: &Monic) -> bool {
    let ra = f.roots();
    let rg = g.roots();
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let den = f_index as f64;
    for perm in perms {
        // Solve x0 + x1 α_j + x2 α_j² = γ_perm(j) (complex) by least squares on
        // real and imaginary parts.
        let mut a = Vec::new();
        let mut b = Vec::new();
        for j in 0..3 {
            let (x, y) = ra[j];
            let (x2, y2) = (x * x - y * y, 2.0 * x * y);
            a.push([1.0, x, x2]);
            b.push(rg[perm[j]].0);
            a.push([0.0, y, y2]);
            b.push(rg[perm[j]].1);
        }
        let sol = match lstsq3(&a, &b) {
            Some(s) => s,
            None => continue,
        };
        let n = sol.map(|v| (v * den).round() as i128);
        let (tr, e2, det) = charpoly(f, n);
        let d = f_index as i128;
        if tr == -(g.p1 as i128) * d && e2 == g.p2 as i128 * d * d && det == -(g.p3 as i128) * d * d * d {
            return true;
        }
    }
    false
}

fn lstsq3(a: &[[f64; 3]], b: &[f64]) -> Option<[f64; 3]> {
    let mut m = [[0.0f64; 4]; 3];
    for (row, &rhs) in a.iter().zip(b) {
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += row[i] * row[j];
            }
            m[i][3] += row[i] * rhs;
        }
    }
    for c in 0..3 {
        let piv = (c..3).max_by(|&i, &j| m[i][c].abs().partial_cmp(&m[j][c].abs()).unwrap())?;
        if m[piv][c].abs() < 1e-300 {
            return None;
        }
        m.swap(c, piv);
        for r in 0..3 {
            if r != c {
                let k = m[r][c] / m[c][c];
                for j in c..4 {
                    m[r][j] -= k * m[c][j];
                }
            }
        }
    }
    Some([m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]])
}

/// All cubic fields with 0 < |disc| < bound, one per isomorphism class.
pub fn hunter_oracle(bound: u64) -> Result<Vec<OracleField>> {
    if bound > ORACLE_MAX_BOUND {
        return Err(Error::Capacity { what: "oracle bound".into(), requested: bound, limit: ORACLE_MAX_BOUND });
    }
    let x = bound as f64;
    let mut classes: BTreeMap<i64, Vec<OracleField>> = BTreeMap::new();
    for p1 in 0..=1i64 {
        let t2max = (p1 * p1) as f64 / 3.0 + (4.0f64 / 3.0).sqrt() * (x / 3.0).sqrt() + 1e-9;
        let a2 = t2max.floor() as i64;
        let a3 = (t2max / 3.0).powf(1.5).floor() as i64;
        for p2 in -a2..=a2 {
            for p3 in -a3..=a3 {
                let f = Monic { p1, p2, p3 };
                let pd = f.disc();
                if pd == 0 || f.has_integer_root() || f.t2() > t2max {
                    continue;
                }
                // cheap rejection: the field disc is pd / i² for some i² | pd
                let fac = arith::factor(pd.unsigned_abs() as u64);
                let max_sq: u128 = fac.iter().map(|&(p, e)| (p as u128).pow(e / 2 * 2)).product();
                if pd.unsigned_abs() / max_sq >= bound as u128 {
                    continue;
                }
                let idx = field_index(&f);
                let fd = pd / (idx as i128 * idx as i128);
                if fd.unsigned_abs() >= bound as u128 {
                    continue;
                }
                let fd = fd as i64;
                let bucket = classes.entry(fd).or_default();
                if bucket.iter().any(|rep| isomorphic(&rep.poly, rep.index, &f)) {
                    continue;
                }
                bucket.push(OracleField { poly: f, disc: fd, signature: Signature::of_disc(fd as i128), index: idx });
            }
        }
    }
    let mut out: Vec<OracleField> = classes.into_values().flatten().collect();
    out.sort_by_key(|r| (r.disc.unsigned_abs(), r.disc));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_examples() {
        // x³ − x² − 2x − 8 (Dedekind): poly disc −2012 = −503·4, index 2
        let f = Monic { p1: -1, p2: -2, p3: -8 };
        assert_eq!(f.disc(), -2012);
        assert_eq!(field_index(&f), 2);
        // x³ − 2: maximal
        assert_eq!(field_index(&Monic { p1: 0, p2: 0, p3: -2 }), 1);
        // x³ − 12: ℚ(∛12) = ℚ(∛18); disc −3888 = −2⁴·3⁵, field disc −972 (index 2)
        assert_eq!(field_index(&Monic { p1: 0, p2: 0, p3: -12 }), 2);
    }

    #[test]
    fn small_bounds() {
        assert!(hunter_oracle(1).unwrap().is_empty());
        let v = hunter_oracle(24).unwrap();
        assert_eq!(v.iter().map(|r| r.disc).collect::<Vec<_>>(), vec![-23]);
        assert!(hunter_oracle(ORACLE_MAX_BOUND + 1).is_err());
    }
}
