//! Binary cubic forms: discriminant, covariants, reduction, maximality,
//! splitting types and the field enumerator.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{self, Factorizer};
use crate::error::{Error, Result};

/// Unimodular substitution (x, y) -> (m[0][0] x + m[0][1] y, m[1][0] x + m[1][1] y).
pub type Matrix = [[i64; 2]; 2];

/// Largest enumeration bound for which i128 discriminant arithmetic is safe.
pub const MAX_BOUND: u64 = 1_000_000_000_000;

/// Slack used when testing the numeric root covariant against the reduction domain.
const EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BinaryCubicForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Signature {
    TotallyReal,
    OneComplexPair,
}

impl Signature {
    pub fn of_disc(disc: i128) -> Signature {
        if disc > 0 {
            Signature::TotallyReal
        } else {
            Signature::OneComplexPair
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Signature::TotallyReal => "real",
            Signature::OneComplexPair => "complex",
        })
    }
}

impl FromStr for Signature {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" | "TotallyReal" | "+" => Ok(Signature::TotallyReal),
            "complex" | "OneComplexPair" | "-" => Ok(Signature::OneComplexPair),
            _ => Err(Error::Domain(format!("unknown signature '{s}'"))),
        }
    }
}

/// Which signatures an enumeration should produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignatureFilter {
    Real,
    Complex,
    Both,
}

impl SignatureFilter {
    pub fn admits(self, s: Signature) -> bool {
        match self {
            SignatureFilter::Both => true,
            SignatureFilter::Real => s == Signature::TotallyReal,
            SignatureFilter::Complex => s == Signature::OneComplexPair,
        }
    }
}

impl FromStr for SignatureFilter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(SignatureFilter::Real),
            "complex" => Ok(SignatureFilter::Complex),
            "both" => Ok(SignatureFilter::Both),
            _ => Err(Error::Domain(format!("unknown signature filter '{s}' (real|complex|both)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SplittingType {
    S111,
    S12,
    S3,
    S121,
    S13,
}

impl SplittingType {
    pub const ALL: [SplittingType; 5] =
        [SplittingType::S111, SplittingType::S12, SplittingType::S3, SplittingType::S121, SplittingType::S13];

    pub fn is_unramified(self) -> bool {
        matches!(self, SplittingType::S111 | SplittingType::S12 | SplittingType::S3)
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplittingType::S111 => "111",
            SplittingType::S12 => "12",
            SplittingType::S3 => "3",
            SplittingType::S121 => "1^21",
            SplittingType::S13 => "1^3",
        })
    }
}

impl FromStr for SplittingType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().trim_start_matches('S') {
            "111" => Ok(SplittingType::S111),
            "12" | "21" => Ok(SplittingType::S12),
            "3" => Ok(SplittingType::S3),
            "121" | "1^21" | "1^2 1" => Ok(SplittingType::S121),
            "13" | "1^3" => Ok(SplittingType::S13),
            _ => Err(Error::Domain(format!("unknown splitting type '{s}'"))),
        }
    }
}

/// A cubic field, stored through its canonical maximal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CubicFieldRecord {
    pub form: BinaryCubicForm,
    pub disc: i64,
    pub resolvent_d: i64,
    pub conductor_f: u64,
    pub signature: Signature,
}

impl CubicFieldRecord {
    pub fn from_form(form: BinaryCubicForm, fac: &Factorizer) -> Result<Self> {
        let disc = form.disc();
        let disc = i64::try_from(disc).map_err(|_| Error::Domain("discriminant exceeds i64".into()))?;
        let (resolvent_d, conductor_f) = arith::fundamental_split(disc, &fac.factor(disc.unsigned_abs()))?;
        Ok(CubicFieldRecord { form, disc, resolvent_d, conductor_f, signature: Signature::of_disc(disc as i128) })
    }

    pub fn splitting_type(&self, p: u64) -> SplittingType {
        self.form.splitting_type(p)
    }

    fn sort_key(&self) -> (u64, BinaryCubicForm) {
        (self.disc.unsigned_abs(), self.form)
    }
}

pub fn sort_records(v: &mut [CubicFieldRecord]) {
    v.sort_by_key(|r| r.sort_key());
}

impl fmt::Display for BinaryCubicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.a, self.b, self.c, self.d)
    }
}

impl BinaryCubicForm {
    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        BinaryCubicForm { a, b, c, d }
    }

    pub fn coeffs(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn disc(&self) -> i128 {
        let (a, b, c, d) = (self.a as i128, self.b as i128, self.c as i128, self.d as i128);
        18 * a * b * c * d - 4 * a * c * c * c + b * b * c * c - 4 * b * b * b * d - 27 * a * a * d * d
    }

    /// Hessian covariant (P, Q, R): P x² + Q xy + R y², with Q² − 4PR = −3·disc.
    pub fn hessian(&self) -> (i128, i128, i128) {
        let (a, b, c, d) = (self.a as i128, self.b as i128, self.c as i128, self.d as i128);
        (b * b - 3 * a * c, b * c - 9 * a * d, c * c - 3 * b * d)
    }

    pub fn eval(&self, x: i128, y: i128) -> i128 {
        let (a, b, c, d) = (self.a as i128, self.b as i128, self.c as i128, self.d as i128);
        a * x * x * x + b * x * x * y + c * x * y * y + d * y * y * y
    }

    pub fn neg(&self) -> Self {
        BinaryCubicForm::new(-self.a, -self.b, -self.c, -self.d)
    }

    pub fn content(&self) -> i128 {
        self.coeffs().iter().fold(0i128, |g, &x| arith::gcd(g, x as i128))
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    pub fn try_transform(&self, m: &Matrix) -> Option<Self> {
        let (a, b, c, d) = (self.a as i128, self.b as i128, self.c as i128, self.d as i128);
        let (al, be, ga, de) = (m[0][0] as i128, m[0][1] as i128, m[1][0] as i128, m[1][1] as i128);
        let n0 = self.eval(al, ga);
        let n3 = self.eval(be, de);
        let n1 =
            3 * a * al * al * be + b * (al * al * de + 2 * al * be * ga) + c * (ga * ga * be + 2 * al * ga * de) + 3 * d * ga * ga * de;
        let n2 =
            3 * a * al * be * be + b * (be * be * ga + 2 * al * be * de) + c * (al * de * de + 2 * be * ga * de) + 3 * d * ga * de * de;
        Some(BinaryCubicForm::new(i64::try_from(n0).ok()?, i64::try_from(n1).ok()?, i64::try_from(n2).ok()?, i64::try_from(n3).ok()?))
    }

    /// F(αx+βy, γx+δy). Panics if a coefficient leaves i64.
    pub fn transform(&self, m: &Matrix) -> Self {
        self.try_transform(m).expect("coefficient overflow in transform")
    }

    pub fn is_irreducible(&self) -> bool {
        if self.a == 0 || self.d == 0 || self.disc() == 0 {
            return false;
        }
        // A rational root u/v of F(x,1) has v | a; test the lattice points
        // next to each real root.
        let divs = divisors(self.a.unsigned_abs());
        for r in self.real_roots() {
            for &v in &divs {
                let u0 = (r * v as f64).round() as i128;
                for u in [u0 - 1, u0, u0 + 1] {
                    if self.eval(u, v as i128) == 0 {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn poly_f64(&self) -> [f64; 4] {
        [self.a as f64, self.b as f64, self.c as f64, self.d as f64]
    }

    /// Real roots of F(x,1) (requires a ≠ 0), Newton-polished.
    pub fn real_roots(&self) -> Vec<f64> {
        let [a, b, c, d] = self.poly_f64();
        let (bb, cc, dd) = (b / a, c / a, d / a);
        let p = cc - bb * bb / 3.0;
        let q = 2.0 * bb * bb * bb / 27.0 - bb * cc / 3.0 + dd;
        let shift = -bb / 3.0;
        let disc = self.disc();
        let mut roots = if disc > 0 {
            let m = 2.0 * (-p / 3.0).sqrt();
            let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
            let th = arg.acos() / 3.0;
            (0..3).map(|k| m * (th - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() + shift).collect()
        } else {
            let delta = (q * q / 4.0 + p * p * p / 27.0).max(0.0).sqrt();
            let u = (-q / 2.0 + delta).cbrt();
            let v = (-q / 2.0 - delta).cbrt();
            vec![u + v + shift]
        };
        for r in roots.iter_mut() {
            *r = newton_real(self.poly_f64(), *r);
        }
        roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
        roots
    }

    /// For disc < 0: the root of F(x,1) in the upper half plane.
    pub fn complex_root(&self) -> Complex64 {
        let [a, b, c, d] = self.poly_f64();
        let theta = self.real_roots()[0];
        let b1 = b + a * theta;
        let c1 = if theta.abs() > 1.0 { -d / theta } else { c + b1 * theta };
        let im = (4.0 * a * c1 - b1 * b1).abs().sqrt() / (2.0 * a.abs());
        let mut z = Complex64::new(-b1 / (2.0 * a), im);
        for _ in 0..3 {
            let f = ((Complex64::new(a, 0.0) * z + b) * z + c) * z + d;
            let fp = (Complex64::new(3.0 * a, 0.0) * z + 2.0 * b) * z + c;
            if fp.norm() == 0.0 {
                break;
            }
            z -= f / fp;
        }
        if z.im < 0.0 {
            z = z.conj();
        }
        z
    }

    /// Reduction test. Positive discriminant: Hessian satisfies |Q| ≤ P ≤ R.
    /// Negative discriminant: root covariant has |Re ω| ≤ 1/2, |ω| ≥ 1 (with slack).
    pub fn is_reduced(&self) -> bool {
        let disc = self.disc();
        if disc > 0 {
            let (p, q, r) = self.hessian();
            q.abs() <= p && p <= r
        } else if disc < 0 && self.a != 0 {
            omega_reduced(self.complex_root())
        } else {
            false
        }
    }

    /// Bring an irreducible form into the reduction domain.
    pub fn reduce(&self) -> Result<Self> {
        if !self.is_irreducible() {
            return Err(Error::Domain(format!("form {self} is reducible or degenerate")));
        }
        let mut f = *self;
        if self.disc() > 0 {
            loop {
                let (p, q, r) = f.hessian();
                if q.abs() > p {
                    let k = -(q + p).div_euclid(2 * p) as i64;
                    f = f.try_transform(&[[1, k], [0, 1]]).ok_or_else(overflow)?;
                } else if p > r {
                    f = f.try_transform(&[[0, 1], [-1, 0]]).ok_or_else(overflow)?;
                } else {
                    break;
                }
            }
        } else {
            for _ in 0..10_000 {
                let w = f.complex_root();
                if w.re.abs() > 0.5 {
                    let k = w.re.round() as i64;
                    f = f.try_transform(&[[1, k], [0, 1]]).ok_or_else(overflow)?;
                } else if w.norm_sqr() < 1.0 {
                    f = f.try_transform(&[[0, -1], [1, 0]]).ok_or_else(overflow)?;
                } else {
                    break;
                }
            }
        }
        if f.a < 0 {
            f = f.neg();
        }
        Ok(f)
    }

    /// Canonical representative of the GL₂(ℤ)-class (irreducible forms only).
    pub fn canonical(&self) -> Result<Self> {
        let r = self.reduce()?;
        Ok(r.canonical_from_reduced())
    }

    /// Lexicographic minimum with a > 0 among reduced images under matrices
    /// with entries in {−1, 0, 1}. Input must already be reduced.
    fn canonical_from_reduced(&self) -> Self {
        let disc = self.disc();
        let omega = if disc < 0 { Some(self.complex_root()) } else { None };
        let mut best = if self.a > 0 { *self } else { self.neg() };
        for m in small_matrices() {
            let g = match self.try_transform(m) {
                Some(g) => g,
                None => continue,
            };
            let g = if g.a < 0 { g.neg() } else { g };
            if g.a == 0 || g >= best {
                continue;
            }
            let reduced = match omega {
                None => {
                    let (p, q, r) = g.hessian();
                    q.abs() <= p && p <= r
                }
                Some(w) => omega_reduced(mobius_inv(m, w)),
            };
            if reduced {
                best = g;
            }
        }
        best
    }

    fn is_interior(&self) -> bool {
        if self.disc() > 0 {
            let (p, q, r) = self.hessian();
            q.abs() < p && p < r
        } else {
            let w = self.complex_root();
            w.re.abs() < 0.5 - EPS && w.norm_sqr() > 1.0 + EPS
        }
    }

    /// True iff this (reduced, a > 0) form is its own canonical representative.
    fn is_canonical_reduced(&self) -> bool {
        if self.is_interior() {
            // Only ±I and the reflection y -> −y keep an interior point reduced.
            self.b < 0 || (self.b == 0 && self.d <= 0)
        } else {
            self.canonical_from_reduced() == *self
        }
    }

    /// p-maximality of the associated cubic ring.
    pub fn is_maximal_at(&self, p: u64) -> bool {
        let pi = p as i128;
        let [a, b, c, d] = self.coeffs().map(|x| x as i128);
        if a % pi == 0 && b % pi == 0 && c % pi == 0 && d % pi == 0 {
            return false;
        }
        if a % pi == 0 && b % pi == 0 {
            return a % (pi * pi) != 0;
        }
        for r in 0..pi {
            let fr = self.eval(r, 1);
            let dfr = 3 * a * r * r + 2 * b * r + c;
            if fr % pi == 0 && dfr % pi == 0 {
                return fr % (pi * pi) != 0;
            }
        }
        true
    }

    pub fn is_maximal(&self, disc_factorization: &[(u64, u32)]) -> bool {
        disc_factorization.iter().filter(|&&(_, e)| e >= 2).all(|&(p, _)| self.is_maximal_at(p))
    }

    /// Factorization shape of the form over 𝔽_p, with (1:0) as a root when p | a.
    /// Meaningful for forms that are maximal at p.
    pub fn splitting_type(&self, p: u64) -> SplittingType {
        let pi = p as i128;
        let red = |x: i64| (x as i128).rem_euclid(pi) as u64;
        if self.disc().rem_euclid(pi) == 0 {
            let (hp, hq, hr) = self.hessian();
            return if hp % pi == 0 && hq % pi == 0 && hr % pi == 0 { SplittingType::S13 } else { SplittingType::S121 };
        }
        let coeffs = [red(self.d), red(self.c), red(self.b), red(self.a)];
        let (inf, poly): (usize, Vec<u64>) = if coeffs[3] == 0 { (1, coeffs[..3].to_vec()) } else { (0, coeffs.to_vec()) };
        let roots = inf + count_roots_mod_p(&poly, p);
        match roots {
            3 => SplittingType::S111,
            1 => SplittingType::S12,
            0 => SplittingType::S3,
            _ => unreachable!("unramified cubic with {roots} roots mod {p}"),
        }
    }
}

fn overflow() -> Error {
    Error::Domain("coefficient overflow during reduction".into())
}

fn omega_reduced(w: Complex64) -> bool {
    w.re.abs() <= 0.5 + EPS && w.norm_sqr() >= 1.0 - EPS
}

/// Root covariant of F∘M given the root covariant ω of F.
fn mobius_inv(m: &Matrix, w: Complex64) -> Complex64 {
    let (al, be, ga, de) = (m[0][0] as f64, m[0][1] as f64, m[1][0] as f64, m[1][1] as f64);
    let z = (w * de - be) / (Complex64::new(al, 0.0) - w * ga);
    if z.im < 0.0 {
        z.conj()
    } else {
        z
    }
}

fn small_matrices() -> &'static [Matrix] {
    use std::sync::OnceLock;
    static M: OnceLock<Vec<Matrix>> = OnceLock::new();
    M.get_or_init(|| {
        let mut v = Vec::new();
        for e in 0..81 {
            let x = [(e % 3) as i64 - 1, (e / 3 % 3) as i64 - 1, (e / 9 % 3) as i64 - 1, (e / 27) as i64 - 1];
            if (x[0] * x[3] - x[1] * x[2]).abs() == 1 {
                v.push([[x[0], x[1]], [x[2], x[3]]]);
            }
        }
        v
    })
}

fn newton_real(p: [f64; 4], mut x: f64) -> f64 {
    for _ in 0..4 {
        let f = ((p[0] * x + p[1]) * x + p[2]) * x + p[3];
        let fp = (3.0 * p[0] * x + 2.0 * p[1]) * x + p[2];
        if fp == 0.0 {
            break;
        }
        let nx = x - f / fp;
        if !nx.is_finite() {
            break;
        }
        x = nx;
    }
    x
}

pub(crate) fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in arith::factor(n) {
        let cur = out.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            out.extend(cur.iter().map(|&x| x * pk));
        }
    }
    out.sort_unstable();
    out
}

// --- polynomials over 𝔽_p (coefficients low to high) ---

fn trim(v: &mut Vec<u64>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    if v.is_empty() {
        v.push(0);
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    arith::pow_mod(a, p - 2, p)
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm && !(r.len() == 1 && r[0] == 0) {
        let dr = r.len() - 1;
        let coef = (r[dr] as u128 * lead_inv as u128 % p as u128) as u64;
        for i in 0..=dm {
            let sub = (coef as u128 * m[i] as u128 % p as u128) as u64;
            let idx = dr - dm + i;
            r[idx] = (r[idx] + p - sub) % p;
        }
        r.pop();
        trim(&mut r);
        if dm == 0 {
            return vec![0];
        }
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
        }
    }
    poly_rem(&prod, m, p)
}

fn poly_gcd_degree(a: &[u64], b: &[u64], p: u64) -> usize {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !(y.len() == 1 && y[0] == 0) {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x.len() - 1
}

/// Number of distinct roots in 𝔽_p of a nonzero polynomial.
fn count_roots_mod_p(f: &[u64], p: u64) -> usize {
    let mut f = f.to_vec();
    trim(&mut f);
    if f.len() <= 1 {
        return 0;
    }
    if p < 64 {
        return (0..p).filter(|&x| f.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p) == 0).count();
    }
    // x^p mod f by repeated squaring
    let mut result = vec![1u64];
    let mut base = poly_rem(&[0, 1], &f, p);
    let mut e = p;
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mulmod(&result, &base, &f, p);
        }
        base = poly_mulmod(&base, &base, &f, p);
        e >>= 1;
    }
    let mut g = result;
    g.resize(g.len().max(2), 0);
    g[1] = (g[1] + p - 1) % p;
    trim(&mut g);
    poly_gcd_degree(&f, &g, p)
}

// --- enumeration ---

/// Visit every cubic field with 0 < |disc| < bound and admitted signature,
/// in no particular order.
pub fn for_each_field<F: FnMut(CubicFieldRecord)>(bound: u64, filter: SignatureFilter, mut sink: F) -> Result<()> {
    if bound > MAX_BOUND {
        return Err(Error::Capacity { what: "enumeration bound".into(), requested: bound, limit: MAX_BOUND });
    }
    if bound <= 1 {
        return Ok(());
    }
    let fac = Factorizer::new(bound);
    let mut emit = |f: BinaryCubicForm, disc: i128| {
        if !f.is_primitive() || !f.is_irreducible() {
            return;
        }
        let df = fac.factor(disc.unsigned_abs() as u64);
        if !f.is_maximal(&df) {
            return;
        }
        if !f.is_canonical_reduced() {
            return;
        }
        let d = disc as i64;
        let (rd, cf) = arith::fundamental_split(d, &df).expect("maximal form has a field discriminant");
        sink(CubicFieldRecord { form: f, disc: d, resolvent_d: rd, conductor_f: cf, signature: Signature::of_disc(disc) });
    };
    if filter.admits(Signature::TotallyReal) {
        scan_positive(bound, &mut emit);
    }
    if filter.admits(Signature::OneComplexPair) {
        scan_negative(bound, &mut emit);
    }
    Ok(())
}

/// Sorted by |disc|, then canonical form.
pub fn enumerate_fields(bound: u64, filter: SignatureFilter) -> Result<Vec<CubicFieldRecord>> {
    let mut out = Vec::new();
    for_each_field(bound, filter, |r| out.push(r))?;
    sort_records(&mut out);
    Ok(out)
}

fn div_floor(a: i128, b: i128) -> i128 {
    a.div_euclid(b)
}

fn div_ceil(a: i128, b: i128) -> i128 {
    -(-a).div_euclid(b)
}

fn scan_positive<F: FnMut(BinaryCubicForm, i128)>(bound: u64, emit: &mut F) {
    let x = bound as i128;
    let xf = bound as f64;
    let pmax = arith::isqrt(bound as u128 - 1) as i128;
    let amax = ((4.0f64 / 27.0).sqrt() * xf.powf(0.25)).floor() as i64 + 1;
    for a in 1..=amax {
        let ai = a as i128;
        let bmax = (1.5 * a as f64 + 2.0 * 3f64.sqrt() * xf.powf(0.25)).floor() as i64 + 1;
        for b in -bmax..=0 {
            let bi = b as i128;
            let cmin = div_ceil(bi * bi - pmax, 3 * ai);
            let cmax = div_floor(bi * bi - 1, 3 * ai);
            for ci in cmin..=cmax {
                let p = bi * bi - 3 * ai * ci;
                let mut dlo = div_ceil(bi * ci - p, 9 * ai);
                let mut dhi = div_floor(bi * ci + p, 9 * ai);
                let rmax = x / p;
                if b == 0 {
                    if ci * ci < p || ci * ci > rmax {
                        continue;
                    }
                } else {
                    // R = c² + 3|b| d ∈ [P, X/P]
                    let nb = -3 * bi;
                    dlo = dlo.max(div_ceil(p - ci * ci, nb));
                    dhi = dhi.min(div_floor(rmax - ci * ci, nb));
                }
                for di in dlo..=dhi {
                    let f = BinaryCubicForm::new(a, b, ci as i64, di as i64);
                    let disc = f.disc();
                    if disc <= 0 || disc >= x {
                        continue;
                    }
                    let (pp, q, r) = f.hessian();
                    if q.abs() <= pp && pp <= r {
                        emit(f, disc);
                    }
                }
            }
        }
    }
}

fn scan_negative<F: FnMut(BinaryCubicForm, i128)>(bound: u64, emit: &mut F) {
    let x = bound as i128;
    let xf = bound as f64;
    let amax = (16.0 * xf / 27.0).powf(0.25).floor() as i64 + 1;
    for a in 1..=amax {
        let af = a as f64;
        let bmax = (1.5 * af + 0.76 * xf.powf(0.25)).floor() as i64 + 1;
        for b in -bmax..=0 {
            let bf = b as f64;
            let cmax = ((xf / 4.0).cbrt() * af.powf(-1.0 / 3.0) + bf.abs()).floor() as i64 + 1;
            for c in b..=cmax {
                let cf = c as f64;
                // d = (b + 2as)(c + 2bs + 4as²)/a for the real part s of ω
                let dof = |s: f64| (bf + 2.0 * af * s) * (cf + 2.0 * bf * s + 4.0 * af * s * s) / af;
                let mut ss = vec![-0.5, 0.5];
                let (qa, qb, qc) = (24.0 * af * af, 16.0 * af * bf, 2.0 * bf * bf + 2.0 * af * cf);
                let dq = qb * qb - 4.0 * qa * qc;
                if dq >= 0.0 {
                    for sgn in [-1.0, 1.0] {
                        let s = (-qb + sgn * dq.sqrt()) / (2.0 * qa);
                        if s.abs() <= 0.5 {
                            ss.push(s);
                        }
                    }
                }
                let vals: Vec<f64> = ss.iter().map(|&s| dof(s)).collect();
                let mut dlo = vals.iter().cloned().fold(f64::INFINITY, f64::min).floor() as i128 - 1;
                let mut dhi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max).ceil() as i128 + 1;
                // disc(d) = −27a²d² + (18abc − 4b³)d + b²c² − 4ac³ > −X
                let qa2 = 27.0 * af * af;
                let qb2 = 18.0 * af * bf * cf - 4.0 * bf * bf * bf;
                let qc2 = bf * bf * cf * cf - 4.0 * af * cf * cf * cf + xf;
                let del = qb2 * qb2 + 4.0 * qa2 * qc2;
                if del < 0.0 {
                    continue;
                }
                let r1 = (qb2 - del.sqrt()) / (2.0 * qa2);
                let r2 = (qb2 + del.sqrt()) / (2.0 * qa2);
                dlo = dlo.max(r1.floor() as i128 - 1);
                dhi = dhi.min(r2.ceil() as i128 + 1);
                for di in dlo..=dhi {
                    let f = BinaryCubicForm::new(a, b, c, di as i64);
                    let disc = f.disc();
                    if disc >= 0 || -disc >= x {
                        continue;
                    }
                    if omega_reduced(f.complex_root()) {
                        emit(f, disc);
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_examples() {
        assert_eq!(BinaryCubicForm::new(0, 1, 1, 0).disc(), 1);
        assert_eq!(BinaryCubicForm::new(1, 0, -1, -1).disc(), -23);
        assert_eq!(BinaryCubicForm::new(1, 0, 1, 1).disc(), -31);
    }

    #[test]
    fn hessian_identity() {
        let f = BinaryCubicForm::new(3, -5, 7, 11);
        let (p, q, r) = f.hessian();
        assert_eq!(q * q - 4 * p * r, -3 * f.disc());
    }

    #[test]
    fn small_matrix_count() {
        assert_eq!(small_matrices().len(), 40);
    }

    #[test]
    fn splitting_examples() {
        let f49 = BinaryCubicForm::new(1, -1, -2, 1);
        assert_eq!(f49.disc(), 49);
        assert_eq!(f49.splitting_type(2), SplittingType::S3);
        assert_eq!(f49.splitting_type(7), SplittingType::S13);
        assert_eq!(f49.splitting_type(13), SplittingType::S111);
        let f23 = BinaryCubicForm::new(1, 0, -1, -1);
        assert_eq!(f23.splitting_type(23), SplittingType::S121);
        let f108 = BinaryCubicForm::new(1, 0, 0, -2);
        assert_eq!(f108.splitting_type(2), SplittingType::S13);
        assert_eq!(f108.splitting_type(3), SplittingType::S13);
    }

    #[test]
    fn root_count_large_prime_matches_brute_force() {
        let f = BinaryCubicForm::new(1, 0, -1, -1);
        for p in arith::primes_up_to(400).into_iter().filter(|&p| p >= 64 && p != 23) {
            let brute = (0..p as i128).filter(|&r| f.eval(r, 1).rem_euclid(p as i128) == 0).count();
            let st = f.splitting_type(p);
            let want = match brute {
                3 => SplittingType::S111,
                1 => SplittingType::S12,
                _ => SplittingType::S3,
            };
            assert_eq!(st, want, "p={p}");
        }
    }

    #[test]
    fn maximality() {
        assert!(BinaryCubicForm::new(1, 0, 0, -2).is_maximal_at(2));
        // p² | a and p | b: index divisible by p
        assert!(!BinaryCubicForm::new(4, 2, 1, 1).is_maximal_at(2));
        assert!(!BinaryCubicForm::new(2, 2, 2, 2).is_maximal_at(2));
    }

    #[test]
    fn small_enumerations() {
        assert!(enumerate_fields(23, SignatureFilter::Both).unwrap().is_empty());
        let v = enumerate_fields(24, SignatureFilter::Complex).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].disc, -23);
        let v = enumerate_fields(50, SignatureFilter::Real).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].disc, v[0].resolvent_d, v[0].conductor_f), (49, 1, 7));
        assert!(enumerate_fields(MAX_BOUND + 1, SignatureFilter::Both).is_err());
    }

    #[test]
    fn known_counts() {
        let neg: Vec<i64> = enumerate_fields(120, SignatureFilter::Complex).unwrap().iter().map(|r| r.disc).collect();
        assert_eq!(neg, vec![-23, -31, -44, -59, -76, -83, -87, -104, -107, -108, -116]);
        let pos: Vec<i64> = enumerate_fields(300, SignatureFilter::Real).unwrap().iter().map(|r| r.disc).collect();
        assert_eq!(pos, vec![49, 81, 148, 169, 229, 257]);
    }
}
