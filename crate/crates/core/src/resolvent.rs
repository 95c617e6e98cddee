//! Dirichlet series Φ_{Σ,d}(s) = Σ_{K: D(K)=d} F(K)^{-s} in closed form:
//! a main Euler product twisted by (−3d/·), plus one Euler product per
//! "mirror" cubic field E of discriminant −k²d/3, −3k²d or −27k²d.

use std::collections::{BTreeMap, HashMap};

use crate::arith::{self, SpfSieve};
use crate::error::{Error, Result};
use crate::forms::{CubicFieldRecord, Signature, SplittingType};
use crate::localmass::SplittingConstraint;
use crate::special::{primes_cached, Interval};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadChar {
    pub m: i64,
}

impl QuadChar {
    pub fn new(m: i64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("zero modulus".into()));
        }
        Ok(QuadChar { m })
    }

    pub fn at(&self, p: u64) -> i32 {
        arith::kron_p(self.m, p)
    }
}

/// Anything that can list cubic fields of a given discriminant up to some bound.
pub trait FieldSource {
    fn bound(&self) -> u64;
    fn fields_with_disc(&self, disc: i64) -> Vec<CubicFieldRecord>;
}

/// In-memory field list indexed by discriminant.
pub struct FieldTable {
    bound: u64,
    by_disc: HashMap<i64, Vec<CubicFieldRecord>>,
}

impl FieldTable {
    /// `records` must be complete for |disc| ≤ bound.
    pub fn new(bound: u64, records: &[CubicFieldRecord]) -> Self {
        let mut by_disc: HashMap<i64, Vec<CubicFieldRecord>> = HashMap::new();
        for r in records.iter().filter(|r| r.disc.unsigned_abs() <= bound) {
            by_disc.entry(r.disc).or_default().push(*r);
        }
        FieldTable { bound, by_disc }
    }
}

impl FieldSource for FieldTable {
    fn bound(&self) -> u64 {
        self.bound
    }

    fn fields_with_disc(&self, disc: i64) -> Vec<CubicFieldRecord> {
        self.by_disc.get(&disc).cloned().unwrap_or_default()
    }
}

/// Which column of the 3-adic table a mirror field uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MirrorRole {
    /// Disc(E) = −k²d/3 or −3k²d.
    Small,
    /// Disc(E) = −27k²d.
    Large,
}

#[derive(Clone, Debug)]
pub struct MirrorField {
    pub field: CubicFieldRecord,
    pub role: MirrorRole,
    pub k: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorRole {
    Main,
    Mirror(MirrorRole),
}

/// 2 / 0 / −1 for p totally split / partially split / inert in E.
pub fn omega_e(e: &CubicFieldRecord, p: u64) -> Result<i32> {
    if e.disc.unsigned_abs().is_multiple_of(p) {
        return Err(Error::Domain(format!("{p} ramifies in the field of discriminant {}", e.disc)));
    }
    Ok(match e.form.splitting_type(p) {
        SplittingType::S111 => 2,
        SplittingType::S12 => 0,
        _ => -1,
    })
}

/// 3-adic factor as coefficients of (1, 3^{−s}, 3^{−2s}).
pub fn m_factor_coeffs(d: i64, role: FactorRole, mirror: Option<&CubicFieldRecord>) -> Result<[i64; 3]> {
    let r9 = d.rem_euclid(9);
    let class = if d % 3 != 0 {
        0
    } else if r9 == 3 {
        1
    } else if r9 == 6 {
        2
    } else {
        return Err(Error::Domain(format!("{d} is not a fundamental discriminant")));
    };
    if let (FactorRole::Mirror(_), Some(e)) = (role, mirror) {
        let small = if d % 3 == 0 { -d / 3 } else { -3 * d };
        let ok = |target: i64| e.disc % target == 0 && arith::is_square((e.disc / target) as u128);
        let fits = match role {
            FactorRole::Mirror(MirrorRole::Small) => (d % 3 == 0 || small % 3 == 0) && ok(small),
            FactorRole::Mirror(MirrorRole::Large) => ok(-27 * d),
            FactorRole::Main => true,
        };
        if !fits {
            return Err(Error::Domain(format!("field of discriminant {} does not fit role {role:?} for d = {d}", e.disc)));
        }
    }
    Ok(match (class, role) {
        (0, FactorRole::Main) | (0, FactorRole::Mirror(MirrorRole::Small)) => [1, 0, 2],
        (0, FactorRole::Mirror(MirrorRole::Large)) => [1, 0, -1],
        (1, FactorRole::Main) | (1, FactorRole::Mirror(MirrorRole::Small)) => [1, 2, 0],
        (_, FactorRole::Mirror(MirrorRole::Large)) => [1, -1, 0],
        (_, FactorRole::Main) => [1, 2, 6],
        (_, FactorRole::Mirror(MirrorRole::Small)) => {
            let e = mirror.ok_or_else(|| Error::Domain("d ≡ 6 mod 9 mirror factor needs the field".into()))?;
            let w = omega_e(e, 3).map_err(|_| Error::Domain(format!("omega_E(3) undefined for discriminant {} (d = {d})", e.disc)))?;
            [1, 2, 3 * w as i64]
        }
    })
}

/// M_{1,d}(s) or M_{2,E}(s) evaluated at real s.
pub fn m_factor(d: i64, role: FactorRole, mirror: Option<&CubicFieldRecord>, s: f64) -> Result<f64> {
    let c = m_factor_coeffs(d, role, mirror)?;
    Ok(c[0] as f64 + c[1] as f64 * 3f64.powf(-s) + c[2] as f64 * 3f64.powf(-2.0 * s))
}

pub fn c_d(d: i64) -> u64 {
    if d == 1 || d < -3 {
        1
    } else {
        3
    }
}

/// Condition on v_p(F).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FFilter {
    Coprime,
    Divisible,
}

/// The constrained formula with complete splitting demanded at `split` primes.
#[derive(Clone, Debug)]
pub struct SplitSeries {
    pub split: Vec<u64>,
    pub m1: [i64; 3],
    pub mirrors: Vec<(MirrorField, [i64; 3])>,
}

impl SplitSeries {
    pub fn p_sigma(&self) -> u64 {
        self.split.iter().product()
    }

    pub fn normalizer(&self, d: i64) -> u64 {
        c_d(d) * 3u64.pow(self.split.len() as u32)
    }
}

/// weight · [split series at `split`] restricted by `filters`.
#[derive(Clone, Debug)]
pub struct PhiTerm {
    pub weight: i64,
    pub series: SplitSeries,
    pub filters: Vec<(u64, FFilter)>,
}

#[derive(Clone, Debug)]
pub struct PhiSeries {
    pub d: i64,
    pub constraint: SplittingConstraint,
    pub c_d: u64,
    pub vanishing: bool,
    pub terms: Vec<PhiTerm>,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum DCond {
    Always,
    Never,
}

fn kron_d(d: i64, p: u64) -> i32 {
    arith::kron_p(d, p)
}

/// Per-type decomposition at p: (weight, demands complete splitting, f-filter, d-condition).
fn local_terms(d: i64, p: u64, t: SplittingType) -> Vec<(i64, bool, Option<FFilter>, DCond)> {
    let cond = |b: bool| if b { DCond::Always } else { DCond::Never };
    let kd = kron_d(d, p);
    match t {
        SplittingType::S12 => vec![(1, false, Some(FFilter::Coprime), cond(kd == -1))],
        SplittingType::S121 => vec![(1, false, Some(FFilter::Coprime), cond(d % p as i64 == 0))],
        SplittingType::S13 => vec![(1, false, Some(FFilter::Divisible), DCond::Always)],
        SplittingType::S111 => vec![(1, true, None, cond(kd == 1))],
        // (3) = unramified with (d/p) = 1, minus (111)
        SplittingType::S3 => vec![(1, false, Some(FFilter::Coprime), cond(kd == 1)), (-1, true, None, cond(kd == 1))],
    }
}

fn squarefree_divisors(primes: &[u64]) -> Vec<u64> {
    let mut out = vec![1u64];
    for &p in primes {
        let n = out.len();
        for i in 0..n {
            out.push(out[i] * p);
        }
    }
    out
}

/// Discriminant bound the field source must cover for a given d and split set.
pub fn required_bound(d: i64, split: &[u64]) -> u64 {
    let k: u64 = split.iter().product();
    27 * k * k * d.unsigned_abs()
}

fn build_split(d: i64, split: Vec<u64>, source: &dyn FieldSource) -> Result<SplitSeries> {
    let need = required_bound(d, &split);
    if source.bound() < need {
        return Err(Error::Capacity { what: "mirror-field source bound".into(), requested: need, limit: source.bound() });
    }
    let three_split = split.contains(&3);
    let mut targets: BTreeMap<i64, (MirrorRole, u64)> = BTreeMap::new();
    for k in squarefree_divisors(&split) {
        let k2 = (k * k) as i64;
        let small = if d % 3 == 0 { -k2 * d / 3 } else { -3 * k2 * d };
        targets.entry(-27 * k2 * d).or_insert((MirrorRole::Large, k));
        targets.entry(small).or_insert((MirrorRole::Small, k));
    }
    let m1 = if three_split { [1, 0, 0] } else { m_factor_coeffs(d, FactorRole::Main, None)? };
    let mut mirrors = Vec::new();
    for (disc, (role, k)) in targets {
        for e in source.fields_with_disc(disc) {
            let m2 = if three_split { [1, 0, 0] } else { m_factor_coeffs(d, FactorRole::Mirror(role), Some(&e))? };
            mirrors.push((MirrorField { field: e, role, k }, m2));
        }
    }
    Ok(SplitSeries { split, m1, mirrors })
}

pub fn build_phi(d: i64, constraint: &SplittingConstraint, source: &dyn FieldSource) -> Result<PhiSeries> {
    constraint.validate()?;
    if !arith::is_fundamental(d) {
        return Err(Error::Domain(format!("{d} is not a fundamental discriminant")));
    }
    let sig = if d > 0 { Signature::TotallyReal } else { Signature::OneComplexPair };
    let cd = c_d(d);
    let empty = PhiSeries { d, constraint: constraint.clone(), c_d: cd, vanishing: true, terms: Vec::new() };
    if !constraint.infinite.admits(sig) {
        return Ok(empty);
    }
    // expand ∏_p Σ_{t ∈ Σ_p} [type t at p] into signed terms
    type Key = (Vec<u64>, Vec<(u64, FFilter)>);
    let mut acc: BTreeMap<Key, i64> = BTreeMap::new();
    acc.insert((Vec::new(), Vec::new()), 1);
    for (&p, allowed) in &constraint.primes {
        if allowed.is_all() {
            continue;
        }
        let mut next: BTreeMap<Key, i64> = BTreeMap::new();
        for ((split, filters), w) in &acc {
            for t in allowed.types() {
                for (lw, s111, ff, dc) in local_terms(d, p, t) {
                    if dc == DCond::Never {
                        continue;
                    }
                    let (mut sp, mut fl) = (split.clone(), filters.clone());
                    if s111 {
                        sp.push(p);
                    }
                    if let Some(f) = ff {
                        fl.push((p, f));
                    }
                    *next.entry((sp, fl)).or_insert(0) += w * lw;
                }
            }
        }
        next.retain(|_, w| *w != 0);
        acc = next;
    }
    if acc.is_empty() {
        return Ok(empty);
    }
    let mut terms = Vec::new();
    for ((split, filters), weight) in acc {
        terms.push(PhiTerm { weight, series: build_split(d, split, source)?, filters });
    }
    Ok(PhiSeries { d, constraint: constraint.clone(), c_d: cd, vanishing: false, terms })
}

/// Coefficients of a product of linear Euler factors ∏_p (1 + c_p p^{−s}) up to n ≤ zmax.
fn linear_euler(zmax: usize, sieve: &SpfSieve, c: &dyn Fn(u64) -> i64) -> Vec<i64> {
    // c evaluated once per prime
    let mut at_p = vec![0i64; zmax + 1];
    for p in 2..=zmax {
        if sieve.is_prime(p as u64) {
            at_p[p] = c(p as u64);
        }
    }
    let mut g = vec![0i64; zmax + 1];
    if zmax >= 1 {
        g[1] = 1;
    }
    for (n, slot) in g.iter_mut().enumerate().skip(2) {
        let mut v = 1i64;
        for (p, e) in sieve.factor(n as u64) {
            if e > 1 {
                v = 0;
                break;
            }
            v *= at_p[p as usize];
            if v == 0 {
                break;
            }
        }
        *slot = v;
    }
    g
}

fn with_m(g: &[i64], m: [i64; 3]) -> Vec<i64> {
    let mut out = vec![0i64; g.len()];
    for f in 1..g.len() {
        let mut v = m[0] * g[f];
        if f % 3 == 0 {
            v += m[1] * g[f / 3];
        }
        if f % 9 == 0 {
            v += m[2] * g[f / 9];
        }
        out[f] = v;
    }
    out
}

/// Field counts of the split series at each f ≤ zmax (index 0 unused).
fn split_coefficients(d: i64, ss: &SplitSeries, zmax: usize, sieve: &SpfSieve) -> Result<Vec<i64>> {
    let chi = QuadChar::new(-3 * d)?;
    let excluded = |p: u64| p == 3 || ss.split.contains(&p);
    let main = linear_euler(zmax, sieve, &|p| if !excluded(p) && chi.at(p) == 1 { 2 } else { 0 });
    let mut total: Vec<i64> = with_m(&main, ss.m1);
    for (e, m2) in &ss.mirrors {
        let disc = e.field.disc.unsigned_abs();
        let g = linear_euler(zmax, sieve, &|p| {
            if excluded(p) || disc % p == 0 {
                0
            } else {
                omega_e(&e.field, p).unwrap_or(0) as i64
            }
        });
        for (t, v) in total.iter_mut().zip(with_m(&g, *m2)) {
            *t += 2 * v;
        }
    }
    // total = 2·(c_d 3^ω Φ); the constant term carries an extra ½ for the trivial algebra
    let n = 2 * ss.normalizer(d) as i64;
    let mut out = vec![0i64; zmax + 1];
    for f in 1..=zmax {
        let mut v = total[f];
        if f == 1 {
            v -= n / 2;
        }
        if v % n != 0 || v < 0 {
            return Err(Error::Integrity(format!(
                "coefficient at f = {f} for d = {d}, split {:?} is {v}/{n}, not a nonnegative integer",
                ss.split
            )));
        }
        out[f] = v / n;
    }
    Ok(out)
}

fn passes(f: u64, filters: &[(u64, FFilter)]) -> bool {
    filters.iter().all(|&(p, ff)| match ff {
        FFilter::Coprime => !f.is_multiple_of(p),
        FFilter::Divisible => f.is_multiple_of(p),
    })
}

/// Coefficient of f^{−s} for f = 0..=zmax (index 0 is always 0).
pub fn phi_coefficients(series: &PhiSeries, zmax: u64) -> Result<Vec<u64>> {
    if zmax < 1 {
        return Err(Error::Domain("zmax must be positive".into()));
    }
    let z = zmax as usize;
    let mut out = vec![0i64; z + 1];
    if series.vanishing {
        return Ok(vec![0; z + 1]);
    }
    let sieve = SpfSieve::new(zmax.max(2));
    for t in &series.terms {
        let c = split_coefficients(series.d, &t.series, z, &sieve)?;
        for f in 1..=z {
            if passes(f as u64, &t.filters) {
                out[f] += t.weight * c[f];
            }
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(f, v)| {
            u64::try_from(v).map_err(|_| Error::Integrity(format!("negative combined coefficient {v} at f = {f}, d = {}", series.d)))
        })
        .collect()
}

/// Field counts by conductor from an enumerated list, for comparison.
pub fn enumerated_coefficients(records: &[CubicFieldRecord], d: i64, constraint: &SplittingConstraint, zmax: u64) -> Vec<u64> {
    let mut out = vec![0u64; zmax as usize + 1];
    for r in records {
        if r.resolvent_d == d && r.conductor_f <= zmax && constraint.admits(r.signature, |p| r.splitting_type(p)) {
            out[r.conductor_f as usize] += 1;
        }
    }
    out
}

/// L(1, χ_D) for a fundamental discriminant D ≠ 1, by the finite class-number sums.
pub fn l_one(dd: i64) -> Result<f64> {
    if dd == 1 || !arith::is_fundamental(dd) {
        return Err(Error::Domain(format!("{dd} is not a nontrivial fundamental discriminant")));
    }
    let n = dd.unsigned_abs() as i64;
    if dd < 0 {
        let mut s: i64 = 0;
        for a in 1..n {
            s += arith::kronecker(dd, a)? as i64 * a;
        }
        Ok(-std::f64::consts::PI * s as f64 / (n as f64).powf(1.5))
    } else {
        let mut s = 0.0;
        for a in 1..n {
            let k = arith::kronecker(dd, a)?;
            if k != 0 {
                s += k as f64 * (std::f64::consts::PI * a as f64 / n as f64).sin().ln();
            }
        }
        Ok(-s / (n as f64).sqrt())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PhiResidue {
    /// Leading Laurent coefficient at s = 1.
    pub value: Interval,
    /// 1 normally; 2 for d = −3, where the main product behaves like ζ(s)²
    /// and the field count grows like value·Z·log Z.
    pub pole_order: u32,
}

/// Leading coefficient at s = 1 of the main summand, normalized by 1/(c_d 3^ω).
pub fn phi_residue(series: &PhiSeries, pmax: u64) -> Result<PhiResidue> {
    let d = series.d;
    let (d0, _) = arith::fundamental_split(-3 * d, &arith::factor((3 * d).unsigned_abs()))?;
    let pole_order = if d0 == 1 { 2 } else { 1 };
    if series.vanishing {
        return Ok(PhiResidue { value: Interval::exact(0.0), pole_order });
    }
    let l1 = if d0 == 1 { 1.0 } else { l_one(d0)? };
    let chi = |p: u64| arith::kron_p(d0, p);
    let primes = primes_cached(pmax);
    // ζ(s)L(s,χ) regularization, shared by all terms
    let mut h = 1.0;
    for &p in &primes {
        let x = p as f64;
        let c = chi(p);
        let main = if p != 3 && c == 1 { 1.0 + 2.0 / x } else { 1.0 };
        h *= main * (1.0 - 1.0 / x) * (1.0 - c as f64 / x);
    }
    let tail = 3.0 / pmax as f64;
    let mut total = 0.0;
    for t in &series.terms {
        let ss = &t.series;
        let m1 = ss.m1;
        let m1v = m1[0] as f64 + m1[1] as f64 / 3.0 + m1[2] as f64 / 9.0;
        let mut v = m1v * t.weight as f64 / (2.0 * ss.normalizer(d) as f64);
        for &p in &ss.split {
            if p != 3 && chi(p) == 1 {
                v /= 1.0 + 2.0 / p as f64;
            }
        }
        for &(p, ff) in &t.filters {
            let (e, unit) = if p == 3 {
                (m1v, m1[0] as f64)
            } else if chi(p) == 1 && !ss.split.contains(&p) {
                (1.0 + 2.0 / p as f64, 1.0)
            } else {
                (1.0, 1.0)
            };
            v *= match ff {
                FFilter::Coprime => unit / e,
                FFilter::Divisible => (e - unit) / e,
            };
        }
        total += v;
    }
    let value = total * l1 * h;
    Ok(PhiResidue { value: Interval { value, err: value.abs() * tail }, pole_order })
}

/// Mirror twists are holomorphic at s = 1, so the residue needs no mirror fields.
struct NoMirrors;

impl FieldSource for NoMirrors {
    fn bound(&self) -> u64 {
        u64::MAX
    }

    fn fields_with_disc(&self, _disc: i64) -> Vec<CubicFieldRecord> {
        Vec::new()
    }
}

/// Residue of Φ_{Σ,d} without building the mirror list.
pub fn residue_for(d: i64, constraint: &SplittingConstraint, pmax: u64) -> Result<PhiResidue> {
    phi_residue(&build_phi(d, constraint, &NoMirrors)?, pmax)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{enumerate_fields, SignatureFilter};
    use crate::localmass::{InfSet, TypeSet};
    use std::sync::OnceLock;

    const BOUND: u64 = 400_000;

    fn fields() -> &'static (Vec<CubicFieldRecord>, FieldTable) {
        static F: OnceLock<(Vec<CubicFieldRecord>, FieldTable)> = OnceLock::new();
        F.get_or_init(|| {
            let r = enumerate_fields(BOUND, SignatureFilter::Both).unwrap();
            let t = FieldTable::new(BOUND, &r);
            (r, t)
        })
    }

    fn zmax_for(d: i64) -> u64 {
        arith::isqrt((BOUND / d.unsigned_abs()) as u128) as u64
    }

    #[test]
    fn c_d_values() {
        assert_eq!(c_d(-3), 3);
        assert_eq!(c_d(-23), 1);
        assert_eq!(c_d(5), 3);
        assert_eq!(c_d(1), 1);
    }

    #[test]
    fn m_factor_table() {
        let s = 1.3;
        assert_eq!(m_factor(5, FactorRole::Main, None, s).unwrap(), 1.0 + 2.0 * 3f64.powf(-2.0 * s));
        assert_eq!(m_factor_coeffs(12, FactorRole::Mirror(MirrorRole::Large), None).unwrap(), [1, -1, 0]);
        assert_eq!(m_factor_coeffs(-3, FactorRole::Main, None).unwrap(), [1, 2, 6]);
        let (_, t) = fields();
        // d = −15 ≡ 3 mod 9 would need disc 5: no field; mismatched role is rejected
        let e = t.fields_with_disc(-23).pop().unwrap();
        assert!(m_factor_coeffs(5, FactorRole::Mirror(MirrorRole::Small), Some(&e)).is_err());
    }

    #[test]
    fn l_one_known_values() {
        assert!((l_one(-4).unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-14);
        assert!((l_one(-3).unwrap() - std::f64::consts::PI / (3.0 * 3f64.sqrt())).abs() < 1e-14);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((l_one(5).unwrap() - 2.0 * phi.ln() / 5f64.sqrt()).abs() < 1e-14);
        // h(−23) = 3, w = 2
        assert!((l_one(-23).unwrap() - std::f64::consts::PI * 3.0 / 23f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn mirror_list_for_minus_3() {
        let (_, t) = fields();
        let s = build_phi(-3, &SplittingConstraint::default(), t).unwrap();
        let discs: Vec<i64> = s.terms[0].series.mirrors.iter().map(|(e, _)| e.field.disc).collect();
        assert_eq!(discs, vec![81]);
    }

    #[test]
    fn small_coefficients() {
        let (_, t) = fields();
        let c = phi_coefficients(&build_phi(-3, &SplittingConstraint::default(), t).unwrap(), 10).unwrap();
        assert_eq!(c[1], 0);
        assert_eq!(c[6], 1);
        assert_eq!(c[4], 0);
    }

    #[test]
    fn matches_enumeration_unconstrained() {
        let (r, t) = fields();
        for d in -60i64..=60 {
            if !arith::is_fundamental(d) {
                continue;
            }
            let z = zmax_for(d).min(200);
            let sigma = SplittingConstraint::default();
            let got = phi_coefficients(&build_phi(d, &sigma, t).unwrap(), z).unwrap();
            assert_eq!(got, enumerated_coefficients(r, d, &sigma, z), "d = {d}");
        }
    }

    #[test]
    fn matches_enumeration_each_type_at_7_and_2() {
        let (r, t) = fields();
        for p in [2u64, 7] {
            for ty in SplittingType::ALL {
                let sigma = SplittingConstraint::default().with(p, TypeSet::single(ty));
                for d in [-23i64, -3, 1, 5, -4, 8, -7, 12, 21, -31, 29] {
                    let z = (zmax_for(d * (p * p) as i64)).min(60);
                    let got = phi_coefficients(&build_phi(d, &sigma, t).unwrap(), z).unwrap();
                    assert_eq!(got, enumerated_coefficients(r, d, &sigma, z), "d = {d}, {p}: {ty}");
                }
            }
        }
    }

    #[test]
    fn split_at_3() {
        let (r, t) = fields();
        let sigma = SplittingConstraint::default().with(3, TypeSet::single(SplittingType::S111));
        for d in [1i64, -8, 13, -20, 28] {
            let z = zmax_for(d * 9).min(60);
            let got = phi_coefficients(&build_phi(d, &sigma, t).unwrap(), z).unwrap();
            assert_eq!(got, enumerated_coefficients(r, d, &sigma, z), "d = {d}");
        }
    }

    #[test]
    fn vanishing_and_signature() {
        let (_, t) = fields();
        // (−3/7) = 1 but (5/7) = −1
        let sigma = SplittingConstraint::default().with(7, TypeSet::single(SplittingType::S111));
        assert!(build_phi(5, &sigma, t).unwrap().vanishing);
        assert!(!build_phi(-3, &sigma, t).unwrap().vanishing);
        let real = SplittingConstraint::all(InfSet::REAL);
        assert!(build_phi(-23, &real, t).unwrap().vanishing);
        let s = build_phi(5, &sigma, t).unwrap();
        assert_eq!(phi_residue(&s, 1000).unwrap().value.value, 0.0);
    }

    #[test]
    fn insufficient_source_is_reported() {
        let t = FieldTable::new(100, &[]);
        let e = build_phi(-23, &SplittingConstraint::default(), &t).unwrap_err();
        assert!(e.to_string().contains("621"), "{e}");
    }

    #[test]
    fn residue_scaling_under_complete_splitting() {
        let (_, t) = fields();
        let d = -23;
        let base = phi_residue(&build_phi(d, &SplittingConstraint::default(), t).unwrap(), 100_000).unwrap();
        for p in [2u64, 13] {
            assert_eq!(arith::kron_p(d, p), 1);
            let sigma = SplittingConstraint::default().with(p, TypeSet::single(SplittingType::S111));
            let r = phi_residue(&build_phi(d, &sigma, t).unwrap(), 100_000).unwrap();
            let e = if arith::kron_p(-3 * d, p) == 1 { 1.0 + 2.0 / p as f64 } else { 1.0 };
            assert!((r.value.value / base.value.value - 1.0 / (3.0 * e)).abs() < 1e-12);
        }
    }

    #[test]
    fn residue_tracks_counts() {
        let (r, t) = fields();
        let d = -23;
        let z = 100u64;
        let res = phi_residue(&build_phi(d, &SplittingConstraint::default(), t).unwrap(), 100_000).unwrap();
        let n: u64 = enumerated_coefficients(r, d, &SplittingConstraint::default(), z - 1).iter().sum();
        let pred = res.value.value * z as f64;
        assert!((n as f64 / pred - 1.0).abs() < 0.25, "{n} vs {pred}");
    }
}
