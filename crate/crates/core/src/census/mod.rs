//! Empirical counts under the box, generalized-discriminant and radical
//! orderings, each next to its predicted main term.

pub mod index;

pub use index::{index_integral_by_type, local_index_integral, RingModel};

use serde::Serialize;

use crate::arith;
use crate::constants::{self, ClosedFormIntegrals};
use crate::error::{Error, Result};
use crate::forms::{enumerate_fields, sort_records, CubicFieldRecord, Signature, SignatureFilter, SplittingType};
use crate::invariants::{compare_to_bound, generalized_disc, BoundComparison, InvariantExponents};
use crate::localmass::{self, InfSet, SplittingConstraint, TypeSet};
use crate::resolvent::{self, build_phi, phi_coefficients, FieldSource};
use crate::special::Interval;

/// Reports with more than this fraction of borderline comparisons are flagged.
pub const BORDERLINE_FRACTION: f64 = 1e-6;
/// β/α must exceed this for the X^{5/(6α)} secondary term.
pub const SECONDARY_MIN_RATIO: f64 = 7.0 / 5.0;
/// Residue sums stop once the estimated tail is below this share of the sum.
pub const RESIDUE_TAIL_SHARE: f64 = 0.01;
const RESIDUE_DMAX_CAP: u64 = 1 << 16;
/// |d|·F ≤ RADICAL_SLACK·rad(Disc): the 2- and 3-parts of D·F exceed their
/// radical by at most 4 and 9.
const RADICAL_SLACK: u64 = 36;
/// Largest ceiling enumerated in memory; the records alone take about 1.5 GB here.
pub const MAX_IN_MEMORY_CEILING: u64 = 100_000_000;

/// Every cubic field with 0 < |Disc| < ceiling, sorted by |Disc|.
pub struct Census {
    records: Vec<CubicFieldRecord>,
    ceiling: u64,
}

impl Census {
    pub fn enumerate(ceiling: u64) -> Result<Self> {
        if ceiling > MAX_IN_MEMORY_CEILING {
            return Err(Error::Capacity { what: "in-memory enumeration".into(), requested: ceiling, limit: MAX_IN_MEMORY_CEILING });
        }
        Ok(Census { records: enumerate_fields(ceiling, SignatureFilter::Both)?, ceiling })
    }

    /// `records` must be complete below `ceiling`; entries at or above it are dropped.
    pub fn from_records(mut records: Vec<CubicFieldRecord>, ceiling: u64) -> Self {
        records.retain(|r| r.disc.unsigned_abs() < ceiling);
        sort_records(&mut records);
        Census { records, ceiling }
    }

    pub fn records(&self) -> &[CubicFieldRecord] {
        &self.records
    }

    pub fn ceiling(&self) -> u64 {
        self.ceiling
    }

    fn require(&self, need: f64, what: &str) -> Result<()> {
        if need > self.ceiling as f64 {
            return Err(Error::Capacity {
                what: format!("enumeration ceiling for {what}"),
                requested: need.ceil() as u64,
                limit: self.ceiling,
            });
        }
        Ok(())
    }

    fn below(&self, bound: u64) -> &[CubicFieldRecord] {
        let n = self.records.partition_point(|r| r.disc.unsigned_abs() < bound);
        &self.records[..n]
    }
}

impl FieldSource for Census {
    fn bound(&self) -> u64 {
        self.ceiling - 1
    }

    fn fields_with_disc(&self, disc: i64) -> Vec<CubicFieldRecord> {
        let a = disc.unsigned_abs();
        let lo = self.records.partition_point(|r| r.disc.unsigned_abs() < a);
        self.records[lo..].iter().take_while(|r| r.disc.unsigned_abs() == a).filter(|r| r.disc == disc).copied().collect()
    }
}

fn admits(c: &SplittingConstraint, r: &CubicFieldRecord) -> bool {
    c.admits(r.signature, |p| r.splitting_type(p))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum CountOrdering {
    /// |D| < Y and F < Z; the bound recorded in the report is Y.
    Rect {
        y: f64,
        z: f64,
    },
    Generalized {
        alpha: f64,
        beta: f64,
    },
    Radical,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct DyadicPoint {
    pub bound: f64,
    pub count: u64,
    pub predicted: f64,
}

impl DyadicPoint {
    pub fn ratio(&self) -> f64 {
        self.count as f64 / self.predicted
    }
}

#[derive(Clone, Debug)]
pub struct CountReport {
    pub ordering: CountOrdering,
    pub constraint: SplittingConstraint,
    pub bound: f64,
    pub count: u64,
    pub borderline: u64,
    pub unreliable: bool,
    pub predicted_main: Interval,
    pub predicted_secondary: Option<Interval>,
    /// The bound and its halvings, largest first.
    pub dyadic: Vec<DyadicPoint>,
}

impl CountReport {
    pub fn ratio(&self) -> f64 {
        self.count as f64 / self.predicted_main.value
    }
}

const DYADIC_STEPS: i32 = 4;

fn dyadic<C, P>(bound: f64, mut count: C, mut predict: P) -> Result<Vec<DyadicPoint>>
where
    C: FnMut(f64) -> Result<u64>,
    P: FnMut(f64) -> Result<f64>,
{
    (0..DYADIC_STEPS)
        .map(|k| {
            let b = bound / 2f64.powi(k);
            Ok(DyadicPoint { bound: b, count: count(b)?, predicted: predict(b)? })
        })
        .collect()
}

// --- box ordering ---

fn rect_count(census: &Census, c: &SplittingConstraint, y: f64, z: f64) -> u64 {
    census.records.iter().filter(|r| (r.resolvent_d.unsigned_abs() as f64) < y && (r.conductor_f as f64) < z && admits(c, r)).count() as u64
}

/// #{K ∈ Σ : |D| < Y, F < Z} against Res L₁(Σ)·Y·Z.
pub fn count_rect(census: &Census, constraint: &SplittingConstraint, y: f64, z: f64, pmax: u64) -> Result<CountReport> {
    constraint.validate()?;
    if !(y > 0.0 && z > 0.0) {
        return Err(Error::Domain(format!("box bounds must be positive, got ({y}, {z})")));
    }
    census.require(y * z * z, "|D| < Y, F < Z")?;
    let res = constants::residue_l1(constraint, pmax)?;
    let count = rect_count(census, constraint, y, z);
    let pts = dyadic(y, |b| Ok(rect_count(census, constraint, b, z)), |b| Ok(res.value * b * z))?;
    Ok(CountReport {
        ordering: CountOrdering::Rect { y, z },
        constraint: constraint.clone(),
        bound: y,
        count,
        borderline: 0,
        unreliable: false,
        predicted_main: res.scale(y * z),
        predicted_secondary: None,
        dyadic: pts,
    })
}

/// The two main-term expressions for the box count: Σ_{f<Z} C₁(Σ,f)·Y and
/// Σ_{|d|<Y} Res Φ_{Σ,d}·Z (d = −3 excluded from the latter).
pub fn rect_main_terms(constraint: &SplittingConstraint, y: f64, z: f64, pmax: u64) -> Result<(f64, f64)> {
    let mut by_f = 0.0;
    for f in 1..(z.ceil() as u64) {
        if (f as f64) < z && constants::is_admissible_f(f) {
            by_f += constants::c1_of_f(constraint, f)?.value;
        }
    }
    let mut by_d = 0.0;
    for d in fundamental_discs(constraint.infinite, y.ceil() as u64) {
        if (d.unsigned_abs() as f64) < y && d != -3 {
            by_d += resolvent::residue_for(d, constraint, pmax)?.value.value;
        }
    }
    Ok((by_f * y, by_d * z))
}

/// Fundamental discriminants with |d| < n and sign admitted by `inf`, ordered by |d|.
pub fn fundamental_discs(inf: InfSet, n: u64) -> Vec<i64> {
    let mut out = Vec::new();
    for a in 1..n as i64 {
        if inf.real && arith::is_fundamental(a) {
            out.push(a);
        }
        if inf.complex && arith::is_fundamental(-a) {
            out.push(-a);
        }
    }
    out
}

/// (1/Y)Σ_{|d|<Y, d ≠ −3} Res Φ_{Σ^all,d}, and the local-mass value it tends to.
pub fn average_residue(inf: InfSet, y: u64, pmax: u64) -> Result<(f64, Interval)> {
    let sigma = SplittingConstraint::all(inf);
    let mut s = 0.0;
    for d in fundamental_discs(inf, y) {
        if d != -3 {
            s += resolvent::residue_for(d, &sigma, pmax)?.value.value;
        }
    }
    Ok((s / y as f64, constants::residue_l1(&sigma, pmax)?))
}

// --- generalized discriminant ---

struct Tally {
    count: u64,
    borderline: u64,
}

/// Worst-case |Disc| = |D|F² over |D|^α F^β < X with |D| ≥ 3.
/// Discriminant ceiling a census needs to count |D|^α F^β < X.
pub fn generalized_need(e: InvariantExponents, x: f64) -> f64 {
    // F_max² computed in one power so that integral cases stay exact
    let f_max_sq = (x / 3f64.powf(e.alpha)).max(0.0).powf(2.0 / e.beta);
    x.powf(1.0 / e.alpha).max(3.0 * f_max_sq)
}

/// Cyclic fields (D = 1) are counted from their Φ₁ coefficients when the
/// census does not reach F = X^{1/β}.
struct CyclicPart {
    coeffs: Vec<u64>,
}

impl CyclicPart {
    fn build(census: &Census, c: &SplittingConstraint, e: InvariantExponents, x: f64) -> Result<Option<Self>> {
        let fmax = x.powf(1.0 / e.beta);
        if fmax * fmax <= census.ceiling as f64 {
            return Ok(None);
        }
        Self::from_series(census, c, fmax).map(Some)
    }

    fn from_series(census: &Census, c: &SplittingConstraint, fmax: f64) -> Result<Self> {
        let series = build_phi(1, c, census)?;
        Ok(CyclicPart { coeffs: phi_coefficients(&series, fmax.ceil() as u64)? })
    }

    fn tally(&self, e: InvariantExponents, x: f64, t: &mut Tally) {
        for (f, &n) in self.coeffs.iter().enumerate().skip(1) {
            if n == 0 {
                continue;
            }
            match compare_to_bound(generalized_disc(1, f as u64, e), x) {
                BoundComparison::Below => t.count += n,
                BoundComparison::Borderline => t.borderline += n,
                BoundComparison::Above => {}
            }
        }
    }
}

fn generalized_tally(census: &Census, c: &SplittingConstraint, e: InvariantExponents, x: f64, cyclic: Option<&CyclicPart>) -> Tally {
    let mut t = Tally { count: 0, borderline: 0 };
    for r in &census.records {
        if cyclic.is_some() && r.resolvent_d == 1 {
            continue;
        }
        match compare_to_bound(generalized_disc(r.resolvent_d, r.conductor_f, e), x) {
            BoundComparison::Below if admits(c, r) => t.count += 1,
            BoundComparison::Borderline if admits(c, r) => t.borderline += 1,
            _ => {}
        }
    }
    if let Some(cy) = cyclic {
        cy.tally(e, x, &mut t);
    }
    t
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// α < β: L₁(Σ, β/α)·X^{1/α}
    PowerSeries,
    /// α = β: Res L₁(Σ)·(1/α)·X^{1/α} log X
    Logarithmic,
    /// α > β: Σ_d Res Φ_{Σ,d}·(X/|d|^α)^{1/β}
    ResidueSum,
}

pub fn regime(e: InvariantExponents) -> Regime {
    let r = e.ratio();
    if (r - 1.0).abs() < 1e-12 {
        Regime::Logarithmic
    } else if r > 1.0 {
        Regime::PowerSeries
    } else {
        Regime::ResidueSum
    }
}

/// Predicted main term as a function of X, prepared once.
enum MainTerm {
    Power { l1: Interval, inv_alpha: f64 },
    Log { res: Interval, inv_alpha: f64 },
    Residues { terms: Vec<(f64, f64, u32)>, tail_density: f64, dmax: f64, e: InvariantExponents },
}

impl MainTerm {
    fn new(c: &SplittingConstraint, e: InvariantExponents, pmax: u64) -> Result<Self> {
        Ok(match regime(e) {
            Regime::PowerSeries => MainTerm::Power { l1: constants::l1(c, e.ratio(), pmax)?, inv_alpha: 1.0 / e.alpha },
            Regime::Logarithmic => MainTerm::Log { res: constants::residue_l1(c, pmax)?, inv_alpha: 1.0 / e.alpha },
            Regime::ResidueSum => residue_terms(c, e, pmax)?,
        })
    }

    fn at(&self, x: f64) -> Interval {
        match self {
            MainTerm::Power { l1, inv_alpha } => l1.scale(x.powf(*inv_alpha)),
            MainTerm::Log { res, inv_alpha } => res.scale(inv_alpha * x.powf(*inv_alpha) * x.ln()),
            MainTerm::Residues { terms, tail_density, dmax, e } => {
                let (mut v, mut err) = (0.0, 0.0);
                for &(ad, res, order) in terms {
                    let z = (x / ad.powf(e.alpha)).powf(1.0 / e.beta);
                    let w = if order == 2 { z * z.max(1.0).ln() } else { z };
                    v += res * w;
                    err += res.abs() * w * 3e-4;
                }
                let g = e.alpha / e.beta;
                let tail = tail_density * x.powf(1.0 / e.beta) * dmax.powf(1.0 - g) / (g - 1.0);
                Interval { value: v + tail, err: err + tail }
            }
        }
    }
}

/// Residues for |d| up to a d_max whose estimated tail (using the running
/// average residue as density) is below RESIDUE_TAIL_SHARE of the sum.
fn residue_terms(c: &SplittingConstraint, e: InvariantExponents, pmax: u64) -> Result<MainTerm> {
    let g = e.alpha / e.beta;
    let mut terms = Vec::new();
    let mut weighted = 0.0;
    let mut plain = 0.0;
    let mut next = 1u64;
    let mut dmax = 64u64;
    loop {
        for a in next..dmax {
            for d in [a as i64, -(a as i64)] {
                let sig_ok = if d > 0 { c.infinite.real } else { c.infinite.complex };
                if !sig_ok || !arith::is_fundamental(d) {
                    continue;
                }
                let r = resolvent::residue_for(d, c, pmax)?;
                let v = r.value.value;
                if v != 0.0 {
                    terms.push((a as f64, v, r.pole_order));
                }
                weighted += v * (a as f64).powf(-g);
                if d != -3 {
                    plain += v;
                }
            }
        }
        next = dmax;
        let density = plain / dmax as f64;
        let tail = density * (dmax as f64).powf(1.0 - g) / (g - 1.0);
        if tail <= RESIDUE_TAIL_SHARE * weighted || dmax >= RESIDUE_DMAX_CAP {
            return Ok(MainTerm::Residues { terms, tail_density: density, dmax: dmax as f64, e });
        }
        dmax *= 2;
    }
}

/// #{K ∈ Σ : |D|^α F^β < X} against the main term of its regime.
pub fn count_generalized(
    census: &Census,
    constraint: &SplittingConstraint,
    e: InvariantExponents,
    x: f64,
    pmax: u64,
) -> Result<CountReport> {
    constraint.validate()?;
    if !(x > 0.0) {
        return Err(Error::Domain(format!("bound must be positive, got {x}")));
    }
    census.require(generalized_need(e, x), "|D|^a F^b < X")?;
    let cyclic = CyclicPart::build(census, constraint, e, x)?;
    let main = MainTerm::new(constraint, e, pmax)?;
    let t = generalized_tally(census, constraint, e, x, cyclic.as_ref());
    let secondary = secondary_term(constraint, e, x, pmax);
    let pts = dyadic(x, |b| Ok(generalized_tally(census, constraint, e, b, cyclic.as_ref()).count), |b| Ok(main.at(b).value))?;
    let seen = (t.count + t.borderline).max(1) as f64;
    Ok(CountReport {
        ordering: CountOrdering::Generalized { alpha: e.alpha, beta: e.beta },
        constraint: constraint.clone(),
        bound: x,
        count: t.count,
        borderline: t.borderline,
        unreliable: t.borderline as f64 / seen > BORDERLINE_FRACTION,
        predicted_main: main.at(x),
        predicted_secondary: secondary,
        dyadic: pts,
    })
}

/// L₂(Σ, 5β/(6α))·X^{5/(6α)} where the series converges, else None.
fn secondary_term(c: &SplittingConstraint, e: InvariantExponents, x: f64, pmax: u64) -> Option<Interval> {
    if e.ratio() <= SECONDARY_MIN_RATIO {
        return None;
    }
    let l2 = constants::l2(c, 5.0 * e.ratio() / 6.0, &ClosedFormIntegrals, pmax).ok()?;
    Some(l2.scale(x.powf(5.0 / (6.0 * e.alpha))))
}

// --- radical ---

fn sig_filter(sig: Signature) -> InfSet {
    match sig {
        Signature::TotallyReal => InfSet::REAL,
        Signature::OneComplexPair => InfSet::COMPLEX,
    }
}

/// Fields with rad(Disc) below `bound` that the census cannot see: |Disc| at or
/// above the ceiling. Counted per (d, f) from the Φ_d coefficients.
struct RadicalSupplement {
    /// (rad(|d|·f), number of fields)
    entries: Vec<(u64, u64)>,
}

impl RadicalSupplement {
    fn build(census: &Census, sig: Signature, x: f64) -> Result<Self> {
        let ceil = census.ceiling as f64;
        let big = RADICAL_SLACK as f64 * x;
        let sigma = SplittingConstraint::all(sig_filter(sig));
        let mut entries = Vec::new();
        let dlim = (big * big / ceil).ceil() as u64;
        for d in fundamental_discs(sig_filter(sig), dlim + 1) {
            let ad = d.unsigned_abs() as f64;
            let fmin = (ceil / ad).sqrt().floor().max(1.0) as u64;
            let fmax = (big / ad).floor() as u64;
            if fmax < fmin {
                continue;
            }
            let coeffs = phi_coefficients(&build_phi(d, &sigma, census)?, fmax)?;
            for (f, &n) in coeffs.iter().enumerate().skip(fmin as usize) {
                let disc = d.unsigned_abs() as u128 * (f as u128) * (f as u128);
                if n > 0 && disc >= census.ceiling as u128 {
                    entries.push((arith::radical(d.unsigned_abs() * f as u64), n));
                }
            }
        }
        Ok(RadicalSupplement { entries })
    }

    fn count_below(&self, x: f64) -> u64 {
        self.entries.iter().filter(|&&(r, _)| (r as f64) < x).map(|&(_, n)| n).sum()
    }
}

/// rad|Disc| from (D, F) without factoring Disc: D is squarefree away from 2.
fn record_radical(r: &CubicFieldRecord) -> u64 {
    let d = r.resolvent_d.unsigned_abs();
    let rd = if d.is_multiple_of(8) {
        d / 4
    } else if d.is_multiple_of(4) {
        d / 2
    } else {
        d
    };
    let rf = arith::radical(r.conductor_f);
    rd / arith::gcd_u64(rd, rf) * rf
}

/// Sorted radicals of one signature, so each bound is a binary search.
fn sorted_radicals(census: &Census, sig: Signature) -> Vec<u64> {
    let mut v: Vec<u64> = census.records.iter().filter(|r| r.signature == sig).map(record_radical).collect();
    v.sort_unstable();
    v
}

fn radical_count(radicals: &[u64], x: f64, sup: &RadicalSupplement) -> u64 {
    radicals.partition_point(|&r| (r as f64) < x) as u64 + sup.count_below(x)
}

/// #{K of signature sig : rad|Disc(K)| < X} against c±·X log X.
pub fn count_radical(census: &Census, sig: Signature, x: f64, pmax: u64) -> Result<CountReport> {
    Ok(count_radical_series(census, sig, &[x], pmax)?.remove(0))
}

/// count_radical at several bounds, sharing the beyond-ceiling supplement.
pub fn count_radical_series(census: &Census, sig: Signature, xs: &[f64], pmax: u64) -> Result<Vec<CountReport>> {
    let top = xs.iter().copied().fold(f64::NAN, f64::max);
    if xs.is_empty() || !(xs.iter().all(|&x| x > 1.0)) {
        return Err(Error::Domain(format!("radical bounds must exceed 1, got {xs:?}")));
    }
    census.require(top * top / 3.0, "rad|Disc| < X")?;
    let sup = RadicalSupplement::build(census, sig, top)?;
    let radicals = sorted_radicals(census, sig);
    let c = constants::radical_constant(sig, pmax);
    xs.iter()
        .map(|&x| {
            let pts = dyadic(x, |b| Ok(radical_count(&radicals, b, &sup)), |b| Ok(c.value * b * b.ln()))?;
            Ok(CountReport {
                ordering: CountOrdering::Radical,
                constraint: SplittingConstraint::all(sig_filter(sig)),
                bound: x,
                count: pts[0].count,
                borderline: 0,
                unreliable: false,
                predicted_main: c.scale(x * x.ln()),
                predicted_secondary: None,
                dyadic: pts,
            })
        })
        .collect()
}

// --- secondary term ---

#[derive(Clone, Copy, Debug, Serialize)]
pub struct FitPoint {
    pub x: f64,
    pub count: u64,
    pub main: f64,
    /// count − main − fitted·X^{5/(6α)}
    pub residual: f64,
}

impl FitPoint {
    pub fn rel_dev_main(&self) -> f64 {
        (self.count as f64 - self.main).abs() / self.count as f64
    }

    pub fn rel_dev_fitted(&self) -> f64 {
        self.residual.abs() / self.count as f64
    }
}

#[derive(Clone, Debug)]
pub struct SecondaryFit {
    pub coefficient: f64,
    pub std_err: f64,
    /// 95% band from Student's t with n − 1 degrees of freedom.
    pub band: (f64, f64),
    pub points: Vec<FitPoint>,
    /// L₂-based coefficient, when the series converges.
    pub predicted: Option<Interval>,
}

/// Least squares of (count − main) against X^{5/(6α)} through the origin.
pub fn fit_secondary(
    census: &Census,
    constraint: &SplittingConstraint,
    e: InvariantExponents,
    samples: &[f64],
    pmax: u64,
) -> Result<SecondaryFit> {
    use statrs::distribution::{ContinuousCDF, StudentsT};
    if e.ratio() <= SECONDARY_MIN_RATIO {
        return Err(Error::Domain(format!("the X^(5/(6a)) secondary term needs b/a > 7/5 (got {:.4})", e.ratio())));
    }
    if samples.len() < 4 || samples.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("need at least 4 strictly increasing sample bounds".into()));
    }
    let k = 5.0 / (6.0 * e.alpha);
    let mut raw = Vec::new();
    for &x in samples {
        let r = count_generalized(census, constraint, e, x, pmax)?;
        raw.push((x, r.count, r.predicted_main.value));
    }
    let (mut sty, mut stt) = (0.0, 0.0);
    for &(x, n, m) in &raw {
        let t = x.powf(k);
        sty += t * (n as f64 - m);
        stt += t * t;
    }
    let coefficient = sty / stt;
    let points: Vec<FitPoint> =
        raw.iter().map(|&(x, count, main)| FitPoint { x, count, main, residual: count as f64 - main - coefficient * x.powf(k) }).collect();
    let dof = (points.len() - 1) as f64;
    let ssr: f64 = points.iter().map(|p| p.residual * p.residual).sum();
    let std_err = (ssr / dof / stt).sqrt();
    let q = StudentsT::new(0.0, 1.0, dof).map_err(|e| Error::Domain(e.to_string()))?.inverse_cdf(0.975);
    let predicted = constants::l2(constraint, 5.0 * e.ratio() / 6.0, &ClosedFormIntegrals, pmax).ok();
    Ok(SecondaryFit { coefficient, std_err, band: (coefficient - q * std_err, coefficient + q * std_err), points, predicted })
}

// --- independence of primes ---

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TypeShare {
    pub splitting: SplittingType,
    pub count: u64,
    pub empirical: f64,
    pub predicted: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Subfamily {
    pub d: i64,
    pub total: u64,
    pub split: u64,
}

#[derive(Clone, Debug)]
pub struct IndependenceReport {
    pub p: u64,
    pub total: u64,
    pub shares: Vec<TypeShare>,
    /// Independence is expected only when α ≤ β.
    pub expected: bool,
    pub subfamily: Option<Subfamily>,
}

impl IndependenceReport {
    pub fn share(&self, t: SplittingType) -> Option<&TypeShare> {
        self.shares.iter().find(|s| s.splitting == t)
    }
}

fn type_index(t: SplittingType) -> usize {
    SplittingType::ALL.iter().position(|&u| u == t).expect("listed")
}

/// Local density of each type at p under |D|^α F^β: weight |D|_p |F|_p^{β/α}/|Aut|.
pub fn local_densities(p: u64, allowed: TypeSet, e: InvariantExponents) -> Vec<(SplittingType, f64)> {
    let w = localmass::disc_weight(p, e.ratio());
    let total = localmass::mass_sum(p, allowed, &w);
    SplittingType::ALL
        .iter()
        .map(|&t| {
            let m = if allowed.contains(t) { localmass::mass_sum(p, TypeSet::single(t), &w) } else { 0.0 };
            (t, m / total)
        })
        .collect()
}

/// Splitting-type frequencies at p among K ∈ Σ with |D|^α F^β < X, against
/// the product prediction; optionally the split count inside D = d.
pub fn independence_report(
    census: &Census,
    p: u64,
    constraint: &SplittingConstraint,
    e: InvariantExponents,
    x: f64,
    subfamily_d: Option<i64>,
) -> Result<IndependenceReport> {
    constraint.validate()?;
    if !arith::is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    census.require(generalized_need(e, x), "|D|^a F^b < X")?;
    let fmax = x.powf(1.0 / e.beta);
    let cyclic_apart = fmax * fmax > census.ceiling as f64;
    let mut counts = [0u64; 5];
    let mut sub = subfamily_d.map(|d| Subfamily { d, total: 0, split: 0 });
    for r in &census.records {
        if (cyclic_apart && r.resolvent_d == 1)
            || compare_to_bound(generalized_disc(r.resolvent_d, r.conductor_f, e), x) != BoundComparison::Below
            || !admits(constraint, r)
        {
            continue;
        }
        let t = r.splitting_type(p);
        counts[type_index(t)] += 1;
        if let Some(s) = sub.as_mut() {
            if r.resolvent_d == s.d {
                s.total += 1;
                s.split += u64::from(t == SplittingType::S111);
            }
        }
    }
    if cyclic_apart {
        // cyclic fields by type at p, from the constrained Φ₁ coefficients
        for t in constraint.allowed(p).types() {
            let mut tally = Tally { count: 0, borderline: 0 };
            CyclicPart::from_series(census, &constraint.clone().with(p, TypeSet::single(t)), fmax)?.tally(e, x, &mut tally);
            counts[type_index(t)] += tally.count;
            if let Some(s) = sub.as_mut().filter(|s| s.d == 1) {
                s.total += tally.count;
                s.split += if t == SplittingType::S111 { tally.count } else { 0 };
            }
        }
    }
    let total: u64 = counts.iter().sum();
    let shares = local_densities(p, constraint.allowed(p), e)
        .into_iter()
        .zip(counts)
        .map(|((t, predicted), count)| TypeShare { splitting: t, count, empirical: count as f64 / total.max(1) as f64, predicted })
        .collect();
    Ok(IndependenceReport { p, total, shares, expected: e.alpha <= e.beta, subfamily: sub })
}

// --- uniformity ---

/// max_f f²·#{K : |Disc| < X, F = f}/X^{exponent}, with the maximizing f.
pub fn uniformity(census: &Census, x: u64, exponent: f64) -> Result<(f64, u64)> {
    census.require(x as f64, "uniformity scan")?;
    let mut by_f = std::collections::BTreeMap::new();
    for r in census.below(x) {
        *by_f.entry(r.conductor_f).or_insert(0u64) += 1;
    }
    let xe = (x as f64).powf(exponent);
    Ok(by_f.into_iter().map(|(f, n)| ((f as f64) * (f as f64) * n as f64 / xe, f)).fold((0.0, 1), |a, b| if b.0 > a.0 { b } else { a }))
}
