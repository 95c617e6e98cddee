//! Acceptance checks 1–10, parameterized by acceptance.toml. Property suites
//! (check 11) live with the tests.

use std::path::Path;
use std::time::Instant;

use serde::Deserialize;

use crate::arith;
use crate::census::{self, Census};
use crate::constants;
use crate::error::{Error, Result};
use crate::forms::{enumerate_fields, Signature, SignatureFilter, SplittingType};
use crate::invariants::InvariantExponents;
use crate::localmass::{self, InfSet, SplittingConstraint, TypeSet};
use crate::oracle;
use crate::resolvent::{self, build_phi, phi_coefficients};
use crate::special::zeta;

/// The acceptance.toml shipped at the workspace root.
pub const DEFAULT_CONFIG: &str = include_str!("../../../acceptance.toml");

#[derive(Clone, Debug, Deserialize)]
pub struct Config {
    pub version: String,
    pub pmax: u64,
    /// Checks known to miss at desk scale; reported as FAIL but not fatal.
    #[serde(default)]
    pub known_failures: Vec<u32>,
    pub oracle: OracleCfg,
    pub dh: DhCfg,
    pub phi_exact: PhiCfg,
    pub phi_split: PhiSplitCfg,
    pub euler_s3: EulerCfg,
    pub secondary: SecondaryCfg,
    pub avg_residue: AvgResidueCfg,
    pub radical: RadicalCfg,
    pub independence: IndependenceCfg,
    pub census: CensusCfg,
}

#[derive(Clone, Debug, Deserialize)]
pub struct OracleCfg {
    pub bound: u64,
}

#[derive(Clone, Debug, Deserialize)]
pub struct DhCfg {
    pub bound: u64,
    pub real: [f64; 2],
    pub complex: [f64; 2],
}

#[derive(Clone, Debug, Deserialize)]
pub struct PhiCfg {
    pub dmax: u64,
    pub zmax: u64,
}

#[derive(Clone, Debug, Deserialize)]
pub struct PhiSplitCfg {
    pub prime: u64,
    pub dmax: u64,
    pub zmax: u64,
}

#[derive(Clone, Debug, Deserialize)]
pub struct EulerCfg {
    pub primes: Vec<u64>,
    pub tol: f64,
}

#[derive(Clone, Debug, Deserialize)]
pub struct SecondaryCfg {
    pub log10_bounds: Vec<f64>,
    pub max_rel_dev: f64,
}

#[derive(Clone, Debug, Deserialize)]
pub struct AvgResidueCfg {
    pub y: u64,
    pub pmax: u64,
    pub tol: f64,
}

#[derive(Clone, Debug, Deserialize)]
pub struct RadicalCfg {
    pub log10_bounds: Vec<f64>,
    pub band: [f64; 2],
}

#[derive(Clone, Debug, Deserialize)]
pub struct IndependenceCfg {
    pub bound: u64,
    pub prime: u64,
    pub tol: f64,
    pub subfamily_d: i64,
}

#[derive(Clone, Debug, Deserialize)]
pub struct CensusCfg {
    pub rect_bounds: [f64; 2],
    pub rect_band: [f64; 2],
    pub rect_consistency_y: f64,
    pub rect_consistency_tol: f64,
    pub residue_sum_bound: f64,
    pub residue_sum_tol: f64,
    pub log_independence_bound: f64,
    pub log_independence_tol: f64,
    pub uniformity_bound: u64,
    pub uniformity_max: f64,
}

impl Config {
    pub fn parse(text: &str, name: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Load { path: name.into(), reason: e.to_string() })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Load { path: path.into(), reason: e.to_string() })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn builtin() -> Self {
        Self::parse(DEFAULT_CONFIG, "acceptance.toml").expect("bundled acceptance.toml parses")
    }

    /// Smallest census ceiling that serves every census-backed check.
    pub fn required_ceiling(&self) -> u64 {
        let phi = |d: u64, z: u64| d * z * z + 1;
        let rad = self.radical.log10_bounds.iter().map(|&e| (10f64.powf(e).powi(2) / 3.0).ceil() as u64 + 1).max().unwrap_or(0);
        let sec = self.secondary.log10_bounds.iter().map(|&e| 10f64.powf(e).ceil() as u64 + 1).max().unwrap_or(0);
        [
            self.dh.bound + 1,
            phi(self.phi_exact.dmax, self.phi_exact.zmax),
            phi(self.phi_split.dmax, self.phi_split.zmax),
            sec,
            rad,
            self.independence.bound + 1,
        ]
        .into_iter()
        .max()
        .unwrap_or(1)
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let v = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{v} [{}] {} ({:.1}s): {}", self.id, self.name, self.seconds, self.detail)
    }
}

fn timed(id: u32, name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> Outcome {
    let t = Instant::now();
    let (pass, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    Outcome { id, name, pass, detail, seconds: t.elapsed().as_secs_f64() }
}

fn in_band(x: f64, b: [f64; 2]) -> bool {
    x >= b[0] && x <= b[1]
}

pub fn check_oracle(cfg: &Config) -> Outcome {
    timed(1, "enumerator equals polynomial oracle", || {
        let b = cfg.oracle.bound;
        let mut ours: Vec<(i64, Signature)> = enumerate_fields(b, SignatureFilter::Both)?.iter().map(|r| (r.disc, r.signature)).collect();
        let mut theirs: Vec<(i64, Signature)> = oracle::hunter_oracle(b)?.iter().map(|r| (r.disc, r.signature)).collect();
        ours.sort_unstable();
        theirs.sort_unstable();
        Ok((ours == theirs, format!("X={b} enumerated={} oracle={}", ours.len(), theirs.len())))
    })
}

pub fn check_dh(cfg: &Config, census: &Census) -> Outcome {
    timed(2, "leading constants 1/(12ζ(3)), 1/(4ζ(3))", || {
        let x = cfg.dh.bound;
        let recs = &census.records()[..census.records().partition_point(|r| r.disc.unsigned_abs() < x)];
        let np = recs.iter().filter(|r| r.disc > 0).count() as f64;
        let nm = recs.iter().filter(|r| r.disc < 0).count() as f64;
        let rp = np / (x as f64 / (12.0 * zeta(3.0)));
        let rm = nm / (x as f64 / (4.0 * zeta(3.0)));
        let pass = in_band(rp, cfg.dh.real) && in_band(rm, cfg.dh.complex);
        Ok((pass, format!("X={x} N+={np} ratio+={rp:.4} in {:?}; N-={nm} ratio-={rm:.4} in {:?}", cfg.dh.real, cfg.dh.complex)))
    })
}

/// Fundamental d with 0 < |d| ≤ dmax, ascending |d|, positive first.
fn small_fundamental(dmax: u64) -> Vec<i64> {
    census::fundamental_discs(InfSet::BOTH, dmax + 1)
}

fn coefficient_match(census: &Census, d: i64, c: &SplittingConstraint, zmax: u64) -> Result<std::result::Result<(), String>> {
    let predicted = phi_coefficients(&build_phi(d, c, census)?, zmax)?;
    let lim = d.unsigned_abs() * zmax * zmax + 1;
    let recs = &census.records()[..census.records().partition_point(|r| r.disc.unsigned_abs() < lim)];
    let counted = resolvent::enumerated_coefficients(recs, d, c, zmax);
    match predicted.iter().zip(&counted).position(|(a, b)| a != b) {
        None => Ok(Ok(())),
        Some(f) => Ok(Err(format!("d={d} f={f}: series {} vs fields {}", predicted[f], counted[f]))),
    }
}

pub fn check_phi_exact(cfg: &Config, census: &Census) -> Outcome {
    timed(3, "resolvent series coefficients equal field counts", || {
        let (dmax, zmax) = (cfg.phi_exact.dmax, cfg.phi_exact.zmax);
        let all = SplittingConstraint::default();
        let ds = small_fundamental(dmax);
        let mut bad = Vec::new();
        for &d in &ds {
            if let Err(m) = coefficient_match(census, d, &all, zmax)? {
                bad.push(m);
            }
        }
        Ok((
            bad.is_empty(),
            format!(
                "{} discriminants |d|<={dmax}, f<={zmax}; mismatches: {}",
                ds.len(),
                if bad.is_empty() { "none".into() } else { bad.join("; ") }
            ),
        ))
    })
}

pub fn check_phi_split(cfg: &Config, census: &Census) -> Outcome {
    timed(4, "constrained series coefficients equal constrained counts", || {
        let PhiSplitCfg { prime: p, dmax, zmax } = cfg.phi_split;
        let c = SplittingConstraint::default().with(p, TypeSet::single(SplittingType::S111));
        let (mut matched, mut zero, mut bad) = (0, 0, Vec::new());
        for d in small_fundamental(dmax) {
            let r = coefficient_match(census, d, &c, zmax)?;
            if arith::kron_p(d, p) == 1 {
                matched += 1;
            } else {
                let s = build_phi(d, &c, census)?;
                if !s.vanishing {
                    bad.push(format!("d={d}: series not identically 0"));
                }
                zero += 1;
            }
            if let Err(m) = r {
                bad.push(m);
            }
        }
        Ok((
            bad.is_empty(),
            format!(
                "p={p}: {matched} d with (d/p)=1 matched, {zero} vanishing; problems: {}",
                if bad.is_empty() { "none".into() } else { bad.join("; ") }
            ),
        ))
    })
}

pub fn check_local_constants() -> Outcome {
    timed(5, "local radical masses at 2 and 3", || {
        let c2 = localmass::radical_local_constant(2);
        let c3 = localmass::radical_local_constant(3);
        let pass = c2 == localmass::Q::new(3, 1) && c3 == localmass::Q::new(11, 3);
        Ok((pass, format!("C(2)={c2} C(3)={c3}")))
    })
}

pub fn check_euler_s3(cfg: &Config) -> Outcome {
    timed(6, "L1 Euler factors at s=4/3", || {
        let mut worst: f64 = 0.0;
        for &p in &cfg.euler_s3.primes {
            let x = p as f64;
            let got = constants::l1_local_factor(TypeSet::ALL, p, 4.0 / 3.0);
            let want = (1.0 - 1.0 / x) * (1.0 + 1.0 / x + x.powf(-4.0 / 3.0));
            worst = worst.max((got - want).abs());
        }
        Ok((
            worst <= cfg.euler_s3.tol,
            format!("primes {:?}: max |diff| = {worst:.2e} (tol {:.0e})", cfg.euler_s3.primes, cfg.euler_s3.tol),
        ))
    })
}

pub fn check_secondary(cfg: &Config, census: &Census) -> Outcome {
    timed(7, "negative X^(5/6) term at alpha=1, beta=2", || {
        let e = InvariantExponents::new(1.0, 2.0)?;
        let xs: Vec<f64> = cfg.secondary.log10_bounds.iter().map(|&k| 10f64.powf(k)).collect();
        let mut pass = true;
        let mut parts = Vec::new();
        for (name, inf) in [("real", InfSet::REAL), ("complex", InfSet::COMPLEX)] {
            let fit = census::fit_secondary(census, &SplittingConstraint::all(inf), e, &xs, cfg.pmax)?;
            let last = fit.points.last().expect("n >= 4");
            let ok =
                fit.coefficient < 0.0 && last.rel_dev_fitted() < cfg.secondary.max_rel_dev && last.rel_dev_fitted() < last.rel_dev_main();
            pass &= ok;
            let pred = fit.predicted.map(|p| format!("{:.5}", p.value)).unwrap_or_else(|| "n/a".into());
            parts.push(format!(
                "{name}: c={:.5}±{:.5} (series {pred}), dev at X_n {:.4}% -> {:.4}%",
                fit.coefficient,
                fit.std_err,
                100.0 * last.rel_dev_main(),
                100.0 * last.rel_dev_fitted()
            ));
        }
        Ok((pass, parts.join("; ")))
    })
}

pub fn check_avg_residue(cfg: &Config) -> Outcome {
    timed(8, "average residue equals local-mass product", || {
        let (avg, target) = census::average_residue(InfSet::BOTH, cfg.avg_residue.y, cfg.avg_residue.pmax)?;
        let rel = avg / target.value - 1.0;
        Ok((rel.abs() <= cfg.avg_residue.tol, format!("Y={} average={avg:.6} target={:.6} rel={rel:+.4}", cfg.avg_residue.y, target.value)))
    })
}

pub fn check_radical(cfg: &Config, census: &Census) -> Outcome {
    timed(9, "radical ordering X log X constant", || {
        let xs: Vec<f64> = cfg.radical.log10_bounds.iter().map(|&k| 10f64.powf(k)).collect();
        let mut pass = true;
        let mut parts = Vec::new();
        for sig in [Signature::TotallyReal, Signature::OneComplexPair] {
            let reps = census::count_radical_series(census, sig, &xs, cfg.pmax)?;
            let ratios: Vec<f64> = reps.iter().map(|r| r.ratio()).collect();
            let banded = in_band(*ratios.last().expect("bounds"), cfg.radical.band);
            let toward = ratios.windows(2).all(|w| (w[1] - 1.0).abs() < (w[0] - 1.0).abs());
            pass &= banded && toward;
            let list: Vec<String> = ratios.iter().map(|r| format!("{r:.4}")).collect();
            parts.push(format!("{sig}: ratios [{}] in band {banded}, monotone toward 1 {toward}", list.join(", ")));
        }
        Ok((pass, parts.join("; ")))
    })
}

pub fn check_independence(cfg: &Config, census: &Census) -> Outcome {
    timed(10, "independence of primes at alpha<=beta", || {
        let c = &cfg.independence;
        let e = InvariantExponents::new(1.0, 2.0)?;
        let r = census::independence_report(census, c.prime, &SplittingConstraint::default(), e, c.bound as f64, Some(c.subfamily_d))?;
        let s = r.share(SplittingType::S111).expect("listed");
        let rel = s.empirical / s.predicted - 1.0;
        let sub = r.subfamily.expect("requested");
        let pass = rel.abs() <= c.tol && sub.split == 0;
        Ok((
            pass,
            format!(
                "X={} share={:.5} predicted={:.5} rel={rel:+.4}; D={} family: {} fields, {} split",
                c.bound, s.empirical, s.predicted, sub.d, sub.total, sub.split
            ),
        ))
    })
}

/// Checks 1–10 against a census with ceiling ≥ cfg.required_ceiling().
pub fn run_all(cfg: &Config, census: &Census) -> Result<Vec<Outcome>> {
    let need = cfg.required_ceiling();
    if census.ceiling() < need {
        return Err(Error::Capacity { what: "census ceiling for acceptance checks".into(), requested: need, limit: census.ceiling() });
    }
    Ok(vec![
        check_oracle(cfg),
        check_dh(cfg, census),
        check_phi_exact(cfg, census),
        check_phi_split(cfg, census),
        check_local_constants(),
        check_euler_s3(cfg),
        check_secondary(cfg, census),
        check_avg_residue(cfg),
        check_radical(cfg, census),
        check_independence(cfg, census),
    ])
}
