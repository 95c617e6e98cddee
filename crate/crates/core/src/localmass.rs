//! Cubic étale algebras over ℚ_p: the class inventory, automorphism counts,
//! (d_p, f_p) data and weighted mass sums.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::forms::{Signature, SplittingType};

pub type Q = Ratio<i128>;

const BUNDLED_P2: &str = include_str!("../data/local_p2.tsv");
const BUNDLED_P3: &str = include_str!("../data/local_p3.tsv");
const HEADER: &str = "p\tsplitting\td_val\tf_val\taut_order\tmultiplicity\trad_val";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalAlgebraClass {
    pub p: u64,
    pub splitting: SplittingType,
    pub d_val: u32,
    pub f_val: u32,
    pub aut_order: u32,
    pub multiplicity: u32,
    pub rad_val: u32,
}

/// A subset of splitting types (bitmask).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypeSet(u8);

impl TypeSet {
    pub const ALL: TypeSet = TypeSet(0b11111);
    pub const EMPTY: TypeSet = TypeSet(0);

    fn bit(t: SplittingType) -> u8 {
        1 << (t as u8)
    }

    pub fn single(t: SplittingType) -> Self {
        TypeSet(Self::bit(t))
    }

    pub fn from_types(ts: &[SplittingType]) -> Self {
        TypeSet(ts.iter().fold(0, |m, &t| m | Self::bit(t)))
    }

    pub fn contains(&self, t: SplittingType) -> bool {
        self.0 & Self::bit(t) != 0
    }

    pub fn is_all(&self) -> bool {
        *self == Self::ALL
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn types(&self) -> impl Iterator<Item = SplittingType> + '_ {
        SplittingType::ALL.into_iter().filter(move |&t| self.contains(t))
    }
}

impl fmt::Display for TypeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.types().map(|t| t.to_string()).collect();
        f.write_str(&v.join(","))
    }
}

impl FromStr for TypeSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let ts: Result<Vec<SplittingType>> = s.split(',').map(str::parse).collect();
        Ok(TypeSet::from_types(&ts?))
    }
}

/// Allowed signatures at the infinite place.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfSet {
    pub real: bool,
    pub complex: bool,
}

impl InfSet {
    pub const BOTH: InfSet = InfSet { real: true, complex: true };
    pub const REAL: InfSet = InfSet { real: true, complex: false };
    pub const COMPLEX: InfSet = InfSet { real: false, complex: true };

    pub fn admits(&self, s: Signature) -> bool {
        match s {
            Signature::TotallyReal => self.real,
            Signature::OneComplexPair => self.complex,
        }
    }
}

impl FromStr for InfSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(InfSet::REAL),
            "complex" => Ok(InfSet::COMPLEX),
            "both" => Ok(InfSet::BOTH),
            _ => Err(Error::Domain(format!("unknown infinite-place set '{s}' (real|complex|both)"))),
        }
    }
}

/// Σ: finitely many restricted primes plus an infinite-place condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingConstraint {
    pub primes: BTreeMap<u64, TypeSet>,
    pub infinite: InfSet,
}

impl Default for SplittingConstraint {
    fn default() -> Self {
        SplittingConstraint { primes: BTreeMap::new(), infinite: InfSet::BOTH }
    }
}

impl SplittingConstraint {
    pub fn all(infinite: InfSet) -> Self {
        SplittingConstraint { primes: BTreeMap::new(), infinite }
    }

    pub fn with(mut self, p: u64, allowed: TypeSet) -> Self {
        if allowed.is_all() {
            self.primes.remove(&p);
        } else {
            self.primes.insert(p, allowed);
        }
        self
    }

    pub fn allowed(&self, p: u64) -> TypeSet {
        self.primes.get(&p).copied().unwrap_or(TypeSet::ALL)
    }

    /// Product of the restricted primes.
    pub fn p_sigma(&self) -> u64 {
        self.primes.keys().product()
    }

    pub fn admits(&self, sig: Signature, types: impl Fn(u64) -> SplittingType) -> bool {
        self.infinite.admits(sig) && self.primes.iter().all(|(&p, s)| s.contains(types(p)))
    }

    pub fn validate(&self) -> Result<()> {
        if !self.infinite.real && !self.infinite.complex {
            return Err(Error::Domain("infinite-place set is empty".into()));
        }
        for (&p, s) in &self.primes {
            if !crate::arith::is_prime(p) {
                return Err(Error::Domain(format!("{p} is not prime")));
            }
            if s.is_empty() {
                return Err(Error::Domain(format!("empty splitting set at {p}")));
            }
        }
        Ok(())
    }
}

pub fn parse_table(text: &str, name: &str) -> Result<Vec<LocalAlgebraClass>> {
    let err = |reason: String| Error::Load { path: name.into(), reason };
    let mut declared = None;
    let mut body = String::new();
    for line in text.lines() {
        if let Some(c) = line.strip_prefix('#') {
            if let Some(h) = c.trim().strip_prefix("sha256 (header row + data rows):") {
                declared = Some(h.trim().to_string());
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        body.push_str(line);
        body.push('\n');
    }
    let declared = declared.ok_or_else(|| err("missing checksum line".into()))?;
    let actual = hex::encode(Sha256::digest(body.as_bytes()));
    if declared != actual {
        return Err(err(format!("checksum mismatch (declared {declared}, actual {actual})")));
    }
    let mut lines = body.lines();
    if lines.next() != Some(HEADER) {
        return Err(err("unexpected header row".into()));
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 7 {
            return Err(err(format!("row {}: expected 7 columns", i + 1)));
        }
        let num = |k: usize| cols[k].parse::<u32>().map_err(|e| err(format!("row {}: column {k}: {e}", i + 1)));
        let class = LocalAlgebraClass {
            p: cols[0].parse().map_err(|e| err(format!("row {}: {e}", i + 1)))?,
            splitting: cols[1].parse().map_err(|e: Error| err(format!("row {}: {e}", i + 1)))?,
            d_val: num(2)?,
            f_val: num(3)?,
            aut_order: num(4)?,
            multiplicity: num(5)?,
            rad_val: num(6)?,
        };
        if !matches!(class.aut_order, 1 | 2 | 3 | 6) || class.multiplicity == 0 {
            return Err(err(format!("row {}: invalid aut/multiplicity", i + 1)));
        }
        out.push(class);
    }
    Ok(out)
}

pub fn load_table(path: &Path) -> Result<Vec<LocalAlgebraClass>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Load { path: path.into(), reason: e.to_string() })?;
    parse_table(&text, &path.display().to_string())
}

fn bundled(p: u64) -> &'static [LocalAlgebraClass] {
    static T2: OnceLock<Vec<LocalAlgebraClass>> = OnceLock::new();
    static T3: OnceLock<Vec<LocalAlgebraClass>> = OnceLock::new();
    match p {
        2 => T2.get_or_init(|| parse_table(BUNDLED_P2, "data/local_p2.tsv").expect("bundled table")),
        _ => T3.get_or_init(|| parse_table(BUNDLED_P3, "data/local_p3.tsv").expect("bundled table")),
    }
}

fn class(p: u64, splitting: SplittingType, d_val: u32, f_val: u32, aut_order: u32, multiplicity: u32) -> LocalAlgebraClass {
    let rad_val = u32::from(d_val > 0 || f_val > 0);
    LocalAlgebraClass { p, splitting, d_val, f_val, aut_order, multiplicity, rad_val }
}

/// Every isomorphism-class signature of cubic étale algebras over ℚ_p.
pub fn local_classes(p: u64) -> Vec<LocalAlgebraClass> {
    use SplittingType::*;
    if p == 2 || p == 3 {
        return bundled(p).to_vec();
    }
    let totram = if p % 3 == 1 { class(p, S13, 0, 1, 3, 3) } else { class(p, S13, 0, 1, 1, 1) };
    vec![class(p, S111, 0, 0, 6, 1), class(p, S12, 0, 0, 2, 1), class(p, S3, 0, 0, 3, 1), class(p, S121, 1, 0, 2, 2), totram]
}

/// Σ over allowed classes of multiplicity · weight(d_val, f_val, rad_val) / |Aut|.
pub fn mass_sum<W: Fn(&LocalAlgebraClass) -> f64>(p: u64, allowed: TypeSet, weight: W) -> f64 {
    local_classes(p).iter().filter(|c| allowed.contains(c.splitting)).map(|c| c.multiplicity as f64 * weight(c) / c.aut_order as f64).sum()
}

pub fn mass_sum_exact<W: Fn(&LocalAlgebraClass) -> Q>(p: u64, allowed: TypeSet, weight: W) -> Q {
    local_classes(p)
        .iter()
        .filter(|c| allowed.contains(c.splitting))
        .map(|c| Q::from(c.multiplicity as i128) * weight(c) / Q::from(c.aut_order as i128))
        .fold(Q::from(0), |a, b| a + b)
}

/// p^{-k} as an exact rational.
pub fn p_pow_neg(p: u64, k: u32) -> Q {
    Q::new(1, (p as i128).pow(k))
}

/// Weight |d|_p·|f|_p^s.
pub fn disc_weight(p: u64, s: f64) -> impl Fn(&LocalAlgebraClass) -> f64 {
    move |c| (p as f64).powf(-(c.d_val as f64) - s * c.f_val as f64)
}

/// Weight |rad(d·f)|_p.
pub fn radical_weight_exact(p: u64) -> impl Fn(&LocalAlgebraClass) -> Q {
    move |c| p_pow_neg(p, c.rad_val)
}

/// ℂ(p) = Σ |rad(d·f)|_p / |Aut|.
pub fn radical_local_constant(p: u64) -> Q {
    mass_sum_exact(p, TypeSet::ALL, radical_weight_exact(p))
}

pub fn infinite_mass(allowed: InfSet) -> Result<Q> {
    match (allowed.real, allowed.complex) {
        (true, true) => Ok(Q::new(2, 3)),
        (true, false) => Ok(Q::new(1, 6)),
        (false, true) => Ok(Q::new(1, 2)),
        (false, false) => Err(Error::Domain("infinite-place set is empty".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc_w(p: u64) -> impl Fn(&LocalAlgebraClass) -> Q {
        move |c| p_pow_neg(p, c.d_val + 2 * c.f_val)
    }

    #[test]
    fn radical_constants_at_2_and_3() {
        assert_eq!(radical_local_constant(2), Q::from(3));
        assert_eq!(radical_local_constant(3), Q::new(11, 3));
        assert_eq!(radical_local_constant(7), Q::new(9, 7));
    }

    #[test]
    fn total_mass_is_serre() {
        for p in [2u64, 3, 5, 7, 11, 13, 97] {
            let pi = p as i128;
            let want = Q::from(1) + Q::new(1, pi) + Q::new(1, pi * pi);
            assert_eq!(mass_sum_exact(p, TypeSet::ALL, disc_w(p)), want, "p={p}");
        }
    }

    #[test]
    fn tame_examples() {
        let ram = TypeSet::single(SplittingType::S13);
        assert_eq!(mass_sum_exact(5, ram, |_| Q::from(1)), Q::from(1));
        assert_eq!(mass_sum_exact(7, ram, |_| Q::from(1)), Q::from(1));
        let unr_part = TypeSet::from_types(&[SplittingType::S111, SplittingType::S12, SplittingType::S3, SplittingType::S121]);
        assert_eq!(mass_sum_exact(5, unr_part, |c| p_pow_neg(5, c.d_val)), Q::new(6, 5));
        assert_eq!(mass_sum_exact(5, TypeSet::ALL, |c| p_pow_neg(5, c.d_val + c.f_val)), Q::new(7, 5));
    }

    #[test]
    fn corrupt_table_rejected() {
        let bad = BUNDLED_P2.replace("2\t1^3\t0\t1\t1\t1\t1", "2\t1^3\t0\t1\t1\t2\t1");
        assert!(matches!(parse_table(&bad, "x"), Err(Error::Load { .. })));
        assert!(load_table(Path::new("/nonexistent/local.tsv")).is_err());
    }

    #[test]
    fn infinite_masses() {
        assert_eq!(infinite_mass(InfSet::REAL).unwrap(), Q::new(1, 6));
        assert_eq!(infinite_mass(InfSet::COMPLEX).unwrap(), Q::new(1, 2));
        assert_eq!(infinite_mass(InfSet::BOTH).unwrap(), Q::new(2, 3));
        assert!(infinite_mass(InfSet { real: false, complex: false }).is_err());
    }
}
