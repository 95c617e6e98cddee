//! On-disk field cache (TSV shards + checksummed manifest) and external
//! field lists for cross-validation.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arith;
use crate::error::{Error, Result};
use crate::forms::{for_each_field, sort_records, BinaryCubicForm, CubicFieldRecord, Signature, SignatureFilter};

pub const SCHEMA_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.json";
pub const LOCK_FILE: &str = ".lock";
pub const DEFAULT_SHARD_WIDTH: u64 = 1_000_000;
/// ingest_external fails outright above this share of malformed lines.
pub const MAX_REJECT_SHARE: f64 = 0.01;

const TSV_HEADER: [&str; 8] = ["a", "b", "c", "d", "disc", "resolvent_d", "conductor_f", "signature"];

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn load_err(path: &Path, reason: impl std::fmt::Display) -> Error {
    Error::Load { path: path.to_path_buf(), reason: reason.to_string() }
}

// --- TSV records ---

#[derive(Serialize, Deserialize)]
struct Row {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
    disc: i64,
    resolvent_d: i64,
    conductor_f: u64,
    signature: String,
}

/// Records as TSV with a header line, in the given order.
pub fn records_to_tsv(records: &[CubicFieldRecord]) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new().delimiter(b'\t').has_headers(false).from_writer(Vec::new());
    w.write_record(TSV_HEADER).expect("in-memory write");
    for r in records {
        let f = r.form;
        w.serialize(Row {
            a: f.a,
            b: f.b,
            c: f.c,
            d: f.d,
            disc: r.disc,
            resolvent_d: r.resolvent_d,
            conductor_f: r.conductor_f,
            signature: r.signature.to_string(),
        })
        .expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// Parse TSV records, checking each row's invariants against its form.
pub fn records_from_tsv(bytes: &[u8], name: &Path) -> Result<Vec<CubicFieldRecord>> {
    let mut rd = csv::ReaderBuilder::new().delimiter(b'\t').from_reader(bytes);
    let header = rd.headers().map_err(|e| load_err(name, e))?.clone();
    if header.iter().ne(TSV_HEADER.iter().copied()) {
        return Err(load_err(name, format!("unexpected header {:?}", header)));
    }
    let mut out = Vec::new();
    for (i, row) in rd.deserialize::<Row>().enumerate() {
        let row = row.map_err(|e| load_err(name, e))?;
        let form = BinaryCubicForm::new(row.a, row.b, row.c, row.d);
        let signature: Signature = row.signature.parse().map_err(|e| load_err(name, format!("row {}: {e}", i + 2)))?;
        if form.disc() != row.disc as i128
            || row.resolvent_d as i128 * (row.conductor_f as i128).pow(2) != row.disc as i128
            || Signature::of_disc(row.disc as i128) != signature
        {
            return Err(load_err(name, format!("row {}: invariants do not match the form", i + 2)));
        }
        out.push(CubicFieldRecord { form, disc: row.disc, resolvent_d: row.resolvent_d, conductor_f: row.conductor_f, signature });
    }
    Ok(out)
}

/// temp file in the same directory, then rename
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

// --- cache directory ---

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub reduction: String,
    pub maximality: String,
    pub version: String,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            reduction: "covariant-lexmin-1".into(),
            maximality: "local-shape-p2-1".into(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShardInfo {
    pub file: String,
    pub signature: Signature,
    /// |disc| in [lo, hi)
    pub lo: u64,
    pub hi: u64,
    pub records: u64,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheManifest {
    pub schema: u32,
    /// Every field with 0 < |disc| < ceiling is present.
    pub ceiling: u64,
    pub shards: Vec<ShardInfo>,
    pub generator: GeneratorParams,
}

#[derive(Serialize, Deserialize)]
struct ManifestFile {
    manifest: CacheManifest,
    sha256: String,
}

impl CacheManifest {
    /// sha256 of the canonical JSON body; embedded in reports.
    pub fn checksum(&self) -> String {
        sha256_hex(&serde_json::to_vec(self).expect("manifest serializes"))
    }

    fn validate(&self, path: &Path) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(load_err(path, format!("schema {} (expected {SCHEMA_VERSION})", self.schema)));
        }
        for sig in [Signature::TotallyReal, Signature::OneComplexPair] {
            let mut edge = 1;
            for s in self.shards.iter().filter(|s| s.signature == sig) {
                if s.lo != edge || s.hi <= s.lo {
                    return Err(load_err(path, format!("{sig} shards do not partition [1, {})", self.ceiling)));
                }
                edge = s.hi;
            }
            if edge != self.ceiling.max(1) {
                return Err(load_err(path, format!("{sig} shards end at {edge}, ceiling is {}", self.ceiling)));
            }
        }
        Ok(())
    }
}

/// Exclusive writer lock on a cache directory, released on drop.
pub struct CacheLock {
    path: PathBuf,
}

impl CacheLock {
    pub fn acquire(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        let path = dir.join(LOCK_FILE);
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(mut f) => {
                writeln!(f, "{}", std::process::id())?;
                Ok(CacheLock { path })
            }
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => Err(Error::Locked(path)),
            Err(e) => Err(e.into()),
        }
    }
}

impl Drop for CacheLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

fn shard_name(sig: Signature, index: usize) -> String {
    let s = match sig {
        Signature::TotallyReal => "pos",
        Signature::OneComplexPair => "neg",
    };
    format!("fields-{s}-{index:05}.tsv")
}

/// Write `records` (complete below `ceiling`) as shards of |disc| width
/// `shard_width`, then the manifest. Holds the directory lock throughout.
pub fn write_cache(dir: &Path, records: &[CubicFieldRecord], ceiling: u64, shard_width: u64) -> Result<CacheManifest> {
    if shard_width == 0 {
        return Err(Error::Domain("shard width must be positive".into()));
    }
    let _lock = CacheLock::acquire(dir)?;
    let mut sorted: Vec<CubicFieldRecord> = records.iter().filter(|r| r.disc.unsigned_abs() < ceiling).copied().collect();
    sort_records(&mut sorted);
    let mut shards = Vec::new();
    for sig in [Signature::TotallyReal, Signature::OneComplexPair] {
        let mine: Vec<&CubicFieldRecord> = sorted.iter().filter(|r| r.signature == sig).collect();
        let (mut lo, mut i, mut index) = (1u64, 0usize, 0usize);
        while lo < ceiling.max(1) {
            let hi = lo.saturating_add(shard_width).min(ceiling);
            let start = i;
            while i < mine.len() && mine[i].disc.unsigned_abs() < hi {
                i += 1;
            }
            let chunk: Vec<CubicFieldRecord> = mine[start..i].iter().map(|r| **r).collect();
            let bytes = records_to_tsv(&chunk);
            let file = shard_name(sig, index);
            write_atomic(&dir.join(&file), &bytes)?;
            shards.push(ShardInfo { file, signature: sig, lo, hi, records: chunk.len() as u64, sha256: sha256_hex(&bytes) });
            lo = hi;
            index += 1;
        }
    }
    let manifest = CacheManifest { schema: SCHEMA_VERSION, ceiling, shards, generator: GeneratorParams::default() };
    let file = ManifestFile { sha256: manifest.checksum(), manifest: manifest.clone() };
    let mut json = serde_json::to_vec_pretty(&file).expect("manifest serializes");
    json.push(b'\n');
    write_atomic(&dir.join(MANIFEST_FILE), &json)?;
    Ok(manifest)
}

/// Enumerate to `ceiling` and write the cache.
pub fn build_cache(dir: &Path, ceiling: u64, shard_width: u64) -> Result<CacheManifest> {
    let mut records = Vec::new();
    for_each_field(ceiling, SignatureFilter::Both, |r| records.push(r))?;
    write_cache(dir, &records, ceiling, shard_width)
}

pub fn read_manifest(dir: &Path) -> Result<CacheManifest> {
    let path = dir.join(MANIFEST_FILE);
    let bytes = fs::read(&path).map_err(|e| load_err(&path, e))?;
    let file: ManifestFile = serde_json::from_slice(&bytes).map_err(|e| load_err(&path, e))?;
    if file.manifest.checksum() != file.sha256 {
        return Err(load_err(&path, "manifest checksum mismatch"));
    }
    file.manifest.validate(&path)?;
    Ok(file.manifest)
}

/// Load every shard, verifying checksums; any mismatch refuses the cache.
pub fn load_cache(dir: &Path) -> Result<(CacheManifest, Vec<CubicFieldRecord>)> {
    let manifest = read_manifest(dir)?;
    let mut records = Vec::new();
    for s in &manifest.shards {
        let path = dir.join(&s.file);
        let bytes = fs::read(&path).map_err(|e| load_err(&path, e))?;
        if sha256_hex(&bytes) != s.sha256 {
            return Err(load_err(&path, "shard checksum mismatch"));
        }
        let rows = records_from_tsv(&bytes, &path)?;
        if rows.len() as u64 != s.records
            || rows.iter().any(|r| r.signature != s.signature || r.disc.unsigned_abs() < s.lo || r.disc.unsigned_abs() >= s.hi)
        {
            return Err(load_err(&path, "shard contents disagree with the manifest"));
        }
        records.extend(rows);
    }
    sort_records(&mut records);
    Ok((manifest, records))
}

// --- external lists ---

/// A field given by a defining cubic polynomial (leading coefficient first).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExternalRecord {
    pub poly: [i64; 4],
    pub disc: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reject {
    pub line: usize,
    pub text: String,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct ExternalFieldList {
    pub source: String,
    pub records: Vec<ExternalRecord>,
    /// From a "# bound: N" comment (|disc| < N), if present.
    pub bound: Option<u64>,
    pub provenance: Vec<String>,
    pub rejects: Vec<Reject>,
}

/// "x^3-x-1" style; coefficients of x^3, x^2, x, 1.
pub fn parse_poly(s: &str) -> Option<[i64; 4]> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let mut coeffs = [0i64; 4];
    let mut seen = [false; 4];
    let mut rest = s.as_str();
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'+' => (1, &rest[1..]),
            b'-' => (-1, &rest[1..]),
            _ => (1, rest),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let (term, tail) = body.split_at(end);
        let (num, pow) = match term.find('x') {
            None => (term, 0),
            Some(i) => {
                let p = &term[i + 1..];
                let pow = if p.is_empty() { 1 } else { p.strip_prefix('^')?.parse::<usize>().ok()? };
                (term[..i].trim_end_matches('*'), pow)
            }
        };
        let c: i64 = if num.is_empty() { 1 } else { num.parse().ok()? };
        if pow > 3 || seen[pow] || term.is_empty() {
            return None;
        }
        seen[pow] = true;
        coeffs[3 - pow] = sign * c;
        rest = tail;
    }
    (coeffs[0] != 0).then_some(coeffs)
}

pub fn format_poly(p: [i64; 4]) -> String {
    let mut out = String::new();
    for (i, &c) in p.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let pow = 3 - i;
        let sign = if c < 0 {
            "-"
        } else if out.is_empty() {
            ""
        } else {
            "+"
        };
        let mag = c.unsigned_abs();
        let num = if mag == 1 && pow > 0 { String::new() } else { mag.to_string() };
        let x = match pow {
            0 => String::new(),
            1 => "x".into(),
            k => format!("x^{k}"),
        };
        out.push_str(&format!("{sign}{num}{x}"));
    }
    out
}

fn poly_form(p: [i64; 4]) -> BinaryCubicForm {
    BinaryCubicForm::new(p[0], p[1], p[2], p[3])
}

/// Reason a (polynomial, discriminant) pair cannot describe a cubic field.
fn check_external(poly: [i64; 4], disc: i64) -> std::result::Result<(), String> {
    if disc == 0 || !matches!(disc.rem_euclid(4), 0 | 1) {
        return Err(format!("{disc} is not a discriminant (must be nonzero and 0 or 1 mod 4)"));
    }
    let form = poly_form(poly);
    if !form.is_irreducible() {
        return Err("polynomial is reducible".into());
    }
    let pd = form.disc();
    if pd % disc as i128 != 0 || pd / (disc as i128) <= 0 || !arith::is_square((pd / disc as i128) as u128) {
        return Err(format!("polynomial discriminant {pd} is not {disc} times a square"));
    }
    Ok(())
}

/// Parse "polynomial, discriminant" lines; '#' starts a comment. Malformed
/// lines go to `rejects`.
pub fn parse_external(text: &str, source: &str) -> ExternalFieldList {
    let mut list =
        ExternalFieldList { source: source.into(), records: Vec::new(), bound: None, provenance: Vec::new(), rejects: Vec::new() };
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(c) = line.strip_prefix('#') {
            let c = c.trim();
            match c.strip_prefix("bound:").map(|b| b.trim().parse::<u64>()) {
                Some(Ok(b)) => list.bound = Some(b),
                _ => list.provenance.push(c.to_string()),
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let mut reject = |reason: String| list.rejects.push(Reject { line: i + 1, text: raw.to_string(), reason });
        let fields: Vec<&str> = line.splitn(3, ',').map(str::trim).collect();
        let [p, d] = fields[..] else {
            reject("expected 'polynomial, discriminant'".into());
            continue;
        };
        let Some(poly) = parse_poly(p) else {
            reject(format!("cannot parse cubic polynomial '{p}'"));
            continue;
        };
        let Ok(disc) = d.parse::<i64>() else {
            reject(format!("cannot parse discriminant '{d}'"));
            continue;
        };
        match check_external(poly, disc) {
            Ok(()) => list.records.push(ExternalRecord { poly, disc }),
            Err(reason) => reject(reason),
        }
    }
    list
}

/// Read an external list; more than 1% malformed lines is a hard failure.
pub fn ingest_external(path: &Path) -> Result<ExternalFieldList> {
    let text = fs::read_to_string(path).map_err(|e| load_err(path, e))?;
    let list = parse_external(&text, &path.display().to_string());
    let n = list.records.len() + list.rejects.len();
    if n > 0 && list.rejects.len() as f64 > MAX_REJECT_SHARE * n as f64 {
        let first = &list.rejects[0];
        return Err(load_err(
            path,
            format!("{} of {n} lines malformed (first: line {}: {})", list.rejects.len(), first.line, first.reason),
        ));
    }
    Ok(list)
}

pub fn export_external(list: &ExternalFieldList) -> String {
    let mut out = String::new();
    for p in &list.provenance {
        out.push_str(&format!("# {p}\n"));
    }
    if let Some(b) = list.bound {
        out.push_str(&format!("# bound: {b}\n"));
    }
    for r in &list.records {
        out.push_str(&format!("{}, {}\n", format_poly(r.poly), r.disc));
    }
    out
}

/// The enumerated fields as an external list (defining polynomial F(x, 1)).
pub fn external_from_records(records: &[CubicFieldRecord], bound: u64, source: &str) -> ExternalFieldList {
    ExternalFieldList {
        source: source.into(),
        records: records.iter().map(|r| ExternalRecord { poly: r.form.coeffs(), disc: r.disc }).collect(),
        bound: Some(bound),
        provenance: vec![format!("exported by cubicfields {}", env!("CARGO_PKG_VERSION"))],
        rejects: Vec::new(),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiffReport {
    /// |disc| < bound is compared.
    pub bound: u64,
    /// Enumerated but absent from the external list (with multiplicity).
    pub missing: Vec<i64>,
    /// In the external list but not enumerated.
    pub extra: Vec<i64>,
}

impl DiffReport {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }

    pub fn size(&self) -> usize {
        self.missing.len() + self.extra.len()
    }
}

/// Multiset difference of discriminants over the common range: below both the
/// census ceiling and the list's bound (declared, else one past its largest |disc|).
pub fn cross_validate(list: &ExternalFieldList, records: &[CubicFieldRecord], ceiling: u64) -> DiffReport {
    let list_bound = list.bound.unwrap_or_else(|| list.records.iter().map(|r| r.disc.unsigned_abs() + 1).max().unwrap_or(0));
    let bound = ceiling.min(list_bound);
    let mut tally: BTreeMap<i64, i64> = BTreeMap::new();
    for r in records.iter().filter(|r| r.disc.unsigned_abs() < bound) {
        *tally.entry(r.disc).or_insert(0) += 1;
    }
    for r in list.records.iter().filter(|r| r.disc.unsigned_abs() < bound) {
        *tally.entry(r.disc).or_insert(0) -= 1;
    }
    let mut rep = DiffReport { bound, ..Default::default() };
    for (d, n) in tally {
        let v = if n > 0 { &mut rep.missing } else { &mut rep.extra };
        v.extend(std::iter::repeat_n(d, n.unsigned_abs() as usize));
    }
    rep
}

/// Checksum of a file's bytes (for bundled tables and reports).
pub fn file_sha256(path: &Path) -> Result<String> {
    let mut f = File::open(path).map_err(|e| load_err(path, e))?;
    let mut h = Sha256::new();
    std::io::copy(&mut f, &mut h)?;
    Ok(hex::encode(h.finalize()))
}
