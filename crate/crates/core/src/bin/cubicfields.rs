use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cubicfields::acceptance::{self, Config};
use cubicfields::census::{self, Census, CountReport};
use cubicfields::constants::{self, ClosedFormIntegrals};
use cubicfields::datastore;
use cubicfields::forms::{enumerate_fields, BinaryCubicForm, CubicFieldRecord, Signature, SignatureFilter};
use cubicfields::invariants::{self, InvariantExponents};
use cubicfields::localmass::{SplittingConstraint, TypeSet};
use cubicfields::oracle;
use cubicfields::resolvent::{self, build_phi, phi_coefficients};
use cubicfields::Error;

#[derive(Parser)]
#[command(name = "cubicfields", version, about = "Cubic field counts and their predicted constants")]
struct Cli {
    /// Field cache directory
    #[arg(long, global = true, env = "CUBICFIELDS_CACHE")]
    cache: Option<PathBuf>,
    /// Acceptance configuration (defaults to the bundled acceptance.toml)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write a key=value summary here
    #[arg(long, global = true)]
    summary: Option<PathBuf>,
    /// Largest prime in truncated Euler products
    #[arg(long, global = true)]
    pmax: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct ConstraintArgs {
    /// p:TYPE[,TYPE...], e.g. 7:111 or 5:12,3 (repeatable)
    #[arg(long = "split", value_name = "P:TYPES")]
    split: Vec<String>,
    /// Infinite place: real, complex or both
    #[arg(long, default_value = "both")]
    inf: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate fields with |Disc| < bound and write a cache
    Enumerate {
        #[arg(long)]
        bound: u64,
        /// Output directory (defaults to --cache)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = datastore::DEFAULT_SHARD_WIDTH)]
        shard_width: u64,
    },
    /// D, F, radical and local data of a discriminant or form
    Invariants {
        #[arg(long, allow_hyphen_values = true)]
        disc: Option<i64>,
        /// a,b,c,d
        #[arg(long, allow_hyphen_values = true)]
        form: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
    },
    /// Count under |D|^alpha F^beta < X (or a |D| x F box) against the main term
    Count {
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
        #[arg(long)]
        bound: Option<f64>,
        /// Y,Z: count |D| < Y, F < Z instead
        #[arg(long)]
        rect: Option<String>,
        /// Fit the X^(5/(6 alpha)) term over --samples
        #[arg(long)]
        fit_secondary: bool,
        #[arg(long, value_delimiter = ',')]
        samples: Vec<f64>,
        #[command(flatten)]
        constraint: ConstraintArgs,
    },
    /// Leading constants and Dirichlet series values
    Constants {
        #[arg(long, default_value_t = 2.0)]
        s: f64,
        #[arg(long)]
        f: Option<u64>,
        #[command(flatten)]
        constraint: ConstraintArgs,
    },
    /// Compare resolvent series coefficients with enumerated counts
    PhiVerify {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, default_value_t = 500)]
        zmax: u64,
        /// Print every f, not only the nonzero rows
        #[arg(long)]
        all_rows: bool,
        #[command(flatten)]
        constraint: ConstraintArgs,
    },
    /// Count by radical of the discriminant
    Radical {
        #[arg(long)]
        sign: String,
        #[arg(long)]
        bound: f64,
    },
    /// Splitting-type frequencies at p against the product prediction
    Independence {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
        #[arg(long)]
        bound: f64,
        #[arg(long, allow_hyphen_values = true)]
        subfamily: Option<i64>,
        #[command(flatten)]
        constraint: ConstraintArgs,
    },
    /// Run acceptance checks 1-10
    Report {
        /// Subset of check ids, e.g. 1,5,6
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
    /// Verify the cache: checksums, oracle prefix, optional external list
    Validate {
        #[arg(long)]
        external: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        oracle_bound: u64,
    },
}

enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(m) => Failure::Usage(m),
            other => Failure::Data(other),
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

/// Human table plus machine summary; `pass` is None when no check was requested.
struct Output {
    table: String,
    summary: Vec<(String, String)>,
    pass: Option<bool>,
}

impl Output {
    fn new() -> Self {
        Output { table: String::new(), summary: Vec::new(), pass: None }
    }

    fn kv(&mut self, k: &str, v: impl std::fmt::Display) {
        self.summary.push((k.to_string(), v.to_string()));
    }

    fn row(&mut self, cells: &[String]) {
        self.table.push_str(&cells.join("\t"));
        self.table.push('\n');
    }

    fn check(&mut self, ok: bool) {
        self.pass = Some(self.pass.unwrap_or(true) && ok);
    }
}

struct Ctx {
    cache: Option<PathBuf>,
    cfg: Config,
    pmax: u64,
    manifest_sha: Option<String>,
}

impl Ctx {
    /// The cache if it reaches `need`, else an in-memory enumeration.
    fn census(&mut self, need: u64) -> Res<Census> {
        if let Some(dir) = &self.cache {
            if dir.join(datastore::MANIFEST_FILE).exists() {
                let m = datastore::read_manifest(dir)?;
                if m.ceiling >= need {
                    let (m, recs) = datastore::load_cache(dir)?;
                    self.manifest_sha = Some(m.checksum());
                    return Ok(Census::from_records(recs, m.ceiling));
                }
                eprintln!("cache ceiling {} is below the required {need}; enumerating in memory", m.ceiling);
            }
        }
        Ok(Census::enumerate(need)?)
    }
}

fn parse_constraint(c: &ConstraintArgs) -> Res<SplittingConstraint> {
    let mut s = SplittingConstraint::all(c.inf.parse()?);
    for spec in &c.split {
        let (p, types) = spec.split_once(':').ok_or_else(|| Failure::Usage(format!("--split expects P:TYPES, got '{spec}'")))?;
        let p: u64 = p.trim().parse().map_err(|_| Failure::Usage(format!("bad prime in --split '{spec}'")))?;
        let t: TypeSet = types.parse()?;
        s = s.with(p, t);
    }
    s.validate()?;
    Ok(s)
}

fn exps(alpha: f64, beta: f64) -> Res<InvariantExponents> {
    Ok(InvariantExponents::new(alpha, beta)?)
}

fn fmt_g(x: f64) -> String {
    format!("{x:.6e}")
}

fn report_rows(out: &mut Output, r: &CountReport) {
    out.row(&["bound".into(), "count".into(), "predicted".into(), "ratio".into()]);
    for p in &r.dyadic {
        out.row(&[fmt_g(p.bound), p.count.to_string(), fmt_g(p.predicted), format!("{:.6}", p.ratio())]);
    }
    out.kv("count", r.count);
    out.kv("predicted_main", fmt_g(r.predicted_main.value));
    out.kv("predicted_main_err", fmt_g(r.predicted_main.err));
    out.kv("ratio", format!("{:.6}", r.ratio()));
    if let Some(s) = r.predicted_secondary {
        out.kv("predicted_secondary", fmt_g(s.value));
    }
    out.kv("borderline", r.borderline);
    out.kv("unreliable", r.unreliable);
}

fn cmd_enumerate(ctx: &Ctx, bound: u64, out_dir: Option<PathBuf>, width: u64) -> Res<Output> {
    let mut out = Output::new();
    let dir = out_dir.or_else(|| ctx.cache.clone());
    let (real, complex, sha) = match dir {
        Some(d) => {
            let m = datastore::build_cache(&d, bound, width)?;
            let count = |s: Signature| m.shards.iter().filter(|x| x.signature == s).map(|x| x.records).sum::<u64>();
            (count(Signature::TotallyReal), count(Signature::OneComplexPair), Some(m.checksum()))
        }
        None => {
            let recs = enumerate_fields(bound, SignatureFilter::Both)?;
            let real = recs.iter().filter(|r| r.disc > 0).count() as u64;
            (real, recs.len() as u64 - real, None)
        }
    };
    out.row(&["signature".into(), "fields".into()]);
    out.row(&["real".into(), real.to_string()]);
    out.row(&["complex".into(), complex.to_string()]);
    out.kv("bound", bound);
    out.kv("real", real);
    out.kv("complex", complex);
    if let Some(s) = sha {
        out.kv("cache_manifest_sha256", s);
    }
    Ok(out)
}

fn cmd_invariants(disc: Option<i64>, form: Option<String>, alpha: f64, beta: f64) -> Res<Output> {
    let mut out = Output::new();
    let (disc, form) = match (disc, form) {
        (Some(d), None) => (d, None),
        (None, Some(f)) => {
            let c: Vec<i64> = f
                .split(',')
                .map(|x| x.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(|_| Failure::Usage(format!("--form expects a,b,c,d, got '{f}'")))?;
            let [a, b, c, d] = c[..] else { return Err(Failure::Usage(format!("--form expects four coefficients, got '{f}'"))) };
            let form = BinaryCubicForm::new(a, b, c, d);
            let disc = i64::try_from(form.disc()).map_err(|_| Failure::Usage("discriminant exceeds i64".into()))?;
            (disc, Some(form))
        }
        _ => return Err(Failure::Usage("give exactly one of --disc or --form".into())),
    };
    let (d, f) = invariants::resolvent_decompose(disc)?;
    let e = exps(alpha, beta)?;
    out.row(&["p".into(), "d_p".into(), "f_p".into(), "allowed".into(), "type".into()]);
    for lp in invariants::local_parts(d, f) {
        let t = form.map(|fm| fm.splitting_type(lp.p).to_string()).unwrap_or_else(|| "-".into());
        out.row(&[lp.p.to_string(), lp.d_p.to_string(), lp.f_p.to_string(), lp.is_allowed().to_string(), t]);
    }
    out.kv("disc", disc);
    out.kv("D", d);
    out.kv("F", f);
    out.kv("radical", invariants::radical_c(disc));
    out.kv("generalized", fmt_g(invariants::generalized_disc(d, f, e)));
    if let Some(fm) = form {
        out.kv("irreducible", fm.is_irreducible());
        out.kv("maximal", fm.is_maximal(&cubicfields::arith::factor(disc.unsigned_abs())));
        out.kv("canonical", fm.canonical().map(|c| c.to_string()).unwrap_or_else(|e| format!("error: {e}")));
    }
    Ok(out)
}

fn cmd_count(
    ctx: &mut Ctx,
    alpha: f64,
    beta: f64,
    bound: Option<f64>,
    rect: Option<String>,
    fit: bool,
    samples: Vec<f64>,
    c: &ConstraintArgs,
) -> Res<Output> {
    let sigma = parse_constraint(c)?;
    let e = exps(alpha, beta)?;
    let mut out = Output::new();
    if fit {
        if e.ratio() <= census::SECONDARY_MIN_RATIO {
            return Err(Failure::Usage(format!("--fit-secondary needs beta/alpha > 7/5 (got {:.4})", e.ratio())));
        }
        if samples.len() < 4 {
            return Err(Failure::Usage("--fit-secondary needs at least 4 --samples".into()));
        }
        let top = samples.iter().copied().fold(0.0, f64::max);
        let need = census::generalized_need(e, top).ceil() as u64;
        let census = ctx.census(need)?;
        let f = census::fit_secondary(&census, &sigma, e, &samples, ctx.pmax)?;
        out.row(&["bound".into(), "count".into(), "main".into(), "residual".into()]);
        for p in &f.points {
            out.row(&[fmt_g(p.x), p.count.to_string(), fmt_g(p.main), fmt_g(p.residual)]);
        }
        out.kv("fitted", format!("{:.6}", f.coefficient));
        out.kv("fitted_std_err", format!("{:.6}", f.std_err));
        out.kv("fitted_band", format!("{:.6},{:.6}", f.band.0, f.band.1));
        if let Some(p) = f.predicted {
            out.kv("series_prediction", format!("{:.6}", p.value));
        }
        return Ok(out);
    }
    let report = match (bound, rect) {
        (Some(x), None) => {
            let need = census::generalized_need(e, x).ceil() as u64;
            census::count_generalized(&ctx.census(need)?, &sigma, e, x, ctx.pmax)?
        }
        (None, Some(r)) => {
            let (y, z) = r.split_once(',').ok_or_else(|| Failure::Usage("--rect expects Y,Z".into()))?;
            let y: f64 = y.trim().parse().map_err(|_| Failure::Usage("bad Y in --rect".into()))?;
            let z: f64 = z.trim().parse().map_err(|_| Failure::Usage("bad Z in --rect".into()))?;
            census::count_rect(&ctx.census((y * z * z).ceil() as u64)?, &sigma, y, z, ctx.pmax)?
        }
        _ => return Err(Failure::Usage("give exactly one of --bound or --rect".into())),
    };
    report_rows(&mut out, &report);
    Ok(out)
}

fn cmd_constants(ctx: &Ctx, s: f64, f: Option<u64>, c: &ConstraintArgs) -> Res<Output> {
    let sigma = parse_constraint(c)?;
    let mut out = Output::new();
    let p = ctx.pmax;
    out.row(&["quantity".into(), "value".into(), "error".into()]);
    let put = |out: &mut Output, name: &str, v: cubicfields::special::Interval| {
        out.row(&[name.into(), format!("{:.12e}", v.value), format!("{:.1e}", v.err)]);
        out.kv(name, format!("{:.12e}", v.value));
    };
    if let Some(f) = f {
        put(&mut out, "c1_f", constants::c1_of_f(&sigma, f)?);
    }
    put(&mut out, "l1_s", constants::l1(&sigma, s, p)?);
    put(&mut out, "residue_l1", constants::residue_l1(&sigma, p)?);
    if let Ok(v) = constants::l2(&sigma, s, &ClosedFormIntegrals, p) {
        put(&mut out, "l2_s", v);
    }
    for sig in [Signature::TotallyReal, Signature::OneComplexPair] {
        put(&mut out, &format!("radical_{sig}"), constants::radical_constant(sig, p));
    }
    Ok(out)
}

fn cmd_phi_verify(ctx: &mut Ctx, d: i64, zmax: u64, all_rows: bool, c: &ConstraintArgs) -> Res<Output> {
    let sigma = parse_constraint(c)?;
    let k: u64 = sigma.primes.iter().filter(|(_, t)| t.contains(cubicfields::SplittingType::S111)).map(|(p, _)| *p).product();
    let need = (d.unsigned_abs() * zmax * zmax + 1).max(resolvent::required_bound(d, &[k]) + 1);
    let census = ctx.census(need)?;
    let predicted = phi_coefficients(&build_phi(d, &sigma, &census)?, zmax)?;
    let counted = resolvent::enumerated_coefficients(census.records(), d, &sigma, zmax);
    let mut out = Output::new();
    out.row(&["f".into(), "predicted".into(), "enumerated".into()]);
    let mut mismatches = 0;
    for f in 1..=zmax as usize {
        if predicted[f] != counted[f] {
            mismatches += 1;
        }
        if all_rows || predicted[f] != 0 || counted[f] != 0 {
            out.row(&[f.to_string(), predicted[f].to_string(), counted[f].to_string()]);
        }
    }
    let ok = mismatches == 0;
    let _ = writeln!(out.table, "{}", if ok { "PASS" } else { "FAIL" });
    out.kv("d", d);
    out.kv("zmax", zmax);
    out.kv("fields", counted.iter().sum::<u64>());
    out.kv("mismatches", mismatches);
    out.check(ok);
    Ok(out)
}

fn cmd_radical(ctx: &mut Ctx, sign: &str, x: f64) -> Res<Output> {
    let sig: Signature = sign.parse()?;
    // fields below the ceiling, plus mirror fields up to 27·(36X)²/ceiling for the rest
    let census = ctx.census((x * x / 3.0).max(27.0 * 36.0 * x).ceil() as u64)?;
    let r = census::count_radical(&census, sig, x, ctx.pmax)?;
    let mut out = Output::new();
    report_rows(&mut out, &r);
    Ok(out)
}

fn cmd_independence(ctx: &mut Ctx, p: u64, alpha: f64, beta: f64, x: f64, sub: Option<i64>, c: &ConstraintArgs) -> Res<Output> {
    let sigma = parse_constraint(c)?;
    let e = exps(alpha, beta)?;
    let need = census::generalized_need(e, x).ceil() as u64;
    let census = ctx.census(need)?;
    let r = census::independence_report(&census, p, &sigma, e, x, sub)?;
    let mut out = Output::new();
    out.row(&["type".into(), "count".into(), "empirical".into(), "predicted".into()]);
    for s in &r.shares {
        out.row(&[s.splitting.to_string(), s.count.to_string(), format!("{:.6}", s.empirical), format!("{:.6}", s.predicted)]);
        out.kv(&format!("share_{}", s.splitting), format!("{:.6}", s.empirical));
    }
    out.kv("total", r.total);
    out.kv("independence_expected", r.expected);
    if let Some(s) = r.subfamily {
        out.kv("subfamily_d", s.d);
        out.kv("subfamily_total", s.total);
        out.kv("subfamily_split", s.split);
    }
    Ok(out)
}

fn cmd_report(ctx: &mut Ctx, only: Vec<u32>) -> Res<Output> {
    let cfg = ctx.cfg.clone();
    let wants = |id: u32| only.is_empty() || only.contains(&id);
    let needs_census = [2, 3, 4, 7, 9, 10].iter().any(|&i| wants(i));
    let census = if needs_census { Some(ctx.census(cfg.required_ceiling())?) } else { None };
    let cen = || census.as_ref().expect("census built when needed");
    let mut out = Output::new();
    let mut results = Vec::new();
    for id in 1..=10u32 {
        if !wants(id) {
            continue;
        }
        results.push(match id {
            1 => acceptance::check_oracle(&cfg),
            2 => acceptance::check_dh(&cfg, cen()),
            3 => acceptance::check_phi_exact(&cfg, cen()),
            4 => acceptance::check_phi_split(&cfg, cen()),
            5 => acceptance::check_local_constants(),
            6 => acceptance::check_euler_s3(&cfg),
            7 => acceptance::check_secondary(&cfg, cen()),
            8 => acceptance::check_avg_residue(&cfg),
            9 => acceptance::check_radical(&cfg, cen()),
            _ => acceptance::check_independence(&cfg, cen()),
        });
    }
    for r in &results {
        // timings vary run to run; keep them out of the report
        let _ = writeln!(out.table, "{} [{}] {}: {}", if r.pass { "PASS" } else { "FAIL" }, r.id, r.name, r.detail);
        out.kv(&format!("check_{}", r.id), if r.pass { "PASS" } else { "FAIL" });
        out.check(r.pass);
    }
    Ok(out)
}

fn cmd_validate(ctx: &mut Ctx, external: Option<PathBuf>, oracle_bound: u64) -> Res<Output> {
    let dir = ctx.cache.clone().ok_or_else(|| Failure::Usage("validate needs --cache or CUBICFIELDS_CACHE".into()))?;
    let (m, recs) = datastore::load_cache(&dir)?;
    ctx.manifest_sha = Some(m.checksum());
    let mut out = Output::new();
    out.row(&["check".into(), "result".into(), "detail".into()]);
    out.row(&["checksums".into(), "PASS".into(), format!("{} shards, {} records", m.shards.len(), recs.len())]);
    out.check(true);
    let b = oracle_bound.min(m.ceiling).min(oracle::ORACLE_MAX_BOUND);
    let prefix: Vec<CubicFieldRecord> = recs.iter().filter(|r| r.disc.unsigned_abs() < b).copied().collect();
    let theirs = oracle::hunter_oracle(b)?;
    let list = datastore::ExternalFieldList {
        source: "oracle".into(),
        records: theirs.iter().map(|f| datastore::ExternalRecord { poly: [1, f.poly.p1, f.poly.p2, f.poly.p3], disc: f.disc }).collect(),
        bound: Some(b),
        provenance: Vec::new(),
        rejects: Vec::new(),
    };
    let diff = datastore::cross_validate(&list, &prefix, b);
    out.row(&["oracle".into(), if diff.is_empty() { "PASS" } else { "FAIL" }.into(), format!("|disc| < {b}: {} differences", diff.size())]);
    out.check(diff.is_empty());
    if let Some(path) = external {
        let list = datastore::ingest_external(&path)?;
        let diff = datastore::cross_validate(&list, &recs, m.ceiling);
        out.row(&[
            "external".into(),
            if diff.is_empty() { "PASS" } else { "FAIL" }.into(),
            format!("|disc| < {}: missing {:?} extra {:?}; {} rejected lines", diff.bound, diff.missing, diff.extra, list.rejects.len()),
        ]);
        out.kv("external_missing", diff.missing.len());
        out.kv("external_extra", diff.extra.len());
        out.check(diff.is_empty());
    }
    Ok(out)
}

fn write_summary(path: &Path, out: &Output, ctx: &Ctx) -> std::io::Result<()> {
    let mut s = String::new();
    let _ = writeln!(s, "acceptance_version={}", ctx.cfg.version);
    let _ = writeln!(s, "cache_manifest_sha256={}", ctx.manifest_sha.as_deref().unwrap_or("none"));
    for (k, v) in &out.summary {
        let _ = writeln!(s, "{k}={v}");
    }
    if let Some(p) = out.pass {
        let _ = writeln!(s, "status={}", if p { "PASS" } else { "FAIL" });
    }
    std::fs::write(path, s)
}

fn run(cli: Cli) -> Res<(Output, Ctx)> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::builtin(),
    };
    let pmax = cli.pmax.unwrap_or(cfg.pmax);
    let mut ctx = Ctx { cache: cli.cache.clone(), cfg, pmax, manifest_sha: None };
    let out = match cli.cmd {
        Cmd::Enumerate { bound, out, shard_width } => cmd_enumerate(&ctx, bound, out, shard_width),
        Cmd::Invariants { disc, form, alpha, beta } => cmd_invariants(disc, form, alpha, beta),
        Cmd::Count { alpha, beta, bound, rect, fit_secondary, samples, constraint } => {
            cmd_count(&mut ctx, alpha, beta, bound, rect, fit_secondary, samples, &constraint)
        }
        Cmd::Constants { s, f, constraint } => cmd_constants(&ctx, s, f, &constraint),
        Cmd::PhiVerify { d, zmax, all_rows, constraint } => cmd_phi_verify(&mut ctx, d, zmax, all_rows, &constraint),
        Cmd::Radical { sign, bound } => cmd_radical(&mut ctx, &sign, bound),
        Cmd::Independence { p, alpha, beta, bound, subfamily, constraint } => {
            cmd_independence(&mut ctx, p, alpha, beta, bound, subfamily, &constraint)
        }
        Cmd::Report { only } => cmd_report(&mut ctx, only),
        Cmd::Validate { external, oracle_bound } => cmd_validate(&mut ctx, external, oracle_bound),
    }?;
    Ok((out, ctx))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let summary = cli.summary.clone();
    match run(cli) {
        Ok((out, ctx)) => {
            print!("{}", out.table);
            let mut s = String::new();
            for (k, v) in &out.summary {
                let _ = writeln!(s, "{k}={v}");
            }
            print!("{s}");
            if let Some(p) = summary {
                if let Err(e) = write_summary(&p, &out, &ctx) {
                    eprintln!("error: cannot write summary {}: {e}", p.display());
                    return ExitCode::from(3);
                }
            }
            match out.pass {
                Some(false) => ExitCode::from(1),
                _ => ExitCode::SUCCESS,
            }
        }
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
