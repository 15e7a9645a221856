//! Subcommand dispatch for the `klstrata` binary.
//!
//! Every run produces one [`ReportEnvelope`]: the echoed configuration, a
//! status, and a subcommand-specific payload. JSON is the default format;
//! `kl-table` and `strata-scan` also emit CSV, prefixed with `# key=value`
//! comment lines carrying the envelope fields.
//!
//! Exit codes: 0 ok, 2 precondition failed, 3 resource limit, 4 numerical
//! error, 5 i/o error, 64 usage error.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{CommandFactory, Parser, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bilinear::{self, Family, ShiftParams, SumType};
use crate::chars::{classify_tuple, twist_to_cgm, CharTuple};
use crate::complete::{complete_sums, sigma_ii, ParamTuple};
use crate::error::{Error, Result};
use crate::field::{divisors, prime_factors, PrimeField};
use crate::kloosterman::{fourier_identity_check, kl_naive_table, kl_table_fast, max_relative_gap, KlTable};
use crate::ladder::{run_ladder, LadderConfig};
use crate::strata::{self, BoxShape, Sampler, Variety};

pub const SCHEMA: &str = "klstrata-report/v1";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Output paths are resolved against this directory when it is set.
pub const OUTPUT_DIR_ENV: &str = "KLSTRATA_OUTPUT_DIR";

pub const SUBCOMMANDS: [&str; 11] = [
    "field-info",
    "char-classify",
    "kl-table",
    "kl-verify",
    "complete-sum",
    "strata-scan",
    "box-count",
    "bound-check",
    "bilinear-bench",
    "moment-check",
    "avg-compare",
];

pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum VarietyKind {
    Diagonal,
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeArg {
    Closed,
    HalfOpen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
pub enum KindArg {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyArg {
    FullSample,
    PowerSum,
}

/// One invocation. Every field is echoed in the report.
#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "klstrata", version, about = "Kloosterman sums, complete sums and parameter strata over F_q")]
pub struct RunConfig {
    /// One of: field-info, char-classify, kl-table, kl-verify, complete-sum,
    /// strata-scan, box-count, bound-check, bilinear-bench, moment-check,
    /// avg-compare.
    pub subcommand: String,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub l: Option<usize>,
    /// Character indices mod q-1, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub chars: Option<Vec<u64>>,
    /// Parameter tuple, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub b: Option<Vec<i64>>,
    #[arg(long, default_value_t = 1)]
    pub scale: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub exhaustive: bool,
    /// Box radius B.
    #[arg(long = "box")]
    pub box_b: Option<u64>,
    #[arg(long, value_enum, default_value_t = ShapeArg::Closed)]
    pub box_shape: ShapeArg,
    #[arg(long, value_enum, default_value_t = VarietyKind::Diagonal)]
    pub variety: VarietyKind,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Dualizing characters for moment-check, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub xi: Option<Vec<u64>>,
    /// Field elements, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub points: Option<Vec<i64>>,
    /// Primes for bound-check, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub primes: Option<Vec<u64>>,
    #[arg(long)]
    pub m_len: Option<u64>,
    #[arg(long)]
    pub n_len: Option<u64>,
    #[arg(long)]
    pub a_len: Option<u64>,
    #[arg(long)]
    pub b_len: Option<u64>,
    #[arg(long, value_enum, default_value_t = KindArg::II)]
    pub kind: KindArg,
    #[arg(long, value_enum, default_value_t = FamilyArg::FullSample)]
    pub family: FamilyArg,
    #[arg(long)]
    pub power_n: Option<usize>,
    #[arg(long)]
    pub power_m: Option<u32>,
    /// Also evaluate Σ_II by the direct double sum.
    #[arg(long)]
    pub direct: bool,
    /// Record wall-clock time in the report (breaks byte-identical output).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    PreconditionFailed,
    ResourceLimit,
    NumericalError,
    IoError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::PreconditionFailed => 2,
            Status::ResourceLimit => 3,
            Status::NumericalError => 4,
            Status::IoError => 5,
        }
    }

    fn of(e: &Error) -> Status {
        match e {
            Error::NotPrime(..) | Error::Precondition(_) | Error::Domain(_) | Error::DegenerateFiber => {
                Status::PreconditionFailed
            }
            Error::ResourceLimit(_) => Status::ResourceLimit,
            Error::NumericalInstability { .. } | Error::InternalConsistency(_) => Status::NumericalError,
            Error::Io(_) => Status::IoError,
        }
    }
}

/// CSV body: fixed header and rows.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportEnvelope {
    pub schema: &'static str,
    pub version: &'static str,
    pub config: RunConfig,
    pub status: Status,
    pub payload: Option<Value>,
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<f64>,
    #[serde(skip)]
    pub table: Option<Table>,
}

impl ReportEnvelope {
    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }
}

fn field_of(cfg: &RunConfig) -> Result<Arc<PrimeField>> {
    let q = cfg.q.ok_or_else(|| Error::Precondition("--q is required".into()))?;
    Ok(Arc::new(PrimeField::new(q)?))
}

fn tuple_of(cfg: &RunConfig, field: &PrimeField) -> Result<CharTuple> {
    match (&cfg.chars, cfg.k) {
        (Some(c), Some(k)) if c.len() != k => Err(Error::Precondition(format!(
            "--chars has {} entries but --k is {k}",
            c.len()
        ))),
        (Some(c), _) => CharTuple::from_indices(field, c),
        (None, k) => Ok(CharTuple::trivial(field, k.unwrap_or(2))),
    }
}

fn table_of(cfg: &RunConfig, field: &Arc<PrimeField>) -> Result<KlTable> {
    let t = tuple_of(cfg, field)?;
    kl_table_fast(field, &t, cfg.scale)
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn field_info(cfg: &RunConfig) -> Result<Value> {
    let f = field_of(cfg)?;
    let points: Vec<Value> = cfg
        .points
        .iter()
        .flatten()
        .map(|&x| {
            let x = f.reduce(x);
            if x == 0 {
                json!({ "x": 0, "dlog": null })
            } else {
                json!({ "x": x, "dlog": f.dlog(x) })
            }
        })
        .collect();
    Ok(json!({
        "q": f.q(),
        "order": f.order(),
        "generator": f.generator(),
        "order_factors": prime_factors(f.order()),
        "order_divisors": divisors(f.order()),
        "quadratic_char": f.quadratic_char().index(),
        "points": points,
    }))
}

fn char_classify(cfg: &RunConfig) -> Result<Value> {
    let f = field_of(cfg)?;
    let t = tuple_of(cfg, &f)?;
    Ok(json!({
        "chars": t.indices(),
        "classification": to_value(&classify_tuple(&t)),
        "twist": to_value(&twist_to_cgm(&t)),
    }))
}

fn kl_table_cmd(cfg: &RunConfig) -> Result<(Value, Table)> {
    let f = field_of(cfg)?;
    let table = table_of(cfg, &f)?;
    let mut rows = Vec::with_capacity(f.q() as usize - 1);
    let mut values = Vec::with_capacity(f.q() as usize - 1);
    for x in 1..f.q() {
        let z = table.get(x);
        rows.push(vec![x.to_string(), format!("{:e}", z.re), format!("{:e}", z.im)]);
        values.push(json!({ "x": x, "re": z.re, "im": z.im }));
    }
    let payload = json!({
        "q": f.q(),
        "chars": table.tuple().indices(),
        "scale": table.scale(),
        "sup_norm": table.sup_norm(),
        "values": values,
    });
    let csv = Table {
        header: vec!["x".into(), "re".into(), "im".into()],
        rows,
    };
    Ok((payload, csv))
}

/// Tolerance for the naive/fast table comparison.
pub const KL_VERIFY_TOL: f64 = 1e-9;

fn kl_verify(cfg: &RunConfig) -> Result<Value> {
    use rand::{Rng, SeedableRng};
    let f = field_of(cfg)?;
    let t = tuple_of(cfg, &f)?;
    let fast = kl_table_fast(&f, &t, cfg.scale)?;
    let naive = kl_naive_table(&f, &t, cfg.scale)?;
    let gap = max_relative_gap(&fast, &naive);
    if gap > KL_VERIFY_TOL {
        return Err(Error::NumericalInstability {
            direct: gap,
            rearranged: KL_VERIFY_TOL,
        });
    }
    let unscaled = kl_table_fast(&f, &t, 1)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut fourier = Vec::new();
    let mut max_fourier: f64 = 0.0;
    for _ in 0..cfg.samples.unwrap_or(5) {
        let lambda = f.char(rng.gen_range(0..f.order()));
        let c = fourier_identity_check(&unscaled, &lambda)?;
        max_fourier = max_fourier.max(c.diff);
        fourier.push(json!({ "lambda": lambda.index(), "diff": c.diff }));
    }
    Ok(json!({
        "q": f.q(),
        "chars": t.indices(),
        "scale": cfg.scale,
        "max_relative_gap": gap,
        "tolerance": KL_VERIFY_TOL,
        "sup_norm": fast.sup_norm(),
        "fourier": fourier,
        "max_fourier_diff": max_fourier,
    }))
}

fn param_of(cfg: &RunConfig, field: &PrimeField) -> Result<ParamTuple> {
    let b = cfg.b.as_ref().ok_or_else(|| Error::Precondition("--b is required".into()))?;
    let pt = ParamTuple::reduced(field, b)?;
    if let Some(l) = cfg.l {
        if pt.l() != l {
            return Err(Error::Precondition(format!("--b has length {} but --l is {l}", b.len())));
        }
    }
    Ok(pt)
}

fn complete_sum_cmd(cfg: &RunConfig) -> Result<Value> {
    let f = field_of(cfg)?;
    let table = table_of(cfg, &f)?;
    let b = param_of(cfg, &f)?;
    let mut rep = if cfg.direct {
        sigma_ii(&table, &b, true)?
    } else {
        complete_sums(&table, &b)?
    };
    rep.stratum = strata::z_fiber_count(&f, table.k(), &b).ok();
    Ok(to_value(&rep))
}

fn strata_scan_cmd(cfg: &RunConfig) -> Result<(Value, Table)> {
    let f = field_of(cfg)?;
    let k = cfg.k.unwrap_or(2);
    let l = cfg.l.unwrap_or(2);
    let sampler = if cfg.exhaustive {
        Sampler::Exhaustive
    } else {
        Sampler::Random {
            samples: cfg.samples.unwrap_or(1000),
            seed: cfg.seed,
        }
    };
    let scan = strata::stratum_scan(&f, k, l, sampler)?;
    let mut header: Vec<String> = (1..=2 * l).map(|i| format!("b{i}")).collect();
    header.extend(["deg_P", "z_count", "generic"].map(String::from));
    let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
    let rows = scan
        .rows
        .iter()
        .map(|r| {
            let mut row: Vec<String> = r.b.iter().map(|x| x.to_string()).collect();
            row.push(opt(r.deg_p));
            row.push(opt(r.z_count));
            row.push(r.generic.to_string());
            row
        })
        .collect();
    Ok((to_value(&scan), Table { header, rows }))
}

fn box_count_cmd(cfg: &RunConfig) -> Result<Value> {
    let f = field_of(cfg)?;
    let l = cfg.l.unwrap_or(2);
    let big_b = cfg.box_b.ok_or_else(|| Error::Precondition("--box is required".into()))?;
    let variety = match cfg.variety {
        VarietyKind::Diagonal => Variety::Diagonal,
        VarietyKind::Empty => Variety::Empty,
    };
    let shape = match cfg.box_shape {
        ShapeArg::Closed => BoxShape::Closed,
        ShapeArg::HalfOpen => BoxShape::HalfOpen,
    };
    let count = strata::box_count_variety(&f, &variety, big_b, l, shape)?;
    let b = big_b as f64;
    Ok(json!({
        "q": f.q(),
        "l": l,
        "box": big_b,
        "shape": to_value(&shape),
        "variety": to_value(&variety),
        "count": count,
        "count_over_b_pow_l": if big_b == 0 { Value::Null } else { json!(count as f64 / b.powi(l as i32)) },
    }))
}

fn bound_check(cfg: &RunConfig) -> Result<Value> {
    let mut lc = LadderConfig {
        seed: cfg.seed,
        ..LadderConfig::default()
    };
    if let Some(p) = &cfg.primes {
        lc.primes = p.clone();
    }
    if let Some(s) = cfg.samples {
        lc.samples = s;
    }
    if let Some(k) = cfg.k {
        lc.k = k;
    }
    if let Some(l) = cfg.l {
        lc.l = l;
    }
    Ok(to_value(&run_ladder(&lc)?))
}

fn bilinear_bench_cmd(cfg: &RunConfig) -> Result<Value> {
    let f = field_of(cfg)?;
    let table = table_of(cfg, &f)?;
    let m = cfg.m_len.unwrap_or(10);
    let n = cfg.n_len.unwrap_or(10);
    let l = cfg.l.unwrap_or(2);
    let kind = match cfg.kind {
        KindArg::I => SumType::I,
        KindArg::II => SumType::II,
    };
    let bench = bilinear::bilinear_bench(&table, m, n, l as u32, kind, cfg.seed)?;
    let shift = match (cfg.a_len, cfg.b_len) {
        (Some(a), Some(b)) => {
            let alpha = bilinear::CoeffSeq::random_phases(m, cfg.seed);
            let p = ShiftParams { n, a, b, l };
            Some(to_value(&bilinear::shift_reduction_trace(&table, &alpha, p)?))
        }
        (None, None) => None,
        _ => return Err(Error::Precondition("--a-len and --b-len go together".into())),
    };
    Ok(json!({ "bench": to_value(&bench), "shift_trace": shift }))
}

fn moment_check_cmd(cfg: &RunConfig) -> Result<Value> {
    let f = field_of(cfg)?;
    let xis = cfg.xi.clone().unwrap_or_else(|| vec![0]);
    let ns = cfg.points.clone().unwrap_or_else(|| vec![1, 2, 3]);
    let mut checks = Vec::new();
    let mut max_diff: f64 = 0.0;
    for &xi in &xis {
        for &n in &ns {
            let c = bilinear::moment_identity_check(&f, &f.char(xi), f.reduce(n))?;
            max_diff = max_diff.max(c.diff);
            checks.push(to_value(&c));
        }
    }
    Ok(json!({ "q": f.q(), "checks": checks, "max_diff": max_diff }))
}

fn avg_compare_cmd(cfg: &RunConfig) -> Result<Value> {
    let f = field_of(cfg)?;
    let table = table_of(cfg, &f)?;
    let (l, family) = match cfg.family {
        FamilyArg::FullSample => (
            cfg.l.unwrap_or(2),
            Family::FullSample {
                samples: cfg.samples.unwrap_or(20),
                seed: cfg.seed,
            },
        ),
        FamilyArg::PowerSum => {
            let n = cfg.power_n.unwrap_or(4);
            (
                n / 2,
                Family::PowerSum {
                    n,
                    m: cfg.power_m.unwrap_or(1),
                },
            )
        }
    };
    Ok(to_value(&bilinear::averaged_comparison(&table, l, family)?))
}

fn dispatch(cfg: &RunConfig) -> Result<(Value, Option<Table>)> {
    let json_only = |v: Result<Value>| v.map(|v| (v, None));
    let tabular = |v: Result<(Value, Table)>| v.map(|(v, t)| (v, Some(t)));
    match cfg.subcommand.as_str() {
        "field-info" => json_only(field_info(cfg)),
        "char-classify" => json_only(char_classify(cfg)),
        "kl-table" => tabular(kl_table_cmd(cfg)),
        "kl-verify" => json_only(kl_verify(cfg)),
        "complete-sum" => json_only(complete_sum_cmd(cfg)),
        "strata-scan" => tabular(strata_scan_cmd(cfg)),
        "box-count" => json_only(box_count_cmd(cfg)),
        "bound-check" => json_only(bound_check(cfg)),
        "bilinear-bench" => json_only(bilinear_bench_cmd(cfg)),
        "moment-check" => json_only(moment_check_cmd(cfg)),
        "avg-compare" => json_only(avg_compare_cmd(cfg)),
        other => Err(Error::Precondition(format!("unknown subcommand {other}"))),
    }
}

/// Runs one configuration on a pool of `cfg.threads` workers.
pub fn run(cfg: &RunConfig) -> ReportEnvelope {
    let start = Instant::now();
    let outcome = if cfg.format == Format::Csv && !matches!(cfg.subcommand.as_str(), "kl-table" | "strata-scan") {
        Err(Error::Precondition("csv output is available for kl-table and strata-scan".into()))
    } else {
        match rayon::ThreadPoolBuilder::new().num_threads(cfg.threads.max(1)).build() {
            Ok(pool) => pool.install(|| dispatch(cfg)),
            Err(e) => Err(Error::ResourceLimit(format!("thread pool: {e}"))),
        }
    };
    let wall = cfg.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    match outcome {
        Ok((payload, table)) => ReportEnvelope {
            schema: SCHEMA,
            version: VERSION,
            config: cfg.clone(),
            status: Status::Ok,
            payload: Some(payload),
            error: None,
            wall_clock_ms: wall,
            table,
        },
        Err(e) => ReportEnvelope {
            schema: SCHEMA,
            version: VERSION,
            config: cfg.clone(),
            status: Status::of(&e),
            payload: None,
            error: Some(e.to_string()),
            wall_clock_ms: wall,
            table: None,
        },
    }
}

/// Serializes a report in the requested format.
pub fn emit(report: &ReportEnvelope, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(report).map_err(|e| Error::Io(e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut out = Vec::new();
            let config = serde_json::to_string(&report.config).map_err(|e| Error::Io(e.to_string()))?;
            let status = serde_json::to_value(report.status).map_err(|e| Error::Io(e.to_string()))?;
            writeln!(out, "# schema={}", report.schema)?;
            writeln!(out, "# version={}", report.version)?;
            writeln!(out, "# status={}", status.as_str().unwrap_or_default())?;
            writeln!(out, "# config={config}")?;
            if let Some(e) = &report.error {
                writeln!(out, "# error={e}")?;
            }
            if let Some(ms) = report.wall_clock_ms {
                writeln!(out, "# wall_clock_ms={ms}")?;
            }
            if let Some(t) = &report.table {
                let mut w = csv::Writer::from_writer(&mut out);
                w.write_record(&t.header).map_err(|e| Error::Io(e.to_string()))?;
                for row in &t.rows {
                    w.write_record(row).map_err(|e| Error::Io(e.to_string()))?;
                }
                w.flush()?;
            }
            Ok(out)
        }
    }
}

fn resolve_output(path: &PathBuf) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
        _ => path.clone(),
    }
}

/// Parses the process arguments, runs, writes the report and returns the
/// exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    if !SUBCOMMANDS.contains(&cfg.subcommand.as_str()) {
        let mut cmd = RunConfig::command();
        eprintln!("error: unknown subcommand '{}'\n", cfg.subcommand);
        eprintln!("{}", cmd.render_usage());
        eprintln!("subcommands: {}", SUBCOMMANDS.join(", "));
        return EXIT_USAGE;
    }
    let report = run(&cfg);
    let bytes = match emit(&report, cfg.format) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return Status::IoError.exit_code();
        }
    };
    let written = match &cfg.output {
        Some(p) => std::fs::write(resolve_output(p), &bytes),
        None => std::io::stdout().write_all(&bytes),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return Status::IoError.exit_code();
    }
    if let Some(e) = &report.error {
        eprintln!("error: {e}");
    }
    report.exit_code()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &[&str]) -> RunConfig {
        let mut v = vec!["klstrata"];
        v.extend_from_slice(args);
        RunConfig::try_parse_from(v).unwrap()
    }

    #[test]
    fn salie_is_kummer_induced() {
        let r = run(&cfg(&["char-classify", "--q", "5", "--k", "2", "--chars", "0,2"]));
        assert_eq!(r.status, Status::Ok);
        assert_eq!(r.payload.unwrap()["classification"]["kummer_induced"], json!(true));
    }

    #[test]
    fn composite_modulus_fails() {
        let r = run(&cfg(&["field-info", "--q", "91"]));
        assert_eq!(r.status, Status::PreconditionFailed);
        assert_eq!(r.exit_code(), 2);
        assert!(r.payload.is_none());
    }

    #[test]
    fn kl_table_csv_header() {
        let c = cfg(&["kl-table", "--q", "7", "--format", "csv"]);
        let out = String::from_utf8(emit(&run(&c), Format::Csv).unwrap()).unwrap();
        let body: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body[0], "x,re,im");
        assert_eq!(body.len(), 7);
    }

    #[test]
    fn json_round_trip() {
        let r = run(&cfg(&["moment-check", "--q", "13"]));
        let bytes = emit(&r, Format::Json).unwrap();
        let v: Value = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(v, serde_json::to_value(&r).unwrap());
        assert_eq!(v["status"], json!("ok"));
    }

    #[test]
    fn csv_rejected_for_json_only() {
        let r = run(&cfg(&["field-info", "--q", "13", "--format", "csv"]));
        assert_eq!(r.status, Status::PreconditionFailed);
    }

    #[test]
    fn unknown_subcommand_is_usage_error() {
        assert_eq!(main_with_args(["klstrata", "frobnicate"]), EXIT_USAGE);
    }
}
