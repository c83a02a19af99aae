use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use hyperholo_core::field::PolynomialField;
use hyperholo_core::functions::catalog;
use hyperholo_core::integrate::gauss_check;
use hyperholo_core::verify::{
    closure_check, convergence_study, cr_check, cullen_lemma_check, equivalence_check,
    fueter_theorem_check, hyperholomorphic_check, integral_theorem_check,
};
use hyperholo_core::{CheckReport, ComplexLikePair, Side, Suite};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::{ConfigError, GeneratorEntry, RunConfig};

/// All checks met their expectation.
pub const EXIT_OK: i32 = 0;
/// At least one check missed its expectation.
pub const EXIT_FAILED: i32 = 1;
/// Bad configuration or invocation.
pub const EXIT_USAGE: i32 = 2;

/// Result of one command: whether every expectation held, what was written,
/// and a human-readable line per check.
#[derive(Debug, Default)]
pub struct Outcome {
    pub ok: bool,
    pub files: Vec<PathBuf>,
    pub lines: Vec<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.ok {
            EXIT_OK
        } else {
            EXIT_FAILED
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    ExpectedFail,
    UnexpectedPass,
    Skipped,
}

impl Verdict {
    pub fn ok(&self) -> bool {
        matches!(
            self,
            Verdict::Pass | Verdict::ExpectedFail | Verdict::Skipped
        )
    }

    fn tag(&self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::ExpectedFail => "XFAIL",
            Verdict::UnexpectedPass => "XPASS",
            Verdict::Skipped => "SKIP",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct Record {
    command: &'static str,
    name: String,
    verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<CheckReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    skip_reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
}

struct Sink {
    command: &'static str,
    timestamp: Option<u64>,
    jsonl: Vec<u8>,
    summary: csv::Writer<Vec<u8>>,
    outcome: Outcome,
}

impl Sink {
    fn new(command: &'static str, config: &RunConfig) -> Self {
        let timestamp = config.timestamp.then(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        });
        let mut summary = csv::Writer::from_writer(Vec::new());
        summary
            .write_record(["name", "max_residual", "tolerance", "passed"])
            .expect("in-memory write");
        Self {
            command,
            timestamp,
            jsonl: Vec::new(),
            summary,
            outcome: Outcome {
                ok: true,
                ..Outcome::default()
            },
        }
    }

    fn push_value(&mut self, mut value: Map<String, Value>) {
        value.insert("command".into(), Value::from(self.command));
        if let Some(ts) = self.timestamp {
            value.insert("timestamp".into(), Value::from(ts));
        }
        serde_json::to_writer(&mut self.jsonl, &value).expect("in-memory write");
        self.jsonl.push(b'\n');
    }

    fn push(
        &mut self,
        name: String,
        verdict: Verdict,
        report: Option<CheckReport>,
        skip_reason: Option<String>,
    ) {
        self.outcome.ok &= verdict.ok();
        let line = match &report {
            Some(r) => format!(
                "{:5} {name} max={:.3e} tol={:.1e}",
                verdict.tag(),
                r.max_abs_residual,
                r.tolerance
            ),
            None => format!(
                "{:5} {name} ({})",
                verdict.tag(),
                skip_reason.as_deref().unwrap_or("")
            ),
        };
        self.outcome.lines.push(line);
        if let Some(r) = &report {
            self.summary
                .write_record([
                    name.clone(),
                    format!("{:e}", r.max_abs_residual),
                    format!("{:e}", r.tolerance),
                    r.passed.to_string(),
                ])
                .expect("in-memory write");
        }
        let record = Record {
            command: self.command,
            name,
            verdict,
            report,
            skip_reason,
            timestamp: self.timestamp,
        };
        serde_json::to_writer(&mut self.jsonl, &record).expect("in-memory write");
        self.jsonl.push(b'\n');
    }

    fn finish(mut self, out: &Path) -> Result<Outcome, ConfigError> {
        let jsonl = out.join(format!("{}.jsonl", self.command));
        write_atomic(&jsonl, &self.jsonl)?;
        let summary = out.join(format!("{}-summary.csv", self.command));
        let bytes = self
            .summary
            .into_inner()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        write_atomic(&summary, &bytes)?;
        self.outcome.files.push(jsonl);
        self.outcome.files.push(summary);
        Ok(self.outcome)
    }
}

/// Write through a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), ConfigError> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let io = |source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    };
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn build(entry: &GeneratorEntry) -> Result<ComplexLikePair, ConfigError> {
    Ok(entry.spec.build()?)
}

fn expectation(report: &CheckReport, expect_fail: bool) -> Verdict {
    match (report.passed, expect_fail) {
        (true, false) => Verdict::Pass,
        (false, false) => Verdict::Fail,
        (false, true) => Verdict::ExpectedFail,
        (true, true) => Verdict::UnexpectedPass,
    }
}

/// Residual suites for every generator.
///
/// For generators marked `expect_fail` the pointwise suites must fail, the
/// equivalence suite must pass with the verdict "not hyperholomorphic", and
/// the closure and Laplacian suites are skipped (their hypotheses do not hold).
pub fn run_verify(config: &RunConfig) -> Result<Outcome, ConfigError> {
    config.validate()?;
    let tol = &config.tolerances;
    let window = &config.window;
    let mut sink = Sink::new("verify", config);
    let pairs: Vec<(&GeneratorEntry, ComplexLikePair)> = config
        .generators
        .iter()
        .map(|g| build(g).map(|f| (g, f)))
        .collect::<Result<_, _>>()?;
    let regular: Vec<&(&GeneratorEntry, ComplexLikePair)> =
        pairs.iter().filter(|(g, _)| !g.expect_fail).collect();
    for (entry, f) in &pairs {
        let label = &entry.text;
        for suite in &config.suites {
            let name = format!("{suite}[{label}]");
            match suite {
                Suite::Cr | Suite::Hyperholomorphic | Suite::CullenLemma | Suite::FueterTheorem
                    if !(entry.expect_fail && *suite == Suite::FueterTheorem) =>
                {
                    let report = match suite {
                        Suite::Cr => cr_check(f, window, tol)?,
                        Suite::Hyperholomorphic => hyperholomorphic_check(f, window, tol)?,
                        Suite::CullenLemma => cullen_lemma_check(f, window, tol)?,
                        _ => fueter_theorem_check(f, window, tol)?,
                    };
                    let verdict = expectation(&report, entry.expect_fail);
                    sink.push(name, verdict, Some(report), None);
                }
                Suite::Equivalence => {
                    let report = equivalence_check(f, window, tol)?;
                    let expected = if entry.expect_fail {
                        "not hyperholomorphic"
                    } else {
                        "hyperholomorphic"
                    };
                    let verdict = if report.passed
                        && report.metadata.get("verdict") == Some(&Value::from(expected))
                    {
                        Verdict::Pass
                    } else {
                        Verdict::Fail
                    };
                    sink.push(name, verdict, Some(report), None);
                }
                Suite::Closure if !entry.expect_fail => {
                    let start = regular
                        .iter()
                        .position(|(g, _)| std::ptr::eq(*g, *entry))
                        .unwrap_or(0);
                    for (g_entry, g) in &regular[start..] {
                        let report = closure_check(f, g, window, tol)?;
                        let verdict = expectation(&report, false);
                        sink.push(
                            format!("closure[{label};{}]", g_entry.text),
                            verdict,
                            Some(report),
                            None,
                        );
                    }
                }
                _ => sink.push(
                    name,
                    Verdict::Skipped,
                    None,
                    Some("hypothesis does not hold for a non-example".into()),
                ),
            }
        }
    }
    sink.finish(&config.out)
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Left => "left",
        Side::Right => "right",
    }
}

/// Integral theorem for every generator, region and side.
pub fn run_integral(config: &RunConfig) -> Result<Outcome, ConfigError> {
    config.validate()?;
    let mut sink = Sink::new("integral", config);
    for entry in &config.generators {
        let f = build(entry)?;
        for region in &config.regions {
            for side in &config.sides {
                let name = format!("integral[{};{region};{}]", entry.text, side_name(*side));
                if entry.expect_fail {
                    sink.push(name, Verdict::Skipped, None, Some("non-example".into()));
                    continue;
                }
                let report =
                    integral_theorem_check(&f, region, &config.spec, *side, &config.tolerances)?;
                let mut flat = Map::new();
                flat.insert("name".into(), Value::from(name.as_str()));
                flat.insert("generator".into(), Value::from(entry.text.as_str()));
                flat.insert("side".into(), Value::from(side_name(*side)));
                for key in [
                    "lhs",
                    "rhs",
                    "middle",
                    "abs_diff",
                    "rel_diff",
                    "middle_lhs_rel_diff",
                    "middle_rhs_rel_diff",
                    "spec",
                    "region",
                ] {
                    flat.insert(
                        key.into(),
                        report.metadata.get(key).cloned().unwrap_or(Value::Null),
                    );
                }
                flat.insert("tolerance".into(), Value::from(report.tolerance));
                flat.insert("passed".into(), Value::from(report.passed));
                let verdict = expectation(&report, false);
                sink.outcome.ok &= verdict.ok();
                sink.outcome.lines.push(format!(
                    "{:5} {name} abs_diff={:.3e} rel_diff={:.3e}",
                    verdict.tag(),
                    report.metadata["abs_diff"].as_f64().unwrap_or(f64::NAN),
                    report.max_abs_residual
                ));
                sink.summary
                    .write_record([
                        name.clone(),
                        format!("{:e}", report.max_abs_residual),
                        format!("{:e}", report.tolerance),
                        report.passed.to_string(),
                    ])
                    .expect("in-memory write");
                sink.push_value(flat);
            }
        }
    }
    sink.finish(&config.out)
}

/// Mismatch of the integral theorem over `config.specs`, one CSV per
/// (generator, region) pair named `convergence-<g>-<r>.csv`.
pub fn run_convergence(config: &RunConfig) -> Result<Outcome, ConfigError> {
    config.validate()?;
    if config.specs.len() < 2 {
        return Err(ConfigError::Invalid(
            "convergence needs at least two specs".into(),
        ));
    }
    let mut sink = Sink::new("convergence", config);
    let mut csv_files = Vec::new();
    for (gi, entry) in config.generators.iter().enumerate() {
        if entry.expect_fail {
            continue;
        }
        let f = build(entry)?;
        for (ri, region) in config.regions.iter().enumerate() {
            let study =
                convergence_study(&f, region, &config.specs, Side::Left, &config.tolerances)?;
            let path = config.out.join(format!("convergence-{gi}-{ri}.csv"));
            write_atomic(&path, study.to_csv().as_bytes())?;
            let report = study.check().with(
                "csv",
                path.file_name().and_then(|n| n.to_str()).unwrap_or(""),
            );
            let verdict = expectation(&report, false);
            sink.push(
                format!("convergence[{};{region}]", entry.text),
                verdict,
                Some(report),
                None,
            );
            sink.outcome
                .lines
                .extend(study.to_csv().lines().map(|l| format!("      {l}")));
            csv_files.push(path);
        }
    }
    let mut outcome = sink.finish(&config.out)?;
    outcome.files.extend(csv_files);
    Ok(outcome)
}

/// Divergence theorem on random polynomial fields for each region.
pub fn run_gauss_selftest(config: &RunConfig) -> Result<Outcome, ConfigError> {
    config.window.validate()?;
    let mut sink = Sink::new("gauss", config);
    let mut rng = ChaCha8Rng::seed_from_u64(config.window.seed);
    for region in &config.regions {
        let identity = gauss_check(
            &PolynomialField::identity(),
            region,
            &config.spec,
            config.tolerances.gauss,
        );
        sink.push(
            format!("gauss[identity;{region}]"),
            expectation(&identity, false),
            Some(identity),
            None,
        );
        for k in 0..config.gauss_fields {
            let field = PolynomialField::random(config.gauss_degree, &mut rng);
            let report = gauss_check(&field, region, &config.spec, config.tolerances.gauss);
            sink.push(
                format!("gauss[random-{k};{region}]"),
                expectation(&report, false),
                Some(report),
                None,
            );
        }
    }
    sink.finish(&config.out)
}

/// Text form and description of every generator.
pub fn list_generators() -> String {
    let width = catalog().iter().map(|(t, _)| t.len()).max().unwrap_or(0);
    catalog()
        .iter()
        .map(|(t, d)| format!("{t:width$}  {d}\n"))
        .collect()
}

fn report_outcome(result: Result<Outcome, ConfigError>) -> i32 {
    match result {
        Ok(outcome) => {
            for line in &outcome.lines {
                println!("{line}");
            }
            for file in &outcome.files {
                eprintln!("wrote {}", file.display());
            }
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn cmd_verify(config: &RunConfig) -> i32 {
    report_outcome(run_verify(config))
}

pub fn cmd_integral(config: &RunConfig) -> i32 {
    report_outcome(run_integral(config))
}

pub fn cmd_convergence(config: &RunConfig) -> i32 {
    report_outcome(run_convergence(config))
}

pub fn cmd_gauss_selftest(config: &RunConfig) -> i32 {
    report_outcome(run_gauss_selftest(config))
}

pub fn cmd_list_generators() -> i32 {
    print!("{}", list_generators());
    EXIT_OK
}
