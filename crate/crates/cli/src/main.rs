use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use reebix::bott::{infer_bott, iterated_index, iterated_nullity, mean_index, InferOptions};
use reebix::chomology::{audit, prequant_rank, AuditOptions, Mode, Orbit, Verdict};
use reebix::cijt::{find_jump, JumpOptions};
use reebix::json::{
    catalog_json, certificate_json, orbit_from_json, orbit_json, orbits_from_json, parse_str,
    path_from_json, path_json, profile_from_json, profile_json, rational_from_json, real_from_json,
    report_json, to_canonical_string, tolerances_json, SCHEMA_VERSION,
};
use reebix::models::{catalog_profile, ellipsoid_catalog, EllipsoidSpec};
use reebix::sympath::{index_triple_with, iterate_path, rs_index_with, IndexMode, IndexOptions};
use reebix::{Error, Tolerances};

#[derive(Parser, Debug)]
#[command(
    name = "reebix",
    version,
    about = "Index computations and audits for periodic Reeb orbits"
)]
struct Cli {
    #[command(flatten)]
    cfg: Config,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug)]
struct Config {
    /// Symplecticity tolerance for sampled matrices.
    #[arg(long, global = true, default_value_t = Tolerances::default().sympl)]
    tau_sympl: f64,
    /// Relative rank threshold for kernels.
    #[arg(long, global = true, default_value_t = Tolerances::default().rank)]
    tau_rank: f64,
    /// Smallest adaptive time step.
    #[arg(long, global = true, default_value_t = Tolerances::default().time)]
    tau_time: f64,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Engine {
    Auto,
    Sampled,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum AuditMode {
    Positive,
    Negative,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Conley-Zehnder and Robbin-Salamon indices of a path.
    Index {
        #[arg(long)]
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Engine::Auto)]
        engine: Engine,
    },
    /// Bott data inferred from a path.
    Bott {
        #[arg(long)]
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Engine::Auto)]
        engine: Engine,
        /// Largest iterate used by the inference.
        #[arg(long)]
        max_k: Option<u64>,
    },
    /// Index table of the iterates of a path or an orbit.
    Iterate {
        #[arg(long, conflicts_with = "orbit", required_unless_present = "orbit")]
        path: Option<PathBuf>,
        #[arg(long)]
        orbit: Option<PathBuf>,
        /// Iterates 1..=K.
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..))]
        up_to: u32,
    },
    /// Common index jump certificate.
    Cijt {
        #[arg(long)]
        orbits: PathBuf,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        n0: u64,
        #[arg(long)]
        epsilon: Option<String>,
        #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
        bound: u64,
        #[arg(long)]
        frac_delta: Option<String>,
        /// Orbits have negative mean index.
        #[arg(long)]
        mirrored: bool,
    },
    /// Contact homology ranks of a prequantization profile.
    Homology {
        #[arg(long)]
        profile: PathBuf,
        /// Degree range `a..b`, inclusive.
        #[arg(long)]
        degrees: String,
    },
    /// Audit an orbit catalog.
    Audit {
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        relaxed_threshold: Option<i64>,
        #[arg(long, value_enum, default_value_t = AuditMode::Positive)]
        mode: AuditMode,
        #[arg(long, default_value_t = AuditOptions::default().search_bound, value_parser = clap::value_parser!(u64).range(1..))]
        bound: u64,
        /// Largest degree the Morse scan may reach.
        #[arg(long, default_value_t = AuditOptions::default().max_degree, value_parser = clap::value_parser!(i64).range(1..))]
        max_degree: i64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Fixture catalogs and profiles.
    Models {
        #[command(subcommand)]
        which: ModelsCommand,
    },
}

#[derive(Subcommand, Debug)]
enum ModelsCommand {
    /// Catalog of the ellipsoid with the given aspects.
    Ellipsoid {
        /// Comma separated: integers, `p/q`, or decimals (treated as irrational).
        #[arg(long, value_delimiter = ',', required = true)]
        aspects: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A standard profile.
    Profile {
        #[arg(long)]
        name: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Mean-index constant; needed for non-sphere profiles.
        #[arg(long)]
        i: Option<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure of a run together with its exit status.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(err: anyhow::Error) -> Self {
        let code = match err.downcast_ref::<Error>() {
            Some(Error::BoundedSearch { .. }) => 2,
            Some(Error::Precision(_)) => 5,
            _ => 1,
        };
        Failure { code, err }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::new(e).into()
    }
}

/// Emitted document and the exit code it maps to.
struct Output {
    doc: Value,
    code: u8,
}

fn read_json(path: &Path) -> anyhow::Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_json(path: &Path, v: &Value) -> anyhow::Result<()> {
    fs::write(path, to_canonical_string(v) + "\n")
        .with_context(|| format!("writing {}", path.display()))
}

fn rational_arg(s: &str, what: &str) -> anyhow::Result<reebix::Rational> {
    rational_from_json(&Value::String(s.trim().to_string()))
        .with_context(|| format!("{what} must be a rational"))
}

fn aspect_arg(s: &str) -> anyhow::Result<reebix::Real> {
    let s = s.trim();
    let v = if s.contains('.') || s.contains('e') || s.contains('E') {
        let x: f64 = s.parse().with_context(|| format!("bad aspect {s:?}"))?;
        json!(x)
    } else {
        Value::String(s.to_string())
    };
    real_from_json(&v).with_context(|| format!("bad aspect {s:?}"))
}

fn degree_range(s: &str) -> anyhow::Result<(i64, i64)> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| anyhow!("degrees must look like a..b"))?;
    let a: i64 = a.trim().parse().context("bad lower degree")?;
    let b: i64 = b.trim().parse().context("bad upper degree")?;
    if a > b {
        bail!("empty degree range {a}..{b}");
    }
    if b - a > 10_000_000 {
        bail!("degree range longer than 10^7");
    }
    Ok((a, b))
}

impl Config {
    fn tolerances(&self) -> anyhow::Result<Tolerances> {
        for (name, v) in [
            ("tau-sympl", self.tau_sympl),
            ("tau-rank", self.tau_rank),
            ("tau-time", self.tau_time),
        ] {
            if !(v.is_finite() && v > 0.0) {
                bail!("--{name} must be positive");
            }
        }
        Ok(Tolerances {
            sympl: self.tau_sympl,
            rank: self.tau_rank,
            time: self.tau_time,
            ..Tolerances::default()
        })
    }
}

fn index_options(engine: Engine, tol: Tolerances) -> IndexOptions {
    IndexOptions {
        mode: match engine {
            Engine::Auto => IndexMode::Auto,
            Engine::Sampled => IndexMode::Sampled,
        },
        tol,
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let tol = cli.cfg.tolerances()?;
    let ok = |doc: Value| Ok(Output { doc, code: 0 });
    match &cli.cmd {
        Command::Index { path, engine } => {
            let p = path_from_json(&read_json(path)?, &tol)?;
            let opts = index_options(*engine, tol);
            let t = index_triple_with(&p, &opts)?;
            let mu = if t.nullity == 0 {
                json!(t.mu_minus)
            } else {
                Value::Null
            };
            ok(json!({
                "mu_cz": mu,
                "mu_lower": t.mu_minus,
                "mu_upper": t.mu_plus,
                "nullity": t.nullity,
                "rs_index": reebix::json::rational_json(&rs_index_with(&p, &opts)?),
            }))
        }
        Command::Bott {
            path,
            engine,
            max_k,
        } => {
            let p = path_from_json(&read_json(path)?, &tol)?;
            let opts = InferOptions {
                max_k: *max_k,
                index: index_options(*engine, tol),
                ..InferOptions::default()
            };
            let data = infer_bott(&p, &opts)?;
            let mut doc = orbit_json(&Orbit {
                name: path
                    .file_stem()
                    .map_or("path".into(), |s| s.to_string_lossy().into_owned()),
                data: data.clone(),
            });
            doc["mean_index"] = reebix::json::real_json(&mean_index(&data));
            ok(doc)
        }
        Command::Iterate { path, orbit, up_to } => {
            let rows: Vec<Value> = match (path, orbit) {
                (Some(path), _) => {
                    let p = path_from_json(&read_json(path)?, &tol)?;
                    let opts = index_options(Engine::Auto, tol);
                    (1..=*up_to)
                        .map(|k| {
                            let t = index_triple_with(&iterate_path(&p, k)?, &opts)?;
                            Ok(json!({"k": k, "mu_lower": t.mu_minus, "mu_upper": t.mu_plus, "nullity": t.nullity}))
                        })
                        .collect::<Result<_, Error>>()?
                }
                (None, Some(orbit)) => {
                    let d = orbit_from_json(&read_json(orbit)?)?.data;
                    (1..=*up_to as u64)
                        .map(|k| {
                            let lo = iterated_index(&d, k)?;
                            let nu = iterated_nullity(&d, k)?;
                            Ok(json!({"k": k, "mu_lower": lo, "mu_upper": lo + nu as i64, "nullity": nu}))
                        })
                        .collect::<Result<_, Error>>()?
                }
                (None, None) => unreachable!("clap requires one input"),
            };
            ok(json!({ "iterates": rows }))
        }
        Command::Cijt {
            orbits,
            n0,
            epsilon,
            bound,
            frac_delta,
            mirrored,
        } => {
            let data: Vec<_> = orbits_from_json(&read_json(orbits)?)?
                .into_iter()
                .map(|o| o.data)
                .collect();
            let opts = JumpOptions {
                n0: *n0,
                epsilon: epsilon
                    .as_deref()
                    .map(|e| rational_arg(e, "--epsilon"))
                    .transpose()?,
                search_bound: *bound,
                frac_delta: frac_delta
                    .as_deref()
                    .map(|e| rational_arg(e, "--frac-delta"))
                    .transpose()?,
                mirrored: *mirrored,
                ..JumpOptions::default()
            };
            ok(certificate_json(&find_jump(&data, &opts)?))
        }
        Command::Homology { profile, degrees } => {
            let p = profile_from_json(&read_json(profile)?)?;
            let (a, b) = degree_range(degrees)?;
            let ranks: Vec<Value> = (a..=b)
                .map(|d| json!({"degree": d, "rank": prequant_rank(&p, d)}))
                .collect();
            ok(json!({"profile": profile_json(&p), "ranks": ranks}))
        }
        Command::Audit {
            catalog,
            relaxed_threshold,
            mode,
            bound,
            max_degree,
            report,
        } => {
            let c = reebix::json::catalog_from_json(&read_json(catalog)?)?;
            let opts = AuditOptions {
                mode: match mode {
                    AuditMode::Positive => Mode::Positive,
                    AuditMode::Negative => Mode::Negative,
                },
                threshold: *relaxed_threshold,
                search_bound: *bound,
                max_degree: *max_degree,
                ..AuditOptions::default()
            };
            let rep = audit(&c, &opts)?;
            let doc = with_envelope(report_json(&rep, &tol), &tol);
            if let Some(out) = report {
                write_json(out, &doc)?;
            }
            let code = match rep.verdict {
                Verdict::Consistent => 0,
                Verdict::Contradiction(_) => 3,
                Verdict::Inconclusive(_) => 4,
            };
            Ok(Output { doc, code })
        }
        Command::Models { which } => match which {
            ModelsCommand::Ellipsoid { aspects, out } => {
                let a = aspects
                    .iter()
                    .map(|s| aspect_arg(s))
                    .collect::<anyhow::Result<Vec<_>>>()?;
                let e = ellipsoid_catalog(&EllipsoidSpec::new(a)?)?;
                let mut doc = catalog_json(&e.catalog);
                doc["paths"] = Value::Array(e.paths.iter().map(path_json).collect());
                emit_to(out.as_deref(), doc, &tol)
            }
            ModelsCommand::Profile { name, n, i, out } => {
                let p = catalog_profile(name, *n as usize, *i)?;
                emit_to(out.as_deref(), profile_json(&p), &tol)
            }
        },
    }
}

fn emit_to(out: Option<&Path>, doc: Value, tol: &Tolerances) -> Result<Output, Failure> {
    let doc = with_envelope(doc, tol);
    if let Some(out) = out {
        write_json(out, &doc)?;
    }
    Ok(Output { doc, code: 0 })
}

/// Adds the schema version and effective tolerances to an object.
fn with_envelope(mut doc: Value, tol: &Tolerances) -> Value {
    if let Value::Object(m) = &mut doc {
        m.insert("schema_version".into(), json!(SCHEMA_VERSION));
        m.insert("tolerances".into(), tolerances_json(tol));
    }
    doc
}

fn text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if x.is_object()
                    || (x.is_array()
                        && x.as_array()
                            .is_some_and(|a| a.iter().any(|e| e.is_object())))
                {
                    out.push_str(&format!("{pad}{k}:\n"));
                    text(x, indent + 1, out);
                } else {
                    out.push_str(&format!("{pad}{k}: {}\n", scalar(x)));
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                if let Value::Object(m) = x {
                    let cells: Vec<String> = m
                        .iter()
                        .map(|(k, y)| format!("{k}={}", scalar(y)))
                        .collect();
                    out.push_str(&format!("{pad}- {}\n", cells.join(" ")));
                } else {
                    out.push_str(&format!("{pad}- {}\n", scalar(x)));
                }
            }
        }
        x => out.push_str(&format!("{pad}{}\n", scalar(x))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(s: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{s}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(Output { doc, code }) => {
            let doc = match doc {
                Value::Object(m) if !m.contains_key("schema_version") => {
                    let tol = cli.cfg.tolerances().unwrap_or_default();
                    with_envelope(Value::Object(m), &tol)
                }
                other => other,
            };
            match cli.cfg.format {
                Format::Json => emit(&to_canonical_string(&doc)),
                Format::Text => {
                    let mut s = String::new();
                    text(&doc, 0, &mut s);
                    emit(s.trim_end());
                }
            }
            ExitCode::from(code)
        }
        Err(Failure { code, err }) => {
            eprintln!("error: {err:#}");
            let doc = json!({"error": format!("{err:#}"), "exit_code": code, "schema_version": SCHEMA_VERSION});
            if cli.cfg.format == Format::Json {
                emit(&to_canonical_string(&doc));
            }
            ExitCode::from(code)
        }
    }
}
