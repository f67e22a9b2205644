//! `polarctx`: build polar spaces and hexagon embeddings, enumerate orbits,
//! check contextuality of observable configurations, and reproduce the
//! hexagon contextuality table.
//!
//! Exit codes: 0 not contextual / success, 1 contextual, 2 usage or parse
//! error, 3 construction failure, 4 table mismatch, 5 invalid configuration.

mod manifest;
mod table1;

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use polarctx_core::context::{self, Configuration, ConfigurationJson, ContextualityReport};
use polarctx_core::hexagon::{self, Embedding};
use polarctx_core::{Error, PolarSpace};

use manifest::RunManifest;

#[derive(Parser, Debug)]
#[command(name = "polarctx", version, about = "Symplectic polar spaces, hexagon embeddings and contextuality checks")]
struct Cli {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write the document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Document format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Also write a run manifest (JSON) to this path.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EmbeddingArg {
    Classical,
    Skew,
}

impl From<EmbeddingArg> for Embedding {
    fn from(e: EmbeddingArg) -> Self {
        match e {
            EmbeddingArg::Classical => Embedding::Classical,
            EmbeddingArg::Skew => Embedding::Skew,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Target {
    /// All 15 lines of W(3,2).
    Doily,
    /// All 315 lines of W(5,2).
    W52,
    /// The classical hexagon seed.
    Classical,
    /// The skew hexagon seed.
    Skew,
    /// The contextuality table (CSV or JSON).
    Table1,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build W(2N-1,2) and print its point, line and plane counts.
    Space {
        #[arg(long)]
        qubits: usize,
    },
    /// Build a hexagon seed copy and validate it.
    Hexagon {
        #[arg(long, value_enum)]
        embedding: EmbeddingArg,
    },
    /// Enumerate the transvection orbit of a hexagon embedding.
    Orbit {
        #[arg(long, value_enum)]
        embedding: EmbeddingArg,
        /// Ignore the cached orbit database.
        #[arg(long)]
        rebuild: bool,
    },
    /// Check contextuality of every hexagon copy and its complement.
    Table1 {
        /// Check this many random copies per orbit instead of all of them.
        #[arg(long)]
        sample: Option<usize>,
        /// Seed for `--sample`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        rebuild: bool,
    },
    /// Decide contextuality of a configuration file (`-` reads stdin).
    Check {
        config: PathBuf,
        /// Largest rank for which the degree is enumerated.
        #[arg(long, default_value_t = polarctx_core::gf2::DEFAULT_DEGREE_CAP)]
        degree_cap: usize,
    },
    /// Write incidence graphs (DOT) or line/table listings (CSV).
    Export {
        #[arg(long, value_enum)]
        target: Target,
    },
}

/// A failed run and the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self {
            code: 2,
            error: anyhow::anyhow!(msg.into()),
        }
    }

    pub fn io(error: anyhow::Error) -> Self {
        Self { code: 2, error }
    }

    pub fn mismatch(msg: impl Into<String>) -> Self {
        Self {
            code: 4,
            error: anyhow::anyhow!(msg.into()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ConstructionFailed(_) | Error::ImageOffQuadric(_) | Error::BudgetExceeded { .. } | Error::InvalidDatabase(_) => 3,
            Error::InvalidContext { .. }
            | Error::InvalidConfiguration(_)
            | Error::NotMutuallyCommuting(..)
            | Error::ProductNotIdentity
            | Error::IdentityHasNoPoint => 5,
            _ => 2,
        };
        Self { code, error: e.into() }
    }
}

/// What a command produced: the document, a human summary and its exit code.
struct Output {
    document: Vec<u8>,
    summary: String,
    code: u8,
    parameters: BTreeMap<String, String>,
    inputs: Vec<String>,
}

impl Output {
    fn new(document: impl Into<Vec<u8>>, summary: String) -> Self {
        Self {
            document: document.into(),
            summary,
            code: 0,
            parameters: BTreeMap::new(),
            inputs: Vec::new(),
        }
    }

    fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.into(), value.to_string());
        self
    }
}

fn json<T: serde::Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_vec_pretty(value).expect("serializable");
    s.push(b'\n');
    s
}

fn format_or(cli_format: Option<Format>, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
    let f = cli_format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(Failure::usage(format!("format {f:?} is not available for this command")))
    }
}

fn lines_csv(space: &PolarSpace, lines: &[u32]) -> String {
    let mut out = String::from("line,a,b,c\n");
    for &l in lines {
        let [a, b, c] = space.line(l).points().map(|p| space.label(p).to_string());
        out.push_str(&format!("{l},{a},{b},{c}\n"));
    }
    out
}

fn w52() -> Result<PolarSpace, Failure> {
    PolarSpace::build(3).map_err(Failure::from)
}

fn cmd_space(qubits: usize, format: Option<Format>) -> Result<Output, Failure> {
    let space = PolarSpace::build(qubits)?;
    let all: Vec<u32> = (0..space.lines().len() as u32).collect();
    let document = match format_or(format, Format::Json, &[Format::Json, Format::Csv, Format::Dot])? {
        Format::Json => json(&space.to_json()),
        Format::Csv => lines_csv(&space, &all).into_bytes(),
        Format::Dot => space.incidence_dot(&format!("W({},2)", 2 * qubits - 1), &all).into_bytes(),
    };
    let summary = format!(
        "W({},2): {} points, {} lines, {} planes",
        2 * qubits - 1,
        space.n_points(),
        space.lines().len(),
        space.planes().len()
    );
    Ok(Output::new(document, summary).param("qubits", qubits))
}

#[derive(serde::Serialize)]
struct HexagonJson {
    embedding: Embedding,
    lines: Vec<u32>,
    labels: Vec<[String; 3]>,
    validation: Validation,
}

#[derive(serde::Serialize)]
struct Validation {
    lines: usize,
    points: usize,
    girth: Option<usize>,
    diameter: Option<usize>,
    generalized_hexagon: bool,
    coplanarity_signature: usize,
}

fn cmd_hexagon(embedding: Embedding, format: Option<Format>) -> Result<Output, Failure> {
    let space = w52()?;
    let copy = table1::seed_copy(&space, embedding)?;
    let lines = copy.line_indices();
    let (girth, diameter) = hexagon::incidence_girth_and_diameter(&space, &lines);
    let points: std::collections::BTreeSet<u32> = lines.iter().flat_map(|&l| space.line(l).points()).collect();
    let validation = Validation {
        lines: lines.len(),
        points: points.len(),
        girth,
        diameter,
        generalized_hexagon: hexagon::is_generalized_hexagon(&space, &lines),
        coplanarity_signature: hexagon::coplanarity_signature(&space, &copy),
    };
    if !validation.generalized_hexagon {
        return Err(Error::ConstructionFailed(format!("{embedding} seed is not a generalized hexagon")).into());
    }
    let summary = format!(
        "{embedding} hexagon: {} lines on {} points, girth {}, coplanarity signature {}",
        validation.lines,
        validation.points,
        girth.map_or("none".into(), |g| g.to_string()),
        validation.coplanarity_signature
    );
    let document = match format_or(format, Format::Json, &[Format::Json, Format::Csv, Format::Dot])? {
        Format::Json => json(&HexagonJson {
            embedding,
            labels: lines.iter().map(|&l| space.line(l).points().map(|p| space.label(p).to_string())).collect(),
            lines,
            validation,
        }),
        Format::Csv => lines_csv(&space, &lines).into_bytes(),
        Format::Dot => space.incidence_dot(&format!("{embedding} hexagon"), &lines).into_bytes(),
    };
    Ok(Output::new(document, summary).param("embedding", embedding))
}

fn cmd_orbit(embedding: Embedding, rebuild: bool, format: Option<Format>) -> Result<Output, Failure> {
    format_or(format, Format::Json, &[Format::Json])?;
    let space = w52()?;
    let start = Instant::now();
    let (db, cached) = table1::load_orbit(&space, embedding, rebuild)?;
    let summary = format!(
        "{embedding} orbit: {} copies ({} in {:.2?})",
        db.len(),
        if cached { "loaded from cache" } else { "computed" },
        start.elapsed()
    );
    Ok(Output::new(json(&hexagon::orbit_to_json(&space, &db)), summary)
        .param("embedding", embedding)
        .param("rebuild", rebuild))
}

fn table_output(sample: Option<usize>, seed: u64, rebuild: bool, format: Format) -> Result<Output, Failure> {
    let space = w52()?;
    let start = Instant::now();
    let (classical, _) = table1::load_orbit(&space, Embedding::Classical, rebuild)?;
    let (skew, _) = table1::load_orbit(&space, Embedding::Skew, rebuild)?;
    let table = table1::compute(&space, [&classical, &skew], sample, seed)?;
    let mut summary = String::from("configuration      contextual  copies  checked\n");
    for r in &table.rows {
        summary.push_str(&format!(
            "{:<18} {:<11} {:>6}  {:>7}\n",
            r.configuration, r.contextual, r.copies, r.checked
        ));
    }
    summary.push_str(&format!("elapsed {:.2?}", start.elapsed()));
    let document = match format {
        Format::Csv => table1::to_csv(&table).into_bytes(),
        _ => json(&table),
    };
    let mismatches = table1::mismatches(&table);
    let mut out = Output::new(document, summary)
        .param("sample", sample.map_or("all".into(), |k| k.to_string()))
        .param("seed", seed)
        .param("rebuild", rebuild);
    if !mismatches.is_empty() {
        out.summary.push_str(&format!("\nmismatch: {}", mismatches.join("; ")));
        out.code = 4;
    }
    Ok(out)
}

fn read_config(path: &Path) -> Result<Configuration, Failure> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin").map_err(Failure::io)?;
        s
    } else {
        std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))
            .map_err(Failure::io)?
    };
    let json: ConfigurationJson = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(Failure::io)?;
    Ok(Configuration::from_json(&json)?)
}

fn cmd_check(path: &Path, degree_cap: usize, format: Option<Format>) -> Result<Output, Failure> {
    let config = read_config(path)?;
    let report = context::full_report(&config, degree_cap)?;
    let document = match format_or(format, Format::Json, &[Format::Json, Format::Csv])? {
        Format::Csv => format!("{}\n{}\n", ContextualityReport::CSV_HEADER, report.csv_row()).into_bytes(),
        _ => json(&report),
    };
    let degree = match report.degree {
        Some(d) => d.to_string(),
        None => format!("above cap {degree_cap}"),
    };
    let certificate = report
        .certificate
        .as_ref()
        .map(|y| format!(", certificate contexts {:?}", y.iter_ones().collect::<Vec<_>>()))
        .unwrap_or_default();
    let summary = format!(
        "{}: {} points, {} contexts, {} negative, degree {degree}{certificate}",
        if report.contextual { "contextual" } else { "not contextual" },
        report.n_points,
        report.n_contexts,
        report.n_negative
    );
    let mut out = Output::new(document, summary).param("degree_cap", degree_cap);
    out.inputs.push(path.display().to_string());
    out.code = u8::from(report.contextual);
    Ok(out)
}

fn cmd_export(target: Target, format: Option<Format>) -> Result<Output, Failure> {
    let kind = format.ok_or_else(|| Failure::usage("export needs --format dot or csv"))?;
    let (space, lines, name) = match target {
        Target::Table1 => {
            let f = format_or(Some(kind), Format::Csv, &[Format::Csv, Format::Json])?;
            return table_output(None, 0, false, f).map(|o| o.param("target", "table1"));
        }
        Target::Doily => {
            let s = PolarSpace::build(2)?;
            let all = (0..s.lines().len() as u32).collect();
            (s, all, "W(3,2)".to_string())
        }
        Target::W52 => {
            let s = w52()?;
            let all = (0..s.lines().len() as u32).collect();
            (s, all, "W(5,2)".to_string())
        }
        Target::Classical | Target::Skew => {
            let s = w52()?;
            let e = if target == Target::Classical { Embedding::Classical } else { Embedding::Skew };
            let lines = table1::seed_copy(&s, e)?.line_indices();
            (s, lines, format!("{e} hexagon"))
        }
    };
    let document = match format_or(Some(kind), Format::Dot, &[Format::Dot, Format::Csv])? {
        Format::Dot => space.incidence_dot(&name, &lines),
        _ => lines_csv(&space, &lines),
    };
    let summary = format!("{name}: {} lines exported", lines.len());
    Ok(Output::new(document, summary).param("target", format!("{target:?}").to_lowercase()))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Space { .. } => "space",
        Command::Hexagon { .. } => "hexagon",
        Command::Orbit { .. } => "orbit",
        Command::Table1 { .. } => "table1",
        Command::Check { .. } => "check",
        Command::Export { .. } => "export",
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring worker pool")
            .map_err(Failure::io)?;
    }
    let start = Instant::now();
    let output = match &cli.command {
        Command::Space { qubits } => cmd_space(*qubits, cli.format)?,
        Command::Hexagon { embedding } => cmd_hexagon((*embedding).into(), cli.format)?,
        Command::Orbit { embedding, rebuild } => cmd_orbit((*embedding).into(), *rebuild, cli.format)?,
        Command::Table1 { sample, seed, rebuild } => {
            let f = format_or(cli.format, Format::Json, &[Format::Json, Format::Csv])?;
            table_output(*sample, *seed, *rebuild, f)?
        }
        Command::Check { config, degree_cap } => cmd_check(config, *degree_cap, cli.format)?,
        Command::Export { target } => cmd_export(*target, cli.format)?,
    };

    match &cli.out {
        Some(path) => std::fs::write(path, &output.document)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(Failure::io)?,
        None => std::io::stdout()
            .write_all(&output.document)
            .context("writing stdout")
            .map_err(Failure::io)?,
    }
    eprintln!("{}", output.summary);

    let mut manifest = RunManifest::new(command_name(&cli.command), output.parameters, output.inputs);
    manifest.finish(&output.document, cli.out.as_deref(), start.elapsed());
    eprintln!("digest {}", manifest.digest);
    if let Some(path) = &cli.manifest {
        std::fs::write(path, json(&manifest))
            .with_context(|| format!("writing {}", path.display()))
            .map_err(Failure::io)?;
    }
    Ok(output.code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
