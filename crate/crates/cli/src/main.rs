//! Command line front end: parse an instance file, run the requested
//! computation, print one complete report on stdout.
//!
//! Exit codes: 0 success, 2 parse or input error, 3 semantic validation
//! failure, 4 resource cap exceeded, 5 oracle mismatch.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use toric_ko::charmat::{validate, ToricInstance, ValidationMode};
use toric_ko::face_ring::{a1_decomposition, quotient_presentation, GeneratorDegree};
use toric_ko::ko::{
    classify, free_ranks, oracle_crosscheck_with_scan, Classification, KOTable, RowSpaceScan,
    ScanOptions, WittGroups,
};
use toric_ko::{Error, InstanceFile, Report};

#[derive(Parser)]
#[command(name = "toric-ko", version, about = "KO-groups and Witt groups of toric manifolds from combinatorial data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for the row-space scan (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Cap on the row-space rank (the scan enumerates 2^rank vectors).
    #[arg(long, global = true, default_value_t = 20)]
    rank_cap: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Toric,
    SmallCover,
}

#[derive(Subcommand)]
enum Command {
    /// Check the characteristic matrix against the complex and report
    /// every failing face.
    Validate {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Toric)]
        mode: Mode,
    },
    /// Witt groups with the per-omega attribution table.
    Witt { file: PathBuf },
    /// The eight KO groups. Default prints both tables; --reduced
    /// restricts to the reduced one.
    Ko {
        file: PathBuf,
        #[arg(long)]
        reduced: bool,
    },
    /// S-type / M-type classification with witnesses.
    Classify { file: PathBuf },
    /// Apply simplicial wedges at the given original vertices and emit
    /// the new instance file.
    Wedge {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        vertices: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trivial/paired decomposition dimensions from the face ring.
    Decompose { file: PathBuf },
    /// Cross-check the face-ring oracle against the subcomplex route;
    /// a mismatch exits with code 5.
    Oracle { file: PathBuf },
    /// Run every .json instance in a directory and print a summary table.
    Batch { dir: PathBuf },
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli));
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Input(_) | Error::Domain(_) => 2,
        Error::Validation(_) | Error::Data(_) => 3,
        Error::RankCap { .. } => 4,
        Error::Internal(_) => 1,
    }
}

fn fail(e: &Error) -> i32 {
    eprintln!("error: {e}");
    exit_code(e)
}

fn read_instance_file(path: &Path) -> Result<InstanceFile, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    InstanceFile::parse_str(&text)
}

fn run(cli: Cli) -> i32 {
    let options = ScanOptions {
        rank_cap: cli.rank_cap,
        threads: cli.threads,
    };
    match &cli.command {
        Command::Validate { file, mode } => cmd_validate(file, *mode, cli.format),
        Command::Witt { file } => cmd_witt(file, &options, cli.format),
        Command::Ko { file, reduced } => cmd_ko(file, *reduced, &options, cli.format),
        Command::Classify { file } => cmd_classify(file, &options, cli.format),
        Command::Wedge { file, vertices, out } => cmd_wedge(file, vertices, out.as_deref()),
        Command::Decompose { file } => cmd_decompose(file, cli.format),
        Command::Oracle { file } => cmd_oracle(file, &options, cli.format),
        Command::Batch { dir } => cmd_batch(dir, &options, cli.format),
    }
}

fn emit(report: &Report, format: Format) {
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
}

fn cmd_validate(path: &Path, mode: Mode, format: Format) -> i32 {
    let file = match read_instance_file(path) {
        Ok(f) => f,
        Err(e) => return fail(&e),
    };
    let started = Instant::now();
    let built = file.to_instance_parts();
    let (complex, lambda) = match built {
        Ok(parts) => parts,
        Err(e) => return fail(&e),
    };
    let vmode = match mode {
        Mode::Toric => ValidationMode::Toric,
        Mode::SmallCover => ValidationMode::SmallCover,
    };
    let validation = validate(&complex, &lambda, vmode);
    let ok = validation.is_valid();
    let mut report = Report::new(file);
    report.validation = Some(validation);
    report.timing_ms = started.elapsed().as_secs_f64() * 1e3;
    emit(&report, format);
    if ok {
        0
    } else {
        3
    }
}

fn load(path: &Path) -> Result<(InstanceFile, ToricInstance), Error> {
    let file = read_instance_file(path)?;
    let instance = file.to_instance()?;
    Ok((file, instance))
}

fn cmd_witt(path: &Path, options: &ScanOptions, format: Format) -> i32 {
    let (file, instance) = match load(path) {
        Ok(x) => x,
        Err(e) => return fail(&e),
    };
    let started = Instant::now();
    let scan = match RowSpaceScan::compute(&instance, options) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    let mut report = Report::new(file);
    report.witt = Some(WittGroups::from_scan(&scan));
    report.timing_ms = started.elapsed().as_secs_f64() * 1e3;
    emit(&report, format);
    0
}

fn cmd_ko(path: &Path, reduced_only: bool, options: &ScanOptions, format: Format) -> i32 {
    let (file, instance) = match load(path) {
        Ok(x) => x,
        Err(e) => return fail(&e),
    };
    let started = Instant::now();
    let scan = match RowSpaceScan::compute(&instance, options) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    let witt = WittGroups::from_scan(&scan);
    let (n0, n2) = match free_ranks(&instance) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let mut report = Report::new(file);
    report.ko_reduced = Some(KOTable::assemble(&witt, n0, n2, true).entries);
    if !reduced_only {
        report.ko_unreduced = Some(KOTable::assemble(&witt, n0, n2, false).entries);
        report.witt = Some(witt);
    }
    report.timing_ms = started.elapsed().as_secs_f64() * 1e3;
    emit(&report, format);
    0
}

fn cmd_classify(path: &Path, options: &ScanOptions, format: Format) -> i32 {
    let (file, instance) = match load(path) {
        Ok(x) => x,
        Err(e) => return fail(&e),
    };
    let started = Instant::now();
    let classification = match classify(&instance, options) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let mut report = Report::new(file);
    report.classification = Some(classification);
    report.timing_ms = started.elapsed().as_secs_f64() * 1e3;
    emit(&report, format);
    0
}

fn cmd_wedge(path: &Path, vertices: &[usize], out: Option<&Path>) -> i32 {
    let (_, instance) = match load(path) {
        Ok(x) => x,
        Err(e) => return fail(&e),
    };
    let wedged = match instance.iterated_wedge(vertices) {
        Ok(w) => w,
        Err(e) => return fail(&e),
    };
    let file = InstanceFile::from_instance(&wedged);
    let json = file.to_json_pretty();
    match out {
        Some(dest) => {
            if let Err(e) = std::fs::write(dest, json + "\n") {
                return fail(&Error::Input(format!("{}: {e}", dest.display())));
            }
            println!("wrote {}", dest.display());
        }
        None => println!("{json}"),
    }
    0
}

fn cmd_decompose(path: &Path, format: Format) -> i32 {
    let (file, instance) = match load(path) {
        Ok(x) => x,
        Err(e) => return fail(&e),
    };
    let started = Instant::now();
    let n = instance.lambda().rank_n();
    let pres = match quotient_presentation(
        instance.complex(),
        &instance.lambda2(),
        GeneratorDegree::Two,
        2 * n,
    ) {
        Ok(p) => p,
        Err(e) => return fail(&e),
    };
    let decomposition = match a1_decomposition(&pres) {
        Ok(d) => d,
        Err(e) => return fail(&e),
    };
    let mut report = Report::new(file);
    report.decomposition = Some(decomposition);
    report.timing_ms = started.elapsed().as_secs_f64() * 1e3;
    emit(&report, format);
    0
}

fn cmd_oracle(path: &Path, options: &ScanOptions, format: Format) -> i32 {
    let (file, instance) = match load(path) {
        Ok(x) => x,
        Err(e) => return fail(&e),
    };
    let started = Instant::now();
    let scan = match RowSpaceScan::compute(&instance, options) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    let oracle = match oracle_crosscheck_with_scan(&instance, &scan) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    let pass = oracle.pass;
    let mut report = Report::new(file);
    report.oracle = Some(oracle);
    report.timing_ms = started.elapsed().as_secs_f64() * 1e3;
    emit(&report, format);
    if pass {
        0
    } else {
        5
    }
}

#[derive(Serialize)]
struct BatchRow {
    file: String,
    name: String,
    n: usize,
    m: usize,
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    witt: Option<[usize; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    s_type: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    m_type: Option<bool>,
    timing_ms: f64,
}

fn cmd_batch(dir: &Path, options: &ScanOptions, format: Format) -> i32 {
    let mut entries: Vec<PathBuf> = match std::fs::read_dir(dir) {
        Ok(rd) => rd
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect(),
        Err(e) => return fail(&Error::Input(format!("{}: {e}", dir.display()))),
    };
    entries.sort();
    let mut rows = Vec::new();
    let mut worst = 0;
    for path in &entries {
        let started = Instant::now();
        let row = batch_one(path, options);
        let mut row = match row {
            Ok(r) => r,
            Err((e, name)) => {
                worst = worst.max(exit_code(&e));
                BatchRow {
                    file: path.display().to_string(),
                    name,
                    n: 0,
                    m: 0,
                    status: format!("error: {e}"),
                    witt: None,
                    s_type: None,
                    m_type: None,
                    timing_ms: 0.0,
                }
            }
        };
        row.timing_ms = started.elapsed().as_secs_f64() * 1e3;
        rows.push(row);
    }
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&rows).expect("batch rows serialize")
        ),
        Format::Text => {
            println!(
                "{:<28} {:>3} {:>3}  {:<18} {:<6} {:<6} {:>10}  status",
                "name", "n", "m", "witt", "s", "m", "ms"
            );
            for r in &rows {
                println!(
                    "{:<28} {:>3} {:>3}  {:<18} {:<6} {:<6} {:>10.1}  {}",
                    r.name,
                    r.n,
                    r.m,
                    r.witt
                        .map(|w| format!("{w:?}"))
                        .unwrap_or_else(|| "-".into()),
                    r.s_type.map(|b| b.to_string()).unwrap_or_else(|| "-".into()),
                    r.m_type.map(|b| b.to_string()).unwrap_or_else(|| "-".into()),
                    r.timing_ms,
                    r.status
                );
            }
        }
    }
    worst
}

fn batch_one(path: &Path, options: &ScanOptions) -> Result<BatchRow, (Error, String)> {
    let label = |f: &InstanceFile| f.name.clone();
    let file = read_instance_file(path).map_err(|e| (e, String::new()))?;
    let name = label(&file);
    let instance = file.to_instance().map_err(|e| (e, name.clone()))?;
    let scan = RowSpaceScan::compute(&instance, options).map_err(|e| (e, name.clone()))?;
    let witt = WittGroups::from_scan(&scan);
    let classification = Classification::from_scan(&instance, &scan);
    Ok(BatchRow {
        file: path.display().to_string(),
        name,
        n: file.n,
        m: file.m,
        status: "ok".into(),
        witt: Some(witt.as_array()),
        s_type: Some(classification.s_type),
        m_type: Some(classification.m_type),
        timing_ms: 0.0,
    })
}
