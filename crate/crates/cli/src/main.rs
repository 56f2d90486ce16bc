//! `coxl2`: classify Coxeter systems, build Davis chambers, compute degree
//! supports of L²-Betti numbers, and scan families, with a content-addressed
//! report cache.

mod cache;
mod input;
mod report;

use std::fmt;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use coxl2_core::classify::sphericity_classification_scan;
use coxl2_core::coxeter::{CoxeterMatrix, Family, GenSet};

/// CLI error carrying the exit class: usage errors exit 2, domain errors 1.
#[derive(Debug)]
pub struct CliError {
    message: String,
    usage: bool,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> CliError {
        CliError {
            message: message.into(),
            usage: true,
        }
    }

    pub fn domain(message: impl Into<String>) -> CliError {
        CliError {
            message: message.into(),
            usage: false,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl From<coxl2_core::Error> for CliError {
    fn from(e: coxl2_core::Error) -> CliError {
        CliError::domain(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "coxl2", version, about = "Coxeter systems, Davis chambers, and L2-Betti degree supports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args)]
struct InputArgs {
    /// Input file: diagram DSL or JSON matrix, sniffed by first byte.
    #[arg(long = "in", value_name = "PATH")]
    in_path: Option<PathBuf>,
    /// Built-in family name (atilde2 | btilde8); requires --n.
    #[arg(long)]
    family: Option<String>,
    /// Family parameter.
    #[arg(long)]
    n: Option<usize>,
    /// Output format on stdout.
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    /// Directory to write the JSON report into (file name = input digest).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

impl InputArgs {
    fn load(&self) -> Result<CoxeterMatrix, CliError> {
        match (&self.in_path, &self.family, self.n) {
            (Some(path), None, None) => input::load_file(path),
            (None, Some(family), Some(n)) => input::load_family(family, n),
            (None, Some(_), None) => Err(CliError::usage("--family requires --n")),
            _ => Err(CliError::usage("provide exactly one input: --in PATH, or --family NAME --n INT")),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify the irreducible components against the finite/affine tables.
    Classify(InputArgs),
    /// Print the sphericity: the largest k with every k-subset spherical.
    Sphericity(InputArgs),
    /// Export the Davis chamber (or one D_sigma) as a simplicial complex.
    Davis {
        #[command(flatten)]
        input: InputArgs,
        /// Comma-separated generator names for the spherical subset J.
        #[arg(long, value_name = "NAMES")]
        sigma: Option<String>,
    },
    /// Degree supports of the L2-Betti numbers of G, G x G, and lattices.
    Betti(InputArgs),
    /// Kac-Moody criteria report at thickness q + 1.
    LatticeReport {
        #[command(flatten)]
        input: InputArgs,
        /// Field size parameter (prime power expected; not verified).
        #[arg(long)]
        q: u64,
        /// Growth truncation for the report prefix.
        #[arg(long = "N", default_value_t = 4)]
        truncation: usize,
    },
    /// Element counts by word length; optional covolume partial sums.
    Growth {
        #[command(flatten)]
        input: InputArgs,
        /// Truncation length for the breadth-first enumeration.
        #[arg(long = "N", default_value_t = 8)]
        truncation: usize,
        /// Evaluate covolume partial sums of W(1/q).
        #[arg(long)]
        q: Option<u64>,
    },
    /// Compare the lattice degree sets of two systems.
    Compare {
        /// First operand: `family:n` or a file path.
        #[arg(long)]
        a: String,
        /// Second operand: `family:n` or a file path.
        #[arg(long)]
        b: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Family scan with cached member reports, or a random classification
    /// scan over seeded connected diagrams.
    Scan {
        /// Family to scan (family mode).
        #[arg(long)]
        family: Option<String>,
        /// First n of the range (family mode).
        #[arg(long)]
        from: Option<usize>,
        /// Last n of the range, inclusive (family mode).
        #[arg(long)]
        to: Option<usize>,
        /// Attach Kac-Moody criteria at this q (family mode).
        #[arg(long)]
        q: Option<u64>,
        /// Rank range `lo:hi` for the random classification scan.
        #[arg(long)]
        ranks: Option<String>,
        /// Number of random samples (random mode).
        #[arg(long)]
        samples: Option<usize>,
        /// Seed for the random classification scan.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Report/cache directory; also set via COXL2_CACHE.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(if e.usage { 2 } else { 1 });
        }
    }
}

fn timestamp() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn envelope(command: &str, digest: &str, payload: &Value) -> Value {
    json!({
        "command": command,
        "digest": digest,
        "version": cache::VERSION,
        "timestamp": timestamp(),
        "payload": payload,
    })
}

/// Emits to stdout per --format and optionally stores the enveloped report.
fn emit(
    command: &str,
    digest: &str,
    payload: &Value,
    text: &str,
    format: Format,
    out: Option<&PathBuf>,
) -> Result<(), CliError> {
    match format {
        Format::Text => println!("{text}"),
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(payload).expect("payload serializes"))
        }
    }
    if let Some(dir) = out {
        cache::store(dir, digest, &envelope(command, digest, payload))?;
    }
    Ok(())
}

fn parse_sigma(m: &CoxeterMatrix, sigma: &Option<String>) -> Result<Option<GenSet>, CliError> {
    match sigma {
        None => Ok(None),
        Some(names) => {
            let parts: Vec<&str> = names
                .split(',')
                .map(|s| s.trim())
                .filter(|s| !s.is_empty())
                .collect();
            Ok(Some(m.subset_from_names(&parts)?))
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Classify(args) => {
            let m = args.load()?;
            let (payload, text) = report::classify_report(&m);
            let digest = cache::input_digest("classify", &m.to_json(), "");
            emit("classify", &digest, &payload, &text, args.format, args.out.as_ref())
        }
        Command::Sphericity(args) => {
            let m = args.load()?;
            let (payload, text) = report::sphericity_report(&m);
            let digest = cache::input_digest("sphericity", &m.to_json(), "");
            emit("sphericity", &digest, &payload, &text, args.format, args.out.as_ref())
        }
        Command::Davis { input, sigma } => {
            let m = input.load()?;
            let j = parse_sigma(&m, &sigma)?;
            let (payload, text) = report::davis_report(&m, j)?;
            let params = match j {
                None => String::new(),
                Some(j) => format!("sigma={}", m.set_label(j)),
            };
            let digest = cache::input_digest("davis", &m.to_json(), &params);
            emit("davis", &digest, &payload, &text, input.format, input.out.as_ref())
        }
        Command::Betti(args) => {
            let m = args.load()?;
            let (payload, text) = report::betti_report(&m)?;
            let digest = cache::input_digest("betti", &m.to_json(), "");
            emit("betti", &digest, &payload, &text, args.format, args.out.as_ref())
        }
        Command::LatticeReport { input, q, truncation } => {
            let m = input.load()?;
            let (payload, text) = report::lattice_report(&m, q, truncation)?;
            let digest =
                cache::input_digest("lattice-report", &m.to_json(), &format!("q={q};N={truncation}"));
            emit("lattice-report", &digest, &payload, &text, input.format, input.out.as_ref())
        }
        Command::Growth { input, truncation, q } => {
            let m = input.load()?;
            let (payload, text) = report::growth_report(&m, truncation, q)?;
            let params = match q {
                Some(q) => format!("N={truncation};q={q}"),
                None => format!("N={truncation}"),
            };
            let digest = cache::input_digest("growth", &m.to_json(), &params);
            emit("growth", &digest, &payload, &text, input.format, input.out.as_ref())
        }
        Command::Compare { a, b, format, out } => {
            let (a_source, a_matrix) = input::load_spec(&a)?;
            let (b_source, b_matrix) = input::load_spec(&b)?;
            let (payload, text) = report::compare_report(&a_source, &a_matrix, &b_source, &b_matrix)?;
            let canonical = format!("{}|{}", a_matrix.to_json(), b_matrix.to_json());
            let digest = cache::input_digest("compare", &canonical, "");
            emit("compare", &digest, &payload, &text, format, out.as_ref())
        }
        Command::Scan {
            family,
            from,
            to,
            q,
            ranks,
            samples,
            seed,
            format,
            out,
        } => {
            let family_mode = family.is_some() || from.is_some() || to.is_some();
            let random_mode = ranks.is_some() || samples.is_some() || seed.is_some();
            match (family_mode, random_mode) {
                (true, false) => {
                    let family = family.ok_or_else(|| CliError::usage("scan needs --family"))?;
                    let (from, to) = match (from, to) {
                        (Some(a), Some(b)) if a <= b => (a, b),
                        _ => return Err(CliError::usage("scan needs --from A --to B with A <= B")),
                    };
                    scan_family(&family, from, to, q, format, out)
                }
                (false, true) => {
                    let samples = samples.unwrap_or(1000);
                    let seed = seed.unwrap_or(1);
                    let (lo, hi) = parse_ranks(ranks.as_deref().unwrap_or("10:12"))?;
                    scan_random(lo, hi, samples, seed, format, out)
                }
                _ => Err(CliError::usage(
                    "scan runs in one mode: --family/--from/--to, or --ranks/--samples/--seed",
                )),
            }
        }
    }
}

fn parse_ranks(spec: &str) -> Result<(usize, usize), CliError> {
    let (lo, hi) = spec
        .split_once(':')
        .ok_or_else(|| CliError::usage("--ranks expects LO:HI"))?;
    let lo: usize = lo.parse().map_err(|_| CliError::usage("--ranks expects LO:HI"))?;
    let hi: usize = hi.parse().map_err(|_| CliError::usage("--ranks expects LO:HI"))?;
    if lo < 1 || hi < lo || hi > 20 {
        return Err(CliError::usage("--ranks out of range (1 <= LO <= HI <= 20)"));
    }
    Ok((lo, hi))
}

fn scan_family(
    family_name: &str,
    from: usize,
    to: usize,
    q: Option<u64>,
    format: Format,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let family = Family::parse(family_name)
        .ok_or_else(|| CliError::usage(format!("unknown family `{family_name}`")))?;
    let dir = cache::cache_dir(out.as_deref());
    let mut members = Vec::new();
    let mut member_entries = Vec::new();
    let mut cache_hits = 0usize;
    let mut computed = 0usize;
    for n in from..=to {
        let m = coxl2_core::coxeter::builtin_family(family, n)?;
        let (command, params) = match q {
            Some(q) => ("lattice-report", format!("q={q};N=4")),
            None => ("betti", String::new()),
        };
        let digest = cache::input_digest(command, &m.to_json(), &params);
        let payload = match cache::lookup(&dir, &digest) {
            Some(report) => {
                cache_hits += 1;
                report
                    .get("payload")
                    .cloned()
                    .ok_or_else(|| CliError::domain(format!("corrupt cache entry {digest}")))?
            }
            None => {
                computed += 1;
                let (payload, _) = match q {
                    Some(q) => report::lattice_report(&m, q, 4)?,
                    None => report::betti_report(&m)?,
                };
                cache::store(&dir, &digest, &envelope(command, &digest, &payload))?;
                payload
            }
        };
        let degrees: Vec<usize> = extract_lattice_degrees(&payload)
            .ok_or_else(|| CliError::domain(format!("report {digest} has no lattice degrees")))?;
        member_entries.push(json!({
            "n": n,
            "digest": digest,
            "lattice_degrees": degrees,
        }));
        members.push((n, degrees));
    }
    let pairwise = report::me_matrix(&members);
    let payload = json!({
        "family": family.name(),
        "from": from,
        "to": to,
        "q": q,
        "members": member_entries,
        "pairwise": pairwise,
        "computed": computed,
        "cache_hits": cache_hits,
    });
    let mut lines = vec![format!(
        "scan {}: n = {from}..{to}; computed {computed}, cache hits {cache_hits} (dir {})",
        family.name(),
        dir.display()
    )];
    for (n, degrees) in &members {
        lines.push(format!("  n = {n}: lattice degrees {:?}", degrees));
    }
    let distinguishable = pairwise
        .iter()
        .filter(|e| e["verdict"] == "distinguishable")
        .count();
    lines.push(format!(
        "pairwise: {distinguishable}/{} distinguishable",
        pairwise.len()
    ));
    match format {
        Format::Text => println!("{}", lines.join("\n")),
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(&payload).expect("payload serializes"))
        }
    }
    Ok(())
}

fn extract_lattice_degrees(payload: &Value) -> Option<Vec<usize>> {
    let degrees = payload
        .get("lattice_degrees")
        .or_else(|| payload.get("supports")?.get("lattice_degrees"))?;
    degrees
        .as_array()?
        .iter()
        .map(|v| v.as_u64().map(|x| x as usize))
        .collect()
}

fn scan_random(
    lo: usize,
    hi: usize,
    samples: usize,
    seed: u64,
    format: Format,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let hits = sphericity_classification_scan(lo..=hi, samples, seed);
    let counterexamples: Vec<Value> = hits
        .iter()
        .map(|h| {
            json!({
                "sample_index": h.sample_index,
                "sphericity": h.sphericity,
                "matrix": serde_json::from_str::<Value>(&h.matrix.to_json()).expect("valid json"),
            })
        })
        .collect();
    let payload = json!({
        "ranks": [lo, hi],
        "samples": samples,
        "seed": seed,
        "counterexamples": counterexamples,
    });
    let text = format!(
        "classification scan: ranks {lo}..{hi}, {samples} samples, seed {seed}: {} counterexample(s)",
        hits.len()
    );
    let digest = cache::input_digest(
        "scan-classify",
        "",
        &format!("ranks={lo}:{hi};samples={samples};seed={seed}"),
    );
    if let Some(dir) = &out {
        cache::store(dir, &digest, &envelope("scan-classify", &digest, &payload))?;
    }
    match format {
        Format::Text => println!("{text}"),
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(&payload).expect("payload serializes"))
        }
    }
    Ok(())
}
