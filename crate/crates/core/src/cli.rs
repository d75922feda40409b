//! Command-line front end.
//!
//! Exit codes: 0 success, 2 invalid input graph, 3 not negative definite,
//! 4 precondition violation, 5 internal assertion failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::enumeration::{self, EnumBounds};
use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::graph::WeightedDualGraph;
use crate::invariants::InvariantReport;
use crate::rational::{self, int};
use crate::suites;
use crate::transforms::{self, StringDescriptor};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID_GRAPH: i32 = 2;
pub const EXIT_NOT_NEGATIVE_DEFINITE: i32 = 3;
pub const EXIT_PRECONDITION: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

#[derive(Parser, Debug)]
#[command(name = "kdg", version, about = "Numerical canonical cycles and -K^2 of dual graphs")]
struct Cli {
    /// Worker threads for enumeration and sweeps.
    #[arg(long, global = true, env = "KDG_JOBS")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Invariants of the graph in a JSON file.
    Compute {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        /// Also write the graph in DOT format.
        #[arg(long, value_name = "OUT")]
        dot: Option<PathBuf>,
    },
    /// Print the JSON graph of a family member.
    Family {
        name: String,
        /// Comma-separated `key=value` list.
        #[arg(long, default_value = "")]
        params: String,
    },
    /// -K² against the closed form while one parameter varies.
    Sweep {
        name: String,
        #[arg(long)]
        param: String,
        /// Inclusive range `a..b`.
        #[arg(long)]
        range: String,
        /// Values of the other parameters, `key=value,…`.
        #[arg(long, default_value = "")]
        fix: String,
        #[arg(long)]
        csv: bool,
    },
    /// Limit of -K² as (-2)-strings are stretched.
    Limit {
        file: PathBuf,
        /// `auto`, or comma-separated vertex ids naming one string each.
        #[arg(long, default_value = "auto")]
        strings: String,
    },
    /// Enumerate admissible graphs up to isomorphism.
    Enumerate {
        #[arg(long)]
        max_vertices: usize,
        #[arg(long, allow_hyphen_values = true)]
        min_self: i64,
        #[arg(long, default_value_t = 0)]
        max_genus: u32,
        #[arg(long, default_value_t = 1)]
        max_mult: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a property suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = suites::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = suites::DEFAULT_TRIALS)]
        trials: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Suite {
    Lemmas,
    Families,
    Spectrum,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::InvalidGraph(_)
        | Error::NotMinimal(_)
        | Error::Disconnected
        | Error::Io(_)
        | Error::NotSquare { .. }
        | Error::DimensionMismatch { .. }
        | Error::NotSymmetric => EXIT_INVALID_GRAPH,
        Error::NotNegativeDefinite | Error::Singular { .. } => EXIT_NOT_NEGATIVE_DEFINITE,
        Error::Precondition(_) | Error::Domain(_) | Error::Bounds(_) | Error::NonIntegral => {
            EXIT_PRECONDITION
        }
        Error::Assertion(_) => EXIT_INTERNAL,
    }
}

/// Parse `args` (including the program name) and run, writing to the given streams.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID_GRAPH } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.jobs {
        Some(jobs) => match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command, out, err)),
            Err(e) => Err(Error::Precondition(format!("cannot start {jobs} workers: {e}"))),
        },
        None => dispatch(cli.command, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Command, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<i32> {
    match cmd {
        Command::Compute { file, json, dot } => {
            let g = read_graph(&file)?;
            let report = InvariantReport::compute(&g)?;
            if json {
                writeln!(out, "{}", report.to_json())?;
            } else {
                write!(out, "{}", report.to_text(&g))?;
            }
            if let Some(path) = dot {
                std::fs::write(path, g.to_dot())?;
            }
        }
        Command::Family { name, params } => {
            let spec = FamilySpec::from_params(&name, &parse_params(&params)?)?;
            writeln!(out, "{}", spec.generate()?.to_json())?;
        }
        Command::Sweep {
            name,
            param,
            range,
            fix,
            csv,
        } => {
            let (lo, hi) = parse_range(&range)?;
            let mut params = parse_params(&fix)?;
            params.insert(param.clone(), lo);
            let base = FamilySpec::from_params(&name, &params)?;
            let rows = crate::families::sweep(&base, &param, lo..=hi)?;
            if csv {
                writeln!(out, "{param},k2_exact,k2_decimal,closed_form,match")?;
            } else {
                writeln!(out, "{:>6} {:>16} {:>16} {:>16}  match", param, "-K^2", "decimal", "closed form")?;
            }
            for r in &rows {
                let exact = rational::to_canonical(&r.k_squared);
                let dec = rational::to_decimal(&r.k_squared, 12);
                let closed = rational::to_canonical(&r.closed_form);
                if csv {
                    writeln!(out, "{},{exact},{dec},{closed},{}", r.value, r.matches())?;
                } else {
                    writeln!(out, "{:>6} {exact:>16} {dec:>16} {closed:>16}  {}", r.value, r.matches())?;
                }
            }
            if rows.iter().any(|r| !r.matches()) {
                return Err(Error::Assertion("closed form disagrees with direct computation".into()));
            }
        }
        Command::Limit { file, strings } => {
            let g = read_graph(&file)?;
            g.require_admissible()?;
            let chosen = pick_strings(&g, &strings)?;
            for s in &chosen {
                writeln!(out, "string   {}", s.describe(&g))?;
            }
            let outcome = transforms::limit_k_squared(&g, &chosen)?;
            let value = outcome.value.to_string();
            let dec = outcome
                .value
                .finite()
                .map(|q| format!("  (~{})", rational::to_decimal(q, 12)))
                .unwrap_or_default();
            writeln!(out, "limit    {value}{dec}")?;
            let stages: Vec<String> = outcome
                .stages
                .iter()
                .map(|s| serde_json::to_value(s).expect("stage serializes").as_str().unwrap_or("").to_string())
                .collect();
            writeln!(out, "stages   {}", stages.join(" "))?;
            for s in &chosen {
                let single = transforms::limit_k_squared(&g, std::slice::from_ref(s))?.value;
                let fitted = transforms::mobius_limit_crosscheck(&g, s)?;
                let verdict = if single == fitted { "agree" } else { "DISAGREE" };
                writeln!(
                    out,
                    "mobius   {}: fitted {fitted}, contracted form {single}, {verdict}",
                    g.id(s.vertices[0])
                )?;
                if single != fitted {
                    return Err(Error::Assertion("Möbius cross-check disagrees".into()));
                }
            }
        }
        Command::Enumerate {
            max_vertices,
            min_self,
            max_genus,
            max_mult,
            out: path,
        } => {
            let bounds = EnumBounds::new(max_vertices, min_self, max_genus, max_mult);
            let rows = enumeration::scan(&bounds, |g| {
                Some((g.entry().csv_row(), g.invariants.k_squared(), g.invariants.classification))
            })?;
            let mut csv = String::from(enumeration::CSV_HEADER);
            csv.push('\n');
            for (row, _, _) in &rows {
                csv.push_str(row);
                csv.push('\n');
            }
            match path {
                Some(p) => {
                    std::fs::write(&p, csv)?;
                    let report = enumeration::spectrum_report_from(
                        rows.iter().map(|(_, k2, class)| (k2, *class)),
                        &int(0),
                        &int(1),
                    );
                    writeln!(out, "{} graphs written to {}", rows.len(), p.display())?;
                    write!(out, "{}", report.to_text())?;
                }
                None => out.write_all(csv.as_bytes())?,
            }
        }
        Command::Verify { suite, seed, trials } => {
            let report = match suite {
                Suite::Lemmas => suites::lemmas_suite(seed, trials)?,
                Suite::Families => suites::families_suite(8, 6)?,
                Suite::Spectrum => suites::spectrum_suite(&suites::spectrum_bounds())?,
            };
            write!(out, "{}", report.to_text())?;
            if !report.passed() {
                let _ = writeln!(err, "{} failures", report.failures.len());
                return Ok(EXIT_INTERNAL);
            }
        }
    }
    Ok(EXIT_OK)
}

fn read_graph(path: &PathBuf) -> Result<WeightedDualGraph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    WeightedDualGraph::from_json(&text)
}

fn pick_strings(g: &WeightedDualGraph, spec: &str) -> Result<Vec<StringDescriptor>> {
    if spec == "auto" {
        // greedily keep strings whose joint stretch stays negative definite
        let mut found: Vec<StringDescriptor> = Vec::new();
        for s in transforms::detect_strings(g).into_iter().filter(|s| s.is_stretchable()) {
            found.push(s);
            if transforms::limit_k_squared(g, &found).is_err() {
                found.pop();
            }
        }
        if found.is_empty() {
            return Err(Error::Precondition("graph has no stretchable (-2)-string".into()));
        }
        return Ok(found);
    }
    spec.split(',')
        .map(|id| {
            let id = id.trim();
            let v = g
                .index_of(id)
                .ok_or_else(|| Error::Precondition(format!("no vertex {id:?}")))?;
            transforms::string_containing(g, v)
                .ok_or_else(|| Error::Precondition(format!("vertex {id} lies on no (-2)-string")))
        })
        .collect()
}

fn parse_params(s: &str) -> Result<BTreeMap<String, u64>> {
    let mut map = BTreeMap::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Domain(format!("expected key=value, got {part:?}")))?;
        let v: u64 = v
            .trim()
            .parse()
            .map_err(|_| Error::Domain(format!("parameter {k} needs a non-negative integer")))?;
        map.insert(k.trim().to_string(), v);
    }
    Ok(map)
}

fn parse_range(s: &str) -> Result<(u64, u64)> {
    let bad = || Error::Domain(format!("expected a range a..b, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}
