//! Command-line front end.
//!
//! Exit codes: 0 success, 1 proven none (or a failed check), 2 refusal above
//! the oracle threshold, 3 input error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cuts::{check_class, classify_in_place, enumerate_robust_cuts, Class};
use crate::families::{gen_a, gen_circulant_b, gen_counterexample, gen_random_pt, random_valid_prescription};
use crate::orient::{is_valid_orientation, oracle_solve, Orientation, Prescription, ORACLE_LIMIT};
use crate::pgr::{parse_orientation, parse_pgr, serialize_orientation, serialize_pgr, PgrDocument};
use crate::solver::{solve, SolverConfig, TraceOutcome, EAGER_LIMIT};
use crate::surface::EmbeddedGraph;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NONE: i32 = 1;
pub const EXIT_REFUSED: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "z3orient", version, about = "Valid Z3 orientations of embedded graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    /// Circulant B_i, parameter i odd >= 5
    B,
    /// Almost-circulant A_i, parameter i odd >= 5
    A,
    /// Counterexample CE(k), parameter k >= 0
    Ce,
    /// Random PT instance, parameter is the seed
    Rpt,
}

#[derive(Debug, clap::Args)]
struct PrescriptionArgs {
    /// `random`, or a file of `p <v> <r>` lines; defaults to the graph's own
    /// prescription, else all zero
    #[arg(long = "p")]
    p: Option<String>,
    /// Seed for `--p random`
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a family member as .pgr
    Gen {
        family: Family,
        param: i64,
        /// Vertex bound for `rpt`
        #[arg(long, default_value_t = 9)]
        max_vertices: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Find a valid orientation
    Solve {
        file: PathBuf,
        #[command(flatten)]
        p: PrescriptionArgs,
        /// Free edges above which the oracle refuses
        #[arg(long, default_value_t = ORACLE_LIMIT)]
        threshold: usize,
        /// Free edges at or below which the oracle runs first
        #[arg(long, default_value_t = EAGER_LIMIT)]
        eager: usize,
        /// Write the reduction trace here
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check an orientation file against a graph
    Verify { graph: PathBuf, orientation: PathBuf },
    /// List edge cuts
    Cuts {
        file: PathBuf,
        #[arg(long = "max", default_value_t = 5)]
        max: usize,
        #[arg(long, default_value_t = 2)]
        min_side: usize,
    },
    /// List facial walks
    Faces { file: PathBuf },
    /// Check membership in a graph class
    Check {
        file: PathBuf,
        #[arg(long)]
        class: String,
    },
    /// Exhaustive search for a valid orientation
    Oracle {
        file: PathBuf,
        #[command(flatten)]
        p: PrescriptionArgs,
        #[arg(long, default_value_t = ORACLE_LIMIT)]
        threshold: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate, solve and validate random PT instances
    Corpus {
        /// Seed range `a..b`, end exclusive
        #[arg(long)]
        seeds: String,
        #[arg(long, default_value_t = 9)]
        max_vertices: usize,
        /// Directory for per-instance .pgr and .ori files
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

/// A failure to report on standard error with its exit code.
struct Fail(i32, String);

fn input(msg: impl Into<String>) -> Fail {
    Fail(EXIT_INPUT, msg.into())
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<PgrDocument, Fail> {
    parse_pgr(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), Fail> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| input(format!("{}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| input(format!("stdout: {e}"))),
    }
}

fn prescription(doc: &PgrDocument, args: &PrescriptionArgs) -> Result<Prescription, Fail> {
    let p = match args.p.as_deref() {
        Some("random") => random_valid_prescription(&doc.graph, &mut ChaCha8Rng::seed_from_u64(args.seed)),
        Some(file) => {
            let path = Path::new(file);
            let (o, p) = parse_orientation(&read(path)?).map_err(|e| input(format!("{file}: {e}")))?;
            if !o.tails.is_empty() {
                return Err(input(format!("{file}: expected only \"p <v> <r>\" lines")));
            }
            p.unwrap_or_default()
        }
        None => doc.prescription.clone().unwrap_or_default(),
    };
    Ok(p.on(&doc.graph))
}

fn generate(family: Family, param: i64, max_vertices: usize) -> Result<(EmbeddedGraph, Option<Prescription>), Fail> {
    let bad = |e: crate::families::FamilyError| input(e.to_string());
    Ok(match family {
        Family::B => (gen_circulant_b(param).map_err(bad)?, None),
        Family::A => (gen_a(param).map_err(bad)?, None),
        Family::Ce => {
            let (g, p, _) = gen_counterexample(param).map_err(bad)?;
            (g, Some(p))
        }
        Family::Rpt => {
            let seed = u64::try_from(param).map_err(|_| input(format!("seed {param} is negative")))?;
            let (g, p) = gen_random_pt(seed, max_vertices).map_err(bad)?;
            (g, Some(p))
        }
    })
}

fn parse_seeds(s: &str) -> Result<std::ops::Range<u64>, Fail> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| input(format!("seed range {s:?} is not a..b")))?;
    let a: u64 = a.parse().map_err(|_| input(format!("bad seed {a:?}")))?;
    let b: u64 = b.parse().map_err(|_| input(format!("bad seed {b:?}")))?;
    Ok(a..b)
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32, Fail> {
    match cmd {
        Command::Gen {
            family,
            param,
            max_vertices,
            output,
        } => {
            let (g, p) = generate(family, param, max_vertices)?;
            emit(out, output.as_deref(), &serialize_pgr(&g, p.as_ref()))?;
            Ok(EXIT_OK)
        }
        Command::Solve {
            file,
            p,
            threshold,
            eager,
            trace,
            output,
        } => {
            let doc = load(&file)?;
            let p = prescription(&doc, &p)?;
            let cfg = SolverConfig {
                oracle_threshold: threshold,
                eager_threshold: eager.min(threshold),
                ..SolverConfig::default()
            };
            let t = solve(&doc.graph, &p, None, &cfg).map_err(|e| input(e.to_string()))?;
            if let Some(path) = trace {
                fs::write(&path, t.to_string()).map_err(|e| input(format!("{}: {e}", path.display())))?;
            }
            match &t.outcome {
                TraceOutcome::Valid(o) => {
                    emit(out, output.as_deref(), &serialize_orientation(o, Some(&p)))?;
                    Ok(EXIT_OK)
                }
                TraceOutcome::None => Err(Fail(EXIT_NONE, "no valid orientation exists".into())),
                TraceOutcome::Refused(why) => Err(Fail(EXIT_REFUSED, format!("refused: {why}"))),
            }
        }
        Command::Verify { graph, orientation } => {
            let doc = load(&graph)?;
            let (o, p) = parse_orientation(&read(&orientation)?)
                .map_err(|e| input(format!("{}: {e}", orientation.display())))?;
            let p = p.or(doc.prescription.clone()).unwrap_or_default().on(&doc.graph);
            match is_valid_orientation(&doc.graph, &p, &o) {
                Ok(true) => {
                    writeln!(out, "valid").map_err(|e| input(e.to_string()))?;
                    Ok(EXIT_OK)
                }
                Ok(false) => Err(Fail(EXIT_NONE, "orientation does not meet the prescription".into())),
                Err(e) => Err(input(e.to_string())),
            }
        }
        Command::Cuts { file, max, min_side } => {
            let doc = load(&file)?;
            let cuts = enumerate_robust_cuts(&doc.graph, max, min_side).map_err(|e| input(e.to_string()))?;
            let mut s = String::new();
            for mut c in cuts {
                classify_in_place(&doc.graph, &mut c).map_err(|e| input(e.to_string()))?;
                let ty = c.cut_type.map_or("-".to_string(), |k| k.to_string());
                let side: Vec<String> = c.side.iter().map(|v| v.to_string()).collect();
                s.push_str(&format!("cut size={} type={ty} side={}\n", c.size, side.join(",")));
            }
            emit(out, None, &s)?;
            Ok(EXIT_OK)
        }
        Command::Faces { file } => {
            let doc = load(&file)?;
            let g = &doc.graph;
            let idx = g.trace_faces().map_err(|e| input(e.to_string()))?;
            let spec = g.specified_face_indices(&idx).unwrap_or_default();
            let mut s = String::new();
            for (i, w) in idx.walks.iter().enumerate() {
                let vs: Vec<String> = g.walk_vertices(w).iter().map(|v| v.to_string()).collect();
                let mark = if spec.contains(&i) { " specified" } else { "" };
                s.push_str(&format!("face {i} len={} vertices={}{mark}\n", w.len(), vs.join(",")));
            }
            if let Ok(chi) = g.euler_characteristic() {
                s.push_str(&format!("euler {chi}\n"));
            }
            emit(out, None, &s)?;
            Ok(EXIT_OK)
        }
        Command::Check { file, class } => {
            let doc = load(&file)?;
            let class: Class = class.parse().map_err(|e: crate::cuts::CutError| input(e.to_string()))?;
            let p = doc.prescription.clone().unwrap_or_default().on(&doc.graph);
            let r = check_class(&doc.graph, &p, class).map_err(|e| input(e.to_string()))?;
            let mut s = String::new();
            for (cond, why) in &r.violations {
                s.push_str(&format!("violation {cond} {why}\n"));
            }
            s.push_str(&format!("class {} {}\n", r.class_name, if r.holds { "holds" } else { "fails" }));
            emit(out, None, &s)?;
            Ok(if r.holds { EXIT_OK } else { EXIT_NONE })
        }
        Command::Oracle {
            file,
            p,
            threshold,
            output,
        } => {
            let doc = load(&file)?;
            let p = prescription(&doc, &p)?;
            match oracle_solve(&doc.graph, &p, &Orientation::new(), threshold) {
                Ok(Some(o)) => {
                    emit(out, output.as_deref(), &serialize_orientation(&o, Some(&p)))?;
                    Ok(EXIT_OK)
                }
                Ok(None) => Err(Fail(EXIT_NONE, "no valid orientation exists".into())),
                Err(e @ crate::orient::OrientError::TooLarge { .. }) => Err(Fail(EXIT_REFUSED, e.to_string())),
                Err(e) => Err(input(e.to_string())),
            }
        }
        Command::Corpus {
            seeds,
            max_vertices,
            out_dir,
        } => {
            let seeds = parse_seeds(&seeds)?;
            if let Some(d) = &out_dir {
                fs::create_dir_all(d).map_err(|e| input(format!("{}: {e}", d.display())))?;
            }
            let cfg = SolverConfig::default();
            let mut code = EXIT_OK;
            let mut s = String::new();
            for seed in seeds {
                let (g, p) = gen_random_pt(seed, max_vertices).map_err(|e| input(e.to_string()))?;
                let t = solve(&g, &p, None, &cfg).map_err(|e| input(e.to_string()))?;
                let outcome = match &t.outcome {
                    TraceOutcome::Valid(_) => "valid",
                    TraceOutcome::None => "none",
                    TraceOutcome::Refused(_) => "refused",
                };
                if outcome != "valid" {
                    code = code.max(if outcome == "none" { EXIT_NONE } else { EXIT_REFUSED });
                }
                s.push_str(&format!(
                    "seed {seed} vertices={} edges={} steps={} outcome={outcome}\n",
                    g.vertex_count(),
                    g.edge_count(),
                    t.steps.len()
                ));
                if let Some(d) = &out_dir {
                    let w = |name: String, text: String| {
                        let path = d.join(name);
                        fs::write(&path, text).map_err(|e| input(format!("{}: {e}", path.display())))
                    };
                    w(format!("{seed}.pgr"), serialize_pgr(&g, Some(&p)))?;
                    w(format!("{seed}.trace"), t.to_string())?;
                    if let Some(o) = t.orientation() {
                        w(format!("{seed}.ori"), serialize_orientation(o, Some(&p)))?;
                    }
                }
            }
            emit(out, None, &s)?;
            Ok(code)
        }
    }
}

/// Runs the command line `argv` (program name first) and returns the exit
/// code. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_INPUT;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(Fail(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}
