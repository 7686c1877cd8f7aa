//! Command-line front end: generate, validate, transform, analyze, and
//! render periodic bicycle paths.
//!
//! Documents travel on standard streams so subcommands compose in pipes:
//! `bikepath generate signseq --n 4 --chi "+-+-" --r 1 | bikepath validate --k 3`.
//!
//! Exit codes: 0 success/pass, 1 validation failure, 2 usage error,
//! 3 degenerate or invalid input data.

use std::fs;
use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bikepath::area::{area_under_path, check_area_preservation, sweep_invariant, AreaBaseline};
use bikepath::darboux::{
    closure_vectors, darboux_transform, decompose_linkages, monodromy, Correspondence,
    DarbouxParams, DarbouxVector, LinkageDecomposition,
};
use bikepath::json::{
    area_report_to_doc, correspondence_to_doc, linkages_to_doc, monodromy_to_doc, path_to_doc,
    summary_to_doc, trial_to_doc, CorrespondenceDoc, LinkagesDoc, NumRepr, PathDoc, Provenance,
};
use bikepath::mobius::ProjectiveParam;
use bikepath::path::{
    check_trapezoidal, make_regular, make_sign_sequence_path, validate_path, PeriodicPath,
    SignSequence, Verdict,
};
use bikepath::rigidity::{random_search, ConstraintSystem, SolveConfig};
use bikepath::scalar::{Rational, Scalar, ScalarMode};
use bikepath::svg::{render_correspondence_svg, render_linkages_svg, render_path_svg, RenderSpec};
use bikepath::Error as CoreError;

const EXIT_OK: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_DEGENERATE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "bikepath",
    version,
    about = "Periodic bicycle paths: constructors, validators, Darboux transforms, monodromy, areas, rigidity search, SVG figures"
)]
struct Cli {
    /// Compute in binary64 floating point instead of exact rationals.
    #[arg(long, global = true)]
    float: bool,
    /// Relative tolerance for float-mode comparisons.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a path document.
    Generate {
        #[command(subcommand)]
        which: GenerateCommand,
    },
    /// Check the bicycle-path conditions for a diagonal step k.
    Validate {
        #[arg(long)]
        k: Option<i64>,
        /// Input path document (defaults to stdin).
        file: Option<String>,
    },
    /// Check the trapezoidal condition for a diagonal step k.
    Trapezoidal {
        #[arg(long)]
        k: Option<i64>,
        file: Option<String>,
    },
    /// Apply the Darboux transformation; emits the image path document.
    Darboux(DarbouxArgs),
    /// Print the monodromy matrix, invariants, and fixed points.
    Monodromy {
        /// Leg length (rational string such as "1/4" unless --float).
        #[arg(long)]
        ell: String,
        file: Option<String>,
    },
    /// Sweep the monodromy conjugacy invariant over a leg-length grid (CSV).
    Sweep {
        #[arg(long)]
        ell_min: String,
        #[arg(long)]
        ell_max: String,
        #[arg(long)]
        steps: usize,
        file: Option<String>,
    },
    /// Print the area under one period of the path.
    Area {
        /// Baseline offset c (defaults to ceil(max |y|) + 1).
        #[arg(long)]
        c: Option<String>,
        file: Option<String>,
    },
    /// Verify a correspondence between two paths and compare their areas.
    CompareArea {
        source: String,
        target: String,
        /// Leg length ℓ.
        #[arg(long, conflicts_with = "ell2")]
        ell: Option<String>,
        /// Squared leg length ℓ².
        #[arg(long)]
        ell2: Option<String>,
        #[arg(long)]
        c: Option<String>,
    },
    /// Decompose a path into its k stride linkages.
    Linkages {
        #[arg(long)]
        k: i64,
        file: Option<String>,
    },
    /// Random-start rigidity search; prints a summary JSON line.
    Rigidity {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: i64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Base seed (BIKEPATH_SEED overrides this default).
        #[arg(long, env = "BIKEPATH_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.05)]
        noise: f64,
        /// Also stream one JSON line per trial before the summary.
        #[arg(long)]
        jsonl: bool,
    },
    /// Render a path, correspondence, or linkage document as SVG.
    Render {
        /// Output file (stdout when omitted).
        #[arg(short, long)]
        output: Option<String>,
        #[arg(long, default_value_t = 2)]
        periods: usize,
        #[arg(long, default_value_t = 800)]
        width: u32,
        /// Draw vertex labels.
        #[arg(long)]
        labels: bool,
        /// Draw the baseline y = -c and shade the area under the path.
        #[arg(long)]
        baseline: Option<f64>,
        file: Option<String>,
    },
}

#[derive(Subcommand)]
enum GenerateCommand {
    /// The regular path V_i = (i/n, 0).
    Regular {
        #[arg(long)]
        n: usize,
    },
    /// A sign-sequence family member: x_j = j/n, y steps of ±r.
    Signseq {
        #[arg(long)]
        n: usize,
        /// Sign string such as "+-+-".
        #[arg(long)]
        chi: String,
        /// Step amplitude (rational string unless --float).
        #[arg(long, default_value = "1")]
        r: String,
    },
}

#[derive(Args)]
struct DarbouxArgs {
    /// Leg length ℓ.
    #[arg(long)]
    ell: String,
    /// Start parameter t of the frame vector ("p/q" or "inf").
    #[arg(long, conflicts_with = "closure")]
    t0: Option<String>,
    /// Use a monodromy fixed point as the start frame (forces float mode).
    #[arg(long, value_enum)]
    closure: Option<ClosurePick>,
    /// Emit the image path (default) or the full correspondence document.
    #[arg(long, value_enum, default_value_t = Emit::Path)]
    emit: Emit,
    file: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ClosurePick {
    First,
    Second,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Emit {
    Path,
    Correspondence,
}

/// CLI-level failure carrying the exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn degenerate(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_DEGENERATE,
            message: message.into(),
        }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Failure {
        Failure::degenerate(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::degenerate(format!("io error: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Failure {
        Failure::degenerate(format!("bad document: {e}"))
    }
}

fn read_input(file: Option<&str>) -> Result<String, Failure> {
    match file {
        None | Some("-") => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            Ok(buf)
        }
        Some(path) => Ok(fs::read_to_string(path)?),
    }
}

fn read_path_doc(file: Option<&str>) -> Result<PathDoc, Failure> {
    let text = read_input(file)?;
    Ok(serde_json::from_str(&text)?)
}

fn print_doc<T: serde::Serialize>(doc: &T) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer(&mut out, doc).map_err(Failure::from)?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Scalar-mode handling: rational documents stay exact unless --float asks
/// for conversion on load.
#[derive(Clone, Copy)]
struct Modes {
    float: bool,
    tol: f64,
}

impl Modes {
    fn doc_mode(&self, doc: &PathDoc) -> Result<ScalarMode, Failure> {
        let native = doc.mode()?;
        if self.float {
            Ok(ScalarMode::Float)
        } else {
            Ok(native)
        }
    }

    fn load_rational(&self, doc: &PathDoc) -> Result<PeriodicPath<Rational>, Failure> {
        Ok(doc.to_path::<Rational>()?)
    }

    fn load_float(&self, doc: &PathDoc) -> Result<PeriodicPath<f64>, Failure> {
        match doc.mode()? {
            ScalarMode::Float => Ok(doc.to_path::<f64>()?),
            ScalarMode::Rational => Ok(doc.to_path::<Rational>()?.to_f64()),
        }
    }
}

fn verdict_exit(verdict: Verdict) -> u8 {
    match verdict {
        Verdict::Pass => EXIT_OK,
        Verdict::Fail => EXIT_FAIL,
        Verdict::Degenerate => EXIT_DEGENERATE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let modes = Modes {
        float: cli.float,
        tol: cli.tol,
    };
    match run(cli.command, modes) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(command: Command, modes: Modes) -> Result<u8, Failure> {
    match command {
        Command::Generate { which } => generate(which, modes),
        Command::Validate { k, file } => validate(k, file.as_deref(), modes),
        Command::Trapezoidal { k, file } => trapezoidal(k, file.as_deref(), modes),
        Command::Darboux(args) => darboux(args, modes),
        Command::Monodromy { ell, file } => monodromy_cmd(&ell, file.as_deref(), modes),
        Command::Sweep {
            ell_min,
            ell_max,
            steps,
            file,
        } => sweep(&ell_min, &ell_max, steps, file.as_deref(), modes),
        Command::Area { c, file } => area(c.as_deref(), file.as_deref(), modes),
        Command::CompareArea {
            source,
            target,
            ell,
            ell2,
            c,
        } => compare_area(
            &source,
            &target,
            ell.as_deref(),
            ell2.as_deref(),
            c.as_deref(),
            modes,
        ),
        Command::Linkages { k, file } => linkages_cmd(k, file.as_deref(), modes),
        Command::Rigidity {
            n,
            k,
            trials,
            seed,
            noise,
            jsonl,
        } => rigidity(n, k, trials, seed, noise, jsonl),
        Command::Render {
            output,
            periods,
            width,
            labels,
            baseline,
            file,
        } => render(
            output.as_deref(),
            periods,
            width,
            labels,
            baseline,
            file.as_deref(),
            modes,
        ),
    }
}

fn signseq_doc<S: Scalar>(n: usize, signs: Vec<i8>, r: S) -> Result<PathDoc, Failure> {
    let seq = SignSequence::new(signs, r)?;
    let path = make_sign_sequence_path(n, &seq)?;
    Ok(path_to_doc(
        &path,
        None,
        Some(Provenance {
            generator: "signseq".into(),
            chi: Some(seq.chi_string()),
            r: Some(NumRepr::of(seq.r())),
        }),
    ))
}

fn generate(which: GenerateCommand, modes: Modes) -> Result<u8, Failure> {
    let doc = match which {
        GenerateCommand::Regular { n } => {
            let provenance = Some(Provenance {
                generator: "regular".into(),
                chi: None,
                r: None,
            });
            if modes.float {
                path_to_doc(&make_regular::<f64>(n)?, None, provenance)
            } else {
                path_to_doc(&make_regular::<Rational>(n)?, None, provenance)
            }
        }
        GenerateCommand::Signseq { n, chi, r } => {
            let signs = SignSequence::<Rational>::parse_chi(&chi)?;
            if signs.len() != n {
                return Err(Failure::degenerate(format!(
                    "--chi has {} signs but --n is {n}",
                    signs.len()
                )));
            }
            if modes.float {
                signseq_doc(n, signs, f64::parse(&r)?)?
            } else {
                signseq_doc(n, signs, Rational::parse(&r)?)?
            }
        }
    };
    print_doc(&doc)?;
    Ok(EXIT_OK)
}

fn resolve_k(k: Option<i64>, doc: &PathDoc) -> Result<i64, Failure> {
    k.or(doc.k).ok_or_else(|| {
        Failure::degenerate("no diagonal step: pass --k or use a document carrying one")
    })
}

fn validate(k: Option<i64>, file: Option<&str>, modes: Modes) -> Result<u8, Failure> {
    let doc = read_path_doc(file)?;
    let k = resolve_k(k, &doc)?;
    fn check<S: Scalar>(path: &PeriodicPath<S>, k: i64, tol: f64) -> Result<Verdict, Failure> {
        let report = validate_path(path, k, tol)?;
        eprintln!(
            "validate k={k}: {:?} (anchored {}, equilateral {}, diagonals {:?}, max violation {:.3e})",
            report.verdict,
            report.anchored,
            report.equilateral.pass,
            report.diagonals.verdict,
            report
                .equilateral
                .max_violation
                .max(report.diagonals.max_violation),
        );
        Ok(report.verdict)
    }
    let verdict = match modes.doc_mode(&doc)? {
        ScalarMode::Rational => check(&modes.load_rational(&doc)?, k, modes.tol)?,
        ScalarMode::Float => check(&modes.load_float(&doc)?, k, modes.tol)?,
    };
    // Forward the document so validators compose in pipes.
    print_doc(&doc)?;
    Ok(verdict_exit(verdict))
}

fn trapezoidal(k: Option<i64>, file: Option<&str>, modes: Modes) -> Result<u8, Failure> {
    let doc = read_path_doc(file)?;
    let k = resolve_k(k, &doc)?;
    let report = match modes.doc_mode(&doc)? {
        ScalarMode::Rational => check_trapezoidal(&modes.load_rational(&doc)?, k, modes.tol)?,
        ScalarMode::Float => check_trapezoidal(&modes.load_float(&doc)?, k, modes.tol)?,
    };
    let classes: Vec<String> = report.quads.iter().map(|q| format!("{q:?}")).collect();
    eprintln!(
        "trapezoidal k={k}: {:?} [{}]",
        report.verdict,
        classes.join(", ")
    );
    print_doc(&doc)?;
    // A degenerate (collinear) quad still satisfies the parallel condition.
    Ok(match report.verdict {
        Verdict::Fail => EXIT_FAIL,
        _ => EXIT_OK,
    })
}

fn parse_param<S: Scalar>(text: &str) -> Result<ProjectiveParam<S>, Failure> {
    if text.trim() == "inf" {
        Ok(ProjectiveParam::infinity())
    } else {
        Ok(ProjectiveParam::finite(S::parse(text)?))
    }
}

fn darboux(args: DarbouxArgs, modes: Modes) -> Result<u8, Failure> {
    let doc = read_path_doc(args.file.as_deref())?;
    let use_float =
        modes.float || args.closure.is_some() || doc.mode()? == ScalarMode::Float;
    if use_float {
        let path = modes.load_float(&doc)?;
        let params = DarbouxParams::from_length(f64::parse(&args.ell)?)?;
        let v0 = match (&args.t0, args.closure) {
            (Some(t0), None) => DarbouxVector::from_param(&parse_param::<f64>(t0)?, &params)?,
            (None, Some(pick)) => {
                let closure = closure_vectors(&path, &params, modes.tol)?;
                let index = match pick {
                    ClosurePick::First => 0,
                    ClosurePick::Second => 1,
                };
                closure.vectors.get(index).cloned().ok_or_else(|| {
                    Failure::degenerate(format!(
                        "monodromy has {} real fixed point(s); no {:?} closure vector",
                        closure.vectors.len(),
                        pick
                    ))
                })?
            }
            _ => return Err(Failure::degenerate("pass exactly one of --t0 or --closure")),
        };
        let result = darboux_transform(&path, &v0, &params, modes.tol)?;
        eprintln!(
            "{}",
            serde_json::json!({
                "closed": result.closure.closed,
                "closure_violation": result.closure.max_violation,
                "degenerate_steps": result.degenerate_steps,
            })
        );
        match args.emit {
            Emit::Path => print_doc(&path_to_doc(&result.image, None, None))?,
            Emit::Correspondence => {
                let corr = Correspondence::from_transform(path, &result, params)?;
                print_doc(&correspondence_to_doc(&corr))?;
            }
        }
    } else {
        let path = modes.load_rational(&doc)?;
        let params = DarbouxParams::from_length(Rational::parse(&args.ell)?)?;
        let t0 = args
            .t0
            .as_deref()
            .ok_or_else(|| Failure::degenerate("rational mode needs --t0 (or use --closure)"))?;
        let v0 = DarbouxVector::from_param(&parse_param::<Rational>(t0)?, &params)?;
        let result = darboux_transform(&path, &v0, &params, modes.tol)?;
        eprintln!(
            "{}",
            serde_json::json!({
                "closed": result.closure.closed,
                "closure_violation": result.closure.max_violation,
                "degenerate_steps": result.degenerate_steps,
            })
        );
        match args.emit {
            Emit::Path => print_doc(&path_to_doc(&result.image, None, None))?,
            Emit::Correspondence => {
                let corr = Correspondence::from_transform(path, &result, params)?;
                print_doc(&correspondence_to_doc(&corr))?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn monodromy_cmd(ell: &str, file: Option<&str>, modes: Modes) -> Result<u8, Failure> {
    let doc = read_path_doc(file)?;
    match modes.doc_mode(&doc)? {
        ScalarMode::Rational => {
            let path = modes.load_rational(&doc)?;
            let params = DarbouxParams::from_length(Rational::parse(ell)?)?;
            let map = monodromy(&path, &params, modes.tol)?;
            let closure = closure_vectors(&path, &params, modes.tol)?;
            print_doc(&monodromy_to_doc(&map, &closure))?;
        }
        ScalarMode::Float => {
            let path = modes.load_float(&doc)?;
            let params = DarbouxParams::from_length(f64::parse(ell)?)?;
            let map = monodromy(&path, &params, modes.tol)?;
            let closure = closure_vectors(&path, &params, modes.tol)?;
            print_doc(&monodromy_to_doc(&map, &closure))?;
        }
    }
    Ok(EXIT_OK)
}

fn rational_grid(lo: &Rational, hi: &Rational, steps: usize) -> Vec<Rational> {
    if steps == 1 {
        return vec![lo.clone()];
    }
    let span = hi.clone() - lo.clone();
    (0..steps)
        .map(|i| lo.clone() + span.clone() * Rational::new(i as i64, (steps - 1) as i64))
        .collect()
}

fn sweep(
    ell_min: &str,
    ell_max: &str,
    steps: usize,
    file: Option<&str>,
    modes: Modes,
) -> Result<u8, Failure> {
    if steps < 1 {
        return Err(Failure::degenerate("--steps must be at least 1"));
    }
    let doc = read_path_doc(file)?;
    let csv = match modes.doc_mode(&doc)? {
        ScalarMode::Rational => {
            let path = modes.load_rational(&doc)?;
            let grid = rational_grid(&Rational::parse(ell_min)?, &Rational::parse(ell_max)?, steps);
            sweep_invariant(&path, &grid, modes.tol)?.to_csv()
        }
        ScalarMode::Float => {
            let path = modes.load_float(&doc)?;
            let lo = f64::parse(ell_min)?;
            let hi = f64::parse(ell_max)?;
            let grid: Vec<f64> = if steps == 1 {
                vec![lo]
            } else {
                (0..steps)
                    .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
                    .collect()
            };
            sweep_invariant(&path, &grid, modes.tol)?.to_csv()
        }
    };
    print!("{csv}");
    Ok(EXIT_OK)
}

fn area(c: Option<&str>, file: Option<&str>, modes: Modes) -> Result<u8, Failure> {
    let doc = read_path_doc(file)?;
    match modes.doc_mode(&doc)? {
        ScalarMode::Rational => {
            let path = modes.load_rational(&doc)?;
            let baseline = match c {
                Some(text) => AreaBaseline::new(Rational::parse(text)?)?,
                None => AreaBaseline::auto_for(&[&path]),
            };
            let value = area_under_path(&path, &baseline)?;
            eprintln!("baseline c = {}", baseline.c().format_exact());
            println!("{}", value.format_exact());
        }
        ScalarMode::Float => {
            let path = modes.load_float(&doc)?;
            let baseline = match c {
                Some(text) => AreaBaseline::new(f64::parse(text)?)?,
                None => AreaBaseline::auto_for(&[&path]),
            };
            let value = area_under_path(&path, &baseline)?;
            eprintln!("baseline c = {}", baseline.c());
            println!("{value}");
        }
    }
    Ok(EXIT_OK)
}

fn compare_area(
    source: &str,
    target: &str,
    ell: Option<&str>,
    ell2: Option<&str>,
    c: Option<&str>,
    modes: Modes,
) -> Result<u8, Failure> {
    if source == "-" && target == "-" {
        return Err(Failure::degenerate("only one input may come from stdin"));
    }
    let source_doc: PathDoc = serde_json::from_str(&read_input(Some(source))?)?;
    let target_doc: PathDoc = serde_json::from_str(&read_input(Some(target))?)?;
    let source_mode = modes.doc_mode(&source_doc)?;
    if source_mode != modes.doc_mode(&target_doc)? {
        return Err(Failure::degenerate(
            "documents have different scalar modes; pass --float to convert both",
        ));
    }
    fn check<S: Scalar>(
        src: PeriodicPath<S>,
        tgt: PeriodicPath<S>,
        ell: Option<&str>,
        ell2: Option<&str>,
        c: Option<&str>,
        tol: f64,
    ) -> Result<bool, Failure> {
        let params = match (ell, ell2) {
            (Some(text), None) => DarbouxParams::from_length(S::parse(text)?)?,
            (None, Some(text)) => DarbouxParams::from_length_squared(S::parse(text)?)?,
            _ => return Err(Failure::degenerate("pass exactly one of --ell or --ell2")),
        };
        let baseline = match c {
            Some(text) => AreaBaseline::new(S::parse(text)?)?,
            None => AreaBaseline::auto_for(&[&src, &tgt]),
        };
        let corr = Correspondence::new(src, tgt, params)?;
        let report = check_area_preservation(&corr, &baseline, tol)?;
        print_doc(&area_report_to_doc(&report))?;
        Ok(report.pass)
    }
    let pass = match source_mode {
        ScalarMode::Rational => check(
            modes.load_rational(&source_doc)?,
            modes.load_rational(&target_doc)?,
            ell,
            ell2,
            c,
            modes.tol,
        )?,
        ScalarMode::Float => check(
            modes.load_float(&source_doc)?,
            modes.load_float(&target_doc)?,
            ell,
            ell2,
            c,
            modes.tol,
        )?,
    };
    Ok(if pass { EXIT_OK } else { EXIT_FAIL })
}

fn linkages_cmd(k: i64, file: Option<&str>, modes: Modes) -> Result<u8, Failure> {
    let doc = read_path_doc(file)?;
    match modes.doc_mode(&doc)? {
        ScalarMode::Rational => {
            let dec = decompose_linkages(&modes.load_rational(&doc)?, k)?;
            print_doc(&linkages_to_doc(&dec))?;
        }
        ScalarMode::Float => {
            let dec = decompose_linkages(&modes.load_float(&doc)?, k)?;
            print_doc(&linkages_to_doc(&dec))?;
        }
    }
    Ok(EXIT_OK)
}

fn rigidity(
    n: usize,
    k: i64,
    trials: usize,
    seed: u64,
    noise: f64,
    jsonl: bool,
) -> Result<u8, Failure> {
    if trials < 1 {
        return Err(Failure::degenerate("--trials must be at least 1"));
    }
    let system = ConstraintSystem::new(n, k)?;
    let (summary, reports) = random_search(&system, trials, seed, noise, &SolveConfig::default());
    if jsonl {
        for (i, rep) in reports.iter().enumerate() {
            print_doc(&trial_to_doc(i, rep))?;
        }
    }
    if summary.counterexample_flag {
        eprintln!(
            "warning: converged solution(s) outside the classified family for k = d·n±1 — \
             potential counterexample, inspect the trial records"
        );
    }
    print_doc(&summary_to_doc(&summary))?;
    Ok(EXIT_OK)
}

/// Rebuilds the parent path from its linkages (used for rendering context).
fn reassemble_parent<S: Scalar>(
    linkages: &[PeriodicPath<S>],
    k: i64,
) -> Result<PeriodicPath<S>, Failure> {
    if linkages.is_empty() || k < 1 {
        return Err(Failure::degenerate("empty linkage decomposition"));
    }
    let q = linkages[0].period() as i64;
    let sub_shift = linkages[0].shift();
    // Parent period: q linkage steps of k cover sub_shift parent periods.
    let n = q * k / sub_shift;
    let mut base: Vec<Option<bikepath::geom::Point<S>>> = vec![None; n as usize];
    for (i, linkage) in linkages.iter().enumerate() {
        for j in 0..q {
            let raw = i as i64 + j * k;
            let parent_index = raw.rem_euclid(n) as usize;
            let cycles = raw.div_euclid(n);
            let v = linkage.vertex(j);
            base[parent_index] = Some(bikepath::geom::Point::new(
                v.x - S::from_int(cycles),
                v.y,
            ));
        }
    }
    let vertices: Option<Vec<_>> = base.into_iter().collect();
    let vertices =
        vertices.ok_or_else(|| Failure::degenerate("linkages do not cover a full parent period"))?;
    Ok(PeriodicPath::new(vertices, 1)?)
}

fn render(
    output: Option<&str>,
    periods: usize,
    width: u32,
    labels: bool,
    baseline: Option<f64>,
    file: Option<&str>,
    modes: Modes,
) -> Result<u8, Failure> {
    let text = read_input(file)?;
    let spec = RenderSpec {
        periods,
        width,
        labels,
        baseline,
        ..RenderSpec::default()
    };
    // Dispatch on document shape: path, correspondence, or linkages.
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let svg = if value.get("vertices").is_some() {
        let doc: PathDoc = serde_json::from_str(&text)?;
        match modes.doc_mode(&doc)? {
            ScalarMode::Rational => render_path_svg(&modes.load_rational(&doc)?, &spec)?,
            ScalarMode::Float => render_path_svg(&modes.load_float(&doc)?, &spec)?,
        }
    } else if value.get("source").is_some() && value.get("target").is_some() {
        let doc: CorrespondenceDoc = serde_json::from_str(&text)?;
        match doc.source.mode()? {
            ScalarMode::Rational => {
                render_correspondence_svg(&doc.to_correspondence::<Rational>()?, &spec)?
            }
            ScalarMode::Float => {
                render_correspondence_svg(&doc.to_correspondence::<f64>()?, &spec)?
            }
        }
    } else if value.get("linkages").is_some() {
        let doc: LinkagesDoc = serde_json::from_str(&text)?;
        let first = doc
            .linkages
            .first()
            .ok_or_else(|| Failure::degenerate("linkage document has no linkages"))?;
        match first.mode()? {
            ScalarMode::Rational => {
                let linkages = doc
                    .linkages
                    .iter()
                    .map(|d| d.to_path::<Rational>())
                    .collect::<Result<Vec<_>, _>>()?;
                let parent = reassemble_parent(&linkages, doc.k)?;
                let dec = LinkageDecomposition { k: doc.k, linkages };
                render_linkages_svg(&parent, &dec, &spec)?
            }
            ScalarMode::Float => {
                let linkages = doc
                    .linkages
                    .iter()
                    .map(|d| d.to_path::<f64>())
                    .collect::<Result<Vec<_>, _>>()?;
                let parent = reassemble_parent(&linkages, doc.k)?;
                let dec = LinkageDecomposition { k: doc.k, linkages };
                render_linkages_svg(&parent, &dec, &spec)?
            }
        }
    } else {
        return Err(Failure::degenerate(
            "unrecognized document: expected a path, correspondence, or linkages",
        ));
    };
    match output {
        None | Some("-") => print!("{svg}"),
        Some(path) => fs::write(path, svg)?,
    }
    Ok(EXIT_OK)
}
