//! `ribbonknot`: command-line front end.
//!
//! Exit status: 0 on success, 1 when the ribbon fails a domain check (not
//! allowed, no positive width, infeasible start), 2 on usage or input errors.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use ribbonknot::generators::{
    ngon_unknot, parse_fold_pattern, pentagram_trefoil, torus_grid, twist_grid, two_stick_unknot,
};
use ribbonknot::grid::{grid_to_diagram, parse_grid};
use ribbonknot::invariants::{audit_bounds, compare_equivalence, ribbon_invariants, KnownFamily, RibbonSpec};
use ribbonknot::io::{parse_diagram, write_diagram, write_report, DiagramDocument};
use ribbonknot::optimizer::{minimize_ribbonlength, OptimizerParams, TraceEntry};
use ribbonknot::ribbon::build_ribbon;
use ribbonknot::svg::{render_svg, RenderSpec};
use ribbonknot::validity::{check_allowed, max_width, Failure, WidthBound};
use ribbonknot::{FoldingInfo, Point2, PolyDiagram, RibbonError};

#[derive(Parser)]
#[command(
    name = "ribbonknot",
    version,
    about = "Folded ribbon knots: allowed widths, ribbonlength and linking numbers"
)]
struct Cli {
    /// Write the main output to this path instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a named instance.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Decide whether the ribbon is allowed.
    Check(RibbonArgs),
    /// Ribbonlength, linking numbers and band type of an allowed ribbon.
    Measure(RibbonArgs),
    /// Largest allowed width by bisection.
    Maxwidth {
        #[command(flatten)]
        input: DiagramInput,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Convert a grid diagram to a diagram document at width 1.
    Grid {
        /// Grid text file (standard input if omitted).
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(conflicts_with = "file")]
        path: Option<PathBuf>,
    },
    /// Locally minimize ribbonlength by moving vertices.
    Optimize {
        #[command(flatten)]
        input: DiagramInput,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 500)]
        max_iterations: usize,
        /// Initial step as a fraction of the shortest edge.
        #[arg(long, default_value_t = 0.05)]
        step: f64,
    },
    /// Compare two ribbons at the link, topological and diagram levels.
    Compare {
        first: PathBuf,
        second: PathBuf,
        /// Width used for both ribbons when a document has none.
        #[arg(long)]
        width: Option<f64>,
    },
    /// Compare ribbonlength with the crossing-number bounds of a knot family.
    Audit {
        #[command(flatten)]
        input: RibbonArgs,
        /// torus:P,Q | twist:N | unknot
        #[arg(long)]
        family: String,
    },
    /// Render the ribbon as SVG.
    Svg(RibbonArgs),
}

#[derive(Subcommand)]
enum GenFamily {
    /// Regular unit-side n-gon unknot.
    Ngon {
        #[arg(long)]
        n: usize,
        /// Fold pattern such as OOU (default: all O).
        #[arg(long)]
        folds: Option<String>,
        /// Displace every vertex uniformly by up to this fraction of a side.
        #[arg(long, default_value_t = 0.0)]
        perturb: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Two coincident edges folded back at both ends.
    TwoStick {
        #[arg(long, default_value_t = 1.0)]
        length: f64,
    },
    /// Pentagram trefoil with its widest fold pattern.
    Pentagram {
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
    },
    /// Grid of the (p, q) torus knot.
    Torus {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
    },
    /// Grid of the twist knot with n half twists.
    Twist {
        #[arg(long)]
        n: u32,
    },
}

#[derive(Args)]
struct DiagramInput {
    /// Diagram document (standard input if omitted or "-").
    path: Option<PathBuf>,
    /// Fold pattern over all vertices, overriding the document.
    #[arg(long)]
    folds: Option<String>,
}

#[derive(Args)]
struct RibbonArgs {
    #[command(flatten)]
    input: DiagramInput,
    /// Ribbon width, overriding the document.
    #[arg(long)]
    width: Option<f64>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(String),
}

impl From<RibbonError> for CliError {
    fn from(e: RibbonError) -> Self {
        match e {
            RibbonError::NoPositiveWidth
            | RibbonError::NotAllowed(_)
            | RibbonError::InfeasibleStart
            | RibbonError::UnresolvedCrossing { .. }
            | RibbonError::OddCrossingSum(_) => CliError::Domain(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

/// Command output: text for the `--out` target and whether the domain check
/// passed.
struct Output {
    text: String,
    ok: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, ok: true }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli.command, cli.out.as_deref()) {
        Ok(out) => {
            let written = match &cli.out {
                Some(path) => fs::write(path, &out.text),
                None => io::stdout().write_all(out.text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(msg)) => {
            eprintln!("failure: {msg}");
            ExitCode::from(1)
        }
    }
}

fn read_input(path: Option<&Path>) -> CliResult<String> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::read_to_string(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

struct Loaded {
    diagram: PolyDiagram,
    folds: FoldingInfo,
    width: Option<f64>,
}

fn load(input: &DiagramInput) -> CliResult<Loaded> {
    let doc = parse_diagram(&read_input(input.path.as_deref())?)?;
    loaded_from(doc, input.folds.as_deref())
}

fn loaded_from(doc: DiagramDocument, pattern: Option<&str>) -> CliResult<Loaded> {
    let diagram = doc.diagram()?;
    let folds = match pattern {
        Some(p) => folds_from_pattern(&diagram, p)?,
        None => doc.folding().ok_or_else(|| CliError::Usage("no folding information; pass --folds".into()))?,
    };
    folds.check_complete(&diagram)?;
    Ok(Loaded { diagram, folds, width: doc.width })
}

/// Pattern character `i` applies to vertex `i`; straight vertices ignore it.
fn folds_from_pattern(k: &PolyDiagram, pattern: &str) -> CliResult<FoldingInfo> {
    let folds = parse_fold_pattern(pattern)?;
    if folds.len() != k.num_edges() {
        return Err(RibbonError::BadPatternLength { expected: k.num_edges(), got: folds.len() }.into());
    }
    Ok(FoldingInfo::new(k.fold_vertices().into_iter().map(|v| (v, folds[v])).collect()))
}

fn width_of(loaded: &Loaded, flag: Option<f64>) -> CliResult<f64> {
    flag.or(loaded.width).ok_or_else(|| CliError::Usage("no width; pass --width".into()))
}

#[derive(Serialize)]
struct CheckOutput<'a> {
    allowed: bool,
    width: f64,
    failures: &'a [Failure],
    layering: Vec<LayerEntry>,
}

#[derive(Serialize)]
struct LayerEntry {
    faces: [usize; 2],
    above: usize,
    contains_crossing: bool,
}

#[derive(Serialize)]
struct MaxWidthOutput<'a> {
    max_width: Option<f64>,
    unbounded: bool,
    /// Scientific notation; fixed six decimals would hide it.
    tolerance: String,
    bracket: [f64; 2],
    ribbonlength: Option<f64>,
    monotone: bool,
    samples: &'a [(f64, bool)],
    failures_above: &'a [Failure],
}

#[derive(Serialize)]
struct OptimizeOutput<'a> {
    ribbonlength: f64,
    width: f64,
    iterations: usize,
    trace: &'a [TraceEntry],
    #[serde(skip_serializing_if = "Option::is_none")]
    diagram: Option<DiagramDocument>,
}

fn run(command: &Command, out: Option<&Path>) -> CliResult<Output> {
    match command {
        Command::Gen { family } => gen(family),
        Command::Check(args) => {
            let loaded = load(&args.input)?;
            let w = width_of(&loaded, args.width)?;
            let rep = check_allowed(&loaded.diagram, w, &loaded.folds)?;
            let layering = rep
                .layering
                .iter()
                .flat_map(|l| l.components())
                .map(|c| LayerEntry {
                    faces: [c.component.faces.0, c.component.faces.1],
                    above: c.above,
                    contains_crossing: c.component.contains_crossing,
                })
                .collect();
            let text = write_report(&CheckOutput { allowed: rep.allowed, width: w, failures: &rep.failures, layering });
            Ok(Output { text, ok: rep.allowed })
        }
        Command::Measure(args) => {
            let loaded = load(&args.input)?;
            let w = width_of(&loaded, args.width)?;
            let inv = ribbon_invariants(&loaded.diagram, w, &loaded.folds)?;
            Ok(Output::ok(write_report(&inv)))
        }
        Command::Maxwidth { input, tol } => {
            let loaded = load(input)?;
            let mw = max_width(&loaded.diagram, &loaded.folds, *tol)?;
            let (max_width, ribbonlength) = match mw.bound {
                WidthBound::Bounded { width } => (Some(width), Some(loaded.diagram.length() / width)),
                WidthBound::Unbounded { .. } => (None, None),
            };
            let text = write_report(&MaxWidthOutput {
                max_width,
                unbounded: mw.is_unbounded(),
                tolerance: format!("{tol:e}"),
                bracket: [mw.bracket.0, mw.bracket.1],
                ribbonlength,
                monotone: mw.monotone,
                samples: &mw.samples,
                failures_above: &mw.failures_above,
            });
            Ok(Output::ok(text))
        }
        Command::Grid { file, path } => {
            let text = read_input(file.as_deref().or(path.as_deref()))?;
            let g = parse_grid(&text)?;
            let (k, f) = grid_to_diagram(&g);
            Ok(Output::ok(write_diagram(&DiagramDocument::new(&k, Some(1.0), Some(&f)))))
        }
        Command::Optimize { input, tol, max_iterations, step } => {
            let loaded = load(input)?;
            let params = OptimizerParams {
                initial_step: *step,
                max_iterations: *max_iterations,
                width_tol: *tol,
                ..OptimizerParams::default()
            };
            let res = minimize_ribbonlength(&loaded.diagram, &loaded.folds, &params)?;
            let doc = DiagramDocument::new(&res.diagram, Some(res.width), Some(&loaded.folds));
            // with --out the diagram goes to the file and the report to stdout
            let report = OptimizeOutput {
                ribbonlength: res.ribbonlength,
                width: res.width,
                iterations: res.trace.len() - 1,
                trace: &res.trace,
                diagram: if out.is_some() { None } else { Some(doc.clone()) },
            };
            if out.is_some() {
                io::stdout().write_all(write_report(&report).as_bytes())?;
                Ok(Output::ok(write_diagram(&doc)))
            } else {
                Ok(Output::ok(write_report(&report)))
            }
        }
        Command::Compare { first, second, width } => {
            let a = loaded_from(parse_diagram(&read_input(Some(first))?)?, None)?;
            let b = loaded_from(parse_diagram(&read_input(Some(second))?)?, None)?;
            let (wa, wb) = (width_of(&a, *width)?, width_of(&b, *width)?);
            let ev = compare_equivalence(
                RibbonSpec { diagram: &a.diagram, width: wa, folding: &a.folds },
                RibbonSpec { diagram: &b.diagram, width: wb, folding: &b.folds },
            )?;
            Ok(Output::ok(write_report(&ev)))
        }
        Command::Audit { input, family } => {
            let loaded = load(&input.input)?;
            let w = width_of(&loaded, input.width)?;
            let fam = parse_family(family)?;
            let audit = audit_bounds(&loaded.diagram, w, fam)?;
            Ok(Output::ok(write_report(&audit)))
        }
        Command::Svg(args) => {
            let loaded = load(&args.input)?;
            let w = width_of(&loaded, args.width)?;
            let rep = check_allowed(&loaded.diagram, w, &loaded.folds)?;
            let Some(layering) = rep.layering else {
                return Err(CliError::Domain(format!("ribbon is not allowed at width {w}")));
            };
            let r = build_ribbon(&loaded.diagram, w, &loaded.folds)?;
            Ok(Output::ok(render_svg(&r, &layering, &RenderSpec::default())?))
        }
    }
}

fn gen(family: &GenFamily) -> CliResult<Output> {
    let doc = match family {
        GenFamily::Ngon { n, folds, perturb, seed } => {
            let pattern = folds.clone().unwrap_or_else(|| "O".repeat(*n));
            let (k, f) = ngon_unknot(*n, &parse_fold_pattern(&pattern)?)?;
            let k = if *perturb > 0.0 {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let a = *perturb;
                k.map_points(|p| Point2::new(p.x + rng.gen_range(-a..=a), p.y + rng.gen_range(-a..=a)))?
            } else {
                k
            };
            DiagramDocument::new(&k, None, Some(&f))
        }
        GenFamily::TwoStick { length } => {
            let (k, f) = two_stick_unknot(*length)?;
            DiagramDocument::new(&k, None, Some(&f))
        }
        GenFamily::Pentagram { radius } => {
            let (k, f) = pentagram_trefoil(*radius)?;
            DiagramDocument::new(&k, None, Some(&f))
        }
        GenFamily::Torus { p, q } => return Ok(Output::ok(torus_grid(*p, *q)?.to_string())),
        GenFamily::Twist { n } => return Ok(Output::ok(twist_grid(*n)?.to_string())),
    };
    Ok(Output::ok(write_diagram(&doc)))
}

fn parse_family(s: &str) -> CliResult<KnownFamily> {
    let bad = || CliError::Usage(format!("bad family {s:?}; expected torus:P,Q, twist:N or unknot"));
    if s == "unknot" {
        return Ok(KnownFamily::unknot());
    }
    if let Some(rest) = s.strip_prefix("torus:") {
        let (p, q) = rest.split_once(',').ok_or_else(bad)?;
        let p = p.trim().parse().map_err(|_| bad())?;
        let q = q.trim().parse().map_err(|_| bad())?;
        return Ok(KnownFamily::torus(p, q)?);
    }
    if let Some(n) = s.strip_prefix("twist:") {
        return Ok(KnownFamily::twist(n.trim().parse().map_err(|_| bad())?)?);
    }
    Err(bad())
}
