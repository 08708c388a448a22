use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use legkh::check::{run_checks, CheckOptions};
use legkh::complex::{build_complex, Coefficients};
use legkh::diagram::{
    orient, parse_front, serialize_front, trace_components, FrontDiagram, OrientedFront,
};
use legkh::homology::{homology, poincare_polynomial, render_table, report_json};
use legkh::moves::{apply_move, find_moves, random_move_walk_with, WalkConfig};
use legkh::polynomial::{legendrian_jones_with_cap, to_qr};
use legkh::states::DEFAULT_CROSSING_CAP;
use legkh::Error;

#[derive(Parser)]
#[command(
    name = "legkh",
    version,
    about = "Legendrian Jones polynomial and Khovanov homology of fronts"
)]
struct Cli {
    /// Refuse fronts with more crossings than this.
    #[arg(long, global = true, default_value_t = DEFAULT_CROSSING_CAP)]
    cap: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a front file.
    Validate {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Classical invariants and the two-variable polynomial P.
    Jones {
        path: PathBuf,
        #[command(flatten)]
        orientation: Orientation,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Triply graded homology.
    Homology {
        path: PathBuf,
        #[command(flatten)]
        orientation: Orientation,
        #[arg(long, value_enum, default_value_t = Coeff::Z2)]
        coeff: Coeff,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Consistency checks and move-invariance walks.
    Check {
        path: PathBuf,
        #[command(flatten)]
        orientation: Orientation,
        #[arg(long, default_value_t = 10)]
        walks: usize,
        #[arg(long, default_value_t = 4)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Legendrian Reidemeister moves.
    Moves {
        #[command(subcommand)]
        action: MovesAction,
    },
}

#[derive(Subcommand)]
enum MovesAction {
    /// Every applicable move, numbered.
    List {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Apply the move with the given number from `list`.
    Apply {
        path: PathBuf,
        #[arg(long)]
        site: usize,
    },
    /// Apply a seeded sequence of random moves.
    Walk {
        path: PathBuf,
        #[arg(long, default_value_t = 4)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct Orientation {
    /// Components to reverse, e.g. `c0,c2`, or `none`. Required for links.
    #[arg(long)]
    reverse: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Latex,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Coeff {
    Z2,
    Z,
}

/// Exit codes: 0 ok, 1 input error, 2 failed property check, 3 cap exceeded.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TooManyCrossings { .. } => 3,
            Error::NotAComplex => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Validate { path, format } => validate(path, *format),
        Command::Jones {
            path,
            orientation,
            format,
        } => jones(path, orientation, *format, cli.cap),
        Command::Homology {
            path,
            orientation,
            coeff,
            format,
        } => homology_cmd(path, orientation, *coeff, *format, cli.cap),
        Command::Check {
            path,
            orientation,
            walks,
            steps,
            seed,
            format,
        } => {
            let opts = CheckOptions {
                walks: *walks,
                steps: *steps,
                seed: *seed,
                cap: cli.cap,
                ..CheckOptions::default()
            };
            check(path, orientation, &opts, *format)
        }
        Command::Moves { action } => moves(action, cli.cap),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<FrontDiagram, Failure> {
    parse_front(&read(path)?).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn parse_reverse(spec: &str) -> Result<BTreeSet<usize>, Failure> {
    if spec.trim() == "none" || spec.trim().is_empty() {
        return Ok(BTreeSet::new());
    }
    spec.split(',')
        .map(|s| {
            let s = s.trim();
            s.strip_prefix('c')
                .unwrap_or(s)
                .parse::<usize>()
                .map_err(|_| input_error(format!("bad component `{s}` in --reverse")))
        })
        .collect()
}

/// Orients `d`; links must say which components are reversed because the
/// writhe, and with it every grading, depends on it.
fn oriented(d: &FrontDiagram, o: &Orientation, required: bool) -> Result<OrientedFront, Failure> {
    let count = trace_components(d).count;
    let reversed = match &o.reverse {
        Some(spec) => parse_reverse(spec)?,
        None if required && count > 1 => {
            return Err(input_error(format!(
                "front has {count} components; pass --reverse (e.g. `--reverse none` or `--reverse c1`)"
            )))
        }
        None => BTreeSet::new(),
    };
    Ok(orient(d, &reversed)?)
}

fn print_json(v: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("json values serialize")
    );
}

fn validate(path: &Path, format: Format) -> Outcome {
    let text = read(path)?;
    match parse_front(&text) {
        Ok(d) => {
            let components = trace_components(&d).count;
            if format == Format::Json {
                print_json(&json!({
                    "valid": true,
                    "events": d.events().len(),
                    "components": components,
                    "cusps": d.cusp_count(),
                    "crossings": d.crossing_count(),
                }));
            } else {
                println!(
                    "ok: {} events, {components} components, {} cusps, {} crossings",
                    d.events().len(),
                    d.cusp_count(),
                    d.crossing_count()
                );
            }
            Ok(0)
        }
        Err(e) => {
            if format == Format::Json {
                let mut err = json!({ "message": e.to_string() });
                match &e {
                    Error::Syntax { line, .. } => {
                        err["kind"] = json!("syntax");
                        err["line"] = json!(line);
                    }
                    Error::Validation { event, .. } => {
                        err["kind"] = json!("validation");
                        err["event"] = json!(event);
                    }
                    Error::EmptyDiagram => err["kind"] = json!("empty"),
                    _ => err["kind"] = json!("other"),
                }
                print_json(&json!({ "valid": false, "error": err }));
            }
            Err(input_error(format!("{}: {e}", path.display())))
        }
    }
}

fn jones(path: &Path, o: &Orientation, format: Format, cap: usize) -> Outcome {
    let d = load(path)?;
    let of = oriented(&d, o, true)?;
    let p = legendrian_jones_with_cap(&of, cap)?;
    let qr = to_qr(&p)?;
    let reversed: Vec<usize> = of.reversed().iter().copied().collect();
    match format {
        Format::Json => print_json(&json!({
            "components": of.component_count(),
            "cusps": of.cusp_count(),
            "crossings": of.crossing_count(),
            "reversed": reversed,
            "writhe": of.writhe(),
            "left_handed": of.left_handed(),
            "tb": of.thurston_bennequin(),
            "p_ar": p.to_json(),
            "p_qr": qr.to_json(),
        })),
        Format::Text | Format::Latex => {
            let rev = if reversed.is_empty() {
                "none".to_string()
            } else {
                reversed
                    .iter()
                    .map(|c| format!("c{c}"))
                    .collect::<Vec<_>>()
                    .join(",")
            };
            println!("components: {}", of.component_count());
            println!("cusps: {}", of.cusp_count());
            println!("crossings: {}", of.crossing_count());
            println!("reversed: {rev}");
            println!("writhe: {}", of.writhe());
            println!("left-handed: {}", of.left_handed());
            println!("tb: {}", of.thurston_bennequin());
            if format == Format::Latex {
                println!("P(A,r): {}", p.render_latex("A", "r"));
                println!("P(q,r): {}", qr.render_latex("q", "r"));
            } else {
                println!("P(A,r): {}", p.render("A", "r"));
                println!("P(q,r): {}", qr.render("q", "r"));
            }
        }
    }
    Ok(0)
}

fn homology_cmd(path: &Path, o: &Orientation, coeff: Coeff, format: Format, cap: usize) -> Outcome {
    let d = load(path)?;
    let of = oriented(&d, o, true)?;
    let coefficients = match coeff {
        Coeff::Z2 => Coefficients::Z2,
        Coeff::Z => Coefficients::Z,
    };
    let h = homology(&build_complex(&of, coefficients, cap)?)?;
    match format {
        Format::Json => print_json(&report_json(&h)),
        Format::Text | Format::Latex => {
            print!("{}", render_table(&h));
            println!("poincare: {}", poincare_polynomial(&h).render());
        }
    }
    Ok(0)
}

fn check(path: &Path, o: &Orientation, opts: &CheckOptions, format: Format) -> Outcome {
    let d = load(path)?;
    let of = oriented(&d, o, false)?;
    let report = run_checks(&of, opts)?;
    if format == Format::Json {
        let items: Vec<Value> = report
            .items
            .iter()
            .map(|i| json!({ "name": i.name, "passed": i.passed, "detail": i.detail }))
            .collect();
        print_json(&json!({
            "passed": report.passed(),
            "items": items,
            "counterexample": report.counterexample,
        }));
    } else {
        print!("{}", report.render());
    }
    Ok(if report.passed() { 0 } else { 2 })
}

fn moves(action: &MovesAction, cap: usize) -> Outcome {
    match action {
        MovesAction::List { path, format } => {
            let d = load(path)?;
            let sites = find_moves(&d);
            if *format == Format::Json {
                let v = serde_json::to_value(&sites).expect("move sites serialize");
                print_json(&v);
            } else {
                for (n, s) in sites.iter().enumerate() {
                    println!("{n}: {s}");
                }
            }
        }
        MovesAction::Apply { path, site } => {
            let d = load(path)?;
            let sites = find_moves(&d);
            let s = sites.get(*site).ok_or_else(|| {
                input_error(format!(
                    "no move site {site}; this front has {}",
                    sites.len()
                ))
            })?;
            println!("{}", serialize_front(&apply_move(&d, s)?));
        }
        MovesAction::Walk { path, steps, seed } => {
            let d = load(path)?;
            let config = WalkConfig {
                max_crossings: cap,
                ..WalkConfig::default()
            };
            println!(
                "{}",
                serialize_front(&random_move_walk_with(&d, *steps, *seed, &config))
            );
        }
    }
    Ok(0)
}
