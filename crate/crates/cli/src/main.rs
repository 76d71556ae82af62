use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hullfix::boundary::{self, DEFAULT_MAX_PERIOD};
use hullfix::config::{parse_config, IfsConfig};
use hullfix::convex::{convex_hull, transform, ConvexBody};
use hullfix::emit::{self, json_report, to_json_string};
use hullfix::hutchinson::{self, AttractorHull, DEFAULT_MAX_ITER};
use hullfix::ocsc::{self, RegularizeCaps};
use hullfix::{Error, IfsSystem, Point};

#[derive(Parser)]
#[command(
    name = "hullfix",
    version,
    about = "Convex hulls of planar self-similar sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the attractor hull with its certificate.
    Hull {
        #[command(flatten)]
        common: Common,
        /// Also draw the image bodies of all words of this length (SVG only).
        #[arg(long)]
        depth: Option<usize>,
    },
    /// List hull sides with their word factorization.
    Sides {
        #[command(flatten)]
        common: Common,
        /// Longest word tried when factoring a side.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        min_length: Option<f64>,
    },
    /// List corner points with periodicity witnesses.
    Corners {
        #[command(flatten)]
        common: Common,
        /// Longest witness word.
        #[arg(long)]
        depth: Option<usize>,
        /// Smallest exterior angle (radians) counted as a corner.
        #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
        threshold: f64,
    },
    /// Tabulate N_p, d_p and s_p for the extreme-point set.
    Dimension {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Check the open convex set condition.
    Check {
        #[command(flatten)]
        common: Common,
        /// `interior` (shrunken hull) or a JSON file with polygon vertices.
        #[arg(long, default_value = "interior")]
        candidate: String,
    },
    /// Emit the config of the p-th refinement.
    Refine {
        #[command(flatten)]
        common: Common,
        /// Word length of the refinement.
        #[arg(long, short)]
        p: usize,
    },
    /// Refine until every first-level boundary component is connected.
    Regularize {
        #[command(flatten)]
        common: Common,
        /// Largest refinement exponent tried.
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
}

#[derive(Args)]
struct Common {
    /// IFS config file.
    config: PathBuf,
    /// Target error bound for the hull.
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    /// `fixed-points`, `point X,Y` or `polygon FILE`.
    #[arg(long, num_args = 1..=2, value_names = ["KIND", "ARG"])]
    seed: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Svg,
    Csv,
    Json,
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_)
            | Error::InvalidArgument(_)
            | Error::InvalidAngle(_)
            | Error::InvalidSimilitude(_) => Failure::Usage(e.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> Outcome<T> {
    Err(Failure::Usage(msg.into()))
}

struct Loaded {
    config: IfsConfig,
    sys: IfsSystem,
}

fn load(common: &Common) -> Outcome<Loaded> {
    let text = fs::read_to_string(&common.config)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", common.config.display())))?;
    let config = parse_config(&text)?;
    let sys = config.to_system()?;
    Ok(Loaded { config, sys })
}

fn read_polygon(path: &Path) -> Outcome<ConvexBody> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let pts: Vec<[f64; 2]> = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("{}: expected [[x, y], …]: {e}", path.display())))?;
    if pts.iter().flatten().any(|v| !v.is_finite()) {
        return usage(format!("{}: non-finite coordinate", path.display()));
    }
    Ok(convex_hull(
        &pts.iter()
            .map(|&[x, y]| Point::new(x, y))
            .collect::<Vec<_>>(),
    )?)
}

fn seed_body(common: &Common, sys: &IfsSystem) -> Outcome<ConvexBody> {
    match common.seed.iter().map(String::as_str).collect::<Vec<_>>()[..] {
        [] | ["fixed-points"] => Ok(hutchinson::default_seed(sys)),
        ["point", xy] => {
            let parsed: Vec<f64> = xy
                .split(',')
                .filter_map(|s| s.trim().parse().ok())
                .collect();
            match parsed[..] {
                [x, y] if x.is_finite() && y.is_finite() => Ok(ConvexBody::Point(Point::new(x, y))),
                _ => usage(format!("--seed point expects X,Y, got {xy:?}")),
            }
        }
        ["polygon", file] => read_polygon(Path::new(file)),
        _ => usage("--seed expects fixed-points, point X,Y or polygon FILE"),
    }
}

fn tolerance(common: &Common, loaded: &Loaded) -> Outcome<f64> {
    match common.tol.or(loaded.config.defaults.tol) {
        Some(t) if t.is_finite() && t > 0.0 => Ok(t),
        Some(t) => usage(format!("tolerance must be positive and finite, got {t}")),
        None => Ok(hutchinson::default_tolerance(&loaded.sys)),
    }
}

fn compute_hull(common: &Common, loaded: &Loaded) -> Outcome<AttractorHull> {
    let tol = tolerance(common, loaded)?;
    let seed = seed_body(common, &loaded.sys)?;
    Ok(hutchinson::iterate_to_fixed_point(
        &loaded.sys,
        &seed,
        tol,
        DEFAULT_MAX_ITER,
    )?)
}

fn format_of(common: &Common, default: Format, allowed: &[Format]) -> Outcome<Format> {
    let f = common.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        usage("this subcommand does not support the requested --format")
    }
}

fn write_out(common: &Common, text: &str) -> Outcome<()> {
    match &common.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Internal(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn hull_summary(h: &AttractorHull) -> Value {
    json!({
        "body": h.body,
        "certificate": h.certificate,
        "perimeter": h.body.perimeter(),
        "area": h.body.area(),
        "diameter": h.body.diameter(),
    })
}

fn run(cmd: Command) -> Outcome<()> {
    match cmd {
        Command::Hull { common, depth } => {
            let loaded = load(&common)?;
            let h = compute_hull(&common, &loaded)?;
            match format_of(&common, Format::Svg, &[Format::Svg, Format::Json])? {
                Format::Json => write_out(
                    &common,
                    &to_json_string(&json_report("hull", &hull_summary(&h))),
                ),
                _ => {
                    let images = match depth {
                        None | Some(0) => Vec::new(),
                        Some(d) => {
                            let count = (loaded.sys.len() as f64).powi(d as i32);
                            if count > 100_000.0 {
                                return usage(format!("--depth {d} would draw {count} bodies"));
                            }
                            loaded
                                .sys
                                .words(d)
                                .map(|w| {
                                    let m = loaded.sys.compose_word(&w)?;
                                    Ok((w, transform(&h.body, &m)))
                                })
                                .collect::<hullfix::Result<Vec<_>>>()?
                        }
                    };
                    let meta = vec![
                        ("perimeter".to_string(), emit::sig12(h.body.perimeter())),
                        ("area".to_string(), emit::sig12(h.body.area())),
                        ("error_bound".to_string(), format!("{:e}", h.error_bound())),
                        (
                            "iterations".to_string(),
                            h.certificate.iterations.to_string(),
                        ),
                    ];
                    write_out(&common, &emit::hull_svg(&h.body, &images, &meta))
                }
            }
        }
        Command::Sides {
            common,
            depth,
            min_length,
        } => {
            let loaded = load(&common)?;
            let format = format_of(&common, Format::Csv, &[Format::Csv, Format::Json])?;
            let h = compute_hull(&common, &loaded)?;
            let min = min_length
                .or(loaded.config.defaults.min_side_length)
                .unwrap_or(1e-3 * h.body.diameter().max(f64::MIN_POSITIVE));
            if !(min > 0.0 && min.is_finite()) {
                return usage(format!("--min-length must be positive, got {min}"));
            }
            let sides = boundary::enumerate_sides(
                &loaded.sys,
                &h,
                depth.unwrap_or(DEFAULT_MAX_PERIOD),
                min,
            )?;
            match format {
                Format::Json => write_out(&common, &to_json_string(&json_report("sides", &sides))),
                _ => write_out(&common, &emit::sides_csv(&sides)),
            }
        }
        Command::Corners {
            common,
            depth,
            threshold,
        } => {
            let loaded = load(&common)?;
            let format = format_of(&common, Format::Csv, &[Format::Csv, Format::Json])?;
            if !(threshold >= 0.0 && threshold.is_finite()) {
                return usage(format!("--threshold must be nonnegative, got {threshold}"));
            }
            let h = compute_hull(&common, &loaded)?;
            let corners = boundary::detect_corners(
                &loaded.sys,
                &h,
                threshold,
                depth.unwrap_or(DEFAULT_MAX_PERIOD),
            );
            match format {
                Format::Json => {
                    write_out(&common, &to_json_string(&json_report("corners", &corners)))
                }
                _ => write_out(&common, &emit::corners_csv(&corners)),
            }
        }
        Command::Dimension { common, depth } => {
            let loaded = load(&common)?;
            let format = format_of(&common, Format::Csv, &[Format::Csv, Format::Json])?;
            let h = compute_hull(&common, &loaded)?;
            let depth = depth.or(loaded.config.defaults.depth).unwrap_or(8);
            let est = boundary::vertex_dimension_estimate(&loaded.sys, &h, depth)?;
            match format {
                Format::Json => {
                    write_out(&common, &to_json_string(&json_report("dimension", &est)))
                }
                _ => write_out(&common, &emit::dimension_csv(&est)),
            }
        }
        Command::Check { common, candidate } => {
            let loaded = load(&common)?;
            format_of(&common, Format::Json, &[Format::Json])?;
            let report = if candidate == "interior" {
                let h = compute_hull(&common, &loaded)?;
                ocsc::interior_condition(&loaded.sys, &h)?
            } else {
                let body = read_polygon(Path::new(&candidate))?;
                match ocsc::check_ocsc(&loaded.sys, &body) {
                    Err(Error::DegenerateCandidate) => {
                        return usage("candidate polygon has empty interior")
                    }
                    r => r?,
                }
            };
            let mut out = json_report("check", &report);
            out["status"] = json!("verified at tolerance");
            write_out(&common, &to_json_string(&out))
        }
        Command::Refine { common, p } => {
            let loaded = load(&common)?;
            format_of(&common, Format::Json, &[Format::Json])?;
            if p == 0 {
                return usage("-p must be at least 1");
            }
            let refined = ocsc::refine(&loaded.sys, p)?;
            let mut cfg = IfsConfig::from_system(&refined);
            cfg.defaults = loaded.config.defaults;
            let mut text = cfg.to_json_pretty();
            text.push('\n');
            write_out(&common, &text)
        }
        Command::Regularize { common, depth } => {
            let loaded = load(&common)?;
            format_of(&common, Format::Json, &[Format::Json])?;
            let h = compute_hull(&common, &loaded)?;
            let caps = RegularizeCaps {
                max_exponent: depth,
                ..RegularizeCaps::default()
            };
            let out = match ocsc::regularize(&loaded.sys, &h, caps) {
                Ok((sys, report)) => json!({
                    "schema": emit::SCHEMA,
                    "kind": "regularize",
                    "success": true,
                    "config": IfsConfig::from_system(&sys),
                    "report": report,
                }),
                Err(Error::Regularization { reason, report }) => json!({
                    "schema": emit::SCHEMA,
                    "kind": "regularize",
                    "success": false,
                    "reason": reason,
                    "report": report,
                }),
                Err(e) => return Err(e.into()),
            };
            write_out(&common, &to_json_string(&out))
        }
    }
}

fn configure_threads() -> Outcome<()> {
    let Ok(v) = std::env::var("HULLFIX_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| {
        Failure::Usage(format!(
            "HULLFIX_THREADS must be a nonnegative integer, got {v:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Internal(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|_| run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("hullfix: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("hullfix: {msg}");
            ExitCode::from(1)
        }
    }
}
