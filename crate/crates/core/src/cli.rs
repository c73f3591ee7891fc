//! Command-line front end shared by the `harmcurv` binary and the tests.

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::critical::{critical_points_with, flat_set_bound_check_with, gauss_lucas_report_with, CriticalPoint};
use crate::curvature::{curvature_grid_with, default_domain_with, flat_points_with, CurvatureGrid, Domain2D, Lattice};
use crate::equivalence::{decide_equal_curvature_with, loop_scan_with};
use crate::error::Error;
use crate::io::{csv_table, fmt17, grid_to_csv, grid_to_json, parse_poly, to_json};
use crate::poly::{ComplexPoly, Part};
use crate::roots::roots_with;
use crate::svg::{marching_squares, render_svg};
use crate::tolerance::Tolerances;
use crate::topology::fiber_signature_with;

pub const MIN_GRID: usize = 16;
pub const MAX_GRID: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Roots,
    Curvature,
    Critical,
    Fibers,
    Equiv,
    Loop,
}

impl Command {
    fn arity(self) -> usize {
        match self {
            Command::Equiv => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PartArg {
    Real,
    Imag,
}

#[derive(Debug, Parser)]
#[command(name = "harmcurv", version, about = "Curvature and level-set topology of harmonic polynomial graphs")]
pub struct Args {
    pub command: Command,
    /// Polynomial files `{"coeffs": [[re, im], ...]}` (two for `equiv`).
    #[arg(required = true, num_args = 1..=2)]
    pub inputs: Vec<PathBuf>,
    /// xmin,xmax,ymin,ymax; defaults to the root hull of P, P', P'' with margin.
    #[arg(long, allow_hyphen_values = true)]
    pub domain: Option<String>,
    #[arg(long = "grid", default_value_t = 512)]
    pub grid: usize,
    #[arg(long, value_enum, default_value_t = PartArg::Real)]
    pub part: PartArg,
    #[arg(long = "t-samples", default_value_t = 16)]
    pub t_samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long = "tol-root")]
    pub tol_root: Option<f64>,
    #[arg(long = "tol-match")]
    pub tol_match: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub inputs: Vec<PathBuf>,
    pub domain: Option<Domain2D>,
    pub grid_n: usize,
    pub part: Part,
    pub t_samples: usize,
    pub tolerances: Tolerances,
    pub out: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Analysis(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Analysis(e) if e.is_numeric() => 3,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Analysis(e) => e.kind(),
        }
    }

    /// One-line JSON diagnostic.
    pub fn diagnostic(&self) -> String {
        serde_json::json!({ "error": self.kind(), "message": self.to_string() }).to_string()
    }
}

fn parse_domain(text: &str) -> Result<Domain2D, CliError> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("--domain: {e}")))?;
    match parts[..] {
        [xmin, xmax, ymin, ymax] => Domain2D::new(xmin, xmax, ymin, ymax).map_err(|e| CliError::Usage(e.to_string())),
        _ => Err(CliError::Usage("--domain expects xmin,xmax,ymin,ymax".into())),
    }
}

impl RunConfig {
    pub fn from_args(args: Args) -> Result<Self, CliError> {
        if args.inputs.len() != args.command.arity() {
            return Err(CliError::Usage(format!(
                "{:?} takes {} input file(s), got {}",
                args.command,
                args.command.arity(),
                args.inputs.len()
            )));
        }
        if !(MIN_GRID..=MAX_GRID).contains(&args.grid) {
            return Err(CliError::Usage(format!("--grid must lie in [{MIN_GRID}, {MAX_GRID}]")));
        }
        let mut tolerances = Tolerances::default();
        for (flag, value, slot) in [
            ("--tol-root", args.tol_root, &mut tolerances.root),
            ("--tol-match", args.tol_match, &mut tolerances.coefficient_match),
        ] {
            if let Some(v) = value {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(CliError::Usage(format!("{flag} must be positive")));
                }
                *slot = v;
            }
        }
        Ok(Self {
            command: args.command,
            inputs: args.inputs,
            domain: args.domain.as_deref().map(parse_domain).transpose()?,
            grid_n: args.grid,
            part: match args.part {
                PartArg::Real => Part::Real,
                PartArg::Imag => Part::Imag,
            },
            t_samples: args.t_samples,
            tolerances,
            out: args.out,
            format: args.format,
        })
    }
}

fn read_poly(path: &PathBuf) -> Result<ComplexPoly, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(parse_poly(&text)?)
}

fn cplx(z: Complex64) -> [String; 2] {
    [fmt17(z.re), fmt17(z.im)]
}

fn unsupported(cmd: Command, format: &str) -> CliError {
    CliError::Usage(format!("{format} output is not available for {cmd:?}"))
}

#[derive(Serialize)]
struct CriticalReport {
    critical_points: Vec<CriticalPoint>,
    flat_points: Option<crate::roots::RootSet>,
    flat_set_bound_holds: Option<bool>,
    gauss_lucas: Option<crate::critical::GaussLucasReport>,
}

#[derive(Serialize)]
struct FiberReport {
    part: Part,
    critical_points: Vec<CriticalPoint>,
    signature: crate::topology::FiberSignature,
}

#[derive(Serialize)]
struct LoopEntry<'a> {
    t: f64,
    curvature_deviation: f64,
    saddle_count: usize,
    level_classes: usize,
    same_level_pair: bool,
    signature: &'a crate::topology::FiberSignature,
}

/// Produces the requested artifact in memory.
pub fn render(config: &RunConfig) -> Result<Vec<u8>, CliError> {
    let tol = &config.tolerances;
    let polys: Vec<ComplexPoly> = config.inputs.iter().map(read_poly).collect::<Result<_, _>>()?;
    let p = &polys[0];
    let n = config.grid_n;
    let domain = |poly: &ComplexPoly| -> Result<Domain2D, CliError> {
        match config.domain {
            Some(d) => Ok(d),
            None => Ok(default_domain_with(poly, tol)?),
        }
    };

    let text = match config.command {
        Command::Roots => {
            let set = roots_with(p, tol)?;
            match config.format {
                Format::Json => to_json(&set),
                Format::Csv => {
                    let rows: Vec<Vec<String>> = set
                        .roots
                        .iter()
                        .map(|r| {
                            let [re, im] = cplx(r.location);
                            vec![re, im, r.multiplicity.to_string(), fmt17(r.residual)]
                        })
                        .collect();
                    csv_table(&["re", "im", "multiplicity", "residual"], &rows)
                }
                Format::Svg => return Err(unsupported(config.command, "svg")),
            }
        }
        Command::Curvature => {
            let grid = curvature_grid_with(p, domain(p)?, n, n, tol)?;
            match config.format {
                Format::Csv => grid_to_csv(&grid),
                Format::Json => grid_to_json(&grid),
                Format::Svg => {
                    let cps = critical_points_with(p, tol)?;
                    render_svg(&grid, &[], &cps.iter().map(|c| c.location).collect::<Vec<_>>())
                }
            }
        }
        Command::Critical => {
            let cps = critical_points_with(p, tol)?;
            match config.format {
                Format::Json => {
                    let curved = p.degree() >= 2;
                    let report = CriticalReport {
                        critical_points: cps,
                        flat_points: if curved { Some(flat_points_with(p, tol)?) } else { None },
                        flat_set_bound_holds: if curved {
                            Some(flat_set_bound_check_with(p, tol)?)
                        } else {
                            None
                        },
                        gauss_lucas: if curved {
                            Some(gauss_lucas_report_with(p, tol)?)
                        } else {
                            None
                        },
                    };
                    to_json(&report)
                }
                Format::Csv => {
                    let rows: Vec<Vec<String>> = cps
                        .iter()
                        .map(|c| {
                            let [x, y] = cplx(c.location);
                            let [a, b] = cplx(c.fpp);
                            vec![x, y, fmt17(c.u_value), fmt17(c.v_value), format!("{:?}", c.kind), a, b]
                        })
                        .collect();
                    csv_table(&["x", "y", "u", "v", "kind", "fpp_re", "fpp_im"], &rows)
                }
                Format::Svg => {
                    let grid = curvature_grid_with(p, domain(p)?, n, n, tol)?;
                    render_svg(&grid, &[], &cps.iter().map(|c| c.location).collect::<Vec<_>>())
                }
            }
        }
        Command::Fibers => {
            let d = domain(p)?;
            let signature = fiber_signature_with(p, config.part, d, n, tol)?;
            let cps = critical_points_with(p, tol)?;
            match config.format {
                Format::Json => to_json(&FiberReport {
                    part: config.part,
                    critical_points: cps,
                    signature,
                }),
                Format::Csv => {
                    let mut rows = Vec::new();
                    for class in &signature.level_partition {
                        for &a in &class.members {
                            for &b in &class.members {
                                if a < b {
                                    let same = signature.same_fiber(a, b).unwrap_or(false);
                                    rows.push(vec![a.to_string(), b.to_string(), fmt17(class.value), same.to_string()]);
                                }
                            }
                        }
                    }
                    csv_table(&["a", "b", "level", "same_fiber"], &rows)
                }
                Format::Svg => {
                    let grid = curvature_grid_with(p, d, n, n, tol)?;
                    fiber_svg(p, config.part, &grid, &signature, &cps)
                }
            }
        }
        Command::Equiv => {
            let verdict = decide_equal_curvature_with(p, &polys[1], tol);
            match config.format {
                Format::Json => to_json(&verdict),
                Format::Csv => {
                    let cert = verdict.certificate;
                    let wit = verdict.witness;
                    let opt = |v: Option<f64>| v.map(fmt17).unwrap_or_default();
                    let row = vec![
                        verdict.equivalent.to_string(),
                        serde_json::to_value(verdict.reason).unwrap().as_str().unwrap_or("").to_string(),
                        verdict.flat_case.to_string(),
                        opt(cert.map(|c| c.alpha.re)),
                        opt(cert.map(|c| c.alpha.im)),
                        opt(cert.map(|c| c.beta.re)),
                        opt(cert.map(|c| c.beta.im)),
                        opt(cert.map(|c| c.residual)),
                        opt(wit.map(|w| w.point.re)),
                        opt(wit.map(|w| w.point.im)),
                        opt(wit.map(|w| w.k_p)),
                        opt(wit.map(|w| w.k_q)),
                    ];
                    csv_table(
                        &[
                            "equivalent", "reason", "flat_case", "alpha_re", "alpha_im", "beta_re", "beta_im", "residual",
                            "witness_x", "witness_y", "K_P", "K_Q",
                        ],
                        &[row],
                    )
                }
                Format::Svg => return Err(unsupported(config.command, "svg")),
            }
        }
        Command::Loop => {
            let samples = loop_scan_with(p, config.t_samples, domain(p)?, n, tol)?;
            let entries: Vec<LoopEntry> = samples
                .iter()
                .map(|s| LoopEntry {
                    t: s.t,
                    curvature_deviation: s.curvature_deviation,
                    saddle_count: s.signature.saddle_count,
                    level_classes: s.signature.level_partition.len(),
                    same_level_pair: s.signature.has_same_level_pair(),
                    signature: &s.signature,
                })
                .collect();
            match config.format {
                Format::Json => to_json(&entries),
                Format::Csv => {
                    let rows: Vec<Vec<String>> = entries
                        .iter()
                        .map(|e| {
                            vec![
                                fmt17(e.t),
                                fmt17(e.curvature_deviation),
                                e.saddle_count.to_string(),
                                e.level_classes.to_string(),
                                e.same_level_pair.to_string(),
                            ]
                        })
                        .collect();
                    csv_table(
                        &["t", "curvature_deviation", "saddle_count", "level_classes", "same_level_pair"],
                        &rows,
                    )
                }
                Format::Svg => return Err(unsupported(config.command, "svg")),
            }
        }
    };
    Ok(text.into_bytes())
}

fn fiber_svg(
    p: &ComplexPoly,
    part: Part,
    grid: &CurvatureGrid,
    signature: &crate::topology::FiberSignature,
    cps: &[CriticalPoint],
) -> String {
    let q = part.apply(p);
    let lattice: Lattice = grid.lattice();
    let values = lattice.sample(|z| q.value_at(z).re);
    let levels: Vec<_> = signature
        .level_partition
        .iter()
        .map(|class| marching_squares(&values, &lattice, class.value, |z| q.value_at(z).re))
        .collect();
    render_svg(grid, &levels, &cps.iter().map(|c| c.location).collect::<Vec<_>>())
}

/// Renders and writes the artifact to `--out` or standard output.
pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let bytes = render(config)?;
    match &config.out {
        Some(path) => std::fs::write(path, &bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(&bytes)
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

/// Parses the process arguments, runs, and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let err = CliError::Usage(e.to_string().lines().next().unwrap_or("").to_string());
            eprintln!("{}", err.diagnostic());
            return err.exit_code();
        }
    };
    match RunConfig::from_args(args).and_then(|cfg| run(&cfg)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            e.exit_code()
        }
    }
}
