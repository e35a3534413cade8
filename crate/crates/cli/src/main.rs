//! `kleinscatter`: single-point solves, reflection sweeps to CSV, the seeded
//! property suite and the figure presets.
//!
//! Exit codes: 0 success, 1 property failure, 2 invalid input, 3 I/O failure.

mod config;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kleinscatter::analysis::{solve_point, sweep, v0_grid, SweepCurve, WidthRule};
use kleinscatter::matcher::solve_numeric;
use kleinscatter::{run_verification, Geometry, Model, Particle64, ScatteringSolution, SolveMethod, VerifyOptions, Wave};

use config::Opts;

#[derive(Parser)]
#[command(name = "kleinscatter", version, about = "1-D relativistic scattering off piecewise-constant potentials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one configuration and print amplitudes and coefficients.
    Scatter(Opts),
    /// Sweep R over a V0 grid and write CSV.
    Sweep(Opts),
    /// Run the seeded property suite.
    Verify(Opts),
    /// Write the CSV curves of figures 2, 3, 5 and 6.
    Figures(Opts),
}

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Io(String),
    Failed,
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failed => 1,
            CliError::Invalid(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<kleinscatter::ScatterError> for CliError {
    fn from(e: kleinscatter::ScatterError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Scatter(o) => o.merged().and_then(|o| scatter(&o)),
        Command::Sweep(o) => o.merged().and_then(|o| run_sweep(&o)),
        Command::Verify(o) => o.merged().and_then(|o| verify(&o)),
        Command::Figures(o) => o.merged().and_then(|o| figures(&o)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Invalid(msg) | CliError::Io(msg) => eprintln!("error: {msg}"),
                CliError::Failed => {}
            }
            ExitCode::from(e.code())
        }
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn scatter(o: &Opts) -> Result<(), CliError> {
    let model = o.model()?;
    let spec = o.particle()?;
    let sol = match o.geometry()? {
        Some(geometry) => {
            let v0 = o.v0()?;
            let width = match geometry {
                Geometry::Barrier => Some(o.width()?.ok_or_else(|| CliError::Invalid("--width is required for a barrier".into()))?),
                _ => None,
            };
            solve_point(model, geometry, &spec, width, v0)?
        }
        None => solve_numeric(&o.profile()?, &spec, model)?,
    };
    print_solution(&sol).map_err(|e| CliError::Io(e.to_string()))
}

fn print_solution(sol: &ScatteringSolution<f64>) -> io::Result<()> {
    let mut w = io::stdout().lock();
    let spec = sol.spec();
    let b = sol.reflection_amplitude();
    let g = sol.transmitted_amplitude();
    writeln!(w, "model     {}", sol.model().name())?;
    writeln!(w, "geometry  {}", sol.geometry().name())?;
    writeln!(w, "E         {}", fmt(spec.energy()))?;
    writeln!(w, "mc2       {}", fmt(spec.mass_energy()))?;
    let method = match sol.method() {
        SolveMethod::ClosedForm => "closed-form",
        SolveMethod::DenseMatching => "dense-matching",
        SolveMethod::TransferMatrix => "transfer-matrix",
    };
    writeln!(w, "method    {method}")?;
    writeln!(w, "B         {} {}", fmt(b.re), fmt(b.im))?;
    writeln!(w, "G         {} {}", fmt(g.re), fmt(g.im))?;
    writeln!(w, "R         {}", fmt(sol.reflection()))?;
    writeln!(w, "T         {}", fmt(sol.transmission()))?;
    writeln!(w, "limit     {}", sol.limit_point().map_or("none", |b| b.name()))?;
    for (i, r) in sol.regions().iter().enumerate() {
        let (kind, mag) = match r.kinematics.wave {
            Wave::Propagating(p) => ("p", p),
            Wave::Evanescent(k) => ("k", k),
        };
        writeln!(
            w,
            "region {i}  [{}, {}]  V={}  {}  {kind}={}",
            r.segment.left,
            r.segment.right,
            fmt(r.segment.height),
            r.class.regime.name(),
            fmt(mag)
        )?;
    }
    Ok(())
}

fn sweep_geometry(o: &Opts) -> Result<(Geometry, Option<WidthRule<f64>>), CliError> {
    match o.geometry()? {
        Some(Geometry::Barrier) => {
            let w = o.width()?.ok_or_else(|| CliError::Invalid("--width is required for a barrier sweep".into()))?;
            Ok((Geometry::Barrier, Some(w)))
        }
        Some(g) => Ok((g, None)),
        None => Err(CliError::Invalid("sweeps take --geometry step or barrier".into())),
    }
}

fn run_sweep(o: &Opts) -> Result<(), CliError> {
    let model = o.model()?;
    let spec = o.particle()?;
    let (geometry, width) = sweep_geometry(o)?;
    let (min, max, count) = o.v0_range()?;
    let grid = v0_grid(&spec, min, max, count, o.special_points()?)?;
    let curve = sweep(model, geometry, &spec, width, &grid)?;
    match o.out.as_deref() {
        None | Some("-") => curve
            .write_csv(io::stdout().lock())
            .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}"))),
        Some(path) => write_curve(&curve, Path::new(path)),
    }
}

fn write_curve(curve: &SweepCurve<f64>, path: &Path) -> Result<(), CliError> {
    let io_err = |e: io::Error| CliError::Io(format!("cannot write {}: {e}", path.display()));
    let file = File::create(path).map_err(io_err)?;
    curve.write_csv(BufWriter::new(file)).map_err(io_err)
}

fn verify(o: &Opts) -> Result<(), CliError> {
    let opts = VerifyOptions {
        seed: o.seed()?,
        samples: o.samples()?,
        mutation: o.mutation()?,
    };
    let report = run_verification(opts)?;
    println!("seed {} samples {}", report.seed, report.samples);
    for p in &report.properties {
        if p.passed() {
            println!("PASS {} ({} checks)", p.name, p.checked);
        } else {
            println!(
                "FAIL {} ({} of {} checks): {}",
                p.name,
                p.failures,
                p.checked,
                p.first_failure.as_deref().unwrap_or("")
            );
        }
    }
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Failed)
    }
}

/// Model, geometry and width rule of each figure.
fn figure_preset(fig: u32) -> (Model, Geometry, Option<WidthRule<f64>>) {
    match fig {
        2 => (Model::Dirac, Geometry::Step, None),
        3 => (Model::KleinGordon, Geometry::Step, None),
        5 => (Model::Dirac, Geometry::Barrier, Some(WidthRule::FigureConvention)),
        _ => (Model::KleinGordon, Geometry::Barrier, Some(WidthRule::FigureConvention)),
    }
}

const FIGURE_ENERGIES: [f64; 2] = [1.3, 3.0];
const FIGURE_POINTS: usize = 801;

fn figures(o: &Opts) -> Result<(), CliError> {
    let dir = PathBuf::from(o.out.as_deref().unwrap_or("."));
    fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    for fig in o.figures()? {
        let (model, geometry, width) = figure_preset(fig);
        for e in FIGURE_ENERGIES {
            let spec = Particle64::in_rest_units(e)?;
            let grid = v0_grid(&spec, 0.0, 4.0 * e, FIGURE_POINTS, true)?;
            let curve = sweep(model, geometry, &spec, width, &grid)?;
            let path = dir.join(format!("fig{fig}_E{e}.csv"));
            write_curve(&curve, &path)?;
            println!("{}", path.display());
        }
    }
    Ok(())
}
