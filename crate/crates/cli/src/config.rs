//! Run settings from flags and an optional `key = value` file.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use kleinscatter::analysis::WidthRule;
use kleinscatter::{Geometry, Model, Mutation, Particle64, PotentialProfile};

use crate::CliError;

/// Every setting is a string until resolved, so values from the config file
/// and from flags go through the same parser.
#[derive(Args, Debug, Clone, Default)]
pub struct Opts {
    /// `key = value` file; flags given on the command line win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// dirac | kg
    #[arg(long)]
    pub model: Option<String>,
    /// step | barrier | profile
    #[arg(long)]
    pub geometry: Option<String>,
    /// CSV with header `left,right,height` (used with --geometry profile).
    #[arg(long)]
    pub profile: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub energy: Option<String>,
    /// Rest energy mc²; only with --units raw.
    #[arg(long, allow_hyphen_values = true)]
    pub mass: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub v0: Option<String>,
    /// min:max:count
    #[arg(long = "v0-range", allow_hyphen_values = true)]
    pub v0_range: Option<String>,
    /// Add E - mc², E, E + mc² and 2E to the grid.
    #[arg(long = "special-points")]
    pub special_points: Option<String>,
    /// Barrier width, or `fig` for the figure width rule.
    #[arg(long, allow_hyphen_values = true)]
    pub width: Option<String>,
    /// mc2 (energies in units of mc², the default) | raw
    #[arg(long)]
    pub units: Option<String>,
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub samples: Option<String>,
    /// 2 | 3 | 5 | 6
    #[arg(long)]
    pub fig: Option<String>,
    #[arg(long = "inject-mutation", hide = true)]
    pub inject_mutation: Option<String>,
}

const KEYS: [&str; 15] = [
    "model",
    "geometry",
    "profile",
    "energy",
    "mass",
    "v0",
    "v0-range",
    "special-points",
    "width",
    "units",
    "out",
    "seed",
    "samples",
    "fig",
    "inject-mutation",
];

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<HashMap<String, String>, CliError> {
    let mut map = HashMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| invalid(format!("config line {}: expected key = value", n + 1)))?;
        let k = k.trim().trim_start_matches("--").replace('_', "-");
        if !KEYS.contains(&k.as_str()) {
            return Err(invalid(format!("config line {}: unknown key '{k}'", n + 1)));
        }
        map.insert(k, v.trim().to_string());
    }
    Ok(map)
}

impl Opts {
    /// Fills unset flags from the config file.
    pub fn merged(mut self) -> Result<Self, CliError> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = fs::read_to_string(&path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        let map = parse_config(&text)?;
        let fields: [(&str, &mut Option<String>); 15] = [
            ("model", &mut self.model),
            ("geometry", &mut self.geometry),
            ("profile", &mut self.profile),
            ("energy", &mut self.energy),
            ("mass", &mut self.mass),
            ("v0", &mut self.v0),
            ("v0-range", &mut self.v0_range),
            ("special-points", &mut self.special_points),
            ("width", &mut self.width),
            ("units", &mut self.units),
            ("out", &mut self.out),
            ("seed", &mut self.seed),
            ("samples", &mut self.samples),
            ("fig", &mut self.fig),
            ("inject-mutation", &mut self.inject_mutation),
        ];
        for (key, slot) in fields {
            if slot.is_none() {
                *slot = map.get(key).cloned();
            }
        }
        Ok(self)
    }

    pub fn model(&self) -> Result<Model, CliError> {
        match self.model.as_deref() {
            Some("dirac") => Ok(Model::Dirac),
            Some("kg") | Some("klein-gordon") => Ok(Model::KleinGordon),
            Some(other) => Err(invalid(format!("--model must be dirac or kg, got '{other}'"))),
            None => Err(invalid("--model is required")),
        }
    }

    /// `None` for a profile file.
    pub fn geometry(&self) -> Result<Option<Geometry>, CliError> {
        match self.geometry.as_deref() {
            Some("step") => Ok(Some(Geometry::Step)),
            Some("barrier") => Ok(Some(Geometry::Barrier)),
            Some("profile") => Ok(None),
            Some(other) => Err(invalid(format!("--geometry must be step, barrier or profile, got '{other}'"))),
            None => Err(invalid("--geometry is required")),
        }
    }

    pub fn particle(&self) -> Result<Particle64, CliError> {
        let energy = number("energy", self.energy.as_deref())?.ok_or_else(|| invalid("--energy is required"))?;
        let mass = number("mass", self.mass.as_deref())?;
        let m = match self.units.as_deref().unwrap_or("mc2") {
            "mc2" => match mass {
                None => 1.0,
                Some(1.0) => 1.0,
                Some(m) => {
                    return Err(invalid(format!(
                        "--mass {m} needs --units raw (mc2 units fix mc² = 1)"
                    )))
                }
            },
            "raw" => mass.ok_or_else(|| invalid("--units raw needs --mass"))?,
            other => return Err(invalid(format!("--units must be mc2 or raw, got '{other}'"))),
        };
        Particle64::new(m, energy).map_err(|e| invalid(e.to_string()))
    }

    pub fn v0(&self) -> Result<f64, CliError> {
        number("v0", self.v0.as_deref())?.ok_or_else(|| invalid("--v0 is required"))
    }

    pub fn width(&self) -> Result<Option<WidthRule<f64>>, CliError> {
        match self.width.as_deref() {
            None => Ok(None),
            Some("fig") => Ok(Some(WidthRule::FigureConvention)),
            Some(s) => {
                let a = parse_f64("width", s)?;
                if !(a > 0.0 && a.is_finite()) {
                    return Err(invalid(format!("--width must be positive, got {s}")));
                }
                Ok(Some(WidthRule::Fixed(a)))
            }
        }
    }

    pub fn v0_range(&self) -> Result<(f64, f64, usize), CliError> {
        let s = self
            .v0_range
            .as_deref()
            .ok_or_else(|| invalid("--v0-range min:max:count is required"))?;
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(invalid(format!("--v0-range must be min:max:count, got '{s}'")));
        }
        let min = parse_f64("v0-range min", parts[0])?;
        let max = parse_f64("v0-range max", parts[1])?;
        let count = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|_| invalid(format!("--v0-range count must be a whole number, got '{}'", parts[2])))?;
        Ok((min, max, count))
    }

    pub fn special_points(&self) -> Result<bool, CliError> {
        match self.special_points.as_deref() {
            None | Some("false") | Some("no") => Ok(false),
            Some("true") | Some("yes") => Ok(true),
            Some(other) => Err(invalid(format!("--special-points must be true or false, got '{other}'"))),
        }
    }

    pub fn seed(&self) -> Result<u64, CliError> {
        match self.seed.as_deref() {
            None => Ok(42),
            Some(s) => s
                .trim()
                .parse()
                .map_err(|_| invalid(format!("--seed must be a non-negative integer, got '{s}'"))),
        }
    }

    pub fn samples(&self) -> Result<usize, CliError> {
        let n: usize = match self.samples.as_deref() {
            None => 1000,
            Some(s) => s
                .trim()
                .parse()
                .map_err(|_| invalid(format!("--samples must be a whole number, got '{s}'")))?,
        };
        if n == 0 {
            return Err(invalid("--samples must be at least 1"));
        }
        Ok(n)
    }

    pub fn mutation(&self) -> Result<Option<Mutation>, CliError> {
        match self.inject_mutation.as_deref() {
            None => Ok(None),
            Some("flip-ev-sign") => Ok(Some(Mutation::FlipEvSign)),
            Some(other) => Err(invalid(format!("unknown mutation '{other}'"))),
        }
    }

    pub fn figures(&self) -> Result<Vec<u32>, CliError> {
        match self.fig.as_deref() {
            None => Ok(vec![2, 3, 5, 6]),
            Some(s) => match s.trim().parse::<u32>() {
                Ok(n @ (2 | 3 | 5 | 6)) => Ok(vec![n]),
                _ => Err(invalid(format!("--fig must be 2, 3, 5 or 6, got '{s}'"))),
            },
        }
    }

    pub fn profile(&self) -> Result<PotentialProfile<f64>, CliError> {
        let path = self
            .profile
            .as_deref()
            .ok_or_else(|| invalid("--geometry profile needs --profile <file>"))?;
        read_profile(Path::new(path))
    }
}

fn parse_f64(name: &str, s: &str) -> Result<f64, CliError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| invalid(format!("--{name} must be a number, got '{s}'")))?;
    if v.is_nan() {
        return Err(invalid(format!("--{name} is NaN")));
    }
    Ok(v)
}

fn number(name: &str, s: Option<&str>) -> Result<Option<f64>, CliError> {
    s.map(|s| parse_f64(name, s)).transpose()
}

/// Reads consecutive `left,right,height` segments covering the whole line
/// (`-inf` and `inf` at the ends).
pub fn read_profile(path: &Path) -> Result<PotentialProfile<f64>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Io(format!("cannot read profile {}: {e}", path.display())))?;
    let headers = reader.headers().map_err(|e| invalid(format!("profile {}: {e}", path.display())))?;
    if headers.iter().collect::<Vec<_>>() != ["left", "right", "height"] {
        return Err(invalid(format!("profile {}: header must be left,right,height", path.display())));
    }
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| invalid(format!("profile {}: {e}", path.display())))?;
        let field = |j: usize, what: &str| -> Result<f64, CliError> {
            rec.get(j)
                .unwrap_or("")
                .parse::<f64>()
                .map_err(|_| invalid(format!("profile row {}: bad {what} '{}'", i + 1, rec.get(j).unwrap_or(""))))
        };
        rows.push((field(0, "left")?, field(1, "right")?, field(2, "height")?));
    }
    let (Some(first), Some(last)) = (rows.first(), rows.last()) else {
        return Err(invalid(format!("profile {} has no segments", path.display())));
    };
    if first.0 != f64::NEG_INFINITY || last.1 != f64::INFINITY {
        return Err(invalid("profile must start at -inf and end at inf"));
    }
    for w in rows.windows(2) {
        if w[0].1 != w[1].0 {
            return Err(invalid(format!("profile segments not contiguous at {} / {}", w[0].1, w[1].0)));
        }
    }
    let interfaces: Vec<f64> = rows[..rows.len() - 1].iter().map(|r| r.1).collect();
    let heights: Vec<f64> = rows.iter().map(|r| r.2).collect();
    PotentialProfile::from_interfaces(&interfaces, &heights).map_err(|e| invalid(e.to_string()))
}
