//! Experiment parameters from flags and an optional JSON config.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::Args;
use hypolib::transforms::{BoundaryDatum, Density};
use hypolib::{Complex64, SpectralParam};
use serde::Deserialize;

/// A failure that maps onto a process exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad flag or config value (exit 2).
    Usage(String),
    /// A numeric check did not hold, or a computation failed (exit 1).
    Check(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Check(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Check(m) => write!(f, "{m}"),
        }
    }
}

impl From<hypolib::Error> for Failure {
    fn from(e: hypolib::Error) -> Self {
        Failure::Check(e.to_string())
    }
}

pub type Outcome<T> = std::result::Result<T, Failure>;

fn usage(flag: &str, msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("{flag}: {msg}"))
}

/// A radius or angle grid: `start:stop:count` or an explicit list.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Spec(String),
    List(Vec<f64>),
}

impl Grid {
    pub fn values(&self, flag: &str) -> Outcome<Vec<f64>> {
        let out = match self {
            Grid::List(v) => v.clone(),
            Grid::Spec(s) => parse_grid(s).map_err(|m| usage(flag, m))?,
        };
        if out.is_empty() {
            return Err(usage(flag, "grid is empty"));
        }
        Ok(out)
    }
}

/// `start:stop:count`, endpoints included; count 1 gives `start`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, m] = parts[..] else {
        return Err(format!("expected start:stop:count, got {s:?}"));
    };
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("not a number: {t:?}"));
    let (a, b) = (num(a)?, num(b)?);
    let m: usize = m.trim().parse().map_err(|_| format!("not a count: {m:?}"))?;
    Ok(match m {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..m).map(|k| a + (b - a) * k as f64 / (m - 1) as f64).collect(),
    })
}

fn parse_grid_arg(s: &str) -> Result<Grid, String> {
    parse_grid(s).map(|_| Grid::Spec(s.to_string()))
}

/// Parameters shared by every command; flags override the config file.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default)]
pub struct Params {
    /// JSON config with any of these parameters (and "command").
    #[arg(long, value_name = "PATH")]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Spectral parameter λ as two reals.
    #[arg(long, num_args = 2, value_names = ["RE", "IM"], allow_negative_numbers = true)]
    pub lambda: Option<Vec<f64>>,

    /// Polyharmonic order.
    #[arg(long)]
    pub n: Option<usize>,

    /// Euclidean radii, start:stop:count.
    #[arg(long, value_parser = parse_grid_arg, allow_hyphen_values = true)]
    pub r_grid: Option<Grid>,

    /// Angles, start:stop:count.
    #[arg(long, value_parser = parse_grid_arg, allow_hyphen_values = true)]
    pub angle_grid: Option<Grid>,

    /// Hyperbolic radii.
    #[arg(long = "R", value_delimiter = ',', allow_negative_numbers = true)]
    #[serde(rename = "R")]
    pub big_r: Option<Vec<f64>>,

    /// Lacunary stages.
    #[arg(long = "N", value_delimiter = ',')]
    #[serde(rename = "N")]
    pub big_n: Option<Vec<usize>>,

    /// Boundary density preset: one, zero, sawtooth, cos:K, sin:K, indicator:C:W.
    #[arg(long)]
    pub density: Option<String>,

    /// Point masses as ANGLE:WEIGHT, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub atoms: Option<Vec<String>>,

    /// Full boundary datum in the JSON format of the library (config only).
    #[arg(skip)]
    pub datum: Option<serde_json::Value>,

    /// Convergence mode: uniform, ae, lp:P, weak:K1;K2;...
    #[arg(long)]
    pub mode: Option<String>,

    /// Admissible-region width.
    #[arg(long)]
    pub a: Option<f64>,

    /// Admissible region: tube or enlarged.
    #[arg(long)]
    pub kind: Option<String>,

    /// Number of equispaced boundary anchors.
    #[arg(long)]
    pub anchors: Option<usize>,

    /// Acceptance tolerance of the command's check.
    #[arg(long)]
    pub tol: Option<f64>,

    /// Acceptance criterion to run alone (selftest).
    #[arg(long)]
    pub criterion: Option<usize>,

    /// Seed of randomized sample sets.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Output path; stdout when absent.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Extra JSON artifact path (borichev: the lacunary spec).
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
struct ConfigFile {
    command: Option<String>,
    #[serde(flatten)]
    params: Params,
}

macro_rules! overlay {
    ($hi:expr, $lo:expr, $($f:ident),*) => {
        Params { config: $hi.config, $($f: $hi.$f.or($lo.$f)),* }
    };
}

impl Params {
    /// Fills unset flags from the config file; returns the config's command.
    pub fn merged(self) -> Outcome<(Params, Option<String>)> {
        let Some(path) = self.config.clone() else {
            return Ok((self, None));
        };
        let file = read_config(&path)?;
        let merged = overlay!(
            self, file.params, lambda, n, r_grid, angle_grid, big_r, big_n, density, atoms, datum, mode, a, kind,
            anchors, tol, criterion, seed, output, json
        );
        Ok((merged, file.command))
    }

    pub fn spectral(&self) -> Outcome<SpectralParam> {
        let l = match self.lambda.as_deref() {
            None => return Err(usage("--lambda", "required")),
            Some([re, im]) => Complex64::new(*re, *im),
            Some(v) => return Err(usage("--lambda", format!("expected two reals, got {}", v.len()))),
        };
        Ok(SpectralParam::new(l))
    }

    /// λ for commands that normalize by Φ_n.
    pub fn spectral_off_ray(&self) -> Outcome<SpectralParam> {
        let s = self.spectral()?;
        s.require_off_ray().map_err(|e| usage("--lambda", e))?;
        Ok(s)
    }

    pub fn n_or(&self, default: usize) -> usize {
        self.n.unwrap_or(default)
    }

    pub fn radii_or(&self, default: Vec<f64>) -> Outcome<Vec<f64>> {
        let r = match &self.r_grid {
            Some(g) => g.values("--r-grid")?,
            None => default,
        };
        if let Some(bad) = r.iter().find(|r| !(0.0..1.0).contains(*r)) {
            return Err(usage("--r-grid", format!("radius {bad} outside [0, 1)")));
        }
        Ok(r)
    }

    pub fn angles_or(&self, default: Vec<f64>) -> Outcome<Vec<f64>> {
        match &self.angle_grid {
            Some(g) => g.values("--angle-grid"),
            None => Ok(default),
        }
    }

    pub fn big_r_or(&self, default: &[f64]) -> Outcome<Vec<f64>> {
        let v = self.big_r.clone().unwrap_or_else(|| default.to_vec());
        if v.is_empty() || v.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
            return Err(usage("--R", "expected a nonempty list of positive radii"));
        }
        Ok(v)
    }

    pub fn big_n_or(&self, default: &[usize]) -> Outcome<Vec<usize>> {
        let v = self.big_n.clone().unwrap_or_else(|| default.to_vec());
        if v.is_empty() {
            return Err(usage("--N", "list is empty"));
        }
        Ok(v)
    }

    pub fn density_or(&self, default: &str) -> Outcome<Density> {
        let name = self.density.as_deref().unwrap_or(default);
        Density::preset(name).map_err(|e| usage("--density", e))
    }

    /// Densities for a comma-free list given as `;`-separated presets.
    pub fn densities(&self, count: usize, default: &str) -> Outcome<Vec<Density>> {
        let spec = self.density.as_deref().unwrap_or(default);
        let names: Vec<&str> = spec.split(';').collect();
        (0..count)
            .map(|k| {
                let name = names.get(k).or(names.last()).copied().unwrap_or(default);
                Density::preset(name).map_err(|e| usage("--density", e))
            })
            .collect()
    }

    pub fn datum_or(&self, default_density: &str, default_atoms: &[(f64, f64)]) -> Outcome<BoundaryDatum> {
        if let Some(v) = &self.datum {
            return BoundaryDatum::from_value(v).map_err(|e| usage("datum", e));
        }
        let density = self.density_or(default_density)?;
        let atoms = match &self.atoms {
            None => default_atoms.to_vec(),
            Some(list) => list.iter().map(|s| parse_atom(s)).collect::<Outcome<Vec<_>>>()?,
        };
        if atoms.is_empty() {
            return Ok(BoundaryDatum::Density(density));
        }
        let atoms = atoms
            .into_iter()
            .map(|(a, w)| hypolib::transforms::Atom {
                point: hypolib::BoundaryPoint::new(a),
                weight: Complex64::new(w, 0.0),
            })
            .collect();
        Ok(BoundaryDatum::Mixture { density, atoms })
    }

    pub fn a_or(&self, default: f64) -> Outcome<f64> {
        let a = self.a.unwrap_or(default);
        if !a.is_finite() {
            return Err(usage("--a", "must be finite"));
        }
        Ok(a)
    }

    pub fn tol_or(&self, default: f64) -> Outcome<f64> {
        let t = self.tol.unwrap_or(default);
        if !(t > 0.0) {
            return Err(usage("--tol", "must be positive"));
        }
        Ok(t)
    }

    pub fn anchors_or(&self, default: usize) -> Outcome<usize> {
        match self.anchors.unwrap_or(default) {
            0 => Err(usage("--anchors", "must be positive")),
            k => Ok(k),
        }
    }
}

fn parse_atom(s: &str) -> Outcome<(f64, f64)> {
    let (a, w) = s.split_once(':').ok_or_else(|| usage("--atoms", format!("expected ANGLE:WEIGHT, got {s:?}")))?;
    let num = |t: &str| t.parse::<f64>().map_err(|_| usage("--atoms", format!("not a number: {t:?}")));
    Ok((num(a)?, num(w)?))
}

fn read_config(path: &Path) -> Outcome<ConfigFile> {
    let text = std::fs::read_to_string(path).map_err(|e| usage("--config", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage("--config", format!("{}: {e}", path.display())))
}

/// Equispaced angles in [−π, π).
pub fn circle_angles(count: usize) -> Vec<f64> {
    (0..count).map(|j| -PI + 2.0 * PI * j as f64 / count as f64).collect()
}
