//! Run configuration: a TOML file with one table per command, then command
//! line flags on top.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// A field failed validation.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Parse {
        path: PathBuf,
        source: toml::de::Error,
    },
    #[error("no command given on the command line or in the config file")]
    NoCommand,
}

fn field_error(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Field {
        field: field.to_owned(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Spectrum,
    Duality,
    Converge,
    Fig1,
    Fig2,
    Bethe,
    DualNbody,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Duality => "duality",
            Command::Converge => "converge",
            Command::Fig1 => "fig1",
            Command::Fig2 => "fig2",
            Command::Bethe => "bethe",
            Command::DualNbody => "dual-nbody",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Svg,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum InteractionKind {
    Epsilon,
    Delta,
    HardCore,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SectorChoice {
    Odd,
    Even,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SolverChoice {
    Interface,
    Numerov,
}

/// Grid controls shared by the spectral commands. Unset values follow the
/// trap and coupling.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridParams {
    pub half_width: Option<f64>,
    pub points_per_side: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumParams {
    pub omega: f64,
    pub interaction: InteractionKind,
    /// `c` for epsilon, `v` for delta; ignored for the hard core.
    pub strength: f64,
    pub sector: SectorChoice,
    pub solver: SolverChoice,
    pub levels: usize,
    pub tol: f64,
    pub grid: GridParams,
}

impl Default for SpectrumParams {
    fn default() -> Self {
        Self {
            omega: 2.0,
            interaction: InteractionKind::Epsilon,
            strength: 0.5,
            sector: SectorChoice::Odd,
            solver: SolverChoice::Interface,
            levels: 4,
            tol: 1e-10,
            grid: GridParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DualityParams {
    pub c: f64,
    pub omega: f64,
    pub levels: usize,
    pub tol: f64,
}

impl Default for DualityParams {
    fn default() -> Self {
        Self {
            c: 0.5,
            omega: 2.0,
            levels: 4,
            tol: 1e-5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergeParams {
    pub c: f64,
    pub omega: f64,
    pub a_values: Vec<f64>,
    pub grid: GridParams,
}

impl Default for ConvergeParams {
    fn default() -> Self {
        Self {
            c: 1.0,
            omega: 2.0,
            a_values: vec![0.2, 0.1, 0.05, 0.025],
            grid: GridParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig1Params {
    pub omega: f64,
    pub range: f64,
    pub depth: f64,
    pub height: f64,
    /// Plotted window `[-x_max, x_max]`.
    pub x_max: f64,
    pub grid: GridParams,
}

impl Default for Fig1Params {
    fn default() -> Self {
        Self {
            omega: 2.0,
            range: 0.2,
            depth: -50.0,
            height: 300.0,
            x_max: 4.0,
            grid: GridParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig2Params {
    pub omega: f64,
    pub a: f64,
    pub couplings: Vec<f64>,
    pub x_max: f64,
    /// Sup-norm bound for the transformed-fermion against boson comparison.
    pub tol: f64,
    pub grid: GridParams,
}

impl Default for Fig2Params {
    fn default() -> Self {
        Self {
            omega: 2.0,
            a: 0.05,
            couplings: vec![0.2, 1.0, 5.0],
            x_max: 4.0,
            tol: 1e-3,
            grid: GridParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BetheParams {
    pub particles: usize,
    pub length: f64,
    /// Delta strength `v ≥ 0`; ignored when `hard_core` is set.
    pub v: f64,
    pub hard_core: bool,
    pub twist: f64,
}

impl Default for BetheParams {
    fn default() -> Self {
        Self {
            particles: 3,
            length: 10.0,
            v: 1.0,
            hard_core: false,
            twist: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DualNbodyParams {
    pub particles: usize,
    pub length: f64,
    pub c: f64,
    /// Twist seen by the fermions.
    pub fermion_twist: f64,
}

impl Default for DualNbodyParams {
    fn default() -> Self {
        Self {
            particles: 2,
            length: 10.0,
            c: 1.0,
            fermion_twist: std::f64::consts::PI,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub output_dir: PathBuf,
    pub formats: Vec<Format>,
    pub spectrum: SpectrumParams,
    pub duality: DualityParams,
    pub converge: ConvergeParams,
    pub fig1: Fig1Params,
    pub fig2: Fig2Params,
    pub bethe: BetheParams,
    #[serde(rename = "dual-nbody")]
    pub dual_nbody: DualNbodyParams,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: None,
            output_dir: PathBuf::from("out"),
            formats: vec![Format::Csv, Format::Svg, Format::Text],
            spectrum: SpectrumParams::default(),
            duality: DualityParams::default(),
            converge: ConvergeParams::default(),
            fig1: Fig1Params::default(),
            fig2: Fig2Params::default(),
            bethe: BetheParams::default(),
            dual_nbody: DualNbodyParams::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str, path: &Path) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|source| ConfigError::Parse {
            path: path.to_owned(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_owned(),
            source,
        })?;
        Self::from_toml(&text, path)
    }

    pub fn for_command(command: Command) -> Self {
        Self {
            command: Some(command),
            ..Self::default()
        }
    }

    pub fn command(&self) -> Result<Command, ConfigError> {
        self.command.ok_or(ConfigError::NoCommand)
    }

    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }

    /// The full configuration as TOML, in field order.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run configurations always serialize")
    }

    /// SHA-256 of [`Self::to_toml`] with the output directory blanked, so
    /// the same physics in a different directory has the same hash.
    pub fn hash(&self) -> String {
        let stamp = Self {
            output_dir: PathBuf::new(),
            ..self.clone()
        };
        hex::encode(Sha256::digest(stamp.to_toml().as_bytes()))
    }

    /// Checks the section of the selected command.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let command = self.command()?;
        if self.formats.is_empty() {
            return Err(field_error("formats", "at least one of csv, svg, text is required"));
        }
        match command {
            Command::Spectrum => {
                let s = &self.spectrum;
                non_negative("spectrum.omega", s.omega)?;
                finite("spectrum.strength", s.strength)?;
                at_least_one("spectrum.levels", s.levels)?;
                positive("spectrum.tol", s.tol)?;
                grid("spectrum", &s.grid)?;
                if s.solver == SolverChoice::Numerov && s.grid.half_width.is_some() {
                    return Err(field_error(
                        "spectrum.grid.half_width",
                        "the numerov solver takes the half-width from the trap",
                    ));
                }
            }
            Command::Duality => {
                let d = &self.duality;
                finite("duality.c", d.c)?;
                non_negative("duality.omega", d.omega)?;
                at_least_one("duality.levels", d.levels)?;
                positive("duality.tol", d.tol)?;
            }
            Command::Converge => {
                let c = &self.converge;
                finite("converge.c", c.c)?;
                non_negative("converge.omega", c.omega)?;
                if c.a_values.is_empty() {
                    return Err(field_error("converge.a_values", "must not be empty"));
                }
                for (i, a) in c.a_values.iter().enumerate() {
                    positive(&format!("converge.a_values[{i}]"), *a)?;
                }
                if c.a_values.windows(2).any(|w| w[1] >= w[0]) {
                    return Err(field_error("converge.a_values", "must be strictly decreasing"));
                }
                grid("converge", &c.grid)?;
            }
            Command::Fig1 => {
                let f = &self.fig1;
                non_negative("fig1.omega", f.omega)?;
                positive("fig1.range", f.range)?;
                finite("fig1.depth", f.depth)?;
                finite("fig1.height", f.height)?;
                positive("fig1.x_max", f.x_max)?;
                grid("fig1", &f.grid)?;
            }
            Command::Fig2 => {
                let f = &self.fig2;
                non_negative("fig2.omega", f.omega)?;
                positive("fig2.a", f.a)?;
                positive("fig2.x_max", f.x_max)?;
                positive("fig2.tol", f.tol)?;
                if f.couplings.is_empty() {
                    return Err(field_error("fig2.couplings", "must not be empty"));
                }
                for (i, c) in f.couplings.iter().enumerate() {
                    finite(&format!("fig2.couplings[{i}]"), *c)?;
                    if *c == 0.0 {
                        return Err(field_error(&format!("fig2.couplings[{i}]"), "must be non-zero"));
                    }
                }
                grid("fig2", &f.grid)?;
            }
            Command::Bethe => {
                let b = &self.bethe;
                if b.particles < 2 {
                    return Err(field_error("bethe.particles", "must be at least 2"));
                }
                positive("bethe.length", b.length)?;
                non_negative("bethe.v", b.v)?;
                finite("bethe.twist", b.twist)?;
            }
            Command::DualNbody => {
                let d = &self.dual_nbody;
                if d.particles < 2 {
                    return Err(field_error("dual-nbody.particles", "must be at least 2"));
                }
                positive("dual-nbody.length", d.length)?;
                non_negative("dual-nbody.c", d.c)?;
                finite("dual-nbody.fermion_twist", d.fermion_twist)?;
            }
        }
        Ok(())
    }
}

fn finite(field: &str, x: f64) -> Result<(), ConfigError> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(field_error(field, format!("must be finite, got {x}")))
    }
}

fn positive(field: &str, x: f64) -> Result<(), ConfigError> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(field_error(field, format!("must be positive, got {x}")))
    }
}

fn non_negative(field: &str, x: f64) -> Result<(), ConfigError> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(field_error(field, format!("must be >= 0, got {x}")))
    }
}

fn at_least_one(field: &str, n: usize) -> Result<(), ConfigError> {
    if n >= 1 {
        Ok(())
    } else {
        Err(field_error(field, "must be at least 1"))
    }
}

fn grid(section: &str, g: &GridParams) -> Result<(), ConfigError> {
    if let Some(w) = g.half_width {
        positive(&format!("{section}.grid.half_width"), w)?;
    }
    if let Some(n) = g.points_per_side {
        if n < contact_duality::spectral::MIN_POINTS_PER_SIDE {
            return Err(field_error(
                &format!("{section}.grid.points_per_side"),
                format!(
                    "must be at least {}, got {n}",
                    contact_duality::spectral::MIN_POINTS_PER_SIDE
                ),
            ));
        }
    }
    Ok(())
}
