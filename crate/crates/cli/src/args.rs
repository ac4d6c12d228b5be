//! Command-line flags. Every flag is optional and overrides the value from
//! `--config` (or the built-in default).

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{
    Command, ConfigError, Format, InteractionKind, RunConfig, SectorChoice, SolverChoice,
};

#[derive(Debug, Parser)]
#[command(name = "cduality", version, about = "Fermion/boson contact-interaction solvers")]
pub struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Comma-separated subset of csv, svg, text.
    #[arg(long, global = true, value_delimiter = ',')]
    pub format: Option<Vec<Format>>,
    #[command(subcommand)]
    pub command: Option<Cmd>,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Lowest levels for one point interaction in a harmonic trap.
    Spectrum(SpectrumArgs),
    /// Compare epsilon(c) fermions with delta(1/c) bosons level by level.
    Duality(DualityArgs),
    /// Three-spike ground-energy error as the spacing shrinks.
    Converge(ConvergeArgs),
    /// Odd states of a finite square well, attractive and repulsive.
    Fig1(Fig1Args),
    /// Three-spike fermions next to zero-range bosons.
    Fig2(Fig2Args),
    /// Bethe-ansatz ground state of delta bosons on a ring.
    Bethe(BetheArgs),
    /// Ring fermions with epsilon contacts through their bosonic dual.
    DualNbody(DualNbodyArgs),
}

#[derive(Debug, Args, Default)]
pub struct GridArgs {
    #[arg(long)]
    pub half_width: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long, value_enum)]
    pub interaction: Option<InteractionKind>,
    /// `c` for epsilon, `v` for delta.
    #[arg(long, allow_hyphen_values = true)]
    pub strength: Option<f64>,
    #[arg(long, value_enum)]
    pub sector: Option<SectorChoice>,
    #[arg(long, value_enum)]
    pub solver: Option<SolverChoice>,
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct DualityArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    /// Comma-separated, decreasing.
    #[arg(long = "a", value_delimiter = ',')]
    pub a_values: Option<Vec<f64>>,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct Fig1Args {
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub range: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub depth: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub height: Option<f64>,
    #[arg(long)]
    pub x_max: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct Fig2Args {
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    /// Comma-separated `c` values, one figure row each.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub couplings: Option<Vec<f64>>,
    #[arg(long)]
    pub x_max: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct BetheArgs {
    #[arg(long)]
    pub particles: Option<usize>,
    #[arg(long)]
    pub length: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub v: Option<f64>,
    #[arg(long)]
    pub hard_core: bool,
    #[arg(long, allow_hyphen_values = true)]
    pub twist: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DualNbodyArgs {
    #[arg(long)]
    pub particles: Option<usize>,
    #[arg(long)]
    pub length: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub fermion_twist: Option<f64>,
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn set_grid(slot: &mut crate::config::GridParams, g: GridArgs) {
    if g.half_width.is_some() {
        slot.half_width = g.half_width;
    }
    if g.points.is_some() {
        slot.points_per_side = g.points;
    }
}

impl Cli {
    /// Loads `--config` if given, then applies the flags.
    pub fn into_config(self) -> Result<RunConfig, ConfigError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        set(&mut cfg.output_dir, self.out);
        set(&mut cfg.formats, self.format);
        let Some(cmd) = self.command else {
            return Ok(cfg);
        };
        match cmd {
            Cmd::Spectrum(a) => {
                cfg.command = Some(Command::Spectrum);
                let s = &mut cfg.spectrum;
                set(&mut s.omega, a.omega);
                set(&mut s.interaction, a.interaction);
                set(&mut s.strength, a.strength);
                set(&mut s.sector, a.sector);
                set(&mut s.solver, a.solver);
                set(&mut s.levels, a.levels);
                set(&mut s.tol, a.tol);
                set_grid(&mut s.grid, a.grid);
            }
            Cmd::Duality(a) => {
                cfg.command = Some(Command::Duality);
                let d = &mut cfg.duality;
                set(&mut d.c, a.c);
                set(&mut d.omega, a.omega);
                set(&mut d.levels, a.levels);
                set(&mut d.tol, a.tol);
            }
            Cmd::Converge(a) => {
                cfg.command = Some(Command::Converge);
                let c = &mut cfg.converge;
                set(&mut c.c, a.c);
                set(&mut c.omega, a.omega);
                set(&mut c.a_values, a.a_values);
                set_grid(&mut c.grid, a.grid);
            }
            Cmd::Fig1(a) => {
                cfg.command = Some(Command::Fig1);
                let f = &mut cfg.fig1;
                set(&mut f.omega, a.omega);
                set(&mut f.range, a.range);
                set(&mut f.depth, a.depth);
                set(&mut f.height, a.height);
                set(&mut f.x_max, a.x_max);
                set_grid(&mut f.grid, a.grid);
            }
            Cmd::Fig2(a) => {
                cfg.command = Some(Command::Fig2);
                let f = &mut cfg.fig2;
                set(&mut f.omega, a.omega);
                set(&mut f.a, a.a);
                set(&mut f.couplings, a.couplings);
                set(&mut f.x_max, a.x_max);
                set(&mut f.tol, a.tol);
                set_grid(&mut f.grid, a.grid);
            }
            Cmd::Bethe(a) => {
                cfg.command = Some(Command::Bethe);
                let b = &mut cfg.bethe;
                set(&mut b.particles, a.particles);
                set(&mut b.length, a.length);
                set(&mut b.v, a.v);
                set(&mut b.twist, a.twist);
                if a.hard_core {
                    b.hard_core = true;
                }
            }
            Cmd::DualNbody(a) => {
                cfg.command = Some(Command::DualNbody);
                let d = &mut cfg.dual_nbody;
                set(&mut d.particles, a.particles);
                set(&mut d.length, a.length);
                set(&mut d.c, a.c);
                set(&mut d.fermion_twist, a.fermion_twist);
            }
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> RunConfig {
        Cli::try_parse_from(args).unwrap().into_config().unwrap()
    }

    #[test]
    fn flags_override_defaults() {
        let cfg = parse(&["cduality", "duality", "--c", "0.5", "--omega", "2", "--levels", "4"]);
        assert_eq!(cfg.command, Some(Command::Duality));
        assert_eq!((cfg.duality.c, cfg.duality.omega, cfg.duality.levels), (0.5, 2.0, 4));
        let cfg = parse(&["cduality", "--format", "csv,text", "converge", "--a", "0.2,0.1", "--c", "-1"]);
        assert_eq!(cfg.formats, vec![Format::Csv, Format::Text]);
        assert_eq!(cfg.converge.a_values, vec![0.2, 0.1]);
        assert_eq!(cfg.converge.c, -1.0);
    }

    #[test]
    fn flags_override_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "command = \"bethe\"\n[bethe]\nparticles = 4\nlength = 7.0\n").unwrap();
        let p = path.to_str().unwrap();
        let cfg = parse(&["cduality", "--config", p]);
        assert_eq!(cfg.command, Some(Command::Bethe));
        assert_eq!((cfg.bethe.particles, cfg.bethe.length), (4, 7.0));
        let cfg = parse(&["cduality", "--config", p, "bethe", "--length", "9"]);
        assert_eq!((cfg.bethe.particles, cfg.bethe.length), (4, 9.0));
    }
}
