//! Runs the `contact-duality` solvers from a configuration and writes CSV
//! tables, text summaries, SVG figures and a manifest.

pub mod args;
pub mod commands;
pub mod config;
pub mod figure;
pub mod output;

use std::path::PathBuf;

pub use config::{Command, ConfigError, Format, RunConfig};
pub use figure::{emit_svg, FigureBundle, FigureError};
pub use output::{Artifact, MANIFEST};

use output::{OutputSet, RESOLVED_CONFIG};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{context}: {source}")]
    Solver {
        context: String,
        source: contact_duality::Error,
    },
    #[error(transparent)]
    Figure(#[from] FigureError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug)]
pub struct RunOutcome {
    pub command: Command,
    pub artifacts: Vec<Artifact>,
    /// False when the command ran but its built-in check did not hold
    /// (duality report or figure-pair comparison).
    pub checks_passed: bool,
    pub summary: String,
}

/// Validates `config`, runs its command and writes the artifacts.
pub fn run(config: &RunConfig) -> Result<RunOutcome, RunError> {
    config.validate()?;
    let command = config.command()?;
    let stamp = config.hash();
    let mut out = OutputSet::create(&config.output_dir, stamp.clone())?;
    let csv = config.wants(Format::Csv);
    let svg = config.wants(Format::Svg);
    let text = config.wants(Format::Text);
    let mut checks_passed = true;

    let summary = match command {
        Command::Spectrum => {
            let r = commands::spectrum(&config.spectrum)?;
            if csv {
                out.write_with("levels.csv", |w| r.spectrum.write_levels_csv(w))?;
                for (i, l) in r.spectrum.levels.iter().enumerate() {
                    out.write(&format!("state_{i}.csv"), &commands::write_state(&l.state))?;
                }
            }
            if svg {
                out.write_svg("spectrum.svg", &commands::spectrum_figure(&r, &stamp))?;
            }
            commands::spectrum_text(&r)
        }
        Command::Duality => {
            let r = commands::duality(&config.duality)?;
            checks_passed = r.pass;
            if csv {
                out.write_with("duality.csv", |w| r.write_csv(w))?;
            }
            if svg {
                out.write_svg("duality.svg", &commands::duality_figure(&config.duality, &r, &stamp)?)?;
            }
            format!("{r}\n")
        }
        Command::Converge => {
            let t = commands::converge(&config.converge)?;
            if csv {
                out.write_with("converge.csv", |w| t.write_csv(w))?;
            }
            if svg {
                out.write_svg("converge.svg", &commands::converge_figure(&t, &stamp))?;
            }
            commands::converge_text(&t)
        }
        Command::Fig1 => {
            let f = commands::fig1(&config.fig1)?;
            let bundle = commands::fig1_figure(&f, &stamp);
            if csv {
                out.write("fig1.csv", bundle.to_csv().as_bytes())?;
            }
            if svg {
                out.write_svg("fig1.svg", &bundle)?;
            }
            commands::fig1_text(&f)
        }
        Command::Fig2 => {
            let f = commands::fig2(&config.fig2)?;
            checks_passed = f.pass();
            let bundle = commands::fig2_figure(&f, &stamp);
            if csv {
                out.write("fig2.csv", bundle.to_csv().as_bytes())?;
                out.write("fig2_comparison.csv", commands::fig2_csv(&f).as_bytes())?;
            }
            if svg {
                out.write_svg("fig2.svg", &bundle)?;
            }
            commands::fig2_text(&f)
        }
        Command::Bethe => {
            let s = commands::bethe(&config.bethe)?;
            if csv {
                out.write_with("bethe.csv", |w| s.write_csv(w))?;
            }
            commands::bethe_text(&config.bethe, &s)
        }
        Command::DualNbody => {
            let d = commands::dual_nbody(&config.dual_nbody)?;
            if csv {
                out.write("dual_nbody.csv", commands::dual_nbody_csv(&config.dual_nbody, &d).as_bytes())?;
            }
            commands::dual_nbody_text(&config.dual_nbody, &d)
        }
    };
    if text {
        out.write(&format!("{}.txt", command.name()), summary.as_bytes())?;
    }
    out.write(RESOLVED_CONFIG, config.to_toml().as_bytes())?;
    let artifacts = out.finish()?;
    Ok(RunOutcome {
        command,
        artifacts,
        checks_passed,
        summary,
    })
}
