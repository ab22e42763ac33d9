//! Command implementations behind the `seawsn` binary.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use seawsn::propagation::{self, AcousticBoundary, LinkGeometry, MediumEM, Reflection};
use seawsn::radio_energy::{optimal_on_time, sweep_energy, write_sweep_csv, FigurePreset};
use seawsn::{ConfigFile, Error, RunOutcome};
use thiserror::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_IO: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INFEASIBLE: u8 = 3;

pub const BATCH_CSV_HEADER: &str = "seed,cycles,condition,power_ratio,alive_ratio,sink_ratio,initial_sinks";

#[derive(Debug, Parser)]
#[command(name = "seawsn", version, about = "Sea-water sensor network lifetime and energy models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run lifetime simulations and write history/outcome files.
    Simulate(SimulateArgs),
    /// Emit an energy-per-bit sweep as CSV.
    Sweep(SweepArgs),
    /// Print the path-loss breakdown of one underwater link.
    Pathloss(PathlossArgs),
    /// Find the on-time that minimises energy per bit.
    Optimize(OptimizeArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scenario document; the reference scenario when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Base seed, overriding `network.seed`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of runs, with seeds base, base+1, ...
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub repeat: u64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Built-in figure sweep (fig1..fig5).
    #[arg(long)]
    pub preset: Option<FigurePreset>,
    /// Parameter document; its `[sweep]` section is used without a preset.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PathlossArgs {
    /// Link distance in m.
    #[arg(long)]
    pub distance: f64,
    /// Carrier frequency in Hz.
    #[arg(long)]
    pub frequency: f64,
    /// Relative permittivity.
    #[arg(long, default_value_t = 81.0)]
    pub eps_r: f64,
    /// Relative loss term; derived from the conductivity when omitted.
    #[arg(long)]
    pub eps_imag: Option<f64>,
    /// Conductivity in S/m.
    #[arg(long, default_value_t = 4.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mu_r: f64,
    /// Depth below the reflecting surface in m.
    #[arg(long, default_value_t = 0.0)]
    pub depth: f64,
    /// Include the surface reflection term.
    #[arg(long)]
    pub reflection: bool,
    /// Phase of the reflection coefficient in rad (implies --reflection).
    #[arg(long)]
    pub phase: Option<f64>,
    #[arg(long, default_value_t = 1000.0)]
    pub rho1: f64,
    #[arg(long, default_value_t = 1500.0)]
    pub v1: f64,
    #[arg(long, default_value_t = 1.2)]
    pub rho2: f64,
    #[arg(long, default_value_t = 343.0)]
    pub v2: f64,
    /// Transmit power in dBm; prints the received power when given.
    #[arg(long)]
    pub pt_dbm: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub gt_db: f64,
    #[arg(long, default_value_t = 0.0)]
    pub gr_db: f64,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] Error),
    #[error("{0}")]
    Infeasible(String),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Model(_) => EXIT_USAGE,
            CliError::Infeasible(_) => EXIT_INFEASIBLE,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn load_config(path: Option<&Path>) -> CliResult<ConfigFile> {
    match path {
        Some(p) => Ok(ConfigFile::load(p)?),
        None => Ok(ConfigFile::default()),
    }
}

fn write_file(path: &Path, emit: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>) -> CliResult<()> {
    let io_err = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut out = BufWriter::new(File::create(path).map_err(io_err)?);
    emit(&mut out).map_err(io_err)?;
    out.flush().map_err(io_err)
}

fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })
}

/// Runs one command, writing human-readable output to `stdout`.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> CliResult<()> {
    let text = match cli.command {
        Command::Simulate(args) => simulate(&args)?,
        Command::Sweep(args) => sweep(&args)?,
        Command::Pathloss(args) => pathloss(&args)?,
        Command::Optimize(args) => optimize(&args)?,
    };
    stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

fn outcome_lines(o: &RunOutcome) -> String {
    let last = o.history.last().expect("a finished run has at least one cycle");
    let nodes = last.alive_sensors + last.dead_sensors;
    let mut s = String::new();
    let _ = writeln!(s, "seed {}: network dead after {} cycles", o.seed, o.cycles);
    let _ = writeln!(s, "condition: {}", o.condition);
    let _ = writeln!(
        s,
        "available power / total power: {:.0} / {:.0} = {:.1} %",
        last.total_energy,
        o.initial_energy,
        100.0 * o.power_ratio
    );
    let _ = writeln!(
        s,
        "alive sensors / total sensors: {} / {} = {:.1} %",
        last.alive_sensors,
        nodes,
        100.0 * o.alive_ratio
    );
    let _ = writeln!(
        s,
        "alive sinks / total sinks: {} / {} = {:.1} %",
        last.alive_sinks,
        o.initial_sinks,
        100.0 * o.sink_ratio
    );
    s
}

pub fn simulate(args: &SimulateArgs) -> CliResult<String> {
    let file = load_config(args.config.as_deref())?;
    let base = file.scenario()?;
    let base_seed = args.seed.unwrap_or(base.seed);
    ensure_dir(&args.out)?;

    let seeds: Vec<u64> = (0..args.repeat).map(|i| base_seed.wrapping_add(i)).collect();
    let outcomes = seeds
        .par_iter()
        .map(|&seed| seawsn::run(&seawsn::ScenarioConfig { seed, ..base }))
        .collect::<Result<Vec<_>, _>>()?;

    let mut text = String::new();
    for o in &outcomes {
        write_file(&args.out.join(format!("history_{}.csv", o.seed)), |w| o.write_history_csv(w))?;
        write_file(&args.out.join(format!("outcome_{}.json", o.seed)), |w| o.write_outcome_json(w))?;
        text.push_str(&outcome_lines(o));
    }
    write_file(&args.out.join("batch_summary.csv"), |w| {
        writeln!(w, "{BATCH_CSV_HEADER}")?;
        for o in &outcomes {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                o.seed, o.cycles, o.condition, o.power_ratio, o.alive_ratio, o.sink_ratio, o.initial_sinks
            )?;
        }
        Ok(())
    })?;
    Ok(text)
}

pub fn sweep(args: &SweepArgs) -> CliResult<String> {
    let file = load_config(args.config.as_deref())?;
    let base = file.energy_params()?;
    let fractions = &file.energy.on_fractions;

    let (name, rows) = match (args.preset, &file.sweep) {
        (Some(preset), _) => (preset.name().to_string(), sweep_energy(preset.axis(), &preset.grid(), fractions, &base)?),
        (None, Some(section)) => ("sweep".to_string(), sweep_energy(section.axis, &section.values, fractions, &base)?),
        (None, None) => {
            return Err(CliError::Usage(
                "sweep needs --preset (fig1, fig2, fig3, fig4, fig5) or a config with a [sweep] section".into(),
            ))
        }
    };

    ensure_dir(&args.out)?;
    let path = args.out.join(format!("{name}.csv"));
    write_file(&path, |w| write_sweep_csv(&rows, w))?;
    let feasible = rows.iter().filter(|r| r.is_feasible()).count();
    Ok(format!(
        "wrote {} rows ({} feasible) to {}\n",
        rows.len(),
        feasible,
        path.display()
    ))
}

pub fn pathloss(args: &PathlossArgs) -> CliResult<String> {
    let geometry = LinkGeometry {
        distance: args.distance,
        depth: args.depth,
        frequency: args.frequency,
    };
    let medium = MediumEM {
        eps_rel_real: args.eps_r,
        eps_rel_imag: args.eps_imag,
        conductivity: args.sigma,
        mu_rel: args.mu_r,
    };
    let surface = AcousticBoundary {
        rho1: args.rho1,
        v1: args.v1,
        rho2: args.rho2,
        v2: args.v2,
    };
    let reflection = match (args.reflection, args.phase) {
        (_, Some(phase)) => Reflection::OnWithPhase(phase),
        (true, None) => Reflection::On,
        (false, None) => Reflection::Off,
    };
    let b = propagation::total_path_loss(&geometry, &medium, &surface, reflection)?;

    let mut s = String::new();
    let _ = writeln!(s, "free_space_db: {}", b.l0_db);
    let _ = writeln!(s, "medium_transition_db: {}", b.lw_db);
    let _ = writeln!(s, "attenuation_db: {}", b.latt_db);
    let _ = writeln!(s, "reflection_db: {}", b.lref_db);
    let _ = writeln!(s, "total_db: {}", b.total_db);
    if let Some(pt) = args.pt_dbm {
        let pr = propagation::received_power(pt, args.gt_db, args.gr_db, b.total_db);
        let _ = writeln!(s, "received_dbm: {pr}");
    }
    Ok(s)
}

pub fn optimize(args: &OptimizeArgs) -> CliResult<String> {
    let file = load_config(args.config.as_deref())?;
    let base = file.energy_params()?;
    let best = match optimal_on_time(&base, &file.energy.on_fractions) {
        Ok(best) => best,
        Err(Error::NoFeasiblePoint { grid_len }) => {
            return Err(CliError::Infeasible(format!(
                "no on-fraction among {grid_len} grid points meets the peak-power caps \
                 (p_max_tx = {} W, p_max_rx = {} W)",
                base.p_max_t, base.p_max_r
            )))
        }
        Err(e) => return Err(e.into()),
    };
    let mut s = String::new();
    let _ = writeln!(s, "on_fraction: {}", best.on_fraction);
    let _ = writeln!(s, "t_on_s: {}", best.t_on);
    let _ = writeln!(s, "energy_per_bit_j: {:.9e}", best.energy_per_bit);
    let _ = writeln!(s, "p_t_w: {:.9e}", best.p_t);
    let _ = writeln!(s, "p_ont_w: {:.9e}", best.p_ont);
    let _ = writeln!(s, "p_onr_w: {:.9e}", best.p_onr);
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage(String::new()).exit_code(), EXIT_USAGE);
        assert_eq!(CliError::Model(Error::Config(String::new())).exit_code(), EXIT_USAGE);
        assert_eq!(CliError::Infeasible(String::new()).exit_code(), EXIT_INFEASIBLE);
    }

    #[test]
    fn pathloss_vacuum_prints_free_space_only() {
        let cli = Cli::try_parse_from([
            "seawsn", "pathloss", "--distance", "3", "--frequency", "2.4e9", "--eps-r", "1", "--sigma", "0",
            "--eps-imag", "0",
        ])
        .unwrap();
        let Command::Pathloss(args) = cli.command else { unreachable!() };
        let text = pathloss(&args).unwrap();
        assert!(text.contains("attenuation_db: 0\n"));
        let total: f64 = text
            .lines()
            .find_map(|l| l.strip_prefix("total_db: "))
            .unwrap()
            .parse()
            .unwrap();
        assert!((total - 49.594_433_150_508_74).abs() < 1e-9);
    }

    #[test]
    fn unknown_preset_lists_presets() {
        let err = Cli::try_parse_from(["seawsn", "sweep", "--preset", "fig9"]).unwrap_err();
        assert!(err.to_string().contains("fig1"));
    }

    #[test]
    fn repeat_must_be_positive() {
        assert!(Cli::try_parse_from(["seawsn", "simulate", "--repeat", "0"]).is_err());
    }
}
