//! Command-line interface: one subcommand per pipeline stage, reproducible
//! file outputs plus a run manifest.
//!
//! Exit codes: 0 success, 1 configuration/usage error, 2 numerical failure.

use crate::config::{parse_quantity, Config, ConfigError};
use crate::electrostatics::{effective_wire_length, equipotential_polylines, solve_potential};
use crate::emt::conduction_states;
use crate::geometry::Confinement;
use crate::optics::OpticalCoupling;
use crate::phonons::{AngularGrid, SurfaceCutoffs};
use crate::rates::{decoherence_budget, RateInputs};
use crate::spinorbit::{
    combined_hamiltonian, random_hermitian, sz_commutator_norm, EffectiveSoHamiltonian,
    DEFAULT_DELTA_E, DEFAULT_LAMBDA_PAR_1, ORBITAL_DIM,
};
use crate::stirap::{evolve, transport_time, IntegratorTol, PulseSchedule};
use crate::sweep::{build_map, check_hierarchy, find_optimum, map_to_csv, map_to_matrix};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("numerical failure: {0}")]
    Numeric(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Numeric(_) => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "stirap-wire", version, about = "Feasibility analysis of pulsed electron transport between NV centers in diamond nanowires")]
struct Cli {
    /// TOML configuration file; omitted keys use built-in defaults
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (created if missing)
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Seed for every stochastic element
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Worker-thread cap; defaults to the available parallelism
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Tabular output format where both are meaningful
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Wire width override, e.g. `0.2um`
    #[arg(long, global = true)]
    w: Option<String>,
    /// Wire length override
    #[arg(long = "L", global = true)]
    l: Option<String>,
    /// NV separation override
    #[arg(long, global = true)]
    s: Option<String>,
    /// Temperature override, e.g. `4K`
    #[arg(long = "T", global = true)]
    temperature: Option<String>,
    /// Confinement design override: `surface` or `electrostatic`
    #[arg(long, global = true)]
    design: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Conduction level table as CSV (energies in µeV)
    Band {
        /// Largest envelope index per direction
        #[arg(long, default_value_t = 3)]
        nmax: u32,
    },
    /// Envelope amplitude, dipole moment, Rabi frequency, emission rate
    Rabi,
    /// Full decoherence budget for the configured wire
    Rates {
        /// Also dump the top-k electron-phonon channels
        #[arg(long)]
        channels: Option<usize>,
    },
    /// Integrate the pulsed master equation
    Stirap,
    /// Feasibility map over (w, L)
    Sweep {
        /// Additionally emit the ratio matrix in gnuplot layout
        #[arg(long)]
        matrix: bool,
    },
    /// Solve the electrode potential
    Electrostatics {
        /// Equipotential levels to extract (V)
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 0.1])]
        levels: Vec<f64>,
    },
    /// Verify axial spin-projection conservation on a seeded random instance
    SpinCheck,
}

/// Run manifest written next to every output set.
#[derive(Debug, Serialize)]
struct RunManifest {
    config_sha256: String,
    tool_version: &'static str,
    timestamp_unix: u64,
    subcommand: String,
    seed: u64,
    outputs: Vec<String>,
}

struct OutputDir {
    dir: PathBuf,
    written: Vec<String>,
}

impl OutputDir {
    fn create(dir: &Path) -> Result<OutputDir, CliError> {
        std::fs::create_dir_all(dir)?;
        Ok(OutputDir { dir: dir.to_path_buf(), written: Vec::new() })
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        std::fs::write(self.dir.join(name), contents)?;
        self.written.push(name.to_string());
        Ok(())
    }

    fn finish(self, config: &Config, subcommand: &str, seed: u64) -> Result<(), CliError> {
        let canonical = config.to_toml_string()?;
        let manifest = RunManifest {
            config_sha256: hex_digest(&canonical),
            tool_version: env!("CARGO_PKG_VERSION"),
            timestamp_unix: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            subcommand: subcommand.to_string(),
            seed,
            outputs: self.written.clone(),
        };
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serialization");
        std::fs::write(self.dir.join("run_manifest.json"), text)?;
        Ok(())
    }
}

fn hex_digest(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            if code == 0 {
                print!("{err}");
            } else {
                eprint!("{err}");
            }
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(err) => {
            log::error!("{err}");
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

pub fn main() -> i32 {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    main_with_args(std::env::args_os())
}

fn load_config(cli: &Cli) -> Result<Config, CliError> {
    let mut config = match &cli.config {
        Some(path) => Config::from_file(path)?,
        None => Config::default(),
    };
    if let Some(w) = &cli.w {
        config.geometry.w = parse_quantity(w)?;
    }
    if let Some(l) = &cli.l {
        config.geometry.l = parse_quantity(l)?;
    }
    if let Some(s) = &cli.s {
        config.geometry.s = parse_quantity(s)?;
    }
    if let Some(t) = &cli.temperature {
        config.environment.temperature = parse_quantity(t)?;
    }
    if let Some(design) = &cli.design {
        config.geometry.design = match design.to_ascii_lowercase().as_str() {
            "surface" => Confinement::Surface,
            "electrostatic" => Confinement::Electrostatic,
            other => return Err(CliError::Usage(format!("unknown design `{other}`"))),
        };
    }
    config.validate()?;
    Ok(config)
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(threads) = cli.threads {
        // a pool may already exist when called twice in-process; that's fine
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let config = load_config(&cli)?;
    let mut out = OutputDir::create(&cli.out)?;
    let (name, result): (&str, Result<(), CliError>) = match &cli.command {
        Command::Band { nmax } => ("band", cmd_band(&config, *nmax, cli.format, &mut out)),
        Command::Rabi => ("rabi", cmd_rabi(&config, cli.format, &mut out)),
        Command::Rates { channels } => ("rates", cmd_rates(&config, *channels, cli.format, &mut out)),
        Command::Stirap => ("stirap", cmd_stirap(&config, &mut out)),
        Command::Sweep { matrix } => ("sweep", cmd_sweep(&config, *matrix, &mut out)),
        Command::Electrostatics { levels } => ("electrostatics", cmd_electrostatics(&config, levels, &mut out)),
        Command::SpinCheck => ("spin-check", cmd_spin_check(cli.seed, &mut out)),
    };
    result?;
    out.finish(&config, name, cli.seed)
}

fn cmd_band(
    config: &Config,
    nmax: u32,
    format: OutputFormat,
    out: &mut OutputDir,
) -> Result<(), CliError> {
    let states = conduction_states(&config.geometry, &config.constants, nmax)
        .map_err(CliError::Usage)?;
    let ev = config.constants.e_charge;
    match format {
        OutputFormat::Csv => {
            let mut csv = String::from("n_x,n_y,n_z,group,symmetry,energy_ueV\n");
            for st in &states {
                csv.push_str(&format!(
                    "{},{},{},{:?},{},{:e}\n",
                    st.n[0],
                    st.n[1],
                    st.n[2],
                    st.valley_group,
                    st.symmetry,
                    st.energy / ev * 1e6
                ));
            }
            out.write("band.csv", &csv)
        }
        OutputFormat::Json => {
            out.write("band.json", &serde_json::to_string_pretty(&states).unwrap())
        }
    }
}

fn cmd_rabi(config: &Config, format: OutputFormat, out: &mut OutputDir) -> Result<(), CliError> {
    let coupling = OpticalCoupling::compute(
        &config.geometry,
        &config.laser,
        &config.constants,
        config.omega_transition(),
    );
    match format {
        OutputFormat::Csv => {
            let g = &config.geometry;
            let mut csv = String::from("w_m,L_m,s_m,F0,d_wire_Cm,omega_rad_s,gamma_se\n");
            csv.push_str(&format!(
                "{:e},{:e},{:e},{:e},{:e},{:e},{:e}\n",
                g.w, g.l, g.s, coupling.f0, coupling.d_wire, coupling.omega, coupling.gamma_se
            ));
            out.write("rabi.csv", &csv)
        }
        OutputFormat::Json => {
            out.write("rabi.json", &serde_json::to_string_pretty(&coupling).unwrap())
        }
    }
}

fn rate_inputs<'a>(
    config: &'a Config,
    cutoffs: &'a SurfaceCutoffs,
    grid: &'a AngularGrid,
) -> RateInputs<'a> {
    RateInputs {
        env: &config.environment,
        laser: &config.laser,
        constants: &config.constants,
        mass_mean: config.mass_mean,
        omega_transition: config.omega_transition(),
        surface_cutoffs: cutoffs,
        angular_grid: grid,
    }
}

fn cmd_rates(
    config: &Config,
    top_channels: Option<usize>,
    format: OutputFormat,
    out: &mut OutputDir,
) -> Result<(), CliError> {
    let cutoffs = SurfaceCutoffs::default();
    let grid = AngularGrid::default();
    let inputs = rate_inputs(config, &cutoffs, &grid);
    let (budget, channels) = decoherence_budget(&config.geometry, &inputs)
        .map_err(|e| CliError::Numeric(e.to_string()))?;
    let g = &config.geometry;
    match format {
        OutputFormat::Csv => {
            let mut csv = String::from("design,w_m,L_m,gamma_ep,gamma_cap,gamma_se,gamma_total\n");
            csv.push_str(&format!(
                "{},{:e},{:e},{:e},{:e},{:e},{:e}\n",
                g.design, g.w, g.l, budget.gamma_ep, budget.gamma_cap, budget.gamma_se, budget.total()
            ));
            out.write("rates.csv", &csv)?;
        }
        OutputFormat::Json => {
            out.write("rates.json", &serde_json::to_string_pretty(&budget).unwrap())?;
        }
    }
    if let Some(k) = top_channels {
        let mut csv = String::from("n_x,n_y,n_z,m_x,m_y,m_z,overlap_sq,rate_contribution\n");
        for ch in channels.iter().take(k) {
            csv.push_str(&format!(
                "{},{},{},{},{},{},{:e},{:e}\n",
                ch.n_final[0], ch.n_final[1], ch.n_final[2], ch.m[0], ch.m[1], ch.m[2],
                ch.overlap_sq, ch.rate_contribution
            ));
        }
        out.write("channels.csv", &csv)?;
    }
    Ok(())
}

fn cmd_stirap(config: &Config, out: &mut OutputDir) -> Result<(), CliError> {
    let cutoffs = SurfaceCutoffs::default();
    let grid = AngularGrid::default();
    let inputs = rate_inputs(config, &cutoffs, &grid);
    let omega = match config.pulses.omega0 {
        Some(value) => value,
        None => crate::optics::rabi_effective(&config.geometry, &config.laser, &config.constants),
    };
    let gamma = match config.pulses.gamma_override {
        Some(value) => value,
        None => decoherence_budget(&config.geometry, &inputs)
            .map_err(|e| CliError::Numeric(e.to_string()))?
            .0
            .total(),
    };
    let t_delay = config.pulses.t_delay.unwrap_or(config.pulses.adiabaticity / omega);
    let sigma_t = config.pulses.sigma_t.unwrap_or(t_delay / config.pulses.delay_to_sigma);
    let mut schedule = PulseSchedule::counter_intuitive(omega, sigma_t, t_delay);
    schedule.detuning_single = config.laser.detuning;
    schedule.detuning_two_photon = config.pulses.detuning_two_photon;
    if schedule.adiabaticity() < 1.0 {
        log::warn!(
            "adiabaticity Ωτ = {:.3} < 1: transfer will be diabatic",
            schedule.adiabaticity()
        );
    }
    let result = evolve(&schedule, gamma, config.pulses.loss_split, &IntegratorTol::default())
        .map_err(|e| CliError::Numeric(e.to_string()))?;

    let mut csv = String::from("t_s,p1,p2,p3,p_lost\n");
    for sample in &result.populations {
        csv.push_str(&format!(
            "{:e},{:e},{:e},{:e},{:e}\n",
            sample.t, sample.p1, sample.p2, sample.p3, sample.p_lost
        ));
    }
    out.write("populations.csv", &csv)?;

    #[derive(Serialize)]
    struct Summary {
        fidelity: f64,
        max_p2: f64,
        adiabaticity: f64,
        transport_time_s: f64,
        omega_rad_s: f64,
        gamma_total: f64,
        trace_error: f64,
    }
    let summary = Summary {
        fidelity: result.fidelity,
        max_p2: result.max_p2,
        adiabaticity: result.adiabaticity,
        transport_time_s: transport_time(&schedule),
        omega_rad_s: omega,
        gamma_total: gamma,
        trace_error: result.trace_error,
    };
    out.write("stirap_summary.json", &serde_json::to_string_pretty(&summary).unwrap())
}

fn cmd_sweep(config: &Config, matrix: bool, out: &mut OutputDir) -> Result<(), CliError> {
    let design = config.sweep.design.unwrap_or(config.geometry.design);
    let map = build_map(design, config);
    out.write(&format!("sweep_{design}.csv"), &map_to_csv(&map))?;
    let hierarchy = check_hierarchy(&map, 1e3);
    out.write("hierarchy.json", &serde_json::to_string_pretty(&hierarchy).unwrap())?;
    match find_optimum(&map) {
        Ok(report) => {
            out.write("optimum.json", &serde_json::to_string_pretty(&report).unwrap())?;
        }
        Err(err) => return Err(CliError::Numeric(err)),
    }
    if matrix {
        out.write("ratio_matrix.dat", &map_to_matrix(&map))?;
    }
    Ok(())
}

fn cmd_electrostatics(
    config: &Config,
    levels: &[f64],
    out: &mut OutputDir,
) -> Result<(), CliError> {
    let es = &config.electrostatics;
    let field = solve_potential(&es.setup, es.tol, es.max_iter)
        .map_err(|e| CliError::Numeric(e.to_string()))?;
    let mut csv = String::from("r_m,z_m,phi_V\n");
    for j in 0..=field.n_z {
        let z = j as f64 * field.dz - field.depth;
        for i in 0..=field.n_r {
            csv.push_str(&format!("{:e},{:e},{:e}\n", field.r(i), z, field.at(i, j)));
        }
    }
    out.write("potential.csv", &csv)?;

    let mut contour_csv = String::from("level_V,polyline,r_m,z_m\n");
    for (level, lines) in equipotential_polylines(&field, levels) {
        for (poly_id, line) in lines.iter().enumerate() {
            for (r, depth) in line {
                contour_csv.push_str(&format!("{:e},{},{:e},{:e}\n", level, poly_id, r, -depth));
            }
        }
    }
    out.write("equipotentials.csv", &contour_csv)?;

    let length = effective_wire_length(&field, es.fraction)
        .map_err(|e| CliError::Numeric(e.to_string()))?;
    #[derive(Serialize)]
    struct Summary {
        residual_v: f64,
        effective_wire_length_m: f64,
        fraction: f64,
    }
    let summary =
        Summary { residual_v: field.residual, effective_wire_length_m: length, fraction: es.fraction };
    out.write("electrostatics_summary.json", &serde_json::to_string_pretty(&summary).unwrap())
}

fn cmd_spin_check(seed: u64, out: &mut OutputDir) -> Result<(), CliError> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let l_ops = [
        random_hermitian(ORBITAL_DIM, &mut rng),
        random_hermitian(ORBITAL_DIM, &mut rng),
        random_hermitian(ORBITAL_DIM, &mut rng),
    ];
    let model = EffectiveSoHamiltonian {
        orbital_dim: ORBITAL_DIM,
        l_ops,
        delta_e: DEFAULT_DELTA_E,
        lambda_par_1: DEFAULT_LAMBDA_PAR_1,
    };
    let h = combined_hamiltonian(&model).map_err(CliError::Numeric)?;
    let norm = sz_commutator_norm(&h);
    let pass = norm < 1e-12;
    println!("axial spin commutator norm (seed {seed}): {norm:.3e} — {}", if pass { "conserved" } else { "NOT conserved" });
    #[derive(Serialize)]
    struct Check {
        seed: u64,
        commutator_norm: f64,
        pass: bool,
    }
    out.write(
        "spin_check.json",
        &serde_json::to_string_pretty(&Check { seed, commutator_norm: norm, pass }).unwrap(),
    )
}
