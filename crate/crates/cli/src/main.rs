use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use faraday_cli::{emit, parse_config_file, run, CliError, Command, RunConfig, Settings};

/// Ground states and polarization-spectroscopy signals of the spin-1
/// bilinear-biquadratic chain.
///
/// Numbers accept a `pi` factor (`0.3pi`, `-pi/2`); grids are comma lists of
/// values and inclusive ranges `start:stop:count`.
#[derive(Parser, Debug)]
#[command(name = "faraday", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Solve one or more chains and report energies, order parameters and G_z.
    Ground(Flags),
    /// C_ε, D_ε, dimer and string order across a θ grid.
    ScanTheta(Flags),
    /// ε(k, α) over kpd and alpha grids for each θ.
    ProbeMap(Flags),
    /// Entanglement witness W(k) for each θ, or for a random product state.
    WitnessScan(Flags),
    /// Map Bose-Hubbard couplings (U0, U2, t) to (θ, J).
    HubbardMap(Flags),
}

#[derive(Args, Debug)]
struct Flags {
    /// Angle grid
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    #[arg(long)]
    length: Option<String>,
    /// open | periodic
    #[arg(long)]
    boundary: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    kpd_grid: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha_grid: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<String>,
    /// Gaussian Wannier width σ/d
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<String>,
    /// Position of the first site in lattice units
    #[arg(long, allow_hyphen_values = true)]
    site_origin: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    input_variance: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    u0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    u2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    t_hop: Option<String>,
    #[arg(long)]
    max_iterations: Option<String>,
    #[arg(long)]
    tolerance: Option<String>,
    /// Output file; stdout when absent
    #[arg(long)]
    output: Option<String>,
    /// csv | json
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Worker threads; 0 uses every core
    #[arg(long, env = "FARADAY_THREADS")]
    threads: Option<String>,
    /// Evaluate the witness on a random product state drawn from --seed
    #[arg(long)]
    product_state: bool,
    /// Config file with [model], [probe], [hubbard], [solver] and [run] sections
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Flags {
    fn settings(&self) -> Settings {
        let pairs = [
            ("theta", &self.theta),
            ("length", &self.length),
            ("boundary", &self.boundary),
            ("kpd-grid", &self.kpd_grid),
            ("alpha-grid", &self.alpha_grid),
            ("kappa", &self.kappa),
            ("sigma", &self.sigma),
            ("site-origin", &self.site_origin),
            ("input-variance", &self.input_variance),
            ("u0", &self.u0),
            ("u2", &self.u2),
            ("t-hop", &self.t_hop),
            ("max-iterations", &self.max_iterations),
            ("tolerance", &self.tolerance),
            ("output", &self.output),
            ("format", &self.format),
            ("seed", &self.seed),
            ("threads", &self.threads),
        ];
        let mut out: Settings = pairs
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect();
        if self.product_state {
            out.insert("product-state".into(), "true".into());
        }
        out
    }
}

fn execute(cli: Cli) -> Result<usize, CliError> {
    let (command, flags) = match cli.command {
        Sub::Ground(f) => (Command::Ground, f),
        Sub::ScanTheta(f) => (Command::ScanTheta, f),
        Sub::ProbeMap(f) => (Command::ProbeMap, f),
        Sub::WitnessScan(f) => (Command::WitnessScan, f),
        Sub::HubbardMap(f) => (Command::HubbardMap, f),
    };
    let file = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Config(format!("--config: cannot read {}: {e}", path.display()))
            })?;
            parse_config_file(&text)?
        }
        None => Settings::new(),
    };
    let cfg = RunConfig::resolve(command, &flags.settings(), &file)?;
    let outcome = run(&cfg)?;
    emit(&cfg, &outcome.table)?;
    Ok(outcome.failures)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(n) => {
            eprintln!("error: {n} ground-state solve(s) failed; see the error column");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
