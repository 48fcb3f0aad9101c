//! The five commands. Each returns a [`Table`] plus a count of rows whose
//! ground-state solve failed.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use faraday::{
    bond_energy, c_epsilon, classify_phase, correlations, correlations_with_transverse,
    d_epsilon, dimer_order, epsilon, ground_state_global, hubbard_to_spin, mean_effective_jz,
    probe_coefficients, random_product_state, string_order, witness_value, Boundary,
    CorrelationSet, GroundStateReport, HubbardParams, ModelParams, ProbeConfig, SolverOptions,
    StringConvention,
};
use rayon::prelude::*;

use crate::config::{Command, RunConfig};
use crate::error::CliError;
use crate::table::{Cell, Table};

type Solved = Result<Arc<GroundStateReport>, faraday::Error>;

/// Ground states keyed by `(θ, L, boundary)`; each key is solved at most once.
#[derive(Debug)]
pub struct SolveCache {
    options: SolverOptions,
    slots: Mutex<HashMap<(u64, usize, Boundary), Arc<OnceLock<Solved>>>>,
}

impl SolveCache {
    pub fn new(options: SolverOptions) -> Self {
        Self {
            options,
            slots: Mutex::new(HashMap::new()),
        }
    }

    pub fn ground(&self, p: &ModelParams) -> Solved {
        let key = (p.theta.to_bits(), p.length, p.boundary);
        let slot = self
            .slots
            .lock()
            .expect("cache lock")
            .entry(key)
            .or_default()
            .clone();
        slot.get_or_init(|| {
            log::info!("solving theta = {:.6}, L = {}", p.theta, p.length);
            ground_state_global(p, &self.options).map(Arc::new)
        })
        .clone()
    }
}

pub struct Outcome {
    pub table: Table,
    /// Rows whose ground state could not be computed.
    pub failures: usize,
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    let cache = SolveCache::new(cfg.solver_options());
    pool.install(|| match cfg.command {
        Command::Ground => run_ground(cfg, &cache),
        Command::ScanTheta => Ok(run_scan_theta(cfg, &cache)),
        Command::ProbeMap => Ok(run_probe_map(cfg, &cache)),
        Command::WitnessScan => run_witness_scan(cfg, &cache),
        Command::HubbardMap => Ok(run_hubbard_map(cfg)),
    })
}

fn model(cfg: &RunConfig, theta: f64) -> ModelParams {
    ModelParams {
        theta,
        j_scale: 1.0,
        length: cfg.length,
        boundary: cfg.boundary,
    }
}

fn solve_all(cfg: &RunConfig, cache: &SolveCache) -> Vec<Solved> {
    cfg.theta
        .par_iter()
        .map(|&theta| cache.ground(&model(cfg, theta)))
        .collect()
}

/// Sites `(L/4, L-1-L/4)`, the widest pair that keeps clear of the edges.
pub fn string_pair(length: usize) -> (usize, usize) {
    (length / 4, length - 1 - length / 4)
}

/// Bond at the chain centre, `⌊L/2⌋ − 1`.
pub fn centre_bond(length: usize) -> usize {
    length / 2 - 1
}

fn value_or_error(
    value: faraday::Result<f64>,
    errors: &mut Vec<String>,
    name: &str,
) -> Cell {
    match value {
        Ok(v) => Cell::Float(v),
        Err(e) => {
            errors.push(format!("{name}: {e}"));
            Cell::Float(f64::NAN)
        }
    }
}

fn error_cell(errors: &[String]) -> Cell {
    if errors.is_empty() {
        Cell::Empty
    } else {
        Cell::text(errors.join("; "))
    }
}

fn run_ground(cfg: &RunConfig, cache: &SolveCache) -> Result<Outcome, CliError> {
    let mut table = Table::new(&["theta", "quantity", "m", "n", "value"]);
    let l = cfg.length;
    for (theta, solved) in cfg.theta.iter().zip(solve_all(cfg, cache)) {
        let g = solved?;
        let c = correlations(&g.state)?;
        let mut row = |q: &str, m: Option<usize>, n: Option<usize>, v: Cell| {
            let idx = |i: Option<usize>| i.map_or(Cell::Empty, |i| Cell::Int(i as i64));
            table.push(vec![Cell::Float(*theta), Cell::text(q), idx(m), idx(n), v]);
        };
        row("energy", None, None, Cell::Float(g.energy));
        row("sector", None, None, Cell::Int(g.sector as i64));
        row("degeneracy", None, None, Cell::Int(g.degeneracy as i64));
        row("multiplet_extent", None, None, Cell::Int(g.multiplet_extent as i64));
        row("residual", None, None, Cell::Float(g.residual));
        row("gap_estimate", None, None, g.gap.into());
        for (m, s) in c.sz_mean.iter().enumerate() {
            row("sz_mean", Some(m), None, Cell::Float(*s));
        }
        // k = 0 probe on the most polarized multiplet member.
        let polarized = correlations(g.polarized_member())?;
        let uniform = probe_coefficients(&ProbeConfig::new(0.0, 0.0), l)?;
        row(
            "ferro_jz",
            None,
            None,
            Cell::Float(mean_effective_jz(&polarized.sz_mean, &uniform)?),
        );
        if l >= 3 {
            let i = centre_bond(l);
            row("dimer_order", Some(i), Some(i + 1), Cell::Float(dimer_order(&g.state, *theta, i)?));
        }
        for i in 0..l - 1 {
            row("bond_energy", Some(i), Some(i + 1), Cell::Float(bond_energy(&g.state, *theta, i)?));
        }
        let (m, n) = string_pair(l);
        if n >= m + 2 {
            let s = string_order(&g.state, m, n, StringConvention::Interior)?;
            row("string_order", Some(m), Some(n), Cell::Float(s));
        }
        for m in 0..l {
            for n in 0..l {
                row("g_z", Some(m), Some(n), Cell::Float(c.zz_connected[(m, n)]));
            }
        }
    }
    Ok(Outcome { table, failures: 0 })
}

fn run_scan_theta(cfg: &RunConfig, cache: &SolveCache) -> Outcome {
    let mut table = Table::new(&[
        "theta",
        "phase_label",
        "c_epsilon",
        "d_epsilon",
        "dimer_order",
        "string_order",
        "gap_estimate",
        "error",
    ]);
    let mut failures = 0;
    let l = cfg.length;
    for (&theta, solved) in cfg.theta.iter().zip(solve_all(cfg, cache)) {
        let label = classify_phase(theta).map_or(Cell::Empty, |p| Cell::text(p.as_str()));
        let g = match solved {
            Ok(g) => g,
            Err(e) => {
                failures += 1;
                let nan = || Cell::Float(f64::NAN);
                table.push(vec![
                    Cell::Float(theta),
                    label,
                    nan(),
                    nan(),
                    nan(),
                    nan(),
                    Cell::Empty,
                    Cell::text(e.to_string()),
                ]);
                continue;
            }
        };
        let mut errors = Vec::new();
        let (c_eps, d_eps) = match correlations(&g.state) {
            Ok(c) => (
                value_or_error(c_epsilon(&c, cfg.site_origin), &mut errors, "c_epsilon"),
                value_or_error(d_epsilon(&c, cfg.site_origin), &mut errors, "d_epsilon"),
            ),
            Err(e) => {
                errors.push(e.to_string());
                (Cell::Float(f64::NAN), Cell::Float(f64::NAN))
            }
        };
        let dimer = value_or_error(
            dimer_order(&g.state, theta, centre_bond(l).min(l.saturating_sub(3))),
            &mut errors,
            "dimer_order",
        );
        let (m, n) = string_pair(l);
        let string = value_or_error(
            string_order(&g.state, m, n, StringConvention::Interior),
            &mut errors,
            "string_order",
        );
        table.push(vec![
            Cell::Float(theta),
            label,
            c_eps,
            d_eps,
            dimer,
            string,
            g.gap.into(),
            error_cell(&errors),
        ]);
    }
    Outcome { table, failures }
}

fn run_probe_map(cfg: &RunConfig, cache: &SolveCache) -> Outcome {
    let mut table = Table::new(&[
        "theta",
        "kpd",
        "alpha",
        "epsilon",
        "mean_jz",
        "x_out_mean",
        "x_out_variance",
        "error",
    ]);
    let mut failures = 0;
    let template = cfg.probe_template();
    for (&theta, solved) in cfg.theta.iter().zip(solve_all(cfg, cache)) {
        let set = solved
            .and_then(|g| correlations(&g.state))
            .inspect_err(|_| failures += 1);
        let magnetization = set
            .as_ref()
            .ok()
            .and_then(|c| c.require_zero_magnetization(faraday::spectroscopy::MAGNETIZATION_TOL).err());
        for &kpd in &cfg.kpd_grid {
            for &alpha in &cfg.alpha_grid {
                let p = ProbeConfig {
                    kpd,
                    alpha,
                    ..template
                };
                let mut errors: Vec<String> = magnetization.iter().map(|e| e.to_string()).collect();
                let point = set.as_ref().map_err(Clone::clone).and_then(|c| epsilon(c, &p));
                let values = match point {
                    Ok(s) => [s.epsilon, s.mean_jz, s.x_out_mean, s.x_out_variance],
                    Err(e) => {
                        errors.push(e.to_string());
                        [f64::NAN; 4]
                    }
                };
                let mut row = vec![Cell::Float(theta), Cell::Float(kpd), Cell::Float(alpha)];
                row.extend(values.iter().map(|&v| Cell::Float(v)));
                row.push(error_cell(&errors));
                table.push(row);
            }
        }
    }
    Outcome { table, failures }
}

fn witness_rows(
    table: &mut Table,
    cfg: &RunConfig,
    theta: Cell,
    set: &Result<CorrelationSet, faraday::Error>,
) {
    let template = cfg.probe_template();
    for &kpd in &cfg.kpd_grid {
        for &alpha in &cfg.alpha_grid {
            let p = ProbeConfig {
                kpd,
                alpha,
                ..template
            };
            let report = set.as_ref().map_err(Clone::clone).and_then(|c| witness_value(c, &p, 1.0));
            let mut row = vec![theta.clone(), Cell::Float(kpd), Cell::Float(alpha)];
            match report {
                Ok(r) => row.extend([
                    Cell::Float(r.v_value),
                    Cell::Float(r.bound),
                    Cell::Float(r.w_value),
                    Cell::Bool(r.detected),
                    Cell::Empty,
                ]),
                Err(e) => row.extend([
                    Cell::Float(f64::NAN),
                    Cell::Float(f64::NAN),
                    Cell::Float(f64::NAN),
                    Cell::Bool(false),
                    Cell::text(e.to_string()),
                ]),
            }
            table.push(row);
        }
    }
}

fn run_witness_scan(cfg: &RunConfig, cache: &SolveCache) -> Result<Outcome, CliError> {
    let mut table = Table::new(&[
        "theta", "kpd", "alpha", "v_value", "bound", "w_value", "detected", "error",
    ]);
    if cfg.product_state {
        // One block for the sampled product state; it has no θ.
        let set = random_product_state(cfg.length, cfg.seed)?.correlations();
        witness_rows(&mut table, cfg, Cell::Empty, &set);
        return Ok(Outcome { table, failures: 0 });
    }
    let mut failures = 0;
    for (&theta, solved) in cfg.theta.iter().zip(solve_all(cfg, cache)) {
        let set = solved
            .and_then(|g| correlations_with_transverse(&g.state))
            .inspect_err(|_| failures += 1);
        witness_rows(&mut table, cfg, Cell::Float(theta), &set);
    }
    Ok(Outcome { table, failures })
}

fn run_hubbard_map(cfg: &RunConfig) -> Outcome {
    let mut table = Table::new(&["u0", "u2", "t_hop", "theta", "j_scale", "phase_label", "error"]);
    for &u0 in &cfg.u0 {
        for &u2 in &cfg.u2 {
            let mapped = HubbardParams::new(u0, u2, cfg.t_hop).and_then(|h| hubbard_to_spin(&h));
            let mut row = vec![Cell::Float(u0), Cell::Float(u2), Cell::Float(cfg.t_hop)];
            match mapped.and_then(|(theta, j)| Ok((theta, j, classify_phase(theta)?))) {
                Ok((theta, j, label)) => row.extend([
                    Cell::Float(theta),
                    Cell::Float(j),
                    Cell::text(label.as_str()),
                    Cell::Empty,
                ]),
                Err(e) => row.extend([
                    Cell::Float(f64::NAN),
                    Cell::Float(f64::NAN),
                    Cell::Empty,
                    Cell::text(e.to_string()),
                ]),
            }
            table.push(row);
        }
    }
    Outcome { table, failures: 0 }
}
