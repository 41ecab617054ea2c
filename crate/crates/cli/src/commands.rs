//! The four subcommands as pure functions from a configuration to a report.

use rayon::prelude::*;
use serde_json::{json, Value};
use tricritical::criticality::{self, CriticalApproach, Side};
use tricritical::ed::{self, EdConfig, N_MAX_STEP};
use tricritical::fluctuations::{self, EIGENVALUE_CLAMP, GAP_TOLERANCE};
use tricritical::meanfield::{self, TRICRITICAL_X, Z_TOLERANCE};
use tricritical::ModelParams;

use crate::config::{BoundaryConfig, EdRunConfig, Quantity, ScalingConfig, SweepConfig, Target};
use crate::error::CliResult;
use crate::output::{num, opt_num, Cell, Manifest, Report, Table, Tolerances};

pub const SWEEP_COLUMNS: [&str; 10] = ["x", "y", "lambda", "z", "f", "gap", "entropy", "gamma", "phase", "divergent"];
pub const BOUNDARY_COLUMNS: [&str; 4] = ["x", "y", "order", "z_jump"];
pub const SCALING_COLUMNS: [&str; 11] = [
    "n",
    "x",
    "y",
    "z",
    "det_over_lambda_sq",
    "gap",
    "entropy",
    "predicted_entropy",
    "relation_residual",
    "relation_residual_from_determinant",
    "divergent",
];
pub const ED_COLUMNS: [&str; 25] = [
    "atoms",
    "n_max",
    "dim",
    "ground_energy",
    "energy_per_atom",
    "gap",
    "gap_same_parity",
    "gap_opposite_parity",
    "excitation_gap",
    "ground_parity",
    "parity_expectation",
    "n_photon",
    "n_photon_per_atom",
    "b_expectation",
    "entropy",
    "truncation_converged",
    "energy_change",
    "limit_energy_per_atom",
    "limit_n_photon_per_atom",
    "limit_gap",
    "limit_entropy",
    "diff_energy_per_atom",
    "diff_n_photon_per_atom",
    "diff_gap",
    "diff_entropy",
];

fn base_tolerances() -> Tolerances {
    Tolerances::from([
        ("z_tolerance", Z_TOLERANCE),
        ("grid_intervals", meanfield::GRID_INTERVALS as f64),
        ("eigenvalue_clamp", EIGENVALUE_CLAMP),
        ("gap_tolerance", GAP_TOLERANCE),
    ])
}

pub fn sweep(cfg: &SweepConfig) -> CliResult<Report> {
    cfg.validate()?;
    let want = |q: Quantity| cfg.quantities.contains(&q);
    let fluct = want(Quantity::Gap) || want(Quantity::Entropy) || want(Quantity::Gamma);
    let xs = cfg.x.values();
    let ys = cfg.y.values();
    let points: Vec<(f64, f64)> = xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect();
    let blocks = points
        .par_iter()
        .map(|&(x, y)| -> CliResult<Vec<Vec<Cell>>> {
            let sol = meanfield::minimize(&ModelParams::new(x, y, 1.0)?)?;
            cfg.lambdas
                .iter()
                .map(|&lambda| {
                    let p = ModelParams::new(x, y, lambda)?;
                    let fl = if fluct { Some(fluctuations::analyze(&p, sol.z)?) } else { None };
                    let pick = |q: Quantity, v: Option<f64>| if want(q) { Cell::from(v) } else { Cell::Empty };
                    Ok(vec![
                        x.into(),
                        y.into(),
                        lambda.into(),
                        pick(Quantity::Z, Some(sol.z)),
                        pick(Quantity::F, Some(sol.energy)),
                        pick(Quantity::Gap, fl.map(|r| r.gap)),
                        pick(Quantity::Entropy, fl.map(|r| r.entropy)),
                        pick(Quantity::Gamma, fl.map(|r| r.gamma)),
                        if want(Quantity::Phase) { sol.phase.as_str().into() } else { Cell::Empty },
                        fl.map_or(Cell::Empty, |r| r.divergent.into()),
                    ])
                })
                .collect()
        })
        .collect::<CliResult<Vec<_>>>()?;
    let mut table = Table::new(&SWEEP_COLUMNS);
    blocks.into_iter().flatten().for_each(|row| table.push(row));
    Ok(Report { manifest: Manifest::new("sweep", cfg, base_tolerances())?, summary: None, table })
}

pub fn boundary(cfg: &BoundaryConfig) -> CliResult<Report> {
    cfg.validate()?;
    let mut xs = crate::config::Range { min: cfg.x_min, max: cfg.x_max, count: cfg.resolution }.values();
    if (cfg.x_min..=cfg.x_max).contains(&TRICRITICAL_X) && !xs.contains(&TRICRITICAL_X) {
        xs.push(TRICRITICAL_X);
        xs.sort_by(f64::total_cmp);
    }
    let points = xs.par_iter().map(|&x| meanfield::boundary_at(x)).collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(&BOUNDARY_COLUMNS);
    for b in points {
        table.push(vec![b.x_c.into(), b.y_c.into(), b.order.as_str().into(), b.z_jump.into()]);
    }
    Ok(Report { manifest: Manifest::new("boundary", cfg, base_tolerances())?, summary: None, table })
}

fn approach(cfg: &ScalingConfig, distances: Vec<f64>) -> CliResult<CriticalApproach> {
    let app = match &cfg.target {
        Target::X(x) => CriticalApproach::second_order(*x, cfg.side, distances)?,
        Target::Named(_) => CriticalApproach::tricritical(cfg.side, distances)?,
    };
    app.validate()?;
    Ok(app)
}

pub fn scaling(cfg: &ScalingConfig) -> CliResult<Report> {
    cfg.validate()?;
    let lambda = cfg.lambda;
    let app = approach(cfg, criticality::log_spaced(cfg.n_min, cfg.n_max, cfg.n_count))?;

    let order_parameter = if cfg.side == Side::Superradiant {
        let fit = criticality::order_parameter_scaling(&app)?;
        let expected = criticality::order_parameter_prefactor(&app)?;
        json!({
            "exponent": num(fit.exponent),
            "amplitude": num(fit.amplitude),
            "expected_amplitude": num(expected),
            "amplitude_relative_error": num((fit.amplitude - expected).abs() / expected),
            "r_squared": num(fit.r_squared),
        })
    } else {
        Value::Null
    };
    let det = criticality::determinant_scaling(&app, lambda)?;
    let gap = criticality::gap_scaling(&app, lambda)?;

    let mut table = Table::new(&SCALING_COLUMNS);
    for &n in &app.distances {
        let (x, y) = app.point(n);
        let z = meanfield::minimize(&ModelParams::new(x, y, lambda)?)?.z;
        let det_n = fluctuations::build_omega_squared(&ModelParams::new(x, y, lambda)?, z).det_over_lambda_sq;
        let rel = criticality::gap_entropy_relation(x, y, lambda)?;
        table.push(vec![
            n.into(),
            x.into(),
            y.into(),
            z.into(),
            det_n.into(),
            rel.gap.into(),
            rel.entropy.into(),
            rel.predicted.into(),
            rel.residual.into(),
            rel.residual_from_determinant.into(),
            rel.divergent.into(),
        ]);
    }

    let relation_app = approach(cfg, vec![cfg.relation_n])?;
    let (rx, ry) = relation_app.point(cfg.relation_n);
    let rel = criticality::gap_entropy_relation(rx, ry, lambda)?;
    let summary = json!({
        "target": {
            "x_c": num(app.target.x_c),
            "y_c": num(app.target.y_c),
            "order": app.target.order.as_str(),
        },
        "side": match cfg.side { Side::Superradiant => "superradiant", Side::Normal => "normal" },
        "lambda": num(lambda),
        "order_parameter": order_parameter,
        "determinant": {
            "exponent": num(det.fit.exponent),
            "amplitude": num(det.fit.amplitude),
            "beta": num(det.beta),
            "r_squared": num(det.fit.r_squared),
        },
        "gap": {
            "exponent": num(gap.exponent),
            "amplitude": num(gap.amplitude),
            "r_squared": num(gap.r_squared),
        },
        "relation": {
            "n": num(cfg.relation_n),
            "x": num(rx),
            "y": num(ry),
            "gap": num(rel.gap),
            "entropy": num(rel.entropy),
            "predicted": opt_num(rel.predicted),
            "residual": opt_num(rel.residual),
            "residual_from_determinant": opt_num(rel.residual_from_determinant),
            "divergent": rel.divergent,
        },
    });
    let mut tol = base_tolerances();
    tol.insert("min_distance", criticality::MIN_DISTANCE);
    tol.insert("relation_gap_floor", criticality::RELATION_GAP_FLOOR);
    Ok(Report { manifest: Manifest::new("scaling", cfg, tol)?, summary: Some(summary), table })
}

fn ed_params(cfg: &EdRunConfig) -> CliResult<(ModelParams, f64)> {
    match cfg.raw {
        Some(raw) => Ok((ModelParams::from_raw(raw)?, raw.epsilon.hypot(raw.delta))),
        None => Ok((
            ModelParams::new(cfg.x.unwrap_or(f64::NAN), cfg.y.unwrap_or(f64::NAN), cfg.lambda.unwrap_or(f64::NAN))?,
            cfg.omega0,
        )),
    }
}

pub fn ed(cfg: &EdRunConfig) -> CliResult<Report> {
    cfg.validate()?;
    let (params, omega0) = ed_params(cfg)?;
    let configs: Vec<EdConfig> = cfg
        .atoms
        .iter()
        .map(|&atoms| EdConfig {
            atoms,
            params,
            omega0,
            n_max: cfg.n_max,
            tolerance: cfg.tolerance,
            max_dim: cfg.max_dim,
            max_escalations: cfg.max_escalations,
            seed: cfg.seed,
        })
        .collect();
    // Every size must fit the budget before any diagonalization starts.
    for c in &configs {
        c.validate()?;
        let start = match c.n_max {
            Some(n) => n,
            None => c.default_n_max()?,
        };
        c.build(start + N_MAX_STEP)?;
    }
    let limit = ed::thermodynamic_limit(&params)?;
    let results = configs.par_iter().map(ed::ground_and_gap).collect::<Result<Vec<_>, _>>()?;

    let mut table = Table::new(&ED_COLUMNS);
    for r in &results {
        let e_atom = r.ground_energy / r.atoms as f64;
        table.push(vec![
            r.atoms.into(),
            r.n_max.into(),
            r.dim.into(),
            r.ground_energy.into(),
            e_atom.into(),
            r.gap.into(),
            r.gap_same_parity.into(),
            r.gap_opposite_parity.into(),
            r.excitation_gap.into(),
            Cell::Int(r.ground_parity as i64),
            r.parity_expectation.into(),
            r.n_photon.into(),
            r.n_photon_per_atom.into(),
            r.b_expectation.into(),
            r.entropy.into(),
            r.truncation_converged.into(),
            r.energy_change.into(),
            limit.energy_per_atom.into(),
            limit.n_photon_per_atom.into(),
            limit.gap.into(),
            limit.entropy.into(),
            (e_atom - limit.energy_per_atom).abs().into(),
            (r.n_photon_per_atom - limit.n_photon_per_atom).abs().into(),
            (r.excitation_gap - limit.gap).abs().into(),
            (r.entropy - limit.entropy).abs().into(),
        ]);
    }
    let summary = json!({
        "x": num(params.x),
        "y": num(params.y),
        "lambda": num(params.lambda),
        "omega0": num(omega0),
    });
    let mut tol = base_tolerances();
    tol.insert("truncation_tolerance", cfg.tolerance);
    tol.insert("dense_threshold", ed::DENSE_THRESHOLD as f64);
    Ok(Report { manifest: Manifest::new("ed", cfg, tol)?, summary: Some(summary), table })
}
