//! Command dispatch: a resolved config in, a result table (and plot) out.

use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use ditsim_core::repeater::{
    basis_levels, bell_measurement, entanglement_generation, false_even_sweep, parity_probe, tradeoff_for, BellLabel,
    DensityMatrix, DetectionEvent, IdealNode, Node, TwoDipoleState, BASIS_LABELS,
};
use ditsim_core::spectra::{parameter_sweep_with, transmission_spectrum_with, DetuningGrid};
use ditsim_core::{
    diagnostics_with_safety, weak_excitation_check, Axis, Execution, ProbeDetuning, DEFAULT_BUDGET_TOLERANCE, THZ,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{CommandSpec, RunConfig, SweepMetric};
use crate::error::CliError;
use crate::plot::LinePlot;
use crate::table::{Cell, ResultTable};

/// What a command produced before anything is written.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub table: ResultTable,
    pub plot: Option<LinePlot>,
    /// Rows that failed; the table is still written, then the run reports
    /// this as a numerical error.
    pub row_errors: Vec<String>,
}

/// Files written by [`run`].
#[derive(Debug, Clone)]
pub struct Written {
    pub data: PathBuf,
    pub plot: Option<PathBuf>,
}

pub fn execute(config: &RunConfig) -> Result<Outcome, CliError> {
    let mut outcome = match &config.spec {
        CommandSpec::Spectrum {
            grid_start,
            grid_stop,
            grid_count,
        } => spectrum(config, *grid_start, *grid_stop, *grid_count)?,
        CommandSpec::Sweep { values, metric, .. } => sweep(config, values, *metric)?,
        CommandSpec::Entangle { mean_photons } => entangle(config, *mean_photons)?,
        CommandSpec::Parity { mean_photons, state } => parity(config, *mean_photons, state)?,
        CommandSpec::Bell { mean_photons, samples } => bell(config, *mean_photons, *samples)?,
        CommandSpec::Tradeoff {
            mean_photons_grid,
            state,
        } => tradeoff(config, mean_photons_grid, state)?,
        CommandSpec::Diagnostics {
            input_flux,
            flux_safety,
        } => diagnostics(config, *input_flux, *flux_safety)?,
    };
    let meta = &mut outcome.table.metadata;
    meta.insert("command".into(), json!(config.command.name()));
    meta.insert("config".into(), serde_json::to_value(config).unwrap_or(Value::Null));
    meta.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    meta.insert("units".into(), json!("rates and detunings in THz (1 THz = 1e12 rad/s)"));
    let now = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    meta.insert("timestamp_unix".into(), json!(now));
    Ok(outcome)
}

/// Executes and writes `<out>/<name>.<ext>` (plus `<name>.svg` with
/// `plot`). Row failures still produce the file before erroring.
pub fn run(config: &RunConfig) -> Result<Written, CliError> {
    let outcome = execute(config)?;
    std::fs::create_dir_all(&config.out).map_err(|e| CliError::io(format!("creating {}", config.out.display()), e))?;
    let data = config
        .out
        .join(format!("{}.{}", config.name, config.format.extension()));
    outcome.table.write(&data, config.format)?;
    let plot = match (&outcome.plot, config.plot) {
        (Some(p), true) => {
            let path = config.out.join(format!("{}.svg", config.name));
            std::fs::write(&path, p.to_svg()).map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
            Some(path)
        }
        _ => None,
    };
    if !outcome.row_errors.is_empty() {
        return Err(CliError::Numerical(format!(
            "{} of {} rows failed (see `error` column in {}):\n  {}",
            outcome.row_errors.len(),
            outcome.table.rows.len(),
            data.display(),
            outcome.row_errors.join("\n  ")
        )));
    }
    Ok(Written { data, plot })
}

fn probe(config: &RunConfig) -> Result<ProbeDetuning, CliError> {
    Ok(ProbeDetuning::new(config.probe_detuning * THZ)?)
}

fn nodes(config: &RunConfig) -> (Box<dyn Node>, Box<dyn Node>) {
    if config.ideal {
        (Box::new(IdealNode), Box::new(IdealNode))
    } else {
        (Box::new(config.params()), Box::new(config.params_b()))
    }
}

fn named_state(name: &str) -> Result<TwoDipoleState, CliError> {
    if let Some(label) = BellLabel::from_name(name) {
        return Ok(TwoDipoleState::bell(label));
    }
    BASIS_LABELS
        .iter()
        .position(|&l| l == name)
        .map(|i| {
            let (a, b) = basis_levels(i);
            TwoDipoleState::basis(a, b)
        })
        .ok_or_else(|| CliError::Validation(vec![format!("unknown state `{name}`")]))
}

fn outcome(table: ResultTable, plot: Option<LinePlot>) -> Outcome {
    Outcome {
        table,
        plot,
        row_errors: Vec::new(),
    }
}

fn spectrum(config: &RunConfig, start: f64, stop: f64, count: usize) -> Result<Outcome, CliError> {
    let params = config.params();
    let grid = DetuningGrid::new(start * THZ, stop * THZ, count)?;
    let series = transmission_spectrum_with(&params, &grid, Execution::default())?;
    let mut table = ResultTable::new(["delta_omega_THz", "through", "drop"]);
    let mut through = Vec::with_capacity(count);
    let mut drop = Vec::with_capacity(count);
    for (i, x) in grid.values().enumerate() {
        let x = x / THZ;
        table.push(vec![
            Cell::num(x),
            Cell::num(series.through[i]),
            Cell::num(series.drop[i]),
        ]);
        through.push((x, series.through[i]));
        drop.push((x, series.drop[i]));
    }
    let mut plot = LinePlot::new("Transmission spectrum", "probe detuning (THz)", "probability");
    plot.add("through", through);
    plot.add("drop", drop);
    Ok(outcome(table, Some(plot)))
}

fn sweep(config: &RunConfig, values: &[f64], metric: SweepMetric) -> Result<Outcome, CliError> {
    let axis: Axis = config
        .axis()
        .ok_or_else(|| CliError::Validation(vec!["sweep needs a valid `axis`".into()]))?;
    let probe = probe(config)?;
    let base = config.params();
    let rad: Vec<f64> = values.iter().map(|v| v * THZ).collect();
    let mut row_errors = Vec::new();
    let x_label = format!("{} (THz)", axis.name());

    match metric {
        SweepMetric::Budget => {
            let cols = ["through", "drop", "cavity_loss", "dipole_loss", "total"];
            let mut table = ResultTable::new(["value_THz"].into_iter().chain(cols).chain(["error"]));
            let mut lines: Vec<Vec<(f64, f64)>> = vec![Vec::new(); cols.len()];
            for (i, row) in parameter_sweep_with(&base, axis, &rad, probe, Execution::default())
                .into_iter()
                .enumerate()
            {
                let x = values[i];
                match row.budget {
                    Ok(b) => {
                        if !b.is_conserved(DEFAULT_BUDGET_TOLERANCE) {
                            return Err(CliError::Numerical(format!(
                                "flux not conserved at {} = {x} THz: total = {:.16e}",
                                axis.name(),
                                b.total
                            )));
                        }
                        let nums = [b.through, b.drop, b.cavity_loss, b.dipole_loss, b.total];
                        let mut cells = vec![Cell::num(x)];
                        for (k, v) in nums.iter().enumerate() {
                            cells.push(Cell::num(*v));
                            lines[k].push((x, *v));
                        }
                        cells.push(Cell::Missing);
                        table.push(cells);
                    }
                    Err(e) => {
                        row_errors.push(format!("row {i} ({} = {x} THz): {e}", axis.name()));
                        let mut cells = vec![Cell::num(x)];
                        cells.extend(cols.iter().map(|_| Cell::Missing));
                        cells.push(Cell::text(e.to_string()));
                        table.push(cells);
                    }
                }
            }
            let mut plot = LinePlot::new(format!("Flux budget vs {}", axis.name()), x_label, "probability");
            for (name, pts) in cols.iter().zip(lines) {
                plot.add(*name, pts);
            }
            Ok(Outcome {
                table,
                plot: Some(plot),
                row_errors,
            })
        }
        SweepMetric::FalseEven => {
            let mut table = ResultTable::new(["value_THz", "false_even", "error"]);
            let mut pts = Vec::new();
            for (i, (_, result)) in false_even_sweep(&base, axis, &rad, probe, Execution::default())
                .into_iter()
                .enumerate()
            {
                let x = values[i];
                match result {
                    Ok(p) => {
                        table.push(vec![Cell::num(x), Cell::num(p), Cell::Missing]);
                        pts.push((x, p));
                    }
                    Err(e) => {
                        row_errors.push(format!("row {i} ({} = {x} THz): {e}", axis.name()));
                        table.push(vec![Cell::num(x), Cell::Missing, Cell::text(e.to_string())]);
                    }
                }
            }
            let mut plot = LinePlot::new(
                format!("False-even probability vs {}", axis.name()),
                x_label,
                "probability",
            )
            .log_y();
            plot.add("false_even", pts);
            Ok(Outcome {
                table,
                plot: Some(plot),
                row_errors,
            })
        }
    }
}

fn entangle(config: &RunConfig, mean_photons: f64) -> Result<Outcome, CliError> {
    let (a, b) = nodes(config);
    let ent = entanglement_generation(&a.as_ref(), &b.as_ref(), probe(config)?, mean_photons)?;
    let mut table = ResultTable::new(["port", "probability", "fidelity"]);
    for p in &ent.ports {
        table.push(vec![
            Cell::text(p.port.name()),
            Cell::num(p.probability),
            Cell::num(p.fidelity),
        ]);
    }
    table.push(vec![
        Cell::text("any"),
        Cell::num(ent.herald.success_probability),
        Cell::num(ent.herald.fidelity),
    ]);
    table.metadata.insert("target_state".into(), json!("psi_minus"));
    Ok(outcome(table, None))
}

fn density_json(rho: &DensityMatrix) -> Value {
    json!(rho
        .0
        .iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn parity(config: &RunConfig, mean_photons: f64, state: &str) -> Result<Outcome, CliError> {
    let (a, b) = nodes(config);
    let psi = named_state(state)?;
    let rho = DensityMatrix::from_pure(&psi);
    let result = parity_probe(&a.as_ref(), &b.as_ref(), &rho, probe(config)?, mean_photons)?;

    let mut table = ResultTable::new([
        "branch",
        "weight",
        "even_re",
        "even_im",
        "odd_re",
        "odd_im",
        "loss_flux",
        "herald_flux",
    ]);
    for (i, br) in result.record.branches.iter().enumerate() {
        let loss: f64 = br.losses.iter().map(|z| z.norm_sqr()).sum();
        table.push(vec![
            Cell::text(BASIS_LABELS[i]),
            Cell::num(rho[(i, i)].re),
            Cell::num(br.even.re),
            Cell::num(br.even.im),
            Cell::num(br.odd.re),
            Cell::num(br.odd.im),
            Cell::num(loss),
            Cell::num(br.herald_flux()),
        ]);
    }
    let events: Vec<Value> = DetectionEvent::ALL
        .iter()
        .map(|&ev| {
            let e = result.event(ev);
            json!({
                "event": ev.name(),
                "probability": e.probability,
                "post_state": e.post_state.as_ref().map(density_json),
            })
        })
        .collect();
    table.metadata.insert(
        "summary".into(),
        json!({
            "state": state,
            "even_flux": result.even_flux,
            "odd_flux": result.odd_flux,
            "success_probability": result.success_probability(),
            "events": events,
        }),
    );
    Ok(outcome(table, None))
}

fn bell(config: &RunConfig, mean_photons: f64, samples: u64) -> Result<Outcome, CliError> {
    let (a, b) = nodes(config);
    let probe = probe(config)?;
    let mut columns = vec![
        "input",
        "outcome",
        "first_parity",
        "second_parity",
        "probability",
        "fidelity",
        "correct",
        "success_probability",
    ];
    if samples > 0 {
        columns.extend(["mc_correct_fraction", "mc_failure_fraction"]);
    }
    let mut table = ResultTable::new(columns);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for label in BellLabel::ALL {
        let rho = DensityMatrix::from_pure(&TwoDipoleState::bell(label));
        let m = bell_measurement(&a.as_ref(), &b.as_ref(), &rho, probe, mean_photons)?;
        let mut row = vec![Cell::text(label.name())];
        match m.most_likely() {
            Some((o, r)) => row.extend([
                Cell::text(o.label.name()),
                Cell::text(o.first_parity.name()),
                Cell::text(o.second_parity.name()),
                Cell::num(r.success_probability),
                Cell::num(r.fidelity),
                Cell::num(if o.label == label { 1.0 } else { 0.0 }),
            ]),
            None => row.extend((0..6).map(|_| Cell::Missing)),
        }
        row.push(Cell::num(m.success_probability()));
        if samples > 0 {
            let (mut correct, mut failed) = (0u64, 0u64);
            for _ in 0..samples {
                match m.sample(&mut rng) {
                    Some(br) if br.outcome.label == label => correct += 1,
                    Some(_) => {}
                    None => failed += 1,
                }
            }
            row.push(Cell::num(correct as f64 / samples as f64));
            row.push(Cell::num(failed as f64 / samples as f64));
        }
        table.push(row);
    }
    Ok(outcome(table, None))
}

fn tradeoff(config: &RunConfig, grid: &[f64], state: &str) -> Result<Outcome, CliError> {
    let (a, b) = nodes(config);
    let target = BellLabel::from_name(state)
        .ok_or_else(|| CliError::Validation(vec![format!("tradeoff state must be a Bell state, got `{state}`")]))?;
    let rows = tradeoff_for(
        &a.as_ref(),
        &b.as_ref(),
        probe(config)?,
        grid,
        target,
        Execution::default(),
    )?;
    let mut table = ResultTable::new(["mean_photons", "fidelity", "success_probability"]);
    let (mut fid, mut succ) = (Vec::new(), Vec::new());
    for r in &rows {
        table.push(vec![
            Cell::num(r.mean_photons),
            Cell::num(r.fidelity),
            Cell::num(r.success_probability),
        ]);
        fid.push((r.mean_photons, r.fidelity));
        succ.push((r.mean_photons, r.success_probability));
    }
    let mut plot = LinePlot::new("Parity measurement tradeoff", "mean photon number", "value");
    plot.add("fidelity", fid);
    plot.add("success", succ);
    Ok(outcome(table, Some(plot)))
}

fn diagnostics(config: &RunConfig, input_flux: Option<f64>, safety: f64) -> Result<Outcome, CliError> {
    let params = config.params();
    let d = diagnostics_with_safety(&params, safety)?;
    let mut columns = vec![
        "purcell",
        "critical_atom_number",
        "critical_photon_number",
        "max_safe_flux",
        "quality_factor",
    ];
    let mut row = vec![
        Cell::num(d.purcell),
        Cell::num(d.critical_atom),
        Cell::num(d.critical_photon),
        Cell::num(d.max_safe_flux),
        Cell::num(params.quality_factor()),
    ];
    if let Some(flux) = input_flux {
        let w = weak_excitation_check(&params, flux);
        columns.extend(["input_flux", "sigma_occupancy_estimate", "weak_excitation_valid"]);
        row.extend([
            Cell::num(flux),
            Cell::num(w.sigma_occupancy_estimate),
            Cell::text(if w.valid { "true" } else { "false" }),
        ]);
    }
    let mut table = ResultTable::new(columns);
    table.push(row);
    Ok(outcome(table, None))
}
