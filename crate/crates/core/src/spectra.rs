//! Detuning spectra, transparency-peak analysis and parameter sweeps.

use crate::scattering::{flux_budget, scatter_coefficients, Axis, FluxBudget, ProbeDetuning, SystemParams};
use crate::{Error, Execution, Result};

/// Half-width of the default grid in units of γ.
pub const DEFAULT_HALF_WIDTH_GAMMAS: f64 = 3.0;
pub const DEFAULT_GRID_POINTS: usize = 2001;

/// Uniform detuning grid in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetuningGrid {
    start: f64,
    stop: f64,
    count: usize,
}

impl DetuningGrid {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        let mut problems = Vec::new();
        if !start.is_finite() || !stop.is_finite() {
            problems.push("endpoints must be finite".to_string());
        } else if !(start < stop) {
            problems.push(format!("start ({start}) must be below stop ({stop})"));
        }
        if count < 2 {
            problems.push(format!("count must be at least 2 (got {count})"));
        }
        if problems.is_empty() {
            Ok(DetuningGrid { start, stop, count })
        } else {
            Err(Error::InvalidGrid(problems.join("; ")))
        }
    }

    /// Degenerate grid holding one detuning.
    pub fn single(detuning: f64) -> Result<Self> {
        if !detuning.is_finite() {
            return Err(Error::InvalidGrid("detuning must be finite".into()));
        }
        Ok(DetuningGrid {
            start: detuning,
            stop: detuning,
            count: 1,
        })
    }

    /// ±3γ with 2001 points.
    pub fn default_for(params: &SystemParams) -> Self {
        let half = DEFAULT_HALF_WIDTH_GAMMAS * params.gamma;
        DetuningGrid::new(-half, half, DEFAULT_GRID_POINTS).expect("gamma > 0")
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn stop(&self) -> f64 {
        self.stop
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn step(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.stop - self.start) / (self.count - 1) as f64
        }
    }

    pub fn value(&self, index: usize) -> f64 {
        if index + 1 == self.count {
            self.stop
        } else {
            self.start + index as f64 * self.step()
        }
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.value(i))
    }
}

/// |t_through|² and |t_drop|² sampled over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSeries {
    pub grid: DetuningGrid,
    pub through: Vec<f64>,
    pub drop: Vec<f64>,
    pub params: SystemParams,
}

pub fn transmission_spectrum(params: &SystemParams, grid: &DetuningGrid) -> Result<SpectrumSeries> {
    transmission_spectrum_with(params, grid, Execution::default())
}

pub fn transmission_spectrum_with(
    params: &SystemParams,
    grid: &DetuningGrid,
    exec: Execution,
) -> Result<SpectrumSeries> {
    params.validate()?;
    let points = exec.map_range(grid.count(), |i| {
        scatter_coefficients(params, ProbeDetuning(grid.value(i)))
            .map(|c| (c.through_probability(), c.drop_probability()))
            .map_err(|e| e.at_point(i))
    });
    let mut through = Vec::with_capacity(points.len());
    let mut drop = Vec::with_capacity(points.len());
    for p in points {
        let (t, d) = p?;
        through.push(t);
        drop.push(d);
    }
    Ok(SpectrumSeries {
        grid: *grid,
        through,
        drop,
        params: *params,
    })
}

/// Full flux budget at every grid point.
pub fn budget_spectrum(params: &SystemParams, grid: &DetuningGrid, exec: Execution) -> Result<Vec<FluxBudget>> {
    params.validate()?;
    exec.map_range(grid.count(), |i| {
        flux_budget(params, ProbeDetuning(grid.value(i))).map_err(|e| e.at_point(i))
    })
    .into_iter()
    .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakReport {
    /// Parabolically refined location, rad/s.
    pub peak_detuning: f64,
    pub peak_value: f64,
    /// Full width at half prominence, rad/s.
    pub fwhm: f64,
    /// Grid index of the discrete maximum.
    pub index: usize,
    /// Reference level the half height is measured from.
    pub baseline: f64,
}

/// Finds the highest interior local maximum of the through channel.
///
/// The width is measured at half height between the peak and its
/// prominence base: on each side the lowest sample before the curve rises
/// above the peak again (or the grid ends), taking the higher of the two
/// minima. A transparency window sits between two deep polariton dips, so
/// measuring from the far-off-resonance level would only catch its tip.
pub fn locate_transparency_peak(series: &SpectrumSeries) -> Result<PeakReport> {
    let y = &series.through;
    let n = y.len();
    if n < 3 {
        return Err(Error::NoPeak);
    }
    let index = (1..n - 1)
        .filter(|&i| y[i] >= y[i - 1] && y[i] > y[i + 1])
        .max_by(|&a, &b| y[a].total_cmp(&y[b]))
        .ok_or(Error::NoPeak)?;

    let step = series.grid.step();
    let (y0, y1, y2) = (y[index - 1], y[index], y[index + 1]);
    let curvature = y0 - 2.0 * y1 + y2;
    let offset = if curvature < 0.0 {
        (0.5 * (y0 - y2) / curvature).clamp(-0.5, 0.5)
    } else {
        0.0
    };
    let peak_detuning = series.grid.value(index) + offset * step;
    let peak_value = (y1 - 0.25 * (y0 - y2) * offset).max(y1);

    let left_base = y[..index]
        .iter()
        .rev()
        .take_while(|&&v| v <= y1)
        .fold(y1, |m, &v| m.min(v));
    let right_base = y[index + 1..]
        .iter()
        .take_while(|&&v| v <= y1)
        .fold(y1, |m, &v| m.min(v));
    let baseline = left_base.max(right_base);
    let level = peak_value - 0.5 * (peak_value - baseline);

    let left = (0..index)
        .rev()
        .find(|&i| y[i] < level)
        .map(|i| crossing(series.grid.value(i), y[i], series.grid.value(i + 1), y[i + 1], level))
        .unwrap_or(series.grid.start());
    let right = (index + 1..n)
        .find(|&i| y[i] < level)
        .map(|i| crossing(series.grid.value(i - 1), y[i - 1], series.grid.value(i), y[i], level))
        .unwrap_or(series.grid.stop());

    Ok(PeakReport {
        peak_detuning,
        peak_value,
        fwhm: right - left,
        index,
        baseline,
    })
}

fn crossing(x0: f64, y0: f64, x1: f64, y1: f64, level: f64) -> f64 {
    if y1 == y0 {
        0.5 * (x0 + x1)
    } else {
        x0 + (level - y0) / (y1 - y0) * (x1 - x0)
    }
}

/// One row of a parameter sweep; failures are annotated, not fatal.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub budget: Result<FluxBudget>,
}

pub fn parameter_sweep(base: &SystemParams, axis: Axis, values: &[f64], probe: ProbeDetuning) -> Vec<SweepRow> {
    parameter_sweep_with(base, axis, values, probe, Execution::default())
}

pub fn parameter_sweep_with(
    base: &SystemParams,
    axis: Axis,
    values: &[f64],
    probe: ProbeDetuning,
    exec: Execution,
) -> Vec<SweepRow> {
    exec.map(values, |&value| SweepRow {
        value,
        budget: base.with_axis(axis, value).and_then(|p| flux_budget(&p, probe)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::THZ;

    fn reference_series(params: &SystemParams) -> SpectrumSeries {
        transmission_spectrum(params, &DetuningGrid::default_for(params)).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(DetuningGrid::new(1.0, 0.0, 10).is_err());
        assert!(DetuningGrid::new(0.0, 1.0, 1).is_err());
        assert!(DetuningGrid::new(0.0, f64::NAN, 3).is_err());
        let g = DetuningGrid::new(-1.0, 1.0, 5).unwrap();
        assert_eq!(g.values().collect::<Vec<_>>(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn single_point_critical_coupling() {
        let p = SystemParams::reference().with_g(0.0).with_kappa(0.0);
        let s = transmission_spectrum(&p, &DetuningGrid::single(0.0).unwrap()).unwrap();
        assert_eq!(s.through.len(), 1);
        assert!(s.through[0].abs() < 1e-15);
        assert!((s.drop[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn empty_dipole_gives_drop_filter_lorentzian() {
        let p = SystemParams::reference().with_g(0.0);
        let s = reference_series(&p);
        let mid = s.grid.count() / 2;
        let expected = (p.gamma / (p.gamma + p.kappa / 2.0)).powi(2);
        assert!((s.drop[mid] - expected).abs() < 1e-12);
        let (imax, _) = s.drop.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap();
        let (imin, _) = s.through.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap();
        assert_eq!(imax, mid);
        assert_eq!(imin, mid);
        assert!(matches!(locate_transparency_peak(&s), Err(Error::NoPeak)));
    }

    #[test]
    fn dipole_opens_a_transparency_window() {
        let s = reference_series(&SystemParams::reference());
        let mid = s.grid.count() / 2;
        assert!(s.through[mid] > 0.95);
        let peak = locate_transparency_peak(&s).unwrap();
        assert!(peak.peak_detuning.abs() <= s.grid.step());
        let max = s.through.iter().cloned().fold(f64::MIN, f64::max);
        assert!(peak.peak_value >= max - 1e-12);
        let g = SystemParams::reference().g;
        assert!(peak.fwhm > g / 2.0 && peak.fwhm < 2.0 * g, "fwhm {}", peak.fwhm / THZ);
    }

    #[test]
    fn detuned_dipole_moves_the_peak() {
        let p = SystemParams::reference().with_delta(0.5 * THZ);
        let grid = DetuningGrid::new(-2.0 * THZ, 2.0 * THZ, 2001).unwrap();
        let peak = locate_transparency_peak(&transmission_spectrum(&p, &grid).unwrap()).unwrap();
        assert!((peak.peak_detuning - 0.5 * THZ).abs() <= grid.step());
    }

    #[test]
    fn monotone_curve_has_no_peak() {
        let grid = DetuningGrid::new(0.0, 3.0, 4).unwrap();
        let s = SpectrumSeries {
            grid,
            through: vec![0.1, 0.2, 0.3, 0.4],
            drop: vec![0.0; 4],
            params: SystemParams::reference(),
        };
        assert_eq!(locate_transparency_peak(&s), Err(Error::NoPeak));
    }

    #[test]
    fn parabolic_refinement_recovers_off_grid_vertex() {
        let grid = DetuningGrid::new(-5.0, 5.0, 11).unwrap();
        let through: Vec<f64> = grid.values().map(|x| 1.0 - 0.1 * (x - 0.3f64).powi(2)).collect();
        let s = SpectrumSeries {
            grid,
            drop: vec![0.0; through.len()],
            through,
            params: SystemParams::reference(),
        };
        let peak = locate_transparency_peak(&s).unwrap();
        assert!((peak.peak_detuning - 0.3).abs() < 1e-12);
        assert!((peak.peak_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn delta_sweep_peaks_at_zero() {
        let rows = parameter_sweep(
            &SystemParams::reference(),
            Axis::Delta,
            &[-THZ, 0.0, THZ],
            ProbeDetuning::RESONANT,
        );
        let t: Vec<f64> = rows.iter().map(|r| r.budget.as_ref().unwrap().through).collect();
        // mpmath: 0.012889181630172744, 0.990882199404754
        assert!((t[0] - 0.012_889_181_630_172_744).abs() < 1e-12);
        assert!((t[1] - 0.990_882_199_404_754).abs() < 1e-12);
        assert!((t[2] - t[0]).abs() < 1e-14);
    }

    #[test]
    fn g_sweep_switches_transparency_on() {
        let rows = parameter_sweep(
            &SystemParams::reference(),
            Axis::G,
            &[0.0, 0.33 * THZ],
            ProbeDetuning::RESONANT,
        );
        let t0 = rows[0].budget.as_ref().unwrap().through;
        let t1 = rows[1].budget.as_ref().unwrap().through;
        assert!(t0 < 0.01);
        assert!(t1 > 0.95);
    }

    #[test]
    fn sweep_annotates_bad_rows_and_continues() {
        let rows = parameter_sweep(
            &SystemParams::reference(),
            Axis::Gamma,
            &[THZ, -THZ, 2.0 * THZ],
            ProbeDetuning::RESONANT,
        );
        assert_eq!(rows.len(), 3);
        assert!(rows[0].budget.is_ok());
        assert!(matches!(rows[1].budget, Err(Error::InvalidParams(_))));
        assert!(rows[2].budget.is_ok());
        assert!(parameter_sweep(&SystemParams::reference(), Axis::G, &[], ProbeDetuning::RESONANT).is_empty());
    }

    #[test]
    fn failing_point_reports_its_index() {
        let p = SystemParams::reference().with_tau(0.0);
        let grid = DetuningGrid::new(-1.0, 1.0, 3).unwrap();
        match transmission_spectrum(&p, &grid) {
            Err(Error::PointFailed { index, source }) => {
                assert_eq!(index, 1);
                assert!(matches!(*source, Error::DegenerateDipole { .. }));
            }
            other => panic!("{other:?}"),
        }
    }
}
