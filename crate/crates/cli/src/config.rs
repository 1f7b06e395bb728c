//! Run configuration: a flat TOML document.
//!
//! Rates are given in THz and converted to rad/s by [`THZ`] (10¹², no 2π).
//! Keys shared by every command are the node rates (`gamma`, `g`, `tau`,
//! `kappa`, `delta`, `omega0`), optional `node_b_*` overrides for the
//! second repeater node, `probe_detuning`, and the output controls
//! (`format`, `plot`, `out`, `seed`, `name`). Each command accepts its own
//! extra keys; see [`Command::keys`].

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use ditsim_core::repeater::BellLabel;
use ditsim_core::spectra::{DEFAULT_GRID_POINTS, DEFAULT_HALF_WIDTH_GAMMAS};
use ditsim_core::{Axis, SystemParams, DEFAULT_KAPPA_FRACTION, THZ};
use serde::Serialize;
use toml::{Table, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Spectrum,
    Sweep,
    Entangle,
    Parity,
    Bell,
    Tradeoff,
    Diagnostics,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Spectrum,
        Command::Sweep,
        Command::Entangle,
        Command::Parity,
        Command::Bell,
        Command::Tradeoff,
        Command::Diagnostics,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Sweep => "sweep",
            Command::Entangle => "entangle",
            Command::Parity => "parity",
            Command::Bell => "bell",
            Command::Tradeoff => "tradeoff",
            Command::Diagnostics => "diagnostics",
        }
    }

    /// Command-specific keys.
    pub fn keys(self) -> &'static [&'static str] {
        match self {
            Command::Spectrum => &["grid_start", "grid_stop", "grid_count"],
            Command::Sweep => &["axis", "values", "sweep_start", "sweep_stop", "sweep_count", "metric"],
            Command::Entangle => &["mean_photons", "ideal"],
            Command::Parity => &["mean_photons", "state", "ideal"],
            Command::Bell => &["mean_photons", "samples", "ideal"],
            Command::Tradeoff => &["mean_photons_grid", "state", "ideal"],
            Command::Diagnostics => &["input_flux", "flux_safety"],
        }
    }

    fn uses_second_node(self) -> bool {
        matches!(
            self,
            Command::Entangle | Command::Parity | Command::Bell | Command::Tradeoff
        )
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command `{s}`"))
    }
}

pub const NODE_KEYS: [&str; 6] = ["gamma", "g", "tau", "kappa", "delta", "omega0"];
pub const NODE_B_KEYS: [&str; 6] = [
    "node_b_gamma",
    "node_b_g",
    "node_b_tau",
    "node_b_kappa",
    "node_b_delta",
    "node_b_omega0",
];
pub const COMMON_KEYS: [&str; 7] = ["command", "probe_detuning", "format", "plot", "out", "seed", "name"];

fn all_known_keys() -> Vec<&'static str> {
    let mut keys: Vec<&'static str> = COMMON_KEYS
        .iter()
        .chain(&NODE_KEYS)
        .chain(&NODE_B_KEYS)
        .copied()
        .collect();
    for c in Command::ALL {
        keys.extend(c.keys());
    }
    keys.sort_unstable();
    keys.dedup();
    keys
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format `{s}` (expected csv or json)")),
        }
    }
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Node rates in THz, as written in the config.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NodeThz {
    pub gamma: f64,
    pub g: f64,
    pub tau: f64,
    pub kappa: f64,
    pub delta: f64,
    pub omega0: f64,
}

impl NodeThz {
    pub fn to_params(&self) -> SystemParams {
        SystemParams {
            omega0: self.omega0 * THZ,
            kappa: self.kappa * THZ,
            gamma: self.gamma * THZ,
            g: self.g * THZ,
            tau: self.tau * THZ,
            delta: self.delta * THZ,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMetric {
    Budget,
    FalseEven,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CommandSpec {
    Spectrum {
        grid_start: f64,
        grid_stop: f64,
        grid_count: usize,
    },
    Sweep {
        axis: String,
        values: Vec<f64>,
        metric: SweepMetric,
    },
    Entangle {
        mean_photons: f64,
    },
    Parity {
        mean_photons: f64,
        state: String,
    },
    Bell {
        mean_photons: f64,
        samples: u64,
    },
    Tradeoff {
        mean_photons_grid: Vec<f64>,
        state: String,
    },
    Diagnostics {
        input_flux: Option<f64>,
        flux_safety: f64,
    },
}

/// Fully resolved configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub node: NodeThz,
    pub node_b: NodeThz,
    pub probe_detuning: f64,
    pub ideal: bool,
    pub spec: CommandSpec,
    pub format: Format,
    pub plot: bool,
    pub out: PathBuf,
    pub seed: u64,
    pub name: String,
}

impl RunConfig {
    pub fn params(&self) -> SystemParams {
        self.node.to_params()
    }

    pub fn params_b(&self) -> SystemParams {
        self.node_b.to_params()
    }

    pub fn axis(&self) -> Option<Axis> {
        match &self.spec {
            CommandSpec::Sweep { axis, .. } => axis.parse().ok(),
            _ => None,
        }
    }
}

/// Overrides coming from the command line.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub command: Option<Command>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub plot: bool,
    pub seed: Option<u64>,
}

fn line_of(text: &str, key: &str) -> usize {
    text.lines()
        .position(|l| {
            let t = l.trim_start();
            t.strip_prefix(key)
                .map(|rest| rest.trim_start().starts_with('='))
                .unwrap_or(false)
        })
        .map_or(0, |i| i + 1)
}

fn parse_error(text: &str, key: &str, message: String) -> CliError {
    CliError::Parse {
        line: line_of(text, key),
        key: key.to_string(),
        message,
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    parse_config_with(text, &Overrides::default())
}

pub fn parse_config_with(text: &str, overrides: &Overrides) -> Result<RunConfig, CliError> {
    let table: Table = text.parse().map_err(|e: toml::de::Error| {
        let line = e
            .span()
            .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
            .unwrap_or(0);
        CliError::Parse {
            line,
            key: String::new(),
            message: e.message().trim().to_string(),
        }
    })?;

    let known = all_known_keys();
    for key in table.keys() {
        if !known.contains(&key.as_str()) {
            let nearest = known
                .iter()
                .min_by_key(|k| strsim::levenshtein(k, key))
                .expect("non-empty");
            return Err(parse_error(
                text,
                key,
                format!("unknown key `{key}`; did you mean `{nearest}`?"),
            ));
        }
    }

    let r = Reader { text, table: &table };

    let file_command = r
        .string("command")?
        .map(|s| s.parse::<Command>().map_err(|m| parse_error(text, "command", m)));
    let file_command = file_command.transpose()?;
    let command = match (overrides.command, file_command) {
        (Some(a), Some(b)) if a != b => {
            return Err(parse_error(
                text,
                "command",
                format!("config says `{b}` but `{a}` was requested"),
            ))
        }
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => {
            return Err(CliError::Parse {
                line: 0,
                key: "command".into(),
                message: "no command given".into(),
            })
        }
    };

    let allowed: Vec<&str> = COMMON_KEYS
        .iter()
        .chain(&NODE_KEYS)
        .chain(if command.uses_second_node() {
            &NODE_B_KEYS[..]
        } else {
            &[]
        })
        .chain(command.keys())
        .copied()
        .collect();
    for key in table.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(parse_error(
                text,
                key,
                format!("key `{key}` is not used by command `{command}`"),
            ));
        }
    }

    let mut violations = Vec::new();
    let node = r.node(&mut violations)?;
    let node_b = r.node_b(&node, &mut violations)?;

    let probe_detuning = r.float("probe_detuning")?.unwrap_or(0.0);
    if !probe_detuning.is_finite() {
        violations.push("probe_detuning must be finite".to_string());
    }

    let ideal = r.bool("ideal")?.unwrap_or(false);
    let spec = r.spec(command, &node, &mut violations)?;

    let format = match overrides.format {
        Some(f) => f,
        None => match r.string("format")? {
            Some(s) => s.parse().map_err(|m| parse_error(text, "format", m))?,
            None => Format::default(),
        },
    };
    let plot = overrides.plot || r.bool("plot")?.unwrap_or(false);
    let out = overrides
        .out
        .clone()
        .or(r.string("out")?.map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let seed = match overrides.seed {
        Some(s) => s,
        None => r.integer("seed")?.map(|s| s as u64).unwrap_or(0),
    };
    let name = r.string("name")?.unwrap_or_else(|| command.name().to_string());
    if name.is_empty() || name.contains(['/', '\\']) {
        violations.push(format!("name `{name}` must be a plain file stem"));
    }
    if out.exists() && !out.is_dir() {
        violations.push(format!("out `{}` exists and is not a directory", out.display()));
    }

    if !violations.is_empty() {
        return Err(CliError::Validation(violations));
    }
    Ok(RunConfig {
        command,
        node,
        node_b,
        probe_detuning,
        ideal,
        spec,
        format,
        plot,
        out,
        seed,
        name,
    })
}

struct Reader<'a> {
    text: &'a str,
    table: &'a Table,
}

impl Reader<'_> {
    fn get(&self, key: &str) -> Option<&Value> {
        self.table.get(key)
    }

    fn wrong_type(&self, key: &str, expected: &str) -> CliError {
        parse_error(self.text, key, format!("`{key}` must be {expected}"))
    }

    fn float(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::Float(x)) => Ok(Some(*x)),
            Some(Value::Integer(i)) => Ok(Some(*i as f64)),
            Some(_) => Err(self.wrong_type(key, "a number")),
        }
    }

    fn integer(&self, key: &str) -> Result<Option<i64>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::Integer(i)) if *i >= 0 => Ok(Some(*i)),
            Some(_) => Err(self.wrong_type(key, "a non-negative integer")),
        }
    }

    fn bool(&self, key: &str) -> Result<Option<bool>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::Boolean(b)) => Ok(Some(*b)),
            Some(_) => Err(self.wrong_type(key, "true or false")),
        }
    }

    fn string(&self, key: &str) -> Result<Option<String>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(_) => Err(self.wrong_type(key, "a string")),
        }
    }

    fn floats(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| match v {
                    Value::Float(x) => Ok(*x),
                    Value::Integer(i) => Ok(*i as f64),
                    _ => Err(self.wrong_type(key, "an array of numbers")),
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Some),
            Some(_) => Err(self.wrong_type(key, "an array of numbers")),
        }
    }

    fn node(&self, violations: &mut Vec<String>) -> Result<NodeThz, CliError> {
        let key = |k: &str| k.to_string();
        let mut missing = false;
        let mut required = |k: &str| -> Result<f64, CliError> {
            Ok(self.float(&key(k))?.unwrap_or_else(|| {
                violations.push(format!("{} is required", key(k)));
                missing = true;
                f64::NAN
            }))
        };
        let gamma = required("gamma")?;
        let g = required("g")?;
        let tau = required("tau")?;
        let kappa = self.float(&key("kappa"))?.unwrap_or(DEFAULT_KAPPA_FRACTION * gamma);
        let delta = self.float(&key("delta"))?.unwrap_or(0.0);
        let omega0 = self.float(&key("omega0"))?.unwrap_or(kappa * 1.0e4);
        let node = NodeThz {
            gamma,
            g,
            tau,
            kappa,
            delta,
            omega0,
        };
        if !missing {
            violations.extend(node.to_params().violations());
        }
        Ok(node)
    }

    fn node_b(&self, a: &NodeThz, violations: &mut Vec<String>) -> Result<NodeThz, CliError> {
        let mut b = *a;
        for (field, key) in [
            (&mut b.gamma, "node_b_gamma"),
            (&mut b.g, "node_b_g"),
            (&mut b.tau, "node_b_tau"),
            (&mut b.kappa, "node_b_kappa"),
            (&mut b.delta, "node_b_delta"),
            (&mut b.omega0, "node_b_omega0"),
        ] {
            if let Some(v) = self.float(key)? {
                *field = v;
            }
        }
        if b != *a {
            violations.extend(b.to_params().violations().into_iter().map(|v| format!("node_b_{v}")));
        }
        Ok(b)
    }

    fn state(&self, allow_basis: bool, violations: &mut Vec<String>) -> Result<String, CliError> {
        let s = self.string("state")?.unwrap_or_else(|| "phi_plus".into());
        let ok = BellLabel::from_name(&s).is_some()
            || (allow_basis && ditsim_core::repeater::BASIS_LABELS.contains(&s.as_str()));
        if !ok {
            violations.push(format!("state `{s}` is not a recognised two-dipole state"));
        }
        Ok(s)
    }

    fn spec(&self, command: Command, node: &NodeThz, violations: &mut Vec<String>) -> Result<CommandSpec, CliError> {
        let photons = |r: &Self, default: f64, violations: &mut Vec<String>| -> Result<f64, CliError> {
            let n = r.float("mean_photons")?.unwrap_or(default);
            if !(n.is_finite() && n >= 0.0) {
                violations.push(format!("mean_photons must be >= 0 (got {n})"));
            }
            Ok(n)
        };
        Ok(match command {
            Command::Spectrum => {
                let half = DEFAULT_HALF_WIDTH_GAMMAS * node.gamma;
                let grid_start = self.float("grid_start")?.unwrap_or(-half);
                let grid_stop = self.float("grid_stop")?.unwrap_or(half);
                let grid_count = self.integer("grid_count")?.map_or(DEFAULT_GRID_POINTS, |c| c as usize);
                if !(grid_start < grid_stop) {
                    violations.push(format!(
                        "grid_start ({grid_start}) must be below grid_stop ({grid_stop})"
                    ));
                }
                if grid_count < 2 {
                    violations.push(format!("grid_count must be at least 2 (got {grid_count})"));
                }
                CommandSpec::Spectrum {
                    grid_start,
                    grid_stop,
                    grid_count,
                }
            }
            Command::Sweep => {
                let axis = self.string("axis")?.unwrap_or_default();
                if let Err(m) = axis.parse::<Axis>() {
                    violations.push(if axis.is_empty() {
                        "axis is required".to_string()
                    } else {
                        m
                    });
                }
                let metric = match self.string("metric")?.as_deref() {
                    None | Some("budget") => SweepMetric::Budget,
                    Some("false_even") => SweepMetric::FalseEven,
                    Some(other) => {
                        violations.push(format!("metric `{other}` must be budget or false_even"));
                        SweepMetric::Budget
                    }
                };
                let explicit = self.floats("values")?;
                let start = self.float("sweep_start")?;
                let stop = self.float("sweep_stop")?;
                let count = self.integer("sweep_count")?;
                let values = match (explicit, start, stop, count) {
                    (Some(v), None, None, None) => v,
                    (None, Some(a), Some(b), Some(n)) => {
                        let n = n as usize;
                        if n < 2 || !(a < b) {
                            violations.push("sweep range needs sweep_start < sweep_stop and sweep_count >= 2".into());
                            Vec::new()
                        } else {
                            (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
                        }
                    }
                    (None, None, None, None) => {
                        violations.push("sweep needs `values` or sweep_start/sweep_stop/sweep_count".into());
                        Vec::new()
                    }
                    _ => {
                        violations.push("give either `values` or all of sweep_start/sweep_stop/sweep_count".into());
                        Vec::new()
                    }
                };
                if values.iter().any(|v| !v.is_finite()) {
                    violations.push("sweep values must be finite".into());
                }
                CommandSpec::Sweep { axis, values, metric }
            }
            Command::Entangle => {
                let mean_photons = photons(self, 0.05, violations)?;
                if mean_photons > ditsim_core::repeater::MAX_HERALD_PHOTONS {
                    violations.push(format!(
                        "mean_photons must be <= {} for heralded entanglement (got {mean_photons})",
                        ditsim_core::repeater::MAX_HERALD_PHOTONS
                    ));
                }
                CommandSpec::Entangle { mean_photons }
            }
            Command::Parity => CommandSpec::Parity {
                mean_photons: photons(self, 1.0, violations)?,
                state: self.state(true, violations)?,
            },
            Command::Bell => CommandSpec::Bell {
                mean_photons: photons(self, 3.0, violations)?,
                samples: self.integer("samples")?.unwrap_or(0) as u64,
            },
            Command::Tradeoff => {
                let grid = self
                    .floats("mean_photons_grid")?
                    .unwrap_or_else(|| vec![0.5, 1.0, 2.0, 3.0, 5.0]);
                if grid.iter().any(|n| !(n.is_finite() && *n >= 0.0)) {
                    violations.push("mean_photons_grid entries must be >= 0".into());
                }
                let state = self.state(false, violations)?;
                if !matches!(state.as_str(), "phi_plus" | "phi_minus") {
                    violations.push(format!("tradeoff state must be phi_plus or phi_minus (got {state})"));
                }
                CommandSpec::Tradeoff {
                    mean_photons_grid: grid,
                    state,
                }
            }
            Command::Diagnostics => {
                let input_flux = self.float("input_flux")?;
                if input_flux.is_some_and(|f| !(f.is_finite() && f >= 0.0)) {
                    violations.push("input_flux must be >= 0".into());
                }
                let flux_safety = self
                    .float("flux_safety")?
                    .unwrap_or(ditsim_core::scattering::DEFAULT_FLUX_SAFETY);
                if !(flux_safety > 0.0 && flux_safety.is_finite()) {
                    violations.push("flux_safety must be > 0".into());
                }
                if !(node.g > 0.0 && node.tau > 0.0) {
                    violations.push("diagnostics need g > 0 and tau > 0".into());
                }
                CommandSpec::Diagnostics {
                    input_flux,
                    flux_safety,
                }
            }
        })
    }
}
