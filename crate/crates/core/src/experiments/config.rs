//! TOML scenario configuration.
//!
//! Physical quantities are read in the units named by their keys (`_m`, `_dbm`, `_dbi`,
//! `_hz`) and converted to SI/linear exactly once, in [`ExperimentConfig::resolve`].

use std::path::Path;

use serde::Deserialize;

use crate::channels::ChannelParams;
use crate::error::{Error, Result};
use crate::geometry::{Layout, ScenarioGeometry, SurfaceSpec};
use crate::optimizer::PgmSettings;
use crate::schemes::SchemeId;
use crate::SPEED_OF_LIGHT;

/// Default number of strongest modes exported by the modes experiment.
pub const DEFAULT_MODE_COUNT: usize = 6;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: String,
    pub schemes: Vec<String>,
    pub geometry: GeometryConfig,
    pub channel: ChannelConfig,
    pub sweep: Option<SweepConfig>,
    pub power: PowerConfig,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
    #[serde(default)]
    pub modes: ModesConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub wall_distance_m: f64,
    /// Absolute RIS offset `d_ris`.
    pub ris_offset_m: Option<f64>,
    /// `d_ris` as a fraction of `D`; used when the wall distance is swept.
    pub ris_offset_fraction: Option<f64>,
    pub tx_height_m: f64,
    pub rx_height_m: f64,
    pub frequency_hz: f64,
    /// `[L_y, L_z]`.
    pub tx_elements: [usize; 2],
    /// `[M_y, M_z]`.
    pub rx_elements: [usize; 2],
    /// `[N_x, N_y]`.
    pub ris_cells: [usize; 2],
    pub tx_gain_dbi: f64,
    pub rx_gain_dbi: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    pub rician_k: Vec<f64>,
    pub direct_pathloss_exp: f64,
    pub direct_blocked: bool,
    pub seed: u64,
    /// Trials per (point, K); when absent, 50 for K < 1000 and 1 otherwise.
    pub trials: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// Square RIS side length; the recorded sweep value is `N = side²`.
    RisSize,
    WallDistance,
    RisOffset,
}

impl SweepVariable {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepVariable::RisSize => "ris_size",
            SweepVariable::WallDistance => "wall_distance",
            SweepVariable::RisOffset => "ris_offset",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerConfig {
    pub tx_power_dbm: f64,
    pub noise_density_dbm_per_hz: f64,
    pub bandwidth_hz: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerConfig {
    pub max_initial_steps: Option<[f64; 2]>,
    pub contraction: Option<[f64; 2]>,
    pub ascent_margins: Option<[f64; 2]>,
    pub max_iterations: Option<usize>,
    pub rel_tolerance: Option<f64>,
    pub max_backtracks: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModesConfig {
    pub count: usize,
}

impl Default for ModesConfig {
    fn default() -> Self {
        Self {
            count: DEFAULT_MODE_COUNT,
        }
    }
}

/// `10^(dB/10)`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm) * 1e-3
}

/// Everything a sweep needs, in SI/linear units and validated.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub scenario: String,
    pub schemes: Vec<SchemeId>,
    pub wavelength: f64,
    pub tx: SurfaceSpec,
    pub rx: SurfaceSpec,
    pub ris: SurfaceSpec,
    pub layout: Layout,
    /// Set when `d_ris` tracks `D` during a wall-distance sweep.
    pub ris_offset_fraction: Option<f64>,
    pub rician_k: Vec<f64>,
    pub direct_pathloss_exp: f64,
    pub direct_blocked: bool,
    pub seed: u64,
    pub trials: Option<usize>,
    pub sweep: Option<(SweepVariable, Vec<f64>)>,
    /// Transmit power budget `P_T` (W).
    pub power_budget: f64,
    /// `σ² = N₀·BW` (W).
    pub noise_power: f64,
    pub settings: PgmSettings,
    pub mode_count: usize,
}

fn finite_positive(path: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::config(path, format!("must be finite and positive, got {v}")))
    }
}

fn finite(path: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::config(path, format!("must be finite, got {v}")))
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let path = e
                .span()
                .map(|s| format!("byte {}..{}", s.start, s.end))
                .unwrap_or_else(|| "<document>".into());
            Error::config(path, e.message().to_string())
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(path.display().to_string(), format!("cannot read: {e}")))?;
        Self::from_toml_str(&text)
    }

    /// Validates every field and converts to SI/linear units.
    pub fn resolve(&self) -> Result<ResolvedConfig> {
        if self.scenario.trim().is_empty() {
            return Err(Error::config("scenario", "must not be empty"));
        }
        if self.scenario.contains([',', '"', '\n', '\r']) {
            return Err(Error::config("scenario", "must not contain commas, quotes or newlines"));
        }
        if self.schemes.is_empty() {
            return Err(Error::config("schemes", "at least one scheme is required"));
        }
        let mut schemes = Vec::with_capacity(self.schemes.len());
        for (i, s) in self.schemes.iter().enumerate() {
            let id: SchemeId = s
                .parse()
                .map_err(|e: Error| Error::config(format!("schemes[{i}]"), e.to_string()))?;
            if schemes.contains(&id) {
                return Err(Error::config(format!("schemes[{i}]"), format!("duplicate scheme `{s}`")));
            }
            schemes.push(id);
        }

        let g = &self.geometry;
        let frequency = finite_positive("geometry.frequency_hz", g.frequency_hz)?;
        let wavelength = SPEED_OF_LIGHT / frequency;
        let surface = |path: &str, counts: [usize; 2], gain_dbi: f64| -> Result<SurfaceSpec> {
            finite(&format!("geometry.{path}_gain_dbi"), gain_dbi)?;
            SurfaceSpec::half_wavelength(counts[0], counts[1], wavelength, db_to_linear(gain_dbi))
                .map_err(|e| Error::config(format!("geometry.{path}_elements"), e.to_string()))
        };
        let tx = surface("tx", g.tx_elements, g.tx_gain_dbi)?;
        let rx = surface("rx", g.rx_elements, g.rx_gain_dbi)?;
        let ris = SurfaceSpec::half_wavelength(g.ris_cells[0], g.ris_cells[1], wavelength, 1.0)
            .map_err(|e| Error::config("geometry.ris_cells", e.to_string()))?;

        let wall_distance = finite_positive("geometry.wall_distance_m", g.wall_distance_m)?;
        let ris_offset = match (g.ris_offset_m, g.ris_offset_fraction) {
            (Some(_), Some(_)) => {
                return Err(Error::config(
                    "geometry.ris_offset_fraction",
                    "give either ris_offset_m or ris_offset_fraction, not both",
                ))
            }
            (Some(d), None) => finite("geometry.ris_offset_m", d)?,
            (None, Some(f)) => {
                if !(f.is_finite() && f > 0.0 && f < 1.0) {
                    return Err(Error::config(
                        "geometry.ris_offset_fraction",
                        format!("must lie strictly inside (0, 1), got {f}"),
                    ));
                }
                f * wall_distance
            }
            (None, None) => {
                return Err(Error::config(
                    "geometry.ris_offset_m",
                    "one of ris_offset_m or ris_offset_fraction is required",
                ))
            }
        };
        let layout = Layout {
            wall_distance,
            ris_offset,
            tx_height: finite_positive("geometry.tx_height_m", g.tx_height_m)?,
            rx_height: finite_positive("geometry.rx_height_m", g.rx_height_m)?,
        };

        let c = &self.channel;
        if c.rician_k.is_empty() {
            return Err(Error::config("channel.rician_k", "at least one K value is required"));
        }
        for (i, &k) in c.rician_k.iter().enumerate() {
            if !(k.is_finite() && k >= 0.0) {
                return Err(Error::config(
                    format!("channel.rician_k[{i}]"),
                    format!("must be finite and non-negative, got {k}"),
                ));
            }
        }
        ChannelParams::new(0.0, c.direct_pathloss_exp, c.direct_blocked, c.seed)
            .map_err(|e| Error::config("channel.direct_pathloss_exp", e.to_string()))?;
        if c.trials == Some(0) {
            return Err(Error::config("channel.trials", "must be at least 1"));
        }

        let sweep = match &self.sweep {
            None => None,
            Some(s) => {
                if s.values.is_empty() {
                    return Err(Error::config("sweep.values", "at least one value is required"));
                }
                for (i, &v) in s.values.iter().enumerate() {
                    let path = format!("sweep.values[{i}]");
                    finite_positive(&path, v)?;
                    if s.variable == SweepVariable::RisSize && v.fract() != 0.0 {
                        return Err(Error::config(path, format!("RIS side length must be an integer, got {v}")));
                    }
                }
                Some((s.variable, s.values.clone()))
            }
        };

        let p = &self.power;
        let power_budget = dbm_to_watts(finite("power.tx_power_dbm", p.tx_power_dbm)?);
        let bandwidth = finite_positive("power.bandwidth_hz", p.bandwidth_hz)?;
        let noise_power = dbm_to_watts(finite("power.noise_density_dbm_per_hz", p.noise_density_dbm_per_hz)?)
            * bandwidth;

        let mut settings = PgmSettings::new(power_budget, noise_power);
        let o = &self.optimizer;
        if let Some([a, b]) = o.max_initial_steps {
            settings.max_initial_steps = (a, b);
        }
        if let Some([a, b]) = o.contraction {
            settings.contraction = (a, b);
        }
        if let Some([a, b]) = o.ascent_margins {
            settings.ascent_margins = (a, b);
        }
        if let Some(n) = o.max_iterations {
            settings.max_iterations = n;
        }
        if let Some(t) = o.rel_tolerance {
            settings.rel_tolerance = t;
        }
        if let Some(n) = o.max_backtracks {
            settings.max_backtracks = n;
        }
        settings
            .validate()
            .map_err(|e| Error::config("optimizer", e.to_string()))?;
        if self.modes.count == 0 {
            return Err(Error::config("modes.count", "must be at least 1"));
        }

        let resolved = ResolvedConfig {
            scenario: self.scenario.clone(),
            schemes,
            wavelength,
            tx,
            rx,
            ris,
            layout,
            ris_offset_fraction: g.ris_offset_fraction,
            rician_k: c.rician_k.clone(),
            direct_pathloss_exp: c.direct_pathloss_exp,
            direct_blocked: c.direct_blocked,
            seed: c.seed,
            trials: c.trials,
            sweep,
            power_budget,
            noise_power,
            settings,
            mode_count: self.modes.count,
        };
        // Every sweep point must produce a valid geometry.
        for i in 0..resolved.point_count() {
            resolved.geometry_at(i)?;
        }
        Ok(resolved)
    }
}

impl ResolvedConfig {
    pub fn point_count(&self) -> usize {
        self.sweep.as_ref().map_or(1, |(_, v)| v.len())
    }

    /// Value written to the `sweep_value` column for point `i`.
    pub fn sweep_value(&self, i: usize) -> f64 {
        match &self.sweep {
            None => 0.0,
            Some((SweepVariable::RisSize, v)) => v[i] * v[i],
            Some((_, v)) => v[i],
        }
    }

    /// Geometry of sweep point `i`.
    pub fn geometry_at(&self, i: usize) -> Result<ScenarioGeometry> {
        let mut ris = self.ris;
        let mut layout = self.layout;
        let path = || format!("sweep.values[{i}]");
        match &self.sweep {
            None => {}
            Some((SweepVariable::RisSize, v)) => {
                let side = v[i] as usize;
                ris = SurfaceSpec::half_wavelength(side, side, self.wavelength, self.ris.element_gain())
                    .map_err(|e| Error::config(path(), e.to_string()))?;
            }
            Some((SweepVariable::WallDistance, v)) => {
                layout.wall_distance = v[i];
                if let Some(f) = self.ris_offset_fraction {
                    layout.ris_offset = f * v[i];
                }
            }
            Some((SweepVariable::RisOffset, v)) => layout.ris_offset = v[i],
        }
        let loc = if self.sweep.is_some() { path() } else { "geometry".to_string() };
        ScenarioGeometry::new(self.tx, self.rx, ris, layout, self.wavelength)
            .map_err(|e| Error::config(loc, e.to_string()))
    }

    /// Trials at Rician factor `k`.
    pub fn trials_for(&self, k: f64) -> usize {
        self.trials.unwrap_or(if k < 1000.0 { 50 } else { 1 })
    }

    pub fn channel_params(&self, k: f64) -> Result<ChannelParams> {
        ChannelParams::new(k, self.direct_pathloss_exp, self.direct_blocked, self.seed)
    }
}
