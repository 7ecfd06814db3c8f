//! The four RIS configuration strategies and the water-filling covariance step.
//!
//! | scheme          | RIS phases from                           | covariance            |
//! |-----------------|-------------------------------------------|-----------------------|
//! | `PerfectCsi`    | PGM on the true Rician channels           | PGM (joint)           |
//! | `LosCsi`        | PGM on the LoS components only            | water-filling on `H̃` |
//! | `LocationFocus` | near-field focusing from surface centres  | water-filling on `H̃` |
//! | `FarField`      | linearised (anomalous-reflection) phases  | water-filling on `H̃` |
//!
//! Whatever CSI a scheme uses, its rate is always evaluated on the true combined channels.

use std::fmt;
use std::str::FromStr;

use faer::MatRef;

use crate::channels::ChannelSet;
use crate::error::{Error, Result};
use crate::geometry::ScenarioGeometry;
use crate::linalg::{c64, is_all_zero, reassemble, right_singular, CMat};
use crate::optimizer::{
    pgm_solve, rate_for_channel, wrap_phase, LinkMatrices, PgmSettings, PgmStatus, PgmTrace,
    RisPhaseProfile, TransmitCovariance,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchemeId {
    PerfectCsi,
    LosCsi,
    LocationFocus,
    FarField,
}

impl SchemeId {
    pub const ALL: [SchemeId; 4] = [
        SchemeId::PerfectCsi,
        SchemeId::LosCsi,
        SchemeId::LocationFocus,
        SchemeId::FarField,
    ];

    /// Stable identifier used in configs and CSV output.
    pub fn as_str(self) -> &'static str {
        match self {
            SchemeId::PerfectCsi => "perfect_csi",
            SchemeId::LosCsi => "los_csi",
            SchemeId::LocationFocus => "location_focus",
            SchemeId::FarField => "far_field",
        }
    }

    /// Whether the scheme runs the projected gradient method.
    pub fn uses_optimizer(self) -> bool {
        matches!(self, SchemeId::PerfectCsi | SchemeId::LosCsi)
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| {
                Error::Parameter(format!(
                    "unknown scheme `{s}` (expected one of perfect_csi, los_csi, location_focus, far_field)"
                ))
            })
    }
}

/// Result of configuring the link with one scheme.
#[derive(Debug, Clone)]
pub struct SchemeOutcome {
    pub scheme: SchemeId,
    pub theta: RisPhaseProfile,
    pub q: TransmitCovariance,
    /// End-to-end channel `H̃ = H_dir + G·diag(e^{jθ})·H` on the combined channels (M×L).
    pub end_to_end: CMat,
    /// Achievable rate on the combined channels, bits/s/Hz.
    pub rate: f64,
    /// `IterationCap` only when a PGM run hit its iteration limit; closed-form schemes
    /// always report `Converged`.
    pub status: PgmStatus,
    /// Optimiser trace of the PGM stage, if the scheme ran one.
    pub trace: Option<PgmTrace>,
}

/// Water-filling over the eigenmodes of an effective channel.
#[derive(Debug, Clone)]
pub struct WaterFilling {
    /// Right-singular vectors, one column per mode (L×min(M, L)).
    pub modes: CMat,
    /// Singular values, non-increasing.
    pub singular_values: Vec<f64>,
    /// Power per mode, aligned with `singular_values`.
    pub powers: Vec<f64>,
    /// Water level `μ`.
    pub level: f64,
    pub covariance: TransmitCovariance,
}

/// Water-filling powers for channel gains `λ_k²` given as singular values.
///
/// Returns `(powers, μ)` with `P_k = max(μ − σ²/λ_k², 0)` and `Σ P_k = P_T`. The level is
/// found exactly: with the gains sorted, try the `k` strongest modes active and keep the
/// largest `k` for which the weakest active mode still gets positive power.
pub fn water_levels(singular_values: &[f64], power_budget: f64, noise_power: f64) -> Result<(Vec<f64>, f64)> {
    if !(power_budget.is_finite() && power_budget > 0.0) {
        return Err(Error::Parameter(format!("power budget must be positive, got {power_budget}")));
    }
    if !(noise_power.is_finite() && noise_power > 0.0) {
        return Err(Error::Parameter(format!("noise power must be positive, got {noise_power}")));
    }
    let mut order: Vec<usize> = (0..singular_values.len())
        .filter(|&k| singular_values[k] > 0.0)
        .collect();
    if order.is_empty() {
        return Err(Error::ZeroMatrix("water-filling channel"));
    }
    order.sort_by(|&a, &b| singular_values[b].total_cmp(&singular_values[a]));
    let floor: Vec<f64> = order
        .iter()
        .map(|&k| noise_power / (singular_values[k] * singular_values[k]))
        .collect();

    let mut level = power_budget + floor[0];
    let mut sum = 0.0;
    for (k, &f) in floor.iter().enumerate() {
        sum += f;
        let mu = (power_budget + sum) / (k + 1) as f64;
        if mu > f {
            level = mu;
        } else {
            break;
        }
    }
    let mut powers = vec![0.0; singular_values.len()];
    for (&k, &f) in order.iter().zip(&floor) {
        powers[k] = (level - f).max(0.0);
    }
    // Remove the roundoff so the budget is met to machine precision.
    let total: f64 = powers.iter().sum();
    for p in &mut powers {
        *p *= power_budget / total;
    }
    Ok((powers, level))
}

/// Capacity-achieving covariance `Q = V·diag(P_k)·Vᴴ` for a fixed channel.
pub fn water_filling(h_eff: MatRef<'_, c64>, power_budget: f64, noise_power: f64) -> Result<WaterFilling> {
    if h_eff.nrows() == 0 || h_eff.ncols() == 0 || is_all_zero(h_eff) {
        return Err(Error::ZeroMatrix("water-filling channel"));
    }
    let (singular_values, modes) = right_singular(h_eff)?;
    let (powers, level) = water_levels(&singular_values, power_budget, noise_power)?;
    let q = reassemble(modes.as_ref(), &powers);
    let covariance = TransmitCovariance::new(q, power_budget)?;
    Ok(WaterFilling {
        modes,
        singular_values,
        powers,
        level,
        covariance,
    })
}

fn combined_links(channels: &ChannelSet) -> Result<LinkMatrices<'_>> {
    LinkMatrices::new(channels.h_dir.as_ref(), channels.h.as_ref(), channels.g.as_ref())
}

fn los_links(channels: &ChannelSet) -> Result<LinkMatrices<'_>> {
    LinkMatrices::new(
        channels.h_dir_los.as_ref(),
        channels.h_los.as_ref(),
        channels.g_los.as_ref(),
    )
}

/// Water-fills on the true end-to-end channel for fixed phases.
fn finish_with_water_filling(
    scheme: SchemeId,
    channels: &ChannelSet,
    theta: RisPhaseProfile,
    power_budget: f64,
    noise_power: f64,
    status: PgmStatus,
    trace: Option<PgmTrace>,
) -> Result<SchemeOutcome> {
    let end_to_end = combined_links(channels)?.effective_channel(&theta)?;
    let wf = water_filling(end_to_end.as_ref(), power_budget, noise_power)?;
    let rate = rate_for_channel(end_to_end.as_ref(), wf.covariance.matrix().as_ref(), noise_power)?;
    Ok(SchemeOutcome {
        scheme,
        theta,
        q: wf.covariance,
        end_to_end,
        rate,
        status,
        trace,
    })
}

/// Scheme 1: joint PGM over phases and covariance on the true channels.
pub fn scheme_perfect_csi(
    channels: &ChannelSet,
    settings: &PgmSettings,
    init_theta: &RisPhaseProfile,
) -> Result<SchemeOutcome> {
    let links = combined_links(channels)?;
    let init_q = TransmitCovariance::isotropic(links.tx_dim(), settings.power_budget)?;
    let sol = pgm_solve(links, settings, init_theta, &init_q)?;
    let end_to_end = links.effective_channel(&sol.theta)?;
    let rate = rate_for_channel(end_to_end.as_ref(), sol.q.matrix().as_ref(), settings.noise_power)?;
    Ok(SchemeOutcome {
        scheme: SchemeId::PerfectCsi,
        theta: sol.theta,
        q: sol.q,
        end_to_end,
        rate,
        status: sol.status,
        trace: Some(sol.trace),
    })
}

/// Scheme 2: phases from PGM on the LoS components; the optimiser's covariance is
/// dropped and replaced by water-filling on the true end-to-end channel.
pub fn scheme_los_csi(
    channels: &ChannelSet,
    settings: &PgmSettings,
    init_theta: &RisPhaseProfile,
) -> Result<SchemeOutcome> {
    let links = los_links(channels)?;
    let init_q = TransmitCovariance::isotropic(links.tx_dim(), settings.power_budget)?;
    let sol = pgm_solve(links, settings, init_theta, &init_q)?;
    finish_with_water_filling(
        SchemeId::LosCsi,
        channels,
        sol.theta,
        settings.power_budget,
        settings.noise_power,
        sol.status,
        Some(sol.trace),
    )
}

/// Near-field focusing phases `θ(n) = k₀(d_dir − d₁ᶠᵒᶜᵘˢ(n) − d₂ᶠᵒᶜᵘˢ(n))`, wrapped.
pub fn focus_phases(geom: &ScenarioGeometry) -> Result<RisPhaseProfile> {
    phases_from(geom, |n| geom.focus_distances(n))
}

/// Far-field (linear gradient) phases built from the first-order distance expansion.
pub fn farfield_phases(geom: &ScenarioGeometry) -> Result<RisPhaseProfile> {
    phases_from(geom, |n| geom.farfield_distances(n))
}

fn phases_from(
    geom: &ScenarioGeometry,
    distances: impl Fn(usize) -> Result<(f64, f64)>,
) -> Result<RisPhaseProfile> {
    let k0 = geom.wavenumber();
    let d_dir = geom.direct_distance();
    let phases = (0..geom.ris().len())
        .map(|n| {
            let (d1, d2) = distances(n)?;
            Ok(wrap_phase(k0 * (d_dir - d1 - d2)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RisPhaseProfile::new(phases))
}

/// Scheme 3: phases from the surface positions only, then water-filling.
pub fn scheme_location_focus(
    geom: &ScenarioGeometry,
    channels: &ChannelSet,
    power_budget: f64,
    noise_power: f64,
) -> Result<SchemeOutcome> {
    let theta = focus_phases(geom)?;
    finish_with_water_filling(
        SchemeId::LocationFocus,
        channels,
        theta,
        power_budget,
        noise_power,
        PgmStatus::Converged,
        None,
    )
}

/// Scheme 4: far-field approximation of Scheme 3.
pub fn scheme_far_field(
    geom: &ScenarioGeometry,
    channels: &ChannelSet,
    power_budget: f64,
    noise_power: f64,
) -> Result<SchemeOutcome> {
    let theta = farfield_phases(geom)?;
    finish_with_water_filling(
        SchemeId::FarField,
        channels,
        theta,
        power_budget,
        noise_power,
        PgmStatus::Converged,
        None,
    )
}

/// Dispatches to the scheme named by `id`. `init_theta` seeds the optimiser and is
/// ignored by the closed-form schemes.
pub fn run_scheme(
    id: SchemeId,
    geom: &ScenarioGeometry,
    channels: &ChannelSet,
    settings: &PgmSettings,
    init_theta: &RisPhaseProfile,
) -> Result<SchemeOutcome> {
    match id {
        SchemeId::PerfectCsi => scheme_perfect_csi(channels, settings, init_theta),
        SchemeId::LosCsi => scheme_los_csi(channels, settings, init_theta),
        SchemeId::LocationFocus => {
            scheme_location_focus(geom, channels, settings.power_budget, settings.noise_power)
        }
        SchemeId::FarField => scheme_far_field(geom, channels, settings.power_budget, settings.noise_power),
    }
}
