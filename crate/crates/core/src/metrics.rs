//! Rate, effective rank and the communication-mode fields seen at the RIS.

use faer::MatRef;

use crate::channels::ChannelSet;
use crate::error::{Error, Result};
use crate::linalg::{c64, is_all_zero, singular_values, ZERO};
use crate::optimizer::{objective, LinkMatrices, RisPhaseProfile, TransmitCovariance};
use crate::schemes::water_filling;

/// Singular values below this fraction of the largest are treated as zero.
pub const RANK_FLOOR: f64 = 1e-12;

/// Achievable rate (bits/s/Hz) of the combined channels for the given phases and covariance.
pub fn achievable_rate(
    channels: &ChannelSet,
    theta: &RisPhaseProfile,
    q: &TransmitCovariance,
    noise_power: f64,
) -> Result<f64> {
    let links = LinkMatrices::new(channels.h_dir.as_ref(), channels.h.as_ref(), channels.g.as_ref())?;
    objective(theta, q, links, noise_power)
}

/// Entropy-based effective rank: `exp(−Σ pᵢ ln pᵢ)` with `pᵢ = σᵢ / Σσⱼ`.
pub fn effective_rank(matrix: MatRef<'_, c64>) -> Result<f64> {
    if matrix.nrows() == 0 || matrix.ncols() == 0 || is_all_zero(matrix) {
        return Err(Error::ZeroMatrix("effective rank input"));
    }
    let s = singular_values(matrix)?;
    effective_rank_of(&s)
}

/// Effective rank from a list of singular values.
pub fn effective_rank_of(singular_values: &[f64]) -> Result<f64> {
    let max = singular_values.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 || !max.is_finite() {
        return Err(Error::ZeroMatrix("effective rank input"));
    }
    let kept: Vec<f64> = singular_values
        .iter()
        .copied()
        .filter(|&s| s > RANK_FLOOR * max)
        .collect();
    let total: f64 = kept.iter().sum();
    let entropy: f64 = kept
        .iter()
        .map(|&s| {
            let p = s / total;
            -p * p.ln()
        })
        .sum();
    Ok(entropy.exp())
}

/// One communication mode projected onto the RIS cells.
#[derive(Debug, Clone)]
pub struct ModeField {
    /// Zero-based, ordered by descending singular value.
    pub mode_index: usize,
    pub singular_value: f64,
    /// Water-filled power of the mode (W).
    pub power: f64,
    /// `wᵢ = H·vᵢ·sqrt(Pᵢ)`, one entry per RIS cell.
    pub values: Vec<c64>,
}

impl ModeField {
    pub fn magnitudes(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().map(|w| w.norm())
    }

    /// Phase of each cell in units of π, in `[−1, 1]`.
    pub fn normalized_phases(&self) -> impl Iterator<Item = f64> + '_ {
        self.values
            .iter()
            .map(|w| if *w == ZERO { 0.0 } else { w.arg() / std::f64::consts::PI })
    }
}

/// The `count` strongest modes of `h_eff`, each pushed through `h` (N×L) to the RIS.
pub fn mode_fields(
    h: MatRef<'_, c64>,
    h_eff: MatRef<'_, c64>,
    power_budget: f64,
    noise_power: f64,
    count: usize,
) -> Result<Vec<ModeField>> {
    if h.ncols() != h_eff.ncols() {
        return Err(Error::Dimension(format!(
            "H has {} columns but the effective channel has {}",
            h.ncols(),
            h_eff.ncols()
        )));
    }
    let wf = water_filling(h_eff, power_budget, noise_power)?;
    let available = wf.singular_values.len();
    if count > available {
        return Err(Error::Parameter(format!(
            "requested {count} modes but only {available} exist"
        )));
    }
    Ok((0..count)
        .map(|i| {
            let v = wf.modes.col(i);
            let scale = wf.powers[i].sqrt();
            let values = (0..h.nrows())
                .map(|n| {
                    let mut acc = ZERO;
                    for l in 0..h.ncols() {
                        acc += h[(n, l)] * v[l];
                    }
                    acc * scale
                })
                .collect();
            ModeField {
                mode_index: i,
                singular_value: wf.singular_values[i],
                power: wf.powers[i],
                values,
            }
        })
        .collect())
}
