//! Benchmark fixtures: full-scale channel draws at a chosen RIS size.

use rishm_core::channels::{ChannelParams, ChannelSet};
use rishm_core::geometry::Layout;
use rishm_core::optimizer::LinkMatrices;
use rishm_core::{RisPhaseProfile, ScenarioGeometry, SurfaceSpec, TransmitCovariance, SPEED_OF_LIGHT};

pub const TX_POWER_W: f64 = 1e-4;
/// -170 dBm/Hz over 20 MHz.
pub const NOISE_POWER_W: f64 = 2e-13;

pub struct Fixture {
    pub channels: ChannelSet,
    pub theta: RisPhaseProfile,
    pub q: TransmitCovariance,
}

impl Fixture {
    /// 8×8 transmit and receive surfaces, `side × side` RIS, D = 15 m, Rician K = 10.
    pub fn new(side: usize) -> Self {
        let lambda = SPEED_OF_LIGHT / 3.5e9;
        let gain = 10f64.powf(0.3);
        let hs = SurfaceSpec::half_wavelength(8, 8, lambda, gain).unwrap();
        let ris = SurfaceSpec::half_wavelength(side, side, lambda, 1.0).unwrap();
        let layout = Layout {
            wall_distance: 15.0,
            ris_offset: 7.5,
            tx_height: 2.0,
            rx_height: 2.0,
        };
        let geom = ScenarioGeometry::new(hs, hs, ris, layout, lambda).unwrap();
        let params = ChannelParams::new(10.0, 3.0, false, 7).unwrap();
        let channels = ChannelSet::generate(&geom, &params, 0, 0).unwrap();
        let theta = RisPhaseProfile::new((0..side * side).map(|n| 0.37 * n as f64).collect());
        let q = TransmitCovariance::isotropic(64, TX_POWER_W).unwrap();
        Self { channels, theta, q }
    }

    pub fn links(&self) -> LinkMatrices<'_> {
        LinkMatrices::new(
            self.channels.h_dir.as_ref(),
            self.channels.h.as_ref(),
            self.channels.g.as_ref(),
        )
        .unwrap()
    }
}
