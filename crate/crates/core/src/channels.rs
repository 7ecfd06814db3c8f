//! Near-field Rician channel matrices.
//!
//! Three links are modelled: transmit surface → RIS (`H`, N×L), RIS → receive surface
//! (`G`, M×N) and the direct link (`H_dir`, M×L). Each LoS entry is a spherical-wave
//! term with amplitude set by the element gain, the RIS cell area and the elevation
//! cosine; the NLoS part keeps the LoS magnitude and replaces the phase with an i.i.d.
//! `CN(0, 1)` draw.
//!
//! Randomness is drawn from one ChaCha stream per (master seed, sweep point, trial,
//! matrix) so trials can run in any order and still reproduce bit-for-bit.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::io::{Read, Write};

use faer::{Mat, MatRef};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::geometry::{exact_distance, ScenarioGeometry, SurfaceKind};
use crate::linalg::{c64, cis, zeros, CMat};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    /// Rician factor `K`; zero is pure Rayleigh.
    pub rician_k: f64,
    /// Path-loss exponent of the direct link.
    pub direct_pathloss_exp: f64,
    pub direct_blocked: bool,
    /// Master seed from which every random stream is derived.
    pub seed: u64,
}

impl ChannelParams {
    pub fn new(rician_k: f64, direct_pathloss_exp: f64, direct_blocked: bool, seed: u64) -> Result<Self> {
        let p = Self {
            rician_k,
            direct_pathloss_exp,
            direct_blocked,
            seed,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rician_k.is_finite() && self.rician_k >= 0.0) {
            return Err(Error::Parameter(format!(
                "Rician factor must be finite and non-negative, got {}",
                self.rician_k
            )));
        }
        if !(self.direct_pathloss_exp.is_finite() && self.direct_pathloss_exp >= 2.0) {
            return Err(Error::Parameter(format!(
                "direct path-loss exponent must be at least 2, got {}",
                self.direct_pathloss_exp
            )));
        }
        Ok(())
    }
}

/// Which quantity a random stream feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum StreamTag {
    TxToRis = 1,
    RisToRx = 2,
    Direct = 3,
    PhaseInit = 4,
}

/// Identifies the random streams of one Monte Carlo trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamKey {
    pub seed: u64,
    pub point: u64,
    pub trial: u64,
}

impl StreamKey {
    pub fn new(seed: u64, point: u64, trial: u64) -> Self {
        Self { seed, point, trial }
    }

    /// Independent generator for `tag`; the same key and tag always give the same stream.
    pub fn rng(&self, tag: StreamTag) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let stream = splitmix64(self.point ^ splitmix64(self.trial ^ splitmix64(tag as u64)));
        rng.set_stream(stream);
        rng
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Amplitude of a reflective-aperture LoS term: `sqrt(G·S/(4π) · cos γ / d²)`.
#[inline]
pub fn aperture_amplitude(gain: f64, area: f64, cos_gamma: f64, distance: f64) -> f64 {
    (gain * area / (4.0 * PI) * cos_gamma / (distance * distance)).sqrt()
}

/// Amplitude of the direct LoS term: `sqrt(G_t·G_r·λ² / ((4π)²·d^α))`.
#[inline]
pub fn direct_amplitude(tx_gain: f64, rx_gain: f64, wavelength: f64, distance: f64, exponent: f64) -> f64 {
    (tx_gain * rx_gain * wavelength * wavelength / ((4.0 * PI).powi(2) * distance.powf(exponent))).sqrt()
}

/// LoS channel from every transmit element to every RIS cell (N×L).
pub fn los_tx_to_ris(geom: &ScenarioGeometry) -> Result<CMat> {
    let tx = geom.element_positions(SurfaceKind::Tx);
    let ris = geom.element_positions(SurfaceKind::Ris);
    let gain = geom.tx().element_gain();
    let area = geom.ris().element_area();
    let k0 = geom.wavenumber();
    for (l, p) in tx.iter().enumerate() {
        if p.z <= 0.0 {
            return Err(Error::BehindRisPlane {
                surface: SurfaceKind::Tx.name(),
                element: l,
                cos_gamma: p.z,
            });
        }
    }
    Ok(Mat::from_fn(ris.len(), tx.len(), |n, l| {
        let d = exact_distance(tx[l], ris[n]);
        let cos_gamma = tx[l].z / d;
        cis(k0 * d) * aperture_amplitude(gain, area, cos_gamma, d)
    }))
}

/// LoS channel from every RIS cell to every receive element (M×N).
pub fn los_ris_to_rx(geom: &ScenarioGeometry) -> Result<CMat> {
    let rx = geom.element_positions(SurfaceKind::Rx);
    let ris = geom.element_positions(SurfaceKind::Ris);
    let gain = geom.rx().element_gain();
    let area = geom.ris().element_area();
    let k0 = geom.wavenumber();
    for (m, p) in rx.iter().enumerate() {
        if p.z <= 0.0 {
            return Err(Error::BehindRisPlane {
                surface: SurfaceKind::Rx.name(),
                element: m,
                cos_gamma: p.z,
            });
        }
    }
    Ok(Mat::from_fn(rx.len(), ris.len(), |m, n| {
        let d = exact_distance(rx[m], ris[n]);
        let cos_gamma = rx[m].z / d;
        cis(k0 * d) * aperture_amplitude(gain, area, cos_gamma, d)
    }))
}

/// LoS direct channel (M×L); all zeros when the direct link is blocked.
pub fn los_direct(geom: &ScenarioGeometry, params: &ChannelParams) -> CMat {
    let tx = geom.element_positions(SurfaceKind::Tx);
    let rx = geom.element_positions(SurfaceKind::Rx);
    if params.direct_blocked {
        return zeros(rx.len(), tx.len());
    }
    let (gt, gr) = (geom.tx().element_gain(), geom.rx().element_gain());
    let lambda = geom.wavelength();
    let k0 = geom.wavenumber();
    Mat::from_fn(rx.len(), tx.len(), |m, l| {
        let d = exact_distance(tx[l], rx[m]);
        cis(k0 * d) * direct_amplitude(gt, gr, lambda, d, params.direct_pathloss_exp)
    })
}

/// `CN(0, 1)` sample: `(a + jb)/√2` with `a, b` standard normal.
pub fn standard_complex_normal<R: Rng + ?Sized>(rng: &mut R) -> c64 {
    let a: f64 = rng.sample(StandardNormal);
    let b: f64 = rng.sample(StandardNormal);
    c64::new(a * FRAC_1_SQRT_2, b * FRAC_1_SQRT_2)
}

/// NLoS component: LoS magnitude times an i.i.d. `CN(0, 1)` draw per entry.
///
/// Entries are drawn in column-major order.
pub fn draw_nlos<R: Rng + ?Sized>(los: MatRef<'_, c64>, rng: &mut R) -> CMat {
    let mut out = zeros(los.nrows(), los.ncols());
    for j in 0..los.ncols() {
        for i in 0..los.nrows() {
            out[(i, j)] = standard_complex_normal(rng) * los[(i, j)].norm();
        }
    }
    out
}

/// `sqrt(K/(K+1))·los + sqrt(1/(K+1))·nlos`.
pub fn assemble_rician(los: MatRef<'_, c64>, nlos: MatRef<'_, c64>, rician_k: f64) -> Result<CMat> {
    if los.nrows() != nlos.nrows() || los.ncols() != nlos.ncols() {
        return Err(Error::Dimension(format!(
            "LoS is {}×{} but NLoS is {}×{}",
            los.nrows(),
            los.ncols(),
            nlos.nrows(),
            nlos.ncols()
        )));
    }
    if !(rician_k.is_finite() && rician_k >= 0.0) {
        return Err(Error::Parameter(format!("invalid Rician factor {rician_k}")));
    }
    let a = (rician_k / (rician_k + 1.0)).sqrt();
    let b = (1.0 / (rician_k + 1.0)).sqrt();
    Ok(Mat::from_fn(los.nrows(), los.ncols(), |i, j| los[(i, j)] * a + nlos[(i, j)] * b))
}

/// The deterministic LoS parts of all three links for one geometry.
#[derive(Debug, Clone)]
pub struct LosChannels {
    pub h: CMat,
    pub g: CMat,
    pub h_dir: CMat,
}

impl LosChannels {
    pub fn compute(geom: &ScenarioGeometry, params: &ChannelParams) -> Result<Self> {
        Ok(Self {
            h: los_tx_to_ris(geom)?,
            g: los_ris_to_rx(geom)?,
            h_dir: los_direct(geom, params),
        })
    }
}

/// Channel realisation of one trial: Rician-combined matrices plus their LoS parts.
#[derive(Debug, Clone)]
pub struct ChannelSet {
    /// Transmit surface → RIS, N×L.
    pub h: CMat,
    /// RIS → receive surface, M×N.
    pub g: CMat,
    /// Direct link, M×L.
    pub h_dir: CMat,
    pub h_los: CMat,
    pub g_los: CMat,
    pub h_dir_los: CMat,
}

impl ChannelSet {
    /// Draws the channels of trial `key` on top of precomputed LoS parts.
    pub fn from_los(los: &LosChannels, params: &ChannelParams, key: StreamKey) -> Result<Self> {
        params.validate()?;
        let k = params.rician_k;
        let h = assemble_rician(
            los.h.as_ref(),
            draw_nlos(los.h.as_ref(), &mut key.rng(StreamTag::TxToRis)).as_ref(),
            k,
        )?;
        let g = assemble_rician(
            los.g.as_ref(),
            draw_nlos(los.g.as_ref(), &mut key.rng(StreamTag::RisToRx)).as_ref(),
            k,
        )?;
        let h_dir = if params.direct_blocked {
            zeros(los.h_dir.nrows(), los.h_dir.ncols())
        } else {
            assemble_rician(
                los.h_dir.as_ref(),
                draw_nlos(los.h_dir.as_ref(), &mut key.rng(StreamTag::Direct)).as_ref(),
                k,
            )?
        };
        Ok(Self {
            h,
            g,
            h_dir,
            h_los: los.h.clone(),
            g_los: los.g.clone(),
            h_dir_los: los.h_dir.clone(),
        })
    }

    /// Channels of trial `trial` at sweep point `point`, seeded from `params.seed`.
    pub fn generate(geom: &ScenarioGeometry, params: &ChannelParams, point: u64, trial: u64) -> Result<Self> {
        let los = LosChannels::compute(geom, params)?;
        Self::from_los(&los, params, StreamKey::new(params.seed, point, trial))
    }

    /// Deterministic set whose combined matrices equal the LoS parts (the `K → ∞` limit).
    pub fn los_only(los: &LosChannels) -> Self {
        Self {
            h: los.h.clone(),
            g: los.g.clone(),
            h_dir: los.h_dir.clone(),
            h_los: los.h.clone(),
            g_los: los.g.clone(),
            h_dir_los: los.h_dir.clone(),
        }
    }

    pub fn tx_elements(&self) -> usize {
        self.h.ncols()
    }

    pub fn rx_elements(&self) -> usize {
        self.g.nrows()
    }

    pub fn ris_cells(&self) -> usize {
        self.h.nrows()
    }

    fn named(&self) -> [(&'static str, &CMat); 6] {
        [
            ("h", &self.h),
            ("g", &self.g),
            ("h_dir", &self.h_dir),
            ("h_los", &self.h_los),
            ("g_los", &self.g_los),
            ("h_dir_los", &self.h_dir_los),
        ]
    }

    /// Writes all six matrices in the binary dump format (see [`write_dump`]).
    pub fn write_dump<W: Write>(&self, w: W) -> Result<()> {
        let named = self.named();
        let refs: Vec<(&str, MatRef<'_, c64>)> = named.iter().map(|(n, m)| (*n, m.as_ref())).collect();
        write_dump(w, &refs)
    }

    pub fn read_dump<R: Read>(r: R) -> Result<Self> {
        let mut mats = read_dump(r)?;
        let mut take = |name: &str| -> Result<CMat> {
            let pos = mats
                .iter()
                .position(|(n, _)| n == name)
                .ok_or_else(|| Error::Parameter(format!("channel dump lacks matrix `{name}`")))?;
            Ok(mats.swap_remove(pos).1)
        };
        let set = Self {
            h: take("h")?,
            g: take("g")?,
            h_dir: take("h_dir")?,
            h_los: take("h_los")?,
            g_los: take("g_los")?,
            h_dir_los: take("h_dir_los")?,
        };
        let (n, l, m) = (set.h.nrows(), set.h.ncols(), set.g.nrows());
        if set.g.ncols() != n || set.h_dir.nrows() != m || set.h_dir.ncols() != l {
            return Err(Error::Dimension("inconsistent matrix shapes in channel dump".into()));
        }
        Ok(set)
    }
}

const DUMP_MAGIC: &[u8; 8] = b"RISCHAN1";

/// Binary dump of named complex matrices.
///
/// Layout, all integers and floats little-endian:
///
/// ```text
/// magic      8 bytes  "RISCHAN1"
/// count      u32      number of matrices
/// per matrix:
///   name_len u32, name (UTF-8, name_len bytes)
///   rows     u64, cols u64
///   data     rows·cols pairs of f64 (re, im), row-major
/// ```
pub fn write_dump<W: Write>(mut w: W, mats: &[(&str, MatRef<'_, c64>)]) -> Result<()> {
    w.write_all(DUMP_MAGIC)?;
    w.write_all(&(mats.len() as u32).to_le_bytes())?;
    for (name, m) in mats {
        w.write_all(&(name.len() as u32).to_le_bytes())?;
        w.write_all(name.as_bytes())?;
        w.write_all(&(m.nrows() as u64).to_le_bytes())?;
        w.write_all(&(m.ncols() as u64).to_le_bytes())?;
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                w.write_all(&z.re.to_le_bytes())?;
                w.write_all(&z.im.to_le_bytes())?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_dump<R: Read>(mut r: R) -> Result<Vec<(String, CMat)>> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != DUMP_MAGIC {
        return Err(Error::Parameter("not a channel dump (bad magic)".into()));
    }
    let count = read_u32(&mut r)?;
    let mut out = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let len = read_u32(&mut r)? as usize;
        let mut name = vec![0u8; len];
        r.read_exact(&mut name)?;
        let name = String::from_utf8(name)
            .map_err(|_| Error::Parameter("matrix name is not UTF-8".into()))?;
        let rows = read_u64(&mut r)? as usize;
        let cols = read_u64(&mut r)? as usize;
        let mut m = zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = c64::new(read_f64(&mut r)?, read_f64(&mut r)?);
            }
        }
        out.push((name, m));
    }
    Ok(out)
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}
