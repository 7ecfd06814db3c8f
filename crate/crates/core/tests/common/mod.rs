//! Independent oracles shared by the integration tests and the acceptance suite.
#![allow(dead_code)]

use faer::{Mat, MatRef};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rishm_core::linalg::{cascade, hermitian_eigen, hermitian_part, identity, product, reassemble, trace, zeros};
use rishm_core::optimizer::{optimize_covariance, rate_for_channel, LinkMatrices};
use rishm_core::schemes::water_filling;
use rishm_core::{c64, CMat, PgmSettings, TransmitCovariance};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, scale: f64) -> CMat {
    Mat::from_fn(rows, cols, |_, _| {
        c64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * scale
    })
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    let a = random_matrix(rng, n, n, 1.0);
    hermitian_part(a.as_ref())
}

/// Random PSD matrix with trace `t`.
pub fn random_psd_with_trace(rng: &mut ChaCha8Rng, n: usize, t: f64) -> CMat {
    let rank = rng.random_range(1..=n);
    let a = random_matrix(rng, n, rank, 1.0);
    let q = product(a.as_ref(), a.adjoint());
    let tr = trace(q.as_ref()).re;
    hermitian_part(Mat::from_fn(n, n, |i, j| q[(i, j)] * (t / tr)).as_ref())
}

pub fn frob_diff(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> f64 {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] - b[(i, j)]).norm_l2()
}

/// A random instance of the parametric objective.
pub struct Instance {
    pub f1: CMat,
    pub f2: CMat,
    pub f3: CMat,
    pub coeffs: Vec<c64>,
    pub q: CMat,
    pub noise: f64,
}

impl Instance {
    pub fn random(rng: &mut ChaCha8Rng, max_dim: usize) -> Self {
        let m = rng.random_range(1..=max_dim);
        let l = rng.random_range(1..=max_dim);
        let n = rng.random_range(1..=max_dim);
        let coeffs = (0..n)
            .map(|_| {
                let p: f64 = rng.random_range(-3.1..3.1);
                c64::new(p.cos(), p.sin())
            })
            .collect();
        Self {
            f1: random_matrix(rng, m, l, 1.0),
            f2: random_matrix(rng, n, l, 1.0),
            f3: random_matrix(rng, m, n, 1.0),
            coeffs,
            q: {
                let t = rng.random_range(0.5..2.0);
                random_psd_with_trace(rng, l, t)
            },
            noise: rng.random_range(0.2..2.0),
        }
    }

    pub fn links(&self) -> LinkMatrices<'_> {
        LinkMatrices::new(self.f1.as_ref(), self.f2.as_ref(), self.f3.as_ref()).unwrap()
    }

    /// Objective at arbitrary (not necessarily unit-modulus) coefficients and any `Q`
    /// that keeps `σ²I + ZQZᴴ` positive definite.
    pub fn value(&self, coeffs: &[c64], q: MatRef<'_, c64>) -> f64 {
        let z = cascade(self.f1.as_ref(), self.f2.as_ref(), self.f3.as_ref(), coeffs);
        let m = z.nrows();
        // Direct log-det through eigenvalues, independent of the Cholesky path.
        let zq = product(z.as_ref(), q);
        let k = product(zq.as_ref(), z.adjoint());
        let mut a = identity(m);
        for j in 0..m {
            for i in 0..m {
                a[(i, j)] += k[(i, j)] / self.noise;
            }
        }
        let (eig, _) = hermitian_eigen(hermitian_part(a.as_ref()).as_ref()).unwrap();
        eig.iter().map(|x| x.log2()).sum()
    }
}

/// Relative error of the analytic gradients against central differences:
/// `(theta_error, q_error)`.
///
/// The Wirtinger gradient `g = ∂f/∂v*` gives `∂f/∂Re v = 2 Re g` and `∂f/∂Im v = 2 Im g`;
/// the covariance gradient gives the directional derivative `Re tr(∇Q·Δ)`.
pub fn gradient_errors(inst: &Instance, rng: &mut ChaCha8Rng) -> (f64, f64) {
    let theta = rishm_core::optimizer::project_theta(&inst.coeffs);
    let q_budget = trace(inst.q.as_ref()).re * 1.5;
    let q = TransmitCovariance::new(inst.q.clone(), q_budget).unwrap();
    let g = rishm_core::optimizer::grad_theta(&theta, &q, inst.links(), inst.noise).unwrap();
    let coeffs = theta.coefficients();
    let h = 1e-6;

    let mut num = 0.0;
    let mut den = 0.0;
    for n in 0..coeffs.len() {
        for dir in [c64::new(1.0, 0.0), c64::new(0.0, 1.0)] {
            let mut plus = coeffs.clone();
            let mut minus = coeffs.clone();
            plus[n] += dir * h;
            minus[n] -= dir * h;
            let fd = (inst.value(&plus, inst.q.as_ref()) - inst.value(&minus, inst.q.as_ref())) / (2.0 * h);
            let analytic = if dir.re == 1.0 { 2.0 * g[n].re } else { 2.0 * g[n].im };
            num += (fd - analytic).powi(2);
            den += analytic.powi(2);
        }
    }
    let theta_err = if den == 0.0 { num.sqrt() } else { (num / den).sqrt() };

    let gq = rishm_core::optimizer::grad_q(&theta, &q, inst.links(), inst.noise).unwrap();
    let delta = random_hermitian(rng, inst.q.nrows());
    let eps = 1e-6;
    let shifted = |s: f64| Mat::from_fn(inst.q.nrows(), inst.q.ncols(), |i, j| inst.q[(i, j)] + delta[(i, j)] * s);
    let fd = (inst.value(&coeffs, shifted(eps).as_ref()) - inst.value(&coeffs, shifted(-eps).as_ref())) / (2.0 * eps);
    let analytic = trace(product(gq.as_ref(), delta.as_ref()).as_ref()).re;
    let q_err = (fd - analytic).abs() / analytic.abs().max(1e-300);
    (theta_err, q_err)
}

/// Dykstra's alternating projections onto `{Q ⪰ 0}` and `{tr Q ≤ P}` within the
/// Hermitian matrices; converges to the Frobenius projection onto their intersection.
pub fn dykstra_projection(raw: MatRef<'_, c64>, budget: f64) -> CMat {
    let n = raw.nrows();
    let mut x = hermitian_part(raw);
    let mut p = zeros(n, n);
    let mut q = zeros(n, n);
    for _ in 0..200_000 {
        // PSD cone.
        let y_in = Mat::from_fn(n, n, |i, j| x[(i, j)] + p[(i, j)]);
        let (eig, vecs) = hermitian_eigen(y_in.as_ref()).unwrap();
        let clipped: Vec<f64> = eig.iter().map(|&e| e.max(0.0)).collect();
        let y = reassemble(vecs.as_ref(), &clipped);
        p = Mat::from_fn(n, n, |i, j| y_in[(i, j)] - y[(i, j)]);
        // Trace half-space.
        let z_in = Mat::from_fn(n, n, |i, j| y[(i, j)] + q[(i, j)]);
        let excess = (trace(z_in.as_ref()).re - budget).max(0.0) / n as f64;
        let mut z = z_in.clone();
        for i in 0..n {
            z[(i, i)] -= c64::new(excess, 0.0);
        }
        q = Mat::from_fn(n, n, |i, j| z_in[(i, j)] - z[(i, j)]);
        let change = frob_diff(z.as_ref(), x.as_ref());
        x = z;
        if change < 1e-15 {
            break;
        }
    }
    x
}

/// Water-filling checks on one channel: `(min margin over random covariances,
/// relative gap to PGM over Q only)`.
pub fn water_filling_margins(rng: &mut ChaCha8Rng, h: MatRef<'_, c64>, budget: f64, noise: f64) -> (f64, f64) {
    let wf = water_filling(h, budget, noise).unwrap();
    let wf_rate = rate_for_channel(h, wf.covariance.matrix().as_ref(), noise).unwrap();
    let mut margin = f64::INFINITY;
    for _ in 0..100 {
        let t = budget * rng.random_range(0.01..=1.0);
        let q = random_psd_with_trace(rng, h.ncols(), t);
        let r = rate_for_channel(h, q.as_ref(), noise).unwrap();
        margin = margin.min(wf_rate - r);
    }
    let settings = PgmSettings::new(budget, noise);
    let init = TransmitCovariance::isotropic(h.ncols(), budget).unwrap();
    let pgm = optimize_covariance(h, &settings, &init).unwrap();
    let gap = (wf_rate - pgm.objective).abs() / wf_rate;
    (margin, gap)
}

pub const TX_POWER_W: f64 = 1e-4;

/// `N₀·BW` for -170 dBm/Hz over 20 MHz.
pub fn noise_power() -> f64 {
    1e-3 * 10f64.powf(-17.0) * 20e6
}

pub fn wavelength() -> f64 {
    rishm_core::SPEED_OF_LIGHT / 3.5e9
}

/// 8×8 transmit/receive surfaces at 2 m height, 3 dBi elements, `side × side` RIS.
pub fn reference_geometry(side: usize, wall: f64, offset: f64) -> rishm_core::ScenarioGeometry {
    use rishm_core::geometry::Layout;
    use rishm_core::SurfaceSpec;
    let lambda = wavelength();
    let gain = 10f64.powf(0.3);
    let hs = SurfaceSpec::half_wavelength(8, 8, lambda, gain).unwrap();
    let ris = SurfaceSpec::half_wavelength(side, side, lambda, 1.0).unwrap();
    let layout = Layout {
        wall_distance: wall,
        ris_offset: offset,
        tx_height: 2.0,
        rx_height: 2.0,
    };
    rishm_core::ScenarioGeometry::new(hs, hs, ris, layout, lambda).unwrap()
}

pub fn reference_settings() -> PgmSettings {
    PgmSettings::new(TX_POWER_W, noise_power())
}
