//! Rate maximisation over RIS phases and transmit covariance.
//!
//! The objective is `f(θ, Q) = log₂ det(I + Z·Q·Zᴴ/σ²)` with the cascaded channel
//! `Z = F₁ + F₃·diag(e^{jθ})·F₂`. [`pgm_solve`] alternates a projected gradient step on
//! the reflection coefficients with one on `Q`, each with its own backtracked step size.
//!
//! Internally the solver works in normalised units (`σ² = 1`, `P_T = 1`): `F₁` and `F₃`
//! are scaled by `sqrt(P_T)/σ` and `Q` by `1/P_T`. The objective is unchanged by this, and
//! the step-size defaults in [`PgmSettings`] are therefore independent of the link budget.

use std::f64::consts::{LOG2_E, PI};
use std::fmt::Write as _;

use faer::{Accum, Mat, MatRef};
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    self, c64, cascade, cis, gemm, hermitian_eigen, hermitian_part, product,
    reassemble, relative_asymmetry, solve_hpd, CMat, ZERO,
};

/// Wraps an angle into `[−π, π]`.
pub fn wrap_phase(phase: f64) -> f64 {
    let w = phase - 2.0 * PI * (phase / (2.0 * PI)).round();
    w.clamp(-PI, PI)
}

/// RIS phase shifts, one per unit cell, each in `[−π, π]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RisPhaseProfile {
    phases: Vec<f64>,
}

impl RisPhaseProfile {
    /// Wraps every phase into `[−π, π]`.
    pub fn new(phases: Vec<f64>) -> Self {
        Self {
            phases: phases.into_iter().map(wrap_phase).collect(),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self { phases: vec![0.0; n] }
    }

    /// I.i.d. uniform phases on `[−π, π]`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self {
            phases: (0..n).map(|_| rng.random_range(-PI..=PI)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// Unit-modulus reflection coefficients `e^{jθ_n}`.
    pub fn coefficients(&self) -> Vec<c64> {
        self.phases.iter().map(|&p| cis(p)).collect()
    }
}

/// Radial projection onto the unit circle; zero maps to `1`.
pub fn project_theta(raw: &[c64]) -> RisPhaseProfile {
    RisPhaseProfile {
        phases: raw
            .iter()
            .map(|z| if *z == ZERO { 0.0 } else { z.arg() })
            .collect(),
    }
}

const HERMITIAN_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-9;

/// Hermitian PSD transmit covariance with `tr(Q) ≤ P_T`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmitCovariance {
    q: CMat,
    power_budget: f64,
}

impl TransmitCovariance {
    /// Checks the Hermitian, PSD and trace constraints before accepting `q`.
    pub fn new(q: CMat, power_budget: f64) -> Result<Self> {
        check_budget(power_budget)?;
        if q.nrows() != q.ncols() {
            return Err(Error::Dimension(format!(
                "covariance must be square, got {}×{}",
                q.nrows(),
                q.ncols()
            )));
        }
        let asym = relative_asymmetry(q.as_ref());
        if asym > HERMITIAN_TOL {
            return Err(Error::Parameter(format!(
                "covariance is not Hermitian (relative asymmetry {asym:e})"
            )));
        }
        let tr = linalg::trace(q.as_ref()).re;
        if tr > power_budget * (1.0 + TRACE_TOL) {
            return Err(Error::Parameter(format!(
                "covariance trace {tr:e} exceeds the power budget {power_budget:e}"
            )));
        }
        if q.nrows() > 0 {
            let (eig, _) = hermitian_eigen(hermitian_part(q.as_ref()).as_ref())?;
            if eig[0] < -PSD_TOL * tr.abs().max(f64::MIN_POSITIVE) {
                return Err(Error::Parameter(format!(
                    "covariance is not PSD (min eigenvalue {:e})",
                    eig[0]
                )));
            }
        }
        Ok(Self { q, power_budget })
    }

    /// `(P_T/L)·I`.
    pub fn isotropic(dim: usize, power_budget: f64) -> Result<Self> {
        check_budget(power_budget)?;
        let mut q = linalg::zeros(dim, dim);
        for i in 0..dim {
            q[(i, i)] = c64::new(power_budget / dim as f64, 0.0);
        }
        Ok(Self { q, power_budget })
    }

    pub fn zero(dim: usize, power_budget: f64) -> Result<Self> {
        check_budget(power_budget)?;
        Ok(Self {
            q: linalg::zeros(dim, dim),
            power_budget,
        })
    }

    pub fn matrix(&self) -> &CMat {
        &self.q
    }

    pub fn into_matrix(self) -> CMat {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.q.nrows()
    }

    pub fn power_budget(&self) -> f64 {
        self.power_budget
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(self.q.as_ref()).re
    }
}

fn check_budget(power_budget: f64) -> Result<()> {
    if power_budget.is_finite() && power_budget > 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "power budget must be positive, got {power_budget}"
        )))
    }
}

/// Euclidean projection of `values` onto `{x ≥ 0, Σx ≤ budget}`.
pub fn project_capped_simplex(values: &[f64], budget: f64) -> Vec<f64> {
    let clipped_sum: f64 = values.iter().map(|v| v.max(0.0)).sum();
    if clipped_sum <= budget {
        return values.iter().map(|v| v.max(0.0)).collect();
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut prefix = 0.0;
    let mut shift = 0.0;
    for (k, &v) in sorted.iter().enumerate() {
        prefix += v;
        let candidate = (prefix - budget) / (k + 1) as f64;
        if v > candidate {
            shift = candidate;
        } else {
            break;
        }
    }
    values.iter().map(|v| (v - shift).max(0.0)).collect()
}

/// Frobenius projection onto `{Q = Qᴴ, Q ⪰ 0, tr(Q) ≤ P_T}`.
pub fn project_q(raw: MatRef<'_, c64>, power_budget: f64) -> Result<TransmitCovariance> {
    check_budget(power_budget)?;
    if raw.nrows() != raw.ncols() {
        return Err(Error::Dimension(format!(
            "covariance must be square, got {}×{}",
            raw.nrows(),
            raw.ncols()
        )));
    }
    let sym = hermitian_part(raw);
    let (eig, vecs) = hermitian_eigen(sym.as_ref())?;
    let projected = project_capped_simplex(&eig, power_budget);
    Ok(TransmitCovariance {
        q: reassemble(vecs.as_ref(), &projected),
        power_budget,
    })
}

/// The three channel matrices of the parametric objective, with checked shapes.
#[derive(Debug, Clone, Copy)]
pub struct LinkMatrices<'a> {
    pub f1: MatRef<'a, c64>,
    pub f2: MatRef<'a, c64>,
    pub f3: MatRef<'a, c64>,
}

impl<'a> LinkMatrices<'a> {
    /// `f1` is M×L, `f2` is N×L and `f3` is M×N.
    pub fn new(f1: MatRef<'a, c64>, f2: MatRef<'a, c64>, f3: MatRef<'a, c64>) -> Result<Self> {
        let (m, l) = (f1.nrows(), f1.ncols());
        let n = f2.nrows();
        if f2.ncols() != l || f3.nrows() != m || f3.ncols() != n {
            return Err(Error::Dimension(format!(
                "expected F1 M×L, F2 N×L, F3 M×N; got F1 {}×{}, F2 {}×{}, F3 {}×{}",
                f1.nrows(),
                f1.ncols(),
                f2.nrows(),
                f2.ncols(),
                f3.nrows(),
                f3.ncols()
            )));
        }
        Ok(Self { f1, f2, f3 })
    }

    pub fn rx_dim(&self) -> usize {
        self.f1.nrows()
    }

    pub fn tx_dim(&self) -> usize {
        self.f1.ncols()
    }

    pub fn ris_dim(&self) -> usize {
        self.f2.nrows()
    }

    /// `Z = F₁ + F₃·diag(e^{jθ})·F₂`.
    pub fn effective_channel(&self, theta: &RisPhaseProfile) -> Result<CMat> {
        self.check_theta(theta)?;
        Ok(cascade(self.f1, self.f2, self.f3, &theta.coefficients()))
    }

    fn check_theta(&self, theta: &RisPhaseProfile) -> Result<()> {
        if theta.len() != self.ris_dim() {
            return Err(Error::Dimension(format!(
                "phase profile has {} entries but the RIS has {} cells",
                theta.len(),
                self.ris_dim()
            )));
        }
        Ok(())
    }

    fn check_q(&self, q: &TransmitCovariance) -> Result<()> {
        if q.dim() != self.tx_dim() {
            return Err(Error::Dimension(format!(
                "covariance is {0}×{0} but the transmitter has {1} elements",
                q.dim(),
                self.tx_dim()
            )));
        }
        Ok(())
    }
}

fn check_noise(noise_power: f64) -> Result<()> {
    if noise_power.is_finite() && noise_power > 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "noise power must be positive, got {noise_power}"
        )))
    }
}

/// `I + Z·Q·Zᴴ/σ²`.
fn snr_gram(z: MatRef<'_, c64>, q: MatRef<'_, c64>, noise_power: f64) -> CMat {
    let zq = product(z, q);
    let mut k = linalg::identity(z.nrows());
    let mut gram = linalg::zeros(z.nrows(), z.nrows());
    gemm(&mut gram, Accum::Replace, zq.as_ref(), z.adjoint());
    for j in 0..k.ncols() {
        for i in 0..k.nrows() {
            k[(i, j)] += (gram[(i, j)] + gram[(j, i)].conj()) * (0.5 / noise_power);
        }
    }
    k
}

/// `log₂ det(I + Z·Q·Zᴴ/σ²)` for an already-formed effective channel `Z`.
pub fn rate_for_channel(z: MatRef<'_, c64>, q: MatRef<'_, c64>, noise_power: f64) -> Result<f64> {
    check_noise(noise_power)?;
    if z.ncols() != q.nrows() || q.nrows() != q.ncols() {
        return Err(Error::Dimension(format!(
            "channel is {}×{} but covariance is {}×{}",
            z.nrows(),
            z.ncols(),
            q.nrows(),
            q.ncols()
        )));
    }
    if z.nrows() == 0 {
        return Ok(0.0);
    }
    let k = snr_gram(z, q, noise_power);
    Ok(linalg::log2_det_hpd(k.as_ref())?.max(0.0))
}

/// Rate objective `f(θ, Q; F₁, F₂, F₃)` in bits/s/Hz.
pub fn objective(
    theta: &RisPhaseProfile,
    q: &TransmitCovariance,
    f: LinkMatrices<'_>,
    noise_power: f64,
) -> Result<f64> {
    f.check_q(q)?;
    let z = f.effective_channel(theta)?;
    rate_for_channel(z.as_ref(), q.matrix().as_ref(), noise_power)
}

/// `(I + Z·Q·Zᴴ/σ²)⁻¹·Z / σ²` = `(σ²I + ZQZᴴ)⁻¹·Z`.
fn resolvent_times_z(z: MatRef<'_, c64>, q: MatRef<'_, c64>, noise_power: f64) -> Result<CMat> {
    let k = snr_gram(z, q, noise_power);
    let mut x = solve_hpd(k.as_ref(), z)?;
    let inv = 1.0 / noise_power;
    for j in 0..x.ncols() {
        for i in 0..x.nrows() {
            x[(i, j)] *= inv;
        }
    }
    Ok(x)
}

fn grad_theta_from(
    f: LinkMatrices<'_>,
    z: MatRef<'_, c64>,
    q: MatRef<'_, c64>,
    noise_power: f64,
) -> Result<Vec<c64>> {
    let x = resolvent_times_z(z, q, noise_power)?;
    let a = product(x.as_ref(), q);
    let b = product(f.f3.adjoint(), a.as_ref());
    Ok((0..f.ris_dim())
        .map(|n| {
            let mut acc = ZERO;
            for l in 0..f.tx_dim() {
                acc += b[(n, l)] * f.f2[(n, l)].conj();
            }
            acc * LOG2_E
        })
        .collect())
}

fn grad_q_from(z: MatRef<'_, c64>, q: MatRef<'_, c64>, noise_power: f64) -> Result<CMat> {
    let x = resolvent_times_z(z, q, noise_power)?;
    let mut g = product(z.adjoint(), x.as_ref());
    for j in 0..g.ncols() {
        for i in 0..g.nrows() {
            g[(i, j)] *= LOG2_E;
        }
    }
    Ok(hermitian_part(g.as_ref()))
}

/// Wirtinger gradient of the objective with respect to the conjugated reflection
/// coefficients: `log₂e · diag(F₃ᴴ (σ²I + ZQZᴴ)⁻¹ Z Q F₂ᴴ)`.
pub fn grad_theta(
    theta: &RisPhaseProfile,
    q: &TransmitCovariance,
    f: LinkMatrices<'_>,
    noise_power: f64,
) -> Result<Vec<c64>> {
    check_noise(noise_power)?;
    f.check_q(q)?;
    let z = f.effective_channel(theta)?;
    grad_theta_from(f, z.as_ref(), q.matrix().as_ref(), noise_power)
}

/// Gradient with respect to `Q`: `log₂e · Zᴴ (σ²I + ZQZᴴ)⁻¹ Z` (Hermitian).
pub fn grad_q(
    theta: &RisPhaseProfile,
    q: &TransmitCovariance,
    f: LinkMatrices<'_>,
    noise_power: f64,
) -> Result<CMat> {
    check_noise(noise_power)?;
    f.check_q(q)?;
    let z = f.effective_channel(theta)?;
    grad_q_from(z.as_ref(), q.matrix().as_ref(), noise_power)
}

/// Tuning of the projected gradient method.
///
/// Step sizes are in normalised units (noise power and power budget both one).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PgmSettings {
    /// Largest trial step sizes `(L₁, L₂)` for the phase and covariance updates.
    pub max_initial_steps: (f64, f64),
    /// Backtracking contraction factors `(ρ₁, ρ₂)`, each in `(0, 1)`.
    pub contraction: (f64, f64),
    /// Sufficient-ascent margins `(δ₁, δ₂)`.
    pub ascent_margins: (f64, f64),
    pub max_iterations: usize,
    /// Stop once the relative objective change of an iteration drops below this.
    pub rel_tolerance: f64,
    /// Cap on step contractions per update before the step is abandoned.
    pub max_backtracks: usize,
    /// Noise power `σ²` in watts.
    pub noise_power: f64,
    /// Transmit power budget `P_T` in watts.
    pub power_budget: f64,
}

impl PgmSettings {
    pub fn new(power_budget: f64, noise_power: f64) -> Self {
        Self {
            max_initial_steps: (1e3, 1e3),
            contraction: (0.5, 0.5),
            ascent_margins: (1e-5, 1e-5),
            max_iterations: 1000,
            rel_tolerance: 1e-6,
            max_backtracks: 60,
            noise_power,
            power_budget,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64| v.is_finite() && v > 0.0;
        let unit = |v: f64| v > 0.0 && v < 1.0;
        if !(pos(self.max_initial_steps.0) && pos(self.max_initial_steps.1)) {
            return Err(Error::Parameter("initial step sizes must be positive".into()));
        }
        if !(unit(self.contraction.0) && unit(self.contraction.1)) {
            return Err(Error::Parameter("contraction factors must lie in (0, 1)".into()));
        }
        if !(pos(self.ascent_margins.0) && pos(self.ascent_margins.1)) {
            return Err(Error::Parameter("ascent margins must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::Parameter("max_iterations must be positive".into()));
        }
        if !pos(self.rel_tolerance) {
            return Err(Error::Parameter("relative tolerance must be positive".into()));
        }
        check_noise(self.noise_power)?;
        check_budget(self.power_budget)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PgmIteration {
    pub iteration: usize,
    /// Objective after both updates of this iteration (bits/s/Hz).
    pub objective: f64,
    /// Accepted phase step size, or `None` when no ascent step was found.
    pub mu_theta: Option<f64>,
    /// Accepted covariance step size (normalised units), or `None`.
    pub mu_q: Option<f64>,
    /// `‖θ_{n+1} − θ_n‖` on the reflection coefficients.
    pub theta_step: f64,
    /// `‖Q_{n+1} − Q_n‖_F` in watts.
    pub q_step: f64,
}

/// Per-iteration history of a solver run; entry 0 is the initial point.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PgmTrace {
    pub iterations: Vec<PgmIteration>,
}

impl PgmTrace {
    pub fn objectives(&self) -> impl Iterator<Item = f64> + '_ {
        self.iterations.iter().map(|it| it.objective)
    }

    /// Largest drop between consecutive objective values (zero for a monotone trace).
    pub fn max_decrease(&self) -> f64 {
        self.iterations
            .windows(2)
            .map(|w| w[0].objective - w[1].objective)
            .fold(0.0, f64::max)
    }

    /// CSV with header `iteration,objective,mu1,mu2`; rejected steps are written as 0.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iteration,objective,mu1,mu2\n");
        for it in &self.iterations {
            let _ = writeln!(
                out,
                "{},{:.12e},{:e},{:e}",
                it.iteration,
                it.objective,
                it.mu_theta.unwrap_or(0.0),
                it.mu_q.unwrap_or(0.0)
            );
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmStatus {
    Converged,
    /// `max_iterations` was reached before the tolerance was met.
    IterationCap,
}

#[derive(Debug, Clone)]
pub struct PgmSolution {
    pub theta: RisPhaseProfile,
    pub q: TransmitCovariance,
    pub objective: f64,
    pub status: PgmStatus,
    pub trace: PgmTrace,
}

/// Normalised copy of the problem: `σ² = 1`, `P_T = 1`.
struct Scaled<'a> {
    f1: CMat,
    f2: MatRef<'a, c64>,
    f3: CMat,
}

impl<'a> Scaled<'a> {
    fn new(f: LinkMatrices<'a>, settings: &PgmSettings) -> Self {
        let c = c64::new((settings.power_budget / settings.noise_power).sqrt(), 0.0);
        let scale = |m: MatRef<'_, c64>| Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * c);
        Self {
            f1: scale(f.f1),
            f2: f.f2,
            f3: scale(f.f3),
        }
    }

    fn links(&self) -> LinkMatrices<'_> {
        LinkMatrices {
            f1: self.f1.as_ref(),
            f2: self.f2,
            f3: self.f3.as_ref(),
        }
    }

    fn channel(&self, coeffs: &[c64]) -> CMat {
        cascade(self.f1.as_ref(), self.f2, self.f3.as_ref(), coeffs)
    }

    fn value(&self, z: &CMat, q: &CMat) -> Result<f64> {
        rate_for_channel(z.as_ref(), q.as_ref(), 1.0)
    }
}

fn squared_distance(a: &[c64], b: &[c64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum()
}

fn squared_frobenius_distance(a: &CMat, b: &CMat) -> f64 {
    let mut acc = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            acc += (a[(i, j)] - b[(i, j)]).norm_sqr();
        }
    }
    acc
}

/// Two-step-size projected gradient ascent with backtracking.
///
/// Each iteration first updates the phases with step `μ₁ = L₁ρ₁^α`, where `α` is the
/// smallest non-negative integer whose projected step satisfies
/// `f(θ⁺, Q) ≥ f(θ, Q) + δ₁‖θ⁺ − θ‖²`, then updates `Q` at the new phases in the same
/// way. A step that finds no such `α` within `max_backtracks` contractions is skipped;
/// an iteration in which both steps are skipped ends the run as converged. The returned
/// pair is always feasible and its objective is never below the initial one.
pub fn pgm_solve(
    f: LinkMatrices<'_>,
    settings: &PgmSettings,
    init_theta: &RisPhaseProfile,
    init_q: &TransmitCovariance,
) -> Result<PgmSolution> {
    settings.validate()?;
    f.check_theta(init_theta)?;
    f.check_q(init_q)?;
    let p = settings.power_budget;
    let scaled = Scaled::new(f, settings);

    let mut coeffs = init_theta.coefficients();
    let mut q = {
        let mut m = init_q.matrix().clone();
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                m[(i, j)] *= 1.0 / p;
            }
        }
        m
    };
    let mut z = scaled.channel(&coeffs);
    let mut value = scaled.value(&z, &q)?;

    let mut trace = PgmTrace::default();
    trace.iterations.push(PgmIteration {
        iteration: 0,
        objective: value,
        mu_theta: None,
        mu_q: None,
        theta_step: 0.0,
        q_step: 0.0,
    });

    let (l1, l2) = settings.max_initial_steps;
    let (rho1, rho2) = settings.contraction;
    let (delta1, delta2) = settings.ascent_margins;
    let mut status = PgmStatus::IterationCap;

    for iteration in 1..=settings.max_iterations {
        let start_value = value;

        // Phase update.
        let grad = grad_theta_from(scaled.links(), z.as_ref(), q.as_ref(), 1.0)?;
        let mut mu_theta = None;
        let mut theta_step = 0.0;
        let mut mu = l1;
        for _ in 0..=settings.max_backtracks {
            let raw: Vec<c64> = coeffs.iter().zip(&grad).map(|(v, g)| v + g * mu).collect();
            let cand = project_theta(&raw).coefficients();
            let dist2 = squared_distance(&cand, &coeffs);
            let cand_z = scaled.channel(&cand);
            let cand_value = scaled.value(&cand_z, &q)?;
            if cand_value >= value + delta1 * dist2 {
                coeffs = cand;
                z = cand_z;
                value = cand_value;
                mu_theta = Some(mu);
                theta_step = dist2.sqrt();
                break;
            }
            mu *= rho1;
        }

        // Covariance update at the new phases.
        let grad = grad_q_from(z.as_ref(), q.as_ref(), 1.0)?;
        let mut mu_q = None;
        let mut q_step = 0.0;
        let mut mu = l2;
        for _ in 0..=settings.max_backtracks {
            let raw = Mat::from_fn(q.nrows(), q.ncols(), |i, j| q[(i, j)] + grad[(i, j)] * mu);
            let cand = project_q(raw.as_ref(), 1.0)?.into_matrix();
            let dist2 = squared_frobenius_distance(&cand, &q);
            let cand_value = scaled.value(&z, &cand)?;
            if cand_value >= value + delta2 * dist2 {
                q = cand;
                value = cand_value;
                mu_q = Some(mu);
                q_step = dist2.sqrt() * p;
                break;
            }
            mu *= rho2;
        }

        trace.iterations.push(PgmIteration {
            iteration,
            objective: value,
            mu_theta,
            mu_q,
            theta_step,
            q_step,
        });

        if mu_theta.is_none() && mu_q.is_none() {
            status = PgmStatus::Converged;
            break;
        }
        if (value - start_value).abs() <= settings.rel_tolerance * start_value.abs() {
            status = PgmStatus::Converged;
            break;
        }
    }

    let theta = project_theta(&coeffs);
    let q = TransmitCovariance {
        q: Mat::from_fn(q.nrows(), q.ncols(), |i, j| q[(i, j)] * p),
        power_budget: p,
    };
    Ok(PgmSolution {
        theta,
        q,
        objective: value,
        status,
        trace,
    })
}

/// Optimises only the covariance for a fixed effective channel `h_eff` (M×L).
pub fn optimize_covariance(
    h_eff: MatRef<'_, c64>,
    settings: &PgmSettings,
    init_q: &TransmitCovariance,
) -> Result<PgmSolution> {
    let f2 = linalg::zeros(1, h_eff.ncols());
    let f3 = linalg::zeros(h_eff.nrows(), 1);
    let links = LinkMatrices::new(h_eff, f2.as_ref(), f3.as_ref())?;
    pgm_solve(links, settings, &RisPhaseProfile::zeros(1), init_q)
}
