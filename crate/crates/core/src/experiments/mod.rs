//! Seeded Monte Carlo sweeps reproducing the rate and DoF studies, with CSV output.
//!
//! Every (sweep point, K, trial) task draws its channels from streams keyed by
//! `(seed, point index, trial)`, so the task pool may run in any order and the same
//! trial sees the same fading realisation for every scheme and every K.

pub mod config;
mod format;

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

use crate::channels::{ChannelSet, LosChannels, StreamKey, StreamTag};
use crate::error::{Error, Result};
use crate::linalg::is_all_zero;
use crate::metrics::{effective_rank, mode_fields, ModeField};
use crate::optimizer::{PgmStatus, RisPhaseProfile};
use crate::schemes::{run_scheme, SchemeId};

pub use config::{ExperimentConfig, ResolvedConfig, SweepVariable};
pub use format::format_g9;

/// Fixed CSV header of sweep outputs.
pub const CSV_HEADER: &str = "scenario,scheme,sweep_value,K,trial,rate_bpshz,erank_e2e,erank_dir,wall_time_ms";

/// One Monte Carlo outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub scenario: String,
    pub scheme: SchemeId,
    pub sweep_value: f64,
    pub rician_k: f64,
    pub trial: usize,
    /// bits/s/Hz
    pub rate: f64,
    pub erank_end_to_end: f64,
    /// `None` when the direct link is blocked.
    pub erank_direct: Option<f64>,
    /// Only filled when timing is requested, so default output stays deterministic.
    pub wall_time_ms: Option<f64>,
    pub status: PgmStatus,
    /// Largest drop between consecutive PGM objective values; `None` for closed-form schemes.
    pub max_objective_decrease: Option<f64>,
}

/// Execution knobs that do not change results.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    pub record_timing: bool,
}

#[derive(Debug, Clone, Default)]
pub struct SweepOutput {
    pub records: Vec<ExperimentRecord>,
}

impl SweepOutput {
    pub fn hit_iteration_cap(&self) -> bool {
        self.records.iter().any(|r| r.status == PgmStatus::IterationCap)
    }

    /// CSV text. A trailing `status` column is added only when some run hit the
    /// optimiser's iteration cap.
    pub fn to_csv(&self) -> String {
        let with_status = self.hit_iteration_cap();
        let mut out = String::from(CSV_HEADER);
        if with_status {
            out.push_str(",status");
        }
        out.push('\n');
        for r in &self.records {
            let opt = |v: Option<f64>| v.map(format_g9).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}",
                r.scenario,
                r.scheme,
                format_g9(r.sweep_value),
                format_g9(r.rician_k),
                r.trial,
                format_g9(r.rate),
                format_g9(r.erank_end_to_end),
                opt(r.erank_direct),
                opt(r.wall_time_ms),
            ));
            if with_status {
                out.push_str(match r.status {
                    PgmStatus::Converged => ",converged",
                    PgmStatus::IterationCap => ",iteration_cap",
                });
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    /// Records of one scheme and K, in sweep order.
    pub fn series(&self, scheme: SchemeId, k: f64) -> impl Iterator<Item = &ExperimentRecord> {
        self.records
            .iter()
            .filter(move |r| r.scheme == scheme && r.rician_k == k)
    }

    /// Mean of `value` over trials at each sweep value, for one scheme and K.
    pub fn mean_by_point(
        &self,
        scheme: SchemeId,
        k: f64,
        value: impl Fn(&ExperimentRecord) -> f64,
    ) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64, usize)> = Vec::new();
        for r in self.series(scheme, k) {
            match out.last_mut() {
                Some(last) if last.0 == r.sweep_value => {
                    last.1 += value(r);
                    last.2 += 1;
                }
                _ => out.push((r.sweep_value, value(r), 1)),
            }
        }
        out.into_iter().map(|(x, s, n)| (x, s / n as f64)).collect()
    }
}

#[derive(Debug, Clone, Copy)]
struct Task {
    point: usize,
    k_index: usize,
    trial: usize,
}

fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(Error::Parameter("thread count must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| Error::Parameter(format!("cannot build thread pool: {e}"))),
    }
}

/// Runs the full cross product of sweep points, K values, trials and schemes.
pub fn run_sweep(cfg: &ResolvedConfig, opts: &RunOptions) -> Result<SweepOutput> {
    let points = cfg.point_count();
    let base = cfg.channel_params(0.0)?;
    let mut geoms = Vec::with_capacity(points);
    let mut los = Vec::with_capacity(points);
    for p in 0..points {
        let geom = cfg.geometry_at(p)?;
        los.push(LosChannels::compute(&geom, &base)?);
        geoms.push(geom);
    }

    let mut tasks = Vec::new();
    for point in 0..points {
        for (k_index, &k) in cfg.rician_k.iter().enumerate() {
            for trial in 0..cfg.trials_for(k) {
                tasks.push(Task { point, k_index, trial });
            }
        }
    }

    let run_task = |t: &Task| -> Result<Vec<ExperimentRecord>> {
        let k = cfg.rician_k[t.k_index];
        let params = cfg.channel_params(k)?;
        let key = StreamKey::new(cfg.seed, t.point as u64, t.trial as u64);
        let geom = &geoms[t.point];
        let channels = ChannelSet::from_los(&los[t.point], &params, key)?;
        let init_theta = RisPhaseProfile::random(geom.ris().len(), &mut key.rng(StreamTag::PhaseInit));
        let erank_direct = if is_all_zero(channels.h_dir.as_ref()) {
            None
        } else {
            Some(effective_rank(channels.h_dir.as_ref())?)
        };
        cfg.schemes
            .iter()
            .map(|&scheme| {
                let start = Instant::now();
                let outcome = run_scheme(scheme, geom, &channels, &cfg.settings, &init_theta)?;
                let elapsed = start.elapsed().as_secs_f64() * 1e3;
                Ok(ExperimentRecord {
                    scenario: cfg.scenario.clone(),
                    scheme,
                    sweep_value: cfg.sweep_value(t.point),
                    rician_k: k,
                    trial: t.trial,
                    rate: outcome.rate,
                    erank_end_to_end: effective_rank(outcome.end_to_end.as_ref())?,
                    erank_direct,
                    wall_time_ms: opts.record_timing.then_some(elapsed),
                    status: outcome.status,
                    max_objective_decrease: outcome.trace.as_ref().map(|t| t.max_decrease()),
                })
            })
            .collect()
    };

    let results: Vec<Result<Vec<ExperimentRecord>>> =
        with_pool(opts.threads, || tasks.par_iter().map(run_task).collect())?;
    let mut records = Vec::with_capacity(tasks.len() * cfg.schemes.len());
    for r in results {
        records.extend(r?);
    }
    records.sort_by(|a, b| {
        a.scheme
            .cmp(&b.scheme)
            .then(a.sweep_value.total_cmp(&b.sweep_value))
            .then(a.rician_k.total_cmp(&b.rician_k))
            .then(a.trial.cmp(&b.trial))
    });
    Ok(SweepOutput { records })
}

fn run_expecting(cfg: &ResolvedConfig, variable: SweepVariable, opts: &RunOptions) -> Result<SweepOutput> {
    match &cfg.sweep {
        Some((v, _)) if *v == variable => run_sweep(cfg, opts),
        Some((v, _)) => Err(Error::config(
            "sweep.variable",
            format!("expected `{}`, found `{}`", variable.as_str(), v.as_str()),
        )),
        None => Err(Error::config(
            "sweep",
            format!("a `{}` sweep is required", variable.as_str()),
        )),
    }
}

/// Rate against the number of RIS cells.
pub fn run_rate_vs_ris_size(cfg: &ResolvedConfig, opts: &RunOptions) -> Result<SweepOutput> {
    run_expecting(cfg, SweepVariable::RisSize, opts)
}

/// Effective rank against the wall distance `D`.
pub fn run_dof_vs_distance(cfg: &ResolvedConfig, opts: &RunOptions) -> Result<SweepOutput> {
    run_expecting(cfg, SweepVariable::WallDistance, opts)
}

/// Effective rank against the RIS offset `d_ris`.
pub fn run_dof_vs_ris_position(cfg: &ResolvedConfig, opts: &RunOptions) -> Result<SweepOutput> {
    run_expecting(cfg, SweepVariable::RisOffset, opts)
}

/// Mode fields at the RIS for one geometry.
#[derive(Debug, Clone)]
pub struct ModesOutput {
    pub scheme: SchemeId,
    /// `(ix, iy, x, y)` per RIS cell, in cell order.
    pub cells: Vec<(usize, usize, f64, f64)>,
    pub grid: (usize, usize),
    pub fields: Vec<ModeField>,
    pub status: PgmStatus,
    /// The channel draw the modes were computed on.
    pub channels: ChannelSet,
}

impl ModesOutput {
    /// `cell,ix,iy,x_m,y_m,abs_1..abs_k,phase_1..phase_k`; phases are in units of π.
    pub fn to_csv(&self) -> String {
        let k = self.fields.len();
        let mut out = String::from("cell,ix,iy,x_m,y_m");
        for i in 1..=k {
            out.push_str(&format!(",abs_{i}"));
        }
        for i in 1..=k {
            out.push_str(&format!(",phase_{i}"));
        }
        out.push('\n');
        let mags: Vec<Vec<f64>> = self.fields.iter().map(|f| f.magnitudes().collect()).collect();
        let phases: Vec<Vec<f64>> = self.fields.iter().map(|f| f.normalized_phases().collect()).collect();
        for (n, &(ix, iy, x, y)) in self.cells.iter().enumerate() {
            out.push_str(&format!("{n},{ix},{iy},{},{}", format_g9(x), format_g9(y)));
            for m in &mags {
                out.push(',');
                out.push_str(&format_g9(m[n]));
            }
            for p in &phases {
                out.push(',');
                out.push_str(&format_g9(p[n]));
            }
            out.push('\n');
        }
        out
    }

    /// `mode,singular_value,power_w`, one row per mode.
    pub fn summary_csv(&self) -> String {
        let mut out = String::from("mode,singular_value,power_w\n");
        for f in &self.fields {
            out.push_str(&format!(
                "{},{},{}\n",
                f.mode_index + 1,
                format_g9(f.singular_value),
                format_g9(f.power)
            ));
        }
        out
    }
}

/// Fields of the strongest modes for the first configured scheme, K and sweep point
/// (trial 0).
pub fn run_modes(cfg: &ResolvedConfig, opts: &RunOptions) -> Result<ModesOutput> {
    let scheme = cfg.schemes[0];
    let k = cfg.rician_k[0];
    let geom = cfg.geometry_at(0)?;
    let params = cfg.channel_params(k)?;
    let los = LosChannels::compute(&geom, &params)?;
    let key = StreamKey::new(cfg.seed, 0, 0);
    let channels = ChannelSet::from_los(&los, &params, key)?;
    let init_theta = RisPhaseProfile::random(geom.ris().len(), &mut key.rng(StreamTag::PhaseInit));
    let outcome = with_pool(opts.threads, || {
        run_scheme(scheme, &geom, &channels, &cfg.settings, &init_theta)
    })??;
    let fields = mode_fields(
        channels.h.as_ref(),
        outcome.end_to_end.as_ref(),
        cfg.power_budget,
        cfg.noise_power,
        cfg.mode_count,
    )?;
    let kind = crate::geometry::SurfaceKind::Ris;
    let cells = geom
        .element_positions(kind)
        .into_iter()
        .enumerate()
        .map(|(n, p)| {
            let (ix, iy) = geom.grid_coords(kind, n)?;
            Ok((ix, iy, p.x, p.y))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ModesOutput {
        scheme,
        cells,
        grid: (geom.ris().count_a(), geom.ris().count_b()),
        fields,
        status: outcome.status,
        channels,
    })
}
