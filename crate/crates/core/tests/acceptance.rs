//! Acceptance suite: one PASS/FAIL line per criterion, at the stated tolerances.
//!
//! Run with `cargo test -p rishm-core --test acceptance -- --nocapture` to see the report.

mod common;

use std::path::PathBuf;
use std::time::Instant;

use common::{dykstra_projection, frob_diff, gradient_errors, random_matrix, rng, water_filling_margins, Instance};
use rishm_core::channels::{aperture_amplitude, LosChannels};
use rishm_core::experiments::{run_modes, run_sweep, ExperimentConfig, ResolvedConfig, RunOptions, SweepOutput};
use rishm_core::metrics::effective_rank;
use rishm_core::optimizer::{pgm_solve, project_q};
use rishm_core::schemes::scheme_location_focus;
use rishm_core::{ChannelSet, PgmSettings, RisPhaseProfile, SchemeId, TransmitCovariance};

const LOS_K: f64 = 100_000.0;

struct Report {
    lines: Vec<(bool, String)>,
}

impl Report {
    fn record(&mut self, pass: bool, name: &str, detail: String) {
        let line = format!("[{}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        println!("{line}");
        self.lines.push((pass, line));
    }
}

fn config(file: &str) -> ExperimentConfig {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(file);
    ExperimentConfig::load(path).unwrap()
}

fn resolve(cfg: &ExperimentConfig) -> ResolvedConfig {
    cfg.resolve().unwrap()
}

fn max_pgm_decrease(out: &SweepOutput) -> (f64, usize) {
    let runs: Vec<f64> = out.records.iter().filter_map(|r| r.max_objective_decrease).collect();
    (runs.iter().copied().fold(0.0, f64::max), runs.len())
}

#[test]
fn acceptance() {
    let mut report = Report { lines: Vec::new() };
    let opts = RunOptions::default();
    let mut pgm_decrease = 0.0f64;
    let mut pgm_runs = 0usize;

    // Gradient certification.
    {
        let start = Instant::now();
        let mut r = rng(0xacce);
        let mut worst = (0.0f64, 0.0f64);
        for _ in 0..100 {
            let inst = Instance::random(&mut r, 4);
            let (et, eq) = gradient_errors(&inst, &mut r);
            worst = (worst.0.max(et), worst.1.max(eq));
        }
        let secs = start.elapsed().as_secs_f64();
        report.record(
            worst.0 < 1e-5 && worst.1 < 1e-5 && secs < 10.0,
            "gradient certification",
            format!(
                "100 instances, worst relative error θ {:.2e}, Q {:.2e} (tol 1e-5), {secs:.2} s (limit 10 s)",
                worst.0, worst.1
            ),
        );
    }

    // Projection oracle.
    {
        let mut r = rng(0x9a0);
        let mut worst = 0.0f64;
        for n in [2, 3] {
            for case in 0..50 {
                let raw = random_matrix(&mut r, n, n, 2.0);
                let budget = [0.3, 1.0, 4.0][case % 3];
                let ours = project_q(raw.as_ref(), budget).unwrap();
                let oracle = dykstra_projection(raw.as_ref(), budget);
                worst = worst.max(frob_diff(ours.matrix().as_ref(), oracle.as_ref()));
            }
        }
        report.record(
            worst < 1e-8,
            "projection oracle",
            format!("100 instances (2×2, 3×3) vs Dykstra QP oracle, worst Frobenius gap {worst:.2e} (tol 1e-8)"),
        );
    }

    // Water-filling optimality.
    {
        let mut r = rng(0x3f);
        let mut worst_margin = f64::INFINITY;
        let mut worst_gap = 0.0f64;
        for case in 0..20 {
            let h = random_matrix(&mut r, 2 + case % 3, 2 + (case / 3) % 3, 1.0);
            let noise = [0.05, 0.5, 2.0][case % 3];
            let (margin, gap) = water_filling_margins(&mut r, h.as_ref(), 1.0, noise);
            worst_margin = worst_margin.min(margin);
            worst_gap = worst_gap.max(gap);
        }
        report.record(
            worst_margin >= 0.0 && worst_gap <= 5e-3,
            "water-filling optimality",
            format!(
                "20 channels × 100 random covariances, min rate margin {worst_margin:.3e} (≥ 0); worst gap to PGM over Q {:.3}% (≤ 0.5%)",
                100.0 * worst_gap
            ),
        );
    }

    // Small random PGM runs for the ascent check.
    {
        let mut r = rng(0xa5c);
        for _ in 0..30 {
            let inst = Instance::random(&mut r, 4);
            let links = inst.links();
            let sol = pgm_solve(
                links,
                &PgmSettings::new(1.0, inst.noise),
                &RisPhaseProfile::random(links.ris_dim(), &mut r),
                &TransmitCovariance::isotropic(links.tx_dim(), 1.0).unwrap(),
            )
            .unwrap();
            pgm_decrease = pgm_decrease.max(sol.trace.max_decrease());
            pgm_runs += 1;
        }
    }

    // Fig. 2: rate against N.
    let fig2 = config("fig2_rate_vs_n.toml");
    {
        let mut cfg = fig2.clone();
        cfg.schemes = vec!["perfect_csi".into()];
        cfg.channel.rician_k = vec![1.0, LOS_K];
        cfg.sweep.as_mut().unwrap().values = vec![50.0];
        let resolved = resolve(&cfg);
        let start = Instant::now();
        let out = run_sweep(&resolved, &opts).unwrap();
        let (d, n) = max_pgm_decrease(&out);
        pgm_decrease = pgm_decrease.max(d);
        pgm_runs += n;
        let rich = out.mean_by_point(SchemeId::PerfectCsi, 1.0, |r| r.rate)[0].1;
        let los = out.mean_by_point(SchemeId::PerfectCsi, LOS_K, |r| r.rate)[0].1;
        let trials = out.series(SchemeId::PerfectCsi, 1.0).count();
        report.record(
            rich > los && trials == 50,
            "fig2 rate grows as K shrinks",
            format!(
                "N = 2500, Scheme 1 mean rate K=1 {rich:.3} ({trials} trials) vs K=1e5 {los:.3} bit/s/Hz ({:.0} s)",
                start.elapsed().as_secs_f64()
            ),
        );
    }
    {
        let mut cfg = fig2.clone();
        cfg.channel.rician_k = vec![LOS_K];
        let resolved = resolve(&cfg);
        let out = run_sweep(&resolved, &opts).unwrap();
        let (d, n) = max_pgm_decrease(&out);
        pgm_decrease = pgm_decrease.max(d);
        pgm_runs += n;

        let mut worst_drop = 0.0f64;
        let mut worst_at = String::new();
        for scheme in SchemeId::ALL {
            let curve = out.mean_by_point(scheme, LOS_K, |r| r.rate);
            for w in curve.windows(2) {
                let drop = (w[0].1 - w[1].1) / w[0].1;
                if drop > worst_drop {
                    worst_drop = drop;
                    worst_at = format!(" ({scheme}, N {} → {})", w[0].0, w[1].0);
                }
            }
        }
        report.record(
            worst_drop <= 0.01,
            "fig2 rate non-decreasing in N",
            format!(
                "K=1e5, all schemes over N = 16..2500, largest relative drop {:.3}%{worst_at} (≤ 1%)",
                100.0 * worst_drop
            ),
        );

        let s1 = out.mean_by_point(SchemeId::PerfectCsi, LOS_K, |r| r.rate);
        let s3 = out.mean_by_point(SchemeId::LocationFocus, LOS_K, |r| r.rate);
        let (ratio, at) = s1
            .iter()
            .zip(&s3)
            .map(|(a, b)| (b.1 / a.1, a.0))
            .fold((f64::INFINITY, 0.0), |acc, x| if x.0 < acc.0 { x } else { acc });
        report.record(
            ratio >= 0.9,
            "scheme 3 ≈ scheme 1 rate at high K",
            format!("min Scheme-3/Scheme-1 rate ratio {:.4} at N = {at} (≥ 0.90)", ratio),
        );
    }

    // SISO anchor at N = 2×2.
    {
        let mut cfg = fig2.clone();
        cfg.schemes = vec!["perfect_csi".into()];
        cfg.channel.rician_k = vec![LOS_K];
        cfg.sweep.as_mut().unwrap().values = vec![2.0];
        let resolved = resolve(&cfg);
        let out = run_sweep(&resolved, &opts).unwrap();
        let rate = out.records[0].rate;
        pgm_decrease = pgm_decrease.max(max_pgm_decrease(&out).0);
        pgm_runs += 1;

        let geom = resolved.geometry_at(0).unwrap();
        let (d1, d2) = geom.center_link_distances();
        let area = geom.ris().element_area();
        let hc = aperture_amplitude(geom.tx().element_gain(), area, geom.tx_height() / d1, d1);
        let gc = aperture_amplitude(geom.rx().element_gain(), area, geom.rx_height() / d2, d2);
        let (n, l, m) = (geom.ris().len() as f64, geom.tx().len() as f64, geom.rx().len() as f64);
        let snr = resolved.power_budget * (n * hc * gc).powi(2) * l * m / resolved.noise_power;
        let siso = (1.0 + snr).log2();
        let rel = (rate - siso).abs() / siso;
        report.record(
            rel <= 0.05,
            "SISO anchor",
            format!("N = 4, K=1e5: Scheme 1 {rate:.4} vs closed form {siso:.4} bit/s/Hz, gap {:.2}% (≤ 5%)", 100.0 * rel),
        );
    }

    // Fig. 3: DoF against D.
    {
        let mut cfg = config("fig3_dof_vs_distance.toml");
        cfg.schemes = vec!["perfect_csi".into(), "location_focus".into()];
        let resolved = resolve(&cfg);
        let out = run_sweep(&resolved, &opts).unwrap();
        let (d, n) = max_pgm_decrease(&out);
        pgm_decrease = pgm_decrease.max(d);
        pgm_runs += n;
        let at = |scheme: SchemeId, dist: f64| {
            out.series(scheme, LOS_K)
                .find(|r| r.sweep_value == dist)
                .cloned()
                .expect("sweep point present")
        };

        let a1 = at(SchemeId::PerfectCsi, 6.0);
        let a3 = at(SchemeId::LocationFocus, 6.0);
        let dir = a1.erank_direct.unwrap();
        report.record(
            a1.erank_end_to_end > dir && a3.erank_end_to_end > dir,
            "fig3(a) RIS link beats direct DoF at D = 6 m",
            format!(
                "erank H̃ Scheme 1 {:.3}, Scheme 3 {:.3} vs H_dir {dir:.3}",
                a1.erank_end_to_end, a3.erank_end_to_end
            ),
        );

        let b1 = at(SchemeId::PerfectCsi, 100.0).erank_end_to_end;
        let b3 = at(SchemeId::LocationFocus, 100.0).erank_end_to_end;
        report.record(
            b1 <= 1.2 && b3 <= 1.2,
            "fig3(b) DoF tends to one at D = 100 m",
            format!("erank H̃ Scheme 1 {b1:.4}, Scheme 3 {b3:.4} (≤ 1.2)"),
        );

        let s1: Vec<_> = out.series(SchemeId::PerfectCsi, LOS_K).collect();
        let s3: Vec<_> = out.series(SchemeId::LocationFocus, LOS_K).collect();
        let (worst, at_d) = s1
            .iter()
            .zip(&s3)
            .map(|(a, b)| ((a.erank_end_to_end - b.erank_end_to_end).abs() / a.erank_end_to_end, a.sweep_value))
            .fold((0.0, 0.0), |acc, x| if x.0 > acc.0 { x } else { acc });
        report.record(
            worst <= 0.10,
            "fig3(c) Scheme 3 DoF within 10% of Scheme 1",
            format!("largest relative erank gap {:.2}% at D = {at_d} m over {} points", 100.0 * worst, s1.len()),
        );
    }

    // Fig. 5: DoF against RIS position.
    {
        let cfg = config("fig5_dof_vs_ris_position.toml");
        let resolved = resolve(&cfg);
        let out = run_sweep(&resolved, &opts).unwrap();
        let (d, n) = max_pgm_decrease(&out);
        pgm_decrease = pgm_decrease.max(d);
        pgm_runs += n;
        let mut parts = Vec::new();
        let mut pass = true;
        for scheme in [SchemeId::PerfectCsi, SchemeId::LocationFocus] {
            let e: Vec<f64> = out.series(scheme, LOS_K).map(|r| r.erank_end_to_end).collect();
            let mean = e.iter().sum::<f64>() / e.len() as f64;
            let spread = e.iter().copied().fold(f64::MIN, f64::max) - e.iter().copied().fold(f64::MAX, f64::min);
            pass &= spread <= 0.3 * mean;
            parts.push(format!("{scheme} spread {:.1}% of mean {mean:.3}", 100.0 * spread / mean));
        }

        // Mirror symmetry on LoS-only channels with Scheme 3.
        let wall = resolved.layout.wall_distance;
        let params = resolved.channel_params(LOS_K).unwrap();
        let erank_at = |offset: f64| {
            let mut c = resolved.clone();
            c.sweep = None;
            c.layout.ris_offset = offset;
            let geom = c.geometry_at(0).unwrap();
            let ch = ChannelSet::los_only(&LosChannels::compute(&geom, &params).unwrap());
            let o = scheme_location_focus(&geom, &ch, c.power_budget, c.noise_power).unwrap();
            effective_rank(o.end_to_end.as_ref()).unwrap()
        };
        let mut mirror = 0.0f64;
        for x in [0.5, 1.5, 2.5, 3.5, 4.5] {
            mirror = mirror.max((erank_at(x) - erank_at(wall - x)).abs());
        }
        report.record(
            pass && mirror <= 1e-6,
            "fig5 DoF fluctuates slowly with d_ris",
            format!("{}; LoS-only mirror asymmetry {mirror:.2e} (≤ 1e-6)", parts.join(", ")),
        );
    }

    // Determinism: two runs, and a different worker count, give identical bytes.
    {
        let mut cfg = fig2.clone();
        cfg.channel.rician_k = vec![1.0, LOS_K];
        cfg.channel.trials = Some(3);
        cfg.sweep.as_mut().unwrap().values = vec![2.0, 4.0];
        let resolved = resolve(&cfg);
        let a = run_sweep(&resolved, &opts).unwrap().to_csv();
        let b = run_sweep(&resolved, &opts).unwrap().to_csv();
        let c = run_sweep(&resolved, &RunOptions { threads: Some(2), record_timing: false })
            .unwrap()
            .to_csv();
        report.record(
            a == b && b == c,
            "determinism",
            format!("{} CSV bytes, identical across repeated and 2-thread runs: {}", a.len(), a == b && b == c),
        );
    }

    report.record(
        pgm_decrease <= 1e-12,
        "monotone ascent",
        format!("{pgm_runs} PGM runs, largest objective decrease {pgm_decrease:.2e} (slack 1e-12)"),
    );

    // Secondary: mode maps for the D = 6 m blocked geometry.
    {
        let resolved = resolve(&config("fig4_modes.toml"));
        let modes = run_modes(&resolved, &opts).unwrap();
        let csv = modes.to_csv();
        let rows = csv.lines().count() - 1;
        let cols = csv.lines().next().unwrap().split(',').count();
        let ordered = modes.fields.windows(2).all(|w| w[0].singular_value >= w[1].singular_value);
        report.record(
            modes.fields.len() == 6 && rows == 2500 && cols == 5 + 12 && ordered,
            "fig4 modes export (secondary)",
            format!("{} modes, {rows} cells, {cols} columns, ordered by singular value: {ordered}", modes.fields.len()),
        );
    }

    let failed: Vec<&String> = report.lines.iter().filter(|(p, _)| !p).map(|(_, l)| l).collect();
    println!("{} of {} criteria passed", report.lines.len() - failed.len(), report.lines.len());
    assert!(failed.is_empty(), "failing criteria:\n{}", failed.iter().map(|s| s.as_str()).collect::<Vec<_>>().join("\n"));
}
