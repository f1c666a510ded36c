//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (run with `cargo test -p coxswim-core --test acceptance -- --nocapture`
//! to see them all).
//!
//! The reference-run regression compares against
//! `tests/golden/reference_run.json`; regenerate it with
//! `REGEN_GOLDEN=1 cargo test -p coxswim-core --test acceptance`.

use std::f64::consts::PI;
use std::time::Instant;

use coxswim_core::geometry::{CurveSample, TangentModel};
use coxswim_core::shapes::{bump, bump_slope, bump_velocity};
use coxswim_core::solver::resistance_discrepancy_report;
use coxswim_core::*;
use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

fn report(name: &str, started: Instant, cap_secs: f64, ok: bool, detail: String) {
    let elapsed = started.elapsed().as_secs_f64();
    let verdict = if ok && elapsed < cap_secs { "PASS" } else { "FAIL" };
    println!("acceptance {name}: {verdict} ({elapsed:.2}s) {detail}");
    assert!(ok, "{name}: {detail}");
    assert!(
        elapsed < cap_secs,
        "{name}: runtime {elapsed:.2}s exceeds {cap_secs}s"
    );
}

fn default_run() -> Trajectory {
    let program = BumpProgram::default();
    let params = ModelParams::default();
    simulate(
        &program,
        &params,
        15.0,
        0.01,
        &SimOptions::default(),
        Pose::identity(),
    )
    .expect("reference run completes")
}

#[test]
fn c01_drag_anisotropy() {
    let started = Instant::now();
    let params = ModelParams::new(0.01, 0.05)
        .unwrap()
        .with_order(1)
        .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let phi: f64 = rng.gen_range(-PI..PI);
        let t = Vec2::new(phi.cos(), phi.sin());
        let n = Vec2::new(-phi.sin(), phi.cos());
        let drag = drag_operator(t, &params).unwrap();
        let lambda_t = t.dot(&drag.apply(t));
        let lambda_n = n.dot(&drag.apply(n));
        worst = worst.max((lambda_n / lambda_t - 2.0).abs());
    }
    report(
        "c01 drag-anisotropy",
        started,
        1.0,
        worst < 1e-12,
        format!("max |ratio − 2| = {worst:.2e}"),
    );
}

#[test]
fn c02_zero_input_fixed_point() {
    let started = Instant::now();
    // A frozen bump (c3 = 0) has identically zero shape velocity.
    let program = BumpProgram::new(BumpParams::new(1e6, 15.0, 0.0).unwrap(), 201).unwrap();
    let params = ModelParams::default();
    let traj = simulate(
        &program,
        &params,
        15.0,
        0.01,
        &SimOptions::default(),
        Pose::identity(),
    )
    .unwrap();
    let ok = traj.samples.iter().all(|s| {
        s.xi.v0x == 0.0
            && s.xi.v0y == 0.0
            && s.xi.omega0 == 0.0
            && s.pose == Pose::identity()
    });
    report(
        "c02 zero-input-fixed-point",
        started,
        1.0,
        ok,
        format!("{} samples, all exactly at rest", traj.samples.len()),
    );
}

#[test]
fn c03_oracle_equivalence_and_discrepancy_report() {
    let started = Instant::now();
    // Quadrature-assembled head resistance vs an independent dense assembly
    // (2-point Gauss per panel at 4096 panels per unit length).
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let phi: f64 = rng.gen_range(-3.0..3.0);
        let delta: f64 = rng.gen_range(0.02..0.5);
        let h: f64 = rng.gen_range(0.001..0.2);
        let params = ModelParams::new(h, delta).unwrap();
        let t0 = Vec2::new(phi.cos(), phi.sin());
        let a = head_resistance(t0, &params).unwrap();
        let a_ref = gauss2_head_assembly(t0, &params, 4096);
        worst = worst.max((a - a_ref).norm() / a_ref.norm());
    }
    let pass_oracle = worst < 1e-8;

    // The closed-form table cross-check: the report must exist, be stable,
    // and list the mismatched entries.
    let report_a = resistance_discrepancy_report().unwrap();
    let report_b = resistance_discrepancy_report().unwrap();
    let stable = report_a == report_b;
    let listed = report_a.contains("entry (1,1)") && report_a.contains("closed-form");
    if let Ok(dir) = std::env::var("CARGO_TARGET_TMPDIR") {
        let path = std::path::Path::new(&dir).join("resistance_discrepancy_report.txt");
        std::fs::write(&path, &report_a).unwrap();
    }
    report(
        "c03 oracle-equivalence",
        started,
        10.0,
        pass_oracle && stable && listed,
        format!(
            "max rel err = {worst:.2e}; report stable = {stable}, mismatches listed = {listed}"
        ),
    );
}

/// Independent head-resistance assembly: per-panel 2-point Gauss–Legendre
/// (different nodes, weights, and loop structure from the production
/// Simpson path).
fn gauss2_head_assembly(
    t0: Vec2,
    params: &ModelParams,
    panels_per_unit: usize,
) -> nalgebra::Matrix3<f64> {
    let delta = params.delta();
    let drag = drag_operator(t0, params).unwrap();
    let panels = (((panels_per_unit as f64) * delta).ceil() as usize).max(2);
    let spin = |r: Vec2| Vec2::new(r.y, -r.x);
    let basis: [(Vec2, f64); 3] = [
        (Vec2::new(1.0, 0.0), 0.0),
        (Vec2::new(0.0, 1.0), 0.0),
        (Vec2::zeros(), 1.0),
    ];
    let mut a = nalgebra::Matrix3::<f64>::zeros();
    for (j, (v, w)) in basis.iter().enumerate() {
        let mut acc = Vector3::zeros();
        for k in 0..panels {
            let lo = delta * k as f64 / panels as f64;
            let hi = delta * (k + 1) as f64 / panels as f64;
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (lo + hi);
            for x in [mid - half / 3.0f64.sqrt(), mid + half / 3.0f64.sqrt()] {
                let r = x * t0;
                let u = v + spin(r) * *w;
                let f = drag.apply(u);
                acc += Vector3::new(f.x, f.y, r.x * f.y - r.y * f.x) * half;
            }
        }
        a.set_column(j, &acc);
    }
    a
}

#[test]
fn c04_kinematic_solve_residual() {
    let started = Instant::now();
    let traj = default_run();
    let max_res = traj.max_residual();
    report(
        "c04 solve-residual",
        started,
        10.0,
        max_res < 1e-9,
        format!("max |A·ξ + W_tail| = {max_res:.2e} over {} steps", traj.samples.len()),
    );
}

#[derive(Debug, Serialize, Deserialize)]
struct GoldenSample {
    t: f64,
    v0x: f64,
    v0y: f64,
    omega0: f64,
    x: f64,
    y: f64,
    theta: f64,
    theta_unwrapped: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct Golden {
    t_end: f64,
    dt: f64,
    checkpoints: Vec<GoldenSample>,
    net_dx: f64,
    net_dy: f64,
    net_dtheta: f64,
}

fn golden_path() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
        .join("reference_run.json")
}

fn golden_from(traj: &Trajectory) -> Golden {
    let checkpoints = traj
        .samples
        .iter()
        .step_by(150)
        .map(|s| GoldenSample {
            t: s.t,
            v0x: s.xi.v0x,
            v0y: s.xi.v0y,
            omega0: s.xi.omega0,
            x: s.pose.x,
            y: s.pose.y,
            theta: s.pose.theta,
            theta_unwrapped: s.theta_unwrapped,
        })
        .collect();
    let (dx, dy, dth) = traj.net_displacement();
    Golden {
        t_end: 15.0,
        dt: traj.dt,
        checkpoints,
        net_dx: dx,
        net_dy: dy,
        net_dtheta: dth,
    }
}

#[test]
fn c05_reference_experiment() {
    let started = Instant::now();
    let traj = default_run();
    let (dx, dy, dth) = traj.net_displacement();
    let displacement_ok =
        dx.is_finite() && dy.is_finite() && dth.is_finite() && (dx.abs() + dy.abs()) > 0.0;

    // The bump must travel monotonically from head to tail: the peak of the
    // body displacement moves with the support center and ends at the tail.
    let program = BumpProgram::default();
    let mut peaks = Vec::new();
    for k in 0..=5 {
        let t = 3.0 * k as f64;
        let (curve, _) = program.shape_at(t).unwrap();
        let peak = curve
            .samples()
            .iter()
            .max_by(|a, b| a.r.y.partial_cmp(&b.r.y).unwrap())
            .unwrap()
            .s;
        peaks.push(peak);
    }
    let monotone = peaks.windows(2).all(|w| w[1] > w[0]);
    let final_peak_ok = (peaks[5] - 1.0).abs() < 0.02;

    // Golden-file regression at 1e-10 (absolute for O(1) values, relative
    // above that) against the stored reference produced by this
    // implementation.
    let current = golden_from(&traj);
    let path = golden_path();
    if std::env::var("REGEN_GOLDEN").is_ok() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, serde_json::to_string_pretty(&current).unwrap()).unwrap();
        println!("acceptance c05 reference-experiment: golden regenerated at {path:?}");
        return;
    }
    let stored: Golden =
        serde_json::from_str(&std::fs::read_to_string(&path).expect("golden file present"))
            .expect("golden file parses");
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-10 * b.abs().max(1.0);
    let mut golden_ok = stored.checkpoints.len() == current.checkpoints.len()
        && close(current.net_dx, stored.net_dx)
        && close(current.net_dy, stored.net_dy)
        && close(current.net_dtheta, stored.net_dtheta);
    for (a, b) in current.checkpoints.iter().zip(&stored.checkpoints) {
        golden_ok &= close(a.t, b.t)
            && close(a.v0x, b.v0x)
            && close(a.v0y, b.v0y)
            && close(a.omega0, b.omega0)
            && close(a.x, b.x)
            && close(a.y, b.y)
            && close(a.theta, b.theta)
            && close(a.theta_unwrapped, b.theta_unwrapped);
    }
    report(
        "c05 reference-experiment",
        started,
        10.0,
        displacement_ok && monotone && final_peak_ok && golden_ok,
        format!(
            "net = ({dx:.3e}, {dy:.3e}, {dth:.3e}); peaks = {peaks:?}; golden = {golden_ok}"
        ),
    );
}

#[test]
fn c06_reversibility() {
    let started = Instant::now();
    // Midpoint sampling makes the reversed program's discrete velocities
    // mirror the forward ones exactly, so the group products cancel.
    let params = ModelParams::default();
    let mut worst: f64 = 0.0;

    for coupling in [Coupling::HeadOnly, Coupling::FullBody] {
        let opts = SimOptions {
            coupling,
            sampling: SamplingMode::Midpoint,
            ..SimOptions::default()
        };
        let program = BumpProgram::default();
        let fwd = simulate(&program, &params, 2.0, 0.01, &opts, Pose::identity()).unwrap();
        let reversed = ReversedProgram::new(&program, 2.0);
        let back = simulate(&reversed, &params, 2.0, 0.01, &opts, fwd.final_pose()).unwrap();
        let end = back.final_pose();
        worst = worst
            .max(end.x.abs())
            .max(end.y.abs())
            .max(wrap_angle(end.theta).abs());
    }

    let sq1 = PiecewiseLinearPath::new(
        vec![0.0, 0.5, 1.0, 1.5, 2.0],
        vec![0.2, 0.7, 0.7, 0.2, 0.2],
    )
    .unwrap();
    let sq2 = PiecewiseLinearPath::new(
        vec![0.0, 0.5, 1.0, 1.5, 2.0],
        vec![-0.3, -0.3, 0.2, 0.2, -0.3],
    )
    .unwrap();
    let square = PurcellProgram::new(sq1, sq2);
    let opts = SimOptions {
        coupling: Coupling::FullBody,
        sampling: SamplingMode::Midpoint,
        ..SimOptions::default()
    };
    let fwd = simulate(&square, &params, 2.0, 0.01, &opts, Pose::identity()).unwrap();
    let reversed = ReversedProgram::new(&square, 2.0);
    let back = simulate(&reversed, &params, 2.0, 0.01, &opts, fwd.final_pose()).unwrap();
    let end = back.final_pose();
    worst = worst
        .max(end.x.abs())
        .max(end.y.abs())
        .max(wrap_angle(end.theta).abs());

    report(
        "c06 reversibility",
        started,
        5.0,
        worst < 1e-6,
        format!("max pose-return deviation = {worst:.2e}"),
    );
}

#[test]
fn c07_left_invariance() {
    let started = Instant::now();
    let program = BumpProgram::default();
    let params = ModelParams::default();
    let opts = SimOptions::default();
    let from_identity = simulate(&program, &params, 15.0, 0.01, &opts, Pose::identity()).unwrap();
    let h = Pose::new(0.7, -0.4, 1.2);
    let from_h = simulate(&program, &params, 15.0, 0.01, &opts, h).unwrap();
    let mut worst: f64 = 0.0;
    for (a, b) in from_identity.samples.iter().zip(&from_h.samples) {
        let composed = h.compose(&a.pose);
        worst = worst
            .max((composed.x - b.pose.x).abs())
            .max((composed.y - b.pose.y).abs())
            .max(coxswim_core::dynamics::angle_difference(composed.theta, b.pose.theta).abs());
    }
    report(
        "c07 left-invariance",
        started,
        10.0,
        worst < 1e-12,
        format!("max pose deviation = {worst:.2e}"),
    );
}

#[test]
fn c08_bump_gradient_check() {
    let started = Instant::now();
    let p = BumpParams::default();
    let dt = 1e-6;
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        // Interior of the support, clear of the critical point at the peak
        // (relative error is 0/0 there) and of the underflowing edge.
        let offset = 0.05 + 0.85 * (i as f64 / 999.0);
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let t = 0.5 + i as f64 * 0.01;
        let x = p.c3 * t + sign * offset;
        let analytic = bump_velocity(x, t, &p);
        let fd = (bump(x, t + dt, &p) - bump(x, t - dt, &p)) / (2.0 * dt);
        worst = worst.max((analytic - fd).abs() / fd.abs().max(f64::MIN_POSITIVE));
    }
    report(
        "c08 gradient-check",
        started,
        5.0,
        worst < 1e-6,
        format!("max rel err vs central differences = {worst:.2e}"),
    );
}

/// Curve and velocity field for the traveling bump sampled exactly at the
/// Simpson nodes of `n_quad` panels, with analytic tangents.
fn bump_curve_at_nodes(n_quad: usize, t: f64, p: &BumpParams) -> (ShapeCurve, ShapeVelocityField) {
    let nodes = 2 * n_quad + 1;
    let y0 = bump(0.0, t, p);
    let mut samples = Vec::with_capacity(nodes);
    let mut grid = Vec::with_capacity(nodes);
    let mut vals = Vec::with_capacity(nodes);
    for i in 0..nodes {
        let s = i as f64 / (nodes - 1) as f64;
        samples.push(CurveSample {
            s,
            r: Vec2::new(s, bump(s, t, p) - y0),
            t_hat: Vec2::new(1.0, bump_slope(s, t, p)).normalize(),
        });
        grid.push(s);
        vals.push(Vec2::new(0.0, bump_velocity(s, t, p)));
    }
    (
        ShapeCurve::from_samples(samples, TangentModel::Blended).unwrap(),
        ShapeVelocityField::new(grid, vals).unwrap(),
    )
}

#[test]
fn c09_quadrature_convergence() {
    let started = Instant::now();
    let p = BumpParams::default();
    let t = 4.0;
    let wrench_at = |n_quad: usize| {
        let params = ModelParams::new(0.01, 0.05)
            .unwrap()
            .with_n_quad(n_quad)
            .unwrap();
        let (curve, field) = bump_curve_at_nodes(n_quad, t, &p);
        coxswim_core::cox::tail_wrench_from(&curve, &field, &params, 0.0)
            .unwrap()
            .as_vector()
    };
    let reference = wrench_at(4096);
    let errors: Vec<f64> = [16usize, 32, 64, 128]
        .iter()
        .map(|&n| (wrench_at(n) - reference).norm())
        .collect();
    let orders: Vec<f64> = errors
        .windows(2)
        .map(|w| (w[0] / w[1]).log2())
        .collect();
    let ok = orders.iter().all(|&p| p >= 3.5);
    report(
        "c09 quadrature-convergence",
        started,
        5.0,
        ok,
        format!("observed orders = {orders:?}"),
    );
}

#[test]
fn c10_purcell_controllability() {
    let started = Instant::now();
    let params = ModelParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut all_rank3 = true;
    let mut worst_gap = f64::INFINITY;
    for _ in 0..20 {
        // Non-degenerate shapes: keep the joints away from the straight
        // configuration so both angles matter.
        let draw = |rng: &mut ChaCha8Rng| {
            let mag: f64 = rng.gen_range(0.1..2.5);
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            sign * mag
        };
        let shape = PurcellShape::new(draw(&mut rng), draw(&mut rng)).unwrap();
        let f = filtration(&shape, &params, 3).unwrap();
        all_rank3 &= f.rank_strong == 3 && f.weakly_controllable();
        let sigma1 = f.sv_strong[0];
        let sigma3 = f.sv_strong.get(2).copied().unwrap_or(0.0);
        worst_gap = worst_gap.min(sigma3 / (f.threshold * sigma1));
    }
    report(
        "c10 purcell-controllability",
        started,
        30.0,
        all_rank3 && worst_gap >= 1e3,
        format!("rank(h2⊕h3) = 3 at all 20 shapes; min σ₃/(threshold·σ₁) = {worst_gap:.2e}"),
    );
}

#[test]
fn c11_curvature_holonomy_cross_check() {
    let started = Instant::now();
    let params = ModelParams::default();
    let eps = 1e-2;
    let steps_per_leg = 40usize;
    let shapes = [
        (0.3, -0.4),
        (0.7, 0.2),
        (-0.9, 0.6),
        (1.2, -1.0),
        (-0.5, -1.3),
    ];
    let mut worst: f64 = 0.0;
    for &(a1, a2) in &shapes {
        let shape = PurcellShape::new(a1, a2).unwrap();
        let da = connection_curvature(&shape, &params).unwrap();
        // Square stroke loop a1 → a1+ε → (a2+ε) → back, integrated with the
        // exact exponential; its logarithm per unit area is −DA to first
        // order in the loop area.
        let path1 = PiecewiseLinearPath::new(
            vec![0.0, 1.0, 2.0, 3.0, 4.0],
            vec![a1, a1 + eps, a1 + eps, a1, a1],
        )
        .unwrap();
        let path2 = PiecewiseLinearPath::new(
            vec![0.0, 1.0, 2.0, 3.0, 4.0],
            vec![a2, a2, a2 + eps, a2 + eps, a2],
        )
        .unwrap();
        let program = PurcellProgram::new(path1, path2);
        let opts = SimOptions {
            coupling: Coupling::FullBody,
            sampling: SamplingMode::Midpoint,
            ..SimOptions::default()
        };
        let dt = 1.0 / steps_per_leg as f64;
        let traj = simulate(&program, &params, 4.0, dt, &opts, Pose::identity()).unwrap();
        let holonomy = se2_log(&traj.final_pose()) / (eps * eps);
        let rel = (da - (-holonomy)).norm() / da.norm();
        worst = worst.max(rel);
    }
    report(
        "c11 curvature-holonomy",
        started,
        30.0,
        worst < 0.05,
        format!("max rel err between D𝔸 and loop holonomy/area = {worst:.2e}"),
    );
}

#[test]
fn c12_se2_exponential_subgroup_property() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let g = Pose::new(
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-PI..PI),
        );
        let xi = BodyVelocity {
            v0x: rng.gen_range(-2.0..2.0),
            v0y: rng.gen_range(-2.0..2.0),
            omega0: rng.gen_range(-3.0..3.0),
        };
        let dt = rng.gen_range(1e-9..0.5);
        let twice = step_pose(&step_pose(&g, &xi, dt), &xi, dt);
        let once = step_pose(&g, &xi, 2.0 * dt);
        worst = worst
            .max((twice.x - once.x).abs())
            .max((twice.y - once.y).abs())
            .max(coxswim_core::dynamics::angle_difference(twice.theta, once.theta).abs());
    }
    report(
        "c12 se2-exponential",
        started,
        1.0,
        worst < 1e-12,
        format!("max composition deviation = {worst:.2e}"),
    );
}
