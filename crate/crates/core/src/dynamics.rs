//! Head-pose integration on SE(2) and world-frame reconstruction.
//!
//! The body velocity ξ solved at each step is held frozen over the step and
//! the pose advances by the exact group exponential, `g ← g · exp(dt·ξ̂)`.
//! This preserves the group structure exactly; the only discretization error
//! is the sampling of ξ(t).

use nalgebra::Vector3;

use crate::cox::{full_resistance, head_resistance, tail_wrench, tail_wrench_from};
use crate::error::{Error, Result};
use crate::geometry::{ModelParams, ShapeCurve, Vec2};
use crate::shapes::ShapeProgram;
use crate::solver::{balance_residual, solve_head_velocity_capped, BalanceSign, BodyVelocity};

/// Planar rigid placement of the head tip in the world frame.
///
/// `theta` is kept in `(−π, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

/// Normalize an angle to `(−π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let r = theta.rem_euclid(two_pi);
    if r > std::f64::consts::PI {
        r - two_pi
    } else {
        r
    }
}

/// Signed angular difference `a − b` wrapped to `(−π, π]`.
pub fn angle_difference(a: f64, b: f64) -> f64 {
    wrap_angle(a - b)
}

impl Pose {
    pub fn identity() -> Self {
        Pose {
            x: 0.0,
            y: 0.0,
            theta: 0.0,
        }
    }

    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Pose {
            x,
            y,
            theta: wrap_angle(theta),
        }
    }

    /// Group composition `self ∘ other`.
    pub fn compose(&self, other: &Pose) -> Pose {
        let (s, c) = self.theta.sin_cos();
        Pose {
            x: self.x + c * other.x - s * other.y,
            y: self.y + s * other.x + c * other.y,
            theta: wrap_angle(self.theta + other.theta),
        }
    }

    /// Apply the rigid transform to a point.
    pub fn apply(&self, p: Vec2) -> Vec2 {
        let (s, c) = self.theta.sin_cos();
        Vec2::new(self.x + c * p.x - s * p.y, self.y + s * p.x + c * p.y)
    }

    pub fn inverse(&self) -> Pose {
        let (s, c) = self.theta.sin_cos();
        Pose {
            x: -(c * self.x + s * self.y),
            y: -(-s * self.x + c * self.y),
            theta: wrap_angle(-self.theta),
        }
    }
}

/// `sin θ / θ` and `(1 − cos θ) / θ` with series branches below |θ| = 1e−4,
/// so the exponential stays exact through the pure-translation limit.
fn sinc_vers(theta: f64) -> (f64, f64) {
    if theta.abs() < 1e-4 {
        let t2 = theta * theta;
        (
            1.0 - t2 / 6.0 + t2 * t2 / 120.0,
            theta * (0.5 - t2 / 24.0 + t2 * t2 / 720.0),
        )
    } else {
        ((theta.sin()) / theta, (1.0 - theta.cos()) / theta)
    }
}

/// Group exponential `exp(dt·ξ̂)` as a pose displacement.
pub fn se2_exp(xi: &BodyVelocity, dt: f64) -> Pose {
    let theta = xi.omega0 * dt;
    let ux = xi.v0x * dt;
    let uy = xi.v0y * dt;
    let (sinc, vers) = sinc_vers(theta);
    Pose {
        x: sinc * ux - vers * uy,
        y: vers * ux + sinc * uy,
        theta: wrap_angle(theta),
    }
}

/// Group logarithm: the tangent vector (vx, vy, ω) with `exp` inverse of
/// [`se2_exp`] at `dt = 1`.
pub fn se2_log(g: &Pose) -> Vector3<f64> {
    let theta = g.theta;
    let (sinc, vers) = sinc_vers(theta);
    let det = sinc * sinc + vers * vers;
    let vx = (sinc * g.x + vers * g.y) / det;
    let vy = (-vers * g.x + sinc * g.y) / det;
    Vector3::new(vx, vy, theta)
}

/// Advance the pose by the frozen body velocity over one step.
pub fn step_pose(g: &Pose, xi: &BodyVelocity, dt: f64) -> Pose {
    g.compose(&se2_exp(xi, dt))
}

/// Apply the rigid transform to every sample position of the curve.
pub fn reconstruct_world(curve: &ShapeCurve, g: &Pose) -> Vec<Vec2> {
    curve.samples().iter().map(|c| g.apply(c.r)).collect()
}

/// Which parts of the body contribute rigid drag in the balance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Coupling {
    /// Only the straight head segment `[0, δ]` resists rigid motion; the
    /// prescribed field drives the tail as-is. Default.
    #[default]
    HeadOnly,
    /// The whole body resists rigid motion and the prescribed field is
    /// deformation-only.
    FullBody,
}

/// Where within each step the shape program is queried.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SamplingMode {
    /// Query at the step's left endpoint. Default.
    #[default]
    LeftEndpoint,
    /// Query at the step midpoint; makes exactly retraced strokes cancel to
    /// machine precision.
    Midpoint,
}

/// Simulation options.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    pub coupling: Coupling,
    pub sampling: SamplingMode,
    pub condition_cap: f64,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            coupling: Coupling::default(),
            sampling: SamplingMode::default(),
            condition_cap: crate::solver::DEFAULT_CONDITION_CAP,
        }
    }
}

/// One recorded simulation sample.
#[derive(Debug, Clone, Copy)]
pub struct TrajectorySample {
    pub t: f64,
    pub pose: Pose,
    /// Continuously accumulated heading (no wrapping discontinuities).
    pub theta_unwrapped: f64,
    /// Body velocity used to step away from `t` (at the final sample, the
    /// velocity evaluated at `t_end`).
    pub xi: BodyVelocity,
    /// ∞-norm of the balance residual of this step's solve.
    pub solve_residual: f64,
}

/// Uniformly sampled time history of pose and body velocity.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub dt: f64,
    pub samples: Vec<TrajectorySample>,
}

impl Trajectory {
    pub fn final_pose(&self) -> Pose {
        self.samples.last().expect("non-empty trajectory").pose
    }

    pub fn final_theta_unwrapped(&self) -> f64 {
        self.samples
            .last()
            .expect("non-empty trajectory")
            .theta_unwrapped
    }

    /// Net (Δx, Δy, Δθ_unwrapped) over the run.
    pub fn net_displacement(&self) -> (f64, f64, f64) {
        let first = self.samples.first().expect("non-empty trajectory");
        let last = self.samples.last().expect("non-empty trajectory");
        (
            last.pose.x - first.pose.x,
            last.pose.y - first.pose.y,
            last.theta_unwrapped - first.theta_unwrapped,
        )
    }

    pub fn max_residual(&self) -> f64 {
        self.samples
            .iter()
            .fold(0.0f64, |m, s| m.max(s.solve_residual))
    }
}

/// Simulate the head pose under a shape program from `start`, recording
/// `t_end/dt + 1` uniform samples. Deterministic given its inputs.
pub fn simulate(
    program: &dyn ShapeProgram,
    params: &ModelParams,
    t_end: f64,
    dt: f64,
    options: &SimOptions,
    start: Pose,
) -> Result<Trajectory> {
    if !(dt > 0.0) || !(t_end > 0.0) {
        return Err(Error::InvalidParam {
            name: "dt/t_end",
            value: dt.min(t_end),
            constraint: "time step and horizon must be positive",
        });
    }
    let steps_f = t_end / dt;
    let n = steps_f.round();
    if n < 1.0 || (steps_f - n).abs() > 1e-9 * steps_f.max(1.0) {
        return Err(Error::InvalidParam {
            name: "t_end/dt",
            value: steps_f,
            constraint: "horizon must be an integral number of steps",
        });
    }
    let n = n as usize;
    let mut pose = start;
    let mut theta_unwrapped = start.theta;
    let mut samples = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let t = k as f64 * dt;
        let t_query = if k == n {
            t_end
        } else {
            match options.sampling {
                SamplingMode::LeftEndpoint => t,
                SamplingMode::Midpoint => t + 0.5 * dt,
            }
        };
        let (curve, field) = program.shape_at(t_query).map_err(|e| e.at_time(t_query))?;
        let (a, w) = match options.coupling {
            Coupling::HeadOnly => {
                let a = head_resistance(curve.head_tangent(), params)
                    .map_err(|e| e.at_time(t_query))?;
                let w = tail_wrench(&curve, &field, params).map_err(|e| e.at_time(t_query))?;
                (a, w)
            }
            Coupling::FullBody => {
                let a = full_resistance(&curve, params).map_err(|e| e.at_time(t_query))?;
                let w = tail_wrench_from(&curve, &field, params, 0.0)
                    .map_err(|e| e.at_time(t_query))?;
                (a, w)
            }
        };
        let xi = solve_head_velocity_capped(&a, &w, BalanceSign::Opposing, options.condition_cap)
            .map_err(|e| e.at_time(t_query))?;
        let solve_residual = balance_residual(&a, &xi, &w);
        samples.push(TrajectorySample {
            t,
            pose,
            theta_unwrapped,
            xi,
            solve_residual,
        });
        if k < n {
            pose = step_pose(&pose, &xi, dt);
            theta_unwrapped += xi.omega0 * dt;
        }
    }
    Ok(Trajectory { dt, samples })
}
