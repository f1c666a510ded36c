//! Local connection, curvature, bracket filtration, and rank conditions for
//! the 3-link swimmer.
//!
//! The shape space is the two joint angles; the kinematics are driftless,
//! `ξ = −𝔸(x)·u` with `u = (α̇₁, α̇₂)`. The filtration
//!
//! ```text
//! h₁ = span {𝔸(x)·X}
//! h₂ = span {D𝔸(x)(X, Y)}
//! h₃ = span {L_Z D𝔸 − [𝔸(x)·Z, D𝔸],  [D𝔸, D𝔸]}
//! ```
//!
//! feeds two rank conditions on the Lie algebra of planar rigid motions:
//! rank(h₁⊕h₂⊕h₃) = 3 for local weak controllability and
//! rank(h₂⊕h₃) = 3 for local strong controllability. Curvature and Lie
//! derivatives are computed with central finite differences on the
//! connection columns; the curvature formula is
//! `D𝔸(X,Y) = ∂_X(𝔸Y) − ∂_Y(𝔸X) − [𝔸X, 𝔸Y]`.

use nalgebra::{DMatrix, Matrix3x2, Vector2, Vector3};

use crate::error::{Error, Result};
use crate::geometry::ModelParams;
use crate::shapes::{purcell_deformation_field, PurcellShape};

/// Element of the Lie algebra of planar rigid motions in the basis
/// (x-translation, y-translation, rotation).
pub type Se2Vector = Vector3<f64>;

/// Default finite-difference step (radians) for the curvature.
pub const DEFAULT_CURVATURE_STEP: f64 = 1e-5;
/// Default finite-difference step (radians) for Lie derivatives of the
/// curvature; one level of differentiation above the curvature itself, so a
/// larger step keeps the rounding noise down.
pub const DEFAULT_LIE_STEP: f64 = 1e-4;
/// Default relative singular-value threshold for numerical ranks.
pub const DEFAULT_RANK_THRESHOLD: f64 = 1e-8;

/// Local connection at a shape point: maps shape velocity to minus the body
/// velocity, `ξ = −𝔸(x)·u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalConnection {
    pub matrix: Matrix3x2<f64>,
}

impl LocalConnection {
    pub fn column(&self, j: usize) -> Se2Vector {
        self.matrix.column(j).into_owned()
    }

    pub fn apply(&self, u: Vector2<f64>) -> Se2Vector {
        self.matrix * u
    }
}

/// Assemble the local connection by solving the full-coupling balance for
/// unit joint rates: column `j` is −ξ for `α̇_j = 1`. The resistance matrix
/// is shared between the two columns.
pub fn local_connection(shape: &PurcellShape, params: &ModelParams) -> Result<LocalConnection> {
    let curve = shape.curve()?;
    let a = crate::cox::full_resistance(&curve, params)?;
    let mut cols = [Se2Vector::zeros(); 2];
    for (j, rates) in [(0usize, (1.0, 0.0)), (1usize, (0.0, 1.0))] {
        let field = purcell_deformation_field(shape, rates.0, rates.1)?;
        let w = crate::cox::tail_wrench_from(&curve, &field, params, 0.0)?;
        let xi = crate::solver::solve_head_velocity(&a, &w, crate::solver::BalanceSign::Opposing)?;
        cols[j] = -xi.as_vector();
    }
    Ok(LocalConnection {
        matrix: Matrix3x2::from_columns(&cols),
    })
}

/// Lie bracket on the algebra of planar rigid motions with basis
/// (e₁, e₂, e₃) = (x-translation, y-translation, rotation):
/// [e₃, e₁] = e₂, [e₃, e₂] = −e₁, [e₁, e₂] = 0.
pub fn se2_bracket(a: &Se2Vector, b: &Se2Vector) -> Se2Vector {
    Se2Vector::new(b.z * a.y - a.z * b.y, a.z * b.x - b.z * a.x, 0.0)
}

fn shifted(shape: &PurcellShape, dir: Vector2<f64>, step: f64) -> Result<PurcellShape> {
    PurcellShape::with_fractions(
        shape.alpha1 + step * dir.x,
        shape.alpha2 + step * dir.y,
        shape.fractions,
    )
}

/// Connection column along an arbitrary shape direction: `𝔸(x)·d`.
fn connection_along(
    shape: &PurcellShape,
    params: &ModelParams,
    dir: Vector2<f64>,
) -> Result<Se2Vector> {
    Ok(local_connection(shape, params)?.apply(dir))
}

/// Curvature along two arbitrary shape directions, central differences with
/// the given step.
pub fn connection_curvature_directional(
    shape: &PurcellShape,
    params: &ModelParams,
    x_dir: Vector2<f64>,
    y_dir: Vector2<f64>,
    step: f64,
) -> Result<Se2Vector> {
    if !(step > 0.0) || step < 1e-12 {
        return Err(Error::InvalidParam {
            name: "step",
            value: step,
            constraint: "finite-difference step must exceed 1e-12",
        });
    }
    let d_x_of_ay = {
        let plus = connection_along(&shifted(shape, x_dir, step)?, params, y_dir)?;
        let minus = connection_along(&shifted(shape, x_dir, -step)?, params, y_dir)?;
        (plus - minus) / (2.0 * step)
    };
    let d_y_of_ax = {
        let plus = connection_along(&shifted(shape, y_dir, step)?, params, x_dir)?;
        let minus = connection_along(&shifted(shape, y_dir, -step)?, params, x_dir)?;
        (plus - minus) / (2.0 * step)
    };
    let conn = local_connection(shape, params)?;
    let bracket = se2_bracket(&conn.apply(x_dir), &conn.apply(y_dir));
    Ok(d_x_of_ay - d_y_of_ax - bracket)
}

/// Curvature `D𝔸(e₁, e₂)` at the shape with the default step. With a
/// two-dimensional shape space this single value spans h₂.
pub fn connection_curvature(shape: &PurcellShape, params: &ModelParams) -> Result<Se2Vector> {
    connection_curvature_with_step(shape, params, DEFAULT_CURVATURE_STEP)
}

/// [`connection_curvature`] with an explicit finite-difference step.
pub fn connection_curvature_with_step(
    shape: &PurcellShape,
    params: &ModelParams,
    step: f64,
) -> Result<Se2Vector> {
    connection_curvature_directional(
        shape,
        params,
        Vector2::new(1.0, 0.0),
        Vector2::new(0.0, 1.0),
        step,
    )
}

/// Bracket-generated subspaces h₁, h₂, h₃ with numerical ranks.
#[derive(Debug, Clone)]
pub struct Filtration {
    pub h1: Vec<Se2Vector>,
    pub h2: Vec<Se2Vector>,
    /// Lie-derivative generators of h₃: `L_Z D𝔸 − [𝔸·Z, D𝔸]`.
    pub h3_lie: Vec<Se2Vector>,
    /// Bracket generators of h₃: `[D𝔸, D𝔸]` pairs (zero when h₂ has a
    /// single generator, still evaluated and reported).
    pub h3_bracket: Vec<Se2Vector>,
    pub rank_h1: usize,
    pub rank_h2: usize,
    /// Rank of h₁ ⊕ h₂ ⊕ h₃ (the weak condition asks for 3).
    pub rank_weak: usize,
    /// Rank of h₂ ⊕ h₃ (the strong condition asks for 3).
    pub rank_strong: usize,
    /// Singular values behind `rank_weak`, descending.
    pub sv_weak: Vec<f64>,
    /// Singular values behind `rank_strong`, descending.
    pub sv_strong: Vec<f64>,
    pub threshold: f64,
}

impl Filtration {
    pub fn weakly_controllable(&self) -> bool {
        self.rank_weak == 3
    }

    pub fn strongly_controllable(&self) -> bool {
        self.rank_strong == 3
    }

    pub fn h3(&self) -> Vec<Se2Vector> {
        let mut all = self.h3_lie.clone();
        all.extend_from_slice(&self.h3_bracket);
        all
    }
}

/// Numerical rank by singular values with a relative threshold; returns the
/// rank and the singular values in descending order.
pub fn numerical_rank(vectors: &[Se2Vector], rel_threshold: f64) -> (usize, Vec<f64>) {
    if vectors.is_empty() {
        return (0, Vec::new());
    }
    let m = DMatrix::from_fn(3, vectors.len(), |i, j| vectors[j][i]);
    let mut sv: Vec<f64> = m.svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
    let largest = sv.first().copied().unwrap_or(0.0);
    if largest == 0.0 {
        return (0, sv);
    }
    let rank = sv.iter().filter(|&&s| s >= rel_threshold * largest).count();
    (rank, sv)
}

/// Evaluate the filtration at a shape up to the given depth (1 ≤ depth ≤ 3).
pub fn filtration(shape: &PurcellShape, params: &ModelParams, depth: usize) -> Result<Filtration> {
    filtration_in_basis(
        shape,
        params,
        [Vector2::new(1.0, 0.0), Vector2::new(0.0, 1.0)],
        depth,
    )
}

/// [`filtration`] with the shape-tangent basis replaced by two arbitrary
/// directions. The spans are basis-independent; this entry point exists so
/// that invariance can be checked numerically.
pub fn filtration_in_basis(
    shape: &PurcellShape,
    params: &ModelParams,
    basis: [Vector2<f64>; 2],
    depth: usize,
) -> Result<Filtration> {
    if depth == 0 || depth > 3 {
        return Err(Error::InvalidParam {
            name: "depth",
            value: depth as f64,
            constraint: "filtration depth must be 1, 2, or 3",
        });
    }
    let conn = local_connection(shape, params)?;
    let h1 = vec![conn.apply(basis[0]), conn.apply(basis[1])];
    let mut h2 = Vec::new();
    let mut h3_lie = Vec::new();
    let mut h3_bracket = Vec::new();
    if depth >= 2 {
        let da = connection_curvature_directional(
            shape,
            params,
            basis[0],
            basis[1],
            DEFAULT_CURVATURE_STEP,
        )?;
        h2.push(da);
        if depth >= 3 {
            for z in basis {
                let da_plus = connection_curvature_directional(
                    &shifted(shape, z, DEFAULT_LIE_STEP)?,
                    params,
                    basis[0],
                    basis[1],
                    DEFAULT_CURVATURE_STEP,
                )?;
                let da_minus = connection_curvature_directional(
                    &shifted(shape, z, -DEFAULT_LIE_STEP)?,
                    params,
                    basis[0],
                    basis[1],
                    DEFAULT_CURVATURE_STEP,
                )?;
                let lie = (da_plus - da_minus) / (2.0 * DEFAULT_LIE_STEP);
                h3_lie.push(lie - se2_bracket(&conn.apply(z), &da));
            }
            // All h₂ values are multiples of the single generator, so every
            // bracket pair vanishes; evaluated anyway and reported.
            h3_bracket.push(se2_bracket(&da, &da));
        }
    }
    let (rank_h1, _) = numerical_rank(&h1, DEFAULT_RANK_THRESHOLD);
    let (rank_h2, _) = numerical_rank(&h2, DEFAULT_RANK_THRESHOLD);
    let mut strong = h2.clone();
    strong.extend_from_slice(&h3_lie);
    strong.extend_from_slice(&h3_bracket);
    let (rank_strong, sv_strong) = numerical_rank(&strong, DEFAULT_RANK_THRESHOLD);
    let mut weak = h1.clone();
    weak.extend_from_slice(&strong);
    let (rank_weak, sv_weak) = numerical_rank(&weak, DEFAULT_RANK_THRESHOLD);
    Ok(Filtration {
        h1,
        h2,
        h3_lie,
        h3_bracket,
        rank_h1,
        rank_h2,
        rank_weak,
        rank_strong,
        sv_weak,
        sv_strong,
        threshold: DEFAULT_RANK_THRESHOLD,
    })
}

/// Rectangular grid over the joint-angle square.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub alpha1_min: f64,
    pub alpha1_max: f64,
    pub n1: usize,
    pub alpha2_min: f64,
    pub alpha2_max: f64,
    pub n2: usize,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        let pi = std::f64::consts::PI;
        for &(lo, hi, n) in &[
            (self.alpha1_min, self.alpha1_max, self.n1),
            (self.alpha2_min, self.alpha2_max, self.n2),
        ] {
            if n == 0 {
                return Err(Error::InvalidParam {
                    name: "grid size",
                    value: n as f64,
                    constraint: "grid must have at least one point per axis",
                });
            }
            if !(lo.is_finite() && hi.is_finite()) || lo > hi || lo <= -pi || hi >= pi {
                return Err(Error::InvalidParam {
                    name: "grid range",
                    value: lo,
                    constraint: "grid must lie inside (−π, π) with min ≤ max",
                });
            }
        }
        Ok(())
    }

    /// Grid points in row-major order (alpha1 outer, alpha2 inner).
    pub fn points(&self) -> Vec<(f64, f64)> {
        let axis = |lo: f64, hi: f64, n: usize| -> Vec<f64> {
            if n == 1 {
                vec![0.5 * (lo + hi)]
            } else {
                (0..n)
                    .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
                    .collect()
            }
        };
        let a1 = axis(self.alpha1_min, self.alpha1_max, self.n1);
        let a2 = axis(self.alpha2_min, self.alpha2_max, self.n2);
        let mut pts = Vec::with_capacity(self.n1 * self.n2);
        for &x in &a1 {
            for &y in &a2 {
                pts.push((x, y));
            }
        }
        pts
    }
}

/// One row of the controllability scan.
#[derive(Debug, Clone)]
pub struct ReportRow {
    pub alpha1: f64,
    pub alpha2: f64,
    pub rank_weak: usize,
    pub rank_strong: usize,
    pub weak: bool,
    pub strong: bool,
    /// Per-point failure, recorded instead of aborting the scan.
    pub error: Option<String>,
}

/// Evaluate both rank conditions on every grid point.
pub fn controllability_report(grid: &GridSpec, params: &ModelParams) -> Result<Vec<ReportRow>> {
    grid.validate()?;
    let rows = grid
        .points()
        .into_iter()
        .map(|(a1, a2)| {
            let outcome = PurcellShape::new(a1, a2).and_then(|s| filtration(&s, params, 3));
            match outcome {
                Ok(f) => ReportRow {
                    alpha1: a1,
                    alpha2: a2,
                    rank_weak: f.rank_weak,
                    rank_strong: f.rank_strong,
                    weak: f.weakly_controllable(),
                    strong: f.strongly_controllable(),
                    error: None,
                },
                Err(e) => ReportRow {
                    alpha1: a1,
                    alpha2: a2,
                    rank_weak: 0,
                    rank_strong: 0,
                    weak: false,
                    strong: false,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    Ok(rows)
}
