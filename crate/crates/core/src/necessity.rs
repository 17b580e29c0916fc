//! Counterexample machinery: the δ-threshold above which aligned offset
//! isometries are impossible, a constructor for such isometries at tuple
//! sizes up to three, per-tuple necessity probes that turn a positive
//! averaged-Lipschitz gap into a concrete infeasible extension system, the
//! affinity probe, and the unit-square demonstration with its exact
//! constants.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use core::f64::consts::PI;

use crate::checker::{
    self, ConditionReport, EnumerationPolicy, VectorFieldSample,
};
use crate::error::Error;
use crate::feasibility::{self, ConstraintSet, ConstraintSystem, FeasibilityOutcome};
use crate::geometry::{self, PointSet, RealVector, Tolerances};
use crate::scalar;
use crate::simplex::{self, SimplexQuadratic};

/// δ is placed this fraction above the threshold, which requires a strict
/// inequality that floating point cannot honor at equality.
pub const DELTA_MARGIN: f64 = 0.01;

/// The explicit bound above which no aligned offset isometry exists:
/// `8·diam² + 3C + ((8·diam² + 2C) / gap)²`.
///
/// `gap` is the amount by which `‖Δv‖` exceeds `‖Δx‖` at the probed tuple and
/// must be positive.
pub fn delta_threshold(diam_a: f64, c: f64, gap: f64) -> Result<f64, Error> {
    if diam_a.is_nan() || diam_a < 0.0 || c.is_nan() || c <= 0.0 {
        return Err(Error::HypothesisViolated(String::from(
            "threshold needs diam >= 0 and C > 0",
        )));
    }
    if gap.is_nan() || gap <= 0.0 {
        return Err(Error::HypothesisViolated(String::from(
            "threshold needs a positive gap",
        )));
    }
    let d2 = 8.0 * diam_a * diam_a;
    let ratio = (d2 + 2.0 * c) / gap;
    Ok(d2 + 3.0 * c + ratio * ratio)
}

/// A deterministic unit vector orthogonal to everything in `span`, or `None`
/// when the span already fills the space.
fn unit_orthogonal(span: &[RealVector], dim: usize) -> Option<RealVector> {
    let mut basis: Vec<RealVector> = Vec::new();
    for v in span {
        let mut r = v.clone();
        for b in &basis {
            let ip = r.dot(b);
            r.add_scaled_assign(b, -ip);
        }
        if let Some(unit) = r.normalized() {
            if r.norm() > 1e-12 {
                basis.push(unit);
            }
        }
    }
    let mut best: Option<RealVector> = None;
    let mut best_norm = 0.0_f64;
    for axis in 0..dim {
        let mut coords = vec![0.0; dim];
        coords[axis] = 1.0;
        let mut r = RealVector::new(coords).ok()?;
        for b in &basis {
            let ip = r.dot(b);
            r.add_scaled_assign(b, -ip);
        }
        let n = r.norm();
        if n > best_norm {
            best_norm = n;
            best = Some(r.scale(1.0 / n));
        }
    }
    if best_norm > 1e-9 {
        best
    } else {
        None
    }
}

/// Bisection for `h(θ) = α + β·cos θ = target` on `[0, π]` with `β ≥ 0`.
///
/// The caller guarantees the bracket `h(0) ≥ target ≥ h(π)` up to `slack`;
/// violations are geometry inconsistencies, never silently approximated.
fn bisect_on_circle(alpha: f64, beta: f64, target: f64, slack: f64) -> Result<f64, Error> {
    let h = |theta: f64| alpha + beta * scalar::cos(theta);
    if h(0.0) < target - slack || h(PI) > target + slack {
        return Err(Error::GeometryInconsistency(format!(
            "root bracket failed: h(0)={:.6e}, h(pi)={:.6e}, target={:.6e}",
            h(0.0),
            h(PI),
            target
        )));
    }
    let mut lo = 0.0_f64;
    let mut hi = PI;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) >= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Builds an isometric copy `u` of up to three points whose offsets from `v`
/// all have inner product `√δ` with the unit direction `w`, pinning
/// `u(x₁) = v(x₁) + √δ·w`.
///
/// The second point is found on the circle of radius `‖x₁ − x₂‖` about
/// `u(x₁)` inside the plane spanned by `w` and the image direction; the third
/// on the circle of positions congruent to the triangle, both by bisection on
/// the angle (the intermediate-value structure guarantees the brackets when
/// the zero-sum contraction inequalities hold for `v` on the points). `v`
/// must be pairwise 1-Lipschitz on the points.
pub fn construct_offset_isometry(
    points: &PointSet,
    v_values: &PointSet,
    w: &RealVector,
    delta: f64,
    tol: &Tolerances,
) -> Result<PointSet, Error> {
    let m = points.len();
    let target_dim = w.dim();
    if m > 3 {
        return Err(Error::TupleSizeCap { m_max: m, limit: 3 });
    }
    if v_values.len() != m {
        return Err(Error::DimensionMismatch { expected: m, found: v_values.len() });
    }
    if v_values.dim() != target_dim {
        return Err(Error::DimensionMismatch { expected: target_dim, found: v_values.dim() });
    }
    if m > target_dim {
        return Err(Error::InsufficientDimension { needed: m, target: target_dim });
    }
    if scalar::abs(w.norm() - 1.0) > 1e-9 {
        return Err(Error::HypothesisViolated(String::from("w must be a unit vector")));
    }
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::HypothesisViolated(String::from("delta must be positive")));
    }
    for i in 0..m {
        for j in i + 1..m {
            let dv = v_values.point(i).distance(v_values.point(j));
            let dx = points.point(i).distance(points.point(j));
            if dv > dx + tol.feas_tol {
                return Err(Error::HypothesisViolated(format!(
                    "v is not 1-Lipschitz on the points (pair {i},{j})"
                )));
            }
        }
    }

    let sqrt_delta = scalar::sqrt(delta);
    let diam = geometry::diameter(points)?;
    let scale = 1.0 + sqrt_delta + diam + (0..m).map(|i| v_values.point(i).norm()).fold(0.0, f64::max);
    let slack = tol.feas_tol * scale + 1e-9 * scale;

    let u1 = v_values.point(0).add(&w.scale(sqrt_delta));
    if m == 1 {
        return PointSet::new(vec![u1]);
    }

    // Second point: circle of radius d about u1 in the plane span{w, side}.
    let d12 = points.point(0).distance(points.point(1));
    if d12 <= 0.0 {
        return Err(Error::HypothesisViolated(String::from(
            "x1 and x2 must be distinct",
        )));
    }
    let side = v_values.point(1).sub(v_values.point(0));
    let mut in_plane = side.clone();
    let ip = in_plane.dot(w);
    in_plane.add_scaled_assign(w, -ip);
    let e2 = match in_plane.normalized() {
        Some(unit) if in_plane.norm() > 1e-9 * scale => unit,
        _ => unit_orthogonal(std::slice::from_ref(w), target_dim).ok_or(Error::InsufficientDimension {
            needed: 2,
            target: target_dim,
        })?,
    };
    let alpha2 = u1.sub(v_values.point(1)).dot(w);
    let theta2 = bisect_on_circle(alpha2, d12, sqrt_delta, slack)?;
    let mut u2 = u1.clone();
    u2.add_scaled_assign(w, d12 * scalar::cos(theta2));
    u2.add_scaled_assign(&e2, d12 * scalar::sin(theta2));
    if m == 2 {
        let out = PointSet::new(vec![u1, u2])?;
        verify_isometry_residuals(points, v_values, &out, w, sqrt_delta, slack)?;
        return Ok(out);
    }

    // Third point: circle of positions congruent to the triangle, centered on
    // the axis through u1, u2.
    let d13 = points.point(0).distance(points.point(2));
    let d23 = points.point(1).distance(points.point(2));
    let axis = u2.sub(&u1).scale(1.0 / d12);
    let along = (d13 * d13 - d23 * d23 + d12 * d12) / (2.0 * d12);
    let rho_sq = d13 * d13 - along * along;
    if rho_sq < -slack * scale {
        return Err(Error::GeometryInconsistency(String::from(
            "triangle data admits no congruent placement",
        )));
    }
    let rho = scalar::sqrt(rho_sq.max(0.0));
    let mut foot = u1.clone();
    foot.add_scaled_assign(&axis, along);

    let mut w_perp = w.clone();
    let ip = w_perp.dot(&axis);
    w_perp.add_scaled_assign(&axis, -ip);
    let w_perp_norm = w_perp.norm();

    let alpha3 = foot.sub(v_values.point(2)).dot(w);
    let u3 = if rho * w_perp_norm <= 1e-9 * scale {
        // Degenerate: either the circle is a single point or w is parallel to
        // the placed side; the inner product is then forced and must already
        // equal √δ.
        if scalar::abs(alpha3 - sqrt_delta) > slack {
            return Err(Error::GeometryInconsistency(format!(
                "degenerate circle forces inner product {alpha3:.6e}, need {sqrt_delta:.6e}"
            )));
        }
        let radial = match unit_orthogonal(std::slice::from_ref(&axis), target_dim) {
            Some(dir) => dir,
            None => {
                return Err(Error::InsufficientDimension { needed: 2, target: target_dim })
            }
        };
        let mut u3 = foot.clone();
        u3.add_scaled_assign(&radial, rho);
        u3
    } else {
        let p = w_perp.scale(1.0 / w_perp_norm);
        let q = unit_orthogonal(&[axis.clone(), p.clone()], target_dim)
            .ok_or(Error::InsufficientDimension { needed: 3, target: target_dim })?;
        let beta = rho * p.dot(w);
        let theta3 = bisect_on_circle(alpha3, beta, sqrt_delta, slack)?;
        let mut u3 = foot.clone();
        u3.add_scaled_assign(&p, rho * scalar::cos(theta3));
        u3.add_scaled_assign(&q, rho * scalar::sin(theta3));
        u3
    };

    let out = PointSet::new(vec![u1, u2, u3])?;
    verify_isometry_residuals(points, v_values, &out, w, sqrt_delta, slack)?;
    Ok(out)
}

fn verify_isometry_residuals(
    points: &PointSet,
    v_values: &PointSet,
    u_values: &PointSet,
    w: &RealVector,
    sqrt_delta: f64,
    slack: f64,
) -> Result<(), Error> {
    for i in 0..points.len() {
        let ip = u_values.point(i).sub(v_values.point(i)).dot(w);
        if scalar::abs(ip - sqrt_delta) > slack {
            return Err(Error::GeometryInconsistency(format!(
                "offset inner product at point {i} is {ip:.6e}, need {sqrt_delta:.6e}"
            )));
        }
        for j in i + 1..points.len() {
            let du = u_values.point(i).distance(u_values.point(j));
            let dx = points.point(i).distance(points.point(j));
            if scalar::abs(du - dx) > slack {
                return Err(Error::GeometryInconsistency(format!(
                    "placement is not isometric at pair ({i},{j})"
                )));
            }
        }
    }
    Ok(())
}

/// Outcome of a per-tuple necessity probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum NecessityVerdict {
    /// The aligned isometry exists but no admissible extension value does:
    /// the field fails the ball-budget extension property at this tuple.
    ViolationConfirmed,
    /// The tuple's gap is nonpositive; it witnesses nothing.
    NoViolationDetected,
    /// The solver could not certify either way (flagged loudly: a feasible
    /// outcome here conflicts with the threshold bound and indicates a
    /// numerical-tolerance problem).
    Inconclusive,
}

/// Everything a necessity probe measured.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NecessityReport {
    pub verdict: NecessityVerdict,
    /// `‖Δv‖ − ‖Δx‖` at the probed tuple and weights.
    pub gap: f64,
    pub delta_v: RealVector,
    pub delta_x_norm: f64,
    /// δ chosen above the threshold; zero when no violation was detected.
    pub delta_used: f64,
    /// Effective pointwise budget: the probe's `C` enlarged to cover the
    /// constructor's two-sided offset estimate (`4·diam²`).
    pub c_used: f64,
    pub isometry: Option<PointSet>,
    pub extension_outcome: Option<FeasibilityOutcome>,
}

/// Probes one tuple: if the averaged gap is positive, builds the aligned
/// offset isometry at `δ` just above the threshold and asks the feasibility
/// solver for an extension value within `‖x_{m+1} − xᵢ‖` of every `u(xᵢ)` and
/// within `√(δ+C)` of `v(x_{m+1})`. Infeasibility confirms that the field
/// fails the ball-budget extension property at this tuple.
pub fn necessity_probe(
    sample: &VectorFieldSample,
    base_indices: &[usize],
    extra_index: usize,
    weights: &[f64],
    c: f64,
    tol: &Tolerances,
) -> Result<NecessityReport, Error> {
    let m = base_indices.len();
    let n = sample.len();
    if m == 0 || m > 3 {
        return Err(Error::TupleSizeCap { m_max: m, limit: 3 });
    }
    if m > sample.value_dim() {
        return Err(Error::InsufficientDimension { needed: m, target: sample.value_dim() });
    }
    if weights.len() != m {
        return Err(Error::DimensionMismatch { expected: m, found: weights.len() });
    }
    if base_indices.iter().any(|&i| i >= n) || extra_index >= n {
        return Err(Error::InvalidProblem(String::from("probe indices out of range")));
    }
    let weight_sum: f64 = weights.iter().sum();
    if weights.iter().any(|&t| t < -1e-12) || scalar::abs(weight_sum - 1.0) > 1e-9 {
        return Err(Error::InvalidProblem(String::from(
            "probe weights must lie on the simplex",
        )));
    }
    if c.is_nan() || c <= 0.0 {
        return Err(Error::HypothesisViolated(String::from("probe needs C > 0")));
    }

    let mut v_mix = RealVector::zeros(sample.value_dim());
    let mut x_mix = RealVector::zeros(sample.domain_dim());
    for (&i, &t) in base_indices.iter().zip(weights) {
        v_mix.add_scaled_assign(sample.value(i), t);
        x_mix.add_scaled_assign(sample.point(i), t);
    }
    let delta_v = sample.value(extra_index).sub(&v_mix);
    let delta_x_norm = sample.point(extra_index).sub(&x_mix).norm();
    let gap = delta_v.norm() - delta_x_norm;

    if gap <= tol.feas_tol {
        return Ok(NecessityReport {
            verdict: NecessityVerdict::NoViolationDetected,
            gap,
            delta_v,
            delta_x_norm,
            delta_used: 0.0,
            c_used: c,
            isometry: None,
            extension_outcome: None,
        });
    }

    let base_points =
        PointSet::new(base_indices.iter().map(|&i| sample.point(i).clone()).collect())?;
    let base_values =
        PointSet::new(base_indices.iter().map(|&i| sample.value(i).clone()).collect())?;
    let diam = geometry::diameter(&base_points)?;
    // The constructed offsets can exceed δ by up to 4·diam², so the pointwise
    // budget must absorb that for the infeasibility argument to bind.
    let c_used = c.max(4.0 * diam * diam);
    // Aligning w against Δv realizes the shift hypothesis with the first
    // basis weight and λ = √δ/‖Δv‖.
    let w = delta_v.scale(-1.0 / delta_v.norm());
    let delta_used = delta_threshold(diam, c_used, gap)? * (1.0 + DELTA_MARGIN);
    let isometry = construct_offset_isometry(&base_points, &base_values, &w, delta_used, tol)?;

    let mut sets: Vec<ConstraintSet> = Vec::with_capacity(m + 1);
    for (slot, &i) in base_indices.iter().enumerate() {
        sets.push(ConstraintSet::Ball {
            center: isometry.point(slot).clone(),
            radius: sample.point(extra_index).distance(sample.point(i)),
        });
    }
    sets.push(ConstraintSet::Ball {
        center: sample.value(extra_index).clone(),
        radius: scalar::sqrt(delta_used + c_used),
    });
    let system = ConstraintSystem::new(sets, sample.value_dim())?;
    let start = system.default_start();
    let outcome = feasibility::solve(&system, &start, tol)?;

    let verdict = match outcome.status {
        feasibility::FeasibilityStatus::Infeasible { .. } => NecessityVerdict::ViolationConfirmed,
        feasibility::FeasibilityStatus::Feasible => NecessityVerdict::Inconclusive,
        feasibility::FeasibilityStatus::Unknown => NecessityVerdict::Inconclusive,
    };
    Ok(NecessityReport {
        verdict,
        gap,
        delta_v,
        delta_x_norm,
        delta_used,
        c_used,
        isometry: Some(isometry),
        extension_outcome: Some(outcome),
    })
}

/// Per-triple midpoint finding of the affinity probe.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AffinityFinding {
    pub i: usize,
    pub j: usize,
    pub mid: usize,
    /// `‖v(x_mid) − (v(xᵢ)+v(xⱼ))/2‖`.
    pub defect: f64,
}

/// Result of probing midpoint triples for affine consistency.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AffinityReport {
    pub findings: Vec<AffinityFinding>,
    pub max_defect: f64,
    pub pairwise_lipschitz: ConditionReport,
    /// All defects within `feas_tol` and the pairwise check passes.
    pub consistent_with_affine: bool,
}

/// Measures the midpoint defect `‖v(x_mid) − (v(xᵢ)+v(xⱼ))/2‖` for each
/// supplied triple; every named `mid` must be a genuine midpoint already
/// present in the sample.
pub fn affinity_probe(
    sample: &VectorFieldSample,
    triples: &[(usize, usize, usize)],
    tol: &Tolerances,
) -> Result<AffinityReport, Error> {
    let n = sample.len();
    let mut findings = Vec::with_capacity(triples.len());
    let mut max_defect = 0.0_f64;
    for &(i, j, mid) in triples {
        if i >= n || j >= n || mid >= n {
            return Err(Error::InvalidProblem(String::from("triple index out of range")));
        }
        let midpoint = sample.point(i).add(sample.point(j)).scale(0.5);
        if sample.point(mid).distance(&midpoint) > 1e-12 {
            return Err(Error::InvalidProblem(format!(
                "point {mid} is not the midpoint of {i} and {j}"
            )));
        }
        let value_mid = sample.value(i).add(sample.value(j)).scale(0.5);
        let defect = sample.value(mid).distance(&value_mid);
        max_defect = max_defect.max(defect);
        findings.push(AffinityFinding { i, j, mid, defect });
    }
    let pairwise_lipschitz = checker::check_pairwise_lipschitz(sample, tol)?;
    let consistent_with_affine =
        max_defect <= tol.feas_tol && pairwise_lipschitz.is_satisfied();
    Ok(AffinityReport { findings, max_defect, pairwise_lipschitz, consistent_with_affine })
}

/// Verifies the averaged-offset estimate
/// `|‖Σtᵢ(u(xᵢ)−v(xᵢ))‖² − δ| ≤ 8·diam² + 3C` on a simplex grid plus the
/// exact extrema from the simplex optimizer.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AveragedOffsetReport {
    pub bound: f64,
    pub max_observed: f64,
    pub exact_max: f64,
    pub exact_min: f64,
    pub holds: bool,
}

pub fn averaged_offset_bound_check(
    u_values: &PointSet,
    v_values: &PointSet,
    points: &PointSet,
    delta: f64,
    c: f64,
    tol: &Tolerances,
) -> Result<AveragedOffsetReport, Error> {
    let k = points.len();
    if u_values.len() != k || v_values.len() != k {
        return Err(Error::DimensionMismatch { expected: k, found: u_values.len() });
    }
    if u_values.dim() != v_values.dim() {
        return Err(Error::DimensionMismatch {
            expected: v_values.dim(),
            found: u_values.dim(),
        });
    }
    let offsets: Vec<RealVector> =
        (0..k).map(|i| u_values.point(i).sub(v_values.point(i))).collect();
    for (i, y) in offsets.iter().enumerate() {
        if scalar::abs(y.norm_squared() - delta) > c + tol.feas_tol {
            return Err(Error::HypothesisViolated(format!(
                "pointwise offset bound fails at point {i}: |{:.6e} - {delta:.6e}| > {c:.6e}",
                y.norm_squared()
            )));
        }
    }

    let diam = geometry::diameter(points)?;
    let bound = 8.0 * diam * diam + 3.0 * c;

    // q(t) = ‖Σ tᵢ yᵢ‖² − δ.
    let mut q = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            q[i * k + j] = offsets[i].dot(&offsets[j]);
        }
    }
    let quad = SimplexQuadratic::new(q, vec![0.0; k], -delta)?;
    let exact_max = simplex::maximize_over_simplex(&quad)?.value;
    let exact_min = simplex::minimize_over_simplex(&quad)?.value;
    let mut max_observed = scalar::abs(exact_max).max(scalar::abs(exact_min));
    let resolution = if k <= 4 { 10 } else { 4 };
    let grid_max = simplex::brute_force_over_simplex(&quad, resolution)?;
    max_observed = max_observed.max(scalar::abs(grid_max));

    Ok(AveragedOffsetReport {
        bound,
        max_observed,
        exact_max,
        exact_min,
        holds: max_observed <= bound + tol.feas_tol,
    })
}

/// The inequality chain of the square obstruction at one budget `C`:
/// per-vertex slack `C` on three vertices plus the parallelogram identity
/// force the fourth vertex's deviation to at least `1/√2 − 4C`, which must
/// also be at most `C`; the two collide exactly when `C < 1/(5√2)`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ObstructionReport {
    pub c: f64,
    /// `1/√2 − 4C`.
    pub lower_bound: f64,
    /// `C`.
    pub upper_bound: f64,
    /// Accumulated slack `4C` entering the lower bound.
    pub accumulated_slack: f64,
    pub chain_forbids: bool,
    pub search: PlacementSearch,
}

/// Grid-plus-polish search over rigid placements of the square in four
/// dimensions with the first vertex pinned at `δ·w`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PlacementSearch {
    pub placements_tried: usize,
    /// Smallest achievable `max_x |⟨u(x) − v(x), w⟩ − δ|` over the search.
    pub best_deviation: f64,
    /// Worst pairwise distance error of the best placement.
    pub best_isometry_residual: f64,
    pub found_within_budget: bool,
}

/// The full unit-square demonstration report.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SquareDemoReport {
    /// Averaged-Lipschitz check of the square data at tuple size three.
    pub lipschitz: ConditionReport,
    /// Distance from each vertex to the hull of the other three.
    pub vertex_hull_distances: Vec<f64>,
    /// `1/√2`.
    pub min_hull_distance: f64,
    /// `1/(2√2)`, the diagonal midpoint defect.
    pub affinity_defect: f64,
    pub affinity: AffinityReport,
    /// `1/(5√2)`: the chain forbids placements exactly below this budget.
    pub forbidden_threshold: f64,
    /// Parallelogram identity residual of an independently embedded square.
    pub parallelogram_residual: f64,
    pub obstructions: Vec<ObstructionReport>,
}

/// Runs the unit-square demonstration: the averaged-Lipschitz check of the
/// lifted-vertex field, the vertex-to-opposite-hull distance `1/√2`, the
/// affinity defect `1/(2√2)`, and the two obstruction budgets around the
/// forbidden threshold `1/(5√2)`.
pub fn square_demo(tol: &Tolerances) -> Result<SquareDemoReport, Error> {
    let corners = [[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]];
    let lift = 1.0 / scalar::sqrt(2.0);
    let domain = PointSet::new(
        corners.iter().map(|c| RealVector::from_slice(c).unwrap()).collect(),
    )?;
    let values = PointSet::new(vec![
        RealVector::zeros(3),
        RealVector::zeros(3),
        RealVector::zeros(3),
        RealVector::new(vec![0.0, 0.0, lift])?,
    ])?;
    let sample = VectorFieldSample::new(domain.clone(), values)?;

    let policy = EnumerationPolicy { m_max: 3, ..EnumerationPolicy::default() };
    let lipschitz = checker::check_lipschitz_condition(&sample, &policy, tol)?;

    let mut vertex_hull_distances = Vec::with_capacity(4);
    for i in 0..4 {
        let others: Vec<RealVector> =
            (0..4).filter(|&j| j != i).map(|j| domain.point(j).clone()).collect();
        let hull = PointSet::new(others)?;
        vertex_hull_distances.push(geometry::hull_distance(domain.point(i), &hull)?);
    }
    let min_hull_distance = vertex_hull_distances.iter().fold(f64::INFINITY, |a, &b| a.min(b));

    // Affinity probe on the square plus its center; the center value extends
    // the three zero vertices, so the lifted diagonal shows the full defect.
    let mut probe_points: Vec<RealVector> = domain.iter().cloned().collect();
    probe_points.push(RealVector::new(vec![0.5, 0.5])?);
    let mut probe_values: Vec<RealVector> = sample.values().iter().cloned().collect();
    probe_values.push(RealVector::zeros(3));
    let probe_sample =
        VectorFieldSample::new(PointSet::new(probe_points)?, PointSet::new(probe_values)?)?;
    let affinity = affinity_probe(&probe_sample, &[(0, 3, 4), (1, 2, 4)], tol)?;
    let affinity_defect =
        affinity.findings.iter().map(|f| f.defect).fold(0.0_f64, f64::max);

    // Independent congruent placement of the square through the distance
    // matrix embedding; any isometric placement must satisfy the
    // parallelogram identity.
    let mut dist = vec![0.0; 16];
    for i in 0..4 {
        for j in 0..4 {
            dist[i * 4 + j] = domain.point(i).distance(domain.point(j));
        }
    }
    let embedded = rigid_square_residual(&dist, tol)?;

    let forbidden_threshold = 1.0 / (5.0 * scalar::sqrt(2.0));
    let obstructions = vec![
        obstruction_report(0.1, lift, tol)?,
        obstruction_report(0.2, lift, tol)?,
    ];

    Ok(SquareDemoReport {
        lipschitz,
        vertex_hull_distances,
        min_hull_distance,
        affinity_defect,
        affinity,
        forbidden_threshold,
        parallelogram_residual: embedded,
        obstructions,
    })
}

fn rigid_square_residual(dist: &[f64], tol: &Tolerances) -> Result<f64, Error> {
    let embedded = geometry::rigid_embed(dist, 4, 2, tol)?;
    // Vertex order (0,0),(0,1),(1,0),(1,1): index 3 = index 1 + index 2 - index 0.
    let predicted = embedded
        .point(1)
        .add(embedded.point(2))
        .sub(embedded.point(0));
    Ok(predicted.distance(embedded.point(3)))
}

fn obstruction_report(c: f64, lift: f64, tol: &Tolerances) -> Result<ObstructionReport, Error> {
    let lower_bound = lift - 4.0 * c;
    let upper_bound = c;
    let chain_forbids = lower_bound > upper_bound;
    let search = placement_search(c, lift)?;
    let _ = tol;
    Ok(ObstructionReport {
        c,
        lower_bound,
        upper_bound,
        accumulated_slack: 4.0 * c,
        chain_forbids,
        search,
    })
}

/// Explicit rigid placement of the square in `R⁴` parametrized by the two
/// alignment coordinates `(α, β) = (⟨Q e₁, w⟩, ⟨Q e₂, w⟩)`, which range over
/// the unit disk; the deviation objective depends on the placement only
/// through them, so the reduced search is complete.
fn square_placement(alpha: f64, beta: f64, delta: f64) -> Option<[RealVector; 4]> {
    let w = [0.0, 0.0, 0.0, 1.0];
    let p = [1.0, 0.0, 0.0, 0.0];
    let q = [0.0, 1.0, 0.0, 0.0];
    let s_sq = 1.0 - alpha * alpha;
    if s_sq < 0.0 {
        return None;
    }
    let s = scalar::sqrt(s_sq);
    let (gamma, eta) = if s <= 1e-12 {
        if scalar::abs(beta) > 1e-12 {
            return None;
        }
        (0.0, 1.0)
    } else {
        let gamma = -alpha * beta / s;
        let eta_sq = 1.0 - beta * beta - gamma * gamma;
        if eta_sq < -1e-12 {
            return None;
        }
        (gamma, scalar::sqrt(eta_sq.max(0.0)))
    };
    let combine = |cw: f64, cp: f64, cq: f64| {
        RealVector::new(vec![
            cw * w[0] + cp * p[0] + cq * q[0],
            cw * w[1] + cp * p[1] + cq * q[1],
            cw * w[2] + cp * p[2] + cq * q[2],
            cw * w[3] + cp * p[3] + cq * q[3],
        ])
        .unwrap()
    };
    let c1 = combine(alpha, s, 0.0);
    let c2 = combine(beta, gamma, eta);
    let base = combine(delta, 0.0, 0.0);
    let u1 = base.clone();
    let u2 = base.add(&c2);
    let u3 = base.add(&c1);
    let u4 = base.add(&c1).add(&c2);
    Some([u1, u2, u3, u4])
}

fn placement_deviation(placement: &[RealVector; 4], delta: f64, lift: f64) -> f64 {
    let w = RealVector::new(vec![0.0, 0.0, 0.0, 1.0]).unwrap();
    let v4 = w.scale(lift);
    let dev1 = scalar::abs(placement[0].dot(&w) - delta);
    let dev2 = scalar::abs(placement[1].dot(&w) - delta);
    let dev3 = scalar::abs(placement[2].dot(&w) - delta);
    let dev4 = scalar::abs(placement[3].sub(&v4).dot(&w) - delta);
    dev1.max(dev2).max(dev3).max(dev4)
}

fn placement_isometry_residual(placement: &[RealVector; 4]) -> f64 {
    let corners = [[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]];
    let mut worst = 0.0_f64;
    for i in 0..4 {
        for j in i + 1..4 {
            let dx = {
                let a = corners[i];
                let b = corners[j];
                scalar::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]))
            };
            let du = placement[i].distance(&placement[j]);
            worst = worst.max(scalar::abs(du - dx));
        }
    }
    worst
}

fn placement_search(c: f64, lift: f64) -> Result<PlacementSearch, Error> {
    let delta = 1.0;
    let mut tried = 0usize;
    let mut best = f64::INFINITY;
    let mut best_point = (0.0, 0.0);

    // Coarse grid over the alignment disk.
    let steps = 41;
    for ai in 0..steps {
        for bi in 0..steps {
            let alpha = -1.0 + 2.0 * ai as f64 / (steps - 1) as f64;
            let beta = -1.0 + 2.0 * bi as f64 / (steps - 1) as f64;
            if alpha * alpha + beta * beta > 1.0 {
                continue;
            }
            if let Some(points) = square_placement(alpha, beta, delta) {
                tried += 1;
                let dev = placement_deviation(&points, delta, lift);
                if dev < best {
                    best = dev;
                    best_point = (alpha, beta);
                }
            }
        }
    }

    // Local polish: coordinate descent with shrinking step.
    let mut step = 0.05;
    let (mut alpha, mut beta) = best_point;
    while step > 1e-10 {
        let mut improved = false;
        for (da, db) in [
            (step, 0.0),
            (-step, 0.0),
            (0.0, step),
            (0.0, -step),
            (step, step),
            (step, -step),
            (-step, step),
            (-step, -step),
        ] {
            let na = alpha + da;
            let nb = beta + db;
            if na * na + nb * nb > 1.0 {
                continue;
            }
            if let Some(points) = square_placement(na, nb, delta) {
                tried += 1;
                let dev = placement_deviation(&points, delta, lift);
                if dev < best {
                    best = dev;
                    alpha = na;
                    beta = nb;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }

    let best_placement = square_placement(alpha, beta, delta)
        .ok_or_else(|| Error::GeometryInconsistency(String::from("search left the disk")))?;
    Ok(PlacementSearch {
        placements_tried: tried,
        best_deviation: best,
        best_isometry_residual: placement_isometry_residual(&best_placement),
        found_within_budget: best <= c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(entries: &[f64]) -> RealVector {
        RealVector::from_slice(entries).unwrap()
    }

    fn ps(points: &[&[f64]]) -> PointSet {
        PointSet::new(points.iter().map(|p| v(p)).collect()).unwrap()
    }

    #[test]
    fn threshold_formula_values() {
        assert_eq!(delta_threshold(1.0, 1.0, 1.0).unwrap(), 111.0);
        assert_eq!(delta_threshold(0.0, 1.0, 2.0).unwrap(), 4.0);
        // Large gaps leave only the additive terms.
        let v = delta_threshold(0.0, 1.0, 1e12).unwrap();
        assert!((v - 3.0).abs() < 1e-12);
        assert!(delta_threshold(1.0, 1.0, 0.0).is_err());
        assert!(delta_threshold(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn isometry_single_point() {
        let tol = Tolerances::default();
        let points = ps(&[&[2.0, 3.0]]);
        let values = ps(&[&[1.0, -1.0]]);
        let w = v(&[0.0, 1.0]);
        let u = construct_offset_isometry(&points, &values, &w, 4.0, &tol).unwrap();
        assert!(u.point(0).distance(&v(&[1.0, 1.0])) < 1e-12);
    }

    #[test]
    fn isometry_two_points_matches_hand_solution() {
        // x1=(0,0), x2=(1,0), v=0, w=(0,1), delta=1: u1=(0,1), u2=(+/-1, 1).
        let tol = Tolerances::default();
        let points = ps(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let values = ps(&[&[0.0, 0.0], &[0.0, 0.0]]);
        let w = v(&[0.0, 1.0]);
        let u = construct_offset_isometry(&points, &values, &w, 1.0, &tol).unwrap();
        assert!(u.point(0).distance(&v(&[0.0, 1.0])) < 1e-12);
        let second = u.point(1);
        assert!((second[1] - 1.0).abs() < 1e-9);
        assert!((second[0].abs() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn isometry_three_points_residuals() {
        let tol = Tolerances::default();
        let points = ps(&[&[0.0, 0.0], &[1.0, 0.0], &[0.3, 0.8]]);
        let values = ps(&[
            &[0.1, 0.0, 0.2],
            &[0.4, 0.3, 0.0],
            &[0.2, 0.5, 0.1],
        ]);
        let w = v(&[0.0, 0.0, 1.0]);
        let delta = 7.5;
        let u = construct_offset_isometry(&points, &values, &w, delta, &tol).unwrap();
        let sd = delta.sqrt();
        for i in 0..3 {
            let ip = u.point(i).sub(values.point(i)).dot(&w);
            assert!((ip - sd).abs() < 1e-9, "inner product {i}: {ip}");
            for j in i + 1..3 {
                let du = u.point(i).distance(u.point(j));
                let dx = points.point(i).distance(points.point(j));
                assert!((du - dx).abs() < 1e-9, "distance pair ({i},{j})");
            }
        }
        // Two-sided offset estimate.
        let diam = geometry::diameter(&points).unwrap();
        for i in 0..3 {
            let off = u.point(i).sub(values.point(i)).norm_squared();
            assert!(off >= delta - 1e-7);
            assert!(off <= delta + 4.0 * diam * diam + 1e-7);
        }
    }

    #[test]
    fn isometry_rejects_bad_hypotheses() {
        let tol = Tolerances::default();
        let points = ps(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let values = ps(&[&[0.0, 0.0], &[9.0, 0.0]]);
        let w = v(&[0.0, 1.0]);
        assert!(matches!(
            construct_offset_isometry(&points, &values, &w, 1.0, &tol),
            Err(Error::HypothesisViolated(_))
        ));
        let not_unit = v(&[0.0, 2.0]);
        let ok_values = ps(&[&[0.0, 0.0], &[0.5, 0.0]]);
        assert!(matches!(
            construct_offset_isometry(&points, &ok_values, &not_unit, 1.0, &tol),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn probe_identity_tuple_detects_nothing() {
        let tol = Tolerances::default();
        let sample = VectorFieldSample::new(
            ps(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]),
            ps(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]),
        )
        .unwrap();
        let r = necessity_probe(&sample, &[0], 1, &[1.0], 1.0, &tol).unwrap();
        assert_eq!(r.verdict, NecessityVerdict::NoViolationDetected);
        assert!(r.gap <= 0.0);
    }

    #[test]
    fn probe_doubling_field_confirms_violation() {
        // v(x) = 2x on {0, e1} in the plane: gap 1 at the singleton tuple.
        let tol = Tolerances::default();
        let sample = VectorFieldSample::new(
            ps(&[&[0.0, 0.0], &[1.0, 0.0]]),
            ps(&[&[0.0, 0.0], &[2.0, 0.0]]),
        )
        .unwrap();
        let r = necessity_probe(&sample, &[0], 1, &[1.0], 1.0, &tol).unwrap();
        assert_eq!(r.verdict, NecessityVerdict::ViolationConfirmed);
        assert!((r.gap - 1.0).abs() < 1e-12);
        let outcome = r.extension_outcome.unwrap();
        assert!(matches!(
            outcome.status,
            feasibility::FeasibilityStatus::Infeasible { .. }
        ));
    }

    #[test]
    fn probe_affine_contraction_never_confirms() {
        // v(x) = Mx + b with operator norm below one.
        let tol = Tolerances::default();
        let m = [[0.6, 0.2], [-0.1, 0.5]];
        let b = [0.3, -0.7];
        let apply = |x: &RealVector| {
            v(&[
                m[0][0] * x[0] + m[0][1] * x[1] + b[0],
                m[1][0] * x[0] + m[1][1] * x[1] + b[1],
            ])
        };
        let domain = ps(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[1.5, 1.5], &[-1.0, 0.5]]);
        let values = PointSet::new(domain.iter().map(apply).collect()).unwrap();
        let sample = VectorFieldSample::new(domain, values).unwrap();
        for base in [&[0usize][..], &[1, 2][..]] {
            let weights: Vec<f64> = match base.len() {
                1 => alloc::vec![1.0],
                _ => alloc::vec![0.25, 0.75],
            };
            for extra in 0..sample.len() {
                if base.contains(&extra) {
                    continue;
                }
                let r = necessity_probe(&sample, base, extra, &weights, 0.5, &tol).unwrap();
                assert_eq!(r.verdict, NecessityVerdict::NoViolationDetected);
            }
        }
    }

    #[test]
    fn affinity_probe_on_parabola() {
        let tol = Tolerances::default();
        let sample = VectorFieldSample::new(
            ps(&[&[0.0], &[0.5], &[1.0]]),
            ps(&[&[0.0], &[0.25], &[1.0]]),
        )
        .unwrap();
        let r = affinity_probe(&sample, &[(0, 2, 1)], &tol).unwrap();
        assert!((r.findings[0].defect - 0.25).abs() < 1e-12);
        assert!(!r.consistent_with_affine);

        let affine = VectorFieldSample::new(
            ps(&[&[0.0], &[0.5], &[1.0]]),
            ps(&[&[0.1], &[0.35], &[0.6]]),
        )
        .unwrap();
        let r = affinity_probe(&affine, &[(0, 2, 1)], &tol).unwrap();
        assert!(r.findings[0].defect < 1e-12);
        assert!(r.consistent_with_affine);

        assert!(affinity_probe(&sample, &[(0, 1, 2)], &tol).is_err());
    }

    #[test]
    fn averaged_offset_bound_examples() {
        let tol = Tolerances::default();
        let points = ps(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let delta = 2.0_f64;
        let w = v(&[0.0, 1.0]);
        // Constant offset sqrt(delta) * w: the left side vanishes identically.
        let vvals = ps(&[&[0.3, 0.0], &[0.7, 0.1]]);
        let uvals = PointSet::new(
            vvals.iter().map(|p| p.add(&w.scale(delta.sqrt()))).collect(),
        )
        .unwrap();
        let r =
            averaged_offset_bound_check(&uvals, &vvals, &points, delta, 0.5, &tol).unwrap();
        assert!(r.holds);
        assert!(r.max_observed < 1e-9);

        // Violating the pointwise hypothesis is a precondition error.
        let bad = ps(&[&[0.3, 0.0], &[10.0, 0.0]]);
        assert!(matches!(
            averaged_offset_bound_check(&bad, &vvals, &points, delta, 0.5, &tol),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn constructed_isometry_passes_averaged_bound() {
        let tol = Tolerances::default();
        let points = ps(&[&[0.0, 0.0], &[1.0, 0.0], &[0.5, 0.5]]);
        let values = ps(&[
            &[0.0, 0.0, 0.0],
            &[0.6, 0.0, 0.0],
            &[0.3, 0.2, 0.0],
        ]);
        let w = v(&[0.0, 0.0, 1.0]);
        let delta = 5.0;
        let u = construct_offset_isometry(&points, &values, &w, delta, &tol).unwrap();
        let diam = geometry::diameter(&points).unwrap();
        let c = 4.0 * diam * diam;
        let r = averaged_offset_bound_check(&u, &values, &points, delta, c, &tol).unwrap();
        assert!(r.holds, "max {} vs bound {}", r.max_observed, r.bound);
    }

    #[test]
    fn square_demo_reproduces_paper_constants() {
        let tol = Tolerances::default();
        let report = square_demo(&tol).unwrap();
        let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
        assert!(report.lipschitz.is_satisfied());
        assert!((report.min_hull_distance - inv_sqrt2).abs() < 1e-12);
        assert!((report.affinity_defect - 0.5 * inv_sqrt2).abs() < 1e-12);
        assert!((report.forbidden_threshold - 1.0 / (5.0 * 2.0_f64.sqrt())).abs() < 1e-12);
        assert!(report.parallelogram_residual < 1e-9);

        let tight = &report.obstructions[0];
        assert_eq!(tight.c, 0.1);
        assert!(tight.chain_forbids);
        assert!(!tight.search.found_within_budget);

        let loose = &report.obstructions[1];
        assert_eq!(loose.c, 0.2);
        assert!(!loose.chain_forbids);
        assert!((loose.lower_bound - (inv_sqrt2 - 0.8)).abs() < 1e-12);
        // The chain no longer forbids a placement, and the search reports the
        // actual best deviation, 1/(3*sqrt(2)).
        assert!((loose.search.best_deviation - 1.0 / (3.0 * 2.0_f64.sqrt())).abs() < 1e-6);
        assert!(loose.search.best_isometry_residual < 1e-9);
    }
}
