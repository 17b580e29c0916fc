//! Greedy pointwise construction of 1-Lipschitz, monotone, and
//! 1-semi-bounded-strain extensions that keep every offset `u(x) − v(x)`
//! inside a convex budget body `K`.
//!
//! Each unassigned point is processed one at a time with all previously
//! assigned points as constraints. The candidate offset is restricted to the
//! convex hull of the offsets already placed; since those start inside `K`
//! and `K` is convex, membership of every new offset in `K` is structural
//! rather than something to re-negotiate per point.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use core::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::body::ConvexBody;
use crate::checker::VectorFieldSample;
use crate::error::Error;
use crate::feasibility::{self, ConstraintSet, ConstraintSystem, FeasibilityOutcome};
use crate::geometry::{self, PointSet, RealVector, Tolerances};

/// Which pairwise inequality the extension must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ExtensionMode {
    Lipschitz,
    Monotone,
    Strain,
}

impl fmt::Display for ExtensionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtensionMode::Lipschitz => write!(f, "lipschitz"),
            ExtensionMode::Monotone => write!(f, "monotone"),
            ExtensionMode::Strain => write!(f, "strain"),
        }
    }
}

/// A partial map on a subset of the sample plus the offset budget body.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionProblem {
    pub sample: VectorFieldSample,
    /// `a_mask[i]` marks the points where `u` is prescribed.
    pub a_mask: Vec<bool>,
    /// Prescribed values, present exactly at the masked indices.
    pub u_partial: Vec<Option<RealVector>>,
    pub body: ConvexBody,
    pub mode: ExtensionMode,
}

impl ExtensionProblem {
    pub fn new(
        sample: VectorFieldSample,
        a_mask: Vec<bool>,
        u_partial: Vec<Option<RealVector>>,
        body: ConvexBody,
        mode: ExtensionMode,
    ) -> Result<Self, Error> {
        let n = sample.len();
        if a_mask.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: a_mask.len() });
        }
        if u_partial.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: u_partial.len() });
        }
        if body.dimension() != sample.value_dim() {
            return Err(Error::DimensionMismatch {
                expected: sample.value_dim(),
                found: body.dimension(),
            });
        }
        if !a_mask.iter().any(|&m| m) {
            return Err(Error::InvalidProblem(String::from(
                "the prescribed subset is empty; at least one point must carry u",
            )));
        }
        for (i, (&masked, u)) in a_mask.iter().zip(&u_partial).enumerate() {
            match (masked, u) {
                (true, None) => {
                    return Err(Error::InvalidProblem(format!(
                        "point {i} is in the prescribed subset but has no u value"
                    )))
                }
                (false, Some(_)) => {
                    return Err(Error::InvalidProblem(format!(
                        "point {i} carries a u value but is not in the prescribed subset"
                    )))
                }
                (true, Some(val)) if val.dim() != sample.value_dim() => {
                    return Err(Error::DimensionMismatch {
                        expected: sample.value_dim(),
                        found: val.dim(),
                    })
                }
                _ => {}
            }
        }
        Ok(ExtensionProblem { sample, a_mask, u_partial, body, mode })
    }

    pub fn masked_indices(&self) -> Vec<usize> {
        (0..self.sample.len()).filter(|&i| self.a_mask[i]).collect()
    }

    pub fn unmasked_indices(&self) -> Vec<usize> {
        (0..self.sample.len()).filter(|&i| !self.a_mask[i]).collect()
    }

    /// Supremum of `‖u − v‖` over the prescribed subset.
    pub fn sup_dist_on_subset(&self) -> f64 {
        let mut sup = 0.0_f64;
        for i in self.masked_indices() {
            let u = self.u_partial[i].as_ref().expect("masked index has u");
            sup = sup.max(u.distance(self.sample.value(i)));
        }
        sup
    }

    /// Mode-specific invariant checks on the prescribed data.
    fn validate_for_mode(&self, tol: &Tolerances) -> Result<(), Error> {
        if matches!(self.mode, ExtensionMode::Monotone | ExtensionMode::Strain) {
            if self.sample.domain_dim() != self.sample.value_dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.sample.domain_dim(),
                    found: self.sample.value_dim(),
                });
            }
            if !self.body.is_bounded() {
                return Err(Error::UnboundedBody);
            }
        }
        let masked = self.masked_indices();
        for &i in &masked {
            let u = self.u_partial[i].as_ref().unwrap();
            let offset = u.sub(self.sample.value(i));
            if !self.body.contains(&offset, tol.feas_tol)? {
                return Err(Error::InvalidProblem(format!(
                    "offset of prescribed point {i} lies outside the budget body"
                )));
            }
        }
        for (a, &i) in masked.iter().enumerate() {
            for &j in masked.iter().skip(a + 1) {
                let ui = self.u_partial[i].as_ref().unwrap();
                let uj = self.u_partial[j].as_ref().unwrap();
                let dx = self.sample.point(i).sub(self.sample.point(j));
                let du = ui.sub(uj);
                let violated = match self.mode {
                    ExtensionMode::Lipschitz => du.norm() > dx.norm() + tol.feas_tol,
                    ExtensionMode::Monotone => du.dot(&dx) < -tol.feas_tol,
                    ExtensionMode::Strain => du.dot(&dx) > dx.norm_squared() + tol.feas_tol,
                };
                if violated {
                    return Err(Error::InvalidProblem(format!(
                        "prescribed values at points {i} and {j} violate the {} inequality",
                        self.mode
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Order in which the unassigned points are processed.
///
/// Existence of the extension is order-independent (any order succeeds when
/// the field satisfies the checked condition); the produced map is not.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
#[derive(Default)]
pub enum OrderStrategy {
    InputOrder,
    /// Closest to the already-processed set first (the default; tightest
    /// constraints first keeps the projection cycles short).
    #[default]
    NearestToProcessedFirst,
    FarthestToProcessedFirst,
    Seeded(u64),
}


/// The processing order of the unassigned points under a strategy.
pub fn processing_order(problem: &ExtensionProblem, order: &OrderStrategy) -> Vec<usize> {
    let mut pending = problem.unmasked_indices();
    match order {
        OrderStrategy::InputOrder => pending,
        OrderStrategy::Seeded(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            pending.shuffle(&mut rng);
            pending
        }
        OrderStrategy::NearestToProcessedFirst | OrderStrategy::FarthestToProcessedFirst => {
            let nearest = matches!(order, OrderStrategy::NearestToProcessedFirst);
            let mut processed = problem.masked_indices();
            let mut out = Vec::with_capacity(pending.len());
            while !pending.is_empty() {
                let mut best_slot = 0usize;
                let mut best_key = f64::NAN;
                for (slot, &i) in pending.iter().enumerate() {
                    let key = processed
                        .iter()
                        .map(|&j| problem.sample.point(i).distance(problem.sample.point(j)))
                        .fold(f64::INFINITY, f64::min);
                    let better = if best_key.is_nan() {
                        true
                    } else if nearest {
                        key < best_key
                    } else {
                        key > best_key
                    };
                    if better {
                        best_key = key;
                        best_slot = slot;
                    }
                }
                let chosen = pending.remove(best_slot);
                processed.push(chosen);
                out.push(chosen);
            }
            out
        }
    }
}

/// Per-point record of a successful extension step.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PointLog {
    pub index: usize,
    pub outcome: FeasibilityOutcome,
    /// Nonzero convex weights expressing the accepted offset over the offsets
    /// of previously processed points, as `(point index, weight)` pairs.
    pub hull_weights: Vec<(usize, f64)>,
}

/// A completed extension with provenance.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExtensionResult {
    pub u_full: Vec<RealVector>,
    pub per_point_log: Vec<PointLog>,
    /// `sup ‖u − v‖` over the prescribed subset.
    pub sup_dist_a: f64,
    /// `sup ‖ũ − v‖` over the whole sample.
    pub sup_dist_x: f64,
}

/// Extension failure: either an invalid problem or a feasibility breakdown.
#[derive(Debug, Clone, PartialEq)]
pub enum ExtendError {
    Invalid(Error),
    /// The per-point feasibility problem could not be certified nonempty.
    /// This means the field data violates the checked condition (or the
    /// tolerances are too tight); running the matching condition checker on
    /// the sample will locate the violating tuple. The partial extension
    /// built so far is attached.
    Feasibility {
        mode: ExtensionMode,
        index: usize,
        outcome: FeasibilityOutcome,
        partial: Vec<Option<RealVector>>,
    },
}

impl fmt::Display for ExtendError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendError::Invalid(e) => write!(f, "{e}"),
            ExtendError::Feasibility { mode, index, outcome, .. } => write!(
                f,
                "feasibility failed at point {index} (residual {:.3e}); the sample likely \
                 violates the {mode} condition — run the matching condition check",
                outcome.residual
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ExtendError {}

impl From<Error> for ExtendError {
    fn from(e: Error) -> Self {
        ExtendError::Invalid(e)
    }
}

/// Shared greedy loop; `constraints` builds the per-point system for the
/// offset variable given the processed indices and the new point.
fn run_extension(
    problem: &ExtensionProblem,
    order: &OrderStrategy,
    tol: &Tolerances,
) -> Result<ExtensionResult, ExtendError> {
    problem.validate_for_mode(tol)?;

    let m = problem.sample.value_dim();
    let mut u: Vec<Option<RealVector>> = problem.u_partial.clone();
    let mut processed = problem.masked_indices();
    let mut log: Vec<PointLog> = Vec::new();

    for new_index in processing_order(problem, order) {
        let x = problem.sample.point(new_index);
        let v_new = problem.sample.value(new_index);

        // Offsets of everything already placed; the new offset must stay in
        // their convex hull, which keeps it inside the budget body.
        let offsets: Vec<RealVector> = processed
            .iter()
            .map(|&i| u[i].as_ref().unwrap().sub(problem.sample.value(i)))
            .collect();
        let hull = PointSet::new(offsets)?;

        let mut sets: Vec<ConstraintSet> = Vec::with_capacity(processed.len() + 1);
        sets.push(ConstraintSet::Hull { generators: hull.clone() });
        for &i in &processed {
            let ui = u[i].as_ref().unwrap();
            match problem.mode {
                ExtensionMode::Lipschitz => {
                    sets.push(ConstraintSet::Ball {
                        center: ui.sub(v_new),
                        radius: x.distance(problem.sample.point(i)),
                    });
                }
                ExtensionMode::Monotone => {
                    let normal = x.sub(problem.sample.point(i));
                    if normal.norm_squared() > 0.0 {
                        let offset = ui.sub(v_new).dot(&normal);
                        sets.push(ConstraintSet::Halfspace { normal, offset });
                    }
                }
                ExtensionMode::Strain => {
                    return Err(ExtendError::Invalid(Error::InvalidProblem(String::from(
                        "strain problems are extended through the monotone reduction",
                    ))))
                }
            }
        }
        let system = ConstraintSystem::new(sets, m)?;
        let start = system.default_start();
        let outcome = feasibility::solve(&system, &start, tol)?;
        if !outcome.is_feasible() {
            return Err(ExtendError::Feasibility {
                mode: problem.mode,
                index: new_index,
                outcome,
                partial: u,
            });
        }

        let offset = outcome.point.clone();
        if !problem.body.contains(&offset, tol.feas_tol)? {
            return Err(ExtendError::Invalid(Error::PostconditionFailed(format!(
                "accepted offset at point {new_index} left the budget body"
            ))));
        }
        let (_, weights) = geometry::project_hull(&offset, &hull)?;
        let hull_weights: Vec<(usize, f64)> = processed
            .iter()
            .zip(&weights)
            .filter(|(_, &w)| w > 0.0)
            .map(|(&i, &w)| (i, w))
            .collect();

        u[new_index] = Some(v_new.add(&offset));
        log.push(PointLog { index: new_index, outcome, hull_weights });
        processed.push(new_index);
    }

    let u_full: Vec<RealVector> = u.into_iter().map(|x| x.unwrap()).collect();
    verify_pairwise(problem, &u_full, tol)?;

    let sup_dist_a = problem.sup_dist_on_subset();
    let mut sup_dist_x = 0.0_f64;
    for (i, value) in u_full.iter().enumerate() {
        sup_dist_x = sup_dist_x.max(value.distance(problem.sample.value(i)));
    }
    Ok(ExtensionResult { u_full, per_point_log: log, sup_dist_a, sup_dist_x })
}

fn verify_pairwise(
    problem: &ExtensionProblem,
    u_full: &[RealVector],
    tol: &Tolerances,
) -> Result<(), Error> {
    let n = problem.sample.len();
    for i in 0..n {
        for j in i + 1..n {
            let dx = problem.sample.point(i).sub(problem.sample.point(j));
            let du = u_full[i].sub(&u_full[j]);
            let violated = match problem.mode {
                ExtensionMode::Lipschitz => du.norm() > dx.norm() + tol.feas_tol,
                ExtensionMode::Monotone => du.dot(&dx) < -tol.feas_tol,
                ExtensionMode::Strain => du.dot(&dx) > dx.norm_squared() + tol.feas_tol,
            };
            if violated {
                return Err(Error::PostconditionFailed(format!(
                    "{} inequality fails at pair ({i},{j})",
                    problem.mode
                )));
            }
        }
    }
    Ok(())
}

/// 1-Lipschitz extension with every offset kept in the budget body.
///
/// For each new point `x` with processed points `xᵢ` and offsets
/// `yᵢ = u(xᵢ) − v(xᵢ)`, the engine solves for an offset `y` in
/// `Conv{yᵢ} ∩ ⋂ᵢ B(u(xᵢ) − v(x), ‖x − xᵢ‖)` and sets `ũ(x) = v(x) + y`.
pub fn extend_lipschitz(
    problem: &ExtensionProblem,
    order: &OrderStrategy,
    tol: &Tolerances,
) -> Result<ExtensionResult, ExtendError> {
    if problem.mode != ExtensionMode::Lipschitz {
        return Err(ExtendError::Invalid(Error::InvalidProblem(format!(
            "extend_lipschitz called with mode {}",
            problem.mode
        ))));
    }
    run_extension(problem, order, tol)
}

/// Monotone extension with every offset kept in the (bounded) budget body.
///
/// The per-point system intersects the offset hull with the half-spaces
/// `⟨y, x − xᵢ⟩ ≥ ⟨u(xᵢ) − v(x), x − xᵢ⟩`.
pub fn extend_monotone(
    problem: &ExtensionProblem,
    order: &OrderStrategy,
    tol: &Tolerances,
) -> Result<ExtensionResult, ExtendError> {
    if problem.mode != ExtensionMode::Monotone {
        return Err(ExtendError::Invalid(Error::InvalidProblem(format!(
            "extend_monotone called with mode {}",
            problem.mode
        ))));
    }
    run_extension(problem, order, tol)
}

/// The exact reduction behind the strain engine: `u' = id − u`, `v' = id − v`,
/// `K' = −K`, mode switched to monotone. Exposed so callers can reproduce the
/// reduction identity bit for bit.
pub fn strain_to_monotone_reduction(problem: &ExtensionProblem) -> Result<ExtensionProblem, Error> {
    if problem.mode != ExtensionMode::Strain {
        return Err(Error::InvalidProblem(format!(
            "reduction applies to strain problems, got {}",
            problem.mode
        )));
    }
    let sample = problem.sample.identity_minus_values()?;
    let u_partial: Vec<Option<RealVector>> = problem
        .u_partial
        .iter()
        .enumerate()
        .map(|(i, u)| u.as_ref().map(|val| problem.sample.point(i).sub(val)))
        .collect();
    ExtensionProblem::new(
        sample,
        problem.a_mask.clone(),
        u_partial,
        problem.body.negated(),
        ExtensionMode::Monotone,
    )
}

/// 1-semi-bounded-strain extension via the monotone reduction.
///
/// Builds the reduced problem, extends it monotonically, and maps the result
/// back through `ũ(x) = x − ũ'(x)`.
pub fn extend_strain(
    problem: &ExtensionProblem,
    order: &OrderStrategy,
    tol: &Tolerances,
) -> Result<ExtensionResult, ExtendError> {
    if problem.mode != ExtensionMode::Strain {
        return Err(ExtendError::Invalid(Error::InvalidProblem(format!(
            "extend_strain called with mode {}",
            problem.mode
        ))));
    }
    let reduced = strain_to_monotone_reduction(problem)?;
    let mapped_back = |values: Vec<Option<RealVector>>| -> Vec<Option<RealVector>> {
        values
            .into_iter()
            .enumerate()
            .map(|(i, u)| u.map(|val| problem.sample.point(i).sub(&val)))
            .collect()
    };
    let result = match extend_monotone(&reduced, order, tol) {
        Ok(r) => r,
        Err(ExtendError::Feasibility { index, outcome, partial, .. }) => {
            return Err(ExtendError::Feasibility {
                mode: ExtensionMode::Strain,
                index,
                outcome,
                partial: mapped_back(partial),
            })
        }
        Err(other) => return Err(other),
    };
    let u_full: Vec<RealVector> = result
        .u_full
        .iter()
        .enumerate()
        .map(|(i, val)| problem.sample.point(i).sub(val))
        .collect();
    verify_pairwise(problem, &u_full, tol)?;

    let sup_dist_a = problem.sup_dist_on_subset();
    let mut sup_dist_x = 0.0_f64;
    for (i, value) in u_full.iter().enumerate() {
        sup_dist_x = sup_dist_x.max(value.distance(problem.sample.value(i)));
    }
    Ok(ExtensionResult {
        u_full,
        per_point_log: result.per_point_log,
        sup_dist_a,
        sup_dist_x,
    })
}

/// Classical 1-Lipschitz extension of a partial map: the reference field is
/// zero and the budget is the ball of radius `sup ‖u‖` over the prescribed
/// subset, so all extension values stay in the convex hull of the prescribed
/// values.
pub fn kirszbraun_extend(
    domain: &PointSet,
    a_mask: &[bool],
    u_partial: &[Option<RealVector>],
    order: &OrderStrategy,
    tol: &Tolerances,
) -> Result<ExtensionResult, ExtendError> {
    let value_dim = u_partial
        .iter()
        .flatten()
        .map(|u| u.dim())
        .next()
        .ok_or_else(|| {
            Error::InvalidProblem(String::from("no prescribed values to extend"))
        })?;
    let zeros: Vec<RealVector> =
        (0..domain.len()).map(|_| RealVector::zeros(value_dim)).collect();
    let sample =
        VectorFieldSample::new(domain.clone(), PointSet::new(zeros)?)?;
    let radius = u_partial
        .iter()
        .flatten()
        .map(|u| u.norm())
        .fold(0.0_f64, f64::max);
    let body =
        ConvexBody::ball(RealVector::zeros(value_dim), radius)?;
    let problem = ExtensionProblem::new(
        sample,
        a_mask.to_vec(),
        u_partial.to_vec(),
        body,
        ExtensionMode::Lipschitz,
    )?;
    extend_lipschitz(&problem, order, tol)
}

/// One violated pair in a verification report.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PairViolation {
    pub i: usize,
    pub j: usize,
    pub lhs: f64,
    pub rhs: f64,
}

/// Exhaustive re-check of a finished extension. Report-only: all findings are
/// listed, none hidden.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VerificationReport {
    pub mode: ExtensionMode,
    /// The extension agrees with the prescribed values exactly.
    pub agrees_on_prescribed: bool,
    pub pair_violations: Vec<PairViolation>,
    /// Worst pairwise excess over the mode inequality (negative = slack).
    pub max_pair_excess: f64,
    /// Points whose offset leaves the budget body beyond `feas_tol`.
    pub membership_violations: Vec<(usize, f64)>,
    pub max_membership_distance: f64,
    pub sup_dist_a: f64,
    pub sup_dist_x: f64,
    /// For ball budgets: `sup_X ‖ũ − v‖ − radius`.
    pub budget_excess: Option<f64>,
    pub passed: bool,
}

/// Re-checks the mode inequality pairwise, the membership of every offset in
/// the body, and the uniform-distance bookkeeping.
pub fn verify_extension(
    result: &ExtensionResult,
    problem: &ExtensionProblem,
    tol: &Tolerances,
) -> Result<VerificationReport, Error> {
    let n = problem.sample.len();
    if result.u_full.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: result.u_full.len() });
    }

    let mut agrees = true;
    for i in problem.masked_indices() {
        if problem.u_partial[i].as_ref() != Some(&result.u_full[i]) {
            agrees = false;
        }
    }

    let mut pair_violations = Vec::new();
    let mut max_pair_excess = f64::NEG_INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            let dx = problem.sample.point(i).sub(problem.sample.point(j));
            let du = result.u_full[i].sub(&result.u_full[j]);
            let (lhs, rhs) = match problem.mode {
                ExtensionMode::Lipschitz => (du.norm(), dx.norm()),
                ExtensionMode::Monotone => (-du.dot(&dx), 0.0),
                ExtensionMode::Strain => (du.dot(&dx), dx.norm_squared()),
            };
            let excess = lhs - rhs;
            if excess > max_pair_excess {
                max_pair_excess = excess;
            }
            if excess > tol.feas_tol {
                pair_violations.push(PairViolation { i, j, lhs, rhs });
            }
        }
    }

    let mut membership_violations = Vec::new();
    let mut max_membership_distance = 0.0_f64;
    let mut sup_dist_x = 0.0_f64;
    for (i, value) in result.u_full.iter().enumerate() {
        let offset = value.sub(problem.sample.value(i));
        sup_dist_x = sup_dist_x.max(offset.norm());
        let dist = problem.body.distance(&offset, tol)?;
        max_membership_distance = max_membership_distance.max(dist);
        if dist > tol.feas_tol {
            membership_violations.push((i, dist));
        }
    }

    let budget_excess = match &problem.body {
        ConvexBody::Ball { radius, .. } => Some(sup_dist_x - radius),
        _ => None,
    };

    let passed = agrees && pair_violations.is_empty() && membership_violations.is_empty();
    Ok(VerificationReport {
        mode: problem.mode,
        agrees_on_prescribed: agrees,
        pair_violations,
        max_pair_excess: if n > 1 { max_pair_excess } else { f64::NEG_INFINITY },
        membership_violations,
        max_membership_distance,
        sup_dist_a: problem.sup_dist_on_subset(),
        sup_dist_x,
        budget_excess,
        passed,
    })
}
