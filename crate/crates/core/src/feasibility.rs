//! Convex feasibility with certificates: Dykstra's best-approximation cycle
//! over a finite intersection of convex sets, plus an averaged-projection
//! descent that certifies infeasibility through a residual lower bound.

use alloc::vec::Vec;

use crate::body::ConvexBody;
use crate::error::Error;
use crate::geometry::{self, PointSet, RealVector, Tolerances};

/// One convex constraint of a [`ConstraintSystem`].
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ConstraintSet {
    Ball { center: RealVector, radius: f64 },
    /// `{y : ⟨normal, y⟩ ≥ offset}`.
    Halfspace { normal: RealVector, offset: f64 },
    Hull { generators: PointSet },
    Shifted { body: ConvexBody, shift: RealVector },
}

impl ConstraintSet {
    pub fn dimension(&self) -> usize {
        match self {
            ConstraintSet::Ball { center, .. } => center.dim(),
            ConstraintSet::Halfspace { normal, .. } => normal.dim(),
            ConstraintSet::Hull { generators } => generators.dim(),
            ConstraintSet::Shifted { shift, .. } => shift.dim(),
        }
    }

    fn validate(&self) -> Result<(), Error> {
        match self {
            ConstraintSet::Ball { radius, .. } => {
                if radius.is_nan() || *radius < 0.0 {
                    return Err(Error::NegativeRadius(*radius));
                }
            }
            ConstraintSet::Halfspace { normal, .. } => {
                if normal.norm_squared() <= 0.0 {
                    return Err(Error::ZeroNormal);
                }
            }
            ConstraintSet::Hull { .. } => {}
            ConstraintSet::Shifted { body, shift } => {
                if body.dimension() != shift.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: body.dimension(),
                        found: shift.dim(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn project(&self, p: &RealVector, tol: &Tolerances) -> Result<RealVector, Error> {
        match self {
            ConstraintSet::Ball { center, radius } => geometry::project_ball(p, center, *radius),
            ConstraintSet::Halfspace { normal, offset } => {
                geometry::project_halfspace(p, normal, *offset)
            }
            ConstraintSet::Hull { generators } => {
                Ok(geometry::project_hull(p, generators)?.0)
            }
            ConstraintSet::Shifted { body, shift } => {
                Ok(shift.add(&body.project(&p.sub(shift), tol)?))
            }
        }
    }

    pub fn distance(&self, p: &RealVector, tol: &Tolerances) -> Result<f64, Error> {
        match self {
            ConstraintSet::Ball { center, radius } => {
                Ok((p.distance(center) - radius).max(0.0))
            }
            ConstraintSet::Halfspace { normal, offset } => {
                Ok(((offset - normal.dot(p)) / normal.norm()).max(0.0))
            }
            ConstraintSet::Hull { generators } => geometry::hull_distance(p, generators),
            ConstraintSet::Shifted { body, shift } => body.distance(&p.sub(shift), tol),
        }
    }

    /// A cheap interior-ish representative, used to seed the iteration.
    fn representative(&self) -> RealVector {
        match self {
            ConstraintSet::Ball { center, .. } => center.clone(),
            ConstraintSet::Halfspace { normal, offset } => {
                normal.scale(offset / normal.norm_squared())
            }
            ConstraintSet::Hull { generators } => generators.centroid(),
            ConstraintSet::Shifted { body, shift } => match body {
                ConvexBody::Ball { center, .. } => shift.add(center),
                _ => shift.clone(),
            },
        }
    }
}

/// A finite intersection of convex sets in one ambient dimension.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConstraintSystem {
    sets: Vec<ConstraintSet>,
    dimension: usize,
}

impl ConstraintSystem {
    pub fn new(sets: Vec<ConstraintSet>, dimension: usize) -> Result<Self, Error> {
        for set in &sets {
            set.validate()?;
            if set.dimension() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: set.dimension(),
                });
            }
        }
        Ok(ConstraintSystem { sets, dimension })
    }

    #[inline]
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[ConstraintSet] {
        &self.sets
    }

    /// Maximum distance from `p` to any member set.
    pub fn residual(&self, p: &RealVector, tol: &Tolerances) -> Result<f64, Error> {
        let mut worst = 0.0_f64;
        for set in &self.sets {
            worst = worst.max(set.distance(p, tol)?);
        }
        Ok(worst)
    }

    /// Average of the member representatives; the origin for empty systems.
    ///
    /// For ball- and hull-dominated systems this lands near the intersection,
    /// which keeps the projection cycles short.
    pub fn default_start(&self) -> RealVector {
        if self.sets.is_empty() {
            return RealVector::zeros(self.dimension);
        }
        let mut acc = RealVector::zeros(self.dimension);
        for set in &self.sets {
            acc.add_scaled_assign(&set.representative(), 1.0);
        }
        acc.scale(1.0 / self.sets.len() as f64)
    }
}

/// Status of a feasibility run.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum FeasibilityStatus {
    Feasible,
    /// The averaged-projection descent converged to a point whose residual
    /// stays above `feas_tol`; `residual_lb` is that stationary residual.
    Infeasible { residual_lb: f64 },
    Unknown,
}

/// Result of a feasibility run: the status, the best iterate, its residual
/// (max distance to any set), and the number of iterations spent.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeasibilityOutcome {
    pub status: FeasibilityStatus,
    pub point: RealVector,
    pub residual: f64,
    pub iterations: usize,
}

impl FeasibilityOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self.status, FeasibilityStatus::Feasible)
    }
}

/// Dykstra's cyclic best-approximation iteration.
///
/// For a nonempty intersection the iterate converges to the nearest point of
/// the intersection to `start` (plain cyclic projection would only reach an
/// arbitrary intersection point, which would make results order-dependent in
/// an untestable way). Stops when the cycle-to-cycle change drops below
/// `solve_tol` or after `max_iter` cycles; the outcome is `Feasible` when the
/// final residual is within `feas_tol` and `Unknown` otherwise — never a
/// silent wrong answer.
pub fn dykstra_solve(
    sys: &ConstraintSystem,
    start: &RealVector,
    tol: &Tolerances,
) -> Result<FeasibilityOutcome, Error> {
    if start.dim() != sys.dimension() {
        return Err(Error::DimensionMismatch { expected: sys.dimension(), found: start.dim() });
    }
    if sys.is_empty() {
        return Ok(FeasibilityOutcome {
            status: FeasibilityStatus::Feasible,
            point: start.clone(),
            residual: 0.0,
            iterations: 0,
        });
    }

    let mut x = start.clone();
    let mut corrections: Vec<RealVector> =
        sys.sets().iter().map(|_| RealVector::zeros(sys.dimension())).collect();
    let mut cycles = 0usize;
    for _ in 0..tol.max_iter {
        cycles += 1;
        let previous = x.clone();
        for (set, correction) in sys.sets().iter().zip(corrections.iter_mut()) {
            let y = x.add(correction);
            let projected = set.project(&y, tol)?;
            *correction = y.sub(&projected);
            x = projected;
        }
        if x.distance(&previous) < tol.solve_tol {
            break;
        }
    }

    let residual = sys.residual(&x, tol)?;
    let status = if residual <= tol.feas_tol {
        FeasibilityStatus::Feasible
    } else {
        FeasibilityStatus::Unknown
    };
    Ok(FeasibilityOutcome { status, point: x, residual, iterations: cycles })
}

/// Outcome of the averaged-projection descent on `Σᵢ dist(y, Sᵢ)²`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InfeasibilityProbe {
    /// `maxᵢ dist(witness, Sᵢ)` at the converged point.
    pub residual_lb: f64,
    pub witness: RealVector,
    pub converged: bool,
    pub iterations: usize,
}

/// Minimizes the sum of squared set distances by averaging the projections.
///
/// The objective is convex, so a converged stationary point is its global
/// minimum; a residual above `feas_tol` there certifies an empty intersection.
pub fn infeasibility_probe(
    sys: &ConstraintSystem,
    start: &RealVector,
    tol: &Tolerances,
) -> Result<InfeasibilityProbe, Error> {
    if start.dim() != sys.dimension() {
        return Err(Error::DimensionMismatch { expected: sys.dimension(), found: start.dim() });
    }
    if sys.is_empty() {
        return Ok(InfeasibilityProbe {
            residual_lb: 0.0,
            witness: start.clone(),
            converged: true,
            iterations: 0,
        });
    }
    let mut x = start.clone();
    let k = sys.len() as f64;
    let mut converged = false;
    let mut iterations = 0usize;
    for _ in 0..tol.max_iter {
        iterations += 1;
        let mut next = RealVector::zeros(sys.dimension());
        for set in sys.sets() {
            next.add_scaled_assign(&set.project(&x, tol)?, 1.0 / k);
        }
        let change = next.distance(&x);
        x = next;
        if change < tol.solve_tol {
            converged = true;
            break;
        }
    }
    let residual_lb = sys.residual(&x, tol)?;
    Ok(InfeasibilityProbe { residual_lb, witness: x, converged, iterations })
}

/// Full feasibility decision: Dykstra first, then the infeasibility probe on
/// anything short of `Feasible`.
pub fn solve(
    sys: &ConstraintSystem,
    start: &RealVector,
    tol: &Tolerances,
) -> Result<FeasibilityOutcome, Error> {
    let outcome = dykstra_solve(sys, start, tol)?;
    if outcome.is_feasible() {
        return Ok(outcome);
    }
    let probe = infeasibility_probe(sys, start, tol)?;
    if probe.residual_lb <= tol.feas_tol {
        // The least-squares point itself satisfies every constraint within
        // feas_tol, so the system is feasible after all.
        return Ok(FeasibilityOutcome {
            status: FeasibilityStatus::Feasible,
            point: probe.witness,
            residual: probe.residual_lb,
            iterations: outcome.iterations + probe.iterations,
        });
    }
    if probe.converged {
        Ok(FeasibilityOutcome {
            status: FeasibilityStatus::Infeasible { residual_lb: probe.residual_lb },
            point: probe.witness,
            residual: probe.residual_lb,
            iterations: outcome.iterations + probe.iterations,
        })
    } else {
        Ok(FeasibilityOutcome {
            status: FeasibilityStatus::Unknown,
            point: probe.witness,
            residual: probe.residual_lb,
            iterations: outcome.iterations + probe.iterations,
        })
    }
}
