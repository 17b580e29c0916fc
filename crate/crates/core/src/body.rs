//! The offset body `K`: balls, half-space intersections, and the whole space,
//! with membership tests and nearest-point projections.

use alloc::vec::Vec;

use crate::error::Error;
use crate::geometry::{self, PointSet, RealVector, Tolerances};

/// A closed convex offset body.
///
/// These three variants cover every body used by the extension engines: balls
/// realize the uniform-distance budget, half-space intersections realize
/// polytopal budgets, and the whole space removes the budget entirely.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ConvexBody {
    Ball { center: RealVector, radius: f64 },
    /// Intersection of `{y : ⟨normal, y⟩ ≥ offset}` constraints. May be empty;
    /// emptiness surfaces as solver non-convergence, not as a structural error.
    HalfspaceIntersection { halfspaces: Vec<(RealVector, f64)> },
    WholeSpace { dimension: usize },
}

impl ConvexBody {
    pub fn ball(center: RealVector, radius: f64) -> Result<Self, Error> {
        if radius.is_nan() || radius < 0.0 {
            return Err(Error::NegativeRadius(radius));
        }
        Ok(ConvexBody::Ball { center, radius })
    }

    pub fn halfspace_intersection(halfspaces: Vec<(RealVector, f64)>) -> Result<Self, Error> {
        let mut dim = None;
        for (normal, _) in &halfspaces {
            if normal.norm_squared() <= 0.0 {
                return Err(Error::ZeroNormal);
            }
            match dim {
                None => dim = Some(normal.dim()),
                Some(d) if d != normal.dim() => {
                    return Err(Error::DimensionMismatch { expected: d, found: normal.dim() })
                }
                _ => {}
            }
        }
        if halfspaces.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        Ok(ConvexBody::HalfspaceIntersection { halfspaces })
    }

    pub fn whole_space(dimension: usize) -> Self {
        ConvexBody::WholeSpace { dimension }
    }

    pub fn dimension(&self) -> usize {
        match self {
            ConvexBody::Ball { center, .. } => center.dim(),
            ConvexBody::HalfspaceIntersection { halfspaces } => halfspaces[0].0.dim(),
            ConvexBody::WholeSpace { dimension } => *dimension,
        }
    }

    /// True iff `p` is within distance `tol` of the body.
    ///
    /// Half-space slacks are measured in normalized (Euclidean distance) units.
    pub fn contains(&self, p: &RealVector, tol: f64) -> Result<bool, Error> {
        if p.dim() != self.dimension() {
            return Err(Error::DimensionMismatch { expected: self.dimension(), found: p.dim() });
        }
        Ok(match self {
            ConvexBody::Ball { center, radius } => p.distance(center) <= radius + tol,
            ConvexBody::HalfspaceIntersection { halfspaces } => {
                halfspaces.iter().all(|(normal, offset)| {
                    (normal.dot(p) - offset) / normal.norm() >= -tol
                })
            }
            ConvexBody::WholeSpace { .. } => true,
        })
    }

    /// Nearest point of the body to `p`.
    ///
    /// For half-space intersections this runs an inner best-approximation
    /// cycle (projections with correction terms) to `tol.solve_tol`; exceeding
    /// `tol.max_iter` without meeting the feasibility slack signals a possibly
    /// empty body.
    pub fn project(&self, p: &RealVector, tol: &Tolerances) -> Result<RealVector, Error> {
        if p.dim() != self.dimension() {
            return Err(Error::DimensionMismatch { expected: self.dimension(), found: p.dim() });
        }
        match self {
            ConvexBody::Ball { center, radius } => geometry::project_ball(p, center, *radius),
            ConvexBody::WholeSpace { .. } => Ok(p.clone()),
            ConvexBody::HalfspaceIntersection { halfspaces } => {
                project_halfspace_intersection(p, halfspaces, tol)
            }
        }
    }

    /// Distance from `p` to the body (through [`ConvexBody::project`] for
    /// half-space intersections).
    pub fn distance(&self, p: &RealVector, tol: &Tolerances) -> Result<f64, Error> {
        match self {
            ConvexBody::Ball { center, radius } => {
                if p.dim() != center.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: center.dim(),
                        found: p.dim(),
                    });
                }
                Ok((p.distance(center) - radius).max(0.0))
            }
            ConvexBody::WholeSpace { dimension } => {
                if p.dim() != *dimension {
                    return Err(Error::DimensionMismatch { expected: *dimension, found: p.dim() });
                }
                Ok(0.0)
            }
            ConvexBody::HalfspaceIntersection { .. } => {
                let q = self.project(p, tol)?;
                Ok(p.distance(&q))
            }
        }
    }

    /// The reflected body `−K = {−y : y ∈ K}`.
    pub fn negated(&self) -> ConvexBody {
        match self {
            ConvexBody::Ball { center, radius } => {
                ConvexBody::Ball { center: center.scale(-1.0), radius: *radius }
            }
            ConvexBody::HalfspaceIntersection { halfspaces } => ConvexBody::HalfspaceIntersection {
                halfspaces: halfspaces.iter().map(|(n, o)| (n.scale(-1.0), *o)).collect(),
            },
            ConvexBody::WholeSpace { dimension } => {
                ConvexBody::WholeSpace { dimension: *dimension }
            }
        }
    }

    /// Boundedness check used by the monotone and strain engines.
    ///
    /// A half-space intersection is bounded iff its recession cone is trivial,
    /// iff the normals positively span the space, iff every signed coordinate
    /// direction lies in the conical hull of the normalized normals. Cone
    /// membership is reduced to a hull projection against `{0} ∪ {R·n̂ᵢ}` with a
    /// large `R`, which is exact at these scales.
    pub fn is_bounded(&self) -> bool {
        match self {
            ConvexBody::Ball { .. } => true,
            ConvexBody::WholeSpace { dimension } => *dimension == 0,
            ConvexBody::HalfspaceIntersection { halfspaces } => {
                let dim = halfspaces[0].0.dim();
                const CONE_SCALE: f64 = 1e6;
                const CONE_TOL: f64 = 1e-6;
                let mut gens: Vec<RealVector> = Vec::with_capacity(halfspaces.len() + 1);
                gens.push(RealVector::zeros(dim));
                for (normal, _) in halfspaces {
                    match normal.normalized() {
                        Some(unit) => gens.push(unit.scale(CONE_SCALE)),
                        None => return false,
                    }
                }
                let gens = match PointSet::new(gens) {
                    Ok(g) => g,
                    Err(_) => return false,
                };
                for axis in 0..dim {
                    for sign in [1.0, -1.0] {
                        let mut target = RealVector::zeros(dim);
                        let mut coords = target.as_slice().to_vec();
                        coords[axis] = sign;
                        target = RealVector::new(coords).unwrap();
                        match geometry::hull_distance(&target, &gens) {
                            Ok(d) if d <= CONE_TOL => {}
                            _ => return false,
                        }
                    }
                }
                true
            }
        }
    }
}

/// Best approximation in an intersection of half-spaces via the projection
/// cycle with correction terms.
fn project_halfspace_intersection(
    p: &RealVector,
    halfspaces: &[(RealVector, f64)],
    tol: &Tolerances,
) -> Result<RealVector, Error> {
    // Single half-space: the closed form is already the best approximation.
    if halfspaces.len() == 1 {
        let (normal, offset) = &halfspaces[0];
        return geometry::project_halfspace(p, normal, *offset);
    }
    let mut x = p.clone();
    let mut corrections: Vec<RealVector> = halfspaces.iter().map(|_| RealVector::zeros(p.dim())).collect();
    for _ in 0..tol.max_iter {
        let previous = x.clone();
        for ((normal, offset), correction) in halfspaces.iter().zip(corrections.iter_mut()) {
            let y = x.add(correction);
            let projected = geometry::project_halfspace(&y, normal, *offset)?;
            *correction = y.sub(&projected);
            x = projected;
        }
        if x.distance(&previous) < tol.solve_tol {
            break;
        }
    }
    Ok(x)
}

/// A body translated by a fixed shift: `p ∈ shifted ⇔ p − shift ∈ body`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ShiftedBody {
    pub body: ConvexBody,
    pub shift: RealVector,
}

impl ShiftedBody {
    pub fn new(body: ConvexBody, shift: RealVector) -> Result<Self, Error> {
        if body.dimension() != shift.dim() {
            return Err(Error::DimensionMismatch {
                expected: body.dimension(),
                found: shift.dim(),
            });
        }
        Ok(ShiftedBody { body, shift })
    }

    pub fn contains(&self, p: &RealVector, tol: f64) -> Result<bool, Error> {
        self.body.contains(&p.sub(&self.shift), tol)
    }

    pub fn project(&self, p: &RealVector, tol: &Tolerances) -> Result<RealVector, Error> {
        Ok(self.shift.add(&self.body.project(&p.sub(&self.shift), tol)?))
    }

    pub fn distance(&self, p: &RealVector, tol: &Tolerances) -> Result<f64, Error> {
        self.body.distance(&p.sub(&self.shift), tol)
    }
}
