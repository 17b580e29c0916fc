//! Dense vector arithmetic, elementary projections, exact hull projection,
//! rigid embedding of distance matrices, and diameters.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::linalg;
use crate::scalar;

/// A point or direction in finite-dimensional Euclidean space.
///
/// Coordinates are validated to be finite at construction; arithmetic between
/// vectors asserts matching dimensions.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct RealVector(Vec<f64>);

impl RealVector {
    /// Wraps coordinates, rejecting NaN and infinities.
    pub fn new(entries: Vec<f64>) -> Result<Self, Error> {
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(RealVector(entries))
    }

    pub fn from_slice(entries: &[f64]) -> Result<Self, Error> {
        Self::new(entries.to_vec())
    }

    pub fn zeros(dim: usize) -> Self {
        RealVector(vec![0.0; dim])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    #[inline]
    pub fn iter(&self) -> core::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "vector addition dimension mismatch");
        RealVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "vector subtraction dimension mismatch");
        RealVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, factor: f64) -> Self {
        RealVector(self.0.iter().map(|a| a * factor).collect())
    }

    /// `self + factor * other`, in place.
    pub fn add_scaled_assign(&mut self, other: &Self, factor: f64) {
        assert_eq!(self.dim(), other.dim(), "vector axpy dimension mismatch");
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += factor * b;
        }
    }

    pub fn dot(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dot product dimension mismatch");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_squared(&self) -> f64 {
        self.0.iter().map(|a| a * a).sum()
    }

    pub fn norm(&self) -> f64 {
        scalar::sqrt(self.norm_squared())
    }

    pub fn distance_squared(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "distance dimension mismatch");
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| {
                let d = a - b;
                d * d
            })
            .sum()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        scalar::sqrt(self.distance_squared(other))
    }

    /// Returns `self / ‖self‖`, or `None` for (numerically) zero vectors.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        if n <= 0.0 {
            None
        } else {
            Some(self.scale(1.0 / n))
        }
    }
}

impl core::ops::Index<usize> for RealVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// An indexed list of points sharing one dimension.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct PointSet {
    points: Vec<RealVector>,
}

impl PointSet {
    /// Builds a point set, requiring at least one point and uniform dimensions.
    pub fn new(points: Vec<RealVector>) -> Result<Self, Error> {
        let mut iter = points.iter();
        if let Some(first) = iter.next() {
            let dim = first.dim();
            for p in iter {
                if p.dim() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
                }
            }
            Ok(PointSet { points })
        } else {
            Err(Error::EmptyPointSet)
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &RealVector {
        &self.points[i]
    }

    pub fn iter(&self) -> core::slice::Iter<'_, RealVector> {
        self.points.iter()
    }

    pub fn as_slice(&self) -> &[RealVector] {
        &self.points
    }

    /// Arithmetic mean of the points.
    pub fn centroid(&self) -> RealVector {
        let mut acc = RealVector::zeros(self.dim());
        for p in &self.points {
            acc.add_scaled_assign(p, 1.0);
        }
        acc.scale(1.0 / self.points.len() as f64)
    }
}

/// Numerical tolerances shared across the iterative solvers.
///
/// `feas_tol` is the slack admitted when testing constraint satisfaction,
/// `solve_tol` the iterate-change threshold that stops the projection loops,
/// and `max_iter` the cycle budget.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tolerances {
    pub feas_tol: f64,
    pub solve_tol: f64,
    pub max_iter: usize,
}

impl Tolerances {
    pub fn new(feas_tol: f64, solve_tol: f64, max_iter: usize) -> Result<Self, Error> {
        if !(solve_tol > 0.0 && feas_tol >= solve_tol && feas_tol.is_finite() && max_iter >= 1) {
            return Err(Error::InvalidTolerances);
        }
        Ok(Tolerances { feas_tol, solve_tol, max_iter })
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { feas_tol: 1e-7, solve_tol: 1e-10, max_iter: 100_000 }
    }
}

/// Nearest point of the closed ball `B(center, radius)` to `p`.
pub fn project_ball(p: &RealVector, center: &RealVector, radius: f64) -> Result<RealVector, Error> {
    if p.dim() != center.dim() {
        return Err(Error::DimensionMismatch { expected: center.dim(), found: p.dim() });
    }
    if radius.is_nan() || radius < 0.0 {
        return Err(Error::NegativeRadius(radius));
    }
    let offset = p.sub(center);
    let dist = offset.norm();
    if dist <= radius {
        Ok(p.clone())
    } else {
        Ok(center.add(&offset.scale(radius / dist)))
    }
}

/// Nearest point of the half-space `{y : ⟨normal, y⟩ ≥ offset}` to `p`.
pub fn project_halfspace(
    p: &RealVector,
    normal: &RealVector,
    offset: f64,
) -> Result<RealVector, Error> {
    if p.dim() != normal.dim() {
        return Err(Error::DimensionMismatch { expected: normal.dim(), found: p.dim() });
    }
    let nn = normal.norm_squared();
    if nn <= 0.0 {
        return Err(Error::ZeroNormal);
    }
    let slack = normal.dot(p) - offset;
    if slack >= 0.0 {
        Ok(p.clone())
    } else {
        let mut out = p.clone();
        out.add_scaled_assign(normal, -slack / nn);
        Ok(out)
    }
}

/// Relative stopping tolerance of the min-norm-point iteration.
const HULL_STOP_REL: f64 = 1e-13;
/// Weight cutoff below which a corral member is dropped.
const HULL_WEIGHT_EPS: f64 = 1e-12;

/// Nearest point of `Conv(generators)` to `p`, with simplex weights realizing it.
///
/// Runs Wolfe's min-norm-point active-set method on the generators shifted by
/// `−p`; the corral solves are exact linear systems, so the result is accurate
/// to machine precision for the generator counts used here (tens of points).
pub fn project_hull(
    p: &RealVector,
    generators: &PointSet,
) -> Result<(RealVector, Vec<f64>), Error> {
    if generators.dim() != p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: generators.dim() });
    }
    let k = generators.len();
    let shifted: Vec<RealVector> = generators.iter().map(|g| g.sub(p)).collect();

    let scale_sq = shifted.iter().map(|z| z.norm_squared()).fold(1.0_f64, f64::max);
    let stop_tol = HULL_STOP_REL * scale_sq;

    // Corral state: member indices and their convex weights.
    let mut corral: Vec<usize> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    let mut best = 0usize;
    for (i, z) in shifted.iter().enumerate() {
        if z.norm_squared() < shifted[best].norm_squared() {
            best = i;
        }
    }
    corral.push(best);
    weights.push(1.0);
    let mut x = shifted[best].clone();

    let max_major = 64 + 16 * k;
    for _ in 0..max_major {
        // Optimality test: x is the projection iff no generator improves on it.
        let mut j_star = 0usize;
        let mut best_ip = f64::INFINITY;
        for (j, z) in shifted.iter().enumerate() {
            let ip = x.dot(z);
            if ip < best_ip {
                best_ip = ip;
                j_star = j;
            }
        }
        if best_ip >= x.norm_squared() - stop_tol || corral.contains(&j_star) {
            break;
        }
        corral.push(j_star);
        weights.push(0.0);

        // Minor cycle: restore the corral to a set whose affine min-norm point
        // has nonnegative weights.
        loop {
            match affine_min_norm(&shifted, &corral) {
                None => {
                    // Affinely dependent corral; drop the newcomer and stop.
                    corral.pop();
                    weights.pop();
                    x = combine(&shifted, &corral, &weights, p.dim());
                    return Ok(finish(p, generators, &corral, &weights, &x));
                }
                Some(v) => {
                    if v.iter().all(|&vi| vi >= -HULL_WEIGHT_EPS) {
                        weights = v;
                        x = combine(&shifted, &corral, &weights, p.dim());
                        break;
                    }
                    // Step from the current weights toward v until a weight hits zero.
                    let mut theta = 1.0_f64;
                    for (wi, vi) in weights.iter().zip(&v) {
                        if *vi < -HULL_WEIGHT_EPS && *wi > *vi {
                            theta = theta.min(wi / (wi - vi));
                        }
                    }
                    let mut next: Vec<f64> = weights
                        .iter()
                        .zip(&v)
                        .map(|(wi, vi)| (1.0 - theta) * wi + theta * vi)
                        .collect();
                    // Drop members whose weight vanished (keep at least one).
                    let mut keep_idx: Vec<usize> = Vec::new();
                    for (slot, w) in next.iter().enumerate() {
                        if *w > HULL_WEIGHT_EPS {
                            keep_idx.push(slot);
                        }
                    }
                    if keep_idx.is_empty() {
                        let argmax = next
                            .iter()
                            .enumerate()
                            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                            .map(|(i, _)| i)
                            .unwrap_or(0);
                        keep_idx.push(argmax);
                        next[argmax] = 1.0;
                    }
                    corral = keep_idx.iter().map(|&s| corral[s]).collect();
                    weights = keep_idx.iter().map(|&s| next[s]).collect();
                }
            }
        }
    }

    Ok(finish(p, generators, &corral, &weights, &x))
}

/// Min-norm point of the affine hull of the selected shifted generators.
///
/// Solves the bordered Gram system; `None` when the corral is affinely
/// dependent (singular system).
fn affine_min_norm(shifted: &[RealVector], corral: &[usize]) -> Option<Vec<f64>> {
    let s = corral.len();
    let n = s + 1;
    let mut a = vec![0.0; n * n];
    for (row, &i) in corral.iter().enumerate() {
        for (col, &j) in corral.iter().enumerate() {
            a[row * n + col] = shifted[i].dot(&shifted[j]);
        }
        a[row * n + s] = 1.0;
        a[s * n + row] = 1.0;
    }
    let mut rhs = vec![0.0; n];
    rhs[s] = 1.0;
    let sol = linalg::solve_dense(&a, &rhs, n, 1e-13)?;
    Some(sol[..s].to_vec())
}

fn combine(shifted: &[RealVector], corral: &[usize], weights: &[f64], dim: usize) -> RealVector {
    let mut x = RealVector::zeros(dim);
    for (&i, &w) in corral.iter().zip(weights) {
        x.add_scaled_assign(&shifted[i], w);
    }
    x
}

fn finish(
    p: &RealVector,
    generators: &PointSet,
    corral: &[usize],
    weights: &[f64],
    x: &RealVector,
) -> (RealVector, Vec<f64>) {
    let mut full = vec![0.0; generators.len()];
    let mut sum = 0.0;
    for (&i, &w) in corral.iter().zip(weights) {
        let w = w.max(0.0);
        full[i] += w;
        sum += w;
    }
    if sum > 0.0 {
        for w in &mut full {
            *w /= sum;
        }
    } else {
        full[corral[0]] = 1.0;
    }
    // Recombine from the cleaned weights so point and weights agree exactly.
    let mut point = RealVector::zeros(p.dim());
    for (g, &w) in generators.iter().zip(&full) {
        if w != 0.0 {
            point.add_scaled_assign(g, w);
        }
    }
    let _ = x;
    (point, full)
}

/// Distance from `p` to `Conv(generators)`.
pub fn hull_distance(p: &RealVector, generators: &PointSet) -> Result<f64, Error> {
    let (q, _) = project_hull(p, generators)?;
    Ok(p.distance(&q))
}

/// Embeds a Euclidean distance matrix as concrete points in `R^target_dim`.
///
/// `distances` is row-major of side `k`. The doubly-centered Gram matrix must
/// be positive semidefinite up to `−tol.feas_tol`; eigenvalues in
/// `[−feas_tol, feas_tol]` are clipped to zero. The first output point is
/// placed at the origin.
pub fn rigid_embed(
    distances: &[f64],
    k: usize,
    target_dim: usize,
    tol: &Tolerances,
) -> Result<PointSet, Error> {
    if k == 0 {
        return Err(Error::EmptyPointSet);
    }
    if distances.len() != k * k {
        return Err(Error::InvalidDistanceMatrix("matrix is not k-by-k"));
    }
    if target_dim == 0 {
        return Err(Error::InsufficientDimension { needed: 1, target: 0 });
    }
    let scale = distances.iter().fold(1.0_f64, |acc, &d| acc.max(scalar::abs(d)));
    for i in 0..k {
        if scalar::abs(distances[i * k + i]) > 1e-12 * scale {
            return Err(Error::InvalidDistanceMatrix("nonzero diagonal"));
        }
        for j in 0..k {
            let d = distances[i * k + j];
            if !d.is_finite() || d < 0.0 {
                return Err(Error::InvalidDistanceMatrix("negative or non-finite entry"));
            }
            if scalar::abs(d - distances[j * k + i]) > 1e-12 * scale {
                return Err(Error::InvalidDistanceMatrix("not symmetric"));
            }
        }
    }

    // Doubly-centered Gram matrix B = -1/2 J D^2 J.
    let mut sq = vec![0.0; k * k];
    for i in 0..k * k {
        sq[i] = distances[i] * distances[i];
    }
    let mut row_mean = vec![0.0; k];
    let mut total = 0.0;
    for i in 0..k {
        let mut acc = 0.0;
        for j in 0..k {
            acc += sq[i * k + j];
        }
        row_mean[i] = acc / k as f64;
        total += acc;
    }
    let total_mean = total / (k * k) as f64;
    let mut gram = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            gram[i * k + j] = -0.5 * (sq[i * k + j] - row_mean[i] - row_mean[j] + total_mean);
        }
    }

    let (eigs, vecs) = linalg::symmetric_eigen(&gram, k);
    if let Some(&min_eig) = eigs.last() {
        if min_eig < -tol.feas_tol {
            return Err(Error::NonEuclideanDistances { min_eigenvalue: min_eig });
        }
    }
    let embed_dim = eigs.iter().filter(|&&l| l > tol.feas_tol).count();
    if embed_dim > target_dim {
        return Err(Error::InsufficientDimension { needed: embed_dim, target: target_dim });
    }

    let mut points = Vec::with_capacity(k);
    for i in 0..k {
        let mut coords = vec![0.0; target_dim];
        for (j, &l) in eigs.iter().enumerate().take(embed_dim) {
            coords[j] = scalar::sqrt(l) * vecs[i * k + j];
        }
        points.push(RealVector::new(coords)?);
    }
    // Translate the configuration so the first point sits at the origin.
    let origin = points[0].clone();
    let translated: Vec<RealVector> = points.iter().map(|p| p.sub(&origin)).collect();
    PointSet::new(translated)
}

/// Maximum pairwise distance; zero for a singleton.
pub fn diameter(s: &PointSet) -> Result<f64, Error> {
    if s.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let mut best = 0.0_f64;
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            let d = s.point(i).distance(s.point(j));
            if d > best {
                best = d;
            }
        }
    }
    Ok(best)
}
