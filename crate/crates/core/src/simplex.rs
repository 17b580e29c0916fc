//! Exact optimization of quadratics over the probability simplex.
//!
//! The checkers must certify universally quantified inequalities, so the
//! optimizer enumerates every nonempty face of the simplex and solves the
//! stationarity system of the restricted quadratic on each face's affine
//! hull; a heuristic maximizer could silently under-report violations.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::linalg;
use crate::scalar;

/// Hard cap on the simplex dimension; face enumeration is `2^k − 1`.
pub const FACE_ENUMERATION_CAP: usize = 24;

/// A quadratic `q(t) = tᵀ Q t + bᵀ t + c` over the standard simplex `Δ_k`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimplexQuadratic {
    q: Vec<f64>,
    b: Vec<f64>,
    c: f64,
    k: usize,
}

impl SimplexQuadratic {
    /// Builds the quadratic from a row-major symmetric `k×k` matrix `q`, a
    /// linear term `b`, and a constant `c`.
    pub fn new(q: Vec<f64>, b: Vec<f64>, c: f64) -> Result<Self, Error> {
        let k = b.len();
        if q.len() != k * k {
            return Err(Error::DimensionMismatch { expected: k * k, found: q.len() });
        }
        let scale = q.iter().fold(1.0_f64, |acc, &x| acc.max(scalar::abs(x)));
        for i in 0..k {
            for j in 0..k {
                if scalar::abs(q[i * k + j] - q[j * k + i]) > 1e-12 * scale {
                    return Err(Error::InvalidProblem(alloc::format!(
                        "quadratic matrix not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        if q.iter().chain(b.iter()).any(|x| !x.is_finite()) || !c.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(SimplexQuadratic { q, b, c, k })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn evaluate(&self, t: &[f64]) -> f64 {
        debug_assert_eq!(t.len(), self.k);
        let mut acc = self.c;
        for (i, &ti) in t.iter().enumerate() {
            if ti == 0.0 {
                continue;
            }
            acc += self.b[i] * ti;
            for (j, &tj) in t.iter().enumerate() {
                acc += ti * self.q[i * self.k + j] * tj;
            }
        }
        acc
    }

    /// Gradient `2Qt + b`.
    pub fn gradient(&self, t: &[f64]) -> Vec<f64> {
        let mut g = self.b.clone();
        for (i, gi) in g.iter_mut().enumerate() {
            for (j, &tj) in t.iter().enumerate() {
                *gi += 2.0 * self.q[i * self.k + j] * tj;
            }
        }
        g
    }

    fn negated(&self) -> SimplexQuadratic {
        SimplexQuadratic {
            q: self.q.iter().map(|x| -x).collect(),
            b: self.b.iter().map(|x| -x).collect(),
            c: -self.c,
            k: self.k,
        }
    }
}

/// An optimum of a [`SimplexQuadratic`] together with the face that carries it.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StationaryWitness {
    /// Indices of the simplex face supporting the optimizer.
    pub face: Vec<usize>,
    /// Full-length simplex vector, supported on `face`.
    pub t: Vec<f64>,
    /// Value of the quadratic at `t`.
    pub value: f64,
}

/// Global maximum of `q` over the simplex by exhaustive face enumeration.
///
/// Every vertex is a singleton face, so vertices are always candidates;
/// stationary points with a negative coordinate are discarded (the face's
/// maximum then lies on a sub-face, which is enumerated anyway), and singular
/// stationarity systems are skipped for the same reason. Ties between faces
/// go to the lexicographically smallest index set.
pub fn maximize_over_simplex(q: &SimplexQuadratic) -> Result<StationaryWitness, Error> {
    let k = q.dim();
    if k == 0 {
        return Err(Error::EmptySample);
    }
    if k > FACE_ENUMERATION_CAP {
        return Err(Error::FaceCapExceeded { dim: k, cap: FACE_ENUMERATION_CAP });
    }

    let mut best: Option<StationaryWitness> = None;
    for mask in 1u32..(1u32 << k) {
        let face: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
        let Some(t_face) = face_stationary_point(q, &face) else {
            continue;
        };
        if t_face.iter().any(|&ti| ti < -1e-12) {
            continue;
        }
        // Clean tiny negatives and renormalize so the witness is a simplex
        // vector to machine precision; the value is re-evaluated afterwards.
        let mut cleaned: Vec<f64> = t_face.iter().map(|&ti| ti.max(0.0)).collect();
        let sum: f64 = cleaned.iter().sum();
        if sum.is_nan() || sum <= 0.0 {
            continue;
        }
        for ti in &mut cleaned {
            *ti /= sum;
        }
        let mut t = vec![0.0; k];
        for (&i, &ti) in face.iter().zip(&cleaned) {
            t[i] = ti;
        }
        let value = q.evaluate(&t);
        let candidate = StationaryWitness { face, t, value };
        best = Some(match best.take() {
            None => candidate,
            Some(current) => pick_better(current, candidate),
        });
    }
    // At least the vertices always produce candidates.
    Ok(best.expect("face enumeration always yields the vertices"))
}

/// Global minimum: [`maximize_over_simplex`] applied to `−q`.
pub fn minimize_over_simplex(q: &SimplexQuadratic) -> Result<StationaryWitness, Error> {
    let mut w = maximize_over_simplex(&q.negated())?;
    w.value = -w.value;
    Ok(w)
}

/// Maximum of `q` over all simplex points with denominator `resolution`.
///
/// Independent brute-force oracle for the exact maximizer.
pub fn brute_force_over_simplex(q: &SimplexQuadratic, resolution: usize) -> Result<f64, Error> {
    let k = q.dim();
    if k == 0 {
        return Err(Error::EmptySample);
    }
    if resolution == 0 {
        return Err(Error::InvalidProblem(alloc::string::String::from(
            "brute-force resolution must be at least 1",
        )));
    }
    let mut best = f64::NEG_INFINITY;
    let mut counts = vec![0usize; k];
    enumerate_compositions(resolution, 0, &mut counts, &mut |counts| {
        let t: Vec<f64> = counts.iter().map(|&c| c as f64 / resolution as f64).collect();
        let v = q.evaluate(&t);
        if v > best {
            best = v;
        }
    });
    Ok(best)
}

fn enumerate_compositions(
    remaining: usize,
    slot: usize,
    counts: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    let k = counts.len();
    if slot == k - 1 {
        counts[slot] = remaining;
        visit(counts);
        return;
    }
    for c in 0..=remaining {
        counts[slot] = c;
        enumerate_compositions(remaining - c, slot + 1, counts, visit);
    }
}

/// Stationary point of `q` restricted to the affine hull of a face, or `None`
/// when the bordered system is singular.
fn face_stationary_point(q: &SimplexQuadratic, face: &[usize]) -> Option<Vec<f64>> {
    let s = face.len();
    let n = s + 1;
    let k = q.dim();
    let mut a = vec![0.0; n * n];
    let mut rhs = vec![0.0; n];
    for (row, &i) in face.iter().enumerate() {
        for (col, &j) in face.iter().enumerate() {
            a[row * n + col] = 2.0 * q.q[i * k + j];
        }
        a[row * n + s] = -1.0;
        a[s * n + row] = 1.0;
        rhs[row] = -q.b[i];
    }
    rhs[s] = 1.0;
    let sol = linalg::solve_dense(&a, &rhs, n, 1e-13)?;
    Some(sol[..s].to_vec())
}

fn pick_better(current: StationaryWitness, candidate: StationaryWitness) -> StationaryWitness {
    if candidate.value > current.value {
        return candidate;
    }
    if candidate.value == current.value && candidate.face < current.face {
        return candidate;
    }
    current
}
