//! Shared generators and independent oracles for the integration suites.
//!
//! Everything here is deliberately separate from the library's own algorithms
//! so that agreement between the two is evidence, not tautology.

#![allow(dead_code)]

use lipext_core::geometry::{PointSet, RealVector};
use lipext_core::simplex::SimplexQuadratic;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn v(entries: &[f64]) -> RealVector {
    RealVector::from_slice(entries).unwrap()
}

pub fn random_vector(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> RealVector {
    RealVector::new((0..dim).map(|_| rng.gen_range(-scale..scale)).collect()).unwrap()
}

pub fn random_points(rng: &mut ChaCha8Rng, n: usize, dim: usize, scale: f64) -> PointSet {
    PointSet::new((0..n).map(|_| random_vector(rng, dim, scale)).collect()).unwrap()
}

/// Rescales raw values so the worst pairwise difference ratio against the
/// domain distances is exactly one (or leaves them alone if already smaller).
pub fn rescale_pairwise_lipschitz(points: &PointSet, raw: Vec<RealVector>) -> Vec<RealVector> {
    let mut worst: f64 = 0.0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let dx = points.point(i).distance(points.point(j));
            if dx > 1e-9 {
                worst = worst.max(raw[i].distance(&raw[j]) / dx);
            }
        }
    }
    if worst > 1.0 {
        raw.into_iter().map(|u| u.scale(1.0 / worst)).collect()
    } else {
        raw
    }
}

/// Row-major random symmetric positive semidefinite matrix `GᵀG`.
pub fn random_psd(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    let g: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-scale..scale)).collect();
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for k in 0..n {
                acc += g[k * n + i] * g[k * n + j];
            }
            out[i * n + j] = acc;
        }
    }
    out
}

/// `M x` for a row-major `rows × cols` matrix.
pub fn apply_matrix(m: &[f64], rows: usize, cols: usize, x: &RealVector) -> RealVector {
    let mut out = vec![0.0; rows];
    for r in 0..rows {
        for c in 0..cols {
            out[r] += m[r * cols + c] * x[c];
        }
    }
    RealVector::new(out).unwrap()
}

/// Spectral norm by power iteration on `MᵀM`.
pub fn operator_norm(m: &[f64], rows: usize, cols: usize) -> f64 {
    let mut x = vec![1.0_f64; cols];
    let mut norm = 0.0;
    for _ in 0..300 {
        // y = M x
        let mut y = vec![0.0; rows];
        for r in 0..rows {
            for c in 0..cols {
                y[r] += m[r * cols + c] * x[c];
            }
        }
        // z = Mᵀ y
        let mut z = vec![0.0; cols];
        for r in 0..rows {
            for c in 0..cols {
                z[c] += m[r * cols + c] * y[r];
            }
        }
        let zn = z.iter().map(|a| a * a).sum::<f64>().sqrt();
        if zn == 0.0 {
            return 0.0;
        }
        for (xi, zi) in x.iter_mut().zip(&z) {
            *xi = zi / zn;
        }
        norm = zn.sqrt();
    }
    norm
}

/// A random affine map `x ↦ Mx + b` with operator norm rescaled to at most one.
pub struct AffineContraction {
    pub matrix: Vec<f64>,
    pub bias: RealVector,
    pub rows: usize,
    pub cols: usize,
}

impl AffineContraction {
    pub fn random(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Self {
        let mut matrix: Vec<f64> = (0..rows * cols).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = operator_norm(&matrix, rows, cols);
        if norm > 0.0 {
            let s = 1.0 / (norm * (1.0 + 1e-9));
            for entry in &mut matrix {
                *entry *= s;
            }
        }
        let bias = random_vector(rng, rows, 1.0);
        AffineContraction { matrix, bias, rows, cols }
    }

    pub fn apply(&self, x: &RealVector) -> RealVector {
        apply_matrix(&self.matrix, self.rows, self.cols, x).add(&self.bias)
    }
}

/// Euclidean projection onto the probability simplex (sort-based).
pub fn project_simplex(y: &[f64]) -> Vec<f64> {
    let mut sorted = y.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cumsum = 0.0;
    let mut tau = 0.0;
    let mut rho = 0;
    for (j, &val) in sorted.iter().enumerate() {
        cumsum += val;
        let candidate = (cumsum - 1.0) / (j + 1) as f64;
        if val - candidate > 0.0 {
            rho = j + 1;
            tau = candidate;
        }
    }
    let _ = rho;
    y.iter().map(|&yi| (yi - tau).max(0.0)).collect()
}

/// Projected-gradient ascent on the simplex with backtracking, used as the
/// polish oracle for the exact face-enumeration optimizer.
pub fn polish_max_on_simplex(
    q: &SimplexQuadratic,
    start: &[f64],
    iterations: usize,
) -> (Vec<f64>, f64) {
    let mut t = project_simplex(start);
    let mut value = q.evaluate(&t);
    let mut step = 1.0_f64;
    for _ in 0..iterations {
        let gradient = q.gradient(&t);
        let mut improved = false;
        let mut s = step;
        for _ in 0..80 {
            let candidate: Vec<f64> =
                t.iter().zip(&gradient).map(|(ti, gi)| ti + s * gi).collect();
            let candidate = project_simplex(&candidate);
            let cv = q.evaluate(&candidate);
            if cv > value {
                t = candidate;
                value = cv;
                step = (s * 2.0).min(1e6);
                improved = true;
                break;
            }
            s *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (t, value)
}

/// Brute-force simplex grid maximum together with its argmax (independent of
/// the library's own grid routine).
pub fn grid_max_on_simplex(q: &SimplexQuadratic, resolution: usize) -> (f64, Vec<f64>) {
    let k = q.dim();
    let mut best = f64::NEG_INFINITY;
    let mut best_t = vec![0.0; k];
    let mut counts = vec![0usize; k];
    fn recurse(
        q: &SimplexQuadratic,
        resolution: usize,
        slot: usize,
        remaining: usize,
        counts: &mut Vec<usize>,
        best: &mut f64,
        best_t: &mut Vec<f64>,
    ) {
        let k = counts.len();
        if slot == k - 1 {
            counts[slot] = remaining;
            let t: Vec<f64> =
                counts.iter().map(|&c| c as f64 / resolution as f64).collect();
            let val = q.evaluate(&t);
            if val > *best {
                *best = val;
                *best_t = t;
            }
            return;
        }
        for c in 0..=remaining {
            counts[slot] = c;
            recurse(q, resolution, slot + 1, remaining - c, counts, best, best_t);
        }
    }
    recurse(q, resolution, 0, resolution, &mut counts, &mut best, &mut best_t);
    (best, best_t)
}

/// Closed-form nearest point of the intersection of two balls (assumed to
/// intersect, with a nondegenerate rim).
pub fn two_ball_best_approximation(
    c1: &RealVector,
    r1: f64,
    c2: &RealVector,
    r2: f64,
    x: &RealVector,
) -> RealVector {
    let in1 = x.distance(c1) <= r1 + 1e-12;
    let in2 = x.distance(c2) <= r2 + 1e-12;
    if in1 && in2 {
        return x.clone();
    }
    let project_ball = |p: &RealVector, c: &RealVector, r: f64| {
        let offset = p.sub(c);
        let d = offset.norm();
        if d <= r {
            p.clone()
        } else {
            c.add(&offset.scale(r / d))
        }
    };
    let p1 = project_ball(x, c1, r1);
    if p1.distance(c2) <= r2 + 1e-12 {
        return p1;
    }
    let p2 = project_ball(x, c2, r2);
    if p2.distance(c1) <= r1 + 1e-12 {
        return p2;
    }
    // Both constraints active: project onto the rim sphere.
    let d = c1.distance(c2);
    let axis = c2.sub(c1).scale(1.0 / d);
    let h = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let rho = (r1 * r1 - h * h).max(0.0).sqrt();
    let center = c1.add(&axis.scale(h));
    let mut perp = x.sub(&center);
    let along = perp.dot(&axis);
    perp.add_scaled_assign(&axis, -along);
    let pn = perp.norm();
    assert!(pn > 1e-12, "degenerate rim projection");
    center.add(&perp.scale(rho / pn))
}

/// Closed-form nearest point of the intersection of two half-spaces
/// `⟨nᵢ, y⟩ ≥ bᵢ` (assumed nonempty, normals not antiparallel).
pub fn two_halfspace_best_approximation(
    n1: &RealVector,
    b1: f64,
    n2: &RealVector,
    b2: f64,
    x: &RealVector,
) -> RealVector {
    let slack1 = n1.dot(x) - b1;
    let slack2 = n2.dot(x) - b2;
    if slack1 >= 0.0 && slack2 >= 0.0 {
        return x.clone();
    }
    let project = |p: &RealVector, n: &RealVector, b: f64| {
        let slack = n.dot(p) - b;
        if slack >= 0.0 {
            p.clone()
        } else {
            let mut out = p.clone();
            out.add_scaled_assign(n, -slack / n.norm_squared());
            out
        }
    };
    let p1 = project(x, n1, b1);
    if n2.dot(&p1) - b2 >= -1e-12 {
        return p1;
    }
    let p2 = project(x, n2, b2);
    if n1.dot(&p2) - b1 >= -1e-12 {
        return p2;
    }
    // Corner: both active. Solve x + a*n1 + c*n2 with both equalities.
    let g11 = n1.norm_squared();
    let g12 = n1.dot(n2);
    let g22 = n2.norm_squared();
    let det = g11 * g22 - g12 * g12;
    assert!(det.abs() > 1e-12, "degenerate corner");
    let r1 = b1 - n1.dot(x);
    let r2 = b2 - n2.dot(x);
    let a = (r1 * g22 - r2 * g12) / det;
    let c = (r2 * g11 - r1 * g12) / det;
    let mut out = x.clone();
    out.add_scaled_assign(n1, a);
    out.add_scaled_assign(n2, c);
    out
}

/// Uniform random simplex weights.
pub fn random_simplex_weights(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| -f64::ln(rng.gen_range(1e-12..1.0))).collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|r| r / sum).collect()
}

/// Random unit vector.
pub fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> RealVector {
    loop {
        let candidate = random_vector(rng, dim, 1.0);
        if let Some(unit) = candidate.normalized() {
            if candidate.norm() > 1e-3 {
                return unit;
            }
        }
    }
}
