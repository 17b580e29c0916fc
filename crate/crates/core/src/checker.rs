//! Condition checkers: decide whether a sampled vector field admits
//! uniform-distance-preserving 1-Lipschitz extensions (averaged-Lipschitz
//! condition), monotone extensions, or 1-semi-bounded-strain extensions, and
//! produce violation certificates when it does not.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::geometry::{PointSet, RealVector, Tolerances};
use crate::simplex::{self, SimplexQuadratic, FACE_ENUMERATION_CAP};

/// Finite domain points with one target value per point.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VectorFieldSample {
    domain: PointSet,
    values: PointSet,
}

impl VectorFieldSample {
    pub fn new(domain: PointSet, values: PointSet) -> Result<Self, Error> {
        if domain.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: domain.len(),
                found: values.len(),
            });
        }
        Ok(VectorFieldSample { domain, values })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.domain.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    /// Dimension of the domain points.
    #[inline]
    pub fn domain_dim(&self) -> usize {
        self.domain.dim()
    }

    /// Dimension of the target values.
    #[inline]
    pub fn value_dim(&self) -> usize {
        self.values.dim()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &RealVector {
        self.domain.point(i)
    }

    #[inline]
    pub fn value(&self, i: usize) -> &RealVector {
        self.values.point(i)
    }

    pub fn domain(&self) -> &PointSet {
        &self.domain
    }

    pub fn values(&self) -> &PointSet {
        &self.values
    }

    /// The transformed sample with values `x − v(x)`; defined for `n = m`.
    ///
    /// A map is of 1-semi-bounded strain exactly when this transform is
    /// monotone, which is how the strain checker and engine are implemented.
    pub fn identity_minus_values(&self) -> Result<VectorFieldSample, Error> {
        if self.domain_dim() != self.value_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.domain_dim(),
                found: self.value_dim(),
            });
        }
        let transformed: Vec<RealVector> = self
            .domain
            .iter()
            .zip(self.values.iter())
            .map(|(x, v)| x.sub(v))
            .collect();
        Ok(VectorFieldSample { domain: self.domain.clone(), values: PointSet::new(transformed)? })
    }
}

/// How far the universally quantified tuple check is taken.
///
/// Tuples are enumerated exhaustively while their total count stays within
/// `exhaustive_cap`; beyond that, `sample_count` tuples are drawn uniformly
/// with a generator seeded by `seed` and the report is marked probabilistic.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnumerationPolicy {
    pub m_max: usize,
    pub exhaustive_cap: u64,
    pub sample_count: u64,
    pub seed: u64,
}

impl Default for EnumerationPolicy {
    fn default() -> Self {
        EnumerationPolicy { m_max: 3, exhaustive_cap: 1_000_000, sample_count: 100_000, seed: 0 }
    }
}

impl EnumerationPolicy {
    /// Default policy for a sample: tuple size `min(value_dim, 3)`.
    pub fn for_sample(sample: &VectorFieldSample) -> Self {
        EnumerationPolicy { m_max: sample.value_dim().clamp(1, 3), ..Self::default() }
    }
}

/// Which inequality family a report certifies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ConditionKind {
    Lipschitz,
    Monotone,
    Strain,
    PairwiseLipschitz,
}

/// Witness of a failed tuple inequality.
///
/// For the Lipschitz conditions the margin is
/// `‖v(x) − Σtᵢv(xᵢ)‖² − ‖x − Σtᵢxᵢ‖²` at the witness weights; for the
/// monotone and strain conditions it is the (positive) amount by which the
/// bilinear gap drops below zero. Margins are reproducible from the indices
/// and weights by direct evaluation.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ViolationCertificate {
    pub base_index: usize,
    pub tuple_indices: Vec<usize>,
    pub weights: Vec<f64>,
    pub margin: f64,
}

/// Enumeration statistics attached to every report.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CheckStatistics {
    pub tuples_enumerated: u64,
    pub tuples_sampled: u64,
    /// True when the tuple space exceeded `exhaustive_cap` and only a seeded
    /// sample was checked.
    pub probabilistic: bool,
    /// Tuple sizes that were covered.
    pub m_checked: Vec<usize>,
    /// Largest margin observed across all evaluated tuples (negative when the
    /// condition holds with room to spare).
    pub max_margin: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ConditionStatus {
    Satisfied,
    Violated(Vec<ViolationCertificate>),
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConditionReport {
    pub kind: ConditionKind,
    pub status: ConditionStatus,
    pub stats: CheckStatistics,
}

impl ConditionReport {
    pub fn is_satisfied(&self) -> bool {
        matches!(self.status, ConditionStatus::Satisfied)
    }

    pub fn certificates(&self) -> &[ViolationCertificate] {
        match &self.status {
            ConditionStatus::Satisfied => &[],
            ConditionStatus::Violated(certs) => certs,
        }
    }
}

/// Violation reports keep at most this many certificates, ordered by
/// decreasing margin (ties lexicographically).
pub const CERTIFICATE_CAP: usize = 16;

/// Precomputed inner-product tables for fast tuple assembly.
struct GramTables {
    xx: Vec<f64>,
    vv: Vec<f64>,
    /// `⟨vᵢ, xⱼ⟩`; only filled when domain and value dimensions agree.
    vx: Vec<f64>,
    n: usize,
}

impl GramTables {
    fn new(sample: &VectorFieldSample, with_cross: bool) -> Self {
        let n = sample.len();
        let mut xx = vec![0.0; n * n];
        let mut vv = vec![0.0; n * n];
        let mut vx = vec![0.0; if with_cross { n * n } else { 0 }];
        for i in 0..n {
            for j in 0..n {
                xx[i * n + j] = sample.point(i).dot(sample.point(j));
                vv[i * n + j] = sample.value(i).dot(sample.value(j));
                if with_cross {
                    vx[i * n + j] = sample.value(i).dot(sample.point(j));
                }
            }
        }
        GramTables { xx, vv, vx, n }
    }
}

/// `g(t) = ‖v(x) − Σtᵢv(xᵢ)‖² − ‖x − Σtᵢxᵢ‖²` as a simplex quadratic.
fn lipschitz_gap(tables: &GramTables, base: usize, tuple: &[usize]) -> SimplexQuadratic {
    let n = tables.n;
    let k = tuple.len();
    let mut q = vec![0.0; k * k];
    let mut b = vec![0.0; k];
    for (a, &i) in tuple.iter().enumerate() {
        for (bb, &j) in tuple.iter().enumerate() {
            q[a * k + bb] = tables.vv[i * n + j] - tables.xx[i * n + j];
        }
        b[a] = -2.0 * (tables.vv[base * n + i] - tables.xx[base * n + i]);
    }
    let c = tables.vv[base * n + base] - tables.xx[base * n + base];
    SimplexQuadratic::new(q, b, c).expect("gap quadratic is symmetric by construction")
}

/// `h(t) = ⟨v(x) − Σtᵢv(xᵢ), x − Σtᵢxᵢ⟩` as a simplex quadratic.
fn monotone_gap(tables: &GramTables, base: usize, tuple: &[usize]) -> SimplexQuadratic {
    let n = tables.n;
    let k = tuple.len();
    let mut q = vec![0.0; k * k];
    let mut b = vec![0.0; k];
    for (a, &i) in tuple.iter().enumerate() {
        for (bb, &j) in tuple.iter().enumerate() {
            q[a * k + bb] = 0.5 * (tables.vx[i * n + j] + tables.vx[j * n + i]);
        }
        b[a] = -(tables.vx[base * n + i] + tables.vx[i * n + base]);
    }
    let c = tables.vx[base * n + base];
    SimplexQuadratic::new(q, b, c).expect("gap quadratic is symmetric by construction")
}

fn insert_certificate(certs: &mut Vec<ViolationCertificate>, cert: ViolationCertificate) {
    certs.push(cert);
    certs.sort_by(|a, b| {
        b.margin
            .partial_cmp(&a.margin)
            .unwrap()
            .then(a.base_index.cmp(&b.base_index))
            .then(a.tuple_indices.len().cmp(&b.tuple_indices.len()))
            .then(a.tuple_indices.cmp(&b.tuple_indices))
    });
    certs.dedup_by(|a, b| {
        a.base_index == b.base_index && a.tuple_indices == b.tuple_indices
    });
    certs.truncate(CERTIFICATE_CAP);
}

/// Number of size-`k` multisets over `n` symbols, saturating.
fn multiset_count(n: u64, k: u64) -> u64 {
    // C(n + k - 1, k)
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n + i) as u128);
        acc /= (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

fn for_each_multiset(n: usize, k: usize, visit: &mut impl FnMut(&[usize])) {
    let mut tuple = vec![0usize; k];
    loop {
        visit(&tuple);
        let mut pos = k;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            if tuple[pos] < n - 1 {
                let next = tuple[pos] + 1;
                for slot in tuple.iter_mut().skip(pos) {
                    *slot = next;
                }
                break;
            }
        }
    }
}

/// Draws a uniformly random size-`k` multiset of `{0..n}` via the stars-and-bars
/// bijection with `k`-subsets of `{0..n+k-1}`.
fn sample_multiset(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let range = n + k - 1;
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    while chosen.len() < k {
        let candidate = rng.gen_range(0..range);
        if !chosen.contains(&candidate) {
            chosen.push(candidate);
        }
    }
    chosen.sort_unstable();
    chosen.iter().enumerate().map(|(i, &s)| s - i).collect()
}

enum GapSense {
    /// Violation when the maximum exceeds `+feas_tol` (Lipschitz family).
    MaxAbove,
    /// Violation when the minimum drops below `−feas_tol` (monotone family).
    MinBelow,
}

fn run_check(
    sample: &VectorFieldSample,
    policy: &EnumerationPolicy,
    tol: &Tolerances,
    kind: ConditionKind,
    sense: GapSense,
    with_cross: bool,
) -> Result<ConditionReport, Error> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let m_limit = sample.value_dim().min(FACE_ENUMERATION_CAP);
    if policy.m_max == 0 || policy.m_max > m_limit {
        return Err(Error::TupleSizeCap { m_max: policy.m_max, limit: m_limit });
    }

    let tables = GramTables::new(sample, with_cross);
    let n = sample.len();

    let mut total: u64 = 0;
    for k in 1..=policy.m_max {
        total = total.saturating_add(
            (n as u64).saturating_mul(multiset_count(n as u64, k as u64)),
        );
    }

    let mut certs: Vec<ViolationCertificate> = Vec::new();
    let mut max_margin = f64::NEG_INFINITY;
    let mut enumerated: u64 = 0;
    let mut sampled: u64 = 0;

    let mut evaluate = |base: usize, tuple: &[usize]| -> Result<(), Error> {
        let quad = match sense {
            GapSense::MaxAbove => lipschitz_gap(&tables, base, tuple),
            GapSense::MinBelow => monotone_gap(&tables, base, tuple),
        };
        let (margin, weights) = match sense {
            GapSense::MaxAbove => {
                let w = simplex::maximize_over_simplex(&quad)?;
                (w.value, w.t)
            }
            GapSense::MinBelow => {
                let w = simplex::minimize_over_simplex(&quad)?;
                (-w.value, w.t)
            }
        };
        if margin > max_margin {
            max_margin = margin;
        }
        if margin > tol.feas_tol {
            insert_certificate(
                &mut certs,
                ViolationCertificate {
                    base_index: base,
                    tuple_indices: tuple.to_vec(),
                    weights,
                    margin,
                },
            );
        }
        Ok(())
    };

    let probabilistic = total > policy.exhaustive_cap;
    if !probabilistic {
        for k in 1..=policy.m_max {
            for base in 0..n {
                let mut error = None;
                for_each_multiset(n, k, &mut |tuple| {
                    if error.is_none() {
                        enumerated += 1;
                        if let Err(e) = evaluate(base, tuple) {
                            error = Some(e);
                        }
                    }
                });
                if let Some(e) = error {
                    return Err(e);
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
        // Tuple sizes weighted by their share of the tuple space, so the
        // sample is uniform over that space.
        let per_k: Vec<u64> = (1..=policy.m_max)
            .map(|k| (n as u64).saturating_mul(multiset_count(n as u64, k as u64)))
            .collect();
        let total_weight: u128 = per_k.iter().map(|&c| c as u128).sum();
        for _ in 0..policy.sample_count {
            let mut ticket = rng.gen_range(0..total_weight);
            let mut k = policy.m_max;
            for (idx, &count) in per_k.iter().enumerate() {
                if ticket < count as u128 {
                    k = idx + 1;
                    break;
                }
                ticket -= count as u128;
            }
            let base = rng.gen_range(0..n);
            let tuple = sample_multiset(n, k, &mut rng);
            sampled += 1;
            evaluate(base, &tuple)?;
        }
    }

    let status = if certs.is_empty() {
        ConditionStatus::Satisfied
    } else {
        ConditionStatus::Violated(certs)
    };
    Ok(ConditionReport {
        kind,
        status,
        stats: CheckStatistics {
            tuples_enumerated: enumerated,
            tuples_sampled: sampled,
            probabilistic,
            m_checked: (1..=policy.m_max).collect(),
            max_margin,
        },
    })
}

/// Checks the averaged-Lipschitz condition
/// `‖v(x) − Σtᵢv(xᵢ)‖ ≤ ‖x − Σtᵢxᵢ‖` over all enumerated tuples and all
/// simplex weights (exactly, via face enumeration).
pub fn check_lipschitz_condition(
    sample: &VectorFieldSample,
    policy: &EnumerationPolicy,
    tol: &Tolerances,
) -> Result<ConditionReport, Error> {
    run_check(sample, policy, tol, ConditionKind::Lipschitz, GapSense::MaxAbove, false)
}

/// Checks the averaged-monotone condition
/// `⟨v(x) − Σtᵢv(xᵢ), x − Σtᵢxᵢ⟩ ≥ 0`; needs matching dimensions.
pub fn check_monotone_condition(
    sample: &VectorFieldSample,
    policy: &EnumerationPolicy,
    tol: &Tolerances,
) -> Result<ConditionReport, Error> {
    if sample.domain_dim() != sample.value_dim() {
        return Err(Error::DimensionMismatch {
            expected: sample.domain_dim(),
            found: sample.value_dim(),
        });
    }
    run_check(sample, policy, tol, ConditionKind::Monotone, GapSense::MinBelow, true)
}

/// Checks the 1-semi-bounded-strain condition
/// `⟨v(x) − Σtᵢv(xᵢ), x − Σtᵢxᵢ⟩ ≤ ‖x − Σtᵢxᵢ‖²` through the equivalence
/// with monotonicity of `x ↦ x − v(x)`; certificates carry the same indices,
/// weights, and margins as the transformed monotone check.
pub fn check_strain_condition(
    sample: &VectorFieldSample,
    policy: &EnumerationPolicy,
    tol: &Tolerances,
) -> Result<ConditionReport, Error> {
    let transformed = sample.identity_minus_values()?;
    let mut report = run_check(
        &transformed,
        policy,
        tol,
        ConditionKind::Strain,
        GapSense::MinBelow,
        true,
    )?;
    report.kind = ConditionKind::Strain;
    Ok(report)
}

/// Exhaustive pairwise 1-Lipschitz check (the tuple-size-one case), used as a
/// fast preflight by the extension engines.
pub fn check_pairwise_lipschitz(
    sample: &VectorFieldSample,
    tol: &Tolerances,
) -> Result<ConditionReport, Error> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = sample.len();
    let mut certs: Vec<ViolationCertificate> = Vec::new();
    let mut max_margin = f64::NEG_INFINITY;
    let mut enumerated = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            enumerated += 1;
            let margin = sample.value(i).distance_squared(sample.value(j))
                - sample.point(i).distance_squared(sample.point(j));
            if margin > max_margin {
                max_margin = margin;
            }
            if margin > tol.feas_tol {
                insert_certificate(
                    &mut certs,
                    ViolationCertificate {
                        base_index: i,
                        tuple_indices: vec![j],
                        weights: vec![1.0],
                        margin,
                    },
                );
            }
        }
    }
    let status = if certs.is_empty() {
        ConditionStatus::Satisfied
    } else {
        ConditionStatus::Violated(certs)
    };
    Ok(ConditionReport {
        kind: ConditionKind::PairwiseLipschitz,
        status,
        stats: CheckStatistics {
            tuples_enumerated: enumerated,
            tuples_sampled: 0,
            probabilistic: false,
            m_checked: vec![1],
            max_margin: if n > 1 { max_margin } else { f64::NEG_INFINITY },
        },
    })
}

/// Recomputes a certificate's margin from the sample by direct evaluation.
///
/// Sound certificates reproduce their recorded margin to within `1e-10`.
pub fn evaluate_certificate(
    kind: ConditionKind,
    sample: &VectorFieldSample,
    cert: &ViolationCertificate,
) -> Result<f64, Error> {
    let n = sample.len();
    if cert.base_index >= n || cert.tuple_indices.iter().any(|&i| i >= n) {
        return Err(Error::InvalidProblem(alloc::string::String::from(
            "certificate indices out of range",
        )));
    }
    if cert.weights.len() != cert.tuple_indices.len() {
        return Err(Error::DimensionMismatch {
            expected: cert.tuple_indices.len(),
            found: cert.weights.len(),
        });
    }
    let effective = match kind {
        ConditionKind::Strain => sample.identity_minus_values()?,
        _ => sample.clone(),
    };
    let x = effective.point(cert.base_index);
    let v = effective.value(cert.base_index);
    let mut x_mix = RealVector::zeros(effective.domain_dim());
    let mut v_mix = RealVector::zeros(effective.value_dim());
    for (&i, &w) in cert.tuple_indices.iter().zip(&cert.weights) {
        x_mix.add_scaled_assign(effective.point(i), w);
        v_mix.add_scaled_assign(effective.value(i), w);
    }
    let dv = v.sub(&v_mix);
    let dx = x.sub(&x_mix);
    Ok(match kind {
        ConditionKind::Lipschitz | ConditionKind::PairwiseLipschitz => {
            dv.norm_squared() - dx.norm_squared()
        }
        ConditionKind::Monotone | ConditionKind::Strain => -dv.dot(&dx),
    })
}
