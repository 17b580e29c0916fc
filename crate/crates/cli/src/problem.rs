//! The problem-file schema: parsing, path-addressed validation, and
//! conversion into the library's typed problems.
//!
//! The format is a single JSON object; the field-by-field reference lives in
//! `docs/problem-format.md`. Validation collects every violation with the
//! offending path before rejecting the document — no partial parse is ever
//! accepted.

use std::collections::BTreeSet;
use std::fmt;

use lipext_core::body::ConvexBody;
use lipext_core::checker::{EnumerationPolicy, VectorFieldSample};
use lipext_core::extension::{ExtensionMode, ExtensionProblem, OrderStrategy};
use lipext_core::geometry::{PointSet, RealVector, Tolerances};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub dim_domain: usize,
    pub dim_target: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeSpec>,
    pub points: Vec<PointRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub body: Option<BodySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<TolerancesSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<PolicySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<OrderSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probes: Option<Vec<ProbeSpec>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointRecord {
    pub id: String,
    pub x: Vec<f64>,
    /// Reference-field value; defaults to the zero vector.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<f64>>,
    /// Prescribed value; required exactly when `in_a` is set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<f64>>,
    #[serde(default)]
    pub in_a: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeSpec {
    Lipschitz,
    Monotone,
    Strain,
    /// Pairwise-only checking (tuple size one); not a valid extension mode.
    Pairwise,
}

impl fmt::Display for ModeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ModeSpec::Lipschitz => "lipschitz",
            ModeSpec::Monotone => "monotone",
            ModeSpec::Strain => "strain",
            ModeSpec::Pairwise => "pairwise",
        };
        write!(f, "{name}")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodySpec {
    Ball { center: Vec<f64>, radius: f64 },
    HalfspaceIntersection { halfspaces: Vec<HalfspaceSpec> },
    WholeSpace,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfspaceSpec {
    pub normal: Vec<f64>,
    pub offset: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancesSpec {
    pub feas_tol: f64,
    pub solve_tol: f64,
    pub max_iter: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exhaustive_cap: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_count: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderSpec {
    Input,
    NearestFirst,
    FarthestFirst,
    Seeded(u64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    pub base_ids: Vec<String>,
    pub extra_id: String,
    pub weights: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
}

/// One schema violation, addressed by a JSON-ish path.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchemaViolation {
    pub path: String,
    pub message: String,
}

impl fmt::Display for SchemaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// Parses and fully validates a problem document.
pub fn parse_problem(text: &str) -> Result<ProblemFile, Vec<SchemaViolation>> {
    let raw: ProblemFile = match serde_json::from_str(text) {
        Ok(raw) => raw,
        Err(e) => {
            return Err(vec![SchemaViolation {
                path: format!("$ (line {}, column {})", e.line(), e.column()),
                message: e.to_string(),
            }])
        }
    };
    let violations = validate(&raw);
    if violations.is_empty() {
        Ok(raw)
    } else {
        Err(violations)
    }
}

fn validate(p: &ProblemFile) -> Vec<SchemaViolation> {
    let mut out = Vec::new();
    let mut push = |path: String, message: String| out.push(SchemaViolation { path, message });

    if p.dim_domain == 0 {
        push("dim_domain".into(), "must be at least 1".into());
    }
    if p.dim_target == 0 {
        push("dim_target".into(), "must be at least 1".into());
    }
    if p.points.is_empty() {
        push("points".into(), "at least one point is required".into());
    }

    let mut seen = BTreeSet::new();
    for (i, point) in p.points.iter().enumerate() {
        let at = |field: &str| format!("points[{i}].{field}");
        if !seen.insert(point.id.clone()) {
            push(at("id"), format!("duplicate id '{}'", point.id));
        }
        if point.x.len() != p.dim_domain {
            push(
                at("x"),
                format!(
                    "point '{}' has {} coordinates, expected dim_domain = {}",
                    point.id,
                    point.x.len(),
                    p.dim_domain
                ),
            );
        }
        if point.x.iter().any(|c| !c.is_finite()) {
            push(at("x"), format!("point '{}' has non-finite coordinates", point.id));
        }
        if let Some(v) = &point.v {
            if v.len() != p.dim_target {
                push(
                    at("v"),
                    format!(
                        "point '{}' has {} value coordinates, expected dim_target = {}",
                        point.id,
                        v.len(),
                        p.dim_target
                    ),
                );
            }
            if v.iter().any(|c| !c.is_finite()) {
                push(at("v"), format!("point '{}' has non-finite values", point.id));
            }
        }
        match (&point.u, point.in_a) {
            (None, true) => push(
                at("u"),
                format!("point '{}' is in A but carries no u value", point.id),
            ),
            (Some(_), false) => push(
                at("u"),
                format!("point '{}' carries a u value but is not in A", point.id),
            ),
            (Some(u), true) => {
                if u.len() != p.dim_target {
                    push(
                        at("u"),
                        format!(
                            "point '{}' has {} u coordinates, expected dim_target = {}",
                            point.id,
                            u.len(),
                            p.dim_target
                        ),
                    );
                }
                if u.iter().any(|c| !c.is_finite()) {
                    push(at("u"), format!("point '{}' has non-finite u values", point.id));
                }
            }
            (None, false) => {}
        }
    }

    match &p.body {
        Some(BodySpec::Ball { center, radius }) => {
            if center.len() != p.dim_target {
                push(
                    "body.center".into(),
                    format!("has {} coordinates, expected dim_target = {}", center.len(), p.dim_target),
                );
            }
            if radius.is_nan() || *radius < 0.0 {
                push("body.radius".into(), format!("must be nonnegative, got {radius}"));
            }
        }
        Some(BodySpec::HalfspaceIntersection { halfspaces }) => {
            if halfspaces.is_empty() {
                push("body.halfspaces".into(), "at least one half-space is required".into());
            }
            for (i, h) in halfspaces.iter().enumerate() {
                if h.normal.len() != p.dim_target {
                    push(
                        format!("body.halfspaces[{i}].normal"),
                        format!(
                            "has {} coordinates, expected dim_target = {}",
                            h.normal.len(),
                            p.dim_target
                        ),
                    );
                }
                if h.normal.iter().map(|c| c * c).sum::<f64>() <= 0.0 {
                    push(format!("body.halfspaces[{i}].normal"), "must be nonzero".into());
                }
            }
        }
        Some(BodySpec::WholeSpace) | None => {}
    }

    if let Some(t) = &p.tolerances {
        if !(t.solve_tol > 0.0 && t.feas_tol >= t.solve_tol && t.max_iter >= 1) {
            push(
                "tolerances".into(),
                "must satisfy feas_tol >= solve_tol > 0 and max_iter >= 1".into(),
            );
        }
    }
    if let Some(policy) = &p.policy {
        if policy.m_max == Some(0) {
            push("policy.m_max".into(), "must be at least 1".into());
        }
    }

    if let Some(probes) = &p.probes {
        let ids: BTreeSet<&str> = p.points.iter().map(|pt| pt.id.as_str()).collect();
        for (i, probe) in probes.iter().enumerate() {
            let at = |field: &str| format!("probes[{i}].{field}");
            if probe.base_ids.is_empty() || probe.base_ids.len() > 3 {
                push(at("base_ids"), "must name between 1 and 3 points".into());
            }
            for id in &probe.base_ids {
                if !ids.contains(id.as_str()) {
                    push(at("base_ids"), format!("unknown point id '{id}'"));
                }
            }
            if !ids.contains(probe.extra_id.as_str()) {
                push(at("extra_id"), format!("unknown point id '{}'", probe.extra_id));
            }
            if probe.weights.len() != probe.base_ids.len() {
                push(
                    at("weights"),
                    format!(
                        "has {} entries, expected {}",
                        probe.weights.len(),
                        probe.base_ids.len()
                    ),
                );
            }
            let sum: f64 = probe.weights.iter().sum();
            if probe.weights.iter().any(|&w| w < -1e-12) || (sum - 1.0).abs() > 1e-9 {
                push(at("weights"), "must be nonnegative and sum to one".into());
            }
            if let Some(c) = probe.c {
                if c.is_nan() || c <= 0.0 {
                    push(at("c"), format!("must be positive, got {c}"));
                }
            }
        }
    }

    out
}

impl ProblemFile {
    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.points.iter().position(|p| p.id == id)
    }

    pub fn tolerances(&self) -> Result<Tolerances, lipext_core::Error> {
        match &self.tolerances {
            Some(t) => Tolerances::new(t.feas_tol, t.solve_tol, t.max_iter),
            None => Ok(Tolerances::default()),
        }
    }

    pub fn to_sample(&self) -> Result<VectorFieldSample, lipext_core::Error> {
        let domain = PointSet::new(
            self.points
                .iter()
                .map(|p| RealVector::from_slice(&p.x))
                .collect::<Result<_, _>>()?,
        )?;
        let values = PointSet::new(
            self.points
                .iter()
                .map(|p| match &p.v {
                    Some(v) => RealVector::from_slice(v),
                    None => Ok(RealVector::zeros(self.dim_target)),
                })
                .collect::<Result<_, _>>()?,
        )?;
        VectorFieldSample::new(domain, values)
    }

    pub fn policy(&self) -> EnumerationPolicy {
        let default_m_max = self.dim_target.clamp(1, 3);
        let base = EnumerationPolicy::default();
        match &self.policy {
            None => EnumerationPolicy { m_max: default_m_max, ..base },
            Some(p) => EnumerationPolicy {
                m_max: p.m_max.unwrap_or(default_m_max),
                exhaustive_cap: p.exhaustive_cap.unwrap_or(base.exhaustive_cap),
                sample_count: p.sample_count.unwrap_or(base.sample_count),
                seed: p.seed.unwrap_or(base.seed),
            },
        }
    }

    pub fn order_strategy(&self) -> OrderStrategy {
        match self.order {
            None => OrderStrategy::NearestToProcessedFirst,
            Some(OrderSpec::Input) => OrderStrategy::InputOrder,
            Some(OrderSpec::NearestFirst) => OrderStrategy::NearestToProcessedFirst,
            Some(OrderSpec::FarthestFirst) => OrderStrategy::FarthestToProcessedFirst,
            Some(OrderSpec::Seeded(seed)) => OrderStrategy::Seeded(seed),
        }
    }

    pub fn body(&self, delta_override: Option<f64>) -> Result<Option<ConvexBody>, lipext_core::Error> {
        if let Some(delta) = delta_override {
            return Ok(Some(ConvexBody::ball(RealVector::zeros(self.dim_target), delta)?));
        }
        match &self.body {
            None => Ok(None),
            Some(BodySpec::Ball { center, radius }) => {
                Ok(Some(ConvexBody::ball(RealVector::from_slice(center)?, *radius)?))
            }
            Some(BodySpec::HalfspaceIntersection { halfspaces }) => {
                let hs = halfspaces
                    .iter()
                    .map(|h| Ok((RealVector::from_slice(&h.normal)?, h.offset)))
                    .collect::<Result<Vec<_>, lipext_core::Error>>()?;
                Ok(Some(ConvexBody::halfspace_intersection(hs)?))
            }
            Some(BodySpec::WholeSpace) => Ok(Some(ConvexBody::whole_space(self.dim_target))),
        }
    }

    /// Builds the typed extension problem. When no body is given (and no
    /// `--delta` override), the budget defaults to the centered ball of
    /// radius `sup_A ‖u − v‖`, computed exactly from the data.
    pub fn to_extension_problem(
        &self,
        mode: ExtensionMode,
        delta_override: Option<f64>,
    ) -> Result<ExtensionProblem, lipext_core::Error> {
        let sample = self.to_sample()?;
        let a_mask: Vec<bool> = self.points.iter().map(|p| p.in_a).collect();
        let u_partial: Vec<Option<RealVector>> = self
            .points
            .iter()
            .map(|p| p.u.as_ref().map(|u| RealVector::from_slice(u)).transpose())
            .collect::<Result<_, _>>()?;
        let body = match self.body(delta_override)? {
            Some(body) => body,
            None => {
                let mut sup = 0.0_f64;
                for (i, u) in u_partial.iter().enumerate() {
                    if let Some(u) = u {
                        sup = sup.max(u.distance(sample.value(i)));
                    }
                }
                ConvexBody::ball(RealVector::zeros(self.dim_target), sup)?
            }
        };
        ExtensionProblem::new(sample, a_mask, u_partial, body, mode)
    }
}
