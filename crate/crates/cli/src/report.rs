//! The machine-readable report document and its human-readable rendering.
//!
//! Reports are self-contained: they embed the parsed problem and the full
//! effective configuration, so any run can be reproduced (and re-verified)
//! from its report alone.

use lipext_core::checker::{ConditionReport, ConditionStatus};
use lipext_core::extension::{ExtensionResult, VerificationReport};
use lipext_core::feasibility::FeasibilityOutcome;
use lipext_core::geometry::Tolerances;
use lipext_core::necessity::{NecessityReport, NecessityVerdict, SquareDemoReport};
use serde::{Deserialize, Serialize};

use crate::problem::{OrderSpec, PolicySpec, ProblemFile};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl Default for ToolInfo {
    fn default() -> Self {
        ToolInfo {
            name: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// Echo of every effective setting of a run.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct EffectiveConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub policy: Option<PolicySpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<OrderSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProbeOutcome {
    pub base_ids: Vec<String>,
    pub extra_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<NecessityReport>,
    /// Probe-level failure (hypothesis or geometry), recorded instead of
    /// aborting the sweep.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Check {
        report: ConditionReport,
    },
    Extension {
        result: ExtensionResult,
        verification: VerificationReport,
    },
    ExtensionFailed {
        failed_index: usize,
        feasibility: FeasibilityOutcome,
        partial: Vec<Option<Vec<f64>>>,
        hint: String,
    },
    Necessity {
        probes: Vec<ProbeOutcome>,
    },
    SquareDemo {
        report: SquareDemoReport,
    },
    Verification {
        report: VerificationReport,
        /// Whether the recorded residual bookkeeping was reproduced within
        /// `1e-10` (absent when no recorded values were available).
        #[serde(skip_serializing_if = "Option::is_none")]
        reproduced_recorded_residuals: Option<bool>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub tool: ToolInfo,
    pub command: String,
    pub config: EffectiveConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub problem: Option<ProblemFile>,
    pub outcome: Outcome,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    /// Human-readable rendering; the JSON document is the canonical form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let push = |out: &mut String, line: String| {
            out.push_str(&line);
            out.push('\n');
        };
        push(&mut out, format!("{} {} — {}", self.tool.name, self.tool.version, self.command));
        match &self.outcome {
            Outcome::Check { report } => {
                push(&mut out, format!("condition: {:?}", report.kind));
                push(
                    &mut out,
                    format!(
                        "tuples: {} enumerated, {} sampled{}",
                        report.stats.tuples_enumerated,
                        report.stats.tuples_sampled,
                        if report.stats.probabilistic { " (probabilistic)" } else { "" }
                    ),
                );
                push(&mut out, format!("max margin: {:.6e}", report.stats.max_margin));
                match &report.status {
                    ConditionStatus::Satisfied => push(&mut out, "status: SATISFIED".into()),
                    ConditionStatus::Violated(certs) => {
                        push(&mut out, format!("status: VIOLATED ({} certificates)", certs.len()));
                        for cert in certs.iter().take(5) {
                            push(
                                &mut out,
                                format!(
                                    "  base {} tuple {:?} weights {:?} margin {:.6e}",
                                    cert.base_index, cert.tuple_indices, cert.weights, cert.margin
                                ),
                            );
                        }
                    }
                }
            }
            Outcome::Extension { result, verification } => {
                push(&mut out, format!("points extended: {}", result.per_point_log.len()));
                push(
                    &mut out,
                    format!(
                        "sup distance on A: {:.12e}; on X: {:.12e}",
                        result.sup_dist_a, result.sup_dist_x
                    ),
                );
                push(
                    &mut out,
                    format!(
                        "verification: {} (max pair excess {:.3e}, max membership distance {:.3e})",
                        if verification.passed { "PASSED" } else { "FAILED" },
                        verification.max_pair_excess,
                        verification.max_membership_distance
                    ),
                );
            }
            Outcome::ExtensionFailed { failed_index, feasibility, hint, .. } => {
                push(
                    &mut out,
                    format!(
                        "extension FAILED at point {} (status {:?}, residual {:.6e})",
                        failed_index, feasibility.status, feasibility.residual
                    ),
                );
                push(&mut out, format!("hint: {hint}"));
            }
            Outcome::Necessity { probes } => {
                for probe in probes {
                    match (&probe.report, &probe.error) {
                        (Some(report), _) => push(
                            &mut out,
                            format!(
                                "probe base {:?} extra '{}': {:?} (gap {:.6e}, delta {:.6e})",
                                probe.base_ids,
                                probe.extra_id,
                                report.verdict,
                                report.gap,
                                report.delta_used
                            ),
                        ),
                        (None, Some(error)) => push(
                            &mut out,
                            format!(
                                "probe base {:?} extra '{}': ERROR ({error})",
                                probe.base_ids, probe.extra_id
                            ),
                        ),
                        (None, None) => {}
                    }
                }
                let confirmed = probes
                    .iter()
                    .filter(|p| {
                        p.report.as_ref().map(|r| r.verdict)
                            == Some(NecessityVerdict::ViolationConfirmed)
                    })
                    .count();
                push(&mut out, format!("confirmed violations: {confirmed}/{}", probes.len()));
            }
            Outcome::SquareDemo { report } => {
                push(
                    &mut out,
                    format!(
                        "averaged-Lipschitz check (m_max 3): {}",
                        if report.lipschitz.is_satisfied() { "SATISFIED" } else { "VIOLATED" }
                    ),
                );
                push(
                    &mut out,
                    format!("min vertex-to-opposite-hull distance: {:.15}", report.min_hull_distance),
                );
                push(&mut out, format!("affinity defect: {:.15}", report.affinity_defect));
                push(
                    &mut out,
                    format!("forbidden budget threshold: {:.15}", report.forbidden_threshold),
                );
                push(
                    &mut out,
                    format!(
                        "parallelogram identity residual: {:.3e}",
                        report.parallelogram_residual
                    ),
                );
                for o in &report.obstructions {
                    push(
                        &mut out,
                        format!(
                            "C = {}: chain lower bound {:.6} vs upper bound {:.6} — {}; search best \
                             deviation {:.6} ({} placements, within budget: {})",
                            o.c,
                            o.lower_bound,
                            o.upper_bound,
                            if o.chain_forbids { "FORBIDDEN" } else { "not forbidden" },
                            o.search.best_deviation,
                            o.search.placements_tried,
                            o.search.found_within_budget
                        ),
                    );
                }
            }
            Outcome::Verification { report, reproduced_recorded_residuals } => {
                push(
                    &mut out,
                    format!(
                        "verification: {} ({} pair violations, {} membership violations)",
                        if report.passed { "PASSED" } else { "FAILED" },
                        report.pair_violations.len(),
                        report.membership_violations.len()
                    ),
                );
                push(
                    &mut out,
                    format!(
                        "sup distance on A: {:.12e}; on X: {:.12e}",
                        report.sup_dist_a, report.sup_dist_x
                    ),
                );
                if let Some(matched) = reproduced_recorded_residuals {
                    push(
                        &mut out,
                        format!(
                            "recorded residuals reproduced within 1e-10: {}",
                            if *matched { "yes" } else { "NO" }
                        ),
                    );
                }
            }
        }
        out
    }
}
