//! Per-expression checks of the two properties: the induced chart of the
//! 1-chart interpretation maps onto the chart interpretation by a functional
//! bisimulation (P1), and the labeled 1-chart interpretation is a
//! LLEE-witness (P2).

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bisim::{check_functional_bisim, is_isomorphism};
use crate::charts::{induced_of, reachable_with_map, Chart, VertexId};
use crate::error::{Error, Result};
use crate::lee::{validate_llee, validate_llee_alt};
use crate::semantics::{chart_interpretation, labeled_interpretation, onechart_interpretation, DEFAULT_VERTEX_CAP};
use crate::syntax::{StackedExpr, StarExpr};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Property {
    P1,
    P2,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::P1 => f.write_str("P1"),
            Property::P2 => f.write_str("P2"),
        }
    }
}

/// Sizes of the charts built while checking one expression.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Statistics {
    pub onechart_vertices: usize,
    pub one_transitions: usize,
    /// Entry transitions of the labeled 1-chart; only counted for P2.
    pub entries: Option<usize>,
    /// Reachable vertices of the induced chart; only counted for P1.
    pub induced_vertices: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    /// An induced vertex projects to no vertex of the chart interpretation.
    MissingProjection,
    NotBisimulation,
    AmbiguousMarking,
    InvalidWitness,
    /// The two witness validators disagree.
    ValidatorDisagreement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub kind: FailureKind,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub expression: String,
    pub property: Property,
    pub passed: bool,
    pub statistics: Statistics,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<Failure>,
}

impl VerifyReport {
    fn new(e: &StarExpr, property: Property, statistics: Statistics, failure: Option<Failure>) -> Self {
        VerifyReport { expression: e.to_string(), property, passed: failure.is_none(), statistics, failure }
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "pass" } else { "FAIL" };
        write!(f, "{}: {verdict}  {}", self.property, self.expression)?;
        if let Some(failure) = &self.failure {
            write!(f, "  ({:?}: {})", failure.kind, failure.detail)?;
        }
        Ok(())
    }
}

/// The induced chart of `C1(e)` restricted to its reachable part, the chart
/// `C(e)`, and the map sending each induced vertex to the vertex of `C(e)`
/// carrying its projection.
#[derive(Debug, Clone)]
pub struct Projection {
    pub induced: Chart,
    pub chart: Chart,
    pub map: Vec<Option<VertexId>>,
    /// First induced vertex whose projection is not a vertex of `C(e)`.
    pub missing: Option<String>,
    pub onechart_vertices: usize,
    pub one_transitions: usize,
}

pub fn projection(e: &StarExpr, cap: usize) -> Result<Projection> {
    let one = onechart_interpretation(&StackedExpr::Plain(e.clone()), cap)?;
    let plain = chart_interpretation(e, cap)?;
    let lookup: HashMap<&StarExpr, VertexId> = plain.exprs.iter().enumerate().map(|(v, x)| (x, v)).collect();
    let (induced, old_to_new) = reachable_with_map(&induced_of(&one.chart));
    let mut map = vec![None; induced.num_vertices()];
    let mut missing = None;
    for (old, new) in old_to_new.iter().enumerate() {
        let Some(new) = *new else { continue };
        let image = one.exprs[old].project();
        map[new] = lookup.get(&image).copied();
        if map[new].is_none() && missing.is_none() {
            missing = Some(format!("{} projects to {image}, which is not a vertex of the chart", one.exprs[old]));
        }
    }
    Ok(Projection {
        onechart_vertices: one.chart.num_vertices(),
        one_transitions: one.chart.num_empty_steps(),
        induced,
        chart: plain.chart,
        map,
        missing,
    })
}

pub fn verify_p1(e: &StarExpr) -> Result<VerifyReport> {
    verify_p1_with_cap(e, DEFAULT_VERTEX_CAP)
}

pub fn verify_p1_with_cap(e: &StarExpr, cap: usize) -> Result<VerifyReport> {
    let p = projection(e, cap)?;
    let statistics = Statistics {
        onechart_vertices: p.onechart_vertices,
        one_transitions: p.one_transitions,
        entries: None,
        induced_vertices: Some(p.induced.num_vertices()),
    };
    let failure = match &p.missing {
        Some(detail) => Some(Failure { kind: FailureKind::MissingProjection, detail: detail.clone() }),
        None => check_functional_bisim(&p.induced, &p.chart, &p.map)
            .err()
            .map(|v| Failure { kind: FailureKind::NotBisimulation, detail: v.to_string() }),
    };
    Ok(VerifyReport::new(e, Property::P1, statistics, failure))
}

/// True iff the projection map of `e` is a bijection and an isomorphism.
pub fn projection_is_isomorphism(e: &StarExpr) -> Result<bool> {
    let p = projection(e, DEFAULT_VERTEX_CAP)?;
    Ok(is_isomorphism(&p.induced, &p.chart, &p.map))
}

pub fn verify_p2(e: &StarExpr) -> Result<VerifyReport> {
    verify_p2_with_cap(e, DEFAULT_VERTEX_CAP)
}

pub fn verify_p2_with_cap(e: &StarExpr, cap: usize) -> Result<VerifyReport> {
    let labeling = match labeled_interpretation(e, cap) {
        Ok((labeling, _)) => labeling,
        Err(err @ Error::AmbiguousMarking { .. }) => {
            let failure = Failure { kind: FailureKind::AmbiguousMarking, detail: err.to_string() };
            return Ok(VerifyReport::new(e, Property::P2, Statistics::default(), Some(failure)));
        }
        Err(err) => return Err(err),
    };
    let chart = labeling.chart();
    let statistics = Statistics {
        onechart_vertices: chart.num_vertices(),
        one_transitions: chart.num_empty_steps(),
        entries: Some(labeling.num_entries()),
        induced_vertices: None,
    };
    let primary = validate_llee(&labeling);
    let alternative = validate_llee_alt(&labeling);
    let failure = if primary.valid != alternative.valid {
        Some(Failure {
            kind: FailureKind::ValidatorDisagreement,
            detail: format!("validate_llee: {}, validate_llee_alt: {}", primary.valid, alternative.valid),
        })
    } else if !primary.valid {
        let detail = primary
            .violations
            .iter()
            .map(|v| format!("{:?}: {}", v.condition, v.detail))
            .collect::<Vec<_>>()
            .join("; ");
        Some(Failure { kind: FailureKind::InvalidWitness, detail })
    } else {
        None
    };
    Ok(VerifyReport::new(e, Property::P2, statistics, failure))
}

pub fn verify(e: &StarExpr, property: Property) -> Result<VerifyReport> {
    match property {
        Property::P1 => verify_p1(e),
        Property::P2 => verify_p2(e),
    }
}
