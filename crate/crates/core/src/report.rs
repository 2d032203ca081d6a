//! Whole-object analysis reports and the certificates backing them.

use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::collapse::{welker_pipeline, CollapseEngine, CollapseLevel};
use crate::complex::{parse_scx, SimplicialComplex};
use crate::error::{Error, Result};
use crate::nerve::nerve_tower_with;
use crate::poset::{is_contractible, order_complex, parse_fsp, poset_core, PosetEngine};
use crate::search::Answer;
use crate::strong::{core, is_minimal, same_strong_homotopy_type};
use crate::symmetry::{
    automorphism_group_order, automorphisms_with, conjecture_audit, domination_classes, factor_as_multiple,
    invariant_simplex, is_vertex_homogeneous, ConjectureAudit, DominationClasses,
};
use crate::trace::MoveTrace;
use crate::workbench::{replay_trace, Object};

pub const SCHEMA_VERSION: u32 = 1;

/// Groups larger than this are not materialized when looking for an
/// invariant simplex.
const MAX_MATERIALIZED_GROUP: u128 = 50_000;

/// Reads a `.scx` complex or a `.fsp` poset, choosing by extension.
pub fn parse_object(path: &str, text: &str) -> Result<Object> {
    match Path::new(path).extension().and_then(|e| e.to_str()) {
        Some("scx") => Ok(Object::Complex(parse_scx(text)?)),
        Some("fsp") => Ok(Object::Poset(parse_fsp(text)?)),
        _ => Err(Error::InvalidArgument(format!("{path}: expected a .scx or .fsp file"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObjectId {
    pub path: String,
    pub sha256: String,
}

impl ObjectId {
    pub fn new(path: &str, content: &[u8]) -> Self {
        ObjectId { path: path.to_string(), sha256: hex::encode(Sha256::digest(content)) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CoreSummary {
    pub vertices: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub facets: Option<usize>,
}

/// Findings that only make sense for finite spaces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PosetFindings {
    /// Collapses to a point by removing weak points.
    pub weak_collapsible: Answer,
    pub non_evasive: Answer,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetryFindings {
    pub domination: DominationClasses,
    /// `(core vertices, n)` with `K ≅ n·core`, for vertex-homogeneous input.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiple_of_core: Option<(usize, u32)>,
    /// Vertices of the smallest simplex fixed by all of `Aut(K)`; `null`
    /// when none is fixed or the group was too large to list.
    pub invariant_simplex: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit: Option<ConjectureAudit>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub object_id: ObjectId,
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_vertices: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_elements: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_facets: Option<usize>,
    /// No dominated vertices (no beat points for a poset).
    pub minimal: bool,
    pub core: CoreSummary,
    /// Strong collapsible (contractible for a poset).
    pub strong_collapsible: bool,
    /// For a poset the tower, level, collapsibility and non-evasiveness
    /// refer to its order complex.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hierarchy_of: Option<&'static str>,
    /// `(vertices, facets)` of each entry.
    pub nerve_tower: Vec<(usize, usize)>,
    pub collapse_level: CollapseLevel,
    pub collapsible: Answer,
    pub non_evasive: Answer,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex_homogeneous: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aut_order: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poset: Option<PosetFindings>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<SymmetryFindings>,
    pub traces: Vec<String>,
    /// Some search ran out of budget; the affected fields say "unknown".
    pub budget_exhausted: bool,
}

impl AnalysisReport {
    /// Checks that the verdicts agree with the hierarchy
    /// strong collapsible ⇒ level 0, finite level ⇒ non-evasive ⇒ collapsible.
    pub fn check_consistency(&self) -> std::result::Result<(), String> {
        if self.strong_collapsible && !matches!(self.collapse_level, CollapseLevel::Level(0) | CollapseLevel::Unknown) {
            return Err(format!("strong collapsible but collapse level {}", self.collapse_level));
        }
        if self.collapse_level.level().is_some() && self.non_evasive == Answer::No {
            return Err(format!("collapse level {} but evasive", self.collapse_level));
        }
        if self.non_evasive.is_yes() && self.collapsible == Answer::No {
            return Err("non-evasive but not collapsible".into());
        }
        Ok(())
    }
}

/// A reduction claim: replaying `trace` from `start` ends at `end`.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub name: &'static str,
    pub start: Object,
    pub trace: MoveTrace,
    pub end: Object,
}

#[derive(Clone, Debug)]
pub struct Analysis {
    pub report: AnalysisReport,
    pub certificates: Vec<Certificate>,
}

#[derive(Clone, Copy, Debug)]
pub struct AnalysisOptions {
    /// Adds the symmetry findings and the subdivision certificate.
    pub deep: bool,
    pub budget: u64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions { deep: false, budget: crate::search::DEFAULT_BUDGET }
    }
}

/// A certificate whose end is wherever the trace leads; a trace that does
/// not replay is a bug in the search that produced it.
fn certificate(name: &'static str, start: Object, trace: MoveTrace) -> Result<Certificate> {
    let end = replay_trace(&start, &trace).map_err(|v| Error::InvalidTrace {
        index: v.failed_at.unwrap_or(0),
        reason: v.reason.unwrap_or_default(),
    })?;
    Ok(Certificate { name, start, trace, end })
}

/// Turns a budget failure into `None` and remembers it.
fn soft<T>(r: Result<T>, exhausted: &mut bool) -> Result<Option<T>> {
    match r {
        Ok(t) => Ok(Some(t)),
        Err(Error::SearchBudgetExceeded { .. }) => {
            *exhausted = true;
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

struct Hierarchy {
    nerve_tower: Vec<(usize, usize)>,
    collapse_level: CollapseLevel,
    collapsible: Answer,
    non_evasive: Answer,
}

fn hierarchy(
    k: &SimplicialComplex,
    opts: &AnalysisOptions,
    exhausted: &mut bool,
    certificates: &mut Vec<Certificate>,
) -> Result<Hierarchy> {
    let tower = soft(nerve_tower_with(k, 2 * k.n_vertices() + 2, opts.budget), exhausted)?;
    let nerve_tower = tower.unwrap_or_default().iter().map(|c| (c.n_vertices(), c.n_facets())).collect();
    let mut engine = CollapseEngine::new(opts.budget);
    let collapse_level = engine.collapse_level(k)?;
    if let Some(n) = collapse_level.level() {
        if n > 0 {
            if let (_, Some(trace)) = engine.n_collapsible(k, n)? {
                certificates.push(certificate("level", Object::Complex(k.clone()), trace)?);
            }
        }
    }
    let (collapsible, trace) = engine.is_collapsible(k)?;
    let non_evasive = engine.non_evasive(k)?;
    if let Some(trace) = trace {
        if opts.deep {
            let cert = welker_pipeline(k, &trace)?;
            certificates.push(Certificate {
                name: "subdivision",
                start: Object::Complex(cert.subdivision),
                trace: cert.trace,
                end: Object::Complex(cert.target),
            });
        }
        certificates.push(certificate("collapse", Object::Complex(k.clone()), trace)?);
    }
    *exhausted |= collapse_level == CollapseLevel::Unknown || collapsible == Answer::Unknown || non_evasive == Answer::Unknown;
    Ok(Hierarchy { nerve_tower, collapse_level, collapsible, non_evasive })
}

fn symmetry_findings(k: &SimplicialComplex, aut_order: Option<u128>, opts: &AnalysisOptions) -> Result<SymmetryFindings> {
    let vh = is_vertex_homogeneous(k)?;
    let multiple_of_core = if vh {
        factor_as_multiple(k)?.map(|(c, n)| (c.n_vertices(), n))
    } else {
        None
    };
    let invariant = match aut_order {
        Some(o) if o <= MAX_MATERIALIZED_GROUP => {
            let g = automorphisms_with(k, opts.budget)?;
            match invariant_simplex(k, &g) {
                Ok(s) => Some(s.vertices().iter().map(|&v| k.label(v)).collect()),
                Err(Error::NoInvariantSimplex) => None,
                Err(e) => return Err(e),
            }
        }
        _ => None,
    };
    let audit = if vh { Some(conjecture_audit(k, &mut CollapseEngine::new(opts.budget))?) } else { None };
    Ok(SymmetryFindings { domination: domination_classes(k), multiple_of_core, invariant_simplex: invariant, audit })
}

pub fn analyze_complex(k: &SimplicialComplex, id: ObjectId, opts: &AnalysisOptions) -> Result<Analysis> {
    let mut exhausted = false;
    let mut certificates = Vec::new();
    let (c, core_trace) = core(k);
    certificates.push(Certificate {
        name: "core",
        start: Object::Complex(k.clone()),
        trace: core_trace,
        end: Object::Complex(c.clone()),
    });
    let h = hierarchy(k, opts, &mut exhausted, &mut certificates)?;
    let aut_order = soft(automorphism_group_order(k), &mut exhausted)?;
    let vertex_homogeneous = soft(is_vertex_homogeneous(k), &mut exhausted)?;
    let symmetry = if opts.deep { soft(symmetry_findings(k, aut_order, opts), &mut exhausted)? } else { None };
    let report = AnalysisReport {
        schema: SCHEMA_VERSION,
        object_id: id,
        kind: "complex",
        n_vertices: Some(k.n_vertices()),
        n_elements: None,
        n_facets: Some(k.n_facets()),
        minimal: is_minimal(k),
        core: CoreSummary { vertices: c.n_vertices(), facets: Some(c.n_facets()) },
        strong_collapsible: c.is_point(),
        hierarchy_of: None,
        nerve_tower: h.nerve_tower,
        collapse_level: h.collapse_level,
        collapsible: h.collapsible,
        non_evasive: h.non_evasive,
        vertex_homogeneous,
        aut_order,
        poset: None,
        symmetry,
        traces: Vec::new(),
        budget_exhausted: exhausted,
    };
    Ok(Analysis { report, certificates })
}

pub fn analyze_poset(x: &crate::poset::FinitePoset, id: ObjectId, opts: &AnalysisOptions) -> Result<Analysis> {
    let mut exhausted = false;
    let mut certificates = Vec::new();
    let (c, beats) = poset_core(x);
    certificates.push(Certificate {
        name: "core",
        start: Object::Poset(x.clone()),
        trace: beats,
        end: Object::Poset(c.clone()),
    });
    let kx = order_complex(x);
    let mut sub = Vec::new();
    let h = hierarchy(&kx, opts, &mut exhausted, &mut sub)?;
    certificates.extend(sub.into_iter().filter(|c| c.name != "core").map(|mut c| {
        c.name = match c.name {
            "level" => "order-complex-level",
            "collapse" => "order-complex-collapse",
            _ => "order-complex-subdivision",
        };
        c
    }));
    let mut engine = PosetEngine::new(opts.budget);
    let weak = soft(engine.collapses_to_point(x), &mut exhausted)?;
    let weak_collapsible = match &weak {
        None => Answer::Unknown,
        Some(t) => Answer::from_bool(t.is_some()),
    };
    if let Some(Some(trace)) = weak {
        certificates.push(certificate("weak", Object::Poset(x.clone()), trace)?);
    }
    let poset_ne = soft(engine.non_evasive(x), &mut exhausted)?.map_or(Answer::Unknown, Answer::from_bool);
    let report = AnalysisReport {
        schema: SCHEMA_VERSION,
        object_id: id,
        kind: "poset",
        n_vertices: None,
        n_elements: Some(x.n_elements()),
        n_facets: None,
        minimal: x.is_minimal(),
        core: CoreSummary { vertices: c.n_elements(), facets: None },
        strong_collapsible: is_contractible(x),
        hierarchy_of: Some("order-complex"),
        nerve_tower: h.nerve_tower,
        collapse_level: h.collapse_level,
        collapsible: h.collapsible,
        non_evasive: h.non_evasive,
        vertex_homogeneous: None,
        aut_order: None,
        poset: Some(PosetFindings { weak_collapsible, non_evasive: poset_ne }),
        symmetry: None,
        traces: Vec::new(),
        budget_exhausted: exhausted,
    };
    Ok(Analysis { report, certificates })
}

pub fn analyze(object: &Object, id: ObjectId, opts: &AnalysisOptions) -> Result<Analysis> {
    match object {
        Object::Complex(k) => analyze_complex(k, id, opts),
        Object::Poset(x) => analyze_poset(x, id, opts),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub same_strong_homotopy_type: bool,
    pub core_a: CoreSummary,
    pub core_b: CoreSummary,
}

pub fn compare(a: &SimplicialComplex, b: &SimplicialComplex) -> Result<Comparison> {
    let summary = |k: &SimplicialComplex| {
        let c = core(k).0;
        CoreSummary { vertices: c.n_vertices(), facets: Some(c.n_facets()) }
    };
    Ok(Comparison { same_strong_homotopy_type: same_strong_homotopy_type(a, b)?, core_a: summary(a), core_b: summary(b) })
}
