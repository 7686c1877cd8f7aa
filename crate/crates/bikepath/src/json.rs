//! JSON document formats: `bikepath-v1` path documents, correspondence
//! documents, monodromy reports, rigidity summaries, and per-trial records.
//!
//! Rational scalars serialize as canonical strings (`"p/q"`, or `"p"` when
//! the denominator is 1); float scalars serialize as JSON numbers with
//! shortest round-trip formatting. Round-trips are bit-exact in rational
//! mode.

use serde::{Deserialize, Serialize};

use crate::darboux::{ClosureVectors, Correspondence, DarbouxParams, LinkageDecomposition};
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::mobius::MobiusMap;
use crate::path::PeriodicPath;
use crate::rigidity::{Classification, SearchSummary, SolveReport};
use crate::scalar::{Rational, Scalar, ScalarMode};

pub const PATH_FORMAT: &str = "bikepath-v1";

/// One serialized scalar: a string in rational mode, a number in float mode.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum NumRepr {
    Text(String),
    Number(f64),
}

impl NumRepr {
    pub fn of<S: Scalar>(value: &S) -> NumRepr {
        match S::mode() {
            ScalarMode::Rational => NumRepr::Text(value.format_exact()),
            ScalarMode::Float => NumRepr::Number(value.to_f64()),
        }
    }

    pub fn decode<S: Scalar>(&self) -> Result<S> {
        match (S::mode(), self) {
            (ScalarMode::Rational, NumRepr::Text(s)) => S::parse(s),
            // S is f64 here; go through shortest-decimal text to stay
            // generic (the round trip is exact).
            (ScalarMode::Float, NumRepr::Number(v)) => S::parse(&format!("{v}")),
            (ScalarMode::Rational, NumRepr::Number(_)) => Err(Error::Parse(
                "rational document contains a bare number; expected a \"p/q\" string".into(),
            )),
            (ScalarMode::Float, NumRepr::Text(s)) => S::parse(s),
        }
    }
}

/// Optional record of how a path was generated.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Provenance {
    pub generator: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<NumRepr>,
}

/// The `bikepath-v1` path document.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PathDoc {
    pub format: String,
    pub p: usize,
    pub m: i64,
    pub scalar: String,
    pub vertices: Vec<[NumRepr; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl PathDoc {
    pub fn mode(&self) -> Result<ScalarMode> {
        match self.scalar.as_str() {
            "rational" => Ok(ScalarMode::Rational),
            "float" => Ok(ScalarMode::Float),
            other => Err(Error::Parse(format!("unknown scalar mode {other:?}"))),
        }
    }

    pub fn to_path<S: Scalar>(&self) -> Result<PeriodicPath<S>> {
        if self.format != PATH_FORMAT {
            return Err(Error::Parse(format!(
                "unknown document format {:?}, expected {PATH_FORMAT:?}",
                self.format
            )));
        }
        if self.mode()? != S::mode() {
            return Err(Error::Parse(format!(
                "document is in {} mode, requested {} mode",
                self.scalar,
                S::mode()
            )));
        }
        if self.vertices.len() != self.p {
            return Err(Error::Parse(format!(
                "document declares p = {} but has {} vertices",
                self.p,
                self.vertices.len()
            )));
        }
        let base = self
            .vertices
            .iter()
            .map(|[x, y]| Ok(Point::new(x.decode::<S>()?, y.decode::<S>()?)))
            .collect::<Result<Vec<_>>>()?;
        PeriodicPath::new(base, self.m)
    }
}

/// Encodes a path into a document, with optional diagonal step and
/// provenance.
pub fn path_to_doc<S: Scalar>(
    path: &PeriodicPath<S>,
    k: Option<i64>,
    provenance: Option<Provenance>,
) -> PathDoc {
    PathDoc {
        format: PATH_FORMAT.into(),
        p: path.period(),
        m: path.shift(),
        scalar: S::mode().to_string(),
        vertices: path
            .base_vertices()
            .iter()
            .map(|pt| [NumRepr::of(&pt.x), NumRepr::of(&pt.y)])
            .collect(),
        k,
        provenance,
    }
}

/// A path document of either scalar mode, decoded.
#[derive(Clone, Debug)]
pub enum TypedPath {
    Rational(PeriodicPath<Rational>),
    Float(PeriodicPath<f64>),
}

/// Parses a document into whichever mode it declares.
pub fn doc_to_typed_path(doc: &PathDoc) -> Result<TypedPath> {
    match doc.mode()? {
        ScalarMode::Rational => Ok(TypedPath::Rational(doc.to_path::<Rational>()?)),
        ScalarMode::Float => Ok(TypedPath::Float(doc.to_path::<f64>()?)),
    }
}

/// Serialized correspondence: two path documents plus the squared leg
/// length.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorrespondenceDoc {
    pub source: PathDoc,
    pub target: PathDoc,
    pub ell2: NumRepr,
}

pub fn correspondence_to_doc<S: Scalar>(corr: &Correspondence<S>) -> CorrespondenceDoc {
    CorrespondenceDoc {
        source: path_to_doc(corr.source(), None, None),
        target: path_to_doc(corr.target(), None, None),
        ell2: NumRepr::of(corr.params().length_squared()),
    }
}

impl CorrespondenceDoc {
    pub fn to_correspondence<S: Scalar>(&self) -> Result<Correspondence<S>> {
        let source = self.source.to_path::<S>()?;
        let target = self.target.to_path::<S>()?;
        let params = DarbouxParams::from_length_squared(self.ell2.decode::<S>()?)?;
        Correspondence::new(source, target, params)
    }
}

/// Monodromy report: the matrix, its invariants, and the fixed points with
/// their circle vectors.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MonodromyDoc {
    pub matrix: [[NumRepr; 2]; 2],
    pub det: NumRepr,
    pub trace: NumRepr,
    pub invariant: NumRepr,
    pub discriminant: NumRepr,
    pub all_fixed: bool,
    pub fixed_points: Vec<FixedPointDoc>,
}

/// One fixed point: the parameter (`"inf"` for the point at infinity) and
/// the frame vector it corresponds to.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FixedPointDoc {
    pub t: NumRepr,
    pub vector: [f64; 2],
}

pub fn monodromy_to_doc<S: Scalar>(
    map: &MobiusMap<S>,
    closure: &ClosureVectors<S>,
) -> MonodromyDoc {
    let fixed = map.fixed_points();
    let fixed_points = fixed
        .points
        .iter()
        .zip(&closure.vectors)
        .map(|(t, v)| FixedPointDoc {
            t: if t.is_infinity() {
                NumRepr::Text("inf".into())
            } else {
                NumRepr::Number(t.to_f64())
            },
            vector: [v.vector().x, v.vector().y],
        })
        .collect();
    MonodromyDoc {
        matrix: [
            [NumRepr::of(&map.a), NumRepr::of(&map.b)],
            [NumRepr::of(&map.c), NumRepr::of(&map.d)],
        ],
        det: NumRepr::of(&map.det()),
        trace: NumRepr::of(&map.trace()),
        invariant: NumRepr::of(&map.conjugacy_invariant()),
        discriminant: NumRepr::of(&closure.discriminant),
        all_fixed: closure.all_closed,
        fixed_points,
    }
}

/// Serialized linkage decomposition.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LinkagesDoc {
    pub k: i64,
    pub linkages: Vec<PathDoc>,
}

pub fn linkages_to_doc<S: Scalar>(dec: &LinkageDecomposition<S>) -> LinkagesDoc {
    LinkagesDoc {
        k: dec.k,
        linkages: dec.linkages.iter().map(|l| path_to_doc(l, None, None)).collect(),
    }
}

/// Rigidity search summary (the exact published field set).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SummaryDoc {
    pub n: usize,
    pub k: i64,
    pub trials: usize,
    pub converged: usize,
    pub regular: usize,
    pub sign_sequence: usize,
    pub outside_family: usize,
    pub non_converged: usize,
    pub worst_residual: f64,
}

pub fn summary_to_doc(summary: &SearchSummary) -> SummaryDoc {
    SummaryDoc {
        n: summary.n,
        k: summary.k,
        trials: summary.trials,
        converged: summary.converged,
        regular: summary.regular,
        sign_sequence: summary.sign_sequence,
        outside_family: summary.outside_family,
        non_converged: summary.non_converged,
        worst_residual: summary.worst_residual,
    }
}

/// One per-trial JSONL record.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrialDoc {
    pub trial: usize,
    pub seed: u64,
    pub iterations: usize,
    pub residual_norm: f64,
    pub classification: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    pub coords: Vec<f64>,
}

pub fn trial_to_doc(trial: usize, report: &SolveReport) -> TrialDoc {
    let (chi, r) = match &report.classification {
        Classification::SignSequence { chi, r } => (
            Some(chi.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect()),
            Some(*r),
        ),
        _ => (None, None),
    };
    TrialDoc {
        trial,
        seed: report.seed,
        iterations: report.iterations,
        residual_norm: report.residual_norm,
        classification: report.classification.label().into(),
        chi,
        r,
        coords: report.coords.clone(),
    }
}

/// Area-preservation report with per-quad and boundary diagnostics.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AreaReportDoc {
    pub pass: bool,
    pub correspondence_pass: bool,
    pub area_source: NumRepr,
    pub area_target: NumRepr,
    pub difference: NumRepr,
    pub boundary_start: NumRepr,
    pub boundary_end: NumRepr,
    pub boundary_equal: bool,
    pub quads: Vec<QuadDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuadDoc {
    pub index: usize,
    pub source_triangle: NumRepr,
    pub target_triangle: NumRepr,
    pub equal: bool,
}

pub fn area_report_to_doc<S: Scalar>(report: &crate::area::AreaReport<S>) -> AreaReportDoc {
    AreaReportDoc {
        pass: report.pass,
        correspondence_pass: report.correspondence.pass,
        area_source: NumRepr::of(&report.area_source),
        area_target: NumRepr::of(&report.area_target),
        difference: NumRepr::of(&report.difference),
        boundary_start: NumRepr::of(&report.boundary_start),
        boundary_end: NumRepr::of(&report.boundary_end),
        boundary_equal: report.boundary_equal,
        quads: report
            .quads
            .iter()
            .enumerate()
            .map(|(index, q)| QuadDoc {
                index,
                source_triangle: NumRepr::of(&q.source_triangle),
                target_triangle: NumRepr::of(&q.target_triangle),
                equal: q.pass,
            })
            .collect(),
        note: report.note.clone(),
    }
}
