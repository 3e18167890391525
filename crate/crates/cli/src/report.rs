use serde::Serialize;
use serde_json::Value;

use qscheme::families::RenderedTables;
use qscheme::numerics::{Scalar, TolerancePolicy};
use qscheme::pipeline::Analysis;
use qscheme::scheme::{IdempotentOrdering, QPolynomialCheck};
use qscheme::theorems::TheoremReport;
use qscheme::Error;

#[derive(Debug, Serialize)]
pub struct InputInfo {
    pub path: String,
    pub sha256: String,
    pub backend: &'static str,
}

#[derive(Debug, Serialize)]
pub struct SchemeSection {
    pub valencies: Vec<u64>,
    pub multiplicities: Vec<String>,
    pub p: Vec<Vec<String>>,
    pub q: Vec<Vec<String>>,
    /// `krein[i][j][k] = q_ij^k`.
    pub krein: Vec<Vec<Vec<String>>>,
    pub krein_min: String,
    pub intersection: Vec<Vec<Vec<String>>>,
    pub dual: Vec<Vec<String>>,
    pub q_polynomial: QPolynomialCheck,
    pub idempotent_ordering: IdempotentOrdering,
}

#[derive(Debug, Serialize)]
pub struct ErrorSection {
    pub kind: &'static str,
    pub message: String,
    pub witness: Option<Value>,
}

#[derive(Debug, Serialize)]
pub struct Timing {
    pub seconds: f64,
}

/// Keys appear in declaration order.
#[derive(Debug, Serialize)]
pub struct AnalysisReport {
    pub input: InputInfo,
    pub tolerance: TolerancePolicy,
    pub dimension: Option<usize>,
    pub size: Option<usize>,
    pub degree: Option<usize>,
    pub strength: Option<usize>,
    pub antipodal: Option<bool>,
    pub applicable: Option<bool>,
    pub spectrum: Vec<String>,
    pub distance_invariant: Option<bool>,
    pub scheme: Option<SchemeSection>,
    pub theorems: Option<TheoremReport>,
    pub warnings: Vec<String>,
    pub error: Option<ErrorSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl AnalysisReport {
    pub fn empty(input: InputInfo, tolerance: TolerancePolicy) -> Self {
        AnalysisReport {
            input,
            tolerance,
            dimension: None,
            size: None,
            degree: None,
            strength: None,
            antipodal: None,
            applicable: None,
            spectrum: Vec::new(),
            distance_invariant: None,
            scheme: None,
            theorems: None,
            warnings: Vec::new(),
            error: None,
            timing: None,
        }
    }

    pub fn fill<S: Scalar>(&mut self, a: &Analysis<S>, digits: usize) {
        let h = &a.applicability.record;
        self.dimension = Some(h.dimension);
        self.size = Some(h.size);
        self.degree = Some(h.degree);
        self.strength = Some(h.strength);
        self.antipodal = Some(h.antipodal);
        self.applicable = Some(h.applicable);
        self.spectrum = match &a.applicability.spectrum {
            Some(s) => s.alphas().iter().map(|v| v.render(digits)).collect(),
            None => a.applicability.raw_spectrum.values.iter().map(|v| v.render(digits)).collect(),
        };
        self.distance_invariant = a.distance_distribution.as_ref().map(|d| d.invariant);
        if let (Some(scheme), Some(p)) = (&a.scheme, &a.parameters) {
            let tables = qscheme::families::ParameterTables {
                intersection: p.intersection.clone(),
                p: p.p.clone(),
                q: p.q.clone(),
                dual: p.dual.clone(),
            };
            let RenderedTables { intersection, p: pr, q, dual } = tables.render(digits);
            self.scheme = Some(SchemeSection {
                valencies: scheme.valencies().to_vec(),
                multiplicities: p.multiplicities.iter().map(|m| m.render(digits)).collect(),
                p: pr,
                q,
                krein: p
                    .krein
                    .to_nested()
                    .iter()
                    .map(|a| a.iter().map(|b| b.iter().map(|v| v.render(digits)).collect()).collect())
                    .collect(),
                krein_min: p.krein.min().render(digits),
                intersection,
                dual,
                q_polynomial: p.q_polynomial.clone(),
                idempotent_ordering: p.ordering.clone(),
            });
        }
        self.theorems = a.theorems.clone();
        self.warnings = a.warnings.clone();
    }

    pub fn set_error(&mut self, e: &Error) {
        let witness = match e {
            Error::NotAScheme(w) => serde_json::to_value(w).ok(),
            _ => None,
        };
        self.error = Some(ErrorSection {
            kind: error_kind(e),
            message: e.to_string(),
            witness,
        });
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::AmbiguousCluster { .. } => "ambiguous_cluster",
        Error::DimensionTooSmall(_) => "dimension_too_small",
        Error::CapExceeded { .. } => "cap_exceeded",
        Error::NotUnitNorm { .. } => "not_unit_norm",
        Error::DuplicatePoint(..) => "duplicate_point",
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::EmptyPointSet => "empty_point_set",
        Error::NotAntipodalSpectrum(_) => "not_antipodal_spectrum",
        Error::UnclassifiedPair { .. } => "unclassified_pair",
        Error::NotAScheme(_) => "not_a_scheme",
        Error::InvalidClassMatrix(_) => "invalid_class_matrix",
        Error::NotIdempotent { .. } => "not_idempotent",
        Error::SplitFailure(_) => "split_failure",
        Error::NonDiagonalizable(_) => "non_diagonalizable",
        Error::NegativeKrein { .. } => "negative_krein",
        Error::Singular => "singular",
        Error::ConstructionUnavailable(_) => "construction_unavailable",
        Error::OutOfRange(_) => "out_of_range",
        Error::Parse(_) => "parse",
        Error::Io(_) => "io",
    }
}

/// Flattens a JSON value into `(path, value)` rows, paths joined with `.`.
pub fn flatten(value: &Value) -> Vec<(String, String)> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let join = |k: &str| {
            if prefix.is_empty() {
                k.to_owned()
            } else {
                format!("{prefix}.{k}")
            }
        };
        match v {
            Value::Object(map) => map.iter().for_each(|(k, v)| walk(&join(k), v, out)),
            Value::Array(items) => items
                .iter()
                .enumerate()
                .for_each(|(i, v)| walk(&join(&i.to_string()), v, out)),
            Value::String(s) => out.push((prefix.to_owned(), s.clone())),
            Value::Null => out.push((prefix.to_owned(), String::new())),
            other => out.push((prefix.to_owned(), other.to_string())),
        }
    }
    let mut out = Vec::new();
    walk("", value, &mut out);
    out
}
