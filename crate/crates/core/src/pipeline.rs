//! Spectrum, classes, scheme, parameters and theorem checks in one call.

use crate::error::Result;
use crate::numerics::Scalar;
use crate::pointset::{distance_distribution, DistanceDistribution, PointSet};
use crate::scheme::{build_classes, intersection_numbers, AssociationScheme, SchemeParameters};
use crate::theorems::{check_all, check_applicability, Applicability, TheoremReport};

#[derive(Debug, Clone)]
pub struct Analysis<S: Scalar> {
    pub applicability: Applicability<S>,
    pub distance_distribution: Option<DistanceDistribution>,
    pub scheme: Option<AssociationScheme>,
    pub parameters: Option<SchemeParameters<S>>,
    pub theorems: Option<TheoremReport>,
    pub warnings: Vec<String>,
}

/// Runs the full pipeline.
///
/// Failing hypotheses are reported as warnings and skip scheme
/// extraction; tolerance and scheme-axiom failures are errors.
pub fn analyze<S: Scalar>(x: &PointSet<S>) -> Result<Analysis<S>> {
    let applicability = check_applicability(x)?;
    let record = &applicability.record;
    let mut warnings = Vec::new();
    let mut analysis = Analysis {
        applicability: applicability.clone(),
        distance_distribution: None,
        scheme: None,
        parameters: None,
        theorems: None,
        warnings: Vec::new(),
    };
    let Some(spectrum) = &applicability.spectrum else {
        warnings.push("point set is not antipodal; scheme extraction skipped".into());
        analysis.warnings = warnings;
        return Ok(analysis);
    };
    analysis.distance_distribution = Some(distance_distribution(x, spectrum)?);
    if !record.applicable {
        warnings.push(format!(
            "hypotheses fail (s = {}, t = {}); scheme extraction skipped",
            record.degree, record.strength
        ));
        analysis.warnings = warnings;
        return Ok(analysis);
    }

    let classes = build_classes(x, spectrum)?;
    let scheme = intersection_numbers(&classes)?;
    let policy = x.policy();
    let params = SchemeParameters::compute(spectrum, &scheme, &applicability.basis, policy)?;
    let report = check_all(&params, record, policy.zero, policy.digits);
    if !report.all_passed {
        warnings.push("one or more theorem clauses failed".into());
    }
    analysis.scheme = Some(scheme);
    analysis.parameters = Some(params);
    analysis.theorems = Some(report);
    analysis.warnings = warnings;
    Ok(analysis)
}
