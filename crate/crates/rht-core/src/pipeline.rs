//! End-to-end decision of rational homotopy equivalence: from two finite
//! simply connected simplicial sets to a verdict with verifiable evidence.
//!
//! Both spaces get a minimal model computed up to d = max(dim X, dim Y);
//! models generated in degrees <= d determine the rational homotopy type of
//! spaces of dimension <= d, so the question reduces to algebra isomorphism,
//! which is attacked first by invariants and then by the orbit solver.

use crate::dga::FreeDga;
use crate::iso::{
    build_orbit_instance, check_isomorphism, invariant_refute, solve_orbit, BuildResult,
    IsoWitness, SolveOutcome,
};
use crate::minmodel::{minimal_model, EffectivePresentation, ModelError, ModelState};
use crate::simplicial::FiniteSimplicialSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("input fails simplicial identities: {0}")]
    InvalidSpace(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("comparison degree {d} is below the maximal input dimension {needed}")]
    DegreeBelowDimension { d: usize, needed: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Equivalent,
    NotEquivalent,
    Unknown,
}

/// The decision together with everything needed to re-verify it.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub answer: Answer,
    /// Comparison degree: models were computed through this degree.
    pub d: usize,
    pub witness: Option<IsoWitness>,
    pub certificate: Option<String>,
    pub budget: usize,
    pub source_model: FreeDga,
    pub target_model: FreeDga,
}

pub const DEFAULT_BUDGET: usize = 10_000;

/// Minimal model of a finite simplicial set through degree `d`.
///
/// Simple connectivity is the caller's assertion; what the data can show is
/// checked: the simplicial identities, connectivity, and H^1 = 0 over the
/// rationals.
pub fn minimal_model_of_space(
    x: &FiniteSimplicialSet,
    d: usize,
) -> Result<ModelState, PipelineError> {
    let violations = x.validate();
    if !violations.is_empty() {
        return Err(PipelineError::InvalidSpace(format!(
            "{} violation(s), first: {}",
            violations.len(),
            violations[0]
        )));
    }
    let p = EffectivePresentation::new(x.clone())?;
    Ok(minimal_model(&p, d)?)
}

/// Decides whether two finite simply connected simplicial sets have the same
/// rational homotopy type.
pub fn decide_rhe(
    x: &FiniteSimplicialSet,
    y: &FiniteSimplicialSet,
    budget: usize,
) -> Result<Verdict, PipelineError> {
    decide_rhe_at(x, y, x.dim().max(y.dim()).max(2), budget)
}

/// Like `decide_rhe` with an explicit comparison degree, which must be at
/// least the dimension of both inputs.
pub fn decide_rhe_at(
    x: &FiniteSimplicialSet,
    y: &FiniteSimplicialSet,
    d: usize,
    budget: usize,
) -> Result<Verdict, PipelineError> {
    let needed = x.dim().max(y.dim());
    if d < needed {
        return Err(PipelineError::DegreeBelowDimension { d, needed });
    }
    let mx = minimal_model_of_space(x, d)?;
    let my = minimal_model_of_space(y, d)?;
    let source_model = mx.model.clone();
    let target_model = my.model.clone();
    let verdict = |answer, witness, certificate| Verdict {
        answer,
        d,
        witness,
        certificate,
        budget,
        source_model: source_model.clone(),
        target_model: target_model.clone(),
    };
    if let Some(w) = invariant_refute(&source_model, &target_model) {
        return Ok(verdict(Answer::NotEquivalent, None, Some(w.to_string())));
    }
    let inst = match build_orbit_instance(&source_model, &target_model) {
        BuildResult::Instance(inst) => inst,
        BuildResult::ImmediateNo {
            degree,
            source_dim,
            target_dim,
        } => {
            return Ok(verdict(
                Answer::NotEquivalent,
                None,
                Some(format!(
                    "graded dimension mismatch in degree {degree}: {source_dim} vs {target_dim}"
                )),
            ));
        }
    };
    match solve_orbit(&inst, budget) {
        SolveOutcome::Iso(w) => {
            if !check_isomorphism(&source_model, &target_model, &w) {
                return Err(PipelineError::Model(ModelError::Internal(
                    "solver returned an unverified isomorphism".into(),
                )));
            }
            Ok(verdict(Answer::Equivalent, Some(*w), None))
        }
        SolveOutcome::NoIso(cert) => Ok(verdict(Answer::NotEquivalent, None, Some(cert))),
        SolveOutcome::Unknown => Ok(verdict(Answer::Unknown, None, None)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn sphere_against_itself_is_equivalent() {
        let s2 = fixtures::sphere(2);
        let v = decide_rhe(&s2, &s2, DEFAULT_BUDGET).unwrap();
        assert_eq!(v.answer, Answer::Equivalent);
        let w = v.witness.unwrap();
        assert!(check_isomorphism(&v.source_model, &v.target_model, &w));
    }

    #[test]
    fn different_spheres_are_not_equivalent() {
        let s2 = fixtures::sphere(2);
        let s3 = fixtures::sphere(3);
        let v = decide_rhe(&s2, &s3, DEFAULT_BUDGET).unwrap();
        assert_eq!(v.answer, Answer::NotEquivalent);
        let cert = v.certificate.unwrap();
        assert!(cert.contains("degree 2"), "{cert}");
        // symmetric
        let v2 = decide_rhe(&s3, &s2, DEFAULT_BUDGET).unwrap();
        assert_eq!(v2.answer, Answer::NotEquivalent);
    }

    #[test]
    fn cp2_vs_wedge_refuted_by_degree_three_generator() {
        let cp2 = fixtures::cp2_nine_vertex();
        let wedge = fixtures::wedge_of_spheres(2, 4);
        let v = decide_rhe(&cp2, &wedge, DEFAULT_BUDGET).unwrap();
        assert_eq!(v.answer, Answer::NotEquivalent);
        let cert = v.certificate.unwrap();
        assert!(cert.contains("generator count in degree 3"), "{cert}");
        assert_eq!(v.d, 4);
    }

    #[test]
    fn small_and_large_s2_models_agree() {
        // the two-simplex-with-collapsed-boundary model of S^2 against the
        // boundary of the tetrahedron
        let a = fixtures::small_s2();
        let b = fixtures::sphere(2);
        let v = decide_rhe(&a, &b, DEFAULT_BUDGET).unwrap();
        assert_eq!(v.answer, Answer::Equivalent);
    }

    #[test]
    fn contractible_spaces_are_equivalent() {
        let a = crate::simplicial::standard_simplex(2);
        let b = crate::simplicial::standard_simplex(3);
        let v = decide_rhe(&a, &b, DEFAULT_BUDGET).unwrap();
        assert_eq!(v.answer, Answer::Equivalent);
        assert!(v.source_model.generators().is_empty());
    }

    #[test]
    fn circle_is_rejected() {
        let circle = fixtures::sphere(1);
        assert!(matches!(
            minimal_model_of_space(&circle, 2),
            Err(PipelineError::Model(ModelError::NotSimplyConnected(1)))
        ));
    }

    #[test]
    fn sphere_model_signature() {
        let state = minimal_model_of_space(&fixtures::sphere(2), 4).unwrap();
        let gens = state.model.generators();
        assert_eq!(gens.len(), 2);
        assert_eq!((gens[0].degree, gens[1].degree), (2, 3));
    }
}
