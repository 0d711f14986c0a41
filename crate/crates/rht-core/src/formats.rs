//! JSON file formats: simplicial sets, free DGAs, and equivalence verdicts.
//!
//! Field order is fixed by the struct definitions and map keys are sorted,
//! so serializing the same value always yields the same bytes.

use crate::dga::{free_dga, FreeDga};
use crate::iso::IsoWitness;
use crate::pipeline::{Answer, Verdict};
use crate::qcore::rat_to_string;
use crate::simplicial::{FiniteSimplicialSet, SimplicialError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Simplicial(#[from] SimplicialError),
    #[error("{0}")]
    Dga(#[from] crate::dga::DgaError),
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// One face of a simplex: an iterated degeneracy of a lower simplex.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FaceJson {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub degeneracies: Vec<usize>,
    pub target: String,
}

/// A finite simplicial set: per-dimension ordered id lists plus, for every
/// simplex of dimension >= 1, its ordered face references.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SpaceJson {
    pub dim: usize,
    pub simplices: Vec<Vec<String>>,
    pub faces: BTreeMap<String, Vec<FaceJson>>,
}

pub fn space_to_json(x: &FiniteSimplicialSet) -> SpaceJson {
    let dim = x.dim();
    let mut simplices = Vec::with_capacity(dim + 1);
    let mut faces = BTreeMap::new();
    for n in 0..=dim {
        let mut level = Vec::with_capacity(x.count(n));
        for key in x.keys(n) {
            level.push(x.id(key).to_string());
            if n > 0 {
                let fs = (0..=n)
                    .map(|i| {
                        let r = x.face(key, i);
                        FaceJson {
                            degeneracies: r.degeneracies.clone(),
                            target: x.id(r.target).to_string(),
                        }
                    })
                    .collect();
                faces.insert(x.id(key).to_string(), fs);
            }
        }
        simplices.push(level);
    }
    SpaceJson {
        dim,
        simplices,
        faces,
    }
}

pub fn space_from_json(j: &SpaceJson) -> Result<FiniteSimplicialSet, FormatError> {
    if j.simplices.len() != j.dim + 1 {
        return Err(FormatError::Invalid(format!(
            "dim is {} but {} dimension levels are listed",
            j.dim,
            j.simplices.len()
        )));
    }
    let mut raw_faces: crate::simplicial::RawFaces = vec![Vec::new()];
    for n in 1..=j.dim {
        let mut level = Vec::with_capacity(j.simplices[n].len());
        for id in &j.simplices[n] {
            let fs = j
                .faces
                .get(id)
                .ok_or_else(|| FormatError::Invalid(format!("no faces listed for `{id}`")))?;
            level.push(
                fs.iter()
                    .map(|f| (f.degeneracies.clone(), f.target.clone()))
                    .collect(),
            );
        }
        raw_faces.push(level);
    }
    Ok(FiniteSimplicialSet::new(j.simplices.clone(), raw_faces)?)
}

pub fn read_space(text: &str) -> Result<FiniteSimplicialSet, FormatError> {
    let j: SpaceJson = serde_json::from_str(text)?;
    space_from_json(&j)
}

pub fn write_space(x: &FiniteSimplicialSet) -> String {
    serde_json::to_string_pretty(&space_to_json(x)).expect("serialization cannot fail")
}

/// A generator of a free DGA with its differential as an expression string
/// (`coeff*name^k*...` terms joined by ` + `, coefficients `p/q`, zero `0`).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GeneratorJson {
    pub name: String,
    pub degree: usize,
    pub d: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ModelJson {
    pub generators: Vec<GeneratorJson>,
}

pub fn model_to_json(a: &FreeDga) -> ModelJson {
    ModelJson {
        generators: a
            .generators()
            .iter()
            .enumerate()
            .map(|(i, g)| GeneratorJson {
                name: g.name.clone(),
                degree: g.degree,
                d: a.to_expr(a.generator_diff(i)),
            })
            .collect(),
    }
}

pub fn model_from_json(j: &ModelJson) -> Result<FreeDga, FormatError> {
    let gens: Vec<(&str, usize)> = j
        .generators
        .iter()
        .map(|g| (g.name.as_str(), g.degree))
        .collect();
    let diffs: Vec<&str> = j.generators.iter().map(|g| g.d.as_str()).collect();
    Ok(free_dga(&gens, &diffs)?)
}

pub fn read_model(text: &str) -> Result<FreeDga, FormatError> {
    let j: ModelJson = serde_json::from_str(text)?;
    model_from_json(&j)
}

pub fn write_model(a: &FreeDga) -> String {
    serde_json::to_string_pretty(&model_to_json(a)).expect("serialization cannot fail")
}

/// An explicit isomorphism: generator images as expressions in the target
/// algebra, plus the induced block matrices with `p/q` entries.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct WitnessJson {
    pub images: Vec<String>,
    pub blocks: Vec<Vec<Vec<String>>>,
}

pub fn witness_to_json(target: &FreeDga, w: &IsoWitness) -> WitnessJson {
    WitnessJson {
        images: w.images.iter().map(|e| target.to_expr(e)).collect(),
        blocks: w
            .blocks
            .iter()
            .map(|b| {
                (0..b.rows())
                    .map(|r| (0..b.cols()).map(|c| rat_to_string(b.get(r, c))).collect())
                    .collect()
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct EvidenceJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget_exhausted: Option<usize>,
}

/// The full equivalence verdict: answer, comparison degree, evidence, and
/// both stage-d models.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct VerdictJson {
    pub verdict: String,
    pub d: usize,
    pub evidence: EvidenceJson,
    pub models: Vec<ModelJson>,
}

pub fn verdict_to_json(v: &Verdict) -> VerdictJson {
    let verdict = match v.answer {
        Answer::Equivalent => "equivalent",
        Answer::NotEquivalent => "not_equivalent",
        Answer::Unknown => "unknown",
    };
    VerdictJson {
        verdict: verdict.to_string(),
        d: v.d,
        evidence: EvidenceJson {
            witness: v
                .witness
                .as_ref()
                .map(|w| witness_to_json(&v.target_model, w)),
            certificate: v.certificate.clone(),
            budget_exhausted: match v.answer {
                Answer::Unknown => Some(v.budget),
                _ => None,
            },
        },
        models: vec![
            model_to_json(&v.source_model),
            model_to_json(&v.target_model),
        ],
    }
}

pub fn write_verdict(v: &Verdict) -> String {
    serde_json::to_string_pretty(&verdict_to_json(v)).expect("serialization cannot fail")
}
