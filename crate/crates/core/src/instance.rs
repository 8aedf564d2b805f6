//! The on-disk instance format: one JSON document per instance with
//! keys `name, n, m, maximal_faces, lambda` (1-indexed vertices) and an
//! optional `metadata` map. Unknown top-level keys are preserved under
//! `metadata`.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::charmat::{CharMatrix, ToricInstance};
use crate::error::{Error, Result};
use crate::simplicial::SimplicialComplex;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub maximal_faces: Vec<Vec<usize>>,
    pub lambda: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub metadata: Map<String, Value>,
    #[serde(flatten)]
    extra: Map<String, Value>,
}

impl InstanceFile {
    /// Parse the JSON text form. Syntax problems are input errors;
    /// unknown keys are folded into `metadata`.
    pub fn parse_str(text: &str) -> Result<InstanceFile> {
        let mut file: InstanceFile = serde_json::from_str(text)
            .map_err(|e| Error::Input(format!("instance parse: {e}")))?;
        let extra = std::mem::take(&mut file.extra);
        for (k, v) in extra {
            file.metadata.entry(k).or_insert(v);
        }
        Ok(file)
    }

    /// Build the complex and matrix without running the determinant
    /// validation (callers choose the mode).
    pub fn to_instance_parts(&self) -> Result<(SimplicialComplex, CharMatrix)> {
        if self.lambda.len() != self.n || self.lambda.iter().any(|r| r.len() != self.m) {
            return Err(Error::Input(format!(
                "lambda must be {}x{} to match the declared n and m",
                self.n, self.m
            )));
        }
        let complex = SimplicialComplex::new(self.m, &self.maximal_faces)?;
        let lambda = CharMatrix::new(self.n, self.m, &self.lambda)?;
        Ok((complex, lambda))
    }

    /// Build and validate the instance described by the file.
    pub fn to_instance(&self) -> Result<ToricInstance> {
        let (complex, lambda) = self.to_instance_parts()?;
        ToricInstance::new(self.name.clone(), complex, lambda)
    }

    pub fn from_instance(instance: &ToricInstance) -> InstanceFile {
        InstanceFile {
            name: instance.name().to_string(),
            n: instance.lambda().rank_n(),
            m: instance.lambda().facet_count(),
            maximal_faces: instance.complex().maximal_faces(),
            lambda: instance.lambda().rows(),
            metadata: Map::new(),
            extra: Map::new(),
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }
}
