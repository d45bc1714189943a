use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::ShellError;
use crate::exactfield::{Field, Matrix};
use crate::pathalg::{build_algebra, relations_from_names, Algebra, Arrow, Quiver};
use crate::repmod::{Atlas, Representation};

fn default_p() -> u64 {
    101
}

fn default_samples() -> usize {
    100
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverSpec {
    pub vertices: usize,
    #[serde(default)]
    pub arrows: Vec<Arrow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub coeff: i64,
    pub path: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtlasSpec {
    pub name: String,
    pub dims: Vec<usize>,
    /// Row-major matrices keyed by arrow name; a missing arrow acts by zero.
    #[serde(default)]
    pub arrows: BTreeMap<String, Vec<Vec<i64>>>,
}

/// The parsed input file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDescription {
    #[serde(default = "default_p")]
    pub p: u64,
    pub quiver: QuiverSpec,
    #[serde(default)]
    pub relations: Vec<Vec<Term>>,
    pub nilpotency_bound: usize,
    pub atlas: Vec<AtlasSpec>,
    #[serde(default)]
    pub full_module_category: bool,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
}

/// A validated input with its algebra and atlas built.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub description: InputDescription,
    pub algebra: Arc<Algebra>,
    pub atlas: Atlas,
}

impl Loaded {
    /// Hex SHA-256 of the canonical JSON of the description.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(&self.description).expect("description serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}

pub fn parse_input(path: &Path) -> Result<InputDescription, ShellError> {
    let text = std::fs::read_to_string(path).map_err(|e| ShellError::Io(format!("{}: {e}", path.display())))?;
    parse_str(&text)
}

pub fn parse_str(text: &str) -> Result<InputDescription, ShellError> {
    let desc: InputDescription = serde_json::from_str(text).map_err(|e| ShellError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if Field::new(desc.p).is_err() {
        let (line, column) = locate(text, "\"p\"");
        return Err(ShellError::Parse {
            line,
            column,
            message: format!("field `p`: {} is not a prime", desc.p),
        });
    }
    Ok(desc)
}

fn locate(text: &str, needle: &str) -> (usize, usize) {
    let Some(pos) = text.find(needle) else {
        return (0, 0);
    };
    let before = &text[..pos];
    let line = before.matches('\n').count() + 1;
    let column = pos - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

/// Build the algebra and atlas, optionally over a different prime.
pub fn load(mut desc: InputDescription, p_override: Option<u64>) -> Result<Loaded, ShellError> {
    if let Some(p) = p_override {
        desc.p = p;
    }
    let field = Field::new(desc.p).map_err(|_| ShellError::Parse {
        line: 0,
        column: 0,
        message: format!("--p {} is not a prime", desc.p),
    })?;
    let invariant = |e: String| ShellError::InvariantViolation(e);
    let quiver = Quiver::new(desc.quiver.vertices, desc.quiver.arrows.clone()).map_err(|e| invariant(e.to_string()))?;
    let rels: Vec<Vec<(i64, Vec<String>)>> = desc
        .relations
        .iter()
        .map(|r| r.iter().map(|t| (t.coeff, t.path.clone())).collect())
        .collect();
    let relations =
        relations_from_names(&quiver, field, &rels, desc.nilpotency_bound).map_err(|e| invariant(e.to_string()))?;
    let algebra = Arc::new(build_algebra(quiver, &relations, field).map_err(|e| invariant(e.to_string()))?);
    let mut names = BTreeSet::new();
    let mut members = Vec::with_capacity(desc.atlas.len());
    for spec in &desc.atlas {
        if !names.insert(spec.name.clone()) {
            return Err(invariant(format!("atlas name `{}` is used twice", spec.name)));
        }
        members.push((spec.name.clone(), representation(&algebra, spec)?));
    }
    let atlas = Atlas::new(members).map_err(|e| invariant(e.to_string()))?;
    Ok(Loaded {
        description: desc,
        algebra,
        atlas,
    })
}

fn representation(alg: &Arc<Algebra>, spec: &AtlasSpec) -> Result<Representation, ShellError> {
    let invariant = |msg: String| ShellError::InvariantViolation(format!("atlas member `{}`: {msg}", spec.name));
    let q = alg.quiver();
    if spec.dims.len() != q.vertices() {
        return Err(invariant(format!("{} dims for {} vertices", spec.dims.len(), q.vertices())));
    }
    for name in spec.arrows.keys() {
        if q.arrow_index(name).is_none() {
            return Err(invariant(format!("unknown arrow `{name}`")));
        }
    }
    let mut mats = Vec::with_capacity(q.arrows().len());
    for a in q.arrows() {
        let (rows, cols) = (spec.dims[a.target], spec.dims[a.source]);
        let m = match spec.arrows.get(&a.name) {
            None => Matrix::zeros(alg.field(), rows, cols),
            Some(data) => {
                if data.len() != rows || data.iter().any(|r| r.len() != cols) {
                    return Err(invariant(format!("arrow `{}` needs a {rows}x{cols} matrix", a.name)));
                }
                Matrix::from_i64_rows(alg.field(), data, cols).map_err(|e| invariant(e.to_string()))?
            }
        };
        mats.push(m);
    }
    Representation::new(alg.clone(), spec.dims.clone(), mats).map_err(|e| invariant(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const A2: &str = r#"{
  "quiver": {"vertices": 2, "arrows": [{"name": "a", "source": 0, "target": 1}]},
  "nilpotency_bound": 2,
  "atlas": [
    {"name": "S1", "dims": [1, 0]},
    {"name": "P1", "dims": [1, 1], "arrows": {"a": [[1]]}},
    {"name": "S2", "dims": [0, 1]}
  ]
}"#;

    #[test]
    fn defaults_apply() {
        let d = parse_str(A2).unwrap();
        assert_eq!((d.p, d.seed, d.samples), (101, 0, 100));
        assert!(!d.full_module_category);
        let l = load(d, None).unwrap();
        assert_eq!(l.atlas.len(), 3);
        assert_eq!(l.hash().len(), 64);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let broken = A2.replace("\"nilpotency_bound\": 2,", "\"nilpotency_bound\": 2");
        match parse_str(&broken) {
            Err(ShellError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn composite_p_is_a_parse_error() {
        let text = A2.replacen('{', "{\n  \"p\": 100,", 1);
        match parse_str(&text) {
            Err(ShellError::Parse { line, message, .. }) => {
                assert_eq!(line, 2);
                assert!(message.contains("not a prime"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn short_relation_is_an_invariant_violation() {
        let text = A2.replacen('{', "{\n  \"relations\": [[{\"coeff\": 1, \"path\": [\"a\"]}]],", 1);
        let d = parse_str(&text).unwrap();
        assert!(matches!(load(d, None), Err(ShellError::InvariantViolation(_))));
    }

    #[test]
    fn bad_atlas_members_are_rejected() {
        for (from, to) in [
            ("\"arrows\": {\"a\": [[1]]}", "\"arrows\": {\"a\": [[1, 0]]}"),
            ("\"arrows\": {\"a\": [[1]]}", "\"arrows\": {\"b\": [[1]]}"),
            ("\"name\": \"S2\"", "\"name\": \"S1\""),
            ("\"dims\": [0, 1]", "\"dims\": [1, 0]"),
        ] {
            let d = parse_str(&A2.replace(from, to)).unwrap();
            assert!(matches!(load(d, None), Err(ShellError::InvariantViolation(_))), "{to}");
        }
    }
}
