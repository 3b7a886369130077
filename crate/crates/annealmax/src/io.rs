//! Instance and combination files: UTF-8 JSON with integer-exact weights on
//! round trips.
//!
//! ```json
//! {"n": 8, "kind": "hypergraph-cut",
//!  "edges": [{"tails": [7], "head": 3, "w": 8}, ...],
//!  "matroid": {"kind": "uniform", "k": 2}}
//! ```

use crate::error::{Error, Result};
use crate::matroid::{MatroidKind, MatroidOracle};
use crate::setfn::{
    CoverageItem, DirectedHyperedge, DirectedHypergraph, GroundSet, OracleKind, SetFunctionOracle,
    Subset,
};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    #[serde(flatten)]
    pub payload: PayloadFile,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matroid: Option<MatroidFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PayloadFile {
    HypergraphCut { edges: Vec<EdgeFile> },
    ExplicitTable { values: Vec<f64> },
    Modular { weights: Vec<f64> },
    Coverage { items: Vec<ItemFile> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeFile {
    pub tails: Vec<usize>,
    pub head: usize,
    pub w: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ItemFile {
    pub w: f64,
    pub covered_by: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MatroidFile {
    Uniform { k: usize },
    Partition { blocks: Vec<Vec<usize>>, caps: Vec<usize> },
}

/// Serialized convex combination for the `round` subcommand.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CombinationFile {
    #[serde(flatten)]
    pub instance: InstanceFile,
    pub sets: Vec<Vec<usize>>,
}

impl InstanceFile {
    pub fn to_oracle(&self) -> Result<SetFunctionOracle> {
        let n = self.n;
        match &self.payload {
            PayloadFile::HypergraphCut { edges } => {
                let ground = GroundSet::new(n)?;
                let edges = edges
                    .iter()
                    .map(|e| DirectedHyperedge {
                        tails: Subset::from_elements(&e.tails),
                        head: e.head,
                        weight: e.w,
                    })
                    .collect();
                Ok(SetFunctionOracle::hypergraph_cut(DirectedHypergraph::new(ground, edges)?))
            }
            PayloadFile::ExplicitTable { values } => {
                SetFunctionOracle::explicit_table(n, values.clone())
            }
            PayloadFile::Modular { weights } => {
                if weights.len() != n {
                    return Err(Error::Malformed(format!(
                        "modular instance has {} weights for n = {n}",
                        weights.len()
                    )));
                }
                SetFunctionOracle::modular(weights.clone())
            }
            PayloadFile::Coverage { items } => {
                let items = items
                    .iter()
                    .map(|it| CoverageItem {
                        weight: it.w,
                        covered_by: Subset::from_elements(&it.covered_by),
                    })
                    .collect();
                SetFunctionOracle::coverage(n, items)
            }
        }
    }

    pub fn to_matroid(&self) -> Result<Option<MatroidOracle>> {
        match &self.matroid {
            None => Ok(None),
            Some(m) => Ok(Some(matroid_from_file(self.n, m)?)),
        }
    }

    pub fn from_oracle(oracle: &SetFunctionOracle, matroid: Option<&MatroidOracle>) -> InstanceFile {
        let payload = match oracle.kind() {
            OracleKind::HypergraphCut(g) => PayloadFile::HypergraphCut {
                edges: g
                    .edges
                    .iter()
                    .map(|e| EdgeFile { tails: e.tails.to_vec(), head: e.head, w: e.weight })
                    .collect(),
            },
            OracleKind::ExplicitTable(values) => {
                PayloadFile::ExplicitTable { values: values.clone() }
            }
            OracleKind::Modular(weights) => PayloadFile::Modular { weights: weights.clone() },
            OracleKind::Coverage(items) => PayloadFile::Coverage {
                items: items
                    .iter()
                    .map(|it| ItemFile { w: it.weight, covered_by: it.covered_by.to_vec() })
                    .collect(),
            },
        };
        InstanceFile { n: oracle.n(), payload, matroid: matroid.map(matroid_to_file) }
    }
}

pub fn matroid_from_file(n: usize, file: &MatroidFile) -> Result<MatroidOracle> {
    match file {
        MatroidFile::Uniform { k } => MatroidOracle::uniform(n, *k),
        MatroidFile::Partition { blocks, caps } => {
            let blocks = blocks.iter().map(|b| Subset::from_elements(b)).collect();
            MatroidOracle::partition(n, blocks, caps.clone())
        }
    }
}

pub fn matroid_to_file(m: &MatroidOracle) -> MatroidFile {
    match m.kind() {
        MatroidKind::Uniform { k } => MatroidFile::Uniform { k: *k },
        MatroidKind::Partition { blocks, caps } => MatroidFile::Partition {
            blocks: blocks.iter().map(|b| b.to_vec()).collect(),
            caps: caps.clone(),
        },
        MatroidKind::Custom(_) => unreachable!("custom matroids are not serializable"),
    }
}

pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    Ok(serde_json::from_str(text)?)
}

pub fn load_instance(path: &Path) -> Result<InstanceFile> {
    parse_instance(&std::fs::read_to_string(path)?)
}

pub fn save_instance(path: &Path, file: &InstanceFile) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(file)?)?;
    Ok(())
}

pub fn load_combination(path: &Path) -> Result<CombinationFile> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setfn::tight_example;
    use proptest::prelude::*;

    #[test]
    fn tight_example_round_trip_is_value_exact() {
        let f = tight_example();
        let m = MatroidOracle::uniform(8, 2).unwrap();
        let file = InstanceFile::from_oracle(&f, Some(&m));
        let text = serde_json::to_string(&file).unwrap();
        let parsed = parse_instance(&text).unwrap();
        let g = parsed.to_oracle().unwrap();
        for s in f.ground().subsets() {
            assert_eq!(f.eval(s).unwrap(), g.eval(s).unwrap());
        }
        let m2 = parsed.to_matroid().unwrap().unwrap();
        for s in f.ground().subsets() {
            assert_eq!(m.is_independent(s), m2.is_independent(s));
        }
    }

    #[test]
    fn kind_tags_match_the_documented_shape() {
        let f = tight_example();
        let file = InstanceFile::from_oracle(&f, None);
        let v: serde_json::Value = serde_json::to_value(&file).unwrap();
        assert_eq!(v["kind"], "hypergraph-cut");
        assert_eq!(v["n"], 8);
        assert_eq!(v["edges"][0]["tails"], serde_json::json!([7]));
        assert_eq!(v["edges"][0]["head"], 3);
        assert_eq!(v["edges"][0]["w"], 8.0);
    }

    #[test]
    fn partition_matroid_round_trip() {
        let text = r#"{"n": 4, "kind": "modular", "weights": [1, 2, 3, 4],
                       "matroid": {"kind": "partition", "blocks": [[0,1],[2,3]], "caps": [1,1]}}"#;
        let file = parse_instance(text).unwrap();
        let m = file.to_matroid().unwrap().unwrap();
        assert!(m.is_independent(Subset::from_elements(&[0, 2])));
        assert!(!m.is_independent(Subset::from_elements(&[0, 1])));
        let f = file.to_oracle().unwrap();
        assert_eq!(f.eval(Subset::from_elements(&[1, 3])).unwrap(), 6.0);
    }

    #[test]
    fn malformed_input_is_reported() {
        assert!(parse_instance("{").is_err());
        assert!(parse_instance(r#"{"n": 2, "kind": "mystery"}"#).is_err());
        // Head inside its own tails.
        let bad = r#"{"n": 3, "kind": "hypergraph-cut",
                      "edges": [{"tails": [0, 1], "head": 1, "w": 1}]}"#;
        assert!(parse_instance(bad).unwrap().to_oracle().is_err());
    }

    proptest! {
        // Integer weights survive a save/load cycle bit-exactly, for every
        // oracle kind.
        #[test]
        fn round_trip_preserves_values(
            n in 1usize..6,
            arcs in proptest::collection::vec((0usize..6, 0usize..6, 1u32..50), 0..12),
            weights in proptest::collection::vec(0u32..50, 6),
            seed in 0u64..50,
        ) {
            let arcs: Vec<(usize, usize, f64)> = arcs
                .into_iter()
                .filter(|&(u, v, _)| u < n && v < n && u != v)
                .map(|(u, v, w)| (u, v, w as f64))
                .collect();
            let cut = SetFunctionOracle::hypergraph_cut(
                DirectedHypergraph::from_arcs(n, &arcs).unwrap(),
            );
            let modular = SetFunctionOracle::modular(
                weights.iter().take(n).map(|&w| w as f64).collect(),
            ).unwrap();
            let coverage = crate::setfn::random_instance(
                crate::setfn::RandomKind::Coverage, n, 0.5, (1.0, 9.0), seed,
            ).unwrap();
            for oracle in [&cut, &modular, &coverage] {
                let file = InstanceFile::from_oracle(oracle, None);
                let text = serde_json::to_string(&file).unwrap();
                let back = parse_instance(&text).unwrap().to_oracle().unwrap();
                for s in oracle.ground().subsets() {
                    prop_assert_eq!(oracle.eval(s).unwrap(), back.eval(s).unwrap());
                }
            }
        }
    }
}
