//! JSON model descriptions:
//! `{"ground": [labels], "ideal_generators": [[labels]], "unit": {label: "p/q"}}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize};

use dsigma_core::models::{ideal_closure, FiniteIndexSet, IdealOfSubsets, QuotientModel};
use dsigma_core::rational::{self, Q};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(deserialize_with = "labels")]
    pub ground: Vec<String>,
    #[serde(default, deserialize_with = "label_lists")]
    pub ideal_generators: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub unit: BTreeMap<String, String>,
}

/// Labels may be written as strings or integers.
#[derive(Deserialize)]
#[serde(untagged)]
enum Label {
    Text(String),
    Number(i64),
}

impl From<Label> for String {
    fn from(l: Label) -> String {
        match l {
            Label::Text(s) => s,
            Label::Number(n) => n.to_string(),
        }
    }
}

fn labels<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<String>, D::Error> {
    Ok(Vec::<Label>::deserialize(d)?.into_iter().map(String::from).collect())
}

fn label_lists<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<String>>, D::Error> {
    Ok(Vec::<Vec<Label>>::deserialize(d)?.into_iter().map(|g| g.into_iter().map(String::from).collect()).collect())
}

pub struct Loaded {
    pub ground: FiniteIndexSet,
    pub ideal: IdealOfSubsets,
    /// Unit tuple over the ground set, when the file gives one.
    pub unit: Option<Vec<Q>>,
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<ModelFile, String> {
        serde_json::from_str(text).map_err(|e| format!("malformed model file: {e}"))
    }

    pub fn load(&self) -> Result<Loaded, String> {
        let ground = FiniteIndexSet::new(self.ground.clone()).map_err(|e| e.to_string())?;
        let ideal = ideal_closure(&ground, &self.ideal_generators).map_err(|e| e.to_string())?;
        let unit = if self.unit.is_empty() {
            None
        } else {
            for label in self.unit.keys() {
                ground.index_of(label).map_err(|e| format!("unit: {e}"))?;
            }
            let tuple = ground
                .labels()
                .iter()
                .map(|l| {
                    let text = self.unit.get(l).ok_or_else(|| format!("unit: no value for `{l}`"))?;
                    rational::parse(text).map_err(|e| format!("unit: {e}"))
                })
                .collect::<Result<Vec<Q>, String>>()?;
            Some(tuple)
        };
        Ok(Loaded { ground, ideal, unit })
    }

    /// The enriched quotient `ℝ^X/𝓘`, with the unit's class as `1`.
    pub fn model(&self) -> Result<QuotientModel, String> {
        let loaded = self.load()?;
        let model = QuotientModel::new(&loaded.ground, &loaded.ideal, true);
        match loaded.unit {
            None => Ok(model),
            Some(u) => {
                let class = model.class_of(&u).map_err(|e| e.to_string())?;
                model.with_unit(class).map_err(|e| e.to_string())
            }
        }
    }
}
