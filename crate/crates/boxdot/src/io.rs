//! JSON interchange for frames, models, and reports.
//!
//! The frame/model schema uses exactly the keys `worlds`, `relation`,
//! `admissible`, `valuation`, `root`. A present `admissible` makes the
//! frame general; a present `valuation` makes the document a model.
//! World order in a file is significant and preserved.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::formula::print;
use crate::semantics::{
    Frame, GeneralFrame, KripkeFrame, Model, SemanticsError, World, WorldSet,
};
use crate::theorem_engine::{ChecksRecord, Example31Report, WitnessReport};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameDoc {
    pub worlds: Vec<String>,
    pub relation: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub admissible: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valuation: Option<BTreeMap<String, Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: invalid JSON: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    Schema {
        path: String,
        source: SemanticsError,
    },
}

impl FrameDoc {
    pub fn load(path: &Path) -> Result<FrameDoc, FileError> {
        let text = std::fs::read_to_string(path).map_err(|source| FileError::Io {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| FileError::Json {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), FileError> {
        let mut text = serde_json::to_string_pretty(self).expect("serializable");
        text.push('\n');
        std::fs::write(path, text).map_err(|source| FileError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn to_frame(&self) -> Result<Frame, SemanticsError> {
        let lookup = |name: &str| -> Result<usize, SemanticsError> {
            self.worlds
                .iter()
                .position(|w| w == name)
                .ok_or_else(|| SemanticsError::UnknownWorld(name.to_owned()))
        };
        let mut edges = Vec::with_capacity(self.relation.len());
        for (from, to) in &self.relation {
            edges.push((lookup(from)?, lookup(to)?));
        }
        let base = KripkeFrame::new(self.worlds.clone(), &edges)?;
        match &self.admissible {
            None => Ok(Frame::Kripke(base)),
            Some(family) => {
                let mut sets = Vec::with_capacity(family.len());
                for names in family {
                    let mut set = WorldSet::EMPTY;
                    for name in names {
                        set.insert(World(lookup(name)?));
                    }
                    sets.push(set);
                }
                Ok(Frame::General(GeneralFrame::new(base, sets)?))
            }
        }
    }

    pub fn to_model(&self) -> Result<Model, SemanticsError> {
        let frame = self.to_frame()?;
        let k = frame.kripke();
        let lookup = |name: &str| -> Result<World, SemanticsError> {
            k.world_index(name)
                .ok_or_else(|| SemanticsError::UnknownWorld(name.to_owned()))
        };
        let mut valuation = BTreeMap::new();
        if let Some(val) = &self.valuation {
            for (var, names) in val {
                let mut set = WorldSet::EMPTY;
                for name in names {
                    set.insert(lookup(name)?);
                }
                valuation.insert(var.clone(), set);
            }
        }
        let root = match &self.root {
            Some(name) => Some(lookup(name)?),
            None => None,
        };
        Model::new(frame, valuation, root)
    }

    pub fn from_frame(fr: &Frame) -> FrameDoc {
        let k = fr.kripke();
        let names = |set: WorldSet| -> Vec<String> {
            set.iter().map(|w| k.world_name(w).to_owned()).collect()
        };
        FrameDoc {
            worlds: k.world_names().to_vec(),
            relation: k
                .edges()
                .iter()
                .map(|&(i, j)| {
                    (
                        k.world_name(World(i)).to_owned(),
                        k.world_name(World(j)).to_owned(),
                    )
                })
                .collect(),
            admissible: fr
                .admissible()
                .map(|family| family.iter().map(|&s| names(s)).collect()),
            valuation: None,
            root: None,
        }
    }

    pub fn from_model(m: &Model) -> FrameDoc {
        let k = m.frame().kripke();
        let mut doc = FrameDoc::from_frame(m.frame());
        doc.valuation = Some(
            m.valuation()
                .iter()
                .map(|(var, set)| {
                    (
                        var.clone(),
                        set.iter().map(|w| k.world_name(w).to_owned()).collect(),
                    )
                })
                .collect(),
        );
        doc.root = m.root().map(|w| k.world_name(w).to_owned());
        doc
    }
}

/// Serializable form of a witness report: formulas in the ASCII grammar,
/// models in the frame/model schema, keys in declaration order.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessDoc {
    pub phi: String,
    pub q: String,
    pub x: Vec<String>,
    pub n: usize,
    pub chi: String,
    pub chi_bd: String,
    pub source_model: FrameDoc,
    pub doubled_model: FrameDoc,
    pub checks: ChecksRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_refuting_world: Option<String>,
    pub x_nonconsequence_in_l0: bool,
}

impl WitnessDoc {
    pub fn from_report(report: &WitnessReport) -> WitnessDoc {
        WitnessDoc {
            phi: print(&report.phi),
            q: report.q.clone(),
            x: report.x.iter().map(print).collect(),
            n: report.n,
            chi: print(&report.chi),
            chi_bd: print(&report.chi_bd),
            source_model: FrameDoc::from_model(&report.source_model),
            doubled_model: FrameDoc::from_model(&report.doubled_model),
            checks: report.checks,
            chi_refuting_world: report.chi_refuting_world.clone(),
            x_nonconsequence_in_l0: report.x_nonconsequence_in_l0,
        }
    }
}

/// Serializable form of the motivating-example report.
#[derive(Clone, Debug, Serialize)]
pub struct Example31Doc {
    pub reflexivized_i2_equals_c2: bool,
    pub formula: String,
    pub valid_in_i2: bool,
    pub invalid_in_c2: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c2_counter_valuation: Option<BTreeMap<String, Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c2_counter_world: Option<String>,
    pub corpus_size: usize,
    pub bdi_mismatches: Vec<String>,
    pub all_pass: bool,
}

impl Example31Doc {
    pub fn from_report(report: &Example31Report) -> Example31Doc {
        let c2_names = crate::theorem_engine::c2();
        Example31Doc {
            reflexivized_i2_equals_c2: report.reflexivized_i2_equals_c2,
            formula: print(&report.formula),
            valid_in_i2: report.valid_in_i2,
            invalid_in_c2: report.invalid_in_c2,
            c2_counter_valuation: report.c2_counter_valuation.as_ref().map(|val| {
                val.iter()
                    .map(|(var, set)| {
                        (
                            var.clone(),
                            set.iter()
                                .map(|w| c2_names.world_name(w).to_owned())
                                .collect(),
                        )
                    })
                    .collect()
            }),
            c2_counter_world: report.c2_counter_world.clone(),
            corpus_size: report.corpus_size,
            bdi_mismatches: report.bdi_mismatches.iter().map(print).collect(),
            all_pass: report.all_pass(),
        }
    }
}
