//! JSON documents for groups, matched pairs, fusion rings, gradings and
//! crossed actions.
//!
//! * group: `{"table": [[..]]}` or `{"permutations": [[2,1,3], ..]}` (1-based
//!   images), optional `"names"`;
//! * matched pair: `{"G": group, "Gamma": group, "lact": [[..]], "ract": [[..]]}`
//!   with tables indexed `[k][g]`;
//! * fusion ring: `{"rank": r, "unit": u, "dual": [..], "N": [[a,b,c,m], ..]}`
//!   with optional `"labels"`;
//! * grading: `{"group": group, "deg": [..]}`;
//! * crossed action: `{"ring": .., "matched_pair": .., "grading": .., "act": [[..]]}`
//!   with `act` indexed `[label][g]`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::crossact::CrossedActionData;
use crate::dualgt::DualSimple;
use crate::equivar::EquivariantSimple;
use crate::error::{Error, Result};
use crate::fusring::{FusionRing, Grading};
use crate::grp::FiniteGroup;
use crate::matched::MatchedPair;

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutations: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

impl GroupDoc {
    pub fn from_group(g: &FiniteGroup) -> Self {
        GroupDoc {
            table: Some(g.table()),
            permutations: None,
            names: g.names().map(<[String]>::to_vec),
        }
    }

    pub fn to_group(&self) -> Result<FiniteGroup> {
        let g = match (&self.table, &self.permutations) {
            (Some(t), None) => FiniteGroup::from_table(t.clone())?,
            (None, Some(perms)) => {
                let zero_based = perms
                    .iter()
                    .map(|p| {
                        p.iter()
                            .map(|&x| {
                                x.checked_sub(1).ok_or_else(|| {
                                    Error::Format("permutation images are 1-based".into())
                                })
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                FiniteGroup::from_permutations(&zero_based)?
            }
            _ => {
                return Err(Error::Format(
                    "a group needs exactly one of \"table\" or \"permutations\"".into(),
                ))
            }
        };
        match &self.names {
            Some(names) if names.len() != g.order() => Err(Error::Format(format!(
                "{} names given for a group of order {}",
                names.len(),
                g.order()
            ))),
            Some(names) => Ok(g.with_names(names.clone())),
            None => Ok(g),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchedPairDoc {
    #[serde(rename = "G")]
    pub g: GroupDoc,
    #[serde(rename = "Gamma")]
    pub gamma: GroupDoc,
    pub lact: Vec<Vec<usize>>,
    pub ract: Vec<Vec<usize>>,
}

impl MatchedPairDoc {
    pub fn from_pair(mp: &MatchedPair) -> Self {
        MatchedPairDoc {
            g: GroupDoc::from_group(mp.g()),
            gamma: GroupDoc::from_group(mp.gamma()),
            lact: mp.lact_table().to_vec(),
            ract: mp.ract_table().to_vec(),
        }
    }

    pub fn to_pair(&self) -> Result<MatchedPair> {
        MatchedPair::new(
            self.g.to_group()?,
            self.gamma.to_group()?,
            self.lact.clone(),
            self.ract.clone(),
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FusionRingDoc {
    pub rank: usize,
    pub unit: usize,
    pub dual: Vec<usize>,
    #[serde(rename = "N")]
    pub n: Vec<[usize; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl FusionRingDoc {
    pub fn from_ring(r: &FusionRing) -> Self {
        FusionRingDoc {
            rank: r.rank(),
            unit: r.unit(),
            dual: r.duals().to_vec(),
            n: r
                .triples()
                .into_iter()
                .map(|(a, b, c, m)| [a, b, c, m as usize])
                .collect(),
            labels: Some(r.labels().to_vec()),
        }
    }

    pub fn to_ring(&self) -> Result<FusionRing> {
        let triples = self
            .n
            .iter()
            .map(|&[a, b, c, m]| {
                u32::try_from(m)
                    .map(|m| (a, b, c, m))
                    .map_err(|_| Error::Format(format!("multiplicity {m} too large")))
            })
            .collect::<Result<Vec<_>>>()?;
        let ring = FusionRing::from_triples(self.rank, self.unit, self.dual.clone(), &triples)?;
        match &self.labels {
            Some(l) if l.len() != self.rank => {
                Err(Error::Format("one label per basis element expected".into()))
            }
            Some(l) => Ok(ring.with_labels(l.clone())),
            None => Ok(ring),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradingDoc {
    pub group: GroupDoc,
    pub deg: Vec<usize>,
}

impl GradingDoc {
    pub fn from_grading(g: &Grading) -> Self {
        GradingDoc {
            group: GroupDoc::from_group(&g.group),
            deg: g.deg.clone(),
        }
    }

    pub fn to_grading(&self) -> Result<Grading> {
        let group = self.group.to_group()?;
        if self.deg.iter().any(|&x| x >= group.order()) {
            return Err(Error::Format("degree out of range".into()));
        }
        Ok(Grading::new(group, self.deg.clone()))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossedActionDoc {
    pub ring: FusionRingDoc,
    pub matched_pair: MatchedPairDoc,
    pub grading: GradingDoc,
    pub act: Vec<Vec<usize>>,
}

impl CrossedActionDoc {
    pub fn from_data(d: &CrossedActionData) -> Self {
        CrossedActionDoc {
            ring: FusionRingDoc::from_ring(&d.ring),
            matched_pair: MatchedPairDoc::from_pair(&d.mp),
            grading: GradingDoc::from_grading(&d.grading),
            act: d.act.clone(),
        }
    }

    pub fn to_data(&self) -> Result<CrossedActionData> {
        CrossedActionData::new(
            self.ring.to_ring()?,
            self.matched_pair.to_pair()?,
            self.grading.to_grading()?,
            self.act.clone(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivariantSimpleDoc {
    pub orbit: Vec<usize>,
    pub dim: usize,
    pub fp: f64,
}

impl From<&EquivariantSimple> for EquivariantSimpleDoc {
    fn from(s: &EquivariantSimple) -> Self {
        EquivariantSimpleDoc {
            orbit: s.orbit.clone(),
            dim: s.dim,
            fp: s.fp,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualSimpleDoc {
    pub representative: usize,
    pub dim: usize,
}

impl From<&DualSimple> for DualSimpleDoc {
    fn from(s: &DualSimple) -> Self {
        DualSimpleDoc {
            representative: s.representative,
            dim: s.dim,
        }
    }
}

fn read(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

pub fn parse_group(text: &str) -> Result<FiniteGroup> {
    serde_json::from_str::<GroupDoc>(text)?.to_group()
}

pub fn parse_matched_pair(text: &str) -> Result<MatchedPair> {
    serde_json::from_str::<MatchedPairDoc>(text)?.to_pair()
}

pub fn parse_fusion_ring(text: &str) -> Result<FusionRing> {
    serde_json::from_str::<FusionRingDoc>(text)?.to_ring()
}

pub fn parse_crossed_action(text: &str) -> Result<CrossedActionData> {
    serde_json::from_str::<CrossedActionDoc>(text)?.to_data()
}

pub fn load_group(path: &Path) -> Result<FiniteGroup> {
    parse_group(&read(path)?)
}

pub fn load_matched_pair(path: &Path) -> Result<MatchedPair> {
    parse_matched_pair(&read(path)?)
}

pub fn load_fusion_ring(path: &Path) -> Result<FusionRing> {
    parse_fusion_ring(&read(path)?)
}

pub fn load_crossed_action(path: &Path) -> Result<CrossedActionData> {
    parse_crossed_action(&read(path)?)
}

pub fn group_json(g: &FiniteGroup) -> serde_json::Value {
    serde_json::to_value(GroupDoc::from_group(g)).expect("serializable")
}

pub fn matched_pair_json(mp: &MatchedPair) -> serde_json::Value {
    serde_json::to_value(MatchedPairDoc::from_pair(mp)).expect("serializable")
}

pub fn fusion_ring_json(r: &FusionRing) -> serde_json::Value {
    serde_json::to_value(FusionRingDoc::from_ring(r)).expect("serializable")
}

pub fn crossed_action_json(d: &CrossedActionData) -> serde_json::Value {
    serde_json::to_value(CrossedActionDoc::from_data(d)).expect("serializable")
}
