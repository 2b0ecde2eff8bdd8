//! JSON file formats: menus, models, preference relations, and the
//! emitted representation.
//!
//! Maps serialize as `BTreeMap` and every number is a reduced fraction
//! string, so identical inputs produce byte-identical files.

use crate::actions::{parse_action, Menu};
use crate::axioms::AxiomReport;
use crate::logic::{parse_formula, Formula, Signature};
use crate::models::{BasicModel, SelectionModel, WellOrderFamily};
use crate::preferences::{
    generate_preferences, Partition, PreferenceRelation, SEURepresentation,
};
use crate::rat::{rat_from_str, rat_to_string, Rat};
use crate::representation::Synthesis;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    File(#[from] std::io::Error),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl IoError {
    pub fn invalid(msg: impl Into<String>) -> IoError {
        IoError::Invalid(msg.into())
    }
}

fn invalid<E: std::fmt::Display>(e: E) -> IoError {
    IoError::Invalid(e.to_string())
}

/// `{"props": [...], "formulas": ["formula", ...]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MenuFile {
    pub props: Vec<String>,
    pub formulas: Vec<String>,
}

impl MenuFile {
    pub fn load(&self) -> Result<(Signature, Menu), IoError> {
        let sig = Signature::new(self.props.clone()).map_err(invalid)?;
        let formulas = self
            .formulas
            .iter()
            .map(|t| parse_formula(t, &sig))
            .collect::<Result<Vec<_>, _>>()
            .map_err(invalid)?;
        let menu = Menu::new(&sig, formulas).map_err(invalid)?;
        Ok((sig, menu))
    }

    pub fn from_menu(menu: &Menu) -> MenuFile {
        MenuFile {
            props: menu.sig().props().to_vec(),
            formulas: menu
                .formulas()
                .iter()
                .map(|f| f.display(menu.sig()).to_string())
                .collect(),
        }
    }
}

/// Model file: states, valuation, per-state orders, menu, and
/// optionally a probability measure and utility for scoring.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFile {
    pub props: Vec<String>,
    pub states: Vec<String>,
    pub valuation: BTreeMap<String, Vec<String>>,
    pub orders: BTreeMap<String, Vec<String>>,
    pub menu: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<BTreeMap<String, String>>,
}

/// A loaded model file: the induced selection model plus optional
/// probability/utility vectors in state order.
pub struct LoadedModel {
    pub sm: SelectionModel,
    pub pi: Option<Vec<Rat>>,
    pub u: Option<Vec<Rat>>,
}

impl ModelFile {
    pub fn load(&self) -> Result<LoadedModel, IoError> {
        let sig = Signature::new(self.props.clone()).map_err(invalid)?;
        if self.states.is_empty() {
            return Err(IoError::invalid("model has no states"));
        }
        let mut index: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, name) in self.states.iter().enumerate() {
            if index.insert(name.as_str(), i).is_some() {
                return Err(IoError::invalid(format!("duplicate state id {name:?}")));
            }
        }
        // Valuation keys must be exactly the signature.
        for p in sig.props() {
            if !self.valuation.contains_key(p) {
                return Err(IoError::invalid(format!("valuation missing prop {p:?}")));
            }
        }
        for key in self.valuation.keys() {
            if sig.index_of(key).is_none() {
                return Err(IoError::invalid(format!("valuation names unknown prop {key:?}")));
            }
        }
        let mut atoms = vec![0u16; self.states.len()];
        for (prop, members) in &self.valuation {
            let bit = 1u16 << sig.index_of(prop).unwrap();
            for state in members {
                let idx = index
                    .get(state.as_str())
                    .ok_or_else(|| IoError::invalid(format!("valuation names unknown state {state:?}")))?;
                atoms[*idx] |= bit;
            }
        }
        let model = BasicModel::from_atoms(
            &sig,
            self.states.clone(),
            atoms.into_iter().map(crate::logic::Atom).collect(),
        )
        .map_err(invalid)?;

        let menu_formulas = self
            .menu
            .iter()
            .map(|t| parse_formula(t, &sig))
            .collect::<Result<Vec<_>, _>>()
            .map_err(invalid)?;
        let menu = Menu::new(&sig, menu_formulas).map_err(invalid)?;

        let mut orders = Vec::with_capacity(self.states.len());
        for name in &self.states {
            let ranked = self
                .orders
                .get(name)
                .ok_or_else(|| IoError::invalid(format!("missing order for state {name:?}")))?;
            let order = ranked
                .iter()
                .map(|s| {
                    index
                        .get(s.as_str())
                        .copied()
                        .ok_or_else(|| IoError::invalid(format!("order names unknown state {s:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            orders.push(order);
        }
        let family = WellOrderFamily::new(&model, orders).map_err(invalid)?;
        let sm = SelectionModel::induce(model, menu, family).map_err(invalid)?;

        let read_vec = |table: &Option<BTreeMap<String, String>>| -> Result<Option<Vec<Rat>>, IoError> {
            match table {
                None => Ok(None),
                Some(map) => {
                    let mut out = vec![Rat::from_integer(0.into()); self.states.len()];
                    for (state, value) in map {
                        let idx = index
                            .get(state.as_str())
                            .ok_or_else(|| IoError::invalid(format!("unknown state {state:?}")))?;
                        out[*idx] = rat_from_str(value).map_err(IoError::Invalid)?;
                    }
                    if map.len() != self.states.len() {
                        return Err(IoError::invalid("pi/u must cover every state"));
                    }
                    Ok(Some(out))
                }
            }
        };
        let pi = read_vec(&self.pi)?;
        let u = read_vec(&self.u)?;
        Ok(LoadedModel { sm, pi, u })
    }

    pub fn from_parts(sm: &SelectionModel, pi: Option<&[Rat]>, u: Option<&[Rat]>) -> ModelFile {
        let model = sm.model();
        let sig = model.sig();
        let mut valuation: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (i, prop) in sig.props().iter().enumerate() {
            let members = (0..model.num_states())
                .filter(|w| model.state_atom(*w).contains(i))
                .map(|w| model.state_name(w).to_string())
                .collect();
            valuation.insert(prop.clone(), members);
        }
        let orders = sm
            .family()
            .map(|family| {
                (0..model.num_states())
                    .map(|w| {
                        (
                            model.state_name(w).to_string(),
                            family
                                .order(w)
                                .iter()
                                .map(|s| model.state_name(*s).to_string())
                                .collect(),
                        )
                    })
                    .collect()
            })
            .unwrap_or_default();
        let to_map = |values: Option<&[Rat]>| {
            values.map(|vs| {
                vs.iter()
                    .enumerate()
                    .map(|(w, v)| (model.state_name(w).to_string(), rat_to_string(v)))
                    .collect()
            })
        };
        ModelFile {
            props: sig.props().to_vec(),
            states: model.state_names().to_vec(),
            valuation,
            orders,
            menu: sm
                .menu()
                .formulas()
                .iter()
                .map(|f| f.display(sig).to_string())
                .collect(),
            pi: to_map(pi),
            u: to_map(u),
        }
    }
}

/// Preference file. Partition form lists classes of action strings,
/// best class first, every table not listed falling into an implicit
/// bottom class. Scored form embeds a model with `pi` and `u` and
/// scores acts by expected utility.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrefsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub props: Option<Vec<String>>,
    pub menu: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelFile>,
}

impl PrefsFile {
    /// Resolve against an optional externally supplied menu (from
    /// `--menu`); the file's own menu must agree when both exist.
    pub fn load(&self, external: Option<(Signature, Menu)>) -> Result<(Signature, Menu, PreferenceRelation), IoError> {
        let (sig, menu) = match external {
            Some((sig, menu)) => (sig, menu),
            None => {
                let props = self
                    .props
                    .clone()
                    .or_else(|| self.model.as_ref().map(|m| m.props.clone()))
                    .ok_or_else(|| IoError::invalid("preference file needs props or an external menu"))?;
                let sig = Signature::new(props).map_err(invalid)?;
                let formulas = self
                    .menu
                    .iter()
                    .map(|t| parse_formula(t, &sig))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(invalid)?;
                let menu = Menu::new(&sig, formulas).map_err(invalid)?;
                (sig, menu)
            }
        };
        // When the file carries its own menu alongside an external one,
        // they must match member for member.
        let own: Vec<Formula> = self
            .menu
            .iter()
            .map(|t| parse_formula(t, &sig))
            .collect::<Result<Vec<_>, _>>()
            .map_err(invalid)?;
        if own != menu.formulas() {
            return Err(IoError::invalid("preference menu differs from the supplied menu"));
        }

        let pr = match (&self.classes, &self.model) {
            (Some(classes), None) => {
                let compiled = classes
                    .iter()
                    .map(|class| {
                        class
                            .iter()
                            .map(|text| {
                                parse_action(text, &sig)
                                    .map_err(invalid)
                                    .and_then(|a| a.compile(&menu).map_err(invalid))
                            })
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                PreferenceRelation::Partition(Partition::new(compiled).map_err(invalid)?)
            }
            (None, Some(model_file)) => {
                let loaded = model_file.load()?;
                if loaded.sm.menu() != &menu {
                    return Err(IoError::invalid("embedded model menu differs from the preference menu"));
                }
                let pi = loaded
                    .pi
                    .ok_or_else(|| IoError::invalid("scored preferences need pi in the model"))?;
                let u = loaded
                    .u
                    .ok_or_else(|| IoError::invalid("scored preferences need u in the model"))?;
                let rep = SEURepresentation::new(loaded.sm, pi, u).map_err(invalid)?;
                generate_preferences(&rep, &menu).map_err(invalid)?
            }
            _ => {
                return Err(IoError::invalid(
                    "preference file needs exactly one of classes or model",
                ))
            }
        };
        Ok((sig, menu, pr))
    }
}

/// Synthesized representation on disk: paired states, orders, exact
/// probability and utility, plus a provenance block.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepresentationFile {
    pub props: Vec<String>,
    pub menu: Vec<String>,
    /// Atom-pair states as [current, previous] set labels.
    pub states: Vec<[String; 2]>,
    pub orders: BTreeMap<String, Vec<String>>,
    pub pi: BTreeMap<String, String>,
    pub u: BTreeMap<String, String>,
    pub provenance: ProvenanceBlock,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProvenanceBlock {
    pub seed: Option<u64>,
    pub menu: Vec<String>,
    pub axioms: serde_json::Value,
    pub verified_pairs: u64,
    pub verification_exhaustive: bool,
    pub disagreements: u64,
}

pub fn representation_file(
    synthesis: &Synthesis,
    seed: Option<u64>,
    verified_pairs: u64,
    verification_exhaustive: bool,
) -> RepresentationFile {
    let rep = &synthesis.representation;
    let sm = rep.selection_model();
    let model = sm.model();
    let sig = model.sig();
    let atoms = sig.atom_count();
    let states: Vec<[String; 2]> = (0..model.num_states())
        .map(|w| {
            let current = crate::logic::Atom((w / atoms) as u16);
            let previous = crate::logic::Atom((w % atoms) as u16);
            [current.label(sig), previous.label(sig)]
        })
        .collect();
    let family = sm.family().expect("built representations are induced");
    let orders = (0..model.num_states())
        .map(|w| {
            (
                model.state_name(w).to_string(),
                family
                    .order(w)
                    .iter()
                    .map(|s| model.state_name(*s).to_string())
                    .collect(),
            )
        })
        .collect();
    let menu_strings: Vec<String> = sm
        .menu()
        .formulas()
        .iter()
        .map(|f| f.display(sig).to_string())
        .collect();
    RepresentationFile {
        props: sig.props().to_vec(),
        menu: menu_strings.clone(),
        states,
        orders,
        pi: (0..model.num_states())
            .map(|w| (model.state_name(w).to_string(), rat_to_string(&rep.pi()[w])))
            .collect(),
        u: (0..model.num_states())
            .map(|w| (model.state_name(w).to_string(), rat_to_string(&rep.u()[w])))
            .collect(),
        provenance: ProvenanceBlock {
            seed,
            menu: menu_strings,
            axioms: serde_json::to_value(&synthesis.axiom_reports).unwrap_or_default(),
            verified_pairs,
            verification_exhaustive,
            disagreements: 0,
        },
    }
}

/// Aggregated output of `check-axioms`.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomRunFile {
    pub seed: u64,
    pub canc_max_n: u32,
    pub canc_budget: u64,
    pub reports: Vec<AxiomReport>,
    pub all_pass: bool,
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &std::path::Path) -> Result<T, IoError> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json<T: Serialize>(path: &std::path::Path, value: &T) -> Result<(), IoError> {
    std::fs::write(path, to_json_string(value)?)?;
    Ok(())
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String, IoError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Atom;
    use crate::rat::rat;

    fn canonical_fixture() -> (Signature, Menu, SelectionModel) {
        let sig = Signature::new(["p"]).unwrap();
        let model = BasicModel::canonical(&sig);
        let menu = Menu::rich(&sig);
        let family = WellOrderFamily::new(&model, vec![vec![0, 1], vec![1, 0]]).unwrap();
        let sm = SelectionModel::induce(model, menu.clone(), family).unwrap();
        (sig, menu, sm)
    }

    #[test]
    fn model_file_roundtrip() {
        let (_, _, sm) = canonical_fixture();
        let pi = vec![rat(1, 2), rat(1, 2)];
        let u = vec![rat(-3, 1), rat(7, 2)];
        let file = ModelFile::from_parts(&sm, Some(&pi), Some(&u));
        let text = to_json_string(&file).unwrap();
        let parsed: ModelFile = serde_json::from_str(&text).unwrap();
        let loaded = parsed.load().unwrap();
        assert_eq!(loaded.sm.model().state_names(), sm.model().state_names());
        assert_eq!(loaded.sm.menu(), sm.menu());
        for w in 0..2 {
            for j in 0..sm.menu().len() {
                assert_eq!(loaded.sm.select(w, j), sm.select(w, j));
            }
        }
        assert_eq!(loaded.pi.unwrap(), pi);
        assert_eq!(loaded.u.unwrap(), u);
    }

    #[test]
    fn model_file_validation_errors() {
        let (_, _, sm) = canonical_fixture();
        let mut file = ModelFile::from_parts(&sm, None, None);
        file.valuation.remove("p");
        assert!(matches!(file.load(), Err(IoError::Invalid(_))));

        let mut file2 = ModelFile::from_parts(&sm, None, None);
        file2.orders.remove("{}");
        assert!(matches!(file2.load(), Err(IoError::Invalid(_))));

        let mut file3 = ModelFile::from_parts(&sm, None, None);
        file3.menu.push("nope".to_string());
        assert!(matches!(file3.load(), Err(IoError::Invalid(_))));
    }

    #[test]
    fn prefs_file_partition_form() {
        let (_, menu, _) = canonical_fixture();
        let file = PrefsFile {
            props: Some(vec!["p".into()]),
            menu: MenuFile::from_menu(&menu).formulas,
            classes: Some(vec![vec!["do(p)".into()], vec!["do(true)".into()]]),
            model: None,
        };
        let (_, loaded_menu, pr) = file.load(None).unwrap();
        let better = parse_action("do(p)", loaded_menu.sig())
            .unwrap()
            .compile(&loaded_menu)
            .unwrap();
        let worse = parse_action("do(true)", loaded_menu.sig())
            .unwrap()
            .compile(&loaded_menu)
            .unwrap();
        assert_eq!(pr.compare_compiled(&better, &worse), std::cmp::Ordering::Greater);
    }

    #[test]
    fn prefs_file_scored_form() {
        let (_, menu, sm) = canonical_fixture();
        let pi = vec![rat(1, 2), rat(1, 2)];
        let u = vec![rat(0, 1), rat(1, 1)];
        let file = PrefsFile {
            props: None,
            menu: MenuFile::from_menu(&menu).formulas,
            classes: None,
            model: Some(ModelFile::from_parts(&sm, Some(&pi), Some(&u))),
        };
        let (sig, loaded_menu, pr) = file.load(None).unwrap();
        // Centered orders with u({p}) = 1: do(p) scores 1, do(true) 1/2.
        let a = parse_action("do(p)", &sig).unwrap().compile(&loaded_menu).unwrap();
        let b = parse_action("do(true)", &sig).unwrap().compile(&loaded_menu).unwrap();
        assert_eq!(pr.compare_compiled(&a, &b), std::cmp::Ordering::Greater);
        assert!(pr.closeness(&loaded_menu, Atom(0), Atom(0), Atom(1)).unwrap());
        assert!(!pr.closeness(&loaded_menu, Atom(0), Atom(1), Atom(0)).unwrap());
    }

    #[test]
    fn prefs_file_requires_one_form() {
        let (_, menu, _) = canonical_fixture();
        let file = PrefsFile {
            props: Some(vec!["p".into()]),
            menu: MenuFile::from_menu(&menu).formulas,
            classes: None,
            model: None,
        };
        assert!(matches!(file.load(None), Err(IoError::Invalid(_))));
    }

    #[test]
    fn menu_file_missing_true_is_invalid() {
        let file = MenuFile {
            props: vec!["p".into()],
            formulas: vec!["p".into()],
        };
        assert!(matches!(file.load(), Err(IoError::Invalid(_))));
    }
}
