//! JSON input documents: named groups, modules, extensions, one arithmetic
//! model and a task list.
//!
//! ```json
//! {
//!   "groups": {"G": {"table": [[0, 1], [1, 0]]}, "S": {"permutations": [[1, 2, 0], [1, 0, 2]]}},
//!   "modules": {"M": {"group": "G", "factors": [4], "action": {"1": [[3]]}}},
//!   "extensions": {"E": {"gamma": "S", "base": "G", "kernel": "K", "pi": [...], "iota": [...]}},
//!   "model": {"group": "G", "mu": {"modulus": 2}, "places": [{"subgroup": [0, 1], "inv": ["1/2"]}]},
//!   "tasks": [{"command": "cohomology", "module": "M", "degree": 2}]
//! }
//! ```
//!
//! Omitted action entries are the identity. `mu` is either the name of a
//! module or `{"modulus": m, "character": [...]}` (trivial without a
//! character). A group may also be given as `{"named": "S3"}`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::{ArithmeticModel, Place};
use crate::error::{Error, Result};
use crate::gerbe::GerbeExtension;
use crate::group::{named, FiniteGroup, GroupHom, Permutation, Subgroup, DEFAULT_MAX_ORDER};
use crate::zmodule::{FinAb, GModule, QmodZ};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Table(Vec<Vec<usize>>),
    /// generators as image lists
    Permutations(Vec<Vec<usize>>),
    Named(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub group: String,
    pub factors: Vec<u64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub action: BTreeMap<String, Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionSpec {
    pub gamma: String,
    pub base: String,
    pub kernel: String,
    pub pi: Vec<usize>,
    pub iota: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MuSpec {
    Module(String),
    Cyclic {
        modulus: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        character: Option<Vec<u64>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub subgroup: Vec<usize>,
    #[serde(default)]
    pub inv: Vec<QmodZ>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub group: String,
    pub mu: MuSpec,
    pub places: Vec<PlaceSpec>,
    #[serde(default)]
    pub chebotarev_complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
}

/// The document as written, before resolution.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DocumentSpec {
    #[serde(default)]
    pub groups: BTreeMap<String, GroupSpec>,
    #[serde(default)]
    pub modules: BTreeMap<String, ModuleSpec>,
    #[serde(default)]
    pub extensions: BTreeMap<String, ExtensionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tasks: Vec<TaskSpec>,
}

impl DocumentSpec {
    pub fn from_json(text: &str) -> Result<DocumentSpec> {
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
    }

    /// Pretty JSON with sorted keys.
    pub fn to_json(&self) -> String {
        canonical_json(self)
    }

    pub fn add_group(&mut self, name: &str, g: &FiniteGroup) {
        self.groups.insert(name.into(), GroupSpec::Table(g.table_rows()));
    }

    /// Records only the non-identity matrices.
    pub fn add_module(&mut self, name: &str, group: &str, m: &GModule) {
        let r = m.rank();
        let mut action = BTreeMap::new();
        for g in m.group().elements() {
            let rows = m.matrix_rows(g);
            let identity = (0..r).all(|i| (0..r).all(|j| rows[i][j] == (i == j) as i64));
            if !identity {
                action.insert(g.to_string(), rows);
            }
        }
        self.modules.insert(name.into(), ModuleSpec { group: group.into(), factors: m.carrier().factors().to_vec(), action });
    }

    /// Adds `Γ`, `G` and `H` as `<name>.gamma`, `<name>.base` and
    /// `<name>.kernel` unless `base` names an existing group.
    pub fn add_extension(&mut self, name: &str, base: Option<&str>, ext: &GerbeExtension) {
        let gamma = format!("{name}.gamma");
        let kernel = format!("{name}.kernel");
        let base = match base {
            Some(b) => b.to_string(),
            None => {
                let b = format!("{name}.base");
                self.add_group(&b, ext.base());
                b
            }
        };
        self.add_group(&gamma, ext.gamma());
        self.add_group(&kernel, ext.kernel());
        self.extensions.insert(
            name.into(),
            ExtensionSpec { gamma, base, kernel, pi: ext.pi().images().to_vec(), iota: ext.iota().images().to_vec() },
        );
    }

    pub fn set_model(&mut self, group: &str, model: &ArithmeticModel) {
        let mu = model.mu();
        let m = model.modulus();
        let character = if mu.is_trivial_action() {
            None
        } else {
            Some(model.group().elements().map(|g| mu.matrix(g)[0].rem_euclid(m as i64) as u64).collect())
        };
        let places = model
            .places()
            .iter()
            .map(|p| PlaceSpec { name: Some(p.name().into()), subgroup: p.subgroup().elements().to_vec(), inv: p.inv().to_vec() })
            .collect();
        self.model = Some(ModelSpec {
            group: group.into(),
            mu: MuSpec::Cyclic { modulus: m, character },
            places,
            chebotarev_complete: model.chebotarev_complete(),
        });
    }
}

/// Serializes through `serde_json::Value`, whose maps keep keys sorted.
pub fn canonical_json<T: Serialize + ?Sized>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable value");
    serde_json::to_string_pretty(&v).expect("serializable value")
}

/// A resolved document; every entity has passed its constructor.
#[derive(Clone, Debug)]
pub struct Document {
    pub spec: DocumentSpec,
    pub groups: BTreeMap<String, Arc<FiniteGroup>>,
    pub modules: BTreeMap<String, Arc<GModule>>,
    pub extensions: BTreeMap<String, GerbeExtension>,
    pub model: Option<ArithmeticModel>,
}

impl Document {
    pub fn parse(text: &str) -> Result<Document> {
        Self::parse_bounded(text, DEFAULT_MAX_ORDER)
    }

    /// `max_order` bounds permutation closures.
    pub fn parse_bounded(text: &str, max_order: usize) -> Result<Document> {
        Self::resolve(DocumentSpec::from_json(text)?, max_order)
    }

    pub fn resolve(spec: DocumentSpec, max_order: usize) -> Result<Document> {
        let mut groups = BTreeMap::new();
        for (name, g) in &spec.groups {
            let group = resolve_group(g, max_order).map_err(|e| in_entity("group", name, e))?;
            if group.order() > max_order {
                return Err(Error::SizeBound { order: group.order(), bound: max_order });
            }
            groups.insert(name.clone(), Arc::new(group));
        }
        let lookup_group = |name: &str| -> Result<Arc<FiniteGroup>> {
            groups.get(name).cloned().ok_or_else(|| Error::Document(format!("unknown group '{name}'")))
        };

        let mut modules = BTreeMap::new();
        for (name, m) in &spec.modules {
            let g = lookup_group(&m.group)?;
            let module = resolve_module(g, m).map_err(|e| in_entity("module", name, e))?;
            modules.insert(name.clone(), Arc::new(module));
        }

        let mut extensions = BTreeMap::new();
        for (name, e) in &spec.extensions {
            let gamma = lookup_group(&e.gamma)?;
            let base = lookup_group(&e.base)?;
            let kernel = lookup_group(&e.kernel)?;
            let ext = GroupHom::new(gamma.clone(), base, e.pi.clone())
                .and_then(|pi| Ok((pi, GroupHom::new(kernel, gamma, e.iota.clone())?)))
                .and_then(|(pi, iota)| GerbeExtension::new(pi, iota))
                .map_err(|err| in_entity("extension", name, err))?;
            extensions.insert(name.clone(), ext);
        }

        let model = match &spec.model {
            None => None,
            Some(m) => {
                let g = lookup_group(&m.group)?;
                let mu = match &m.mu {
                    MuSpec::Module(name) => {
                        let mu = modules.get(name).cloned().ok_or_else(|| Error::Document(format!("unknown module '{name}'")))?;
                        if !mu.group().same_table(&g) {
                            return Err(Error::Document(format!("module '{name}' is not over group '{}'", m.group)));
                        }
                        mu
                    }
                    MuSpec::Cyclic { modulus, character } => Arc::new(match character {
                        None => GModule::trivial(g.clone(), FinAb::cyclic(*modulus)),
                        Some(c) => GModule::cyclic_with_character(g.clone(), *modulus, c)?,
                    }),
                };
                let places = m
                    .places
                    .iter()
                    .enumerate()
                    .map(|(i, p)| {
                        let name = p.name.clone().unwrap_or_else(|| format!("v{i}"));
                        let sub = Subgroup::new(g.clone(), p.subgroup.clone()).map_err(|e| in_entity("place", &name, e))?;
                        Ok(Place::new(name, sub, p.inv.clone()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Some(ArithmeticModel::new(g, mu, places, m.chebotarev_complete)?)
            }
        };

        Ok(Document { spec, groups, modules, extensions, model })
    }

    /// The resolved entities written back out: every group as a table,
    /// every module by its matrices, `μ` by modulus and character.
    pub fn dump(&self) -> DocumentSpec {
        let mut out = DocumentSpec::default();
        for (name, g) in &self.groups {
            out.add_group(name, g);
        }
        for (name, m) in &self.modules {
            out.add_module(name, &self.spec.modules[name].group, m);
        }
        for (name, e) in &self.extensions {
            let s = &self.spec.extensions[name];
            out.extensions.insert(
                name.clone(),
                ExtensionSpec { pi: e.pi().images().to_vec(), iota: e.iota().images().to_vec(), ..s.clone() },
            );
        }
        if let (Some(model), Some(spec)) = (&self.model, &self.spec.model) {
            out.set_model(&spec.group, model);
        }
        out.tasks = self.spec.tasks.clone();
        out
    }

    pub fn group(&self, name: Option<&str>) -> Result<(&str, &Arc<FiniteGroup>)> {
        select("group", &self.groups, name)
    }

    pub fn module(&self, name: Option<&str>) -> Result<(&str, &Arc<GModule>)> {
        select("module", &self.modules, name)
    }

    pub fn extension(&self, name: Option<&str>) -> Result<(&str, &GerbeExtension)> {
        select("extension", &self.extensions, name)
    }

    pub fn require_model(&self) -> Result<&ArithmeticModel> {
        self.model.as_ref().ok_or_else(|| Error::Document("document has no model".into()))
    }
}

/// With no name, the unique entity of that kind.
fn select<'a, T>(kind: &str, map: &'a BTreeMap<String, T>, name: Option<&str>) -> Result<(&'a str, &'a T)> {
    match name {
        Some(n) => map
            .get_key_value(n)
            .map(|(k, v)| (k.as_str(), v))
            .ok_or_else(|| Error::Document(format!("unknown {kind} '{n}'"))),
        None if map.len() == 1 => {
            let (k, v) = map.iter().next().unwrap();
            Ok((k.as_str(), v))
        }
        None => Err(Error::Document(format!("document has {} {kind}s; select one by name", map.len()))),
    }
}

fn in_entity(kind: &str, name: &str, e: Error) -> Error {
    match e {
        Error::Document(msg) => Error::Document(format!("{kind} '{name}': {msg}")),
        other => other,
    }
}

fn resolve_group(g: &GroupSpec, max_order: usize) -> Result<FiniteGroup> {
    match g {
        GroupSpec::Table(rows) => FiniteGroup::from_table(rows.clone()),
        GroupSpec::Permutations(gens) => {
            let perms = gens.iter().map(|p| Permutation::from_images(p.clone())).collect::<Result<Vec<_>>>()?;
            FiniteGroup::from_permutations(&perms, max_order)
        }
        GroupSpec::Named(n) => named::by_name(n).ok_or_else(|| Error::Document(format!("unknown group name '{n}'"))),
    }
}

fn resolve_module(g: Arc<FiniteGroup>, m: &ModuleSpec) -> Result<GModule> {
    let carrier = FinAb::new(m.factors.clone())?;
    let mut action: Vec<Option<Vec<Vec<i64>>>> = vec![None; g.order()];
    for (key, matrix) in &m.action {
        let idx: usize = key.parse().map_err(|_| Error::Document(format!("action key '{key}' is not an element index")))?;
        if idx >= g.order() {
            return Err(Error::Document(format!("action key {idx} is outside a group of order {}", g.order())));
        }
        action[idx] = Some(matrix.clone());
    }
    GModule::new(g, carrier, action)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_selects() {
        let doc = Document::parse(
            r#"{"groups": {"G": {"table": [[0, 1], [1, 0]]}},
                "modules": {"M": {"group": "G", "factors": [2]}},
                "model": {"group": "G", "mu": "M", "places": [{"subgroup": [0, 1], "inv": ["1/2"]}]}}"#,
        )
        .unwrap();
        let (name, m) = doc.module(None).unwrap();
        assert_eq!(name, "M");
        assert!(m.is_trivial_action());
        let model = doc.require_model().unwrap();
        assert_eq!(model.places()[0].name(), "v0");
        assert!(matches!(doc.module(Some("N")), Err(Error::Document(_))));
    }

    #[test]
    fn permutation_groups_and_named_groups() {
        let doc = Document::parse(r#"{"groups": {"S": {"permutations": [[1, 2, 0], [1, 0, 2]]}, "Q": {"named": "Q8"}}}"#).unwrap();
        assert_eq!(doc.groups["S"].order(), 6);
        assert_eq!(doc.groups["Q"].order(), 8);
        assert!(doc.group(None).is_err());
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = Document::parse("{\n  \"groups\": {\"G\": {\"table\": [[0, 1], [1, 0]]}\n").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        let err = Document::parse(r#"{"modules": {"M": {"group": "X", "factors": [2]}}}"#).unwrap_err();
        assert!(err.to_string().contains("unknown group 'X'"));
        let err = Document::parse(r#"{"groups": {"G": {"tabel": [[0]]}}}"#).unwrap_err();
        assert!(err.to_string().contains("column"), "{err}");
    }

    #[test]
    fn action_with_a_bad_key_is_rejected() {
        let err = Document::parse(
            r#"{"groups": {"G": {"table": [[0, 1], [1, 0]]}}, "modules": {"M": {"group": "G", "factors": [4], "action": {"2": [[3]]}}}}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Document(_)));
    }

    #[test]
    fn dump_round_trips() {
        let g = Arc::new(named::symmetric(3));
        let z2 = Arc::new(named::cyclic(2));
        let sign: Vec<Vec<usize>> = {
            let a = crate::group::abelianization(&g);
            vec![(0..g.order()).map(|x| a.project(x)[0] as usize).collect()]
        };
        let pi = GroupHom::new(g.clone(), z2.clone(), sign[0].clone()).unwrap();
        let a3 = g.derived_subgroup();
        let k = Arc::new(named::cyclic(3));
        let r = a3[1];
        let iota = GroupHom::new(k, g.clone(), (0..3).map(|i| g.pow(r, i)).collect()).unwrap();
        let ext = GerbeExtension::new(pi, iota).unwrap();
        let mut spec = DocumentSpec::default();
        spec.add_extension("E", None, &ext);
        let m = GModule::cyclic_with_character(z2, 4, &[1, 3]).unwrap();
        spec.add_module("M", "E.base", &m);
        let text = spec.to_json();
        let doc = Document::parse(&text).unwrap();
        assert_eq!(doc.spec, spec);
        assert_eq!(doc.to_owned().spec.to_json(), text);
        assert_eq!(*doc.modules["M"], m);
        let (_, back) = doc.extension(None).unwrap();
        assert_eq!(back.pi().images(), ext.pi().images());
    }

    #[test]
    fn dump_turns_permutations_into_tables() {
        let doc = Document::parse(
            r#"{"groups": {"S": {"permutations": [[1, 2, 0], [1, 0, 2]]}},
                "model": {"group": "S", "mu": {"modulus": 2}, "places": [{"subgroup": [0]}]}}"#,
        )
        .unwrap();
        let dumped = doc.dump();
        assert!(matches!(dumped.groups["S"], GroupSpec::Table(_)));
        let again = Document::resolve(dumped.clone(), DEFAULT_MAX_ORDER).unwrap();
        assert!(again.groups["S"].same_table(&doc.groups["S"]));
        assert_eq!(again.dump(), dumped);
    }
}
