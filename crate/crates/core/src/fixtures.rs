//! Built-in gerbes and models used by the self-test, and the frozen records
//! of their results under `fixtures/`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::{cyclic_places, sha, ArithmeticModel, Place};
use crate::cochain::cohomology;
use crate::document::{canonical_json, Document, DocumentSpec};
use crate::error::{Error, Result};
use crate::gerbe::{verify_factorization, BMFunctional, BrauerManin, Choices, GerbeExtension};
use crate::group::{named, FiniteGroup, GroupHom, Subgroup, DEFAULT_MAX_ORDER};
use crate::zmodule::{FinAb, GModule, QmodZ};

pub fn klein() -> Arc<FiniteGroup> {
    Arc::new(named::klein_four())
}

pub fn z4xz2() -> Arc<FiniteGroup> {
    Arc::new(named::cyclic(4).direct_product(&named::cyclic(2)))
}

/// `S_3 × V_4`. Every extension with band `S_3` is of this form.
pub fn s3_band() -> GerbeExtension {
    GerbeExtension::direct_product(Arc::new(named::symmetric(3)), klein())
}

/// `Q_8` over `V_4`: element 1 of `V_4` acts trivially, 2 and 3 swap two
/// generators of `Q_8`, twisted by the class `twist` in `H²(V_4, Z/2)` sent
/// into the center.
pub fn q8_band(twist: &[u64]) -> Result<GerbeExtension> {
    let q = Arc::new(named::quaternion());
    let g = klein();
    let i = 1;
    let j = (1..8).find(|&x| q.element_order(x) == 4 && q.mul(i, x) != q.mul(x, i)).expect("noncommuting pair");
    let swap = GroupHom::from_generators(q.clone(), q.clone(), &[i, j], &[j, i])?;
    let phi: Vec<Vec<usize>> =
        g.elements().map(|x| if x <= 1 { q.elements().collect() } else { swap.images().to_vec() }).collect();
    let f = cohomology(Arc::new(GModule::trivial(g.clone(), FinAb::cyclic(2))), 2)?.cocycle(twist);
    let center = q.derived_subgroup()[1];
    GerbeExtension::twisted_product(q, g, &phi, |x, y| {
        if x != 0 && y != 0 && f.value(&[x, y])[0] == 1 {
            center
        } else {
            0
        }
    })
}

/// Nonsplit, split over `{0}`, `{0,1}` and `{0,3}`.
pub fn q8_twisted() -> GerbeExtension {
    q8_band(&[0, 1, 0]).expect("fixture extension")
}

pub fn q8_split() -> GerbeExtension {
    q8_band(&[0, 0, 0]).expect("fixture extension")
}

const WITNESS_CLASS: [u64; 3] = [1, 1, 0];

fn witness_twist(h: Arc<FiniteGroup>, embed: &[usize]) -> GerbeExtension {
    let g = z4xz2();
    let f = cohomology(Arc::new(GModule::trivial(g.clone(), FinAb::cyclic(2))), 2)
        .expect("cohomology")
        .cocycle(&WITNESS_CLASS);
    GerbeExtension::central_twist(h, g, &f, embed).expect("fixture extension")
}

/// The central extension of `Z/4 × Z/2` by `Z/2` with nonzero `m_H`.
pub fn witness_abelian() -> GerbeExtension {
    witness_twist(Arc::new(named::cyclic(2)), &[0, 1])
}

/// The same twist with kernel `Q_8 × Z/2`, through the `Z/2` factor.
pub fn witness() -> GerbeExtension {
    witness_twist(Arc::new(named::quaternion().direct_product(&named::cyclic(2))), &[0, 1])
}

pub fn witness_split() -> GerbeExtension {
    GerbeExtension::direct_product(Arc::new(named::quaternion().direct_product(&named::cyclic(2))), z4xz2())
}

fn half() -> QmodZ {
    QmodZ::new(1, 2)
}

fn place(g: &Arc<FiniteGroup>, name: &str, elements: &[usize], inv: Vec<QmodZ>) -> Place {
    Place::new(name, Subgroup::new(g.clone(), elements.to_vec()).expect("fixture subgroup"), inv)
}

fn trivial_mu(g: &Arc<FiniteGroup>, m: u64) -> Arc<GModule> {
    Arc::new(GModule::trivial(g.clone(), FinAb::cyclic(m)))
}

/// Models over `V_4` with `μ = Z/2`, by name.
pub fn klein_model(name: &str) -> ArithmeticModel {
    let g = klein();
    let places = match name {
        "lines-01" => vec![place(&g, "v", &[0, 1], vec![half()]), place(&g, "w", &[0, 1], vec![half()])],
        "lines-03" => vec![
            place(&g, "v", &[0, 3], vec![half()]),
            place(&g, "w", &[0, 3], vec![half()]),
            place(&g, "u", &[0], vec![]),
        ],
        "mixed" => vec![place(&g, "u", &[0], vec![]), place(&g, "v", &[0, 3], vec![QmodZ::ZERO])],
        _ => panic!("unknown model {name}"),
    };
    ArithmeticModel::new(g.clone(), trivial_mu(&g, 2), places, false).expect("fixture model")
}

/// Every axiom-valid assignment of invariants at the cyclic places of `V_4`.
pub fn klein_cyclic_models() -> Result<Vec<ArithmeticModel>> {
    let g = klein();
    let mu = trivial_mu(&g, 2);
    let places: Vec<(String, Subgroup)> =
        cyclic_places(&g, &mu)?.into_iter().map(|p| (p.name().to_string(), p.subgroup().clone())).collect();
    crate::arith::search_inv_assignments(&g, &mu, &places, true, crate::arith::DEFAULT_SEARCH_BOUND)
}

/// One place `{0,1,4,5}` of `Z/4 × Z/2` with invariants `(0, 1/2, 0)`.
pub fn witness_model() -> ArithmeticModel {
    let g = z4xz2();
    let places = vec![place(&g, "v", &[0, 1, 4, 5], vec![QmodZ::ZERO, half(), QmodZ::ZERO])];
    ArithmeticModel::new(g.clone(), trivial_mu(&g, 2), places, false).expect("fixture model")
}

/// `Z/2` with a single place carrying invariant `1/2`; violates reciprocity.
pub fn single_place_model() -> ArithmeticModel {
    let g = Arc::new(named::cyclic(2));
    let places = vec![place(&g, "v", &[0, 1], vec![half()])];
    ArithmeticModel::new(g.clone(), trivial_mu(&g, 2), places, false).expect("fixture model")
}

/// `Z/2` with two places `D = G` carrying invariant `1/2`.
pub fn pairing_model() -> ArithmeticModel {
    let g = Arc::new(named::cyclic(2));
    let places = vec![place(&g, "v", &[0, 1], vec![half()]), place(&g, "w", &[0, 1], vec![half()])];
    ArithmeticModel::new(g.clone(), trivial_mu(&g, 2), places, false).expect("fixture model")
}

/// `Z/2 × Z/2` over `Z/2`.
pub fn pairing_extension() -> GerbeExtension {
    GerbeExtension::direct_product(Arc::new(named::cyclic(2)), Arc::new(named::cyclic(2)))
}

/// `Z/8` with `V_4` acting through the units `1, 3, 5, 7`.
pub fn sha_witness_module() -> Arc<GModule> {
    Arc::new(GModule::cyclic_with_character(klein(), 8, &[1, 3, 5, 7]).expect("fixture module"))
}

pub fn sha_witness_model() -> ArithmeticModel {
    let g = klein();
    let mu = trivial_mu(&g, 2);
    ArithmeticModel::new(g.clone(), mu.clone(), cyclic_places(&g, &mu).expect("cyclic places"), true).expect("fixture model")
}

/// A gerbe with the models it is tested on.
pub struct GerbeFixture {
    pub name: &'static str,
    pub extension: GerbeExtension,
    pub split: bool,
    pub models: Vec<(&'static str, ArithmeticModel)>,
}

pub fn gerbe_fixtures() -> Vec<GerbeFixture> {
    vec![
        GerbeFixture {
            name: "s3",
            extension: s3_band(),
            split: true,
            models: vec![("lines-01", klein_model("lines-01")), ("lines-03", klein_model("lines-03"))],
        },
        GerbeFixture {
            name: "q8",
            extension: q8_twisted(),
            split: false,
            models: vec![("lines-03", klein_model("lines-03")), ("mixed", klein_model("mixed"))],
        },
        GerbeFixture { name: "witness", extension: witness(), split: false, models: vec![("v", witness_model())] },
        GerbeFixture { name: "witness-abelian", extension: witness_abelian(), split: false, models: vec![("v", witness_model())] },
    ]
}

/// Globally split extensions, each with the group its models live on.
pub fn split_fixtures() -> Vec<(&'static str, GerbeExtension)> {
    vec![("s3", s3_band()), ("q8-split", q8_split()), ("witness-split", witness_split())]
}

/// Results of one gerbe over one model, with every intermediate cochain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GerbeRecord {
    pub name: String,
    pub document: DocumentSpec,
    pub sha: Vec<u64>,
    pub functional: BMFunctional,
    pub trace: serde_json::Value,
    pub factorization_holds: bool,
}

impl GerbeRecord {
    pub fn compute(name: &str, ext: &GerbeExtension, model: &ArithmeticModel) -> Result<GerbeRecord> {
        let mut document = DocumentSpec::default();
        document.add_extension("E", None, ext);
        document.set_model("E.base", model);
        let bm = BrauerManin::new(ext, model)?;
        let (functional, trace) = bm.trace(&Choices::default())?;
        let report = verify_factorization(ext, model)?;
        Ok(GerbeRecord {
            name: name.into(),
            document,
            sha: bm.sha().structure().factors().to_vec(),
            functional,
            trace: serde_json::to_value(trace).expect("serializable trace"),
            factorization_holds: report.holds,
        })
    }

    /// The extension and model stored in the document.
    pub fn load(&self) -> Result<(GerbeExtension, ArithmeticModel)> {
        let doc = Document::resolve(self.document.clone(), DEFAULT_MAX_ORDER)?;
        let (_, ext) = doc.extension(None)?;
        Ok((ext.clone(), doc.require_model()?.clone()))
    }

    pub fn to_json(&self) -> String {
        canonical_json(self)
    }
}

/// `Sha¹` of the witness module over all cyclic places of `V_4`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShaRecord {
    pub name: String,
    pub document: DocumentSpec,
    pub ambient: Vec<u64>,
    pub structure: Vec<u64>,
    pub generators: Vec<Vec<i64>>,
    pub representatives: Vec<Vec<i64>>,
}

impl ShaRecord {
    pub fn compute(name: &str, module: &Arc<GModule>, model: &ArithmeticModel) -> Result<ShaRecord> {
        let mut document = DocumentSpec::default();
        document.add_group("G", model.group());
        document.add_module("M", "G", module);
        document.set_model("G", model);
        let s = sha(model, module, 1)?;
        Ok(ShaRecord {
            name: name.into(),
            document,
            ambient: s.ambient().factors().to_vec(),
            structure: s.structure().factors().to_vec(),
            generators: s.generators().to_vec(),
            representatives: s.representatives().iter().map(|z| z.values().to_vec()).collect(),
        })
    }

    pub fn to_json(&self) -> String {
        canonical_json(self)
    }
}

/// Frozen gerbe records: `(file name, contents)`.
pub const FROZEN_GERBES: [(&str, &str); 6] = [
    ("s3-lines-01.json", include_str!("../fixtures/s3-lines-01.json")),
    ("s3-lines-03.json", include_str!("../fixtures/s3-lines-03.json")),
    ("q8-lines-03.json", include_str!("../fixtures/q8-lines-03.json")),
    ("q8-mixed.json", include_str!("../fixtures/q8-mixed.json")),
    ("witness-v.json", include_str!("../fixtures/witness-v.json")),
    ("witness-abelian-v.json", include_str!("../fixtures/witness-abelian-v.json")),
];

pub const FROZEN_SHA: (&str, &str) = ("sha1-witness.json", include_str!("../fixtures/sha1-witness.json"));

/// Recomputes every frozen record from the builders above, as
/// `(file name, record json)`.
pub fn recompute_frozen() -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for f in gerbe_fixtures() {
        for (model_name, model) in &f.models {
            let name = format!("{}-{}", f.name, model_name);
            let record = GerbeRecord::compute(&name, &f.extension, model)?;
            out.push((format!("{name}.json"), record.to_json()));
        }
    }
    let sha = ShaRecord::compute("sha1-witness", &sha_witness_module(), &sha_witness_model())?;
    out.push((FROZEN_SHA.0.to_string(), sha.to_json()));
    Ok(out)
}

pub fn frozen_gerbes() -> Result<Vec<GerbeRecord>> {
    FROZEN_GERBES
        .iter()
        .map(|(file, text)| serde_json::from_str(text).map_err(|e| Error::Document(format!("{file}: {e}"))))
        .collect()
}

pub fn frozen_sha() -> Result<ShaRecord> {
    serde_json::from_str(FROZEN_SHA.1).map_err(|e| Error::Document(format!("{}: {e}", FROZEN_SHA.0)))
}

/// The document of a frozen record by name (file name without `.json`).
pub fn frozen_document(name: &str) -> Option<DocumentSpec> {
    let file = format!("{name}.json");
    if file == FROZEN_SHA.0 {
        return frozen_sha().ok().map(|r| r.document);
    }
    FROZEN_GERBES
        .iter()
        .find(|(f, _)| *f == file)
        .and_then(|(_, text)| serde_json::from_str::<GerbeRecord>(text).ok())
        .map(|r| r.document)
}

pub fn frozen_names() -> Vec<&'static str> {
    FROZEN_GERBES.iter().chain([&FROZEN_SHA]).map(|(f, _)| f.trim_end_matches(".json")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gerbe::sections_over;

    #[test]
    fn q8_fixtures_split_where_expected() {
        let g = klein();
        let t = q8_twisted();
        assert!(sections_over(&t, &Subgroup::whole(g.clone())).is_empty());
        for els in [vec![0], vec![0, 1], vec![0, 3]] {
            assert!(!sections_over(&t, &Subgroup::new(g.clone(), els).unwrap()).is_empty());
        }
        assert!(!sections_over(&q8_split(), &Subgroup::whole(g)).is_empty());
    }

    #[test]
    fn models_satisfy_the_axioms_except_the_single_place() {
        for name in ["lines-01", "lines-03", "mixed"] {
            assert!(crate::arith::check_axioms(&klein_model(name)).unwrap().passed(), "{name}");
        }
        assert!(crate::arith::check_axioms(&witness_model()).unwrap().passed());
        assert!(crate::arith::check_axioms(&pairing_model()).unwrap().passed());
        assert!(!crate::arith::check_axioms(&single_place_model()).unwrap().passed());
        assert!(!klein_cyclic_models().unwrap().is_empty());
    }
}
