use std::sync::Arc;

use serde_json::{json, Value};

use gerbecoh::arith::{check_axioms, search_inv_assignments, sha, AxiomStatus, DEFAULT_SEARCH_BOUND};
use gerbecoh::cochain::{cohomology, Cochain};
use gerbecoh::document::Document;
use gerbecoh::gerbe::{
    brauer_a, brauer_manin_with, class_2cocycle, local_sections, picard_geom, sections_over, verify_factorization,
    BrauerManin, Choices, GerbeExtension,
};
use gerbecoh::group::Subgroup;
use gerbecoh::zmodule::{dual_module, FinAb, GModule};
use gerbecoh::{Error, Result};

pub struct Flags {
    pub certificates: bool,
    pub expect_zero: bool,
    pub mu_enlarge_bound: Option<u64>,
}

/// A command result: JSON report, text rendering and exit status.
pub struct Outcome {
    pub report: Value,
    pub text: String,
    pub exit: i32,
}

impl Outcome {
    fn ok(report: Value, text: String) -> Outcome {
        Outcome { report, text, exit: 0 }
    }
}

fn module_json(m: &GModule) -> Value {
    let mut action = serde_json::Map::new();
    let r = m.rank();
    for g in m.group().elements() {
        let rows = m.matrix_rows(g);
        if (0..r).any(|i| (0..r).any(|j| rows[i][j] != (i == j) as i64)) {
            action.insert(g.to_string(), json!(rows));
        }
    }
    json!({ "group_order": m.group().order(), "factors": m.carrier().factors(), "action": action })
}

fn cochains_json(cs: &[Cochain]) -> Value {
    json!(cs.iter().map(|c| c.values().to_vec()).collect::<Vec<_>>())
}

pub fn cohomology_cmd(doc: &Document, module: Option<&str>, degree: usize, flags: &Flags) -> Result<Outcome> {
    let (name, m) = doc.module(module)?;
    let h = cohomology(m.clone(), degree)?;
    let mut report = json!({
        "command": "cohomology", "module": name, "input": module_json(m), "degree": degree,
        "structure": h.structure().factors(),
    });
    if flags.certificates {
        report["representatives"] = cochains_json(h.representatives());
    }
    let text = format!("H^{degree}(G, {name}) = {}\n", h.structure());
    Ok(Outcome::ok(report, text))
}

/// The model's `μ` when it lives over the module's group, else trivial
/// `Z/exp(M)`.
fn coefficients(doc: &Document, g: &Arc<gerbecoh::group::FiniteGroup>, exponent: u64) -> Arc<GModule> {
    match &doc.model {
        Some(model) if model.group().same_table(g) => model.mu().clone(),
        _ => Arc::new(GModule::trivial(g.clone(), FinAb::cyclic(exponent.max(1)))),
    }
}

pub fn dual_cmd(doc: &Document, module: Option<&str>) -> Result<Outcome> {
    let (name, m) = doc.module(module)?;
    let mu = coefficients(doc, m.group(), m.carrier().exponent());
    let hat = dual_module(m, &mu)?;
    let report = json!({
        "command": "dual", "module": name, "input": module_json(m), "mu": module_json(&mu), "dual": module_json(&hat),
    });
    let text = format!("Hom({name}, Z/{}) = {}\n", mu.carrier().exponent(), hat.carrier());
    Ok(Outcome::ok(report, text))
}

pub fn sha_cmd(doc: &Document, module: Option<&str>, degree: usize, flags: &Flags) -> Result<Outcome> {
    let model = doc.require_model()?;
    let (name, m) = match module {
        None if doc.modules.is_empty() => ("mu", model.mu()),
        _ => doc.module(module)?,
    };
    let s = sha(model, m, degree)?;
    let mut report = json!({
        "command": "sha", "module": name, "input": module_json(m), "degree": degree,
        "ambient": s.ambient().factors(), "structure": s.structure().factors(), "generators": s.generators(),
    });
    if flags.certificates {
        report["representatives"] = cochains_json(s.representatives());
        report["local_primitives"] = json!(s
            .local_primitives()
            .iter()
            .map(|per| per.iter().map(|(p, c)| json!({ "place": p, "primitive": c.values() })).collect::<Vec<_>>())
            .collect::<Vec<_>>());
    }
    let text = format!("Sha^{degree}(G, {name}) = {}  inside H^{degree} = {}\n", s.structure(), s.ambient());
    Ok(Outcome::ok(report, text))
}

fn status(s: &AxiomStatus) -> &'static str {
    match s {
        AxiomStatus::Pass => "pass",
        AxiomStatus::Fail => "fail",
        AxiomStatus::NotRequired => "not required",
    }
}

pub fn model_check(doc: &Document) -> Result<Outcome> {
    let model = doc.require_model()?;
    let r = check_axioms(model)?;
    let places: Vec<Value> = model
        .places()
        .iter()
        .enumerate()
        .map(|(v, p)| {
            json!({ "name": p.name(), "subgroup": p.subgroup().elements(), "local_h2": model.local_h2(v).structure().factors(), "inv": p.inv() })
        })
        .collect();
    let report = json!({
        "command": "model check", "modulus": model.modulus(), "global_h2": model.global_h2().structure().factors(),
        "places": places, "axioms": r, "passed": r.passed(),
    });
    let mut text = format!("A1 {}\nA2 {}\nA3 {}\n", status(&r.a1), status(&r.a2), status(&r.a3));
    for f in &r.a1_failures {
        text.push_str(&format!("  A1: place '{}' sends generator {} of order {} to {}\n", f.place, f.generator, f.order, f.value));
    }
    for f in &r.a2_failures {
        text.push_str(&format!("  A2: generator {} of H^2(G, mu) has invariant sum {}\n", f.generator, f.sum));
    }
    for f in &r.a3_failures {
        text.push_str(&format!("  A3: cyclic subgroup {:?} lies in no decomposition group\n", f.elements));
    }
    let exit = if r.passed() { 0 } else { 3 };
    Ok(Outcome { report, text, exit })
}

pub fn model_search_inv(doc: &Document) -> Result<Outcome> {
    let model = doc.require_model()?;
    let places: Vec<(String, Subgroup)> =
        model.places().iter().map(|p| (p.name().to_string(), p.subgroup().clone())).collect();
    let found =
        search_inv_assignments(model.group(), model.mu(), &places, model.chebotarev_complete(), DEFAULT_SEARCH_BOUND)?;
    let assignments: Vec<Value> = found
        .iter()
        .map(|m| json!(m.places().iter().map(|p| json!({ "name": p.name(), "inv": p.inv() })).collect::<Vec<_>>()))
        .collect();
    let mut text = format!("{} invariant assignments satisfy A1 and A2\n", found.len());
    for m in &found {
        let parts: Vec<String> = m
            .places()
            .iter()
            .map(|p| format!("{}: [{}]", p.name(), p.inv().iter().map(|q| q.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        text.push_str(&format!("  {}\n", parts.join("  ")));
    }
    Ok(Outcome::ok(json!({ "command": "model search-inv", "count": found.len(), "assignments": assignments }), text))
}

fn extension_json(ext: &GerbeExtension) -> Value {
    json!({
        "gamma_order": ext.gamma().order(), "base_order": ext.base().order(), "kernel_order": ext.kernel().order(),
        "kernel_abelian": ext.kernel().is_abelian(), "kernel_abelianization": ext.abelianized_kernel().factors(),
    })
}

pub fn gerbe_class(doc: &Document, extension: Option<&str>, flags: &Flags) -> Result<Outcome> {
    let (name, ext) = doc.extension(extension)?;
    let class = class_2cocycle(ext)?;
    let h2 = cohomology(class.module.clone(), 2)?;
    let coords = h2.reduce(&class.cocycle)?;
    let split = !sections_over(ext, &Subgroup::whole(ext.base().clone())).is_empty();
    let mut report = json!({
        "command": "gerbe class", "extension": name, "input": extension_json(ext), "band": module_json(&class.module),
        "h2": h2.structure().factors(), "class": coords, "split": split,
    });
    if flags.certificates {
        report["section"] = json!(class.section);
        report["cocycle"] = json!(class.cocycle.values());
    }
    let text = format!(
        "H^ab = {} ; H^2(G, H^ab) = {} ; class {:?} ; {}\n",
        class.module.carrier(),
        h2.structure(),
        coords,
        if split { "split" } else { "not split" }
    );
    Ok(Outcome::ok(report, text))
}

pub fn gerbe_local_sections(doc: &Document, extension: Option<&str>, flags: &Flags) -> Result<Outcome> {
    let (name, ext) = doc.extension(extension)?;
    let model = doc.require_model()?;
    let list = local_sections(ext, model);
    let mut text = String::new();
    let mut places = Vec::new();
    let mut missing = Vec::new();
    for (place, sections) in &list {
        text.push_str(&format!("{place}: {} splittings\n", sections.len()));
        if sections.is_empty() {
            missing.push(place.clone());
        }
        let mut entry = json!({ "place": place, "count": sections.len() });
        if flags.certificates {
            entry["splittings"] = json!(sections.iter().map(|s| s.images.clone()).collect::<Vec<_>>());
        }
        places.push(entry);
    }
    let neutral = missing.is_empty();
    if !neutral {
        text.push_str(&format!("not locally neutral at {}\n", missing.join(", ")));
    }
    let report = json!({
        "command": "gerbe local-sections", "extension": name, "input": extension_json(ext), "places": places,
        "locally_neutral": neutral, "missing": missing,
    });
    Ok(Outcome { report, text, exit: if neutral { 0 } else { 1 } })
}

pub fn gerbe_brauer(doc: &Document, extension: Option<&str>, flags: &Flags) -> Result<Outcome> {
    let (name, ext) = doc.extension(extension)?;
    let mu = coefficients(doc, ext.base(), ext.abelianized_kernel().exponent());
    let pic = picard_geom(ext, &mu)?;
    let br = brauer_a(ext, &mu)?;
    let mut report = json!({
        "command": "gerbe brauer", "extension": name, "input": extension_json(ext), "mu": module_json(&mu),
        "picard": module_json(&pic), "brauer_a": br.structure().factors(),
    });
    if flags.certificates {
        report["representatives"] = cochains_json(br.representatives());
    }
    let text = format!("Pic = {} ; Br_a = H^1(G, Pic) = {}\n", pic.carrier(), br.structure());
    Ok(Outcome::ok(report, text))
}

pub fn gerbe_mh(doc: &Document, extension: Option<&str>, flags: &Flags) -> Result<Outcome> {
    let (name, ext) = doc.extension(extension)?;
    let model = doc.require_model()?;
    let (functional, used) = brauer_manin_with(ext, model, flags.mu_enlarge_bound)?;
    let mut report = json!({
        "command": "gerbe mh", "extension": name, "input": extension_json(ext), "modulus": used.modulus(),
        "functional": functional, "zero": functional.is_zero(),
    });
    if flags.certificates {
        let bm = BrauerManin::new(ext, &used)?;
        let (_, trace) = bm.trace(&Choices::default())?;
        report["trace"] = serde_json::to_value(trace).expect("serializable trace");
    }
    let mut text = format!("Sha^1(G, Pic) = {}\n", FinAb::new(functional.domain.clone())?);
    for (g, v) in functional.generators.iter().zip(&functional.values) {
        text.push_str(&format!("  m_H({g:?}) = {v}\n"));
    }
    if used.modulus() != model.modulus() {
        text.push_str(&format!("computed with mu enlarged to Z/{}\n", used.modulus()));
    }
    text.push_str(if functional.is_zero() { "m_H = 0\n" } else { "m_H != 0\n" });
    let exit = if flags.expect_zero && !functional.is_zero() { 1 } else { 0 };
    Ok(Outcome { report, text, exit })
}

pub fn verify_thm41(doc: &Document, extension: Option<&str>) -> Result<Outcome> {
    let (name, ext) = doc.extension(extension)?;
    let model = doc.require_model()?;
    let r = verify_factorization(ext, model)?;
    let report = json!({
        "command": "verify thm41", "extension": name, "input": extension_json(ext), "report": r, "holds": r.holds,
    });
    let mut text = format!("direct:      {:?}\nabelianized: {:?}\n", r.direct.values, r.abelianized.values);
    for (g, a, b) in &r.diffs {
        text.push_str(&format!("  generator {g}: {a} != {b}\n"));
    }
    text.push_str(if r.holds { "factorization holds\n" } else { "factorization fails\n" });
    Ok(Outcome { report, text, exit: if r.holds { 0 } else { 1 } })
}

/// Runs every task of the document in order.
pub fn run_tasks(doc: &Document, flags: &Flags) -> Result<Outcome> {
    if doc.spec.tasks.is_empty() {
        return Err(Error::Document("document has no tasks".into()));
    }
    let mut reports = Vec::new();
    let mut text = String::new();
    let mut exit = 0;
    for task in &doc.spec.tasks {
        let module = task.module.as_deref();
        let extension = task.extension.as_deref();
        let degree = task.degree.unwrap_or(1);
        let out = match task.command.as_str() {
            "cohomology" => cohomology_cmd(doc, module, degree, flags),
            "dual" => dual_cmd(doc, module),
            "sha" => sha_cmd(doc, module, degree, flags),
            "model check" => model_check(doc),
            "model search-inv" => model_search_inv(doc),
            "gerbe class" => gerbe_class(doc, extension, flags),
            "gerbe local-sections" => gerbe_local_sections(doc, extension, flags),
            "gerbe brauer" => gerbe_brauer(doc, extension, flags),
            "gerbe mh" => gerbe_mh(doc, extension, flags),
            "verify thm41" => verify_thm41(doc, extension),
            other => Err(Error::Document(format!("unknown task command '{other}'"))),
        };
        let out = out.unwrap_or_else(error_outcome);
        text.push_str(&format!("[{}]\n{}", task.command, out.text));
        exit = exit.max(out.exit);
        reports.push(out.report);
    }
    Ok(Outcome { report: json!({ "command": "run", "tasks": reports }), text, exit })
}

pub fn error_outcome(e: Error) -> Outcome {
    let mut report = json!({ "error": e.to_string(), "exit_code": e.exit_code() });
    if let Error::GlobalH3Obstruction { generator, certificate } = &e {
        report["generator"] = json!(generator);
        report["certificate"] = json!(certificate);
    }
    Outcome { text: format!("error: {e}\n"), exit: e.exit_code(), report }
}
