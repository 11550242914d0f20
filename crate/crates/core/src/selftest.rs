//! The acceptance suite behind `gerbecoh selftest`.
//!
//! Each criterion yields a pass flag, a one-line summary and a JSON detail
//! block. Reports contain no timings and nothing that depends on the seed,
//! so two runs produce identical bytes.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{check_axioms, require_axioms, search_inv_assignments, sha, ArithmeticModel, DEFAULT_SEARCH_BOUND};
use crate::cochain::oracle::{brute_force_cohomology, central_extension_classes};
use crate::cochain::{cohomology, cup, Cochain};
use crate::document::{canonical_json, Document, DocumentSpec};
use crate::error::Result;
use crate::fixtures;
use crate::gerbe::{
    brauer_a, brauer_manin, local_pairing, picard_geom, sections_over, torsor_difference, verify_factorization,
    BrauerManin, Choices, GerbeExtension, LocalSection,
};
use crate::group::{abelianization, all_subgroups, named, FiniteGroup};
use crate::zmodule::{dual_module, FinAb, GModule, Pairing};

#[derive(Clone, Debug)]
pub struct Config {
    /// chooses perturbations and random cochains only
    pub seed: u64,
    pub perturbations: usize,
    pub random_cochains: usize,
}

impl Default for Config {
    fn default() -> Config {
        Config { seed: 0, perturbations: crate::gerbe::DEFAULT_PERTURBATIONS, random_cochains: 100 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Criterion {
    pub id: usize,
    pub title: String,
    pub passed: bool,
    pub summary: String,
    pub details: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub passed: bool,
    pub criteria: Vec<Criterion>,
}

impl Report {
    pub fn to_json(&self) -> String {
        canonical_json(self)
    }

    pub fn scoreboard(&self) -> String {
        let mut out = String::new();
        for c in &self.criteria {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{mark} {:>2}  {}: {}\n", c.id, c.title, c.summary));
        }
        let n = self.criteria.iter().filter(|c| c.passed).count();
        out.push_str(&format!("{n}/{} criteria passed\n", self.criteria.len()));
        out
    }
}

type Check = fn(&Config) -> Result<(bool, String, Value)>;

const CRITERIA: [(&str, Check); 9] = [
    ("cohomology oracle equivalence", oracle_equivalence),
    ("known values", known_values),
    ("d∘d = 0 and Leibniz", differential_identities),
    ("algebraic Brauer group", brauer_suite),
    ("m_H is independent of choices", well_definedness),
    ("neutral gerbes have m_H = 0", neutral_vanishing),
    ("factorization through abelianization", factorization),
    ("model axioms are enforced", axiom_enforcement),
    ("local pairing", pairing_sanity),
];

fn run_criterion(id: usize, title: &str, check: Check, config: &Config) -> Criterion {
    let (passed, summary, details) = match check(config) {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}"), json!({ "error": e.to_string() })),
    };
    Criterion { id, title: title.into(), passed, summary, details }
}

/// Criteria 1 through 9.
pub fn run_checks(config: &Config) -> Vec<Criterion> {
    CRITERIA.iter().enumerate().map(|(i, (title, check))| run_criterion(i + 1, title, *check, config)).collect()
}

/// The whole suite; the last criterion reruns the others and compares the
/// serialized reports.
pub fn run(config: &Config) -> Report {
    let mut criteria = run_checks(config);
    let first = canonical_json(&criteria);
    let second = canonical_json(&run_checks(config));
    let same = first == second;
    criteria.push(Criterion {
        id: 10,
        title: "end-to-end determinism".into(),
        passed: same,
        summary: if same { format!("two runs agree on {} bytes", first.len()) } else { "reports differ".into() },
        details: json!({ "bytes": first.len(), "identical": same }),
    });
    Report { passed: criteria.iter().all(|c| c.passed), criteria }
}

fn trivial(g: &Arc<FiniteGroup>, factors: &[u64]) -> Arc<GModule> {
    Arc::new(GModule::trivial(g.clone(), FinAb::new(factors.to_vec()).expect("valid factors")))
}

fn oracle_equivalence(_: &Config) -> Result<(bool, String, Value)> {
    let mut rows = Vec::new();
    let mut ok = true;
    for (name, g) in named::groups_up_to_order_8() {
        let g = Arc::new(g);
        for f in [vec![2u64], vec![3], vec![4], vec![2, 2]] {
            let m = trivial(&g, &f);
            for n in 1..=2 {
                let snf = cohomology(m.clone(), n)?.structure().clone();
                let brute = brute_force_cohomology(&m, n)?;
                let agree = snf == brute.structure;
                ok &= agree;
                rows.push(json!({
                    "group": name, "module": f, "degree": n, "smith": snf.factors(),
                    "enumerated": brute.structure.factors(), "cocycles": brute.cocycles.to_string(),
                    "coboundaries": brute.coboundaries.to_string(), "agree": agree,
                }));
            }
        }
    }
    let agree = rows.iter().filter(|r| r["agree"] == true).count();
    Ok((ok, format!("{agree}/{} groups × modules × degrees agree", rows.len()), Value::Array(rows)))
}

fn known_values(_: &Config) -> Result<(bool, String, Value)> {
    let mut rows = Vec::new();
    let mut expect = |label: String, got: &FinAb, want: &[u64]| {
        rows.push(json!({ "case": label, "got": got.factors(), "expected": want, "ok": got.factors() == want }));
    };
    let z2 = Arc::new(named::cyclic(2));
    let z3 = Arc::new(named::cyclic(3));
    expect("H1(Z/2, Z/2)".into(), cohomology(trivial(&z2, &[2]), 1)?.structure(), &[2]);
    expect("H2(Z/2, Z/2)".into(), cohomology(trivial(&z2, &[2]), 2)?.structure(), &[2]);
    expect("H1(Z/3, Z/2)".into(), cohomology(trivial(&z3, &[2]), 1)?.structure(), &[]);
    for n in 2..=6u64 {
        let g = Arc::new(named::cyclic(n as usize));
        expect(format!("H2(Z/{n}, Z/{n})"), cohomology(trivial(&g, &[n]), 2)?.structure(), &[n]);
    }
    let classes = cohomology(trivial(&z2, &[2]), 2)?.structure().order();
    let extensions = central_extension_classes(&z2, 2)? as u128;
    rows.push(json!({
        "case": "|H2(Z/2, Z/2)| = extensions of Z/2 by Z/2",
        "classes": classes, "extensions": extensions, "ok": classes == extensions && extensions == 2,
    }));
    let ok = rows.iter().all(|r| r["ok"] == true);
    let good = rows.iter().filter(|r| r["ok"] == true).count();
    Ok((ok, format!("{good}/{} values match", rows.len()), Value::Array(rows)))
}

/// A module with nontrivial action where the abelianization allows one.
fn test_module(g: &Arc<FiniteGroup>) -> Result<Arc<GModule>> {
    let ab = abelianization(g);
    let factors = ab.structure().factors().to_vec();
    if let Some(k) = factors.iter().position(|d| d % 2 == 0) {
        let sign: Vec<u64> = g.elements().map(|x| if ab.project(x)[k] % 2 == 1 { 3 } else { 1 }).collect();
        return Ok(Arc::new(GModule::cyclic_with_character(g.clone(), 4, &sign)?));
    }
    if let Some(k) = factors.iter().position(|d| d % 3 == 0) {
        // an element of order 3 in GL_2(F_2)
        let powers = [vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 1]], vec![vec![1, 1], vec![1, 0]]];
        let action = g.elements().map(|x| Some(powers[(ab.project(x)[k] % 3) as usize].clone())).collect();
        return Ok(Arc::new(GModule::new(g.clone(), FinAb::new(vec![2, 2])?, action)?));
    }
    Ok(trivial(g, &[4]))
}

fn differential_identities(config: &Config) -> Result<(bool, String, Value)> {
    let groups: Vec<(&str, FiniteGroup)> = vec![
        ("Z2xZ2", named::klein_four()),
        ("S3", named::symmetric(3)),
        ("Q8", named::quaternion()),
        ("A4", named::alternating(4)),
        ("D8", named::dihedral(8)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut rows = Vec::new();
    let mut ok = true;
    for (name, g) in groups {
        let g = Arc::new(g);
        let m = test_module(&g)?;
        let mu = trivial(&g, &[m.carrier().exponent()]);
        let hat = Arc::new(dual_module(&m, &mu)?);
        let pair = Pairing::evaluation(hat.clone(), m.clone(), mu)?;
        let mut dd = 0usize;
        for degree in 0..=1 {
            for _ in 0..config.random_cochains {
                let c = Cochain::random(m.clone(), degree, &mut rng)?;
                if c.differential()?.differential()?.is_zero() {
                    dd += 1;
                }
            }
        }
        let mut leibniz = 0usize;
        let pairs = [(0, 0), (0, 1), (1, 0), (1, 1), (0, 2), (2, 0)];
        for (p, q) in pairs {
            for _ in 0..config.random_cochains {
                let a = Cochain::random(hat.clone(), p, &mut rng)?;
                let b = Cochain::random(m.clone(), q, &mut rng)?;
                let lhs = cup(&a, &b, &pair)?.differential()?;
                let sign = if p % 2 == 0 { 1 } else { -1 };
                let rhs = cup(&a.differential()?, &b, &pair)?.add(&cup(&a, &b.differential()?, &pair)?.scale(sign))?;
                if lhs == rhs {
                    leibniz += 1;
                }
            }
        }
        let dd_total = 2 * config.random_cochains;
        let l_total = pairs.len() * config.random_cochains;
        ok &= dd == dd_total && leibniz == l_total;
        rows.push(json!({
            "group": name, "order": g.order(), "module": m.carrier().factors(), "trivial_action": m.is_trivial_action(),
            "d_squared": format!("{dd}/{dd_total}"), "leibniz": format!("{leibniz}/{l_total}"),
        }));
    }
    let summary = format!("{} groups, {} cochains per degree", rows.len(), config.random_cochains);
    Ok((ok, summary, Value::Array(rows)))
}

fn brauer_suite(_: &Config) -> Result<(bool, String, Value)> {
    let mut rows = Vec::new();
    let z2 = Arc::new(named::cyclic(2));
    for (name, h) in [("A5", named::alternating(5)), ("SL(2,5)", named::special_linear_2(5))] {
        let ext = GerbeExtension::direct_product(Arc::new(h), z2.clone());
        let mu = trivial(&z2, &[2]);
        let br = brauer_a(&ext, &mu)?;
        let pic = picard_geom(&ext, &mu)?;
        rows.push(json!({
            "case": format!("perfect band {name}"), "brauer": br.structure().factors(),
            "picard": pic.carrier().factors(), "ok": br.structure().is_trivial() && pic.carrier().is_trivial(),
        }));
    }
    let s3 = fixtures::s3_band();
    let pic = picard_geom(&s3, &trivial(s3.base(), &[2]))?;
    rows.push(json!({ "case": "band S3", "picard": pic.carrier().factors(), "ok": pic.carrier().factors() == [2] }));

    let bases: Vec<(&str, FiniteGroup)> = vec![
        ("Z2", named::cyclic(2)),
        ("Z4", named::cyclic(4)),
        ("Z2xZ2", named::klein_four()),
        ("S3", named::symmetric(3)),
    ];
    for (gname, g) in bases {
        let g = Arc::new(g);
        let ab = abelianization(&g);
        let parity = ab.structure().factors().iter().position(|d| d % 2 == 0);
        for n in [2u64, 3, 4] {
            for m in [n, 2 * n] {
                let mut mus = vec![("trivial", trivial(&g, &[m]))];
                if let Some(k) = parity {
                    let sign: Vec<u64> = g.elements().map(|x| if ab.project(x)[k] % 2 == 1 { m - 1 } else { 1 }).collect();
                    mus.push(("sign", Arc::new(GModule::cyclic_with_character(g.clone(), m, &sign)?)));
                }
                for (mu_name, mu) in mus {
                    let ext = GerbeExtension::direct_product(Arc::new(named::cyclic(n as usize)), g.clone());
                    let via_gerbe = brauer_a(&ext, &mu)?;
                    let hat = dual_module(&GModule::trivial(g.clone(), FinAb::cyclic(n)), &mu)?;
                    let direct = cohomology(Arc::new(hat), 1)?;
                    rows.push(json!({
                        "case": format!("central Z/{n} over {gname}, mu Z/{m} {mu_name}"),
                        "brauer": via_gerbe.structure().factors(), "direct": direct.structure().factors(),
                        "ok": via_gerbe.structure() == direct.structure(),
                    }));
                }
            }
        }
    }
    let ok = rows.iter().all(|r| r["ok"] == true);
    let good = rows.iter().filter(|r| r["ok"] == true).count();
    Ok((ok, format!("{good}/{} cases", rows.len()), Value::Array(rows)))
}

fn well_definedness(config: &Config) -> Result<(bool, String, Value)> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut rows = Vec::new();
    let mut ok = true;
    for record in fixtures::frozen_gerbes()? {
        let (ext, model) = record.load()?;
        let bm = BrauerManin::new(&ext, &model)?;
        let (functional, trace) = bm.trace(&Choices::default())?;
        let trace_matches = serde_json::to_value(&trace).expect("serializable trace") == record.trace;
        let mut agreeing = 0usize;
        for _ in 0..config.perturbations {
            if bm.evaluate(&bm.random_choices(&mut rng)?)? == functional {
                agreeing += 1;
            }
        }
        let good = functional == record.functional && trace_matches && agreeing == config.perturbations;
        ok &= good;
        rows.push(json!({
            "fixture": record.name, "values": functional.values, "matches_frozen": functional == record.functional,
            "trace_matches_frozen": trace_matches, "perturbations": format!("{agreeing}/{}", config.perturbations),
        }));
    }
    Ok((ok, format!("{} frozen fixtures, {} perturbations each", rows.len(), config.perturbations), Value::Array(rows)))
}

fn neutral_vanishing(_: &Config) -> Result<(bool, String, Value)> {
    let mut klein_models: Vec<(String, ArithmeticModel)> =
        ["lines-01", "lines-03", "mixed"].iter().map(|n| (n.to_string(), fixtures::klein_model(n))).collect();
    for (i, m) in fixtures::klein_cyclic_models()?.into_iter().enumerate() {
        klein_models.push((format!("cyclic-{i}"), m));
    }
    let g = fixtures::klein();
    let mu = Arc::new(GModule::trivial(g.clone(), FinAb::cyclic(2)));
    let subs = all_subgroups(&g);
    for a in 0..subs.len() {
        for b in a..subs.len() {
            let places = vec![("v".to_string(), subs[a].clone()), ("w".to_string(), subs[b].clone())];
            for (k, m) in search_inv_assignments(&g, &mu, &places, false, DEFAULT_SEARCH_BOUND)?.into_iter().enumerate() {
                klein_models.push((format!("pair-{a}-{b}-{k}"), m));
            }
        }
    }
    let witness_models = vec![("v".to_string(), fixtures::witness_model())];
    let mut rows = Vec::new();
    let mut ok = true;
    for (name, ext) in fixtures::split_fixtures() {
        let models = if ext.base().order() == 4 { &klein_models } else { &witness_models };
        for (model_name, model) in models {
            let f = brauer_manin(&ext, model)?;
            ok &= f.is_zero();
            rows.push(json!({ "fixture": name, "model": model_name, "domain": f.domain, "values": f.values }));
        }
    }
    Ok((ok, format!("{} split extension/model pairs", rows.len()), Value::Array(rows)))
}

fn factorization(_: &Config) -> Result<(bool, String, Value)> {
    let mut rows = Vec::new();
    let mut holds_all = true;
    let (mut s3, mut q8, mut nonzero) = (0, 0, false);
    for record in fixtures::frozen_gerbes()? {
        let (ext, model) = record.load()?;
        let report = verify_factorization(&ext, &model)?;
        holds_all &= report.holds;
        let kernel = ext.kernel();
        let nonabelian = !kernel.is_abelian();
        if report.holds && nonabelian {
            match kernel.order() {
                6 => s3 += 1,
                8 => q8 += 1,
                _ => {}
            }
            nonzero |= !report.direct.is_zero();
        }
        rows.push(json!({
            "fixture": record.name, "kernel_order": kernel.order(), "nonabelian": nonabelian,
            "holds": report.holds, "values": report.direct.values,
        }));
    }
    let ok = holds_all && s3 >= 2 && q8 >= 2 && nonzero;
    let summary = format!("holds on {} fixtures (S3: {s3} models, Q8: {q8} models, nonzero nonabelian witness: {nonzero})", rows.len());
    Ok((ok, summary, Value::Array(rows)))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn axiom_enforcement(_: &Config) -> Result<(bool, String, Value)> {
    let bad = fixtures::single_place_model();
    let report = check_axioms(&bad)?;
    let mut spec = DocumentSpec::default();
    spec.add_group("G", bad.group());
    spec.set_model("G", &bad);
    let reparsed = Document::parse(&spec.to_json())?;
    let code = match require_axioms(reparsed.require_model()?) {
        Err(e) => e.exit_code(),
        Ok(()) => 0,
    };
    let rejected = !report.passed() && code == 3;

    let mut rows = Vec::new();
    let mut invariant = true;
    for record in fixtures::frozen_gerbes()? {
        let (ext, model) = record.load()?;
        let reference = outputs(&ext, &model)?;
        let orders = permutations(model.places().len());
        let stable = orders.iter().all(|o| outputs(&ext, &model.permuted(o)).ok().as_ref() == Some(&reference));
        invariant &= stable;
        rows.push(json!({ "fixture": record.name, "orderings": orders.len(), "stable": stable }));
    }
    let details = json!({
        "single_place": { "a2": report.a2, "exit_code": code },
        "permutations": rows,
    });
    let summary = format!(
        "single-place model {} (exit {code}); outputs stable under place permutations: {invariant}",
        if rejected { "rejected" } else { "accepted" }
    );
    Ok((rejected && invariant, summary, details))
}

/// `Sha¹`, `Sha²` of `Ĥ` and `m_H`, for comparing place orderings.
fn outputs(ext: &GerbeExtension, model: &ArithmeticModel) -> Result<Value> {
    let bm = BrauerManin::new(ext, model)?;
    let s2 = sha(model, bm.hat(), 2)?;
    Ok(json!({
        "sha1": [bm.sha().structure().factors(), bm.sha().generators()],
        "sha2": [s2.structure().factors(), s2.generators()],
        "functional": bm.evaluate(&Choices::default())?,
    }))
}

/// Every cochain of the given degree, in mixed-radix order.
fn all_cochains(module: &Arc<GModule>, degree: usize) -> Result<Vec<Cochain>> {
    let n = module.group().order();
    let factors = module.carrier().factors().to_vec();
    let slots = crate::cochain::slot_count(n, degree) * factors.len();
    let mut digits = vec![0i64; slots];
    let mut out = Vec::new();
    loop {
        out.push(Cochain::from_values(module.clone(), degree, digits.clone())?);
        let mut k = 0;
        loop {
            if k == slots {
                return Ok(out);
            }
            digits[k] += 1;
            if digits[k] < factors[k % factors.len()] as i64 {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

fn pairing_sanity(_: &Config) -> Result<(bool, String, Value)> {
    let model = fixtures::pairing_model();
    let ext = fixtures::pairing_extension();
    let v = 0;
    let d = model.places()[v].subgroup().clone();
    let band = ext.band_module()?;
    let a = Arc::new(band.restrict(&d)?);
    let hat = Arc::new(dual_module(&band, model.mu())?.restrict(&d)?);
    let cocycles = |m: &Arc<GModule>| -> Result<Vec<Cochain>> {
        Ok(all_cochains(m, 1)?.into_iter().filter(Cochain::is_cocycle).collect())
    };
    let zs = cocycles(&a)?;
    let bs = cocycles(&hat)?;
    let pair = |z: &Cochain, b: &Cochain| local_pairing(&model, v, z, b);

    let mut bilinear = true;
    for z1 in &zs {
        for z2 in &zs {
            for b1 in &bs {
                for b2 in &bs {
                    bilinear &= pair(&z1.add(z2)?, b1)? == pair(z1, b1)? + pair(z2, b1)?;
                    bilinear &= pair(z1, &b1.add(b2)?)? == pair(z1, b1)? + pair(z1, b2)?;
                }
            }
        }
    }
    let mut invariant = true;
    for z in &zs {
        for b in &bs {
            let base = pair(z, b)?;
            for m in all_cochains(&a, 0)? {
                invariant &= pair(&z.add(&m.differential()?)?, b)? == base;
            }
            for m in all_cochains(&hat, 0)? {
                invariant &= pair(z, &b.add(&m.differential()?)?)? == base;
            }
        }
    }
    let witness = zs
        .iter()
        .flat_map(|z| bs.iter().map(move |b| (z, b)))
        .find_map(|(z, b)| match pair(z, b) {
            Ok(x) if !x.is_zero() => Some(Ok((z.values().to_vec(), b.values().to_vec(), x))),
            Ok(_) => None,
            Err(e) => Some(Err(e)),
        })
        .transpose()?;

    let splittings: Vec<LocalSection> = sections_over(&ext, &d)
        .into_iter()
        .map(|images| LocalSection { place: model.places()[v].name().into(), subgroup: d.clone(), images })
        .collect();
    let diff = |s: &LocalSection, t: &LocalSection| -> Result<Cochain> { torsor_difference(&ext, s, t)?.abelianized(&ext, a.clone()) };
    let mut additive = true;
    for s in &splittings {
        for t in &splittings {
            for u in &splittings {
                for b in &bs {
                    additive &= pair(&diff(s, u)?, b)? == pair(&diff(s, t)?, b)? + pair(&diff(t, u)?, b)?;
                }
            }
        }
    }

    let inv = model.places()[v].inv().to_vec();
    let nondegenerate = inv.iter().any(|x| !x.is_zero()) && model.local_h2(v).structure().factors() == [2] && witness.is_some();
    let ok = bilinear && invariant && additive && nondegenerate;
    let details = json!({
        "place": model.places()[v].name(), "decomposition_order": d.order(), "kernel_order": ext.kernel().order(),
        "local_h2": model.local_h2(v).structure().factors(), "inv": inv,
        "cocycles": [zs.len(), bs.len()], "splittings": splittings.len(),
        "bilinear": bilinear, "coboundary_invariant": invariant, "torsor_additive": additive,
        "witness": witness.map(|(z, b, x)| json!({ "z": z, "b": b, "value": x })),
    });
    let summary = format!(
        "bilinear {bilinear}, coboundary-invariant {invariant}, torsor-additive {additive}, nondegenerate {nondegenerate}"
    );
    Ok((ok, summary, details))
}
