//! Finite arithmetic models: a Galois group with declared places, each a
//! decomposition subgroup carrying an invariant map `H²(D_v, μ) → Q/Z`.
//!
//! The places are abstract. A model stands in for a number field only to
//! the extent its author chose the places; in particular `Sha` is taken
//! over the declared places, not over all places of a field.

mod search;
mod sha;

use std::sync::Arc;

use serde::Serialize;

use crate::cochain::{same_module, Cochain, CochainComplex, CohomologyGroup};
use crate::error::{Error, Result};
use crate::group::{cyclic_subgroups, FiniteGroup, Subgroup};
use crate::zmodule::{GModule, QmodZ};

pub use search::{search_inv_assignments, search_sha_witness, ShaWitness, DEFAULT_SEARCH_BOUND};
pub use sha::{sha, Sha};

/// A place: a name, a decomposition subgroup and the values of its invariant
/// map on the canonical generators of `H²(D_v, μ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Place {
    name: String,
    subgroup: Subgroup,
    inv: Vec<QmodZ>,
}

impl Place {
    pub fn new(name: impl Into<String>, subgroup: Subgroup, inv: Vec<QmodZ>) -> Place {
        Place { name: name.into(), subgroup, inv }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn inv(&self) -> &[QmodZ] {
        &self.inv
    }
}

#[derive(Debug)]
struct LocalData {
    mu: Arc<GModule>,
    complex: CochainComplex,
}

/// A Galois group `G`, a cyclic coefficient module `μ = Z/m` and places.
#[derive(Debug)]
pub struct ArithmeticModel {
    group: Arc<FiniteGroup>,
    mu: Arc<GModule>,
    places: Vec<Place>,
    chebotarev_complete: bool,
    global: CochainComplex,
    local: Vec<LocalData>,
}

impl Clone for ArithmeticModel {
    fn clone(&self) -> Self {
        ArithmeticModel::new(self.group.clone(), self.mu.clone(), self.places.clone(), self.chebotarev_complete)
            .expect("already validated")
    }
}

impl ArithmeticModel {
    pub fn new(
        group: Arc<FiniteGroup>,
        mu: Arc<GModule>,
        places: Vec<Place>,
        chebotarev_complete: bool,
    ) -> Result<ArithmeticModel> {
        if !mu.carrier().is_cyclic() {
            return Err(Error::NonCyclicCoefficients(mu.carrier().factors().to_vec()));
        }
        if !mu.group().same_table(&group) {
            return Err(Error::Mismatch("coefficients over a different group".into()));
        }
        let global = CochainComplex::new(mu.clone());
        global.cohomology(2)?;
        let mut local = Vec::with_capacity(places.len());
        for p in &places {
            if !p.subgroup.parent().same_table(&group) {
                return Err(Error::InvalidPlace { place: p.name.clone(), reason: "subgroup of a different group".into() });
            }
            let lmu = Arc::new(mu.restrict(&p.subgroup)?);
            let complex = CochainComplex::new(lmu.clone());
            let rank = complex.cohomology(2)?.structure().rank();
            if p.inv.len() != rank {
                return Err(Error::InvalidPlace {
                    place: p.name.clone(),
                    reason: format!("{} invariant values given, H² has {rank} generators", p.inv.len()),
                });
            }
            local.push(LocalData { mu: lmu, complex });
        }
        Ok(ArithmeticModel { group, mu, places, chebotarev_complete, global, local })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn mu(&self) -> &Arc<GModule> {
        &self.mu
    }

    /// `m` with `μ = Z/m`.
    pub fn modulus(&self) -> u64 {
        self.mu.carrier().exponent()
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn chebotarev_complete(&self) -> bool {
        self.chebotarev_complete
    }

    pub fn global_complex(&self) -> &CochainComplex {
        &self.global
    }

    pub fn global_h2(&self) -> &CohomologyGroup {
        self.global.cohomology(2).expect("computed at construction")
    }

    pub fn local_mu(&self, v: usize) -> &Arc<GModule> {
        &self.local[v].mu
    }

    pub fn local_complex(&self, v: usize) -> &CochainComplex {
        &self.local[v].complex
    }

    pub fn local_h2(&self, v: usize) -> &CohomologyGroup {
        self.local[v].complex.cohomology(2).expect("computed at construction")
    }

    /// The same model with places reordered: `order[k]` is the old index
    /// of the new `k`-th place.
    pub fn permuted(&self, order: &[usize]) -> ArithmeticModel {
        let places = order.iter().map(|&i| self.places[i].clone()).collect();
        ArithmeticModel::new(self.group.clone(), self.mu.clone(), places, self.chebotarev_complete)
            .expect("same places")
    }

    pub fn with_places(&self, places: Vec<Place>) -> Result<ArithmeticModel> {
        ArithmeticModel::new(self.group.clone(), self.mu.clone(), places, self.chebotarev_complete)
    }

    /// `inv_v` of a 2-cocycle on `D_v` with coefficients `μ|D_v`.
    pub fn inv_eval(&self, v: usize, z: &Cochain) -> Result<QmodZ> {
        if z.degree() != 2 || !same_module(z.module(), &self.local[v].mu) {
            return Err(Error::Mismatch(format!("not a 2-cochain over the coefficients at '{}'", self.places[v].name)));
        }
        let coords = self.local_h2(v).reduce(z)?;
        Ok(coords.iter().zip(&self.places[v].inv).map(|(&c, q)| q.times(c as i128)).sum())
    }

    /// `Σ_v inv_v(res_v w)` for a global 2-cocycle.
    pub fn reciprocity_sum(&self, w: &Cochain) -> Result<QmodZ> {
        Ok(self.reciprocity_terms(w)?.into_iter().sum())
    }

    fn reciprocity_terms(&self, w: &Cochain) -> Result<Vec<QmodZ>> {
        (0..self.places.len())
            .map(|v| {
                let local = w.restrict_into(&self.places[v].subgroup, self.local[v].mu.clone())?;
                self.inv_eval(v, &local)
            })
            .collect()
    }
}

/// Outcome of checking one axiom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AxiomStatus {
    Pass,
    Fail,
    NotRequired,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct A1Failure {
    pub place: String,
    pub generator: usize,
    pub value: QmodZ,
    pub order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct A2Failure {
    pub generator: usize,
    pub sum: QmodZ,
    /// `inv_v(res_v w)` per place, in place order
    pub terms: Vec<QmodZ>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct A3Failure {
    pub generator: usize,
    pub elements: Vec<usize>,
}

/// Axiom check results with counterexamples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub a1: AxiomStatus,
    pub a1_failures: Vec<A1Failure>,
    pub a2: AxiomStatus,
    pub a2_failures: Vec<A2Failure>,
    pub a3: AxiomStatus,
    pub a3_failures: Vec<A3Failure>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.a1 != AxiomStatus::Fail && self.a2 != AxiomStatus::Fail && self.a3 != AxiomStatus::Fail
    }
}

/// A1: each invariant map is a homomorphism; A2: reciprocity on the
/// canonical generators of `H²(G, μ)`; A3 (when declared): every cyclic
/// subgroup lies in some decomposition group.
pub fn check_axioms(model: &ArithmeticModel) -> Result<AxiomReport> {
    let mut a1_failures = Vec::new();
    for (v, p) in model.places.iter().enumerate() {
        for (i, (&d, &q)) in model.local_h2(v).structure().factors().iter().zip(&p.inv).enumerate() {
            if d % q.order() != 0 {
                a1_failures.push(A1Failure { place: p.name.clone(), generator: i, value: q, order: d });
            }
        }
    }
    let mut a2_failures = Vec::new();
    for (j, w) in model.global_h2().representatives().iter().enumerate() {
        let terms = model.reciprocity_terms(w)?;
        let sum: QmodZ = terms.iter().copied().sum();
        if !sum.is_zero() {
            a2_failures.push(A2Failure { generator: j, sum, terms });
        }
    }
    let mut a3_failures = Vec::new();
    let a3 = if model.chebotarev_complete {
        for c in cyclic_subgroups(&model.group) {
            if !model.places.iter().any(|p| c.is_subgroup_of(&p.subgroup)) {
                a3_failures.push(A3Failure { generator: c.generator().unwrap(), elements: c.elements().to_vec() });
            }
        }
        status(a3_failures.is_empty())
    } else {
        AxiomStatus::NotRequired
    };
    Ok(AxiomReport {
        a1: status(a1_failures.is_empty()),
        a1_failures,
        a2: status(a2_failures.is_empty()),
        a2_failures,
        a3,
        a3_failures,
    })
}

fn status(ok: bool) -> AxiomStatus {
    if ok {
        AxiomStatus::Pass
    } else {
        AxiomStatus::Fail
    }
}

/// Fails with [`Error::AxiomFailure`] unless the model passes every axiom.
pub fn require_axioms(model: &ArithmeticModel) -> Result<()> {
    let report = check_axioms(model)?;
    if report.passed() {
        return Ok(());
    }
    let mut parts = Vec::new();
    if report.a1 == AxiomStatus::Fail {
        parts.push("A1");
    }
    if report.a2 == AxiomStatus::Fail {
        parts.push("A2");
    }
    if report.a3 == AxiomStatus::Fail {
        parts.push("A3");
    }
    Err(Error::AxiomFailure(parts.join(", ")))
}

/// Places at every cyclic subgroup, named `c0, c1, …` in the canonical
/// order, with zero invariants.
pub fn cyclic_places(model_group: &Arc<FiniteGroup>, mu: &Arc<GModule>) -> Result<Vec<Place>> {
    cyclic_subgroups(model_group)
        .into_iter()
        .enumerate()
        .map(|(k, s)| {
            let local = Arc::new(mu.restrict(&s)?);
            let rank = CochainComplex::new(local).cohomology(2)?.structure().rank();
            Ok(Place::new(format!("c{k}"), s, vec![QmodZ::ZERO; rank]))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named;
    use crate::zmodule::FinAb;

    fn z2_model(invs: &[&[&str]]) -> ArithmeticModel {
        let g = Arc::new(named::cyclic(2));
        let mu = Arc::new(GModule::trivial(g.clone(), FinAb::cyclic(2)));
        let places = invs
            .iter()
            .enumerate()
            .map(|(k, inv)| {
                Place::new(format!("v{k}"), Subgroup::whole(g.clone()), inv.iter().map(|s| s.parse().unwrap()).collect())
            })
            .collect();
        ArithmeticModel::new(g, mu, places, false).unwrap()
    }

    #[test]
    fn single_place_forces_zero() {
        let bad = z2_model(&[&["1/2"]]);
        let report = check_axioms(&bad).unwrap();
        assert_eq!(report.a1, AxiomStatus::Pass);
        assert_eq!(report.a2, AxiomStatus::Fail);
        assert_eq!(report.a2_failures[0].sum, "1/2".parse().unwrap());
        assert!(require_axioms(&bad).is_err());
        assert!(check_axioms(&z2_model(&[&["0"]])).unwrap().passed());
    }

    #[test]
    fn opposite_places_cancel() {
        assert!(check_axioms(&z2_model(&[&["1/2"], &["1/2"]])).unwrap().passed());
        let report = check_axioms(&z2_model(&[&["1/3"], &["0"]])).unwrap();
        assert_eq!(report.a1, AxiomStatus::Fail);
        assert_eq!(report.a1_failures[0].order, 2);
    }

    #[test]
    fn wrong_number_of_invariants() {
        let g = Arc::new(named::cyclic(2));
        let mu = Arc::new(GModule::trivial(g.clone(), FinAb::cyclic(2)));
        let p = Place::new("v", Subgroup::whole(g.clone()), vec![]);
        assert!(matches!(ArithmeticModel::new(g, mu, vec![p], false), Err(Error::InvalidPlace { .. })));
    }

    #[test]
    fn inv_eval_is_linear_and_kills_coboundaries() {
        let m = z2_model(&[&["1/2"], &["1/2"]]);
        let h2 = m.local_h2(0);
        let gen = h2.representatives()[0].clone();
        assert_eq!(m.inv_eval(0, &gen).unwrap(), "1/2".parse().unwrap());
        assert!(m.inv_eval(0, &gen.add(&gen).unwrap()).unwrap().is_zero());
        let c = Cochain::from_fn(m.local_mu(0).clone(), 1, |_| vec![1]).unwrap();
        assert!(m.inv_eval(0, &c.differential().unwrap()).unwrap().is_zero());
    }

    #[test]
    fn chebotarev_coverage() {
        let g = Arc::new(named::klein_four());
        let mu = Arc::new(GModule::trivial(g.clone(), FinAb::cyclic(2)));
        let mut places = cyclic_places(&g, &mu).unwrap();
        let model = ArithmeticModel::new(g.clone(), mu.clone(), places.clone(), true).unwrap();
        assert_eq!(check_axioms(&model).unwrap().a3, AxiomStatus::Pass);
        places.pop();
        let model = ArithmeticModel::new(g, mu, places, true).unwrap();
        let report = check_axioms(&model).unwrap();
        assert_eq!(report.a3, AxiomStatus::Fail);
        assert_eq!(report.a3_failures.len(), 1);
    }
}
