use std::sync::Arc;

use num_integer::Integer;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{search_inv_assignments, sha, ArithmeticModel, Sha, DEFAULT_SEARCH_BOUND};
use crate::cochain::{cup, CoboundarySolution, Cochain, CochainComplex, CohomologyGroup};
use crate::error::{Error, Result};
use crate::gerbe::local::{require_local_sections, LocalSection};
use crate::gerbe::{class_2cocycle, class_with_section, GerbeClass, GerbeExtension};
use crate::zmodule::{dual_module, FinAb, GModule, Pairing, QmodZ};

pub const DEFAULT_PERTURBATIONS: usize = 50;

fn check_exponent(a: &FinAb, mu: &GModule) -> Result<()> {
    let m = mu.carrier().exponent();
    if m % a.exponent() != 0 {
        return Err(Error::ExponentMismatch { exponent: a.exponent(), modulus: m });
    }
    Ok(())
}

/// `Ĥ = Hom(H^ab, μ)` with its Galois action.
pub fn picard_geom(ext: &GerbeExtension, mu: &Arc<GModule>) -> Result<GModule> {
    let a = ext.band_module()?;
    check_exponent(a.carrier(), mu)?;
    dual_module(&a, mu)
}

/// `H¹(G, Ĥ)`.
pub fn brauer_a(ext: &GerbeExtension, mu: &Arc<GModule>) -> Result<CohomologyGroup> {
    let hat = Arc::new(picard_geom(ext, mu)?);
    Ok(CochainComplex::new(hat).cohomology(1)?.clone())
}

/// A homomorphism `Sha¹(G, Ĥ) → Q/Z`, by its values on generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BMFunctional {
    /// invariant factors of `Sha¹(G, Ĥ)`
    pub domain: Vec<u64>,
    /// generators in the coordinates of `H¹(G, Ĥ)`
    pub generators: Vec<Vec<i64>>,
    pub values: Vec<QmodZ>,
}

impl BMFunctional {
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(QmodZ::is_zero)
    }
}

/// Choices entering the computation; `None` means the canonical choice.
#[derive(Clone, Debug, Default)]
pub struct Choices {
    /// normalized set-section `G → Γ`
    pub section: Option<Vec<usize>>,
    /// per place, an index into the sorted list of splittings
    pub splittings: Option<Vec<usize>>,
    /// per generator, a 0-cochain `m` in `Ĥ`; `b` is replaced by `b + dm`
    pub b_shift: Option<Vec<Cochain>>,
    /// per generator, a 2-cocycle in `μ` added to `γ`
    pub gamma_shift: Option<Vec<Cochain>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlaceTrace {
    pub place: String,
    pub splitting: Vec<usize>,
    pub c: Vec<i64>,
    pub w: Vec<i64>,
    pub inv: QmodZ,
}

/// Intermediate cochains for one generator of `Sha¹`.
#[derive(Clone, Debug, Serialize)]
pub struct GeneratorTrace {
    pub generator: usize,
    pub b: Vec<i64>,
    pub u: Vec<i64>,
    pub gamma: Vec<i64>,
    pub places: Vec<PlaceTrace>,
    pub value: QmodZ,
}

/// Everything `m_H` depends on, computed once.
#[derive(Debug)]
pub struct BrauerManin {
    ext: GerbeExtension,
    model: ArithmeticModel,
    class: GerbeClass,
    hat: Arc<GModule>,
    sha: Sha,
    sections: Vec<Vec<LocalSection>>,
    pairing: Pairing,
    local_a: Vec<Arc<GModule>>,
    local_pairings: Vec<Pairing>,
}

impl BrauerManin {
    pub fn new(ext: &GerbeExtension, model: &ArithmeticModel) -> Result<BrauerManin> {
        crate::arith::require_axioms(model)?;
        if !ext.base().same_table(model.group()) {
            return Err(Error::Mismatch("extension and model over different groups".into()));
        }
        let sections = require_local_sections(ext, model)?;
        let class = class_2cocycle(ext)?;
        let mu = model.mu().clone();
        check_exponent(class.module.carrier(), &mu)?;
        let hat = Arc::new(dual_module(&class.module, &mu)?);
        let sha = sha(model, &hat, 1)?;
        let pairing = Pairing::evaluation(hat.clone(), class.module.clone(), mu)?;
        let mut local_a = Vec::new();
        let mut local_pairings = Vec::new();
        for (v, p) in model.places().iter().enumerate() {
            let a = Arc::new(class.module.restrict(p.subgroup())?);
            let h = Arc::new(hat.restrict(p.subgroup())?);
            local_pairings.push(Pairing::evaluation(h, a.clone(), model.local_mu(v).clone())?);
            local_a.push(a);
        }
        Ok(BrauerManin {
            ext: ext.clone(),
            model: model.clone(),
            class,
            hat,
            sha,
            sections,
            pairing,
            local_a,
            local_pairings,
        })
    }

    pub fn extension(&self) -> &GerbeExtension {
        &self.ext
    }

    pub fn model(&self) -> &ArithmeticModel {
        &self.model
    }

    pub fn class(&self) -> &GerbeClass {
        &self.class
    }

    pub fn hat(&self) -> &Arc<GModule> {
        &self.hat
    }

    pub fn sha(&self) -> &Sha {
        &self.sha
    }

    pub fn sections(&self) -> &[Vec<LocalSection>] {
        &self.sections
    }

    pub(crate) fn local_module(&self, v: usize) -> &Arc<GModule> {
        &self.local_a[v]
    }

    /// A random choice of every ingredient.
    pub fn random_choices(&self, rng: &mut impl Rng) -> Result<Choices> {
        let g = self.ext.base();
        let section = (0..g.order())
            .map(|x| {
                if x == 0 {
                    0
                } else {
                    let f = self.ext.fiber(x);
                    f[rng.gen_range(0..f.len())]
                }
            })
            .collect();
        let splittings = self.sections.iter().map(|l| rng.gen_range(0..l.len())).collect();
        let n = self.sha.representatives().len();
        let mut b_shift = Vec::with_capacity(n);
        let mut gamma_shift = Vec::with_capacity(n);
        let h2 = self.model.global_h2();
        for _ in 0..n {
            b_shift.push(Cochain::random(self.hat.clone(), 0, rng)?);
            let mut xi = Cochain::random(self.model.mu().clone(), 1, rng)?.differential()?;
            for (rep, &d) in h2.representatives().iter().zip(h2.structure().factors()) {
                xi = xi.add(&rep.scale(rng.gen_range(0..d) as i64))?;
            }
            gamma_shift.push(xi);
        }
        Ok(Choices {
            section: Some(section),
            splittings: Some(splittings),
            b_shift: Some(b_shift),
            gamma_shift: Some(gamma_shift),
        })
    }

    pub fn evaluate(&self, choices: &Choices) -> Result<BMFunctional> {
        Ok(self.run(choices)?.0)
    }

    /// The functional together with all intermediate cochains.
    pub fn trace(&self, choices: &Choices) -> Result<(BMFunctional, Vec<GeneratorTrace>)> {
        self.run(choices)
    }

    fn run(&self, choices: &Choices) -> Result<(BMFunctional, Vec<GeneratorTrace>)> {
        let class = match &choices.section {
            Some(s) => class_with_section(&self.ext, s)?,
            None => self.class.clone(),
        };
        let gamma = self.ext.gamma();
        let mut primitives = Vec::with_capacity(self.sections.len());
        let mut used = Vec::with_capacity(self.sections.len());
        for (v, list) in self.sections.iter().enumerate() {
            let k = choices.splittings.as_ref().map_or(0, |c| c[v]);
            let sigma = list.get(k).ok_or_else(|| Error::Mismatch(format!("no splitting {k} at place {v}")))?;
            let sub = &sigma.subgroup;
            let c = Cochain::from_fn(self.local_a[v].clone(), 1, |t| {
                let d = t[0];
                let x = gamma.mul(class.section[sub.embed(d)], gamma.inv(sigma.images[d]));
                self.ext.project(x).to_vec()
            })?;
            let target = class.cocycle.restrict_into(sub, self.local_a[v].clone())?;
            if c.differential()? != target {
                return Err(Error::Mismatch(format!("local trivialization fails at place '{}'", sigma.place)));
            }
            primitives.push(c);
            used.push(sigma.images.clone());
        }
        self.combine(&class.cocycle, &primitives, &used, choices)
    }

    /// `m_H` from a class `e` in `H^ab` coordinates and local primitives
    /// `c_v` with `d c_v = res_v e`.
    pub(crate) fn combine(
        &self,
        e: &Cochain,
        primitives: &[Cochain],
        splittings: &[Vec<usize>],
        choices: &Choices,
    ) -> Result<(BMFunctional, Vec<GeneratorTrace>)> {
        let global = self.model.global_complex();
        let mut values = Vec::new();
        let mut traces = Vec::new();
        for (i, rep) in self.sha.representatives().iter().enumerate() {
            let mut b = rep.clone();
            if let Some(shift) = &choices.b_shift {
                b = b.add(&shift[i].differential()?)?;
            }
            let u = cup(&b, e, &self.pairing)?;
            let mut gamma = match global.solve_coboundary(&u)? {
                CoboundarySolution::Primitive(c) => c,
                CoboundarySolution::Obstruction(certificate) => {
                    return Err(Error::GlobalH3Obstruction { generator: i, certificate })
                }
            };
            if let Some(shift) = &choices.gamma_shift {
                if !shift[i].is_cocycle() {
                    return Err(Error::NotACocycle(2));
                }
                gamma = gamma.add(&shift[i])?;
            }
            let mut total = QmodZ::ZERO;
            let mut places = Vec::new();
            for (v, p) in self.model.places().iter().enumerate() {
                let sub = p.subgroup();
                let local_b = b.restrict_into(sub, self.local_pairings[v].left().clone())?;
                let w = gamma
                    .restrict_into(sub, self.model.local_mu(v).clone())?
                    .add(&cup(&local_b, &primitives[v], &self.local_pairings[v])?)?;
                if !w.is_cocycle() {
                    return Err(Error::NotACocycle(2));
                }
                let inv = self.model.inv_eval(v, &w)?;
                total += inv;
                places.push(PlaceTrace {
                    place: p.name().to_string(),
                    splitting: splittings[v].clone(),
                    c: primitives[v].values().to_vec(),
                    w: w.values().to_vec(),
                    inv,
                });
            }
            values.push(total);
            traces.push(GeneratorTrace {
                generator: i,
                b: b.values().to_vec(),
                u: u.values().to_vec(),
                gamma: gamma.values().to_vec(),
                places,
                value: total,
            });
        }
        let functional = BMFunctional {
            domain: self.sha.structure().factors().to_vec(),
            generators: self.sha.generators().to_vec(),
            values,
        };
        for (v, &d) in functional.values.iter().zip(&functional.domain) {
            if d % v.order() != 0 {
                return Err(Error::OrderMismatch { value: *v, order: d });
            }
        }
        Ok((functional, traces))
    }
}

/// `m_H(E)` with canonical choices.
pub fn brauer_manin(ext: &GerbeExtension, model: &ArithmeticModel) -> Result<BMFunctional> {
    BrauerManin::new(ext, model)?.evaluate(&Choices::default())
}

/// Like [`brauer_manin`]; on a degree-3 obstruction retries with `μ`
/// enlarged to `Z/(m·t)` for `t = 2, …, enlarge_bound`. Returns the model
/// actually used.
pub fn brauer_manin_with(
    ext: &GerbeExtension,
    model: &ArithmeticModel,
    enlarge_bound: Option<u64>,
) -> Result<(BMFunctional, ArithmeticModel)> {
    match brauer_manin(ext, model) {
        Err(err @ Error::GlobalH3Obstruction { .. }) => {
            for t in 2..=enlarge_bound.unwrap_or(1) {
                let Some(bigger) = enlarged_model(model, t)? else { continue };
                match brauer_manin(ext, &bigger) {
                    Ok(f) => return Ok((f, bigger)),
                    Err(Error::GlobalH3Obstruction { .. }) => continue,
                    Err(e) => return Err(e),
                }
            }
            Err(err)
        }
        other => other.map(|f| (f, model.clone())),
    }
}

/// The model with `μ = Z/m` replaced by `Z/(m·t)` along `x ↦ t·x`: the
/// character is lifted and the invariant maps are extended so that they
/// agree with the old ones on the image. The first such model in search
/// order, or `None`.
pub fn enlarged_model(model: &ArithmeticModel, t: u64) -> Result<Option<ArithmeticModel>> {
    let g = model.group();
    let m = model.modulus();
    let big = m * t;
    let gens = g.greedy_generators();
    let chi: Vec<u64> =
        gens.iter().map(|&x| if model.mu().rank() == 0 { 1 } else { model.mu().matrix(x)[0] as u64 }).collect();
    let candidates: Vec<Vec<u64>> =
        chi.iter().map(|&c| (0..big).filter(|&x| x % m == c % m && x.gcd(&big) == 1).collect()).collect();
    let mut idx = vec![0usize; gens.len()];
    let mu = 'search: loop {
        let mats: Vec<Vec<Vec<i64>>> = idx.iter().zip(&candidates).map(|(&i, c)| vec![vec![c[i] as i64]]).collect();
        if let Ok(mu) = GModule::from_generators(g.clone(), FinAb::cyclic(big), &gens, &mats) {
            break 'search Arc::new(mu);
        }
        let mut k = gens.len();
        loop {
            if k == 0 {
                return Ok(None);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < candidates[k].len() {
                break;
            }
            idx[k] = 0;
        }
    };
    let places: Vec<_> = model.places().iter().map(|p| (p.name().to_string(), p.subgroup().clone())).collect();
    let found = match search_inv_assignments(g, &mu, &places, model.chebotarev_complete(), DEFAULT_SEARCH_BOUND) {
        Ok(f) => f,
        Err(Error::SearchSpaceExceeded { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let embed = vec![vec![t as i64]];
    let mut images = Vec::new();
    for v in 0..model.places().len() {
        let big_local = Arc::new(mu.restrict(model.places()[v].subgroup())?);
        let reps: Vec<Cochain> = model
            .local_h2(v)
            .representatives()
            .iter()
            .map(|z| z.map_coefficients(big_local.clone(), &embed))
            .collect::<Result<_>>()?;
        images.push(reps);
    }
    for candidate in found {
        let compatible = (0..model.places().len()).all(|v| {
            images[v].iter().zip(model.places()[v].inv()).all(|(z, &old)| {
                let coords = candidate.local_h2(v).reduce(z).expect("embedded cocycle");
                let new: QmodZ =
                    coords.iter().zip(candidate.places()[v].inv()).map(|(&c, q)| q.times(c as i128)).sum();
                new == old
            })
        });
        if compatible {
            return Ok(Some(candidate));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Place;
    use crate::group::{named, Subgroup};

    fn trivial_mu(g: &Arc<crate::group::FiniteGroup>, m: u64) -> Arc<GModule> {
        Arc::new(GModule::trivial(g.clone(), FinAb::cyclic(m)))
    }

    #[test]
    fn perfect_kernels_have_no_algebraic_brauer_group() {
        let z2 = Arc::new(named::cyclic(2));
        for h in [named::alternating(5), named::special_linear_2(5)] {
            let ext = GerbeExtension::direct_product(Arc::new(h), z2.clone());
            let mu = trivial_mu(&z2, 2);
            assert!(brauer_a(&ext, &mu).unwrap().structure().is_trivial());
            assert_eq!(picard_geom(&ext, &mu).unwrap().rank(), 0);
        }
    }

    #[test]
    fn central_kernel_matches_the_direct_computation() {
        let z2 = Arc::new(named::cyclic(2));
        let ext = crate::gerbe::tests::z4_over_z2();
        let mu = trivial_mu(&z2, 2);
        assert_eq!(brauer_a(&ext, &mu).unwrap().structure().factors(), &[2]);
        let s3 = GerbeExtension::direct_product(Arc::new(named::symmetric(3)), z2.clone());
        assert_eq!(picard_geom(&s3, &mu).unwrap().carrier().factors(), &[2]);
        let z3 = GerbeExtension::direct_product(Arc::new(named::cyclic(3)), z2.clone());
        assert!(matches!(picard_geom(&z3, &mu), Err(Error::ExponentMismatch { .. })));
    }

    #[test]
    fn split_extension_over_a_model_gives_zero() {
        let g = Arc::new(named::klein_four());
        let mu = trivial_mu(&g, 2);
        let s3 = Arc::new(named::symmetric(3));
        let ext = GerbeExtension::direct_product(s3, g.clone());
        let places = crate::arith::cyclic_places(&g, &mu).unwrap();
        let model = ArithmeticModel::new(g.clone(), mu, places[..2].to_vec(), false).unwrap();
        let bm = BrauerManin::new(&ext, &model).unwrap();
        assert!(!bm.sha().is_trivial());
        let f = bm.evaluate(&Choices::default()).unwrap();
        assert!(f.is_zero());
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(5);
        for _ in 0..10 {
            assert_eq!(bm.evaluate(&bm.random_choices(&mut rng).unwrap()).unwrap(), f);
        }
    }

    #[test]
    fn nonneutral_place_is_reported() {
        let z2 = Arc::new(named::cyclic(2));
        let ext = crate::gerbe::tests::z4_over_z2();
        let mu = trivial_mu(&z2, 2);
        let p = Place::new("v", Subgroup::whole(z2.clone()), vec![QmodZ::ZERO]);
        let model = ArithmeticModel::new(z2, mu, vec![p], false).unwrap();
        assert_eq!(brauer_manin(&ext, &model), Err(Error::NotLocallyNeutral("v".into())));
    }

    #[test]
    fn enlargement_preserves_invariants() {
        let z2 = Arc::new(named::cyclic(2));
        let whole = Subgroup::whole(z2.clone());
        let invs = |q: &str| vec![q.parse::<QmodZ>().unwrap()];
        let model = |q: &str| {
            let places = vec![Place::new("a", whole.clone(), invs(q)), Place::new("b", whole.clone(), invs(q))];
            ArithmeticModel::new(z2.clone(), trivial_mu(&z2, 2), places, false).unwrap()
        };
        let bigger = enlarged_model(&model("0"), 2).unwrap().unwrap();
        assert_eq!(bigger.modulus(), 4);
        assert!(crate::arith::check_axioms(&bigger).unwrap().passed());
        // H²(Z/2, Z/2) → H²(Z/2, Z/4) is zero, so 1/2 cannot be kept
        assert!(enlarged_model(&model("1/2"), 2).unwrap().is_none());
    }
}
