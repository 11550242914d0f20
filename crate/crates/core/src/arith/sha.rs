use std::collections::BTreeMap;
use std::sync::Arc;

use crate::arith::ArithmeticModel;
use crate::cochain::{Cochain, CochainComplex, CohomologyGroup};
use crate::error::{Error, Result};
use crate::group::Subgroup;
use crate::zmodule::{FinAb, GModule, IntMatrix, KernelSubgroup};

/// `Sha^i(G, M)`: classes restricting to zero at every declared place.
#[derive(Clone, Debug)]
pub struct Sha {
    degree: usize,
    ambient: FinAb,
    structure: FinAb,
    generators: Vec<Vec<i64>>,
    representatives: Vec<Cochain>,
    local_primitives: Vec<Vec<(String, Cochain)>>,
}

impl Sha {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The structure of `H^i(G, M)`.
    pub fn ambient(&self) -> &FinAb {
        &self.ambient
    }

    pub fn structure(&self) -> &FinAb {
        &self.structure
    }

    pub fn is_trivial(&self) -> bool {
        self.structure.is_trivial()
    }

    /// Generators in the coordinates of `H^i(G, M)`.
    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn representatives(&self) -> &[Cochain] {
        &self.representatives
    }

    /// For each generator, per place, a cochain `c_v` with `d c_v = res_v z`.
    pub fn local_primitives(&self) -> &[Vec<(String, Cochain)>] {
        &self.local_primitives
    }
}

/// `Sha^i` for `i ∈ {1, 2}` over the places of the model.
pub fn sha(model: &ArithmeticModel, module: &Arc<GModule>, degree: usize) -> Result<Sha> {
    if !(1..=2).contains(&degree) {
        return Err(Error::DegreeTooHigh(degree));
    }
    if !module.group().same_table(model.group()) {
        return Err(Error::Mismatch("module over a different group".into()));
    }
    let global = CochainComplex::new(module.clone());
    let h = global.cohomology(degree)?;

    let mut subgroups: BTreeMap<Vec<usize>, &Subgroup> = BTreeMap::new();
    for p in model.places() {
        subgroups.entry(p.subgroup().elements().to_vec()).or_insert(p.subgroup());
    }
    let mut locals: Vec<(Arc<GModule>, CochainComplex)> = Vec::new();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut moduli: Vec<u64> = Vec::new();
    for s in subgroups.values() {
        let lm = Arc::new(module.restrict(s)?);
        let complex = CochainComplex::new(lm.clone());
        let lh = complex.cohomology(degree)?;
        let images = restricted_coordinates(h, s, &lm, lh)?;
        for (k, &d) in lh.structure().factors().iter().enumerate() {
            rows.push(images.iter().map(|c| c[k] as i64).collect());
            moduli.push(d);
        }
        locals.push((lm, complex));
    }
    let cols = h.structure().rank();
    let matrix = if rows.is_empty() { IntMatrix::zeros(0, cols) } else { IntMatrix::from_rows(&rows) };
    let kernel = KernelSubgroup::of_map(h.structure(), &matrix, &moduli);

    let generators = kernel.generators().to_vec();
    let representatives: Vec<Cochain> =
        generators.iter().map(|g| h.cocycle(&g.iter().map(|&x| x as u64).collect::<Vec<_>>())).collect();
    let mut local_primitives = Vec::new();
    for z in &representatives {
        let mut per_place = Vec::new();
        for p in model.places() {
            let k = subgroups.keys().position(|e| e == p.subgroup().elements()).unwrap();
            let (lm, complex) = &locals[k];
            let local = z.restrict_into(p.subgroup(), lm.clone())?;
            let c = complex
                .solve_coboundary(&local)?
                .into_primitive()
                .expect("element of the kernel restricts to a coboundary");
            per_place.push((p.name().to_string(), c));
        }
        local_primitives.push(per_place);
    }
    Ok(Sha {
        degree,
        ambient: h.structure().clone(),
        structure: kernel.structure().clone(),
        generators,
        representatives,
        local_primitives,
    })
}

fn restricted_coordinates(
    h: &CohomologyGroup,
    s: &Subgroup,
    local_module: &Arc<GModule>,
    local: &CohomologyGroup,
) -> Result<Vec<Vec<u64>>> {
    h.representatives()
        .iter()
        .map(|z| local.reduce(&z.restrict_into(s, local_module.clone())?))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{cyclic_places, Place};
    use crate::group::named;
    use crate::zmodule::GModule;

    #[test]
    fn trivial_when_the_whole_group_is_a_place() {
        let g = Arc::new(named::klein_four());
        let mu = Arc::new(GModule::trivial(g.clone(), FinAb::cyclic(2)));
        let whole = Place::new("w", Subgroup::whole(g.clone()), vec![Default::default(); 3]);
        let model = ArithmeticModel::new(g.clone(), mu.clone(), vec![whole], false).unwrap();
        for i in 1..=2 {
            assert!(sha(&model, &mu, i).unwrap().is_trivial());
        }
    }

    #[test]
    fn cyclic_places_detect_nothing_for_trivial_z2() {
        // Hom(V4, Z/2) is detected on cyclic subgroups
        let g = Arc::new(named::klein_four());
        let mu = Arc::new(GModule::trivial(g.clone(), FinAb::cyclic(2)));
        let model = ArithmeticModel::new(g.clone(), mu.clone(), cyclic_places(&g, &mu).unwrap(), true).unwrap();
        let s1 = sha(&model, &mu, 1).unwrap();
        assert!(s1.is_trivial());
        // quadratic forms on F_2^2 are detected on lines
        let s2 = sha(&model, &mu, 2).unwrap();
        assert_eq!(s2.ambient().factors(), &[2, 2, 2]);
        assert!(s2.is_trivial());
    }

    #[test]
    fn no_places_gives_everything() {
        let g = Arc::new(named::cyclic(4));
        let mu = Arc::new(GModule::trivial(g.clone(), FinAb::cyclic(4)));
        let model = ArithmeticModel::new(g, mu.clone(), vec![], false).unwrap();
        let s = sha(&model, &mu, 1).unwrap();
        assert_eq!(s.structure().factors(), &[4]);
        assert!(s.local_primitives()[0].is_empty());
    }
}
