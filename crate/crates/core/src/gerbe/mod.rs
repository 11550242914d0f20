//! Gerbes over a finite Galois group `G`, represented by group extensions
//! `1 → H → Γ → G → 1` with `H` possibly nonabelian.

mod brauer;
mod local;
mod search;
mod verify;

use std::sync::Arc;

use crate::cochain::Cochain;
use crate::error::{Error, Result};
use crate::group::{abelian_structure, abelianization, Abelianization, FiniteGroup, GroupHom};
use crate::zmodule::{FinAb, GModule};

pub use brauer::{
    brauer_a, brauer_manin, brauer_manin_with, enlarged_model, picard_geom, BMFunctional, BrauerManin, Choices,
    GeneratorTrace, PlaceTrace, DEFAULT_PERTURBATIONS,
};
pub use local::{local_pairing, local_sections, require_local_sections, sections_over, torsor_difference, LocalSection, TorsorClass};
pub use search::{search_mh_witness, MhWitness};
pub use verify::{verify_factorization, FactorizationReport};

/// An extension `1 → H → Γ → G → 1`.
#[derive(Clone, Debug)]
pub struct GerbeExtension {
    pi: GroupHom,
    iota: GroupHom,
    preimage: Vec<Option<usize>>,
    abelian: Abelianization,
}

impl GerbeExtension {
    /// `π: Γ → G` surjective, `ι: H → Γ` injective with image `ker π`.
    pub fn new(pi: GroupHom, iota: GroupHom) -> Result<GerbeExtension> {
        if !iota.codomain().same_table(pi.domain()) {
            return Err(Error::InvalidExtension("ι and π do not share the middle group".into()));
        }
        if !pi.is_surjective() {
            return Err(Error::InvalidExtension("π is not surjective".into()));
        }
        if !iota.is_injective() {
            return Err(Error::InvalidExtension("ι is not injective".into()));
        }
        let mut image: Vec<usize> = iota.images().to_vec();
        image.sort_unstable();
        if image != pi.kernel() {
            return Err(Error::InvalidExtension("image of ι differs from the kernel of π".into()));
        }
        let mut preimage = vec![None; pi.domain().order()];
        for (h, &x) in iota.images().iter().enumerate() {
            preimage[x] = Some(h);
        }
        let abelian = abelianization(iota.domain());
        Ok(GerbeExtension { pi, iota, preimage, abelian })
    }

    /// Γ on pairs `(h, g)`, index `h·|G| + g`, with
    /// `(h₁, g₁)(h₂, g₂) = (h₁ · φ_{g₁}(h₂) · f(g₁, g₂), g₁g₂)`.
    ///
    /// `phi[g]` lists the images of the elements of `H`; `f` must vanish
    /// when either argument is the identity.
    pub fn twisted_product(
        h: Arc<FiniteGroup>,
        g: Arc<FiniteGroup>,
        phi: &[Vec<usize>],
        f: impl Fn(usize, usize) -> usize,
    ) -> Result<GerbeExtension> {
        let (nh, ng) = (h.order(), g.order());
        if phi.len() != ng || phi.iter().any(|p| p.len() != nh) {
            return Err(Error::InvalidExtension("one automorphism image list per element of G required".into()));
        }
        let mut table = vec![vec![0usize; nh * ng]; nh * ng];
        for (x, row) in table.iter_mut().enumerate() {
            let (h1, g1) = (x / ng, x % ng);
            for (y, entry) in row.iter_mut().enumerate() {
                let (h2, g2) = (y / ng, y % ng);
                let hh = h.mul(h.mul(h1, phi[g1][h2]), f(g1, g2));
                *entry = hh * ng + g.mul(g1, g2);
            }
        }
        let gamma = Arc::new(FiniteGroup::from_table(table).map_err(|e| Error::InvalidExtension(e.to_string()))?);
        let pi = GroupHom::new(gamma.clone(), g, (0..nh * ng).map(|x| x % ng).collect())
            .map_err(|e| Error::InvalidExtension(e.to_string()))?;
        let iota = GroupHom::new(h, gamma, (0..nh).map(|x| x * ng).collect())
            .map_err(|e| Error::InvalidExtension(e.to_string()))?;
        GerbeExtension::new(pi, iota)
    }

    /// The central twist of `H × G` by a 2-cocycle `f` with coefficients in a
    /// cyclic group: `embed[k]` is the central element of `H` standing for `k`.
    pub fn central_twist(h: Arc<FiniteGroup>, g: Arc<FiniteGroup>, f: &Cochain, embed: &[usize]) -> Result<GerbeExtension> {
        if f.degree() != 2 || !f.is_cocycle() || f.module().rank() != 1 || !f.module().is_trivial_action() {
            return Err(Error::InvalidExtension("twist must be a 2-cocycle with trivial cyclic coefficients".into()));
        }
        let m = f.module().carrier().exponent() as usize;
        if embed.len() != m || embed.iter().any(|&z| z >= h.order() || h.elements().any(|x| h.mul(x, z) != h.mul(z, x))) {
            return Err(Error::InvalidExtension("twist must land in the center".into()));
        }
        let phi = vec![h.elements().collect(); g.order()];
        GerbeExtension::twisted_product(h, g, &phi, |x, y| {
            if x == 0 || y == 0 {
                0
            } else {
                embed[f.value(&[x, y])[0] as usize]
            }
        })
    }

    /// `H × G`.
    pub fn direct_product(h: Arc<FiniteGroup>, g: Arc<FiniteGroup>) -> GerbeExtension {
        let phi = vec![h.elements().collect(); g.order()];
        GerbeExtension::twisted_product(h, g, &phi, |_, _| 0).expect("direct product")
    }

    pub fn gamma(&self) -> &Arc<FiniteGroup> {
        self.pi.domain()
    }

    pub fn base(&self) -> &Arc<FiniteGroup> {
        self.pi.codomain()
    }

    pub fn kernel(&self) -> &Arc<FiniteGroup> {
        self.iota.domain()
    }

    pub fn pi(&self) -> &GroupHom {
        &self.pi
    }

    pub fn iota(&self) -> &GroupHom {
        &self.iota
    }

    /// `ι⁻¹(x)` for `x ∈ ker π`.
    pub fn kernel_element(&self, x: usize) -> Option<usize> {
        self.preimage[x]
    }

    /// Image in `H^ab` of an element of `ker π`.
    pub fn project(&self, x: usize) -> &[i64] {
        self.abelian.project(self.preimage[x].expect("element of the kernel"))
    }

    pub fn abelianized_kernel(&self) -> &FinAb {
        self.abelian.structure()
    }

    pub fn fiber(&self, g: usize) -> Vec<usize> {
        self.gamma().elements().filter(|&x| self.pi.apply(x) == g).collect()
    }

    /// The lexicographically minimal normalized set-section: `s(g) = min π⁻¹(g)`.
    pub fn canonical_section(&self) -> Vec<usize> {
        let mut s = vec![usize::MAX; self.base().order()];
        for x in self.gamma().elements() {
            let g = self.pi.apply(x);
            if s[g] == usize::MAX {
                s[g] = x;
            }
        }
        s
    }

    fn check_section(&self, s: &[usize]) -> Result<()> {
        if s.len() != self.base().order() || s[0] != 0 {
            return Err(Error::InvalidExtension("section must be normalized and defined on all of G".into()));
        }
        if let Some(g) = (0..s.len()).find(|&g| s[g] >= self.gamma().order() || self.pi.apply(s[g]) != g) {
            return Err(Error::InvalidExtension(format!("section is not a lift at {g}")));
        }
        Ok(())
    }

    fn conjugation_module(&self, s: &[usize]) -> Result<GModule> {
        let gamma = self.gamma();
        let ab = self.abelianized_kernel().clone();
        let r = ab.rank();
        let lifts: Vec<usize> = (0..r).map(|j| self.iota.apply(self.abelian.lift(j))).collect();
        let action = (0..self.base().order())
            .map(|g| {
                let cols: Vec<&[i64]> = lifts.iter().map(|&l| self.project(gamma.conj(s[g], l))).collect();
                Some((0..r).map(|i| (0..r).map(|j| cols[j][i]).collect()).collect())
            })
            .collect();
        GModule::new(self.base().clone(), ab, action)
    }

    /// `H^ab` with the `G`-action induced by conjugation in `Γ`.
    pub fn band_module(&self) -> Result<GModule> {
        self.conjugation_module(&self.canonical_section())
    }
}

/// The class of an extension: the module `H^ab`, the set-section used and
/// `e(g₁, g₂) = [s(g₁)s(g₂)s(g₁g₂)⁻¹] ∈ H^ab`.
#[derive(Clone, Debug)]
pub struct GerbeClass {
    pub module: Arc<GModule>,
    pub section: Vec<usize>,
    pub cocycle: Cochain,
}

/// The class of `E` for the canonical section.
pub fn class_2cocycle(ext: &GerbeExtension) -> Result<GerbeClass> {
    class_with_section(ext, &ext.canonical_section())
}

/// The class of `E` computed from a given normalized set-section.
pub fn class_with_section(ext: &GerbeExtension, section: &[usize]) -> Result<GerbeClass> {
    ext.check_section(section)?;
    let module = Arc::new(ext.conjugation_module(section)?);
    let gamma = ext.gamma();
    let g = ext.base();
    let cocycle = Cochain::from_fn(module.clone(), 2, |t| {
        let (a, b) = (t[0], t[1]);
        let x = gamma.mul(gamma.mul(section[a], section[b]), gamma.inv(section[g.mul(a, b)]));
        ext.project(x).to_vec()
    })?;
    if !cocycle.is_cocycle() {
        return Err(Error::NotACocycle(2));
    }
    Ok(GerbeClass { module, section: section.to_vec(), cocycle })
}

/// The pushout along `H → H^ab` with the identification of its kernel.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub extension: GerbeExtension,
    /// image in `Γ/ι([H, H])` of every element of `Γ`
    pub projection: Vec<usize>,
    /// column `j`: the `j`-th generator of the new kernel in the `H^ab`
    /// coordinates of the original extension
    pub coordinates: Vec<Vec<i64>>,
}

/// `Γ/ι([H, H])` as an extension of `G` by `H^ab`.
pub fn abelianize_gerbe(ext: &GerbeExtension) -> Result<Pushout> {
    let gamma = ext.gamma();
    let h = ext.kernel();
    let derived = ext.abelian.commutator_subgroup();
    let normal: Vec<usize> = {
        let mut v: Vec<usize> = derived.iter().map(|&x| ext.iota.apply(x)).collect();
        v.sort_unstable();
        v
    };
    let (quotient, projection) = gamma.quotient(&normal)?;
    let quotient = Arc::new(quotient);
    let (hab, coset) = h.quotient(derived)?;
    let hab = Arc::new(hab);

    let mut rep = vec![usize::MAX; hab.order()];
    for (x, &c) in coset.iter().enumerate() {
        if rep[c] == usize::MAX {
            rep[c] = x;
        }
    }
    let pi_images: Vec<usize> = (0..quotient.order())
        .map(|q| ext.pi.apply(projection.iter().position(|&p| p == q).expect("surjective projection")))
        .collect();
    let pi = GroupHom::new(quotient.clone(), ext.base().clone(), pi_images)?;
    let iota_images = rep.iter().map(|&x| projection[ext.iota.apply(x)]).collect();
    let iota = GroupHom::new(hab.clone(), quotient, iota_images)?;
    let extension = GerbeExtension::new(pi, iota)?;

    let structure = abelian_structure(&hab);
    let r_new = structure.structure.rank();
    let r_old = ext.abelianized_kernel().rank();
    let cols: Vec<&[i64]> = (0..r_new).map(|j| ext.abelian.project(rep[extension.abelian.lift(j)])).collect();
    let coordinates = (0..r_old).map(|i| (0..r_new).map(|j| cols[j][i]).collect()).collect();
    Ok(Pushout { extension, projection, coordinates })
}

impl Pushout {
    /// Moves a cochain with coefficients in the pushout's kernel into the
    /// `H^ab` coordinates of the original extension.
    pub fn transport(&self, c: &Cochain, target: Arc<GModule>) -> Result<Cochain> {
        c.map_coefficients(target, &self.coordinates)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::cohomology;
    use crate::group::named;

    pub(crate) fn z4_over_z2() -> GerbeExtension {
        let z4 = Arc::new(named::cyclic(4));
        let z2 = Arc::new(named::cyclic(2));
        let pi = GroupHom::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
        let two = (0..4).find(|&x| z4.element_order(x) == 2).unwrap();
        let iota = GroupHom::new(z2, z4, vec![0, two]).unwrap();
        GerbeExtension::new(pi, iota).unwrap()
    }

    #[test]
    fn exactness_is_checked() {
        let z4 = Arc::new(named::cyclic(4));
        let z2 = Arc::new(named::cyclic(2));
        let gen = (0..4).find(|&x| z4.element_order(x) == 4).unwrap();
        let pi = GroupHom::new(z4.clone(), z2.clone(), (0..4).map(|x| usize::from(z4.element_order(x) == 4)).collect())
            .unwrap();
        let iota = GroupHom::new(z2.clone(), z4.clone(), vec![0, z4.mul(gen, gen)]).unwrap();
        assert!(GerbeExtension::new(pi.clone(), iota).is_ok());
        let trivial = GroupHom::new(Arc::new(named::cyclic(1)), z4, vec![0]).unwrap();
        assert!(matches!(GerbeExtension::new(pi, trivial), Err(Error::InvalidExtension(_))));
    }

    #[test]
    fn classes_of_z4_and_klein() {
        let e = class_2cocycle(&z4_over_z2()).unwrap();
        assert_eq!(cohomology(e.module.clone(), 2).unwrap().reduce(&e.cocycle).unwrap(), vec![1]);
        let z2 = Arc::new(named::cyclic(2));
        let split = class_2cocycle(&GerbeExtension::direct_product(z2.clone(), z2)).unwrap();
        assert!(split.cocycle.is_zero());
    }

    #[test]
    fn quaternion_over_klein_is_nonsplit() {
        let q = Arc::new(named::quaternion());
        let center = q.derived_subgroup();
        let (v4, proj) = q.quotient(&center).unwrap();
        let v4 = Arc::new(v4);
        let pi = GroupHom::new(q.clone(), v4, proj).unwrap();
        let z2 = Arc::new(named::cyclic(2));
        let iota = GroupHom::new(z2, q, center.clone()).unwrap();
        let ext = GerbeExtension::new(pi, iota).unwrap();
        let e = class_2cocycle(&ext).unwrap();
        let coords = cohomology(e.module.clone(), 2).unwrap().reduce(&e.cocycle).unwrap();
        assert!(coords.iter().any(|&c| c != 0));
        assert!(local::sections_over(&ext, &crate::group::Subgroup::whole(ext.base().clone())).is_empty());
    }

    #[test]
    fn induced_action_does_not_depend_on_the_section() {
        let s3 = Arc::new(named::symmetric(3));
        let c3: Vec<usize> = s3.derived_subgroup();
        let (z2, proj) = s3.quotient(&c3).unwrap();
        let pi = GroupHom::new(s3.clone(), Arc::new(z2), proj).unwrap();
        let r = c3[1];
        let iota = GroupHom::new(Arc::new(named::cyclic(3)), s3.clone(), (0..3).map(|k| s3.pow(r, k)).collect()).unwrap();
        check_sections(&GerbeExtension::new(pi, iota).unwrap());
    }

    fn check_sections(ext: &GerbeExtension) {
        let base = class_2cocycle(ext).unwrap();
        let h2 = cohomology(base.module.clone(), 2).unwrap();
        let fibers: Vec<Vec<usize>> = (0..ext.base().order()).map(|g| ext.fiber(g)).collect();
        let mut idx = vec![0usize; fibers.len()];
        loop {
            let s: Vec<usize> = (0..fibers.len()).map(|g| if g == 0 { 0 } else { fibers[g][idx[g]] }).collect();
            let c = class_with_section(ext, &s).unwrap();
            assert_eq!(*c.module, *base.module);
            assert_eq!(h2.reduce(&c.cocycle).unwrap(), h2.reduce(&base.cocycle).unwrap());
            let mut k = 1;
            loop {
                if k == fibers.len() {
                    return;
                }
                idx[k] += 1;
                if idx[k] < fibers[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    #[test]
    fn pushout_of_a_nonabelian_kernel() {
        let q = Arc::new(named::quaternion());
        let z2 = Arc::new(named::cyclic(2));
        let ext = GerbeExtension::direct_product(q, z2);
        let push = abelianize_gerbe(&ext).unwrap();
        assert_eq!(push.extension.kernel().order(), 4);
        assert_eq!(push.extension.gamma().order(), 8);
        let before = class_2cocycle(&ext).unwrap();
        let after = class_2cocycle(&push.extension).unwrap();
        let moved = push.transport(&after.cocycle, before.module.clone()).unwrap();
        let h2 = cohomology(before.module.clone(), 2).unwrap();
        assert_eq!(h2.reduce(&moved).unwrap(), h2.reduce(&before.cocycle).unwrap());
    }
}
