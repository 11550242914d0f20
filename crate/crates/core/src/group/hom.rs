use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

#[derive(Clone, Debug)]
pub struct GroupHom {
    domain: Arc<FiniteGroup>,
    codomain: Arc<FiniteGroup>,
    image: Vec<usize>,
}

impl GroupHom {
    pub fn new(domain: Arc<FiniteGroup>, codomain: Arc<FiniteGroup>, image: Vec<usize>) -> Result<GroupHom> {
        if image.len() != domain.order() {
            return Err(Error::NotAHomomorphism(format!(
                "image list has length {}, domain has order {}",
                image.len(),
                domain.order()
            )));
        }
        if let Some(&x) = image.iter().find(|&&x| x >= codomain.order()) {
            return Err(Error::NotAHomomorphism(format!("image {x} out of range")));
        }
        if image[0] != 0 {
            return Err(Error::NotAHomomorphism("identity not preserved".into()));
        }
        for a in domain.elements() {
            for b in domain.elements() {
                if image[domain.mul(a, b)] != codomain.mul(image[a], image[b]) {
                    return Err(Error::NotAHomomorphism(format!("fails on ({a}, {b})")));
                }
            }
        }
        Ok(GroupHom { domain, codomain, image })
    }

    /// The homomorphism sending `gens[i]` to `images[i]`, if one exists.
    pub fn from_generators(
        domain: Arc<FiniteGroup>,
        codomain: Arc<FiniteGroup>,
        gens: &[usize],
        images: &[usize],
    ) -> Result<GroupHom> {
        if domain.close(gens).len() != domain.order() {
            return Err(Error::NotAHomomorphism("elements do not generate the domain".into()));
        }
        let mut map = vec![usize::MAX; domain.order()];
        map[0] = 0;
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (&g, &img) in gens.iter().zip(images) {
                let y = domain.mul(x, g);
                let v = codomain.mul(map[x], img);
                if map[y] == usize::MAX {
                    map[y] = v;
                    queue.push_back(y);
                } else if map[y] != v {
                    return Err(Error::NotAHomomorphism(format!("inconsistent at element {y}")));
                }
            }
        }
        GroupHom::new(domain, codomain, map)
    }

    pub fn identity(g: Arc<FiniteGroup>) -> GroupHom {
        let image = g.elements().collect();
        GroupHom { domain: g.clone(), codomain: g, image }
    }

    pub fn domain(&self) -> &Arc<FiniteGroup> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FiniteGroup> {
        &self.codomain
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.image[a]
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    pub fn kernel(&self) -> Vec<usize> {
        self.domain.elements().filter(|&a| self.image[a] == 0).collect()
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.codomain.order()];
        for &x in &self.image {
            hit[x] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().len() == 1
    }

    pub fn compose(&self, after: &GroupHom) -> Result<GroupHom> {
        if !self.codomain.same_table(&after.domain) {
            return Err(Error::NotAHomomorphism("composition of incompatible maps".into()));
        }
        Ok(GroupHom {
            domain: self.domain.clone(),
            codomain: after.codomain.clone(),
            image: self.image.iter().map(|&x| after.image[x]).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named;

    #[test]
    fn sign_map_of_s3() {
        let s3 = Arc::new(named::symmetric(3));
        let z2 = Arc::new(named::cyclic(2));
        let image: Vec<usize> = s3.elements().map(|a| if s3.element_order(a) == 2 { 1 } else { 0 }).collect();
        let sign = GroupHom::new(s3.clone(), z2.clone(), image).unwrap();
        assert_eq!(sign.kernel().len(), 3);
        assert!(sign.is_surjective());
        // preserves orders up to division
        for a in s3.elements() {
            assert_eq!(s3.element_order(a) % z2.element_order(sign.apply(a)), 0);
        }
        let bad: Vec<usize> = s3.elements().map(|a| (a == 1) as usize).collect();
        assert!(GroupHom::new(s3, z2, bad).is_err());
    }
}
