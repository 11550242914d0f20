use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// A subgroup given by its sorted element set. It also carries itself as an
/// abstract group whose element `i` is `elements[i]` of the parent.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    elements: Vec<usize>,
    group: Arc<FiniteGroup>,
    generator: Option<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements && self.parent.same_table(&other.parent)
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    pub fn new(parent: Arc<FiniteGroup>, mut elements: Vec<usize>) -> Result<Subgroup> {
        elements.sort_unstable();
        elements.dedup();
        if elements.first() != Some(&0) {
            return Err(Error::NotASubgroup("identity missing".into()));
        }
        if let Some(&x) = elements.iter().find(|&&x| x >= parent.order()) {
            return Err(Error::NotASubgroup(format!("element {x} out of range")));
        }
        let local = |x: usize| elements.binary_search(&x).ok();
        for &a in &elements {
            if local(parent.inv(a)).is_none() {
                return Err(Error::NotASubgroup(format!("not closed under inverse at {a}")));
            }
            for &b in &elements {
                if local(parent.mul(a, b)).is_none() {
                    return Err(Error::NotASubgroup(format!("not closed at ({a}, {b})")));
                }
            }
        }
        let rows: Vec<Vec<usize>> = elements
            .iter()
            .map(|&a| elements.iter().map(|&b| local(parent.mul(a, b)).unwrap()).collect())
            .collect();
        let mut group = FiniteGroup::from_table(rows)?;
        if let Some(labels) = parent.labels() {
            group = group.with_labels(elements.iter().map(|&a| labels[a].clone()).collect());
        }
        Ok(Subgroup { parent, elements, group: Arc::new(group), generator: None })
    }

    pub fn generated_by(parent: Arc<FiniteGroup>, gens: &[usize]) -> Result<Subgroup> {
        let elements = parent.close(gens);
        Subgroup::new(parent, elements)
    }

    pub fn whole(parent: Arc<FiniteGroup>) -> Subgroup {
        let elements: Vec<usize> = parent.elements().collect();
        Subgroup {
            group: parent.clone(),
            parent,
            elements,
            generator: None,
        }
    }

    pub fn trivial(parent: Arc<FiniteGroup>) -> Subgroup {
        Subgroup::new(parent, vec![0]).expect("trivial subgroup")
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    /// Sorted parent indices.
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// Local index of a parent element.
    pub fn local_index(&self, x: usize) -> Option<usize> {
        self.elements.binary_search(&x).ok()
    }

    /// The subgroup as a group in its own right.
    pub fn as_group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    /// Parent index of local element `i`.
    pub fn embed(&self, i: usize) -> usize {
        self.elements[i]
    }

    /// Designated generator (parent index) when this is a cyclic subgroup
    /// produced by [`cyclic_subgroups`].
    pub fn generator(&self) -> Option<usize> {
        self.generator
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn is_normal(&self) -> bool {
        self.parent
            .elements()
            .all(|g| self.elements.iter().all(|&h| self.contains(self.parent.conj(g, h))))
    }
}

/// All cyclic subgroups, ordered lexicographically by sorted element set.
/// Each carries the smallest element generating it.
pub fn cyclic_subgroups(g: &Arc<FiniteGroup>) -> Vec<Subgroup> {
    let mut by_set: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for a in g.elements() {
        let set = g.close(&[a]);
        by_set.entry(set).or_insert(a);
    }
    by_set
        .into_iter()
        .map(|(els, gen)| {
            let mut s = Subgroup::new(g.clone(), els).expect("cyclic subgroup");
            s.generator = Some(gen);
            s
        })
        .collect()
}

/// Every subgroup, ordered lexicographically by sorted element set.
pub fn all_subgroups(g: &Arc<FiniteGroup>) -> Vec<Subgroup> {
    let mut found: std::collections::BTreeSet<Vec<usize>> = std::collections::BTreeSet::new();
    let mut frontier = vec![vec![0usize]];
    found.insert(vec![0]);
    while let Some(s) = frontier.pop() {
        for x in g.elements() {
            if s.binary_search(&x).is_ok() {
                continue;
            }
            let mut gens = s.clone();
            gens.push(x);
            let t = g.close(&gens);
            if found.insert(t.clone()) {
                frontier.push(t);
            }
        }
    }
    found.into_iter().map(|els| Subgroup::new(g.clone(), els).expect("closure is a subgroup")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named;

    #[test]
    fn cyclic_subgroups_of_small_groups() {
        assert_eq!(cyclic_subgroups(&Arc::new(named::cyclic(4))).len(), 3);
        let klein = cyclic_subgroups(&Arc::new(named::klein_four()));
        assert_eq!(klein.len(), 4);
        assert_eq!(klein.iter().filter(|s| s.order() == 2).count(), 3);
        assert_eq!(cyclic_subgroups(&Arc::new(named::symmetric(3))).len(), 5);
    }

    #[test]
    fn cyclic_subgroups_match_element_order_enumeration() {
        // Brute force: a cyclic subgroup of order k has φ(k) generators.
        for g in [named::symmetric(3), named::dihedral(4), named::quaternion(), named::cyclic(12)] {
            let g = Arc::new(g);
            let subs = cyclic_subgroups(&g);
            let phi = |k: usize| (1..=k).filter(|&i| num_integer::gcd(i, k) == 1).count();
            let total: usize = subs.iter().map(|s| phi(s.order())).sum();
            assert_eq!(total, g.order());
            for s in &subs {
                assert_eq!(g.close(&[s.generator().unwrap()]), s.elements());
            }
        }
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(all_subgroups(&Arc::new(named::symmetric(3))).len(), 6);
        assert_eq!(all_subgroups(&Arc::new(named::klein_four())).len(), 5);
        assert_eq!(all_subgroups(&Arc::new(named::dihedral(4))).len(), 10);
        assert_eq!(all_subgroups(&Arc::new(named::quaternion())).len(), 6);
        assert_eq!(all_subgroups(&Arc::new(named::elementary_abelian(2, 3))).len(), 16);
    }

    #[test]
    fn rejects_non_closed_sets() {
        let g = Arc::new(named::symmetric(3));
        let t = (1..6).find(|&x| g.element_order(x) == 2).unwrap();
        let u = (1..6).find(|&x| g.element_order(x) == 2 && x != t).unwrap();
        assert!(Subgroup::new(g.clone(), vec![0, t, u]).is_err());
        assert!(Subgroup::new(g, vec![1]).is_err());
    }
}
