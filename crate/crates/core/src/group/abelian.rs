use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::group::FiniteGroup;
use crate::zmodule::snf::{IntMatrix, Smith};
use crate::zmodule::FinAb;

/// Invariant-factor decomposition of an abelian group given by its table.
#[derive(Clone, Debug)]
pub struct AbelianStructure {
    pub structure: FinAb,
    /// coordinates of every element
    pub coords: Vec<Vec<i64>>,
    /// element mapped to the i-th standard basis vector
    pub basis: Vec<usize>,
}

pub fn abelian_structure(q: &FiniteGroup) -> AbelianStructure {
    debug_assert!(q.is_abelian());
    let gens = q.greedy_generators();
    let k = gens.len();
    // exponent vectors over the greedy generators
    let mut exps: Vec<Option<Vec<i64>>> = vec![None; q.order()];
    exps[0] = Some(vec![0; k]);
    let mut members = vec![0usize];
    let mut relations = IntMatrix::zeros(k, k);
    for (j, &g) in gens.iter().enumerate() {
        let mut t = 1;
        let mut x = g;
        while exps[x].is_none() {
            x = q.mul(x, g);
            t += 1;
        }
        let prior = exps[x].clone().unwrap();
        for i in 0..k {
            relations[(i, j)] = BigInt::from(-prior[i]);
        }
        relations[(j, j)] += BigInt::from(t);
        let mut grown = Vec::with_capacity(members.len() * t as usize);
        for &m in &members {
            let mut y = m;
            for s in 0..t {
                if s > 0 {
                    y = q.mul(y, g);
                    let mut v = exps[m].clone().unwrap();
                    v[j] = s;
                    exps[y] = Some(v);
                }
                grown.push(y);
            }
        }
        members = grown;
    }
    let smith = Smith::compute(&relations);
    let mut factors = Vec::new();
    let mut positions = Vec::new();
    for (i, d) in smith.diagonal().iter().enumerate() {
        let d = d.to_u64().expect("finite abelian group");
        if d != 1 {
            factors.push(d);
            positions.push(i);
        }
    }
    let structure = FinAb::new(factors).expect("Smith diagonal is a chain");
    let coords = exps
        .iter()
        .map(|e| {
            let mut v: Vec<BigInt> = e.as_ref().unwrap().iter().map(|&x| BigInt::from(x)).collect();
            smith.apply_u(&mut v);
            positions
                .iter()
                .zip(structure.factors())
                .map(|(&p, &d)| v[p].mod_floor(&BigInt::from(d)).to_i64().unwrap())
                .collect()
        })
        .collect();
    let basis = positions
        .iter()
        .map(|&p| {
            let mut e = vec![BigInt::from(0); k];
            e[p] = BigInt::from(1);
            smith.apply_u_inverse(&mut e);
            gens.iter().zip(&e).fold(0, |acc, (&g, x)| q.mul(acc, q.pow(g, x.to_i64().unwrap())))
        })
        .collect();
    AbelianStructure { structure, coords, basis }
}

/// `G → G/[G,G]` in invariant-factor coordinates.
#[derive(Clone, Debug)]
pub struct Abelianization {
    structure: FinAb,
    projection: Vec<Vec<i64>>,
    commutator: Vec<usize>,
    lifts: Vec<usize>,
}

pub fn abelianization(g: &FiniteGroup) -> Abelianization {
    let commutator = g.derived_subgroup();
    let (q, coset) = g.quotient(&commutator).expect("derived subgroup is normal");
    let s = abelian_structure(&q);
    let projection = coset.iter().map(|&c| s.coords[c].clone()).collect();
    // coset ids are numbered by smallest member, in increasing order
    let mut first = vec![usize::MAX; q.order()];
    for (x, &c) in coset.iter().enumerate() {
        if first[c] == usize::MAX {
            first[c] = x;
        }
    }
    let lifts = s.basis.iter().map(|&b| first[b]).collect();
    Abelianization { structure: s.structure, projection, commutator, lifts }
}

impl Abelianization {
    pub fn structure(&self) -> &FinAb {
        &self.structure
    }

    pub fn project(&self, x: usize) -> &[i64] {
        &self.projection[x]
    }

    pub fn commutator_subgroup(&self) -> &[usize] {
        &self.commutator
    }

    /// An element projecting to the i-th standard generator.
    pub fn lift(&self, i: usize) -> usize {
        self.lifts[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named;

    #[test]
    fn known_abelianizations() {
        assert_eq!(abelianization(&named::symmetric(3)).structure().factors(), &[2]);
        assert!(abelianization(&named::alternating(5)).structure().is_trivial());
        let z4 = abelianization(&named::cyclic(4));
        assert_eq!(z4.structure().factors(), &[4]);
        assert_eq!(abelianization(&named::quaternion()).structure().factors(), &[2, 2]);
        assert_eq!(abelianization(&named::dihedral(4)).structure().factors(), &[2, 2]);
    }

    #[test]
    fn projection_is_a_surjective_hom_with_commutator_kernel() {
        for g in [named::symmetric(4), named::dihedral(6), named::quaternion(), named::cyclic(6)
            .direct_product(&named::cyclic(4))]
        {
            let ab = abelianization(&g);
            let a = ab.structure();
            assert_eq!(
                a.order() as usize * ab.commutator_subgroup().len(),
                g.order(),
                "order of G^ab must be |G|/|[G,G]|"
            );
            for x in g.elements() {
                for y in g.elements() {
                    assert_eq!(ab.project(g.mul(x, y)), a.add(ab.project(x), ab.project(y)).as_slice());
                }
            }
            let kernel: Vec<usize> = g.elements().filter(|&x| ab.project(x).iter().all(|&c| c == 0)).collect();
            assert_eq!(kernel, ab.commutator_subgroup());
            for i in 0..a.rank() {
                let mut e = a.zero();
                e[i] = 1;
                assert_eq!(ab.project(ab.lift(i)), e.as_slice());
            }
        }
    }

    #[test]
    fn structure_of_z6_times_z4() {
        let g = named::cyclic(6).direct_product(&named::cyclic(4));
        assert_eq!(abelian_structure(&g).structure.factors(), &[2, 12]);
    }
}
