//! Finite groups as explicit multiplication tables.
//!
//! Identity is always index 0. Groups built from permutations are closed by
//! breadth-first search from the identity, so element numbering is a pure
//! function of the generator list.

mod abelian;
mod hom;
pub mod named;
mod perm;
mod subgroup;

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub use abelian::{abelian_structure, abelianization, Abelianization, AbelianStructure};
pub use hom::GroupHom;
pub use perm::Permutation;
pub use subgroup::{all_subgroups, cyclic_subgroups, Subgroup};

/// Default bound on the order of groups generated by permutations.
pub const DEFAULT_MAX_ORDER: usize = 10080;

/// Groups up to this order get an exhaustive associativity check.
const EXHAUSTIVE_ASSOCIATIVITY: usize = 64;
const SAMPLED_TRIPLES: usize = 200_000;

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
    labels: Option<Vec<String>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order {})", self.order)
    }
}

impl FiniteGroup {
    /// Validates a multiplication table: `table[a][b] = a·b`.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 {
            return Err(Error::MalformedTable("empty table".into()));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MalformedTable(format!("row {i} has length {}", row.len())));
            }
            for &x in row {
                if x >= n {
                    return Err(Error::MalformedTable(format!("entry {x} in row {i}")));
                }
                flat.push(x as u32);
            }
        }
        Self::from_flat(n, flat, None, true)
    }

    fn from_flat(
        order: usize,
        table: Vec<u32>,
        labels: Option<Vec<String>>,
        check_associativity: bool,
    ) -> Result<FiniteGroup> {
        let at = |a: usize, b: usize| table[a * order + b] as usize;
        for a in 0..order {
            if at(0, a) != a || at(a, 0) != a {
                return Err(Error::NoIdentity);
            }
        }
        let mut inv = vec![u32::MAX; order];
        for a in 0..order {
            let Some(b) = (0..order).find(|&b| at(a, b) == 0) else {
                return Err(Error::NoInverse(a));
            };
            if at(b, a) != 0 {
                return Err(Error::NoInverse(a));
            }
            inv[a] = b as u32;
        }
        let g = FiniteGroup { order, table, inv, labels };
        if check_associativity {
            g.check_associativity()?;
        }
        Ok(g)
    }

    fn check_associativity(&self) -> Result<()> {
        let n = self.order;
        let check = |a, b, c| {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                Err(Error::NonAssociative(a, b, c))
            } else {
                Ok(())
            }
        };
        if n <= EXHAUSTIVE_ASSOCIATIVITY {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..SAMPLED_TRIPLES {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }

    /// Closes the group generated by `generators` under `op`, identity first,
    /// elements numbered in breadth-first order.
    pub fn from_closure<T, F>(
        identity: T,
        generators: &[T],
        op: F,
        max_order: usize,
    ) -> Result<(FiniteGroup, Vec<T>)>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<T, usize> = HashMap::from([(identity, 0)]);
        let mut cursor = 0;
        while cursor < elements.len() {
            for g in generators {
                let y = op(&elements[cursor], g);
                if !index.contains_key(&y) {
                    if elements.len() >= max_order {
                        return Err(Error::ClosureExceedsBound(max_order));
                    }
                    index.insert(y.clone(), elements.len());
                    elements.push(y);
                }
            }
            cursor += 1;
        }
        let n = elements.len();
        let mut table = Vec::with_capacity(n * n);
        for a in &elements {
            for b in &elements {
                table.push(index[&op(a, b)] as u32);
            }
        }
        let g = Self::from_flat(n, table, None, false)?;
        Ok((g, elements))
    }

    /// The group generated by permutations of `0..degree`, composed as
    /// `(p·q)(x) = p(q(x))`.
    pub fn from_permutations(generators: &[Permutation], max_order: usize) -> Result<FiniteGroup> {
        let degree = generators.iter().map(Permutation::degree).max().unwrap_or(1);
        let gens: Vec<Permutation> = generators.iter().map(|p| p.extended(degree)).collect();
        let (mut g, elements) = Self::from_closure(
            Permutation::identity(degree),
            &gens,
            |p, q| p.compose(q),
            max_order,
        )?;
        g.labels = Some(elements.iter().map(|p| p.to_string()).collect());
        Ok(g)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> FiniteGroup {
        assert_eq!(labels.len(), self.order);
        self.labels = Some(labels);
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        (0..k.unsigned_abs()).fold(0, |acc, _| self.mul(acc, base))
    }

    /// `a·b·a⁻¹`
    pub fn conj(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.inv(a))
    }

    /// `a·b·a⁻¹·b⁻¹`
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// The multiplication table as nested rows.
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| (0..self.order).map(|b| self.mul(a, b)).collect()).collect()
    }

    /// Same table, labels dropped; used when comparing groups structurally.
    pub fn same_table(&self, other: &FiniteGroup) -> bool {
        self.order == other.order && self.table == other.table
    }

    /// Smallest set of generators found greedily in index order.
    pub fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![false; self.order];
        span[0] = true;
        for a in 0..self.order {
            if span[a] {
                continue;
            }
            gens.push(a);
            for m in self.close(&gens) {
                span[m] = true;
            }
        }
        gens
    }

    /// Elements of the subgroup generated by `gens`, sorted.
    pub fn close(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut out = vec![0usize];
        let mut cursor = 0;
        while cursor < out.len() {
            let x = out[cursor];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            cursor += 1;
        }
        out.sort_unstable();
        out
    }

    /// Direct product; element `(a, b)` has index `a·|other| + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (n, m) = (self.order, other.order);
        let mut table = Vec::with_capacity(n * m * n * m);
        for a in 0..n * m {
            for b in 0..n * m {
                let x = self.mul(a / m, b / m);
                let y = other.mul(a % m, b % m);
                table.push((x * m + y) as u32);
            }
        }
        FiniteGroup::from_flat(n * m, table, None, false).expect("direct product is a group")
    }

    /// The quotient by a normal subgroup: elements are cosets numbered by
    /// their smallest member. Returns the quotient and the projection.
    pub fn quotient(&self, normal: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        let mut coset = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for a in 0..self.order {
            if coset[a] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(a);
            for &h in normal {
                let x = self.mul(a, h);
                if coset[x] != usize::MAX && coset[x] != id {
                    return Err(Error::NotASubgroup("cosets overlap".into()));
                }
                coset[x] = id;
            }
        }
        let q = reps.len();
        let mut table = Vec::with_capacity(q * q);
        for &a in &reps {
            for &b in &reps {
                table.push(coset[self.mul(a, b)] as u32);
            }
        }
        for &a in &reps {
            for &h in normal {
                if coset[self.conj(a, h)] != 0 {
                    return Err(Error::NotASubgroup("subgroup is not normal".into()));
                }
            }
        }
        let g = FiniteGroup::from_flat(q, table, None, false)?;
        Ok((g, coset))
    }

    /// Permutes element indices: `perm[old] = new`, with `perm[0] = 0`.
    pub fn relabel(&self, perm: &[usize]) -> FiniteGroup {
        assert_eq!(perm[0], 0);
        let n = self.order;
        let mut inverse = vec![0; n];
        for (old, &new) in perm.iter().enumerate() {
            inverse[new] = old;
        }
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push(perm[self.mul(inverse[a], inverse[b])] as u32);
            }
        }
        let labels = self.labels.as_ref().map(|l| (0..n).map(|a| l[inverse[a]].clone()).collect());
        FiniteGroup::from_flat(n, table, labels, false).expect("relabelled group")
    }

    /// Commutator subgroup `[G, G]`, sorted.
    pub fn derived_subgroup(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut seen = vec![false; self.order];
        for a in 0..self.order {
            for b in 0..self.order {
                let c = self.commutator(a, b);
                if !seen[c] {
                    seen[c] = true;
                    gens.push(c);
                }
            }
        }
        self.close(&gens)
    }

    pub fn is_perfect(&self) -> bool {
        self.derived_subgroup().len() == self.order
    }

    /// Brute-force simplicity test via normal closures of single elements.
    pub fn is_simple(&self) -> bool {
        if self.order == 1 {
            return false;
        }
        (1..self.order).all(|a| self.normal_closure(&[a]).len() == self.order)
    }

    pub fn normal_closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut conjugates = Vec::new();
        for &g in gens {
            for x in 0..self.order {
                conjugates.push(self.conj(x, g));
            }
        }
        conjugates.sort_unstable();
        conjugates.dedup();
        self.close(&conjugates)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_group_from_table() {
        let g = FiniteGroup::from_table(vec![vec![0]]).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn cyclic_from_three_cycle() {
        let p: Permutation = "(0 1 2)".parse().unwrap();
        let g = FiniteGroup::from_permutations(&[p], DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(g.order(), 3);
        assert!(g.is_abelian());
    }

    #[test]
    fn a5_from_two_cycles() {
        let a: Permutation = "(0 1 2 3 4)".parse().unwrap();
        let b: Permutation = "(0 1 2)".parse().unwrap();
        let g = FiniteGroup::from_permutations(&[a, b], DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(g.order(), 60);
        assert!(g.is_simple());
        assert!(g.is_perfect());
    }

    #[test]
    fn closure_bound_is_enforced() {
        let a: Permutation = "(0 1 2 3 4)".parse().unwrap();
        let b: Permutation = "(0 1)".parse().unwrap();
        assert_eq!(
            FiniteGroup::from_permutations(&[a, b], 100),
            Err(Error::ClosureExceedsBound(100))
        );
    }

    #[test]
    fn rejects_bad_tables() {
        assert_eq!(FiniteGroup::from_table(vec![vec![1, 0], vec![0, 1]]), Err(Error::NoIdentity));
        assert!(matches!(
            FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]),
            Err(Error::NoInverse(1))
        ));
        assert!(matches!(
            FiniteGroup::from_table(vec![vec![0, 1], vec![1]]),
            Err(Error::MalformedTable(_))
        ));
        // A commutative loop of order 5 that is not associative.
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(FiniteGroup::from_table(t), Err(Error::NonAssociative(..))));
    }

    #[test]
    fn inverse_of_product_reverses() {
        let g = named::symmetric(4);
        for a in g.elements() {
            for b in g.elements() {
                assert_eq!(g.inv(g.mul(a, b)), g.mul(g.inv(b), g.inv(a)));
            }
        }
    }

    #[test]
    fn quotient_by_center_of_q8() {
        let q = named::quaternion();
        let center: Vec<usize> =
            q.elements().filter(|&z| q.elements().all(|x| q.mul(x, z) == q.mul(z, x))).collect();
        let (k, proj) = q.quotient(&center).unwrap();
        assert_eq!(k.order(), 4);
        assert!(k.is_abelian());
        assert!(k.elements().all(|x| k.element_order(x) <= 2));
        assert_eq!(proj[0], 0);
    }
}
