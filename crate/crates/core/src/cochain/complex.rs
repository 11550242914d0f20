use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::cochain::{bar_terms, increment, reduce_flat, same_module, slot_count, Cochain, DEFAULT_H2_BOUND};
use crate::error::{Error, Result};
use crate::zmodule::snf::{IntMatrix, LatticeQuotient, ModularSystem};
use crate::zmodule::{FinAb, GModule};

/// The normalized cochain complex of one module, with the integer
/// matrices of `d_0, d_1, d_2` and their Smith data computed on demand.
#[derive(Debug)]
pub struct CochainComplex {
    module: Arc<GModule>,
    bound: usize,
    systems: [OnceLock<Arc<ModularSystem>>; 3],
    groups: [OnceLock<Result<CohomologyGroup>>; 3],
}

impl CochainComplex {
    pub fn new(module: Arc<GModule>) -> CochainComplex {
        CochainComplex::with_bound(module, DEFAULT_H2_BOUND)
    }

    /// `bound` caps `|G|` for cohomology computations.
    pub fn with_bound(module: Arc<GModule>, bound: usize) -> CochainComplex {
        CochainComplex { module, bound, systems: Default::default(), groups: Default::default() }
    }

    pub fn module(&self) -> &Arc<GModule> {
        &self.module
    }

    /// Integer matrix of `d_n : C^n → C^{n+1}` in the slot-major basis.
    pub fn differential_matrix(&self, n: usize) -> IntMatrix {
        let g = self.module.group();
        let order = g.order();
        let r = self.module.rank();
        let rows = slot_count(order, n + 1) * r;
        let cols = slot_count(order, n) * r;
        let mut dense = vec![0i64; rows * cols];
        let mut terms = Vec::new();
        let mut t = vec![1usize; n + 1];
        for s in 0..slot_count(order, n + 1) {
            if s > 0 {
                increment(&mut t, order);
            }
            bar_terms(g, &t, &mut terms);
            for term in &terms {
                for i in 0..r {
                    let row = &mut dense[(s * r + i) * cols..(s * r + i + 1) * cols];
                    match term.act {
                        Some(a) => {
                            let m = self.module.matrix(a);
                            for j in 0..r {
                                row[term.slot * r + j] += term.sign * m[i * r + j];
                            }
                        }
                        None => row[term.slot * r + i] += term.sign,
                    }
                }
            }
        }
        let mut m = IntMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let x = dense[i * cols + j];
                if x != 0 {
                    m[(i, j)] = BigInt::from(x);
                }
            }
        }
        m
    }

    fn row_moduli(&self, n: usize) -> Vec<u64> {
        let f = self.module.carrier().factors();
        let slots = slot_count(self.module.group().order(), n + 1);
        (0..slots).flat_map(|_| f.iter().copied()).collect()
    }

    pub(crate) fn system(&self, n: usize) -> Arc<ModularSystem> {
        self.systems[n]
            .get_or_init(|| Arc::new(ModularSystem::new(&self.differential_matrix(n), &self.row_moduli(n))))
            .clone()
    }

    fn check_bound(&self) -> Result<()> {
        let order = self.module.group().order();
        if order > self.bound {
            return Err(Error::SizeBound { order, bound: self.bound });
        }
        Ok(())
    }

    /// `H^n(G, M)` for `n ≤ 2`.
    pub fn cohomology(&self, n: usize) -> Result<&CohomologyGroup> {
        if n > 2 {
            return Err(Error::DegreeTooHigh(n));
        }
        self.check_bound()?;
        self.groups[n].get_or_init(|| Ok(self.compute_cohomology(n))).as_ref().map_err(Clone::clone)
    }

    fn compute_cohomology(&self, n: usize) -> CohomologyGroup {
        let kernel = self.system(n);
        let factors = self.module.carrier().factors();
        let slots = slot_count(self.module.group().order(), n);
        let diag: Vec<i64> = (0..slots).flat_map(|_| factors.iter().map(|&d| d as i64)).collect();
        let diag = IntMatrix::diagonal(&diag);
        let relations = if n == 0 { diag } else { self.differential_matrix(n - 1).hcat(&diag) };
        let quotient = LatticeQuotient::new(&kernel, &relations);
        let representatives = quotient
            .generators()
            .iter()
            .map(|v| {
                let mut values: Vec<i64> =
                    v.iter().zip(diag_moduli(factors, slots)).map(|(x, d)| x.mod_floor(&d).to_i64().unwrap()).collect();
                reduce_flat(&self.module, &mut values);
                Cochain::from_raw(self.module.clone(), n, values)
            })
            .collect();
        let structure = FinAb::new(quotient.factors().to_vec()).expect("lattice quotient factors form a chain");
        CohomologyGroup { degree: n, module: self.module.clone(), structure, representatives, kernel, quotient }
    }

    /// Finds `c` with `dc = y` for a cocycle `y` of degree `1..=3`.
    pub fn solve_coboundary(&self, y: &Cochain) -> Result<CoboundarySolution> {
        let n = y.degree();
        if n == 0 || n > 3 {
            return Err(Error::DegreeTooHigh(n));
        }
        if !same_module(y.module(), &self.module) {
            return Err(Error::Mismatch("cochain over a different module".into()));
        }
        if !y.is_cocycle() {
            return Err(Error::NotACocycle(n));
        }
        let system = self.system(n - 1);
        let b: Vec<BigInt> = y.values().iter().map(|&x| BigInt::from(x)).collect();
        match system.solve(&b) {
            Ok(x) => {
                let factors = self.module.carrier().factors();
                let mut values: Vec<i64> = x
                    .iter()
                    .zip(diag_moduli(factors, slot_count(self.module.group().order(), n - 1)))
                    .map(|(v, d)| v.mod_floor(&d).to_i64().unwrap())
                    .collect();
                reduce_flat(&self.module, &mut values);
                let c = Cochain::from_raw(self.module.clone(), n - 1, values);
                debug_assert!(c.differential_unchecked() == *y);
                Ok(CoboundarySolution::Primitive(c))
            }
            Err(_) if n <= 2 => Ok(CoboundarySolution::Obstruction(self.cohomology(n)?.reduce(y)?)),
            Err(_) => Ok(CoboundarySolution::Obstruction(system.obstruction(&b))),
        }
    }
}

fn diag_moduli(factors: &[u64], slots: usize) -> impl Iterator<Item = BigInt> + '_ {
    (0..slots).flat_map(move |_| factors.iter().map(|&d| BigInt::from(d)))
}

/// Result of [`CochainComplex::solve_coboundary`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoboundarySolution {
    Primitive(Cochain),
    /// Certificate: the class coordinates in `H^n` for `n ≤ 2`; in degree 3
    /// the nonzero residues of `y` in the cokernel of `d_2`.
    Obstruction(Vec<u64>),
}

impl CoboundarySolution {
    pub fn primitive(&self) -> Option<&Cochain> {
        match self {
            CoboundarySolution::Primitive(c) => Some(c),
            CoboundarySolution::Obstruction(_) => None,
        }
    }

    pub fn into_primitive(self) -> Option<Cochain> {
        match self {
            CoboundarySolution::Primitive(c) => Some(c),
            CoboundarySolution::Obstruction(_) => None,
        }
    }
}

/// `H^n(G, M)` with canonical generator cocycles and a reduction map.
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    degree: usize,
    module: Arc<GModule>,
    structure: FinAb,
    representatives: Vec<Cochain>,
    kernel: Arc<ModularSystem>,
    quotient: LatticeQuotient,
}

impl CohomologyGroup {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn module(&self) -> &Arc<GModule> {
        &self.module
    }

    pub fn structure(&self) -> &FinAb {
        &self.structure
    }

    pub fn representatives(&self) -> &[Cochain] {
        &self.representatives
    }

    /// Coordinates of the class of a cocycle.
    pub fn reduce(&self, z: &Cochain) -> Result<Vec<u64>> {
        if z.degree() != self.degree || !same_module(z.module(), &self.module) {
            return Err(Error::Mismatch("cochain does not live in this complex".into()));
        }
        let v: Vec<BigInt> = z.values().iter().map(|&x| BigInt::from(x)).collect();
        self.quotient.coordinates(&self.kernel, &v).ok_or(Error::NotACocycle(self.degree))
    }

    /// The canonical cocycle `Σ c_i · rep_i`.
    pub fn cocycle(&self, coords: &[u64]) -> Cochain {
        assert_eq!(coords.len(), self.representatives.len());
        let mut acc = Cochain::zero(self.module.clone(), self.degree).expect("degree ≤ 2");
        for (c, rep) in coords.iter().zip(&self.representatives) {
            acc = acc.add(&rep.scale(*c as i64)).expect("same module");
        }
        acc
    }
}

/// `H^n(G, M)` for `n ≤ 2`, with the default size bound.
pub fn cohomology(module: Arc<GModule>, n: usize) -> Result<CohomologyGroup> {
    CochainComplex::new(module).cohomology(n).cloned()
}

/// One-shot form of [`CochainComplex::solve_coboundary`].
pub fn solve_coboundary(y: &Cochain) -> Result<CoboundarySolution> {
    CochainComplex::new(y.module().clone()).solve_coboundary(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{named, FiniteGroup, Subgroup};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn trivial(g: FiniteGroup, n: u64) -> Arc<GModule> {
        Arc::new(GModule::trivial(Arc::new(g), FinAb::cyclic(n)))
    }

    fn h(m: &Arc<GModule>, n: usize) -> Vec<u64> {
        cohomology(m.clone(), n).unwrap().structure().factors().to_vec()
    }

    #[test]
    fn known_groups() {
        let z2 = trivial(named::cyclic(2), 2);
        assert_eq!(h(&z2, 0), vec![2]);
        assert_eq!(h(&z2, 1), vec![2]);
        assert_eq!(h(&z2, 2), vec![2]);
        assert!(h(&trivial(named::cyclic(3), 2), 1).is_empty());
        for n in 1..=6u64 {
            assert_eq!(h(&trivial(named::cyclic(n as usize), n), 2), if n == 1 { vec![] } else { vec![n] });
        }
        assert_eq!(h(&trivial(named::klein_four(), 2), 2), vec![2, 2, 2]);
        assert_eq!(h(&trivial(named::quaternion(), 2), 2), vec![2, 2]);
    }

    #[test]
    fn inversion_action() {
        // H^1(Z/2, Z/3 with inversion) = 0, H^2 = 0; H^1(Z/2, Z/4 with -1) = Z/2
        let g = Arc::new(named::cyclic(2));
        let m = Arc::new(GModule::cyclic_with_character(g.clone(), 3, &[1, 2]).unwrap());
        assert!(h(&m, 1).is_empty() && h(&m, 2).is_empty());
        let m = Arc::new(GModule::cyclic_with_character(g, 4, &[1, 3]).unwrap());
        assert_eq!(h(&m, 0), vec![2]);
        assert_eq!(h(&m, 1), vec![2]);
        assert_eq!(h(&m, 2), vec![2]);
    }

    #[test]
    fn representatives_reduce_to_basis_and_reduce_ignores_coboundaries() {
        let g = named::dihedral(4);
        let m = Arc::new(GModule::trivial(Arc::new(g), FinAb::new(vec![2, 4]).unwrap()));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 0..=2 {
            let hn = cohomology(m.clone(), n).unwrap();
            for (i, rep) in hn.representatives().iter().enumerate() {
                assert!(rep.is_cocycle());
                let mut e = vec![0u64; hn.structure().rank()];
                e[i] = 1;
                assert_eq!(hn.reduce(rep).unwrap(), e);
                if n > 0 {
                    let c = Cochain::random(m.clone(), n - 1, &mut rng).unwrap();
                    let moved = rep.add(&c.differential().unwrap()).unwrap();
                    assert_eq!(hn.reduce(&moved).unwrap(), e);
                }
            }
        }
    }

    #[test]
    fn reduce_is_additive() {
        let s3 = Arc::new(GModule::trivial(Arc::new(named::symmetric(3)), FinAb::cyclic(6)));
        assert_eq!(cohomology(s3, 2).unwrap().structure().factors(), &[2]);
        let m = Arc::new(GModule::trivial(Arc::new(named::cyclic(6)), FinAb::cyclic(6)));
        let h2 = cohomology(m.clone(), 2).unwrap();
        assert_eq!(h2.structure().factors(), &[6]);
        let s = h2.structure();
        for a in 0..6u64 {
            for b in 0..6u64 {
                let z = h2.cocycle(&[a]).add(&h2.cocycle(&[b])).unwrap();
                let expect: Vec<u64> = s.add(&[a as i64], &[b as i64]).iter().map(|&x| x as u64).collect();
                assert_eq!(h2.reduce(&z).unwrap(), expect);
            }
        }
    }

    #[test]
    fn solve_round_trip() {
        let g = Arc::new(named::quaternion());
        let m = Arc::new(GModule::trivial(g, FinAb::cyclic(4)));
        let complex = CochainComplex::new(m.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=3 {
            assert_eq!(
                complex.solve_coboundary(&Cochain::zero(m.clone(), n).unwrap()).unwrap(),
                CoboundarySolution::Primitive(Cochain::zero(m.clone(), n - 1).unwrap())
            );
            for _ in 0..5 {
                let c0 = Cochain::random(m.clone(), n - 1, &mut rng).unwrap();
                let y = c0.differential().unwrap();
                let c = complex.solve_coboundary(&y).unwrap().into_primitive().unwrap();
                assert_eq!(c.differential().unwrap(), y);
            }
        }
    }

    #[test]
    fn obstruction_certificates() {
        let z2 = trivial(named::cyclic(2), 2);
        let h2 = cohomology(z2.clone(), 2).unwrap();
        let gen = &h2.representatives()[0];
        assert_eq!(solve_coboundary(gen).unwrap(), CoboundarySolution::Obstruction(vec![1]));
        let c = Cochain::from_fn(z2.clone(), 1, |_| vec![1]).unwrap();
        assert!(matches!(solve_coboundary(&c).unwrap(), CoboundarySolution::Obstruction(_)));
        let not_closed = Cochain::from_fn(trivial(named::cyclic(3), 2), 1, |t| vec![(t[0] == 1) as i64]).unwrap();
        assert_eq!(solve_coboundary(&not_closed), Err(Error::NotACocycle(1)));
        // H^3(Z/2, Z/2) = Z/2 is generated by the triple product
        let t = Cochain::from_fn(z2, 3, |_| vec![1]).unwrap();
        assert!(t.is_cocycle());
        assert!(matches!(solve_coboundary(&t).unwrap(), CoboundarySolution::Obstruction(v) if !v.is_empty()));
    }

    #[test]
    fn restriction_of_h2_of_z4() {
        // generator of H^2(Z/4, Z/2) restricts to the nonzero class on ⟨2⟩:
        // the extension Z/8 of Z/4 by Z/2 pulls back to Z/4 over ⟨2⟩.
        let g = Arc::new(named::cyclic(4));
        let m = Arc::new(GModule::trivial(g.clone(), FinAb::cyclic(2)));
        let h2 = cohomology(m.clone(), 2).unwrap();
        let sub = Subgroup::generated_by(g, &[2]).unwrap();
        let local = Arc::new(m.restrict(&sub).unwrap());
        let res = h2.representatives()[0].restrict_into(&sub, local.clone()).unwrap();
        assert_eq!(cohomology(local, 2).unwrap().reduce(&res).unwrap(), vec![1]);
    }

    #[test]
    fn size_bound() {
        let m = trivial(named::cyclic(5), 5);
        let c = CochainComplex::with_bound(m, 4);
        assert_eq!(c.cohomology(1).unwrap_err(), Error::SizeBound { order: 5, bound: 4 });
    }
}
