//! Normalized inhomogeneous bar cochains `C^n(G, M)` for `n ≤ 3`.
//!
//! A cochain of degree `n` stores one carrier vector per `n`-tuple of
//! non-identity elements. Tuples are numbered in mixed radix, first
//! argument most significant, digit `g - 1`.

mod complex;
mod cup;
pub mod oracle;

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::zmodule::GModule;

pub use complex::{cohomology, solve_coboundary, CoboundarySolution, CochainComplex, CohomologyGroup};
pub use cup::cup;

/// Highest degree a cochain may have.
pub const MAX_DEGREE: usize = 3;

/// Default bound on `|G|` for computing `H²`.
pub const DEFAULT_H2_BOUND: usize = 64;

#[derive(Clone)]
pub struct Cochain {
    module: Arc<GModule>,
    degree: usize,
    values: Vec<i64>,
}

impl PartialEq for Cochain {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.values == other.values && same_module(&self.module, &other.module)
    }
}

impl Eq for Cochain {}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cochain(deg {}, {:?})", self.degree, self.values)
    }
}

pub(crate) fn same_module(a: &Arc<GModule>, b: &Arc<GModule>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Number of slots of a normalized `n`-cochain.
pub fn slot_count(order: usize, degree: usize) -> usize {
    (order - 1).pow(degree as u32)
}

/// Slot of a tuple of non-identity elements.
#[inline]
pub fn slot_of(order: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &g| acc * (order - 1) + (g - 1))
}

/// Tuple stored at a slot.
pub fn tuple_of(order: usize, degree: usize, mut slot: usize) -> Vec<usize> {
    let mut t = vec![0; degree];
    for k in (0..degree).rev() {
        t[k] = slot % (order - 1) + 1;
        slot /= order - 1;
    }
    t
}

/// One summand of the bar differential at a fixed output tuple: `sign ·
/// act · c(slot)`, where `act` is `None` for the identity.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Term {
    pub act: Option<usize>,
    pub sign: i64,
    pub slot: usize,
}

/// Summands of `(dc)(t)` for an `(n+1)`-tuple `t` of non-identity elements.
pub(crate) fn bar_terms(group: &FiniteGroup, t: &[usize], out: &mut Vec<Term>) {
    out.clear();
    let n = group.order();
    let deg = t.len() - 1;
    out.push(Term { act: Some(t[0]), sign: 1, slot: slot_of(n, &t[1..]) });
    let mut merged = Vec::with_capacity(deg);
    for i in 1..=deg {
        let p = group.mul(t[i - 1], t[i]);
        if p == 0 {
            continue;
        }
        merged.clear();
        merged.extend_from_slice(&t[..i - 1]);
        merged.push(p);
        merged.extend_from_slice(&t[i + 1..]);
        let sign = if i % 2 == 0 { 1 } else { -1 };
        out.push(Term { act: None, sign, slot: slot_of(n, &merged) });
    }
    let sign = if deg % 2 == 0 { -1 } else { 1 };
    out.push(Term { act: None, sign, slot: slot_of(n, &t[..deg]) });
}

impl Cochain {
    pub fn zero(module: Arc<GModule>, degree: usize) -> Result<Cochain> {
        check_degree(degree)?;
        let len = slot_count(module.group().order(), degree) * module.rank();
        Ok(Cochain { module, degree, values: vec![0; len] })
    }

    /// Builds a cochain from a function on tuples of non-identity elements.
    pub fn from_fn(module: Arc<GModule>, degree: usize, mut f: impl FnMut(&[usize]) -> Vec<i64>) -> Result<Cochain> {
        check_degree(degree)?;
        let n = module.group().order();
        let r = module.rank();
        let mut values = Vec::with_capacity(slot_count(n, degree) * r);
        for s in 0..slot_count(n, degree) {
            let mut v = f(&tuple_of(n, degree, s));
            if v.len() != r {
                return Err(Error::Mismatch(format!("value of length {} for a module of rank {r}", v.len())));
            }
            module.carrier().reduce(&mut v);
            values.extend(v);
        }
        Ok(Cochain { module, degree, values })
    }

    /// Flat value table, slot-major; values are reduced on entry.
    pub fn from_values(module: Arc<GModule>, degree: usize, mut values: Vec<i64>) -> Result<Cochain> {
        check_degree(degree)?;
        let r = module.rank();
        let len = slot_count(module.group().order(), degree) * r;
        if values.len() != len {
            return Err(Error::Mismatch(format!("expected {len} values, got {}", values.len())));
        }
        reduce_flat(&module, &mut values);
        Ok(Cochain { module, degree, values })
    }

    pub(crate) fn from_raw(module: Arc<GModule>, degree: usize, values: Vec<i64>) -> Cochain {
        Cochain { module, degree, values }
    }

    pub fn random(module: Arc<GModule>, degree: usize, rng: &mut impl Rng) -> Result<Cochain> {
        check_degree(degree)?;
        let n = module.group().order();
        let factors = module.carrier().factors().to_vec();
        let slots = slot_count(n, degree);
        let mut values = Vec::with_capacity(slots * factors.len());
        for _ in 0..slots {
            for &d in &factors {
                values.push(rng.gen_range(0..d as i64));
            }
        }
        Ok(Cochain { module, degree, values })
    }

    pub fn module(&self) -> &Arc<GModule> {
        &self.module
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.module.group()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0)
    }

    /// Value at a tuple of arbitrary elements; zero if any is the identity.
    pub fn value(&self, args: &[usize]) -> Vec<i64> {
        assert_eq!(args.len(), self.degree);
        if args.contains(&0) {
            return vec![0; self.module.rank()];
        }
        self.slot_value(slot_of(self.group().order(), args)).to_vec()
    }

    #[inline]
    pub(crate) fn slot_value(&self, slot: usize) -> &[i64] {
        let r = self.module.rank();
        &self.values[slot * r..(slot + 1) * r]
    }

    fn check_compatible(&self, other: &Cochain) -> Result<()> {
        if self.degree != other.degree || !same_module(&self.module, &other.module) {
            return Err(Error::Mismatch("cochains of different degree or module".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.combine(other, -1)
    }

    fn combine(&self, other: &Cochain, sign: i64) -> Result<Cochain> {
        self.check_compatible(other)?;
        let mut values: Vec<i64> = self.values.iter().zip(&other.values).map(|(a, b)| a + sign * b).collect();
        reduce_flat(&self.module, &mut values);
        Ok(Cochain { module: self.module.clone(), degree: self.degree, values })
    }

    pub fn scale(&self, k: i64) -> Cochain {
        let mut values: Vec<i64> = self.values.iter().map(|&a| a * k).collect();
        reduce_flat(&self.module, &mut values);
        Cochain { module: self.module.clone(), degree: self.degree, values }
    }

    pub fn neg(&self) -> Cochain {
        self.scale(-1)
    }

    /// Pushes the coefficients forward along a module map given by an
    /// integer matrix (`target.rank() × self.rank()`), e.g. a change of
    /// coordinates between isomorphic carriers.
    pub fn map_coefficients(&self, target: Arc<GModule>, matrix: &[Vec<i64>]) -> Result<Cochain> {
        if !target.group().same_table(self.group()) {
            return Err(Error::Mismatch("coefficient map between modules over different groups".into()));
        }
        let r = self.module.rank();
        let t = target.rank();
        if matrix.len() != t || matrix.iter().any(|row| row.len() != r) {
            return Err(Error::Mismatch("coefficient matrix has the wrong shape".into()));
        }
        let slots = slot_count(self.group().order(), self.degree);
        let mut values = vec![0i64; slots * t];
        for s in 0..slots {
            let v = self.slot_value(s);
            for i in 0..t {
                values[s * t + i] = (0..r).map(|j| matrix[i][j] * v[j]).sum();
            }
        }
        reduce_flat(&target, &mut values);
        Ok(Cochain { module: target, degree: self.degree, values })
    }

    /// `dc`, for `deg c ≤ 2`.
    pub fn differential(&self) -> Result<Cochain> {
        if self.degree > 2 {
            return Err(Error::DegreeTooHigh(self.degree + 1));
        }
        Ok(self.differential_unchecked())
    }

    /// `dc` for any stored degree; the result may have degree 4.
    pub(crate) fn differential_unchecked(&self) -> Cochain {
        let g = self.group().clone();
        let n = g.order();
        let r = self.module.rank();
        let out_deg = self.degree + 1;
        let slots = slot_count(n, out_deg);
        let mut values = vec![0i64; slots * r];
        let mut terms = Vec::new();
        let mut t = vec![1usize; out_deg];
        for s in 0..slots {
            if s > 0 {
                increment(&mut t, n);
            }
            bar_terms(&g, &t, &mut terms);
            let out = &mut values[s * r..(s + 1) * r];
            for term in &terms {
                let v = self.slot_value(term.slot);
                match term.act {
                    Some(a) => self.module.act_add(a, v, term.sign, out),
                    None => {
                        for k in 0..r {
                            out[k] += term.sign * v[k];
                        }
                    }
                }
            }
        }
        reduce_flat(&self.module, &mut values);
        Cochain { module: self.module.clone(), degree: out_deg, values }
    }

    pub fn is_cocycle(&self) -> bool {
        self.differential_unchecked().is_zero()
    }

    /// Restriction to a subgroup, with coefficients in `module.restrict(sub)`.
    pub fn restrict(&self, sub: &Subgroup) -> Result<Cochain> {
        let local = Arc::new(self.module.restrict(sub)?);
        self.restrict_into(sub, local)
    }

    /// Restriction into an already restricted module, so that repeated
    /// restrictions share one module value.
    pub fn restrict_into(&self, sub: &Subgroup, local: Arc<GModule>) -> Result<Cochain> {
        if !sub.parent().same_table(self.group()) || !local.group().same_table(sub.as_group()) {
            return Err(Error::Mismatch("restriction to a subgroup of a different group".into()));
        }
        if local.carrier() != self.module.carrier() {
            return Err(Error::Mismatch("restricted module has a different carrier".into()));
        }
        let m = sub.order();
        let n = self.group().order();
        let r = self.module.rank();
        let slots = slot_count(m, self.degree);
        let mut values = Vec::with_capacity(slots * r);
        let mut parent_args = vec![0; self.degree];
        for s in 0..slots {
            let t = tuple_of(m, self.degree, s);
            for (k, &x) in t.iter().enumerate() {
                parent_args[k] = sub.embed(x);
            }
            values.extend_from_slice(self.slot_value(slot_of(n, &parent_args)));
        }
        Ok(Cochain { module: local, degree: self.degree, values })
    }

    /// The same values viewed over an equal module value.
    pub fn with_module(&self, module: Arc<GModule>) -> Result<Cochain> {
        if !same_module(&self.module, &module) {
            return Err(Error::Mismatch("modules differ".into()));
        }
        Ok(Cochain { module, degree: self.degree, values: self.values.clone() })
    }
}

fn check_degree(degree: usize) -> Result<()> {
    if degree > MAX_DEGREE + 1 {
        return Err(Error::DegreeTooHigh(degree));
    }
    Ok(())
}

pub(crate) fn reduce_flat(module: &GModule, values: &mut [i64]) {
    let factors = module.carrier().factors();
    let r = factors.len();
    if r == 0 {
        return;
    }
    for (i, x) in values.iter_mut().enumerate() {
        *x = x.rem_euclid(factors[i % r] as i64);
    }
}

/// Advances a tuple of non-identity elements in slot order.
pub(crate) fn increment(t: &mut [usize], order: usize) {
    for k in (0..t.len()).rev() {
        t[k] += 1;
        if t[k] < order {
            return;
        }
        t[k] = 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named;
    use crate::zmodule::FinAb;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn trivial(g: FiniteGroup, factors: Vec<u64>) -> Arc<GModule> {
        Arc::new(GModule::trivial(Arc::new(g), FinAb::new(factors).unwrap()))
    }

    #[test]
    fn slot_numbering_round_trips() {
        for s in 0..slot_count(5, 3) {
            assert_eq!(slot_of(5, &tuple_of(5, 3, s)), s);
        }
        let mut t = vec![1, 1];
        for s in 1..slot_count(4, 2) {
            increment(&mut t, 4);
            assert_eq!(tuple_of(4, 2, s), t);
        }
    }

    #[test]
    fn zero_and_constants() {
        let m = trivial(named::cyclic(3), vec![5]);
        let z = Cochain::zero(m.clone(), 1).unwrap();
        assert!(z.differential().unwrap().is_zero());
        let c = Cochain::from_fn(m, 0, |_| vec![3]).unwrap();
        assert!(c.differential().unwrap().is_zero());
        assert_eq!(c.value(&[]), vec![3]);
    }

    #[test]
    fn identity_cocycle_on_z2() {
        let m = trivial(named::cyclic(2), vec![2]);
        let c = Cochain::from_fn(m, 1, |_| vec![1]).unwrap();
        // σ·1 − 1 + 1 with σσ = 1 dropping the middle term
        let dc = c.differential().unwrap();
        assert_eq!(dc.value(&[1, 1]), vec![0]);
        assert!(c.is_cocycle());
    }

    #[test]
    fn differential_matches_definition_with_action() {
        let g = Arc::new(named::symmetric(3));
        let sign: Vec<u64> = g.elements().map(|x| if g.element_order(x) == 2 { 4 } else { 1 }).collect();
        let m = Arc::new(GModule::cyclic_with_character(g.clone(), 5, &sign).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = Cochain::random(m.clone(), 2, &mut rng).unwrap();
        let dc = c.differential().unwrap();
        for a in g.elements() {
            for b in g.elements() {
                for x in g.elements() {
                    let mut v = m.act(a, &c.value(&[b, x]))[0];
                    v -= c.value(&[g.mul(a, b), x])[0];
                    v += c.value(&[a, g.mul(b, x)])[0];
                    v -= c.value(&[a, b])[0];
                    assert_eq!(dc.value(&[a, b, x]), vec![v.rem_euclid(5)]);
                }
            }
        }
        assert!(dc.is_cocycle());
    }

    #[test]
    fn degree_limits() {
        let m = trivial(named::cyclic(2), vec![2]);
        let c = Cochain::zero(m.clone(), 3).unwrap();
        assert_eq!(c.differential(), Err(Error::DegreeTooHigh(4)));
        assert!(Cochain::zero(m, 5).is_err());
    }

    #[test]
    fn restriction_to_trivial_and_whole_group() {
        let g = Arc::new(named::cyclic(4));
        let m = Arc::new(GModule::trivial(g.clone(), FinAb::cyclic(2)));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = Cochain::random(m, 2, &mut rng).unwrap();
        let r = c.restrict(&Subgroup::trivial(g.clone())).unwrap();
        assert!(r.values().is_empty() && r.is_zero());
        assert_eq!(c.restrict(&Subgroup::whole(g)).unwrap(), c);
    }
}
