//! Brute-force cohomology by exhaustive enumeration of cocycles and
//! coboundaries, independent of the Smith-form pipeline. Small inputs only.

use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::zmodule::{FinAb, GModule};

/// Largest number of cochains the oracle will enumerate.
pub const ENUMERATION_BOUND: u128 = 1 << 24;

/// `H^n` as counted by enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteForce {
    pub cocycles: u128,
    pub coboundaries: u128,
    pub structure: FinAb,
}

struct Tables {
    n: usize,
    size: usize,
    add: Vec<u16>,
    neg: Vec<u16>,
    act: Vec<u16>,
    scale: Vec<Vec<u16>>,
}

impl Tables {
    fn new(m: &GModule) -> Tables {
        let carrier = m.carrier();
        let elems = carrier.elements();
        let size = elems.len();
        let mut add = vec![0u16; size * size];
        let mut neg = vec![0u16; size];
        for (i, a) in elems.iter().enumerate() {
            neg[i] = carrier.index_of(&carrier.scale(a, -1)) as u16;
            for (j, b) in elems.iter().enumerate() {
                add[i * size + j] = carrier.index_of(&carrier.add(a, b)) as u16;
            }
        }
        let n = m.group().order();
        let mut act = vec![0u16; n * size];
        for g in 0..n {
            for (i, a) in elems.iter().enumerate() {
                act[g * size + i] = carrier.index_of(&m.act(g, a)) as u16;
            }
        }
        let e = carrier.exponent().max(1) as i64;
        let scale = (0..=e)
            .map(|k| elems.iter().map(|a| carrier.index_of(&carrier.scale(a, k)) as u16).collect())
            .collect();
        Tables { n, size, add, neg, act, scale }
    }

    #[inline]
    fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.size + b as usize]
    }

    #[inline]
    fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    fn act(&self, g: usize, a: u16) -> u16 {
        self.act[g * self.size + a as usize]
    }
}

/// A function on `G^k` with values in the module, stored on all tuples
/// including those containing the identity.
fn full_index(n: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &g| acc * n + g)
}

fn count(n: usize, k: u32, size: usize) -> u128 {
    (size as u128).saturating_pow((n - 1).pow(k) as u32)
}

/// Enumerates all normalized 1-cochains (as full tables on `G`).
fn all_one_cochains(t: &Tables) -> Vec<Vec<u16>> {
    let n = t.n;
    let mut out = Vec::new();
    let mut f = vec![0u16; n];
    loop {
        out.push(f.clone());
        let mut k = 1;
        loop {
            if k == n {
                return out;
            }
            f[k] += 1;
            if (f[k] as usize) < t.size {
                break;
            }
            f[k] = 0;
            k += 1;
        }
    }
}

fn coboundary_of_one_cochain(g: &FiniteGroup, t: &Tables, f: &[u16]) -> Vec<u16> {
    let n = t.n;
    let mut out = vec![0u16; n * n];
    for a in 0..n {
        for b in 0..n {
            let v = t.add(t.sub(t.act(a, f[b]), f[g.mul(a, b)]), f[a]);
            out[full_index(n, &[a, b])] = v;
        }
    }
    out
}

fn is_crossed_hom(g: &FiniteGroup, t: &Tables, f: &[u16]) -> bool {
    coboundary_of_one_cochain(g, t, f).iter().all(|&v| v == 0)
}

/// Invariant factors of a finite abelian group from the sizes of its
/// `k`-torsion subgroups for every divisor `k` of the exponent.
fn structure_from_torsion(order: u128, torsion: &BTreeMap<u64, u128>) -> FinAb {
    let mut primes = Vec::new();
    let mut rest = order;
    let mut p = 2u128;
    while rest > 1 {
        if rest % p == 0 {
            primes.push(p as u64);
            while rest % p == 0 {
                rest /= p;
            }
        }
        p += 1;
    }
    // per prime: number of cyclic summands of order ≥ p^j
    let mut summands: Vec<u64> = Vec::new();
    for &p in &primes {
        let mut counts = Vec::new();
        let mut prev = 1u128;
        let mut pj = p;
        while let Some(&size) = torsion.get(&pj) {
            let ratio = size / prev;
            let mut c = 0;
            let mut r = ratio;
            while r > 1 {
                r /= p as u128;
                c += 1;
            }
            if c == 0 {
                break;
            }
            counts.push(c);
            prev = size;
            pj *= p;
        }
        // counts[j] = #summands with order ≥ p^{j+1}
        for j in 0..counts.len() {
            let next = counts.get(j + 1).copied().unwrap_or(0);
            for _ in 0..counts[j] - next {
                summands.push(p.pow(j as u32 + 1));
            }
        }
    }
    FinAb::from_orders(&summands)
}

fn torsion_sizes(
    cocycles: &[Vec<u16>],
    coboundaries: &HashSet<Vec<u16>>,
    t: &Tables,
    exponent: u64,
) -> BTreeMap<u64, u128> {
    let mut out = BTreeMap::new();
    for k in 1..=exponent {
        if exponent % k != 0 {
            continue;
        }
        let hits = cocycles
            .iter()
            .filter(|z| {
                let kz: Vec<u16> = z.iter().map(|&v| t.scale[k as usize][v as usize]).collect();
                coboundaries.contains(&kz)
            })
            .count() as u128;
        out.insert(k, hits / coboundaries.len() as u128);
    }
    out
}

/// `H^n(G, M)` for `n ∈ {1, 2}` by enumeration.
pub fn brute_force_cohomology(module: &GModule, degree: usize) -> Result<BruteForce> {
    let g = module.group();
    let t = Tables::new(module);
    let n = g.order();
    if !(1..=2).contains(&degree) {
        return Err(Error::DegreeTooHigh(degree));
    }
    let c1 = count(n, 1, t.size);
    if c1 > ENUMERATION_BOUND {
        return Err(Error::SearchSpaceExceeded { size: c1, bound: ENUMERATION_BOUND });
    }
    let exponent = module.carrier().exponent().max(1);
    let (cocycles, coboundaries): (Vec<Vec<u16>>, HashSet<Vec<u16>>) = if degree == 1 {
        let z1: Vec<Vec<u16>> = all_one_cochains(&t).into_iter().filter(|f| is_crossed_hom(g, &t, f)).collect();
        let b1: HashSet<Vec<u16>> = (0..t.size as u16)
            .map(|m| (0..n).map(|a| t.sub(t.act(a, m), m)).collect())
            .collect();
        (z1, b1)
    } else {
        let b2: HashSet<Vec<u16>> =
            all_one_cochains(&t).iter().map(|f| coboundary_of_one_cochain(g, &t, f)).collect();
        (two_cocycles(g, &t), b2)
    };
    let z = cocycles.len() as u128;
    let b = coboundaries.len() as u128;
    let torsion = torsion_sizes(&cocycles, &coboundaries, &t, exponent);
    Ok(BruteForce { cocycles: z, coboundaries: b, structure: structure_from_torsion(z / b, &torsion) })
}

/// All normalized 2-cocycles, by backtracking over pairs of non-identity
/// elements in lexicographic order. Every coefficient in the cocycle
/// condition is an automorphism, so a condition with a single unknown
/// occurring once forces that unknown; those are assigned eagerly.
fn two_cocycles(g: &FiniteGroup, t: &Tables) -> Vec<Vec<u16>> {
    let n = t.n;
    let var = |a: usize, b: usize| (a - 1) * (n - 1) + (b - 1);
    let nvars = (n - 1) * (n - 1);
    // condition (a,b,c): a·f(b,c) − f(ab,c) + f(a,bc) − f(a,b) = 0
    let mut conditions: Vec<Vec<(usize, Coef)>> = Vec::new();
    for a in 1..n {
        for b in 1..n {
            for c in 1..n {
                let mut terms = vec![(var(b, c), Coef::Act(a))];
                let ab = g.mul(a, b);
                let bc = g.mul(b, c);
                if ab != 0 {
                    terms.push((var(ab, c), Coef::Neg));
                }
                if bc != 0 {
                    terms.push((var(a, bc), Coef::Act(0)));
                }
                terms.push((var(a, b), Coef::Neg));
                conditions.push(terms);
            }
        }
    }
    let mut search = Search::new(t, g, nvars, conditions);
    let mut out = Vec::new();
    search.run(&mut out);
    out.into_iter()
        .map(|vals| {
            let mut f = vec![0u16; n * n];
            for a in 1..n {
                for b in 1..n {
                    f[a * n + b] = vals[var(a, b)];
                }
            }
            f
        })
        .collect()
}

#[derive(Clone, Copy)]
enum Coef {
    Act(usize),
    Neg,
}

struct Search<'a> {
    t: &'a Tables,
    inverse: Vec<usize>,
    conditions: Vec<Vec<(usize, Coef)>>,
    /// distinct unknowns per condition
    open: Vec<usize>,
    touching: Vec<Vec<usize>>,
    value: Vec<Option<u16>>,
}

impl<'a> Search<'a> {
    fn new(t: &'a Tables, g: &FiniteGroup, nvars: usize, conditions: Vec<Vec<(usize, Coef)>>) -> Search<'a> {
        let mut touching = vec![Vec::new(); nvars];
        let mut open = Vec::with_capacity(conditions.len());
        for (k, terms) in conditions.iter().enumerate() {
            let mut vars: Vec<usize> = terms.iter().map(|&(v, _)| v).collect();
            vars.sort_unstable();
            vars.dedup();
            open.push(vars.len());
            for v in vars {
                touching[v].push(k);
            }
        }
        let inverse = g.elements().map(|x| g.inv(x)).collect();
        Search { t, inverse, conditions, open, touching, value: vec![None; nvars] }
    }

    fn term(&self, coef: Coef, x: u16) -> u16 {
        match coef {
            Coef::Act(a) => self.t.act(a, x),
            Coef::Neg => self.t.neg[x as usize],
        }
    }

    /// Assigns `v := x` and everything it forces. Returns false on a
    /// contradiction; `trail` records every assignment made.
    fn assign(&mut self, v: usize, x: u16, trail: &mut Vec<usize>) -> bool {
        let mut queue = vec![(v, x)];
        let mut ok = true;
        while let Some((v, x)) = queue.pop() {
            match self.value[v] {
                Some(y) if y == x => continue,
                Some(_) => return false,
                None => {}
            }
            self.value[v] = Some(x);
            trail.push(v);
            for idx in 0..self.touching[v].len() {
                let k = self.touching[v][idx];
                self.open[k] -= 1;
                if !ok {
                    continue;
                }
                if self.open[k] == 0 {
                    ok = self.residual(k, usize::MAX) == 0;
                } else if self.open[k] == 1 {
                    if let Some((u, c)) = self.single_unknown(k) {
                        let target = self.t.neg[self.residual(k, u) as usize];
                        let forced = match c {
                            Coef::Act(a) => self.t.act(self.inverse[a], target),
                            Coef::Neg => self.t.neg[target as usize],
                        };
                        queue.push((u, forced));
                    }
                }
            }
            if !ok {
                return false;
            }
        }
        true
    }

    /// Sum of the assigned terms of condition `k`, skipping variable `skip`.
    fn residual(&self, k: usize, skip: usize) -> u16 {
        let mut acc = 0u16;
        for &(w, c) in &self.conditions[k] {
            if w != skip {
                acc = self.t.add(acc, self.term(c, self.value[w].unwrap()));
            }
        }
        acc
    }

    /// The unknown of a condition with one open variable, if it occurs once.
    fn single_unknown(&self, k: usize) -> Option<(usize, Coef)> {
        let mut found = None;
        for &(w, c) in &self.conditions[k] {
            if self.value[w].is_none() {
                if found.is_some() {
                    return None;
                }
                found = Some((w, c));
            }
        }
        found
    }

    fn undo(&mut self, trail: &[usize]) {
        for &v in trail.iter().rev() {
            self.value[v] = None;
            for &k in &self.touching[v] {
                self.open[k] += 1;
            }
        }
    }

    fn run(&mut self, out: &mut Vec<Vec<u16>>) {
        let Some(v) = self.value.iter().position(Option::is_none) else {
            out.push(self.value.iter().map(|x| x.unwrap()).collect());
            return;
        };
        for x in 0..self.t.size as u16 {
            let mut trail = Vec::new();
            if self.assign(v, x, &mut trail) {
                self.run(out);
            }
            self.undo(&trail);
        }
    }
}

/// Extensions `1 → Z/a → Γ → G → 1` with trivial action, counted up to
/// equivalence by enumerating all group laws of order `a·|G|` and all
/// isomorphisms between them. Only for `a·|G| ≤ 6`.
pub fn central_extension_classes(g: &FiniteGroup, a: usize) -> Result<usize> {
    let n = a * g.order();
    if n > 6 {
        return Err(Error::SizeBound { order: n, bound: 6 });
    }
    let tables = group_laws(n);
    // data: (table, ι images of 0..a, π images)
    let mut extensions: Vec<(Vec<usize>, Vec<usize>, Vec<usize>)> = Vec::new();
    for table in &tables {
        let mul = |x: usize, y: usize| table[x * n + y];
        for gen in 0..n {
            let iota: Vec<usize> = (0..a).scan(0, |acc, _| {
                let cur = *acc;
                *acc = mul(*acc, gen);
                Some(cur)
            }).collect();
            let mut sorted = iota.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != a || mul(iota[a - 1], gen) != 0 {
                continue;
            }
            let central = iota.iter().all(|&h| (0..n).all(|x| mul(h, x) == mul(x, h)));
            if !central {
                continue;
            }
            for pi in all_maps(n, g.order()) {
                let hom = (0..n).all(|x| (0..n).all(|y| pi[mul(x, y)] == g.mul(pi[x], pi[y])));
                let kernel: Vec<usize> = (0..n).filter(|&x| pi[x] == 0).collect();
                if hom && kernel == sorted {
                    extensions.push((table.clone(), iota.clone(), pi));
                }
            }
        }
    }
    let perms = permutations(n);
    let mut reps: Vec<usize> = Vec::new();
    for (i, (t1, i1, p1)) in extensions.iter().enumerate() {
        let equivalent = reps.iter().any(|&j| {
            let (t2, i2, p2) = &extensions[j];
            perms.iter().any(|phi| {
                phi[0] == 0
                    && (0..n).all(|x| (0..n).all(|y| phi[t1[x * n + y]] == t2[phi[x] * n + phi[y]]))
                    && i1.iter().zip(i2).all(|(&x, &y)| phi[x] == y)
                    && (0..n).all(|x| p2[phi[x]] == p1[x])
            })
        });
        if !equivalent {
            reps.push(i);
        }
    }
    Ok(reps.len())
}

fn all_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v| (0..m).map(move |x| {
            let mut w = v.clone();
            w.push(x);
            w
        })).collect();
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

/// All associative Latin squares on `0..n` with identity 0.
fn group_laws(n: usize) -> Vec<Vec<usize>> {
    let mut table = vec![usize::MAX; n * n];
    for x in 0..n {
        table[x] = x;
        table[x * n] = x;
    }
    let mut out = Vec::new();
    fn go(k: usize, n: usize, table: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == n * n {
            let assoc = (0..n).all(|x| {
                (0..n).all(|y| (0..n).all(|z| table[table[x * n + y] * n + z] == table[x * n + table[y * n + z]]))
            });
            if assoc {
                out.push(table.clone());
            }
            return;
        }
        if table[k] != usize::MAX {
            return go(k + 1, n, table, out);
        }
        let (r, c) = (k / n, k % n);
        for v in 0..n {
            let clash = (0..n).any(|j| table[r * n + j] == v) || (0..n).any(|i| table[i * n + c] == v);
            if !clash {
                table[k] = v;
                go(k + 1, n, table, out);
                table[k] = usize::MAX;
            }
        }
    }
    go(0, n, &mut table, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::named;

    fn module(g: FiniteGroup, f: Vec<u64>) -> GModule {
        GModule::trivial(Arc::new(g), FinAb::new(f).unwrap())
    }

    #[test]
    fn torsion_inversion() {
        let mut t = BTreeMap::new();
        // Z/2 + Z/4: |H[1]|=1, |H[2]|=4, |H[4]|=8
        t.insert(1, 1);
        t.insert(2, 4);
        t.insert(4, 8);
        assert_eq!(structure_from_torsion(8, &t).factors(), &[2, 4]);
        let mut t = BTreeMap::new();
        t.insert(1, 1);
        t.insert(2, 2);
        t.insert(3, 3);
        t.insert(6, 6);
        assert_eq!(structure_from_torsion(6, &t).factors(), &[6]);
    }

    #[test]
    fn small_cases() {
        let m = module(named::cyclic(2), vec![2]);
        assert_eq!(brute_force_cohomology(&m, 1).unwrap().structure.factors(), &[2]);
        assert_eq!(brute_force_cohomology(&m, 2).unwrap().structure.factors(), &[2]);
        let m = module(named::cyclic(3), vec![3]);
        let h2 = brute_force_cohomology(&m, 2).unwrap();
        assert_eq!(h2.structure.factors(), &[3]);
        assert_eq!(h2.cocycles, 9);
        let m = module(named::klein_four(), vec![2]);
        assert_eq!(brute_force_cohomology(&m, 2).unwrap().structure.factors(), &[2, 2, 2]);
    }

    #[test]
    fn nontrivial_action() {
        let g = Arc::new(named::cyclic(2));
        let m = GModule::cyclic_with_character(g, 4, &[1, 3]).unwrap();
        assert_eq!(brute_force_cohomology(&m, 1).unwrap().structure.factors(), &[2]);
        assert_eq!(brute_force_cohomology(&m, 2).unwrap().structure.factors(), &[2]);
    }

    #[test]
    fn extensions_of_z2_by_z2() {
        assert_eq!(group_laws(4).len(), 4);
        assert_eq!(central_extension_classes(&named::cyclic(2), 2).unwrap(), 2);
        assert_eq!(central_extension_classes(&named::cyclic(3), 2).unwrap(), 1);
        assert_eq!(central_extension_classes(&named::cyclic(2), 3).unwrap(), 1);
    }
}
