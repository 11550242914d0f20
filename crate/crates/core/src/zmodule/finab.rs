use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zmodule::snf::{IntMatrix, LatticeQuotient, ModularSystem};

/// A finite abelian group `Z/d_1 ⊕ … ⊕ Z/d_k` with `d_1 | d_2 | … | d_k`,
/// every `d_i ≥ 2`. Elements are reduced integer vectors.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct FinAb {
    factors: Vec<u64>,
}

impl TryFrom<Vec<u64>> for FinAb {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<FinAb> {
        FinAb::new(v)
    }
}

impl From<FinAb> for Vec<u64> {
    fn from(a: FinAb) -> Vec<u64> {
        a.factors
    }
}

impl fmt::Debug for FinAb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FinAb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl FinAb {
    pub fn new(factors: Vec<u64>) -> Result<FinAb> {
        if factors.iter().any(|&d| d < 2) {
            return Err(Error::InvalidModule(format!("invariant factors must be ≥ 2: {factors:?}")));
        }
        if factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::InvalidModule(format!("not a divisibility chain: {factors:?}")));
        }
        Ok(FinAb { factors })
    }

    pub fn trivial() -> FinAb {
        FinAb { factors: Vec::new() }
    }

    pub fn cyclic(n: u64) -> FinAb {
        if n <= 1 {
            FinAb::trivial()
        } else {
            FinAb { factors: vec![n] }
        }
    }

    /// Normalizes an arbitrary diagonal presentation `⊕ Z/n_i` (entries
    /// equal to 1 allowed) into invariant-factor form.
    pub fn from_orders(orders: &[u64]) -> FinAb {
        let m = IntMatrix::diagonal(&orders.iter().map(|&x| x as i64).collect::<Vec<_>>());
        let snf = crate::zmodule::snf::smith_normal_form(&m);
        let factors = snf
            .invariant_factors()
            .iter()
            .map(|x| x.to_u64().unwrap())
            .filter(|&x| x != 1)
            .collect();
        FinAb { factors }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u128 {
        self.factors.iter().map(|&d| d as u128).product()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.rank()]
    }

    pub fn reduce(&self, v: &mut [i64]) {
        for (x, &d) in v.iter_mut().zip(&self.factors) {
            *x = x.rem_euclid(d as i64);
        }
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter().zip(b).zip(&self.factors).map(|((x, y), &d)| (x + y).rem_euclid(d as i64)).collect()
    }

    pub fn scale(&self, a: &[i64], k: i64) -> Vec<i64> {
        a.iter().zip(&self.factors).map(|(x, &d)| (x * k).rem_euclid(d as i64)).collect()
    }

    pub fn element_order(&self, a: &[i64]) -> u64 {
        a.iter().zip(&self.factors).fold(1u64, |acc, (&x, &d)| {
            let x = x.rem_euclid(d as i64) as u64;
            acc.lcm(&(d / x.gcd(&d)))
        })
    }

    /// All elements in lexicographic order; intended for small groups.
    pub fn elements(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for &d in &self.factors {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..d as i64).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    /// All automorphisms as matrices whose column `j` is the image of the
    /// `j`-th generator; small groups only.
    pub fn automorphisms(&self) -> Vec<Vec<Vec<i64>>> {
        let r = self.rank();
        let d = &self.factors;
        // entry (i, j) must be a multiple of d_i / gcd(d_i, d_j)
        let choices: Vec<Vec<i64>> = (0..r * r)
            .map(|k| {
                let (i, j) = (k / r, k % r);
                let step = d[i] / d[i].gcd(&d[j]);
                (0..d[i] / step).map(|t| (t * step) as i64).collect()
            })
            .collect();
        let elements = self.elements();
        let mut out = Vec::new();
        let mut idx = vec![0usize; r * r];
        loop {
            let m: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| choices[i * r + j][idx[i * r + j]]).collect()).collect();
            let mut seen = vec![false; elements.len()];
            let bijective = elements.iter().all(|v| {
                let mut w: Vec<i64> = (0..r).map(|i| (0..r).map(|j| m[i][j] * v[j]).sum()).collect();
                self.reduce(&mut w);
                !std::mem::replace(&mut seen[self.index_of(&w)], true)
            });
            if bijective {
                out.push(m);
            }
            let mut k = r * r;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    /// Flat index of a reduced element, mixed radix (last coordinate fastest).
    pub fn index_of(&self, a: &[i64]) -> usize {
        a.iter().zip(&self.factors).fold(0usize, |acc, (&x, &d)| acc * d as usize + x as usize)
    }
}

/// Subgroup of a finite abelian group presented as a kernel, with
/// generators and a coordinate map.
#[derive(Clone, Debug)]
pub struct KernelSubgroup {
    structure: FinAb,
    generators: Vec<Vec<i64>>,
    system: ModularSystem,
    quotient: LatticeQuotient,
    source: FinAb,
}

impl KernelSubgroup {
    /// Kernel of `x ↦ M·x` from `source` into `⊕ Z/target_moduli[j]`.
    pub fn of_map(source: &FinAb, matrix: &IntMatrix, target_moduli: &[u64]) -> KernelSubgroup {
        assert_eq!(matrix.cols(), source.rank());
        let system = ModularSystem::new(matrix, target_moduli);
        let rel: Vec<i64> = source.factors().iter().map(|&d| d as i64).collect();
        let quotient = LatticeQuotient::new(&system, &IntMatrix::diagonal(&rel));
        let generators = quotient
            .generators()
            .iter()
            .map(|g| {
                let mut v: Vec<i64> = g
                    .iter()
                    .zip(source.factors())
                    .map(|(x, &d)| x.mod_floor(&BigInt::from(d)).to_i64().unwrap())
                    .collect();
                source.reduce(&mut v);
                v
            })
            .collect();
        let structure = FinAb { factors: quotient.factors().to_vec() };
        KernelSubgroup { structure, generators, system, quotient, source: source.clone() }
    }

    pub fn structure(&self) -> &FinAb {
        &self.structure
    }

    /// Generators as elements of the source group.
    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    /// Coordinates of a source element lying in the kernel.
    pub fn coordinates(&self, x: &[i64]) -> Option<Vec<u64>> {
        assert_eq!(x.len(), self.source.rank());
        let v: Vec<BigInt> = x.iter().map(|&a| BigInt::from(a)).collect();
        self.quotient.coordinates(&self.system, &v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_chains() {
        assert!(FinAb::new(vec![2, 3]).is_err());
        assert!(FinAb::new(vec![1]).is_err());
        assert_eq!(FinAb::from_orders(&[2, 3]).factors(), &[6]);
        assert_eq!(FinAb::from_orders(&[4, 6, 1]).factors(), &[2, 12]);
    }

    #[test]
    fn element_orders() {
        let a = FinAb::new(vec![2, 4]).unwrap();
        assert_eq!(a.element_order(&[1, 2]), 2);
        assert_eq!(a.element_order(&[0, 1]), 4);
        assert_eq!(a.elements().len(), 8);
        assert_eq!(a.to_string(), "Z/2 + Z/4");
        assert_eq!(a.automorphisms().len(), 8);
        assert_eq!(FinAb::new(vec![2, 2]).unwrap().automorphisms().len(), 6);
        assert_eq!(FinAb::cyclic(8).automorphisms().len(), 4);
    }

    #[test]
    fn kernel_of_doubling_on_z4() {
        let a = FinAb::cyclic(4);
        let k = KernelSubgroup::of_map(&a, &IntMatrix::from_rows(&[vec![2i64]]), &[4]);
        assert_eq!(k.structure().factors(), &[2]);
        assert_eq!(k.generators(), &[vec![2]]);
        assert_eq!(k.coordinates(&[2]), Some(vec![1]));
        assert_eq!(k.coordinates(&[1]), None);
    }

    #[test]
    fn kernel_of_sum_map() {
        // (x, y) ↦ x + y from Z/2 ⊕ Z/2 to Z/2: kernel Z/2 generated by (1, 1).
        let a = FinAb::new(vec![2, 2]).unwrap();
        let k = KernelSubgroup::of_map(&a, &IntMatrix::from_rows(&[vec![1i64, 1]]), &[2]);
        assert_eq!(k.structure().factors(), &[2]);
        assert_eq!(k.generators(), &[vec![1, 1]]);
    }
}
