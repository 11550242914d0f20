use std::sync::Arc;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::zmodule::GModule;

/// A bilinear map `M × N → P` given on standard generators.
#[derive(Clone, Debug)]
pub struct Pairing {
    left: Arc<GModule>,
    right: Arc<GModule>,
    target: Arc<GModule>,
    /// `table[i * rank(N) + j] = pair(e_i, f_j)`
    table: Vec<Vec<i64>>,
}

impl Pairing {
    /// Validates well-definedness and `pair(g·m, g·n) = g·pair(m, n)` on
    /// generators for every group element.
    pub fn new(
        left: Arc<GModule>,
        right: Arc<GModule>,
        target: Arc<GModule>,
        table: Vec<Vec<Vec<i64>>>,
    ) -> Result<Pairing> {
        let (rl, rr) = (left.rank(), right.rank());
        if !left.group().same_table(right.group()) || !left.group().same_table(target.group()) {
            return Err(Error::Mismatch("pairing between modules over different groups".into()));
        }
        if table.len() != rl || table.iter().any(|row| row.len() != rr) {
            return Err(Error::NonEquivariantPairing(format!("table must be {rl}×{rr}")));
        }
        let mut flat = Vec::with_capacity(rl * rr);
        for row in table {
            for mut v in row {
                if v.len() != target.rank() {
                    return Err(Error::NonEquivariantPairing("entry of wrong length".into()));
                }
                target.carrier().reduce(&mut v);
                flat.push(v);
            }
        }
        let p = Pairing { left, right, target, table: flat };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let (rl, rr) = (self.left.rank(), self.right.rank());
        let t = self.target.carrier();
        for i in 0..rl {
            for j in 0..rr {
                let v = &self.table[i * rr + j];
                let di = self.left.carrier().factors()[i] as i64;
                let dj = self.right.carrier().factors()[j] as i64;
                if t.scale(v, di).iter().chain(t.scale(v, dj).iter()).any(|&x| x != 0) {
                    return Err(Error::NonEquivariantPairing(format!(
                        "not well defined on generators ({i}, {j})"
                    )));
                }
            }
        }
        let unit = |r: usize, k: usize| {
            let mut e = vec![0i64; r];
            e[k] = 1;
            e
        };
        for g in self.left.group().elements() {
            for i in 0..rl {
                for j in 0..rr {
                    let lhs = self.apply(&self.left.act(g, &unit(rl, i)), &self.right.act(g, &unit(rr, j)));
                    let rhs = self.target.act(g, &self.table[i * rr + j]);
                    if lhs != rhs {
                        return Err(Error::NonEquivariantPairing(format!(
                            "equivariance fails for element {g} on generators ({i}, {j})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `x·y mod n` on `Z/n × Z/n → Z/n` for cyclic modules with matching
    /// actions.
    pub fn product(module: Arc<GModule>) -> Result<Pairing> {
        if !module.carrier().is_cyclic() {
            return Err(Error::NonCyclicCoefficients(module.carrier().factors().to_vec()));
        }
        let table = if module.rank() == 0 { vec![] } else { vec![vec![vec![1]]] };
        Pairing::new(module.clone(), module.clone(), module, table)
    }

    /// `Ĥ × A → μ`, `(φ, a) ↦ φ(a)` for `Ĥ = dual_module(A, μ)`.
    pub fn evaluation(hat: Arc<GModule>, a: Arc<GModule>, mu: Arc<GModule>) -> Result<Pairing> {
        if !mu.carrier().is_cyclic() {
            return Err(Error::NonCyclicCoefficients(mu.carrier().factors().to_vec()));
        }
        let m = mu.carrier().exponent();
        let d = a.carrier().factors();
        let skip = d.iter().take_while(|&&x| x.gcd(&m) == 1).count();
        if hat.rank() != d.len() - skip {
            return Err(Error::Mismatch("character module does not match its source".into()));
        }
        let table = (0..hat.rank())
            .map(|i| {
                (0..a.rank())
                    .map(|j| {
                        if mu.rank() == 0 {
                            vec![]
                        } else if j == skip + i {
                            vec![(m / d[j].gcd(&m)) as i64]
                        } else {
                            vec![0]
                        }
                    })
                    .collect()
            })
            .collect();
        Pairing::new(hat, a, mu, table)
    }

    /// The same map with arguments swapped.
    pub fn transposed(&self) -> Pairing {
        let (rl, rr) = (self.left.rank(), self.right.rank());
        let mut table = Vec::with_capacity(rl * rr);
        for j in 0..rr {
            for i in 0..rl {
                table.push(self.table[i * rr + j].clone());
            }
        }
        Pairing { left: self.right.clone(), right: self.left.clone(), target: self.target.clone(), table }
    }

    pub fn left(&self) -> &Arc<GModule> {
        &self.left
    }

    pub fn right(&self) -> &Arc<GModule> {
        &self.right
    }

    pub fn target(&self) -> &Arc<GModule> {
        &self.target
    }

    /// Entry `pair(e_i, f_j)`.
    pub fn entry(&self, i: usize, j: usize) -> &[i64] {
        &self.table[i * self.right.rank() + j]
    }

    pub fn apply(&self, m: &[i64], n: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.target.rank()];
        self.apply_add(m, n, &mut out);
        out
    }

    #[inline]
    pub(crate) fn apply_add(&self, m: &[i64], n: &[i64], out: &mut [i64]) {
        let rr = self.right.rank();
        let factors = self.target.carrier().factors();
        for (i, &x) in m.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in n.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let v = &self.table[i * rr + j];
                for k in 0..out.len() {
                    out[k] = (out[k] + x * y % factors[k] as i64 * v[k]).rem_euclid(factors[k] as i64);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named;
    use crate::zmodule::{dual_module, FinAb};

    #[test]
    fn evaluation_is_equivariant_for_cyclotomic_action() {
        let g = Arc::new(named::klein_four());
        let mu = Arc::new(GModule::cyclic_with_character(g.clone(), 8, &[1, 3, 5, 7]).unwrap());
        let a = Arc::new(GModule::trivial(g, FinAb::new(vec![2, 4]).unwrap()));
        let hat = Arc::new(dual_module(&a, &mu).unwrap());
        let p = Pairing::evaluation(hat.clone(), a.clone(), mu.clone()).unwrap();
        assert_eq!(p.entry(0, 0), &[4]);
        assert_eq!(p.entry(1, 1), &[2]);
        let t = p.transposed();
        assert_eq!(t.apply(&[1, 1], &[1, 1]), p.apply(&[1, 1], &[1, 1]));
    }

    #[test]
    fn rejects_non_equivariant_tables() {
        let g = Arc::new(named::cyclic(2));
        let m = Arc::new(GModule::cyclic_with_character(g.clone(), 3, &[1, 2]).unwrap());
        let t = Arc::new(GModule::trivial(g, FinAb::cyclic(3)));
        // (-x)(-y) = xy, so the target must carry the trivial action
        assert!(Pairing::new(m.clone(), m.clone(), t, vec![vec![vec![1]]]).is_ok());
        assert!(Pairing::product(m).is_err());
    }
}
