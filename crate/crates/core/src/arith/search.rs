use std::sync::Arc;

use crate::arith::{cyclic_places, sha, ArithmeticModel, Place, Sha};
use crate::cochain::CochainComplex;
use crate::error::{Error, Result};
use crate::group::{named, FiniteGroup, Subgroup};
use crate::zmodule::{FinAb, GModule, QmodZ};

pub const DEFAULT_SEARCH_BOUND: u128 = 1 << 20;

/// All invariant assignments `k/d` on the given decomposition subgroups
/// that satisfy reciprocity, in lexicographic order (first place and first
/// generator most significant).
pub fn search_inv_assignments(
    group: &Arc<FiniteGroup>,
    mu: &Arc<GModule>,
    places: &[(String, Subgroup)],
    chebotarev_complete: bool,
    bound: u128,
) -> Result<Vec<ArithmeticModel>> {
    let zero: Vec<Place> = places
        .iter()
        .map(|(name, s)| {
            let local = Arc::new(mu.restrict(s)?);
            let rank = CochainComplex::new(local).cohomology(2)?.structure().rank();
            Ok(Place::new(name.clone(), s.clone(), vec![QmodZ::ZERO; rank]))
        })
        .collect::<Result<_>>()?;
    let base = ArithmeticModel::new(group.clone(), mu.clone(), zero.clone(), chebotarev_complete)?;

    // flattened positions (place, generator) with their orders
    let mut orders: Vec<u64> = Vec::new();
    let mut owner: Vec<usize> = Vec::new();
    for v in 0..places.len() {
        for &d in base.local_h2(v).structure().factors() {
            orders.push(d);
            owner.push(v);
        }
    }
    let size = orders.iter().try_fold(1u128, |acc, &d| acc.checked_mul(d as u128)).unwrap_or(u128::MAX);
    if size > bound {
        return Err(Error::SearchSpaceExceeded { size, bound });
    }
    // coefficient of position k in the reciprocity sum of global generator j
    let coeffs: Vec<Vec<u64>> = base
        .global_h2()
        .representatives()
        .iter()
        .map(|w| {
            let mut row = Vec::with_capacity(orders.len());
            for (v, p) in base.places().iter().enumerate() {
                let local = w.restrict_into(p.subgroup(), base.local_mu(v).clone())?;
                row.extend(base.local_h2(v).reduce(&local)?);
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;

    let mut out = Vec::new();
    let mut digits = vec![0u64; orders.len()];
    loop {
        let ok = coeffs.iter().all(|row| {
            row.iter()
                .zip(&digits)
                .zip(&orders)
                .map(|((&c, &k), &d)| QmodZ::new(k as i128 * c as i128, d))
                .sum::<QmodZ>()
                .is_zero()
        });
        if ok {
            let mut assigned = zero.clone();
            let mut pos = 0;
            for (v, p) in assigned.iter_mut().enumerate() {
                let inv = (0..p.inv.len())
                    .map(|_| {
                        let q = QmodZ::new(digits[pos] as i128, orders[pos]);
                        debug_assert_eq!(owner[pos], v);
                        pos += 1;
                        q
                    })
                    .collect();
                p.inv = inv;
            }
            out.push(base.with_places(assigned)?);
        }
        let mut k = digits.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < orders[k] {
                break;
            }
            digits[k] = 0;
        }
    }
}

/// A Klein four module whose `Sha^1` over all cyclic places is nonzero.
#[derive(Clone, Debug)]
pub struct ShaWitness {
    pub module: Arc<GModule>,
    pub model: ArithmeticModel,
    pub sha: Sha,
}

/// Carriers of order at most `max_order` by order then invariant factors,
/// actions from commuting pairs of involutive automorphisms in enumeration
/// order; returns the first module with nonzero `Sha^1`.
pub fn search_sha_witness(max_order: u64) -> Result<Option<ShaWitness>> {
    let g = Arc::new(named::klein_four());
    let gens = g.greedy_generators();
    let mu = Arc::new(GModule::trivial(g.clone(), FinAb::cyclic(2)));
    let model = ArithmeticModel::new(g.clone(), mu.clone(), cyclic_places(&g, &mu)?, true)?;
    for carrier in carriers_up_to(max_order) {
        let r = carrier.rank();
        let involutions: Vec<Vec<Vec<i64>>> =
            carrier.automorphisms().into_iter().filter(|a| is_identity(&carrier, &compose(&carrier, a, a), r)).collect();
        for a in &involutions {
            for b in &involutions {
                if compose(&carrier, a, b) != compose(&carrier, b, a) {
                    continue;
                }
                let module = match GModule::from_generators(g.clone(), carrier.clone(), &gens, &[a.clone(), b.clone()]) {
                    Ok(m) => Arc::new(m),
                    Err(_) => continue,
                };
                let s = sha(&model, &module, 1)?;
                if !s.is_trivial() {
                    return Ok(Some(ShaWitness { module, model, sha: s }));
                }
            }
        }
    }
    Ok(None)
}

fn carriers_up_to(max_order: u64) -> Vec<FinAb> {
    let mut out = Vec::new();
    for n in 2..=max_order {
        let mut chains = Vec::new();
        invariant_chains(n, 1, &mut vec![], &mut chains);
        chains.sort();
        out.extend(chains.into_iter().map(|c| FinAb::new(c).expect("valid chain")));
    }
    out
}

// chains d_1 | d_2 | … with product n, each factor > 1
fn invariant_chains(n: u64, last: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if n == 1 {
        if !acc.is_empty() {
            out.push(acc.clone());
        }
        return;
    }
    for d in 2..=n {
        if n % d == 0 && d % last == 0 && (n == d || (n / d) % d == 0) {
            acc.push(d);
            invariant_chains(n / d, d, acc, out);
            acc.pop();
        }
    }
}

fn compose(carrier: &FinAb, a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let r = carrier.rank();
    let d = carrier.factors();
    (0..r)
        .map(|i| (0..r).map(|j| (0..r).map(|l| a[i][l] * b[l][j]).sum::<i64>().rem_euclid(d[i] as i64)).collect())
        .collect()
}

fn is_identity(carrier: &FinAb, m: &[Vec<i64>], r: usize) -> bool {
    let d = carrier.factors();
    (0..r).all(|i| (0..r).all(|j| m[i][j].rem_euclid(d[i] as i64) == i64::from(i == j) % d[i] as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chains_of_small_orders() {
        let c: Vec<Vec<u64>> = carriers_up_to(8).iter().map(|a| a.factors().to_vec()).collect();
        assert_eq!(c.iter().filter(|f| f.iter().product::<u64>() == 8).count(), 3);
        assert_eq!(c.iter().filter(|f| f.iter().product::<u64>() == 4).count(), 2);
        assert!(c.contains(&vec![2, 2, 2]));
        assert_eq!(carriers_up_to(16).iter().filter(|a| a.order() == 16).count(), 5);
    }

    #[test]
    fn assignments_on_two_whole_places() {
        let g = Arc::new(named::cyclic(2));
        let mu = Arc::new(GModule::trivial(g.clone(), FinAb::cyclic(2)));
        let whole = Subgroup::whole(g.clone());
        let places = vec![("a".to_string(), whole.clone()), ("b".to_string(), whole)];
        let found = search_inv_assignments(&g, &mu, &places, false, 16).unwrap();
        let invs: Vec<Vec<String>> =
            found.iter().map(|m| m.places().iter().map(|p| p.inv()[0].to_string()).collect()).collect();
        assert_eq!(invs, vec![vec!["0/1", "0/1"], vec!["1/2", "1/2"]]);
        assert!(matches!(
            search_inv_assignments(&g, &mu, &places, false, 3),
            Err(Error::SearchSpaceExceeded { size: 4, bound: 3 })
        ));
    }
}
