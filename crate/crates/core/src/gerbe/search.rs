use std::sync::Arc;

use serde::Serialize;

use crate::arith::{search_inv_assignments, ArithmeticModel, DEFAULT_SEARCH_BOUND};
use crate::cochain::cohomology;
use crate::error::{Error, Result};
use crate::gerbe::brauer::{brauer_manin, BMFunctional};
use crate::gerbe::local::sections_over;
use crate::gerbe::GerbeExtension;
use crate::group::{all_subgroups, named, FiniteGroup, Subgroup};
use crate::zmodule::{FinAb, GModule, QmodZ};

const MODULI: [u64; 2] = [2, 4];

/// A central extension of `G` by `Z/m` with a model on which `m_H ≠ 0`.
#[derive(Clone, Debug, Serialize)]
pub struct MhWitness {
    pub group: String,
    pub modulus: u64,
    /// coordinates of the twisting class in `H²(G, Z/m)`
    pub class: Vec<u64>,
    /// decomposition subgroups, as sorted element lists
    pub places: Vec<Vec<usize>>,
    pub inv: Vec<Vec<QmodZ>>,
    pub functional: BMFunctional,
}

impl MhWitness {
    pub fn base(&self) -> Arc<FiniteGroup> {
        let g = named::groups_up_to_order_8().into_iter().find(|(n, _)| *n == self.group).expect("known group").1;
        Arc::new(g)
    }

    /// The extension with kernel `h`, twisted through `embed` (see
    /// [`GerbeExtension::central_twist`]).
    pub fn extension(&self, h: Arc<FiniteGroup>, embed: &[usize]) -> Result<GerbeExtension> {
        let g = self.base();
        let a = Arc::new(GModule::trivial(g.clone(), FinAb::cyclic(self.modulus)));
        let f = cohomology(a, 2)?.cocycle(&self.class);
        GerbeExtension::central_twist(h, g, &f, embed)
    }

    pub fn model(&self) -> Result<ArithmeticModel> {
        let g = self.base();
        let mu = Arc::new(GModule::trivial(g.clone(), FinAb::cyclic(self.modulus)));
        let places = self
            .places
            .iter()
            .zip(&self.inv)
            .enumerate()
            .map(|(i, (els, inv))| Ok(crate::arith::Place::new(format!("v{i}"), Subgroup::new(g.clone(), els.clone())?, inv.clone())))
            .collect::<Result<_>>()?;
        ArithmeticModel::new(g, mu, places, false)
    }
}

/// Scans central extensions of groups of order at most 8 by `Z/m`
/// (`m ∈ {2, 4}`, trivial `μ = Z/m`) over models with up to `max_places`
/// places at locally split subgroups; returns the first with `m_H ≠ 0`.
///
/// Order: groups as in [`named::groups_up_to_order_8`], then `m`, then
/// nonzero classes in mixed radix, then place multisets by size and
/// subgroup index, then invariant assignments in search order. Instances
/// with a degree-3 obstruction are skipped.
pub fn search_mh_witness(max_places: usize) -> Result<Option<MhWitness>> {
    for (name, g) in named::groups_up_to_order_8() {
        let g = Arc::new(g);
        if g.order() < 2 {
            continue;
        }
        let subs = all_subgroups(&g);
        for m in MODULI {
            let kernel = Arc::new(named::cyclic(m as usize));
            let embed: Vec<usize> = kernel.elements().collect();
            let module = Arc::new(GModule::trivial(g.clone(), FinAb::cyclic(m)));
            let h2 = cohomology(module.clone(), 2)?;
            let factors = h2.structure().factors().to_vec();
            let total: u64 = factors.iter().product();
            for k in 1..total {
                let mut class = vec![0u64; factors.len()];
                let mut r = k;
                for (c, &d) in class.iter_mut().zip(&factors).rev() {
                    *c = r % d;
                    r /= d;
                }
                let ext = GerbeExtension::central_twist(kernel.clone(), g.clone(), &h2.cocycle(&class), &embed)?;
                let split: Vec<&Subgroup> = subs.iter().filter(|s| !sections_over(&ext, s).is_empty()).collect();
                for size in 1..=max_places {
                    let mut idx = vec![0usize; size];
                    loop {
                        if idx.windows(2).all(|w| w[0] <= w[1]) {
                            let places: Vec<(String, Subgroup)> =
                                idx.iter().enumerate().map(|(i, &j)| (format!("v{i}"), split[j].clone())).collect();
                            let models = match search_inv_assignments(&g, &module, &places, false, DEFAULT_SEARCH_BOUND) {
                                Ok(list) => list,
                                Err(Error::SearchSpaceExceeded { .. }) => Vec::new(),
                                Err(e) => return Err(e),
                            };
                            for model in models {
                                match brauer_manin(&ext, &model) {
                                    Ok(f) if !f.is_zero() => {
                                        return Ok(Some(MhWitness {
                                            group: name.to_string(),
                                            modulus: m,
                                            class,
                                            places: places.iter().map(|(_, s)| s.elements().to_vec()).collect(),
                                            inv: model.places().iter().map(|p| p.inv().to_vec()).collect(),
                                            functional: f,
                                        }))
                                    }
                                    Ok(_) | Err(Error::GlobalH3Obstruction { .. }) => {}
                                    Err(e) => return Err(e),
                                }
                            }
                        }
                        let mut p = size;
                        let done = loop {
                            if p == 0 {
                                break true;
                            }
                            p -= 1;
                            idx[p] += 1;
                            if idx[p] < split.len() {
                                break false;
                            }
                            idx[p] = 0;
                        };
                        if done {
                            break;
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}
