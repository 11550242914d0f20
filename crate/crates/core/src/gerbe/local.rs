use std::collections::VecDeque;
use std::sync::Arc;

use crate::arith::ArithmeticModel;
use crate::cochain::{cup, Cochain};
use crate::error::{Error, Result};
use crate::gerbe::GerbeExtension;
use crate::group::Subgroup;
use crate::zmodule::{GModule, Pairing, QmodZ};

const TORSOR_BOUND: usize = 1 << 22;

/// A homomorphic section `σ: D_v → Γ` over the inclusion `D_v ≤ G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSection {
    pub place: String,
    pub subgroup: Subgroup,
    /// `σ` of each element of `D_v`, in local index order
    pub images: Vec<usize>,
}

/// All splittings of `E` over a subgroup, sorted by image list.
pub fn sections_over(ext: &GerbeExtension, sub: &Subgroup) -> Vec<Vec<usize>> {
    let d = sub.as_group();
    let gamma = ext.gamma();
    let gens = d.greedy_generators();
    let fibers: Vec<Vec<usize>> = gens.iter().map(|&x| ext.fiber(sub.embed(x))).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; gens.len()];
    'outer: loop {
        let imgs: Vec<usize> = idx.iter().zip(&fibers).map(|(&i, f)| f[i]).collect();
        let mut map = vec![usize::MAX; d.order()];
        map[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        let mut ok = true;
        while let Some(x) = queue.pop_front() {
            for (j, &gen) in gens.iter().enumerate() {
                let y = d.mul(x, gen);
                let img = gamma.mul(map[x], imgs[j]);
                if map[y] == usize::MAX {
                    map[y] = img;
                    queue.push_back(y);
                } else if map[y] != img {
                    ok = false;
                }
            }
        }
        if ok {
            out.push(map);
        }
        let mut k = gens.len();
        loop {
            if k == 0 {
                break 'outer;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < fibers[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
    out.sort();
    out
}

/// For every place of the model, the list of splittings over `D_v`
/// (empty when `E` is not neutral there).
pub fn local_sections(ext: &GerbeExtension, model: &ArithmeticModel) -> Vec<(String, Vec<LocalSection>)> {
    model
        .places()
        .iter()
        .map(|p| {
            let list = sections_over(ext, p.subgroup())
                .into_iter()
                .map(|images| LocalSection { place: p.name().to_string(), subgroup: p.subgroup().clone(), images })
                .collect();
            (p.name().to_string(), list)
        })
        .collect()
}

/// Like [`local_sections`], failing at the first place without a splitting.
pub fn require_local_sections(ext: &GerbeExtension, model: &ArithmeticModel) -> Result<Vec<Vec<LocalSection>>> {
    local_sections(ext, model)
        .into_iter()
        .map(|(name, list)| if list.is_empty() { Err(Error::NotLocallyNeutral(name)) } else { Ok(list) })
        .collect()
}

/// The class of `z(d) = σ′(d)·σ(d)⁻¹` in the pointed set `H¹(D_v, H)` for
/// the action `d · h = σ(d) h σ(d)⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsorClass {
    /// `ι⁻¹ z(d)` per element of `D_v`
    pub cocycle: Vec<usize>,
    /// the lexicographically least cocycle in the twisted conjugation orbit
    pub canonical: Vec<usize>,
}

impl TorsorClass {
    pub fn is_trivial(&self) -> bool {
        self.canonical.iter().all(|&h| h == 0)
    }

    /// The image in `Z¹(D_v, H^ab)`; `local` must be `H^ab` restricted to `D_v`.
    pub fn abelianized(&self, ext: &GerbeExtension, local: Arc<GModule>) -> Result<Cochain> {
        let iota = ext.iota();
        Cochain::from_fn(local, 1, |t| ext.project(iota.apply(self.cocycle[t[0]])).to_vec())
    }
}

pub fn torsor_difference(ext: &GerbeExtension, sigma: &LocalSection, other: &LocalSection) -> Result<TorsorClass> {
    if sigma.subgroup != other.subgroup {
        return Err(Error::Mismatch("sections over different subgroups".into()));
    }
    let gamma = ext.gamma();
    let h = ext.kernel();
    let nd = sigma.images.len();
    if h.order() * nd * nd > TORSOR_BOUND {
        return Err(Error::SizeBound { order: h.order() * nd, bound: TORSOR_BOUND });
    }
    let cocycle: Vec<usize> = (0..nd)
        .map(|d| {
            let x = gamma.mul(other.images[d], gamma.inv(sigma.images[d]));
            ext.kernel_element(x).ok_or_else(|| Error::Mismatch("sections over different lifts".into()))
        })
        .collect::<Result<_>>()?;
    let d = sigma.subgroup.as_group();
    for a in 0..nd {
        for b in 0..nd {
            let lhs = ext.iota().apply(cocycle[d.mul(a, b)]);
            let twisted = gamma.conj(sigma.images[a], ext.iota().apply(cocycle[b]));
            if lhs != gamma.mul(ext.iota().apply(cocycle[a]), twisted) {
                return Err(Error::NotACocycle(1));
            }
        }
    }
    let mut canonical = cocycle.clone();
    for x in h.elements() {
        let hx = ext.iota().apply(x);
        let moved: Vec<usize> = (0..nd)
            .map(|k| {
                let s = sigma.images[k];
                let y = gamma.mul(gamma.mul(hx, ext.iota().apply(cocycle[k])), gamma.mul(s, gamma.mul(gamma.inv(hx), gamma.inv(s))));
                ext.kernel_element(y).expect("twisted conjugate stays in the kernel")
            })
            .collect();
        if moved < canonical {
            canonical = moved;
        }
    }
    Ok(TorsorClass { cocycle, canonical })
}

/// `inv_v(z ∪ b)` for 1-cocycles `z` in `H^ab` and `b` in `Ĥ` over `D_v`,
/// paired through evaluation `H^ab × Ĥ → μ`.
pub fn local_pairing(model: &ArithmeticModel, place: usize, z: &Cochain, b: &Cochain) -> Result<QmodZ> {
    if z.degree() != 1 || b.degree() != 1 {
        return Err(Error::Mismatch("local pairing takes two 1-cochains".into()));
    }
    if !z.is_cocycle() || !b.is_cocycle() {
        return Err(Error::NotACocycle(1));
    }
    let pair = Pairing::evaluation(b.module().clone(), z.module().clone(), model.local_mu(place).clone())?.transposed();
    model.inv_eval(place, &cup(z, b, &pair)?)
}
