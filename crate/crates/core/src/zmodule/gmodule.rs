use std::sync::Arc;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::zmodule::FinAb;

/// A finite abelian group with a left action of a finite group.
///
/// The action of `g` is an integer matrix whose column `j` is the image of
/// the `j`-th standard generator; entries of row `i` are reduced mod `d_i`.
#[derive(Clone, Debug)]
pub struct GModule {
    group: Arc<FiniteGroup>,
    carrier: FinAb,
    action: Vec<Vec<i64>>,
}

impl PartialEq for GModule {
    fn eq(&self, other: &Self) -> bool {
        self.carrier == other.carrier
            && self.action == other.action
            && (Arc::ptr_eq(&self.group, &other.group) || self.group.same_table(&other.group))
    }
}

impl Eq for GModule {}

impl GModule {
    /// `action[g]` is the row-major `r×r` matrix of `g`; `None` entries mean
    /// the identity.
    pub fn new(group: Arc<FiniteGroup>, carrier: FinAb, action: Vec<Option<Vec<Vec<i64>>>>) -> Result<GModule> {
        let r = carrier.rank();
        if action.len() != group.order() {
            return Err(Error::InvalidModule(format!(
                "{} action matrices for a group of order {}",
                action.len(),
                group.order()
            )));
        }
        let mut flat = Vec::with_capacity(group.order());
        for (g, m) in action.into_iter().enumerate() {
            let mut a = identity_flat(r);
            if let Some(m) = m {
                if m.len() != r || m.iter().any(|row| row.len() != r) {
                    return Err(Error::InvalidModule(format!("matrix of element {g} is not {r}×{r}")));
                }
                for i in 0..r {
                    for j in 0..r {
                        a[i * r + j] = m[i][j];
                    }
                }
            }
            flat.push(a);
        }
        Self::from_flat(group, carrier, flat)
    }

    pub(crate) fn from_flat(group: Arc<FiniteGroup>, carrier: FinAb, mut action: Vec<Vec<i64>>) -> Result<GModule> {
        let r = carrier.rank();
        let d = carrier.factors().to_vec();
        for (g, a) in action.iter_mut().enumerate() {
            for i in 0..r {
                for j in 0..r {
                    a[i * r + j] = a[i * r + j].rem_euclid(d[i] as i64);
                    // d_j · (image of e_j) must vanish
                    if ((a[i * r + j] as i128 * d[j] as i128) % d[i] as i128) != 0 {
                        return Err(Error::InvalidModule(format!(
                            "action of element {g} is not well defined on generator {j}"
                        )));
                    }
                }
            }
        }
        let m = GModule { group, carrier, action };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let r = self.carrier.rank();
        let basis: Vec<Vec<i64>> = (0..r)
            .map(|i| {
                let mut e = vec![0; r];
                e[i] = 1;
                e
            })
            .collect();
        for e in &basis {
            if &self.act(0, e) != e {
                return Err(Error::InvalidModule("identity does not act trivially".into()));
            }
        }
        for g in self.group.elements() {
            for h in self.group.elements() {
                let gh = self.group.mul(g, h);
                for e in &basis {
                    if self.act(g, &self.act(h, e)) != self.act(gh, e) {
                        return Err(Error::InvalidModule(format!(
                            "action is not compatible with the product ({g}, {h})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn trivial(group: Arc<FiniteGroup>, carrier: FinAb) -> GModule {
        let r = carrier.rank();
        let action = vec![identity_flat(r); group.order()];
        GModule { group, carrier, action }
    }

    /// `Z/m` with `g` acting as multiplication by `character[g]`.
    pub fn cyclic_with_character(group: Arc<FiniteGroup>, m: u64, character: &[u64]) -> Result<GModule> {
        let carrier = FinAb::cyclic(m);
        if carrier.is_trivial() {
            return Ok(GModule::trivial(group, carrier));
        }
        if character.len() != group.order() {
            return Err(Error::InvalidModule("character length differs from group order".into()));
        }
        if let Some(&c) = character.iter().find(|&&c| c.gcd(&m) != 1) {
            return Err(Error::InvalidModule(format!("{c} is not a unit mod {m}")));
        }
        let action = character.iter().map(|&c| vec![(c % m) as i64]).collect();
        GModule::from_flat(group, carrier, action)
    }

    /// Extends matrices assigned to generators to the whole group, or fails
    /// if they do not define an action.
    pub fn from_generators(
        group: Arc<FiniteGroup>,
        carrier: FinAb,
        generators: &[usize],
        matrices: &[Vec<Vec<i64>>],
    ) -> Result<GModule> {
        let r = carrier.rank();
        if generators.len() != matrices.len() {
            return Err(Error::InvalidModule("one matrix per generator required".into()));
        }
        let d = carrier.factors().to_vec();
        let flat: Vec<Vec<i64>> = matrices
            .iter()
            .map(|m| (0..r * r).map(|k| m[k / r][k % r].rem_euclid(d[k / r] as i64)).collect())
            .collect();
        let mul = |a: &[i64], b: &[i64]| -> Vec<i64> {
            (0..r * r)
                .map(|k| {
                    let (i, j) = (k / r, k % r);
                    (0..r).map(|l| a[i * r + l] * b[l * r + j]).sum::<i64>().rem_euclid(d[i] as i64)
                })
                .collect()
        };
        let mut action: Vec<Option<Vec<i64>>> = vec![None; group.order()];
        action[0] = Some(identity_flat(r));
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            let ax = action[x].clone().unwrap();
            for (&g, ag) in generators.iter().zip(&flat) {
                let y = group.mul(x, g);
                let ay = mul(&ax, ag);
                match &action[y] {
                    Some(existing) if *existing != ay => {
                        return Err(Error::InvalidModule("generator matrices violate a relation".into()))
                    }
                    Some(_) => {}
                    None => {
                        action[y] = Some(ay);
                        queue.push_back(y);
                    }
                }
            }
        }
        if action.iter().any(Option::is_none) {
            return Err(Error::InvalidModule("elements do not generate the group".into()));
        }
        GModule::from_flat(group, carrier, action.into_iter().map(Option::unwrap).collect())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn carrier(&self) -> &FinAb {
        &self.carrier
    }

    pub fn rank(&self) -> usize {
        self.carrier.rank()
    }

    pub fn matrix(&self, g: usize) -> &[i64] {
        &self.action[g]
    }

    pub fn matrix_rows(&self, g: usize) -> Vec<Vec<i64>> {
        let r = self.rank();
        (0..r).map(|i| self.action[g][i * r..(i + 1) * r].to_vec()).collect()
    }

    pub fn is_trivial_action(&self) -> bool {
        let id = identity_flat(self.rank());
        self.action.iter().all(|a| *a == id)
    }

    /// `g · v` for a reduced carrier vector `v`.
    pub fn act(&self, g: usize, v: &[i64]) -> Vec<i64> {
        let r = self.rank();
        let a = &self.action[g];
        let d = self.carrier.factors();
        (0..r)
            .map(|i| {
                let mut acc: i64 = 0;
                for j in 0..r {
                    acc = (acc + a[i * r + j] * v[j]).rem_euclid(d[i] as i64);
                }
                acc
            })
            .collect()
    }

    /// Adds `g · v` into `out`.
    #[inline]
    pub(crate) fn act_add(&self, g: usize, v: &[i64], sign: i64, out: &mut [i64]) {
        let r = self.rank();
        let a = &self.action[g];
        let d = self.carrier.factors();
        for i in 0..r {
            let mut acc = out[i];
            for j in 0..r {
                acc += sign * a[i * r + j] * v[j];
            }
            out[i] = acc.rem_euclid(d[i] as i64);
        }
    }

    /// The same carrier with the action pulled back to a subgroup.
    pub fn restrict(&self, sub: &Subgroup) -> Result<GModule> {
        if !sub.parent().same_table(&self.group) {
            return Err(Error::Mismatch("subgroup of a different group".into()));
        }
        let action = sub.elements().iter().map(|&g| self.action[g].clone()).collect();
        Ok(GModule { group: sub.as_group().clone(), carrier: self.carrier.clone(), action })
    }

    /// The module pulled back along a homomorphism into this module's group,
    /// given by its image list.
    pub fn pull_back(&self, domain: Arc<FiniteGroup>, images: &[usize]) -> Result<GModule> {
        let action = images.iter().map(|&g| self.action[g].clone()).collect();
        GModule::from_flat(domain, self.carrier.clone(), action)
    }

    /// Brute-force test for a G-equivariant isomorphism; small carriers only.
    pub fn is_isomorphic(&self, other: &GModule) -> bool {
        if self.carrier != other.carrier || !self.group.same_table(&other.group) {
            return false;
        }
        let r = self.rank();
        let targets = other.carrier.elements();
        let mut choice = vec![0usize; r];
        fn image(m: &GModule, n: &GModule, imgs: &[&Vec<i64>], v: &[i64]) -> Vec<i64> {
            let mut out = n.carrier.zero();
            for (k, &x) in v.iter().enumerate() {
                out = n.carrier.add(&out, &n.carrier.scale(imgs[k], x));
            }
            let _ = m;
            out
        }
        let sources = self.carrier.elements();
        loop {
            let imgs: Vec<&Vec<i64>> = choice.iter().map(|&c| &targets[c]).collect();
            let well_defined = (0..r).all(|k| {
                other.carrier.scale(imgs[k], self.carrier.factors()[k] as i64).iter().all(|&x| x == 0)
            });
            if well_defined {
                let mut seen = std::collections::HashSet::new();
                let bijective = sources.iter().all(|v| seen.insert(image(self, other, &imgs, v)));
                let equivariant = bijective
                    && self.group.elements().all(|g| {
                        (0..r).all(|k| {
                            let mut e = self.carrier.zero();
                            e[k] = 1;
                            image(self, other, &imgs, &self.act(g, &e))
                                == other.act(g, &image(self, other, &imgs, &e))
                        })
                    });
                if equivariant {
                    return true;
                }
            }
            let mut k = 0;
            loop {
                if k == r {
                    return false;
                }
                choice[k] += 1;
                if choice[k] < targets.len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }
}

fn identity_flat(r: usize) -> Vec<i64> {
    let mut a = vec![0; r * r];
    for i in 0..r {
        a[i * r + i] = 1;
    }
    a
}

/// `Hom(A, μ)` for a G-module `A` and a cyclic coefficient module `μ = Z/m`,
/// with `(g·f)(a) = g·f(g⁻¹·a)`.
///
/// The basis element `φ_i` sends the generator `e_{s+i}` of `A` to `m / gcd(d_{s+i}, m)`,
/// where `s` is the number of factors of `A` with `gcd(d, m) = 1`.
pub fn dual_module(a: &GModule, mu: &GModule) -> Result<GModule> {
    if !mu.carrier().is_cyclic() {
        return Err(Error::NonCyclicCoefficients(mu.carrier().factors().to_vec()));
    }
    if !a.group().same_table(mu.group()) {
        return Err(Error::Mismatch("module and coefficients over different groups".into()));
    }
    let m = mu.carrier().exponent();
    let g = a.group().clone();
    let d = a.carrier().factors();
    let gcds: Vec<u64> = d.iter().map(|&x| x.gcd(&m)).collect();
    let skip = gcds.iter().take_while(|&&x| x == 1).count();
    let kept: Vec<usize> = (skip..d.len()).collect();
    let carrier = FinAb::new(kept.iter().map(|&i| gcds[i]).collect())?;
    let r = kept.len();
    let character = |x: usize| -> i64 { if m == 1 { 1 } else { mu.matrix(x)[0] } };
    let mut action = Vec::with_capacity(g.order());
    for x in g.elements() {
        let xinv = g.inv(x);
        let chi = character(x);
        let ainv = a.matrix(xinv);
        let ra = a.rank();
        let mut mat = vec![0i64; r * r];
        for (ci, &i) in kept.iter().enumerate() {
            // (x·φ_i)(e_j) = χ(x) · φ_i(x⁻¹·e_j) = χ(x) · A_{x⁻¹}[i][j] · m/g_i
            for (cj, &j) in kept.iter().enumerate() {
                let unit = (m / gcds[i]) as i128;
                let value = (chi as i128 * ainv[i * ra + j] as i128 * unit).rem_euclid(m as i128);
                let step = (m / gcds[j]) as i128;
                if value % step != 0 {
                    return Err(Error::InvalidModule("dual action is not well defined".into()));
                }
                mat[cj * r + ci] = (value / step) as i64;
            }
        }
        action.push(mat);
    }
    GModule::from_flat(g, carrier, action)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named;

    fn z4_by_inversion_via_z2() -> GModule {
        // Z/4 acting on Z/3 through Z/4 → Z/2, the generator acting by -1.
        let g = Arc::new(named::cyclic(4));
        let action = (0..4).map(|k| Some(vec![vec![if k % 2 == 0 { 1 } else { 2 }]])).collect();
        GModule::new(g, FinAb::cyclic(3), action).unwrap()
    }

    #[test]
    fn rejects_incompatible_actions() {
        let g = Arc::new(named::cyclic(3));
        // 3 ∤ |Aut(Z/2)| so any nontrivial assignment fails the product rule
        let bad = vec![None, Some(vec![vec![1]]), Some(vec![vec![3]])];
        assert!(GModule::new(g.clone(), FinAb::cyclic(4), bad).is_err());
        // not well defined: Z/2 → Z/4 component must land in 2-torsion
        let bad = vec![None, Some(vec![vec![1, 1], vec![0, 1]]), Some(vec![vec![1, 0], vec![0, 1]])];
        assert!(GModule::new(g, FinAb::new(vec![2, 4]).unwrap(), bad).is_err());
    }

    #[test]
    fn restriction() {
        let m = z4_by_inversion_via_z2();
        let g = m.group().clone();
        let squares = Subgroup::generated_by(g.clone(), &[2]).unwrap();
        assert!(m.restrict(&squares).unwrap().is_trivial_action());
        let triv = Subgroup::trivial(g.clone());
        assert!(m.restrict(&triv).unwrap().is_trivial_action());
        let whole = m.restrict(&Subgroup::whole(g)).unwrap();
        assert_eq!(whole, m);
    }

    #[test]
    fn dual_of_cyclic_modules() {
        let g = Arc::new(named::cyclic(1));
        let h = GModule::trivial(g.clone(), FinAb::cyclic(6));
        let mu = GModule::trivial(g.clone(), FinAb::cyclic(4));
        assert_eq!(dual_module(&h, &mu).unwrap().carrier().factors(), &[2]);
        let bad_mu = GModule::trivial(g, FinAb::new(vec![2, 2]).unwrap());
        assert!(matches!(dual_module(&h, &bad_mu), Err(Error::NonCyclicCoefficients(_))));
    }

    #[test]
    fn dual_with_cyclotomic_character() {
        // μ_8 with (Z/8)ˣ ≅ Z2×Z2 acting; dual of trivial Z/8 is μ_8 itself.
        let g = Arc::new(named::klein_four());
        let chi = [1u64, 3, 5, 7];
        let mu = GModule::cyclic_with_character(g.clone(), 8, &chi).unwrap();
        let a = GModule::trivial(g, FinAb::cyclic(8));
        let hat = dual_module(&a, &mu).unwrap();
        assert!(hat.is_isomorphic(&mu));
        let double = dual_module(&hat, &mu).unwrap();
        assert!(double.is_isomorphic(&a));
    }
}
