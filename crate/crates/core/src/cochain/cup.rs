use crate::cochain::{increment, reduce_flat, same_module, slot_count, slot_of, Cochain, MAX_DEGREE};
use crate::error::{Error, Result};
use crate::zmodule::Pairing;

/// `(a ∪ b)(g_1, …, g_{p+q}) = pair(a(g_1, …, g_p), (g_1 ⋯ g_p) · b(g_{p+1}, …))`.
pub fn cup(a: &Cochain, b: &Cochain, pair: &Pairing) -> Result<Cochain> {
    let (p, q) = (a.degree(), b.degree());
    if p + q > MAX_DEGREE {
        return Err(Error::DegreeTooHigh(p + q));
    }
    if !same_module(a.module(), pair.left()) || !same_module(b.module(), pair.right()) {
        return Err(Error::NonEquivariantPairing("defined on different modules than the cochains".into()));
    }
    let target = pair.target().clone();
    let g = a.group().clone();
    let n = g.order();
    let r = target.rank();
    let deg = p + q;
    let slots = slot_count(n, deg);
    let mut values = vec![0i64; slots * r];
    let mut t = vec![1usize; deg];
    let mut moved = vec![0i64; b.module().rank()];
    for s in 0..slots {
        if s > 0 {
            increment(&mut t, n);
        }
        let x = a.slot_value(slot_of(n, &t[..p]));
        if x.iter().all(|&v| v == 0) {
            continue;
        }
        let prefix = t[..p].iter().fold(0, |acc, &h| g.mul(acc, h));
        let y = b.slot_value(slot_of(n, &t[p..]));
        moved.iter_mut().for_each(|v| *v = 0);
        b.module().act_add(prefix, y, 1, &mut moved);
        pair.apply_add(x, &moved, &mut values[s * r..(s + 1) * r]);
    }
    reduce_flat(&target, &mut values);
    Ok(Cochain::from_raw(target, deg, values))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::cochain::cohomology;
    use crate::group::named;
    use crate::zmodule::{FinAb, GModule};

    #[test]
    fn square_of_the_z2_character() {
        let m = Arc::new(GModule::trivial(Arc::new(named::cyclic(2)), FinAb::cyclic(2)));
        let pair = Pairing::product(m.clone()).unwrap();
        let a = Cochain::from_fn(m.clone(), 1, |_| vec![1]).unwrap();
        let sq = cup(&a, &a, &pair).unwrap();
        let h2 = cohomology(m.clone(), 2).unwrap();
        assert_eq!(h2.reduce(&sq).unwrap(), vec![1]);
        let zero = Cochain::zero(m, 1).unwrap();
        assert!(cup(&a, &zero, &pair).unwrap().is_zero());
        assert!(cup(&zero, &a, &pair).unwrap().is_zero());
    }

    #[test]
    fn degree_zero_is_pointwise() {
        let m = Arc::new(GModule::trivial(Arc::new(named::cyclic(3)), FinAb::cyclic(6)));
        let pair = Pairing::product(m.clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let b = Cochain::random(m.clone(), 2, &mut rng).unwrap();
        let c = Cochain::from_fn(m, 0, |_| vec![5]).unwrap();
        assert_eq!(cup(&c, &b, &pair).unwrap(), b.scale(5));
    }

    #[test]
    fn leibniz_with_nontrivial_action() {
        let g = Arc::new(named::symmetric(3));
        let sign: Vec<u64> = g.elements().map(|x| if g.element_order(x) == 2 { 3 } else { 1 }).collect();
        let m = Arc::new(GModule::cyclic_with_character(g.clone(), 4, &sign).unwrap());
        let t = Arc::new(GModule::trivial(g, FinAb::cyclic(4)));
        let pair = Pairing::new(m.clone(), m.clone(), t, vec![vec![vec![1]]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, q) in [(0, 1), (1, 0), (1, 1), (2, 0), (0, 2)] {
            let a = Cochain::random(m.clone(), p, &mut rng).unwrap();
            let b = Cochain::random(m.clone(), q, &mut rng).unwrap();
            let lhs = cup(&a, &b, &pair).unwrap().differential_unchecked();
            let sign = if p % 2 == 0 { 1 } else { -1 };
            let rhs = cup(&a.differential_unchecked(), &b, &pair)
                .unwrap()
                .add(&cup(&a, &b.differential_unchecked(), &pair).unwrap().scale(sign))
                .unwrap();
            assert_eq!(lhs, rhs, "Leibniz fails in degrees ({p}, {q})");
        }
    }

    #[test]
    fn rejects_mismatched_pairing_and_high_degree() {
        let m = Arc::new(GModule::trivial(Arc::new(named::cyclic(2)), FinAb::cyclic(2)));
        let pair = Pairing::product(m.clone()).unwrap();
        let a = Cochain::zero(m.clone(), 2).unwrap();
        assert_eq!(cup(&a, &a, &pair), Err(Error::DegreeTooHigh(4)));
        let other = Arc::new(GModule::trivial(Arc::new(named::cyclic(2)), FinAb::cyclic(4)));
        let b = Cochain::zero(other, 1).unwrap();
        assert!(cup(&b, &b, &pair).is_err());
    }
}
