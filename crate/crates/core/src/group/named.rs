//! Standard small groups used by fixtures and tests.

use crate::group::{FiniteGroup, Permutation, DEFAULT_MAX_ORDER};

pub fn cyclic(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    let rows = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    FiniteGroup::from_table(rows).expect("cyclic group")
}

pub fn klein_four() -> FiniteGroup {
    cyclic(2).direct_product(&cyclic(2))
}

pub fn elementary_abelian(p: usize, rank: usize) -> FiniteGroup {
    (0..rank).fold(cyclic(1), |acc, _| acc.direct_product(&cyclic(p)))
}

fn perm_group(gens: &[&str]) -> FiniteGroup {
    let gens: Vec<Permutation> = gens.iter().map(|s| s.parse().expect("cycle notation")).collect();
    FiniteGroup::from_permutations(&gens, DEFAULT_MAX_ORDER).expect("permutation group")
}

fn cycle_string(points: impl IntoIterator<Item = usize>) -> String {
    let parts: Vec<String> = points.into_iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(" "))
}

pub fn symmetric(n: usize) -> FiniteGroup {
    match n {
        0 | 1 => cyclic(1),
        2 => perm_group(&["(0 1)"]),
        _ => perm_group(&["(0 1)", &cycle_string(0..n)]),
    }
}

pub fn alternating(n: usize) -> FiniteGroup {
    if n < 3 {
        return cyclic(1);
    }
    let gens: Vec<String> = (2..n).map(|k| format!("(0 1 {k})")).collect();
    let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
    perm_group(&refs)
}

/// Dihedral group of order `2n`.
pub fn dihedral(n: usize) -> FiniteGroup {
    match n {
        1 => cyclic(2),
        2 => klein_four(),
        _ => {
            let reflection: Vec<String> = (1..n)
                .filter(|&i| i < n - i)
                .map(|i| format!("({} {})", i, n - i))
                .collect();
            perm_group(&[&cycle_string(0..n), &reflection.concat()])
        }
    }
}

/// 2×2 matrices over a ring given by `reduce`, closed from generators.
fn matrix_group(gens: &[[i64; 4]], reduce: impl Fn(i64) -> i64) -> FiniteGroup {
    let mul = |a: &[i64; 4], b: &[i64; 4]| {
        [
            reduce(a[0] * b[0] + a[1] * b[2]),
            reduce(a[0] * b[1] + a[1] * b[3]),
            reduce(a[2] * b[0] + a[3] * b[2]),
            reduce(a[2] * b[1] + a[3] * b[3]),
        ]
    };
    let gens: Vec<[i64; 4]> = gens.iter().map(|g| g.map(&reduce)).collect();
    FiniteGroup::from_closure([1, 0, 0, 1], &gens, mul, DEFAULT_MAX_ORDER)
        .expect("matrix group")
        .0
}

/// Quaternion group of order 8.
pub fn quaternion() -> FiniteGroup {
    // Regular permutation representation on {±1, ±i, ±j, ±k}, points
    // 0..8 = 1, i, j, k, -1, -i, -j, -k; left multiplication by i and j.
    perm_group(&["(0 1 4 5)(2 3 6 7)", "(0 2 4 6)(1 7 5 3)"])
}

/// Generalized quaternion group of order `4n`.
pub fn dicyclic(n: usize) -> FiniteGroup {
    // ⟨a, x | a^{2n} = 1, x² = aⁿ, x a x⁻¹ = a⁻¹⟩ as pairs (k, e) ↦ aᵏxᵉ.
    let m = 2 * n;
    let idx = |k: usize, e: usize| e * m + k;
    let mut rows = vec![vec![0; 2 * m]; 2 * m];
    for e1 in 0..2 {
        for k1 in 0..m {
            for e2 in 0..2 {
                for k2 in 0..m {
                    // aᵏ¹xᵉ¹ · aᵏ²xᵉ² = aᵏ¹ (xᵉ¹ aᵏ² x⁻ᵉ¹) xᵉ¹ xᵉ²
                    let k2c = if e1 == 1 { (m - k2) % m } else { k2 };
                    let (mut k, mut e) = ((k1 + k2c) % m, e1 + e2);
                    if e == 2 {
                        e = 0;
                        k = (k + n) % m;
                    }
                    rows[idx(k1, e1)][idx(k2, e2)] = idx(k, e);
                }
            }
        }
    }
    FiniteGroup::from_table(rows).expect("dicyclic group")
}

/// `SL(2, F_p)`.
pub fn special_linear_2(p: i64) -> FiniteGroup {
    matrix_group(&[[1, 1, 0, 1], [0, -1, 1, 0]], |x| x.rem_euclid(p))
}

/// Every group of order at most 8 up to isomorphism, with a short name.
pub fn groups_up_to_order_8() -> Vec<(&'static str, FiniteGroup)> {
    vec![
        ("1", cyclic(1)),
        ("Z2", cyclic(2)),
        ("Z3", cyclic(3)),
        ("Z4", cyclic(4)),
        ("Z2xZ2", klein_four()),
        ("Z5", cyclic(5)),
        ("Z6", cyclic(6)),
        ("S3", symmetric(3)),
        ("Z7", cyclic(7)),
        ("Z8", cyclic(8)),
        ("Z4xZ2", cyclic(4).direct_product(&cyclic(2))),
        ("Z2^3", elementary_abelian(2, 3)),
        ("D4", dihedral(4)),
        ("Q8", quaternion()),
    ]
}

/// Look up a named group: `Z<n>`, `V4`, `S<n>`, `A<n>`, `D<n>` (order 2n),
/// `Q8`, `Dic<n>`, `SL2_<p>`.
pub fn by_name(name: &str) -> Option<FiniteGroup> {
    let num = |prefix: &str| name.strip_prefix(prefix).and_then(|r| r.parse::<usize>().ok());
    if name == "V4" || name == "Z2xZ2" {
        return Some(klein_four());
    }
    if name == "Q8" {
        return Some(quaternion());
    }
    if let Some(p) = num("SL2_") {
        return Some(special_linear_2(p as i64));
    }
    if let Some(n) = num("Dic") {
        return Some(dicyclic(n));
    }
    if let Some(n) = num("Z") {
        return Some(cyclic(n.max(1)));
    }
    if let Some(n) = num("S") {
        return Some(symmetric(n));
    }
    if let Some(n) = num("A") {
        return Some(alternating(n));
    }
    if let Some(n) = num("D") {
        return Some(dihedral(n));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(symmetric(4).order(), 24);
        assert_eq!(alternating(5).order(), 60);
        assert_eq!(alternating(6).order(), 360);
        assert_eq!(dihedral(5).order(), 10);
        assert_eq!(quaternion().order(), 8);
        assert_eq!(dicyclic(4).order(), 16);
        assert_eq!(special_linear_2(5).order(), 120);
        assert_eq!(special_linear_2(3).order(), 24);
    }

    #[test]
    fn quaternion_has_unique_involution() {
        let q = quaternion();
        assert!(!q.is_abelian());
        assert_eq!(q.elements().filter(|&x| q.element_order(x) == 2).count(), 1);
        assert_eq!(q.elements().filter(|&x| q.element_order(x) == 4).count(), 6);
        let d = dicyclic(2);
        assert_eq!(d.elements().filter(|&x| d.element_order(x) == 2).count(), 1);
    }

    #[test]
    fn sl25_is_perfect_not_simple() {
        let g = special_linear_2(5);
        assert!(g.is_perfect());
        assert!(!g.is_simple());
    }

    #[test]
    fn small_groups_are_pairwise_distinguished() {
        // (order, abelian, element-order profile) separates all groups of order ≤ 8.
        let profiles: Vec<_> = groups_up_to_order_8()
            .into_iter()
            .map(|(_, g)| {
                let mut orders: Vec<usize> = g.elements().map(|x| g.element_order(x)).collect();
                orders.sort_unstable();
                (g.order(), g.is_abelian(), orders)
            })
            .collect();
        for i in 0..profiles.len() {
            for j in 0..i {
                assert_ne!(profiles[i], profiles[j]);
            }
        }
    }
}
