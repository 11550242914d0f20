//! Smith normal form over the integers, with the transforms kept.
//!
//! The factorization records row operations as a log (so `U` is applied to
//! vectors without ever being materialized) and tracks the column transform
//! `V` together with its inverse. Every factorization is checked by
//! replaying the log on `M·V` before it is returned.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].to_string()).collect())
            .collect();
        write!(f, "IntMatrix{rows:?}")
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = x.into();
            }
        }
        m
    }

    pub fn diagonal<T: Into<BigInt> + Copy>(entries: &[T]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m[(i, i)] = x.into();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row `dst` += k · row `src`, restricted to columns `from..`.
    fn add_row_multiple(&mut self, src: usize, dst: usize, k: &BigInt, from: usize) {
        for j in from..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let delta = s * k;
                self.data[dst * self.cols + j] += delta;
            }
        }
    }

    /// col `dst` += k · col `src`, restricted to rows `from..`.
    fn add_col_multiple(&mut self, src: usize, dst: usize, k: &BigInt, from: usize) {
        for i in from..self.rows {
            let s = &self.data[i * self.cols + src];
            if !s.is_zero() {
                let delta = s * k;
                self.data[i * self.cols + dst] += delta;
            }
        }
    }

    /// (row_i, row_j) ← (a·row_i + b·row_j, c·row_i + d·row_j).
    fn combine_rows(&mut self, i: usize, j: usize, m: &[BigInt; 4], from: usize) {
        for col in from..self.cols {
            let x = self.data[i * self.cols + col].clone();
            let y = self.data[j * self.cols + col].clone();
            if x.is_zero() && y.is_zero() {
                continue;
            }
            self.data[i * self.cols + col] = &m[0] * &x + &m[1] * &y;
            self.data[j * self.cols + col] = &m[2] * &x + &m[3] * &y;
        }
    }

    /// (col_i, col_j) ← (a·col_i + b·col_j, c·col_i + d·col_j).
    fn combine_cols(&mut self, i: usize, j: usize, m: &[BigInt; 4], from: usize) {
        for row in from..self.rows {
            let x = self.data[row * self.cols + i].clone();
            let y = self.data[row * self.cols + j].clone();
            if x.is_zero() && y.is_zero() {
                continue;
            }
            self.data[row * self.cols + i] = &m[0] * &x + &m[1] * &y;
            self.data[row * self.cols + j] = &m[2] * &x + &m[3] * &y;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = -x;
        }
    }
}

#[derive(Clone, Debug)]
enum RowOp {
    Swap(usize, usize),
    /// row dst += k · row src
    AddMul { src: usize, dst: usize, k: BigInt },
    /// (row_i, row_j) ← (a r_i + b r_j, c r_i + d r_j), ad − bc = 1
    Combine { i: usize, j: usize, m: [BigInt; 4] },
    Negate(usize),
}

impl RowOp {
    fn apply(&self, v: &mut [BigInt]) {
        match self {
            RowOp::Swap(a, b) => v.swap(*a, *b),
            RowOp::AddMul { src, dst, k } => {
                let delta = &v[*src] * k;
                v[*dst] += delta;
            }
            RowOp::Combine { i, j, m } => {
                let x = v[*i].clone();
                let y = v[*j].clone();
                v[*i] = &m[0] * &x + &m[1] * &y;
                v[*j] = &m[2] * &x + &m[3] * &y;
            }
            RowOp::Negate(i) => {
                let x = std::mem::take(&mut v[*i]);
                v[*i] = -x;
            }
        }
    }

    fn apply_inverse(&self, v: &mut [BigInt]) {
        match self {
            RowOp::Swap(a, b) => v.swap(*a, *b),
            RowOp::AddMul { src, dst, k } => {
                let delta = &v[*src] * k;
                v[*dst] -= delta;
            }
            RowOp::Combine { i, j, m } => {
                let x = v[*i].clone();
                let y = v[*j].clone();
                v[*i] = &m[3] * &x - &m[1] * &y;
                v[*j] = -&m[2] * &x + &m[0] * &y;
            }
            RowOp::Negate(i) => {
                let x = std::mem::take(&mut v[*i]);
                v[*i] = -x;
            }
        }
    }

    fn apply_to_matrix(&self, a: &mut IntMatrix) {
        match self {
            RowOp::Swap(x, y) => a.swap_rows(*x, *y),
            RowOp::AddMul { src, dst, k } => a.add_row_multiple(*src, *dst, k, 0),
            RowOp::Combine { i, j, m } => a.combine_rows(*i, *j, m, 0),
            RowOp::Negate(i) => a.negate_row(*i),
        }
    }
}

/// A Smith factorization `U·M·V = D` with `U` kept as an operation log.
#[derive(Clone, Debug)]
pub struct Smith {
    rows: usize,
    cols: usize,
    diagonal: Vec<BigInt>,
    rank: usize,
    ops: Vec<RowOp>,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Smith {
    pub fn compute(m: &IntMatrix) -> Smith {
        let (rows, cols) = (m.rows, m.cols);
        let mut a = m.clone();
        let mut v = IntMatrix::identity(cols);
        let mut v_inv = IntMatrix::identity(cols);
        let mut ops = Vec::new();
        let mut t = 0;
        while t < rows.min(cols) {
            let Some((pi, pj)) = min_abs_entry(&a, t) else { break };
            if pi != t {
                a.swap_rows(t, pi);
                ops.push(RowOp::Swap(t, pi));
            }
            if pj != t {
                a.swap_cols(t, pj);
                v.swap_cols(t, pj);
                v_inv.swap_rows(t, pj);
            }
            loop {
                for i in t + 1..rows {
                    if a[(i, t)].is_zero() {
                        continue;
                    }
                    let p = a[(t, t)].clone();
                    let x = a[(i, t)].clone();
                    if (&x % &p).is_zero() {
                        let k = -(&x / &p);
                        a.add_row_multiple(t, i, &k, t);
                        ops.push(RowOp::AddMul { src: t, dst: i, k });
                    } else {
                        let mat = gcd_combination(&p, &x);
                        a.combine_rows(t, i, &mat, t);
                        ops.push(RowOp::Combine { i: t, j: i, m: mat });
                    }
                }
                for j in t + 1..cols {
                    if a[(t, j)].is_zero() {
                        continue;
                    }
                    let p = a[(t, t)].clone();
                    let x = a[(t, j)].clone();
                    if (&x % &p).is_zero() {
                        let k = -(&x / &p);
                        a.add_col_multiple(t, j, &k, t);
                        v.add_col_multiple(t, j, &k, 0);
                        // V ← V·E with E = I + k e_t e_jᵀ, so V⁻¹ ← (I − k e_t e_jᵀ)·V⁻¹
                        let neg = -k;
                        v_inv.add_row_multiple(j, t, &neg, 0);
                    } else {
                        let mat = gcd_combination(&p, &x);
                        a.combine_cols(t, j, &mat, t);
                        v.combine_cols(t, j, &mat, 0);
                        let [ca, cb, cc, cd] = &mat;
                        let inv = [cd.clone(), -cc, -cb, ca.clone()];
                        v_inv.combine_rows(t, j, &inv, 0);
                    }
                }
                if (t + 1..rows).all(|i| a[(i, t)].is_zero()) {
                    break;
                }
            }
            if a[(t, t)].is_negative() {
                a.negate_row(t);
                ops.push(RowOp::Negate(t));
            }
            t += 1;
        }
        let rank = t;
        let mut diagonal: Vec<BigInt> =
            (0..rows.min(cols)).map(|i| a[(i, i)].clone()).collect();

        // Enforce d_i | d_{i+1} by replacing pairs with (gcd, lcm).
        for i in 0..rank {
            for j in i + 1..rank {
                let (di, dj) = (diagonal[i].clone(), diagonal[j].clone());
                if (&dj % &di).is_zero() {
                    continue;
                }
                let eg = di.extended_gcd(&dj);
                let g = eg.gcd;
                let (s, r) = (eg.x, eg.y);
                let row_mat = [s.clone(), r.clone(), -(&dj / &g), &di / &g];
                ops.push(RowOp::Combine { i, j, m: row_mat });
                let col_mat = [BigInt::one(), BigInt::one(), -(&r * &dj / &g), &s * &di / &g];
                v.combine_cols(i, j, &col_mat, 0);
                let [ca, cb, cc, cd] = &col_mat;
                let inv = [cd.clone(), -cc, -cb, ca.clone()];
                v_inv.combine_rows(i, j, &inv, 0);
                diagonal[i] = g.clone();
                diagonal[j] = &di * &dj / &g;
            }
        }

        let smith = Smith { rows, cols, diagonal, rank, ops, v, v_inv };
        smith.assert_round_trip(m);
        smith
    }

    /// Replays the row log on `M·V` and requires the result to be `D`.
    fn assert_round_trip(&self, m: &IntMatrix) {
        let mut w = m.mul(&self.v);
        for op in &self.ops {
            op.apply_to_matrix(&mut w);
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let expected = if i == j && i < self.diagonal.len() {
                    self.diagonal[i].clone()
                } else {
                    BigInt::zero()
                };
                assert_eq!(w[(i, j)], expected, "Smith round trip failed at ({i}, {j})");
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Diagonal entries, length `min(rows, cols)`; zeros after `rank`.
    pub fn diagonal(&self) -> &[BigInt] {
        &self.diagonal
    }

    pub fn v(&self) -> &IntMatrix {
        &self.v
    }

    pub fn v_inv(&self) -> &IntMatrix {
        &self.v_inv
    }

    pub fn apply_u(&self, v: &mut [BigInt]) {
        assert_eq!(v.len(), self.rows);
        for op in &self.ops {
            op.apply(v);
        }
    }

    pub fn apply_u_inverse(&self, v: &mut [BigInt]) {
        assert_eq!(v.len(), self.rows);
        for op in self.ops.iter().rev() {
            op.apply_inverse(v);
        }
    }

    pub fn u(&self) -> IntMatrix {
        let mut u = IntMatrix::identity(self.rows);
        for op in &self.ops {
            op.apply_to_matrix(&mut u);
        }
        u
    }
}

fn min_abs_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            let better = best.as_ref().is_none_or(|(_, _, b)| ax < *b);
            if better {
                let unit = ax.is_one();
                best = Some((i, j, ax));
                if unit {
                    let (bi, bj, _) = best.unwrap();
                    return Some((bi, bj));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Unimodular 2×2 matrix sending (p, x) to (gcd, 0).
fn gcd_combination(p: &BigInt, x: &BigInt) -> [BigInt; 4] {
    let eg = p.extended_gcd(x);
    let g = eg.gcd;
    [eg.x, eg.y, -(x / &g), p / &g]
}

/// `U·M·V = D` with all three matrices materialized.
#[derive(Clone, Debug)]
pub struct SmithNormalForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithNormalForm {
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d[(i, i)].clone()).collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithNormalForm {
    let s = Smith::compute(m);
    let u = s.u();
    let mut d = IntMatrix::zeros(m.rows, m.cols);
    for (i, x) in s.diagonal.iter().enumerate() {
        d[(i, i)] = x.clone();
    }
    let out = SmithNormalForm { d, u, v: s.v.clone() };
    assert_eq!(out.u.mul(m).mul(&out.v), out.d, "U·M·V ≠ D");
    out
}

/// Solver for `A·x ≡ b` where row `j` is taken modulo `moduli[j]`.
///
/// Rows are rescaled to the common modulus `e = lcm(moduli)` so a single
/// Smith factorization of the scaled matrix answers both kernel and
/// solvability questions.
#[derive(Clone, Debug)]
pub struct ModularSystem {
    modulus: BigInt,
    scale: Vec<BigInt>,
    smith: Smith,
    /// kernel basis scalars: the lattice is `V · diag(kernel_scale)`
    kernel_scale: Vec<BigInt>,
}

impl ModularSystem {
    pub fn new(a: &IntMatrix, moduli: &[u64]) -> ModularSystem {
        assert_eq!(a.rows, moduli.len());
        let e = moduli.iter().fold(1u64, |acc, &m| acc.lcm(&m));
        let modulus = BigInt::from(e);
        let scale: Vec<BigInt> = moduli.iter().map(|&m| BigInt::from(e / m)).collect();
        let mut scaled = a.clone();
        for (i, s) in scale.iter().enumerate() {
            if s.is_one() {
                continue;
            }
            for j in 0..a.cols {
                let x = std::mem::take(&mut scaled[(i, j)]);
                scaled[(i, j)] = (x * s).mod_floor(&modulus);
            }
        }
        for x in scaled.data.iter_mut() {
            *x = x.mod_floor(&modulus);
        }
        let smith = Smith::compute(&scaled);
        let kernel_scale = (0..a.cols)
            .map(|i| {
                if i < smith.rank {
                    let g = smith.diagonal[i].gcd(&modulus);
                    &modulus / g
                } else {
                    BigInt::one()
                }
            })
            .collect();
        ModularSystem { modulus, scale, smith, kernel_scale }
    }

    pub fn cols(&self) -> usize {
        self.smith.cols
    }

    pub fn rows(&self) -> usize {
        self.smith.rows
    }

    /// Returns the canonical solution of `A·x ≡ b`, or the list of
    /// Smith coordinates where the system is inconsistent.
    pub fn solve(&self, b: &[BigInt]) -> Result<Vec<BigInt>, Vec<usize>> {
        assert_eq!(b.len(), self.smith.rows);
        let mut c: Vec<BigInt> =
            b.iter().zip(&self.scale).map(|(x, s)| (x * s).mod_floor(&self.modulus)).collect();
        self.smith.apply_u(&mut c);
        let mut y = vec![BigInt::zero(); self.smith.cols];
        let mut bad = Vec::new();
        for (i, ci) in c.iter().enumerate() {
            let ci = ci.mod_floor(&self.modulus);
            if i < self.smith.rank {
                let d = &self.smith.diagonal[i];
                let g = d.gcd(&self.modulus);
                if !(&ci % &g).is_zero() {
                    bad.push(i);
                    continue;
                }
                let m = &self.modulus / &g;
                let dg = (d / &g).mod_floor(&m);
                let inv = mod_inverse(&dg, &m);
                y[i] = ((&ci / &g) * inv).mod_floor(&m);
            } else if !ci.is_zero() {
                bad.push(i);
            }
        }
        if bad.is_empty() {
            Ok(self.smith.v.mul_vec(&y))
        } else {
            Err(bad)
        }
    }

    /// Residues of `b` at the inconsistent Smith positions, each reduced
    /// modulo the order of that cokernel summand. Empty iff `b` is solvable.
    pub fn obstruction(&self, b: &[BigInt]) -> Vec<u64> {
        let mut c: Vec<BigInt> =
            b.iter().zip(&self.scale).map(|(x, s)| (x * s).mod_floor(&self.modulus)).collect();
        self.smith.apply_u(&mut c);
        let mut out = Vec::new();
        for (i, ci) in c.iter().enumerate() {
            let m = if i < self.smith.rank { self.smith.diagonal[i].gcd(&self.modulus) } else { self.modulus.clone() };
            let r = ci.mod_floor(&m);
            if !r.is_zero() {
                out.push(r.to_u64().expect("residue fits in u64"));
            }
        }
        out
    }

    /// Basis (as columns) of the lattice `{x : A·x ≡ 0}`.
    pub fn kernel_basis(&self) -> IntMatrix {
        let mut k = self.smith.v.clone();
        for (j, s) in self.kernel_scale.iter().enumerate() {
            if s.is_one() {
                continue;
            }
            for i in 0..k.rows {
                let x = std::mem::take(&mut k[(i, j)]);
                k[(i, j)] = x * s;
            }
        }
        k
    }

    /// Coordinates of a kernel vector in the basis of [`Self::kernel_basis`].
    pub fn kernel_coordinates(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let y = self.smith.v_inv.mul_vec(x);
        y.into_iter()
            .zip(&self.kernel_scale)
            .map(|(yi, s)| {
                let (q, r) = yi.div_mod_floor(s);
                r.is_zero().then_some(q)
            })
            .collect()
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    if m.is_one() {
        return BigInt::zero();
    }
    let eg = a.extended_gcd(m);
    debug_assert!(eg.gcd.is_one());
    eg.x.mod_floor(m)
}

/// The finite abelian group `K / R` for a kernel lattice `K ⊆ Zᴺ` and a
/// relation lattice `R ⊆ K` of full rank.
#[derive(Clone, Debug)]
pub struct LatticeQuotient {
    factors: Vec<u64>,
    /// Smith positions carrying the non-unit factors
    positions: Vec<usize>,
    relations_smith: Smith,
    generators: Vec<Vec<BigInt>>,
}

impl LatticeQuotient {
    /// `relations` has its columns in `K`; together they must span a
    /// sublattice of finite index.
    pub fn new(kernel: &ModularSystem, relations: &IntMatrix) -> LatticeQuotient {
        let n = kernel.cols();
        assert_eq!(relations.rows, n);
        let cols: Vec<Vec<BigInt>> = (0..relations.cols)
            .map(|j| {
                kernel
                    .kernel_coordinates(&relations.column(j))
                    .expect("relation outside the kernel lattice")
            })
            .collect();
        let x = IntMatrix::from_columns(n, &cols);
        let smith = Smith::compute(&x);
        assert_eq!(smith.rank, n, "relations do not have full rank");
        let basis = kernel.kernel_basis();
        let mut factors = Vec::new();
        let mut positions = Vec::new();
        let mut generators = Vec::new();
        for (i, d) in smith.diagonal.iter().enumerate() {
            if d.is_one() {
                continue;
            }
            factors.push(d.to_u64().expect("invariant factor exceeds u64"));
            positions.push(i);
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::one();
            smith.apply_u_inverse(&mut e);
            generators.push(basis.mul_vec(&e));
        }
        LatticeQuotient { factors, positions, relations_smith: smith, generators }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    /// Integer vectors in `K` mapping to the standard generators.
    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    /// Coordinates of `x ∈ K` in the quotient, or `None` if `x ∉ K`.
    pub fn coordinates(&self, kernel: &ModularSystem, x: &[BigInt]) -> Option<Vec<u64>> {
        let mut y = kernel.kernel_coordinates(x)?;
        self.relations_smith.apply_u(&mut y);
        Some(
            self.positions
                .iter()
                .zip(&self.factors)
                .map(|(&i, &f)| y[i].mod_floor(&BigInt::from(f)).to_u64().unwrap())
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors(m: &IntMatrix) -> Vec<i64> {
        smith_normal_form(m).invariant_factors().iter().map(|x| x.to_i64().unwrap()).collect()
    }

    #[test]
    fn zero_matrix_has_identity_transforms() {
        let m = IntMatrix::zeros(2, 3);
        let snf = smith_normal_form(&m);
        assert!(snf.d.is_zero());
        assert_eq!(snf.u, IntMatrix::identity(2));
        assert_eq!(snf.v, IntMatrix::identity(3));
    }

    #[test]
    fn coprime_diagonal_becomes_gcd_lcm() {
        assert_eq!(factors(&IntMatrix::diagonal(&[2i64, 3])), vec![1, 6]);
        assert_eq!(factors(&IntMatrix::diagonal(&[4i64, 6])), vec![2, 12]);
    }

    #[test]
    fn rectangular_example() {
        let m = IntMatrix::from_rows(&[vec![2i64, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(factors(&m), vec![2, 6, 12]);
        let m = IntMatrix::from_rows(&[vec![6i64, 4], vec![4, 6], vec![2, 2]]);
        assert_eq!(factors(&m), vec![2, 2]);
    }

    #[test]
    fn modular_system_solves_and_reports() {
        // 2x ≡ 1 (mod 4) is unsolvable, 2x ≡ 2 (mod 4) is solvable.
        let a = IntMatrix::from_rows(&[vec![2i64]]);
        let sys = ModularSystem::new(&a, &[4]);
        assert!(sys.solve(&[BigInt::from(1)]).is_err());
        let x = sys.solve(&[BigInt::from(2)]).unwrap();
        assert_eq!((BigInt::from(2) * &x[0]).mod_floor(&BigInt::from(4)), BigInt::from(2));
        let k = sys.kernel_basis();
        assert_eq!(k[(0, 0)].abs(), BigInt::from(2));
    }

    #[test]
    fn mixed_moduli_kernel() {
        // x ↦ (x mod 2, x mod 3): kernel 6Z.
        let a = IntMatrix::from_rows(&[vec![1i64], vec![1]]);
        let sys = ModularSystem::new(&a, &[2, 3]);
        assert_eq!(sys.kernel_basis()[(0, 0)].abs(), BigInt::from(6));
    }

    #[test]
    fn lattice_quotient_of_z4() {
        // K = Z, R = 4Z.
        let a = IntMatrix::zeros(0, 1);
        let sys = ModularSystem::new(&a, &[]);
        let q = LatticeQuotient::new(&sys, &IntMatrix::diagonal(&[4i64]));
        assert_eq!(q.factors(), &[4]);
        assert_eq!(q.coordinates(&sys, &[BigInt::from(7)]).unwrap(), vec![3]);
    }
}
