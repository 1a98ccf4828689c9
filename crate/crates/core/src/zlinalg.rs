//! Exact integer linear algebra: Smith normal form with unimodular transforms,
//! cokernel invariants, lattice membership, element orders in a cokernel, and ranks
//! over prime fields.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::combinatorics::is_prime;
use crate::error::{HookError, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![vec![BigInt::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let data = rows.iter().map(|r| r.iter().cloned().map(Into::into).collect()).collect();
        IntMatrix { rows: rows.len(), cols, data }
    }

    pub fn from_diagonal(rows: usize, cols: usize, diag: &[BigInt]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate() {
            m.data[i][i] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.data[i][j] = x;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(Zero::is_zero))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(HookError::DimensionMismatch { expected: self.cols, actual: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for (k, x) in self.data[i].iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let y = &other.data[k][j];
                    if !y.is_zero() {
                        out.data[i][j] += x * y;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(HookError::DimensionMismatch { expected: self.cols, actual: v.len() });
        }
        Ok(self
            .data
            .iter()
            .map(|r| r.iter().zip(v).filter(|(x, _)| !x.is_zero()).map(|(x, y)| x * y).sum())
            .collect())
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows {
            return Err(HookError::DimensionMismatch { expected: self.rows, actual: other.rows });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.iter().chain(b).cloned().collect())
            .collect();
        Ok(IntMatrix { rows: self.rows, cols: self.cols + other.cols, data })
    }

    pub fn with_column(&self, v: &[BigInt]) -> Result<IntMatrix> {
        if v.len() != self.rows {
            return Err(HookError::DimensionMismatch { expected: self.rows, actual: v.len() });
        }
        let mut out = self.clone();
        for (r, x) in out.data.iter_mut().zip(v) {
            r.push(x.clone());
        }
        out.cols += 1;
        Ok(out)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let data = rows.iter().map(|&i| cols.iter().map(|&j| self.data[i][j].clone()).collect()).collect();
        IntMatrix { rows: rows.len(), cols: cols.len(), data }
    }

    /// Determinant by fraction-free (Bareiss) elimination. Panics if not square.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let val = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = val / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        sign * &m[n - 1][n - 1]
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        let mut s = SparseMatrix::new(self.rows, self.cols);
        for (i, r) in self.data.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                if !x.is_zero() {
                    s.entries.insert((i, j), x.clone());
                }
            }
        }
        s
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.data {
            let cells: Vec<String> = r.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Sparse integer matrix with row-major deterministic entry order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigInt>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Adds `x` to entry `(i, j)`, dropping it if it cancels to zero.
    pub fn add(&mut self, i: usize, j: usize, x: BigInt) {
        assert!(i < self.rows && j < self.cols, "entry ({i},{j}) out of range");
        if x.is_zero() {
            return;
        }
        let slot = self.entries.entry((i, j)).or_insert_with(BigInt::zero);
        *slot += x;
        if slot.is_zero() {
            self.entries.remove(&(i, j));
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.entries.iter().map(|(&(i, j), x)| (i, j, x))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for (&(i, j), x) in &self.entries {
            m.data[i][j] = x.clone();
        }
        m
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(HookError::DimensionMismatch { expected: self.cols, actual: other.rows });
        }
        let mut by_row: Vec<Vec<(usize, &BigInt)>> = vec![Vec::new(); other.rows];
        for (&(k, j), y) in &other.entries {
            by_row[k].push((j, y));
        }
        let mut out = SparseMatrix::new(self.rows, other.cols);
        for (&(i, k), x) in &self.entries {
            for &(j, y) in &by_row[k] {
                out.add(i, j, x * y);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(HookError::DimensionMismatch { expected: self.cols, actual: v.len() });
        }
        let mut out = vec![BigInt::zero(); self.rows];
        for (&(i, j), x) in &self.entries {
            out[i] += x * &v[j];
        }
        Ok(out)
    }

    /// Appends a column.
    pub fn with_column(&self, v: &[BigInt]) -> Result<SparseMatrix> {
        if v.len() != self.rows {
            return Err(HookError::DimensionMismatch { expected: self.rows, actual: v.len() });
        }
        let mut out = self.clone();
        out.cols += 1;
        for (i, x) in v.iter().enumerate() {
            out.add(i, self.cols, x.clone());
        }
        Ok(out)
    }

    /// Restriction to a rectangular window of rows and columns.
    pub fn window(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> SparseMatrix {
        let mut out = SparseMatrix::new(rows.len(), cols.len());
        for (&(i, j), x) in &self.entries {
            if rows.contains(&i) && cols.contains(&j) {
                out.entries.insert((i - rows.start, j - cols.start), x.clone());
            }
        }
        out
    }
}

/// A finitely generated abelian group `Z^free_rank ⊕ Z_{t_1} ⊕ ... ⊕ Z_{t_m}` with
/// `t_1 | t_2 | ... | t_m` and every `t_j >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct AbelianGroupInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroupInvariants {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Builds the canonical form from the diagonal of a Smith form: units dropped,
    /// zeros ignored.
    pub fn from_diagonal(free_rank: usize, diag: &[BigInt]) -> Self {
        let mut torsion: Vec<BigInt> = diag.iter().map(|d| d.abs()).filter(|d| d > &BigInt::one()).collect();
        torsion.sort();
        AbelianGroupInvariants { free_rank, torsion }
    }

    pub fn cyclic(order: u64) -> Self {
        Self::from_diagonal(0, &[BigInt::from(order)])
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn torsion_part(&self) -> Self {
        AbelianGroupInvariants { free_rank: 0, torsion: self.torsion.clone() }
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    /// Number of invariant factors divisible by `p`.
    pub fn p_rank(&self, p: u64) -> usize {
        let p = BigInt::from(p);
        self.torsion.iter().filter(|t| (*t % &p).is_zero()).count()
    }

    /// `"0"`, `"Z"`, `"Z_2"`, `"Z ⊕ Z_2 ⊕ Z_4"`; the ASCII form joins with `" + "`.
    pub fn render(&self, ascii: bool) -> String {
        if self.is_trivial() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = std::iter::repeat_n("Z".to_string(), self.free_rank).collect();
        parts.extend(self.torsion.iter().map(|t| format!("Z_{t}")));
        parts.join(if ascii { " + " } else { " ⊕ " })
    }
}

impl fmt::Display for AbelianGroupInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

/// `U · A · V = S` with `U`, `V` unimodular and `S` diagonal with the divisibility chain.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    /// The non-zero diagonal entries `s_1 | s_2 | ... | s_rank`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.s.get(i, i).clone()).collect()
    }
}

struct Transforms {
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    v_inv: Vec<Vec<BigInt>>,
}

/// In-place Smith reduction. Returns the rank; the diagonal is left in `a`.
struct SnfCalc<'a> {
    a: &'a mut Vec<Vec<BigInt>>,
    m: usize,
    n: usize,
    tr: Option<Transforms>,
}

fn add_multiple(dst: &mut [BigInt], src: &[BigInt], q: &BigInt) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d += q * s;
        }
    }
}

fn rows_pair(v: &mut [Vec<BigInt>], dst: usize, src: usize) -> (&mut Vec<BigInt>, &Vec<BigInt>) {
    assert_ne!(dst, src);
    if dst < src {
        let (lo, hi) = v.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    }
}

impl SnfCalc<'_> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some(tr) = &mut self.tr {
            tr.u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in self.a.iter_mut() {
            r.swap(i, j);
        }
        if let Some(tr) = &mut self.tr {
            for r in tr.v.iter_mut() {
                r.swap(i, j);
            }
            tr.v_inv.swap(i, j);
        }
    }

    /// row_dst += q * row_src
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        let (d, s) = rows_pair(self.a, dst, src);
        add_multiple(d, s, q);
        if let Some(tr) = &mut self.tr {
            let (d, s) = rows_pair(&mut tr.u, dst, src);
            add_multiple(d, s, q);
        }
    }

    /// col_dst += q * col_src
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for r in self.a.iter_mut() {
            if !r[src].is_zero() {
                let x = q * &r[src];
                r[dst] += x;
            }
        }
        if let Some(tr) = &mut self.tr {
            for r in tr.v.iter_mut() {
                if !r[src].is_zero() {
                    let x = q * &r[src];
                    r[dst] += x;
                }
            }
            let neg = -q;
            let (d, s) = rows_pair(&mut tr.v_inv, src, dst);
            add_multiple(d, s, &neg);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -&*x;
        }
        if let Some(tr) = &mut self.tr {
            for x in tr.u[i].iter_mut() {
                *x = -&*x;
            }
        }
    }

    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.m {
            for j in t..self.n {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => x.magnitude() < self.a[bi][bj].magnitude(),
                };
                if better {
                    best = Some((i, j));
                    if x.magnitude().is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn run(&mut self) -> usize {
        let mut t = 0;
        while t < self.m.min(self.n) {
            let Some((pi, pj)) = self.find_pivot(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut clean = true;
                for i in t + 1..self.m {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let q = &self.a[i][t] / &self.a[t][t];
                    if !q.is_zero() {
                        self.add_row(i, t, &-q);
                    }
                    if !self.a[i][t].is_zero() {
                        clean = false;
                    }
                }
                for j in t + 1..self.n {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let q = &self.a[t][j] / &self.a[t][t];
                    if !q.is_zero() {
                        self.add_col(j, t, &-q);
                    }
                    if !self.a[t][j].is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    // bring the smallest remainder into the pivot position
                    let mut best = (t, t);
                    for i in t + 1..self.m {
                        let x = &self.a[i][t];
                        if !x.is_zero() && x.magnitude() < self.a[best.0][best.1].magnitude() {
                            best = (i, t);
                        }
                    }
                    for j in t + 1..self.n {
                        let x = &self.a[t][j];
                        if !x.is_zero() && x.magnitude() < self.a[best.0][best.1].magnitude() {
                            best = (t, j);
                        }
                    }
                    self.swap_rows(t, best.0);
                    self.swap_cols(t, best.1);
                    continue;
                }
                if self.a[t][t].magnitude().is_one() {
                    break;
                }
                let p = self.a[t][t].clone();
                let offender = (t + 1..self.m)
                    .find(|&i| (t + 1..self.n).any(|j| !(&self.a[i][j] % &p).is_zero()));
                match offender {
                    Some(i) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        t
    }
}

/// Smith normal form with transforms: `u · a · v = s`, and `v_inv = v^{-1}`.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let mut data = a.data.clone();
    let tr = Transforms {
        u: IntMatrix::identity(a.rows).data,
        v: IntMatrix::identity(a.cols).data,
        v_inv: IntMatrix::identity(a.cols).data,
    };
    let mut calc = SnfCalc { a: &mut data, m: a.rows, n: a.cols, tr: Some(tr) };
    let rank = calc.run();
    let tr = calc.tr.take().expect("transforms requested");
    let wrap = |rows: usize, cols: usize, data: Vec<Vec<BigInt>>| IntMatrix { rows, cols, data };
    SmithForm {
        u: wrap(a.rows, a.rows, tr.u),
        s: wrap(a.rows, a.cols, data),
        v: wrap(a.cols, a.cols, tr.v),
        v_inv: wrap(a.cols, a.cols, tr.v_inv),
        rank,
    }
}

/// Invariant factors (non-zero Smith diagonal, units included) without transforms.
pub fn smith_diagonal(a: &IntMatrix) -> Vec<BigInt> {
    let mut data = a.data.clone();
    let mut calc = SnfCalc { a: &mut data, m: a.rows, n: a.cols, tr: None };
    let rank = calc.run();
    (0..rank).map(|i| data[i][i].clone()).collect()
}

/// Invariants of `Z^rows / (column span of a)`.
///
/// Unit pivots are eliminated on a sparse representation first (choosing pivots of
/// low fill-in), and the remaining block goes through the dense Smith reduction.
pub fn cokernel_invariants(a: &SparseMatrix) -> AbelianGroupInvariants {
    let (units, rest) = eliminate_unit_pivots(a);
    let diag = smith_diagonal(&rest);
    let rank = units + diag.len();
    AbelianGroupInvariants::from_diagonal(a.rows - rank, &diag)
}

pub fn cokernel_invariants_dense(a: &IntMatrix) -> AbelianGroupInvariants {
    cokernel_invariants(&a.to_sparse())
}

/// Integer rank.
pub fn rank(a: &SparseMatrix) -> usize {
    a.rows - cokernel_invariants(a).free_rank
}

/// Removes unit pivots by row operations (which leave the cokernel unchanged up to
/// isomorphism). Returns the number of pivots removed and the residual dense block.
fn eliminate_unit_pivots(a: &SparseMatrix) -> (usize, IntMatrix) {
    let mut rows: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); a.rows];
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); a.cols];
    for (i, j, x) in a.iter() {
        rows[i].insert(j, x.clone());
        col_rows[j].insert(i);
    }
    let mut row_alive = vec![true; a.rows];
    let mut units = 0;
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, r) in rows.iter().enumerate() {
            if !row_alive[i] {
                continue;
            }
            for (&j, x) in r {
                if x.magnitude().is_one() {
                    let cost = (r.len() - 1) * (col_rows[j].len() - 1);
                    if best.is_none_or(|(_, _, c)| cost < c) {
                        best = Some((i, j, cost));
                    }
                }
            }
            if matches!(best, Some((_, _, 0))) {
                break;
            }
        }
        let Some((pi, pj, _)) = best else { break };
        let pivot_row = std::mem::take(&mut rows[pi]);
        let pv = pivot_row[&pj].clone();
        let others: Vec<usize> = col_rows[pj].iter().copied().filter(|&r| r != pi).collect();
        for r in others {
            let f = &rows[r][&pj] * &pv;
            for (&c, x) in &pivot_row {
                let entry = rows[r].entry(c).or_insert_with(BigInt::zero);
                *entry -= &f * x;
                if entry.is_zero() {
                    rows[r].remove(&c);
                    col_rows[c].remove(&r);
                } else {
                    col_rows[c].insert(r);
                }
            }
        }
        for &c in pivot_row.keys() {
            col_rows[c].remove(&pi);
        }
        // the pivot column is now zero outside the pivot row; drop both
        row_alive[pi] = false;
        units += 1;
    }
    let live_rows: Vec<usize> = (0..a.rows).filter(|&i| row_alive[i] && !rows[i].is_empty()).collect();
    let live_cols: Vec<usize> = (0..a.cols).filter(|&j| !col_rows[j].is_empty()).collect();
    let col_pos: BTreeMap<usize, usize> = live_cols.iter().enumerate().map(|(k, &j)| (j, k)).collect();
    let mut rest = IntMatrix::zeros(live_rows.len(), live_cols.len());
    for (k, &i) in live_rows.iter().enumerate() {
        for (j, x) in &rows[i] {
            rest.data[k][col_pos[j]] = x.clone();
        }
    }
    (units, rest)
}

/// Finds `y` with `a · y = v`, if one exists over the integers.
pub fn lattice_membership(a: &IntMatrix, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if v.len() != a.rows {
        return Err(HookError::DimensionMismatch { expected: a.rows, actual: v.len() });
    }
    let snf = smith_normal_form(a);
    Ok(solve_with(&snf, v))
}

/// Solves `a · y = v` given a Smith form of `a`.
pub fn solve_with(snf: &SmithForm, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let z = snf.u.mul_vec(v).ok()?;
    if z[snf.rank..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut w = vec![BigInt::zero(); snf.v.cols()];
    for i in 0..snf.rank {
        let (q, r) = z[i].div_rem(snf.s.get(i, i));
        if !r.is_zero() {
            return None;
        }
        w[i] = q;
    }
    snf.v.mul_vec(&w).ok()
}

/// Order of the class of a vector in a cokernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CokernelOrder {
    Finite(BigInt),
    Infinite,
}

impl CokernelOrder {
    pub fn finite(n: u64) -> Self {
        CokernelOrder::Finite(BigInt::from(n))
    }
}

impl fmt::Display for CokernelOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CokernelOrder::Finite(n) => write!(f, "{n}"),
            CokernelOrder::Infinite => write!(f, "infinite"),
        }
    }
}

/// The least `m >= 1` with `m · v` in the column span of `a`, read off Smith
/// coordinates: `lcm_j s_j / gcd(s_j, z_j)` for `z = U v`.
pub fn order_in_cokernel(a: &IntMatrix, v: &[BigInt]) -> Result<CokernelOrder> {
    if v.len() != a.rows {
        return Err(HookError::DimensionMismatch { expected: a.rows, actual: v.len() });
    }
    let snf = smith_normal_form(a);
    let z = snf.u.mul_vec(v)?;
    if z[snf.rank..].iter().any(|x| !x.is_zero()) {
        return Ok(CokernelOrder::Infinite);
    }
    let order = (0..snf.rank).fold(BigInt::one(), |acc, i| {
        let s = snf.s.get(i, i);
        let g = s.gcd(&z[i]);
        acc.lcm(&(s / g))
    });
    Ok(CokernelOrder::Finite(order))
}

/// Same quantity by a second route: compare the cokernel of `a` with that of `[a | v]`.
/// Adjoining `v` divides the torsion order by the order of its class, or drops the free
/// rank when the class has infinite order.
pub fn order_by_augmentation(a: &SparseMatrix, v: &[BigInt]) -> Result<CokernelOrder> {
    let before = cokernel_invariants(a);
    let after = cokernel_invariants(&a.with_column(v)?);
    if after.free_rank < before.free_rank {
        return Ok(CokernelOrder::Infinite);
    }
    Ok(CokernelOrder::Finite(before.torsion_order() / after.torsion_order()))
}

/// Whether `v` lies in the column span of `a` (by cokernel comparison).
pub fn in_column_span(a: &SparseMatrix, v: &[BigInt]) -> Result<bool> {
    Ok(order_by_augmentation(a, v)? == CokernelOrder::finite(1))
}

/// Rank over the field with `p` elements.
pub fn rank_mod_p(a: &SparseMatrix, p: u64) -> Result<usize> {
    if !is_prime(p) {
        return Err(HookError::NotPrime(p));
    }
    let pb = BigInt::from(p);
    let mut m = vec![vec![0u64; a.cols]; a.rows];
    for (i, j, x) in a.iter() {
        m[i][j] = x.mod_floor(&pb).to_u64().expect("residue fits");
    }
    let mul = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let inv = |x: u64| {
        // Fermat
        let (mut base, mut e, mut acc) = (x, p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        acc
    };
    let mut rank = 0;
    for col in 0..a.cols {
        let Some(piv) = (rank..a.rows).find(|&i| m[i][col] != 0) else { continue };
        m.swap(rank, piv);
        let pinv = inv(m[rank][col]);
        for x in m[rank].iter_mut() {
            *x = mul(*x, pinv);
        }
        for i in 0..a.rows {
            if i != rank && m[i][col] != 0 {
                let f = m[i][col];
                for j in col..a.cols {
                    let sub = mul(f, m[rank][j]);
                    m[i][j] = (m[i][j] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    Ok(rank)
}

/// Independent route to the invariant factors: `s_j = d_j / d_{j-1}` where `d_j` is
/// the gcd of all `j × j` minors. Exponential cost; meant for small test matrices.
pub fn invariant_factors_via_minors(a: &IntMatrix) -> Vec<BigInt> {
    let max = a.rows.min(a.cols);
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for j in 1..=max {
        let mut g = BigInt::zero();
        for rs in index_subsets(a.rows, j) {
            for cs in index_subsets(a.cols, j) {
                g = g.gcd(&a.submatrix(&rs, &cs).determinant());
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

fn index_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

/// Basis of the integer kernel of `a`, as the columns of the returned matrix.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let cols: Vec<usize> = (snf.rank..a.cols).collect();
    let rows: Vec<usize> = (0..a.cols).collect();
    snf.v.submatrix(&rows, &cols)
}

/// Invariants of `ker(outgoing) / im(incoming)` for a composable pair with
/// `outgoing · incoming = 0`.
pub fn subquotient_invariants(incoming: &SparseMatrix, outgoing: &SparseMatrix) -> Result<AbelianGroupInvariants> {
    if incoming.rows() != outgoing.cols() {
        return Err(HookError::DimensionMismatch { expected: outgoing.cols(), actual: incoming.rows() });
    }
    let snf = smith_normal_form(&outgoing.to_dense());
    let n = outgoing.cols();
    // coordinates of the image in the kernel basis given by the last columns of V
    let coords = snf.v_inv.mul(&incoming.to_dense())?;
    let rows: Vec<usize> = (snf.rank..n).collect();
    let cols: Vec<usize> = (0..incoming.cols()).collect();
    Ok(cokernel_invariants_dense(&coords.submatrix(&rows, &cols)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_snf(a: &IntMatrix) -> SmithForm {
        let snf = smith_normal_form(a);
        assert_eq!(snf.u.mul(a).unwrap().mul(&snf.v).unwrap(), snf.s);
        assert!(snf.u.determinant().magnitude().is_one());
        assert!(snf.v.determinant().magnitude().is_one());
        assert_eq!(snf.v.mul(&snf.v_inv).unwrap(), IntMatrix::identity(a.cols()));
        for i in 0..snf.s.rows() {
            for j in 0..snf.s.cols() {
                if i != j {
                    assert!(snf.s.get(i, j).is_zero());
                }
            }
        }
        let d = snf.diagonal();
        for w in d.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
        assert!(d.iter().all(|x| x.is_positive()));
        snf
    }

    #[test]
    fn snf_examples() {
        let z = IntMatrix::zeros(3, 2);
        let snf = check_snf(&z);
        assert!(snf.s.is_zero());
        assert_eq!(snf.u, IntMatrix::identity(3));
        assert_eq!(snf.v, IntMatrix::identity(2));

        let a = m(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(check_snf(&a).diagonal(), big(&[2, 4]));
        assert_eq!(invariant_factors_via_minors(&a), big(&[2, 4]));

        let id = IntMatrix::identity(4);
        assert_eq!(check_snf(&id).s, id);
    }

    #[test]
    fn minors_oracle_examples() {
        assert_eq!(invariant_factors_via_minors(&m(&[vec![3, 0], vec![0, 5]])), big(&[1, 15]));
        assert!(invariant_factors_via_minors(&IntMatrix::zeros(2, 3)).is_empty());
    }

    #[test]
    fn cokernel_examples() {
        let g = cokernel_invariants_dense(&m(&[vec![2]]));
        assert_eq!(g, AbelianGroupInvariants { free_rank: 0, torsion: big(&[2]) });
        let diag = m(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 3], vec![0, 0, 0]]);
        let g = cokernel_invariants_dense(&diag);
        assert_eq!(g.torsion, big(&[3]));
        assert_eq!(g.free_rank, 1);
        let g = cokernel_invariants_dense(&m(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(g, AbelianGroupInvariants { free_rank: 0, torsion: big(&[2, 4]) });
        assert_eq!(g.render(false), "Z_2 ⊕ Z_4");
        assert_eq!(g.render(true), "Z_2 + Z_4");
        assert_eq!(AbelianGroupInvariants::trivial().render(false), "0");
        let g = cokernel_invariants_dense(&IntMatrix::zeros(2, 1));
        assert_eq!(g.render(false), "Z ⊕ Z");
    }

    #[test]
    fn membership_examples() {
        let id = IntMatrix::identity(3);
        assert_eq!(lattice_membership(&id, &big(&[4, -1, 7])).unwrap(), Some(big(&[4, -1, 7])));
        assert_eq!(lattice_membership(&m(&[vec![2]]), &big(&[3])).unwrap(), None);
        let a = m(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(lattice_membership(&a, &big(&[2, 6])).unwrap(), Some(big(&[1, 0])));
        assert!(lattice_membership(&a, &big(&[1])).is_err());
    }

    #[test]
    fn order_examples() {
        let a = m(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(order_in_cokernel(&a, &big(&[2, 6])).unwrap(), CokernelOrder::finite(1));
        assert_eq!(order_in_cokernel(&m(&[vec![2]]), &big(&[1])).unwrap(), CokernelOrder::finite(2));
        let b = m(&[vec![2], vec![0]]);
        assert_eq!(order_in_cokernel(&b, &big(&[0, 1])).unwrap(), CokernelOrder::Infinite);
        assert_eq!(order_by_augmentation(&b.to_sparse(), &big(&[0, 1])).unwrap(), CokernelOrder::Infinite);
        assert_eq!(order_by_augmentation(&a.to_sparse(), &big(&[1, 1])).unwrap(), order_in_cokernel(&a, &big(&[1, 1])).unwrap());
    }

    #[test]
    fn rank_mod_p_examples() {
        let id = IntMatrix::identity(5).to_sparse();
        for p in [2, 3, 5, 7] {
            assert_eq!(rank_mod_p(&id, p).unwrap(), 5);
        }
        let a = m(&[vec![2, 4], vec![6, 8]]).to_sparse();
        assert_eq!(rank_mod_p(&a, 2).unwrap(), 0);
        assert_eq!(rank_mod_p(&a, 3).unwrap(), 2);
        assert_eq!(rank_mod_p(&a, 4), Err(HookError::NotPrime(4)));
    }

    #[test]
    fn kernel_and_subquotient() {
        // 0 -> Z --2--> Z -> 0 as the pair (incoming = [2], outgoing = zero map)
        let incoming = m(&[vec![2]]).to_sparse();
        let outgoing = SparseMatrix::new(0, 1);
        let h = subquotient_invariants(&incoming, &outgoing).unwrap();
        assert_eq!(h, AbelianGroupInvariants::cyclic(2));
        let k = kernel_basis(&m(&[vec![1, 1]]));
        assert_eq!(k.cols(), 1);
        assert!(m(&[vec![1, 1]]).mul(&k).unwrap().is_zero());
    }

    #[test]
    fn determinant_bareiss() {
        assert_eq!(m(&[vec![2, 4], vec![6, 8]]).determinant(), BigInt::from(-8));
        assert_eq!(m(&[vec![0, 1], vec![1, 0]]).determinant(), BigInt::from(-1));
        assert_eq!(m(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]).determinant(), BigInt::from(-3));
    }

    fn small_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-9i64..=9, c), r).prop_map(|rows| m(&rows))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn snf_agrees_with_minors(a in small_matrix()) {
            let snf = check_snf(&a);
            prop_assert_eq!(snf.diagonal(), invariant_factors_via_minors(&a));
            prop_assert_eq!(smith_diagonal(&a), snf.diagonal());
        }

        #[test]
        fn cokernel_invariant_under_permutation_and_zero_columns(a in small_matrix(), seed in 0u64..1000) {
            let g = cokernel_invariants_dense(&a);
            let mut rows: Vec<usize> = (0..a.rows()).collect();
            let mut cols: Vec<usize> = (0..a.cols()).collect();
            rows.rotate_left(seed as usize % a.rows());
            cols.reverse();
            let p = a.submatrix(&rows, &cols);
            prop_assert_eq!(&cokernel_invariants_dense(&p), &g);
            let padded = a.hcat(&IntMatrix::zeros(a.rows(), 2)).unwrap();
            prop_assert_eq!(&cokernel_invariants_dense(&padded), &g);
            let diag = smith_diagonal(&a);
            prop_assert_eq!(g.free_rank, a.rows() - diag.len());
        }

        #[test]
        fn rank_mod_p_counts_coprime_factors(a in small_matrix()) {
            let diag = smith_diagonal(&a);
            for p in [2u64, 3, 5] {
                let expect = diag.iter().filter(|d| !(*d % BigInt::from(p)).is_zero()).count();
                prop_assert_eq!(rank_mod_p(&a.to_sparse(), p).unwrap(), expect);
            }
        }

        #[test]
        fn order_is_minimal(a in small_matrix(), v in proptest::collection::vec(-9i64..=9, 6)) {
            let v = big(&v[..a.rows()]);
            let ord = order_in_cokernel(&a, &v).unwrap();
            prop_assert_eq!(&ord, &order_by_augmentation(&a.to_sparse(), &v).unwrap());
            if let CokernelOrder::Finite(n) = ord {
                let n = n.to_u64().unwrap();
                let member = |m: u64| {
                    let mv: Vec<BigInt> = v.iter().map(|x| x * m).collect();
                    let sol = lattice_membership(&a, &mv).unwrap();
                    if let Some(y) = &sol {
                        assert_eq!(a.mul_vec(y).unwrap(), mv);
                    }
                    sol.is_some()
                };
                prop_assert!(member(n));
                // minimal iff no n / p works, p a prime divisor of n
                let mut rest = n;
                let mut p = 2;
                while rest > 1 {
                    if p * p > rest {
                        p = rest;
                    }
                    if rest % p == 0 {
                        prop_assert!(!member(n / p));
                        while rest % p == 0 {
                            rest /= p;
                        }
                    }
                    p += 1;
                }
            }
        }
    }
}
