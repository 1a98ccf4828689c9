//! The projective resolution `P_*(a, b)` of `Δ(a, 1^b)` and the matrices of the
//! induced differentials `Hom(θ_i(a, b), M)`.
//!
//! `Hom(D(a_1, ..., a_m), M)` is identified with the `(a_1, ..., a_m)` weight space of
//! `M`. The differential from `Hom(P_{i-1}, M)` to `Hom(P_i, M)` is `Σ_t (-1)^{t-1} φ_t`,
//! where `φ_t` substitutes `j -> j - 1` for every letter `j > t`; a component is kept
//! only when the merged composition indexes a summand of `P_i`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::combinatorics::{binom, resolution_compositions, HookShape, Weight};
use crate::error::{invalid, HookError, Result};
use crate::weyl_modules::{
    hook_semistandard_basis, straighten, tensor_weight_basis, BasisElement, BasisOrder, HookTableau,
    IntCombination, TensorMonomial,
};
use crate::zlinalg::SparseMatrix;
use crate::Verdict;

/// The target module `M` of `Hom(P_*(a, b), M)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    /// `D_s ⊗ ∧^t`.
    Tensor { s: usize, t: usize },
    /// The hook Weyl module of the given shape.
    Hook(HookShape),
}

impl Target {
    pub fn degree(&self) -> usize {
        match self {
            Target::Tensor { s, t } => s + t,
            Target::Hook(h) => h.degree(),
        }
    }

    /// `D_{a+k} ⊗ ∧^{b-k}`.
    pub fn tensor_shift(a: usize, b: usize, k: usize) -> Result<Target> {
        if k > b {
            return Err(invalid(format!("k = {k} exceeds b = {b}")));
        }
        Ok(Target::Tensor { s: a + k, t: b - k })
    }

    /// `Δ(h(k)) = Δ(a+k, 1^{b-k})`; for `k = b` this is `D_{a+b}`, represented as a
    /// tensor target with empty exterior part.
    pub fn hook_shift(a: usize, b: usize, k: usize) -> Result<Target> {
        let h = HookShape::new(a, b)?.shift(k)?;
        if h.b() == 0 {
            Ok(Target::Tensor { s: h.a(), t: 0 })
        } else {
            Ok(Target::Hook(h))
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            Target::Tensor { .. } => "tensor",
            Target::Hook(_) => "hook",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Tensor { s, t } => write!(f, "D_{s}⊗∧^{t}"),
            Target::Hook(h) => write!(f, "Δ{h}"),
        }
    }
}

/// A module with a weight-space basis and the letter-merging maps `φ_t`.
pub trait TargetModule {
    type Elem: BasisElement;

    fn degree(&self) -> usize;

    fn weight_basis(&self, weight: &Weight) -> Result<BasisOrder<Self::Elem>>;

    /// The element obtained by substituting `j -> j - 1` for `j > t`, re-canonicalized.
    fn merge(&self, elem: &Self::Elem, t: usize) -> IntCombination<Self::Elem>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TensorModule {
    pub s: usize,
    pub t: usize,
}

impl TargetModule for TensorModule {
    type Elem = TensorMonomial;

    fn degree(&self) -> usize {
        self.s + self.t
    }

    fn weight_basis(&self, weight: &Weight) -> Result<BasisOrder<TensorMonomial>> {
        tensor_weight_basis(self.s, self.t, weight)
    }

    fn merge(&self, elem: &TensorMonomial, t: usize) -> IntCombination<TensorMonomial> {
        match elem.merge_letters(t) {
            Some((c, m)) => IntCombination::single(m, c),
            None => IntCombination::zero(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HookModule(pub HookShape);

impl TargetModule for HookModule {
    type Elem = HookTableau;

    fn degree(&self) -> usize {
        self.0.degree()
    }

    fn weight_basis(&self, weight: &Weight) -> Result<BasisOrder<HookTableau>> {
        hook_semistandard_basis(self.0, weight)
    }

    fn merge(&self, elem: &HookTableau, t: usize) -> IntCombination<HookTableau> {
        match elem.as_monomial().merge_letters(t) {
            Some((c, m)) => straighten(self.0, m.d_part(), m.w_part())
                .expect("substitution preserves the shape")
                .scaled(&c),
            None => IntCombination::zero(),
        }
    }
}

/// One summand `Hom(D(w), M)` of a Hom space, placed at `offset` in the flat basis.
#[derive(Clone, Debug)]
pub struct HomBlock<E: BasisElement> {
    pub weight: Weight,
    pub basis: BasisOrder<E>,
    pub offset: usize,
}

/// Basis of `Hom(P_i(a, b), M)`: one block per summand, blocks in descending
/// lexicographic composition order, each block in basis order.
#[derive(Clone, Debug)]
pub struct HomSpace<E: BasisElement> {
    blocks: Vec<HomBlock<E>>,
    by_weight: HashMap<Weight, usize>,
    dim: usize,
}

impl<E: BasisElement> HomSpace<E> {
    pub fn blocks(&self) -> &[HomBlock<E>] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn block(&self, weight: &Weight) -> Option<&HomBlock<E>> {
        self.by_weight.get(weight).map(|&i| &self.blocks[i])
    }

    pub fn flat_index(&self, weight: &Weight, elem: &E) -> Option<usize> {
        let block = self.block(weight)?;
        Some(block.offset + block.basis.index_of(elem)?)
    }

    /// Coordinates of a cochain given per summand.
    pub fn coordinates(&self, parts: &[(Weight, IntCombination<E>)]) -> Result<Vec<BigInt>> {
        let mut v = vec![BigInt::zero(); self.dim];
        for (w, x) in parts {
            for (e, c) in x.iter() {
                let idx = self
                    .flat_index(w, e)
                    .ok_or_else(|| HookError::NotInBasis(format!("{e} at weight {w}")))?;
                v[idx] += c;
            }
        }
        Ok(v)
    }

    pub fn labels(&self) -> Vec<String> {
        self.blocks.iter().flat_map(|b| b.basis.elements().iter().map(ToString::to_string)).collect()
    }
}

pub fn hom_space_for<M: TargetModule>(module: &M, a: usize, b: usize, i: usize) -> Result<HomSpace<M::Elem>> {
    if module.degree() != a + b {
        return Err(HookError::DegreeMismatch { expected: a + b, actual: module.degree() });
    }
    let mut blocks = Vec::new();
    let mut offset = 0;
    for weight in resolution_compositions(a, b, i)? {
        let basis = module.weight_basis(&weight)?;
        let len = basis.len();
        blocks.push(HomBlock { weight, basis, offset });
        offset += len;
    }
    let by_weight = blocks.iter().enumerate().map(|(i, b)| (b.weight.clone(), i)).collect();
    Ok(HomSpace { blocks, by_weight, dim: offset })
}

/// A Hom-space basis for either target family.
#[derive(Clone, Debug)]
pub enum HomSpaceBasis {
    Tensor(HomSpace<TensorMonomial>),
    Hook(HomSpace<HookTableau>),
}

/// Block summary used by dumps: composition label, offset and size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockInfo {
    pub weight: Weight,
    pub offset: usize,
    pub len: usize,
}

impl HomSpaceBasis {
    pub fn dim(&self) -> usize {
        match self {
            HomSpaceBasis::Tensor(h) => h.dim(),
            HomSpaceBasis::Hook(h) => h.dim(),
        }
    }

    pub fn block_info(&self) -> Vec<BlockInfo> {
        fn info<E: BasisElement>(h: &HomSpace<E>) -> Vec<BlockInfo> {
            h.blocks()
                .iter()
                .map(|b| BlockInfo { weight: b.weight.clone(), offset: b.offset, len: b.basis.len() })
                .collect()
        }
        match self {
            HomSpaceBasis::Tensor(h) => info(h),
            HomSpaceBasis::Hook(h) => info(h),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        match self {
            HomSpaceBasis::Tensor(h) => h.labels(),
            HomSpaceBasis::Hook(h) => h.labels(),
        }
    }

    pub fn as_tensor(&self) -> Option<&HomSpace<TensorMonomial>> {
        match self {
            HomSpaceBasis::Tensor(h) => Some(h),
            HomSpaceBasis::Hook(_) => None,
        }
    }

    pub fn as_hook(&self) -> Option<&HomSpace<HookTableau>> {
        match self {
            HomSpaceBasis::Hook(h) => Some(h),
            HomSpaceBasis::Tensor(_) => None,
        }
    }
}

/// Basis of `Hom(P_i(a, b), M)`.
pub fn hom_space(a: usize, b: usize, i: usize, target: &Target) -> Result<HomSpaceBasis> {
    match *target {
        Target::Tensor { s, t } => Ok(HomSpaceBasis::Tensor(hom_space_for(&TensorModule { s, t }, a, b, i)?)),
        Target::Hook(h) => Ok(HomSpaceBasis::Hook(hom_space_for(&HookModule(h), a, b, i)?)),
    }
}

/// `φ_t` applied to a basis element of the `source_weight` weight space; zero when
/// `t` is at least the number of parts.
pub fn phi_t<M: TargetModule>(
    module: &M,
    t: usize,
    source_weight: &Weight,
    elem: &M::Elem,
) -> Result<IntCombination<M::Elem>> {
    if t < 1 {
        return Err(invalid("phi_t needs t >= 1"));
    }
    if !elem.has_weight(source_weight) {
        return Err(invalid(format!("{elem} does not have weight {source_weight}")));
    }
    if t >= source_weight.len() {
        return Ok(IntCombination::zero());
    }
    Ok(module.merge(elem, t))
}

/// The matrix `e^{(i)}(a, b, M)` of `Hom(θ_i(a, b), M): Hom(P_{i-1}, M) -> Hom(P_i, M)`,
/// together with the bases of both sides. Column `j` is the image of the `j`-th
/// domain basis element.
#[derive(Clone, Debug)]
pub struct DifferentialMatrix {
    pub a: usize,
    pub b: usize,
    pub i: usize,
    pub target: Target,
    pub matrix: SparseMatrix,
    pub domain: HomSpaceBasis,
    pub codomain: HomSpaceBasis,
}

fn build_differential<M: TargetModule>(
    module: &M,
    a: usize,
    b: usize,
    i: usize,
) -> Result<(SparseMatrix, HomSpace<M::Elem>, HomSpace<M::Elem>)> {
    let domain = hom_space_for(module, a, b, i - 1)?;
    let codomain = hom_space_for(module, a, b, i)?;
    let mut matrix = SparseMatrix::new(codomain.dim(), domain.dim());
    for block in domain.blocks() {
        for t in 1..block.weight.len() {
            let merged = block.weight.merge(t).expect("t is in range");
            let Some(target_block) = codomain.block(&merged) else { continue };
            let sign = if t % 2 == 1 { BigInt::one() } else { -BigInt::one() };
            for (idx, elem) in block.basis.elements().iter().enumerate() {
                for (img, c) in module.merge(elem, t).iter() {
                    let row = target_block.basis.index_of(img).ok_or_else(|| {
                        HookError::NotInBasis(format!("{img} at weight {merged}"))
                    })?;
                    matrix.add(target_block.offset + row, block.offset + idx, &sign * c);
                }
            }
        }
    }
    Ok((matrix, domain, codomain))
}

/// Builds `e^{(i)}(a, b, M)` for `1 <= i <= b`.
pub fn differential_matrix(a: usize, b: usize, i: usize, target: &Target) -> Result<DifferentialMatrix> {
    HookShape::new(a, b)?;
    if i < 1 || i > b {
        return Err(invalid(format!("differential index i = {i} must lie in 1..={b}")));
    }
    let (matrix, domain, codomain) = match *target {
        Target::Tensor { s, t } => {
            let (m, d, c) = build_differential(&TensorModule { s, t }, a, b, i)?;
            (m, HomSpaceBasis::Tensor(d), HomSpaceBasis::Tensor(c))
        }
        Target::Hook(h) => {
            let (m, d, c) = build_differential(&HookModule(h), a, b, i)?;
            (m, HomSpaceBasis::Hook(d), HomSpaceBasis::Hook(c))
        }
    };
    Ok(DifferentialMatrix { a, b, i, target: *target, matrix, domain, codomain })
}

type CacheKey = (usize, usize, usize, Target);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<DifferentialMatrix>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<DifferentialMatrix>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Read-through memoized [`differential_matrix`]; safe to call from many threads.
pub fn differential_matrix_cached(a: usize, b: usize, i: usize, target: &Target) -> Result<Arc<DifferentialMatrix>> {
    let key = (a, b, i, *target);
    if let Some(m) = cache().lock().expect("cache poisoned").get(&key) {
        return Ok(Arc::clone(m));
    }
    let built = Arc::new(differential_matrix(a, b, i, target)?);
    let mut guard = cache().lock().expect("cache poisoned");
    Ok(Arc::clone(guard.entry(key).or_insert(built)))
}

/// The differential `Hom(P_{i-1}, M) -> Hom(P_i, M)` as a bare matrix, extended by zero
/// maps outside `1..=b` (with the correct shapes) so that the cochain complex can be
/// indexed uniformly.
pub fn cochain_differential(a: usize, b: usize, i: usize, target: &Target) -> Result<SparseMatrix> {
    if (1..=b).contains(&i) {
        return Ok(differential_matrix_cached(a, b, i, target)?.matrix.clone());
    }
    let dim = |j: usize| -> Result<usize> {
        if j > b {
            Ok(0)
        } else {
            Ok(hom_space(a, b, j, target)?.dim())
        }
    };
    match i {
        0 => Ok(SparseMatrix::new(dim(0)?, 0)),
        _ => Ok(SparseMatrix::new(0, dim(i - 1)?)),
    }
}

fn wedge_has_one(m: &TensorMonomial) -> bool {
    m.w_part().contains(&1)
}

/// Checks the four structural claims about `e^{(1)}(a, b, D_{a+k} ⊗ ∧^{b-k})` for
/// `1 <= k < b`: the shape of the first row block, the block-diagonal form of the
/// later ones, their row sums `(-1)^{t-1} 2`, and a last row `(0 ... 0 ±2)`.
pub fn first_differential_check(a: usize, b: usize, k: usize) -> Result<Verdict> {
    if k < 1 || k >= b {
        return Err(invalid(format!("need 1 <= k < b, got k = {k}, b = {b}")));
    }
    let target = Target::tensor_shift(a, b, k)?;
    let e = differential_matrix_cached(a, b, 1, &target)?;
    let dom = e.domain.as_tensor().expect("tensor target");
    let cod = e.codomain.as_tensor().expect("tensor target");
    let (bu, ku) = (b as u64, k as i64);
    let to_usize = |x: BigInt| usize::try_from(x).expect("small binomial");
    let p = to_usize(binom(bu - 1, ku - 1));
    let n_b0 = to_usize(binom(bu, ku));
    let n_b1 = to_usize(binom(bu, ku + 1));
    let m = &e.matrix;

    if m.rows() != b * n_b0 || m.cols() != n_b0 + n_b1 {
        return Ok(Verdict::fail(
            "shape",
            format!("matrix is {}x{}, expected {}x{}", m.rows(), m.cols(), b * n_b0, n_b0 + n_b1),
        ));
    }
    let dom_split: Vec<bool> = dom.blocks()[0].basis.elements().iter().map(wedge_has_one).collect();
    if dom_split.iter().take(n_b0).any(|&x| x) || dom_split.iter().skip(n_b0).any(|&x| !x) {
        return Ok(Verdict::fail("shape", "domain basis is not B_0 followed by B_1"));
    }
    for (t, block) in cod.blocks().iter().enumerate() {
        let split: Vec<bool> = block.basis.elements().iter().map(wedge_has_one).collect();
        if block.basis.len() != n_b0 || split.iter().take(p).any(|&x| x) || split.iter().skip(p).any(|&x| !x) {
            return Ok(Verdict::fail("shape", format!("codomain block {} is not B_0 followed by B_1", t + 1)));
        }
    }

    // (1) first block = (A | B)
    let a_big = BigInt::from(a);
    for r in 0..n_b0 {
        for c in 0..m.cols() {
            let expect = if c < n_b0 {
                match (r == c, r < p) {
                    (true, true) => BigInt::from(a + 1),
                    (true, false) => BigInt::one(),
                    _ => BigInt::zero(),
                }
            } else if r >= p && c - n_b0 == r - p {
                a_big.clone()
            } else {
                BigInt::zero()
            };
            if m.get(r, c) != expect {
                return Ok(Verdict::fail(
                    "first block is (A | B)",
                    format!("entry ({r},{c}) is {}, expected {expect}", m.get(r, c)),
                ));
            }
        }
    }
    // (2) later blocks are block diagonal
    for t in 1..b {
        let off = t * n_b0;
        for r in 0..n_b0 {
            for c in 0..m.cols() {
                let off_diagonal = (r < p) != (c < n_b0);
                if off_diagonal && !m.get(off + r, c).is_zero() {
                    return Ok(Verdict::fail(
                        "later blocks are block diagonal",
                        format!("block {} has non-zero entry at ({},{c})", t + 1, off + r),
                    ));
                }
            }
        }
    }
    // (3) row sums
    let mut sums = vec![BigInt::zero(); m.rows()];
    for (r, _, x) in m.iter() {
        sums[r] += x;
    }
    for t in 1..b {
        let expect = if t % 2 == 1 { BigInt::from(-2) } else { BigInt::from(2) };
        for r in t * n_b0..(t + 1) * n_b0 {
            if sums[r] != expect {
                return Ok(Verdict::fail(
                    "row sums of later blocks",
                    format!("row {r} of block {} sums to {}, expected {expect}", t + 1, sums[r]),
                ));
            }
        }
    }
    // (4) last row
    let last = m.rows() - 1;
    let last_row: Vec<BigInt> = (0..m.cols()).map(|c| m.get(last, c)).collect();
    let (init, tail) = last_row.split_at(m.cols() - 1);
    if init.iter().any(|x| !x.is_zero()) || tail[0].abs() != BigInt::from(2) {
        let cells: Vec<String> = last_row.iter().map(ToString::to_string).collect();
        return Ok(Verdict::fail("last row is (0 ... 0 ±2)", format!("last row is ({})", cells.join(" "))));
    }
    Ok(Verdict::Pass)
}

/// Checks that `e^{(i)}(a, b, M)` has `e^{(i-1)}(a+1, b-1, M)` as its top-left block and
/// zeros below it, for `M = Δ(h(k))`, `i > 1`, `b > 1`.
pub fn block_recursion_check(a: usize, b: usize, i: usize, k: usize) -> Result<Verdict> {
    if i <= 1 || b <= 1 || i > b {
        return Err(invalid(format!("need 1 < i <= b and b > 1, got i = {i}, b = {b}")));
    }
    let target = Target::hook_shift(a, b, k)?;
    let big = differential_matrix_cached(a, b, i, &target)?;
    let small = differential_matrix_cached(a + 1, b - 1, i - 1, &target)?;
    let upper = |info: Vec<BlockInfo>| -> (Vec<Weight>, usize) {
        let kept: Vec<&BlockInfo> = info.iter().take_while(|bl| bl.weight.parts()[0] > a).collect();
        (kept.iter().map(|bl| bl.weight.clone()).collect(), kept.iter().map(|bl| bl.len).sum())
    };
    let (row_weights, rows) = upper(big.codomain.block_info());
    let (col_weights, cols) = upper(big.domain.block_info());
    let small_rows: Vec<Weight> = small.codomain.block_info().into_iter().map(|bl| bl.weight).collect();
    let small_cols: Vec<Weight> = small.domain.block_info().into_iter().map(|bl| bl.weight).collect();
    if row_weights != small_rows || col_weights != small_cols {
        return Ok(Verdict::fail("block labels", "upper summands differ from the smaller resolution"));
    }
    if rows != small.matrix.rows() || cols != small.matrix.cols() {
        return Ok(Verdict::fail(
            "block shape",
            format!("top-left block is {rows}x{cols}, smaller matrix is {}x{}", small.matrix.rows(), small.matrix.cols()),
        ));
    }
    let top_left = big.matrix.window(0..rows, 0..cols);
    if top_left != small.matrix {
        let (r, c) = (0..rows)
            .flat_map(|r| (0..cols).map(move |c| (r, c)))
            .find(|&(r, c)| top_left.get(r, c) != small.matrix.get(r, c))
            .expect("matrices differ somewhere");
        return Ok(Verdict::fail(
            "top-left block",
            format!("entry ({r},{c}) is {}, expected {}", top_left.get(r, c), small.matrix.get(r, c)),
        ));
    }
    let bottom_left = big.matrix.window(rows..big.matrix.rows(), 0..cols);
    if let Some((r, c, x)) = bottom_left.iter().next() {
        return Ok(Verdict::fail("bottom-left block is zero", format!("entry ({},{c}) is {x}", r + rows)));
    }
    Ok(Verdict::Pass)
}
