//! Weight-space bases of `D_s ⊗ ∧^t` and of hook Weyl modules, the straightening law,
//! and the structure maps `θ`, `π₀` and `i` of
//! `0 -> Δ(h(1)) -> D_a ⊗ ∧^b -> Δ(h) -> 0`.
//!
//! Letters are 1-based. A divided-power monomial `1^{(e_1)} 2^{(e_2)} ...` is stored
//! as its exponent vector (index 0 is letter 1, trailing zeros trimmed); an exterior
//! word is stored sorted and without repeats.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::combinatorics::{binom, HookShape, Weight};
use crate::error::{invalid, HookError, Result};

fn trim(mut exps: Vec<usize>) -> Vec<usize> {
    while exps.last() == Some(&0) {
        exps.pop();
    }
    exps
}

/// Sorts an exterior word. Returns the sign of the sorting permutation, or `None`
/// when a letter repeats (the wedge vanishes).
pub fn normalize_wedge(mut letters: Vec<usize>) -> Option<(i32, Vec<usize>)> {
    let mut sign = 1;
    // insertion sort, counting transpositions
    for i in 1..letters.len() {
        let mut j = i;
        while j > 0 && letters[j - 1] > letters[j] {
            letters.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if letters.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sign, letters))
}

fn expanded_word(exps: &[usize], wedge: &[usize]) -> Vec<usize> {
    let mut word = Vec::with_capacity(exps.iter().sum::<usize>() + wedge.len());
    for (idx, &e) in exps.iter().enumerate() {
        word.extend(std::iter::repeat_n(idx + 1, e));
    }
    word.extend_from_slice(wedge);
    word
}

fn content(exps: &[usize], wedge: &[usize]) -> Vec<usize> {
    let len = exps.len().max(wedge.iter().copied().max().unwrap_or(0));
    let mut c = vec![0; len];
    c[..exps.len()].copy_from_slice(exps);
    for &l in wedge {
        c[l - 1] += 1;
    }
    trim(c)
}

fn fmt_letter(f: &mut fmt::Formatter<'_>, l: usize) -> fmt::Result {
    if l < 10 {
        write!(f, "{l}")
    } else {
        write!(f, "{{{l}}}")
    }
}

fn fmt_divided(f: &mut fmt::Formatter<'_>, exps: &[usize]) -> fmt::Result {
    for (idx, &e) in exps.iter().enumerate() {
        match e {
            0 => {}
            1 => fmt_letter(f, idx + 1)?,
            _ => {
                fmt_letter(f, idx + 1)?;
                write!(f, "^({e})")?;
            }
        }
    }
    Ok(())
}

fn fmt_wedge(f: &mut fmt::Formatter<'_>, wedge: &[usize]) -> fmt::Result {
    wedge.iter().try_for_each(|&l| fmt_letter(f, l))
}

/// Substitutes `j -> j - 1` for every letter `j > t` in a divided-power monomial.
/// Letters `t` and `t + 1` merge with coefficient `C(e_t + e_{t+1}, e_t)`.
fn merge_divided(exps: &[usize], t: usize) -> (BigInt, Vec<usize>) {
    if t >= exps.len() {
        return (BigInt::one(), exps.to_vec());
    }
    let mut out = exps.to_vec();
    let next = out.remove(t);
    let cur = out[t - 1];
    out[t - 1] = cur + next;
    (binom((cur + next) as u64, cur as i64), trim(out))
}

/// The same substitution on an exterior word; `None` when `t` and `t + 1` both occur.
fn merge_wedge(wedge: &[usize], t: usize) -> Option<Vec<usize>> {
    if wedge.contains(&t) && wedge.contains(&(t + 1)) {
        return None;
    }
    Some(wedge.iter().map(|&j| if j > t { j - 1 } else { j }).collect())
}

/// Common behaviour of basis elements of weight spaces.
pub trait BasisElement: Clone + Ord + Hash + fmt::Debug + fmt::Display {
    /// Letter multiplicities, trailing zeros trimmed.
    fn content(&self) -> Vec<usize>;

    fn has_weight(&self, weight: &Weight) -> bool {
        self.content() == trim(weight.parts().to_vec())
    }
}

/// A basis monomial `i_1^{(e_1)} ... ⊗ j_1 ∧ ... ∧ j_t` of `D_s ⊗ ∧^t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorMonomial {
    d_part: Vec<usize>,
    w_part: Vec<usize>,
}

impl TensorMonomial {
    /// Builds a monomial from an exponent sequence and an arbitrary exterior word.
    /// Returns the sign of the normalization, or `None` if the word has a repeat.
    pub fn normalized(d_part: Vec<usize>, w_part: Vec<usize>) -> Option<(i32, TensorMonomial)> {
        let (sign, w_part) = normalize_wedge(w_part)?;
        Some((sign, TensorMonomial { d_part: trim(d_part), w_part }))
    }

    /// Builds a monomial whose exterior word is already strictly increasing.
    pub fn new(d_part: Vec<usize>, w_part: Vec<usize>) -> Result<TensorMonomial> {
        if w_part.windows(2).any(|w| w[0] >= w[1]) || w_part.contains(&0) {
            return Err(invalid(format!("exterior word {w_part:?} is not strictly increasing")));
        }
        Ok(TensorMonomial { d_part: trim(d_part), w_part })
    }

    /// Convenience constructor from letter words: `from_words(&[1,1,2], &[3])` is `1^(2)2⊗3`.
    pub fn from_words(d_letters: &[usize], w_part: &[usize]) -> Result<TensorMonomial> {
        TensorMonomial::new(exponents_of(d_letters), w_part.to_vec())
    }

    pub fn d_part(&self) -> &[usize] {
        &self.d_part
    }

    pub fn w_part(&self) -> &[usize] {
        &self.w_part
    }

    pub fn s(&self) -> usize {
        self.d_part.iter().sum()
    }

    pub fn t(&self) -> usize {
        self.w_part.len()
    }

    /// Letter substitution `j -> j - 1` for `j > t`, re-canonicalized.
    pub fn merge_letters(&self, t: usize) -> Option<(BigInt, TensorMonomial)> {
        let wedge = merge_wedge(&self.w_part, t)?;
        let (c, d) = merge_divided(&self.d_part, t);
        Some((c, TensorMonomial { d_part: d, w_part: wedge }))
    }

    pub fn as_tableau(&self) -> HookTableau {
        HookTableau { row: self.d_part.clone(), column: self.w_part.clone() }
    }
}

fn exponents_of(letters: &[usize]) -> Vec<usize> {
    let mut exps = vec![0; letters.iter().copied().max().unwrap_or(0)];
    for &l in letters {
        exps[l - 1] += 1;
    }
    exps
}

impl BasisElement for TensorMonomial {
    fn content(&self) -> Vec<usize> {
        content(&self.d_part, &self.w_part)
    }
}

impl Ord for TensorMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        expanded_word(&self.d_part, &self.w_part)
            .cmp(&expanded_word(&other.d_part, &other.w_part))
            .then_with(|| self.w_part.len().cmp(&other.w_part.len()))
    }
}

impl PartialOrd for TensorMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TensorMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_divided(f, &self.d_part)?;
        write!(f, "⊗")?;
        fmt_wedge(f, &self.w_part)
    }
}

/// The class `i_1^{(a_1)} ... | j_1 ... j_b` of a monomial in a hook Weyl module.
/// Stored with a sorted column; semi-standardness is a property, not an invariant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HookTableau {
    row: Vec<usize>,
    column: Vec<usize>,
}

impl HookTableau {
    pub fn new(row: Vec<usize>, column: Vec<usize>) -> Result<HookTableau> {
        if column.windows(2).any(|w| w[0] >= w[1]) || column.contains(&0) {
            return Err(invalid(format!("column {column:?} is not strictly increasing")));
        }
        Ok(HookTableau { row: trim(row), column })
    }

    pub fn from_words(row_letters: &[usize], column: &[usize]) -> Result<HookTableau> {
        HookTableau::new(exponents_of(row_letters), column.to_vec())
    }

    pub fn row(&self) -> &[usize] {
        &self.row
    }

    pub fn column(&self) -> &[usize] {
        &self.column
    }

    pub fn min_row_letter(&self) -> Option<usize> {
        self.row.iter().position(|&e| e > 0).map(|i| i + 1)
    }

    /// Row minimum strictly below the first column entry (vacuous for an empty column).
    pub fn is_semistandard(&self) -> bool {
        match (self.column.first(), self.min_row_letter()) {
            (None, _) => true,
            (Some(&j1), Some(i1)) => i1 < j1,
            (Some(_), None) => false,
        }
    }

    pub fn as_monomial(&self) -> TensorMonomial {
        TensorMonomial { d_part: self.row.clone(), w_part: self.column.clone() }
    }
}

impl BasisElement for HookTableau {
    fn content(&self) -> Vec<usize> {
        content(&self.row, &self.column)
    }
}

impl Ord for HookTableau {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        expanded_word(&self.row, &self.column)
            .cmp(&expanded_word(&other.row, &other.column))
            .then_with(|| self.column.len().cmp(&other.column.len()))
    }
}

impl PartialOrd for HookTableau {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for HookTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_divided(f, &self.row)?;
        write!(f, "|")?;
        fmt_wedge(f, &self.column)
    }
}

/// A finitely supported integer combination of basis elements. Zero coefficients are
/// never stored; iteration follows the basis order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntCombination<E: BasisElement> {
    terms: BTreeMap<E, BigInt>,
}

impl<E: BasisElement> Default for IntCombination<E> {
    fn default() -> Self {
        IntCombination { terms: BTreeMap::new() }
    }
}

impl<E: BasisElement> IntCombination<E> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(elem: E, coeff: impl Into<BigInt>) -> Self {
        let mut c = Self::zero();
        c.add_term(elem, coeff.into());
        c
    }

    pub fn add_term(&mut self, elem: E, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(elem.clone()).or_insert_with(BigInt::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&elem);
        }
    }

    pub fn add_scaled(&mut self, other: &IntCombination<E>, factor: &BigInt) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c * factor);
        }
    }

    pub fn scaled(&self, factor: &BigInt) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, factor);
        out
    }

    pub fn coefficient(&self, elem: &E) -> BigInt {
        self.terms.get(elem).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&E, &BigInt)> {
        self.terms.iter()
    }
}

impl<E: BasisElement> FromIterator<(E, BigInt)> for IntCombination<E> {
    fn from_iter<I: IntoIterator<Item = (E, BigInt)>>(iter: I) -> Self {
        let mut c = Self::zero();
        for (e, x) in iter {
            c.add_term(e, x);
        }
        c
    }
}

impl<E: BasisElement> fmt::Display for IntCombination<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !abs.is_one() {
                write!(f, "{abs}·")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// An ordered basis of one weight space with index lookup.
#[derive(Clone, Debug)]
pub struct BasisOrder<E: BasisElement> {
    elems: Vec<E>,
    index: HashMap<E, usize>,
}

impl<E: BasisElement> BasisOrder<E> {
    /// Sorts the elements into basis order.
    pub fn new(mut elems: Vec<E>) -> Self {
        elems.sort();
        elems.dedup();
        let index = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        BasisOrder { elems, index }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn index_of(&self, elem: &E) -> Option<usize> {
        self.index.get(elem).copied()
    }

    pub fn get(&self, idx: usize) -> &E {
        &self.elems[idx]
    }

    pub fn elements(&self) -> &[E] {
        &self.elems
    }

    /// Coordinates of a combination; errors if it leaves the span of this basis.
    pub fn coordinates(&self, x: &IntCombination<E>) -> Result<Vec<BigInt>> {
        let mut v = vec![BigInt::zero(); self.len()];
        for (e, c) in x.iter() {
            let idx = self.index_of(e).ok_or_else(|| HookError::NotInBasis(e.to_string()))?;
            v[idx] += c;
        }
        Ok(v)
    }
}

/// All monomials of `D_s ⊗ ∧^t` of the given weight, in basis order.
pub fn tensor_weight_basis(s: usize, t: usize, weight: &Weight) -> Result<BasisOrder<TensorMonomial>> {
    if weight.degree() != s + t {
        return Err(HookError::DegreeMismatch { expected: s + t, actual: weight.degree() });
    }
    let available: Vec<usize> =
        weight.parts().iter().enumerate().filter(|(_, &x)| x > 0).map(|(i, _)| i + 1).collect();
    let mut elems = Vec::new();
    for wedge in subsets(&available, t) {
        let mut d = weight.parts().to_vec();
        for &l in &wedge {
            d[l - 1] -= 1;
        }
        elems.push(TensorMonomial { d_part: trim(d), w_part: wedge });
    }
    Ok(BasisOrder::new(elems))
}

fn subsets(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < size - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, size, 0, &mut Vec::new(), &mut out);
    out
}

/// The semi-standard tableaux of the given shape and content, in basis order.
pub fn hook_semistandard_basis(shape: HookShape, weight: &Weight) -> Result<BasisOrder<HookTableau>> {
    if weight.degree() != shape.degree() {
        return Err(HookError::DegreeMismatch { expected: shape.degree(), actual: weight.degree() });
    }
    let monomials = tensor_weight_basis(shape.a(), shape.b(), weight)?;
    Ok(BasisOrder::new(
        monomials.elements().iter().map(TensorMonomial::as_tableau).filter(HookTableau::is_semistandard).collect(),
    ))
}

/// Expresses the class of `row ⊗ column` in `Δ(shape)` in the semi-standard basis.
///
/// `row` is an exponent sequence; `column` is any word (unsorted or with repeats).
/// A non-semi-standard tableau has column minimum `j_1 <= i_1` (the row minimum) and is
/// rewritten with the relation coming from `θ` applied to the row with one more box:
///
/// - `j_1 = i_1`: `-Σ_{s>=2} i_1^{(a_1+1)} ... i_s^{(a_s-1)} ... | i_s j_2 ... j_b`
/// - `j_1 < i_1`: `-Σ_{s>=1} j_1 i_1^{(a_1)} ... i_s^{(a_s-1)} ... | i_s j_2 ... j_b`
///
/// Every term on the right has column minimum above its row minimum, so a single
/// rewrite reaches the semi-standard basis.
pub fn straighten(shape: HookShape, row: &[usize], column: &[usize]) -> Result<IntCombination<HookTableau>> {
    let row_deg: usize = row.iter().sum();
    if row_deg != shape.a() {
        return Err(HookError::DegreeMismatch { expected: shape.a(), actual: row_deg });
    }
    if column.len() != shape.b() {
        return Err(HookError::DegreeMismatch { expected: shape.b(), actual: column.len() });
    }
    if column.contains(&0) {
        return Err(invalid("letters are 1-based"));
    }
    Ok(straighten_unchecked(row, column))
}

fn straighten_unchecked(row: &[usize], column: &[usize]) -> IntCombination<HookTableau> {
    let Some((sign, column)) = normalize_wedge(column.to_vec()) else {
        return IntCombination::zero();
    };
    let tab = HookTableau { row: trim(row.to_vec()), column };
    if tab.is_semistandard() {
        return IntCombination::single(tab, sign);
    }
    let j1 = tab.column[0];
    let i1 = tab.min_row_letter().expect("rows of hook shapes are non-empty");
    let tail = &tab.column[1..];
    let mut out = IntCombination::zero();
    let rewrite = |mut new_row: Vec<usize>, is: usize, out: &mut IntCombination<HookTableau>| {
        new_row[is - 1] -= 1;
        let mut new_col = Vec::with_capacity(tab.column.len());
        new_col.push(is);
        new_col.extend_from_slice(tail);
        out.add_scaled(&straighten_unchecked(&new_row, &new_col), &BigInt::from(-sign));
    };
    let letters: Vec<usize> =
        tab.row.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i + 1).collect();
    if j1 == i1 {
        for &is in letters.iter().skip(1) {
            let mut r = tab.row.clone();
            r[i1 - 1] += 1;
            rewrite(r, is, &mut out);
        }
    } else {
        for &is in &letters {
            let mut r = tab.row.clone();
            r[j1 - 1] += 1;
            rewrite(r, is, &mut out);
        }
    }
    out
}

/// Straightens a combination of representatives.
pub fn straighten_combination(
    shape: HookShape,
    x: &IntCombination<HookTableau>,
) -> Result<IntCombination<HookTableau>> {
    let mut out = IntCombination::zero();
    for (tab, c) in x.iter() {
        out.add_scaled(&straighten(shape, tab.row(), tab.column())?, c);
    }
    Ok(out)
}

/// `θ: D_{s+1} ⊗ ∧^{t-1} -> D_s ⊗ ∧^t`: split one letter off the divided power and
/// wedge it on the left.
pub fn theta_component(
    s: usize,
    t: usize,
    x: &IntCombination<TensorMonomial>,
) -> Result<IntCombination<TensorMonomial>> {
    if t < 1 {
        return Err(invalid("theta needs t >= 1"));
    }
    let mut out = IntCombination::zero();
    for (m, c) in x.iter() {
        if m.s() != s + 1 || m.t() != t - 1 {
            return Err(HookError::DegreeMismatch { expected: s + t, actual: m.s() + m.t() });
        }
        for (idx, &e) in m.d_part.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let letter = idx + 1;
            let mut d = m.d_part.clone();
            d[idx] -= 1;
            let mut w = Vec::with_capacity(t);
            w.push(letter);
            w.extend_from_slice(&m.w_part);
            if let Some((sign, mono)) = TensorMonomial::normalized(d, w) {
                out.add_term(mono, c * sign);
            }
        }
    }
    Ok(out)
}

/// `π₀: D_a ⊗ ∧^b -> Δ(a, 1^b)`, the identity on generators followed by straightening.
pub fn pi0_project(shape: HookShape, x: &IntCombination<TensorMonomial>) -> Result<IntCombination<HookTableau>> {
    let mut out = IntCombination::zero();
    for (m, c) in x.iter() {
        out.add_scaled(&straighten(shape, &m.d_part, &m.w_part)?, c);
    }
    Ok(out)
}

/// `i: Δ(h(1)) -> D_a ⊗ ∧^b`, induced by `θ` on a semi-standard representative.
pub fn i_embed(shape: HookShape, tab: &HookTableau) -> Result<IntCombination<TensorMonomial>> {
    if shape.b() < 1 {
        return Err(invalid("the embedding needs b >= 1"));
    }
    let source = shape.shift(1)?;
    let deg: usize = tab.row.iter().sum();
    if deg != source.a() || tab.column.len() != source.b() {
        return Err(HookError::DegreeMismatch { expected: source.degree(), actual: deg + tab.column.len() });
    }
    if !tab.is_semistandard() {
        return Err(HookError::NotSemistandard(tab.to_string()));
    }
    theta_component(shape.a(), shape.b(), &IntCombination::single(tab.as_monomial(), 1))
}
