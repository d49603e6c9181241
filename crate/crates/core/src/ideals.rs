//! Graded truncated bases of shuffle and halfshuffle ideals, the
//! polynomial embedding into the shuffle algebra, pullback operators,
//! concatenation shifts, power ideals and finite-group invariantization.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::freealg::{
    letter_map_extend, word_splits, words_up_to, ExtendMode, FreeTensor, LetterMap, ProductCache,
    Word, WordProduct,
};
use crate::matrix::{check_square, identity, mat_mul, Matrix};
use crate::poly::{MultiPoly, PolynomialMap};
use crate::series::TruncatedSeries;
use crate::Coeff;

/// Which products a generated ideal is closed under.
///
/// Halfshuffle closures adjoin the product in both argument orders: the
/// span is a shuffle ideal either way, and the one-sided products alone
/// would not generate it.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ClosureType {
    Shuffle,
    RightHalf,
    LeftHalf,
    BothHalf,
}

impl ClosureType {
    fn products(self) -> &'static [WordProduct] {
        match self {
            ClosureType::Shuffle => &[WordProduct::Shuffle],
            ClosureType::RightHalf => {
                &[WordProduct::RightHalfAfter, WordProduct::RightHalfBefore]
            }
            ClosureType::LeftHalf => &[WordProduct::LeftHalfAfter, WordProduct::LeftHalfBefore],
            ClosureType::BothHalf => &[
                WordProduct::RightHalfAfter,
                WordProduct::RightHalfBefore,
                WordProduct::LeftHalfAfter,
                WordProduct::LeftHalfBefore,
            ],
        }
    }

    pub fn needs_augmented_generators(self) -> bool {
        !matches!(self, ClosureType::Shuffle)
    }
}

impl fmt::Display for ClosureType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ClosureType::Shuffle => "shuffle",
            ClosureType::RightHalf => "right-half",
            ClosureType::LeftHalf => "left-half",
            ClosureType::BothHalf => "both-half",
        };
        write!(f, "{s}")
    }
}

impl FromStr for ClosureType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shuffle" => Ok(ClosureType::Shuffle),
            "right-half" => Ok(ClosureType::RightHalf),
            "left-half" => Ok(ClosureType::LeftHalf),
            "both-half" => Ok(ClosureType::BothHalf),
            other => Err(Error::Invalid(format!("unknown closure type {other:?}"))),
        }
    }
}

/// Reduced row-echelon state over the word basis: monic rows keyed by
/// their pivot, the graded-lex greatest word of the row; no row contains
/// another row's pivot.
#[derive(Clone)]
struct RowReducer {
    alphabet_size: usize,
    rows: BTreeMap<Word, FreeTensor>,
}

impl RowReducer {
    fn new(alphabet_size: usize) -> Self {
        RowReducer {
            alphabet_size,
            rows: BTreeMap::new(),
        }
    }

    /// Fully reduces `x`, returning the remainder and the combination
    /// used, keyed by pivot. One pass suffices in reduced echelon form.
    fn reduce(&self, x: &FreeTensor) -> (FreeTensor, Vec<(Word, Coeff)>) {
        let mut rem = x.clone();
        let mut used = Vec::new();
        for (pivot, row) in &self.rows {
            let c = rem.coeff(pivot);
            if !c.is_zero() {
                rem.add_scaled(row, &-c.clone());
                used.push((pivot.clone(), c));
            }
        }
        (rem, used)
    }

    /// Inserts a tensor, maintaining reduced echelon form. Returns true
    /// if the span grew.
    fn insert(&mut self, x: &FreeTensor) -> bool {
        let (rem, _) = self.reduce(x);
        if rem.is_zero() {
            return false;
        }
        let pivot = rem.leading_word().expect("nonzero remainder").clone();
        let lead = rem.coeff(&pivot);
        let monic = rem.scaled(&(Coeff::one() / lead));
        for row in self.rows.values_mut() {
            let c = row.coeff(&pivot);
            if !c.is_zero() {
                row.add_scaled(&monic, &-c);
            }
        }
        self.rows.insert(pivot, monic);
        true
    }

    fn pivots(&self) -> impl Iterator<Item = &Word> {
        self.rows.keys()
    }

    fn into_basis(self, closure: ClosureType, level: usize) -> GradedBasis {
        let (pivots, rows) = self
            .rows
            .into_iter()
            .unzip::<Word, FreeTensor, Vec<_>, Vec<_>>();
        GradedBasis {
            alphabet_size: self.alphabet_size,
            level,
            closure,
            pivot_words: pivots,
            rows,
        }
    }
}

/// A degree-graded, row-reduced spanning set of a truncated ideal, with
/// pivot-word bookkeeping. Rows are monic with distinct pivots, sorted by
/// pivot, and no row contains another pivot, so the representation of a
/// span is canonical.
///
/// Truncation semantics: the basis spans everything obtainable from the
/// generators by products whose results stay within the level. Products
/// are degree-additive, so this is the degree-wise truncation of the
/// generated ideal whenever the generators are homogeneous; for mixed
/// generators it is the span of all in-budget products.
#[derive(Clone, PartialEq, Debug)]
pub struct GradedBasis {
    alphabet_size: usize,
    level: usize,
    closure: ClosureType,
    rows: Vec<FreeTensor>,
    pivot_words: Vec<Word>,
}

impl GradedBasis {
    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn closure(&self) -> ClosureType {
        self.closure
    }

    pub fn rows(&self) -> &[FreeTensor] {
        &self.rows
    }

    pub fn pivot_words(&self) -> &[Word] {
        &self.pivot_words
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Number of pivots per degree `1..=level` (index 0 is degree 1).
    pub fn pivot_counts_by_degree(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.level];
        for p in &self.pivot_words {
            if p.degree() >= 1 {
                counts[p.degree() - 1] += 1;
            }
        }
        counts
    }

    fn reducer(&self) -> RowReducer {
        RowReducer {
            alphabet_size: self.alphabet_size,
            rows: self
                .pivot_words
                .iter()
                .cloned()
                .zip(self.rows.iter().cloned())
                .collect(),
        }
    }

    /// Runs one closure round over the rows and reports whether any new
    /// pivot would appear. A saturated basis returns true.
    pub fn is_saturated(&self) -> bool {
        let mut reducer = self.reducer();
        let mut cache = ProductCache::new();
        !closure_round(&mut reducer, &mut cache, self.closure, self.level)
    }
}

/// One saturation round: adjoins every in-budget product of a current row
/// with a word cofactor. Returns true if the span grew.
fn closure_round(
    reducer: &mut RowReducer,
    cache: &mut ProductCache,
    closure: ClosureType,
    level: usize,
) -> bool {
    let rows: Vec<FreeTensor> = reducer.rows.values().cloned().collect();
    let mut grew = false;
    for row in &rows {
        let budget = level.saturating_sub(row.max_degree());
        if budget == 0 {
            continue;
        }
        for w in words_up_to(reducer.alphabet_size, budget) {
            for &op in closure.products() {
                let product = cache.tensor_word(row, &w, op);
                if reducer.insert(&product) {
                    grew = true;
                }
            }
        }
    }
    grew
}

/// Fixed-point saturation of the ideal generated by `generators`, closed
/// under the products of `closure`, truncated at `level`.
///
/// Generators are truncated to the level first; zero (or truncated-to-
/// zero) generators are rejected. Halfshuffle closures require generators
/// without empty-word terms.
pub fn ideal_basis(
    alphabet_size: usize,
    generators: &[FreeTensor],
    closure: ClosureType,
    level: usize,
) -> Result<GradedBasis> {
    let mut reducer = RowReducer::new(alphabet_size);
    for g in generators {
        if g.alphabet_size() != alphabet_size {
            return Err(Error::AlphabetMismatch(alphabet_size, g.alphabet_size()));
        }
        if g.is_zero() {
            return Err(Error::ZeroGenerator);
        }
        if closure.needs_augmented_generators() && !g.in_augmentation() {
            return Err(Error::EmptyWordTerm);
        }
        let truncated = g.truncated(level);
        if truncated.is_zero() {
            return Err(Error::ZeroGenerator);
        }
        reducer.insert(&truncated);
    }
    let mut cache = ProductCache::new();
    while closure_round(&mut reducer, &mut cache, closure, level) {}
    Ok(reducer.into_basis(closure, level))
}

/// Membership result: when the tensor lies in the span, `coordinates`
/// gives the coefficient of each basis row in order.
#[derive(Clone, PartialEq, Debug)]
pub struct Membership {
    pub member: bool,
    pub coordinates: Option<Vec<Coeff>>,
}

/// Reduces `x` against the basis rows; membership means the remainder
/// vanishes.
pub fn member(x: &FreeTensor, basis: &GradedBasis) -> Result<Membership> {
    if x.alphabet_size() != basis.alphabet_size {
        return Err(Error::AlphabetMismatch(x.alphabet_size(), basis.alphabet_size));
    }
    if x.max_degree() > basis.level {
        return Err(Error::DegreeExceedsLevel {
            degree: x.max_degree(),
            level: basis.level,
        });
    }
    let reducer = basis.reducer();
    let (rem, used) = reducer.reduce(x);
    if !rem.is_zero() {
        return Ok(Membership {
            member: false,
            coordinates: None,
        });
    }
    let by_pivot: BTreeMap<Word, Coeff> = used.into_iter().collect();
    let coords = basis
        .pivot_words
        .iter()
        .map(|p| by_pivot.get(p).cloned().unwrap_or_else(Coeff::zero))
        .collect();
    Ok(Membership {
        member: true,
        coordinates: Some(coords),
    })
}

/// Which side a fixed path is concatenated on when shifting an ideal.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ShiftSide {
    /// Membership of `Y` in `X ⊔ V`: weights `⟨A g, w1⟩ w2`.
    Left,
    /// Membership of `Y` in `V ⊔ X`: weights `w1 ⟨A g, w2⟩`.
    Right,
}

impl fmt::Display for ShiftSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShiftSide::Left => write!(f, "left"),
            ShiftSide::Right => write!(f, "right"),
        }
    }
}

impl FromStr for ShiftSide {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(ShiftSide::Left),
            "right" => Ok(ShiftSide::Right),
            other => Err(Error::Invalid(format!("unknown shift side {other:?}"))),
        }
    }
}

/// Antipode-adjoint coefficient `⟨A g, u⟩ = (−1)^{deg u} g(reverse u)`.
fn antipode_adjoint_coeff(g: &TruncatedSeries, u: &Word) -> Coeff {
    let c = g.coeff(&u.reversed());
    if u.degree() % 2 == 0 {
        c
    } else {
        -c
    }
}

/// Shifts every row of a basis by the deconcatenation pairing against the
/// inverse of a grouplike series, then re-reduces. The result spans the
/// annihilator of paths concatenated with the fixed path on the chosen
/// side; it is re-reduced but not re-closed.
pub fn shift_ideal(
    basis: &GradedBasis,
    g: &TruncatedSeries,
    side: ShiftSide,
) -> Result<GradedBasis> {
    if g.alphabet_size() != basis.alphabet_size {
        return Err(Error::AlphabetMismatch(g.alphabet_size(), basis.alphabet_size));
    }
    if g.level() < basis.level {
        return Err(Error::LevelTooSmall {
            level: g.level(),
            required: basis.level,
        });
    }
    let mut reducer = RowReducer::new(basis.alphabet_size);
    for row in &basis.rows {
        let mut shifted = FreeTensor::zero(basis.alphabet_size);
        for (w, c) in row.terms() {
            for (u, v) in word_splits(w) {
                match side {
                    ShiftSide::Left => {
                        shifted.add_term(v, antipode_adjoint_coeff(g, &u) * c);
                    }
                    ShiftSide::Right => {
                        shifted.add_term(u, antipode_adjoint_coeff(g, &v) * c);
                    }
                }
            }
        }
        reducer.insert(&shifted);
    }
    Ok(reducer.into_basis(basis.closure, basis.level))
}

/// Embedding of a zero-constant polynomial into the shuffle algebra:
/// each monomial becomes the shuffle product of its variables' letters.
pub fn phi(p: &MultiPoly) -> Result<FreeTensor> {
    if !p.constant_term().is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    let d = p.vars();
    let mut out = FreeTensor::zero(d);
    for (exps, c) in p.terms() {
        let mut acc = FreeTensor::unit(d);
        for (i, &e) in exps.iter().enumerate() {
            let letter = FreeTensor::letter(d, i as u16 + 1)?;
            for _ in 0..e {
                acc = crate::freealg::shuffle(&acc, &letter)?;
            }
        }
        out.add_scaled(&acc, c);
    }
    Ok(out)
}

/// The pullback operator of a polynomial path transform: the lambda
/// extension along the embedded components. The argument lives over the
/// output coordinates of `p`; the result lives over its input
/// coordinates.
///
/// A zero component is rejected when the argument actually references its
/// letter, since the lambda recursion has no image to feed there.
pub fn m_p(p: &PolynomialMap, x: &FreeTensor) -> Result<FreeTensor> {
    if !p.maps_zero_to_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    if x.alphabet_size() != p.arity_out() {
        return Err(Error::AlphabetMismatch(x.alphabet_size(), p.arity_out()));
    }
    let images: Vec<FreeTensor> = p.components().iter().map(phi).collect::<Result<_>>()?;
    for (w, _) in x.terms() {
        for &l in w.letters() {
            if images[l as usize - 1].is_zero() {
                return Err(Error::ZeroImageReferenced(l));
            }
        }
    }
    let map = LetterMap::new(images)?;
    letter_map_extend(&map, x, ExtendMode::Lambda)
}

fn split_parts(w: &Word, n: usize) -> Vec<Vec<Word>> {
    // Ordered splits of w into n possibly-empty parts.
    fn go(w: &Word, n: usize, start: usize, acc: &mut Vec<Word>, out: &mut Vec<Vec<Word>>) {
        if n == 1 {
            let mut parts = acc.clone();
            parts.push(w.suffix(start));
            out.push(parts);
            return;
        }
        for end in start..=w.degree() {
            acc.push(Word::from_letters(&w.letters()[start..end]).expect("valid letters"));
            go(w, n - 1, end, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(w, n, 0, &mut Vec::new(), &mut out);
    out
}

/// The tensor pairing against the signature of an `n`-fold concatenation
/// power: the sum over `n`-part deconcatenation splits of the shuffle of
/// the parts.
pub fn power_ideal(x: &FreeTensor, n: usize) -> Result<FreeTensor> {
    if n == 0 {
        return Err(Error::Invalid("power must be at least 1".into()));
    }
    let d = x.alphabet_size();
    let mut out = FreeTensor::zero(d);
    for (w, c) in x.terms() {
        for parts in split_parts(w, n) {
            let mut acc = FreeTensor::unit(d);
            for part in parts {
                let t = FreeTensor::from_word(d, part)?;
                acc = crate::freealg::shuffle(&acc, &t)?;
            }
            out.add_scaled(&acc, c);
        }
    }
    Ok(out)
}

/// As [`power_ideal`], but the `j`-th part's letters are relabeled into
/// the `j`-th block of an `n·d` alphabet: the pairing against the
/// signature of `X_1 ⊔ … ⊔ X_n` read on the stacked path `(X_1,…,X_n)`.
pub fn multi_path_ideal(x: &FreeTensor, n: usize) -> Result<FreeTensor> {
    if n == 0 {
        return Err(Error::Invalid("power must be at least 1".into()));
    }
    let d = x.alphabet_size();
    let nd = n
        .checked_mul(d)
        .filter(|&v| v <= u16::MAX as usize)
        .ok_or_else(|| Error::Invalid("relabeled alphabet too large".into()))?;
    let mut out = FreeTensor::zero(nd);
    for (w, c) in x.terms() {
        for parts in split_parts(w, n) {
            let mut acc = FreeTensor::unit(nd);
            for (j, part) in parts.into_iter().enumerate() {
                let shifted: Vec<u16> = part
                    .letters()
                    .iter()
                    .map(|&l| l + (j * d) as u16)
                    .collect();
                let t = FreeTensor::from_word(nd, Word::from_letters(&shifted)?)?;
                acc = crate::freealg::shuffle(&acc, &t)?;
            }
            out.add_scaled(&acc, c);
        }
    }
    Ok(out)
}

/// Validates that the matrices form a finite group under multiplication
/// (closure and inverses, hence the identity).
fn validate_group(group: &[Matrix], n: usize) -> Result<()> {
    if group.is_empty() {
        return Err(Error::NotAGroup("empty set".into()));
    }
    for m in group {
        check_square(m, n)?;
    }
    let contains = |m: &Matrix| group.iter().any(|g| g == m);
    for a in group {
        for b in group {
            if !contains(&mat_mul(a, b)) {
                return Err(Error::NotAGroup("not closed under multiplication".into()));
            }
        }
        let id = identity(n);
        if !group.iter().any(|b| mat_mul(a, b) == id) {
            return Err(Error::NotAGroup("an element has no inverse in the set".into()));
        }
    }
    Ok(())
}

/// Group averaging of the transposed matrix action: the exact projector
/// onto the invariant tensors of a finite matrix group. Idempotent.
pub fn invariant_projector(group: &[Matrix], x: &FreeTensor) -> Result<FreeTensor> {
    let d = x.alphabet_size();
    validate_group(group, d)?;
    let mut out = FreeTensor::zero(d);
    for a in group {
        let map = LetterMap::from_matrix(a)?;
        let image = letter_map_extend(&map, x, ExtendMode::Multiplicative)?;
        out.add_scaled(&image, &Coeff::one());
    }
    let scale = Coeff::new(1.into(), (group.len() as i64).into());
    Ok(out.scaled(&scale))
}
