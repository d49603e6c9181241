//! Words over a finite alphabet, sparse free tensors, and the product
//! structure of the tensor algebra: concatenation, deconcatenation,
//! shuffle, halfshuffles, antipode and letter-map extensions.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::series::TruncatedSeries;
use crate::Coeff;

/// A word over the alphabet `{1, ..., d}`; the basis index of the tensor
/// algebra. The empty word is the unit of concatenation.
///
/// Words are totally ordered graded-lex: first by degree (length), then
/// lexicographically. This order is canonical for all serialized output.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word(Vec<u16>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(i: u16) -> Self {
        assert!(i >= 1, "letters start at 1");
        Word(vec![i])
    }

    /// Builds a word from raw letters; every letter must be >= 1.
    pub fn from_letters(letters: &[u16]) -> Result<Self> {
        for &l in letters {
            if l == 0 {
                return Err(Error::LetterOutOfRange(l, 0));
            }
        }
        Ok(Word(letters.to_vec()))
    }

    pub fn letters(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_letter(&self) -> u16 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Word concatenation `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    fn append(&self, letter: u16) -> Word {
        let mut letters = self.0.clone();
        letters.push(letter);
        Word(letters)
    }

    pub fn prefix(&self, k: usize) -> Word {
        Word(self.0[..k].to_vec())
    }

    pub fn suffix(&self, k: usize) -> Word {
        Word(self.0[k..].to_vec())
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Parses either a digit string (`"12"`), a comma-separated list
    /// (`"10,2"`), or the empty string for the empty word.
    pub fn parse(s: &str) -> Result<Word> {
        if s.is_empty() {
            return Ok(Word::empty());
        }
        let letters: Vec<u16> = if s.contains(',') {
            s.split(',')
                .map(|p| {
                    p.trim()
                        .parse::<u16>()
                        .map_err(|_| Error::Invalid(format!("bad letter {p:?} in word {s:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u16)
                        .ok_or_else(|| Error::Invalid(format!("bad letter {c:?} in word {s:?}")))
                })
                .collect::<Result<_>>()?
        };
        Word::from_letters(&letters)
    }

    /// Renders using digit juxtaposition when the alphabet fits in one
    /// digit, comma-separated integers otherwise.
    pub fn format(&self, alphabet_size: usize) -> String {
        if alphabet_size <= 9 {
            self.0.iter().map(|l| l.to_string()).collect()
        } else {
            self.0
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }
}

/// All words of exactly the given degree, in lexicographic order.
pub fn words_of_degree(alphabet_size: usize, degree: usize) -> Vec<Word> {
    let mut level = vec![Word::empty()];
    for _ in 0..degree {
        let mut next = Vec::with_capacity(level.len() * alphabet_size);
        for w in &level {
            for l in 1..=alphabet_size as u16 {
                next.push(w.append(l));
            }
        }
        level = next;
    }
    level
}

/// All nonempty words of degree between 1 and `max_degree`, graded-lex
/// order.
pub fn words_up_to(alphabet_size: usize, max_degree: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for k in 1..=max_degree {
        out.extend(words_of_degree(alphabet_size, k));
    }
    out
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "e")
        } else {
            write!(f, "{}", self.format(self.max_letter() as usize))
        }
    }
}

/// A sparse rational linear combination of words: an element of the
/// tensor algebra over `alphabet_size` letters.
///
/// Stored coefficients are never zero, so two tensors are equal iff their
/// term maps are equal. Terms iterate in graded-lex order.
#[derive(Clone, PartialEq, Eq)]
pub struct FreeTensor {
    alphabet_size: usize,
    terms: BTreeMap<Word, Coeff>,
}

impl FreeTensor {
    pub fn zero(alphabet_size: usize) -> Self {
        FreeTensor {
            alphabet_size,
            terms: BTreeMap::new(),
        }
    }

    /// The empty word with coefficient one: the unit of `•` and `⧢`.
    pub fn unit(alphabet_size: usize) -> Self {
        let mut t = Self::zero(alphabet_size);
        t.terms.insert(Word::empty(), Coeff::one());
        t
    }

    pub fn from_word(alphabet_size: usize, word: Word) -> Result<Self> {
        let mut t = Self::zero(alphabet_size);
        t.check_word(&word)?;
        t.terms.insert(word, Coeff::one());
        Ok(t)
    }

    pub fn letter(alphabet_size: usize, i: u16) -> Result<Self> {
        Self::from_word(alphabet_size, Word::letter(i))
    }

    pub fn from_terms<I>(alphabet_size: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, Coeff)>,
    {
        let mut t = Self::zero(alphabet_size);
        for (w, c) in terms {
            t.check_word(&w)?;
            t.add_term(w, c);
        }
        Ok(t)
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        let m = w.max_letter();
        if m as usize > self.alphabet_size {
            return Err(Error::LetterOutOfRange(m, self.alphabet_size));
        }
        Ok(())
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Coeff)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> Coeff {
        self.terms.get(w).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn empty_word_coeff(&self) -> Coeff {
        self.coeff(&Word::empty())
    }

    /// True when the tensor has no empty-word component, i.e. lies in the
    /// augmentation part of the algebra.
    pub fn in_augmentation(&self) -> bool {
        !self.terms.contains_key(&Word::empty())
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().next().map(|w| w.degree())
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().next_back().map_or(0, |w| w.degree())
    }

    /// The graded-lex greatest word with nonzero coefficient.
    pub fn leading_word(&self) -> Option<&Word> {
        self.terms.keys().next_back()
    }

    pub fn add_term(&mut self, w: Word, c: Coeff) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &FreeTensor, scale: &Coeff) {
        assert_eq!(self.alphabet_size, other.alphabet_size);
        if scale.is_zero() {
            return;
        }
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c * scale);
        }
    }

    pub fn scaled(&self, scale: &Coeff) -> FreeTensor {
        let mut out = FreeTensor::zero(self.alphabet_size);
        out.add_scaled(self, scale);
        out
    }

    /// The homogeneous part of the given degree.
    pub fn homogeneous_part(&self, degree: usize) -> FreeTensor {
        let terms = self
            .terms
            .iter()
            .filter(|(w, _)| w.degree() == degree)
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect();
        FreeTensor {
            alphabet_size: self.alphabet_size,
            terms,
        }
    }

    /// Drops all terms of degree greater than `level`.
    pub fn truncated(&self, level: usize) -> FreeTensor {
        let terms = self
            .terms
            .iter()
            .filter(|(w, _)| w.degree() <= level)
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect();
        FreeTensor {
            alphabet_size: self.alphabet_size,
            terms,
        }
    }

    /// Reinterprets the tensor over a larger alphabet.
    pub fn widened(&self, alphabet_size: usize) -> Result<FreeTensor> {
        let max = self
            .terms
            .keys()
            .map(|w| w.max_letter())
            .max()
            .unwrap_or(0);
        if (max as usize) > alphabet_size {
            return Err(Error::LetterOutOfRange(max, alphabet_size));
        }
        Ok(FreeTensor {
            alphabet_size,
            terms: self.terms.clone(),
        })
    }

    fn check_same_alphabet(&self, other: &FreeTensor) -> Result<()> {
        if self.alphabet_size != other.alphabet_size {
            return Err(Error::AlphabetMismatch(
                self.alphabet_size,
                other.alphabet_size,
            ));
        }
        Ok(())
    }
}

impl fmt::Debug for FreeTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("{c}·{w:?}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for &FreeTensor {
    type Output = FreeTensor;
    fn add(self, rhs: &FreeTensor) -> FreeTensor {
        let mut out = self.clone();
        out.add_scaled(rhs, &Coeff::one());
        out
    }
}

impl Sub for &FreeTensor {
    type Output = FreeTensor;
    fn sub(self, rhs: &FreeTensor) -> FreeTensor {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Coeff::one());
        out
    }
}

impl Neg for &FreeTensor {
    type Output = FreeTensor;
    fn neg(self) -> FreeTensor {
        self.scaled(&-Coeff::one())
    }
}

impl Mul<&Coeff> for &FreeTensor {
    type Output = FreeTensor;
    fn mul(self, rhs: &Coeff) -> FreeTensor {
        self.scaled(rhs)
    }
}

/// Concatenation product: the bilinear extension of word juxtaposition.
/// Associative with the empty word as unit.
pub fn concat_product(x: &FreeTensor, y: &FreeTensor) -> Result<FreeTensor> {
    x.check_same_alphabet(y)?;
    let mut out = FreeTensor::zero(x.alphabet_size);
    for (u, cu) in &x.terms {
        for (v, cv) in &y.terms {
            out.add_term(u.concat(v), cu * cv);
        }
    }
    Ok(out)
}

/// Deconcatenation coproduct. For a word all prefix/suffix splits appear,
/// including the trivial ones; sums extend linearly with the coefficient
/// carried on the left factor.
///
/// The returned list represents `Σ_i x_i ⊗ y_i` and satisfies the duality
/// `⟨x • y, z⟩ = Σ_i ⟨x, z_i1⟩⟨y, z_i2⟩`.
pub fn deconcat(x: &FreeTensor) -> Vec<(FreeTensor, FreeTensor)> {
    let d = x.alphabet_size;
    let mut out = Vec::new();
    for (w, c) in &x.terms {
        for k in 0..=w.degree() {
            let left = FreeTensor {
                alphabet_size: d,
                terms: BTreeMap::from([(w.prefix(k), c.clone())]),
            };
            let right = FreeTensor {
                alphabet_size: d,
                terms: BTreeMap::from([(w.suffix(k), Coeff::one())]),
            };
            out.push((left, right));
        }
    }
    out
}

/// Iterates the prefix/suffix splits of a single word.
pub(crate) fn word_splits(w: &Word) -> impl Iterator<Item = (Word, Word)> + '_ {
    (0..=w.degree()).map(move |k| (w.prefix(k), w.suffix(k)))
}

/// Word-level product cache shared across the closure and rank machinery.
/// Results are exact, so caching is purely an evaluation-order-independent
/// speedup.
#[derive(Default)]
pub(crate) struct ProductCache {
    right: HashMap<(Word, Word), BTreeMap<Word, Coeff>>,
}

impl ProductCache {
    pub fn new() -> Self {
        Self::default()
    }

    fn hsr_words(&mut self, u: &Word, v: &Word) -> BTreeMap<Word, Coeff> {
        if let Some(hit) = self.right.get(&(u.clone(), v.clone())) {
            return hit.clone();
        }
        let r = hsr_words_uncached(u, v);
        self.right.insert((u.clone(), v.clone()), r.clone());
        r
    }
}

/// Right halfshuffle of nonempty words via the defining recursion
/// `w ≻ i = wi`, `w ≻ vi = (w ≻ v + v ≻ w) i`, with memoization over
/// prefix pairs.
fn hsr_words_uncached(u: &Word, v: &Word) -> BTreeMap<Word, Coeff> {
    debug_assert!(!u.is_empty() && !v.is_empty());
    // memo[(a, b, swapped)]: u[..a] ≻ v[..b] when !swapped, v[..b] ≻ u[..a]
    // when swapped; a, b >= 1 throughout.
    fn go(
        u: &Word,
        v: &Word,
        a: usize,
        b: usize,
        swapped: bool,
        memo: &mut HashMap<(usize, usize, bool), BTreeMap<Word, Coeff>>,
    ) -> BTreeMap<Word, Coeff> {
        if let Some(hit) = memo.get(&(a, b, swapped)) {
            return hit.clone();
        }
        // The right argument contributes its last letter; the recursion
        // runs on the shortened right argument in both orders.
        let (right_len, last) = if swapped {
            (a, u.letters()[a - 1])
        } else {
            (b, v.letters()[b - 1])
        };
        let result = if right_len == 1 {
            let left = if swapped { v.prefix(b) } else { u.prefix(a) };
            BTreeMap::from([(left.append(last), Coeff::one())])
        } else {
            let (keep, keep_swapped) = if swapped {
                ((a - 1, b), true)
            } else {
                ((a, b - 1), false)
            };
            let straight = go(u, v, keep.0, keep.1, keep_swapped, memo);
            let crossed = go(u, v, keep.0, keep.1, !keep_swapped, memo);
            let mut sum: BTreeMap<Word, Coeff> = BTreeMap::new();
            for (w, c) in straight.iter().chain(crossed.iter()) {
                let entry = sum.entry(w.append(last)).or_insert_with(Coeff::zero);
                *entry += c;
            }
            sum.retain(|_, c| !c.is_zero());
            sum
        };
        memo.insert((a, b, swapped), result.clone());
        result
    }
    let mut memo = HashMap::new();
    go(u, v, u.degree(), v.degree(), false, &mut memo)
}

fn bilinear_words<F>(x: &FreeTensor, y: &FreeTensor, mut word_op: F) -> FreeTensor
where
    F: FnMut(&Word, &Word) -> BTreeMap<Word, Coeff>,
{
    let mut out = FreeTensor::zero(x.alphabet_size);
    for (u, cu) in &x.terms {
        for (v, cv) in &y.terms {
            let c = cu * cv;
            for (w, k) in word_op(u, v) {
                out.add_term(w, k * &c);
            }
        }
    }
    out
}

fn require_augmented(x: &FreeTensor) -> Result<()> {
    if !x.in_augmentation() {
        return Err(Error::EmptyWordTerm);
    }
    Ok(())
}

/// Right halfshuffle `x ≻ y` on tensors without empty-word component.
pub fn half_shuffle_right(x: &FreeTensor, y: &FreeTensor) -> Result<FreeTensor> {
    x.check_same_alphabet(y)?;
    require_augmented(x)?;
    require_augmented(y)?;
    Ok(bilinear_words(x, y, |u, v| hsr_words_uncached(u, v)))
}

/// Left halfshuffle `x ≺ y`, the mirror recursion. The antipode exchanges
/// the two halfshuffles with the arguments transposed:
/// `A(x ≻ y) = A y ≺ A x`.
pub fn half_shuffle_left(x: &FreeTensor, y: &FreeTensor) -> Result<FreeTensor> {
    x.check_same_alphabet(y)?;
    require_augmented(x)?;
    require_augmented(y)?;
    Ok(bilinear_words(x, y, |u, v| hsl_words(u, v)))
}

/// Left halfshuffle of nonempty words via `i ≺ w = iw`,
/// `iv ≺ w = i(w ≺ v + v ≺ w)`.
fn hsl_words(u: &Word, v: &Word) -> BTreeMap<Word, Coeff> {
    // u ≺ v keeps the interleavings starting with u's first letter, so
    // reversing words turns it into rev(v) ≻ rev(u) reversed back.
    let ur = u.reversed();
    let vr = v.reversed();
    hsr_words_uncached(&vr, &ur)
        .into_iter()
        .map(|(w, c)| (w.reversed(), c))
        .collect()
}

/// Shuffle product, computed structurally as `x ≻ y + y ≻ x` on the
/// augmentation parts, with the empty word acting as unit.
pub fn shuffle(x: &FreeTensor, y: &FreeTensor) -> Result<FreeTensor> {
    x.check_same_alphabet(y)?;
    let ex = x.empty_word_coeff();
    let ey = y.empty_word_coeff();
    let mut out = FreeTensor::zero(x.alphabet_size);
    out.add_term(Word::empty(), &ex * &ey);
    for (w, c) in &y.terms {
        if !w.is_empty() {
            out.add_term(w.clone(), c * &ex);
        }
    }
    for (w, c) in &x.terms {
        if !w.is_empty() {
            out.add_term(w.clone(), c * &ey);
        }
    }
    for (u, cu) in &x.terms {
        if u.is_empty() {
            continue;
        }
        for (v, cv) in &y.terms {
            if v.is_empty() {
                continue;
            }
            let c = cu * cv;
            for (w, k) in shuffle_words(u, v) {
                out.add_term(w, k * &c);
            }
        }
    }
    Ok(out)
}

pub(crate) fn shuffle_words(u: &Word, v: &Word) -> BTreeMap<Word, Coeff> {
    let mut out = hsr_words_uncached(u, v);
    for (w, c) in hsr_words_uncached(v, u) {
        let entry = out.entry(w).or_insert_with(Coeff::zero);
        *entry += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

impl ProductCache {
    /// Tensor-by-word products used by the ideal closure. `op` selects the
    /// product; the word cofactor is always the right argument.
    pub fn tensor_word(&mut self, x: &FreeTensor, w: &Word, op: WordProduct) -> FreeTensor {
        let mut out = FreeTensor::zero(x.alphabet_size());
        for (u, cu) in &x.terms {
            let parts: BTreeMap<Word, Coeff> = if u.is_empty() {
                // Only the shuffle admits empty-word factors; e ⧢ w = w.
                debug_assert!(matches!(op, WordProduct::Shuffle));
                BTreeMap::from([(w.clone(), Coeff::one())])
            } else {
                match op {
                    WordProduct::Shuffle => {
                        let mut s = self.hsr_words(u, w);
                        for (ww, c) in self.hsr_words(w, u) {
                            let e = s.entry(ww).or_insert_with(Coeff::zero);
                            *e += c;
                        }
                        s.retain(|_, c| !c.is_zero());
                        s
                    }
                    WordProduct::RightHalfAfter => self.hsr_words(u, w),
                    WordProduct::RightHalfBefore => self.hsr_words(w, u),
                    WordProduct::LeftHalfAfter => hsl_words(u, w),
                    WordProduct::LeftHalfBefore => hsl_words(w, u),
                }
            };
            for (ww, k) in parts {
                out.add_term(ww, k * cu);
            }
        }
        out
    }
}

/// The five tensor-by-word products arising in ideal closures.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WordProduct {
    /// `x ⧢ w`
    Shuffle,
    /// `x ≻ w`
    RightHalfAfter,
    /// `w ≻ x`
    RightHalfBefore,
    /// `x ≺ w`
    LeftHalfAfter,
    /// `w ≺ x`
    LeftHalfBefore,
}

/// Antipode: signed word reversal `(i1…in) ↦ (−1)^n in…i1`. Linear,
/// involutive, a shuffle homomorphism exchanging the two halfshuffles.
pub fn antipode(x: &FreeTensor) -> FreeTensor {
    let mut out = FreeTensor::zero(x.alphabet_size);
    for (w, c) in &x.terms {
        let sign = if w.degree() % 2 == 0 {
            c.clone()
        } else {
            -c.clone()
        };
        out.add_term(w.reversed(), sign);
    }
    out
}

/// A linear map from the letters of a source alphabet into the tensor
/// algebra over a target alphabet. Extends to the whole source algebra
/// either multiplicatively (for matrix actions) or through the right
/// halfshuffle recursion.
#[derive(Clone, PartialEq, Debug)]
pub struct LetterMap {
    target_alphabet: usize,
    images: Vec<FreeTensor>,
}

impl LetterMap {
    pub fn new(images: Vec<FreeTensor>) -> Result<Self> {
        let target = images
            .first()
            .map(|t| t.alphabet_size())
            .ok_or_else(|| Error::Invalid("letter map needs at least one image".into()))?;
        for img in &images {
            if img.alphabet_size() != target {
                return Err(Error::AlphabetMismatch(target, img.alphabet_size()));
            }
        }
        Ok(LetterMap {
            target_alphabet: target,
            images,
        })
    }

    /// Number of source letters.
    pub fn source_arity(&self) -> usize {
        self.images.len()
    }

    pub fn target_alphabet(&self) -> usize {
        self.target_alphabet
    }

    pub fn images(&self) -> &[FreeTensor] {
        &self.images
    }

    pub fn image(&self, letter: u16) -> Result<&FreeTensor> {
        self.images
            .get(letter as usize - 1)
            .ok_or(Error::LetterOutOfRange(letter, self.images.len()))
    }

    pub fn max_image_degree(&self) -> usize {
        self.images.iter().map(|t| t.max_degree()).max().unwrap_or(0)
    }

    /// The identity on letters of an alphabet.
    pub fn identity(alphabet_size: usize) -> Self {
        let images = (1..=alphabet_size as u16)
            .map(|i| FreeTensor::letter(alphabet_size, i).expect("letter in range"))
            .collect();
        LetterMap {
            target_alphabet: alphabet_size,
            images,
        }
    }

    /// Letter images read off the rows of a square matrix: letter `i` maps
    /// to `Σ_j m[i][j] · j`. This is the adjoint of the pointwise matrix
    /// action on paths.
    pub fn from_matrix(m: &[Vec<Coeff>]) -> Result<Self> {
        let d = m.len();
        let mut images = Vec::with_capacity(d);
        for row in m {
            if row.len() != d {
                return Err(Error::DimensionMismatch(d, row.len()));
            }
            let mut img = FreeTensor::zero(d);
            for (j, c) in row.iter().enumerate() {
                img.add_term(Word::letter(j as u16 + 1), c.clone());
            }
            images.push(img);
        }
        LetterMap::new(images)
    }
}

/// How a letter map extends to the whole tensor algebra.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExtendMode {
    /// `i1…in ↦ B(i1) • … • B(in)`
    Multiplicative,
    /// `Λ_B e = e`, `Λ_B i = B(i)`, `Λ_B (w i) = Λ_B w ≻ Λ_B i`
    Lambda,
}

/// Extends `map` over a tensor. In lambda mode all letter images must lie
/// in the augmentation part; the empty word maps to itself.
pub fn letter_map_extend(
    map: &LetterMap,
    x: &FreeTensor,
    mode: ExtendMode,
) -> Result<FreeTensor> {
    if x.alphabet_size() != map.source_arity() {
        return Err(Error::AlphabetMismatch(x.alphabet_size(), map.source_arity()));
    }
    if mode == ExtendMode::Lambda {
        for img in &map.images {
            if !img.in_augmentation() {
                return Err(Error::ImageNotAugmented);
            }
        }
    }
    let target = map.target_alphabet;
    let mut out = FreeTensor::zero(target);
    for (w, c) in &x.terms {
        if w.is_empty() {
            out.add_term(Word::empty(), c.clone());
            continue;
        }
        let mut acc = map.image(w.letters()[0])?.clone();
        for &l in &w.letters()[1..] {
            let img = map.image(l)?;
            acc = match mode {
                ExtendMode::Multiplicative => concat_product(&acc, img)?,
                ExtendMode::Lambda => half_shuffle_right(&acc, img)?,
            };
        }
        out.add_scaled(&acc, c);
    }
    Ok(out)
}

/// Dual pairing of a truncated series against a tensor, exact over the
/// rationals. Every term of `x` must fit under the series' truncation
/// level; otherwise the pairing would be unverifiable.
pub fn pair(g: &TruncatedSeries, x: &FreeTensor) -> Result<Coeff> {
    if g.alphabet_size() != x.alphabet_size() {
        return Err(Error::AlphabetMismatch(g.alphabet_size(), x.alphabet_size()));
    }
    if x.max_degree() > g.level() {
        return Err(Error::DegreeExceedsLevel {
            degree: x.max_degree(),
            level: g.level(),
        });
    }
    let mut acc = Coeff::zero();
    for (w, c) in x.terms() {
        acc += g.coeff(w) * c;
    }
    Ok(acc)
}
