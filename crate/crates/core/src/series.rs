//! Truncated series over words: the group of level-`N` truncations of
//! signatures lives here, together with `exp`/`log` for the
//! concatenation product and the grouplike/Lie membership tests.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::freealg::{FreeTensor, Word};
use crate::Coeff;

/// A level-graded truncation of a formal word series: every word of
/// degree up to `level` carries a rational coefficient (zeros omitted).
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    alphabet_size: usize,
    level: usize,
    coeffs: BTreeMap<Word, Coeff>,
}

impl TruncatedSeries {
    pub fn zero(alphabet_size: usize, level: usize) -> Self {
        TruncatedSeries {
            alphabet_size,
            level,
            coeffs: BTreeMap::new(),
        }
    }

    /// The multiplicative unit: empty word with coefficient one.
    pub fn unit(alphabet_size: usize, level: usize) -> Self {
        let mut s = Self::zero(alphabet_size, level);
        s.coeffs.insert(Word::empty(), Coeff::one());
        s
    }

    pub fn from_terms<I>(alphabet_size: usize, level: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, Coeff)>,
    {
        let mut s = Self::zero(alphabet_size, level);
        for (w, c) in terms {
            if w.degree() > level {
                return Err(Error::DegreeExceedsLevel {
                    degree: w.degree(),
                    level,
                });
            }
            let m = w.max_letter();
            if m as usize > alphabet_size {
                return Err(Error::LetterOutOfRange(m, alphabet_size));
            }
            s.add_term(w, c);
        }
        Ok(s)
    }

    /// Views a polynomial tensor as a series; terms above `level` are an
    /// error, never silently dropped.
    pub fn from_tensor(x: &FreeTensor, level: usize) -> Result<Self> {
        if x.max_degree() > level {
            return Err(Error::DegreeExceedsLevel {
                degree: x.max_degree(),
                level,
            });
        }
        Self::from_terms(
            x.alphabet_size(),
            level,
            x.terms().map(|(w, c)| (w.clone(), c.clone())),
        )
    }

    pub fn to_tensor(&self) -> FreeTensor {
        FreeTensor::from_terms(
            self.alphabet_size,
            self.coeffs.iter().map(|(w, c)| (w.clone(), c.clone())),
        )
        .expect("letters already validated")
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Coeff)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> Coeff {
        self.coeffs.get(w).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn empty_word_coeff(&self) -> Coeff {
        self.coeff(&Word::empty())
    }

    pub fn add_term(&mut self, w: Word, c: Coeff) {
        debug_assert!(w.degree() <= self.level);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(w) {
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

    pub fn add_scaled(&mut self, other: &TruncatedSeries, scale: &Coeff) {
        assert_eq!(self.alphabet_size, other.alphabet_size);
        assert_eq!(self.level, other.level);
        for (w, c) in &other.coeffs {
            self.add_term(w.clone(), c * scale);
        }
    }

    /// The homogeneous degree-`k` component as a polynomial tensor.
    pub fn homogeneous_part(&self, k: usize) -> FreeTensor {
        FreeTensor::from_terms(
            self.alphabet_size,
            self.coeffs
                .iter()
                .filter(|(w, _)| w.degree() == k)
                .map(|(w, c)| (w.clone(), c.clone())),
        )
        .expect("letters already validated")
    }

    /// Lowers (or keeps) the truncation level, dropping higher terms.
    /// Raising the level is rejected: the dropped coefficients are
    /// unknown, not zero.
    pub fn truncated(&self, level: usize) -> Result<TruncatedSeries> {
        if level > self.level {
            return Err(Error::LevelTooSmall {
                level: self.level,
                required: level,
            });
        }
        Ok(TruncatedSeries {
            alphabet_size: self.alphabet_size,
            level,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(w, _)| w.degree() <= level)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        })
    }

    /// Reinterprets sparse data at a higher level, treating absent
    /// coefficients as exact zeros. This is a declaration about the data,
    /// so it is a distinct operation from [`TruncatedSeries::truncated`].
    pub fn padded_to_level(&self, level: usize) -> Result<TruncatedSeries> {
        if level < self.level {
            return self.truncated(level);
        }
        Ok(TruncatedSeries {
            alphabet_size: self.alphabet_size,
            level,
            coeffs: self.coeffs.clone(),
        })
    }

    fn check_compatible(&self, other: &TruncatedSeries) -> Result<()> {
        if self.alphabet_size != other.alphabet_size {
            return Err(Error::AlphabetMismatch(
                self.alphabet_size,
                other.alphabet_size,
            ));
        }
        if self.level != other.level {
            return Err(Error::LevelMismatch(self.level, other.level));
        }
        Ok(())
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[level {}] {:?}", self.level, self.to_tensor())
    }
}

/// Concatenation product of truncated series: the coefficient of a word
/// is the split-sum of the factors' coefficients. Associative; unit has
/// only the empty word.
pub fn series_mul(g: &TruncatedSeries, h: &TruncatedSeries) -> Result<TruncatedSeries> {
    g.check_compatible(h)?;
    let mut out = TruncatedSeries::zero(g.alphabet_size, g.level);
    for (u, cu) in &g.coeffs {
        for (v, cv) in &h.coeffs {
            if u.degree() + v.degree() <= g.level {
                out.add_term(u.concat(v), cu * cv);
            }
        }
    }
    Ok(out)
}

/// Multiplicative inverse up to the truncation level; requires a nonzero
/// empty-word coefficient. For grouplike series this agrees with the
/// antipode adjoint `w ↦ (−1)^{deg w} g(reverse w)`.
pub fn series_inverse(g: &TruncatedSeries) -> Result<TruncatedSeries> {
    let c0 = g.empty_word_coeff();
    if c0.is_zero() {
        return Err(Error::ZeroLeadingCoefficient);
    }
    // g = c0 (1 + r) with r supported in positive degrees;
    // g^{-1} = c0^{-1} Σ (−r)^{•k}, which terminates at the level.
    let inv_c0 = Coeff::one() / &c0;
    let mut r = TruncatedSeries::zero(g.alphabet_size, g.level);
    for (w, c) in &g.coeffs {
        if !w.is_empty() {
            r.add_term(w.clone(), c * &inv_c0);
        }
    }
    let mut out = TruncatedSeries::unit(g.alphabet_size, g.level);
    let mut power = TruncatedSeries::unit(g.alphabet_size, g.level);
    for k in 1..=g.level {
        power = series_mul(&power, &r)?;
        if power.is_empty() {
            break;
        }
        let sign = if k % 2 == 0 { Coeff::one() } else { -Coeff::one() };
        out.add_scaled(&power, &sign);
    }
    let mut scaled = TruncatedSeries::zero(g.alphabet_size, g.level);
    scaled.add_scaled(&out, &inv_c0);
    Ok(scaled)
}

/// Truncated exponential `Σ ℓ^{•k} / k!` for a series with zero
/// empty-word coefficient. Terminates exactly at the level.
pub fn exp_conc(l: &TruncatedSeries) -> Result<TruncatedSeries> {
    if !l.empty_word_coeff().is_zero() {
        return Err(Error::WrongLeadingCoefficient("0"));
    }
    let mut out = TruncatedSeries::unit(l.alphabet_size, l.level);
    let mut term = TruncatedSeries::unit(l.alphabet_size, l.level);
    for k in 1..=l.level {
        term = series_mul(&term, l)?;
        if term.is_empty() {
            break;
        }
        let inv_k = Coeff::new(1.into(), k.into());
        let mut scaled = TruncatedSeries::zero(l.alphabet_size, l.level);
        scaled.add_scaled(&term, &inv_k);
        term = scaled;
        out.add_scaled(&term, &Coeff::one());
    }
    Ok(out)
}

/// Truncated logarithm `Σ (−1)^{k+1} (g − 1)^{•k} / k` for a series with
/// empty-word coefficient one. Inverse of [`exp_conc`] up to the level.
pub fn log_conc(g: &TruncatedSeries) -> Result<TruncatedSeries> {
    if !g.empty_word_coeff().is_one() {
        return Err(Error::WrongLeadingCoefficient("1"));
    }
    let mut r = g.clone();
    r.add_term(Word::empty(), -Coeff::one());
    let mut out = TruncatedSeries::zero(g.alphabet_size, g.level);
    let mut power = TruncatedSeries::unit(g.alphabet_size, g.level);
    for k in 1..=g.level {
        power = series_mul(&power, &r)?;
        if power.is_empty() {
            break;
        }
        let c = Coeff::new(
            if k % 2 == 1 { 1.into() } else { num::BigInt::from(-1) },
            k.into(),
        );
        out.add_scaled(&power, &c);
    }
    Ok(out)
}

/// All complementary subset splits `(w_I, w_Ic)` of the words of `g`,
/// weighted by the coefficients: the unshuffle table
/// `(u, v) ↦ ⟨g, u ⧢ v⟩`, complete for all pairs with degree sum up to
/// the level.
fn unshuffle_table(g: &TruncatedSeries) -> HashMap<(Word, Word), Coeff> {
    let mut table: HashMap<(Word, Word), Coeff> = HashMap::new();
    for (w, c) in &g.coeffs {
        let n = w.degree();
        let letters = w.letters();
        for mask in 0u32..(1u32 << n) {
            let mut left = Vec::new();
            let mut right = Vec::new();
            for (i, &l) in letters.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    left.push(l);
                } else {
                    right.push(l);
                }
            }
            let key = (
                Word::from_letters(&left).expect("valid letters"),
                Word::from_letters(&right).expect("valid letters"),
            );
            let entry = table.entry(key).or_insert_with(Coeff::zero);
            *entry += c;
        }
    }
    table.retain(|_, c| !c.is_zero());
    table
}

/// Shuffle-character test: true iff the empty-word coefficient is one and
/// `⟨g, u ⧢ v⟩ = ⟨g, u⟩⟨g, v⟩` for every word pair with degree sum up to
/// the level. The check is finite and exact: only pairs on which either
/// side can be nonzero are enumerated, all others vanish identically.
pub fn is_grouplike(g: &TruncatedSeries) -> bool {
    if !g.empty_word_coeff().is_one() {
        return false;
    }
    let table = unshuffle_table(g);
    for ((u, v), lhs) in &table {
        if *lhs != g.coeff(u) * g.coeff(v) {
            return false;
        }
    }
    // Pairs with both coefficients nonzero must also appear in the table
    // with the matching product.
    for (u, cu) in &g.coeffs {
        for (v, cv) in &g.coeffs {
            if u.degree() + v.degree() > g.level {
                continue;
            }
            if !table.contains_key(&(u.clone(), v.clone())) && !(cu * cv).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Ree's criterion: true iff the empty-word coefficient vanishes and
/// `⟨ℓ, u ⧢ v⟩ = 0` for all nonempty `u, v` with degree sum up to the
/// level.
pub fn is_lie(l: &TruncatedSeries) -> bool {
    if !l.empty_word_coeff().is_zero() {
        return false;
    }
    let table = unshuffle_table(l);
    table
        .iter()
        .all(|((u, v), c)| u.is_empty() || v.is_empty() || c.is_zero())
}

/// The coordinate of the first kind attached to `x`: reads `⟨log g, x⟩`
/// for grouplike `g`.
pub fn first_kind_coordinate(x: &FreeTensor, g: &TruncatedSeries) -> Result<Coeff> {
    if !is_grouplike(g) {
        return Err(Error::NotGrouplike);
    }
    let l = log_conc(g)?;
    crate::freealg::pair(&l, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::{antipode, pair};
    use crate::sample;
    use crate::{qi, qr};
    use rand::SeedableRng;

    fn letter_series(d: usize, level: usize, i: u16, c: Coeff) -> TruncatedSeries {
        TruncatedSeries::from_terms(d, level, [(Word::letter(i), c)]).unwrap()
    }

    #[test]
    fn unit_is_neutral() {
        let e = TruncatedSeries::unit(2, 3);
        let g = exp_conc(&letter_series(2, 3, 1, qi(2))).unwrap();
        assert_eq!(series_mul(&e, &g).unwrap(), g);
        assert_eq!(series_mul(&g, &e).unwrap(), g);
    }

    #[test]
    fn mul_requires_matching_shape() {
        let a = TruncatedSeries::unit(2, 3);
        let b = TruncatedSeries::unit(2, 4);
        assert_eq!(series_mul(&a, &b).unwrap_err(), Error::LevelMismatch(3, 4));
        let c = TruncatedSeries::unit(3, 3);
        assert_eq!(
            series_mul(&a, &c).unwrap_err(),
            Error::AlphabetMismatch(2, 3)
        );
    }

    #[test]
    fn exp_of_opposite_increments_cancels() {
        let a = exp_conc(&letter_series(2, 2, 1, qi(3))).unwrap();
        let b = exp_conc(&letter_series(2, 2, 1, qi(-3))).unwrap();
        assert_eq!(series_mul(&a, &b).unwrap(), TruncatedSeries::unit(2, 2));
    }

    #[test]
    fn chen_coefficient_of_a_split_word() {
        // coefficient of 12 in exp(e1) • exp(e2) is 1.
        let a = exp_conc(&letter_series(2, 2, 1, qi(1))).unwrap();
        let b = exp_conc(&letter_series(2, 2, 2, qi(1))).unwrap();
        let prod = series_mul(&a, &b).unwrap();
        assert_eq!(prod.coeff(&Word::parse("12").unwrap()), qi(1));
        assert_eq!(prod.coeff(&Word::parse("21").unwrap()), qi(0));
    }

    #[test]
    fn exp_examples() {
        let zero = TruncatedSeries::zero(2, 4);
        assert_eq!(exp_conc(&zero).unwrap(), TruncatedSeries::unit(2, 4));

        let g = exp_conc(&letter_series(2, 3, 1, qi(1))).unwrap();
        assert_eq!(g.coeff(&Word::parse("111").unwrap()), qr(1, 6));
        assert_eq!(g.coeff(&Word::parse("11").unwrap()), qr(1, 2));

        let bad = TruncatedSeries::unit(2, 3);
        assert!(exp_conc(&bad).is_err());
    }

    #[test]
    fn log_exp_roundtrip_on_random_lie_elements() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for case in 0..100 {
            let d = 2 + (case % 2);
            let level = 2 + (case % 4); // levels 2..=5
            let l = sample::random_lie_series(&mut rng, d, level);
            let g = exp_conc(&l).unwrap();
            assert_eq!(log_conc(&g).unwrap(), l, "case {case}");
        }
    }

    #[test]
    fn inverse_examples() {
        let e = TruncatedSeries::unit(2, 3);
        assert_eq!(series_inverse(&e).unwrap(), e);

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let l = sample::random_lie_series(&mut rng, 2, 4);
            let g = exp_conc(&l).unwrap();
            let inv = series_inverse(&g).unwrap();
            assert_eq!(series_mul(&g, &inv).unwrap(), TruncatedSeries::unit(2, 4));
            assert_eq!(series_mul(&inv, &g).unwrap(), TruncatedSeries::unit(2, 4));
            // exp(ℓ)^{-1} = exp(−ℓ)
            let mut neg = TruncatedSeries::zero(2, 4);
            neg.add_scaled(&l, &qi(-1));
            assert_eq!(inv, exp_conc(&neg).unwrap());
            // antipode adjoint formula for grouplike series
            for (w, _) in g.terms() {
                let expect = if w.degree() % 2 == 0 {
                    g.coeff(&w.reversed())
                } else {
                    -g.coeff(&w.reversed())
                };
                assert_eq!(inv.coeff(w), expect);
            }
            assert_eq!(series_inverse(&inv).unwrap(), g);
        }

        let zero = TruncatedSeries::zero(2, 3);
        assert_eq!(
            series_inverse(&zero).unwrap_err(),
            Error::ZeroLeadingCoefficient
        );
    }

    #[test]
    fn grouplike_examples() {
        assert!(is_grouplike(&TruncatedSeries::unit(2, 3)));

        // exp of a Lie element (letter plus area bracket) is grouplike.
        let l = TruncatedSeries::from_terms(
            2,
            3,
            [
                (Word::letter(1), qi(1)),
                (Word::parse("12").unwrap(), qi(1)),
                (Word::parse("21").unwrap(), qi(-1)),
            ],
        )
        .unwrap();
        assert!(is_grouplike(&exp_conc(&l).unwrap()));

        // unit plus a bare 12 term is not a shuffle character.
        let g = TruncatedSeries::from_terms(
            2,
            2,
            [(Word::empty(), qi(1)), (Word::parse("12").unwrap(), qi(1))],
        )
        .unwrap();
        assert!(!is_grouplike(&g));
    }

    #[test]
    fn lie_examples() {
        let e1 = letter_series(2, 2, 1, qi(1));
        assert!(is_lie(&e1));

        let area = TruncatedSeries::from_terms(
            2,
            2,
            [
                (Word::parse("12").unwrap(), qi(1)),
                (Word::parse("21").unwrap(), qi(-1)),
            ],
        )
        .unwrap();
        assert!(is_lie(&area));

        let sym = TruncatedSeries::from_terms(
            2,
            2,
            [
                (Word::parse("12").unwrap(), qi(1)),
                (Word::parse("21").unwrap(), qi(1)),
            ],
        )
        .unwrap();
        assert!(!is_lie(&sym));
    }

    #[test]
    fn grouplike_iff_log_is_lie() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for case in 0..50 {
            let level = 2 + (case % 3); // 2..=4
            let l = sample::random_lie_series(&mut rng, 2, level);
            let g = exp_conc(&l).unwrap();
            assert!(is_grouplike(&g));
            assert!(is_lie(&log_conc(&g).unwrap()));

            // Perturbing a non-Lie coordinate breaks both sides.
            if level >= 2 {
                let mut spoiled = g.clone();
                spoiled.add_term(Word::parse("11").unwrap(), qi(1));
                assert_eq!(
                    is_grouplike(&spoiled),
                    is_lie(&log_conc(&spoiled).unwrap())
                );
                assert!(!is_grouplike(&spoiled));
            }
        }
    }

    #[test]
    fn product_of_grouplike_is_grouplike() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let a = exp_conc(&sample::random_lie_series(&mut rng, 2, 4)).unwrap();
            let b = exp_conc(&sample::random_lie_series(&mut rng, 2, 4)).unwrap();
            assert!(is_grouplike(&series_mul(&a, &b).unwrap()));
        }
    }

    #[test]
    fn first_kind_coordinate_examples() {
        let g = exp_conc(&letter_series(2, 2, 1, qi(3))).unwrap();
        let x = crate::freealg::FreeTensor::letter(2, 1).unwrap();
        assert_eq!(first_kind_coordinate(&x, &g).unwrap(), qi(3));

        // log(exp(e1) • exp(e2)) pairs with the area to 1.
        let a = exp_conc(&letter_series(2, 2, 1, qi(1))).unwrap();
        let b = exp_conc(&letter_series(2, 2, 2, qi(1))).unwrap();
        let g = series_mul(&a, &b).unwrap();
        let area = crate::freealg::FreeTensor::from_terms(
            2,
            [
                (Word::parse("12").unwrap(), qi(1)),
                (Word::parse("21").unwrap(), qi(-1)),
            ],
        )
        .unwrap();
        assert_eq!(first_kind_coordinate(&area, &g).unwrap(), qi(1));

        // The unit has zero log.
        let unit = TruncatedSeries::unit(2, 2);
        let x = crate::freealg::FreeTensor::from_word(2, Word::parse("12").unwrap()).unwrap();
        assert_eq!(first_kind_coordinate(&x, &unit).unwrap(), qi(0));

        // Non-grouplike input is rejected.
        let bad = TruncatedSeries::from_terms(
            2,
            2,
            [(Word::empty(), qi(1)), (Word::parse("12").unwrap(), qi(1))],
        )
        .unwrap();
        assert_eq!(
            first_kind_coordinate(&x, &bad).unwrap_err(),
            Error::NotGrouplike
        );
    }

    #[test]
    fn pair_respects_level_bound() {
        let g = TruncatedSeries::unit(2, 2);
        let deep = crate::freealg::FreeTensor::from_word(2, Word::parse("111").unwrap()).unwrap();
        assert_eq!(
            pair(&g, &deep).unwrap_err(),
            Error::DegreeExceedsLevel { degree: 3, level: 2 }
        );
    }

    #[test]
    fn inverse_agrees_with_antipode_on_signature_like_series() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let l = sample::random_lie_series(&mut rng, 2, 3);
        let g = exp_conc(&l).unwrap();
        let inv = series_inverse(&g).unwrap();
        let adj = antipode(&g.to_tensor());
        assert_eq!(TruncatedSeries::from_tensor(&adj, 3).unwrap(), inv);
    }
}
