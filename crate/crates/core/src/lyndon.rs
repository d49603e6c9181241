//! Lyndon words and their standard bracketings: the canonical basis used
//! to expand homogeneous Lie elements.

use num::Zero;

use crate::error::{Error, Result};
use crate::freealg::{concat_product, FreeTensor, Word};
use crate::Coeff;

/// A bracketing tree over letters.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Bracket {
    Leaf(u16),
    Node(Box<Bracket>, Box<Bracket>),
}

/// True iff the word is strictly smaller than all of its proper rotations.
pub fn is_lyndon(w: &Word) -> bool {
    let letters = w.letters();
    let n = letters.len();
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let mut rotated = Vec::with_capacity(2 * n);
    rotated.extend_from_slice(letters);
    rotated.extend_from_slice(letters);
    (1..n).all(|i| letters < &rotated[i..i + n])
}

/// All Lyndon words of exactly the given degree over `{1..d}`, in
/// lexicographic order (Duval's generation).
pub fn lyndon_words(alphabet_size: usize, degree: usize) -> Vec<Word> {
    let d = alphabet_size as u16;
    let n = degree;
    if n == 0 || d == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut w: Vec<u16> = vec![1];
    loop {
        if w.len() == n {
            out.push(Word::from_letters(&w).expect("letters start at 1"));
        }
        // Extend periodically to length n, then increment the last
        // non-maximal letter.
        let m = w.len();
        let mut t: Vec<u16> = (0..n).map(|i| w[i % m]).collect();
        while t.last() == Some(&d) {
            t.pop();
        }
        match t.last_mut() {
            None => break,
            Some(last) => *last += 1,
        }
        w = t;
    }
    out
}

/// Standard (right) factorization bracketing: a letter is a leaf; longer
/// Lyndon words split at the longest proper Lyndon suffix.
pub fn standard_bracketing(w: &Word) -> Result<Bracket> {
    if !is_lyndon(w) {
        return Err(Error::Invalid(format!("{w:?} is not a Lyndon word")));
    }
    let letters = w.letters();
    if letters.len() == 1 {
        return Ok(Bracket::Leaf(letters[0]));
    }
    for i in 1..letters.len() {
        let suffix = w.suffix(i);
        if is_lyndon(&suffix) {
            let prefix = w.prefix(i);
            return Ok(Bracket::Node(
                Box::new(standard_bracketing(&prefix)?),
                Box::new(standard_bracketing(&suffix)?),
            ));
        }
    }
    unreachable!("every suffix of length one is Lyndon");
}

/// Expands a bracketing into the tensor algebra as nested commutators of
/// concatenation.
pub fn bracket_to_tensor(b: &Bracket, alphabet_size: usize) -> Result<FreeTensor> {
    match b {
        Bracket::Leaf(i) => FreeTensor::letter(alphabet_size, *i),
        Bracket::Node(u, v) => {
            let a = bracket_to_tensor(u, alphabet_size)?;
            let b = bracket_to_tensor(v, alphabet_size)?;
            Ok(&concat_product(&a, &b)? - &concat_product(&b, &a)?)
        }
    }
}

/// Expands a homogeneous degree-`k` Lie element in the Lyndon bracket
/// basis. The expansion of the bracket of a Lyndon word is that word plus
/// lexicographically larger ones, so forward substitution along the
/// sorted Lyndon list is exact. A nonzero remainder means the input was
/// not a Lie element.
pub fn lie_coordinates(x: &FreeTensor, degree: usize) -> Result<Vec<(Word, Coeff)>> {
    let d = x.alphabet_size();
    let mut remaining = x.clone();
    let mut coords = Vec::new();
    for lw in lyndon_words(d, degree) {
        let c = remaining.coeff(&lw);
        if c.is_zero() {
            continue;
        }
        let expansion = bracket_to_tensor(&standard_bracketing(&lw)?, d)?;
        remaining.add_scaled(&expansion, &-c.clone());
        coords.push((lw, c));
    }
    if !remaining.is_zero() {
        return Err(Error::NotLie);
    }
    Ok(coords)
}
