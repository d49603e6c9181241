//! Seeded random generators for tensors, Lie elements, polynomial maps
//! and paths. Everything is deterministic given the RNG state, so test
//! data and CLI output are reproducible.

use rand::Rng;

use crate::freealg::{FreeTensor, Word};
use crate::lyndon::{bracket_to_tensor, lyndon_words, standard_bracketing};
use crate::paths::{PiecewisePolyPath, PolySegment};
use crate::poly::{MultiPoly, Poly, PolynomialMap};
use crate::series::TruncatedSeries;
use crate::{qi, Coeff};

/// Small nonzero-biased rational with numerator in `[-max, max]` and
/// denominator in `[1, den]`.
pub fn random_rational<R: Rng>(rng: &mut R, max: i64, den: i64) -> Coeff {
    let n = rng.random_range(-max..=max);
    let d = rng.random_range(1..=den);
    Coeff::new(n.into(), d.into())
}

pub fn random_word<R: Rng>(rng: &mut R, alphabet_size: usize, max_degree: usize) -> Word {
    let len = rng.random_range(1..=max_degree.max(1));
    let letters: Vec<u16> = (0..len)
        .map(|_| rng.random_range(1..=alphabet_size as u16))
        .collect();
    Word::from_letters(&letters).expect("letters start at 1")
}

/// Sparse tensor with up to `terms` random words of degree up to
/// `max_degree`.
pub fn random_tensor<R: Rng>(
    rng: &mut R,
    alphabet_size: usize,
    max_degree: usize,
    terms: usize,
) -> FreeTensor {
    let mut out = FreeTensor::zero(alphabet_size);
    for _ in 0..terms {
        let w = random_word(rng, alphabet_size, max_degree);
        out.add_term(w, random_rational(rng, 3, 3));
    }
    out
}

/// Nonzero tensor in the augmentation part.
pub fn random_augmented_tensor<R: Rng>(
    rng: &mut R,
    alphabet_size: usize,
    max_degree: usize,
    terms: usize,
) -> FreeTensor {
    loop {
        let t = random_tensor(rng, alphabet_size, max_degree, terms);
        if !t.is_zero() {
            return t;
        }
    }
}

/// Random Lie element as a rational combination of Lyndon brackets of
/// every degree up to the level.
pub fn random_lie_series<R: Rng>(
    rng: &mut R,
    alphabet_size: usize,
    level: usize,
) -> TruncatedSeries {
    let mut acc = FreeTensor::zero(alphabet_size);
    for degree in 1..=level {
        for lw in lyndon_words(alphabet_size, degree) {
            if rng.random_range(0..3) == 0 {
                continue; // keep it sparse
            }
            let bracket = bracket_to_tensor(
                &standard_bracketing(&lw).expect("lyndon word"),
                alphabet_size,
            )
            .expect("letters valid");
            acc.add_scaled(&bracket, &random_rational(rng, 3, 2));
        }
    }
    TruncatedSeries::from_tensor(&acc, level).expect("degrees bounded")
}

/// Piecewise-linear path with random rational increments.
pub fn random_pl_path<R: Rng>(
    rng: &mut R,
    dimension: usize,
    segments: usize,
) -> PiecewisePolyPath {
    let increments: Vec<Vec<Coeff>> = (0..segments)
        .map(|_| (0..dimension).map(|_| random_rational(rng, 2, 2)).collect())
        .collect();
    PiecewisePolyPath::piecewise_linear(dimension, &increments).expect("dimensions agree")
}

/// Piecewise-polynomial path whose segment components have the given
/// degree.
pub fn random_poly_path<R: Rng>(
    rng: &mut R,
    dimension: usize,
    segments: usize,
    degree: usize,
) -> PiecewisePolyPath {
    let segs: Vec<PolySegment> = (0..segments)
        .map(|_| {
            PolySegment::new(
                (0..dimension)
                    .map(|_| {
                        let coeffs: Vec<Coeff> = (0..=degree)
                            .map(|k| if k == 0 { qi(0) } else { random_rational(rng, 2, 2) })
                            .collect();
                        Poly::from_coeffs(coeffs)
                    })
                    .collect(),
            )
        })
        .collect();
    PiecewisePolyPath::new(dimension, segs).expect("dimensions agree")
}

/// Random polynomial in `vars` variables with total degree up to
/// `max_degree`; `allow_constant` controls the constant term.
pub fn random_multipoly<R: Rng>(
    rng: &mut R,
    vars: usize,
    max_degree: usize,
    allow_constant: bool,
) -> MultiPoly {
    let mut p = MultiPoly::zero(vars);
    let terms = rng.random_range(1..=4);
    for _ in 0..terms {
        let mut exps = vec![0u32; vars];
        let total = if allow_constant {
            rng.random_range(0..=max_degree)
        } else {
            rng.random_range(1..=max_degree)
        };
        for _ in 0..total {
            exps[rng.random_range(0..vars)] += 1;
        }
        p.add_term(exps, random_rational(rng, 2, 2));
    }
    p
}

/// Random polynomial map with zero constant terms and nonzero components.
pub fn random_polymap<R: Rng>(
    rng: &mut R,
    vars: usize,
    arity_out: usize,
    max_degree: usize,
) -> PolynomialMap {
    let components: Vec<MultiPoly> = (0..arity_out)
        .map(|_| loop {
            let p = random_multipoly(rng, vars, max_degree, false);
            if !p.is_zero() {
                break p;
            }
        })
        .collect();
    PolynomialMap::new(components).expect("nonempty")
}
