//! Piecewise-polynomial paths with exact rational signatures.
//!
//! A path is an ordered list of polynomial segments, each parameterized
//! on [0, 1]; segments are glued by translation, so all semantics are
//! increment-based and no start point is stored. Signatures are computed
//! per segment through the iterated-integral recursion and combined with
//! the concatenation product of truncated series.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::freealg::{word_splits, FreeTensor, LetterMap, Word};
use crate::poly::{Poly, PolynomialMap};
use crate::series::{series_mul, TruncatedSeries};
use crate::Coeff;

/// One polynomial piece of a path: `dimension` univariate components,
/// each a function of `t ∈ [0, 1]`. Only increments matter, so constant
/// offsets in the components are irrelevant to the signature.
#[derive(Clone, PartialEq, Debug)]
pub struct PolySegment {
    components: Vec<Poly>,
}

impl PolySegment {
    pub fn new(components: Vec<Poly>) -> Self {
        PolySegment { components }
    }

    /// Straight segment with the given increment.
    pub fn linear(increment: &[Coeff]) -> Self {
        PolySegment {
            components: increment.iter().map(|c| Poly::linear(c.clone())).collect(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn increment(&self) -> Vec<Coeff> {
        self.components
            .iter()
            .map(|p| p.eval_one() - p.eval_zero())
            .collect()
    }

    fn reversed(&self) -> PolySegment {
        PolySegment {
            components: self
                .components
                .iter()
                .map(|p| p.compose_affine(&Coeff::one(), &-Coeff::one()))
                .collect(),
        }
    }
}

/// A continuous path through rational space, as a sequence of polynomial
/// segments glued by translation. The empty list is the constant path.
#[derive(Clone, PartialEq, Debug)]
pub struct PiecewisePolyPath {
    dimension: usize,
    segments: Vec<PolySegment>,
}

impl PiecewisePolyPath {
    pub fn constant(dimension: usize) -> Self {
        PiecewisePolyPath {
            dimension,
            segments: Vec::new(),
        }
    }

    pub fn new(dimension: usize, segments: Vec<PolySegment>) -> Result<Self> {
        for s in &segments {
            if s.dimension() != dimension {
                return Err(Error::DimensionMismatch(dimension, s.dimension()));
            }
        }
        Ok(PiecewisePolyPath {
            dimension,
            segments,
        })
    }

    /// Single straight segment with the given increment; a zero increment
    /// yields the constant path.
    pub fn linear(increment: &[Coeff]) -> Self {
        if increment.iter().all(|c| c.is_zero()) {
            return Self::constant(increment.len());
        }
        PiecewisePolyPath {
            dimension: increment.len(),
            segments: vec![PolySegment::linear(increment)],
        }
    }

    /// Piecewise linear path visiting the given increments in order.
    pub fn piecewise_linear(dimension: usize, increments: &[Vec<Coeff>]) -> Result<Self> {
        let mut segments = Vec::new();
        for inc in increments {
            if inc.len() != dimension {
                return Err(Error::DimensionMismatch(dimension, inc.len()));
            }
            segments.push(PolySegment::linear(inc));
        }
        Ok(PiecewisePolyPath {
            dimension,
            segments,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn segments(&self) -> &[PolySegment] {
        &self.segments
    }

    /// Total increment of the path.
    pub fn increment(&self) -> Vec<Coeff> {
        let mut acc = vec![Coeff::zero(); self.dimension];
        for s in &self.segments {
            for (a, d) in acc.iter_mut().zip(s.increment()) {
                *a += d;
            }
        }
        acc
    }

    /// Appends the other path's segments (concatenation of paths).
    pub fn concat(&self, other: &PiecewisePolyPath) -> Result<PiecewisePolyPath> {
        if self.dimension != other.dimension {
            return Err(Error::DimensionMismatch(self.dimension, other.dimension));
        }
        let mut segments = self.segments.clone();
        segments.extend(other.segments.iter().cloned());
        Ok(PiecewisePolyPath {
            dimension: self.dimension,
            segments,
        })
    }

    /// Time reversal: segment order is reversed and each component is
    /// reparameterized by `t ↦ 1 − t`.
    pub fn reverse(&self) -> PiecewisePolyPath {
        PiecewisePolyPath {
            dimension: self.dimension,
            segments: self.segments.iter().rev().map(|s| s.reversed()).collect(),
        }
    }

    /// The path stopped inside segment `k` at local time `stop`: keeps
    /// segments before `k` and truncates segment `k` to `[0, stop]`,
    /// reparameterized back onto [0, 1].
    pub fn left_subpath(&self, k: usize, stop: &Coeff) -> Result<PiecewisePolyPath> {
        if k >= self.segments.len() {
            return Err(Error::SegmentOutOfRange(k, self.segments.len()));
        }
        if stop < &Coeff::zero() || stop > &Coeff::one() {
            return Err(Error::StopTimeOutOfRange);
        }
        let mut segments: Vec<PolySegment> = self.segments[..k].to_vec();
        segments.push(PolySegment {
            components: self.segments[k]
                .components
                .iter()
                .map(|p| p.compose_affine(&Coeff::zero(), stop))
                .collect(),
        });
        Ok(PiecewisePolyPath {
            dimension: self.dimension,
            segments,
        })
    }

    /// Per-segment value polynomials of the path started at the origin:
    /// entry `s` evaluated at local time `t` is the path value inside
    /// segment `s`.
    pub fn value_polys(&self) -> Vec<Vec<Poly>> {
        let mut out = Vec::with_capacity(self.segments.len());
        let mut offset = vec![Coeff::zero(); self.dimension];
        for seg in &self.segments {
            let mut comps = Vec::with_capacity(self.dimension);
            for (i, p) in seg.components.iter().enumerate() {
                let base = &offset[i] - p.eval_zero();
                comps.push(p.add(&Poly::constant(base)));
            }
            for (o, d) in offset.iter_mut().zip(seg.increment()) {
                *o += d;
            }
            out.push(comps);
        }
        out
    }
}

/// Iterated-integral polynomials of a single segment: for every word `w`
/// of degree up to `level`, the polynomial `t ↦ ⟨σ(seg|[0,t]), w⟩` built
/// by integrating against the component derivatives.
fn segment_word_polys(seg: &PolySegment, level: usize) -> BTreeMap<Word, Poly> {
    let d = seg.dimension();
    let derivatives: Vec<Poly> = seg.components.iter().map(|p| p.derivative()).collect();
    let mut table: BTreeMap<Word, Poly> = BTreeMap::new();
    table.insert(Word::empty(), Poly::one());
    let mut frontier: Vec<Word> = vec![Word::empty()];
    for _ in 0..level {
        let mut next = Vec::new();
        for w in &frontier {
            let fw = table[w].clone();
            for i in 1..=d as u16 {
                let wi = w.concat(&Word::letter(i));
                let poly = fw.mul(&derivatives[i as usize - 1]).integral();
                table.insert(wi.clone(), poly);
                next.push(wi);
            }
        }
        frontier = next;
    }
    table
}

fn segment_signature(seg: &PolySegment, level: usize) -> TruncatedSeries {
    let table = segment_word_polys(seg, level);
    TruncatedSeries::from_terms(
        seg.dimension(),
        level,
        table.into_iter().map(|(w, p)| (w, p.eval_one())),
    )
    .expect("degrees bounded by construction")
}

/// Exact truncated signature of a path, combined across segments by the
/// concatenation product. Grouplike by construction; asserted in debug
/// builds.
pub fn signature(path: &PiecewisePolyPath, level: usize) -> TruncatedSeries {
    let mut acc = TruncatedSeries::unit(path.dimension(), level);
    for seg in path.segments() {
        let s = segment_signature(seg, level);
        acc = series_mul(&acc, &s).expect("levels agree by construction");
    }
    debug_assert!(crate::series::is_grouplike(&acc));
    acc
}

/// Per-segment stopped-signature polynomials of a tensor: entry `s`
/// evaluated at local time `t` equals the pairing of the signature
/// stopped inside segment `s` at `t` with `x`. The final value on the
/// last segment matches the pairing with the full signature.
pub fn stopped_signature_polys(path: &PiecewisePolyPath, x: &FreeTensor) -> Result<Vec<Poly>> {
    if x.alphabet_size() != path.dimension() {
        return Err(Error::AlphabetMismatch(x.alphabet_size(), path.dimension()));
    }
    let level = x.max_degree();
    let mut out = Vec::with_capacity(path.segments().len());
    let mut prefix = TruncatedSeries::unit(path.dimension(), level);
    for seg in path.segments() {
        let table = segment_word_polys(seg, level);
        let mut poly = Poly::zero();
        for (w, c) in x.terms() {
            // ⟨σ stopped in this segment, w⟩ by splitting across the
            // segment boundary.
            for (u, v) in word_splits(w) {
                let coeff = prefix.coeff(&u) * c;
                if coeff.is_zero() {
                    continue;
                }
                poly = poly.add(&table[&v].scaled(&coeff));
            }
        }
        out.push(poly);
        let seg_sig = TruncatedSeries::from_terms(
            path.dimension(),
            level,
            table.into_iter().map(|(w, p)| (w, p.eval_one())),
        )
        .expect("degrees bounded by construction");
        prefix = series_mul(&prefix, &seg_sig).expect("levels agree by construction");
    }
    Ok(out)
}

/// Single-word form of [`stopped_signature_polys`].
pub fn stopped_signature_poly(path: &PiecewisePolyPath, w: &Word) -> Result<Vec<Poly>> {
    let x = FreeTensor::from_word(path.dimension(), w.clone())?;
    stopped_signature_polys(path, &x)
}

/// The path `t ↦ p(X_t − X_0)`, piecewise polynomial by composition.
/// Requires `p(0) = 0` so the image starts at the origin.
pub fn apply_polynomial_map(
    p: &PolynomialMap,
    path: &PiecewisePolyPath,
) -> Result<PiecewisePolyPath> {
    if !p.maps_zero_to_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    if p.vars() != path.dimension() {
        return Err(Error::DimensionMismatch(p.vars(), path.dimension()));
    }
    let mut segments = Vec::with_capacity(path.segments().len());
    for values in path.value_polys() {
        let comps: Vec<Poly> = p
            .components()
            .iter()
            .map(|q| q.eval_polys(&values))
            .collect::<Result<_>>()?;
        segments.push(PolySegment::new(comps));
    }
    PiecewisePolyPath::new(p.arity_out(), segments)
}

/// The path whose components are the stopped-signature coordinates of the
/// letter images: component `i` at time `t` is `⟨σ(X)_t, B(i)⟩`. Images
/// must have no empty-word term.
pub fn lambda_star(map: &LetterMap, path: &PiecewisePolyPath) -> Result<PiecewisePolyPath> {
    if map.target_alphabet() != path.dimension() {
        return Err(Error::AlphabetMismatch(map.target_alphabet(), path.dimension()));
    }
    for img in map.images() {
        if !img.in_augmentation() {
            return Err(Error::ImageNotAugmented);
        }
    }
    let per_letter: Vec<Vec<Poly>> = map
        .images()
        .iter()
        .map(|img| stopped_signature_polys(path, img))
        .collect::<Result<_>>()?;
    let out_dim = map.source_arity();
    let mut segments = Vec::with_capacity(path.segments().len());
    for s in 0..path.segments().len() {
        let comps: Vec<Poly> = (0..out_dim).map(|i| per_letter[i][s].clone()).collect();
        segments.push(PolySegment::new(comps));
    }
    PiecewisePolyPath::new(out_dim, segments)
}

/// The concatenation shift of a letter map: each image gains the proper
/// deconcatenation splits weighted by the series coefficients,
/// `B(i) ↦ B(i) + Σ ⟨g, w'⟩ w''` over splits with both parts nonempty.
/// This is the map making stopped-coordinate paths split across path
/// concatenation.
pub fn delta_shift(map: &LetterMap, g: &TruncatedSeries) -> Result<LetterMap> {
    if g.alphabet_size() != map.target_alphabet() {
        return Err(Error::AlphabetMismatch(g.alphabet_size(), map.target_alphabet()));
    }
    let required = map.max_image_degree();
    if g.level() < required {
        return Err(Error::LevelTooSmall {
            level: g.level(),
            required,
        });
    }
    let images = map
        .images()
        .iter()
        .map(|img| {
            let mut shifted = img.clone();
            for (w, c) in img.terms() {
                for (u, v) in word_splits(w) {
                    if u.is_empty() || v.is_empty() {
                        continue;
                    }
                    shifted.add_term(v, g.coeff(&u) * c);
                }
            }
            shifted
        })
        .collect();
    LetterMap::new(images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::pair;
    use crate::series::{is_grouplike, series_inverse};
    use crate::{qi, qr};

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn monomial_path() -> PiecewisePolyPath {
        // (t, t²) on a single segment.
        PiecewisePolyPath::new(
            2,
            vec![PolySegment::new(vec![
                Poly::from_coeffs(vec![qi(0), qi(1)]),
                Poly::from_coeffs(vec![qi(0), qi(0), qi(1)]),
            ])],
        )
        .unwrap()
    }

    #[test]
    fn constant_path_has_unit_signature() {
        let x = PiecewisePolyPath::constant(3);
        assert_eq!(signature(&x, 4), TruncatedSeries::unit(3, 4));
    }

    #[test]
    fn linear_path_signature_is_exponential() {
        let x = PiecewisePolyPath::linear(&[qi(1), qi(0)]);
        let sig = signature(&x, 2);
        assert_eq!(sig.coeff(&w("1")), qi(1));
        assert_eq!(sig.coeff(&w("11")), qr(1, 2));
        assert_eq!(sig.coeff(&w("12")), qi(0));
    }

    #[test]
    fn monomial_path_level_two() {
        let sig = signature(&monomial_path(), 2);
        // ∫ t d(t²) = ∫ 2t² = 2/3 and the shuffle complement 1/3.
        assert_eq!(sig.coeff(&w("12")), qr(2, 3));
        assert_eq!(sig.coeff(&w("21")), qr(1, 3));
        assert_eq!(sig.coeff(&w("1")), qi(1));
        assert_eq!(sig.coeff(&w("2")), qi(1));
    }

    #[test]
    fn stopped_polys_small_cases() {
        let x = monomial_path();
        let e = stopped_signature_poly(&x, &w("")).unwrap();
        assert_eq!(e, vec![Poly::one()]);

        let lin = PiecewisePolyPath::linear(&[qi(1)]);
        let f = stopped_signature_poly(&lin, &w("1")).unwrap();
        assert_eq!(f, vec![Poly::linear(qi(1))]);

        let f12 = stopped_signature_poly(&x, &w("12")).unwrap();
        // ∫0^t u · 2u du = 2t³/3
        assert_eq!(
            f12,
            vec![Poly::from_coeffs(vec![qi(0), qi(0), qi(0), qr(2, 3)])]
        );
    }

    #[test]
    fn stopped_polys_agree_with_signature_at_the_end() {
        let a = PiecewisePolyPath::linear(&[qi(1), qi(2)]);
        let x = a.concat(&monomial_path()).unwrap();
        for word in ["1", "12", "21", "112"] {
            let polys = stopped_signature_poly(&x, &w(word)).unwrap();
            let last = polys.last().unwrap().eval_one();
            let sig = signature(&x, 3);
            assert_eq!(last, pair(&sig, &FreeTensor::from_word(2, w(word)).unwrap()).unwrap());
        }
    }

    #[test]
    fn stopped_polys_are_continuous_across_segments() {
        let a = PiecewisePolyPath::linear(&[qi(1), qi(2)]);
        let x = a.concat(&monomial_path()).unwrap();
        let polys = stopped_signature_poly(&x, &w("12")).unwrap();
        assert_eq!(polys[0].eval_one(), polys[1].eval_zero());
    }

    #[test]
    fn chen_identity_on_concatenation() {
        let a = PiecewisePolyPath::piecewise_linear(
            2,
            &[vec![qi(1), qi(0)], vec![qr(1, 2), qi(3)]],
        )
        .unwrap();
        let b = monomial_path();
        let both = a.concat(&b).unwrap();
        let lhs = signature(&both, 4);
        let rhs = series_mul(&signature(&a, 4), &signature(&b, 4)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn reversal_inverts_the_signature() {
        let x = monomial_path();
        let lhs = signature(&x.reverse(), 4);
        let rhs = series_inverse(&signature(&x, 4)).unwrap();
        assert_eq!(lhs, rhs);

        let loop_sig = signature(&x.concat(&x.reverse()).unwrap(), 4);
        assert_eq!(loop_sig, TruncatedSeries::unit(2, 4));
    }

    #[test]
    fn left_subpath_edges() {
        let a = PiecewisePolyPath::piecewise_linear(2, &[vec![qi(1), qi(0)], vec![qi(0), qi(1)]])
            .unwrap();
        let full = a.left_subpath(1, &qi(1)).unwrap();
        assert_eq!(signature(&full, 3), signature(&a, 3));

        let half = a.left_subpath(0, &qr(1, 2)).unwrap();
        assert_eq!(half.increment(), vec![qr(1, 2), qi(0)]);

        assert_eq!(
            a.left_subpath(2, &qi(0)).unwrap_err(),
            Error::SegmentOutOfRange(2, 2)
        );
        assert_eq!(
            a.left_subpath(0, &qi(2)).unwrap_err(),
            Error::StopTimeOutOfRange
        );
    }

    #[test]
    fn signatures_are_grouplike() {
        let x = monomial_path();
        assert!(is_grouplike(&signature(&x, 5)));
    }

    #[test]
    fn apply_identity_map_translates_to_origin() {
        let p = PolynomialMap::identity(2);
        let x = monomial_path();
        let y = apply_polynomial_map(&p, &x).unwrap();
        assert_eq!(signature(&y, 4), signature(&x, 4));
    }

    #[test]
    fn apply_quadratic_map_composes_components() {
        // p(x, y) = (x², y) on the straight diagonal gives (t², t).
        let p = PolynomialMap::new(vec![
            MultiPolyExt::square(2, 1),
            crate::poly::MultiPoly::variable(2, 2).unwrap(),
        ])
        .unwrap();
        let x = PiecewisePolyPath::linear(&[qi(1), qi(1)]);
        let y = apply_polynomial_map(&p, &x).unwrap();
        assert_eq!(y.segments().len(), 1);
        assert_eq!(
            y.segments()[0].components()[0],
            Poly::from_coeffs(vec![qi(0), qi(0), qi(1)])
        );
        assert_eq!(y.segments()[0].components()[1], Poly::linear(qi(1)));
    }

    #[test]
    fn apply_rejects_nonzero_constant() {
        let p = PolynomialMap::new(vec![crate::poly::MultiPoly::constant(2, qi(1))]).unwrap();
        assert_eq!(
            apply_polynomial_map(&p, &monomial_path()).unwrap_err(),
            Error::NonzeroConstantTerm
        );
    }

    // Small helper for building x_i² components in tests.
    struct MultiPolyExt;
    impl MultiPolyExt {
        fn square(vars: usize, i: usize) -> crate::poly::MultiPoly {
            let x = crate::poly::MultiPoly::variable(vars, i).unwrap();
            x.mul(&x)
        }
    }

    #[test]
    fn lambda_star_with_letter_images_recovers_the_path() {
        let b = LetterMap::identity(2);
        let x = monomial_path();
        let y = lambda_star(&b, &x).unwrap();
        assert_eq!(signature(&y, 4), signature(&x, 4));
    }

    #[test]
    fn lambda_star_single_word_image() {
        // B(1) = 12 on the diagonal path: component ∫ t dt = t²/2.
        let b = LetterMap::new(vec![FreeTensor::from_word(2, w("12")).unwrap()]).unwrap();
        let x = PiecewisePolyPath::linear(&[qi(1), qi(1)]);
        let y = lambda_star(&b, &x).unwrap();
        assert_eq!(y.dimension(), 1);
        assert_eq!(
            y.segments()[0].components()[0],
            Poly::from_coeffs(vec![qi(0), qi(0), qr(1, 2)])
        );
    }

    #[test]
    fn delta_shift_examples() {
        // Degree-one images are unchanged.
        let b = LetterMap::identity(2);
        let g = signature(&PiecewisePolyPath::linear(&[qi(2), qi(5)]), 3);
        assert_eq!(delta_shift(&b, &g).unwrap(), b);

        // The unit series contributes nothing.
        let b12 = LetterMap::new(vec![FreeTensor::from_word(2, w("12")).unwrap()]).unwrap();
        let unit = TruncatedSeries::unit(2, 3);
        assert_eq!(delta_shift(&b12, &unit).unwrap(), b12);

        // B(1) = 12 shifted by σ(linear e1) gains the suffix 2.
        let g = signature(&PiecewisePolyPath::linear(&[qi(1), qi(0)]), 2);
        let shifted = delta_shift(&b12, &g).unwrap();
        let expect = FreeTensor::from_terms(2, [(w("12"), qi(1)), (w("2"), qi(1))]).unwrap();
        assert_eq!(shifted.images(), &[expect]);

        // Level below the image degree is rejected.
        let low = TruncatedSeries::unit(2, 1);
        assert_eq!(
            delta_shift(&b12, &low).unwrap_err(),
            Error::LevelTooSmall { level: 1, required: 2 }
        );
    }
}
