//! Path-variety membership, bounded-rank tests for subpath coordinates,
//! and constructive realization of truncated log-signatures by piecewise
//! linear paths.
//!
//! Membership is always certified up to the spec's truncation level: a
//! passing test means every basis row of the truncated ideal annihilates
//! the signature at that level, nothing more.

use std::fmt;
use std::str::FromStr;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::freealg::{
    pair, words_of_degree, FreeTensor, ProductCache, Word, WordProduct,
};
use crate::ideals::{ideal_basis, ClosureType, GradedBasis};
use crate::lyndon::{bracket_to_tensor, lie_coordinates, standard_bracketing, Bracket};
use crate::matrix::rank;
use crate::paths::{signature, PiecewisePolyPath};
use crate::poly::{MultiPoly, PolynomialMap};
use crate::series::{is_lie, log_conc, TruncatedSeries};
use crate::{factorial, Coeff};

/// Generators-plus-closure description of a path variety, truncated at a
/// certificate level.
#[derive(Clone, PartialEq, Debug)]
pub struct VarietySpec {
    pub generators: Vec<FreeTensor>,
    pub closure: ClosureType,
    pub level: usize,
    pub alphabet_size: usize,
}

impl VarietySpec {
    pub fn new(
        alphabet_size: usize,
        generators: Vec<FreeTensor>,
        closure: ClosureType,
        level: usize,
    ) -> Self {
        VarietySpec {
            generators,
            closure,
            level,
            alphabet_size,
        }
    }

    /// Same variety description at a different certificate level.
    pub fn at_level(mut self, level: usize) -> Self {
        self.level = level;
        self
    }

    pub fn basis(&self) -> Result<GradedBasis> {
        ideal_basis(self.alphabet_size, &self.generators, self.closure, self.level)
    }
}

/// True iff the signature annihilates every row of the basis.
pub fn annihilates(sig: &TruncatedSeries, basis: &GradedBasis) -> Result<bool> {
    for row in basis.rows() {
        if !pair(sig, row)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership of a path in a variety, certified up to the spec level:
/// the truncated-ideal basis is computed and every row is paired against
/// the exact signature.
pub fn in_variety(path: &PiecewisePolyPath, spec: &VarietySpec) -> Result<bool> {
    if path.dimension() != spec.alphabet_size {
        return Err(Error::DimensionMismatch(path.dimension(), spec.alphabet_size));
    }
    let basis = spec.basis()?;
    let sig = signature(path, spec.level);
    annihilates(&sig, &basis)
}

/// Loops of order `k`: paths whose signature vanishes on all words of
/// degree up to `k`. Certificate level defaults to `k`.
pub fn loops_variety(alphabet_size: usize, k: usize) -> VarietySpec {
    let generators = crate::freealg::words_up_to(alphabet_size, k)
        .into_iter()
        .map(|w| FreeTensor::from_word(alphabet_size, w).expect("letters in range"))
        .collect();
    VarietySpec::new(alphabet_size, generators, ClosureType::Shuffle, k.max(1))
}

/// Paths whose total increment lies in the zero locus of the polynomial
/// map. Constant terms are permitted: each component contributes
/// `φ(p_i − p_i(0)) + p_i(0)·e`, which pairs with any signature to
/// `p_i(increment)`.
pub fn increments_variety(p: &PolynomialMap) -> Result<VarietySpec> {
    let d = p.vars();
    let mut generators = Vec::with_capacity(p.components().len());
    let mut level = 1;
    for comp in p.components() {
        let c0 = comp.constant_term();
        let mut g = crate::ideals::phi(&comp.without_constant())?;
        g.add_term(Word::empty(), c0);
        if g.is_zero() {
            return Err(Error::ZeroGenerator);
        }
        level = level.max(comp.total_degree());
        generators.push(g);
    }
    Ok(VarietySpec::new(d, generators, ClosureType::Shuffle, level))
}

/// Which subpath family a rank condition quantifies over, hence which
/// halfshuffle operators build the column contexts.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SubpathSide {
    Left,
    Right,
    TwoSided,
}

impl SubpathSide {
    fn products(self) -> &'static [WordProduct] {
        match self {
            SubpathSide::Left => &[WordProduct::RightHalfAfter, WordProduct::RightHalfBefore],
            SubpathSide::Right => &[WordProduct::LeftHalfAfter, WordProduct::LeftHalfBefore],
            SubpathSide::TwoSided => &[
                WordProduct::RightHalfAfter,
                WordProduct::RightHalfBefore,
                WordProduct::LeftHalfAfter,
                WordProduct::LeftHalfBefore,
            ],
        }
    }
}

impl fmt::Display for SubpathSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SubpathSide::Left => "left",
            SubpathSide::Right => "right",
            SubpathSide::TwoSided => "two-sided",
        };
        write!(f, "{s}")
    }
}

impl FromStr for SubpathSide {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(SubpathSide::Left),
            "right" => Ok(SubpathSide::Right),
            "two-sided" | "two_sided" | "both" => Ok(SubpathSide::TwoSided),
            other => Err(Error::Invalid(format!("unknown side {other:?}"))),
        }
    }
}

/// A bounded-rank condition on subpath coordinates: the span of
/// `(⟨σ(Y), x_1⟩, …, ⟨σ(Y), x_n⟩)` over subpaths `Y` has dimension at
/// most `bound`.
#[derive(Clone, PartialEq, Debug)]
pub struct RankSpec {
    pub tensors: Vec<FreeTensor>,
    pub bound: usize,
    pub side: SubpathSide,
    pub level: usize,
    pub column_budget: usize,
}

/// An operator context: a hole wrapped by successive halfshuffle products
/// with word cofactors. Contexts are universal — the same context applies
/// to every tensor of a rank spec.
#[derive(Clone, Debug)]
struct Context(Vec<(WordProduct, Word)>);

impl Context {
    fn apply(&self, x: &FreeTensor, cache: &mut ProductCache) -> FreeTensor {
        let mut acc = x.clone();
        for (op, w) in &self.0 {
            acc = cache.tensor_word(&acc, w, *op);
        }
        acc
    }
}

/// Contexts in canonical order: by total added degree, then by the
/// recursive generation order (inner degree ascending, operator, word).
/// Truncated to at most `max_count` contexts of added degree at most
/// `max_degree`.
fn enumerate_contexts(
    alphabet_size: usize,
    side: SubpathSide,
    max_degree: usize,
    max_count: usize,
) -> Vec<Context> {
    let mut by_degree: Vec<Vec<Context>> = vec![vec![Context(Vec::new())]];
    let mut out = vec![Context(Vec::new())];
    for m in 1..=max_degree {
        if out.len() >= max_count {
            break;
        }
        let mut level = Vec::new();
        for inner in 0..m {
            for ctx in &by_degree[inner] {
                for &op in side.products() {
                    for w in words_of_degree(alphabet_size, m - inner) {
                        let mut ops = ctx.0.clone();
                        ops.push((op, w));
                        level.push(Context(ops));
                    }
                }
            }
        }
        out.extend(level.iter().cloned());
        by_degree.push(level);
    }
    out.truncate(max_count);
    out
}

/// Evaluates the minor condition of a rank spec against a path: builds
/// the matrix `⟨σ(X), context_l(x_i)⟩` over the canonical contexts and
/// checks `rank ≤ bound` exactly. Passing certifies the condition up to
/// the level and column budget; failing refutes it outright.
pub fn rank_test(path: &PiecewisePolyPath, spec: &RankSpec) -> Result<bool> {
    if spec.tensors.is_empty() {
        return Err(Error::Invalid("rank spec needs at least one tensor".into()));
    }
    let mut max_deg = 0;
    for t in &spec.tensors {
        if t.alphabet_size() != path.dimension() {
            return Err(Error::AlphabetMismatch(t.alphabet_size(), path.dimension()));
        }
        if t.is_zero() {
            return Err(Error::ZeroGenerator);
        }
        if !t.in_augmentation() {
            return Err(Error::EmptyWordTerm);
        }
        max_deg = max_deg.max(t.max_degree());
    }
    if spec.level < max_deg {
        return Err(Error::LevelTooSmall {
            level: spec.level,
            required: max_deg,
        });
    }
    if spec.column_budget == 0 {
        return Err(Error::Invalid("column budget must be positive".into()));
    }
    if spec.bound >= spec.tensors.len() {
        return Ok(true);
    }
    let sig = signature(path, spec.level);
    let contexts = enumerate_contexts(
        path.dimension(),
        spec.side,
        spec.level - max_deg,
        spec.column_budget,
    );
    let mut cache = ProductCache::new();
    let mut rows: Vec<Vec<Coeff>> = vec![Vec::with_capacity(contexts.len()); spec.tensors.len()];
    for ctx in &contexts {
        for (i, x) in spec.tensors.iter().enumerate() {
            let image = ctx.apply(x, &mut cache);
            rows[i].push(pair(&sig, &image)?);
        }
    }
    Ok(rank(rows) <= spec.bound)
}

/// Does the path stay inside some `m`-dimensional linear subspace?
/// Letters as coordinates, bound `m`.
pub fn subspace_test(
    path: &PiecewisePolyPath,
    m: usize,
    level: usize,
    column_budget: usize,
) -> Result<bool> {
    let d = path.dimension();
    let tensors = (1..=d as u16)
        .map(|i| FreeTensor::letter(d, i))
        .collect::<Result<_>>()?;
    rank_test(
        path,
        &RankSpec {
            tensors,
            bound: m,
            side: SubpathSide::Left,
            level,
            column_budget,
        },
    )
}

/// Does the path stay inside some algebraic hypersurface of degree at
/// most `m`? Shuffle monomials as coordinates, bound one less than their
/// count.
pub fn hypersurface_test(
    path: &PiecewisePolyPath,
    m: usize,
    level: usize,
    column_budget: usize,
) -> Result<bool> {
    let d = path.dimension();
    let mut tensors = Vec::new();
    for exps in monomial_exponents(d, m) {
        let p = MultiPoly::from_terms(d, [(exps, Coeff::one())])?;
        tensors.push(crate::ideals::phi(&p)?);
    }
    let bound = tensors.len() - 1;
    rank_test(
        path,
        &RankSpec {
            tensors,
            bound,
            side: SubpathSide::Left,
            level,
            column_budget,
        },
    )
}

/// All exponent vectors with total degree between 1 and `m`, graded then
/// lexicographic.
fn monomial_exponents(vars: usize, m: usize) -> Vec<Vec<u32>> {
    fn go(vars: usize, total: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if acc.len() == vars - 1 {
            let mut e = acc.clone();
            e.push(total);
            out.push(e);
            return;
        }
        for k in (0..=total).rev() {
            acc.push(k);
            go(vars, total - k, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    for total in 1..=m as u32 {
        go(vars, total, &mut Vec::new(), &mut out);
    }
    out
}

/// Does the path stay on some sphere (any center and radius) or inside a
/// hyperplane? Letters plus the squared-norm tensor, bound `d`.
pub fn sphere_or_hyperplane_test(
    path: &PiecewisePolyPath,
    level: usize,
    column_budget: usize,
) -> Result<bool> {
    let d = path.dimension();
    let mut tensors: Vec<FreeTensor> = (1..=d as u16)
        .map(|i| FreeTensor::letter(d, i))
        .collect::<Result<_>>()?;
    let mut norm = FreeTensor::zero(d);
    for i in 1..=d as u16 {
        let ii = Word::from_letters(&[i, i])?;
        norm.add_term(ii, Coeff::one());
    }
    tensors.push(norm);
    rank_test(
        path,
        &RankSpec {
            tensors,
            bound: d,
            side: SubpathSide::Left,
            level,
            column_budget,
        },
    )
}

fn bracket_gadget(bracket: &Bracket, scale: &Coeff, dimension: usize) -> PiecewisePolyPath {
    match bracket {
        Bracket::Leaf(i) => {
            let mut increment = vec![Coeff::zero(); dimension];
            increment[*i as usize - 1] = scale.clone();
            PiecewisePolyPath::linear(&increment)
        }
        Bracket::Node(u, v) => {
            // The group commutator of the two sub-gadgets: its
            // log-signature vanishes below the bracket degree and equals
            // the bracket there. The scale rides on the first leaf.
            let gu = bracket_gadget(u, scale, dimension);
            let gv = bracket_gadget(v, &Coeff::one(), dimension);
            gu.concat(&gv)
                .and_then(|p| p.concat(&gu.reverse()))
                .and_then(|p| p.concat(&gv.reverse()))
                .expect("dimensions agree")
        }
    }
}

/// Builds a piecewise-linear path whose truncated log-signature equals
/// the given Lie element exactly.
///
/// Level by level: the degree-one part is a straight segment; for each
/// higher degree the defect against the current log-signature is expanded
/// in the Lyndon bracket basis and one commutator gadget per bracket is
/// appended. Each gadget's log-signature vanishes below its degree, so
/// settled levels stay settled.
pub fn realize_log_signature(l: &TruncatedSeries) -> Result<PiecewisePolyPath> {
    if !is_lie(l) {
        return Err(Error::NotLie);
    }
    let d = l.alphabet_size();
    let level = l.level();
    let increment: Vec<Coeff> = (1..=d as u16)
        .map(|i| l.coeff(&Word::letter(i)))
        .collect();
    let mut path = PiecewisePolyPath::linear(&increment);
    for k in 2..=level {
        let current = log_conc(&signature(&path, level))?;
        let mut defect = l.homogeneous_part(k);
        defect.add_scaled(&current.homogeneous_part(k), &-Coeff::one());
        if defect.is_zero() {
            continue;
        }
        for (lyndon_word, c) in lie_coordinates(&defect, k)? {
            let bracket = standard_bracketing(&lyndon_word)?;
            let gadget = bracket_gadget(&bracket, &c, d);
            path = path.concat(&gadget)?;
        }
    }
    debug_assert_eq!(log_conc(&signature(&path, level)).expect("grouplike"), *l);
    Ok(path)
}

/// The signature of a straight path as a polynomial in its increment:
/// a word of degree `n` reads off the product of its coordinates over
/// `n!`, extended linearly.
pub fn linear_signature_polynomial(x: &FreeTensor) -> MultiPoly {
    let d = x.alphabet_size();
    let mut out = MultiPoly::zero(d);
    for (w, c) in x.terms() {
        let mut exps = vec![0u32; d];
        for &l in w.letters() {
            exps[l as usize - 1] += 1;
        }
        out.add_term(exps, c / factorial(w.degree()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::PolySegment;
    use crate::poly::Poly;
    use crate::series::exp_conc;
    use crate::{qi, qr, sample};
    use rand::SeedableRng;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn t(d: usize, spec: &[(&str, i64)]) -> FreeTensor {
        FreeTensor::from_terms(d, spec.iter().map(|(s, c)| (w(s), qi(*c)))).unwrap()
    }

    fn parabola() -> PiecewisePolyPath {
        PiecewisePolyPath::new(
            2,
            vec![PolySegment::new(vec![
                Poly::from_coeffs(vec![qi(0), qi(1)]),
                Poly::from_coeffs(vec![qi(0), qi(0), qi(1)]),
            ])],
        )
        .unwrap()
    }

    fn square_loop() -> PiecewisePolyPath {
        PiecewisePolyPath::piecewise_linear(
            2,
            &[
                vec![qi(1), qi(0)],
                vec![qi(0), qi(1)],
                vec![qi(-1), qi(0)],
                vec![qi(0), qi(-1)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn constant_path_is_in_augmented_varieties() {
        let spec = VarietySpec::new(2, vec![t(2, &[("12", 1)])], ClosureType::RightHalf, 4);
        assert!(in_variety(&PiecewisePolyPath::constant(2), &spec).unwrap());
    }

    #[test]
    fn parabola_variety_membership() {
        // φ(y − x²) = 2 − 2·11 at a modest level.
        let gen = t(2, &[("2", 1), ("11", -2)]);
        let spec = VarietySpec::new(2, vec![gen], ClosureType::RightHalf, 4);
        assert!(in_variety(&parabola(), &spec).unwrap());

        // The straight chord with the same increment leaves the parabola.
        let chord = PiecewisePolyPath::linear(&[qi(1), qi(1)]);
        assert!(!in_variety(&chord, &spec).unwrap());
    }

    #[test]
    fn loop_variety_membership() {
        let sq = square_loop();
        assert!(in_variety(&sq, &loops_variety(2, 1)).unwrap());
        assert!(!in_variety(&PiecewisePolyPath::linear(&[qi(1), qi(0)]), &loops_variety(2, 1))
            .unwrap());
        // The square loop has area, so it is not a second-order loop.
        assert!(!in_variety(&sq, &loops_variety(2, 2)).unwrap());
        // Levels above the order only add redundant constraints.
        assert!(in_variety(&sq, &loops_variety(2, 1).at_level(3)).unwrap());
    }

    #[test]
    fn increment_variety_membership() {
        // p(x, y) = x: first increment vanishes.
        let p = PolynomialMap::new(vec![MultiPoly::variable(2, 1).unwrap()]).unwrap();
        let spec = increments_variety(&p).unwrap();
        assert!(in_variety(&PiecewisePolyPath::linear(&[qi(0), qi(1)]), &spec).unwrap());
        assert!(!in_variety(&PiecewisePolyPath::linear(&[qi(1), qi(1)]), &spec).unwrap());

        // p(x, y) = x² + y² − 1: unit circle condition on the increment.
        let xx = MultiPoly::variable(2, 1).unwrap();
        let yy = MultiPoly::variable(2, 2).unwrap();
        let circle = xx
            .mul(&xx)
            .add(&yy.mul(&yy))
            .add(&MultiPoly::constant(2, qi(-1)));
        let spec = increments_variety(&PolynomialMap::new(vec![circle]).unwrap()).unwrap();
        assert!(in_variety(&PiecewisePolyPath::linear(&[qi(1), qi(0)]), &spec).unwrap());
        assert!(!in_variety(&PiecewisePolyPath::linear(&[qi(1), qi(1)]), &spec).unwrap());
    }

    #[test]
    fn rank_bound_at_tensor_count_is_trivial() {
        let path = sample::random_pl_path(&mut rand_chacha::ChaCha8Rng::seed_from_u64(1), 2, 3);
        let spec = RankSpec {
            tensors: vec![t(2, &[("1", 1)]), t(2, &[("2", 1)])],
            bound: 2,
            side: SubpathSide::Left,
            level: 3,
            column_budget: 10,
        };
        assert!(rank_test(&path, &spec).unwrap());
    }

    #[test]
    fn plane_path_passes_subspace_test() {
        // Increments span the x + y + z = 0 plane.
        let path = PiecewisePolyPath::piecewise_linear(
            3,
            &[vec![qi(1), qi(0), qi(-1)], vec![qi(0), qi(1), qi(-1)]],
        )
        .unwrap();
        assert!(subspace_test(&path, 2, 3, 30).unwrap());

        // A generic three-segment path needs all three dimensions.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let generic = sample::random_pl_path(&mut rng, 3, 3);
        assert!(!subspace_test(&generic, 2, 3, 30).unwrap());
    }

    #[test]
    fn parabola_passes_hypersurface_test() {
        assert!(hypersurface_test(&parabola(), 2, 4, 30).unwrap());
    }

    #[test]
    fn line_lies_in_a_hyperplane() {
        let line = PiecewisePolyPath::linear(&[qi(1), qi(2)]);
        assert!(sphere_or_hyperplane_test(&line, 3, 20).unwrap());
    }

    #[test]
    fn rank_failures_persist_at_higher_budgets() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let generic = sample::random_pl_path(&mut rng, 3, 3);
        assert!(!subspace_test(&generic, 2, 3, 30).unwrap());
        assert!(!subspace_test(&generic, 2, 4, 60).unwrap());
    }

    #[test]
    fn realize_linear_element() {
        let l = TruncatedSeries::from_terms(2, 1, [(w("1"), qi(3))]).unwrap();
        let path = realize_log_signature(&l).unwrap();
        assert_eq!(path.segments().len(), 1);
        assert_eq!(path.increment(), vec![qi(3), qi(0)]);
    }

    #[test]
    fn realize_area_element_is_a_commutator_loop() {
        let l =
            TruncatedSeries::from_terms(2, 2, [(w("12"), qi(1)), (w("21"), qi(-1))]).unwrap();
        let path = realize_log_signature(&l).unwrap();
        assert_eq!(path.segments().len(), 4);
        let log = log_conc(&signature(&path, 2)).unwrap();
        assert_eq!(log, l);
        assert_eq!(path.increment(), vec![qi(0), qi(0)]);
    }

    #[test]
    fn realize_roundtrips_random_lie_elements() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for case in 0..10 {
            let level = 2 + case % 2;
            let l = sample::random_lie_series(&mut rng, 2, level);
            let path = realize_log_signature(&l).unwrap();
            assert_eq!(log_conc(&signature(&path, level)).unwrap(), l, "case {case}");
        }
    }

    #[test]
    fn realize_rejects_non_lie_input() {
        let bad = TruncatedSeries::from_terms(2, 2, [(w("12"), qi(1))]).unwrap();
        assert_eq!(realize_log_signature(&bad).unwrap_err(), Error::NotLie);
    }

    #[test]
    fn linear_signature_polynomial_examples() {
        let p = linear_signature_polynomial(&t(2, &[("1", 1)]));
        assert_eq!(p, MultiPoly::from_terms(2, [(vec![1, 0], qi(1))]).unwrap());

        let p = linear_signature_polynomial(&t(2, &[("12", 1)]));
        assert_eq!(p, MultiPoly::from_terms(2, [(vec![1, 1], qr(1, 2))]).unwrap());

        let p = linear_signature_polynomial(&t(2, &[("11", 1)]));
        assert_eq!(p, MultiPoly::from_terms(2, [(vec![2, 0], qr(1, 2))]).unwrap());

        // Cross-check: pairing the signature of a straight path equals
        // evaluating the polynomial at the increment.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..10 {
            let x = sample::random_tensor(&mut rng, 2, 3, 4);
            let inc = vec![
                sample::random_rational(&mut rng, 3, 2),
                sample::random_rational(&mut rng, 3, 2),
            ];
            let path = PiecewisePolyPath::linear(&inc);
            let sig = signature(&path, 3);
            let lhs = pair(&sig, &x).unwrap();
            let rhs = linear_signature_polynomial(&x).eval_point(&inc).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn exp_of_realized_log_matches_signature() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(37);
        let l = sample::random_lie_series(&mut rng, 2, 3);
        let path = realize_log_signature(&l).unwrap();
        assert_eq!(signature(&path, 3), exp_conc(&l).unwrap());
    }
}
