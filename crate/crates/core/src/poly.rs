//! Dense univariate and sparse multivariate polynomials over the
//! rationals. The univariate kind parameterizes path segments on [0, 1];
//! the multivariate kind models polynomial maps between path spaces.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::Coeff;

/// Univariate polynomial, dense ascending coefficients, no trailing
/// zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly(Vec<Coeff>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: Coeff) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(Coeff::one())
    }

    /// `c · t`
    pub fn linear(c: Coeff) -> Self {
        Poly::from_coeffs(vec![Coeff::zero(), c])
    }

    pub fn from_coeffs(mut coeffs: Vec<Coeff>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn coeffs(&self) -> &[Coeff] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn eval(&self, t: &Coeff) -> Coeff {
        let mut acc = Coeff::zero();
        for c in self.0.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn eval_zero(&self) -> Coeff {
        self.0.first().cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn eval_one(&self) -> Coeff {
        self.0.iter().fold(Coeff::zero(), |acc, c| acc + c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.0.get(i).cloned().unwrap_or_else(Coeff::zero);
            let b = other.0.get(i).cloned().unwrap_or_else(Coeff::zero);
            out.push(a + b);
        }
        Poly::from_coeffs(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scaled(&-Coeff::one()))
    }

    pub fn scaled(&self, c: &Coeff) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(self.0.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Coeff::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly::zero();
        }
        Poly::from_coeffs(
            self.0[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * Coeff::from_integer((i as i64 + 1).into()))
                .collect(),
        )
    }

    /// The antiderivative vanishing at zero.
    pub fn integral(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut out = Vec::with_capacity(self.0.len() + 1);
        out.push(Coeff::zero());
        for (i, c) in self.0.iter().enumerate() {
            out.push(c / Coeff::from_integer((i as i64 + 1).into()));
        }
        Poly::from_coeffs(out)
    }

    /// Substitutes `t ↦ a + b·t`.
    pub fn compose_affine(&self, a: &Coeff, b: &Coeff) -> Poly {
        // Horner on the affine argument.
        let arg = Poly::from_coeffs(vec![a.clone(), b.clone()]);
        let mut acc = Poly::zero();
        for c in self.0.iter().rev() {
            acc = acc.mul(&arg).add(&Poly::constant(c.clone()));
        }
        acc
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}·t"),
                _ => format!("{c}·t^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Sparse multivariate polynomial: exponent vectors of fixed arity mapped
/// to nonzero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: usize,
    terms: BTreeMap<Vec<u32>, Coeff>,
}

impl MultiPoly {
    pub fn zero(vars: usize) -> Self {
        MultiPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: Coeff) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars], c);
        p
    }

    /// The variable `x_i` (1-based).
    pub fn variable(vars: usize, i: usize) -> Result<Self> {
        if i == 0 || i > vars {
            return Err(Error::Invalid(format!("variable x_{i} out of range 1..={vars}")));
        }
        let mut exps = vec![0; vars];
        exps[i - 1] = 1;
        let mut p = Self::zero(vars);
        p.add_term(exps, Coeff::one());
        Ok(p)
    }

    pub fn from_terms<I>(vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Coeff)>,
    {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            if e.len() != vars {
                return Err(Error::DimensionMismatch(vars, e.len()));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Coeff) {
        debug_assert_eq!(exps.len(), self.vars);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
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

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Coeff)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn constant_term(&self) -> Coeff {
        self.terms
            .get(&vec![0; self.vars])
            .cloned()
            .unwrap_or_else(Coeff::zero)
    }

    /// Same polynomial with the constant term removed.
    pub fn without_constant(&self) -> MultiPoly {
        let mut p = self.clone();
        p.terms.remove(&vec![0; self.vars]);
        p
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scaled(&self, c: &Coeff) -> MultiPoly {
        let mut out = MultiPoly::zero(self.vars);
        if c.is_zero() {
            return out;
        }
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a * c);
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn eval_point(&self, point: &[Coeff]) -> Result<Coeff> {
        if point.len() != self.vars {
            return Err(Error::DimensionMismatch(self.vars, point.len()));
        }
        let mut acc = Coeff::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    m = m * x;
                }
            }
            acc += m;
        }
        Ok(acc)
    }

    /// Substitutes univariate polynomials for the variables.
    pub fn eval_polys(&self, args: &[Poly]) -> Result<Poly> {
        if args.len() != self.vars {
            return Err(Error::DimensionMismatch(self.vars, args.len()));
        }
        let mut acc = Poly::zero();
        for (e, c) in &self.terms {
            let mut m = Poly::constant(c.clone());
            for (p, &k) in args.iter().zip(e) {
                if k > 0 {
                    m = m.mul(&p.pow(k));
                }
            }
            acc = acc.add(&m);
        }
        Ok(acc)
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let vars: String = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| {
                        if k == 1 {
                            format!("x{}", i + 1)
                        } else {
                            format!("x{}^{}", i + 1, k)
                        }
                    })
                    .collect();
                if vars.is_empty() {
                    format!("{c}")
                } else {
                    format!("{c}·{vars}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A tuple of polynomials read as a map between coordinate spaces; the
/// arity is shared by all components.
#[derive(Clone, PartialEq, Debug)]
pub struct PolynomialMap {
    components: Vec<MultiPoly>,
}

impl PolynomialMap {
    pub fn new(components: Vec<MultiPoly>) -> Result<Self> {
        let vars = components
            .first()
            .map(|p| p.vars())
            .ok_or_else(|| Error::Invalid("polynomial map needs at least one component".into()))?;
        for p in &components {
            if p.vars() != vars {
                return Err(Error::DimensionMismatch(vars, p.vars()));
            }
        }
        Ok(PolynomialMap { components })
    }

    /// Input dimension.
    pub fn vars(&self) -> usize {
        self.components[0].vars()
    }

    /// Output dimension.
    pub fn arity_out(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    pub fn maps_zero_to_zero(&self) -> bool {
        self.components.iter().all(|p| p.constant_term().is_zero())
    }

    pub fn identity(vars: usize) -> Self {
        PolynomialMap {
            components: (1..=vars)
                .map(|i| MultiPoly::variable(vars, i).expect("in range"))
                .collect(),
        }
    }
}
