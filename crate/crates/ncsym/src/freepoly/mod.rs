//! Free noncommutative polynomials in `d` letters.
//!
//! Words are packed index sequences; terms are kept in a canonical
//! length-then-lexicographic order with no stored zero coefficients, so the
//! serialized form of a polynomial is deterministic.

mod parse;

pub use parse::parse_poly;

use crate::error::{Error, Result};
use crate::mat::CMatrix;
use crate::ncfun::GradedPoint;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt;

const COEFF_EPS: f64 = 1e-15;

/// A word in the free monoid on letters `0..d`; the empty word is the unit.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Exchange letters 0 and 1 in place (two-letter alphabets only).
    fn swapped(&self) -> Word {
        Word(self.0.iter().map(|&l| if l == 0 { 1 } else { 0 }).collect())
    }
}

// Canonical ordering: length first, then lexicographic.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let names: Vec<String> = self
            .0
            .iter()
            .map(|&l| match l {
                0 => "z".to_string(),
                1 => "w".to_string(),
                k => format!("x{k}"),
            })
            .collect();
        write!(f, "{}", names.join("*"))
    }
}

/// Complex-coefficient formal sum of words in `d` noncommuting letters.
#[derive(Clone, PartialEq, Debug)]
pub struct FreePoly {
    d: usize,
    terms: BTreeMap<Word, Complex64>,
}

impl FreePoly {
    pub fn zero(d: usize) -> Self {
        FreePoly { d, terms: BTreeMap::new() }
    }

    pub fn constant(d: usize, c: Complex64) -> Self {
        let mut p = FreePoly::zero(d);
        p.add_term(Word::empty(), c);
        p
    }

    pub fn one(d: usize) -> Self {
        FreePoly::constant(d, Complex64::new(1.0, 0.0))
    }

    /// The single letter `x_idx`.
    pub fn letter(d: usize, idx: u8) -> Self {
        assert!((idx as usize) < d, "letter index {idx} out of range for d={d}");
        let mut p = FreePoly::zero(d);
        p.add_term(Word(vec![idx]), Complex64::new(1.0, 0.0));
        p
    }

    pub fn from_terms(d: usize, terms: impl IntoIterator<Item = (Word, Complex64)>) -> Self {
        let mut p = FreePoly::zero(d);
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn letters(&self) -> usize {
        self.d
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Complex64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> Complex64 {
        self.terms.get(w).copied().unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    /// Degree of the polynomial; the zero polynomial has degree -1.
    pub fn degree(&self) -> i64 {
        self.terms.keys().map(|w| w.degree() as i64).max().unwrap_or(-1)
    }

    fn add_term(&mut self, w: Word, c: Complex64) {
        for &l in &w.0 {
            assert!((l as usize) < self.d, "word letter {l} out of range for d={}", self.d);
        }
        let entry = self.terms.entry(w.clone()).or_insert_with(|| Complex64::new(0.0, 0.0));
        *entry += c;
        if entry.norm() <= COEFF_EPS {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, other: &FreePoly) -> FreePoly {
        assert_eq!(self.d, other.d, "add: letter count mismatch");
        let mut p = self.clone();
        for (w, &c) in &other.terms {
            p.add_term(w.clone(), c);
        }
        p
    }

    pub fn sub(&self, other: &FreePoly) -> FreePoly {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> FreePoly {
        if c.norm() <= COEFF_EPS {
            return FreePoly::zero(self.d);
        }
        FreePoly {
            d: self.d,
            terms: self.terms.iter().map(|(w, &a)| (w.clone(), a * c)).collect(),
        }
    }

    /// Noncommutative product: words concatenate.
    pub fn mul(&self, other: &FreePoly) -> FreePoly {
        assert_eq!(self.d, other.d, "mul: letter count mismatch");
        let mut p = FreePoly::zero(self.d);
        for (wa, &ca) in &self.terms {
            for (wb, &cb) in &other.terms {
                p.add_term(wa.concat(wb), ca * cb);
            }
        }
        p
    }

    /// Evaluate on a graded point by substituting the point's components for
    /// the letters; the empty word contributes `coeff * I`.
    pub fn eval(&self, x: &GradedPoint) -> Result<CMatrix> {
        if x.arity() != self.d {
            return Err(Error::Arity { poly: self.d, point: x.arity() });
        }
        let n = x.level();
        let mut out = CMatrix::zeros(n, n);
        for (w, &c) in &self.terms {
            let mut prod = CMatrix::identity(n);
            for &l in &w.0 {
                prod = prod.mul(x.component(l as usize));
            }
            out = out.add(&prod.scale(c));
        }
        Ok(out)
    }

    /// Exchange the two letters in every word (two-letter polynomials only).
    /// This is an involution.
    pub fn swap(&self) -> Result<FreePoly> {
        if self.d != 2 {
            return Err(Error::NotTwoLetters(self.d));
        }
        Ok(FreePoly {
            d: 2,
            terms: self.terms.iter().map(|(w, &c)| (w.swapped(), c)).collect(),
        })
    }

    /// True iff the polynomial is fixed by the letter exchange.
    pub fn is_symmetric(&self) -> Result<bool> {
        let sw = self.swap()?;
        Ok(sw == *self)
    }
}

impl fmt::Display for FreePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff_is_one = (c - Complex64::new(1.0, 0.0)).norm() <= COEFF_EPS;
            if w.degree() == 0 {
                write!(f, "({},{})", c.re, c.im)?;
            } else if coeff_is_one {
                write!(f, "{w}")?;
            } else if c.im == 0.0 {
                write!(f, "{}*{w}", c.re)?;
            } else {
                write!(f, "({},{})*{w}", c.re, c.im)?;
            }
        }
        Ok(())
    }
}

/// One representative `w + swap(w)` per orbit of words of exactly the given
/// length under the letter exchange (two letters). No word is fixed by the
/// exchange, so each orbit has size two and there are `2^(k-1)` representatives
/// for length `k >= 1`; degree 0 yields the unit alone.
pub fn symmetric_word_basis(degree: usize) -> Vec<FreePoly> {
    if degree == 0 {
        return vec![FreePoly::one(2)];
    }
    let mut out = Vec::new();
    let count: u64 = 1 << degree;
    for bits in 0..count {
        let letters: Vec<u8> = (0..degree).map(|i| ((bits >> (degree - 1 - i)) & 1) as u8).collect();
        let w = Word(letters);
        let sw = w.swapped();
        if sw < w {
            continue; // orbit already emitted from its smaller representative
        }
        let mut p = FreePoly::zero(2);
        p.add_term(w.clone(), Complex64::new(1.0, 0.0));
        p.add_term(sw, Complex64::new(1.0, 0.0));
        out.push(p);
    }
    out
}

/// Outcome of [`expressibility`]: either an explicit decomposition of the
/// target as a linear combination of ordered generator products, or an
/// infeasibility certificate carrying the least-squares residual.
#[derive(Clone, Debug)]
pub enum Expressibility {
    Expressible(Decomposition),
    Infeasible { residual: f64 },
}

/// A linear combination of ordered products of generators.
#[derive(Clone, Debug)]
pub struct Decomposition {
    /// Each entry is (sequence of generator indices, coefficient); the empty
    /// sequence is the unit.
    pub products: Vec<(Vec<usize>, Complex64)>,
    pub residual: f64,
}

impl Decomposition {
    /// Rebuild the combination as a polynomial.
    pub fn to_poly(&self, generators: &[FreePoly]) -> FreePoly {
        let d = generators.first().map_or(2, |g| g.letters());
        let mut acc = FreePoly::zero(d);
        for (seq, c) in &self.products {
            let mut prod = FreePoly::one(d);
            for &gi in seq {
                prod = prod.mul(&generators[gi]);
            }
            acc = acc.add(&prod.scale(*c));
        }
        acc
    }

    /// Evaluate the combination directly on a graded point.
    pub fn eval(&self, generators: &[FreePoly], x: &GradedPoint) -> Result<CMatrix> {
        self.to_poly(generators).eval(x)
    }
}

const EXPRESS_RESIDUAL_TOL: f64 = 1e-9;

/// Decide whether `target` is a linear combination of ordered products of the
/// generators with total degree at most `degree_bound`.
///
/// All ordered products (including the empty product, the unit) are expanded
/// into word-coefficient vectors and the resulting linear system is solved by
/// least squares; a residual at most 1e-9 counts as an exact decomposition,
/// anything larger is returned as an infeasibility certificate.
pub fn expressibility(
    target: &FreePoly,
    generators: &[FreePoly],
    degree_bound: usize,
) -> Result<Expressibility> {
    let tdeg = target.degree().max(0) as usize;
    if degree_bound < tdeg {
        return Err(Error::DegreeBound { bound: degree_bound, degree: tdeg });
    }
    for g in generators {
        if g.degree() < 1 {
            return Err(Error::Invalid("expressibility: generators must have degree >= 1".into()));
        }
        if g.letters() != target.letters() {
            return Err(Error::Arity { poly: target.letters(), point: g.letters() });
        }
    }

    // Enumerate ordered index sequences with total generator degree <= bound.
    let degs: Vec<usize> = generators.iter().map(|g| g.degree() as usize).collect();
    let mut sequences: Vec<Vec<usize>> = vec![vec![]];
    let mut frontier: Vec<(Vec<usize>, usize)> = vec![(vec![], 0)];
    while let Some((seq, deg)) = frontier.pop() {
        for (gi, &gd) in degs.iter().enumerate() {
            if deg + gd <= degree_bound {
                let mut next = seq.clone();
                next.push(gi);
                sequences.push(next.clone());
                frontier.push((next, deg + gd));
            }
        }
    }
    sequences.sort();
    sequences.dedup();

    // Expand each product into a polynomial.
    let d = target.letters();
    let expanded: Vec<FreePoly> = sequences
        .iter()
        .map(|seq| {
            let mut prod = FreePoly::one(d);
            for &gi in seq {
                prod = prod.mul(&generators[gi]);
            }
            prod
        })
        .collect();

    // Word universe: all words appearing in the target or any product.
    let mut words: Vec<Word> = Vec::new();
    for p in expanded.iter().chain(std::iter::once(target)) {
        for (w, _) in p.terms() {
            words.push(w.clone());
        }
    }
    words.sort();
    words.dedup();
    let word_pos: BTreeMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();

    let mut a = CMatrix::zeros(words.len(), expanded.len());
    for (j, p) in expanded.iter().enumerate() {
        for (w, &c) in p.terms() {
            a[(word_pos[w], j)] = c;
        }
    }
    let mut b = CMatrix::zeros(words.len(), 1);
    for (w, &c) in target.terms() {
        b[(word_pos[w], 0)] = c;
    }

    let sol = crate::mat::lstsq(&a, &b, 1e-12);
    if sol.residual <= EXPRESS_RESIDUAL_TOL {
        let mut products = Vec::new();
        for (j, seq) in sequences.iter().enumerate() {
            let c = sol.x[(j, 0)];
            if c.norm() > 1e-11 {
                products.push((seq.clone(), c));
            }
        }
        Ok(Expressibility::Expressible(Decomposition { products, residual: sol.residual }))
    } else {
        Ok(Expressibility::Infeasible { residual: sol.residual })
    }
}
