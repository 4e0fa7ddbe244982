//! The free associative algebra k⟨x₁,…,xₘ⟩ and its order-symmetric
//! polynomials.
//!
//! Generators are stored 0-based (`x₁` is letter `0`) and printed/serialized
//! 1-based. Words are ordered by length first, then lexicographically, which
//! gives every polynomial and every word-coordinate space a canonical order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::scalar::{Field, FieldError, Scalar};
use crate::subspace::{SpaceError, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("generator count mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("letter {letter} out of range for {m} generators")]
    LetterOutOfRange { letter: usize, m: usize },
    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },
    #[error("sample value {0} repeated")]
    RepeatedSample(Scalar),
    #[error("word {0} is not a coordinate of this word basis")]
    NotInBasis(Word),
    #[error("at least one generator is required")]
    NoGenerators,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// A noncommutative monomial. The empty word is the monomial 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<u32>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from 1-based generator indices.
    pub fn from_one_based(letters: &[usize]) -> Self {
        Word(letters.iter().map(|&l| (l - 1) as u32).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn multidegree(&self, m: usize) -> MultiDegree {
        let mut e = vec![0usize; m];
        for &l in &self.0 {
            e[l as usize] += 1;
        }
        MultiDegree(e)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for l in &self.0 {
            write!(f, "x{}", l + 1)?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let one_based: Vec<u32> = self.0.iter().map(|l| l + 1).collect();
        one_based.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<u32>::deserialize(d)?;
        if v.contains(&0) {
            return Err(D::Error::custom("generator indices are 1-based"));
        }
        Ok(Word(v.into_iter().map(|l| l - 1).collect()))
    }
}

/// An exponent profile (i₁,…,iₘ).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiDegree(pub Vec<usize>);

impl MultiDegree {
    pub fn new(exponents: Vec<usize>) -> Self {
        MultiDegree(exponents)
    }

    pub fn zero(m: usize) -> Self {
        MultiDegree(vec![0; m])
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[usize] {
        &self.0
    }

    /// `self − e_j`, or `None` when the j-th exponent is already zero.
    pub fn lower(&self, j: usize) -> Option<MultiDegree> {
        if self.0[j] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[j] -= 1;
        Some(MultiDegree(e))
    }

    /// Weighted degree Σ_j w(j)·i_j.
    pub fn weighted(&self, weight: impl Fn(usize) -> usize) -> usize {
        self.0.iter().enumerate().map(|(j, &i)| weight(j) * i).sum()
    }

    /// All multidegrees with `m` entries and total `n`, largest first exponent first.
    pub fn all_of_total(m: usize, n: usize) -> Vec<MultiDegree> {
        let mut out = Vec::new();
        if m == 0 {
            if n == 0 {
                out.push(MultiDegree(Vec::new()));
            }
            return out;
        }
        let mut cur = vec![0usize; m];
        fn rec(cur: &mut Vec<usize>, pos: usize, left: usize, out: &mut Vec<MultiDegree>) {
            if pos + 1 == cur.len() {
                cur[pos] = left;
                out.push(MultiDegree(cur.clone()));
                return;
            }
            for take in (0..=left).rev() {
                cur[pos] = take;
                rec(cur, pos + 1, left - take, out);
            }
        }
        rec(&mut cur, 0, n, &mut out);
        out
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Iterator over the distinct permutations of a multiset of letters, in
/// lexicographic order, by repeated next-permutation.
pub struct MultisetPermutations {
    current: Vec<u32>,
    done: bool,
}

impl MultisetPermutations {
    pub fn new(md: &MultiDegree) -> Self {
        let mut current = Vec::with_capacity(md.total());
        for (j, &i) in md.0.iter().enumerate() {
            current.extend(std::iter::repeat_n(j as u32, i));
        }
        MultisetPermutations {
            current,
            done: false,
        }
    }
}

fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl Iterator for MultisetPermutations {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        let out = Word(self.current.clone());
        if !next_permutation(&mut self.current) {
            self.done = true;
        }
        Some(out)
    }
}

/// Binomial coefficient C(n, k); zero when k > n.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// The multinomial (i₁+…+iₘ)!/(i₁!⋯iₘ!), the number of words of
/// multidegree `md`.
pub fn monomial_count(md: &MultiDegree) -> u128 {
    let mut total = 0u64;
    let mut acc: u128 = 1;
    for &i in &md.0 {
        total += i as u64;
        acc = acc
            .checked_mul(binomial(total, i as u64))
            .expect("multinomial overflows u128");
    }
    acc
}

/// A sparse polynomial in k⟨x₁,…,xₘ⟩. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreePoly {
    field: Field,
    m: usize,
    terms: BTreeMap<Word, Scalar>,
}

impl FreePoly {
    pub fn zero(field: Field, m: usize) -> Self {
        FreePoly {
            field,
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: Field, m: usize) -> Self {
        Self::monomial(field, m, Word::empty(), field.one())
    }

    /// The single generator x_{j+1} (0-based `j`).
    pub fn generator(field: Field, m: usize, j: usize) -> Self {
        Self::monomial(field, m, Word(vec![j as u32]), field.one())
    }

    pub fn monomial(field: Field, m: usize, w: Word, c: Scalar) -> Self {
        let mut p = Self::zero(field, m);
        p.add_term(w, c);
        p
    }

    /// Builds a polynomial from `(word, coefficient)` pairs, merging repeats.
    pub fn from_terms(
        field: Field,
        m: usize,
        terms: impl IntoIterator<Item = (Word, Scalar)>,
    ) -> Result<Self, PolyError> {
        let mut p = Self::zero(field, m);
        for (w, c) in terms {
            if let Some(&l) = w.0.iter().find(|&&l| l as usize >= m) {
                return Err(PolyError::LetterOutOfRange {
                    letter: l as usize + 1,
                    m,
                });
            }
            if c.field() != field {
                return Err(PolyError::FieldMismatch(field, c.field()));
            }
            p.add_term(w, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn arity(&self) -> usize {
        self.m
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

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms
            .get(w)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Terms in canonical word order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    /// The set of word lengths present.
    pub fn degrees(&self) -> BTreeSet<usize> {
        self.terms.keys().map(Word::len).collect()
    }

    fn compatible(&self, other: &FreePoly) -> Result<(), PolyError> {
        if self.field != other.field {
            return Err(PolyError::FieldMismatch(self.field, other.field));
        }
        if self.m != other.m {
            return Err(PolyError::ArityMismatch(self.m, other.m));
        }
        Ok(())
    }

    pub fn add(&self, other: &FreePoly) -> Result<FreePoly, PolyError> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &FreePoly) -> Result<FreePoly, PolyError> {
        self.add(&other.scale(&self.field.from_i64(-1))?)
    }

    /// Product; words multiply by concatenation.
    pub fn mul(&self, other: &FreePoly) -> Result<FreePoly, PolyError> {
        self.compatible(other)?;
        let mut out = Self::zero(self.field, self.m);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1.mul(c2));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Result<FreePoly, PolyError> {
        if c.field() != self.field {
            return Err(PolyError::FieldMismatch(self.field, c.field()));
        }
        let mut out = Self::zero(self.field, self.m);
        for (w, a) in &self.terms {
            out.add_term(w.clone(), a.mul(c));
        }
        Ok(out)
    }

    pub fn pow(&self, n: usize) -> Result<FreePoly, PolyError> {
        let mut acc = Self::one(self.field, self.m);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Serialized as a list of `[word, scalar]` pairs in canonical order.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(w, c)| serde_json::json!([w, c.to_json()]))
                .collect(),
        )
    }
}

impl fmt::Display for FreePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{c}·{w}")?;
            }
        }
        Ok(())
    }
}

/// The order-symmetric polynomial of multidegree `md`: the sum, coefficient
/// one each, of every word with exactly `md[j]` occurrences of x_{j+1}.
pub fn sym_poly(md: &MultiDegree, field: Field) -> FreePoly {
    let one = field.one();
    let terms = MultisetPermutations::new(md)
        .map(|w| (w, one.clone()))
        .collect();
    FreePoly {
        field,
        m: md.arity(),
        terms,
    }
}

/// Expands (α₁x₁+…+αₘxₘ)ⁿ by repeated multiplication.
pub fn linear_power(coeffs: &[Scalar], n: usize) -> Result<FreePoly, PolyError> {
    let m = coeffs.len();
    let field = coeffs.first().ok_or(PolyError::NoGenerators)?.field();
    let f = FreePoly::from_terms(
        field,
        m,
        coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| (Word(vec![j as u32]), c.clone())),
    )?;
    f.pow(n)
}

/// An ordered list of words used as coordinates of a finite-dimensional slice
/// of the free algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordBasis {
    m: usize,
    words: Vec<Word>,
    index: HashMap<Word, usize>,
}

impl WordBasis {
    /// All words whose length lies in `degrees`, in canonical order.
    pub fn of_degrees(m: usize, degrees: impl IntoIterator<Item = usize>) -> Self {
        let mut lens: Vec<usize> = degrees.into_iter().collect();
        lens.sort_unstable();
        lens.dedup();
        let mut words = Vec::new();
        for n in lens {
            let count = m.pow(n as u32);
            for k in 0..count {
                // Base-m digits of k, most significant first, are the letters.
                let mut letters = vec![0u32; n];
                let mut rest = k;
                for slot in letters.iter_mut().rev() {
                    *slot = (rest % m) as u32;
                    rest /= m;
                }
                words.push(Word(letters));
            }
        }
        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        WordBasis { m, words, index }
    }

    pub fn degree(m: usize, n: usize) -> Self {
        Self::of_degrees(m, [n])
    }

    pub fn dim(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn position(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Coordinates of `p` in this basis.
    pub fn coords(&self, p: &FreePoly) -> Result<Vec<Scalar>, PolyError> {
        if p.arity() != self.m {
            return Err(PolyError::ArityMismatch(self.m, p.arity()));
        }
        let mut v = vec![p.field().zero(); self.dim()];
        for (w, c) in p.terms() {
            let i = self
                .position(w)
                .ok_or_else(|| PolyError::NotInBasis(w.clone()))?;
            v[i] = c.clone();
        }
        Ok(v)
    }
}

/// Pₙ(x₁,…,xₘ) in the coordinates `WordBasis::degree(m, n)`.
pub fn span_p(n: usize, m: usize, field: Field) -> Result<Subspace, PolyError> {
    let basis = WordBasis::degree(m, n);
    span_p_in(&basis, n, m, field)
}

fn span_p_in(basis: &WordBasis, n: usize, m: usize, field: Field) -> Result<Subspace, PolyError> {
    let vectors = MultiDegree::all_of_total(m, n)
        .iter()
        .map(|md| basis.coords(&sym_poly(md, field)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Subspace::span(field, basis.dim(), vectors)?)
}

/// Sum of Pⱼ for j in `lo..=hi`, inside the coordinates of all words of length
/// `0..=hi`. With `include_degree_zero` the constant polynomial 1 joins the
/// span even when `lo > 0`.
pub fn span_p_between(
    lo: usize,
    hi: usize,
    m: usize,
    field: Field,
    include_degree_zero: bool,
) -> Result<Subspace, PolyError> {
    let basis = WordBasis::of_degrees(m, 0..=hi);
    let mut space = Subspace::zero(field, basis.dim());
    let start = if include_degree_zero { 0 } else { lo.max(1) };
    for n in start..=hi {
        if n > 0 && n < lo {
            continue;
        }
        space = space.sum(&span_p_in(&basis, n, m, field)?)?;
    }
    Ok(space)
}

/// P_{≤r}(x₁,…,xₘ). Degree zero is excluded unless requested.
pub fn span_p_le(
    r: usize,
    m: usize,
    field: Field,
    include_degree_zero: bool,
) -> Result<Subspace, PolyError> {
    span_p_between(1, r, m, field, include_degree_zero)
}

/// Span of the expanded powers over a Cartesian grid of coefficients.
#[derive(Debug, Clone)]
pub struct GridSpan {
    pub space: Subspace,
    /// `true` when the sample has at least n+1 values, so the span is
    /// guaranteed to be all of Pₙ.
    pub complete: bool,
    pub grid_points: usize,
}

/// Span of (α₁x₁+…+αₘxₘ)ⁿ over all α⃗ in `sample`ᵐ, in the coordinates
/// `WordBasis::degree(m, n)`.
pub fn span_powers_grid(n: usize, m: usize, sample: &[Scalar]) -> Result<GridSpan, PolyError> {
    if m == 0 {
        return Err(PolyError::NoGenerators);
    }
    let field = sample.first().ok_or(PolyError::NoGenerators)?.field();
    for (i, a) in sample.iter().enumerate() {
        if a.field() != field {
            return Err(PolyError::FieldMismatch(field, a.field()));
        }
        if sample[..i].contains(a) {
            return Err(PolyError::RepeatedSample(a.clone()));
        }
    }
    let basis = WordBasis::degree(m, n);
    let mut vectors = Vec::new();
    for point in grid(sample, m) {
        vectors.push(basis.coords(&linear_power(&point, n)?)?);
    }
    let grid_points = vectors.len();
    Ok(GridSpan {
        space: Subspace::span(field, basis.dim(), vectors)?,
        complete: sample.len() > n,
        grid_points,
    })
}

/// The Cartesian power `sample`ᵐ, last coordinate fastest.
pub fn grid(sample: &[Scalar], m: usize) -> Vec<Vec<Scalar>> {
    let mut out: Vec<Vec<Scalar>> = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                sample.iter().map(move |s| {
                    let mut v = prefix.clone();
                    v.push(s.clone());
                    v
                })
            })
            .collect();
    }
    out
}
