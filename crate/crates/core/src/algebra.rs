//! Finite-dimensional associative algebras given by structure constants.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::free::FreePoly;
use crate::scalar::{Field, FieldError, Scalar};
use crate::subspace::{axpy, is_zero_vector, zero_vector, Vector};

/// Coordinates of an element in the algebra's basis.
pub type AlgElement = Vector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("algebra dimension must be positive")]
    EmptyBasis,
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("element has {got} coordinates, algebra has dimension {dim}")]
    WrongLength { got: usize, dim: usize },
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("product e{i}·e{j} given twice", i = .0 + 1, j = .1 + 1)]
    DuplicateProduct(usize, usize),
    #[error("duplicate basis name {0:?}")]
    DuplicateName(String),
    #[error("polynomial has {poly} generators but {given} elements were assigned")]
    AssignmentLength { poly: usize, given: usize },
    #[error("the constant term needs a unit, but the algebra has none")]
    NoUnit,
    #[error("invalid algebra: {0}")]
    Invalid(String),
    #[error("unknown basis element {0:?}")]
    UnknownName(String),
    #[error("cannot parse element {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A sparse vector: sorted `(index, nonzero coefficient)` pairs.
pub type SparseVector = Vec<(usize, Scalar)>;

fn to_sparse(v: &[Scalar]) -> SparseVector {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

/// Outcome of checking associativity and the unit laws on basis elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlgebraValidation {
    pub passed: bool,
    pub triples_checked: usize,
    /// First basis triple (1-based names) with (eᵢeⱼ)eₖ ≠ eᵢ(eⱼeₖ).
    pub associativity_failure: Option<[String; 3]>,
    /// First basis element where a declared unit fails to act as identity.
    pub unit_failure: Option<String>,
}

/// A finite-dimensional associative algebra over a field, stored as the
/// nonzero products of basis elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureAlgebra {
    field: Field,
    names: Vec<String>,
    /// `rows[i]` lists `(j, eᵢ·eⱼ)` for every nonzero product, sorted by j.
    rows: Vec<Vec<(usize, SparseVector)>>,
    unit: Option<Vector>,
}

impl StructureAlgebra {
    /// Builds an algebra and rejects it unless associativity and the unit
    /// laws hold.
    pub fn new(
        field: Field,
        names: Vec<String>,
        products: impl IntoIterator<Item = (usize, usize, Vector)>,
        unit: Option<Vector>,
    ) -> Result<Self, AlgebraError> {
        let alg = Self::new_unchecked(field, names, products, unit)?;
        let report = alg.validate();
        if !report.passed {
            return Err(AlgebraError::Invalid(describe_failure(&report)));
        }
        Ok(alg)
    }

    /// Builds an algebra checking only shapes and fields, not associativity.
    pub fn new_unchecked(
        field: Field,
        names: Vec<String>,
        products: impl IntoIterator<Item = (usize, usize, Vector)>,
        unit: Option<Vector>,
    ) -> Result<Self, AlgebraError> {
        let dim = names.len();
        if dim == 0 {
            return Err(AlgebraError::EmptyBasis);
        }
        for (k, name) in names.iter().enumerate() {
            if names[..k].contains(name) {
                return Err(AlgebraError::DuplicateName(name.clone()));
            }
        }
        let mut rows: Vec<Vec<(usize, SparseVector)>> = vec![Vec::new(); dim];
        let mut seen = std::collections::HashSet::new();
        for (i, j, v) in products {
            for index in [i, j] {
                if index >= dim {
                    return Err(AlgebraError::IndexOutOfRange { index, dim });
                }
            }
            check_vector(field, dim, &v)?;
            if !seen.insert((i, j)) {
                return Err(AlgebraError::DuplicateProduct(i, j));
            }
            let sparse = to_sparse(&v);
            if !sparse.is_empty() {
                rows[i].push((j, sparse));
            }
        }
        for row in &mut rows {
            row.sort_by_key(|(j, _)| *j);
        }
        if let Some(u) = &unit {
            check_vector(field, dim, u)?;
        }
        Ok(StructureAlgebra {
            field,
            names,
            rows,
            unit,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn unit(&self) -> Option<&Vector> {
        self.unit.as_ref()
    }

    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn zero(&self) -> AlgElement {
        zero_vector(self.field, self.dim())
    }

    pub fn basis_element(&self, i: usize) -> AlgElement {
        let mut v = self.zero();
        v[i] = self.field.one();
        v
    }

    pub fn basis_elements(&self) -> Vec<AlgElement> {
        (0..self.dim()).map(|i| self.basis_element(i)).collect()
    }

    /// eᵢ·eⱼ as a dense vector.
    pub fn basis_product(&self, i: usize, j: usize) -> AlgElement {
        let mut out = self.zero();
        if let Ok(k) = self.rows[i].binary_search_by_key(&j, |(j, _)| *j) {
            for (l, c) in &self.rows[i][k].1 {
                out[*l] = c.clone();
            }
        }
        out
    }

    /// Every nonzero structure constant as `(i, j, eᵢ·eⱼ)`, in index order.
    pub fn nonzero_products(&self) -> impl Iterator<Item = (usize, usize, &SparseVector)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |(j, v)| (i, *j, v)))
    }

    /// A copy with the product eᵢ·eⱼ replaced, without revalidating.
    pub fn with_product(&self, i: usize, j: usize, value: Vector) -> Self {
        let mut out = self.clone();
        let row = &mut out.rows[i];
        row.retain(|(k, _)| *k != j);
        let sparse = to_sparse(&value);
        if !sparse.is_empty() {
            row.push((j, sparse));
            row.sort_by_key(|(k, _)| *k);
        }
        out
    }

    pub fn check_element(&self, a: &[Scalar]) -> Result<(), AlgebraError> {
        check_vector(self.field, self.dim(), a)
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> AlgElement {
        debug_assert_eq!(a.len(), self.dim());
        debug_assert_eq!(b.len(), self.dim());
        let mut out = self.zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, prod) in &self.rows[i] {
                let bj = &b[*j];
                if bj.is_zero() {
                    continue;
                }
                let c = ai.mul(bj);
                for (l, x) in prod {
                    out[*l] = out[*l].add(&c.mul(x));
                }
            }
        }
        out
    }

    /// aⁿ for n ≥ 1; a⁰ is the unit when there is one.
    pub fn pow(&self, a: &[Scalar], n: usize) -> Result<AlgElement, AlgebraError> {
        if n == 0 {
            return self.unit.clone().ok_or(AlgebraError::NoUnit);
        }
        let mut acc = a.to_vec();
        for _ in 1..n {
            acc = self.mul(&acc, a);
        }
        Ok(acc)
    }

    /// Checks (eᵢeⱼ)eₖ = eᵢ(eⱼeₖ) on every basis triple and, when a unit is
    /// declared, 1·eᵢ = eᵢ·1 = eᵢ.
    #[allow(clippy::needless_range_loop)]
    pub fn validate(&self) -> AlgebraValidation {
        let d = self.dim();
        let mut report = AlgebraValidation {
            passed: true,
            triples_checked: 0,
            associativity_failure: None,
            unit_failure: None,
        };
        let basis = self.basis_elements();
        let products: Vec<Vec<AlgElement>> = (0..d)
            .map(|i| (0..d).map(|j| self.basis_product(i, j)).collect())
            .collect();
        'outer: for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    report.triples_checked += 1;
                    let left = self.mul(&products[i][j], &basis[k]);
                    let right = self.mul(&basis[i], &products[j][k]);
                    if left != right {
                        report.passed = false;
                        report.associativity_failure = Some([
                            self.names[i].clone(),
                            self.names[j].clone(),
                            self.names[k].clone(),
                        ]);
                        break 'outer;
                    }
                }
            }
        }
        if let Some(u) = &self.unit {
            for (i, e) in basis.iter().enumerate() {
                if &self.mul(u, e) != e || &self.mul(e, u) != e {
                    report.passed = false;
                    report.unit_failure = Some(self.names[i].clone());
                    break;
                }
            }
        }
        report
    }

    /// The image of `p` under xᵣ ↦ `assignment[r]`. The empty word maps to the
    /// unit.
    pub fn evaluate(
        &self,
        p: &FreePoly,
        assignment: &[AlgElement],
    ) -> Result<AlgElement, AlgebraError> {
        if p.arity() != assignment.len() {
            return Err(AlgebraError::AssignmentLength {
                poly: p.arity(),
                given: assignment.len(),
            });
        }
        if p.field() != self.field {
            return Err(AlgebraError::FieldMismatch(self.field, p.field()));
        }
        for a in assignment {
            self.check_element(a)?;
        }
        let mut out = self.zero();
        for (w, c) in p.terms() {
            let value = match w.letters().split_first() {
                None => self.unit.clone().ok_or(AlgebraError::NoUnit)?,
                Some((&first, rest)) => rest
                    .iter()
                    .fold(assignment[first as usize].clone(), |acc, &l| {
                        self.mul(&acc, &assignment[l as usize])
                    }),
            };
            axpy(&mut out, c, &value);
        }
        Ok(out)
    }

    /// Writes an element as a combination of basis names, e.g. `E11 + 2·E12`.
    pub fn format_element(&self, a: &[Scalar]) -> String {
        if is_zero_vector(a) {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if c.is_one() {
                parts.push(self.names[i].clone());
            } else {
                parts.push(format!("{c}·{}", self.names[i]));
            }
        }
        parts.join(" + ")
    }

    /// Parses a linear combination of basis names such as `E11+E12`,
    /// `2*e1 - 1/2*e2` or `0`.
    pub fn parse_element(&self, text: &str) -> Result<AlgElement, AlgebraError> {
        let err = |reason: &str| AlgebraError::Parse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let mut out = self.zero();
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(err("empty"));
        }
        if cleaned == "0" {
            return Ok(out);
        }
        // Terms are separated by '+' or '-' unless the sign follows a '*'.
        let mut terms = Vec::new();
        let mut current = String::new();
        for ch in cleaned.chars() {
            if (ch == '+' || ch == '-') && !current.is_empty() && !current.ends_with('*') {
                terms.push(std::mem::take(&mut current));
            }
            current.push(ch);
        }
        terms.push(current);
        for term in terms {
            let (sign, body) = match term.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, term.strip_prefix('+').unwrap_or(&term)),
            };
            let (coeff, name) = match body.rsplit_once('*') {
                Some((c, n)) => (self.field.parse(c)?, n),
                None => (self.field.one(), body),
            };
            let i = self
                .basis_index(name)
                .ok_or_else(|| AlgebraError::UnknownName(name.to_string()))?;
            let c = if sign < 0 { coeff.neg() } else { coeff };
            out[i] = out[i].add(&c);
        }
        Ok(out)
    }
}

fn check_vector(field: Field, dim: usize, v: &[Scalar]) -> Result<(), AlgebraError> {
    if v.len() != dim {
        return Err(AlgebraError::WrongLength { got: v.len(), dim });
    }
    if let Some(bad) = v.iter().find(|s| s.field() != field) {
        return Err(AlgebraError::FieldMismatch(field, bad.field()));
    }
    Ok(())
}

pub(crate) fn describe_failure(report: &AlgebraValidation) -> String {
    if let Some([a, b, c]) = &report.associativity_failure {
        return format!("({a}·{b})·{c} ≠ {a}·({b}·{c})");
    }
    if let Some(e) = &report.unit_failure {
        return format!("declared unit does not fix {e}");
    }
    "unknown failure".into()
}

impl fmt::Display for StructureAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "algebra over {} of dimension {}", self.field, self.dim())
    }
}
