//! Exact linear algebra over a [`Field`]: reduced row-echelon spans,
//! membership, sums and linear solves.

use thiserror::Error;

use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("vector {index} has length {got}, expected {expected}")]
    Ragged {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("evaluation nodes must be distinct; {0} is repeated")]
    RepeatedNode(Scalar),
    #[error("need {needed} evaluation nodes, got {got}")]
    NodeCount { needed: usize, got: usize },
    #[error("need at least {needed} distinct sample values, got {got}")]
    InsufficientSample { needed: usize, got: usize },
    #[error("no evaluation supplied at grid point {0}")]
    MissingEvaluation(String),
}

/// A vector of exact scalars.
pub type Vector = Vec<Scalar>;

pub fn zero_vector(field: Field, len: usize) -> Vector {
    vec![field.zero(); len]
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn add_vectors(a: &[Scalar], b: &[Scalar]) -> Vector {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn sub_vectors(a: &[Scalar], b: &[Scalar]) -> Vector {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

pub fn scale_vector(c: &Scalar, v: &[Scalar]) -> Vector {
    v.iter().map(|x| c.mul(x)).collect()
}

/// `acc += c·v` in place.
pub fn axpy(acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a = a.add(&c.mul(x));
        }
    }
}

/// Reduces `rows` (all of length `ncols`) to reduced row-echelon form in place
/// of a fresh vector. Zero rows are dropped. Returns the rows and their pivot
/// columns (strictly increasing).
pub fn rref(mut rows: Vec<Vector>, ncols: usize) -> (Vec<Vector>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let inv = rows[r][col].inv().expect("pivot is nonzero");
        if !inv.is_one() {
            for x in rows[r][col..].iter_mut() {
                *x = x.mul(&inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].neg();
            for c in col..ncols {
                if !pivot_row[c].is_zero() {
                    row[c] = row[c].add(&factor.mul(&pivot_row[c]));
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Solves Σᵢ cᵢ·vectorsᵢ = target. Returns one solution (free coefficients set
/// to zero) or `None` when the target is outside the span.
pub fn solve_combination(field: Field, vectors: &[Vector], target: &[Scalar]) -> Option<Vector> {
    let k = vectors.len();
    let rows: Vec<Vector> = (0..target.len())
        .map(|r| {
            let mut row: Vector = vectors.iter().map(|v| v[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let (rows, pivots) = rref(rows, k + 1);
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut sol = zero_vector(field, k);
    for (row, &p) in rows.iter().zip(&pivots) {
        sol[p] = row[k].clone();
    }
    Some(sol)
}

/// A subspace of the coordinate space kᴺ, stored as its reduced row-echelon
/// basis. Equality of the echelon bases is equality of subspaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Field, ambient: usize) -> Self {
        let rows = (0..ambient)
            .map(|i| {
                let mut v = zero_vector(field, ambient);
                v[i] = field.one();
                v
            })
            .collect();
        Subspace {
            field,
            ambient,
            rows,
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span(
        field: Field,
        ambient: usize,
        vectors: impl IntoIterator<Item = Vector>,
    ) -> Result<Self, SpaceError> {
        let mut rows = Vec::new();
        for (index, v) in vectors.into_iter().enumerate() {
            if v.len() != ambient {
                return Err(SpaceError::Ragged {
                    index,
                    expected: ambient,
                    got: v.len(),
                });
            }
            if let Some(bad) = v.iter().find(|s| s.field() != field) {
                return Err(SpaceError::FieldMismatch(field, bad.field()));
            }
            rows.push(v);
        }
        let (rows, pivots) = rref(rows, ambient);
        Ok(Subspace {
            field,
            ambient,
            rows,
            pivots,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_vector(&self, v: &[Scalar]) -> Result<(), SpaceError> {
        if v.len() != self.ambient {
            return Err(SpaceError::AmbientMismatch(self.ambient, v.len()));
        }
        Ok(())
    }

    fn check_space(&self, other: &Subspace) -> Result<(), SpaceError> {
        if self.field != other.field {
            return Err(SpaceError::FieldMismatch(self.field, other.field));
        }
        if self.ambient != other.ambient {
            return Err(SpaceError::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(())
    }

    /// The normal form of `v` modulo this subspace: `v` minus its projection
    /// along the echelon basis. Zero exactly when `v` is a member.
    pub fn reduce(&self, v: &[Scalar]) -> Result<Vector, SpaceError> {
        self.check_vector(v)?;
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !out[p].is_zero() {
                let c = out[p].neg();
                axpy(&mut out, &c, row);
            }
        }
        Ok(out)
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool, SpaceError> {
        Ok(is_zero_vector(&self.reduce(v)?))
    }

    /// Coefficients of `v` in the echelon basis, if `v` is a member.
    pub fn coordinates(&self, v: &[Scalar]) -> Result<Option<Vector>, SpaceError> {
        if !self.contains(v)? {
            return Ok(None);
        }
        Ok(Some(self.pivots.iter().map(|&p| v[p].clone()).collect()))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, SpaceError> {
        self.check_space(other)?;
        let vectors = self.rows.iter().chain(&other.rows).cloned();
        Subspace::span(self.field, self.ambient, vectors)
    }

    /// Adds vectors to the span.
    pub fn extend(
        &self,
        vectors: impl IntoIterator<Item = Vector>,
    ) -> Result<Subspace, SpaceError> {
        let all: Vec<Vector> = self.rows.iter().cloned().chain(vectors).collect();
        Subspace::span(self.field, self.ambient, all)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool, SpaceError> {
        self.check_space(other)?;
        for row in &self.rows {
            if !other.contains(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// dim(self ∩ other), by dim U + dim V − dim(U + V).
    pub fn intersection_dim(&self, other: &Subspace) -> Result<usize, SpaceError> {
        Ok(self.dim() + other.dim() - self.sum(other)?.dim())
    }

    /// Row-major JSON matrix of the echelon basis.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.rows
                .iter()
                .map(|r| serde_json::Value::Array(r.iter().map(Scalar::to_json).collect()))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| q().from_i64(x)).collect()
    }

    #[test]
    fn span_examples() {
        assert_eq!(
            Subspace::span(q(), 2, [v(&[1, 0]), v(&[1, 1])])
                .unwrap()
                .dim(),
            2
        );
        assert_eq!(Subspace::span(q(), 2, []).unwrap().dim(), 0);
        let s = Subspace::span(q(), 2, [v(&[2, 4])]).unwrap();
        assert_eq!(s.basis(), &[v(&[1, 2])]);
        let err = Subspace::span(q(), 2, [v(&[1, 0]), v(&[1])]).unwrap_err();
        assert_eq!(
            err,
            SpaceError::Ragged {
                index: 1,
                expected: 2,
                got: 1
            }
        );
    }

    #[test]
    fn queries() {
        let x = Subspace::span(q(), 2, [v(&[1, 0])]).unwrap();
        let y = Subspace::span(q(), 2, [v(&[0, 1])]).unwrap();
        assert!(x.contains(&v(&[2, 0])).unwrap());
        assert!(!x.contains(&v(&[2, 1])).unwrap());
        assert_eq!(x.sum(&y).unwrap().dim(), 2);
        assert_eq!(Subspace::zero(q(), 3), Subspace::span(q(), 3, []).unwrap());
        assert!(x.is_subspace_of(&x.sum(&y).unwrap()).unwrap());
        assert_eq!(x.intersection_dim(&y).unwrap(), 0);
        let three = Subspace::zero(q(), 3);
        assert_eq!(x.sum(&three), Err(SpaceError::AmbientMismatch(2, 3)));
        assert!(x.contains(&v(&[1, 0, 0])).is_err());
    }

    #[test]
    fn echelon_shape() {
        let s = Subspace::span(
            q(),
            4,
            [
                v(&[0, 2, 4, 6]),
                v(&[1, 1, 1, 1]),
                v(&[1, 3, 5, 7]),
                v(&[0, 0, 0, 0]),
            ],
        )
        .unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.pivots(), &[0, 1]);
        for (row, &p) in s.basis().iter().zip(s.pivots()) {
            assert!(row[p].is_one());
            for (other, &op) in s.basis().iter().zip(s.pivots()) {
                if op != p {
                    assert!(other[p].is_zero());
                }
            }
        }
    }

    #[test]
    fn solve() {
        let vs = [v(&[1, 0, 1]), v(&[0, 1, 1])];
        let sol = solve_combination(q(), &vs, &v(&[2, 3, 5])).unwrap();
        assert_eq!(sol, v(&[2, 3]));
        assert!(solve_combination(q(), &vs, &v(&[0, 0, 1])).is_none());
        assert_eq!(solve_combination(q(), &[], &v(&[0, 0])), Some(vec![]));
    }

    #[test]
    fn prime_field_span() {
        let f = Field::Prime(3);
        let a: Vector = [1, 2].iter().map(|&x| f.from_i64(x)).collect();
        let b: Vector = [2, 1].iter().map(|&x| f.from_i64(x)).collect();
        // (2,1) = 2·(1,2) mod 3
        assert_eq!(Subspace::span(f, 2, [a, b]).unwrap().dim(), 1);
    }
}
