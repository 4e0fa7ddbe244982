//! Filtered algebras and their associated graded algebras.
//!
//! A filtration is stored as a finite chain F₀ ⊆ … ⊆ F_t with F_t = A; every
//! F_n with n > t is read as F_t, and F₋₁ = 0.

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgElement, AlgebraError, StructureAlgebra};
use crate::subspace::{rref, zero_vector, SpaceError, Subspace, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error("filtration has no stages")]
    EmptyChain,
    #[error("invalid filtration: {0}")]
    InvalidFiltration(FiltrationFailure),
    #[error("coefficient of degree {degree} is not in F_{degree}")]
    NotInFiltration { degree: usize },
    #[error("element {index} is not in F_{degree}")]
    ElementNotInStage { index: usize, degree: usize },
    #[error("Rees element has a nonzero constant term")]
    ConstantTerm,
    #[error("need 1 ≤ p ≤ q, got p = {p}, q = {q}")]
    DegreeRange { p: usize, q: usize },
    #[error("multidegree has {got} entries, expected {expected}")]
    MultiDegreeLength { got: usize, expected: usize },
    #[error("stage {stage}: {source}")]
    Stage { stage: usize, source: SpaceError },
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Criteria(#[from] crate::criteria::CriteriaError),
}

/// The first defect found in a proposed filtration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FiltrationFailure {
    /// F_{stage−1} ⊄ F_stage.
    Nesting { stage: usize },
    /// The top stage is a proper subspace.
    Exhaustion { top_dim: usize, dim: usize },
    /// Some product of spanning vectors of F_i and F_j leaves F_{i+j}.
    Multiplicativity {
        i: usize,
        j: usize,
        left: String,
        right: String,
    },
}

impl std::fmt::Display for FiltrationFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FiltrationFailure::Nesting { stage } => {
                write!(f, "F_{} is not contained in F_{stage}", stage - 1)
            }
            FiltrationFailure::Exhaustion { top_dim, dim } => {
                write!(f, "top stage has dimension {top_dim}, algebra has {dim}")
            }
            FiltrationFailure::Multiplicativity { i, j, left, right } => {
                write!(f, "({left})·({right}) is not in F_{}", i + j)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiltrationReport {
    pub passed: bool,
    pub stage_dims: Vec<usize>,
    pub failure: Option<FiltrationFailure>,
}

/// An algebra together with a finite filtration chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredAlgebra {
    algebra: StructureAlgebra,
    chain: Vec<Subspace>,
}

impl FilteredAlgebra {
    /// Pairs an algebra with a chain. Only shapes are checked here; see
    /// [`FilteredAlgebra::validate`].
    pub fn new(algebra: StructureAlgebra, chain: Vec<Subspace>) -> Result<Self, GradedError> {
        if chain.is_empty() {
            return Err(GradedError::EmptyChain);
        }
        for (stage, s) in chain.iter().enumerate() {
            if s.ambient() != algebra.dim() {
                return Err(GradedError::Stage {
                    stage,
                    source: SpaceError::AmbientMismatch(algebra.dim(), s.ambient()),
                });
            }
            if s.field() != algebra.field() {
                return Err(GradedError::Stage {
                    stage,
                    source: SpaceError::FieldMismatch(algebra.field(), s.field()),
                });
            }
        }
        Ok(FilteredAlgebra { algebra, chain })
    }

    /// Builds the chain from spanning vectors of each stage.
    pub fn from_spanning(
        algebra: StructureAlgebra,
        stages: Vec<Vec<Vector>>,
    ) -> Result<Self, GradedError> {
        let field = algebra.field();
        let d = algebra.dim();
        let chain = stages
            .into_iter()
            .enumerate()
            .map(|(stage, vs)| {
                Subspace::span(field, d, vs).map_err(|source| GradedError::Stage { stage, source })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(algebra, chain)
    }

    /// The one-stage filtration F₀ = A.
    pub fn trivial(algebra: StructureAlgebra) -> Self {
        let full = Subspace::full(algebra.field(), algebra.dim());
        FilteredAlgebra {
            algebra,
            chain: vec![full],
        }
    }

    pub fn algebra(&self) -> &StructureAlgebra {
        &self.algebra
    }

    pub fn chain(&self) -> &[Subspace] {
        &self.chain
    }

    /// Index t of the last stage.
    pub fn top(&self) -> usize {
        self.chain.len() - 1
    }

    /// F_n, with F_n = F_t beyond the chain.
    pub fn stage(&self, n: usize) -> &Subspace {
        &self.chain[n.min(self.top())]
    }

    /// F_{n−1}, reading F₋₁ as zero.
    pub fn stage_below(&self, n: usize) -> Subspace {
        match n.checked_sub(1) {
            Some(k) => self.stage(k).clone(),
            None => Subspace::zero(self.algebra.field(), self.algebra.dim()),
        }
    }

    pub fn stage_dims(&self) -> Vec<usize> {
        self.chain.iter().map(Subspace::dim).collect()
    }

    /// Whether `a` lies in F_n.
    pub fn in_stage(&self, a: &[crate::Scalar], n: usize) -> Result<bool, GradedError> {
        Ok(self.stage(n).contains(a)?)
    }

    /// Whether the algebra's unit exists and lies in F₀.
    pub fn unit_in_base(&self) -> bool {
        match self.algebra.unit() {
            Some(u) => self.chain[0].contains(u).unwrap_or(false),
            None => false,
        }
    }

    /// Checks nesting, exhaustion and F_iF_j ⊆ F_{i+j} on spanning vectors.
    pub fn validate(&self) -> FiltrationReport {
        let mut report = FiltrationReport {
            passed: true,
            stage_dims: self.stage_dims(),
            failure: None,
        };
        report.failure = self.first_failure();
        report.passed = report.failure.is_none();
        report
    }

    fn first_failure(&self) -> Option<FiltrationFailure> {
        for stage in 1..self.chain.len() {
            if !self.chain[stage - 1]
                .is_subspace_of(&self.chain[stage])
                .unwrap_or(false)
            {
                return Some(FiltrationFailure::Nesting { stage });
            }
        }
        let top = &self.chain[self.top()];
        if !top.is_full() {
            return Some(FiltrationFailure::Exhaustion {
                top_dim: top.dim(),
                dim: self.algebra.dim(),
            });
        }
        let t = self.top();
        for i in 0..=t {
            for j in 0..=t {
                if i + j >= t {
                    continue;
                }
                let target = self.stage(i + j);
                for u in self.chain[i].basis() {
                    for v in self.chain[j].basis() {
                        let prod = self.algebra.mul(u, v);
                        if !target.contains(&prod).unwrap_or(false) {
                            return Some(FiltrationFailure::Multiplicativity {
                                i,
                                j,
                                left: self.algebra.format_element(u),
                                right: self.algebra.format_element(v),
                            });
                        }
                    }
                }
            }
        }
        None
    }

    fn ensure_valid(&self) -> Result<(), GradedError> {
        match self.first_failure() {
            Some(f) => Err(GradedError::InvalidFiltration(f)),
            None => Ok(()),
        }
    }

    /// A basis of A refining the chain: the echelon basis of F₀, then the
    /// echelon rows of F₁ not already spanned, and so on.
    pub fn adapted_basis(&self) -> Result<AdaptedBasis, GradedError> {
        self.ensure_valid()?;
        let field = self.algebra.field();
        let d = self.algebra.dim();
        let mut vectors: Vec<Vector> = Vec::new();
        let mut degrees = Vec::new();
        let mut current = Subspace::zero(field, d);
        for (p, stage) in self.chain.iter().enumerate() {
            for row in stage.basis() {
                if !current.contains(row)? {
                    current = current.extend([row.clone()])?;
                    vectors.push(row.clone());
                    degrees.push(p);
                }
            }
        }
        // Inverse of the matrix whose rows are the adapted vectors.
        let rows: Vec<Vector> = vectors
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let mut row = v.clone();
                let mut e = zero_vector(field, d);
                e[k] = field.one();
                row.extend(e);
                row
            })
            .collect();
        let (reduced, pivots) = rref(rows, 2 * d);
        debug_assert_eq!(pivots, (0..d).collect::<Vec<_>>());
        let inverse = reduced.into_iter().map(|r| r[d..].to_vec()).collect();
        Ok(AdaptedBasis {
            vectors,
            degrees,
            inverse,
        })
    }

    /// The associated graded algebra, realized on the classes of the adapted
    /// basis.
    pub fn graded(&self) -> Result<GradedAlgebra, GradedError> {
        let adapted = self.adapted_basis()?;
        let field = self.algebra.field();
        let d = self.algebra.dim();
        let t = self.top();
        let mut products = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let (p, q) = (adapted.degrees[i], adapted.degrees[j]);
                let target = p + q;
                let mut class = zero_vector(field, d);
                if target <= t {
                    let prod = self.algebra.mul(&adapted.vectors[i], &adapted.vectors[j]);
                    let coords = adapted.coordinates(&prod);
                    for (k, c) in coords.into_iter().enumerate() {
                        if adapted.degrees[k] == target {
                            class[k] = c;
                        } else if adapted.degrees[k] > target && !c.is_zero() {
                            return Err(GradedError::InvalidFiltration(
                                FiltrationFailure::Multiplicativity {
                                    i: p,
                                    j: q,
                                    left: self.algebra.format_element(&adapted.vectors[i]),
                                    right: self.algebra.format_element(&adapted.vectors[j]),
                                },
                            ));
                        }
                    }
                }
                products.push((i, j, class));
            }
        }
        let unit = if self.unit_in_base() {
            self.algebra.unit().map(|u| adapted.coordinates(u))
        } else {
            None
        };
        let names = (0..d)
            .map(|k| {
                format!(
                    "[{}]_{}",
                    self.algebra.format_element(&adapted.vectors[k]),
                    adapted.degrees[k]
                )
            })
            .collect();
        let algebra = StructureAlgebra::new_unchecked(field, names, products, unit)?;
        let mut component_dims = vec![0usize; t + 1];
        for &g in &adapted.degrees {
            component_dims[g] += 1;
        }
        Ok(GradedAlgebra {
            algebra,
            adapted,
            component_dims,
        })
    }
}

/// A basis of A adapted to the filtration, with the degree at which each
/// vector first appears and the inverse change of basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdaptedBasis {
    pub vectors: Vec<Vector>,
    pub degrees: Vec<usize>,
    inverse: Vec<Vector>,
}

impl AdaptedBasis {
    /// Coordinates of `a` (given in the algebra's basis) in the adapted basis.
    pub fn coordinates(&self, a: &[crate::Scalar]) -> Vector {
        let d = self.vectors.len();
        let field = self.vectors[0][0].field();
        let mut out = zero_vector(field, d);
        for (r, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            crate::subspace::axpy(&mut out, x, &self.inverse[r]);
        }
        out
    }

    /// The element with adapted coordinates `c`.
    pub fn element(&self, c: &[crate::Scalar]) -> AlgElement {
        let field = self.vectors[0][0].field();
        let mut out = zero_vector(field, self.vectors.len());
        for (k, x) in c.iter().enumerate() {
            crate::subspace::axpy(&mut out, x, &self.vectors[k]);
        }
        out
    }

    /// Indices of adapted vectors of degree exactly `p`.
    pub fn indices_of_degree(&self, p: usize) -> Vec<usize> {
        (0..self.degrees.len())
            .filter(|&k| self.degrees[k] == p)
            .collect()
    }

    /// Indices of adapted vectors with degree ≤ `p` (a basis of F_p).
    pub fn indices_up_to(&self, p: usize) -> Vec<usize> {
        (0..self.degrees.len())
            .filter(|&k| self.degrees[k] <= p)
            .collect()
    }
}

/// gr(A) = F₀ ⊕ F₁/F₀ ⊕ …, as a structure algebra on the adapted classes.
/// Basis element k is the class of `adapted.vectors[k]` in degree
/// `adapted.degrees[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedAlgebra {
    pub algebra: StructureAlgebra,
    pub adapted: AdaptedBasis,
    pub component_dims: Vec<usize>,
}

impl GradedAlgebra {
    pub fn degree_of(&self, k: usize) -> usize {
        self.adapted.degrees[k]
    }

    /// The homogeneous component of degree `p` of a gr element.
    pub fn component(&self, b: &[crate::Scalar], p: usize) -> Vector {
        b.iter()
            .enumerate()
            .map(|(k, c)| {
                if self.adapted.degrees[k] == p {
                    c.clone()
                } else {
                    c.field().zero()
                }
            })
            .collect()
    }

    /// The class in F_p/F_{p−1} of an element of F_p, as a gr element.
    pub fn class_of(&self, a: &[crate::Scalar], p: usize) -> Vector {
        self.component(&self.adapted.coordinates(a), p)
    }

    /// A copy whose graded product of classes `i` and `j` is replaced.
    pub fn with_product(&self, i: usize, j: usize, value: Vector) -> Self {
        GradedAlgebra {
            algebra: self.algebra.with_product(i, j, value),
            adapted: self.adapted.clone(),
            component_dims: self.component_dims.clone(),
        }
    }
}
