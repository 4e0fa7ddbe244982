//! Nil and algebraicity criteria for subspaces of an algebra, computed from
//! the spans Pₙ(a₁,…,aₘ) of order-symmetric polynomial values.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgElement, AlgebraError, StructureAlgebra};
use crate::free::{binomial, MultiDegree};
use crate::scalar::{Field, Scalar};
use crate::subspace::{axpy, is_zero_vector, SpaceError, Subspace, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CriteriaError {
    #[error("the unital convention needs an algebra with a unit")]
    NoUnit,
    #[error("brute force needs a finite field, got {0}")]
    InfiniteField(Field),
    #[error("enumeration of {needed} combinations exceeds the budget of {limit}")]
    Budget { needed: u128, limit: u128 },
    #[error("element {index} has {got} coordinates, algebra has dimension {dim}")]
    WrongLength {
        index: usize,
        got: usize,
        dim: usize,
    },
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Whether the identity may appear in algebraic relations and spans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// aᵈ ∈ span{a, …, aᵈ⁻¹}.
    #[default]
    NonUnital,
    /// aᵈ ∈ span{1, a, …, aᵈ⁻¹}.
    Unital,
}

fn check_elements(alg: &StructureAlgebra, elts: &[AlgElement]) -> Result<(), CriteriaError> {
    for (index, a) in elts.iter().enumerate() {
        if a.len() != alg.dim() {
            return Err(CriteriaError::WrongLength {
                index,
                got: a.len(),
                dim: alg.dim(),
            });
        }
        alg.check_element(a)?;
    }
    Ok(())
}

/// The values s_μ(a₁,…,aₘ) level by level, using s_μ = Σⱼ aⱼ·s_{μ−eⱼ}.
pub struct SymLevels<'a> {
    alg: &'a StructureAlgebra,
    elts: &'a [AlgElement],
    level: usize,
    current: BTreeMap<MultiDegree, AlgElement>,
}

impl<'a> SymLevels<'a> {
    pub fn new(alg: &'a StructureAlgebra, elts: &'a [AlgElement]) -> Self {
        SymLevels {
            alg,
            elts,
            level: 0,
            current: BTreeMap::new(),
        }
    }

    /// Index of the level most recently produced.
    pub fn level(&self) -> usize {
        self.level
    }
}

impl Iterator for SymLevels<'_> {
    type Item = BTreeMap<MultiDegree, AlgElement>;

    fn next(&mut self) -> Option<Self::Item> {
        let m = self.elts.len();
        let n = self.level + 1;
        let mut next = BTreeMap::new();
        for md in MultiDegree::all_of_total(m, n) {
            let value = if n == 1 {
                let j = md
                    .exponents()
                    .iter()
                    .position(|&e| e == 1)
                    .expect("unit multidegree");
                self.elts[j].clone()
            } else {
                let mut acc = self.alg.zero();
                for (j, a) in self.elts.iter().enumerate() {
                    if let Some(lower) = md.lower(j) {
                        let prev = &self.current[&lower];
                        if !is_zero_vector(prev) {
                            let prod = self.alg.mul(a, prev);
                            axpy(&mut acc, &self.alg.field().one(), &prod);
                        }
                    }
                }
                acc
            };
            next.insert(md, value);
        }
        self.level = n;
        self.current = next.clone();
        Some(next)
    }
}

/// Pₙ(a₁,…,aₘ) ⊆ A for n ≥ 1.
pub fn span_p_alg(
    alg: &StructureAlgebra,
    elts: &[AlgElement],
    n: usize,
) -> Result<Subspace, CriteriaError> {
    check_elements(alg, elts)?;
    let field = alg.field();
    if n == 0 || elts.is_empty() {
        return Ok(Subspace::zero(field, alg.dim()));
    }
    let level = SymLevels::new(alg, elts)
        .nth(n - 1)
        .expect("levels are unbounded");
    Ok(Subspace::span(field, alg.dim(), level.into_values())?)
}

/// The subalgebra (without unit) generated by `elts`: the span of all
/// nonempty products.
pub fn generated_subalgebra(
    alg: &StructureAlgebra,
    elts: &[AlgElement],
) -> Result<Subspace, CriteriaError> {
    check_elements(alg, elts)?;
    let mut space = Subspace::span(alg.field(), alg.dim(), elts.iter().cloned())?;
    loop {
        let products: Vec<Vector> = elts
            .iter()
            .flat_map(|a| space.basis().iter().map(move |v| alg.mul(a, v)))
            .collect();
        let grown = space.extend(products)?;
        if grown.dim() == space.dim() {
            return Ok(space);
        }
        space = grown;
    }
}

/// Why the level computation stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainStop {
    /// Pₙ = 0, so every later level vanishes too.
    ZeroLevel,
    /// The cumulative span reached the generated subalgebra, an upper bound.
    SubalgebraReached,
    /// n reached dim of the generated subalgebra, past which levels add nothing.
    LevelCap,
}

/// The cumulative chain P_{≤1} ⊆ P_{≤2} ⊆ … of a finite set of elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PChain {
    /// dim Pₙ for n = 1, …, stabilization_degree.
    pub degree_dims: Vec<usize>,
    /// dim P_{≤n} − dim P_{≤n−1} for the same n.
    pub new_dims: Vec<usize>,
    /// dim P_{≤n} for the same n.
    pub cumulative_dims: Vec<usize>,
    pub cumulative_dim: usize,
    /// The least d with P_{≥1} ⊆ P_{≤d−1}.
    pub stabilization_degree: usize,
    pub includes_unit: bool,
    pub stopped_by: ChainStop,
    pub levels_computed: usize,
    #[serde(skip)]
    pub cumulative: Subspace,
}

/// Computes P_{≥1}(a₁,…,aₘ) and the least d with P_{≥1} ⊆ P_{≤d−1}.
///
/// Levels are computed until Pₙ = 0, until P_{≤n} fills the generated
/// subalgebra S, or until n = dim S. The last cutoff is sound over any field:
/// every element of S has degree at most dim S + 1, so Pₖ ⊆ P_{≤dim S} for
/// all k, and the containment survives field extension. A single level
/// without growth is not enough (see the tests).
///
/// With `include_unit`, the cumulative spans start from P₀ = k·1.
pub fn stabilized_p_chain(
    alg: &StructureAlgebra,
    elts: &[AlgElement],
    include_unit: bool,
) -> Result<PChain, CriteriaError> {
    check_elements(alg, elts)?;
    let field = alg.field();
    let d = alg.dim();
    let mut base = Subspace::zero(field, d);
    if include_unit {
        let unit = alg.unit().ok_or(CriteriaError::NoUnit)?;
        base = base.extend([unit.clone()])?;
    }
    let sub = generated_subalgebra(alg, elts)?;
    let target = base.sum(&sub)?;
    let cap = sub.dim().max(1);

    let mut cumulative = base.clone();
    let mut degree_dims = Vec::new();
    let mut cumulative_dims = vec![base.dim()];
    let mut stopped_by = ChainStop::LevelCap;
    let mut levels = SymLevels::new(alg, elts);
    if !elts.is_empty() {
        for level in levels.by_ref() {
            let pn = Subspace::span(field, d, level.into_values())?;
            cumulative = cumulative.sum(&pn)?;
            degree_dims.push(pn.dim());
            cumulative_dims.push(cumulative.dim());
            let n = degree_dims.len();
            if pn.is_zero() {
                stopped_by = ChainStop::ZeroLevel;
                break;
            }
            if cumulative == target {
                stopped_by = ChainStop::SubalgebraReached;
                break;
            }
            if n >= cap {
                break;
            }
        }
    } else {
        degree_dims.push(0);
        cumulative_dims.push(base.dim());
        stopped_by = ChainStop::ZeroLevel;
    }
    let levels_computed = degree_dims.len();
    let final_dim = cumulative.dim();
    let s = cumulative_dims
        .iter()
        .position(|&c| c == final_dim)
        .expect("final dimension is attained");
    // Report one level past the last growth; compute it if needed.
    while degree_dims.len() < s + 1 {
        let level = levels.next().expect("levels are unbounded");
        let pn = Subspace::span(field, d, level.into_values())?;
        debug_assert!(pn.is_subspace_of(&cumulative)?);
        degree_dims.push(pn.dim());
        cumulative_dims.push(final_dim);
    }
    degree_dims.truncate(s + 1);
    let cumulative_dims: Vec<usize> = cumulative_dims[1..=s + 1].to_vec();
    let mut prev = base.dim();
    let new_dims = cumulative_dims
        .iter()
        .map(|&c| {
            let inc = c - prev;
            prev = c;
            inc
        })
        .collect();
    Ok(PChain {
        degree_dims,
        new_dims,
        cumulative_dims,
        cumulative_dim: final_dim,
        stabilization_degree: s + 1,
        includes_unit: include_unit,
        stopped_by,
        levels_computed,
        cumulative,
    })
}

/// How far a reported nil index can be trusted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Guarantee {
    /// Pₙ = 0 exactly when every combination satisfies vⁿ = 0.
    Exact,
    /// Pₙ = 0 implies vⁿ = 0 for every combination; the field is too small
    /// for the converse, so a smaller uniform index may exist.
    OneDirectional,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NilIndexReport {
    pub index: Option<usize>,
    pub cutoff: usize,
    pub guarantee: Guarantee,
}

/// The least n ≤ D+1 with Pₙ(a₁,…,aₘ) = 0.
pub fn subspace_nil_index(
    alg: &StructureAlgebra,
    elts: &[AlgElement],
) -> Result<NilIndexReport, CriteriaError> {
    check_elements(alg, elts)?;
    let cutoff = alg.dim() + 1;
    let mut index = None;
    if elts.is_empty() {
        index = Some(1);
    } else {
        for (k, level) in SymLevels::new(alg, elts).take(cutoff).enumerate() {
            if level.values().all(|v| is_zero_vector(v)) {
                index = Some(k + 1);
                break;
            }
        }
    }
    let n = index.unwrap_or(cutoff);
    let guarantee = if alg.field().has_at_least(n as u64 + 1) {
        Guarantee::Exact
    } else {
        Guarantee::OneDirectional
    };
    Ok(NilIndexReport {
        index,
        cutoff,
        guarantee,
    })
}

/// The least n ≤ D+1 with aⁿ = 0.
pub fn nilpotency_index(alg: &StructureAlgebra, a: &[Scalar]) -> Option<usize> {
    let mut power = a.to_vec();
    for n in 1..=alg.dim() + 1 {
        if is_zero_vector(&power) {
            return Some(n);
        }
        power = alg.mul(a, &power);
    }
    None
}

/// Σᵢ αᵢaᵢ.
pub fn combination(alg: &StructureAlgebra, coeffs: &[Scalar], elts: &[AlgElement]) -> AlgElement {
    let mut out = alg.zero();
    for (c, a) in coeffs.iter().zip(elts) {
        axpy(&mut out, c, a);
    }
    out
}

/// Default limit on the number of combinations enumerated by brute force.
pub const BRUTE_FORCE_BUDGET: u128 = 1 << 20;

/// The least n such that every combination over the (finite) field of the
/// algebra is nilpotent of index ≤ n, by exhaustive enumeration; `None` if
/// some combination is not nilpotent within D+1.
pub fn brute_force_nil_index(
    alg: &StructureAlgebra,
    elts: &[AlgElement],
    budget: u128,
) -> Result<Option<usize>, CriteriaError> {
    check_elements(alg, elts)?;
    let field = alg.field();
    let q = field
        .cardinality()
        .ok_or(CriteriaError::InfiniteField(field))?;
    let needed = (q as u128)
        .checked_pow(elts.len() as u32)
        .unwrap_or(u128::MAX);
    if needed > budget {
        return Err(CriteriaError::Budget {
            needed,
            limit: budget,
        });
    }
    let values = field
        .distinct_scalars(q as usize)
        .map_err(AlgebraError::from)?;
    let mut worst = 1;
    for coeffs in crate::free::grid(&values, elts.len()) {
        let v = combination(alg, &coeffs, elts);
        match nilpotency_index(alg, &v) {
            Some(n) => worst = worst.max(n),
            None => return Ok(None),
        }
    }
    Ok(Some(worst))
}

/// The least d ≥ 1 with aᵈ in the span of lower powers (positive powers
/// only, or including a⁰ = 1 under the unital convention). Always ≤ D+1.
pub fn algebraic_degree(
    alg: &StructureAlgebra,
    a: &[Scalar],
    convention: Convention,
) -> Result<usize, CriteriaError> {
    alg.check_element(a)?;
    let mut lower = Subspace::zero(alg.field(), alg.dim());
    if convention == Convention::Unital {
        let unit = alg.unit().ok_or(CriteriaError::NoUnit)?;
        lower = lower.extend([unit.clone()])?;
    }
    let mut power = a.to_vec();
    for d in 1.. {
        if lower.contains(&power)? {
            return Ok(d);
        }
        lower = lower.extend([power.clone()])?;
        power = alg.mul(a, &power);
    }
    unreachable!("powers span a finite-dimensional space")
}

/// M_{d,m} = C(d+m−1, m).
pub fn m_bound(d: usize, m: usize) -> u128 {
    binomial((d + m - 1) as u64, m as u64)
}

/// Seeded coefficient vectors: small integers over Q, uniform residues over
/// GF(p).
pub fn sample_coefficients(field: Field, m: usize, count: usize, seed: u64) -> Vec<Vec<Scalar>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..m)
                .map(|_| match field.cardinality() {
                    Some(q) => field.from_i64(rng.gen_range(0..q) as i64),
                    None => field.from_i64(rng.gen_range(-5..=5)),
                })
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlgBound {
    /// Least d with P_{≥1} ⊆ P_{≤d−1}.
    pub d: usize,
    pub m: usize,
    /// M_{d,m}, a bound on the degree of every combination.
    pub bound: u128,
    pub chain: PChain,
    pub samples: usize,
    pub sampled_max_degree: usize,
    /// Whether every sampled combination had degree ≤ M_{d,m}.
    pub consistent: bool,
}

/// The degree bound for all combinations of `elts` obtained from the chain,
/// cross-checked on `samples` seeded combinations.
pub fn subspace_alg_bound(
    alg: &StructureAlgebra,
    elts: &[AlgElement],
    samples: usize,
    seed: u64,
) -> Result<AlgBound, CriteriaError> {
    let chain = stabilized_p_chain(alg, elts, false)?;
    let d = chain.stabilization_degree;
    let m = elts.len();
    let bound = if m == 0 { 1 } else { m_bound(d, m) };
    let mut sampled_max_degree = 0;
    let mut tested: Vec<Vec<Scalar>> = (0..m)
        .map(|i| {
            let mut e = vec![alg.field().zero(); m];
            e[i] = alg.field().one();
            e
        })
        .collect();
    tested.extend(sample_coefficients(alg.field(), m, samples, seed));
    for coeffs in &tested {
        let v = combination(alg, coeffs, elts);
        sampled_max_degree =
            sampled_max_degree.max(algebraic_degree(alg, &v, Convention::NonUnital)?);
    }
    Ok(AlgBound {
        d,
        m,
        bound,
        chain,
        samples: tested.len(),
        sampled_max_degree,
        consistent: sampled_max_degree as u128 <= bound,
    })
}

/// One way of bounding the degree of every element of a subspace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum DegreeCandidate {
    /// M_{d,m} from the cumulative chain of a basis.
    ChainBinomial { d: usize, m: usize, bound: u128 },
    /// All positive powers lie in P_{≥1}, so degree ≤ dim P_{≥1} + 1.
    CumulativeSpan { dim: usize, bound: usize },
    /// Cayley–Hamilton on a faithful left ideal L: degree ≤ dim L (+1 without
    /// the unit).
    FaithfulLeftIdeal { ideal_dim: usize, bound: usize },
    /// Every element is nilpotent of index ≤ n.
    NilIndex { bound: usize },
    /// Powers of one element span at most D dimensions.
    Dimension { bound: usize },
    /// The chain was not computed: too many multidegrees.
    ChainSkipped { multidegrees: u128 },
}

impl DegreeCandidate {
    fn bound(&self) -> Option<u128> {
        match self {
            DegreeCandidate::ChainBinomial { bound, .. } => Some(*bound),
            DegreeCandidate::CumulativeSpan { bound, .. }
            | DegreeCandidate::FaithfulLeftIdeal { bound, .. }
            | DegreeCandidate::NilIndex { bound }
            | DegreeCandidate::Dimension { bound } => Some(*bound as u128),
            DegreeCandidate::ChainSkipped { .. } => None,
        }
    }
}

/// A certified uniform degree bound for a subspace, with the exact degree
/// observed on samples as a lower bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeCertificate {
    pub d: usize,
    pub convention: Convention,
    pub candidates: Vec<DegreeCandidate>,
    pub sampled_lower_bound: usize,
}

/// Largest number of multidegrees a chain certificate may visit per level.
pub const CHAIN_LEVEL_LIMIT: u128 = 20_000;

/// The smallest left ideal on which A acts faithfully, among sums of the
/// principal left ideals A·eᵢ + k·eᵢ chosen greedily.
pub fn faithful_left_ideal(alg: &StructureAlgebra) -> Result<Option<Subspace>, CriteriaError> {
    let field = alg.field();
    let d = alg.dim();
    let principal: Vec<Subspace> = (0..d)
        .map(|i| {
            let e = alg.basis_element(i);
            let vs = std::iter::once(e.clone()).chain((0..d).map(|j| alg.basis_product(j, i)));
            Subspace::span(field, d, vs)
        })
        .collect::<Result<_, _>>()?;
    let action_rank = |ideal: &Subspace| -> Result<usize, CriteriaError> {
        let rows = (0..d).map(|r| {
            ideal
                .basis()
                .iter()
                .flat_map(|l| alg.mul(&alg.basis_element(r), l))
                .collect::<Vector>()
        });
        Ok(Subspace::span(
            field,
            d * ideal.dim().max(1),
            rows.map(|v| if v.is_empty() { vec![field.zero()] } else { v }),
        )?
        .dim())
    };
    let mut best: Option<Subspace> = None;
    for l in &principal {
        if action_rank(l)? == d && best.as_ref().is_none_or(|b| l.dim() < b.dim()) {
            best = Some(l.clone());
        }
    }
    if best.is_some() {
        return Ok(best);
    }
    let mut current = Subspace::zero(field, d);
    let mut rank = 0;
    while rank < d {
        let mut pick: Option<(usize, usize, Subspace)> = None;
        for l in &principal {
            let candidate = current.sum(l)?;
            if candidate.dim() == current.dim() {
                continue;
            }
            let r = action_rank(&candidate)?;
            let better = match &pick {
                None => r > rank,
                Some((pr, pd, _)) => r > *pr || (r == *pr && candidate.dim() < *pd),
            };
            if better && r > rank {
                pick = Some((r, candidate.dim(), candidate));
            }
        }
        match pick {
            Some((r, _, c)) => {
                rank = r;
                current = c;
            }
            None => return Ok(None),
        }
    }
    Ok(Some(current))
}

/// A uniform degree bound for every element of span(`basis`), the minimum
/// over several independent certificates.
pub fn uniform_degree_certificate(
    alg: &StructureAlgebra,
    basis: &[AlgElement],
    convention: Convention,
    samples: usize,
    seed: u64,
) -> Result<DegreeCertificate, CriteriaError> {
    check_elements(alg, basis)?;
    if convention == Convention::Unital && alg.unit().is_none() {
        return Err(CriteriaError::NoUnit);
    }
    let dim = alg.dim();
    let m = basis.len();
    let mut candidates = vec![DegreeCandidate::Dimension {
        bound: if convention == Convention::Unital {
            dim
        } else {
            dim + 1
        },
    }];
    if m > 0 {
        let widest = (1..=dim)
            .map(|n| binomial((n + m - 1) as u64, (m - 1) as u64))
            .max()
            .unwrap_or(0);
        if widest <= CHAIN_LEVEL_LIMIT {
            let chain = stabilized_p_chain(alg, basis, false)?;
            candidates.push(DegreeCandidate::ChainBinomial {
                d: chain.stabilization_degree,
                m,
                bound: m_bound(chain.stabilization_degree, m),
            });
            candidates.push(DegreeCandidate::CumulativeSpan {
                dim: chain.cumulative_dim,
                bound: chain.cumulative_dim + 1,
            });
        } else {
            candidates.push(DegreeCandidate::ChainSkipped {
                multidegrees: widest,
            });
        }
        // A non-nilpotent basis vector rules the nil certificate out cheaply.
        let widest_nil = binomial((dim + m) as u64, (m - 1) as u64);
        if widest_nil <= CHAIN_LEVEL_LIMIT
            && basis.iter().all(|a| nilpotency_index(alg, a).is_some())
        {
            if let Some(n) = subspace_nil_index(alg, basis)?.index {
                candidates.push(DegreeCandidate::NilIndex { bound: n });
            }
        }
    } else {
        candidates.push(DegreeCandidate::NilIndex { bound: 1 });
    }
    if let Some(ideal) = faithful_left_ideal(alg)? {
        let extra = usize::from(convention == Convention::NonUnital);
        candidates.push(DegreeCandidate::FaithfulLeftIdeal {
            ideal_dim: ideal.dim(),
            bound: ideal.dim() + extra,
        });
    }
    let d = candidates
        .iter()
        .filter_map(DegreeCandidate::bound)
        .min()
        .expect("the dimension bound is always present") as usize;
    let mut sampled_lower_bound = 1;
    let mut tested: Vec<Vec<Scalar>> = (0..m)
        .map(|i| {
            let mut e = vec![alg.field().zero(); m];
            e[i] = alg.field().one();
            e
        })
        .collect();
    tested.extend(sample_coefficients(alg.field(), m, samples, seed));
    for coeffs in &tested {
        let v = combination(alg, coeffs, basis);
        sampled_lower_bound = sampled_lower_bound.max(algebraic_degree(alg, &v, convention)?);
    }
    Ok(DegreeCertificate {
        d,
        convention,
        candidates,
        sampled_lower_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    fn ut3() -> StructureAlgebra {
        builtins::upper_triangular(3, Field::Rationals)
            .unwrap()
            .algebra()
            .clone()
    }

    fn el(alg: &StructureAlgebra, s: &str) -> AlgElement {
        alg.parse_element(s).unwrap()
    }

    /// The subalgebra of 4×4 matrices spanned by a = E13 + E24, b = E22 + E44
    /// and c = E24: a² = 0, b² = b, ab = ba = bc = cb = c, other products 0.
    fn late_growth(field: Field) -> StructureAlgebra {
        let v = |xs: [i64; 3]| xs.iter().map(|&x| field.from_i64(x)).collect::<Vector>();
        StructureAlgebra::new(
            field,
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                (0, 1, v([0, 0, 1])),
                (1, 0, v([0, 0, 1])),
                (1, 1, v([0, 1, 0])),
                (1, 2, v([0, 0, 1])),
                (2, 1, v([0, 0, 1])),
            ],
            None,
        )
        .unwrap()
    }

    #[test]
    fn one_quiet_level_does_not_stabilize() {
        // Over GF(2), ab + ba = 0 so P₂ = span{b} ⊆ P₁, yet P₃ ∋ abb + bab + bba = c.
        let alg = late_growth(Field::prime(2).unwrap());
        let elts = [el(&alg, "a"), el(&alg, "b")];
        let p1 = span_p_alg(&alg, &elts, 1).unwrap();
        let p2 = span_p_alg(&alg, &elts, 2).unwrap();
        let p3 = span_p_alg(&alg, &elts, 3).unwrap();
        assert!(p2.is_subspace_of(&p1).unwrap());
        assert!(!p3.is_subspace_of(&p1).unwrap());
        let chain = stabilized_p_chain(&alg, &elts, false).unwrap();
        assert_eq!(chain.cumulative_dim, 3);
        assert_eq!(chain.stabilization_degree, 4);
        assert_eq!(chain.degree_dims, vec![2, 1, 2, 1]);
        assert_eq!(chain.new_dims, vec![2, 0, 1, 0]);

        // Over Q the same tensor has P₂ ∋ 2c and grows at once.
        let alg = late_growth(Field::Rationals);
        let chain = stabilized_p_chain(&alg, &[el(&alg, "a"), el(&alg, "b")], false).unwrap();
        assert_eq!(chain.degree_dims, vec![2, 2, 2]);
        assert_eq!(chain.stabilization_degree, 3);
    }

    #[test]
    fn chain_with_unit() {
        let ut = ut3();
        let chain = stabilized_p_chain(&ut, &[el(&ut, "E12")], true).unwrap();
        assert!(chain.includes_unit);
        assert_eq!(chain.cumulative_dim, 2);
        let strict = builtins::strictly_upper_triangular(3, Field::Rationals).unwrap();
        let alg = strict.algebra();
        assert_eq!(
            stabilized_p_chain(alg, &[el(alg, "E12")], true).unwrap_err(),
            CriteriaError::NoUnit
        );
    }

    #[test]
    fn nil_index_examples() {
        let ut = ut3();
        let r = subspace_nil_index(&ut, &[el(&ut, "E12"), el(&ut, "E23")]).unwrap();
        assert_eq!(r.index, Some(3));
        assert_eq!(r.guarantee, Guarantee::Exact);
        assert_eq!(
            subspace_nil_index(&ut, &[el(&ut, "E12")]).unwrap().index,
            Some(2)
        );
        assert_eq!(
            subspace_nil_index(&ut, &[el(&ut, "E11")]).unwrap().index,
            None
        );
        assert_eq!(
            subspace_nil_index(&ut, &[ut.zero()]).unwrap().index,
            Some(1)
        );
    }

    #[test]
    fn small_field_is_one_directional() {
        let f2 = Field::prime(2).unwrap();
        let ut = builtins::upper_triangular(3, f2).unwrap().algebra().clone();
        let r = subspace_nil_index(&ut, &[el(&ut, "E12"), el(&ut, "E23")]).unwrap();
        assert_eq!(r.index, Some(3));
        assert_eq!(r.guarantee, Guarantee::OneDirectional);
    }

    #[test]
    fn brute_force_examples() {
        let f5 = Field::prime(5).unwrap();
        let ut = builtins::upper_triangular(3, f5).unwrap().algebra().clone();
        let elts = [el(&ut, "E12"), el(&ut, "E23")];
        assert_eq!(
            brute_force_nil_index(&ut, &elts, BRUTE_FORCE_BUDGET).unwrap(),
            Some(3)
        );
        assert_eq!(
            brute_force_nil_index(&ut, &[ut.zero()], BRUTE_FORCE_BUDGET).unwrap(),
            Some(1)
        );
        let f2 = Field::prime(2).unwrap();
        let ut2 = builtins::upper_triangular(3, f2).unwrap().algebra().clone();
        assert_eq!(
            brute_force_nil_index(&ut2, &[el(&ut2, "E11")], BRUTE_FORCE_BUDGET).unwrap(),
            None
        );
        assert!(matches!(
            brute_force_nil_index(&ut, &elts, 10),
            Err(CriteriaError::Budget {
                needed: 25,
                limit: 10
            })
        ));
        assert!(matches!(
            brute_force_nil_index(&ut3(), &[], 10),
            Err(CriteriaError::InfiniteField(_))
        ));
    }

    #[test]
    fn algebraic_degree_examples() {
        let ut = ut3();
        assert_eq!(
            algebraic_degree(&ut, &el(&ut, "E11"), Convention::NonUnital).unwrap(),
            2
        );
        assert_eq!(
            algebraic_degree(&ut, &el(&ut, "E12"), Convention::NonUnital).unwrap(),
            2
        );
        assert_eq!(
            algebraic_degree(&ut, &el(&ut, "E11+2*E22"), Convention::NonUnital).unwrap(),
            3
        );
        assert_eq!(
            algebraic_degree(&ut, &ut.zero(), Convention::NonUnital).unwrap(),
            1
        );
        // The unit has unital degree 1 and non-unital degree 2.
        let one = ut.unit().unwrap().clone();
        assert_eq!(algebraic_degree(&ut, &one, Convention::Unital).unwrap(), 1);
        assert_eq!(
            algebraic_degree(&ut, &one, Convention::NonUnital).unwrap(),
            2
        );
    }

    #[test]
    fn alg_bound_examples() {
        assert_eq!(m_bound(2, 2), 3);
        assert_eq!(m_bound(3, 2), 6);
        let strict = builtins::strictly_upper_triangular(3, Field::Rationals).unwrap();
        let alg = strict.algebra();
        let elts = [el(alg, "E12"), el(alg, "E23"), el(alg, "E13")];
        let b = subspace_alg_bound(alg, &elts, 16, 7).unwrap();
        assert!(b.d <= 3);
        assert!(b.consistent);
        assert_eq!(b.sampled_max_degree, 3);

        let ut = ut3();
        let b = subspace_alg_bound(&ut, &[el(&ut, "E11"), el(&ut, "E22")], 16, 7).unwrap();
        assert_eq!((b.d, b.bound), (2, 3));
        assert_eq!(b.sampled_max_degree, 3);
        assert!(b.consistent);
    }

    #[test]
    fn faithful_ideal_of_upper_triangular_is_a_column() {
        let ut = builtins::upper_triangular(4, Field::Rationals)
            .unwrap()
            .algebra()
            .clone();
        assert_eq!(faithful_left_ideal(&ut).unwrap().unwrap().dim(), 4);
    }

    #[test]
    fn degree_certificates() {
        let ut4 = builtins::upper_triangular(4, Field::Rationals)
            .unwrap()
            .algebra()
            .clone();
        let cert =
            uniform_degree_certificate(&ut4, &ut4.basis_elements(), Convention::Unital, 8, 1)
                .unwrap();
        assert_eq!(cert.d, 4);
        assert!(cert.sampled_lower_bound <= cert.d);
        let strict = builtins::strictly_upper_triangular(3, Field::Rationals).unwrap();
        let alg = strict.algebra();
        let cert =
            uniform_degree_certificate(alg, &alg.basis_elements(), Convention::NonUnital, 8, 1)
                .unwrap();
        assert_eq!(cert.d, 3);
        assert_eq!(cert.sampled_lower_bound, 3);
    }

    #[test]
    fn sym_levels_match_direct_evaluation() {
        let ut = ut3();
        let elts = [el(&ut, "E11+E12"), el(&ut, "E23-E22"), el(&ut, "2*E13+E33")];
        let mut levels = SymLevels::new(&ut, &elts);
        for n in 1..=3 {
            let level = levels.next().unwrap();
            for (md, value) in level {
                let direct = ut
                    .evaluate(&crate::free::sym_poly(&md, Field::Rationals), &elts)
                    .unwrap();
                assert_eq!(value, direct, "n = {n}, md = {md}");
            }
        }
    }
}
