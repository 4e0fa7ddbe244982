//! Small filtered algebras used as examples and test fixtures.

use thiserror::Error;

use crate::algebra::{AlgElement, StructureAlgebra};
use crate::filtration::{FilteredAlgebra, GradedError};
use crate::scalar::Field;
use crate::subspace::zero_vector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuiltinError {
    #[error("unknown builtin {0:?}; expected one of {names}", names = NAMES.join(", "))]
    Unknown(String),
    #[error("builtin {name} needs an integer parameter, got {given:?}")]
    Parameter { name: String, given: String },
    #[error("builtin {name} needs a parameter of at least {min}, got {got}")]
    TooSmall {
        name: String,
        min: usize,
        got: usize,
    },
    #[error(transparent)]
    Graded(#[from] GradedError),
}

pub const NAMES: [&str; 4] = [
    "upper-triangular",
    "strictly-upper-triangular",
    "truncated-polynomial",
    "exterior-algebra",
];

/// Upper bound on builtin parameters, to keep structure tensors small.
pub const MAX_PARAMETER: usize = 12;

fn check_range(name: &str, n: usize, min: usize) -> Result<(), BuiltinError> {
    if n < min {
        return Err(BuiltinError::TooSmall {
            name: name.into(),
            min,
            got: n,
        });
    }
    if n > MAX_PARAMETER {
        return Err(BuiltinError::Parameter {
            name: name.into(),
            given: format!("{n} (maximum {MAX_PARAMETER})"),
        });
    }
    Ok(())
}

/// Parses `NAME:PARAM`, e.g. `upper-triangular:3`.
pub fn by_name(label: &str, field: Field) -> Result<FilteredAlgebra, BuiltinError> {
    let (name, param) = label.split_once(':').unwrap_or((label, ""));
    if !NAMES.contains(&name) {
        return Err(BuiltinError::Unknown(name.to_string()));
    }
    let n: usize = param.trim().parse().map_err(|_| BuiltinError::Parameter {
        name: name.to_string(),
        given: param.to_string(),
    })?;
    match name {
        "upper-triangular" => upper_triangular(n, field),
        "strictly-upper-triangular" => strictly_upper_triangular(n, field),
        "truncated-polynomial" => truncated_polynomial(n, field),
        _ => exterior_algebra(n, field),
    }
}

/// Every builtin at a few small parameters, labelled.
pub fn catalogue(field: Field) -> Vec<(String, FilteredAlgebra)> {
    let labels = [
        "upper-triangular:2",
        "upper-triangular:3",
        "upper-triangular:4",
        "strictly-upper-triangular:3",
        "strictly-upper-triangular:4",
        "truncated-polynomial:3",
        "truncated-polynomial:4",
        "exterior-algebra:2",
        "exterior-algebra:3",
    ];
    labels
        .iter()
        .map(|s| {
            (
                s.to_string(),
                by_name(s, field).expect("catalogue entries are valid"),
            )
        })
        .collect()
}

fn unit_name(i: usize, j: usize, n: usize) -> String {
    if n > 9 {
        format!("E{i},{j}")
    } else {
        format!("E{i}{j}")
    }
}

/// Matrix units E_ij (i ≤ j, or i < j when `strict`) in row-major order,
/// filtered by band width: F_k = span{E_ij : j − i ≤ k}.
fn triangular(n: usize, field: Field, strict: bool) -> Result<FilteredAlgebra, BuiltinError> {
    let offset = usize::from(strict);
    let pairs: Vec<(usize, usize)> = (1..=n)
        .flat_map(|i| (i + offset..=n).map(move |j| (i, j)))
        .collect();
    let dim = pairs.len();
    let index = |i: usize, j: usize| pairs.iter().position(|&p| p == (i, j));
    let names = pairs.iter().map(|&(i, j)| unit_name(i, j, n)).collect();
    let mut products = Vec::new();
    for (a, &(i, j)) in pairs.iter().enumerate() {
        for (b, &(k, l)) in pairs.iter().enumerate() {
            if j == k {
                if let Some(c) = index(i, l) {
                    let mut v = zero_vector(field, dim);
                    v[c] = field.one();
                    products.push((a, b, v));
                }
            }
        }
    }
    let unit = (!strict).then(|| {
        let mut u = zero_vector(field, dim);
        for i in 1..=n {
            u[index(i, i).expect("diagonal present")] = field.one();
        }
        u
    });
    let algebra =
        StructureAlgebra::new_unchecked(field, names, products, unit).map_err(GradedError::from)?;
    let stages = (0..n)
        .map(|k| {
            pairs
                .iter()
                .enumerate()
                .filter(|(_, &(i, j))| j - i <= k)
                .map(|(c, _)| algebra.basis_element(c))
                .collect::<Vec<AlgElement>>()
        })
        .collect();
    Ok(FilteredAlgebra::from_spanning(algebra, stages)?)
}

/// n×n upper-triangular matrices with the band filtration, t = n − 1.
pub fn upper_triangular(n: usize, field: Field) -> Result<FilteredAlgebra, BuiltinError> {
    check_range("upper-triangular", n, 1)?;
    triangular(n, field, false)
}

/// n×n strictly upper-triangular matrices (no unit); F₀ = 0.
pub fn strictly_upper_triangular(n: usize, field: Field) -> Result<FilteredAlgebra, BuiltinError> {
    check_range("strictly-upper-triangular", n, 2)?;
    triangular(n, field, true)
}

/// k[t]/(tⁿ) with basis 1, t, …, t^{n−1} and F_i = span{1, …, tⁱ}.
pub fn truncated_polynomial(n: usize, field: Field) -> Result<FilteredAlgebra, BuiltinError> {
    check_range("truncated-polynomial", n, 1)?;
    let names = (0..n)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "t".to_string(),
            _ => format!("t^{i}"),
        })
        .collect();
    let mut products = Vec::new();
    for i in 0..n {
        for j in 0..n - i {
            let mut v = zero_vector(field, n);
            v[i + j] = field.one();
            products.push((i, j, v));
        }
    }
    let mut unit = zero_vector(field, n);
    unit[0] = field.one();
    let algebra = StructureAlgebra::new_unchecked(field, names, products, Some(unit))
        .map_err(GradedError::from)?;
    let stages = (0..n)
        .map(|k| (0..=k).map(|c| algebra.basis_element(c)).collect())
        .collect();
    Ok(FilteredAlgebra::from_spanning(algebra, stages)?)
}

/// The exterior algebra on g generators, basis = subsets ordered by size
/// then lexicographically, filtered by word length.
pub fn exterior_algebra(g: usize, field: Field) -> Result<FilteredAlgebra, BuiltinError> {
    check_range("exterior-algebra", g, 1)?;
    let mut subsets: Vec<Vec<usize>> = (0u32..1 << g)
        .map(|mask| (1..=g).filter(|&i| mask & (1 << (i - 1)) != 0).collect())
        .collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let dim = subsets.len();
    let names = subsets
        .iter()
        .map(|s| {
            if s.is_empty() {
                "1".to_string()
            } else {
                s.iter().map(|i| format!("e{i}")).collect()
            }
        })
        .collect();
    let mut products = Vec::new();
    for (a, s) in subsets.iter().enumerate() {
        for (b, r) in subsets.iter().enumerate() {
            if s.iter().any(|x| r.contains(x)) {
                continue;
            }
            // Sign of the shuffle sorting s ++ r: one transposition per pair
            // x ∈ s, y ∈ r with x > y.
            let inversions: usize = s.iter().map(|x| r.iter().filter(|&y| y < x).count()).sum();
            let mut merged: Vec<usize> = s.iter().chain(r).copied().collect();
            merged.sort_unstable();
            let c = subsets
                .iter()
                .position(|t| *t == merged)
                .expect("subset present");
            let mut v = zero_vector(field, dim);
            v[c] = if inversions.is_multiple_of(2) {
                field.one()
            } else {
                field.one().neg()
            };
            products.push((a, b, v));
        }
    }
    let mut unit = zero_vector(field, dim);
    unit[0] = field.one();
    let algebra = StructureAlgebra::new_unchecked(field, names, products, Some(unit))
        .map_err(GradedError::from)?;
    let stages = (0..=g)
        .map(|k| {
            subsets
                .iter()
                .enumerate()
                .filter(|(_, s)| s.len() <= k)
                .map(|(c, _)| algebra.basis_element(c))
                .collect()
        })
        .collect();
    Ok(FilteredAlgebra::from_spanning(algebra, stages)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn dimensions_and_chains() {
        let ut = upper_triangular(3, q()).unwrap();
        assert_eq!(ut.algebra().dim(), 6);
        assert_eq!(ut.stage_dims(), vec![3, 5, 6]);
        let tp = truncated_polynomial(4, q()).unwrap();
        assert_eq!(tp.algebra().dim(), 4);
        assert_eq!(tp.stage_dims(), vec![1, 2, 3, 4]);
        let ext = exterior_algebra(2, q()).unwrap();
        assert_eq!(ext.algebra().names(), ["1", "e1", "e2", "e1e2"]);
        assert_eq!(ext.stage_dims(), vec![1, 3, 4]);
        let su = strictly_upper_triangular(3, q()).unwrap();
        assert_eq!(su.stage_dims(), vec![0, 2, 3]);
        assert!(su.algebra().unit().is_none());
    }

    #[test]
    fn every_builtin_validates_over_several_fields() {
        for field in [q(), Field::prime(2).unwrap(), Field::prime(5).unwrap()] {
            for (name, fa) in catalogue(field) {
                assert!(fa.algebra().validate().passed, "{name} over {field}");
                assert!(fa.validate().passed, "{name} over {field}");
            }
        }
    }

    #[test]
    fn exterior_signs() {
        let ext = exterior_algebra(3, q()).unwrap();
        let alg = ext.algebra();
        let e = |s: &str| alg.parse_element(s).unwrap();
        assert_eq!(alg.mul(&e("e2"), &e("e1")), e("-e1e2"));
        assert_eq!(alg.mul(&e("e1e3"), &e("e2")), e("-e1e2e3"));
        assert_eq!(alg.mul(&e("e1"), &e("e1")), alg.zero());
    }

    #[test]
    fn label_parsing() {
        assert_eq!(
            by_name("upper-triangular:4", q()).unwrap().algebra().dim(),
            10
        );
        assert!(matches!(
            by_name("nope:3", q()),
            Err(BuiltinError::Unknown(_))
        ));
        assert!(matches!(
            by_name("upper-triangular:x", q()),
            Err(BuiltinError::Parameter { .. })
        ));
        assert!(matches!(
            by_name("strictly-upper-triangular:1", q()),
            Err(BuiltinError::TooSmall { .. })
        ));
    }

    #[test]
    fn wide_matrices_use_separated_names() {
        let ut = upper_triangular(10, q()).unwrap();
        assert!(ut.algebra().basis_index("E1,10").is_some());
    }
}
