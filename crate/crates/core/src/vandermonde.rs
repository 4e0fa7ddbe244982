//! Vandermonde recovery of vector-valued coefficients.
//!
//! If Σᵢ ξⱼⁱ vᵢ = wⱼ for d+1 distinct nodes ξⱼ, the vᵢ are determined by the
//! wⱼ, and every vᵢ lies in any subspace that contains all the wⱼ. The
//! multivariate version peels one coefficient variable at a time.

use std::collections::{BTreeMap, HashMap};

use crate::free::MultiDegree;
use crate::scalar::{Field, Scalar};
use crate::subspace::{rref, SpaceError, Vector};

fn check_distinct(nodes: &[Scalar]) -> Result<(), SpaceError> {
    for (i, a) in nodes.iter().enumerate() {
        if nodes[..i].contains(a) {
            return Err(SpaceError::RepeatedNode(a.clone()));
        }
    }
    Ok(())
}

/// Given nodes ξ₀..ξ_d and values w₀..w_d, returns v₀..v_d with
/// Σᵢ ξⱼⁱ vᵢ = wⱼ for every j. Solved by elimination on the augmented system.
pub fn vandermonde_recover(nodes: &[Scalar], values: &[Vector]) -> Result<Vec<Vector>, SpaceError> {
    let d1 = nodes.len();
    if values.len() != d1 {
        return Err(SpaceError::NodeCount {
            needed: values.len(),
            got: d1,
        });
    }
    if d1 == 0 {
        return Ok(Vec::new());
    }
    check_distinct(nodes)?;
    let field = nodes[0].field();
    let width = values[0].len();
    for (index, w) in values.iter().enumerate() {
        if w.len() != width {
            return Err(SpaceError::Ragged {
                index,
                expected: width,
                got: w.len(),
            });
        }
    }
    let rows: Vec<Vector> = nodes
        .iter()
        .zip(values)
        .map(|(xi, w)| {
            let mut row: Vector = Vec::with_capacity(d1 + width);
            let mut power = field.one();
            for _ in 0..d1 {
                row.push(power.clone());
                power = power.mul(xi);
            }
            row.extend(w.iter().cloned());
            row
        })
        .collect();
    let (rows, pivots) = rref(rows, d1 + width);
    // Distinct nodes make the Vandermonde block invertible, so the pivots are
    // exactly the first d+1 columns.
    debug_assert_eq!(pivots, (0..d1).collect::<Vec<_>>());
    Ok(rows.into_iter().map(|row| row[d1..].to_vec()).collect())
}

/// Forward map: wⱼ = Σᵢ ξⱼⁱ vᵢ.
pub fn vandermonde_forward(nodes: &[Scalar], coeffs: &[Vector]) -> Vec<Vector> {
    nodes
        .iter()
        .map(|xi| {
            let width = coeffs.first().map_or(0, Vec::len);
            let mut acc = vec![xi.field().zero(); width];
            let mut power = xi.field().one();
            for v in coeffs {
                for (a, x) in acc.iter_mut().zip(v) {
                    *a = a.add(&power.mul(x));
                }
                power = power.mul(xi);
            }
            acc
        })
        .collect()
}

fn point_key(point: &[Scalar]) -> String {
    let parts: Vec<String> = point.iter().map(Scalar::to_string).collect();
    format!("({})", parts.join(","))
}

/// Recovers the vectors w_μ, |μ| = n, from evaluations
/// E(α⃗) = Σ_μ α₁^{μ₁}⋯αₘ^{μₘ} w_μ on the grid `sample`ᵐ, by induction on m:
/// the first variable is separated by a Vandermonde solve at each point of
/// the remaining grid, then each coefficient is a problem in m−1 variables.
pub fn multi_vandermonde_extract(
    m: usize,
    n: usize,
    sample: &[Scalar],
    evaluations: &HashMap<Vec<Scalar>, Vector>,
) -> Result<BTreeMap<MultiDegree, Vector>, SpaceError> {
    if sample.len() < n + 1 {
        return Err(SpaceError::InsufficientSample {
            needed: n + 1,
            got: sample.len(),
        });
    }
    check_distinct(sample)?;
    if m == 0 {
        return Err(SpaceError::InsufficientSample { needed: 1, got: 0 });
    }
    extract(m, n, &sample[..=n], evaluations)
}

fn extract(
    m: usize,
    n: usize,
    sample: &[Scalar],
    evals: &HashMap<Vec<Scalar>, Vector>,
) -> Result<BTreeMap<MultiDegree, Vector>, SpaceError> {
    let lookup = |point: &[Scalar]| {
        evals
            .get(point)
            .ok_or_else(|| SpaceError::MissingEvaluation(point_key(point)))
    };
    let mut out = BTreeMap::new();
    if m == 1 {
        // α^n·w = E(α) for any nonzero α in the sample (any α when n = 0).
        let alpha = if n == 0 {
            &sample[0]
        } else {
            sample
                .iter()
                .find(|a| !a.is_zero())
                .expect("a sample of two distinct values has a nonzero element")
        };
        let w = lookup(std::slice::from_ref(alpha))?;
        let scale = alpha.pow(n as u32).inv().expect("nonzero power");
        out.insert(
            MultiDegree(vec![n]),
            w.iter().map(|x| x.mul(&scale)).collect(),
        );
        return Ok(out);
    }
    let nodes = &sample[..=n];
    let rest_grid = crate::free::grid(sample, m - 1);
    // layers[r] maps a point of the remaining grid to the coefficient of α₁^r.
    let mut layers: Vec<HashMap<Vec<Scalar>, Vector>> = vec![HashMap::new(); n + 1];
    for rest in rest_grid {
        let values = nodes
            .iter()
            .map(|a1| {
                let mut point = Vec::with_capacity(m);
                point.push(a1.clone());
                point.extend(rest.iter().cloned());
                lookup(&point).cloned()
            })
            .collect::<Result<Vec<_>, _>>()?;
        for (r, v) in vandermonde_recover(nodes, &values)?.into_iter().enumerate() {
            layers[r].insert(rest.clone(), v);
        }
    }
    for (r, layer) in layers.iter().enumerate() {
        for (md, v) in extract(m - 1, n - r, &sample[..=n - r], layer)? {
            let mut e = Vec::with_capacity(m);
            e.push(r);
            e.extend(md.0);
            out.insert(MultiDegree(e), v);
        }
    }
    Ok(out)
}

/// Evaluates Σ_μ α^μ w_μ at every point of `sample`ᵐ.
pub fn multi_vandermonde_forward(
    field: Field,
    m: usize,
    sample: &[Scalar],
    coeffs: &BTreeMap<MultiDegree, Vector>,
) -> HashMap<Vec<Scalar>, Vector> {
    let width = coeffs.values().next().map_or(0, Vec::len);
    crate::free::grid(sample, m)
        .into_iter()
        .map(|point| {
            let mut acc = vec![field.zero(); width];
            for (md, w) in coeffs {
                let c = md
                    .exponents()
                    .iter()
                    .zip(&point)
                    .fold(field.one(), |acc, (&e, a)| acc.mul(&a.pow(e as u32)));
                for (x, y) in acc.iter_mut().zip(w) {
                    *x = x.add(&c.mul(y));
                }
            }
            (point, acc)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::Subspace;

    fn q() -> Field {
        Field::Rationals
    }

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| q().from_i64(x)).collect()
    }

    #[test]
    fn degree_zero_is_identity() {
        let w = v(&[3, -1]);
        let out = vandermonde_recover(&[q().from_i64(5)], std::slice::from_ref(&w)).unwrap();
        assert_eq!(out, vec![w]);
    }

    #[test]
    fn recovers_known_coefficients() {
        let nodes = q().distinct_scalars(3).unwrap();
        let coeffs = vec![v(&[1, 2]), v(&[0, -3]), v(&[5, 7])];
        let ws = vandermonde_forward(&nodes, &coeffs);
        // At ξ = 2: v0 + 2 v1 + 4 v2 = (21, 24)
        assert_eq!(ws[2], v(&[21, 24]));
        assert_eq!(vandermonde_recover(&nodes, &ws).unwrap(), coeffs);
    }

    #[test]
    fn repeated_nodes_rejected() {
        let one = q().one();
        let err =
            vandermonde_recover(&[one.clone(), one.clone()], &[v(&[1]), v(&[2])]).unwrap_err();
        assert_eq!(err, SpaceError::RepeatedNode(one));
    }

    #[test]
    fn membership_transport() {
        // All w_j in W = span{(1,1,0)} forces every v_i into W.
        let w_space = Subspace::span(q(), 3, [v(&[1, 1, 0])]).unwrap();
        let nodes = q().distinct_scalars(3).unwrap();
        let ws = vec![v(&[2, 2, 0]), v(&[-1, -1, 0]), v(&[7, 7, 0])];
        for vi in vandermonde_recover(&nodes, &ws).unwrap() {
            assert!(w_space.contains(&vi).unwrap());
        }
    }

    #[test]
    fn single_variable_extract_matches_recover() {
        let sample = q().distinct_scalars(4).unwrap();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(MultiDegree(vec![3]), v(&[2, -1]));
        let evals = multi_vandermonde_forward(q(), 1, &sample, &coeffs);
        assert_eq!(
            multi_vandermonde_extract(1, 3, &sample, &evals).unwrap(),
            coeffs
        );
    }

    #[test]
    fn two_variable_extract() {
        let sample = q().distinct_scalars(3).unwrap();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(MultiDegree(vec![2, 0]), v(&[1, 0, 0]));
        coeffs.insert(MultiDegree(vec![1, 1]), v(&[0, 4, -2]));
        coeffs.insert(MultiDegree(vec![0, 2]), v(&[3, 3, 3]));
        let evals = multi_vandermonde_forward(q(), 2, &sample, &coeffs);
        assert_eq!(
            multi_vandermonde_extract(2, 2, &sample, &evals).unwrap(),
            coeffs
        );
    }

    #[test]
    fn too_small_sample() {
        let sample = q().distinct_scalars(2).unwrap();
        let err = multi_vandermonde_extract(2, 2, &sample, &HashMap::new()).unwrap_err();
        assert_eq!(err, SpaceError::InsufficientSample { needed: 3, got: 2 });
    }

    #[test]
    fn missing_grid_point() {
        let sample = q().distinct_scalars(2).unwrap();
        let err = multi_vandermonde_extract(2, 1, &sample, &HashMap::new()).unwrap_err();
        assert!(matches!(err, SpaceError::MissingEvaluation(_)));
    }
}
