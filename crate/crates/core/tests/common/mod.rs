//! Dense reference implementations used as oracles. They share nothing with
//! the library beyond scalar arithmetic and reading structure constants.

#![allow(dead_code)]

use ordsym::{FilteredAlgebra, Scalar, StructureAlgebra};

pub type Tensor = Vec<Vec<Vec<Scalar>>>;

pub fn tensor(alg: &StructureAlgebra) -> Tensor {
    let d = alg.dim();
    (0..d)
        .map(|i| (0..d).map(|j| alg.basis_product(i, j)).collect())
        .collect()
}

pub fn dense_mul(t: &Tensor, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let d = a.len();
    let zero = a[0].sub(&a[0]);
    let mut out = vec![zero; d];
    for i in 0..d {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..d {
            if b[j].is_zero() {
                continue;
            }
            let c = a[i].mul(&b[j]);
            for k in 0..d {
                out[k] = out[k].add(&c.mul(&t[i][j][k]));
            }
        }
    }
    out
}

fn unit_vector(like: &Scalar, d: usize, i: usize) -> Vec<Scalar> {
    let zero = like.sub(like);
    let one = like.field().one();
    (0..d)
        .map(|k| if k == i { one.clone() } else { zero.clone() })
        .collect()
}

/// Associativity on every basis triple plus two-sided unit laws.
pub fn algebra_is_valid(alg: &StructureAlgebra) -> bool {
    let t = tensor(alg);
    let d = alg.dim();
    let f = alg.field();
    let e: Vec<Vec<Scalar>> = (0..d).map(|i| unit_vector(&f.zero(), d, i)).collect();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let left = dense_mul(&t, &t[i][j], &e[k]);
                let right = dense_mul(&t, &e[i], &t[j][k]);
                if left != right {
                    return false;
                }
            }
        }
    }
    if let Some(u) = alg.unit() {
        for x in &e {
            if &dense_mul(&t, u, x) != x || &dense_mul(&t, x, u) != x {
                return false;
            }
        }
    }
    true
}

/// Row-reduced rows with their pivot columns, by plain Gaussian elimination.
pub struct Echelon {
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl Echelon {
    pub fn new(vectors: &[Vec<Scalar>]) -> Self {
        let mut e = Echelon { rows: Vec::new() };
        for v in vectors {
            e.insert(v);
        }
        e
    }

    fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let factor = v[*p].clone();
                for k in 0..v.len() {
                    v[k] = v[k].sub(&factor.mul(&row[k]));
                }
            }
        }
        v
    }

    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().unwrap();
        let r: Vec<Scalar> = r.iter().map(|x| x.mul(&inv)).collect();
        for (_, row) in &mut self.rows {
            if !row[p].is_zero() {
                let factor = row[p].clone();
                for k in 0..row.len() {
                    row[k] = row[k].sub(&factor.mul(&r[k]));
                }
            }
        }
        self.rows.push((p, r));
        true
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }
}

pub fn rank(vectors: &[Vec<Scalar>]) -> usize {
    Echelon::new(vectors).rank()
}

/// Nesting, exhaustion and F_i F_j ⊆ F_{i+j}, with stages given by spanning
/// vectors.
pub fn filtration_is_valid(alg: &StructureAlgebra, stages: &[Vec<Vec<Scalar>>]) -> bool {
    let t = tensor(alg);
    let top = stages.len() - 1;
    let spans: Vec<Echelon> = stages.iter().map(|s| Echelon::new(s)).collect();
    for s in 1..=top {
        if stages[s - 1].iter().any(|v| !spans[s].contains(v)) {
            return false;
        }
    }
    if spans[top].rank() != alg.dim() {
        return false;
    }
    for i in 0..=top {
        for j in 0..=top {
            let target = &spans[(i + j).min(top)];
            for u in &stages[i] {
                for v in &stages[j] {
                    if !target.contains(&dense_mul(&t, u, v)) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

pub fn stages_of(fa: &FilteredAlgebra) -> Vec<Vec<Vec<Scalar>>> {
    fa.chain().iter().map(|s| s.basis().to_vec()).collect()
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= (n - i) as u128;
        den *= (i + 1) as u128;
    }
    (num / den) as u64
}

/// vⁿ = 0, by repeated dense multiplication.
pub fn dense_power_is_zero(alg: &StructureAlgebra, v: &[Scalar], n: usize) -> bool {
    let t = tensor(alg);
    let mut p = v.to_vec();
    for _ in 1..n {
        p = dense_mul(&t, &p, v);
    }
    p.iter().all(Scalar::is_zero)
}
