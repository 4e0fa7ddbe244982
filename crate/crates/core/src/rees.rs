//! The Rees algebra R = ⊕ xⁿFₙ ⊆ A[x], integrality over k[x], and the
//! comparison of gr(A) with R/xR.

use std::fmt;

use serde::Serialize;

use crate::algebra::AlgElement;
use crate::filtration::{FilteredAlgebra, GradedAlgebra, GradedError};
use crate::scalar::Scalar;
use crate::subspace::{add_vectors, axpy, is_zero_vector, solve_combination, zero_vector, Vector};

/// A polynomial a₀ + a₁x + … + a_sx^s with aₙ ∈ Fₙ. Trailing zero
/// coefficients are trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReesElement {
    coeffs: Vec<AlgElement>,
}

fn trim(mut coeffs: Vec<AlgElement>) -> Vec<AlgElement> {
    while coeffs.last().is_some_and(|c| is_zero_vector(c)) {
        coeffs.pop();
    }
    coeffs
}

impl ReesElement {
    /// Validates aₙ ∈ Fₙ for every coefficient.
    pub fn new(fa: &FilteredAlgebra, coeffs: Vec<AlgElement>) -> Result<Self, GradedError> {
        for (n, a) in coeffs.iter().enumerate() {
            fa.algebra().check_element(a)?;
            if !fa.stage(n).contains(a)? {
                return Err(GradedError::NotInFiltration { degree: n });
            }
        }
        Ok(ReesElement {
            coeffs: trim(coeffs),
        })
    }

    pub fn zero() -> Self {
        ReesElement { coeffs: Vec::new() }
    }

    /// `a·xⁿ` for a ∈ Fₙ.
    pub fn monomial(fa: &FilteredAlgebra, a: AlgElement, n: usize) -> Result<Self, GradedError> {
        let mut coeffs = vec![fa.algebra().zero(); n];
        coeffs.push(a);
        Self::new(fa, coeffs)
    }

    /// The identity 1·x⁰, when the unit lies in F₀.
    pub fn one(fa: &FilteredAlgebra) -> Option<Self> {
        if !fa.unit_in_base() {
            return None;
        }
        let unit = fa.algebra().unit()?.clone();
        Some(ReesElement {
            coeffs: trim(vec![unit]),
        })
    }

    pub fn coeffs(&self) -> &[AlgElement] {
        &self.coeffs
    }

    /// Coefficient of xⁿ; `None` stands for zero.
    pub fn coeff(&self, n: usize) -> Option<&AlgElement> {
        self.coeffs.get(n)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in x; `None` for the zero element.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &ReesElement) -> ReesElement {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|n| match (self.coeffs.get(n), other.coeffs.get(n)) {
                (Some(a), Some(b)) => add_vectors(a, b),
                (Some(a), None) | (None, Some(a)) => a.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        ReesElement {
            coeffs: trim(coeffs),
        }
    }

    pub fn sub(&self, other: &ReesElement) -> ReesElement {
        let negated = ReesElement {
            coeffs: other
                .coeffs
                .iter()
                .map(|a| a.iter().map(Scalar::neg).collect())
                .collect(),
        };
        self.add(&negated)
    }

    pub fn scale(&self, c: &Scalar) -> ReesElement {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| a.iter().map(|x| x.mul(c)).collect())
            .collect();
        ReesElement {
            coeffs: trim(coeffs),
        }
    }

    /// Convolution product in A[x]. Closed in R because FᵢFⱼ ⊆ F_{i+j}.
    pub fn mul(&self, other: &ReesElement, fa: &FilteredAlgebra) -> ReesElement {
        if self.is_zero() || other.is_zero() {
            return ReesElement::zero();
        }
        let alg = fa.algebra();
        let one = alg.field().one();
        let mut coeffs = vec![alg.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if is_zero_vector(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !is_zero_vector(b) {
                    axpy(&mut coeffs[i + j], &one, &alg.mul(a, b));
                }
            }
        }
        ReesElement {
            coeffs: trim(coeffs),
        }
    }

    /// aⁿ for n ≥ 1, or the unit for n = 0 when 1 ∈ F₀.
    pub fn pow(&self, n: usize, fa: &FilteredAlgebra) -> Option<ReesElement> {
        if n == 0 {
            return ReesElement::one(fa);
        }
        let mut out = self.clone();
        for _ in 1..n {
            out = out.mul(self, fa);
        }
        Some(out)
    }

    /// Membership in xR = ⊕_{n≥1} xⁿF_{n−1}: no constant term and the
    /// coefficient of xⁿ in F_{n−1}.
    pub fn in_xr(&self, fa: &FilteredAlgebra) -> bool {
        self.first_outside_xr(fa).is_none()
    }

    /// The least degree whose coefficient violates membership in xR.
    pub fn first_outside_xr(&self, fa: &FilteredAlgebra) -> Option<usize> {
        self.coeffs.iter().enumerate().find_map(|(n, a)| {
            let ok = match n {
                0 => is_zero_vector(a),
                _ => fa.stage(n - 1).contains(a).unwrap_or(false),
            };
            (!ok).then_some(n)
        })
    }

    pub fn format(&self, fa: &FilteredAlgebra) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| !is_zero_vector(a))
            .map(|(n, a)| {
                let body = fa.algebra().format_element(a);
                let body = if body.contains(" + ") {
                    format!("({body})")
                } else {
                    body
                };
                match n {
                    0 => body,
                    1 => format!("{body}·x"),
                    _ => format!("{body}·x^{n}"),
                }
            })
            .collect();
        parts.join(" + ")
    }
}

/// A polynomial with scalar coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyOverK {
    coeffs: Vec<Scalar>,
}

impl PolyOverK {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        PolyOverK { coeffs }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
}

impl fmt::Display for PolyOverK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{k}"),
            };
            parts.push(match (k, c.is_one()) {
                (0, _) => c.to_string(),
                (_, true) => mono,
                _ => format!("{c}{mono}"),
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for PolyOverK {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// a(x)ⁿ = q_{n−1}(x)a(x)ⁿ⁻¹ + … + q₀(x).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegralWitness {
    pub n: usize,
    /// q₀, …, q_{n−1}.
    pub polys: Vec<PolyOverK>,
    pub deg_max: usize,
}

/// Searches n = 1..=n_max for a monic relation of a over k[x], solving one
/// exact linear system per n in the coefficients of the qᵢ (degree ≤
/// `deg_max`, default m·n for a of degree m). q₀ is used only when 1 ∈ F₀.
pub fn integral_witness(
    fa: &FilteredAlgebra,
    a: &ReesElement,
    n_max: usize,
    deg_max: Option<usize>,
) -> Option<IntegralWitness> {
    let alg = fa.algebra();
    let field = alg.field();
    let dim = alg.dim();
    let m = a.degree().unwrap_or(0);
    let one = ReesElement::one(fa);
    let mut powers = vec![one.clone().unwrap_or_else(ReesElement::zero), a.clone()];
    for n in 1..=n_max {
        while powers.len() <= n {
            let next = powers.last().expect("nonempty").mul(a, fa);
            powers.push(next);
        }
        let deg = deg_max.unwrap_or(m * n);
        let lowest = if one.is_some() { 0 } else { 1 };
        let top = (lowest..n)
            .map(|i| powers[i].degree().map_or(0, |g| g + deg))
            .chain(std::iter::once(powers[n].degree().unwrap_or(0)))
            .max()
            .unwrap_or(0);
        let flatten = |r: &ReesElement, shift: usize| -> Vector {
            let mut v = zero_vector(field, (top + 1) * dim);
            for (e, c) in r.coeffs().iter().enumerate() {
                if e + shift <= top {
                    v[(e + shift) * dim..(e + shift + 1) * dim].clone_from_slice(c);
                }
            }
            v
        };
        let mut columns = Vec::new();
        for power in &powers[lowest..n] {
            for k in 0..=deg {
                columns.push(flatten(power, k));
            }
        }
        let target = flatten(&powers[n], 0);
        let solution = if columns.is_empty() {
            is_zero_vector(&target).then(Vec::new)
        } else {
            solve_combination(field, &columns, &target)
        };
        if let Some(sol) = solution {
            let mut polys = vec![PolyOverK::new(Vec::new()); lowest];
            for chunk in sol.chunks(deg + 1) {
                polys.push(PolyOverK::new(chunk.to_vec()));
            }
            return Some(IntegralWitness {
                n,
                polys,
                deg_max: deg,
            });
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerMembership {
    /// Top degree m of a.
    pub m: usize,
    /// Degree n of the integral relation.
    pub n: usize,
    /// N = m(n−1)+1.
    pub big_n: usize,
    pub power: String,
    pub power_in_xr: bool,
    /// Least N′ ≤ N with a^{N′} ∈ xR.
    pub least_power: Option<usize>,
    pub element_in_xr: bool,
}

/// For a = a₁x + … + aₘxᵐ integral of degree n, computes a^N with
/// N = m(n−1)+1 and certifies a^N ∈ xR.
pub fn lemma_thelem_check(
    fa: &FilteredAlgebra,
    a: &ReesElement,
    n: usize,
) -> Result<PowerMembership, GradedError> {
    if a.coeff(0).is_some_and(|c| !is_zero_vector(c)) {
        return Err(GradedError::ConstantTerm);
    }
    let m = a.degree().unwrap_or(0);
    let big_n = m * n.saturating_sub(1) + 1;
    let mut least_power = None;
    let mut power = a.clone();
    for k in 1..=big_n {
        if k > 1 {
            power = power.mul(a, fa);
        }
        if least_power.is_none() && power.in_xr(fa) {
            least_power = Some(k);
        }
    }
    Ok(PowerMembership {
        m,
        n,
        big_n,
        power: power.format(fa),
        power_in_xr: power.in_xr(fa),
        least_power,
        element_in_xr: a.in_xr(fa),
    })
}

/// Per-degree dimensions that must agree for gr(A) ≅ R/xR.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeLedger {
    pub degree: usize,
    /// Classes of this degree in the graded algebra.
    pub gr_dim: usize,
    /// dim Fᵢ − dim F_{i−1}.
    pub filtration_dim: usize,
    /// dim of (xⁱFᵢ + xR)/xR, i.e. dim Fᵢ − dim(Fᵢ ∩ F_{i−1}).
    pub quotient_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductMismatch {
    pub left: String,
    pub right: String,
    /// Degree of the first coefficient of φ(c)φ(c′) − φ(cc′) outside xR.
    pub degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoReport {
    pub passed: bool,
    pub maxdeg: usize,
    pub pairs_checked: usize,
    pub mismatches: Vec<ProductMismatch>,
    /// Classes whose image lies in xR or whose representatives are dependent
    /// modulo the previous stage.
    pub injectivity_failures: Vec<String>,
    pub ledger: Vec<DegreeLedger>,
}

/// Checks that c ↦ (representative)·x^{deg c} induces a graded isomorphism
/// gr(A) → R/xR on pairs of classes of total degree ≤ `maxdeg`.
pub fn gr_rees_iso_check(fa: &FilteredAlgebra, maxdeg: usize) -> Result<IsoReport, GradedError> {
    let gr = fa.graded()?;
    gr_rees_iso_check_with(fa, &gr, maxdeg)
}

/// As [`gr_rees_iso_check`], against a supplied graded algebra (which may
/// have been altered).
pub fn gr_rees_iso_check_with(
    fa: &FilteredAlgebra,
    gr: &GradedAlgebra,
    maxdeg: usize,
) -> Result<IsoReport, GradedError> {
    let dim = fa.algebra().dim();
    let adapted = &gr.adapted;
    let phi = |c: &[Scalar]| -> ReesElement {
        let mut out = ReesElement::zero();
        for (k, x) in c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let v: Vector = adapted.vectors[k].iter().map(|y| y.mul(x)).collect();
            let mono = ReesElement::monomial(fa, v, adapted.degrees[k])
                .expect("representatives lie in their stage");
            out = out.add(&mono);
        }
        out
    };
    let classes: Vec<usize> = (0..dim).filter(|&k| adapted.degrees[k] <= maxdeg).collect();
    let mut mismatches = Vec::new();
    let mut pairs_checked = 0;
    for &i in &classes {
        for &j in &classes {
            if adapted.degrees[i] + adapted.degrees[j] > maxdeg {
                continue;
            }
            pairs_checked += 1;
            let ci = gr.algebra.basis_element(i);
            let cj = gr.algebra.basis_element(j);
            let lhs = phi(&ci).mul(&phi(&cj), fa);
            let rhs = phi(&gr.algebra.mul(&ci, &cj));
            if let Some(degree) = lhs.sub(&rhs).first_outside_xr(fa) {
                mismatches.push(ProductMismatch {
                    left: gr.algebra.names()[i].clone(),
                    right: gr.algebra.names()[j].clone(),
                    degree,
                });
            }
        }
    }
    let mut injectivity_failures = Vec::new();
    let mut ledger = Vec::new();
    for degree in 0..=maxdeg {
        let below = fa.stage_below(degree);
        let here = fa.stage(degree);
        let reps: Vec<Vector> = classes
            .iter()
            .filter(|&&k| adapted.degrees[k] == degree)
            .map(|&k| adapted.vectors[k].clone())
            .collect();
        for (k, r) in classes
            .iter()
            .filter(|&&k| adapted.degrees[k] == degree)
            .zip(&reps)
        {
            let image = ReesElement::monomial(fa, r.clone(), degree)?;
            if image.in_xr(fa) {
                injectivity_failures.push(gr.algebra.names()[*k].clone());
            }
        }
        let spanned = below.extend(reps.iter().cloned())?;
        if spanned.dim() != below.dim() + reps.len() {
            injectivity_failures.push(format!(
                "degree {degree} representatives are dependent modulo F_{}",
                degree as i64 - 1
            ));
        }
        let quotient_dim = here.dim() - here.intersection_dim(&below)?;
        ledger.push(DegreeLedger {
            degree,
            gr_dim: gr.component_dims.get(degree).copied().unwrap_or(0),
            filtration_dim: here.dim() - below.dim(),
            quotient_dim,
        });
    }
    let ledger_ok = ledger
        .iter()
        .all(|l| l.gr_dim == l.filtration_dim && l.filtration_dim == l.quotient_dim);
    Ok(IsoReport {
        passed: mismatches.is_empty() && injectivity_failures.is_empty() && ledger_ok,
        maxdeg,
        pairs_checked,
        mismatches,
        injectivity_failures,
        ledger,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::Field;

    fn ut3() -> FilteredAlgebra {
        builtins::upper_triangular(3, Field::Rationals).unwrap()
    }

    fn el(fa: &FilteredAlgebra, s: &str) -> AlgElement {
        fa.algebra().parse_element(s).unwrap()
    }

    #[test]
    fn construction_checks_stages() {
        let fa = ut3();
        let z = fa.algebra().zero();
        assert!(ReesElement::new(&fa, vec![z.clone(), el(&fa, "E12"), el(&fa, "E13")]).is_ok());
        assert_eq!(
            ReesElement::new(&fa, vec![z.clone(), el(&fa, "E13")]).unwrap_err(),
            GradedError::NotInFiltration { degree: 1 }
        );
        assert!(ReesElement::new(&fa, vec![z.clone(), z]).unwrap().is_zero());
    }

    #[test]
    fn arithmetic() {
        let fa = ut3();
        let a = ReesElement::monomial(&fa, el(&fa, "E12"), 1).unwrap();
        let b = ReesElement::monomial(&fa, el(&fa, "E23"), 1).unwrap();
        assert_eq!(
            a.mul(&b, &fa),
            ReesElement::monomial(&fa, el(&fa, "E13"), 2).unwrap()
        );
        assert!(a.mul(&ReesElement::zero(), &fa).is_zero());
        let c = ReesElement::monomial(&fa, el(&fa, "E11+E12"), 1).unwrap();
        assert_eq!(
            c.mul(&c, &fa),
            ReesElement::monomial(&fa, el(&fa, "E11+E12"), 2).unwrap()
        );
        assert_eq!(c.format(&fa), "(E11 + E12)·x");
    }

    #[test]
    fn integral_witness_examples() {
        let fa = ut3();
        let c = ReesElement::monomial(&fa, el(&fa, "E11+E12"), 1).unwrap();
        let w = integral_witness(&fa, &c, 4, None).unwrap();
        assert_eq!(w.n, 2);
        assert!(w.polys[0].is_zero());
        assert_eq!(w.polys[1].to_string(), "x");

        let a = ReesElement::monomial(&fa, el(&fa, "E12"), 1).unwrap();
        let w = integral_witness(&fa, &a, 4, None).unwrap();
        assert_eq!(w.n, 2);
        assert!(w.polys.iter().all(PolyOverK::is_zero));

        let strict = builtins::strictly_upper_triangular(3, Field::Rationals).unwrap();
        let a = ReesElement::monomial(&strict, el(&strict, "E12"), 1).unwrap();
        assert!(integral_witness(&strict, &a, 1, None).is_none());
    }

    #[test]
    fn power_membership() {
        let fa = ut3();
        let c = ReesElement::monomial(&fa, el(&fa, "E11+E12"), 1).unwrap();
        let r = lemma_thelem_check(&fa, &c, 2).unwrap();
        assert_eq!(r.big_n, 2);
        assert!(r.power_in_xr);
        assert!(!r.element_in_xr);
        assert_eq!(r.least_power, Some(2));

        let a = ReesElement::monomial(&fa, el(&fa, "E13"), 3).unwrap();
        assert_eq!(lemma_thelem_check(&fa, &a, 1).unwrap().least_power, Some(1));

        let constant = ReesElement::monomial(&fa, el(&fa, "E11"), 0).unwrap();
        assert_eq!(
            lemma_thelem_check(&fa, &constant, 1).unwrap_err(),
            GradedError::ConstantTerm
        );
    }

    #[test]
    fn iso_check_passes_and_detects_corruption() {
        let fa = ut3();
        let report = gr_rees_iso_check(&fa, 4).unwrap();
        assert!(report.passed, "{report:?}");
        assert_eq!(
            report.ledger.iter().map(|l| l.gr_dim).collect::<Vec<_>>(),
            vec![3, 2, 1, 0, 0]
        );
        let gr = fa.graded().unwrap();
        let i = (0..6)
            .find(|&k| gr.algebra.names()[k] == "[E12]_1")
            .unwrap();
        let j = (0..6)
            .find(|&k| gr.algebra.names()[k] == "[E23]_1")
            .unwrap();
        let corrupted = gr.with_product(i, j, gr.algebra.zero());
        let report = gr_rees_iso_check_with(&fa, &corrupted, 4).unwrap();
        assert!(!report.passed);
        assert_eq!(report.mismatches[0].degree, 2);
    }
}
