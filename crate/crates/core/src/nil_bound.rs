//! The bounded nil index of gr(A)_{≥1} coming from a uniform algebraic
//! degree bound on a filtered algebra.

use serde::Serialize;

use crate::algebra::AlgElement;
use crate::criteria::{
    combination, nilpotency_index, sample_coefficients, subspace_nil_index,
    uniform_degree_certificate, Convention, DegreeCertificate, SymLevels,
};
use crate::filtration::{FilteredAlgebra, GradedError};
use crate::free::{sym_poly, MultiDegree};
use crate::subspace::is_zero_vector;

/// Size of the seeded sample of mixed combinations tested besides the
/// basis classes.
pub const MIXED_SAMPLES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// N = ⌈(d−1)q/p⌉ + 1.
pub fn my1_bound(p: usize, q: usize, d: usize) -> Result<usize, GradedError> {
    if p == 0 || p > q {
        return Err(GradedError::DegreeRange { p, q });
    }
    let d = d.max(1);
    Ok(((d - 1) * q).div_ceil(p) + 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Parameters {
    pub p: usize,
    pub q: usize,
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementKind {
    BasisClass,
    Sample,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementWitness {
    pub kind: ElementKind,
    pub element: String,
    /// P_N(b_p, …, b_q) = 0.
    pub span_vanishes: bool,
    /// (b_p + … + b_q)^N = 0.
    pub power_vanishes: bool,
    /// Least n with Pₙ(b_p, …, b_q) = 0.
    pub vanishing_degree: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct My1Report {
    pub check: &'static str,
    pub status: Status,
    pub parameters: Parameters,
    pub witnesses: Vec<ElementWitness>,
    /// Least n with Pₙ = 0 for the whole span of classes of degree p..q.
    pub actual_index: Option<usize>,
    pub vacuous: bool,
    pub convention: Convention,
    pub certificate: DegreeCertificate,
    pub component_dims: Vec<usize>,
    pub seed: u64,
}

/// Checks that every element of gr(A) concentrated in degrees p..q is
/// nilpotent of index ≤ N = my1_bound(p, q, d), where d bounds the algebraic
/// degree of every element of F_q.
///
/// The unital convention is used when 1 ∈ F₀, since then a⁰ = 1 has weighted
/// degree 0 and the bound argument goes through unchanged.
pub fn verify_my1(
    fa: &FilteredAlgebra,
    p: usize,
    q: usize,
    seed: u64,
) -> Result<My1Report, GradedError> {
    if p == 0 || p > q {
        return Err(GradedError::DegreeRange { p, q });
    }
    let gr = fa.graded()?;
    let alg = fa.algebra();
    let convention = if fa.unit_in_base() {
        Convention::Unital
    } else {
        Convention::NonUnital
    };
    let basis_q = fa.stage(q).basis().to_vec();
    let certificate = uniform_degree_certificate(alg, &basis_q, convention, MIXED_SAMPLES, seed)?;
    let d = certificate.d;
    let big_n = my1_bound(p, q, d)?;
    let parameters = Parameters { p, q, d, n: big_n };

    let classes: Vec<usize> = (0..alg.dim())
        .filter(|&k| (p..=q).contains(&gr.degree_of(k)))
        .collect();
    if classes.is_empty() {
        return Ok(My1Report {
            check: "verify-my1",
            status: Status::Pass,
            parameters,
            witnesses: Vec::new(),
            actual_index: Some(1),
            vacuous: true,
            convention,
            certificate,
            component_dims: gr.component_dims.clone(),
            seed,
        });
    }
    let class_elems: Vec<AlgElement> = classes
        .iter()
        .map(|&k| gr.algebra.basis_element(k))
        .collect();
    let mut tests: Vec<(ElementKind, AlgElement)> = class_elems
        .iter()
        .map(|b| (ElementKind::BasisClass, b.clone()))
        .collect();
    for coeffs in sample_coefficients(alg.field(), classes.len(), MIXED_SAMPLES, seed) {
        tests.push((
            ElementKind::Sample,
            combination(&gr.algebra, &coeffs, &class_elems),
        ));
    }

    let mut witnesses = Vec::with_capacity(tests.len());
    for (kind, b) in tests {
        let components: Vec<AlgElement> = (p..=q).map(|i| gr.component(&b, i)).collect();
        let mut vanishing_degree = None;
        let mut span_vanishes = false;
        for (k, level) in SymLevels::new(&gr.algebra, &components)
            .take(big_n)
            .enumerate()
        {
            let zero = level.values().all(|v| is_zero_vector(v));
            if zero && vanishing_degree.is_none() {
                vanishing_degree = Some(k + 1);
            }
            if k + 1 == big_n {
                span_vanishes = zero;
            }
        }
        let power_vanishes = nilpotency_index(&gr.algebra, &b).is_some_and(|n| n <= big_n);
        witnesses.push(ElementWitness {
            kind,
            element: gr.algebra.format_element(&b),
            span_vanishes,
            power_vanishes,
            vanishing_degree,
        });
    }
    let actual_index = subspace_nil_index(&gr.algebra, &class_elems)?.index;
    let ok = witnesses
        .iter()
        .all(|w| w.span_vanishes && w.power_vanishes)
        && actual_index.is_some_and(|n| n <= big_n);
    Ok(My1Report {
        check: "verify-my1",
        status: Status::from_bool(ok),
        parameters,
        witnesses,
        actual_index,
        vacuous: false,
        convention,
        certificate,
        component_dims: gr.component_dims.clone(),
        seed,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomogeneityReport {
    pub check: &'static str,
    pub status: Status,
    pub multidegree: MultiDegree,
    /// Σⱼ (p+j)·μⱼ.
    pub weighted_degree: usize,
    pub value: String,
    /// s_μ(a_p, …, a_q) ∈ F_{weighted degree}.
    pub in_stage: bool,
    /// s_μ of the classes equals the class of s_μ of the representatives.
    pub class_identity: bool,
}

/// For aᵢ ∈ Fᵢ (i = p, …, q), checks s_μ(a_p..a_q) ∈ F_{Σ iμᵢ} and that
/// evaluating s_μ on classes in gr(A) gives the class of the value.
pub fn sym_homogeneity_check(
    fa: &FilteredAlgebra,
    p: usize,
    elements: &[AlgElement],
    md: &MultiDegree,
) -> Result<HomogeneityReport, GradedError> {
    if md.arity() != elements.len() {
        return Err(GradedError::MultiDegreeLength {
            got: md.arity(),
            expected: elements.len(),
        });
    }
    for (j, a) in elements.iter().enumerate() {
        fa.algebra().check_element(a)?;
        if !fa.stage(p + j).contains(a)? {
            return Err(GradedError::ElementNotInStage {
                index: j,
                degree: p + j,
            });
        }
    }
    let weighted_degree = md.weighted(|j| p + j);
    let mut report = HomogeneityReport {
        check: "sym-homogeneity",
        status: Status::Skipped,
        multidegree: md.clone(),
        weighted_degree,
        value: String::new(),
        in_stage: false,
        class_identity: false,
    };
    if md.total() == 0 && !fa.unit_in_base() {
        return Ok(report);
    }
    let gr = fa.graded()?;
    let poly = sym_poly(md, fa.algebra().field());
    let value = fa.algebra().evaluate(&poly, elements)?;
    let classes: Vec<AlgElement> = elements
        .iter()
        .enumerate()
        .map(|(j, a)| gr.class_of(a, p + j))
        .collect();
    let graded_value = gr.algebra.evaluate(&poly, &classes)?;
    report.value = fa.algebra().format_element(&value);
    report.in_stage = fa.stage(weighted_degree).contains(&value)?;
    report.class_identity = graded_value == gr.class_of(&value, weighted_degree);
    report.status = Status::from_bool(report.in_stage && report.class_identity);
    Ok(report)
}
