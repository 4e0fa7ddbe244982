//! Command-line front end: loads an algebra (from a description file or a
//! builtin), runs one check and renders a JSON report.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use ordsym::builtins::{self, BuiltinError};
use ordsym::criteria::{self, AlgBound, Convention, NilIndexReport, PChain};
use ordsym::description::{self, DescriptionError};
use ordsym::filtration::FiltrationReport;
use ordsym::free::{self, binomial, monomial_count, sym_poly, MultiDegree};
use ordsym::nil_bound::{self, HomogeneityReport, My1Report, Status};
use ordsym::rees::{self, IntegralWitness, IsoReport, PowerMembership, ReesElement};
use ordsym::{
    AlgElement, AlgebraError, CriteriaError, Field, FieldError, FilteredAlgebra, GradedError,
    StructureAlgebra,
};

#[derive(Debug, Parser)]
#[command(
    name = "ordsym",
    version,
    about = "Exact checks for order-symmetric polynomials and filtered algebras"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Algebra description file (JSON).
    #[arg(long, global = true, conflicts_with = "builtin")]
    pub input: Option<PathBuf>,
    /// Builtin example as NAME:PARAM, e.g. upper-triangular:3.
    #[arg(long, global = true)]
    pub builtin: Option<String>,
    /// Field override: Q or GF:p.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Seed for every randomized sample.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// The order-symmetric polynomial of a multidegree; with --elements,
    /// also its value in the algebra.
    SymPoly {
        /// Multidegree, e.g. 2,2.
        #[arg(long)]
        md: String,
        #[arg(long)]
        elements: Option<String>,
    },
    /// dim Pₙ(x₁..xₘ) in the free algebra, or dim Pₙ(a₁..aₘ) in the algebra
    /// when --elements is given.
    SpanDim {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        elements: Option<String>,
    },
    /// Least n with Pₙ(a₁..aₘ) = 0; --brute-force also enumerates every
    /// combination over a finite field.
    NilIndex {
        #[arg(long)]
        elements: Option<String>,
        #[arg(long)]
        brute_force: bool,
    },
    /// Algebraic degree of one element.
    AlgDegree {
        #[arg(long)]
        element: String,
        /// Allow the unit in the relation.
        #[arg(long)]
        unital: bool,
    },
    /// The stabilized chain and the degree bound M_{d,m} for a subspace.
    AlgBound {
        #[arg(long)]
        elements: Option<String>,
        #[arg(long, default_value_t = 32)]
        samples: usize,
        /// Start cumulative spans from the unit.
        #[arg(long)]
        include_unit: bool,
    },
    /// Associativity, unit laws and filtration axioms.
    CheckFiltration,
    /// The associated graded algebra.
    Gr,
    /// The bounded nil index of gr(A) in degrees p..q.
    VerifyMy1 {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
    },
    /// Symmetric-polynomial homogeneity for elements aₚ..a_q with aᵢ ∈ Fᵢ.
    SymHomogeneity {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        elements: String,
        #[arg(long)]
        md: String,
    },
    /// Integrality of a Rees element over k[x].
    ReesIntegrality {
        /// Terms DEGREE:ELEMENT separated by ';', e.g. "1:E11+E12;2:E13".
        #[arg(long)]
        rees: String,
        #[arg(long, default_value_t = 4)]
        nmax: usize,
        /// Degree bound for the scalar polynomials (default m·n).
        #[arg(long)]
        maxdeg: Option<usize>,
    },
    /// gr(A) ≅ R/xR on classes up to a total degree.
    IsoCheck {
        #[arg(long, default_value_t = 4)]
        maxdeg: usize,
    },
    /// Print the description file of the loaded algebra.
    Describe,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::SymPoly { .. } => "sym-poly",
            Command::SpanDim { .. } => "span-dim",
            Command::NilIndex { .. } => "nil-index",
            Command::AlgDegree { .. } => "alg-degree",
            Command::AlgBound { .. } => "alg-bound",
            Command::CheckFiltration => "check-filtration",
            Command::Gr => "gr",
            Command::VerifyMy1 { .. } => "verify-my1",
            Command::SymHomogeneity { .. } => "sym-homogeneity",
            Command::ReesIntegrality { .. } => "rees-integrality",
            Command::IsoCheck { .. } => "iso-check",
            Command::Describe => "describe",
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("no algebra given: use --input FILE or --builtin NAME:PARAM")]
    NoInput,
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Description {
        path: PathBuf,
        source: DescriptionError,
    },
    #[error("invalid --{flag}: {message}")]
    Argument { flag: &'static str, message: String },
    #[error(transparent)]
    Builtin(#[from] BuiltinError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Criteria(#[from] CriteriaError),
    #[error(transparent)]
    Graded(#[from] GradedError),
}

fn argument(flag: &'static str, message: impl ToString) -> CliError {
    CliError::Argument {
        flag,
        message: message.to_string(),
    }
}

/// Result of one run: the rendered report and the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub status: Status,
    pub json: String,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Fail => 1,
            Status::Pass | Status::Skipped => 0,
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    command: &'a str,
    input: String,
    field: String,
    seed: u64,
    #[serde(flatten)]
    report: &'a T,
    timing_ms: f64,
}

fn parse_md(text: &str) -> Result<MultiDegree, CliError> {
    let exps = text
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| argument("md", format!("{text:?}: {e}")))?;
    if exps.is_empty() {
        return Err(argument("md", "empty multidegree"));
    }
    Ok(MultiDegree(exps))
}

/// Splits an element list on ';' when present, otherwise on ','.
fn split_list(text: &str) -> Vec<&str> {
    let sep = if text.contains(';') { ';' } else { ',' };
    text.split(sep)
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect()
}

fn parse_elements(alg: &StructureAlgebra, text: Option<&str>) -> Result<Vec<AlgElement>, CliError> {
    match text {
        None => Ok(alg.basis_elements()),
        Some(t) => split_list(t)
            .into_iter()
            .map(|s| alg.parse_element(s).map_err(CliError::from))
            .collect(),
    }
}

fn field_override(global: &GlobalArgs) -> Result<Option<Field>, CliError> {
    global
        .field
        .as_deref()
        .map(str::parse::<Field>)
        .transpose()
        .map_err(CliError::from)
}

fn load(global: &GlobalArgs) -> Result<FilteredAlgebra, CliError> {
    let field = field_override(global)?;
    if let Some(label) = &global.builtin {
        return Ok(builtins::by_name(label, field.unwrap_or(Field::Rationals))?);
    }
    let path = global.input.clone().ok_or(CliError::NoInput)?;
    let text = std::fs::read_to_string(&path).map_err(|source| CliError::Read {
        path: path.clone(),
        source,
    })?;
    description::parse(&text, field).map_err(|source| CliError::Description { path, source })
}

fn input_label(global: &GlobalArgs) -> String {
    match (&global.builtin, &global.input) {
        (Some(b), _) => format!("builtin {b}"),
        (None, Some(p)) => p.display().to_string(),
        (None, None) => "none".into(),
    }
}

#[derive(Serialize)]
struct SymPolyReport {
    check: &'static str,
    status: Status,
    multidegree: MultiDegree,
    monomial_count: String,
    terms: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<String>,
}

#[derive(Serialize)]
struct FreeSpanReport {
    check: &'static str,
    status: Status,
    n: usize,
    m: usize,
    dim: usize,
    /// C(m+n−1, m−1).
    formula: String,
    cumulative_dim: usize,
    /// C(n+m, m).
    cumulative_formula: String,
    /// Whether the span of (Σαᵢxᵢ)ⁿ over n+1 sample values equals Pₙ.
    powers_span_equal: bool,
}

#[derive(Serialize)]
struct AlgSpanReport {
    check: &'static str,
    status: Status,
    n: usize,
    m: usize,
    dim: usize,
    basis: Vec<String>,
    chain: PChain,
}

#[derive(Serialize)]
struct NilReport {
    check: &'static str,
    status: Status,
    elements: Vec<String>,
    #[serde(flatten)]
    index: NilIndexReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    brute_force_index: Option<Option<usize>>,
}

#[derive(Serialize)]
struct DegreeReport {
    check: &'static str,
    status: Status,
    element: String,
    convention: Convention,
    degree: usize,
}

#[derive(Serialize)]
struct BoundReport {
    check: &'static str,
    status: Status,
    elements: Vec<String>,
    #[serde(flatten)]
    bound: AlgBound,
    #[serde(skip_serializing_if = "Option::is_none")]
    unit_chain: Option<PChain>,
}

#[derive(Serialize)]
struct FiltrationCheck {
    check: &'static str,
    status: Status,
    algebra: ordsym::algebra::AlgebraValidation,
    filtration: FiltrationReport,
}

#[derive(Serialize)]
struct GrReport {
    check: &'static str,
    status: Status,
    component_dims: Vec<usize>,
    classes: Vec<String>,
    degrees: Vec<usize>,
    products: Vec<(String, String, String)>,
    has_unit: bool,
    validation: ordsym::algebra::AlgebraValidation,
}

#[derive(Serialize)]
struct ReesReport {
    check: &'static str,
    status: Status,
    element: String,
    in_xr: bool,
    witness: Option<IntegralWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    power_membership: Option<PowerMembership>,
}

fn parse_rees(fa: &FilteredAlgebra, text: &str) -> Result<ReesElement, CliError> {
    let alg = fa.algebra();
    let mut coeffs: Vec<AlgElement> = Vec::new();
    for term in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (deg, body) = term
            .split_once(':')
            .ok_or_else(|| argument("rees", format!("term {term:?} is not DEGREE:ELEMENT")))?;
        let deg: usize = deg
            .trim()
            .parse()
            .map_err(|_| argument("rees", format!("bad degree in {term:?}")))?;
        let a = alg.parse_element(body)?;
        if coeffs.len() <= deg {
            coeffs.resize(deg + 1, alg.zero());
        }
        coeffs[deg] = ordsym::subspace::add_vectors(&coeffs[deg], &a);
    }
    Ok(ReesElement::new(fa, coeffs)?)
}

fn render<T: Serialize>(
    command: &str,
    global: &GlobalArgs,
    field: String,
    report: &T,
    start: Instant,
) -> String {
    let envelope = Envelope {
        command,
        input: input_label(global),
        field,
        seed: global.seed,
        report,
        timing_ms: (start.elapsed().as_secs_f64() * 1e6).round() / 1e3,
    };
    serde_json::to_string_pretty(&envelope).expect("reports serialize")
}

/// Runs one command and renders its report. Input problems are errors;
/// failed checks are reported with `Status::Fail`.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let global = &cli.global;
    let name = cli.command.name();
    macro_rules! finish {
        ($field:expr, $report:expr) => {{
            let report = $report;
            let json = render(name, global, $field.to_string(), &report, start);
            return Ok(Outcome {
                status: report.status,
                json,
            });
        }};
    }
    match &cli.command {
        Command::Describe => {
            let fa = load(global)?;
            let json = description::to_string_pretty(&fa);
            Ok(Outcome {
                status: Status::Pass,
                json,
            })
        }
        Command::SymPoly { md, elements } => {
            let md = parse_md(md)?;
            let loaded = match (&global.builtin, &global.input, elements) {
                (None, None, _) | (_, _, None) => None,
                _ => Some(load(global)?),
            };
            let field = match &loaded {
                Some(l) => l.algebra().field(),
                None => field_override(global)?.unwrap_or(Field::Rationals),
            };
            let poly = sym_poly(&md, field);
            let value = match (&loaded, elements) {
                (Some(l), Some(text)) => {
                    let elts = parse_elements(l.algebra(), Some(text))?;
                    if elts.len() != md.arity() {
                        return Err(argument(
                            "elements",
                            format!("need {} elements", md.arity()),
                        ));
                    }
                    Some(
                        l.algebra()
                            .format_element(&l.algebra().evaluate(&poly, &elts)?),
                    )
                }
                _ => None,
            };
            let count = monomial_count(&md);
            let status = Status::from_bool(poly.len() as u128 == count);
            finish!(
                field,
                SymPolyReport {
                    check: "sym-poly",
                    status,
                    multidegree: md,
                    monomial_count: count.to_string(),
                    terms: poly.to_json(),
                    value,
                }
            )
        }
        Command::SpanDim { n, m, elements } => {
            if let (Some(text), true) =
                (elements, global.builtin.is_some() || global.input.is_some())
            {
                let loaded = load(global)?;
                let alg = loaded.algebra();
                let elts = parse_elements(alg, Some(text))?;
                let space = criteria::span_p_alg(alg, &elts, *n)?;
                let chain = criteria::stabilized_p_chain(alg, &elts, false)?;
                let basis = space
                    .basis()
                    .iter()
                    .map(|v| alg.format_element(v))
                    .collect();
                finish!(
                    alg.field(),
                    AlgSpanReport {
                        check: "span-dim",
                        status: Status::Pass,
                        n: *n,
                        m: elts.len(),
                        dim: space.dim(),
                        basis,
                        chain,
                    }
                )
            }
            let m = m.ok_or_else(|| argument("m", "required without --elements"))?;
            if m == 0 {
                return Err(argument("m", "must be positive"));
            }
            let field = field_override(global)?.unwrap_or(Field::Rationals);
            let space = free::span_p(*n, m, field).map_err(|e| argument("n", e))?;
            let cumulative = free::span_p_le(*n, m, field, true).map_err(|e| argument("n", e))?;
            let sample = field.distinct_scalars(n + 1)?;
            let grid = free::span_powers_grid(*n, m, &sample).map_err(|e| argument("n", e))?;
            let formula = binomial((m + n - 1) as u64, (m - 1) as u64);
            let cumulative_formula = binomial((n + m) as u64, m as u64);
            let powers_span_equal = grid.space == space;
            let status = Status::from_bool(
                space.dim() as u128 == formula
                    && cumulative.dim() as u128 == cumulative_formula
                    && powers_span_equal,
            );
            finish!(
                field,
                FreeSpanReport {
                    check: "span-dim",
                    status,
                    n: *n,
                    m,
                    dim: space.dim(),
                    formula: formula.to_string(),
                    cumulative_dim: cumulative.dim(),
                    cumulative_formula: cumulative_formula.to_string(),
                    powers_span_equal,
                }
            )
        }
        Command::NilIndex {
            elements,
            brute_force,
        } => {
            let loaded = load(global)?;
            let alg = loaded.algebra();
            let elts = parse_elements(alg, elements.as_deref())?;
            let index = criteria::subspace_nil_index(alg, &elts)?;
            let brute = if *brute_force {
                Some(criteria::brute_force_nil_index(
                    alg,
                    &elts,
                    criteria::BRUTE_FORCE_BUDGET,
                )?)
            } else {
                None
            };
            let agrees = match (&brute, index.guarantee) {
                (Some(b), criteria::Guarantee::Exact) => *b == index.index,
                (Some(Some(b)), criteria::Guarantee::OneDirectional) => {
                    index.index.is_none_or(|n| *b <= n)
                }
                _ => true,
            };
            let status = Status::from_bool(index.index.is_some() && agrees);
            finish!(
                alg.field(),
                NilReport {
                    check: "nil-index",
                    status,
                    elements: elts.iter().map(|e| alg.format_element(e)).collect(),
                    index,
                    brute_force_index: brute,
                }
            )
        }
        Command::AlgDegree { element, unital } => {
            let loaded = load(global)?;
            let alg = loaded.algebra();
            let a = alg.parse_element(element)?;
            let convention = if *unital {
                Convention::Unital
            } else {
                Convention::NonUnital
            };
            let degree = criteria::algebraic_degree(alg, &a, convention)?;
            finish!(
                alg.field(),
                DegreeReport {
                    check: "alg-degree",
                    status: Status::Pass,
                    element: alg.format_element(&a),
                    convention,
                    degree,
                }
            )
        }
        Command::AlgBound {
            elements,
            samples,
            include_unit,
        } => {
            let loaded = load(global)?;
            let alg = loaded.algebra();
            let elts = parse_elements(alg, elements.as_deref())?;
            let bound = criteria::subspace_alg_bound(alg, &elts, *samples, global.seed)?;
            let unit_chain = if *include_unit {
                Some(criteria::stabilized_p_chain(alg, &elts, true)?)
            } else {
                None
            };
            finish!(
                alg.field(),
                BoundReport {
                    check: "alg-bound",
                    status: Status::from_bool(bound.consistent),
                    elements: elts.iter().map(|e| alg.format_element(e)).collect(),
                    bound,
                    unit_chain,
                }
            )
        }
        Command::CheckFiltration => {
            let loaded = load(global)?;
            let algebra = loaded.algebra().validate();
            let filtration = loaded.validate();
            finish!(
                loaded.algebra().field(),
                FiltrationCheck {
                    check: "check-filtration",
                    status: Status::from_bool(algebra.passed && filtration.passed),
                    algebra,
                    filtration,
                }
            )
        }
        Command::Gr => {
            let loaded = load(global)?;
            let gr = loaded.graded()?;
            let g = &gr.algebra;
            let products = g
                .nonzero_products()
                .map(|(i, j, _)| {
                    let v = g.basis_product(i, j);
                    (
                        g.names()[i].clone(),
                        g.names()[j].clone(),
                        g.format_element(&v),
                    )
                })
                .collect();
            let validation = g.validate();
            finish!(
                g.field(),
                GrReport {
                    check: "gr",
                    status: Status::from_bool(validation.passed),
                    component_dims: gr.component_dims.clone(),
                    classes: g.names().to_vec(),
                    degrees: gr.adapted.degrees.clone(),
                    products,
                    has_unit: g.unit().is_some(),
                    validation,
                }
            )
        }
        Command::VerifyMy1 { p, q } => {
            let loaded = load(global)?;
            let report: My1Report = nil_bound::verify_my1(&loaded, *p, *q, global.seed)?;
            finish!(loaded.algebra().field(), report)
        }
        Command::SymHomogeneity { p, elements, md } => {
            let loaded = load(global)?;
            let md = parse_md(md)?;
            let elts = parse_elements(loaded.algebra(), Some(elements))?;
            let report: HomogeneityReport =
                nil_bound::sym_homogeneity_check(&loaded, *p, &elts, &md)?;
            finish!(loaded.algebra().field(), report)
        }
        Command::ReesIntegrality { rees, nmax, maxdeg } => {
            let loaded = load(global)?;
            let fa = &loaded;
            if *nmax == 0 {
                return Err(argument("nmax", "must be at least 1"));
            }
            let a = parse_rees(fa, rees)?;
            let witness = rees::integral_witness(fa, &a, *nmax, *maxdeg);
            let constant_free = a
                .coeff(0)
                .is_none_or(|c| ordsym::subspace::is_zero_vector(c));
            let power_membership = match (&witness, constant_free) {
                (Some(w), true) => Some(rees::lemma_thelem_check(fa, &a, w.n)?),
                _ => None,
            };
            let status = Status::from_bool(
                witness.is_some() && power_membership.as_ref().is_none_or(|p| p.power_in_xr),
            );
            finish!(
                fa.algebra().field(),
                ReesReport {
                    check: "rees-integrality",
                    status,
                    element: a.format(fa),
                    in_xr: a.in_xr(fa),
                    witness,
                    power_membership,
                }
            )
        }
        Command::IsoCheck { maxdeg } => {
            let loaded = load(global)?;
            let report: IsoReport = rees::gr_rees_iso_check(&loaded, *maxdeg)?;
            #[derive(Serialize)]
            struct Wrapped {
                check: &'static str,
                status: Status,
                #[serde(flatten)]
                report: IsoReport,
            }
            finish!(
                loaded.algebra().field(),
                Wrapped {
                    check: "iso-check",
                    status: Status::from_bool(report.passed),
                    report,
                }
            )
        }
    }
}

/// Runs and writes the report to --out or stdout, returning the exit code.
pub fn main_with(cli: &Cli) -> i32 {
    match run(cli) {
        Ok(outcome) => {
            let written = match &cli.global.out {
                Some(path) => {
                    std::fs::write(path, format!("{}\n", outcome.json)).map_err(|source| {
                        CliError::Write {
                            path: path.clone(),
                            source,
                        }
                    })
                }
                None => {
                    use std::io::Write;
                    // A closed pipe downstream is not an error of ours.
                    let _ = writeln!(std::io::stdout().lock(), "{}", outcome.json);
                    Ok(())
                }
            };
            match written {
                Ok(()) => outcome.exit_code(),
                Err(e) => {
                    eprintln!("error: {e}");
                    2
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
