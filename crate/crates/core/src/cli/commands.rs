//! The commands behind the `entwine` binary. Each returns an [`Outcome`]
//! holding both a JSON report and a text rendering of it.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::complexes::{
    check_size, cocyclic_check, cohomology_range, hochschild_delta, in_subcomplex, Cochain, ComplexError,
    Theory,
};
use crate::linalg::{ExactField, SparseMatrix};
use crate::morita::{morita_report, MoritaError, MoritaOptions};
use crate::omega::{
    character, conjugation_check, trace_from_cocycle, validate_trace, OmegaError, TruncatedOmega,
};
use crate::pairing::{pairing_report, PairingError};
use crate::structures::{tensor_product, EntwiningStructure};

use super::format::{parse_vector, render, CochainFile, StructureFile};
use super::{Cli, CliError, Command};

/// The result of a command that ran to completion.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub command: &'static str,
    pub passed: bool,
    pub report: Value,
    pub text: String,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    /// Stable JSON: object keys sorted, scalars as strings.
    pub fn to_json(&self) -> String {
        render(&json!({ "command": self.command, "passed": self.passed, "report": self.report }))
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

fn pass_fail(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_structure(path: &Path, field: Option<ExactField>) -> Result<EntwiningStructure, CliError> {
    let text = read(path)?;
    StructureFile::parse(&text)
        .and_then(|f| f.to_structure(field))
        .map_err(|source| CliError::Parse { path: path.display().to_string(), source })
}

fn load_cochain(path: &Path, s: &EntwiningStructure) -> Result<Cochain, CliError> {
    let text = read(path)?;
    CochainFile::parse(&text)
        .and_then(|f| f.to_cochain(s))
        .map_err(|source| CliError::Parse { path: path.display().to_string(), source })
}

fn require_valid(s: &EntwiningStructure) -> Result<(), CliError> {
    match s.validate().failures().next() {
        None => Ok(()),
        Some(v) => Err(CliError::Math(format!(
            "the structure fails the {} axiom at {:?}",
            v.axiom,
            v.witness.clone().unwrap_or_default()
        ))),
    }
}

fn guard(s: &EntwiningStructure, n: usize, limit: usize) -> Result<(), CliError> {
    check_size(s, n, limit).map_err(|e| CliError::Usage(format!("{e}; raise --max-dim-guard to proceed")))
}

fn math<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Math(e.to_string())
}

fn basis_entries(s: &EntwiningStructure, n: usize, m: &SparseMatrix) -> Result<Vec<Value>, CliError> {
    m.columns()
        .iter()
        .map(|col| {
            let g = Cochain::from_values(s, n, col.clone()).map_err(math)?;
            Ok(to_value(&CochainFile::from_cochain(&g).entries))
        })
        .collect()
}

/// Runs a parsed command line inside a pool of the requested size.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = cli.threads {
        if k == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(k);
    }
    let pool = builder.build().map_err(|e| CliError::Usage(e.to_string()))?;
    pool.install(|| dispatch(cli))
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let field = cli.field;
    let limit = cli.max_dim_guard;
    match &cli.command {
        Command::Validate { structure } => validate(&load_structure(structure, field)?),
        Command::Cohomology { structure, theory, max_degree } => {
            cohomology(&load_structure(structure, field)?, (*theory).into(), *max_degree, limit)
        }
        Command::CocyclicCheck { structure, max_degree } => {
            cocyclic(&load_structure(structure, field)?, *max_degree, limit)
        }
        Command::Morita { structure, r, max_degree, allow_large } => {
            let opts = MoritaOptions { allow_large: *allow_large, size_guard: limit };
            morita(&load_structure(structure, field)?, *r, *max_degree, opts)
        }
        Command::TraceCheck { structure, cochain } => {
            let s = load_structure(structure, field)?;
            require_valid(&s)?;
            let g = load_cochain(cochain, &s)?;
            trace_check(&s, &g, limit)
        }
        Command::Pair { left, left_cochain, right, right_cochain } => {
            let s = load_structure(left, field)?;
            let s2 = load_structure(right, field)?;
            require_valid(&s)?;
            require_valid(&s2)?;
            let g = load_cochain(left_cochain, &s)?;
            let g2 = load_cochain(right_cochain, &s2)?;
            pair(&s, &g, &s2, &g2, limit)
        }
        Command::ConjugationCheck { structure, unit, inverse, max_degree } => {
            let s = load_structure(structure, field)?;
            let parse = |text: &str, what: &str| {
                parse_vector(text, s.dim_a(), s.field(), what).map_err(|e| CliError::Usage(e.to_string()))
            };
            let x = parse(unit, "--unit")?;
            let y = parse(inverse, "--inverse")?;
            conjugation(&s, &x, &y, *max_degree, limit)
        }
    }
}

pub fn validate(s: &EntwiningStructure) -> Result<Outcome, CliError> {
    let report = s.validate();
    let mut text = String::new();
    for v in &report.verdicts {
        let status = if v.skipped { "SKIP" } else { pass_fail(v.passed) };
        let _ = write!(text, "{status} {}", v.axiom);
        if let Some(w) = &v.witness {
            let _ = write!(text, " witness {w:?}");
            if let Some(m) = &v.witness_meaning {
                let _ = write!(text, " ({m})");
            }
        }
        text.push('\n');
    }
    Ok(Outcome {
        command: "validate",
        passed: report.passed(),
        report: json!({
            "field": s.field().to_string(),
            "dim_a": s.dim_a(),
            "dim_c": s.dim_c(),
            "verdicts": to_value(&report.verdicts),
        }),
        text,
    })
}

pub fn cohomology(
    s: &EntwiningStructure,
    theory: Theory,
    max_n: usize,
    limit: usize,
) -> Result<Outcome, CliError> {
    require_valid(s)?;
    guard(s, max_n, limit)?;
    let groups = cohomology_range(s, theory, max_n);
    let dims: Vec<usize> = groups.iter().map(|g| g.dim).collect();
    let mut degrees = Vec::new();
    let mut text = format!("theory {theory} over {}\ndegree  dim  cocycles  coboundaries\n", s.field());
    for g in &groups {
        let _ = writeln!(
            text,
            "{:>6}  {:>3}  {:>8}  {:>12}",
            g.degree,
            g.dim,
            g.cocycle_basis.cols(),
            g.coboundary_basis.cols()
        );
        degrees.push(json!({
            "degree": g.degree,
            "dim": g.dim,
            "cochain_dim": g.cochain_dim,
            "cocycle_basis": basis_entries(s, g.degree, &g.cocycle_basis)?,
            "coboundary_basis": basis_entries(s, g.degree, &g.coboundary_basis)?,
        }));
    }
    let _ = writeln!(text, "dims {dims:?}");
    Ok(Outcome {
        command: "cohomology",
        passed: true,
        report: json!({
            "theory": theory,
            "field": s.field().to_string(),
            "max_degree": max_n,
            "dims": dims,
            "degrees": degrees,
        }),
        text,
    })
}

pub fn cocyclic(s: &EntwiningStructure, max_n: usize, limit: usize) -> Result<Outcome, CliError> {
    require_valid(s)?;
    guard(s, max_n + 1, limit)?;
    let report = cocyclic_check(s, max_n).map_err(math)?;
    let mut text = format!("invariant dims {:?}\n", report.invariant_dims);
    for v in &report.identities {
        let _ = write!(
            text,
            "{} {} degree {} indices {:?}",
            pass_fail(v.passed),
            v.identity,
            v.degree,
            v.indices
        );
        if let Some(w) = v.witness {
            let _ = write!(text, " witness {w:?}");
        }
        text.push('\n');
    }
    Ok(Outcome { command: "cocyclic-check", passed: report.passed(), report: to_value(&report), text })
}

pub fn morita(
    s: &EntwiningStructure,
    r: usize,
    max_n: usize,
    opts: MoritaOptions,
) -> Result<Outcome, CliError> {
    require_valid(s)?;
    let report = morita_report(s, r, max_n, opts).map_err(|e| match e {
        MoritaError::Envelope { .. } => CliError::Usage(format!("{e}; pass --allow-large to proceed")),
        MoritaError::Complex(ComplexError::TooLarge { .. }) => {
            CliError::Usage(format!("{e}; raise --max-dim-guard to proceed"))
        }
        other => math(other),
    })?;
    let mut text = String::new();
    for v in report.identities.iter().chain(&report.invariance) {
        let _ = write!(
            text,
            "{} {} degree {} indices {:?}",
            pass_fail(v.passed),
            v.identity,
            v.degree,
            v.indices
        );
        if let Some(w) = v.witness {
            let _ = write!(text, " witness {w:?}");
        }
        text.push('\n');
    }
    for d in &report.dimensions {
        let _ = writeln!(
            text,
            "{} {} degree {}: A {} M_{r}(A) {}",
            pass_fail(d.equal),
            d.theory,
            d.degree,
            d.base,
            d.matrix
        );
    }
    let identities_ok = report.identities.iter().chain(&report.invariance).all(|v| v.passed);
    let dims_ok = report.dimensions.iter().all(|d| d.equal);
    let _ = writeln!(
        text,
        "{}; {}",
        if identities_ok { "all identities PASS" } else { "some identities FAIL" },
        if dims_ok { "dims equal" } else { "dims differ" }
    );
    Ok(Outcome { command: "morita", passed: report.passed(), report: to_value(&report), text })
}

pub fn trace_check(s: &EntwiningStructure, g: &Cochain, limit: usize) -> Result<Outcome, CliError> {
    let n = g.degree();
    guard(s, n + 1, limit)?;
    if !in_subcomplex(s, Theory::Cyclic, g) {
        return Ok(Outcome {
            command: "trace-check",
            passed: false,
            report: json!({ "degree": n, "cyclic": false }),
            text: "FAIL the cochain is not in the cyclic subcomplex, so it does not lift to a trace\n".into(),
        });
    }
    let closed = hochschild_delta(s, n).matrix.mul_vec(&g.values).is_empty();
    let omega = TruncatedOmega::new(s, n).map_err(math)?;
    let dg = omega.to_dg();
    let t = trace_from_cocycle(&omega, g).map_err(math)?;
    let report = validate_trace(&dg, &t).map_err(math)?;
    let round_trip = report.passed && character(&dg, &t).map_err(math)? == *g;
    let mut text = format!(
        "{} trace laws in degree {n} ({} conditions)\n",
        pass_fail(report.passed),
        report.conditions_checked
    );
    if let Some(w) = &report.witness {
        let _ = writeln!(text, "witness {}", to_value(w));
    }
    let _ = writeln!(text, "{} cocycle condition", pass_fail(closed));
    if report.passed {
        let _ = writeln!(text, "{} character of the trace returns the cochain", pass_fail(round_trip));
    }
    Ok(Outcome {
        command: "trace-check",
        passed: report.passed && round_trip,
        report: json!({
            "degree": n,
            "cyclic": true,
            "closed": closed,
            "trace": to_value(&report),
            "round_trip": round_trip,
        }),
        text,
    })
}

pub fn pair(
    s: &EntwiningStructure,
    g: &Cochain,
    s2: &EntwiningStructure,
    g2: &Cochain,
    limit: usize,
) -> Result<Outcome, CliError> {
    let p = g.degree() + g2.degree();
    let st = tensor_product(s, s2).map_err(math)?;
    guard(&st, p + 1, limit)?;
    let report = pairing_report(s, g, s2, g2).map_err(|e| match e {
        PairingError::NotCocycle { .. } => math(e),
        PairingError::Omega(OmegaError::TooLarge { .. }) => CliError::Usage(e.to_string()),
        other => math(other),
    })?;
    let out = Cochain::from_entries(
        &st,
        p,
        report
            .output
            .iter()
            .map(|(c, a, v)| (*c, a.clone(), st.field().parse_scalar(v).expect("canonical scalar"))),
    )
    .map_err(math)?;
    let mut text = format!(
        "left  degree {} sha256 {}\nright degree {} sha256 {}\n",
        report.left_degree, report.left_digest, report.right_degree, report.right_digest
    );
    let _ = writeln!(text, "{} output lies in the cyclic subcomplex", pass_fail(report.in_cyclic_subcomplex));
    let _ = writeln!(text, "{} output is a cocycle", pass_fail(report.closed));
    let _ = writeln!(text, "{} tensor trace laws", pass_fail(report.tensor_trace.passed));
    let _ = writeln!(text, "{} expansion agrees with the tensor character", pass_fail(report.routes_agree));
    let _ = writeln!(text, "output degree {p} sha256 {}", report.output_digest);
    for (c, a, v) in &report.output {
        let _ = writeln!(text, "  {c} {a:?} {v}");
    }
    Ok(Outcome {
        command: "pair",
        passed: report.passed(),
        report: json!({
            "left_degree": report.left_degree,
            "right_degree": report.right_degree,
            "left_digest": report.left_digest,
            "right_digest": report.right_digest,
            "output_digest": report.output_digest,
            "output": to_value(&CochainFile::from_cochain(&out)),
            "in_cyclic_subcomplex": report.in_cyclic_subcomplex,
            "closed": report.closed,
            "tensor_trace": to_value(&report.tensor_trace),
            "routes_agree": report.routes_agree,
        }),
        text,
    })
}

pub fn conjugation(
    s: &EntwiningStructure,
    x: &crate::linalg::SparseVec,
    y: &crate::linalg::SparseVec,
    max_n: usize,
    limit: usize,
) -> Result<Outcome, CliError> {
    require_valid(s)?;
    guard(s, max_n + 1, limit)?;
    let report = conjugation_check(s, x, y, max_n).map_err(math)?;
    let mut text = String::new();
    if !report.unit.member {
        let _ = writeln!(
            text,
            "FAIL not a psi-invariant unit: {}",
            report.unit.reason.clone().unwrap_or_default()
        );
    }
    for d in &report.degrees {
        let _ = write!(
            text,
            "{} degree {}: conjugate minus original is a coboundary for {} of {} basis cocycles",
            pass_fail(d.failures.is_empty()),
            d.degree,
            d.cocycles_checked - d.failures.len(),
            d.cocycles_checked
        );
        if !d.failures.is_empty() {
            let _ = write!(text, " (failing {:?})", d.failures);
        }
        text.push('\n');
    }
    Ok(Outcome { command: "conjugation-check", passed: report.passed(), report: to_value(&report), text })
}
