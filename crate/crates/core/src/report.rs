//! Command dispatch and report rendering shared by the CLI and the C bindings.

use std::fmt::{Display, Write as _};
use std::str::FromStr;

use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{Matrix, Ring};
use crate::format::DiagramFile;
use crate::forms::{absolute_h2_basis, closed_h2_form_auto, h2_pairing_matrix, relative_h2_basis, FormError};
use crate::homology::{homology, homology_over_field, HomologyError, HomologyReport, TorsionCoefficient};
use crate::multisection::{ChainComplex, DiagramError, MultisectionDiagram, ValidationReport, Variant};
use crate::open_book::{boundary_homology, curve_indices, MonodromyResult, OpenBookError};
use crate::surface::{Monomial, TwistSpec};
use crate::torsion::{torsion_of_diagram, TorsionError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Homology,
    RelHomology,
    TwistedHomology,
    Torsion,
    IntersectionForm,
    Monodromy,
    Boundary,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Validate,
        Command::Homology,
        Command::RelHomology,
        Command::TwistedHomology,
        Command::Torsion,
        Command::IntersectionForm,
        Command::Monodromy,
        Command::Boundary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Homology => "homology",
            Command::RelHomology => "rel-homology",
            Command::TwistedHomology => "twisted-homology",
            Command::Torsion => "torsion",
            Command::IntersectionForm => "intersection-form",
            Command::Monodromy => "monodromy",
            Command::Boundary => "boundary",
        }
    }

    fn twisted(self) -> bool {
        matches!(self, Command::TwistedHomology | Command::Torsion)
    }
}

impl FromStr for Command {
    type Err = RunError;
    fn from_str(s: &str) -> Result<Self, RunError> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| RunError::Usage(format!("unknown command `{s}`")))
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Replacement twist, e.g. `x=t, y=-t^2`.
    pub twist_override: Option<String>,
    pub variant: Option<Variant>,
    pub trace: bool,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(#[from] crate::format::ParseError),
    #[error("invalid diagram: {}", .0.join("; "))]
    Validation(Vec<String>, Box<ValidationReport>),
    #[error("{0}")]
    Computation(String),
}

impl RunError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage(_) => 2,
            RunError::Parse(_) => 3,
            RunError::Validation(..) => 4,
            RunError::Computation(_) => 5,
        }
    }
}

macro_rules! computation_from {
    ($($t:ty),*) => {$(
        impl From<$t> for RunError {
            fn from(e: $t) -> Self {
                RunError::Computation(e.to_string())
            }
        }
    )*};
}
computation_from!(DiagramError, HomologyError, TorsionError, FormError, OpenBookError);

/// Output of one command: a text rendering and a JSON document.
#[derive(Clone, Debug)]
pub struct Report {
    pub text: String,
    pub json: Value,
}

/// Parses `gen=monomial` pairs separated by commas.
pub fn parse_twist(spec: &str, names: &[String]) -> Result<TwistSpec, RunError> {
    let mut images = vec![Monomial::ONE; names.len()];
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (g, m) = part
            .split_once('=')
            .ok_or_else(|| RunError::Usage(format!("twist entry `{part}` is not of the form gen=monomial")))?;
        let (g, m) = (g.trim(), m.trim());
        let idx = names
            .iter()
            .position(|n| n == g)
            .ok_or_else(|| RunError::Usage(format!("twist names unknown generator `{g}`")))?;
        images[idx] = Monomial::parse(m).ok_or_else(|| RunError::Usage(format!("`{m}` is not a signed monomial")))?;
    }
    Ok(TwistSpec::new(images))
}

/// Row-major matrix with labelled rows and columns.
pub fn render_matrix<T: Display>(rows: &[String], cols: &[String], cell: impl Fn(usize, usize) -> T) -> String {
    let mut table: Vec<Vec<String>> = Vec::with_capacity(rows.len() + 1);
    let mut head = vec![String::new()];
    head.extend(cols.iter().cloned());
    table.push(head);
    for (i, r) in rows.iter().enumerate() {
        let mut line = vec![r.clone()];
        line.extend((0..cols.len()).map(|j| cell(i, j).to_string()));
        table.push(line);
    }
    let widths: Vec<usize> = (0..=cols.len())
        .map(|j| table.iter().map(|l| l[j].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for line in table {
        let cells: Vec<String> = line
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}", w = w))
            .collect();
        let _ = writeln!(out, "  {}", cells.join("  ").trim_end());
    }
    out
}

fn matrix_json<R: Ring + Display>(m: &Matrix<R>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| Value::String(m[(i, j)].to_string())).collect()))
            .collect(),
    )
}

fn matrix_text<R: Ring + Display>(m: &Matrix<R>, rows: &[String], cols: &[String]) -> String {
    if m.rows() == 0 || m.cols() == 0 {
        return format!("  ({}×{} matrix)\n", m.rows(), m.cols());
    }
    render_matrix(rows, cols, |i, j| m[(i, j)].to_string())
}

fn numbered(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn homology_json(h: &HomologyReport) -> Value {
    let groups: Vec<Value> = h
        .groups
        .iter()
        .map(|g| {
            let torsion: Vec<String> = g
                .torsion
                .iter()
                .map(|t| match t {
                    TorsionCoefficient::Integer(n) => n.to_string(),
                    TorsionCoefficient::Polynomial(p) => p.to_string(),
                })
                .collect();
            json!({
                "degree": g.degree,
                "group": h.describe(g.degree),
                "free_rank": g.free_rank,
                "invariant_factors": torsion,
            })
        })
        .collect();
    json!({ "ring": h.ring, "summary": h.summary(), "groups": groups })
}

fn complex_json(c: &ChainComplex) -> Value {
    let maps: Vec<Value> = (c.low + 1..=c.high())
        .map(|k| json!({ "degree": k, "matrix": matrix_json(&c.boundary(k)) }))
        .collect();
    json!({ "low": c.low, "ranks": c.ranks, "ring": c.ring, "boundary_maps": maps })
}

fn complex_text(c: &ChainComplex) -> String {
    let mut out = String::new();
    for k in c.low + 1..=c.high() {
        let m = c.boundary(k);
        let _ = writeln!(out, "∂{k}: C{k} → C{}", k - 1);
        let rows = label_or_number(c, k - 1);
        let cols = label_or_number(c, k);
        out.push_str(&matrix_text(&m, &rows, &cols));
    }
    out
}

fn label_or_number(c: &ChainComplex, k: i32) -> Vec<String> {
    let idx = (k - c.low) as usize;
    match c.labels.get(idx) {
        Some(l) if l.len() == c.rank(k) => l.clone(),
        _ => numbered("c", c.rank(k)),
    }
}

fn validation_json(r: &ValidationReport) -> Value {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
        .collect();
    json!({ "valid": r.valid, "checks": checks, "page": r.page })
}

fn default_variant(d: &MultisectionDiagram) -> Variant {
    if d.is_closed() {
        Variant::Closed
    } else {
        Variant::Absolute
    }
}

/// Runs `cmd` on a parsed diagram file.
pub fn run(cmd: Command, file: &DiagramFile, opts: &RunOptions) -> Result<Report, RunError> {
    let mut d = file.diagram.clone();
    if let Some(spec) = &opts.twist_override {
        d.twist = Some(parse_twist(spec, d.rose.names())?);
    }
    if !cmd.twisted() {
        d.twist = None;
    }
    let validation = d.validate();
    if cmd == Command::Validate {
        let mut text = String::new();
        for c in &validation.checks {
            let _ = writeln!(text, "[{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail);
        }
        let _ = writeln!(
            text,
            "{}",
            if validation.valid {
                "diagram is homologically valid"
            } else {
                "diagram is not valid"
            }
        );
        if !validation.valid {
            let reasons = validation.failures().iter().map(|c| c.detail.clone()).collect();
            return Err(RunError::Validation(reasons, Box::new(validation)));
        }
        let json = json!({ "command": cmd.name(), "validation": validation_json(&validation) });
        return Ok(Report { text, json });
    }
    if !validation.valid {
        let reasons = validation.failures().iter().map(|c| c.detail.clone()).collect();
        return Err(RunError::Validation(reasons, Box::new(validation)));
    }
    let variant = opts.variant.or(file.options.variant);
    let mut report = match cmd {
        Command::Validate => unreachable!(),
        Command::Homology | Command::RelHomology => {
            let v = if cmd == Command::RelHomology {
                Variant::Relative
            } else {
                variant.unwrap_or_else(|| default_variant(&d))
            };
            let c = d.build_complex(v, &d.twist_or_trivial())?;
            let h = homology(&c)?;
            let mut text = format!("{}\n", h.summary());
            if opts.trace {
                text.push_str(&complex_text(&c));
            }
            let json = json!({ "variant": v, "homology": homology_json(&h), "complex": complex_json(&c) });
            Report { text, json }
        }
        Command::TwistedHomology => {
            let phi = d
                .twist
                .clone()
                .ok_or_else(|| RunError::Computation("the diagram has no twist; add a twist section or use --twist-override".into()))?;
            let v = variant.unwrap_or_else(|| default_variant(&d));
            let c = d.build_complex(v, &phi)?;
            let h = homology(&c)?;
            let f = homology_over_field(&c)?;
            let mut text = format!("{}\nover Q(t): {}\n", h.summary(), if f.acyclic() { "acyclic".to_string() } else { f.summary() });
            if opts.trace {
                text.push_str(&complex_text(&c));
            }
            let json = json!({
                "variant": v,
                "homology": homology_json(&h),
                "field_homology": homology_json(&f),
                "acyclic_over_field": f.acyclic(),
                "complex": complex_json(&c),
            });
            Report { text, json }
        }
        Command::Torsion => {
            let phi = d.twist_or_trivial();
            let v = variant.unwrap_or_else(|| default_variant(&d));
            let h = (!file.options.homology_basis.is_empty()).then_some(&file.options.homology_basis);
            let t = torsion_of_diagram(&d, &phi, v, h)?;
            let mut text = format!("{t}\n");
            if opts.trace {
                let _ = writeln!(text, "raw value: {}", t.raw);
                text.push_str(&complex_text(&d.build_complex(v, &phi)?));
            }
            let json = json!({
                "variant": v,
                "raw": t.raw.to_string(),
                "canonical": t.canonical.to_string(),
                "ambiguity": t.ambiguity,
                "ambiguity_text": t.ambiguity.to_string(),
                "acyclic": t.acyclic,
                "homology_basis_supplied": t.homology_basis_supplied,
            });
            Report { text, json }
        }
        Command::IntersectionForm => intersection_form(&d, opts)?,
        Command::Monodromy | Command::Boundary => {
            let a = match file.curve_names() {
                Some(names) => Some(curve_indices(&d, &names)?),
                None => None,
            };
            let b = boundary_homology(&d, a.as_deref(), None)?;
            monodromy_report(&d, &b.monodromy, &b.homology, cmd, opts.trace)
        }
    };
    if let Value::Object(m) = &mut report.json {
        m.insert("command".into(), Value::String(cmd.name().into()));
    }
    Ok(report)
}

fn intersection_form(d: &MultisectionDiagram, opts: &RunOptions) -> Result<Report, RunError> {
    let phi = d.twist_or_trivial();
    if d.is_closed() {
        let f = closed_h2_form_auto(d, &phi)?;
        let names = numbered("h", f.gram.rows());
        let mut text = format!("Gram matrix on H2 (rank {}):\n", f.gram.rows());
        text.push_str(&matrix_text(&f.gram, &names, &names));
        if let Some(s) = f.signature {
            let _ = writeln!(text, "signature = {s}");
        }
        let json = json!({ "kind": "closed", "gram": matrix_json(&f.gram), "signature": f.signature });
        return Ok(Report { text, json });
    }
    let abs = absolute_h2_basis(d, &phi)?;
    let rel = relative_h2_basis(d, &phi)?;
    let m = h2_pairing_matrix(d, &phi, &abs, &rel)?;
    let rows = numbered("h", abs.len());
    let cols = numbered("k", rel.len());
    let mut text = format!("pairing H2(X) × H2(X,∂X) ({}×{}):\n", m.rows(), m.cols());
    text.push_str(&matrix_text(&m, &rows, &cols));
    if opts.trace {
        for (i, a) in abs.iter().enumerate() {
            let _ = writeln!(text, "h{} curve coordinates: {:?}", i + 1, a.x);
        }
        for (j, r) in rel.iter().enumerate() {
            let _ = writeln!(text, "k{} dual vectors: {:?}", j + 1, r.y);
        }
    }
    let json = json!({
        "kind": "bounded",
        "matrix": matrix_json(&m),
        "absolute_basis": abs.iter().map(|a| format!("{:?}", a.x)).collect::<Vec<_>>(),
        "relative_basis": rel.iter().map(|r| format!("{:?}", r.y)).collect::<Vec<_>>(),
    });
    Ok(Report { text, json })
}

fn monodromy_report(
    d: &MultisectionDiagram,
    m: &MonodromyResult,
    h: &HomologyReport,
    cmd: Command,
    trace: bool,
) -> Report {
    let arcs: Vec<String> = d.arcs.iter().map(|a| a.name.clone()).collect();
    let gens = d.rose.names().to_vec();
    let curve_names: Vec<Vec<String>> = m
        .a
        .iter()
        .zip(&d.collections)
        .map(|(a, c)| a.iter().map(|&k| c.curves[k].name.clone()).collect())
        .collect();
    let completion_names = numbered("b", m.completion.cols());
    let mut text = String::new();
    let boundary_line = h
        .groups
        .iter()
        .map(|g| format!("H{}(∂X)={}", g.degree, h.describe(g.degree)))
        .collect::<Vec<_>>()
        .join(" ");
    if cmd == Command::Boundary {
        let _ = writeln!(text, "{boundary_line}");
    }
    if cmd == Command::Monodromy || trace {
        text.push_str("R (monodromy on the arcs):\n");
        text.push_str(&matrix_text(&m.r, &arcs, &arcs));
        let _ = writeln!(text, "det R = {}", crate::open_book::monodromy_determinant(m));
    }
    if trace || cmd == Command::Monodromy {
        for (i, s) in m.steps.iter().enumerate() {
            let _ = writeln!(text, "R{} (a{} = {}):", i + 1, i + 1, curve_names[i].join(", "));
            text.push_str(&matrix_text(&s.r, &arcs, &curve_names[i]));
        }
    }
    if trace || cmd == Command::Boundary {
        text.push_str("S (ξ in the completion basis):\n");
        text.push_str(&matrix_text(&m.s, &completion_names, &arcs));
    }
    if trace {
        for (i, s) in m.steps.iter().enumerate() {
            let e = Matrix::from_cols(
                &s.e_next.iter().map(|v| v.to_vec()).collect::<Vec<_>>(),
                gens.len(),
            );
            let _ = writeln!(text, "e{} (dual coordinates):", i + 2);
            text.push_str(&matrix_text(&e.transpose(), &arcs, &gens));
            let eps = Matrix::from_cols(&s.eps_next.to_vec(), gens.len());
            let _ = writeln!(text, "ε{} (loop coordinates):", i + 2);
            text.push_str(&matrix_text(&eps.transpose(), &arcs, &gens));
        }
        text.push_str("completion basis of J1 (columns, loop coordinates):\n");
        text.push_str(&matrix_text(&m.completion, &gens, &completion_names));
    }
    let steps: Vec<Value> = m
        .steps
        .iter()
        .enumerate()
        .map(|(i, s)| {
            json!({
                "curves": curve_names[i],
                "r": matrix_json(&s.r),
                "e": s.e_next.iter().map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "epsilon": s.eps_next.iter().map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let json = json!({
        "page": m.page,
        "arcs": arcs,
        "r": matrix_json(&m.r),
        "det_r": crate::open_book::monodromy_determinant(m).to_string(),
        "s": matrix_json(&m.s),
        "completion": matrix_json(&m.completion),
        "l_basis": matrix_json(&m.l_basis),
        "steps": steps,
        "boundary_homology": homology_json(h),
        "boundary_summary": boundary_line,
    });
    Report { text, json }
}
