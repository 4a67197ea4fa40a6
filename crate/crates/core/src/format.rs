//! The `.msd` diagram file format.
//!
//! ```text
//! # comment
//! surface {
//!   genus = 2
//!   boundary = 1
//!   generators = alpha beta x y
//! }
//! twist {
//!   x = t
//! }
//! collection alpha {
//!   alpha = alpha
//! }
//! arcs {
//!   e = 0 0 0 1
//! }
//! options {
//!   variant = absolute
//!   h1 = 0, 1, 0, 0
//!   a.alpha = alpha
//! }
//! ```
//!
//! See the README for the full grammar.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::algebra::{parse_laurent, QLaurent};
use crate::multisection::{Arc, Collection, Curve, DiagramError, MultisectionDiagram, Variant};
use crate::surface::{Monomial, RoseSurface, SurfaceError, TwistSpec, Word};
use crate::torsion::HomologyBasis;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("{0}")]
    Diagram(#[from] DiagramError),
}

fn err<T>(line: usize, col: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError::Syntax {
        line,
        col,
        message: message.into(),
    })
}

/// Per-file settings that are not part of the diagram itself.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FileOptions {
    pub variant: Option<Variant>,
    /// Cycles spanning homology, keyed by degree (`h<k>` entries).
    pub homology_basis: HomologyBasis,
    /// Curve choices `a.<collection>` for the monodromy recursion.
    pub curve_choice: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagramFile {
    pub diagram: MultisectionDiagram,
    pub options: FileOptions,
}

impl DiagramFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        Parser::default().run(text)
    }

    pub fn read(path: &std::path::Path) -> Result<Self, ParseError> {
        let text = std::fs::read_to_string(path).map_err(|e| ParseError::Syntax {
            line: 0,
            col: 0,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Self::parse(&text)
    }

    /// Curve choices resolved to one list per collection, if any were given.
    pub fn curve_names(&self) -> Option<Vec<Vec<String>>> {
        if self.options.curve_choice.is_empty() {
            return None;
        }
        Some(
            self.diagram
                .collections
                .iter()
                .map(|c| self.options.curve_choice.get(&c.name).cloned().unwrap_or_default())
                .collect(),
        )
    }

    /// Canonical text; parsing it gives back `self`.
    pub fn serialize(&self) -> String {
        let d = &self.diagram;
        let names = d.rose.names();
        let mut s = String::new();
        s.push_str("surface {\n");
        let _ = writeln!(s, "  genus = {}", d.rose.genus());
        if d.rose.is_closed() {
            s.push_str("  closed = true\n");
        } else {
            let _ = writeln!(s, "  boundary = {}", d.rose.boundary());
        }
        let _ = writeln!(s, "  generators = {}", names.join(" "));
        s.push_str("}\n");
        if let Some(t) = &d.twist {
            s.push_str("twist {\n");
            for (name, m) in names.iter().zip(t.images()) {
                if !m.is_one() {
                    let _ = writeln!(s, "  {name} = {m}");
                }
            }
            s.push_str("}\n");
        }
        for c in &d.collections {
            let _ = writeln!(s, "collection {} {{", c.name);
            for cur in &c.curves {
                let _ = writeln!(s, "  {} = {}", cur.name, cur.word.display(names));
            }
            s.push_str("}\n");
        }
        if !d.arcs.is_empty() {
            s.push_str("arcs {\n");
            for a in &d.arcs {
                let v: Vec<String> = a.dual.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(s, "  {} = {}", a.name, v.join(" "));
            }
            s.push_str("}\n");
        }
        let o = &self.options;
        if o.variant.is_some() || !o.homology_basis.is_empty() || !o.curve_choice.is_empty() {
            s.push_str("options {\n");
            if let Some(v) = o.variant {
                let _ = writeln!(s, "  variant = {v}");
            }
            for (k, vs) in &o.homology_basis {
                for v in vs {
                    let entries: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                    let _ = writeln!(s, "  h{k} = {}", entries.join(", "));
                }
            }
            for (c, curves) in &o.curve_choice {
                let _ = writeln!(s, "  a.{c} = {}", curves.join(" "));
            }
            s.push_str("}\n");
        }
        s
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Section {
    Surface,
    Twist,
    Collection,
    Arcs,
    Options,
}

#[derive(Default)]
struct SurfaceSpec {
    genus: Option<usize>,
    boundary: Option<usize>,
    closed: Option<bool>,
    generators: Option<Vec<String>>,
}

#[derive(Default)]
struct Parser {
    surface: SurfaceSpec,
    rose: Option<RoseSurface>,
    twist: Option<Vec<Option<Monomial>>>,
    collections: Vec<Collection>,
    arcs: Vec<Arc>,
    seen_arcs: bool,
    seen_options: bool,
    options: FileOptions,
}

fn is_ident(s: &str) -> bool {
    !s.is_empty()
        && s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
        && !s.starts_with(|c: char| c.is_ascii_digit())
}

/// Column (1-based) of `needle` inside `line`, searching from `from`.
fn col_of(line: &str, needle: &str, from: usize) -> usize {
    line[from..].find(needle).map_or(from + 1, |i| from + i + 1)
}

impl Parser {
    fn run(mut self, text: &str) -> Result<DiagramFile, ParseError> {
        let mut current: Option<(Section, String, usize)> = None;
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let ln = idx + 1;
            last_line = ln;
            let line = raw.split('#').next().unwrap_or("");
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let indent = line.len() - line.trim_start().len();
            match &current {
                None => {
                    let Some(head) = trimmed.strip_suffix('{') else {
                        return err(ln, indent + 1, format!("expected a section header ending in `{{`, found `{trimmed}`"));
                    };
                    let words: Vec<&str> = head.split_whitespace().collect();
                    let (sec, name) = match words.as_slice() {
                        ["surface"] => (Section::Surface, String::new()),
                        ["twist"] => (Section::Twist, String::new()),
                        ["arcs"] => (Section::Arcs, String::new()),
                        ["options"] => (Section::Options, String::new()),
                        ["collection", name] if is_ident(name) => (Section::Collection, name.to_string()),
                        ["collection", name] => return err(ln, col_of(line, name, indent), format!("invalid collection name `{name}`")),
                        ["collection"] => return err(ln, indent + 1, "collection header needs a name"),
                        [other, ..] => return err(ln, indent + 1, format!("unknown section `{other}`")),
                        [] => return err(ln, indent + 1, "missing section name"),
                    };
                    self.open(sec, &name, ln, indent + 1)?;
                    current = Some((sec, name, ln));
                }
                Some((sec, name, _)) => {
                    if trimmed == "}" {
                        self.close(*sec, ln)?;
                        current = None;
                        continue;
                    }
                    let Some(eq) = line.find('=') else {
                        return err(ln, indent + 1, format!("expected `key = value`, found `{trimmed}`"));
                    };
                    let key = line[..eq].trim();
                    let vstart = eq + 1 + (line[eq + 1..].len() - line[eq + 1..].trim_start().len());
                    let value = line[eq + 1..].trim();
                    let (sec, name) = (*sec, name.clone());
                    self.entry(sec, &name, key, value, ln, indent + 1, vstart + 1, line)?;
                }
            }
        }
        if let Some((sec, _, open_line)) = current {
            return err(open_line, 1, format!("{sec:?} section is never closed").to_lowercase());
        }
        let Some(rose) = self.rose else {
            return err(last_line.max(1), 1, "missing surface section");
        };
        let twist = self.twist.map(|v| TwistSpec::new(v.into_iter().map(|m| m.unwrap_or(Monomial::ONE)).collect()));
        for (c, curves) in &self.options.curve_choice {
            let Some(col) = self.collections.iter().find(|x| &x.name == c) else {
                return Err(DiagramError::Structure(format!("option a.{c} names an unknown collection")).into());
            };
            for cur in curves {
                if !col.curves.iter().any(|x| &x.name == cur) {
                    return Err(DiagramError::Structure(format!("option a.{c} names unknown curve `{cur}`")).into());
                }
            }
        }
        let diagram = MultisectionDiagram::new(rose, self.collections, self.arcs, twist)?;
        Ok(DiagramFile {
            diagram,
            options: self.options,
        })
    }

    fn open(&mut self, sec: Section, name: &str, ln: usize, col: usize) -> Result<(), ParseError> {
        match sec {
            Section::Surface if self.rose.is_some() => err(ln, col, "duplicate surface section"),
            Section::Surface => Ok(()),
            _ if self.rose.is_none() => err(ln, col, "the surface section must come first"),
            Section::Twist if self.twist.is_some() => err(ln, col, "duplicate twist section"),
            Section::Twist => {
                self.twist = Some(vec![None; self.rose.as_ref().unwrap().num_generators()]);
                Ok(())
            }
            Section::Arcs if self.seen_arcs => err(ln, col, "duplicate arcs section"),
            Section::Options if self.seen_options => err(ln, col, "duplicate options section"),
            Section::Arcs => {
                self.seen_arcs = true;
                Ok(())
            }
            Section::Options => {
                self.seen_options = true;
                Ok(())
            }
            Section::Collection => {
                if self.collections.iter().any(|c| c.name == name) {
                    return err(ln, col, format!("duplicate collection `{name}`"));
                }
                self.collections.push(Collection {
                    name: name.to_string(),
                    curves: Vec::new(),
                });
                Ok(())
            }
        }
    }

    fn close(&mut self, sec: Section, ln: usize) -> Result<(), ParseError> {
        if sec != Section::Surface {
            return Ok(());
        }
        let s = &self.surface;
        let closed = s.closed.unwrap_or(false);
        let Some(genus) = s.genus else {
            return err(ln, 1, "surface section needs `genus`");
        };
        let rose = if closed {
            if s.boundary.is_some_and(|b| b != 0) {
                return err(ln, 1, "a closed surface has no boundary components");
            }
            RoseSurface::closed(genus)
        } else {
            let Some(b) = s.boundary else {
                return err(ln, 1, "surface section needs `boundary` (or `closed = true`)");
            };
            RoseSurface::standard(genus, b)
        };
        let mut rose = rose.map_err(|e| ParseError::Syntax {
            line: ln,
            col: 1,
            message: e.to_string(),
        })?;
        if let Some(names) = s.generators.clone() {
            rose = rose.with_names(names).map_err(|e| ParseError::Syntax {
                line: ln,
                col: 1,
                message: e.to_string(),
            })?;
        }
        self.rose = Some(rose);
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn entry(
        &mut self,
        sec: Section,
        section_name: &str,
        key: &str,
        value: &str,
        ln: usize,
        kcol: usize,
        vcol: usize,
        line: &str,
    ) -> Result<(), ParseError> {
        if key.is_empty() {
            return err(ln, kcol, "missing key before `=`");
        }
        if value.is_empty() {
            return err(ln, vcol, format!("missing value for `{key}`"));
        }
        match sec {
            Section::Surface => {
                let dup = |b: bool| if b { err(ln, kcol, format!("duplicate key `{key}`")) } else { Ok(()) };
                let num = || {
                    value
                        .parse::<usize>()
                        .or_else(|_| err(ln, vcol, format!("`{key}` must be a non-negative integer")))
                };
                match key {
                    "genus" => {
                        dup(self.surface.genus.is_some())?;
                        self.surface.genus = Some(num()?);
                    }
                    "boundary" => {
                        dup(self.surface.boundary.is_some())?;
                        self.surface.boundary = Some(num()?);
                    }
                    "closed" => {
                        dup(self.surface.closed.is_some())?;
                        self.surface.closed = Some(match value {
                            "true" => true,
                            "false" => false,
                            _ => return err(ln, vcol, "`closed` must be `true` or `false`"),
                        });
                    }
                    "generators" => {
                        dup(self.surface.generators.is_some())?;
                        self.surface.generators = Some(value.split_whitespace().map(String::from).collect());
                    }
                    _ => return err(ln, kcol, format!("unknown key `{key}` in surface section")),
                }
            }
            Section::Twist => {
                let rose = self.rose.as_ref().unwrap();
                let Some(g) = rose.names().iter().position(|n| n == key) else {
                    return err(ln, kcol, format!("unknown generator `{key}`"));
                };
                let slot = &mut self.twist.as_mut().unwrap()[g];
                if slot.is_some() {
                    return err(ln, kcol, format!("duplicate twist for `{key}`"));
                }
                let Some(m) = Monomial::parse(value) else {
                    return err(ln, vcol, format!("`{value}` is not a signed monomial (e.g. t, -t^2, 1)"));
                };
                *slot = Some(m);
            }
            Section::Collection => {
                if !is_ident(key) {
                    return err(ln, kcol, format!("invalid curve name `{key}`"));
                }
                let rose = self.rose.as_ref().unwrap();
                let word = Word::parse(value, rose.names()).or_else(|e| {
                    let tok = match &e {
                        SurfaceError::BadToken(t) | SurfaceError::UnknownGenerator(t) => t.clone(),
                        _ => String::new(),
                    };
                    err(ln, col_of(line, &tok, vcol - 1), e.to_string())
                })?;
                if word.is_empty() {
                    return err(ln, vcol, "empty curve word");
                }
                let col = self.collections.iter_mut().find(|c| c.name == section_name).unwrap();
                if col.curves.iter().any(|c| c.name == key) {
                    return err(ln, kcol, format!("duplicate curve `{key}`"));
                }
                col.curves.push(Curve {
                    name: key.to_string(),
                    word,
                });
            }
            Section::Arcs => {
                if !is_ident(key) {
                    return err(ln, kcol, format!("invalid arc name `{key}`"));
                }
                if self.arcs.iter().any(|a| a.name == key) {
                    return err(ln, kcol, format!("duplicate arc `{key}`"));
                }
                let mut dual = Vec::new();
                for tok in value.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
                    match tok.parse::<i64>() {
                        Ok(x) => dual.push(x),
                        Err(_) => return err(ln, col_of(line, tok, vcol - 1), format!("`{tok}` is not an integer")),
                    }
                }
                self.arcs.push(Arc {
                    name: key.to_string(),
                    dual,
                });
            }
            Section::Options => {
                if key == "variant" {
                    if self.options.variant.is_some() {
                        return err(ln, kcol, "duplicate key `variant`");
                    }
                    let v = value.parse::<Variant>().or_else(|e| err(ln, vcol, e))?;
                    self.options.variant = Some(v);
                } else if let Some(c) = key.strip_prefix("a.") {
                    if self.options.curve_choice.contains_key(c) {
                        return err(ln, kcol, format!("duplicate key `{key}`"));
                    }
                    self.options
                        .curve_choice
                        .insert(c.to_string(), value.split_whitespace().map(String::from).collect());
                } else if let Some(k) = key.strip_prefix('h').and_then(|k| k.parse::<i32>().ok()) {
                    let mut v: Vec<QLaurent> = Vec::new();
                    for tok in value.split(',') {
                        match parse_laurent(tok) {
                            Some(p) => v.push(p.to_rational()),
                            None => {
                                return err(ln, col_of(line, tok.trim(), vcol - 1), format!("`{}` is not a Laurent polynomial", tok.trim()))
                            }
                        }
                    }
                    self.options.homology_basis.entry(k).or_default().push(v);
                } else {
                    return err(ln, kcol, format!("unknown option `{key}`"));
                }
            }
        }
        Ok(())
    }
}
