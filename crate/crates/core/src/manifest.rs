//! Sequence manifests: an ordered list of instances (files or built-in
//! generator expressions) plus parameter grids.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generate;
use crate::graph::UnlabeledGraph;
use crate::group::PermutationAction;
use crate::homology::{rips_complex, FiniteComplex};
use crate::io;
use crate::spectral::IntSymMatrix;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceKind {
    Graphs,
    Actions,
    Complexes,
    Matrices,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grids {
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub l: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<Vec<f64>>,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceManifest {
    pub schema_version: u32,
    pub kind: InstanceKind,
    /// File paths (relative to the manifest) or generator expressions such
    /// as `cycle(6)` or `random-schreier(2, 200, 0)`.
    pub instances: Vec<String>,
    #[serde(default)]
    pub grids: Grids,
    #[serde(default)]
    pub n0: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl SequenceManifest {
    pub fn new(kind: InstanceKind, instances: Vec<String>) -> Self {
        SequenceManifest {
            schema_version: SCHEMA_VERSION,
            kind,
            instances,
            grids: Grids::default(),
            n0: 0,
            jobs: None,
            base_dir: PathBuf::new(),
        }
    }

    pub fn parse(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let mut m: SequenceManifest = serde_json::from_str(text).map_err(|e| {
            Error::parse(format!("manifest line {} column {}", e.line(), e.column()), e.to_string())
        })?;
        m.base_dir = base_dir.into();
        m.validate()?;
        Ok(m)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::parse(
                "schema_version",
                format!("unsupported version {} (expected {SCHEMA_VERSION})", self.schema_version),
            ));
        }
        if self.instances.is_empty() {
            return Err(Error::parse("instances", "at least one instance is required"));
        }
        let g = &self.grids;
        for (name, empty) in [
            ("grids.L", g.l.as_ref().map(Vec::is_empty)),
            ("grids.q", g.q.as_ref().map(Vec::is_empty)),
            ("grids.p", g.p.as_ref().map(Vec::is_empty)),
            ("grids.eps", g.eps.as_ref().map(Vec::is_empty)),
            ("grids.R", g.r.as_ref().map(Vec::is_empty)),
        ] {
            if empty == Some(true) {
                return Err(Error::parse(name, "grid must be nonempty"));
            }
        }
        for (i, inst) in self.instances.iter().enumerate() {
            if looks_like_expr(inst) {
                let e = Expr::parse(inst)
                    .map_err(|e| Error::parse(format!("instances[{i}]"), e))?;
                check_seeded(&e).map_err(|m| Error::parse(format!("instances[{i}]"), m))?;
            }
        }
        Ok(())
    }

    fn each<T>(&self, mut f: impl FnMut(Source) -> Result<Vec<T>>) -> Result<Vec<T>> {
        let mut out = Vec::new();
        for (i, inst) in self.instances.iter().enumerate() {
            let src = if looks_like_expr(inst) {
                Source::Expr(Expr::parse(inst).map_err(|e| Error::parse(format!("instances[{i}]"), e))?)
            } else {
                let path = self.base_dir.join(inst);
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| Error::parse(format!("instances[{i}]"), format!("{}: {e}", path.display())))?;
                Source::File(text)
            };
            let items = f(src).map_err(|e| match e {
                Error::Parse { location, message } => {
                    Error::parse(format!("instances[{i}] {location}"), message)
                }
                other => Error::parse(format!("instances[{i}]"), other.to_string()),
            })?;
            out.extend(items);
        }
        Ok(out)
    }

    /// Graph instances; action generators contribute their simple Schreier
    /// graphs.
    pub fn graphs(&self) -> Result<Vec<UnlabeledGraph>> {
        self.expect_kind(InstanceKind::Graphs)?;
        self.each(|s| match s {
            Source::Expr(e) => eval_graphs(&e),
            Source::File(t) => Ok(vec![io::read_graph(&t)?]),
        })
    }

    pub fn actions(&self) -> Result<Vec<PermutationAction>> {
        self.expect_kind(InstanceKind::Actions)?;
        self.each(|s| match s {
            Source::Expr(e) => eval_actions(&e),
            Source::File(t) => {
                if t.contains("\"actions\"") {
                    io::read_chain(&t)
                } else {
                    Ok(vec![io::read_action(&t)?])
                }
            }
        })
    }

    pub fn complexes(&self) -> Result<Vec<FiniteComplex>> {
        self.expect_kind(InstanceKind::Complexes)?;
        self.each(|s| match s {
            Source::Expr(e) => Ok(vec![eval_complex(&e)?]),
            Source::File(t) => Ok(vec![io::read_complex(&t)?]),
        })
    }

    pub fn matrices(&self) -> Result<Vec<IntSymMatrix>> {
        self.expect_kind(InstanceKind::Matrices)?;
        self.each(|s| match s {
            Source::Expr(e) => Ok(vec![eval_matrix(&e)?]),
            Source::File(t) => Ok(vec![io::read_matrix(&t)?]),
        })
    }

    fn expect_kind(&self, k: InstanceKind) -> Result<()> {
        if self.kind != k {
            return Err(Error::parse(
                "kind",
                format!("expected {k:?} manifest, found {:?}", self.kind).to_lowercase(),
            ));
        }
        Ok(())
    }
}

enum Source {
    Expr(Expr),
    File(String),
}

fn looks_like_expr(s: &str) -> bool {
    s.trim_end().ends_with(')') && s.contains('(')
}

/// A generator expression: `name(arg, …)` where each argument is a number
/// or another expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(String),
    Call(String, Vec<Expr>),
}

impl Expr {
    pub fn parse(text: &str) -> std::result::Result<Expr, String> {
        let toks: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let e = parse_expr(&toks, &mut pos)?;
        if pos != toks.len() {
            return Err(format!("unexpected trailing input at character {pos}"));
        }
        Ok(e)
    }

    fn name(&self) -> &str {
        match self {
            Expr::Call(n, _) => n,
            Expr::Num(_) => "",
        }
    }
}

fn parse_expr(t: &[char], pos: &mut usize) -> std::result::Result<Expr, String> {
    let start = *pos;
    while *pos < t.len() && (t[*pos].is_alphanumeric() || matches!(t[*pos], '-' | '_' | '.')) {
        *pos += 1;
    }
    let word: String = t[start..*pos].iter().collect();
    if word.is_empty() {
        return Err(format!("expected a name or number at character {start}"));
    }
    if *pos < t.len() && t[*pos] == '(' {
        *pos += 1;
        let mut args = Vec::new();
        if *pos < t.len() && t[*pos] == ')' {
            *pos += 1;
            return Ok(Expr::Call(word, args));
        }
        loop {
            args.push(parse_expr(t, pos)?);
            match t.get(*pos) {
                Some(',') => *pos += 1,
                Some(')') => {
                    *pos += 1;
                    return Ok(Expr::Call(word, args));
                }
                _ => return Err(format!("expected ',' or ')' at character {}", *pos)),
            }
        }
    }
    Ok(Expr::Num(word))
}

/// Random generators and their arity, seed last.
const RANDOM: &[(&str, usize)] = &[
    ("gnp", 3),
    ("random-regular", 3),
    ("random-schreier", 3),
    ("double-cover-chain", 3),
    ("flag", 4),
    ("random-sym", 3),
];

fn check_seeded(e: &Expr) -> std::result::Result<(), String> {
    if let Expr::Call(name, args) = e {
        if let Some(&(_, arity)) = RANDOM.iter().find(|(n, _)| n == name) {
            if args.len() != arity {
                return Err(format!("{name} takes {arity} arguments including an explicit seed"));
            }
        }
        for a in args {
            check_seeded(a)?;
        }
    }
    Ok(())
}

fn num<T: std::str::FromStr>(e: &Expr) -> Result<T> {
    match e {
        Expr::Num(s) => s
            .parse()
            .map_err(|_| Error::input(format!("invalid numeric argument {s:?}"))),
        Expr::Call(n, _) => Err(Error::input(format!("expected a number, found {n}(…)"))),
    }
}

fn args<'a>(e: &'a Expr, n: usize) -> Result<&'a [Expr]> {
    match e {
        Expr::Call(name, a) if a.len() == n => Ok(a),
        Expr::Call(name, a) => Err(Error::input(format!(
            "{name} takes {n} arguments, got {}",
            a.len()
        ))),
        Expr::Num(s) => Err(Error::input(format!("expected a generator, found {s}"))),
    }
}

pub fn eval_graphs(e: &Expr) -> Result<Vec<UnlabeledGraph>> {
    let g = match e.name() {
        "cycle" => generate::cycle(num(&args(e, 1)?[0])?)?,
        "path" => generate::path(num(&args(e, 1)?[0])?)?,
        "complete" => generate::complete(num(&args(e, 1)?[0])?)?,
        "gnp" => {
            let a = args(e, 3)?;
            generate::gnp(num(&a[0])?, num(&a[1])?, num(&a[2])?)?
        }
        "random-regular" => {
            let a = args(e, 3)?;
            generate::random_regular(num(&a[0])?, num(&a[1])?, num(&a[2])?)?
        }
        _ => {
            return eval_actions(e)
                .map(|acts| acts.iter().map(PermutationAction::underlying_graph).collect())
                .map_err(|_| Error::input(format!("unknown graph generator {}", e.name())))
        }
    };
    Ok(vec![g])
}

pub fn eval_actions(e: &Expr) -> Result<Vec<PermutationAction>> {
    let a = match e.name() {
        "random-schreier" => {
            let a = args(e, 3)?;
            generate::random_schreier(num(&a[0])?, num(&a[1])?, num(&a[2])?)?
        }
        "cyclic" => generate::cyclic_action(num(&args(e, 1)?[0])?)?,
        "torus" => generate::torus_action(num(&args(e, 1)?[0])?)?,
        "bouquet" => generate::bouquet(num(&args(e, 1)?[0])?),
        "double-cover-chain" => {
            let a = args(e, 3)?;
            let base = eval_actions(&a[0])?;
            let [base] = base.as_slice() else {
                return Err(Error::input("double-cover-chain needs a single base action"));
            };
            return generate::double_cover_chain(base, num(&a[1])?, num(&a[2])?);
        }
        other => return Err(Error::input(format!("unknown action generator {other}"))),
    };
    Ok(vec![a])
}

pub fn eval_complex(e: &Expr) -> Result<FiniteComplex> {
    match e.name() {
        "rips" => {
            let a = args(e, 3)?;
            let gs = eval_graphs(&a[0])?;
            let [g] = gs.as_slice() else {
                return Err(Error::input("rips needs a single graph"));
            };
            rips_complex(g, num(&a[1])?, num(&a[2])?)
        }
        "flag" => {
            let a = args(e, 4)?;
            generate::random_flag_complex(num(&a[0])?, num(&a[1])?, num(&a[2])?, num(&a[3])?)
        }
        other => Err(Error::input(format!("unknown complex generator {other}"))),
    }
}

pub fn eval_matrix(e: &Expr) -> Result<IntSymMatrix> {
    match e.name() {
        "laplacian" => {
            let gs = eval_graphs(&args(e, 1)?[0])?;
            let [g] = gs.as_slice() else {
                return Err(Error::input("laplacian needs a single graph"));
            };
            Ok(IntSymMatrix::laplacian(g))
        }
        "hodge" => {
            let a = args(e, 2)?;
            crate::homology::hodge_laplacian(&eval_complex(&a[0])?, num(&a[1])?)
        }
        "zeros" => Ok(IntSymMatrix::zeros(num(&args(e, 1)?[0])?)),
        "identity" => Ok(IntSymMatrix::identity(num(&args(e, 1)?[0])?)),
        "random-sym" => {
            let a = args(e, 3)?;
            Ok(generate::random_sym_matrix(num(&a[0])?, num(&a[1])?, num(&a[2])?))
        }
        other => Err(Error::input(format!("unknown matrix generator {other}"))),
    }
}
