//! Readers and writers for the on-disk formats: labeled graphings (JSON),
//! edge lists (text), action and chain manifests (JSON), complexes (JSON)
//! and integer matrices (text).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::UnlabeledGraph;
use crate::group::{ActionDoc, PermutationAction};
use crate::groupoid::{BaseSpace, Graphing, PartialBijection};
use crate::homology::{FiberedComplex, FiniteComplex};
use crate::spectral::IntSymMatrix;

fn json_error(what: &str, e: serde_json::Error) -> Error {
    Error::parse(
        format!("{what} line {} column {}", e.line(), e.column()),
        e.to_string(),
    )
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[derive(Serialize, Deserialize)]
struct BisectionDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    pairs: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct GraphingDoc {
    n: usize,
    bisections: Vec<BisectionDoc>,
}

/// `{"n": N, "bisections": [{"label": "a", "pairs": [[x, y], …]}, …]}`.
/// Bisections keep their order; pairs are sorted by source.
pub fn write_graphing(g: &Graphing) -> String {
    to_json(&GraphingDoc {
        n: g.base().size(),
        bisections: g
            .bisections()
            .iter()
            .map(|b| BisectionDoc {
                label: b.label().map(str::to_string),
                pairs: b.pairs().collect(),
            })
            .collect(),
    })
}

pub fn read_graphing(text: &str) -> Result<Graphing> {
    let doc: GraphingDoc = serde_json::from_str(text).map_err(|e| json_error("graphing", e))?;
    let base = BaseSpace::new(doc.n)?;
    let mut bisections = Vec::with_capacity(doc.bisections.len());
    for (i, b) in doc.bisections.into_iter().enumerate() {
        let mut phi = PartialBijection::new(base, b.pairs)
            .map_err(|e| Error::parse(format!("bisections[{i}]"), e.to_string()))?;
        if let Some(l) = b.label {
            phi = phi.with_label(l);
        }
        bisections.push(phi);
    }
    Graphing::new(base, bisections)
}

/// Edge list: a header line `n m`, then `m` lines `u v`. Blank lines and
/// `#` comments are ignored.
pub fn write_graph(g: &UnlabeledGraph) -> String {
    let mut s = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for &(u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then(|| (i + 1, l.split_whitespace().collect()))
    })
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::parse(format!("line {line}"), format!("expected an integer, found {tok:?}")))
}

pub fn read_graph(text: &str) -> Result<UnlabeledGraph> {
    let mut lines = content_lines(text);
    let (hl, header) = lines
        .next()
        .ok_or_else(|| Error::parse("line 1", "missing header `n m`"))?;
    if header.len() != 2 {
        return Err(Error::parse(format!("line {hl}"), "header must be `n m`"));
    }
    let n: usize = parse_num(header[0], hl)?;
    let m: usize = parse_num(header[1], hl)?;
    let mut edges = Vec::with_capacity(m);
    for (ln, toks) in lines {
        if toks.len() != 2 {
            return Err(Error::parse(format!("line {ln}"), "edge line must be `u v`"));
        }
        let u: usize = parse_num(toks[0], ln)?;
        let v: usize = parse_num(toks[1], ln)?;
        if u >= n || v >= n {
            return Err(Error::parse(format!("line {ln}"), format!("vertex out of range 0..{n}")));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::parse(
            "header",
            format!("declared {m} edges, found {}", edges.len()),
        ));
    }
    UnlabeledGraph::new(n, edges).map_err(|e| Error::parse("edges", e.to_string()))
}

pub fn write_action(a: &PermutationAction) -> String {
    to_json(&a.to_doc())
}

/// Reads an action manifest, rejecting actions that violate a relator.
pub fn read_action(text: &str) -> Result<PermutationAction> {
    let doc: ActionDoc = serde_json::from_str(text).map_err(|e| json_error("action", e))?;
    PermutationAction::from_doc(&doc, true)
}

/// Reads one permutation per generator without enforcing relators.
pub fn read_labeled_graph(text: &str) -> Result<PermutationAction> {
    let doc: ActionDoc = serde_json::from_str(text).map_err(|e| json_error("action", e))?;
    PermutationAction::from_doc(&doc, false)
}

#[derive(Serialize, Deserialize)]
struct ChainDoc {
    actions: Vec<ActionDoc>,
}

pub fn write_chain(chain: &[PermutationAction]) -> String {
    to_json(&ChainDoc {
        actions: chain.iter().map(PermutationAction::to_doc).collect(),
    })
}

pub fn read_chain(text: &str) -> Result<Vec<PermutationAction>> {
    let doc: ChainDoc = serde_json::from_str(text).map_err(|e| json_error("chain", e))?;
    doc.actions
        .iter()
        .enumerate()
        .map(|(i, a)| {
            PermutationAction::from_doc(a, true).map_err(|e| match e {
                Error::Parse { location, message } => {
                    Error::parse(format!("actions[{i}].{location}"), message)
                }
                other => Error::parse(format!("actions[{i}]"), other.to_string()),
            })
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
struct ComplexDoc {
    cells: Vec<Vec<Vec<u32>>>,
}

#[derive(Serialize, Deserialize)]
struct FiberedDoc {
    fibers: Vec<ComplexDoc>,
}

/// `{"cells": [[[v], …], [[u, v], …], …]}`, one list per dimension.
pub fn write_complex(k: &FiniteComplex) -> String {
    to_json(&ComplexDoc { cells: k.to_nested() })
}

pub fn read_complex(text: &str) -> Result<FiniteComplex> {
    let doc: ComplexDoc = serde_json::from_str(text).map_err(|e| json_error("complex", e))?;
    FiniteComplex::new(doc.cells).map_err(|e| Error::parse("cells", e.to_string()))
}

/// `{"fibers": [{"cells": …}, …]}`.
pub fn write_fibered(f: &FiberedComplex) -> String {
    to_json(&FiberedDoc {
        fibers: f
            .fibers()
            .iter()
            .map(|k| ComplexDoc { cells: k.to_nested() })
            .collect(),
    })
}

/// Accepts either a fibered document or a single complex (one fiber).
pub fn read_fibered(text: &str) -> Result<FiberedComplex> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| json_error("complex", e))?;
    if value.get("fibers").is_none() {
        return FiberedComplex::new(vec![read_complex(text)?]);
    }
    let doc: FiberedDoc = serde_json::from_value(value)
        .map_err(|e| Error::parse("fibers", e.to_string()))?;
    let fibers = doc
        .fibers
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            FiniteComplex::new(c.cells).map_err(|e| Error::parse(format!("fibers[{i}]"), e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    FiberedComplex::new(fibers)
}

/// First line `k`, then `k` lines of `k` integers.
pub fn write_matrix(x: &IntSymMatrix) -> String {
    let mut s = format!("{}\n", x.size());
    for row in x.rows() {
        let strs: Vec<String> = row.iter().map(i64::to_string).collect();
        s.push_str(&strs.join(" "));
        s.push('\n');
    }
    s
}

pub fn read_matrix(text: &str) -> Result<IntSymMatrix> {
    let mut lines = content_lines(text);
    let (hl, header) = lines
        .next()
        .ok_or_else(|| Error::parse("line 1", "missing size line"))?;
    if header.len() != 1 {
        return Err(Error::parse(format!("line {hl}"), "first line must be the size k"));
    }
    let k: usize = parse_num(header[0], hl)?;
    let mut rows = Vec::with_capacity(k);
    for (ln, toks) in lines {
        if toks.len() != k {
            return Err(Error::parse(
                format!("line {ln}"),
                format!("expected {k} entries, found {}", toks.len()),
            ));
        }
        rows.push(toks.iter().map(|t| parse_num(t, ln)).collect::<Result<Vec<i64>>>()?);
    }
    if rows.len() != k {
        return Err(Error::parse("rows", format!("expected {k} rows, found {}", rows.len())));
    }
    IntSymMatrix::new(rows).map_err(|e| Error::parse("matrix", e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    #[test]
    fn graph_round_trip() {
        let g = generate::random_regular(3, 12, 2).unwrap();
        let text = write_graph(&g);
        assert_eq!(read_graph(&text).unwrap(), g);
        assert_eq!(write_graph(&read_graph(&text).unwrap()), text);
        assert!(read_graph("3 1\n0 5\n").is_err());
        assert!(read_graph("3 2\n0 1\n").is_err());
        assert!(matches!(read_graph("3 1\n0 x\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn graphing_round_trip() {
        let base = BaseSpace::new(4).unwrap();
        let g = Graphing::new(
            base,
            vec![
                PartialBijection::new(base, [(2, 3), (0, 1)]).unwrap().with_label("b"),
                PartialBijection::new(base, [(1, 1)]).unwrap().with_label("a"),
            ],
        )
        .unwrap();
        let text = write_graphing(&g);
        let back = read_graphing(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(write_graphing(&back), text);
        assert!(read_graphing(r#"{"n": 2, "bisections": [{"pairs": [[0, 1], [1, 1]]}]}"#).is_err());
    }

    #[test]
    fn action_round_trip() {
        let a = generate::torus_action(3).unwrap();
        let text = write_action(&a);
        assert_eq!(read_action(&text).unwrap(), a);
        let chain = generate::double_cover_chain(&generate::bouquet(2), 3, 1).unwrap();
        let text = write_chain(&chain);
        assert_eq!(read_chain(&text).unwrap(), chain);
        assert_eq!(write_chain(&read_chain(&text).unwrap()), text);
        let bad = r#"{"generators": ["a"], "relators": ["a^2"], "degree": 3, "perms": {"a": [1, 2, 0]}}"#;
        assert!(matches!(read_action(bad), Err(Error::RelatorViolation { .. })));
        assert!(read_labeled_graph(bad).is_ok());
    }

    #[test]
    fn complex_and_matrix_round_trip() {
        let k = generate::random_flag_complex(7, 0.5, 3, 5).unwrap();
        let text = write_complex(&k);
        assert_eq!(read_complex(&text).unwrap(), k);
        let f = read_fibered(&text).unwrap();
        assert_eq!(f.base_size(), 1);
        let ft = write_fibered(&f);
        assert_eq!(write_fibered(&read_fibered(&ft).unwrap()), ft);
        let x = generate::random_sym_matrix(5, 3, 9);
        let mt = write_matrix(&x);
        assert_eq!(read_matrix(&mt).unwrap(), x);
        assert!(read_matrix("2\n0 1\n2 0\n").is_err());
    }
}
