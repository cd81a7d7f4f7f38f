use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::presentation::GroupPresentation;
use crate::error::{Error, Result};
use crate::graph::UnlabeledGraph;
use crate::groupoid::{Letter, UnionFind};

/// Generators of a presented group realized as permutations of `0..degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationAction {
    presentation: GroupPresentation,
    images: Vec<Vec<usize>>,
    inverses: Vec<Vec<usize>>,
}

impl PermutationAction {
    /// Validates bijectivity and that every relator acts trivially.
    pub fn new(presentation: GroupPresentation, images: Vec<Vec<usize>>) -> Result<Self> {
        let a = Self::without_relator_check(presentation, images)?;
        if let Some((r, v)) = a.first_relator_violation() {
            return Err(Error::RelatorViolation {
                relator: a.presentation.format_word(&a.presentation.relators()[r]),
                vertex: v,
            });
        }
        Ok(a)
    }

    /// Validates bijectivity only; used for labeled graphs that are
    /// candidate sofic approximants.
    pub fn without_relator_check(
        presentation: GroupPresentation,
        images: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if images.len() != presentation.rank() {
            return Err(Error::input(format!(
                "{} permutations for {} generators",
                images.len(),
                presentation.rank()
            )));
        }
        let degree = images.first().map_or(1, Vec::len);
        if degree == 0 {
            return Err(Error::input("degree must be at least 1"));
        }
        let mut inverses = Vec::with_capacity(images.len());
        for (g, p) in images.iter().enumerate() {
            if p.len() != degree {
                return Err(Error::input(format!(
                    "permutation for {} has length {} (expected {degree})",
                    presentation.generators()[g],
                    p.len()
                )));
            }
            let mut inv = vec![usize::MAX; degree];
            for (x, &y) in p.iter().enumerate() {
                if y >= degree || inv[y] != usize::MAX {
                    return Err(Error::input(format!(
                        "image of {} is not a permutation",
                        presentation.generators()[g]
                    )));
                }
                inv[y] = x;
            }
            inverses.push(inv);
        }
        Ok(PermutationAction {
            presentation,
            images,
            inverses,
        })
    }

    pub fn presentation(&self) -> &GroupPresentation {
        &self.presentation
    }

    pub fn degree(&self) -> usize {
        self.images.first().map_or(1, Vec::len)
    }

    pub fn images(&self) -> &[Vec<usize>] {
        &self.images
    }

    pub fn apply_letter(&self, l: Letter, x: usize) -> usize {
        if l.inverse {
            self.inverses[l.generator][x]
        } else {
            self.images[l.generator][x]
        }
    }

    /// Left action: the rightmost letter acts first.
    pub fn apply_word(&self, w: &[Letter], x: usize) -> usize {
        w.iter().rev().fold(x, |p, &l| self.apply_letter(l, p))
    }

    /// Relator index and vertex of the first relator that moves a point.
    pub fn first_relator_violation(&self) -> Option<(usize, usize)> {
        for (ri, r) in self.presentation.relators().iter().enumerate() {
            for v in 0..self.degree() {
                if self.apply_word(r, v) != v {
                    return Some((ri, v));
                }
            }
        }
        None
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.degree());
        for p in &self.images {
            for (x, &y) in p.iter().enumerate() {
                uf.union(x, y);
            }
        }
        uf.classes()
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits().len() == 1
    }

    /// Breadth-first spanning tree of the Schreier graph from vertex 0:
    /// generators in order, forward moves before inverse moves. Returns for
    /// each tree edge its `(vertex, generator)` key.
    pub(crate) fn spanning_tree_edges(&self) -> Vec<(usize, usize)> {
        let n = self.degree();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let mut tree = Vec::new();
        while let Some(u) = queue.pop_front() {
            for inverse in [false, true] {
                for g in 0..self.presentation.rank() {
                    let l = Letter {
                        generator: g,
                        inverse,
                    };
                    let w = self.apply_letter(l, u);
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                        // The edge (v, s, s·v) joining u and w.
                        tree.push(if inverse { (w, g) } else { (u, g) });
                    }
                }
            }
        }
        tree
    }

    pub fn to_doc(&self) -> ActionDoc {
        let p = &self.presentation;
        ActionDoc {
            generators: p.generators().to_vec(),
            relators: p.relators().iter().map(|r| p.format_word(r)).collect(),
            degree: self.degree(),
            perms: p
                .generators()
                .iter()
                .cloned()
                .zip(self.images.iter().cloned())
                .collect(),
        }
    }

    pub fn from_doc(doc: &ActionDoc, check_relators: bool) -> Result<Self> {
        let pres = GroupPresentation::parse(doc.generators.clone(), &doc.relators)?;
        let mut images = Vec::new();
        for g in &doc.generators {
            let p = doc
                .perms
                .get(g)
                .ok_or_else(|| Error::parse(format!("perms.{g}"), "missing permutation"))?;
            if p.len() != doc.degree {
                return Err(Error::parse(
                    format!("perms.{g}"),
                    format!("length {} differs from degree {}", p.len(), doc.degree),
                ));
            }
            images.push(p.clone());
        }
        if let Some(extra) = doc.perms.keys().find(|k| !doc.generators.contains(k)) {
            return Err(Error::parse(format!("perms.{extra}"), "not a generator"));
        }
        if check_relators {
            Self::new(pres, images)
        } else {
            Self::without_relator_check(pres, images)
        }
    }

    /// Underlying simple graph of the Schreier graph (loops dropped,
    /// parallel edges merged).
    pub fn underlying_graph(&self) -> UnlabeledGraph {
        let edges = self
            .images
            .iter()
            .flat_map(|p| p.iter().copied().enumerate())
            .filter(|(x, y)| x != y);
        UnlabeledGraph::simplify(self.degree(), edges).expect("valid vertices")
    }
}

/// Structured-text form of an action manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionDoc {
    pub generators: Vec<String>,
    #[serde(default)]
    pub relators: Vec<String>,
    pub degree: usize,
    pub perms: BTreeMap<String, Vec<usize>>,
}

/// Directed labeled edges `(v, s, s·v)`, one per vertex and generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchreierGraph {
    pub vertices: usize,
    pub generators: Vec<String>,
    pub edges: Vec<(usize, usize, usize)>,
    pub transitive: bool,
    pub free: bool,
}

impl SchreierGraph {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|e| e.0 == e.2).count()
    }
}

pub fn schreier_graph(a: &PermutationAction) -> SchreierGraph {
    let edges = (0..a.degree())
        .flat_map(|v| {
            a.images
                .iter()
                .enumerate()
                .map(move |(s, p)| (v, s, p[v]))
        })
        .collect();
    SchreierGraph {
        vertices: a.degree(),
        generators: a.presentation.generators().to_vec(),
        edges,
        transitive: a.is_transitive(),
        free: a.presentation.is_free(),
    }
}
