//! Finite directed multigraphs and their finite paths.
//!
//! Paths compose as `s(μᵢ) = r(μᵢ₊₁)`, so walking along a path follows arcs
//! `r(e) → s(e)`. The shift map deletes the first edge of an infinite path.
//! Vertex and edge indices are declaration order and never change once a
//! graph is built; every vector and matrix in the crate is indexed by them.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// An edge record: indices of its range and source vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub range: usize,
    pub source: usize,
}

/// A finite path `μ₁…μ_d`. A length-0 path is a vertex, stored with
/// `range == source`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    // field order gives lexicographic order on edges, then vertex for d = 0
    edges: Vec<usize>,
    range: usize,
    source: usize,
}

impl Path {
    pub fn vertex(v: usize) -> Self {
        Path {
            edges: Vec::new(),
            range: v,
            source: v,
        }
    }

    /// Builds a path from edge indices, checking composability.
    pub fn from_edges(g: &Graph, edges: Vec<usize>) -> Result<Self> {
        let Some(&first) = edges.first() else {
            return Err(Error::InvalidPath("empty edge list".into()));
        };
        for &e in &edges {
            if e >= g.edge_count() {
                return Err(Error::InvalidPath(format!("edge index {e} out of range")));
            }
        }
        for w in edges.windows(2) {
            if g.edges[w[0]].source != g.edges[w[1]].range {
                return Err(Error::InvalidPath(format!(
                    "s({}) != r({})",
                    g.edges[w[0]].id, g.edges[w[1]].id
                )));
            }
        }
        let source = g.edges[*edges.last().unwrap()].source;
        Ok(Path {
            range: g.edges[first].range,
            source,
            edges,
        })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn range(&self) -> usize {
        self.range
    }

    pub fn source(&self) -> usize {
        self.source
    }

    /// The last `len` edges; the vertex `s(μ)` when `len == 0`.
    pub fn tail(&self, g: &Graph, len: usize) -> Path {
        assert!(len <= self.len());
        if len == 0 {
            return Path::vertex(self.source);
        }
        let edges = self.edges[self.len() - len..].to_vec();
        Path {
            range: g.edges[edges[0]].range,
            source: self.source,
            edges,
        }
    }

    /// The first `len` edges; the vertex `r(μ)` when `len == 0`.
    pub fn prefix(&self, g: &Graph, len: usize) -> Path {
        assert!(len <= self.len());
        if len == 0 {
            return Path::vertex(self.range);
        }
        let edges = self.edges[..len].to_vec();
        Path {
            range: self.range,
            source: g.edges[edges[len - 1]].source,
            edges,
        }
    }

    /// `μν`, defined when `s(μ) = r(ν)`.
    pub fn concat(&self, other: &Path) -> Option<Path> {
        if self.source != other.range {
            return None;
        }
        if self.is_empty() {
            return Some(other.clone());
        }
        if other.is_empty() {
            return Some(self.clone());
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Some(Path {
            edges,
            range: self.range,
            source: other.source,
        })
    }

    /// Edge identifiers joined by `.`, or the vertex identifier for length 0.
    pub fn label(&self, g: &Graph) -> String {
        if self.is_empty() {
            g.vertices[self.range].clone()
        } else {
            self.edges
                .iter()
                .map(|&e| g.edges[e].id.as_str())
                .collect::<Vec<_>>()
                .join(".")
        }
    }
}

/// All paths of one length, in lexicographic order, with a reverse index.
#[derive(Debug)]
pub struct PathTable {
    paths: Vec<Path>,
    index: HashMap<Path, usize>,
}

impl PathTable {
    fn new(paths: Vec<Path>) -> Self {
        let index = paths
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        PathTable { paths, index }
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn get(&self, i: usize) -> &Path {
        &self.paths[i]
    }

    pub fn index_of(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StructuralFlags {
    pub has_sinks: bool,
    pub has_sources: bool,
    pub row_finite: bool,
}

/// A finite directed multigraph with range and source maps.
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, usize>,
    // edges e with r(e) = v, ascending
    by_range: Vec<Vec<usize>>,
    // edges e with s(e) = w, ascending
    by_source: Vec<Vec<usize>>,
    tables: Mutex<Vec<Arc<PathTable>>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.vertices)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Clone for Graph {
    fn clone(&self) -> Self {
        Graph::from_parts(self.vertices.clone(), self.edges.clone())
            .expect("cloned graph was already valid")
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for Graph {}

fn check_identifier(id: &str, line: usize) -> Result<()> {
    if let Some(c) = id.chars().find(|c| matches!(c, '.' | '=' | ',')) {
        return Err(Error::Malformed {
            line,
            token: id.to_string(),
            reason: format!("identifier may not contain `{c}`"),
        });
    }
    Ok(())
}

impl Graph {
    /// Builds a graph from vertex identifiers and `(id, range, source)` edges
    /// given by vertex identifier.
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S, S)]) -> Result<Self> {
        let vertices: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            check_identifier(v, 0)?;
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateIdentifier {
                    line: 0,
                    id: v.clone(),
                });
            }
        }
        let mut recs = Vec::with_capacity(edges.len());
        for (id, r, s) in edges {
            let lookup = |name: &S| {
                index
                    .get(name.as_ref())
                    .copied()
                    .ok_or_else(|| Error::UnknownVertex {
                        line: 0,
                        id: name.as_ref().to_string(),
                    })
            };
            recs.push(Edge {
                id: id.as_ref().to_string(),
                range: lookup(r)?,
                source: lookup(s)?,
            });
        }
        Graph::from_parts(vertices, recs)
    }

    fn from_parts(vertices: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let mut vertex_index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateIdentifier {
                    line: 0,
                    id: v.clone(),
                });
            }
        }
        let mut seen = HashSet::new();
        let mut by_range = vec![Vec::new(); vertices.len()];
        let mut by_source = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            check_identifier(&e.id, 0)?;
            if !seen.insert(e.id.clone()) {
                return Err(Error::DuplicateIdentifier {
                    line: 0,
                    id: e.id.clone(),
                });
            }
            if e.range >= vertices.len() || e.source >= vertices.len() {
                return Err(Error::UnknownVertex {
                    line: 0,
                    id: format!("#{}", e.range.max(e.source)),
                });
            }
            by_range[e.range].push(i);
            by_source[e.source].push(i);
        }
        Ok(Graph {
            vertices,
            edges,
            vertex_index,
            by_range,
            by_source,
            tables: Mutex::new(Vec::new()),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn vertex_id(&self, name: &str) -> Option<usize> {
        self.vertex_index.get(name).copied()
    }

    pub fn edge_id(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == name)
    }

    /// Edges with `r(e) = v`.
    pub fn edges_with_range(&self, v: usize) -> &[usize] {
        &self.by_range[v]
    }

    /// Edges with `s(e) = w`.
    pub fn edges_with_source(&self, w: usize) -> &[usize] {
        &self.by_source[w]
    }

    pub fn sinks(&self) -> Vec<usize> {
        (0..self.vertex_count())
            .filter(|&w| self.by_source[w].is_empty())
            .collect()
    }

    pub fn sources(&self) -> Vec<usize> {
        (0..self.vertex_count())
            .filter(|&v| self.by_range[v].is_empty())
            .collect()
    }

    pub fn structural_flags(&self) -> StructuralFlags {
        StructuralFlags {
            has_sinks: !self.sinks().is_empty(),
            has_sources: !self.sources().is_empty(),
            row_finite: true,
        }
    }

    /// Fails with the offending vertex names unless the graph has neither
    /// sinks nor sources.
    pub fn require_no_sinks_or_sources(&self) -> Result<()> {
        self.require_no_sinks()?;
        self.require_no_sources()
    }

    pub fn require_no_sinks(&self) -> Result<()> {
        let sinks = self.sinks();
        if sinks.is_empty() {
            Ok(())
        } else {
            Err(Error::Sinks(self.names(&sinks)))
        }
    }

    pub fn require_no_sources(&self) -> Result<()> {
        let sources = self.sources();
        if sources.is_empty() {
            Ok(())
        } else {
            Err(Error::Sources(self.names(&sources)))
        }
    }

    fn names(&self, vs: &[usize]) -> Vec<String> {
        vs.iter().map(|&v| self.vertices[v].clone()).collect()
    }

    /// `E^d` in lexicographic order induced by edge order; cached.
    pub fn path_table(&self, d: usize) -> Arc<PathTable> {
        let mut tables = self.tables.lock().unwrap();
        while tables.len() <= d {
            let next = match tables.len() {
                0 => (0..self.vertex_count()).map(Path::vertex).collect(),
                1 => (0..self.edge_count())
                    .map(|e| Path {
                        edges: vec![e],
                        range: self.edges[e].range,
                        source: self.edges[e].source,
                    })
                    .collect(),
                _ => {
                    let prev = tables.last().unwrap();
                    let mut out = Vec::new();
                    for p in prev.paths() {
                        for &e in &self.by_range[p.source] {
                            let mut edges = p.edges.clone();
                            edges.push(e);
                            out.push(Path {
                                edges,
                                range: p.range,
                                source: self.edges[e].source,
                            });
                        }
                    }
                    out
                }
            };
            tables.push(Arc::new(PathTable::new(next)));
        }
        tables[d].clone()
    }

    pub fn enumerate_paths(&self, d: usize) -> Vec<Path> {
        self.path_table(d).paths().to_vec()
    }

    /// Parses a path label: `.`-joined edge identifiers, or a vertex identifier.
    pub fn parse_path(&self, label: &str) -> Result<Path> {
        // a name that is both a vertex and an edge reads as the edge
        if let Some(v) = self.vertex_id(label) {
            if self.edge_id(label).is_none() {
                return Ok(Path::vertex(v));
            }
        }
        let edges = label
            .split('.')
            .map(|t| {
                self.edge_id(t)
                    .ok_or_else(|| Error::InvalidPath(format!("unknown edge `{t}` in `{label}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Path::from_edges(self, edges)
    }

    /// True iff some vertex on a directed cycle (arcs `r(e) → s(e)`) has at
    /// least two edges with range equal to it.
    pub fn cycle_has_entrance(&self) -> bool {
        let comp = self.strongly_connected_components();
        let mut size = vec![0usize; comp.iter().copied().max().map_or(0, |m| m + 1)];
        for &c in &comp {
            size[c] += 1;
        }
        (0..self.vertex_count()).any(|v| {
            let on_cycle =
                size[comp[v]] > 1 || self.by_range[v].iter().any(|&e| self.edges[e].source == v);
            on_cycle && self.by_range[v].len() >= 2
        })
    }

    /// Component id per vertex for the arc relation `r(e) → s(e)`.
    pub fn strongly_connected_components(&self) -> Vec<usize> {
        const UNSEEN: usize = usize::MAX;
        let n = self.vertex_count();
        let mut index = vec![UNSEEN; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut comp = vec![UNSEEN; n];
        let mut stack = Vec::new();
        let mut next_index = 0;
        let mut next_comp = 0;
        for root in 0..n {
            if index[root] != UNSEEN {
                continue;
            }
            // (vertex, position in its out-edge list)
            let mut call = vec![(root, 0usize)];
            index[root] = next_index;
            low[root] = next_index;
            next_index += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut pos)) = call.last_mut() {
                if let Some(&e) = self.by_range[v].get(*pos) {
                    *pos += 1;
                    let w = self.edges[e].source;
                    if index[w] == UNSEEN {
                        index[w] = next_index;
                        low[w] = next_index;
                        next_index += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        while let Some(w) = stack.pop() {
                            on_stack[w] = false;
                            comp[w] = next_comp;
                            if w == v {
                                break;
                            }
                        }
                        next_comp += 1;
                    }
                }
            }
        }
        comp
    }

    /// Renders the graph in the line-oriented text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            out.push_str(&format!("vertex {v}\n"));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "edge {} {} {}\n",
                e.id, self.vertices[e.range], self.vertices[e.source]
            ));
        }
        out
    }

    /// The same graph without the edge at index `e`.
    pub fn without_edge(&self, e: usize) -> Graph {
        let mut edges = self.edges.clone();
        edges.remove(e);
        Graph::from_parts(self.vertices.clone(), edges).expect("subgraph of a valid graph")
    }
}

/// Parses the line-oriented graph format:
///
/// ```text
/// # comment
/// vertex v
/// edge e v w    # range v, source w
/// ```
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut vertices = Vec::new();
    let mut vertex_index: HashMap<String, usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut edge_ids: HashSet<String> = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some(&keyword) = tokens.first() else {
            continue;
        };
        match keyword {
            "vertex" => {
                if tokens.len() != 2 {
                    return Err(Error::Malformed {
                        line,
                        token: tokens.get(2).unwrap_or(&keyword).to_string(),
                        reason: "expected `vertex <id>`".into(),
                    });
                }
                let id = tokens[1];
                check_identifier(id, line)?;
                if vertex_index.contains_key(id) {
                    return Err(Error::DuplicateIdentifier {
                        line,
                        id: id.to_string(),
                    });
                }
                vertex_index.insert(id.to_string(), vertices.len());
                vertices.push(id.to_string());
            }
            "edge" => {
                if tokens.len() != 4 {
                    return Err(Error::Malformed {
                        line,
                        token: tokens.get(4).unwrap_or(&keyword).to_string(),
                        reason: "expected `edge <id> <range> <source>`".into(),
                    });
                }
                let id = tokens[1];
                check_identifier(id, line)?;
                if !edge_ids.insert(id.to_string()) {
                    return Err(Error::DuplicateIdentifier {
                        line,
                        id: id.to_string(),
                    });
                }
                let lookup = |name: &str| {
                    vertex_index
                        .get(name)
                        .copied()
                        .ok_or_else(|| Error::UnknownVertex {
                            line,
                            id: name.to_string(),
                        })
                };
                edges.push(Edge {
                    id: id.to_string(),
                    range: lookup(tokens[2])?,
                    source: lookup(tokens[3])?,
                });
            }
            other => {
                return Err(Error::Malformed {
                    line,
                    token: other.to_string(),
                    reason: "expected `vertex` or `edge`".into(),
                })
            }
        }
    }
    Graph::from_parts(vertices, edges)
}

fn loop_name(i: usize, n: usize) -> String {
    if n <= 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("e{i}")
    }
}

/// `k` vertices joined in a single directed cycle.
pub fn cycle_graph(k: usize) -> Result<Graph> {
    if k == 0 {
        return Err(Error::InvalidArgument("cycle_graph needs k >= 1".into()));
    }
    let vertices: Vec<String> = (0..k).map(|i| format!("v{i}")).collect();
    let edges: Vec<(String, String, String)> = (0..k)
        .map(|i| {
            (
                format!("e{i}"),
                format!("v{i}"),
                format!("v{}", (i + 1) % k),
            )
        })
        .collect();
    Graph::new(&vertices, &edges)
}

/// One vertex `v` with `n` loops named `a`, `b`, ….
pub fn bouquet(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidArgument("bouquet needs n >= 1".into()));
    }
    let edges: Vec<(String, String, String)> = (0..n)
        .map(|i| (loop_name(i, n), "v".to_string(), "v".to_string()))
        .collect();
    Graph::new(&["v".to_string()], &edges)
}

const RANDOM_ATTEMPTS: usize = 10_000;

/// Deterministic random multigraph. With `forbid_sinks_sources`, redraws
/// until the graph has neither.
pub fn random_graph(
    seed: u64,
    vertex_count: usize,
    edge_count: usize,
    forbid_sinks_sources: bool,
) -> Result<Graph> {
    if vertex_count == 0 {
        return Err(Error::InvalidArgument("need at least one vertex".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vertices: Vec<String> = (0..vertex_count).map(|i| format!("v{i}")).collect();
    for _ in 0..RANDOM_ATTEMPTS {
        let edges: Vec<Edge> = (0..edge_count)
            .map(|i| Edge {
                id: format!("e{i}"),
                range: rng.gen_range(0..vertex_count),
                source: rng.gen_range(0..vertex_count),
            })
            .collect();
        let g = Graph::from_parts(vertices.clone(), edges)?;
        let flags = g.structural_flags();
        if !forbid_sinks_sources || (!flags.has_sinks && !flags.has_sources) {
            return Ok(g);
        }
    }
    Err(Error::AttemptsExhausted(RANDOM_ATTEMPTS))
}

/// Every labeled graph with `1..=max_vertices` vertices and `1..=max_edges`
/// edges that has neither sinks nor sources. Edges are drawn as multisets of
/// `(range, source)` pairs, so parallel-edge relabelings are not repeated.
pub fn small_graphs(max_vertices: usize, max_edges: usize) -> Vec<Graph> {
    fn extend(
        pairs: &[(usize, usize)],
        start: usize,
        remaining: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if !current.is_empty() {
            out.push(current.clone());
        }
        if remaining == 0 {
            return;
        }
        for i in start..pairs.len() {
            current.push(i);
            extend(pairs, i, remaining - 1, current, out);
            current.pop();
        }
    }

    let mut graphs = Vec::new();
    for n in 1..=max_vertices {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|r| (0..n).map(move |s| (r, s))).collect();
        let mut multisets = Vec::new();
        extend(&pairs, 0, max_edges, &mut Vec::new(), &mut multisets);
        let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        for ms in multisets {
            let edges = ms
                .iter()
                .enumerate()
                .map(|(i, &p)| Edge {
                    id: format!("e{i}"),
                    range: pairs[p].0,
                    source: pairs[p].1,
                })
                .collect();
            let g = Graph::from_parts(vertices.clone(), edges).expect("generated graph is valid");
            if g.sinks().is_empty() && g.sources().is_empty() {
                graphs.push(g);
            }
        }
    }
    graphs
}
