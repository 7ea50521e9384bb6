//! Finite simplicial graphs with reduced `S`-labellings.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, Letter, Word};
use crate::error::{GscError, Result};

/// A length that may be infinite (girth of a forest, distance between
/// components).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extent {
    Finite(usize),
    Infinite,
}

impl Extent {
    pub fn finite(self) -> Option<usize> {
        match self {
            Extent::Finite(n) => Some(n),
            Extent::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Extent::Finite(_))
    }
}

impl From<Option<usize>> for Extent {
    fn from(value: Option<usize>) -> Self {
        value.map_or(Extent::Infinite, Extent::Finite)
    }
}

impl fmt::Display for Extent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extent::Finite(n) => write!(f, "{n}"),
            Extent::Infinite => write!(f, "inf"),
        }
    }
}

/// An undirected edge. The label is stored on the orientation `tail -> head`
/// and is always a generator, never a formal inverse; the opposite
/// orientation reads its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub label: Letter,
}

impl Edge {
    /// Label read when traversing from `from`.
    pub fn label_from(&self, from: usize) -> Letter {
        if from == self.tail {
            self.label
        } else {
            self.label.inverse()
        }
    }

    pub fn other(&self, v: usize) -> usize {
        if v == self.tail {
            self.head
        } else {
            self.tail
        }
    }
}

/// A directed edge as seen from its source vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dart {
    pub to: usize,
    pub label: Letter,
    pub edge: usize,
}

/// Edge description by vertex names, as it appears in files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSpec {
    pub from: String,
    pub to: String,
    pub label: Letter,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Loop {
        vertex: String,
    },
    MultiEdge {
        u: String,
        v: String,
    },
    Involution {
        from: String,
        to: String,
        label: String,
        reverse_label: String,
    },
    NotReduced {
        vertex: String,
        label: String,
        targets: Vec<String>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| match v {
                Violation::Loop { vertex } => format!("loop at {vertex}"),
                Violation::MultiEdge { u, v } => format!("multiple edges {u} -- {v}"),
                Violation::Involution {
                    from,
                    to,
                    label,
                    reverse_label,
                } => format!("({from},{to}) labelled {label} but reverse labelled {reverse_label}"),
                Violation::NotReduced {
                    vertex,
                    label,
                    targets,
                } => format!("{vertex} has {label}-edges to {}", targets.join(", ")),
            })
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// A path given by its vertex sequence; the edges and label word are read
/// off the graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GraphPath {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub word: Word,
}

impl GraphPath {
    pub fn trivial(v: usize) -> Self {
        GraphPath {
            vertices: vec![v],
            edges: Vec::new(),
            word: Word::empty(),
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        *self.vertices.last().expect("paths have a start vertex")
    }

    pub fn is_closed(&self) -> bool {
        self.start() == self.end()
    }

    /// No vertex repeats, except that a closed path may return to its start.
    pub fn is_simple(&self) -> bool {
        let body = if self.is_closed() && self.len() > 0 {
            &self.vertices[..self.vertices.len() - 1]
        } else {
            &self.vertices[..]
        };
        let set: BTreeSet<_> = body.iter().collect();
        set.len() == body.len()
    }

    pub fn is_cycle(&self) -> bool {
        self.is_closed() && self.len() >= 3 && self.is_simple()
    }

    pub fn is_non_backtracking(&self) -> bool {
        self.edges.windows(2).all(|e| e[0] != e[1])
    }

    pub fn reversed(&self) -> GraphPath {
        GraphPath {
            vertices: self.vertices.iter().rev().copied().collect(),
            edges: self.edges.iter().rev().copied().collect(),
            word: self.word.inverse(),
        }
    }
}

/// Canonical BFS spanning forest: roots are the least unvisited vertices and
/// neighbours are visited in vertex order.
#[derive(Clone, Debug)]
pub struct SpanningForest {
    /// `(parent, edge)` for every non-root vertex.
    pub parent: Vec<Option<(usize, usize)>>,
    pub depth: Vec<usize>,
    pub root: Vec<usize>,
    pub is_tree_edge: Vec<bool>,
    /// Non-tree edges ordered by `(min endpoint, max endpoint)`.
    pub non_tree: Vec<usize>,
}

impl SpanningForest {
    /// Word read along the tree path from the root of `v`'s tree to `v`.
    pub fn root_word(&self, graph: &LabelledGraph, v: usize) -> Word {
        let mut letters = Vec::new();
        let mut cur = v;
        while let Some((p, e)) = self.parent[cur] {
            letters.push(graph.edges[e].label_from(p));
            cur = p;
        }
        letters.reverse();
        Word::from(letters)
    }
}

#[derive(Clone, Debug)]
pub struct LabelledGraph {
    name: String,
    alphabet: Alphabet,
    vertices: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    darts: Vec<Vec<Dart>>,
    defects: Vec<Violation>,
}

impl PartialEq for LabelledGraph {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.alphabet == other.alphabet
            && self.vertices == other.vertices
            && self.edges == other.edges
            && self.defects == other.defects
    }
}

impl Eq for LabelledGraph {}

impl LabelledGraph {
    /// Builds a graph from named vertices and edges. Only references to
    /// unknown vertices or letters are errors; simpliciality, involution and
    /// reducedness problems are kept and reported by [`validate`].
    ///
    /// [`validate`]: LabelledGraph::validate
    pub fn new(
        name: impl Into<String>,
        alphabet: Alphabet,
        vertices: Vec<String>,
        edges: Vec<EdgeSpec>,
    ) -> Result<Self> {
        let position: HashMap<&str, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let mut indexed = Vec::with_capacity(edges.len());
        for e in &edges {
            let f = *position
                .get(e.from.as_str())
                .ok_or_else(|| GscError::UnknownVertex(e.from.clone()))?;
            let t = *position
                .get(e.to.as_str())
                .ok_or_else(|| GscError::UnknownVertex(e.to.clone()))?;
            if !alphabet.contains(e.label) {
                return Err(GscError::BadLetter(format!("{:?}", e.label)));
            }
            indexed.push((f, t, e.label));
        }
        Ok(Self::from_parts(name, alphabet, vertices, indexed))
    }

    /// Builds a graph from vertex names and edges given as index triples into
    /// `vertices`. Vertex names are deduplicated and sorted; edges are
    /// re-indexed accordingly.
    pub fn from_parts(
        name: impl Into<String>,
        alphabet: Alphabet,
        vertices: Vec<String>,
        edges: Vec<(usize, usize, Letter)>,
    ) -> Self {
        let mut sorted: Vec<String> = vertices.clone();
        sorted.sort();
        sorted.dedup();
        let index: HashMap<String, usize> = sorted
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let remap: Vec<usize> = vertices.iter().map(|v| index[v]).collect();

        let mut defects = Vec::new();
        // unordered pair -> edges already accepted, as (from, label) in the given orientation
        let mut seen: HashMap<(usize, usize), Vec<(usize, Letter)>> = HashMap::new();
        let mut stored: Vec<Edge> = Vec::with_capacity(edges.len());
        for (f, t, label) in edges {
            let (f, t) = (remap[f], remap[t]);
            let key = (f.min(t), f.max(t));
            let entry = seen.entry(key).or_default();
            let same = entry
                .iter()
                .any(|&(f0, l0)| (f0 == f && l0 == label) || (f0 == t && l0 == label.inverse()));
            if same {
                continue;
            }
            if f != t {
                if let Some(&(_, l0)) = entry.iter().find(|&&(f0, _)| f0 == t) {
                    defects.push(Violation::Involution {
                        from: sorted[t].clone(),
                        to: sorted[f].clone(),
                        label: alphabet.letter_name(l0),
                        reverse_label: alphabet.letter_name(label),
                    });
                    continue;
                }
            }
            entry.push((f, label));
            let edge = if label.is_inverse() {
                Edge {
                    tail: t,
                    head: f,
                    label: label.inverse(),
                }
            } else {
                Edge {
                    tail: f,
                    head: t,
                    label,
                }
            };
            stored.push(edge);
        }
        stored.sort();

        let mut darts: Vec<Vec<Dart>> = vec![Vec::new(); sorted.len()];
        for (i, e) in stored.iter().enumerate() {
            darts[e.tail].push(Dart {
                to: e.head,
                label: e.label,
                edge: i,
            });
            if e.head != e.tail {
                darts[e.head].push(Dart {
                    to: e.tail,
                    label: e.label.inverse(),
                    edge: i,
                });
            }
        }
        for ds in &mut darts {
            ds.sort_by_key(|d| (d.label, d.to));
        }

        LabelledGraph {
            name: name.into(),
            alphabet,
            vertices: sorted,
            index,
            edges: stored,
            darts,
            defects,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Same graph over a larger alphabet whose first letters agree with ours.
    pub fn with_alphabet(mut self, alphabet: Alphabet) -> Result<Self> {
        if alphabet.names().len() < self.alphabet.len()
            || alphabet.names()[..self.alphabet.len()] != *self.alphabet.names()
        {
            return Err(GscError::Precondition(format!(
                "alphabet of {:?} is not a prefix of the target alphabet",
                self.name
            )));
        }
        self.alphabet = alphabet;
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| GscError::UnknownVertex(name.to_string()))
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn darts(&self, v: usize) -> &[Dart] {
        &self.darts[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.darts[v].len()
    }

    /// Sorted multiset of vertex degrees.
    pub fn degree_profile(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.vertex_count()).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }

    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degree_profile();
        match (d.first(), d.last()) {
            (Some(a), Some(b)) if a == b => Some(*a),
            _ => None,
        }
    }

    /// The unique dart out of `v` with label `label`, if any (first one for
    /// non-reduced graphs).
    pub fn out_dart(&self, v: usize, label: Letter) -> Option<Dart> {
        let ds = &self.darts[v];
        match ds.binary_search_by_key(&label, |d| d.label) {
            Ok(mut i) => {
                while i > 0 && ds[i - 1].label == label {
                    i -= 1;
                }
                Some(ds[i])
            }
            Err(_) => None,
        }
    }

    pub fn find_edge(&self, u: usize, v: usize) -> Option<usize> {
        self.darts[u].iter().find(|d| d.to == v).map(|d| d.edge)
    }

    pub fn edge_by_names(&self, u: &str, v: &str) -> Result<usize> {
        let (ui, vi) = (self.vertex_index(u)?, self.vertex_index(v)?);
        self.find_edge(ui, vi)
            .ok_or_else(|| GscError::UnknownEdge(u.to_string(), v.to_string()))
    }

    /// Checks simpliciality, the involution rule and reducedness.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = self.defects.clone();
        let mut pairs: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for e in &self.edges {
            if e.tail == e.head {
                violations.push(Violation::Loop {
                    vertex: self.vertices[e.tail].clone(),
                });
            } else {
                *pairs.entry((e.tail.min(e.head), e.tail.max(e.head))).or_default() += 1;
            }
        }
        for (&(u, v), &count) in &pairs {
            if count > 1 {
                violations.push(Violation::MultiEdge {
                    u: self.vertices[u].clone(),
                    v: self.vertices[v].clone(),
                });
            }
        }
        for (v, ds) in self.darts.iter().enumerate() {
            let mut i = 0;
            while i < ds.len() {
                let mut j = i + 1;
                while j < ds.len() && ds[j].label == ds[i].label {
                    j += 1;
                }
                let targets: BTreeSet<usize> = ds[i..j].iter().map(|d| d.to).collect();
                if targets.len() > 1 {
                    violations.push(Violation::NotReduced {
                        vertex: self.vertices[v].clone(),
                        label: self.alphabet.letter_name(ds[i].label),
                        targets: targets.iter().map(|&t| self.vertices[t].clone()).collect(),
                    });
                }
                i = j;
            }
        }
        ValidationReport { violations }
    }

    /// `self` if valid, otherwise an error carrying the report.
    pub fn validated(self) -> Result<Self> {
        let report = self.validate();
        if report.is_ok() {
            Ok(self)
        } else {
            Err(GscError::Invalid {
                name: self.name.clone(),
                violations: report.to_string(),
            })
        }
    }

    /// BFS distances from `from`; `None` for unreachable vertices.
    pub fn bfs(&self, from: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[from] = Some(0);
        queue.push_back(from);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].expect("queued vertices have distances");
            for d in &self.darts[u] {
                if dist[d.to].is_none() {
                    dist[d.to] = Some(du + 1);
                    queue.push_back(d.to);
                }
            }
        }
        dist
    }

    pub fn distances(&self, from: &str) -> Result<BTreeMap<String, Extent>> {
        let src = self.vertex_index(from)?;
        Ok(self
            .bfs(src)
            .into_iter()
            .enumerate()
            .map(|(v, d)| (self.vertices[v].clone(), Extent::from(d)))
            .collect())
    }

    pub fn distance(&self, u: usize, v: usize) -> Extent {
        Extent::from(self.bfs(u)[v])
    }

    /// `{w : d(w, center) <= radius}`.
    pub fn ball(&self, center: &str, radius: usize) -> Result<BTreeSet<String>> {
        let src = self.vertex_index(center)?;
        Ok(self
            .bfs(src)
            .into_iter()
            .enumerate()
            .filter(|(_, d)| matches!(d, Some(d) if *d <= radius))
            .map(|(v, _)| self.vertices[v].clone())
            .collect())
    }

    pub fn eccentricity(&self, v: usize) -> Extent {
        let mut max = 0;
        for d in self.bfs(v) {
            match d {
                Some(d) => max = max.max(d),
                None => return Extent::Infinite,
            }
        }
        Extent::Finite(max)
    }

    pub fn diameter(&self) -> Extent {
        (0..self.vertex_count())
            .map(|v| self.eccentricity(v))
            .max()
            .unwrap_or(Extent::Finite(0))
    }

    /// Length of a shortest simple cycle.
    pub fn girth(&self) -> Extent {
        let n = self.vertex_count();
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; n];
        let mut parent_edge = vec![usize::MAX; n];
        let mut touched = Vec::new();
        let mut queue = VecDeque::new();
        for root in 0..n {
            for &t in &touched {
                dist[t] = usize::MAX;
                parent_edge[t] = usize::MAX;
            }
            touched.clear();
            queue.clear();
            dist[root] = 0;
            touched.push(root);
            queue.push_back(root);
            'bfs: while let Some(u) = queue.pop_front() {
                if let Some(b) = best {
                    if 2 * dist[u] + 1 >= b {
                        break 'bfs;
                    }
                }
                for d in &self.darts[u] {
                    if d.to == u || d.edge == parent_edge[u] {
                        continue;
                    }
                    if dist[d.to] == usize::MAX {
                        dist[d.to] = dist[u] + 1;
                        parent_edge[d.to] = d.edge;
                        touched.push(d.to);
                        queue.push_back(d.to);
                    } else {
                        let len = dist[u] + dist[d.to] + 1;
                        if best.map_or(true, |b| len < b) {
                            best = Some(len);
                        }
                    }
                }
            }
        }
        Extent::from(best)
    }

    /// Reads `word` from `start`. Returns the path, or the position of the
    /// first letter with no matching outgoing edge.
    pub fn lift(&self, start: usize, word: &[Letter]) -> std::result::Result<GraphPath, usize> {
        let mut vertices = Vec::with_capacity(word.len() + 1);
        let mut edges = Vec::with_capacity(word.len());
        vertices.push(start);
        let mut cur = start;
        for (i, &l) in word.iter().enumerate() {
            match self.out_dart(cur, l) {
                Some(d) => {
                    edges.push(d.edge);
                    vertices.push(d.to);
                    cur = d.to;
                }
                None => return Err(i),
            }
        }
        Ok(GraphPath {
            vertices,
            edges,
            word: Word::from(word.to_vec()),
        })
    }

    /// Endpoint of reading `word` from `start`, without materializing the path.
    pub fn lift_end(&self, start: usize, word: &[Letter]) -> Option<usize> {
        let mut cur = start;
        for &l in word {
            cur = self.out_dart(cur, l)?.to;
        }
        Some(cur)
    }

    pub fn lift_word(
        &self,
        start: &str,
        word: &Word,
    ) -> Result<std::result::Result<GraphPath, usize>> {
        Ok(self.lift(self.vertex_index(start)?, word.letters()))
    }

    /// Path through the given vertex sequence, if consecutive vertices are
    /// adjacent.
    pub fn path_through(&self, vertices: &[usize]) -> Option<GraphPath> {
        let mut edges = Vec::new();
        let mut letters = Vec::new();
        for w in vertices.windows(2) {
            let e = self.find_edge(w[0], w[1])?;
            edges.push(e);
            letters.push(self.edges[e].label_from(w[0]));
        }
        Some(GraphPath {
            vertices: vertices.to_vec(),
            edges,
            word: Word::from(letters),
        })
    }

    pub fn spanning_forest(&self) -> SpanningForest {
        let n = self.vertex_count();
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut root = vec![usize::MAX; n];
        let mut is_tree_edge = vec![false; self.edge_count()];
        let mut queue = VecDeque::new();
        for r in 0..n {
            if root[r] != usize::MAX {
                continue;
            }
            root[r] = r;
            queue.push_back(r);
            while let Some(u) = queue.pop_front() {
                let mut nbrs: Vec<Dart> = self.darts[u].clone();
                nbrs.sort_by_key(|d| (d.to, d.edge));
                for d in nbrs {
                    if root[d.to] == usize::MAX {
                        root[d.to] = r;
                        depth[d.to] = depth[u] + 1;
                        parent[d.to] = Some((u, d.edge));
                        is_tree_edge[d.edge] = true;
                        queue.push_back(d.to);
                    }
                }
            }
        }
        let mut non_tree: Vec<usize> = (0..self.edge_count()).filter(|&e| !is_tree_edge[e]).collect();
        non_tree.sort_by_key(|&e| {
            let Edge { tail, head, label } = self.edges[e];
            (tail.min(head), tail.max(head), label)
        });
        SpanningForest {
            parent,
            depth,
            root,
            is_tree_edge,
            non_tree,
        }
    }

    /// Component index of every vertex, numbered by least vertex.
    pub fn component_labels(&self) -> (usize, Vec<usize>) {
        let n = self.vertex_count();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for d in &self.darts[u] {
                    if comp[d.to] == usize::MAX {
                        comp[d.to] = count;
                        stack.push(d.to);
                    }
                }
            }
            count += 1;
        }
        (count, comp)
    }

    pub fn component_count(&self) -> usize {
        self.component_labels().0
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() > 0 && self.component_count() == 1
    }

    pub fn require_connected(&self) -> Result<()> {
        let c = self.component_count();
        if c == 1 {
            Ok(())
        } else {
            Err(GscError::Disconnected(c))
        }
    }

    /// First Betti number `|E| - |V| + #components`.
    pub fn cycle_rank(&self) -> usize {
        self.edge_count() + self.component_count() - self.vertex_count()
    }

    /// Subgraph induced on `keep` (indices into this graph).
    pub fn induced(&self, name: impl Into<String>, keep: &[usize]) -> LabelledGraph {
        let mut local = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            local[v] = i;
        }
        let names = keep.iter().map(|&v| self.vertices[v].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| local[e.tail] != usize::MAX && local[e.head] != usize::MAX)
            .map(|e| (local[e.tail], local[e.head], e.label))
            .collect();
        LabelledGraph::from_parts(name, self.alphabet.clone(), names, edges)
    }

    /// Connected components as separate graphs, ordered by least vertex.
    pub fn split_components(&self) -> Vec<LabelledGraph> {
        let (count, comp) = self.component_labels();
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); count];
        for (v, &c) in comp.iter().enumerate() {
            members[c].push(v);
        }
        if count == 1 {
            return vec![self.clone()];
        }
        members
            .iter()
            .enumerate()
            .map(|(i, m)| self.induced(format!("{}#{}", self.name, i), m))
            .collect()
    }

    /// Graphviz rendering with labels as edge attributes.
    pub fn to_dot(&self) -> String {
        let mut out = format!("digraph {:?} {{\n", self.name);
        for v in &self.vertices {
            out.push_str(&format!("  {v:?};\n"));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "  {:?} -> {:?} [label={:?}];\n",
                self.vertices[e.tail],
                self.vertices[e.head],
                self.alphabet.letter_name(e.label)
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// Convenience constructors used across tests, examples and the pipeline.
pub mod build {
    use super::*;

    /// Cycle `v0 -> v1 -> ... -> v{n-1} -> v0` reading `word` (length `n`).
    pub fn cycle(name: &str, alphabet: &Alphabet, word: &Word) -> LabelledGraph {
        let n = word.len();
        let names = (0..n).map(|i| format!("v{i:03}")).collect();
        let edges = word
            .iter()
            .enumerate()
            .map(|(i, &l)| (i, (i + 1) % n, l))
            .collect();
        LabelledGraph::from_parts(name, alphabet.clone(), names, edges)
    }

    /// Path `v0 - v1 - ... - vn` reading `word`.
    pub fn path(name: &str, alphabet: &Alphabet, word: &Word) -> LabelledGraph {
        let names = (0..=word.len()).map(|i| format!("v{i:03}")).collect();
        let edges = word.iter().enumerate().map(|(i, &l)| (i, i + 1, l)).collect();
        LabelledGraph::from_parts(name, alphabet.clone(), names, edges)
    }

    /// Graph from index triples on vertices named `v000`, `v001`, ...
    pub fn from_triples(
        name: &str,
        alphabet: &Alphabet,
        n: usize,
        edges: &[(usize, usize, Letter)],
    ) -> LabelledGraph {
        let names = (0..n).map(|i| format!("v{i:03}")).collect();
        LabelledGraph::from_parts(name, alphabet.clone(), names, edges.to_vec())
    }

    /// The Petersen graph with every edge carrying its own generator.
    pub fn petersen() -> LabelledGraph {
        let alphabet = Alphabet::numbered(15);
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        let triples: Vec<_> = edges
            .iter()
            .enumerate()
            .map(|(k, &(u, v))| (u, v, Letter::generator(k)))
            .collect();
        from_triples("petersen", &alphabet, 10, &triples)
    }

    /// Two vertices joined by three paths of length two, six distinct generators.
    pub fn theta() -> LabelledGraph {
        let alphabet = Alphabet::numbered(6);
        // 0 and 1 are the branch points, 2..5 the midpoints
        let pairs = [(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)];
        let triples: Vec<_> = pairs
            .iter()
            .enumerate()
            .map(|(k, &(u, v))| (u, v, Letter::generator(k)))
            .collect();
        from_triples("theta", &alphabet, 5, &triples)
    }
}
