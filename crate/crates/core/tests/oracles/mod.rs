//! Independent reference implementations used to cross-check the library.
//! Nothing here calls the algorithms under test; only plain data accessors
//! of graphs and presentations are used.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};

use gsc_core::{GraphicalPresentation, LabelledGraph, Letter};

/// Adjacency as `(neighbour, label read, edge id)`.
pub fn adjacency(graph: &LabelledGraph) -> Vec<Vec<(usize, Letter, usize)>> {
    let mut adj = vec![Vec::new(); graph.vertex_count()];
    for (i, e) in graph.edges().iter().enumerate() {
        adj[e.tail].push((e.head, e.label, i));
        adj[e.head].push((e.tail, e.label.inverse(), i));
    }
    adj
}

/// Every non-backtracking walk of exactly `len` edges, as
/// `(start vertex, label word)`.
pub fn walks(graph: &LabelledGraph, len: usize) -> Vec<(usize, Vec<Letter>)> {
    let adj = adjacency(graph);
    let mut out = Vec::new();
    fn go(
        adj: &[Vec<(usize, Letter, usize)>],
        v: usize,
        last: Option<usize>,
        left: usize,
        word: &mut Vec<Letter>,
        start: usize,
        out: &mut Vec<(usize, Vec<Letter>)>,
    ) {
        if left == 0 {
            out.push((start, word.clone()));
            return;
        }
        for &(w, l, e) in &adj[v] {
            if Some(e) == last {
                continue;
            }
            word.push(l);
            go(adj, w, Some(e), left - 1, word, start, out);
            word.pop();
        }
    }
    for v in 0..graph.vertex_count() {
        go(&adj, v, None, len, &mut Vec::new(), v, &mut out);
    }
    out
}

/// Label words of every simple cycle, from every start and in both
/// directions, up to `max_len` edges.
pub fn simple_cycle_words(graph: &LabelledGraph, max_len: usize) -> Vec<Vec<Letter>> {
    let adj = adjacency(graph);
    let mut out = HashSet::new();
    fn go(
        adj: &[Vec<(usize, Letter, usize)>],
        start: usize,
        v: usize,
        last: Option<usize>,
        on_path: &mut Vec<bool>,
        word: &mut Vec<Letter>,
        max_len: usize,
        out: &mut HashSet<Vec<Letter>>,
    ) {
        for &(w, l, e) in &adj[v] {
            if Some(e) == last {
                continue;
            }
            if w == start {
                word.push(l);
                out.insert(word.clone());
                word.pop();
            } else if !on_path[w] && word.len() + 1 < max_len {
                on_path[w] = true;
                word.push(l);
                go(adj, start, w, Some(e), on_path, word, max_len, out);
                word.pop();
                on_path[w] = false;
            }
        }
    }
    for s in 0..graph.vertex_count() {
        let mut on_path = vec![false; graph.vertex_count()];
        on_path[s] = true;
        go(&adj, s, s, None, &mut on_path, &mut Vec::new(), max_len, &mut out);
    }
    let mut v: Vec<_> = out.into_iter().collect();
    v.sort();
    v
}

/// Girth by brute force over simple cycles.
pub fn girth(graph: &LabelledGraph) -> Option<usize> {
    simple_cycle_words(graph, graph.edge_count().max(1))
        .iter()
        .map(Vec::len)
        .min()
}

/// Whether some label-preserving automorphism sends `from` to `to`.
pub fn automorphism_maps(graph: &LabelledGraph, from: usize, to: usize) -> bool {
    let adj = adjacency(graph);
    let n = graph.vertex_count();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    image[from] = to;
    used[to] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if adj[u].len() != adj[image[u]].len() {
            return false;
        }
        for &(w, l, _) in &adj[u] {
            let Some(&(fw, _, _)) = adj[image[u]].iter().find(|x| x.1 == l) else {
                return false;
            };
            if image[w] == usize::MAX {
                if used[fw] {
                    return false;
                }
                image[w] = fw;
                used[fw] = true;
                queue.push_back(w);
            } else if image[w] != fw {
                return false;
            }
        }
    }
    true
}

/// `C'(λ)` by comparing every pair of equally labelled walks of the
/// critical length of each component.
pub fn cprime(presentation: &GraphicalPresentation) -> bool {
    let lambda = presentation.lambda();
    let comps = presentation.components();
    for (i, c) in comps.iter().enumerate() {
        let Some(g) = girth(c) else { continue };
        let len = (lambda.numer() as usize * g).div_ceil(lambda.denom() as usize);
        let mine = walks(c, len);
        let mut index: HashMap<Vec<Letter>, Vec<(usize, usize)>> = HashMap::new();
        for (j, d) in comps.iter().enumerate() {
            for (v, w) in walks(d, len) {
                index.entry(w).or_default().push((j, v));
            }
        }
        for (v, w) in mine {
            for &(j, u) in &index[&w] {
                if (j, u) == (i, v) {
                    continue;
                }
                if j != i || !automorphism_maps(c, v, u) {
                    return false;
                }
            }
        }
    }
    true
}

/// Edge ids of the non-backtracking walk reading `word` from `start`.
pub fn walk_edges(graph: &LabelledGraph, start: usize, word: &[Letter]) -> Option<Vec<usize>> {
    let adj = adjacency(graph);
    let mut v = start;
    let mut edges: Vec<usize> = Vec::new();
    for &l in word {
        let &(w, _, e) = adj[v].iter().find(|x| x.1 == l)?;
        if edges.last() == Some(&e) {
            return None;
        }
        edges.push(e);
        v = w;
    }
    Some(edges)
}

/// Whether equal-word walks at `a` and `b` (component, start) form a piece.
pub fn piece_pair(presentation: &GraphicalPresentation, a: (usize, usize), b: (usize, usize)) -> bool {
    a.0 != b.0 || (a.1 != b.1 && !automorphism_maps(presentation.component(a.0), a.1, b.1))
}

/// Label words of length `len` read along two walks forming a piece.
pub fn piece_words(presentation: &GraphicalPresentation, len: usize) -> HashSet<Vec<Letter>> {
    let mut index: HashMap<Vec<Letter>, Vec<(usize, usize)>> = HashMap::new();
    for (c, g) in presentation.components().iter().enumerate() {
        for (v, w) in walks(g, len) {
            index.entry(w).or_default().push((c, v));
        }
    }
    index
        .into_iter()
        .filter(|(_, occ)| {
            (0..occ.len()).any(|i| (i + 1..occ.len()).any(|j| piece_pair(presentation, occ[i], occ[j])))
        })
        .map(|(w, _)| w)
        .collect()
}

/// Whether both walks reading `word` from `a` and `b` continue by a common
/// letter at either end.
pub fn piece_extends(
    presentation: &GraphicalPresentation,
    a: (usize, usize),
    b: (usize, usize),
    word: &[Letter],
) -> bool {
    let gens = presentation.alphabet().len();
    let letters: Vec<Letter> = (0..gens)
        .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
        .collect();
    let forward = |(c, s): (usize, usize), x: Letter| {
        let mut w = word.to_vec();
        w.push(x);
        walk_edges(presentation.component(c), s, &w).is_some()
    };
    let backward = |(c, s): (usize, usize), x: Letter| {
        let g = presentation.component(c);
        let Some(&(prev, _, _)) = adjacency(g)[s].iter().find(|y| y.1 == x.inverse()) else {
            return false;
        };
        let mut w = vec![x];
        w.extend_from_slice(word);
        walk_edges(g, prev, &w).is_some()
    };
    letters
        .iter()
        .any(|&x| (forward(a, x) && forward(b, x)) || (backward(a, x) && backward(b, x)))
}

fn reduce(word: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Cyclic conjugates of every relator and its inverse.
pub fn conjugates(relators: &[Vec<Letter>]) -> Vec<Vec<Letter>> {
    let mut out = HashSet::new();
    for r in relators {
        let inv: Vec<Letter> = r.iter().rev().map(|l| l.inverse()).collect();
        for w in [r, &inv] {
            for k in 0..w.len() {
                let mut c = w[k..].to_vec();
                c.extend_from_slice(&w[..k]);
                out.insert(c);
            }
        }
    }
    let mut v: Vec<_> = out.into_iter().collect();
    v.sort();
    v
}

/// Relators of a presentation: simple cycle words of every component.
pub fn relators(presentation: &GraphicalPresentation, max_len: usize) -> Vec<Vec<Letter>> {
    presentation
        .components()
        .iter()
        .flat_map(|c| simple_cycle_words(c, max_len))
        .collect()
}

/// Words reachable from `word` by inserting a relator conjugate anywhere and
/// freely reducing, without exceeding `bound` letters.
fn neighbours(word: &[Letter], conj: &[Vec<Letter>], bound: usize) -> Vec<Vec<Letter>> {
    let mut out = Vec::new();
    for pos in 0..=word.len() {
        for r in conj {
            if r.len() > 2 * bound {
                continue;
            }
            let mut w = word[..pos].to_vec();
            w.extend_from_slice(r);
            w.extend_from_slice(&word[pos..]);
            let w = reduce(&w);
            if w.len() <= bound {
                out.push(w);
            }
        }
    }
    out
}

/// Decides membership in the normal closure by breadth-first search over
/// words of length at most `bound`. Complete for Dehn presentations when
/// `bound >= |word|`.
pub fn trivial_by_search(word: &[Letter], conj: &[Vec<Letter>], bound: usize) -> bool {
    let start = reduce(word);
    if start.is_empty() {
        return true;
    }
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(w) = queue.pop_front() {
        for n in neighbours(&w, conj, bound) {
            if n.is_empty() {
                return true;
            }
            if seen.insert(n.clone()) {
                queue.push_back(n);
            }
        }
    }
    false
}

/// Every freely reduced word of length at most `len` over `gens` generators.
pub fn reduced_words(gens: usize, len: usize) -> Vec<Vec<Letter>> {
    let letters: Vec<Letter> = (0..gens)
        .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
        .collect();
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &letters {
                if w.last() == Some(&l.inverse()) {
                    continue;
                }
                let mut x: Vec<Letter> = w.clone();
                x.push(l);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Union-find over all reduced words of length at most `bound`, merging
/// words that differ by one relator insertion. Returns the words in the
/// class of the empty word.
pub fn trivial_class(gens: usize, conj: &[Vec<Letter>], bound: usize) -> HashSet<Vec<Letter>> {
    let words = reduced_words(gens, bound);
    let index: HashMap<&Vec<Letter>, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut parent: Vec<usize> = (0..words.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, w) in words.iter().enumerate() {
        for n in neighbours(w, conj, bound) {
            let j = index[&n];
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a] = b;
            }
        }
    }
    let root = find(&mut parent, 0);
    (0..words.len())
        .filter(|&i| find(&mut parent, i) == root)
        .map(|i| words[i].clone())
        .collect()
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, in
/// decreasing order.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-22 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    ev
}

/// Adjacency matrix built from the edge list.
pub fn adjacency_matrix(graph: &LabelledGraph) -> Vec<Vec<f64>> {
    let n = graph.vertex_count();
    let mut a = vec![vec![0.0; n]; n];
    for e in graph.edges() {
        if e.tail == e.head {
            a[e.tail][e.tail] += 2.0;
        } else {
            a[e.tail][e.head] += 1.0;
            a[e.head][e.tail] += 1.0;
        }
    }
    a
}

/// Reads a corpus file relative to the workspace root.
pub fn corpus(name: &str) -> GraphicalPresentation {
    let path = format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    gsc_core::codec::parse_presentation(&text).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub const CORPUS: &[&str] = &[
    "triangle.json",
    "hexagon-a6.json",
    "ab6.json",
    "commutator3.json",
    "a6-b6.json",
    "cycle12-12letters.json",
    "duplicate-components.json",
    "long-cycles.json",
    "petersen.json",
    "theta.json",
];
