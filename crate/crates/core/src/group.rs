//! Word problem for graphical `C'(1/6)` presentations by Dehn rewriting.
//!
//! A subword that lifts to a path `u -> v` in a component and is longer
//! than `d(u, v)` is replaced by the label of the shortlex-least geodesic
//! from `u` to `v`. A path on a simple cycle covering more than half of it
//! is such a subword, so this rule fires whenever the classical
//! Greendlinger rewrite does, and every rewrite strictly shortens the word.

use std::borrow::Cow;
use std::collections::{HashMap, VecDeque};

use crate::alphabet::{Letter, Word};
use crate::error::{GscError, Result};
use crate::graph::LabelledGraph;
use crate::presentation::{GraphicalPresentation, Lambda};
use crate::smallcancel::{check_cprime, non_backtracking_words};

/// Components up to this size keep an all-pairs distance table.
const TABLE_LIMIT: usize = 2048;

struct Part {
    component: usize,
    girth: usize,
    /// `floor(girth / 2) + 1`: paths this short are geodesic.
    window: usize,
    /// Start vertices of paths by [`window_key`] of their label.
    starts: HashMap<u64, Vec<usize>>,
    table: Option<Vec<u16>>,
}

impl Part {
    fn new(component: usize, graph: &LabelledGraph, girth: usize) -> Part {
        let window = girth / 2 + 1;
        let mut starts: HashMap<u64, Vec<usize>> = HashMap::new();
        for (word, s) in non_backtracking_words(graph, window) {
            starts.entry(window_key(&word, 0, window)).or_default().push(s);
        }
        for list in starts.values_mut() {
            list.sort_unstable();
            list.dedup();
        }
        let n = graph.vertex_count();
        let table = (n <= TABLE_LIMIT).then(|| {
            let mut t = vec![u16::MAX; n * n];
            for u in 0..n {
                for (v, d) in graph.bfs(u).into_iter().enumerate() {
                    if let Some(d) = d {
                        t[u * n + v] = d as u16;
                    }
                }
            }
            t
        });
        Part {
            component,
            girth,
            window,
            starts,
            table,
        }
    }

    /// Distances from `u` to every vertex of the component.
    fn dist_from(&self, graph: &LabelledGraph, u: usize) -> Cow<'_, [u16]> {
        let n = graph.vertex_count();
        match &self.table {
            Some(t) => Cow::Borrowed(&t[u * n..(u + 1) * n]),
            None => Cow::Owned(
                graph
                    .bfs(u)
                    .into_iter()
                    .map(|d| d.map_or(u16::MAX, |d| d.min(u16::MAX as usize - 1) as u16))
                    .collect(),
            ),
        }
    }
}

/// Hash of `letters[i..i + len]`, read cyclically. Collisions only cost
/// time: every candidate start is confirmed by lifting.
fn window_key(letters: &[Letter], i: usize, len: usize) -> u64 {
    let n = letters.len();
    (i..i + len).fold(0xcbf2_9ce4_8422_2325u64, |h, k| {
        (h ^ (letters[k % n].code() as u64 + 1)).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Free reduction followed by removal of cancelling ends.
fn cyclic_reduce(letters: impl Iterator<Item = Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    let mut a = 0;
    let mut b = out.len();
    while b - a >= 2 && out[a] == out[b - 1].inverse() {
        a += 1;
        b -= 1;
    }
    out.drain(..a);
    out.truncate(b - a);
    out
}

/// Homomorphisms `F(S) -> Z/p` that vanish on every relator, for a few
/// primes. Equal group elements have equal keys.
#[derive(Clone, Debug, Default)]
pub struct AbelianKey {
    functionals: Vec<(u64, Vec<u64>)>,
    lift: Option<LiftKey>,
}

/// Homology of the lift of a word to the Cayley graph of a finite abelian
/// quotient `Q` of `G`, modulo the lifted relators.
#[derive(Clone, Debug)]
struct LiftKey {
    moduli: Vec<u64>,
    /// Residues of each generator in the factors of `Q`.
    image: Vec<Vec<u64>>,
    generators: usize,
    size: usize,
    functionals: Vec<(u64, Vec<u64>)>,
}

/// Upper bound on `|Q| · |S|`, the dimension of the lifted chain space.
const LIFT_COLUMNS: usize = 400;
const LIFT_FUNCTIONALS: usize = 4;
const LIFT_PRIME: u64 = 1_000_000_007;
const LIFT_MODULI: [u64; 3] = [2, 3, LIFT_PRIME];

impl LiftKey {
    fn new(cycles: &[Word], factors: &[(u64, Vec<u64>)], generators: usize) -> Option<LiftKey> {
        let mut moduli = Vec::new();
        let mut chosen: Vec<&Vec<u64>> = Vec::new();
        let mut size = 1usize;
        for (m, f) in factors {
            if *m == LIFT_PRIME || size * *m as usize * generators > LIFT_COLUMNS {
                continue;
            }
            size *= *m as usize;
            moduli.push(*m);
            chosen.push(f);
        }
        if moduli.is_empty() {
            return None;
        }
        let image = (0..generators)
            .map(|g| chosen.iter().map(|f| f[g]).collect())
            .collect();
        let lift = LiftKey {
            moduli,
            image,
            generators,
            size,
            functionals: Vec::new(),
        };
        let cols = size * generators;
        let mut rows = Vec::new();
        for w in cycles {
            for q in 0..size {
                let mut v = vec![0i64; cols];
                lift.walk(w.letters(), q, |col, sign| v[col] += sign);
                rows.push(v);
            }
        }
        // fixed pseudo-random combinations of each basis keep the key short;
        // the small primes see torsion of the lifted homology
        let mut seed = 0x9e37_79b9_7f4a_7c15u64;
        let mut functionals = Vec::new();
        for p in LIFT_MODULI {
            let basis = kernel_mod(&rows, cols, p);
            for _ in 0..LIFT_FUNCTIONALS.min(basis.len()) {
                let mut f = vec![0u64; cols];
                for b in &basis {
                    seed = seed
                        .wrapping_mul(6_364_136_223_846_793_005)
                        .wrapping_add(1_442_695_040_888_963_407);
                    let c = (seed >> 33) % p;
                    for (x, y) in f.iter_mut().zip(b) {
                        *x = (*x + (c as u128 * *y as u128 % p as u128) as u64) % p;
                    }
                }
                functionals.push((p, f));
            }
        }
        if functionals.is_empty() {
            return None;
        }
        Some(LiftKey { functionals, ..lift })
    }

    /// Vertex reached from `q` along the generator `g`, backwards if `back`.
    fn step(&self, q: usize, g: usize, back: bool) -> usize {
        let mut rest = q;
        let mut out = 0;
        let mut stride = 1;
        for (i, &m) in self.moduli.iter().enumerate() {
            let m = m as usize;
            let digit = rest % m;
            rest /= m;
            let shift = self.image[g][i] as usize % m;
            let next = if back { (digit + m - shift) % m } else { (digit + shift) % m };
            out += next * stride;
            stride *= m;
        }
        out
    }

    /// Reports each edge crossed by the lift from `q` as `(column, ±1)`.
    fn walk(&self, word: &[Letter], mut q: usize, mut edge: impl FnMut(usize, i64)) -> usize {
        for l in word {
            let g = l.index();
            if l.is_inverse() {
                let next = self.step(q, g, true);
                edge(next * self.generators + g, -1);
                q = next;
            } else {
                edge(q * self.generators + g, 1);
                q = self.step(q, g, false);
            }
        }
        q
    }

    fn key(&self, word: &[Letter], out: &mut Vec<u64>) {
        let mut sums = vec![0u64; self.functionals.len()];
        let end = self.walk(word, 0, |col, sign| {
            for (s, (p, f)) in sums.iter_mut().zip(&self.functionals) {
                *s = if sign > 0 { (*s + f[col]) % p } else { (*s + p - f[col]) % p };
            }
        });
        debug_assert!(end < self.size);
        out.push(end as u64);
        out.extend(sums);
    }
}

const KEY_PRIMES: [u64; 5] = [2, 3, 5, 7, 1_000_000_007];

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    r
}

/// Basis of `{ f : r·f = 0 mod p for every row r }`.
fn kernel_mod(rows: &[Vec<i64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mul = |a: u64, b: u64| (a as u128 * b as u128 % p as u128) as u64;
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(pr) = (row..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, pr);
        let inv = pow_mod(m[row][col], p - 2, p);
        for x in m[row].iter_mut() {
            *x = mul(*x, inv);
        }
        for r in 0..m.len() {
            if r != row && m[r][col] != 0 {
                let f = m[r][col];
                for c in 0..cols {
                    let sub = mul(f, m[row][c]);
                    m[r][c] = (m[r][c] + p - sub) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut f = vec![0u64; cols];
            f[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                f[pc] = (p - m[r][free]) % p;
            }
            f
        })
        .collect()
}

impl AbelianKey {
    pub fn new(presentation: &GraphicalPresentation) -> Self {
        let n = presentation.alphabet().len();
        let mut rows = Vec::new();
        let mut cycles = Vec::new();
        for c in presentation.components() {
            if c.vertex_count() == 0 {
                continue;
            }
            for w in cycle_words(c, 0).unwrap_or_default() {
                let mut v = vec![0i64; n];
                for l in &w {
                    v[l.index()] += if l.is_inverse() { -1 } else { 1 };
                }
                rows.push(v);
                cycles.push(w);
            }
        }
        let functionals: Vec<(u64, Vec<u64>)> = KEY_PRIMES
            .iter()
            .flat_map(|&p| kernel_mod(&rows, n, p).into_iter().map(move |f| (p, f)))
            .collect();
        let lift = LiftKey::new(&cycles, &functionals, n);
        AbelianKey { functionals, lift }
    }

    pub fn key(&self, word: &Word) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .functionals
            .iter()
            .map(|(p, f)| {
                word.iter().fold(0u64, |acc, l| {
                    let x = f[l.index()];
                    if l.is_inverse() {
                        (acc + p - x) % p
                    } else {
                        (acc + x) % p
                    }
                })
            })
            .collect();
        if let Some(lift) = &self.lift {
            lift.key(word.letters(), &mut out);
        }
        out
    }
}

/// One rewrite: `removed` at `position` read a path from `start` in
/// `component`; it was replaced by `inserted`, then the word was freely
/// reduced to `result`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteStep {
    pub position: usize,
    pub component: usize,
    pub start: usize,
    pub removed: Word,
    pub inserted: Word,
    pub result: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DehnResult {
    pub word: Word,
    pub trace: Vec<RewriteStep>,
}

#[derive(Clone, Debug)]
struct Rewrite {
    new_len: usize,
    position: usize,
    component: usize,
    length: usize,
    start: usize,
    end: usize,
}

impl Rewrite {
    fn key(&self) -> (usize, usize, usize, usize, usize) {
        (self.new_len, self.position, self.component, self.length, self.start)
    }
}

/// Word-problem solver bound to one presentation.
pub struct DehnEngine {
    presentation: GraphicalPresentation,
    parts: Vec<Part>,
    key: AbelianKey,
}

impl DehnEngine {
    /// Refuses presentations that are not `C'(1/6)`; a presentation with a
    /// smaller `λ` is checked at its own `λ`.
    pub fn new(presentation: &GraphicalPresentation) -> Result<Self> {
        let lambda = presentation.lambda().min(Lambda::one_sixth());
        let verdict = check_cprime(&presentation.clone().with_lambda(lambda))?;
        if !verdict.pass {
            let reason = match &verdict.witness {
                Some(w) => format!(
                    "piece of length {} in component {} with girth {}",
                    w.piece.word.len(),
                    w.component,
                    w.girth
                ),
                None => "condition fails".into(),
            };
            return Err(GscError::NotSmallCancellation {
                lambda: lambda.to_string(),
                reason,
            });
        }
        Ok(Self::trusted(presentation))
    }

    /// Skips the small cancellation check. Only for callers that already
    /// hold a passing verdict for this presentation.
    pub fn trusted(presentation: &GraphicalPresentation) -> Self {
        let parts = presentation
            .components()
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.girth().finite().map(|g| Part::new(i, c, g)))
            .collect();
        DehnEngine {
            presentation: presentation.clone(),
            parts,
            key: AbelianKey::new(presentation),
        }
    }

    pub fn presentation(&self) -> &GraphicalPresentation {
        &self.presentation
    }

    /// Invariant shared by all words representing the same element.
    pub fn abelian_key(&self, word: &Word) -> Vec<u64> {
        self.key.key(word)
    }

    /// Least girth over components containing a cycle.
    pub fn min_girth(&self) -> Option<usize> {
        self.parts.iter().map(|p| p.girth).min()
    }

    /// Necessary condition for a rewrite: some window-length subword (read
    /// cyclically if asked) is the label of a path in a component.
    fn has_window(&self, letters: &[Letter], cyclic: bool) -> bool {
        let n = letters.len();
        self.parts.iter().any(|p| {
            if p.window > n {
                return false;
            }
            let last = if cyclic { n } else { n - p.window + 1 };
            (0..last).any(|i| p.starts.contains_key(&window_key(letters, i, p.window)))
        })
    }

    fn find_rewrite(&self, letters: &[Letter], cyclic: bool) -> Option<Rewrite> {
        let n = letters.len();
        let mut best: Option<Rewrite> = None;
        for p in &self.parts {
            if p.window > n {
                continue;
            }
            let graph = self.presentation.component(p.component);
            let last = if cyclic { n } else { n - p.window + 1 };
            for i in 0..last {
                let Some(starts) = p.starts.get(&window_key(letters, i, p.window)) else {
                    continue;
                };
                let max_len = if cyclic { n } else { n - i };
                for &u in starts {
                    let row = p.dist_from(graph, u);
                    let mut cur = u;
                    for len in 1..=max_len {
                        match graph.out_dart(cur, letters[(i + len - 1) % n]) {
                            Some(d) => cur = d.to,
                            None => break,
                        }
                        let d = row[cur] as usize;
                        if len < p.window || d >= len {
                            continue;
                        }
                        let cand = Rewrite {
                            new_len: n - len + d,
                            position: i,
                            component: p.component,
                            length: len,
                            start: u,
                            end: cur,
                        };
                        if best.as_ref().is_none_or(|b| cand.key() < b.key()) {
                            best = Some(cand);
                        }
                    }
                }
            }
        }
        best
    }

    /// Label of the shortlex-least geodesic between two vertices.
    fn geodesic(&self, component: usize, from: usize, to: usize) -> Word {
        let part = self.parts.iter().find(|p| p.component == component).expect("component has a cycle");
        let graph = self.presentation.component(component);
        let row = part.dist_from(graph, to);
        let mut cur = from;
        let mut word = Word::empty();
        while cur != to {
            let d = graph
                .darts(cur)
                .iter()
                .find(|d| row[d.to] as usize + 1 == row[cur] as usize)
                .expect("distance decreases along some dart");
            word.push(d.label);
            cur = d.to;
        }
        word
    }

    /// Rewrites until no subword lifts to a non-geodesic path.
    pub fn dehn_reduce(&self, word: &Word) -> DehnResult {
        let mut w = word.free_reduced();
        let mut trace = Vec::new();
        while self.has_window(w.letters(), false) {
            let Some(r) = self.find_rewrite(w.letters(), false) else {
                break;
            };
            let inserted = self.geodesic(r.component, r.start, r.end);
            let letters = w.letters();
            let mut next: Vec<Letter> = letters[..r.position].to_vec();
            next.extend_from_slice(inserted.letters());
            next.extend_from_slice(&letters[r.position + r.length..]);
            let result = Word::from(next).free_reduced();
            trace.push(RewriteStep {
                position: r.position,
                component: r.component,
                start: r.start,
                removed: w.subword(r.position, r.length),
                inserted,
                result: result.clone(),
            });
            w = result;
        }
        DehnResult { word: w, trace }
    }

    /// Decides whether `word` is trivial, rewriting its cyclic core with
    /// subwords that may wrap around.
    pub fn is_trivial(&self, word: &Word) -> bool {
        self.is_trivial_core(cyclic_reduce(word.iter().copied()))
    }

    fn is_trivial_core(&self, mut w: Vec<Letter>) -> bool {
        loop {
            if w.is_empty() {
                return true;
            }
            if !self.has_window(&w, true) {
                return false;
            }
            let Some(r) = self.find_rewrite(&w, true) else {
                return false;
            };
            let n = w.len();
            let next = self
                .geodesic(r.component, r.start, r.end)
                .into_letters()
                .into_iter()
                .chain((r.position + r.length..r.position + n).map(|k| w[k % n]));
            w = cyclic_reduce(next);
        }
    }

    pub fn is_equal(&self, a: &Word, b: &Word) -> bool {
        if !self.key.functionals.is_empty() && self.key.key(a) != self.key.key(b) {
            return false;
        }
        self.is_equal_unkeyed(a, b)
    }

    /// `is_equal` for words already known to share their key.
    pub(crate) fn is_equal_unkeyed(&self, a: &Word, b: &Word) -> bool {
        let b_inv = b.letters().iter().rev().map(|l| l.inverse());
        self.is_trivial_core(cyclic_reduce(a.iter().copied().chain(b_inv)))
    }

    /// Checks that every step of `trace` is a valid rewrite starting from
    /// `word`.
    pub fn replay(&self, word: &Word, trace: &[RewriteStep]) -> bool {
        let mut w = word.free_reduced();
        for step in trace {
            let Some(graph) = self.presentation.components().get(step.component) else {
                return false;
            };
            if step.position + step.removed.len() > w.len()
                || w.subword(step.position, step.removed.len()) != step.removed
                || step.inserted.len() >= step.removed.len()
            {
                return false;
            }
            let a = graph.lift_end(step.start, step.removed.letters());
            let b = graph.lift_end(step.start, step.inserted.letters());
            if a.is_none() || a != b {
                return false;
            }
            let letters = w.letters();
            let mut next = letters[..step.position].to_vec();
            next.extend_from_slice(step.inserted.letters());
            next.extend_from_slice(&letters[step.position + step.removed.len()..]);
            if Word::from(next).free_reduced() != step.result {
                return false;
            }
            w = step.result.clone();
        }
        true
    }
}

/// One closed word at `basepoint` per non-tree edge of the canonical
/// spanning tree: along the tree to the edge, across it, and back.
pub fn cycle_words(graph: &LabelledGraph, basepoint: usize) -> Result<Vec<Word>> {
    graph.require_connected()?;
    let forest = graph.spanning_forest();
    let to_root = forest.root_word(graph, basepoint).inverse();
    Ok(forest
        .non_tree
        .iter()
        .map(|&e| {
            let edge = graph.edges()[e];
            let mut w = to_root.concat(&forest.root_word(graph, edge.tail));
            w.push(edge.label);
            w.concat(&forest.root_word(graph, edge.head).inverse())
                .concat(&to_root.inverse())
                .free_reduced()
        })
        .collect())
}

/// Breadth-first distances capped at `bound`; used where a full table is
/// unnecessary.
pub fn bounded_distance(graph: &LabelledGraph, from: usize, to: usize, bound: usize) -> Option<usize> {
    let mut dist = vec![usize::MAX; graph.vertex_count()];
    let mut queue = VecDeque::from([from]);
    dist[from] = 0;
    while let Some(u) = queue.pop_front() {
        if u == to {
            return Some(dist[u]);
        }
        if dist[u] == bound {
            continue;
        }
        for d in graph.darts(u) {
            if dist[d.to] == usize::MAX {
                dist[d.to] = dist[u] + 1;
                queue.push_back(d.to);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::graph::build;

    fn triangle() -> GraphicalPresentation {
        let s = Alphabet::new(["a", "b", "c"]).unwrap();
        let t = build::cycle("t", &s, &s.parse_word("abc").unwrap());
        GraphicalPresentation::new(s, vec![t], Lambda::one_sixth()).unwrap()
    }

    #[test]
    fn triangle_rewrites() {
        let p = triangle();
        let e = DehnEngine::new(&p).unwrap();
        let s = p.alphabet();
        let r = e.dehn_reduce(&s.parse_word("ab").unwrap());
        assert_eq!(s.format_word(&r.word), "c'");
        assert!(e.replay(&s.parse_word("ab").unwrap(), &r.trace));
        assert!(e.dehn_reduce(&s.parse_word("abc").unwrap()).word.is_empty());
        assert!(e.is_trivial(&s.parse_word("bca").unwrap()));
        assert!(!e.is_trivial(&s.parse_word("ab").unwrap()));
        assert!(e.is_equal(&s.parse_word("ab").unwrap(), &s.parse_word("c'").unwrap()));
    }

    #[test]
    fn free_and_cyclic() {
        let s = Alphabet::new(["a", "b"]).unwrap();
        let free = GraphicalPresentation::free(s.clone());
        let e = DehnEngine::new(&free).unwrap();
        assert_eq!(s.format_word(&e.dehn_reduce(&s.parse_word("aa'b").unwrap()).word), "b");
        assert!(!e.is_trivial(&s.parse_word("a").unwrap()));

        let a = Alphabet::new(["a"]).unwrap();
        let hex = build::cycle("h", &a, &a.parse_word("aaaaaa").unwrap());
        let p = GraphicalPresentation::new(a.clone(), vec![hex], Lambda::one_sixth()).unwrap();
        let e = DehnEngine::new(&p).unwrap();
        assert!(e.is_trivial(&a.parse_word("aaaaaa").unwrap()));
        assert!(!e.is_trivial(&a.parse_word("aaa").unwrap()));
        assert!(e.is_equal(&a.parse_word("aaa").unwrap(), &a.parse_word("a'a'a'").unwrap()));
        assert_eq!(e.dehn_reduce(&a.parse_word("aaaa").unwrap()).word.len(), 2);
    }

    #[test]
    fn abelian_keys() {
        let s = Alphabet::new(["a", "b", "c"]).unwrap();
        let t = build::cycle("t", &s, &s.parse_word("abc").unwrap());
        let p = GraphicalPresentation::new(s.clone(), vec![t], Lambda::one_sixth()).unwrap();
        let k = AbelianKey::new(&p);
        let w = |x: &str| k.key(&s.parse_word(x).unwrap());
        assert_eq!(w("ab"), w("c'"));
        assert_ne!(w("a"), w("b"));
        let a = Alphabet::new(["a"]).unwrap();
        let hex = build::cycle("h", &a, &a.parse_word("aaaaaa").unwrap());
        let p = GraphicalPresentation::new(a.clone(), vec![hex], Lambda::one_sixth()).unwrap();
        let k = AbelianKey::new(&p);
        let keys: std::collections::HashSet<_> =
            (0..6).map(|i| k.key(&a.parse_word("a").unwrap().pow(i))).collect();
        assert_eq!(keys.len(), 6);
    }

    #[test]
    fn refuses_duplicate_components() {
        let s = Alphabet::new(["a", "b", "c"]).unwrap();
        let t = build::cycle("t", &s, &s.parse_word("abc").unwrap());
        let p = GraphicalPresentation::new(s, vec![t.clone(), t], Lambda::one_sixth()).unwrap();
        assert!(matches!(
            DehnEngine::new(&p),
            Err(GscError::NotSmallCancellation { .. })
        ));
    }

    #[test]
    fn cycle_word_bases() {
        let s = Alphabet::new(["a", "b", "c"]).unwrap();
        let t = build::cycle("t", &s, &s.parse_word("abc").unwrap());
        let ws = cycle_words(&t, 1).unwrap();
        assert_eq!(ws.len(), 1);
        assert_eq!(ws[0].len(), 3);
        assert_eq!(t.lift_end(1, ws[0].letters()), Some(1));
        let theta = build::theta();
        let ws = cycle_words(&theta, 3).unwrap();
        assert_eq!(ws.len(), 2);
        for w in &ws {
            assert_eq!(theta.lift_end(3, w.letters()), Some(3));
        }
        let path = build::path("p", &s, &s.parse_word("ab").unwrap());
        assert!(cycle_words(&path, 0).unwrap().is_empty());
    }
}
