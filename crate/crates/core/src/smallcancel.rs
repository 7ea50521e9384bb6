//! Label-preserving automorphisms, pieces, and the `C'(λ)` and
//! unique-long-path conditions.

use std::collections::HashMap;

use crate::alphabet::{Letter, Word};
use crate::error::Result;
use crate::graph::{GraphPath, LabelledGraph};
use crate::presentation::{GraphicalPresentation, Lambda};

/// Tries to extend `from ↦ to` to a label-preserving automorphism of a
/// connected reduced graph. Reducedness makes the extension unique.
pub fn extend_automorphism(graph: &LabelledGraph, from: usize, to: usize) -> Option<Vec<usize>> {
    let n = graph.vertex_count();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut stack = vec![from];
    map[from] = to;
    used[to] = true;
    while let Some(v) = stack.pop() {
        let image = map[v];
        if graph.degree(v) != graph.degree(image) {
            return None;
        }
        for d in graph.darts(v) {
            let target = graph.out_dart(image, d.label)?.to;
            if map[d.to] == usize::MAX {
                if used[target] {
                    return None;
                }
                map[d.to] = target;
                used[target] = true;
                stack.push(d.to);
            } else if map[d.to] != target {
                return None;
            }
        }
    }
    if map.iter().any(|&m| m == usize::MAX) {
        return None;
    }
    Some(map)
}

/// All label-preserving automorphisms of a connected reduced graph, in the
/// order of the image of vertex 0.
pub fn automorphisms(graph: &LabelledGraph) -> Result<Vec<Vec<usize>>> {
    graph.require_connected()?;
    Ok((0..graph.vertex_count())
        .filter_map(|t| extend_automorphism(graph, 0, t))
        .collect())
}

/// Orbit representative (least member) of every vertex under the
/// automorphism group.
pub fn automorphism_orbits(graph: &LabelledGraph) -> Result<Vec<usize>> {
    let autos = automorphisms(graph)?;
    let n = graph.vertex_count();
    // the least image of v is the same for every member of its orbit
    let orbit = (0..n)
        .map(|v| autos.iter().map(|a| a[v]).min().unwrap_or(v))
        .collect();
    Ok(orbit)
}

/// A path in a specific component.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Occurrence {
    pub component: usize,
    pub path: GraphPath,
}

impl Occurrence {
    fn key(&self) -> (usize, &[usize]) {
        (self.component, &self.path.vertices)
    }

    pub fn reversed(&self) -> Occurrence {
        Occurrence {
            component: self.component,
            path: self.path.reversed(),
        }
    }
}

/// A labelled path occurring at two places that are in different
/// components, or in one component and not related by an automorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub word: Word,
    pub first: Occurrence,
    pub second: Occurrence,
}

impl Piece {
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    fn canonical(first: Occurrence, second: Occurrence) -> Piece {
        let (a, b) = if first.key() <= second.key() {
            (first, second)
        } else {
            (second, first)
        };
        let (ra, rb) = {
            let (x, y) = (a.reversed(), b.reversed());
            if x.key() <= y.key() {
                (x, y)
            } else {
                (y, x)
            }
        };
        let (a, b) = if (a.key(), b.key()) <= (ra.key(), rb.key()) {
            (a, b)
        } else {
            (ra, rb)
        };
        Piece {
            word: a.path.word.clone(),
            first: a,
            second: b,
        }
    }
}

/// Every non-backtracking path of length `len` in `graph`, as
/// `(label word, start vertex)`.
pub fn non_backtracking_words(graph: &LabelledGraph, len: usize) -> Vec<(Vec<Letter>, usize)> {
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(len);
    fn walk(
        graph: &LabelledGraph,
        v: usize,
        prev_edge: Option<usize>,
        remaining: usize,
        word: &mut Vec<Letter>,
        start: usize,
        out: &mut Vec<(Vec<Letter>, usize)>,
    ) {
        if remaining == 0 {
            out.push((word.clone(), start));
            return;
        }
        for d in graph.darts(v) {
            if Some(d.edge) == prev_edge {
                continue;
            }
            word.push(d.label);
            walk(graph, d.to, Some(d.edge), remaining - 1, word, start, out);
            word.pop();
        }
    }
    for s in 0..graph.vertex_count() {
        walk(graph, s, None, len, &mut word, s, &mut out);
    }
    out
}

type WordIndex = HashMap<Vec<Letter>, Vec<(usize, usize)>>;

/// Per-presentation data reused by piece queries: girths and automorphism
/// orbits of every component.
pub struct PieceContext<'a> {
    presentation: &'a GraphicalPresentation,
    orbits: Vec<Vec<usize>>,
    girths: Vec<Option<usize>>,
}

impl<'a> PieceContext<'a> {
    pub fn new(presentation: &'a GraphicalPresentation) -> Result<Self> {
        let mut orbits = Vec::new();
        let mut girths = Vec::new();
        for c in presentation.components() {
            orbits.push(automorphism_orbits(c)?);
            girths.push(c.girth().finite());
        }
        Ok(PieceContext {
            presentation,
            orbits,
            girths,
        })
    }

    pub fn girth(&self, component: usize) -> Option<usize> {
        self.girths[component]
    }

    fn index(&self, len: usize) -> WordIndex {
        let mut index: WordIndex = HashMap::new();
        for (c, g) in self.presentation.components().iter().enumerate() {
            for (w, s) in non_backtracking_words(g, len) {
                index.entry(w).or_default().push((c, s));
            }
        }
        index
    }

    /// Whether the occurrences of a common word starting at `a` and `b`
    /// form a piece.
    pub fn is_piece_pair(&self, a: (usize, usize), b: (usize, usize)) -> bool {
        if a.0 != b.0 {
            return true;
        }
        a.1 != b.1 && self.orbits[a.0][a.1] != self.orbits[b.0][b.1]
    }

    fn occurrence(&self, (c, s): (usize, usize), word: &[Letter]) -> Occurrence {
        let path = self
            .presentation
            .component(c)
            .lift(s, word)
            .expect("indexed words lift");
        Occurrence { component: c, path }
    }

    fn common_forward(&self, a: &Occurrence, b: &Occurrence) -> Option<Letter> {
        let ga = self.presentation.component(a.component);
        let gb = self.presentation.component(b.component);
        let (ea, eb) = (a.path.end(), b.path.end());
        let (la, lb) = (a.path.edges.last().copied(), b.path.edges.last().copied());
        ga.darts(ea)
            .iter()
            .filter(|d| Some(d.edge) != la)
            .map(|d| d.label)
            .find(|&l| matches!(gb.out_dart(eb, l), Some(d) if Some(d.edge) != lb))
    }

    fn extendable(&self, a: &Occurrence, b: &Occurrence) -> bool {
        self.common_forward(a, b).is_some() || self.common_forward(&a.reversed(), &b.reversed()).is_some()
    }

    /// Extends a piece pair forward then backward while both occurrences
    /// admit the same next letter, up to `cap` edges.
    pub fn extend_maximally(&self, mut a: Occurrence, mut b: Occurrence, cap: usize) -> Piece {
        for _ in 0..2 {
            while a.path.len() < cap {
                let Some(l) = self.common_forward(&a, &b) else {
                    break;
                };
                for occ in [&mut a, &mut b] {
                    let g = self.presentation.component(occ.component);
                    let d = g.out_dart(occ.path.end(), l).expect("common letter exists");
                    occ.path.vertices.push(d.to);
                    occ.path.edges.push(d.edge);
                    occ.path.word.push(l);
                }
            }
            a = a.reversed();
            b = b.reversed();
        }
        Piece::canonical(a, b)
    }

    /// Inclusion-maximal pieces of length at most `max_length`.
    pub fn maximal_pieces(&self, max_length: usize) -> Vec<Piece> {
        let mut pieces = Vec::new();
        for len in 1..=max_length {
            let index = self.index(len);
            let mut words: Vec<_> = index.iter().filter(|(_, occ)| occ.len() > 1).collect();
            words.sort();
            for (word, occs) in words {
                for i in 0..occs.len() {
                    for j in i + 1..occs.len() {
                        if !self.is_piece_pair(occs[i], occs[j]) {
                            continue;
                        }
                        let a = self.occurrence(occs[i], word);
                        let b = self.occurrence(occs[j], word);
                        if len < max_length && self.extendable(&a, &b) {
                            continue;
                        }
                        let piece = Piece::canonical(a.clone(), b.clone());
                        // each unordered pair is met once per reading direction
                        if piece.first == a || piece.first == b {
                            pieces.push(piece);
                        }
                    }
                }
            }
        }
        pieces.sort_by(|x, y| {
            (x.first.key(), x.second.key()).cmp(&(y.first.key(), y.second.key()))
        });
        pieces.dedup();
        pieces
    }
}

/// Inclusion-maximal pieces of length at most `max_length`, ordered by
/// component index and vertex order of the first occurrence.
pub fn enumerate_pieces(presentation: &GraphicalPresentation, max_length: usize) -> Result<Vec<Piece>> {
    Ok(PieceContext::new(presentation)?.maximal_pieces(max_length))
}

/// Default enumeration bound: `ceil(λ · max girth)`.
pub fn default_piece_bound(presentation: &GraphicalPresentation) -> usize {
    presentation
        .components()
        .iter()
        .filter_map(|c| c.girth().finite())
        .map(|g| presentation.lambda().forbidden_length(g))
        .max()
        .unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CPrimeWitness {
    pub piece: Piece,
    /// Component the violating piece appears in (its first occurrence).
    pub component: usize,
    pub girth: usize,
    /// `λ · girth` as an exact fraction.
    pub bound: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CPrimeVerdict {
    pub lambda: Lambda,
    pub pass: bool,
    pub witness: Option<CPrimeWitness>,
    pub warnings: Vec<String>,
}

fn tree_warnings(presentation: &GraphicalPresentation, ctx: &PieceContext<'_>) -> Vec<String> {
    (0..presentation.components().len())
        .filter(|&i| ctx.girth(i).is_none())
        .map(|i| {
            format!(
                "component {i} ({:?}) is a tree; the girth bound is vacuous",
                presentation.component(i).name()
            )
        })
        .collect()
}

/// Decides `C'(λ)` with the presentation's `λ`: every piece appearing in
/// `Θ_i` is strictly shorter than `λ·girth(Θ_i)`.
pub fn check_cprime(presentation: &GraphicalPresentation) -> Result<CPrimeVerdict> {
    let ctx = PieceContext::new(presentation)?;
    let lambda = presentation.lambda();
    let warnings = tree_warnings(presentation, &ctx);
    let n = presentation.components().len();
    let forbidden: Vec<Option<usize>> = (0..n)
        .map(|i| ctx.girth(i).map(|g| lambda.forbidden_length(g)))
        .collect();
    let cap = (0..n).filter_map(|i| ctx.girth(i)).max().unwrap_or(0);
    let mut lengths: Vec<usize> = forbidden.iter().flatten().copied().collect();
    lengths.sort_unstable();
    lengths.dedup();

    let mut worst: Option<((usize, usize), (usize, usize), Vec<Letter>)> = None;
    for len in lengths {
        let index = ctx.index(len);
        for (word, occs) in &index {
            if occs.len() < 2 {
                continue;
            }
            for &a in occs {
                if forbidden[a.0] != Some(len) {
                    continue;
                }
                if let Some(&b) = occs.iter().find(|&&b| ctx.is_piece_pair(a, b)) {
                    let candidate = (a, b, word.clone());
                    if worst.as_ref().map_or(true, |w| (w.0, &w.2) > (a, word)) {
                        worst = Some(candidate);
                    }
                }
            }
        }
    }

    let witness = worst.map(|(a, b, word)| {
        let occ_a = ctx.occurrence(a, &word);
        let occ_b = ctx.occurrence(b, &word);
        let mut piece = ctx.extend_maximally(occ_a, occ_b, cap.max(word.len()));
        if piece.first.component != a.0 && piece.second.component == a.0 {
            std::mem::swap(&mut piece.first, &mut piece.second);
            piece.word = piece.first.path.word.clone();
        }
        let girth = ctx.girth(a.0).expect("forbidden lengths come from finite girths");
        CPrimeWitness {
            piece,
            component: a.0,
            girth,
            bound: lambda.scaled(girth),
        }
    });
    Ok(CPrimeVerdict {
        lambda,
        pass: witness.is_none(),
        witness,
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongVerdict {
    pub lambda: Lambda,
    pub pass: bool,
    /// Component whose long path repeats, and both occurrences.
    pub witness: Option<(usize, Occurrence, Occurrence)>,
    pub warnings: Vec<String>,
}

/// Every path of length `>= λ·girth(Θ_i)` in a subject component `Θ_i` must
/// have a label word read by no other path anywhere in the presentation.
/// `subjects = None` checks every component.
pub fn check_strong_condition(
    presentation: &GraphicalPresentation,
    subjects: Option<&[usize]>,
) -> Result<StrongVerdict> {
    let ctx = PieceContext::new(presentation)?;
    let lambda = presentation.lambda();
    let all: Vec<usize> = (0..presentation.components().len()).collect();
    let subjects = subjects.unwrap_or(&all);
    let warnings = tree_warnings(presentation, &ctx)
        .into_iter()
        .filter(|w| subjects.iter().any(|i| w.starts_with(&format!("component {i} "))))
        .collect();

    let mut lengths: Vec<(usize, usize)> = subjects
        .iter()
        .filter_map(|&i| ctx.girth(i).map(|g| (lambda.forbidden_length(g), i)))
        .collect();
    lengths.sort_unstable();

    let mut worst: Option<((usize, usize), (usize, usize), Vec<Letter>)> = None;
    let mut cached: Option<(usize, WordIndex)> = None;
    for (len, subject) in lengths {
        if cached.as_ref().map(|c| c.0) != Some(len) {
            cached = Some((len, ctx.index(len)));
        }
        let index = &cached.as_ref().expect("just filled").1;
        for (word, occs) in index {
            if occs.len() < 2 {
                continue;
            }
            for &a in occs.iter().filter(|a| a.0 == subject) {
                let b = *occs.iter().find(|&&b| b != a).expect("at least two occurrences");
                if worst.as_ref().map_or(true, |w| (w.0, &w.2) > (a, word)) {
                    worst = Some((a, b, word.clone()));
                }
            }
        }
    }
    let witness = worst.map(|(a, b, word)| (a.0, ctx.occurrence(a, &word), ctx.occurrence(b, &word)));
    Ok(StrongVerdict {
        lambda,
        pass: witness.is_none(),
        witness,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::graph::build::{cycle, path};

    fn hexagon() -> (Alphabet, LabelledGraph) {
        let s = Alphabet::new(["a", "b"]).unwrap();
        let g = cycle("hex", &s, &s.parse_word("aaaaaa").unwrap());
        (s, g)
    }

    #[test]
    fn rotations_of_hexagon() {
        let (_, g) = hexagon();
        let autos = automorphisms(&g).unwrap();
        assert_eq!(autos.len(), 6);
        assert!(automorphism_orbits(&g).unwrap().iter().all(|&o| o == 0));
    }

    #[test]
    fn rigid_labellings() {
        let s = Alphabet::new(["a", "b", "c"]).unwrap();
        let tri = cycle("tri", &s, &s.parse_word("abc").unwrap());
        assert_eq!(automorphisms(&tri).unwrap().len(), 1);
        let p = path("p", &s, &s.parse_word("ab").unwrap());
        assert_eq!(automorphisms(&p).unwrap(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        let s = Alphabet::new(["a", "b"]).unwrap();
        let g = crate::graph::build::from_triples(
            "two",
            &s,
            4,
            &[(0, 1, Letter::generator(0)), (2, 3, Letter::generator(0))],
        );
        assert!(automorphisms(&g).is_err());
    }

    #[test]
    fn duplicate_components_share_the_whole_cycle() {
        let s = Alphabet::new(["a", "b", "c", "d", "e", "f"]).unwrap();
        let w = s.parse_word("abcdef").unwrap();
        let pres = GraphicalPresentation::new(
            s.clone(),
            vec![cycle("x", &s, &w), cycle("y", &s, &w)],
            Lambda::one_sixth(),
        )
        .unwrap();
        let pieces = enumerate_pieces(&pres, 6).unwrap();
        assert!(pieces.iter().any(|p| p.len() == 6));
        assert!(pieces.iter().all(|p| p.first.path.word == p.second.path.word));

        let verdict = check_cprime(&pres).unwrap();
        assert!(!verdict.pass);
        let witness = verdict.witness.unwrap();
        assert_eq!(witness.piece.len(), 6);
        assert_eq!(witness.bound, "1");

        let strong = check_strong_condition(&pres, None).unwrap();
        assert!(!strong.pass);
    }

    #[test]
    fn disjoint_alphabets_have_no_pieces() {
        let s = Alphabet::new(["a", "b", "c", "d"]).unwrap();
        let pres = GraphicalPresentation::new(
            s.clone(),
            vec![
                cycle("x", &s, &s.parse_word("abab'").unwrap()),
                cycle("y", &s, &s.parse_word("cdcd'").unwrap()),
            ],
            Lambda::one_twenty_fourth(),
        )
        .unwrap();
        let pieces = enumerate_pieces(&pres, 4).unwrap();
        assert!(pieces.iter().all(|p| p.first.component == p.second.component));
        let cross: Vec<_> = pieces.iter().filter(|p| p.first.component != p.second.component).collect();
        assert!(cross.is_empty());
    }

    #[test]
    fn one_shared_edge_against_girth_25() {
        // 1 < 25/24, so a single shared labelled edge is allowed
        let s = Alphabet::numbered(49);
        let w1: Word = (0..25).map(Letter::generator).collect();
        let w2: Word = std::iter::once(Letter::generator(0))
            .chain((25..49).map(Letter::generator))
            .collect();
        let pres = GraphicalPresentation::new(
            s.clone(),
            vec![cycle("x", &s, &w1), cycle("y", &s, &w2)],
            Lambda::one_twenty_fourth(),
        )
        .unwrap();
        let verdict = check_cprime(&pres).unwrap();
        assert!(verdict.pass);
        let pieces = enumerate_pieces(&pres, 3).unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].len(), 1);
    }

    #[test]
    fn distinct_letter_hexagon_passes_strong_condition() {
        let s = Alphabet::new(["a", "b", "c", "d", "e", "f"]).unwrap();
        let pres = GraphicalPresentation::new(
            s.clone(),
            vec![cycle("x", &s, &s.parse_word("abcdef").unwrap())],
            Lambda::new(1, 3).unwrap(),
        )
        .unwrap();
        assert!(check_strong_condition(&pres, None).unwrap().pass);
        assert!(check_cprime(&pres).unwrap().pass);
    }

    #[test]
    fn repeated_word_in_one_component_fails_strong_condition() {
        let s = Alphabet::new(["a", "b", "c", "d"]).unwrap();
        // "ab" is read at two disjoint places of a 12-cycle; λ·12 = 2
        let pres = GraphicalPresentation::new(
            s.clone(),
            vec![cycle("x", &s, &s.parse_word("abcdcdabdcdc").unwrap())],
            Lambda::one_sixth(),
        )
        .unwrap();
        let v = check_strong_condition(&pres, None).unwrap();
        assert!(!v.pass);
        let (_, a, b) = v.witness.unwrap();
        assert_eq!(a.path.word, b.path.word);
        assert_ne!(a.path.start(), b.path.start());
    }

    #[test]
    fn tree_component_warns() {
        let s = Alphabet::new(["a", "b"]).unwrap();
        let pres = GraphicalPresentation::new(
            s.clone(),
            vec![path("t", &s, &s.parse_word("ab").unwrap())],
            Lambda::one_sixth(),
        )
        .unwrap();
        let v = check_cprime(&pres).unwrap();
        assert!(v.pass);
        assert_eq!(v.warnings.len(), 1);
    }
}
