//! Balls in Cayley graphs and verification of isometric embeddings of
//! relator components.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::alphabet::{Letter, Word};
use crate::error::{GscError, Result};
use crate::group::DehnEngine;

/// A ball around the identity. Elements are stored by shortlex-least normal
/// form, grouped by distance.
#[derive(Clone, Debug)]
pub struct CayleyBall {
    pub radius: usize,
    pub elements: Vec<Word>,
    /// Word-metric distance from the identity.
    pub layer: Vec<usize>,
    /// `adjacency[e][letter code]`: the element `e·letter` if it is in the
    /// ball.
    pub adjacency: Vec<Vec<Option<usize>>>,
    /// Set when the element budget stopped the construction early; only
    /// layers up to `complete_radius` are then complete.
    pub truncated: bool,
    pub complete_radius: usize,
}

impl CayleyBall {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Element reached by reading `word` from the identity, provided every
    /// prefix stays in the ball (always the case when `|word| <= radius`).
    pub fn lookup(&self, word: &Word) -> Option<usize> {
        word.iter()
            .try_fold(0, |e, l| self.adjacency[e][l.code()])
    }

    /// Number of elements at distance at most `r`.
    pub fn count_within(&self, r: usize) -> usize {
        self.layer.iter().filter(|&&d| d <= r).count()
    }

    /// Undirected labelled edges `(u, v, generator)` with `u·generator = v`.
    pub fn edges(&self) -> Vec<(usize, usize, Letter)> {
        let mut out = Vec::new();
        for (u, row) in self.adjacency.iter().enumerate() {
            for (code, v) in row.iter().enumerate() {
                let l = Letter::from_code(code);
                if let (Some(v), false) = (v, l.is_inverse()) {
                    out.push((u, *v, l));
                }
            }
        }
        out
    }
}

/// Breadth-first ball of the group presented by the engine's presentation.
/// Stops with `truncated` set once more than `max_elements` elements would
/// be needed.
pub fn cayley_ball(engine: &DehnEngine, radius: usize, max_elements: usize) -> CayleyBall {
    let alphabet = engine.presentation().alphabet();
    let letters: Vec<Letter> = alphabet.letters().collect();
    let codes = 2 * alphabet.len();
    let mut elements = vec![Word::empty()];
    let mut layer = vec![0usize];
    let mut adjacency: Vec<Vec<Option<usize>>> = vec![vec![None; codes]];
    let mut layer_start = vec![0usize, 1];
    let mut truncated = false;
    let mut complete_radius = 0;
    let mut index: HashMap<Word, usize> = HashMap::from([(Word::empty(), 0)]);
    let mut keys: Vec<Option<Vec<u64>>> = vec![None];

    for d in 0..=radius {
        let (lo, hi) = (layer_start[d], layer_start[d + 1]);
        let older = if d == 0 { 0 } else { layer_start[d - 1] };
        // candidates e·s that do not freely cancel, in shortlex order
        let mut candidates: Vec<(usize, Letter, Word)> = Vec::new();
        for e in lo..hi {
            for &l in &letters {
                let w = &elements[e];
                if w.letters().last() == Some(&l.inverse()) {
                    adjacency[e][l.code()] = index.get(&w.subword(0, w.len() - 1)).copied();
                    continue;
                }
                let mut c = w.clone();
                c.push(l);
                candidates.push((e, l, c));
            }
        }
        // below half the girth distinct reduced words are distinct elements
        let exact = engine.min_girth().is_none_or(|g| 2 * (d + 1) < g);
        // otherwise match against layers d-1 and d, within key buckets
        let mut buckets: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
        if !exact {
            for x in older..hi {
                if keys[x].is_none() {
                    keys[x] = Some(engine.abelian_key(&elements[x]));
                }
                buckets.entry(keys[x].clone().unwrap_or_default()).or_default().push(x);
            }
        }
        let cand_keys: Vec<Vec<u64>> = if exact {
            vec![Vec::new(); candidates.len()]
        } else {
            candidates.par_iter().map(|(_, _, c)| engine.abelian_key(c)).collect()
        };
        let known: Vec<Option<usize>> = if exact {
            candidates.iter().map(|(_, _, c)| index.get(c).copied()).collect()
        } else {
            candidates
                .par_iter()
                .zip(&cand_keys)
                .map(|((_, _, c), key)| {
                    buckets
                        .get(key)?
                        .iter()
                        .copied()
                        .find(|&x| engine.is_equal_unkeyed(c, &elements[x]))
                })
                .collect()
        };
        let fresh: Vec<usize> = (0..candidates.len()).filter(|&k| known[k].is_none()).collect();
        let accept_new = d < radius;
        // among fresh candidates, the first of each class wins
        let first_equal: Vec<Option<usize>> = if accept_new && exact {
            let mut first: HashMap<&Word, usize> = HashMap::new();
            fresh
                .iter()
                .map(|&k| {
                    let j = *first.entry(&candidates[k].2).or_insert(k);
                    (j != k).then_some(j)
                })
                .collect()
        } else if accept_new {
            let mut fresh_buckets: HashMap<&[u64], Vec<usize>> = HashMap::new();
            for &k in &fresh {
                fresh_buckets.entry(&cand_keys[k]).or_default().push(k);
            }
            fresh
                .par_iter()
                .map(|&k| {
                    fresh_buckets[cand_keys[k].as_slice()]
                        .iter()
                        .copied()
                        .take_while(|&j| j < k)
                        .find(|&j| engine.is_equal_unkeyed(&candidates[k].2, &candidates[j].2))
                })
                .collect()
        } else {
            vec![None; fresh.len()]
        };
        let new_count = first_equal.iter().filter(|f| f.is_none()).count();
        if accept_new && elements.len() + new_count > max_elements {
            truncated = true;
            for (k, (e, l, _)) in candidates.iter().enumerate() {
                adjacency[*e][l.code()] = known[k];
            }
            break;
        }
        complete_radius = d;
        let mut slot = vec![usize::MAX; candidates.len()];
        for (k, target) in known.iter().enumerate() {
            if let Some(t) = target {
                slot[k] = *t;
            }
        }
        if accept_new {
            for (pos, &k) in fresh.iter().enumerate() {
                match first_equal[pos] {
                    None => {
                        slot[k] = elements.len();
                        index.insert(candidates[k].2.clone(), elements.len());
                        keys.push((!exact).then(|| cand_keys[k].clone()));
                        elements.push(candidates[k].2.clone());
                        layer.push(d + 1);
                        adjacency.push(vec![None; codes]);
                    }
                    Some(j) => slot[k] = slot[j],
                }
            }
        }
        for (k, (e, l, _)) in candidates.iter().enumerate() {
            if slot[k] != usize::MAX {
                adjacency[*e][l.code()] = Some(slot[k]);
                adjacency[slot[k]][l.inverse().code()] = Some(*e);
            }
        }
        layer_start.push(elements.len());
        if d < radius && layer_start[d + 2] == layer_start[d + 1] {
            // finite group exhausted
            complete_radius = radius;
            break;
        }
    }
    CayleyBall {
        radius,
        elements,
        layer,
        adjacency,
        truncated,
        complete_radius,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingMethod {
    /// Distances read off a Cayley ball.
    Ball,
    /// Pairs with `2·d <= girth_min` need no ball: a nonempty cyclically
    /// reduced trivial word is at least `girth_min` long, so the freely
    /// reduced label of a graph geodesic is a group geodesic.
    LengthGap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingViolation {
    pub u: String,
    pub v: String,
    pub graph_distance: usize,
    pub group_distance: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingReport {
    pub component: usize,
    pub basepoint: String,
    pub radius: usize,
    pub method: EmbeddingMethod,
    pub pairs_checked: usize,
    pub pairs_unchecked: usize,
    pub violations: Vec<EmbeddingViolation>,
}

impl EmbeddingReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// How much of a component must fit in the ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coverage {
    /// Every vertex image must lie in the ball, else the call fails.
    Strict,
    /// Check the pairs within `radius` and count the rest as unchecked.
    Local,
}

/// Compares graph distances in component `component` with group distances
/// for all pairs at graph distance at most `radius`.
pub fn verify_isometric_embedding(
    engine: &DehnEngine,
    component: usize,
    radius: usize,
    max_elements: usize,
    coverage: Coverage,
) -> Result<EmbeddingReport> {
    let pres = engine.presentation();
    let graph = pres
        .components()
        .get(component)
        .ok_or_else(|| GscError::Precondition(format!("no component {component}")))?;
    let basepoint = 0;
    let ecc = graph.eccentricity(basepoint).finite().unwrap_or(usize::MAX);
    if coverage == Coverage::Strict && ecc > radius {
        return Err(GscError::BallTruncated {
            radius,
            elements: 0,
        });
    }
    let ball = cayley_ball(engine, radius, max_elements);
    if ball.truncated && coverage == Coverage::Strict {
        return Err(GscError::BallTruncated {
            radius: ball.complete_radius,
            elements: ball.len(),
        });
    }
    let reach = if ball.truncated { ball.complete_radius } else { radius };
    let n = graph.vertex_count();
    let rows: Vec<(usize, usize, Vec<EmbeddingViolation>)> = (0..n)
        .into_par_iter()
        .map(|u| {
            let dist = graph.bfs(u);
            let mut checked = 0;
            let mut unchecked = 0;
            let mut bad = Vec::new();
            for v in u + 1..n {
                let Some(d) = dist[v] else { continue };
                if d > reach {
                    unchecked += 1;
                    continue;
                }
                let word = geodesic_word(graph, u, v, &dist_to(graph, v));
                let e = ball.lookup(&word).expect("words within the radius stay in the ball");
                checked += 1;
                if ball.layer[e] != d {
                    bad.push(EmbeddingViolation {
                        u: graph.vertex_name(u).to_string(),
                        v: graph.vertex_name(v).to_string(),
                        graph_distance: d,
                        group_distance: ball.layer[e],
                    });
                }
            }
            (checked, unchecked, bad)
        })
        .collect();
    Ok(EmbeddingReport {
        component,
        basepoint: graph.vertex_name(basepoint).to_string(),
        radius,
        method: EmbeddingMethod::Ball,
        pairs_checked: rows.iter().map(|r| r.0).sum(),
        pairs_unchecked: rows.iter().map(|r| r.1).sum(),
        violations: rows.into_iter().flat_map(|r| r.2).collect(),
    })
}

/// Certifies pairs through the length gap instead of a ball; pairs farther
/// apart than `girth_min / 2` are reported unchecked.
pub fn verify_embedding_by_length_gap(engine: &DehnEngine, component: usize) -> Result<EmbeddingReport> {
    let pres = engine.presentation();
    let graph = pres
        .components()
        .get(component)
        .ok_or_else(|| GscError::Precondition(format!("no component {component}")))?;
    let reach = engine.min_girth().map_or(usize::MAX, |g| g / 2);
    let n = graph.vertex_count();
    let mut checked = 0;
    let mut unchecked = 0;
    for u in 0..n {
        let dist = graph.bfs(u);
        for d in dist.iter().skip(u + 1).flatten() {
            if *d <= reach {
                checked += 1;
            } else {
                unchecked += 1;
            }
        }
    }
    Ok(EmbeddingReport {
        component,
        basepoint: graph.vertex_name(0).to_string(),
        radius: reach,
        method: EmbeddingMethod::LengthGap,
        pairs_checked: checked,
        pairs_unchecked: unchecked,
        violations: Vec::new(),
    })
}

fn dist_to(graph: &crate::graph::LabelledGraph, v: usize) -> Vec<usize> {
    graph
        .bfs(v)
        .into_iter()
        .map(|d| d.unwrap_or(usize::MAX))
        .collect()
}

fn geodesic_word(graph: &crate::graph::LabelledGraph, from: usize, to: usize, dist: &[usize]) -> Word {
    let mut cur = from;
    let mut word = Word::empty();
    while cur != to {
        let d = graph
            .darts(cur)
            .iter()
            .find(|d| dist[d.to] + 1 == dist[cur])
            .expect("distance decreases along some dart");
        word.push(d.label);
        cur = d.to;
    }
    word
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::graph::build;
    use crate::presentation::{GraphicalPresentation, Lambda};

    #[test]
    fn free_ball_sizes() {
        let s = Alphabet::new(["a", "b"]).unwrap();
        let e = DehnEngine::new(&GraphicalPresentation::free(s)).unwrap();
        let b = cayley_ball(&e, 2, 1000);
        assert_eq!(b.len(), 17);
        assert!(!b.truncated);
        let b = cayley_ball(&e, 3, 20);
        assert!(b.truncated);
        assert_eq!((b.complete_radius, b.len()), (1, 17));
    }

    #[test]
    fn cyclic_group_ball() {
        let a = Alphabet::new(["a"]).unwrap();
        let hex = build::cycle("h", &a, &a.parse_word("aaaaaa").unwrap());
        let p = GraphicalPresentation::new(a.clone(), vec![hex], Lambda::one_sixth()).unwrap();
        let e = DehnEngine::new(&p).unwrap();
        let b = cayley_ball(&e, 3, 1000);
        assert_eq!(b.len(), 6);
        assert_eq!(b.layer.iter().filter(|&&d| d == 3).count(), 1);
        let b = cayley_ball(&e, 10, 1000);
        assert_eq!(b.len(), 6);
        for row in &b.adjacency {
            assert!(row.iter().all(|x| x.is_some()));
        }
        let r = verify_isometric_embedding(&e, 0, 3, 1000, Coverage::Strict).unwrap();
        assert!(r.pass());
        assert_eq!(r.pairs_checked, 15);
    }

    #[test]
    fn triangle_ball_and_embedding() {
        let s = Alphabet::new(["a", "b", "c"]).unwrap();
        let t = build::cycle("t", &s, &s.parse_word("abc").unwrap());
        let p = GraphicalPresentation::new(s.clone(), vec![t], Lambda::one_sixth()).unwrap();
        let e = DehnEngine::new(&p).unwrap();
        let b = cayley_ball(&e, 1, 1000);
        assert_eq!(b.len(), 7);
        let ab = b.lookup(&s.parse_word("ab").unwrap());
        assert_eq!(ab, b.lookup(&s.parse_word("c'").unwrap()));
        assert!(verify_isometric_embedding(&e, 0, 0, 1000, Coverage::Strict).is_err());
        let r = verify_isometric_embedding(&e, 0, 1, 1000, Coverage::Strict).unwrap();
        assert!(r.pass());
    }

    #[test]
    fn length_gap_matches_ball_on_a_long_cycle() {
        let s = Alphabet::numbered(6);
        let w: Word = s.generators().collect();
        let c = build::cycle("c", &s, &w);
        let p = GraphicalPresentation::new(s.clone(), vec![c], Lambda::one_sixth()).unwrap();
        let e = DehnEngine::new(&p).unwrap();
        let gap = verify_embedding_by_length_gap(&e, 0).unwrap();
        let ball = verify_isometric_embedding(&e, 0, 3, 1_000_000, Coverage::Strict).unwrap();
        assert!(ball.pass());
        assert_eq!(gap.pairs_checked, ball.pairs_checked);
        assert_eq!(gap.pairs_unchecked, 0);
    }
}
