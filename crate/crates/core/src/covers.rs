//! Finite covers: Z/2-homology covers, their iterates, and covers pulled
//! back from permutation actions of the free group.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{GscError, Result};
use crate::graph::LabelledGraph;
use crate::perm::LetterAction;
use crate::smallcancel::extend_automorphism;

/// How one stage of a (possibly composite) cover was produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoverStage {
    Z2Homology { rank: usize },
    Action { points: usize, generators: Vec<Vec<u32>>, full: bool },
    Kernel { points: usize, generators: Vec<Vec<u32>> },
}

/// A covering map `total -> base` given by its vertex map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub total: LabelledGraph,
    pub base: LabelledGraph,
    pub projection: Vec<usize>,
    pub degree: usize,
    pub stages: Vec<CoverStage>,
}

impl Cover {
    /// The identity cover of `graph`.
    pub fn identity(graph: &LabelledGraph) -> Cover {
        Cover {
            total: graph.clone(),
            base: graph.clone(),
            projection: (0..graph.vertex_count()).collect(),
            degree: 1,
            stages: Vec::new(),
        }
    }

    /// `outer` covers `self.total`; the result covers `self.base`.
    pub fn then(&self, outer: &Cover) -> Cover {
        let projection = outer.projection.iter().map(|&v| self.projection[v]).collect();
        let mut stages = self.stages.clone();
        stages.extend(outer.stages.iter().cloned());
        Cover {
            total: outer.total.clone(),
            base: self.base.clone(),
            projection,
            degree: self.degree * outer.degree,
            stages,
        }
    }

    /// Total vertices over base vertex `b`, in index order.
    pub fn fiber(&self, b: usize) -> Vec<usize> {
        (0..self.projection.len()).filter(|&v| self.projection[v] == b).collect()
    }

    /// Checks the covering property: every base dart lifts uniquely at every
    /// total vertex, labels are induced, and fibers have `degree` elements.
    pub fn verify(&self) -> Result<()> {
        let fail = |m: String| Err(GscError::Precondition(m));
        if self.projection.len() != self.total.vertex_count() {
            return fail("projection does not cover every total vertex".into());
        }
        let mut fiber_size = vec![0usize; self.base.vertex_count()];
        for v in 0..self.total.vertex_count() {
            let b = self.projection[v];
            if b >= self.base.vertex_count() {
                return fail(format!("projection of {v} is out of range"));
            }
            fiber_size[b] += 1;
            let up = self.total.darts(v);
            let down = self.base.darts(b);
            if up.len() != down.len() {
                return fail(format!(
                    "{} has degree {} but projects to {} of degree {}",
                    self.total.vertex_name(v),
                    up.len(),
                    self.base.vertex_name(b),
                    down.len()
                ));
            }
            for (u, d) in up.iter().zip(down) {
                if u.label != d.label || self.projection[u.to] != d.to {
                    return fail(format!(
                        "edges at {} do not map bijectively",
                        self.total.vertex_name(v)
                    ));
                }
            }
        }
        if let Some(b) = fiber_size.iter().position(|&s| s != self.degree) {
            return fail(format!(
                "fiber over {} has {} vertices, expected {}",
                self.base.vertex_name(b),
                fiber_size[b],
                self.degree
            ));
        }
        Ok(())
    }
}

/// The cover of a connected graph corresponding to the kernel of
/// `π1 -> H1(-; Z/2)`.
pub fn z2_homology_cover(graph: &LabelledGraph) -> Result<Cover> {
    z2_homology_cover_within(graph, usize::MAX)
}

fn z2_homology_cover_within(graph: &LabelledGraph, max_vertices: usize) -> Result<Cover> {
    graph.require_connected()?;
    let rank = graph.cycle_rank();
    let n = graph.vertex_count();
    if rank >= usize::BITS as usize - 1 || n.saturating_mul(1usize << rank) > max_vertices {
        return Err(GscError::Budget(format!(
            "Z2-homology cover of {:?} has {} x 2^{} vertices, limit {}",
            graph.name(),
            n,
            rank,
            max_vertices
        )));
    }
    if rank == 0 {
        let mut cover = Cover::identity(graph);
        cover.stages.push(CoverStage::Z2Homology { rank });
        return Ok(cover);
    }
    let forest = graph.spanning_forest();
    let mut flip = vec![0usize; graph.edge_count()];
    for (j, &e) in forest.non_tree.iter().enumerate() {
        flip[e] = 1 << j;
    }
    let degree = 1usize << rank;
    let bits = |x: usize| -> String {
        (0..rank).map(|j| if x >> j & 1 == 1 { '1' } else { '0' }).collect()
    };
    let id = |v: usize, x: usize| v * degree + x;
    let mut names = Vec::with_capacity(n * degree);
    for v in 0..n {
        for x in 0..degree {
            names.push(format!("{}|{}", graph.vertex_name(v), bits(x)));
        }
    }
    let mut edges = Vec::with_capacity(graph.edge_count() * degree);
    for (i, e) in graph.edges().iter().enumerate() {
        for x in 0..degree {
            edges.push((id(e.tail, x), id(e.head, x ^ flip[i]), e.label));
        }
    }
    finish(graph, names, edges, degree, CoverStage::Z2Homology { rank }, |i| i / degree)
}

/// Builds the total graph and a projection consistent with its sorted vertex
/// order. `base_of` maps construction indices to base vertices.
fn finish(
    base: &LabelledGraph,
    names: Vec<String>,
    edges: Vec<(usize, usize, crate::alphabet::Letter)>,
    degree: usize,
    stage: CoverStage,
    base_of: impl Fn(usize) -> usize,
) -> Result<Cover> {
    let mut projection = vec![0; names.len()];
    let total = LabelledGraph::from_parts(
        format!("{}~", base.name()),
        base.alphabet().clone(),
        names.clone(),
        edges,
    );
    for (i, name) in names.iter().enumerate() {
        projection[total.vertex_index(name)?] = base_of(i);
    }
    Ok(Cover {
        total,
        base: base.clone(),
        projection,
        degree,
        stages: vec![stage],
    })
}

/// `k` successive Z/2-homology covers. Fails with a budget error naming the
/// stage that would exceed `max_vertices`.
pub fn iterate_z2_cover(graph: &LabelledGraph, k: usize, max_vertices: usize) -> Result<Cover> {
    let mut cover = Cover::identity(graph);
    for stage in 1..=k {
        let next = z2_homology_cover_within(&cover.total, max_vertices).map_err(|e| match e {
            GscError::Budget(m) => GscError::Budget(format!("stage {stage} of {k}: {m}")),
            other => other,
        })?;
        cover = cover.then(&next);
    }
    Ok(cover)
}

/// Iterates Z/2-homology covers until `accept` holds, checking the input
/// itself first. Returns the cover and the number of stages taken, or a
/// budget error if `max_stages` or `max_vertices` is reached first.
pub fn iterate_z2_until(
    graph: &LabelledGraph,
    mut accept: impl FnMut(&Cover) -> bool,
    max_stages: usize,
    max_vertices: usize,
) -> Result<(Cover, usize)> {
    let mut cover = Cover::identity(graph);
    for stage in 0..=max_stages {
        if accept(&cover) {
            return Ok((cover, stage));
        }
        if stage == max_stages {
            break;
        }
        let next = z2_homology_cover_within(&cover.total, max_vertices).map_err(|e| match e {
            GscError::Budget(m) => GscError::Budget(format!("stage {}: {m}", stage + 1)),
            other => other,
        })?;
        cover = cover.then(&next);
    }
    Err(GscError::Budget(format!(
        "predicate still false after {max_stages} Z2-homology stages"
    )))
}

/// Pullback of the action: vertices `(u, x)`, and an edge labelled `s`
/// from `(u, x)` to `(v, x·s)` for every base edge `u -s-> v`. With
/// `full == false` only the component of `(0, 0)` is kept.
pub fn cover_from_action(graph: &LabelledGraph, action: &LetterAction, full: bool) -> Result<Cover> {
    if action.generator_count() < graph.alphabet().len() {
        return Err(GscError::Precondition(format!(
            "action has {} generators, alphabet has {}",
            action.generator_count(),
            graph.alphabet().len()
        )));
    }
    if !full {
        graph.require_connected()?;
    }
    let n = graph.vertex_count();
    let points = action.degree();
    let width = points.saturating_sub(1).to_string().len();
    let id = |v: usize, x: usize| v * points + x;
    let stage = CoverStage::Action {
        points,
        generators: action
            .generator_images()
            .iter()
            .map(|p| p.images().to_vec())
            .collect(),
        full,
    };

    let keep: Vec<bool> = if full {
        vec![true; n * points]
    } else {
        let mut seen = vec![false; n * points];
        let mut queue = VecDeque::from([(0usize, 0usize)]);
        seen[id(0, 0)] = true;
        while let Some((u, x)) = queue.pop_front() {
            for d in graph.darts(u) {
                let y = action.image(d.label).apply(x);
                if !seen[id(d.to, y)] {
                    seen[id(d.to, y)] = true;
                    queue.push_back((d.to, y));
                }
            }
        }
        seen
    };

    let mut local = vec![usize::MAX; n * points];
    let mut names = Vec::new();
    let mut base_of = Vec::new();
    for v in 0..n {
        for x in 0..points {
            if keep[id(v, x)] {
                local[id(v, x)] = names.len();
                names.push(format!("{}@{:0width$}", graph.vertex_name(v), x));
                base_of.push(v);
            }
        }
    }
    let mut edges = Vec::new();
    for e in graph.edges() {
        let p = action.image(e.label);
        for x in 0..points {
            let (a, b) = (id(e.tail, x), id(e.head, p.apply(x)));
            if keep[a] {
                edges.push((local[a], local[b], e.label));
            }
        }
    }
    let degree = if full {
        points
    } else {
        base_of.iter().filter(|&&b| b == 0).count()
    };
    finish(graph, names, edges, degree, stage, |i| base_of[i])
}

/// The connected cover whose closed paths are exactly the closed paths of
/// `graph` whose words act trivially: vertices `(v, g)` with `g` in the
/// permutation group generated by the action, reached from `(0, 1)`. It is
/// the basepoint component of the pullback of the regular representation,
/// built without enumerating the group.
pub fn kernel_cover(graph: &LabelledGraph, action: &LetterAction, max_vertices: usize) -> Result<Cover> {
    use std::collections::HashMap;
    graph.require_connected()?;
    let identity = crate::perm::Perm::identity(action.degree());
    let mut elements: HashMap<crate::perm::Perm, usize> = HashMap::from([(identity.clone(), 0)]);
    let mut perms = vec![identity];
    let mut node: HashMap<(usize, usize), usize> = HashMap::from([((0, 0), 0)]);
    let mut order = vec![(0usize, 0usize)];
    let mut i = 0;
    while i < order.len() {
        let (u, g) = order[i];
        for d in graph.darts(u) {
            let h = perms[g].then(action.image(d.label));
            let id = match elements.get(&h) {
                Some(&id) => id,
                None => {
                    perms.push(h.clone());
                    elements.insert(h, perms.len() - 1);
                    perms.len() - 1
                }
            };
            if !node.contains_key(&(d.to, id)) {
                if order.len() >= max_vertices {
                    return Err(GscError::Budget(format!(
                        "kernel cover of {:?} exceeds {max_vertices} vertices",
                        graph.name()
                    )));
                }
                node.insert((d.to, id), order.len());
                order.push((d.to, id));
            }
        }
        i += 1;
    }
    let width = perms.len().saturating_sub(1).to_string().len();
    let names = order
        .iter()
        .map(|&(v, g)| format!("{}@{:0width$}", graph.vertex_name(v), g))
        .collect();
    let mut edges = Vec::new();
    for &(u, g) in &order {
        for d in graph.darts(u).iter().filter(|d| !d.label.is_inverse()) {
            let h = elements[&perms[g].then(action.image(d.label))];
            edges.push((node[&(u, g)], node[&(d.to, h)], d.label));
        }
    }
    let degree = order.iter().filter(|&&(v, _)| v == 0).count();
    let stage = CoverStage::Kernel {
        points: action.degree(),
        generators: action
            .generator_images()
            .iter()
            .map(|p| p.images().to_vec())
            .collect(),
    };
    finish(graph, names, edges, degree, stage, |i| order[i].0)
}

/// Deck group of a cover with connected total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeckReport {
    /// Deck transformations as vertex maps of the total graph.
    pub deck: Vec<Vec<usize>>,
    /// Total vertices over the first base vertex.
    pub fiber: Vec<usize>,
    /// Fiber vertices reachable from `fiber[0]` by a deck transformation.
    pub orbit: Vec<usize>,
    pub is_normal: bool,
}

/// Enumerates label-preserving automorphisms of the total that commute with
/// the projection. Each is fixed by where it sends one vertex, so at most
/// `degree` candidates are tried.
pub fn deck_and_normality(cover: &Cover) -> Result<DeckReport> {
    cover.total.require_connected()?;
    let fiber = cover.fiber(cover.projection[0]);
    let start = fiber[0];
    let mut deck = Vec::new();
    for &target in &fiber {
        if let Some(map) = extend_automorphism(&cover.total, start, target) {
            if map.iter().enumerate().all(|(v, &w)| cover.projection[v] == cover.projection[w]) {
                deck.push(map);
            }
        }
    }
    let orbit: Vec<usize> = deck.iter().map(|m| m[start]).collect();
    let is_normal = orbit.len() == fiber.len();
    Ok(DeckReport {
        deck,
        fiber,
        orbit,
        is_normal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::graph::{build, Extent};
    use crate::perm::Perm;

    fn abc() -> Alphabet {
        Alphabet::new(["a", "b", "c"]).unwrap()
    }

    #[test]
    fn z2_cover_of_cycle_doubles_it() {
        let s = abc();
        let tri = build::cycle("t", &s, &s.parse_word("abc").unwrap());
        let c = z2_homology_cover(&tri).unwrap();
        c.verify().unwrap();
        assert_eq!(c.degree, 2);
        assert_eq!(c.total.vertex_count(), 6);
        assert!(c.total.is_connected());
        assert_eq!(c.total.girth(), Extent::Finite(6));
        let d = deck_and_normality(&c).unwrap();
        assert_eq!(d.deck.len(), 2);
        assert!(d.is_normal);
    }

    #[test]
    fn theta_cover_counts() {
        let c = z2_homology_cover(&build::theta()).unwrap();
        c.verify().unwrap();
        assert_eq!((c.degree, c.total.vertex_count(), c.total.edge_count()), (4, 20, 24));
        assert!(c.total.is_connected());
        assert!(deck_and_normality(&c).unwrap().is_normal);
    }

    #[test]
    fn iterates_and_budget() {
        let s = abc();
        let tri = build::cycle("t", &s, &s.parse_word("abc").unwrap());
        let c = iterate_z2_cover(&tri, 2, 1000).unwrap();
        c.verify().unwrap();
        assert_eq!(c.total.girth(), Extent::Finite(12));
        assert_eq!(c.degree, 4);
        assert_eq!(c.stages.len(), 2);
        let err = iterate_z2_cover(&tri, 5, 20).unwrap_err();
        assert!(err.is_budget());
        assert!(err.to_string().contains("stage 3"));
        let path = build::path("p", &s, &s.parse_word("abc").unwrap());
        let c = iterate_z2_cover(&path, 5, 10).unwrap();
        assert_eq!(c.degree, 1);
        assert_eq!(c.total.vertex_count(), 4);
        let (c, stages) = iterate_z2_until(
            &tri,
            |c| c.total.girth().finite().unwrap_or(0) >= 10,
            4,
            1000,
        )
        .unwrap();
        assert_eq!((stages, c.degree), (2, 4));
    }

    #[test]
    fn action_covers() {
        let s = abc();
        let tri = build::cycle("t", &s, &s.parse_word("abc").unwrap());
        let swap = Perm::from_cycles(2, &[&[0, 1]]);
        let act = LetterAction::new(2, vec![swap, Perm::identity(2), Perm::identity(2)]).unwrap();
        let c = cover_from_action(&tri, &act, false).unwrap();
        c.verify().unwrap();
        assert_eq!(c.degree, 2);
        assert_eq!(c.total.girth(), Extent::Finite(6));

        let a = Alphabet::new(["a"]).unwrap();
        let hex = build::cycle("h", &a, &a.parse_word("aaaaaa").unwrap());
        // a^6 acts trivially under a 3-cycle, so the cover is a copy of the base
        let act = LetterAction::new(3, vec![Perm::from_cycles(3, &[&[0, 1, 2]])]).unwrap();
        let c = cover_from_action(&hex, &act, false).unwrap();
        assert_eq!((c.degree, c.total.vertex_count()), (1, 6));
        let c = cover_from_action(&hex, &act, true).unwrap();
        assert_eq!(c.total.component_count(), 3);
        // under a 9-cycle a^6 has order 3
        let nine: Vec<u32> = (0..9).collect();
        let act = LetterAction::new(9, vec![Perm::from_cycles(9, &[&nine])]).unwrap();
        let c = cover_from_action(&hex, &act, false).unwrap();
        c.verify().unwrap();
        assert_eq!((c.degree, c.total.vertex_count()), (3, 18));
        assert_eq!(c.total.girth(), Extent::Finite(18));

        let trivial = LetterAction::trivial(3, 3);
        let c = cover_from_action(&tri, &trivial, false).unwrap();
        assert_eq!(c.degree, 1);
        let c = cover_from_action(&tri, &trivial, true).unwrap();
        c.verify().unwrap();
        assert_eq!((c.degree, c.total.component_count()), (3, 3));
    }

    #[test]
    fn non_normal_action_cover() {
        let theta = build::theta();
        // the two basic loops map to (0 1)(1 2) and (0 1), generating Sym(3)
        let id = Perm::identity(3);
        let act = LetterAction::new(
            3,
            vec![
                Perm::from_cycles(3, &[&[0, 1]]),
                id.clone(),
                Perm::from_cycles(3, &[&[1, 2]]),
                id.clone(),
                id.clone(),
                id,
            ],
        )
        .unwrap();
        let c = cover_from_action(&theta, &act, false).unwrap();
        c.verify().unwrap();
        assert_eq!(c.degree, 3);
        let d = deck_and_normality(&c).unwrap();
        assert!(!d.is_normal);

        let k = kernel_cover(&theta, &act, 10_000).unwrap();
        k.verify().unwrap();
        assert_eq!(k.degree, 6);
        let d = deck_and_normality(&k).unwrap();
        assert!(d.is_normal);
        assert_eq!(d.deck.len(), 6);
        assert!(kernel_cover(&theta, &act, 10).unwrap_err().is_budget());
    }
}
