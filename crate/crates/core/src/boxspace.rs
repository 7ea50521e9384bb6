//! Cayley graphs of finite quotients and box-space diagnostics.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{GscError, Result};
use crate::graph::{Extent, LabelledGraph};
use crate::quotients::{FiniteQuotient, QuotientTower};

/// Right Cayley graph of the permutation group generated by the letter
/// images, on its elements in breadth-first order. Generators acting as
/// involutions give a single undirected edge per pair; the labelled graph
/// then records an involution defect, which the metrics below ignore.
pub fn quotient_cayley_graph(quotient: &FiniteQuotient, max_order: usize) -> Result<LabelledGraph> {
    let action = &quotient.action;
    let elements = action.closure(max_order).ok_or_else(|| {
        GscError::Budget(format!("generated group has more than {max_order} elements"))
    })?;
    let index: std::collections::HashMap<_, usize> =
        elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let width = elements.len().saturating_sub(1).to_string().len();
    let names = (0..elements.len()).map(|i| format!("g{i:0width$}")).collect();
    let gens = action.generator_images();
    let alphabet = crate::alphabet::Alphabet::numbered(gens.len());
    let mut edges = Vec::new();
    for (i, e) in elements.iter().enumerate() {
        for (k, g) in gens.iter().enumerate() {
            edges.push((i, index[&e.then(g)], crate::alphabet::Letter::generator(k)));
        }
    }
    Ok(LabelledGraph::from_parts(
        format!("Cay({})", quotient.source),
        alphabet,
        names,
        edges,
    ))
}

/// Symmetric adjacency matrix with one entry per stored edge; a loop adds 2
/// to the diagonal.
pub fn adjacency_matrix(graph: &LabelledGraph) -> DMatrix<f64> {
    let n = graph.vertex_count();
    let mut a = DMatrix::zeros(n, n);
    for e in graph.edges() {
        if e.tail == e.head {
            a[(e.tail, e.tail)] += 2.0;
        } else {
            a[(e.tail, e.head)] += 1.0;
            a[(e.head, e.tail)] += 1.0;
        }
    }
    a
}

/// Adjacency eigenvalues in decreasing order.
pub fn adjacency_spectrum(graph: &LabelledGraph) -> Vec<f64> {
    let eig = SymmetricEigen::new(adjacency_matrix(graph));
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// Row sums of the adjacency matrix when they are all equal.
pub fn regular_degree(graph: &LabelledGraph) -> Option<usize> {
    let a = adjacency_matrix(graph);
    let sums: Vec<usize> = (0..a.nrows()).map(|r| a.row(r).sum() as usize).collect();
    let first = *sums.first()?;
    sums.iter().all(|&s| s == first).then_some(first)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoxLevel {
    pub level: usize,
    pub degree_n: usize,
    pub order: usize,
    pub regular_degree: Option<usize>,
    pub girth: Extent,
    pub diameter: Extent,
    pub spectral_gap: Option<f64>,
    pub eigenvalues: Vec<f64>,
    /// Position of this level in the coarse disjoint union.
    pub offset: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoxSpaceReport {
    pub levels: Vec<BoxLevel>,
}

impl BoxSpaceReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("level,n,order,degree,girth,diameter,spectral_gap,offset\n");
        for l in &self.levels {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                l.level,
                l.degree_n,
                l.order,
                l.regular_degree.map_or(String::new(), |d| d.to_string()),
                l.girth,
                l.diameter,
                l.spectral_gap.map_or(String::new(), |g| format!("{g:.12}")),
                l.offset
            ));
        }
        out
    }
}

/// Girth, diameter and adjacency spectrum of every level's quotient Cayley
/// graph. Level `i + 1` starts `max(max diameter so far, i + 1)` past the
/// end of level `i`.
pub fn box_space(tower: &QuotientTower, max_order: usize) -> Result<BoxSpaceReport> {
    let mut levels = Vec::new();
    let mut offset = 0;
    let mut widest = 0;
    for (idx, level) in tower.levels.iter().enumerate() {
        let graph = quotient_cayley_graph(&level.quotient, max_order)?;
        let eigenvalues = adjacency_spectrum(&graph);
        let degree = regular_degree(&graph);
        let spectral_gap = match (eigenvalues.first(), eigenvalues.get(1)) {
            (Some(a), Some(b)) => Some(a - b),
            _ => None,
        };
        let diameter = graph.diameter();
        levels.push(BoxLevel {
            level: idx + 1,
            degree_n: level.quotient.degree(),
            order: graph.vertex_count(),
            regular_degree: degree,
            girth: graph.girth(),
            diameter,
            spectral_gap,
            eigenvalues,
            offset,
        });
        let d = diameter.finite().unwrap_or(0);
        widest = widest.max(d);
        offset += d + widest.max(idx + 2);
    }
    Ok(BoxSpaceReport { levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{LetterAction, Perm};

    fn quotient(n: usize, gens: Vec<Perm>) -> FiniteQuotient {
        FiniteQuotient {
            action: LetterAction::new(n, gens).unwrap(),
            source: "test".into(),
        }
    }

    #[test]
    fn four_cycle() {
        let q = quotient(4, vec![Perm::from_cycles(4, &[&[0, 1, 2, 3]])]);
        let g = quotient_cayley_graph(&q, 100).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.girth(), Extent::Finite(4));
        let spec = adjacency_spectrum(&g);
        for (x, y) in spec.iter().zip([2.0, 0.0, 0.0, -2.0]) {
            assert!((x - y).abs() < 1e-9);
        }
        assert_eq!(regular_degree(&g), Some(2));
    }

    #[test]
    fn sym3_by_transpositions() {
        let q = quotient(
            3,
            vec![Perm::from_cycles(3, &[&[0, 1]]), Perm::from_cycles(3, &[&[1, 2]])],
        );
        let g = quotient_cayley_graph(&q, 100).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (6, 6));
        assert_eq!(g.girth(), Extent::Finite(6));
        assert!(quotient_cayley_graph(&q, 5).unwrap_err().is_budget());
    }

    #[test]
    fn trivial_image() {
        let q = quotient(1, vec![Perm::identity(1)]);
        let g = quotient_cayley_graph(&q, 100).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.diameter(), Extent::Finite(0));
    }
}
