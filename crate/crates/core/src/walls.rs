//! Walls in covers given by preimages of base edges, and wall-distance
//! diagnostics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::covers::Cover;
use crate::error::{GscError, Result};
use crate::graph::LabelledGraph;

/// Fixed seed for pair sampling in [`walling_diagnostics`].
pub const SAMPLE_SEED: u64 = 0x5741_4c4c;
pub const EXHAUSTIVE_LIMIT: usize = 200;
pub const SAMPLE_PAIRS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    /// Edge indices of the host, sorted.
    pub edges: Vec<usize>,
    /// Side of every host vertex; the side containing vertex 0 is `false`.
    pub side: Vec<bool>,
}

impl Wall {
    pub fn sides(&self) -> (Vec<usize>, Vec<usize>) {
        let (b, a): (Vec<usize>, Vec<usize>) = (0..self.side.len()).partition(|&v| self.side[v]);
        (a, b)
    }

    pub fn separates(&self, u: usize, v: usize) -> bool {
        self.side[u] != self.side[v]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WallCheck {
    Valid(Wall),
    Invalid { component_count: usize },
}

/// Removes the interiors of `edges` and counts what is left. Valid iff two
/// components remain and every removed edge joins them.
pub fn verify_wall(host: &LabelledGraph, edges: &[usize]) -> Result<WallCheck> {
    let m = host.edge_count();
    let mut removed = vec![false; m];
    for &e in edges {
        if e >= m {
            return Err(GscError::UnknownEdge(format!("#{e}"), String::new()));
        }
        removed[e] = true;
    }
    let n = host.vertex_count();
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
            for d in host.darts(u) {
                if !removed[d.edge] && comp[d.to] == usize::MAX {
                    comp[d.to] = count;
                    stack.push(d.to);
                }
            }
        }
        count += 1;
    }
    let crossing = edges.iter().all(|&e| {
        let edge = host.edges()[e];
        comp[edge.tail] != comp[edge.head]
    });
    if count != 2 || !crossing {
        return Ok(WallCheck::Invalid {
            component_count: count,
        });
    }
    let mut sorted = edges.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    Ok(WallCheck::Valid(Wall {
        edges: sorted,
        side: comp.iter().map(|&c| c != comp[0]).collect(),
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WallFailure {
    pub base_edge: usize,
    pub component_count: usize,
}

#[derive(Clone, Debug)]
pub struct WallSystem {
    pub host: LabelledGraph,
    pub walls: Vec<Wall>,
    /// Base edge inducing each wall.
    pub provenance: Vec<usize>,
    pub failures: Vec<WallFailure>,
}

impl WallSystem {
    /// Number of walls separating `u` and `v`.
    pub fn distance(&self, u: usize, v: usize) -> usize {
        self.walls.iter().filter(|w| w.separates(u, v)).count()
    }
}

/// One candidate wall per base edge: its full preimage in the total graph.
pub fn walls_from_cover(cover: &Cover) -> WallSystem {
    let host = &cover.total;
    let base = &cover.base;
    let mut preimage: Vec<Vec<usize>> = vec![Vec::new(); base.edge_count()];
    for (i, e) in host.edges().iter().enumerate() {
        let (bt, bh) = (cover.projection[e.tail], cover.projection[e.head]);
        let found = base.darts(bt).iter().find(|d| d.to == bh && d.label == e.label);
        if let Some(d) = found {
            preimage[d.edge].push(i);
        }
    }
    let checks: Vec<WallCheck> = preimage
        .par_iter()
        .map(|edges| verify_wall(host, edges).expect("preimage edges belong to the host"))
        .collect();
    let mut walls = Vec::new();
    let mut provenance = Vec::new();
    let mut failures = Vec::new();
    for (base_edge, check) in checks.into_iter().enumerate() {
        match check {
            WallCheck::Valid(w) => {
                walls.push(w);
                provenance.push(base_edge);
            }
            WallCheck::Invalid { component_count } => failures.push(WallFailure {
                base_edge,
                component_count,
            }),
        }
    }
    WallSystem {
        host: host.clone(),
        walls,
        provenance,
        failures,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairSample {
    pub u: usize,
    pub v: usize,
    pub path_distance: usize,
    pub wall_distance: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WallingDiagnostics {
    pub walls: usize,
    pub invalid_candidates: usize,
    pub exhaustive: bool,
    pub pairs: usize,
    pub min_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
    pub mean_ratio: Option<f64>,
    pub min_walls_per_edge: usize,
    pub max_walls_per_edge: usize,
    pub every_edge_on_one_wall: bool,
    #[serde(skip)]
    pub samples: Vec<PairSample>,
}

impl WallingDiagnostics {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("u,v,path_distance,wall_distance,ratio\n");
        for s in &self.samples {
            out.push_str(&format!(
                "{},{},{},{},{:.6}\n",
                s.u,
                s.v,
                s.path_distance,
                s.wall_distance,
                s.wall_distance as f64 / s.path_distance as f64
            ));
        }
        out
    }
}

/// Ratios of wall distance to path distance over all pairs of distinct
/// connected vertices, or over a seeded sample on large hosts.
pub fn walling_diagnostics(system: &WallSystem) -> WallingDiagnostics {
    walling_diagnostics_seeded(system, SAMPLE_SEED)
}

/// As [`walling_diagnostics`], sampling with `seed`.
pub fn walling_diagnostics_seeded(system: &WallSystem, seed: u64) -> WallingDiagnostics {
    let host = &system.host;
    let n = host.vertex_count();
    let exhaustive = n <= EXHAUSTIVE_LIMIT;
    let mut pairs: Vec<(usize, usize)> = if exhaustive {
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..SAMPLE_PAIRS)
            .map(|_| loop {
                let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if u != v {
                    break (u, v);
                }
            })
            .collect()
    };
    pairs.sort_unstable();

    let mut by_source: Vec<(usize, Vec<usize>)> = Vec::new();
    for &(u, v) in &pairs {
        match by_source.last_mut() {
            Some((s, vs)) if *s == u => vs.push(v),
            _ => by_source.push((u, vec![v])),
        }
    }
    let samples: Vec<PairSample> = by_source
        .par_iter()
        .flat_map_iter(|(u, vs)| {
            let dist = host.bfs(*u);
            vs.iter()
                .filter_map(|&v| {
                    dist[v].map(|d| PairSample {
                        u: *u,
                        v,
                        path_distance: d,
                        wall_distance: system.distance(*u, v),
                    })
                })
                .collect::<Vec<_>>()
        })
        .collect();

    let ratios: Vec<f64> = samples
        .iter()
        .map(|s| s.wall_distance as f64 / s.path_distance as f64)
        .collect();
    let mean = (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64);
    let mut per_edge = vec![0usize; host.edge_count()];
    for w in &system.walls {
        for &e in &w.edges {
            per_edge[e] += 1;
        }
    }
    WallingDiagnostics {
        walls: system.walls.len(),
        invalid_candidates: system.failures.len(),
        exhaustive,
        pairs: samples.len(),
        min_ratio: ratios.iter().copied().reduce(f64::min),
        max_ratio: ratios.iter().copied().reduce(f64::max),
        mean_ratio: mean,
        min_walls_per_edge: per_edge.iter().copied().min().unwrap_or(0),
        max_walls_per_edge: per_edge.iter().copied().max().unwrap_or(0),
        every_edge_on_one_wall: per_edge.iter().all(|&c| c == 1),
        samples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::covers::z2_homology_cover;
    use crate::graph::build;

    #[test]
    fn cycle_cover_walls() {
        let s = Alphabet::new(["a", "b", "c", "d", "e"]).unwrap();
        let c5 = build::cycle("c", &s, &s.parse_word("abcde").unwrap());
        let cover = z2_homology_cover(&c5).unwrap();
        let sys = walls_from_cover(&cover);
        assert_eq!(sys.walls.len(), 5);
        assert!(sys.failures.is_empty());
        for w in &sys.walls {
            assert_eq!(w.edges.len(), 2);
            let (a, b) = w.sides();
            assert_eq!((a.len(), b.len()), (5, 5));
        }
        let v0 = cover.total.vertex_index("v000|0").unwrap();
        let anti = cover.total.vertex_index("v000|1").unwrap();
        assert_eq!(cover.total.distance(v0, anti).finite(), Some(5));
        assert_eq!(sys.distance(v0, anti), 5);
        assert_eq!(sys.distance(v0, v0), 0);
        let diag = walling_diagnostics(&sys);
        assert!(diag.exhaustive);
        assert_eq!(diag.pairs, 45);
        assert_eq!(diag.min_ratio, Some(1.0));
        assert!(diag.every_edge_on_one_wall);
    }

    #[test]
    fn identity_covers() {
        let s = Alphabet::new(["a", "b", "c"]).unwrap();
        let tree = build::path("p", &s, &s.parse_word("abc").unwrap());
        let sys = walls_from_cover(&Cover::identity(&tree));
        assert_eq!(sys.walls.len(), 3);
        assert_eq!(sys.distance(0, 1), 1);
        let tri = build::cycle("t", &s, &s.parse_word("abc").unwrap());
        let sys = walls_from_cover(&Cover::identity(&tri));
        assert!(sys.walls.is_empty());
        assert_eq!(sys.failures.len(), 3);
        assert!(sys.failures.iter().all(|f| f.component_count == 1));
    }

    #[test]
    fn verify_on_hexagon() {
        let s = Alphabet::new(["a"]).unwrap();
        let hex = build::cycle("h", &s, &s.parse_word("aaaaaa").unwrap());
        assert_eq!(
            verify_wall(&hex, &[0]).unwrap(),
            WallCheck::Invalid { component_count: 1 }
        );
        let (e0, e3) = (hex.find_edge(0, 1).unwrap(), hex.find_edge(3, 4).unwrap());
        assert!(matches!(verify_wall(&hex, &[e0, e3]).unwrap(), WallCheck::Valid(_)));
        assert!(verify_wall(&hex, &[99]).is_err());
    }
}
