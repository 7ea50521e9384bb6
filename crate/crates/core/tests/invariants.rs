mod oracles;

use gsc_core::alphabet::Word;
use gsc_core::ball::cayley_ball;
use gsc_core::covers::{deck_and_normality, z2_homology_cover};
use gsc_core::graph::build;
use gsc_core::quotients::{search_quotient, SearchBudget};
use gsc_core::smallcancel::check_cprime;
use gsc_core::walls::walls_from_cover;
use gsc_core::{Alphabet, DehnEngine, GraphicalPresentation, Lambda, LabelledGraph, Letter};
use proptest::prelude::*;

fn abc() -> Alphabet {
    Alphabet::new(["a", "b", "c"]).unwrap()
}

fn core_word(raw: &[(usize, bool)]) -> Word {
    let w: Word = raw.iter().map(|&(g, i)| Letter::new(g, i)).collect();
    w.free_reduced().cyclic_core().1
}

fn letters() -> impl Strategy<Value = Vec<(usize, bool)>> {
    prop::collection::vec((0usize..3, any::<bool>()), 3..16)
}

/// A connected graph on `n` vertices with a reduced labelling, or `None`.
fn random_graph(n: usize, extra: &[(usize, usize, usize, bool)]) -> Option<LabelledGraph> {
    let s = abc();
    let mut edges: Vec<(usize, usize, Letter)> = (1..n)
        .map(|v| (v - 1, v, Letter::generator(v % 3)))
        .collect();
    for &(u, v, g, flip) in extra {
        let (u, v) = (u % n, v % n);
        if u == v || edges.iter().any(|e| (e.0, e.1) == (u, v) || (e.0, e.1) == (v, u)) {
            continue;
        }
        edges.push(if flip { (v, u, Letter::generator(g)) } else { (u, v, Letter::generator(g)) });
    }
    let names = (0..n).map(|i| format!("v{i:02}")).collect();
    let g = LabelledGraph::from_parts("random", s, names, edges);
    g.validate().is_ok().then_some(g)
}

fn graphs() -> impl Strategy<Value = Option<LabelledGraph>> {
    (3usize..8, prop::collection::vec((0usize..8, 0usize..8, 0usize..3, any::<bool>()), 1..5))
        .prop_map(|(n, extra)| random_graph(n, &extra))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn z2_cover_preserves_cprime(raw in letters()) {
        let w = core_word(&raw);
        prop_assume!(w.len() >= 3);
        let s = abc();
        let p = GraphicalPresentation::new(s.clone(), vec![build::cycle("r", &s, &w)], Lambda::one_sixth()).unwrap();
        prop_assume!(check_cprime(&p).unwrap().pass);
        let cover = z2_homology_cover(p.component(0)).unwrap();
        let lifted = p.replaced(0, cover.total.clone()).unwrap();
        prop_assert!(check_cprime(&lifted).unwrap().pass);
    }

    #[test]
    fn covers_do_not_lower_girth(g in graphs()) {
        prop_assume!(g.is_some());
        let g = g.unwrap();
        let cover = z2_homology_cover(&g).unwrap();
        cover.verify().unwrap();
        prop_assert!(cover.total.girth() >= g.girth());
        prop_assert_eq!(cover.degree, 1 << g.cycle_rank());
        prop_assert_eq!(cover.total.girth().finite(), oracles::girth(&cover.total));
    }

    #[test]
    fn lifts_differ_by_deck_transformations(g in graphs(), raw in prop::collection::vec(0usize..6, 0..5)) {
        prop_assume!(g.is_some());
        let g = g.unwrap();
        prop_assume!(g.cycle_rank() <= 3);
        let cover = z2_homology_cover(&g).unwrap();
        let report = deck_and_normality(&cover).unwrap();
        prop_assert!(report.is_normal);
        let mut word = Vec::new();
        let mut v = 0;
        for code in raw {
            if let Some(d) = g.darts(v).get(code % g.darts(v).len()) {
                word.push(d.label);
                v = d.to;
            }
        }
        let a = cover.fiber(0)[0];
        for &b in &cover.fiber(0) {
            let end_a = cover.total.lift_end(a, &word).unwrap();
            let end_b = cover.total.lift_end(b, &word).unwrap();
            let deck = report.deck.iter().find(|d| d[a] == b).unwrap();
            prop_assert_eq!(deck[end_a], end_b);
        }
    }

    #[test]
    fn z2_walls_of_cycles_are_valid(raw in letters()) {
        let w = core_word(&raw);
        prop_assume!(w.len() >= 3);
        let c = build::cycle("r", &abc(), &w);
        let cover = z2_homology_cover(&c).unwrap();
        let system = walls_from_cover(&cover);
        prop_assert!(system.failures.is_empty());
        prop_assert_eq!(system.walls.len(), c.edge_count());
        for wall in &system.walls {
            let (x, y) = wall.sides();
            prop_assert!(!x.is_empty() && !y.is_empty());
        }
    }

    #[test]
    fn dehn_trace_is_monotone(raw in prop::collection::vec((0usize..3, any::<bool>()), 0..30)) {
        let s = abc();
        let p = GraphicalPresentation::new(
            s.clone(),
            vec![build::cycle("tri", &s, &s.parse_word("abc").unwrap())],
            Lambda::one_sixth(),
        ).unwrap();
        let engine = DehnEngine::new(&p).unwrap();
        let w: Word = raw.iter().map(|&(g, i)| Letter::new(g, i)).collect();
        let r = engine.dehn_reduce(&w);
        let mut len = w.free_reduced().len();
        for step in &r.trace {
            prop_assert!(step.result.len() < len);
            len = step.result.len();
        }
        prop_assert!(engine.replay(&w, &r.trace));
        prop_assert_eq!(engine.is_trivial(&w), engine.is_trivial(&r.word));
    }

    #[test]
    fn quotients_kill_short_closed_paths(which in 0usize..3) {
        let name = ["hexagon-a6.json", "triangle.json", "ab6.json"][which];
        let p = oracles::corpus(name);
        let q = search_quotient(&p, 6, 1, SearchBudget::default()).unwrap();
        let q = q.quotient().expect("small quotient exists").clone();
        for c in p.components() {
            for len in 1..=12 {
                for (start, w) in oracles::walks(c, len) {
                    if c.lift_end(start, &w) == Some(start) {
                        prop_assert!(q.eval(&Word::from(w)).is_identity());
                    }
                }
            }
        }
    }
}

#[test]
fn ball_is_prefix_closed() {
    let s = Alphabet::new(["a", "b"]).unwrap();
    let p = GraphicalPresentation::new(
        s.clone(),
        vec![build::cycle("hex", &s, &s.parse_word("ababababababab").unwrap())],
        Lambda::one_sixth(),
    )
    .unwrap();
    let engine = DehnEngine::new(&p).unwrap();
    let ball = cayley_ball(&engine, 4, 100_000);
    assert!(!ball.truncated);
    for (e, w) in ball.elements.iter().enumerate().skip(1) {
        let prefix = w.subword(0, w.len() - 1);
        let p = ball.lookup(&prefix).expect("prefix in ball");
        assert_eq!(ball.layer[p] + 1, ball.layer[e]);
        assert_eq!(w.len(), ball.layer[e]);
    }
}
