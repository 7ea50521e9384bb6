mod oracles;

use gsc_core::alphabet::Word;
use gsc_core::boxspace::{adjacency_spectrum, quotient_cayley_graph};
use gsc_core::graph::build;
use gsc_core::group::DehnEngine;
use gsc_core::smallcancel::check_cprime;
use gsc_core::{Alphabet, GraphicalPresentation, Lambda, LetterAction, Perm};
use oracles::*;
use proptest::prelude::*;

#[test]
fn corpus_cprime_matches_oracle() {
    for name in CORPUS {
        let p = corpus(name);
        let verdict = check_cprime(&p).unwrap();
        eprintln!("{name}: {}", verdict.pass);
        assert_eq!(verdict.pass, cprime(&p), "{name}");
    }
    assert!(!check_cprime(&corpus("duplicate-components.json")).unwrap().pass);
    assert!(check_cprime(&corpus("triangle.json")).unwrap().pass);
}

#[test]
fn corpus_girth_matches_oracle() {
    for name in CORPUS {
        for c in corpus(name).components() {
            assert_eq!(c.girth().finite(), girth(c), "{name}");
        }
    }
}

fn word_check(name: &str, bound: usize) {
    let p = corpus(name);
    let engine = DehnEngine::new(&p).unwrap();
    let conj = conjugates(&relators(&p, 2 * bound));
    let trivial = trivial_class(p.alphabet().len(), &conj, bound);
    for w in reduced_words(p.alphabet().len(), bound) {
        let expected = trivial.contains(&w);
        assert_eq!(engine.is_trivial(&Word::from(w.clone())), expected, "{name}: {w:?}");
    }
}

#[test]
fn word_problem_matches_normal_closure() {
    word_check("hexagon-a6.json", 6);
    word_check("triangle.json", 5);
    word_check("a6-b6.json", 6);
}

#[test]
fn spectra_match_jacobi() {
    let graphs = [build::petersen(), build::theta()];
    for g in &graphs {
        let ours = adjacency_spectrum(g);
        let theirs = jacobi_eigenvalues(adjacency_matrix(g));
        for (x, y) in ours.iter().zip(&theirs) {
            assert!((x - y).abs() < 1e-9, "{}: {x} vs {y}", g.name());
        }
    }
    let q = gsc_core::FiniteQuotient {
        action: LetterAction::new(
            4,
            vec![Perm::from_cycles(4, &[&[0, 1, 2, 3]]), Perm::from_cycles(4, &[&[0, 1]])],
        )
        .unwrap(),
        source: "sym4".into(),
    };
    let cay = quotient_cayley_graph(&q, 100).unwrap();
    let ours = adjacency_spectrum(&cay);
    let theirs = jacobi_eigenvalues(adjacency_matrix(&cay));
    assert_eq!(ours.len(), 24);
    for (x, y) in ours.iter().zip(&theirs) {
        assert!((x - y).abs() < 1e-9);
    }
}

fn cycle_presentation(words: &[Vec<(usize, bool)>]) -> Option<GraphicalPresentation> {
    let s = Alphabet::new(["a", "b", "c"]).unwrap();
    let comps = words
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let word: Word = w.iter().map(|&(g, inv)| gsc_core::Letter::new(g, inv)).collect();
            let (_, core) = word.free_reduced().cyclic_core();
            (core.len() >= 3).then(|| build::cycle(&format!("r{i}"), &s, &core))
        })
        .collect::<Option<Vec<_>>>()?;
    GraphicalPresentation::new(s, comps, Lambda::one_sixth()).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_cycles_cprime_matches_oracle(
        words in prop::collection::vec(prop::collection::vec((0usize..3, any::<bool>()), 3..14), 1..3)
    ) {
        let p = cycle_presentation(&words);
        prop_assume!(p.is_some());
        let p = p.unwrap();
        prop_assert_eq!(check_cprime(&p).unwrap().pass, cprime(&p));
    }
}
