//! JSON renderings of library results that carry graph indices.

use gsc_core::ball::CayleyBall;
use gsc_core::smallcancel::{CPrimeVerdict, Occurrence, Piece, StrongVerdict};
use gsc_core::walls::WallSystem;
use gsc_core::{Alphabet, GraphicalPresentation, GscError};
use serde_json::{json, Value};

pub fn occurrence(p: &GraphicalPresentation, o: &Occurrence) -> Value {
    let g = p.component(o.component);
    let vertices: Vec<&str> = o.path.vertices.iter().map(|&v| g.vertex_name(v)).collect();
    json!({ "component": o.component, "vertices": vertices })
}

pub fn piece(p: &GraphicalPresentation, piece: &Piece) -> Value {
    json!({
        "word": p.alphabet().format_word(&piece.word),
        "length": piece.len(),
        "first": occurrence(p, &piece.first),
        "second": occurrence(p, &piece.second),
    })
}

pub fn cprime(p: &GraphicalPresentation, v: &CPrimeVerdict) -> Value {
    let witness = v.witness.as_ref().map(|w| {
        json!({
            "piece": piece(p, &w.piece),
            "component": w.component,
            "girth": w.girth,
            "bound": w.bound,
        })
    });
    json!({
        "lambda": v.lambda.to_string(),
        "pass": v.pass,
        "witness": witness,
        "warnings": v.warnings,
    })
}

pub fn strong(p: &GraphicalPresentation, v: &StrongVerdict) -> Value {
    let witness = v.witness.as_ref().map(|(c, a, b)| {
        json!({ "component": c, "first": occurrence(p, a), "second": occurrence(p, b) })
    });
    json!({
        "lambda": v.lambda.to_string(),
        "pass": v.pass,
        "witness": witness,
        "warnings": v.warnings,
    })
}

pub fn walls(system: &WallSystem) -> Value {
    let host = &system.host;
    let edge_name = |e: usize| {
        let edge = host.edges()[e];
        format!("{}-{}", host.vertex_name(edge.tail), host.vertex_name(edge.head))
    };
    let walls: Vec<Value> = system
        .walls
        .iter()
        .zip(&system.provenance)
        .map(|(w, &base)| {
            let (a, b) = w.sides();
            json!({
                "base_edge": base,
                "edges": w.edges.iter().map(|&e| edge_name(e)).collect::<Vec<_>>(),
                "side_sizes": [a.len(), b.len()],
            })
        })
        .collect();
    let failures: Vec<Value> = system
        .failures
        .iter()
        .map(|f| json!({ "base_edge": f.base_edge, "component_count": f.component_count }))
        .collect();
    json!({ "walls": walls, "failures": failures })
}

pub fn ball(alphabet: &Alphabet, ball: &CayleyBall, list_limit: usize) -> Value {
    let mut layers = vec![0usize; ball.radius + 1];
    for &l in &ball.layer {
        layers[l] += 1;
    }
    let words: Option<Vec<String>> = (ball.len() <= list_limit)
        .then(|| ball.elements.iter().map(|w| alphabet.format_word(w)).collect());
    json!({
        "radius": ball.radius,
        "elements": ball.len(),
        "layers": layers,
        "truncated": ball.truncated,
        "complete_radius": ball.complete_radius,
        "words": words,
    })
}

pub fn ball_dot(alphabet: &Alphabet, ball: &CayleyBall) -> String {
    let mut out = String::from("digraph ball {\n");
    for (i, w) in ball.elements.iter().enumerate() {
        let name = if w.is_empty() { "1".to_string() } else { alphabet.format_word(w) };
        out.push_str(&format!("  n{i} [label=\"{name}\"];\n"));
    }
    for (a, b, l) in ball.edges() {
        out.push_str(&format!("  n{a} -> n{b} [label=\"{}\"];\n", alphabet.letter_name(l)));
    }
    out.push_str("}\n");
    out
}

/// Exit code for an error: 3 for exhausted budgets, 1 for refused verdicts,
/// 2 for everything caused by the input or the invocation.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<GscError>() {
        Some(e) if e.is_budget() => 3,
        Some(GscError::BallTruncated { .. }) => 3,
        Some(GscError::NotSmallCancellation { .. } | GscError::WellDefinedness(_)) => 1,
        _ => 2,
    }
}
