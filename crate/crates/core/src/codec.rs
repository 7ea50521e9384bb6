//! JSON codecs for graphs, presentations, covers, actions and towers.
//!
//! Readers work on `serde_json::Value` so that schema errors can name the
//! offending location as a JSON pointer. Writers emit objects with sorted
//! keys.

use serde_json::{json, Map, Value};

use crate::alphabet::{Alphabet, Letter};
use crate::covers::Cover;
use crate::error::{GscError, Result};
use crate::graph::LabelledGraph;
use crate::perm::{LetterAction, Perm};
use crate::presentation::{GraphicalPresentation, Lambda};
use crate::quotients::{FiniteQuotient, QuotientTower, TowerLevel};

fn schema(path: &str, message: impl Into<String>) -> GscError {
    GscError::Schema {
        path: if path.is_empty() { "/".into() } else { path.into() },
        message: message.into(),
    }
}

fn object<'a>(value: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    value.as_object().ok_or_else(|| schema(path, "expected an object"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| schema(path, format!("missing field {key:?}")))
}

fn array<'a>(value: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    value.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn string<'a>(value: &'a Value, path: &str) -> Result<&'a str> {
    value.as_str().ok_or_else(|| schema(path, "expected a string"))
}

fn uint(value: &Value, path: &str) -> Result<usize> {
    value
        .as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| schema(path, "expected a non-negative integer"))
}

/// Parses JSON text, reporting syntax errors at the document root.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| schema("/", e.to_string()))
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_canonical_string(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values always serialize");
    s.push('\n');
    s
}

pub fn alphabet_from_value(value: &Value, path: &str) -> Result<Alphabet> {
    let names = array(value, path)?
        .iter()
        .enumerate()
        .map(|(i, v)| string(v, &format!("{path}/{i}")).map(str::to_string))
        .collect::<Result<Vec<_>>>()?;
    Alphabet::new(names).map_err(|e| match e {
        GscError::Schema { path: p, message } => {
            schema(&format!("{path}{}", p.trim_start_matches("/alphabet")), message)
        }
        other => other,
    })
}

pub fn graph_to_value(graph: &LabelledGraph) -> Value {
    let alphabet = graph.alphabet();
    let edges: Vec<Value> = graph
        .edges()
        .iter()
        .map(|e| {
            json!({
                "from": graph.vertex_name(e.tail),
                "to": graph.vertex_name(e.head),
                "label": alphabet.letter_name(e.label),
            })
        })
        .collect();
    json!({
        "name": graph.name(),
        "alphabet": alphabet.names(),
        "vertices": graph.vertex_names(),
        "edges": edges,
    })
}

/// Reads a graph object. When `inherited` is given, the object's own
/// `alphabet` field is optional. Edge labels may be formal inverses.
pub fn graph_from_value(value: &Value, path: &str, inherited: Option<&Alphabet>) -> Result<LabelledGraph> {
    let obj = object(value, path)?;
    let alphabet = match (obj.get("alphabet"), inherited) {
        (Some(a), _) => alphabet_from_value(a, &format!("{path}/alphabet"))?,
        (None, Some(a)) => a.clone(),
        (None, None) => return Err(schema(path, "missing field \"alphabet\"")),
    };
    let name = match obj.get("name") {
        Some(v) => string(v, &format!("{path}/name"))?.to_string(),
        None => "graph".to_string(),
    };
    let vpath = format!("{path}/vertices");
    let vertices = array(field(obj, "vertices", path)?, &vpath)?
        .iter()
        .enumerate()
        .map(|(i, v)| string(v, &format!("{vpath}/{i}")).map(str::to_string))
        .collect::<Result<Vec<_>>>()?;
    let mut position = std::collections::HashMap::new();
    for (i, v) in vertices.iter().enumerate() {
        if position.insert(v.as_str(), i).is_some() {
            return Err(schema(&format!("{vpath}/{i}"), format!("duplicate vertex {v:?}")));
        }
    }
    let epath = format!("{path}/edges");
    let mut edges = Vec::new();
    for (i, e) in array(field(obj, "edges", path)?, &epath)?.iter().enumerate() {
        let here = format!("{epath}/{i}");
        let eo = object(e, &here)?;
        let end = |key: &str| -> Result<usize> {
            let p = format!("{here}/{key}");
            let name = string(field(eo, key, &here)?, &p)?;
            position
                .get(name)
                .copied()
                .ok_or_else(|| schema(&p, format!("unknown vertex {name:?}")))
        };
        let (from, to) = (end("from")?, end("to")?);
        let lpath = format!("{here}/label");
        let text = string(field(eo, "label", &here)?, &lpath)?;
        let label = alphabet
            .parse_letter(text)
            .map_err(|_| schema(&lpath, format!("malformed label {text:?}")))?;
        edges.push(if label.is_inverse() {
            (to, from, label.inverse())
        } else {
            (from, to, label)
        });
    }
    Ok(LabelledGraph::from_parts(name, alphabet, vertices, edges))
}

pub fn parse_graph(text: &str) -> Result<LabelledGraph> {
    graph_from_value(&parse_json(text)?, "", None)
}

pub fn presentation_to_value(presentation: &GraphicalPresentation) -> Value {
    let components: Vec<Value> = presentation
        .components()
        .iter()
        .map(|c| {
            let mut v = graph_to_value(c);
            v.as_object_mut().expect("graph is an object").remove("alphabet");
            v
        })
        .collect();
    json!({
        "alphabet": presentation.alphabet().names(),
        "lambda": presentation.lambda().to_string(),
        "components": components,
    })
}

/// Reads a presentation object, or a bare graph whose connected components
/// become the components. `lambda` defaults to `1/6`.
pub fn presentation_from_value(value: &Value, path: &str) -> Result<GraphicalPresentation> {
    let obj = object(value, path)?;
    let lambda = match obj.get("lambda") {
        Some(v) => {
            let p = format!("{path}/lambda");
            string(v, &p)?
                .parse::<Lambda>()
                .map_err(|e| schema(&p, e.to_string()))?
        }
        None => Lambda::one_sixth(),
    };
    if obj.contains_key("components") {
        let alphabet = alphabet_from_value(field(obj, "alphabet", path)?, &format!("{path}/alphabet"))?;
        let cpath = format!("{path}/components");
        let components = array(&obj["components"], &cpath)?
            .iter()
            .enumerate()
            .map(|(i, c)| graph_from_value(c, &format!("{cpath}/{i}"), Some(&alphabet)))
            .collect::<Result<Vec<_>>>()?;
        GraphicalPresentation::new(alphabet, components, lambda)
    } else {
        GraphicalPresentation::from_graph(&graph_from_value(value, path, None)?, lambda)
    }
}

pub fn parse_presentation(text: &str) -> Result<GraphicalPresentation> {
    presentation_from_value(&parse_json(text)?, "")
}

pub fn cover_to_value(cover: &Cover) -> Value {
    let projection: Vec<Value> = cover
        .projection
        .iter()
        .enumerate()
        .map(|(t, &b)| json!([cover.total.vertex_name(t), cover.base.vertex_name(b)]))
        .collect();
    json!({
        "total": graph_to_value(&cover.total),
        "base": graph_to_value(&cover.base),
        "projection": projection,
        "degree": cover.degree,
        "stages": cover.stages,
    })
}

pub fn cover_from_value(value: &Value, path: &str) -> Result<Cover> {
    let obj = object(value, path)?;
    let total = graph_from_value(field(obj, "total", path)?, &format!("{path}/total"), None)?;
    let base = graph_from_value(field(obj, "base", path)?, &format!("{path}/base"), None)?;
    let ppath = format!("{path}/projection");
    let mut projection = vec![usize::MAX; total.vertex_count()];
    for (i, pair) in array(field(obj, "projection", path)?, &ppath)?.iter().enumerate() {
        let here = format!("{ppath}/{i}");
        let pair = array(pair, &here)?;
        if pair.len() != 2 {
            return Err(schema(&here, "expected [total_vertex, base_vertex]"));
        }
        let t = total
            .vertex_index(string(&pair[0], &format!("{here}/0"))?)
            .map_err(|e| schema(&format!("{here}/0"), e.to_string()))?;
        let b = base
            .vertex_index(string(&pair[1], &format!("{here}/1"))?)
            .map_err(|e| schema(&format!("{here}/1"), e.to_string()))?;
        projection[t] = b;
    }
    if let Some(t) = projection.iter().position(|&b| b == usize::MAX) {
        return Err(schema(&ppath, format!("vertex {:?} has no image", total.vertex_name(t))));
    }
    let degree = uint(field(obj, "degree", path)?, &format!("{path}/degree"))?;
    let stages = match obj.get("stages") {
        Some(v) => serde_json::from_value(v.clone()).map_err(|e| schema(&format!("{path}/stages"), e.to_string()))?,
        None => Vec::new(),
    };
    let cover = Cover {
        total,
        base,
        projection,
        degree,
        stages,
    };
    cover.verify()?;
    Ok(cover)
}

/// `{"degree": n, "images": {"a": [...], ...}}` with 0-based images of the
/// generators; missing generators act trivially.
pub fn action_to_value(alphabet: &Alphabet, action: &LetterAction) -> Value {
    let images: Map<String, Value> = alphabet
        .generators()
        .map(|g| (alphabet.letter_name(g), json!(action.image(g).images())))
        .collect();
    json!({ "degree": action.degree(), "images": images })
}

/// The tower form of an action: `{"n": degree, "images": {...}}`.
pub fn quotient_to_value(alphabet: &Alphabet, action: &LetterAction) -> Value {
    let mut q = action_to_value(alphabet, action);
    let obj = q.as_object_mut().expect("action is an object");
    let n = obj.remove("degree").expect("degree present");
    obj.insert("n".into(), n);
    q
}

/// Reads an action; the degree may be given as `degree` or `n`.
pub fn action_from_value(value: &Value, path: &str, alphabet: &Alphabet) -> Result<LetterAction> {
    let obj = object(value, path)?;
    let ipath = format!("{path}/images");
    let images = object(field(obj, "images", path)?, &ipath)?;
    let degree = match obj.get("degree").or_else(|| obj.get("n")) {
        Some(v) => uint(v, &format!("{path}/degree"))?,
        None => images
            .values()
            .next()
            .and_then(Value::as_array)
            .map_or(1, Vec::len),
    };
    let mut pairs: Vec<(Letter, Perm)> = Vec::new();
    for (name, v) in images {
        let here = format!("{ipath}/{name}");
        let letter = alphabet
            .parse_letter(name)
            .map_err(|_| schema(&here, format!("unknown generator {name:?}")))?;
        let points = array(v, &here)?
            .iter()
            .enumerate()
            .map(|(i, x)| uint(x, &format!("{here}/{i}")).map(|x| x as u32))
            .collect::<Result<Vec<_>>>()?;
        if points.len() != degree {
            return Err(schema(&here, format!("expected {degree} images, found {}", points.len())));
        }
        let perm = Perm::from_images(points).map_err(|e| schema(&here, e.to_string()))?;
        pairs.push((letter, perm));
    }
    LetterAction::from_letter_images(alphabet, degree, &pairs)
}

pub fn tower_to_value(tower: &QuotientTower) -> Value {
    let levels: Vec<Value> = tower
        .levels
        .iter()
        .map(|l| {
            json!({
                "presentation": presentation_to_value(&l.presentation),
                "quotient": quotient_to_value(l.presentation.alphabet(), &l.quotient.action),
            })
        })
        .collect();
    json!({ "levels": levels })
}

pub fn tower_from_value(value: &Value, path: &str) -> Result<QuotientTower> {
    let obj = object(value, path)?;
    let lpath = format!("{path}/levels");
    let mut levels = Vec::new();
    for (i, level) in array(field(obj, "levels", path)?, &lpath)?.iter().enumerate() {
        let here = format!("{lpath}/{i}");
        let lo = object(level, &here)?;
        let presentation = presentation_from_value(field(lo, "presentation", &here)?, &format!("{here}/presentation"))?;
        let action = action_from_value(
            field(lo, "quotient", &here)?,
            &format!("{here}/quotient"),
            presentation.alphabet(),
        )?;
        let source = crate::quotients::presentation_id(&presentation);
        levels.push(TowerLevel {
            presentation,
            quotient: FiniteQuotient { action, source },
        });
    }
    Ok(QuotientTower { levels })
}

pub fn parse_tower(text: &str) -> Result<QuotientTower> {
    tower_from_value(&parse_json(text)?, "")
}
