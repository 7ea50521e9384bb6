//! The inductive construction: input graphs with a strong small cancellation
//! labelling, normal covers satisfying `(A_i)`, a tower of finite quotients
//! satisfying `(C_i)` and `(D_i)`, and a transcript from which every claim
//! can be recomputed.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::alphabet::{Alphabet, Letter, Word};
use crate::ball::{verify_embedding_by_length_gap, verify_isometric_embedding, Coverage, EmbeddingReport};
use crate::codec;
use crate::covers::{iterate_z2_cover, iterate_z2_until, kernel_cover, Cover};
use crate::error::{GscError, Result};
use crate::graph::{build, LabelledGraph};
use crate::group::DehnEngine;
use crate::perm::LetterAction;
use crate::presentation::{GraphicalPresentation, Lambda};
use crate::quotients::{
    check_conditions, search_quotient_extending, FiniteQuotient, QuotientTower, SearchBudget, SearchOutcome,
    SearchStats, TowerCertificate, TowerLevel,
};
use crate::smallcancel::{check_cprime, check_strong_condition, non_backtracking_words};
use crate::walls::{walling_diagnostics, walls_from_cover};

pub const TRANSCRIPT_FORMAT: &str = "gsc-transcript/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub lambda: Lambda,
    /// Regularity degree `D` of the input graphs.
    pub degree: usize,
    /// Admits `λ <= 1/6` and `D = 2` (cycles) for desk-scale runs.
    pub toy: bool,
    pub alphabet_size: usize,
    pub seed: u64,
    /// Girth of the first generated input; later inputs add `girth_step`.
    pub first_girth: usize,
    pub girth_step: usize,
    /// Every `Θ̂_i` must have at least this girth.
    pub min_girth: usize,
    pub max_cover_vertices: usize,
    pub max_cover_stages: usize,
    /// Degree bound for each new permutation factor.
    pub n_max: usize,
    pub max_search_nodes: u64,
    pub max_ball: usize,
    /// Graph, labelling and search-node attempts for generated inputs.
    pub max_attempts: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            lambda: Lambda::one_twenty_fourth(),
            degree: 3,
            toy: false,
            alphabet_size: 24,
            seed: 0,
            first_girth: 3,
            girth_step: 1,
            min_girth: 0,
            max_cover_vertices: 200_000,
            max_cover_stages: 4,
            n_max: 6,
            max_search_nodes: 50_000_000,
            max_ball: 200_000,
            max_attempts: 200_000,
        }
    }
}

impl PipelineConfig {
    /// Cycles over three letters with `λ = 1/6`.
    pub fn toy() -> Self {
        PipelineConfig {
            lambda: Lambda::one_sixth(),
            degree: 2,
            toy: true,
            alphabet_size: 3,
            first_girth: 13,
            girth_step: 6,
            ..PipelineConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (max_lambda, min_degree) = if self.toy {
            (Lambda::one_sixth(), 2)
        } else {
            (Lambda::one_twenty_fourth(), 3)
        };
        let mode = if self.toy { "toy" } else { "standard" };
        if self.lambda > max_lambda {
            return Err(GscError::Precondition(format!(
                "{mode} runs need lambda <= {max_lambda}, got {}",
                self.lambda
            )));
        }
        if self.degree < min_degree {
            return Err(GscError::Precondition(format!(
                "{mode} runs need D >= {min_degree}, got {}",
                self.degree
            )));
        }
        if self.alphabet_size == 0 || self.girth_step == 0 || self.first_girth < 3 {
            return Err(GscError::Precondition(
                "alphabet_size and girth_step must be positive and first_girth at least 3".into(),
            ));
        }
        Ok(())
    }

    /// `a, b, c, ...` up to 26 letters, numbered beyond.
    pub fn alphabet(&self) -> Alphabet {
        if self.alphabet_size <= 26 {
            Alphabet::new((0..self.alphabet_size).map(|i| ((b'a' + i as u8) as char).to_string()))
                .expect("distinct single letters")
        } else {
            Alphabet::numbered(self.alphabet_size)
        }
    }

    fn budget(&self) -> SearchBudget {
        SearchBudget {
            max_nodes: self.max_search_nodes,
            max_ball: self.max_ball,
        }
    }
}

fn sequence(alphabet: &Alphabet, graphs: &[LabelledGraph], lambda: Lambda) -> Result<GraphicalPresentation> {
    GraphicalPresentation::new(alphabet.clone(), graphs.to_vec(), lambda)
}

fn strong_ok(alphabet: &Alphabet, graphs: &[LabelledGraph], lambda: Lambda) -> bool {
    sequence(alphabet, graphs, lambda)
        .and_then(|p| check_strong_condition(&p, None))
        .is_ok_and(|v| v.pass)
}

/// Random `D`-regular inputs of strictly increasing girth, each labelled so
/// that the sequence built so far satisfies the strong condition. Cycles
/// (`D = 2`) are labelled by a randomized depth-first search over words;
/// other degrees by randomized restarts.
pub fn make_input_sequence(config: &PipelineConfig, count: usize) -> Result<Vec<LabelledGraph>> {
    config.validate()?;
    let alphabet = config.alphabet();
    if 2 * alphabet.len() < config.degree {
        return Err(GscError::Budget(format!(
            "no reduced labelling of a {}-regular graph over {} generators; 0 of {} attempts used",
            config.degree,
            alphabet.len(),
            config.max_attempts
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut out: Vec<LabelledGraph> = Vec::with_capacity(count);
    let mut previous = 0;
    for i in 0..count {
        let girth = (config.first_girth + i * config.girth_step).max(previous + 1);
        let name = format!("theta{}", i + 1);
        let graph = if config.degree == 2 {
            labelled_cycle(config, &alphabet, &out, &name, girth, &mut rng)?
        } else {
            labelled_regular(config, &alphabet, &out, &name, girth, &mut rng)?
        };
        previous = graph.girth().finite().expect("inputs have cycles");
        out.push(graph);
    }
    Ok(out)
}

struct CycleSearch<'a> {
    len: usize,
    own: usize,
    letters: Vec<Letter>,
    forbidden: BTreeMap<usize, HashSet<Vec<Letter>>>,
    seen: HashSet<Vec<Letter>>,
    word: Vec<Letter>,
    nodes: u64,
    max_nodes: u64,
    accept: &'a mut dyn FnMut(&[Letter]) -> bool,
}

impl CycleSearch<'_> {
    fn window_ok(&self, w: &[Letter], own: Option<&HashSet<Vec<Letter>>>) -> bool {
        if self.forbidden.get(&w.len()).is_some_and(|f| f.contains(w)) {
            return false;
        }
        if w.len() == self.own {
            let inv: Vec<Letter> = w.iter().rev().map(|l| l.inverse()).collect();
            let seen = own.unwrap_or(&self.seen);
            if seen.contains(w) || seen.contains(&inv) || inv == w {
                return false;
            }
        }
        true
    }

    fn lengths(&self) -> Vec<usize> {
        let mut l: Vec<usize> = self.forbidden.keys().copied().collect();
        l.push(self.own);
        l.sort_unstable();
        l.dedup();
        l
    }

    fn closes(&self) -> bool {
        let n = self.len;
        if self.word[n - 1] == self.word[0].inverse() {
            return false;
        }
        let mut seen = self.seen.clone();
        for m in self.lengths() {
            for start in n + 1 - m..n {
                let w: Vec<Letter> = (0..m).map(|k| self.word[(start + k) % n]).collect();
                if !self.window_ok(&w, Some(&seen)) {
                    return false;
                }
                if m == self.own {
                    seen.insert(w);
                }
            }
        }
        true
    }

    fn run(&mut self, rng: &mut ChaCha8Rng) -> Result<bool> {
        let k = self.word.len();
        if k == self.len {
            return Ok(self.closes() && (self.accept)(&self.word));
        }
        let mut order = self.letters.clone();
        order.shuffle(rng);
        for l in order {
            if k > 0 && self.word[k - 1] == l.inverse() {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                return Err(GscError::Budget(format!(
                    "no strong-condition labelling of a {}-cycle within {} search nodes",
                    self.len, self.max_nodes
                )));
            }
            self.word.push(l);
            let ok = self
                .lengths()
                .into_iter()
                .filter(|&m| m <= k + 1)
                .all(|m| self.window_ok(&self.word[k + 1 - m..], None));
            if ok {
                let own = (k + 1 >= self.own).then(|| self.word[k + 1 - self.own..].to_vec());
                if let Some(w) = &own {
                    self.seen.insert(w.clone());
                }
                if self.run(rng)? {
                    return Ok(true);
                }
                if let Some(w) = own {
                    self.seen.remove(&w);
                }
            }
            self.word.pop();
        }
        Ok(false)
    }
}

fn labelled_cycle(
    config: &PipelineConfig,
    alphabet: &Alphabet,
    prior: &[LabelledGraph],
    name: &str,
    len: usize,
    rng: &mut ChaCha8Rng,
) -> Result<LabelledGraph> {
    let lambda = config.lambda;
    let own = lambda.forbidden_length(len);
    let mut forbidden: BTreeMap<usize, HashSet<Vec<Letter>>> = BTreeMap::new();
    for p in prior {
        let lp = lambda.forbidden_length(p.girth().finite().expect("inputs have cycles"));
        for m in [lp, own] {
            let set = forbidden.entry(m).or_default();
            set.extend(non_backtracking_words(p, m).into_iter().map(|(w, _)| w));
        }
    }
    let mut accept = |word: &[Letter]| {
        let g = build::cycle(name, alphabet, &Word::from(word.to_vec()));
        let mut all = prior.to_vec();
        all.push(g);
        strong_ok(alphabet, &all, lambda)
    };
    let mut search = CycleSearch {
        len,
        own,
        letters: alphabet.letters().collect(),
        forbidden,
        seen: HashSet::new(),
        word: Vec::with_capacity(len),
        nodes: 0,
        max_nodes: config.max_attempts,
        accept: &mut accept,
    };
    if search.run(rng)? {
        Ok(build::cycle(name, alphabet, &Word::from(search.word)))
    } else {
        Err(GscError::Budget(format!(
            "no strong-condition labelling of a {len}-cycle exists over {} generators ({} nodes)",
            alphabet.len(),
            search.nodes
        )))
    }
}

fn random_regular(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Option<Vec<(usize, usize)>> {
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    points.shuffle(rng);
    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(points.len() / 2);
    for pair in points.chunks(2) {
        let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
        if u == v || !seen.insert((u, v)) {
            return None;
        }
        edges.push((u, v));
    }
    Some(edges)
}

fn labelled_regular(
    config: &PipelineConfig,
    alphabet: &Alphabet,
    prior: &[LabelledGraph],
    name: &str,
    girth: usize,
    rng: &mut ChaCha8Rng,
) -> Result<LabelledGraph> {
    let d = config.degree;
    let mut n = d + 1;
    if n * d % 2 == 1 {
        n += 1;
    }
    let mut failures_at_size = 0u64;
    let mut attempts = 0u64;
    let used: HashSet<usize> = prior
        .iter()
        .flat_map(|p| p.edges().iter().map(|e| e.label.index()))
        .collect();
    while attempts < config.max_attempts {
        attempts += 1;
        let Some(pairs) = random_regular(n, d, rng) else {
            failures_at_size += 1;
            if failures_at_size >= 200 {
                failures_at_size = 0;
                n += if d % 2 == 1 { 2 } else { 1 };
            }
            continue;
        };
        let names: Vec<String> = (0..n).map(|i| format!("v{i:03}")).collect();
        let plain: Vec<(usize, usize, Letter)> = pairs.iter().map(|&(u, v)| (u, v, Letter::generator(0))).collect();
        let shape = LabelledGraph::from_parts(name, alphabet.clone(), names.clone(), plain);
        if shape.girth().finite().is_none_or(|g| g < girth) || !shape.is_connected() {
            failures_at_size += 1;
            if failures_at_size >= 200 {
                failures_at_size = 0;
                n += if d % 2 == 1 { 2 } else { 1 };
            }
            continue;
        }
        for _ in 0..16 {
            attempts += 1;
            let mut fresh: Vec<usize> = (0..alphabet.len()).filter(|i| !used.contains(i)).collect();
            fresh.shuffle(rng);
            let edges: Vec<(usize, usize, Letter)> = pairs
                .iter()
                .map(|&(u, v)| {
                    let g = fresh.pop().unwrap_or_else(|| rng.gen_range(0..alphabet.len()));
                    if rng.gen_bool(0.5) {
                        (u, v, Letter::generator(g))
                    } else {
                        (v, u, Letter::generator(g))
                    }
                })
                .collect();
            let g = LabelledGraph::from_parts(name, alphabet.clone(), names.clone(), edges);
            if !g.validate().is_ok() {
                continue;
            }
            let mut all = prior.to_vec();
            all.push(g.clone());
            if strong_ok(alphabet, &all, config.lambda) {
                return Ok(g);
            }
        }
    }
    Err(GscError::Budget(format!(
        "no {d}-regular graph of girth >= {girth} with a strong-condition labelling in {attempts} attempts (last size {n})"
    )))
}

/// Where and why a construction stopped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub level: usize,
    pub stage: String,
    pub message: String,
}

/// One level of the construction: the input `Θ_i`, the cover `Θ̄_i -> Θ_i`
/// killed by the earlier quotients, the iterated Z/2-homology cover
/// `Θ̂_i -> Θ̄_i`, and `φ_i` once found.
#[derive(Clone, Debug)]
pub struct LevelState {
    pub input: LabelledGraph,
    pub bar: Cover,
    pub hat: Cover,
    pub z2_stages: usize,
    pub quotient: Option<FiniteQuotient>,
    pub search: Option<SearchStats>,
}

impl LevelState {
    pub fn component(&self) -> &LabelledGraph {
        &self.hat.total
    }
}

#[derive(Clone, Debug)]
pub struct ConstructionState {
    pub config: PipelineConfig,
    pub levels: Vec<LevelState>,
    pub certificate: Option<TowerCertificate>,
    pub failure: Option<Failure>,
}

impl ConstructionState {
    pub fn new(config: PipelineConfig) -> Self {
        ConstructionState {
            config,
            levels: Vec::new(),
            certificate: None,
            failure: None,
        }
    }

    /// Number of levels with a quotient.
    pub fn level(&self) -> usize {
        self.levels.iter().take_while(|l| l.quotient.is_some()).count()
    }

    pub fn presentation(&self, upto: usize) -> Result<GraphicalPresentation> {
        let comps: Vec<LabelledGraph> = self.levels[..upto].iter().map(|l| l.component().clone()).collect();
        sequence(&self.config.alphabet(), &comps, self.config.lambda)
    }

    pub fn tower(&self) -> Result<QuotientTower> {
        let mut levels = Vec::new();
        for i in 0..self.level() {
            levels.push(TowerLevel {
                presentation: self.presentation(i + 1)?,
                quotient: self.levels[i].quotient.clone().expect("counted by level()"),
            });
        }
        Ok(QuotientTower { levels })
    }

    fn inputs(&self) -> Vec<LabelledGraph> {
        self.levels.iter().map(|l| l.input.clone()).collect()
    }

    fn fail(mut self, level: usize, stage: &str, err: GscError) -> Self {
        self.failure = Some(Failure {
            level,
            stage: stage.into(),
            message: err.to_string(),
        });
        self
    }
}

fn check_input(config: &PipelineConfig, graph: &LabelledGraph) -> Result<()> {
    if graph.girth().finite().is_none() {
        return Err(GscError::Precondition(format!(
            "input {:?} has no cycles",
            graph.name()
        )));
    }
    if graph.regular_degree() != Some(config.degree) {
        return Err(GscError::Precondition(format!(
            "input {:?} is not {}-regular",
            graph.name(),
            config.degree
        )));
    }
    Ok(())
}

fn require_strong(config: &PipelineConfig, inputs: &[LabelledGraph]) -> Result<()> {
    let pres = sequence(&config.alphabet(), inputs, config.lambda)?;
    let verdict = check_strong_condition(&pres, None)?;
    if let Some((c, a, b)) = verdict.witness {
        return Err(GscError::Precondition(format!(
            "strong condition fails: a path of length {} in component {c} repeats in component {}",
            a.path.len(),
            b.component
        )));
    }
    Ok(())
}

/// Iterated Z/2-homology covers of `bar` until `(A)` holds for `earlier`
/// extended by the cover, its girth exceeds `girth_floor`, and it reaches
/// the configured minimum girth.
fn refine(
    config: &PipelineConfig,
    earlier: &GraphicalPresentation,
    bar: &LabelledGraph,
    girth_floor: usize,
) -> Result<(Cover, usize)> {
    let accept = |c: &Cover| {
        let g = c.total.girth().finite().unwrap_or(0);
        g > girth_floor
            && g >= config.min_girth
            && earlier
                .extended(c.total.clone())
                .and_then(|p| check_cprime(&p))
                .is_ok_and(|v| v.pass)
    };
    iterate_z2_until(bar, accept, config.max_cover_stages, config.max_cover_vertices)
}

fn component_name(level: usize) -> String {
    format!("hat{level}")
}

/// Level 1: covers of `Θ_1` until `(A_1)`, then `φ_1` injective on the
/// ball of radius 1.
pub fn induction_basis(config: &PipelineConfig, theta: &LabelledGraph) -> Result<ConstructionState> {
    config.validate()?;
    check_input(config, theta)?;
    require_strong(config, std::slice::from_ref(theta))?;
    let state = ConstructionState::new(config.clone());
    let empty = GraphicalPresentation::free(config.alphabet()).with_lambda(config.lambda);
    let bar = Cover::identity(theta);
    let (hat, stages) = match refine(config, &empty, theta, 0) {
        Ok(r) => r,
        Err(e) => return Ok(state.fail(1, "cover", e)),
    };
    finish_level(state, theta.clone(), bar, hat, stages)
}

/// Level `i + 1`: the kernel cover of `Θ_{i+1}` for the product of the
/// quotients so far, Z/2-homology covers until `(A_{i+1})` and growing
/// girth, then `φ_{i+1} = φ_i ⊕ ψ` injective on the ball of radius `i + 1`.
pub fn inductive_step(state: ConstructionState, theta: &LabelledGraph) -> Result<ConstructionState> {
    if let Some(f) = &state.failure {
        return Err(GscError::Precondition(format!(
            "construction already stopped at level {} ({})",
            f.level, f.stage
        )));
    }
    if state.levels.is_empty() {
        return Err(GscError::Precondition("inductive step needs a level-1 state".into()));
    }
    let config = state.config.clone();
    check_input(&config, theta)?;
    let mut inputs = state.inputs();
    inputs.push(theta.clone());
    require_strong(&config, &inputs)?;

    let i = state.levels.len();
    let product = product_action(&state.levels)?;
    let bar = match kernel_cover(theta, &product, config.max_cover_vertices) {
        Ok(c) => c,
        Err(e) => return Ok(state.fail(i + 1, "kernel cover", e)),
    };
    let earlier = state.presentation(i)?;
    let floor = state.levels[i - 1].component().girth().finite().unwrap_or(0);
    let (hat, stages) = match refine(&config, &earlier, &bar.total, floor) {
        Ok(r) => r,
        Err(e) => return Ok(state.fail(i + 1, "cover", e)),
    };
    finish_level(state, theta.clone(), bar, hat, stages)
}

fn product_action(levels: &[LevelState]) -> Result<LetterAction> {
    let mut acc: Option<LetterAction> = None;
    for l in levels {
        let q = l
            .quotient
            .as_ref()
            .ok_or_else(|| GscError::Precondition("level without a quotient".into()))?;
        acc = Some(match acc {
            None => q.action.clone(),
            Some(a) => a.direct_sum(&q.action),
        });
    }
    acc.ok_or_else(|| GscError::Precondition("no quotients yet".into()))
}

fn finish_level(
    mut state: ConstructionState,
    input: LabelledGraph,
    bar: Cover,
    mut hat: Cover,
    z2_stages: usize,
) -> Result<ConstructionState> {
    let level = state.levels.len() + 1;
    hat.total = hat.total.clone().with_name(component_name(level));
    state.levels.push(LevelState {
        input,
        bar,
        hat,
        z2_stages,
        quotient: None,
        search: None,
    });
    let config = state.config.clone();
    let pres = state.presentation(level)?;
    let base = state.levels[..level - 1]
        .last()
        .and_then(|l| l.quotient.as_ref())
        .map(|q| q.action.clone());
    let outcome = search_quotient_extending(&pres, base.as_ref(), config.n_max, level, config.budget());
    match outcome {
        Ok(SearchOutcome::Found { quotient, stats }) => {
            let last = state.levels.last_mut().expect("just pushed");
            last.quotient = Some(quotient);
            last.search = Some(stats);
        }
        Ok(SearchOutcome::Exhausted { n_max, stats }) => {
            state.levels.last_mut().expect("just pushed").search = Some(stats);
            return Ok(state.fail(
                level,
                "quotient",
                GscError::Budget(format!("no quotient of degree <= {n_max}")),
            ));
        }
        Err(e) => return Ok(state.fail(level, "quotient", e)),
    }
    match state.tower().and_then(|t| check_conditions(&t, config.max_ball)) {
        Ok(cert) => state.certificate = Some(cert),
        Err(e) => return Ok(state.fail(level, "certificates", e)),
    }
    Ok(state)
}

/// Runs `levels` levels on `inputs`, or on generated inputs when `None`.
/// Stops at the first failure; the state records it.
pub fn run(config: &PipelineConfig, inputs: Option<Vec<LabelledGraph>>, levels: usize) -> Result<ConstructionState> {
    let inputs = match inputs {
        Some(i) => i,
        None => make_input_sequence(config, levels)?,
    };
    let mut it = inputs.iter().take(levels);
    let Some(first) = it.next() else {
        return Ok(ConstructionState::new(config.clone()));
    };
    let mut state = induction_basis(config, first)?;
    for theta in it {
        if state.failure.is_some() {
            break;
        }
        state = inductive_step(state, theta)?;
    }
    Ok(state)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    #[serde(rename = "not established")]
    NotEstablished,
    Diagnostic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl Check {
    fn of(pass: bool, detail: Option<String>) -> Check {
        Check {
            status: if pass { Status::Pass } else { Status::Fail },
            detail,
        }
    }

    fn absent(detail: impl Into<String>) -> Check {
        Check {
            status: Status::NotEstablished,
            detail: Some(detail.into()),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingSummary {
    pub method: String,
    pub radius: usize,
    pub pairs_checked: usize,
    pub pairs_unchecked: usize,
    pub violations: usize,
    pub status: Status,
}

impl From<&EmbeddingReport> for EmbeddingSummary {
    fn from(r: &EmbeddingReport) -> Self {
        EmbeddingSummary {
            method: serde_json::to_value(r.method.clone())
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default(),
            radius: r.radius,
            pairs_checked: r.pairs_checked,
            pairs_unchecked: r.pairs_unchecked,
            violations: r.violations.len(),
            status: if r.pass() { Status::Pass } else { Status::Fail },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub level: usize,
    pub input: Value,
    pub kernel_degree: usize,
    pub z2_stages: usize,
    pub component: Value,
    pub vertices: usize,
    pub girth: Option<usize>,
    /// `|V(Θ̂_i)| / |V(Θ_i)|`.
    pub cover_degree: usize,
    /// Every vertex of `Θ̂_i` has the degree of its image in `Θ_i`, and that
    /// degree is `D`.
    pub regularity: Check,
    pub quotient: Option<Value>,
    pub search: Option<SearchStats>,
    pub a: Check,
    /// Walling diagnostics; never a pass/fail claim.
    pub b: Value,
    pub c: Check,
    pub d: Check,
    pub embedding: Vec<EmbeddingSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub format: String,
    pub config: PipelineConfig,
    pub alphabet: Vec<String>,
    pub levels: Vec<LevelRecord>,
    pub girths: Vec<usize>,
    pub girth_increasing: bool,
    pub failure: Option<Failure>,
    pub pass: bool,
}

impl Transcript {
    pub fn to_json(&self) -> String {
        codec::to_canonical_string(&serde_json::to_value(self).expect("transcripts serialize"))
    }

    pub fn from_json(text: &str) -> Result<Transcript> {
        let value = codec::parse_json(text)?;
        serde_json::from_value(value).map_err(|e| GscError::Schema {
            path: "/".into(),
            message: e.to_string(),
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("level,girth,vertices,cover_degree,quotient_n,a,c,d,embedding\n");
        let bit = |c: &Check| serde_json::to_value(c.status).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
        for l in &self.levels {
            let n = l
                .quotient
                .as_ref()
                .and_then(|q| q.get("n"))
                .and_then(Value::as_u64)
                .map_or(String::new(), |n| n.to_string());
            let emb = l.embedding.iter().all(|e| e.status == Status::Pass);
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                l.level,
                l.girth.map_or(String::new(), |g| g.to_string()),
                l.vertices,
                l.cover_degree,
                n,
                bit(&l.a),
                bit(&l.c),
                bit(&l.d),
                if emb { "pass" } else { "fail" }
            ));
        }
        out
    }
}

fn regularity(config: &PipelineConfig, level: &LevelState) -> Check {
    let full = level.bar.then(&level.hat);
    let bad = (0..full.total.vertex_count())
        .find(|&v| full.total.degree(v) != full.base.degree(full.projection[v]) || full.total.degree(v) != config.degree);
    match bad {
        None => Check::of(true, None),
        Some(v) => Check::of(false, Some(format!("vertex {:?}", full.total.vertex_name(v)))),
    }
}

fn embedding(pres: &GraphicalPresentation, level: usize, max_ball: usize) -> Vec<EmbeddingSummary> {
    let Ok(engine) = DehnEngine::new(pres) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    match verify_isometric_embedding(&engine, level - 1, level, max_ball, Coverage::Local) {
        Ok(r) => out.push(EmbeddingSummary::from(&r)),
        Err(e) => out.push(EmbeddingSummary {
            method: format!("ball: {e}"),
            radius: level,
            pairs_checked: 0,
            pairs_unchecked: 0,
            violations: 0,
            status: Status::NotEstablished,
        }),
    }
    if let Ok(r) = verify_embedding_by_length_gap(&engine, level - 1) {
        out.push(EmbeddingSummary::from(&r));
    }
    out
}

fn injectivity_detail(cert: &TowerCertificate, level: usize) -> Option<String> {
    cert.injectivity
        .iter()
        .find(|c| c.level == level && !c.pass)
        .map(|c| format!("trivial images: {}", c.failures.join(", ")))
}

fn factorization_detail(cert: &TowerCertificate, level: usize) -> Option<String> {
    if let Some(w) = cert.well_defined.iter().find(|w| w.level == level && !w.pass) {
        return Some(format!(
            "phi_({},{}) not well defined: {}",
            w.level,
            w.target,
            w.detail.clone().unwrap_or_default()
        ));
    }
    cert.factorization
        .iter()
        .find(|f| f.indices.2 == level && !f.pass)
        .map(|f| format!("indices {:?}: {}", f.indices, f.failures.join(", ")))
}

/// The transcript of a state. Certificates are those stored in the state;
/// everything else is computed from the stored graphs.
pub fn certify(state: &ConstructionState) -> Transcript {
    let config = &state.config;
    let alphabet = config.alphabet();
    let mut levels = Vec::new();
    for (idx, l) in state.levels.iter().enumerate() {
        let level = idx + 1;
        let pres = state.presentation(level);
        let a = match pres.as_ref().map_err(|e| e.to_string()).and_then(|p| check_cprime(p).map_err(|e| e.to_string())) {
            Ok(v) => Check::of(
                v.pass,
                v.witness.map(|w| {
                    format!(
                        "piece {} of length {} in component {} (bound {})",
                        alphabet.format_word(&Word::from(w.piece.word.clone())),
                        w.piece.len(),
                        w.component,
                        w.bound
                    )
                }),
            ),
            Err(e) => Check::absent(e),
        };
        let b = if l.z2_stages > 0 {
            let diag = walling_diagnostics(&walls_from_cover(&l.hat));
            serde_json::json!({ "status": Status::Diagnostic, "walls": diag })
        } else {
            serde_json::json!({ "status": Status::Diagnostic, "walls": null })
        };
        let (c, d) = match (&l.quotient, &state.certificate) {
            (Some(_), Some(cert)) if cert.injectivity.iter().any(|c| c.level == level) => (
                Check::of(cert.c_holds(level), injectivity_detail(cert, level)),
                Check::of(cert.d_holds(level), factorization_detail(cert, level)),
            ),
            _ => (
                Check::absent("no quotient at this level"),
                Check::absent("no quotient at this level"),
            ),
        };
        let embedding = match &pres {
            Ok(p) if l.quotient.is_some() => embedding(p, level, config.max_ball),
            _ => Vec::new(),
        };
        levels.push(LevelRecord {
            level,
            input: codec::graph_to_value(&l.input),
            kernel_degree: l.bar.degree,
            z2_stages: l.z2_stages,
            component: codec::graph_to_value(l.component()),
            vertices: l.component().vertex_count(),
            girth: l.component().girth().finite(),
            cover_degree: l.component().vertex_count() / l.input.vertex_count().max(1),
            regularity: regularity(config, l),
            quotient: l.quotient.as_ref().map(|q| codec::quotient_to_value(&alphabet, &q.action)),
            search: l.search.clone(),
            a,
            b,
            c,
            d,
            embedding,
        });
    }
    let girths: Vec<usize> = levels.iter().filter_map(|l| l.girth).collect();
    let girth_increasing = girths.windows(2).all(|w| w[0] < w[1]) && girths.len() == levels.len();
    let pass = state.failure.is_none()
        && girth_increasing
        && levels.iter().all(|l| {
            l.a.passed()
                && l.c.passed()
                && l.d.passed()
                && l.regularity.passed()
                && l.embedding.iter().all(|e| e.status == Status::Pass)
        });
    Transcript {
        format: TRANSCRIPT_FORMAT.into(),
        config: config.clone(),
        alphabet: alphabet.names().to_vec(),
        levels,
        girths,
        girth_increasing,
        failure: state.failure.clone(),
        pass,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub levels: usize,
    pub mismatches: Vec<String>,
    pub pass: bool,
}

/// Rebuilds every cover from the stored inputs, quotients and stage counts,
/// recomputes every certificate, and compares the result with `transcript`.
pub fn verify(transcript: &Transcript) -> Result<VerifyReport> {
    if transcript.format != TRANSCRIPT_FORMAT {
        return Err(GscError::Schema {
            path: "/format".into(),
            message: format!("unknown format {:?}", transcript.format),
        });
    }
    let config = transcript.config.clone();
    config.validate()?;
    let alphabet = config.alphabet();
    if alphabet.names() != transcript.alphabet.as_slice() {
        return Err(GscError::Schema {
            path: "/alphabet".into(),
            message: "alphabet does not match the configuration".into(),
        });
    }
    let mut mismatches = Vec::new();
    let mut state = ConstructionState::new(config.clone());
    for (idx, record) in transcript.levels.iter().enumerate() {
        let level = idx + 1;
        let path = format!("/levels/{idx}");
        let input = codec::graph_from_value(&record.input, &format!("{path}/input"), None)?;
        let bar = if level == 1 {
            Cover::identity(&input)
        } else {
            kernel_cover(&input, &product_action(&state.levels)?, config.max_cover_vertices)?
        };
        let mut hat = iterate_z2_cover(&bar.total, record.z2_stages, config.max_cover_vertices)?;
        hat.total = hat.total.clone().with_name(component_name(level));
        let stored = codec::graph_from_value(&record.component, &format!("{path}/component"), None)?;
        if stored != hat.total {
            mismatches.push(format!("level {level}: component differs from its provenance"));
        }
        let quotient = match &record.quotient {
            Some(q) => Some(FiniteQuotient {
                action: codec::action_from_value(q, &format!("{path}/quotient"), &alphabet)?,
                source: String::new(),
            }),
            None => None,
        };
        state.levels.push(LevelState {
            input,
            bar,
            hat,
            z2_stages: record.z2_stages,
            quotient,
            search: record.search.clone(),
        });
    }
    let tower = state.tower()?;
    for (i, level) in tower.levels.iter().enumerate() {
        let source = crate::quotients::presentation_id(&level.presentation);
        state.levels[i].quotient.as_mut().expect("tower levels have quotients").source = source;
    }
    state.certificate = if tower.is_empty() {
        None
    } else {
        check_conditions(&state.tower()?, config.max_ball).ok()
    };
    state.failure = transcript.failure.clone();
    let recomputed = certify(&state);
    for (a, b) in transcript.levels.iter().zip(&recomputed.levels) {
        for (name, x, y) in [
            ("A", &a.a, &b.a),
            ("C", &a.c, &b.c),
            ("D", &a.d, &b.d),
            ("regularity", &a.regularity, &b.regularity),
        ] {
            if x != y {
                mismatches.push(format!("level {}: ({name}) stored {:?}, recomputed {:?}", a.level, x.status, y.status));
            }
        }
        if a.embedding != b.embedding {
            mismatches.push(format!("level {}: embedding checks differ", a.level));
        }
        if a.b != b.b {
            mismatches.push(format!("level {}: walling diagnostics differ", a.level));
        }
        if (a.girth, a.vertices, a.cover_degree, a.kernel_degree) != (b.girth, b.vertices, b.cover_degree, b.kernel_degree) {
            mismatches.push(format!("level {}: graph invariants differ", a.level));
        }
    }
    if transcript.girths != recomputed.girths || transcript.girth_increasing != recomputed.girth_increasing {
        mismatches.push("girth sequence differs".into());
    }
    if transcript.pass != recomputed.pass {
        mismatches.push("overall verdict differs".into());
    }
    Ok(VerifyReport {
        levels: transcript.levels.len(),
        pass: mismatches.is_empty(),
        mismatches,
    })
}
