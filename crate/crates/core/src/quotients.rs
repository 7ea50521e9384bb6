//! Finite permutation quotients, quotient towers, and their certificates.

use serde::{Deserialize, Serialize};

use crate::alphabet::Word;
use crate::ball::cayley_ball;
use crate::error::{GscError, Result};
use crate::group::{cycle_words, DehnEngine};
use crate::perm::{partitions, LetterAction, Perm};
use crate::presentation::GraphicalPresentation;

/// A homomorphism from the group of `source` onto the permutation group
/// generated by the letter images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuotient {
    pub action: LetterAction,
    pub source: String,
}

impl FiniteQuotient {
    pub fn degree(&self) -> usize {
        self.action.degree()
    }

    pub fn eval(&self, word: &Word) -> Perm {
        self.action.eval(word)
    }

    /// First cycle-basis word of `presentation` not mapped to the identity,
    /// as `(component, word)`.
    pub fn homomorphism_failure(&self, presentation: &GraphicalPresentation) -> Option<(usize, Word)> {
        relator_words(presentation)
            .into_iter()
            .find(|(_, w)| !self.action.eval(w).is_identity())
    }
}

/// Cycle-basis words of every component at its least vertex.
pub fn relator_words(presentation: &GraphicalPresentation) -> Vec<(usize, Word)> {
    presentation
        .components()
        .iter()
        .enumerate()
        .flat_map(|(i, c)| {
            cycle_words(c, 0)
                .unwrap_or_default()
                .into_iter()
                .map(move |w| (i, w))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Partial assignments examined before giving up.
    pub max_nodes: u64,
    /// Cayley ball element cap.
    pub max_ball: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 50_000_000,
            max_ball: 200_000,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub degrees_tried: Vec<usize>,
    pub nodes: u64,
    pub ball_elements: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found { quotient: FiniteQuotient, stats: SearchStats },
    /// No quotient of degree at most `n_max` exists.
    Exhausted { n_max: usize, stats: SearchStats },
}

impl SearchOutcome {
    pub fn quotient(&self) -> Option<&FiniteQuotient> {
        match self {
            SearchOutcome::Found { quotient, .. } => Some(quotient),
            SearchOutcome::Exhausted { .. } => None,
        }
    }
}

/// Constraint words for a permutation search.
#[derive(Clone, Debug, Default)]
pub struct Constraints {
    /// Must map to the identity.
    pub relators: Vec<Word>,
    /// Must map off the identity.
    pub nontrivial: Vec<Word>,
}

/// Searches `Sym(n)`, `n <= n_max`, for images of the generators that kill
/// every cycle word of `presentation` and separate every nontrivial element
/// of the radius-`ball_radius` ball from the identity.
pub fn search_quotient(
    presentation: &GraphicalPresentation,
    n_max: usize,
    ball_radius: usize,
    budget: SearchBudget,
) -> Result<SearchOutcome> {
    search_quotient_extending(presentation, None, n_max, ball_radius, budget)
}

/// As [`search_quotient`], but the result is `base ⊕ ψ` for a fixed action
/// `base` that already kills the relators; only ball elements that `base`
/// maps to the identity constrain `ψ`. `n_max` bounds the degree of `ψ`.
pub fn search_quotient_extending(
    presentation: &GraphicalPresentation,
    base: Option<&LetterAction>,
    n_max: usize,
    ball_radius: usize,
    budget: SearchBudget,
) -> Result<SearchOutcome> {
    let engine = DehnEngine::new(presentation)?;
    let ball = cayley_ball(&engine, ball_radius, budget.max_ball);
    if ball.truncated {
        return Err(GscError::BallTruncated {
            radius: ball.complete_radius,
            elements: ball.len(),
        });
    }
    let relators: Vec<Word> = relator_words(presentation).into_iter().map(|(_, w)| w).collect();
    if let Some(b) = base {
        if let Some(w) = relators.iter().find(|w| !b.eval(w).is_identity()) {
            return Err(GscError::Precondition(format!(
                "base action does not kill relator {}",
                presentation.alphabet().format_word(w)
            )));
        }
    }
    let nontrivial: Vec<Word> = ball
        .elements
        .iter()
        .skip(1)
        .filter(|w| base.is_none_or(|b| b.eval(w).is_identity()))
        .cloned()
        .collect();
    let constraints = Constraints { relators, nontrivial };
    let gens = presentation.alphabet().len();
    let mut outcome = search_constraints(gens, &constraints, base.is_some(), n_max, budget.max_nodes)?;
    let stats = match &mut outcome {
        SearchOutcome::Found { stats, .. } | SearchOutcome::Exhausted { stats, .. } => stats,
    };
    stats.ball_elements = ball.len();
    if let (SearchOutcome::Found { quotient, .. }, Some(b)) = (&mut outcome, base) {
        quotient.action = b.direct_sum(&quotient.action);
    }
    if let SearchOutcome::Found { quotient, .. } = &mut outcome {
        quotient.source = presentation_id(presentation);
    }
    Ok(outcome)
}

/// Short identifier of a presentation: its component names.
pub fn presentation_id(presentation: &GraphicalPresentation) -> String {
    let names: Vec<&str> = presentation.components().iter().map(|c| c.name()).collect();
    format!("<{}>", names.join(", "))
}

/// Backtracking over generator images in increasing degree. The first
/// constrained generator ranges over conjugacy class representatives, the
/// others over all permutations in lexicographic order.
pub fn search_constraints(
    generators: usize,
    constraints: &Constraints,
    allow_zero: bool,
    n_max: usize,
    max_nodes: u64,
) -> Result<SearchOutcome> {
    let max_gen = |w: &Word| w.iter().map(|l| l.index()).max().unwrap_or(0);
    let mut by_level: Vec<(Vec<&Word>, Vec<&Word>)> = vec![(Vec::new(), Vec::new()); generators.max(1)];
    let mut used = vec![false; generators];
    for w in &constraints.relators {
        by_level[max_gen(w)].0.push(w);
        w.iter().for_each(|l| used[l.index()] = true);
    }
    for w in &constraints.nontrivial {
        by_level[max_gen(w)].1.push(w);
        w.iter().for_each(|l| used[l.index()] = true);
    }
    let mut stats = SearchStats::default();
    let start = if allow_zero { 0 } else { 1 };
    for n in start..=n_max {
        stats.degrees_tried.push(n);
        if n == 0 {
            if constraints.nontrivial.is_empty() {
                let action = LetterAction::trivial(0, generators);
                return Ok(found(action, stats));
            }
            continue;
        }
        let mut search = Search {
            n,
            by_level: &by_level,
            used: &used,
            images: vec![Perm::identity(n); generators],
            nodes: 0,
            max_nodes: max_nodes.saturating_sub(stats.nodes),
            first: used.iter().position(|&u| u),
        };
        let hit = search.assign(0)?;
        stats.nodes += search.nodes;
        if hit {
            let action = LetterAction::new(n, search.images).expect("degree n images");
            return Ok(found(action, stats));
        }
    }
    Ok(SearchOutcome::Exhausted { n_max, stats })
}

fn found(action: LetterAction, stats: SearchStats) -> SearchOutcome {
    SearchOutcome::Found {
        quotient: FiniteQuotient {
            action,
            source: String::new(),
        },
        stats,
    }
}

struct Search<'a> {
    n: usize,
    by_level: &'a [(Vec<&'a Word>, Vec<&'a Word>)],
    used: &'a [bool],
    images: Vec<Perm>,
    nodes: u64,
    max_nodes: u64,
    first: Option<usize>,
}

impl Search<'_> {
    fn eval(&self, w: &Word) -> Perm {
        let mut p = Perm::identity(self.n);
        for l in w {
            let g = &self.images[l.index()];
            if l.is_inverse() {
                p.then_assign(&g.inverse());
            } else {
                p.then_assign(g);
            }
        }
        p
    }

    fn consistent(&self, k: usize) -> bool {
        let (rel, non) = &self.by_level[k];
        rel.iter().all(|w| self.eval(w).is_identity()) && non.iter().all(|w| !self.eval(w).is_identity())
    }

    fn assign(&mut self, k: usize) -> Result<bool> {
        if k == self.images.len() {
            return Ok(true);
        }
        if !self.used[k] {
            self.images[k] = Perm::identity(self.n);
            return self.assign(k + 1);
        }
        let candidates: Box<dyn Iterator<Item = Perm>> = if Some(k) == self.first {
            let n = self.n;
            Box::new(partitions(n).into_iter().map(move |t| Perm::canonical_of_type(n, &t)))
        } else {
            let mut p = Some(Perm::identity(self.n));
            Box::new(std::iter::from_fn(move || {
                let cur = p.clone()?;
                let mut next = cur.clone();
                p = next.next_lex().then_some(next);
                Some(cur)
            }))
        };
        for perm in candidates {
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                return Err(GscError::Budget(format!(
                    "quotient search stopped after {} nodes at degree {}",
                    self.max_nodes, self.n
                )));
            }
            self.images[k] = perm;
            if self.consistent(k) && self.assign(k + 1)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// One level of a tower: `G_i` and `φ_i : G_i -> F_i`.
#[derive(Clone, Debug)]
pub struct TowerLevel {
    pub presentation: GraphicalPresentation,
    pub quotient: FiniteQuotient,
}

#[derive(Clone, Debug, Default)]
pub struct QuotientTower {
    pub levels: Vec<TowerLevel>,
}

/// `φ_{i,j}`: `φ_j` read on `G_i`, letter by letter.
#[derive(Clone, Debug)]
pub struct InducedMap<'a> {
    pub level: usize,
    pub target: usize,
    pub action: &'a LetterAction,
}

impl InducedMap<'_> {
    pub fn eval(&self, word: &Word) -> Perm {
        self.action.eval(word)
    }
}

impl QuotientTower {
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// `φ_{i,j}` for `1 <= j <= i <= len`, certified well defined: every
    /// cycle-basis word of `G_i` maps to the identity under `φ_j`.
    pub fn induced_map(&self, i: usize, j: usize) -> Result<InducedMap<'_>> {
        if j == 0 || j > i || i > self.levels.len() {
            return Err(GscError::Precondition(format!("no induced map ({i}, {j})")));
        }
        let pres = &self.levels[i - 1].presentation;
        let q = &self.levels[j - 1].quotient;
        if let Some((c, w)) = q.homomorphism_failure(pres) {
            return Err(GscError::WellDefinedness(format!(
                "cycle word {} of component {c} at level {i} is not killed by phi_{j}",
                pres.alphabet().format_word(&w)
            )));
        }
        Ok(InducedMap {
            level: i,
            target: j,
            action: &q.action,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BallInjectivity {
    pub level: usize,
    pub radius: usize,
    pub elements: usize,
    /// Nontrivial normal forms mapped to the identity.
    pub failures: Vec<String>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WellDefined {
    pub level: usize,
    pub target: usize,
    pub pass: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factorization {
    /// `(j, k, l)` with `j <= k <= l`.
    pub indices: (usize, usize, usize),
    pub elements: usize,
    pub failures: Vec<String>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerCertificate {
    pub injectivity: Vec<BallInjectivity>,
    pub well_defined: Vec<WellDefined>,
    pub factorization: Vec<Factorization>,
}

impl TowerCertificate {
    /// `(C_i)` holds when every level up to `i` is injective on its ball.
    pub fn c_holds(&self, i: usize) -> bool {
        self.injectivity.iter().filter(|c| c.level <= i).all(|c| c.pass)
    }

    /// `(D_i)` holds when every map with indices up to `i` is well defined and
    /// every factorization check up to `i` passes.
    pub fn d_holds(&self, i: usize) -> bool {
        self.well_defined.iter().filter(|w| w.level <= i).all(|w| w.pass)
            && self
                .factorization
                .iter()
                .filter(|f| f.indices.2 <= i)
                .all(|f| f.pass)
    }

    pub fn pass(&self) -> bool {
        self.c_holds(usize::MAX) && self.d_holds(usize::MAX)
    }
}

/// Checks `(C_i)` on the ball of radius `i` of every level `i`, and `(D_i)`
/// for all `j <= k <= l`: each `φ_{l,j}` is well defined, and on every
/// element of `B_k` the level-`k` and level-`l` normal forms have the same
/// image under `φ_j`.
pub fn check_conditions(tower: &QuotientTower, max_ball: usize) -> Result<TowerCertificate> {
    let k = tower.levels.len();
    let mut balls = Vec::with_capacity(k);
    for (idx, level) in tower.levels.iter().enumerate() {
        let engine = DehnEngine::new(&level.presentation)?;
        let ball = cayley_ball(&engine, idx + 1, max_ball);
        if ball.truncated {
            return Err(GscError::BallTruncated {
                radius: ball.complete_radius,
                elements: ball.len(),
            });
        }
        balls.push(ball);
    }
    let mut injectivity = Vec::new();
    for (idx, level) in tower.levels.iter().enumerate() {
        let s = level.presentation.alphabet();
        let failures: Vec<String> = balls[idx]
            .elements
            .iter()
            .skip(1)
            .filter(|w| level.quotient.eval(w).is_identity())
            .map(|w| s.format_word(w))
            .collect();
        injectivity.push(BallInjectivity {
            level: idx + 1,
            radius: idx + 1,
            elements: balls[idx].len(),
            pass: failures.is_empty(),
            failures,
        });
    }
    let mut well_defined = Vec::new();
    for i in 1..=k {
        for j in 1..=i {
            let r = tower.induced_map(i, j);
            well_defined.push(WellDefined {
                level: i,
                target: j,
                pass: r.is_ok(),
                detail: r.err().map(|e| e.to_string()),
            });
        }
    }
    let mut factorization = Vec::new();
    for l in 1..=k {
        for kk in 1..=l {
            for j in 1..=kk {
                let phi = &tower.levels[j - 1].quotient;
                let s = tower.levels[j - 1].presentation.alphabet();
                let mut failures = Vec::new();
                for w in &balls[kk - 1].elements {
                    let up = balls[l - 1]
                        .lookup(w)
                        .map(|e| &balls[l - 1].elements[e])
                        .expect("a ball element of level k lies in the level-l ball");
                    if phi.eval(w) != phi.eval(up) {
                        failures.push(s.format_word(w));
                    }
                }
                factorization.push(Factorization {
                    indices: (j, kk, l),
                    elements: balls[kk - 1].len(),
                    pass: failures.is_empty(),
                    failures,
                });
            }
        }
    }
    Ok(TowerCertificate {
        injectivity,
        well_defined,
        factorization,
    })
}
