//! Graphical presentations `⟨S | (Θ_i, l_i)⟩` and the small cancellation
//! parameter.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::alphabet::Alphabet;
use crate::error::{GscError, Result};
use crate::graph::LabelledGraph;

/// Exact rational small cancellation parameter in `(0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lambda(Ratio<u64>);

impl Lambda {
    pub fn new(numer: u64, denom: u64) -> Result<Self> {
        if numer == 0 || denom == 0 || numer > denom {
            return Err(GscError::Schema {
                path: "/lambda".into(),
                message: format!("lambda {numer}/{denom} is not in (0, 1]"),
            });
        }
        Ok(Lambda(Ratio::new(numer, denom)))
    }

    pub fn one_sixth() -> Self {
        Lambda(Ratio::new(1, 6))
    }

    pub fn one_twenty_fourth() -> Self {
        Lambda(Ratio::new(1, 24))
    }

    pub fn numer(self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(self) -> u64 {
        *self.0.denom()
    }

    /// Smallest integer length `L` with `L >= λ·girth`; pieces of this
    /// length or longer in a component of this girth break `C'(λ)`.
    pub fn forbidden_length(self, girth: usize) -> usize {
        let num = self.numer() * girth as u64;
        num.div_ceil(self.denom()) as usize
    }

    /// `len < λ·girth`, compared exactly.
    pub fn admits(self, len: usize, girth: usize) -> bool {
        (len as u128) * (self.denom() as u128) < (self.numer() as u128) * (girth as u128)
    }

    /// `λ·girth` as an exact fraction string.
    pub fn scaled(self, girth: usize) -> String {
        let r = Ratio::new(self.numer() * girth as u64, self.denom());
        if *r.denom() == 1 {
            r.numer().to_string()
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for Lambda {
    type Err = GscError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || GscError::Schema {
            path: "/lambda".into(),
            message: format!("expected \"p/q\", got {s:?}"),
        };
        let (p, q) = match s.trim().split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        let p: u64 = p.parse().map_err(|_| bad())?;
        let q: u64 = q.parse().map_err(|_| bad())?;
        Lambda::new(p, q)
    }
}

impl serde::Serialize for Lambda {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Lambda {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// An alphabet together with an ordered list of connected, validated
/// labelled components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphicalPresentation {
    alphabet: Alphabet,
    components: Vec<LabelledGraph>,
    lambda: Lambda,
}

impl GraphicalPresentation {
    pub fn new(alphabet: Alphabet, components: Vec<LabelledGraph>, lambda: Lambda) -> Result<Self> {
        let mut checked = Vec::with_capacity(components.len());
        for (i, c) in components.into_iter().enumerate() {
            let c = if c.alphabet() == &alphabet {
                c
            } else {
                c.with_alphabet(alphabet.clone())?
            };
            let c = c.validated()?;
            if !c.is_connected() {
                return Err(GscError::Precondition(format!(
                    "component {i} ({:?}) is not connected",
                    c.name()
                )));
            }
            checked.push(c);
        }
        Ok(GraphicalPresentation {
            alphabet,
            components: checked,
            lambda,
        })
    }

    /// Splits a single graph into its connected components.
    pub fn from_graph(graph: &LabelledGraph, lambda: Lambda) -> Result<Self> {
        let parts = if graph.vertex_count() == 0 {
            Vec::new()
        } else {
            graph.split_components()
        };
        Self::new(graph.alphabet().clone(), parts, lambda)
    }

    /// The free group on `alphabet`.
    pub fn free(alphabet: Alphabet) -> Self {
        GraphicalPresentation {
            alphabet,
            components: Vec::new(),
            lambda: Lambda::one_sixth(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn components(&self) -> &[LabelledGraph] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &LabelledGraph {
        &self.components[i]
    }

    pub fn lambda(&self) -> Lambda {
        self.lambda
    }

    pub fn with_lambda(mut self, lambda: Lambda) -> Self {
        self.lambda = lambda;
        self
    }

    /// Presentation with one more component appended.
    pub fn extended(&self, component: LabelledGraph) -> Result<Self> {
        let mut comps = self.components.clone();
        comps.push(component);
        Self::new(self.alphabet.clone(), comps, self.lambda)
    }

    /// Presentation with component `i` replaced.
    pub fn replaced(&self, i: usize, component: LabelledGraph) -> Result<Self> {
        let mut comps = self.components.clone();
        comps[i] = component;
        Self::new(self.alphabet.clone(), comps, self.lambda)
    }

    /// Presentation on the first `k` components.
    pub fn truncated(&self, k: usize) -> Self {
        GraphicalPresentation {
            alphabet: self.alphabet.clone(),
            components: self.components[..k].to_vec(),
            lambda: self.lambda,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_parsing_and_bounds() {
        let l: Lambda = "1/24".parse().unwrap();
        assert_eq!(l, Lambda::one_twenty_fourth());
        assert_eq!(l.to_string(), "1/24");
        assert!(l.admits(1, 25));
        assert!(!l.admits(1, 24));
        assert_eq!(l.forbidden_length(25), 2);
        assert_eq!(l.forbidden_length(24), 1);
        assert_eq!(Lambda::one_sixth().forbidden_length(12), 2);
        assert_eq!(Lambda::one_sixth().scaled(6), "1");
        assert_eq!(l.scaled(25), "25/24");
        assert!("0/3".parse::<Lambda>().is_err());
        assert!("x".parse::<Lambda>().is_err());
        assert_eq!("2/12".parse::<Lambda>().unwrap(), Lambda::one_sixth());
    }
}
